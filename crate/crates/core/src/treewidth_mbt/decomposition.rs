//! Undirected graphs and (plain) tree decompositions.

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UGraphError {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
}

/// A simple undirected graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UGraph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl UGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, UGraphError> {
        let mut adj = vec![Vec::new(); n];
        let mut list = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(UGraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(UGraphError::SelfLoop(u));
            }
            list.push((u.min(v), u.max(v)));
            adj[u].push(v);
            adj[v].push(u);
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(UGraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        adj.iter_mut().for_each(|l| l.sort_unstable());
        Ok(UGraph { adj, edges: list })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(min, max)` pairs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n()
    }
}

/// The first condition a decomposition breaks.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TdViolation {
    #[error("decomposition tree is not a tree: {0}")]
    NotATree(&'static str),
    #[error("bag {bag} mentions vertex {vertex}, which is not in the graph")]
    UnknownVertex { bag: usize, vertex: usize },
    #[error("T1 violated: vertex {0} is in no bag")]
    T1(usize),
    #[error("T2 violated: edge {{{0}, {1}}} is in no bag")]
    T2(usize, usize),
    #[error("T3 violated: bags containing vertex {0} are not connected")]
    T3(usize),
}

/// Bags on an unrooted tree. Bags are kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    tree: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, tree: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|b| b.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        TreeDecomposition { bags, tree }
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Largest bag size minus one, 0 for no bags.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    /// Tree adjacency, or why the tree edges do not form a tree.
    pub fn adjacency(&self) -> Result<Vec<Vec<usize>>, TdViolation> {
        let t = self.bags.len();
        if t == 0 {
            return if self.tree.is_empty() { Ok(Vec::new()) } else { Err(TdViolation::NotATree("edges without bags")) };
        }
        if self.tree.len() != t - 1 {
            return Err(TdViolation::NotATree("edge count is not bags - 1"));
        }
        let mut adj = vec![Vec::new(); t];
        for &(a, b) in &self.tree {
            if a >= t || b >= t {
                return Err(TdViolation::NotATree("edge endpoint is not a bag"));
            }
            if a == b {
                return Err(TdViolation::NotATree("self-loop"));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; t];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.contains(&false) {
            return Err(TdViolation::NotATree("disconnected"));
        }
        Ok(adj)
    }

    pub fn validate(&self, g: &UGraph) -> Result<(), TdViolation> {
        let adj = self.adjacency()?;
        let n = g.n();
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    return Err(TdViolation::UnknownVertex { bag: i, vertex: v });
                }
                holders[v].push(i);
            }
        }
        if let Some(v) = holders.iter().position(Vec::is_empty) {
            return Err(TdViolation::T1(v));
        }
        for &(u, v) in g.edges() {
            if !holders[u].iter().any(|&i| self.bags[i].binary_search(&v).is_ok()) {
                return Err(TdViolation::T2(u, v));
            }
        }
        let mut mark = vec![usize::MAX; self.bags.len()];
        for (v, hs) in holders.iter().enumerate() {
            // flood from the first holder through holders only
            let mut stack = vec![hs[0]];
            mark[hs[0]] = v;
            let mut reached = 1;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if mark[y] != v && self.bags[y].binary_search(&v).is_ok() {
                        mark[y] = v;
                        reached += 1;
                        stack.push(y);
                    }
                }
            }
            if reached != hs.len() {
                return Err(TdViolation::T3(v));
            }
        }
        Ok(())
    }
}

/// Min-degree elimination, smallest id on ties. Components are chained
/// together through their last bags.
pub fn heuristic_decomposition(g: &UGraph) -> TreeDecomposition {
    let n = g.n();
    let mut nbrs: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut eliminated = vec![false; n];
    let mut step_of = vec![usize::MAX; n];
    let mut bags = Vec::with_capacity(n);
    let mut later_nbrs = Vec::with_capacity(n);
    for step in 0..n {
        let v = (0..n).filter(|&v| !eliminated[v]).min_by_key(|&v| (nbrs[v].len(), v)).unwrap();
        let ns: Vec<usize> = nbrs[v].iter().copied().collect();
        for &a in &ns {
            nbrs[a].remove(&v);
            for &b in &ns {
                if a != b {
                    nbrs[a].insert(b);
                }
            }
        }
        eliminated[v] = true;
        step_of[v] = step;
        let mut bag = ns.clone();
        bag.push(v);
        bags.push(bag);
        later_nbrs.push(ns);
    }
    let mut tree = Vec::new();
    let mut last_root = None;
    for (step, ns) in later_nbrs.iter().enumerate() {
        match ns.iter().map(|&u| step_of[u]).min() {
            Some(parent) => tree.push((step, parent)),
            None => {
                if let Some(r) = last_root {
                    tree.push((r, step));
                }
                last_root = Some(step);
            }
        }
    }
    TreeDecomposition::new(bags, tree)
}
