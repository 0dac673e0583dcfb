//! Nice tree decompositions and the s′-special variant.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use super::decomposition::{TdViolation, TreeDecomposition, UGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Leaf,
    IntroduceVertex(usize),
    /// Endpoints stored as `(min, max)`.
    IntroduceEdge(usize, usize),
    Drop(usize),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// Nodes are stored children-first: every child index is smaller than its
/// parent's, and the root is the last node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceDecomposition {
    nodes: Vec<NiceNode>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NiceViolation {
    #[error("node {0}: {1}")]
    Node(usize, &'static str),
    #[error("edge {{{0}, {1}}} introduced {2} times")]
    EdgeCount(usize, usize, usize),
    #[error("vertex {0} dropped {1} times")]
    DropCount(usize, usize),
    #[error("join node {0}: children share {1}")]
    JoinOverlap(usize, &'static str),
    #[error(transparent)]
    Decomposition(#[from] TdViolation),
}

fn sorted_insert(bag: &[usize], v: usize) -> Vec<usize> {
    let mut b = bag.to_vec();
    let p = b.binary_search(&v).unwrap_err();
    b.insert(p, v);
    b
}

fn sorted_remove(bag: &[usize], v: usize) -> Vec<usize> {
    bag.iter().copied().filter(|&x| x != v).collect()
}

struct Builder {
    nodes: Vec<NiceNode>,
    introduced: HashSet<(usize, usize)>,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    fn bag(&self, i: usize) -> &[usize] {
        &self.nodes[i].bag
    }

    /// Drops `v` from the top of `top`, first introducing every edge from
    /// `v` into the current bag that has not been introduced yet.
    fn drop_vertex(&mut self, g: &UGraph, mut top: usize, v: usize) -> usize {
        let bag = self.bag(top).to_vec();
        for &w in g.neighbors(v) {
            let e = (v.min(w), v.max(w));
            if bag.binary_search(&w).is_ok() && self.introduced.insert(e) {
                top = self.push(NodeKind::IntroduceEdge(e.0, e.1), bag.clone(), vec![top]);
            }
        }
        self.push(NodeKind::Drop(v), sorted_remove(&bag, v), vec![top])
    }

    /// Chain of drops then introduces that turns the bag at `top` into `target`.
    fn morph(&mut self, g: &UGraph, mut top: usize, target: &[usize]) -> usize {
        let current = self.bag(top).to_vec();
        for &v in current.iter().filter(|v| target.binary_search(v).is_err()) {
            top = self.drop_vertex(g, top, v);
        }
        for &v in target.iter().filter(|v| current.binary_search(v).is_err()) {
            let bag = sorted_insert(self.bag(top), v);
            top = self.push(NodeKind::IntroduceVertex(v), bag, vec![top]);
        }
        top
    }
}

/// Turns a valid decomposition into a nice one, rooted at bag 0.
///
/// Edges are introduced just below the drop of whichever endpoint goes
/// first in bottom-up order; at that point the other endpoint is still in
/// the bag.
pub fn make_nice(g: &UGraph, td: &TreeDecomposition) -> Result<NiceDecomposition, TdViolation> {
    td.validate(g)?;
    let mut b = Builder { nodes: Vec::new(), introduced: HashSet::new() };
    if td.is_empty() {
        b.push(NodeKind::Leaf, Vec::new(), Vec::new());
        return Ok(NiceDecomposition { nodes: b.nodes });
    }
    let adj = td.adjacency()?;
    // iterative post-order from bag 0
    let mut parent = vec![usize::MAX; td.len()];
    let mut order = Vec::with_capacity(td.len());
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in adj[x].iter().rev() {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut top = vec![usize::MAX; td.len()];
    for &x in order.iter().rev() {
        let bag = &td.bags()[x];
        let kids: Vec<usize> = adj[x].iter().copied().filter(|&y| y != 0 && parent[y] == x).collect();
        let mut tops = Vec::new();
        for &c in &kids {
            tops.push(b.morph(g, top[c], bag));
        }
        if tops.is_empty() {
            let leaf = b.push(NodeKind::Leaf, Vec::new(), Vec::new());
            tops.push(b.morph(g, leaf, bag));
        }
        let mut acc = tops[0];
        for &t in &tops[1..] {
            acc = b.push(NodeKind::Join, bag.clone(), vec![acc, t]);
        }
        top[x] = acc;
    }
    b.morph(g, top[0], &[]);
    debug_assert_eq!(b.introduced.len(), g.m());
    Ok(NiceDecomposition { nodes: b.nodes })
}

impl NiceDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &NiceNode {
        &self.nodes[i]
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|x| x.bag.len()).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut p = vec![None; self.nodes.len()];
        for (i, x) in self.nodes.iter().enumerate() {
            for &c in &x.children {
                p[c] = Some(i);
            }
        }
        p
    }

    /// The same tree as a plain decomposition (for re-validation).
    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|x| x.bag.clone()).collect();
        let tree = self.nodes.iter().enumerate().flat_map(|(i, x)| x.children.iter().map(move |&c| (c, i))).collect();
        TreeDecomposition::new(bags, tree)
    }

    /// Structural checks. `pinned` vertices (the s′ of a special
    /// decomposition) are allowed in leaf and root bags.
    pub fn check(&self, g: &UGraph, pinned: &[usize]) -> Result<(), NiceViolation> {
        self.to_tree_decomposition().validate(g)?;
        let pinned_bag: Vec<usize> = pinned.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let parents = self.parents();
        if parents[self.root()].is_some() {
            return Err(NiceViolation::Node(self.root(), "root has a parent"));
        }
        if self.nodes[self.root()].bag != pinned_bag {
            return Err(NiceViolation::Node(self.root(), "root bag is not empty"));
        }
        let mut edge_count = std::collections::HashMap::new();
        let mut drops = vec![0usize; g.n()];
        for (i, x) in self.nodes.iter().enumerate() {
            if x.children.iter().any(|&c| c >= i) {
                return Err(NiceViolation::Node(i, "child stored after parent"));
            }
            if i != self.root() && parents[i].is_none() {
                return Err(NiceViolation::Node(i, "detached node"));
            }
            let child_bag = |k: usize| &self.nodes[x.children[k]].bag;
            let ok = match x.kind {
                NodeKind::Leaf => x.children.is_empty() && x.bag == pinned_bag,
                NodeKind::IntroduceVertex(v) => {
                    x.children.len() == 1 && child_bag(0).binary_search(&v).is_err() && x.bag == sorted_insert(child_bag(0), v)
                }
                NodeKind::Drop(v) => {
                    drops[v] += 1;
                    x.children.len() == 1 && child_bag(0).binary_search(&v).is_ok() && x.bag == sorted_remove(child_bag(0), v)
                }
                NodeKind::IntroduceEdge(u, v) => {
                    *edge_count.entry((u, v)).or_insert(0usize) += 1;
                    x.children.len() == 1
                        && &x.bag == child_bag(0)
                        && x.bag.binary_search(&u).is_ok()
                        && x.bag.binary_search(&v).is_ok()
                        && g.has_edge(u, v)
                        && self.edge_sits_below_drop(&parents, i, u, v)
                }
                NodeKind::Join => x.children.len() == 2 && &x.bag == child_bag(0) && &x.bag == child_bag(1),
            };
            if !ok {
                return Err(NiceViolation::Node(i, "malformed node"));
            }
        }
        for &(u, v) in g.edges() {
            let c = edge_count.get(&(u, v)).copied().unwrap_or(0);
            if c != 1 {
                return Err(NiceViolation::EdgeCount(u, v, c));
            }
        }
        for (v, &c) in drops.iter().enumerate() {
            if pinned.contains(&v) {
                continue;
            }
            if c != 1 {
                return Err(NiceViolation::DropCount(v, c));
            }
        }
        self.check_join_disjointness()
    }

    fn edge_sits_below_drop(&self, parents: &[Option<usize>], mut i: usize, u: usize, v: usize) -> bool {
        while let Some(p) = parents[i] {
            match self.nodes[p].kind {
                NodeKind::IntroduceEdge(..) => i = p,
                NodeKind::Drop(w) => return w == u || w == v,
                _ => return false,
            }
        }
        false
    }

    /// At each join, the two subtrees drop disjoint vertex sets and
    /// introduce disjoint edge sets.
    pub fn check_join_disjointness(&self) -> Result<(), NiceViolation> {
        let mut dropped: Vec<BTreeSet<usize>> = Vec::with_capacity(self.nodes.len());
        let mut edges: Vec<BTreeSet<(usize, usize)>> = Vec::with_capacity(self.nodes.len());
        for (i, x) in self.nodes.iter().enumerate() {
            let (mut d, mut e) = match x.children.as_slice() {
                [] => (BTreeSet::new(), BTreeSet::new()),
                [c] => (std::mem::take(&mut dropped[*c]), std::mem::take(&mut edges[*c])),
                [a, b] => {
                    let (da, db) = (std::mem::take(&mut dropped[*a]), std::mem::take(&mut dropped[*b]));
                    let (ea, eb) = (std::mem::take(&mut edges[*a]), std::mem::take(&mut edges[*b]));
                    if !da.is_disjoint(&db) {
                        return Err(NiceViolation::JoinOverlap(i, "a dropped vertex"));
                    }
                    if !ea.is_disjoint(&eb) {
                        return Err(NiceViolation::JoinOverlap(i, "an introduced edge"));
                    }
                    (da.union(&db).copied().collect(), ea.union(&eb).copied().collect())
                }
                _ => return Err(NiceViolation::Node(i, "more than two children")),
            };
            match x.kind {
                NodeKind::Drop(v) => {
                    d.insert(v);
                }
                NodeKind::IntroduceEdge(u, v) => {
                    e.insert((u, v));
                }
                _ => {}
            }
            dropped.push(d);
            edges.push(e);
        }
        Ok(())
    }
}

/// Adds a pendant `s′` (new vertex `n`) at `s`, puts `s′` in every bag and
/// introduces `{s, s′}` directly below the drop of `s`.
pub fn make_special(g: &UGraph, nd: &NiceDecomposition, s: usize) -> (UGraph, NiceDecomposition, usize) {
    assert!(s < g.n(), "root vertex {s} is not in the graph");
    let sp = g.n();
    let gs = UGraph::new(sp + 1, g.edges().iter().copied().chain([(s, sp)])).expect("pendant edge is new");
    let mut nodes: Vec<NiceNode> = Vec::with_capacity(nd.len() + 1);
    let mut remap = vec![0usize; nd.len()];
    for (i, x) in nd.nodes().iter().enumerate() {
        let mut children: Vec<usize> = x.children.iter().map(|&c| remap[c]).collect();
        let bag = sorted_insert(&x.bag, sp);
        if x.kind == NodeKind::Drop(s) {
            let below = &nodes[children[0]].bag;
            let ie = NiceNode { kind: NodeKind::IntroduceEdge(s, sp), bag: below.clone(), children };
            nodes.push(ie);
            children = vec![nodes.len() - 1];
        }
        nodes.push(NiceNode { kind: x.kind, bag, children });
        remap[i] = nodes.len() - 1;
    }
    (gs, NiceDecomposition { nodes }, sp)
}
