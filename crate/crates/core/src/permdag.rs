//! Directed graphs, topological orders and permutation DAGs.

use thiserror::Error;

use crate::sequences::Label;

/// Graphs up to this size get a bit-matrix for O(1) arc lookup.
const MATRIX_LIMIT: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(usize, usize),
    #[error("order has length {got}, expected {expected}")]
    OrderLength { got: usize, expected: usize },
    #[error("order is not a permutation (vertex {0} repeated or missing)")]
    NotPermutation(usize),
    #[error("arc ({from}, {to}) points forward in the order")]
    NotTopological { from: usize, to: usize },
}

/// A simple directed graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiGraph {
    n: usize,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    matrix: Option<Vec<u64>>,
}

impl DiGraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (u, v) in arcs {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            out[u].push(v);
            inc[v].push(u);
        }
        for (u, list) in out.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateArc(u, w[0]));
            }
        }
        inc.iter_mut().for_each(|l| l.sort_unstable());
        let matrix = (n <= MATRIX_LIMIT).then(|| {
            let words = n.div_ceil(64);
            let mut bits = vec![0u64; n * words];
            for (u, list) in out.iter().enumerate() {
                for &v in list {
                    bits[u * words + v / 64] |= 1 << (v % 64);
                }
            }
            bits
        });
        Ok(DiGraph { n, out, inc, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        match &self.matrix {
            Some(bits) => {
                let words = self.n.div_ceil(64);
                bits[u * words + v / 64] >> (v % 64) & 1 == 1
            }
            None => self.out[u].binary_search(&v).is_ok(),
        }
    }

    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    pub fn in_neighbors(&self, u: usize) -> &[usize] {
        &self.inc[u]
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(u, l)| l.iter().map(move |&v| (u, v)))
    }

    /// Kahn's algorithm; `None` when the graph has a cycle.
    pub fn is_acyclic(&self) -> bool {
        let mut indeg: Vec<usize> = self.inc.iter().map(Vec::len).collect();
        let mut stack: Vec<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(u) = stack.pop() {
            seen += 1;
            for &v in &self.out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    stack.push(v);
                }
            }
        }
        seen == self.n
    }
}

/// A vertex order: `order[p]` is the vertex at (0-based) position `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopOrder {
    order: Vec<usize>,
    position: Vec<usize>,
}

impl TopOrder {
    pub fn new(order: Vec<usize>) -> Result<Self, GraphError> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (p, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(GraphError::NotPermutation(v));
            }
            position[v] = p;
        }
        Ok(TopOrder { order, position })
    }

    pub fn identity(n: usize) -> Self {
        TopOrder { order: (0..n).collect(), position: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// 0-based position of `v`.
    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    /// Vertex at 0-based position `p`.
    pub fn vertex_at(&self, p: usize) -> usize {
        self.order[p]
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Checks that the order fits `g` and every arc points backwards.
    pub fn check_topological(&self, g: &DiGraph) -> Result<(), GraphError> {
        if self.len() != g.n() {
            return Err(GraphError::OrderLength { got: self.len(), expected: g.n() });
        }
        match g.arcs().find(|&(u, v)| self.position[v] >= self.position[u]) {
            Some((from, to)) => Err(GraphError::NotTopological { from, to }),
            None => Ok(()),
        }
    }
}

/// `PermDAG(σ)`: vertex `j` has an arc to every earlier `i` with `σ(i) <= σ(j)`.
pub fn build_permdag(s: &[Label]) -> DiGraph {
    let arcs = (0..s.len()).flat_map(|j| (0..j).filter(move |&i| s[i] <= s[j]).map(move |i| (j, i)));
    DiGraph::new(s.len(), arcs).expect("permdag arcs are simple")
}

/// A witness `(u, v, w)` with arcs `(u, v)` and `(v, w)` but no `(u, w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MissingShortcut {
    pub u: usize,
    pub v: usize,
    pub w: usize,
}

pub fn transitivity_violation(g: &DiGraph) -> Option<MissingShortcut> {
    for (u, v) in g.arcs() {
        if let Some(&w) = g.out_neighbors(v).iter().find(|&&w| !g.has_arc(u, w)) {
            return Some(MissingShortcut { u, v, w });
        }
    }
    None
}

pub fn is_transitively_closed(g: &DiGraph) -> bool {
    transitivity_violation(g).is_none()
}

/// An umbrella `(u, w, v)`: `(v, u)` is an arc, `w` sits strictly between
/// them in the order, and neither `(w, u)` nor `(v, w)` is an arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Umbrella {
    pub u: usize,
    pub w: usize,
    pub v: usize,
}

/// `Ok(())` if `t` is umbrella-free for `g`, else the first umbrella found
/// scanning `u`, then `v`, then `w` by position.
pub fn is_umbrella_free(g: &DiGraph, t: &TopOrder) -> Result<(), Umbrella> {
    for pu in 0..t.len() {
        let u = t.vertex_at(pu);
        let mut sources: Vec<usize> = g.in_neighbors(u).to_vec();
        sources.sort_by_key(|&v| t.position(v));
        for v in sources {
            for pw in pu + 1..t.position(v) {
                let w = t.vertex_at(pw);
                if !g.has_arc(w, u) && !g.has_arc(v, w) {
                    return Err(Umbrella { u, w, v });
                }
            }
        }
    }
    Ok(())
}

/// Is `PermDAG(s)` equal to `g` under `t_i ↦ γ⁻¹(i)`?
pub fn ordered_isomorphic(g: &DiGraph, t: &TopOrder, s: &[Label]) -> bool {
    let n = g.n();
    if s.len() != n || t.len() != n {
        return false;
    }
    for j in 0..n {
        let vj = t.vertex_at(j);
        for (i, &si) in s.iter().enumerate().take(j) {
            let vi = t.vertex_at(i);
            if g.has_arc(vi, vj) || g.has_arc(vj, vi) != (si <= s[j]) {
                return false;
            }
        }
    }
    true
}
