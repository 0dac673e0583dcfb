//! The γ-alphabet size of a DAG under a fixed topological order.
//!
//! Three routes to the same number: the greedy labelling, the longest path
//! in the weighted tournament `H(G, γ)`, and the least point of a system of
//! difference constraints (see [`constraints`]).

pub mod constraints;

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use thiserror::Error;

use crate::permdag::{
    is_umbrella_free, transitivity_violation, DiGraph, GraphError, MissingShortcut, TopOrder, Umbrella,
};
use crate::sequences::Label;

pub use constraints::{min_alpha_lp, polyhedron_feasible, satisfies, Constraint, Feasibility};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("H(G, γ) has a cycle through vertex {0}; the order is not umbrella-free")]
    CyclicTournament(usize),
}

/// An alphabet size, possibly infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Alpha {
    Finite(u32),
    Infinite,
}

impl Alpha {
    pub fn finite(self) -> Option<u32> {
        match self {
            Alpha::Finite(a) => Some(a),
            Alpha::Infinite => None,
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Finite(a) => write!(f, "{a}"),
            Alpha::Infinite => write!(f, "inf"),
        }
    }
}

/// Why no sequence realizes `(G, γ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Obstruction {
    NotTransitive(MissingShortcut),
    Umbrella(Umbrella),
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::NotTransitive(m) => {
                write!(f, "not transitive: arcs ({}, {}), ({}, {}) but no ({}, {})", m.u, m.v, m.v, m.w, m.u, m.w)
            }
            Obstruction::Umbrella(u) => write!(f, "umbrella ({}, {}, {})", u.u, u.w, u.v),
        }
    }
}

/// Labels produced by [`greedy_assign`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    /// `sigma[v]` is the label of vertex `v`.
    pub sigma: Vec<Label>,
    pub alpha: u32,
    /// Vertices in the order they were extracted.
    pub processed: Vec<usize>,
}

impl Assignment {
    /// The labels read off in γ-order.
    pub fn sequence(&self, t: &TopOrder) -> Vec<Label> {
        t.order().iter().map(|&v| self.sigma[v]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GreedyOutcome {
    Finite(Assignment),
    Infinite(Obstruction),
}

impl GreedyOutcome {
    pub fn alpha(&self) -> Alpha {
        match self {
            GreedyOutcome::Finite(a) => Alpha::Finite(a.alpha),
            GreedyOutcome::Infinite(_) => Alpha::Infinite,
        }
    }

    pub fn assignment(&self) -> Option<&Assignment> {
        match self {
            GreedyOutcome::Finite(a) => Some(a),
            GreedyOutcome::Infinite(_) => None,
        }
    }
}

/// Checks transitivity and umbrella-freeness; `None` means a sequence exists.
pub fn obstruction(g: &DiGraph, t: &TopOrder) -> Result<Option<Obstruction>, GraphError> {
    t.check_topological(g)?;
    if let Some(m) = transitivity_violation(g) {
        return Ok(Some(Obstruction::NotTransitive(m)));
    }
    Ok(is_umbrella_free(g, t).err().map(Obstruction::Umbrella))
}

/// The leftmost vertex that receives an arc from every later vertex.
pub fn lfsc(g: &DiGraph, t: &TopOrder) -> Result<usize, AlphabetError> {
    if g.n() == 0 {
        return Err(AlphabetError::EmptyGraph);
    }
    t.check_topological(g)?;
    let n = g.n();
    let v = (0..n)
        .map(|p| t.vertex_at(p))
        .find(|&u| (t.position(u) + 1..n).all(|q| g.has_arc(t.vertex_at(q), u)))
        .expect("the last vertex is always fully suffix connected");
    Ok(v)
}

/// Counters that track which remaining vertices are fully suffix connected.
struct SuffixCounts<'a> {
    g: &'a DiGraph,
    t: &'a TopOrder,
    alive: Vec<bool>,
    later: Vec<usize>,
    from_later: Vec<usize>,
}

impl<'a> SuffixCounts<'a> {
    fn new(g: &'a DiGraph, t: &'a TopOrder) -> Self {
        let n = g.n();
        SuffixCounts {
            g,
            t,
            alive: vec![true; n],
            later: (0..n).map(|v| n - 1 - t.position(v)).collect(),
            from_later: (0..n).map(|v| g.in_neighbors(v).len()).collect(),
        }
    }

    fn leftmost(&self) -> Option<usize> {
        (0..self.g.n())
            .map(|p| self.t.vertex_at(p))
            .find(|&u| self.alive[u] && self.later[u] == self.from_later[u])
    }

    fn remove(&mut self, v: usize) {
        self.alive[v] = false;
        for p in 0..self.t.position(v) {
            self.later[self.t.vertex_at(p)] -= 1;
        }
        for &u in self.g.out_neighbors(v) {
            self.from_later[u] -= 1;
        }
    }
}

/// Greedy labelling: repeatedly strip the leftmost fully suffix connected
/// vertex, bumping the label whenever it sits left of the previous one.
///
/// Errors only when `t` is not a topological order of `g`.
pub fn greedy_assign(g: &DiGraph, t: &TopOrder) -> Result<GreedyOutcome, GraphError> {
    if let Some(o) = obstruction(g, t)? {
        return Ok(GreedyOutcome::Infinite(o));
    }
    let n = g.n();
    let mut counts = SuffixCounts::new(g, t);
    let mut sigma = vec![0; n];
    let mut processed = Vec::with_capacity(n);
    let mut alpha = 0;
    let mut last_pos = None;
    while let Some(v) = counts.leftmost() {
        let p = t.position(v);
        if last_pos.is_none_or(|q| p < q) {
            alpha += 1;
        }
        sigma[v] = alpha;
        processed.push(v);
        last_pos = Some(p);
        counts.remove(v);
    }
    debug_assert_eq!(processed.len(), n);
    Ok(GreedyOutcome::Finite(Assignment { sigma, alpha, processed }))
}

/// `H(G, γ)`: the arcs of `G` at weight 0 plus a weight-1 forward arc for
/// every pair that `G` leaves unconnected.
#[derive(Clone, Debug)]
pub struct Tournament {
    n: usize,
    base: Vec<(usize, usize)>,
    forward: Vec<(usize, usize)>,
    out: Vec<Vec<(usize, u32)>>,
}

impl Tournament {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &[(usize, usize)] {
        &self.base
    }

    pub fn forward(&self) -> &[(usize, usize)] {
        &self.forward
    }

    /// Outgoing `(head, weight)` pairs sorted by head.
    pub fn out(&self, u: usize) -> &[(usize, u32)] {
        &self.out[u]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<u32> {
        self.out[u].binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| self.out[u][i].1)
    }

    /// Total weight of a vertex walk, `None` if some step is not an arc.
    pub fn path_weight(&self, path: &[usize]) -> Option<u32> {
        path.windows(2).map(|w| self.weight(w[0], w[1])).sum()
    }

    /// A vertex on a directed cycle, if any.
    pub fn find_cycle_vertex(&self) -> Option<usize> {
        let mut indeg = vec![0usize; self.n];
        self.out.iter().flatten().for_each(|&(v, _)| indeg[v] += 1);
        let mut stack: Vec<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    stack.push(v);
                }
            }
        }
        indeg.iter().position(|&d| d > 0)
    }
}

pub fn build_tournament(g: &DiGraph, t: &TopOrder) -> Result<Tournament, GraphError> {
    t.check_topological(g)?;
    let n = g.n();
    let base: Vec<_> = g.arcs().collect();
    let mut forward = Vec::new();
    let mut out = vec![Vec::new(); n];
    for &(v, u) in &base {
        out[v].push((u, 0));
    }
    for pu in 0..n {
        let u = t.vertex_at(pu);
        for pv in pu + 1..n {
            let v = t.vertex_at(pv);
            if !g.has_arc(v, u) {
                forward.push((u, v));
                out[u].push((v, 1));
            }
        }
    }
    out.iter_mut().for_each(|l| l.sort_unstable());
    assert_eq!(base.len() + forward.len(), n * n.saturating_sub(1) / 2, "H(G, γ) must be a tournament");
    forward.sort_unstable();
    Ok(Tournament { n, base, forward, out })
}

/// `1 + ` the heaviest path in `H(G, γ)`, with that path (0 for no vertices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinMax {
    pub value: u32,
    pub path: Vec<usize>,
}

/// Longest path by topological DP. Predecessor ties go to the smallest id,
/// and so does the choice of endpoint.
pub fn minmax_alpha(g: &DiGraph, t: &TopOrder) -> Result<MinMax, AlphabetError> {
    let h = build_tournament(g, t)?;
    let n = h.n();
    if n == 0 {
        return Ok(MinMax { value: 0, path: Vec::new() });
    }
    let mut indeg = vec![0usize; n];
    h.out.iter().flatten().for_each(|&(v, _)| indeg[v] += 1);
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut best = vec![0u32; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut done = 0;
    while let Some(Reverse(u)) = ready.pop() {
        done += 1;
        for &(v, w) in h.out(u) {
            let cand = best[u] + w;
            if cand > best[v] || (cand == best[v] && pred[v].is_some_and(|p| u < p)) {
                best[v] = cand;
                pred[v] = Some(u);
            }
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.push(Reverse(v));
            }
        }
    }
    if done < n {
        let v = h.find_cycle_vertex().expect("Kahn stalled on a cycle");
        return Err(AlphabetError::CyclicTournament(v));
    }
    let top = *best.iter().max().unwrap();
    let mut v = best.iter().position(|&b| b == top).unwrap();
    let mut path = vec![v];
    while let Some(p) = pred[v] {
        path.push(p);
        v = p;
    }
    path.reverse();
    Ok(MinMax { value: top + 1, path })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permdag::{build_permdag, ordered_isomorphic};

    /// a, b, c, d = 0..4 with arcs b→a, d→a, d→c and γ = (c, a, d, b).
    fn two_letter() -> (DiGraph, TopOrder) {
        let g = DiGraph::new(4, [(1, 0), (3, 0), (3, 2)]).unwrap();
        (g, TopOrder::new(vec![2, 0, 3, 1]).unwrap())
    }

    /// Positions 1..8 as vertices 0..7.
    fn suffix_example() -> DiGraph {
        let arcs = [(4, 3), (5, 3), (6, 3), (7, 3), (8, 3), (6, 5), (7, 5), (8, 5), (2, 1), (4, 1)];
        DiGraph::new(8, arcs.iter().map(|&(a, b)| (a - 1, b - 1))).unwrap()
    }

    fn complete_backward(n: usize) -> DiGraph {
        DiGraph::new(n, (0..n).flat_map(|j| (0..j).map(move |i| (j, i)))).unwrap()
    }

    #[test]
    fn lfsc_examples() {
        assert_eq!(lfsc(&suffix_example(), &TopOrder::identity(8)), Ok(2));
        let one = DiGraph::new(1, []).unwrap();
        assert_eq!(lfsc(&one, &TopOrder::identity(1)), Ok(0));
        assert_eq!(lfsc(&complete_backward(5), &TopOrder::identity(5)), Ok(0));
        let empty = DiGraph::new(0, []).unwrap();
        assert_eq!(lfsc(&empty, &TopOrder::identity(0)), Err(AlphabetError::EmptyGraph));
    }

    #[test]
    fn greedy_two_letter() {
        let (g, t) = two_letter();
        let out = greedy_assign(&g, &t).unwrap();
        let a = out.assignment().unwrap();
        assert_eq!(a.alpha, 2);
        assert_eq!(a.sequence(&t), vec![2, 1, 2, 1]);
        assert_eq!(a.processed, vec![0, 1, 2, 3]);
        assert!(ordered_isomorphic(&g, &t, &a.sequence(&t)));
    }

    #[test]
    fn greedy_permdag_orders() {
        let g = build_permdag(&[2, 3, 1, 2]);
        assert_eq!(greedy_assign(&g, &TopOrder::identity(4)).unwrap().alpha(), Alpha::Finite(3));
        // the order under which g is PermDAG(2, 1, 2, 1)
        let t = TopOrder::new(vec![2, 0, 3, 1]).unwrap();
        let a = greedy_assign(&g, &t).unwrap();
        assert_eq!(a.alpha(), Alpha::Finite(2));
        assert_eq!(a.assignment().unwrap().sequence(&t), vec![2, 1, 2, 1]);
    }

    #[test]
    fn greedy_trivial_families() {
        let g = DiGraph::new(4, []).unwrap();
        let t = TopOrder::identity(4);
        let a = greedy_assign(&g, &t).unwrap();
        assert_eq!(a.assignment().unwrap().sequence(&t), vec![4, 3, 2, 1]);
        let a = greedy_assign(&complete_backward(5), &TopOrder::identity(5)).unwrap();
        assert_eq!(a.assignment().unwrap().sigma, vec![1; 5]);
        assert_eq!(a.alpha(), Alpha::Finite(1));
    }

    #[test]
    fn greedy_rejects_obstructions() {
        let g = DiGraph::new(4, [(1, 0), (2, 0), (3, 0), (3, 1)]).unwrap();
        let t = TopOrder::identity(4);
        assert_eq!(
            greedy_assign(&g, &t).unwrap(),
            GreedyOutcome::Infinite(Obstruction::Umbrella(Umbrella { u: 1, w: 2, v: 3 }))
        );
        let path = DiGraph::new(3, [(2, 1), (1, 0)]).unwrap();
        let out = greedy_assign(&path, &TopOrder::identity(3)).unwrap();
        assert!(matches!(out, GreedyOutcome::Infinite(Obstruction::NotTransitive(_))));
        assert!(greedy_assign(&path, &TopOrder::new(vec![2, 1, 0]).unwrap()).is_err());
        assert_eq!(Alpha::Infinite.to_string(), "inf");
    }

    #[test]
    fn tournament_examples() {
        let g = DiGraph::new(2, []).unwrap();
        let h = build_tournament(&g, &TopOrder::identity(2)).unwrap();
        assert_eq!(h.forward(), &[(0, 1)]);
        assert!(h.base().is_empty());
        let (g, t) = two_letter();
        let h = build_tournament(&g, &t).unwrap();
        assert_eq!((h.base().len(), h.forward().len()), (3, 3));
        assert!(h.find_cycle_vertex().is_none());
        let h = build_tournament(&complete_backward(4), &TopOrder::identity(4)).unwrap();
        assert!(h.forward().is_empty());
    }

    #[test]
    fn minmax_examples() {
        let (g, t) = two_letter();
        let m = minmax_alpha(&g, &t).unwrap();
        assert_eq!(m.value, 2);
        let h = build_tournament(&g, &t).unwrap();
        assert_eq!(h.path_weight(&m.path), Some(1));
        let g = DiGraph::new(4, []).unwrap();
        let m = minmax_alpha(&g, &TopOrder::identity(4)).unwrap();
        assert_eq!((m.value, m.path), (4, vec![0, 1, 2, 3]));
        assert_eq!(minmax_alpha(&complete_backward(4), &TopOrder::identity(4)).unwrap().value, 1);
    }

    #[test]
    fn minmax_detects_cycle() {
        // umbrella (1, 2, 3): forward 1→2, forward 2→3, base 3→1
        let g = DiGraph::new(4, [(1, 0), (2, 0), (3, 0), (3, 1)]).unwrap();
        assert!(matches!(
            minmax_alpha(&g, &TopOrder::identity(4)),
            Err(AlphabetError::CyclicTournament(_))
        ));
    }

    #[test]
    fn certificate_path_is_reverse_processing() {
        let s = [3, 1, 2, 2, 1, 3, 1];
        let g = build_permdag(&s);
        let t = TopOrder::identity(s.len());
        let a = greedy_assign(&g, &t).unwrap().assignment().unwrap().clone();
        let h = build_tournament(&g, &t).unwrap();
        let rev: Vec<_> = a.processed.iter().rev().copied().collect();
        assert_eq!(h.path_weight(&rev), Some(a.alpha - 1));
        // the lfsc never has an outgoing arc among the vertices still present
        for (i, &v) in a.processed.iter().enumerate() {
            assert!(g.out_neighbors(v).iter().all(|u| a.processed[..i].contains(u)));
        }
    }
}
