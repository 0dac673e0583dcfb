//! Maximum binary trees (connected, acyclic, degree at most 3) in graphs of
//! bounded treewidth.

pub mod decomposition;
pub mod dp;
pub mod nice;

use std::collections::BTreeSet;

use thiserror::Error;

pub use decomposition::{heuristic_decomposition, TdViolation, TreeDecomposition, UGraph, UGraphError};
pub use dp::{decode, encode, mbt_dp, merge_partitions, DpKey, DpState, MbtDp, MbtError, MAX_BAG};
pub use nice::{make_nice, make_special, NiceDecomposition, NiceNode, NiceViolation, NodeKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("root {0} is not a vertex of the graph")]
    UnknownRoot(usize),
    #[error(transparent)]
    Decomposition(#[from] TdViolation),
    #[error(transparent)]
    Dp(#[from] MbtError),
}

/// A binary tree found in the input graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryTree {
    /// Vertex count.
    pub size: usize,
    /// Edges as `(min, max)`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Vertices, sorted (needed when `edges` is empty).
    pub vertices: Vec<usize>,
}

/// Largest binary tree containing `s` in which `s` has degree at most 2.
pub fn rooted_mbt(g: &UGraph, td: &TreeDecomposition, s: usize) -> Result<BinaryTree, TreeError> {
    if s >= g.n() {
        return Err(TreeError::UnknownRoot(s));
    }
    let nd = make_nice(g, td)?;
    let (gs, sd, sp) = make_special(g, &nd, s);
    let sol = mbt_dp(&gs, &sd, sp)?;
    let edges: Vec<_> = sol.tree.iter().copied().filter(|&(u, v)| u != sp && v != sp).collect();
    let mut vertices: BTreeSet<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    vertices.insert(s);
    Ok(BinaryTree { size: vertices.len(), edges, vertices: vertices.into_iter().collect() })
}

/// Complete-ish binary tree on `count` vertices, heap-indexed from `first`.
fn padding_tree(first: usize, count: usize) -> Vec<(usize, usize)> {
    (1..count).map(|i| (first + (i - 1) / 2, first + i)).collect()
}

/// Largest binary tree anywhere in `g`.
///
/// Adds a hub `s` adjacent to every vertex plus a padding binary tree with
/// `|E(g)|` edges hanging off `s`, solves the rooted problem at `s` and keeps
/// the largest piece on the graph side of `s`.
pub fn unrooted_mbt(g: &UGraph, td: &TreeDecomposition) -> Result<BinaryTree, TreeError> {
    td.validate(g)?;
    let n = g.n();
    if n == 0 {
        return Ok(BinaryTree { size: 0, edges: Vec::new(), vertices: Vec::new() });
    }
    let s = n;
    let first = n + 1;
    let count = g.m() + 1;
    let pad = padding_tree(first, count);
    let edges = g.edges().iter().copied().chain((0..n).map(|v| (v, s))).chain([(s, first)]).chain(pad.iter().copied());
    let big = UGraph::new(first + count, edges).expect("hub and padding edges are new");

    let mut bags: Vec<Vec<usize>> = td.bags().iter().map(|b| b.iter().copied().chain([s]).collect()).collect();
    let mut tree = td.tree_edges().to_vec();
    let anchor = bags.len();
    bags.push(vec![s, first]);
    tree.push((0, anchor));
    // bag of padding edge i sits under the bag of its parent edge
    for (i, &(p, c)) in pad.iter().enumerate() {
        bags.push(vec![s, p, c]);
        let above = if p == first { anchor } else { anchor + 1 + (p - first - 1) };
        tree.push((above, anchor + 1 + i));
    }
    let big_td = TreeDecomposition::new(bags, tree);

    let t = rooted_mbt(&big, &big_td, s)?;
    let mut adj = vec![Vec::new(); big.n()];
    for &(u, v) in &t.edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut best: Option<BinaryTree> = None;
    for &v in adj[s].iter().filter(|&&v| v < n) {
        let mut seen = BTreeSet::from([v]);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if w != s && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        let piece_edges: Vec<_> = t.edges.iter().copied().filter(|(a, b)| seen.contains(a) && seen.contains(b)).collect();
        let piece = BinaryTree { size: seen.len(), edges: piece_edges, vertices: seen.into_iter().collect() };
        if best.as_ref().is_none_or(|b| piece.size > b.size) {
            best = Some(piece);
        }
    }
    let best = best.expect("the hub always reaches the graph");
    debug_assert!(best.vertices.iter().all(|&v| v < n));
    Ok(best)
}

/// What is wrong with a claimed binary tree.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeDefect {
    #[error("{{{0}, {1}}} is not an edge of the graph")]
    NotAnEdge(usize, usize),
    #[error("vertex {0} has degree {1}")]
    Degree(usize, usize),
    #[error("edges contain a cycle")]
    Cycle,
    #[error("edges are not connected")]
    Disconnected,
    #[error("root {0} is missing or has degree above 2")]
    Root(usize),
    #[error("size {claimed} does not match {actual} vertices")]
    Size { claimed: usize, actual: usize },
}

/// Independent check of a tree certificate against `g`.
pub fn check_binary_tree(g: &UGraph, tree: &BinaryTree, root: Option<usize>) -> Result<(), TreeDefect> {
    let mut verts: BTreeSet<usize> = tree.vertices.iter().copied().collect();
    let mut deg = std::collections::BTreeMap::new();
    for &(u, v) in &tree.edges {
        if u >= g.n() || v >= g.n() || !g.has_edge(u, v) {
            return Err(TreeDefect::NotAnEdge(u, v));
        }
        verts.insert(u);
        verts.insert(v);
        *deg.entry(u).or_insert(0usize) += 1;
        *deg.entry(v).or_insert(0usize) += 1;
    }
    if let Some((&v, &d)) = deg.iter().find(|(_, &d)| d > 3) {
        return Err(TreeDefect::Degree(v, d));
    }
    if verts.len() != tree.size {
        return Err(TreeDefect::Size { claimed: tree.size, actual: verts.len() });
    }
    if !verts.is_empty() && tree.edges.len() + 1 != verts.len() {
        return Err(if tree.edges.len() >= verts.len() { TreeDefect::Cycle } else { TreeDefect::Disconnected });
    }
    // edges = vertices - 1, so connected iff acyclic
    let index: Vec<usize> = verts.iter().copied().collect();
    let mut uf: Vec<usize> = (0..index.len()).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for &(u, v) in &tree.edges {
        let (a, b) = (index.binary_search(&u).unwrap(), index.binary_search(&v).unwrap());
        let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
        if ra == rb {
            return Err(TreeDefect::Cycle);
        }
        uf[ra] = rb;
    }
    if let Some(r) = root {
        if !verts.contains(&r) || deg.get(&r).copied().unwrap_or(0) > 2 {
            return Err(TreeDefect::Root(r));
        }
    }
    Ok(())
}
