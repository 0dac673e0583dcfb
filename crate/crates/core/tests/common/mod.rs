//! Instance generators shared by the integration tests.
#![allow(dead_code)]

use heapfpt::permdag::{build_permdag, DiGraph, TopOrder};
use heapfpt::sequences::Label;
use heapfpt::treewidth_mbt::{TreeDecomposition, UGraph};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Every sequence in `[k]^n`, in lexicographic order.
pub fn all_sequences(k: Label, n: usize) -> Vec<Vec<Label>> {
    let mut out = Vec::new();
    let mut cur = vec![1; n];
    loop {
        out.push(cur.clone());
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < k {
                cur[i] += 1;
                break;
            }
            cur[i] = 1;
        }
    }
}

pub fn random_sequence(rng: &mut ChaCha8Rng, k: Label, n: usize) -> Vec<Label> {
    (0..n).map(|_| rng.gen_range(1..=k)).collect()
}

/// PermDAG of `s` with vertices renamed by a random permutation, and the
/// ordering that lines the renamed vertices back up with `s`.
pub fn shuffled_permdag(rng: &mut ChaCha8Rng, s: &[Label]) -> (DiGraph, TopOrder) {
    let n = s.len();
    let mut name: Vec<usize> = (0..n).collect();
    name.shuffle(rng);
    let base = build_permdag(s);
    let g = DiGraph::new(n, base.arcs().map(|(a, b)| (name[a], name[b]))).unwrap();
    (g, TopOrder::new(name).unwrap())
}

/// Random DAG whose arcs all point backwards along a random ordering.
pub fn random_dag(rng: &mut ChaCha8Rng, n: usize, p: f64) -> (DiGraph, TopOrder) {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut arcs = Vec::new();
    for j in 0..n {
        for i in 0..j {
            if rng.gen_bool(p) {
                arcs.push((order[j], order[i]));
            }
        }
    }
    (DiGraph::new(n, arcs).unwrap(), TopOrder::new(order).unwrap())
}

/// Adds every arc implied by transitivity.
pub fn transitive_closure(g: &DiGraph) -> DiGraph {
    let n = g.n();
    let mut reach = vec![vec![false; n]; n];
    for (u, v) in g.arcs() {
        reach[u][v] = true;
    }
    for w in 0..n {
        for u in 0..n {
            if reach[u][w] {
                let via = reach[w].clone();
                for (r, &x) in reach[u].iter_mut().zip(&via) {
                    *r |= x;
                }
            }
        }
    }
    let arcs = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| reach[u][v]);
    DiGraph::new(n, arcs.collect::<Vec<_>>()).unwrap()
}

/// Connected graph on `n` vertices with at most `max_m` edges: a random
/// spanning tree plus random extra edges.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, max_m: usize) -> UGraph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    let room = n * (n - 1) / 2;
    let target = rng.gen_range(edges.len()..=max_m.max(edges.len()).min(room));
    while edges.len() < target {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && !edges.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u)) {
            edges.push((u, v));
        }
    }
    UGraph::new(n, edges).unwrap()
}

/// Ladder with `rungs` rungs; vertex `2i` and `2i + 1` form rung `i`.
pub fn ladder(rungs: usize) -> (UGraph, TreeDecomposition) {
    let mut edges = Vec::new();
    for i in 0..rungs {
        edges.push((2 * i, 2 * i + 1));
        if i + 1 < rungs {
            edges.push((2 * i, 2 * i + 2));
            edges.push((2 * i + 1, 2 * i + 3));
        }
    }
    let g = UGraph::new(2 * rungs, edges).unwrap();
    let mut bags = Vec::new();
    for i in 0..rungs.saturating_sub(1) {
        bags.push(vec![2 * i, 2 * i + 1, 2 * i + 2]);
        bags.push(vec![2 * i + 1, 2 * i + 2, 2 * i + 3]);
    }
    if rungs == 1 {
        bags.push(vec![0, 1]);
    }
    let tree = (1..bags.len()).map(|i| (i - 1, i)).collect();
    (g, TreeDecomposition::new(bags, tree))
}
