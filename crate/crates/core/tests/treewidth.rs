mod common;

use std::collections::BTreeMap;

use common::*;
use heapfpt::oracles::{brute_mbt_undirected, brute_mbt_undirected_rooted, OracleBudget};
use heapfpt::treewidth_mbt::{
    check_binary_tree, heuristic_decomposition, make_nice, make_special, mbt_dp, rooted_mbt, unrooted_mbt,
    NiceDecomposition, NodeKind, TreeDecomposition, UGraph,
};
use proptest::prelude::*;

fn graph_strategy(max_n: usize, max_m: usize) -> impl Strategy<Value = UGraph> {
    (1..=max_n, any::<u64>()).prop_map(move |(n, seed)| random_connected(&mut rng(seed), n, max_m))
}

/// One bag holding everything.
fn trivial_td(g: &UGraph) -> TreeDecomposition {
    TreeDecomposition::new(vec![(0..g.n()).collect()], vec![])
}

/// Checks the nice-decomposition rules without using the crate's checker.
/// `pinned` vertices may stay in the root and leaf bags.
fn conforms(g: &UGraph, nd: &NiceDecomposition, pinned: &[usize]) -> Result<(), String> {
    let outside = |bag: &[usize]| bag.iter().any(|v| !pinned.contains(v));
    let parents = nd.parents();
    let root = nd.root();
    if outside(&nd.node(root).bag) || parents[root].is_some() {
        return Err("root bag not empty".into());
    }
    let mut introduced: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, node) in nd.nodes().iter().enumerate() {
        match node.kind {
            NodeKind::Leaf if outside(&node.bag) || !node.children.is_empty() => {
                return Err(format!("leaf {i} not empty"))
            }
            NodeKind::Join => {
                if node.children.len() != 2 || node.children.iter().any(|&c| nd.node(c).bag != node.bag) {
                    return Err(format!("join {i} children differ"));
                }
            }
            NodeKind::IntroduceEdge(u, v) => {
                *introduced.entry((u.min(v), u.max(v))).or_default() += 1;
                let mut up = parents[i];
                loop {
                    let Some(p) = up else { return Err(format!("edge node {i} has no drop above")) };
                    match nd.node(p).kind {
                        NodeKind::IntroduceEdge(..) => up = parents[p],
                        NodeKind::Drop(w) if w == u || w == v => break,
                        _ => return Err(format!("edge node {i} not directly below a drop of {u} or {v}")),
                    }
                }
            }
            _ => {}
        }
    }
    for &e in g.edges() {
        if introduced.get(&e) != Some(&1) {
            return Err(format!("edge {e:?} introduced {:?} times", introduced.get(&e)));
        }
    }
    if introduced.len() != g.m() {
        return Err("introduced a non-edge".into());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn unrooted_matches_oracle(g in graph_strategy(10, 16)) {
        let td = heuristic_decomposition(&g);
        prop_assert!(td.validate(&g).is_ok());
        let tree = unrooted_mbt(&g, &td).unwrap();
        prop_assert_eq!(check_binary_tree(&g, &tree, None), Ok(()));
        prop_assert_eq!(tree.size, brute_mbt_undirected(&g, &OracleBudget::default()).unwrap());
    }

    #[test]
    fn rooted_matches_oracle(g in graph_strategy(8, 14)) {
        let td = heuristic_decomposition(&g);
        for r in 0..g.n() {
            let tree = rooted_mbt(&g, &td, r).unwrap();
            prop_assert_eq!(check_binary_tree(&g, &tree, Some(r)), Ok(()));
            prop_assert_eq!(tree.size, brute_mbt_undirected_rooted(&g, r, &OracleBudget::default()).unwrap());
        }
    }

    #[test]
    fn decomposition_choice_is_irrelevant(g in graph_strategy(9, 16)) {
        let a = unrooted_mbt(&g, &heuristic_decomposition(&g)).unwrap();
        let b = unrooted_mbt(&g, &trivial_td(&g)).unwrap();
        prop_assert_eq!(a.size, b.size);
        prop_assert_eq!(check_binary_tree(&g, &b, None), Ok(()));
    }

    #[test]
    fn nice_forms_conform(g in graph_strategy(10, 18), s in 0usize..10) {
        let s = s % g.n();
        let td = heuristic_decomposition(&g);
        let nd = make_nice(&g, &td).unwrap();
        prop_assert_eq!(nd.check(&g, &[]), Ok(()));
        prop_assert_eq!(conforms(&g, &nd, &[]), Ok(()));
        prop_assert!(nd.to_tree_decomposition().validate(&g).is_ok());
        prop_assert_eq!(nd.width(), td.width());
        let (gs, sd, sp) = make_special(&g, &nd, s);
        prop_assert_eq!(sd.check(&gs, &[sp]), Ok(()));
        prop_assert_eq!(conforms(&gs, &sd, &[sp]), Ok(()));
        prop_assert_eq!(sd.check_join_disjointness(), Ok(()));
        prop_assert!(gs.has_edge(s, sp));
        prop_assert!(sd.nodes().iter().all(|x| x.bag.contains(&sp)));
    }

    #[test]
    fn state_count_bound(g in graph_strategy(10, 16), s in 0usize..10) {
        let td = heuristic_decomposition(&g);
        let w = td.width();
        prop_assume!(w <= 4);
        let nd = make_nice(&g, &td).unwrap();
        let (gs, sd, sp) = make_special(&g, &nd, s % g.n());
        let dp = mbt_dp(&gs, &sd, sp).unwrap();
        let bound = (8 * w + 16).pow(w as u32 + 2);
        prop_assert!(dp.state_counts().into_iter().all(|c| c <= bound));
    }
}

#[test]
fn invalid_decompositions_are_rejected() {
    let g = UGraph::new(3, [(0, 1), (1, 2)]).unwrap();
    let missing_vertex = TreeDecomposition::new(vec![vec![0, 1]], vec![]);
    assert!(unrooted_mbt(&g, &missing_vertex).is_err());
    let missing_edge = TreeDecomposition::new(vec![vec![0, 1], vec![2]], vec![(0, 1)]);
    assert!(unrooted_mbt(&g, &missing_edge).is_err());
    let broken = TreeDecomposition::new(vec![vec![0, 1], vec![2], vec![1, 2]], vec![(0, 1), (1, 2)]);
    assert!(rooted_mbt(&g, &broken, 0).is_err());
}

#[test]
fn ladders_are_spanned() {
    for rungs in [1, 2, 5, 30] {
        let (g, td) = ladder(rungs);
        assert!(td.validate(&g).is_ok());
        assert_eq!(td.width(), if rungs == 1 { 1 } else { 2 });
        let tree = unrooted_mbt(&g, &td).unwrap();
        assert_eq!(check_binary_tree(&g, &tree, None), Ok(()));
        assert_eq!(tree.size, 2 * rungs);
    }
}

#[test]
fn cycle_decomposition_has_width_two() {
    let g = UGraph::new(7, (0..7).map(|i| (i, (i + 1) % 7))).unwrap();
    assert_eq!(heuristic_decomposition(&g).width(), 2);
    let tree = UGraph::new(5, [(0, 1), (0, 2), (2, 3), (2, 4)]).unwrap();
    assert_eq!(heuristic_decomposition(&tree).width(), 1);
}
