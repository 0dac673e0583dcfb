//! Exhaustive reference answers for small inputs.
//!
//! Nothing here calls into the fast algorithms except [`brute_alpha`], which
//! scores each ordering it enumerates with the greedy labelling. Graph
//! walking and checking is done with local code.

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::alphabet::{greedy_assign, Alpha};
use crate::permdag::{DiGraph, TopOrder};
use crate::sequences::Label;
use crate::treewidth_mbt::UGraph;

pub const LHS_LIMIT: usize = 12;
pub const DIRECTED_LIMIT: usize = 10;
pub const UNDIRECTED_LIMIT: usize = 10;
pub const GAMMA_LIMIT: usize = 6;
pub const ALPHA_LIMIT: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance of size {size} exceeds the oracle limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("gave up after {0:?}")]
    Timeout(Duration),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_n: usize,
    pub max_millis: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_n: LHS_LIMIT, max_millis: 60_000 }
    }
}

struct Clock {
    start: Instant,
    limit: Duration,
    ticks: u32,
}

impl Clock {
    fn start(budget: &OracleBudget, size: usize, hard_limit: usize) -> Result<Clock, OracleError> {
        let limit = budget.max_n.min(hard_limit);
        if size > limit {
            return Err(OracleError::TooLarge { size, limit });
        }
        Ok(Clock { start: Instant::now(), limit: Duration::from_millis(budget.max_millis), ticks: 0 })
    }

    fn tick(&mut self) -> Result<(), OracleError> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks.is_multiple_of(1024) && self.start.elapsed() > self.limit {
            return Err(OracleError::Timeout(self.limit));
        }
        Ok(())
    }
}

/// Longest subsequence that can be inserted, in order, as leaves of a
/// heap-ordered binary tree. The state is the multiset of open child slots,
/// keyed by the label of the slot's parent (0 for the empty tree's root slot).
pub fn brute_lhs(s: &[Label], budget: &OracleBudget) -> Result<usize, OracleError> {
    let mut clock = Clock::start(budget, s.len(), LHS_LIMIT)?;
    let mut memo: HashMap<(usize, Vec<Label>), usize> = HashMap::new();
    fn go(
        s: &[Label],
        i: usize,
        slots: Vec<Label>,
        memo: &mut HashMap<(usize, Vec<Label>), usize>,
        clock: &mut Clock,
    ) -> Result<usize, OracleError> {
        if i == s.len() {
            return Ok(0);
        }
        if let Some(&v) = memo.get(&(i, slots.clone())) {
            return Ok(v);
        }
        clock.tick()?;
        let mut best = go(s, i + 1, slots.clone(), memo, clock)?;
        let mut tried = Vec::new();
        for (j, &p) in slots.iter().enumerate() {
            if p > s[i] || tried.contains(&p) {
                continue;
            }
            tried.push(p);
            let mut next = slots.clone();
            next.swap_remove(j);
            next.push(s[i]);
            next.push(s[i]);
            next.sort_unstable();
            best = best.max(1 + go(s, i + 1, next, memo, clock)?);
        }
        memo.insert((i, slots), best);
        Ok(best)
    }
    go(s, 0, vec![0], &mut memo, &mut clock)
}

/// Largest in-tree: a root `r` with no out-arc used, every other chosen
/// vertex using exactly one out-arc to a chosen vertex, at most two arcs
/// into any vertex, and every vertex reaching `r`.
pub fn brute_mbt_directed(g: &DiGraph, budget: &OracleBudget) -> Result<usize, OracleError> {
    let n = g.n();
    let mut clock = Clock::start(budget, n, DIRECTED_LIMIT)?;
    if n == 0 {
        return Ok(0);
    }
    let succ: Vec<Vec<usize>> = (0..n).map(|u| (0..n).filter(|&v| v != u && g.has_arc(u, v)).collect()).collect();
    let mut subsets: Vec<u32> = (1..1u32 << n).collect();
    subsets.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
    for mask in subsets {
        let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        for &r in &members {
            let others: Vec<usize> = members.iter().copied().filter(|&v| v != r).collect();
            let mut parent = vec![usize::MAX; n];
            let mut load = vec![0u8; n];
            if assign(&succ, mask, r, &others, 0, &mut parent, &mut load, &mut clock)? {
                return Ok(members.len());
            }
        }
    }
    unreachable!("a single vertex is always a tree")
}

#[allow(clippy::too_many_arguments)]
fn assign(
    succ: &[Vec<usize>],
    mask: u32,
    r: usize,
    others: &[usize],
    at: usize,
    parent: &mut Vec<usize>,
    load: &mut Vec<u8>,
    clock: &mut Clock,
) -> Result<bool, OracleError> {
    clock.tick()?;
    if at == others.len() {
        // every vertex must reach r by following parents
        return Ok(others.iter().all(|&v| {
            let mut x = v;
            for _ in 0..=others.len() {
                if x == r {
                    return true;
                }
                x = parent[x];
            }
            false
        }));
    }
    let v = others[at];
    for &p in &succ[v] {
        if mask >> p & 1 == 0 || load[p] == 2 {
            continue;
        }
        parent[v] = p;
        load[p] += 1;
        let ok = assign(succ, mask, r, others, at + 1, parent, load, clock)?;
        load[p] -= 1;
        if ok {
            return Ok(true);
        }
    }
    parent[v] = usize::MAX;
    Ok(false)
}

/// Search over edge subsets that stay a forest with degrees at most 3.
/// `root`: count only the tree through it, with its degree capped at 2.
fn undirected_search(g: &UGraph, root: Option<usize>, budget: &OracleBudget) -> Result<usize, OracleError> {
    let n = g.n();
    let mut clock = Clock::start(budget, n, UNDIRECTED_LIMIT)?;
    if n == 0 {
        return Ok(0);
    }
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| g.has_edge(u, v)).collect();
    struct State {
        comp: Vec<usize>,
        deg: Vec<u8>,
    }
    fn best_now(st: &State, root: Option<usize>) -> usize {
        let mut size: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in &st.comp {
            *size.entry(c).or_insert(0) += 1;
        }
        match root {
            Some(r) => size[&st.comp[r]],
            None => size.values().copied().max().unwrap_or(0),
        }
    }
    fn go(
        edges: &[(usize, usize)],
        at: usize,
        st: &mut State,
        root: Option<usize>,
        clock: &mut Clock,
    ) -> Result<usize, OracleError> {
        clock.tick()?;
        if at == edges.len() {
            return Ok(best_now(st, root));
        }
        let mut best = go(edges, at + 1, st, root, clock)?;
        let (u, v) = edges[at];
        let cap = |x: usize| if Some(x) == root { 2 } else { 3 };
        if st.comp[u] != st.comp[v] && st.deg[u] < cap(u) && st.deg[v] < cap(v) {
            let saved = st.comp.clone();
            let (from, to) = (st.comp[v], st.comp[u]);
            st.comp.iter_mut().filter(|c| **c == from).for_each(|c| *c = to);
            st.deg[u] += 1;
            st.deg[v] += 1;
            best = best.max(go(edges, at + 1, st, root, clock)?);
            st.deg[u] -= 1;
            st.deg[v] -= 1;
            st.comp = saved;
        }
        Ok(best)
    }
    let mut st = State { comp: (0..n).collect(), deg: vec![0; n] };
    go(&edges, 0, &mut st, root, &mut clock)
}

/// Most vertices in a connected acyclic subgraph with all degrees at most 3.
pub fn brute_mbt_undirected(g: &UGraph, budget: &OracleBudget) -> Result<usize, OracleError> {
    undirected_search(g, None, budget)
}

/// As [`brute_mbt_undirected`], restricted to trees through `r` in which
/// `r` has degree at most 2.
pub fn brute_mbt_undirected_rooted(g: &UGraph, r: usize, budget: &OracleBudget) -> Result<usize, OracleError> {
    assert!(r < g.n(), "root out of range");
    undirected_search(g, Some(r), budget)
}

/// `PermDAG(tau)` equals `g` with `t_i` read as the vertex at position `i`.
fn realizes(g: &DiGraph, t: &TopOrder, tau: &[Label]) -> bool {
    let n = tau.len();
    (0..n).all(|j| {
        (0..j).all(|i| {
            let (a, b) = (t.vertex_at(i), t.vertex_at(j));
            !g.has_arc(a, b) && g.has_arc(b, a) == (tau[i] <= tau[j])
        })
    })
}

/// Smallest `k <= k_max` such that some `tau` in `[k]^n` realizes `(g, t)`.
pub fn brute_gamma_alpha(g: &DiGraph, t: &TopOrder, k_max: u32, budget: &OracleBudget) -> Result<Alpha, OracleError> {
    let n = g.n();
    let mut clock = Clock::start(budget, n, GAMMA_LIMIT)?;
    if n == 0 {
        return Ok(Alpha::Finite(0));
    }
    for k in 1..=k_max {
        let mut tau = vec![1 as Label; n];
        loop {
            clock.tick()?;
            if realizes(g, t, &tau) {
                return Ok(Alpha::Finite(k));
            }
            // odometer over [k]^n
            let mut i = 0;
            while i < n && tau[i] == k {
                tau[i] = 1;
                i += 1;
            }
            if i == n {
                break;
            }
            tau[i] += 1;
        }
    }
    Ok(Alpha::Infinite)
}

/// All topological orders of `g` (arcs pointing backwards), in lexicographic
/// order of the vertex lists.
pub fn topological_orders(g: &DiGraph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut out = Vec::new();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    fn go(g: &DiGraph, placed: &mut Vec<bool>, order: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = g.n();
        if order.len() == n {
            out.push(order.clone());
            return;
        }
        for v in 0..n {
            // v may go next once everything it points to is placed
            if !placed[v] && (0..n).all(|u| !g.has_arc(v, u) || placed[u]) {
                placed[v] = true;
                order.push(v);
                go(g, placed, order, out);
                order.pop();
                placed[v] = false;
            }
        }
    }
    go(g, &mut placed, &mut order, &mut out);
    out
}

/// Local umbrella test: some arc `(v, u)` spans a `w` that is joined to
/// neither end in the required direction.
fn has_umbrella(g: &DiGraph, order: &[usize]) -> bool {
    let n = order.len();
    (0..n).any(|i| {
        (i + 2..n).any(|k| {
            let (u, v) = (order[i], order[k]);
            g.has_arc(v, u) && (i + 1..k).any(|j| !g.has_arc(order[j], u) && !g.has_arc(v, order[j]))
        })
    })
}

/// `α(G)`: the best greedy label count over umbrella-free topological orders.
pub fn brute_alpha(g: &DiGraph, budget: &OracleBudget) -> Result<Alpha, OracleError> {
    let mut clock = Clock::start(budget, g.n(), ALPHA_LIMIT)?;
    let mut best = Alpha::Infinite;
    for order in topological_orders(g) {
        clock.tick()?;
        if has_umbrella(g, &order) {
            continue;
        }
        let t = TopOrder::new(order).expect("enumerated orders are permutations");
        let a = greedy_assign(g, &t).expect("enumerated orders are topological").alpha();
        best = best.min(a);
    }
    Ok(best)
}
