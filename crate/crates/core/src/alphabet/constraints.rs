//! The alphabet polyhedron as a system of difference constraints.
//!
//! With one variable per position, every arc `(v, u)` asks `x_u <= x_v`,
//! every unconnected pair `u` before `v` asks `x_v <= x_u - 1`, and every
//! variable is at least 1. Bellman-Ford from a virtual source either yields
//! the componentwise least integral solution or a negative cycle.

use std::fmt;

use crate::permdag::{DiGraph, GraphError, TopOrder};

use super::Alpha;

/// One inequality of the system, named by the vertices involved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// `x[to] <= x[from]` for the arc `(from, to)`.
    Arc { from: usize, to: usize },
    /// `x[later] <= x[earlier] - 1` when neither arc is present.
    Gap { earlier: usize, later: usize },
    /// `x[v] >= 1`.
    Positive(usize),
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Constraint::Arc { from, to } => write!(f, "x{to} <= x{from}"),
            Constraint::Gap { earlier, later } => write!(f, "x{later} <= x{earlier} - 1"),
            Constraint::Positive(v) => write!(f, "x{v} >= 1"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// Least solution, indexed by vertex.
    Feasible(Vec<u32>),
    /// Constraints along a negative cycle; summing them gives `0 <= -c`.
    Infeasible(Vec<Constraint>),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

struct Edge {
    from: usize,
    to: usize,
    weight: i64,
    why: Constraint,
}

/// Node `n` is the virtual source; node `v < n` stands for `-x[v]`.
fn constraint_graph(g: &DiGraph, t: &TopOrder) -> Vec<Edge> {
    let n = g.n();
    let mut edges: Vec<Edge> = (0..n)
        .map(|v| Edge { from: n, to: v, weight: -1, why: Constraint::Positive(v) })
        .collect();
    for (from, to) in g.arcs() {
        edges.push(Edge { from: to, to: from, weight: 0, why: Constraint::Arc { from, to } });
    }
    for pu in 0..n {
        let u = t.vertex_at(pu);
        for pv in pu + 1..n {
            let v = t.vertex_at(pv);
            if !g.has_arc(v, u) {
                edges.push(Edge { from: v, to: u, weight: -1, why: Constraint::Gap { earlier: u, later: v } });
            }
        }
    }
    edges
}

fn solve(n: usize, edges: &[Edge]) -> Feasibility {
    let nodes = n + 1;
    let mut dist = vec![i64::MAX; nodes];
    let mut pred: Vec<Option<usize>> = vec![None; nodes];
    dist[n] = 0;
    let mut last_relaxed = None;
    for _ in 0..nodes {
        last_relaxed = None;
        for (i, e) in edges.iter().enumerate() {
            if dist[e.from] != i64::MAX && dist[e.from] + e.weight < dist[e.to] {
                dist[e.to] = dist[e.from] + e.weight;
                pred[e.to] = Some(i);
                last_relaxed = Some(e.to);
            }
        }
        if last_relaxed.is_none() {
            break;
        }
    }
    let Some(mut v) = last_relaxed else {
        return Feasibility::Feasible(dist[..n].iter().map(|&d| (-d) as u32).collect());
    };
    for _ in 0..nodes {
        v = edges[pred[v].unwrap()].from;
    }
    let start = v;
    let mut cycle = Vec::new();
    loop {
        let e = &edges[pred[v].unwrap()];
        cycle.push(e.why);
        v = e.from;
        if v == start {
            break;
        }
    }
    cycle.reverse();
    Feasibility::Infeasible(cycle)
}

/// Decides whether some labelling realizes `(g, t)`, returning the least one.
pub fn polyhedron_feasible(g: &DiGraph, t: &TopOrder) -> Result<Feasibility, GraphError> {
    t.check_topological(g)?;
    Ok(solve(g.n(), &constraint_graph(g, t)))
}

/// Minimizes the label of an extra vertex placed last with arcs to everyone.
pub fn min_alpha_lp(g: &DiGraph, t: &TopOrder) -> Result<Alpha, GraphError> {
    t.check_topological(g)?;
    let n = g.n();
    if n == 0 {
        return Ok(Alpha::Finite(0));
    }
    let arcs = g.arcs().chain((0..n).map(|u| (n, u)));
    let extended = DiGraph::new(n + 1, arcs)?;
    let mut order = t.order().to_vec();
    order.push(n);
    let order = TopOrder::new(order)?;
    Ok(match solve(n + 1, &constraint_graph(&extended, &order)) {
        Feasibility::Feasible(x) => Alpha::Finite(x[n]),
        Feasibility::Infeasible(_) => Alpha::Infinite,
    })
}

/// Checks every constraint of the system against `x`.
pub fn satisfies(g: &DiGraph, t: &TopOrder, x: &[u32]) -> bool {
    let holds = |c: &Constraint| match *c {
        Constraint::Arc { from, to } => x[to] <= x[from],
        Constraint::Gap { earlier, later } => x[later] < x[earlier],
        Constraint::Positive(v) => x[v] >= 1,
    };
    x.len() == g.n() && constraint_graph(g, t).iter().all(|e| holds(&e.why))
}
