//! Line-oriented text formats. Vertex ids are 1-based on disk.

use std::fmt::Write as _;

use thiserror::Error;

use crate::permdag::{DiGraph, TopOrder};
use crate::treewidth_mbt::{TreeDecomposition, UGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, message: message.into() })
}

fn numbers<T: std::str::FromStr>(line: usize, words: &[&str]) -> Result<Vec<T>, FormatError> {
    words
        .iter()
        .map(|w| w.parse().map_err(|_| FormatError { line, message: format!("expected a number, found {w:?}") }))
        .collect()
}

fn vertex(line: usize, id: usize, n: usize) -> Result<usize, FormatError> {
    if id == 0 || id > n {
        return err(line, format!("vertex {id} outside 1..={n}"));
    }
    Ok(id - 1)
}

/// One sequence per line of positive integers; blank and `#` lines skipped.
pub fn parse_sequences(text: &str) -> Result<Vec<Vec<u64>>, FormatError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let values: Vec<u64> = numbers(i + 1, &words)?;
        if values.contains(&0) {
            return err(i + 1, "labels must be positive");
        }
        out.push(values);
    }
    Ok(out)
}

/// A `p dag` file with its optional `o` ordering line.
#[derive(Clone, Debug)]
pub struct DagFile {
    pub graph: DiGraph,
    pub order: Option<TopOrder>,
}

fn parse_order_words(line: usize, words: &[&str], n: usize) -> Result<TopOrder, FormatError> {
    let ids: Vec<usize> = numbers(line, words)?;
    if ids.len() != n {
        return err(line, format!("ordering lists {} vertices, expected {n}", ids.len()));
    }
    let order = ids.iter().map(|&id| vertex(line, id, n)).collect::<Result<Vec<_>, _>>()?;
    TopOrder::new(order).or_else(|e| err(line, e.to_string()))
}

pub fn parse_dag(text: &str) -> Result<DagFile, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    let mut order = None;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let words: Vec<&str> = raw.split_whitespace().collect();
        match words.as_slice() {
            [] | ["c", ..] => {}
            ["p", "dag", rest @ ..] => {
                if header.is_some() {
                    return err(line, "second header");
                }
                let nm: Vec<usize> = numbers(line, rest)?;
                let [n, m] = nm[..] else { return err(line, "expected `p dag <n> <m>`") };
                header = Some((n, m));
            }
            ["a", rest @ ..] => {
                let Some((n, _)) = header else { return err(line, "arc before header") };
                let uv: Vec<usize> = numbers(line, rest)?;
                let [u, v] = uv[..] else { return err(line, "expected `a <from> <to>`") };
                arcs.push((line, vertex(line, u, n)?, vertex(line, v, n)?));
            }
            ["o", rest @ ..] => {
                let Some((n, _)) = header else { return err(line, "ordering before header") };
                if order.is_some() {
                    return err(line, "second ordering");
                }
                order = Some(parse_order_words(line, rest, n)?);
            }
            _ => return err(line, format!("unrecognized line {:?}", raw.trim())),
        }
    }
    let Some((n, m)) = header else { return err(last.max(1), "missing `p dag` header") };
    if arcs.len() != m {
        return err(last.max(1), format!("header promises {m} arcs, found {}", arcs.len()));
    }
    let mut seen = std::collections::HashSet::new();
    for &(line, u, v) in &arcs {
        if u == v {
            return err(line, "self-loop");
        }
        if !seen.insert((u, v)) {
            return err(line, "duplicate arc");
        }
    }
    let graph = DiGraph::new(n, arcs.iter().map(|&(_, u, v)| (u, v))).or_else(|e| err(last, e.to_string()))?;
    Ok(DagFile { graph, order })
}

/// A standalone ordering file: one `o` line (or bare ids), comments allowed.
pub fn parse_order(text: &str, n: usize) -> Result<TopOrder, FormatError> {
    let mut found = None;
    for (i, raw) in text.lines().enumerate() {
        let words: Vec<&str> = raw.split_whitespace().collect();
        let ids = match words.as_slice() {
            [] | ["c", ..] => continue,
            ["o", rest @ ..] => rest,
            all => all,
        };
        if found.is_some() {
            return err(i + 1, "more than one ordering");
        }
        found = Some(parse_order_words(i + 1, ids, n)?);
    }
    match found {
        Some(t) => Ok(t),
        None if n == 0 => Ok(TopOrder::identity(0)),
        None => err(1, "no ordering found"),
    }
}

pub fn write_dag(g: &DiGraph) -> String {
    let mut s = format!("p dag {} {}\n", g.n(), g.arc_count());
    for (u, v) in g.arcs() {
        let _ = writeln!(s, "a {} {}", u + 1, v + 1);
    }
    s
}

/// `p tw <n> <m>` followed by `<u> <v>` lines.
pub fn parse_tw_graph(text: &str) -> Result<UGraph, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let words: Vec<&str> = raw.split_whitespace().collect();
        match words.as_slice() {
            [] | ["c", ..] => {}
            ["p", "tw", rest @ ..] => {
                if header.is_some() {
                    return err(line, "second header");
                }
                let nm: Vec<usize> = numbers(line, rest)?;
                let [n, m] = nm[..] else { return err(line, "expected `p tw <n> <m>`") };
                header = Some((n, m));
            }
            [u, v] => {
                let Some((n, _)) = header else { return err(line, "edge before header") };
                let uv: Vec<usize> = numbers(line, &[u, v])?;
                let (a, b) = (vertex(line, uv[0], n)?, vertex(line, uv[1], n)?);
                if a == b {
                    return err(line, "self-loop");
                }
                if edges.iter().any(|&(_, x, y)| (x, y) == (a.min(b), a.max(b))) {
                    return err(line, "duplicate edge");
                }
                edges.push((line, a.min(b), a.max(b)));
            }
            _ => return err(line, format!("unrecognized line {:?}", raw.trim())),
        }
    }
    let Some((n, m)) = header else { return err(last.max(1), "missing `p tw` header") };
    if edges.len() != m {
        return err(last.max(1), format!("header promises {m} edges, found {}", edges.len()));
    }
    UGraph::new(n, edges.iter().map(|&(_, u, v)| (u, v))).or_else(|e| err(last, e.to_string()))
}

/// PACE `.td`: `s td <bags> <max bag> <n>`, `b <id> <v...>`, then tree edges.
pub fn parse_td(text: &str) -> Result<TreeDecomposition, FormatError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut tree = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let words: Vec<&str> = raw.split_whitespace().collect();
        match words.as_slice() {
            [] | ["c", ..] => {}
            ["s", "td", rest @ ..] => {
                if header.is_some() {
                    return err(line, "second header");
                }
                let h: Vec<usize> = numbers(line, rest)?;
                let [nb, mb, n] = h[..] else { return err(line, "expected `s td <bags> <max bag> <n>`") };
                header = Some((nb, mb, n));
                bags = vec![None; nb];
            }
            ["b", id, rest @ ..] => {
                let Some((nb, mb, n)) = header else { return err(line, "bag before header") };
                let id: usize = numbers(line, &[id])?[0];
                let slot = vertex(line, id, nb).or_else(|_| err(line, format!("bag id {id} outside 1..={nb}")))?;
                if bags[slot].is_some() {
                    return err(line, format!("bag {id} given twice"));
                }
                let vs: Vec<usize> = numbers(line, rest)?;
                if vs.len() > mb {
                    return err(line, format!("bag {id} has {} vertices, header allows {mb}", vs.len()));
                }
                bags[slot] = Some(vs.iter().map(|&v| vertex(line, v, n)).collect::<Result<_, _>>()?);
            }
            [a, b] => {
                let Some((nb, _, _)) = header else { return err(line, "tree edge before header") };
                let ab: Vec<usize> = numbers(line, &[a, b])?;
                tree.push((vertex(line, ab[0], nb)?, vertex(line, ab[1], nb)?));
            }
            _ => return err(line, format!("unrecognized line {:?}", raw.trim())),
        }
    }
    if header.is_none() {
        return err(last.max(1), "missing `s td` header");
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or(FormatError { line: last.max(1), message: format!("bag {} never given", i + 1) }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TreeDecomposition::new(bags, tree))
}

pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut s = format!("s td {} {} {}\n", td.len(), td.bags().iter().map(Vec::len).max().unwrap_or(0), n);
    for (i, bag) in td.bags().iter().enumerate() {
        let _ = write!(s, "b {}", i + 1);
        for v in bag {
            let _ = write!(s, " {}", v + 1);
        }
        s.push('\n');
    }
    for &(a, b) in td.tree_edges() {
        let _ = writeln!(s, "{} {}", a + 1, b + 1);
    }
    s
}
