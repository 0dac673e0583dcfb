use std::fs;
use std::io::{self, BufRead, Read, Write};

use heapfpt::alphabet::{
    greedy_assign, min_alpha_lp, minmax_alpha, polyhedron_feasible, Alpha, Feasibility, GreedyOutcome, Obstruction,
};
use heapfpt::formats::{parse_dag, parse_order, parse_sequences, parse_td, parse_tw_graph, write_dag, DagFile};
use heapfpt::oracles::{
    brute_alpha, brute_gamma_alpha, brute_lhs, brute_mbt_directed, brute_mbt_undirected,
    brute_mbt_undirected_rooted, OracleBudget,
};
use heapfpt::permdag::{build_permdag, GraphError, is_umbrella_free, ordered_isomorphic, transitivity_violation, TopOrder};
use heapfpt::sequences::{lhs_dp, lhs_reconstruct, LhsStream, Sequence, MAX_ALPHABET};
use heapfpt::treewidth_mbt::{
    check_binary_tree, heuristic_decomposition, rooted_mbt, unrooted_mbt, BinaryTree, TreeError, UGraph,
};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Inconsistent(String),
    Io(io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Inconsistent(m) => write!(f, "internal inconsistency: {m}"),
            CliError::Io(e) => write!(f, "write failed: {e}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Inconsistent(_) => 3,
        }
    }
}

type Outcome = Result<u8, CliError>;

fn input<E: std::fmt::Display>(what: &str) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::Input(format!("{what}: {e}"))
}

fn read(path: &str) -> Result<String, CliError> {
    let mut s = String::new();
    if path == "-" {
        io::stdin().read_to_string(&mut s).map_err(input("stdin"))?;
    } else {
        s = fs::read_to_string(path).map_err(input(path))?;
    }
    Ok(s)
}

fn join<T: std::fmt::Display>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn budget(max_n: usize) -> OracleBudget {
    OracleBudget { max_n, max_millis: 60_000 }
}

fn compress(values: &[u64]) -> Result<Sequence, CliError> {
    let s = Sequence::from_values(values);
    if s.k() as usize > MAX_ALPHABET {
        return Err(CliError::Input(format!(
            "{} distinct values; at most {MAX_ALPHABET} are supported",
            s.k()
        )));
    }
    Ok(s)
}

pub struct LhsFlags {
    pub witness: bool,
    pub stream: bool,
    pub alphabet: Option<u32>,
    pub oracle: bool,
    pub pretty: bool,
}

pub fn lhs(out: &mut dyn Write, path: &str, flags: LhsFlags) -> Outcome {
    if flags.stream {
        return lhs_stream(out, path, &flags);
    }
    let mut seqs = parse_sequences(&read(path)?).map_err(input(path))?;
    if seqs.is_empty() {
        seqs.push(Vec::new());
    }
    for values in &seqs {
        let s = compress(values)?;
        let res = lhs_dp(&s).map_err(input(path))?;
        writeln!(out, "length: {}", res.length)?;
        if flags.witness {
            let idx = lhs_reconstruct(&res.table, &s);
            writeln!(out, "indices: {}", join(idx.iter().map(|i| i + 1)))?;
        }
        if flags.oracle {
            let v = brute_lhs(s.items(), &budget(12)).map_err(input("oracle"))?;
            writeln!(out, "oracle: {v}")?;
            if v != res.length {
                return Err(CliError::Inconsistent(format!("dp says {}, oracle says {v}", res.length)));
            }
        }
        if flags.pretty {
            let verdict = if res.length == s.len() { "heapable" } else { "not heapable" };
            writeln!(out, "# {} labels over {} values, {verdict}", s.len(), s.k())?;
        }
    }
    Ok(0)
}

fn lhs_stream(out: &mut dyn Write, path: &str, flags: &LhsFlags) -> Outcome {
    let mut fed = 0usize;
    let mut last = 0;
    match flags.alphabet {
        Some(k) => {
            let mut stream = LhsStream::new(k).map_err(input("--alphabet"))?;
            let reader: Box<dyn BufRead> = if path == "-" {
                Box::new(io::BufReader::new(io::stdin()))
            } else {
                Box::new(io::BufReader::new(fs::File::open(path).map_err(input(path))?))
            };
            for (i, line) in reader.lines().enumerate() {
                let line = line.map_err(input(path))?;
                if line.trim_start().starts_with('#') {
                    continue;
                }
                for w in line.split_whitespace() {
                    let label: u32 = w.parse().map_err(|_| CliError::Input(format!("line {}: bad label {w:?}", i + 1)))?;
                    last = stream.feed(label).map_err(|e| CliError::Input(format!("line {}: {e}", i + 1)))?;
                    fed += 1;
                    writeln!(out, "{last}")?;
                }
            }
        }
        None => {
            let values: Vec<u64> = parse_sequences(&read(path)?).map_err(input(path))?.concat();
            let s = compress(&values)?;
            let mut stream = LhsStream::new(s.k()).map_err(input(path))?;
            for &a in s.items() {
                last = stream.feed(a).expect("compressed labels are in range");
                fed += 1;
                writeln!(out, "{last}")?;
            }
            if flags.oracle {
                let v = brute_lhs(s.items(), &budget(12)).map_err(input("oracle"))?;
                writeln!(out, "oracle: {v}")?;
                if v != last as usize {
                    return Err(CliError::Inconsistent(format!("stream says {last}, oracle says {v}")));
                }
            }
        }
    }
    if flags.pretty {
        writeln!(out, "# streamed {fed} labels, final length {last}")?;
    }
    Ok(0)
}

fn load_dag(path: &str, order: Option<&str>) -> Result<(DagFile, TopOrder), CliError> {
    let file = parse_dag(&read(path)?).map_err(input(path))?;
    let n = file.graph.n();
    let t = match order {
        Some(p) => parse_order(&read(p)?, n).map_err(input(p))?,
        None => file.order.clone().unwrap_or_else(|| TopOrder::identity(n)),
    };
    Ok((file, t))
}

/// Topological check with 1-based ids in the message.
fn check_order(g: &heapfpt::permdag::DiGraph, t: &TopOrder) -> Result<(), CliError> {
    match t.check_topological(g) {
        Ok(()) => Ok(()),
        Err(GraphError::NotTopological { from, to }) => Err(CliError::Input(format!(
            "ordering: arc ({}, {}) points forward",
            from + 1,
            to + 1
        ))),
        Err(e) => Err(CliError::Input(format!("ordering: {e}"))),
    }
}

fn describe(o: &Obstruction) -> String {
    match o {
        Obstruction::NotTransitive(m) => format!("missing_arc {} {} via {}", m.u + 1, m.w + 1, m.v + 1),
        Obstruction::Umbrella(u) => format!("umbrella {} {} {}", u.u + 1, u.w + 1, u.v + 1),
    }
}

pub fn alphabet(out: &mut dyn Write, path: &str, order: Option<&str>, oracle: bool, pretty: bool) -> Outcome {
    let (file, t) = load_dag(path, order)?;
    let g = &file.graph;
    check_order(g, &t)?;
    let greedy = greedy_assign(g, &t).map_err(input("ordering"))?;
    let lp = min_alpha_lp(g, &t).map_err(input("ordering"))?;
    let feas = polyhedron_feasible(g, &t).map_err(input("ordering"))?;
    let code = match &greedy {
        GreedyOutcome::Infinite(o) => {
            writeln!(out, "alpha: inf")?;
            writeln!(out, "obstruction: {}", describe(o))?;
            writeln!(out, "lp_value: {lp}")?;
            if lp != Alpha::Infinite || feas.is_feasible() {
                return Err(CliError::Inconsistent("greedy found an obstruction but the constraints are feasible".into()));
            }
            1
        }
        GreedyOutcome::Finite(a) => {
            let seq = a.sequence(&t);
            let mm = minmax_alpha(g, &t).map_err(|e| CliError::Inconsistent(e.to_string()))?;
            writeln!(out, "alpha: {}", a.alpha)?;
            writeln!(out, "sequence: {}", join(&seq))?;
            writeln!(out, "minmax_path: {}", join(mm.path.iter().map(|v| v + 1)))?;
            writeln!(out, "lp_value: {lp}")?;
            let Feasibility::Feasible(x) = feas else {
                return Err(CliError::Inconsistent("greedy succeeded but the constraints are infeasible".into()));
            };
            writeln!(out, "lp_witness: {}", join(t.order().iter().map(|&v| x[v])))?;
            if !ordered_isomorphic(g, &t, &seq) {
                return Err(CliError::Inconsistent("greedy sequence does not realize the graph".into()));
            }
            if mm.value != a.alpha || lp != Alpha::Finite(a.alpha) {
                return Err(CliError::Inconsistent(format!(
                    "greedy {}, min-max {}, lp {lp}",
                    a.alpha, mm.value
                )));
            }
            0
        }
    };
    if oracle {
        let n = g.n() as u32;
        let v = brute_gamma_alpha(g, &t, n, &budget(6)).map_err(input("oracle"))?;
        writeln!(out, "oracle: {v}")?;
        if v != greedy.alpha() {
            return Err(CliError::Inconsistent(format!("oracle says {v}")));
        }
    }
    if pretty {
        writeln!(out, "# {} vertices, {} arcs, alphabet size {}", g.n(), g.arc_count(), greedy.alpha())?;
    }
    Ok(code)
}

fn write_tree(out: &mut dyn Write, t: &BinaryTree) -> io::Result<()> {
    writeln!(out, "size: {}", t.size)?;
    for &(u, v) in &t.edges {
        writeln!(out, "edge: {} {}", u + 1, v + 1)?;
    }
    Ok(())
}

pub fn mbt(
    out: &mut dyn Write,
    path: &str,
    td_path: Option<&str>,
    heuristic: bool,
    root: Option<usize>,
    oracle: bool,
    pretty: bool,
) -> Outcome {
    let g = parse_tw_graph(&read(path)?).map_err(input(path))?;
    let td = match (td_path, heuristic) {
        (Some(p), _) => parse_td(&read(p)?).map_err(input(p))?,
        (None, true) => heuristic_decomposition(&g),
        (None, false) => return Err(CliError::Input("give --td <file> or --heuristic-td".into())),
    };
    td.validate(&g).map_err(input("decomposition"))?;
    let root = match root {
        Some(r) if r == 0 || r > g.n() => return Err(CliError::Input(format!("--root {r} outside 1..={}", g.n()))),
        r => r.map(|r| r - 1),
    };
    let tree = match root {
        Some(r) => rooted_mbt(&g, &td, r),
        None => unrooted_mbt(&g, &td),
    }
    .map_err(|e: TreeError| CliError::Input(e.to_string()))?;
    if tree.size > 0 {
        check_binary_tree(&g, &tree, root).map_err(|e| CliError::Inconsistent(e.to_string()))?;
    }
    write_tree(out, &tree)?;
    if oracle {
        let v = oracle_tree_size(&g, root)?;
        writeln!(out, "oracle: {v}")?;
        if v != tree.size {
            return Err(CliError::Inconsistent(format!("dp says {}, oracle says {v}", tree.size)));
        }
    }
    if pretty {
        writeln!(out, "# {} of {} vertices, decomposition width {}", tree.size, g.n(), td.width())?;
    }
    Ok(0)
}

fn oracle_tree_size(g: &UGraph, root: Option<usize>) -> Result<usize, CliError> {
    match root {
        Some(r) => brute_mbt_undirected_rooted(g, r, &budget(10)),
        None => brute_mbt_undirected(g, &budget(10)),
    }
    .map_err(input("oracle"))
}

pub fn permdag(out: &mut dyn Write, path: &str) -> Outcome {
    let seqs = parse_sequences(&read(path)?).map_err(input(path))?;
    if seqs.len() > 1 {
        return Err(CliError::Input(format!("{path}: expected one sequence, found {}", seqs.len())));
    }
    let values = seqs.into_iter().next().unwrap_or_default();
    let s = Sequence::from_values(&values);
    write!(out, "{}", write_dag(&build_permdag(s.items())))?;
    Ok(0)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn verify(out: &mut dyn Write, path: &str, order: Option<&str>, td_path: Option<&str>) -> Outcome {
    let text = read(path)?;
    let header = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('c'))
        .unwrap_or("");
    let mut ok = true;
    if header.starts_with("p dag") {
        let (file, t) = load_dag(path, order)?;
        let g = &file.graph;
        let missing = transitivity_violation(g);
        writeln!(out, "transitive: {}", yes(missing.is_none()))?;
        if let Some(m) = missing {
            writeln!(out, "missing_arc: {} {}", m.u + 1, m.w + 1)?;
        }
        ok &= missing.is_none();
        let topo = t.check_topological(g);
        writeln!(out, "topological: {}", yes(topo.is_ok()))?;
        ok &= topo.is_ok();
        if topo.is_ok() {
            let umb = is_umbrella_free(g, &t);
            writeln!(out, "umbrella_free: {}", yes(umb.is_ok()))?;
            if let Err(u) = umb {
                writeln!(out, "umbrella: {} {} {}", u.u + 1, u.w + 1, u.v + 1)?;
            }
            ok &= umb.is_ok();
        }
    } else if header.starts_with("p tw") {
        let g = parse_tw_graph(&text).map_err(input(path))?;
        let Some(p) = td_path else {
            return Err(CliError::Input("verifying a `p tw` graph needs --td".into()));
        };
        let td = parse_td(&read(p)?).map_err(input(p))?;
        match td.validate(&g) {
            Ok(()) => {
                writeln!(out, "decomposition: ok")?;
                writeln!(out, "width: {}", td.width())?;
            }
            Err(v) => {
                writeln!(out, "decomposition: {v}")?;
                ok = false;
            }
        }
    } else {
        return Err(CliError::Input(format!("{path}: expected a `p dag` or `p tw` header")));
    }
    Ok(if ok { 0 } else { 1 })
}

pub fn oracle_lhs(out: &mut dyn Write, path: &str) -> Outcome {
    for values in parse_sequences(&read(path)?).map_err(input(path))? {
        let s = Sequence::from_values(&values);
        let v = brute_lhs(s.items(), &budget(12)).map_err(input("oracle"))?;
        writeln!(out, "{} → {v}", join(&values))?;
    }
    Ok(0)
}

pub fn oracle_directed(out: &mut dyn Write, path: &str) -> Outcome {
    for values in parse_sequences(&read(path)?).map_err(input(path))? {
        let s = Sequence::from_values(&values);
        let v = brute_mbt_directed(&build_permdag(s.items()), &budget(10)).map_err(input("oracle"))?;
        writeln!(out, "{} → {v}", join(&values))?;
    }
    Ok(0)
}

pub fn oracle_mbt(out: &mut dyn Write, path: &str, root: Option<usize>) -> Outcome {
    let g = parse_tw_graph(&read(path)?).map_err(input(path))?;
    let root = match root {
        Some(r) if r == 0 || r > g.n() => return Err(CliError::Input(format!("--root {r} outside 1..={}", g.n()))),
        r => r.map(|r| r - 1),
    };
    writeln!(out, "{path} → {}", oracle_tree_size(&g, root)?)?;
    Ok(0)
}

pub fn oracle_alphabet(out: &mut dyn Write, path: &str, order: Option<&str>) -> Outcome {
    let (file, t) = load_dag(path, order)?;
    check_order(&file.graph, &t)?;
    let n = file.graph.n() as u32;
    let v = brute_gamma_alpha(&file.graph, &t, n, &budget(6)).map_err(input("oracle"))?;
    writeln!(out, "{path} → {v}")?;
    Ok(if v == Alpha::Infinite { 1 } else { 0 })
}

pub fn oracle_dag_alpha(out: &mut dyn Write, path: &str) -> Outcome {
    let file = parse_dag(&read(path)?).map_err(input(path))?;
    let v = brute_alpha(&file.graph, &budget(7)).map_err(input("oracle"))?;
    writeln!(out, "{path} → {v}")?;
    Ok(if v == Alpha::Infinite { 1 } else { 0 })
}
