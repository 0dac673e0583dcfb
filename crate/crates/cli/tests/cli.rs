use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str], stdin: &str) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_heapfpt"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn file(dir: &TempDir, name: &str, text: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

// a, b, c, d = 1, 2, 3, 4
const TWO_LETTER: &str = "p dag 4 3\na 2 1\na 4 1\na 4 3\no 3 1 4 2\n";
const UMBRELLA: &str = "p dag 4 4\na 2 1\na 3 1\na 4 1\na 4 2\no 1 2 3 4\n";
const K4: &str = "p tw 4 6\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";
const STAR: &str = "p tw 6 5\n1 2\n1 3\n1 4\n1 5\n1 6\n";
const P5: &str = "p tw 5 4\n1 2\n2 3\n3 4\n4 5\n";
const P5_TD: &str = "s td 4 2 5\nb 1 1 2\nb 2 2 3\nb 3 3 4\nb 4 4 5\n1 2\n2 3\n3 4\n";

#[test]
fn lhs_examples() {
    let r = run(&["lhs"], "1 3 3 2 4\n");
    assert_eq!((r.code, r.stdout.as_str()), (0, "length: 5\n"));
    let r = run(&["lhs", "-"], "");
    assert_eq!((r.code, r.stdout.as_str()), (0, "length: 0\n"));
    let r = run(&["lhs", "--stream"], "2 1\n");
    assert_eq!((r.code, r.stdout.as_str()), (0, "1\n1\n"));
    let r = run(&["lhs", "--stream", "--alphabet", "2"], "2 1\n");
    assert_eq!((r.code, r.stdout.as_str()), (0, "1\n1\n"));
}

#[test]
fn lhs_witness_and_oracle() {
    let r = run(&["lhs", "--witness", "--oracle"], "1 5 3 2 4\n");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines[0], "length: 4");
    assert_eq!(lines[2], "oracle: 4");
    let idx: Vec<usize> = lines[1].strip_prefix("indices: ").unwrap().split(' ').map(|x| x.parse().unwrap()).collect();
    assert_eq!(idx.len(), 4);
    assert!(idx.windows(2).all(|w| w[0] < w[1]) && idx[0] >= 1 && idx[3] <= 5);
}

#[test]
fn lhs_bad_input() {
    let r = run(&["lhs"], "1 2\n3 x\n");
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);
}

#[test]
fn alphabet_examples() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "two.dag", TWO_LETTER);
    let r = run(&["alphabet", &g], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("alpha: 2\n"));
    assert!(r.stdout.contains("sequence: 2 1 2 1\n"));
    assert!(r.stdout.contains("lp_value: 2\n"));

    let empty = file(&dir, "empty.dag", "p dag 3 0\n");
    let r = run(&["alphabet", &empty], "");
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("alpha: 3\n"));

    let g = file(&dir, "umbrella.dag", UMBRELLA);
    let r = run(&["alphabet", &g, "--oracle"], "");
    assert_eq!(r.code, 1);
    assert!(r.stdout.starts_with("alpha: inf\n"));
    assert!(r.stdout.contains("umbrella 2 3 4"), "{}", r.stdout);
}

#[test]
fn alphabet_order_errors() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g.dag", "p dag 2 1\na 2 1\n");
    let order = file(&dir, "g.ord", "o 2 1\n");
    let r = run(&["alphabet", &g, "--order", &order], "");
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("arc (2, 1)"), "{}", r.stderr);
    let r = run(&["alphabet", "/nonexistent/file.dag"], "");
    assert_eq!(r.code, 2);
}

#[test]
fn mbt_examples() {
    let dir = TempDir::new().unwrap();
    let p5 = file(&dir, "p5.gr", P5);
    let td = file(&dir, "p5.td", P5_TD);
    let r = run(&["mbt", &p5, "--td", &td], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.lines().next(), Some("size: 5"));
    assert_eq!(r.stdout.lines().filter(|l| l.starts_with("edge: ")).count(), 4);

    let k4 = file(&dir, "k4.gr", K4);
    let r = run(&["mbt", &k4, "--heuristic-td", "--oracle"], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("size: 4\n"));

    let star = file(&dir, "star.gr", STAR);
    let r = run(&["mbt", &star, "--heuristic-td", "--root", "1"], "");
    assert!(r.stdout.starts_with("size: 3\n"));
    let r = run(&["mbt", &star, "--heuristic-td"], "");
    assert!(r.stdout.starts_with("size: 4\n"));
}

#[test]
fn mbt_rejects_bad_decompositions() {
    let dir = TempDir::new().unwrap();
    let p5 = file(&dir, "p5.gr", P5);
    let no_edge = file(&dir, "a.td", "s td 2 3 5\nb 1 1 2 3\nb 2 4 5\n1 2\n");
    let r = run(&["mbt", &p5, "--td", &no_edge], "");
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("T2"), "{}", r.stderr);
    let no_vertex = file(&dir, "b.td", "s td 1 4 5\nb 1 1 2 3 4\n");
    let r = run(&["mbt", &p5, "--td", &no_vertex], "");
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("T1"), "{}", r.stderr);
    let split = file(&dir, "c.td", "s td 3 3 5\nb 1 1 2 3\nb 2 3 4 5\nb 3 1\n1 2\n2 3\n");
    let r = run(&["mbt", &p5, "--td", &split], "");
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("T3"), "{}", r.stderr);
    let r = run(&["mbt", &p5], "");
    assert_eq!(r.code, 2);
}

#[test]
fn permdag_examples() {
    let r = run(&["permdag"], "2 3 1 2\n");
    assert_eq!(r.code, 0);
    let mut arcs: Vec<&str> = r.stdout.lines().filter(|l| l.starts_with("a ")).collect();
    arcs.sort();
    assert_eq!(arcs, ["a 2 1", "a 4 1", "a 4 3"]);
    let r = run(&["permdag"], "1\n");
    assert_eq!(r.stdout.lines().next(), Some("p dag 1 0"));
    let r = run(&["permdag"], "2 1 2 1\n");
    let mut arcs: Vec<&str> = r.stdout.lines().filter(|l| l.starts_with("a ")).collect();
    arcs.sort();
    assert_eq!(arcs, ["a 3 1", "a 3 2", "a 4 2"]);
}

#[test]
fn permdag_output_feeds_alphabet() {
    let dir = TempDir::new().unwrap();
    let r = run(&["permdag"], "3 1 2 2 1 3\n");
    let g = file(&dir, "g.dag", &r.stdout);
    let r = run(&["alphabet", &g], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("alpha: 3\n"), "{}", r.stdout);
    let r = run(&["verify", &g], "");
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("transitive: yes"));
    assert!(r.stdout.contains("umbrella_free: yes"));
}

#[test]
fn verify_reports() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "umbrella.dag", UMBRELLA);
    let r = run(&["verify", &g], "");
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("umbrella: 2 3 4"), "{}", r.stdout);
    let path = file(&dir, "path.dag", "p dag 3 2\na 3 2\na 2 1\n");
    let r = run(&["verify", &path], "");
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("transitive: no"));
    let p5 = file(&dir, "p5.gr", P5);
    let td = file(&dir, "p5.td", P5_TD);
    let r = run(&["verify", &p5, "--td", &td], "");
    assert_eq!((r.code, r.stdout.as_str()), (0, "decomposition: ok\nwidth: 1\n"));
}

#[test]
fn oracle_subcommands() {
    let r = run(&["oracle", "lhs"], "1 5 3 2 4\n2 1\n");
    assert_eq!(r.stdout, "1 5 3 2 4 → 4\n2 1 → 1\n");
    let r = run(&["oracle", "directed"], "1 5 3 2 4\n");
    assert_eq!(r.stdout, "1 5 3 2 4 → 4\n");
    let dir = TempDir::new().unwrap();
    let k4 = file(&dir, "k4.gr", K4);
    let r = run(&["oracle", "mbt", &k4], "");
    assert!(r.stdout.ends_with("→ 4\n"), "{}", r.stdout);
    let g = file(&dir, "two.dag", TWO_LETTER);
    let r = run(&["oracle", "alphabet", &g], "");
    assert!(r.stdout.ends_with("→ 2\n"), "{}", r.stdout);
    let r = run(&["oracle", "dag-alpha", &g], "");
    assert_eq!(r.code, 0);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let k4 = file(&dir, "k4.gr", K4);
    let a = run(&["mbt", &k4, "--heuristic-td", "--pretty"], "");
    let b = run(&["mbt", &k4, "--heuristic-td", "--pretty"], "");
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.lines().any(|l| l.starts_with("# ")));
}
