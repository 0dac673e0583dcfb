//! `heapfpt`: command-line front end.
//!
//! Exit status: 0 on success, 1 when the answer is infeasible or infinite,
//! 2 on bad input, 3 if the internal cross-checks disagree.

mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "heapfpt", version, about = "Heapable subsequences, permutation-DAG alphabets and binary trees")]
struct Cli {
    /// Add human-readable summary lines.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Longest heapable subsequence of each input line.
    Lhs {
        /// Sequence file, `-` for stdin.
        #[arg(default_value = "-")]
        input: String,
        /// Print the 1-based indices of one longest heapable subsequence.
        #[arg(long)]
        witness: bool,
        /// Treat the input as one stream of labels and print running lengths.
        #[arg(long)]
        stream: bool,
        /// With --stream: labels are already in 1..=K, read them lazily.
        #[arg(long, value_name = "K", requires = "stream")]
        alphabet: Option<u32>,
        /// Also run the exhaustive oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// γ-alphabet size of a DAG under an ordering.
    Alphabet {
        /// `p dag` file, `-` for stdin.
        graph: String,
        /// Ordering file; defaults to the `o` line of the graph, then 1..n.
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        oracle: bool,
    },
    /// Maximum binary tree of an undirected graph.
    Mbt {
        /// `p tw` file, `-` for stdin.
        graph: String,
        /// PACE `.td` decomposition.
        #[arg(long, conflicts_with = "heuristic_td")]
        td: Option<String>,
        /// Build a min-degree decomposition instead of reading one.
        #[arg(long)]
        heuristic_td: bool,
        /// Solve the rooted variant at this (1-based) vertex.
        #[arg(long)]
        root: Option<usize>,
        #[arg(long)]
        oracle: bool,
    },
    /// Print PermDAG of a sequence in `p dag` format.
    Permdag {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Check transitivity and umbrella-freeness of a DAG, or a decomposition.
    Verify {
        /// `p dag` or `p tw` file.
        input: String,
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        td: Option<String>,
    },
    /// Exhaustive reference values, as `input -> value` lines.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Longest heapable subsequence of each line.
    Lhs {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Largest in-tree of PermDAG of each line.
    Directed {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Largest binary tree of a `p tw` graph.
    Mbt {
        graph: String,
        #[arg(long)]
        root: Option<usize>,
    },
    /// γ-alphabet size by trying every labelling.
    Alphabet {
        graph: String,
        #[arg(long)]
        order: Option<String>,
    },
    /// Alphabet size over all topological orders.
    DagAlpha { graph: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let o: &mut dyn Write = &mut out;
    let result = match cli.command {
        Command::Lhs { input, witness, stream, alphabet, oracle } => {
            commands::lhs(o, &input, commands::LhsFlags { witness, stream, alphabet, oracle, pretty: cli.pretty })
        }
        Command::Alphabet { graph, order, oracle } => commands::alphabet(o, &graph, order.as_deref(), oracle, cli.pretty),
        Command::Mbt { graph, td, heuristic_td, root, oracle } => {
            commands::mbt(o, &graph, td.as_deref(), heuristic_td, root, oracle, cli.pretty)
        }
        Command::Permdag { input } => commands::permdag(o, &input),
        Command::Verify { input, order, td } => commands::verify(o, &input, order.as_deref(), td.as_deref()),
        Command::Oracle { which } => match which {
            OracleCommand::Lhs { input } => commands::oracle_lhs(o, &input),
            OracleCommand::Directed { input } => commands::oracle_directed(o, &input),
            OracleCommand::Mbt { graph, root } => commands::oracle_mbt(o, &graph, root),
            OracleCommand::Alphabet { graph, order } => commands::oracle_alphabet(o, &graph, order.as_deref()),
            OracleCommand::DagAlpha { graph } => commands::oracle_dag_alpha(o, &graph),
        },
    };
    let _ = out.flush();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("heapfpt: {e}");
            ExitCode::from(e.code())
        }
    }
}
