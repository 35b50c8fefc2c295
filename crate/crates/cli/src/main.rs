//! `boxlab`: batch runner for the free product, tower, expansion, embedding
//! and tree partition experiments.

mod commands;
mod error;
mod output;
mod params;
mod spec;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;
use crate::params::Params;

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
struct Common {
    /// key=value configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for CSV and JSON reports. Without it the JSON report goes to stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Seed for randomised checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Size cap overriding the module default and BOXLAB_CAP.
    #[arg(long, global = true)]
    cap: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a finite group and summarise it.
    Group {
        #[arg(long)]
        spec: Option<String>,
        /// Write the multiplication table to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Permutation representations of A⋆B on truncated word sets.
    Baumslag {
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        /// Radius of the faithfulness ball (defaults to k).
        #[arg(long)]
        radius: Option<usize>,
        /// witness, exact or none.
        #[arg(long)]
        cheeger: Option<String>,
        /// A, B or auto (the smaller set).
        #[arg(long)]
        side: Option<String>,
    },
    /// Square-quotient tower levels, walls and profiles.
    Tower {
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        /// Also write wall signature tables.
        #[arg(long)]
        signatures: bool,
    },
    /// Bass–Serre tree ball and the basis length comparison.
    Bassserre {
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        /// Radius of the exported tree ball.
        #[arg(long)]
        radius: Option<usize>,
        /// Radius of the basis ball for the length comparison.
        #[arg(long)]
        qi_radius: Option<usize>,
    },
    /// Exact and spectral Cheeger constants.
    Cheeger {
        /// Graph file (`graph V E` then `u v label` lines).
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Cycle length.
        #[arg(long)]
        cycle: Option<usize>,
        /// Group spec for a Cayley graph.
        #[arg(long)]
        group: Option<String>,
        /// Comma-separated generator indices (default: all non-identity elements).
        #[arg(long)]
        gens: Option<String>,
        /// Comma-separated subgroup elements for the quotient comparison.
        #[arg(long)]
        subgroup: Option<String>,
        /// Run the quotient comparison over the group library up to this order.
        #[arg(long)]
        sweep: Option<usize>,
    },
    /// Gaussian families and direct sums over a tower level.
    Embed {
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        level: Option<usize>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        lmax: Option<usize>,
    },
    /// Coarse disjoint union of tower levels.
    Union {
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        /// Comma-separated radii for the boundedness check.
        #[arg(long)]
        radii: Option<String>,
    },
    /// Annulus partitions of random trees and equi-exactness certificates.
    Treepartition {
        #[arg(long)]
        trees: Option<usize>,
        #[arg(long)]
        min_size: Option<usize>,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Comma-separated scales for the decomposition checks.
        #[arg(long)]
        scales: Option<String>,
        #[arg(long = "R")]
        r: Option<u32>,
        #[arg(long)]
        eps: Option<f64>,
        /// Write the weights of the first tree.
        #[arg(long)]
        weights: bool,
    },
    /// Quotient lengths on G/M_k against the tower metric.
    Extension {
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run the invariant suite and print PASS/FAIL per invariant.
    Verify {
        /// Also validate this group table file.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Number of random trees in the partition check.
        #[arg(long)]
        trees: Option<usize>,
    },
}

#[derive(Parser, Debug)]
#[command(name = "boxlab", version, about = "Finite quotients of free products: towers, expansion and embeddings")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

fn some<T: ToString>(v: &Option<T>) -> Option<String> {
    v.as_ref().map(ToString::to_string)
}

fn flag(v: bool) -> Option<String> {
    v.then(|| "true".to_string())
}

fn run(common: Common, command: Command) -> Result<bool, CliError> {
    let mut flags = vec![("seed", some(&common.seed)), ("cap", some(&common.cap))];
    let module: &'static str;
    match &command {
        Command::Group { spec, out } => {
            module = "group";
            flags.extend([("spec", some(spec)), ("out", out.as_ref().map(|p| p.display().to_string()))]);
        }
        Command::Baumslag { a, b, k, radius, cheeger, side } => {
            module = "baumslag";
            flags.extend([
                ("a", some(a)),
                ("b", some(b)),
                ("k", some(k)),
                ("radius", some(radius)),
                ("cheeger", some(cheeger)),
                ("side", some(side)),
            ]);
        }
        Command::Tower { rank, depth, signatures } => {
            module = "tower";
            flags.extend([("rank", some(rank)), ("depth", some(depth)), ("signatures", flag(*signatures))]);
        }
        Command::Bassserre { a, b, radius, qi_radius } => {
            module = "bassserre";
            flags.extend([("a", some(a)), ("b", some(b)), ("radius", some(radius)), ("qi_radius", some(qi_radius))]);
        }
        Command::Cheeger { graph, cycle, group, gens, subgroup, sweep } => {
            module = "cheeger";
            flags.extend([
                ("graph", graph.as_ref().map(|p| p.display().to_string())),
                ("cycle", some(cycle)),
                ("group", some(group)),
                ("gens", some(gens)),
                ("subgroup", some(subgroup)),
                ("sweep", some(sweep)),
            ]);
        }
        Command::Embed { rank, level, t, lmax } => {
            module = "embed";
            flags.extend([("rank", some(rank)), ("level", some(level)), ("t", some(t)), ("lmax", some(lmax))]);
        }
        Command::Union { rank, depth, radii } => {
            module = "union";
            flags.extend([("rank", some(rank)), ("depth", some(depth)), ("radii", some(radii))]);
        }
        Command::Treepartition { trees, min_size, max_size, max_degree, scales, r, eps, weights } => {
            module = "treepartition";
            flags.extend([
                ("trees", some(trees)),
                ("min_size", some(min_size)),
                ("max_size", some(max_size)),
                ("max_degree", some(max_degree)),
                ("scales", some(scales)),
                ("R", some(r)),
                ("eps", some(eps)),
                ("weights", flag(*weights)),
            ]);
        }
        Command::Extension { a, b, k } => {
            module = "extension";
            flags.extend([("a", some(a)), ("b", some(b)), ("k", some(k))]);
        }
        Command::Verify { table, trees } => {
            module = "verify";
            flags.extend([("table", table.as_ref().map(|p| p.display().to_string())), ("trees", some(trees))]);
        }
    }
    let mut params = Params::resolve(common.config.as_deref(), flags)?;
    let out = output::Output::new(common.report, module)?;
    match command {
        Command::Group { .. } => commands::group(&mut params, &out),
        Command::Baumslag { .. } => commands::baumslag(&mut params, &out),
        Command::Tower { .. } => commands::tower(&mut params, &out),
        Command::Bassserre { .. } => commands::bassserre(&mut params, &out),
        Command::Cheeger { .. } => commands::cheeger(&mut params, &out),
        Command::Embed { .. } => commands::embed(&mut params, &out),
        Command::Union { .. } => commands::union(&mut params, &out),
        Command::Treepartition { .. } => commands::treepartition(&mut params, &out),
        Command::Extension { .. } => commands::extension(&mut params, &out),
        Command::Verify { .. } => verify::verify(&mut params, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.common, cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("boxlab: one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("boxlab: {e}");
            ExitCode::from(2)
        }
    }
}
