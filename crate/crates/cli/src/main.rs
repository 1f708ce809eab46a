//! `revanneal`: landscapes, phase diagrams and annealing dynamics from the command line.

mod options;
mod plan;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use options::Options;
use plan::Job;

#[derive(Parser)]
#[command(name = "revanneal", version, about = "Reverse-annealing landscapes, phase diagrams and dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Phi(m_u, m_d) on a grid plus its refined minima.
    Landscape(Options),
    /// Phi'(m_d) = min over m_u of Phi.
    ReducedLandscape(Options),
    /// Equilibrium m over the (s, lambda) square, transition edges and feasible paths.
    PhaseDiagram(Options),
    /// Whether a path crosses a transition edge of the phase diagram.
    CheckPath(Options),
    /// Mean-field trajectory along a path.
    Evolve(Options),
    /// Final Delta m for a list of runtimes.
    TauSweep(Options),
    /// Mean-field trajectory against the finite-N reference simulation.
    OracleCompare(Options),
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    let body = json!({ "error": kind, "message": message });
    let _ = writeln!(std::io::stderr(), "{body}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.to_string().trim(), 2),
    };
    let (command, opts) = match cli.command {
        Command::Landscape(o) => ("landscape", o),
        Command::ReducedLandscape(o) => ("reduced-landscape", o),
        Command::PhaseDiagram(o) => ("phase-diagram", o),
        Command::CheckPath(o) => ("check-path", o),
        Command::Evolve(o) => ("evolve", o),
        Command::TauSweep(o) => ("tau-sweep", o),
        Command::OracleCompare(o) => ("oracle-compare", o),
    };

    let job = match opts.resolve().and_then(|o| Job::plan(command, o)) {
        Ok(job) => job,
        Err(message) => return fail("usage", &message, 2),
    };
    if let Some(n) = job.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return fail("usage", &format!("cannot start {n} threads: {e}"), 2);
        }
    }
    let out_dir = job.out_dir.clone();
    match job.run() {
        Ok(done) => match write_all(&out_dir, &done.files) {
            Ok(()) => {
                println!("{}", done.summary);
                ExitCode::SUCCESS
            }
            Err(e) => fail("io", &e, 1),
        },
        Err(e) => fail("domain", &format!("{command}: {e}"), 1),
    }
}

/// Stages every file in a temporary sibling, then renames them into place.
fn write_all(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let mut staged = Vec::with_capacity(files.len());
    for (name, bytes) in files {
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| format!("temp file in {}: {e}", dir.display()))?;
        tmp.write_all(bytes).and_then(|_| tmp.as_file().sync_all()).map_err(|e| format!("writing {name}: {e}"))?;
        staged.push((tmp, dir.join(name)));
    }
    for (tmp, target) in staged {
        tmp.persist(&target).map_err(|e| format!("renaming into {}: {e}", target.display()))?;
    }
    Ok(())
}
