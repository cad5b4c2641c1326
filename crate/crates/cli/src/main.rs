use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use pa_cli::check::{check_text, EpsilonChoice};
use pa_cli::render::{render, Figure};
use pa_cli::census;

#[derive(Parser)]
#[command(name = "pafold", version, about = "Pseudo-Anosov maps from odd-block matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Sign {
    Plus,
    Minus,
}

#[derive(Subcommand)]
enum Command {
    /// Run every gate and write the JSON report.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        epsilon: EpsilonChoice,
        /// Report destination; stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Evaluate every permutation of {0..n}.
    Census {
        #[arg(long)]
        n: usize,
        /// `.jsonl` writes JSON lines, anything else CSV.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Draw SVG figures of the construction.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        epsilon: Sign,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "h,p0,rows,f0,gluing")]
        figures: Vec<Figure>,
        #[arg(long)]
        outdir: PathBuf,
    },
}

fn run_check(input: PathBuf, epsilon: EpsilonChoice, report: Option<PathBuf>) -> Result<u8> {
    let text = match std::fs::read_to_string(&input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", input.display());
            return Ok(2);
        }
    };
    let outcome = check_text(&text, epsilon);
    if let Some(r) = &outcome.report {
        let json = serde_json::to_string_pretty(r)? + "\n";
        match report {
            Some(path) => std::fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{json}"),
        }
    }
    eprintln!("{}", outcome.message);
    Ok(outcome.exit_code as u8)
}

fn run_census(n: usize, out: PathBuf, jobs: usize) -> Result<u8> {
    if n == 0 || n > census::MAX_N {
        eprintln!("census supports 1 ≤ n ≤ {}, got {n}", census::MAX_N);
        return Ok(2);
    }
    let records = census::run(n, jobs)?;
    let file = BufWriter::new(File::create(&out).with_context(|| format!("creating {}", out.display()))?);
    if out.extension().is_some_and(|e| e == "jsonl") {
        census::write_jsonl(file, &records)?;
    } else {
        census::write_csv(file, &records)?;
    }
    println!("{}", serde_json::to_string_pretty(&census::summarize(n, &records))?);
    Ok(0)
}

fn run_render(input: PathBuf, epsilon: Sign, figures: Vec<Figure>, outdir: PathBuf) -> Result<u8> {
    let text = std::fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
    let eps = match epsilon {
        Sign::Plus => 1,
        Sign::Minus => -1,
    };
    match render(&text, eps, &figures, &outdir) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            Ok(0)
        }
        Err(e) => {
            eprintln!("{e:#}");
            Ok(1)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { input, epsilon, report } => run_check(input, epsilon, report),
        Command::Census { n, out, jobs } => run_census(n, out, jobs),
        Command::Render { input, epsilon, figures, outdir } => run_render(input, epsilon, figures, outdir),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
