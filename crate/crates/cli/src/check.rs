use anyhow::{Context, Result};
use pa_core::invariants::{run_pipeline, Input, SurfaceReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EpsilonChoice {
    Both,
    Plus,
    Minus,
}

impl EpsilonChoice {
    pub fn values(self) -> Vec<i32> {
        match self {
            EpsilonChoice::Both => vec![1, -1],
            EpsilonChoice::Plus => vec![1],
            EpsilonChoice::Minus => vec![-1],
        }
    }
}

/// Outcome of `check`: the report (absent on malformed input) and the exit code.
pub struct CheckOutcome {
    pub report: Option<SurfaceReport>,
    pub exit_code: i32,
    pub message: String,
}

pub fn parse_input(text: &str) -> Result<Input> {
    let input: Input = serde_json::from_str(text).context("input is not a valid φ/matrix JSON object")?;
    if input.phi.is_none() && input.matrix.is_none() {
        anyhow::bail!("input needs \"phi\" or \"matrix\"");
    }
    Ok(input)
}

pub fn check_text(text: &str, eps: EpsilonChoice) -> CheckOutcome {
    let input = match parse_input(text) {
        Ok(i) => i,
        Err(e) => return CheckOutcome { report: None, exit_code: 2, message: format!("{e:#}") },
    };
    let report = match run_pipeline(&input, &eps.values()) {
        Ok(r) => r,
        Err(e) => return CheckOutcome { report: None, exit_code: 2, message: e },
    };
    let (exit_code, message) = verdict(&report);
    CheckOutcome { report: Some(report), exit_code, message }
}

fn verdict(r: &SurfaceReport) -> (i32, String) {
    if let Some(g) = r.failed_gate() {
        return (1, format!("gate {} failed: {}", g.gate, g.witness.as_deref().unwrap_or("")));
    }
    if let Some(e) = r.epsilons.iter().find(|e| e.satisfied) {
        return (0, format!("ε = {:+} satisfied through sphere verification", e.epsilon));
    }
    let first = r
        .epsilons
        .iter()
        .find_map(|e| e.gates.iter().find(|g| !g.passed).map(|g| (e.epsilon, g)));
    match first {
        Some((eps, g)) => (1, format!("ε = {eps:+}: gate {} failed: {}", g.gate, g.witness.as_deref().unwrap_or(""))),
        None => (1, "no ε requested".into()),
    }
}
