use std::collections::BTreeMap;
use std::io::Write;

use anyhow::{bail, Result};
use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use pa_core::invariants::{run_pipeline, Input, SurfaceReport};

pub const MAX_N: usize = 9;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateFlags {
    pub nonsingular: bool,
    pub aperiodic: bool,
    pub minimal: bool,
    pub one_sided: bool,
    pub align_plus: bool,
    pub align_minus: bool,
    pub sphere: bool,
}

impl GateFlags {
    pub fn bitmask(&self) -> u8 {
        [
            self.nonsingular,
            self.aperiodic,
            self.minimal,
            self.one_sided,
            self.align_plus,
            self.align_minus,
            self.sphere,
        ]
        .iter()
        .enumerate()
        .fold(0, |m, (k, &b)| m | (u8::from(b) << k))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub n: usize,
    pub phi: Vec<usize>,
    pub gates: GateFlags,
    pub minpoly: Option<String>,
    pub lambda: Option<String>,
    pub genus: Option<i64>,
    pub palindromic: Option<String>,
    /// ε values that reach a verified sphere.
    pub satisfied: Vec<i32>,
}

impl CensusRecord {
    pub fn from_report(phi: &[usize], r: &SurfaceReport) -> Self {
        let passed = |g: &str| r.gate(g).is_some_and(|v| v.passed);
        let eps_passed = |eps: i32, g: &str| {
            r.epsilon(eps)
                .is_some_and(|e| e.gates.iter().any(|v| v.gate == g && v.passed))
        };
        let satisfied: Vec<i32> = r.epsilons.iter().filter(|e| e.satisfied).map(|e| e.epsilon).collect();
        let genus = r.epsilons.iter().find(|e| e.satisfied).and_then(|e| e.genus);
        CensusRecord {
            n: phi.len() - 1,
            phi: phi.to_vec(),
            gates: GateFlags {
                nonsingular: passed("nonsingular"),
                aperiodic: passed("aperiodic"),
                minimal: passed("minimal"),
                one_sided: passed("one_sided"),
                align_plus: eps_passed(1, "alignment"),
                align_minus: eps_passed(-1, "alignment"),
                sphere: !satisfied.is_empty(),
            },
            minpoly: r.lambda.as_ref().map(|l| l.minpoly.clone()),
            lambda: r.lambda.as_ref().map(|l| l.decimal.clone()),
            genus,
            palindromic: r.chi.as_ref().map(|c| c.palindromic.label()),
            satisfied,
        }
    }
}

pub fn evaluate(phi: &[usize]) -> CensusRecord {
    let input = Input { phi: Some(phi.to_vec()), matrix: None };
    let report = run_pipeline(&input, &[1, -1]).expect("φ input is well formed");
    CensusRecord::from_report(phi, &report)
}

/// Every permutation of `{0..n}` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    (0..=n).permutations(n + 1).collect()
}

pub fn run(n: usize, jobs: usize) -> Result<Vec<CensusRecord>> {
    if n == 0 || n > MAX_N {
        bail!("census is limited to 1 ≤ n ≤ {MAX_N}; got n = {n}");
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let mut records: Vec<CensusRecord> =
        pool.install(|| permutations(n).par_iter().map(|phi| evaluate(phi)).collect());
    records.sort_by(|a, b| a.phi.cmp(&b.phi));
    Ok(records)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub examined: usize,
    pub passed: BTreeMap<String, usize>,
}

pub fn summarize(n: usize, records: &[CensusRecord]) -> Summary {
    let mut passed = BTreeMap::new();
    let names = ["nonsingular", "aperiodic", "minimal", "one_sided", "align_plus", "align_minus", "sphere"];
    for (k, name) in names.iter().enumerate() {
        let c = records.iter().filter(|r| r.gates.bitmask() & (1 << k) != 0).count();
        passed.insert((*name).to_string(), c);
    }
    Summary { n, examined: records.len(), passed }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).join(" ")
}

pub fn write_csv<W: Write>(out: W, records: &[CensusRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n",
        "phi",
        "nonsingular",
        "aperiodic",
        "minimal",
        "one_sided",
        "align_plus",
        "align_minus",
        "sphere",
        "minpoly",
        "lambda_12digits",
        "genus",
        "palindromic_verdicts",
    ])?;
    let flag = |b: bool| if b { "1" } else { "0" }.to_string();
    for r in records {
        let g = &r.gates;
        w.write_record([
            r.n.to_string(),
            join(&r.phi),
            flag(g.nonsingular),
            flag(g.aperiodic),
            flag(g.minimal),
            flag(g.one_sided),
            flag(g.align_plus),
            flag(g.align_minus),
            flag(g.sphere),
            r.minpoly.clone().unwrap_or_default(),
            r.lambda.clone().unwrap_or_default(),
            r.genus.map(|g| g.to_string()).unwrap_or_default(),
            r.palindromic.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_jsonl<W: Write>(mut out: W, records: &[CensusRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
