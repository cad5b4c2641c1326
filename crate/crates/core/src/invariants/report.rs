//! The full gate pipeline and its serializable report.

use serde::{Deserialize, Serialize};

use super::{double_cover, homology_action, palindromic_class, singularity_data, PalindromicVerdict};
use crate::alignment::{check, AlignmentVerdict};
use crate::boxcomplex::{build_f0, build_p0, vertical_closure, ExactValue, IsometryCase};
use crate::exactnum::{
    char_poly, determinant, eigenvector, factor, is_bi_perron, perron_root, AlgebraicReal, FieldScalar,
    NumberField, Side,
};
use crate::intervalmap::build_h;
use crate::oddblock::{
    from_phi, infer_phi, is_aperiodic, is_nonsingular, is_permutation, minimality, validate_odd_block, Minimality,
    OddBlockMatrix,
};

pub const REPORT_VERSION: &str = "1";

/// Either `phi`, or `matrix` with an optional `phi` to cross-check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Input {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateVerdict {
    pub gate: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl GateVerdict {
    fn pass(gate: &str) -> Self {
        GateVerdict { gate: gate.into(), passed: true, witness: None }
    }

    fn fail(gate: &str, witness: impl Into<String>) -> Self {
        GateVerdict { gate: gate.into(), passed: false, witness: Some(witness.into()) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaReport {
    pub minpoly: String,
    pub minpoly_coefficients: Vec<String>,
    pub interval: [String; 2],
    pub decimal: String,
    pub bi_perron: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorReport {
    pub factor: String,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiReport {
    pub polynomial: String,
    pub coefficients: Vec<String>,
    pub factors: Vec<FactorReport>,
    pub palindromic: PalindromicVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeReport {
    pub label: String,
    /// Angle divided by π, as an exact decimal string.
    pub angle_over_pi: String,
    pub prongs: u32,
    pub branched: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldReport {
    pub index: usize,
    pub critical: bool,
    pub center: ExactValue,
    pub radius: ExactValue,
    pub direct_extent: ExactValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub matrix: Vec<Vec<i64>>,
    pub normalization: Vec<i64>,
    pub matches_m: bool,
    pub intersection: Vec<Vec<i64>>,
    pub preserves_form: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonReport {
    pub epsilon: i32,
    pub gates: Vec<GateVerdict>,
    pub satisfied: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alignment: Option<Vec<i32>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub row_cases: Vec<IsometryCase>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rotated_rows: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub residual: Vec<ExactValue>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub folds: Vec<FoldReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cone_points: Vec<ConeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_characteristic: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_defect_over_pi: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub branch_points: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singularities: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homology: Option<HomologyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area: Option<ExactValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub version: String,
    pub input: Input,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<usize>>,
    pub gates: Vec<GateVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<LambdaReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<ChiReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub determinant: Option<String>,
    pub epsilons: Vec<EpsilonReport>,
}

impl SurfaceReport {
    /// The first failed shared gate, if any.
    pub fn failed_gate(&self) -> Option<&GateVerdict> {
        self.gates.iter().find(|g| !g.passed)
    }

    pub fn epsilon(&self, eps: i32) -> Option<&EpsilonReport> {
        self.epsilons.iter().find(|e| e.epsilon == eps)
    }

    pub fn gate(&self, name: &str) -> Option<&GateVerdict> {
        self.gates.iter().find(|g| g.gate == name)
    }
}

fn fmt_phi(phi: &[usize]) -> String {
    format!("{phi:?}")
}

/// Resolves the input to a {0,1} odd-block matrix, recording gates.
fn resolve(input: &Input, gates: &mut Vec<GateVerdict>) -> Result<Option<OddBlockMatrix>, String> {
    match (&input.phi, &input.matrix) {
        (None, None) => Err("input needs \"phi\" or \"matrix\"".into()),
        (Some(phi), None) => match from_phi(phi) {
            Ok(m) => {
                gates.push(GateVerdict::pass("odd_block"));
                gates.push(GateVerdict::pass("entries"));
                Ok(Some(m))
            }
            Err(e) => {
                gates.push(GateVerdict::fail("odd_block", format!("{e:?}")));
                Ok(None)
            }
        },
        (phi, Some(m)) => {
            if let Some(phi) = phi {
                match validate_odd_block(m, phi) {
                    Ok(v) if v.valid => gates.push(GateVerdict::pass("odd_block")),
                    Ok(v) => {
                        gates.push(GateVerdict::fail("odd_block", format!("{:?}", v.first_violation)));
                        return Ok(None);
                    }
                    Err(e) => {
                        gates.push(GateVerdict::fail("odd_block", format!("{e:?}")));
                        return Ok(None);
                    }
                }
            }
            let candidates = match infer_phi(m) {
                Ok(c) => c,
                Err(e) => {
                    gates.push(GateVerdict::fail("entries", format!("{e:?}")));
                    return Ok(None);
                }
            };
            let chosen = match phi {
                Some(p) if candidates.contains(p) => Some(p.clone()),
                Some(p) => {
                    gates.push(GateVerdict::fail("entries", format!("φ {} does not generate the matrix", fmt_phi(p))));
                    return Ok(None);
                }
                None => candidates.first().cloned(),
            };
            let Some(chosen) = chosen else {
                gates.push(GateVerdict::fail("odd_block", "no φ generates the matrix"));
                return Ok(None);
            };
            if phi.is_none() {
                gates.push(GateVerdict::pass("odd_block"));
            }
            gates.push(GateVerdict::pass("entries"));
            Ok(from_phi(&chosen).ok())
        }
    }
}

/// Runs every gate and the construction for each requested ε.
///
/// Fails only when the input names neither `phi` nor `matrix`; all other
/// problems are reported as failed gates.
pub fn run_pipeline(input: &Input, epsilons: &[i32]) -> Result<SurfaceReport, String> {
    let mut gates = Vec::new();
    let n = input
        .matrix
        .as_ref()
        .map(|m| m.len())
        .or_else(|| input.phi.as_ref().map(|p| p.len().saturating_sub(1)))
        .unwrap_or(0);
    let mut report = SurfaceReport {
        version: REPORT_VERSION.into(),
        input: input.clone(),
        n,
        phi: None,
        gates: Vec::new(),
        lambda: None,
        chi: None,
        determinant: None,
        epsilons: Vec::new(),
    };
    let m = resolve(input, &mut gates)?;
    report.gates = gates;
    let Some(m) = m else { return Ok(report) };
    report.phi = Some(m.phi().to_vec());
    shared_gates(&m, &mut report, epsilons);
    Ok(report)
}

fn shared_gates(m: &OddBlockMatrix, report: &mut SurfaceReport, epsilons: &[i32]) {
    let gates = &mut report.gates;
    let phi = m.phi();
    let entries = m.entries();
    if let (Ok(chi), Ok(det)) = (char_poly(entries), determinant(entries)) {
        report.chi = Some(ChiReport {
            polynomial: chi.to_string(),
            coefficients: chi.coeffs().iter().map(|c| c.to_string()).collect(),
            factors: factor(&chi)
                .into_iter()
                .map(|(f, k)| FactorReport { factor: f.to_string(), multiplicity: k })
                .collect(),
            palindromic: palindromic_class(&chi),
        });
        report.determinant = Some(det.to_string());
    }
    if !is_permutation(phi) {
        gates.push(GateVerdict::fail("permutation", format!("φ = {} repeats a value", fmt_phi(phi))));
        return;
    }
    gates.push(GateVerdict::pass("permutation"));
    if !is_nonsingular(entries) {
        gates.push(GateVerdict::fail("nonsingular", "det M = 0"));
        return;
    }
    gates.push(GateVerdict::pass("nonsingular"));
    if !is_aperiodic(entries) {
        gates.push(GateVerdict::fail("aperiodic", "no positive power below the Wielandt bound"));
        return;
    }
    gates.push(GateVerdict::pass("aperiodic"));
    let lambda = match char_poly(entries).and_then(|c| perron_root(&c)) {
        Ok(l) => l,
        Err(e) => {
            gates.push(GateVerdict::fail("perron", e.to_string()));
            return;
        }
    };
    report.lambda = Some(lambda_report(&lambda));
    if lambda.cmp_rational(&num_rational::BigRational::from_integer(1.into())).is_le() {
        gates.push(GateVerdict::fail("perron", "λ = 1 yields no expansion"));
        return;
    }
    gates.push(GateVerdict::pass("perron"));
    match minimality(phi) {
        Ok(Minimality::Minimal) => gates.push(GateVerdict::pass("minimal")),
        Ok(other) => {
            gates.push(GateVerdict::fail("minimal", format!("{other:?}")));
            return;
        }
        Err(e) => {
            gates.push(GateVerdict::fail("minimal", format!("{e:?}")));
            return;
        }
    }
    let field = NumberField::new(lambda);
    let h = match eigenvector(entries, &field, Side::Left).map_err(|e| e.to_string()).and_then(|w| {
        build_h(m, &field, &w).map_err(|e| e.to_string())
    }) {
        Ok(h) => h,
        Err(e) => {
            gates.push(GateVerdict::fail("interval_map", e));
            return;
        }
    };
    gates.push(GateVerdict::pass("interval_map"));
    if let Err(w) = h.one_sided_check() {
        gates.push(GateVerdict::fail(
            "one_sided",
            format!("x_{} between {} and {}", w.index, w.left.decimal(9), w.right.decimal(9)),
        ));
        return;
    }
    gates.push(GateVerdict::pass("one_sided"));
    let v = match eigenvector(entries, &field, Side::Right) {
        Ok(v) => v,
        Err(e) => {
            gates.push(GateVerdict::fail("interval_map", e.to_string()));
            return;
        }
    };
    for &eps in epsilons {
        report.epsilons.push(epsilon_report(m, &h, &v, eps));
    }
}

fn lambda_report(l: &AlgebraicReal) -> LambdaReport {
    let ok = is_bi_perron(l).unwrap_or(false);
    LambdaReport {
        minpoly: l.minpoly().to_string(),
        minpoly_coefficients: l.minpoly().coeffs().iter().map(|c| c.to_string()).collect(),
        interval: [l.lo().to_string(), l.hi().to_string()],
        decimal: l.decimal(12),
        bi_perron: ok,
    }
}

fn empty_eps(eps: i32) -> EpsilonReport {
    EpsilonReport {
        epsilon: eps,
        gates: Vec::new(),
        satisfied: false,
        alignment: None,
        row_cases: Vec::new(),
        rotated_rows: Vec::new(),
        residual: Vec::new(),
        folds: Vec::new(),
        cone_points: Vec::new(),
        euler_characteristic: None,
        angle_defect_over_pi: None,
        branch_points: Vec::new(),
        genus: None,
        singularities: None,
        homology: None,
        area: None,
    }
}

fn epsilon_report(
    m: &OddBlockMatrix,
    h: &crate::intervalmap::IntervalMap,
    v: &[FieldScalar],
    eps: i32,
) -> EpsilonReport {
    let mut r = empty_eps(eps);
    let assignment = match check(h, eps) {
        Ok(AlignmentVerdict::Satisfied(a)) => a,
        Ok(AlignmentVerdict::GeometricConflict { index, .. }) => {
            r.gates.push(GateVerdict::fail("alignment", format!("geometric_conflict({index})")));
            return r;
        }
        Ok(AlignmentVerdict::NonMinimal { cycle }) => {
            r.gates.push(GateVerdict::fail("alignment", format!("non_minimal({cycle:?})")));
            return r;
        }
        Err(e) => {
            r.gates.push(GateVerdict::fail("alignment", e.to_string()));
            return r;
        }
    };
    r.gates.push(GateVerdict::pass("alignment"));
    r.alignment = Some(assignment.values());
    let built = build_p0(h, m, v, &assignment).and_then(|rc| {
        let f = build_f0(&rc)?;
        let q = vertical_closure(&rc)?;
        Ok((rc, f, q))
    });
    let (rc, f, q) = match built {
        Ok(x) => x,
        Err(e) => {
            r.gates.push(GateVerdict::fail("sphere", e.to_string()));
            return r;
        }
    };
    r.gates.push(GateVerdict::pass("sphere"));
    r.row_cases = f.rows.iter().map(|row| row.case).collect();
    r.rotated_rows = f.rows.iter().filter(|row| row.case == IsometryCase::RotatePi).map(|row| row.row).collect();
    r.residual = q.dynamics.residual().iter().map(ExactValue::of).collect();
    r.folds = q
        .dynamics
        .folds()
        .iter()
        .map(|f| FoldReport {
            index: f.index,
            critical: f.critical,
            center: ExactValue::of(&f.center),
            radius: ExactValue::of(&f.radius),
            direct_extent: ExactValue::of(&f.direct_extent),
        })
        .collect();
    r.euler_characteristic = Some(q.euler_characteristic);
    r.angle_defect_over_pi = Some(half_units(q.angle_defect));
    r.area = Some(ExactValue::of(&rc.shaded_area()));
    let cover = match double_cover(&q) {
        Ok(c) => c,
        Err(e) => {
            r.gates.push(GateVerdict::fail("cover", e.to_string()));
            return r;
        }
    };
    r.cone_points = q
        .cone_points
        .iter()
        .map(|c| ConeReport {
            label: super::cone_label(c),
            angle_over_pi: half_units(i64::from(c.angle_quarter_turns)),
            prongs: c.prongs(),
            branched: c.angle_quarter_turns % 4 == 2,
        })
        .collect();
    r.branch_points = cover.branch_points.clone();
    r.genus = Some(cover.genus);
    match singularity_data(&q, &cover) {
        Ok(s) => r.singularities = Some(s),
        Err(e) => {
            r.gates.push(GateVerdict::fail("cover", e.to_string()));
            return r;
        }
    }
    r.gates.push(GateVerdict::pass("cover"));
    if let Ok(hm) = homology_action(&rc) {
        r.homology = Some(HomologyReport {
            matrix: hm.matrix,
            normalization: hm.normalization,
            matches_m: hm.matches_m,
            intersection: hm.intersection,
            preserves_form: hm.preserves_form,
        });
    }
    r.satisfied = true;
    r
}

/// Quarter turns as a multiple of π.
fn half_units(q: i64) -> String {
    if q % 2 == 0 {
        (q / 2).to_string()
    } else {
        format!("{}", q as f64 / 2.0)
    }
}
