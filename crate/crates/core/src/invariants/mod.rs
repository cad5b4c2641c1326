//! Surface-level data: the branched double cover of the quotient sphere, its
//! singularities, the action on homology and the symmetry of χ(M).

mod report;

pub use crate::boxcomplex::ExactValue;

pub use report::{
    run_pipeline, ConeReport, EpsilonReport, FactorReport, GateVerdict, HomologyReport, Input,
    LambdaReport, SurfaceReport, ChiReport, REPORT_VERSION,
};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boxcomplex::{markov_incidence, QuotientData, RectComplex};
use crate::exactnum::IntPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("the quotient is not a sphere (χ = {chi})")]
    NonSphereInput { chi: i64 },
    #[error("Euler–Poincaré sum {sum} differs from 2χ = {expected}")]
    ChecksumFailure { sum: i64, expected: i64 },
    #[error("homology basis is only defined for even n, got {n}")]
    OddN { n: usize },
}

/// Which of `xⁿχ(1/x) = ±χ(x)` and `xⁿχ(-1/x) = ±χ(x)` hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PalindromicVerdict {
    /// `Some(s)` when `xⁿχ(1/x) = s·χ(x)`.
    pub reversal: Option<i32>,
    /// `Some(s)` when `xⁿχ(-1/x) = s·χ(x)`.
    pub twisted: Option<i32>,
}

impl PalindromicVerdict {
    pub fn palindromic(&self) -> bool {
        self.reversal == Some(1)
    }

    pub fn anti_palindromic(&self) -> bool {
        self.reversal == Some(-1)
    }

    pub fn label(&self) -> String {
        let part = |name: &str, s: Option<i32>| match s {
            Some(1) => format!("{name}=+"),
            Some(_) => format!("{name}=-"),
            None => format!("{name}=none"),
        };
        format!("{};{}", part("reversal", self.reversal), part("twisted", self.twisted))
    }
}

fn sign_relation(a: &IntPolynomial, b: &IntPolynomial) -> Option<i32> {
    if a == b {
        Some(1)
    } else if *a == b.scale(&BigInt::from(-1)) {
        Some(-1)
    } else {
        None
    }
}

pub fn palindromic_class(chi: &IntPolynomial) -> PalindromicVerdict {
    let n = chi.degree().unwrap_or(0);
    // xⁿχ(1/x) with the degree-n frame kept even when χ(0) = 0.
    let mut rev: Vec<BigInt> = (0..=n).map(|k| chi.coeff(n - k)).collect();
    let reversal = sign_relation(&IntPolynomial::new(rev.clone()), chi);
    for (k, c) in rev.iter_mut().enumerate() {
        // Coefficient of x^k comes from χ's x^{n-k} term times (-1)^{n-k}.
        if (n - k) % 2 == 1 {
            *c = -c.clone();
        }
    }
    let twisted = sign_relation(&IntPolynomial::new(rev), chi);
    PalindromicVerdict { reversal, twisted }
}

/// Branch points and genus of the orientation double cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleCover {
    /// `Q0..Qn` for fold points, `Q` for the residual class.
    pub branch_points: Vec<String>,
    pub euler_characteristic: i64,
    pub genus: i64,
}

fn cone_label(c: &crate::boxcomplex::ConePoint) -> String {
    match (c.fold_point, c.residual) {
        (Some(i), _) => format!("Q{i}"),
        (None, true) => "Q".to_string(),
        (None, false) => "other".to_string(),
    }
}

/// The cover branches exactly at cone points of angle an odd multiple of π.
pub fn double_cover(q: &QuotientData) -> Result<DoubleCover, InvariantError> {
    if q.euler_characteristic != 2 {
        return Err(InvariantError::NonSphereInput { chi: q.euler_characteristic });
    }
    let branch_points: Vec<String> = q
        .cone_points
        .iter()
        .filter(|c| c.angle_quarter_turns % 4 == 2)
        .map(cone_label)
        .collect();
    let chi = 2 * q.euler_characteristic - branch_points.len() as i64;
    Ok(DoubleCover { branch_points, euler_characteristic: chi, genus: (2 - chi) / 2 })
}

/// Prong counts of the lifted singularities, regular points omitted; a cone
/// angle kπ gives k prongs.
pub fn singularity_data(q: &QuotientData, cover: &DoubleCover) -> Result<Vec<u32>, InvariantError> {
    let mut prongs = Vec::new();
    for c in &q.cone_points {
        let k = c.angle_quarter_turns / 2;
        if c.angle_quarter_turns % 4 == 2 {
            prongs.push(2 * k);
        } else {
            prongs.extend([k, k]);
        }
    }
    prongs.retain(|&p| p != 2);
    prongs.sort_unstable();
    let sum: i64 = prongs.iter().map(|&p| 2 - i64::from(p)).sum();
    let expected = 2 * cover.euler_characteristic;
    if sum != expected {
        return Err(InvariantError::ChecksumFailure { sum, expected });
    }
    Ok(prongs)
}

/// ψ⁎ on the basis of lifted core arcs `γ_1..γ_n`, one per row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyAction {
    /// Signed crossing counts: column `i` is the class of ψ(γ_i).
    pub matrix: Vec<Vec<i64>>,
    /// Orientation of each γ_j; `D⁻¹ N D` is compared with M.
    pub normalization: Vec<i64>,
    pub matches_m: bool,
    /// `NᵀJN` for the chain form J.
    pub intersection: Vec<Vec<i64>>,
    pub preserves_form: bool,
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

/// `J_{i,i+1} = 1 = -J_{i+1,i}`.
pub fn chain_form(n: usize) -> Vec<Vec<i64>> {
    let mut j = vec![vec![0; n]; n];
    for i in 0..n.saturating_sub(1) {
        j[i][i + 1] = 1;
        j[i + 1][i] = -1;
    }
    j
}

/// Each γ_i crosses its own row; its image runs down column `i` and crosses
/// row `j` once per shaded cell. The orientation of γ_j in the cover flips
/// each time the unaligned side changes, so the sign of a crossing of row
/// `j` by ψ(γ_i) is `o_i·o_j` with `o_j = Π_{k<j} α(k)`.
pub fn homology_action(rc: &RectComplex) -> Result<HomologyAction, InvariantError> {
    let n = rc.n();
    if n % 2 == 1 {
        return Err(InvariantError::OddN { n });
    }
    let mut o = vec![1i64; n];
    for j in 1..n {
        o[j] = o[j - 1] * i64::from(rc.alpha(j));
    }
    let inc = markov_incidence(rc);
    let matrix: Vec<Vec<i64>> = (0..n)
        .map(|j| (0..n).map(|i| if inc[j][i] { o[i] * o[j] } else { 0 }).collect())
        .collect();
    let normalized: Vec<Vec<i64>> = (0..n)
        .map(|j| (0..n).map(|i| o[j] * matrix[j][i] * o[i]).collect())
        .collect();
    let matches_m = (0..n).all(|j| (0..n).all(|i| normalized[j][i] == rc.entry(j + 1, i + 1)));
    let form = chain_form(n);
    let intersection = matmul(&matmul(&transpose(&matrix), &form), &matrix);
    let eps = i64::from(rc.epsilon());
    let preserves_form = (0..n).all(|a| (0..n).all(|b| intersection[a][b] == eps * form[a][b]));
    Ok(HomologyAction { matrix, normalization: o, matches_m, intersection, preserves_form })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn palindromic_examples() {
        let fig1 = palindromic_class(&poly(&[1, -2, 0, 0, 0, -2, 1]));
        assert_eq!(fig1.reversal, Some(1));
        let fib = palindromic_class(&poly(&[-1, -1, 1]));
        assert_eq!(fib.reversal, None);
        assert_eq!(fib.twisted, Some(-1));
        let lin = palindromic_class(&poly(&[-1, 1]));
        assert_eq!(lin.reversal, Some(-1));
        assert_eq!(fib.label(), "reversal=none;twisted=-");
    }

    #[test]
    fn chain_form_shape() {
        assert_eq!(chain_form(2), vec![vec![0, 1], vec![-1, 0]]);
    }
}
