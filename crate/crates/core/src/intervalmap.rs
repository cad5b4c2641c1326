//! The piecewise linear interval map h with exact breakpoints, and the
//! one-sided and geometric alignment tests on it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{
    eigenvector, perron_root_of_matrix, AlgebraicReal, ExactError, Field, FieldScalar, NumberField,
    Side,
};
use crate::oddblock::OddBlockMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalMapError {
    #[error("h is discontinuous at x_{index}")]
    ContinuityFailure { index: usize },
    #[error("interval I_{index} has nonpositive width")]
    NonpositiveWidth { index: usize },
    #[error("point lies outside [0, 1]")]
    OutOfDomain,
    #[error("x_{index} sees the graph of h on both sides")]
    OneSidedViolation { index: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointKind {
    Endpoint,
    CriticalMax,
    CriticalMin,
    Noncritical,
}

/// h : [0,1] → [0,1], affine with slope ±λ on each `I_j = [x_{j-1}, x_j]`.
#[derive(Debug, Clone)]
pub struct IntervalMap {
    lambda: AlgebraicReal,
    field: Field,
    points: Vec<FieldScalar>,
    phi: Vec<usize>,
    dirs: Vec<i32>,
}

impl IntervalMap {
    /// Computes λ and the left eigenvector, then builds h.
    pub fn from_matrix(m: &OddBlockMatrix) -> Result<Self, IntervalMapError> {
        let lambda = perron_root_of_matrix(m.entries())?;
        let field = NumberField::new(lambda);
        let w = eigenvector(m.entries(), &field, Side::Left)?;
        build_h(m, &field, &w)
    }

    pub fn n(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn lambda(&self) -> &AlgebraicReal {
        &self.lambda
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn lambda_scalar(&self) -> FieldScalar {
        FieldScalar::generator(&self.field)
    }

    pub fn points(&self) -> &[FieldScalar] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &FieldScalar {
        &self.points[i]
    }

    pub fn phi(&self) -> &[usize] {
        &self.phi
    }

    /// Sign of the slope on `I_j`, `j` in `1..=n`.
    pub fn dir(&self, j: usize) -> i32 {
        self.dirs[j - 1]
    }

    pub fn dirs(&self) -> &[i32] {
        &self.dirs
    }

    /// Width `w_j` of `I_j`.
    pub fn width(&self, j: usize) -> FieldScalar {
        &self.points[j] - &self.points[j - 1]
    }

    pub fn phi_inverse(&self, k: usize) -> usize {
        self.phi.iter().position(|&v| v == k).expect("φ is a permutation")
    }

    /// h on branch `j`, extended affinely.
    pub fn branch(&self, j: usize, x: &FieldScalar) -> FieldScalar {
        let slope = self.lambda_scalar().scale_int(i64::from(self.dir(j)));
        &self.points[self.phi[j - 1]] + &(&slope * &(x - &self.points[j - 1]))
    }

    /// Inverse of branch `j`, extended affinely.
    pub fn branch_inverse(&self, j: usize, y: &FieldScalar) -> FieldScalar {
        let slope = self.lambda_scalar().scale_int(i64::from(self.dir(j)));
        &self.points[j - 1] + &(&(y - &self.points[self.phi[j - 1]]) / &slope)
    }

    /// The branch containing `x` (the left one at interior breakpoints).
    pub fn branch_of(&self, x: &FieldScalar) -> Result<usize, IntervalMapError> {
        if x.is_negative() || (x - &self.points[self.n()]).is_positive() {
            return Err(IntervalMapError::OutOfDomain);
        }
        Ok((1..=self.n())
            .find(|&j| !(x - &self.points[j]).is_positive())
            .unwrap_or(self.n()))
    }

    pub fn eval(&self, x: &FieldScalar) -> Result<FieldScalar, IntervalMapError> {
        Ok(self.branch(self.branch_of(x)?, x))
    }

    pub fn classify(&self) -> Vec<PointKind> {
        let n = self.n();
        (0..=n)
            .map(|i| {
                if i == 0 || i == n {
                    PointKind::Endpoint
                } else {
                    match (self.dir(i), self.dir(i + 1)) {
                        (1, -1) => PointKind::CriticalMax,
                        (-1, 1) => PointKind::CriticalMin,
                        _ => PointKind::Noncritical,
                    }
                }
            })
            .collect()
    }

    /// All `x` with `h(x) = y`, increasing, each listed once.
    pub fn preimages(&self, y: &FieldScalar) -> Vec<FieldScalar> {
        let mut out: Vec<FieldScalar> = Vec::new();
        for j in 1..=self.n() {
            let a = &self.points[self.phi[j - 1]];
            let b = &self.points[self.phi[j]];
            let (lo, hi) = if a.cmp(b).is_lt() { (a, b) } else { (b, a) };
            if (y - lo).is_negative() || (y - hi).is_positive() {
                continue;
            }
            let x = self.branch_inverse(j, y);
            if out.last() != Some(&x) {
                out.push(x);
            }
        }
        out
    }

    /// Checks every `x_i`; on failure returns `(i, x, y)` with
    /// `x < x_i < y` and `h(x) = h(x_i) = h(y)`.
    pub fn one_sided_check(&self) -> Result<(), OneSidedWitness> {
        for i in 0..=self.n() {
            let xi = &self.points[i];
            let sols = self.preimages(&self.points[self.phi[i]]);
            let left = sols.iter().find(|x| (*x - xi).is_negative());
            let right = sols.iter().find(|x| (*x - xi).is_positive());
            if let (Some(l), Some(r)) = (left, right) {
                return Err(OneSidedWitness { index: i, left: l.clone(), right: r.clone() });
            }
        }
        Ok(())
    }

    /// α at each interior index where the height-`x_i` line meets the
    /// graph away from `x_{φ⁻¹(i)}`.
    pub fn geometric_alignment(&self) -> Result<PartialAlignment, IntervalMapError> {
        if let Err(w) = self.one_sided_check() {
            return Err(IntervalMapError::OneSidedViolation { index: w.index });
        }
        let n = self.n();
        let mut values = vec![None; n + 1];
        for (i, slot) in values.iter_mut().enumerate().take(n).skip(1) {
            let anchor = &self.points[self.phi_inverse(i)];
            let others: Vec<i32> = self
                .preimages(&self.points[i])
                .iter()
                .filter(|x| *x != anchor)
                .map(|x| (x - anchor).sign())
                .collect();
            *slot = match (others.contains(&1), others.contains(&-1)) {
                (true, false) => Some(1),
                (false, true) => Some(-1),
                (false, false) => None,
                (true, true) => unreachable!("one-sided check passed"),
            };
        }
        Ok(PartialAlignment { values })
    }
}

/// `x < x_index < y` on one level set of h.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneSidedWitness {
    pub index: usize,
    pub left: FieldScalar,
    pub right: FieldScalar,
}

/// α on its geometric domain; entries 0 and n are always `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialAlignment {
    pub values: Vec<Option<i32>>,
}

impl PartialAlignment {
    pub fn get(&self, i: usize) -> Option<i32> {
        self.values.get(i).copied().flatten()
    }

    pub fn domain(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i].is_some()).collect()
    }
}

/// Builds h from the left eigenvector `w` (sum 1) and certifies continuity.
pub fn build_h(m: &OddBlockMatrix, field: &Field, w: &[FieldScalar]) -> Result<IntervalMap, IntervalMapError> {
    let n = m.n();
    let phi = m.phi().to_vec();
    if let Some(j) = w.iter().position(|x| !x.is_positive()) {
        return Err(IntervalMapError::NonpositiveWidth { index: j + 1 });
    }
    let mut points = vec![FieldScalar::zero(field)];
    for x in w {
        let next = points.last().unwrap() + x;
        points.push(next);
    }
    if !points[n].is_one() {
        return Err(IntervalMapError::ContinuityFailure { index: n });
    }
    let dirs = (1..=n).map(|j| if phi[j] > phi[j - 1] { 1 } else { -1 }).collect();
    let h = IntervalMap { lambda: field.generator().clone(), field: field.clone(), points, phi, dirs };
    for j in 1..=n {
        if h.branch(j, &h.points[j]) != h.points[h.phi[j]] {
            return Err(IntervalMapError::ContinuityFailure { index: j });
        }
    }
    Ok(h)
}
