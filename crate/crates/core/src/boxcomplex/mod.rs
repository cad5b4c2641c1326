//! The rectangle complex P₀, the piecewise affine map f₀ on it, the
//! horizontal folds, and the quotient of the boundary circle.
//!
//! Coordinates: X grows to the right, y grows downward, so row `i` spans
//! `y ∈ [x_{i-1}, x_i]` and row 1 is at the top.

mod circle;
mod quotient;
mod snapshot;

pub use circle::{a_position, circle_dynamics, piece_targets, CircleDynamics, Fold, PairKind, PieceTarget};
pub use quotient::{vertical_closure, ConePoint, QuotientData};
pub use snapshot::{construct, ConstructError, Construction, ExactValue, GeometrySnapshot, HEdgeSnapshot, RowSnapshot};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alignment::AlignmentAssignment;
use crate::exactnum::{ExactError, FieldScalar};
use crate::intervalmap::IntervalMap;
use crate::oddblock::OddBlockMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoxError {
    #[error("column {column} is not a rectangle after drawing rows together")]
    ColumnNotRectangle { column: usize },
    #[error("f₀ is discontinuous across the common edge of rows {index} and {}", index + 1)]
    ContinuityMismatch { index: usize },
    #[error("horizontal edge H_{index} has zero width")]
    ZeroWidthH { index: usize },
    #[error("f₀(H_{index}) is not centered in H_{target}")]
    NotCentered { index: usize, target: usize },
    #[error("the residual set is not finite (piece {piece})")]
    ResidualNotFinite { piece: String },
    #[error("expected {expected} residual points, found {found}")]
    ResidualCount { found: usize, expected: usize },
    #[error("fold inconsistency: {0}")]
    FoldMismatch(String),
    #[error("Euler characteristic {chi} is not 2")]
    NonSphere { chi: i64 },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// An assembled row `R_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub index: usize,
    pub left: FieldScalar,
    pub width: FieldScalar,
    pub top: FieldScalar,
    pub bottom: FieldScalar,
    /// Shaded columns of this row, left to right.
    pub cells: Vec<usize>,
}

impl Row {
    pub fn right(&self) -> FieldScalar {
        &self.left + &self.width
    }

    pub fn edge(&self, side: Side) -> FieldScalar {
        match side {
            Side::Left => self.left.clone(),
            Side::Right => self.right(),
        }
    }
}

/// P₀ with its rows drawn together.
#[derive(Debug, Clone)]
pub struct RectComplex {
    h: IntervalMap,
    entries: Vec<Vec<i64>>,
    epsilon: i32,
    alpha: Vec<i32>,
    v: Vec<FieldScalar>,
    rows: Vec<Row>,
    column_x: Vec<FieldScalar>,
}

impl RectComplex {
    pub fn n(&self) -> usize {
        self.h.n()
    }

    pub fn h(&self) -> &IntervalMap {
        &self.h
    }

    pub fn epsilon(&self) -> i32 {
        self.epsilon
    }

    /// α(i) for `i` in `1..n`.
    pub fn alpha(&self, i: usize) -> i32 {
        self.alpha[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i - 1][j - 1]
    }

    pub fn v(&self, j: usize) -> &FieldScalar {
        &self.v[j - 1]
    }

    pub fn w(&self, i: usize) -> FieldScalar {
        self.h.width(i)
    }

    pub fn row(&self, i: usize) -> &Row {
        &self.rows[i - 1]
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Left X of column `C_j` after drawing together.
    pub fn column_x(&self, j: usize) -> &FieldScalar {
        &self.column_x[j - 1]
    }

    /// Rows crossed by column `j`: `lo+1 ..= hi`.
    pub fn column_block(&self, j: usize) -> (usize, usize) {
        let phi = self.h.phi();
        (phi[j - 1].min(phi[j]), phi[j - 1].max(phi[j]))
    }

    /// Left X of cell (i, j) in the original grid.
    pub fn grid_x(&self, j: usize) -> FieldScalar {
        self.v[..j - 1]
            .iter()
            .fold(FieldScalar::zero(self.h.field()), |a, x| &a + x)
    }

    /// Left X of cell (i, j) inside the assembled row `R_i`.
    pub fn assembled_x(&self, i: usize, j: usize) -> FieldScalar {
        let row = self.row(i);
        row.cells
            .iter()
            .take_while(|&&c| c < j)
            .fold(row.left.clone(), |a, &c| &a + &self.v[c - 1])
    }

    /// Σ M_ij v_j w_i.
    pub fn shaded_area(&self) -> FieldScalar {
        let mut a = FieldScalar::zero(self.h.field());
        for i in 1..=self.n() {
            for j in 1..=self.n() {
                if self.entry(i, j) == 1 {
                    a = &a + &(&self.v[j - 1] * &self.w(i));
                }
            }
        }
        a
    }

    /// `h'` sign on row `i` times ε.
    pub fn sigma(&self, i: usize) -> i32 {
        self.epsilon * self.h.dir(i)
    }

    /// f₀ restricted to row `i`, applied to a point of the plane.
    pub fn map_point(&self, i: usize, x: &FieldScalar, y: &FieldScalar) -> (FieldScalar, FieldScalar) {
        let lam = self.h.lambda_scalar();
        let t = &(x - &self.row(i).left) / &lam;
        let px = self.column_x(i);
        let nx = if self.sigma(i) > 0 { px + &t } else { &(px + self.v(i)) - &t };
        (nx, self.h.branch(i, y))
    }

    /// X of the image of the `side` edge of `R_i`.
    pub fn image_edge_x(&self, i: usize, side: Side) -> FieldScalar {
        let target = if self.sigma(i) > 0 { side } else { side.flip() };
        match target {
            Side::Left => self.column_x(i).clone(),
            Side::Right => self.column_x(i) + self.v(i),
        }
    }
}

/// Assembles the rows and checks that each column stays a rectangle.
pub fn build_p0(
    h: &IntervalMap,
    m: &OddBlockMatrix,
    v: &[FieldScalar],
    alignment: &AlignmentAssignment,
) -> Result<RectComplex, BoxError> {
    let n = h.n();
    let k = h.field();
    let lam = h.lambda_scalar();
    let mut alpha = vec![0; n + 1];
    for (i, a) in alpha.iter_mut().enumerate().take(n).skip(1) {
        *a = alignment.get(i);
    }
    let mut rows: Vec<Row> = Vec::with_capacity(n);
    let mut left = FieldScalar::zero(k);
    for i in 1..=n {
        let width = &lam * &v[i - 1];
        if i > 1 && alpha[i - 1] == 1 {
            let prev = &rows[i - 2];
            left = &prev.right() - &width;
        }
        let cells = (1..=n).filter(|&j| m.entry(i, j) == 1).collect();
        rows.push(Row {
            index: i,
            left: left.clone(),
            width,
            top: h.point(i - 1).clone(),
            bottom: h.point(i).clone(),
            cells,
        });
    }
    let mut rc = RectComplex {
        h: h.clone(),
        entries: m.entries().to_vec(),
        epsilon: alignment.epsilon,
        alpha,
        v: v.to_vec(),
        rows,
        column_x: Vec::new(),
    };
    for i in 1..=n {
        let sum = rc.row(i).cells.iter().fold(FieldScalar::zero(k), |a, &c| &a + &v[c - 1]);
        if sum != rc.row(i).width {
            return Err(ExactError::NotARoot.into());
        }
    }
    let mut column_x = Vec::with_capacity(n);
    for j in 1..=n {
        let (lo, hi) = rc.column_block(j);
        let xs: Vec<FieldScalar> = (lo + 1..=hi).map(|i| rc.assembled_x(i, j)).collect();
        if xs.windows(2).any(|p| p[0] != p[1]) {
            return Err(BoxError::ColumnNotRectangle { column: j });
        }
        column_x.push(xs[0].clone());
    }
    rc.column_x = column_x;
    Ok(rc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsometryCase {
    Identity,
    RotatePi,
    ReflectVerticalAxis,
    ReflectHorizontalAxis,
}

/// f₀ on one row: isometry case, then ÷λ horizontally, ×λ vertically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowMap {
    pub row: usize,
    pub case: IsometryCase,
    /// Image of the top-left corner of `R_i`.
    pub image_of_top_left: (FieldScalar, FieldScalar),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceMap {
    pub rows: Vec<RowMap>,
}

/// Builds f₀ and checks continuity across every noncritical row boundary.
pub fn build_f0(rc: &RectComplex) -> Result<PieceMap, BoxError> {
    let n = rc.n();
    let kinds = rc.h().classify();
    for i in 1..n {
        if kinds[i] != crate::intervalmap::PointKind::Noncritical {
            continue;
        }
        let (a, b) = (rc.row(i), rc.row(i + 1));
        let lo = a.left.max(&b.left);
        let hi = a.right().min(&b.right());
        let y = rc.h().point(i);
        for x in [&lo, &hi] {
            if rc.map_point(i, x, y) != rc.map_point(i + 1, x, y) {
                return Err(BoxError::ContinuityMismatch { index: i });
            }
        }
    }
    let rows = (1..=n)
        .map(|i| {
            let case = match (rc.epsilon(), rc.h().dir(i)) {
                (1, 1) => IsometryCase::Identity,
                (1, _) => IsometryCase::RotatePi,
                (_, 1) => IsometryCase::ReflectVerticalAxis,
                _ => IsometryCase::ReflectHorizontalAxis,
            };
            let r = rc.row(i);
            RowMap { row: i, case, image_of_top_left: rc.map_point(i, &r.left, &r.top) }
        })
        .collect();
    Ok(PieceMap { rows })
}

/// `H_i = E_i ∩ ∂P₀` with its fold point `Q_i` at the midpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HEdge {
    pub index: usize,
    /// Side of P₀ carrying the edge; `None` for the top and bottom edges.
    pub side: Option<Side>,
    pub y: FieldScalar,
    pub x_min: FieldScalar,
    pub x_max: FieldScalar,
    /// Row whose top or bottom edge contains `H_i`.
    pub owner: usize,
    /// Image under the owner row's map.
    pub image_min: FieldScalar,
    pub image_max: FieldScalar,
}

impl HEdge {
    pub fn midpoint(&self) -> FieldScalar {
        (&self.x_min + &self.x_max).scale(&num_rational::BigRational::new(1.into(), 2.into()))
    }

    pub fn length(&self) -> FieldScalar {
        &self.x_max - &self.x_min
    }
}

/// Computes every `H_i`, folds it at `Q_i` and checks `f₀(H_i)` is
/// centered inside `H_{φ(i)}`.
pub fn horizontal_folds(rc: &RectComplex) -> Result<Vec<HEdge>, BoxError> {
    let n = rc.n();
    let mut edges = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let y = rc.h().point(i).clone();
        let (side, a, b, owner) = if i == 0 {
            (None, rc.row(1).left.clone(), rc.row(1).right(), 1)
        } else if i == n {
            (None, rc.row(n).left.clone(), rc.row(n).right(), n)
        } else {
            let side = if rc.alpha(i) < 0 { Side::Right } else { Side::Left };
            let (ea, eb) = (rc.row(i).edge(side), rc.row(i + 1).edge(side));
            let upper_wider = match side {
                Side::Right => ea.cmp(&eb).is_gt(),
                Side::Left => ea.cmp(&eb).is_lt(),
            };
            (Some(side), ea, eb, if upper_wider { i } else { i + 1 })
        };
        let (x_min, x_max) = if a.cmp(&b).is_le() { (a, b) } else { (b, a) };
        if x_min == x_max {
            return Err(BoxError::ZeroWidthH { index: i });
        }
        let (p, _) = rc.map_point(owner, &x_min, &y);
        let (q, _) = rc.map_point(owner, &x_max, &y);
        let (image_min, image_max) = if p.cmp(&q).is_le() { (p, q) } else { (q, p) };
        edges.push(HEdge { index: i, side, y, x_min, x_max, owner, image_min, image_max });
    }
    let phi = rc.h().phi();
    for e in &edges {
        let t = &edges[phi[e.index]];
        let image_mid = (&e.image_min + &e.image_max)
            .scale(&num_rational::BigRational::new(1.into(), 2.into()));
        let inside = !(&e.image_min - &t.x_min).is_negative() && !(&t.x_max - &e.image_max).is_negative();
        if !inside || image_mid != t.midpoint() {
            return Err(BoxError::NotCentered { index: e.index, target: t.index });
        }
    }
    Ok(edges)
}

/// Whether f₀(interior R_i) meets interior R_j, by exact rectangle overlap.
pub fn markov_incidence(rc: &RectComplex) -> Vec<Vec<bool>> {
    let n = rc.n();
    (1..=n)
        .map(|j| {
            (1..=n)
                .map(|i| {
                    let (x0, x1) = (rc.column_x(i).clone(), rc.column_x(i) + rc.v(i));
                    let (lo, hi) = rc.column_block(i);
                    let (y0, y1) = (rc.h().point(lo), rc.h().point(hi));
                    let r = rc.row(j);
                    let xo = (&x1.min(&r.right()) - &x0.max(&r.left)).is_positive();
                    let yo = (&y1.min(&r.bottom) - &y0.max(&r.top)).is_positive();
                    xo && yo
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::solve;
    use crate::exactnum::{eigenvector, Side as EigSide};
    use crate::oddblock::from_phi;

    fn complex(phi: &[usize], eps: i32) -> RectComplex {
        let m = from_phi(phi).unwrap();
        let h = IntervalMap::from_matrix(&m).unwrap();
        let v = eigenvector(m.entries(), h.field(), EigSide::Right).unwrap();
        let a = solve(&h, eps).unwrap();
        build_p0(&h, &m, &v, &a).unwrap()
    }

    #[test]
    fn fibonacci_rows_and_cases() {
        let rc = complex(&[1, 2, 0], -1);
        assert!(rc.row(1).left.is_zero());
        assert_eq!(rc.row(2).left.decimal(4), "-0.3820");
        assert_eq!(rc.column_x(2), &FieldScalar::zero(rc.h().field()));
        let f = build_f0(&rc).unwrap();
        assert_eq!(f.rows[0].case, IsometryCase::ReflectVerticalAxis);
        assert_eq!(f.rows[1].case, IsometryCase::ReflectHorizontalAxis);
        let inc = markov_incidence(&rc);
        assert_eq!(inc, vec![vec![false, true], vec![true, true]]);
    }

    #[test]
    fn fibonacci_residual_and_fold() {
        let rc = complex(&[1, 2, 0], -1);
        let q = vertical_closure(&rc).unwrap();
        let lam = rc.h().lambda_scalar();
        let one = FieldScalar::one(rc.h().field());
        assert_eq!(q.dynamics.residual(), &[&lam - &one]);
        let fold = &q.dynamics.folds()[0];
        assert_eq!(fold.center.decimal(4), "1.6180");
        assert!(fold.radius.is_one());
        assert_eq!(fold.direct_extent, rc.w(1));
        assert_eq!(q.euler_characteristic, 2);
        assert_eq!(q.angle_defect, 8);
    }

    #[test]
    fn fig1_assembles() {
        let rc = complex(&[2, 1, 3, 5, 6, 4, 0], 1);
        let f = build_f0(&rc).unwrap();
        let cases: Vec<IsometryCase> = f.rows.iter().map(|r| r.case).collect();
        use IsometryCase::*;
        assert_eq!(cases, vec![RotatePi, Identity, Identity, Identity, RotatePi, RotatePi]);
        let lam = rc.h().lambda_scalar();
        let total = (1..=6).fold(FieldScalar::zero(rc.h().field()), |a, i| &a + &(&rc.v(i).clone() * &rc.w(i)));
        assert_eq!(rc.shaded_area(), &lam * &total);
        let inc = markov_incidence(&rc);
        for i in 1..=6 {
            for j in 1..=6 {
                assert_eq!(inc[j - 1][i - 1], rc.entry(j, i) == 1);
            }
        }
    }

    #[test]
    fn fig1_sphere_with_cone_points() {
        let rc = complex(&[2, 1, 3, 5, 6, 4, 0], 1);
        let q = vertical_closure(&rc).unwrap();
        assert_eq!(q.euler_characteristic, 2);
        assert_eq!(q.dynamics.residual().len(), 5);
        let folds: Vec<usize> = q.cone_points.iter().filter_map(|c| c.fold_point).collect();
        assert_eq!(folds, (0..=6).collect::<Vec<_>>());
        assert!(q.cone_points.iter().filter(|c| c.fold_point.is_some()).all(|c| c.angle_quarter_turns == 2));
        let res: Vec<&ConePoint> = q.cone_points.iter().filter(|c| c.fold_point.is_none()).collect();
        assert_eq!(res.len(), 1);
        assert!(res[0].residual);
        assert_eq!(res[0].prongs(), 5);
        for f in q.dynamics.folds().iter().filter(|f| f.critical) {
            assert!(f.direct_extent.is_positive());
        }
    }
}
