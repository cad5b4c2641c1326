//! One-call construction and an exact JSON view of the geometry.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{build_f0, build_p0, vertical_closure, BoxError, IsometryCase, PieceMap, QuotientData, RectComplex, Side};
use crate::alignment::{check, AlignmentError, AlignmentVerdict};
use crate::exactnum::{eigenvector, ExactError, FieldScalar, Side as EigSide};
use crate::intervalmap::{IntervalMap, IntervalMapError};
use crate::oddblock::OddBlockMatrix;

/// A number-field element as coefficients in λ plus a decimal hint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactValue {
    pub rep: Vec<String>,
    pub decimal: String,
}

impl ExactValue {
    pub fn of(x: &FieldScalar) -> Self {
        ExactValue { rep: x.rep_strings(), decimal: x.decimal(12) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    IntervalMap(#[from] IntervalMapError),
    #[error(transparent)]
    Alignment(#[from] AlignmentError),
    #[error("alignment not satisfied: {0:?}")]
    NotAligned(AlignmentVerdict),
    #[error(transparent)]
    Box(#[from] BoxError),
}

/// Everything built for one (M, ε).
#[derive(Debug, Clone)]
pub struct Construction {
    pub h: IntervalMap,
    pub complex: RectComplex,
    pub pieces: PieceMap,
    pub quotient: QuotientData,
}

pub fn construct(m: &OddBlockMatrix, epsilon: i32) -> Result<Construction, ConstructError> {
    let h = IntervalMap::from_matrix(m)?;
    let assignment = match check(&h, epsilon)? {
        AlignmentVerdict::Satisfied(a) => a,
        other => return Err(ConstructError::NotAligned(other)),
    };
    let v = eigenvector(m.entries(), h.field(), EigSide::Right)?;
    let complex = build_p0(&h, m, &v, &assignment)?;
    let pieces = build_f0(&complex)?;
    let quotient = vertical_closure(&complex)?;
    Ok(Construction { h, complex, pieces, quotient })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowSnapshot {
    pub index: usize,
    pub left: ExactValue,
    pub width: ExactValue,
    pub top: ExactValue,
    pub bottom: ExactValue,
    pub cells: Vec<usize>,
    pub case: IsometryCase,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HEdgeSnapshot {
    pub index: usize,
    pub side: Option<Side>,
    pub y: ExactValue,
    pub x_min: ExactValue,
    pub x_max: ExactValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometrySnapshot {
    pub epsilon: i32,
    pub lambda: String,
    pub points: Vec<ExactValue>,
    pub column_widths: Vec<ExactValue>,
    pub column_x: Vec<ExactValue>,
    pub rows: Vec<RowSnapshot>,
    pub h_edges: Vec<HEdgeSnapshot>,
    pub residual: Vec<ExactValue>,
    pub shaded_area: ExactValue,
}

impl Construction {
    pub fn snapshot(&self) -> GeometrySnapshot {
        let rc = &self.complex;
        let n = rc.n();
        GeometrySnapshot {
            epsilon: rc.epsilon(),
            lambda: self.h.lambda().decimal(12),
            points: self.h.points().iter().map(ExactValue::of).collect(),
            column_widths: (1..=n).map(|j| ExactValue::of(rc.v(j))).collect(),
            column_x: (1..=n).map(|j| ExactValue::of(rc.column_x(j))).collect(),
            rows: rc
                .rows()
                .iter()
                .zip(&self.pieces.rows)
                .map(|(r, p)| RowSnapshot {
                    index: r.index,
                    left: ExactValue::of(&r.left),
                    width: ExactValue::of(&r.width),
                    top: ExactValue::of(&r.top),
                    bottom: ExactValue::of(&r.bottom),
                    cells: r.cells.clone(),
                    case: p.case,
                })
                .collect(),
            h_edges: self
                .quotient
                .h_edges
                .iter()
                .map(|e| HEdgeSnapshot {
                    index: e.index,
                    side: e.side,
                    y: ExactValue::of(&e.y),
                    x_min: ExactValue::of(&e.x_min),
                    x_max: ExactValue::of(&e.x_max),
                })
                .collect(),
            residual: self.quotient.dynamics.residual().iter().map(ExactValue::of).collect(),
            shaded_area: ExactValue::of(&rc.shaded_area()),
        }
    }
}
