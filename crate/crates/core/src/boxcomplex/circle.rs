//! Dynamics of f₀ on the vertical boundary circle S of P₀.
//!
//! S is parametrized by `u ∈ [0, 2)`: `u = y` down the right side, then
//! `u = 2 - y` up the left side. Collapsing each `H_i` leaves a point `a_i`.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{BoxError, RectComplex, Side};
use crate::exactnum::FieldScalar;
use crate::intervalmap::PointKind;

/// Where a vertical piece lands in one row of its image column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PieceTarget {
    /// On ∂P₀, as part of the `side` edge of row `row`.
    Boundary(Side, usize),
    /// Inside P₀, on the line `X = x` through row `row`.
    Junction { row: usize, x: FieldScalar },
}

/// An arc of S \ K folded at its midpoint `a_index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub index: usize,
    pub center: FieldScalar,
    /// Half the arc length.
    pub radius: FieldScalar,
    pub critical: bool,
    /// Length of the run of directly identified intervals leaving the center.
    pub direct_extent: FieldScalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairKind {
    Direct,
    Propagated,
}

/// Image of an interior point of S.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Image {
    target: PieceTarget,
    y: FieldScalar,
    /// Sign of dY/du.
    y_slope: i32,
}

pub(crate) fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn two(u: &FieldScalar) -> FieldScalar {
    FieldScalar::from_int(u.field(), 2)
}

/// Reduces into `[0, 2)`.
pub(crate) fn wrap(u: &FieldScalar) -> FieldScalar {
    let t = two(u);
    let mut v = u.clone();
    while v.is_negative() {
        v = &v + &t;
    }
    while !(&v - &t).is_negative() {
        v = &v - &t;
    }
    v
}

pub(crate) fn u_of(side: Side, y: &FieldScalar) -> FieldScalar {
    match side {
        Side::Right => y.clone(),
        Side::Left => wrap(&(&two(y) - y)),
    }
}

fn side_sign(side: Side) -> i32 {
    match side {
        Side::Right => 1,
        Side::Left => -1,
    }
}

/// Position of `a_i` on S.
pub fn a_position(rc: &RectComplex, i: usize) -> FieldScalar {
    let n = rc.n();
    let x = rc.h().point(i);
    if i == 0 || i == n || rc.alpha(i) < 0 {
        x.clone()
    } else {
        u_of(Side::Left, x)
    }
}

/// Row containing `y` strictly inside it, if any.
fn row_strict(rc: &RectComplex, y: &FieldScalar) -> Option<usize> {
    (1..=rc.n()).find(|&r| (y - rc.h().point(r - 1)).is_positive() && (rc.h().point(r) - y).is_positive())
}

fn classify_x(rc: &RectComplex, t: usize, x: FieldScalar) -> PieceTarget {
    let row = rc.row(t);
    if x == row.left {
        PieceTarget::Boundary(Side::Left, t)
    } else if x == row.right() {
        PieceTarget::Boundary(Side::Right, t)
    } else {
        PieceTarget::Junction { row: t, x }
    }
}

/// Targets of the piece `(side, r)`, one per row of column `r`.
pub fn piece_targets(rc: &RectComplex, side: Side, r: usize) -> Vec<PieceTarget> {
    let x = rc.image_edge_x(r, side);
    let (lo, hi) = rc.column_block(r);
    (lo + 1..=hi).map(|t| classify_x(rc, t, x.clone())).collect()
}

fn image(rc: &RectComplex, u: &FieldScalar) -> Image {
    let one = FieldScalar::one(u.field());
    let (side, y) = if (u - &one).is_negative() { (Side::Right, u.clone()) } else { (Side::Left, &two(u) - u) };
    let r = row_strict(rc, &y).expect("interior point of a piece");
    let big_y = rc.h().branch(r, &y);
    let t = row_strict(rc, &big_y).expect("interior point of a row");
    let target = classify_x(rc, t, rc.image_edge_x(r, side));
    Image { target, y: big_y, y_slope: rc.h().dir(r) * side_sign(side) }
}

/// K, the arcs of S \ K and the verified fold involution τ.
#[derive(Debug, Clone)]
pub struct CircleDynamics {
    residual: Vec<FieldScalar>,
    /// Per arc: (start, lifted end, lifted midpoint, fold index).
    arcs: Vec<(FieldScalar, FieldScalar, FieldScalar, usize)>,
    folds: Vec<Fold>,
    intervals: Vec<(FieldScalar, FieldScalar, PairKind)>,
    alive: Vec<(Side, usize)>,
}

impl CircleDynamics {
    /// Residual set, increasing in u.
    pub fn residual(&self) -> &[FieldScalar] {
        &self.residual
    }

    pub fn folds(&self) -> &[Fold] {
        &self.folds
    }

    /// Pieces of S that meet K.
    pub fn alive_pieces(&self) -> &[(Side, usize)] {
        &self.alive
    }

    /// Elementary intervals of the verification subdivision.
    pub fn intervals(&self) -> &[(FieldScalar, FieldScalar, PairKind)] {
        &self.intervals
    }

    /// The arc containing `u`, which must not lie in K.
    pub fn arc_of(&self, u: &FieldScalar) -> usize {
        let u = wrap(u);
        for (k, (a, b, _, _)) in self.arcs.iter().enumerate() {
            if (&u - a).is_positive() && (b - &u).is_positive() {
                return k;
            }
            let u2 = &u + &two(&u);
            if (&u2 - a).is_positive() && (b - &u2).is_positive() {
                return k;
            }
        }
        panic!("point of K has no arc")
    }

    /// τ on arc `k`, allowing the arc's own endpoints; `end` picks the
    /// lifted copy of an endpoint shared by both ends of a single arc.
    pub fn tau_on(&self, k: usize, u: &FieldScalar, end: bool) -> FieldScalar {
        let (a, _, m, _) = &self.arcs[k];
        let u = wrap(u);
        let lifted = if (&u - a).is_negative() || (end && &u == a) { &u + &two(&u) } else { u };
        wrap(&(&m.scale_int(2) - &lifted))
    }

    pub fn tau(&self, u: &FieldScalar) -> FieldScalar {
        self.tau_on(self.arc_of(u), u, false)
    }
}

type Node = (Side, usize);

fn node_index(n: usize, (side, r): Node) -> usize {
    match side {
        Side::Right => r - 1,
        Side::Left => n + r - 1,
    }
}

fn node_of(n: usize, k: usize) -> Node {
    if k < n {
        (Side::Right, k + 1)
    } else {
        (Side::Left, k - n + 1)
    }
}

/// Finds K, the fold arcs, and checks that every non-residual point of S is
/// identified with its τ-image and with nothing else.
pub fn circle_dynamics(rc: &RectComplex) -> Result<CircleDynamics, BoxError> {
    let n = rc.n();
    let h = rc.h();
    let nodes = 2 * n;
    let succ: Vec<Vec<usize>> = (0..nodes)
        .map(|k| {
            let (side, r) = node_of(n, k);
            piece_targets(rc, side, r)
                .into_iter()
                .filter_map(|t| match t {
                    PieceTarget::Boundary(s, t) => Some(node_index(n, (s, t))),
                    PieceTarget::Junction { .. } => None,
                })
                .collect()
        })
        .collect();
    let mut alive = vec![true; nodes];
    loop {
        let mut changed = false;
        for k in 0..nodes {
            if alive[k] && !succ[k].iter().any(|&s| alive[s]) {
                alive[k] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let live_succ = |k: usize| -> Vec<usize> { succ[k].iter().copied().filter(|&s| alive[s]).collect() };
    // reach[a][b]: b reachable from a in one or more steps.
    let mut reach = vec![vec![false; nodes]; nodes];
    for k in (0..nodes).filter(|&k| alive[k]) {
        for s in live_succ(k) {
            reach[k][s] = true;
        }
    }
    for m in 0..nodes {
        for a in 0..nodes {
            if reach[a][m] {
                for b in 0..nodes {
                    if reach[m][b] {
                        reach[a][b] = true;
                    }
                }
            }
        }
    }
    let describe = |k: usize| {
        let (s, r) = node_of(n, k);
        format!("{s:?} side of row {r}")
    };
    let cyclic: Vec<usize> = (0..nodes).filter(|&k| alive[k] && reach[k][k]).collect();
    for &k in &cyclic {
        if live_succ(k).len() != 1 {
            return Err(BoxError::ResidualNotFinite { piece: describe(k) });
        }
    }
    let mut points: Vec<Vec<FieldScalar>> = vec![Vec::new(); nodes];
    let k_field = h.field();
    for &start in &cyclic {
        if !points[start].is_empty() {
            continue;
        }
        let mut cycle = vec![start];
        let mut x = live_succ(start)[0];
        while x != start {
            cycle.push(x);
            x = live_succ(x)[0];
        }
        // y ↦ a·y + b after one trip around the cycle.
        let (mut a, mut b) = (FieldScalar::one(k_field), FieldScalar::zero(k_field));
        for &c in &cycle {
            let r = node_of(n, c).1;
            let s = h.lambda_scalar().scale_int(i64::from(h.dir(r)));
            let c0 = h.branch(r, &FieldScalar::zero(k_field));
            a = &s * &a;
            b = &(&s * &b) + &c0;
        }
        let mut y = &b / &(&FieldScalar::one(k_field) - &a);
        for &c in &cycle {
            points[c].push(y.clone());
            y = h.branch(node_of(n, c).1, &y);
        }
    }
    for _ in 0..=nodes {
        let mut changed = false;
        for k in (0..nodes).filter(|&k| alive[k]) {
            let r = node_of(n, k).1;
            for s in live_succ(k) {
                for y in points[s].clone() {
                    let y0 = h.branch_inverse(r, &y);
                    if !points[k].contains(&y0) {
                        points[k].push(y0);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut residual: Vec<FieldScalar> = Vec::new();
    for k in 0..nodes {
        let side = node_of(n, k).0;
        for y in &points[k] {
            let u = u_of(side, y);
            if !residual.contains(&u) {
                residual.push(u);
            }
        }
    }
    residual.sort_by(|a, b| a.cmp(b));
    if residual.len() != n - 1 {
        return Err(BoxError::ResidualCount { found: residual.len(), expected: n - 1 });
    }

    let centers: Vec<(usize, FieldScalar)> = (1..n).map(|i| (i, a_position(rc, i))).collect();
    let kinds = h.classify();
    let mut arcs = Vec::with_capacity(n - 1);
    for k in 0..residual.len() {
        let a = residual[k].clone();
        let b = if k + 1 < residual.len() { residual[k + 1].clone() } else { &residual[0] + &two(&a) };
        let m = (&a + &b).scale(&half());
        let mw = wrap(&m);
        let idx = centers
            .iter()
            .find(|(_, c)| *c == mw)
            .map(|(i, _)| *i)
            .ok_or_else(|| BoxError::FoldMismatch(format!("arc from u = {} has no a_i at its midpoint", a.decimal(6))))?;
        arcs.push((a, b, m, idx));
    }
    let mut dynamics = CircleDynamics { residual, arcs, folds: Vec::new(), intervals: Vec::new(), alive: Vec::new() };
    dynamics.alive = (0..nodes).filter(|&k| alive[k]).map(|k| node_of(n, k)).collect();

    let mut base: Vec<FieldScalar> = Vec::new();
    let push = |v: &mut Vec<FieldScalar>, u: FieldScalar| {
        if !v.contains(&u) {
            v.push(u);
        }
    };
    for r in 0..=n {
        for side in [Side::Right, Side::Left] {
            push(&mut base, u_of(side, h.point(r)));
        }
    }
    for r in 1..=n {
        let (lo, hi) = rc.column_block(r);
        for t in lo + 1..hi {
            let y = h.branch_inverse(r, h.point(t));
            for side in [Side::Right, Side::Left] {
                push(&mut base, u_of(side, &y));
            }
        }
    }
    let mut all = dynamics.residual.clone();
    for u in &base {
        if !dynamics.residual.contains(u) {
            push(&mut all, u.clone());
            push(&mut all, dynamics.tau(u));
        }
    }
    all.sort_by(|a, b| a.cmp(b));

    let mut intervals = Vec::with_capacity(all.len());
    for k in 0..all.len() {
        let p = all[k].clone();
        let q = if k + 1 < all.len() { all[k + 1].clone() } else { &all[0] + &two(&p) };
        let mid = wrap(&(&p + &q).scale(&half()));
        let tm = dynamics.tau(&mid);
        let (f1, f2) = (image(rc, &mid), image(rc, &tm));
        let kind = match (&f1.target, &f2.target) {
            (PieceTarget::Junction { .. }, PieceTarget::Junction { .. }) => {
                if f1.target == f2.target && f1.y == f2.y && f1.y_slope == -f2.y_slope {
                    PairKind::Direct
                } else {
                    return Err(BoxError::FoldMismatch(format!(
                        "u = {} and its fold image land apart",
                        mid.decimal(6)
                    )));
                }
            }
            (PieceTarget::Boundary(s1, _), PieceTarget::Boundary(s2, _)) => {
                let (u1, u2) = (u_of(*s1, &f1.y), u_of(*s2, &f2.y));
                let (sl1, sl2) = (f1.y_slope * side_sign(*s1), f2.y_slope * side_sign(*s2));
                if dynamics.tau(&u1) == u2 && sl1 == sl2 {
                    PairKind::Propagated
                } else {
                    return Err(BoxError::FoldMismatch(format!(
                        "τ does not commute with f₀ at u = {}",
                        mid.decimal(6)
                    )));
                }
            }
            _ => {
                return Err(BoxError::FoldMismatch(format!(
                    "u = {} maps inside while its fold image maps to the boundary",
                    mid.decimal(6)
                )))
            }
        };
        intervals.push((p, q, kind));
    }

    let mut folds = Vec::with_capacity(n - 1);
    for (a, b, m, idx) in &dynamics.arcs {
        let center = wrap(m);
        let start = intervals.iter().position(|(p, _, _)| *p == center).expect("centers subdivide");
        let mut extent = FieldScalar::zero(k_field);
        for s in 0..intervals.len() {
            let (p, q, kind) = &intervals[(start + s) % intervals.len()];
            if *kind != PairKind::Direct {
                break;
            }
            extent = &extent + &wrap(&(q - p));
            if dynamics.residual.contains(&wrap(q)) {
                break;
            }
        }
        folds.push(Fold {
            index: *idx,
            center,
            radius: (b - a).scale(&half()),
            critical: matches!(kinds[*idx], PointKind::CriticalMax | PointKind::CriticalMin),
            direct_extent: extent,
        });
    }
    folds.sort_by_key(|f| f.index);
    dynamics.folds = folds;
    dynamics.intervals = intervals;
    Ok(dynamics)
}
