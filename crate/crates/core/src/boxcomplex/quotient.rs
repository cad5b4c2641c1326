//! The quotient of P₀ by the horizontal and vertical folds, as a one-face
//! CW complex with cone angles.

use std::collections::HashMap;

use super::circle::{a_position, circle_dynamics, half, wrap, CircleDynamics};
use super::{horizontal_folds, BoxError, HEdge, RectComplex, Side};
use crate::exactnum::FieldScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Vertex {
    /// First and second end of `H_i` in boundary order.
    HEnd(usize, u8),
    HMid(usize),
    /// A subdivision point of S that is not some `a_i`.
    S(usize),
}

/// A class of boundary points with total angle different from 2π.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConePoint {
    /// `Some(i)` for the fold point `Q_i`.
    pub fold_point: Option<usize>,
    /// Whether the class contains the residual set.
    pub residual: bool,
    /// Total angle in units of π/2.
    pub angle_quarter_turns: u32,
    pub members: usize,
}

impl ConePoint {
    /// Angle divided by π.
    pub fn angle_over_pi(&self) -> f64 {
        f64::from(self.angle_quarter_turns) / 2.0
    }

    /// Number of prongs of the singular leaf, `angle / π`.
    pub fn prongs(&self) -> u32 {
        self.angle_quarter_turns / 2
    }
}

#[derive(Debug, Clone)]
pub struct QuotientData {
    pub h_edges: Vec<HEdge>,
    pub dynamics: CircleDynamics,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    pub cone_points: Vec<ConePoint>,
    /// Σ (2π - angle) over all vertex classes, in units of π/2.
    pub angle_defect: i64,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = a;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Glues ∂P₀ along the H folds and the verified involution τ, then
/// computes χ and the cone angles. Fails with `NonSphere` unless χ = 2.
pub fn vertical_closure(rc: &RectComplex) -> Result<QuotientData, BoxError> {
    let n = rc.n();
    let h_edges = horizontal_folds(rc)?;
    let dynamics = circle_dynamics(rc)?;
    let k = rc.h().field();
    let two = FieldScalar::from_int(k, 2);

    let a_pos: Vec<FieldScalar> = (0..=n).map(|i| a_position(rc, i)).collect();
    let mut s_points: Vec<FieldScalar> = dynamics.residual().to_vec();
    for p in &a_pos {
        if !dynamics.residual().contains(p) {
            let t = dynamics.tau(p);
            if !s_points.contains(&t) && !a_pos.contains(&t) {
                s_points.push(t);
            }
        }
    }
    s_points.sort_by(|a, b| a.cmp(b));
    let mut order: Vec<usize> = (0..=n).collect();
    order.sort_by(|&i, &j| a_pos[i].cmp(&a_pos[j]));

    // Wider row at each H end, so its corner is convex.
    let first_row = |i: usize| -> usize {
        match h_edges[i].side {
            Some(Side::Left) => i + 1,
            _ => i,
        }
    };
    let mut cycle: Vec<(Vertex, u32, FieldScalar)> = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        let u = a_pos[i].clone();
        let (q0, q1) = if i == 0 || i == n {
            (1, 1)
        } else if h_edges[i].owner == first_row(i) {
            (1, 3)
        } else {
            (3, 1)
        };
        cycle.push((Vertex::HEnd(i, 0), q0, u.clone()));
        cycle.push((Vertex::HMid(i), 2, u.clone()));
        cycle.push((Vertex::HEnd(i, 1), q1, u.clone()));
        let next = order.get(pos + 1).map(|&j| a_pos[j].clone()).unwrap_or_else(|| two.clone());
        for (s, p) in s_points.iter().enumerate() {
            if (p - &u).is_positive() && (&next - p).is_positive() {
                cycle.push((Vertex::S(s), 2, p.clone()));
            }
        }
    }
    let index: HashMap<Vertex, usize> = cycle.iter().enumerate().map(|(k, (v, _, _))| (*v, k)).collect();
    let mut uf = UnionFind((0..cycle.len()).collect());
    let mut edges = 0usize;
    for i in 0..=n {
        uf.union(index[&Vertex::HEnd(i, 0)], index[&Vertex::HEnd(i, 1)]);
        edges += 1;
    }
    // S edges keyed by wrapped start position.
    let len = cycle.len();
    let mut s_edges: Vec<(usize, usize, FieldScalar, FieldScalar)> = Vec::new();
    for a in 0..len {
        let b = (a + 1) % len;
        let half_edge = matches!(
            (cycle[a].0, cycle[b].0),
            (Vertex::HEnd(_, 0), Vertex::HMid(_)) | (Vertex::HMid(_), Vertex::HEnd(_, 1))
        );
        if half_edge {
            continue;
        }
        let ua = cycle[a].2.clone();
        let ub = if b == 0 { two.clone() } else { cycle[b].2.clone() };
        s_edges.push((a, b, ua, ub));
    }
    let starts: HashMap<Vec<String>, usize> =
        s_edges.iter().enumerate().map(|(e, (_, _, ua, _))| (wrap(ua).rep_strings(), e)).collect();
    for (a, b, ua, ub) in &s_edges {
        let mid = (ua + ub).scale(&half());
        let arc = dynamics.arc_of(&mid);
        let (ta, tb) = (dynamics.tau_on(arc, ua, false), dynamics.tau_on(arc, ub, true));
        let partner = starts
            .get(&tb.rep_strings())
            .map(|&e| &s_edges[e])
            .ok_or_else(|| BoxError::FoldMismatch(format!("edge at u = {} has no partner", ua.decimal(6))))?;
        if wrap(&partner.3) != ta {
            return Err(BoxError::FoldMismatch(format!("edge at u = {} pairs unevenly", ua.decimal(6))));
        }
        uf.union(*a, partner.1);
        uf.union(*b, partner.0);
    }
    edges += s_edges.len() / 2;

    let mut classes: HashMap<usize, (u32, Vec<usize>)> = HashMap::new();
    for (v, (_, q, _)) in cycle.iter().enumerate() {
        let e = classes.entry(uf.find(v)).or_insert((0, Vec::new()));
        e.0 += q;
        e.1.push(v);
    }
    let vertices = classes.len();
    let euler_characteristic = vertices as i64 - edges as i64 + 1;
    let angle_defect = classes.values().map(|(q, _)| 4 - i64::from(*q)).sum();
    let mut cone_points: Vec<ConePoint> = classes
        .values()
        .filter(|(q, _)| *q != 4)
        .map(|(q, members)| {
            let fold_point = members.iter().find_map(|&v| match cycle[v].0 {
                Vertex::HMid(i) => Some(i),
                _ => None,
            });
            let residual = members.iter().any(|&v| dynamics.residual().contains(&cycle[v].2));
            ConePoint { fold_point, residual, angle_quarter_turns: *q, members: members.len() }
        })
        .collect();
    cone_points.sort_by_key(|c| (c.fold_point.is_none(), c.fold_point));
    if euler_characteristic != 2 {
        return Err(BoxError::NonSphere { chi: euler_characteristic });
    }
    Ok(QuotientData {
        h_edges,
        dynamics,
        vertices,
        edges,
        faces: 1,
        euler_characteristic,
        cone_points,
        angle_defect,
    })
}
