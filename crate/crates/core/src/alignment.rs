//! Solving and checking the alignment condition for ε = ±1.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intervalmap::{IntervalMap, IntervalMapError, PointKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlignmentError {
    #[error("ε must be +1 or -1, got {0}")]
    InvalidEpsilon(i32),
    #[error("the φ-cycle through {cycle:?} contains no critical point")]
    NonMinimal { cycle: Vec<usize> },
    #[error(transparent)]
    IntervalMap(#[from] IntervalMapError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    /// Fixed at a critical point.
    RuleA,
    /// Propagated from the first critical point `chain` steps along φ.
    RuleB { chain: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentAssignment {
    pub epsilon: i32,
    /// Indexed `0..=n`; `None` at 0 and n.
    pub alpha: Vec<Option<i32>>,
    pub provenance: Vec<Option<Provenance>>,
}

impl AlignmentAssignment {
    pub fn get(&self, i: usize) -> i32 {
        self.alpha[i].expect("α is defined on 1..n-1")
    }

    /// α(1..n-1) as a plain vector.
    pub fn values(&self) -> Vec<i32> {
        self.alpha.iter().flatten().copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlignmentVerdict {
    Satisfied(AlignmentAssignment),
    GeometricConflict { index: usize, solved: i32, geometric: i32 },
    NonMinimal { cycle: Vec<usize> },
}

impl AlignmentVerdict {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, AlignmentVerdict::Satisfied(_))
    }
}

/// Rule (a) at critical points, rule (b) along forward φ-orbits elsewhere.
pub fn solve(h: &IntervalMap, epsilon: i32) -> Result<AlignmentAssignment, AlignmentError> {
    if epsilon != 1 && epsilon != -1 {
        return Err(AlignmentError::InvalidEpsilon(epsilon));
    }
    let n = h.n();
    let kinds = h.classify();
    let phi = h.phi();
    let mut alpha: Vec<Option<i32>> = vec![None; n + 1];
    let mut prov: Vec<Option<Provenance>> = vec![None; n + 1];
    for i in 1..n {
        match kinds[i] {
            PointKind::CriticalMax => alpha[i] = Some(-epsilon),
            PointKind::CriticalMin => alpha[i] = Some(epsilon),
            _ => continue,
        }
        prov[i] = Some(Provenance::RuleA);
    }
    for start in 1..n {
        if alpha[start].is_some() {
            continue;
        }
        let mut path = vec![start];
        let mut x = phi[start];
        while alpha[x].is_none() {
            if path.contains(&x) || x == 0 || x == n {
                let mut cycle = path.clone();
                cycle.sort_unstable();
                return Err(AlignmentError::NonMinimal { cycle });
            }
            path.push(x);
            x = phi[x];
        }
        let base_chain = match prov[x] {
            Some(Provenance::RuleB { chain }) => chain,
            _ => 0,
        };
        let mut value = alpha[x].unwrap();
        for (k, &i) in path.iter().enumerate().rev() {
            value *= h.dir(i + 1) * epsilon;
            alpha[i] = Some(value);
            prov[i] = Some(Provenance::RuleB { chain: base_chain + path.len() - k });
        }
    }
    Ok(AlignmentAssignment { epsilon, alpha, provenance: prov })
}

/// Compares the solved α with the geometric one on its domain.
pub fn check(h: &IntervalMap, epsilon: i32) -> Result<AlignmentVerdict, AlignmentError> {
    let geometric = h.geometric_alignment()?;
    let solved = match solve(h, epsilon) {
        Ok(a) => a,
        Err(AlignmentError::NonMinimal { cycle }) => return Ok(AlignmentVerdict::NonMinimal { cycle }),
        Err(e) => return Err(e),
    };
    for i in geometric.domain() {
        let (s, g) = (solved.get(i), geometric.get(i).unwrap());
        if s != g {
            return Ok(AlignmentVerdict::GeometricConflict { index: i, solved: s, geometric: g });
        }
    }
    Ok(AlignmentVerdict::Satisfied(solved))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oddblock::from_phi;

    fn map(phi: &[usize]) -> IntervalMap {
        IntervalMap::from_matrix(&from_phi(phi).unwrap()).unwrap()
    }

    #[test]
    fn fig1_plus() {
        let h = map(&[2, 1, 3, 5, 6, 4, 0]);
        let a = solve(&h, 1).unwrap();
        assert_eq!(a.values(), vec![1, 1, 1, -1, 1]);
        assert_eq!(a.provenance[1], Some(Provenance::RuleA));
        assert_eq!(a.provenance[5], Some(Provenance::RuleB { chain: 1 }));
        assert_eq!(a.provenance[3], Some(Provenance::RuleB { chain: 2 }));
        assert_eq!(a.provenance[2], Some(Provenance::RuleB { chain: 3 }));
        assert!(check(&h, 1).unwrap().is_satisfied());
        assert!(matches!(check(&h, -1).unwrap(), AlignmentVerdict::GeometricConflict { index: 1, .. }));
    }

    #[test]
    fn fibonacci_and_silver_need_minus() {
        for phi in [&[1, 2, 0][..], &[2, 0, 3, 1][..]] {
            let h = map(phi);
            assert!(check(&h, -1).unwrap().is_satisfied());
            assert!(matches!(check(&h, 1).unwrap(), AlignmentVerdict::GeometricConflict { index: 1, .. }));
        }
        assert_eq!(solve(&map(&[1, 2, 0]), -1).unwrap().values(), vec![1]);
        assert_eq!(solve(&map(&[2, 0, 3, 1]), -1).unwrap().values(), vec![-1, 1]);
    }

    #[test]
    fn bad_epsilon() {
        assert_eq!(solve(&map(&[1, 2, 0]), 0), Err(AlignmentError::InvalidEpsilon(0)));
    }
}
