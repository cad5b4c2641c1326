//! Odd-block matrices: validation, the map φ ↔ matrix correspondence for
//! {0,1} entries, aperiodicity, nonsingularity and minimality.
//!
//! Rows and columns are 1-based in the mathematics and 0-based in storage:
//! `entries[i - 1][j - 1]` is the entry in row `i`, column `j`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::determinant;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum OddBlockError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("entry ({row}, {column}) is negative")]
    NegativeEntry { row: usize, column: usize },
    #[error("entry ({row}, {column}) = {value} is not 0 or 1")]
    ValueTooLarge { row: usize, column: usize, value: i64 },
    #[error("column {column} is zero (φ_{} = φ_{column})", column - 1)]
    ZeroColumn { column: usize },
    #[error("nonzero entries of column {column} are not consecutive")]
    NotConsecutive { column: usize },
    #[error("φ is not a permutation of 0..={n}")]
    NotAPermutation { n: usize },
    #[error("the φ-cycle {cycle:?} has no critical point and contains an endpoint")]
    Irreparable { cycle: Vec<usize> },
}

/// A {0,1} odd-block matrix together with its φ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddBlockMatrix {
    n: usize,
    entries: Vec<Vec<i64>>,
    phi: Vec<usize>,
}

impl OddBlockMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn phi(&self) -> &[usize] {
        &self.phi
    }

    /// Entry in row `i`, column `j` (1-based).
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i - 1][j - 1]
    }

    pub fn transpose(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.entries[i][j]).collect())
            .collect()
    }
}

/// The first way a matrix fails to be odd-block for a given φ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    NotConsecutive { column: usize },
    Parity { row: usize, column: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub valid: bool,
    pub first_violation: Option<Violation>,
}

fn check_square(m: &[Vec<i64>]) -> Result<usize, OddBlockError> {
    let n = m.len();
    if n == 0 {
        return Err(OddBlockError::DimensionMismatch("empty matrix".into()));
    }
    if let Some(r) = m.iter().position(|r| r.len() != n) {
        return Err(OddBlockError::DimensionMismatch(format!(
            "row {} has {} entries, expected {n}",
            r + 1,
            m[r].len()
        )));
    }
    Ok(n)
}

fn check_phi(phi: &[usize], n: usize) -> Result<(), OddBlockError> {
    if phi.len() != n + 1 {
        return Err(OddBlockError::DimensionMismatch(format!(
            "φ has length {}, expected {}",
            phi.len(),
            n + 1
        )));
    }
    if let Some(&v) = phi.iter().find(|&&v| v > n) {
        return Err(OddBlockError::DimensionMismatch(format!("φ value {v} exceeds {n}")));
    }
    Ok(())
}

/// Whether row `i` (1-based) lies in the block of column `j`.
pub fn in_block(phi: &[usize], i: usize, j: usize) -> bool {
    let (a, b) = (phi[j - 1], phi[j]);
    a.min(b) < i && i <= a.max(b)
}

/// Checks consecutiveness of nonzero entries per column and the parity rule.
pub fn validate_odd_block(m: &[Vec<i64>], phi: &[usize]) -> Result<Validation, OddBlockError> {
    let n = check_square(m)?;
    check_phi(phi, n)?;
    for (i, row) in m.iter().enumerate() {
        if let Some(j) = row.iter().position(|&x| x < 0) {
            return Err(OddBlockError::NegativeEntry { row: i + 1, column: j + 1 });
        }
    }
    for j in 1..=n {
        let nz: Vec<usize> = (1..=n).filter(|&i| m[i - 1][j - 1] != 0).collect();
        if nz.windows(2).any(|w| w[1] != w[0] + 1) {
            return Ok(Validation {
                valid: false,
                first_violation: Some(Violation::NotConsecutive { column: j }),
            });
        }
        if let Some(i) = (1..=n).find(|&i| (m[i - 1][j - 1] % 2 == 1) != in_block(phi, i, j)) {
            return Ok(Validation {
                valid: false,
                first_violation: Some(Violation::Parity { row: i, column: j }),
            });
        }
    }
    Ok(Validation { valid: true, first_violation: None })
}

/// The unique {0,1} matrix whose column blocks are given by φ.
pub fn from_phi(phi: &[usize]) -> Result<OddBlockMatrix, OddBlockError> {
    if phi.len() < 2 {
        return Err(OddBlockError::DimensionMismatch("φ needs at least two values".into()));
    }
    let n = phi.len() - 1;
    check_phi(phi, n)?;
    if let Some(j) = (1..=n).find(|&j| phi[j - 1] == phi[j]) {
        return Err(OddBlockError::ZeroColumn { column: j });
    }
    let entries = (1..=n)
        .map(|i| (1..=n).map(|j| i64::from(in_block(phi, i, j))).collect())
        .collect();
    Ok(OddBlockMatrix { n, entries, phi: phi.to_vec() })
}

/// Every φ with `from_phi(φ) = m`, sorted.
pub fn infer_phi(m: &[Vec<i64>]) -> Result<Vec<Vec<usize>>, OddBlockError> {
    let n = check_square(m)?;
    let mut pairs = Vec::with_capacity(n);
    for j in 1..=n {
        for i in 1..=n {
            let v = m[i - 1][j - 1];
            if v < 0 {
                return Err(OddBlockError::NegativeEntry { row: i, column: j });
            }
            if v > 1 {
                return Err(OddBlockError::ValueTooLarge { row: i, column: j, value: v });
            }
        }
        let ones: Vec<usize> = (1..=n).filter(|&i| m[i - 1][j - 1] == 1).collect();
        let (Some(&a), Some(&b)) = (ones.first(), ones.last()) else {
            return Err(OddBlockError::ZeroColumn { column: j });
        };
        if b - a + 1 != ones.len() {
            return Err(OddBlockError::NotConsecutive { column: j });
        }
        pairs.push((a - 1, b));
    }
    let mut out = Vec::new();
    for start in [pairs[0].0, pairs[0].1] {
        let mut phi = vec![start];
        for &(a, b) in &pairs {
            let last = *phi.last().unwrap();
            if last == a {
                phi.push(b);
            } else if last == b {
                phi.push(a);
            } else {
                break;
            }
        }
        if phi.len() == n + 1 && !out.contains(&phi) {
            out.push(phi);
        }
    }
    out.sort();
    Ok(out)
}

pub fn is_nonsingular(m: &[Vec<i64>]) -> bool {
    determinant(m).is_ok_and(|d| d != 0.into())
}

/// Some power up to the Wielandt bound `n² − 2n + 2` is entrywise positive.
pub fn is_aperiodic(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return false;
    }
    let base: Vec<Vec<bool>> = m.iter().map(|r| r.iter().map(|&x| x > 0).collect()).collect();
    let mut p = base.clone();
    let bound = n * n + 2 - 2 * n;
    for _ in 1..=bound {
        if p.iter().all(|r| r.iter().all(|&x| x)) {
            return true;
        }
        p = (0..n)
            .map(|i| (0..n).map(|j| (0..n).any(|k| p[i][k] && base[k][j])).collect())
            .collect();
    }
    false
}

pub fn is_permutation(phi: &[usize]) -> bool {
    let mut seen = vec![false; phi.len()];
    phi.iter().all(|&v| v < phi.len() && !std::mem::replace(&mut seen[v], true))
}

/// Interior index `i` is critical when φ turns there.
pub fn is_critical(phi: &[usize], i: usize) -> bool {
    let n = phi.len() - 1;
    if i == 0 || i >= n {
        return false;
    }
    (phi[i] > phi[i - 1]) != (phi[i + 1] > phi[i])
}

pub fn critical_indices(phi: &[usize]) -> Vec<usize> {
    (1..phi.len().saturating_sub(1)).filter(|&i| is_critical(phi, i)).collect()
}

/// Cycles of a permutation, each starting at its smallest element, ordered
/// by that element.
pub fn cycles(phi: &[usize]) -> Result<Vec<Vec<usize>>, OddBlockError> {
    if !is_permutation(phi) {
        return Err(OddBlockError::NotAPermutation { n: phi.len().saturating_sub(1) });
    }
    let mut seen = vec![false; phi.len()];
    let mut out = Vec::new();
    for s in 0..phi.len() {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            c.push(x);
            x = phi[x];
        }
        out.push(c);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Minimality {
    Minimal,
    /// An interior cycle without critical points; removing it shrinks n.
    Reducible { cycle: Vec<usize> },
    /// A cycle without critical points that contains 0 or n.
    Irreparable { cycle: Vec<usize> },
}

pub fn minimality(phi: &[usize]) -> Result<Minimality, OddBlockError> {
    let n = phi.len().saturating_sub(1);
    let bare: Vec<Vec<usize>> = cycles(phi)?
        .into_iter()
        .filter(|c| !c.iter().any(|&i| is_critical(phi, i)))
        .collect();
    if let Some(c) = bare.iter().find(|c| c.iter().any(|&i| i == 0 || i == n)) {
        return Ok(Minimality::Irreparable { cycle: c.clone() });
    }
    Ok(match bare.into_iter().next() {
        Some(cycle) => Minimality::Reducible { cycle },
        None => Minimality::Minimal,
    })
}

/// Removes one bare interior cycle and renumbers; minimal inputs are
/// returned unchanged.
pub fn reduce(phi: &[usize]) -> Result<Vec<usize>, OddBlockError> {
    match minimality(phi)? {
        Minimality::Minimal => Ok(phi.to_vec()),
        Minimality::Irreparable { cycle } => Err(OddBlockError::Irreparable { cycle }),
        Minimality::Reducible { cycle } => {
            let keep: Vec<usize> = (0..phi.len()).filter(|i| !cycle.contains(i)).collect();
            let rank = |x: usize| keep.binary_search(&x).expect("cycle is φ-invariant");
            Ok(keep.iter().map(|&i| rank(phi[i])).collect())
        }
    }
}

/// Repeats [`reduce`] until the result is minimal.
pub fn reduce_fully(phi: &[usize]) -> Result<Vec<usize>, OddBlockError> {
    let mut cur = phi.to_vec();
    loop {
        let next = reduce(&cur)?;
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1_PHI: [usize; 7] = [2, 1, 3, 5, 6, 4, 0];

    fn thurston() -> Vec<Vec<i64>> {
        vec![
            vec![5, 6, 0, 0, 0, 0, 0],
            vec![1, 2, 0, 0, 0, 4, 0],
            vec![3, 5, 1, 0, 1, 2, 1],
            vec![8, 4, 1, 0, 7, 4, 1],
            vec![2, 0, 1, 3, 0, 6, 1],
            vec![0, 0, 0, 0, 0, 0, 1],
            vec![0, 0, 0, 0, 0, 0, 1],
        ]
    }

    #[test]
    fn thurston_example_is_odd_block() {
        let v = validate_odd_block(&thurston(), &[0, 3, 2, 5, 4, 2, 2, 7]).unwrap();
        assert!(v.valid);
    }

    #[test]
    fn fig1_matrix_from_phi() {
        let m = from_phi(&FIG1_PHI).unwrap();
        let cols: Vec<Vec<usize>> = (1..=6)
            .map(|j| (1..=6).filter(|&i| m.entry(i, j) == 1).collect())
            .collect();
        assert_eq!(
            cols,
            vec![vec![2], vec![2, 3], vec![4, 5], vec![6], vec![5, 6], vec![1, 2, 3, 4]]
        );
        assert!(validate_odd_block(m.entries(), &FIG1_PHI).unwrap().valid);
        let bad = validate_odd_block(m.entries(), &[2, 1, 3, 5, 6, 4, 6]).unwrap();
        assert!(!bad.valid);
        assert_eq!(bad.first_violation, Some(Violation::Parity { row: 1, column: 6 }));
    }

    #[test]
    fn small_from_phi() {
        assert_eq!(from_phi(&[1, 2, 0]).unwrap().entries(), &[vec![0, 1], vec![1, 1]]);
        assert_eq!(
            from_phi(&[2, 0, 3, 1]).unwrap().entries(),
            &[vec![1, 1, 0], vec![1, 1, 1], vec![0, 1, 1]]
        );
        assert_eq!(from_phi(&[1, 1, 0]), Err(OddBlockError::ZeroColumn { column: 1 }));
    }

    #[test]
    fn inference() {
        assert_eq!(infer_phi(&[vec![0, 1], vec![1, 1]]).unwrap(), vec![vec![1, 2, 0]]);
        assert_eq!(infer_phi(&[vec![1]]).unwrap(), vec![vec![0, 1], vec![1, 0]]);
        let m = from_phi(&FIG1_PHI).unwrap();
        assert!(infer_phi(m.entries()).unwrap().contains(&FIG1_PHI.to_vec()));
        assert_eq!(
            infer_phi(&[vec![1, 0], vec![0, 1], vec![1, 1]]),
            Err(OddBlockError::DimensionMismatch("row 1 has 2 entries, expected 3".into()))
        );
        assert_eq!(
            infer_phi(&[vec![1, 1, 0], vec![0, 1, 0], vec![1, 1, 1]]),
            Err(OddBlockError::NotConsecutive { column: 1 })
        );
    }

    #[test]
    fn singularity_and_aperiodicity() {
        let m = from_phi(&FIG1_PHI).unwrap();
        assert!(is_nonsingular(m.entries()));
        assert!(is_aperiodic(m.entries()));
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert!(is_nonsingular(&id));
        assert!(!is_aperiodic(&id));
        let g = vec![vec![0, 1], vec![1, 1]];
        assert!(is_nonsingular(&g) && is_aperiodic(&g));
        assert!(!is_nonsingular(&[vec![1, 1], vec![1, 1]]));
        // A 2-cycle is irreducible but periodic.
        assert!(!is_aperiodic(&[vec![0, 1], vec![1, 0]]));
    }

    #[test]
    fn minimality_examples() {
        assert_eq!(critical_indices(&FIG1_PHI), vec![1, 4]);
        assert_eq!(cycles(&FIG1_PHI).unwrap(), vec![vec![0, 2, 3, 5, 4, 6], vec![1]]);
        assert_eq!(minimality(&FIG1_PHI).unwrap(), Minimality::Minimal);
        assert_eq!(minimality(&[1, 2, 0]).unwrap(), Minimality::Minimal);
        assert_eq!(
            minimality(&[0, 2, 1, 3]).unwrap(),
            Minimality::Irreparable { cycle: vec![0] }
        );
        assert_eq!(
            minimality(&[0, 0, 1]),
            Err(OddBlockError::NotAPermutation { n: 2 })
        );
    }

    #[test]
    fn reduction_removes_a_bare_cycle() {
        // Indices 2 and 3 swap on a decreasing stretch.
        let phi = [1, 5, 3, 2, 0, 4];
        assert_eq!(critical_indices(&phi), vec![1, 4]);
        assert_eq!(minimality(&phi).unwrap(), Minimality::Reducible { cycle: vec![2, 3] });
        let r = reduce(&phi).unwrap();
        assert_eq!(r, vec![1, 3, 0, 2]);
        assert_ne!(minimality(&r).unwrap(), Minimality::Reducible { cycle: vec![2, 3] });
    }
}
