//! Sturm sequences for counting real roots in half-open rational intervals.

use num_rational::BigRational;
use num_traits::Zero;

use super::poly::{sign_of, IntPolynomial, QPolynomial};

#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<QPolynomial>,
}

impl SturmSequence {
    pub fn new(p: &IntPolynomial) -> Self {
        let p0 = p.to_rational();
        let p1 = p0.derivative();
        let mut seq = vec![p0];
        if !p1.is_zero() {
            seq.push(p1);
        }
        while seq.len() >= 2 {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            // Positive rescaling keeps signs; normalize magnitudes.
            let lc = r.leading();
            let lc_abs = if lc < BigRational::zero() { -lc } else { lc };
            seq.push((-&r).scale(&(BigRational::from_integer(1.into()) / lc_abs)));
        }
        SturmSequence { seq }
    }

    fn variations(&self, signs: impl Iterator<Item = i32>) -> usize {
        let mut last = 0;
        let mut v = 0;
        for s in signs {
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        self.variations(self.seq.iter().map(|q| sign_of(&q.eval(x))))
    }

    pub fn variations_at_pos_infinity(&self) -> usize {
        self.variations(self.seq.iter().map(|q| sign_of(&q.leading())))
    }

    pub fn variations_at_neg_infinity(&self) -> usize {
        self.variations(self.seq.iter().map(|q| {
            let s = sign_of(&q.leading());
            if q.degree().unwrap_or(0) % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    /// Number of distinct real roots overall.
    pub fn count_all(&self) -> usize {
        self.variations_at_neg_infinity()
            .saturating_sub(self.variations_at_pos_infinity())
    }
}

/// Disjoint isolating intervals `(lo, hi]` for every real root of `p`,
/// in increasing order. Each interval has width at most `max_width` and is
/// shrunk to a point when the root is a dyadic rational hit exactly.
pub fn isolate_real_roots(p: &IntPolynomial, max_width: &BigRational) -> Vec<(BigRational, BigRational)> {
    let sq = p.gcd(&p.derivative());
    let p = p.div_exact(&sq).unwrap_or_else(|| p.clone());
    let sturm = SturmSequence::new(&p);
    let b = p.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let c = sturm.count(&lo, &hi);
        if c == 0 {
            continue;
        }
        if c == 1 && &hi - &lo <= *max_width {
            out.push((lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn counts_roots_of_cubic() {
        // x^3 - 6x^2 + 8x + 1 has three real roots near -0.12, 2.2, 3.9.
        let p = IntPolynomial::from_i64s(&[1, 8, -6, 1]);
        let s = SturmSequence::new(&p);
        assert_eq!(s.count_all(), 3);
        assert_eq!(s.count(&q(-1, 1), &q(0, 1)), 1);
        assert_eq!(s.count(&q(3, 1), &q(4, 1)), 1);
    }

    #[test]
    fn isolation_widths() {
        let p = IntPolynomial::from_i64s(&[-2, 0, 1]);
        let w = q(1, 1024);
        let roots = isolate_real_roots(&p, &w);
        assert_eq!(roots.len(), 2);
        for (lo, hi) in &roots {
            assert!(hi - lo <= w);
        }
        assert!(roots[1].0 < q(1415, 1000) && roots[1].1 > q(1414, 1000));
    }
}
