//! Real algebraic numbers as (minimal polynomial, isolating interval).

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::error::ExactError;
use super::factor::factor;
use super::linalg::char_poly;
use super::poly::{rational_to_f64, IntPolynomial};
use super::sturm::SturmSequence;

/// Default isolation width, 2^-40 (below 10^-12).
pub fn default_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 40)
}

/// `2^-bits`.
pub fn dyadic_width(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

/// A real root of an irreducible integer polynomial, pinned by a rational
/// interval. Rational numbers carry the degenerate interval `[q, q]`;
/// otherwise the interval is open, its endpoints are not roots and it holds
/// exactly one root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicReal {
    minpoly: IntPolynomial,
    lo: BigRational,
    hi: BigRational,
}

impl AlgebraicReal {
    pub fn new(minpoly: IntPolynomial, lo: BigRational, hi: BigRational) -> Result<Self, ExactError> {
        let minpoly = minpoly.primitive_part();
        let deg = minpoly.degree().ok_or(ExactError::NotARoot)?;
        if deg == 0 || lo > hi {
            return Err(ExactError::NotARoot);
        }
        let fs = factor(&minpoly);
        if fs.len() != 1 || fs[0].1 != 1 {
            return Err(ExactError::NotARoot);
        }
        if lo == hi {
            if !minpoly.eval(&lo).is_zero() {
                return Err(ExactError::NotARoot);
            }
        } else {
            let (a, b) = (minpoly.sign_at(&lo), minpoly.sign_at(&hi));
            if a == 0 || b == 0 || a == b {
                return Err(ExactError::NotARoot);
            }
            if SturmSequence::new(&minpoly).count(&lo, &hi) != 1 {
                return Err(ExactError::NotARoot);
            }
        }
        Ok(AlgebraicReal { minpoly, lo, hi })
    }

    pub fn from_rational(q: BigRational) -> Self {
        let minpoly = IntPolynomial::new(vec![-q.numer().clone(), q.denom().clone()]).primitive_part();
        AlgebraicReal { minpoly, lo: q.clone(), hi: q }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap_or(0)
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn is_rational(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Sturm count of the minimal polynomial on the isolating interval
    /// (a point interval counts its own root).
    pub fn sturm_count(&self) -> usize {
        if self.is_rational() {
            usize::from(self.minpoly.eval(&self.lo).is_zero())
        } else {
            SturmSequence::new(&self.minpoly).count(&self.lo, &self.hi)
        }
    }

    /// Bisects until the interval width is at most `width`.
    pub fn refine(&self, width: &BigRational) -> AlgebraicReal {
        let mut out = self.clone();
        out.refine_in_place(width);
        out
    }

    pub fn refine_in_place(&mut self, width: &BigRational) {
        if self.is_rational() {
            return;
        }
        let two = BigRational::from_integer(2.into());
        let s_lo = self.minpoly.sign_at(&self.lo);
        while &self.hi - &self.lo > *width {
            let mid = (&self.lo + &self.hi) / &two;
            let s = self.minpoly.sign_at(&mid);
            if s == 0 {
                self.lo = mid.clone();
                self.hi = mid;
                return;
            }
            if s == s_lo {
                self.lo = mid;
            } else {
                self.hi = mid;
            }
        }
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.refine(&dyadic_width(60)).midpoint())
    }

    /// Compares against a rational exactly.
    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        if self.is_rational() {
            return self.lo.cmp(q);
        }
        if self.minpoly.eval(q).is_zero() {
            // Irreducible of degree >= 2 has no rational roots.
            unreachable!("irrational algebraic number equal to a rational");
        }
        let mut a = self.clone();
        loop {
            if *q <= a.lo {
                return Ordering::Greater;
            }
            if *q >= a.hi {
                return Ordering::Less;
            }
            let w = a.width() / BigRational::from_integer(4.into());
            a.refine_in_place(&w);
        }
    }

    /// Decimal rounded to nearest at `digits` places after the point.
    pub fn decimal(&self, digits: usize) -> String {
        let scale = BigRational::from_integer(BigInt::from(10).pow(digits as u32));
        let half = BigRational::new(1.into(), 2.into());
        let round = |x: &BigRational| (x * &scale + &half).floor().to_integer();
        let mut a = self.clone();
        loop {
            let (l, h) = (round(&a.lo), round(&a.hi));
            if l == h {
                return format_scaled(&l, digits);
            }
            let w = a.width() / BigRational::from_integer(16.into());
            a.refine_in_place(&w);
        }
    }
}

pub(crate) fn format_scaled(v: &BigInt, digits: usize) -> String {
    let neg = v.is_negative();
    let s = v.abs().to_string();
    let s = if s.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
    } else {
        s
    };
    let (int, frac) = s.split_at(s.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// The largest real root of `p`, with its minimal polynomial and an
/// isolating interval of the default width.
pub fn perron_root(p: &IntPolynomial) -> Result<AlgebraicReal, ExactError> {
    let factors: Vec<IntPolynomial> = factor(p).into_iter().map(|(f, _)| f).collect();
    let radical = factors.iter().fold(IntPolynomial::one(), |acc, f| &acc * f);
    let sturm = SturmSequence::new(&radical);
    let bound = radical.root_bound();
    let zero = BigRational::zero();
    if sturm.count(&zero, &bound) == 0 {
        return Err(ExactError::NoPositiveRoot);
    }
    let two = BigRational::from_integer(2.into());
    let (mut lo, hi) = (zero, bound);
    let mut hi = hi;
    // Invariant: at least one root in (lo, hi], none above hi.
    while sturm.count(&lo, &hi) > 1 {
        let mid = (&lo + &hi) / &two;
        if sturm.count(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    loop {
        let owners: Vec<&IntPolynomial> = factors
            .iter()
            .filter(|f| SturmSequence::new(f).count(&lo, &hi) == 1)
            .collect();
        if owners.len() == 1 {
            let f = owners[0].clone();
            if f.degree() == Some(1) {
                let root = BigRational::new(-f.coeff(0), f.coeff(1));
                return Ok(AlgebraicReal::from_rational(root));
            }
            // Endpoints of an irreducible of degree >= 2 are never roots, but
            // `hi` may be a root of another factor; nudge it inside.
            let mut hi2 = hi.clone();
            while f.sign_at(&hi2) == 0 || f.sign_at(&hi2) == f.sign_at(&lo) {
                hi2 = (&lo + &hi2) / &two;
                if SturmSequence::new(&f).count(&lo, &hi2) == 0 {
                    hi2 = hi.clone();
                    break;
                }
            }
            let mut a = AlgebraicReal { minpoly: f, lo: lo.clone(), hi: hi2 };
            if a.minpoly.sign_at(&a.lo) == 0 || a.minpoly.sign_at(&a.hi) == 0 {
                // Defensive: shift endpoints off shared rational roots.
                a.lo = &a.lo + (&hi - &lo) / BigRational::from_integer(1024.into());
            }
            a.refine_in_place(&default_width());
            return Ok(a);
        }
        let mid = (&lo + &hi) / &two;
        if sturm.count(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

pub fn perron_root_of_matrix(m: &[Vec<i64>]) -> Result<AlgebraicReal, ExactError> {
    perron_root(&char_poly(m)?)
}
