//! The number field Q(λ) generated by a real algebraic number, with exact
//! arithmetic and sign decisions by interval evaluation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::algebraic::{dyadic_width, format_scaled, AlgebraicReal};
use super::error::ExactError;
use super::poly::{rational_to_f64, sign_of, QPolynomial};
use super::sturm::SturmSequence;

const SHARP_BITS: u32 = 120;

/// Q(λ) for a fixed real algebraic λ.
#[derive(Debug)]
pub struct NumberField {
    generator: AlgebraicReal,
    sharp: AlgebraicReal,
    modulus: QPolynomial,
    approx: f64,
}

/// Shared handle to a number field.
pub type Field = Arc<NumberField>;

impl NumberField {
    pub fn new(generator: AlgebraicReal) -> Field {
        let sharp = generator.refine(&dyadic_width(SHARP_BITS));
        let modulus = generator.minpoly().to_rational().monic();
        let approx = rational_to_f64(&sharp.midpoint());
        Arc::new(NumberField { generator, sharp, modulus, approx })
    }

    /// The field Q itself (generator 0).
    pub fn rationals() -> Field {
        Self::new(AlgebraicReal::from_integer(0))
    }

    pub fn generator(&self) -> &AlgebraicReal {
        &self.generator
    }

    pub fn degree(&self) -> usize {
        self.generator.degree()
    }

    pub fn modulus(&self) -> &QPolynomial {
        &self.modulus
    }

    /// Same generator: same minimal polynomial and the same real root.
    pub fn same_as(&self, other: &NumberField) -> bool {
        if std::ptr::eq(self, other) {
            return true;
        }
        if self.generator.minpoly() != other.generator.minpoly() {
            return false;
        }
        let (a, b) = (&self.sharp, &other.sharp);
        if a.is_rational() || b.is_rational() {
            return a.lo() == b.lo();
        }
        let lo = a.lo().max(b.lo());
        let hi = a.hi().min(b.hi());
        lo < hi && SturmSequence::new(a.minpoly()).count(lo, hi) == 1
    }
}

fn same_field(a: &Field, b: &Field) -> bool {
    Arc::ptr_eq(a, b) || a.same_as(b)
}

/// An element of Q(λ), stored as a polynomial in λ of degree below
/// `deg minpoly`.
#[derive(Clone)]
pub struct FieldScalar {
    field: Field,
    rep: QPolynomial,
}

impl fmt::Debug for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldScalar({self})")
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rep.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.rep.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = sign_of(c) < 0;
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !abs.is_one();
            if show_coeff {
                if abs.is_integer() {
                    write!(f, "{abs}")?;
                } else {
                    write!(f, "({abs})")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "{}λ", if show_coeff { "·" } else { "" })?,
                _ => write!(f, "{}λ^{i}", if show_coeff { "·" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl FieldScalar {
    pub fn from_rep(field: &Field, rep: QPolynomial) -> Self {
        let rep = if rep.degree().unwrap_or(0) >= field.degree() {
            rep.rem(&field.modulus)
        } else {
            rep
        };
        FieldScalar { field: field.clone(), rep }
    }

    pub fn zero(field: &Field) -> Self {
        FieldScalar { field: field.clone(), rep: QPolynomial::zero() }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Field, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(field: &Field, n: BigInt) -> Self {
        Self::from_rational(field, BigRational::from_integer(n))
    }

    pub fn from_rational(field: &Field, q: BigRational) -> Self {
        Self::from_rep(field, QPolynomial::constant(q))
    }

    /// λ itself.
    pub fn generator(field: &Field) -> Self {
        if field.degree() == 1 {
            return Self::from_rational(field, field.generator.lo().clone());
        }
        Self::from_rep(
            field,
            QPolynomial::new(vec![BigRational::zero(), BigRational::one()]),
        )
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rep(&self) -> &QPolynomial {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rep.degree() == Some(0) && self.rep.coeff(0).is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.rep.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(self.rep.coeff(0)),
            _ => None,
        }
    }

    fn check(&self, other: &FieldScalar) -> Result<(), ExactError> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(ExactError::MixedAmbientField)
        }
    }

    pub fn try_add(&self, other: &FieldScalar) -> Result<FieldScalar, ExactError> {
        self.check(other)?;
        Ok(FieldScalar { field: self.field.clone(), rep: &self.rep + &other.rep })
    }

    pub fn try_sub(&self, other: &FieldScalar) -> Result<FieldScalar, ExactError> {
        self.check(other)?;
        Ok(FieldScalar { field: self.field.clone(), rep: &self.rep - &other.rep })
    }

    pub fn try_mul(&self, other: &FieldScalar) -> Result<FieldScalar, ExactError> {
        self.check(other)?;
        Ok(Self::from_rep(&self.field, &self.rep * &other.rep))
    }

    pub fn checked_inverse(&self) -> Result<FieldScalar, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let (g, s, _) = self.rep.ext_gcd(&self.field.modulus);
        // The modulus is irreducible, so g = 1.
        debug_assert_eq!(g.degree(), Some(0));
        Ok(Self::from_rep(&self.field, s))
    }

    pub fn try_div(&self, other: &FieldScalar) -> Result<FieldScalar, ExactError> {
        self.check(other)?;
        self.try_mul(&other.checked_inverse()?)
    }

    pub fn inverse(&self) -> FieldScalar {
        self.checked_inverse().expect("inverse of zero")
    }

    pub fn scale(&self, q: &BigRational) -> FieldScalar {
        FieldScalar { field: self.field.clone(), rep: self.rep.scale(q) }
    }

    pub fn scale_int(&self, k: i64) -> FieldScalar {
        self.scale(&BigRational::from_integer(k.into()))
    }

    pub fn pow(&self, k: u32) -> FieldScalar {
        let mut r = Self::one(&self.field);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    pub fn abs(&self) -> FieldScalar {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Interval enclosure of the value using a given enclosure of λ.
    fn enclose(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        let mut vlo = BigRational::zero();
        let mut vhi = BigRational::zero();
        for c in self.rep.coeffs().iter().rev() {
            let p = [&vlo * lo, &vlo * hi, &vhi * lo, &vhi * hi];
            let mn = p.iter().min().unwrap().clone();
            let mx = p.iter().max().unwrap().clone();
            vlo = mn + c;
            vhi = mx + c;
        }
        (vlo, vhi)
    }

    /// Enclosure of width at most `2^-bits`.
    pub fn interval(&self, bits: u32) -> (BigRational, BigRational) {
        if let Some(q) = self.as_rational() {
            return (q.clone(), q);
        }
        let target = dyadic_width(bits);
        let mut g = self.field.sharp.clone();
        loop {
            let (lo, hi) = self.enclose(g.lo(), g.hi());
            if &hi - &lo <= target {
                return (lo, hi);
            }
            let w = g.width() / BigRational::from_integer(1024.into());
            g.refine_in_place(&w);
        }
    }

    /// Sign of the value, exact.
    pub fn sign(&self) -> i32 {
        if let Some(q) = self.as_rational() {
            return sign_of(&q);
        }
        if let Some(s) = self.float_sign() {
            return s;
        }
        let mut g = self.field.sharp.clone();
        loop {
            let (lo, hi) = self.enclose(g.lo(), g.hi());
            if sign_of(&lo) > 0 {
                return 1;
            }
            if sign_of(&hi) < 0 {
                return -1;
            }
            // A nonzero element of Q(λ) cannot vanish at λ; refine.
            let w = g.width() / BigRational::from_integer((1i64 << 20).into());
            g.refine_in_place(&w);
        }
    }

    /// Horner in f64, trusted only when the value clears a bound far above
    /// the accumulated rounding error (at most `(3d + 2)·2^-53·Σ|c_i|λ^i`).
    fn float_sign(&self) -> Option<i32> {
        let x = self.field.approx;
        let (mut v, mut mag) = (0.0f64, 0.0f64);
        for c in self.rep.coeffs().iter().rev() {
            let c = rational_to_f64(c);
            v = v * x + c;
            mag = mag * x.abs() + c.abs();
        }
        if !v.is_finite() || !mag.is_finite() || mag == 0.0 {
            return None;
        }
        if v.abs() > 1e-10 * mag {
            Some(if v > 0.0 { 1 } else { -1 })
        } else {
            None
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn try_cmp(&self, other: &FieldScalar) -> Result<Ordering, ExactError> {
        Ok(self.try_sub(other)?.sign().cmp(&0))
    }

    /// Total order on one field. Panics on mixed fields.
    pub fn cmp(&self, other: &FieldScalar) -> Ordering {
        self.try_cmp(other).expect("comparison across number fields")
    }

    pub fn min(&self, other: &FieldScalar) -> FieldScalar {
        if self.cmp(other) == Ordering::Greater {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn max(&self, other: &FieldScalar) -> FieldScalar {
        if self.cmp(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.interval(64);
        rational_to_f64(&((lo + hi) / BigRational::from_integer(2.into())))
    }

    /// Decimal string rounded to nearest with `digits` places.
    pub fn decimal(&self, digits: usize) -> String {
        let scale = BigRational::from_integer(BigInt::from(10).pow(digits as u32));
        let half = BigRational::new(1.into(), 2.into());
        let round = |x: &BigRational| (x * &scale + &half).floor().to_integer();
        if let Some(q) = self.as_rational() {
            return format_scaled(&round(&q), digits);
        }
        let mut bits = (digits as f64 * 3.33) as u32 + 16;
        loop {
            let (lo, hi) = self.interval(bits);
            let (a, b) = (round(&lo), round(&hi));
            if a == b {
                return format_scaled(&a, digits);
            }
            bits += 32;
        }
    }

    /// Coefficients of the representation as reduced fraction strings,
    /// constant term first.
    pub fn rep_strings(&self) -> Vec<String> {
        self.rep.coeffs().iter().map(|c| c.to_string()).collect()
    }
}

impl PartialEq for FieldScalar {
    fn eq(&self, other: &FieldScalar) -> bool {
        same_field(&self.field, &other.field) && self.rep == other.rep
    }
}

impl Eq for FieldScalar {}

impl PartialOrd for FieldScalar {
    fn partial_cmp(&self, other: &FieldScalar) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&FieldScalar> for &FieldScalar {
            type Output = FieldScalar;
            fn $m(self, rhs: &FieldScalar) -> FieldScalar {
                self.$try(rhs).expect("arithmetic across number fields")
            }
        }
        impl $tr<FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, rhs: FieldScalar) -> FieldScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, rhs: &FieldScalar) -> FieldScalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<FieldScalar> for &FieldScalar {
            type Output = FieldScalar;
            fn $m(self, rhs: FieldScalar) -> FieldScalar {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        FieldScalar { field: self.field.clone(), rep: -&self.rep }
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        -&self
    }
}

/// Polynomials with coefficients in Q(λ), constant term first, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldPoly {
    coeffs: Vec<FieldScalar>,
}

impl FieldPoly {
    pub fn new(mut coeffs: Vec<FieldScalar>) -> Self {
        while coeffs.last().is_some_and(FieldScalar::is_zero) {
            coeffs.pop();
        }
        FieldPoly { coeffs }
    }

    pub fn from_rational(field: &Field, p: &QPolynomial) -> Self {
        Self::new(
            p.coeffs()
                .iter()
                .map(|c| FieldScalar::from_rational(field, c.clone()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[FieldScalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.inverse();
                Self::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn div_rem(&self, d: &FieldPoly) -> (FieldPoly, FieldPoly) {
        let dd = d.degree().expect("polynomial division by zero");
        let inv = d.coeffs[dd].inverse();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (FieldPoly { coeffs: Vec::new() }, self.clone());
        }
        let zero = FieldScalar::zero(inv.field());
        let mut q = vec![zero; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = &r[k + j] - &(&c * dc);
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (FieldPoly::new(q), FieldPoly::new(r))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &FieldPoly) -> FieldPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::algebraic::perron_root_of_matrix;

    fn golden() -> Field {
        NumberField::new(perron_root_of_matrix(&[vec![0, 1], vec![1, 1]]).unwrap())
    }

    #[test]
    fn golden_inverse_is_lambda_minus_one() {
        let k = golden();
        let l = FieldScalar::generator(&k);
        let one = FieldScalar::one(&k);
        assert_eq!(&l * &(&l - &one), one);
        assert_eq!(l.inverse(), &l - &one);
        assert_eq!(l.pow(2).cmp(&(&l + &one)), Ordering::Equal);
        let s = l.scale_int(3);
        assert_eq!(&FieldScalar::zero(&k) + &s, s);
    }

    #[test]
    fn signs_and_decimals() {
        let k = golden();
        let l = FieldScalar::generator(&k);
        let one = FieldScalar::one(&k);
        // 2 - λ ≈ 0.381966
        let w = &FieldScalar::from_int(&k, 2) - &l;
        assert_eq!(w.sign(), 1);
        assert_eq!(w.decimal(6), "0.381966");
        assert_eq!((&l - &FieldScalar::from_int(&k, 2)).sign(), -1);
        assert_eq!((&l - &one).decimal(4), "0.6180");
        assert!((w.to_f64() - 0.3819660112501051).abs() < 1e-15);
        assert_eq!(format!("{}", &l - &one), "λ - 1");
    }

    #[test]
    fn division_by_zero_and_mixed_fields() {
        let k = golden();
        let q = NumberField::rationals();
        assert_eq!(FieldScalar::zero(&k).checked_inverse(), Err(ExactError::DivisionByZero));
        let a = FieldScalar::one(&k);
        let b = FieldScalar::one(&q);
        assert_eq!(a.try_cmp(&b), Err(ExactError::MixedAmbientField));
        assert_eq!(a.try_add(&b), Err(ExactError::MixedAmbientField));
        assert!(a.partial_cmp(&b).is_none());
    }

    #[test]
    fn equal_generators_give_equal_fields() {
        let k1 = golden();
        let k2 = golden();
        assert!(!Arc::ptr_eq(&k1, &k2));
        assert_eq!(FieldScalar::generator(&k1), FieldScalar::generator(&k2));
    }

    #[test]
    fn gcd_over_the_field() {
        let k = golden();
        let l = FieldScalar::generator(&k);
        let one = FieldScalar::one(&k);
        // (x - λ)(x + 1) and (x - λ)(x - 2)
        let a = FieldPoly::new(vec![-&l, &one - &l, one.clone()]);
        let b = FieldPoly::new(vec![l.scale_int(2), -(&l + &FieldScalar::from_int(&k, 2)), one.clone()]);
        let g = a.gcd(&b);
        assert_eq!(g, FieldPoly::new(vec![-&l, one]));
    }
}
