//! Certified complex root moduli and the Perron / bi-Perron predicates.
//!
//! Roots are found with Aberth iteration in doubles, polished by Newton
//! steps on Gaussian integers at scale 2^bits and enclosed in inclusion
//! disks of radius `d·|W_i|` (Weierstrass corrections). When every disk is
//! disjoint from the others each holds exactly one root. A disk that keeps
//! straddling the relevant circle is settled by an exact gcd test over Q(λ).

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Zero};

use super::algebraic::{dyadic_width, AlgebraicReal};
use super::error::ExactError;
use super::field::{FieldPoly, FieldScalar, NumberField};
use super::poly::{bigint_to_f64, IntPolynomial};

const PRECISION_STEPS: [u32; 3] = [60, 120, 240];

fn aberth(p: &IntPolynomial) -> Vec<Complex64> {
    let d = p.degree().unwrap_or(0);
    let c: Vec<f64> = p.coeffs().iter().map(bigint_to_f64).collect();
    let lc = c[d];
    let radius = 1.0 + c[..d].iter().map(|x| (x / lc).abs()).fold(0.0, f64::max);
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for &a in c.iter().rev() {
            dv = dv * z + v;
            v = v * z + a;
        }
        (v, dv)
    };
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius * 0.9, 0.4 + std::f64::consts::TAU * k as f64 / d as f64))
        .collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for k in 0..d {
            let (v, dv) = eval(z[k]);
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let w = v / dv;
            let s: Complex64 = (0..d).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let step = w / (1.0 - w * s);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Root approximations as Gaussian integers over a common `2^bits` scale,
/// which keeps the refinement free of rational normalization.
struct Approximations {
    z: Vec<Complex<BigInt>>,
    bits: u32,
}

impl Approximations {
    fn from_doubles(z: &[Complex64], bits: u32) -> Self {
        let scale = (bits as f64).exp2();
        let f = |x: f64| BigInt::from_f64((x * scale).round()).unwrap_or_else(BigInt::zero);
        Approximations { z: z.iter().map(|w| Complex::new(f(w.re), f(w.im))).collect(), bits }
    }

    fn rescale(&mut self, bits: u32) {
        if bits > self.bits {
            let k = bits - self.bits;
            for w in &mut self.z {
                w.re <<= k;
                w.im <<= k;
            }
            self.bits = bits;
        }
    }
}

/// `2^{bits·deg p} p(Z/2^bits)`.
fn eval_scaled(p: &IntPolynomial, z: &Complex<BigInt>, bits: u32) -> Complex<BigInt> {
    let d = p.coeffs().len().saturating_sub(1);
    let mut v = Complex::new(BigInt::zero(), BigInt::zero());
    for (k, a) in p.coeffs().iter().enumerate().rev() {
        v = &v * z + Complex::new(a << (bits as usize * (d - k)), BigInt::zero());
    }
    v
}

fn norm_sqr_int(z: &Complex<BigInt>) -> BigInt {
    &z.re * &z.re + &z.im * &z.im
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if r.is_zero() { q } else { q + 1 }
}

type Enclosure = (BigRational, BigRational);

/// Modulus enclosures of every root of `p` except the one at `a`, plus the
/// enclosure of `a` used. `None` when the disks are not yet separated.
fn conjugate_moduli(
    p: &IntPolynomial,
    a: &AlgebraicReal,
    approx: &mut Approximations,
    bits: u32,
) -> Option<(Vec<Enclosure>, BigRational, BigRational)> {
    approx.rescale(bits);
    let d = approx.z.len();
    let dp = p.derivative();
    for z in approx.z.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = (eval_scaled(p, z, bits), eval_scaled(&dp, z, bits));
            let den = norm_sqr_int(&dv);
            if v.is_zero() || den.is_zero() {
                break;
            }
            // Newton step scaled by 2^bits: V·conj(DV)/|DV|².
            let num = &v * Complex::new(dv.re.clone(), -&dv.im);
            *z = Complex::new(&z.re - num.re / &den, &z.im - num.im / &den);
        }
    }
    // Radii as upper bounds on r·2^fine.
    let fine = bits + 64;
    let lc2 = p.leading() * p.leading();
    let d2 = BigInt::from(d * d);
    let mut radius: Vec<BigInt> = Vec::with_capacity(d);
    for i in 0..d {
        let v = eval_scaled(p, &approx.z[i], bits);
        let mut den = lc2.clone();
        for j in 0..d {
            if j != i {
                den *= norm_sqr_int(&(&approx.z[i] - &approx.z[j]));
            }
        }
        if den.is_zero() {
            return None;
        }
        // r² = d²|V|² / (lc² Π|Zi-Zj|² 2^{2 bits}).
        let num = (&d2 * norm_sqr_int(&v)) << (2 * (fine - bits) as usize);
        radius.push(ceil_div(&num, &den).sqrt() + 1);
    }
    let up = |x: &BigInt| x << (fine - bits) as usize;
    for i in 0..d {
        for j in i + 1..d {
            let r = &radius[i] + &radius[j];
            let gap = &approx.z[i] - &approx.z[j];
            if norm_sqr_int(&Complex::new(up(&gap.re), up(&gap.im))) <= &r * &r {
                return None;
            }
        }
    }
    let a = a.refine(&dyadic_width(bits + 8));
    let (alo, ahi) = (a.lo().clone(), a.hi().clone());
    let scale = BigRational::from_integer(BigInt::one() << fine as usize);
    let (ilo, ihi) = ((&alo * &scale).floor().to_integer(), (&ahi * &scale).ceil().to_integer());
    let own: Vec<usize> = (0..d)
        .filter(|&i| {
            let (re, im) = (up(&approx.z[i].re), up(&approx.z[i].im));
            let clamped = re.clone().max(ilo.clone()).min(ihi.clone());
            let dx = &re - clamped;
            &dx * &dx + &im * &im <= &radius[i] * &radius[i]
        })
        .collect();
    if own.len() != 1 {
        return None;
    }
    let denom = BigInt::one() << fine as usize;
    let mods = (0..d)
        .filter(|&i| i != own[0])
        .map(|i| {
            let m2 = norm_sqr_int(&approx.z[i]) << (2 * (fine - bits) as usize);
            let s = m2.sqrt();
            let hi = if &s * &s == m2 { s.clone() } else { &s + 1 };
            let lo: BigInt = (&s - &radius[i]).max(BigInt::zero());
            (BigRational::new(lo, denom.clone()), BigRational::new(hi + &radius[i], denom.clone()))
        })
        .collect();
    Some((mods, alo, ahi))
}

/// Whether some root `z` of `p` pairs with a root `z'` as `z·z' = r2`,
/// decided by a gcd over Q(a). `skip_self` discounts the pair `(a, a)`.
fn shares_circle_root(p: &IntPolynomial, a: &AlgebraicReal, r2: impl Fn(&FieldScalar) -> FieldScalar, skip_self: bool) -> bool {
    let k = NumberField::new(a.clone());
    let lambda = FieldScalar::generator(&k);
    let rho2 = r2(&lambda);
    let d = p.degree().unwrap_or(0);
    let base = FieldPoly::from_rational(&k, &p.to_rational());
    // x^d p(rho2 / x) = Σ c_k rho2^k x^(d-k)
    let mut q = vec![FieldScalar::zero(&k); d + 1];
    let mut pw = FieldScalar::one(&k);
    for (i, c) in p.coeffs().iter().enumerate() {
        q[d - i] = &FieldScalar::from_bigint(&k, c.clone()) * &pw;
        pw = &pw * &rho2;
    }
    let g = base.gcd(&FieldPoly::new(q));
    let need = if skip_self { 2 } else { 1 };
    g.degree().is_some_and(|e| e >= need)
}

fn check_input(a: &AlgebraicReal) -> Result<bool, ExactError> {
    if a.sturm_count() != 1 {
        return Err(ExactError::NotARoot);
    }
    Ok(a.cmp_rational(&BigRational::zero()).is_gt() && a.minpoly().leading().is_one())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Pass,
    Fail,
    Ambiguous,
}

fn decide(
    a: &AlgebraicReal,
    classify: impl Fn(&(BigRational, BigRational), &BigRational, &BigRational) -> Verdict,
    boundary: impl Fn() -> bool,
    boundary_passes: bool,
) -> Result<bool, ExactError> {
    let p = a.minpoly();
    let mut approx = Approximations::from_doubles(&aberth(p), PRECISION_STEPS[0]);
    let mut last = Verdict::Ambiguous;
    for bits in PRECISION_STEPS {
        let Some((mods, alo, ahi)) = conjugate_moduli(p, a, &mut approx, bits) else {
            continue;
        };
        let verdicts: Vec<Verdict> = mods.iter().map(|m| classify(m, &alo, &ahi)).collect();
        if verdicts.contains(&Verdict::Fail) {
            return Ok(false);
        }
        if verdicts.iter().all(|v| *v == Verdict::Pass) {
            return Ok(true);
        }
        last = Verdict::Ambiguous;
    }
    if last == Verdict::Ambiguous && boundary() {
        return Ok(boundary_passes);
    }
    Err(ExactError::Undecided { radius: a.decimal(12) })
}

/// Positive algebraic integer strictly larger in modulus than every other
/// root of its minimal polynomial.
pub fn is_perron(a: &AlgebraicReal) -> Result<bool, ExactError> {
    if !check_input(a)? {
        return Ok(false);
    }
    if a.degree() == 1 {
        return Ok(true);
    }
    let p = a.minpoly();
    decide(
        a,
        |(lo, hi), alo, ahi| {
            if hi < alo {
                Verdict::Pass
            } else if lo > ahi {
                Verdict::Fail
            } else {
                Verdict::Ambiguous
            }
        },
        || shares_circle_root(p, a, |l| l * l, true),
        false,
    )
}

/// Perron, with every other conjugate in the closed annulus
/// `1/a ≤ |z| ≤ a`.
pub fn is_bi_perron(a: &AlgebraicReal) -> Result<bool, ExactError> {
    if !is_perron(a)? {
        return Ok(false);
    }
    if a.degree() == 1 {
        return Ok(true);
    }
    let p = a.minpoly();
    // Roots closed under z -> 1/z or z -> -1/z: the inner bound mirrors the
    // outer one.
    let rev = p.reversed();
    if rev == *p || rev == -p || rev.negate_variable() == *p || rev.negate_variable() == -p {
        return Ok(true);
    }
    decide(
        a,
        |(lo, hi), alo, ahi| {
            let inner_lo = BigRational::one() / ahi;
            let inner_hi = BigRational::one() / alo;
            if *lo > inner_hi {
                Verdict::Pass
            } else if *hi < inner_lo {
                Verdict::Fail
            } else {
                Verdict::Ambiguous
            }
        },
        || shares_circle_root(p, a, |l| (l * l).inverse(), false),
        true,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::algebraic::perron_root;

    fn root(c: &[i64]) -> AlgebraicReal {
        perron_root(&IntPolynomial::from_i64s(c)).unwrap()
    }

    #[test]
    fn golden_is_bi_perron_on_the_boundary() {
        let g = root(&[-1, -1, 1]);
        assert!(is_perron(&g).unwrap());
        assert!(is_bi_perron(&g).unwrap());
    }

    #[test]
    fn cubic_with_small_conjugate() {
        let a = root(&[1, 8, -6, 1]);
        assert!(is_perron(&a).unwrap());
        assert!(!is_bi_perron(&a).unwrap());
    }

    #[test]
    fn integers() {
        let two = root(&[-2, 1]);
        assert!(is_perron(&two).unwrap());
        assert!(is_bi_perron(&two).unwrap());
    }

    #[test]
    fn sqrt_two_is_not_perron() {
        // -√2 has the same modulus.
        let a = root(&[-2, 0, 1]);
        assert!(!is_perron(&a).unwrap());
    }

    #[test]
    fn complex_conjugates_on_the_circle() {
        // x^4 - 2: roots ±2^(1/4), ±i·2^(1/4).
        let a = root(&[-2, 0, 0, 0, 1]);
        assert!(!is_perron(&a).unwrap());
        // x^4 - x^3 - 2x^2 - x + 1: reciprocal, λ ≈ 2.081 and a unit circle pair.
        let b = root(&[1, -1, -2, -1, 1]);
        assert!(is_perron(&b).unwrap());
        assert!(is_bi_perron(&b).unwrap());
    }

    #[test]
    fn non_integer_and_non_positive_rejected() {
        // 2x - 3 has root 3/2, not an algebraic integer.
        assert!(!is_perron(&root(&[-3, 2])).unwrap());
        let neg = AlgebraicReal::from_integer(-1);
        assert!(!is_perron(&neg).unwrap());
    }

    #[test]
    fn lehmer_number() {
        // Salem: conjugates on the unit circle and one at 1/λ.
        let a = root(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        assert!((a.to_f64() - 1.17628081826).abs() < 1e-10);
        assert!(is_perron(&a).unwrap());
        assert!(is_bi_perron(&a).unwrap());
    }
}
