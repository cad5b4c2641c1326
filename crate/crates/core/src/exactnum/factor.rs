//! Factorization of integer polynomials into irreducibles over the rationals.
//!
//! Squarefree decomposition (Yun), then for each squarefree part: Berlekamp
//! factorization modulo a small prime, linear Hensel lifting to a modulus
//! beyond the Mignotte bound, and Zassenhaus subset recombination. Desk-scale
//! degrees only; the recombination step is exponential in the number of
//! modular factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::poly::IntPolynomial;

/// Irreducible factorization: factors are primitive with positive leading
/// coefficient, sorted by degree then coefficients. The product of the factors
/// (with multiplicity) equals `p` up to sign and content.
pub fn factor(p: &IntPolynomial) -> Vec<(IntPolynomial, usize)> {
    assert!(!p.is_zero(), "cannot factor the zero polynomial");
    if p.degree() == Some(0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(&p.primitive_part()) {
        for f in factor_squarefree(&part) {
            out.push((f, mult));
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    out
}

/// Yun's algorithm on a primitive polynomial. Returns nonconstant squarefree,
/// pairwise coprime parts with their multiplicities.
pub fn squarefree_decomposition(f: &IntPolynomial) -> Vec<(IntPolynomial, usize)> {
    let f = f.to_rational();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).0;
    let c = df.div_rem(&a0).0;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    let mut out = Vec::new();
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        b = b.div_rem(&a).0;
        let c = d.div_rem(&a).0;
        d = &c - &b.derivative();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.primitive_integer(), i));
        }
        i += 1;
    }
    out
}

fn factor_squarefree(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let deg = f.degree().unwrap_or(0);
    if deg <= 1 {
        return vec![f.primitive_part()];
    }
    let Some((p, modular)) = choose_prime(f) else {
        // No usable prime among the candidates; cannot happen for squarefree
        // input of desk-scale size.
        return vec![f.primitive_part()];
    };
    if modular.len() == 1 {
        return vec![f.primitive_part()];
    }
    let lc = f.leading().abs();
    let bound = mignotte_bound(f) * &lc * BigInt::from(2);
    let mut modulus = BigInt::from(p);
    let mut k = 1u32;
    while modulus <= bound {
        modulus *= p;
        k += 1;
    }
    let lifted = hensel_lift(f, &modular, p, k);
    recombine(f, lifted, &modulus)
}

/// Picks, among the first few admissible primes, the one giving the fewest
/// modular factors. Returns the prime and the monic modular factors.
fn choose_prime(f: &IntPolynomial) -> Option<(u64, Vec<ModPoly>)> {
    let mut best: Option<(u64, Vec<ModPoly>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        let lc = reduce_bigint(&f.leading(), p);
        if lc == 0 {
            continue;
        }
        let fp = ModPoly::from_int(f, p);
        if fp.degree() != f.degree() {
            continue;
        }
        if fp.gcd(&fp.derivative()).degree() != Some(0) {
            continue;
        }
        let factors = berlekamp(&fp.monic());
        let better = best
            .as_ref()
            .is_none_or(|(_, b)| factors.len() < b.len());
        if better {
            best = Some((p, factors));
        }
        tried += 1;
        if tried >= 5 || best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    best
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..2000).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

fn mignotte_bound(f: &IntPolynomial) -> BigInt {
    // 2^d · ||f||_2, with the 2-norm rounded up to an integer.
    let d = f.degree().unwrap_or(0);
    let sq: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let norm = sq.sqrt() + BigInt::one();
    norm << d
}

fn reduce_bigint(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().expect("reduced value fits")
}

/// Lifts `f ≡ lc(f) · ∏ g_i (mod p)` to modulus `p^k`, returning monic
/// lifted factors with coefficients in `[0, p^k)`.
fn hensel_lift(f: &IntPolynomial, factors: &[ModPoly], p: u64, k: u32) -> Vec<IntPolynomial> {
    let mut out = Vec::with_capacity(factors.len());
    let mut rest = f.clone();
    for (idx, g) in factors.iter().enumerate() {
        if idx + 1 == factors.len() {
            // Remaining cofactor, made monic modulo p^k.
            let m = BigInt::from(p).pow(k);
            out.push(make_monic_mod(&rest, &m));
            break;
        }
        let h = factors[idx + 1..]
            .iter()
            .fold(ModPoly::constant(reduce_bigint(&rest.leading(), p), p), |acc, x| acc.mul(x));
        let (lg, lh) = lift_pair(&rest, g, &h, p, k);
        out.push(lg);
        rest = lh;
    }
    out
}

/// Two-factor linear Hensel lifting: `f ≡ g·h (mod p)` with `g` monic.
fn lift_pair(
    f: &IntPolynomial,
    g: &ModPoly,
    h: &ModPoly,
    p: u64,
    k: u32,
) -> (IntPolynomial, IntPolynomial) {
    let (one, s, t) = g.ext_gcd(h);
    debug_assert_eq!(one.degree(), Some(0));
    let mut gz = g.to_int();
    let mut hz = h.to_int();
    let mut pj = BigInt::from(p);
    for _ in 1..k {
        let diff = f - &(&gz * &hz);
        let e_int = IntPolynomial::new(diff.coeffs().iter().map(|c| c / &pj).collect());
        let e = ModPoly::from_int(&e_int, p);
        let et = e.mul(&t);
        let (q, dg) = et.div_rem(g);
        let dh = e.mul(&s).add(&q.mul(h));
        gz = &gz + &dg.to_int().scale(&pj);
        hz = &hz + &dh.to_int().scale(&pj);
        pj *= p;
        gz = reduce_poly(&gz, &pj);
        hz = reduce_poly(&hz, &pj);
    }
    (gz, hz)
}

fn reduce_poly(f: &IntPolynomial, m: &BigInt) -> IntPolynomial {
    IntPolynomial::new(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

fn make_monic_mod(f: &IntPolynomial, m: &BigInt) -> IntPolynomial {
    let lc = f.leading().mod_floor(m);
    let inv = mod_inverse(&lc, m).expect("leading coefficient invertible modulo p^k");
    IntPolynomial::new(f.coeffs().iter().map(|c| (c * &inv).mod_floor(m)).collect())
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

fn symmetric(f: &IntPolynomial, m: &BigInt) -> IntPolynomial {
    let half = m / BigInt::from(2);
    IntPolynomial::new(
        f.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn recombine(f: &IntPolynomial, mut lifted: Vec<IntPolynomial>, m: &BigInt) -> Vec<IntPolynomial> {
    let mut result = Vec::new();
    let mut rest = f.primitive_part();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in Subsets::new(lifted.len(), size) {
            let lc = rest.leading();
            let prod = subset
                .iter()
                .fold(IntPolynomial::constant(lc.clone()), |acc, &i| {
                    reduce_poly(&(&acc * &lifted[i]), m)
                });
            let cand = symmetric(&prod, m).primitive_part();
            if let Some(q) = rest.div_exact(&cand) {
                result.push(cand);
                rest = q.primitive_part();
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        result.push(rest);
    }
    result
}

/// Lexicographic k-subsets of `0..n`.
struct Subsets {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Subsets {
    fn new(n: usize, k: usize) -> Self {
        Subsets { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let cur = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(cur)
    }
}

/// Polynomial over the prime field `F_p`, constant term first, trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
struct ModPoly {
    c: Vec<u64>,
    p: u64,
}

impl ModPoly {
    fn new(mut c: Vec<u64>, p: u64) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        ModPoly { c, p }
    }

    fn constant(v: u64, p: u64) -> Self {
        Self::new(vec![v % p], p)
    }

    fn from_int(f: &IntPolynomial, p: u64) -> Self {
        Self::new(f.coeffs().iter().map(|c| reduce_bigint(c, p)).collect(), p)
    }

    fn to_int(&self) -> IntPolynomial {
        IntPolynomial::new(self.c.iter().map(|&v| BigInt::from(v)).collect())
    }

    fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn lc(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.inv(self.lc());
        Self::new(self.c.iter().map(|&v| v * inv % self.p).collect(), self.p)
    }

    fn add(&self, o: &ModPoly) -> ModPoly {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| (self.c.get(i).unwrap_or(&0) + o.c.get(i).unwrap_or(&0)) % self.p)
            .collect();
        ModPoly::new(v, self.p)
    }

    fn sub(&self, o: &ModPoly) -> ModPoly {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| (self.c.get(i).unwrap_or(&0) + self.p - o.c.get(i).unwrap_or(&0)) % self.p)
            .collect();
        ModPoly::new(v, self.p)
    }

    fn mul(&self, o: &ModPoly) -> ModPoly {
        if self.is_zero() || o.is_zero() {
            return ModPoly::new(Vec::new(), self.p);
        }
        let mut v = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                v[i + j] = (v[i + j] + a * b) % self.p;
            }
        }
        ModPoly::new(v, self.p)
    }

    fn derivative(&self) -> ModPoly {
        let v = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| (i as u64 % self.p) * a % self.p)
            .collect();
        ModPoly::new(v, self.p)
    }

    fn div_rem(&self, d: &ModPoly) -> (ModPoly, ModPoly) {
        let p = self.p;
        let dd = d.c.len() - 1;
        let inv = self.inv(d.lc());
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (ModPoly::new(Vec::new(), p), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = r[k + dd] * inv % p;
            if coef != 0 {
                for (j, &dc) in d.c.iter().enumerate() {
                    r[k + j] = (r[k + j] + p - coef * dc % p) % p;
                }
            }
            q[k] = coef;
        }
        r.truncate(dd);
        (ModPoly::new(q, p), ModPoly::new(r, p))
    }

    fn rem(&self, d: &ModPoly) -> ModPoly {
        self.div_rem(d).1
    }

    fn gcd(&self, o: &ModPoly) -> ModPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·o = g`, `g` monic.
    fn ext_gcd(&self, o: &ModPoly) -> (ModPoly, ModPoly, ModPoly) {
        let p = self.p;
        let zero = ModPoly::new(Vec::new(), p);
        let one = ModPoly::constant(1, p);
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let inv = ModPoly::constant(self.inv(r0.lc()), p);
        (r0.mul(&inv), s0.mul(&inv), t0.mul(&inv))
    }

    fn pow_mod(&self, mut e: u64, m: &ModPoly) -> ModPoly {
        let mut base = self.rem(m);
        let mut acc = ModPoly::constant(1, self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Berlekamp's algorithm for a monic squarefree polynomial over `F_p`.
fn berlekamp(f: &ModPoly) -> Vec<ModPoly> {
    let p = f.p;
    let d = f.degree().unwrap_or(0);
    if d <= 1 {
        return vec![f.clone()];
    }
    // Row i holds x^{ip} mod f.
    let xp = ModPoly::new(vec![0, 1], p).pow_mod(p, f);
    let mut rows = Vec::with_capacity(d);
    let mut cur = ModPoly::constant(1, p);
    for _ in 0..d {
        let mut row: Vec<u64> = cur.c.clone();
        row.resize(d, 0);
        rows.push(row);
        cur = cur.mul(&xp).rem(f);
    }
    // Solve v · (Q - I) = 0, i.e. (Q - I)^T v = 0.
    let mut a = vec![vec![0u64; d]; d];
    for i in 0..d {
        for j in 0..d {
            let q = rows[j][i];
            a[i][j] = if i == j { (q + p - 1) % p } else { q };
        }
    }
    let basis = nullspace_mod(a, p);
    let r = basis.len();
    let mut factors = vec![f.clone()];
    for v in basis.iter() {
        if factors.len() == r {
            break;
        }
        let vp = ModPoly::new(v.clone(), p);
        if vp.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut next = Vec::new();
        for g in factors.drain(..) {
            let mut pending = vec![g];
            let mut done = Vec::new();
            for s in 0..p {
                if pending.is_empty() {
                    break;
                }
                let shifted = vp.sub(&ModPoly::constant(s, p));
                let mut keep = Vec::new();
                for g in pending.drain(..) {
                    if g.degree() == Some(1) {
                        done.push(g);
                        continue;
                    }
                    let h = g.gcd(&shifted);
                    let hd = h.degree().unwrap_or(0);
                    if hd > 0 && Some(hd) < g.degree() {
                        let q = g.div_rem(&h).0.monic();
                        keep.push(h);
                        keep.push(q);
                    } else {
                        keep.push(g);
                    }
                }
                pending = keep;
            }
            done.extend(pending);
            next.extend(done);
        }
        factors = next;
    }
    factors.sort_by(|a, b| a.c.len().cmp(&b.c.len()).then_with(|| a.c.iter().rev().cmp(b.c.iter().rev())));
    factors
}

/// Basis of the right nullspace of `a` over `F_p`.
fn nullspace_mod(mut a: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = pow_mod(a[r][c], p - 2, p);
        for v in a[r].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] + p - f * a[r][j] % p) % p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; cols];
            v[fc] = 1;
            for (ri, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = (p - a[ri][fc]) % p;
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn product(fs: &[(IntPolynomial, usize)]) -> IntPolynomial {
        fs.iter()
            .fold(IntPolynomial::one(), |acc, (f, m)| &acc * &f.pow(*m))
    }

    #[test]
    fn figure_one_characteristic_polynomial_splits_into_quadratic_and_quartic() {
        let chi = poly(&[1, -2, 0, 0, 0, -2, 1]);
        let fs = factor(&chi);
        assert_eq!(
            fs,
            vec![(poly(&[1, -1, 1]), 1), (poly(&[1, -1, -2, -1, 1]), 1)]
        );
    }

    #[test]
    fn golden_is_irreducible() {
        assert_eq!(factor(&poly(&[-1, -1, 1])), vec![(poly(&[-1, -1, 1]), 1)]);
    }

    #[test]
    fn repeated_linear_factor() {
        assert_eq!(factor(&poly(&[1, -2, 1])), vec![(poly(&[-1, 1]), 2)]);
        let cube = poly(&[-1, 1]).pow(3);
        assert_eq!(factor(&cube), vec![(poly(&[-1, 1]), 3)]);
    }

    #[test]
    fn swinnerton_dyer_style_polynomial_stays_irreducible() {
        // x^4 - 10x^2 + 1 splits modulo every prime but is irreducible over Q.
        let f = poly(&[1, 0, -10, 0, 1]);
        assert_eq!(factor(&f), vec![(f.clone(), 1)]);
    }

    #[test]
    fn mixed_multiplicities_and_content() {
        let a = poly(&[1, 1]);
        let b = poly(&[-2, 0, 1]);
        let c = poly(&[1, 1, 0, 1]);
        let f = (&(&a.pow(2) * &b) * &c).scale(&BigInt::from(-6));
        let fs = factor(&f);
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs), f.primitive_part());
        assert!(fs.contains(&(a, 2)));
    }

    #[test]
    fn non_monic_factors() {
        let a = poly(&[1, 3]);
        let b = poly(&[-5, 0, 2]);
        let f = &a * &b;
        let fs = factor(&f);
        assert_eq!(fs, vec![(a, 1), (b, 1)]);
    }
}
