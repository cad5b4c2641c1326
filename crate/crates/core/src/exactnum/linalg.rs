//! Integer matrix determinants, characteristic polynomials and Perron
//! eigenvectors over Q(λ).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::error::ExactError;
use super::factor::factor;
use super::field::{Field, FieldScalar};
use super::poly::IntPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Solves `Mᵀw = λw`.
    Left,
    /// Solves `Mv = λv`.
    Right,
}

fn check_square(m: &[Vec<i64>]) -> Result<usize, ExactError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(ExactError::NotSquare);
    }
    Ok(n)
}

fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> Result<BigInt, ExactError> {
    let n = check_square(m)?;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = to_big(m);
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign < 0 { -d } else { d })
}

/// Monic `det(xI − M)` by Faddeev–LeVerrier.
pub fn char_poly(m: &[Vec<i64>]) -> Result<IntPolynomial, ExactError> {
    let n = check_square(m)?;
    let a = to_big(m);
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut mk = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(&a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        mk = next;
        let am = mat_mul(&a, &mk);
        let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        c[n - k] = -tr / BigInt::from(k);
    }
    Ok(IntPolynomial::new(c))
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// Kernel basis of a matrix over Q(λ) by Gauss–Jordan elimination.
pub fn kernel(mut a: Vec<Vec<FieldScalar>>, cols: usize) -> Vec<Vec<FieldScalar>> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inverse();
        for j in c..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = &f * &a[r][j];
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let Some(field) = a.first().and_then(|row| row.first()).map(|x| x.field().clone()) else {
        return Vec::new();
    };
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![FieldScalar::zero(&field); cols];
            v[f] = FieldScalar::one(&field);
            for (pr, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[pr][f];
            }
            v
        })
        .collect()
}

/// The eigenvector for the generator λ of `field`, normalized to sum 1
/// and certified positive.
pub fn eigenvector(m: &[Vec<i64>], field: &Field, side: Side) -> Result<Vec<FieldScalar>, ExactError> {
    let n = check_square(m)?;
    let lambda = FieldScalar::generator(field);
    let multiplicity = factor(&char_poly(m)?)
        .into_iter()
        .find(|(f, _)| f == field.generator().minpoly())
        .map_or(0, |(_, k)| k);
    let a: Vec<Vec<FieldScalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = match side {
                        Side::Right => m[i][j],
                        Side::Left => m[j][i],
                    };
                    let x = FieldScalar::from_int(field, e);
                    if i == j {
                        &x - &lambda
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();
    let ker = kernel(a, n);
    if ker.len() != 1 || multiplicity != 1 {
        return Err(ExactError::NotSimpleEigenvalue { kernel_dim: ker.len(), multiplicity });
    }
    let v = ker.into_iter().next().unwrap();
    let total = v.iter().fold(FieldScalar::zero(field), |acc, x| &acc + x);
    if total.is_zero() {
        return Err(ExactError::NonPositiveEigenvector { index: 0 });
    }
    let inv = total.inverse();
    let v: Vec<FieldScalar> = v.iter().map(|x| x * &inv).collect();
    if let Some(index) = v.iter().position(|x| !x.is_positive()) {
        return Err(ExactError::NonPositiveEigenvector { index });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::algebraic::perron_root_of_matrix;
    use crate::exactnum::field::NumberField;

    fn fig1() -> Vec<Vec<i64>> {
        vec![
            vec![0, 0, 0, 0, 0, 1],
            vec![1, 1, 0, 0, 0, 1],
            vec![0, 1, 0, 0, 0, 1],
            vec![0, 0, 1, 0, 0, 1],
            vec![0, 0, 1, 0, 1, 0],
            vec![0, 0, 0, 1, 1, 0],
        ]
    }

    #[test]
    fn char_polys() {
        assert_eq!(char_poly(&fig1()).unwrap(), IntPolynomial::from_i64s(&[1, -2, 0, 0, 0, -2, 1]));
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(char_poly(&id).unwrap(), IntPolynomial::from_i64s(&[-1, 1]).pow(3));
        assert_eq!(char_poly(&[vec![0, 1], vec![1, 1]]).unwrap(), IntPolynomial::from_i64s(&[-1, -1, 1]));
        assert_eq!(char_poly(&[vec![1, 2]]), Err(ExactError::NotSquare));
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&fig1()).unwrap(), BigInt::from(1));
        assert_eq!(determinant(&[vec![0, 1], vec![1, 1]]).unwrap(), BigInt::from(-1));
        assert_eq!(determinant(&[vec![1, 1], vec![1, 1]]).unwrap(), BigInt::from(0));
        let m = vec![vec![2, -1, 3], vec![0, 4, 5], vec![1, 0, -2]];
        // 2(-8) + 1(0 - 5) + 3(0 - 4) = -33
        assert_eq!(determinant(&m).unwrap(), BigInt::from(-33));
    }

    #[test]
    fn golden_left_eigenvector() {
        let m = vec![vec![0, 1], vec![1, 1]];
        let k = NumberField::new(perron_root_of_matrix(&m).unwrap());
        let l = FieldScalar::generator(&k);
        let w = eigenvector(&m, &k, Side::Left).unwrap();
        assert_eq!(w[0], &FieldScalar::from_int(&k, 2) - &l);
        assert_eq!(w[1], &l - &FieldScalar::one(&k));
    }

    #[test]
    fn silver_eigenvectors_agree() {
        let m = vec![vec![1, 1, 0], vec![1, 1, 1], vec![0, 1, 1]];
        let k = NumberField::new(perron_root_of_matrix(&m).unwrap());
        let l = FieldScalar::generator(&k);
        let one = FieldScalar::one(&k);
        let raw = [one.clone(), &l - &one, one.clone()];
        let s = raw.iter().fold(FieldScalar::zero(&k), |a, x| &a + x);
        let expect: Vec<FieldScalar> = raw.iter().map(|x| x / &s).collect();
        assert_eq!(eigenvector(&m, &k, Side::Left).unwrap(), expect);
        assert_eq!(eigenvector(&m, &k, Side::Right).unwrap(), expect);
    }

    #[test]
    fn cyclic_permutation_uniform() {
        let m = vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]];
        let k = NumberField::new(perron_root_of_matrix(&m).unwrap());
        let v = eigenvector(&m, &k, Side::Right).unwrap();
        for x in v {
            assert_eq!(x.as_rational().unwrap(), num_rational::BigRational::new(1.into(), 3.into()));
        }
    }

    #[test]
    fn repeated_eigenvalue_rejected() {
        let id = vec![vec![1, 0], vec![0, 1]];
        let k = NumberField::new(perron_root_of_matrix(&id).unwrap());
        assert_eq!(
            eigenvector(&id, &k, Side::Right),
            Err(ExactError::NotSimpleEigenvalue { kernel_dim: 2, multiplicity: 2 })
        );
    }
}
