//! Exact integer polynomial arithmetic: resultants, discriminants and
//! Sturm-chain signatures.
//!
//! Everything here is exact. Discriminants drive the index-prime check of
//! the coefficient sieve and Sturm chains decide signatures, so sign
//! decisions must never pass through floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomial is not squarefree (discriminant is zero)")]
    NotSquarefree,
    #[error("operation requires degree >= {required}, got {actual}")]
    DegreeTooSmall { required: usize, actual: usize },
}

/// Univariate polynomial with exact integer coefficients, constant term
/// first. Trailing zero coefficients are stripped; the zero polynomial is
/// the empty vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    /// Convenience constructor from small integers, constant term first.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().map_or(false, One::is_one)
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// Exact determinant by fraction-free Gaussian elimination (Bareiss).
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let pivot = (k + 1..n).find(|&i| !m[i][k].is_zero());
            match pivot {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev; // exact by Bareiss
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Resultant of two nonzero polynomials via the Sylvester determinant.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    assert!(!f.is_zero() && !g.is_zero(), "resultant of zero polynomial");
    let m = f.degree();
    let n = g.degree();
    if m == 0 {
        return f.coeffs[0].pow(n as u32);
    }
    if n == 0 {
        return g.coeffs[0].pow(m as u32);
    }
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    // n shifted copies of f, highest coefficient first
    for row in 0..n {
        for (idx, c) in f.coeffs.iter().rev().enumerate() {
            mat[row][row + idx] = c.clone();
        }
    }
    for row in 0..m {
        for (idx, c) in g.coeffs.iter().rev().enumerate() {
            mat[n + row][row + idx] = c.clone();
        }
    }
    bareiss_det(mat)
}

/// Discriminant of a monic polynomial of degree >= 2, computed exactly as
/// (-1)^(n(n-1)/2) Res(f, f').
pub fn poly_discriminant(f: &IntPoly) -> BigInt {
    assert!(f.is_monic(), "discriminant requires a monic polynomial");
    let n = f.degree();
    assert!(n >= 2, "discriminant requires degree >= 2, got {n}");
    let res = resultant(f, &f.derivative());
    if (n * (n - 1) / 2) % 2 == 0 {
        res
    } else {
        -res
    }
}

type RatPoly = Vec<BigRational>;

fn rat_degree(p: &RatPoly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn rat_rem(mut num: RatPoly, den: &RatPoly) -> RatPoly {
    let dd = rat_degree(den).expect("division by zero polynomial");
    let lead = den[dd].clone();
    while let Some(nd) = rat_degree(&num) {
        if nd < dd {
            break;
        }
        let factor = &num[nd] / &lead;
        for i in 0..=dd {
            let t = &den[i] * &factor;
            num[nd - dd + i] -= t;
        }
        num[nd] = BigRational::zero(); // clear rounding residue exactly
    }
    num
}

fn sign_at_plus_inf(p: &RatPoly) -> i8 {
    match rat_degree(p) {
        Some(d) => {
            if p[d].is_positive() {
                1
            } else {
                -1
            }
        }
        None => 0,
    }
}

fn sign_at_minus_inf(p: &RatPoly) -> i8 {
    match rat_degree(p) {
        Some(d) => {
            let s = if p[d].is_positive() { 1 } else { -1 };
            if d % 2 == 0 {
                s
            } else {
                -s
            }
        }
        None => 0,
    }
}

fn variations(signs: &[i8]) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for &s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Signature (r1, r2) of a squarefree polynomial: r1 real roots counted by
/// an exact Sturm sign-variation count, r2 = (deg - r1)/2.
pub fn signature_of(f: &IntPoly) -> Result<(u32, u32), PolyError> {
    let n = f.degree();
    if n == 0 {
        return Err(PolyError::DegreeTooSmall { required: 1, actual: 0 });
    }
    if n >= 2 && poly_discriminant_general(f).is_zero() {
        return Err(PolyError::NotSquarefree);
    }
    let to_rat = |p: &IntPoly| -> RatPoly {
        p.coeffs().iter().map(|c| BigRational::from(c.clone())).collect()
    };
    let mut chain: Vec<RatPoly> = vec![to_rat(f), to_rat(&f.derivative())];
    loop {
        let k = chain.len();
        if rat_degree(&chain[k - 1]).is_none() {
            chain.pop();
            break;
        }
        let rem = rat_rem(chain[k - 2].clone(), &chain[k - 1]);
        if rat_degree(&rem).is_none() {
            break;
        }
        chain.push(rem.into_iter().map(|c| -c).collect());
    }
    let neg: Vec<i8> = chain.iter().map(|p| sign_at_minus_inf(p)).collect();
    let pos: Vec<i8> = chain.iter().map(|p| sign_at_plus_inf(p)).collect();
    let r1 = variations(&neg) as i64 - variations(&pos) as i64;
    debug_assert!(r1 >= 0 && (n as i64 - r1) % 2 == 0);
    let r1 = r1 as u32;
    Ok((r1, (n as u32 - r1) / 2))
}

/// Discriminant for a general (not necessarily monic) polynomial, used
/// only for the squarefree test. deg >= 2 required by callers.
fn poly_discriminant_general(f: &IntPoly) -> BigInt {
    let res = resultant(f, &f.derivative());
    // disc = (-1)^(n(n-1)/2) Res(f,f') / lc(f); zero-ness is all we need,
    // and division by the leading coefficient never changes it.
    res
}
