//! Number field data: computable invariants plus the analytic class number
//! formula conversions between kappa (the zeta residue at s = 1) and the
//! product h*R.
//!
//! A field is described by what can be written down exactly: degree,
//! signature, |discriminant|, the number of roots of unity, a monic
//! defining polynomial, and optionally the class number and regulator.

use std::f64::consts::PI;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{poly_discriminant, signature_of, IntPoly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("class number and regulator are required for exact kappa")]
    MissingInvariants,
    #[error("malformed field document: {0}")]
    Malformed(String),
}

/// Residue of the Dedekind zeta function at s = 1, with the half-width of
/// its confidence interval (zero when derived from exact invariants).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kappa {
    pub value: f64,
    pub uncertainty: f64,
}

impl Kappa {
    pub fn exact(value: f64) -> Kappa {
        Kappa { value, uncertainty: 0.0 }
    }

    pub fn new(value: f64, uncertainty: f64) -> Kappa {
        assert!(value.is_finite() && value >= 0.0, "kappa must be finite and >= 0");
        assert!(uncertainty >= 0.0, "uncertainty must be >= 0");
        Kappa { value, uncertainty }
    }
}

/// A number field described by its computable invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberFieldSpec {
    pub degree: u32,
    pub r1: u32,
    pub r2: u32,
    /// |d_K|; the sign convention (-1)^r2 is implied by the signature.
    pub abs_discriminant: BigUint,
    /// w_K, number of roots of unity (2 whenever r1 >= 1).
    pub roots_of_unity: u32,
    pub poly: IntPoly,
    pub class_number: Option<u64>,
    pub regulator: Option<f64>,
}

/// Natural log of a positive big integer, accurate to a few ulps even far
/// beyond the f64 range.
pub fn ln_biguint(v: &BigUint) -> f64 {
    assert!(!v.is_zero(), "log of zero");
    let bits = v.bits();
    if bits <= 53 {
        return (v.to_u64().expect("fits") as f64).ln();
    }
    let shift = bits - 53;
    let top = (v >> shift).to_u64().expect("53 bits fit") as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// f64 value of a big integer; +inf if it does not fit.
pub fn biguint_to_f64(v: &BigUint) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

impl NumberFieldSpec {
    /// kappa = h R 2^n (pi/2)^r2 / (w sqrt(d)), Eq-exact inverse of
    /// `hr_from_kappa`. Uncertainty is zero: inputs are exact invariants.
    pub fn kappa_from_invariants(&self) -> Result<Kappa, FieldError> {
        let (h, reg) = match (self.class_number, self.regulator) {
            (Some(h), Some(r)) => (h, r),
            _ => return Err(FieldError::MissingInvariants),
        };
        let value = h as f64 * reg * 2f64.powi(self.degree as i32)
            * (PI / 2.0).powi(self.r2 as i32)
            / (self.roots_of_unity as f64 * biguint_to_f64(&self.abs_discriminant).sqrt());
        Ok(Kappa::exact(value))
    }

    /// h R = (w / 2^n) (2/pi)^r2 sqrt(d) kappa.
    pub fn hr_from_kappa(&self, kappa: &Kappa) -> f64 {
        self.roots_of_unity as f64 / 2f64.powi(self.degree as i32)
            * (2.0 / PI).powi(self.r2 as i32)
            * biguint_to_f64(&self.abs_discriminant).sqrt()
            * kappa.value
    }

    /// ln(h R) without overflow, for log-space comparisons against bounds.
    pub fn ln_hr_from_kappa(&self, kappa: &Kappa) -> f64 {
        (self.roots_of_unity as f64).ln() - self.degree as f64 * std::f64::consts::LN_2
            + self.r2 as f64 * (2.0 / PI).ln()
            + 0.5 * ln_biguint(&self.abs_discriminant)
            + kappa.value.ln()
    }
}

/// A named invariant violation; data, not a failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    SignatureDegreeMismatch,
    DegreeBelowMinimum,
    PolyDegreeMismatch,
    PolyNotMonic,
    PolyNotSquarefree,
    DiscriminantTooSmall,
    RootsOfUnityViolation,
    SignatureMismatch,
    /// |disc(f)| / d_K is not a positive perfect square, or the sign of
    /// disc(f) disagrees with (-1)^r2: the polynomial and the claimed field
    /// data describe different fields. Downstream refuses to run.
    DiscriminantMismatch,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Violation::SignatureDegreeMismatch => "signature-degree mismatch",
            Violation::DegreeBelowMinimum => "degree below minimum",
            Violation::PolyDegreeMismatch => "polynomial degree mismatch",
            Violation::PolyNotMonic => "polynomial not monic",
            Violation::PolyNotSquarefree => "polynomial not squarefree",
            Violation::DiscriminantTooSmall => "discriminant below floor",
            Violation::RootsOfUnityViolation => "roots-of-unity violation",
            Violation::SignatureMismatch => "signature mismatch",
            Violation::DiscriminantMismatch => "discriminant mismatch",
        };
        f.write_str(s)
    }
}

/// Smallest |d_K| attained by any field of the given degree, where known.
/// Values below these are impossible; degrees 4+ surface as warnings only.
fn known_minimum(degree: u32) -> Option<u64> {
    match degree {
        2 => Some(3),
        3 => Some(23),
        4 => Some(117),
        5 => Some(1609),
        6 => Some(9747),
        7 => Some(184_607),
        8 => Some(1_257_728),
        _ => None,
    }
}

/// Checks every NumberFieldSpec invariant; the empty list certifies them all.
pub fn validate_spec(spec: &NumberFieldSpec) -> Vec<Violation> {
    let mut v = Vec::new();
    let n = spec.degree;
    if n < 3 {
        v.push(Violation::DegreeBelowMinimum);
    }
    if spec.r1 + 2 * spec.r2 != n {
        v.push(Violation::SignatureDegreeMismatch);
    }
    if spec.poly.degree() as u32 != n {
        v.push(Violation::PolyDegreeMismatch);
    }
    if !spec.poly.is_monic() {
        v.push(Violation::PolyNotMonic);
    }
    let d_floor = if n == 3 { 23u64 } else { 3u64 };
    if spec.abs_discriminant < BigUint::from(d_floor) {
        v.push(Violation::DiscriminantTooSmall);
    }
    if spec.roots_of_unity < 2 || (spec.r1 >= 1 && spec.roots_of_unity != 2) {
        v.push(Violation::RootsOfUnityViolation);
    }
    if spec.poly.degree() as u32 == n && spec.poly.is_monic() && n >= 2 {
        let disc = poly_discriminant(&spec.poly);
        if disc.is_zero() {
            v.push(Violation::PolyNotSquarefree);
        } else {
            match signature_of(&spec.poly) {
                Ok(sig) if sig != (spec.r1, spec.r2) => v.push(Violation::SignatureMismatch),
                Ok(_) => {}
                Err(_) => v.push(Violation::PolyNotSquarefree),
            }
            if !discriminant_consistent(&disc, spec) {
                v.push(Violation::DiscriminantMismatch);
            }
        }
    }
    v
}

/// disc(f) = (-1)^r2 d_K q^2 for the index q: the ratio must be a positive
/// perfect square and the signs must agree.
fn discriminant_consistent(disc: &BigInt, spec: &NumberFieldSpec) -> bool {
    if spec.abs_discriminant.is_zero() {
        return false;
    }
    let expected_negative = spec.r2 % 2 == 1;
    if (disc.sign() == Sign::Minus) != expected_negative {
        return false;
    }
    let ratio = disc.magnitude() / &spec.abs_discriminant;
    if &ratio * &spec.abs_discriminant != *disc.magnitude() {
        return false;
    }
    let root = ratio.sqrt();
    &root * &root == ratio
}

/// Advisory warnings that are not invariant breaches: |d_K| below the
/// known minimum for the degree (impossible for a real field, but only the
/// n = 3 floor is an enforced invariant).
pub fn validate_warnings(spec: &NumberFieldSpec) -> Vec<String> {
    let mut w = Vec::new();
    if spec.degree >= 4 {
        if let Some(min) = known_minimum(spec.degree) {
            if spec.abs_discriminant < BigUint::from(min) {
                w.push(format!(
                    "abs_discriminant below the known degree-{} minimum {}",
                    spec.degree, min
                ));
            }
        }
    }
    w
}

/// On-disk JSON schema for a field spec. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
    pub degree: u32,
    pub signature: [u32; 2],
    /// decimal string
    pub abs_discriminant: String,
    /// defaults to 2 when the field has a real embedding
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<u32>,
    /// integer coefficient strings, constant term first
    pub poly: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regulator: Option<f64>,
}

impl FieldDoc {
    pub fn from_json(text: &str) -> Result<FieldDoc, FieldError> {
        serde_json::from_str(text).map_err(|e| FieldError::Malformed(e.to_string()))
    }

    pub fn to_spec(&self) -> Result<NumberFieldSpec, FieldError> {
        let abs_discriminant = self
            .abs_discriminant
            .parse::<BigUint>()
            .map_err(|e| FieldError::Malformed(format!("abs_discriminant: {e}")))?;
        let coeffs = self
            .poly
            .iter()
            .map(|s| s.parse::<BigInt>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| FieldError::Malformed(format!("poly: {e}")))?;
        let [r1, r2] = self.signature;
        let w = match self.w {
            Some(w) => w,
            None if r1 >= 1 => 2,
            None => {
                return Err(FieldError::Malformed(
                    "w is required for totally imaginary fields".into(),
                ))
            }
        };
        Ok(NumberFieldSpec {
            degree: self.degree,
            r1,
            r2,
            abs_discriminant,
            roots_of_unity: w,
            poly: IntPoly::new(coeffs),
            class_number: self.h,
            regulator: self.regulator,
        })
    }

    pub fn from_spec(spec: &NumberFieldSpec) -> FieldDoc {
        FieldDoc {
            degree: spec.degree,
            signature: [spec.r1, spec.r2],
            abs_discriminant: spec.abs_discriminant.to_string(),
            w: Some(spec.roots_of_unity),
            poly: spec.poly.coeffs().iter().map(|c| c.to_string()).collect(),
            h: spec.class_number,
            regulator: spec.regulator,
        }
    }
}

/// Parses a field spec JSON document into a validated-shape spec (the
/// invariants themselves are checked separately by `validate_spec`).
pub fn spec_from_json(text: &str) -> Result<NumberFieldSpec, FieldError> {
    FieldDoc::from_json(text)?.to_spec()
}
