//! Exact Dedekind zeta coefficients r_K(m) by local factorization and a
//! multiplicative sieve, the Ideal Theorem error profile Delta_K(x), and
//! the empirical constant for the error-term hypothesis.
//!
//! r_K is multiplicative, so the table is assembled one prime at a time:
//! each prime p <= X contributes a local factor whose p^k coefficient is
//! the number of prime-ideal multisets above p with norm p^k. The local
//! data comes from factoring the defining polynomial mod p (Dedekind),
//! which is valid away from primes dividing the index [O_K : Z[theta]];
//! those must be supplied explicitly as overrides.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldError, Kappa, NumberFieldSpec};
use crate::modpoly::factor_degrees_mod_p;
use crate::poly::poly_discriminant;

/// Fixed default seed for the equal-degree splitting inside the sieve.
pub const DEFAULT_SEED: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdealError {
    #[error("prime {0} may divide the index [O_K : Z[theta]]; supply an override")]
    IndexPrime(u64),
    #[error("coefficient count exceeds the 32-bit range at m = {0}")]
    Overflow(u64),
    #[error("override for prime {prime}: {reason}")]
    BadOverride { prime: u64, reason: String },
    #[error("disc(f) is not |d_K| times a perfect square; refusing to sieve")]
    FieldDataMismatch,
    #[error("sieve limit must be >= 1")]
    EmptyRange,
    #[error("table too short for kappa estimation (X = {0} < 1000)")]
    TableTooShort(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Splitting data above one rational prime: (ramification index, residue
/// degree) per prime ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalShape {
    pub prime: u64,
    /// (e_i, f_i) pairs, sorted
    pub pairs: Vec<(u32, u32)>,
}

impl LocalShape {
    pub fn new(prime: u64, mut pairs: Vec<(u32, u32)>, degree: u32) -> Result<LocalShape, IdealError> {
        if pairs.iter().any(|&(e, f)| e == 0 || f == 0) {
            return Err(IdealError::BadOverride {
                prime,
                reason: "e and f must be >= 1".into(),
            });
        }
        let total: u32 = pairs.iter().map(|&(e, f)| e * f).sum();
        if total != degree {
            return Err(IdealError::BadOverride {
                prime,
                reason: format!("sum of e*f is {total}, expected the degree {degree}"),
            });
        }
        pairs.sort();
        Ok(LocalShape { prime, pairs })
    }

    pub fn residue_degrees(&self) -> Vec<u32> {
        self.pairs.iter().map(|&(_, f)| f).collect()
    }
}

/// Exact r_K(m) for 1 <= m <= X with 64-bit partial sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    limit: u64,
    r: Vec<u32>,
    s: Vec<u64>,
}

impl CoefficientTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn r(&self, m: u64) -> u32 {
        self.r[m as usize]
    }

    /// S(m) = sum of r_K(j) for j <= m; S(0) = 0.
    pub fn partial_sum(&self, m: u64) -> u64 {
        self.s[m as usize]
    }

    /// Coefficients r_K(1..=upto) as u64, for the weighted-log machinery.
    pub fn counts_u64(&self, upto: u64) -> Vec<u64> {
        self.r[1..=upto as usize].iter().map(|&c| c as u64).collect()
    }
}

/// Number of ordered n-tuples of positive integers with product m
/// (Piltz-Dirichlet divisor function tau_n).
pub fn tau(n: u32, m: u64) -> u64 {
    assert!(n >= 1 && m >= 1);
    let mut t = 1u64;
    for (_, a) in factorize(m) {
        t = t
            .checked_mul(binomial(a as u64 + n as u64 - 1, n as u64 - 1))
            .expect("tau overflow");
    }
    t
}

fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut a = 0;
            while m % p == 0 {
                m /= p;
                a += 1;
            }
            out.push((p, a));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflow")
}

/// r_K(p^k): multisets of prime ideals above p with norm p^k, i.e. the
/// t^k coefficient of prod_i 1/(1 - t^(f_i)). Ramification indices do not
/// enter: norms only see residue degrees.
pub fn prime_power_count(shape: &LocalShape, k: u32) -> u64 {
    let k = k as usize;
    let mut dp = vec![0u64; k + 1];
    dp[0] = 1;
    for f in shape.residue_degrees() {
        let f = f as usize;
        for j in f..=k {
            dp[j] += dp[j - f];
        }
    }
    dp[k]
}

/// Index-prime bookkeeping plus the per-prime shape source for one field.
pub struct SieveContext<'a> {
    spec: &'a NumberFieldSpec,
    /// disc(f) / (+-d_K) = q^2; primes dividing it need overrides.
    index_square: BigUint,
    overrides: &'a BTreeMap<u64, Vec<(u32, u32)>>,
    seed: u64,
}

impl<'a> SieveContext<'a> {
    pub fn new(spec: &'a NumberFieldSpec, options: &'a SieveOptions) -> Result<Self, IdealError> {
        let index_square = if spec.poly.degree() < 2 {
            BigUint::one()
        } else {
            let disc = poly_discriminant(&spec.poly);
            if disc.is_zero() {
                return Err(IdealError::FieldDataMismatch);
            }
            let (ratio, rem) = disc.magnitude().div_rem(&spec.abs_discriminant);
            if !rem.is_zero() {
                return Err(IdealError::FieldDataMismatch);
            }
            let root = ratio.sqrt();
            if &root * &root != ratio {
                return Err(IdealError::FieldDataMismatch);
            }
            ratio
        };
        Ok(SieveContext {
            spec,
            index_square,
            overrides: &options.overrides,
            seed: options.seed,
        })
    }

    fn prime_may_divide_index(&self, p: u64) -> bool {
        !self.index_square.is_one() && (&self.index_square % p).is_zero()
    }

    pub fn shape(&self, p: u64) -> Result<LocalShape, IdealError> {
        if self.prime_may_divide_index(p) {
            return match self.overrides.get(&p) {
                Some(pairs) => LocalShape::new(p, pairs.clone(), self.spec.degree),
                None => Err(IdealError::IndexPrime(p)),
            };
        }
        if self.spec.poly.degree() == 1 {
            // rational degenerate fixture: one prime, e = f = 1
            return LocalShape::new(p, vec![(1, 1)], 1);
        }
        let pairs = factor_degrees_mod_p(&self.spec.poly, p, self.seed)
            .into_iter()
            .map(|(degree, mult)| (mult, degree))
            .collect();
        LocalShape::new(p, pairs, self.spec.degree)
    }
}

#[derive(Debug, Clone, Default)]
pub struct SieveOptions {
    pub seed: u64,
    pub overrides: BTreeMap<u64, Vec<(u32, u32)>>,
}

impl SieveOptions {
    pub fn new() -> SieveOptions {
        SieveOptions { seed: DEFAULT_SEED, overrides: BTreeMap::new() }
    }
}

/// Splitting data for one prime by Dedekind's theorem, or the override.
pub fn local_shape(
    spec: &NumberFieldSpec,
    p: u64,
    options: &SieveOptions,
) -> Result<LocalShape, IdealError> {
    SieveContext::new(spec, options)?.shape(p)
}

/// Parses the override file format: a JSON map from prime (decimal string)
/// to a list of [e, f] pairs.
pub fn overrides_from_json(text: &str) -> Result<BTreeMap<u64, Vec<(u32, u32)>>, IdealError> {
    let raw: BTreeMap<String, Vec<(u32, u32)>> =
        serde_json::from_str(text).map_err(|e| IdealError::BadOverride {
            prime: 0,
            reason: e.to_string(),
        })?;
    let mut out = BTreeMap::new();
    for (key, pairs) in raw {
        let p: u64 = key.parse().map_err(|e| IdealError::BadOverride {
            prime: 0,
            reason: format!("prime key {key:?}: {e}"),
        })?;
        out.insert(p, pairs);
    }
    Ok(out)
}

fn primes_up_to(x: u64) -> Vec<u64> {
    if x < 2 {
        return Vec::new();
    }
    let x = x as usize;
    let mut is_comp = vec![false; x + 1];
    let mut primes = Vec::new();
    for p in 2..=x {
        if !is_comp[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= x {
                is_comp[q] = true;
                q += p;
            }
        }
    }
    primes
}

/// Exact r_K(m) for all m <= X via the multiplicative convolution sieve:
/// start from the Dirichlet identity and multiply in one local Euler
/// factor per prime. The result is independent of the prime order.
pub fn sieve_coefficients(
    spec: &NumberFieldSpec,
    x: u64,
    options: &SieveOptions,
) -> Result<CoefficientTable, IdealError> {
    if x < 1 {
        return Err(IdealError::EmptyRange);
    }
    let ctx = SieveContext::new(spec, options)?;
    let mut r = vec![0u32; x as usize + 1];
    r[1] = 1;
    for p in primes_up_to(x) {
        let shape = ctx.shape(p)?;
        // local coefficients c[k] = r_K(p^k) for p^k <= X
        let mut c: Vec<u64> = Vec::new();
        let mut pk = 1u64;
        loop {
            c.push(prime_power_count(&shape, c.len() as u32));
            match pk.checked_mul(p) {
                Some(next) if next <= x => pk = next,
                _ => break,
            }
        }
        // fold the factor in: sources are coprime to p, targets divisible by p
        let mut m = 1u64;
        while m <= x / p {
            if m % p != 0 && r[m as usize] != 0 {
                let base = r[m as usize] as u64;
                let mut q = p;
                for ck in c.iter().skip(1) {
                    let idx = m * q;
                    let add = base.checked_mul(*ck).ok_or(IdealError::Overflow(idx))?;
                    let updated = (r[idx as usize] as u64)
                        .checked_add(add)
                        .ok_or(IdealError::Overflow(idx))?;
                    r[idx as usize] =
                        u32::try_from(updated).map_err(|_| IdealError::Overflow(idx))?;
                    match q.checked_mul(p) {
                        Some(next) if next <= x / m => q = next,
                        _ => break,
                    }
                }
            }
            m += 1;
        }
    }
    let mut s = vec![0u64; x as usize + 1];
    for m in 1..=x as usize {
        s[m] = s[m - 1]
            .checked_add(r[m] as u64)
            .ok_or(IdealError::Overflow(m as u64))?;
    }
    Ok(CoefficientTable { limit: x, r, s })
}

/// One jump point of Delta_K: the value at x and the left limit at x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaCheckpoint {
    pub x: u64,
    pub at: f64,
    pub left: f64,
}

/// Delta_K(x) = S(x) - kappa x sampled at both sides of every integer in
/// [1, X]. Delta decreases linearly between jumps, so the checkpoint
/// extrema give the exact sup of |Delta| over real x in [1, X].
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaProfile {
    pub checkpoints: Vec<DeltaCheckpoint>,
    pub kappa_used: Kappa,
    pub sup_statistic: f64,
}

pub fn delta_profile(table: &CoefficientTable, kappa: &Kappa) -> DeltaProfile {
    let x = table.limit();
    let mut checkpoints = Vec::with_capacity(x as usize);
    let mut sup = 0f64;
    for m in 1..=x {
        let kx = kappa.value * m as f64;
        let at = table.partial_sum(m) as f64 - kx;
        let left = table.partial_sum(m - 1) as f64 - kx;
        sup = sup.max(at.abs()).max(left.abs());
        checkpoints.push(DeltaCheckpoint { x: m, at, left });
    }
    DeltaProfile { checkpoints, kappa_used: *kappa, sup_statistic: sup }
}

/// Smallest C with |Delta_K(x)| <= C x^(1-alpha) at every checkpoint (both
/// sides): an empirical certificate over [1, X] only, not a proof for all x.
pub fn empirical_c(profile: &DeltaProfile, alpha: f64) -> f64 {
    assert!(!profile.checkpoints.is_empty(), "profile must be non-empty");
    assert!(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
    let mut c = 0f64;
    for cp in &profile.checkpoints {
        let weight = (cp.x as f64).powf(alpha - 1.0);
        c = c.max(cp.at.abs() * weight).max(cp.left.abs() * weight);
    }
    c
}

/// kappa-hat = S(X)/X with the uncertainty implied by the hypothesis
/// |Delta| <= C_hyp x^(1-alpha): half-width C_hyp X^(-alpha).
pub fn estimate_kappa(
    table: &CoefficientTable,
    alpha: f64,
    c_hyp: f64,
) -> Result<Kappa, IdealError> {
    let x = table.limit();
    if x < 1000 {
        return Err(IdealError::TableTooShort(x));
    }
    let value = table.partial_sum(x) as f64 / x as f64;
    Ok(Kappa::new(value, c_hyp * (x as f64).powf(-alpha)))
}

/// CSV export with header `m,r,partial_sum`.
pub fn write_coefficients_csv<W: std::io::Write>(
    table: &CoefficientTable,
    mut w: W,
) -> std::io::Result<()> {
    writeln!(w, "m,r,partial_sum")?;
    for m in 1..=table.limit() {
        writeln!(w, "{},{},{}", m, table.r(m), table.partial_sum(m))?;
    }
    Ok(())
}

/// CSV export with header `x,delta_at,delta_left`.
pub fn write_delta_csv<W: std::io::Write>(
    profile: &DeltaProfile,
    mut w: W,
) -> std::io::Result<()> {
    writeln!(w, "x,delta_at,delta_left")?;
    for cp in &profile.checkpoints {
        writeln!(w, "{},{},{}", cp.x, fmt_f64(cp.at), fmt_f64(cp.left))?;
    }
    Ok(())
}

/// Shortest round-trip decimal for an f64.
pub fn fmt_f64(v: f64) -> String {
    let mut buf = ryu_like(v);
    if !buf.contains('.') && !buf.contains('e') && !buf.contains("inf") && !buf.contains("NaN") {
        buf.push_str(".0");
    }
    buf
}

fn ryu_like(v: f64) -> String {
    // `{}` on f64 is the shortest representation that round-trips
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPoly;
    use proptest::prelude::*;

    fn x3_x_1() -> NumberFieldSpec {
        NumberFieldSpec {
            degree: 3,
            r1: 1,
            r2: 1,
            abs_discriminant: BigUint::from(23u32),
            roots_of_unity: 2,
            poly: IntPoly::from_i64(&[-1, -1, 0, 1]),
            class_number: Some(1),
            regulator: Some(0.281199),
        }
    }

    fn rational_fixture() -> NumberFieldSpec {
        NumberFieldSpec {
            degree: 1,
            r1: 1,
            r2: 0,
            abs_discriminant: BigUint::one(),
            roots_of_unity: 2,
            poly: IntPoly::from_i64(&[0, 1]),
            class_number: None,
            regulator: None,
        }
    }

    fn dedekind_field() -> NumberFieldSpec {
        NumberFieldSpec {
            degree: 3,
            r1: 1,
            r2: 1,
            abs_discriminant: BigUint::from(503u32),
            roots_of_unity: 2,
            poly: IntPoly::from_i64(&[-8, -2, -1, 1]),
            class_number: None,
            regulator: None,
        }
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(3, 1), 1);
        assert_eq!(tau(3, 2), 3);
        assert_eq!(tau(3, 4), 6);
        // frozen independent table for tau_3(1..10)
        let expected = [1u64, 3, 3, 6, 3, 9, 3, 10, 6, 9];
        for (m, &e) in expected.iter().enumerate() {
            assert_eq!(tau(3, m as u64 + 1), e);
        }
    }

    /// brute-force tau by enumerating ordered tuples, for small inputs
    fn tau_oracle(n: u32, m: u64) -> u64 {
        if n == 1 {
            return 1;
        }
        (1..=m)
            .filter(|d| m % d == 0)
            .map(|d| tau_oracle(n - 1, m / d))
            .sum()
    }

    #[test]
    fn tau_matches_enumeration() {
        for n in 1..=4 {
            for m in 1..=60 {
                assert_eq!(tau(n, m), tau_oracle(n, m), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn local_shape_examples() {
        let opts = SieveOptions::new();
        let spec = x3_x_1();
        let s2 = local_shape(&spec, 2, &opts).unwrap();
        assert_eq!(s2.pairs, vec![(1, 3)]);
        let s23 = local_shape(&spec, 23, &opts).unwrap();
        assert_eq!(s23.pairs, vec![(1, 1), (2, 1)]);
        let s59 = local_shape(&spec, 59, &opts).unwrap();
        assert_eq!(s59.pairs, vec![(1, 1), (1, 1), (1, 1)]);
    }

    #[test]
    fn prime_power_count_examples() {
        let split = LocalShape::new(2, vec![(1, 1), (1, 1), (1, 1)], 3).unwrap();
        assert_eq!(prime_power_count(&split, 2), 6);
        let inert = LocalShape::new(2, vec![(1, 3)], 3).unwrap();
        assert_eq!(prime_power_count(&inert, 2), 0);
        assert_eq!(prime_power_count(&inert, 3), 1);
        let mixed = LocalShape::new(5, vec![(1, 1), (1, 2)], 3).unwrap();
        assert_eq!(prime_power_count(&mixed, 2), 2);
    }

    /// independent route: enumerate exponent vectors recursively
    fn count_oracle(fvec: &[u32], k: u32) -> u64 {
        match fvec.split_first() {
            None => (k == 0) as u64,
            Some((&f, rest)) => {
                let mut total = 0;
                let mut a = 0;
                while a * f <= k {
                    total += count_oracle(rest, k - a * f);
                    a += 1;
                }
                total
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn prime_power_count_matches_enumeration(
            fvec in prop::collection::vec(1u32..=4, 1..5),
            k in 0u32..=12,
        ) {
            let degree: u32 = fvec.iter().sum();
            let pairs: Vec<(u32, u32)> = fvec.iter().map(|&f| (1, f)).collect();
            let shape = LocalShape::new(3, pairs, degree).unwrap();
            prop_assert_eq!(prime_power_count(&shape, k), count_oracle(&fvec, k));
        }

        #[test]
        fn sieve_multiplicative_on_coprime_pairs(a in 1u64..=80, b in 1u64..=80) {
            prop_assume!(num_integer::gcd(a, b) == 1);
            let table = sieve_coefficients(&x3_x_1(), 6400, &SieveOptions::new()).unwrap();
            prop_assert_eq!(
                table.r(a * b) as u64,
                table.r(a) as u64 * table.r(b) as u64
            );
        }
    }

    #[test]
    fn sieve_examples_x3_x_1() {
        let table = sieve_coefficients(&x3_x_1(), 100, &SieveOptions::new()).unwrap();
        assert_eq!(table.r(1), 1);
        assert_eq!(table.r(2), 0);
        assert_eq!(table.r(8), 1);
        assert_eq!(table.r(23), 2);
        assert_eq!(table.r(59), 3); // totally split
        assert_eq!(table.partial_sum(10), 4);
        assert_eq!(table.partial_sum(100), 35);
    }

    #[test]
    fn sieve_rational_fixture_all_ones() {
        let table = sieve_coefficients(&rational_fixture(), 500, &SieveOptions::new()).unwrap();
        for m in 1..=500 {
            assert_eq!(table.r(m), 1, "m={m}");
        }
        assert_eq!(table.partial_sum(500), 500);
    }

    #[test]
    fn index_prime_requires_override() {
        let spec = dedekind_field();
        let opts = SieveOptions::new();
        assert_eq!(local_shape(&spec, 2, &opts), Err(IdealError::IndexPrime(2)));
        assert!(matches!(
            sieve_coefficients(&spec, 10, &opts),
            Err(IdealError::IndexPrime(2))
        ));
        // 2 is totally split in Dedekind's field
        let mut with_override = SieveOptions::new();
        with_override.overrides.insert(2, vec![(1, 1), (1, 1), (1, 1)]);
        let shape = local_shape(&spec, 2, &with_override).unwrap();
        assert_eq!(shape.pairs, vec![(1, 1), (1, 1), (1, 1)]);
        let table = sieve_coefficients(&spec, 20, &with_override).unwrap();
        assert_eq!(table.r(2), 3);
        assert_eq!(table.r(4), 6);
    }

    #[test]
    fn override_shape_must_match_degree() {
        assert!(matches!(
            LocalShape::new(2, vec![(1, 1)], 3),
            Err(IdealError::BadOverride { .. })
        ));
        assert!(matches!(
            LocalShape::new(2, vec![(0, 3)], 3),
            Err(IdealError::BadOverride { .. })
        ));
    }

    #[test]
    fn overrides_json_format() {
        let parsed = overrides_from_json(r#"{"2": [[1,1],[1,1],[1,1]]}"#).unwrap();
        assert_eq!(parsed[&2], vec![(1, 1), (1, 1), (1, 1)]);
        assert!(overrides_from_json(r#"{"two": []}"#).is_err());
    }

    #[test]
    fn mismatched_field_data_is_refused() {
        let mut spec = x3_x_1();
        spec.abs_discriminant = BigUint::from(46u32);
        assert!(matches!(
            sieve_coefficients(&spec, 10, &SieveOptions::new()),
            Err(IdealError::FieldDataMismatch)
        ));
    }

    #[test]
    fn delta_profile_examples() {
        let table = sieve_coefficients(&x3_x_1(), 50, &SieveOptions::new()).unwrap();
        let kappa = x3_x_1().kappa_from_invariants().unwrap();
        let profile = delta_profile(&table, &kappa);
        // Delta(1) = 1 - kappa, left limit = -kappa
        let first = profile.checkpoints[0];
        assert!((first.at - (1.0 - kappa.value)).abs() < 1e-14);
        assert!((first.left + kappa.value).abs() < 1e-14);
        // degenerate kappa = 0: Delta(x) = S(x), sup = S(X)
        let zero = Kappa::new(0.0, 0.0);
        let flat = delta_profile(&table, &zero);
        assert_eq!(flat.sup_statistic, table.partial_sum(50) as f64);
    }

    #[test]
    fn delta_sup_matches_direct_loop() {
        let table = sieve_coefficients(&x3_x_1(), 10_000, &SieveOptions::new()).unwrap();
        let kappa = x3_x_1().kappa_from_invariants().unwrap();
        let profile = delta_profile(&table, &kappa);
        // independent O(X) recomputation
        let mut sup = 0f64;
        for m in 1..=10_000u64 {
            let at = table.partial_sum(m) as f64 - kappa.value * m as f64;
            let left = table.partial_sum(m - 1) as f64 - kappa.value * m as f64;
            sup = sup.max(at.abs()).max(left.abs());
        }
        assert_eq!(profile.sup_statistic, sup);
    }

    #[test]
    fn empirical_c_single_checkpoint() {
        let kappa = Kappa::new(0.3, 0.0);
        let profile = DeltaProfile {
            checkpoints: vec![DeltaCheckpoint { x: 1, at: 0.7, left: -0.3 }],
            kappa_used: kappa,
            sup_statistic: 0.7,
        };
        assert!((empirical_c(&profile, 0.5) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn empirical_c_monotone_in_alpha() {
        let table = sieve_coefficients(&x3_x_1(), 2000, &SieveOptions::new()).unwrap();
        let kappa = x3_x_1().kappa_from_invariants().unwrap();
        let profile = delta_profile(&table, &kappa);
        let mut last = 0.0;
        for i in 1..20 {
            let c = empirical_c(&profile, i as f64 / 20.0);
            assert!(c >= last * (1.0 - 1e-12), "alpha grid point {i}");
            last = c;
        }
    }

    #[test]
    fn estimate_kappa_behaviour() {
        let table = sieve_coefficients(&rational_fixture(), 4000, &SieveOptions::new()).unwrap();
        let k = estimate_kappa(&table, 0.5, 1.0).unwrap();
        assert_eq!(k.value, 1.0); // S(X) = X exactly
        let short = sieve_coefficients(&rational_fixture(), 999, &SieveOptions::new()).unwrap();
        assert_eq!(
            estimate_kappa(&short, 0.5, 1.0),
            Err(IdealError::TableTooShort(999))
        );
        // uncertainty halves when X quadruples at alpha = 1/2
        let big = sieve_coefficients(&rational_fixture(), 16_000, &SieveOptions::new()).unwrap();
        let k4 = estimate_kappa(&big, 0.5, 1.0).unwrap();
        assert!((k.uncertainty / k4.uncertainty - 2.0).abs() < 1e-12);
    }

    #[test]
    fn csv_export_shapes() {
        let table = sieve_coefficients(&x3_x_1(), 5, &SieveOptions::new()).unwrap();
        let mut buf = Vec::new();
        write_coefficients_csv(&table, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "m,r,partial_sum");
        assert_eq!(lines[1], "1,1,1");
        assert_eq!(lines.len(), 6);

        let profile = delta_profile(&table, &Kappa::new(0.5, 0.0));
        let mut buf = Vec::new();
        write_delta_csv(&profile, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,delta_at,delta_left\n1,0.5,-0.5\n"));
    }
}
