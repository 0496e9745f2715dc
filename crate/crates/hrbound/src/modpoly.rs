//! Polynomial factorization over prime fields F_p, p < 2^63.
//!
//! The pipeline is squarefree decomposition, then distinct-degree
//! factorization, then equal-degree splitting. Equal-degree splitting is
//! deterministic trial enumeration for p < 50 and seeded Cantor-Zassenhaus
//! for larger (odd) p, so outputs are reproducible for a fixed seed.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::poly::IntPoly;

/// Arithmetic in F_p. Requires p < 2^63 so sums never overflow u64.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Fp {
        assert!(p >= 2 && p < (1 << 63), "prime out of range");
        Fp { p }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.p as u128) as u64
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }
}

/// Dense F_p[x] polynomial, constant term first, no trailing zeros.
pub type FpPoly = Vec<u64>;

fn trim(v: &mut FpPoly) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn deg(v: &[u64]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

fn poly_mul(fp: Fp, a: &[u64], b: &[u64]) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = fp.add(out[i + j], fp.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

fn poly_rem(fp: Fp, num: &[u64], den: &[u64]) -> FpPoly {
    let dd = deg(den).expect("division by zero polynomial");
    let inv_lead = fp.inv(den[dd]);
    let mut r: FpPoly = num.to_vec();
    while let Some(nd) = deg(&r) {
        if nd < dd {
            break;
        }
        let factor = fp.mul(r[nd], inv_lead);
        for i in 0..=dd {
            let t = fp.mul(den[i], factor);
            r[nd - dd + i] = fp.sub(r[nd - dd + i], t);
        }
        trim(&mut r);
    }
    r
}

fn poly_div_exact(fp: Fp, num: &[u64], den: &[u64]) -> FpPoly {
    let dd = deg(den).expect("division by zero polynomial");
    let inv_lead = fp.inv(den[dd]);
    let mut r: FpPoly = num.to_vec();
    let mut q = vec![0u64; r.len().saturating_sub(dd)];
    while let Some(nd) = deg(&r) {
        if nd < dd {
            break;
        }
        let factor = fp.mul(r[nd], inv_lead);
        q[nd - dd] = factor;
        for i in 0..=dd {
            let t = fp.mul(den[i], factor);
            r[nd - dd + i] = fp.sub(r[nd - dd + i], t);
        }
        trim(&mut r);
    }
    debug_assert!(r.is_empty(), "non-exact division");
    trim(&mut q);
    q
}

fn make_monic(fp: Fp, mut f: FpPoly) -> FpPoly {
    if let Some(d) = deg(&f) {
        if f[d] != 1 {
            let inv = fp.inv(f[d]);
            for c in f.iter_mut() {
                *c = fp.mul(*c, inv);
            }
        }
    }
    f
}

fn poly_gcd(fp: Fp, a: &[u64], b: &[u64]) -> FpPoly {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    while !b.is_empty() {
        let r = poly_rem(fp, &a, &b);
        a = b;
        b = r;
    }
    make_monic(fp, a)
}

fn poly_derivative(fp: Fp, f: &[u64]) -> FpPoly {
    if f.len() <= 1 {
        return Vec::new();
    }
    let mut out: FpPoly = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| fp.mul(c, (i as u64) % fp.p))
        .collect();
    trim(&mut out);
    out
}

/// base^e mod m with a u64 exponent.
fn poly_pow_mod(fp: Fp, base: &[u64], mut e: u64, m: &[u64]) -> FpPoly {
    let mut acc: FpPoly = vec![1];
    let mut b = poly_rem(fp, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(fp, &poly_mul(fp, &acc, &b), m);
        }
        b = poly_rem(fp, &poly_mul(fp, &b, &b), m);
        e >>= 1;
    }
    acc
}

/// base^e mod m with an arbitrary-precision exponent (used for the
/// Cantor-Zassenhaus exponent (p^d - 1)/2).
fn poly_pow_mod_big(fp: Fp, base: &[u64], e: &BigUint, m: &[u64]) -> FpPoly {
    let mut acc: FpPoly = vec![1];
    let mut b = poly_rem(fp, base, m);
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            acc = poly_rem(fp, &poly_mul(fp, &acc, &b), m);
        }
        if i + 1 < bits {
            b = poly_rem(fp, &poly_mul(fp, &b, &b), m);
        }
    }
    acc
}

/// Coefficient-wise p-th root of f(x) = g(x^p); over the prime field the
/// Frobenius fixes coefficients, so the root just contracts exponents.
fn pth_root(fp: Fp, f: &[u64]) -> FpPoly {
    let p = fp.p as usize;
    let mut out = Vec::with_capacity(f.len() / p + 1);
    let mut i = 0;
    while i < f.len() {
        out.push(f[i]);
        i += p;
    }
    trim(&mut out);
    out
}

/// Squarefree decomposition: pairwise coprime monic squarefree parts with
/// their multiplicities, in increasing multiplicity order.
fn squarefree_parts(fp: Fp, f: FpPoly) -> Vec<(FpPoly, u32)> {
    let mut out = Vec::new();
    squarefree_rec(fp, f, 1, &mut out);
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    out
}

fn squarefree_rec(fp: Fp, f: FpPoly, scale: u32, out: &mut Vec<(FpPoly, u32)>) {
    if deg(&f).map_or(true, |d| d == 0) {
        return;
    }
    let d = poly_derivative(fp, &f);
    if d.is_empty() {
        // f = g(x^p): recurse on the p-th root with multiplicities scaled by p
        let root = pth_root(fp, &f);
        let p32 = u32::try_from(fp.p).expect("p-th power factor with huge p");
        squarefree_rec(fp, root, scale * p32, out);
        return;
    }
    let mut g = poly_gcd(fp, &f, &d);
    let mut w = poly_div_exact(fp, &f, &g);
    let mut i = 1u32;
    while deg(&w).map_or(false, |d| d > 0) {
        let y = poly_gcd(fp, &w, &g);
        let fac = poly_div_exact(fp, &w, &y);
        if deg(&fac).map_or(false, |d| d > 0) {
            out.push((fac, i * scale));
        }
        w = y;
        g = poly_div_exact(fp, &g, &w);
        i += 1;
    }
    if deg(&g).map_or(false, |d| d > 0) {
        let root = pth_root(fp, &g);
        let p32 = u32::try_from(fp.p).expect("p-th power factor with huge p");
        squarefree_rec(fp, root, scale * p32, out);
    }
}

/// Distinct-degree factorization of a squarefree monic polynomial:
/// (product of all irreducible factors of degree d, d) pairs.
fn distinct_degree(fp: Fp, g: FpPoly) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    let mut f_star = g;
    let mut h: FpPoly = vec![0, 1]; // x
    let mut d = 0usize;
    while deg(&f_star).map_or(false, |df| df >= 2 * (d + 1)) {
        d += 1;
        h = poly_pow_mod(fp, &h, fp.p, &f_star);
        let mut diff = h.clone();
        // h - x
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = fp.sub(diff[1], 1);
        trim(&mut diff);
        let g_d = poly_gcd(fp, &diff, &f_star);
        if deg(&g_d).map_or(false, |dg| dg > 0) {
            f_star = poly_div_exact(fp, &f_star, &g_d);
            h = poly_rem(fp, &h, &f_star);
            out.push((g_d, d));
        }
    }
    if let Some(df) = deg(&f_star) {
        if df > 0 {
            out.push((f_star, df));
        }
    }
    out
}

/// Splits a monic product of distinct irreducibles, all of degree d.
fn equal_degree(fp: Fp, h: FpPoly, d: usize, rng: &mut ChaCha12Rng) -> Vec<FpPoly> {
    let dh = deg(&h).expect("nonzero");
    if dh == d {
        return vec![h];
    }
    if fp.p < 50 {
        return equal_degree_trial(fp, h, d);
    }
    // Cantor-Zassenhaus, p odd: gcd(a^((p^d-1)/2) - 1, h) splits with
    // probability >= 1/2 per draw.
    let exponent = (BigUint::from(fp.p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    for _ in 0..256 {
        let a: FpPoly = {
            let mut v: FpPoly = (0..dh).map(|_| rng.gen_range(0..fp.p)).collect();
            trim(&mut v);
            v
        };
        if deg(&a).map_or(true, |da| da == 0) {
            continue;
        }
        let g1 = poly_gcd(fp, &a, &h);
        if let Some(dg) = deg(&g1) {
            if dg > 0 && dg < dh {
                let rest = poly_div_exact(fp, &h, &g1);
                let mut out = equal_degree(fp, g1, d, rng);
                out.extend(equal_degree(fp, rest, d, rng));
                return out;
            }
        }
        let b = poly_pow_mod_big(fp, &a, &exponent, &h);
        let mut bm1 = b;
        if bm1.is_empty() {
            bm1 = vec![fp.p - 1];
        } else {
            bm1[0] = fp.sub(bm1[0], 1);
            trim(&mut bm1);
        }
        if bm1.is_empty() {
            continue;
        }
        let g = poly_gcd(fp, &bm1, &h);
        if let Some(dg) = deg(&g) {
            if dg > 0 && dg < dh {
                let rest = poly_div_exact(fp, &h, &g);
                let mut out = equal_degree(fp, g, d, rng);
                out.extend(equal_degree(fp, rest, d, rng));
                return out;
            }
        }
    }
    unreachable!("equal-degree split failed after 256 draws");
}

/// Deterministic equal-degree splitting for small p: enumerate monic
/// degree-d candidates in lexicographic order and trial divide. Composite
/// candidates never divide (their factors have degree < d), so no
/// irreducibility test is needed.
fn equal_degree_trial(fp: Fp, h: FpPoly, d: usize) -> Vec<FpPoly> {
    let mut out = Vec::new();
    let mut rem = h;
    let mut counter = vec![0u64; d]; // low coefficients of the candidate
    loop {
        if deg(&rem).map_or(true, |dr| dr == 0) {
            break;
        }
        let mut cand = counter.clone();
        cand.push(1);
        if poly_rem(fp, &rem, &cand).is_empty() {
            rem = poly_div_exact(fp, &rem, &cand);
            out.push(cand);
            continue; // distinct irreducibles: same candidate cannot divide again
        }
        // increment the counter
        let mut i = 0;
        loop {
            if i == d {
                unreachable!("ran out of degree-{d} candidates");
            }
            counter[i] += 1;
            if counter[i] < fp.p {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
    out
}

/// Complete factorization of a monic integer polynomial reduced mod p:
/// monic irreducible factors with multiplicities, canonically ordered.
pub fn factor_mod_p(f: &IntPoly, p: u64, seed: u64) -> Vec<(FpPoly, u32)> {
    let fp = Fp::new(p);
    let reduced = reduce_intpoly(f, fp);
    assert!(
        deg(&reduced) == Some(f.degree()),
        "monic polynomial must stay monic mod p"
    );
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ p.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut out: Vec<(FpPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_parts(fp, reduced) {
        for (prod, d) in distinct_degree(fp, part) {
            for factor in equal_degree(fp, prod, d, &mut rng) {
                out.push((factor, mult));
            }
        }
    }
    out.sort_by(|a, b| {
        deg(&a.0)
            .cmp(&deg(&b.0))
            .then_with(|| a.0.cmp(&b.0))
            .then_with(|| a.1.cmp(&b.1))
    });
    out
}

/// Degrees and multiplicities of the monic irreducible factors of f mod p,
/// sorted by (degree, multiplicity).
pub fn factor_degrees_mod_p(f: &IntPoly, p: u64, seed: u64) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = factor_mod_p(f, p, seed)
        .into_iter()
        .map(|(poly, mult)| (deg(&poly).unwrap() as u32, mult))
        .collect();
    out.sort();
    out
}

fn reduce_intpoly(f: &IntPoly, fp: Fp) -> FpPoly {
    let p = num_bigint::BigInt::from(fp.p);
    let mut out: FpPoly = f
        .coeffs()
        .iter()
        .map(|c| c.mod_floor(&p).to_u64().expect("residue fits"))
        .collect();
    trim(&mut out);
    out
}
