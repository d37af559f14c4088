//! Univariate polynomial arithmetic over prime fields Z/p for word-sized
//! odd primes: the modular layer under the integer factorizer.
//!
//! Polynomials are dense `Vec<u64>` with coefficients in `[0, p)`, low to
//! high, no trailing zeros. Factoring uses distinct-degree splitting followed
//! by Cantor-Zassenhaus with a deterministic internal generator, so results
//! are reproducible run to run.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

/// Deterministic 64-bit generator (splitmix64 update); good enough for the
/// random polynomial draws in equal-degree splitting.
pub(crate) struct Rng64 {
    state: u64,
}

impl Rng64 {
    pub(crate) fn new(seed: u64) -> Self {
        Rng64 { state: seed }
    }

    pub(crate) fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
}

#[inline]
fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, base, p);
        }
        base = mulm(base, base, p);
        e >>= 1;
    }
    acc
}

/// Inverse by Fermat; `a` must be nonzero mod the odd prime `p`.
fn invm(a: u64, p: u64) -> u64 {
    powm(a, p - 2, p)
}

pub(crate) fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn deg(f: &[u64]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

fn is_one(f: &[u64]) -> bool {
    deg(f) == Some(0) && f[0] == 1
}

pub(crate) fn poly_mul(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            if b != 0 {
                out[i + j] = addm(out[i + j], mulm(a, b, p), p);
            }
        }
    }
    trim(out)
}

fn poly_sub(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let n = f.len().max(g.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        out[i] = subm(a, b, p);
    }
    trim(out)
}

fn poly_divrem(f: &[u64], g: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let dg = deg(g).expect("division by zero polynomial");
    let ginv = invm(g[dg], p);
    let mut rem = trim(f.to_vec());
    let mut quo = vec![0u64; rem.len().saturating_sub(dg)];
    while let Some(dr) = deg(&rem) {
        if dr < dg {
            break;
        }
        let c = mulm(rem[dr], ginv, p);
        quo[dr - dg] = c;
        for i in 0..=dg {
            rem[dr - dg + i] = subm(rem[dr - dg + i], mulm(g[i], c, p), p);
        }
        rem = trim(rem);
    }
    (trim(quo), rem)
}

fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    poly_divrem(f, g, p).1
}

pub(crate) fn monic(f: &[u64], p: u64) -> Vec<u64> {
    match deg(f) {
        None => Vec::new(),
        Some(d) => {
            let inv = invm(f[d], p);
            trim(f.iter().map(|&c| mulm(c, inv, p)).collect())
        }
    }
}

fn poly_gcd(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(f.to_vec());
    let mut b = trim(g.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

fn poly_derivative(f: &[u64], p: u64) -> Vec<u64> {
    if f.len() <= 1 {
        return Vec::new();
    }
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(e, &c)| mulm(c, (e as u64) % p, p))
            .collect(),
    )
}

/// Modular exponentiation of a polynomial with a word exponent.
fn poly_powmod(base: &[u64], mut e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, modulus, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), modulus, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), modulus, p);
        e >>= 1;
    }
    acc
}

/// Modular exponentiation with a big exponent (needed for the
/// `(p^d - 1) / 2` power in equal-degree splitting).
fn poly_powmod_big(base: &[u64], e: &BigUint, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, modulus, p);
    for i in 0..e.bits() {
        if e.bit(i) {
            acc = poly_rem(&poly_mul(&acc, &b, p), modulus, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), modulus, p);
    }
    acc
}

fn poly_add(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let n = f.len().max(g.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        out[i] = addm(f.get(i).copied().unwrap_or(0), g.get(i).copied().unwrap_or(0), p);
    }
    trim(out)
}

fn poly_scale(f: &[u64], c: u64, p: u64) -> Vec<u64> {
    trim(f.iter().map(|&a| mulm(a, c, p)).collect())
}

/// Extended Euclid mod p: monic `g = gcd(a, b)` with `s*a + t*b = g`.
pub(crate) fn ext_gcd_mod_p(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    let mut s0 = vec![1u64];
    let mut s1: Vec<u64> = Vec::new();
    let mut t0: Vec<u64> = Vec::new();
    let mut t1 = vec![1u64];
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1, p);
        let qs = poly_mul(&q, &s1, p);
        let qt = poly_mul(&q, &t1, p);
        let s2 = poly_add(&s0, &poly_scale(&qs, p - 1, p), p);
        let t2 = poly_add(&t0, &poly_scale(&qt, p - 1, p), p);
        r0 = core::mem::replace(&mut r1, r);
        s0 = core::mem::replace(&mut s1, s2);
        t0 = core::mem::replace(&mut t1, t2);
    }
    match deg(&r0) {
        None => (r0, s0, t0),
        Some(d) => {
            let inv = invm(r0[d], p);
            (poly_scale(&r0, inv, p), poly_scale(&s0, inv, p), poly_scale(&t0, inv, p))
        }
    }
}

/// True when `f` has no repeated factors mod p (and its degree is preserved,
/// i.e. the leading coefficient does not vanish).
pub(crate) fn is_squarefree(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    match deg(&f) {
        None => false,
        Some(0) => true,
        Some(_) => {
            let d = poly_derivative(&f, p);
            if d.is_empty() {
                return false;
            }
            is_one(&poly_gcd(&f, &d, p))
        }
    }
}

/// Distinct-degree split: pairs `(d, g)` where `g` is the monic product of
/// all irreducible factors of degree exactly `d`, ascending in `d`.
fn distinct_degree(f: &[u64], p: u64) -> Vec<(usize, Vec<u64>)> {
    let mut f = monic(f, p);
    let mut out = Vec::new();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 0usize;
    while deg(&f).unwrap_or(0) >= 1 {
        d += 1;
        if 2 * d > deg(&f).unwrap() {
            // what is left is irreducible
            out.push((deg(&f).unwrap(), f.clone()));
            break;
        }
        h = poly_powmod(&h, p, &f, p);
        let g = poly_gcd(&poly_sub(&h, &x, p), &f, p);
        if !is_one(&g) {
            out.push((d, g.clone()));
            f = poly_divrem(&f, &g, p).0;
            h = poly_rem(&h, &f, p);
        }
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting for odd `p`: factors a monic
/// product of distinct irreducibles of known degree `d`.
fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut Rng64, out: &mut Vec<Vec<u64>>) {
    let n = deg(f).unwrap();
    if n == d {
        out.push(f.to_vec());
        return;
    }
    let exp = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        // random polynomial of degree < n, not constant
        let mut a: Vec<u64> = (0..n).map(|_| rng.next_u64() % p).collect();
        a = trim(a);
        if deg(&a).unwrap_or(0) < 1 {
            continue;
        }
        let g = poly_gcd(&a, f, p);
        let split = if !is_one(&g) && deg(&g) != Some(n) {
            g
        } else {
            let b = poly_powmod_big(&a, &exp, f, p);
            let g = poly_gcd(&poly_sub(&b, &[1], p), f, p);
            if is_one(&g) || deg(&g) == Some(n) {
                continue;
            }
            g
        };
        let rest = poly_divrem(f, &split, p).0;
        equal_degree(&split, d, p, rng, out);
        equal_degree(&rest, d, p, rng, out);
        return;
    }
}

/// Full factorization of a squarefree monic polynomial mod an odd prime.
/// Returns monic irreducible factors sorted by (degree, coefficients) so the
/// output is deterministic.
pub(crate) fn factor_squarefree(f: &[u64], p: u64, seed: u64) -> Vec<Vec<u64>> {
    let f = monic(f, p);
    let mut rng = Rng64::new(seed);
    let mut out = Vec::new();
    for (d, g) in distinct_degree(&f, p) {
        equal_degree(&g, d, p, &mut rng, &mut out);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}
