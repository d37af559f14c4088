//! Dense univariate polynomials over the rationals: division, gcd, Sturm
//! chains, and bisection-based real root isolation.
//!
//! Coefficients run low to high with no trailing zeros. Everything here is
//! crate-internal plumbing shared by the factorizer and the real solver.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer as IntegerOps;
use num_traits::{One, Signed, Zero};

use crate::exact::{rat_sign, Interval, Rational};

pub(crate) fn trim(mut f: Vec<Rational>) -> Vec<Rational> {
    while f.last().map(Zero::is_zero).unwrap_or(false) {
        f.pop();
    }
    f
}

pub(crate) fn is_zero(f: &[Rational]) -> bool {
    f.iter().all(Zero::is_zero)
}

/// Degree, or `None` for the zero polynomial.
pub(crate) fn degree(f: &[Rational]) -> Option<usize> {
    f.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn eval(f: &[Rational], t: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in f.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

pub(crate) fn derivative(f: &[Rational]) -> Vec<Rational> {
    if f.len() <= 1 {
        return Vec::new();
    }
    f.iter()
        .enumerate()
        .skip(1)
        .map(|(e, c)| c * Rational::from_integer(BigInt::from(e)))
        .collect()
}

pub(crate) fn neg(f: &[Rational]) -> Vec<Rational> {
    f.iter().map(|c| -c.clone()).collect()
}

pub(crate) fn add(f: &[Rational], g: &[Rational]) -> Vec<Rational> {
    let n = f.len().max(g.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let a = f.get(i).cloned().unwrap_or_else(Rational::zero);
        let b = g.get(i).cloned().unwrap_or_else(Rational::zero);
        out.push(a + b);
    }
    trim(out)
}

pub(crate) fn sub(f: &[Rational], g: &[Rational]) -> Vec<Rational> {
    add(f, &neg(g))
}

pub(crate) fn mul(f: &[Rational], g: &[Rational]) -> Vec<Rational> {
    if is_zero(f) || is_zero(g) {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            if !b.is_zero() {
                out[i + j] += a * b;
            }
        }
    }
    trim(out)
}

pub(crate) fn scale(f: &[Rational], c: &Rational) -> Vec<Rational> {
    if c.is_zero() {
        return Vec::new();
    }
    f.iter().map(|a| a * c).collect()
}

/// Exact Euclidean division; panics on a zero divisor.
pub(crate) fn divrem(f: &[Rational], g: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let dg = degree(g).expect("division by zero polynomial");
    let mut rem: Vec<Rational> = trim(f.to_vec());
    let lead = g[dg].clone();
    let mut quo = vec![Rational::zero(); rem.len().saturating_sub(dg)];
    while let Some(dr) = degree(&rem) {
        if dr < dg {
            break;
        }
        let c = &rem[dr] / &lead;
        quo[dr - dg] = c.clone();
        for i in 0..=dg {
            let delta = &g[i] * &c;
            rem[dr - dg + i] -= delta;
        }
        rem = trim(rem);
    }
    (trim(quo), rem)
}

/// True when `g` divides `f` exactly.
pub(crate) fn divides(g: &[Rational], f: &[Rational]) -> bool {
    if is_zero(f) {
        return true;
    }
    if is_zero(g) {
        return false;
    }
    divrem(f, g).1.is_empty()
}

/// Rescales to coprime integer coefficients with positive leading term.
pub(crate) fn primitive_integer(f: &[Rational]) -> Vec<Rational> {
    let f = trim(f.to_vec());
    if f.is_empty() {
        return f;
    }
    let mut den_lcm = BigInt::one();
    for c in &f {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let mut num_gcd = BigInt::zero();
    for c in &f {
        num_gcd = num_gcd.gcd(&(c.numer() * (&den_lcm / c.denom())));
    }
    let mut factor = Rational::new(den_lcm, num_gcd);
    if f.last().unwrap().is_negative() {
        factor = -factor;
    }
    scale(&f, &factor)
}

pub(crate) fn monic(f: &[Rational]) -> Vec<Rational> {
    match degree(f) {
        None => Vec::new(),
        Some(d) => {
            let inv = f[d].recip();
            scale(&trim(f.to_vec()), &inv)
        }
    }
}

/// Monic gcd via Euclid, stripping content each step to limit coefficient
/// growth.
pub(crate) fn gcd(f: &[Rational], g: &[Rational]) -> Vec<Rational> {
    let mut a = primitive_integer(f);
    let mut b = primitive_integer(g);
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = primitive_integer(&r);
    }
    monic(&a)
}

/// Extended Euclid: returns monic `g = gcd(f, h)` and cofactors `(s, t)`
/// with `s*f + t*h = g`.
pub(crate) fn ext_gcd(
    f: &[Rational],
    h: &[Rational],
) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let mut r0 = trim(f.to_vec());
    let mut r1 = trim(h.to_vec());
    let mut s0 = vec![Rational::one()];
    let mut s1: Vec<Rational> = Vec::new();
    let mut t0: Vec<Rational> = Vec::new();
    let mut t1 = vec![Rational::one()];
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s2 = sub(&s0, &mul(&q, &s1));
        let t2 = sub(&t0, &mul(&q, &t1));
        r0 = core::mem::replace(&mut r1, r);
        s0 = core::mem::replace(&mut s1, s2);
        t0 = core::mem::replace(&mut t1, t2);
    }
    match degree(&r0) {
        None => (r0, s0, t0),
        Some(d) => {
            let inv = r0[d].recip();
            (scale(&r0, &inv), scale(&s0, &inv), scale(&t0, &inv))
        }
    }
}

/// `f / gcd(f, f')`: same roots, all simple.
pub(crate) fn squarefree_part(f: &[Rational]) -> Vec<Rational> {
    let d = derivative(f);
    if is_zero(&d) {
        // constant (or zero): already squarefree
        return trim(f.to_vec());
    }
    let g = gcd(f, &d);
    if degree(&g) == Some(0) {
        return primitive_integer(f);
    }
    primitive_integer(&divrem(f, &g).0)
}

/// Cauchy bound: every real root has absolute value below the result.
pub(crate) fn root_bound(f: &[Rational]) -> Rational {
    let d = degree(f).expect("root bound of zero polynomial");
    let lead = f[d].clone();
    let mut max = Rational::zero();
    for c in &f[..d] {
        let ratio = (c / &lead).abs();
        if ratio > max {
            max = ratio;
        }
    }
    max + Rational::one()
}

/// Content strip by a strictly positive scalar: coefficients become coprime
/// integers and every sign is preserved (unlike `primitive_integer`, which
/// forces the lead positive and would corrupt a Sturm chain).
fn positive_primitive(f: &[Rational]) -> Vec<Rational> {
    let t = trim(f.to_vec());
    if t.is_empty() {
        return t;
    }
    let p = primitive_integer(&t);
    if rat_sign(t.last().unwrap()) != rat_sign(p.last().unwrap()) {
        neg(&p)
    } else {
        p
    }
}

/// Sturm chain of `f`. Chain elements are content-stripped with positive
/// scalars only, which keeps coefficients small without touching signs.
pub(crate) fn sturm_chain(f: &[Rational]) -> Vec<Vec<Rational>> {
    let f0 = primitive_integer(f);
    if f0.is_empty() {
        return vec![Vec::new()];
    }
    let mut chain = vec![f0.clone()];
    let f1 = positive_primitive(&derivative(&f0));
    if f1.is_empty() {
        return chain;
    }
    chain.push(f1);
    loop {
        let n = chain.len();
        let r = divrem(&chain[n - 2], &chain[n - 1]).1;
        if r.is_empty() {
            break;
        }
        chain.push(positive_primitive(&neg(&r)));
    }
    chain
}

fn sign_variations(chain: &[Vec<Rational>], t: &Rational) -> usize {
    let mut count = 0;
    let mut prev = 0i32;
    for p in chain {
        let s = rat_sign(&eval(p, t));
        if s != 0 {
            if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
        }
    }
    count
}

/// Number of distinct real roots of the chain's polynomial in `(lo, hi]`,
/// assuming `f(lo) != 0`.
pub(crate) fn count_roots(chain: &[Vec<Rational>], lo: &Rational, hi: &Rational) -> usize {
    sign_variations(chain, lo) - sign_variations(chain, hi)
}

/// Total count of distinct real roots.
pub(crate) fn count_real_roots(f: &[Rational]) -> usize {
    let sf = squarefree_part(f);
    match degree(&sf) {
        None | Some(0) => 0,
        _ => {
            let chain = sturm_chain(&sf);
            let b = root_bound(&sf);
            count_roots(&chain, &(-b.clone()), &b)
        }
    }
}

/// Isolates every distinct real root of `f` into disjoint intervals, sorted
/// ascending. Exact rational roots come back as point intervals; the rest as
/// open brackets whose endpoints are non-roots with a sign change between
/// them.
pub(crate) fn isolate_real_roots(f: &[Rational]) -> Vec<Interval> {
    let sf = squarefree_part(f);
    let d = match degree(&sf) {
        None | Some(0) => return Vec::new(),
        Some(d) => d,
    };
    if d == 1 {
        return vec![Interval::point(-&sf[0] / &sf[1])];
    }
    let chain = sturm_chain(&sf);
    let bound = root_bound(&sf);
    let mut out: Vec<Interval> = Vec::new();
    let mut stack = vec![(-bound.clone(), bound.clone())];
    while let Some((lo, hi)) = stack.pop() {
        let n = count_roots(&chain, &lo, &hi);
        match n {
            0 => {}
            1 => out.push(Interval::new(lo, hi)),
            _ => {
                let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
                if eval(&sf, &mid).is_zero() {
                    out.push(Interval::point(mid.clone()));
                    // Shrink a symmetric gap until it contains only this root,
                    // then recurse on the outside.
                    let mut delta = (&hi - &lo) / Rational::from_integer(BigInt::from(4));
                    loop {
                        let (a, b) = (&mid - &delta, &mid + &delta);
                        if !eval(&sf, &a).is_zero()
                            && !eval(&sf, &b).is_zero()
                            && count_roots(&chain, &a, &b) == 1
                        {
                            stack.push((lo.clone(), a));
                            stack.push((b, hi.clone()));
                            break;
                        }
                        delta /= Rational::from_integer(BigInt::from(2));
                    }
                } else {
                    stack.push((lo, mid.clone()));
                    stack.push((mid, hi));
                }
            }
        }
    }
    out.sort_by(|a, b| a.midpoint().cmp(&b.midpoint()));
    out
}

/// Bisects a one-root bracket down to the requested width. Point intervals
/// pass through; a midpoint that is an exact root collapses the bracket.
pub(crate) fn refine_to_width(f: &[Rational], iv: &Interval, width: &Rational) -> Interval {
    if iv.is_point() {
        return iv.clone();
    }
    let sf = squarefree_part(f);
    let mut lo = iv.lo().clone();
    let mut hi = iv.hi().clone();
    let mut s_lo = rat_sign(&eval(&sf, &lo));
    debug_assert!(s_lo != 0 && rat_sign(&eval(&sf, &hi)) == -s_lo);
    let two = Rational::from_integer(BigInt::from(2));
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        let s_mid = rat_sign(&eval(&sf, &mid));
        if s_mid == 0 {
            return Interval::point(mid);
        }
        if s_mid == s_lo {
            lo = mid;
            s_lo = s_mid;
        } else {
            hi = mid;
        }
    }
    Interval::new(lo, hi)
}

/// Convenience: isolate and refine all real roots to width `2^-precision`.
pub(crate) fn real_roots_refined(f: &[Rational], precision: u32) -> Vec<Interval> {
    let width = Rational::new(BigInt::one(), BigInt::from(2).pow(precision));
    isolate_real_roots(f)
        .iter()
        .map(|iv| refine_to_width(f, iv, &width))
        .collect()
}
