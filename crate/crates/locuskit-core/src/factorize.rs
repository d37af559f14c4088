//! Exact gcd, squarefree decomposition, and irreducible factorization over
//! the rationals for polynomials in one or two variables.
//!
//! gcds use subresultant remainder sequences recursing on the last variable.
//! Univariate factoring is Zassenhaus: factor modulo a word-size prime,
//! Hensel-lift past the Mignotte bound, recombine subsets with exact trial
//! division. Bivariate factoring substitutes a lucky rational for the second
//! variable (fixed search sequence 1, -1, 2, -2, ...), lifts the univariate
//! factors as power series in the shifted variable, and recombines the same
//! way. Everything is deterministic.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer as IntegerOps;
use num_traits::{One, Signed, Zero};

use crate::exact::Rational;
use crate::multipoly::{Monomial, MonomialOrder, PolyError, Polynomial, Var, VarContext};
use crate::{upoly, zpoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactorError {
    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,
    #[error("factorization implemented for at most two variables")]
    TooManyVariables,
    #[error("no substitution value kept degree and squarefreeness within {0} attempts")]
    NoLuckySubstitution(u32),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Irreducible factorization: `content * prod(factor^multiplicity)` equals
/// the input exactly. Factors are integer primitive with positive leading
/// coefficients, pairwise non-associate, ordered by total degree then
/// canonical text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub content: Rational,
    pub factors: Vec<(Polynomial, u32)>,
}

impl Factorization {
    /// Multiplies the factorization back out (test / assertion support).
    pub fn expand(&self) -> Result<Polynomial, PolyError> {
        let Some((first, _)) = self.factors.first() else {
            // pure constant
            panic!("expand needs at least one factor; use content directly");
        };
        let ctx = first.context().clone();
        let mut acc = Polynomial::constant(&ctx, MonomialOrder::DegRevLex, self.content.clone());
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = acc.mul(f)?;
            }
        }
        Ok(acc)
    }
}

fn lead_positive(p: Polynomial) -> Result<Polynomial, PolyError> {
    let q = p.normalize_integer_primitive()?;
    if q.leading().map(|(c, _)| c.is_negative()).unwrap_or(false) {
        Ok(q.neg())
    } else {
        Ok(q)
    }
}

/// Exact quotient `f / g` when `g` divides `f`, else `None`. Greedy leading
/// term division is complete for exact divisors under any monomial order.
pub fn exact_div(f: &Polynomial, g: &Polynomial) -> Option<Polynomial> {
    if g.is_zero() {
        return None;
    }
    let ctx = f.context().clone();
    let order = f.order();
    let g = g.with_order(order);
    let (gc, gm) = {
        let l = g.leading().unwrap();
        (l.0.clone(), l.1)
    };
    let mut rem = f.clone();
    let mut quo: Vec<(Rational, Monomial)> = Vec::new();
    while !rem.is_zero() {
        let (rc, rm) = {
            let l = rem.leading().unwrap();
            (l.0.clone(), l.1)
        };
        let delta = rm.div(&gm)?;
        let c = rc / &gc;
        rem = rem.sub_mul_term(&g, &c, &delta);
        quo.push((c, delta));
    }
    Some(Polynomial::from_terms(&ctx, order, quo))
}

/// Last (highest-index) variable appearing in either polynomial.
fn main_var(f: &Polynomial, g: Option<&Polynomial>) -> Option<Var> {
    let mask = f.vars_present() | g.map(|g| g.vars_present()).unwrap_or(0);
    if mask == 0 {
        None
    } else {
        Some(Var(31 - mask.leading_zeros() as usize))
    }
}

/// Dense coefficient vector of `f` viewed in `R[v]`, low to high.
pub(crate) fn coeffs_in(f: &Polynomial, v: Var) -> Vec<Polynomial> {
    let ctx = f.context().clone();
    let order = f.order();
    let d = f.degree_in(v) as usize;
    let mut buckets: Vec<Vec<(Rational, Monomial)>> = vec![Vec::new(); d + 1];
    for (c, m) in f.terms() {
        buckets[m.exp(v) as usize].push((c.clone(), strip_var(m, v)));
    }
    buckets
        .into_iter()
        .map(|t| Polynomial::from_terms(&ctx, order, t))
        .collect()
}

fn strip_var(m: &Monomial, v: Var) -> Monomial {
    let e = m.exp(v);
    if e == 0 {
        return *m;
    }
    let mut exps = [0u16; crate::multipoly::MAX_VARS];
    for i in 0..crate::multipoly::MAX_VARS {
        exps[i] = m.exp(Var(i));
    }
    exps[v.0] = 0;
    Monomial::from_exps(&exps).expect("smaller exponents")
}

fn assemble(coeffs: &[Polynomial], v: Var, ctx: &Arc<VarContext>, order: MonomialOrder) -> Polynomial {
    let mut terms: Vec<(Rational, Monomial)> = Vec::new();
    for (e, c) in coeffs.iter().enumerate() {
        for (cc, m) in c.terms() {
            let mono = Monomial::var(v, e as u16).expect("bounded exponent");
            terms.push((cc.clone(), m.mul(&mono)));
        }
    }
    Polynomial::from_terms(ctx, order, terms)
}

fn content_in(f: &Polynomial, v: Var) -> Result<Polynomial, PolyError> {
    let coeffs = coeffs_in(f, v);
    let mut g = Polynomial::zero(f.context(), f.order());
    for c in &coeffs {
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() { c.clone() } else { gcd_poly(&g, c)? };
        if g.is_constant() {
            break;
        }
    }
    lead_positive(g)
}

/// Pseudo-remainder over dense coefficient vectors: `lc(b)^(da-db+1) * a
/// mod b`. Scaling is uniform even when a coefficient is already zero so
/// the subresultant division lemma applies verbatim.
/// True when a specialization of the second variable certifies the two
/// v-primitive inputs coprime: any common divisor's image under w -> y0
/// divides both images, and choosing y0 off the zeros of pa's leading
/// coefficient preserves that divisor's v-degree, so a constant univariate
/// gcd forces the divisor itself to be constant. Bivariate inputs only;
/// anything else falls through to the remainder sequence.
fn coprime_by_specialization(pa: &Polynomial, pb: &Polynomial, v: Var) -> bool {
    let others = (pa.vars_present() | pb.vars_present()) & !(1u32 << v.0);
    if others.count_ones() != 1 {
        return false;
    }
    let w = Var(others.trailing_zeros() as usize);
    let Some(lc_a) = coeffs_in(pa, v).last().cloned() else {
        return false;
    };
    let mut probes = 0u32;
    for i in 0..64i64 {
        let y0 = if i == 0 {
            Rational::zero()
        } else if i % 2 == 1 {
            Rational::from(BigInt::from((i + 1) / 2))
        } else {
            Rational::from(BigInt::from(-(i / 2)))
        };
        let Ok(lc_val) = lc_a.substitute(w, &y0) else {
            return false;
        };
        if lc_val.is_zero() {
            continue;
        }
        let (Ok(ua), Ok(ub)) = (pa.substitute(w, &y0), pb.substitute(w, &y0)) else {
            return false;
        };
        let (Ok(da), Ok(db)) = (ua.univariate_coeffs(v), ub.univariate_coeffs(v)) else {
            return false;
        };
        if upoly::degree(&upoly::gcd(&da, &db)) == Some(0) {
            return true;
        }
        // a nonconstant image gcd proves nothing (specializations only
        // enlarge the gcd); small values often sit on degenerate fibers, so
        // allow a few retries before paying for the full sequence
        probes += 1;
        if probes >= 4 {
            return false;
        }
    }
    false
}

fn prem(a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    let da = a.len() - 1;
    let db = b.len() - 1;
    debug_assert!(db <= da && !b[db].is_zero());
    let lb = &b[db];
    let mut r: Vec<Polynomial> = a.to_vec();
    for k in (db..=da).rev() {
        let rk = r[k].clone();
        for item in r.iter_mut().take(k + 1) {
            *item = item.mul(lb).expect("same context");
        }
        if !rk.is_zero() {
            for j in 0..=db {
                let delta = rk.mul(&b[j]).expect("same context");
                r[k - db + j] = r[k - db + j].sub(&delta).expect("same context");
            }
        }
        debug_assert!(r[k].is_zero());
    }
    r.truncate(db);
    while r.last().map(|c| c.is_zero()).unwrap_or(false) {
        r.pop();
    }
    r
}

fn poly_pow(base: &Polynomial, e: usize) -> Polynomial {
    let mut acc = Polynomial::one(base.context(), base.order());
    for _ in 0..e {
        acc = acc.mul(base).expect("same context");
    }
    acc
}

/// Integer-primitive gcd with positive leading coefficient; `gcd(f, 0)`
/// normalizes `f`. Subresultant remainder sequences, recursing on the last
/// variable.
pub fn gcd_poly(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, PolyError> {
    if f.context() != g.context() {
        return Err(PolyError::ContextMismatch);
    }
    if f.is_zero() && g.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if f.is_zero() {
        return lead_positive(g.clone());
    }
    if g.is_zero() {
        return lead_positive(f.clone());
    }
    let ctx = f.context().clone();
    let order = f.order();
    let Some(v) = main_var(f, Some(g)) else {
        // both nonzero constants
        return Ok(Polynomial::one(&ctx, order));
    };

    let (mut a, mut b) = (f.clone(), g.with_order(order));
    if a.degree_in(v) < b.degree_in(v) {
        core::mem::swap(&mut a, &mut b);
    }
    if b.degree_in(v) == 0 {
        // gcd(f, g) with g free of v: gcd of g with the content of f
        let cf = content_in(&a, v)?;
        return gcd_poly(&cf, &b);
    }

    let cont_a = content_in(&a, v)?;
    let cont_b = content_in(&b, v)?;
    let pa = exact_div(&a, &cont_a).expect("content divides");
    let pb = exact_div(&b, &cont_b).expect("content divides");
    let cont_gcd = gcd_poly(&cont_a, &cont_b)?;

    if coprime_by_specialization(&pa, &pb, v) {
        return lead_positive(cont_gcd);
    }

    let mut ca = coeffs_in(&pa, v);
    let mut cb = coeffs_in(&pb, v);
    let one = Polynomial::one(&ctx, order);
    let mut gcoef = one.clone();
    let mut h = one.clone();
    // subresultant PRS; sign bookkeeping omitted since only divisibility
    // matters for a gcd
    let gv = loop {
        let delta = (ca.len() - 1) - (cb.len() - 1);
        let r = prem(&ca, &cb);
        if r.is_empty() {
            break assemble(&cb, v, &ctx, order);
        }
        if r.len() == 1 {
            // nonzero remainder free of v: primitive parts are coprime
            break one.clone();
        }
        let divisor = gcoef.mul(&poly_pow(&h, delta))?;
        let next: Vec<Polynomial> = r
            .iter()
            .map(|c| exact_div(c, &divisor).expect("subresultant division is exact"))
            .collect();
        ca = cb;
        cb = next;
        gcoef = ca.last().unwrap().clone();
        if delta >= 1 {
            h = exact_div(&poly_pow(&gcoef, delta), &poly_pow(&h, delta - 1))
                .expect("subresultant h update is exact");
        }
    };
    let gv = if gv.is_constant() {
        one
    } else {
        let cont = content_in(&gv, v)?;
        exact_div(&gv, &cont).expect("content divides")
    };
    lead_positive(cont_gcd.mul(&gv)?)
}

/// Product of the distinct irreducible factors: same zero set, squarefree.
pub fn squarefree_part(f: &Polynomial) -> Result<Polynomial, PolyError> {
    let parts = squarefree(f).map_err(|e| match e {
        FactorError::Poly(p) => p,
        _ => PolyError::ZeroPolynomial,
    })?;
    let ctx = f.context().clone();
    let mut acc = Polynomial::one(&ctx, f.order());
    for (p, _) in &parts.factors {
        acc = acc.mul(p)?;
    }
    lead_positive(acc)
}

/// Squarefree decomposition (Yun's algorithm on the last variable, with the
/// content handled recursively). Parts are pairwise coprime and squarefree.
pub fn squarefree(f: &Polynomial) -> Result<Factorization, FactorError> {
    if f.is_zero() {
        return Err(FactorError::ZeroPolynomial);
    }
    let ctx = f.context().clone();
    let order = f.order();
    let Some(v) = main_var(f, None) else {
        let c = f.terms()[0].0.clone();
        return Ok(Factorization { content: c, factors: Vec::new() });
    };
    let cont = content_in(f, v)?;
    let pp = exact_div(f, &cont).expect("content divides");

    let mut factors: Vec<(Polynomial, u32)> = Vec::new();
    // recurse on the (variable-free-in-v) content
    let content_fact = squarefree(&cont)?;
    let mut content_scalar = content_fact.content.clone();
    factors.extend(content_fact.factors);

    // Yun on the primitive part
    let df = pp.derive(v)?;
    let g0 = gcd_poly(&pp, &df)?;
    if g0.is_constant() {
        let unit = lead_positive(pp.clone())?;
        content_scalar = &content_scalar * &ratio_of(&pp, &unit);
        factors.push((unit, 1));
    } else {
        let mut w = exact_div(&pp, &g0).expect("gcd divides");
        let mut z = exact_div(&df, &g0)
            .expect("gcd divides derivative")
            .sub(&w.derive(v)?)
            .expect("same context");
        let mut mult = 1u32;
        let mut running_unit = Polynomial::one(&ctx, order);
        while !w.is_constant() {
            let gi = gcd_poly(&w, &z)?;
            if !gi.is_constant() {
                let part = lead_positive(gi.clone())?;
                factors.push((part.clone(), mult));
                for _ in 0..mult {
                    running_unit = running_unit.mul(&part)?;
                }
            }
            w = exact_div(&w, &gi).expect("Yun division exact");
            z = exact_div(&z, &gi)
                .expect("Yun division exact")
                .sub(&w.derive(v)?)
                .expect("same context");
            mult += 1;
        }
        let q = exact_div(&pp, &running_unit).expect("squarefree parts reconstruct the input");
        debug_assert!(q.is_constant());
        content_scalar = &content_scalar * &q.terms()[0].0;
    }

    sort_factors(&mut factors);
    Ok(Factorization { content: content_scalar, factors })
}

/// Exact scalar `f / g` for associate polynomials.
fn ratio_of(f: &Polynomial, g: &Polynomial) -> Rational {
    let (fc, fm) = f.leading().expect("nonzero");
    let (gc, gm) = g.leading().expect("nonzero");
    debug_assert_eq!(fm, gm);
    let _ = (fm, gm);
    fc / gc
}

fn sort_factors(factors: &mut [(Polynomial, u32)]) {
    factors.sort_by(|a, b| {
        a.0.total_degree()
            .cmp(&b.0.total_degree())
            .then_with(|| a.0.canonical_text().cmp(&b.0.canonical_text()))
    });
}

/// Fixed odd primes below 2^31 for modular factoring.
const FACTOR_PRIMES: [u64; 10] = [
    2_147_483_647,
    2_147_483_629,
    2_147_483_587,
    2_147_483_579,
    2_147_483_563,
    2_147_483_549,
    2_147_483_543,
    2_147_483_497,
    2_147_483_489,
    2_147_483_477,
];

/// Fixed seed for the equal-degree splitting generator: determinism across
/// runs matters more than the particular constant.
const CZ_SEED: u64 = 0x6c6f_6375_736b_6974;

/// Irreducible factorization of a polynomial in a single variable.
pub fn factor_univariate(f: &Polynomial) -> Result<Factorization, FactorError> {
    if f.is_zero() {
        return Err(FactorError::ZeroPolynomial);
    }
    let ctx = f.context().clone();
    let order = f.order();
    let Some(v) = main_var(f, None) else {
        return Ok(Factorization { content: f.terms()[0].0.clone(), factors: Vec::new() });
    };
    if f.vars_present().count_ones() > 1 {
        return Err(FactorError::Poly(PolyError::NotUnivariate));
    }

    let sq = squarefree(f)?;
    let mut content = sq.content.clone();
    let mut factors: Vec<(Polynomial, u32)> = Vec::new();
    for (part, mult) in &sq.factors {
        let coeffs = part.univariate_coeffs(v)?;
        for piece in factor_squarefree_rational(&coeffs) {
            let poly = Polynomial::from_univariate(&ctx, order, v, &piece)?;
            let unit = lead_positive(poly.clone())?;
            let scale = ratio_of(&poly, &unit);
            for _ in 0..*mult {
                content = &content * &scale;
            }
            factors.push((unit, *mult));
        }
    }
    sort_factors(&mut factors);
    Ok(Factorization { content, factors })
}

/// Factors a squarefree rational univariate into irreducible primitive
/// integer pieces (product equals the input up to a rational scalar).
fn factor_squarefree_rational(f: &[Rational]) -> Vec<Vec<Rational>> {
    let prim = upoly::primitive_integer(f);
    let d = upoly::degree(&prim).unwrap_or(0);
    if d <= 1 {
        return vec![prim];
    }
    let ints: Vec<BigInt> = prim.iter().map(|c| c.numer().clone()).collect();
    let pieces = zassenhaus(&ints);
    pieces
        .into_iter()
        .map(|p| p.into_iter().map(Rational::from_integer).collect())
        .collect()
}

fn bigint_mod_u64(x: &BigInt, p: u64) -> u64 {
    let m = x.mod_floor(&BigInt::from(p));
    let (_, digits) = m.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

/// Zassenhaus factorization of a primitive squarefree integer polynomial of
/// degree >= 2.
fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    let lc = f[n].clone();

    // Prime choice: among the first three usable primes, the one giving the
    // fewest modular factors (first wins ties).
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut seen = 0;
    for &p in FACTOR_PRIMES.iter() {
        if bigint_mod_u64(&lc, p) == 0 {
            continue;
        }
        let fp: Vec<u64> = f.iter().map(|c| bigint_mod_u64(c, p)).collect();
        if !zpoly::is_squarefree(&fp, p) {
            continue;
        }
        let factors = zpoly::factor_squarefree(&fp, p, CZ_SEED);
        let count = factors.len();
        if best.as_ref().map(|(_, b)| count < b.len()).unwrap_or(true) {
            best = Some((p, factors));
        }
        seen += 1;
        if seen >= 3 || count == 1 {
            break;
        }
    }
    let (p, modular) = best.expect("squarefree integer polynomial has usable primes");
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }

    // Lift bound: coefficients of any factor of f times lc stay below
    // 2^n * |f|_2 * |lc| (Mignotte); double it for symmetric representatives.
    let norm2_sq: BigInt = f.iter().map(|c| c * c).sum();
    let norm2 = norm2_sq.sqrt() + BigInt::one();
    let bound: BigInt = (BigInt::one() << n) * norm2 * lc.abs() * BigInt::from(2u32);
    let mut e = 1u32;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    while modulus <= bound {
        modulus *= &pb;
        e += 1;
    }

    let lifted = hensel_tree(f, &modular, p, e);
    recombine(f, lifted, &modulus)
}

// --- arithmetic on dense BigInt polynomials modulo m ---

fn btrim(mut f: Vec<BigInt>) -> Vec<BigInt> {
    while f.last().map(Zero::is_zero).unwrap_or(false) {
        f.pop();
    }
    f
}

fn bmod(f: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    btrim(f.iter().map(|c| c.mod_floor(m)).collect())
}

fn bmul(f: &[BigInt], g: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    bmod(&out, m)
}

fn badd(f: &[BigInt], g: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = f.len().max(g.len());
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        let a = f.get(i).cloned().unwrap_or_else(BigInt::zero);
        let b = g.get(i).cloned().unwrap_or_else(BigInt::zero);
        out[i] = (a + b).mod_floor(m);
    }
    btrim(out)
}

fn bsub(f: &[BigInt], g: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = f.len().max(g.len());
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        let a = f.get(i).cloned().unwrap_or_else(BigInt::zero);
        let b = g.get(i).cloned().unwrap_or_else(BigInt::zero);
        out[i] = (a - b).mod_floor(m);
    }
    btrim(out)
}

/// Division by a monic polynomial, coefficients mod m.
fn bdivrem_monic(f: &[BigInt], v: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let dv = v.len() - 1;
    debug_assert!(v[dv].is_one());
    let mut rem = f.to_vec();
    let mut quo = vec![BigInt::zero(); rem.len().saturating_sub(dv)];
    while rem.len() > dv {
        let k = rem.len() - 1;
        let c = rem[k].clone();
        if !c.is_zero() {
            quo[k - dv] = c.clone();
            for i in 0..=dv {
                let val = (&rem[k - dv + i] - &c * &v[i]).mod_floor(m);
                rem[k - dv + i] = val;
            }
        }
        rem.pop();
        rem = btrim(rem);
        if rem.len() <= dv {
            break;
        }
    }
    (btrim(quo), btrim(rem))
}

fn binv_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Quadratic Hensel lifting of a monic coprime pair, from modulus p up to
/// p^e. `fhat` yields the monic target modulo a requested power of p.
#[allow(clippy::too_many_arguments)]
fn lift_pair(
    fhat: &dyn Fn(u32) -> Vec<BigInt>,
    mut u: Vec<BigInt>,
    mut v: Vec<BigInt>,
    mut s: Vec<BigInt>,
    mut t: Vec<BigInt>,
    p: u64,
    e: u32,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let pb = BigInt::from(p);
    let mut exp = 1u32;
    while exp < e {
        let next = (exp * 2).min(e);
        let m = pb.pow(next);
        let f = fhat(next);
        let err = bsub(&f, &bmul(&u, &v, &m), &m);
        let (q, r) = bdivrem_monic(&bmul(&s, &err, &m), &v, &m);
        u = badd(&u, &badd(&bmul(&t, &err, &m), &bmul(&q, &u, &m), &m), &m);
        v = badd(&v, &r, &m);
        // refresh the Bezout pair
        let mut b = badd(&bmul(&s, &u, &m), &bmul(&t, &v, &m), &m);
        if b.is_empty() {
            b = vec![BigInt::zero()];
        }
        b[0] -= BigInt::one();
        let b = bmod(&b, &m);
        let (c, d) = bdivrem_monic(&bmul(&s, &b, &m), &v, &m);
        s = bsub(&s, &d, &m);
        t = bsub(&t, &badd(&bmul(&t, &b, &m), &bmul(&c, &u, &m), &m), &m);
        exp = next;
    }
    (u, v)
}

/// Lifts all monic modular factors of a primitive integer polynomial to
/// modulus p^e by recursive pair splitting.
fn hensel_tree(f: &[BigInt], modular: &[Vec<u64>], p: u64, e: u32) -> Vec<Vec<BigInt>> {
    let pb = BigInt::from(p);
    let lc = f.last().unwrap().clone();
    let fhat_root = move |exp: u32, f: &[BigInt]| -> Vec<BigInt> {
        let m = pb.pow(exp);
        let linv = binv_mod(&lc.mod_floor(&m), &m);
        btrim(f.iter().map(|c| (c * &linv).mod_floor(&m)).collect())
    };
    let froot: Vec<BigInt> = f.to_vec();
    lift_branch(&move |exp| fhat_root(exp, &froot), modular, p, e)
}

fn lift_branch(
    fhat: &dyn Fn(u32) -> Vec<BigInt>,
    modular: &[Vec<u64>],
    p: u64,
    e: u32,
) -> Vec<Vec<BigInt>> {
    if modular.len() == 1 {
        return vec![fhat(e)];
    }
    let (left, right) = modular.split_at(modular.len() / 2);
    let mut u0 = vec![1u64];
    for g in left {
        u0 = zpoly::poly_mul(&u0, g, p);
    }
    let mut v0 = vec![1u64];
    for g in right {
        v0 = zpoly::poly_mul(&v0, g, p);
    }
    let (g, s0, t0) = zpoly::ext_gcd_mod_p(&u0, &v0, p);
    debug_assert_eq!(g, vec![1]);
    let to_big = |f: &[u64]| -> Vec<BigInt> { f.iter().map(|&c| BigInt::from(c)).collect() };
    let (u, v) = lift_pair(fhat, to_big(&u0), to_big(&v0), to_big(&s0), to_big(&t0), p, e);
    let (lu, lv) = (u.clone(), v.clone());
    let mut out = lift_branch(
        &move |exp: u32| {
            let m = BigInt::from(p).pow(exp);
            bmod(&lu, &m)
        },
        left,
        p,
        e,
    );
    out.extend(lift_branch(
        &move |exp: u32| {
            let m = BigInt::from(p).pow(exp);
            bmod(&lv, &m)
        },
        right,
        p,
        e,
    ));
    out
}

fn symmetric(f: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / BigInt::from(2);
    btrim(
        f.iter()
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

fn int_primitive(f: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for c in f {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return Vec::new();
    }
    if f.last().map(|c| c.is_negative()).unwrap_or(false) {
        g = -g;
    }
    f.iter().map(|c| c / &g).collect()
}

fn to_rational_vec(f: &[BigInt]) -> Vec<Rational> {
    f.iter().cloned().map(Rational::from_integer).collect()
}

/// Advances `combo` to the next size-`|combo|` index subset of `0..n` in
/// lexicographic order; false once exhausted.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let d = combo.len();
    let mut i = d;
    while i > 0 {
        i -= 1;
        if combo[i] != i + n - d {
            combo[i] += 1;
            for j in i + 1..d {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Subset recombination with exact trial division, cardinality ascending.
fn recombine(f: &[BigInt], lifted: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let mut pool: Vec<Vec<BigInt>> = lifted;
    let mut remaining: Vec<Rational> = to_rational_vec(f);
    let mut found: Vec<Vec<BigInt>> = Vec::new();
    let mut d = 1usize;
    while 2 * d <= pool.len() {
        let mut combo: Vec<usize> = (0..d).collect();
        loop {
            let lc = {
                let dd = upoly::degree(&remaining).expect("remaining stays nonzero");
                remaining[dd].numer().clone()
            };
            let mut prod: Vec<BigInt> = vec![lc];
            for &i in &combo {
                prod = bmul(&prod, &pool[i], modulus);
            }
            let cand = int_primitive(&symmetric(&prod, modulus));
            let cand_q = to_rational_vec(&cand);
            if upoly::degree(&cand_q).unwrap_or(0) >= 1 && upoly::divides(&cand_q, &remaining) {
                remaining = upoly::divrem(&remaining, &cand_q).0;
                found.push(cand);
                for &i in combo.iter().rev() {
                    pool.remove(i);
                }
                if 2 * d > pool.len() {
                    break;
                }
                combo = (0..d).collect();
                continue;
            }
            if !next_combination(&mut combo, pool.len()) {
                break;
            }
        }
        d += 1;
    }
    if upoly::degree(&remaining).unwrap_or(0) >= 1 {
        let prim = upoly::primitive_integer(&remaining);
        found.push(prim.iter().map(|c| c.numer().clone()).collect());
    }
    found
}

// --- bivariate factorization via power-series Hensel lifting ---

type Series = Vec<Rational>; // truncated power series in s, low to high

fn ser_fit(a: &mut Series, k: usize) {
    a.truncate(k);
    while a.len() < k {
        a.push(Rational::zero());
    }
}

fn ser_add(a: &Series, b: &Series, k: usize) -> Series {
    let mut out = vec![Rational::zero(); k];
    for i in 0..k {
        let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
        let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
        out[i] = x + y;
    }
    out
}

fn ser_sub(a: &Series, b: &Series, k: usize) -> Series {
    let mut out = vec![Rational::zero(); k];
    for i in 0..k {
        let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
        let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
        out[i] = x - y;
    }
    out
}

fn ser_mul(a: &Series, b: &Series, k: usize) -> Series {
    let mut out = vec![Rational::zero(); k];
    for i in 0..a.len().min(k) {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..b.len().min(k - i) {
            if !b[j].is_zero() {
                out[i + j] += &a[i] * &b[j];
            }
        }
    }
    out
}

fn ser_is_zero(a: &Series) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Multiplicative inverse of a unit series (constant term nonzero).
fn ser_inv(a: &Series, k: usize) -> Series {
    let inv0 = a[0].recip();
    let mut out = vec![Rational::zero(); k];
    out[0] = inv0.clone();
    for j in 1..k {
        let mut acc = Rational::zero();
        for i in 1..=j.min(a.len() - 1) {
            acc += &a[i] * &out[j - i];
        }
        out[j] = -acc * &inv0;
    }
    out
}

type SPoly = Vec<Series>; // dense in x, low to high

fn sp_trim(f: &mut SPoly) {
    while f.last().map(|c| ser_is_zero(c)).unwrap_or(false) {
        f.pop();
    }
}

fn sp_mul(f: &SPoly, g: &SPoly, k: usize) -> SPoly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![vec![Rational::zero(); k]; f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            let prod = ser_mul(a, b, k);
            out[i + j] = ser_add(&out[i + j], &prod, k);
        }
    }
    let mut out = out;
    sp_trim(&mut out);
    out
}

fn sp_addsub(f: &SPoly, g: &SPoly, k: usize, sub: bool) -> SPoly {
    let n = f.len().max(g.len());
    let empty: Series = Vec::new();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let a = f.get(i).unwrap_or(&empty);
        let b = g.get(i).unwrap_or(&empty);
        out.push(if sub { ser_sub(a, b, k) } else { ser_add(a, b, k) });
    }
    sp_trim(&mut out);
    out
}

/// Division by an x-monic series polynomial.
fn sp_divrem_monic(f: &SPoly, v: &SPoly, k: usize) -> (SPoly, SPoly) {
    let dv = v.len() - 1;
    let mut rem: SPoly = f.clone();
    sp_trim(&mut rem);
    let mut quo: SPoly = vec![vec![Rational::zero(); k]; rem.len().saturating_sub(dv)];
    while rem.len() > dv {
        let kk = rem.len() - 1;
        let c = rem[kk].clone();
        if !ser_is_zero(&c) {
            quo[kk - dv] = ser_add(&quo[kk - dv], &c, k);
            for i in 0..=dv {
                let delta = ser_mul(&c, &v[i], k);
                rem[kk - dv + i] = ser_sub(&rem[kk - dv + i], &delta, k);
            }
        }
        rem.pop();
        sp_trim(&mut rem);
    }
    sp_trim(&mut quo);
    (quo, rem)
}

fn sp_truncate(f: &SPoly, k: usize) -> SPoly {
    let mut out: SPoly = f
        .iter()
        .map(|c| {
            let mut c = c.clone();
            ser_fit(&mut c, k);
            c
        })
        .collect();
    sp_trim(&mut out);
    out
}

/// One quadratic series-Hensel lift chain for a monic coprime pair.
fn sp_lift_pair(
    fhat: &SPoly, // monic target at full precision K
    mut u: SPoly,
    mut v: SPoly,
    mut s: SPoly,
    mut t: SPoly,
    kfull: usize,
) -> (SPoly, SPoly) {
    let mut k = 1usize;
    while k < kfull {
        let next = (k * 2).min(kfull);
        let f = sp_truncate(fhat, next);
        u = sp_truncate(&u, next);
        v = sp_truncate(&v, next);
        s = sp_truncate(&s, next);
        t = sp_truncate(&t, next);
        let err = sp_addsub(&f, &sp_mul(&u, &v, next), next, true);
        let (q, r) = sp_divrem_monic(&sp_mul(&s, &err, next), &v, next);
        u = sp_addsub(
            &u,
            &sp_addsub(&sp_mul(&t, &err, next), &sp_mul(&q, &u, next), next, false),
            next,
            false,
        );
        v = sp_addsub(&v, &r, next, false);
        let mut b = sp_addsub(&sp_mul(&s, &u, next), &sp_mul(&t, &v, next), next, false);
        if b.is_empty() {
            b = vec![vec![Rational::zero(); next]];
        }
        b[0][0] -= Rational::one();
        sp_trim(&mut b);
        let (c, d) = sp_divrem_monic(&sp_mul(&s, &b, next), &v, next);
        s = sp_addsub(&s, &d, next, true);
        t = sp_addsub(
            &t,
            &sp_addsub(&sp_mul(&t, &b, next), &sp_mul(&c, &u, next), next, false),
            next,
            true,
        );
        k = next;
    }
    (u, v)
}

fn sp_lift_tree(fhat: &SPoly, base: &[Vec<Rational>], k: usize) -> Vec<SPoly> {
    if base.len() == 1 {
        return vec![sp_truncate(fhat, k)];
    }
    let (left, right) = base.split_at(base.len() / 2);
    let mut u0: Vec<Rational> = vec![Rational::one()];
    for g in left {
        u0 = upoly::mul(&u0, g);
    }
    let mut v0: Vec<Rational> = vec![Rational::one()];
    for g in right {
        v0 = upoly::mul(&v0, g);
    }
    let (g, s0, t0) = upoly::ext_gcd(&u0, &v0);
    debug_assert_eq!(upoly::degree(&g), Some(0));
    let lift_in = |f: &[Rational]| -> SPoly {
        f.iter()
            .map(|c| {
                let mut s = vec![c.clone()];
                ser_fit(&mut s, k);
                s
            })
            .collect()
    };
    let (u, v) = sp_lift_pair(fhat, lift_in(&u0), lift_in(&v0), lift_in(&s0), lift_in(&t0), k);
    let mut out = sp_lift_tree(&u, left, k);
    out.extend(sp_lift_tree(&v, right, k));
    out
}

/// Full irreducible factorization of a polynomial in at most two variables.
pub fn factor_bivariate(f: &Polynomial) -> Result<Factorization, FactorError> {
    if f.is_zero() {
        return Err(FactorError::ZeroPolynomial);
    }
    if f.vars_present().count_ones() <= 1 {
        return factor_univariate(f);
    }
    if f.vars_present().count_ones() > 2 {
        return Err(FactorError::TooManyVariables);
    }
    let present: Vec<Var> = f
        .context()
        .vars()
        .filter(|v| f.degree_in(*v) > 0)
        .collect();
    let (vx, vy) = (present[0], present[1]);

    let sq = squarefree(f)?;
    let mut content = sq.content.clone();
    let mut factors: Vec<(Polynomial, u32)> = Vec::new();
    for (part, mult) in &sq.factors {
        if part.degree_in(vx) == 0 || part.degree_in(vy) == 0 {
            // univariate in one of the variables: delegate
            let sub = factor_univariate(part)?;
            for _ in 0..*mult {
                content = &content * &sub.content;
            }
            for (g, m) in sub.factors {
                factors.push((g, m * mult));
            }
            continue;
        }
        let irr = factor_squarefree_bivariate(part, vx, vy)?;
        let mut prod = Polynomial::one(f.context(), f.order());
        let mut units = Vec::with_capacity(irr.len());
        for g in irr {
            let unit = lead_positive(g)?;
            prod = prod.mul(&unit)?;
            units.push(unit);
        }
        let q = exact_div(part, &prod).expect("irreducible parts reconstruct the input");
        debug_assert!(q.is_constant());
        let scale = q.terms()[0].0.clone();
        for _ in 0..*mult {
            content = &content * &scale;
        }
        for unit in units {
            factors.push((unit, *mult));
        }
    }
    sort_factors(&mut factors);
    Ok(Factorization { content, factors })
}

/// Irreducible factors of a squarefree polynomial genuinely involving both
/// variables (product equals input up to a rational scalar).
fn factor_squarefree_bivariate(
    f: &Polynomial,
    vx: Var,
    vy: Var,
) -> Result<Vec<Polynomial>, FactorError> {
    let ctx = f.context().clone();
    let order = f.order();

    // split off the content in y so f is primitive as a poly in x over Q[y]
    let cont = content_in(f, vx)?;
    let mut out: Vec<Polynomial> = Vec::new();
    if !cont.is_constant() {
        let sub = factor_univariate(&cont)?;
        for (g, m) in sub.factors {
            debug_assert_eq!(m, 1, "content of a squarefree poly is squarefree");
            out.push(g);
        }
    }
    let prim = exact_div(f, &cont).expect("content divides");
    if prim.degree_in(vx) == 0 {
        return Ok(out);
    }

    let nx = prim.degree_in(vx);
    let lc_y = coeffs_in(&prim, vx)[nx as usize].clone();

    // lucky substitution search: y0 = 1, -1, 2, -2, ...
    let mut found: Option<(Rational, Vec<Rational>)> = None;
    for attempt in 0..64u32 {
        let mag = (attempt / 2 + 1) as i64;
        let y0 = crate::exact::rat(if attempt % 2 == 0 { mag } else { -mag }, 1);
        let lcv = lc_y.substitute(vy, &y0)?;
        if lcv.is_zero() {
            continue;
        }
        let image = prim.substitute(vy, &y0)?;
        let coeffs = image.univariate_coeffs(vx)?;
        let sf = upoly::gcd(&coeffs, &upoly::derivative(&coeffs));
        if upoly::degree(&sf) == Some(0) {
            found = Some((y0, coeffs));
            break;
        }
    }
    let Some((y0, image)) = found else {
        return Err(FactorError::NoLuckySubstitution(64));
    };

    let pieces = factor_squarefree_rational(&image);
    if pieces.len() == 1 {
        out.push(prim);
        return Ok(out);
    }

    // shift so the substitution point is s = 0: F(x, s) = prim(x, y0 + s)
    let shifted = prim.shift(vy, &y0)?;
    let ny = prim.degree_in(vy) as usize;
    let k = ny + lc_y.degree_in(vy) as usize + 1;

    // dense (x, s) layout with series coefficients
    let mut fs: SPoly = vec![vec![Rational::zero(); k]; nx as usize + 1];
    for (c, m) in shifted.terms() {
        let ex = m.exp(vx) as usize;
        let es = m.exp(vy) as usize;
        if es < k {
            fs[ex][es] = c.clone();
        }
    }
    let lam = fs[nx as usize].clone();
    let lam_inv = ser_inv(&lam, k);
    let fhat: SPoly = fs.iter().map(|c| ser_mul(c, &lam_inv, k)).collect();

    let monic_pieces: Vec<Vec<Rational>> = pieces.iter().map(|p| upoly::monic(p)).collect();
    let lifted = sp_lift_tree(&fhat, &monic_pieces, k);

    // recombination against the original primitive part
    let n_pool = lifted.len();
    let mut used = vec![false; n_pool];
    let mut remaining = prim.clone();
    let mut d = 1usize;
    while d <= n_pool {
        let avail: Vec<usize> = (0..n_pool).filter(|&i| !used[i]).collect();
        if d > avail.len() {
            break;
        }
        let mut progressed = false;
        let mut combo: Vec<usize> = (0..d).collect();
        'combos: loop {
            // product of chosen lifted factors, scaled by lc
            let mut prod: SPoly = lam.iter().map(|c| vec![c.clone()]).collect::<Vec<_>>();
            prod = sp_truncate(&prod, k);
            if prod.is_empty() {
                prod = vec![vec![Rational::zero(); k]];
            }
            for &ci in &combo {
                prod = sp_mul(&prod, &lifted[avail[ci]], k);
            }
            // convert to a polynomial in (x, y)
            let mut terms: Vec<(Rational, Monomial)> = Vec::new();
            for (ex, ser) in prod.iter().enumerate() {
                for (es, c) in ser.iter().enumerate() {
                    if !c.is_zero() {
                        let mono = Monomial::from_exps(&{
                            let mut e = vec![0u16; ctx.len()];
                            e[vx.0] = ex as u16;
                            e[vy.0] = es as u16;
                            e
                        })
                        .expect("bounded");
                        terms.push((c.clone(), mono));
                    }
                }
            }
            let cand_s = Polynomial::from_terms(&ctx, order, terms);
            let cand_y = cand_s.shift(vy, &(-y0.clone()))?;
            if !cand_y.is_zero() {
                let ccont = content_in(&cand_y, vx)?;
                let cand = exact_div(&cand_y, &ccont).expect("content divides");
                if cand.total_degree() > 0 {
                    if let Some(rest) = exact_div(&remaining, &cand) {
                        out.push(cand);
                        remaining = rest;
                        for &ci in &combo {
                            used[avail[ci]] = true;
                        }
                        progressed = true;
                        break 'combos;
                    }
                }
            }
            if !next_combination(&mut combo, avail.len()) {
                break 'combos;
            }
        }
        if !progressed {
            d += 1;
        } else if remaining.total_degree() == 0 {
            break;
        }
    }
    if remaining.total_degree() > 0 {
        out.push(remaining);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn ctx_xy() -> Arc<VarContext> {
        VarContext::new(["x", "y"]).unwrap()
    }

    fn var(ctx: &Arc<VarContext>, name: &str) -> Polynomial {
        Polynomial::var(ctx, MonomialOrder::DegRevLex, ctx.index_of(name).unwrap()).unwrap()
    }

    #[test]
    fn gcd_examples() {
        let ctx = ctx_xy();
        let x = var(&ctx, "x");
        let y = var(&ctx, "y");
        let f = x.pow(2).sub(&y.pow(2)).unwrap();
        let g = x.sub(&y).unwrap();
        assert_eq!(gcd_poly(&f, &g).unwrap().canonical_text(), "x - y");
        assert_eq!(gcd_poly(&x, &y).unwrap().canonical_text(), "1");
        let zero = Polynomial::zero(&ctx, MonomialOrder::DegRevLex);
        let h = f.scale(&rat(-3, 7));
        assert_eq!(gcd_poly(&h, &zero).unwrap().canonical_text(), "x^2 - y^2");
        assert!(gcd_poly(&zero, &zero).is_err());
    }

    #[test]
    fn gcd_with_shared_octic_factor() {
        let ctx = ctx_xy();
        let x = var(&ctx, "x");
        let y = var(&ctx, "y");
        // gcd(q*r, q*s) = q for pairwise coprime q, r, s
        let q = x.pow(3).add(&y.pow(2)).unwrap().sub(&Polynomial::one(&ctx, MonomialOrder::DegRevLex)).unwrap();
        let r = x.pow(2).add(&y.pow(2)).unwrap();
        let s = x.sub(&y).unwrap();
        let f = q.mul(&r).unwrap();
        let g = q.mul(&s).unwrap();
        let d = gcd_poly(&f, &g).unwrap();
        assert_eq!(d, lead_positive(q).unwrap());
    }

    #[test]
    fn squarefree_examples() {
        let ctx = ctx_xy();
        let x = var(&ctx, "x");
        let y = var(&ctx, "y");
        // x^2 y -> [(x, 2), (y, 1)]
        let f = x.pow(2).mul(&y).unwrap();
        let sq = squarefree(&f).unwrap();
        let texts: Vec<(String, u32)> = sq
            .factors
            .iter()
            .map(|(p, m)| (p.canonical_text(), *m))
            .collect();
        assert_eq!(texts, [(String::from("x"), 2), (String::from("y"), 1)]);

        // already squarefree
        let g = x.pow(2).add(&y.pow(2)).unwrap();
        let sq = squarefree(&g).unwrap();
        assert_eq!(sq.factors.len(), 1);
        assert_eq!(sq.factors[0].0.canonical_text(), "x^2 + y^2");
        assert_eq!(sq.factors[0].1, 1);

        // (x - y)^3 (x + y)
        let d = x.sub(&y).unwrap();
        let s = x.add(&y).unwrap();
        let h = d.pow(3).mul(&s).unwrap();
        let sq = squarefree(&h).unwrap();
        let texts: Vec<(String, u32)> = sq
            .factors
            .iter()
            .map(|(p, m)| (p.canonical_text(), *m))
            .collect();
        assert_eq!(
            texts,
            [(String::from("x + y"), 1), (String::from("x - y"), 3)]
        );
        // reconstruction
        assert_eq!(sq.expand().unwrap(), h);
    }

    #[test]
    fn squarefree_part_collapses_multiplicity() {
        let ctx = ctx_xy();
        let x = var(&ctx, "x");
        let y = var(&ctx, "y");
        let base = y.pow(2).sub(&x).unwrap();
        let f = base.pow(2).mul(&x).unwrap();
        let sf = squarefree_part(&f).unwrap();
        let expect = base.mul(&x).unwrap().normalize_integer_primitive().unwrap();
        assert_eq!(sf, expect);
    }

    #[test]
    fn univariate_factor_examples() {
        let ctx = VarContext::new(["t"]).unwrap();
        let t = Polynomial::var(&ctx, MonomialOrder::DegRevLex, Var(0)).unwrap();
        let one = Polynomial::one(&ctx, MonomialOrder::DegRevLex);

        let f = t.pow(2).sub(&one).unwrap();
        let fac = factor_univariate(&f).unwrap();
        let texts: Vec<String> = fac.factors.iter().map(|(p, _)| p.canonical_text()).collect();
        assert_eq!(texts, ["t + 1", "t - 1"]);
        assert_eq!(fac.expand().unwrap(), f);

        let g = t.pow(2).add(&one).unwrap();
        let fac = factor_univariate(&g).unwrap();
        assert_eq!(fac.factors.len(), 1);
        assert_eq!(fac.factors[0].0, g);

        // minimal polynomial of sqrt(2) + sqrt(3): irreducible quartic
        let h = t
            .pow(4)
            .sub(&t.pow(2).scale(&rat(10, 1)))
            .unwrap()
            .add(&one)
            .unwrap();
        let fac = factor_univariate(&h).unwrap();
        assert_eq!(fac.factors.len(), 1);
        assert_eq!(fac.factors[0].0, h);
    }

    #[test]
    fn univariate_factor_with_multiplicity_and_content() {
        let ctx = VarContext::new(["t"]).unwrap();
        let t = Polynomial::var(&ctx, MonomialOrder::DegRevLex, Var(0)).unwrap();
        let one = Polynomial::one(&ctx, MonomialOrder::DegRevLex);
        // 6 (t-1)^2 (t+2) / 5
        let f = t
            .sub(&one)
            .unwrap()
            .pow(2)
            .mul(&t.add(&one.scale(&rat(2, 1))).unwrap())
            .unwrap()
            .scale(&rat(6, 5));
        let fac = factor_univariate(&f).unwrap();
        assert_eq!(fac.content, rat(6, 5));
        let texts: Vec<(String, u32)> = fac
            .factors
            .iter()
            .map(|(p, m)| (p.canonical_text(), *m))
            .collect();
        assert_eq!(
            texts,
            [(String::from("t + 2"), 1), (String::from("t - 1"), 2)]
        );
        assert_eq!(fac.expand().unwrap(), f);
    }

    #[test]
    fn univariate_factor_degree_six_mixture() {
        let ctx = VarContext::new(["t"]).unwrap();
        let t = Polynomial::var(&ctx, MonomialOrder::DegRevLex, Var(0)).unwrap();
        let one = Polynomial::one(&ctx, MonomialOrder::DegRevLex);
        // (t^2+1)(t^2-2)(2t+3)
        let f = t.pow(2).add(&one).unwrap()
            .mul(&t.pow(2).sub(&one.scale(&rat(2, 1))).unwrap()).unwrap()
            .mul(&t.scale(&rat(2, 1)).add(&one.scale(&rat(3, 1))).unwrap()).unwrap();
        let fac = factor_univariate(&f).unwrap();
        let texts: Vec<String> = fac.factors.iter().map(|(p, _)| p.canonical_text()).collect();
        assert_eq!(texts, ["2*t + 3", "t^2 + 1", "t^2 - 2"]);
        assert_eq!(fac.expand().unwrap(), f);
    }

    #[test]
    fn bivariate_difference_of_squares() {
        let ctx = ctx_xy();
        let x = var(&ctx, "x");
        let y = var(&ctx, "y");
        let f = x.pow(2).sub(&y.pow(2)).unwrap();
        let fac = factor_bivariate(&f).unwrap();
        let texts: Vec<String> = fac.factors.iter().map(|(p, _)| p.canonical_text()).collect();
        assert_eq!(texts, ["x + y", "x - y"]);
        assert_eq!(fac.expand().unwrap(), f);
    }

    #[test]
    fn bivariate_irreducible_circle() {
        let ctx = ctx_xy();
        let x = var(&ctx, "x");
        let y = var(&ctx, "y");
        let f = x.pow(2).add(&y.pow(2)).unwrap();
        let fac = factor_bivariate(&f).unwrap();
        assert_eq!(fac.factors.len(), 1);
        assert_eq!(fac.factors[0].0, f);
    }

    #[test]
    fn bivariate_three_way_product() {
        let ctx = ctx_xy();
        let x = var(&ctx, "x");
        let y = var(&ctx, "y");
        let one = Polynomial::one(&ctx, MonomialOrder::DegRevLex);
        let a = x.pow(2).add(&y.pow(2)).unwrap();
        let b = x.sub(&y).unwrap().add(&one).unwrap();
        let c = x.add(&y).unwrap().sub(&one.scale(&rat(2, 1))).unwrap();
        let f = a.mul(&b).unwrap().mul(&c).unwrap();
        let fac = factor_bivariate(&f).unwrap();
        assert_eq!(fac.factors.len(), 3);
        assert_eq!(fac.expand().unwrap(), f);
        // pairwise non-associate
        for i in 0..fac.factors.len() {
            for j in (i + 1)..fac.factors.len() {
                let g = gcd_poly(&fac.factors[i].0, &fac.factors[j].0).unwrap();
                assert!(g.is_constant());
            }
        }
    }

    #[test]
    fn bivariate_with_content_and_multiplicity() {
        let ctx = ctx_xy();
        let x = var(&ctx, "x");
        let y = var(&ctx, "y");
        // y * (x - y)^2 * (x + y): content y in the x-view
        let f = y
            .mul(&x.sub(&y).unwrap().pow(2))
            .unwrap()
            .mul(&x.add(&y).unwrap())
            .unwrap();
        let fac = factor_bivariate(&f).unwrap();
        let texts: Vec<(String, u32)> = fac
            .factors
            .iter()
            .map(|(p, m)| (p.canonical_text(), *m))
            .collect();
        assert_eq!(
            texts,
            [
                (String::from("x + y"), 1),
                (String::from("x - y"), 2),
                (String::from("y"), 1)
            ]
        );
        assert_eq!(fac.expand().unwrap(), f);
    }

    #[test]
    fn bivariate_quartic_pair_of_conics() {
        let ctx = ctx_xy();
        let x = var(&ctx, "x");
        let y = var(&ctx, "y");
        let one = Polynomial::one(&ctx, MonomialOrder::DegRevLex);
        // (x^2 + y^2 - 1)(x^2 - y + 2)
        let a = x.pow(2).add(&y.pow(2)).unwrap().sub(&one).unwrap();
        let b = x.pow(2).sub(&y).unwrap().add(&one.scale(&rat(2, 1))).unwrap();
        let f = a.mul(&b).unwrap();
        let fac = factor_bivariate(&f).unwrap();
        assert_eq!(fac.factors.len(), 2);
        assert_eq!(fac.expand().unwrap(), f);
    }

    #[test]
    fn exact_div_roundtrip() {
        let ctx = ctx_xy();
        let x = var(&ctx, "x");
        let y = var(&ctx, "y");
        let f = x.pow(3).add(&y.pow(3)).unwrap();
        let g = x.add(&y).unwrap();
        let q = exact_div(&f, &g).unwrap();
        assert_eq!(q.mul(&g).unwrap(), f);
        assert!(exact_div(&g, &f).is_none());
    }
}
