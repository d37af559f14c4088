//! Buchberger completion, reduced Gröbner bases, elimination ideals, and
//! locus-polynomial extraction.
//!
//! The completion loop works fraction-free: basis elements are kept integer
//! primitive with positive leading coefficients, S-polynomials are built with
//! cross-multiplied leading coefficients, and reduction is pseudo-division
//! followed by a content strip. Pair selection follows the sugar strategy
//! with a fixed tie-break (lowest sugar, then lowest lcm under the order,
//! then insertion serial), so output is deterministic for a given input.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact::Rational;
use crate::multipoly::{Monomial, MonomialOrder, PolyError, Polynomial, Var, VarContext};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroebnerError {
    #[error("generator list must contain a nonzero polynomial")]
    EmptyInput,
    #[error("elimination variables must be distinct members of the context")]
    BadElimVars,
    #[error("budget exhausted after {pairs} S-pairs (largest coefficient {bits} bits)")]
    BudgetExhausted { pairs: u64, bits: u64 },
    #[error("cancelled by progress hook after {0} S-pairs")]
    Cancelled(u64),
    #[error("empty elimination ideal: locus is the whole plane")]
    WholePlaneLocus,
    #[error("empty elimination ideal: constant gcd, locus contains no curve")]
    EmptyLocus,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Resource limits and strategy switches for basis computations.
#[derive(Debug, Clone)]
pub struct GroebnerConfig {
    /// S-pair reductions allowed before a budget error.
    pub max_pairs: u64,
    /// Cap on any single coefficient's bit size in adjoined generators.
    pub max_coeff_bits: u64,
    /// Try multi-prime computation with exact verification first.
    pub modular: bool,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig { max_pairs: 250_000, max_coeff_bits: 1 << 20, modular: false }
    }
}

/// Completion progress snapshot passed to cancellation hooks.
#[derive(Debug, Clone)]
pub struct Progress {
    pub pairs_done: u64,
    pub queue_len: usize,
    pub basis_len: usize,
}

/// Hook polled between pair reductions; returning `false` cancels the run.
pub type ProgressHook<'a> = &'a mut dyn FnMut(&Progress) -> bool;

/// A constraint system together with the variables to eliminate.
#[derive(Debug, Clone)]
pub struct PolySystem {
    generators: Vec<Polynomial>,
    elim_vars: Vec<Var>,
}

impl PolySystem {
    pub fn new(generators: Vec<Polynomial>, elim_vars: Vec<Var>) -> Result<Self, GroebnerError> {
        let ctx = generators
            .first()
            .ok_or(GroebnerError::EmptyInput)?
            .context()
            .clone();
        for g in &generators {
            if g.context() != &ctx {
                return Err(PolyError::ContextMismatch.into());
            }
        }
        let generators: Vec<Polynomial> =
            generators.into_iter().filter(|g| !g.is_zero()).collect();
        if generators.is_empty() {
            return Err(GroebnerError::EmptyInput);
        }
        for (i, v) in elim_vars.iter().enumerate() {
            if v.0 >= ctx.len() || elim_vars[..i].contains(v) {
                return Err(GroebnerError::BadElimVars);
            }
        }
        Ok(PolySystem { generators, elim_vars })
    }

    pub fn context(&self) -> &Arc<VarContext> {
        self.generators[0].context()
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn elim_vars(&self) -> &[Var] {
        &self.elim_vars
    }
}

/// Reduced Gröbner basis: integer-primitive elements with positive leading
/// coefficients, no term of any element divisible by another's leading
/// monomial, sorted ascending by leading monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    polys: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn canonical_texts(&self) -> Vec<String> {
        self.polys.iter().map(|p| p.canonical_text()).collect()
    }
}

fn normalize_lead_positive(p: Polynomial) -> Result<Polynomial, GroebnerError> {
    let q = p.normalize_integer_primitive()?;
    if q.leading().map(|(c, _)| c.is_negative()).unwrap_or(false) {
        Ok(q.neg())
    } else {
        Ok(q)
    }
}

fn strip_content(p: Polynomial) -> Polynomial {
    if p.is_zero() {
        return p;
    }
    normalize_lead_positive(p).expect("nonzero polynomial")
}

/// Exact multivariate division: full normal form of `f` modulo `basis`
/// under `order`, with `f - result` in the ideal generated by `basis`.
pub fn reduce(f: &Polynomial, basis: &[Polynomial], order: MonomialOrder) -> Polynomial {
    let basis: Vec<Polynomial> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.with_order(order))
        .collect();
    let mut p = f.with_order(order);
    let mut frozen = 0usize;
    while frozen < p.num_terms() {
        let (c, m) = {
            let t = &p.terms()[frozen];
            (t.0.clone(), t.1)
        };
        let mut hit = false;
        for g in &basis {
            let (gc, gm) = g.leading().expect("nonzero");
            if let Some(delta) = m.div(gm) {
                p = p.sub_mul_term(g, &(&c / gc), &delta);
                hit = true;
                break;
            }
        }
        if !hit {
            frozen += 1;
        }
    }
    p
}

/// Fraction-free normal form: zero exactly when the true normal form is
/// zero, otherwise the integer-primitive remainder (positive lead). Also
/// propagates the sugar degree.
fn pseudo_reduce(
    f: &Polynomial,
    basis: &[Polynomial],
    sugar_in: u32,
    sugars: &[u32],
) -> (Polynomial, u32) {
    let mut p = f.clone();
    let mut sugar = sugar_in;
    let mut frozen = 0usize;
    let mut steps = 0u32;
    while frozen < p.num_terms() {
        let (c, m) = {
            let t = &p.terms()[frozen];
            (t.0.clone(), t.1)
        };
        let mut hit = false;
        for (gi, g) in basis.iter().enumerate() {
            let (gc, gm) = g.leading().expect("nonzero");
            if let Some(delta) = m.div(gm) {
                // p <- lc(g) * p - c * x^delta * g; the current term cancels.
                p = p.scale(gc).sub_mul_term(g, &c, &delta);
                sugar = sugar.max(sugars.get(gi).copied().unwrap_or(0) + delta.total_degree() as u32);
                hit = true;
                break;
            }
        }
        if !hit {
            frozen += 1;
        } else {
            steps += 1;
            if steps % 24 == 0 && !p.is_zero() {
                p = strip_content(p);
            }
        }
    }
    (strip_content(p), sugar)
}

/// Fraction-free S-polynomial; leading terms cancel by construction.
fn s_poly(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (fc, fm) = f.leading().expect("nonzero");
    let (gc, gm) = g.leading().expect("nonzero");
    let l = fm.lcm(gm);
    let df = l.div(fm).expect("lcm divisible");
    let dg = l.div(gm).expect("lcm divisible");
    f.mul_term(gc, &df)
        .sub(&g.mul_term(fc, &dg))
        .expect("same context")
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
    serial: u64,
}

fn pair_key(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

fn make_pair(
    basis: &[Polynomial],
    sugars: &[u32],
    i: usize,
    j: usize,
    serial: u64,
) -> Pair {
    let mi = basis[i].leading().unwrap().1;
    let mj = basis[j].leading().unwrap().1;
    let lcm = mi.lcm(&mj);
    let si = sugars[i] + (lcm.total_degree() - mi.total_degree()) as u32;
    let sj = sugars[j] + (lcm.total_degree() - mj.total_degree()) as u32;
    Pair { i, j, lcm, sugar: si.max(sj), serial }
}

/// Buchberger completion returning the reduced basis. Deterministic for a
/// fixed input; budget violations surface as errors, never truncation.
pub fn buchberger(
    gens: &[Polynomial],
    order: MonomialOrder,
    config: &GroebnerConfig,
) -> Result<GroebnerBasis, GroebnerError> {
    buchberger_with_progress(gens, order, config, None)
}

pub fn buchberger_with_progress(
    gens: &[Polynomial],
    order: MonomialOrder,
    config: &GroebnerConfig,
    mut hook: Option<ProgressHook<'_>>,
) -> Result<GroebnerBasis, GroebnerError> {
    let ctx = gens
        .first()
        .ok_or(GroebnerError::EmptyInput)?
        .context()
        .clone();
    let mut seed: Vec<Polynomial> = Vec::new();
    for g in gens {
        if g.context() != &ctx {
            return Err(PolyError::ContextMismatch.into());
        }
        if g.is_zero() {
            continue;
        }
        let g = normalize_lead_positive(g.with_order(order))?;
        if !seed.contains(&g) {
            seed.push(g);
        }
    }
    if seed.is_empty() {
        return Err(GroebnerError::EmptyInput);
    }

    if config.modular {
        if let Some(polys) = modular::try_modular(&seed, order, config) {
            return Ok(GroebnerBasis { order, polys });
        }
    }

    let nvars = ctx.len();
    let mut basis = seed;
    let mut sugars: Vec<u32> = basis.iter().map(|g| g.total_degree() as u32).collect();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut serial = 0u64;
    for j in 1..basis.len() {
        for i in 0..j {
            pairs.push(make_pair(&basis, &sugars, i, j, serial));
            serial += 1;
        }
    }
    let mut treated: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut pairs_done = 0u64;

    while !pairs.is_empty() {
        // Selection: lowest sugar, then lowest lcm under the order, then
        // insertion serial.
        let idx = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.sugar
                    .cmp(&b.sugar)
                    .then_with(|| order.cmp(&a.lcm, &b.lcm, nvars))
                    .then_with(|| a.serial.cmp(&b.serial))
            })
            .map(|(i, _)| i)
            .expect("nonempty");
        let pair = pairs.swap_remove(idx);
        treated.insert(pair_key(pair.i, pair.j));

        let mi = basis[pair.i].leading().unwrap().1;
        let mj = basis[pair.j].leading().unwrap().1;
        // Product criterion: coprime leading monomials reduce to zero.
        if mi.is_coprime_with(&mj) {
            continue;
        }
        // Chain criterion: some third element divides the lcm and both
        // side pairs were already handled.
        let chained = (0..basis.len()).any(|k| {
            k != pair.i
                && k != pair.j
                && basis[k].leading().unwrap().1.divides(&pair.lcm)
                && treated.contains(&pair_key(pair.i, k))
                && treated.contains(&pair_key(pair.j, k))
        });
        if chained {
            continue;
        }

        pairs_done += 1;
        if pairs_done > config.max_pairs {
            return Err(GroebnerError::BudgetExhausted {
                pairs: pairs_done,
                bits: basis.iter().map(|b| b.max_coeff_bits()).max().unwrap_or(0),
            });
        }
        if let Some(h) = hook.as_mut() {
            let ok = h(&Progress {
                pairs_done,
                queue_len: pairs.len(),
                basis_len: basis.len(),
            });
            if !ok {
                return Err(GroebnerError::Cancelled(pairs_done));
            }
        }

        let s = s_poly(&basis[pair.i], &basis[pair.j]);
        let (nf, sugar) = pseudo_reduce(&s, &basis, pair.sugar, &sugars);
        if nf.is_zero() {
            continue;
        }
        let bits = nf.max_coeff_bits();
        if bits > config.max_coeff_bits {
            return Err(GroebnerError::BudgetExhausted { pairs: pairs_done, bits });
        }
        let t = basis.len();
        basis.push(nf);
        sugars.push(sugar);
        for i in 0..t {
            pairs.push(make_pair(&basis, &sugars, i, t, serial));
            serial += 1;
        }
    }

    Ok(GroebnerBasis { order, polys: interreduce(basis, order, nvars)? })
}

/// Minimalizes (drops elements whose leading monomial is divisible by
/// another's) then tail-reduces each element to normal form.
fn interreduce(
    mut basis: Vec<Polynomial>,
    order: MonomialOrder,
    nvars: usize,
) -> Result<Vec<Polynomial>, GroebnerError> {
    basis.sort_by(|a, b| {
        order.cmp(&a.leading().unwrap().1, &b.leading().unwrap().1, nvars)
    });
    // Ascending order puts divisors first, so one pass suffices.
    let mut kept: Vec<Polynomial> = Vec::new();
    for g in basis {
        let lm = g.leading().unwrap().1;
        if !kept.iter().any(|h| h.leading().unwrap().1.divides(&lm)) {
            kept.push(g);
        }
    }
    let zeros = vec![0u32; kept.len()];
    for i in 0..kept.len() {
        let others: Vec<Polynomial> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let (nf, _) = pseudo_reduce(&kept[i], &others, 0, &zeros);
        debug_assert!(!nf.is_zero(), "minimal element reduced to zero");
        kept[i] = normalize_lead_positive(nf)?;
    }
    Ok(kept)
}

/// True when every pairwise S-polynomial reduces to zero: the defining
/// Gröbner property, checked directly.
pub fn is_groebner_basis(gb: &GroebnerBasis) -> bool {
    let polys = gb.polys();
    let zeros = vec![0u32; polys.len()];
    for i in 0..polys.len() {
        for j in (i + 1)..polys.len() {
            let s = s_poly(&polys[i], &polys[j]);
            if !pseudo_reduce(&s, polys, 0, &zeros).0.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Ideal membership: true iff the normal form vanishes.
pub fn membership(f: &Polynomial, gb: &GroebnerBasis) -> Result<bool, GroebnerError> {
    if let Some(first) = gb.polys.first() {
        if f.context() != first.context() {
            return Err(PolyError::ContextMismatch.into());
        }
    }
    let f = f.with_order(gb.order);
    let zeros = vec![0u32; gb.polys.len()];
    Ok(pseudo_reduce(&f, &gb.polys, 0, &zeros).0.is_zero())
}

/// Result of an elimination run: the generators of the elimination ideal
/// mapped into a fresh context of the retained variables, plus the full
/// block-order basis they were selected from.
#[derive(Debug, Clone)]
pub struct Elimination {
    pub retained: Arc<VarContext>,
    pub polys: Vec<Polynomial>,
    pub basis: GroebnerBasis,
}

/// Computes generators of `ideal(sys) ∩ Q[retained vars]` with a block
/// order (eliminated variables in front), selecting the basis elements free
/// of eliminated variables.
pub fn eliminate(sys: &PolySystem, config: &GroebnerConfig) -> Result<Elimination, GroebnerError> {
    let ctx = sys.context().clone();
    let k = sys.elim_vars.len();

    let mut names: Vec<String> = Vec::with_capacity(ctx.len());
    for v in &sys.elim_vars {
        names.push(String::from(ctx.name(*v)));
    }
    let retained_vars: Vec<Var> = ctx
        .vars()
        .filter(|v| !sys.elim_vars.contains(v))
        .collect();
    for v in &retained_vars {
        names.push(String::from(ctx.name(*v)));
    }
    let permuted = VarContext::new(names).map_err(GroebnerError::from)?;

    let mut var_map: Vec<Option<Var>> = vec![None; ctx.len()];
    for (pos, v) in sys.elim_vars.iter().enumerate() {
        var_map[v.0] = Some(Var(pos));
    }
    for (pos, v) in retained_vars.iter().enumerate() {
        var_map[v.0] = Some(Var(k + pos));
    }

    let order = MonomialOrder::Block(k);
    let mapped: Vec<Polynomial> = sys
        .generators
        .iter()
        .map(|g| g.map_context(&permuted, &var_map, order))
        .collect::<Result<_, _>>()?;

    let gb = buchberger(&mapped, order, config)?;

    let retained_names: Vec<String> = retained_vars
        .iter()
        .map(|v| String::from(ctx.name(*v)))
        .collect();
    let retained = VarContext::new(retained_names).map_err(GroebnerError::from)?;
    let mut back: Vec<Option<Var>> = vec![None; permuted.len()];
    for i in k..permuted.len() {
        back[i] = Some(Var(i - k));
    }
    let elim_mask: u32 = if k == 0 { 0 } else { (1u32 << k) - 1 };
    let polys: Vec<Polynomial> = gb
        .polys
        .iter()
        .filter(|p| p.vars_present() & elim_mask == 0)
        .map(|p| p.map_context(&retained, &back, MonomialOrder::DegRevLex))
        .collect::<Result<_, _>>()?;

    Ok(Elimination { retained, polys, basis: gb })
}

/// Saturates a system by a nonvanishing condition: adjoins a fresh inverse
/// variable `t` and the generator `t * nonzero - 1`, marking `t` for
/// elimination. Components of the solution set on which `nonzero` vanishes
/// drop out of the projection.
pub fn saturate(sys: &PolySystem, nonzero: &Polynomial) -> Result<PolySystem, GroebnerError> {
    let ctx = sys.context();
    if nonzero.context() != ctx {
        return Err(GroebnerError::from(PolyError::ContextMismatch));
    }
    if nonzero.is_zero() {
        return Err(GroebnerError::EmptyInput);
    }
    let mut fresh = String::from("t");
    let mut counter = 0usize;
    while ctx.index_of(&fresh).is_some() {
        fresh = alloc::format!("t{counter}");
        counter += 1;
    }
    let mut names: Vec<String> = ctx.names().to_vec();
    names.push(fresh);
    let extended = VarContext::new(names).map_err(GroebnerError::from)?;
    let t = Var(ctx.len());

    let order = sys.generators()[0].order();
    let var_map: Vec<Option<Var>> = (0..ctx.len()).map(|i| Some(Var(i))).collect();
    let mut generators: Vec<Polynomial> = sys
        .generators()
        .iter()
        .map(|g| g.map_context(&extended, &var_map, order))
        .collect::<Result<_, _>>()?;
    let t_poly = Polynomial::var(&extended, order, t)?;
    let nz = nonzero.map_context(&extended, &var_map, order)?;
    let one = Polynomial::constant(&extended, order, Rational::one());
    generators.push(t_poly.mul(&nz)?.sub(&one)?);

    let mut elim_vars = sys.elim_vars().to_vec();
    elim_vars.push(t);
    PolySystem::new(generators, elim_vars)
}

/// Collapses elimination-ideal generators to the canonical locus
/// polynomial: gcd, then squarefree part, then integer-primitive form.
pub fn locus_polynomial(gens: &[Polynomial]) -> Result<Polynomial, GroebnerError> {
    let nonzero: Vec<&Polynomial> = gens.iter().filter(|g| !g.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return Err(GroebnerError::WholePlaneLocus);
    };
    let mut g = (*first).clone();
    for f in &nonzero[1..] {
        g = crate::factorize::gcd_poly(&g, f)?;
        if g.is_constant() {
            break;
        }
    }
    if g.is_constant() {
        return Err(GroebnerError::EmptyLocus);
    }
    let sf = crate::factorize::squarefree_part(&g)?;
    Ok(normalize_lead_positive(sf)?)
}

/// Multi-prime acceleration: Gröbner bases over word-size prime fields,
/// coefficient recovery by CRT plus rational reconstruction, then exact
/// certification (generators and S-pairs reduce to zero). Any failure falls
/// back to the exact path.
mod modular {
    use super::*;
    use num_integer::Integer as IntegerOps;

    /// Primes just under 2^31 (products fit comfortably in u64 arithmetic).
    const PRIMES: [u64; 12] = [
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
        2_147_483_423,
        2_147_483_399,
    ];

    type ZTerms = Vec<(u64, Monomial)>; // sorted descending under the order

    #[inline]
    fn mulm(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    fn powm(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulm(acc, b, p);
            }
            b = mulm(b, b, p);
            e >>= 1;
        }
        acc
    }

    fn invm(a: u64, p: u64) -> u64 {
        powm(a, p - 2, p)
    }

    fn bigint_mod(x: &BigInt, p: u64) -> u64 {
        let m = x.mod_floor(&BigInt::from(p));
        let (_, digits) = m.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    }

    fn to_zp(f: &Polynomial, p: u64) -> Option<ZTerms> {
        let mut out = Vec::with_capacity(f.num_terms());
        for (c, m) in f.terms() {
            let den = bigint_mod(c.denom(), p);
            if den == 0 {
                return None;
            }
            let num = bigint_mod(c.numer(), p);
            let v = mulm(num, invm(den, p), p);
            if v != 0 {
                out.push((v, *m));
            }
        }
        // Leading monomial must survive or the modular image is useless.
        if out.len() != f.num_terms() {
            return None;
        }
        Some(out)
    }

    fn z_monic(f: &ZTerms, p: u64) -> ZTerms {
        let Some(&(lc, _)) = f.first() else { return Vec::new() };
        let inv = invm(lc, p);
        f.iter().map(|(c, m)| (mulm(*c, inv, p), *m)).collect()
    }

    /// f - c * x^delta * g, single merge pass.
    fn z_sub_scaled(
        f: &ZTerms,
        g: &ZTerms,
        c: u64,
        delta: &Monomial,
        order: MonomialOrder,
        nvars: usize,
        p: u64,
    ) -> ZTerms {
        let mut out = Vec::with_capacity(f.len() + g.len());
        let (mut i, mut j) = (0, 0);
        while i < f.len() && j < g.len() {
            let gm = g[j].1.mul(delta);
            match order.cmp(&f[i].1, &gm, nvars) {
                Ordering::Greater => {
                    out.push(f[i]);
                    i += 1;
                }
                Ordering::Less => {
                    let v = p - mulm(c, g[j].0, p);
                    if v != p {
                        out.push((v % p, gm));
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let sub = mulm(c, g[j].0, p);
                    let v = (f[i].0 + p - sub) % p;
                    if v != 0 {
                        out.push((v, gm));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&f[i..]);
        for (cg, mg) in &g[j..] {
            let v = p - mulm(c, *cg, p);
            if v != p {
                out.push((v % p, mg.mul(delta)));
            }
        }
        out
    }

    fn z_normal_form(
        f: &ZTerms,
        basis: &[ZTerms],
        order: MonomialOrder,
        nvars: usize,
        p: u64,
    ) -> ZTerms {
        let mut work = f.clone();
        let mut frozen = 0usize;
        while frozen < work.len() {
            let (c, m) = work[frozen];
            let mut hit = false;
            for g in basis {
                let (gc, gm) = g[0];
                if let Some(delta) = m.div(&gm) {
                    let factor = mulm(c, invm(gc, p), p);
                    work = z_sub_scaled(&work, g, factor, &delta, order, nvars, p);
                    hit = true;
                    break;
                }
            }
            if !hit {
                frozen += 1;
            }
        }
        work
    }

    fn z_spoly(f: &ZTerms, g: &ZTerms, order: MonomialOrder, nvars: usize, p: u64) -> ZTerms {
        // Both monic: s = x^df * f - x^dg * g.
        let (fm, gm) = (f[0].1, g[0].1);
        let l = fm.lcm(&gm);
        let df = l.div(&fm).unwrap();
        let dg = l.div(&gm).unwrap();
        let shifted: ZTerms = f.iter().map(|(c, m)| (*c, m.mul(&df))).collect();
        z_sub_scaled(&shifted, g, 1, &dg, order, nvars, p)
    }

    fn z_buchberger(
        gens: Vec<ZTerms>,
        order: MonomialOrder,
        nvars: usize,
        p: u64,
        max_pairs: u64,
    ) -> Option<Vec<ZTerms>> {
        let mut basis: Vec<ZTerms> = Vec::new();
        for g in gens {
            if g.is_empty() {
                continue;
            }
            let g = z_monic(&g, p);
            if !basis.contains(&g) {
                basis.push(g);
            }
        }
        if basis.is_empty() {
            return None;
        }
        let mut sugars: Vec<u32> = basis.iter().map(|g| zdeg(g)).collect();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut serial = 0u64;
        for j in 1..basis.len() {
            for i in 0..j {
                pairs.push(zpair(&basis, &sugars, i, j, serial));
                serial += 1;
            }
        }
        let mut treated: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut done = 0u64;
        while !pairs.is_empty() {
            let idx = pairs
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    a.sugar
                        .cmp(&b.sugar)
                        .then_with(|| order.cmp(&a.lcm, &b.lcm, nvars))
                        .then_with(|| a.serial.cmp(&b.serial))
                })
                .map(|(i, _)| i)?;
            let pair = pairs.swap_remove(idx);
            treated.insert(pair_key(pair.i, pair.j));
            let mi = basis[pair.i][0].1;
            let mj = basis[pair.j][0].1;
            if mi.is_coprime_with(&mj) {
                continue;
            }
            let chained = (0..basis.len()).any(|k| {
                k != pair.i
                    && k != pair.j
                    && basis[k][0].1.divides(&pair.lcm)
                    && treated.contains(&pair_key(pair.i, k))
                    && treated.contains(&pair_key(pair.j, k))
            });
            if chained {
                continue;
            }
            done += 1;
            if done > max_pairs {
                return None;
            }
            let s = z_spoly(&basis[pair.i], &basis[pair.j], order, nvars, p);
            let nf = z_normal_form(&s, &basis, order, nvars, p);
            if nf.is_empty() {
                continue;
            }
            let sugar = pair.sugar.max(zdeg(&nf));
            let t = basis.len();
            basis.push(z_monic(&nf, p));
            sugars.push(sugar);
            for i in 0..t {
                pairs.push(zpair(&basis, &sugars, i, t, serial));
                serial += 1;
            }
        }
        // reduce to the minimal, tail-reduced, sorted form
        basis.sort_by(|a, b| order.cmp(&a[0].1, &b[0].1, nvars));
        let mut kept: Vec<ZTerms> = Vec::new();
        for g in basis {
            if !kept.iter().any(|h| h[0].1.divides(&g[0].1)) {
                kept.push(g);
            }
        }
        for i in 0..kept.len() {
            let others: Vec<ZTerms> = kept
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            kept[i] = z_monic(&z_normal_form(&kept[i], &others, order, nvars, p), p);
        }
        Some(kept)
    }

    fn zdeg(f: &ZTerms) -> u32 {
        f.iter().map(|(_, m)| m.total_degree() as u32).max().unwrap_or(0)
    }

    fn zpair(basis: &[ZTerms], sugars: &[u32], i: usize, j: usize, serial: u64) -> Pair {
        let mi = basis[i][0].1;
        let mj = basis[j][0].1;
        let lcm = mi.lcm(&mj);
        let si = sugars[i] + (lcm.total_degree() - mi.total_degree()) as u32;
        let sj = sugars[j] + (lcm.total_degree() - mj.total_degree()) as u32;
        Pair { i, j, lcm, sugar: si.max(sj), serial }
    }

    fn shape(basis: &[ZTerms]) -> Vec<Vec<Monomial>> {
        basis
            .iter()
            .map(|g| g.iter().map(|(_, m)| *m).collect())
            .collect()
    }

    /// Standard half-extended Euclid bounded by sqrt(M/2).
    fn rational_reconstruct(c: &BigInt, modulus: &BigInt) -> Option<Rational> {
        let bound = (modulus / BigInt::from(2)).sqrt();
        let mut r0 = modulus.clone();
        let mut r1 = c.mod_floor(modulus);
        let mut t0 = BigInt::zero();
        let mut t1 = BigInt::one();
        while r1 > bound {
            let q = &r0 / &r1;
            let r2 = &r0 - &q * &r1;
            let t2 = &t0 - &q * &t1;
            r0 = core::mem::replace(&mut r1, r2);
            t0 = core::mem::replace(&mut t1, t2);
        }
        if t1.is_zero() || t1.abs() > bound {
            return None;
        }
        if t1.is_negative() {
            r1 = -r1;
            t1 = -t1;
        }
        if t1.gcd(modulus) != BigInt::one() {
            return None;
        }
        Some(Rational::new(r1, t1))
    }

    fn crt_combine(basis_runs: &[(u64, Vec<ZTerms>)]) -> Option<(Vec<Vec<BigInt>>, BigInt)> {
        let (p0, first) = &basis_runs[0];
        let mut modulus = BigInt::from(*p0);
        let mut values: Vec<Vec<BigInt>> = first
            .iter()
            .map(|g| g.iter().map(|(c, _)| BigInt::from(*c)).collect())
            .collect();
        for (p, run) in &basis_runs[1..] {
            let pb = BigInt::from(*p);
            let minv = invm(bigint_mod(&modulus, *p), *p);
            for (gi, g) in run.iter().enumerate() {
                for (ti, (c, _)) in g.iter().enumerate() {
                    let a = &values[gi][ti];
                    let a_mod_p = bigint_mod(a, *p);
                    let delta = mulm((c + p - a_mod_p) % p, minv, *p);
                    values[gi][ti] = a + &modulus * BigInt::from(delta);
                }
            }
            modulus *= &pb;
        }
        Some((values, modulus))
    }

    fn verify(gens: &[Polynomial], candidate: &[Polynomial]) -> bool {
        let zeros = vec![0u32; candidate.len()];
        for g in gens {
            if !pseudo_reduce(g, candidate, 0, &zeros).0.is_zero() {
                return false;
            }
        }
        for i in 0..candidate.len() {
            for j in (i + 1)..candidate.len() {
                let mi = candidate[i].leading().unwrap().1;
                let mj = candidate[j].leading().unwrap().1;
                if mi.is_coprime_with(&mj) {
                    continue;
                }
                let s = s_poly(&candidate[i], &candidate[j]);
                if !pseudo_reduce(&s, candidate, 0, &zeros).0.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub(super) fn try_modular(
        gens: &[Polynomial],
        order: MonomialOrder,
        config: &GroebnerConfig,
    ) -> Option<Vec<Polynomial>> {
        let ctx = gens[0].context().clone();
        let nvars = ctx.len();
        let mut runs: Vec<(u64, Vec<ZTerms>)> = Vec::new();
        for &p in PRIMES.iter() {
            let images: Option<Vec<ZTerms>> = gens.iter().map(|g| to_zp(g, p)).collect();
            let Some(images) = images else { continue };
            let Some(zb) = z_buchberger(images, order, nvars, p, config.max_pairs) else {
                continue;
            };
            runs.push((p, zb));
            if runs.len() < 2 {
                continue;
            }
            // Combine the runs agreeing with the most recent shape.
            let target = shape(&runs.last().unwrap().1);
            let group: Vec<(u64, Vec<ZTerms>)> = runs
                .iter()
                .filter(|(_, b)| shape(b) == target)
                .cloned()
                .collect();
            if group.len() < 2 {
                continue;
            }
            let Some((values, modulus)) = crt_combine(&group) else { continue };
            let mut candidate: Vec<Polynomial> = Vec::with_capacity(values.len());
            let mut ok = true;
            'outer: for (gi, g) in group[0].1.iter().enumerate() {
                let mut terms: Vec<(Rational, Monomial)> = Vec::with_capacity(g.len());
                for (ti, (_, m)) in g.iter().enumerate() {
                    match rational_reconstruct(&values[gi][ti], &modulus) {
                        Some(r) => terms.push((r, *m)),
                        None => {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
                let poly = Polynomial::from_terms(&ctx, order, terms);
                match super::normalize_lead_positive(poly) {
                    Ok(p) => candidate.push(p),
                    Err(_) => {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            if ok && verify(gens, &candidate) {
                return Some(candidate);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::multipoly::{MonomialOrder, Polynomial, VarContext};

    fn ctx_xy() -> Arc<VarContext> {
        VarContext::new(["x", "y"]).unwrap()
    }

    fn var(ctx: &Arc<VarContext>, name: &str) -> Polynomial {
        Polynomial::var(ctx, MonomialOrder::DegRevLex, ctx.index_of(name).unwrap()).unwrap()
    }

    fn circle_line(ctx: &Arc<VarContext>) -> (Polynomial, Polynomial) {
        let x = var(ctx, "x");
        let y = var(ctx, "y");
        let one = Polynomial::one(ctx, MonomialOrder::DegRevLex);
        let circle = x.pow(2).add(&y.pow(2)).unwrap().sub(&one).unwrap();
        let line = x.sub(&y).unwrap();
        (circle, line)
    }

    #[test]
    fn reduce_examples() {
        let ctx = ctx_xy();
        let x = var(&ctx, "x");
        let y = var(&ctx, "y");
        assert!(reduce(&x.pow(2), &[x.clone()], MonomialOrder::DegRevLex).is_zero());
        assert_eq!(reduce(&y, &[x.clone()], MonomialOrder::DegRevLex), y);

        let two_y2_m1 = y
            .pow(2)
            .scale(&rat(2, 1))
            .sub(&Polynomial::one(&ctx, MonomialOrder::DegRevLex))
            .unwrap();
        let (circle, line) = circle_line(&ctx);
        let nf = reduce(&circle, &[line, two_y2_m1], MonomialOrder::Lex);
        assert!(nf.is_zero(), "got {nf}");
    }

    #[test]
    fn buchberger_single_and_duplicate() {
        let ctx = ctx_xy();
        let x = var(&ctx, "x");
        let y = var(&ctx, "y");
        let gb = buchberger(&[x.clone()], MonomialOrder::DegRevLex, &Default::default()).unwrap();
        assert_eq!(gb.canonical_texts(), ["x"]);

        let gb = buchberger(
            &[x.sub(&y).unwrap(), y.sub(&x).unwrap()],
            MonomialOrder::DegRevLex,
            &Default::default(),
        )
        .unwrap();
        assert_eq!(gb.canonical_texts(), ["x - y"]);
    }

    #[test]
    fn buchberger_circle_line_lex() {
        let ctx = ctx_xy();
        let (circle, line) = circle_line(&ctx);
        let gb = buchberger(&[circle.clone(), line.clone()], MonomialOrder::Lex, &Default::default())
            .unwrap();
        let texts = gb.canonical_texts();
        assert_eq!(texts.len(), 2);
        assert!(texts.contains(&String::from("x - y")), "{texts:?}");
        assert!(texts.contains(&String::from("2*y^2 - 1")), "{texts:?}");
        assert!(is_groebner_basis(&gb));
        // both inputs reduce to zero
        assert!(membership(&circle, &gb).unwrap());
        assert!(membership(&line, &gb).unwrap());
    }

    #[test]
    fn membership_examples() {
        let ctx = ctx_xy();
        let x = var(&ctx, "x");
        let y = var(&ctx, "y");
        let gb = buchberger(&[x.sub(&y).unwrap()], MonomialOrder::DegRevLex, &Default::default())
            .unwrap();
        let f = x.pow(2).sub(&y.pow(2)).unwrap();
        assert!(membership(&f, &gb).unwrap());

        let gb_y = buchberger(&[y.clone()], MonomialOrder::DegRevLex, &Default::default()).unwrap();
        assert!(!membership(&x, &gb_y).unwrap());
    }

    #[test]
    fn eliminate_parabola() {
        let ctx = VarContext::new(["a", "x", "y"]).unwrap();
        let a = var(&ctx, "a");
        let x = var(&ctx, "x");
        let y = var(&ctx, "y");
        let sys = PolySystem::new(
            vec![a.pow(2).sub(&x).unwrap(), a.sub(&y).unwrap()],
            vec![ctx.index_of("a").unwrap()],
        )
        .unwrap();
        let elim = eliminate(&sys, &Default::default()).unwrap();
        assert_eq!(elim.retained.names(), ["x", "y"]);
        let texts: Vec<String> = elim.polys.iter().map(|p| p.canonical_text()).collect();
        assert_eq!(texts, ["y^2 - x"]);
        let locus = locus_polynomial(&elim.polys).unwrap();
        assert_eq!(locus.canonical_text(), "y^2 - x");
    }

    #[test]
    fn eliminate_perpendicular_bisector() {
        // Sides a = dist to (1,0), b = dist to (0,0); hypothesis a = b.
        let ctx = VarContext::new(["a", "b", "x", "y"]).unwrap();
        let a = var(&ctx, "a");
        let b = var(&ctx, "b");
        let x = var(&ctx, "x");
        let y = var(&ctx, "y");
        let one = Polynomial::one(&ctx, MonomialOrder::DegRevLex);
        let xm1 = x.sub(&one).unwrap();
        let a_def = a.pow(2).sub(&xm1.pow(2).add(&y.pow(2)).unwrap()).unwrap();
        let b_def = b.pow(2).sub(&x.pow(2).add(&y.pow(2)).unwrap()).unwrap();
        let hyp = a.sub(&b).unwrap();
        let sys = PolySystem::new(
            vec![a_def, b_def, hyp],
            vec![ctx.index_of("a").unwrap(), ctx.index_of("b").unwrap()],
        )
        .unwrap();
        let elim = eliminate(&sys, &Default::default()).unwrap();
        let locus = locus_polynomial(&elim.polys).unwrap();
        assert_eq!(locus.canonical_text(), "2*x - 1");
    }

    #[test]
    fn locus_polynomial_error_cases() {
        let ctx = ctx_xy();
        let zero = Polynomial::zero(&ctx, MonomialOrder::DegRevLex);
        assert!(matches!(
            locus_polynomial(&[zero]),
            Err(GroebnerError::WholePlaneLocus)
        ));
        assert!(matches!(locus_polynomial(&[]), Err(GroebnerError::WholePlaneLocus)));
        let x = var(&ctx, "x");
        let y = var(&ctx, "y");
        assert!(matches!(
            locus_polynomial(&[x, y]),
            Err(GroebnerError::EmptyLocus)
        ));
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let ctx = ctx_xy();
        let (circle, line) = circle_line(&ctx);
        let config = GroebnerConfig { max_pairs: 0, ..Default::default() };
        match buchberger(&[circle, line], MonomialOrder::Lex, &config) {
            Err(GroebnerError::BudgetExhausted { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn cancellation_hook_stops_the_run() {
        let ctx = ctx_xy();
        let (circle, line) = circle_line(&ctx);
        let mut calls = 0u32;
        let mut hook = |_: &Progress| {
            calls += 1;
            false
        };
        let res = buchberger_with_progress(
            &[circle, line],
            MonomialOrder::Lex,
            &Default::default(),
            Some(&mut hook),
        );
        assert!(matches!(res, Err(GroebnerError::Cancelled(_))));
        assert_eq!(calls, 1);
    }

    #[test]
    fn determinism_two_runs_identical() {
        let ctx = VarContext::new(["x", "y", "z"]).unwrap();
        let x = var(&ctx, "x");
        let y = var(&ctx, "y");
        let z = var(&ctx, "z");
        let gens = [
            x.pow(2).add(&y.mul(&z).unwrap()).unwrap(),
            y.pow(2).sub(&x.mul(&z).unwrap()).unwrap(),
            z.pow(2).sub(&Polynomial::one(&ctx, MonomialOrder::DegRevLex)).unwrap(),
        ];
        let a = buchberger(&gens, MonomialOrder::DegRevLex, &Default::default()).unwrap();
        let b = buchberger(&gens, MonomialOrder::DegRevLex, &Default::default()).unwrap();
        assert_eq!(a.canonical_texts(), b.canonical_texts());
        assert!(is_groebner_basis(&a));
        for g in &gens {
            assert!(membership(g, &a).unwrap());
        }
    }

    #[test]
    fn modular_path_matches_exact() {
        let ctx = ctx_xy();
        let (circle, line) = circle_line(&ctx);
        let exact = buchberger(
            &[circle.clone(), line.clone()],
            MonomialOrder::Lex,
            &Default::default(),
        )
        .unwrap();
        let config = GroebnerConfig { modular: true, ..Default::default() };
        let fast = buchberger(&[circle, line], MonomialOrder::Lex, &config).unwrap();
        assert_eq!(exact.canonical_texts(), fast.canonical_texts());
    }

    #[test]
    fn modular_handles_fractional_inputs() {
        let ctx = ctx_xy();
        let x = var(&ctx, "x");
        let y = var(&ctx, "y");
        // coefficients with denominators exercise the image + reconstruction path
        let f = x.pow(2).scale(&rat(1, 3)).add(&y.scale(&rat(5, 7))).unwrap();
        let g = y.pow(2).sub(&x.scale(&rat(2, 9))).unwrap();
        let exact = buchberger(&[f.clone(), g.clone()], MonomialOrder::DegRevLex, &Default::default())
            .unwrap();
        let config = GroebnerConfig { modular: true, ..Default::default() };
        let fast = buchberger(&[f, g], MonomialOrder::DegRevLex, &config).unwrap();
        assert_eq!(exact.canonical_texts(), fast.canonical_texts());
    }
}
