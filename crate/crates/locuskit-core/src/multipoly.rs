//! Sparse multivariate polynomials over the rationals.
//!
//! A [`Polynomial`] owns a shared [`VarContext`] (ordered variable names), a
//! [`MonomialOrder`], and a term list sorted strictly descending under that
//! order. All arithmetic is exact. The canonical text form printed by
//! [`Polynomial::canonical_text`] (terms in degrevlex descending order,
//! explicit `^` and `*`) is the format compared byte-for-byte by the
//! acceptance tests, so its shape must stay stable.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer as IntegerOps;
use num_traits::{One, Signed, Zero};

use crate::exact::{rational_to_f64, ExactError, Interval, QuadExt, Rational};

/// Hard cap on context size imposed by the packed monomial representation.
pub const MAX_VARS: usize = 16;

/// Exponents above this cannot be stored in a packed monomial slot. The cap
/// keeps the cached total degree inside u16 even with every slot saturated;
/// resultant-style intermediates need far more than input degrees, so the
/// bound is deliberately generous.
pub const MAX_EXPONENT: u16 = 4000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("variable context mismatch")]
    ContextMismatch,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("too many variables ({0}); limit is {MAX_VARS}")]
    TooManyVariables(usize),
    #[error("duplicate variable {0:?}")]
    DuplicateVariable(String),
    #[error("exponent {0} exceeds representable bound {MAX_EXPONENT}")]
    ExponentOverflow(u32),
    #[error("evaluation point must bind all {0} context variables")]
    MissingBinding(usize),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not univariate in the requested variable")]
    NotUnivariate,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Index of a variable inside its context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub usize);

/// Ordered list of distinct variable names shared by polynomials.
#[derive(Debug, PartialEq, Eq)]
pub struct VarContext {
    names: Vec<String>,
}

impl VarContext {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Arc<Self>, PolyError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_VARS {
            return Err(PolyError::TooManyVariables(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(PolyError::DuplicateVariable(n.clone()));
            }
        }
        Ok(Arc::new(VarContext { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<Var> {
        self.names.iter().position(|n| n == name).map(Var)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.names.len()).map(Var)
    }
}

fn same_ctx(a: &Arc<VarContext>, b: &Arc<VarContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Packed exponent vector with cached total degree. `Copy`, at most
/// [`MAX_VARS`] variables with per-variable exponent at most [`MAX_EXPONENT`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    deg: u16,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: [0; MAX_VARS], deg: 0 }
    }

    pub fn from_exps(exps: &[u16]) -> Result<Self, PolyError> {
        if exps.len() > MAX_VARS {
            return Err(PolyError::TooManyVariables(exps.len()));
        }
        let mut m = Monomial::one();
        for (i, &e) in exps.iter().enumerate() {
            if e > MAX_EXPONENT {
                return Err(PolyError::ExponentOverflow(e as u32));
            }
            m.exps[i] = e;
            m.deg += e;
        }
        Ok(m)
    }

    pub fn var(v: Var, e: u16) -> Result<Self, PolyError> {
        if v.0 >= MAX_VARS {
            return Err(PolyError::TooManyVariables(v.0 + 1));
        }
        if e > MAX_EXPONENT {
            return Err(PolyError::ExponentOverflow(e as u32));
        }
        let mut m = Monomial::one();
        m.exps[v.0] = e;
        m.deg = e;
        Ok(m)
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.exps[v.0]
    }

    pub fn total_degree(&self) -> u16 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    /// Product of two monomials. Panics if a slot overflows; degrees in this
    /// pipeline stay far below the cap, so overflow means a logic error.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for i in 0..MAX_VARS {
            let sum = self.exps[i] + other.exps[i];
            assert!(sum <= MAX_EXPONENT, "monomial exponent overflow");
            out.exps[i] = sum;
        }
        out.deg = self.deg + other.deg;
        out
    }

    /// Exact quotient `self / other` when divisible.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = *self;
        for i in 0..MAX_VARS {
            if self.exps[i] < other.exps[i] {
                return None;
            }
            out.exps[i] = self.exps[i] - other.exps[i];
        }
        out.deg = self.deg - other.deg;
        Some(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        if self.deg > other.deg {
            return false;
        }
        (0..MAX_VARS).all(|i| self.exps[i] <= other.exps[i])
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = Monomial::one();
        let mut deg = 0u16;
        for i in 0..MAX_VARS {
            let e = self.exps[i].max(other.exps[i]);
            out.exps[i] = e;
            deg += e as u16;
        }
        out.deg = deg;
        out
    }

    pub fn is_coprime_with(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exps[i] == 0 || other.exps[i] == 0)
    }

    fn deg_range(&self, range: core::ops::Range<usize>) -> u16 {
        range.map(|i| self.exps[i] as u16).sum()
    }
}

/// Term orders over a fixed context.
///
/// `Block(k)` compares the first `k` variables by degrevlex first, breaking
/// ties by degrevlex on the remaining variables; this is the elimination
/// order used by the Gröbner engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
    Block(usize),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial, nvars: usize) -> Ordering {
        match *self {
            MonomialOrder::Lex => {
                for i in 0..nvars {
                    match a.exps[i].cmp(&b.exps[i]) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::DegRevLex => degrevlex_range(a, b, 0..nvars),
            MonomialOrder::Block(k) => {
                let k = k.min(nvars);
                match degrevlex_range(a, b, 0..k) {
                    Ordering::Equal => degrevlex_range(a, b, k..nvars),
                    ord => ord,
                }
            }
        }
    }
}

fn degrevlex_range(a: &Monomial, b: &Monomial, range: core::ops::Range<usize>) -> Ordering {
    let (da, db) = (a.deg_range(range.clone()), b.deg_range(range.clone()));
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    // Equal degree: scan from the last variable down; the first difference
    // decides, with the smaller exponent ranking higher.
    for i in range.rev() {
        match a.exps[i].cmp(&b.exps[i]) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

/// Sparse polynomial: terms sorted strictly descending under `order`.
#[derive(Debug, Clone)]
pub struct Polynomial {
    ctx: Arc<VarContext>,
    order: MonomialOrder,
    terms: Vec<(Rational, Monomial)>,
}

impl Polynomial {
    pub fn zero(ctx: &Arc<VarContext>, order: MonomialOrder) -> Self {
        Polynomial { ctx: ctx.clone(), order, terms: Vec::new() }
    }

    pub fn constant(ctx: &Arc<VarContext>, order: MonomialOrder, c: Rational) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(c, Monomial::one())] };
        Polynomial { ctx: ctx.clone(), order, terms }
    }

    pub fn one(ctx: &Arc<VarContext>, order: MonomialOrder) -> Self {
        Self::constant(ctx, order, Rational::one())
    }

    pub fn var(ctx: &Arc<VarContext>, order: MonomialOrder, v: Var) -> Result<Self, PolyError> {
        if v.0 >= ctx.len() {
            return Err(PolyError::UnknownVariable(alloc::format!("#{}", v.0)));
        }
        Ok(Polynomial {
            ctx: ctx.clone(),
            order,
            terms: vec![(Rational::one(), Monomial::var(v, 1)?)],
        })
    }

    /// Builds from an arbitrary term list: sorts, merges duplicates, drops
    /// zero coefficients.
    pub fn from_terms(
        ctx: &Arc<VarContext>,
        order: MonomialOrder,
        mut terms: Vec<(Rational, Monomial)>,
    ) -> Self {
        let nvars = ctx.len();
        terms.sort_unstable_by(|x, y| order.cmp(&y.1, &x.1, nvars));
        let mut merged: Vec<(Rational, Monomial)> = Vec::with_capacity(terms.len());
        for (c, m) in terms {
            if let Some(last) = merged.last_mut() {
                if last.1 == m {
                    last.0 += c;
                    if last.0.is_zero() {
                        merged.pop();
                    }
                    continue;
                }
            }
            if !c.is_zero() {
                merged.push((c, m));
            }
        }
        Polynomial { ctx: ctx.clone(), order, terms: merged }
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn terms(&self) -> &[(Rational, Monomial)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(_, m)| m.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading term under the stored order.
    pub fn leading(&self) -> Option<&(Rational, Monomial)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u16 {
        self.terms.iter().map(|(_, m)| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u16 {
        self.terms.iter().map(|(_, m)| m.exp(v)).max().unwrap_or(0)
    }

    /// Bitmask of variables with a nonzero exponent somewhere.
    pub fn vars_present(&self) -> u32 {
        let mut mask = 0u32;
        for (_, m) in &self.terms {
            for v in self.ctx.vars() {
                if m.exp(v) > 0 {
                    mask |= 1 << v.0;
                }
            }
        }
        mask
    }

    /// Re-sorts into a different monomial order (no-op when equal).
    pub fn with_order(&self, order: MonomialOrder) -> Polynomial {
        if order == self.order {
            return self.clone();
        }
        Polynomial::from_terms(&self.ctx, order, self.terms.clone())
    }

    fn check_ctx(&self, other: &Polynomial) -> Result<(), PolyError> {
        if !same_ctx(&self.ctx, &other.ctx) {
            return Err(PolyError::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ctx(other)?;
        let rhs = other.with_order(self.order);
        Ok(self.merge(&rhs, false))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ctx(other)?;
        let rhs = other.with_order(self.order);
        Ok(self.merge(&rhs, true))
    }

    /// Single-pass sorted merge; `negate` subtracts the right operand.
    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let nvars = self.ctx.len();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ca, ma) = &self.terms[i];
            let (cb, mb) = &other.terms[j];
            match self.order.cmp(ma, mb, nvars) {
                Ordering::Greater => {
                    out.push((ca.clone(), *ma));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((if negate { -cb.clone() } else { cb.clone() }, *mb));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((c, *ma));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(c, m)| {
            (if negate { -c.clone() } else { c.clone() }, *m)
        }));
        Polynomial { ctx: self.ctx.clone(), order: self.order, terms: out }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(c, m)| (-c.clone(), *m)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx, self.order);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(a, m)| (a * c, *m)).collect(),
        }
    }

    /// Multiplies by a single term (order is preserved by multiplicativity).
    pub fn mul_term(&self, c: &Rational, m: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx, self.order);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(a, t)| (a * c, t.mul(m))).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ctx(other)?;
        let rhs = other.with_order(self.order);
        if self.is_zero() || rhs.is_zero() {
            return Ok(Polynomial::zero(&self.ctx, self.order));
        }
        let mut products = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ca, ma) in &self.terms {
            for (cb, mb) in &rhs.terms {
                products.push((ca * cb, ma.mul(mb)));
            }
        }
        Ok(Polynomial::from_terms(&self.ctx, self.order, products))
    }

    /// `self - (c * m) * g` as one merged pass: the inner step of
    /// polynomial reduction.
    pub fn sub_mul_term(&self, g: &Polynomial, c: &Rational, m: &Monomial) -> Polynomial {
        debug_assert!(same_ctx(&self.ctx, &g.ctx) && self.order == g.order);
        let scaled = g.mul_term(c, m);
        self.merge(&scaled, true)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one(&self.ctx, self.order);
        for _ in 0..e {
            out = out.mul(self).expect("same context");
        }
        out
    }

    /// Formal partial derivative.
    pub fn derive(&self, v: Var) -> Result<Polynomial, PolyError> {
        if v.0 >= self.ctx.len() {
            return Err(PolyError::UnknownVariable(alloc::format!("#{}", v.0)));
        }
        let mut terms = Vec::new();
        for (c, m) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut dm = *m;
            dm.exps[v.0] -= 1;
            dm.deg -= 1;
            terms.push((c * Rational::from_integer(BigInt::from(e)), dm));
        }
        Ok(Polynomial::from_terms(&self.ctx, self.order, terms))
    }

    fn check_bindings<T>(&self, point: &[T]) -> Result<(), PolyError> {
        if point.len() != self.ctx.len() {
            return Err(PolyError::MissingBinding(self.ctx.len()));
        }
        Ok(())
    }

    /// Exact evaluation at a rational point binding every context variable.
    pub fn eval_rational(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        self.check_bindings(point)?;
        let pows = power_table(point, self, Rational::one(), |a, b| a * b);
        let mut acc = Rational::zero();
        for (c, m) in &self.terms {
            let mut t = c.clone();
            for v in self.ctx.vars() {
                let e = m.exp(v);
                if e > 0 {
                    t *= &pows[v.0][e as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Exact evaluation over a quadratic extension (all coordinates must
    /// share one radicand, enforced by QuadExt arithmetic).
    pub fn eval_quad(&self, point: &[QuadExt]) -> Result<QuadExt, PolyError> {
        self.check_bindings(point)?;
        let mut pows: Vec<Vec<QuadExt>> = Vec::with_capacity(point.len());
        for (i, val) in point.iter().enumerate() {
            let e_max = self.degree_in(Var(i)) as usize;
            let mut row = Vec::with_capacity(e_max + 1);
            row.push(QuadExt::from_rational(Rational::one()));
            for e in 1..=e_max {
                let prev = &row[e - 1];
                row.push(prev.mul(val)?);
            }
            pows.push(row);
        }
        let mut acc = QuadExt::zero();
        for (c, m) in &self.terms {
            let mut t = QuadExt::from_rational(c.clone());
            for v in self.ctx.vars() {
                let e = m.exp(v);
                if e > 0 {
                    t = t.mul(&pows[v.0][e as usize])?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Float evaluation (tracing / classification support).
    pub fn eval_f64(&self, point: &[f64]) -> Result<f64, PolyError> {
        self.check_bindings(point)?;
        let mut acc = 0.0;
        for (c, m) in &self.terms {
            let mut t = rational_to_f64(c);
            for v in self.ctx.vars() {
                let e = m.exp(v);
                if e > 0 {
                    t *= libm::pow(point[v.0], e as f64);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Largest single-monomial magnitude at a float point; the residual
    /// scale used by the tracer's vertex tolerance.
    pub fn monomial_scale_f64(&self, point: &[f64]) -> Result<f64, PolyError> {
        self.check_bindings(point)?;
        let mut scale: f64 = 0.0;
        for (c, m) in &self.terms {
            let mut t = rational_to_f64(c).abs();
            for v in self.ctx.vars() {
                let e = m.exp(v);
                if e > 0 {
                    t *= libm::pow(point[v.0].abs(), e as f64);
                }
            }
            scale = scale.max(t);
        }
        Ok(scale.max(1e-300))
    }

    /// Interval-arithmetic evaluation over a rational box.
    pub fn eval_interval(&self, point: &[Interval]) -> Result<Interval, PolyError> {
        self.check_bindings(point)?;
        let mut pows: Vec<Vec<Interval>> = Vec::with_capacity(point.len());
        for (i, val) in point.iter().enumerate() {
            let e_max = self.degree_in(Var(i)) as usize;
            let mut row = Vec::with_capacity(e_max + 1);
            row.push(Interval::point(Rational::one()));
            for e in 1..=e_max {
                row.push(val.pow(e as u32));
            }
            pows.push(row);
        }
        let mut acc = Interval::point(Rational::zero());
        for (c, m) in &self.terms {
            let mut t = Interval::point(c.clone());
            for v in self.ctx.vars() {
                let e = m.exp(v);
                if e > 0 {
                    t = t.mul(&pows[v.0][e as usize]);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Scales coefficients to coprime integers with positive leading
    /// coefficient under degrevlex. Errors on the zero polynomial.
    pub fn normalize_integer_primitive(&self) -> Result<Polynomial, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut den_lcm = BigInt::one();
        for (c, _) in &self.terms {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for (c, _) in &self.terms {
            let scaled = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&scaled);
        }
        debug_assert!(!num_gcd.is_zero());
        let factor = Rational::new(den_lcm, num_gcd);
        let mut out = self.scale(&factor);
        // Sign convention: leading coefficient positive under degrevlex.
        let canon = out.with_order(MonomialOrder::DegRevLex);
        if canon.leading().map(|(c, _)| c.is_negative()).unwrap_or(false) {
            out = out.neg();
        }
        Ok(out)
    }

    /// Content as a positive rational `c` such that `self / c` is integer
    /// primitive (sign untouched).
    pub fn rational_content(&self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        let mut den_lcm = BigInt::one();
        for (c, _) in &self.terms {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for (c, _) in &self.terms {
            let scaled = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&scaled);
        }
        Rational::new(num_gcd, den_lcm)
    }

    /// Largest coefficient size in bits (numerator or denominator), for
    /// budget accounting.
    pub fn max_coeff_bits(&self) -> u64 {
        self.terms
            .iter()
            .map(|(c, _)| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    /// Substitutes an exact rational for one variable.
    pub fn substitute(&self, v: Var, value: &Rational) -> Result<Polynomial, PolyError> {
        if v.0 >= self.ctx.len() {
            return Err(PolyError::UnknownVariable(alloc::format!("#{}", v.0)));
        }
        let e_max = self.degree_in(v) as usize;
        let mut pows = Vec::with_capacity(e_max + 1);
        pows.push(Rational::one());
        for e in 1..=e_max {
            pows.push(&pows[e - 1] * value);
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (c, m) in &self.terms {
            let e = m.exp(v);
            let mut reduced = *m;
            reduced.deg -= e;
            reduced.exps[v.0] = 0;
            terms.push((c * &pows[e as usize], reduced));
        }
        Ok(Polynomial::from_terms(&self.ctx, self.order, terms))
    }

    /// Substitutes `v -> v + c` (coordinate translation).
    pub fn shift(&self, v: Var, c: &Rational) -> Result<Polynomial, PolyError> {
        if v.0 >= self.ctx.len() {
            return Err(PolyError::UnknownVariable(alloc::format!("#{}", v.0)));
        }
        if c.is_zero() {
            return Ok(self.clone());
        }
        let mut terms: Vec<(Rational, Monomial)> = Vec::new();
        for (coeff, m) in &self.terms {
            let e = m.exp(v) as u32;
            let mut base = *m;
            base.deg -= e as u16;
            base.exps[v.0] = 0;
            // (v + c)^e expanded binomially.
            let mut binom = Rational::one();
            let mut cpow = Rational::one();
            for j in (0..=e).rev() {
                // coefficient C(e, j) * c^(e-j), exponent j
                let mut t = base;
                t.exps[v.0] = j as u16;
                t.deg += j as u16;
                terms.push((coeff * &binom * &cpow, t));
                if j > 0 {
                    binom *= Rational::new(BigInt::from(j), BigInt::from(e - j + 1));
                    cpow *= c;
                }
            }
        }
        Ok(Polynomial::from_terms(&self.ctx, self.order, terms))
    }

    /// Dense low-to-high coefficients, requiring all terms to involve only
    /// the variable `v`.
    pub fn univariate_coeffs(&self, v: Var) -> Result<Vec<Rational>, PolyError> {
        let mut coeffs = vec![Rational::zero(); self.degree_in(v) as usize + 1];
        for (c, m) in &self.terms {
            if m.total_degree() != m.exp(v) {
                return Err(PolyError::NotUnivariate);
            }
            coeffs[m.exp(v) as usize] = c.clone();
        }
        Ok(coeffs)
    }

    /// Builds a polynomial in `v` from dense low-to-high coefficients.
    pub fn from_univariate(
        ctx: &Arc<VarContext>,
        order: MonomialOrder,
        v: Var,
        coeffs: &[Rational],
    ) -> Result<Polynomial, PolyError> {
        let mut terms = Vec::new();
        for (e, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.push((c.clone(), Monomial::var(v, e as u16)?));
            }
        }
        Ok(Polynomial::from_terms(ctx, order, terms))
    }

    /// Reinterprets this polynomial in another context; `var_map[i]` gives
    /// the target slot of source variable `i`, `None` only being legal for
    /// variables that never occur.
    pub fn map_context(
        &self,
        target: &Arc<VarContext>,
        var_map: &[Option<Var>],
        order: MonomialOrder,
    ) -> Result<Polynomial, PolyError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (c, m) in &self.terms {
            let mut out = Monomial::one();
            for v in self.ctx.vars() {
                let e = m.exp(v);
                if e == 0 {
                    continue;
                }
                match var_map.get(v.0).copied().flatten() {
                    Some(tv) => {
                        if tv.0 >= target.len() {
                            return Err(PolyError::UnknownVariable(String::from(
                                self.ctx.name(v),
                            )));
                        }
                        out.exps[tv.0] = e;
                        out.deg += e;
                    }
                    None => {
                        return Err(PolyError::UnknownVariable(String::from(self.ctx.name(v))))
                    }
                }
            }
            terms.push((c.clone(), out));
        }
        Ok(Polynomial::from_terms(target, order, terms))
    }

    /// Canonical text: degrevlex descending terms, explicit `^` and `*`.
    pub fn canonical_text(&self) -> String {
        let canon = self.with_order(MonomialOrder::DegRevLex);
        if canon.is_zero() {
            return String::from("0");
        }
        let mut out = String::new();
        for (i, (c, m)) in canon.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { -c.clone() } else { c.clone() };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let coeff_is_one = abs.is_one();
            let mut printed = false;
            if !coeff_is_one || m.is_one() {
                if abs.denom().is_one() {
                    out.push_str(&alloc::format!("{}", abs.numer()));
                } else {
                    out.push_str(&alloc::format!("{}/{}", abs.numer(), abs.denom()));
                }
                printed = true;
            }
            for v in canon.ctx.vars() {
                let e = m.exp(v);
                if e == 0 {
                    continue;
                }
                if printed {
                    out.push('*');
                }
                out.push_str(canon.ctx.name(v));
                if e > 1 {
                    out.push_str(&alloc::format!("^{}", e));
                }
                printed = true;
            }
        }
        out
    }
}

fn power_table<T: Clone>(
    point: &[T],
    poly: &Polynomial,
    one: T,
    mul: impl Fn(&T, &T) -> T,
) -> Vec<Vec<T>> {
    let mut pows = Vec::with_capacity(point.len());
    for (i, val) in point.iter().enumerate() {
        let e_max = poly.degree_in(Var(i)) as usize;
        let mut row = Vec::with_capacity(e_max + 1);
        row.push(one.clone());
        for e in 1..=e_max {
            row.push(mul(&row[e - 1], val));
        }
        pows.push(row);
    }
    pows
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if !same_ctx(&self.ctx, &other.ctx) {
            return false;
        }
        if self.order == other.order {
            return self.terms == other.terms;
        }
        self.with_order(MonomialOrder::DegRevLex).terms
            == other.with_order(MonomialOrder::DegRevLex).terms
    }
}

impl Eq for Polynomial {}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}


#[cfg(test)]
mod proptests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn ctx3() -> Arc<VarContext> {
        VarContext::new(["x", "y", "z"]).unwrap()
    }

    prop_compose! {
        fn arb_monomial()(a in 0u16..6, b in 0u16..6, c in 0u16..6) -> Monomial {
            Monomial::from_exps(&[a, b, c]).unwrap()
        }
    }

    prop_compose! {
        fn arb_poly()(terms in proptest::collection::vec(
            ((-20i64..20, 1i64..8), arb_monomial()), 0..12)) -> Polynomial {
            let ctx = ctx3();
            let terms = terms.into_iter()
                .map(|((n, d), m)| (rat(n, d), m))
                .collect();
            Polynomial::from_terms(&ctx, MonomialOrder::DegRevLex, terms)
        }
    }

    proptest! {
        #[test]
        fn ring_axioms(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
            let fg_h = f.mul(&g).unwrap().mul(&h).unwrap();
            let f_gh = f.mul(&g.mul(&h).unwrap()).unwrap();
            prop_assert_eq!(fg_h, f_gh);
            let dist = f.mul(&g.add(&h).unwrap()).unwrap();
            let expand = f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap();
            prop_assert_eq!(dist, expand);
        }

        #[test]
        fn derivative_matches_finite_differences(f in arb_poly()) {
            let ctx = f.context().clone();
            let x = ctx.index_of("x").unwrap();
            let df = f.derive(x).unwrap();
            let h = 1e-5;
            let p = [0.37, -0.81, 0.23];
            let mut hi = p; hi[0] += h;
            let mut lo = p; lo[0] -= h;
            let numeric = (f.eval_f64(&hi).unwrap() - f.eval_f64(&lo).unwrap()) / (2.0 * h);
            let symbolic = df.eval_f64(&p).unwrap();
            prop_assert!((numeric - symbolic).abs() < 1e-6 * (1.0 + symbolic.abs()));
        }

        #[test]
        fn normalization_is_idempotent_and_preserves_roots(f in arb_poly()) {
            prop_assume!(!f.is_zero());
            let n1 = f.normalize_integer_primitive().unwrap();
            let n2 = n1.normalize_integer_primitive().unwrap();
            prop_assert_eq!(&n1, &n2);
            // same zero set: values at a random point differ by the scale factor
            let pt = [rat(3, 7), rat(-2, 5), rat(1, 3)];
            let a = f.eval_rational(&pt).unwrap();
            let b = n1.eval_rational(&pt).unwrap();
            prop_assert_eq!(a.is_zero(), b.is_zero());
        }

        #[test]
        fn orders_are_total_and_multiplicative(
            m1 in arb_monomial(), m2 in arb_monomial(), t in arb_monomial()) {
            for order in [MonomialOrder::Lex, MonomialOrder::DegRevLex, MonomialOrder::Block(1)] {
                let c = order.cmp(&m1, &m2, 3);
                prop_assert_eq!(order.cmp(&m2, &m1, 3), c.reverse());
                if c != core::cmp::Ordering::Equal {
                    let lifted = order.cmp(&m1.mul(&t), &m2.mul(&t), 3);
                    prop_assert_eq!(lifted, c);
                }
                // well-founded over these bounded exponents: 1 is minimal
                prop_assert_ne!(
                    order.cmp(&m1.mul(&t), &Monomial::one(), 3),
                    core::cmp::Ordering::Less
                );
            }
        }

        #[test]
        fn serialization_shape_has_no_double_signs(f in arb_poly()) {
            let text = f.canonical_text();
            prop_assert!(!text.contains("+-"));
            prop_assert!(!text.contains("- -"));
            prop_assert!(!text.contains("  "));
        }
    }
}
