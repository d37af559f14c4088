//! Certified real solving for the singular-point analysis of plane curves.
//!
//! The entry points mirror the stages of that analysis: [`critical_system`]
//! forms `{p, p_x, p_y}`, [`solve_real_zero_dim`] finds its real solutions
//! with exact coordinates where possible and isolating boxes otherwise,
//! [`classify_point`] applies the Hessian-determinant test with a
//! lowest-form fallback, and [`acnodes`] composes the pipeline to list the
//! certified isolated real points of a curve.
//!
//! Exactness contract: every decision labelled certified is backed by
//! rational or quadratic-extension arithmetic, never floats. Where a
//! decision would need machinery beyond that (coordinates of algebraic
//! degree three or more meeting a genuinely bivariate generator), the
//! candidate is reported as unresolved rather than guessed.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact::{rat_sign, ExactError, Interval, QuadExt, Rational};
use crate::factorize::{self, FactorError};
use crate::groebner::{
    eliminate, locus_polynomial, GroebnerConfig, GroebnerError, PolySystem,
};
use crate::multipoly::{PolyError, Polynomial, Var};
use crate::upoly;

/// Reported isolating boxes are at most this wide (2^-30).
pub const BOX_PRECISION: u32 = 30;

/// Deepest refinement tried before a membership question is given up as
/// undecided (2^-120).
const REFINE_FLOOR: u32 = 120;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RealSolveError {
    #[error("constant polynomial defines no curve")]
    ConstantInput,
    #[error("curve analysis needs a polynomial in exactly two variables")]
    NotPlaneCurve,
    #[error("system is not zero-dimensional: a coordinate remains free")]
    NotZeroDimensional,
    #[error("point is not an exact critical point of the curve")]
    NotCritical,
    #[error("operation needs exact coordinates, got an isolating box")]
    InexactPoint,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl From<FactorError> for RealSolveError {
    fn from(e: FactorError) -> Self {
        match e {
            FactorError::Poly(p) => RealSolveError::Poly(p),
            _ => RealSolveError::Poly(PolyError::ZeroPolynomial),
        }
    }
}

/// One coordinate of a solved point: exact in the rationals, exact in a real
/// quadratic extension, or a certified isolating interval.
#[derive(Debug, Clone, PartialEq)]
pub enum Coordinate {
    Rational(Rational),
    Quadratic(QuadExt),
    Isolated(Interval),
}

impl Coordinate {
    /// Float approximation (rendering support; never used for decisions).
    pub fn to_f64(&self) -> f64 {
        match self {
            Coordinate::Rational(r) => crate::exact::rational_to_f64(r),
            Coordinate::Quadratic(q) => q.to_f64(),
            Coordinate::Isolated(iv) => crate::exact::rational_to_f64(&iv.midpoint()),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Coordinate::Isolated(_))
    }
}

impl core::fmt::Display for Coordinate {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Coordinate::Rational(r) => write!(f, "{r}"),
            Coordinate::Quadratic(q) => write!(f, "{q}"),
            Coordinate::Isolated(iv) => write!(f, "{iv}"),
        }
    }
}

/// Outcome of the local analysis at a critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    /// Isolated real point: det H > 0 at an on-curve critical point.
    Acnode,
    /// Transversal self-crossing: det H < 0.
    Crunode,
    /// det H = 0 but the lowest nonvanishing form is definite, which still
    /// certifies isolation.
    DegenerateIsolated,
    /// No certificate either way.
    Unresolved,
    /// Critical point of the polynomial lying off the curve.
    NotOnCurve,
}

impl PointKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PointKind::Acnode => "acnode",
            PointKind::Crunode => "crunode",
            PointKind::DegenerateIsolated => "degenerate_isolated",
            PointKind::Unresolved => "unresolved",
            PointKind::NotOnCurve => "not_on_curve",
        }
    }
}

impl core::fmt::Display for PointKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A real solution of a zero-dimensional system.
#[derive(Debug, Clone)]
pub struct SolvedPoint {
    pub x: Coordinate,
    pub y: Coordinate,
    /// False for candidates that survived refinement to the precision floor
    /// without an exact membership decision; they are reported rather than
    /// silently dropped.
    pub certified: bool,
}

/// A classified critical point of a plane curve.
#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub x: Coordinate,
    pub y: Coordinate,
    /// True only when curve membership is certified exactly.
    pub on_curve: bool,
    pub kind: PointKind,
    /// Sign of det H = p_xx p_yy - p_xy^2 at the point; `None` when the
    /// coordinates are not exact.
    pub hessian_det_sign: Option<i8>,
}

/// The two plane variables of a curve polynomial.
///
/// A two-variable context names the plane directly (a locus may degenerate
/// to a line using only one of them); in a wider context exactly two
/// variables must occur in `p`.
pub(crate) fn plane_vars(p: &Polynomial) -> Result<(Var, Var), RealSolveError> {
    if p.is_constant() {
        return Err(RealSolveError::ConstantInput);
    }
    let ctx = p.context();
    if ctx.len() == 2 {
        return Ok((Var(0), Var(1)));
    }
    let mask = p.vars_present();
    if mask.count_ones() != 2 {
        return Err(RealSolveError::NotPlaneCurve);
    }
    let vx = Var(mask.trailing_zeros() as usize);
    let vy = Var(31 - mask.leading_zeros() as usize);
    Ok((vx, vy))
}

/// The critical system `{p, dp/dx, dp/dy}` of a plane curve. Identically
/// zero partials (a curve ignoring one axis) are dropped by the system
/// constructor.
pub fn critical_system(p: &Polynomial) -> Result<PolySystem, RealSolveError> {
    let (vx, vy) = plane_vars(p)?;
    let px = p.derive(vx)?;
    let py = p.derive(vy)?;
    Ok(PolySystem::new(vec![p.clone(), px, py], Vec::new())?)
}

/// Generator of `ideal(sys) ∩ Q[keep]` as a squarefree primitive univariate
/// in a fresh one-variable context. `Ok(None)` means the ideal is the whole
/// ring, i.e. the solution set is empty.
fn axis_polynomial(
    sys: &PolySystem,
    keep: Var,
) -> Result<Option<Polynomial>, RealSolveError> {
    let ctx = sys.context();
    let elim: Vec<Var> = ctx.vars().filter(|v| *v != keep).collect();
    let sub = PolySystem::new(sys.generators().to_vec(), elim)?;
    let el = eliminate(&sub, &GroebnerConfig::default())?;
    match locus_polynomial(&el.polys) {
        Ok(p) => Ok(Some(p)),
        Err(GroebnerError::EmptyLocus) => Ok(None),
        Err(GroebnerError::WholePlaneLocus) => Err(RealSolveError::NotZeroDimensional),
        Err(e) => Err(e.into()),
    }
}

/// A real root of one axis univariate, kept rich enough to refine further.
#[derive(Debug, Clone)]
enum AxisRoot {
    Rat(Rational),
    Quad(QuadExt),
    /// Root of an irreducible factor of degree >= 3 with its minimal
    /// polynomial (dense, low to high) for on-demand refinement.
    Boxed { iv: Interval, minpoly: Vec<Rational> },
}

/// Enclosure of sqrt(n) to within `width` by bisection on t^2 - n.
fn sqrt_enclosure(n: &BigInt, width: &Rational) -> Interval {
    debug_assert!(*n >= BigInt::from(2));
    let f = vec![
        -Rational::from_integer(n.clone()),
        Rational::zero(),
        Rational::one(),
    ];
    let hi = Rational::from_integer(n + BigInt::one());
    let bracket = Interval::new(Rational::zero(), hi);
    upoly::refine_to_width(&f, &bracket, width)
}

impl AxisRoot {
    /// Rational enclosure no wider than `width`.
    fn enclosure(&self, width: &Rational) -> Interval {
        match self {
            AxisRoot::Rat(r) => Interval::point(r.clone()),
            AxisRoot::Quad(q) => {
                let v = q.radical_part();
                if v.is_zero() {
                    return Interval::point(q.rational_part().clone());
                }
                // width of u + v*I is |v| * width(I)
                let target = width / v.abs();
                let s = sqrt_enclosure(q.radicand(), &target);
                s.scale(v).add(&Interval::point(q.rational_part().clone()))
            }
            AxisRoot::Boxed { iv, minpoly } => {
                if &iv.width() <= width {
                    iv.clone()
                } else {
                    upoly::refine_to_width(minpoly, iv, width)
                }
            }
        }
    }

    fn coordinate(&self) -> Coordinate {
        match self {
            AxisRoot::Rat(r) => Coordinate::Rational(r.clone()),
            AxisRoot::Quad(q) => Coordinate::Quadratic(q.clone()),
            AxisRoot::Boxed { iv, .. } => Coordinate::Isolated(iv.clone()),
        }
    }

    fn as_exact(&self) -> Option<QuadExt> {
        match self {
            AxisRoot::Rat(r) => Some(QuadExt::from_rational(r.clone())),
            AxisRoot::Quad(q) => Some(q.clone()),
            AxisRoot::Boxed { .. } => None,
        }
    }
}

/// Total order on distinct axis roots: exact sign tests where the values
/// share a field, enclosure refinement otherwise. Distinct algebraic numbers
/// always separate; the precision floor is a safety net only.
fn cmp_axis_roots(a: &AxisRoot, b: &AxisRoot) -> core::cmp::Ordering {
    use core::cmp::Ordering;
    if let (Some(qa), Some(qb)) = (a.as_exact(), b.as_exact()) {
        if let Ok(diff) = qa.sub(&qb) {
            return match diff.sign() {
                s if s < 0 => Ordering::Less,
                0 => Ordering::Equal,
                _ => Ordering::Greater,
            };
        }
        // distinct radicands: fall through to enclosures
    }
    let mut precision = BOX_PRECISION;
    while precision <= REFINE_FLOOR {
        let width = pow2_width(precision);
        let ia = a.enclosure(&width);
        let ib = b.enclosure(&width);
        if ia.hi() < ib.lo() {
            return Ordering::Less;
        }
        if ib.hi() < ia.lo() {
            return Ordering::Greater;
        }
        precision += 30;
    }
    let wa = a.enclosure(&pow2_width(REFINE_FLOOR));
    let wb = b.enclosure(&pow2_width(REFINE_FLOOR));
    wa.lo().cmp(wb.lo()).then_with(|| wa.hi().cmp(wb.hi()))
}

fn pow2_width(precision: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2).pow(precision))
}

/// All real roots of a squarefree univariate (one-variable context), exact
/// through quadratic factors, boxed beyond, sorted ascending with pairwise
/// disjoint reported boxes.
fn axis_roots(f: &Polynomial) -> Result<Vec<AxisRoot>, RealSolveError> {
    let v = Var(0);
    let fact = factorize::factor_univariate(f)?;
    let mut roots: Vec<AxisRoot> = Vec::new();
    for (factor, _) in &fact.factors {
        let dense = factor.univariate_coeffs(v)?;
        match upoly::degree(&dense) {
            None | Some(0) => {}
            Some(1) => roots.push(AxisRoot::Rat(-&dense[0] / &dense[1])),
            Some(2) => {
                let (c, b, a) = (&dense[0], &dense[1], &dense[2]);
                let disc = b * b - Rational::from_integer(BigInt::from(4)) * a * c;
                if !disc.is_positive() {
                    // negative: complex pair; zero cannot happen (the factor
                    // would be a rational square, hence reducible)
                    debug_assert!(disc.is_negative());
                    continue;
                }
                // sqrt(num/den) = sqrt(num*den)/den
                let radicand = disc.numer() * disc.denom();
                let center = -b / (Rational::from_integer(BigInt::from(2)) * a);
                let spread = (Rational::from_integer(BigInt::from(2))
                    * a
                    * Rational::from_integer(disc.denom().clone()))
                .recip()
                .abs();
                let low = QuadExt::new(center.clone(), -spread.clone(), radicand.clone())?;
                let high = QuadExt::new(center, spread, radicand)?;
                debug_assert!(!low.is_rational());
                roots.push(AxisRoot::Quad(low));
                roots.push(AxisRoot::Quad(high));
            }
            Some(_) => {
                for iv in upoly::real_roots_refined(&dense, BOX_PRECISION) {
                    roots.push(AxisRoot::Boxed { iv, minpoly: dense.clone() });
                }
            }
        }
    }
    roots.sort_by(cmp_axis_roots);
    separate_adjacent(&mut roots);
    Ok(roots)
}

/// Tightens boxes until neighbours are disjoint. Roots are distinct, so the
/// loop terminates; the depth cap is a safety net far beyond 2^-30 use.
fn separate_adjacent(roots: &mut [AxisRoot]) {
    for i in 1..roots.len() {
        let mut precision = BOX_PRECISION;
        while precision <= 4 * REFINE_FLOOR {
            let w = pow2_width(precision);
            let prev = roots[i - 1].enclosure(&w);
            let cur = roots[i].enclosure(&w);
            if prev.hi() < cur.lo() {
                for (slot, iv) in [(i - 1, prev), (i, cur)] {
                    if let AxisRoot::Boxed { iv: stored, .. } = &mut roots[slot] {
                        *stored = iv;
                    }
                }
                break;
            }
            precision += 30;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Certified,
    Rejected,
    Undecided,
}

/// Does `g` vanish at the exact pair? `Err` only for genuinely mixed
/// quadratic extensions, which the callers treat as "not decidable exactly".
fn eval_exact_pair(
    g: &Polynomial,
    vx: Var,
    vy: Var,
    x: &QuadExt,
    y: &QuadExt,
) -> Result<QuadExt, PolyError> {
    let ctx = g.context();
    let mut point = vec![QuadExt::zero(); ctx.len()];
    point[vx.0] = x.clone();
    point[vy.0] = y.clone();
    g.eval_quad(&point)
}

/// Exact zero test of `g` at a mixed rational/boxed pair, decidable both
/// ways: substituting the rational coordinate leaves a univariate whose
/// value at the boxed root is zero iff the root's (irreducible) minimal
/// polynomial divides it.
fn zero_by_minpoly(
    g: &Polynomial,
    sub_var: Var,
    sub_val: &Rational,
    box_var: Var,
    minpoly: &[Rational],
) -> Result<bool, RealSolveError> {
    let specialized = g.substitute(sub_var, sub_val)?;
    if specialized.is_zero() {
        return Ok(true);
    }
    let dense = specialized.univariate_coeffs(box_var)?;
    Ok(upoly::divides(minpoly, &dense))
}

/// Decides whether `g` vanishes at the pair, or reports `None` when no
/// exact route applies and interval refinement cannot separate the value
/// from zero.
fn zero_at_pair(
    g: &Polynomial,
    vx: Var,
    vy: Var,
    x: &AxisRoot,
    y: &AxisRoot,
) -> Result<Option<bool>, RealSolveError> {
    match (x, y) {
        (AxisRoot::Boxed { iv: _, minpoly }, AxisRoot::Rat(r)) => {
            return Ok(Some(zero_by_minpoly(g, vy, r, vx, minpoly)?));
        }
        (AxisRoot::Rat(r), AxisRoot::Boxed { iv: _, minpoly }) => {
            return Ok(Some(zero_by_minpoly(g, vx, r, vy, minpoly)?));
        }
        _ => {}
    }
    if let (Some(qx), Some(qy)) = (x.as_exact(), y.as_exact()) {
        match eval_exact_pair(g, vx, vy, &qx, &qy) {
            Ok(val) => return Ok(Some(val.is_zero())),
            // mixed extensions: fall through to intervals
            Err(PolyError::Exact(ExactError::RadicandMismatch(_, _))) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let ctx = g.context();
    let mut precision = BOX_PRECISION;
    while precision <= REFINE_FLOOR {
        let width = pow2_width(precision);
        let mut point = vec![Interval::point(Rational::zero()); ctx.len()];
        point[vx.0] = x.enclosure(&width);
        point[vy.0] = y.enclosure(&width);
        let value = g.eval_interval(&point)?;
        if value.strict_sign().is_some() {
            return Ok(Some(false));
        }
        precision += 30;
    }
    Ok(None)
}

/// Membership verdict for a candidate pair against every generator.
fn verify_pair(
    gens: &[Polynomial],
    vx: Var,
    vy: Var,
    x: &AxisRoot,
    y: &AxisRoot,
) -> Result<Verdict, RealSolveError> {
    let mut undecided = false;
    for g in gens {
        match zero_at_pair(g, vx, vy, x, y)? {
            Some(true) => {}
            Some(false) => return Ok(Verdict::Rejected),
            None => undecided = true,
        }
    }
    Ok(if undecided { Verdict::Undecided } else { Verdict::Certified })
}

struct RichPoint {
    x: AxisRoot,
    y: AxisRoot,
    certified: bool,
}

/// Core solver; see [`solve_real_zero_dim`] for the public contract.
fn solve_rich(sys: &PolySystem) -> Result<Vec<RichPoint>, RealSolveError> {
    // a nonzero constant generator makes the system inconsistent
    if sys.generators().iter().any(|g| g.is_constant()) {
        return Ok(Vec::new());
    }
    let mask = sys
        .generators()
        .iter()
        .fold(0u32, |m, g| m | g.vars_present());
    let vx = Var(mask.trailing_zeros() as usize);
    let vy = Var(31 - mask.leading_zeros() as usize);
    match mask.count_ones() {
        0 => unreachable!("nonconstant generators carry variables"),
        1 => {
            // single active coordinate: solvable only if inconsistent,
            // otherwise the other plane coordinate is free
            return match axis_polynomial(sys, vx)? {
                None => Ok(Vec::new()),
                Some(_) => Err(RealSolveError::NotZeroDimensional),
            };
        }
        2 => {}
        _ => return Err(RealSolveError::NotPlaneCurve),
    }

    let Some(fx) = axis_polynomial(sys, vx)? else {
        return Ok(Vec::new());
    };
    let Some(fy) = axis_polynomial(sys, vy)? else {
        return Ok(Vec::new());
    };
    let x_roots = axis_roots(&fx)?;
    let y_roots = axis_roots(&fy)?;

    let mut out = Vec::new();
    for xr in &x_roots {
        for yr in &y_roots {
            match verify_pair(sys.generators(), vx, vy, xr, yr)? {
                Verdict::Rejected => {}
                Verdict::Certified => out.push(RichPoint {
                    x: xr.clone(),
                    y: yr.clone(),
                    certified: true,
                }),
                Verdict::Undecided => out.push(RichPoint {
                    x: xr.clone(),
                    y: yr.clone(),
                    certified: false,
                }),
            }
        }
    }
    Ok(out)
}

/// All real solutions of a zero-dimensional plane system.
///
/// Coordinates are exact whenever the isolating univariate factor has degree
/// at most two (rational or `u + v*sqrt(n)`), and certified isolating boxes
/// of width at most 2^-30 otherwise. Output is sorted by x then y. Candidate
/// pairs that interval refinement can neither confirm nor reject at the
/// precision floor are returned with `certified = false`.
///
/// Errors with [`RealSolveError::NotZeroDimensional`] when some coordinate
/// remains free (detected by the axis eliminations coming back empty).
pub fn solve_real_zero_dim(sys: &PolySystem) -> Result<Vec<SolvedPoint>, RealSolveError> {
    Ok(solve_rich(sys)?
        .into_iter()
        .map(|r| SolvedPoint {
            x: r.x.coordinate(),
            y: r.y.coordinate(),
            certified: r.certified,
        })
        .collect())
}

fn coord_exact(c: &Coordinate) -> Result<QuadExt, RealSolveError> {
    match c {
        Coordinate::Rational(r) => Ok(QuadExt::from_rational(r.clone())),
        Coordinate::Quadratic(q) => Ok(q.clone()),
        Coordinate::Isolated(_) => Err(RealSolveError::InexactPoint),
    }
}

/// Exact curve-membership test at an exact point.
pub fn is_on_curve(
    p: &Polynomial,
    x: &Coordinate,
    y: &Coordinate,
) -> Result<bool, RealSolveError> {
    let (vx, vy) = plane_vars(p)?;
    let qx = coord_exact(x)?;
    let qy = coord_exact(y)?;
    Ok(eval_exact_pair(p, vx, vy, &qx, &qy)?.is_zero())
}

/// Taylor shift `p(x + a, y + b)` for rational offsets, by Horner in each
/// variable.
fn translate(
    p: &Polynomial,
    vx: Var,
    a: &Rational,
    vy: Var,
    b: &Rational,
) -> Result<Polynomial, PolyError> {
    let mut out = p.clone();
    for (v, offset) in [(vx, a), (vy, b)] {
        if offset.is_zero() {
            continue;
        }
        let ctx = out.context().clone();
        let order = out.order();
        let shifted_var = Polynomial::var(&ctx, order, v)?
            .add(&Polynomial::constant(&ctx, order, offset.clone()))?;
        let coeffs = factorize::coeffs_in(&out, v);
        let mut acc = Polynomial::constant(&ctx, order, Rational::zero());
        for c in coeffs.iter().rev() {
            acc = acc.mul(&shifted_var)?.add(c)?;
        }
        out = acc;
    }
    Ok(out)
}

/// Definiteness of the lowest nonvanishing homogeneous form of `q` at the
/// origin: a sufficient certificate that the origin is isolated in `q = 0`.
///
/// The form is definite iff its degree is even, both pure-power coefficients
/// are nonzero with a common sign, and (after normalizing that sign
/// positive) both dehomogenizations have no real roots.
fn lowest_form_definite(q: &Polynomial, vx: Var, vy: Var) -> bool {
    let Some(d) = q
        .terms()
        .iter()
        .map(|(_, m)| m.exp(vx) + m.exp(vy))
        .min()
    else {
        return false;
    };
    if d == 0 || d % 2 == 1 {
        return false;
    }
    let mut coeffs = vec![Rational::zero(); d as usize + 1];
    for (c, m) in q.terms() {
        let i = m.exp(vx);
        if i + m.exp(vy) == d {
            coeffs[i as usize] += c;
        }
    }
    let s_low = rat_sign(&coeffs[0]);
    let s_high = rat_sign(&coeffs[d as usize]);
    if s_low == 0 || s_low != s_high {
        return false;
    }
    if s_low < 0 {
        for c in coeffs.iter_mut() {
            *c = -c.clone();
        }
    }
    let chart_x: Vec<Rational> = coeffs.iter().rev().cloned().collect();
    upoly::count_real_roots(&chart_x) == 0 && upoly::count_real_roots(&coeffs) == 0
}

/// Classification with the Hessian determinant sign it rests on.
fn classify_exact(
    p: &Polynomial,
    x: &Coordinate,
    y: &Coordinate,
) -> Result<(PointKind, i8), RealSolveError> {
    let (vx, vy) = plane_vars(p)?;
    let qx = coord_exact(x)?;
    let qy = coord_exact(y)?;
    let px = p.derive(vx)?;
    let py = p.derive(vy)?;
    for g in [p, &px, &py] {
        if !eval_exact_pair(g, vx, vy, &qx, &qy)?.is_zero() {
            return Err(RealSolveError::NotCritical);
        }
    }
    let pxx = px.derive(vx)?;
    let pxy = px.derive(vy)?;
    let pyy = py.derive(vy)?;
    let det = pxx.mul(&pyy)?.sub(&pxy.mul(&pxy)?)?;
    let sign = eval_exact_pair(&det, vx, vy, &qx, &qy)?.sign();
    if sign > 0 {
        return Ok((PointKind::Acnode, 1));
    }
    if sign < 0 {
        return Ok((PointKind::Crunode, -1));
    }
    // degenerate Hessian: lowest-form certificate, rational points only
    let (Some(a), Some(b)) = (qx.as_rational(), qy.as_rational()) else {
        return Ok((PointKind::Unresolved, 0));
    };
    let shifted = translate(p, vx, a, vy, b)?;
    if lowest_form_definite(&shifted, vx, vy) {
        Ok((PointKind::DegenerateIsolated, 0))
    } else {
        Ok((PointKind::Unresolved, 0))
    }
}

/// Local type of an exact on-curve critical point of `p`.
///
/// det H > 0 certifies an acnode (local extremum with value zero, hence an
/// isolated curve point); det H < 0 a crunode; det H = 0 falls back to the
/// lowest nonvanishing homogeneous form, whose definiteness still certifies
/// isolation, and anything weaker stays unresolved.
pub fn classify_point(
    p: &Polynomial,
    x: &Coordinate,
    y: &Coordinate,
) -> Result<PointKind, RealSolveError> {
    Ok(classify_exact(p, x, y)?.0)
}

/// Every real critical point of `p` (gradient zeros), flagged against the
/// curve: on-curve points get the full local classification, off-curve ones
/// are labelled [`PointKind::NotOnCurve`].
///
/// When the gradient ideal is positive-dimensional the survey falls back to
/// the on-curve singular system `{p, p_x, p_y}`, which is always
/// zero-dimensional for squarefree `p`; off-curve critical points are then
/// not reported.
pub fn critical_points(p: &Polynomial) -> Result<Vec<CriticalPoint>, RealSolveError> {
    let (vx, vy) = plane_vars(p)?;
    let px = p.derive(vx)?;
    let py = p.derive(vy)?;
    let gradient = PolySystem::new(vec![px, py], Vec::new())?;
    let rich = match solve_rich(&gradient) {
        Ok(r) => r,
        Err(RealSolveError::NotZeroDimensional) => solve_rich(&critical_system(p)?)?,
        Err(e) => return Err(e),
    };

    let mut out = Vec::new();
    for r in rich {
        if !r.certified {
            out.push(CriticalPoint {
                x: r.x.coordinate(),
                y: r.y.coordinate(),
                on_curve: false,
                kind: PointKind::Unresolved,
                hessian_det_sign: None,
            });
            continue;
        }
        let on = zero_at_pair(p, vx, vy, &r.x, &r.y)?;
        let x = r.x.coordinate();
        let y = r.y.coordinate();
        match on {
            Some(false) => {
                let sign = match (r.x.as_exact(), r.y.as_exact()) {
                    (Some(qx), Some(qy)) => hessian_sign(p, vx, vy, &qx, &qy)?,
                    _ => None,
                };
                out.push(CriticalPoint {
                    x,
                    y,
                    on_curve: false,
                    kind: PointKind::NotOnCurve,
                    hessian_det_sign: sign,
                });
            }
            Some(true) if x.is_exact() && y.is_exact() => {
                let (kind, sign) = classify_exact(p, &x, &y)?;
                out.push(CriticalPoint {
                    x,
                    y,
                    on_curve: true,
                    kind,
                    hessian_det_sign: Some(sign),
                });
            }
            Some(true) => {
                // on the curve but beyond quadratic coordinates: the local
                // type would need exact arithmetic in a higher field
                out.push(CriticalPoint {
                    x,
                    y,
                    on_curve: true,
                    kind: PointKind::Unresolved,
                    hessian_det_sign: None,
                });
            }
            None => out.push(CriticalPoint {
                x,
                y,
                on_curve: false,
                kind: PointKind::Unresolved,
                hessian_det_sign: None,
            }),
        }
    }
    Ok(out)
}

fn hessian_sign(
    p: &Polynomial,
    vx: Var,
    vy: Var,
    qx: &QuadExt,
    qy: &QuadExt,
) -> Result<Option<i8>, RealSolveError> {
    let pxx = p.derive(vx)?.derive(vx)?;
    let pxy = p.derive(vx)?.derive(vy)?;
    let pyy = p.derive(vy)?.derive(vy)?;
    let det = pxx.mul(&pyy)?.sub(&pxy.mul(&pxy)?)?;
    match eval_exact_pair(&det, vx, vy, qx, qy) {
        Ok(v) => Ok(Some(v.sign() as i8)),
        Err(PolyError::Exact(ExactError::RadicandMismatch(_, _))) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn filter_isolated(points: Vec<CriticalPoint>) -> Vec<CriticalPoint> {
    points
        .into_iter()
        .filter(|c| {
            matches!(
                c.kind,
                PointKind::Acnode | PointKind::DegenerateIsolated | PointKind::Unresolved
            )
        })
        .collect()
}

/// Candidate isolated point with whether curve membership is already settled.
struct Candidate {
    x: Coordinate,
    y: Coordinate,
    known_on_curve: bool,
}

fn coordinates_coincide(a: &Coordinate, b: &Coordinate) -> bool {
    match (a, b) {
        // exact coordinates are in canonical form, so structural equality
        // is mathematical equality
        (Coordinate::Rational(_), Coordinate::Rational(_))
        | (Coordinate::Quadratic(_), Coordinate::Quadratic(_)) => a == b,
        // overlapping boxes from different subsystems are taken as one point;
        // distinct roots get separated boxes within each solve
        (Coordinate::Isolated(p), Coordinate::Isolated(q)) => {
            p.lo() <= q.hi() && q.lo() <= p.hi()
        }
        _ => false,
    }
}

fn push_candidate(candidates: &mut Vec<Candidate>, cand: Candidate) {
    for c in candidates.iter_mut() {
        if coordinates_coincide(&c.x, &cand.x) && coordinates_coincide(&c.y, &cand.y) {
            c.known_on_curve |= cand.known_on_curve;
            return;
        }
    }
    candidates.push(cand);
}

/// Certified isolated real points of the curve `p = 0`, plus any candidates
/// the certification could not settle (flagged unresolved, never dropped).
/// The squarefree part is taken first, so input multiplicity is harmless.
///
/// Reducible curves are surveyed factor by factor: an isolated point of a
/// union is a critical point of some factor or lies on two factors at once,
/// so the candidates come from per-factor gradient systems and pairwise
/// intersection systems, all of much lower degree than the gradient of the
/// full product. Each candidate is then classified against the product.
pub fn acnodes(p: &Polynomial) -> Result<Vec<CriticalPoint>, RealSolveError> {
    let sf = factorize::squarefree_part(p)?;
    let fact = factorize::factor_bivariate(&sf)?;
    if fact.factors.len() <= 1 {
        return Ok(filter_isolated(critical_points(&sf)?));
    }

    let mut candidates: Vec<Candidate> = Vec::new();
    for (q, _) in &fact.factors {
        for c in critical_points(q)? {
            // an off-curve gradient zero of a factor is off the union as
            // well; undecided ones stay in play
            if c.on_curve {
                push_candidate(
                    &mut candidates,
                    Candidate { x: c.x, y: c.y, known_on_curve: true },
                );
            } else if c.kind == PointKind::Unresolved {
                push_candidate(
                    &mut candidates,
                    Candidate { x: c.x, y: c.y, known_on_curve: false },
                );
            }
        }
    }
    for i in 0..fact.factors.len() {
        for j in (i + 1)..fact.factors.len() {
            let sys = PolySystem::new(
                vec![fact.factors[i].0.clone(), fact.factors[j].0.clone()],
                Vec::new(),
            )?;
            for s in solve_rich(&sys)? {
                let known = s.certified;
                push_candidate(
                    &mut candidates,
                    Candidate {
                        x: s.x.coordinate(),
                        y: s.y.coordinate(),
                        known_on_curve: known,
                    },
                );
            }
        }
    }

    let mut out = Vec::new();
    for cand in candidates {
        if cand.x.is_exact() && cand.y.is_exact() {
            match classify_exact(&sf, &cand.x, &cand.y) {
                Ok((kind, sign)) => out.push(CriticalPoint {
                    x: cand.x,
                    y: cand.y,
                    on_curve: true,
                    kind,
                    hessian_det_sign: Some(sign),
                }),
                Err(RealSolveError::Poly(PolyError::Exact(ExactError::RadicandMismatch(
                    _,
                    _,
                )))) => out.push(CriticalPoint {
                    x: cand.x,
                    y: cand.y,
                    on_curve: cand.known_on_curve,
                    kind: PointKind::Unresolved,
                    hessian_det_sign: None,
                }),
                Err(e) => return Err(e),
            }
        } else {
            out.push(CriticalPoint {
                x: cand.x,
                y: cand.y,
                on_curve: cand.known_on_curve,
                kind: PointKind::Unresolved,
                hessian_det_sign: None,
            });
        }
    }
    out.sort_by(|a, b| {
        let ka = (a.x.to_f64(), a.y.to_f64());
        let kb = (b.x.to_f64(), b.y.to_f64());
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });
    Ok(filter_isolated(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::factorize::factor_bivariate;
    use crate::multipoly::{MonomialOrder, VarContext};
    use crate::scenario::{euler_system, Formulation};
    use alloc::sync::Arc;
    use std::sync::OnceLock;

    const ORDER: MonomialOrder = MonomialOrder::DegRevLex;

    fn ctx2() -> Arc<VarContext> {
        VarContext::new(["x", "y"]).unwrap()
    }

    fn v(ctx: &Arc<VarContext>, name: &str) -> Polynomial {
        Polynomial::var(ctx, ORDER, ctx.index_of(name).unwrap()).unwrap()
    }

    fn c(ctx: &Arc<VarContext>, n: i64, d: i64) -> Polynomial {
        Polynomial::constant(ctx, ORDER, rat(n, d))
    }

    /// x^3 - x^2 - y^2: the classic acnode-at-origin cubic.
    fn acnode_cubic(ctx: &Arc<VarContext>) -> Polynomial {
        let (x, y) = (v(ctx, "x"), v(ctx, "y"));
        x.pow(3).sub(&x.pow(2)).unwrap().sub(&y.pow(2)).unwrap()
    }

    /// Locus of the built-in ratio-2 scenario with its sorted irreducible
    /// factors; the third factor carries the two off-axis isolated points.
    fn locus_and_factors() -> &'static (Polynomial, Vec<Polynomial>) {
        static CACHE: OnceLock<(Polynomial, Vec<Polynomial>)> = OnceLock::new();
        CACHE.get_or_init(|| {
            let sys = euler_system(&rat(2, 1), Formulation::Reduced).unwrap();
            let el = eliminate(&sys, &GroebnerConfig::default()).unwrap();
            let locus = locus_polynomial(&el.polys).unwrap();
            let factors = factor_bivariate(&locus)
                .unwrap()
                .factors
                .into_iter()
                .map(|(q, _)| q)
                .collect();
            (locus, factors)
        })
    }

    fn octic_with_acnodes() -> &'static Polynomial {
        &locus_and_factors().1[2]
    }

    #[test]
    fn critical_system_is_poly_and_partials() {
        let ctx = ctx2();
        let p = acnode_cubic(&ctx);
        let sys = critical_system(&p).unwrap();
        let (x, y) = (v(&ctx, "x"), v(&ctx, "y"));
        let px = x.pow(2).mul(&c(&ctx, 3, 1)).unwrap().sub(&x.mul(&c(&ctx, 2, 1)).unwrap()).unwrap();
        let py = y.mul(&c(&ctx, -2, 1)).unwrap();
        assert_eq!(sys.generators(), &[p, px, py]);
        assert!(sys.elim_vars().is_empty());
    }

    #[test]
    fn critical_system_rejects_constants() {
        let ctx = ctx2();
        assert!(matches!(
            critical_system(&c(&ctx, 5, 1)),
            Err(RealSolveError::ConstantInput)
        ));
    }

    #[test]
    fn solve_critical_system_of_cubic_finds_origin_only() {
        let ctx = ctx2();
        let sys = critical_system(&acnode_cubic(&ctx)).unwrap();
        let sols = solve_real_zero_dim(&sys).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(sols[0].certified);
        assert_eq!(sols[0].x, Coordinate::Rational(rat(0, 1)));
        assert_eq!(sols[0].y, Coordinate::Rational(rat(0, 1)));
    }

    #[test]
    fn solve_gradient_system_lists_off_curve_critical_point() {
        let ctx = ctx2();
        let p = acnode_cubic(&ctx);
        let px = p.derive(Var(0)).unwrap();
        let py = p.derive(Var(1)).unwrap();
        let sys = PolySystem::new(vec![px, py], Vec::new()).unwrap();
        let sols = solve_real_zero_dim(&sys).unwrap();
        let coords: Vec<(Coordinate, Coordinate)> =
            sols.into_iter().map(|s| (s.x, s.y)).collect();
        assert_eq!(
            coords,
            vec![
                (Coordinate::Rational(rat(0, 1)), Coordinate::Rational(rat(0, 1))),
                (Coordinate::Rational(rat(2, 3)), Coordinate::Rational(rat(0, 1))),
            ]
        );
    }

    #[test]
    fn solve_complex_only_system_is_empty() {
        let ctx = ctx2();
        let x = v(&ctx, "x");
        let gens = vec![x.pow(2).add(&c(&ctx, 1, 1)).unwrap(), v(&ctx, "y")];
        let sys = PolySystem::new(gens, Vec::new()).unwrap();
        assert!(solve_real_zero_dim(&sys).unwrap().is_empty());
    }

    #[test]
    fn solve_rejects_positive_dimensional_system() {
        let ctx = ctx2();
        let (x, y) = (v(&ctx, "x"), v(&ctx, "y"));
        let sys = PolySystem::new(vec![y.pow(2).sub(&x).unwrap()], Vec::new()).unwrap();
        assert!(matches!(
            solve_real_zero_dim(&sys),
            Err(RealSolveError::NotZeroDimensional)
        ));
    }

    #[test]
    fn solve_inconsistent_single_variable_system_is_empty() {
        let ctx = ctx2();
        let y = v(&ctx, "y");
        // y^2 - 1 and 2y generate the whole ring
        let gens = vec![
            y.pow(2).sub(&c(&ctx, 1, 1)).unwrap(),
            y.mul(&c(&ctx, 2, 1)).unwrap(),
        ];
        let sys = PolySystem::new(gens, Vec::new()).unwrap();
        assert!(solve_real_zero_dim(&sys).unwrap().is_empty());
    }

    #[test]
    fn solve_boxes_cube_root_and_certifies_by_minimal_polynomial() {
        let ctx = ctx2();
        let x = v(&ctx, "x");
        let gens = vec![x.pow(3).sub(&c(&ctx, 2, 1)).unwrap(), v(&ctx, "y")];
        let sys = PolySystem::new(gens, Vec::new()).unwrap();
        let sols = solve_real_zero_dim(&sys).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(sols[0].certified);
        assert_eq!(sols[0].y, Coordinate::Rational(rat(0, 1)));
        let Coordinate::Isolated(iv) = &sols[0].x else {
            panic!("cube root must come back boxed, got {}", sols[0].x);
        };
        assert!(iv.width() <= pow2_width(BOX_PRECISION));
        let cbrt2 = 2f64.powf(1.0 / 3.0);
        assert!(crate::exact::rational_to_f64(iv.lo()) <= cbrt2);
        assert!(crate::exact::rational_to_f64(iv.hi()) >= cbrt2);
    }

    #[test]
    fn classify_cubic_origin_as_acnode() {
        let ctx = ctx2();
        let p = acnode_cubic(&ctx);
        let zero = Coordinate::Rational(rat(0, 1));
        assert_eq!(classify_point(&p, &zero, &zero).unwrap(), PointKind::Acnode);
    }

    #[test]
    fn classify_rejects_noncritical_points() {
        let ctx = ctx2();
        let (x, y) = (v(&ctx, "x"), v(&ctx, "y"));
        let circle = x.pow(2).add(&y.pow(2)).unwrap().sub(&c(&ctx, 1, 1)).unwrap();
        // on the curve but with nonzero gradient
        let err = classify_point(
            &circle,
            &Coordinate::Rational(rat(1, 1)),
            &Coordinate::Rational(rat(0, 1)),
        );
        assert!(matches!(err, Err(RealSolveError::NotCritical)));
    }

    #[test]
    fn classify_crossing_as_crunode() {
        let ctx = ctx2();
        let (x, y) = (v(&ctx, "x"), v(&ctx, "y"));
        let p = x.pow(2).sub(&y.pow(2)).unwrap();
        let zero = Coordinate::Rational(rat(0, 1));
        assert_eq!(classify_point(&p, &zero, &zero).unwrap(), PointKind::Crunode);
    }

    #[test]
    fn classify_flat_quartic_by_lowest_form() {
        let ctx = ctx2();
        let (x, y) = (v(&ctx, "x"), v(&ctx, "y"));
        let p = x.pow(4).add(&y.pow(4)).unwrap();
        let zero = Coordinate::Rational(rat(0, 1));
        assert_eq!(
            classify_point(&p, &zero, &zero).unwrap(),
            PointKind::DegenerateIsolated
        );
    }

    #[test]
    fn classify_cusp_stays_unresolved() {
        let ctx = ctx2();
        let (x, y) = (v(&ctx, "x"), v(&ctx, "y"));
        // y^2 = x^3: semidefinite lowest form, genuinely not isolated
        let p = y.pow(2).sub(&x.pow(3)).unwrap();
        let zero = Coordinate::Rational(rat(0, 1));
        assert_eq!(
            classify_point(&p, &zero, &zero).unwrap(),
            PointKind::Unresolved
        );
    }

    #[test]
    fn translation_recenters_criticality() {
        let ctx = ctx2();
        let (x, y) = (v(&ctx, "x"), v(&ctx, "y"));
        // (x-1)^2 + (y+2)^2 translated to (1, -2) becomes x^2 + y^2
        let p = x
            .sub(&c(&ctx, 1, 1))
            .unwrap()
            .pow(2)
            .add(&y.add(&c(&ctx, 2, 1)).unwrap().pow(2))
            .unwrap();
        let q = translate(&p, Var(0), &rat(1, 1), Var(1), &rat(-2, 1)).unwrap();
        assert_eq!(q, x.pow(2).add(&y.pow(2)).unwrap());
    }

    #[test]
    fn curve_membership_is_exact() {
        let ctx = ctx2();
        let (x, y) = (v(&ctx, "x"), v(&ctx, "y"));
        let origin_only = x.pow(2).add(&y.pow(2)).unwrap();
        let zero = Coordinate::Rational(rat(0, 1));
        assert!(is_on_curve(&origin_only, &zero, &zero).unwrap());
        assert!(!is_on_curve(&origin_only, &Coordinate::Rational(rat(1, 1)), &zero).unwrap());

        let circle = origin_only.sub(&c(&ctx, 1, 1)).unwrap();
        let half = Coordinate::Rational(rat(1, 2));
        let sqrt3_half = Coordinate::Quadratic(
            QuadExt::new(rat(0, 1), rat(1, 2), BigInt::from(3)).unwrap(),
        );
        assert!(is_on_curve(&circle, &half, &sqrt3_half).unwrap());
    }

    #[test]
    fn survey_flags_off_curve_critical_point() {
        let ctx = ctx2();
        let p = acnode_cubic(&ctx);
        let points = critical_points(&p).unwrap();
        assert_eq!(points.len(), 2);
        assert_eq!(points[0].kind, PointKind::Acnode);
        assert!(points[0].on_curve);
        assert_eq!(points[0].hessian_det_sign, Some(1));
        assert_eq!(points[1].kind, PointKind::NotOnCurve);
        assert!(!points[1].on_curve);
        assert_eq!(points[1].x, Coordinate::Rational(rat(2, 3)));
        assert_eq!(points[1].hessian_det_sign, Some(-1));
    }

    #[test]
    fn acnodes_of_cubic_is_origin_only() {
        let ctx = ctx2();
        let pts = acnodes(&acnode_cubic(&ctx)).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].kind, PointKind::Acnode);
        assert_eq!(pts[0].x, Coordinate::Rational(rat(0, 1)));
        assert_eq!(pts[0].y, Coordinate::Rational(rat(0, 1)));
    }

    #[test]
    fn smooth_circle_has_no_acnodes() {
        let ctx = ctx2();
        let (x, y) = (v(&ctx, "x"), v(&ctx, "y"));
        let circle = x.pow(2).add(&y.pow(2)).unwrap().sub(&c(&ctx, 1, 1)).unwrap();
        assert!(acnodes(&circle).unwrap().is_empty());
    }

    #[test]
    fn octic_quadratic_points_classify_as_acnodes() {
        let p = octic_with_acnodes();
        let half = Coordinate::Rational(rat(1, 2));
        for sign in [1i64, -1] {
            let apex = Coordinate::Quadratic(
                QuadExt::new(rat(0, 1), rat(sign, 2), BigInt::from(3)).unwrap(),
            );
            assert_eq!(classify_point(p, &half, &apex).unwrap(), PointKind::Acnode);
        }
    }

    #[test]
    fn octic_base_vertices_need_the_lowest_form_path() {
        let p = octic_with_acnodes();
        let zero = Coordinate::Rational(rat(0, 1));
        for x0 in [rat(0, 1), rat(1, 1)] {
            let (kind, sign) =
                classify_exact(p, &Coordinate::Rational(x0), &zero).unwrap();
            assert_eq!(sign, 0);
            assert_eq!(kind, PointKind::DegenerateIsolated);
        }
    }

    #[test]
    fn octic_critical_system_has_exactly_the_four_real_points() {
        let p = octic_with_acnodes();
        let sols = solve_real_zero_dim(&critical_system(p).unwrap()).unwrap();
        let sqrt3_half = |s: i64| {
            Coordinate::Quadratic(QuadExt::new(rat(0, 1), rat(s, 2), BigInt::from(3)).unwrap())
        };
        let expected = vec![
            (Coordinate::Rational(rat(0, 1)), Coordinate::Rational(rat(0, 1))),
            (Coordinate::Rational(rat(1, 2)), sqrt3_half(-1)),
            (Coordinate::Rational(rat(1, 2)), sqrt3_half(1)),
            (Coordinate::Rational(rat(1, 1)), Coordinate::Rational(rat(0, 1))),
        ];
        assert!(sols.iter().all(|s| s.certified));
        let got: Vec<(Coordinate, Coordinate)> =
            sols.into_iter().map(|s| (s.x, s.y)).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn octic_acnode_survey_matches_and_neighbourhood_sign_is_constant() {
        let p = octic_with_acnodes();
        let pts = acnodes(p).unwrap();
        let isolated: Vec<&CriticalPoint> = pts
            .iter()
            .filter(|c| {
                matches!(c.kind, PointKind::Acnode | PointKind::DegenerateIsolated)
            })
            .collect();
        assert_eq!(isolated.len(), 4);
        for c in &pts {
            assert_ne!(c.kind, PointKind::Unresolved, "unexpected unresolved: {c:?}");
        }
        // each certified isolated point is a strict local extremum: sample a
        // small punctured circle and expect one nonvanishing sign (smoke
        // test, not the certificate)
        for c in &isolated {
            let (cx, cy) = (c.x.to_f64(), c.y.to_f64());
            let mut signs = Vec::new();
            for i in 0..16 {
                let ang = (i as f64) * core::f64::consts::TAU / 16.0;
                let val = p
                    .eval_f64(&[cx + 1e-3 * libm::cos(ang), cy + 1e-3 * libm::sin(ang)])
                    .unwrap();
                assert!(val != 0.0);
                signs.push(val > 0.0);
            }
            assert!(signs.iter().all(|&s| s == signs[0]));
        }
    }

    #[test]
    fn degree_eighteen_locus_passes_apex_membership() {
        let (locus, factors) = locus_and_factors();
        let half = Coordinate::Rational(rat(1, 2));
        let apex = Coordinate::Quadratic(
            QuadExt::new(rat(0, 1), rat(1, 2), BigInt::from(3)).unwrap(),
        );
        assert!(is_on_curve(locus, &half, &apex).unwrap());
        // the middle factor carries every real branch except the two apexes
        assert!(!is_on_curve(&factors[1], &half, &apex).unwrap());
    }

    mod proptests {
        use super::*;
        use proptest::prelude::*;

        fn arb_coord() -> impl Strategy<Value = Rational> {
            (-8i64..=8, 1i64..=4).prop_map(|(n, d)| rat(n, d))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn sum_of_squares_has_one_acnode(a in arb_coord(), b in arb_coord()) {
                let ctx = ctx2();
                let p = v(&ctx, "x")
                    .sub(&Polynomial::constant(&ctx, ORDER, a.clone()))
                    .unwrap()
                    .pow(2)
                    .add(
                        &v(&ctx, "y")
                            .sub(&Polynomial::constant(&ctx, ORDER, b.clone()))
                            .unwrap()
                            .pow(2),
                    )
                    .unwrap();
                let pts = acnodes(&p).unwrap();
                prop_assert_eq!(pts.len(), 1);
                prop_assert_eq!(pts[0].kind, PointKind::Acnode);
                prop_assert_eq!(&pts[0].x, &Coordinate::Rational(a));
                prop_assert_eq!(&pts[0].y, &Coordinate::Rational(b));
            }

            #[test]
            fn difference_of_squares_crosses_instead(a in arb_coord(), b in arb_coord()) {
                let ctx = ctx2();
                let p = v(&ctx, "x")
                    .sub(&Polynomial::constant(&ctx, ORDER, a.clone()))
                    .unwrap()
                    .pow(2)
                    .sub(
                        &v(&ctx, "y")
                            .sub(&Polynomial::constant(&ctx, ORDER, b.clone()))
                            .unwrap()
                            .pow(2),
                    )
                    .unwrap();
                let all = critical_points(&p).unwrap();
                prop_assert_eq!(all.len(), 1);
                prop_assert_eq!(all[0].kind, PointKind::Crunode);
                prop_assert!(all[0].on_curve);
                prop_assert!(acnodes(&p).unwrap().is_empty());
            }
        }
    }
}
