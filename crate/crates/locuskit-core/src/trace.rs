//! Float tracing of plane algebraic curves over a rectangle.
//!
//! [`trace_curve`] samples the sign of a bivariate polynomial on a regular
//! grid, refines cells adaptively where the local linear model is poor, and
//! extracts marching-squares segments whose vertices are bisected until the
//! residual `|p(v)|` drops below [`EPS_RENDER`] relative to the local
//! monomial scale. Segments are merged into polylines deterministically, so
//! identical inputs produce identical output down to the last bit.
//!
//! Sign sampling cannot see curve points without a sign change nearby, so
//! acnodes and other isolated real points are invisible to [`trace_curve`].
//! [`trace_with_isolated`] restores them from the certified singular-point
//! analysis and attaches any analysis failure as a warning instead of
//! discarding the traced branches.
//!
//! The tracer approximates: vertices are accurate, the connectivity between
//! them is whatever the grid resolved. Guaranteed topology is out of scope.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::exact::{rat, rational_to_f64, QuadExt, Rational};
use crate::multipoly::{PolyError, Polynomial, Var};
use crate::realsolve::{self, Coordinate, CriticalPoint, PointKind, RealSolveError};
use crate::scenario::BranchLabel;

/// Relative residual bound every emitted vertex satisfies: `|p(v)|` is below
/// `EPS_RENDER` times the largest single-monomial magnitude of `p` at `v`.
pub const EPS_RENDER: f64 = 1e-6;

/// Smallest accepted base grid resolution (cells per axis).
pub const MIN_RESOLUTION: u32 = 16;

/// Quadtree refinement cap beyond the base grid.
const MAX_DEPTH: u32 = 8;

/// Chord-fit driver for adaptive subdivision: a cell is split while the
/// midpoint of an extracted segment misses the curve by more than this,
/// relative to the local monomial scale. Deliberately coarser than
/// [`EPS_RENDER`]: vertices are bisected onto the curve anyway, subdivision
/// only buys geometric fidelity between them.
const SUBDIV_TOL: f64 = 1e-3;

/// Endpoint matching tolerance for polyline assembly, relative to the longer
/// bbox side. Adaptive refinement can locate one shared root from two edge
/// fragments; exhaustive bisection leaves those copies ulps apart, far below
/// this bound, while genuinely distinct vertices sit at least a deepest
/// subcell apart, far above it.
const CHAIN_TOL_REL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TraceError {
    #[error("constant polynomial does not define a curve")]
    ConstantInput,
    #[error("expected a plane curve in two variables")]
    NotPlaneCurve,
    #[error("bounding box has no interior")]
    EmptyBBox,
    #[error("grid resolution {0} is below the minimum of {MIN_RESOLUTION}")]
    ResolutionTooSmall(u32),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Axis-aligned view rectangle with exact rational corners.
#[derive(Debug, Clone, PartialEq)]
pub struct BBox {
    x0: Rational,
    y0: Rational,
    x1: Rational,
    y1: Rational,
}

impl BBox {
    pub fn new(x0: Rational, y0: Rational, x1: Rational, y1: Rational) -> Result<Self, TraceError> {
        if x0 >= x1 || y0 >= y1 {
            return Err(TraceError::EmptyBBox);
        }
        Ok(BBox { x0, y0, x1, y1 })
    }

    pub fn x0(&self) -> &Rational {
        &self.x0
    }

    pub fn y0(&self) -> &Rational {
        &self.y0
    }

    pub fn x1(&self) -> &Rational {
        &self.x1
    }

    pub fn y1(&self) -> &Rational {
        &self.y1
    }

    /// Corner floats in (x0, y0, x1, y1) order, for rendering.
    pub fn to_f64(&self) -> (f64, f64, f64, f64) {
        (
            rational_to_f64(&self.x0),
            rational_to_f64(&self.y0),
            rational_to_f64(&self.x1),
            rational_to_f64(&self.y1),
        )
    }

    /// Exact containment test for solver coordinates; interval coordinates
    /// count only when the whole enclosure fits.
    pub fn contains(&self, x: &Coordinate, y: &Coordinate) -> bool {
        coordinate_within(x, &self.x0, &self.x1) && coordinate_within(y, &self.y0, &self.y1)
    }
}

impl Default for BBox {
    /// Frame that comfortably contains the unit-base triangle loci.
    fn default() -> Self {
        BBox::new(rat(-2, 1), rat(-5, 2), rat(3, 1), rat(5, 2)).expect("nonempty by construction")
    }
}

fn coordinate_within(c: &Coordinate, lo: &Rational, hi: &Rational) -> bool {
    match c {
        Coordinate::Rational(r) => lo <= r && r <= hi,
        Coordinate::Quadratic(q) => {
            let above = q.sub(&QuadExt::from_rational(lo.clone()));
            let below = QuadExt::from_rational(hi.clone()).sub(q);
            match (above, below) {
                (Ok(a), Ok(b)) => a.sign() >= 0 && b.sign() >= 0,
                _ => false,
            }
        }
        Coordinate::Isolated(iv) => lo <= iv.lo() && iv.hi() <= hi,
    }
}

/// Polylines plus certified isolated points of one traced curve.
#[derive(Debug, Clone)]
pub struct TraceResult {
    /// Vertex chains in emission order; a closed loop repeats its first
    /// vertex at the end.
    pub polylines: Vec<Vec<(f64, f64)>>,
    /// Exact isolated points restored by the singular-point analysis; empty
    /// for plain [`trace_curve`].
    pub isolated_points: Vec<CriticalPoint>,
    pub bbox: BBox,
    pub resolution: u32,
    /// Optional per-vertex branch classification, parallel to `polylines`.
    /// The tracer itself never fills this; scenario pipelines do.
    pub labels: Option<Vec<Vec<BranchLabel>>>,
    pub warnings: Vec<String>,
}

/// Exponent-indexed float view of a bivariate polynomial, for grid work.
struct FastPoly {
    terms: Vec<(f64, u16, u16)>,
    degx: usize,
    degy: usize,
}

fn powu(x: f64, mut e: u16) -> f64 {
    let mut acc = 1.0;
    let mut base = x;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

fn fabs(v: f64) -> f64 {
    if v < 0.0 {
        -v
    } else {
        v
    }
}

impl FastPoly {
    fn new(p: &Polynomial, vx: Var, vy: Var) -> Self {
        let mut degx = 0usize;
        let mut degy = 0usize;
        let terms: Vec<(f64, u16, u16)> = p
            .terms()
            .iter()
            .map(|(c, m)| {
                let (ex, ey) = (m.exp(vx), m.exp(vy));
                degx = degx.max(ex as usize);
                degy = degy.max(ey as usize);
                (rational_to_f64(c), ex, ey)
            })
            .collect();
        FastPoly { terms, degx, degy }
    }

    fn eval(&self, x: f64, y: f64) -> f64 {
        let mut total = 0.0;
        for &(c, ex, ey) in &self.terms {
            total += c * powu(x, ex) * powu(y, ey);
        }
        total
    }

    /// Largest single-monomial magnitude: the residual scale for vertex
    /// acceptance, never below the smallest positive float.
    fn scale(&self, x: f64, y: f64) -> f64 {
        let mut best = f64::MIN_POSITIVE;
        for &(c, ex, ey) in &self.terms {
            let mag = fabs(c * powu(x, ex) * powu(y, ey));
            if mag > best {
                best = mag;
            }
        }
        best
    }

    fn meets_residual(&self, pt: (f64, f64), tol: f64) -> bool {
        fabs(self.eval(pt.0, pt.1)) < tol * self.scale(pt.0, pt.1)
    }
}

/// Grid values via per-axis power tables; one multiply-add per term per node.
fn eval_grid(fp: &FastPoly, xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let xstride = fp.degx + 1;
    let ystride = fp.degy + 1;
    let mut xpow = vec![0.0f64; xs.len() * xstride];
    for (i, &x) in xs.iter().enumerate() {
        let mut acc = 1.0;
        for e in 0..xstride {
            xpow[i * xstride + e] = acc;
            acc *= x;
        }
    }
    let mut ypow = vec![0.0f64; ys.len() * ystride];
    for (j, &y) in ys.iter().enumerate() {
        let mut acc = 1.0;
        for e in 0..ystride {
            ypow[j * ystride + e] = acc;
            acc *= y;
        }
    }
    let mut vals = vec![0.0f64; xs.len() * ys.len()];
    for j in 0..ys.len() {
        for i in 0..xs.len() {
            let mut total = 0.0;
            for &(c, ex, ey) in &fp.terms {
                total += c * xpow[i * xstride + ex as usize] * ypow[j * ystride + ey as usize];
            }
            vals[j * xs.len() + i] = total;
        }
    }
    vals
}

/// NaN counts as sign 0: the cell gets subdivided instead of trusted.
fn fsign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Corner order: (x0,y0), (x1,y0), (x1,y1), (x0,y1).
struct Cell {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    v: [f64; 4],
}

/// Edge index layout: B = bottom, R = right, T = top, L = left.
const EDGE_CORNERS: [(usize, usize); 4] = [(0, 1), (1, 2), (2, 3), (3, 0)];
const B: usize = 0;
const R: usize = 1;
const T: usize = 2;
const L: usize = 3;

struct Tracer<'a> {
    fp: &'a FastPoly,
    segments: Vec<((f64, f64), (f64, f64))>,
    seen: BTreeSet<((u64, u64), (u64, u64))>,
}

fn bits(pt: (f64, f64)) -> (u64, u64) {
    (pt.0.to_bits(), pt.1.to_bits())
}

impl<'a> Tracer<'a> {
    fn emit(&mut self, a: (f64, f64), b: (f64, f64)) {
        let (ka, kb) = (bits(a), bits(b));
        if ka == kb {
            return;
        }
        let key = if ka <= kb { (ka, kb) } else { (kb, ka) };
        if self.seen.insert(key) {
            self.segments.push((a, b));
        }
    }

    /// Root of `p` on the straight edge between two strictly opposite-sign
    /// endpoints, sharpening the marching-squares linear interpolant by
    /// bisection run to float exhaustion. Endpoints are put in coordinate
    /// order first and the loop never stops early on a small residual, so
    /// cells meeting the same root along overlapping edge fragments agree on
    /// the vertex to within an ulp and polylines chain across refinement
    /// boundaries.
    fn edge_root(&self, a: (f64, f64), va: f64, b: (f64, f64), vb: f64) -> (f64, f64) {
        let ((mut lo, vlo), (mut hi, _)) = if bits(a) <= bits(b) {
            ((a, va), (b, vb))
        } else {
            ((b, vb), (a, va))
        };
        debug_assert!(fsign(vlo) != 0 && fsign(va) * fsign(vb) == -1);
        for _ in 0..80 {
            let mid = (0.5 * (lo.0 + hi.0), 0.5 * (lo.1 + hi.1));
            if bits(mid) == bits(lo) || bits(mid) == bits(hi) {
                return mid;
            }
            let vm = self.fp.eval(mid.0, mid.1);
            if vm == 0.0 {
                return mid;
            }
            if (vm > 0.0) == (vlo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (0.5 * (lo.0 + hi.0), 0.5 * (lo.1 + hi.1))
    }

    fn corner(c: &Cell, k: usize) -> (f64, f64) {
        match k {
            0 => (c.x0, c.y0),
            1 => (c.x1, c.y0),
            2 => (c.x1, c.y1),
            _ => (c.x0, c.y1),
        }
    }

    fn process_cell(&mut self, c: &Cell, depth: u32) {
        let s = [fsign(c.v[0]), fsign(c.v[1]), fsign(c.v[2]), fsign(c.v[3])];
        // a node exactly on the curve blocks sign reasoning; refine around it
        if s.contains(&0) && depth < MAX_DEPTH {
            return self.subdivide(c, depth);
        }
        // zero corners surviving at full depth lean positive so the usual
        // case table applies; crossings land exactly on such corners
        let e = s.map(|x| if x >= 0 { 1i8 } else { -1i8 });
        let mask = (0..4).fold(0usize, |m, k| m | usize::from(e[k] < 0) << k);
        if mask == 0 || mask == 0b1111 {
            return;
        }

        let mut crossings: [Option<(f64, f64)>; 4] = [None; 4];
        for (edge, &(i, j)) in EDGE_CORNERS.iter().enumerate() {
            if e[i] == e[j] {
                continue;
            }
            let (pi, pj) = (Self::corner(c, i), Self::corner(c, j));
            crossings[edge] = Some(if s[i] == 0 {
                pi
            } else if s[j] == 0 {
                pj
            } else {
                self.edge_root(pi, c.v[i], pj, c.v[j])
            });
        }

        let mut segs: [Option<(usize, usize)>; 2] = [None, None];
        match mask {
            0b0001 | 0b1110 => segs[0] = Some((B, L)),
            0b0010 | 0b1101 => segs[0] = Some((B, R)),
            0b0100 | 0b1011 => segs[0] = Some((R, T)),
            0b1000 | 0b0111 => segs[0] = Some((T, L)),
            0b0011 | 0b1100 => segs[0] = Some((L, R)),
            0b0110 | 0b1001 => segs[0] = Some((B, T)),
            // saddle: the center sample decides which corners pair up
            0b0101 | 0b1010 => {
                let cx = 0.5 * (c.x0 + c.x1);
                let cy = 0.5 * (c.y0 + c.y1);
                let center_neg = self.fp.eval(cx, cy) < 0.0;
                let neg_diag_main = mask == 0b0101;
                if neg_diag_main == center_neg {
                    segs = [Some((B, R)), Some((T, L))];
                } else {
                    segs = [Some((B, L)), Some((R, T))];
                }
            }
            _ => unreachable!("mask 0 and 15 returned above"),
        }

        let resolved: Vec<((f64, f64), (f64, f64))> = segs
            .iter()
            .flatten()
            .filter_map(|&(ea, eb)| match (crossings[ea], crossings[eb]) {
                (Some(a), Some(b)) => Some((a, b)),
                // zero corners can starve an edge of its crossing; the
                // refined children recover the local picture
                _ => None,
            })
            .collect();
        if depth < MAX_DEPTH {
            let poor_fit = resolved.iter().any(|&(a, b)| {
                let mid = (0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1));
                !self.fp.meets_residual(mid, SUBDIV_TOL)
            });
            if poor_fit {
                return self.subdivide(c, depth);
            }
        }
        for (a, b) in resolved {
            self.emit(a, b);
        }
    }

    fn subdivide(&mut self, c: &Cell, depth: u32) {
        let xm = 0.5 * (c.x0 + c.x1);
        let ym = 0.5 * (c.y0 + c.y1);
        if bits((xm, ym)) == bits((c.x0, c.y0)) || bits((xm, ym)) == bits((c.x1, c.y1)) {
            return;
        }
        let vbm = self.fp.eval(xm, c.y0);
        let vtm = self.fp.eval(xm, c.y1);
        let vlm = self.fp.eval(c.x0, ym);
        let vrm = self.fp.eval(c.x1, ym);
        let vc = self.fp.eval(xm, ym);
        let children = [
            Cell { x0: c.x0, x1: xm, y0: c.y0, y1: ym, v: [c.v[0], vbm, vc, vlm] },
            Cell { x0: xm, x1: c.x1, y0: c.y0, y1: ym, v: [vbm, c.v[1], vrm, vc] },
            Cell { x0: c.x0, x1: xm, y0: ym, y1: c.y1, v: [vlm, vc, vtm, c.v[3]] },
            Cell { x0: xm, x1: c.x1, y0: ym, y1: c.y1, v: [vc, vrm, c.v[2], vtm] },
        ];
        for child in &children {
            self.process_cell(child, depth + 1);
        }
    }
}

/// Merges segments into polylines. Endpoints within a hairline tolerance are
/// one junction; chains extend while the continuation is unique, so curve
/// crossings split polylines instead of guessing a path through them.
fn chain_segments(segments: &[((f64, f64), (f64, f64))], span: f64) -> Vec<Vec<(f64, f64)>> {
    let tol = span * CHAIN_TOL_REL;
    let bin = 4.0 * tol.max(f64::MIN_POSITIVE);
    let mut nodes: Vec<(f64, f64)> = Vec::new();
    let mut bins: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    let key = |pt: (f64, f64)| {
        (libm::floor(pt.0 / bin) as i64, libm::floor(pt.1 / bin) as i64)
    };
    let mut node_of = |pt: (f64, f64), nodes: &mut Vec<(f64, f64)>| -> usize {
        let (bx, by) = key(pt);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = bins.get(&(bx + dx, by + dy)) {
                    for &id in list {
                        let (dx, dy) = (nodes[id].0 - pt.0, nodes[id].1 - pt.1);
                        if dx * dx + dy * dy <= tol * tol {
                            return id;
                        }
                    }
                }
            }
        }
        let id = nodes.len();
        nodes.push(pt);
        bins.entry((bx, by)).or_default().push(id);
        id
    };

    let mut adj: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut ends: Vec<(usize, usize)> = Vec::with_capacity(segments.len());
    for (si, &(a, b)) in segments.iter().enumerate() {
        let na = node_of(a, &mut nodes);
        let nb = node_of(b, &mut nodes);
        adj.resize(nodes.len(), Vec::new());
        ends.push((na, nb));
        if na == nb {
            continue;
        }
        adj[na].push((si, nb));
        adj[nb].push((si, na));
    }

    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();
    for start in 0..segments.len() {
        if used[start] || ends[start].0 == ends[start].1 {
            continue;
        }
        used[start] = true;
        let mut path = vec![ends[start].0, ends[start].1];
        // forward, then backward; each step needs a unique continuation
        loop {
            let here = *path.last().expect("nonempty");
            let mut next = None;
            let mut options = 0;
            for &(si, other) in &adj[here] {
                if !used[si] {
                    options += 1;
                    next = Some((si, other));
                }
            }
            let Some((si, other)) = next else { break };
            if options != 1 {
                break;
            }
            used[si] = true;
            path.push(other);
            if other == path[0] {
                break;
            }
        }
        if path.last() != Some(&path[0]) {
            path.reverse();
            loop {
                let here = *path.last().expect("nonempty");
                let mut next = None;
                let mut options = 0;
                for &(si, other) in &adj[here] {
                    if !used[si] {
                        options += 1;
                        next = Some((si, other));
                    }
                }
                let Some((si, other)) = next else { break };
                if options != 1 {
                    break;
                }
                used[si] = true;
                path.push(other);
            }
            path.reverse();
        }
        polylines.push(path.into_iter().map(|id| nodes[id]).collect());
    }
    polylines
}

/// Traces the real zero set of `p` inside `bbox` on a base grid of
/// `resolution` cells per axis. Vertices satisfy the [`EPS_RENDER`] residual
/// bound; isolated points are invisible here by construction.
pub fn trace_curve(
    p: &Polynomial,
    bbox: &BBox,
    resolution: u32,
) -> Result<TraceResult, TraceError> {
    if resolution < MIN_RESOLUTION {
        return Err(TraceError::ResolutionTooSmall(resolution));
    }
    let (vx, vy) = realsolve::plane_vars(p).map_err(|e| match e {
        RealSolveError::ConstantInput => TraceError::ConstantInput,
        _ => TraceError::NotPlaneCurve,
    })?;
    let fp = FastPoly::new(p, vx, vy);
    let n = resolution as usize;

    // exact rational nodes keep the grid independent of accumulated float
    // stepping; floats enter only at evaluation
    let step_x = (bbox.x1.clone() - bbox.x0.clone()) / rat(n as i64, 1);
    let step_y = (bbox.y1.clone() - bbox.y0.clone()) / rat(n as i64, 1);
    let xs: Vec<f64> = (0..=n)
        .map(|i| rational_to_f64(&(bbox.x0.clone() + step_x.clone() * rat(i as i64, 1))))
        .collect();
    let ys: Vec<f64> = (0..=n)
        .map(|j| rational_to_f64(&(bbox.y0.clone() + step_y.clone() * rat(j as i64, 1))))
        .collect();
    let vals = eval_grid(&fp, &xs, &ys);

    let mut tracer = Tracer { fp: &fp, segments: Vec::new(), seen: BTreeSet::new() };
    for j in 0..n {
        for i in 0..n {
            let cell = Cell {
                x0: xs[i],
                x1: xs[i + 1],
                y0: ys[j],
                y1: ys[j + 1],
                v: [
                    vals[j * (n + 1) + i],
                    vals[j * (n + 1) + i + 1],
                    vals[(j + 1) * (n + 1) + i + 1],
                    vals[(j + 1) * (n + 1) + i],
                ],
            };
            tracer.process_cell(&cell, 0);
        }
    }

    let (bx0, by0, bx1, by1) = bbox.to_f64();
    let span = if bx1 - bx0 > by1 - by0 { bx1 - bx0 } else { by1 - by0 };
    let polylines = chain_segments(&tracer.segments, span);
    Ok(TraceResult {
        polylines,
        isolated_points: Vec::new(),
        bbox: bbox.clone(),
        resolution,
        labels: None,
        warnings: Vec::new(),
    })
}

/// [`trace_curve`] plus the certified isolated real points of `p` inside the
/// bbox. A failed or inconclusive singular-point analysis degrades to a
/// warning on the result rather than an error, keeping the traced branches.
pub fn trace_with_isolated(
    p: &Polynomial,
    bbox: &BBox,
    resolution: u32,
) -> Result<TraceResult, TraceError> {
    let mut out = trace_curve(p, bbox, resolution)?;
    match realsolve::acnodes(p) {
        Ok(points) => {
            let mut unsettled = 0usize;
            for c in points {
                match c.kind {
                    PointKind::Acnode | PointKind::DegenerateIsolated => {
                        if bbox.contains(&c.x, &c.y) {
                            out.isolated_points.push(c);
                        }
                    }
                    _ => unsettled += 1,
                }
            }
            if unsettled > 0 {
                out.warnings.push(format!(
                    "{unsettled} singular candidate(s) could not be certified isolated and are not drawn"
                ));
            }
        }
        Err(e) => out
            .warnings
            .push(format!("isolated-point analysis failed, curve branches only: {e}")),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::{MonomialOrder, VarContext};
    use alloc::sync::Arc;

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

    fn unit_circle() -> Polynomial {
        let ctx = ctx2();
        let (x, y) = (v(&ctx, "x"), v(&ctx, "y"));
        x.pow(2).add(&y.pow(2)).unwrap().sub(&c(&ctx, 1, 1)).unwrap()
    }

    fn acnode_cubic() -> Polynomial {
        let ctx = ctx2();
        let (x, y) = (v(&ctx, "x"), v(&ctx, "y"));
        x.pow(3).sub(&x.pow(2)).unwrap().sub(&y.pow(2)).unwrap()
    }

    fn square_box(half: i64) -> BBox {
        BBox::new(rat(-half, 1), rat(-half, 1), rat(half, 1), rat(half, 1)).unwrap()
    }

    fn assert_vertices_on_curve(p: &Polynomial, t: &TraceResult) {
        for line in &t.polylines {
            for &(x, y) in line {
                let val = p.eval_f64(&[x, y]).unwrap();
                let scale = p.monomial_scale_f64(&[x, y]).unwrap();
                assert!(
                    fabs(val) < EPS_RENDER * scale.max(f64::MIN_POSITIVE),
                    "vertex ({x}, {y}) residual {val} above bound"
                );
            }
        }
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let ctx = ctx2();
        let one = c(&ctx, 1, 1);
        assert_eq!(
            trace_curve(&one, &BBox::default(), 64).unwrap_err(),
            TraceError::ConstantInput
        );
        assert_eq!(
            trace_curve(&unit_circle(), &BBox::default(), 8).unwrap_err(),
            TraceError::ResolutionTooSmall(8)
        );
        assert_eq!(
            BBox::new(rat(1, 1), rat(0, 1), rat(1, 1), rat(2, 1)).unwrap_err(),
            TraceError::EmptyBBox
        );
    }

    #[test]
    fn circle_is_one_closed_loop_within_tolerance() {
        let p = unit_circle();
        let t = trace_curve(&p, &square_box(2), 256).unwrap();
        assert_eq!(t.polylines.len(), 1);
        let line = &t.polylines[0];
        assert!(line.len() > 100);
        assert_eq!(line.first(), line.last(), "loop must close");
        for &(x, y) in line {
            let r = libm::sqrt(x * x + y * y);
            assert!(fabs(r - 1.0) < 1e-3, "vertex ({x}, {y}) off the circle by {}", r - 1.0);
        }
        assert_vertices_on_curve(&p, &t);
        assert!(t.isolated_points.is_empty());
        assert!(t.warnings.is_empty());
    }

    #[test]
    fn empty_real_locus_traces_to_nothing() {
        let ctx = ctx2();
        let (x, y) = (v(&ctx, "x"), v(&ctx, "y"));
        let p = x.pow(2).add(&y.pow(2)).unwrap().add(&c(&ctx, 1, 1)).unwrap();
        let t = trace_curve(&p, &square_box(2), 64).unwrap();
        assert!(t.polylines.is_empty());
        assert!(t.warnings.is_empty());
    }

    #[test]
    fn sign_tracing_misses_the_acnode() {
        let p = acnode_cubic();
        let bbox = BBox::new(rat(-1, 1), rat(-3, 2), rat(2, 1), rat(3, 2)).unwrap();
        let t = trace_curve(&p, &bbox, 256).unwrap();
        assert!(!t.polylines.is_empty());
        let mut near_origin = false;
        let mut on_loop = false;
        for line in &t.polylines {
            for &(x, y) in line {
                if x * x + y * y < 0.05 * 0.05 {
                    near_origin = true;
                }
                if x > 0.9 {
                    on_loop = true;
                }
            }
        }
        assert!(!near_origin, "sign sampling cannot see the isolated origin");
        assert!(on_loop, "the loop through (1, 0) must be traced");
        assert_vertices_on_curve(&p, &t);
    }

    #[test]
    fn isolated_origin_restored_with_certificate() {
        let p = acnode_cubic();
        let bbox = BBox::new(rat(-1, 1), rat(-3, 2), rat(2, 1), rat(3, 2)).unwrap();
        let t = trace_with_isolated(&p, &bbox, 64).unwrap();
        assert_eq!(t.isolated_points.len(), 1);
        let pt = &t.isolated_points[0];
        assert_eq!(pt.kind, PointKind::Acnode);
        assert_eq!(pt.x, Coordinate::Rational(rat(0, 1)));
        assert_eq!(pt.y, Coordinate::Rational(rat(0, 1)));
        assert!(t.warnings.is_empty());
        assert!(!t.polylines.is_empty());
    }

    #[test]
    fn isolated_points_respect_the_bbox() {
        let p = acnode_cubic();
        // frame shifted away from the origin: the loop is in, the acnode out
        let bbox = BBox::new(rat(1, 2), rat(-3, 2), rat(2, 1), rat(3, 2)).unwrap();
        let t = trace_with_isolated(&p, &bbox, 64).unwrap();
        assert!(t.isolated_points.is_empty());
        assert!(!t.polylines.is_empty());
    }

    #[test]
    fn doubling_resolution_keeps_components() {
        let p = acnode_cubic();
        let bbox = BBox::new(rat(-1, 1), rat(-3, 2), rat(2, 1), rat(3, 2)).unwrap();
        let coarse = trace_curve(&p, &bbox, 64).unwrap();
        let fine = trace_curve(&p, &bbox, 128).unwrap();
        assert!(!coarse.polylines.is_empty());
        assert!(fine.polylines.len() >= coarse.polylines.len().min(1));
        // the loop survives refinement
        for t in [&coarse, &fine] {
            assert!(t.polylines.iter().flatten().any(|&(x, _)| x > 0.9));
        }
    }

    #[test]
    fn axis_aligned_curve_through_grid_nodes() {
        // x*y vanishes on both axes, which lie exactly on grid lines here;
        // zero corners must refine, not crash or fabricate loops
        let ctx = ctx2();
        let p = v(&ctx, "x").mul(&v(&ctx, "y")).unwrap();
        let t = trace_curve(&p, &square_box(1), 16).unwrap();
        assert!(!t.polylines.is_empty());
        assert_vertices_on_curve(&p, &t);
        let on_x_axis = t
            .polylines
            .iter()
            .flatten()
            .any(|&(x, y)| y == 0.0 && x > 0.4);
        assert!(on_x_axis, "positive x-axis must be traced");
    }

    #[test]
    fn single_variable_curve_is_a_line() {
        let ctx = ctx2();
        let p = c(&ctx, 2, 1).mul(&v(&ctx, "x")).unwrap().sub(&c(&ctx, 1, 1)).unwrap();
        let t = trace_curve(&p, &BBox::default(), 16).unwrap();
        assert!(!t.polylines.is_empty());
        let mut ys: Vec<f64> = Vec::new();
        for line in &t.polylines {
            for &(x, y) in line {
                assert!(fabs(x - 0.5) < 1e-9, "vertex ({x}, {y}) off the line x = 1/2");
                ys.push(y);
            }
        }
        let lo = ys.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(hi - lo > 4.0, "line must span the frame");
    }

    #[test]
    fn tracing_is_deterministic() {
        let p = acnode_cubic();
        let bbox = BBox::new(rat(-1, 1), rat(-3, 2), rat(2, 1), rat(3, 2)).unwrap();
        let a = trace_curve(&p, &bbox, 64).unwrap();
        let b = trace_curve(&p, &bbox, 64).unwrap();
        assert_eq!(a.polylines, b.polylines);
    }

    #[test]
    fn octic_isolated_points_all_restored() {
        // 9x^8 - 36x^7 + ... : four isolated points, two of them acnodes at
        // (1/2, +-sqrt(3)/2) and two degenerate at the triangle base vertices
        let p = octic_with_isolated_points();
        let t = trace_with_isolated(&p, &BBox::default(), 64).unwrap();
        assert_eq!(t.isolated_points.len(), 4);
        assert!(t.warnings.is_empty());
        let acnode_ys: Vec<f64> = t
            .isolated_points
            .iter()
            .filter(|c| c.kind == PointKind::Acnode)
            .map(|c| c.y.to_f64())
            .collect();
        assert_eq!(acnode_ys.len(), 2);
        assert!(acnode_ys.iter().any(|&y| fabs(y - 0.8660254037844386) < 1e-12));
        assert!(acnode_ys.iter().any(|&y| fabs(y + 0.8660254037844386) < 1e-12));
    }

    fn octic_with_isolated_points() -> Polynomial {
        let ctx = ctx2();
        let (x, y) = (v(&ctx, "x"), v(&ctx, "y"));
        let terms: [(i64, u32, u32); 17] = [
            (9, 8, 0),
            (-36, 7, 0),
            (52, 6, 2),
            (54, 6, 0),
            (-156, 5, 2),
            (-36, 5, 0),
            (102, 4, 4),
            (190, 4, 2),
            (9, 4, 0),
            (-204, 3, 4),
            (-120, 3, 2),
            (84, 2, 6),
            (186, 2, 4),
            (34, 2, 2),
            (-84, 1, 6),
            (-84, 1, 4),
            (25, 0, 8),
        ];
        let mut acc = Polynomial::zero(&ctx, ORDER);
        for (k, ex, ey) in terms {
            let term = c(&ctx, k, 1)
                .mul(&x.pow(ex))
                .unwrap()
                .mul(&y.pow(ey))
                .unwrap();
            acc = acc.add(&term).unwrap();
        }
        let tail = c(&ctx, -14, 1)
            .mul(&y.pow(6))
            .unwrap()
            .add(&c(&ctx, 25, 1).mul(&y.pow(4)).unwrap())
            .unwrap();
        acc.add(&tail).unwrap()
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly() -> impl Strategy<Value = Polynomial> {
            proptest::collection::vec((-6i64..=6, 0u32..=3, 0u32..=3), 1..6).prop_map(|terms| {
                let ctx = ctx2();
                let (x, y) = (v(&ctx, "x"), v(&ctx, "y"));
                let mut acc = Polynomial::zero(&ctx, ORDER);
                for (k, ex, ey) in terms {
                    let term = c(&ctx, k, 1)
                        .mul(&x.pow(ex))
                        .unwrap()
                        .mul(&y.pow(ey))
                        .unwrap();
                    acc = acc.add(&term).unwrap();
                }
                acc
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn vertices_stay_in_frame_and_on_curve(p in arb_poly()) {
                let bbox = square_box(2);
                match trace_curve(&p, &bbox, 16) {
                    Err(TraceError::ConstantInput) => prop_assert!(p.is_constant()),
                    Err(e) => return Err(TestCaseError::fail(format!("unexpected error {e}"))),
                    Ok(t) => {
                        for line in &t.polylines {
                            for &(x, y) in line {
                                prop_assert!((-2.0..=2.0).contains(&x));
                                prop_assert!((-2.0..=2.0).contains(&y));
                                let val = p.eval_f64(&[x, y]).unwrap();
                                let scale = p.monomial_scale_f64(&[x, y]).unwrap();
                                prop_assert!(
                                    fabs(val) < EPS_RENDER * scale.max(f64::MIN_POSITIVE)
                                );
                            }
                        }
                    }
                }
            }

            #[test]
            fn repeat_traces_are_identical(p in arb_poly()) {
                let bbox = square_box(2);
                let a = trace_curve(&p, &bbox, 16);
                let b = trace_curve(&p, &bbox, 16);
                match (a, b) {
                    (Ok(ta), Ok(tb)) => prop_assert_eq!(ta.polylines, tb.polylines),
                    (Err(ea), Err(eb)) => prop_assert_eq!(ea, eb),
                    _ => return Err(TestCaseError::fail("nondeterministic failure")),
                }
            }
        }
    }
}
