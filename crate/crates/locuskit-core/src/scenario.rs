//! Triangle scenario for the ratio statement R = k·r: polynomial systems
//! whose elimination yields the mover locus, plus floating-point triangle
//! metrics for deciding which tritangent circle realizes a sampled ratio.
//!
//! The base is normalized to A = (0, 0), B = (1, 0) with mover C = (x, y).
//! Lengths and distances enter the systems only through their squares, so
//! internal and external angle bisectors (and with them the incircle and
//! the three excircles) are constrained together. The incenter candidates
//! are cut out by the two bisector conics at A and B, the inradius by the
//! denominator-cleared point-to-line distance to side CA, and the ratio
//! statement by R² = k²·r². That distance clearing scales by |CA|², which
//! is what keeps the degenerate positions with C on the isotropic lines
//! through A inside the projection: they appear as a quadratic factor of
//! the locus.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::exact::{rat, rational_to_f64, Rational};
use crate::groebner::PolySystem;
use crate::multipoly::{MonomialOrder, Polynomial, Var, VarContext};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("k must be positive")]
    RatioNotPositive,
    #[error("mover coincides with base vertex A = (0, 0)")]
    MoverAtBaseA,
    #[error("mover coincides with base vertex B = (1, 0)")]
    MoverAtBaseB,
    #[error("mover lies on the degenerate base line y = 0")]
    MoverCollinear,
    #[error("mover coordinates must be finite")]
    MoverNotFinite,
}

/// Which auxiliary chain the system carries.
///
/// `Full` keeps the circumcenter as explicit unknowns constrained by the
/// perpendicular-bisector equations; `Reduced` substitutes it away by hand,
/// using 4·y²·R² = |CA|²·|CB|² (twice the signed area times the circumradius
/// equals the product of the slant sides, for unit base). Both eliminate to
/// the same locus; the pair serves as a cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    Reduced,
    Full,
}

/// Ratio statement R = k·r over the normalized base.
#[derive(Debug, Clone)]
pub struct EulerScenario {
    pub k: Rational,
    pub formulation: Formulation,
}

impl EulerScenario {
    pub fn new(k: Rational, formulation: Formulation) -> Result<Self, ScenarioError> {
        if !k.is_positive() {
            return Err(ScenarioError::RatioNotPositive);
        }
        Ok(EulerScenario { k, formulation })
    }

    pub fn system(&self) -> PolySystem {
        euler_system(&self.k, self.formulation).expect("ratio validated on construction")
    }
}

const ORDER: MonomialOrder = MonomialOrder::DegRevLex;

fn v(ctx: &Arc<VarContext>, name: &str) -> Polynomial {
    let var = ctx.index_of(name).expect("fixed scenario contexts name every variable");
    Polynomial::var(ctx, ORDER, var).expect("scenario contexts stay within variable limits")
}

/// Polynomial system whose elimination ideal (projecting out everything but
/// x, y) is the locus of mover positions where R = k·r holds for some
/// tritangent circle of the triangle.
pub fn euler_system(k: &Rational, formulation: Formulation) -> Result<PolySystem, ScenarioError> {
    if !k.is_positive() {
        return Err(ScenarioError::RatioNotPositive);
    }
    // k² = n/d in lowest terms; generators are kept denominator free.
    let ksq = k * k;
    let n = Rational::from(ksq.numer().clone());
    let d = Rational::from(ksq.denom().clone());

    let names: &[&str] = match formulation {
        Formulation::Reduced => &["ix", "iy", "r", "x", "y"],
        Formulation::Full => &["ox", "oy", "ix", "iy", "r", "x", "y"],
    };
    let ctx = VarContext::new(names.iter().copied()).expect("scenario context is well formed");
    let one = Polynomial::constant(&ctx, ORDER, rat(1, 1));
    let (ix, iy, r) = (v(&ctx, "ix"), v(&ctx, "iy"), v(&ctx, "r"));
    let (x, y) = (v(&ctx, "x"), v(&ctx, "y"));

    let build = || -> Result<(Vec<Polynomial>, Vec<&str>), crate::multipoly::PolyError> {
        let sq_ca = x.pow(2).add(&y.pow(2))?;
        let sq_cb = x.sub(&one)?.pow(2).add(&y.pow(2))?;
        // twice-area-scaled distances from the incenter candidate to the
        // slant side lines; distance to the base line AB is just iy
        let d_ca = y.mul(&ix)?.sub(&x.mul(&iy)?)?;
        let d_cb = y.mul(&ix.sub(&one)?)?.sub(&x.sub(&one)?.mul(&iy)?)?;
        // bisector conic at A: dist(I, CA) = dist(I, AB), squares cleared
        let g_bis_a = d_ca.pow(2).sub(&iy.pow(2).mul(&sq_ca)?)?;
        // bisector conic at B: dist(I, CB) = dist(I, AB)
        let g_bis_b = d_cb.pow(2).sub(&iy.pow(2).mul(&sq_cb)?)?;
        // r = dist(I, CA); the |CA|² clearing admits the isotropic lines
        let g_inradius = r.pow(2).mul(&sq_ca)?.sub(&d_ca.pow(2))?;

        match formulation {
            Formulation::Full => {
                let (ox, oy) = (v(&ctx, "ox"), v(&ctx, "oy"));
                // O equidistant from A and B
                let g_mid = ox.scale(&rat(2, 1)).sub(&one)?;
                // O equidistant from A and C
                let g_perp = x
                    .mul(&ox)?
                    .add(&y.mul(&oy)?)?
                    .scale(&rat(2, 1))
                    .sub(&sq_ca)?;
                // d·R² = n·r² with R² = |OA|²
                let g_ratio = ox
                    .pow(2)
                    .add(&oy.pow(2))?
                    .scale(&d)
                    .sub(&r.pow(2).scale(&n))?;
                Ok((
                    vec![g_mid, g_perp, g_bis_a, g_bis_b, g_inradius, g_ratio],
                    vec!["ox", "oy", "ix", "iy", "r"],
                ))
            }
            Formulation::Reduced => {
                // 4·y²·R² = |CA|²·|CB|², so d·|CA|²·|CB|² = 4·n·r²·y²
                let g_ratio = sq_ca
                    .mul(&sq_cb)?
                    .scale(&d)
                    .sub(&r.pow(2).mul(&y.pow(2))?.scale(&(rat(4, 1) * &n)))?;
                Ok((
                    vec![g_bis_a, g_bis_b, g_inradius, g_ratio],
                    vec!["ix", "iy", "r"],
                ))
            }
        }
    };
    let (gens, elim_names) = build().expect("scenario generators share one context");
    let elim: Vec<Var> = elim_names
        .iter()
        .map(|name| ctx.index_of(name).expect("elimination names drawn from the context"))
        .collect();
    Ok(PolySystem::new(gens, elim).expect("scenario systems are nonempty with distinct eliminated variables"))
}

/// The product of the degenerate conditions the locus may pick up:
/// collinearity (y = 0) and coincidence with A (the isotropic quadratic).
/// Saturating the system by this polynomial removes those components.
pub fn euler_nondegeneracy(sys: &PolySystem) -> Polynomial {
    let ctx = sys.context();
    let x = v(ctx, "x");
    let y = v(ctx, "y");
    let sq_ca = x
        .pow(2)
        .add(&y.pow(2))
        .expect("shared context");
    y.mul(&sq_ca).expect("shared context")
}

/// Floating-point triangle quantities for the normalized base.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleMetrics {
    /// Side lengths opposite A, B, C; c is the unit base.
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub s: f64,
    pub area: f64,
    pub inradius: f64,
    pub exradius_a: f64,
    pub exradius_b: f64,
    pub exradius_c: f64,
    pub circumradius: f64,
}

/// Classification of a sampled mover point against R = k·ρ over the four
/// tritangent radii ρ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchLabel {
    Incircle,
    ExA,
    ExB,
    ExC,
    None,
}

impl BranchLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            BranchLabel::Incircle => "incircle",
            BranchLabel::ExA => "ex_a",
            BranchLabel::ExB => "ex_b",
            BranchLabel::ExC => "ex_c",
            BranchLabel::None => "none",
        }
    }
}

impl core::fmt::Display for BranchLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Side lengths, semiperimeter, area, and the five classical radii for the
/// triangle A = (0,0), B = (1,0), C = (x,y).
pub fn metrics(x: f64, y: f64) -> Result<TriangleMetrics, ScenarioError> {
    if !x.is_finite() || !y.is_finite() {
        return Err(ScenarioError::MoverNotFinite);
    }
    if x == 0.0 && y == 0.0 {
        return Err(ScenarioError::MoverAtBaseA);
    }
    if x == 1.0 && y == 0.0 {
        return Err(ScenarioError::MoverAtBaseB);
    }
    if y == 0.0 {
        return Err(ScenarioError::MoverCollinear);
    }
    let a = libm::sqrt((x - 1.0) * (x - 1.0) + y * y);
    let b = libm::sqrt(x * x + y * y);
    let c = 1.0;
    let perimeter = a + b + c;
    let s = perimeter / 2.0;
    let area = libm::fabs(y) / 2.0;
    // Strict triangle inequality holds off the base line, so s − a, s − b,
    // s − c are all positive, but the direct differences cancel
    // catastrophically for sliver triangles. Each is evaluated through its
    // quadratic form instead: (b + c)² − a² = 2(x + b) and cyclic variants,
    // with the remaining additions arranged to stay cancellation free.
    let x_plus_b = if x >= 0.0 { x + b } else { y * y / (b - x) };
    let sma = x_plus_b / perimeter;
    let one_minus_x_plus_a = if x <= 1.0 {
        1.0 - x + a
    } else {
        y * y / (a + x - 1.0)
    };
    let smb = one_minus_x_plus_a / perimeter;
    let q = x * (x - 1.0);
    let q_plus_ab = if q >= 0.0 {
        q + y * y + a * b
    } else {
        // ab − |q| through the difference of squares: a²b² − q² = y²((x−1)² + x² + y²)
        y * y * ((x - 1.0) * (x - 1.0) + x * x + y * y) / (a * b - q) + y * y
    };
    let smc = q_plus_ab / perimeter;
    Ok(TriangleMetrics {
        a,
        b,
        c,
        s,
        area,
        inradius: area / s,
        exradius_a: area / sma,
        exradius_b: area / smb,
        exradius_c: area / smc,
        circumradius: a * b * c / (4.0 * area),
    })
}

/// Labels a sample by the tritangent radius ρ minimizing |R − k·ρ| / R,
/// provided the minimum beats `tol`; otherwise `None`.
pub fn classify_sample(
    x: f64,
    y: f64,
    k: &Rational,
    tol: f64,
) -> Result<BranchLabel, ScenarioError> {
    let m = metrics(x, y)?;
    let kf = rational_to_f64(k);
    let candidates = [
        (BranchLabel::Incircle, m.inradius),
        (BranchLabel::ExA, m.exradius_a),
        (BranchLabel::ExB, m.exradius_b),
        (BranchLabel::ExC, m.exradius_c),
    ];
    let mut best = BranchLabel::None;
    let mut best_err = f64::INFINITY;
    for (label, rho) in candidates {
        let err = libm::fabs((m.circumradius - kf * rho) / m.circumradius);
        if err < best_err {
            best_err = err;
            best = label;
        }
    }
    Ok(if best_err < tol { best } else { BranchLabel::None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::{eliminate, locus_polynomial, saturate, GroebnerConfig};

    fn locus(k: (i64, i64), formulation: Formulation) -> Polynomial {
        let sys = euler_system(&rat(k.0, k.1), formulation).unwrap();
        let el = eliminate(&sys, &GroebnerConfig::default()).unwrap();
        locus_polynomial(&el.polys).unwrap()
    }

    #[test]
    fn rejects_nonpositive_ratio() {
        assert_eq!(
            euler_system(&rat(0, 1), Formulation::Reduced).unwrap_err(),
            ScenarioError::RatioNotPositive
        );
        assert_eq!(
            euler_system(&rat(-3, 2), Formulation::Full).unwrap_err(),
            ScenarioError::RatioNotPositive
        );
        assert!(EulerScenario::new(rat(-1, 1), Formulation::Full).is_err());
    }

    #[test]
    fn system_shapes() {
        let red = euler_system(&rat(2, 1), Formulation::Reduced).unwrap();
        assert_eq!(red.generators().len(), 4);
        assert_eq!(red.elim_vars().len(), 3);
        assert_eq!(red.context().names(), ["ix", "iy", "r", "x", "y"]);

        let full = euler_system(&rat(2, 1), Formulation::Full).unwrap();
        assert_eq!(full.generators().len(), 6);
        assert_eq!(full.elim_vars().len(), 5);
        assert_eq!(
            full.context().names(),
            ["ox", "oy", "ix", "iy", "r", "x", "y"]
        );
    }

    #[test]
    fn rational_ratio_clears_denominators() {
        let sys = euler_system(&rat(21, 10), Formulation::Full).unwrap();
        for g in sys.generators() {
            for (coeff, _) in g.terms() {
                assert!(coeff.is_integer(), "non-integer coefficient {coeff}");
            }
        }
    }

    #[test]
    fn formulations_agree_for_k2() {
        let lr = locus((2, 1), Formulation::Reduced);
        let lf = locus((2, 1), Formulation::Full);
        assert_eq!(lr.canonical_text(), lf.canonical_text());
        assert_eq!(lr.total_degree(), 18);
    }

    #[test]
    fn k2_locus_contains_equilateral_apexes() {
        use crate::exact::QuadExt;
        use num_bigint::BigInt;
        let l = locus((2, 1), Formulation::Reduced);
        for sign in [1i64, -1] {
            let pt = [
                QuadExt::from_rational(rat(1, 2)),
                QuadExt::new(rat(0, 1), rat(sign, 2), BigInt::from(3)).unwrap(),
            ];
            assert!(l.eval_quad(&pt).unwrap().is_zero());
        }
    }

    #[test]
    fn saturation_strips_degenerate_quadratic() {
        // cheap structural check: the saturated system gains one generator,
        // one eliminated variable, and a fresh inverse variable name
        let sys = euler_system(&rat(2, 1), Formulation::Reduced).unwrap();
        let sat = saturate(&sys, &euler_nondegeneracy(&sys)).unwrap();
        assert_eq!(sat.generators().len(), sys.generators().len() + 1);
        assert_eq!(sat.elim_vars().len(), sys.elim_vars().len() + 1);
        assert!(sat.context().index_of("t").is_some());
    }

    #[test]
    fn metrics_equilateral_apex() {
        let m = metrics(0.5, libm::sqrt(3.0) / 2.0).unwrap();
        assert!((m.a - 1.0).abs() < 1e-14);
        assert!((m.b - 1.0).abs() < 1e-14);
        assert_eq!(m.c, 1.0);
        assert!((m.s - 1.5).abs() < 1e-14);
        assert!((m.area - libm::sqrt(3.0) / 4.0).abs() < 1e-14);
        assert!((m.inradius - libm::sqrt(3.0) / 6.0).abs() < 1e-14);
        assert!((m.circumradius - libm::sqrt(3.0) / 3.0).abs() < 1e-14);
        assert!((m.exradius_a - libm::sqrt(3.0) / 2.0).abs() < 1e-14);
        assert!((m.circumradius - 2.0 * m.inradius).abs() < 1e-14);
        assert!(m.circumradius < 2.0 * m.exradius_a);
    }

    #[test]
    fn metrics_right_isosceles() {
        let m = metrics(0.0, 1.0).unwrap();
        assert!((m.a - libm::sqrt(2.0)).abs() < 1e-14);
        assert!((m.b - 1.0).abs() < 1e-14);
        assert!((m.area - 0.5).abs() < 1e-14);
        // hypotenuse a subtends the right angle at C, so R = a/2
        assert!((m.circumradius - libm::sqrt(2.0) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn metrics_rejects_degenerate_movers() {
        assert_eq!(metrics(0.0, 0.0).unwrap_err(), ScenarioError::MoverAtBaseA);
        assert_eq!(metrics(1.0, 0.0).unwrap_err(), ScenarioError::MoverAtBaseB);
        assert_eq!(metrics(0.3, 0.0).unwrap_err(), ScenarioError::MoverCollinear);
        assert_eq!(
            metrics(f64::NAN, 1.0).unwrap_err(),
            ScenarioError::MoverNotFinite
        );
    }

    #[test]
    fn classify_equilateral() {
        let apex = libm::sqrt(3.0) / 2.0;
        assert_eq!(
            classify_sample(0.5, apex, &rat(2, 1), 1e-6).unwrap(),
            BranchLabel::Incircle
        );
        assert_eq!(
            classify_sample(0.5, apex, &rat(3, 1), 1e-6).unwrap(),
            BranchLabel::None
        );
    }

    #[test]
    fn classify_excircle_ratio() {
        // choose k so that R = k·r_a holds exactly at the sample
        let m = metrics(0.3, 0.8).unwrap();
        let k = Rational::from_float(m.circumradius / m.exradius_a).unwrap();
        assert_eq!(
            classify_sample(0.3, 0.8, &k, 1e-9).unwrap(),
            BranchLabel::ExA
        );
    }

    fn sample_movers(count: usize) -> Vec<(f64, f64)> {
        let mut rng = crate::zpoly::Rng64::new(0x7472_6961_6e67_6c65);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let ux = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            let uy = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            let x = -2.0 + 5.0 * ux;
            let y = -2.5 + 5.0 * uy;
            if y.abs() > 1e-3 {
                out.push((x, y));
            }
        }
        out
    }

    #[test]
    fn classical_identities_hold_numerically() {
        for (x, y) in sample_movers(100_000) {
            let m = metrics(x, y).unwrap();
            let rs = (m.inradius * m.s - m.area).abs() / m.area;
            assert!(rs < 1e-12, "r*s = T fails at ({x}, {y}): {rs}");
            let abc = m.a * m.b * m.c;
            let rt = (4.0 * m.circumradius * m.area - abc).abs() / abc;
            assert!(rt < 1e-12, "4RT = abc fails at ({x}, {y}): {rt}");
            let sum = m.exradius_a + m.exradius_b + m.exradius_c - m.inradius;
            let ex = (sum - 4.0 * m.circumradius).abs() / (4.0 * m.circumradius);
            assert!(ex < 1e-10, "exradius identity fails at ({x}, {y}): {ex}");
        }
    }

    #[test]
    fn ratio_inequality_holds_and_fails_on_excircles() {
        let mut witness = false;
        for (x, y) in sample_movers(100_000) {
            let m = metrics(x, y).unwrap();
            assert!(
                m.circumradius >= 2.0 * m.inradius - 1e-12,
                "R >= 2r fails at ({x}, {y})"
            );
            if m.circumradius < 2.0 * m.exradius_a {
                witness = true;
            }
        }
        assert!(witness, "no sample with R < 2*r_a found");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn metrics_positive_off_base_line(
                x in -5.0f64..5.0,
                y in prop_oneof![(-5.0f64..-1e-6), (1e-6f64..5.0)],
            ) {
                let m = metrics(x, y).unwrap();
                prop_assert!(m.a > 0.0 && m.b > 0.0);
                prop_assert!(m.area > 0.0);
                prop_assert!(m.inradius > 0.0);
                prop_assert!(m.exradius_a > 0.0 && m.exradius_b > 0.0 && m.exradius_c > 0.0);
                prop_assert!(m.circumradius > 0.0);
                // strict triangle inequality off the base line
                prop_assert!(m.a + m.b > m.c && m.b + m.c > m.a && m.c + m.a > m.b);
            }

            #[test]
            fn classify_is_deterministic(
                x in -2.0f64..3.0,
                y in prop_oneof![(-2.5f64..-1e-3), (1e-3f64..2.5)],
            ) {
                let first = classify_sample(x, y, &rat(2, 1), 1e-6).unwrap();
                let second = classify_sample(x, y, &rat(2, 1), 1e-6).unwrap();
                prop_assert_eq!(first, second);
            }
        }
    }
}
