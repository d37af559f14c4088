//! Exact scalar arithmetic: arbitrary-precision rationals, rational-endpoint
//! intervals, and real quadratic extensions `u + v*sqrt(n)`.
//!
//! Rationals are `num_rational::BigRational`, which already maintains the
//! canonical form this crate relies on (reduced, positive denominator, zero
//! as 0/1). The helpers here add the fallible constructors and conversions
//! the rest of the pipeline needs.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_bigint::BigInt as Integer;

/// Canonical arbitrary-precision rational: reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// Errors from exact-arithmetic constructors and refinement steps.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("radicand mismatch: sqrt({0}) vs sqrt({1})")]
    RadicandMismatch(Integer, Integer),
    #[error("negative radicand {0}")]
    NegativeRadicand(Integer),
    #[error("no sign change on [{0}, {1}]")]
    NoSignChange(String, String),
    #[error("malformed number literal {0:?}")]
    BadLiteral(String),
}

/// Builds a canonical rational, rejecting a zero denominator.
pub fn rat_make(num: Integer, den: Integer) -> Result<Rational, ExactError> {
    if den.is_zero() {
        return Err(ExactError::ZeroDenominator);
    }
    Ok(Rational::new(num, den))
}

/// Shorthand for small integer-pair rationals (panics on zero denominator).
pub fn rat(num: i64, den: i64) -> Rational {
    rat_make(BigInt::from(num), BigInt::from(den)).expect("nonzero denominator")
}

/// Parses an exact rational from an integer literal (`-12`), a fraction
/// (`21/10`), or a decimal literal (`2.1`, converted exactly).
pub fn rational_from_str(text: &str) -> Result<Rational, ExactError> {
    let s = text.trim();
    let bad = || ExactError::BadLiteral(String::from(text));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        return rat_make(n, d);
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) || int_digits.is_empty() {
            return Err(bad());
        }
        let mut digits = String::from(int_digits);
        digits.push_str(frac_part);
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let r = Rational::new(num, den);
        return Ok(if negative { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Rounds a rational to the nearest `f64`, guarding against overflow when
/// numerator and denominator are both enormous.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if r.numer().is_zero() {
        return 0.0;
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    // Shift both sides down together so each part fits in f64 range.
    let excess = nb.min(db) - 900;
    if excess > 0 {
        let num = r.numer() >> (excess as u64);
        let den = r.denom() >> (excess as u64);
        return num.to_f64().unwrap_or(f64::NAN) / den.to_f64().unwrap_or(f64::NAN);
    }
    let (num, den) = (r.numer().to_f64(), r.denom().to_f64());
    match (num, den) {
        (Some(n), Some(d)) => n / d,
        _ => f64::NAN,
    }
}

/// Closed interval with rational endpoints, `lo <= hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    /// Builds an interval, normalizing endpoint order.
    pub fn new(a: Rational, b: Rational) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn point(v: Rational) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Strict sign of every value in the interval: `Some(1)`, `Some(-1)`, or
    /// `None` when the interval straddles (or touches) zero.
    pub fn strict_sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = candidates[0].clone();
        let mut hi = candidates[0].clone();
        for c in &candidates[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        Interval { lo, hi }
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        let (a, b) = (&self.lo * c, &self.hi * c);
        Interval::new(a, b)
    }

    /// Tight power: handles the even-power case ([-1,2]^2 = [0,4]).
    pub fn pow(&self, e: u32) -> Interval {
        if e == 0 {
            return Interval::point(Rational::one());
        }
        let mut out = self.clone();
        for _ in 1..e {
            out = out.mul(self);
        }
        if e % 2 == 0 && self.contains_zero() {
            out.lo = Rational::zero();
        }
        out
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Evaluates a univariate polynomial given by low-to-high coefficients.
pub fn eval_univariate(coeffs: &[Rational], t: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

/// One bisection step on a sign-changing bracket.
///
/// Requires `f(lo)` and `f(hi)` to have strictly opposite signs. Returns the
/// half keeping the sign change; if the midpoint is an exact root the result
/// collapses to the degenerate point interval.
pub fn interval_refine_root(coeffs: &[Rational], bracket: &Interval) -> Result<Interval, ExactError> {
    let f_lo = eval_univariate(coeffs, bracket.lo());
    let f_hi = eval_univariate(coeffs, bracket.hi());
    if f_lo.is_zero() || f_hi.is_zero() || f_lo.is_positive() == f_hi.is_positive() {
        return Err(ExactError::NoSignChange(
            alloc::format!("{}", bracket.lo()),
            alloc::format!("{}", bracket.hi()),
        ));
    }
    let mid = bracket.midpoint();
    let f_mid = eval_univariate(coeffs, &mid);
    if f_mid.is_zero() {
        return Ok(Interval::point(mid));
    }
    if f_mid.is_positive() == f_lo.is_positive() {
        Ok(Interval { lo: mid, hi: bracket.hi().clone() })
    } else {
        Ok(Interval { lo: bracket.lo().clone(), hi: mid })
    }
}

/// Removes the largest square divisor of a nonnegative integer, returning
/// `(root, squarefree)` with `input = root^2 * squarefree`.
///
/// Trial division handles prime squares up to 2^32 via the u16 prime range;
/// a final perfect-square check catches the common `s^2` tail.
fn extract_square_part(n: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(!n.is_negative());
    let mut root = BigInt::one();
    let mut rem = n.clone();
    if rem.is_zero() || rem.is_one() {
        return (root, rem);
    }
    let mut p = BigInt::from(2u32);
    loop {
        let p2 = &p * &p;
        if &p2 > &rem {
            break;
        }
        loop {
            let (q, r) = num_integer::Integer::div_rem(&rem, &p2);
            if r.is_zero() {
                rem = q;
                root *= &p;
            } else {
                break;
            }
        }
        if p.to_u32().map_or(true, |v| v > 65_536) {
            break;
        }
        p += 1;
    }
    let s = rem.sqrt();
    if &s * &s == rem {
        root *= &s;
        rem = BigInt::one();
    }
    (root, rem)
}

/// Element of the real quadratic extension `u + v*sqrt(n)` for a fixed
/// squarefree radicand `n >= 0`. Values with `n` in {0, 1} fold into the
/// rational part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadExt {
    u: Rational,
    v: Rational,
    n: Integer,
}

impl QuadExt {
    /// Builds `u + v*sqrt(n)`, normalizing the radicand: square factors move
    /// into `v`, and `n` in {0, 1} (or `v = 0`) collapses to a rational.
    pub fn new(u: Rational, v: Rational, n: Integer) -> Result<Self, ExactError> {
        if n.is_negative() {
            return Err(ExactError::NegativeRadicand(n));
        }
        if v.is_zero() {
            return Ok(QuadExt { u, v: Rational::zero(), n: BigInt::zero() });
        }
        let (root, core) = extract_square_part(&n);
        if core.is_zero() {
            return Ok(QuadExt { u, v: Rational::zero(), n: BigInt::zero() });
        }
        let scaled = v * Rational::from_integer(root);
        if core.is_one() {
            Ok(QuadExt { u: u + scaled, v: Rational::zero(), n: BigInt::zero() })
        } else {
            Ok(QuadExt { u, v: scaled, n: core })
        }
    }

    pub fn from_rational(u: Rational) -> Self {
        QuadExt { u, v: Rational::zero(), n: BigInt::zero() }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn rational_part(&self) -> &Rational {
        &self.u
    }

    pub fn radical_part(&self) -> &Rational {
        &self.v
    }

    pub fn radicand(&self) -> &Integer {
        &self.n
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    /// Rational value if the radical part vanishes.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.v.is_zero().then_some(&self.u)
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    /// Radicand shared by both operands, or an error when they genuinely mix
    /// two distinct extensions.
    fn join_radicand(&self, other: &QuadExt) -> Result<Integer, ExactError> {
        match (self.v.is_zero(), other.v.is_zero()) {
            (true, _) => Ok(other.n.clone()),
            (false, true) => Ok(self.n.clone()),
            (false, false) if self.n == other.n => Ok(self.n.clone()),
            _ => Err(ExactError::RadicandMismatch(self.n.clone(), other.n.clone())),
        }
    }

    pub fn add(&self, other: &QuadExt) -> Result<QuadExt, ExactError> {
        let n = self.join_radicand(other)?;
        Ok(QuadExt { u: &self.u + &other.u, v: &self.v + &other.v, n })
    }

    pub fn sub(&self, other: &QuadExt) -> Result<QuadExt, ExactError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QuadExt {
        QuadExt { u: -self.u.clone(), v: -self.v.clone(), n: self.n.clone() }
    }

    pub fn scale(&self, c: &Rational) -> QuadExt {
        if c.is_zero() {
            return QuadExt::zero();
        }
        QuadExt { u: &self.u * c, v: &self.v * c, n: self.n.clone() }
    }

    pub fn mul(&self, other: &QuadExt) -> Result<QuadExt, ExactError> {
        let n = self.join_radicand(other)?;
        let nr = Rational::from_integer(n.clone());
        let u = &self.u * &other.u + (&self.v * &other.v) * nr;
        let v = &self.u * &other.v + &self.v * &other.u;
        if v.is_zero() {
            Ok(QuadExt { u, v, n: BigInt::zero() })
        } else {
            Ok(QuadExt { u, v, n })
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<QuadExt> {
        if self.is_zero() {
            return None;
        }
        // (u + v sqrt n)(u - v sqrt n) = u^2 - n v^2, nonzero since n is not
        // a perfect square whenever v != 0.
        let nr = Rational::from_integer(self.n.clone());
        let norm = &self.u * &self.u - (&self.v * &self.v) * nr;
        debug_assert!(!norm.is_zero());
        Some(QuadExt {
            u: &self.u / &norm,
            v: -(&self.v / &norm),
            n: self.n.clone(),
        })
    }

    /// Exact sign of the real value: -1, 0, or 1.
    pub fn sign(&self) -> i32 {
        let su = rat_sign(&self.u);
        let sv = rat_sign(&self.v);
        if sv == 0 {
            return su;
        }
        if su == 0 {
            return sv;
        }
        if su == sv {
            return su;
        }
        // Opposite signs: compare u^2 against n v^2.
        let nr = Rational::from_integer(self.n.clone());
        let lhs = &self.u * &self.u;
        let rhs = (&self.v * &self.v) * nr;
        match lhs.cmp(&rhs) {
            Ordering::Greater => su,
            Ordering::Less => sv,
            Ordering::Equal => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let base = rational_to_f64(&self.u);
        if self.v.is_zero() {
            return base;
        }
        let n = self.n.to_f64().unwrap_or(f64::NAN);
        base + rational_to_f64(&self.v) * libm::sqrt(n)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_zero() {
            return write!(f, "{}", self.u);
        }
        if self.u.is_zero() {
            return write!(f, "{}*sqrt({})", self.v, self.n);
        }
        if self.v.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.u, -self.v.clone(), self.n)
        } else {
            write!(f, "{} + {}*sqrt({})", self.u, self.v, self.n)
        }
    }
}

/// Product of two quadratic-extension values over the same radicand.
pub fn quad_mul(a: &QuadExt, b: &QuadExt) -> Result<QuadExt, ExactError> {
    a.mul(b)
}

pub(crate) fn rat_sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        rat(n, d)
    }

    #[test]
    fn rat_make_reduces_and_normalizes_sign() {
        let r = rat_make(BigInt::from(2), BigInt::from(4)).unwrap();
        assert_eq!(r, q(1, 2));
        let r = rat_make(BigInt::from(3), BigInt::from(-6)).unwrap();
        assert_eq!(r, q(-1, 2));
        assert!(r.denom().is_positive());
        let r = rat_make(BigInt::from(0), BigInt::from(5)).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.denom(), &BigInt::from(1));
    }

    #[test]
    fn rat_make_rejects_zero_denominator() {
        assert_eq!(
            rat_make(BigInt::from(1), BigInt::from(0)),
            Err(ExactError::ZeroDenominator)
        );
    }

    #[test]
    fn rational_literals_parse_exactly() {
        assert_eq!(rational_from_str("21/10").unwrap(), q(21, 10));
        assert_eq!(rational_from_str("2.1").unwrap(), q(21, 10));
        assert_eq!(rational_from_str("1.9").unwrap(), q(19, 10));
        assert_eq!(rational_from_str("2.01").unwrap(), q(201, 100));
        assert_eq!(rational_from_str("-0.5").unwrap(), q(-1, 2));
        assert_eq!(rational_from_str("7").unwrap(), q(7, 1));
        assert!(rational_from_str("2.").is_err());
        assert!(rational_from_str("a/3").is_err());
        assert!(rational_from_str("1/0").is_err());
    }

    #[test]
    fn quad_mul_matches_hand_values() {
        let sqrt3 = QuadExt::new(q(0, 1), q(1, 1), BigInt::from(3)).unwrap();
        let sq = quad_mul(&sqrt3, &sqrt3).unwrap();
        assert_eq!(sq.as_rational(), Some(&q(3, 1)));

        let a = QuadExt::new(q(1, 2), q(1, 2), BigInt::from(3)).unwrap();
        let b = QuadExt::new(q(1, 2), q(-1, 2), BigInt::from(3)).unwrap();
        let prod = quad_mul(&a, &b).unwrap();
        assert_eq!(prod.as_rational(), Some(&q(-1, 2)));

        let one = QuadExt::from_rational(q(1, 1));
        let c = QuadExt::new(q(5, 7), q(-2, 9), BigInt::from(3)).unwrap();
        assert_eq!(quad_mul(&one, &c).unwrap(), c);
    }

    #[test]
    fn quad_radicand_mismatch_is_an_error() {
        let a = QuadExt::new(q(1, 1), q(1, 1), BigInt::from(3)).unwrap();
        let b = QuadExt::new(q(1, 1), q(1, 1), BigInt::from(5)).unwrap();
        assert!(matches!(a.add(&b), Err(ExactError::RadicandMismatch(_, _))));
        assert!(matches!(quad_mul(&a, &b), Err(ExactError::RadicandMismatch(_, _))));
    }

    #[test]
    fn quad_radicand_normalizes_square_parts() {
        // sqrt(12) = 2 sqrt(3)
        let a = QuadExt::new(q(0, 1), q(1, 1), BigInt::from(12)).unwrap();
        assert_eq!(a.radicand(), &BigInt::from(3));
        assert_eq!(a.radical_part(), &q(2, 1));
        // sqrt(49) = 7 exactly
        let b = QuadExt::new(q(1, 1), q(1, 1), BigInt::from(49)).unwrap();
        assert_eq!(b.as_rational(), Some(&q(8, 1)));
        // sqrt(1) folds, sqrt(0) vanishes
        let c = QuadExt::new(q(2, 1), q(5, 1), BigInt::from(1)).unwrap();
        assert_eq!(c.as_rational(), Some(&q(7, 1)));
        let d = QuadExt::new(q(2, 1), q(5, 1), BigInt::from(0)).unwrap();
        assert_eq!(d.as_rational(), Some(&q(2, 1)));
    }

    #[test]
    fn quad_sign_is_exact() {
        // 7/4 - sqrt(3) > 0 since 49/16 > 3
        let a = QuadExt::new(q(7, 4), q(-1, 1), BigInt::from(3)).unwrap();
        assert_eq!(a.sign(), 1);
        // 12/7 - sqrt(3) < 0 since 144/49 < 3
        let b = QuadExt::new(q(12, 7), q(-1, 1), BigInt::from(3)).unwrap();
        assert_eq!(b.sign(), -1);
        assert_eq!(QuadExt::zero().sign(), 0);
        let c = QuadExt::new(q(0, 1), q(-2, 5), BigInt::from(7)).unwrap();
        assert_eq!(c.sign(), -1);
    }

    #[test]
    fn quad_inverse_multiplies_to_one() {
        let a = QuadExt::new(q(3, 2), q(-5, 4), BigInt::from(7)).unwrap();
        let inv = a.inverse().unwrap();
        let prod = quad_mul(&a, &inv).unwrap();
        assert_eq!(prod.as_rational(), Some(&q(1, 1)));
        assert!(QuadExt::zero().inverse().is_none());
    }

    #[test]
    fn refine_root_halves_the_bracket() {
        // f = t^2 - 3 on [1, 2] -> [3/2, 2]
        let f = [q(-3, 1), q(0, 1), q(1, 1)];
        let out = interval_refine_root(&f, &Interval::new(q(1, 1), q(2, 1))).unwrap();
        assert_eq!(out, Interval::new(q(3, 2), q(2, 1)));

        // f = t - 1 on [0, 2]: exact midpoint hit collapses to [1, 1]
        let g = [q(-1, 1), q(1, 1)];
        let out = interval_refine_root(&g, &Interval::new(q(0, 1), q(2, 1))).unwrap();
        assert!(out.is_point());
        assert_eq!(out.lo(), &q(1, 1));

        // f = t^3 - 2 on [1, 2], two steps -> [5/4, 3/2]
        let h = [q(-2, 1), q(0, 1), q(0, 1), q(1, 1)];
        let step1 = interval_refine_root(&h, &Interval::new(q(1, 1), q(2, 1))).unwrap();
        assert_eq!(step1, Interval::new(q(1, 1), q(3, 2)));
        let step2 = interval_refine_root(&h, &step1).unwrap();
        assert_eq!(step2, Interval::new(q(5, 4), q(3, 2)));
    }

    #[test]
    fn refine_root_rejects_non_bracket() {
        let f = [q(1, 1), q(0, 1), q(1, 1)]; // t^2 + 1, always positive
        let err = interval_refine_root(&f, &Interval::new(q(-1, 1), q(1, 1)));
        assert!(matches!(err, Err(ExactError::NoSignChange(_, _))));
    }

    #[test]
    fn interval_arithmetic_is_tight_enough() {
        let a = Interval::new(q(-1, 1), q(2, 1));
        let sq = a.pow(2);
        assert_eq!(sq, Interval::new(q(0, 1), q(4, 1)));
        let b = Interval::new(q(3, 1), q(4, 1));
        assert_eq!(a.mul(&b), Interval::new(q(-4, 1), q(8, 1)));
        assert_eq!(a.add(&b), Interval::new(q(2, 1), q(6, 1)));
        assert_eq!(a.sub(&b), Interval::new(q(-5, 1), q(-1, 1)));
        assert_eq!(a.neg(), Interval::new(q(-2, 1), q(1, 1)));
        assert_eq!(a.strict_sign(), None);
        assert_eq!(b.strict_sign(), Some(1));
        assert_eq!(b.neg().strict_sign(), Some(-1));
    }

    #[test]
    fn rational_to_f64_handles_extremes() {
        assert_eq!(rational_to_f64(&q(1, 2)), 0.5);
        assert_eq!(rational_to_f64(&Rational::zero()), 0.0);
        let huge = BigInt::from(1) << 2000u32;
        let r = Rational::new(huge.clone() * 3, huge);
        assert_eq!(rational_to_f64(&r), 3.0);
    }

    #[test]
    fn quad_to_f64_tracks_float_arithmetic() {
        let a = QuadExt::new(q(1, 2), q(1, 2), BigInt::from(3)).unwrap();
        let expect = 0.5 + 0.5 * 3.0_f64.sqrt();
        assert!((a.to_f64() - expect).abs() < 1e-12);
    }
}
