//! p-variation, l^p norms, the ratio functionals whose suprema define the
//! sharp constants, and a majorization / Karamata checker.

use core::fmt;

use crate::error::{MajorizationError, RatioError, ValueError};
use crate::graph::{Graph, Vertex};
use crate::maxop::{MaximalOperator, VertexFunction};

/// Default absolute tolerance for floating predicates.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// An exponent `p` in `(0, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PExponent {
    Finite(f64),
    Infinity,
}

impl PExponent {
    pub fn new(p: f64) -> Result<Self, ValueError> {
        if p == f64::INFINITY {
            Ok(PExponent::Infinity)
        } else if p.is_finite() && p > 0.0 {
            Ok(PExponent::Finite(p))
        } else {
            Err(ValueError::Exponent(p))
        }
    }

    /// The value as an `f64`, `inf` included.
    pub fn get(self) -> f64 {
        match self {
            PExponent::Finite(p) => p,
            PExponent::Infinity => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, PExponent::Infinity)
    }

    /// Parses a decimal or `inf` / `infinity`.
    pub fn parse(s: &str) -> Result<Self, ValueError> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(PExponent::Infinity);
        }
        t.parse::<f64>()
            .map_err(|_| ValueError::Exponent(f64::NAN))
            .and_then(PExponent::new)
    }

    /// `max(1 - 1/p, 0)`, the Hölder exponent that converts `Var_p` into a
    /// bound on a sum of `k` differences: `sum <= k^{this} Var_p`.
    pub fn holder_exponent(self) -> f64 {
        match self {
            PExponent::Finite(p) => (1.0 - 1.0 / p).max(0.0),
            PExponent::Infinity => 1.0,
        }
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PExponent::Finite(p) => write!(f, "{p}"),
            PExponent::Infinity => f.write_str("inf"),
        }
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for PExponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            PExponent::Finite(p) => s.serialize_f64(*p),
            PExponent::Infinity => s.serialize_str("inf"),
        }
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for PExponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw<'a> {
            Num(f64),
            Str(&'a str),
        }
        let parsed = match Raw::deserialize(d)? {
            Raw::Num(p) => PExponent::new(p),
            Raw::Str(s) => PExponent::parse(s),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// Sum of `|x|^p` folded so that `p = 1, 2` avoid `pow`.
#[derive(Clone, Copy)]
struct PowerSum {
    p: PExponent,
    acc: f64,
}

impl PowerSum {
    fn new(p: PExponent) -> Self {
        PowerSum { p, acc: 0.0 }
    }

    #[inline]
    fn push(&mut self, x: f64) {
        let a = x.abs();
        match self.p {
            PExponent::Infinity => self.acc = self.acc.max(a),
            PExponent::Finite(1.0) => self.acc += a,
            PExponent::Finite(2.0) => self.acc += a * a,
            PExponent::Finite(p) => {
                if a > 0.0 {
                    self.acc += libm::pow(a, p)
                }
            }
        }
    }

    fn finish(self) -> f64 {
        match self.p {
            PExponent::Infinity => self.acc,
            PExponent::Finite(1.0) => self.acc,
            PExponent::Finite(2.0) => libm::sqrt(self.acc),
            PExponent::Finite(p) => {
                if self.acc == 0.0 {
                    0.0
                } else {
                    libm::pow(self.acc, 1.0 / p)
                }
            }
        }
    }
}

pub(crate) fn variation_of(g: &Graph, f: &[f64], p: PExponent) -> f64 {
    let mut s = PowerSum::new(p);
    for &(i, j) in g.edges() {
        s.push(f[i] - f[j]);
    }
    s.finish()
}

pub(crate) fn norm_of(f: &[f64], p: PExponent) -> f64 {
    let mut s = PowerSum::new(p);
    for &x in f {
        s.push(x);
    }
    s.finish()
}

/// `Var_p f = (sum over edges |f(u) - f(v)|^p)^(1/p)`; the maximum edge
/// difference for `p = inf`; 0 on an edgeless graph.
pub fn p_variation(g: &Graph, f: &VertexFunction, p: PExponent) -> Result<f64, ValueError> {
    f.check_on(g)?;
    Ok(variation_of(g, f.values(), p))
}

/// `||f||_p`; `max |f|` for `p = inf`.
pub fn lp_norm(f: &VertexFunction, p: PExponent) -> f64 {
    norm_of(f.values(), p)
}

/// `Var_p f + |f(anchor)|`, a norm on functions over a connected graph.
pub fn bv_norm(
    g: &Graph,
    f: &VertexFunction,
    p: PExponent,
    anchor: Vertex,
) -> Result<f64, ValueError> {
    Ok(p_variation(g, f, p)? + f[anchor].abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RatioResult {
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
}

/// `Var_p (M f) / Var_p f` for the selected operator.
pub fn variation_ratio(
    g: &Graph,
    f: &VertexFunction,
    p: PExponent,
    op: MaximalOperator,
) -> Result<RatioResult, RatioError> {
    let denominator = p_variation(g, f, p)?;
    if denominator == 0.0 {
        return Err(RatioError::ZeroVariation);
    }
    let mf = op.apply(g, f)?;
    let numerator = variation_of(g, mf.values(), p);
    Ok(RatioResult {
        numerator,
        denominator,
        ratio: numerator / denominator,
    })
}

/// `||M f||_p / ||f||_p` for the selected operator.
pub fn norm_ratio(
    g: &Graph,
    f: &VertexFunction,
    p: PExponent,
    op: MaximalOperator,
) -> Result<RatioResult, RatioError> {
    f.check_on(g)?;
    let denominator = lp_norm(f, p);
    if denominator == 0.0 {
        return Err(RatioError::ZeroNorm);
    }
    let mf = op.apply(g, f)?;
    let numerator = lp_norm(&mf, p);
    Ok(RatioResult {
        numerator,
        denominator,
        ratio: numerator / denominator,
    })
}

/// `Var_q(M f - M h)`, the quantity controlled by continuity of `M`.
pub fn difference_variation(
    g: &Graph,
    f: &VertexFunction,
    h: &VertexFunction,
    q: PExponent,
    op: MaximalOperator,
) -> Result<f64, ValueError> {
    let mf = op.apply(g, f)?;
    let mh = op.apply(g, h)?;
    Ok(variation_of(g, mf.sub(&mh).values(), q))
}

/// Convex test functions for Karamata's inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvexFn {
    /// `t -> -t^p` on `[0, inf)`, `p in (0, 1]`.
    NegPower(f64),
    /// `t -> e^{p t}`, `p > 0`.
    Exp(f64),
}

impl ConvexFn {
    pub fn eval(self, t: f64) -> f64 {
        match self {
            ConvexFn::NegPower(p) => -libm::pow(t, p),
            ConvexFn::Exp(p) => libm::exp(p * t),
        }
    }

    fn in_domain(self, t: f64) -> bool {
        match self {
            ConvexFn::NegPower(_) => t >= 0.0,
            ConvexFn::Exp(_) => t.is_finite(),
        }
    }
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<(), MajorizationError> {
    if x.len() != y.len() {
        return Err(MajorizationError::LengthMismatch(x.len(), y.len()));
    }
    for v in [x, y] {
        if let Some(i) = v.windows(2).position(|w| w[0] < w[1]) {
            return Err(MajorizationError::UnsortedInput(i + 1));
        }
    }
    Ok(())
}

/// Whether `x` majorizes `y`; both must already be sorted nonincreasing.
pub fn majorizes(x: &[f64], y: &[f64]) -> Result<bool, MajorizationError> {
    majorizes_with_tolerance(x, y, DEFAULT_TOLERANCE)
}

pub fn majorizes_with_tolerance(x: &[f64], y: &[f64], tol: f64) -> Result<bool, MajorizationError> {
    check_pair(x, y)?;
    let (mut sx, mut sy) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sx += a;
        sy += b;
        if sx < sy - tol {
            return Ok(false);
        }
    }
    Ok((sx - sy).abs() <= tol)
}

/// `sum phi(x_i) >= sum phi(y_i)` (within the default tolerance). This is the
/// direct evaluation; it does not assume `x` majorizes `y`.
pub fn karamata_holds(x: &[f64], y: &[f64], phi: ConvexFn) -> Result<bool, MajorizationError> {
    check_pair(x, y)?;
    if let Some(i) = x.iter().chain(y).position(|&t| !phi.in_domain(t)) {
        return Err(MajorizationError::OutsideDomain(i % x.len().max(1)));
    }
    let lhs: f64 = x.iter().map(|&t| phi.eval(t)).sum();
    let rhs: f64 = y.iter().map(|&t| phi.eval(t)).sum();
    Ok(lhs >= rhs - DEFAULT_TOLERANCE * rhs.abs().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxop::Alpha;
    use alloc::vec;

    const CLASSICAL: MaximalOperator = MaximalOperator::CLASSICAL;

    fn p(x: f64) -> PExponent {
        PExponent::new(x).unwrap()
    }

    fn vf(v: &[f64]) -> VertexFunction {
        VertexFunction::new(v.to_vec()).unwrap()
    }

    #[test]
    fn delta_variation_on_complete() {
        for n in 2..9 {
            let g = Graph::complete(n).unwrap();
            let d = VertexFunction::delta(n, 1);
            for &q in &[0.5, 1.0, 1.5, 2.0, 3.0] {
                let expect = libm::pow((n - 1) as f64, 1.0 / q);
                let got = p_variation(&g, &d, p(q)).unwrap();
                assert!((got - expect).abs() <= 1e-12 * expect, "n={n} p={q}");
            }
            assert_eq!(p_variation(&g, &d, PExponent::Infinity).unwrap(), 1.0);
        }
    }

    #[test]
    fn constant_has_no_variation() {
        let g = Graph::star(5).unwrap();
        let c = VertexFunction::constant(5, -3.0);
        for q in [p(0.3), p(1.0), p(2.0), PExponent::Infinity] {
            assert_eq!(p_variation(&g, &c, q).unwrap(), 0.0);
        }
        let edgeless = Graph::new(3, &[]).unwrap();
        assert_eq!(
            p_variation(&edgeless, &vf(&[1.0, 5.0, 2.0]), p(2.0)).unwrap(),
            0.0
        );
    }

    #[test]
    fn star3_triple_variation() {
        let g = Graph::star(3).unwrap();
        let v = p_variation(&g, &vf(&[3.0, 5.0, 2.0]), p(2.0)).unwrap();
        assert!((v - libm::sqrt(5.0)).abs() < 1e-15);
    }

    #[test]
    fn norms() {
        for q in [p(0.5), p(1.0), p(3.0), PExponent::Infinity] {
            assert_eq!(lp_norm(&VertexFunction::delta(4, 2), q), 1.0);
        }
        assert_eq!(lp_norm(&vf(&[3.0, 4.0]), p(2.0)), 5.0);
        let v = lp_norm(&vf(&[4.0, 4.0, 1.0, 1.0, 1.0, 1.0]), p(2.0));
        // 16 + 16 + 4 * 1 = 36
        assert_eq!(v, 6.0);
        assert_eq!(lp_norm(&vf(&[-7.0, 2.0]), PExponent::Infinity), 7.0);
    }

    #[test]
    fn ratios_from_closed_forms() {
        for n in 2..9 {
            let g = Graph::complete(n).unwrap();
            let d = VertexFunction::delta(n, 1);
            for &q in &[0.3, 0.78, 1.0, 2.0, 5.0] {
                let r = variation_ratio(&g, &d, p(q), CLASSICAL).unwrap().ratio;
                assert!((r - (1.0 - 1.0 / n as f64)).abs() < 1e-12);
            }
            let r = norm_ratio(&g, &d, p(2.0), CLASSICAL).unwrap().ratio;
            let expect = libm::sqrt(1.0 + (n - 1) as f64 / (n * n) as f64);
            assert!((r - expect).abs() < 1e-12);
        }

        let s3 = Graph::star(3).unwrap();
        let r = variation_ratio(&s3, &vf(&[3.0, 5.0, 2.0]), p(2.0), CLASSICAL).unwrap();
        assert!((r.ratio - libm::sqrt(5.0) / 3.0).abs() < 1e-12);

        for n in 3..10 {
            let g = Graph::star(n).unwrap();
            let nf = n as f64;
            let mut values = vec![nf - 1.0; n];
            values[0] = nf;
            values[1] = 2.0 * nf - 1.0;
            let r = variation_ratio(&g, &vf(&values), p(2.0), CLASSICAL)
                .unwrap()
                .ratio;
            let expect = libm::sqrt((nf - 1.0) * (nf - 1.0) + nf - 2.0) / nf;
            assert!((r - expect).abs() < 1e-12, "n={n}");
            assert!(r > 1.0 - 1.0 / nf);
        }

        for m in 1..5 {
            let n = 3 * m;
            let g = Graph::complete(n).unwrap();
            let values: alloc::vec::Vec<f64> =
                (0..n).map(|i| if i < m { 4.0 } else { 1.0 }).collect();
            let r = norm_ratio(&g, &vf(&values), p(2.0), CLASSICAL)
                .unwrap()
                .ratio;
            assert!((r - libm::sqrt(4.0 / 3.0)).abs() < 1e-12);
        }

        let g = Graph::path(4).unwrap();
        let c = VertexFunction::constant(4, 2.0);
        assert_eq!(norm_ratio(&g, &c, p(1.5), CLASSICAL).unwrap().ratio, 1.0);
    }

    #[test]
    fn zero_denominators_are_errors() {
        let g = Graph::complete(3).unwrap();
        let c = VertexFunction::constant(3, 1.0);
        assert_eq!(
            variation_ratio(&g, &c, p(1.0), CLASSICAL),
            Err(RatioError::ZeroVariation)
        );
        assert_eq!(
            norm_ratio(&g, &VertexFunction::constant(3, 0.0), p(1.0), CLASSICAL),
            Err(RatioError::ZeroNorm)
        );
    }

    #[test]
    fn infinite_variation_is_a_limit() {
        let g = Graph::cycle(6).unwrap();
        let f = vf(&[0.1, 0.9, 0.4, 0.35, 0.8, 0.0]);
        let vinf = p_variation(&g, &f, PExponent::Infinity).unwrap();
        let v64 = p_variation(&g, &f, p(64.0)).unwrap();
        assert!((v64 - vinf).abs() <= 0.05 * vinf);
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!(PExponent::parse("inf").unwrap(), PExponent::Infinity);
        assert_eq!(PExponent::parse(" 1.5 ").unwrap(), PExponent::Finite(1.5));
        assert!(PExponent::parse("0").is_err());
        assert!(PExponent::parse("-2").is_err());
        assert!(PExponent::parse("abc").is_err());
        assert_eq!(p(2.0).holder_exponent(), 0.5);
        assert_eq!(p(0.5).holder_exponent(), 0.0);
    }

    #[test]
    fn bv_norm_adds_anchor() {
        let g = Graph::path(3).unwrap();
        let f = vf(&[1.0, -2.0, 0.0]);
        assert_eq!(bv_norm(&g, &f, p(1.0), 1).unwrap(), 5.0 + 2.0);
        let _ = Alpha::ZERO;
    }

    #[test]
    fn majorization_basics() {
        assert!(majorizes(&[2.0, 0.0], &[1.0, 1.0]).unwrap());
        assert!(!majorizes(&[1.0, 1.0], &[2.0, 0.0]).unwrap());
        for q in [0.1, 1.0, 3.0] {
            assert!(karamata_holds(&[2.0, 0.0], &[1.0, 1.0], ConvexFn::Exp(q)).unwrap());
        }
        assert!(karamata_holds(&[2.0, 0.0], &[1.0, 1.0], ConvexFn::NegPower(0.5)).unwrap());
        let x = [3.0, 1.0, 1.0];
        assert!(majorizes(&x, &x).unwrap());
        assert!(karamata_holds(&x, &x, ConvexFn::NegPower(0.3)).unwrap());
        assert!(karamata_holds(&x, &x, ConvexFn::Exp(2.0)).unwrap());
        // unequal totals
        assert!(!majorizes(&[3.0, 0.0], &[1.0, 1.0]).unwrap());
    }

    #[test]
    fn majorization_errors() {
        assert_eq!(
            majorizes(&[1.0], &[1.0, 0.0]),
            Err(MajorizationError::LengthMismatch(1, 2))
        );
        assert_eq!(
            majorizes(&[0.0, 1.0], &[1.0, 0.0]),
            Err(MajorizationError::UnsortedInput(1))
        );
        assert!(matches!(
            karamata_holds(&[1.0, -1.0], &[0.0, 0.0], ConvexFn::NegPower(0.5)),
            Err(MajorizationError::OutsideDomain(_))
        ));
    }
}
