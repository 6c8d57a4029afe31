//! Closed-form sharp constants for `K_n` and `S_n`, their proof status, and
//! the functions that attain them.
//!
//! Status is data: each family has an ordered rule table keyed by a
//! predicate on `(n, p)`; the first matching rule wins.

use alloc::string::String;
use alloc::vec;
use libm::{log, pow, sqrt};

use crate::error::ConstantError;
use crate::graph::{Family, Graph, Vertex};
use crate::maxop::{MaximalOperator, VertexFunction};
use crate::variation::PExponent;

/// Which supremum is being bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Target {
    /// `sup Var_p(M f) / Var_p(f)`.
    VariationRatio,
    /// `sup ||M f||_p / ||f||_p`.
    NormRatio,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::VariationRatio => "variation_ratio",
            Target::NormRatio => "norm_ratio",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ProofStatus {
    Proved,
    Conjectured,
    Unknown,
}

impl ProofStatus {
    pub fn name(self) -> &'static str {
        match self {
            ProofStatus::Proved => "proved",
            ProofStatus::Conjectured => "conjectured",
            ProofStatus::Unknown => "unknown",
        }
    }
}

/// A constant with its provenance. `value` is present iff the status is
/// proved or conjectured.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConstantResult {
    pub value: Option<f64>,
    pub status: ProofStatus,
    pub source: String,
    pub note: String,
}

impl ConstantResult {
    fn new(value: Option<f64>, status: ProofStatus, source: &str, note: &str) -> Self {
        debug_assert_eq!(value.is_some(), status != ProofStatus::Unknown);
        ConstantResult {
            value,
            status,
            source: source.into(),
            note: note.into(),
        }
    }

    pub fn unknown(note: &str) -> Self {
        ConstantResult::new(None, ProofStatus::Unknown, "", note)
    }

    pub fn is_proved(&self) -> bool {
        self.status == ProofStatus::Proved
    }

    /// The value when proved.
    pub fn proved_value(&self) -> Option<f64> {
        self.value.filter(|_| self.is_proved())
    }
}

/// `ln 4 / ln 6`, lower end of the proved small-p range on `K_n`.
pub fn complete_small_p_threshold() -> f64 {
    log(4.0) / log(6.0)
}

#[derive(Clone, Copy)]
enum Formula {
    OneMinusInvN,
    Star3,
    None,
}

struct Rule {
    applies: fn(usize, PExponent) -> bool,
    formula: Formula,
    status: ProofStatus,
    source: &'static str,
    note: &'static str,
}

fn finite(p: PExponent) -> Option<f64> {
    match p {
        PExponent::Finite(p) => Some(p),
        PExponent::Infinity => None,
    }
}

static COMPLETE_RULES: &[Rule] = &[
    Rule {
        applies: |_, p| p.is_infinite(),
        formula: Formula::OneMinusInvN,
        status: ProofStatus::Conjectured,
        source: "complete-graph conjecture C = 1 - 1/n",
        note: "the sharp-constant argument is written for finite p; p = inf is not covered",
    },
    Rule {
        applies: |_, p| finite(p).is_some_and(|p| p > 1.0),
        formula: Formula::OneMinusInvN,
        status: ProofStatus::Proved,
        source: "complete graph, p > 1: Hölder bound, delta extremizer",
        note: "",
    },
    Rule {
        applies: |n, p| n == 4 && finite(p).is_some_and(|p| p <= 1.0),
        formula: Formula::OneMinusInvN,
        status: ProofStatus::Proved,
        source: "complete graph K_4, 0 < p <= 1: Karamata case analysis",
        note: "",
    },
    Rule {
        applies: |n, p| {
            n >= 3 && finite(p).is_some_and(|p| p >= complete_small_p_threshold() && p <= 1.0)
        },
        formula: Formula::OneMinusInvN,
        status: ProofStatus::Proved,
        source: "complete graph, log 4/log 6 <= p <= 1: induction on n",
        note: "",
    },
    Rule {
        applies: |n, _| n == 3,
        formula: Formula::OneMinusInvN,
        status: ProofStatus::Proved,
        source: "earlier result: for n = 3 the lower bound 1 - 1/n is attained",
        note: "",
    },
    Rule {
        applies: |_, _| true,
        formula: Formula::OneMinusInvN,
        status: ProofStatus::Conjectured,
        source: "complete-graph conjecture C = 1 - 1/n for all n >= 2, p in (0, inf)",
        note: "below log 4/log 6 only K_3 and K_4 are settled",
    },
];

static STAR_RULES: &[Rule] = &[
    Rule {
        applies: |_, p| p.is_infinite(),
        formula: Formula::None,
        status: ProofStatus::Unknown,
        source: "",
        note: "no result for the star graph at p = inf",
    },
    Rule {
        applies: |_, p| p == PExponent::Finite(1.0),
        formula: Formula::OneMinusInvN,
        status: ProofStatus::Proved,
        source: "star graph, p = 1",
        note: "",
    },
    Rule {
        applies: |n, p| n == 3 && finite(p).is_some_and(|p| p > 1.0),
        formula: Formula::Star3,
        status: ProofStatus::Proved,
        source: "star graph S_3, p > 1: (1 + 2^{p'})^{1/p'} / 3 with p' = p/(p-1)",
        note: "exceeds 1 - 1/3, so the value 1 - 1/n fails on stars for p > 1",
    },
    Rule {
        applies: |_, p| finite(p).is_some_and(|p| p > 1.0),
        formula: Formula::None,
        status: ProofStatus::Unknown,
        source: "",
        note: "extremizers on S_n for n > 3 and p > 1 are not understood",
    },
    Rule {
        applies: |n, _| n == 4,
        formula: Formula::OneMinusInvN,
        status: ProofStatus::Proved,
        source: "star graph S_4, 0 < p < 1",
        note: "",
    },
    Rule {
        applies: |_, p| finite(p).is_some_and(|p| p >= 0.5),
        formula: Formula::OneMinusInvN,
        status: ProofStatus::Proved,
        source: "star graph, 1/2 <= p <= 1, all n >= 2",
        note: "",
    },
    Rule {
        applies: |n, _| n == 5,
        formula: Formula::OneMinusInvN,
        status: ProofStatus::Proved,
        source: "star graph S_5, 0 < p < 1: the S_4 inequality extends to n = 5",
        note: "proof only sketched",
    },
    Rule {
        applies: |_, _| true,
        formula: Formula::OneMinusInvN,
        status: ProofStatus::Conjectured,
        source: "star-graph conjecture C = 1 - 1/n for p in (0, 1]",
        note: "for p < 1/2 equality is proved only for n >= C(p), with C(p) not given",
    },
];

fn lookup(rules: &[Rule], n: usize, p: PExponent) -> ConstantResult {
    let rule = rules
        .iter()
        .find(|r| (r.applies)(n, p))
        .expect("rule tables end in a catch-all");
    let value = match rule.formula {
        Formula::OneMinusInvN => Some(1.0 - 1.0 / n as f64),
        Formula::Star3 => finite(p).map(star3_variation_value),
        Formula::None => None,
    };
    ConstantResult::new(value, rule.status, rule.source, rule.note)
}

fn check_n(n: usize) -> Result<(), ConstantError> {
    if n < 2 {
        Err(ConstantError::TooFewVertices { n, min: 2 })
    } else {
        Ok(())
    }
}

/// `C_{K_n,p} = sup Var_p(M f) / Var_p(f)` on the complete graph.
pub fn sharp_variation_constant_complete(
    n: usize,
    p: PExponent,
) -> Result<ConstantResult, ConstantError> {
    check_n(n)?;
    Ok(lookup(COMPLETE_RULES, n, p))
}

/// `C_{S_n,p}` on the star graph. `S_2 = K_2`, so `n = 2` uses the
/// complete-graph table.
pub fn sharp_variation_constant_star(
    n: usize,
    p: PExponent,
) -> Result<ConstantResult, ConstantError> {
    check_n(n)?;
    if n == 2 {
        return Ok(lookup(COMPLETE_RULES, n, p));
    }
    Ok(lookup(STAR_RULES, n, p))
}

/// `(1 + 2^{p'})^{1/p'} / 3`, `p' = p / (p - 1)`. Only meaningful for `p > 1`.
pub fn star3_variation_value(p: f64) -> f64 {
    let conj = p / (p - 1.0);
    pow(1.0 + pow(2.0, conj), 1.0 / conj) / 3.0
}

/// Level-set sizes `{floor(n/3), ceil(n/3)}` clamped to `[1, n - 1]`.
fn complete_l2_candidates(n: usize) -> impl Iterator<Item = usize> {
    let lo = (n / 3).clamp(1, n - 1);
    let hi = n.div_ceil(3).clamp(1, n - 1);
    [lo, hi].into_iter()
}

/// `(1 - k/(2n) + sqrt(4kn - 3k^2)/(2n))^{1/2}`: the l^2 ratio of the best
/// two-level function with `k` high vertices on `K_n`.
pub fn complete_l2_level_value(n: usize, k: usize) -> f64 {
    let (n, k) = (n as f64, k as f64);
    sqrt(1.0 - k / (2.0 * n) + sqrt(4.0 * k * n - 3.0 * k * k) / (2.0 * n))
}

/// The level-set size maximizing [`complete_l2_level_value`]; the smaller one
/// on ties.
pub fn complete_l2_argmax_k(n: usize) -> Result<usize, ConstantError> {
    check_n(n)?;
    let mut best = (f64::NEG_INFINITY, 0);
    for k in complete_l2_candidates(n) {
        let v = complete_l2_level_value(n, k);
        if v > best.0 {
            best = (v, k);
        }
    }
    Ok(best.1)
}

/// `||M_{K_n}||_2`.
pub fn l2_norm_complete(n: usize) -> Result<ConstantResult, ConstantError> {
    let k = complete_l2_argmax_k(n)?;
    Ok(ConstantResult::new(
        Some(complete_l2_level_value(n, k)),
        ProofStatus::Proved,
        "complete graph l^2 norm: max over k in {floor(n/3), ceil(n/3)}",
        if n.is_multiple_of(3) {
            "equals (4/3)^{1/2} whenever 3 | n"
        } else {
            ""
        },
    ))
}

/// `(1 + (n-4)/8 + sqrt(n^2 + 8n)/8)^{1/2}`.
pub fn star_l2_value(n: usize) -> f64 {
    let n = n as f64;
    sqrt(1.0 + (n - 4.0) / 8.0 + sqrt(n * n + 8.0 * n) / 8.0)
}

/// `||M_{S_n}||_2`. Proved for `n >= 4`; at `n = 2` the formula reproduces
/// the known `K_2` value; `n = 3` is open.
pub fn l2_norm_star(n: usize) -> Result<ConstantResult, ConstantError> {
    check_n(n)?;
    Ok(match n {
        2 => ConstantResult::new(
            Some(star_l2_value(2)),
            ProofStatus::Proved,
            "known K_2 value (3 + 5^{1/2})^{1/2}/2, which the star formula reproduces",
            "",
        ),
        3 => ConstantResult::unknown("star l^2 formula is established only for n >= 4"),
        _ => ConstantResult::new(
            Some(star_l2_value(n)),
            ProofStatus::Proved,
            "star graph l^2 norm, n >= 4",
            "",
        ),
    })
}

/// Closed form for `(family, n, target, p)` under `op`, if one is tabulated.
/// Only the centered classical operator has tabulated constants.
pub fn closed_form(
    family: Family,
    n: usize,
    target: Target,
    p: PExponent,
    op: MaximalOperator,
) -> Result<ConstantResult, ConstantError> {
    check_n(n)?;
    if op != MaximalOperator::CLASSICAL {
        return Ok(ConstantResult::unknown(
            "constants are tabulated for the centered classical operator only",
        ));
    }
    let l2 = p == PExponent::Finite(2.0);
    match (family, target) {
        (Family::Complete, Target::VariationRatio) => sharp_variation_constant_complete(n, p),
        (Family::Star, Target::VariationRatio) => sharp_variation_constant_star(n, p),
        (Family::Complete, Target::NormRatio) if l2 => l2_norm_complete(n),
        (Family::Star, Target::NormRatio) if l2 => l2_norm_star(n),
        (Family::Complete | Family::Star, Target::NormRatio) => Ok(ConstantResult::unknown(
            "l^p norms are tabulated for p = 2 only",
        )),
        _ => Ok(ConstantResult::unknown("no closed form for this family")),
    }
}

/// `C(n, p, q)` with `Var_q(M_alpha f) <= C Var_p(f)` on any graph with `n`
/// vertices: `(n(n-1)/2)^{1/q} n^alpha (n-1)^{max(1-1/p, 0)}`.
pub fn boundedness_constant(
    n: usize,
    p: PExponent,
    q: PExponent,
    alpha: f64,
) -> Result<f64, ConstantError> {
    check_n(n)?;
    if !(0.0..1.0).contains(&alpha) {
        return Err(ConstantError::Alpha(alpha));
    }
    let nf = n as f64;
    let edges = match q {
        PExponent::Finite(q) => pow(nf * (nf - 1.0) / 2.0, 1.0 / q),
        PExponent::Infinity => 1.0,
    };
    Ok(edges * pow(nf, alpha) * pow(nf - 1.0, p.holder_exponent()))
}

/// Bound for `||M_alpha f||_{BV_p} <= K ||f||_{BV_p}` where
/// `||f||_{BV_p} = Var_p f + |f(anchor)|` on a connected graph:
/// `K = C(n, p, p) + n^{alpha + max(1-1/p, 0)}`.
pub fn bv_boundedness_constant(n: usize, p: PExponent, alpha: f64) -> Result<f64, ConstantError> {
    let c = boundedness_constant(n, p, p, alpha)?;
    Ok(c + pow(n as f64, alpha + p.holder_exponent()))
}

/// Multiplier `L` in `Var_q(M f - M g) <= L (Var_p(f - g) + min_x |f - g|(x))`
/// on a connected graph with `n` vertices:
/// `L = (n(n-1)/2)^{1/q} 2n n^{max(1-1/p,0)}`.
pub fn continuity_modulus(n: usize, p: PExponent, q: PExponent) -> Result<f64, ConstantError> {
    check_n(n)?;
    let nf = n as f64;
    let edges = match q {
        PExponent::Finite(q) => pow(nf * (nf - 1.0) / 2.0, 1.0 / q),
        PExponent::Infinity => 1.0,
    };
    Ok(edges * 2.0 * nf * pow(nf, p.holder_exponent()))
}

/// Indicator of `v`; extremal for `C_{K_n,p}` (and for `C_{S_n,p}` at a leaf
/// wherever that constant is `1 - 1/n`).
pub fn extremizer_delta(g: &Graph, v: Vertex) -> VertexFunction {
    VertexFunction::delta(g.n(), v)
}

/// `(3, 3 + 2^{1/(p-1)}, 2)` on `S_3`, attaining [`star3_variation_value`].
pub fn extremizer_star_variation(p: f64) -> Result<VertexFunction, ConstantError> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(ConstantError::Exponent(p));
    }
    let values = vec![3.0, 3.0 + pow(2.0, 1.0 / (p - 1.0)), 2.0];
    Ok(VertexFunction::new(values).expect("finite for finite p > 1"))
}

/// `(n, 2n - 1, n - 1, ..., n - 1)` on `S_n`: a `p = 2` witness with ratio
/// `sqrt((n-1)^2 + n - 2) / n > 1 - 1/n`.
pub fn star_two_level_witness(n: usize) -> Result<VertexFunction, ConstantError> {
    if n < 3 {
        return Err(ConstantError::TooFewVertices { n, min: 3 });
    }
    let nf = n as f64;
    let mut values = vec![nf - 1.0; n];
    values[0] = nf;
    values[1] = 2.0 * nf - 1.0;
    Ok(VertexFunction::new(values).expect("finite"))
}

/// Height `gamma = 2(n-k)^2 / (sqrt(4kn^3 - 3n^2k^2) - (3nk - 2k^2))` of the
/// `K_n` l^2 extremizer with `k` high vertices.
pub fn complete_l2_gamma(n: usize, k: usize) -> f64 {
    let (n, k) = (n as f64, k as f64);
    2.0 * (n - k) * (n - k)
        / (sqrt(4.0 * k * n * n * n - 3.0 * n * n * k * k) - (3.0 * n * k - 2.0 * k * k))
}

/// `gamma` on vertices `0..k`, 1 elsewhere.
pub fn extremizer_complete_l2(n: usize, k: usize) -> Result<VertexFunction, ConstantError> {
    check_n(n)?;
    if k < 1 || k > n - 1 {
        return Err(ConstantError::LevelSize { k, max: n - 1 });
    }
    let gamma = complete_l2_gamma(n, k);
    let values = (0..n).map(|i| if i < k { gamma } else { 1.0 }).collect();
    Ok(VertexFunction::new(values).expect("finite"))
}

/// `gamma = 2(n-1) / (sqrt(n^2 + 8n) - (n + 2))`.
pub fn star_l2_gamma(n: usize) -> f64 {
    let n = n as f64;
    2.0 * (n - 1.0) / (sqrt(n * n + 8.0 * n) - (n + 2.0))
}

/// `gamma` at the center, 1 on the leaves; attains `||M_{S_n}||_2`, `n >= 4`.
pub fn extremizer_star_l2(n: usize) -> Result<VertexFunction, ConstantError> {
    if n < 4 {
        return Err(ConstantError::TooFewVertices { n, min: 4 });
    }
    let mut values = vec![1.0; n];
    values[0] = star_l2_gamma(n);
    Ok(VertexFunction::new(values).expect("finite"))
}
