//! Centered and uncentered (fractional) Hardy–Littlewood maximal operators.
//!
//! For a ball `B`, the fractional average is `|B|^(alpha - 1) * sum_{m in B} |f(m)|`.
//! The centered operator maximizes it over `B(e, r)`, `r = 0..=ecc(e)`; the
//! uncentered one over every ball `B(v, r)` that contains `e`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Index;

use crate::error::ValueError;
use crate::exact_sum::ExactSum;
use crate::graph::{Graph, Vertex};

/// Real values on the vertices of a graph. Every entry is finite.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawFunction"))]
pub struct VertexFunction {
    values: Vec<f64>,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawFunction {
    values: Vec<f64>,
}

#[cfg(feature = "serde")]
impl TryFrom<RawFunction> for VertexFunction {
    type Error = ValueError;

    fn try_from(raw: RawFunction) -> Result<Self, ValueError> {
        VertexFunction::new(raw.values)
    }
}

impl VertexFunction {
    pub fn new(values: Vec<f64>) -> Result<Self, ValueError> {
        if let Some((vertex, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(ValueError::NonFinite { vertex, value });
        }
        Ok(VertexFunction { values })
    }

    /// Constant function.
    pub fn constant(n: usize, c: f64) -> Self {
        assert!(c.is_finite());
        VertexFunction { values: vec![c; n] }
    }

    /// Indicator of a single vertex.
    pub fn delta(n: usize, v: Vertex) -> Self {
        assert!(v < n, "vertex {v} out of range for n = {n}");
        let mut values = vec![0.0; n];
        values[v] = 1.0;
        VertexFunction { values }
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check_on(&self, g: &Graph) -> Result<(), ValueError> {
        if self.len() != g.n() {
            Err(ValueError::LengthMismatch {
                expected: g.n(),
                got: self.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    pub fn scale(&self, lambda: f64) -> Self {
        self.map(|x| lambda * x)
    }

    pub fn shift(&self, c: f64) -> Self {
        self.map(|x| x + c)
    }

    /// Pointwise difference `self - other`.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        VertexFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    fn map(&self, op: impl Fn(f64) -> f64) -> Self {
        let values: Vec<f64> = self.values.iter().map(|&x| op(x)).collect();
        debug_assert!(values.iter().all(|v| v.is_finite()));
        VertexFunction { values }
    }
}

impl Index<Vertex> for VertexFunction {
    type Output = f64;

    #[inline]
    fn index(&self, v: Vertex) -> &f64 {
        &self.values[v]
    }
}

/// Fractional order `alpha` in `[0, 1]`; `alpha = 0` is the classical operator.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Alpha(f64);

impl Alpha {
    pub const ZERO: Alpha = Alpha(0.0);

    pub fn new(alpha: f64) -> Result<Self, ValueError> {
        if (0.0..=1.0).contains(&alpha) {
            Ok(Alpha(alpha))
        } else {
            Err(ValueError::Alpha(alpha))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_classical(self) -> bool {
        self.0 == 0.0
    }

    /// `|B|^(alpha - 1) * sum`. Classical averages divide directly so that
    /// constants map to themselves exactly.
    #[inline]
    fn weigh(self, sum: f64, size: usize) -> f64 {
        if size == 1 || self.0 == 1.0 {
            sum
        } else if self.0 == 0.0 {
            sum / size as f64
        } else {
            sum * libm::exp((self.0 - 1.0) * libm::log(size as f64))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Centering {
    #[default]
    Centered,
    Uncentered,
}

/// A maximal operator variant: fractional order plus centering.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MaximalOperator {
    pub alpha: Alpha,
    pub centering: Centering,
}

impl MaximalOperator {
    /// Centered classical operator `M_G`.
    pub const CLASSICAL: MaximalOperator = MaximalOperator {
        alpha: Alpha::ZERO,
        centering: Centering::Centered,
    };

    pub fn centered(alpha: Alpha) -> Self {
        MaximalOperator {
            alpha,
            centering: Centering::Centered,
        }
    }

    pub fn uncentered(alpha: Alpha) -> Self {
        MaximalOperator {
            alpha,
            centering: Centering::Uncentered,
        }
    }

    pub fn apply(&self, g: &Graph, f: &VertexFunction) -> Result<VertexFunction, ValueError> {
        match self.centering {
            Centering::Centered => centered_maximal(g, f, self.alpha),
            Centering::Uncentered => uncentered_maximal(g, f, self.alpha),
        }
    }

    /// `apply` into a caller-provided buffer; no validation. Used by the
    /// search inner loop.
    pub(crate) fn apply_into(&self, g: &Graph, f: &[f64], out: &mut [f64]) {
        match self.centering {
            Centering::Centered => centered_into(g, f, self.alpha, out),
            Centering::Uncentered => uncentered_into(g, f, self.alpha, out),
        }
    }
}

/// `M_{alpha,G} f(e) = max_r |B(e,r)|^(alpha-1) sum_{B(e,r)} |f|`.
pub fn centered_maximal(
    g: &Graph,
    f: &VertexFunction,
    alpha: Alpha,
) -> Result<VertexFunction, ValueError> {
    f.check_on(g)?;
    let mut out = vec![0.0; g.n()];
    centered_into(g, f.values(), alpha, &mut out);
    Ok(VertexFunction { values: out })
}

/// Smallest radius attaining the centered maximum at each vertex.
pub fn centered_maximal_radii(
    g: &Graph,
    f: &VertexFunction,
    alpha: Alpha,
) -> Result<Vec<usize>, ValueError> {
    f.check_on(g)?;
    Ok((0..g.n())
        .map(|e| {
            let mut best = f64::NEG_INFINITY;
            let mut arg = 0;
            scan_balls(g, f.values(), alpha, e, |r, _, value| {
                if value > best {
                    best = value;
                    arg = r;
                }
            });
            arg
        })
        .collect())
}

/// `max` over all balls `B(v, r)` containing `e`.
pub fn uncentered_maximal(
    g: &Graph,
    f: &VertexFunction,
    alpha: Alpha,
) -> Result<VertexFunction, ValueError> {
    f.check_on(g)?;
    let mut out = vec![0.0; g.n()];
    uncentered_into(g, f.values(), alpha, &mut out);
    Ok(VertexFunction { values: out })
}

// Calls `visit(r, |B(e,r)|, weighted average)` for r = 0..=ecc(e). Ball sums
// are accumulated shell by shell and rounded exactly, so equal balls give
// bit-identical averages whatever the center.
#[inline]
fn scan_balls(
    g: &Graph,
    f: &[f64],
    alpha: Alpha,
    e: Vertex,
    mut visit: impl FnMut(usize, usize, f64),
) {
    let order = g.vertices_by_distance(e);
    let mut sum = ExactSum::new();
    let mut idx = 0;
    for r in 0..=g.eccentricity(e) {
        let size = g.ball_size(e, r);
        while idx < size {
            sum.add(f[order[idx]].abs());
            idx += 1;
        }
        visit(r, size, alpha.weigh(sum.value(), size));
    }
}

fn centered_into(g: &Graph, f: &[f64], alpha: Alpha, out: &mut [f64]) {
    for (e, slot) in out.iter_mut().enumerate() {
        let mut best = f64::NEG_INFINITY;
        scan_balls(g, f, alpha, e, |_, _, value| best = best.max(value));
        *slot = best;
    }
}

fn uncentered_into(g: &Graph, f: &[f64], alpha: Alpha, out: &mut [f64]) {
    out.fill(f64::NEG_INFINITY);
    for v in 0..g.n() {
        let order = g.vertices_by_distance(v);
        scan_balls(g, f, alpha, v, |_, size, value| {
            for &m in &order[..size] {
                if value > out[m] {
                    out[m] = value;
                }
            }
        });
    }
}

/// The constant-shift pair on `S_n` showing that `Var_1 (f - f_j) = 0` does
/// not force `Var_1 (M f - M f_j) -> 0`: `f = (2, 1, ..., 1)` and `f - 3`.
pub fn shift_counterexample(n: usize) -> (VertexFunction, VertexFunction) {
    assert!(n >= 2, "shift counterexample needs n >= 2");
    let mut values = vec![1.0; n];
    values[0] = 2.0;
    let f = VertexFunction { values };
    let shifted = f.shift(-3.0);
    (f, shifted)
}
