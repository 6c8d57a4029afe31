//! Lower bounds for the ratio suprema by derivative-free search.
//!
//! [`estimate_ratio`] runs multi-start coordinate ascent over nonnegative
//! functions. Since `M f = M |f|` and `Var_p |f| <= Var_p f`, restricting to
//! `f >= 0` loses nothing. [`two_level_scan`] searches the two-valued
//! functions that carry the known extremizers on `K_n` and `S_n`.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::constants::{closed_form, ConstantResult, Target};
use crate::error::SearchError;
use crate::graph::{Family, Graph};
use crate::maxop::{MaximalOperator, VertexFunction};
use crate::variation::{
    difference_variation, norm_of, norm_ratio, variation_of, variation_ratio, PExponent,
    RatioResult,
};

/// Attempts at drawing a non-degenerate start before giving up.
const MAX_DRAWS: usize = 64;

pub const DEFAULT_SEED: u64 = 0x6d61_786f_7073;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchConfig {
    pub restarts: usize,
    /// Sweep budget per restart.
    pub max_iters: usize,
    pub seed: u64,
    pub step_init: f64,
    pub step_min: f64,
    pub target: Target,
    pub p: PExponent,
    pub operator: MaximalOperator,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            restarts: 64,
            max_iters: 2000,
            seed: DEFAULT_SEED,
            step_init: 0.25,
            step_min: 1e-7,
            target: Target::VariationRatio,
            p: PExponent::Finite(2.0),
            operator: MaximalOperator::CLASSICAL,
        }
    }
}

impl SearchConfig {
    pub fn new(target: Target, p: PExponent) -> Self {
        SearchConfig {
            target,
            p,
            ..SearchConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.restarts == 0 {
            return Err(SearchError::Config("restarts must be at least 1"));
        }
        if !(self.step_init.is_finite() && self.step_init > 0.0) {
            return Err(SearchError::Config("step_init must be positive"));
        }
        if !(self.step_min > 0.0 && self.step_min < self.step_init) {
            return Err(SearchError::Config("need 0 < step_min < step_init"));
        }
        Ok(())
    }

    /// Pin the minimum to 0: for the classical operator and `f >= 0`,
    /// `M (f + c) = M f + c`, so the variation ratio is shift invariant.
    fn pins_minimum(&self) -> bool {
        self.target == Target::VariationRatio && self.operator.alpha.is_classical()
    }
}

/// Ratio objective with a scratch buffer for `M f`.
struct Objective<'g> {
    g: &'g Graph,
    target: Target,
    p: PExponent,
    op: MaximalOperator,
    scratch: Vec<f64>,
    evaluations: usize,
}

impl<'g> Objective<'g> {
    fn new(g: &'g Graph, target: Target, p: PExponent, op: MaximalOperator) -> Self {
        Objective {
            g,
            target,
            p,
            op,
            scratch: vec![0.0; g.n()],
            evaluations: 0,
        }
    }

    fn denominator(&self, f: &[f64]) -> f64 {
        match self.target {
            Target::VariationRatio => variation_of(self.g, f, self.p),
            Target::NormRatio => norm_of(f, self.p),
        }
    }

    /// `None` when the denominator vanishes.
    fn eval(&mut self, f: &[f64]) -> Option<f64> {
        self.evaluations += 1;
        let den = self.denominator(f);
        if den == 0.0 {
            return None;
        }
        self.op.apply_into(self.g, f, &mut self.scratch);
        let num = match self.target {
            Target::VariationRatio => variation_of(self.g, &self.scratch, self.p),
            Target::NormRatio => norm_of(&self.scratch, self.p),
        };
        Some(num / den)
    }

    /// Scales `f` so the denominator is 1.
    fn normalize(&self, f: &mut [f64]) {
        let den = self.denominator(f);
        if den > 0.0 && den.is_finite() {
            f.iter_mut().for_each(|x| *x /= den);
        }
    }
}

fn measure(
    g: &Graph,
    f: &VertexFunction,
    target: Target,
    p: PExponent,
    op: MaximalOperator,
) -> Result<RatioResult, SearchError> {
    Ok(match target {
        Target::VariationRatio => variation_ratio(g, f, p, op)?,
        Target::NormRatio => norm_ratio(g, f, p, op)?,
    })
}

/// Result of one restart.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RestartOutcome {
    pub index: usize,
    pub best_ratio: f64,
    pub best_f: Vec<f64>,
    pub sweeps: usize,
    pub evaluations: usize,
    /// Starting points rejected as degenerate.
    pub redraws: usize,
}

/// The random stream of restart `index`: ChaCha20 keyed by the seed, with the
/// restart index as stream id. Serial and parallel runs see identical draws.
pub fn restart_rng(seed: u64, index: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Runs restart `index` of `cfg` on `g`.
///
/// Draws `f` uniform on `[0, 1]^n`, normalizes it (variation: subtract the
/// minimum and scale to `Var_p = 1`; norm: scale to `||f||_p = 1`), then
/// sweeps the coordinates trying `f_i +- step` (projected to `>= 0`) and
/// keeping improvements. A sweep without step improvements then tries
/// copying another coordinate's value into each coordinate; if that also
/// fails, the step halves. The
/// restart ends when `step < step_min` or after `max_iters` sweeps.
pub fn run_restart(
    g: &Graph,
    cfg: &SearchConfig,
    index: usize,
) -> Result<RestartOutcome, SearchError> {
    cfg.validate()?;
    let n = g.n();
    let mut rng = restart_rng(cfg.seed, index);
    let mut obj = Objective::new(g, cfg.target, cfg.p, cfg.operator);

    let mut f = vec![0.0; n];
    let mut redraws = 0;
    let mut best = loop {
        if redraws == MAX_DRAWS {
            return Err(SearchError::Degenerate(MAX_DRAWS));
        }
        f.iter_mut().for_each(|x| *x = rng.random::<f64>());
        if cfg.target == Target::VariationRatio {
            let min = f.iter().copied().fold(f64::INFINITY, f64::min);
            f.iter_mut().for_each(|x| *x -= min);
        }
        obj.normalize(&mut f);
        match obj.eval(&f) {
            Some(r) => break r,
            None => redraws += 1,
        }
    };

    let pinned = if cfg.pins_minimum() {
        f.iter().position(|&x| x == 0.0)
    } else {
        None
    };

    let mut step = cfg.step_init;
    let mut sweeps = 0;
    while sweeps < cfg.max_iters && step >= cfg.step_min {
        let mut improved = false;
        for i in 0..n {
            if Some(i) == pinned {
                continue;
            }
            let old = f[i];
            for dir in [1.0, -1.0] {
                let cand = (old + dir * step).max(0.0);
                if cand == old {
                    continue;
                }
                f[i] = cand;
                match obj.eval(&f) {
                    Some(r) if r > best => {
                        best = r;
                        improved = true;
                        break;
                    }
                    _ => f[i] = old,
                }
            }
        }
        if !improved {
            improved = level_copy(&mut obj, &mut f, pinned, &mut best);
        }
        sweeps += 1;
        if improved {
            obj.normalize(&mut f);
            if let Some(r) = obj.eval(&f) {
                best = r;
            }
        } else {
            step *= 0.5;
        }
    }

    Ok(RestartOutcome {
        index,
        best_ratio: best,
        best_f: f,
        sweeps,
        evaluations: obj.evaluations,
        redraws,
    })
}

/// Tries setting each free coordinate to the value held by another one.
/// Step moves cannot carry a vertex across the gap between two levels of a
/// level-set optimum; these jumps can.
fn level_copy(
    obj: &mut Objective<'_>,
    f: &mut [f64],
    pinned: Option<usize>,
    best: &mut f64,
) -> bool {
    let mut improved = false;
    for i in 0..f.len() {
        if Some(i) == pinned {
            continue;
        }
        for j in 0..f.len() {
            let cand = f[j];
            if j == i || cand == f[i] {
                continue;
            }
            let keep = f[i];
            f[i] = cand;
            match obj.eval(f) {
                Some(r) if r > *best => {
                    *best = r;
                    improved = true;
                }
                _ => f[i] = keep,
            }
        }
    }
    improved
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchReport {
    pub config: SearchConfig,
    /// Ratio of `best_f`, recomputed through the public ratio functions.
    pub best_ratio: f64,
    pub best_f: VertexFunction,
    pub best_restart: usize,
    pub per_restart_best: Vec<f64>,
    pub iterations_used: Vec<usize>,
    pub evaluations: usize,
    pub closed_form: Option<ConstantResult>,
    /// `closed_form.value - best_ratio`.
    pub gap: Option<f64>,
}

impl SearchReport {
    /// Attaches a closed form and recomputes the gap.
    pub fn with_closed_form(mut self, c: Option<ConstantResult>) -> Self {
        self.gap = c
            .as_ref()
            .and_then(|c| c.value)
            .map(|v| v - self.best_ratio);
        self.closed_form = c;
        self
    }
}

fn family_closed_form(
    g: &Graph,
    target: Target,
    p: PExponent,
    op: MaximalOperator,
) -> Option<ConstantResult> {
    let family = g.family()?;
    closed_form(family, g.n(), target, p, op).ok()
}

/// Folds restart outcomes (any order) into a report. Ties go to the lowest
/// restart index.
pub fn merge_restarts(
    g: &Graph,
    cfg: &SearchConfig,
    mut outcomes: Vec<RestartOutcome>,
) -> Result<SearchReport, SearchError> {
    if outcomes.is_empty() {
        return Err(SearchError::Config("no restart outcomes to merge"));
    }
    outcomes.sort_by_key(|o| o.index);
    let mut winner = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.best_ratio > outcomes[winner].best_ratio {
            winner = i;
        }
    }
    let best_f = VertexFunction::new(outcomes[winner].best_f.clone())
        .map_err(crate::error::RatioError::from)?;
    let measured = measure(g, &best_f, cfg.target, cfg.p, cfg.operator)?;
    let report = SearchReport {
        config: *cfg,
        best_ratio: measured.ratio,
        best_f,
        best_restart: outcomes[winner].index,
        per_restart_best: outcomes.iter().map(|o| o.best_ratio).collect(),
        iterations_used: outcomes.iter().map(|o| o.sweeps).collect(),
        evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
        closed_form: None,
        gap: None,
    };
    Ok(report.with_closed_form(family_closed_form(g, cfg.target, cfg.p, cfg.operator)))
}

fn check_searchable(g: &Graph, cfg: &SearchConfig) -> Result<(), SearchError> {
    cfg.validate()?;
    if cfg.target == Target::VariationRatio && g.edges().is_empty() {
        return Err(SearchError::NoEdges);
    }
    Ok(())
}

/// Multi-start coordinate ascent, restarts run serially in index order.
pub fn estimate_ratio(g: &Graph, cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    check_searchable(g, cfg)?;
    let outcomes = (0..cfg.restarts)
        .map(|i| run_restart(g, cfg, i))
        .collect::<Result<Vec<_>, _>>()?;
    merge_restarts(g, cfg, outcomes)
}

/// Where the high level of a two-level function sits on `S_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Placement {
    /// Vertices `0..k` of `K_n`.
    Prefix,
    /// Center plus `k - 1` leaves.
    CenterAndLeaves,
    /// `k` leaves.
    LeavesOnly,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TwoLevelReport {
    pub report: SearchReport,
    /// Size of the level set carrying `gamma`.
    pub level_size: usize,
    pub placement: Placement,
    /// Value on the level set; the rest of the graph is 1.
    pub gamma: f64,
}

const LOG_GAMMA_RANGE: f64 = 9.0;
const GRID_POINTS: usize = 181;
const GOLDEN_ITERS: usize = 80;

fn two_level_values(n: usize, k: usize, placement: Placement, gamma: f64) -> Vec<f64> {
    let mut v = vec![1.0; n];
    match placement {
        Placement::Prefix | Placement::CenterAndLeaves => v[..k].fill(gamma),
        Placement::LeavesOnly => v[1..=k].fill(gamma),
    }
    v
}

/// Maximizes `t -> ratio(e^t)` on `[-R, R]`: grid, then golden section on
/// the bracket around the best grid point. Returns `(t, ratio)`.
fn maximize_log_gamma(mut objective: impl FnMut(f64) -> f64) -> (f64, f64) {
    let h = 2.0 * LOG_GAMMA_RANGE / (GRID_POINTS - 1) as f64;
    let grid = |i: usize| -LOG_GAMMA_RANGE + h * i as f64;
    let mut best = (0.0, f64::NEG_INFINITY);
    let mut best_i = 0;
    for i in 0..GRID_POINTS {
        let t = grid(i);
        let v = objective(t);
        if v > best.1 {
            best = (t, v);
            best_i = i;
        }
    }
    let (mut a, mut b) = (
        grid(best_i.saturating_sub(1)),
        grid((best_i + 1).min(GRID_POINTS - 1)),
    );
    let inv_phi = (libm::sqrt(5.0) - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (objective(c), objective(d));
    for _ in 0..GOLDEN_ITERS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    for (t, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (t, v);
        }
    }
    best
}

/// Best two-valued function (`gamma` on a level set of size `k`, 1 elsewhere)
/// over every `k in [1, n-1]` and, on stars, both placements relative to the
/// center. `gamma` ranges over `[e^-9, e^9]`.
pub fn two_level_scan(g: &Graph, cfg: &SearchConfig) -> Result<TwoLevelReport, SearchError> {
    check_searchable(g, cfg)?;
    let n = g.n();
    let family = g.family();
    let placements: &[Placement] = match family {
        Some(Family::Complete) => &[Placement::Prefix],
        Some(Family::Star) => &[Placement::CenterAndLeaves, Placement::LeavesOnly],
        _ => return Err(SearchError::NotAFamilyGraph),
    };
    if n < 2 {
        return Err(SearchError::NotAFamilyGraph);
    }
    let mut obj = Objective::new(g, cfg.target, cfg.p, cfg.operator);
    let mut best: Option<(f64, usize, Placement, f64)> = None;
    let mut per_candidate = Vec::new();
    let mut evals = Vec::new();
    for k in 1..n {
        for &placement in placements {
            let before = obj.evaluations;
            let (t, r) = maximize_log_gamma(|t| {
                let f = two_level_values(n, k, placement, libm::exp(t));
                obj.eval(&f).unwrap_or(f64::NEG_INFINITY)
            });
            per_candidate.push(r);
            evals.push(obj.evaluations - before);
            if best.is_none_or(|b| r > b.0) {
                best = Some((r, k, placement, libm::exp(t)));
            }
        }
    }
    let (_, k, placement, gamma) = best.expect("n >= 2 gives a candidate");
    let best_f = VertexFunction::new(two_level_values(n, k, placement, gamma))
        .map_err(crate::error::RatioError::from)?;
    let measured = measure(g, &best_f, cfg.target, cfg.p, cfg.operator)?;
    let report = SearchReport {
        config: *cfg,
        best_ratio: measured.ratio,
        best_f,
        best_restart: 0,
        per_restart_best: per_candidate,
        evaluations: evals.iter().sum(),
        iterations_used: evals,
        closed_form: None,
        gap: None,
    }
    .with_closed_form(family_closed_form(g, cfg.target, cfg.p, cfg.operator));
    Ok(TwoLevelReport {
        report,
        level_size: k,
        placement,
        gamma,
    })
}

/// Tolerance above a reference value before a scan row is flagged.
pub const SCAN_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ScanFlag {
    /// Estimate at or below every reference value.
    Consistent,
    /// Estimate above a proved constant: a bug in this code.
    ExceedsProved,
    /// Estimate above `1 - 1/n` where no proved constant forbids it. For a
    /// conjectured entry this is a candidate counterexample.
    ExceedsConjecture,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConjectureRow {
    pub family: Family,
    pub n: usize,
    pub p: PExponent,
    pub search_best: f64,
    pub two_level_best: f64,
    /// `max(search_best, two_level_best)`.
    pub estimate: f64,
    /// `1 - 1/n`.
    pub conjectured_value: f64,
    pub closed_form: ConstantResult,
    pub flag: ScanFlag,
    /// Function achieving `estimate`.
    pub witness: VertexFunction,
}

/// Runs [`estimate_ratio`] and [`two_level_scan`] for every `(n, p)` on the
/// family graph with the variation target and compares against `1 - 1/n`
/// and the tabulated constant. Flags are reported, never asserted.
pub fn conjecture_scan(
    family: Family,
    ns: &[usize],
    ps: &[PExponent],
    cfg: &SearchConfig,
) -> Result<Vec<ConjectureRow>, SearchError> {
    if ns.is_empty() || ps.is_empty() {
        return Err(SearchError::Config("scan ranges must be nonempty"));
    }
    if !matches!(family, Family::Complete | Family::Star) {
        return Err(SearchError::NotAFamilyGraph);
    }
    let mut rows = Vec::with_capacity(ns.len() * ps.len());
    for &n in ns {
        let g = family
            .build(n)
            .map_err(|_| SearchError::Config("invalid n for family"))?;
        for &p in ps {
            let cfg = SearchConfig {
                target: Target::VariationRatio,
                p,
                ..*cfg
            };
            rows.push(scan_row(&g, family, &cfg)?);
        }
    }
    Ok(rows)
}

fn scan_row(g: &Graph, family: Family, cfg: &SearchConfig) -> Result<ConjectureRow, SearchError> {
    let n = g.n();
    let search = estimate_ratio(g, cfg)?;
    let two = two_level_scan(g, cfg)?;
    let (estimate, witness) = if two.report.best_ratio > search.best_ratio {
        (two.report.best_ratio, two.report.best_f.clone())
    } else {
        (search.best_ratio, search.best_f.clone())
    };
    let closed = closed_form(family, n, Target::VariationRatio, cfg.p, cfg.operator)
        .unwrap_or_else(|_| ConstantResult::unknown("no closed form"));
    let conjectured_value = 1.0 - 1.0 / n as f64;
    let flag = match closed.proved_value() {
        Some(v) if estimate > v + SCAN_TOLERANCE => ScanFlag::ExceedsProved,
        _ if estimate > conjectured_value + SCAN_TOLERANCE => ScanFlag::ExceedsConjecture,
        _ => ScanFlag::Consistent,
    };
    Ok(ConjectureRow {
        family,
        n,
        p: cfg.p,
        search_best: search.best_ratio,
        two_level_best: two.report.best_ratio,
        estimate,
        conjectured_value,
        closed_form: closed,
        flag,
        witness,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbeRow {
    pub scale: f64,
    /// `Var_q(M f - M f_eps)`.
    pub output_variation: f64,
    /// `Var_p(f - f_eps)`.
    pub input_variation: f64,
    /// Upper bound from the continuity estimate; `None` on disconnected graphs.
    pub bound: Option<f64>,
}

/// Perturbs `f` along one seeded random direction `d` (entries uniform on
/// `[-1, 1]`, smallest-magnitude entry set to 0 so that `min |f - f_eps| = 0`)
/// and reports `Var_q(M f - M (f + eps d))` for each scale.
pub fn continuity_probe(
    g: &Graph,
    f: &VertexFunction,
    scales: &[f64],
    p: PExponent,
    q: PExponent,
    op: MaximalOperator,
    seed: u64,
) -> Result<Vec<ProbeRow>, SearchError> {
    f.check_on(g).map_err(crate::error::RatioError::from)?;
    let n = g.n();
    let mut rng = restart_rng(seed, 0);
    let mut d: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    if let Some(i) = (0..n).min_by(|&a, &b| d[a].abs().total_cmp(&d[b].abs())) {
        d[i] = 0.0;
    }
    let modulus = if g.is_connected() && n >= 2 {
        crate::constants::continuity_modulus(n, p, q).ok()
    } else {
        None
    };
    let mut rows = Vec::with_capacity(scales.len());
    for &eps in scales {
        let perturbed = VertexFunction::new(
            f.values()
                .iter()
                .zip(&d)
                .map(|(x, di)| x + eps * di)
                .collect(),
        )
        .map_err(crate::error::RatioError::from)?;
        let output_variation = difference_variation(g, f, &perturbed, q, op)
            .map_err(crate::error::RatioError::from)?;
        let delta = f.sub(&perturbed);
        let input_variation = variation_of(g, delta.values(), p);
        let min_gap = delta
            .values()
            .iter()
            .fold(f64::INFINITY, |m, x| m.min(x.abs()));
        rows.push(ProbeRow {
            scale: eps,
            output_variation,
            input_variation,
            bound: modulus.map(|l| l * (input_variation + min_gap)),
        });
    }
    Ok(rows)
}

/// Whether the output variation is nonincreasing as the scale shrinks.
pub fn probe_is_monotone(rows: &[ProbeRow]) -> bool {
    let mut sorted: Vec<&ProbeRow> = rows.iter().collect();
    sorted.sort_by(|a, b| b.scale.total_cmp(&a.scale));
    sorted
        .windows(2)
        .all(|w| w[1].output_variation <= w[0].output_variation)
}
