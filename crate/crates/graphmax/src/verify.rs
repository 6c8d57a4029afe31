//! The `verify` suites: every tabulated constant, extremizer and bound is
//! recomputed from scratch and compared.

use graphmax_core::constants::{
    boundedness_constant, bv_boundedness_constant, closed_form, complete_l2_argmax_k,
    extremizer_complete_l2, extremizer_delta, extremizer_star_l2, extremizer_star_variation,
    l2_norm_complete, l2_norm_star, star3_variation_value, star_l2_value,
};
use graphmax_core::search::{
    conjecture_scan, continuity_probe, probe_is_monotone, restart_rng, ScanFlag,
};
use graphmax_core::variation::{bv_norm, difference_variation};
use graphmax_core::{
    norm_ratio, p_variation, shift_counterexample, two_level_scan, variation_ratio, Alpha, Family,
    Graph, MaximalOperator, PExponent, SearchConfig, Target, VertexFunction,
};
use rand::Rng;
use rand_chacha::ChaCha20Rng;

use crate::error::Result;
use crate::parallel::Runner;
use crate::report::{Entry, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Constants,
    Extremizers,
    Bounds,
    Continuity,
    All,
}

/// Tolerance for a search estimate against its closed form.
pub const SEARCH_TOL: f64 = 1e-6;
/// Allowed overshoot of a search estimate above a proved constant.
pub const PROVED_SLACK: f64 = 1e-9;
/// Random functions per `(n, p, q, alpha)` in the boundedness check.
pub const BOUND_SAMPLES: usize = 1000;
pub const PROBE_SCALES: [f64; 7] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 0.0];

// Stream ids for the seeded random draws, disjoint from search restarts.
const BOUNDS_STREAM: usize = 1 << 40;
const PROBE_STREAM: usize = 1 << 41;

fn pe(p: f64) -> PExponent {
    PExponent::new(p).expect("suite exponents are positive")
}

pub fn run(suite: Suite, seed: u64, runner: &Runner) -> Result<Report> {
    let mut report = Report::new(seed);
    let all = suite == Suite::All;
    if all || suite == Suite::Constants {
        constants(&mut report, seed, runner)?;
    }
    if all || suite == Suite::Extremizers {
        extremizers(&mut report)?;
    }
    if all || suite == Suite::Bounds {
        bounds(&mut report, seed)?;
    }
    if all || suite == Suite::Continuity {
        continuity(&mut report, seed)?;
    }
    Ok(report)
}

/// `(family, n, target, p)` searched by the constants suite.
pub fn search_cases() -> Vec<(Family, usize, Target, f64)> {
    use Family::{Complete, Star};
    use Target::{NormRatio, VariationRatio};
    let mut cases = Vec::new();
    for n in 3..=8 {
        for p in [1.5, 2.0, 3.0] {
            cases.push((Complete, n, VariationRatio, p));
        }
    }
    for p in [0.2, 0.5, 0.9] {
        cases.push((Complete, 4, VariationRatio, p));
    }
    for p in [1.5, 2.0, 4.0] {
        cases.push((Star, 3, VariationRatio, p));
    }
    for n in 4..=8 {
        for p in [0.5, 0.75, 1.0] {
            cases.push((Star, n, VariationRatio, p));
        }
    }
    for n in 2..=12 {
        cases.push((Complete, n, NormRatio, 2.0));
    }
    for n in 4..=12 {
        cases.push((Star, n, NormRatio, 2.0));
    }
    cases
}

fn constants(report: &mut Report, seed: u64, runner: &Runner) -> Result<()> {
    for (family, n, target, p) in search_cases() {
        let g = family.build(n)?;
        let p = pe(p);
        let cfg = SearchConfig {
            seed,
            ..SearchConfig::new(target, p)
        };
        let found = runner.estimate(&g, &cfg)?;
        let closed = closed_form(family, n, target, p, MaximalOperator::CLASSICAL)?;
        let name = format!("search/{}", target.name());
        match closed.value {
            Some(v) => {
                report.push(
                    Entry::check(&name, v, found.best_ratio, SEARCH_TOL)
                        .on(family.name(), n)
                        .at_p(p),
                );
                if closed.is_proved() {
                    report.push(
                        Entry::at_most(
                            format!("{name}/below-proved"),
                            found.best_ratio,
                            v,
                            PROVED_SLACK,
                        )
                        .on(family.name(), n)
                        .at_p(p),
                    );
                }
            }
            None => report.push(
                Entry::info(&name, found.best_ratio)
                    .on(family.name(), n)
                    .at_p(p),
            ),
        }
    }

    let four_thirds = (4.0f64 / 3.0).sqrt();
    for n in [3, 6, 9, 12] {
        let v = l2_norm_complete(n)?.value.unwrap_or(f64::NAN);
        report.push(
            Entry::check("l2/complete/multiple-of-three", four_thirds, v, 1e-12)
                .on("complete", n)
                .at_p(pe(2.0)),
        );
    }
    let k2 = (3.0 + 5.0f64.sqrt()).sqrt() / 2.0;
    let v = l2_norm_complete(2)?.value.unwrap_or(f64::NAN);
    report.push(
        Entry::check("l2/complete/two-vertices", k2, v, 1e-12)
            .on("complete", 2)
            .at_p(pe(2.0)),
    );
    let v = l2_norm_star(2)?.value.unwrap_or(f64::NAN);
    report.push(
        Entry::check("l2/star/two-vertices", k2, v, 1e-12)
            .on("star", 2)
            .at_p(pe(2.0)),
    );

    for p in [1.5, 2.0, 4.0] {
        let excess = star3_variation_value(p) - 2.0 / 3.0;
        report.push(
            Entry::info("variation/star3/excess-over-two-thirds", excess)
                .on("star", 3)
                .at_p(pe(p)),
        );
    }

    let cfg = SearchConfig {
        seed,
        ..SearchConfig::default()
    };
    let mut rows = conjecture_scan(
        Family::Complete,
        &[3, 4, 5, 6, 7, 8],
        &[pe(0.3), pe(0.5)],
        &cfg,
    )?;
    rows.extend(conjecture_scan(Family::Star, &[3], &[pe(2.0)], &cfg)?);
    for row in rows {
        let family = row.family.name();
        let entry = match row.closed_form.proved_value() {
            Some(v) => Entry::at_most("conjecture-scan/below-proved", row.estimate, v, 1e-7),
            None => {
                let e = Entry::info(
                    "conjecture-scan/excess-over-1-1/n",
                    row.estimate - row.conjectured_value,
                );
                if row.flag == ScanFlag::ExceedsConjecture {
                    e.with_witness(row.witness.values())
                } else {
                    e
                }
            }
        };
        report.push(entry.on(family, row.n).at_p(row.p));
    }
    Ok(())
}

fn extremizers(report: &mut Report) -> Result<()> {
    let op = MaximalOperator::CLASSICAL;
    for n in 2..=10 {
        let g = Graph::complete(n)?;
        let delta = extremizer_delta(&g, 0);
        for p in [0.78, 1.0, 1.5, 2.0, 4.0] {
            let r = variation_ratio(&g, &delta, pe(p), op)?.ratio;
            let expected = 1.0 - 1.0 / n as f64;
            report.push(
                Entry::check("extremizer/delta", expected, r, 1e-12)
                    .on("complete", n)
                    .at_p(pe(p)),
            );
        }
    }

    let s3 = Graph::star(3)?;
    for p in [1.5, 2.0, 4.0] {
        let f = extremizer_star_variation(p)?;
        let r = variation_ratio(&s3, &f, pe(p), op)?.ratio;
        report.push(
            Entry::check(
                "extremizer/star3-triple",
                star3_variation_value(p),
                r,
                1e-12,
            )
            .on("star", 3)
            .at_p(pe(p)),
        );
    }

    for n in 2..=12 {
        let g = Graph::complete(n)?;
        let f = extremizer_complete_l2(n, complete_l2_argmax_k(n)?)?;
        let r = norm_ratio(&g, &f, pe(2.0), op)?.ratio;
        let v = l2_norm_complete(n)?.value.unwrap_or(f64::NAN);
        report.push(
            Entry::check("extremizer/complete-l2-two-level", v, r, 1e-9)
                .on("complete", n)
                .at_p(pe(2.0)),
        );
    }

    for n in 4..=12 {
        let g = Graph::star(n)?;
        let f = extremizer_star_l2(n)?;
        let r = norm_ratio(&g, &f, pe(2.0), op)?.ratio;
        report.push(
            Entry::check("extremizer/star-l2-center", star_l2_value(n), r, 1e-9)
                .on("star", n)
                .at_p(pe(2.0)),
        );
    }

    let two_level = [
        (
            Family::Complete,
            6,
            Target::NormRatio,
            2.0,
            (4.0f64 / 3.0).sqrt(),
        ),
        (Family::Star, 4, Target::NormRatio, 2.0, star_l2_value(4)),
        (Family::Complete, 4, Target::VariationRatio, 1.0, 0.75),
    ];
    for (family, n, target, p, expected) in two_level {
        let g = family.build(n)?;
        let scan = two_level_scan(&g, &SearchConfig::new(target, pe(p)))?;
        report.push(
            Entry::check(
                format!("two-level-scan/{}", target.name()),
                expected,
                scan.report.best_ratio,
                1e-9,
            )
            .on(family.name(), n)
            .at_p(pe(p)),
        );
    }
    Ok(())
}

/// A connected graph on `n` vertices: a random recursive tree plus each
/// remaining pair with probability 0.3.
pub fn random_connected_graph(n: usize, rng: &mut ChaCha20Rng) -> Result<Graph> {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(0.3) {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::new(n, &edges)?)
}

/// Values uniform on `[-s, s]` with `s = 10^u`, `u` uniform on `[-2, 2]`.
pub fn random_function(n: usize, rng: &mut ChaCha20Rng) -> VertexFunction {
    let s = 10f64.powf(rng.random_range(-2.0..=2.0));
    let values = (0..n).map(|_| rng.random_range(-s..=s)).collect();
    VertexFunction::new(values).expect("finite draws")
}

fn sample_graph(n: usize, i: usize, rng: &mut ChaCha20Rng) -> Result<Graph> {
    Ok(match i % 5 {
        0 => Graph::complete(n)?,
        1 => Graph::star(n)?,
        2 => Graph::path(n)?,
        3 => Graph::cycle(n)?,
        _ => random_connected_graph(n, rng)?,
    })
}

fn bounds(report: &mut Report, seed: u64) -> Result<()> {
    let exps = [0.5, 1.0, 2.0];
    let mut stream = BOUNDS_STREAM;
    for n in [3, 5] {
        for alpha in [0.0, 0.5] {
            let op = MaximalOperator::centered(Alpha::new(alpha)?);
            for p in exps {
                for q in exps {
                    let mut rng = restart_rng(seed, stream);
                    stream += 1;
                    let c = boundedness_constant(n, pe(p), pe(q), alpha)?;
                    let mut worst = f64::NEG_INFINITY;
                    for i in 0..BOUND_SAMPLES {
                        let g = sample_graph(n, i, &mut rng)?;
                        let f = random_function(n, &mut rng);
                        let mf = op.apply(&g, &f)?;
                        let excess = p_variation(&g, &mf, pe(q))? - c * p_variation(&g, &f, pe(p))?;
                        worst = worst.max(excess);
                    }
                    report.push(
                        Entry::at_most(
                            format!("bounds/variation/alpha={alpha}/q={q}"),
                            worst,
                            0.0,
                            1e-9,
                        )
                        .on("any-connected", n)
                        .at_p(pe(p)),
                    );
                }

                let mut rng = restart_rng(seed, stream);
                stream += 1;
                let k = bv_boundedness_constant(n, pe(p), alpha)?;
                let mut worst = f64::NEG_INFINITY;
                for i in 0..BOUND_SAMPLES {
                    let g = sample_graph(n, i, &mut rng)?;
                    let f = random_function(n, &mut rng);
                    let mf = op.apply(&g, &f)?;
                    let excess = bv_norm(&g, &mf, pe(p), 0)? - k * bv_norm(&g, &f, pe(p), 0)?;
                    worst = worst.max(excess);
                }
                report.push(
                    Entry::at_most(format!("bounds/bv-norm/alpha={alpha}"), worst, 0.0, 1e-9)
                        .on("any-connected", n)
                        .at_p(pe(p)),
                );
            }
        }
    }
    Ok(())
}

fn continuity(report: &mut Report, seed: u64) -> Result<()> {
    let op = MaximalOperator::CLASSICAL;
    let one = pe(1.0);
    for n in 3..=8 {
        let g = Graph::star(n)?;
        let (f, shifted) = shift_counterexample(n);
        let out = difference_variation(&g, &f, &shifted, one, op)?;
        let nf = n as f64;
        // Per edge: 1/n at the center end plus 1/2 at the leaf end.
        let expected = (nf - 1.0) * (1.0 / nf + 0.5);
        report.push(
            Entry::check(
                "continuity/shift-counterexample/output",
                expected,
                out,
                1e-12,
            )
            .on("star", n)
            .at_p(one),
        );
        let input = p_variation(&g, &f.sub(&shifted), one)?;
        report.push(
            Entry::check("continuity/shift-counterexample/input", 0.0, input, 0.0)
                .on("star", n)
                .at_p(one),
        );
    }

    let mut stream = PROBE_STREAM;
    for family in [Family::Complete, Family::Star] {
        let g = family.build(5)?;
        for (p, q) in [(1.0, 1.0), (2.0, 2.0), (1.0, 2.0)] {
            let mut rng = restart_rng(seed, stream);
            let f = random_function(5, &mut rng);
            let rows = continuity_probe(
                &g,
                &f,
                &PROBE_SCALES,
                pe(p),
                pe(q),
                op,
                seed ^ stream as u64,
            )?;
            stream += 1;
            let label = |s: &str| format!("continuity/probe/q={q}/{s}");
            let monotone = if probe_is_monotone(&rows) { 1.0 } else { 0.0 };
            report.push(
                Entry::check(label("monotone"), 1.0, monotone, 0.0)
                    .on(family.name(), 5)
                    .at_p(pe(p)),
            );
            for row in &rows {
                if row.scale == 1e-6 {
                    report.push(
                        Entry::at_most(label("smallest-scale"), row.output_variation, 1e-4, 0.0)
                            .on(family.name(), 5)
                            .at_p(pe(p)),
                    );
                }
                if row.scale == 0.0 {
                    report.push(
                        Entry::check(label("zero-scale"), 0.0, row.output_variation, 0.0)
                            .on(family.name(), 5)
                            .at_p(pe(p)),
                    );
                }
            }
            let worst = rows
                .iter()
                .filter_map(|r| r.bound.map(|b| r.output_variation - b))
                .fold(f64::NEG_INFINITY, f64::max);
            report.push(
                Entry::at_most(label("within-modulus"), worst, 0.0, 1e-12)
                    .on(family.name(), 5)
                    .at_p(pe(p)),
            );
        }
    }
    Ok(())
}
