use graphmax_core::constants::{
    boundedness_constant, bv_boundedness_constant, l2_norm_complete, l2_norm_star,
};
use graphmax_core::search::two_level_scan;
use graphmax_core::variation::{bv_norm, karamata_holds, majorizes, ConvexFn};
use graphmax_core::*;
use proptest::prelude::*;

const CLASSICAL: MaximalOperator = MaximalOperator::CLASSICAL;

fn pe(p: f64) -> PExponent {
    PExponent::new(p).unwrap()
}

/// Graph on `n <= 7` vertices from an edge mask over all pairs.
fn graph_strategy(min_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=7usize)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(any::<bool>(), n * (n - 1) / 2),
            )
        })
        .prop_map(|(n, mask)| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges: Vec<_> = pairs
                .zip(mask)
                .filter(|(_, keep)| *keep)
                .map(|(e, _)| e)
                .collect();
            Graph::new(n, &edges).unwrap()
        })
}

/// Random connected graph: a random tree plus extra edges.
fn connected_strategy(min_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=7usize)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(any::<prop::sample::Index>(), n - 1),
                prop::collection::vec(any::<bool>(), n * (n - 1) / 2),
            )
        })
        .prop_map(|(n, parents, mask)| {
            let mut edges: Vec<_> = (1..n).map(|v| (parents[v - 1].index(v), v)).collect();
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            edges.extend(pairs.zip(mask).filter(|(_, keep)| *keep).map(|(e, _)| e));
            Graph::new(n, &edges).unwrap()
        })
}

fn with_function(
    g: impl Strategy<Value = Graph>,
) -> impl Strategy<Value = (Graph, VertexFunction)> {
    g.prop_flat_map(|g| {
        let n = g.n();
        (Just(g), prop::collection::vec(-10.0..10.0f64, n))
    })
    .prop_map(|(g, v)| (g, VertexFunction::new(v).unwrap()))
}

fn alpha_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(1.0), 0.0..1.0f64]
}

/// All-pairs distances by Floyd–Warshall; `None` when unreachable.
fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<usize>>> {
    let n = g.n();
    let mut d = vec![vec![None; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(0);
    }
    for &(u, v) in g.edges() {
        d[u][v] = Some(1);
        d[v][u] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Every ball `B(c, r)` for `r < n`, as member lists.
fn all_balls(g: &Graph, c: usize) -> Vec<Vec<usize>> {
    let d = floyd_warshall(g);
    (0..g.n())
        .map(|r| {
            (0..g.n())
                .filter(|&v| d[c][v].is_some_and(|x| x <= r))
                .collect()
        })
        .collect()
}

fn ball_value(f: &VertexFunction, ball: &[usize], alpha: f64) -> f64 {
    let sum: f64 = ball.iter().map(|&v| f[v].abs()).sum();
    (ball.len() as f64).powf(alpha - 1.0) * sum
}

fn naive_centered(g: &Graph, f: &VertexFunction, alpha: f64) -> Vec<f64> {
    (0..g.n())
        .map(|e| {
            all_balls(g, e)
                .iter()
                .map(|b| ball_value(f, b, alpha))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

fn naive_uncentered(g: &Graph, f: &VertexFunction, alpha: f64) -> Vec<f64> {
    let mut out = vec![f64::NEG_INFINITY; g.n()];
    for c in 0..g.n() {
        for b in all_balls(g, c) {
            let v = ball_value(f, &b, alpha);
            for &m in &b {
                out[m] = out[m].max(v);
            }
        }
    }
    out
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

fn apply(op: MaximalOperator, g: &Graph, f: &VertexFunction) -> Vec<f64> {
    op.apply(g, f).unwrap().into_values()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn centered_matches_brute_force((g, f) in with_function(graph_strategy(1)), alpha in alpha_strategy()) {
        let got = apply(MaximalOperator::centered(Alpha::new(alpha).unwrap()), &g, &f);
        let want = naive_centered(&g, &f, alpha);
        for (a, b) in got.iter().zip(&want) {
            prop_assert!(close(*a, *b, 1e-12), "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn uncentered_matches_brute_force((g, f) in with_function(graph_strategy(1)), alpha in alpha_strategy()) {
        let got = apply(MaximalOperator::uncentered(Alpha::new(alpha).unwrap()), &g, &f);
        let want = naive_uncentered(&g, &f, alpha);
        for (a, b) in got.iter().zip(&want) {
            prop_assert!(close(*a, *b, 1e-12), "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn distances_match_floyd_warshall(g in graph_strategy(1)) {
        let d = floyd_warshall(&g);
        for (u, row) in d.iter().enumerate() {
            for (v, dv) in row.iter().enumerate() {
                prop_assert_eq!(g.dist(u, v), dv.map_or(UNREACHABLE, |x| x as u32));
            }
        }
    }

    #[test]
    fn balls_grow_and_saturate(g in graph_strategy(1)) {
        for v in 0..g.n() {
            let ecc = g.eccentricity(v);
            for r in 0..ecc + 2 {
                let (small, big) = (g.ball(v, r), g.ball(v, r + 1));
                prop_assert!(small.members.iter().all(|&m| big.contains(m)));
            }
            prop_assert_eq!(g.ball(v, ecc).members, g.component(v));
            prop_assert_eq!(g.ball(v, ecc + 3).members, g.component(v));
        }
    }

    #[test]
    fn pointwise_domination((g, f) in with_function(graph_strategy(1)), alpha in alpha_strategy(), unc in any::<bool>()) {
        let a = Alpha::new(alpha).unwrap();
        let op = if unc { MaximalOperator::uncentered(a) } else { MaximalOperator::centered(a) };
        let mf = apply(op, &g, &f);
        for (m, x) in mf.iter().zip(f.values()) {
            prop_assert!(*m >= x.abs());
        }
    }

    #[test]
    fn homogeneity_and_sign((g, f) in with_function(graph_strategy(1)), lambda in -100.0..100.0f64, alpha in alpha_strategy()) {
        let op = MaximalOperator::centered(Alpha::new(alpha).unwrap());
        let mf = apply(op, &g, &f);
        let scaled = apply(op, &g, &f.scale(lambda));
        for (a, b) in scaled.iter().zip(&mf) {
            prop_assert!((a - lambda.abs() * b).abs() <= 1e-12 * (lambda.abs() * b).max(1e-300));
        }
        prop_assert_eq!(apply(op, &g, &f.scale(-1.0)), mf);
    }

    #[test]
    fn uncentered_dominates_centered((g, f) in with_function(graph_strategy(1)), alpha in alpha_strategy()) {
        let a = Alpha::new(alpha).unwrap();
        let c = apply(MaximalOperator::centered(a), &g, &f);
        let u = apply(MaximalOperator::uncentered(a), &g, &f);
        for (x, y) in c.iter().zip(&u) {
            prop_assert!(y >= x);
        }
    }

    #[test]
    fn classical_commutes_with_nonnegative_shift((g, f) in with_function(graph_strategy(1)), c in 0.0..10.0f64) {
        let f = f.abs();
        let mf = apply(CLASSICAL, &g, &f);
        let shifted = apply(CLASSICAL, &g, &f.shift(c));
        for (a, b) in shifted.iter().zip(&mf) {
            prop_assert!(close(*a, b + c, 1e-12));
        }
        if let Ok(r) = variation_ratio(&g, &f, pe(2.0), CLASSICAL) {
            let s = variation_ratio(&g, &f.shift(c), pe(2.0), CLASSICAL).unwrap();
            prop_assert!(close(r.ratio, s.ratio, 1e-9));
        }
    }

    #[test]
    fn ratios_are_scale_invariant((g, f) in with_function(graph_strategy(2)), lambda in 0.01..100.0f64, p in 0.3..4.0f64) {
        if let Ok(r) = variation_ratio(&g, &f, pe(p), CLASSICAL) {
            let s = variation_ratio(&g, &f.scale(lambda), pe(p), CLASSICAL).unwrap();
            prop_assert!(close(r.ratio, s.ratio, 1e-9));
        }
        if let Ok(r) = norm_ratio(&g, &f, pe(p), CLASSICAL) {
            let s = norm_ratio(&g, &f.scale(-lambda), pe(p), CLASSICAL).unwrap();
            prop_assert!(close(r.ratio, s.ratio, 1e-9));
        }
    }

    #[test]
    fn absolute_value_lowers_variation((g, f) in with_function(graph_strategy(2)), p in 0.3..4.0f64) {
        let v = p_variation(&g, &f, pe(p)).unwrap();
        let va = p_variation(&g, &f.abs(), pe(p)).unwrap();
        prop_assert!(va <= v * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn large_p_approaches_max_edge((g, f) in with_function(graph_strategy(2))) {
        let v64 = p_variation(&g, &f, pe(64.0)).unwrap();
        let vinf = p_variation(&g, &f, PExponent::Infinity).unwrap();
        let direct = g.edges().iter().map(|&(u, v)| (f[u] - f[v]).abs()).fold(0.0, f64::max);
        prop_assert_eq!(vinf, direct);
        prop_assert!(v64 >= vinf * (1.0 - 1e-12));
        prop_assert!(v64 <= vinf * 1.05);
    }

    #[test]
    fn complete_graph_variation_bound(n in 2..=8usize, v in prop::collection::vec(0.0..1.0f64, 8), p in prop_oneof![1.0..6.0f64, Just(0.5), Just(0.78)]) {
        let g = Graph::complete(n).unwrap();
        let f = VertexFunction::new(v[..n].to_vec()).unwrap();
        let c = constants::sharp_variation_constant_complete(n, pe(p)).unwrap();
        if let (Some(bound), Ok(r)) = (c.proved_value(), variation_ratio(&g, &f, pe(p), CLASSICAL)) {
            prop_assert!(r.ratio <= bound + 1e-9, "ratio {} > {}", r.ratio, bound);
        }
    }

    #[test]
    fn star_variation_bound(n in 3..=8usize, v in prop::collection::vec(0.0..1.0f64, 8), p in 0.5..=1.0f64) {
        let g = Graph::star(n).unwrap();
        let f = VertexFunction::new(v[..n].to_vec()).unwrap();
        if let Ok(r) = variation_ratio(&g, &f, pe(p), CLASSICAL) {
            prop_assert!(r.ratio <= 1.0 - 1.0 / n as f64 + 1e-9);
        }
    }

    #[test]
    fn l2_norm_bounds(n in 4..=12usize, v in prop::collection::vec(0.0..1.0f64, 12)) {
        let f = VertexFunction::new(v[..n].to_vec()).unwrap();
        let kn = l2_norm_complete(n).unwrap().value.unwrap();
        let sn = l2_norm_star(n).unwrap().value.unwrap();
        if let Ok(r) = norm_ratio(&Graph::complete(n).unwrap(), &f, pe(2.0), CLASSICAL) {
            prop_assert!(r.ratio <= kn + 1e-9);
        }
        if let Ok(r) = norm_ratio(&Graph::star(n).unwrap(), &f, pe(2.0), CLASSICAL) {
            prop_assert!(r.ratio <= sn + 1e-9);
        }
    }

    #[test]
    fn boundedness_holds((g, f) in with_function(connected_strategy(2)), p in prop_oneof![Just(0.5), Just(1.0), Just(2.0), Just(f64::INFINITY)], q in prop_oneof![Just(0.5), Just(1.0), Just(2.0)], alpha in 0.0..0.99f64) {
        let p = if p.is_infinite() { PExponent::Infinity } else { pe(p) };
        let op = MaximalOperator::centered(Alpha::new(alpha).unwrap());
        let n = g.n();
        let mf = op.apply(&g, &f).unwrap();
        let c = boundedness_constant(n, p, pe(q), alpha).unwrap();
        let lhs = p_variation(&g, &mf, pe(q)).unwrap();
        prop_assert!(lhs <= c * p_variation(&g, &f, p).unwrap() + 1e-9);
        let k = bv_boundedness_constant(n, p, alpha).unwrap();
        for anchor in 0..n {
            prop_assert!(bv_norm(&g, &mf, p, anchor).unwrap() <= k * bv_norm(&g, &f, p, anchor).unwrap() + 1e-9);
        }
    }
}

/// Applies `steps` random T-transforms (Robin Hood moves) to `x`; the result
/// is majorized by `x` by construction.
fn t_transform(x: &[f64], steps: &[(prop::sample::Index, prop::sample::Index, f64)]) -> Vec<f64> {
    let mut y = x.to_vec();
    for (i, j, t) in steps {
        let (i, j) = (i.index(y.len()), j.index(y.len()));
        let (a, b) = (y[i], y[j]);
        y[i] = t * a + (1.0 - t) * b;
        y[j] = (1.0 - t) * a + t * b;
    }
    y
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Prefix-sum oracle.
fn majorizes_oracle(x: &[f64], y: &[f64], tol: f64) -> bool {
    let mut s = 0.0;
    for (a, b) in x.iter().zip(y) {
        s += a - b;
        if s < -tol {
            return false;
        }
    }
    s.abs() <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn karamata_agrees_on_majorizing_pairs(
        x in prop::collection::vec(0.0..10.0f64, 2..8),
        steps in prop::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>(), 0.0..=1.0f64), 1..6),
        p in 0.05..=1.0f64,
        e in 0.01..1.0f64,
    ) {
        let y = sorted_desc(t_transform(&x, &steps));
        let x = sorted_desc(x);
        prop_assert!(majorizes_oracle(&x, &y, 1e-9));
        prop_assert!(majorizes(&x, &y).unwrap());
        for phi in [ConvexFn::NegPower(p), ConvexFn::Exp(e)] {
            let lhs: f64 = x.iter().map(|&t| phi.eval(t)).sum();
            let rhs: f64 = y.iter().map(|&t| phi.eval(t)).sum();
            prop_assert!(lhs >= rhs - 1e-9 * rhs.abs().max(1.0));
            prop_assert!(karamata_holds(&x, &y, phi).unwrap());
        }
    }

    #[test]
    fn majorization_agrees_with_oracle(x in prop::collection::vec(0.0..10.0f64, 1..8), y in prop::collection::vec(0.0..10.0f64, 1..8)) {
        let n = x.len().min(y.len());
        let x = sorted_desc(x[..n].to_vec());
        let mut y = sorted_desc(y[..n].to_vec());
        // Equalize totals half the time so both outcomes occur.
        if n > 1 && x[0] > 1.0 {
            let gap = x.iter().sum::<f64>() - y.iter().sum::<f64>();
            y[0] += gap;
            y = sorted_desc(y.into_iter().map(|v| v.max(0.0)).collect());
        }
        prop_assert_eq!(majorizes(&x, &y).unwrap(), majorizes_oracle(&x, &y, 1e-9));
    }
}

#[test]
fn two_level_not_worse_than_search_for_l2() {
    let cfg = SearchConfig {
        restarts: 8,
        ..SearchConfig::new(Target::NormRatio, pe(2.0))
    };
    for n in 3..=8 {
        for g in [Graph::complete(n).unwrap(), Graph::star(n).unwrap()] {
            let generic = estimate_ratio(&g, &cfg).unwrap();
            let structured = two_level_scan(&g, &cfg).unwrap();
            assert!(
                structured.report.best_ratio >= generic.best_ratio - 1e-6,
                "n={n}: {} < {}",
                structured.report.best_ratio,
                generic.best_ratio
            );
        }
    }
}

#[test]
fn search_is_deterministic_and_sound() {
    let g = Graph::star(5).unwrap();
    let cfg = SearchConfig {
        restarts: 6,
        ..SearchConfig::new(Target::VariationRatio, pe(0.75))
    };
    let a = estimate_ratio(&g, &cfg).unwrap();
    let b = estimate_ratio(&g, &cfg).unwrap();
    assert_eq!(a, b);
    let again = variation_ratio(&g, &a.best_f, cfg.p, CLASSICAL)
        .unwrap()
        .ratio;
    assert!((again - a.best_ratio).abs() <= 1e-12);
    assert!(a.gap.unwrap() >= -1e-9);
}
