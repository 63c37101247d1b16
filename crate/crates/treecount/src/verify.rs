//! Self-contained verification suite over the embedded fixtures. Each
//! check returns a pass/fail outcome with a one-line detail string; the CLI
//! `verify` command and the acceptance tests both drive these.

use crate::asymptotics::{bipartite_bounds, constants, convergence_report};
use crate::counter::{check_step_structure, count_class, count_orbit, oracle_count};
use crate::cover::{
    apply_deck, axis_delta, ball_size, displacement, sphere_sizes, tree_distance, TreePath,
};
use crate::error::Result;
use crate::fixtures;
use crate::graph::RegularGraph;
use crate::spectral::{
    eigendecompose, fourier_coefficient, fourier_series, g_closed, g_series, spherical_closed,
    spherical_recursion, SphericalParams,
};
use crate::words::{
    class_of_walk, class_of_word, enumerate_classes, ClassDescriptor, SpanningTree, Walk, Word,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Largest ball radius whose tree-vertex count fits the budget.
pub fn max_radius(q: usize, budget: u64) -> usize {
    let mut r = 0;
    while ball_size(q, r + 1) <= budget as u128 {
        r += 1;
    }
    r
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "{} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

fn outcome(name: &'static str, run: impl FnOnce() -> Result<(bool, String)>) -> CriterionOutcome {
    match run() {
        Ok((passed, detail)) => CriterionOutcome {
            name,
            passed,
            detail,
        },
        Err(e) => CriterionOutcome {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn triangle_class(g: &RegularGraph) -> ClassDescriptor {
    class_of_walk(g, &Walk::from_vertices(g, &[0, 1, 2, 0]).expect("triangle walk"))
        .expect("triangle class")
}

fn pentagon_class(g: &RegularGraph) -> ClassDescriptor {
    class_of_walk(
        g,
        &Walk::from_vertices(g, &[0, 1, 2, 3, 4, 0]).expect("pentagon walk"),
    )
    .expect("pentagon class")
}

fn square_class(g: &RegularGraph) -> ClassDescriptor {
    class_of_walk(g, &Walk::from_vertices(g, &[0, 3, 1, 4, 0]).expect("square walk"))
        .expect("square class")
}

/// Enumerated sphere sizes match (q+1) q^{n-1} exactly for n <= 12 at
/// q = 2 (K4 cover) and q = 3 (K5 cover).
pub fn criterion_sphere_law() -> CriterionOutcome {
    outcome("sphere-law", || {
        let mut checked = 0usize;
        for g in [fixtures::k4(), fixtures::k5()] {
            let st = SpanningTree::new(&g, 0);
            let q = g.q() as u64;
            let sizes = sphere_sizes(&g, &st, &TreePath::root(), 12);
            for (n, &size) in sizes.iter().enumerate().skip(1) {
                let expected = (q + 1) * q.pow(n as u32 - 1);
                if size != expected {
                    return Ok((
                        false,
                        format!("q={q} n={n}: |S_n| = {size} != {expected}"),
                    ));
                }
                checked += 1;
            }
        }
        Ok((true, format!("{checked} spheres exact at q=2 and q=3")))
    })
}

fn random_basepoint(
    g: &RegularGraph,
    st: &SpanningTree,
    rng: &mut ChaCha8Rng,
    max_depth: usize,
) -> TreePath {
    let depth = rng.random_range(0..=max_depth);
    let mut arcs = Vec::with_capacity(depth);
    let mut at = st.base_vertex();
    for _ in 0..depth {
        let options: Vec<usize> = g
            .out_arcs(at)
            .iter()
            .copied()
            .filter(|&a| arcs.last() != Some(&g.reversal(a)))
            .collect();
        let a = options[rng.random_range(0..options.len())];
        arcs.push(a);
        at = g.terminus(a);
    }
    TreePath::new(g, st, arcs).expect("non-backtracking by construction")
}

/// Point at distance `t` from `x` on the tree geodesic toward `y`.
fn geodesic_point(
    g: &RegularGraph,
    st: &SpanningTree,
    x: &TreePath,
    y: &TreePath,
    t: usize,
) -> TreePath {
    let common = x
        .arcs()
        .iter()
        .zip(y.arcs())
        .take_while(|(a, b)| a == b)
        .count();
    let up = x.depth() - common;
    let arcs = if t <= up {
        x.arcs()[..x.depth() - t].to_vec()
    } else {
        y.arcs()[..common + (t - up)].to_vec()
    };
    TreePath::new(g, st, arcs).expect("prefix of a valid path")
}

/// For sampled (word, basepoint) pairs: d(x, Tx) - mu is even and
/// nonnegative, equals twice the distance to the axis, and the point at
/// that distance along the geodesic attains the minimal displacement mu.
pub fn criterion_displacement_identity() -> CriterionOutcome {
    outcome("displacement-identity", || {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut samples = 0usize;
        for g in [fixtures::k4(), fixtures::petersen()] {
            let st = SpanningTree::new(&g, 0);
            while samples < if g.num_vertices() == 4 { 60 } else { 120 } {
                let len = rng.random_range(1..=6);
                let letters: Vec<i64> = (0..len)
                    .map(|_| {
                        let gen = rng.random_range(1..=st.rank()) as i64;
                        if rng.random_bool(0.5) {
                            gen
                        } else {
                            -gen
                        }
                    })
                    .collect();
                let w = Word::reduce(&letters, st.rank())?;
                let Ok(k) = class_of_word(&g, &st, &w) else {
                    continue; // reduced to the identity; resample
                };
                let x = random_basepoint(&g, &st, &mut rng, 4);
                let tx = apply_deck(&g, &st, &w, &x);
                let d = tree_distance(&x, &tx);
                if d < k.mu || !(d - k.mu).is_multiple_of(2) {
                    return Ok((false, format!("d={d} mu={} violates parity", k.mu)));
                }
                let delta = axis_delta(&g, &st, &w, &x, k.mu)?;
                if d != k.mu + 2 * delta {
                    return Ok((false, format!("d={d} != mu + 2 delta")));
                }
                // the geodesic reaches the axis after delta steps: minimal
                // displacement mu is attained there
                let y = geodesic_point(&g, &st, &x, &tx, delta);
                let dy = displacement(&g, &st, &w, &y);
                if dy != k.mu {
                    return Ok((
                        false,
                        format!("displacement {dy} != mu {} at the axis foot", k.mu),
                    ));
                }
                samples += 1;
            }
        }
        Ok((true, format!("{samples} sampled pairs satisfy the identity")))
    })
}

/// Fiber enumeration equals the stabilized conjugate-enumeration oracle,
/// exact integer equality for all n <= 9.
pub fn criterion_oracle_equivalence() -> CriterionOutcome {
    outcome("oracle-equivalence", || {
        for (g, k, depth) in [
            (fixtures::k4(), None, 7usize),
            (fixtures::petersen(), Some(()), 5),
        ] {
            let st = SpanningTree::new(&g, 0);
            let k = match k {
                None => triangle_class(&g),
                Some(()) => pentagon_class(&g),
            };
            let exact = count_class(&g, &st, &k, &TreePath::root(), 9, DEFAULT_BUDGET)?;
            let oracle =
                oracle_count(&g, &st, &k, &TreePath::root(), 9, depth, DEFAULT_BUDGET)?;
            if !oracle.stable {
                return Ok((
                    false,
                    format!("oracle not stabilized at depth {depth} on |V|={}", g.num_vertices()),
                ));
            }
            if exact.rows != oracle.table.rows {
                return Ok((false, format!("tables differ on |V|={}", g.num_vertices())));
            }
        }
        Ok((true, "fiber counts equal stabilized oracle on both graphs".into()))
    })
}

fn spectral_check_points() -> [Complex64; 3] {
    [
        Complex64::new(2.5, 0.0),
        Complex64::new(3.0, 0.0),
        Complex64::new(2.5, 0.7),
    ]
}

/// Closed form vs direct series at three s-points on K4 and Petersen,
/// relative error 1e-6 with the geometric tail bound folded in.
pub fn criterion_spectral_cross_validation(budget: u64) -> CriterionOutcome {
    outcome("spectral-cross-validation", || {
        for (g, k) in [
            (fixtures::k4(), triangle_class(&fixtures::k4())),
            (fixtures::petersen(), pentagon_class(&fixtures::petersen())),
        ] {
            let st = SpanningTree::new(&g, 0);
            let spec = eigendecompose(&g);
            let n_max = max_radius(g.q(), budget).min(40);
            let table = count_class(&g, &st, &k, &TreePath::root(), n_max, budget)?;
            for s in spectral_check_points() {
                let closed = g_closed(&g, &spec, &k, 0, s)?;
                let series = g_series(&table, s);
                let err = (closed.value - series.value).norm();
                let allowed = 1e-6 * closed.value.norm() + series.tail_bound;
                if err > allowed {
                    return Ok((
                        false,
                        format!(
                            "|V|={} s={s}: error {err:.3e} > {allowed:.3e}",
                            g.num_vertices()
                        ),
                    ));
                }
            }
        }
        Ok((true, "closed form matches series at all s-points".into()))
    })
}

/// Spherical closed forms vs the recursion for every fixture eigenvalue
/// (n <= 30, abs 1e-9) and the degenerate branch vs a truncated series at
/// the exact critical eigenvalues (rel 1e-8).
pub fn criterion_spherical_functions() -> CriterionOutcome {
    outcome("spherical-functions", || {
        for g in [fixtures::k4(), fixtures::petersen(), fixtures::k33()] {
            let spec = eigendecompose(&g);
            for &lambda in &spec.eigenvalues {
                let p = SphericalParams::new(lambda, g.q(), 1.0);
                let rec = spherical_recursion(lambda, g.q(), 1.0, 30);
                for (n, &r) in rec.iter().enumerate() {
                    if (spherical_closed(&p, n) - r).abs() >= 1e-9 {
                        return Ok((
                            false,
                            format!("lambda={lambda} n={n}: closed form drifts"),
                        ));
                    }
                }
            }
        }
        let s = Complex64::new(2.5, 0.0);
        for q in [2usize, 4] {
            let crit = 2.0 * (q as f64).sqrt() / (q as f64 + 1.0);
            for lambda in [crit, -crit] {
                let p = SphericalParams::new(lambda, q, 1.0);
                if p.degenerate.is_none() {
                    return Ok((false, format!("q={q} lambda={lambda} not routed degenerate")));
                }
                let closed = fourier_coefficient(&p, 3, 1, s).value;
                let series = fourier_series(lambda, q, 1.0, 3, 1, s, 400);
                if (closed - series).norm() / closed.norm() >= 1e-8 {
                    return Ok((
                        false,
                        format!("degenerate q={q} lambda={lambda}: {closed} vs {series}"),
                    ));
                }
            }
        }
        Ok((true, "closed forms track recursion and degenerate series".into()))
    })
}

/// u+ + u- = Phi(0) and u+ a+ + u- a- = Phi(1) at machine precision.
pub fn criterion_u_system() -> CriterionOutcome {
    outcome("u-system-identity", || {
        let mut checked = 0usize;
        for g in [fixtures::k4(), fixtures::petersen(), fixtures::k33()] {
            let spec = eigendecompose(&g);
            for &lambda in &spec.eigenvalues {
                let p = SphericalParams::new(lambda, g.q(), 0.8);
                if p.degenerate.is_some() {
                    continue;
                }
                let sum = (p.u_plus + p.u_minus - Complex64::new(p.phi0, 0.0)).norm();
                let weighted = (p.u_plus * p.alpha_plus + p.u_minus * p.alpha_minus
                    - Complex64::new(p.phi_one(), 0.0))
                .norm();
                if sum >= 1e-12 || weighted >= 1e-12 {
                    return Ok((false, format!("lambda={lambda}: residuals {sum:.2e}, {weighted:.2e}")));
                }
                checked += 1;
            }
        }
        Ok((true, format!("{checked} eigenvalues satisfy both identities")))
    })
}

/// Growth law at the largest budget-feasible radius: normalized count
/// within 10% of its limit, and the count ratio per parity step within 5%
/// of q as a trend over the last three steps.
pub fn criterion_growth_at_scale(budget: u64) -> CriterionOutcome {
    outcome("growth-at-scale", || {
        let g = fixtures::k4();
        let st = SpanningTree::new(&g, 0);
        let k = triangle_class(&g);
        let n_max = max_radius(g.q(), budget);
        let table = count_class(&g, &st, &k, &TreePath::root(), n_max, budget)?;
        let c = constants(&g, &k);
        let d = convergence_report(&table, &c)?;
        let last = d.steps.last().expect("table reaches past mu");
        let norm = last.normalized_over_limit;
        if !(0.9..=1.1).contains(&norm) {
            return Ok((false, format!("normalized {norm:.4} outside [0.9, 1.1]")));
        }
        let Some(trend) = d.ratio_trend else {
            return Ok((false, "ratio trend undefined".into()));
        };
        if (trend - d.ratio_target).abs() / d.ratio_target > 0.05 {
            return Ok((false, format!("ratio trend {trend:.4} off q by > 5%")));
        }
        Ok((
            true,
            format!("n_max={n_max}: normalized {norm:.4}, ratio trend {trend:.4}"),
        ))
    })
}

/// The normalized value at a basepoint two steps off the axis agrees with
/// the on-axis value within 15% at n_max.
pub fn criterion_basepoint_independence(budget: u64) -> CriterionOutcome {
    outcome("basepoint-independence", || {
        let g = fixtures::k4();
        let st = SpanningTree::new(&g, 0);
        let k = triangle_class(&g);
        let n_max = max_radius(g.q(), budget);
        let on_axis = count_class(&g, &st, &k, &TreePath::root(), n_max, budget)?;
        let off = TreePath::from_walk(&g, &st, &Walk::from_vertices(&g, &[0, 3, 1])?)?;
        let w = k.representative_word(&g, &st);
        let delta = axis_delta(&g, &st, &w, &off, k.mu)?;
        if delta != 2 {
            return Ok((false, format!("offset basepoint has delta {delta}, want 2")));
        }
        let shifted = count_class(&g, &st, &k, &off, n_max, budget)?;
        let a = on_axis.rows[n_max].normalized;
        let b = shifted.rows[n_max].normalized;
        let rel = (a - b).abs() / a;
        if rel > 0.15 {
            return Ok((false, format!("normalized values differ by {rel:.3}")));
        }
        Ok((true, format!("relative difference {rel:.4} at n_max={n_max}")))
    })
}

/// Full orbit count at n = 20 matches |B_n| / |V| within 5%.
pub fn criterion_orbit_equidistribution(budget: u64) -> CriterionOutcome {
    outcome("orbit-equidistribution", || {
        let g = fixtures::k4();
        let st = SpanningTree::new(&g, 0);
        let n = 20;
        let t = count_orbit(&g, &st, &TreePath::root(), 0, n, budget)?;
        let ratio = t.count_at(n) as f64 * g.num_vertices() as f64 / ball_size(g.q(), n) as f64;
        if !(0.95..=1.05).contains(&ratio) {
            return Ok((false, format!("ratio {ratio:.4} outside [0.95, 1.05]")));
        }
        Ok((true, format!("orbit density ratio {ratio:.4} at n={n}")))
    })
}

/// Bipartite quotient: scaled counts at the last five parity steps lie in
/// the widened bracket, whose endpoints differ by a factor q^2 exactly.
pub fn criterion_bipartite_bracket(budget: u64) -> CriterionOutcome {
    outcome("bipartite-bracket", || {
        let g = fixtures::k33();
        let st = SpanningTree::new(&g, 0);
        let k = square_class(&g);
        let (lower, upper) = bipartite_bounds(&g, &k)?;
        let q2 = (g.q() * g.q()) as f64;
        if (upper / lower - q2).abs() > 1e-12 {
            return Ok((false, format!("bracket ratio {} != q^2", upper / lower)));
        }
        let n_max = max_radius(g.q(), budget);
        let last = n_max - (n_max - k.mu) % 2;
        let table = count_class(&g, &st, &k, &TreePath::root(), last, budget)?;
        for i in 0..5 {
            let n = last - 2 * i;
            let scaled = table.count_at(n) as f64 * (g.q() as f64).powf(-(n as f64) / 2.0);
            if scaled < lower * 0.9 || scaled > upper * 1.1 {
                return Ok((
                    false,
                    format!("n={n}: scaled {scaled:.4} outside widened [{lower:.4}, {upper:.4}]"),
                ));
            }
        }
        Ok((
            true,
            format!("scaled counts inside bracket through n={last}, ratio q^2 exact"),
        ))
    })
}

/// Every class count table is non-decreasing and jumps only where n - mu
/// is even.
pub fn criterion_parity_structure() -> CriterionOutcome {
    outcome("parity-step-structure", || {
        let mut checked = 0usize;
        let k4 = fixtures::k4();
        let st4 = SpanningTree::new(&k4, 0);
        let mut tables = Vec::new();
        let tri = triangle_class(&k4);
        tables.push(count_class(&k4, &st4, &tri, &TreePath::root(), 15, DEFAULT_BUDGET)?);
        let off = TreePath::from_walk(&k4, &st4, &Walk::from_vertices(&k4, &[0, 3, 1])?)?;
        tables.push(count_class(&k4, &st4, &tri, &off, 15, DEFAULT_BUDGET)?);
        for k in enumerate_classes(&k4, 3) {
            tables.push(count_class(&k4, &st4, &k, &TreePath::root(), 9, DEFAULT_BUDGET)?);
        }
        let pet = fixtures::petersen();
        let stp = SpanningTree::new(&pet, 0);
        let pk = pentagon_class(&pet);
        tables.push(count_class(&pet, &stp, &pk, &TreePath::root(), 15, DEFAULT_BUDGET)?);
        let k33 = fixtures::k33();
        let st33 = SpanningTree::new(&k33, 0);
        let sk = square_class(&k33);
        tables.push(count_class(&k33, &st33, &sk, &TreePath::root(), 16, DEFAULT_BUDGET)?);
        for t in &tables {
            if !check_step_structure(t) {
                return Ok((false, format!("table for mu={} violates step structure", t.mu)));
            }
            checked += 1;
        }
        Ok((true, format!("{checked} tables obey the parity step structure")))
    })
}

/// Runs the whole suite in criterion order.
pub fn run_all(budget: u64) -> Vec<CriterionOutcome> {
    vec![
        criterion_sphere_law(),
        criterion_displacement_identity(),
        criterion_oracle_equivalence(),
        criterion_spectral_cross_validation(budget),
        criterion_spherical_functions(),
        criterion_u_system(),
        criterion_growth_at_scale(budget),
        criterion_basepoint_independence(budget),
        criterion_orbit_equidistribution(budget),
        criterion_bipartite_bracket(budget),
        criterion_parity_structure(),
    ]
}
