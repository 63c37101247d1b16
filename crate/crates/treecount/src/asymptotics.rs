//! Asymptotic constants and convergence diagnostics for class count
//! tables: the growth constant, the associated residue, the two-sided
//! bracket for the scaled counts, and the weaker bracket available on
//! bipartite quotients.

use crate::counter::CountTable;
use crate::error::{Error, Result};
use crate::graph::RegularGraph;
use crate::words::ClassDescriptor;
use serde::Serialize;

/// Constants attached to a class: everything here is a closed-form function
/// of the exact integers mu, nu, |G|, q.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticConstants {
    pub mu: usize,
    pub nu: usize,
    pub num_vertices: usize,
    pub q: usize,
    /// a = mu / (nu |G| q^{mu/2}): the limit of q^{-n/2} count(n) along the
    /// parity subsequence (non-bipartite case).
    pub a: f64,
    /// mu / (nu |G|): the limit of count(n) q^{-(n-mu)/2}.
    pub theorem_constant: f64,
    /// Residue of the associated Dirichlet series at its rightmost pole:
    /// a (q-1) / (q ln q).
    pub residue: f64,
    /// Oscillation period 2 pi / ln q of the complex poles.
    pub tau: f64,
    /// Two-sided bracket (a/q, a) for q^{-n/2} count(n) over all n.
    pub bracket_lower: f64,
    pub bracket_upper: f64,
    pub bipartite: bool,
    /// The weaker liminf/limsup bracket when the quotient is bipartite;
    /// upper/lower = q^2.
    pub bipartite_bracket: Option<(f64, f64)>,
}

pub fn constants(g: &RegularGraph, k: &ClassDescriptor) -> AsymptoticConstants {
    let qf = g.q() as f64;
    let big_g = g.num_vertices() as f64;
    let a = k.mu as f64 / (k.nu as f64 * big_g * qf.powf(k.mu as f64 / 2.0));
    let bipartite = g.validate().is_bipartite;
    AsymptoticConstants {
        mu: k.mu,
        nu: k.nu,
        num_vertices: g.num_vertices(),
        q: g.q(),
        a,
        theorem_constant: a * qf.powf(k.mu as f64 / 2.0),
        residue: a * (qf - 1.0) / (qf * qf.ln()),
        tau: std::f64::consts::TAU / qf.ln(),
        bracket_lower: a / qf,
        bracket_upper: a,
        bipartite,
        bipartite_bracket: if bipartite {
            bipartite_bounds(g, k).ok()
        } else {
            None
        },
    }
}

/// The bipartite bracket: (2q/(q+1)) a / q^2 <= liminf <= limsup <= (2q/(q+1)) a.
pub fn bipartite_bounds(g: &RegularGraph, k: &ClassDescriptor) -> Result<(f64, f64)> {
    if !g.validate().is_bipartite {
        return Err(Error::NotBipartite);
    }
    let qf = g.q() as f64;
    let a = k.mu as f64
        / (k.nu as f64 * g.num_vertices() as f64 * qf.powf(k.mu as f64 / 2.0));
    let upper = 2.0 * qf / (qf + 1.0) * a;
    Ok((upper / (qf * qf), upper))
}

/// One parity step n (n - mu even) of the diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct StepDiagnostic {
    pub n: usize,
    pub count: u64,
    /// count(n) q^{-(n-mu)/2} / theorem_constant; tends to 1.
    pub normalized_over_limit: f64,
    /// q^{-n/2} count(n); tends to a.
    pub scaled: f64,
    /// Soft flag: scaled value inside (bracket_lower, bracket_upper). The
    /// bracket is asymptotic, so finite-n violations are informative, not
    /// errors.
    pub within_bracket: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceDiagnostics {
    pub steps: Vec<StepDiagnostic>,
    /// |normalized_over_limit - 1| at the last step.
    pub final_deviation: f64,
    /// count(n_max) / count(n_max - 2), when defined.
    pub ratio_last: Option<f64>,
    /// Geometric mean of the per-step ratios over the last three parity
    /// steps: (count(n_max) / count(n_max - 6))^{1/3}. Tends to q.
    pub ratio_trend: Option<f64>,
    pub ratio_target: f64,
}

/// Diagnostics over an exact count table. Errors when the table holds fewer
/// than three parity steps past mu.
pub fn convergence_report(
    table: &CountTable,
    consts: &AsymptoticConstants,
) -> Result<ConvergenceDiagnostics> {
    let mu = consts.mu;
    if table.n_max() < mu + 4 {
        let have = if table.n_max() < mu {
            0
        } else {
            (table.n_max() - mu) / 2 + 1
        };
        return Err(Error::TableTooShort { needed: 3, have });
    }
    let qf = consts.q as f64;
    let mut steps = Vec::new();
    let mut n = mu;
    while n <= table.n_max() {
        let count = table.count_at(n);
        let normalized = count as f64 * qf.powf(-((n as f64 - mu as f64) / 2.0));
        let scaled = count as f64 * qf.powf(-(n as f64) / 2.0);
        steps.push(StepDiagnostic {
            n,
            count,
            normalized_over_limit: normalized / consts.theorem_constant,
            scaled,
            within_bracket: scaled >= consts.bracket_lower && scaled <= consts.bracket_upper,
        });
        n += 2;
    }
    let last = steps.last().expect("at least three steps");
    let final_deviation = (last.normalized_over_limit - 1.0).abs();
    let n_max = last.n;
    let ratio_at = |lo: usize, steps_apart: u32| -> Option<f64> {
        if lo < mu {
            return None;
        }
        let denom = table.count_at(lo);
        if denom == 0 {
            return None;
        }
        Some(
            (table.count_at(n_max) as f64 / denom as f64)
                .powf(1.0 / steps_apart as f64),
        )
    };
    let ratio_last = n_max.checked_sub(2).and_then(|lo| ratio_at(lo, 1));
    let ratio_trend = n_max.checked_sub(6).and_then(|lo| ratio_at(lo, 3));
    Ok(ConvergenceDiagnostics {
        steps,
        final_deviation,
        ratio_last,
        ratio_trend,
        ratio_target: qf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counter::count_class;
    use crate::cover::TreePath;
    use crate::fixtures;
    use crate::words::{class_of_walk, SpanningTree, Walk};

    fn triangle_class(g: &RegularGraph) -> ClassDescriptor {
        class_of_walk(g, &Walk::from_vertices(g, &[0, 1, 2, 0]).unwrap()).unwrap()
    }

    #[test]
    fn k4_triangle_constants() {
        let g = fixtures::k4();
        let c = constants(&g, &triangle_class(&g));
        assert!((c.a - 3.0 / (4.0 * 2.0f64.powf(1.5))).abs() < 1e-15);
        assert!((c.a - 0.265165).abs() < 1e-6);
        assert!((c.theorem_constant - 0.75).abs() < 1e-15);
        assert!((c.residue - 0.191276).abs() < 1e-6);
        assert!((c.tau - std::f64::consts::TAU / 2.0f64.ln()).abs() < 1e-15);
        assert!(c.residue > 0.0);
        // arithmetic identities tying the constants together
        assert!((c.theorem_constant - c.a * 2.0f64.powf(1.5)).abs() < 1e-15);
        assert!((c.residue - c.a * 0.5 / 2.0f64.ln()).abs() < 1e-15);
        assert!((c.bracket_upper / c.bracket_lower - 2.0).abs() < 1e-15);
        assert!(!c.bipartite);
        assert!(c.bipartite_bracket.is_none());
    }

    #[test]
    fn squared_class_scales_the_growth_constant_only() {
        let g = fixtures::k4();
        let sq = class_of_walk(
            &g,
            &Walk::from_vertices(&g, &[0, 1, 2, 0, 1, 2, 0]).unwrap(),
        )
        .unwrap();
        assert_eq!((sq.mu, sq.nu), (6, 2));
        let c = constants(&g, &sq);
        // mu/nu is unchanged, so the normalized limit is unchanged while the
        // growth constant picks up q^{-3/2}
        assert!((c.theorem_constant - 0.75).abs() < 1e-15);
        assert!((c.a - 3.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn bipartite_bracket_on_k33() {
        let g = fixtures::k33();
        let k = class_of_walk(&g, &Walk::from_vertices(&g, &[0, 3, 1, 4, 0]).unwrap()).unwrap();
        assert_eq!((k.mu, k.nu), (4, 1));
        let (lower, upper) = bipartite_bounds(&g, &k).unwrap();
        assert!((lower - 1.0 / 18.0).abs() < 1e-15);
        assert!((upper - 2.0 / 9.0).abs() < 1e-15);
        assert!((upper / lower - 4.0).abs() < 1e-12);
        let c = constants(&g, &k);
        assert!(c.bipartite);
        assert_eq!(c.bipartite_bracket, Some((lower, upper)));
    }

    #[test]
    fn bipartite_bounds_reject_odd_cycles() {
        let g = fixtures::k4();
        let err = bipartite_bounds(&g, &triangle_class(&g)).unwrap_err();
        assert!(matches!(err, Error::NotBipartite));
    }

    #[test]
    fn k4_convergence_diagnostics() {
        let g = fixtures::k4();
        let st = SpanningTree::new(&g, 0);
        let k = triangle_class(&g);
        let table = count_class(&g, &st, &k, &TreePath::root(), 15, 1_000_000).unwrap();
        let c = constants(&g, &k);
        let d = convergence_report(&table, &c).unwrap();
        assert_eq!(d.steps.len(), 7); // n = 3, 5, ..., 15
        assert!(d.final_deviation < 0.11, "deviation {}", d.final_deviation);
        let trend = d.ratio_trend.unwrap();
        assert!((trend - 2.0).abs() / 2.0 < 0.05, "trend {trend}");
        // the scaled tail hugs the bracket but may overshoot it slightly at
        // finite n; widened containment holds
        for step in d.steps.iter().rev().take(2) {
            assert!(step.scaled >= c.bracket_lower * 0.9);
            assert!(step.scaled <= c.bracket_upper * 1.1, "scaled {}", step.scaled);
        }
    }

    #[test]
    fn short_table_is_rejected() {
        let g = fixtures::k4();
        let st = SpanningTree::new(&g, 0);
        let k = triangle_class(&g);
        let table = count_class(&g, &st, &k, &TreePath::root(), 3, 1_000_000).unwrap();
        let c = constants(&g, &k);
        assert!(matches!(
            convergence_report(&table, &c).unwrap_err(),
            Error::TableTooShort { .. }
        ));
    }

    #[test]
    fn k33_scaled_counts_stay_inside_the_bipartite_bracket() {
        let g = fixtures::k33();
        let st = SpanningTree::new(&g, 0);
        let k = class_of_walk(&g, &Walk::from_vertices(&g, &[0, 3, 1, 4, 0]).unwrap()).unwrap();
        let table = count_class(&g, &st, &k, &TreePath::root(), 16, 1_000_000).unwrap();
        let (lower, upper) = bipartite_bounds(&g, &k).unwrap();
        for n in [8usize, 10, 12, 14, 16] {
            let scaled = table.count_at(n) as f64 * 2.0f64.powf(-(n as f64) / 2.0);
            assert!(
                scaled >= lower * 0.9 && scaled <= upper * 1.1,
                "n = {n}: scaled {scaled} outside [{lower}, {upper}]"
            );
        }
    }
}
