//! Exact lattice-point counting in the universal cover.
//!
//! The deck action is free, so `T -> T x` is a bijection between the deck
//! group and the fiber orbit of the basepoint lift. Counting class elements
//! with displacement at most n therefore reduces to enumerating the
//! radius-n ball around the basepoint, keeping the fiber points over the
//! basepoint's projection, reading the unique group element off the
//! projected geodesic, and testing class membership on its canonical
//! cyclically reduced walk. Counts are exact integers; normalization to
//! floating point happens only in reporting.

use crate::cover::{
    apply_deck, ball_size, for_each_in_ball, tree_distance, TreePath,
};
use crate::error::{Error, Result};
use crate::graph::{RegularGraph, Vertex};
use crate::words::{
    canonical_rotation, cyclic_strip, ClassDescriptor, SpanningTree, Word,
};
use serde::Serialize;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountRow {
    pub n: usize,
    pub count: u64,
    /// count * q^{-(n - mu)/2}
    pub normalized: f64,
}

/// Cumulative counting table: rows[n].count = N(x, n) for n = 0..=n_max.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountTable {
    pub mu: usize,
    pub nu: usize,
    pub q: usize,
    pub num_vertices: usize,
    pub basepoint: String,
    pub rows: Vec<CountRow>,
}

impl CountTable {
    fn from_tallies(
        mu: usize,
        nu: usize,
        q: usize,
        num_vertices: usize,
        basepoint: String,
        tallies: &[u64],
    ) -> CountTable {
        let mut rows = Vec::with_capacity(tallies.len());
        let mut cumulative = 0u64;
        for (n, &t) in tallies.iter().enumerate() {
            cumulative += t;
            let normalized = if cumulative == 0 {
                0.0
            } else {
                cumulative as f64 * (q as f64).powf(-((n as f64 - mu as f64) / 2.0))
            };
            rows.push(CountRow {
                n,
                count: cumulative,
                normalized,
            });
        }
        CountTable {
            mu,
            nu,
            q,
            num_vertices,
            basepoint,
            rows,
        }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn count_at(&self, n: usize) -> u64 {
        self.rows[n].count
    }

    /// (distance, increment) pairs where the step function jumps.
    pub fn jumps(&self) -> Vec<(usize, u64)> {
        let mut out = Vec::new();
        let mut prev = 0u64;
        for row in &self.rows {
            if row.count > prev {
                out.push((row.n, row.count - prev));
                prev = row.count;
            }
        }
        out
    }

    /// CSV with header `n,count,normalized`; normalized printed with 12
    /// significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,count,normalized\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                row.n,
                row.count,
                format_sig12(row.normalized)
            ));
        }
        out
    }
}

pub fn format_sig12(x: f64) -> String {
    format!("{x:.11e}")
}

fn check_budget(q: usize, radius: usize, budget: u64) -> Result<()> {
    let needed = ball_size(q, radius);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

fn describe_basepoint(x: &TreePath) -> String {
    if x.depth() == 0 {
        "root".to_string()
    } else {
        format!(
            "root+[{}]",
            x.arcs()
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        )
    }
}

/// Exact N_K(x, n) for n = 0..=n_max by fiber enumeration.
pub fn count_class(
    g: &RegularGraph,
    st: &SpanningTree,
    k: &ClassDescriptor,
    x: &TreePath,
    n_max: usize,
    budget: u64,
) -> Result<CountTable> {
    check_budget(g.q(), n_max, budget)?;
    let base_vertex = x.project(g, st);
    // inverse of the basepoint path, appended to each fiber geodesic to
    // close the walk read off in the basepoint's frame
    let inv_px: Vec<usize> = x.arcs().iter().rev().map(|&a| g.reversal(a)).collect();
    let mut tallies = vec![0u64; n_max + 1];
    for_each_in_ball(g, st, x, n_max, |path, d| {
        if d == 0 {
            return; // identity element, not a translation
        }
        let at = path.last().map_or(st.base_vertex(), |&a| g.terminus(a));
        if at != base_vertex {
            return;
        }
        let closed = crate::cover::reduce_concat(g, path, &inv_px);
        let core = cyclic_strip(g, &closed);
        if core.len() == k.mu && canonical_rotation(&core) == k.cyclic_walk {
            tallies[d] += 1;
        }
    });
    Ok(CountTable::from_tallies(
        k.mu,
        k.nu,
        g.q(),
        g.num_vertices(),
        describe_basepoint(x),
        &tallies,
    ))
}

/// Exact full orbit count N_Gamma(x, y, n): fiber points over `target`
/// inside the radius-n ball around `x`.
pub fn count_orbit(
    g: &RegularGraph,
    st: &SpanningTree,
    x: &TreePath,
    target: Vertex,
    n_max: usize,
    budget: u64,
) -> Result<CountTable> {
    check_budget(g.q(), n_max, budget)?;
    if target >= g.num_vertices() {
        return Err(Error::Invalid(format!("vertex {target} out of range")));
    }
    let mut tallies = vec![0u64; n_max + 1];
    for_each_in_ball(g, st, x, n_max, |path, d| {
        let at = path.last().map_or(st.base_vertex(), |&a| g.terminus(a));
        if at == target {
            tallies[d] += 1;
        }
    });
    Ok(CountTable::from_tallies(
        0,
        1,
        g.q(),
        g.num_vertices(),
        describe_basepoint(x),
        &tallies,
    ))
}

/// Result of the conjugate-enumeration oracle.
#[derive(Debug, Clone, Serialize)]
pub struct OracleCount {
    pub table: CountTable,
    /// True when the table did not change over the last two conjugator-depth
    /// increments; completeness is reported, never assumed.
    pub stable: bool,
    pub conjugator_depth: usize,
    pub distinct_conjugates: usize,
}

/// Independent verification oracle: enumerate conjugators u up to
/// `conjugator_depth`, form u w u^-1, deduplicate reduced words, and
/// tabulate displacements. Sound by construction (every tallied element is
/// in K); complete only in the limit.
pub fn oracle_count(
    g: &RegularGraph,
    st: &SpanningTree,
    k: &ClassDescriptor,
    x: &TreePath,
    n_max: usize,
    conjugator_depth: usize,
    budget: u64,
) -> Result<OracleCount> {
    let rank = st.rank() as i64;
    // closed-form count of reduced conjugator words
    let mut word_count = 1u128;
    let mut layer = 1u128;
    for len in 1..=conjugator_depth {
        layer *= if len == 1 {
            2 * rank as u128
        } else {
            2 * rank as u128 - 1
        };
        word_count += layer;
    }
    if word_count > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: word_count,
            budget,
        });
    }

    let rep = k.representative_word(g, st);
    // conjugate letters -> (displacement, first conjugator depth it appears)
    let mut seen: HashMap<Vec<i64>, (usize, usize)> = HashMap::new();
    let mut letters: Vec<i64> = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        g: &RegularGraph,
        st: &SpanningTree,
        rep: &Word,
        x: &TreePath,
        rank: i64,
        depth_max: usize,
        letters: &mut Vec<i64>,
        seen: &mut HashMap<Vec<i64>, (usize, usize)>,
    ) {
        let u = Word::reduce(letters, rank as usize).expect("letters in range");
        let conj = rep.conjugate_by(&u);
        let entry = seen.entry(conj.letters().to_vec());
        entry.or_insert_with(|| {
            let d = tree_distance(x, &apply_deck(g, st, &conj, x));
            (d, letters.len())
        });
        if letters.len() == depth_max {
            return;
        }
        for gen in 1..=rank {
            for letter in [gen, -gen] {
                if letters.last().is_some_and(|&l| l == -letter) {
                    continue;
                }
                letters.push(letter);
                recurse(g, st, rep, x, rank, depth_max, letters, seen);
                letters.pop();
            }
        }
    }
    recurse(
        g,
        st,
        &rep,
        x,
        rank,
        conjugator_depth,
        &mut letters,
        &mut seen,
    );

    let table_at = |depth_limit: usize| -> Vec<u64> {
        let mut tallies = vec![0u64; n_max + 1];
        for &(d, first_depth) in seen.values() {
            if first_depth <= depth_limit && d <= n_max {
                tallies[d] += 1;
            }
        }
        tallies
    };
    let full = table_at(conjugator_depth);
    let stable = conjugator_depth >= 2
        && table_at(conjugator_depth - 1) == full
        && table_at(conjugator_depth - 2) == full;

    Ok(OracleCount {
        table: CountTable::from_tallies(
            k.mu,
            k.nu,
            g.q(),
            g.num_vertices(),
            describe_basepoint(x),
            &full,
        ),
        stable,
        conjugator_depth,
        distinct_conjugates: seen.len(),
    })
}

/// Parity and monotonicity contract of a class count table: counts are
/// non-decreasing and change only at n with n - mu even.
pub fn check_step_structure(table: &CountTable) -> bool {
    let mut prev = 0u64;
    for row in &table.rows {
        if row.count < prev {
            return false;
        }
        if row.count != prev && (row.n < table.mu || !(row.n - table.mu).is_multiple_of(2)) {
            return false;
        }
        prev = row.count;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::words::{class_of_walk, enumerate_classes, word_of_walk, Walk};

    fn k4_setting() -> (RegularGraph, SpanningTree) {
        let g = fixtures::k4();
        let st = SpanningTree::new(&g, 0);
        (g, st)
    }

    fn triangle_class(g: &RegularGraph) -> ClassDescriptor {
        class_of_walk(g, &Walk::from_vertices(g, &[0, 1, 2, 0]).unwrap()).unwrap()
    }

    #[test]
    fn zero_below_mu() {
        let (g, st) = k4_setting();
        let k = triangle_class(&g);
        let table = count_class(&g, &st, &k, &TreePath::root(), 2, 1_000_000).unwrap();
        assert!(table.rows.iter().all(|r| r.count == 0));
    }

    #[test]
    fn budget_is_checked_before_enumeration() {
        let (g, st) = k4_setting();
        let k = triangle_class(&g);
        let err = count_class(&g, &st, &k, &TreePath::root(), 30, 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn k4_triangle_counts_match_frozen_values() {
        // frozen from the conjugate-enumeration oracle (independent route)
        let (g, st) = k4_setting();
        let k = triangle_class(&g);
        let table = count_class(&g, &st, &k, &TreePath::root(), 15, 1_000_000).unwrap();
        let expected: &[(usize, u64)] = &[
            (3, 1),
            (5, 1),
            (7, 3),
            (9, 7),
            (11, 11),
            (13, 23),
            (15, 51),
        ];
        for &(n, c) in expected {
            assert_eq!(table.count_at(n), c, "n = {n}");
        }
        assert!(check_step_structure(&table));
    }

    #[test]
    fn oracle_matches_fiber_count_on_k4() {
        let (g, st) = k4_setting();
        let k = triangle_class(&g);
        let exact = count_class(&g, &st, &k, &TreePath::root(), 9, 1_000_000).unwrap();
        let oracle =
            oracle_count(&g, &st, &k, &TreePath::root(), 9, 7, 10_000_000).unwrap();
        assert!(oracle.stable, "oracle counts did not stabilize");
        assert_eq!(exact.rows, oracle.table.rows);
    }

    #[test]
    fn oracle_depth_zero_counts_only_the_representative() {
        let (g, st) = k4_setting();
        let k = triangle_class(&g);
        let oracle =
            oracle_count(&g, &st, &k, &TreePath::root(), 9, 0, 10_000_000).unwrap();
        assert_eq!(oracle.distinct_conjugates, 1);
        assert_eq!(oracle.table.count_at(3), 1);
        assert!(!oracle.stable);
    }

    #[test]
    fn centralizer_collapses_conjugator_cosets() {
        let (g, st) = k4_setting();
        let k = triangle_class(&g);
        let depth = 5;
        let oracle =
            oracle_count(&g, &st, &k, &TreePath::root(), 9, depth, 10_000_000).unwrap();
        // number of reduced words of length <= depth over rank 3
        let mut words = 1usize;
        let mut layer = 1usize;
        for len in 1..=depth {
            layer *= if len == 1 { 6 } else { 5 };
            words += layer;
        }
        assert!(oracle.distinct_conjugates < words);
    }

    #[test]
    fn distinct_classes_have_disjoint_tallies() {
        let (g, st) = k4_setting();
        let classes = enumerate_classes(&g, 3);
        assert_eq!(classes.len(), 8);
        let n_max = 7;
        let mut total_at = vec![0u64; n_max + 1];
        for k in &classes {
            let t = count_class(&g, &st, k, &TreePath::root(), n_max, 1_000_000).unwrap();
            for (n, slot) in total_at.iter_mut().enumerate() {
                *slot += t.count_at(n);
            }
        }
        // bookkeeping closure: mu=3 classes together account for exactly the
        // fiber points whose cyclic core has length 3
        let mut expected = vec![0u64; n_max + 1];
        let x = TreePath::root();
        for_each_in_ball(&g, &st, &x, n_max, |path, d| {
            if d == 0 {
                return;
            }
            let at = path.last().map_or(0, |&a| g.terminus(a));
            if at != 0 {
                return;
            }
            let core = cyclic_strip(&g, path);
            if core.len() == 3 {
                for slot in expected.iter_mut().skip(d) {
                    *slot += 1;
                }
            }
        });
        assert_eq!(total_at, expected);
    }

    #[test]
    fn orbit_count_examples() {
        let (g, st) = k4_setting();
        // n = 0: the identity only
        let t = count_orbit(&g, &st, &TreePath::root(), 0, 0, 1000).unwrap();
        assert_eq!(t.count_at(0), 1);
        // fibers partition the ball
        let n = 8;
        let mut total = 0u64;
        for target in 0..4 {
            total += count_orbit(&g, &st, &TreePath::root(), target, n, 1_000_000)
                .unwrap()
                .count_at(n);
        }
        assert_eq!(total as u128, ball_size(2, n));
        // equidistribution trend toward |B_n| / |V|
        let n = 16;
        let t = count_orbit(&g, &st, &TreePath::root(), 0, n, 1_000_000).unwrap();
        let ratio = t.count_at(n) as f64 * 4.0 / ball_size(2, n) as f64;
        assert!((ratio - 1.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn normalized_column_agrees_across_basepoints() {
        let (g, st) = k4_setting();
        let k = triangle_class(&g);
        let n_max = 15;
        let t1 = count_class(&g, &st, &k, &TreePath::root(), n_max, 1_000_000).unwrap();
        let off = TreePath::from_walk(
            &g,
            &st,
            &Walk::from_vertices(&g, &[0, 3, 1]).unwrap(),
        )
        .unwrap();
        let t2 = count_class(&g, &st, &k, &off, n_max, 1_000_000).unwrap();
        let a = t1.rows[n_max].normalized;
        let b = t2.rows[n_max].normalized;
        assert!((a - b).abs() / a < 0.25, "normalized {a} vs {b}");
        assert!(check_step_structure(&t2));
    }

    #[test]
    fn count_is_conjugation_invariant_in_the_descriptor() {
        let (g, st) = k4_setting();
        let tri = Walk::from_vertices(&g, &[0, 1, 2, 0]).unwrap();
        let w = word_of_walk(&g, &st, &tri).unwrap();
        let u = Word::reduce(&[3, -1], 3).unwrap();
        let k1 = crate::words::class_of_word(&g, &st, &w).unwrap();
        let k2 = crate::words::class_of_word(&g, &st, &w.conjugate_by(&u)).unwrap();
        assert_eq!(k1, k2);
        let t1 = count_class(&g, &st, &k1, &TreePath::root(), 9, 1_000_000).unwrap();
        let t2 = count_class(&g, &st, &k2, &TreePath::root(), 9, 1_000_000).unwrap();
        assert_eq!(t1.rows, t2.rows);
    }

    #[test]
    fn csv_shape() {
        let (g, st) = k4_setting();
        let k = triangle_class(&g);
        let table = count_class(&g, &st, &k, &TreePath::root(), 5, 1_000_000).unwrap();
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("n,count,normalized"));
        assert_eq!(lines.count(), 6);
    }
}
