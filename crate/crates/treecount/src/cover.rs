//! The universal cover of a regular graph is the (q+1)-regular tree.
//!
//! Tree vertices are materialized as non-backtracking arc paths from the
//! root lift of the base vertex; distance and the deck action are then pure
//! sequence operations. Ball enumeration is depth-first with an explicit
//! path stack: trees have no cycles, so no visited set is needed and memory
//! stays proportional to the radius.

use crate::error::{Error, Result};
use crate::graph::{ArcId, RegularGraph, Vertex};
use crate::words::{reduce_walk, walk_of_word, SpanningTree, Walk, Word};

/// A vertex of the universal cover: the non-backtracking walk from the root
/// lift of the base vertex down to it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct TreePath {
    arcs: Vec<ArcId>,
}

impl TreePath {
    /// The root lift of the base vertex.
    pub fn root() -> TreePath {
        TreePath { arcs: Vec::new() }
    }

    /// Wraps an arc sequence, checking incidence at the base vertex and the
    /// non-backtracking condition.
    pub fn new(g: &RegularGraph, st: &SpanningTree, arcs: Vec<ArcId>) -> Result<TreePath> {
        let mut at = st.base_vertex();
        let mut prev: Option<ArcId> = None;
        for &a in &arcs {
            if a >= g.num_arcs() || g.origin(a) != at {
                return Err(Error::InvalidWalk(format!(
                    "arc {a} does not continue the path at vertex {at}"
                )));
            }
            if prev.is_some_and(|p| a == g.reversal(p)) {
                return Err(Error::InvalidWalk(format!("backtrack at arc {a}")));
            }
            at = g.terminus(a);
            prev = Some(a);
        }
        Ok(TreePath { arcs })
    }

    /// Lifts a walk starting at the base vertex, removing backtracks.
    pub fn from_walk(g: &RegularGraph, st: &SpanningTree, walk: &Walk) -> Result<TreePath> {
        if walk.origin != st.base_vertex() {
            return Err(Error::InvalidWalk(format!(
                "walk must start at base vertex {}",
                st.base_vertex()
            )));
        }
        let reduced = reduce_walk(g, walk);
        Ok(TreePath { arcs: reduced.arcs })
    }

    pub fn arcs(&self) -> &[ArcId] {
        &self.arcs
    }

    pub fn depth(&self) -> usize {
        self.arcs.len()
    }

    /// Projection to the quotient graph.
    pub fn project(&self, g: &RegularGraph, st: &SpanningTree) -> Vertex {
        self.arcs
            .last()
            .map_or(st.base_vertex(), |&a| g.terminus(a))
    }
}

/// d(p, r) = |p| + |r| - 2 * (longest common prefix).
pub fn tree_distance(p: &TreePath, r: &TreePath) -> usize {
    let common = p
        .arcs
        .iter()
        .zip(r.arcs.iter())
        .take_while(|(a, b)| a == b)
        .count();
    p.arcs.len() + r.arcs.len() - 2 * common
}

/// Concatenates two arc sequences (each non-backtracking) and cancels
/// reversal pairs at the junction.
pub fn reduce_concat(g: &RegularGraph, left: &[ArcId], right: &[ArcId]) -> Vec<ArcId> {
    let mut out = left.to_vec();
    for &a in right {
        if out.last().is_some_and(|&b| b == g.reversal(a)) {
            out.pop();
        } else {
            out.push(a);
        }
    }
    out
}

/// The deck transformation of `w` applied to `p`: the lifted closed walk of
/// `w` is prepended to `p` and the junction reduced. Satisfies the action
/// laws apply(u * w, p) = apply(u, apply(w, p)) and apply(e, p) = p.
pub fn apply_deck(g: &RegularGraph, st: &SpanningTree, w: &Word, p: &TreePath) -> TreePath {
    let lift = walk_of_word(g, st, w);
    TreePath {
        arcs: reduce_concat(g, &lift.arcs, &p.arcs),
    }
}

/// d(p, w p).
pub fn displacement(g: &RegularGraph, st: &SpanningTree, w: &Word, p: &TreePath) -> usize {
    tree_distance(p, &apply_deck(g, st, w, p))
}

/// Distance from `p` to the axis of `w`, via d(x, Tx) = mu + 2 delta.
/// A parity violation indicates an internal bug and is surfaced hard.
pub fn axis_delta(
    g: &RegularGraph,
    st: &SpanningTree,
    w: &Word,
    p: &TreePath,
    mu: usize,
) -> Result<usize> {
    let d = displacement(g, st, w, p);
    if d < mu || !(d - mu).is_multiple_of(2) {
        return Err(Error::ParityViolation {
            displacement: d,
            mu,
        });
    }
    Ok((d - mu) / 2)
}

/// Visits every tree vertex within `radius` of `center` exactly once,
/// passing the root-based arc path and the distance from the center.
/// Depth-first; O(radius) memory.
pub fn for_each_in_ball<F: FnMut(&[ArcId], usize)>(
    g: &RegularGraph,
    st: &SpanningTree,
    center: &TreePath,
    radius: usize,
    mut visit: F,
) {
    let mut path = center.arcs.to_vec();
    let start = center.project(g, st);
    visit(&path, 0);
    dfs(g, &mut path, start, None, 0, radius, &mut visit);
}

#[allow(clippy::too_many_arguments)]
fn dfs<F: FnMut(&[ArcId], usize)>(
    g: &RegularGraph,
    path: &mut Vec<ArcId>,
    at: Vertex,
    arrived_by: Option<ArcId>,
    depth: usize,
    radius: usize,
    visit: &mut F,
) {
    if depth == radius {
        return;
    }
    for &a in g.out_arcs(at) {
        // the reversal of the arc we came in on leads back toward the center
        if arrived_by.is_some_and(|t| a == g.reversal(t)) {
            continue;
        }
        let popped = path.last().is_some_and(|&b| b == g.reversal(a));
        if popped {
            path.pop();
        } else {
            path.push(a);
        }
        visit(path, depth + 1);
        dfs(g, path, g.terminus(a), Some(a), depth + 1, radius, visit);
        if popped {
            path.push(g.reversal(a));
        } else {
            path.pop();
        }
    }
}

/// Exact sphere sizes |S_n(center)| for n = 0..=radius.
pub fn sphere_sizes(
    g: &RegularGraph,
    st: &SpanningTree,
    center: &TreePath,
    radius: usize,
) -> Vec<u64> {
    let mut sizes = vec![0u64; radius + 1];
    for_each_in_ball(g, st, center, radius, |_, d| sizes[d] += 1);
    sizes
}

/// Closed-form ball size 1 + (q+1)(q^r - 1)/(q - 1).
pub fn ball_size(q: usize, radius: usize) -> u128 {
    let q = q as u128;
    let mut sphere = 1u128;
    let mut total = 1u128;
    for n in 1..=radius {
        sphere = if n == 1 { q + 1 } else { sphere * q };
        total += sphere;
    }
    total
}

/// Distance-ordered enumeration of a ball, sphere by sphere.
///
/// Each sphere is regenerated by a bounded depth-first pass, so memory is
/// one sphere at a time; intended for moderate radii. Yields `(distance,
/// path)` with distances non-decreasing.
pub struct BallIterator<'a> {
    g: &'a RegularGraph,
    st: &'a SpanningTree,
    center: TreePath,
    radius: usize,
    current_distance: usize,
    sphere: std::vec::IntoIter<TreePath>,
}

impl<'a> BallIterator<'a> {
    pub fn new(
        g: &'a RegularGraph,
        st: &'a SpanningTree,
        center: TreePath,
        radius: usize,
    ) -> Self {
        BallIterator {
            g,
            st,
            center,
            radius,
            current_distance: 0,
            sphere: vec![TreePath::root()].into_iter(), // replaced on first next()
        }
        .primed()
    }

    fn primed(mut self) -> Self {
        self.sphere = vec![self.center.clone()].into_iter();
        self
    }

    fn load_sphere(&mut self, d: usize) {
        let mut out = Vec::new();
        for_each_in_ball(self.g, self.st, &self.center, d, |path, dist| {
            if dist == d {
                out.push(TreePath {
                    arcs: path.to_vec(),
                });
            }
        });
        self.sphere = out.into_iter();
    }
}

impl Iterator for BallIterator<'_> {
    type Item = (usize, TreePath);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(p) = self.sphere.next() {
                return Some((self.current_distance, p));
            }
            if self.current_distance == self.radius {
                return None;
            }
            self.current_distance += 1;
            self.load_sphere(self.current_distance);
        }
    }
}
