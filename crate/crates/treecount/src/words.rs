//! Free-group word algebra for the deck group of a regular graph.
//!
//! A breadth-first spanning tree of the quotient graph G fixes an
//! isomorphism between the fundamental group of G and the free group on the
//! non-tree edges. Words translate to closed walks and back; conjugacy
//! classes are canonicalized as cyclically non-backtracking closed walks,
//! taken up to rotation. The arc-level canonical form is authoritative:
//! the displacement length mu is a walk length, and arc sequences carry no
//! spanning-tree artifacts.

use crate::error::{Error, Result};
use crate::graph::{ArcId, RegularGraph, Vertex};
use serde::Serialize;
use std::collections::{BTreeMap, VecDeque};

/// Rooted breadth-first spanning tree plus the induced free generators.
///
/// Generators are numbered 1..=rank over the non-tree edges in canonical
/// edge order; the forward arc of a generator is the arc from the lower to
/// the higher endpoint.
#[derive(Debug, Clone)]
pub struct SpanningTree {
    base: Vertex,
    parent_arc: Vec<Option<ArcId>>,
    depth: Vec<usize>,
    gen_of_arc: Vec<i64>,
    gen_arcs: Vec<ArcId>,
}

impl SpanningTree {
    pub fn new(g: &RegularGraph, base: Vertex) -> Self {
        let n = g.num_vertices();
        assert!(base < n, "base vertex out of range");
        let mut parent_arc = vec![None; n];
        let mut depth = vec![0usize; n];
        let mut in_tree = vec![false; g.num_arcs()];
        let mut seen = vec![false; n];
        seen[base] = true;
        let mut queue = VecDeque::from([base]);
        while let Some(v) = queue.pop_front() {
            for &a in g.out_arcs(v) {
                let w = g.terminus(a);
                if !seen[w] {
                    seen[w] = true;
                    parent_arc[w] = Some(a);
                    depth[w] = depth[v] + 1;
                    in_tree[a] = true;
                    in_tree[g.reversal(a)] = true;
                    queue.push_back(w);
                }
            }
        }
        let mut gen_of_arc = vec![0i64; g.num_arcs()];
        let mut gen_arcs = Vec::new();
        for e in 0..g.num_edges() {
            let fwd = 2 * e;
            if !in_tree[fwd] {
                gen_arcs.push(fwd);
                let idx = gen_arcs.len() as i64;
                gen_of_arc[fwd] = idx;
                gen_of_arc[fwd + 1] = -idx;
            }
        }
        debug_assert_eq!(gen_arcs.len(), g.rank());
        SpanningTree {
            base,
            parent_arc,
            depth,
            gen_of_arc,
            gen_arcs,
        }
    }

    pub fn base_vertex(&self) -> Vertex {
        self.base
    }

    /// Number of free generators = |E| - |V| + 1.
    pub fn rank(&self) -> usize {
        self.gen_arcs.len()
    }

    /// Forward arc of 1-based generator `gen`.
    pub fn generator_arc(&self, gen: usize) -> ArcId {
        self.gen_arcs[gen - 1]
    }

    /// Signed generator index of an arc: 0 for tree arcs.
    pub fn generator_of_arc(&self, a: ArcId) -> i64 {
        self.gen_of_arc[a]
    }

    /// Tree arcs from the base down to `v`.
    pub fn path_from_base(&self, g: &RegularGraph, v: Vertex) -> Vec<ArcId> {
        let mut arcs = Vec::with_capacity(self.depth[v]);
        let mut cur = v;
        while let Some(a) = self.parent_arc[cur] {
            arcs.push(a);
            cur = g.origin(a);
        }
        arcs.reverse();
        arcs
    }
}

/// A freely reduced word: signed 1-based generator indices, no adjacent
/// inverse pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Word(Vec<i64>);

/// Removes adjacent inverse pairs until none remain; confluent, so the
/// result is the unique normal form.
fn free_reduce(letters: impl IntoIterator<Item = i64>) -> Vec<i64> {
    let mut stack: Vec<i64> = Vec::new();
    for x in letters {
        if stack.last().is_some_and(|&y| y == -x) {
            stack.pop();
        } else {
            stack.push(x);
        }
    }
    stack
}

impl Word {
    /// Reduces a letter sequence, checking generator indices against `rank`.
    pub fn reduce(letters: &[i64], rank: usize) -> Result<Word> {
        for &x in letters {
            if x == 0 || x.unsigned_abs() as usize > rank {
                return Err(Error::UnknownGenerator { index: x, rank });
            }
        }
        Ok(Word(free_reduce(letters.iter().copied())))
    }

    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[i64] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&x| -x).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(free_reduce(
            self.0.iter().chain(other.0.iter()).copied(),
        ))
    }

    pub fn pow(&self, k: usize) -> Word {
        let mut out = Word::identity();
        for _ in 0..k {
            out = out.concat(self);
        }
        out
    }

    /// Conjugate `u * self * u^-1`.
    pub fn conjugate_by(&self, u: &Word) -> Word {
        u.concat(self).concat(&u.inverse())
    }

    /// Splits off conjugation layers: `self = conjugator * core * conjugator^-1`
    /// with `core` cyclically reduced (first letter is not the inverse of the
    /// last), of minimal word length in the conjugacy class.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let mut core = self.0.clone();
        let mut conjugator = Vec::new();
        while core.len() >= 2 && core[0] == -core[core.len() - 1] {
            conjugator.push(core[0]);
            core.pop();
            core.remove(0);
        }
        (Word(core), Word(conjugator))
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.0.iter().map(|x| format!("{x:+}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A walk in the quotient graph: consecutive arcs incident head-to-tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub origin: Vertex,
    pub arcs: Vec<ArcId>,
}

impl Walk {
    pub fn new(g: &RegularGraph, origin: Vertex, arcs: Vec<ArcId>) -> Result<Walk> {
        let mut at = origin;
        for &a in &arcs {
            if g.origin(a) != at {
                return Err(Error::InvalidWalk(format!(
                    "arc {a} does not start at vertex {at}"
                )));
            }
            at = g.terminus(a);
        }
        Ok(Walk { origin, arcs })
    }

    /// Builds a walk from a vertex sequence; adjacent pairs must be edges.
    pub fn from_vertices(g: &RegularGraph, vertices: &[Vertex]) -> Result<Walk> {
        if vertices.is_empty() {
            return Err(Error::InvalidWalk("empty vertex sequence".into()));
        }
        for &v in vertices {
            if v >= g.num_vertices() {
                return Err(Error::InvalidWalk(format!("vertex {v} out of range")));
            }
        }
        let mut arcs = Vec::with_capacity(vertices.len() - 1);
        for w in vertices.windows(2) {
            let a = g.arc_between(w[0], w[1]).ok_or_else(|| {
                Error::InvalidWalk(format!("{} {} is not an edge", w[0], w[1]))
            })?;
            arcs.push(a);
        }
        Ok(Walk {
            origin: vertices[0],
            arcs,
        })
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn terminus(&self, g: &RegularGraph) -> Vertex {
        self.arcs.last().map_or(self.origin, |&a| g.terminus(a))
    }

    pub fn is_closed(&self, g: &RegularGraph) -> bool {
        self.terminus(g) == self.origin
    }

    pub fn reversed(&self, g: &RegularGraph) -> Walk {
        Walk {
            origin: self.terminus(g),
            arcs: self.arcs.iter().rev().map(|&a| g.reversal(a)).collect(),
        }
    }

    pub fn vertices(&self, g: &RegularGraph) -> Vec<Vertex> {
        let mut out = vec![self.origin];
        out.extend(self.arcs.iter().map(|&a| g.terminus(a)));
        out
    }
}

/// Removes backtracks (an arc followed by its reversal) until none remain.
/// The result is the unique non-backtracking walk homotopic rel endpoints.
pub fn reduce_walk(g: &RegularGraph, walk: &Walk) -> Walk {
    let mut stack: Vec<ArcId> = Vec::with_capacity(walk.arcs.len());
    for &a in &walk.arcs {
        if stack.last().is_some_and(|&b| b == g.reversal(a)) {
            stack.pop();
        } else {
            stack.push(a);
        }
    }
    Walk {
        origin: walk.origin,
        arcs: stack,
    }
}

/// Reads off the word of a closed walk at the base vertex: tree arcs are
/// silent, generator arcs contribute their signed index.
pub fn word_of_walk(g: &RegularGraph, st: &SpanningTree, walk: &Walk) -> Result<Word> {
    if walk.origin != st.base_vertex() || !walk.is_closed(g) {
        return Err(Error::InvalidWalk(format!(
            "walk must be closed at base vertex {}",
            st.base_vertex()
        )));
    }
    let letters: Vec<i64> = walk
        .arcs
        .iter()
        .map(|&a| st.generator_of_arc(a))
        .filter(|&x| x != 0)
        .collect();
    Ok(Word(free_reduce(letters)))
}

/// Realizes a word as a backtrack-free closed walk at the base vertex.
pub fn walk_of_word(g: &RegularGraph, st: &SpanningTree, w: &Word) -> Walk {
    let mut arcs = Vec::new();
    for &letter in w.letters() {
        let a = if letter > 0 {
            st.generator_arc(letter as usize)
        } else {
            g.reversal(st.generator_arc((-letter) as usize))
        };
        arcs.extend(st.path_from_base(g, g.origin(a)));
        arcs.push(a);
        for &t in st.path_from_base(g, g.terminus(a)).iter().rev() {
            arcs.push(g.reversal(t));
        }
    }
    reduce_walk(
        g,
        &Walk {
            origin: st.base_vertex(),
            arcs,
        },
    )
}

/// Lexicographically minimal rotation of an arc sequence.
pub fn canonical_rotation(seq: &[ArcId]) -> Vec<ArcId> {
    if seq.is_empty() {
        return Vec::new();
    }
    let mut best: Option<Vec<ArcId>> = None;
    for i in 0..seq.len() {
        let rot: Vec<ArcId> = seq[i..].iter().chain(seq[..i].iter()).copied().collect();
        if best.as_ref().is_none_or(|b| rot < *b) {
            best = Some(rot);
        }
    }
    best.unwrap()
}

/// Minimal-period block of a sequence and the repetition count.
pub fn primitive_root<T: PartialEq + Clone>(seq: &[T]) -> Result<(Vec<T>, usize)> {
    let len = seq.len();
    if len == 0 {
        return Err(Error::Invalid("empty sequence has no primitive root".into()));
    }
    for period in 1..=len {
        if !len.is_multiple_of(period) {
            continue;
        }
        if (period..len).all(|i| seq[i] == seq[i - period]) {
            return Ok((seq[..period].to_vec(), len / period));
        }
    }
    unreachable!("period = len always matches");
}

/// Canonical data of a conjugacy class: the cyclically non-backtracking
/// closed walk in minimal rotation, its length mu, the multiplicity nu and
/// the primitive root walk of length mu / nu.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ClassDescriptor {
    pub cyclic_walk: Vec<ArcId>,
    pub mu: usize,
    pub nu: usize,
    pub primitive_walk: Vec<ArcId>,
}

impl ClassDescriptor {
    /// Vertex sequence of the canonical closed walk (closing vertex repeated).
    pub fn walk_vertices(&self, g: &RegularGraph) -> Vec<Vertex> {
        let mut out = vec![g.origin(self.cyclic_walk[0])];
        out.extend(self.cyclic_walk.iter().map(|&a| g.terminus(a)));
        out
    }

    /// Descriptor of the inverse class (the reversed walk).
    pub fn inverse(&self, g: &RegularGraph) -> ClassDescriptor {
        let rev: Vec<ArcId> = self
            .cyclic_walk
            .iter()
            .rev()
            .map(|&a| g.reversal(a))
            .collect();
        let canon = canonical_rotation(&rev);
        let (root, nu) = primitive_root(&canon).expect("nonempty");
        ClassDescriptor {
            mu: canon.len(),
            nu,
            primitive_walk: root,
            cyclic_walk: canon,
        }
    }

    /// A representative word of this class, read off at the base vertex.
    pub fn representative_word(&self, g: &RegularGraph, st: &SpanningTree) -> Word {
        let o = g.origin(self.cyclic_walk[0]);
        let mut arcs = st.path_from_base(g, o);
        arcs.extend(self.cyclic_walk.iter().copied());
        for &t in st.path_from_base(g, o).iter().rev() {
            arcs.push(g.reversal(t));
        }
        let walk = Walk {
            origin: st.base_vertex(),
            arcs,
        };
        word_of_walk(g, st, &walk).expect("closed at base by construction")
    }
}

/// Strips matching reversal pairs from the two ends of a reduced closed walk
/// until it is cyclically non-backtracking.
pub fn cyclic_strip(g: &RegularGraph, arcs: &[ArcId]) -> Vec<ArcId> {
    let mut lo = 0usize;
    let mut hi = arcs.len();
    while hi - lo >= 2 && arcs[hi - 1] == g.reversal(arcs[lo]) {
        lo += 1;
        hi -= 1;
    }
    arcs[lo..hi].to_vec()
}

/// Descriptor of the free homotopy class of a closed walk.
pub fn class_of_walk(g: &RegularGraph, walk: &Walk) -> Result<ClassDescriptor> {
    if !walk.is_closed(g) {
        return Err(Error::InvalidWalk("walk is not closed".into()));
    }
    let reduced = reduce_walk(g, walk);
    let core = cyclic_strip(g, &reduced.arcs);
    if core.is_empty() {
        return Err(Error::IdentityClass);
    }
    let canon = canonical_rotation(&core);
    let (root, nu) = primitive_root(&canon)?;
    Ok(ClassDescriptor {
        mu: canon.len(),
        nu,
        primitive_walk: root,
        cyclic_walk: canon,
    })
}

/// Descriptor of the conjugacy class of a nonidentity word.
pub fn class_of_word(g: &RegularGraph, st: &SpanningTree, w: &Word) -> Result<ClassDescriptor> {
    if w.is_identity() {
        return Err(Error::IdentityClass);
    }
    class_of_walk(g, &walk_of_word(g, st, w))
}

/// Whether two nonidentity words are conjugate in the deck group.
/// Inverses are not identified: the class of `w` is not the class of `w^-1`
/// in general.
pub fn same_class(g: &RegularGraph, st: &SpanningTree, w1: &Word, w2: &Word) -> Result<bool> {
    Ok(class_of_word(g, st, w1)? == class_of_word(g, st, w2)?)
}

/// All conjugacy classes with mu <= `mu_max`, each exactly once, sorted by
/// (mu, canonical walk). Enumerates cyclically non-backtracking closed walks
/// by depth-first extension and deduplicates on the canonical rotation.
pub fn enumerate_classes(g: &RegularGraph, mu_max: usize) -> Vec<ClassDescriptor> {
    let mut found: BTreeMap<(usize, Vec<ArcId>), ClassDescriptor> = BTreeMap::new();
    let mut path: Vec<ArcId> = Vec::new();
    for start in 0..g.num_vertices() {
        extend(g, start, start, mu_max, &mut path, &mut found);
    }
    found.into_values().collect()
}

fn extend(
    g: &RegularGraph,
    start: Vertex,
    at: Vertex,
    mu_max: usize,
    path: &mut Vec<ArcId>,
    found: &mut BTreeMap<(usize, Vec<ArcId>), ClassDescriptor>,
) {
    if at == start && !path.is_empty() && path[path.len() - 1] != g.reversal(path[0]) {
        let canon = canonical_rotation(path);
        found.entry((canon.len(), canon.clone())).or_insert_with(|| {
            let (root, nu) = primitive_root(&canon).expect("nonempty");
            ClassDescriptor {
                mu: canon.len(),
                nu,
                primitive_walk: root,
                cyclic_walk: canon,
            }
        });
    }
    if path.len() == mu_max {
        return;
    }
    for &a in g.out_arcs(at) {
        if path.last().is_some_and(|&b| a == g.reversal(b)) {
            continue;
        }
        path.push(a);
        extend(g, start, g.terminus(a), mu_max, path, found);
        path.pop();
    }
}
