//! Finite simplicial trees: arcs, hulls, bridges, projections, centres and
//! a checker for the backtracking lemma on vertex sequences.
//!
//! Arcs are closed vertex sequences and all intersections are taken on
//! vertex sets, which is exact for simplicial arcs.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree has no vertices")]
    Empty,
    #[error("unknown vertex {0}")]
    UnknownVertex(u32),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(u32),
    #[error("edge ({0}, {1}) is a loop or repeated")]
    BadEdge(u32, u32),
    #[error("expected {expected} edges for {vertices} vertices, found {found}")]
    EdgeCount { vertices: usize, expected: usize, found: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertex set does not span a subtree")]
    NotSubtree,
    #[error("subtrees intersect")]
    Intersecting,
    #[error("sequence needs at least {0} vertices")]
    TooShort(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTree {
    ids: Vec<u32>,
    index: BTreeMap<u32, usize>,
    adj: Vec<Vec<usize>>,
    parent: Vec<usize>,
    depth: Vec<usize>,
}

/// Midpoint of a diametral pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Center {
    Vertex(u32),
    Edge(u32, u32),
}

impl FiniteTree {
    pub fn new(vertices: &[u32], edges: &[(u32, u32)]) -> Result<Self, TreeError> {
        if vertices.is_empty() {
            return Err(TreeError::Empty);
        }
        let mut index = BTreeMap::new();
        for (i, &v) in vertices.iter().enumerate() {
            if index.insert(v, i).is_some() {
                return Err(TreeError::DuplicateVertex(v));
            }
        }
        if edges.len() != vertices.len() - 1 {
            return Err(TreeError::EdgeCount {
                vertices: vertices.len(),
                expected: vertices.len() - 1,
                found: edges.len(),
            });
        }
        let mut adj = vec![Vec::new(); vertices.len()];
        let mut seen = BTreeSet::new();
        for &(a, b) in edges {
            let ia = *index.get(&a).ok_or(TreeError::UnknownVertex(a))?;
            let ib = *index.get(&b).ok_or(TreeError::UnknownVertex(b))?;
            if ia == ib || !seen.insert((ia.min(ib), ia.max(ib))) {
                return Err(TreeError::BadEdge(a, b));
            }
            adj[ia].push(ib);
            adj[ib].push(ia);
        }
        let n = vertices.len();
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![usize::MAX; n];
        depth[0] = 0;
        parent[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        if depth.contains(&usize::MAX) {
            return Err(TreeError::Disconnected);
        }
        Ok(FiniteTree { ids: vertices.to_vec(), index, adj, parent, depth })
    }

    /// Tree with vertices `0..n` whose edges are given by `parents[i]` for
    /// vertex `i + 1`.
    pub fn from_parents(parents: &[u32]) -> Result<Self, TreeError> {
        let n = parents.len() as u32 + 1;
        let vs: Vec<u32> = (0..n).collect();
        let es: Vec<(u32, u32)> = parents.iter().enumerate().map(|(i, &p)| (p, i as u32 + 1)).collect();
        Self::new(&vs, &es)
    }

    /// A uniformly random recursive tree on `n` vertices labelled `0..n`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        let parents: Vec<u32> = (1..n.max(1)).map(|i| rng.random_range(0..i as u32)).collect();
        Self::from_parents(&parents).expect("recursive tree")
    }

    pub fn vertices(&self) -> &[u32] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn edges(&self) -> Vec<(u32, u32)> {
        (1..self.len()).map(|i| (self.ids[self.parent[i]], self.ids[i])).collect()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.index.contains_key(&v)
    }

    pub fn neighbors(&self, v: u32) -> Result<Vec<u32>, TreeError> {
        let i = self.idx(v)?;
        Ok(self.adj[i].iter().map(|&j| self.ids[j]).collect())
    }

    fn idx(&self, v: u32) -> Result<usize, TreeError> {
        self.index.get(&v).copied().ok_or(TreeError::UnknownVertex(v))
    }

    fn path_idx(&self, mut a: usize, mut b: usize) -> Vec<usize> {
        let mut up = Vec::new();
        let mut down = Vec::new();
        while self.depth[a] > self.depth[b] {
            up.push(a);
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            down.push(b);
            b = self.parent[b];
        }
        while a != b {
            up.push(a);
            down.push(b);
            a = self.parent[a];
            b = self.parent[b];
        }
        up.push(a);
        up.extend(down.into_iter().rev());
        up
    }

    pub fn distance(&self, u: u32, v: u32) -> Result<usize, TreeError> {
        Ok(self.ft_path(u, v)?.len() - 1)
    }

    /// The arc from `u` to `v`, endpoints included.
    pub fn ft_path(&self, u: u32, v: u32) -> Result<Vec<u32>, TreeError> {
        let (a, b) = (self.idx(u)?, self.idx(v)?);
        Ok(self.path_idx(a, b).into_iter().map(|i| self.ids[i]).collect())
    }

    /// Smallest subtree containing `s`.
    pub fn ft_hull(&self, s: &BTreeSet<u32>) -> Result<BTreeSet<u32>, TreeError> {
        let mut out = BTreeSet::new();
        let Some(&first) = s.iter().next() else {
            return Ok(out);
        };
        for &v in s {
            out.extend(self.ft_path(first, v)?);
        }
        Ok(out)
    }

    /// Whether `s` is nonempty and spans a connected subgraph.
    pub fn is_subtree(&self, s: &BTreeSet<u32>) -> Result<bool, TreeError> {
        for &v in s {
            self.idx(v)?;
        }
        Ok(!s.is_empty() && self.ft_hull(s)?.len() == s.len())
    }

    /// Closest vertex of the subtree `a` to `x`.
    pub fn ft_projection(&self, x: u32, a: &BTreeSet<u32>) -> Result<u32, TreeError> {
        self.idx(x)?;
        if !self.is_subtree(a)? {
            return Err(TreeError::NotSubtree);
        }
        let anchor = *a.iter().next().unwrap();
        let path = self.ft_path(x, anchor)?;
        Ok(*path.iter().find(|v| a.contains(v)).unwrap())
    }

    /// The smallest arc joining disjoint subtrees `a` and `b`, from `a` to `b`.
    pub fn ft_bridge(&self, a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> Result<Vec<u32>, TreeError> {
        if !self.is_subtree(a)? || !self.is_subtree(b)? {
            return Err(TreeError::NotSubtree);
        }
        if a.intersection(b).next().is_some() {
            return Err(TreeError::Intersecting);
        }
        let x = self.ft_projection(*b.iter().next().unwrap(), a)?;
        let y = self.ft_projection(x, b)?;
        self.ft_path(x, y)
    }

    /// Midpoint of a diametral pair of the hull of `s`.
    pub fn ft_center(&self, s: &BTreeSet<u32>) -> Result<Center, TreeError> {
        let Some(&first) = s.iter().next() else {
            return Err(TreeError::Empty);
        };
        let far = |from: u32| -> Result<u32, TreeError> {
            let mut best = (0, from);
            for &v in s {
                let d = self.distance(from, v)?;
                if d > best.0 {
                    best = (d, v);
                }
            }
            Ok(best.1)
        };
        let p = far(first)?;
        let q = far(p)?;
        let path = self.ft_path(p, q)?;
        let d = path.len() - 1;
        Ok(if d % 2 == 0 {
            Center::Vertex(path[d / 2])
        } else {
            let (x, y) = (path[d / 2], path[d / 2 + 1]);
            Center::Edge(x.min(y), x.max(y))
        })
    }

    fn arc_set(&self, u: u32, v: u32) -> Result<BTreeSet<u32>, TreeError> {
        Ok(self.ft_path(u, v)?.into_iter().collect())
    }

    /// Checks the hypotheses of the backtracking lemma on `seq` and, when
    /// they hold, its conclusion and the induction property of its proof.
    pub fn check_backtracking(&self, seq: &[u32]) -> Result<BacktrackReport, TreeError> {
        if seq.len() < 2 {
            return Err(TreeError::TooShort(2));
        }
        let arcs: Vec<BTreeSet<u32>> =
            seq.windows(2).map(|w| self.arc_set(w[0], w[1])).collect::<Result<_, _>>()?;
        // arcs[k] = [u_k, u_{k+1}]
        let mut report = BacktrackReport::default();
        for (i, w) in seq.windows(2).enumerate() {
            if w[0] == w[1] {
                report.distinct.push(i);
            }
        }
        for i in 1..arcs.len() {
            let (prev, next) = (&arcs[i - 1], &arcs[i]);
            let meet: BTreeSet<u32> = prev.intersection(next).copied().collect();
            if meet.len() >= prev.len() || meet.len() >= next.len() {
                report.strict_nesting.push(i);
            }
        }
        for i in 1..arcs.len().saturating_sub(1) {
            let triple = arcs[i - 1].iter().any(|v| arcs[i].contains(v) && arcs[i + 1].contains(v));
            if triple {
                report.triple_empty.push(i);
            }
        }
        if !report.hypotheses_hold() {
            return Ok(report);
        }
        // conclusion: [u_{i-1},u_i] ∩ [u_{j-1},u_j] = ∅ for |j - i| ≥ 2
        for i in 0..arcs.len() {
            for j in i + 2..arcs.len() {
                if arcs[i].intersection(&arcs[j]).next().is_some() {
                    report.conclusion_violations.push((i + 1, j + 1));
                }
            }
        }
        // P_i: u_{i+1} ∉ C_i and [u_i, u_{i+1}] ∩ C_{i-1} = ∅
        let mut hull: BTreeSet<u32> = BTreeSet::from([seq[0]]);
        let mut hulls = vec![hull.clone()];
        for &u in &seq[1..] {
            hull.insert(u);
            hull = self.ft_hull(&hull)?;
            hulls.push(hull.clone());
        }
        for i in 1..seq.len() - 1 {
            let fresh = !hulls[i].contains(&seq[i + 1]);
            let apart = arcs[i].intersection(&hulls[i - 1]).next().is_none();
            if !(fresh && apart) {
                report.induction_failures.push(i);
            }
        }
        report.conclusion_checked = true;
        Ok(report)
    }
}

/// Outcome of [`FiniteTree::check_backtracking`]. Index lists name the
/// offending positions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BacktrackReport {
    /// Hypothesis (1) failures: `u_i = u_{i+1}`.
    pub distinct: Vec<usize>,
    /// Hypothesis (2) failures at interior index `i`.
    pub strict_nesting: Vec<usize>,
    /// Hypothesis (3) failures at index `i`.
    pub triple_empty: Vec<usize>,
    pub conclusion_checked: bool,
    /// Pairs `(i, j)` with `[u_{i-1},u_i] ∩ [u_{j-1},u_j] ≠ ∅`, `j - i ≥ 2`.
    pub conclusion_violations: Vec<(usize, usize)>,
    pub induction_failures: Vec<usize>,
}

impl BacktrackReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.distinct.is_empty() && self.strict_nesting.is_empty() && self.triple_empty.is_empty()
    }

    pub fn lemma_holds(&self) -> bool {
        !self.hypotheses_hold() || (self.conclusion_violations.is_empty() && self.induction_failures.is_empty())
    }
}

/// Tally of a greedy sampling run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SamplerStats {
    pub samples: usize,
    pub steps: usize,
    pub candidates_checked: usize,
    pub candidates_accepted: usize,
}

impl SamplerStats {
    /// Fraction of candidate extensions that preserved the hypotheses.
    pub fn acceptance_rate(&self) -> f64 {
        if self.candidates_checked == 0 {
            0.0
        } else {
            self.candidates_accepted as f64 / self.candidates_checked as f64
        }
    }
}

/// Grows a sequence satisfying the lemma's hypotheses, choosing each next
/// vertex uniformly among the extensions that keep them true. Stops at
/// `max_arcs` arcs or when no extension exists.
pub fn sample_sequence<R: Rng + ?Sized>(
    t: &FiniteTree,
    rng: &mut R,
    max_arcs: usize,
    stats: &mut SamplerStats,
) -> Vec<u32> {
    let vs = t.vertices();
    let u0 = vs[rng.random_range(0..vs.len())];
    let mut seq = vec![u0];
    if vs.len() < 2 {
        return seq;
    }
    while seq.len() <= max_arcs {
        let mut ok = Vec::new();
        for &v in vs {
            stats.candidates_checked += 1;
            if extension_ok(t, &seq, v) {
                ok.push(v);
            }
        }
        stats.candidates_accepted += ok.len();
        if ok.is_empty() {
            break;
        }
        seq.push(ok[rng.random_range(0..ok.len())]);
        stats.steps += 1;
    }
    stats.samples += 1;
    seq
}

/// Whether appending `v` keeps hypotheses (1)-(3), given they hold for `seq`.
fn extension_ok(t: &FiniteTree, seq: &[u32], v: u32) -> bool {
    let n = seq.len();
    let last = seq[n - 1];
    if v == last {
        return false;
    }
    if n < 2 {
        return true;
    }
    let arc = |a: u32, b: u32| -> BTreeSet<u32> { t.arc_set(a, b).unwrap() };
    let new = arc(last, v);
    let prev = arc(seq[n - 2], last);
    let meet: BTreeSet<u32> = prev.intersection(&new).copied().collect();
    if meet.len() >= prev.len() || meet.len() >= new.len() {
        return false;
    }
    if n >= 3 {
        let before = arc(seq[n - 3], seq[n - 2]);
        if meet.iter().any(|x| before.contains(x)) {
            return false;
        }
    }
    true
}
