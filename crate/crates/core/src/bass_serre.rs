//! The fundamental group of a graph of groups and its Bass-Serre tree.
//!
//! Elements are loops at the base vertex in the path group: alternating
//! vertex-group elements and oriented edge letters, subject to
//! `s(c) · y = y · t(c)` for every letter `y` and every `c` in its edge
//! group, where `s`/`t` are the inclusions at the source/target end.
//!
//! A path is canonical when it reads `r0 y1 r1 y2 … yn h` with every `ri`
//! the least element of its left coset modulo the image of the next
//! letter's source end, and no pinch `y r ȳ` with `r` in the image. Canonical
//! forms are unique, so tree vertices (paths modulo the tail `h`) are named
//! syntactically and the canonical prefixes form the tree itself: the parent
//! of a vertex drops its last `(r, y)` pair.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::fingroup::{Elem, Subgroup};
use crate::gog::{EdgeId, GraphId, GraphOfGroups, Letter, VertexId};

/// Default radius for ball scans.
pub const DEFAULT_RADIUS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BsError {
    #[error(
        "ill-formed path at syllable {position}: letter `{letter}` does not leave vertex `{at}`"
    )]
    IllFormedPath {
        position: usize,
        letter: String,
        at: String,
    },
    #[error("element index {elem} out of range for the group at vertex `{at}`")]
    ElementOutOfRange { elem: u32, at: String },
    #[error("word does not return to the base vertex (ends at `{0}`)")]
    NotLoop(String),
    #[error("operands belong to different graphs of groups")]
    MismatchedGraph,
    #[error("generator {0} is hyperbolic")]
    Hyperbolic(String),
    #[error("subgroup is not elliptic")]
    NotElliptic,
    #[error("subgroup closure exceeds the order cap {0}")]
    OrderCap(usize),
    #[error("search exceeded the radius cap {0}")]
    RadiusCap(usize),
    #[error("cannot parse word: {0}")]
    Parse(String),
}

/// One syllable of a raw path word.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Syllable {
    Elem(Elem),
    Letter(Letter),
}

/// A canonical path between two vertices of the quotient graph.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Path {
    pub start: VertexId,
    pub heads: Vec<(Elem, Letter)>,
    pub end: VertexId,
    pub tail: Elem,
}

/// A canonical element of the fundamental group (a loop at the base).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PathWord {
    graph: GraphId,
    heads: Vec<(Elem, Letter)>,
    tail: Elem,
}

impl PathWord {
    pub fn graph(&self) -> GraphId {
        self.graph
    }

    pub fn heads(&self) -> &[(Elem, Letter)] {
        &self.heads
    }

    pub fn tail(&self) -> Elem {
        self.tail
    }

    pub fn is_identity(&self) -> bool {
        self.heads.is_empty() && self.tail.is_identity()
    }

    /// Number of edge letters.
    pub fn edge_length(&self) -> usize {
        self.heads.len()
    }

    pub fn syllables(&self) -> Vec<Syllable> {
        let mut out = Vec::with_capacity(2 * self.heads.len() + 1);
        for &(r, y) in &self.heads {
            out.push(Syllable::Elem(r));
            out.push(Syllable::Letter(y));
        }
        out.push(Syllable::Elem(self.tail));
        out
    }
}

/// A vertex of the Bass-Serre tree, named by its canonical coset path.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TreeVertex {
    graph: GraphId,
    orbit: VertexId,
    heads: Vec<(Elem, Letter)>,
}

impl TreeVertex {
    pub fn graph(&self) -> GraphId {
        self.graph
    }

    /// The quotient vertex this tree vertex lies over.
    pub fn orbit(&self) -> VertexId {
        self.orbit
    }

    pub fn heads(&self) -> &[(Elem, Letter)] {
        &self.heads
    }

    /// Distance from the base vertex of the tree.
    pub fn depth(&self) -> usize {
        self.heads.len()
    }

    pub fn syllables(&self) -> Vec<Syllable> {
        let mut out = Vec::with_capacity(2 * self.heads.len());
        for &(r, y) in &self.heads {
            out.push(Syllable::Elem(r));
            out.push(Syllable::Letter(y));
        }
        out
    }
}

/// Left-to-right canonicalization with a stack of `(rep, letter)` pairs.
struct Normalizer<'g> {
    g: &'g GraphOfGroups,
    heads: Vec<(Elem, Letter)>,
    // vertex after each head, so popping restores the current vertex
    starts: Vec<VertexId>,
    start: VertexId,
    cur: VertexId,
    tail: Elem,
    pushed: usize,
}

impl<'g> Normalizer<'g> {
    fn new(g: &'g GraphOfGroups, start: VertexId) -> Self {
        Normalizer {
            g,
            heads: Vec::new(),
            starts: Vec::new(),
            start,
            cur: start,
            tail: Elem::IDENTITY,
            pushed: 0,
        }
    }

    fn push_elem(&mut self, e: Elem) -> Result<(), BsError> {
        let grp = self.g.group(self.cur);
        if e.idx() >= grp.order() {
            return Err(BsError::ElementOutOfRange {
                elem: e.0,
                at: self.g.vertex(self.cur).name.clone(),
            });
        }
        self.tail = grp.mul(self.tail, e);
        self.pushed += 1;
        Ok(())
    }

    fn push_letter(&mut self, y: Letter) -> Result<(), BsError> {
        if y.edge.0 >= self.g.edge_count() || self.g.source(y) != self.cur {
            let letter = if y.edge.0 < self.g.edge_count() {
                self.g.edge(y.edge).name.clone()
            } else {
                format!("#{}", y.edge.0)
            };
            return Err(BsError::IllFormedPath {
                position: self.pushed,
                letter,
                at: self.g.vertex(self.cur).name.clone(),
            });
        }
        self.pushed += 1;
        if let Some(&(r_prev, y_prev)) = self.heads.last() {
            if y == y_prev.reversed() {
                let into = self.g.end(y_prev.target_end());
                if let Some(c) = into.inclusion.preimage(self.tail) {
                    // y_prev · t(c) · ȳ_prev = s(c)
                    self.heads.pop();
                    self.starts.pop();
                    self.cur = self.g.source(y_prev);
                    let s = self.g.end(y_prev.source_end()).inclusion.apply(c);
                    self.tail = self.g.group(self.cur).mul(r_prev, s);
                    return Ok(());
                }
            }
        }
        let src = self.g.end(y.source_end());
        let (r, c) = src.split(self.tail);
        self.heads.push((r, y));
        self.cur = self.g.target(y);
        self.starts.push(self.cur);
        self.tail = self.g.end(y.target_end()).inclusion.apply(c);
        Ok(())
    }

    fn push(&mut self, s: Syllable) -> Result<(), BsError> {
        match s {
            Syllable::Elem(e) => self.push_elem(e),
            Syllable::Letter(y) => self.push_letter(y),
        }
    }

    fn push_all(&mut self, ss: &[Syllable]) -> Result<(), BsError> {
        for &s in ss {
            self.push(s)?;
        }
        Ok(())
    }

    fn finish(self) -> Path {
        Path {
            start: self.start,
            heads: self.heads,
            end: self.cur,
            tail: self.tail,
        }
    }
}

/// Inverse of a syllable sequence read as a path.
fn invert_syllables(g: &GraphOfGroups, start: VertexId, ss: &[Syllable]) -> Vec<Syllable> {
    // track the vertex at each position to invert elements in the right group
    let mut at = Vec::with_capacity(ss.len());
    let mut cur = start;
    for s in ss {
        at.push(cur);
        if let Syllable::Letter(y) = s {
            cur = g.target(*y);
        }
    }
    ss.iter()
        .zip(at)
        .rev()
        .map(|(s, v)| match *s {
            Syllable::Elem(e) => Syllable::Elem(g.group(v).inv(e)),
            Syllable::Letter(y) => Syllable::Letter(y.reversed()),
        })
        .collect()
}

/// One conjugacy class of finite subgroups of the fundamental group.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    /// Generators of a representative subgroup.
    pub representative: Vec<PathWord>,
    /// A tree vertex fixed by the representative.
    pub witness_vertex: TreeVertex,
    /// The representative as a subgroup of the witness vertex's group.
    pub local_form: Subgroup,
}

/// All conjugacy classes of finite subgroups, with a lookup from
/// (vertex, subgroup lattice index) to class.
#[derive(Clone, Debug)]
pub struct SubgroupClasses {
    pub classes: Vec<SubgroupClass>,
    node_class: BTreeMap<(VertexId, usize), usize>,
}

impl SubgroupClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class of the subgroup with members `members` of the group at `v`.
    pub fn class_of_local(&self, g: &GraphOfGroups, v: VertexId, members: &[Elem]) -> usize {
        let grp = g.group(v);
        let li = grp
            .lattice_index(members)
            .expect("local subgroup in lattice");
        self.node_class[&(v, grp.conjugacy_rep_index(li))]
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // smaller root wins so that class representatives are the least node
        if ra < rb {
            self.0[rb] = ra;
        } else if rb < ra {
            self.0[ra] = rb;
        }
    }
}

impl GraphOfGroups {
    // ----- words -----

    /// Canonical form of a path starting at `start`.
    pub fn normalize_path(&self, start: VertexId, raw: &[Syllable]) -> Result<Path, BsError> {
        let mut n = Normalizer::new(self, start);
        n.push_all(raw)?;
        Ok(n.finish())
    }

    /// Canonical form of a raw loop at the base vertex.
    pub fn normal_form(&self, raw: &[Syllable]) -> Result<PathWord, BsError> {
        let p = self.normalize_path(self.base(), raw)?;
        if p.end != self.base() {
            return Err(BsError::NotLoop(self.vertex(p.end).name.clone()));
        }
        Ok(PathWord {
            graph: self.id(),
            heads: p.heads,
            tail: p.tail,
        })
    }

    fn check(&self, x: &PathWord) -> Result<(), BsError> {
        if x.graph != self.id() {
            return Err(BsError::MismatchedGraph);
        }
        Ok(())
    }

    fn check_v(&self, v: &TreeVertex) -> Result<(), BsError> {
        if v.graph != self.id() {
            return Err(BsError::MismatchedGraph);
        }
        Ok(())
    }

    pub fn identity_word(&self) -> PathWord {
        PathWord {
            graph: self.id(),
            heads: Vec::new(),
            tail: Elem::IDENTITY,
        }
    }

    /// Spanning-tree syllables from the base to `v`.
    pub fn tree_syllables(&self, v: VertexId) -> Vec<Syllable> {
        self.tree_path(v)
            .iter()
            .map(|&y| Syllable::Letter(y))
            .collect()
    }

    /// Syllables of the spanning-tree path from `from` to `to` (through the base).
    fn tree_detour(&self, from: VertexId, to: VertexId) -> Vec<Syllable> {
        let mut s = invert_syllables(self, self.base(), &self.tree_syllables(from));
        s.extend(self.tree_syllables(to));
        s
    }

    /// The element `g ∈ G_v` transported to the base along the spanning tree.
    pub fn vertex_element(&self, v: VertexId, g: Elem) -> PathWord {
        let t = self.tree_syllables(v);
        let mut raw = t.clone();
        raw.push(Syllable::Elem(g));
        raw.extend(invert_syllables(self, self.base(), &t));
        self.normal_form(&raw).expect("tree loop is well formed")
    }

    /// The stable letter of a non-tree edge (or the trivial loop of a tree edge).
    pub fn edge_loop(&self, e: EdgeId) -> PathWord {
        let y = Letter {
            edge: e,
            forward: true,
        };
        let mut raw = self.tree_syllables(self.source(y));
        raw.push(Syllable::Letter(y));
        raw.extend(invert_syllables(
            self,
            self.base(),
            &self.tree_syllables(self.target(y)),
        ));
        self.normal_form(&raw).expect("edge loop is well formed")
    }

    pub fn mul(&self, x: &PathWord, y: &PathWord) -> Result<PathWord, BsError> {
        self.check(x)?;
        self.check(y)?;
        let mut n = Normalizer::new(self, self.base());
        n.push_all(&x.syllables())?;
        n.push_all(&y.syllables())?;
        let p = n.finish();
        Ok(PathWord {
            graph: self.id(),
            heads: p.heads,
            tail: p.tail,
        })
    }

    pub fn inv(&self, x: &PathWord) -> Result<PathWord, BsError> {
        self.check(x)?;
        self.normal_form(&invert_syllables(self, self.base(), &x.syllables()))
    }

    pub fn product(&self, xs: &[&PathWord]) -> Result<PathWord, BsError> {
        let mut n = Normalizer::new(self, self.base());
        for x in xs {
            self.check(x)?;
            n.push_all(&x.syllables())?;
        }
        let p = n.finish();
        Ok(PathWord {
            graph: self.id(),
            heads: p.heads,
            tail: p.tail,
        })
    }

    /// `x · y · x⁻¹`.
    pub fn conjugate(&self, x: &PathWord, y: &PathWord) -> Result<PathWord, BsError> {
        let xi = self.inv(x)?;
        self.product(&[x, y, &xi])
    }

    /// Translation length: 0 for elliptic elements, otherwise the edge
    /// length of a cyclically reduced conjugate.
    pub fn translation_length(&self, x: &PathWord) -> Result<usize, BsError> {
        self.check(x)?;
        let n = x.heads.len();
        if n == 0 {
            return Ok(0);
        }
        // cyclic list of (letter, element following it); the last element
        // wraps around to absorb r0
        let mut seq: Vec<(Letter, Elem)> = Vec::with_capacity(n);
        for i in 0..n {
            let y = x.heads[i].1;
            let after = if i + 1 < n {
                x.heads[i + 1].0
            } else {
                self.group(self.base()).mul(x.tail, x.heads[0].0)
            };
            seq.push((y, after));
        }
        while seq.len() >= 2 {
            let (y_last, g_last) = *seq.last().unwrap();
            let (y_first, g_first) = seq[0];
            if y_first != y_last.reversed() {
                break;
            }
            let Some(c) = self.end(y_last.target_end()).inclusion.preimage(g_last) else {
                break;
            };
            let s = self.end(y_last.source_end()).inclusion.apply(c);
            let m = seq.len();
            if m == 2 {
                return Ok(0);
            }
            let at = self.source(y_last);
            let grp = self.group(at);
            let merged = grp.mul(grp.mul(seq[m - 2].1, s), g_first);
            seq[m - 2].1 = merged;
            seq.pop();
            seq.remove(0);
        }
        Ok(seq.len())
    }

    pub fn is_elliptic(&self, x: &PathWord) -> Result<bool, BsError> {
        Ok(self.translation_length(x)? == 0)
    }

    /// Serre's criterion: a finitely generated subgroup is elliptic iff every
    /// generator and every product of two generators is.
    pub fn is_elliptic_subgroup(&self, gens: &[PathWord]) -> Result<bool, BsError> {
        for (i, a) in gens.iter().enumerate() {
            if !self.is_elliptic(a)? {
                return Ok(false);
            }
            for b in &gens[i + 1..] {
                if !self.is_elliptic(&self.mul(a, b)?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    // ----- the tree -----

    pub fn base_vertex(&self) -> TreeVertex {
        TreeVertex {
            graph: self.id(),
            orbit: self.base(),
            heads: Vec::new(),
        }
    }

    /// The lift of `v` reached along the spanning tree.
    pub fn standard_lift(&self, v: VertexId) -> TreeVertex {
        let p = self
            .normalize_path(self.base(), &self.tree_syllables(v))
            .expect("tree path");
        TreeVertex {
            graph: self.id(),
            orbit: p.end,
            heads: p.heads,
        }
    }

    fn vertex_from_path(&self, p: Path) -> TreeVertex {
        TreeVertex {
            graph: self.id(),
            orbit: p.end,
            heads: p.heads,
        }
    }

    /// Left action of the fundamental group on the tree.
    pub fn act(&self, x: &PathWord, v: &TreeVertex) -> Result<TreeVertex, BsError> {
        self.check(x)?;
        self.check_v(v)?;
        let mut n = Normalizer::new(self, self.base());
        n.push_all(&x.syllables())?;
        n.push_all(&v.syllables())?;
        Ok(self.vertex_from_path(n.finish()))
    }

    pub fn fixes(&self, x: &PathWord, v: &TreeVertex) -> Result<bool, BsError> {
        Ok(self.act(x, v)? == *v)
    }

    /// All neighbours of `v`, in (end, coset representative) order.
    pub fn neighbors(&self, v: &TreeVertex) -> Vec<TreeVertex> {
        let mut out = Vec::new();
        for end in self.ends_at(v.orbit) {
            let y = Letter::leaving(end);
            for &r in self.end(end).transversal() {
                let mut n = Normalizer::new(self, self.base());
                n.push_all(&v.syllables()).expect("canonical vertex");
                n.push_elem(r).expect("transversal element");
                n.push_letter(y).expect("letter leaves the orbit vertex");
                out.push(self.vertex_from_path(n.finish()));
            }
        }
        out
    }

    /// The neighbour of `v` reached by the coset representative `r` of the
    /// end `y` leaves from.
    pub fn step(&self, v: &TreeVertex, r: Elem, y: Letter) -> Result<TreeVertex, BsError> {
        self.check_v(v)?;
        let mut n = Normalizer::new(self, self.base());
        n.push_all(&v.syllables())?;
        n.push_elem(r)?;
        n.push_letter(y)?;
        Ok(self.vertex_from_path(n.finish()))
    }

    /// All elements of the stabilizer of `v`.
    pub fn stabilizer_elements(&self, v: &TreeVertex) -> Vec<PathWord> {
        let p = v.syllables();
        let pinv = invert_syllables(self, self.base(), &p);
        self.group(v.orbit)
            .elements()
            .map(|g| {
                let mut raw = p.clone();
                raw.push(Syllable::Elem(g));
                raw.extend_from_slice(&pinv);
                self.normal_form(&raw).expect("stabilizer loop")
            })
            .collect()
    }

    /// Neighbours one step further from the base vertex.
    pub fn children(&self, v: &TreeVertex) -> Vec<TreeVertex> {
        let d = v.depth();
        self.neighbors(v)
            .into_iter()
            .filter(|w| w.depth() > d)
            .collect()
    }

    pub fn parent(&self, v: &TreeVertex) -> Option<TreeVertex> {
        let (_, y) = *v.heads.last()?;
        let mut heads = v.heads.clone();
        heads.pop();
        Some(TreeVertex {
            graph: v.graph,
            orbit: self.source(y),
            heads,
        })
    }

    fn common_prefix(u: &TreeVertex, v: &TreeVertex) -> usize {
        u.heads
            .iter()
            .zip(&v.heads)
            .take_while(|(a, b)| a == b)
            .count()
    }

    pub fn distance(&self, u: &TreeVertex, v: &TreeVertex) -> Result<usize, BsError> {
        self.check_v(u)?;
        self.check_v(v)?;
        let k = Self::common_prefix(u, v);
        Ok(u.heads.len() + v.heads.len() - 2 * k)
    }

    /// The geodesic from `u` to `v`, both endpoints included.
    pub fn path(&self, u: &TreeVertex, v: &TreeVertex) -> Result<Vec<TreeVertex>, BsError> {
        self.check_v(u)?;
        self.check_v(v)?;
        let k = Self::common_prefix(u, v);
        let mut out = Vec::new();
        let mut cur = u.clone();
        out.push(cur.clone());
        while cur.heads.len() > k {
            cur = self.parent(&cur).unwrap();
            out.push(cur.clone());
        }
        let mut down = Vec::new();
        let mut w = v.clone();
        while w.heads.len() > k {
            down.push(w.clone());
            w = self.parent(&w).unwrap();
        }
        out.extend(down.into_iter().rev());
        Ok(out)
    }

    /// All vertices within `radius` of `center`.
    pub fn ball(&self, center: &TreeVertex, radius: usize) -> Vec<TreeVertex> {
        let mut seen: BTreeSet<TreeVertex> = BTreeSet::new();
        let mut queue = VecDeque::from([(center.clone(), 0usize)]);
        seen.insert(center.clone());
        let mut out = vec![center.clone()];
        while let Some((v, d)) = queue.pop_front() {
            if d == radius {
                continue;
            }
            for w in self.neighbors(&v) {
                if seen.insert(w.clone()) {
                    out.push(w.clone());
                    queue.push_back((w, d + 1));
                }
            }
        }
        out
    }

    /// Fixed vertices of all `gens` within `radius` of the base vertex.
    pub fn fixed_set(
        &self,
        gens: &[PathWord],
        radius: usize,
    ) -> Result<BTreeSet<TreeVertex>, BsError> {
        for x in gens {
            self.check(x)?;
            if !self.is_elliptic(x)? {
                return Err(BsError::Hyperbolic(self.print_word(x)));
            }
        }
        let mut out = BTreeSet::new();
        for v in self.ball(&self.base_vertex(), radius) {
            let mut fixed = true;
            for x in gens {
                if !self.fixes(x, &v)? {
                    fixed = false;
                    break;
                }
            }
            if fixed {
                out.insert(v);
            }
        }
        Ok(out)
    }

    /// The connected fixed subtree of `gens` within `radius` of a fixed
    /// vertex `center`.
    pub fn fixed_subtree(
        &self,
        gens: &[PathWord],
        center: &TreeVertex,
        radius: usize,
    ) -> Result<BTreeSet<TreeVertex>, BsError> {
        let mut out = BTreeSet::new();
        if !self.fixes_all(gens, center)? {
            return Ok(out);
        }
        out.insert(center.clone());
        let mut queue = VecDeque::from([(center.clone(), 0usize)]);
        while let Some((v, d)) = queue.pop_front() {
            if d == radius {
                continue;
            }
            for w in self.neighbors(&v) {
                if !out.contains(&w) && self.fixes_all(gens, &w)? {
                    out.insert(w.clone());
                    queue.push_back((w, d + 1));
                }
            }
        }
        Ok(out)
    }

    pub fn fixes_all(&self, gens: &[PathWord], v: &TreeVertex) -> Result<bool, BsError> {
        for x in gens {
            if !self.fixes(x, v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Elements of the subgroup generated by `gens`, failing past `cap`.
    pub fn closure(&self, gens: &[PathWord], cap: usize) -> Result<Vec<PathWord>, BsError> {
        let mut seen: BTreeSet<PathWord> = BTreeSet::new();
        let id = self.identity_word();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.mul(&x, g)?;
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(BsError::OrderCap(cap));
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// A vertex fixed by the finite subgroup generated by `gens`: the centre
    /// of the orbit of the base vertex.
    pub fn fixed_vertex(&self, gens: &[PathWord], cap: usize) -> Result<TreeVertex, BsError> {
        for x in gens {
            self.check(x)?;
        }
        if !self.is_elliptic_subgroup(gens)? {
            return Err(BsError::NotElliptic);
        }
        let elems = self.closure(gens, cap)?;
        let base = self.base_vertex();
        let orbit: BTreeSet<TreeVertex> = elems
            .iter()
            .map(|x| self.act(x, &base))
            .collect::<Result<_, _>>()?;
        let orbit: Vec<TreeVertex> = orbit.into_iter().collect();
        let far = |from: &TreeVertex| -> Result<TreeVertex, BsError> {
            let mut best = from.clone();
            let mut bd = 0;
            for w in &orbit {
                let d = self.distance(from, w)?;
                if d > bd {
                    bd = d;
                    best = w.clone();
                }
            }
            Ok(best)
        };
        let b = far(&orbit[0])?;
        let c = far(&b)?;
        let path = self.path(&b, &c)?;
        debug_assert!((path.len() - 1) % 2 == 0, "same-orbit distances are even");
        let center = path[(path.len() - 1) / 2].clone();
        debug_assert!(self.fixes_all(gens, &center)?);
        Ok(center)
    }

    /// The element taking the standard lift of `v.orbit()` to `v`.
    pub fn transport(&self, v: &TreeVertex) -> PathWord {
        let mut raw = v.syllables();
        raw.extend(invert_syllables(
            self,
            self.base(),
            &self.tree_syllables(v.orbit),
        ));
        self.normal_form(&raw).expect("transport loop")
    }

    /// Generators of the stabilizer of `v`: `p · g · p⁻¹` for the coset path `p`.
    pub fn stabilizer_generators(&self, v: &TreeVertex) -> Vec<PathWord> {
        let p = v.syllables();
        let pinv = invert_syllables(self, self.base(), &p);
        self.group(v.orbit)
            .generators()
            .into_iter()
            .map(|g| {
                let mut raw = p.clone();
                raw.push(Syllable::Elem(g));
                raw.extend_from_slice(&pinv);
                self.normal_form(&raw).expect("stabilizer loop")
            })
            .collect()
    }

    /// For `x` fixing `v`, the element `p⁻¹ x p` of the vertex group at `v`.
    pub fn local_form(&self, v: &TreeVertex, x: &PathWord) -> Result<Option<Elem>, BsError> {
        self.check(x)?;
        self.check_v(v)?;
        let p = v.syllables();
        let mut raw = invert_syllables(self, self.base(), &p);
        raw.extend(x.syllables());
        raw.extend(p);
        let q = self.normalize_path(v.orbit, &raw)?;
        if q.heads.is_empty() && q.end == v.orbit {
            Ok(Some(q.tail))
        } else {
            Ok(None)
        }
    }

    /// Conjugacy classes of finite subgroups: pairs (vertex, subgroup up to
    /// local conjugacy), glued along every subgroup of every edge group.
    pub fn finite_subgroup_classes(&self) -> SubgroupClasses {
        let mut nodes: Vec<(VertexId, usize)> = Vec::new();
        let mut node_of: BTreeMap<(VertexId, usize), usize> = BTreeMap::new();
        for v in self.vertex_ids() {
            let grp = self.group(v);
            for s in grp.subgroup_class_reps() {
                node_of.insert((v, s.lattice_index()), nodes.len());
                nodes.push((v, s.lattice_index()));
            }
        }
        let mut uf = UnionFind((0..nodes.len()).collect());
        let node = |v: VertexId, members: &[Elem]| -> usize {
            let grp = self.group(v);
            let li = grp.lattice_index(members).unwrap();
            node_of[&(v, grp.conjugacy_rep_index(li))]
        };
        for e in self.edges() {
            for k in e.group.subgroups() {
                let ends = [crate::gog::Side::A, crate::gog::Side::B].map(|side| {
                    let end = e.end(side);
                    let mut img: Vec<Elem> = k
                        .members()
                        .iter()
                        .map(|&c| end.inclusion.apply(c))
                        .collect();
                    img.sort();
                    node(end.vertex, &img)
                });
                uf.union(ends[0], ends[1]);
            }
        }
        let mut class_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut classes = Vec::new();
        let mut node_class = BTreeMap::new();
        for (i, &(v, li)) in nodes.iter().enumerate() {
            let root = uf.find(i);
            let cls = *class_of_root.entry(root).or_insert_with(|| {
                let grp = self.group(v);
                let sub = Subgroup::from_members(grp, grp.lattice_members(li)).unwrap();
                let representative = sub
                    .generators()
                    .into_iter()
                    .map(|g| self.vertex_element(v, g))
                    .collect();
                classes.push(SubgroupClass {
                    representative,
                    witness_vertex: self.standard_lift(v),
                    local_form: sub,
                });
                classes.len() - 1
            });
            node_class.insert((v, li), cls);
        }
        SubgroupClasses {
            classes,
            node_class,
        }
    }

    /// Which class of `classes` the finite subgroup generated by `gens` is in.
    pub fn classify_subgroup(
        &self,
        classes: &SubgroupClasses,
        gens: &[PathWord],
        cap: usize,
    ) -> Result<usize, BsError> {
        let c = self.fixed_vertex(gens, cap)?;
        let mut local = Vec::new();
        for x in gens {
            local.push(self.local_form(&c, x)?.ok_or(BsError::NotElliptic)?);
        }
        let sub = Subgroup::generated(self.group(c.orbit), &local);
        Ok(classes.class_of_local(self, c.orbit, sub.members()))
    }

    // ----- text format -----

    /// Prints a canonical word: `Z4.a·e·Z6.b·e⁻¹`, identity elements
    /// omitted, the identity word as `1`.
    pub fn print_word(&self, x: &PathWord) -> String {
        self.print_syllables(self.base(), &x.syllables())
    }

    pub fn print_vertex(&self, v: &TreeVertex) -> String {
        format!(
            "{}@{}",
            self.print_syllables(self.base(), &v.syllables()),
            self.vertex(v.orbit).name
        )
    }

    fn print_syllables(&self, start: VertexId, ss: &[Syllable]) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut cur = start;
        for s in ss {
            match *s {
                Syllable::Elem(e) => {
                    if !e.is_identity() {
                        let grp = self.group(cur);
                        parts.push(format!("{}.{}", grp.name(), grp.name_of(e)));
                    }
                }
                Syllable::Letter(y) => {
                    let name = &self.edge(y.edge).name;
                    parts.push(if y.forward {
                        name.clone()
                    } else {
                        format!("{name}⁻¹")
                    });
                    cur = self.target(y);
                }
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("·")
        }
    }

    /// Parses a word into raw syllables starting at the base vertex.
    ///
    /// Tokens are separated by `·`, `*` or whitespace: `1` (identity), an
    /// edge name, optionally with `⁻¹` or `^-1`, `Group.elem` (an element of
    /// the current vertex group), `vertex:elem` (an element of another
    /// vertex group, reached along the spanning tree), or a bare element
    /// name, resolved at the current vertex first and otherwise at the
    /// unique vertex whose group has it.
    pub fn parse_raw(&self, text: &str) -> Result<Vec<Syllable>, BsError> {
        let mut out = Vec::new();
        let mut cur = self.base();
        let toks = text
            .split(|c: char| c == '·' || c == '*' || c.is_whitespace())
            .filter(|t| !t.is_empty());
        for tok in toks {
            if tok == "1" {
                continue;
            }
            let (stem, inverted) = if let Some(s) = tok.strip_suffix("⁻¹") {
                (s, true)
            } else if let Some(s) = tok.strip_suffix("^-1") {
                (s, true)
            } else {
                (tok, false)
            };
            if let Some(e) = self.edge_by_name(stem) {
                let y = Letter {
                    edge: e,
                    forward: !inverted,
                };
                if self.source(y) != cur {
                    return Err(BsError::IllFormedPath {
                        position: out.len(),
                        letter: tok.to_string(),
                        at: self.vertex(cur).name.clone(),
                    });
                }
                out.push(Syllable::Letter(y));
                cur = self.target(y);
                continue;
            }
            if let Some((gname, ename)) = tok.split_once('.') {
                let grp = self.group(cur);
                if grp.name() != gname {
                    return Err(BsError::Parse(format!(
                        "`{tok}`: current vertex `{}` has group `{}`",
                        self.vertex(cur).name,
                        grp.name()
                    )));
                }
                let e = grp
                    .lookup(ename)
                    .ok_or_else(|| BsError::Parse(format!("unknown element `{tok}`")))?;
                out.push(Syllable::Elem(e));
                continue;
            }
            let (target, ename) = match tok.split_once(':') {
                Some((vname, ename)) => {
                    let v = self
                        .vertex_by_name(vname)
                        .ok_or_else(|| BsError::Parse(format!("unknown vertex `{vname}`")))?;
                    (v, ename)
                }
                None => {
                    let resolve = |name: &str| -> Result<Option<VertexId>, BsError> {
                        if self.group(cur).lookup(name).is_some() {
                            return Ok(Some(cur));
                        }
                        let hits: Vec<VertexId> = self
                            .vertex_ids()
                            .filter(|&v| self.group(v).lookup(name).is_some())
                            .collect();
                        match hits.len() {
                            0 => Ok(None),
                            1 => Ok(Some(hits[0])),
                            _ => Err(BsError::Parse(format!(
                                "element `{name}` is ambiguous; qualify it"
                            ))),
                        }
                    };
                    match resolve(tok)? {
                        Some(v) => (v, tok),
                        None => match resolve(stem)? {
                            Some(v) if inverted => (v, tok),
                            _ => return Err(BsError::Parse(format!("unknown token `{tok}`"))),
                        },
                    }
                }
            };
            let grp = self.group(target);
            let e = match grp.lookup(ename) {
                Some(e) => e,
                None => {
                    let (s, inv) = if let Some(s) = ename.strip_suffix("⁻¹") {
                        (s, true)
                    } else if let Some(s) = ename.strip_suffix("^-1") {
                        (s, true)
                    } else {
                        (ename, false)
                    };
                    let e = grp
                        .lookup(s)
                        .ok_or_else(|| BsError::Parse(format!("unknown element `{tok}`")))?;
                    if inv {
                        grp.inv(e)
                    } else {
                        e
                    }
                }
            };
            if target == cur {
                out.push(Syllable::Elem(e));
            } else {
                let there = self.tree_detour(cur, target);
                let back = self.tree_detour(target, cur);
                out.extend(there);
                out.push(Syllable::Elem(e));
                out.extend(back);
            }
        }
        if cur != self.base() {
            return Err(BsError::NotLoop(self.vertex(cur).name.clone()));
        }
        Ok(out)
    }

    pub fn parse_word(&self, text: &str) -> Result<PathWord, BsError> {
        self.normal_form(&self.parse_raw(text)?)
    }

    /// Raw syllables for a generator-style word over vertex elements, each
    /// given as `(vertex, element)` and transported along the spanning tree.
    pub fn generator_word(&self, letters: &[(VertexId, Elem)]) -> Vec<Syllable> {
        let mut out = Vec::new();
        for &(v, e) in letters {
            out.extend(self.tree_syllables(v));
            out.push(Syllable::Elem(e));
            out.extend(invert_syllables(self, self.base(), &self.tree_syllables(v)));
        }
        out
    }

    /// Inverse of a raw path starting at `start`.
    pub fn invert_raw(&self, start: VertexId, raw: &[Syllable]) -> Vec<Syllable> {
        invert_syllables(self, start, raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::dsl::parse_gog;

    fn ssf1() -> GraphOfGroups {
        parse_gog(corpus::SSF1).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let g = ssf1();
        assert!(g.parse_word("a·a·a·a").unwrap().is_identity());
        // a^2 and b^3 are identified through the edge group
        let a2b3 = g.parse_word("a^2·b^3").unwrap();
        assert!(a2b3.is_identity());
        let w = g.parse_word("a^2·b^3·b^3·a^2").unwrap();
        assert!(w.is_identity());
        let abab = g.parse_word("a·b·a·b").unwrap();
        assert_eq!(abab.edge_length(), 4);
        assert_eq!(g.print_word(&abab), "Z4.a·e·Z6.b·e⁻¹·Z4.a·e·Z6.b·e⁻¹");
    }

    #[test]
    fn a_squared_equals_b_cubed() {
        let g = ssf1();
        let a2 = g.parse_word("a^2").unwrap();
        let b3 = g.parse_word("b^3").unwrap();
        assert_eq!(a2, b3);
    }

    #[test]
    fn mul_and_inverse() {
        let g = ssf1();
        let a = g.parse_word("a").unwrap();
        let a3 = g.parse_word("a^3").unwrap();
        assert!(g.mul(&a, &a3).unwrap().is_identity());
        let ab = g.parse_word("a·b").unwrap();
        let ab_inv = g.parse_word("b^-1·a^-1").unwrap();
        assert!(g.mul(&ab, &ab_inv).unwrap().is_identity());
        assert_eq!(g.inv(&ab).unwrap(), ab_inv);
        let abab = g.mul(&ab, &ab).unwrap();
        assert_eq!(abab, g.parse_word("a·b·a·b").unwrap());
    }

    #[test]
    fn translation_lengths() {
        let g = ssf1();
        assert_eq!(
            g.translation_length(&g.parse_word("a").unwrap()).unwrap(),
            0
        );
        assert_eq!(
            g.translation_length(&g.parse_word("a·b").unwrap()).unwrap(),
            2
        );
        assert_eq!(
            g.translation_length(&g.parse_word("b·a·b^-1").unwrap())
                .unwrap(),
            0
        );
        let h = parse_gog(corpus::HNN1).unwrap();
        assert_eq!(
            h.translation_length(&h.parse_word("t").unwrap()).unwrap(),
            1
        );
        assert_eq!(
            h.translation_length(&h.parse_word("t·a·t⁻¹").unwrap())
                .unwrap(),
            0
        );
    }

    #[test]
    fn action_examples() {
        let g = ssf1();
        let u = g.base_vertex();
        assert_eq!(g.act(&g.identity_word(), &u).unwrap(), u);
        assert_eq!(g.act(&g.parse_word("a").unwrap(), &u).unwrap(), u);
        let bu = g.act(&g.parse_word("b").unwrap(), &u).unwrap();
        assert_eq!(g.distance(&u, &bu).unwrap(), 2);
        let p = g.path(&u, &bu).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(g.vertex(p[1].orbit()).name, "v");
        assert_eq!(g.path(&u, &u).unwrap(), vec![u.clone()]);
        let abu = g.act(&g.parse_word("a·b").unwrap(), &u).unwrap();
        assert_eq!(g.distance(&u, &abu).unwrap(), 2);
    }

    #[test]
    fn fixed_sets() {
        let g = ssf1();
        let ball2 = g.ball(&g.base_vertex(), 2);
        let all = g.fixed_set(&[g.identity_word()], 2).unwrap();
        assert_eq!(all.len(), ball2.len());
        let a = g.parse_word("a").unwrap();
        let fa = g.fixed_set(core::slice::from_ref(&a), 2).unwrap();
        assert_eq!(fa.into_iter().collect::<Vec<_>>(), vec![g.base_vertex()]);
        let a2 = g.parse_word("a^2").unwrap();
        assert_eq!(g.fixed_set(&[a2], 2).unwrap().len(), ball2.len());
        let b = g.parse_word("b").unwrap();
        assert!(g.fixed_set(&[g.parse_word("a·b").unwrap()], 2).is_err());
        let fv = g.fixed_vertex(core::slice::from_ref(&b), 48).unwrap();
        assert_eq!(g.vertex(fv.orbit()).name, "v");
        assert!(g.fixes(&b, &fv).unwrap());
    }

    #[test]
    fn elliptic_subgroups() {
        let g = ssf1();
        let a = g.parse_word("a").unwrap();
        let b = g.parse_word("b").unwrap();
        let a2 = g.parse_word("a^2").unwrap();
        assert!(g.is_elliptic_subgroup(core::slice::from_ref(&a)).unwrap());
        assert!(!g.is_elliptic_subgroup(&[a, b.clone()]).unwrap());
        assert!(g.is_elliptic_subgroup(&[a2, b]).unwrap());
    }

    #[test]
    fn subgroup_class_counts() {
        assert_eq!(
            parse_gog(corpus::TRIV)
                .unwrap()
                .finite_subgroup_classes()
                .len(),
            4
        );
        assert_eq!(ssf1().finite_subgroup_classes().len(), 5);
        assert_eq!(
            parse_gog(corpus::FREE3)
                .unwrap()
                .finite_subgroup_classes()
                .len(),
            4
        );
    }

    #[test]
    fn classify_conjugates_consistently() {
        let g = ssf1();
        let classes = g.finite_subgroup_classes();
        let b2 = g.parse_word("b^2").unwrap();
        let w = g.parse_word("a·b·a").unwrap();
        let conj = g.conjugate(&w, &b2).unwrap();
        let c1 = g.classify_subgroup(&classes, &[b2], 48).unwrap();
        let c2 = g.classify_subgroup(&classes, &[conj], 48).unwrap();
        assert_eq!(c1, c2);
        let a = g.parse_word("a").unwrap();
        assert_ne!(g.classify_subgroup(&classes, &[a], 48).unwrap(), c1);
    }

    #[test]
    fn word_format_round_trip() {
        let g = ssf1();
        for w in ["1", "a", "a·b", "b^-1·a·b·b·a^3", "e·Z6.b·e⁻¹"] {
            let x = g.parse_word(w).unwrap();
            let printed = g.print_word(&x);
            assert_eq!(g.parse_word(&printed).unwrap(), x, "{w} -> {printed}");
        }
    }

    #[test]
    fn ill_formed_paths_rejected() {
        let g = ssf1();
        assert!(matches!(
            g.parse_raw("e⁻¹"),
            Err(BsError::IllFormedPath { .. })
        ));
        assert!(matches!(g.parse_raw("e"), Err(BsError::NotLoop(_))));
        let h = parse_gog(corpus::HNN1).unwrap();
        assert!(matches!(
            g.mul(&g.identity_word(), &h.identity_word()),
            Err(BsError::MismatchedGraph)
        ));
    }
}
