//! Collapse and expansion moves on marked graphs of groups, marked
//! isomorphism, and breadth-first enumeration of reduced trees.
//!
//! A marking identifies the fundamental group of a graph of groups with that
//! of a fixed reference graph. It is stored as two translation tables over
//! the standard generators: for every vertex `v` and element `g ∈ G_v` the
//! loop `T(v) g T(v)⁻¹`, and for every edge off the spanning tree the loop
//! `T(o) e T(t)⁻¹`, where `T(v)` is the spanning-tree path from the base.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::bass_serre::{BsError, PathWord, SubgroupClasses, Syllable, TreeVertex};
use crate::fingroup::{Elem, FiniteGroup, GroupError, Mono, Subgroup, DEFAULT_ORDER_CAP};
use crate::gog::{EdgeId, EdgeSpec, EndRef, GogError, GraphId, GraphOfGroups, Letter, Side, Vertex, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("edge `{0}` is a loop")]
    LoopEdge(String),
    #[error("edge `{0}` has no surjective end")]
    NotCollapsible(String),
    #[error("end {0:?} is not incident to the expanded vertex")]
    NotIncident(EndRef),
    #[error("end {0:?} listed twice")]
    DuplicateEnd(EndRef),
    #[error("conjugated image of end {0:?} is not contained in the subgroup")]
    Containment(EndRef),
    #[error("subgroup does not belong to the vertex group")]
    NotSubgroup,
    #[error("marked graphs have different references")]
    MismatchedReference,
    #[error("marking check failed: {0}")]
    Marking(String),
    #[error("finite subgroup classes are not in bijection: {0}")]
    ClassBijection(String),
    #[error("no reduced tree found within the caps")]
    NoReduced,
    #[error("starting graph is not minimal (vertex `{0}`)")]
    NotMinimal(String),
    #[error(transparent)]
    Tree(#[from] BsError),
    #[error(transparent)]
    Graph(#[from] GogError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A standard generator of the fundamental group.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Generator {
    Vertex(VertexId, Elem),
    Stable(EdgeId),
}

/// Raw loop at the base for a standard generator.
pub fn generator_loop(g: &GraphOfGroups, gen: Generator) -> Vec<Syllable> {
    match gen {
        Generator::Vertex(v, x) => g.generator_word(&[(v, x)]),
        Generator::Stable(e) => {
            let y = Letter { edge: e, forward: true };
            let mut raw = g.tree_syllables(g.source(y));
            raw.push(Syllable::Letter(y));
            raw.extend(g.invert_raw(g.base(), &g.tree_syllables(g.target(y))));
            raw
        }
    }
}

/// All standard generators: every vertex-group element, then stable letters.
pub fn generators(g: &GraphOfGroups) -> Vec<Generator> {
    let mut out = Vec::new();
    for v in g.vertex_ids() {
        for x in g.group(v).elements() {
            out.push(Generator::Vertex(v, x));
        }
    }
    for e in g.edge_ids() {
        if !g.in_tree(e) {
            out.push(Generator::Stable(e));
        }
    }
    out
}

/// Images of the standard generators of one graph in another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Translation {
    src: GraphId,
    dst: GraphId,
    vertex: Vec<Vec<PathWord>>,
    stable: Vec<Option<(PathWord, PathWord)>>,
}

impl Translation {
    /// Builds a table by evaluating `f` on each generator loop of `src`.
    pub fn build<F>(src: &GraphOfGroups, dst: &GraphOfGroups, mut f: F) -> Result<Translation, MoveError>
    where
        F: FnMut(Generator, Vec<Syllable>) -> Result<PathWord, MoveError>,
    {
        let mut vertex = Vec::with_capacity(src.vertex_count());
        for v in src.vertex_ids() {
            let mut row = Vec::with_capacity(src.group(v).order());
            for x in src.group(v).elements() {
                let gen = Generator::Vertex(v, x);
                row.push(f(gen, generator_loop(src, gen))?);
            }
            vertex.push(row);
        }
        let mut stable = vec![None; src.edge_count()];
        for e in src.edge_ids() {
            if !src.in_tree(e) {
                let gen = Generator::Stable(e);
                let w = f(gen, generator_loop(src, gen))?;
                let wi = dst.inv(&w)?;
                stable[e.0] = Some((w, wi));
            }
        }
        Ok(Translation { src: src.id(), dst: dst.id(), vertex, stable })
    }

    pub fn identity(g: &GraphOfGroups) -> Translation {
        Translation::build(g, g, |_, raw| Ok(g.normal_form(&raw)?)).expect("generator loops are well formed")
    }

    pub fn image(&self, gen: Generator) -> &PathWord {
        match gen {
            Generator::Vertex(v, x) => &self.vertex[v.0][x.idx()],
            Generator::Stable(e) => &self.stable[e.0].as_ref().expect("stable letter off the tree").0,
        }
    }

    /// Image of a canonical loop of `src` in `dst`.
    pub fn apply(&self, src: &GraphOfGroups, dst: &GraphOfGroups, x: &PathWord) -> Result<PathWord, MoveError> {
        if src.id() != self.src || dst.id() != self.dst || x.graph() != self.src {
            return Err(BsError::MismatchedGraph.into());
        }
        let mut parts: Vec<&PathWord> = Vec::with_capacity(2 * x.heads().len() + 1);
        let mut cur = src.base();
        for &(r, y) in x.heads() {
            parts.push(&self.vertex[cur.0][r.idx()]);
            if let Some((w, wi)) = &self.stable[y.edge.0] {
                parts.push(if y.forward { w } else { wi });
            }
            cur = src.target(y);
        }
        parts.push(&self.vertex[cur.0][x.tail().idx()]);
        Ok(dst.product(&parts)?)
    }

    /// Image of a raw loop of `src`.
    pub fn apply_raw(&self, src: &GraphOfGroups, dst: &GraphOfGroups, raw: &[Syllable]) -> Result<PathWord, MoveError> {
        let x = src.normal_form(raw)?;
        self.apply(src, dst, &x)
    }
}

/// A graph of groups with a verified identification of its fundamental
/// group with that of a fixed reference graph.
#[derive(Clone, Debug)]
pub struct MarkedGog {
    gog: GraphOfGroups,
    reference: Arc<GraphOfGroups>,
    ref_classes: Arc<SubgroupClasses>,
    to_ref: Translation,
    from_ref: Translation,
}

/// What a move does.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MoveKind {
    /// Merge the vertex at `side` of `edge` (whose inclusion is onto) into
    /// the other endpoint.
    Collapse { edge: EdgeId, side: Side },
    /// Blow `subgroup ≤ G_vertex` out into a new edge and vertex, moving the
    /// listed ends to the new vertex twisted by their conjugators.
    Expand { vertex: VertexId, subgroup: Vec<Elem>, ends: Vec<(EndRef, Elem)> },
}

impl MoveKind {
    pub fn is_collapse(&self) -> bool {
        matches!(self, MoveKind::Collapse { .. })
    }

    /// Human-readable description in terms of `g`'s names.
    pub fn describe(&self, g: &GraphOfGroups) -> String {
        match self {
            MoveKind::Collapse { edge, side } => {
                format!("collapse {} into {}", g.edge(*edge).name, g.vertex(g.edge(*edge).end(side.other()).vertex).name)
            }
            MoveKind::Expand { vertex, subgroup, ends } => {
                let grp = g.group(*vertex);
                let members: Vec<&str> = subgroup.iter().map(|&x| grp.name_of(x)).collect();
                let ends: Vec<String> = ends
                    .iter()
                    .map(|(end, k)| {
                        let side = if end.side == Side::A { "A" } else { "B" };
                        if k.is_identity() {
                            format!("{}.{}", g.edge(end.edge).name, side)
                        } else {
                            format!("{}.{}^{}", g.edge(end.edge).name, side, grp.name_of(*k))
                        }
                    })
                    .collect();
                format!("expand {} {{{}}} [{}]", g.vertex(*vertex).name, members.join(", "), ends.join(", "))
            }
        }
    }
}

/// A performed move with the induced translations between its endpoints.
#[derive(Clone, Debug)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub source: GraphId,
    pub target: GraphId,
    /// A move of the target that undoes this one.
    pub inverse: MoveKind,
    /// Source generators in the target.
    pub forward: Translation,
    /// Target generators in the source.
    pub backward: Translation,
    pub label: String,
}

impl MoveRecord {
    /// Re-applies the move to `m`, checking it reproduces the target.
    pub fn apply(&self, m: &MarkedGog) -> Result<(MarkedGog, MoveRecord), MoveError> {
        if m.gog.id() != self.source {
            return Err(BsError::MismatchedGraph.into());
        }
        let out = m.apply(&self.kind)?;
        debug_assert_eq!(out.0.gog.id(), self.target);
        Ok(out)
    }
}

fn fresh_name(taken: impl Iterator<Item = String>, stem: &str) -> String {
    let taken: BTreeSet<String> = taken.collect();
    (0..).map(|i| format!("{stem}{i}")).find(|n| !taken.contains(n)).unwrap()
}

/// Outcome of a marked isomorphism test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    /// The witness sends the standard lift of each source vertex to a tree
    /// vertex of the other graph.
    Isomorphic(Vec<TreeVertex>),
    /// An invariant of marked trees differs.
    Different(String),
    /// No isomorphism found within the search bounds.
    NotProven,
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }
}

/// Cheap invariant of a marked graph: per vertex, its group order, the
/// reference class of its group, and the sorted (order, class) of its ends.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint(pub Vec<VertexSignature>);

impl Fingerprint {
    pub fn hash64(&self) -> u64 {
        let mut h = crate::gog::Fnv::new();
        for (o, c, ends) in &self.0 {
            h.u64(*o as u64);
            h.u64(*c as u64);
            h.u64(ends.len() as u64);
            for (a, b) in ends {
                h.u64(*a as u64);
                h.u64(*b as u64);
            }
        }
        h.0
    }
}

pub type VertexSignature = (usize, usize, Vec<(usize, usize)>);

/// Default search radius for marked isomorphism.
pub const ISO_RADIUS: usize = 2;

impl MarkedGog {
    /// `gog` marked by the identity, serving as its own reference.
    pub fn new(gog: GraphOfGroups) -> MarkedGog {
        let reference = Arc::new(gog.clone());
        let ref_classes = Arc::new(reference.finite_subgroup_classes());
        let to_ref = Translation::identity(&gog);
        let from_ref = to_ref.clone();
        MarkedGog { gog, reference, ref_classes, to_ref, from_ref }
    }

    /// Assembles a marked graph from explicit tables, verifying them.
    pub fn from_parts(
        gog: GraphOfGroups,
        reference: Arc<GraphOfGroups>,
        ref_classes: Arc<SubgroupClasses>,
        to_ref: Translation,
        from_ref: Translation,
    ) -> Result<MarkedGog, MoveError> {
        let m = MarkedGog { gog, reference, ref_classes, to_ref, from_ref };
        m.verify()?;
        Ok(m)
    }

    /// Same as [`MarkedGog::from_parts`] without verification.
    pub fn from_parts_unchecked(
        gog: GraphOfGroups,
        reference: Arc<GraphOfGroups>,
        ref_classes: Arc<SubgroupClasses>,
        to_ref: Translation,
        from_ref: Translation,
    ) -> MarkedGog {
        MarkedGog { gog, reference, ref_classes, to_ref, from_ref }
    }

    pub fn gog(&self) -> &GraphOfGroups {
        &self.gog
    }

    pub fn reference(&self) -> &Arc<GraphOfGroups> {
        &self.reference
    }

    pub fn reference_classes(&self) -> &Arc<SubgroupClasses> {
        &self.ref_classes
    }

    pub fn to_ref_table(&self) -> &Translation {
        &self.to_ref
    }

    pub fn from_ref_table(&self) -> &Translation {
        &self.from_ref
    }

    pub fn same_reference(&self, other: &MarkedGog) -> bool {
        Arc::ptr_eq(&self.reference, &other.reference) || self.reference.id() == other.reference.id()
    }

    pub fn to_ref(&self, x: &PathWord) -> Result<PathWord, MoveError> {
        self.to_ref.apply(&self.gog, &self.reference, x)
    }

    pub fn from_ref(&self, x: &PathWord) -> Result<PathWord, MoveError> {
        self.from_ref.apply(&self.reference, &self.gog, x)
    }

    /// `other.from_ref ∘ self.to_ref`.
    pub fn transfer(&self, other: &MarkedGog, x: &PathWord) -> Result<PathWord, MoveError> {
        other.from_ref(&self.to_ref(x)?)
    }

    /// Checks that both tables respect the defining relations and are
    /// mutually inverse on generators.
    pub fn verify(&self) -> Result<(), MoveError> {
        check_hom(&self.gog, &self.reference, &self.to_ref).map_err(|e| MoveError::Marking(format!("to_ref: {e}")))?;
        check_hom(&self.reference, &self.gog, &self.from_ref)
            .map_err(|e| MoveError::Marking(format!("from_ref: {e}")))?;
        for gen in generators(&self.gog) {
            let x = self.gog.normal_form(&generator_loop(&self.gog, gen))?;
            let back = self.from_ref(self.to_ref.image(gen))?;
            if back != x {
                return Err(MoveError::Marking(format!(
                    "from_ref ∘ to_ref moves {} to {}",
                    self.gog.print_word(&x),
                    self.gog.print_word(&back)
                )));
            }
        }
        for gen in generators(&self.reference) {
            let x = self.reference.normal_form(&generator_loop(&self.reference, gen))?;
            let back = self.to_ref(self.from_ref.image(gen))?;
            if back != x {
                return Err(MoveError::Marking(format!(
                    "to_ref ∘ from_ref moves {} to {}",
                    self.reference.print_word(&x),
                    self.reference.print_word(&back)
                )));
            }
        }
        Ok(())
    }

    /// The same graph with its marking composed with conjugation by `w`
    /// (an element of the reference group).
    pub fn twisted_by(&self, w: &PathWord) -> Result<MarkedGog, MoveError> {
        let r = &self.reference;
        let wi = r.inv(w)?;
        let to_ref = Translation::build(&self.gog, r, |gen, _| Ok(r.product(&[w, self.to_ref.image(gen), &wi])?))?;
        let from_ref = Translation::build(r, &self.gog, |_, raw| {
            let x = r.normal_form(&raw)?;
            self.from_ref(&r.product(&[&wi, &x, w])?)
        })?;
        Ok(MarkedGog { to_ref, from_ref, ..self.clone() })
    }

    /// Reference class of the subgroup generated by `gens`.
    pub fn ref_class(&self, gens: &[PathWord]) -> Result<usize, MoveError> {
        let images: Vec<PathWord> = gens.iter().map(|x| self.to_ref(x)).collect::<Result<_, _>>()?;
        let cap = DEFAULT_ORDER_CAP.max(self.max_order());
        Ok(self.reference.classify_subgroup(&self.ref_classes, &images, cap)?)
    }

    fn max_order(&self) -> usize {
        self.gog.vertices().iter().map(|v| v.group.order()).max().unwrap_or(1)
    }

    /// Finite subgroup classes of the graph pushed into the reference must
    /// match the reference's classes one to one.
    pub fn check_class_bijection(&self) -> Result<(), MoveError> {
        let ours = self.gog.finite_subgroup_classes();
        if ours.len() != self.ref_classes.len() {
            return Err(MoveError::ClassBijection(format!(
                "{} classes against {} in the reference",
                ours.len(),
                self.ref_classes.len()
            )));
        }
        let mut hit = BTreeSet::new();
        for (i, c) in ours.classes.iter().enumerate() {
            let rc = self.ref_class(&c.representative)?;
            if !hit.insert(rc) {
                return Err(MoveError::ClassBijection(format!("class {i} lands on a reference class twice")));
            }
        }
        Ok(())
    }

    pub fn fingerprint(&self) -> Result<Fingerprint, MoveError> {
        let g = &self.gog;
        let mut out = Vec::new();
        for v in g.vertex_ids() {
            let gens: Vec<PathWord> =
                g.group(v).generators().into_iter().map(|x| g.vertex_element(v, x)).collect();
            let cls = self.ref_class(&gens)?;
            let mut ends = Vec::new();
            for end in g.ends_at(v) {
                let e = g.end(end);
                let gens: Vec<PathWord> = e.image().generators().into_iter().map(|x| g.vertex_element(v, x)).collect();
                ends.push((e.image().order(), self.ref_class(&gens)?));
            }
            ends.sort();
            out.push((g.group(v).order(), cls, ends));
        }
        out.sort();
        Ok(Fingerprint(out))
    }

    // ----- moves -----

    pub fn apply(&self, kind: &MoveKind) -> Result<(MarkedGog, MoveRecord), MoveError> {
        match kind {
            MoveKind::Collapse { edge, side } => self.collapse(*edge, Some(*side)),
            MoveKind::Expand { vertex, subgroup, ends } => {
                if vertex.0 >= self.gog.vertex_count() {
                    return Err(MoveError::UnknownVertex(vertex.0));
                }
                let a = Subgroup::from_members(self.gog.group(*vertex), subgroup)
                    .map_err(|_| MoveError::NotSubgroup)?;
                self.expand(*vertex, &a, ends)
            }
        }
    }

    /// Collapses `e`, merging the endpoint on `side` (default: the first
    /// surjective end) into the other endpoint.
    pub fn collapse(&self, e: EdgeId, side: Option<Side>) -> Result<(MarkedGog, MoveRecord), MoveError> {
        let old = &self.gog;
        if e.0 >= old.edge_count() {
            return Err(MoveError::UnknownEdge(e.0));
        }
        let edge = old.edge(e);
        if edge.is_loop() {
            return Err(MoveError::LoopEdge(edge.name.clone()));
        }
        let side = match side {
            Some(s) if edge.end(s).inclusion.is_surjective() => s,
            Some(_) => return Err(MoveError::NotCollapsible(edge.name.clone())),
            None => [Side::A, Side::B]
                .into_iter()
                .find(|&s| edge.end(s).inclusion.is_surjective())
                .ok_or_else(|| MoveError::NotCollapsible(edge.name.clone()))?,
        };
        let v1 = edge.end(side).vertex;
        let v2 = edge.end(side.other()).vertex;
        let mu1_inv = edge.end(side).inclusion.invert().unwrap();
        let mu2 = edge.end(side.other()).inclusion.clone();
        let merge = mu1_inv.then(&mu2);
        // letter from v1 to v2 along e
        let y = Letter { edge: e, forward: side == Side::A };

        let vmap = |v: VertexId| -> VertexId {
            let v = if v == v1 { v2 } else { v };
            VertexId(if v.0 > v1.0 { v.0 - 1 } else { v.0 })
        };
        let emap = |f: EdgeId| -> EdgeId { EdgeId(if f.0 > e.0 { f.0 - 1 } else { f.0 }) };

        let vertices: Vec<Vertex> =
            old.vertices().iter().enumerate().filter(|(i, _)| *i != v1.0).map(|(_, v)| v.clone()).collect();
        let mut edges = Vec::new();
        let mut reattached = Vec::new();
        for (i, f) in old.edges().iter().enumerate() {
            if i == e.0 {
                continue;
            }
            let end = |s: Side| -> (VertexId, Mono) {
                let x = f.end(s);
                if x.vertex == v1 {
                    (vmap(v2), x.inclusion.then(&merge))
                } else {
                    (vmap(x.vertex), x.inclusion.clone())
                }
            };
            for s in [Side::A, Side::B] {
                if f.end(s).vertex == v1 {
                    reattached.push(EndRef { edge: emap(EdgeId(i)), side: s });
                }
            }
            edges.push(EdgeSpec { name: f.name.clone(), group: f.group.clone(), a: end(Side::A), b: end(Side::B) });
        }
        let new = GraphOfGroups::new(vertices, edges, vmap(old.base()), None)?;

        // old paths to new: elements at v1 pushed through the edge, e erased
        let phi = |raw: &[Syllable]| -> Vec<Syllable> {
            let mut out = Vec::with_capacity(raw.len());
            let mut cur = old.base();
            for s in raw {
                match *s {
                    Syllable::Elem(g) => out.push(Syllable::Elem(if cur == v1 { merge.apply(g) } else { g })),
                    Syllable::Letter(l) => {
                        if l.edge != e {
                            out.push(Syllable::Letter(Letter { edge: emap(l.edge), forward: l.forward }));
                        }
                        cur = old.target(l);
                    }
                }
            }
            out
        };
        // new paths to old: detour through e for ends moved off v1
        let old_edge = |f: EdgeId| -> EdgeId { EdgeId(if f.0 >= e.0 { f.0 + 1 } else { f.0 }) };
        let psi = |raw: &[Syllable]| -> Vec<Syllable> {
            let mut out = Vec::with_capacity(raw.len() + 4);
            if old.base() == v1 {
                out.push(Syllable::Letter(y));
            }
            for s in raw {
                match *s {
                    Syllable::Elem(g) => out.push(Syllable::Elem(g)),
                    Syllable::Letter(l) => {
                        let ol = Letter { edge: old_edge(l.edge), forward: l.forward };
                        if old.source(ol) == v1 {
                            out.push(Syllable::Letter(y.reversed()));
                        }
                        out.push(Syllable::Letter(ol));
                        if old.target(ol) == v1 {
                            out.push(Syllable::Letter(y));
                        }
                    }
                }
            }
            if old.base() == v1 {
                out.push(Syllable::Letter(y.reversed()));
            }
            out
        };

        let forward = Translation::build(old, &new, |_, raw| Ok(new.normal_form(&phi(&raw))?))?;
        let backward = Translation::build(&new, old, |_, raw| Ok(old.normal_form(&psi(&raw))?))?;
        let to_ref = Translation::build(&new, &self.reference, |gen, _| {
            self.to_ref.apply(old, &self.reference, backward.image(gen))
        })?;
        let from_ref = Translation::build(&self.reference, &new, |gen, _| {
            forward.apply(old, &new, self.from_ref.image(gen))
        })?;

        let mut subgroup: Vec<Elem> = mu2.image_list().to_vec();
        subgroup.sort();
        let inverse = MoveKind::Expand {
            vertex: vmap(v2),
            subgroup,
            ends: reattached.into_iter().map(|end| (end, Elem::IDENTITY)).collect(),
        };
        let kind = MoveKind::Collapse { edge: e, side };
        let record = MoveRecord {
            label: kind.describe(old),
            kind,
            source: old.id(),
            target: new.id(),
            inverse,
            forward,
            backward,
        };
        let m = MarkedGog {
            gog: new,
            reference: self.reference.clone(),
            ref_classes: self.ref_classes.clone(),
            to_ref,
            from_ref,
        };
        Ok((m, record))
    }

    /// Expands `v` along the subgroup `a`, moving each listed end to the new
    /// vertex with its inclusion conjugated by the paired element.
    pub fn expand(
        &self,
        v: VertexId,
        a: &Subgroup,
        ends: &[(EndRef, Elem)],
    ) -> Result<(MarkedGog, MoveRecord), MoveError> {
        let old = &self.gog;
        if v.0 >= old.vertex_count() {
            return Err(MoveError::UnknownVertex(v.0));
        }
        let gv = old.group(v);
        if **a.parent() != **gv {
            return Err(MoveError::NotSubgroup);
        }
        let mut moved: BTreeMap<EndRef, Elem> = BTreeMap::new();
        for &(end, k) in ends {
            if end.edge.0 >= old.edge_count() || old.end(end).vertex != v {
                return Err(MoveError::NotIncident(end));
            }
            if k.idx() >= gv.order() {
                return Err(GroupError::UnknownElement(format!("#{}", k.0)).into());
            }
            if moved.insert(end, k).is_some() {
                return Err(MoveError::DuplicateEnd(end));
            }
            if !old.end(end).image().conjugate(k).is_subset(a) {
                return Err(MoveError::Containment(end));
            }
        }
        let agrp: Arc<FiniteGroup> = if a.order() == gv.order() {
            gv.clone()
        } else {
            FiniteGroup::from_subgroup(&format!("{}_{}", gv.name(), a.lattice_index()), a)
        };
        let into_v = Mono::inclusion(&agrp, gv)?;
        let w = VertexId(old.vertex_count());
        let f = EdgeId(old.edge_count());
        let wname = fresh_name(old.vertices().iter().map(|x| x.name.clone()), "w");
        let fname = fresh_name(old.edges().iter().map(|x| x.name.clone()), "f");

        let mut vertices = old.vertices().to_vec();
        vertices.push(Vertex { name: wname, group: agrp.clone() });
        let mut edges = Vec::new();
        for (i, x) in old.edges().iter().enumerate() {
            let end = |s: Side| -> Result<(VertexId, Mono), MoveError> {
                let er = EndRef { edge: EdgeId(i), side: s };
                let xe = x.end(s);
                match moved.get(&er) {
                    Some(&k) => Ok((w, xe.inclusion.twisted(k).corestrict(&agrp)?)),
                    None => Ok((xe.vertex, xe.inclusion.clone())),
                }
            };
            edges.push(EdgeSpec { name: x.name.clone(), group: x.group.clone(), a: end(Side::A)?, b: end(Side::B)? });
        }
        edges.push(EdgeSpec { name: fname, group: agrp.clone(), a: (v, into_v.clone()), b: (w, Mono::identity(&agrp)) });
        let new = GraphOfGroups::new(vertices, edges, old.base(), None)?;
        let fl = Letter { edge: f, forward: true };

        // old paths to new: moved ends are reached through f
        let phi = |raw: &[Syllable]| -> Vec<Syllable> {
            let mut out = Vec::with_capacity(raw.len() + 6);
            for s in raw {
                match *s {
                    Syllable::Elem(g) => out.push(Syllable::Elem(g)),
                    Syllable::Letter(l) => {
                        if let Some(&k) = moved.get(&l.source_end()) {
                            out.push(Syllable::Elem(gv.inv(k)));
                            out.push(Syllable::Letter(fl));
                        }
                        out.push(Syllable::Letter(l));
                        if let Some(&k) = moved.get(&l.target_end()) {
                            out.push(Syllable::Letter(fl.reversed()));
                            out.push(Syllable::Elem(k));
                        }
                    }
                }
            }
            out
        };
        // new paths to old: f erased, conjugators restored
        let psi = |raw: &[Syllable]| -> Vec<Syllable> {
            let mut out = Vec::with_capacity(raw.len() + 4);
            let mut cur = new.base();
            for s in raw {
                match *s {
                    Syllable::Elem(g) => {
                        out.push(Syllable::Elem(if cur == w { into_v.apply(g) } else { g }));
                    }
                    Syllable::Letter(l) => {
                        cur = new.target(l);
                        if l.edge == f {
                            continue;
                        }
                        if let Some(&k) = moved.get(&l.source_end()) {
                            out.push(Syllable::Elem(k));
                        }
                        out.push(Syllable::Letter(l));
                        if let Some(&k) = moved.get(&l.target_end()) {
                            out.push(Syllable::Elem(gv.inv(k)));
                        }
                    }
                }
            }
            out
        };

        let forward = Translation::build(old, &new, |_, raw| Ok(new.normal_form(&phi(&raw))?))?;
        let backward = Translation::build(&new, old, |_, raw| Ok(old.normal_form(&psi(&raw))?))?;
        let to_ref = Translation::build(&new, &self.reference, |gen, _| {
            self.to_ref.apply(old, &self.reference, backward.image(gen))
        })?;
        let from_ref = Translation::build(&self.reference, &new, |gen, _| {
            forward.apply(old, &new, self.from_ref.image(gen))
        })?;

        let kind = MoveKind::Expand { vertex: v, subgroup: a.members().to_vec(), ends: moved.into_iter().collect() };
        let record = MoveRecord {
            label: kind.describe(old),
            kind,
            source: old.id(),
            target: new.id(),
            inverse: MoveKind::Collapse { edge: f, side: Side::B },
            forward,
            backward,
        };
        let m = MarkedGog {
            gog: new,
            reference: self.reference.clone(),
            ref_classes: self.ref_classes.clone(),
            to_ref,
            from_ref,
        };
        Ok((m, record))
    }

    /// Every collapse, and every expansion within `caps`.
    pub fn legal_moves(&self, caps: &Caps) -> Vec<MoveKind> {
        let g = &self.gog;
        let mut out = Vec::new();
        for e in g.edge_ids() {
            let edge = g.edge(e);
            if edge.is_loop() {
                continue;
            }
            for side in [Side::A, Side::B] {
                if edge.end(side).inclusion.is_surjective() {
                    out.push(MoveKind::Collapse { edge: e, side });
                }
            }
        }
        if g.edge_count() >= caps.max_edges {
            return out;
        }
        for v in g.vertex_ids() {
            let gv = g.group(v);
            let ends = g.ends_at(v);
            if ends.len() > caps.valence_cap || gv.order() > caps.max_order {
                continue;
            }
            for a in gv.subgroups() {
                if a.order() > caps.max_order {
                    continue;
                }
                // per end, the admissible conjugators up to double cosets
                let options: Vec<Vec<Elem>> = ends.iter().map(|&end| conjugator_options(g, end, &a)).collect();
                for mask in 0u32..(1 << ends.len()) {
                    let chosen: Vec<usize> = (0..ends.len()).filter(|i| mask & (1 << i) != 0).collect();
                    if chosen.iter().any(|&i| options[i].is_empty()) {
                        continue;
                    }
                    let mut idx = vec![0usize; chosen.len()];
                    loop {
                        let list: Vec<(EndRef, Elem)> =
                            chosen.iter().zip(&idx).map(|(&i, &j)| (ends[i], options[i][j])).collect();
                        out.push(MoveKind::Expand { vertex: v, subgroup: a.members().to_vec(), ends: list });
                        // odometer over the conjugator choices
                        let mut p = 0;
                        while p < idx.len() {
                            idx[p] += 1;
                            if idx[p] < options[chosen[p]].len() {
                                break;
                            }
                            idx[p] = 0;
                            p += 1;
                        }
                        if p == idx.len() {
                            break;
                        }
                    }
                }
            }
        }
        out
    }
}

/// Elements `k` with `k · image(end) · k⁻¹ ⊆ a`, one per double coset
/// `a · k · image(end)`.
fn conjugator_options(g: &GraphOfGroups, end: EndRef, a: &Subgroup) -> Vec<Elem> {
    let gv = a.parent();
    let img = g.end(end).image();
    let mut seen: BTreeSet<Elem> = BTreeSet::new();
    let mut out = Vec::new();
    for k in gv.elements() {
        if seen.contains(&k) {
            continue;
        }
        for &x in a.members() {
            for &c in img.members() {
                seen.insert(gv.mul(gv.mul(x, k), c));
            }
        }
        if img.conjugate(k).is_subset(a) {
            out.push(k);
        }
    }
    out
}

/// Checks that `t` defines a homomorphism from the fundamental group of
/// `src` to that of `dst`.
fn check_hom(src: &GraphOfGroups, dst: &GraphOfGroups, t: &Translation) -> Result<(), String> {
    let err = |e: MoveError| e.to_string();
    for v in src.vertex_ids() {
        let gv = src.group(v);
        if !t.image(Generator::Vertex(v, Elem::IDENTITY)).is_identity() {
            return Err(format!("identity of `{}` not sent to 1", src.vertex(v).name));
        }
        for s in gv.generators() {
            let ts = t.image(Generator::Vertex(v, s));
            for x in gv.elements() {
                let lhs = dst.mul(t.image(Generator::Vertex(v, x)), ts).map_err(|e| err(e.into()))?;
                if lhs != *t.image(Generator::Vertex(v, gv.mul(x, s))) {
                    return Err(format!(
                        "vertex `{}`: {}·{} not preserved",
                        src.vertex(v).name,
                        gv.name_of(x),
                        gv.name_of(s)
                    ));
                }
            }
        }
    }
    for e in src.edge_ids() {
        let edge = src.edge(e);
        let (ea, eb) = (edge.end(Side::A), edge.end(Side::B));
        for c in edge.group.generators() {
            let lhs = t.image(Generator::Vertex(ea.vertex, ea.inclusion.apply(c)));
            let rhs = t.image(Generator::Vertex(eb.vertex, eb.inclusion.apply(c)));
            let ok = if src.in_tree(e) {
                lhs == rhs
            } else {
                let te = t.image(Generator::Stable(e));
                dst.mul(lhs, te).map_err(|e| err(e.into()))? == dst.mul(te, rhs).map_err(|e| err(e.into()))?
            };
            if !ok {
                return Err(format!("edge `{}` relation fails for {}", edge.name, edge.group.name_of(c)));
            }
        }
    }
    Ok(())
}

/// Searches for an equivariant isomorphism between the two marked trees,
/// compatible with the markings.
pub fn marked_iso(m1: &MarkedGog, m2: &MarkedGog) -> Result<IsoVerdict, MoveError> {
    marked_iso_with_radius(m1, m2, ISO_RADIUS)
}

pub fn marked_iso_with_radius(m1: &MarkedGog, m2: &MarkedGog, radius: usize) -> Result<IsoVerdict, MoveError> {
    if !m1.same_reference(m2) {
        return Err(MoveError::MismatchedReference);
    }
    let (g1, g2) = (&m1.gog, &m2.gog);
    if g1.vertex_count() != g2.vertex_count() {
        return Ok(IsoVerdict::Different("vertex counts differ".into()));
    }
    if g1.edge_count() != g2.edge_count() {
        return Ok(IsoVerdict::Different("edge counts differ".into()));
    }
    if m1.fingerprint()? != m2.fingerprint()? {
        return Ok(IsoVerdict::Different("vertex stabilizer classes differ".into()));
    }
    let phi = |x: &PathWord| m1.transfer(m2, x);
    // images of vertex-group generators
    let mut k: Vec<Vec<PathWord>> = Vec::new();
    for v in g1.vertex_ids() {
        let gens = g1.group(v).generators().into_iter().map(|x| phi(&g1.vertex_element(v, x))).collect::<Result<_, _>>()?;
        k.push(gens);
    }
    let exact = |v: VertexId, x: &TreeVertex| -> Result<bool, MoveError> {
        Ok(g2.group(x.orbit()).order() == g1.group(v).order() && g2.fixes_all(&k[v.0], x)?)
    };
    let root = g1
        .vertex_ids()
        .max_by(|a, b| g1.group(*a).order().cmp(&g1.group(*b).order()).then(b.0.cmp(&a.0)))
        .unwrap();
    let cap = DEFAULT_ORDER_CAP.max(g1.group(root).order());
    let center = g2.fixed_vertex(&k[root.0], cap)?;
    let mut roots = Vec::new();
    for x in g2.fixed_subtree(&k[root.0], &center, radius)? {
        if exact(root, &x)? {
            roots.push(x);
        }
    }
    // spanning-tree order from the root
    let mut order = vec![root];
    let mut via: BTreeMap<VertexId, (VertexId, EdgeId)> = BTreeMap::new();
    let mut queue = VecDeque::from([root]);
    let mut seen = BTreeSet::from([root]);
    while let Some(v) = queue.pop_front() {
        for end in g1.ends_at(v) {
            if !g1.in_tree(end.edge) {
                continue;
            }
            let w = g1.target(Letter::leaving(end));
            if seen.insert(w) {
                via.insert(w, (v, end.edge));
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    let mut edge_gens: Vec<Vec<PathWord>> = Vec::new();
    for e in g1.edge_ids() {
        let ea = g1.edge(e).end(Side::A);
        let gens = g1
            .edge(e)
            .group
            .generators()
            .into_iter()
            .map(|c| phi(&g1.vertex_element(ea.vertex, ea.inclusion.apply(c))))
            .collect::<Result<_, _>>()?;
        edge_gens.push(gens);
    }
    let mut stable: BTreeMap<EdgeId, PathWord> = BTreeMap::new();
    for e in g1.edge_ids() {
        if !g1.in_tree(e) {
            stable.insert(e, phi(&g1.normal_form(&generator_loop(g1, Generator::Stable(e)))?)?);
        }
    }

    let mut assign: Vec<Option<TreeVertex>> = vec![None; g1.vertex_count()];
    for r in roots {
        assign[root.0] = Some(r);
        if let Some(w) = extend(g2, &order, &via, 1, &mut assign, &edge_gens, &exact, &|w| final_check(g1, g2, w, &edge_gens, &stable))? {
            return Ok(IsoVerdict::Isomorphic(w));
        }
    }
    Ok(IsoVerdict::NotProven)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g2: &GraphOfGroups,
    order: &[VertexId],
    via: &BTreeMap<VertexId, (VertexId, EdgeId)>,
    pos: usize,
    assign: &mut Vec<Option<TreeVertex>>,
    edge_gens: &[Vec<PathWord>],
    exact: &dyn Fn(VertexId, &TreeVertex) -> Result<bool, MoveError>,
    done: &dyn Fn(&[TreeVertex]) -> Result<bool, MoveError>,
) -> Result<Option<Vec<TreeVertex>>, MoveError> {
    if pos == order.len() {
        let w: Vec<TreeVertex> = assign.iter().map(|x| x.clone().unwrap()).collect();
        return Ok(if done(&w)? { Some(w) } else { None });
    }
    let v = order[pos];
    let (p, e) = via[&v];
    let xp = assign[p.0].clone().unwrap();
    for x in g2.neighbors(&xp) {
        if !exact(v, &x)? {
            continue;
        }
        if !g2.fixes_all(&edge_gens[e.0], &x)? || !g2.fixes_all(&edge_gens[e.0], &xp)? {
            continue;
        }
        if assign.iter().flatten().any(|y| y.orbit() == x.orbit()) {
            continue;
        }
        assign[v.0] = Some(x);
        if let Some(w) = extend(g2, order, via, pos + 1, assign, edge_gens, exact, done)? {
            return Ok(Some(w));
        }
        assign[v.0] = None;
    }
    Ok(None)
}

/// The quotient edge of the tree edge between adjacent `p` and `q`.
pub fn tree_edge_orbit(p: &TreeVertex, q: &TreeVertex) -> Option<EdgeId> {
    if q.depth() == p.depth() + 1 && q.heads()[..p.depth()] == *p.heads() {
        q.heads().last().map(|h| h.1.edge)
    } else if p.depth() == q.depth() + 1 && p.heads()[..q.depth()] == *q.heads() {
        p.heads().last().map(|h| h.1.edge)
    } else {
        None
    }
}

fn final_check(
    g1: &GraphOfGroups,
    g2: &GraphOfGroups,
    w: &[TreeVertex],
    edge_gens: &[Vec<PathWord>],
    stable: &BTreeMap<EdgeId, PathWord>,
) -> Result<bool, MoveError> {
    let orbits: BTreeSet<VertexId> = w.iter().map(|x| x.orbit()).collect();
    if orbits.len() != g2.vertex_count() {
        return Ok(false);
    }
    let mut hit = BTreeSet::new();
    for e in g1.edge_ids() {
        let edge = g1.edge(e);
        let xo = &w[edge.end(Side::A).vertex.0];
        let xt = &w[edge.end(Side::B).vertex.0];
        let xt = match stable.get(&e) {
            Some(t) => g2.act(t, xt)?,
            None => xt.clone(),
        };
        let Some(e2) = tree_edge_orbit(xo, &xt) else {
            return Ok(false);
        };
        if g2.edge(e2).group.order() != edge.group.order() {
            return Ok(false);
        }
        if !g2.fixes_all(&edge_gens[e.0], xo)? || !g2.fixes_all(&edge_gens[e.0], &xt)? {
            return Ok(false);
        }
        if !hit.insert(e2) {
            return Ok(false);
        }
    }
    Ok(hit.len() == g2.edge_count())
}

/// Limits for expansion and enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    pub depth: usize,
    pub max_edges: usize,
    pub max_order: usize,
    pub valence_cap: usize,
    pub iso_radius: usize,
    /// Explore successors in reverse order (for tie-breaking checks).
    pub reverse: bool,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { depth: 3, max_edges: 8, max_order: 48, valence_cap: 4, iso_radius: ISO_RADIUS, reverse: false }
    }
}

/// One marked class found by the enumeration.
#[derive(Clone, Debug)]
pub struct ClassEntry {
    pub marked: MarkedGog,
    pub depth: usize,
    pub reduced: bool,
    pub fingerprint: Fingerprint,
}

/// A move between two classes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MoveEdge {
    pub from: usize,
    pub to: usize,
    pub collapse: bool,
    pub label: String,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub classes: Vec<ClassEntry>,
    pub moves: Vec<MoveEdge>,
    /// The depth cap cut off classes that would otherwise be reached.
    pub truncated: bool,
    /// Comparisons that ended without a proof either way.
    pub not_proven: usize,
}

impl Enumeration {
    pub fn reduced(&self) -> impl Iterator<Item = (usize, &ClassEntry)> {
        self.classes.iter().enumerate().filter(|(_, c)| c.reduced)
    }

    pub fn reduced_count(&self) -> usize {
        self.reduced().count()
    }
}

struct Dedup {
    classes: Vec<ClassEntry>,
    buckets: BTreeMap<Fingerprint, Vec<usize>>,
    not_proven: usize,
    radius: usize,
}

impl Dedup {
    /// Index of the class of `m`, and whether it is new.
    fn find(&mut self, m: &MarkedGog) -> Result<(Option<usize>, Fingerprint), MoveError> {
        let fp = m.fingerprint()?;
        if let Some(bucket) = self.buckets.get(&fp) {
            for &i in bucket {
                match marked_iso_with_radius(&self.classes[i].marked, m, self.radius)? {
                    IsoVerdict::Isomorphic(_) => return Ok((Some(i), fp)),
                    IsoVerdict::NotProven => self.not_proven += 1,
                    IsoVerdict::Different(_) => {}
                }
            }
        }
        Ok((None, fp))
    }

    fn insert(&mut self, m: MarkedGog, fp: Fingerprint, depth: usize) -> usize {
        let i = self.classes.len();
        let reduced = m.gog.is_reduced();
        self.buckets.entry(fp.clone()).or_default().push(i);
        self.classes.push(ClassEntry { marked: m, depth, reduced, fingerprint: fp });
        i
    }
}

/// Breadth-first closure of `m` under collapses and expansions, keeping
/// only minimal graphs and identifying marked-isomorphic ones.
pub fn enumerate_reduced(m: &MarkedGog, caps: &Caps) -> Result<Enumeration, MoveError> {
    if let Some(v) = m.gog.check_minimal() {
        return Err(MoveError::NotMinimal(m.gog.vertex(v).name.clone()));
    }
    let mut d = Dedup { classes: Vec::new(), buckets: BTreeMap::new(), not_proven: 0, radius: caps.iso_radius };
    let fp = m.fingerprint()?;
    d.insert(m.clone(), fp, 0);
    let mut moves = BTreeSet::new();
    let mut frontier = vec![0usize];
    let mut truncated = false;
    for depth in 1..=caps.depth + 1 {
        let mut next = Vec::new();
        for &i in &frontier {
            let src = d.classes[i].marked.clone();
            let mut kinds = src.legal_moves(caps);
            if caps.reverse {
                kinds.reverse();
            }
            for kind in kinds {
                let (t, rec) = src.apply(&kind)?;
                if !t.gog.is_minimal() || t.gog.edge_count() > caps.max_edges {
                    continue;
                }
                let (found, fp) = d.find(&t)?;
                let j = match found {
                    Some(j) => j,
                    None if depth > caps.depth => {
                        truncated = true;
                        continue;
                    }
                    None => {
                        let j = d.insert(t, fp, depth);
                        next.push(j);
                        j
                    }
                };
                moves.insert(MoveEdge { from: i, to: j, collapse: kind.is_collapse(), label: rec.label });
            }
            if truncated {
                break;
            }
        }
        if depth > caps.depth || next.is_empty() {
            break;
        }
        frontier = next;
    }
    let e = Enumeration { classes: d.classes, moves: moves.into_iter().collect(), truncated, not_proven: d.not_proven };
    if e.reduced_count() == 0 {
        return Err(MoveError::NoReduced);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::dsl::parse_gog;

    fn marked(src: &str) -> MarkedGog {
        MarkedGog::new(parse_gog(src).unwrap())
    }

    fn end(g: &GraphOfGroups, edge: &str, side: Side) -> EndRef {
        EndRef { edge: g.edge_by_name(edge).unwrap(), side }
    }

    #[test]
    fn identity_marking_verifies() {
        for (_, src) in corpus::ALL {
            let m = marked(src);
            m.verify().unwrap();
            m.check_class_bijection().unwrap();
        }
    }

    #[test]
    fn collapse_nred() {
        let m = marked(corpus::NRED);
        let e = m.gog().edge_by_name("e").unwrap();
        let (c, rec) = m.collapse(e, None).unwrap();
        c.verify().unwrap();
        assert_eq!(c.gog().vertex_count(), 1);
        assert_eq!(c.gog().edge_count(), 0);
        let w = m.gog().vertex_by_name("w").unwrap();
        let x = m.gog().group(w).lookup("x").unwrap();
        let img = rec.forward.image(Generator::Vertex(w, x));
        assert_eq!(c.gog().print_word(img), "Z4.a^2");
        assert!(matches!(rec.inverse, MoveKind::Expand { .. }));
    }

    #[test]
    fn collapse_errors() {
        let m = marked(corpus::SSF1);
        assert!(matches!(m.collapse(EdgeId(0), None), Err(MoveError::NotCollapsible(_))));
        let h = marked(corpus::HNN1);
        assert!(matches!(h.collapse(EdgeId(0), None), Err(MoveError::LoopEdge(_))));
        assert!(matches!(h.collapse(EdgeId(3), None), Err(MoveError::UnknownEdge(3))));
    }

    #[test]
    fn expand_triv_and_collapse_back() {
        let m = marked(corpus::TRIV);
        let v = VertexId(0);
        let g = m.gog().group(v).clone();
        let a = Subgroup::generated(&g, &[g.parse_word("b^3").unwrap()]);
        let (x, rec) = m.expand(v, &a, &[]).unwrap();
        x.verify().unwrap();
        assert_eq!(x.gog().vertex_count(), 2);
        let (y, _) = x.apply(&rec.inverse).unwrap();
        y.verify().unwrap();
        assert_eq!(y.gog().id(), m.gog().id());
        assert!(marked_iso(&m, &y).unwrap().is_isomorphic());
    }

    #[test]
    fn expand_ssf1_round_trip() {
        let m = marked(corpus::SSF1);
        let g = m.gog();
        let u = g.vertex_by_name("u").unwrap();
        let a = Subgroup::generated(g.group(u), &[g.group(u).parse_word("a^2").unwrap()]);
        let (x, rec) = m.expand(u, &a, &[(end(g, "e", Side::A), Elem::IDENTITY)]).unwrap();
        x.verify().unwrap();
        x.check_class_bijection().unwrap();
        assert_eq!(x.gog().vertex_count(), 3);
        assert!(x.gog().is_minimal());
        assert!(!x.gog().is_reduced());
        let (y, _) = x.apply(&rec.inverse).unwrap();
        y.verify().unwrap();
        assert!(marked_iso(&m, &y).unwrap().is_isomorphic());
        // collapsing the old edge instead slides back to an isomorphic tree
        let e = x.gog().edge_by_name("e").unwrap();
        let (z, _) = x.collapse(e, None).unwrap();
        z.verify().unwrap();
        assert!(marked_iso(&m, &z).unwrap().is_isomorphic());
    }

    #[test]
    fn expand_errors() {
        let m = marked(corpus::SSF1);
        let g = m.gog();
        let u = g.vertex_by_name("u").unwrap();
        let triv = Subgroup::trivial(g.group(u));
        assert!(matches!(
            m.expand(u, &triv, &[(end(g, "e", Side::A), Elem::IDENTITY)]),
            Err(MoveError::Containment(_))
        ));
        assert!(matches!(
            m.expand(u, &triv, &[(end(g, "e", Side::B), Elem::IDENTITY)]),
            Err(MoveError::NotIncident(_))
        ));
        let v = g.vertex_by_name("v").unwrap();
        assert!(matches!(m.expand(v, &triv, &[]), Err(MoveError::NotSubgroup)));
    }

    #[test]
    fn iso_self_and_different() {
        let m = marked(corpus::FREE3);
        match marked_iso(&m, &m).unwrap() {
            IsoVerdict::Isomorphic(w) => {
                for v in m.gog().vertex_ids() {
                    assert_eq!(w[v.0], m.gog().standard_lift(v));
                }
            }
            other => panic!("{other:?}"),
        }
        // slide c past b: a - c - b
        let g = m.gog();
        let b = g.vertex_by_name("b").unwrap();
        let ends = [(end(g, "eab", Side::B), Elem::IDENTITY), (end(g, "ebc", Side::A), Elem::IDENTITY)];
        let (x, _) = m.expand(b, &Subgroup::trivial(g.group(b)), &ends).unwrap();
        let ebc = x.gog().edge_by_name("ebc").unwrap();
        let (y, _) = x.collapse(ebc, None).unwrap();
        y.verify().unwrap();
        assert!(y.gog().is_reduced());
        assert!(matches!(marked_iso(&m, &y).unwrap(), IsoVerdict::Different(_)));
    }

    #[test]
    fn enumerate_small_spaces() {
        let e = enumerate_reduced(&marked(corpus::TRIV), &Caps::default()).unwrap();
        assert_eq!(e.reduced_count(), 1);
        let caps = Caps { depth: 2, ..Caps::default() };
        let e = enumerate_reduced(&marked(corpus::FREE3), &caps).unwrap();
        assert!(e.reduced_count() >= 3, "{}", e.reduced_count());
        let e = enumerate_reduced(&marked(corpus::SSF1), &caps).unwrap();
        assert_eq!(e.reduced_count(), 1);
    }
}
