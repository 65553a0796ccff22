//! Graphs of finite groups and the structural predicates on their Bass-Serre
//! trees (reduced, minimal, strongly slide-free), evaluated on quotient data.
//!
//! Tree edges at a lift of a vertex `v` correspond to pairs (incident end,
//! left coset of that end's image in `G_v`); two such edges are in the same
//! `G_v`-orbit exactly when they come from the same end.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::fingroup::{Elem, FiniteGroup, GroupSpec, Mono, Subgroup};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }

    fn idx(self) -> usize {
        match self {
            Side::A => 0,
            Side::B => 1,
        }
    }
}

/// One end of an edge.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EndRef {
    pub edge: EdgeId,
    pub side: Side,
}

/// An oriented edge. `forward` runs from the A end to the B end.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    pub edge: EdgeId,
    pub forward: bool,
}

impl Letter {
    pub fn reversed(self) -> Letter {
        Letter {
            edge: self.edge,
            forward: !self.forward,
        }
    }

    /// The end this letter leaves from.
    pub fn source_end(self) -> EndRef {
        EndRef {
            edge: self.edge,
            side: if self.forward { Side::A } else { Side::B },
        }
    }

    /// The end this letter arrives at.
    pub fn target_end(self) -> EndRef {
        EndRef {
            edge: self.edge,
            side: if self.forward { Side::B } else { Side::A },
        }
    }

    /// The letter leaving through `end`.
    pub fn leaving(end: EndRef) -> Letter {
        Letter {
            edge: end.edge,
            forward: end.side == Side::A,
        }
    }
}

/// Content hash of a graph of groups; words carry it to detect mixing graphs.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GraphId(pub u64);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GogError {
    #[error("graph has no vertices")]
    NoVertices,
    #[error("unknown vertex index {0}")]
    UnknownVertex(usize),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("inclusion at {edge}/{side:?} does not go from the edge group to the vertex group")]
    InclusionMismatch { edge: String, side: Side },
    #[error("graph is disconnected: vertex `{0}` unreachable from the base")]
    Disconnected(String),
    #[error("invalid spanning tree: {0}")]
    BadTree(String),
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub name: String,
    pub group: Arc<FiniteGroup>,
}

/// Local data of one edge end: where it attaches and how.
#[derive(Clone, Debug)]
pub struct EdgeEnd {
    pub vertex: VertexId,
    pub inclusion: Mono,
    image: Subgroup,
    transversal: Vec<Elem>,
    /// `split[h] = (r, c)` with `h = r * inclusion(c)` and `r` a transversal element.
    split: Vec<(Elem, Elem)>,
}

impl EdgeEnd {
    fn new(vertex: VertexId, inclusion: Mono) -> EdgeEnd {
        let image = inclusion.image();
        let transversal = image.left_transversal();
        let g = inclusion.codomain().clone();
        let split = g
            .elements()
            .map(|h| {
                let r = image.coset_rep(h);
                let c = inclusion
                    .preimage(g.mul(g.inv(r), h))
                    .expect("coset decomposition");
                (r, c)
            })
            .collect();
        EdgeEnd {
            vertex,
            inclusion,
            image,
            transversal,
            split,
        }
    }

    pub fn image(&self) -> &Subgroup {
        &self.image
    }

    /// Least representatives of the left cosets of the image.
    pub fn transversal(&self) -> &[Elem] {
        &self.transversal
    }

    /// `h = r * inclusion(c)`.
    #[inline]
    pub fn split(&self, h: Elem) -> (Elem, Elem) {
        self.split[h.idx()]
    }

    pub fn index(&self) -> usize {
        self.image.index()
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub name: String,
    pub group: Arc<FiniteGroup>,
    ends: [EdgeEnd; 2],
}

impl Edge {
    pub fn end(&self, side: Side) -> &EdgeEnd {
        &self.ends[side.idx()]
    }

    pub fn is_loop(&self) -> bool {
        self.ends[0].vertex == self.ends[1].vertex
    }
}

/// Input record for building an edge.
#[derive(Clone, Debug)]
pub struct EdgeSpec {
    pub name: String,
    pub group: Arc<FiniteGroup>,
    pub a: (VertexId, Mono),
    pub b: (VertexId, Mono),
}

/// A finite graph of finite groups with a base vertex and a spanning tree.
#[derive(Clone)]
pub struct GraphOfGroups {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    base: VertexId,
    tree: BTreeSet<EdgeId>,
    /// Letters of the spanning-tree path from the base to each vertex.
    tree_paths: Vec<Vec<Letter>>,
    id: GraphId,
}

impl fmt::Debug for GraphOfGroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphOfGroups")
            .field(
                "vertices",
                &self
                    .vertices
                    .iter()
                    .map(|v| (&v.name, v.group.order()))
                    .collect::<Vec<_>>(),
            )
            .field(
                "edges",
                &self.edges.iter().map(|e| &e.name).collect::<Vec<_>>(),
            )
            .field("id", &self.id)
            .finish()
    }
}

/// A collapsible non-loop edge: the end on `side` is surjective.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CollapsibleEdge {
    pub edge: EdgeId,
    pub side: Side,
}

/// Two distinct ends at `vertex` with `conjugator * image(end1) * conjugator^-1 ⊆ image(end2)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SlideWitness {
    pub vertex: VertexId,
    pub end1: EndRef,
    pub end2: EndRef,
    pub conjugator: Elem,
}

impl GraphOfGroups {
    pub fn new(
        vertices: Vec<Vertex>,
        edges: Vec<EdgeSpec>,
        base: VertexId,
        tree: Option<BTreeSet<EdgeId>>,
    ) -> Result<GraphOfGroups, GogError> {
        if vertices.is_empty() {
            return Err(GogError::NoVertices);
        }
        let mut names = BTreeSet::new();
        for v in &vertices {
            if !names.insert(v.name.clone()) {
                return Err(GogError::DuplicateName(v.name.clone()));
            }
        }
        let mut enames = BTreeSet::new();
        for e in &edges {
            if !enames.insert(e.name.clone()) {
                return Err(GogError::DuplicateName(e.name.clone()));
            }
        }
        if base.0 >= vertices.len() {
            return Err(GogError::UnknownVertex(base.0));
        }
        let mut built = Vec::with_capacity(edges.len());
        for spec in edges {
            for (side, (v, m)) in [(Side::A, &spec.a), (Side::B, &spec.b)] {
                if v.0 >= vertices.len() {
                    return Err(GogError::UnknownVertex(v.0));
                }
                if **m.domain() != *spec.group || **m.codomain() != *vertices[v.0].group {
                    return Err(GogError::InclusionMismatch {
                        edge: spec.name.clone(),
                        side,
                    });
                }
            }
            built.push(Edge {
                name: spec.name,
                group: spec.group,
                ends: [
                    EdgeEnd::new(spec.a.0, spec.a.1),
                    EdgeEnd::new(spec.b.0, spec.b.1),
                ],
            });
        }
        let mut g = GraphOfGroups {
            vertices,
            edges: built,
            base,
            tree: BTreeSet::new(),
            tree_paths: Vec::new(),
            id: GraphId(0),
        };
        let tree = match tree {
            Some(t) => t,
            None => g.default_tree()?,
        };
        g.tree_paths = g.validate_tree(&tree)?;
        g.tree = tree;
        g.id = g.compute_id();
        Ok(g)
    }

    /// Breadth-first from the base, taking incident edges in name order.
    fn default_tree(&self) -> Result<BTreeSet<EdgeId>, GogError> {
        let mut order: Vec<EdgeId> = (0..self.edges.len()).map(EdgeId).collect();
        order.sort_by(|a, b| self.edges[a.0].name.cmp(&self.edges[b.0].name));
        let mut seen = vec![false; self.vertices.len()];
        seen[self.base.0] = true;
        let mut queue = VecDeque::from([self.base]);
        let mut tree = BTreeSet::new();
        while let Some(v) = queue.pop_front() {
            for &e in &order {
                let edge = &self.edges[e.0];
                if edge.is_loop() {
                    continue;
                }
                let (x, y) = (edge.ends[0].vertex, edge.ends[1].vertex);
                let other = if x == v {
                    y
                } else if y == v {
                    x
                } else {
                    continue;
                };
                if !seen[other.0] {
                    seen[other.0] = true;
                    tree.insert(e);
                    queue.push_back(other);
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(GogError::Disconnected(self.vertices[i].name.clone()));
        }
        Ok(tree)
    }

    fn validate_tree(&self, tree: &BTreeSet<EdgeId>) -> Result<Vec<Vec<Letter>>, GogError> {
        let n = self.vertices.len();
        if tree.len() + 1 != n {
            return Err(GogError::BadTree(alloc::format!(
                "{} edges for {} vertices",
                tree.len(),
                n
            )));
        }
        let mut paths: Vec<Option<Vec<Letter>>> = vec![None; n];
        paths[self.base.0] = Some(Vec::new());
        let mut queue = VecDeque::from([self.base]);
        while let Some(v) = queue.pop_front() {
            for &e in tree {
                let edge = self
                    .edges
                    .get(e.0)
                    .ok_or_else(|| GogError::BadTree("unknown edge".into()))?;
                if edge.is_loop() {
                    return Err(GogError::BadTree(alloc::format!(
                        "loop `{}` in tree",
                        edge.name
                    )));
                }
                let letter = if edge.ends[0].vertex == v {
                    Letter {
                        edge: e,
                        forward: true,
                    }
                } else if edge.ends[1].vertex == v {
                    Letter {
                        edge: e,
                        forward: false,
                    }
                } else {
                    continue;
                };
                let w = self.target(letter);
                if paths[w.0].is_none() {
                    let mut p = paths[v.0].clone().unwrap();
                    p.push(letter);
                    paths[w.0] = Some(p);
                    queue.push_back(w);
                }
            }
        }
        paths
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| GogError::Disconnected(self.vertices[i].name.clone())))
            .collect()
    }

    fn compute_id(&self) -> GraphId {
        let mut h = Fnv::new();
        let group = |h: &mut Fnv, g: &FiniteGroup| {
            h.str(g.name());
            for n in g.names() {
                h.str(n);
            }
            for a in g.elements() {
                for b in g.elements() {
                    h.u64(g.mul(a, b).0 as u64);
                }
            }
        };
        for v in &self.vertices {
            h.str(&v.name);
            group(&mut h, &v.group);
        }
        for e in &self.edges {
            h.str(&e.name);
            group(&mut h, &e.group);
            for end in &e.ends {
                h.u64(end.vertex.0 as u64);
                for &x in end.inclusion.image_list() {
                    h.u64(x.0 as u64);
                }
            }
        }
        h.u64(self.base.0 as u64);
        for t in &self.tree {
            h.u64(t.0 as u64);
        }
        GraphId(h.0)
    }

    pub fn id(&self) -> GraphId {
        self.id
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v.0]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn group(&self, v: VertexId) -> &Arc<FiniteGroup> {
        &self.vertices[v.0].group
    }

    pub fn end(&self, end: EndRef) -> &EdgeEnd {
        self.edges[end.edge.0].end(end.side)
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn spanning_tree(&self) -> &BTreeSet<EdgeId> {
        &self.tree
    }

    pub fn in_tree(&self, e: EdgeId) -> bool {
        self.tree.contains(&e)
    }

    /// Spanning-tree letters from the base to `v`.
    pub fn tree_path(&self, v: VertexId) -> &[Letter] {
        &self.tree_paths[v.0]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices
            .iter()
            .position(|v| v.name == name)
            .map(VertexId)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(EdgeId)
    }

    pub fn source(&self, l: Letter) -> VertexId {
        self.end(l.source_end()).vertex
    }

    pub fn target(&self, l: Letter) -> VertexId {
        self.end(l.target_end()).vertex
    }

    /// All edge ends attached to `v`, ordered by (edge, side). Loops give two.
    pub fn ends_at(&self, v: VertexId) -> Vec<EndRef> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            for side in [Side::A, Side::B] {
                if e.end(side).vertex == v {
                    out.push(EndRef {
                        edge: EdgeId(i),
                        side,
                    });
                }
            }
        }
        out
    }

    /// Degree of any lift of `v` in the Bass-Serre tree.
    pub fn tree_degree(&self, v: VertexId) -> usize {
        self.ends_at(v).iter().map(|&e| self.end(e).index()).sum()
    }

    /// `None` when reduced; otherwise a non-loop edge with a surjective end.
    pub fn check_reduced(&self) -> Option<CollapsibleEdge> {
        for (i, e) in self.edges.iter().enumerate() {
            if e.is_loop() {
                continue;
            }
            for side in [Side::A, Side::B] {
                if e.end(side).inclusion.is_surjective() {
                    return Some(CollapsibleEdge {
                        edge: EdgeId(i),
                        side,
                    });
                }
            }
        }
        None
    }

    pub fn is_reduced(&self) -> bool {
        self.check_reduced().is_none()
    }

    /// `None` when every vertex lift has tree degree at least 2.
    pub fn check_minimal(&self) -> Option<VertexId> {
        if self.vertices.len() == 1 && self.edges.is_empty() {
            return None;
        }
        self.vertex_ids().find(|&v| self.tree_degree(v) < 2)
    }

    pub fn is_minimal(&self) -> bool {
        self.check_minimal().is_none()
    }

    /// `None` when strongly slide-free; otherwise a witness pair of ends.
    pub fn check_strongly_slide_free(&self) -> Option<SlideWitness> {
        for v in self.vertex_ids() {
            let ends = self.ends_at(v);
            let g = self.group(v);
            for &e1 in &ends {
                for &e2 in &ends {
                    if e1 == e2 {
                        continue;
                    }
                    let (i1, i2) = (self.end(e1).image(), self.end(e2).image());
                    if i1.order() > i2.order() {
                        continue;
                    }
                    if let Some(x) = g.elements().find(|&x| i1.conjugate_within(x, i2)) {
                        return Some(SlideWitness {
                            vertex: v,
                            end1: e1,
                            end2: e2,
                            conjugator: x,
                        });
                    }
                }
            }
        }
        None
    }

    pub fn is_strongly_slide_free(&self) -> bool {
        self.check_strongly_slide_free().is_none()
    }

    /// A copy with vertices and edges renamed and reindexed by the given
    /// permutations (`perm[old] = new`), and optionally some edges flipped.
    pub fn relabeled(
        &self,
        vperm: &[usize],
        eperm: &[usize],
        flip: &BTreeSet<EdgeId>,
    ) -> Result<GraphOfGroups, GogError> {
        let mut vertices: Vec<Option<Vertex>> = vec![None; self.vertices.len()];
        for (old, v) in self.vertices.iter().enumerate() {
            vertices[vperm[old]] = Some(Vertex {
                name: alloc::format!("v{}", vperm[old]),
                group: v.group.clone(),
            });
        }
        let mut edges: Vec<Option<EdgeSpec>> = vec![None; self.edges.len()];
        for (old, e) in self.edges.iter().enumerate() {
            let mut a = (
                VertexId(vperm[e.ends[0].vertex.0]),
                e.ends[0].inclusion.clone(),
            );
            let mut b = (
                VertexId(vperm[e.ends[1].vertex.0]),
                e.ends[1].inclusion.clone(),
            );
            if flip.contains(&EdgeId(old)) {
                core::mem::swap(&mut a, &mut b);
            }
            edges[eperm[old]] = Some(EdgeSpec {
                name: alloc::format!("e{}", eperm[old]),
                group: e.group.clone(),
                a,
                b,
            });
        }
        GraphOfGroups::new(
            vertices.into_iter().map(Option::unwrap).collect(),
            edges.into_iter().map(Option::unwrap).collect(),
            VertexId(vperm[self.base.0]),
            None,
        )
    }

    /// Writes the graph back out in the DSL.
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        let mut emitted: BTreeMap<String, ()> = BTreeMap::new();
        let mut groups: Vec<&Arc<FiniteGroup>> = self.vertices.iter().map(|v| &v.group).collect();
        groups.extend(self.edges.iter().map(|e| &e.group));
        for g in groups {
            if emitted.insert(g.name().to_string(), ()).is_some() {
                continue;
            }
            out.push_str(&group_decl(g));
        }
        for v in &self.vertices {
            out.push_str(&alloc::format!("vertex {} : {}\n", v.name, v.group.name()));
        }
        for e in &self.edges {
            let maps = |end: &EdgeEnd| {
                let gens = e.group.generators();
                let parts: Vec<String> = gens
                    .iter()
                    .map(|&x| {
                        alloc::format!(
                            "{} -> {}",
                            e.group.name_of(x),
                            end.inclusion.codomain().name_of(end.inclusion.apply(x))
                        )
                    })
                    .collect();
                parts.join(", ")
            };
            out.push_str(&alloc::format!(
                "edge {} : {} from {} via {{ {} }} to {} via {{ {} }}\n",
                e.name,
                e.group.name(),
                self.vertices[e.ends[0].vertex.0].name,
                maps(&e.ends[0]),
                self.vertices[e.ends[1].vertex.0].name,
                maps(&e.ends[1]),
            ));
        }
        out.push_str(&alloc::format!(
            "base {}\n",
            self.vertices[self.base.0].name
        ));
        if !self.tree.is_empty() {
            let names: Vec<&str> = self
                .tree
                .iter()
                .map(|t| self.edges[t.0].name.as_str())
                .collect();
            out.push_str(&alloc::format!("tree {}\n", names.join(", ")));
        }
        out
    }
}

fn group_decl(g: &FiniteGroup) -> String {
    match g.spec() {
        GroupSpec::Cyclic { order, generator } => {
            alloc::format!("group {} = cyclic {} {}\n", g.name(), order, generator)
        }
        GroupSpec::Symmetric(n) => alloc::format!("group {} = symmetric {}\n", g.name(), n),
        GroupSpec::Table { .. } => {
            let mut s = alloc::format!("group {} = table {{\n", g.name());
            for a in g.elements() {
                let row: Vec<&str> = g.elements().map(|b| g.name_of(g.mul(a, b))).collect();
                s.push_str("  ");
                s.push_str(&row.join(" "));
                s.push('\n');
            }
            s.push_str("}\n");
            s
        }
    }
}

/// 64-bit FNV-1a.
pub(crate) struct Fnv(pub u64);

impl Fnv {
    pub fn new() -> Fnv {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    pub fn bytes(&mut self, b: &[u8]) {
        for &x in b {
            self.0 ^= x as u64;
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }

    pub fn u64(&mut self, x: u64) {
        self.bytes(&x.to_le_bytes());
    }

    pub fn str(&mut self, s: &str) {
        self.u64(s.len() as u64);
        self.bytes(s.as_bytes());
    }
}

/// Convenience for building a vertex.
pub fn vertex(name: &str, group: &Arc<FiniteGroup>) -> Vertex {
    Vertex {
        name: name.to_string(),
        group: group.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::dsl::parse_gog;

    fn load(src: &str) -> GraphOfGroups {
        parse_gog(src).unwrap()
    }

    #[test]
    fn ssf1_predicates() {
        let g = load(corpus::SSF1);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert!(g.is_reduced());
        assert!(g.is_minimal());
        // indices 2 and 3
        assert_eq!(g.tree_degree(VertexId(0)), 2);
        assert_eq!(g.tree_degree(VertexId(1)), 3);
        assert!(g.is_strongly_slide_free());
    }

    #[test]
    fn hnn1_predicates() {
        let g = load(corpus::HNN1);
        assert_eq!(g.vertex_count(), 1);
        assert!(g.edge(EdgeId(0)).is_loop());
        assert!(g.spanning_tree().is_empty());
        assert!(g.is_reduced());
        assert!(g.is_minimal());
        let w = g.check_strongly_slide_free().unwrap();
        assert_eq!(w.vertex, VertexId(0));
        assert_eq!(w.conjugator, Elem::IDENTITY);
        assert_ne!(w.end1, w.end2);
    }

    #[test]
    fn nred_and_triv() {
        let g = load(corpus::NRED);
        let w = g.check_reduced().unwrap();
        assert_eq!(w.edge, EdgeId(0));
        assert!(g
            .end(EndRef {
                edge: w.edge,
                side: w.side
            })
            .inclusion
            .is_surjective());
        let leaf = g.check_minimal().unwrap();
        assert_eq!(g.group(leaf).order(), 2);
        assert_eq!(g.tree_degree(leaf), 1);

        let t = load(corpus::TRIV);
        assert!(t.is_minimal());
        assert!(t.is_reduced());
        assert!(t.is_strongly_slide_free());
    }

    #[test]
    fn free3_fails_slide_free_in_the_middle() {
        let g = load(corpus::FREE3);
        let w = g.check_strongly_slide_free().unwrap();
        assert_eq!(g.vertex(w.vertex).name, "b");
        assert!(g.is_minimal() && g.is_reduced());
    }

    #[test]
    fn witnesses_are_self_certifying() {
        for (name, src) in corpus::ALL {
            let g = load(src);
            if let Some(w) = g.check_strongly_slide_free() {
                let i1 = g.end(w.end1).image();
                let i2 = g.end(w.end2).image();
                assert!(i1.conjugate_within(w.conjugator, i2), "{name}");
                assert_eq!(g.end(w.end1).vertex, w.vertex);
                assert_eq!(g.end(w.end2).vertex, w.vertex);
            }
            if let Some(w) = g.check_reduced() {
                assert!(!g.edge(w.edge).is_loop());
                assert!(
                    g.end(EndRef {
                        edge: w.edge,
                        side: w.side
                    })
                    .inclusion
                    .is_surjective(),
                    "{name}"
                );
            }
            if let Some(v) = g.check_minimal() {
                assert!(g.tree_degree(v) < 2, "{name}");
            }
        }
    }

    #[test]
    fn slide_free_invariant_under_relabeling_and_flips() {
        for (_, src) in corpus::ALL {
            let g = load(src);
            let nv = g.vertex_count();
            let ne = g.edge_count();
            let vperm: Vec<usize> = (0..nv).rev().collect();
            let eperm: Vec<usize> = (0..ne).rev().collect();
            let flips: BTreeSet<EdgeId> = g.edge_ids().filter(|e| e.0 % 2 == 0).collect();
            let h = g.relabeled(&vperm, &eperm, &flips).unwrap();
            assert_eq!(g.is_strongly_slide_free(), h.is_strongly_slide_free());
            assert_eq!(g.is_reduced(), h.is_reduced());
            assert_eq!(g.is_minimal(), h.is_minimal());
        }
    }

    #[test]
    fn ssf_and_minimal_implies_reduced_on_corpus() {
        for (name, src) in corpus::ALL {
            let g = load(src);
            if g.is_strongly_slide_free() && g.is_minimal() {
                assert!(g.is_reduced(), "{name}");
            }
        }
    }

    #[test]
    fn dsl_round_trip_preserves_id() {
        for (name, src) in corpus::ALL {
            let g = load(src);
            let again = parse_gog(&g.to_dsl()).unwrap();
            assert_eq!(g.id(), again.id(), "{name}");
        }
    }
}
