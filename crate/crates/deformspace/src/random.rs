//! Random valid graphs of finite groups.

use std::sync::{Arc, OnceLock};

use deformspace_core::fingroup::{Elem, FiniteGroup, Mono, Subgroup};
use deformspace_core::gog::{self, EdgeSpec, GraphOfGroups, VertexId};
use rand::seq::IndexedRandom;
use rand::Rng;

fn s4() -> &'static Arc<FiniteGroup> {
    static S4: OnceLock<Arc<FiniteGroup>> = OnceLock::new();
    S4.get_or_init(|| FiniteGroup::symmetric("S4", 4).expect("S4"))
}

/// Vertex groups to draw from: every subgroup class of S4, plus a few
/// cyclic groups that do not embed in it.
fn library() -> &'static Vec<Subgroup> {
    static LIB: OnceLock<Vec<Subgroup>> = OnceLock::new();
    LIB.get_or_init(|| {
        let mut out = s4().subgroup_class_reps();
        for n in [5, 6, 8, 12] {
            out.push(Subgroup::whole(&FiniteGroup::cyclic("C", n, "g").expect("cyclic")));
        }
        out
    })
}

pub fn random_group<R: Rng + ?Sized>(rng: &mut R, name: &str, max_order: usize) -> Arc<FiniteGroup> {
    let choices: Vec<&Subgroup> = library().iter().filter(|s| s.order() <= max_order).collect();
    FiniteGroup::from_subgroup(name, choices.choose(rng).expect("nonempty library"))
}

/// A random injective homomorphism `c -> g`, found by sampling images of
/// the generators of `c` among elements of matching order.
pub fn random_mono<R: Rng + ?Sized>(rng: &mut R, c: &Arc<FiniteGroup>, g: &Arc<FiniteGroup>, tries: usize) -> Option<Mono> {
    let gens = c.generators();
    let by_order: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&x| g.elements().filter(|&y| g.element_order(y) == c.element_order(x)).collect())
        .collect();
    if by_order.iter().any(Vec::is_empty) {
        return None;
    }
    for _ in 0..tries {
        let pairs: Vec<(Elem, Elem)> = gens.iter().zip(&by_order).map(|(&x, ys)| (x, *ys.choose(rng).unwrap())).collect();
        if let Ok(m) = Mono::check(c, g, &pairs) {
            return Some(m);
        }
    }
    None
}

/// A random connected graph of groups with vertex groups of order at most
/// `max_order` and at most `max_edges` edges (loops and multi-edges allowed).
pub fn random_gog<R: Rng + ?Sized>(rng: &mut R, max_order: usize, max_edges: usize) -> GraphOfGroups {
    loop {
        if let Some(g) = try_random_gog(rng, max_order, max_edges) {
            return g;
        }
    }
}

fn try_random_gog<R: Rng + ?Sized>(rng: &mut R, max_order: usize, max_edges: usize) -> Option<GraphOfGroups> {
    let n_edges = if rng.random_bool(0.1) { 0 } else { rng.random_range(1..=max_edges.max(1)) };
    let n_vertices = rng.random_range(1..=n_edges + 1);
    let mut vertices = Vec::new();
    for i in 0..n_vertices {
        // a repeated group makes collapsible edges likely
        let grp = if i > 0 && rng.random_bool(0.25) {
            let prev: &gog::Vertex = &vertices[rng.random_range(0..i)];
            FiniteGroup::from_subgroup(&format!("G{i}"), &Subgroup::whole(&prev.group))
        } else {
            random_group(rng, &format!("G{i}"), max_order)
        };
        vertices.push(gog::vertex(&format!("v{i}"), &grp));
    }
    let mut ends: Vec<(usize, usize)> = (1..n_vertices).map(|i| (rng.random_range(0..i), i)).collect();
    while ends.len() < n_edges {
        ends.push((rng.random_range(0..n_vertices), rng.random_range(0..n_vertices)));
    }
    let mut edges = Vec::new();
    for (j, &(a, b)) in ends.iter().enumerate() {
        let (ga, gb) = (&vertices[a].group, &vertices[b].group);
        let lattice = ga.subgroups();
        let sub = if rng.random_bool(0.3) { Subgroup::whole(ga) } else { lattice.choose(rng).unwrap().clone() };
        let c = FiniteGroup::from_subgroup(&format!("C{j}"), &sub);
        let into_a = Mono::check(&c, ga, &c.generators().iter().map(|&x| (x, sub.members()[x.idx()])).collect::<Vec<_>>()).ok()?;
        let into_b = random_mono(rng, &c, gb, 200)?;
        edges.push(EdgeSpec { name: format!("e{j}"), group: c, a: (VertexId(a), into_a), b: (VertexId(b), into_b) });
    }
    GraphOfGroups::new(vertices, edges, VertexId(0), None).ok()
}
