//! The canonical equivariant map from a strongly slide-free tree to a
//! reduced tree in the same deformation space, its certification as an
//! isomorphism, and fold and tripod diagnostics for when it is not one.
//!
//! Each source vertex orbit `v` is sent to the vertex of `Fix(G_v)` in the
//! target tree closest to the target base; a source vertex `[p]` over `v`
//! then goes to `φ(p T(v)⁻¹) · x_v`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::bass_serre::{BsError, PathWord, TreeVertex};
use crate::fingroup::{Elem, Subgroup, DEFAULT_ORDER_CAP};
use crate::gog::{EndRef, GraphOfGroups, Letter, VertexId};
use crate::moves::{Enumeration, MarkedGog, MoveError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RigidityError {
    #[error("marked graphs have different references")]
    MismatchedReference,
    #[error("image arcs overlap in at most one vertex: no fold")]
    NoFold,
    #[error("edges are not consecutive")]
    NotConsecutive,
    #[error("end {0:?} does not lie at the given vertex")]
    BadEnd(EndRef),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Tree(#[from] BsError),
}

type Result<T> = core::result::Result<T, RigidityError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Isomorphism,
    FoldDetected,
    /// Some check failed without any fold between adjacent edges.
    CheckFailed,
    PreconditionFailed,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Isomorphism => "isomorphism",
            Verdict::FoldDetected => "fold-detected",
            Verdict::CheckFailed => "check-failed",
            Verdict::PreconditionFailed => "precondition-failed",
        }
    }
}

/// Outcome of each certification check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Checks {
    /// Every vertex group fixes its assigned vertex.
    pub fixed_points: bool,
    /// Images of distinct source vertices are distinct (orbit level and on
    /// the verification ball).
    pub injectivity: bool,
    /// Every edge goes to an arc of length exactly 1.
    pub edge_lengths: bool,
    /// Source and image vertex degrees agree.
    pub degrees: bool,
    /// Each vertex group fixes only its assigned vertex.
    pub uniqueness: bool,
}

impl Checks {
    pub fn all(&self) -> bool {
        self.fixed_points && self.injectivity && self.edge_lengths && self.degrees && self.uniqueness
    }
}

/// Two source edges at a common vertex whose image arcs share an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldReport {
    pub vertex: VertexId,
    /// First edge: the end, taken with coset representative 1.
    pub end1: EndRef,
    /// Second edge: an end with its coset representative.
    pub end2: (EndRef, Elem),
    /// Number of edges the two image arcs share.
    pub overlap: usize,
    pub arc_lengths: (usize, usize),
    /// The edges lie in one orbit of the vertex stabilizer.
    pub same_orbit: bool,
    /// When `same_orbit`, an element of the stabilizer taking the first
    /// edge to the second.
    pub witness: Option<PathWord>,
    /// `⟨G_e1, G_e2⟩` as a subgroup of the vertex group.
    pub h: Subgroup,
    /// Whether the image of `H` is elliptic in the target.
    pub h_elliptic: bool,
    /// Whether `H` fixes an edge at the source vertex.
    pub h_fixes_edge: bool,
    /// The overlap is a proper part of both image arcs.
    pub strict: bool,
}

/// Result of a tripod check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripodOutcome {
    /// The three image arcs have no common vertex.
    pub empty: bool,
    pub witness: Option<TripodWitness>,
    /// Set when the arcs meet but the first two or last two edges are not in
    /// one stabilizer orbit, so no certificate exists.
    pub orbit_failure: Option<String>,
}

/// The elements from the tripod argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripodWitness {
    pub point: TreeVertex,
    /// Fixes the middle vertex of the first two edges and swaps them.
    pub gamma1: PathWord,
    pub gamma2: PathWord,
    pub source_translation_length: usize,
    pub target_fixes_point: bool,
}

impl TripodWitness {
    /// Elliptic in the target at the common point yet hyperbolic at the
    /// source: the two actions cannot both be right.
    pub fn is_contradiction(&self) -> bool {
        self.target_fixes_point && self.source_translation_length > 0
    }
}

#[derive(Clone, Debug, Default)]
pub struct MapOptions {
    /// Verification ball radius; default `2·(max arc) + 2`.
    pub radius: Option<usize>,
    /// Skip the hypothesis checks. For diagnostics on invalid inputs only.
    pub unchecked: bool,
    /// Replace the computed assignment. For diagnostics only.
    pub assignment: Option<Vec<TreeVertex>>,
}

#[derive(Clone, Debug)]
pub struct CanonicalMap {
    pub source: MarkedGog,
    pub target: MarkedGog,
    /// Image of the standard lift of each source vertex.
    pub assignment: Vec<TreeVertex>,
    pub verdict: Verdict,
    pub checks: Checks,
    pub edge_lengths: Vec<usize>,
    pub radius: usize,
    pub precondition: Option<String>,
    pub diagnostics: Vec<FoldReport>,
}

fn check_preconditions(t: &GraphOfGroups, tp: &GraphOfGroups) -> Option<String> {
    if let Some(v) = t.check_minimal() {
        return Some(format!("source is not minimal at `{}`", t.vertex(v).name));
    }
    if let Some(w) = t.check_strongly_slide_free() {
        return Some(format!(
            "source is not strongly slide-free at `{}`: ends {} and {} nest under {}",
            t.vertex(w.vertex).name,
            end_name(t, w.end1),
            end_name(t, w.end2),
            t.group(w.vertex).name_of(w.conjugator)
        ));
    }
    if let Some(v) = tp.check_minimal() {
        return Some(format!("target is not minimal at `{}`", tp.vertex(v).name));
    }
    if let Some(c) = tp.check_reduced() {
        return Some(format!("target is not reduced: edge `{}` collapses", tp.edge(c.edge).name));
    }
    None
}

fn end_name(g: &GraphOfGroups, e: EndRef) -> String {
    format!("{}.{}", g.edge(e.edge).name, if e.side == crate::gog::Side::A { "A" } else { "B" })
}

impl CanonicalMap {
    pub fn phi(&self, x: &PathWord) -> Result<PathWord> {
        Ok(self.source.transfer(&self.target, x)?)
    }

    /// Image of a source tree vertex.
    pub fn image(&self, p: &TreeVertex) -> Result<TreeVertex> {
        let s = self.source.gog();
        let g = self.phi(&s.transport(p))?;
        Ok(self.target.gog().act(&g, &self.assignment[p.orbit().0])?)
    }

    /// Image arc of the source edge from `p` to `q`.
    pub fn arc(&self, p: &TreeVertex, q: &TreeVertex) -> Result<Vec<TreeVertex>> {
        Ok(self.target.gog().path(&self.image(p)?, &self.image(q)?)?)
    }

    fn vertex_group_images(&self, v: VertexId) -> Result<Vec<PathWord>> {
        let s = self.source.gog();
        s.group(v).generators().into_iter().map(|x| self.phi(&s.vertex_element(v, x))).collect()
    }

    /// Diagnoses the pair of edges at the standard lift of `v` given by
    /// `end1` (representative 1) and `end2` with representative `r2`.
    pub fn diagnose_fold(&self, v: VertexId, end1: EndRef, end2: (EndRef, Elem)) -> Result<FoldReport> {
        let s = self.source.gog();
        let tg = self.target.gog();
        for e in [end1, end2.0] {
            if e.edge.0 >= s.edge_count() || s.end(e).vertex != v {
                return Err(RigidityError::BadEnd(e));
            }
        }
        let gv = s.group(v);
        let p = s.standard_lift(v);
        let n1 = s.step(&p, Elem::IDENTITY, Letter::leaving(end1))?;
        let r2 = s.end(end2.0).image().coset_rep(end2.1);
        let n2 = s.step(&p, r2, Letter::leaving(end2.0))?;
        if n1 == n2 {
            return Err(RigidityError::NoFold);
        }
        let a1 = self.arc(&p, &n1)?;
        let a2 = self.arc(&p, &n2)?;
        let common = a1.iter().zip(&a2).take_while(|(x, y)| x == y).count();
        if common < 2 {
            return Err(RigidityError::NoFold);
        }
        let same_orbit = end1 == end2.0;
        let witness = same_orbit.then(|| s.vertex_element(v, r2));
        let mut gens = s.end(end1).image().generators();
        gens.extend(s.end(end2.0).image().conjugate(r2).generators());
        let h = Subgroup::generated(gv, &gens);
        let h_words: Vec<PathWord> =
            h.generators().into_iter().map(|x| self.phi(&s.vertex_element(v, x))).collect::<Result<_>>()?;
        let h_elliptic = tg.is_elliptic_subgroup(&h_words)?;
        let h_src: Vec<PathWord> = h.generators().into_iter().map(|x| s.vertex_element(v, x)).collect();
        let mut h_fixes_edge = false;
        for n in s.neighbors(&p) {
            if s.fixes_all(&h_src, &n)? {
                h_fixes_edge = true;
                break;
            }
        }
        Ok(FoldReport {
            vertex: v,
            end1,
            end2: (end2.0, r2),
            overlap: common - 1,
            arc_lengths: (a1.len() - 1, a2.len() - 1),
            same_orbit,
            witness,
            h,
            h_elliptic,
            h_fixes_edge,
            strict: common < a1.len() && common < a2.len(),
        })
    }

    /// All folds at standard lifts, first edge ranging over orbit
    /// representatives.
    pub fn folds(&self) -> Result<Vec<FoldReport>> {
        let s = self.source.gog();
        let mut out = Vec::new();
        for v in s.vertex_ids() {
            let ends = s.ends_at(v);
            for (i, &e1) in ends.iter().enumerate() {
                for &e2 in &ends[i..] {
                    for &r in s.end(e2).transversal() {
                        if e1 == e2 && r.is_identity() {
                            continue;
                        }
                        match self.diagnose_fold(v, e1, (e2, r)) {
                            Ok(f) => out.push(f),
                            Err(RigidityError::NoFold) => {}
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Checks the three consecutive source edges `[p0,p1]`, `[p1,p2]`,
    /// `[p2,p3]`.
    pub fn check_tripod(&self, p: [&TreeVertex; 4]) -> Result<TripodOutcome> {
        let s = self.source.gog();
        let tg = self.target.gog();
        for i in 0..3 {
            if s.distance(p[i], p[i + 1])? != 1 {
                return Err(RigidityError::NotConsecutive);
            }
        }
        if p[0] == p[2] || p[1] == p[3] {
            return Err(RigidityError::NotConsecutive);
        }
        let arcs: Vec<Vec<TreeVertex>> =
            (0..3).map(|i| self.arc(p[i], p[i + 1])).collect::<Result<_>>()?;
        let sets: Vec<BTreeSet<&TreeVertex>> = arcs.iter().map(|a| a.iter().collect()).collect();
        let Some(point) = sets[0].iter().find(|x| sets[1].contains(*x) && sets[2].contains(*x)) else {
            return Ok(TripodOutcome { empty: true, witness: None, orbit_failure: None });
        };
        let point = (*point).clone();
        let swap = |mid: &TreeVertex, from: &TreeVertex, to: &TreeVertex| -> Result<Option<PathWord>> {
            for g in s.stabilizer_elements(mid) {
                if s.act(&g, from)? == *to {
                    return Ok(Some(g));
                }
            }
            Ok(None)
        };
        let Some(gamma1) = swap(p[1], p[0], p[2])? else {
            return Ok(TripodOutcome {
                empty: false,
                witness: None,
                orbit_failure: Some("first two edges lie in different stabilizer orbits".into()),
            });
        };
        let Some(gamma2) = swap(p[2], p[1], p[3])? else {
            return Ok(TripodOutcome {
                empty: false,
                witness: None,
                orbit_failure: Some("last two edges lie in different stabilizer orbits".into()),
            });
        };
        let prod = s.mul(&gamma1, &gamma2)?;
        let source_translation_length = s.translation_length(&prod)?;
        let target_fixes_point = tg.fixes(&self.phi(&prod)?, &point)?;
        Ok(TripodOutcome {
            empty: false,
            witness: Some(TripodWitness { point, gamma1, gamma2, source_translation_length, target_fixes_point }),
            orbit_failure: None,
        })
    }
}

/// Builds the canonical map from `t` to `t_prime` and certifies it.
pub fn canonical_map(t: &MarkedGog, t_prime: &MarkedGog, opts: &MapOptions) -> Result<CanonicalMap> {
    if !t.same_reference(t_prime) {
        return Err(RigidityError::MismatchedReference);
    }
    let (s, tg) = (t.gog(), t_prime.gog());
    let mut cm = CanonicalMap {
        source: t.clone(),
        target: t_prime.clone(),
        assignment: Vec::new(),
        verdict: Verdict::PreconditionFailed,
        checks: Checks::default(),
        edge_lengths: Vec::new(),
        radius: 0,
        precondition: None,
        diagnostics: Vec::new(),
    };
    if !opts.unchecked {
        if let Some(why) = check_preconditions(s, tg) {
            cm.precondition = Some(why);
            return Ok(cm);
        }
    }
    let mut images = Vec::new();
    for v in s.vertex_ids() {
        images.push(cm.vertex_group_images(v)?);
    }
    cm.assignment = match &opts.assignment {
        Some(a) => a.clone(),
        None => {
            let mut out = Vec::new();
            for k in &images {
                let cap = DEFAULT_ORDER_CAP.max(s.vertices().iter().map(|v| v.group.order()).max().unwrap_or(1));
                let c = tg.fixed_vertex(k, cap)?;
                // closest fixed vertex to the base: first fixed vertex on [base, c]
                let path = tg.path(&tg.base_vertex(), &c)?;
                let mut x = c.clone();
                for y in path {
                    if tg.fixes_all(k, &y)? {
                        x = y;
                        break;
                    }
                }
                out.push(x);
            }
            out
        }
    };

    let mut checks = Checks { fixed_points: true, ..Checks::default() };
    for v in s.vertex_ids() {
        if !tg.fixes_all(&images[v.0], &cm.assignment[v.0])? {
            checks.fixed_points = false;
        }
    }

    // edge arcs
    let mut lengths = Vec::new();
    for e in s.edge_ids() {
        let y = Letter { edge: e, forward: true };
        let p = s.standard_lift(s.source(y));
        let q = s.step(&p, Elem::IDENTITY, y)?;
        lengths.push(tg.distance(&cm.image(&p)?, &cm.image(&q)?)?);
    }
    checks.edge_lengths = lengths.iter().all(|&l| l == 1);
    let max_arc = lengths.iter().copied().max().unwrap_or(0);
    cm.radius = opts.radius.unwrap_or(2 * max_arc + 2);
    cm.edge_lengths = lengths;

    // injectivity: orbits distinct, stabilizers exact, and no collisions on a ball
    let orbits: BTreeSet<VertexId> = cm.assignment.iter().map(|x| x.orbit()).collect();
    let mut injective = orbits.len() == s.vertex_count();
    for v in s.vertex_ids() {
        if tg.group(cm.assignment[v.0].orbit()).order() != s.group(v).order() {
            injective = false;
        }
    }
    if injective && checks.fixed_points {
        let mut seen = BTreeSet::new();
        for p in s.ball(&s.base_vertex(), cm.radius) {
            if !seen.insert(cm.image(&p)?) {
                injective = false;
                break;
            }
        }
    }
    checks.injectivity = injective;

    // degrees
    let mut degrees = true;
    for v in s.vertex_ids() {
        if s.tree_degree(v) != tg.tree_degree(cm.assignment[v.0].orbit()) {
            degrees = false;
        }
    }
    checks.degrees = degrees;

    // uniqueness: Fix(G_v) is a subtree, so it is a single vertex iff no
    // neighbour of x_v is fixed
    let mut unique = checks.fixed_points;
    if unique {
        'outer: for v in s.vertex_ids() {
            for n in tg.neighbors(&cm.assignment[v.0]) {
                if tg.fixes_all(&images[v.0], &n)? {
                    unique = false;
                    break 'outer;
                }
            }
        }
    }
    checks.uniqueness = unique;
    cm.checks = checks;

    if checks.all() {
        cm.verdict = Verdict::Isomorphism;
    } else {
        cm.diagnostics = if checks.fixed_points { cm.folds()? } else { Vec::new() };
        cm.verdict = if cm.diagnostics.is_empty() { Verdict::CheckFailed } else { Verdict::FoldDetected };
    }
    Ok(cm)
}

/// A random path of three consecutive edges starting at a standard lift.
pub fn sample_tripod<R: Rng + ?Sized>(g: &GraphOfGroups, rng: &mut R) -> Option<[TreeVertex; 4]> {
    let v = VertexId(rng.random_range(0..g.vertex_count()));
    let mut path = vec![g.standard_lift(v)];
    while path.len() < 4 {
        let last = path.last().unwrap();
        let prev = if path.len() >= 2 { Some(&path[path.len() - 2]) } else { None };
        let options: Vec<TreeVertex> = g.neighbors(last).into_iter().filter(|n| Some(n) != prev).collect();
        if options.is_empty() {
            return None;
        }
        let n = options[rng.random_range(0..options.len())].clone();
        path.push(n);
    }
    let mut it = path.into_iter();
    Some([it.next()?, it.next()?, it.next()?, it.next()?])
}

/// Outcome of checking that a deformation space has at most one strongly
/// slide-free reduced tree.
#[derive(Clone, Debug)]
pub struct UniqueSsfReport {
    pub reduced: Vec<usize>,
    pub slide_free: Vec<usize>,
    /// `(from, to, verdict)` for every canonical map built, including the
    /// identity map of each slide-free class.
    pub maps: Vec<(usize, usize, Verdict)>,
    /// Reduced classes shown isomorphic to an earlier slide-free class.
    pub duplicates: Vec<usize>,
    pub distinct_slide_free: usize,
    pub violation: Option<String>,
}

impl UniqueSsfReport {
    pub fn distinct_reduced(&self) -> usize {
        self.reduced.len() - self.duplicates.len()
    }
}

pub fn verify_unique_ssf(space: &Enumeration) -> Result<UniqueSsfReport> {
    let reduced: Vec<usize> = space.reduced().map(|(i, _)| i).collect();
    let slide_free: Vec<usize> =
        reduced.iter().copied().filter(|&i| space.classes[i].marked.gog().is_strongly_slide_free()).collect();
    let mut report = UniqueSsfReport {
        reduced: reduced.clone(),
        slide_free: slide_free.clone(),
        maps: Vec::new(),
        duplicates: Vec::new(),
        distinct_slide_free: 0,
        violation: None,
    };
    let mut dup: BTreeSet<usize> = BTreeSet::new();
    let mut reps: Vec<usize> = Vec::new();
    for &i in &slide_free {
        if dup.contains(&i) {
            continue;
        }
        reps.push(i);
        let src = &space.classes[i].marked;
        for &j in &reduced {
            if j != i && (dup.contains(&j) || reps.contains(&j)) {
                continue;
            }
            let cm = canonical_map(src, &space.classes[j].marked, &MapOptions::default())?;
            report.maps.push((i, j, cm.verdict));
            match cm.verdict {
                Verdict::Isomorphism if j != i => {
                    dup.insert(j);
                }
                Verdict::Isomorphism => {}
                Verdict::PreconditionFailed => {}
                v => {
                    report.violation.get_or_insert_with(|| {
                        format!("canonical map from class {i} to reduced class {j}: {}", v.as_str())
                    });
                }
            }
        }
    }
    report.distinct_slide_free = reps.len();
    if reps.len() >= 2 {
        report
            .violation
            .get_or_insert_with(|| format!("{} distinct strongly slide-free reduced classes", reps.len()));
    }
    report.duplicates = dup.into_iter().collect();
    Ok(report)
}
