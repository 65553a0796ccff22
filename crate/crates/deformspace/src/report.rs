//! Report documents for the command-line front end, serializable as JSON
//! and printable as text. Field names are part of the output format.

use std::fmt::Write;

use deformspace_core::gog::{EndRef, GraphOfGroups, Side};
use deformspace_core::moves::{enumerate_reduced, Caps, Enumeration, MarkedGog, MoveError};
use deformspace_core::rigidity::{
    canonical_map, sample_tripod, verify_unique_ssf, CanonicalMap, FoldReport, MapOptions, RigidityError,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct VertexInfo {
    pub name: String,
    pub group: String,
    pub order: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeInfo {
    pub name: String,
    pub group: String,
    pub order: usize,
    pub from: String,
    pub to: String,
    /// Indices of the edge group in its two end groups.
    pub indices: [usize; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct Predicate {
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassInfo {
    pub order: usize,
    pub witness_vertex: String,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub vertices: Vec<VertexInfo>,
    pub edges: Vec<EdgeInfo>,
    pub reduced: Predicate,
    pub minimal: Predicate,
    pub slide_free: Predicate,
    pub subgroup_classes: Vec<ClassInfo>,
}

fn end_name(g: &GraphOfGroups, e: EndRef) -> String {
    format!("{}.{}", g.edge(e.edge).name, if e.side == Side::A { "A" } else { "B" })
}

pub fn vertex_infos(g: &GraphOfGroups) -> Vec<VertexInfo> {
    g.vertices()
        .iter()
        .map(|v| VertexInfo { name: v.name.clone(), group: v.group.name().to_string(), order: v.group.order() })
        .collect()
}

pub fn edge_infos(g: &GraphOfGroups) -> Vec<EdgeInfo> {
    g.edges()
        .iter()
        .map(|e| EdgeInfo {
            name: e.name.clone(),
            group: e.group.name().to_string(),
            order: e.group.order(),
            from: g.vertex(e.end(Side::A).vertex).name.clone(),
            to: g.vertex(e.end(Side::B).vertex).name.clone(),
            indices: [e.end(Side::A).index(), e.end(Side::B).index()],
        })
        .collect()
}

pub fn check_report(name: &str, g: &GraphOfGroups) -> CheckReport {
    let reduced = g.check_reduced().map(|c| {
        let e = g.edge(c.edge);
        format!("edge {} collapses: {} is onto {}", e.name, end_name(g, EndRef { edge: c.edge, side: c.side }), g.vertex(e.end(c.side).vertex).name)
    });
    let minimal = g.check_minimal().map(|v| format!("vertex {} has a lift of degree < 2", g.vertex(v).name));
    let slide_free = g.check_strongly_slide_free().map(|w| {
        format!(
            "at {}: {} nests in {} under {}",
            g.vertex(w.vertex).name,
            end_name(g, w.end1),
            end_name(g, w.end2),
            g.group(w.vertex).name_of(w.conjugator)
        )
    });
    let classes = g.finite_subgroup_classes();
    CheckReport {
        name: name.to_string(),
        vertices: vertex_infos(g),
        edges: edge_infos(g),
        reduced: Predicate { holds: reduced.is_none(), witness: reduced },
        minimal: Predicate { holds: minimal.is_none(), witness: minimal },
        slide_free: Predicate { holds: slide_free.is_none(), witness: slide_free },
        subgroup_classes: classes
            .classes
            .iter()
            .map(|c| ClassInfo {
                order: c.local_form.order(),
                witness_vertex: g.print_vertex(&c.witness_vertex),
                generators: c.representative.iter().map(|x| g.print_word(x)).collect(),
            })
            .collect(),
    }
}

fn mark(b: bool) -> &'static str {
    if b {
        "✓"
    } else {
        "✗"
    }
}

fn predicate_text(out: &mut String, label: &str, p: &Predicate) {
    write!(out, "  {label} {}", mark(p.holds)).unwrap();
    if let Some(w) = &p.witness {
        write!(out, " ({w})").unwrap();
    }
    out.push('\n');
}

impl CheckReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {} vertices, {} edges\n", self.name, self.vertices.len(), self.edges.len());
        predicate_text(&mut out, "reduced", &self.reduced);
        predicate_text(&mut out, "minimal", &self.minimal);
        predicate_text(&mut out, "slide-free", &self.slide_free);
        writeln!(out, "  {} subgroup classes", self.subgroup_classes.len()).unwrap();
        for c in &self.subgroup_classes {
            writeln!(out, "    order {:>2} at {}: <{}>", c.order, c.witness_vertex, c.generators.join(", ")).unwrap();
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ManifestClass {
    pub id: usize,
    pub depth: usize,
    pub reduced: bool,
    pub slide_free: bool,
    pub fingerprint: String,
    pub vertices: Vec<VertexInfo>,
    pub edges: Vec<EdgeInfo>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ManifestMove {
    pub from: usize,
    pub to: usize,
    pub kind: &'static str,
    pub label: String,
}

/// The explored part of a deformation space.
#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub name: String,
    pub classes: Vec<ManifestClass>,
    pub moves: Vec<ManifestMove>,
    pub truncated: bool,
    pub not_proven: usize,
}

pub fn manifest(name: &str, space: &Enumeration) -> Manifest {
    Manifest {
        name: name.to_string(),
        classes: space
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let g = c.marked.gog();
                ManifestClass {
                    id: i,
                    depth: c.depth,
                    reduced: c.reduced,
                    slide_free: g.is_strongly_slide_free(),
                    fingerprint: format!("{:016x}", c.fingerprint.hash64()),
                    vertices: vertex_infos(g),
                    edges: edge_infos(g),
                }
            })
            .collect(),
        moves: space
            .moves
            .iter()
            .map(|m| ManifestMove {
                from: m.from,
                to: m.to,
                kind: if m.collapse { "collapse" } else { "expand" },
                label: m.label.clone(),
            })
            .collect(),
        truncated: space.truncated,
        not_proven: space.not_proven,
    }
}

impl Manifest {
    pub fn reduced_count(&self) -> usize {
        self.classes.iter().filter(|c| c.reduced).count()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {} classes ({} reduced), {} moves{}\n",
            self.name,
            self.classes.len(),
            self.reduced_count(),
            self.moves.len(),
            if self.truncated { ", truncated" } else { "" }
        );
        for c in &self.classes {
            let shape: Vec<String> = c.vertices.iter().map(|v| format!("{}:{}", v.name, v.order)).collect();
            let edges: Vec<String> =
                c.edges.iter().map(|e| format!("{}-{}:{}", e.from, e.to, e.order)).collect();
            writeln!(
                out,
                "  [{}] depth {} {}{} {} | {}",
                c.id,
                c.depth,
                if c.reduced { "reduced" } else { "-" },
                if c.slide_free { " slide-free" } else { "" },
                shape.join(" "),
                edges.join(" ")
            )
            .unwrap();
        }
        if self.not_proven > 0 {
            writeln!(out, "  {} isomorphism checks inconclusive", self.not_proven).unwrap();
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckFlags {
    pub fixed_points: bool,
    pub injectivity: bool,
    pub edge_lengths: bool,
    pub degrees: bool,
    pub uniqueness: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Assignment {
    pub vertex: String,
    pub image: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FoldInfo {
    pub vertex: String,
    pub end1: String,
    pub end2: String,
    pub end2_coset: String,
    pub overlap: usize,
    pub arc_lengths: [usize; 2],
    pub same_orbit: bool,
    pub witness: Option<String>,
    pub h_order: usize,
    pub h_elliptic: bool,
    pub h_fixes_edge: bool,
    pub strict: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TripodSummary {
    pub sampled: usize,
    pub empty: usize,
    pub contradictions: usize,
}

/// A canonical map from a slide-free class to a reduced class.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub from: usize,
    pub to: usize,
    pub verdict: &'static str,
    pub vertex_assignment: Vec<Assignment>,
    pub checks: CheckFlags,
    pub edge_lengths: Vec<usize>,
    pub radius: usize,
    pub precondition: Option<String>,
    pub diagnostics: Vec<FoldInfo>,
    pub tripods: Option<TripodSummary>,
}

fn fold_info(s: &GraphOfGroups, f: &FoldReport) -> FoldInfo {
    let grp = s.group(f.vertex);
    FoldInfo {
        vertex: s.vertex(f.vertex).name.clone(),
        end1: end_name(s, f.end1),
        end2: end_name(s, f.end2.0),
        end2_coset: grp.name_of(f.end2.1).to_string(),
        overlap: f.overlap,
        arc_lengths: [f.arc_lengths.0, f.arc_lengths.1],
        same_orbit: f.same_orbit,
        witness: f.witness.as_ref().map(|w| s.print_word(w)),
        h_order: f.h.order(),
        h_elliptic: f.h_elliptic,
        h_fixes_edge: f.h_fixes_edge,
        strict: f.strict,
    }
}

/// Samples `n` consecutive edge triples of the source and checks the tripod
/// prediction on each.
pub fn tripod_summary(cm: &CanonicalMap, n: usize, seed: u64) -> Result<TripodSummary, RigidityError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = TripodSummary { sampled: 0, empty: 0, contradictions: 0 };
    for _ in 0..n {
        let Some(p) = sample_tripod(cm.source.gog(), &mut rng) else { break };
        let t = cm.check_tripod([&p[0], &p[1], &p[2], &p[3]])?;
        out.sampled += 1;
        out.empty += usize::from(t.empty);
        out.contradictions += usize::from(t.witness.as_ref().is_some_and(|w| w.is_contradiction()));
    }
    Ok(out)
}

pub fn certificate(from: usize, to: usize, cm: &CanonicalMap, tripods: Option<TripodSummary>) -> Certificate {
    let s = cm.source.gog();
    let t = cm.target.gog();
    Certificate {
        from,
        to,
        verdict: cm.verdict.as_str(),
        vertex_assignment: cm
            .assignment
            .iter()
            .enumerate()
            .map(|(i, x)| Assignment { vertex: s.vertices()[i].name.clone(), image: t.print_vertex(x) })
            .collect(),
        checks: CheckFlags {
            fixed_points: cm.checks.fixed_points,
            injectivity: cm.checks.injectivity,
            edge_lengths: cm.checks.edge_lengths,
            degrees: cm.checks.degrees,
            uniqueness: cm.checks.uniqueness,
        },
        edge_lengths: cm.edge_lengths.clone(),
        radius: cm.radius,
        precondition: cm.precondition.clone(),
        diagnostics: cm.diagnostics.iter().map(|f| fold_info(s, f)).collect(),
        tripods,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RigidityReport {
    pub name: String,
    pub depth: usize,
    pub seed: u64,
    pub classes: usize,
    pub reduced: usize,
    pub slide_free: usize,
    pub distinct_reduced: usize,
    pub distinct_slide_free: usize,
    pub truncated: bool,
    pub not_proven: usize,
    pub certificates: Vec<Certificate>,
    pub violation: Option<String>,
    pub summary: String,
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Rigidity(#[from] RigidityError),
}

/// Tripod samples per isomorphism certificate.
pub const TRIPOD_SAMPLES: usize = 16;

pub fn rigidity_report(
    name: &str,
    m: &MarkedGog,
    caps: &Caps,
    radius: Option<usize>,
    seed: u64,
) -> Result<(Enumeration, RigidityReport), ReportError> {
    let space = enumerate_reduced(m, caps)?;
    let r = verify_unique_ssf(&space)?;
    let opts = MapOptions { radius, ..MapOptions::default() };
    let mut certificates = Vec::new();
    for (k, &(i, j, _)) in r.maps.iter().enumerate() {
        let cm = canonical_map(&space.classes[i].marked, &space.classes[j].marked, &opts)?;
        let tripods = if cm.checks.all() {
            Some(tripod_summary(&cm, TRIPOD_SAMPLES, seed.wrapping_add(k as u64))?)
        } else {
            None
        };
        certificates.push(certificate(i, j, &cm, tripods));
    }
    let mut violation = r.violation.clone();
    if violation.is_none() {
        if let Some(c) = certificates.iter().find(|c| c.tripods.as_ref().is_some_and(|t| t.contradictions > 0)) {
            violation = Some(format!("tripod contradiction on map {} -> {}", c.from, c.to));
        }
    }
    let summary = format!(
        "{} strongly slide-free among {} reduced classes ({} distinct)",
        r.distinct_slide_free,
        r.reduced.len(),
        r.distinct_reduced()
    );
    let report = RigidityReport {
        name: name.to_string(),
        depth: caps.depth,
        seed,
        classes: space.classes.len(),
        reduced: r.reduced.len(),
        slide_free: r.slide_free.len(),
        distinct_reduced: r.distinct_reduced(),
        distinct_slide_free: r.distinct_slide_free,
        truncated: space.truncated,
        not_proven: space.not_proven,
        certificates,
        violation,
        summary,
    };
    Ok((space, report))
}

impl RigidityReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.name, self.summary);
        for c in &self.certificates {
            write!(out, "  map {} -> {}: {}", c.from, c.to, c.verdict).unwrap();
            if let Some(p) = &c.precondition {
                write!(out, " ({p})").unwrap();
            }
            if let Some(t) = &c.tripods {
                write!(out, ", tripods {}/{} empty", t.empty, t.sampled).unwrap();
            }
            out.push('\n');
            for a in &c.vertex_assignment {
                writeln!(out, "    {} -> {}", a.vertex, a.image).unwrap();
            }
            for f in &c.diagnostics {
                writeln!(
                    out,
                    "    fold at {}: {} / {}^{} overlap {} same-orbit {} |H| {}",
                    f.vertex, f.end1, f.end2, f.end2_coset, f.overlap, f.same_orbit, f.h_order
                )
                .unwrap();
            }
        }
        if self.truncated {
            out.push_str("  (enumeration truncated at the depth cap)\n");
        }
        if let Some(v) = &self.violation {
            writeln!(out, "THEOREM-VIOLATION: {v}").unwrap();
        }
        out
    }
}
