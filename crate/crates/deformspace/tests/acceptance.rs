//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;
use std::time::{Duration, Instant};

use deformspace::cli;
use deformspace::random::random_gog;
use deformspace_core::bass_serre::{Syllable, TreeVertex};
use deformspace_core::corpus;
use deformspace_core::dsl::parse_gog;
use deformspace_core::fingroup::Elem;
use deformspace_core::gog::{GraphOfGroups, Letter, Side, VertexId};
use deformspace_core::moves::{enumerate_reduced, marked_iso, Caps, IsoVerdict, MarkedGog, MoveKind};
use deformspace_core::rigidity::{canonical_map, verify_unique_ssf, MapOptions, Verdict};
use deformspace_core::treegeom::{sample_sequence, FiniteTree, SamplerStats};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// criterion 1
const RIGIDITY_DEPTH: usize = 3;
const RIGIDITY_LIMIT: Duration = Duration::from_secs(60);
const RIGIDITY_WALKS: usize = 12;
// criterion 2
const NEGATIVE_LIMIT: Duration = Duration::from_secs(30);
const FREE3_MIN_REDUCED: usize = 3;
const SLIDE1_MIN_REDUCED: usize = 2;
// criterion 3
const MOVE_APPLICATIONS: usize = 1000;
const MOVE_LIMIT: Duration = Duration::from_secs(120);
const WALK_LENGTH: usize = 6;
// criterion 4
const SERRE_PAIRS: usize = 500;
const SERRE_RADIUS: usize = 6;
const SERRE_SAMPLE_RADIUS: usize = 3;
// criterion 5
const BACKTRACK_SAMPLES: usize = 10_000;
const BACKTRACK_MAX_VERTICES: usize = 60;
const BACKTRACK_MAX_ARCS: usize = 10;
const BACKTRACK_LIMIT: Duration = Duration::from_secs(60);
// criterion 6
const NF_MAX_SYLLABLES: usize = 8;
const NF_EXHAUSTIVE_SYLLABLES: usize = 5;
const NF_SAMPLES: usize = 10_000;
const NF_RADIUS: usize = 6;
// criterion 7
const RANDOM_GRAPHS: usize = 200;
const RANDOM_MAX_ORDER: usize = 24;
const RANDOM_MAX_EDGES: usize = 4;

const SEED: u64 = 20_240_601;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gog(src: &str) -> GraphOfGroups {
    parse_gog(src).expect("corpus parses")
}

// ---------------------------------------------------------------- 1

/// Random moves away from `m`, then collapses until reduced.
fn wander_and_reduce(m: &MarkedGog, rng: &mut ChaCha8Rng, caps: &Caps) -> Result<MarkedGog, String> {
    let mut cur = m.clone();
    for _ in 0..rng.random_range(1..=4) {
        let legal = cur.legal_moves(caps);
        let Some(k) = legal.choose(rng) else { break };
        cur = cur.apply(k).map_err(|e| e.to_string())?.0;
    }
    loop {
        let collapses: Vec<MoveKind> = cur.legal_moves(caps).into_iter().filter(|k| k.is_collapse()).collect();
        let Some(k) = collapses.choose(rng) else { return Ok(cur) };
        cur = cur.apply(k).map_err(|e| e.to_string())?.0;
    }
}

fn criterion_1() -> Check {
    let mut notes = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (name, src) in [("SSF1", corpus::SSF1), ("SSF2", corpus::SSF2), ("SSF3", corpus::SSF3)] {
        let start = Instant::now();
        let g = gog(src);
        ensure(g.is_strongly_slide_free() && g.is_minimal() && g.is_reduced(), || format!("{name} is not a reduced minimal slide-free fixture"))?;
        let orders: Vec<usize> = g.vertices().iter().map(|v| v.group.order()).collect();
        ensure(orders.iter().all(|&o| o <= 24), || format!("{name} has a group of order > 24"))?;
        let m = MarkedGog::new(g);
        let caps = Caps { depth: RIGIDITY_DEPTH, ..Caps::default() };
        let space = enumerate_reduced(&m, &caps).map_err(|e| e.to_string())?;
        ensure(space.reduced_count() == 1, || format!("{name}: {} reduced classes", space.reduced_count()))?;
        let r = verify_unique_ssf(&space).map_err(|e| e.to_string())?;
        ensure(r.violation.is_none(), || format!("{name}: THEOREM-VIOLATION {:?}", r.violation))?;
        ensure(r.slide_free.len() == 1 && r.distinct_slide_free == 1, || format!("{name}: {} slide-free", r.slide_free.len()))?;
        ensure(!r.maps.is_empty(), || format!("{name}: no canonical maps built"))?;
        ensure(r.maps.iter().all(|m| m.2 == Verdict::Isomorphism), || format!("{name}: maps {:?}", r.maps))?;
        // reduced graphs reached by random walks, not identified by the enumeration
        let walk_caps = Caps { max_edges: 5, max_order: 24, ..Caps::default() };
        let mut nontrivial = 0;
        for _ in 0..RIGIDITY_WALKS {
            let t = wander_and_reduce(&m, &mut rng, &walk_caps)?;
            t.verify().map_err(|e| e.to_string())?;
            for (a, b) in [(&m, &t), (&t, &m)] {
                let cm = canonical_map(a, b, &MapOptions::default()).map_err(|e| e.to_string())?;
                ensure(cm.verdict == Verdict::Isomorphism, || {
                    format!("{name}: walk map {} ({:?}, {:?})", cm.verdict.as_str(), cm.checks, cm.precondition)
                })?;
            }
            nontrivial += usize::from(t.to_ref_table() != m.to_ref_table());
        }
        let elapsed = start.elapsed();
        ensure(elapsed < RIGIDITY_LIMIT, || format!("{name} took {elapsed:?}"))?;
        notes.push(format!(
            "{name}: {} classes, 1 reduced, {} maps + {RIGIDITY_WALKS} walks ({nontrivial} re-marked) all isomorphism, {:.1}s",
            space.classes.len(),
            r.maps.len(),
            elapsed.as_secs_f64()
        ));
    }
    Ok(notes.join("; "))
}

// ---------------------------------------------------------------- 2

fn criterion_2() -> Check {
    let mut notes = Vec::new();
    for (name, src, min) in [("FREE3", corpus::FREE3, FREE3_MIN_REDUCED), ("SLIDE1", corpus::SLIDE1, SLIDE1_MIN_REDUCED)] {
        let start = Instant::now();
        let m = MarkedGog::new(gog(src));
        let space = enumerate_reduced(&m, &Caps::default()).map_err(|e| e.to_string())?;
        let r = verify_unique_ssf(&space).map_err(|e| e.to_string())?;
        ensure(r.violation.is_none(), || format!("{name}: {:?}", r.violation))?;
        ensure(r.distinct_reduced() >= min, || format!("{name}: {} distinct reduced", r.distinct_reduced()))?;
        ensure(r.slide_free.is_empty(), || format!("{name}: {} slide-free", r.slide_free.len()))?;
        let elapsed = start.elapsed();
        ensure(elapsed < NEGATIVE_LIMIT, || format!("{name} took {elapsed:?}"))?;
        notes.push(format!("{name}: {} reduced, 0 slide-free, {:.1}s", r.distinct_reduced(), elapsed.as_secs_f64()));
    }
    let h = gog(corpus::HNN1);
    ensure(h.is_reduced() && h.is_minimal() && !h.is_strongly_slide_free(), || "HNN1 predicates".into())?;
    ensure(independent_predicates(&h) == (true, true, false), || "HNN1 oracle predicates".into())?;
    notes.push("HNN1: reduced, minimal, not slide-free".into());
    Ok(notes.join("; "))
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let caps = Caps { max_edges: 5, max_order: 24, ..Caps::default() };
    let mut applied = 0;
    let mut round_trips = 0;
    let mut by_kind = [0usize; 2];
    while applied < MOVE_APPLICATIONS {
        let (name, src) = corpus::ALL[rng.random_range(0..corpus::ALL.len())];
        let mut m = MarkedGog::new(gog(src));
        for _ in 0..WALK_LENGTH {
            let legal = m.legal_moves(&caps);
            let Some(k) = legal.choose(&mut rng) else { break };
            let (next, rec) = m.apply(k).map_err(|e| format!("{name}: {e}"))?;
            applied += 1;
            by_kind[usize::from(k.is_collapse())] += 1;
            next.verify().map_err(|e| format!("{name}: marking broken after {}: {e}", rec.label))?;
            next.check_class_bijection().map_err(|e| format!("{name}: class bijection after {}: {e}", rec.label))?;
            let (back, _) = next.apply(&rec.inverse).map_err(|e| format!("{name}: inverse of {}: {e}", rec.label))?;
            back.verify().map_err(|e| e.to_string())?;
            match marked_iso(&m, &back).map_err(|e| e.to_string())? {
                IsoVerdict::Isomorphic(_) => round_trips += 1,
                v => return Err(format!("{name}: round trip of {} gave {v:?}", rec.label)),
            }
            m = next;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < MOVE_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{applied} moves ({} expansions, {} collapses), {round_trips} round trips isomorphic, {:.1}s",
        by_kind[0],
        by_kind[1],
        elapsed.as_secs_f64()
    ))
}

// ---------------------------------------------------------------- 4

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut notes = Vec::new();
    let mut skipped = Vec::new();
    for (name, src) in corpus::ALL {
        let g = gog(src);
        // a non-minimal fixture here has finite fundamental group, so any two
        // elliptic elements share a fixed point
        if g.edge_count() == 0 || !g.is_minimal() {
            skipped.push(name);
            continue;
        }
        let near = g.ball(&g.base_vertex(), SERRE_SAMPLE_RADIUS);
        let ball: BTreeSet<TreeVertex> = g.ball(&g.base_vertex(), SERRE_RADIUS).into_iter().collect();
        let mut pairs = 0;
        let mut attempts = 0;
        while pairs < SERRE_PAIRS {
            attempts += 1;
            ensure(attempts < 200 * SERRE_PAIRS, || format!("{name}: only {pairs} disjoint pairs found"))?;
            let (p, q) = (near.choose(&mut rng).unwrap(), near.choose(&mut rng).unwrap());
            let (sp, sq) = (g.stabilizer_elements(p), g.stabilizer_elements(q));
            let (x, y) = (sp.choose(&mut rng).unwrap(), sq.choose(&mut rng).unwrap());
            let fx: BTreeSet<&TreeVertex> = ball.iter().filter(|v| g.fixes(x, v).unwrap()).collect();
            let fy: BTreeSet<&TreeVertex> = ball.iter().filter(|v| g.fixes(y, v).unwrap()).collect();
            // both meet the (convex) ball, so disjoint here means disjoint
            if fx.is_empty() || fy.is_empty() || fx.intersection(&fy).next().is_some() {
                continue;
            }
            pairs += 1;
            let xy = g.mul(x, y).map_err(|e| e.to_string())?;
            let l = g.translation_length(&xy).map_err(|e| e.to_string())?;
            ensure(l > 0, || format!("{name}: {} · {} is elliptic", g.print_word(x), g.print_word(y)))?;
            ensure(ball.iter().all(|v| !g.fixes(&xy, v).unwrap()), || format!("{name}: product fixes a ball vertex"))?;
        }
        notes.push(format!("{name} {pairs}/{attempts}"));
    }
    Ok(format!(
        "all products hyperbolic; pairs/attempts: {}; finite or trivial, skipped: {}",
        notes.join(", "),
        skipped.join(", ")
    ))
}

// ---------------------------------------------------------------- 5

/// Arc between two vertices by breadth-first search, as a vertex set.
struct Arcs {
    adj: BTreeMap<u32, Vec<u32>>,
}

impl Arcs {
    fn new(t: &FiniteTree) -> Arcs {
        let mut adj: BTreeMap<u32, Vec<u32>> = t.vertices().iter().map(|&v| (v, Vec::new())).collect();
        for (u, v) in t.edges() {
            adj.get_mut(&u).unwrap().push(v);
            adj.get_mut(&v).unwrap().push(u);
        }
        Arcs { adj }
    }

    fn arc(&self, a: u32, b: u32) -> BTreeSet<u32> {
        let mut prev = BTreeMap::from([(a, a)]);
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[&x] {
                if let std::collections::btree_map::Entry::Vacant(e) = prev.entry(y) {
                    e.insert(x);
                    queue.push_back(y);
                }
            }
        }
        let mut out = BTreeSet::from([b]);
        let mut x = b;
        while x != a {
            x = prev[&x];
            out.insert(x);
        }
        out
    }
}

/// Hypotheses (1)-(3), the conclusion, and the per-step property, checked
/// directly from arcs.
fn backtracking_oracle(arcs: &Arcs, seq: &[u32]) -> (bool, bool, bool) {
    let a: Vec<BTreeSet<u32>> = seq.windows(2).map(|w| arcs.arc(w[0], w[1])).collect();
    let mut hyp = seq.windows(2).all(|w| w[0] != w[1]);
    for i in 1..a.len() {
        let meet: BTreeSet<u32> = a[i - 1].intersection(&a[i]).copied().collect();
        hyp &= meet.len() < a[i - 1].len() && meet.len() < a[i].len();
        if i >= 2 {
            hyp &= a[i - 2].intersection(&a[i - 1]).all(|x| !a[i].contains(x));
        }
    }
    let mut conclusion = true;
    for i in 0..a.len() {
        for j in i + 2..a.len() {
            conclusion &= a[i].is_disjoint(&a[j]);
        }
    }
    // C_i, the hull of u_0..u_i, is the union of the first i arcs
    let hull = |i: usize| -> BTreeSet<u32> {
        let mut c: BTreeSet<u32> = a[..i].iter().flatten().copied().collect();
        c.insert(seq[0]);
        c
    };
    let mut induction = true;
    for i in 1..a.len() {
        induction &= !hull(i).contains(&seq[i + 1]) && a[i].is_disjoint(&hull(i - 1));
    }
    (hyp, conclusion, induction)
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut stats = SamplerStats::default();
    let mut lengths = BTreeMap::new();
    for s in 0..BACKTRACK_SAMPLES {
        let n = rng.random_range(2..=BACKTRACK_MAX_VERTICES);
        let t = FiniteTree::random(&mut rng, n);
        let max_arcs = rng.random_range(2..=BACKTRACK_MAX_ARCS);
        let seq = sample_sequence(&t, &mut rng, max_arcs, &mut stats);
        let rep = t.check_backtracking(&seq).map_err(|e| e.to_string())?;
        ensure(rep.hypotheses_hold(), || format!("sample {s}: sampler left the hypothesis region"))?;
        ensure(rep.conclusion_violations.is_empty(), || format!("sample {s}: violations {:?}", rep.conclusion_violations))?;
        ensure(rep.induction_failures.is_empty(), || format!("sample {s}: (P_i) fails at {:?}", rep.induction_failures))?;
        let (hyp, conclusion, induction) = backtracking_oracle(&Arcs::new(&t), &seq);
        ensure(hyp, || format!("sample {s}: oracle rejects hypotheses for {seq:?}"))?;
        ensure(conclusion, || format!("sample {s}: oracle finds a conclusion violation in {seq:?}"))?;
        ensure(induction, || format!("sample {s}: oracle finds a (P_i) failure in {seq:?}"))?;
        *lengths.entry(seq.len() - 1).or_insert(0usize) += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < BACKTRACK_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{BACKTRACK_SAMPLES} samples, 0 violations, arcs per sample {lengths:?}, acceptance rate {:.3}, {:.1}s",
        stats.acceptance_rate(),
        elapsed.as_secs_f64()
    ))
}

// ---------------------------------------------------------------- 6

/// Britton reduction by repeated pinching, with no coset representatives:
/// true iff the raw loop is trivial.
fn britton_trivial(g: &GraphOfGroups, raw: &[Syllable]) -> bool {
    let mut w: Vec<Syllable> = raw.to_vec();
    let mut at: Vec<VertexId>;
    loop {
        // vertex at each position, from the base
        at = Vec::with_capacity(w.len());
        let mut v = g.base();
        for s in &w {
            if let Syllable::Letter(y) = s {
                v = g.target(*y);
            }
            at.push(v);
        }
        let mut changed = false;
        // merge neighbouring elements and drop identities
        let mut merged: Vec<Syllable> = Vec::with_capacity(w.len());
        let mut merged_at: Vec<VertexId> = Vec::with_capacity(w.len());
        for (i, s) in w.iter().enumerate() {
            match (*s, merged.last().copied()) {
                (Syllable::Elem(x), Some(Syllable::Elem(y))) => {
                    let grp = g.group(at[i]);
                    *merged.last_mut().unwrap() = Syllable::Elem(grp.mul(y, x));
                    changed = true;
                }
                _ => {
                    merged.push(*s);
                    merged_at.push(at[i]);
                }
            }
        }
        let before = merged.len();
        let keep: Vec<(Syllable, VertexId)> = merged
            .into_iter()
            .zip(merged_at)
            .filter(|(s, _)| !matches!(s, Syllable::Elem(x) if x.is_identity()))
            .collect();
        changed |= keep.len() != before;
        w = keep.iter().map(|p| p.0).collect();
        // one pinch y·[h]·ȳ with h in the arriving edge group image
        for i in 0..w.len() {
            let Syllable::Letter(y) = w[i] else { continue };
            let (h, j) = match w.get(i + 1) {
                Some(Syllable::Elem(h)) => (*h, i + 2),
                _ => (Elem::IDENTITY, i + 1),
            };
            if w.get(j) != Some(&Syllable::Letter(y.reversed())) {
                continue;
            }
            let Some(c) = g.end(y.target_end()).inclusion.preimage(h) else { continue };
            let s = g.end(y.source_end()).inclusion.apply(c);
            w.splice(i..=j, [Syllable::Elem(s)]);
            changed = true;
            break;
        }
        if !changed {
            return w.is_empty();
        }
    }
}

/// All single syllables available at `v`: nontrivial elements and the
/// letters leaving `v`.
fn syllables_at(g: &GraphOfGroups, v: VertexId) -> Vec<Syllable> {
    let mut out: Vec<Syllable> = g.group(v).elements().filter(|x| !x.is_identity()).map(Syllable::Elem).collect();
    for end in g.ends_at(v) {
        out.push(Syllable::Letter(Letter::leaving(end)));
    }
    out
}

fn loops_up_to(g: &GraphOfGroups, n: usize) -> Vec<Vec<Syllable>> {
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<Syllable>, VertexId)> = vec![(Vec::new(), g.base())];
    while let Some((w, v)) = stack.pop() {
        if v == g.base() {
            out.push(w.clone());
        }
        if w.len() == n {
            continue;
        }
        for s in syllables_at(g, v) {
            let next = if let Syllable::Letter(y) = s { g.target(y) } else { v };
            let mut w2 = w.clone();
            w2.push(s);
            stack.push((w2, next));
        }
    }
    out
}

/// A random loop of length at most `n`: a random walk steered home once
/// the remaining budget only suffices to return.
fn random_loop(g: &GraphOfGroups, rng: &mut ChaCha8Rng, n: usize) -> Vec<Syllable> {
    loop {
        let target = rng.random_range(1..=n);
        let mut w = Vec::new();
        let mut v = g.base();
        for _ in 0..target {
            let s = *syllables_at(g, v).choose(rng).unwrap();
            if let Syllable::Letter(y) = s {
                v = g.target(y);
            }
            w.push(s);
        }
        let home: Vec<Syllable> = g.tree_syllables(v);
        let back = g.invert_raw(g.base(), &home);
        if w.len() + back.len() <= n {
            w.extend(back);
            return w;
        }
    }
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut notes = Vec::new();
    for (name, src) in [("SSF1", corpus::SSF1), ("HNN1", corpus::HNN1)] {
        let g = gog(src);
        let base = g.base_vertex();
        let ball = g.ball(&base, NF_RADIUS);
        let mut words = loops_up_to(&g, NF_EXHAUSTIVE_SYLLABLES);
        let exhaustive = words.len();
        for _ in 0..NF_SAMPLES {
            words.push(random_loop(&g, &mut rng, NF_MAX_SYLLABLES));
        }
        let (mut identities, mut kernel) = (0, 0);
        for raw in &words {
            let x = g.normal_form(raw).map_err(|e| e.to_string())?;
            let trivial_on_ball = ball.iter().all(|v| g.act(&x, v).unwrap() == *v);
            let oracle = trivial_on_ball && britton_trivial(&g, raw);
            ensure(x.is_identity() == oracle, || format!("{name}: identity disagreement on {raw:?}"))?;
            ensure(!x.is_identity() || trivial_on_ball, || format!("{name}: identity moves the ball"))?;
            identities += usize::from(oracle);
            kernel += usize::from(trivial_on_ball && !oracle);
            let l = g.translation_length(&x).map_err(|e| e.to_string())?;
            let min = ball.iter().map(|v| g.distance(v, &g.act(&x, v).unwrap()).unwrap()).min().unwrap();
            ensure(l == min, || format!("{name}: translation length {l} but ball minimum {min} for {}", g.print_word(&x)))?;
        }
        notes.push(format!(
            "{name}: {exhaustive} exhaustive + {NF_SAMPLES} sampled, {identities} identities, {kernel} nontrivial kernel elements"
        ));
    }
    Ok(format!("0 disagreements; {}", notes.join("; ")))
}

// ---------------------------------------------------------------- 7

/// (reduced, minimal, strongly slide-free) from the tables directly.
fn independent_predicates(g: &GraphOfGroups) -> (bool, bool, bool) {
    let reduced = g.edges().iter().all(|e| {
        let (a, b) = (e.end(Side::A), e.end(Side::B));
        a.vertex == b.vertex
            || (e.group.order() != g.group(a.vertex).order() && e.group.order() != g.group(b.vertex).order())
    });
    let minimal = (g.vertex_count() == 1 && g.edge_count() == 0)
        || g.vertex_ids().all(|v| {
            let deg: usize = g.ends_at(v).iter().map(|&end| g.group(v).order() / g.edge(end.edge).group.order()).sum();
            deg >= 2
        });
    let mut slide_free = true;
    for v in g.vertex_ids() {
        let grp = g.group(v);
        let images: Vec<(usize, BTreeSet<Elem>)> = g
            .ends_at(v)
            .iter()
            .enumerate()
            .map(|(i, &end)| {
                let inc = &g.end(end).inclusion;
                (i, inc.domain().elements().map(|c| inc.apply(c)).collect())
            })
            .collect();
        for (i, a) in &images {
            for (j, b) in &images {
                if i == j {
                    continue;
                }
                for x in grp.elements() {
                    if a.iter().all(|&h| b.contains(&grp.mul(grp.mul(x, h), grp.inv(x)))) {
                        slide_free = false;
                    }
                }
            }
        }
    }
    (reduced, minimal, slide_free)
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let mut graphs: Vec<(String, GraphOfGroups)> = corpus::ALL.iter().map(|(n, s)| (n.to_string(), gog(s))).collect();
    for i in 0..RANDOM_GRAPHS {
        graphs.push((format!("random #{i}"), random_gog(&mut rng, RANDOM_MAX_ORDER, RANDOM_MAX_EDGES)));
    }
    let mut hypothesis = 0;
    let mut with_edges = 0;
    for (name, g) in &graphs {
        let lib = (g.is_reduced(), g.is_minimal(), g.is_strongly_slide_free());
        let oracle = independent_predicates(g);
        ensure(lib == oracle, || format!("{name}: predicates {lib:?} but oracle {oracle:?}\n{}", g.to_dsl()))?;
        let (reduced, minimal, ssf) = oracle;
        if ssf && minimal {
            hypothesis += 1;
            with_edges += usize::from(g.edge_count() > 0);
            ensure(reduced, || format!("{name}: slide-free and minimal but not reduced\n{}", g.to_dsl()))?;
        }
    }
    ensure(with_edges > 0, || "no instance with edges satisfies the hypotheses".into())?;
    Ok(format!(
        "{} graphs, {hypothesis} slide-free and minimal ({with_edges} with edges), all reduced",
        graphs.len()
    ))
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Check {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let golden_dir = root.join("tests/golden");
    let mut compared = 0;
    let mut runs = 0;
    for (name, _) in corpus::ALL {
        let stem = name.to_lowercase();
        let file = format!("../core/fixtures/{stem}.gog");
        let mut commands: Vec<(Vec<&str>, String)> = vec![
            (vec!["check", &file, "--format", "json"], format!("check_{stem}.json")),
            (vec!["check", &file], format!("check_{stem}.txt")),
            (vec!["dot", &file], format!("{stem}.dot")),
        ];
        if stem != "nred" && stem != "slide1" {
            commands.push((vec!["rigidity", &file, "--format", "json", "--seed", "5"], format!("rigidity_{stem}.json")));
            commands.push((vec!["enumerate", &file, "--depth", "2", "--format", "json"], format!("enumerate_{stem}.json")));
        }
        for (args, golden) in commands {
            let mut argv = vec!["deformspace"];
            argv.extend(args);
            let a = cli::run(argv.clone(), &mut "".as_bytes());
            let b = cli::run(argv.clone(), &mut "".as_bytes());
            runs += 2;
            ensure(a.stdout == b.stdout && a.code == b.code, || format!("{argv:?} differs between runs"))?;
            let expected = std::fs::read_to_string(golden_dir.join(&golden)).map_err(|e| format!("{golden}: {e}"))?;
            ensure(a.stdout == expected, || format!("{argv:?} differs from {golden}"))?;
            compared += 1;
        }
    }
    let gen = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..20).map(|_| random_gog(&mut rng, 24, 4).to_dsl()).collect::<Vec<_>>()
    };
    ensure(gen(SEED) == gen(SEED), || "random graph generation is not reproducible".into())?;
    Ok(format!("{runs} runs byte-identical, {compared} golden files matched"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("rigidity at desk scale", criterion_1),
        ("negative-space coverage", criterion_2),
        ("move soundness", criterion_3),
        ("Serre's lemma suite", criterion_4),
        ("backtracking lemma suite", criterion_5),
        ("normal-form oracle equivalence", criterion_6),
        ("slide-free and minimal implies reduced", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("[PRIMARY] criterion {} ({title}): PASS ({secs:.1}s) {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[PRIMARY] criterion {} ({title}): FAIL ({secs:.1}s) {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
