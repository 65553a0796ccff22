use deformspace_core::bass_serre::TreeVertex;
use deformspace_core::corpus;
use deformspace_core::dsl::parse_gog;
use deformspace_core::gog::GraphOfGroups;
use deformspace_core::moves::{enumerate_reduced, marked_iso, Caps, IsoVerdict, MarkedGog};
use deformspace_core::rigidity::{canonical_map, MapOptions, Verdict};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn marked(src: &str) -> MarkedGog {
    MarkedGog::new(parse_gog(src).unwrap())
}

#[test]
fn enumeration_ignores_exploration_order() {
    for (src, depth) in [(corpus::FREE3, 2), (corpus::SSF2, 3), (corpus::SLIDE1, 2)] {
        let m = marked(src);
        let fwd = enumerate_reduced(&m, &Caps { depth, ..Caps::default() }).unwrap();
        let rev = enumerate_reduced(&m, &Caps { depth, reverse: true, ..Caps::default() }).unwrap();
        let a: Vec<_> = fwd.reduced().map(|(_, c)| c).collect();
        let b: Vec<_> = rev.reduced().map(|(_, c)| c).collect();
        assert_eq!(a.len(), b.len());
        for x in &a {
            let matches = b
                .iter()
                .filter(|y| matches!(marked_iso(&x.marked, &y.marked).unwrap(), IsoVerdict::Isomorphic(_)))
                .count();
            assert_eq!(matches, 1);
        }
    }
}

#[test]
fn free3_middle_vertex_takes_every_class() {
    let m = marked(corpus::FREE3);
    let space = enumerate_reduced(&m, &Caps { depth: 2, ..Caps::default() }).unwrap();
    let r = m.gog();
    let class_of = |name: &str| {
        let v = r.vertex_by_name(name).unwrap();
        m.ref_class(&[r.vertex_element(v, r.group(v).generators()[0])]).unwrap()
    };
    let wanted: Vec<usize> = ["a", "b", "c"].iter().map(|n| class_of(n)).collect();
    let mut seen = Vec::new();
    for (_, c) in space.reduced() {
        let g = c.marked.gog();
        let mid = g.vertex_ids().find(|&v| g.ends_at(v).len() == 2).unwrap();
        let x = g.vertex_element(mid, g.group(mid).generators()[0]);
        seen.push(c.marked.ref_class(&[x]).unwrap());
    }
    for w in wanted {
        assert!(seen.contains(&w), "class {w} never in the middle: {seen:?}");
    }
}

fn random_word(g: &GraphOfGroups, rng: &mut ChaCha8Rng) -> deformspace_core::bass_serre::PathWord {
    let ball = g.ball(&g.base_vertex(), 2);
    let mut x = g.identity_word();
    for _ in 0..rng.random_range(1..4) {
        let p = ball.choose(rng).unwrap();
        let s = g.stabilizer_elements(p);
        x = g.mul(&x, s.choose(rng).unwrap()).unwrap();
    }
    x
}

#[test]
fn moves_preserve_ellipticity() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let caps = Caps { max_edges: 5, max_order: 24, ..Caps::default() };
    for (_, src) in corpus::ALL {
        let mut m = marked(src);
        for _ in 0..4 {
            let legal = m.legal_moves(&caps);
            let Some(k) = legal.choose(&mut rng) else { break };
            let (next, rec) = m.apply(k).unwrap();
            for _ in 0..10 {
                let x = random_word(m.gog(), &mut rng);
                let y = rec.forward.apply(m.gog(), next.gog(), &x).unwrap();
                let back = rec.backward.apply(next.gog(), m.gog(), &y).unwrap();
                assert_eq!(back, x);
                assert_eq!(
                    m.gog().is_elliptic(&x).unwrap(),
                    next.gog().is_elliptic(&y).unwrap(),
                    "{}",
                    rec.label
                );
            }
            m = next;
        }
    }
}

#[test]
fn slide_free_vertex_groups_are_maximal_elliptic() {
    for src in [corpus::SSF1, corpus::SSF2, corpus::SSF3] {
        let g = parse_gog(src).unwrap();
        let ball = g.ball(&g.base_vertex(), 2);
        for v in g.vertex_ids() {
            let p = g.standard_lift(v);
            let gens = g.stabilizer_generators(&p);
            let fixed = g.fixed_set(&gens, 6).unwrap();
            assert_eq!(fixed.into_iter().collect::<Vec<_>>(), vec![p.clone()]);
        }
        for p in &ball {
            for q in &ball {
                if p < q {
                    let mut gens = g.stabilizer_generators(p);
                    gens.extend(g.stabilizer_generators(q));
                    assert!(!g.is_elliptic_subgroup(&gens).unwrap());
                }
            }
        }
    }
}

/// Every non-backtracking path of three edges starting at a standard lift.
fn all_tripods(g: &GraphOfGroups) -> Vec<[TreeVertex; 4]> {
    let mut out = Vec::new();
    for v in g.vertex_ids() {
        let p0 = g.standard_lift(v);
        for p1 in g.neighbors(&p0) {
            for p2 in g.neighbors(&p1).into_iter().filter(|x| *x != p0) {
                for p3 in g.neighbors(&p2).into_iter().filter(|x| *x != p1) {
                    out.push([p0.clone(), p1.clone(), p2.clone(), p3]);
                }
            }
        }
    }
    out
}

#[test]
fn tripods_never_meet_under_the_hypotheses() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for src in [corpus::SSF1, corpus::SSF2, corpus::SSF3] {
        let m = marked(src);
        let caps = Caps { max_edges: 5, max_order: 24, ..Caps::default() };
        let mut t = m.clone();
        for _ in 0..3 {
            let legal = t.legal_moves(&caps);
            t = t.apply(legal.choose(&mut rng).unwrap()).unwrap().0;
        }
        while let Some(k) = t.legal_moves(&caps).into_iter().find(|k| k.is_collapse()) {
            t = t.apply(&k).unwrap().0;
        }
        let cm = canonical_map(&m, &t, &MapOptions::default()).unwrap();
        assert_eq!(cm.verdict, Verdict::Isomorphism);
        let tripods = all_tripods(m.gog());
        assert!(!tripods.is_empty());
        for p in &tripods {
            let out = cm.check_tripod([&p[0], &p[1], &p[2], &p[3]]).unwrap();
            assert!(out.empty && out.witness.is_none());
        }
    }
}
