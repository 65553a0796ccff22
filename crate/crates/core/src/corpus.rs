//! The fixture corpus, embedded as DSL source.

pub const SSF1: &str = include_str!("../fixtures/ssf1.gog");
pub const SSF2: &str = include_str!("../fixtures/ssf2.gog");
pub const SSF3: &str = include_str!("../fixtures/ssf3.gog");
pub const HNN1: &str = include_str!("../fixtures/hnn1.gog");
pub const TRIV: &str = include_str!("../fixtures/triv.gog");
pub const NRED: &str = include_str!("../fixtures/nred.gog");
pub const FREE3: &str = include_str!("../fixtures/free3.gog");
pub const SLIDE1: &str = include_str!("../fixtures/slide1.gog");

pub const ALL: [(&str, &str); 8] = [
    ("SSF1", SSF1),
    ("SSF2", SSF2),
    ("SSF3", SSF3),
    ("HNN1", HNN1),
    ("TRIV", TRIV),
    ("NRED", NRED),
    ("FREE3", FREE3),
    ("SLIDE1", SLIDE1),
];

/// Looks up a fixture by name, case-insensitively.
pub fn get(name: &str) -> Option<&'static str> {
    ALL.iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, s)| *s)
}
