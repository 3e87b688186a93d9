//! Bundled example data files.

use crate::io::DatumFile;

pub const ALL: &[(&str, &str)] = &[
    ("sp42", include_str!("../data/sp42.json")),
    ("e6", include_str!("../data/e6.json")),
    ("su22", include_str!("../data/su22.json")),
    ("u11", include_str!("../data/u11.json")),
    ("u11_gamma2", include_str!("../data/u11_gamma2.json")),
    ("split_a2", include_str!("../data/split_a2.json")),
    ("split_a3", include_str!("../data/split_a3.json")),
    ("split_b2", include_str!("../data/split_b2.json")),
    ("horospherical", include_str!("../data/horospherical.json")),
    ("lineality", include_str!("../data/lineality.json")),
    ("bad_star", include_str!("../data/bad_star.json")),
];

pub fn text(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parses a bundled file. Panics on unknown names, which are a programming
/// error.
pub fn load(name: &str) -> DatumFile {
    DatumFile::parse(text(name).unwrap_or_else(|| panic!("no fixture {name}"))).expect("bundled fixture parses")
}
