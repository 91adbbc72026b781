//! Named data shipped with the crate.

use std::path::Path;

use super::{DatumDocument, Result, RootDataError, TwistedRootDatum};

const SHIPPED: &[(&str, &str)] = &[
    ("gl2_split", include_str!("../../data/gl2_split.json")),
    ("gl2_elliptic", include_str!("../../data/gl2_elliptic.json")),
    ("sl2_split", include_str!("../../data/sl2_split.json")),
    ("sl2_elliptic", include_str!("../../data/sl2_elliptic.json")),
    ("gl2xgl2_split", include_str!("../../data/gl2xgl2_split.json")),
    ("gl2xgl2_elliptic", include_str!("../../data/gl2xgl2_elliptic.json")),
    ("gl2xgl2_swap_elliptic", include_str!("../../data/gl2xgl2_swap_elliptic.json")),
    ("gl3_split", include_str!("../../data/gl3_split.json")),
    ("gl3_unitary", include_str!("../../data/gl3_unitary.json")),
    ("gl3_coxeter", include_str!("../../data/gl3_coxeter.json")),
    ("gl4_coxeter", include_str!("../../data/gl4_coxeter.json")),
    ("gl4_unitary", include_str!("../../data/gl4_unitary.json")),
    ("gl6_coxeter", include_str!("../../data/gl6_coxeter.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    SHIPPED.iter().map(|(n, _)| *n)
}

pub fn parse(json: &str) -> Result<TwistedRootDatum> {
    let doc: DatumDocument = serde_json::from_str(json).map_err(|e| RootDataError::Load(e.to_string()))?;
    TwistedRootDatum::from_document(doc)
}

pub fn load(name: &str) -> Result<TwistedRootDatum> {
    let (_, json) = SHIPPED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| RootDataError::UnknownDatum(name.to_string()))?;
    parse(json)
}

pub fn load_path(path: &Path) -> Result<TwistedRootDatum> {
    let json = std::fs::read_to_string(path).map_err(|e| RootDataError::Load(format!("{}: {e}", path.display())))?;
    let mut datum = parse(&json)?;
    if datum.name == "unnamed" {
        if let Some(stem) = path.file_stem() {
            datum.name = stem.to_string_lossy().into_owned();
        }
    }
    Ok(datum)
}

/// A shipped name, or else a path to a JSON document.
pub fn resolve(spec: &str) -> Result<TwistedRootDatum> {
    match load(spec) {
        Err(RootDataError::UnknownDatum(_)) if Path::new(spec).exists() => load_path(Path::new(spec)),
        other => other,
    }
}

pub fn all() -> Vec<TwistedRootDatum> {
    names().map(|n| load(n).expect("shipped data are valid")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Lattice;
    use crate::sign::Sign;

    #[test]
    fn shipped_data_load() {
        let all = all();
        assert_eq!(all.len(), SHIPPED.len());
        for d in &all {
            assert!(names().any(|n| n == d.name()));
        }
        assert_eq!(load("nope").unwrap_err(), RootDataError::UnknownDatum("nope".into()));
    }

    #[test]
    fn spec_ranks() {
        assert_eq!(load("gl2_split").unwrap().fq_rank_sigma(Lattice::Torus), (2, Sign::Plus));
        assert_eq!(load("gl2_elliptic").unwrap().fq_rank_sigma(Lattice::Torus), (1, Sign::Minus));
        assert_eq!(load("sl2_elliptic").unwrap().fq_rank_sigma(Lattice::Torus), (0, Sign::Plus));
    }

    #[test]
    fn swap_elliptic_orbits_match_closure() {
        let d = load("gl2xgl2_swap_elliptic").unwrap();
        let orbits = d.galois_orbits();
        assert!(orbits.iter().all(|o| 4 % o.len() == 0));
        // brute-force closure count
        let n = d.roots().len();
        let mut seen = vec![false; n];
        let mut count = 0;
        for i in 0..n {
            if seen[i] {
                continue;
            }
            count += 1;
            let mut stack = vec![i];
            while let Some(j) = stack.pop() {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(d.index_of(&d.tau().apply(d.root(j))).unwrap());
                }
            }
        }
        assert_eq!(orbits.len(), count);
    }

    #[test]
    fn round_trip_document() {
        for d in all() {
            let json = serde_json::to_string(&d.to_document()).unwrap();
            let back = parse(&json).unwrap();
            assert_eq!(back.to_document(), d.to_document());
        }
    }
}
