//! Involutions of `GL_2` and `GL_2 × GL_2`.
//!
//! Every involution considered here has the form
//! `θ(g)_i = φ_i(g_{s(i)})` with `s` a permutation of the factors and
//! `φ_i(x) = A x A⁻¹` (inner) or `φ_i(x) = A x^{-T} A⁻¹` (outer). Witnesses
//! are only defined up to scalars, so they are stored scaled to have first
//! nonzero entry 1; two involutions are equal as maps exactly when their
//! canonical forms agree.

use std::fmt;
use std::str::FromStr;

use arrayvec::ArrayVec;
use serde::{Deserialize, Serialize};

use super::{Element, GroupError, GroupKind, GroupSpec, Mat2, Result};
use crate::gf::{Field, FieldTower};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    Inner,
    Outer,
}

impl FromStr for MapKind {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inner" => Ok(MapKind::Inner),
            "outer" => Ok(MapKind::Outer),
            other => Err(GroupError::InvalidInvolution(format!("unknown kind `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FactorMap {
    pub source: u8,
    pub kind: MapKind,
    pub witness: Mat2,
}

impl FactorMap {
    fn apply(&self, f: &Field, x: &Mat2) -> Mat2 {
        match self.kind {
            MapKind::Inner => self.witness.conj(f, x),
            MapKind::Outer => self.witness.conj(f, &x.inv(f).transpose()),
        }
    }

    fn differential(&self, f: &Field, x: &Mat2) -> Mat2 {
        match self.kind {
            MapKind::Inner => self.witness.conj(f, x),
            MapKind::Outer => self.witness.conj(f, &x.transpose()).neg(f),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Involution {
    maps: ArrayVec<FactorMap, 2>,
}

impl fmt::Debug for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.type_name())?;
        if self.type_name() == "swap" {
            f.write_str(match self.maps[0].kind {
                MapKind::Inner => "/inner",
                MapKind::Outer => "/outer",
            })?;
        }
        for (i, m) in self.maps.iter().enumerate() {
            write!(f, " {i}<-{}:{:?}", m.source, m.witness.to_rows())?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct InvolutionRepr<'a> {
    #[serde(rename = "type")]
    ty: &'a str,
    maps: Vec<MapRepr>,
}

#[derive(Serialize)]
struct MapRepr {
    source: u8,
    kind: MapKind,
    witness: [[u32; 2]; 2],
}

impl Serialize for Involution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InvolutionRepr {
            ty: self.type_name(),
            maps: self
                .maps
                .iter()
                .map(|m| MapRepr { source: m.source, kind: m.kind, witness: m.witness.to_rows() })
                .collect(),
        }
        .serialize(s)
    }
}

/// Named starting involutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Seed {
    /// `Int(diag(1, −1))`.
    Diag,
    /// `Int(antidiag(1, 1))`.
    Antidiag,
    /// `g ↦ ᵗg⁻¹`.
    TransposeInverse,
    /// `(g, h) ↦ (h, g)`.
    Swap,
    Custom { matrix: [i64; 4], kind: MapKind },
}

impl Seed {
    pub const NAMED: [Seed; 4] = [Seed::Diag, Seed::Antidiag, Seed::TransposeInverse, Seed::Swap];

    pub fn name(&self) -> String {
        match self {
            Seed::Diag => "diag".into(),
            Seed::Antidiag => "antidiag".into(),
            Seed::TransposeInverse => "transpose-inverse".into(),
            Seed::Swap => "swap".into(),
            Seed::Custom { matrix, kind } => {
                let k = match kind {
                    MapKind::Inner => "inner",
                    MapKind::Outer => "outer",
                };
                format!("custom:{k}:{},{},{},{}", matrix[0], matrix[1], matrix[2], matrix[3])
            }
        }
    }

    /// Seeds that make sense for the group kind.
    pub fn named_for(kind: GroupKind) -> Vec<Seed> {
        match kind {
            GroupKind::Gl2 => vec![Seed::Diag, Seed::Antidiag, Seed::TransposeInverse],
            GroupKind::Gl2XGl2 => vec![Seed::Swap, Seed::Diag, Seed::Antidiag, Seed::TransposeInverse],
        }
    }
}

impl FromStr for Seed {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diag" => Ok(Seed::Diag),
            "antidiag" => Ok(Seed::Antidiag),
            "transpose-inverse" => Ok(Seed::TransposeInverse),
            "swap" => Ok(Seed::Swap),
            other => Err(GroupError::InvalidInvolution(format!("unknown seed `{other}`"))),
        }
    }
}

impl Involution {
    /// Validates, canonicalizes and checks `θ² = 1`, `θ ≠ 1`.
    pub fn new(f: &Field, maps: &[FactorMap]) -> Result<Self> {
        let n = maps.len();
        if n == 0 || n > 2 {
            return Err(GroupError::InvalidInvolution("one or two factors expected".into()));
        }
        let mut out = ArrayVec::new();
        for m in maps {
            if m.source as usize >= n {
                return Err(GroupError::InvalidInvolution("source factor out of range".into()));
            }
            if !m.witness.is_invertible(f) {
                return Err(GroupError::InvalidInvolution("singular witness".into()));
            }
            out.push(FactorMap { witness: m.witness.normalized(f), ..*m });
        }
        let theta = Involution { maps: out };
        for (i, m) in theta.maps.iter().enumerate() {
            let back = &theta.maps[m.source as usize];
            if back.source as usize != i {
                return Err(GroupError::InvalidInvolution("factor permutation is not an involution".into()));
            }
            if back.kind != m.kind {
                return Err(GroupError::InvalidInvolution("θ² is outer".into()));
            }
            // θ²(g)_i = φ_i(φ_s(g_i)): scalar witness product needed.
            let prod = match m.kind {
                MapKind::Inner => m.witness.mul(f, &back.witness),
                MapKind::Outer => m.witness.mul(f, &back.witness.inv(f).transpose()),
            };
            if !prod.is_scalar() {
                return Err(GroupError::InvalidInvolution("θ² ≠ 1".into()));
            }
        }
        if theta.is_identity() {
            return Err(GroupError::InvalidInvolution("the identity is not an involution".into()));
        }
        Ok(theta)
    }

    fn is_identity(&self) -> bool {
        self.maps.iter().enumerate().all(|(i, m)| {
            m.source as usize == i && m.kind == MapKind::Inner && m.witness.is_scalar()
        })
    }

    pub fn from_seed(spec: &GroupSpec, seed: Seed) -> Result<Self> {
        let f = spec.field();
        let n = spec.factors();
        let local = |kind, witness| -> Vec<FactorMap> {
            (0..n).map(|i| FactorMap { source: i as u8, kind, witness }).collect()
        };
        let maps = match seed {
            Seed::Diag => local(MapKind::Inner, Mat2::from_ints(f, [1, 0, 0, -1])),
            Seed::Antidiag => local(MapKind::Inner, Mat2::from_ints(f, [0, 1, 1, 0])),
            Seed::TransposeInverse => local(MapKind::Outer, Mat2::IDENTITY),
            Seed::Custom { matrix, kind } => local(kind, Mat2::from_ints(f, matrix)),
            Seed::Swap => {
                if n != 2 {
                    return Err(GroupError::SeedNotForGroup { seed: seed.name(), group: spec.kind() });
                }
                vec![
                    FactorMap { source: 1, kind: MapKind::Inner, witness: Mat2::IDENTITY },
                    FactorMap { source: 0, kind: MapKind::Inner, witness: Mat2::IDENTITY },
                ]
            }
        };
        Self::new(f, &maps)
    }

    pub fn maps(&self) -> &[FactorMap] {
        &self.maps
    }

    /// `inner`, `outer` or `swap`.
    pub fn type_name(&self) -> &'static str {
        if self.maps.iter().enumerate().any(|(i, m)| m.source as usize != i) {
            "swap"
        } else if self.maps[0].kind == MapKind::Inner {
            "inner"
        } else {
            "outer"
        }
    }

    /// `θ(g)`, with `f` the field the entries of `g` (and of the witnesses)
    /// live in.
    pub fn apply(&self, f: &Field, g: &Element) -> Element {
        let mut out = Element::IDENTITY;
        for (i, m) in self.maps.iter().enumerate() {
            out.0[i] = m.apply(f, &g.0[m.source as usize]);
        }
        out
    }

    /// `dθ` on `Lie(G)`.
    pub fn differential(&self, f: &Field, x: &[Mat2; 2]) -> [Mat2; 2] {
        let mut out = [Mat2::ZERO; 2];
        for (i, m) in self.maps.iter().enumerate() {
            out[i] = m.differential(f, &x[m.source as usize]);
        }
        out
    }

    pub fn is_fixed(&self, spec: &GroupSpec, g: &Element) -> bool {
        self.apply(spec.field(), g) == *g
    }

    /// `g·θ = Int(g) ∘ θ ∘ Int(g)⁻¹`, canonicalized.
    pub fn act(&self, spec: &GroupSpec, g: &Element) -> Involution {
        let f = spec.field();
        let mut maps = ArrayVec::new();
        for (i, m) in self.maps.iter().enumerate() {
            let src = &g.0[m.source as usize];
            let w = match m.kind {
                MapKind::Inner => g.0[i].mul(f, &m.witness).mul(f, &src.inv(f)),
                MapKind::Outer => g.0[i].mul(f, &m.witness).mul(f, &src.transpose()),
            };
            maps.push(FactorMap { witness: w.normalized(f), ..*m });
        }
        Involution { maps }
    }

    /// `g θ(g)⁻¹` is central, i.e. `g` stabilizes `θ` under the action.
    pub fn stabilized_by(&self, spec: &GroupSpec, g: &Element) -> bool {
        let h = spec.mul(g, &spec.inv(&self.apply(spec.field(), g)));
        spec.is_central(&h)
    }

    /// The same involution with witnesses pushed into `F_{q^d}`.
    pub fn embedded(&self, tower: &FieldTower, d: u32) -> Result<Involution> {
        let mut maps = ArrayVec::new();
        for m in &self.maps {
            maps.push(FactorMap { witness: m.witness.embed(tower, d)?, ..*m });
        }
        Ok(Involution { maps })
    }
}

#[cfg(test)]
mod tests {
    use super::super::Bounds;
    use super::*;

    fn spec(kind: GroupKind, q: u64) -> GroupSpec {
        GroupSpec::new(kind, q, &Bounds::default()).unwrap()
    }

    #[test]
    fn seeds_are_involutions_pointwise() {
        for (kind, q) in [(GroupKind::Gl2, 3), (GroupKind::Gl2, 5), (GroupKind::Gl2XGl2, 3)] {
            let g = spec(kind, q);
            for seed in Seed::named_for(kind) {
                let th = Involution::from_seed(&g, seed).unwrap();
                let f = g.field();
                let mut moved = false;
                for x in g.elements() {
                    let y = th.apply(f, &x);
                    assert_eq!(th.apply(f, &y), x);
                    moved |= y != x;
                }
                assert!(moved);
            }
        }
    }

    #[test]
    fn seed_validation() {
        let g = spec(GroupKind::Gl2, 3);
        assert!(matches!(
            Involution::from_seed(&g, Seed::Swap),
            Err(GroupError::SeedNotForGroup { .. })
        ));
        let bad = Seed::Custom { matrix: [1, 1, 0, 1], kind: MapKind::Inner };
        assert!(Involution::from_seed(&g, bad).is_err());
        let scalar = Seed::Custom { matrix: [2, 0, 0, 2], kind: MapKind::Inner };
        assert!(Involution::from_seed(&g, scalar).is_err());
        let sym = Seed::Custom { matrix: [0, 1, 1, 0], kind: MapKind::Outer };
        assert_eq!(Involution::from_seed(&g, sym).unwrap().type_name(), "outer");
        let singular = Seed::Custom { matrix: [1, 1, 1, 1], kind: MapKind::Outer };
        assert!(Involution::from_seed(&g, singular).is_err());
    }

    #[test]
    fn action_is_conjugation_and_a_group_action() {
        let g = spec(GroupKind::Gl2, 3);
        let f = g.field();
        let n = g.order();
        for seed in Seed::named_for(GroupKind::Gl2) {
            let th = Involution::from_seed(&g, seed).unwrap();
            for i in 0..n {
                let a = g.element(i);
                let moved = th.act(&g, &a);
                // pointwise: (a·θ)(x) = a θ(a⁻¹ x a) a⁻¹
                for j in (0..n).step_by(5) {
                    let x = g.element(j);
                    let lhs = moved.apply(f, &x);
                    let rhs = g.conj(&a, &th.apply(f, &g.conj(&g.inv(&a), &x)));
                    assert_eq!(lhs, rhs);
                }
                for j in (0..n).step_by(11) {
                    let b = g.element(j);
                    assert_eq!(th.act(&g, &g.mul(&a, &b)), th.act(&g, &b).act(&g, &a));
                }
                assert_eq!(th.stabilized_by(&g, &a), moved == th);
            }
        }
    }

    #[test]
    fn swap_orbit_keeps_type() {
        let g = spec(GroupKind::Gl2XGl2, 3);
        let th = Involution::from_seed(&g, Seed::Swap).unwrap();
        for i in (0..g.order()).step_by(13) {
            assert_eq!(th.act(&g, &g.element(i)).type_name(), "swap");
        }
    }

    #[test]
    fn differential_is_an_involution() {
        let g = spec(GroupKind::Gl2, 5);
        let f = g.field();
        for seed in Seed::named_for(GroupKind::Gl2) {
            let th = Involution::from_seed(&g, seed).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    let x = [Mat2::unit(i, j), Mat2::ZERO];
                    assert_eq!(th.differential(f, &th.differential(f, &x)), x);
                }
            }
        }
    }
}
