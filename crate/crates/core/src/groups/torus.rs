//! Rational maximal tori of `GL_2` and `GL_2 × GL_2` with their
//! diagonalization over `F_{q²}`.
//!
//! For each factor a matrix `P` over `F_{q²}` conjugates the torus to the
//! diagonal one; the diagonal entries of `P⁻¹ t P` are the coordinates of
//! `t` against the standard basis `e_1, e_2` of the character lattice.
//! The split torus uses `P = 1`. The elliptic torus
//! `{[[a, bε], [b, a]]}` uses `P = [[δ, −δ], [1, 1]]` with `δ² = ε`, so
//! that `t ↦ (u, u^q)` with `u = a + bδ`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Element, GroupError, GroupSpec, Involution, MapKind, Mat2, Result};
use crate::gf::{Elem, Field};
use crate::rootdata::{IntMatrix, InvolutionOnDatum, TwistedRootDatum};

/// Cap on the number of `F_{q²}`-points listed explicitly.
const EXT_POINT_LIMIT: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorusKind {
    Split,
    Elliptic,
}

impl fmt::Display for TorusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorusKind::Split => "split",
            TorusKind::Elliptic => "elliptic",
        })
    }
}

pub struct TorusEmbedding {
    kind: TorusKind,
    factors: usize,
    nonsquare: Elem,
    delta: Elem,
    p: Mat2,
    p_inv: Mat2,
    elements: Vec<Element>,
    indices: Vec<usize>,
    generators: Vec<Element>,
    datum: TwistedRootDatum,
}

impl fmt::Debug for TorusEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusEmbedding")
            .field("kind", &self.kind)
            .field("factors", &self.factors)
            .field("order", &self.elements.len())
            .finish()
    }
}

/// Smallest nonsquare code in the base field.
pub(crate) fn smallest_nonsquare(f: &Field) -> Elem {
    f.units().find(|&x| !f.is_square(x)).expect("odd characteristic has nonsquares")
}

impl TorusEmbedding {
    /// `T × T` (or `T`) with the same kind in every factor.
    pub fn new(spec: &GroupSpec, kind: TorusKind) -> Result<Self> {
        let f = spec.field();
        let ext = spec.ext();
        let tower = spec.tower();
        let nonsquare = smallest_nonsquare(f);
        let eps = tower.embed(nonsquare, 2)?;
        let delta = ext.elements().find(|&x| ext.mul(x, x) == eps).expect("nonsquare has a root in F_q²");
        let p = match kind {
            TorusKind::Split => Mat2::IDENTITY,
            TorusKind::Elliptic => Mat2::new(delta, ext.neg(delta), ext.one(), ext.one()),
        };
        let p_inv = p.inv(ext);

        let single: Vec<Mat2> = match kind {
            TorusKind::Split => f.units().flat_map(|a| f.units().map(move |d| Mat2::diag(a, d))).collect(),
            TorusKind::Elliptic => f
                .elements()
                .flat_map(|a| f.elements().map(move |b| (a, b)))
                .filter(|&(a, b)| !(a.is_zero() && b.is_zero()))
                .map(|(a, b)| Mat2::new(a, f.mul(b, nonsquare), b, a))
                .collect(),
        };
        let factors = spec.factors();
        let mut elements: Vec<Element> = match factors {
            1 => single.iter().map(|&m| Element::gl2(m)).collect(),
            _ => single.iter().flat_map(|&a| single.iter().map(move |&b| Element([a, b]))).collect(),
        };
        elements.sort();
        let mut indices: Vec<usize> =
            elements.iter().map(|t| spec.index_of(t).expect("torus lies in the group")).collect();
        indices.sort_unstable();

        let name = torus_name(kind, factors);
        let datum = build_datum(spec, &p, &p_inv, factors, &name)?;
        let mut torus =
            TorusEmbedding { kind, factors, nonsquare, delta, p, p_inv, elements, indices, generators: Vec::new(), datum };
        torus.generators = torus.find_generators(spec);
        Ok(torus)
    }

    pub fn elliptic(spec: &GroupSpec) -> Result<Self> {
        Self::new(spec, TorusKind::Elliptic)
    }

    pub fn split(spec: &GroupSpec) -> Result<Self> {
        Self::new(spec, TorusKind::Split)
    }

    pub fn kind(&self) -> TorusKind {
        self.kind
    }

    pub fn name(&self) -> String {
        torus_name(self.kind, self.factors)
    }

    /// The fixed nonsquare `ε` of `F_q`.
    pub fn nonsquare(&self) -> Elem {
        self.nonsquare
    }

    /// `δ ∈ F_{q²}` with `δ² = ε`.
    pub fn delta(&self) -> Elem {
        self.delta
    }

    /// The diagonalizer `P` (over `F_{q²}`) of each factor.
    pub fn diagonalizer(&self) -> Mat2 {
        self.p
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn contains(&self, spec: &GroupSpec, g: &Element) -> bool {
        spec.index_of(g).is_some_and(|i| self.contains_index(i))
    }

    /// Generators of `T(F_q)`.
    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn datum(&self) -> &TwistedRootDatum {
        &self.datum
    }

    /// Lattice coordinates of a point whose entries already lie in `F_{q²}`.
    pub fn ext_coordinates(&self, ext: &Field, t: &Element) -> Vec<Elem> {
        let mut out = Vec::with_capacity(2 * self.factors);
        for i in 0..self.factors {
            let d = self.p_inv.mul(ext, &t.0[i]).mul(ext, &self.p);
            assert!(d.is_diagonal(), "point is not in the torus");
            out.push(d.get(0, 0));
            out.push(d.get(1, 1));
        }
        out
    }

    /// Lattice coordinates `(χ_1(t), χ_2(t), …)` in `F_{q²}` of a rational point.
    pub fn coordinates(&self, spec: &GroupSpec, t: &Element) -> Vec<Elem> {
        self.ext_coordinates(spec.ext(), &self.embed_element(spec, t))
    }

    /// The eigenvalue `u` of the first factor.
    pub fn eigenvalue(&self, spec: &GroupSpec, t: &Element) -> Elem {
        self.coordinates(spec, t)[0]
    }

    /// `a(t)` for a character `a` given in lattice coordinates.
    pub fn eval_character(ext: &Field, a: &[i64], coords: &[Elem]) -> Elem {
        a.iter().zip(coords).fold(ext.one(), |acc, (&k, &c)| ext.mul(acc, ext.pow(c, k)))
    }

    /// `a(t)` at a rational point.
    pub fn root_value(&self, spec: &GroupSpec, a: &[i64], t: &Element) -> Elem {
        Self::eval_character(spec.ext(), a, &self.coordinates(spec, t))
    }

    pub(crate) fn embed_element(&self, spec: &GroupSpec, t: &Element) -> Element {
        let tower = spec.tower();
        Element(t.0.map(|m| m.embed(tower, 2).expect("level 2 exists")))
    }

    /// `P diag(x, y) P⁻¹` in each factor.
    fn ext_point(&self, ext: &Field, coords: &[Elem]) -> Element {
        let mut out = Element::IDENTITY;
        for i in 0..self.factors {
            let d = Mat2::diag(coords[2 * i], coords[2 * i + 1]);
            out.0[i] = self.p.mul(ext, &d).mul(ext, &self.p_inv);
        }
        out
    }

    /// `F_{q²}`-points of the torus: all of them when there are at most
    /// 10⁵, otherwise a generating set.
    pub fn ext_points(&self, spec: &GroupSpec) -> Vec<Element> {
        let ext = spec.ext();
        let rank = 2 * self.factors;
        let units: Vec<Elem> = ext.units().collect();
        let total = units.len().checked_pow(rank as u32).unwrap_or(usize::MAX);
        if total <= EXT_POINT_LIMIT {
            (0..total)
                .map(|mut code| {
                    let coords: Vec<Elem> = (0..rank)
                        .map(|_| {
                            let c = units[code % units.len()];
                            code /= units.len();
                            c
                        })
                        .collect();
                    self.ext_point(ext, &coords)
                })
                .collect()
        } else {
            (0..rank)
                .map(|k| {
                    let mut coords = vec![ext.one(); rank];
                    coords[k] = ext.generator();
                    self.ext_point(ext, &coords)
                })
                .collect()
        }
    }

    fn find_generators(&self, spec: &GroupSpec) -> Vec<Element> {
        let f = spec.field();
        let single: Vec<Mat2> = match self.kind {
            TorusKind::Split => vec![Mat2::diag(f.generator(), f.one()), Mat2::diag(f.one(), f.generator())],
            TorusKind::Elliptic => {
                let g = spec.ext().generator();
                let t = self
                    .elements
                    .iter()
                    .find(|t| t.0[1] == Mat2::IDENTITY && self.eigenvalue(spec, &Element::gl2(t.0[0])) == g)
                    .or_else(|| self.elements.iter().find(|t| self.eigenvalue(spec, t) == g))
                    .expect("the eigenvalue map is onto");
                vec![t.0[0]]
            }
        };
        match self.factors {
            1 => single.into_iter().map(Element::gl2).collect(),
            _ => single
                .iter()
                .map(|&m| Element([m, Mat2::IDENTITY]))
                .chain(single.iter().map(|&m| Element([Mat2::IDENTITY, m])))
                .collect(),
        }
    }

    /// `θ(T(F_q)) = T(F_q)`.
    pub fn is_stable(&self, spec: &GroupSpec, theta: &Involution) -> bool {
        let f = spec.field();
        self.elements.iter().all(|t| self.contains(spec, &theta.apply(f, t)))
    }

    /// The lattice involution `θ*` (`a ↦ a ∘ θ`) of a `T`-stable involution,
    /// read off from the monomial matrices `P⁻¹ A P` (inner) or
    /// `P⁻¹ A P^{-T}` (outer).
    pub fn theta_star(&self, spec: &GroupSpec, theta: &Involution) -> Result<InvolutionOnDatum> {
        let ext = spec.ext();
        let tower = spec.tower();
        let rank = 2 * self.factors;
        let mut perm = vec![0; rank];
        let mut signs = vec![1; rank];
        for (i, m) in theta.maps().iter().enumerate() {
            let s = m.source as usize;
            let a = m.witness.embed(tower, 2)?;
            let (right, sign) = match m.kind {
                MapKind::Inner => (self.p, 1),
                MapKind::Outer => (self.p_inv.transpose(), -1),
            };
            let mono = self.p_inv.mul(ext, &a).mul(ext, &right);
            let pi = mono.monomial_permutation().ok_or(GroupError::NotStable)?;
            for j in 0..2 {
                perm[2 * i + pi[j]] = 2 * s + j;
                signs[2 * i + pi[j]] = sign;
            }
        }
        let theta_star = InvolutionOnDatum::new(IntMatrix::signed_permutation(&perm, &signs));
        self.datum.validate_involution(&theta_star)?;
        Ok(theta_star)
    }
}

fn torus_name(kind: TorusKind, factors: usize) -> String {
    match factors {
        1 => format!("gl2_{kind}"),
        _ => format!("gl2xgl2_{kind}"),
    }
}

/// `τ` from the monomial matrix `P⁻¹ F(P)`.
fn build_datum(spec: &GroupSpec, p: &Mat2, p_inv: &Mat2, factors: usize, name: &str) -> Result<TwistedRootDatum> {
    let ext = spec.ext();
    let m = p_inv.mul(ext, &p.frobenius(ext, spec.field().degree()));
    let pi = m
        .monomial_permutation()
        .ok_or_else(|| GroupError::Inconsistent("P⁻¹F(P) is not monomial".into()))?;
    let rank = 2 * factors;
    let perm: Vec<usize> = (0..rank).map(|k| 2 * (k / 2) + pi[k % 2]).collect();
    let tau = IntMatrix::signed_permutation(&perm, &vec![1; rank]);
    let datum = match factors {
        1 => TwistedRootDatum::general_linear(2, tau, name)?,
        _ => {
            let gl2 = TwistedRootDatum::general_linear(2, IntMatrix::signed_permutation(&pi, &[1, 1]), "gl2")?;
            TwistedRootDatum::direct_sum(&gl2, &gl2, tau, name)?
        }
    };
    Ok(datum)
}

#[cfg(test)]
mod tests {
    use super::super::{Bounds, GroupKind, Seed};
    use super::*;
    use crate::rootdata::{library, Lattice};
    use crate::sign::Sign;

    fn spec(kind: GroupKind, q: u64) -> GroupSpec {
        GroupSpec::new(kind, q, &Bounds::default()).unwrap()
    }

    #[test]
    fn orders() {
        for q in [3, 5, 7, 9] {
            let g = spec(GroupKind::Gl2, q);
            assert_eq!(TorusEmbedding::elliptic(&g).unwrap().order() as u64, q * q - 1);
            assert_eq!(TorusEmbedding::split(&g).unwrap().order() as u64, (q - 1) * (q - 1));
        }
        let g = spec(GroupKind::Gl2XGl2, 3);
        assert_eq!(TorusEmbedding::elliptic(&g).unwrap().order(), 64);
    }

    #[test]
    fn eigenvalue_map_is_an_isomorphism() {
        for q in [3, 5, 9] {
            let g = spec(GroupKind::Gl2, q);
            let t = TorusEmbedding::elliptic(&g).unwrap();
            let ext = g.ext();
            let mut seen = std::collections::HashSet::new();
            for x in t.elements() {
                let u = t.eigenvalue(&g, x);
                let c = t.coordinates(&g, x);
                // second coordinate is the Frobenius conjugate
                assert_eq!(c[1], ext.frobenius(u, g.field().degree()));
                assert!(seen.insert(u));
                for y in t.elements().iter().step_by(3) {
                    let prod = g.mul(x, y);
                    assert_eq!(t.eigenvalue(&g, &prod), ext.mul(u, t.eigenvalue(&g, y)));
                }
            }
            assert_eq!(seen.len() as u64, q * q - 1);
        }
    }

    #[test]
    fn hook_examples() {
        let g = spec(GroupKind::Gl2, 3);
        let t = TorusEmbedding::elliptic(&g).unwrap();
        let f = g.field();
        let ext = g.ext();
        assert_eq!(t.nonsquare(), f.from_int(2));
        let x = Element::gl2(Mat2::new(f.zero(), t.nonsquare(), f.one(), f.zero()));
        assert!(t.contains(&g, &x));
        assert_eq!(t.eigenvalue(&g, &x), t.delta());
        let alpha = [1, -1];
        assert_eq!(t.root_value(&g, &alpha, &x), ext.pow(t.delta(), -2));
        assert_eq!(t.root_value(&g, &alpha, &Element::IDENTITY), ext.one());
    }

    #[test]
    fn data_match_library() {
        let g = spec(GroupKind::Gl2, 5);
        for (kind, name) in [(TorusKind::Split, "gl2_split"), (TorusKind::Elliptic, "gl2_elliptic")] {
            let t = TorusEmbedding::new(&g, kind).unwrap();
            assert_eq!(t.datum().tau(), library::load(name).unwrap().tau());
        }
        let g = spec(GroupKind::Gl2XGl2, 3);
        let t = TorusEmbedding::elliptic(&g).unwrap();
        assert_eq!(t.datum().tau(), library::load("gl2xgl2_elliptic").unwrap().tau());
        assert_eq!(t.datum().fq_rank_sigma(Lattice::Torus), (2, Sign::Plus));
    }

    #[test]
    fn theta_star_examples() {
        let g = spec(GroupKind::Gl2, 3);
        let ell = TorusEmbedding::elliptic(&g).unwrap();
        let diag = Involution::from_seed(&g, Seed::Diag).unwrap();
        assert!(ell.is_stable(&g, &diag));
        let ts = ell.theta_star(&g, &diag).unwrap();
        assert_eq!(ts.matrix, IntMatrix::signed_permutation(&[1, 0], &[1, 1]));
        assert_eq!(ell.datum().phi_theta(&ts).unwrap().len(), 2);

        let split = TorusEmbedding::split(&g).unwrap();
        let ti = Involution::from_seed(&g, Seed::TransposeInverse).unwrap();
        assert!(split.is_stable(&g, &ti));
        assert_eq!(split.theta_star(&g, &ti).unwrap().matrix, IntMatrix::identity(2).scale(-1));
        // ε = −1 at q = 3, so transpose-inverse preserves the elliptic torus there
        assert!(ell.is_stable(&g, &ti));
        let g = spec(GroupKind::Gl2, 5);
        let ell = TorusEmbedding::elliptic(&g).unwrap();
        let ti = Involution::from_seed(&g, Seed::TransposeInverse).unwrap();
        assert!(!ell.is_stable(&g, &ti));
        assert_eq!(ell.theta_star(&g, &ti).unwrap_err(), GroupError::NotStable);
    }

    #[test]
    fn generators_generate() {
        for kind in [GroupKind::Gl2, GroupKind::Gl2XGl2] {
            let g = spec(kind, 3);
            for tk in [TorusKind::Split, TorusKind::Elliptic] {
                let t = TorusEmbedding::new(&g, tk).unwrap();
                let mut seen = std::collections::HashSet::from([Element::IDENTITY]);
                let mut stack = vec![Element::IDENTITY];
                while let Some(x) = stack.pop() {
                    for s in t.generators() {
                        let y = g.mul(s, &x);
                        if seen.insert(y) {
                            stack.push(y);
                        }
                    }
                }
                assert_eq!(seen.len(), t.order());
            }
        }
    }
}
