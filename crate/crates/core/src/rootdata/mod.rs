//! Based root data with a Frobenius twist.
//!
//! The Frobenius of a group over `F_q` acts on the character lattice of a
//! rational maximal torus as `q·τ` for a finite-order lattice automorphism
//! `τ`; everything here only needs `τ`. Galois orbits of roots are the
//! `τ`-orbits, and the σ-signs are parities of ranks of `τ`-fixed spaces.

mod lattice;
pub mod library;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Elem, Field};
use crate::sign::Sign;

pub use lattice::{dot, negate, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDataError {
    #[error("vector {0:?} does not have the lattice rank")]
    Dimension(Vec<i64>),
    #[error("{roots} roots but {coroots} coroots")]
    CorootCount { roots: usize, coroots: usize },
    #[error("root {0:?} pairs with its coroot to something other than 2")]
    Pairing(Vec<i64>),
    #[error("root {0:?} is listed twice")]
    DuplicateRoot(Vec<i64>),
    #[error("the root set is not closed under negation at {0:?}")]
    NotSymmetric(Vec<i64>),
    #[error("positive index {0} is out of range")]
    PositiveIndex(usize),
    #[error("the positive roots do not split the roots as P ⊔ −P")]
    PositiveSystem,
    #[error("tau is not unimodular")]
    NotUnimodular,
    #[error("tau sends the root {0:?} outside the root set")]
    TauNotPermuting(Vec<i64>),
    #[error("tau does not preserve the root/coroot pairing")]
    TauBreaksPairing,
    #[error("tau does not have order dividing the declared order {0}")]
    TauOrder(u32),
    #[error("invalid involution on the lattice: {0}")]
    InvalidInvolution(String),
    #[error("root subset is not closed under negation and tau")]
    NotStable,
    #[error("sign computations disagree: {0:?}")]
    Inconsistent(SigmaMethods),
    #[error("root product evaluates outside {{±1}}; the torus point is not a rational θ-fixed point")]
    NotASign,
    #[error("unknown datum `{0}`")]
    UnknownDatum(String),
    #[error("could not read datum: {0}")]
    Load(String),
}

pub type Result<T> = std::result::Result<T, RootDataError>;

/// Serialized form of a datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rank: usize,
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
    pub positive: Vec<usize>,
    pub tau: IntMatrix,
    pub order: u32,
}

/// Which twist to take the `F_q`-rank of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lattice {
    /// `τ` itself: the rank of the torus.
    Torus,
    /// The twist normalized to preserve the positive system: the rank of a
    /// maximally split torus, i.e. of the group.
    Group,
}

/// A `τ`-orbit of roots in cyclic order `a, τa, τ²a, …`, starting at the
/// lexicographically smallest root of the orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaloisOrbit {
    pub roots: Vec<usize>,
    pub symmetric: bool,
}

impl GaloisOrbit {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn representative(&self) -> usize {
        self.roots[0]
    }
}

/// The four parities that all compute `σ(G)σ(T)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaMethods {
    /// `#{a ∈ Φ⁺ : τa ∈ −Φ⁺}`, the dimension of `U/(U ∩ FU)`.
    pub unipotent: Sign,
    /// Sum of sign changes over all orbits.
    pub sign_changes: Sign,
    /// Number of orbits.
    pub orbit_count: Sign,
    /// Number of symmetric orbits.
    pub symmetric_count: Sign,
}

impl SigmaMethods {
    pub fn agree(&self) -> bool {
        self.unipotent == self.sign_changes
            && self.sign_changes == self.orbit_count
            && self.orbit_count == self.symmetric_count
    }
}

/// Lattice automorphism induced by an involution of the group that
/// preserves the torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvolutionOnDatum {
    pub matrix: IntMatrix,
}

impl InvolutionOnDatum {
    pub fn new(matrix: IntMatrix) -> Self {
        InvolutionOnDatum { matrix }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.matrix.apply(v)
    }
}

#[derive(Clone, Debug)]
pub struct TwistedRootDatum {
    name: String,
    rank: usize,
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    positive: Vec<bool>,
    tau: IntMatrix,
    order: u32,
    index: HashMap<Vec<i64>, usize>,
    tau_perm: Vec<usize>,
    neg: Vec<usize>,
}

impl TwistedRootDatum {
    pub fn from_document(doc: DatumDocument) -> Result<Self> {
        let DatumDocument { name, rank, roots, coroots, positive, tau, order } = doc;
        if tau.dim() != rank {
            return Err(RootDataError::Dimension(vec![tau.dim() as i64]));
        }
        if roots.len() != coroots.len() {
            return Err(RootDataError::CorootCount { roots: roots.len(), coroots: coroots.len() });
        }
        let mut index = HashMap::new();
        for (i, (a, c)) in roots.iter().zip(&coroots).enumerate() {
            if a.len() != rank {
                return Err(RootDataError::Dimension(a.clone()));
            }
            if c.len() != rank {
                return Err(RootDataError::Dimension(c.clone()));
            }
            if dot(a, c) != 2 {
                return Err(RootDataError::Pairing(a.clone()));
            }
            if index.insert(a.clone(), i).is_some() {
                return Err(RootDataError::DuplicateRoot(a.clone()));
            }
        }
        let neg = roots
            .iter()
            .map(|a| index.get(&negate(a)).copied().ok_or_else(|| RootDataError::NotSymmetric(a.clone())))
            .collect::<Result<Vec<_>>>()?;
        for (i, j) in neg.iter().enumerate() {
            if coroots[*j] != negate(&coroots[i]) {
                return Err(RootDataError::NotSymmetric(roots[i].clone()));
            }
        }
        let mut is_pos = vec![false; roots.len()];
        for &i in &positive {
            if i >= roots.len() {
                return Err(RootDataError::PositiveIndex(i));
            }
            if is_pos[i] {
                return Err(RootDataError::PositiveSystem);
            }
            is_pos[i] = true;
        }
        if (0..roots.len()).any(|i| is_pos[i] == is_pos[neg[i]]) {
            return Err(RootDataError::PositiveSystem);
        }
        if tau.det().abs() != 1 {
            return Err(RootDataError::NotUnimodular);
        }
        let tau_perm = roots
            .iter()
            .map(|a| {
                index
                    .get(&tau.apply(a))
                    .copied()
                    .ok_or_else(|| RootDataError::TauNotPermuting(a.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        // τ(a) = b must carry a^∨ to b^∨ under the dual action, i.e. τᵀ b^∨ = a^∨.
        let tau_t = tau.transpose();
        for (i, &j) in tau_perm.iter().enumerate() {
            if tau_t.apply(&coroots[j]) != coroots[i] {
                return Err(RootDataError::TauBreaksPairing);
            }
        }
        match tau.order(order.max(1)) {
            Some(m) if order % m == 0 => {}
            _ => return Err(RootDataError::TauOrder(order)),
        }
        Ok(TwistedRootDatum {
            name: name.unwrap_or_else(|| "unnamed".to_string()),
            rank,
            roots,
            coroots,
            positive: is_pos,
            tau,
            order,
            index,
            tau_perm,
            neg,
        })
    }

    pub fn to_document(&self) -> DatumDocument {
        DatumDocument {
            name: Some(self.name.clone()),
            rank: self.rank,
            roots: self.roots.clone(),
            coroots: self.coroots.clone(),
            positive: self.positive_indices(),
            tau: self.tau.clone(),
            order: self.order,
        }
    }

    /// `GL_n` with roots `e_i − e_j`, positive for `i < j`, and the given twist.
    pub fn general_linear(n: usize, tau: IntMatrix, name: &str) -> Result<Self> {
        let mut roots = Vec::new();
        let mut positive = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut a = vec![0; n];
                a[i] = 1;
                a[j] = -1;
                if i < j {
                    positive.push(roots.len());
                }
                roots.push(a);
            }
        }
        let order = tau.order(10_000).ok_or(RootDataError::TauOrder(10_000))?;
        Self::from_document(DatumDocument {
            name: Some(name.to_string()),
            rank: n,
            coroots: roots.clone(),
            roots,
            positive,
            tau,
            order,
        })
    }

    /// Direct sum of two data, with `τ` replaced by `tau` on the sum.
    pub fn direct_sum(a: &Self, b: &Self, tau: IntMatrix, name: &str) -> Result<Self> {
        let n = a.rank + b.rank;
        let pad = |v: &Vec<i64>, left: bool| {
            let mut out = vec![0; n];
            let off = if left { 0 } else { a.rank };
            out[off..off + v.len()].copy_from_slice(v);
            out
        };
        let mut roots: Vec<Vec<i64>> = a.roots.iter().map(|r| pad(r, true)).collect();
        roots.extend(b.roots.iter().map(|r| pad(r, false)));
        let mut coroots: Vec<Vec<i64>> = a.coroots.iter().map(|r| pad(r, true)).collect();
        coroots.extend(b.coroots.iter().map(|r| pad(r, false)));
        let mut positive = a.positive_indices();
        positive.extend(b.positive_indices().into_iter().map(|i| i + a.roots.len()));
        let order = tau.order(10_000).ok_or(RootDataError::TauOrder(10_000))?;
        Self::from_document(DatumDocument {
            name: Some(name.to_string()),
            rank: n,
            roots,
            coroots,
            positive,
            tau,
            order,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    pub fn root(&self, i: usize) -> &[i64] {
        &self.roots[i]
    }

    pub fn tau(&self) -> &IntMatrix {
        &self.tau
    }

    pub fn is_positive(&self, i: usize) -> bool {
        self.positive[i]
    }

    pub fn positive_indices(&self) -> Vec<usize> {
        (0..self.roots.len()).filter(|&i| self.positive[i]).collect()
    }

    pub fn index_of(&self, root: &[i64]) -> Option<usize> {
        self.index.get(root).copied()
    }

    /// Index of `−a`.
    pub fn negative_of(&self, i: usize) -> usize {
        self.neg[i]
    }

    /// Index of `τa`.
    pub fn tau_of(&self, i: usize) -> usize {
        self.tau_perm[i]
    }

    /// `F_q`-rank and `σ = (−1)^rank` for the torus twist or the group.
    pub fn fq_rank_sigma(&self, lattice: Lattice) -> (usize, Sign) {
        let twist = match lattice {
            Lattice::Torus => self.tau.clone(),
            Lattice::Group => self.quasi_split_twist(),
        };
        let rank = twist.fixed_space_dim();
        (rank, Sign::from_parity(rank))
    }

    /// Simple roots of the positive system: positive roots that are not a
    /// sum of two positive roots.
    pub fn simple_roots(&self) -> Vec<usize> {
        let pos = self.positive_indices();
        pos.iter()
            .copied()
            .filter(|&i| {
                !pos.iter().any(|&j| {
                    let diff: Vec<i64> =
                        self.roots[i].iter().zip(&self.roots[j]).map(|(x, y)| x - y).collect();
                    self.index_of(&diff).is_some_and(|k| self.positive[k])
                })
            })
            .collect()
    }

    /// Reflection `x ↦ x − ⟨x, a^∨⟩ a`.
    pub fn reflection(&self, i: usize) -> IntMatrix {
        let n = self.rank;
        let a = &self.roots[i];
        let c = &self.coroots[i];
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|r| (0..n).map(|s| i64::from(r == s) - a[r] * c[s]).collect())
            .collect();
        IntMatrix::from_rows(&rows).expect("square")
    }

    /// `wτ` for the Weyl element `w` with `wτ(Φ⁺) = Φ⁺`.
    ///
    /// Built by repeatedly reflecting in a simple root that the current
    /// twist sends negative; each step lowers the number of such roots.
    pub fn quasi_split_twist(&self) -> IntMatrix {
        let simple = self.simple_roots();
        let mut twist = self.tau.clone();
        loop {
            let image_negative = |m: &IntMatrix, i: usize| {
                let img = m.apply(&self.roots[i]);
                !self.positive[self.index[&img]]
            };
            // A simple root α with −α in the image positive system.
            let Some(&alpha) = simple.iter().find(|&&s| {
                let neg = self.neg[s];
                let pre = (0..self.roots.len())
                    .find(|&i| self.positive[i] && twist.apply(&self.roots[i]) == self.roots[neg]);
                pre.is_some()
            }) else {
                debug_assert!(!(0..self.roots.len()).any(|i| self.positive[i] && image_negative(&twist, i)));
                return twist;
            };
            twist = self.reflection(alpha).mul(&twist);
        }
    }

    /// The `τ`-orbits of roots, sorted by representative.
    pub fn galois_orbits(&self) -> Vec<GaloisOrbit> {
        self.orbits_within(&(0..self.roots.len()).collect::<Vec<_>>())
    }

    fn orbits_within(&self, subset: &[usize]) -> Vec<GaloisOrbit> {
        let mut seen = vec![false; self.roots.len()];
        let mut sorted = subset.to_vec();
        sorted.sort_by(|&a, &b| self.roots[a].cmp(&self.roots[b]));
        let mut orbits = Vec::new();
        for &start in &sorted {
            if seen[start] {
                continue;
            }
            let mut roots = vec![start];
            seen[start] = true;
            let mut cur = self.tau_perm[start];
            while cur != start {
                seen[cur] = true;
                roots.push(cur);
                cur = self.tau_perm[cur];
            }
            let symmetric = roots.contains(&self.neg[start]);
            orbits.push(GaloisOrbit { roots, symmetric });
        }
        orbits
    }

    /// Number of `− → +` transitions going once around the orbit.
    pub fn sign_changes(&self, orbit: &GaloisOrbit) -> usize {
        let d = orbit.roots.len();
        (0..d)
            .filter(|&i| {
                !self.positive[orbit.roots[i]] && self.positive[orbit.roots[(i + 1) % d]]
            })
            .count()
    }

    pub fn sigma_methods(&self) -> SigmaMethods {
        let flips = (0..self.roots.len())
            .filter(|&i| self.positive[i] && !self.positive[self.tau_perm[i]])
            .count();
        let orbits = self.galois_orbits();
        let changes: usize = orbits.iter().map(|o| self.sign_changes(o)).sum();
        let symmetric = orbits.iter().filter(|o| o.symmetric).count();
        SigmaMethods {
            unipotent: Sign::from_parity(flips),
            sign_changes: Sign::from_parity(changes),
            orbit_count: Sign::from_parity(orbits.len()),
            symmetric_count: Sign::from_parity(symmetric),
        }
    }

    /// `σ(G)σ(T)`, certified by four independent parities.
    pub fn sigma_product(&self) -> Result<Sign> {
        let m = self.sigma_methods();
        if m.agree() {
            Ok(m.unipotent)
        } else {
            Err(RootDataError::Inconsistent(m))
        }
    }

    /// Checks that `θ*` is an order ≤ 2 automorphism permuting the roots
    /// and commuting with `τ` (rationality).
    pub fn validate_involution(&self, theta: &InvolutionOnDatum) -> Result<()> {
        let m = &theta.matrix;
        if m.dim() != self.rank {
            return Err(RootDataError::InvalidInvolution("wrong dimension".into()));
        }
        if !m.mul(m).is_identity() {
            return Err(RootDataError::InvalidInvolution("θ*² ≠ 1".into()));
        }
        for a in &self.roots {
            if self.index_of(&m.apply(a)).is_none() {
                return Err(RootDataError::InvalidInvolution(format!(
                    "θ* sends {a:?} outside the roots"
                )));
            }
        }
        if m.mul(&self.tau) != self.tau.mul(m) {
            return Err(RootDataError::InvalidInvolution("θ* does not commute with τ".into()));
        }
        Ok(())
    }

    /// `Φ_θ = {a : θ*a = −a}`.
    pub fn phi_theta(&self, theta: &InvolutionOnDatum) -> Result<Vec<usize>> {
        self.validate_involution(theta)?;
        Ok((0..self.roots.len())
            .filter(|&i| theta.apply(&self.roots[i]) == self.roots[self.neg[i]])
            .collect())
    }

    /// Roots with `θ*a = a`.
    pub fn theta_fixed_roots(&self, theta: &InvolutionOnDatum) -> Result<Vec<usize>> {
        self.validate_involution(theta)?;
        Ok((0..self.roots.len())
            .filter(|&i| theta.apply(&self.roots[i]) == self.roots[i])
            .collect())
    }

    /// `∏ a(t)` over one representative per Galois orbit in `Φ_θ`.
    ///
    /// `eval` returns `a(t)` in `field` for a root `a` given in lattice
    /// coordinates.
    pub fn epsilon_product<F>(&self, theta: &InvolutionOnDatum, field: &Field, eval: F) -> Result<Sign>
    where
        F: Fn(&[i64]) -> Elem,
    {
        let phi = self.phi_theta(theta)?;
        let mut acc = field.one();
        for orbit in self.orbits_within(&phi) {
            acc = field.mul(acc, eval(&self.roots[orbit.representative()]));
        }
        if acc == field.one() {
            Ok(Sign::Plus)
        } else if acc == field.minus_one() {
            Ok(Sign::Minus)
        } else {
            Err(RootDataError::NotASign)
        }
    }

    /// Galois orbits contained in `Φ_θ`.
    pub fn phi_theta_orbits(&self, theta: &InvolutionOnDatum) -> Result<Vec<GaloisOrbit>> {
        Ok(self.orbits_within(&self.phi_theta(theta)?))
    }

    /// The sub-datum on a `τ`- and sign-stable set of roots, keeping the
    /// lattice and `τ`.
    pub fn restrict(&self, subset: &[usize], name: &str) -> Result<Self> {
        let mut keep = vec![false; self.roots.len()];
        for &i in subset {
            keep[i] = true;
        }
        if subset.iter().any(|&i| !keep[self.neg[i]] || !keep[self.tau_perm[i]]) {
            return Err(RootDataError::NotStable);
        }
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let positive = sorted
            .iter()
            .enumerate()
            .filter(|(_, &i)| self.positive[i])
            .map(|(k, _)| k)
            .collect();
        Self::from_document(DatumDocument {
            name: Some(name.to_string()),
            rank: self.rank,
            roots: sorted.iter().map(|&i| self.roots[i].clone()).collect(),
            coroots: sorted.iter().map(|&i| self.coroots[i].clone()).collect(),
            positive,
            tau: self.tau.clone(),
            order: self.order,
        })
    }

    /// Root datum of the centralizer of `(T^θ)°`: the roots `Φ_θ`.
    pub fn theta_centralizer(&self, theta: &InvolutionOnDatum) -> Result<Self> {
        let phi = self.phi_theta(theta)?;
        self.restrict(&phi, &format!("{}/centralizer", self.name))
    }

    /// For each root outside `Φ_θ`, the number of distinct Galois orbits met
    /// by `{a, −a, θa, −θa}`.
    pub fn four_root_orbit_counts(&self, theta: &InvolutionOnDatum) -> Result<Vec<(usize, usize)>> {
        let phi = self.phi_theta(theta)?;
        let mut orbit_of = vec![usize::MAX; self.roots.len()];
        for (k, o) in self.galois_orbits().iter().enumerate() {
            for &i in &o.roots {
                orbit_of[i] = k;
            }
        }
        Ok((0..self.roots.len())
            .filter(|i| !phi.contains(i))
            .map(|i| {
                let t = self.index[&theta.apply(&self.roots[i])];
                let mut ids = vec![orbit_of[i], orbit_of[self.neg[i]], orbit_of[t], orbit_of[self.neg[t]]];
                ids.sort_unstable();
                ids.dedup();
                (i, ids.len())
            })
            .collect())
    }

    /// All signed-permutation lattice involutions that are valid for this
    /// datum (permute the roots, commute with `τ`).
    pub fn signed_permutation_involutions(&self) -> Vec<InvolutionOnDatum> {
        let n = self.rank;
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut |p| {
            // involutive permutations only
            if (0..n).any(|i| p[p[i]] != i) {
                return;
            }
            for mask in 0..(1u32 << n) {
                let signs: Vec<i64> = (0..n).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }).collect();
                if (0..n).any(|j| signs[j] * signs[p[j]] != 1) {
                    continue;
                }
                let theta = InvolutionOnDatum::new(IntMatrix::signed_permutation(p, &signs));
                if self.validate_involution(&theta).is_ok() {
                    out.push(theta);
                }
            }
        });
        out.sort_by(|a, b| a.matrix.cmp(&b.matrix));
        out
    }
}

fn permutations(p: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap2() -> IntMatrix {
        IntMatrix::signed_permutation(&[1, 0], &[1, 1])
    }

    fn gl2(tau: IntMatrix) -> TwistedRootDatum {
        TwistedRootDatum::general_linear(2, tau, "gl2").unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(gl2(IntMatrix::identity(2)).fq_rank_sigma(Lattice::Torus), (2, Sign::Plus));
        assert_eq!(gl2(swap2()).fq_rank_sigma(Lattice::Torus), (1, Sign::Minus));
        let sl2_elliptic = TwistedRootDatum::from_document(DatumDocument {
            name: None,
            rank: 1,
            roots: vec![vec![2], vec![-2]],
            coroots: vec![vec![1], vec![-1]],
            positive: vec![0],
            tau: IntMatrix::identity(1).scale(-1),
            order: 2,
        })
        .unwrap();
        assert_eq!(sl2_elliptic.fq_rank_sigma(Lattice::Torus), (0, Sign::Plus));
        assert_eq!(sl2_elliptic.fq_rank_sigma(Lattice::Group), (1, Sign::Minus));
        // The group rank does not depend on which torus the datum is based at.
        assert_eq!(gl2(swap2()).fq_rank_sigma(Lattice::Group), (2, Sign::Plus));
    }

    #[test]
    fn orbit_examples() {
        let elliptic = gl2(swap2());
        let orbits = elliptic.galois_orbits();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].len(), 2);
        assert!(orbits[0].symmetric);
        // representative is the smallest vector, (-1, 1)
        assert_eq!(elliptic.root(orbits[0].representative()), &[-1, 1]);
        assert_eq!(elliptic.sign_changes(&orbits[0]), 1);

        let split = gl2(IntMatrix::identity(2));
        let orbits = split.galois_orbits();
        assert_eq!(orbits.len(), 2);
        assert!(orbits.iter().all(|o| !o.symmetric && o.len() == 1));
        assert!(orbits.iter().all(|o| split.sign_changes(o) == 0));
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(gl2(swap2()).sigma_product().unwrap(), Sign::Minus);
        assert_eq!(gl2(IntMatrix::identity(2)).sigma_product().unwrap(), Sign::Plus);
    }

    #[test]
    fn validation_errors() {
        let base = gl2(IntMatrix::identity(2)).to_document();
        let mut bad = base.clone();
        bad.coroots[0] = vec![2, -2];
        assert_eq!(TwistedRootDatum::from_document(bad).unwrap_err(), RootDataError::Pairing(vec![1, -1]));
        let mut bad = base.clone();
        bad.positive = vec![0, 1];
        assert_eq!(TwistedRootDatum::from_document(bad).unwrap_err(), RootDataError::PositiveSystem);
        let mut bad = base.clone();
        bad.tau = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(matches!(
            TwistedRootDatum::from_document(bad).unwrap_err(),
            RootDataError::TauNotPermuting(_)
        ));
        let mut bad = base;
        bad.tau = swap2();
        bad.order = 3;
        assert_eq!(TwistedRootDatum::from_document(bad).unwrap_err(), RootDataError::TauOrder(3));
    }

    #[test]
    fn phi_theta_examples() {
        let d = gl2(swap2());
        let id = InvolutionOnDatum::new(IntMatrix::identity(2));
        assert!(d.phi_theta(&id).unwrap().is_empty());
        let minus = InvolutionOnDatum::new(IntMatrix::identity(2).scale(-1));
        assert_eq!(d.phi_theta(&minus).unwrap().len(), 2);
        // Int(diag(1,-1)) acts on the elliptic torus as Frobenius: θ* = swap.
        let frob = InvolutionOnDatum::new(swap2());
        assert_eq!(d.phi_theta(&frob).unwrap().len(), 2);
        let bad = InvolutionOnDatum::new(IntMatrix::from_rows(&[vec![1, 1], vec![0, -1]]).unwrap());
        assert!(matches!(d.phi_theta(&bad), Err(RootDataError::InvalidInvolution(_))));
    }

    #[test]
    fn epsilon_product_trivial_cases() {
        let tower = crate::gf::FieldTower::build(3, &[2]).unwrap();
        let f = tower.level(2).unwrap();
        let d = gl2(swap2());
        let id = InvolutionOnDatum::new(IntMatrix::identity(2));
        // empty product
        assert_eq!(d.epsilon_product(&id, f, |_| Elem(7)).unwrap(), Sign::Plus);
        let frob = InvolutionOnDatum::new(swap2());
        assert_eq!(d.epsilon_product(&frob, f, |_| f.one()).unwrap(), Sign::Plus);
        assert_eq!(d.epsilon_product(&frob, f, |_| f.minus_one()).unwrap(), Sign::Minus);
        assert_eq!(
            d.epsilon_product(&frob, f, |_| f.generator()).unwrap_err(),
            RootDataError::NotASign
        );
    }

    #[test]
    fn quasi_split_twist_preserves_positive_system() {
        let cyc = IntMatrix::signed_permutation(&[1, 2, 3, 0], &[1, 1, 1, 1]);
        let d = TwistedRootDatum::general_linear(4, cyc, "gl4").unwrap();
        let tw = d.quasi_split_twist();
        for i in d.positive_indices() {
            let img = d.index_of(&tw.apply(d.root(i))).unwrap();
            assert!(d.is_positive(img));
        }
        assert_eq!(d.fq_rank_sigma(Lattice::Group), (4, Sign::Plus));
        assert_eq!(d.fq_rank_sigma(Lattice::Torus), (1, Sign::Minus));
    }

    #[test]
    fn unitary_group_rank() {
        // U_3: τ = −w0, the F_q-rank is 1 (plus nothing from the center, whose τ is −1).
        let w0 = IntMatrix::signed_permutation(&[2, 1, 0], &[-1, -1, -1]);
        let d = TwistedRootDatum::general_linear(3, w0, "u3").unwrap();
        assert_eq!(d.fq_rank_sigma(Lattice::Group), (1, Sign::Minus));
    }

    #[test]
    fn centralizer_subdatum() {
        let d = gl2(swap2());
        let minus = InvolutionOnDatum::new(IntMatrix::identity(2).scale(-1));
        let z = d.theta_centralizer(&minus).unwrap();
        assert_eq!(z.roots().len(), 2);
        let id = InvolutionOnDatum::new(IntMatrix::identity(2));
        let z = d.theta_centralizer(&id).unwrap();
        assert!(z.roots().is_empty());
        assert_eq!(z.fq_rank_sigma(Lattice::Group), (1, Sign::Minus));
    }

    #[test]
    fn signed_permutation_involutions_of_gl2() {
        let d = gl2(swap2());
        let all = d.signed_permutation_involutions();
        // ±1 and ±swap commute with swap; mixed-sign diagonals do not permute roots.
        assert_eq!(all.len(), 4);
    }
}
