//! Both sides of the multiplicity formula
//! `⟨Θ, λ⟩ = Σ_{ϑ ∼ λ} m_T(ϑ)` for cuspidal `π(λ)`.
//!
//! The left side averages `χ_π` over `G^θ` for a few sampled `θ ∈ Θ`; the
//! right side runs over the `T(F_q)`-orbits `ϑ ⊂ Θ` of involutions
//! stabilizing `T` and counts those on which `λ|T^θ = ε_{T,θ}`.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::dlchar::{self, ClassTable, DlError, ExternalProduct, FrobeniusPair};
use crate::gf::{GfError, TorusCharacter};
use crate::groups::{
    lie_fixed_det, Bounds, Element, Group, GroupError, GroupKind, GroupSpec, InvolutionCensus, Involution,
    LieFixedSpace, StabilizerData, TorusEmbedding, TorusKind, TorusOrbits,
};
use crate::par::Exec;
use crate::rootdata::RootDataError;
use crate::sign::Sign;

/// Tolerance for integrality of averaged multiplicities.
pub const INTEGRALITY_TOL: f64 = 1e-6;
/// Tolerance for comparing `λ(t)` with `ε(t) = ±1`.
pub const MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MultError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Character(#[from] DlError),
    #[error("the involution does not stabilize the torus")]
    NotStable,
    #[error("det Ad and the orbit product disagree for {theta} at {disagreements} of {domain} points")]
    MethodDisagreement { theta: String, disagreements: usize, domain: usize },
    #[error("average {value} is not a nonnegative integer")]
    NotIntegral { value: f64 },
    #[error("multiplicity depends on the chosen involution: {0:?}")]
    ThetaDependence(Vec<(usize, f64)>),
    #[error("the matching flag differs inside one torus orbit")]
    MatchingNotConstant,
    #[error("lhs {} differs from rhs {} for λ = {:?}", .0.lhs, .0.rhs, .0.lambda_exponents)]
    TheoremViolation(Box<TheoremRow>),
}

pub type Result<T> = std::result::Result<T, MultError>;

/// `ε_{T,θ}` on `T^θ(F_q)` computed two ways.
#[derive(Clone, Debug, Serialize)]
pub struct EpsilonCharacter {
    pub theta: Involution,
    #[serde(skip)]
    pub domain: Vec<Element>,
    /// `det(Ad(t) | Lie(G)^θ)`.
    pub det_ad: Vec<Sign>,
    /// `∏ a(t)` over one root per Galois orbit in `Φ_θ`.
    pub orbit_product: Vec<Sign>,
}

impl EpsilonCharacter {
    /// Computes both methods without insisting that they agree.
    pub fn compare(spec: &GroupSpec, torus: &TorusEmbedding, theta: &Involution) -> Result<Self> {
        if !torus.is_stable(spec, theta) {
            return Err(MultError::NotStable);
        }
        let domain: Vec<Element> = torus.elements().iter().copied().filter(|t| theta.is_fixed(spec, t)).collect();
        let space = LieFixedSpace::new(spec.field(), theta, spec.factors());
        let det_ad = domain
            .iter()
            .map(|t| lie_fixed_det(spec, theta, &space, t))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let theta_star = torus.theta_star(spec, theta)?;
        let ext = spec.ext();
        let orbit_product = domain
            .iter()
            .map(|t| {
                let coords = torus.coordinates(spec, t);
                torus
                    .datum()
                    .epsilon_product(&theta_star, ext, |a| TorusEmbedding::eval_character(ext, a, &coords))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(EpsilonCharacter { theta: theta.clone(), domain, det_ad, orbit_product })
    }

    pub fn disagreements(&self) -> usize {
        self.det_ad.iter().zip(&self.orbit_product).filter(|(a, b)| a != b).count()
    }

    pub fn agree(&self) -> bool {
        self.disagreements() == 0
    }

    /// The values of `ε`.
    pub fn values(&self) -> &[Sign] {
        &self.det_ad
    }
}

/// `ε_{T,θ}`, certified by agreement of both methods.
pub fn epsilon_character(spec: &GroupSpec, torus: &TorusEmbedding, theta: &Involution) -> Result<EpsilonCharacter> {
    let eps = EpsilonCharacter::compare(spec, torus, theta)?;
    if !eps.agree() {
        return Err(MultError::MethodDisagreement {
            theta: theta.to_string(),
            disagreements: eps.disagreements(),
            domain: eps.domain.len(),
        });
    }
    Ok(eps)
}

/// A character of `T(F_q)`: one character of `F_{q²}^×` per factor,
/// evaluated on the first eigenvalue coordinate of that factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusLambda {
    pub factors: Vec<TorusCharacter>,
}

impl TorusLambda {
    pub fn eval(&self, spec: &GroupSpec, torus: &TorusEmbedding, t: &Element) -> Complex64 {
        let ext = spec.ext();
        let coords = torus.coordinates(spec, t);
        self.factors.iter().enumerate().map(|(i, l)| l.eval_in(ext, coords[2 * i])).product()
    }

    pub fn exponents(&self) -> Vec<u64> {
        self.factors.iter().map(|l| l.exponent()).collect()
    }

    pub fn frobenius(&self) -> Self {
        TorusLambda { factors: self.factors.iter().map(|l| l.frobenius()).collect() }
    }

    pub fn matches(&self, spec: &GroupSpec, torus: &TorusEmbedding, eps: &EpsilonCharacter) -> bool {
        eps.domain
            .iter()
            .zip(eps.values())
            .all(|(t, s)| (self.eval(spec, torus, t) - s.to_f64()).norm() < MATCH_TOL)
    }
}

/// Per stable `T`-orbit data that does not depend on `λ`.
#[derive(Clone, Debug)]
struct StableOrbit {
    orbit: usize,
    epsilon: EpsilonCharacter,
    /// `ε` at another member of the orbit, to sample constancy.
    other: Option<EpsilonCharacter>,
    stabilizer: StabilizerData,
}

/// The census `Θ` together with its `T(F_q)`-orbits and the `λ`-independent
/// part of the right-hand side.
pub struct TheoremSetup {
    group: Group,
    census: InvolutionCensus,
    torus: TorusEmbedding,
    orbits: TorusOrbits,
    stable: Vec<StableOrbit>,
    table: Arc<ClassTable>,
}

impl std::fmt::Debug for TheoremSetup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TheoremSetup")
            .field("group", &self.group)
            .field("theta", &self.census.len())
            .field("torus_orbits", &self.orbits.orbits().len())
            .finish()
    }
}

impl TheoremSetup {
    pub fn new(group: Group, seed: Involution, bounds: &Bounds) -> Result<Self> {
        let table = Arc::new(ClassTable::new(group.tower().clone())?);
        Self::with_table(group, seed, bounds, table)
    }

    pub fn with_table(group: Group, seed: Involution, bounds: &Bounds, table: Arc<ClassTable>) -> Result<Self> {
        let census = InvolutionCensus::build(group.clone(), seed, bounds)?;
        let torus = TorusEmbedding::new(&group, TorusKind::Elliptic)?;
        let orbits = census.torus_orbits(&torus)?;
        let spec = &*group;
        let stable_ids: Vec<usize> =
            orbits.orbits().iter().enumerate().filter(|(_, o)| o.stable).map(|(k, _)| k).collect();
        let stable = spec
            .exec()
            .map(&stable_ids, |&k| -> Result<StableOrbit> {
                let o = &orbits.orbits()[k];
                let rep = o.representative();
                let epsilon = epsilon_character(spec, &torus, &census.members()[rep])?;
                let other = match o.members.last() {
                    Some(&j) if j != rep => Some(epsilon_character(spec, &torus, &census.members()[j])?),
                    _ => None,
                };
                let stabilizer = census.stabilizer_data(rep, &torus)?;
                Ok(StableOrbit { orbit: k, epsilon, other, stabilizer })
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(TheoremSetup { group, census, torus, orbits, stable, table })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn census(&self) -> &InvolutionCensus {
        &self.census
    }

    pub fn torus(&self) -> &TorusEmbedding {
        &self.torus
    }

    pub fn torus_orbits(&self) -> &TorusOrbits {
        &self.orbits
    }

    pub fn class_table(&self) -> &Arc<ClassTable> {
        &self.table
    }

    /// Indices into `Θ` at which the left side is sampled: `0, n/4, n/2, 3n/4`.
    pub fn sample_indices(&self) -> Vec<usize> {
        let n = self.census.len();
        let mut v: Vec<usize> = (0..4).map(|k| k * n / 4).collect();
        v.dedup();
        v
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LhsResult {
    pub value: u64,
    /// `(index in Θ, average of χ over G^θ)`.
    pub samples: Vec<(usize, f64)>,
}

/// `dim Hom_{G^θ}(π, 1) = (1/|G^θ|) Σ_{h ∈ G^θ} χ_π(h)`, checked to be the
/// same nonnegative integer for every sampled `θ`.
pub fn lhs_multiplicity(setup: &TheoremSetup, chi: &ExternalProduct) -> Result<LhsResult> {
    let mut samples = Vec::new();
    for i in setup.sample_indices() {
        let fixed = setup.census.fixed_points(i);
        let sum: Complex64 = fixed.iter().map(|h| chi.eval(h)).sum();
        let avg = sum / fixed.len() as f64;
        if avg.im.abs() >= INTEGRALITY_TOL {
            return Err(MultError::NotIntegral { value: avg.im });
        }
        samples.push((i, avg.re));
    }
    let first = samples[0].1;
    let value = first.round();
    if (first - value).abs() >= INTEGRALITY_TOL || value < 0.0 {
        return Err(MultError::NotIntegral { value: first });
    }
    if samples.iter().any(|(_, v)| (v - value).abs() >= INTEGRALITY_TOL) {
        return Err(MultError::ThetaDependence(samples));
    }
    Ok(LhsResult { value: value as u64, samples })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub representative: Involution,
    pub size: usize,
    pub stable: bool,
    pub matching: bool,
    /// `m_T(ϑ)`, for stable orbits.
    pub m: Option<u64>,
    pub power_of_two: Option<bool>,
    /// `m_T(ϑ)·⟨ϑ, λ⟩`, with `⟨ϑ, λ⟩ = 1` when matching and 0 otherwise.
    pub contribution: u64,
    /// `|T^θ(F_q)|`, for stable orbits.
    pub epsilon_domain: Option<usize>,
}

/// `Σ m_T(ϑ)` over the stable `T`-orbits on which `λ|T^θ = ε_{T,θ}`.
pub fn rhs_orbit_sum(setup: &TheoremSetup, lambda: &TorusLambda) -> Result<(u64, Vec<OrbitReport>)> {
    let spec = &*setup.group;
    let mut reports: Vec<OrbitReport> = setup
        .orbits
        .orbits()
        .iter()
        .map(|o| OrbitReport {
            representative: setup.census.members()[o.representative()].clone(),
            size: o.members.len(),
            stable: o.stable,
            matching: false,
            m: None,
            power_of_two: None,
            contribution: 0,
            epsilon_domain: None,
        })
        .collect();
    let mut total = 0;
    for s in &setup.stable {
        let matching = lambda.matches(spec, &setup.torus, &s.epsilon);
        if let Some(other) = &s.other {
            if lambda.matches(spec, &setup.torus, other) != matching {
                return Err(MultError::MatchingNotConstant);
            }
        }
        let r = &mut reports[s.orbit];
        r.matching = matching;
        r.m = Some(s.stabilizer.m);
        r.power_of_two = Some(s.stabilizer.power_of_two);
        r.epsilon_domain = Some(s.epsilon.domain.len());
        if matching {
            r.contribution = s.stabilizer.m;
            total += s.stabilizer.m;
        }
    }
    Ok((total, reports))
}

/// One cuspidal representation: `π(λ)` on `GL_2`, or
/// `π(λ₁) ⊗ π(λ₂)` on `GL_2 × GL_2`.
#[derive(Clone, Debug)]
pub struct Cuspidal {
    pub lambda: TorusLambda,
    /// The Frobenius pairs of the factors, for reporting.
    pub pairs: Vec<[u64; 2]>,
    pub character: ExternalProduct,
}

/// The grid of cuspidal representations in report order: the Frobenius
/// pairs for `GL_2`; for `GL_2 × GL_2` the pairs `(i, j)` realized as
/// `π(λ_i) ⊗ π(λ_j)^∨ = π(λ_i) ⊗ π(λ_j⁻¹)`.
pub fn cuspidal_grid(table: &Arc<ClassTable>, kind: GroupKind, exec: Exec) -> Result<Vec<Cuspidal>> {
    let pairs = dlchar::general_position_characters(table.tower())?;
    let one = |p: &FrobeniusPair, dual: bool| -> Result<(TorusCharacter, dlchar::ClassFunction, [u64; 2])> {
        let l = if dual { p.lambda.inverse() } else { p.lambda };
        let c = dlchar::cuspidal_character(table, &l, exec)?;
        Ok((l, c.character().clone(), [l.exponent(), l.frobenius().exponent()]))
    };
    let mut out = Vec::new();
    match kind {
        GroupKind::Gl2 => {
            for p in &pairs {
                let (l, c, pr) = one(p, false)?;
                out.push(Cuspidal {
                    lambda: TorusLambda { factors: vec![l] },
                    pairs: vec![pr],
                    character: ExternalProduct::new(vec![c]),
                });
            }
        }
        GroupKind::Gl2XGl2 => {
            let left = pairs.iter().map(|p| one(p, false)).collect::<Result<Vec<_>>>()?;
            let right = pairs.iter().map(|p| one(p, true)).collect::<Result<Vec<_>>>()?;
            for (l1, c1, p1) in &left {
                for (l2, c2, p2) in &right {
                    out.push(Cuspidal {
                        lambda: TorusLambda { factors: vec![*l1, *l2] },
                        pairs: vec![*p1, *p2],
                        character: ExternalProduct::new(vec![c1.clone(), c2.clone()]),
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremRow {
    pub lambda_exponents: Vec<u64>,
    pub pairs: Vec<[u64; 2]>,
    pub lhs: u64,
    pub rhs: u64,
    pub lhs_samples: Vec<(usize, f64)>,
    pub n_matching_orbits: usize,
    pub m_values: Vec<u64>,
    pub frobenius_rhs: u64,
    pub orbits: Vec<OrbitReport>,
    pub wall_ms: u64,
}

/// Verifies `lhs = rhs` for one representation; the right side is also
/// recomputed for `λ∘F`, which defines the same representation.
pub fn verify_one(setup: &TheoremSetup, rep: &Cuspidal) -> Result<TheoremRow> {
    let start = Instant::now();
    let lhs = lhs_multiplicity(setup, &rep.character)?;
    let (rhs, orbits) = rhs_orbit_sum(setup, &rep.lambda)?;
    let (frobenius_rhs, _) = rhs_orbit_sum(setup, &rep.lambda.frobenius())?;
    let matching: Vec<&OrbitReport> = orbits.iter().filter(|o| o.matching).collect();
    let row = TheoremRow {
        lambda_exponents: rep.lambda.exponents(),
        pairs: rep.pairs.clone(),
        lhs: lhs.value,
        rhs,
        lhs_samples: lhs.samples,
        n_matching_orbits: matching.len(),
        m_values: matching.iter().filter_map(|o| o.m).collect(),
        frobenius_rhs,
        orbits,
        wall_ms: start.elapsed().as_millis() as u64,
    };
    if row.lhs != row.rhs || row.rhs != row.frobenius_rhs {
        return Err(MultError::TheoremViolation(Box::new(row)));
    }
    Ok(row)
}

/// Runs the whole grid; rows come back in grid order.
pub fn verify_theorem(setup: &TheoremSetup, reps: &[Cuspidal], exec: Exec) -> Vec<Result<TheoremRow>> {
    exec.map(reps, |rep| verify_one(setup, rep))
}

/// Convenience entry point: group, seed, all cuspidal representations.
pub fn run(kind: GroupKind, q: u64, seed: crate::groups::Seed, bounds: &Bounds, exec: Exec) -> Result<(TheoremSetup, Vec<Result<TheoremRow>>)> {
    let group = Arc::new(GroupSpec::new(kind, q, bounds)?.with_exec(exec));
    let theta = Involution::from_seed(&group, seed)?;
    let setup = TheoremSetup::new(group, theta, bounds)?;
    let reps = cuspidal_grid(setup.class_table(), kind, exec)?;
    let rows = verify_theorem(&setup, &reps, exec);
    Ok((setup, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Seed;

    fn setup(kind: GroupKind, q: u64, seed: Seed) -> TheoremSetup {
        let group = Arc::new(GroupSpec::new(kind, q, &Bounds::default()).unwrap());
        let theta = Involution::from_seed(&group, seed).unwrap();
        TheoremSetup::new(group, theta, &Bounds::default()).unwrap()
    }

    #[test]
    fn diag_at_three() {
        let s = setup(GroupKind::Gl2, 3, Seed::Diag);
        let reps = cuspidal_grid(s.class_table(), GroupKind::Gl2, Exec::Sequential).unwrap();
        let rows: Vec<TheoremRow> = verify_theorem(&s, &reps, Exec::Sequential).into_iter().map(|r| r.unwrap()).collect();
        let lhs: Vec<u64> = rows.iter().map(|r| r.lhs).collect();
        assert_eq!(lhs, vec![1, 0, 0]);
        assert_eq!(rows[0].pairs, vec![[2, 6]]);
    }

    #[test]
    fn k_one_vanishes() {
        let s = setup(GroupKind::Gl2, 3, Seed::Diag);
        let lam = TorusCharacter::new(s.group().tower(), 2, 1).unwrap();
        let c = dlchar::cuspidal_character(s.class_table(), &lam, Exec::Sequential).unwrap();
        let lhs = lhs_multiplicity(&s, &ExternalProduct::new(vec![c.character().clone()])).unwrap();
        assert_eq!(lhs.value, 0);
        assert!(lhs.samples.len() >= 4);
    }

    #[test]
    fn epsilon_on_elliptic_diag() {
        let g = GroupSpec::new(GroupKind::Gl2, 5, &Bounds::default()).unwrap();
        let t = TorusEmbedding::elliptic(&g).unwrap();
        let th = Involution::from_seed(&g, Seed::Diag).unwrap();
        let eps = epsilon_character(&g, &t, &th).unwrap();
        assert_eq!(eps.domain.len(), 4);
        assert!(eps.domain.iter().all(|x| x.0[0].is_scalar()));
        assert!(eps.values().iter().all(|&s| s == Sign::Plus));
    }

    #[test]
    fn epsilon_is_a_quadratic_character() {
        for q in [3, 5, 7] {
            let s = setup(GroupKind::Gl2, q, Seed::TransposeInverse);
            for o in s.torus_orbits().stable() {
                let th = &s.census().members()[o.representative()];
                let eps = epsilon_character(s.group(), s.torus(), th).unwrap();
                let g = s.group();
                for (i, a) in eps.domain.iter().enumerate() {
                    let sq = g.mul(a, a);
                    let k = eps.domain.iter().position(|x| *x == sq).unwrap();
                    assert_eq!(eps.values()[k], Sign::Plus);
                    for (j, b) in eps.domain.iter().enumerate() {
                        let k = eps.domain.iter().position(|x| *x == g.mul(a, b)).unwrap();
                        assert_eq!(eps.values()[k], eps.values()[i] * eps.values()[j]);
                    }
                }
            }
        }
    }

    #[test]
    fn empty_rhs_without_stable_orbits() {
        // transpose-inverse at q = 5 does not stabilize the standard elliptic
        // torus; whatever the census finds, the sum only runs over stable orbits
        let s = setup(GroupKind::Gl2, 5, Seed::TransposeInverse);
        let lam = TorusLambda { factors: vec![TorusCharacter::new(s.group().tower(), 2, 1).unwrap()] };
        let (v, reports) = rhs_orbit_sum(&s, &lam).unwrap();
        let expected: u64 = reports.iter().filter(|r| r.stable && r.matching).map(|r| r.m.unwrap()).sum();
        assert_eq!(v, expected);
        assert!(reports.iter().filter(|r| !r.stable).all(|r| r.contribution == 0));
    }
}
