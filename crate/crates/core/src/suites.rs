//! Verification suites shared by the command line and the acceptance tests.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::groups::{
    lemma_check, Bounds, GroupKind, GroupSpec, InvolutionCensus, Involution, Mat2, Seed, TorusEmbedding, TorusKind,
};
use crate::multiplicity::{EpsilonCharacter, MultError};
use crate::par::Exec;
use crate::rootdata::{IntMatrix, InvolutionOnDatum, Lattice, RootDataError, SigmaMethods, TwistedRootDatum};
use crate::sign::Sign;

#[derive(Clone, Debug, Serialize)]
pub struct SigmaReport {
    pub datum: String,
    pub rank: usize,
    pub roots: usize,
    pub methods: SigmaMethods,
    pub agree: bool,
}

impl SigmaReport {
    pub fn new(d: &TwistedRootDatum) -> Self {
        let methods = d.sigma_methods();
        SigmaReport { datum: d.name().to_string(), rank: d.rank(), roots: d.roots().len(), agree: methods.agree(), methods }
    }
}

pub fn sigma_suite(data: &[TwistedRootDatum], exec: Exec) -> Vec<SigmaReport> {
    exec.map(data, SigmaReport::new)
}

fn random_signed_permutation(rng: &mut ChaCha8Rng, n: usize) -> (Vec<usize>, i64) {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    (perm, if rng.gen_bool(0.5) { -1 } else { 1 })
}

/// Random twists of `GL_n` (`2 ≤ n ≤ 5`) and of `GL_m × GL_m`
/// (`1 ≤ m ≤ 3`, factors optionally swapped). Every lattice automorphism
/// preserving the roots of `GL_n` is `±w` for a permutation `w`.
pub fn random_twists(count: usize, seed: u64) -> Result<Vec<TwistedRootDatum>, RootDataError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        if rng.gen_bool(0.5) {
            let n = rng.gen_range(2..=5);
            let (perm, s) = random_signed_permutation(&mut rng, n);
            let tau = IntMatrix::signed_permutation(&perm, &vec![s; n]);
            out.push(TwistedRootDatum::general_linear(n, tau, &format!("random{k}_gl{n}"))?);
        } else {
            let m = rng.gen_range(1..=3);
            let (p1, s1) = random_signed_permutation(&mut rng, m);
            let (p2, s2) = random_signed_permutation(&mut rng, m);
            let swap = rng.gen_bool(0.5);
            let mut perm = vec![0; 2 * m];
            let mut signs = vec![0; 2 * m];
            for j in 0..m {
                let (a, b) = if swap { (m + p1[j], p2[j]) } else { (p1[j], m + p2[j]) };
                perm[j] = a;
                perm[m + j] = b;
                signs[j] = s1;
                signs[m + j] = s2;
            }
            let tau = IntMatrix::signed_permutation(&perm, &signs);
            let g = TwistedRootDatum::general_linear(m, IntMatrix::identity(m), "gl")?;
            let name = format!("random{k}_gl{m}xgl{m}{}", if swap { "_swap" } else { "" });
            out.push(TwistedRootDatum::direct_sum(&g, &g, tau, &name)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct NoFixedRootReport {
    pub datum: String,
    pub theta: IntMatrix,
    pub centralizer_roots: usize,
    pub sigma_group: Sign,
    pub sigma_centralizer: Sign,
    /// Every `{a, −a, θa, −θa}` meets an even number of Galois orbits.
    pub four_roots_even: bool,
    pub agree: bool,
}

/// `σ(Z_G((T^θ)°)) = σ(G)` for every signed-permutation `θ*` of every datum
/// with no `θ*`-fixed root.
pub fn no_fixed_root_suite(data: &[TwistedRootDatum]) -> Result<Vec<NoFixedRootReport>, RootDataError> {
    let mut out = Vec::new();
    for d in data {
        let (_, sigma_group) = d.fq_rank_sigma(Lattice::Group);
        for theta in d.signed_permutation_involutions() {
            if !d.theta_fixed_roots(&theta)?.is_empty() {
                continue;
            }
            let z = d.theta_centralizer(&theta)?;
            let (_, sigma_centralizer) = z.fq_rank_sigma(Lattice::Group);
            let four_roots_even = d.four_root_orbit_counts(&theta)?.iter().all(|&(_, c)| c % 2 == 0);
            out.push(NoFixedRootReport {
                datum: d.name().to_string(),
                theta: theta.matrix.clone(),
                centralizer_roots: z.roots().len(),
                sigma_group,
                sigma_centralizer,
                four_roots_even,
                agree: sigma_group == sigma_centralizer,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct EpsilonPoint {
    pub t: [Vec<u32>; 2],
    pub det_ad: Sign,
    pub orbit_product: Sign,
}

#[derive(Clone, Debug, Serialize)]
pub struct EpsilonReport {
    pub group: String,
    pub q: u64,
    pub torus: String,
    pub seed: String,
    pub theta: String,
    pub theta_star: IntMatrix,
    pub domain: usize,
    pub disagreements: usize,
    pub counterexample: Option<EpsilonPoint>,
}

impl EpsilonReport {
    pub fn agree(&self) -> bool {
        self.disagreements == 0
    }
}

fn mat_codes(m: &Mat2) -> Vec<u32> {
    m.entries().iter().map(|e| e.0).collect()
}

fn group(kind: GroupKind, q: u64, bounds: &Bounds, exec: Exec) -> Result<Arc<GroupSpec>, MultError> {
    Ok(Arc::new(GroupSpec::new(kind, q, bounds)?.with_exec(exec)))
}

/// Members of `Θ` that stabilize the torus.
fn stable_members(census: &InvolutionCensus, torus: &TorusEmbedding) -> Vec<Involution> {
    census.members().iter().filter(|th| torus.is_stable(census.group(), th)).cloned().collect()
}

/// `ε` by `det Ad` against `ε` by the orbit product on every torus-stable
/// member of `Θ`.
pub fn epsilon_suite(
    kind: GroupKind,
    q: u64,
    torus_kind: TorusKind,
    seed: &Seed,
    bounds: &Bounds,
    exec: Exec,
) -> Result<Vec<EpsilonReport>, MultError> {
    let spec = group(kind, q, bounds, exec)?;
    let torus = TorusEmbedding::new(&spec, torus_kind)?;
    let census = InvolutionCensus::build(spec.clone(), Involution::from_seed(&spec, *seed)?, bounds)?;
    let members = stable_members(&census, &torus);
    exec.map(&members, |th| -> Result<EpsilonReport, MultError> {
        let eps = EpsilonCharacter::compare(&spec, &torus, th)?;
        let counterexample = (0..eps.domain.len()).find(|&i| eps.det_ad[i] != eps.orbit_product[i]).map(|i| {
            let t = &eps.domain[i];
            EpsilonPoint { t: [mat_codes(&t.0[0]), mat_codes(&t.0[1])], det_ad: eps.det_ad[i], orbit_product: eps.orbit_product[i] }
        });
        Ok(EpsilonReport {
            group: kind.name().to_string(),
            q,
            torus: torus.name(),
            seed: seed.name(),
            theta: th.to_string(),
            theta_star: torus.theta_star(&spec, th)?.matrix,
            domain: eps.domain.len(),
            disagreements: eps.disagreements(),
            counterexample,
        })
    })
    .into_iter()
    .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub group: String,
    pub q: u64,
    pub torus: String,
    pub seed: String,
    pub theta: String,
    pub phi_theta: Vec<Vec<i64>>,
    pub t_plus_size: usize,
    pub agree: bool,
}

/// `Φ_θ` as negated roots, as roots trivial on `T₊`, and as roots whose
/// root spaces `T₊` centralizes, on every torus-stable member of `Θ`.
pub fn phi_theta_suite(
    kind: GroupKind,
    q: u64,
    torus_kind: TorusKind,
    seed: &Seed,
    bounds: &Bounds,
    exec: Exec,
) -> Result<Vec<LemmaReport>, MultError> {
    let spec = group(kind, q, bounds, exec)?;
    let torus = TorusEmbedding::new(&spec, torus_kind)?;
    let census = InvolutionCensus::build(spec.clone(), Involution::from_seed(&spec, *seed)?, bounds)?;
    let members = stable_members(&census, &torus);
    exec.map(&members, |th| -> Result<LemmaReport, MultError> {
        let c = lemma_check(&spec, &torus, th)?;
        Ok(LemmaReport {
            group: kind.name().to_string(),
            q,
            torus: torus.name(),
            seed: seed.name(),
            theta: th.to_string(),
            phi_theta: c.negated.iter().map(|&i| torus.datum().root(i).to_vec()).collect(),
            t_plus_size: c.t_plus_size,
            agree: c.agree(),
        })
    })
    .into_iter()
    .collect()
}

/// Identity and `−1` on a datum, for quick checks.
pub fn trivial_involutions(d: &TwistedRootDatum) -> [InvolutionOnDatum; 2] {
    let id = IntMatrix::identity(d.rank());
    [InvolutionOnDatum::new(id.clone()), InvolutionOnDatum::new(id.scale(-1))]
}
