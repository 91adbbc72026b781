//! The `G(F_q)`-orbit `Θ` of an involution, its partition into
//! `T(F_q)`-orbits, stabilizer indices, and the fixed-subtorus root test.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{filter_group, Bounds, Element, Group, GroupError, GroupSpec, Involution, Mat2, Result, TorusEmbedding};
use crate::gf::Elem;

/// All involutions `g·θ₀`, each with a transporter `g`.
#[derive(Debug)]
pub struct InvolutionCensus {
    group: Group,
    members: Vec<Involution>,
    index: HashMap<Involution, usize>,
    transporters: Vec<Element>,
    stabilizer: Vec<usize>,
    fixed: Vec<usize>,
}

impl InvolutionCensus {
    pub fn build(group: Group, seed: Involution, bounds: &Bounds) -> Result<Self> {
        let spec = &*group;
        let stabilizer = filter_group(spec, |g| seed.stabilized_by(spec, g));
        let fixed = filter_group(spec, |g| seed.is_fixed(spec, g));
        let size = (spec.order() / stabilizer.len()) as u64;
        if size > bounds.theta {
            return Err(GroupError::Resource {
                what: format!("orbit of {seed} ({size} involutions)"),
                required: size,
                bound: bounds.theta,
            });
        }
        let gens = spec.generators();
        let mut members = vec![seed.clone()];
        let mut transporters = vec![Element::IDENTITY];
        let mut index = HashMap::from([(seed, 0usize)]);
        let mut next = 0;
        while next < members.len() {
            let (theta, x) = (members[next].clone(), transporters[next]);
            for s in &gens {
                let moved = theta.act(spec, s);
                if !index.contains_key(&moved) {
                    index.insert(moved.clone(), members.len());
                    members.push(moved);
                    transporters.push(spec.mul(s, &x));
                }
            }
            next += 1;
        }
        if members.len() as u64 != size {
            return Err(GroupError::Inconsistent(format!(
                "orbit has {} members but |G|/|G_θ| = {size}",
                members.len()
            )));
        }
        Ok(InvolutionCensus { group, members, index, transporters, stabilizer, fixed })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn seed(&self) -> &Involution {
        &self.members[0]
    }

    pub fn members(&self) -> &[Involution] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, theta: &Involution) -> Option<usize> {
        self.index.get(theta).copied()
    }

    /// `g` with `members[i] = g·θ₀`.
    pub fn transporter(&self, i: usize) -> &Element {
        &self.transporters[i]
    }

    /// `|G_θ|`, the same for every member.
    pub fn stabilizer_order(&self) -> usize {
        self.stabilizer.len()
    }

    /// `|G^θ|`, the same for every member.
    pub fn fixed_order(&self) -> usize {
        self.fixed.len()
    }

    /// `G^θ` for `θ = members[i]`, as `g G^{θ₀} g⁻¹`.
    pub fn fixed_points(&self, i: usize) -> Vec<Element> {
        let spec = &*self.group;
        let g = &self.transporters[i];
        let g_inv = spec.inv(g);
        self.fixed.iter().map(|&k| spec.mul(&spec.mul(g, &spec.element(k)), &g_inv)).collect()
    }

    /// `G_θ` for `θ = members[i]`.
    pub fn stabilizer(&self, i: usize) -> Vec<Element> {
        let spec = &*self.group;
        let g = &self.transporters[i];
        let g_inv = spec.inv(g);
        self.stabilizer.iter().map(|&k| spec.mul(&spec.mul(g, &spec.element(k)), &g_inv)).collect()
    }

    /// Partition into `T(F_q)`-orbits with the `θ(T) = T` flag.
    pub fn torus_orbits(&self, torus: &TorusEmbedding) -> Result<TorusOrbits> {
        let spec = &*self.group;
        let n = self.members.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for i in 0..n {
            for t in torus.generators() {
                let j = self.index[&self.members[i].act(spec, t)];
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let stable = spec.exec().map(&self.members, |th| torus.is_stable(spec, th));
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for i in 0..n {
            let root = find(&mut parent, i);
            let k = *slot.entry(root).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[k].push(i);
        }
        let orbits = groups
            .into_iter()
            .map(|members| {
                let flag = stable[members[0]];
                if members.iter().any(|&i| stable[i] != flag) {
                    return Err(GroupError::Inconsistent("θ(T) = T is not constant on a T-orbit".into()));
                }
                Ok(TorusOrbit { members, stable: flag })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TorusOrbits { orbits })
    }

    /// Stabilizer data of `members[i]`, using the conjugated stabilizers of
    /// the seed.
    pub fn stabilizer_data(&self, i: usize, torus: &TorusEmbedding) -> Result<StabilizerData> {
        let spec = &*self.group;
        let theta = &self.members[i];
        let torus_stabilizer = torus.elements().iter().filter(|t| theta.stabilized_by(spec, t)).count();
        let torus_fixed = torus.elements().iter().filter(|t| theta.is_fixed(spec, t)).count();
        StabilizerData::new(self.stabilizer.len(), self.fixed.len(), torus_stabilizer, torus_fixed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusOrbit {
    /// Indices into the census, increasing.
    pub members: Vec<usize>,
    /// `θ(T) = T` for the members.
    pub stable: bool,
}

impl TorusOrbit {
    pub fn representative(&self) -> usize {
        self.members[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusOrbits {
    orbits: Vec<TorusOrbit>,
}

impl TorusOrbits {
    pub fn orbits(&self) -> &[TorusOrbit] {
        &self.orbits
    }

    pub fn stable(&self) -> impl Iterator<Item = &TorusOrbit> {
        self.orbits.iter().filter(|o| o.stable)
    }
}

/// `|G_θ|`, `|G^θ|`, `|T_θ|`, `|T^θ|` and `m = [G_θ : G^θ T_θ]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerData {
    pub stabilizer_order: usize,
    pub fixed_order: usize,
    pub torus_stabilizer_order: usize,
    pub torus_fixed_order: usize,
    pub m: u64,
    pub power_of_two: bool,
}

impl StabilizerData {
    /// `|G^θ T_θ| = |G^θ| [T_θ : T^θ]`, since `G^θ ∩ T_θ = T^θ`.
    fn new(stab: usize, fixed: usize, t_stab: usize, t_fixed: usize) -> Result<Self> {
        let bad = || GroupError::Inconsistent(format!("non-integral index: |G_θ|={stab} |G^θ|={fixed} |T_θ|={t_stab} |T^θ|={t_fixed}"));
        if t_fixed == 0 || !t_stab.is_multiple_of(t_fixed) || !stab.is_multiple_of(fixed) {
            return Err(bad());
        }
        let cosets = t_stab / t_fixed;
        let product = fixed * cosets;
        if !stab.is_multiple_of(product) {
            return Err(bad());
        }
        let m = (stab / product) as u64;
        if !m.is_power_of_two() {
            log::warn!("m = {m} is not a power of two");
        }
        Ok(StabilizerData {
            stabilizer_order: stab,
            fixed_order: fixed,
            torus_stabilizer_order: t_stab,
            torus_fixed_order: t_fixed,
            m,
            power_of_two: m.is_power_of_two(),
        })
    }

    /// Direct computation by filtering the whole group.
    pub fn compute(spec: &GroupSpec, theta: &Involution, torus: &TorusEmbedding) -> Result<Self> {
        let stab = filter_group(spec, |g| theta.stabilized_by(spec, g)).len();
        let fixed = filter_group(spec, |g| theta.is_fixed(spec, g)).len();
        let t_stab = torus.elements().iter().filter(|t| theta.stabilized_by(spec, t)).count();
        let t_fixed = torus.elements().iter().filter(|t| theta.is_fixed(spec, t)).count();
        Self::new(stab, fixed, t_stab, t_fixed)
    }
}

/// `|AB|` for subsets of the group, by listing the products.
pub fn product_set_size(spec: &GroupSpec, a: &[Element], b: &[Element]) -> usize {
    let mut set = HashSet::new();
    for x in a {
        for y in b {
            set.insert(spec.mul(x, y));
        }
    }
    set.len()
}

/// The three descriptions of `Φ_θ` for a `T`-stable involution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    /// Roots with `θ*a = −a`.
    pub negated: Vec<usize>,
    /// Roots trivial on `T₊ = {tθ(t)}`.
    pub trivial_on_t_plus: Vec<usize>,
    /// Roots whose root space is centralized by `T₊`.
    pub centralized: Vec<usize>,
    /// Number of elements of `T₊` examined (a generating set when the
    /// `F_{q²}`-points were too many to list).
    pub t_plus_size: usize,
}

impl LemmaCheck {
    pub fn agree(&self) -> bool {
        self.negated == self.trivial_on_t_plus && self.trivial_on_t_plus == self.centralized
    }
}

/// `T₊` is built from `F_{q²}`-points of `T`: over `F_q` alone the map
/// `t ↦ tθ(t)` can be too degenerate (at `q = 3` every square in the split
/// torus is 1). Since `t ↦ tθ(t)` is a homomorphism on the torus, the
/// images of generators suffice when the points are too many to list.
pub fn lemma_check(spec: &GroupSpec, torus: &TorusEmbedding, theta: &Involution) -> Result<LemmaCheck> {
    if !torus.is_stable(spec, theta) {
        return Err(GroupError::NotStable);
    }
    let ext = spec.ext();
    let datum = torus.datum();
    let theta_star = torus.theta_star(spec, theta)?;
    let negated = datum.phi_theta(&theta_star)?;

    let theta_ext = theta.embedded(spec.tower(), 2)?;
    let t_plus: HashSet<Element> = torus
        .ext_points(spec)
        .iter()
        .map(|t| {
            let mut s = theta_ext.apply(ext, t);
            for i in 0..spec.factors() {
                s.0[i] = t.0[i].mul(ext, &s.0[i]);
            }
            s
        })
        .collect();
    let t_plus: Vec<Element> = t_plus.into_iter().collect();
    let coords: Vec<Vec<Elem>> = t_plus.iter().map(|s| torus.ext_coordinates(ext, s)).collect();

    let roots = datum.roots();
    let trivial_on_t_plus = (0..roots.len())
        .filter(|&r| coords.iter().all(|c| TorusEmbedding::eval_character(ext, &roots[r], c) == ext.one()))
        .collect();

    let p = torus.diagonalizer();
    let p_inv = p.inv(ext);
    let centralized = (0..roots.len())
        .filter(|&r| {
            let a = &roots[r];
            let plus = a.iter().position(|&x| x == 1).expect("GL_2 roots are e_j − e_k");
            let minus = a.iter().position(|&x| x == -1).expect("GL_2 roots are e_j − e_k");
            let factor = plus / 2;
            let x = p.mul(ext, &Mat2::unit(plus % 2, minus % 2)).mul(ext, &p_inv);
            t_plus.iter().all(|s| s.0[factor].conj(ext, &x) == x)
        })
        .collect();
    Ok(LemmaCheck { negated, trivial_on_t_plus, centralized, t_plus_size: t_plus.len() })
}
