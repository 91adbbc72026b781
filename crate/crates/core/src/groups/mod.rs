//! Explicit matrix groups `GL_2(F_q)` and `GL_2(F_q) × GL_2(F_q)`, their
//! involutions, rational maximal tori and Lie-algebra fixed spaces.

mod census;
mod involution;
mod lie;
pub(crate) mod linalg;
mod mat;
mod torus;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Elem, Field, FieldTower, GfError};
use crate::par::Exec;
use crate::rootdata::RootDataError;

pub use census::{lemma_check, product_set_size, InvolutionCensus, LemmaCheck, StabilizerData, TorusOrbit, TorusOrbits};
pub use involution::{FactorMap, Involution, MapKind, Seed};
pub use lie::{lie_fixed_det, LieFixedSpace};
pub use mat::Mat2;
pub use torus::{TorusEmbedding, TorusKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error("{what} needs {required} but the bound is {bound}")]
    Resource { what: String, required: u64, bound: u64 },
    #[error("invalid involution: {0}")]
    InvalidInvolution(String),
    #[error("seed `{seed}` is not available for {group}")]
    SeedNotForGroup { seed: String, group: GroupKind },
    #[error("the involution does not stabilize the torus")]
    NotStable,
    #[error("element is not fixed by the involution")]
    NotThetaFixed,
    #[error("det Ad(t) on the fixed space is not ±1")]
    DetNotSign,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("unknown group kind `{0}`")]
    UnknownKind(String),
}

pub type Result<T> = std::result::Result<T, GroupError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    Gl2,
    Gl2XGl2,
}

impl GroupKind {
    pub fn factors(self) -> usize {
        match self {
            GroupKind::Gl2 => 1,
            GroupKind::Gl2XGl2 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Gl2 => "gl2",
            GroupKind::Gl2XGl2 => "gl2_x_gl2",
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupKind {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gl2" => Ok(GroupKind::Gl2),
            "gl2_x_gl2" | "gl2xgl2" => Ok(GroupKind::Gl2XGl2),
            other => Err(GroupError::UnknownKind(other.to_string())),
        }
    }
}

/// Enumeration caps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub gl2_q: u64,
    pub gl2_x_gl2_q: u64,
    pub theta: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { gl2_q: 13, gl2_x_gl2_q: 7, theta: 100_000 }
    }
}

pub const BOUND_ENV: &str = "DL_DISTINCT_BOUND";

impl Bounds {
    /// Parses `N` (both `q` caps) or `gl2=N,gl2_x_gl2=N,theta=N` (any subset).
    pub fn parse(s: &str) -> std::result::Result<Self, String> {
        let mut b = Bounds::default();
        let s = s.trim();
        if let Ok(n) = s.parse::<u64>() {
            if n == 0 {
                return Err("bounds must be positive".into());
            }
            b.gl2_q = n;
            b.gl2_x_gl2_q = n;
            return Ok(b);
        }
        for part in s.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(|| format!("malformed bound `{part}`"))?;
            let v: u64 = v.trim().parse().map_err(|_| format!("malformed bound `{part}`"))?;
            if v == 0 {
                return Err("bounds must be positive".into());
            }
            match k.trim() {
                "gl2" => b.gl2_q = v,
                "gl2_x_gl2" => b.gl2_x_gl2_q = v,
                "theta" => b.theta = v,
                other => return Err(format!("unknown bound `{other}`")),
            }
        }
        Ok(b)
    }

    /// Defaults, overridden by the environment variable when set.
    pub fn from_env() -> std::result::Result<Self, String> {
        match std::env::var(BOUND_ENV) {
            Ok(s) => Self::parse(&s),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn q_bound(&self, kind: GroupKind) -> u64 {
        match kind {
            GroupKind::Gl2 => self.gl2_q,
            GroupKind::Gl2XGl2 => self.gl2_x_gl2_q,
        }
    }
}

/// An element of `GL_2` or `GL_2 × GL_2`; for `GL_2` the second factor is
/// the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element(pub [Mat2; 2]);

impl Element {
    pub const IDENTITY: Element = Element([Mat2::IDENTITY; 2]);

    pub fn gl2(m: Mat2) -> Self {
        Element([m, Mat2::IDENTITY])
    }

    pub fn factor(&self, i: usize) -> &Mat2 {
        &self.0[i]
    }
}

/// The rational points of `GL_2` or `GL_2 × GL_2` over `F_q`, enumerated
/// lexicographically on entries.
pub struct GroupSpec {
    kind: GroupKind,
    tower: Arc<FieldTower>,
    gl2: Vec<Mat2>,
    index: Vec<u32>,
    exec: Exec,
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupSpec").field("kind", &self.kind).field("q", &self.q()).finish()
    }
}

pub fn gl2_order(q: u64) -> u64 {
    (q * q - 1) * (q * q - q)
}

impl GroupSpec {
    pub fn new(kind: GroupKind, q: u64, bounds: &Bounds) -> Result<Self> {
        let tower = Arc::new(FieldTower::build(q, &[1, 2])?);
        let bound = bounds.q_bound(kind);
        if q > bound {
            let required = gl2_order(q).pow(kind.factors() as u32);
            return Err(GroupError::Resource {
                what: format!("{kind} over F_{q} ({required} elements)"),
                required: q,
                bound,
            });
        }
        Ok(Self::from_tower(kind, tower))
    }

    pub fn from_tower(kind: GroupKind, tower: Arc<FieldTower>) -> Self {
        let f = tower.base().clone();
        let q = f.order();
        let mut gl2 = Vec::with_capacity(gl2_order(q as u64) as usize);
        let mut index = vec![u32::MAX; (q as usize).pow(4)];
        for code in 0..(q as usize).pow(4) {
            let qs = q as usize;
            let m = Mat2([code / (qs * qs * qs), code / (qs * qs) % qs, code / qs % qs, code % qs]
                .map(|c| Elem(c as u32)));
            if m.is_invertible(&f) {
                index[code] = gl2.len() as u32;
                gl2.push(m);
            }
        }
        GroupSpec { kind, tower, gl2, index, exec: Exec::default() }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn exec(&self) -> Exec {
        self.exec
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn q(&self) -> u64 {
        self.tower.q()
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn field(&self) -> &Field {
        self.tower.base()
    }

    /// `F_{q²}`.
    pub fn ext(&self) -> &Field {
        self.tower.level(2).expect("tower has level 2")
    }

    pub fn factors(&self) -> usize {
        self.kind.factors()
    }

    pub fn gl2_elements(&self) -> &[Mat2] {
        &self.gl2
    }

    pub fn order(&self) -> usize {
        self.gl2.len().pow(self.factors() as u32)
    }

    pub fn element(&self, i: usize) -> Element {
        match self.kind {
            GroupKind::Gl2 => Element::gl2(self.gl2[i]),
            GroupKind::Gl2XGl2 => {
                let n = self.gl2.len();
                Element([self.gl2[i / n], self.gl2[i % n]])
            }
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    pub fn gl2_index(&self, m: &Mat2) -> Option<usize> {
        let q = self.q() as usize;
        let code = m.0.iter().fold(0usize, |acc, x| acc * q + x.0 as usize);
        self.index.get(code).copied().filter(|&i| i != u32::MAX).map(|i| i as usize)
    }

    pub fn index_of(&self, g: &Element) -> Option<usize> {
        let i = self.gl2_index(&g.0[0])?;
        match self.kind {
            GroupKind::Gl2 => (g.0[1] == Mat2::IDENTITY).then_some(i),
            GroupKind::Gl2XGl2 => Some(i * self.gl2.len() + self.gl2_index(&g.0[1])?),
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let f = self.field();
        Element([a.0[0].mul(f, &b.0[0]), a.0[1].mul(f, &b.0[1])])
    }

    pub fn inv(&self, a: &Element) -> Element {
        let f = self.field();
        Element([a.0[0].inv(f), a.0[1].inv(f)])
    }

    /// `g x g⁻¹`.
    pub fn conj(&self, g: &Element, x: &Element) -> Element {
        self.mul(&self.mul(g, x), &self.inv(g))
    }

    pub fn is_central(&self, g: &Element) -> bool {
        g.0.iter().all(Mat2::is_scalar)
    }

    pub fn center(&self) -> Vec<Element> {
        let f = self.field();
        let scalars: Vec<Mat2> = f.units().map(Mat2::scalar).collect();
        match self.kind {
            GroupKind::Gl2 => scalars.iter().map(|&z| Element::gl2(z)).collect(),
            GroupKind::Gl2XGl2 => scalars
                .iter()
                .flat_map(|&a| scalars.iter().map(move |&b| Element([a, b])))
                .collect(),
        }
    }

    /// A generating set: elementary unipotents in both directions and a
    /// diagonal generator, placed in each factor.
    pub fn generators(&self) -> Vec<Element> {
        let f = self.field();
        let mut gens = Vec::new();
        for x in f.units() {
            gens.push(Mat2::new(f.one(), x, f.zero(), f.one()));
            gens.push(Mat2::new(f.one(), f.zero(), x, f.one()));
        }
        gens.push(Mat2::diag(f.generator(), f.one()));
        match self.kind {
            GroupKind::Gl2 => gens.into_iter().map(Element::gl2).collect(),
            GroupKind::Gl2XGl2 => gens
                .iter()
                .map(|&m| Element([m, Mat2::IDENTITY]))
                .chain(gens.iter().map(|&m| Element([Mat2::IDENTITY, m])))
                .collect(),
        }
    }
}

/// Shared handle; censuses and characters keep the group alive.
pub type Group = Arc<GroupSpec>;

/// Indices of the elements satisfying `pred`.
pub fn filter_group(spec: &GroupSpec, pred: impl Fn(&Element) -> bool + Sync + Send) -> Vec<usize> {
    spec.exec.filter_range(spec.order(), |i| pred(&spec.element(i)))
}
