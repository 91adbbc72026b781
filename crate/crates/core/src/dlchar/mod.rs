//! Cuspidal characters of `GL_2(F_q)` as certified class functions.
//!
//! Values come from the classical table for `−R_T^λ` with `T` elliptic; a
//! character is only handed out after it passes the orthogonality, degree,
//! cuspidality and Frobenius-symmetry checks below.

mod classes;

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::gf::{FieldTower, GfError, TorusCharacter};
use crate::groups::{Element, GroupError, GroupSpec, Mat2, TorusEmbedding};
use crate::par::Exec;
use crate::rootdata::{library, RootDataError};
use crate::sign::Sign;

pub use classes::{ClassInfo, ClassKey, ClassTable};

/// Tolerance for the certification checks.
pub const CERT_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DlError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error("character exponent {0} is not in general position")]
    NotGeneralPosition(u64),
    #[error("certification failed for exponent {exponent}: {reason}")]
    Certification { exponent: u64, reason: String },
    #[error("class functions live on different groups")]
    SpecMismatch,
    #[error("conjugacy classes disagree with the brute-force partition: {0}")]
    ClassMismatch(String),
}

pub type Result<T> = std::result::Result<T, DlError>;

/// A complex class function on `GL_2(F_q)`.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    table: Arc<ClassTable>,
    values: Vec<Complex64>,
}

impl ClassFunction {
    pub fn from_values(table: Arc<ClassTable>, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), table.classes().len());
        ClassFunction { table, values }
    }

    pub fn trivial(table: Arc<ClassTable>) -> Self {
        let n = table.classes().len();
        Self::from_values(table, vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn table(&self) -> &Arc<ClassTable> {
        &self.table
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn eval(&self, g: &Mat2) -> Complex64 {
        self.values[self.table.classify(g)]
    }

    pub fn degree(&self) -> Complex64 {
        self.eval(&Mat2::IDENTITY)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::from_values(self.table.clone(), self.values.iter().map(|v| v * c).collect())
    }

    pub fn conj(&self) -> Self {
        Self::from_values(self.table.clone(), self.values.iter().map(|v| v.conj()).collect())
    }

    /// `(1/|G|) Σ_g f₁(g) conj(f₂(g))`.
    pub fn inner_product(&self, other: &ClassFunction) -> Result<Complex64> {
        if !Arc::ptr_eq(&self.table, &other.table) && self.table.q() != other.table.q() {
            return Err(DlError::SpecMismatch);
        }
        let total: Complex64 = self
            .table
            .classes()
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(c, (a, b))| a * b.conj() * c.size as f64)
            .sum();
        Ok(total / self.table.group_order() as f64)
    }
}

pub fn class_inner_product(f1: &ClassFunction, f2: &ClassFunction) -> Result<Complex64> {
    f1.inner_product(f2)
}

/// An unordered pair `{λ, λ∘F}`, stored with the smaller exponent first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FrobeniusPair {
    pub lambda: TorusCharacter,
    pub partner: TorusCharacter,
}

impl FrobeniusPair {
    pub fn exponents(&self) -> [u64; 2] {
        [self.lambda.exponent(), self.partner.exponent()]
    }
}

/// All general-position characters of `F_{q²}^×`, grouped into Frobenius
/// pairs and ordered by the restriction to `F_q^×` (exponent mod `q − 1`),
/// then by the smaller exponent.
pub fn general_position_characters(tower: &FieldTower) -> Result<Vec<FrobeniusPair>> {
    let q = tower.q();
    let n = q * q - 1;
    let mut pairs = Vec::new();
    for k in 0..n {
        let lambda = TorusCharacter::new(tower, 2, k as i64)?;
        let partner = lambda.frobenius();
        if lambda.is_general_position() && k < partner.exponent() {
            pairs.push(FrobeniusPair { lambda, partner });
        }
    }
    pairs.sort_by_key(|p| (p.lambda.exponent() % (q - 1), p.lambda.exponent()));
    Ok(pairs)
}

/// A certified cuspidal character `χ_π = σ(T)σ(G) R_T^λ`.
#[derive(Clone, Debug)]
pub struct CuspidalDatum {
    lambda: TorusCharacter,
    character: ClassFunction,
}

impl CuspidalDatum {
    pub fn lambda(&self) -> &TorusCharacter {
        &self.lambda
    }

    /// Exponent `kq` of `λ∘F`.
    pub fn partner_exponent(&self) -> u64 {
        self.lambda.frobenius().exponent()
    }

    pub fn character(&self) -> &ClassFunction {
        &self.character
    }

    /// `R_T^λ = σ(T)σ(G) χ_π`, with the sign taken from the elliptic datum.
    pub fn deligne_lusztig(&self) -> Result<ClassFunction> {
        let sign = library::load("gl2_elliptic")?.sigma_product()?;
        Ok(self.character.scaled(sign.to_f64()))
    }

    /// `⟨χ_π|_{T(F_q)}, λ⟩` over the elliptic torus.
    pub fn torus_restriction(&self, spec: &GroupSpec, torus: &TorusEmbedding, lambda: &TorusCharacter) -> Complex64 {
        let ext = spec.ext();
        let total: Complex64 = torus
            .elements()
            .iter()
            .map(|t| self.character.eval(&t.0[0]) * lambda.eval_in(ext, torus.eigenvalue(spec, t)).conj())
            .sum();
        total / torus.order() as f64
    }

    pub fn export(&self) -> CharacterExport {
        let table = self.character.table();
        CharacterExport {
            q: table.q(),
            lambda_exponent: self.lambda.exponent(),
            classes: table
                .classes()
                .iter()
                .zip(self.character.values())
                .map(|(c, v)| ExportedClass { rep: c.rep.to_rows(), size: c.size, value_re: v.re, value_im: v.im })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterExport {
    pub q: u64,
    pub lambda_exponent: u64,
    pub classes: Vec<ExportedClass>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExportedClass {
    pub rep: [[u32; 2]; 2],
    pub size: u64,
    pub value_re: f64,
    pub value_im: f64,
}

fn table_values(table: &ClassTable, lambda: &TorusCharacter) -> Vec<Complex64> {
    let tower = table.tower();
    let ext = tower.level(2).expect("tower has level 2");
    let q = table.q() as f64;
    let lam = |x| lambda.eval_in(ext, x);
    let base = |z| tower.embed(z, 2).expect("level 2 exists");
    table
        .classes()
        .iter()
        .map(|c| match c.key {
            ClassKey::Central(z) => lam(base(z)) * (q - 1.0),
            ClassKey::Unipotent(z) => -lam(base(z)),
            ClassKey::Split(..) => Complex64::new(0.0, 0.0),
            ClassKey::Elliptic { .. } => {
                let u = c.eigenvalue.expect("elliptic classes carry an eigenvalue");
                let uq = ext.frobenius(u, tower.base_degree());
                -(lam(u) + lam(uq))
            }
        })
        .collect()
}

/// Builds and certifies the cuspidal character attached to `λ`.
pub fn cuspidal_character(table: &Arc<ClassTable>, lambda: &TorusCharacter, exec: Exec) -> Result<CuspidalDatum> {
    let k = lambda.exponent();
    if lambda.level() != 2 || !lambda.is_general_position() {
        return Err(DlError::NotGeneralPosition(k));
    }
    let fail = |reason: String| DlError::Certification { exponent: k, reason };
    let chi = ClassFunction::from_values(table.clone(), table_values(table, lambda));
    let q = table.q() as f64;

    let norm = chi.inner_product(&chi)?;
    if (norm - 1.0).norm() >= CERT_TOL {
        return Err(fail(format!("⟨χ, χ⟩ = {norm}")));
    }
    let deg = chi.degree();
    if (deg - (q - 1.0)).norm() >= CERT_TOL {
        return Err(fail(format!("χ(1) = {deg}")));
    }
    let worst = unipotent_average_defect(table, &chi, exec);
    if worst >= CERT_TOL {
        return Err(fail(format!("unipotent sum reaches {worst}")));
    }
    let partner = table_values(table, &lambda.frobenius());
    if chi.values().iter().zip(&partner).any(|(a, b)| (a - b).norm() >= 1e-9) {
        return Err(fail("λ and λ∘F give different tables".into()));
    }
    Ok(CuspidalDatum { lambda: *lambda, character: chi })
}

/// `max_g |Σ_{u ∈ U} χ(gu)|` over all of `GL_2(F_q)`, `U` upper unipotent.
pub fn unipotent_average_defect(table: &ClassTable, chi: &ClassFunction, exec: Exec) -> f64 {
    let f = table.tower().base();
    let unipotents: Vec<Mat2> = f.elements().map(|x| Mat2::new(f.one(), x, f.zero(), f.one())).collect();
    let elements = table.gl2_elements();
    exec.map(elements, |g| {
        let s: Complex64 = unipotents.iter().map(|u| chi.eval(&g.mul(f, u))).sum();
        s.norm()
    })
    .into_iter()
    .fold(0.0, f64::max)
}

/// All certified cuspidal characters, one per Frobenius pair, in pair order.
pub fn all_cuspidal(table: &Arc<ClassTable>, exec: Exec) -> Result<Vec<CuspidalDatum>> {
    general_position_characters(table.tower())?
        .iter()
        .map(|p| cuspidal_character(table, &p.lambda, exec))
        .collect()
}

/// `χ₁ ⊗ χ₂` on `GL_2 × GL_2`, or a single character on `GL_2`.
#[derive(Clone, Debug)]
pub struct ExternalProduct {
    factors: Vec<ClassFunction>,
}

impl ExternalProduct {
    pub fn new(factors: Vec<ClassFunction>) -> Self {
        ExternalProduct { factors }
    }

    pub fn eval(&self, g: &Element) -> Complex64 {
        self.factors.iter().enumerate().map(|(i, chi)| chi.eval(&g.0[i])).product()
    }
}

/// `σ(T)σ(G)` for the elliptic torus of `GL_2`.
pub fn elliptic_sign() -> Result<Sign> {
    Ok(library::load("gl2_elliptic")?.sigma_product()?)
}
