//! Conjugacy classes of `GL_2(F_q)` by canonical form.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::{DlError, Result};
use crate::gf::{Elem, Field, FieldTower};
use crate::groups::{GroupKind, GroupSpec, Mat2};

/// Largest `q` at which the canonical classes are cross-checked against a
/// brute-force conjugation partition.
pub const BRUTE_FORCE_MAX_Q: u64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClassKey {
    /// `z·1`.
    Central(Elem),
    /// `z·(1 + nilpotent)`, nontrivial unipotent part.
    Unipotent(Elem),
    /// `diag(a, b)`, `a < b`.
    Split(Elem, Elem),
    /// Irreducible characteristic polynomial `x² − trace·x + det`.
    Elliptic { trace: Elem, det: Elem },
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassInfo {
    pub key: ClassKey,
    pub rep: Mat2,
    pub size: u64,
    /// A root `u ∈ F_{q²}` of the characteristic polynomial, for elliptic classes.
    pub eigenvalue: Option<Elem>,
}

pub struct ClassTable {
    tower: Arc<FieldTower>,
    gl2: Vec<Mat2>,
    classes: Vec<ClassInfo>,
    lookup: HashMap<ClassKey, usize>,
    sqrt: Vec<Option<Elem>>,
}

impl fmt::Debug for ClassTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClassTable").field("q", &self.q()).field("classes", &self.classes.len()).finish()
    }
}

fn sqrt_table(f: &Field) -> Vec<Option<Elem>> {
    let mut t = vec![None; f.order() as usize];
    for r in f.elements() {
        let s = f.mul(r, r);
        if t[s.0 as usize].is_none() {
            t[s.0 as usize] = Some(r);
        }
    }
    t
}

impl ClassTable {
    pub fn new(tower: Arc<FieldTower>) -> Result<Self> {
        let spec = GroupSpec::from_tower(GroupKind::Gl2, tower.clone());
        let f = tower.base().clone();
        let ext = tower.level(2)?.clone();
        let q = tower.q();
        let mut classes = Vec::new();
        for z in f.units() {
            classes.push(ClassInfo { key: ClassKey::Central(z), rep: Mat2::scalar(z), size: 1, eigenvalue: None });
        }
        for z in f.units() {
            classes.push(ClassInfo {
                key: ClassKey::Unipotent(z),
                rep: Mat2::new(z, f.one(), f.zero(), z),
                size: q * q - 1,
                eigenvalue: None,
            });
        }
        for a in f.units() {
            for b in f.units().filter(|&b| b > a) {
                classes.push(ClassInfo { key: ClassKey::Split(a, b), rep: Mat2::diag(a, b), size: q * (q + 1), eigenvalue: None });
            }
        }
        // elliptic classes: one per Frobenius orbit in F_{q²} ∖ F_q
        let deg = tower.base_degree();
        for u in ext.units() {
            let uq = ext.frobenius(u, deg);
            if uq <= u {
                continue;
            }
            let trace = tower.restrict(ext.add(u, uq), 2)?.expect("trace is rational");
            let det = tower.restrict(ext.mul(u, uq), 2)?.expect("norm is rational");
            classes.push(ClassInfo {
                key: ClassKey::Elliptic { trace, det },
                rep: Mat2::new(f.zero(), f.neg(det), f.one(), trace),
                size: q * (q - 1),
                eigenvalue: Some(u),
            });
        }
        classes.sort_by_key(|c| c.key);
        let lookup = classes.iter().enumerate().map(|(i, c)| (c.key, i)).collect();
        let table = ClassTable { sqrt: sqrt_table(&f), tower, gl2: spec.gl2_elements().to_vec(), classes, lookup };
        let total: u64 = table.classes.iter().map(|c| c.size).sum();
        if total != table.group_order() {
            return Err(DlError::ClassMismatch(format!("class sizes sum to {total}")));
        }
        if q <= BRUTE_FORCE_MAX_Q {
            table.check_against_brute_force(&spec)?;
        }
        Ok(table)
    }

    pub fn q(&self) -> u64 {
        self.tower.q()
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }

    pub fn gl2_elements(&self) -> &[Mat2] {
        &self.gl2
    }

    pub fn group_order(&self) -> u64 {
        self.gl2.len() as u64
    }

    pub fn key(&self, m: &Mat2) -> ClassKey {
        let f = self.tower.base();
        if m.is_scalar() {
            return ClassKey::Central(m.get(0, 0));
        }
        let t = m.trace(f);
        let d = m.det(f);
        let disc = f.sub(f.mul(t, t), f.mul(f.from_int(4), d));
        let half = f.inv(f.from_int(2));
        if disc.is_zero() {
            return ClassKey::Unipotent(f.mul(t, half));
        }
        match self.sqrt[disc.0 as usize] {
            Some(s) => {
                let a = f.mul(f.add(t, s), half);
                let b = f.mul(f.sub(t, s), half);
                ClassKey::Split(a.min(b), a.max(b))
            }
            None => ClassKey::Elliptic { trace: t, det: d },
        }
    }

    /// Index of the class of an invertible matrix.
    pub fn classify(&self, m: &Mat2) -> usize {
        self.lookup[&self.key(m)]
    }

    /// Conjugation orbits under a generating set must coincide with the
    /// canonical classes.
    fn check_against_brute_force(&self, spec: &GroupSpec) -> Result<()> {
        let f = spec.field();
        let gens: Vec<Mat2> = spec.generators().iter().map(|e| e.0[0]).collect();
        let n = self.gl2.len();
        let mut orbit_of = vec![usize::MAX; n];
        let mut orbit_count = 0;
        for start in 0..n {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let key = self.key(&self.gl2[start]);
            let mut size = 0u64;
            let mut stack = vec![start];
            orbit_of[start] = orbit_count;
            while let Some(i) = stack.pop() {
                size += 1;
                if self.key(&self.gl2[i]) != key {
                    return Err(DlError::ClassMismatch(format!("{key:?} splits across an orbit")));
                }
                for s in &gens {
                    let j = spec.gl2_index(&s.conj(f, &self.gl2[i])).expect("closed");
                    if orbit_of[j] == usize::MAX {
                        orbit_of[j] = orbit_count;
                        stack.push(j);
                    }
                }
            }
            let expect = self.classes[self.lookup[&key]].size;
            if size != expect {
                return Err(DlError::ClassMismatch(format!("{key:?}: orbit {size}, formula {expect}")));
            }
            orbit_count += 1;
        }
        if orbit_count != self.classes.len() {
            return Err(DlError::ClassMismatch(format!("{orbit_count} orbits, {} classes", self.classes.len())));
        }
        Ok(())
    }
}
