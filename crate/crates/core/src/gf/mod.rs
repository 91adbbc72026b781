//! Finite field towers `F_q ⊂ F_{q^d}` with table-driven arithmetic.
//!
//! Every level is stored absolutely, as `F_p[x]/(m(x))` for the
//! lexicographically smallest monic irreducible `m` of degree `f·d`
//! (where `q = p^f`). Elements are packed into a `u32` code
//! `Σ c_i p^i` of their coordinates in the polynomial basis. A fixed
//! multiplicative generator per level backs the exp/log tables, so
//! multiplication and discrete logarithms are table lookups.
//!
//! The base field is embedded into each level by sending the class of `x`
//! to the smallest root of the base modulus, which makes the embedding a
//! ring homomorphism commuting with Frobenius.

mod poly;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sign::Sign;

/// Largest field order for which log tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;
const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("q = {0} has even characteristic; only odd characteristic is supported")]
    EvenCharacteristic(u64),
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("no extension degrees requested")]
    NoLevels,
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field of order {order} exceeds the table limit {limit}")]
    TooLarge { order: u64, limit: u64 },
    #[error("level {0} is not part of this tower")]
    MissingLevel(u32),
    #[error("element lives at level {found}, expected level {expected}")]
    LevelMismatch { expected: u32, found: u32 },
    #[error("zero is not in the multiplicative group")]
    Zero,
    #[error("coefficient vector {coeffs:?} is not valid at level {level}")]
    BadCoefficients { level: u32, coeffs: Vec<u32> },
}

pub type Result<T> = std::result::Result<T, GfError>;

/// Packed coordinates of a field element; meaningful only together with
/// the [`Field`] it was produced by.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A single finite field `F_{p^n}` with exp/log tables.
pub struct Field {
    p: u32,
    n: u32,
    order: u32,
    modulus: Vec<u32>,
    pow_p: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator())
            .finish()
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits `q = p^f`, rejecting even characteristic.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(GfError::NotPrimePower(q));
    }
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return Err(GfError::NotPrimePower(q));
    }
    let p = factors[0];
    if p == 2 {
        return Err(GfError::EvenCharacteristic(q));
    }
    let mut f = 0;
    let mut m = q;
    while m > 1 {
        m /= p;
        f += 1;
    }
    Ok((p as u32, f))
}

fn lex_digits(mut index: u64, n: usize, p: u32) -> Vec<u32> {
    // c_0 is the most significant digit of the lexicographic index.
    let mut coeffs = vec![0u32; n];
    for i in (0..n).rev() {
        coeffs[i] = (index % p as u64) as u32;
        index /= p as u64;
    }
    coeffs
}

impl Field {
    pub(crate) fn build(p: u32, n: u32) -> Result<Field> {
        let order = (p as u64).checked_pow(n).unwrap_or(u64::MAX);
        if order > MAX_FIELD_ORDER {
            return Err(GfError::TooLarge { order, limit: MAX_FIELD_ORDER });
        }
        let order = order as u32;
        let deg = n as usize;
        let modulus = (0..(p as u64).pow(n))
            .map(|idx| poly::monic_from_lex_index(idx, deg, p))
            .find(|m| poly::is_irreducible(m, p))
            .expect("an irreducible polynomial exists in every degree");

        let group_order = (order - 1) as u64;
        let cofactors: Vec<u64> = prime_factors(group_order)
            .into_iter()
            .map(|r| group_order / r)
            .collect();
        let is_one = |x: &[u32]| x.len() == 1 && x[0] == 1;
        let generator = (1..order as u64)
            .map(|idx| {
                let mut c = lex_digits(idx, deg, p);
                while c.last() == Some(&0) {
                    c.pop();
                }
                c
            })
            .find(|c| {
                if group_order == 1 {
                    return true;
                }
                cofactors
                    .iter()
                    .all(|&e| !is_one(&poly::powmod(c, e, &modulus, p)))
            })
            .expect("the multiplicative group is cyclic");

        let mut pow_p = Vec::with_capacity(deg);
        let mut acc = 1u32;
        for _ in 0..deg {
            pow_p.push(acc);
            acc = acc.wrapping_mul(p);
        }
        let encode = |c: &[u32]| -> u32 { c.iter().zip(&pow_p).map(|(a, b)| a * b).sum() };

        let mut exp = Vec::with_capacity(group_order as usize);
        let mut log = vec![u32::MAX; order as usize];
        let mut cur: Vec<u32> = vec![1];
        for m in 0..group_order as u32 {
            let code = encode(&cur);
            exp.push(code);
            log[code as usize] = m;
            cur = poly::mulmod(&cur, &generator, &modulus, p);
        }

        let mut field = Field { p, n, order, modulus, pow_p, exp, log, neg: Vec::new(), add: None };
        field.neg = (0..order).map(|c| field.neg_digits(c)).collect();
        if n > 1 && order <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    table[(a * order + b) as usize] = field.add_digits(a, b);
                }
            }
            field.add = Some(table);
        }
        Ok(field)
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0;
        for &w in &self.pow_p {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * w;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn neg_digits(&self, mut a: u32) -> u32 {
        let mut out = 0;
        for &w in &self.pow_p {
            out += ((self.p - a % self.p) % self.p) * w;
            a /= self.p;
        }
        out
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Order of the multiplicative group.
    pub fn unit_order(&self) -> u32 {
        self.order - 1
    }

    /// Defining polynomial over `F_p`, low degree first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    pub fn minus_one(&self) -> Elem {
        self.neg(Elem::ONE)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem)
    }

    pub fn units(&self) -> impl Iterator<Item = Elem> {
        (1..self.order).map(Elem)
    }

    pub fn coefficients(&self, x: Elem) -> Vec<u32> {
        let mut c = x.0;
        (0..self.n)
            .map(|_| {
                let d = c % self.p;
                c /= self.p;
                d
            })
            .collect()
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Option<Elem> {
        if coeffs.len() > self.n as usize || coeffs.iter().any(|&c| c >= self.p) {
            return None;
        }
        Some(Elem(coeffs.iter().zip(&self.pow_p).map(|(a, b)| a * b).sum()))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.n == 1 {
            return Elem((a.0 + b.0) % self.p);
        }
        match &self.add {
            Some(t) => Elem(t[(a.0 * self.order + b.0) as usize]),
            None => Elem(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let n = self.order - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        Elem(self.exp[(if s >= n { s - n } else { s }) as usize])
    }

    /// Multiplicative inverse.
    ///
    /// # Panics
    ///
    /// Panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        let n = self.order - 1;
        let l = self.log[a.0 as usize];
        Elem(self.exp[((n - l) % n) as usize])
    }

    pub fn checked_inv(&self, a: Elem) -> Option<Elem> {
        (!a.is_zero()).then(|| self.inv(a))
    }

    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    /// `a^e` for any integer `e`; negative exponents need `a ≠ 0`.
    pub fn pow(&self, a: Elem, e: i64) -> Elem {
        if a.is_zero() {
            assert!(e >= 0, "negative power of zero");
            return if e == 0 { Elem::ONE } else { Elem::ZERO };
        }
        let n = (self.order - 1) as i64;
        let l = self.log[a.0 as usize] as i64;
        Elem(self.exp[((l * e.rem_euclid(n)) % n) as usize])
    }

    /// The fixed generator of the multiplicative group.
    pub fn generator(&self) -> Elem {
        Elem(self.exp[1 % self.exp.len()])
    }

    /// `generator^m`.
    pub fn exp(&self, m: u64) -> Elem {
        Elem(self.exp[(m % (self.order as u64 - 1)) as usize])
    }

    /// Discrete logarithm to the fixed generator; `None` for zero.
    pub fn log(&self, a: Elem) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    /// `a^(p^k)`.
    pub fn frobenius(&self, a: Elem, k: u32) -> Elem {
        if a.is_zero() {
            return a;
        }
        let n = (self.order - 1) as u64;
        let mut e = 1u64;
        for _ in 0..k {
            e = e * self.p as u64 % n.max(1);
        }
        self.exp(self.log[a.0 as usize] as u64 * e)
    }

    pub fn is_square(&self, a: Elem) -> bool {
        a.is_zero() || self.log[a.0 as usize].is_multiple_of(2)
    }

    /// Multiplicative order of a unit.
    pub fn element_order(&self, a: Elem) -> u64 {
        let n = (self.order - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        n / gcd(n, l)
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

struct Level {
    field: Arc<Field>,
    embed: Vec<u32>,
    restrict: Vec<u32>,
}

/// The tower `F_q ⊂ F_{q^d}` for the requested degrees `d`; the base level
/// `d = 1` is always present.
pub struct FieldTower {
    p: u32,
    f: u32,
    q: u64,
    levels: BTreeMap<u32, Level>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("q", &self.q)
            .field("degrees", &self.degrees())
            .finish()
    }
}

/// An element of one level of a [`FieldTower`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub level: u32,
    pub value: Elem,
}

impl FieldTower {
    pub fn build(q: u64, degrees: &[u32]) -> Result<FieldTower> {
        let (p, f) = prime_power(q)?;
        if degrees.is_empty() {
            return Err(GfError::NoLevels);
        }
        if degrees.contains(&0) {
            return Err(GfError::ZeroDegree);
        }
        let base = Arc::new(Field::build(p, f)?);
        let mut levels = BTreeMap::new();
        let mut wanted: Vec<u32> = degrees.to_vec();
        wanted.push(1);
        wanted.sort_unstable();
        wanted.dedup();
        for d in wanted {
            let field = if d == 1 { base.clone() } else { Arc::new(Field::build(p, f * d)?) };
            // Image of the base generator class x: smallest root of the base modulus.
            let root = field
                .elements()
                .find(|&r| {
                    let mut acc = Elem::ZERO;
                    for &c in base.modulus().iter().rev() {
                        acc = field.add(field.mul(acc, r), field.from_int(c as i64));
                    }
                    acc.is_zero()
                })
                .expect("the base field embeds into every level");
            let embed: Vec<u32> = base
                .elements()
                .map(|x| {
                    let mut acc = Elem::ZERO;
                    for &c in base.coefficients(x).iter().rev() {
                        acc = field.add(field.mul(acc, root), field.from_int(c as i64));
                    }
                    acc.0
                })
                .collect();
            let mut restrict = vec![u32::MAX; field.order() as usize];
            for (code, &image) in embed.iter().enumerate() {
                restrict[image as usize] = code as u32;
            }
            levels.insert(d, Level { field, embed, restrict });
        }
        Ok(FieldTower { p, f, q, levels })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// `q = p^f`.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn base_degree(&self) -> u32 {
        self.f
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.levels.keys().copied().collect()
    }

    pub fn base(&self) -> &Arc<Field> {
        &self.levels[&1].field
    }

    pub fn level(&self, d: u32) -> Result<&Arc<Field>> {
        self.levels.get(&d).map(|l| &l.field).ok_or(GfError::MissingLevel(d))
    }

    /// Embeds a base-field element into level `d`.
    pub fn embed(&self, x: Elem, d: u32) -> Result<Elem> {
        let level = self.levels.get(&d).ok_or(GfError::MissingLevel(d))?;
        Ok(Elem(level.embed[x.0 as usize]))
    }

    /// Inverse of [`FieldTower::embed`]; `None` if `x` is not in `F_q`.
    pub fn restrict(&self, x: Elem, d: u32) -> Result<Option<Elem>> {
        let level = self.levels.get(&d).ok_or(GfError::MissingLevel(d))?;
        let code = level.restrict[x.0 as usize];
        Ok((code != u32::MAX).then_some(Elem(code)))
    }

    /// `q^d`.
    pub fn level_order(&self, d: u32) -> Result<u64> {
        Ok(self.level(d)?.order() as u64)
    }

    pub fn element(&self, d: u32, coeffs: &[u32]) -> Result<FieldElement> {
        let field = self.level(d)?;
        let value = field
            .from_coefficients(coeffs)
            .ok_or_else(|| GfError::BadCoefficients { level: d, coeffs: coeffs.to_vec() })?;
        Ok(FieldElement { level: d, value })
    }

    pub fn coefficients(&self, x: &FieldElement) -> Result<Vec<u32>> {
        Ok(self.level(x.level)?.coefficients(x.value))
    }

    pub fn generator(&self, d: u32) -> Result<FieldElement> {
        Ok(FieldElement { level: d, value: self.level(d)?.generator() })
    }

    pub fn pow_generator(&self, d: u32, m: u64) -> Result<FieldElement> {
        Ok(FieldElement { level: d, value: self.level(d)?.exp(m) })
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        if a.level != b.level {
            return Err(GfError::LevelMismatch { expected: a.level, found: b.level });
        }
        Ok(FieldElement { level: a.level, value: self.level(a.level)?.mul(a.value, b.value) })
    }

    pub fn pow(&self, a: &FieldElement, e: i64) -> Result<FieldElement> {
        let field = self.level(a.level)?;
        if a.value.is_zero() && e < 0 {
            return Err(GfError::Zero);
        }
        Ok(FieldElement { level: a.level, value: field.pow(a.value, e) })
    }

    /// Returns `m` with `g_d^m = x`, `0 ≤ m < q^d − 1`.
    pub fn discrete_log(&self, x: &FieldElement) -> Result<u64> {
        let field = self.level(x.level)?;
        field.log(x.value).map(u64::from).ok_or(GfError::Zero)
    }

    /// Quadratic residue symbol `u^((q−1)/2)` of a nonzero base-field element.
    pub fn legendre_symbol(&self, u: &FieldElement) -> Result<Sign> {
        if u.level != 1 {
            return Err(GfError::LevelMismatch { expected: 1, found: u.level });
        }
        self.quadratic_character(u)
    }

    /// The quadratic character of the level `u` lives in, evaluated as
    /// `u^((q^d − 1)/2)`.
    pub fn quadratic_character(&self, u: &FieldElement) -> Result<Sign> {
        let field = self.level(u.level)?;
        if u.value.is_zero() {
            return Err(GfError::Zero);
        }
        let half = (field.unit_order() / 2) as i64;
        let r = field.pow(u.value, half);
        if r == field.one() {
            Ok(Sign::Plus)
        } else {
            debug_assert_eq!(r, field.minus_one());
            Ok(Sign::Minus)
        }
    }
}

/// A character `g_d^m ↦ ζ^{km}` of `F_{q^d}^×`, `ζ = exp(2πi/(q^d − 1))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusCharacter {
    level: u32,
    exponent: u64,
    modulus: u64,
    q: u64,
}

impl TorusCharacter {
    pub fn new(tower: &FieldTower, level: u32, exponent: i64) -> Result<Self> {
        let modulus = tower.level_order(level)? - 1;
        Ok(Self::from_parts(level, exponent, modulus, tower.q()))
    }

    pub(crate) fn from_parts(level: u32, exponent: i64, modulus: u64, q: u64) -> Self {
        TorusCharacter { level, exponent: exponent.rem_euclid(modulus as i64) as u64, modulus, q }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Exponent `k`, reduced modulo `q^d − 1`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `q^d − 1`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `λ ∘ F`, exponent `kq`.
    pub fn frobenius(&self) -> Self {
        Self::from_parts(
            self.level,
            ((self.exponent as u128 * self.q as u128) % self.modulus as u128) as i64,
            self.modulus,
            self.q,
        )
    }

    /// Complex conjugate (= inverse) character.
    pub fn inverse(&self) -> Self {
        Self::from_parts(self.level, -(self.exponent as i64), self.modulus, self.q)
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    /// `λ ∘ F ≠ λ`.
    pub fn is_general_position(&self) -> bool {
        self.frobenius().exponent != self.exponent
    }

    /// `ζ^{k·m}`, reducing the exponent exactly before taking the angle.
    pub fn value_at_log(&self, m: u64) -> Complex64 {
        let r = ((self.exponent as u128 * m as u128) % self.modulus as u128) as f64;
        Complex64::from_polar(1.0, 2.0 * PI * r / self.modulus as f64)
    }

    /// Evaluates on a nonzero element of the matching level given directly as
    /// a field code.
    pub fn eval_in(&self, field: &Field, x: Elem) -> Complex64 {
        let m = field.log(x).expect("character evaluated at zero");
        self.value_at_log(m as u64)
    }

    pub fn eval(&self, tower: &FieldTower, x: &FieldElement) -> Result<Complex64> {
        if x.level != self.level {
            return Err(GfError::LevelMismatch { expected: self.level, found: x.level });
        }
        let m = tower.discrete_log(x)?;
        Ok(self.value_at_log(m))
    }
}
