//! 2×2 matrices with entries in a [`Field`].

use serde::{Deserialize, Serialize};

use crate::gf::{Elem, Field, FieldTower, GfError};

/// Row-major `[[a, b], [c, d]]`; entries are codes of whichever field the
/// caller passes to the arithmetic methods.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2(pub [Elem; 4]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([Elem::ONE, Elem::ZERO, Elem::ZERO, Elem::ONE]);
    pub const ZERO: Mat2 = Mat2([Elem::ZERO; 4]);

    pub fn new(a: Elem, b: Elem, c: Elem, d: Elem) -> Self {
        Mat2([a, b, c, d])
    }

    pub fn from_ints(f: &Field, e: [i64; 4]) -> Self {
        Mat2(e.map(|x| f.from_int(x)))
    }

    pub fn scalar(z: Elem) -> Self {
        Mat2([z, Elem::ZERO, Elem::ZERO, z])
    }

    pub fn diag(a: Elem, d: Elem) -> Self {
        Mat2([a, Elem::ZERO, Elem::ZERO, d])
    }

    /// The unit matrix `E_{ij}`.
    pub fn unit(i: usize, j: usize) -> Self {
        let mut m = Mat2::ZERO;
        m.0[2 * i + j] = Elem::ONE;
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.0[2 * i + j]
    }

    pub fn entries(&self) -> [Elem; 4] {
        self.0
    }

    pub fn mul(&self, f: &Field, o: &Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, g, h, k] = o.0;
        Mat2([
            f.add(f.mul(a, e), f.mul(b, h)),
            f.add(f.mul(a, g), f.mul(b, k)),
            f.add(f.mul(c, e), f.mul(d, h)),
            f.add(f.mul(c, g), f.mul(d, k)),
        ])
    }

    pub fn add(&self, f: &Field, o: &Mat2) -> Mat2 {
        Mat2([0, 1, 2, 3].map(|i| f.add(self.0[i], o.0[i])))
    }

    pub fn sub(&self, f: &Field, o: &Mat2) -> Mat2 {
        Mat2([0, 1, 2, 3].map(|i| f.sub(self.0[i], o.0[i])))
    }

    pub fn scale(&self, f: &Field, z: Elem) -> Mat2 {
        Mat2(self.0.map(|x| f.mul(z, x)))
    }

    pub fn neg(&self, f: &Field) -> Mat2 {
        Mat2(self.0.map(|x| f.neg(x)))
    }

    pub fn det(&self, f: &Field) -> Elem {
        let [a, b, c, d] = self.0;
        f.sub(f.mul(a, d), f.mul(b, c))
    }

    pub fn trace(&self, f: &Field) -> Elem {
        f.add(self.0[0], self.0[3])
    }

    pub fn transpose(&self) -> Mat2 {
        let [a, b, c, d] = self.0;
        Mat2([a, c, b, d])
    }

    pub fn is_invertible(&self, f: &Field) -> bool {
        !self.det(f).is_zero()
    }

    /// Inverse; panics on a singular matrix.
    pub fn inv(&self, f: &Field) -> Mat2 {
        self.checked_inv(f).expect("singular matrix")
    }

    pub fn checked_inv(&self, f: &Field) -> Option<Mat2> {
        let di = f.checked_inv(self.det(f))?;
        let [a, b, c, d] = self.0;
        Some(Mat2([f.mul(d, di), f.neg(f.mul(b, di)), f.neg(f.mul(c, di)), f.mul(a, di)]))
    }

    /// `self · x · self⁻¹`.
    pub fn conj(&self, f: &Field, x: &Mat2) -> Mat2 {
        self.mul(f, x).mul(f, &self.inv(f))
    }

    pub fn is_scalar(&self) -> bool {
        let [a, b, c, d] = self.0;
        b.is_zero() && c.is_zero() && a == d
    }

    pub fn is_diagonal(&self) -> bool {
        self.0[1].is_zero() && self.0[2].is_zero()
    }

    /// Scaled so that the first nonzero entry is 1.
    pub fn normalized(&self, f: &Field) -> Mat2 {
        match self.0.iter().find(|x| !x.is_zero()) {
            Some(&lead) => self.scale(f, f.inv(lead)),
            None => *self,
        }
    }

    /// Frobenius `x ↦ x^{p^k}` applied entrywise.
    pub fn frobenius(&self, f: &Field, k: u32) -> Mat2 {
        Mat2(self.0.map(|x| f.frobenius(x, k)))
    }

    /// The same matrix with entries pushed into level `d` of the tower.
    pub fn embed(&self, tower: &FieldTower, d: u32) -> Result<Mat2, GfError> {
        let mut out = [Elem::ZERO; 4];
        for (o, x) in out.iter_mut().zip(self.0) {
            *o = tower.embed(x, d)?;
        }
        Ok(Mat2(out))
    }

    /// For a monomial matrix, `π` with column `j` supported on row `π(j)`.
    pub fn monomial_permutation(&self) -> Option<[usize; 2]> {
        let [a, b, c, d] = self.0.map(|x| !x.is_zero());
        match (a, b, c, d) {
            (true, false, false, true) => Some([0, 1]),
            (false, true, true, false) => Some([1, 0]),
            _ => None,
        }
    }

    /// Integer coordinates, for reports.
    pub fn to_rows(&self) -> [[u32; 2]; 2] {
        let [a, b, c, d] = self.0;
        [[a.0, b.0], [c.0, d.0]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldTower;

    #[test]
    fn inverse_and_det() {
        let t = FieldTower::build(5, &[1]).unwrap();
        let f = t.base();
        for code in 0..625u32 {
            let m = Mat2([code % 5, code / 5 % 5, code / 25 % 5, code / 125].map(Elem));
            match m.checked_inv(f) {
                Some(i) => {
                    assert_eq!(m.mul(f, &i), Mat2::IDENTITY);
                    assert_eq!(f.mul(m.det(f), i.det(f)), f.one());
                }
                None => assert!(m.det(f).is_zero()),
            }
        }
    }

    #[test]
    fn monomial_detection() {
        let t = FieldTower::build(3, &[1]).unwrap();
        let f = t.base();
        assert_eq!(Mat2::from_ints(f, [0, 1, 1, 0]).monomial_permutation(), Some([1, 0]));
        assert_eq!(Mat2::from_ints(f, [2, 0, 0, 1]).monomial_permutation(), Some([0, 1]));
        assert_eq!(Mat2::from_ints(f, [1, 1, 0, 1]).monomial_permutation(), None);
        assert_eq!(Mat2::from_ints(f, [0, 2, 0, 1]).normalized(f), Mat2::from_ints(f, [0, 1, 0, 2]));
    }
}
