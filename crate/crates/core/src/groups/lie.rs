//! `Lie(G)^θ` and the determinant of `Ad(t)` on it.

use super::linalg::{self, Vector};
use super::{Element, GroupError, GroupSpec, Involution, Mat2, Result};
use crate::gf::{Elem, Field};
use crate::sign::Sign;

fn to_vector(x: &[Mat2; 2], factors: usize) -> Vector {
    x[..factors].iter().flat_map(|m| m.entries()).collect()
}

fn from_vector(v: &[Elem]) -> [Mat2; 2] {
    let mut out = [Mat2::ZERO; 2];
    for (i, chunk) in v.chunks(4).enumerate() {
        out[i] = Mat2([chunk[0], chunk[1], chunk[2], chunk[3]]);
    }
    out
}

/// A basis of `{X : dθ(X) = X}`, as flattened matrices.
#[derive(Clone, Debug)]
pub struct LieFixedSpace {
    factors: usize,
    basis: Vec<Vector>,
    minus_dim: usize,
}

impl LieFixedSpace {
    pub fn new(f: &Field, theta: &Involution, factors: usize) -> Self {
        let n = 4 * factors;
        // columns dθ(E_c)
        let cols: Vec<Vector> = (0..n)
            .map(|c| {
                let mut e = vec![Elem::ZERO; n];
                e[c] = f.one();
                to_vector(&theta.differential(f, &from_vector(&e)), factors)
            })
            .collect();
        let shifted = |sign: Elem| -> Vec<Vector> {
            (0..n)
                .map(|r| (0..n).map(|c| if r == c { f.sub(cols[c][r], sign) } else { cols[c][r] }).collect())
                .collect()
        };
        let basis = linalg::kernel(f, &shifted(f.one()), n);
        let minus_dim = linalg::kernel(f, &shifted(f.minus_one()), n).len();
        LieFixedSpace { factors, basis, minus_dim }
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dimension of the `−1`-eigenspace of `dθ`.
    pub fn minus_dim(&self) -> usize {
        self.minus_dim
    }

    pub fn ambient_dim(&self) -> usize {
        4 * self.factors
    }

    /// `det(Ad(t))` on the span, for `t` normalizing it.
    pub fn det_ad(&self, f: &Field, t: &Element) -> Result<Elem> {
        let t_inv = Element([t.0[0].inv(f), t.0[1].inv(f)]);
        let mut columns = Vec::with_capacity(self.dim());
        for b in &self.basis {
            let x = from_vector(b);
            let mut y = [Mat2::ZERO; 2];
            for i in 0..self.factors {
                y[i] = t.0[i].mul(f, &x[i]).mul(f, &t_inv.0[i]);
            }
            let c = linalg::coordinates(f, &self.basis, &to_vector(&y, self.factors))
                .ok_or(GroupError::NotThetaFixed)?;
            columns.push(c);
        }
        // det of the transpose equals det
        Ok(linalg::det(f, columns))
    }
}

/// `det(Ad(t) | Lie(G)^θ)` as a sign, for `t ∈ G^θ(F_q)`.
pub fn lie_fixed_det(spec: &GroupSpec, theta: &Involution, space: &LieFixedSpace, t: &Element) -> Result<Sign> {
    let f = spec.field();
    if !theta.is_fixed(spec, t) {
        return Err(GroupError::NotThetaFixed);
    }
    let d = space.det_ad(f, t)?;
    if d == f.one() {
        Ok(Sign::Plus)
    } else if d == f.minus_one() {
        Ok(Sign::Minus)
    } else {
        Err(GroupError::DetNotSign)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Bounds, GroupKind, Seed};
    use super::*;

    #[test]
    fn dimensions() {
        for (kind, q) in [(GroupKind::Gl2, 3), (GroupKind::Gl2, 5), (GroupKind::Gl2XGl2, 3)] {
            let g = GroupSpec::new(kind, q, &Bounds::default()).unwrap();
            for seed in Seed::named_for(kind) {
                let th = Involution::from_seed(&g, seed).unwrap();
                let s = LieFixedSpace::new(g.field(), &th, g.factors());
                assert_eq!(s.dim() + s.minus_dim(), s.ambient_dim());
                for b in s.basis() {
                    let x = from_vector(b);
                    assert_eq!(to_vector(&th.differential(g.field(), &x), g.factors()), *b);
                }
            }
        }
        let g = GroupSpec::new(GroupKind::Gl2, 3, &Bounds::default()).unwrap();
        let diag = Involution::from_seed(&g, Seed::Diag).unwrap();
        assert_eq!(LieFixedSpace::new(g.field(), &diag, 1).dim(), 2);
        let ti = Involution::from_seed(&g, Seed::TransposeInverse).unwrap();
        assert_eq!(LieFixedSpace::new(g.field(), &ti, 1).dim(), 1);
        let g = GroupSpec::new(GroupKind::Gl2XGl2, 3, &Bounds::default()).unwrap();
        let swap = Involution::from_seed(&g, Seed::Swap).unwrap();
        assert_eq!(LieFixedSpace::new(g.field(), &swap, 2).dim(), 4);
    }

    #[test]
    fn det_examples() {
        let g = GroupSpec::new(GroupKind::Gl2, 5, &Bounds::default()).unwrap();
        let f = g.field();
        let ti = Involution::from_seed(&g, Seed::TransposeInverse).unwrap();
        let s = LieFixedSpace::new(f, &ti, 1);
        assert_eq!(lie_fixed_det(&g, &ti, &s, &Element::IDENTITY).unwrap(), Sign::Plus);
        let t = Element::gl2(Mat2::from_ints(f, [1, 0, 0, -1]));
        assert_eq!(lie_fixed_det(&g, &ti, &s, &t).unwrap(), Sign::Minus);
        let z = Element::gl2(Mat2::from_ints(f, [-1, 0, 0, -1]));
        assert_eq!(lie_fixed_det(&g, &ti, &s, &z).unwrap(), Sign::Plus);
        let diag = Involution::from_seed(&g, Seed::Diag).unwrap();
        let s = LieFixedSpace::new(f, &diag, 1);
        for z in f.units() {
            let t = Element::gl2(Mat2::scalar(z));
            assert_eq!(lie_fixed_det(&g, &diag, &s, &t).unwrap(), Sign::Plus);
        }
        let not_fixed = Element::gl2(Mat2::from_ints(f, [1, 1, 0, 1]));
        assert_eq!(lie_fixed_det(&g, &diag, &s, &not_fixed).unwrap_err(), GroupError::NotThetaFixed);
    }
}
