//! Dense linear algebra over a finite field, for the small Lie-algebra
//! computations (dimension ≤ 8).

use crate::gf::{Elem, Field};

pub type Vector = Vec<Elem>;

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(f: &Field, m: &mut [Vector]) -> Vec<usize> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = f.inv(m[row][col]);
        for x in m[row].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let c = m[r][col];
                for k in 0..ncols {
                    let v = f.mul(c, m[row][k]);
                    m[r][k] = f.sub(m[r][k], v);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

/// Basis of `{x : A x = 0}` for `A` given by rows with `ncols` columns.
pub fn kernel(f: &Field, rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![Elem::ZERO; ncols];
            x[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = f.neg(m[r][fc]);
            }
            x
        })
        .collect()
}


/// Coefficients `c` with `Σ c_j basis[j] = v`, if `v` lies in the span of
/// the (independent) basis.
pub fn coordinates(f: &Field, basis: &[Vector], v: &[Elem]) -> Option<Vector> {
    let k = basis.len();
    let n = v.len();
    // augmented n × (k+1) system
    let mut m: Vec<Vector> = (0..n)
        .map(|i| {
            let mut row: Vector = basis.iter().map(|b| b[i]).collect();
            row.push(v[i]);
            row
        })
        .collect();
    let pivots = rref(f, &mut m);
    if pivots.contains(&k) {
        return None;
    }
    let mut c = vec![Elem::ZERO; k];
    for (r, &pc) in pivots.iter().enumerate() {
        c[pc] = m[r][k];
    }
    Some(c)
}

pub fn det(f: &Field, mut m: Vec<Vector>) -> Elem {
    let n = m.len();
    let mut acc = f.one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Elem::ZERO;
        };
        if p != col {
            m.swap(p, col);
            acc = f.neg(acc);
        }
        let piv = m[col][col];
        acc = f.mul(acc, piv);
        let inv = f.inv(piv);
        for r in col + 1..n {
            let c = f.mul(m[r][col], inv);
            if c.is_zero() {
                continue;
            }
            for k in col..n {
                let v = f.mul(c, m[col][k]);
                m[r][k] = f.sub(m[r][k], v);
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldTower;

    #[test]
    fn small_systems() {
        let t = FieldTower::build(5, &[1]).unwrap();
        let f = t.base();
        let e = |v: &[i64]| v.iter().map(|&x| f.from_int(x)).collect::<Vector>();
        let a = vec![e(&[1, 2, 3]), e(&[2, 4, 6])];
        let k = kernel(f, &a, 3);
        assert_eq!(k.len(), 2);
        for x in &k {
            let s = (0..3).fold(f.zero(), |s, i| f.add(s, f.mul(a[0][i], x[i])));
            assert!(s.is_zero());
        }
        assert_eq!(det(f, vec![e(&[1, 2]), e(&[3, 4])]), f.from_int(-2));
        assert_eq!(det(f, vec![e(&[0, 1]), e(&[1, 0])]), f.from_int(-1));
        let basis = vec![e(&[1, 0, 1]), e(&[0, 1, 1])];
        assert_eq!(coordinates(f, &basis, &e(&[2, 3, 0])), Some(e(&[2, 3])));
        assert_eq!(coordinates(f, &basis, &e(&[1, 0, 0])), None);
    }
}
