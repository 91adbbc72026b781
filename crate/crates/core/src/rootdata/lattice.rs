//! Square integer matrices acting on column vectors of `Z^n`.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl TryFrom<Vec<Vec<i64>>> for IntMatrix {
    type Error = String;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self, String> {
        IntMatrix::from_rows(&rows).ok_or_else(|| "matrix must be square".to_string())
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.rows()
    }
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IntMatrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(IntMatrix { n, data: rows.iter().flatten().copied().collect() })
    }

    /// The monomial matrix sending `e_j` to `signs[j]·e_{perm[j]}`.
    pub fn signed_permutation(perm: &[usize], signs: &[i64]) -> Self {
        let n = perm.len();
        let mut data = vec![0; n * n];
        for j in 0..n {
            data[perm[j] * n + j] = signs[j];
        }
        IntMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        IntMatrix { n, data }
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j);
            }
        }
        IntMatrix { n, data }
    }

    pub fn scale(&self, c: i64) -> IntMatrix {
        IntMatrix { n: self.n, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        IntMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.n)
    }

    /// Smallest `m ≥ 1` with `self^m = I`, searched up to `bound`.
    pub fn order(&self, bound: u32) -> Option<u32> {
        let mut acc = self.clone();
        for m in 1..=bound {
            if acc.is_identity() {
                return Some(m);
            }
            acc = acc.mul(self);
        }
        None
    }

    /// Rank over the rationals, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let n = self.n;
        let mut a: Vec<Vec<i128>> =
            self.rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| a[r][col] != 0) else {
                continue;
            };
            a.swap(rank, pivot);
            for r in 0..n {
                if r != rank && a[r][col] != 0 {
                    let (x, y) = (a[rank][col], a[r][col]);
                    for c in 0..n {
                        a[r][c] = a[r][c] * x - a[rank][c] * y;
                    }
                    let g = a[r].iter().fold(0i128, |g, &v| gcd(g, v.abs()));
                    if g > 1 {
                        a[r].iter_mut().for_each(|v| *v /= g);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Dimension of the rational fixed space `ker(self − I)`.
    pub fn fixed_space_dim(&self) -> usize {
        self.n - self.sub(&IntMatrix::identity(self.n)).rank()
    }

    /// Determinant (Bareiss).
    pub fn det(&self) -> i64 {
        let n = self.n;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> =
            self.rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                let Some(swap) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                    return 0;
                };
                a.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        (sign * a[n - 1][n - 1]) as i64
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn negate(a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| -x).collect()
}
