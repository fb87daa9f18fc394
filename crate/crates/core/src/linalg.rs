//! Dense exact rational matrices, sized for rank <= 8 root data.

use std::fmt;
use std::ops::Mul;

use num_traits::{One, Signed, Zero};

use crate::Rat;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatMatrix {
    n: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Rat::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Rat::one();
        }
        m
    }

    /// Row-major construction; panics if `rows` is not square.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix must be square");
            data.extend(row);
        }
        Self { n, data }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rat::from_integer(v)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        self.data.chunks(self.n).map(|c| c.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let row = &self.data[i * self.n..(i + 1) * self.n];
                row.iter().zip(v).fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Leading principal minors, computed by fraction-free elimination on a copy.
    pub fn leading_minors(&self) -> Vec<Rat> {
        let n = self.n;
        (1..=n)
            .map(|k| {
                let mut sub = Self::zeros(k);
                for i in 0..k {
                    for j in 0..k {
                        sub.set(i, j, self.get(i, j));
                    }
                }
                sub.det()
            })
            .collect()
    }

    pub fn det(&self) -> Rat {
        let n = self.n;
        let mut a = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let pivot = a.get(c, c);
            det *= pivot;
            for r in (c + 1)..n {
                let f = a.get(r, c) / pivot;
                if f.is_zero() {
                    continue;
                }
                for k in c..n {
                    let v = a.get(r, k) - f * a.get(c, k);
                    a.set(r, k, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a.get(r, c).is_zero())?;
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let pivot = a.get(c, c);
            for k in 0..n {
                a.set(c, k, a.get(c, k) / pivot);
                inv.set(c, k, inv.get(c, k) / pivot);
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = a.get(r, c);
                if f.is_zero() {
                    continue;
                }
                for k in 0..n {
                    a.set(r, k, a.get(r, k) - f * a.get(c, k));
                    inv.set(r, k, inv.get(r, k) - f * inv.get(c, k));
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.n {
            self.data.swap(a * self.n + k, b * self.n + k);
        }
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;

    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = RatMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.to_string()).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

/// Reduced row echelon nullspace of the `m x n` system `rows * v = 0`.
/// The returned basis has one vector per free column with a 1 in that column,
/// which makes it canonical for a given row space.
pub fn nullspace(rows: &[Vec<Rat>], n: usize) -> Vec<Vec<Rat>> {
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    let m = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pv = a[r][c];
        for k in 0..n {
            a[r][k] /= pv;
        }
        for i in 0..m {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                for k in 0..n {
                    let v = a[r][k];
                    a[i][k] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rat::zero(); n];
            v[fc] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][fc];
            }
            v
        })
        .collect()
}

/// Rank of a set of row vectors.
pub fn rank(rows: &[Vec<Rat>], n: usize) -> usize {
    n - nullspace(rows, n).len()
}

/// Exact `floor(sqrt(x))` for a non-negative rational.
pub fn floor_sqrt(x: Rat) -> i64 {
    assert!(!x.is_negative(), "floor_sqrt of a negative rational");
    let (p, q) = (*x.numer() as i128, *x.denom() as i128);
    // floor(sqrt(p/q)) = floor(isqrt(p*q) / q)
    let s = isqrt(p * q);
    (s / q) as i64
}

fn isqrt(v: i128) -> i128 {
    if v < 2 {
        return v;
    }
    let mut x = (v as f64).sqrt() as i128;
    while x * x > v {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= v {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn inverse_of_b2_gram() {
        let g = RatMatrix::from_int_rows(&[vec![2, -1], vec![-1, 1]]);
        let inv = g.inverse().unwrap();
        assert_eq!(&g * &inv, RatMatrix::identity(2));
        assert_eq!(inv.get(0, 0), r(1, 1));
        assert_eq!(inv.get(1, 1), r(2, 1));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let g = RatMatrix::from_int_rows(&[vec![1, 2], vec![2, 4]]);
        assert!(g.inverse().is_none());
        assert_eq!(g.det(), Rat::zero());
    }

    #[test]
    fn nullspace_is_canonical() {
        let rows = vec![vec![r(0, 1), r(1, 1)]];
        assert_eq!(nullspace(&rows, 2), vec![vec![r(1, 1), r(0, 1)]]);
        let full = vec![vec![r(1, 1), r(0, 1)], vec![r(0, 1), r(1, 1)]];
        assert!(nullspace(&full, 2).is_empty());
    }

    #[test]
    fn floor_sqrt_rational() {
        assert_eq!(floor_sqrt(r(9, 4)), 1);
        assert_eq!(floor_sqrt(r(4, 1)), 2);
        assert_eq!(floor_sqrt(r(26, 25)), 1);
        assert_eq!(floor_sqrt(r(0, 1)), 0);
        assert_eq!(floor_sqrt(r(99, 100)), 0);
    }
}
