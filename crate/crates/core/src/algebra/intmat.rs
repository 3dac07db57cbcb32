use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Result};
use crate::graph::Graph;

/// Square matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    size: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(size: usize) -> Self {
        IntMatrix {
            size,
            entries: vec![BigInt::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = IntMatrix::zeros(size);
        for i in 0..size {
            m.entries[i * size + i] = BigInt::one();
        }
        m
    }

    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> BigInt) -> Self {
        IntMatrix {
            size,
            entries: (0..size * size).map(|k| f(k / size, k % size)).collect(),
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return invalid("matrix rows must form a square");
        }
        Ok(IntMatrix::from_fn(size, |i, j| BigInt::from(rows[i][j])))
    }

    /// `circ_m(a_0, ..., a_{m-1})`: row `i` is the first row rotated right by `i`.
    pub fn circulant(first_row: &[i64]) -> Self {
        let m = first_row.len();
        IntMatrix::from_fn(m, |i, j| BigInt::from(first_row[(j + m - i) % m]))
    }

    pub fn adjacency(g: &Graph) -> Self {
        IntMatrix::from_fn(g.order(), |i, j| BigInt::from(u8::from(g.has_edge(i, j))))
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.size + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.entries[i * self.size + j] = x;
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.size != other.size {
            return invalid("matrix size mismatch in product");
        }
        let n = self.size;
        Ok(IntMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum()
        }))
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.size, |i, j| self.get(j, i).clone())
    }

    /// `P·A·Q` where row `i` of the result is row `rows[i]` of `A` and column `j` is
    /// column `cols[j]`.
    pub fn permuted(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(self.size, |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.size).all(|i| (0..self.size).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.size).map(|i| self.get(i, i).clone()).collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.size;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| self.entries[i * n..(i + 1) * n].to_vec())
            .collect();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        negate = !negate;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        if negate {
            -det
        } else {
            det
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let n = self.size;
        for j in 0..n {
            self.entries.swap(a * n + j, b * n + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let n = self.size;
        for i in 0..n {
            self.entries.swap(i * n + a, i * n + b);
        }
    }

    /// `row[dst] += q * row[src]`.
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        let n = self.size;
        for j in 0..n {
            let delta = q * &self.entries[src * n + j];
            if !delta.is_zero() {
                self.entries[dst * n + j] += delta;
            }
        }
    }

    /// `col[dst] += q * col[src]`.
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        let n = self.size;
        for i in 0..n {
            let delta = q * &self.entries[i * n + src];
            if !delta.is_zero() {
                self.entries[i * n + dst] += delta;
            }
        }
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        let n = self.size;
        for j in 0..n {
            let x = std::mem::take(&mut self.entries[r * n + j]);
            self.entries[r * n + j] = -x;
        }
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_default()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix({})", self.size)?;
        for i in 0..self.size {
            let row: Vec<String> = (0..self.size).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
