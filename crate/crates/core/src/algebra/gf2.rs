use crate::bitset::BitSet;
use crate::error::{invalid, Result};
use crate::graph::Graph;

use super::IntMatrix;

/// Dense matrix over GF(2) with bitset rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    cols: usize,
    rows: Vec<BitSet>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix {
            cols,
            rows: vec![BitSet::new(cols); rows],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Gf2Matrix::zeros(size, size);
        for i in 0..size {
            m.rows[i].insert(i);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Gf2Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.rows[i].insert(j);
                }
            }
        }
        m
    }

    /// Adjacency matrix of `g` reduced mod 2.
    pub fn adjacency(g: &Graph) -> Self {
        Gf2Matrix {
            cols: g.order(),
            rows: (0..g.order()).map(|v| g.row(v).clone()).collect(),
        }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        use num_integer::Integer;
        Gf2Matrix::from_fn(m.size(), m.size(), |i, j| m.get(i, j).is_odd())
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    /// Rank via Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].contains(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.contains(col) {
                    row.symmetric_difference_with(&pivot);
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// Determinant over GF(2): 1 iff the matrix has full rank.
    pub fn determinant(&self) -> Result<u8> {
        if self.nrows() != self.cols {
            return invalid(format!(
                "determinant of non-square {}x{} matrix",
                self.nrows(),
                self.cols
            ));
        }
        Ok(u8::from(self.rank() == self.cols))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{circulant, hypercube};

    #[test]
    fn determinant_examples() {
        assert_eq!(Gf2Matrix::identity(16).determinant().unwrap(), 1);
        let c8 = Gf2Matrix::adjacency(&circulant(8, &[1]).unwrap());
        assert_eq!(c8.determinant().unwrap(), 0);
        let q3 = Gf2Matrix::adjacency(&hypercube(3).unwrap());
        assert_eq!(q3.determinant().unwrap(), 1);
        assert!(Gf2Matrix::zeros(2, 3).determinant().is_err());
    }

    #[test]
    fn rank_of_rectangular() {
        let m = Gf2Matrix::from_fn(3, 5, |i, j| (i + j) % 2 == 0);
        assert_eq!(m.rank(), 2);
        assert_eq!(Gf2Matrix::zeros(4, 4).rank(), 0);
    }
}
