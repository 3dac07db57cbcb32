use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `L·M·R = S` with `L`, `R` unimodular and `S` diagonal with a divisibility chain.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub left: IntMatrix,
    pub smith: IntMatrix,
    pub right: IntMatrix,
}

impl SnfDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        self.smith.diagonal()
    }

    /// Product of the diagonal, i.e. `|det M|`.
    pub fn abs_det(&self) -> BigInt {
        self.diagonal().iter().product()
    }

    /// Checks every decomposition invariant against the source matrix.
    pub fn check(&self, source: &IntMatrix) -> Result<(), String> {
        let unit = |d: BigInt| d.abs().is_one();
        if !unit(self.left.determinant()) {
            return Err("left factor is not unimodular".into());
        }
        if !unit(self.right.determinant()) {
            return Err("right factor is not unimodular".into());
        }
        if !self.smith.is_diagonal() {
            return Err("smith form is not diagonal".into());
        }
        let diag = self.diagonal();
        if diag.iter().any(|d| d.is_negative()) {
            return Err("negative diagonal entry".into());
        }
        for w in diag.windows(2) {
            let ok = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            };
            if !ok {
                return Err(format!("{} does not divide {}", w[0], w[1]));
            }
        }
        let lmr = self
            .left
            .mul(source)
            .and_then(|lm| lm.mul(&self.right))
            .map_err(|e| e.to_string())?;
        if lmr != self.smith {
            return Err("L·M·R differs from S".into());
        }
        if self.abs_det() != source.determinant().abs() {
            return Err("|det| not preserved".into());
        }
        Ok(())
    }
}

/// Smith normal form by repeated pivot-to-corner reduction. The pivot is the entry of
/// least nonzero absolute value in the trailing block (ties: lowest row, then column).
pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let n = m.size();
    let mut a = m.clone();
    let mut left = IntMatrix::identity(n);
    let mut right = IntMatrix::identity(n);

    'outer: for t in 0..n {
        loop {
            let Some((pi, pj)) = min_pivot(&a, t) else {
                break 'outer;
            };
            a.swap_rows(t, pi);
            left.swap_rows(t, pi);
            a.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let pivot = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..n {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -a.get(i, t).div_floor(&pivot);
                a.add_row_multiple(i, t, &q);
                left.add_row_multiple(i, t, &q);
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -a.get(t, j).div_floor(&pivot);
                a.add_col_multiple(j, t, &q);
                right.add_col_multiple(j, t, &q);
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let offender =
                (t + 1..n).find(|&i| (t + 1..n).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    a.add_row_multiple(t, i, &BigInt::one());
                    left.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
    }

    SnfDecomposition {
        left,
        smith: a,
        right,
    }
}

fn min_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let n = a.size();
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..n {
        for j in t..n {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(b, _, _)| ax < *b) {
                best = Some((ax, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_i64(m: &IntMatrix) -> Vec<i64> {
        let s = smith_normal_form(m);
        s.check(m).unwrap();
        s.diagonal()
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn textbook_example() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap();
        assert_eq!(diag_i64(&m), vec![2, 6, 12]);
    }

    #[test]
    fn singular_and_zero() {
        assert_eq!(diag_i64(&IntMatrix::zeros(3)), vec![0, 0, 0]);
        let m = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(diag_i64(&m), vec![1, 0]);
        let m = IntMatrix::from_rows(&[vec![0, -3], vec![5, 0]]).unwrap();
        assert_eq!(diag_i64(&m), vec![1, 15]);
    }
}
