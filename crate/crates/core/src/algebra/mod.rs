//! Exact linear algebra on adjacency matrices: GF(2) determinants for the parity
//! obstruction, Bareiss determinants and Smith normal forms over the integers.
//!
//! An open XOR-magic labeling makes the first label coordinates a nonzero kernel
//! vector of `A(G)` over GF(2), so an odd determinant rules the labeling out.

mod gf2;
mod intmat;
mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use serde::Serialize;

pub use gf2::Gf2Matrix;
pub use intmat::IntMatrix;
pub use snf::{smith_normal_form, SnfDecomposition};

use crate::graph::Graph;

pub fn adjacency_matrix(g: &Graph) -> IntMatrix {
    IntMatrix::adjacency(g)
}

pub fn circulant_matrix(first_row: &[i64]) -> IntMatrix {
    IntMatrix::circulant(first_row)
}

pub fn int_determinant(a: &IntMatrix) -> BigInt {
    a.determinant()
}

pub fn gf2_determinant(a: &Gf2Matrix) -> crate::Result<u8> {
    a.determinant()
}

pub fn gf2_rank(a: &Gf2Matrix) -> usize {
    a.rank()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NecessaryCondition {
    /// `det A(G)` is even; the test says nothing further.
    Pass,
    /// `det A(G)` is odd; no open XOR-magic labeling exists.
    Fail,
}

impl fmt::Display for NecessaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NecessaryCondition::Pass => "pass",
            NecessaryCondition::Fail => "fail",
        })
    }
}

pub fn necessary_condition_open(g: &Graph) -> NecessaryCondition {
    match Gf2Matrix::adjacency(g).determinant() {
        Ok(0) => NecessaryCondition::Pass,
        _ => NecessaryCondition::Fail,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SnfPrediction {
    NotOpenMagic,
    Inconclusive,
}

impl fmt::Display for SnfPrediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SnfPrediction::NotOpenMagic => "not_open_magic",
            SnfPrediction::Inconclusive => "inconclusive",
        })
    }
}

/// Same obstruction routed through the Smith normal form: the diagonal product is
/// `|det A(G)|`.
pub fn snf_predicts_non_magic(g: &Graph) -> SnfPrediction {
    let snf = smith_normal_form(&adjacency_matrix(g));
    if snf.abs_det().is_odd() {
        SnfPrediction::NotOpenMagic
    } else {
        SnfPrediction::Inconclusive
    }
}

/// Everything the `algebra` subcommand prints for one graph.
#[derive(Clone, Debug, Serialize)]
pub struct AlgebraReport {
    pub order: usize,
    #[serde(serialize_with = "as_string")]
    pub det: BigInt,
    #[serde(serialize_with = "as_string")]
    pub abs_det: BigInt,
    pub det_mod2: u8,
    pub gf2_rank: usize,
    #[serde(serialize_with = "as_strings")]
    pub snf_diagonal: Vec<BigInt>,
    pub necessary_condition_open: NecessaryCondition,
    pub snf_prediction: SnfPrediction,
}

fn as_string<S: serde::Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn as_strings<S: serde::Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

pub fn analyze(g: &Graph) -> AlgebraReport {
    let a = adjacency_matrix(g);
    let det = a.determinant();
    let gf2 = Gf2Matrix::adjacency(g);
    let snf = smith_normal_form(&a);
    let snf_prediction = if snf.abs_det().is_odd() {
        SnfPrediction::NotOpenMagic
    } else {
        SnfPrediction::Inconclusive
    };
    AlgebraReport {
        order: g.order(),
        abs_det: det.abs(),
        det_mod2: gf2.determinant().expect("adjacency is square"),
        gf2_rank: gf2.rank(),
        det,
        snf_diagonal: snf.diagonal(),
        necessary_condition_open: necessary_condition_open(g),
        snf_prediction,
    }
}

impl fmt::Display for AlgebraReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let diag: Vec<String> = self.snf_diagonal.iter().map(|d| d.to_string()).collect();
        writeln!(f, "order: {}", self.order)?;
        writeln!(f, "|det|: {}", self.abs_det)?;
        writeln!(f, "det mod 2: {}", self.det_mod2)?;
        writeln!(f, "gf2 rank: {}", self.gf2_rank)?;
        writeln!(f, "snf diagonal: {}", diag.join(" "))?;
        writeln!(
            f,
            "necessary condition (open): {}",
            self.necessary_condition_open
        )?;
        write!(f, "snf prediction: {}", self.snf_prediction)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::families::{
        andrasfai, circulant, complement_power_of_cycle, hypercube, mobius_ladder, CirculantSpec,
    };

    fn abs_det(g: &Graph) -> BigInt {
        int_determinant(&adjacency_matrix(g)).abs()
    }

    #[test]
    fn adjacency_of_circulants() {
        let c4 = circulant(4, &[1]).unwrap();
        assert_eq!(adjacency_matrix(&c4), circulant_matrix(&[0, 1, 0, 1]));
        let l8 = circulant(8, &[1, 4]).unwrap();
        assert_eq!(
            adjacency_matrix(&l8),
            circulant_matrix(&[0, 1, 0, 0, 1, 0, 0, 1])
        );
        let spec = CirculantSpec::new(16, &[1, 6, 8]).unwrap();
        let row: Vec<i64> = spec.first_row().into_iter().map(i64::from).collect();
        assert_eq!(
            adjacency_matrix(&circulant(16, &[1, 6, 8]).unwrap()),
            circulant_matrix(&row)
        );
    }

    #[test]
    fn leading_ones_circulant() {
        for r in 1..=3 {
            let mut row = vec![0i64; 16];
            row[..2 * r + 1].fill(1);
            assert_eq!(
                circulant_matrix(&row).determinant(),
                BigInt::from(2 * r + 1)
            );
        }
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(
            abs_det(&circulant(16, &[6, 7, 8]).unwrap()),
            BigInt::from(5)
        );
        assert_eq!(abs_det(&mobius_ladder(8).unwrap()), BigInt::from(3));
        assert_eq!(abs_det(&circulant(8, &[1]).unwrap()), BigInt::from(0));
        // Q3 has eigenvalues 3, 1 (x3), -1 (x3), -3
        assert_eq!(abs_det(&hypercube(3).unwrap()), BigInt::from(9));
    }

    #[test]
    fn necessary_condition_examples() {
        assert_eq!(
            necessary_condition_open(&hypercube(3).unwrap()),
            NecessaryCondition::Fail
        );
        assert_eq!(
            necessary_condition_open(&circulant(8, &[1]).unwrap()),
            NecessaryCondition::Pass
        );
        let d5 = catalog::load("fig4-d5").unwrap();
        assert_eq!(
            necessary_condition_open(&d5.graph),
            NecessaryCondition::Pass
        );
    }

    #[test]
    fn snf_examples() {
        let diag = |g: &Graph| -> Vec<BigInt> {
            let a = adjacency_matrix(g);
            let s = smith_normal_form(&a);
            s.check(&a).unwrap();
            s.diagonal()
        };
        let ones = |k: usize, last: i64| -> Vec<BigInt> {
            let mut v = vec![BigInt::from(1); k - 1];
            v.push(BigInt::from(last));
            v
        };
        assert_eq!(diag(&circulant(8, &[1]).unwrap().complement()), ones(8, 5));
        assert_eq!(
            diag(&complement_power_of_cycle(16, 3).unwrap()),
            ones(16, 9)
        );
        assert_eq!(diag(&mobius_ladder(8).unwrap()), ones(8, 3));
    }

    #[test]
    fn snf_predictions() {
        let cc16 = circulant(16, &[1]).unwrap().complement();
        assert_eq!(snf_predicts_non_magic(&cc16), SnfPrediction::NotOpenMagic);
        assert_eq!(abs_det(&cc16), BigInt::from(13));
        let and3 = andrasfai(3).unwrap();
        assert_eq!(and3.order(), 8);
        assert_eq!(abs_det(&and3), BigInt::from(3));
        assert_eq!(snf_predicts_non_magic(&and3), SnfPrediction::NotOpenMagic);
        assert_eq!(
            snf_predicts_non_magic(&circulant(8, &[1]).unwrap()),
            SnfPrediction::Inconclusive
        );
    }

    #[test]
    fn report_serializes_big_integers_as_strings() {
        let r = analyze(&mobius_ladder(8).unwrap());
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["abs_det"], "3");
        assert_eq!(v["det_mod2"], 1);
        assert_eq!(v["necessary_condition_open"], "fail");
        assert!(r.to_string().contains("snf diagonal: 1 1 1 1 1 1 1 3"));
    }
}
