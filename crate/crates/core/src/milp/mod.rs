//! Integer programs whose solutions are exactly the `d`-regular graphs with zero
//! weights under a fixed labeling, and their export in CPLEX LP format.
//!
//! `model1` has one parity row per vertex and label coordinate. `model2` packs `t`
//! coordinates into one row by weighting them with powers of a base `M`, so each
//! vertex needs only `ceil(n / t)` rows.

pub mod encoding;
mod lp;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::labeling::{Labeling, Mode};

pub use encoding::{
    check_encoding_lemma, chunk_count, column_counts_from_sum, digits, encode, split_label,
    EncodingSpec, Hypothesis, LemmaVerdict,
};
pub use lp::{parse_lp, render_lp, LpProgram, LpRow, Sense};

/// Largest power for which models are built; the edge count grows as `4^n`.
pub const MAX_MODEL_POWER: u32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Model1,
    /// Coordinates packed `t` at a time.
    Model2 {
        t: u32,
    },
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Model1 => f.write_str("model1"),
            Variant::Model2 { t } => write!(f, "model2 t={t}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    /// `e_u_v - e_v_u = 0`, only in literal models.
    Symmetry,
    Degree,
    Parity,
    Encoded,
}

/// A linear equality `sum coef * var = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    pub kind: RowKind,
    pub terms: Vec<(BigInt, String)>,
    pub rhs: BigInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Integer,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    /// Explicit `0 <= x <= upper` bound, emitted in the `Bounds` section.
    pub upper: Option<BigInt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    pub n: u32,
    pub d: usize,
    pub mode: Mode,
    pub variant: Variant,
    /// Emit both orientations of every edge variable plus symmetry rows.
    pub literal: bool,
}

impl ModelSpec {
    pub fn new(n: u32, d: usize, mode: Mode, variant: Variant) -> Self {
        ModelSpec {
            n,
            d,
            mode,
            variant,
            literal: false,
        }
    }

    pub fn literal(mut self, yes: bool) -> Self {
        self.literal = yes;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub symmetry: usize,
    pub degree: usize,
    pub parity: usize,
    pub encoded: usize,
    pub binaries: usize,
    pub integers: usize,
    pub bounded: usize,
}

impl Census {
    pub fn rows(&self) -> usize {
        self.symmetry + self.degree + self.parity + self.encoded
    }
}

#[derive(Clone, Debug)]
pub struct MilpModel {
    pub spec: ModelSpec,
    /// Digit base of the packed rows (`model2` only).
    pub base: Option<u64>,
    pub variables: Vec<Variable>,
    pub rows: Vec<Row>,
}

/// Base for `model2`. For odd `d >= 3` in open mode this is `d` itself, the
/// classical choice; a column of `d` ones can then carry into the next digit, so
/// solutions of the packed rows must be re-verified. Everywhere else it is one more
/// than the largest possible column count (`d`, or `d + 1` with the vertex's own
/// label, and never below 2), which keeps every column a single digit.
pub fn model2_base(d: usize, mode: Mode) -> u64 {
    match mode {
        Mode::Open if d % 2 == 1 && d >= 3 => d as u64,
        Mode::Open => (d as u64 + 1).max(2),
        Mode::Closed => d as u64 + 2,
    }
}

pub fn edge_var(u: usize, v: usize, literal: bool) -> String {
    if literal || u < v {
        format!("e_{u}_{v}")
    } else {
        format!("e_{v}_{u}")
    }
}

pub fn k_var(v: usize, i: usize) -> String {
    format!("k_{v}_{i}")
}

pub fn build_model(spec: &ModelSpec, labeling: &Labeling) -> Result<MilpModel> {
    let ModelSpec {
        n,
        d,
        mode,
        variant,
        literal,
    } = *spec;
    if n == 0 || n > MAX_MODEL_POWER {
        return invalid(format!(
            "model power must lie in 1..={MAX_MODEL_POWER}, got {n}"
        ));
    }
    let order = 1usize << n;
    if d >= order {
        return invalid(format!("degree {d} impossible on {order} vertices"));
    }
    if labeling.dim() != n || labeling.len() != order || !labeling.is_bijection() {
        return invalid("model needs a bijective labeling of matching size");
    }
    if let Variant::Model2 { t } = variant {
        if t == 0 || t > n {
            return invalid(format!("chunk length {t} outside 1..={n}"));
        }
    }
    let bits: Vec<Vec<u8>> = (0..order).map(|v| labeling.label(v).bits()).collect();
    let e = |u: usize, v: usize| edge_var(u, v, literal);

    let mut variables = Vec::new();
    for u in 0..order {
        for v in 0..order {
            if u != v && (literal || u < v) {
                variables.push(Variable {
                    name: e(u, v),
                    kind: VarKind::Binary,
                    upper: None,
                });
            }
        }
    }

    let mut rows = Vec::new();
    if literal {
        for u in 0..order {
            for v in u + 1..order {
                rows.push(Row {
                    name: format!("sym_{u}_{v}"),
                    kind: RowKind::Symmetry,
                    terms: vec![(BigInt::one(), e(u, v)), (-BigInt::one(), e(v, u))],
                    rhs: BigInt::zero(),
                });
            }
        }
    }
    for u in 0..order {
        rows.push(Row {
            name: format!("deg_{u}"),
            kind: RowKind::Degree,
            terms: (0..order)
                .filter(|&v| v != u)
                .map(|v| (BigInt::one(), e(u, v)))
                .collect(),
            rhs: BigInt::from(d),
        });
    }

    let own = |x: BigInt| {
        if mode == Mode::Closed {
            -x
        } else {
            BigInt::zero()
        }
    };
    let base = match variant {
        Variant::Model1 => {
            for (v, own_bits) in bits.iter().enumerate() {
                for i in 0..n as usize {
                    let mut terms: Vec<(BigInt, String)> = (0..order)
                        .filter(|&u| u != v && bits[u][i] == 1)
                        .map(|u| (BigInt::one(), e(u, v)))
                        .collect();
                    terms.push((BigInt::from(-2), k_var(v, i)));
                    rows.push(Row {
                        name: format!("par_{v}_{i}"),
                        kind: RowKind::Parity,
                        terms,
                        rhs: own(BigInt::from(own_bits[i])),
                    });
                }
            }
            None
        }
        Variant::Model2 { t } => {
            let m = model2_base(d, mode);
            let chunks: Vec<Vec<usize>> = (0..n as usize)
                .collect::<Vec<_>>()
                .chunks(t as usize)
                .map(<[usize]>::to_vec)
                .collect();
            for v in 0..order {
                for (q, idx) in chunks.iter().enumerate() {
                    let weights = EncodingSpec::new(m, idx.len(), 1)?.sequence();
                    let code = |w: usize| -> BigInt {
                        let x: Vec<u8> = idx.iter().map(|&i| bits[w][i]).collect();
                        encode(&weights, &x).expect("chunk matches weights")
                    };
                    let mut terms: Vec<(BigInt, String)> = (0..order)
                        .filter(|&u| u != v)
                        .map(|u| (code(u), e(u, v)))
                        .filter(|(c, _)| !c.is_zero())
                        .collect();
                    for (p, &i) in idx.iter().enumerate() {
                        terms.push((-2 * &weights[p], k_var(v, i)));
                    }
                    rows.push(Row {
                        name: format!("enc_{v}_{q}"),
                        kind: RowKind::Encoded,
                        terms,
                        rhs: own(code(v)),
                    });
                }
            }
            Some(m)
        }
    };

    let upper = base.map(|m| BigInt::from((m - 1) / 2));
    for v in 0..order {
        for i in 0..n as usize {
            variables.push(Variable {
                name: k_var(v, i),
                kind: VarKind::Integer,
                upper: upper.clone(),
            });
        }
    }

    Ok(MilpModel {
        spec: *spec,
        base,
        variables,
        rows,
    })
}

impl MilpModel {
    pub fn census(&self) -> Census {
        let mut c = Census::default();
        for r in &self.rows {
            match r.kind {
                RowKind::Symmetry => c.symmetry += 1,
                RowKind::Degree => c.degree += 1,
                RowKind::Parity => c.parity += 1,
                RowKind::Encoded => c.encoded += 1,
            }
        }
        for v in &self.variables {
            match v.kind {
                VarKind::Binary => c.binaries += 1,
                VarKind::Integer => c.integers += 1,
            }
            c.bounded += usize::from(v.upper.is_some());
        }
        c
    }

    /// Names of rows, bounds or domains that the assignment violates. Variables
    /// missing from the assignment count as violations of their domain.
    pub fn violations(&self, values: &BTreeMap<String, BigInt>) -> Vec<String> {
        let mut out = Vec::new();
        for var in &self.variables {
            let Some(x) = values.get(&var.name) else {
                out.push(format!("{} unassigned", var.name));
                continue;
            };
            let hi = match var.kind {
                VarKind::Binary => Some(BigInt::one()),
                VarKind::Integer => var.upper.clone(),
            };
            if *x < BigInt::zero() || hi.is_some_and(|h| *x > h) {
                out.push(format!("{} out of range", var.name));
            }
        }
        for row in &self.rows {
            let lhs: Option<BigInt> = row
                .terms
                .iter()
                .map(|(c, v)| values.get(v).map(|x| c * x))
                .sum();
            if lhs.as_ref() != Some(&row.rhs) {
                out.push(row.name.clone());
            }
        }
        out
    }
}

/// The variable values a graph induces: edge indicators from the adjacency and each
/// `k_v_i` as half the number of ones in coordinate `i` over the (open or closed)
/// neighbourhood, rounded down.
pub fn assignment_for(
    model: &MilpModel,
    graph: &Graph,
    labeling: &Labeling,
) -> Result<BTreeMap<String, BigInt>> {
    let ModelSpec {
        n, mode, literal, ..
    } = model.spec;
    let order = 1usize << n;
    if graph.order() != order || labeling.len() != order || labeling.dim() != n {
        return Err(Error::OrderMismatch {
            expected: order,
            found: graph.order(),
        });
    }
    let mut values = BTreeMap::new();
    for u in 0..order {
        for v in 0..order {
            if u != v && (literal || u < v) {
                values.insert(
                    edge_var(u, v, literal),
                    BigInt::from(u8::from(graph.has_edge(u, v))),
                );
            }
        }
    }
    for v in 0..order {
        let mut members: Vec<usize> = graph.neighbors(v)?.iter().collect();
        if mode == Mode::Closed {
            members.push(v);
        }
        for i in 0..n as usize {
            let count = members
                .iter()
                .filter(|&&u| labeling.label(u).bit(i as u32) == 1)
                .count();
            values.insert(k_var(v, i), BigInt::from(count / 2));
        }
    }
    Ok(values)
}

impl FromStr for Variant {
    type Err = Error;

    /// `model1`, `model2` (with `t` supplied separately) or `model2:<t>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "model1" => Ok(Variant::Model1),
            Some(("model2", t)) => t
                .parse()
                .map(|t| Variant::Model2 { t })
                .map_err(|_| Error::Parse(format!("bad chunk length '{t}'"))),
            _ => Err(Error::Parse(format!("unknown model variant '{s}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn canonical(n: u32) -> Labeling {
        Labeling::canonical(n).unwrap()
    }

    #[test]
    fn censuses() {
        let m1 = build_model(
            &ModelSpec::new(4, 5, Mode::Open, Variant::Model1),
            &canonical(4),
        )
        .unwrap();
        let c = m1.census();
        assert_eq!((c.degree, c.parity, c.encoded, c.symmetry), (16, 64, 0, 0));
        assert_eq!((c.binaries, c.integers, c.bounded), (120, 64, 0));

        let m2 = build_model(
            &ModelSpec::new(4, 5, Mode::Open, Variant::Model2 { t: 2 }),
            &canonical(4),
        )
        .unwrap();
        let c = m2.census();
        assert_eq!((c.degree, c.parity, c.encoded), (16, 0, 32));
        assert_eq!((c.binaries, c.integers, c.bounded), (120, 64, 64));
        assert_eq!(m2.base, Some(5));

        let lit = build_model(
            &ModelSpec::new(3, 3, Mode::Open, Variant::Model1).literal(true),
            &canonical(3),
        )
        .unwrap();
        let c = lit.census();
        assert_eq!(
            (c.symmetry, c.degree, c.parity, c.binaries),
            (28, 8, 24, 56)
        );
    }

    #[test]
    fn census_formulas() {
        for n in 1..=7u32 {
            let order = 1usize << n;
            let l = canonical(n);
            let c = build_model(&ModelSpec::new(n, 1, Mode::Open, Variant::Model1), &l)
                .unwrap()
                .census();
            assert_eq!((c.degree, c.parity), (order, n as usize * order));
            for t in 1..=n {
                let c = build_model(
                    &ModelSpec::new(n, 1, Mode::Closed, Variant::Model2 { t }),
                    &l,
                )
                .unwrap()
                .census();
                assert_eq!(c.encoded, n.div_ceil(t) as usize * order, "n={n} t={t}");
                assert_eq!(c.bounded, n as usize * order);
            }
        }
    }

    #[test]
    fn model2_coefficients_are_powers_of_the_degree() {
        let m = build_model(
            &ModelSpec::new(4, 5, Mode::Open, Variant::Model2 { t: 3 }),
            &canonical(4),
        )
        .unwrap();
        let row = m.rows.iter().find(|r| r.name == "enc_0_0").unwrap();
        let k: Vec<(i64, &str)> = row
            .terms
            .iter()
            .filter(|(_, v)| v.starts_with('k'))
            .map(|(c, v)| (i64::try_from(c).unwrap(), v.as_str()))
            .collect();
        assert_eq!(k, vec![(-250, "k_0_0"), (-50, "k_0_1"), (-10, "k_0_2")]);
        // vertex 7 = 0111: first chunk 011 encodes as 25 + 5
        assert!(row.terms.contains(&(BigInt::from(30), "e_0_7".to_string())));
        let last = m.rows.iter().find(|r| r.name == "enc_0_1").unwrap();
        assert!(last
            .terms
            .contains(&(BigInt::from(-10), "k_0_3".to_string())));
        assert!(last.terms.contains(&(BigInt::from(5), "e_0_1".to_string())));
    }

    #[test]
    fn catalog_certificates_satisfy_their_models() {
        for e in catalog::list()
            .unwrap()
            .into_iter()
            .filter(|e| e.is_magic())
        {
            let n = e.labeling.dim();
            let d = e.degree.unwrap();
            if n > 5 {
                continue;
            }
            let mut variants = vec![Variant::Model1];
            variants.extend((1..=n).map(|t| Variant::Model2 { t }));
            for variant in variants {
                for literal in [false, true] {
                    let spec = ModelSpec::new(n, d, e.mode, variant).literal(literal);
                    let model = build_model(&spec, &e.labeling).unwrap();
                    let values = assignment_for(&model, &e.graph, &e.labeling).unwrap();
                    assert_eq!(
                        model.violations(&values),
                        Vec::<String>::new(),
                        "{} {variant}",
                        e.id
                    );
                }
            }
        }
    }

    #[test]
    fn non_magic_graph_violates_parity() {
        let e = catalog::load("fig1-k22").unwrap();
        let model = build_model(
            &ModelSpec::new(2, 2, Mode::Open, Variant::Model1),
            &e.labeling,
        )
        .unwrap();
        let values = assignment_for(&model, &e.graph, &e.labeling).unwrap();
        assert!(model
            .violations(&values)
            .iter()
            .any(|r| r.starts_with("par_")));
    }

    #[test]
    fn rejects_bad_parameters() {
        let l = canonical(3);
        assert!(build_model(&ModelSpec::new(3, 8, Mode::Open, Variant::Model1), &l).is_err());
        assert!(build_model(
            &ModelSpec::new(3, 3, Mode::Open, Variant::Model2 { t: 4 }),
            &l
        )
        .is_err());
        assert!(build_model(
            &ModelSpec::new(3, 3, Mode::Open, Variant::Model2 { t: 0 }),
            &l
        )
        .is_err());
        assert!(build_model(&ModelSpec::new(4, 3, Mode::Open, Variant::Model1), &l).is_err());
        assert_eq!(
            "model2:3".parse::<Variant>().unwrap(),
            Variant::Model2 { t: 3 }
        );
        assert!("model3".parse::<Variant>().is_err());
    }
}
