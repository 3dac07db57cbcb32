//! Elements of (Z₂)ⁿ, vertex labelings, neighbourhood weights and XOR-magic
//! verification, plus the constructions that carry labelings across complements,
//! circulant translations and graph products.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::families::{cartesian_product, strong_product, CirculantSpec};
use crate::graph::Graph;

/// Largest supported dimension n (graphs of order up to 2²⁰).
pub const MAX_POWER: u32 = 20;

/// An element of (Z₂)ⁿ stored as an integer whose binary expansion, most
/// significant bit first, is the coordinate sequence.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitLabel {
    n: u32,
    value: u32,
}

impl BitLabel {
    pub fn new(n: u32, value: u32) -> Result<Self> {
        if n == 0 || n > MAX_POWER {
            return invalid(format!("label dimension {n} out of range [1, {MAX_POWER}]"));
        }
        if value >> n != 0 {
            return Err(Error::InvalidLabeling(format!(
                "value {value} does not fit in {n} bits"
            )));
        }
        Ok(BitLabel { n, value })
    }

    pub fn zero(n: u32) -> Result<Self> {
        BitLabel::new(n, 0)
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut value = 0u32;
        for &b in bits {
            if b > 1 {
                return Err(Error::InvalidLabeling(format!("bit value {b} is not 0/1")));
            }
            value = value << 1 | u32::from(b);
        }
        BitLabel::new(bits.len() as u32, value)
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn value(&self) -> u32 {
        self.value
    }

    /// Coordinate `i` (0-based, from the left).
    #[inline]
    pub fn bit(&self, i: u32) -> u8 {
        (self.value >> (self.n - 1 - i) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.n).map(|i| self.bit(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Concatenation `self ∥ other`.
    pub fn concat(&self, other: &BitLabel) -> Result<BitLabel> {
        BitLabel::new(self.n + other.n, self.value << other.n | other.value)
    }
}

impl std::ops::BitXor for BitLabel {
    type Output = BitLabel;

    fn bitxor(self, rhs: BitLabel) -> BitLabel {
        assert_eq!(self.n, rhs.n, "adding labels of different dimension");
        BitLabel {
            n: self.n,
            value: self.value ^ rhs.value,
        }
    }
}

impl fmt::Display for BitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.value, width = self.n as usize)
    }
}

impl fmt::Debug for BitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitLabel({self})")
    }
}

impl FromStr for BitLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidLabeling(format!("bad bitstring `{s}`"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        BitLabel::from_bits(&bits)
    }
}

/// Neighbourhood used for weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Open,
    Closed,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Open => "open",
            Mode::Closed => "closed",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open" => Ok(Mode::Open),
            "closed" => Ok(Mode::Closed),
            _ => Err(Error::Parse(format!("mode must be open|closed, got `{s}`"))),
        }
    }
}

/// The two families the constructions target: odd-regular open and even-regular
/// closed XOR-magic graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    OpenOdd,
    ClosedEven,
}

impl Parity {
    pub fn mode(self) -> Mode {
        match self {
            Parity::OpenOdd => Mode::Open,
            Parity::ClosedEven => Mode::Closed,
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::OpenOdd => Parity::ClosedEven,
            Parity::ClosedEven => Parity::OpenOdd,
        }
    }

    pub fn admits_degree(self, d: usize) -> bool {
        match self {
            Parity::OpenOdd => d % 2 == 1,
            Parity::ClosedEven => d.is_multiple_of(2),
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::OpenOdd => "open-odd",
            Parity::ClosedEven => "closed-even",
        })
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open-odd" => Ok(Parity::OpenOdd),
            "closed-even" => Ok(Parity::ClosedEven),
            _ => Err(Error::Parse(format!(
                "parity must be open-odd|closed-even, got `{s}`"
            ))),
        }
    }
}

/// Assignment of an n-bit label to each vertex.
///
/// [`Labeling::new`] insists on a bijection onto (Z₂)ⁿ. [`Labeling::raw`] only
/// checks widths, so that files with repeated labels can still be loaded and
/// reported by the verifiers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Labeling {
    n: u32,
    labels: Vec<u32>,
}

impl Labeling {
    pub fn raw(n: u32, labels: Vec<u32>) -> Result<Self> {
        if n == 0 || n > MAX_POWER {
            return invalid(format!("label dimension {n} out of range [1, {MAX_POWER}]"));
        }
        if let Some((v, &x)) = labels.iter().enumerate().find(|(_, &x)| x >> n != 0) {
            return Err(Error::InvalidLabeling(format!(
                "label {x} of vertex {v} does not fit in {n} bits"
            )));
        }
        Ok(Labeling { n, labels })
    }

    pub fn new(n: u32, labels: Vec<u32>) -> Result<Self> {
        let l = Labeling::raw(n, labels)?;
        if l.labels.len() != 1 << n {
            return Err(Error::InvalidLabeling(format!(
                "{} labels given for (Z2)^{n}",
                l.labels.len()
            )));
        }
        if let Some(v) = l.first_duplicate() {
            return Err(Error::InvalidLabeling(format!(
                "label of vertex {v} repeats an earlier label"
            )));
        }
        Ok(l)
    }

    /// Vertex `i` receives the big-endian binary expansion of `i`.
    pub fn canonical(n: u32) -> Result<Self> {
        Labeling::new(n, (0..1u32 << n.min(MAX_POWER)).collect())
    }

    pub fn from_labels(labels: &[BitLabel]) -> Result<Self> {
        let n = labels
            .first()
            .map(BitLabel::dim)
            .ok_or_else(|| Error::InvalidLabeling("empty labeling".into()))?;
        if labels.iter().any(|l| l.dim() != n) {
            return Err(Error::InvalidLabeling("labels of mixed dimension".into()));
        }
        Labeling::new(n, labels.iter().map(BitLabel::value).collect())
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn value(&self, v: usize) -> u32 {
        self.labels[v]
    }

    pub fn values(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> BitLabel {
        BitLabel {
            n: self.n,
            value: self.labels[v],
        }
    }

    /// First vertex whose label already appeared at a smaller vertex.
    pub fn first_duplicate(&self) -> Option<usize> {
        let mut seen = vec![false; 1 << self.n];
        self.labels
            .iter()
            .position(|&x| std::mem::replace(&mut seen[x as usize], true))
    }

    pub fn is_bijection(&self) -> bool {
        self.labels.len() == 1 << self.n && self.first_duplicate().is_none()
    }

    /// `inverse()[x]` is the vertex carrying label `x`. Only meaningful for bijections.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![usize::MAX; 1 << self.n];
        for (v, &x) in self.labels.iter().enumerate() {
            inv[x as usize] = v;
        }
        inv
    }

    /// Labeling of the relabeled graph `f(G)`: vertex `f(v)` keeps the label of `v`.
    pub fn permuted(&self, f: &crate::graph::VertexMap) -> Labeling {
        let mut labels = vec![0; self.labels.len()];
        for (v, &x) in self.labels.iter().enumerate() {
            labels[f.apply(v)] = x;
        }
        Labeling { n: self.n, labels }
    }

    pub fn to_json(&self) -> LabelingJson {
        LabelingJson {
            n: self.n,
            labels: (0..self.len()).map(|v| self.label(v).to_string()).collect(),
        }
    }

    pub fn from_json(json: &LabelingJson) -> Result<Self> {
        let values = json
            .labels
            .iter()
            .map(|s| {
                let l: BitLabel = s.parse()?;
                if l.dim() != json.n {
                    return Err(Error::InvalidLabeling(format!(
                        "bitstring `{s}` does not have {} bits",
                        json.n
                    )));
                }
                Ok(l.value())
            })
            .collect::<Result<Vec<_>>>()?;
        Labeling::raw(json.n, values)
    }
}

impl fmt::Debug for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.len()).map(|v| self.label(v)))
            .finish()
    }
}

/// Serialized labeling: `{"n": n, "labels": ["0101", ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelingJson {
    pub n: u32,
    pub labels: Vec<String>,
}

fn check_order(g: &Graph, l: &Labeling) -> Result<()> {
    let expected = 1usize << l.dim();
    if g.order() != expected || l.len() != expected {
        return Err(Error::OrderMismatch {
            expected,
            found: if g.order() != expected {
                g.order()
            } else {
                l.len()
            },
        });
    }
    Ok(())
}

fn raw_open_weight(g: &Graph, l: &Labeling, v: usize) -> u32 {
    g.row(v).iter().fold(0, |acc, u| acc ^ l.value(u))
}

/// XOR of the labels over N(v).
pub fn open_weight(g: &Graph, l: &Labeling, v: usize) -> Result<BitLabel> {
    check_order(g, l)?;
    g.neighbors(v)?;
    Ok(BitLabel {
        n: l.dim(),
        value: raw_open_weight(g, l, v),
    })
}

/// XOR of the labels over N[v].
pub fn closed_weight(g: &Graph, l: &Labeling, v: usize) -> Result<BitLabel> {
    Ok(open_weight(g, l, v)? ^ l.label(v))
}

pub fn weight(g: &Graph, l: &Labeling, v: usize, mode: Mode) -> Result<BitLabel> {
    match mode {
        Mode::Open => open_weight(g, l, v),
        Mode::Closed => closed_weight(g, l, v),
    }
}

/// Outcome of an XOR-magic check. Conditions are tested in the order
/// order → bijection → connectivity → weights, and the first failure is reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Magic,
    WrongOrder {
        order: usize,
        labels: usize,
        dim: u32,
    },
    NotBijection {
        vertex: usize,
    },
    NotConnected {
        components: usize,
    },
    NonzeroWeight {
        vertex: usize,
        weight: BitLabel,
    },
}

impl Verdict {
    pub fn is_magic(&self) -> bool {
        matches!(self, Verdict::Magic)
    }

    pub fn code(&self) -> &'static str {
        match self {
            Verdict::Magic => "magic",
            Verdict::WrongOrder { .. } => "wrong_order",
            Verdict::NotBijection { .. } => "not_bijection",
            Verdict::NotConnected { .. } => "not_connected",
            Verdict::NonzeroWeight { .. } => "nonzero_weight",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Magic => f.write_str("magic"),
            Verdict::WrongOrder { order, labels, dim } => write!(
                f,
                "wrong_order: graph order {order}, {labels} labels, expected 2^{dim}"
            ),
            Verdict::NotBijection { vertex } => {
                write!(f, "not_bijection: vertex {vertex} repeats a label")
            }
            Verdict::NotConnected { components } => {
                write!(f, "not_connected: {components} components")
            }
            Verdict::NonzeroWeight { vertex, weight } => {
                write!(f, "nonzero_weight: vertex {vertex} has weight {weight}")
            }
        }
    }
}

/// Checks whether `l` is an open or closed XOR-magic labeling of `g`.
pub fn verify(g: &Graph, l: &Labeling, mode: Mode) -> Verdict {
    let expected = 1usize << l.dim();
    if g.order() != expected || l.len() != expected {
        return Verdict::WrongOrder {
            order: g.order(),
            labels: l.len(),
            dim: l.dim(),
        };
    }
    if let Some(vertex) = l.first_duplicate() {
        return Verdict::NotBijection { vertex };
    }
    let components = g.component_count();
    if components != 1 {
        return Verdict::NotConnected { components };
    }
    if let Some(v) = first_nonzero_weight(g, l, mode) {
        let w = weight(g, l, v, mode).expect("order checked above");
        return Verdict::NonzeroWeight {
            vertex: v,
            weight: w,
        };
    }
    Verdict::Magic
}

/// First vertex whose weight is nonzero, ignoring connectivity. Assumes matching orders.
pub fn first_nonzero_weight(g: &Graph, l: &Labeling, mode: Mode) -> Option<usize> {
    (0..g.order()).find(|&v| {
        let w = raw_open_weight(g, l, v);
        match mode {
            Mode::Open => w != 0,
            Mode::Closed => w != l.value(v),
        }
    })
}

pub fn verify_open_xor_magic(g: &Graph, l: &Labeling) -> Verdict {
    verify(g, l, Mode::Open)
}

pub fn verify_closed_xor_magic(g: &Graph, l: &Labeling) -> Verdict {
    verify(g, l, Mode::Closed)
}

/// Pairs the complement with the unchanged labeling. Open weights in `g` and closed
/// weights in the complement differ by the XOR of all of (Z₂)ⁿ, which vanishes for n ≥ 2.
pub fn complement_transport(g: &Graph, l: &Labeling) -> Result<(Graph, Labeling)> {
    if l.dim() < 2 {
        return invalid("complement transport needs n >= 2");
    }
    check_order(g, l)?;
    if !l.is_bijection() {
        return Err(Error::InvalidLabeling("labeling is not a bijection".into()));
    }
    Ok((g.complement(), l.clone()))
}

/// For `m = 2ⁿ` and `m/2 ∈ S`, returns `S' = {m/2 - s : s ∈ S ∖ {m/2}}`. With the same
/// labeling, the open weight of `x_i` in `C_m(S)` equals the closed weight of
/// `x_{i+m/2}` in `C_m(S')`.
pub fn circulant_open_closed_translate(spec: &CirculantSpec) -> Result<CirculantSpec> {
    let m = spec.order();
    if !m.is_power_of_two() || m < 4 {
        return invalid(format!("translation needs m = 2^n with n > 1, got {m}"));
    }
    let half = m / 2;
    if !spec.distances().contains(&half) {
        return invalid(format!("m/2 = {half} is not in the connection set"));
    }
    let raw: Vec<i64> = spec
        .distances()
        .iter()
        .filter(|&&s| s != half)
        .map(|&s| (half - s) as i64)
        .collect();
    CirculantSpec::new(m, &raw)
}

/// Concatenation labeling `(u, v) ↦ ℓ_g(u) ∥ ℓ_h(v)` on the row-major product vertex set.
pub fn product_labeling(g: &Graph, lg: &Labeling, h: &Graph, lh: &Labeling) -> Result<Labeling> {
    check_order(g, lg)?;
    check_order(h, lh)?;
    let (a, b) = (lg.dim(), lh.dim());
    if a + b > MAX_POWER {
        return invalid(format!("product dimension {} exceeds {MAX_POWER}", a + b));
    }
    let labels = lg
        .values()
        .iter()
        .flat_map(|&x| lh.values().iter().map(move |&y| x << b | y))
        .collect();
    Labeling::new(a + b, labels)
}

/// `G □ H` with the concatenation labeling.
pub fn cartesian_with_labeling(
    g: &Graph,
    lg: &Labeling,
    h: &Graph,
    lh: &Labeling,
) -> Result<(Graph, Labeling)> {
    let l = product_labeling(g, lg, h, lh)?;
    Ok((cartesian_product(g, h), l))
}

/// `G ⊠ H` with the concatenation labeling.
pub fn strong_with_labeling(
    g: &Graph,
    lg: &Labeling,
    h: &Graph,
    lh: &Labeling,
) -> Result<(Graph, Labeling)> {
    let l = product_labeling(g, lg, h, lh)?;
    Ok((strong_product(g, h), l))
}

/// Builds an XOR-magic graph of power `n` with the requested parity.
///
/// Powers 4 to 7 come from base certificates; larger powers take the closed-even
/// graph of power `n - 4` and multiply it (Cartesian) with the power-4 base of the
/// requested parity.
pub fn build_power_n_graph(n: u32, parity: Parity) -> Result<(Graph, Labeling)> {
    if n < 4 {
        return invalid(format!(
            "no {parity} XOR-magic graph exists below power 4 (n = {n})"
        ));
    }
    if n > MAX_POWER {
        return invalid(format!("power {n} exceeds {MAX_POWER}"));
    }
    if n <= 7 {
        let e = crate::catalog::base_for_power(n, parity)
            .ok_or_else(|| Error::MissingBase(format!("power {n}, {parity}")))?;
        return Ok((e.graph, e.labeling));
    }
    let (g1, l1) = build_power_n_graph(n - 4, Parity::ClosedEven)?;
    let h = crate::catalog::base_for_power(4, parity).expect("power-4 bases are embedded");
    cartesian_with_labeling(&g1, &l1, &h.graph, &h.labeling)
}
