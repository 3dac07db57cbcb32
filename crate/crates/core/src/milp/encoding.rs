//! s-codes: binary sequences packed into integers against a strictly decreasing
//! weight sequence, and the digit argument that lets one integer row stand in for
//! several parity rows.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, ToPrimitive, Zero};

use crate::error::{invalid, Result};
use crate::labeling::BitLabel;

/// The weights `(M^(r-1+y), ..., M^y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodingSpec {
    base: u64,
    len: usize,
    offset: u32,
}

impl EncodingSpec {
    pub fn new(base: u64, len: usize, offset: u32) -> Result<Self> {
        if base < 2 {
            return invalid(format!("encoding base must be at least 2, got {base}"));
        }
        if len == 0 {
            return invalid("encoding length must be positive");
        }
        Ok(EncodingSpec { base, len, offset })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn length(&self) -> usize {
        self.len
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn sequence(&self) -> Vec<BigInt> {
        let m = BigInt::from(self.base);
        (0..self.len)
            .map(|i| Pow::pow(&m, (self.len - 1 - i) as u32 + self.offset))
            .collect()
    }

    pub fn encode(&self, x: &[u8]) -> Result<BigInt> {
        encode(&self.sequence(), x)
    }
}

/// `sum s_i x_i`.
pub fn encode(s: &[BigInt], x: &[u8]) -> Result<BigInt> {
    if s.len() != x.len() {
        return invalid(format!(
            "sequence of length {} against {} weights",
            x.len(),
            s.len()
        ));
    }
    if let Some(b) = x.iter().find(|&&b| b > 1) {
        return invalid(format!("non-binary entry {b}"));
    }
    Ok(s.iter()
        .zip(x)
        .filter(|(_, &b)| b == 1)
        .map(|(w, _)| w)
        .sum())
}

/// Cuts the label into chunks of `t` coordinates; the last chunk takes the remainder.
pub fn split_label(label: &BitLabel, t: u32) -> Result<Vec<Vec<u8>>> {
    let n = label.dim();
    if t == 0 || t > n {
        return invalid(format!("chunk length {t} outside 1..={n}"));
    }
    Ok(label
        .bits()
        .chunks(t as usize)
        .map(<[u8]>::to_vec)
        .collect())
}

/// Number of chunks, `ceil(n / t)`.
pub fn chunk_count(n: u32, t: u32) -> u32 {
    n.div_ceil(t)
}

/// The `len` base-`M` digits of `value / M^offset`, most significant first, or
/// `None` when the value is not a multiple of `M^offset` or needs more digits.
pub fn digits(value: &BigInt, base: u64, len: usize, offset: u32) -> Option<Vec<u64>> {
    let m = BigInt::from(base);
    let (mut q, r) = value.div_rem(&Pow::pow(&m, offset));
    if !r.is_zero() || q < BigInt::zero() {
        return None;
    }
    let mut out = vec![0u64; len];
    for slot in out.iter_mut().rev() {
        let (nq, d) = q.div_rem(&m);
        *slot = d.to_u64()?;
        q = nq;
    }
    q.is_zero().then_some(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    /// Sequences of unequal length, non-binary entries or a target list of the
    /// wrong length.
    Shape(String),
    /// A target `2k_i` that is odd or not below `M`.
    TargetRange { index: usize, value: u64 },
    /// Column count too large for the base.
    ColumnBound {
        column: usize,
        count: usize,
        base: u64,
    },
    /// Encoded sum differs from the target number.
    EncodedSum { encoded: BigInt, target: BigInt },
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypothesis::Shape(s) => write!(f, "malformed instance: {s}"),
            Hypothesis::TargetRange { index, value } => {
                write!(f, "target {index} = {value} is not an even digit")
            }
            Hypothesis::ColumnBound {
                column,
                count,
                base,
            } => {
                write!(f, "column {column} has {count} ones against base {base}")
            }
            Hypothesis::EncodedSum { encoded, target } => {
                write!(f, "encoded sum {encoded} differs from target {target}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemmaVerdict {
    /// Hypotheses hold; column sums equal the targets and the XOR is zero.
    Verified,
    HypothesesViolated(Vec<Hypothesis>),
    /// Hypotheses hold but some column sum differs from its target.
    ConclusionFails {
        columns: Vec<usize>,
    },
}

impl LemmaVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            LemmaVerdict::Verified => "hypotheses_hold_and_conclusion_verified",
            LemmaVerdict::HypothesesViolated(_) => "hypotheses_violated",
            LemmaVerdict::ConclusionFails { .. } => "conclusion_fails",
        }
    }
}

/// Checks the digit argument on one instance: sequences `a_1..a_k` of length `r`,
/// targets `2k_1..2k_r`, weights `(M^(r-1+y), ..., M^y)`.
///
/// The column bound is `M > max count`, relaxed to `M >= max count` for odd `M`.
/// The relaxation is not sound on its own: a column of `M` ones carries into the
/// next digit and can leave every digit even, so such instances surface as
/// `ConclusionFails`.
pub fn check_encoding_lemma(
    base: u64,
    offset: u32,
    seqs: &[Vec<u8>],
    targets: &[u64],
) -> LemmaVerdict {
    let r = targets.len();
    let mut violated = Vec::new();
    if base < 2 {
        violated.push(Hypothesis::Shape(format!("base {base} below 2")));
    }
    if r == 0 {
        violated.push(Hypothesis::Shape("empty target list".into()));
    }
    if let Some(j) = seqs.iter().position(|a| a.len() != r) {
        violated.push(Hypothesis::Shape(format!(
            "sequence {j} does not have length {r}"
        )));
    }
    if seqs.iter().flatten().any(|&b| b > 1) {
        violated.push(Hypothesis::Shape("non-binary entry".into()));
    }
    if !violated.is_empty() {
        return LemmaVerdict::HypothesesViolated(violated);
    }

    for (index, &value) in targets.iter().enumerate() {
        if value % 2 == 1 || value >= base {
            violated.push(Hypothesis::TargetRange { index, value });
        }
    }
    let counts: Vec<usize> = (0..r)
        .map(|i| seqs.iter().filter(|a| a[i] == 1).count())
        .collect();
    let relaxed = base % 2 == 1;
    for (column, &count) in counts.iter().enumerate() {
        let c = count as u64;
        if c > base || (c == base && !relaxed) {
            violated.push(Hypothesis::ColumnBound {
                column,
                count,
                base,
            });
        }
    }
    let spec = EncodingSpec {
        base,
        len: r,
        offset,
    };
    let weights = spec.sequence();
    let encoded: BigInt = seqs
        .iter()
        .map(|a| encode(&weights, a).expect("shape checked"))
        .sum();
    let target: BigInt = targets
        .iter()
        .zip(&weights)
        .map(|(&t, w)| BigInt::from(t) * w)
        .sum();
    if encoded != target {
        violated.push(Hypothesis::EncodedSum { encoded, target });
    }
    if !violated.is_empty() {
        return LemmaVerdict::HypothesesViolated(violated);
    }

    let columns: Vec<usize> = (0..r).filter(|&i| counts[i] as u64 != targets[i]).collect();
    let xor_zero = counts.iter().all(|c| c % 2 == 0);
    if columns.is_empty() && xor_zero {
        LemmaVerdict::Verified
    } else {
        LemmaVerdict::ConclusionFails { columns }
    }
}

/// Column sums read back from the base-`M` digits of `sum enc(a_j)`; equal to the
/// direct column sums whenever every column has fewer than `M` ones.
pub fn column_counts_from_sum(base: u64, offset: u32, seqs: &[Vec<u8>]) -> Result<Vec<u64>> {
    let r = seqs.first().map_or(0, Vec::len);
    let spec = EncodingSpec::new(base, r.max(1), offset)?;
    let weights = spec.sequence();
    let mut total = BigInt::zero();
    for a in seqs {
        total += encode(&weights, a)?;
    }
    digits(&total, base, r, offset).ok_or_else(|| {
        crate::Error::InvalidParameter("encoded sum does not fit the digit range".into())
    })
}
