//! Degrees reachable from known XOR-magic base graphs through products and
//! complements, with a derivation tree for every claimed degree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::catalog;
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::labeling::{
    cartesian_with_labeling, complement_transport, strong_with_labeling, Labeling, Parity,
    MAX_POWER,
};

/// Smallest power with an odd open or even closed XOR-magic graph.
pub const MIN_POWER: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Cartesian,
    Strong,
    Complement,
}

impl Rule {
    pub const ALL: [Rule; 3] = [Rule::Cartesian, Rule::Strong, Rule::Complement];
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Cartesian => "cartesian",
            Rule::Strong => "strong",
            Rule::Complement => "complement",
        })
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cartesian" => Ok(Rule::Cartesian),
            "strong" => Ok(Rule::Strong),
            "complement" => Ok(Rule::Complement),
            _ => Err(Error::Parse(format!(
                "rule must be cartesian|strong|complement, got `{s}`"
            ))),
        }
    }
}

/// Parses a comma-separated rule list; `all` selects every rule.
pub fn parse_rules(text: &str) -> Result<BTreeSet<Rule>> {
    if text.trim() == "all" {
        return Ok(Rule::ALL.into_iter().collect());
    }
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse())
        .collect()
}

/// Degrees known to be realizable, per power and parity, each with a source note.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegreeFactBase {
    facts: BTreeMap<(u32, Parity), BTreeMap<usize, String>>,
}

impl DegreeFactBase {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The published base cases for powers 4 to 7.
    pub fn published() -> Self {
        const OPEN: &str = "published open-odd base case";
        const CLOSED: &str = "published closed-even base case";
        let table: [(u32, Parity, &[usize], &str); 8] = [
            (4, Parity::OpenOdd, &[5, 7, 9, 11], OPEN),
            (5, Parity::OpenOdd, &[5, 7, 9, 11, 13, 15, 27], OPEN),
            (6, Parity::OpenOdd, &[9], OPEN),
            (7, Parity::OpenOdd, &[13], OPEN),
            (4, Parity::ClosedEven, &[4, 6, 8, 10], CLOSED),
            (5, Parity::ClosedEven, &[26, 24, 22, 20, 18, 16, 4], CLOSED),
            (6, Parity::ClosedEven, &[54], CLOSED),
            (7, Parity::ClosedEven, &[114], CLOSED),
        ];
        let mut base = Self::empty();
        for (n, parity, degrees, source) in table {
            for &d in degrees {
                base.insert(n, parity, d, source)
                    .expect("published facts are well-formed");
            }
        }
        base
    }

    pub fn insert(&mut self, n: u32, parity: Parity, d: usize, source: &str) -> Result<()> {
        if !(MIN_POWER..=MAX_POWER).contains(&n) {
            return invalid(format!("power {n} out of range [{MIN_POWER}, {MAX_POWER}]"));
        }
        if d >= 1 << n || !parity.admits_degree(d) {
            return invalid(format!("degree {d} is not a {parity} degree of power {n}"));
        }
        self.facts
            .entry((n, parity))
            .or_default()
            .entry(d)
            .or_insert_with(|| source.to_string());
        Ok(())
    }

    pub fn degrees(&self, n: u32, parity: Parity) -> BTreeSet<usize> {
        self.facts
            .get(&(n, parity))
            .map(|m| m.keys().copied().collect())
            .unwrap_or_default()
    }

    pub fn source(&self, n: u32, parity: Parity, d: usize) -> Option<&str> {
        self.facts.get(&(n, parity))?.get(&d).map(String::as_str)
    }

    /// All facts as `(power, parity, degree, source)`.
    pub fn iter(&self) -> impl Iterator<Item = (u32, Parity, usize, &str)> {
        self.facts
            .iter()
            .flat_map(|(&(n, p), m)| m.iter().map(move |(&d, s)| (n, p, d, s.as_str())))
    }
}

/// How a degree was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum Derivation {
    Fact {
        n: u32,
        parity: Parity,
        d: usize,
        source: String,
    },
    Cartesian {
        n: u32,
        parity: Parity,
        d: usize,
        left: Box<Derivation>,
        right: Box<Derivation>,
    },
    Strong {
        n: u32,
        parity: Parity,
        d: usize,
        left: Box<Derivation>,
        right: Box<Derivation>,
    },
    Complement {
        n: u32,
        parity: Parity,
        d: usize,
        of: Box<Derivation>,
    },
}

impl Derivation {
    pub fn power(&self) -> u32 {
        match self {
            Derivation::Fact { n, .. }
            | Derivation::Cartesian { n, .. }
            | Derivation::Strong { n, .. }
            | Derivation::Complement { n, .. } => *n,
        }
    }

    pub fn parity(&self) -> Parity {
        match self {
            Derivation::Fact { parity, .. }
            | Derivation::Cartesian { parity, .. }
            | Derivation::Strong { parity, .. }
            | Derivation::Complement { parity, .. } => *parity,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Derivation::Fact { d, .. }
            | Derivation::Cartesian { d, .. }
            | Derivation::Strong { d, .. }
            | Derivation::Complement { d, .. } => *d,
        }
    }

    /// Number of base facts at the leaves.
    pub fn leaves(&self) -> usize {
        match self {
            Derivation::Fact { .. } => 1,
            Derivation::Cartesian { left, right, .. } | Derivation::Strong { left, right, .. } => {
                left.leaves() + right.leaves()
            }
            Derivation::Complement { of, .. } => of.leaves(),
        }
    }
}

/// Compact form: `O4:5` is an open-odd degree-5 graph of power 4, `x` the
/// Cartesian product, `*` the strong product and `~` the complement.
impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivation::Fact { n, parity, d, .. } => {
                let p = if *parity == Parity::OpenOdd { 'O' } else { 'C' };
                write!(f, "{p}{n}:{d}")
            }
            Derivation::Cartesian { left, right, .. } => write!(f, "({left} x {right})"),
            Derivation::Strong { left, right, .. } => write!(f, "({left} * {right})"),
            Derivation::Complement { of, .. } => write!(f, "~{of}"),
        }
    }
}

type Level = BTreeMap<Parity, BTreeMap<usize, Derivation>>;

/// Closure of `facts` under the selected rules, read off at power `n_target`.
///
/// Powers are processed in increasing order. At each power the facts are
/// seeded first, then every product of two graphs whose powers add up to it:
/// Cartesian products add degrees (open with closed gives open; closed with
/// closed and open with open give closed) and strong products of two closed
/// graphs give `kl + k + l`. Finally complements flip the parity, mapping `d` to
/// `2^n - 1 - d`, and are admitted only when the new degree is at least half of
/// `2^n - 1`, which keeps the complement connected. The first derivation found
/// for a degree is kept, so traces are deterministic.
pub fn reachable_degrees(
    facts: &DegreeFactBase,
    n_target: u32,
    parity: Parity,
    rules: &BTreeSet<Rule>,
) -> Result<BTreeMap<usize, Derivation>> {
    if !(MIN_POWER..=MAX_POWER).contains(&n_target) {
        return invalid(format!(
            "target power {n_target} out of range [{MIN_POWER}, {MAX_POWER}]"
        ));
    }
    if rules.is_empty() {
        return invalid("at least one rule is required");
    }
    let mut levels: BTreeMap<u32, Level> = BTreeMap::new();
    for n in MIN_POWER..=n_target {
        let mut level = Level::new();
        for p in [Parity::OpenOdd, Parity::ClosedEven] {
            let entry = level.entry(p).or_default();
            for d in facts.degrees(n, p) {
                let source = facts.source(n, p, d).unwrap_or_default().to_string();
                entry.insert(
                    d,
                    Derivation::Fact {
                        n,
                        parity: p,
                        d,
                        source,
                    },
                );
            }
        }
        for a in MIN_POWER..=n.saturating_sub(MIN_POWER) {
            let b = n - a;
            combine(&levels[&a], &levels[&b], n, rules, &mut level);
        }
        if rules.contains(&Rule::Complement) {
            let max = (1usize << n) - 1;
            for p in [Parity::OpenOdd, Parity::ClosedEven] {
                let sources: Vec<Derivation> = level[&p].values().cloned().collect();
                for src in sources {
                    let d = max - src.degree();
                    if 2 * d >= max {
                        level
                            .entry(p.flip())
                            .or_default()
                            .entry(d)
                            .or_insert_with(|| Derivation::Complement {
                                n,
                                parity: p.flip(),
                                d,
                                of: Box::new(src),
                            });
                    }
                }
            }
        }
        levels.insert(n, level);
    }
    Ok(levels
        .remove(&n_target)
        .and_then(|mut l| l.remove(&parity))
        .unwrap_or_default())
}

fn combine(x: &Level, y: &Level, n: u32, rules: &BTreeSet<Rule>, out: &mut Level) {
    use Parity::{ClosedEven, OpenOdd};
    let empty = BTreeMap::new();
    let get = |l: &'_ Level, p| {
        l.get(&p)
            .unwrap_or(&empty)
            .values()
            .cloned()
            .collect::<Vec<_>>()
    };
    let mut add = |parity: Parity, d: usize, make: &dyn Fn() -> Derivation| {
        out.entry(parity).or_default().entry(d).or_insert_with(make);
    };
    if rules.contains(&Rule::Cartesian) {
        let pairs = [
            (OpenOdd, ClosedEven, OpenOdd),
            (ClosedEven, OpenOdd, OpenOdd),
            (ClosedEven, ClosedEven, ClosedEven),
            (OpenOdd, OpenOdd, ClosedEven),
        ];
        for (pl, pr, parity) in pairs {
            for l in get(x, pl) {
                for r in get(y, pr) {
                    let d = l.degree() + r.degree();
                    add(parity, d, &|| Derivation::Cartesian {
                        n,
                        parity,
                        d,
                        left: Box::new(l.clone()),
                        right: Box::new(r.clone()),
                    });
                }
            }
        }
    }
    if rules.contains(&Rule::Strong) {
        for l in get(x, ClosedEven) {
            for r in get(y, ClosedEven) {
                let (k, m) = (l.degree(), r.degree());
                let d = k * m + k + m;
                add(ClosedEven, d, &|| Derivation::Strong {
                    n,
                    parity: ClosedEven,
                    d,
                    left: Box::new(l.clone()),
                    right: Box::new(r.clone()),
                });
            }
        }
    }
}

/// Builds a graph and labeling following a derivation. Leaves are looked up in
/// the catalog (directly or through a complement), so this fails with
/// [`Error::MissingBase`] for published facts without an embedded certificate.
pub fn realize(derivation: &Derivation) -> Result<(Graph, Labeling)> {
    match derivation {
        Derivation::Fact { n, parity, d, .. } => catalog::base_with_degree(*n, *parity, *d)
            .map(|e| (e.graph, e.labeling))
            .ok_or_else(|| Error::MissingBase(format!("power {n}, {parity}, degree {d}"))),
        Derivation::Cartesian { left, right, .. } => {
            let (g, lg) = realize(left)?;
            let (h, lh) = realize(right)?;
            cartesian_with_labeling(&g, &lg, &h, &lh)
        }
        Derivation::Strong { left, right, .. } => {
            let (g, lg) = realize(left)?;
            let (h, lh) = realize(right)?;
            strong_with_labeling(&g, &lg, &h, &lh)
        }
        Derivation::Complement { of, .. } => {
            let (g, l) = realize(of)?;
            complement_transport(&g, &l)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::verify;

    fn odd(lo: usize, hi: usize) -> BTreeSet<usize> {
        (lo..=hi).step_by(2).collect()
    }

    fn reach(n: u32, p: Parity, rules: &str) -> BTreeMap<usize, Derivation> {
        reachable_degrees(
            &DegreeFactBase::published(),
            n,
            p,
            &parse_rules(rules).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn published_facts() {
        let b = DegreeFactBase::published();
        assert_eq!(
            b.degrees(5, Parity::ClosedEven),
            [4, 16, 18, 20, 22, 24, 26].into()
        );
        assert_eq!(b.degrees(7, Parity::OpenOdd), [13].into());
        assert_eq!(b.iter().count(), 4 + 7 + 1 + 1 + 4 + 7 + 1 + 1);
        assert!(b.degrees(8, Parity::OpenOdd).is_empty());
    }

    #[test]
    fn small_closures() {
        // power 4 has nothing to combine; complements stay inside the published lists
        let r = reach(4, Parity::OpenOdd, "all");
        assert_eq!(r.keys().copied().collect::<BTreeSet<_>>(), odd(5, 11));
        let r = reach(5, Parity::OpenOdd, "all");
        assert_eq!(
            r.keys().copied().collect::<BTreeSet<_>>(),
            odd(5, 15).into_iter().chain([27]).collect()
        );
    }

    #[test]
    fn derivations_are_consistent() {
        for (n, p) in [
            (8, Parity::OpenOdd),
            (8, Parity::ClosedEven),
            (9, Parity::OpenOdd),
        ] {
            for (d, t) in reach(n, p, "all") {
                assert_eq!((t.power(), t.parity(), t.degree()), (n, p, d));
                check(&t);
            }
        }
        fn check(t: &Derivation) {
            match t {
                Derivation::Fact { .. } => {}
                Derivation::Cartesian {
                    n, d, left, right, ..
                } => {
                    assert_eq!(left.power() + right.power(), *n);
                    assert_eq!(left.degree() + right.degree(), *d);
                    check(left);
                    check(right);
                }
                Derivation::Strong {
                    n, d, left, right, ..
                } => {
                    assert_eq!(left.power() + right.power(), *n);
                    let (k, l) = (left.degree(), right.degree());
                    assert_eq!(k * l + k + l, *d);
                    check(left);
                    check(right);
                }
                Derivation::Complement { n, parity, d, of } => {
                    assert_eq!(of.parity(), parity.flip());
                    assert_eq!(*d + of.degree(), (1 << n) - 1);
                    check(of);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let b = DegreeFactBase::published();
        assert!(reachable_degrees(&b, 3, Parity::OpenOdd, &parse_rules("all").unwrap()).is_err());
        assert!(reachable_degrees(&b, 8, Parity::OpenOdd, &BTreeSet::new()).is_err());
        assert!(parse_rules("cartesian,tensor").is_err());
        let mut b = DegreeFactBase::empty();
        assert!(b.insert(4, Parity::OpenOdd, 4, "x").is_err());
        assert!(b.insert(4, Parity::ClosedEven, 16, "x").is_err());
    }

    #[test]
    fn traces_realize() {
        let r = reach(8, Parity::OpenOdd, "cartesian");
        let (g, l) = realize(&r[&9]).unwrap();
        assert_eq!((g.order(), g.regularity()), (256, Some(9)));
        assert!(verify(&g, &l, Parity::OpenOdd.mode()).is_magic());
        let r = reach(8, Parity::ClosedEven, "cartesian,strong");
        assert_eq!(r[&24].to_string(), "(C4:4 * C4:4)");
        let (g, l) = realize(&r[&24]).unwrap();
        assert_eq!(g.regularity(), Some(24));
        assert!(verify(&g, &l, Parity::ClosedEven.mode()).is_magic());
    }
}
