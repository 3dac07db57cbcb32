//! Embedded fixture graphs with their labelings. Every entry is re-verified when it
//! is loaded, so a transcription error surfaces as a load failure.

use crate::cert::Certificate;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::labeling::{complement_transport, verify, Labeling, Mode, Parity, Verdict};

struct Fixture {
    id: &'static str,
    provenance: &'static str,
    json: &'static str,
    /// Expected verdict code; everything but `fig1-k22` is expected to be magic.
    expected: &'static str,
}

const FIXTURES: &[Fixture] = &[
    Fixture {
        id: "fig1-k22",
        provenance: "fixture: K_{2,2} labeling with magic constant (1,0)",
        json: include_str!("../fixtures/fig1-k22.json"),
        expected: "nonzero_weight",
    },
    Fixture {
        id: "fig1-k44",
        provenance: "fixture: open XOR-magic labeling of K_{4,4}",
        json: include_str!("../fixtures/fig1-k44.json"),
        expected: "magic",
    },
    Fixture {
        id: "fig4-d5",
        provenance: "fixture: 5-regular open XOR-magic graph of order 16",
        json: include_str!("../fixtures/fig4-d5.json"),
        expected: "magic",
    },
    Fixture {
        id: "fig4-d7",
        provenance: "fixture: 7-regular open XOR-magic graph of order 16",
        json: include_str!("../fixtures/fig4-d7.json"),
        expected: "magic",
    },
    Fixture {
        id: "fig4-d9",
        provenance: "fixture: 9-regular open XOR-magic graph of order 16",
        json: include_str!("../fixtures/fig4-d9.json"),
        expected: "magic",
    },
    Fixture {
        id: "fig4-d11",
        provenance: "fixture: 11-regular open XOR-magic graph of order 16",
        json: include_str!("../fixtures/fig4-d11.json"),
        expected: "magic",
    },
    Fixture {
        id: "fig5-d4",
        provenance: "fixture: 4-regular closed XOR-magic graph of order 16",
        json: include_str!("../fixtures/fig5-d4.json"),
        expected: "magic",
    },
    Fixture {
        id: "search-p5-open-d5",
        provenance: "native search, seed 0, canonical labeling: 5-regular open XOR-magic graph of order 32",
        json: include_str!("../fixtures/search-p5-open-d5.json"),
        expected: "magic",
    },
    Fixture {
        id: "search-p5-closed-d4",
        provenance: "native search, seed 0, canonical labeling: 4-regular closed XOR-magic graph of order 32",
        json: include_str!("../fixtures/search-p5-closed-d4.json"),
        expected: "magic",
    },
    Fixture {
        id: "search-p6-open-d9",
        provenance: "native search, seed 0, canonical labeling: 9-regular open XOR-magic graph of order 64",
        json: include_str!("../fixtures/search-p6-open-d9.json"),
        expected: "magic",
    },
    Fixture {
        id: "search-p7-open-d13",
        provenance: "native search, seed 0, canonical labeling: 13-regular open XOR-magic graph of order 128",
        json: include_str!("../fixtures/search-p7-open-d13.json"),
        expected: "magic",
    },
];

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub graph: Graph,
    pub labeling: Labeling,
    pub mode: Mode,
    /// Valency, or `None` for irregular graphs.
    pub degree: Option<usize>,
    pub provenance: String,
    pub verdict: Verdict,
}

impl CatalogEntry {
    pub fn certificate(&self) -> Certificate {
        Certificate::new(&self.graph, &self.labeling, self.mode)
    }

    pub fn is_magic(&self) -> bool {
        self.verdict.is_magic()
    }
}

fn materialize(f: &Fixture) -> Result<CatalogEntry> {
    let cert = Certificate::parse(f.json)?;
    let (graph, labeling) = cert.decode()?;
    let verdict = verify(&graph, &labeling, cert.mode);
    if verdict.code() != f.expected {
        return Err(Error::InvalidGraph(format!(
            "catalog entry {} failed its self-check: expected {}, got {verdict}",
            f.id, f.expected
        )));
    }
    Ok(CatalogEntry {
        id: f.id.to_string(),
        degree: graph.regularity(),
        graph,
        labeling,
        mode: cert.mode,
        provenance: f.provenance.to_string(),
        verdict,
    })
}

pub fn ids() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|f| f.id)
}

pub fn load(id: &str) -> Result<CatalogEntry> {
    let f = FIXTURES
        .iter()
        .find(|f| f.id == id)
        .ok_or_else(|| Error::UnknownCatalogEntry(id.to_string()))?;
    materialize(f)
}

pub fn list() -> Result<Vec<CatalogEntry>> {
    FIXTURES.iter().map(materialize).collect()
}

/// Positive entries that are odd-regular open or even-regular closed XOR-magic.
pub fn bases() -> Vec<(Parity, CatalogEntry)> {
    list()
        .expect("embedded catalog verifies")
        .into_iter()
        .filter(|e| e.is_magic())
        .filter_map(|e| {
            let d = e.degree?;
            let parity = match e.mode {
                Mode::Open if d % 2 == 1 => Parity::OpenOdd,
                Mode::Closed if d % 2 == 0 => Parity::ClosedEven,
                _ => return None,
            };
            Some((parity, e))
        })
        .collect()
}

/// A verified graph of power `n`, the given parity and degree `d`, taken from the
/// catalog directly or as the complement of an entry of the opposite parity.
pub fn base_with_degree(n: u32, parity: Parity, d: usize) -> Option<CatalogEntry> {
    lookup(&bases(), n, parity, d)
}

/// The smallest-degree verified graph of power `n` with the given parity.
pub fn base_for_power(n: u32, parity: Parity) -> Option<CatalogEntry> {
    let all = bases();
    let order = 1usize << n;
    (0..order)
        .filter(|&d| parity.admits_degree(d))
        .find_map(|d| lookup(&all, n, parity, d))
}

fn lookup(
    all: &[(Parity, CatalogEntry)],
    n: u32,
    parity: Parity,
    d: usize,
) -> Option<CatalogEntry> {
    let order = 1usize << n;
    if let Some((_, e)) = all
        .iter()
        .find(|(p, e)| *p == parity && e.degree == Some(d) && e.graph.order() == order)
    {
        return Some(e.clone());
    }
    let (_, e) = all.iter().find(|(p, e)| {
        *p == parity.flip()
            && e.graph.order() == order
            && e.degree.map(|k| order - 1 - k) == Some(d)
    })?;
    let (g, l) = complement_transport(&e.graph, &e.labeling).ok()?;
    let mode = parity.mode();
    let verdict = verify(&g, &l, mode);
    verdict.is_magic().then(|| CatalogEntry {
        id: format!("complement({})", e.id),
        degree: g.regularity(),
        graph: g,
        labeling: l,
        mode,
        provenance: format!("complement of {}", e.id),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_entries_load() {
        let entries = list().unwrap();
        assert_eq!(entries.len(), FIXTURES.len());
        for e in &entries {
            if e.id == "fig1-k22" {
                assert!(matches!(e.verdict, Verdict::NonzeroWeight { .. }));
            } else {
                assert!(e.is_magic(), "{}", e.id);
            }
        }
    }

    #[test]
    fn expected_shapes() {
        let d5 = load("fig4-d5").unwrap();
        assert_eq!(
            (d5.degree, d5.graph.order(), d5.mode),
            (Some(5), 16, Mode::Open)
        );
        let d4 = load("fig5-d4").unwrap();
        assert_eq!(
            (d4.degree, d4.graph.order(), d4.mode),
            (Some(4), 16, Mode::Closed)
        );
        let k44 = load("fig1-k44").unwrap();
        let expected = Graph::from_fn(8, |u, v| (u < 4) != (v < 4)).unwrap();
        assert_eq!(k44.graph, expected);
        assert!(matches!(load("fig9"), Err(Error::UnknownCatalogEntry(_))));
    }

    #[test]
    fn power_four_bases_cover_published_degree_lists() {
        for d in [5, 7, 9, 11] {
            assert!(
                base_with_degree(4, Parity::OpenOdd, d).is_some(),
                "open {d}"
            );
        }
        for d in [4, 6, 8, 10] {
            assert!(
                base_with_degree(4, Parity::ClosedEven, d).is_some(),
                "closed {d}"
            );
        }
        assert!(base_with_degree(4, Parity::OpenOdd, 3).is_none());
        assert_eq!(base_for_power(4, Parity::OpenOdd).unwrap().id, "fig4-d5");
        assert_eq!(base_for_power(4, Parity::ClosedEven).unwrap().id, "fig5-d4");
    }

    #[test]
    fn higher_power_bases() {
        let expect = [
            (5, Parity::OpenOdd, 5),
            (5, Parity::ClosedEven, 4),
            (6, Parity::OpenOdd, 9),
            (6, Parity::ClosedEven, 54),
            (7, Parity::OpenOdd, 13),
            (7, Parity::ClosedEven, 114),
        ];
        for (n, parity, d) in expect {
            let e = base_for_power(n, parity).unwrap();
            assert_eq!(e.graph.order(), 1 << n);
            assert_eq!(e.degree, Some(d), "power {n} {parity}");
            assert!(e.is_magic());
            assert!(e.graph.is_connected());
        }
        // the complement of the power-5 open base gives the largest printed closed degree
        assert!(base_with_degree(5, Parity::ClosedEven, 26).is_some());
    }
}
