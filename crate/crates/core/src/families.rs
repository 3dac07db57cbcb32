//! Constructors for the circulant families, hypercubes and graph products, plus the
//! textual family syntax used by the command line.

use std::collections::BTreeSet;

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

/// A circulant graph `C_m(S)` with `S` normalized to distinct distances in
/// `[1, ⌊m/2⌋]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CirculantSpec {
    m: usize,
    distances: BTreeSet<usize>,
}

impl CirculantSpec {
    /// Normalizes raw generators: each `s` maps to `min(s mod m, m - s mod m)`, and
    /// zero is dropped. The resulting set may be empty; [`circulant_from_spec`] rejects
    /// that case.
    pub fn new(m: usize, raw: &[i64]) -> Result<Self> {
        if m < 3 {
            return invalid(format!("circulant order must be at least 3, got {m}"));
        }
        let mi = m as i64;
        let distances = raw
            .iter()
            .map(|&s| {
                let r = s.rem_euclid(mi);
                r.min(mi - r) as usize
            })
            .filter(|&s| s != 0)
            .collect();
        Ok(CirculantSpec { m, distances })
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn distances(&self) -> &BTreeSet<usize> {
        &self.distances
    }

    /// `[1, ⌊m/2⌋] ∖ S`.
    pub fn complement(&self) -> CirculantSpec {
        CirculantSpec {
            m: self.m,
            distances: (1..=self.m / 2)
                .filter(|s| !self.distances.contains(s))
                .collect(),
        }
    }

    /// Valency `2|S| - [m/2 ∈ S]`.
    pub fn valency(&self) -> usize {
        let half = self.m.is_multiple_of(2) && self.distances.contains(&(self.m / 2));
        2 * self.distances.len() - usize::from(half)
    }

    /// Whether `gcd(S ∪ {m}) = 1`.
    pub fn gcd_connected(&self) -> bool {
        self.distances
            .iter()
            .fold(self.m, |g, &s| num_integer::gcd(g, s))
            == 1
    }

    /// Circular distance between two vertices.
    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> usize {
        let d = (i + self.m - j) % self.m;
        d.min(self.m - d)
    }

    /// First row `v` of the adjacency circulant: `v_i = 1` iff `i` or `m - i` is in S.
    pub fn first_row(&self) -> Vec<u8> {
        (0..self.m)
            .map(|i| u8::from(self.distances.contains(&self.distance(i, 0))))
            .collect()
    }
}

pub fn circulant_from_spec(spec: &CirculantSpec) -> Result<Graph> {
    if spec.distances.is_empty() {
        return invalid("circulant connection set is empty after normalization");
    }
    Graph::from_fn(spec.m, |i, j| spec.distances.contains(&spec.distance(i, j)))
}

/// `C_m(S)` from raw generators.
pub fn circulant(m: usize, raw: &[i64]) -> Result<Graph> {
    circulant_from_spec(&CirculantSpec::new(m, raw)?)
}

/// The n-cube; vertex `i` corresponds to the n-bit binary expansion of `i`.
pub fn hypercube(n: u32) -> Result<Graph> {
    if n == 0 {
        return invalid("hypercube dimension must be at least 1");
    }
    if n > 20 {
        return invalid(format!("hypercube dimension {n} too large"));
    }
    Graph::from_fn(1 << n, |i, j| (i ^ j).count_ones() == 1)
}

/// `C_m^{(r)} = C_m({1, ..., r})`.
pub fn power_of_cycle(m: usize, r: usize) -> Result<Graph> {
    if r == 0 || r > m / 2 {
        return invalid(format!("power {r} out of range [1, {}]", m / 2));
    }
    circulant(m, &(1..=r as i64).collect::<Vec<_>>())
}

/// Complement of `C_m^{(r)}`, i.e. `C_m({r+1, ..., ⌊m/2⌋})`.
pub fn complement_power_of_cycle(m: usize, r: usize) -> Result<Graph> {
    if r == 0 || r + 1 > m / 2 {
        return invalid(format!(
            "power {r} out of range [1, {}] for a non-empty complement",
            (m / 2).saturating_sub(1)
        ));
    }
    circulant(m, &((r + 1) as i64..=(m / 2) as i64).collect::<Vec<_>>())
}

/// Connection set of the Doob-type circulant `G(r, t)` on `(r-1)t + 2` vertices:
/// the `r` generators `kt + 1` for `0 <= k <= r - 1`.
pub fn doob_generators(r: usize, t: usize) -> Result<(usize, Vec<i64>)> {
    if r < 2 || t == 0 {
        return invalid(format!(
            "doob graph needs r >= 2 and t >= 1, got r={r}, t={t}"
        ));
    }
    let n = (r - 1) * t + 2;
    Ok((n, (0..r).map(|k| (k * t + 1) as i64).collect()))
}

pub fn doob(r: usize, t: usize) -> Result<Graph> {
    let (n, gens) = doob_generators(r, t)?;
    circulant(n, &gens)
}

/// Andrásfai graph `And(r) = G(r, 3)`, an r-regular circulant on `3r - 1` vertices.
pub fn andrasfai(r: usize) -> Result<Graph> {
    if r < 2 {
        return invalid(format!("andrasfai graph needs r >= 2, got {r}"));
    }
    doob(r, 3)
}

/// Möbius ladder `L_n = C_n({1, n/2})`.
pub fn mobius_ladder(n: usize) -> Result<Graph> {
    if n < 4 || !n.is_multiple_of(2) {
        return invalid(format!("mobius ladder needs even n >= 4, got {n}"));
    }
    circulant(n, &[1, (n / 2) as i64])
}

/// Cartesian product; vertex `(a, b)` is encoded as `a * |H| + b`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Graph {
    let hn = h.order();
    Graph::from_fn(g.order() * hn, |x, y| {
        let (a, b) = (x / hn, x % hn);
        let (c, d) = (y / hn, y % hn);
        (a == c && h.has_edge(b, d)) || (b == d && g.has_edge(a, c))
    })
    .expect("product of non-empty graphs is non-empty")
}

/// Strong product with the same row-major encoding as [`cartesian_product`].
pub fn strong_product(g: &Graph, h: &Graph) -> Graph {
    let hn = h.order();
    Graph::from_fn(g.order() * hn, |x, y| {
        let (a, b) = (x / hn, x % hn);
        let (c, d) = (y / hn, y % hn);
        let ga = a == c || g.has_edge(a, c);
        let hb = b == d || h.has_edge(b, d);
        ga && hb
    })
    .expect("product of non-empty graphs is non-empty")
}

/// Parses the command-line family syntax, e.g. `circulant:16:1,6,8`,
/// `complement(mobius:8)` or `cartesian(catalog:fig4-d5,hypercube:2)`.
pub fn parse_family(text: &str) -> Result<Graph> {
    let mut p = Parser {
        src: text.trim(),
        pos: 0,
    };
    let g = p.expr()?;
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(g)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in `{}`", self.pos, self.src))
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn word(&mut self) -> &str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn expr(&mut self) -> Result<Graph> {
        let name = self.word().to_ascii_lowercase();
        if name.is_empty() {
            return Err(self.error("expected family name"));
        }
        match name.as_str() {
            "complement" => {
                self.eat('(')?;
                let g = self.expr()?;
                self.eat(')')?;
                Ok(g.complement())
            }
            "cartesian" | "strong" => {
                self.eat('(')?;
                let g = self.expr()?;
                self.eat(',')?;
                let h = self.expr()?;
                self.eat(')')?;
                Ok(if name == "cartesian" {
                    cartesian_product(&g, &h)
                } else {
                    strong_product(&g, &h)
                })
            }
            _ => {
                let mut args = Vec::new();
                while self.peek() == Some(':') {
                    self.pos += 1;
                    let start = self.pos;
                    while let Some(c) = self.peek() {
                        if c.is_ascii_alphanumeric() || matches!(c, ',' | '-' | '_') {
                            // a comma inside a product argument list ends the atom
                            // unless digits follow it directly
                            if c == ','
                                && !self.src[self.pos + 1..]
                                    .starts_with(|d: char| d.is_ascii_digit() || d == '-')
                            {
                                break;
                            }
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                    args.push(self.src[start..self.pos].to_string());
                }
                atom(&name, &args)
            }
        }
    }
}

fn num(s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::Parse(format!("expected a non-negative integer, got `{s}`")))
}

fn atom(name: &str, args: &[String]) -> Result<Graph> {
    let want = |k: usize| -> Result<()> {
        if args.len() == k {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "`{name}` takes {k} argument(s), got {}",
                args.len()
            )))
        }
    };
    match name {
        "circulant" => {
            want(2)?;
            let raw = args[1]
                .split(',')
                .map(|s| {
                    s.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad generator `{s}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            circulant(num(&args[0])?, &raw)
        }
        "hypercube" => {
            want(1)?;
            hypercube(num(&args[0])? as u32)
        }
        "mobius" => {
            want(1)?;
            mobius_ladder(num(&args[0])?)
        }
        "andrasfai" => {
            want(1)?;
            andrasfai(num(&args[0])?)
        }
        "doob" => {
            want(2)?;
            doob(num(&args[0])?, num(&args[1])?)
        }
        "powercycle" => {
            want(2)?;
            power_of_cycle(num(&args[0])?, num(&args[1])?)
        }
        "complete" => {
            want(1)?;
            Graph::complete(num(&args[0])?)
        }
        "catalog" => {
            want(1)?;
            Ok(crate::catalog::load(&args[0])?.graph)
        }
        other => Err(Error::Parse(format!("unknown family `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexMap;

    #[test]
    fn normalization() {
        let s = CirculantSpec::new(5, &[1, 4]).unwrap();
        assert_eq!(s.distances().iter().copied().collect::<Vec<_>>(), vec![1]);
        let s = CirculantSpec::new(8, &[1, 4, 7, 10, -3, 0, 16]).unwrap();
        assert_eq!(
            s.distances().iter().copied().collect::<Vec<_>>(),
            vec![1, 2, 3, 4]
        );
        assert!(CirculantSpec::new(2, &[1]).is_err());
        assert!(circulant(8, &[0, 8]).is_err());
    }

    #[test]
    fn circulant_examples() {
        let c4 = circulant(4, &[1]).unwrap();
        assert_eq!(
            c4,
            Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap()
        );
        assert_eq!(circulant(16, &[6, 7, 8]).unwrap().regularity(), Some(5));
    }

    #[test]
    fn hypercube_examples() {
        assert_eq!(hypercube(1).unwrap(), Graph::complete(2).unwrap());
        assert_eq!(
            hypercube(2).unwrap(),
            circulant(4, &[1])
                .unwrap()
                .apply_vertex_map(
                    // 0-1-2-3 cycle onto Gray order 0,1,3,2
                    &VertexMap::new(vec![0, 1, 3, 2]).unwrap()
                )
                .unwrap()
        );
        let q3 = hypercube(3).unwrap();
        assert_eq!(q3.order(), 8);
        assert_eq!(q3.regularity(), Some(3));
        assert!(q3.is_connected());
        assert!(q3
            .edges()
            .all(|(u, v)| (u.count_ones() + v.count_ones()) % 2 == 1));
        assert!(hypercube(0).is_err());
    }

    #[test]
    fn cycle_powers() {
        assert_eq!(power_of_cycle(8, 1).unwrap(), circulant(8, &[1]).unwrap());
        assert_eq!(
            complement_power_of_cycle(8, 1).unwrap(),
            circulant(8, &[2, 3, 4]).unwrap()
        );
        assert_eq!(power_of_cycle(8, 4).unwrap(), Graph::complete(8).unwrap());
        assert!(power_of_cycle(8, 5).is_err());
        assert!(power_of_cycle(8, 0).is_err());
        assert!(complement_power_of_cycle(8, 4).is_err());
    }

    #[test]
    fn named_circulants() {
        assert_eq!(andrasfai(2).unwrap(), circulant(5, &[1]).unwrap());
        assert_eq!(doob(2, 3).unwrap(), andrasfai(2).unwrap());
        let l8 = mobius_ladder(8).unwrap();
        assert_eq!(l8, circulant(8, &[1, 4]).unwrap());
        assert_eq!(l8.regularity(), Some(3));
        assert_eq!(andrasfai(3).unwrap(), l8);
        assert_eq!(andrasfai(4).unwrap().regularity(), Some(4));
        assert_eq!(doob(3, 2).unwrap(), circulant(6, &[1, 3]).unwrap());
        assert!(andrasfai(1).is_err());
        assert!(mobius_ladder(7).is_err());
        assert!(mobius_ladder(2).is_err());
    }

    #[test]
    fn products() {
        let k2 = Graph::complete(2).unwrap();
        assert_eq!(strong_product(&k2, &k2), Graph::complete(4).unwrap());
        let c4 = circulant(4, &[1]).unwrap();
        assert!(cartesian_product(&c4, &k2).is_connected());
        let two_edges = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!cartesian_product(&c4, &two_edges).is_connected());
        assert!(!strong_product(&c4, &two_edges).is_connected());
        let c5 = circulant(5, &[1]).unwrap();
        assert_eq!(cartesian_product(&c4, &c5).regularity(), Some(4));
        assert_eq!(strong_product(&c4, &c5).regularity(), Some(8));
    }

    #[test]
    fn family_syntax() {
        assert_eq!(
            parse_family("circulant:16:1,6,8").unwrap(),
            circulant(16, &[1, 6, 8]).unwrap()
        );
        assert_eq!(parse_family("mobius:8").unwrap(), mobius_ladder(8).unwrap());
        assert_eq!(parse_family("doob:3:4").unwrap(), doob(3, 4).unwrap());
        assert_eq!(
            parse_family("complement(powercycle:8:1)").unwrap(),
            complement_power_of_cycle(8, 1).unwrap()
        );
        let g = parse_family("cartesian(circulant:4:1,hypercube:1)").unwrap();
        assert_eq!(
            g,
            cartesian_product(&circulant(4, &[1]).unwrap(), &hypercube(1).unwrap())
        );
        let g = parse_family("strong(circulant:8:1,4,andrasfai:2)").unwrap();
        assert_eq!(g.order(), 40);
        assert_eq!(
            parse_family("catalog:fig4-d5").unwrap().regularity(),
            Some(5)
        );
        assert!(parse_family("circulant:8").is_err());
        assert!(parse_family("bogus:3").is_err());
        assert!(parse_family("complement(mobius:8").is_err());
        assert!(parse_family("hypercube:3 junk").is_err());
    }
}
