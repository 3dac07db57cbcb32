//! CPLEX LP text: a deterministic writer for [`MilpModel`] and a reader for the
//! same dialect that checks its grammar and evaluates assignments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{MilpModel, VarKind, Variant};
use crate::error::{Error, Result};

const WIDTH: usize = 80;

/// Appends tokens to `out`, starting a continuation line when one would overflow.
struct Wrapper<'a> {
    out: &'a mut String,
    line: usize,
}

impl<'a> Wrapper<'a> {
    fn start(out: &'a mut String, head: &str) -> Self {
        out.push_str(head);
        Wrapper {
            line: head.len(),
            out,
        }
    }

    fn push(&mut self, token: &str) {
        if self.line + 1 + token.len() > WIDTH && self.line > 0 {
            self.out.push_str("\n  ");
            self.line = 2;
        }
        self.out.push(' ');
        self.out.push_str(token);
        self.line += 1 + token.len();
    }

    fn end(self) {
        self.out.push('\n');
    }
}

fn term_tokens(coef: &BigInt, var: &str, first: bool) -> Vec<String> {
    let mut t = Vec::new();
    if coef.is_negative() {
        t.push("-".to_string());
    } else if !first {
        t.push("+".to_string());
    }
    let mag = coef.abs();
    if !mag.is_one() {
        t.push(mag.to_string());
    }
    t.push(var.to_string());
    t
}

/// Renders the model. Row order, column order and line breaks depend only on the
/// model, so equal models give byte-identical files.
pub fn render_lp(model: &MilpModel) -> String {
    let spec = &model.spec;
    let mut out = String::new();
    let variant = match spec.variant {
        Variant::Model1 => "model1".to_string(),
        Variant::Model2 { t } => format!("model2 t={t} base={}", model.base.unwrap_or_default()),
    };
    let _ = writeln!(
        out,
        "\\ {variant} n={} d={} mode={}{}",
        spec.n,
        spec.d,
        spec.mode,
        if spec.literal { " literal" } else { "" }
    );
    out.push_str("Minimize\n obj: 0\nSubject To\n");
    for row in &model.rows {
        let mut w = Wrapper::start(&mut out, &format!(" {}:", row.name));
        for (j, (c, v)) in row.terms.iter().enumerate() {
            // keep a sign and its coefficient on the same line as the variable
            w.push(&term_tokens(c, v, j == 0).join(" "));
        }
        w.push(&format!("= {}", row.rhs));
        w.end();
    }
    let bounded: Vec<_> = model
        .variables
        .iter()
        .filter(|v| v.upper.is_some())
        .collect();
    if !bounded.is_empty() {
        out.push_str("Bounds\n");
        for v in bounded {
            let _ = writeln!(
                out,
                " 0 <= {} <= {}",
                v.name,
                v.upper.as_ref().expect("filtered")
            );
        }
    }
    for (title, kind) in [("Binary", VarKind::Binary), ("General", VarKind::Integer)] {
        let names: Vec<&str> = model
            .variables
            .iter()
            .filter(|v| v.kind == kind)
            .map(|v| v.name.as_str())
            .collect();
        if names.is_empty() {
            continue;
        }
        out.push_str(title);
        out.push('\n');
        let mut w = Wrapper::start(&mut out, "");
        for name in names {
            w.push(name);
        }
        w.end();
    }
    out.push_str("End\n");
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpRow {
    pub name: String,
    pub terms: Vec<(BigInt, String)>,
    pub sense: Sense,
    pub rhs: BigInt,
}

/// A parsed LP file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LpProgram {
    pub objective: Vec<(BigInt, String)>,
    pub objective_constant: BigInt,
    pub rows: Vec<LpRow>,
    pub bounds: BTreeMap<String, (Option<BigInt>, Option<BigInt>)>,
    pub binaries: BTreeSet<String>,
    pub generals: BTreeSet<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Binary,
    General,
    End,
}

fn section_of(line: &str) -> Option<Section> {
    match line.trim().to_ascii_lowercase().as_str() {
        "minimize" | "minimise" | "min" | "maximize" | "maximise" | "max" => {
            Some(Section::Objective)
        }
        "subject to" | "such that" | "st" | "s.t." => Some(Section::Constraints),
        "bounds" | "bound" => Some(Section::Bounds),
        "binary" | "binaries" | "bin" => Some(Section::Binary),
        "general" | "generals" | "gen" => Some(Section::General),
        "end" => Some(Section::End),
        _ => None,
    }
}

fn perr(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("LP line {line}: {msg}"))
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || "_.[]".contains(c))
}

fn number(s: &str) -> Option<BigInt> {
    s.parse().ok()
}

/// Parses a linear expression `[-] [c] x (+|-) [c] y ...` into terms; a lone
/// number is a constant.
fn linear(tokens: &[&str], line: usize) -> Result<(Vec<(BigInt, String)>, BigInt)> {
    let mut terms = Vec::new();
    let mut constant = BigInt::zero();
    let mut i = 0;
    let mut first = true;
    while i < tokens.len() {
        let mut sign = BigInt::one();
        match tokens[i] {
            "+" => i += 1,
            "-" => {
                sign = -sign;
                i += 1;
            }
            _ if !first => {
                return Err(perr(
                    line,
                    format!("expected '+' or '-' before '{}'", tokens[i]),
                ))
            }
            _ => {}
        }
        first = false;
        let tok = tokens.get(i).ok_or_else(|| perr(line, "dangling sign"))?;
        if let Some(c) = number(tok) {
            i += 1;
            match tokens.get(i) {
                Some(v) if is_name(v) => {
                    terms.push((sign * c, v.to_string()));
                    i += 1;
                }
                _ => constant += sign * c,
            }
        } else if is_name(tok) {
            terms.push((sign, tok.to_string()));
            i += 1;
        } else {
            return Err(perr(line, format!("unexpected token '{tok}'")));
        }
    }
    Ok((terms, constant))
}

/// Reads the LP subset written by [`render_lp`]: named rows, `=`/`<=`/`>=` with a
/// numeric right-hand side, two-sided or one-sided bounds, and integrality
/// sections. Every variable used must be declared binary or general.
pub fn parse_lp(text: &str) -> Result<LpProgram> {
    if !text.is_ascii() {
        return Err(Error::Parse("LP text is not ASCII".into()));
    }
    let mut prog = LpProgram::default();
    let mut section = Section::Preamble;
    let mut pending: Vec<(String, usize)> = Vec::new();
    let mut names = BTreeSet::new();

    let flush = |pending: &mut Vec<(String, usize)>,
                 prog: &mut LpProgram,
                 names: &mut BTreeSet<String>|
     -> Result<()> {
        if pending.is_empty() {
            return Ok(());
        }
        let line = pending[0].1;
        let joined: String = pending
            .iter()
            .map(|(s, _)| s.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        pending.clear();
        let tokens: Vec<&str> = joined.split_whitespace().collect();
        let (name, rest) = match tokens.first() {
            Some(t) if t.ends_with(':') && is_name(t.trim_end_matches(':')) => {
                (t.trim_end_matches(':').to_string(), &tokens[1..])
            }
            _ => return Err(perr(line, "constraint without a name")),
        };
        if !names.insert(name.clone()) {
            return Err(perr(line, format!("duplicate row name '{name}'")));
        }
        let pos = rest
            .iter()
            .position(|t| matches!(*t, "=" | "<=" | ">=" | "=<" | "=>"))
            .ok_or_else(|| perr(line, format!("row '{name}' has no relation")))?;
        let sense = match rest[pos] {
            "=" => Sense::Eq,
            "<=" | "=<" => Sense::Le,
            _ => Sense::Ge,
        };
        let (terms, constant) = linear(&rest[..pos], line)?;
        if !constant.is_zero() {
            return Err(perr(line, "constant on the left-hand side"));
        }
        if terms.is_empty() {
            return Err(perr(line, format!("row '{name}' is empty")));
        }
        let rhs_tokens = &rest[pos + 1..];
        let (rhs_terms, rhs) = linear(rhs_tokens, line)?;
        if !rhs_terms.is_empty() || rhs_tokens.is_empty() {
            return Err(perr(
                line,
                format!("row '{name}' needs a numeric right-hand side"),
            ));
        }
        prog.rows.push(LpRow {
            name,
            terms,
            sense,
            rhs,
        });
        Ok(())
    };

    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('\\').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if let Some(next) = section_of(line) {
            flush(&mut pending, &mut prog, &mut names)?;
            if next as u8 <= section as u8 {
                return Err(perr(line_no, "section out of order"));
            }
            section = next;
            continue;
        }
        match section {
            Section::Preamble => return Err(perr(line_no, "content before the objective")),
            Section::End => return Err(perr(line_no, "content after End")),
            Section::Objective => {
                let tokens: Vec<&str> = line.split_whitespace().collect();
                let body = match tokens.first() {
                    Some(t) if t.ends_with(':') => &tokens[1..],
                    _ => &tokens[..],
                };
                let (terms, constant) = linear(body, line_no)?;
                prog.objective.extend(terms);
                prog.objective_constant += constant;
            }
            Section::Constraints => {
                let starts_row = line
                    .split_whitespace()
                    .next()
                    .is_some_and(|t| t.ends_with(':'));
                if starts_row {
                    flush(&mut pending, &mut prog, &mut names)?;
                } else if pending.is_empty() {
                    return Err(perr(line_no, "continuation without a row"));
                }
                pending.push((line.to_string(), line_no));
            }
            Section::Bounds => {
                let t: Vec<&str> = line.split_whitespace().collect();
                let (var, lo, hi) = match t.as_slice() {
                    [lo, "<=", v, "<=", hi] => (*v, number(lo), number(hi)),
                    [v, "<=", hi] => (*v, None, number(hi)),
                    [v, ">=", lo] => (*v, number(lo), None),
                    [v, "=", x] => (*v, number(x), number(x)),
                    _ => return Err(perr(line_no, "unrecognised bound")),
                };
                if !is_name(var) || (lo.is_none() && hi.is_none()) {
                    return Err(perr(line_no, "malformed bound"));
                }
                prog.bounds.insert(var.to_string(), (lo, hi));
            }
            Section::Binary | Section::General => {
                for v in line.split_whitespace() {
                    if !is_name(v) {
                        return Err(perr(line_no, format!("bad variable name '{v}'")));
                    }
                    let set = if section == Section::Binary {
                        &mut prog.binaries
                    } else {
                        &mut prog.generals
                    };
                    if !set.insert(v.to_string()) {
                        return Err(perr(line_no, format!("'{v}' declared twice")));
                    }
                }
            }
        }
    }
    flush(&mut pending, &mut prog, &mut names)?;
    if section != Section::End {
        return Err(Error::Parse("LP text does not finish with End".into()));
    }
    if let Some(v) = prog.binaries.intersection(&prog.generals).next() {
        return Err(Error::Parse(format!("'{v}' is both binary and general")));
    }
    let declared = |v: &String| prog.binaries.contains(v) || prog.generals.contains(v);
    for row in &prog.rows {
        if let Some((_, v)) = row.terms.iter().find(|(_, v)| !declared(v)) {
            return Err(Error::Parse(format!(
                "row '{}' uses undeclared '{v}'",
                row.name
            )));
        }
    }
    if let Some(v) = prog.bounds.keys().find(|v| !declared(v)) {
        return Err(Error::Parse(format!("bound on undeclared '{v}'")));
    }
    Ok(prog)
}

impl LpProgram {
    pub fn variables(&self) -> impl Iterator<Item = &String> {
        self.binaries.iter().chain(&self.generals)
    }

    /// Range of a variable: explicit bounds, else `[0, 1]` for binaries and
    /// `[0, inf)` for generals.
    pub fn range(&self, var: &str) -> (Option<BigInt>, Option<BigInt>) {
        if let Some(b) = self.bounds.get(var) {
            return b.clone();
        }
        let hi = self.binaries.contains(var).then(BigInt::one);
        (Some(BigInt::zero()), hi)
    }

    /// Checks every domain, bound and row against the assignment; the first
    /// failure is reported.
    pub fn check(&self, values: &BTreeMap<String, BigInt>) -> std::result::Result<(), String> {
        for v in self.variables() {
            let x = values.get(v).ok_or_else(|| format!("{v} unassigned"))?;
            let (lo, hi) = self.range(v);
            if lo.is_some_and(|l| *x < l) || hi.is_some_and(|h| *x > h) {
                return Err(format!("{v} = {x} out of range"));
            }
        }
        for row in &self.rows {
            let mut lhs = BigInt::zero();
            for (c, v) in &row.terms {
                lhs += c * values.get(v).ok_or_else(|| format!("{v} unassigned"))?;
            }
            let ok = match row.sense {
                Sense::Eq => lhs == row.rhs,
                Sense::Le => lhs <= row.rhs,
                Sense::Ge => lhs >= row.rhs,
            };
            if !ok {
                return Err(format!(
                    "row {} evaluates to {lhs}, rhs {}",
                    row.name, row.rhs
                ));
            }
        }
        Ok(())
    }
}
