//! Line-oriented text formats for tables and posets. `#` starts a comment.
//!
//! ```text
//! aritygap-table v1
//! domain: 0 1
//! codomain: 0 1          # or: codomain: rational
//! arity: 2
//! kind: function         # optional; also setfunction, mobius
//! table:
//! 0 0 -> 0
//! 0 1 -> 0
//! 1 0 -> 0
//! 1 1 -> 1
//! ```
//!
//! For `setfunction` and `mobius` tables the domain is `0 1`, the codomain
//! is rational and the row for `e_S` holds `v(S)` or `m(S)`.
//!
//! ```text
//! aritygap-poset v1
//! elements: 0 a b 1
//! covers:
//! 0 < a
//! ```

use std::collections::BTreeMap;

use crate::boolfn::{vertex_index, vertex_mask, MobiusCoefficients, SetFunction};
use crate::error::{Error, Result};
use crate::fnalg::{Carrier, Codomain, FiniteFunction, TupleSpace};
use crate::order::Poset;
use crate::rational::{format_rational, parse_rational, Rational};

pub const TABLE_MAGIC: &str = "aritygap-table v1";
pub const POSET_MAGIC: &str = "aritygap-poset v1";

/// Spelled out by `aritygap formats`.
pub const FORMAT_HELP: &str = "\
Table files
  aritygap-table v1
  domain: e1 e2 ...                 elements of A, in order
  codomain: e1 e2 ... | rational    elements of B, or exact rationals
  arity: n
  kind: function|setfunction|mobius optional, default function
  table:
  a1 a2 ... an -> value             one row per tuple of A^n, each once

  Rows may come in any order; output is always lexicographic with the
  first coordinate most significant. Rationals are written p or p/q.
  setfunction and mobius tables need domain 0 1 and a rational codomain;
  the row for the characteristic vector of S holds v(S) or m(S).

Poset files
  aritygap-poset v1
  elements: e1 e2 ...
  covers:
  x < y                             one strict relation per line

  The order is the reflexive-transitive closure of the listed relations.

'#' starts a comment anywhere on a line.
";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    Function,
    SetFunction,
    Mobius,
}

impl TableKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TableKind::Function => "function",
            TableKind::SetFunction => "setfunction",
            TableKind::Mobius => "mobius",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableFile {
    Function(FiniteFunction),
    SetFunction(SetFunction),
    Mobius(MobiusCoefficients),
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((k + 1, line))
    })
}

struct Header<'a> {
    fields: BTreeMap<&'a str, (usize, &'a str)>,
    body: Vec<(usize, &'a str)>,
    last_line: usize,
}

/// Splits `key: value` header lines from the body after `body_key:`.
fn read_header<'a>(text: &'a str, magic: &str, body_key: &str, keys: &[&str]) -> Result<Header<'a>> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, l)) if l == magic => {}
        Some((n, l)) => return Err(parse_error(n, format!("expected `{magic}`, found `{l}`"))),
        None => return Err(parse_error(1, format!("empty file, expected `{magic}`"))),
    }
    let mut fields = BTreeMap::new();
    let mut body = Vec::new();
    let mut in_body = false;
    let mut last_line = 1;
    for (n, line) in lines {
        last_line = n;
        if in_body {
            body.push((n, line));
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(parse_error(n, format!("expected `key: value`, found `{line}`")));
        };
        let key = key.trim();
        let value = value.trim();
        if key == body_key {
            if !value.is_empty() {
                return Err(parse_error(n, format!("`{body_key}:` takes no value")));
            }
            in_body = true;
        } else if keys.contains(&key) {
            if fields.insert(key, (n, value)).is_some() {
                return Err(parse_error(n, format!("duplicate `{key}`")));
            }
        } else {
            return Err(parse_error(n, format!("unknown field `{key}`")));
        }
    }
    if !in_body {
        return Err(parse_error(last_line, format!("missing `{body_key}:` section")));
    }
    Ok(Header {
        fields,
        body,
        last_line,
    })
}

impl<'a> Header<'a> {
    fn required(&self, key: &str) -> Result<(usize, &'a str)> {
        self.fields
            .get(key)
            .copied()
            .ok_or_else(|| parse_error(self.last_line, format!("missing `{key}:`")))
    }
}

fn carrier(line: usize, name: &str, value: &str) -> Result<Carrier> {
    let elements: Vec<&str> = value.split_whitespace().collect();
    Carrier::new(name, elements).map_err(|e| parse_error(line, e.to_string()))
}

pub fn parse_table(text: &str) -> Result<TableFile> {
    let h = read_header(text, TABLE_MAGIC, "table", &["domain", "codomain", "arity", "kind"])?;
    let (dl, dv) = h.required("domain")?;
    let domain = carrier(dl, "A", dv)?;
    let (cl, cv) = h.required("codomain")?;
    let codomain = if cv == "rational" {
        None
    } else {
        Some(carrier(cl, "B", cv)?)
    };
    let (al, av) = h.required("arity")?;
    let arity: usize = av
        .parse()
        .ok()
        .filter(|&n| (1..=16).contains(&n))
        .ok_or_else(|| parse_error(al, format!("arity must be an integer in 1..=16, found `{av}`")))?;
    let kind = match h.fields.get("kind") {
        None | Some((_, "function")) => TableKind::Function,
        Some((_, "setfunction")) => TableKind::SetFunction,
        Some((_, "mobius")) => TableKind::Mobius,
        Some((n, other)) => return Err(parse_error(*n, format!("unknown kind `{other}`"))),
    };
    let space = TupleSpace::new(domain.len(), arity);
    let size = usize::try_from(
        (domain.len() as u64)
            .checked_pow(arity as u32)
            .filter(|&s| s <= 1 << 24)
            .ok_or_else(|| parse_error(al, "table too large"))?,
    )
    .expect("bounded");
    let mut rows: Vec<Option<(usize, &str)>> = vec![None; size];
    for &(n, line) in &h.body {
        let Some((lhs, rhs)) = line.split_once("->") else {
            return Err(parse_error(n, format!("expected `a1 ... an -> value`, found `{line}`")));
        };
        let coords: Vec<&str> = lhs.split_whitespace().collect();
        if coords.len() != arity {
            return Err(parse_error(
                n,
                format!("expected {arity} coordinates, found {}", coords.len()),
            ));
        }
        let mut tuple = Vec::with_capacity(arity);
        for c in coords {
            tuple.push(
                domain
                    .index_of(c)
                    .ok_or_else(|| parse_error(n, format!("`{c}` is not a domain element")))?,
            );
        }
        let k = space.index(&tuple);
        if let Some((first, _)) = rows[k] {
            return Err(parse_error(n, format!("tuple repeated (first given on line {first})")));
        }
        rows[k] = Some((n, rhs.trim()));
    }
    if let Some(k) = rows.iter().position(Option::is_none) {
        let missing: Vec<&str> = space.decode(k).iter().map(|&d| domain.element(d)).collect();
        return Err(parse_error(
            h.last_line,
            format!("missing row for tuple ({})", missing.join(" ")),
        ));
    }
    let rows: Vec<(usize, &str)> = rows.into_iter().map(|r| r.expect("checked")).collect();
    match codomain {
        Some(b) => {
            if kind != TableKind::Function {
                return Err(parse_error(cl, format!("{} tables need `codomain: rational`", kind.as_str())));
            }
            let mut table = Vec::with_capacity(size);
            for (n, v) in rows {
                table.push(
                    b.index_of(v)
                        .ok_or_else(|| parse_error(n, format!("`{v}` is not a codomain element")))?,
                );
            }
            Ok(TableFile::Function(
                FiniteFunction::new(domain, arity, Codomain::Finite(b), table)
                    .map_err(|e| parse_error(h.last_line, e.to_string()))?,
            ))
        }
        None => {
            let mut values = Vec::with_capacity(size);
            for (n, v) in rows {
                values.push(
                    parse_rational(v).ok_or_else(|| parse_error(n, format!("`{v}` is not a rational")))?,
                );
            }
            if kind != TableKind::Function && !domain.is_boolean() {
                return Err(parse_error(dl, format!("{} tables need `domain: 0 1`", kind.as_str())));
            }
            let by_mask = || -> Vec<Rational> {
                (0..size).map(|mask| values[vertex_index(arity, mask)].clone()).collect()
            };
            Ok(match kind {
                TableKind::Function => TableFile::Function(
                    FiniteFunction::from_rational_values(domain, arity, values.clone())
                        .map_err(|e| parse_error(h.last_line, e.to_string()))?,
                ),
                TableKind::SetFunction => TableFile::SetFunction(
                    SetFunction::new(arity, by_mask()).map_err(|e| parse_error(h.last_line, e.to_string()))?,
                ),
                TableKind::Mobius => TableFile::Mobius(
                    MobiusCoefficients::new(arity, by_mask())
                        .map_err(|e| parse_error(h.last_line, e.to_string()))?,
                ),
            })
        }
    }
}

fn write_rows(out: &mut String, domain: &Carrier, arity: usize, value: impl Fn(usize) -> String) {
    let space = TupleSpace::new(domain.len(), arity);
    for (k, t) in space.tuples().enumerate() {
        let coords: Vec<&str> = t.iter().map(|&d| domain.element(d)).collect();
        out.push_str(&format!("{} -> {}\n", coords.join(" "), value(k)));
    }
}

pub fn serialize_function(f: &FiniteFunction) -> String {
    let mut out = format!("{TABLE_MAGIC}\n");
    out.push_str(&format!("domain: {}\n", f.domain().elements().join(" ")));
    match f.codomain() {
        Codomain::Finite(b) => out.push_str(&format!("codomain: {}\n", b.elements().join(" "))),
        Codomain::Rational(_) => out.push_str("codomain: rational\n"),
    }
    out.push_str(&format!("arity: {}\ntable:\n", f.arity()));
    write_rows(&mut out, f.domain(), f.arity(), |k| f.codomain().symbol(f.table()[k]));
    out
}

fn serialize_cube(kind: TableKind, n: usize, by_mask: &[Rational]) -> String {
    let mut out = format!(
        "{TABLE_MAGIC}\ndomain: 0 1\ncodomain: rational\narity: {n}\nkind: {}\ntable:\n",
        kind.as_str()
    );
    write_rows(&mut out, &Carrier::boolean(), n, |k| format_rational(&by_mask[vertex_mask(n, k)]));
    out
}

pub fn serialize_set_function(v: &SetFunction) -> String {
    serialize_cube(TableKind::SetFunction, v.n(), v.values())
}

pub fn serialize_mobius(m: &MobiusCoefficients) -> String {
    serialize_cube(TableKind::Mobius, m.n(), m.coefficients())
}

pub fn serialize_table(t: &TableFile) -> String {
    match t {
        TableFile::Function(f) => serialize_function(f),
        TableFile::SetFunction(v) => serialize_set_function(v),
        TableFile::Mobius(m) => serialize_mobius(m),
    }
}

pub fn parse_poset(text: &str) -> Result<Poset> {
    let h = read_header(text, POSET_MAGIC, "covers", &["elements"])?;
    let (el, ev) = h.required("elements")?;
    let c = carrier(el, "P", ev)?;
    let mut covers = Vec::new();
    for &(n, line) in &h.body {
        let Some((lo, hi)) = line.split_once('<') else {
            return Err(parse_error(n, format!("expected `x < y`, found `{line}`")));
        };
        let find = |s: &str| {
            let s = s.trim();
            c.index_of(s)
                .ok_or_else(|| parse_error(n, format!("`{s}` is not an element")))
        };
        covers.push((find(lo)?, find(hi)?));
    }
    Poset::from_covers(c, &covers).map_err(|e| parse_error(h.last_line, e.to_string()))
}

/// Writes the Hasse diagram.
pub fn serialize_poset(p: &Poset) -> String {
    let c = p.carrier();
    let mut out = format!("{POSET_MAGIC}\nelements: {}\ncovers:\n", c.elements().join(" "));
    for (a, b) in p.covers() {
        out.push_str(&format!("{} < {}\n", c.element(a), c.element(b)));
    }
    out
}
