//! MPS for `min cᵀx, Ax = b, x ≥ 0`.
//!
//! Rows are `R1..Rm` (type `E`), columns `X1..Xn`, the objective row is
//! `COST`. Zero coefficients are omitted except the `COST` entry, which is
//! always written so that empty columns survive a round trip. Zero right-hand
//! sides are omitted, as MPS defaults them to zero. Every column carries a `PL`
//! bound, spelling out the default `[0, +inf)`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use super::{content_lines, num, parse_num, read_text, write_text};
use crate::error::{Error, Result};
use crate::lo::LinearInstance;

pub fn to_string(inst: &LinearInstance, name: &str) -> String {
    let (m, n) = (inst.rows(), inst.cols());
    let mut out = String::new();
    let _ = writeln!(out, "NAME          {name}");
    out.push_str("ROWS\n N  COST\n");
    for i in 0..m {
        let _ = writeln!(out, " E  R{}", i + 1);
    }
    out.push_str("COLUMNS\n");
    for j in 0..n {
        let _ = writeln!(out, "    X{:<8} COST      {}", j + 1, num(inst.c[j]));
        for i in 0..m {
            let v = inst.a[(i, j)];
            if v != 0.0 {
                let _ = writeln!(out, "    X{:<8} R{:<8} {}", j + 1, i + 1, num(v));
            }
        }
    }
    out.push_str("RHS\n");
    for i in 0..m {
        if inst.b[i] != 0.0 {
            let _ = writeln!(out, "    RHS       R{:<8} {}", i + 1, num(inst.b[i]));
        }
    }
    out.push_str("BOUNDS\n");
    for j in 0..n {
        let _ = writeln!(out, " PL BND       X{}", j + 1);
    }
    out.push_str("ENDATA\n");
    out
}

pub fn write(inst: &LinearInstance, path: &Path) -> Result<()> {
    write_text(path, &to_string(inst, "conigen"))
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Head,
    Rows,
    Columns,
    Rhs,
    Bounds,
}

/// Reads back files produced by [`write`].
pub fn parse(text: &str) -> Result<LinearInstance> {
    let mut section = Section::Head;
    let mut rows: HashMap<String, usize> = HashMap::new();
    let mut objective = None;
    let mut cols: HashMap<String, usize> = HashMap::new();
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    let mut cost: Vec<f64> = Vec::new();
    let mut rhs: Vec<(usize, f64)> = Vec::new();
    let mut ended = false;

    for (ln, line) in content_lines(text, &['*']) {
        let indented = line.starts_with(' ');
        let toks: Vec<&str> = line.split_whitespace().collect();
        if !indented {
            section = match toks[0] {
                "NAME" => Section::Head,
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => {
                    ended = true;
                    break;
                }
                other => return Err(Error::parse(ln, "section", format!("unknown section `{other}`"))),
            };
            continue;
        }
        match section {
            Section::Head => return Err(Error::parse(ln, "section", "data before ROWS")),
            Section::Rows => {
                let [kind, name] = toks[..] else {
                    return Err(Error::parse(ln, "ROWS", "expected `<type> <name>`"));
                };
                match kind {
                    "N" => objective = Some(name.to_string()),
                    "E" => {
                        let k = rows.len();
                        rows.insert(name.to_string(), k);
                    }
                    other => return Err(Error::parse(ln, "ROWS", format!("unsupported row type `{other}`"))),
                }
            }
            Section::Columns => {
                if toks.len() < 3 || toks.len().is_multiple_of(2) {
                    return Err(Error::parse(ln, "COLUMNS", "expected `<col> <row> <value> [<row> <value>]`"));
                }
                let next = cols.len();
                let j = *cols.entry(toks[0].to_string()).or_insert(next);
                if j == cost.len() {
                    cost.push(0.0);
                }
                for pair in toks[1..].chunks(2) {
                    let v = parse_num(pair[1], ln, "COLUMNS")?;
                    if Some(pair[0]) == objective.as_deref() {
                        cost[j] = v;
                    } else {
                        let i = *rows
                            .get(pair[0])
                            .ok_or_else(|| Error::parse(ln, "COLUMNS", format!("unknown row `{}`", pair[0])))?;
                        entries.push((i, j, v));
                    }
                }
            }
            Section::Rhs => {
                if toks.len() < 3 || toks.len().is_multiple_of(2) {
                    return Err(Error::parse(ln, "RHS", "expected `<set> <row> <value>`"));
                }
                for pair in toks[1..].chunks(2) {
                    let i = *rows
                        .get(pair[0])
                        .ok_or_else(|| Error::parse(ln, "RHS", format!("unknown row `{}`", pair[0])))?;
                    rhs.push((i, parse_num(pair[1], ln, "RHS")?));
                }
            }
            Section::Bounds => {
                if toks.first() != Some(&"PL") {
                    return Err(Error::parse(ln, "BOUNDS", "only PL bounds are supported"));
                }
            }
        }
    }
    if !ended {
        return Err(Error::parse(text.lines().count(), "ENDATA", "missing ENDATA"));
    }
    let (m, n) = (rows.len(), cols.len());
    let mut a = DMatrix::zeros(m, n);
    for (i, j, v) in entries {
        a[(i, j)] = v;
    }
    let mut b = DVector::zeros(m);
    for (i, v) in rhs {
        b[i] = v;
    }
    Ok(LinearInstance {
        a,
        b,
        c: DVector::from_vec(cost),
    })
}

pub fn read(path: &Path) -> Result<LinearInstance> {
    parse(&read_text(path)?)
}
