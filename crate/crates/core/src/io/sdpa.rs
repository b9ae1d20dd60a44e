//! SDPA sparse format (`.dat-s`) with a single block.
//!
//! SDPA solves `max F₀•Y  s.t. Fᵢ•Y = cᵢ, Y ⪰ 0` as its dual, so
//! `min C•X, Aᵢ•X = bᵢ` is written with `F₀ = −C`, `Fᵢ = Aᵢ`, `c = b`.
//! Entries are upper triangular, 1-based, sorted by `(matno, i, j)`.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use super::{content_lines, num, parse_num, parse_usize, read_text, write_text};
use crate::error::{Error, Result};
use crate::sdo::SdoInstance;

pub fn to_string(inst: &SdoInstance) -> String {
    let (m, n) = (inst.m(), inst.n());
    let mut out = String::from("\"conigen sdo instance: min C.X s.t. A_i.X = b_i, X psd\"\n");
    let _ = writeln!(out, "{m}\n1\n{n}");
    let b: Vec<String> = inst.b.iter().map(|v| num(*v)).collect();
    let _ = writeln!(out, "{}", b.join(" "));
    let neg_c = -&inst.c;
    for (k, mat) in std::iter::once(&neg_c).chain(&inst.a).enumerate() {
        for i in 0..n {
            for j in i..n {
                let v = mat[(i, j)];
                if v != 0.0 {
                    let _ = writeln!(out, "{k} 1 {} {} {}", i + 1, j + 1, num(v));
                }
            }
        }
    }
    out
}

pub fn write(inst: &SdoInstance, path: &Path) -> Result<()> {
    write_text(path, &to_string(inst))
}

pub fn parse(text: &str) -> Result<SdoInstance> {
    let mut lines = content_lines(text, &['"', '*']);
    let mut header = |field: &str| -> Result<(usize, String)> {
        lines
            .next()
            .map(|(ln, l)| (ln, l.to_string()))
            .ok_or_else(|| Error::parse(text.lines().count(), field, "unexpected end of file"))
    };
    let (ln, l) = header("mDIM")?;
    let m = parse_usize(l.split_whitespace().next().unwrap_or(""), ln, "mDIM")?;
    let (ln, l) = header("nBLOCK")?;
    if parse_usize(l.split_whitespace().next().unwrap_or(""), ln, "nBLOCK")? != 1 {
        return Err(Error::parse(ln, "nBLOCK", "only single-block files are supported"));
    }
    let (ln, l) = header("bLOCKsTRUCT")?;
    let n = parse_usize(l.split_whitespace().next().unwrap_or("").trim_start_matches('+'), ln, "bLOCKsTRUCT")?;
    let (ln, l) = header("c")?;
    let b: Vec<f64> = l
        .split(|c: char| c.is_whitespace() || matches!(c, ',' | '{' | '}' | '(' | ')'))
        .filter(|t| !t.is_empty())
        .map(|t| parse_num(t, ln, "c"))
        .collect::<Result<_>>()?;
    if b.len() != m {
        return Err(Error::parse(ln, "c", format!("expected {m} values, found {}", b.len())));
    }
    let mut mats = vec![DMatrix::zeros(n, n); m + 1];
    for (ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 5 {
            return Err(Error::parse(ln, "entry", "expected `matno block i j value`"));
        }
        let k = parse_usize(toks[0], ln, "matno")?;
        let blk = parse_usize(toks[1], ln, "block")?;
        let i = parse_usize(toks[2], ln, "i")?;
        let j = parse_usize(toks[3], ln, "j")?;
        if k > m || blk != 1 || i == 0 || j == 0 || i > n || j > n {
            return Err(Error::parse(ln, "entry", "index out of range"));
        }
        let v = parse_num(toks[4], ln, "value")?;
        mats[k][(i - 1, j - 1)] = v;
        mats[k][(j - 1, i - 1)] = v;
    }
    let c = -mats.remove(0);
    Ok(SdoInstance {
        a: mats,
        b: DVector::from_vec(b),
        c,
    })
}

pub fn read(path: &Path) -> Result<SdoInstance> {
    parse(&read_text(path)?)
}
