//! Conic Benchmark Format, version 2.
//!
//! Constraints follow the CBF convention `Ax + b ∈ K`, so `Ax = b` is written
//! with `BCOORD = −b` in an `L=` domain. Runs of one-dimensional cones are
//! merged into a single `L+` domain.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use super::{content_lines, num, parse_num, parse_usize, read_text, write_text};
use crate::error::{Error, Result};
use crate::soco::SocoInstance;

fn domains(dims: &[usize]) -> Vec<(&'static str, usize)> {
    let mut out: Vec<(&'static str, usize)> = Vec::new();
    for &d in dims {
        match (d, out.last_mut()) {
            (1, Some(("L+", k))) => *k += 1,
            (1, _) => out.push(("L+", 1)),
            (d, _) => out.push(("Q", d)),
        }
    }
    out
}

pub fn to_string(inst: &SocoInstance) -> String {
    let (m, n) = (inst.rows(), inst.cols());
    let mut out = String::from("# conigen soco instance: min c'x s.t. Ax = b, x in product of Lorentz cones\n");
    out.push_str("VER\n2\n\nOBJSENSE\nMIN\n\n");
    let doms = domains(&inst.cone_dims);
    let _ = writeln!(out, "VAR\n{n} {}", doms.len());
    for (k, d) in &doms {
        let _ = writeln!(out, "{k} {d}");
    }
    let _ = writeln!(out, "\nCON\n{m} 1\nL= {m}\n");

    let obj: Vec<(usize, f64)> = inst.c.iter().copied().enumerate().filter(|(_, v)| *v != 0.0).collect();
    let _ = writeln!(out, "OBJACOORD\n{}", obj.len());
    for (j, v) in obj {
        let _ = writeln!(out, "{j} {}", num(v));
    }
    let mut acoord = Vec::new();
    for i in 0..m {
        for j in 0..n {
            let v = inst.a[(i, j)];
            if v != 0.0 {
                acoord.push(format!("{i} {j} {}", num(v)));
            }
        }
    }
    let _ = writeln!(out, "\nACOORD\n{}", acoord.len());
    for l in acoord {
        let _ = writeln!(out, "{l}");
    }
    let bcoord: Vec<(usize, f64)> = inst.b.iter().copied().enumerate().filter(|(_, v)| *v != 0.0).collect();
    let _ = writeln!(out, "\nBCOORD\n{}", bcoord.len());
    for (i, v) in bcoord {
        let _ = writeln!(out, "{i} {}", num(-v));
    }
    out
}

pub fn write(inst: &SocoInstance, path: &Path) -> Result<()> {
    write_text(path, &to_string(inst))
}

pub fn parse(text: &str) -> Result<SocoInstance> {
    let lines: Vec<(usize, &str)> = content_lines(text, &['#']).map(|(n, l)| (n, l.trim())).collect();
    let end = text.lines().count();
    let mut pos = 0;
    let mut next = |field: &str| -> Result<(usize, Vec<&str>)> {
        let (ln, l) = lines
            .get(pos)
            .ok_or_else(|| Error::parse(end, field, "unexpected end of file"))?;
        pos += 1;
        Ok((*ln, l.split_whitespace().collect()))
    };

    let (mut n, mut m) = (0, 0);
    let mut dims: Vec<usize> = Vec::new();
    let mut c = DVector::zeros(0);
    let mut a = DMatrix::zeros(0, 0);
    let mut b = DVector::zeros(0);
    while let Ok((ln, toks)) = next("keyword") {
        match toks[0] {
            "VER" => {
                let (ln, v) = next("VER")?;
                if v[0] != "2" && v[0] != "1" && v[0] != "3" {
                    return Err(Error::parse(ln, "VER", format!("unsupported version {}", v[0])));
                }
            }
            "OBJSENSE" => {
                let (ln, v) = next("OBJSENSE")?;
                if v[0] != "MIN" {
                    return Err(Error::parse(ln, "OBJSENSE", "only MIN is supported"));
                }
            }
            "VAR" => {
                let (ln, v) = next("VAR")?;
                n = parse_usize(v[0], ln, "VAR")?;
                let k = parse_usize(v.get(1).copied().unwrap_or(""), ln, "VAR")?;
                for _ in 0..k {
                    let (ln, d) = next("VAR domain")?;
                    let size = parse_usize(d.get(1).copied().unwrap_or(""), ln, "VAR domain")?;
                    match d[0] {
                        "L+" => dims.extend(std::iter::repeat_n(1, size)),
                        "Q" => dims.push(size),
                        other => return Err(Error::parse(ln, "VAR domain", format!("unsupported cone `{other}`"))),
                    }
                }
                if dims.iter().sum::<usize>() != n {
                    return Err(Error::parse(ln, "VAR", "cone sizes do not add up to the variable count"));
                }
                c = DVector::zeros(n);
            }
            "CON" => {
                let (ln, v) = next("CON")?;
                m = parse_usize(v[0], ln, "CON")?;
                let k = parse_usize(v.get(1).copied().unwrap_or(""), ln, "CON")?;
                for _ in 0..k {
                    let (ln, d) = next("CON domain")?;
                    if d[0] != "L=" {
                        return Err(Error::parse(ln, "CON domain", "only L= constraints are supported"));
                    }
                }
                a = DMatrix::zeros(m, n);
                b = DVector::zeros(m);
            }
            "OBJACOORD" => {
                let (ln, v) = next("OBJACOORD")?;
                for _ in 0..parse_usize(v[0], ln, "OBJACOORD")? {
                    let (ln, e) = next("OBJACOORD entry")?;
                    let j = parse_usize(e[0], ln, "OBJACOORD")?;
                    if j >= n || e.len() != 2 {
                        return Err(Error::parse(ln, "OBJACOORD", "bad entry"));
                    }
                    c[j] = parse_num(e[1], ln, "OBJACOORD")?;
                }
            }
            "ACOORD" => {
                let (ln, v) = next("ACOORD")?;
                for _ in 0..parse_usize(v[0], ln, "ACOORD")? {
                    let (ln, e) = next("ACOORD entry")?;
                    if e.len() != 3 {
                        return Err(Error::parse(ln, "ACOORD", "expected `i j value`"));
                    }
                    let (i, j) = (parse_usize(e[0], ln, "ACOORD")?, parse_usize(e[1], ln, "ACOORD")?);
                    if i >= m || j >= n {
                        return Err(Error::parse(ln, "ACOORD", "index out of range"));
                    }
                    a[(i, j)] = parse_num(e[2], ln, "ACOORD")?;
                }
            }
            "BCOORD" => {
                let (ln, v) = next("BCOORD")?;
                for _ in 0..parse_usize(v[0], ln, "BCOORD")? {
                    let (ln, e) = next("BCOORD entry")?;
                    let i = parse_usize(e[0], ln, "BCOORD")?;
                    if i >= m || e.len() != 2 {
                        return Err(Error::parse(ln, "BCOORD", "bad entry"));
                    }
                    b[i] = -parse_num(e[1], ln, "BCOORD")?;
                }
            }
            other => return Err(Error::parse(ln, "keyword", format!("unsupported keyword `{other}`"))),
        }
    }
    Ok(SocoInstance {
        cone_dims: dims,
        a,
        b,
        c,
    })
}

pub fn read(path: &Path) -> Result<SocoInstance> {
    parse(&read_text(path)?)
}
