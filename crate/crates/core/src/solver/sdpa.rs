//! SDPA sparse format (`.dat-s`).
//!
//! SDPA states its primal as `min Σ c_i x_i` s.t. `Σ F_i x_i - F_0 ⪰ 0`,
//! whose dual is `max <F_0, Y>` s.t. `<F_i, Y> = c_i`, `Y ⪰ 0`. Our problem is
//! that dual with `F_0 = -C`, `F_i = A_i` and `c = b`, so an external solver
//! reports the negated optimal value.

use std::fmt::Write;

use super::{Block, SdpProblem, SymMatrix};
use crate::error::{Error, Result};

pub fn export_sdpa_sparse(problem: &SdpProblem) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\"min <C,X> s.t. <A_i,X> = b_i, X psd; written with F0 = -C, Fi = A_i\""
    );
    let _ = writeln!(out, "{}", problem.constraints.len());
    let _ = writeln!(out, "{}", problem.blocks.len());
    let sizes: Vec<String> = problem.blocks.iter().map(|b| b.sdpa_size().to_string()).collect();
    let _ = writeln!(out, "{}", sizes.join(" "));
    let rhs: Vec<String> = problem.constraints.iter().map(|c| fmt_f64(c.b)).collect();
    let _ = writeln!(out, "{}", rhs.join(" "));
    let mut write_mat = |matno: usize, m: &SymMatrix, sign: f64| {
        let mut m = m.clone();
        m.canonicalize();
        for &(b, i, j, v) in m.entries() {
            let _ = writeln!(out, "{matno} {} {} {} {}", b + 1, i + 1, j + 1, fmt_f64(sign * v));
        }
    };
    write_mat(0, &problem.objective, -1.0);
    for (k, c) in problem.constraints.iter().enumerate() {
        write_mat(k + 1, &c.a, 1.0);
    }
    out
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn sdpa_err(line: usize, message: impl Into<String>) -> Error {
    Error::Sdpa {
        line,
        message: message.into(),
    }
}

/// Parse SDPA sparse text into a problem (inverse of [`export_sdpa_sparse`]).
pub fn parse_sdpa_sparse(text: &str) -> Result<SdpProblem> {
    // tokens with their 1-based line numbers; braces, parentheses and commas
    // are separators in the format
    let mut toks: Vec<(usize, String)> = Vec::new();
    let mut header_done = false;
    for (k, line) in text.lines().enumerate() {
        let t = line.trim();
        if !header_done && (t.starts_with('"') || t.starts_with('*')) {
            continue;
        }
        if t.is_empty() {
            continue;
        }
        header_done = true;
        let cleaned: String = t
            .chars()
            .map(|c| if "{}(),".contains(c) { ' ' } else { c })
            .collect();
        toks.extend(cleaned.split_whitespace().map(|s| (k + 1, s.to_string())));
    }
    let mut iter = toks.into_iter().peekable();
    let mut next = |what: &str| -> Result<(usize, String)> {
        iter.next()
            .ok_or_else(|| sdpa_err(0, format!("unexpected end of input reading {what}")))
    };
    let parse_int = |(line, s): (usize, String), what: &str| -> Result<i64> {
        s.parse::<i64>()
            .map_err(|_| sdpa_err(line, format!("bad {what} `{s}`")))
    };
    let parse_f = |(line, s): (usize, String)| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|_| sdpa_err(line, format!("bad number `{s}`")))
    };

    let m = parse_int(next("m")?, "constraint count")?;
    let nb = parse_int(next("nblocks")?, "block count")?;
    if m < 0 || nb <= 0 {
        return Err(sdpa_err(0, "invalid problem dimensions"));
    }
    let mut blocks = Vec::new();
    for _ in 0..nb {
        let t = next("block size")?;
        let line = t.0;
        let s = parse_int(t, "block size")?;
        blocks.push(match s {
            0 => return Err(sdpa_err(line, "block size 0")),
            s if s > 0 => Block::Psd(s as usize),
            s => Block::Diag(s.unsigned_abs() as usize),
        });
    }
    let mut prob = SdpProblem::new(blocks);
    let mut rhs = Vec::new();
    for _ in 0..m {
        rhs.push(parse_f(next("right-hand side")?)?);
    }
    let mut mats = vec![SymMatrix::new(); m as usize];
    while let Ok(first) = next("entry") {
        let line = first.0;
        let matno = parse_int(first, "matrix number")?;
        let b = parse_int(next("block")?, "block")?;
        let i = parse_int(next("row")?, "row")?;
        let j = parse_int(next("column")?, "column")?;
        let v = parse_f(next("value")?)?;
        if matno < 0 || matno > m || b < 1 || b > nb || i < 1 || j < 1 {
            return Err(sdpa_err(line, "entry index out of range"));
        }
        let (b, i, j) = ((b - 1) as usize, (i - 1) as usize, (j - 1) as usize);
        if i.max(j) >= prob.blocks[b].size() {
            return Err(sdpa_err(line, "entry outside its block"));
        }
        if matno == 0 {
            prob.objective.add(b, i, j, -v);
        } else {
            mats[(matno - 1) as usize].add(b, i, j, v);
        }
    }
    prob.objective.canonicalize();
    for (mut a, b) in mats.into_iter().zip(rhs) {
        a.canonicalize();
        prob.add_constraint(a, b);
    }
    prob.validate()?;
    Ok(prob)
}
