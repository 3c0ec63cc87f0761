//! The PGSET v1 and ACODE v1 text formats, plus the JSON shapes shared by
//! the command-line tools.
//!
//! Both formats open with a magic line and a field header
//! `F p=<p> m=<m> mod=<c0,c1,...,cm>` recording the modulus explicitly, so
//! nonstandard field constructions round-trip. A set file then carries
//! `k=<k> h=<h> n=<n>` and n generator blocks (one row per line, blocks
//! separated by blank lines); a code file carries
//! `h=<h> k=<k> n=<n> basis=<b1,...,bh>` and the kh generator rows over
//! GF(q^h), which is always built on the default modulus tower.
//!
//! Every malformed input reports the offending line number.

use std::str::FromStr;
use std::sync::Arc;

use num::BigRational;
use serde_json::{json, Map, Value};

use crate::analysis::Spectrum;
use crate::codes::AdditiveCode;
use crate::geometry::{Subspace, SubspaceSet};
use crate::gf::{FiniteField, GFElem, SubfieldEmbedding};
use crate::{Error, Result};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn field_header(f: &FiniteField) -> String {
    let coeffs: Vec<String> = f.modulus().iter().map(|c| c.to_string()).collect();
    format!("F p={} m={} mod={}", f.p(), f.m(), coeffs.join(","))
}

fn kv<'a>(tok: &'a str, key: &str, line: usize) -> Result<&'a str> {
    tok.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| perr(line, format!("expected {key}=<value>, got '{tok}'")))
}

fn number<T: FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.parse().map_err(|_| perr(line, format!("invalid {what} '{s}'")))
}

fn number_list(s: &str, line: usize, what: &str) -> Result<Vec<u32>> {
    s.split(',').map(|x| number(x.trim(), line, what)).collect()
}

fn parse_field_header(text: &str, line: usize) -> Result<FiniteField> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "F" {
        return Err(perr(line, format!("expected 'F p=<p> m=<m> mod=<c0,...>', got '{text}'")));
    }
    let p: u32 = number(kv(toks[1], "p", line)?, line, "characteristic")?;
    let m: u32 = number(kv(toks[2], "m", line)?, line, "degree")?;
    let coeffs = number_list(kv(toks[3], "mod", line)?, line, "modulus coefficient")?;
    FiniteField::with_modulus(p, m, &coeffs).map_err(|e| perr(line, e.to_string()))
}

fn expect_line<'a>(lines: &[&'a str], i: usize) -> Result<&'a str> {
    lines.get(i).copied().ok_or_else(|| perr(lines.len() + 1, "unexpected end of file"))
}

/// Render a set as a PGSET v1 file. Output is canonical: reading it back
/// and re-rendering reproduces it byte for byte.
pub fn write_subspace_set(x: &SubspaceSet) -> String {
    let mut out = String::new();
    out.push_str("PGSET v1\n");
    out.push_str(&field_header(x.field()));
    out.push('\n');
    out.push_str(&format!("k={} h={} n={}\n", x.k(), x.h(), x.len()));
    for (i, el) in x.elements().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for row in el.gens() {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn read_subspace_set(text: &str) -> Result<SubspaceSet> {
    let lines: Vec<&str> = text.lines().collect();
    let magic = expect_line(&lines, 0)?;
    if magic.trim() != "PGSET v1" {
        return Err(perr(1, format!("expected 'PGSET v1', got '{}'", magic.trim())));
    }
    let field = Arc::new(parse_field_header(expect_line(&lines, 1)?, 2)?);
    let header = expect_line(&lines, 2)?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 {
        return Err(perr(3, format!("expected 'k=<k> h=<h> n=<n>', got '{header}'")));
    }
    let k: u32 = number(kv(toks[0], "k", 3)?, 3, "k")?;
    let h: u32 = number(kv(toks[1], "h", 3)?, 3, "h")?;
    let n: usize = number(kv(toks[2], "n", 3)?, 3, "n")?;
    if k == 0 || h == 0 || n == 0 {
        return Err(perr(3, "k, h, and n must all be at least 1"));
    }
    let kh = (k * h) as usize;
    let q = field.q();

    let mut elements: Vec<Subspace> = Vec::with_capacity(n);
    let mut i = 3;
    while elements.len() < n {
        while i < lines.len() && lines[i].trim().is_empty() {
            i += 1;
        }
        if i >= lines.len() {
            return Err(perr(
                lines.len() + 1,
                format!("expected {n} subspace blocks, found {}", elements.len()),
            ));
        }
        let block_start = i;
        let mut rows: Vec<Vec<GFElem>> = Vec::with_capacity(h as usize);
        while i < lines.len() && !lines[i].trim().is_empty() {
            if rows.len() == h as usize {
                return Err(perr(i + 1, format!("subspace block has more than h = {h} rows")));
            }
            let mut row: Vec<GFElem> = Vec::with_capacity(kh);
            for tok in lines[i].split_whitespace() {
                let v: u32 = number(tok, i + 1, "coordinate")?;
                if v >= q {
                    return Err(perr(i + 1, format!("{v} is not an element of GF({q})")));
                }
                row.push(v);
            }
            if row.len() != kh {
                return Err(perr(i + 1, format!("expected {kh} coordinates, got {}", row.len())));
            }
            rows.push(row);
            i += 1;
        }
        let el = Subspace::canonicalize(&field, &rows)
            .map_err(|e| perr(block_start + 1, e.to_string()))?;
        elements.push(el);
    }
    while i < lines.len() {
        if !lines[i].trim().is_empty() {
            return Err(perr(i + 1, "trailing content after the last subspace block"));
        }
        i += 1;
    }
    SubspaceSet::new(field, k, h, elements).map_err(|e| perr(3, e.to_string()))
}

/// Render a code as an ACODE v1 file. The format fixes GF(q^h) to the
/// default modulus tower; codes built on another big field are refused
/// rather than silently rebased.
pub fn write_additive_code(c: &AdditiveCode) -> Result<String> {
    let small = c.base();
    let default_big = FiniteField::new(small.p(), small.m() * c.h())?;
    if c.ext().modulus() != default_big.modulus() {
        return Err(Error::Unsupported(
            "code files fix GF(q^h) to the default modulus; rebuild the code on the default tower"
                .into(),
        ));
    }
    let mut out = String::new();
    out.push_str("ACODE v1\n");
    out.push_str(&field_header(small));
    out.push('\n');
    let basis: Vec<String> = c.basis().iter().map(|b| b.to_string()).collect();
    out.push_str(&format!("h={} k={} n={} basis={}\n", c.h(), c.k(), c.n(), basis.join(",")));
    for row in c.generator() {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    Ok(out)
}

pub fn read_additive_code(text: &str) -> Result<AdditiveCode> {
    let lines: Vec<&str> = text.lines().collect();
    let magic = expect_line(&lines, 0)?;
    if magic.trim() != "ACODE v1" {
        return Err(perr(1, format!("expected 'ACODE v1', got '{}'", magic.trim())));
    }
    let small = Arc::new(parse_field_header(expect_line(&lines, 1)?, 2)?);
    let header = expect_line(&lines, 2)?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 4 {
        return Err(perr(3, format!("expected 'h=<h> k=<k> n=<n> basis=<b1,...>', got '{header}'")));
    }
    let h: u32 = number(kv(toks[0], "h", 3)?, 3, "h")?;
    let k: u32 = number(kv(toks[1], "k", 3)?, 3, "k")?;
    let n: usize = number(kv(toks[2], "n", 3)?, 3, "n")?;
    let basis = number_list(kv(toks[3], "basis", 3)?, 3, "basis element")?;
    if h == 0 || k == 0 || n == 0 {
        return Err(perr(3, "h, k, and n must all be at least 1"));
    }
    let big = Arc::new(
        FiniteField::new(small.p(), small.m() * h).map_err(|e| perr(3, e.to_string()))?,
    );
    let embedding =
        SubfieldEmbedding::new(big, small, &basis).map_err(|e| perr(3, e.to_string()))?;
    let bq = embedding.big().q();

    let kh = (k * h) as usize;
    let mut generator: Vec<Vec<GFElem>> = Vec::with_capacity(kh);
    let mut i = 3;
    while generator.len() < kh {
        while i < lines.len() && lines[i].trim().is_empty() {
            i += 1;
        }
        if i >= lines.len() {
            return Err(perr(
                lines.len() + 1,
                format!("expected {kh} generator rows, found {}", generator.len()),
            ));
        }
        let mut row: Vec<GFElem> = Vec::with_capacity(n);
        for tok in lines[i].split_whitespace() {
            let v: u32 = number(tok, i + 1, "entry")?;
            if v >= bq {
                return Err(perr(i + 1, format!("{v} is not an element of GF({bq})")));
            }
            row.push(v);
        }
        if row.len() != n {
            return Err(perr(i + 1, format!("expected {n} entries, got {}", row.len())));
        }
        generator.push(row);
        i += 1;
    }
    while i < lines.len() {
        if !lines[i].trim().is_empty() {
            return Err(perr(i + 1, "trailing content after the last generator row"));
        }
        i += 1;
    }
    AdditiveCode::new(embedding, k, generator)
}

/// The stable JSON shape for a computed spectrum.
pub fn spectrum_json(x: &SubspaceSet, sp: &Spectrum) -> Value {
    let mut counts = Map::new();
    for (&s, &c) in sp.counts() {
        counts.insert(s.to_string(), json!(c));
    }
    json!({
        "n": x.len(),
        "k": x.k(),
        "h": x.h(),
        "q": x.field().q(),
        "spectrum": Value::Object(counts),
        "max_secant": sp.max_secant(),
    })
}

/// Exact rationals travel as decimal strings, never floats.
pub fn rational_json(r: &BigRational) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{code_to_subspace_set, subspace_set_to_code};
    use crate::constructions::{desarguesian_spread, hyperoval};

    #[test]
    fn set_files_round_trip() {
        for set in [hyperoval(4).unwrap().set, desarguesian_spread(2, 2).unwrap().set] {
            let text = write_subspace_set(&set);
            let back = read_subspace_set(&text).unwrap();
            assert_eq!(back.elements(), set.elements());
            assert_eq!(write_subspace_set(&back), text);
        }
    }

    #[test]
    fn code_files_round_trip() {
        let set = desarguesian_spread(3, 2).unwrap().set;
        let emb = SubfieldEmbedding::default_tower(set.field().clone(), set.h()).unwrap();
        let code = subspace_set_to_code(&set, emb).unwrap();
        let text = write_additive_code(&code).unwrap();
        let back = read_additive_code(&text).unwrap();
        assert_eq!(back.generator(), code.generator());
        assert_eq!(back.basis(), code.basis());
        assert_eq!(write_additive_code(&back).unwrap(), text);
    }

    #[test]
    fn set_to_code_to_set_is_byte_identical() {
        // The conversion pipeline a shell round trip exercises.
        for set in [hyperoval(4).unwrap().set, desarguesian_spread(2, 3).unwrap().set] {
            let text0 = write_subspace_set(&set);
            let x = read_subspace_set(&text0).unwrap();
            let emb = SubfieldEmbedding::default_tower(x.field().clone(), x.h()).unwrap();
            let code = subspace_set_to_code(&x, emb).unwrap();
            let x2 = code_to_subspace_set(&read_additive_code(
                &write_additive_code(&code).unwrap(),
            )
            .unwrap())
            .unwrap();
            assert_eq!(write_subspace_set(&x2), text0);
        }
    }

    #[test]
    fn blocks_of_independent_rows_are_canonicalized() {
        // Non-canonical generators are accepted and normalized on read.
        let text = "PGSET v1\nF p=2 m=1 mod=0,1\nk=2 h=2 n=1\n1 1 1 1\n0 1 1 0\n";
        let set = read_subspace_set(text).unwrap();
        assert_eq!(set.elements()[0].gens(), &[vec![1, 0, 0, 1], vec![0, 1, 1, 0]]);
    }

    #[test]
    fn set_parse_errors_carry_line_numbers() {
        let cases: &[(&str, usize)] = &[
            ("PGSETv1\n", 1),
            ("PGSET v1\nF p=6 m=1 mod=0,1\nk=3 h=1 n=1\n1 0 0\n", 2),
            ("PGSET v1\nF q=2\nk=3 h=1 n=1\n1 0 0\n", 2),
            ("PGSET v1\nF p=2 m=1 mod=0,1\nk=3 h=1\n1 0 0\n", 3),
            ("PGSET v1\nF p=2 m=1 mod=0,1\nk=0 h=1 n=1\n1 0 0\n", 3),
            ("PGSET v1\nF p=2 m=1 mod=0,1\nk=3 h=1 n=1\n1 0 2\n", 4),
            ("PGSET v1\nF p=2 m=1 mod=0,1\nk=3 h=1 n=1\n1 0\n", 4),
            ("PGSET v1\nF p=2 m=1 mod=0,1\nk=3 h=1 n=1\n1 0 0\n1 1 1\n", 5),
            ("PGSET v1\nF p=2 m=1 mod=0,1\nk=3 h=1 n=2\n1 0 0\n", 5),
            ("PGSET v1\nF p=2 m=1 mod=0,1\nk=3 h=1 n=1\n0 0 0\n", 4),
            ("PGSET v1\nF p=2 m=1 mod=0,1\nk=3 h=1 n=1\n1 0 0\n\nstray\n", 6),
        ];
        for (text, want) in cases {
            match read_subspace_set(text) {
                Err(Error::Parse { line, .. }) => {
                    assert_eq!(line, *want, "wrong line for input {text:?}")
                }
                other => panic!("expected a parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn code_parse_errors_carry_line_numbers() {
        let cases: &[(&str, usize)] = &[
            ("ACODE v2\n", 1),
            ("ACODE v1\nF p=2 m=1 mod=0,1\nh=2 k=1 n=1\n", 3),
            ("ACODE v1\nF p=2 m=1 mod=0,1\nh=2 k=1 n=1 basis=1,9\n0 1\n", 3),
            ("ACODE v1\nF p=2 m=1 mod=0,1\nh=1 k=2 n=2 basis=1\n1 0\n0 5\n", 5),
            ("ACODE v1\nF p=2 m=1 mod=0,1\nh=1 k=2 n=2 basis=1\n1 0\n", 5),
        ];
        for (text, want) in cases {
            match read_additive_code(text) {
                Err(Error::Parse { line, .. }) => {
                    assert_eq!(line, *want, "wrong line for input {text:?}")
                }
                other => panic!("expected a parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn json_shapes_are_stable() {
        let set = crate::constructions::frame(3).unwrap().set;
        let sp = crate::analysis::spectrum(&set).unwrap();
        let v = spectrum_json(&set, &sp);
        assert_eq!(v["n"], 5);
        assert_eq!(v["k"], 4);
        assert_eq!(v["h"], 1);
        assert_eq!(v["q"], 2);
        assert_eq!(v["max_secant"], 3);
        assert_eq!(v["spectrum"]["1"], 5);
        assert_eq!(v["spectrum"]["3"], 10);

        let r = BigRational::new(8.into(), 3.into());
        let v = rational_json(&r);
        assert_eq!(v["num"], "8");
        assert_eq!(v["den"], "3");
    }
}
