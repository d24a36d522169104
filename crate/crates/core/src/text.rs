//! Plain-text formats for tensors and decompositions.
//!
//! A tensor is a header line `p q r` followed by the `p q r` entries in lex
//! subscript order, separated by any whitespace. Complex entries are written
//! `re`, `re+imi` or `re-imi` (`2i`, `-i` also parse). An F2 tensor may
//! instead give a single decimal or `0x` hexadecimal code after the header.
//!
//! A decomposition is
//!
//! ```text
//! p q r
//! terms N
//! a_1 .. a_p ; b_1 .. b_q ; c_1 .. c_r      (N lines)
//! residual R
//! ```
//!
//! Blank lines and text after `#` are ignored everywhere.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::code;
use crate::error::{Error, Result};
use crate::scalar::F2;
use crate::tensor::{validate_dims, Decomposition, DenseTensor, Dims, SimpleTerm};

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

/// Whitespace-separated tokens per non-empty line, with 1-based positions.
fn lines(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in body.char_indices().chain([(body.len(), ' ')]) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &body[s..pos],
                        line: n + 1,
                        column: body[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if !tokens.is_empty() {
            out.push(tokens);
        }
    }
    out
}

/// Error positioned just past the last character.
fn at_end(text: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        line: text.lines().count().max(1),
        column: text.lines().last().map_or(0, |l| l.chars().count()) + 1,
        message: message.into(),
    }
}

fn end_of(text: &str) -> Error {
    at_end(text, "unexpected end of input")
}

fn parse_dims(header: &[Token<'_>]) -> Result<Dims> {
    if header.len() != 3 {
        let at = header.get(3).unwrap_or(&header[0]);
        return Err(at.error(format!("header needs three sizes, found {}", header.len())));
    }
    let mut dims = [0; 3];
    for (d, tok) in dims.iter_mut().zip(header) {
        *d = tok
            .text
            .parse()
            .map_err(|_| tok.error(format!("invalid size {:?}", tok.text)))?;
    }
    validate_dims(dims).map_err(|e| header[0].error(e.to_string()))?;
    Ok(dims)
}

fn parse_complex(tok: &Token<'_>) -> Result<Complex64> {
    let z: Complex64 = tok
        .text
        .parse()
        .map_err(|_| tok.error(format!("invalid complex number {:?}", tok.text)))?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(tok.error("entry is not finite"));
    }
    Ok(z)
}

/// Decimal or `0x` hexadecimal.
pub fn parse_code(s: &str) -> Option<u64> {
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16).ok(),
        None if s.bytes().all(|b| b.is_ascii_digit()) => s.parse().ok(),
        None => None,
    }
}

fn body_tokens<'a>(text: &str, rows: &'a [Vec<Token<'a>>]) -> Result<(Dims, Vec<Token<'a>>)> {
    let header = rows.first().ok_or_else(|| end_of(text))?;
    let dims = parse_dims(header)?;
    Ok((dims, rows[1..].iter().flatten().copied().collect()))
}

fn check_count(text: &str, dims: Dims, entries: &[Token<'_>]) -> Result<()> {
    let want: usize = dims.iter().product();
    if let Some(extra) = entries.get(want) {
        return Err(extra.error(format!("expected {want} entries, found more")));
    }
    if entries.len() < want {
        return Err(at_end(text, format!("expected {want} entries, found {}", entries.len())));
    }
    Ok(())
}

pub fn parse_complex_tensor(text: &str) -> Result<DenseTensor<Complex64>> {
    let rows = lines(text);
    let (dims, entries) = body_tokens(text, &rows)?;
    check_count(text, dims, &entries)?;
    let values = entries.iter().map(parse_complex).collect::<Result<Vec<_>>>()?;
    DenseTensor::new(dims, values)
}

/// Entries in `{0, 1}`, or one code covering the whole tensor.
pub fn parse_f2_tensor(text: &str) -> Result<DenseTensor<F2>> {
    let rows = lines(text);
    let (dims, entries) = body_tokens(text, &rows)?;
    let n: usize = dims.iter().product();
    if entries.len() == 1 && n > 1 {
        let tok = entries[0];
        let value = parse_code(tok.text).ok_or_else(|| tok.error(format!("invalid code {:?}", tok.text)))?;
        return code::decode(dims, value).map_err(|e| tok.error(e.to_string()));
    }
    check_count(text, dims, &entries)?;
    let bits = entries
        .iter()
        .map(|tok| match tok.text {
            "0" => Ok(F2::ZERO),
            "1" => Ok(F2::ONE),
            other => Err(tok.error(format!("F2 entries are 0 or 1, found {other:?}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    DenseTensor::new(dims, bits)
}

fn fmt_real(x: f64) -> String {
    // Normalise -0 so that output does not depend on the sign of zero.
    let x = if x == 0.0 { 0.0 } else { x };
    // Debug switches to exponent form for very small or large magnitudes.
    let s = format!("{x:?}");
    s.strip_suffix(".0").map_or(s.clone(), str::to_owned)
}

/// Shortest text that parses back to the same value.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt_real(z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", fmt_real(z.re), fmt_real(-z.im))
    } else {
        format!("{}+{}i", fmt_real(z.re), fmt_real(z.im))
    }
}

fn join<'a>(values: impl Iterator<Item = &'a Complex64>) -> String {
    values.map(|&z| format_complex(z)).collect::<Vec<_>>().join(" ")
}

/// Header line, then one frontal slice per block, rows on separate lines.
pub fn write_complex_tensor(t: &DenseTensor<Complex64>) -> String {
    let [p, q, r] = t.dims();
    let mut out = format!("{p} {q} {r}\n");
    for i in 0..p {
        for j in 0..q {
            let row: Vec<Complex64> = (0..r).map(|k| t.get(i, j, k)).collect();
            let _ = writeln!(out, "{}", join(row.iter()));
        }
    }
    out
}

pub fn write_f2_tensor(t: &DenseTensor<F2>) -> String {
    let [p, q, r] = t.dims();
    let mut out = format!("{p} {q} {r}\n");
    for i in 0..p {
        for j in 0..q {
            let row: Vec<String> = (0..r).map(|k| t.get(i, j, k).to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out
}

pub fn write_decomposition(d: &Decomposition<Complex64>) -> String {
    let [p, q, r] = d.target_dims;
    let mut out = format!("{p} {q} {r}\nterms {}\n", d.len());
    for t in &d.terms {
        let _ = writeln!(out, "{} ; {} ; {}", join(t.a.iter()), join(t.b.iter()), join(t.c.iter()));
    }
    let _ = writeln!(out, "residual {:e}", d.residual);
    out
}

fn keyword<'a>(row: &'a [Token<'a>], word: &str) -> Result<&'a Token<'a>> {
    match row {
        [k, v] if k.text == word => Ok(v),
        _ => Err(row[0].error(format!("expected `{word} <value>`"))),
    }
}

pub fn parse_decomposition(text: &str) -> Result<Decomposition<Complex64>> {
    let rows = lines(text);
    let header = rows.first().ok_or_else(|| end_of(text))?;
    let dims = parse_dims(header)?;
    let count_row = rows.get(1).ok_or_else(|| end_of(text))?;
    let count_tok = keyword(count_row, "terms")?;
    let count: usize = count_tok
        .text
        .parse()
        .map_err(|_| count_tok.error(format!("invalid term count {:?}", count_tok.text)))?;
    let mut terms = Vec::with_capacity(count);
    for n in 0..count {
        let row = rows.get(2 + n).ok_or_else(|| end_of(text))?;
        let mut groups: Vec<Vec<Complex64>> = vec![Vec::new()];
        for tok in row {
            if tok.text == ";" {
                groups.push(Vec::new());
            } else {
                groups.last_mut().expect("nonempty").push(parse_complex(tok)?);
            }
        }
        let lens = groups.iter().map(Vec::len).collect::<Vec<_>>();
        if lens != dims {
            return Err(row[0].error(format!("term vector lengths {lens:?} do not match {dims:?}")));
        }
        terms.push(
            SimpleTerm::from_slices(&groups[0], &groups[1], &groups[2])
                .map_err(|e| row[0].error(e.to_string()))?,
        );
    }
    let mut d = Decomposition::new(dims, terms)?;
    if let Some(row) = rows.get(2 + count) {
        let tok = keyword(row, "residual")?;
        d.residual = tok
            .text
            .parse()
            .map_err(|_| tok.error(format!("invalid residual {:?}", tok.text)))?;
        if let Some(extra) = rows.get(3 + count) {
            return Err(extra[0].error("unexpected text after residual"));
        }
    }
    Ok(d)
}
