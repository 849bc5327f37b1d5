//! Text formats. Public matrix:
//! ```text
//! IQP1 n=<n> m=<m>
//! <m rows of n '0'/'1' characters>
//! ```
//! Secret sidecar: the `n`-bit secret, then `g=<g> sign=<+1|-1>`.
//! Samples: one `n`-bit outcome per line, no header. Every line ends in LF.

use crate::error::{Error, Result};
use crate::f2linalg::{BitMatrix, BitVector};
use crate::protocol::SampleBatch;
use crate::stabilizer::Correlation;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Splits on LF, rejecting CR and empty lines. A single trailing LF is allowed.
fn lines(text: &str) -> Result<Vec<&str>> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split('\n')
        .enumerate()
        .map(|(i, l)| {
            if l.contains('\r') {
                Err(parse_err(i + 1, "CR line ending"))
            } else if l.is_empty() {
                Err(parse_err(i + 1, "empty line"))
            } else {
                Ok(l)
            }
        })
        .collect()
}

fn parse_bits(line: &str, n: usize, lineno: usize) -> Result<BitVector> {
    if line.len() != n {
        return Err(parse_err(lineno, format!("expected {n} bits, found {}", line.len())));
    }
    BitVector::from_bit_str(line)
        .map_err(|col| parse_err(lineno, format!("invalid character at column {}", col + 1)))
}

fn field(tok: Option<&str>, key: &str, lineno: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(lineno, format!("missing {key}=")))?;
    let val = tok
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| parse_err(lineno, format!("expected {key}=<value>, found {tok:?}")))?;
    val.parse()
        .map_err(|_| parse_err(lineno, format!("bad value for {key}: {val:?}")))
}

pub fn write_public(h: &BitMatrix) -> String {
    let mut out = format!("IQP1 n={} m={}\n", h.cols(), h.rows());
    for r in h.to_row_strings() {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

pub fn parse_public(text: &str) -> Result<BitMatrix> {
    let ls = lines(text)?;
    let header = ls.first().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut toks = header.split(' ');
    if toks.next() != Some("IQP1") {
        return Err(parse_err(1, "missing IQP1 magic"));
    }
    let n = field(toks.next(), "n", 1)?;
    let m = field(toks.next(), "m", 1)?;
    if toks.next().is_some() {
        return Err(parse_err(1, "trailing header fields"));
    }
    if ls.len() != m + 1 {
        return Err(parse_err(ls.len().min(m + 1) + 1, format!("expected {m} rows, found {}", ls.len() - 1)));
    }
    let rows = ls[1..]
        .iter()
        .enumerate()
        .map(|(i, l)| parse_bits(l, n, i + 2))
        .collect::<Result<Vec<_>>>()?;
    Ok(BitMatrix::from_rows(n, &rows))
}

pub fn write_secret(s: &BitVector, corr: Correlation) -> String {
    let sign = if corr.sign() < 0 { "-1" } else { "+1" };
    format!("{}\ng={} sign={sign}\n", s.to_bit_string(), corr.g())
}

pub fn parse_secret(text: &str) -> Result<(BitVector, Correlation)> {
    let ls = lines(text)?;
    if ls.len() != 2 {
        return Err(parse_err(ls.len().min(2) + 1, "secret file needs exactly two lines"));
    }
    let s = parse_bits(ls[0], ls[0].len(), 1)?;
    if s.is_zero() {
        return Err(parse_err(1, "zero secret"));
    }
    let mut toks = ls[1].split(' ');
    let g = field(toks.next(), "g", 2)?;
    let sign = match toks.next() {
        Some("sign=+1") => 1,
        Some("sign=-1") => -1,
        other => return Err(parse_err(2, format!("expected sign=+1 or sign=-1, found {other:?}"))),
    };
    if toks.next().is_some() {
        return Err(parse_err(2, "trailing fields"));
    }
    Ok((s, Correlation::new(sign, g as u32)))
}

pub fn write_samples(batch: &SampleBatch) -> String {
    let mut out = String::with_capacity(batch.len() * (batch.qubits() + 1));
    for x in batch.samples() {
        out.push_str(&x.to_bit_string());
        out.push('\n');
    }
    out
}

/// `n` is the expected sample width.
pub fn parse_samples(text: &str, n: usize) -> Result<SampleBatch> {
    let samples = lines(text)?
        .iter()
        .enumerate()
        .map(|(i, l)| parse_bits(l, n, i + 1))
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleBatch::new(n, samples, "file"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn public_round_trip() {
        let h = BitMatrix::from_strs(&["101", "011"]);
        let text = write_public(&h);
        assert_eq!(text, "IQP1 n=3 m=2\n101\n011\n");
        assert_eq!(parse_public(&text).unwrap(), h);
    }

    #[test]
    fn public_errors_carry_lines() {
        let e = parse_public("IQP1 n=3 m=2\n101\n01\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        let e = parse_public("IQP1 n=3 m=2\r\n101\n011\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = parse_public("IQP1 n=3 m=2\n101\n0x1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        assert!(parse_public("IQP2 n=3 m=0\n").is_err());
        assert!(parse_public("IQP1 n=3 m=3\n101\n011\n").is_err());
    }

    #[test]
    fn secret_round_trip() {
        let s = BitVector::from_bits(&[0, 1, 1]);
        let c = Correlation::new(-1, 3);
        let text = write_secret(&s, c);
        assert_eq!(text, "011\ng=3 sign=-1\n");
        assert_eq!(parse_secret(&text).unwrap(), (s, c));
        assert!(parse_secret("011\ng=3 sign=0\n").is_err());
    }

    #[test]
    fn samples_round_trip() {
        let b = SampleBatch::new(2, vec![BitVector::from_bits(&[1, 0]), BitVector::from_bits(&[0, 0])], "x");
        let text = write_samples(&b);
        assert_eq!(text, "10\n00\n");
        assert_eq!(parse_samples(&text, 2).unwrap().samples(), b.samples());
        assert!(matches!(parse_samples("10\n1\n", 2), Err(Error::Parse { line: 2, .. })));
    }
}
