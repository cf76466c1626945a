//! Plain-text chain dumps.
//!
//! ```text
//! n=4 chains=6
//! 0 1 3 7 f
//! 2 6 e
//! ```
//!
//! The header is followed by one chain per line. Each subset is written as a
//! lowercase hex bitmask; lines are sorted by their first element.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::lattice::{Chain, ChainDecomposition, Ground};
use crate::subset::{full_mask, MAX_N};

/// Writes `d` in dump format. Chains are emitted sorted by minimum without
/// modifying `d`.
pub fn write_chain_dump<W: Write>(d: &ChainDecomposition, mut w: W) -> std::io::Result<()> {
    writeln!(w, "n={} chains={}", d.n, d.chains.len())?;
    let mut order: Vec<&Chain> = d.chains.iter().collect();
    order.sort_by_key(|c| c.min().unwrap_or(u64::MAX));
    let mut line = String::new();
    for c in order {
        line.clear();
        for (i, x) in c.elements().iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&format!("{x:x}"));
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn chain_dump_string(d: &ChainDecomposition) -> String {
    let mut buf = Vec::new();
    write_chain_dump(d, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("dump is ASCII")
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: message.into(),
    })
}

/// Reads a dump. Chain validity is *not* checked here (that is the
/// verifier's job), but the header, hex syntax, bit range and chain count are.
pub fn read_chain_dump<R: BufRead>(r: R, ground: Ground) -> Result<ChainDecomposition> {
    let mut lines = r.lines().enumerate();
    let (n, expected) = match lines.next() {
        Some((_, Ok(header))) => parse_header(&header)?,
        Some((_, Err(e))) => return parse_err(1, e.to_string()),
        None => return parse_err(1, "empty input"),
    };
    let mask = full_mask(n);
    let mut chains = Vec::with_capacity(expected);
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = match line {
            Ok(l) => l,
            Err(e) => return parse_err(lineno, e.to_string()),
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut elems = Vec::new();
        for tok in trimmed.split_whitespace() {
            let x = match u64::from_str_radix(tok, 16) {
                Ok(x) => x,
                Err(_) => return parse_err(lineno, format!("invalid hex mask `{tok}`")),
            };
            if x & !mask != 0 {
                return parse_err(lineno, format!("mask `{tok}` has bits outside [{n}]"));
            }
            elems.push(x);
        }
        chains.push(Chain::from_raw(elems));
    }
    if chains.len() != expected {
        return parse_err(
            1,
            format!("header announces {expected} chains, found {}", chains.len()),
        );
    }
    Ok(ChainDecomposition::new(n, ground, chains))
}

fn parse_header(header: &str) -> Result<(u32, usize)> {
    let mut n = None;
    let mut count = None;
    for tok in header.split_whitespace() {
        if let Some(v) = tok.strip_prefix("n=") {
            n = v.parse::<u32>().ok();
        } else if let Some(v) = tok.strip_prefix("chains=") {
            count = v.parse::<usize>().ok();
        }
    }
    match (n, count) {
        (Some(n), Some(c)) if (1..=MAX_N).contains(&n) => Ok((n, c)),
        _ => parse_err(1, format!("malformed header `{header}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let d = ChainDecomposition::new(
            2,
            Ground::Full,
            vec![
                Chain::new(vec![0b10]).unwrap(),
                Chain::new(vec![0b00, 0b01, 0b11]).unwrap(),
            ],
        );
        let text = chain_dump_string(&d);
        assert_eq!(text, "n=2 chains=2\n0 1 3\n2\n");
        let back = read_chain_dump(text.as_bytes(), Ground::Full).unwrap();
        assert_eq!(back.n, 2);
        assert_eq!(back.chains[0].elements(), &[0, 1, 3]);
        assert_eq!(back.chains[1].elements(), &[2]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_chain_dump("n=2 chains=1\nzz\n".as_bytes(), Ground::Full).is_err());
        assert!(read_chain_dump("n=2 chains=1\n4\n".as_bytes(), Ground::Full).is_err());
        assert!(read_chain_dump("n=2 chains=2\n1\n".as_bytes(), Ground::Full).is_err());
        assert!(read_chain_dump("hello\n".as_bytes(), Ground::Full).is_err());
        assert!(read_chain_dump("".as_bytes(), Ground::Full).is_err());
    }
}
