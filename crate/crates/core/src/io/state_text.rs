//! Plain-text state documents.
//!
//! ```text
//! # comment
//! photons 2
//! dof spatial S
//! dof pol H V
//! ket [S,H]=1 [S,V]=1 : 7.07106781187e-1 0.00000000000e0
//! ```
//!
//! `dof` lines give the schema in order. Each `ket` line lists
//! `[labels]=count` pairs in canonical mode order, then `:`, then the real
//! and imaginary parts of the amplitude. The vacuum ket is `ket : re im`.

use std::fmt::Write;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fock::{FockKet, StateVector, C64};
use crate::schema::DofSchema;

/// Twelve significant digits in scientific notation.
pub fn fmt_sci(x: f64) -> String {
    // Avoid "-0.00000000000e0" for negative zero.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub fn write_state(s: &StateVector) -> String {
    let schema = s.schema();
    let mut out = String::new();
    writeln!(out, "photons {}", s.photon_number()).unwrap();
    for dof in schema.dofs() {
        writeln!(out, "dof {} {}", dof.name, dof.labels.join(" ")).unwrap();
    }
    for (ket, a) in s.terms() {
        out.push_str("ket");
        for (m, n) in ket.occupation() {
            write!(out, " {}={n}", schema.display_mode(m)).unwrap();
        }
        writeln!(out, " : {} {}", fmt_sci(a.re), fmt_sci(a.im)).unwrap();
    }
    out
}

fn parse_float(line: usize, tok: &str) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("bad number {tok:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite number {tok:?}")));
    }
    Ok(v)
}

pub fn parse_state(text: &str) -> Result<StateVector> {
    let mut photons: Option<u32> = None;
    let mut dofs: Vec<(String, Vec<String>)> = Vec::new();
    let mut schema: Option<Arc<DofSchema>> = None;
    let mut terms = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .map(|(k, r)| (k, r.trim()))
            .unwrap_or((content, ""));
        match keyword {
            "photons" => {
                if photons.is_some() {
                    return Err(Error::parse(line, "photons given twice"));
                }
                let n: u32 = rest
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad photon number {rest:?}")))?;
                photons = Some(n);
            }
            "dof" => {
                if schema.is_some() {
                    return Err(Error::parse(line, "dof line after the first ket"));
                }
                let mut toks = rest.split_whitespace();
                let name = toks
                    .next()
                    .ok_or_else(|| Error::parse(line, "dof line needs a name"))?;
                dofs.push((name.to_string(), toks.map(str::to_string).collect()));
            }
            "ket" => {
                let schema = match &schema {
                    Some(s) => s.clone(),
                    None => {
                        let s = Arc::new(
                            DofSchema::new(dofs.clone())
                                .map_err(|e| Error::parse(line, e.to_string()))?,
                        );
                        schema = Some(s.clone());
                        s
                    }
                };
                let (modes, amp) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::parse(line, "ket line needs ':' before the amplitude"))?;
                let amp_toks: Vec<&str> = amp.split_whitespace().collect();
                if amp_toks.len() != 2 {
                    return Err(Error::parse(line, "amplitude needs real and imaginary parts"));
                }
                let a = C64::new(parse_float(line, amp_toks[0])?, parse_float(line, amp_toks[1])?);
                let mut counts = Vec::new();
                for tok in modes.split_whitespace() {
                    let (labels, count) = tok
                        .rsplit_once('=')
                        .ok_or_else(|| Error::parse(line, format!("expected [labels]=count, got {tok:?}")))?;
                    let inner = labels
                        .strip_prefix('[')
                        .and_then(|l| l.strip_suffix(']'))
                        .ok_or_else(|| Error::parse(line, format!("mode must be bracketed: {labels:?}")))?;
                    let parts: Vec<&str> = inner.split(',').collect();
                    let mode = schema
                        .mode(&parts)
                        .map_err(|e| Error::parse(line, e.to_string()))?;
                    let n: u32 = count
                        .parse()
                        .map_err(|_| Error::parse(line, format!("bad count {count:?}")))?;
                    if n == 0 {
                        return Err(Error::parse(line, "zero counts are not stored"));
                    }
                    counts.push((mode, n));
                }
                let ket = FockKet::from_counts(counts);
                let expected = photons.ok_or_else(|| Error::parse(line, "photons must precede kets"))?;
                if ket.total_photons() != expected {
                    return Err(Error::parse(
                        line,
                        format!("ket has {} photons, expected {expected}", ket.total_photons()),
                    ));
                }
                terms.push((ket, a));
            }
            other => return Err(Error::parse(line, format!("unknown keyword {other:?}"))),
        }
    }
    let photons = photons.ok_or_else(|| Error::parse(last_line.max(1), "missing photons line"))?;
    let schema = match schema {
        Some(s) => s,
        None => Arc::new(DofSchema::new(dofs).map_err(|e| Error::parse(last_line.max(1), e.to_string()))?),
    };
    StateVector::from_terms(schema, photons, terms).map_err(|e| Error::parse(last_line.max(1), e.to_string()))
}
