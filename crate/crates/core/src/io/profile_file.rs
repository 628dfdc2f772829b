//! Spectral profiles: `<label> <amplitude>` per line, and the compact
//! `point | uniform:d | gaussian:d:w` specs.

use crate::error::{Error, Result};
use crate::states::{ProfileKind, SpectralProfile};

pub fn parse_profile(text: &str, normalize: bool) -> Result<SpectralProfile> {
    let mut labels = Vec::new();
    let mut amps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::parse(line, "expected `<label> <amplitude>`"));
        }
        let a: f64 = toks[1]
            .parse()
            .map_err(|_| Error::parse(line, format!("bad amplitude {:?}", toks[1])))?;
        if !a.is_finite() {
            return Err(Error::parse(line, "amplitude must be finite"));
        }
        if labels.iter().any(|l| l == toks[0]) {
            return Err(Error::parse(line, format!("duplicate label {:?}", toks[0])));
        }
        labels.push(toks[0].to_string());
        amps.push(a);
    }
    if normalize {
        SpectralProfile::normalized(labels, amps)
    } else {
        SpectralProfile::new(labels, amps)
    }
}

pub fn write_profile(p: &SpectralProfile) -> String {
    p.labels()
        .iter()
        .zip(p.amplitudes())
        .map(|(l, a)| format!("{l} {}\n", super::fmt_sci(*a)))
        .collect()
}

/// Parse a compact spec. Returns `Ok(None)` when the text is not one of the
/// built-in forms (callers then treat it as a file path).
pub fn parse_profile_spec(spec: &str) -> Result<Option<ProfileKind>> {
    let mut parts = spec.split(':');
    let head = parts.next().unwrap_or("");
    let rest: Vec<&str> = parts.collect();
    let bad = |msg: &str| Error::Profile(format!("{msg} in profile spec {spec:?}"));
    let int = |s: &str| s.parse::<usize>().map_err(|_| bad("bad integer"));
    match (head, rest.as_slice()) {
        ("point", []) => Ok(Some(ProfileKind::Point)),
        ("uniform", [d]) => Ok(Some(ProfileKind::Uniform(int(d)?))),
        ("gaussian", [d, w]) => {
            let width: f64 = w.parse().map_err(|_| bad("bad width"))?;
            Ok(Some(ProfileKind::Gaussian { d: int(d)?, width }))
        }
        ("point" | "uniform" | "gaussian", _) => Err(bad("wrong number of fields")),
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_and_normalizes() {
        let p = parse_profile("a 0.8944271909999159\nb 0.4472135954999579\n", false).unwrap();
        assert!((p.k().value() - 0.68).abs() < 1e-12);
        assert!(parse_profile("a 2\nb 1\n", false).is_err());
        let q = parse_profile("# two lines\na 2\nb 1\n", true).unwrap();
        assert!((q.amplitudes()[0] - 2.0 / 5f64.sqrt()).abs() < 1e-15);
        assert!(matches!(parse_profile("a 1\nb\n", true), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_profile("a 0\n", true), Err(Error::Profile(_))));
    }

    #[test]
    fn specs() {
        assert_eq!(parse_profile_spec("point").unwrap(), Some(ProfileKind::Point));
        assert_eq!(parse_profile_spec("uniform:3").unwrap(), Some(ProfileKind::Uniform(3)));
        assert_eq!(
            parse_profile_spec("gaussian:5:1.5").unwrap(),
            Some(ProfileKind::Gaussian { d: 5, width: 1.5 })
        );
        assert!(parse_profile_spec("uniform").is_err());
        assert!(parse_profile_spec("uniform:x").is_err());
        assert_eq!(parse_profile_spec("spectra.txt").unwrap(), None);
    }
}
