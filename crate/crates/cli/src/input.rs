use std::io::Read;
use std::path::Path;

use rand::Rng;
use rss_entropy::rng::derive_seed;
use rss_entropy::SeededStream;

/// Reads one real per line. Blank lines and anything after `#` are ignored.
pub fn read_values(path: &Path) -> Result<Vec<f64>, String> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("cannot read stdin: {e}"))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?
    };
    parse_values(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse_values(text: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let v: f64 = body
            .parse()
            .map_err(|_| format!("line {}: '{body}' is not a number", lineno + 1))?;
        if !v.is_finite() {
            return Err(format!("line {}: non-finite value '{body}'", lineno + 1));
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err("no values found".into());
    }
    Ok(out)
}

/// Adds `U[0,1) * 1e-9 * range` to every value; returns the noise scale.
pub fn jitter(values: &mut [f64], seed: u64) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let scale = 1e-9 * (hi - lo);
    let mut rng = SeededStream::new(derive_seed(seed, "jitter"), 0).rng();
    for v in values.iter_mut() {
        *v += scale * rng.random::<f64>();
    }
    scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blanks() {
        let v = parse_values("# header\n1.5\n\n  2 # trailing\n-3e-1\n").unwrap();
        assert_eq!(v, vec![1.5, 2.0, -0.3]);
        assert!(parse_values("1,5\n").is_err());
        assert!(parse_values("nan\n").is_err());
        assert!(parse_values("# only\n").is_err());
    }

    #[test]
    fn jitter_breaks_ties_deterministically() {
        let mut a = vec![1.0, 1.0, 2.0];
        let mut b = a.clone();
        let s = jitter(&mut a, 3);
        jitter(&mut b, 3);
        assert_eq!(a, b);
        assert_eq!(s, 1e-9);
        assert_ne!(a[0], a[1]);
        assert!(a.iter().zip([1.0, 1.0, 2.0]).all(|(x, y)| (x - y).abs() < 1e-9));
    }
}
