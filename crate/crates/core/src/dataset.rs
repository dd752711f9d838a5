//! Active repair times (hours) for an airborne communication transceiver.

use sha2::{Digest, Sha256};

use crate::error::{EntropyError, Result};

pub const REPAIR_TIMES: [f64; 45] = [
    0.2, 0.3, 0.5, 0.5, 0.5, 0.5, 0.6, 0.6, 0.7, 0.7, 0.7, 0.8, 0.8, 1.0, 1.0, 1.0, 1.0, 1.1, 1.3, 1.5, 1.5,
    1.5, 1.5, 2.0, 2.0, 2.2, 2.5, 3.0, 3.0, 3.3, 3.3, 4.0, 4.0, 4.5, 4.7, 5.0, 5.4, 5.4, 7.0, 7.5, 8.8, 9.0,
    10.3, 22.0, 24.5,
];

/// SHA-256 of the values printed one per line.
pub const REPAIR_TIMES_SHA256: &str = "7a72b5d15379fc88dd7d953392190c1e5c580763fc5f5b19f00801ab3cf2d858";

pub fn digest(values: &[f64]) -> String {
    let mut h = Sha256::new();
    for v in values {
        h.update(format!("{v}\n").as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Returns the embedded data after checking its digest.
pub fn repair_times() -> Result<&'static [f64]> {
    let d = digest(&REPAIR_TIMES);
    if d != REPAIR_TIMES_SHA256 {
        return Err(EntropyError::domain(format!("embedded dataset digest mismatch: {d}")));
    }
    Ok(&REPAIR_TIMES)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_digest() {
        assert_eq!(REPAIR_TIMES.len(), 45);
        assert_eq!(REPAIR_TIMES[0], 0.2);
        assert_eq!(REPAIR_TIMES[44], 24.5);
        assert!(REPAIR_TIMES.iter().all(|&v| v > 0.0));
        assert!(REPAIR_TIMES.windows(2).all(|w| w[0] <= w[1]));
        assert!(repair_times().is_ok());
    }
}
