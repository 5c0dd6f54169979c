use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bounds for `E_r = liminf (p_{n+r} - p_n) / log p_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErBounds {
    pub r: u64,
    pub theta: f64,
    /// `max(r - 2 theta, 0)`.
    pub simple: f64,
    /// `(sqrt r - sqrt(2 theta))^2`, stated for `r >= 2` only.
    pub thm3: Option<f64>,
    /// `(sqrt r - 1)^2`, the case `theta = 1/2`.
    pub unconditional: f64,
}

pub fn er_bounds(r: u64, theta: f64) -> Result<ErBounds> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    if !(0.5..=1.0).contains(&theta) {
        return Err(Error::InvalidArgument(format!("theta = {theta} outside [1/2, 1]")));
    }
    let rf = r as f64;
    Ok(ErBounds {
        r,
        theta,
        simple: (rf - 2.0 * theta).max(0.0),
        thm3: (r >= 2).then(|| (rf.sqrt() - (2.0 * theta).sqrt()).powi(2)),
        unconditional: (rf.sqrt() - 1.0).powi(2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(er_bounds(2, 1.0).unwrap().simple, 0.0);
        assert_eq!(er_bounds(1, 0.5).unwrap().unconditional, 0.0);
        assert_eq!(er_bounds(1, 0.5).unwrap().thm3, None);
        assert_eq!(er_bounds(4, 0.5).unwrap().unconditional, 1.0);
        assert!((er_bounds(2, 0.5).unwrap().thm3.unwrap() - (2f64.sqrt() - 1.0).powi(2)).abs() < 1e-15);
        assert!(er_bounds(0, 0.5).is_err());
        assert!(er_bounds(2, 0.4).is_err());
    }
}
