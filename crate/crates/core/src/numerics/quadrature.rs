use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::CompensatedSum;

/// Gauss–Legendre nodes and weights mapped to the unit interval.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
}

/// Builds the `order`-point Gauss–Legendre rule on (0, 1) by Newton
/// iteration on `P_order`.
pub fn gauss_legendre(order: usize) -> Result<QuadratureRule> {
    if !(2..=256).contains(&order) {
        return Err(Error::InvalidArgument(format!("quadrature order {order} outside [2, 256]")));
    }
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Tricomi's initial guess for the i-th root of P_n on (-1, 1).
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut converged = false;
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                converged = true;
                let (_, d) = legendre_with_derivative(n, z);
                dp = d;
                break;
            }
        }
        if !converged {
            return Err(Error::NumericFailure(format!("Newton iteration for Legendre root {i} of order {n}")));
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        // Map from (-1, 1) to (0, 1).
        nodes[i] = 0.5 * (1.0 - z);
        nodes[n - 1 - i] = 0.5 * (1.0 + z);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    Ok(QuadratureRule { nodes, weights, order })
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0f64, z);
    for j in 2..=n {
        let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, dp)
}

impl QuadratureRule {
    /// `int_0^1 f`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        let mut acc = CompensatedSum::new();
        for (&y, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(y));
        }
        acc.value()
    }

    /// `int_0^1 f` using the rule on `panels` equal sub-intervals.
    pub fn integrate_composite<F: FnMut(f64) -> f64>(&self, panels: usize, mut f: F) -> f64 {
        let panels = panels.max(1);
        let width = 1.0 / panels as f64;
        let mut acc = CompensatedSum::new();
        for p in 0..panels {
            let a = p as f64 * width;
            for (&y, &w) in self.nodes.iter().zip(&self.weights) {
                acc.add(width * w * f(a + width * y));
            }
        }
        acc.value()
    }
}
