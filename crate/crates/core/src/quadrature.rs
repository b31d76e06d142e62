//! Composite trapezoid rule for smooth 2π-periodic integrands.
//!
//! For analytic periodic functions the trapezoid rule converges geometrically,
//! with a rate set by the distance of the nearest complex singularity from the
//! real axis. Refinement doubles the interval count and reuses every previous
//! node, so the half-resolution estimate that drives the stopping test comes
//! for free.

use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Settings for the adaptive even-function trapezoid rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Quadrature {
    /// Starting number of intervals on [0, π]. Must be even.
    pub nodes: usize,
    /// Refinement stops with an error once the interval count would exceed this.
    pub max_nodes: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            nodes: 4096,
            max_nodes: 1 << 22,
            rel_tol: 1e-12,
            abs_tol: 1e-15,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureEstimate {
    pub value: f64,
    /// Interval count on [0, π] of the accepted estimate.
    pub intervals: usize,
    /// |T(n) - T(n/2)| at acceptance.
    pub residual: f64,
}

impl Quadrature {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 2 || !self.nodes.is_multiple_of(2) {
            return Err(Error::invalid("nodes", "must be an even integer >= 2"));
        }
        if self.max_nodes < self.nodes {
            return Err(Error::invalid("max_nodes", "must be >= nodes"));
        }
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) {
            return Err(Error::invalid("rel_tol", "tolerances must be positive"));
        }
        Ok(())
    }

    /// Period mean `(1/2π) ∫₀^{2π} f dk` of an even periodic function.
    ///
    /// An even 2π-periodic function depends on `k` only through
    /// `s = sin²(k/2)`, so `f` is handed `s` rather than `k`. Only nodes on
    /// [0, π] are evaluated.
    pub fn mean_even<F>(&self, f: F) -> Result<QuadratureEstimate>
    where
        F: Fn(f64) -> f64,
    {
        self.validate()?;
        let n = self.nodes;
        let table = base_table(n);
        let ends = 0.5 * (f(table[0]) + f(table[n]));
        let mut even = 0.0;
        let mut odd = 0.0;
        for (j, &s) in table.iter().enumerate().take(n).skip(1) {
            if j % 2 == 0 {
                even += f(s);
            } else {
                odd += f(s);
            }
        }

        let mut intervals = n;
        loop {
            let fine = (ends + even + odd) / intervals as f64;
            let coarse = 2.0 * (ends + even) / intervals as f64;
            let residual = (fine - coarse).abs();
            if residual <= (self.rel_tol * fine.abs()).max(self.abs_tol) {
                return Ok(QuadratureEstimate {
                    value: fine,
                    intervals,
                    residual,
                });
            }
            if intervals * 2 > self.max_nodes {
                return Err(Error::QuadratureNotConverged {
                    nodes: intervals,
                    residual,
                });
            }
            even += odd;
            intervals *= 2;
            odd = (1..intervals)
                .step_by(2)
                .map(|j| {
                    let half = (j as f64 * PI / (2 * intervals) as f64).sin();
                    f(half * half)
                })
                .sum();
        }
    }
}

/// Plain trapezoid mean of a general periodic function over one full period
/// with `n` equally spaced nodes.
pub fn mean_periodic<F>(f: F, n: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    let h = 2.0 * PI / n as f64;
    (0..n).map(|j| f(j as f64 * h)).sum::<f64>() / n as f64
}

/// `sin²(jπ/2n)` for j = 0..=n, shared across calls with the same `n`.
fn base_table(n: usize) -> Arc<[f64]> {
    type Tables = Vec<(usize, Arc<[f64]>)>;
    static CACHE: OnceLock<Mutex<Tables>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    if let Some((_, table)) = guard.iter().find(|(m, _)| *m == n) {
        return Arc::clone(table);
    }
    let table: Arc<[f64]> = (0..=n)
        .map(|j| {
            let half = (j as f64 * PI / (2 * n) as f64).sin();
            half * half
        })
        .collect();
    guard.push((n, Arc::clone(&table)));
    table
}
