//! Local and global maxima of Ω(x).
//!
//! Ω is even in x, so only [0, x_max] is scanned. A uniform grid locates every
//! maximum to within one grid spacing; golden-section search then refines each
//! one. The x = 0 end is a maximum whenever it dominates its grid neighbour.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{omega_with, ModelParams};
use crate::quadrature::Quadrature;

/// Numerical settings for maximum finding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanSettings {
    /// Grid points on [0, x_max], endpoints included.
    pub grid_points: usize,
    /// Final bracket width of the golden-section refinement.
    pub refine_tol: f64,
    /// Maxima whose Ω differs by less than this are treated as degenerate.
    pub tie_tol: f64,
    pub quadrature: Quadrature,
}

impl Default for ScanSettings {
    fn default() -> Self {
        ScanSettings {
            grid_points: 2001,
            refine_tol: 1e-8,
            tie_tol: 1e-9,
            quadrature: Quadrature::default(),
        }
    }
}

impl ScanSettings {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 3 {
            return Err(Error::invalid("grid", "need at least 3 grid points"));
        }
        if !(self.refine_tol > 0.0) {
            return Err(Error::invalid("refine_tol", "must be positive"));
        }
        if !(self.tie_tol >= 0.0) {
            return Err(Error::invalid("tie_tol", "must be non-negative"));
        }
        self.quadrature.validate()
    }

    fn omega(&self, params: &ModelParams, x: f64) -> Result<f64> {
        omega_with(params, x.abs(), &self.quadrature)
    }
}

/// A maximum of Ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandscapePoint {
    pub x: f64,
    pub omega: f64,
    pub is_global: bool,
}

/// All maxima found on [0, x_max].
#[derive(Debug, Clone, PartialEq)]
pub struct MaximaReport {
    /// Global maximum first, the rest by descending Ω.
    pub maxima: Vec<LandscapePoint>,
    /// Ω(top) − Ω(second), or +∞ with a single maximum.
    pub coexistence_gap: f64,
    /// The two highest maxima are degenerate within the tie tolerance.
    pub tie: bool,
}

impl MaximaReport {
    pub fn global(&self) -> LandscapePoint {
        self.maxima[0]
    }

    pub fn count(&self) -> usize {
        self.maxima.len()
    }
}

/// Upper end of the scanned interval.
///
/// `I(x)` grows at most linearly with slope `2βλ`, so every maximizer of
/// `−βx² + I(x)` lies below `λ`; the margin covers the ε-dependent offset.
pub fn scan_bound(params: &ModelParams) -> f64 {
    2.0 * params.lambda + params.epsilon + 1.0
}

pub fn find_local_maxima(params: &ModelParams) -> Result<MaximaReport> {
    find_local_maxima_with(params, &ScanSettings::default())
}

pub fn find_local_maxima_with(params: &ModelParams, settings: &ScanSettings) -> Result<MaximaReport> {
    params.validate()?;
    settings.validate()?;

    if params.lambda == 0.0 {
        let omega = settings.omega(params, 0.0)?;
        return Ok(MaximaReport {
            maxima: vec![LandscapePoint {
                x: 0.0,
                omega,
                is_global: true,
            }],
            coexistence_gap: f64::INFINITY,
            tie: false,
        });
    }

    let n = settings.grid_points;
    let x_max = scan_bound(params);
    let h = x_max / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
    let values: Vec<f64> = xs
        .par_iter()
        .map(|&x| settings.omega(params, x))
        .collect::<Result<_>>()?;

    let mut found = Vec::new();
    if values[0] >= values[1] {
        found.push(refine(params, settings, 0.0, xs[1], (xs[0], values[0]))?);
    }
    for i in 1..n - 1 {
        if values[i] > values[i - 1] && values[i] >= values[i + 1] {
            found.push(refine(params, settings, xs[i - 1], xs[i + 1], (xs[i], values[i]))?);
        }
    }
    if found.is_empty() {
        // no interior peak on the grid: fall back to the best grid point
        let (i, &omega) = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("grid is non-empty");
        found.push((xs[i], omega));
    }

    Ok(build_report(found, settings))
}

/// The global maximum; at a tie the smaller x wins.
pub fn global_maximizer(params: &ModelParams) -> Result<LandscapePoint> {
    Ok(find_local_maxima(params)?.global())
}

/// Follow Ω uphill from `seed` and return the local maximum reached.
///
/// Steps are one scan-grid spacing; the final bracket is refined like the
/// scan's maxima.
pub fn climb_from(params: &ModelParams, seed: f64, settings: &ScanSettings) -> Result<LandscapePoint> {
    params.validate()?;
    settings.validate()?;
    let x_max = scan_bound(params);
    if params.lambda == 0.0 {
        return Ok(LandscapePoint {
            x: 0.0,
            omega: settings.omega(params, 0.0)?,
            is_global: false,
        });
    }
    let h = x_max / (settings.grid_points - 1) as f64;
    let mut x = seed.abs().min(x_max);
    let mut fx = settings.omega(params, x)?;

    let up = settings.omega(params, (x + h).min(x_max))?;
    let down = settings.omega(params, x - h)?;
    let dir = if up > fx && x < x_max {
        1.0
    } else if down > fx && x > 0.0 {
        -1.0
    } else {
        0.0
    };

    if dir != 0.0 {
        for _ in 0..4 * settings.grid_points {
            let next = (x + dir * h).clamp(0.0, x_max);
            if next == x {
                break;
            }
            let f_next = settings.omega(params, next)?;
            if f_next <= fx {
                break;
            }
            x = next;
            fx = f_next;
        }
    }

    let (x, omega) = refine(params, settings, (x - h).max(0.0), (x + h).min(x_max), (x, fx))?;
    Ok(LandscapePoint {
        x,
        omega,
        is_global: false,
    })
}

/// Golden-section maximization of Ω on `[lo, hi]`. The result never falls
/// below `fallback`, and a bracket touching x = 0 snaps to the origin when the
/// origin is as high up to round-off.
fn refine(params: &ModelParams, settings: &ScanSettings, lo: f64, hi: f64, fallback: (f64, f64)) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let f = |x: f64| settings.omega(params, x);

    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > settings.refine_tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    let mid = 0.5 * (a + b);
    let mut best = (mid, f(mid)?);
    if fallback.1 > best.1 {
        best = fallback;
    }
    if lo == 0.0 && best.0 != 0.0 {
        let origin = f(0.0)?;
        if origin >= best.1 - 8.0 * f64::EPSILON * best.1.abs() {
            best = (0.0, origin);
        }
    }
    Ok(best)
}

fn build_report(mut found: Vec<(f64, f64)>, settings: &ScanSettings) -> MaximaReport {
    // merge refinements that converged onto the same maximum
    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    let merge = 10.0 * settings.refine_tol;
    let mut unique: Vec<(f64, f64)> = Vec::with_capacity(found.len());
    for (x, o) in found {
        match unique.last_mut() {
            Some(last) if (x - last.0).abs() < merge => {
                if o > last.1 {
                    *last = (x, o);
                }
            }
            _ => unique.push((x, o)),
        }
    }

    unique.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.total_cmp(&b.0)));
    let top = unique[0].1;
    let coexistence_gap = if unique.len() > 1 {
        top - unique[1].1
    } else {
        f64::INFINITY
    };
    let tie = coexistence_gap < settings.tie_tol;

    // among maxima degenerate with the top, the smallest x is global
    let global = unique
        .iter()
        .enumerate()
        .filter(|(_, m)| top - m.1 < settings.tie_tol)
        .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let head = unique.remove(global);
    unique.insert(0, head);

    let maxima = unique
        .into_iter()
        .enumerate()
        .map(|(i, (x, omega))| LandscapePoint {
            x,
            omega,
            is_global: i == 0,
        })
        .collect();
    MaximaReport {
        maxima,
        coexistence_gap,
        tie,
    }
}
