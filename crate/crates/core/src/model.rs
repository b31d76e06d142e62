//! The effective free-energy landscape Ω(x) = −βx² + I(x).
//!
//! With the photon amplitude frozen at `x = Re(α)/√N`, the qubit chain is a
//! transverse-field Ising chain whose free-fermion dispersion is
//! `ξ_k = 2J sqrt(1 + g² − 2g cos k)` with `g = sqrt((2λx/J)² + (ε/2J)²)`.
//! `I(x)` is the momentum average of `log cosh(βξ_k/2)`. The constant `log 2`
//! per site is dropped throughout; it cannot move a maximizer.
//!
//! Energies are in units of the photon frequency.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::Quadrature;

/// The four physical controls of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Qubit–field coupling λ.
    pub lambda: f64,
    /// Nearest-neighbour Y–Y coupling J.
    pub spin_coupling: f64,
    /// Qubit level splitting ε.
    pub epsilon: f64,
    /// Inverse temperature β.
    pub beta: f64,
}

/// Names one of the fields of [`ModelParams`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    Lambda,
    SpinCoupling,
    Epsilon,
    Beta,
}

impl Parameter {
    pub const ALL: [Parameter; 4] = [
        Parameter::Lambda,
        Parameter::SpinCoupling,
        Parameter::Epsilon,
        Parameter::Beta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Parameter::Lambda => "lambda",
            Parameter::SpinCoupling => "spin_coupling",
            Parameter::Epsilon => "epsilon",
            Parameter::Beta => "beta",
        }
    }
}

impl std::fmt::Display for Parameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Parameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" => Ok(Parameter::Lambda),
            "spin_coupling" | "spin-coupling" | "J" | "j" => Ok(Parameter::SpinCoupling),
            "epsilon" => Ok(Parameter::Epsilon),
            "beta" => Ok(Parameter::Beta),
            other => Err(Error::invalid(
                "sweep",
                format!("unknown parameter '{other}' (expected lambda, spin_coupling, epsilon or beta)"),
            )),
        }
    }
}

impl ModelParams {
    pub fn new(lambda: f64, spin_coupling: f64, epsilon: f64, beta: f64) -> Result<Self> {
        let params = ModelParams {
            lambda,
            spin_coupling,
            epsilon,
            beta,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for p in Parameter::ALL {
            let v = self.get(p);
            if !v.is_finite() {
                return Err(Error::invalid(p.name(), format!("must be finite, got {v}")));
            }
            if v < 0.0 {
                return Err(Error::invalid(p.name(), format!("must be >= 0, got {v}")));
            }
        }
        if self.beta <= 0.0 {
            return Err(Error::invalid("beta", format!("must be > 0, got {}", self.beta)));
        }
        Ok(())
    }

    pub fn get(&self, p: Parameter) -> f64 {
        match p {
            Parameter::Lambda => self.lambda,
            Parameter::SpinCoupling => self.spin_coupling,
            Parameter::Epsilon => self.epsilon,
            Parameter::Beta => self.beta,
        }
    }

    /// Copy with one field replaced. Does not validate.
    pub fn with(mut self, p: Parameter, value: f64) -> Self {
        match p {
            Parameter::Lambda => self.lambda = value,
            Parameter::SpinCoupling => self.spin_coupling = value,
            Parameter::Epsilon => self.epsilon = value,
            Parameter::Beta => self.beta = value,
        }
        self
    }

    /// Single-site field magnitude `sqrt((2λx)² + (ε/2)²)`, equal to `J·g`.
    pub fn site_field(&self, x: f64) -> f64 {
        let transverse = 2.0 * self.lambda * x;
        let longitudinal = 0.5 * self.epsilon;
        transverse.hypot(longitudinal)
    }
}

/// Effective transverse field `g(x)` of the rotated chain.
///
/// Fails with [`Error::ZeroCoupling`] at J = 0, where `g` diverges; callers
/// must use the decoupled closed form instead.
pub fn effective_field_g(params: &ModelParams, x: f64) -> Result<f64> {
    params.validate()?;
    if params.spin_coupling == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    Ok(params.site_field(x) / params.spin_coupling)
}

/// Quasiparticle energy `ξ_k(x) = 2J sqrt(1 + g² − 2g cos k)`.
pub fn quasiparticle_energy(params: &ModelParams, x: f64, k: f64) -> Result<f64> {
    let g = effective_field_g(params, x)?;
    let half = (0.5 * k).sin();
    Ok(dispersion(params.spin_coupling, g, half * half))
}

/// `2J sqrt((1−g)² + 4g sin²(k/2))`, the cancellation-free form of the
/// dispersion near the gap minimum.
#[inline]
fn dispersion(j: f64, g: f64, sin_half_sq: f64) -> f64 {
    let d = 1.0 - g;
    2.0 * j * (d * d + 4.0 * g * sin_half_sq).sqrt()
}

/// `log(cosh(y))` without overflow, accurate to round-off for every finite `y`.
#[inline]
pub fn stable_log_cosh(y: f64) -> f64 {
    let a = y.abs();
    if a < 1.0 {
        // cosh y - 1 = 2 sinh²(y/2), no cancellation for small y
        let sh = (0.5 * a).sinh();
        (2.0 * sh * sh).ln_1p()
    } else if a < 20.0 {
        a + (-2.0 * a).exp().ln_1p() - LN_2
    } else {
        // exp(-40) is below half an ulp of a - ln 2
        a - LN_2
    }
}

/// `I(x)` with the default quadrature.
pub fn landscape_i(params: &ModelParams, x: f64) -> Result<f64> {
    landscape_i_with(params, x, &Quadrature::default())
}

/// `I(x) = (1/2π) ∫₀^{2π} log cosh(βξ_k(x)/2) dk`.
///
/// At J = 0 the dispersion is flat, `ξ_k = 2 sqrt((2λx)² + (ε/2)²)`, and the
/// integral collapses to a single `log cosh`.
pub fn landscape_i_with(params: &ModelParams, x: f64, quad: &Quadrature) -> Result<f64> {
    params.validate()?;
    if !x.is_finite() {
        return Err(Error::invalid("x", format!("must be finite, got {x}")));
    }
    let beta = params.beta;
    let j = params.spin_coupling;
    if j == 0.0 {
        return Ok(stable_log_cosh(beta * params.site_field(x)));
    }
    let g = params.site_field(x) / j;
    let gap = (1.0 - g) * (1.0 - g);
    let slope = 4.0 * g;
    let scale = beta * j;
    let est = quad.mean_even(|s| stable_log_cosh(scale * (gap + slope * s).sqrt()))?;
    Ok(est.value)
}

/// `Ω(x) = −βx² + I(x)` with the default quadrature.
pub fn omega(params: &ModelParams, x: f64) -> Result<f64> {
    omega_with(params, x, &Quadrature::default())
}

pub fn omega_with(params: &ModelParams, x: f64, quad: &Quadrature) -> Result<f64> {
    let i = landscape_i_with(params, x, quad)?;
    Ok(-params.beta * x * x + i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(lambda: f64, j: f64, epsilon: f64, beta: f64) -> ModelParams {
        ModelParams::new(lambda, j, epsilon, beta).unwrap()
    }

    #[test]
    fn g_at_zero_field_is_half_epsilon_over_j() {
        let g = effective_field_g(&p(0.7, 1.0, 1.1, 100.0), 0.0).unwrap();
        assert!((g - 0.55).abs() < 1e-15);
    }

    #[test]
    fn g_without_splitting() {
        let g = effective_field_g(&p(1.0, 1.0, 0.0, 1.0), 0.5).unwrap();
        assert_eq!(g, 1.0);
    }

    #[test]
    fn g_generic_value() {
        // independent arbitrary-precision evaluation: 1.470597242619474
        let g = effective_field_g(&p(1.3, 0.8, 1.1, 1.0), 0.4).unwrap();
        assert!((g - 1.470_597_242_619_474).abs() < 1e-14);
    }

    #[test]
    fn g_rejects_zero_coupling() {
        let err = effective_field_g(&p(1.0, 0.0, 1.0, 1.0), 0.1).unwrap_err();
        assert_eq!(err, Error::ZeroCoupling);
        assert!(err.to_string().contains("use J=0 closed form"));
    }

    #[test]
    fn xi_examples() {
        let xi = quasiparticle_energy(&p(1.0, 1.0, 0.0, 1.0), 0.0, PI / 3.0).unwrap();
        assert!((xi - 2.0).abs() < 1e-15);
        let closed = quasiparticle_energy(&p(1.0, 1.0, 0.0, 1.0), 0.5, 0.0).unwrap();
        assert_eq!(closed, 0.0);
        // independent arbitrary-precision evaluation: 2.845417368331050
        let xi = quasiparticle_energy(&p(1.3, 0.8, 1.1, 1.0), 0.4, PI / 2.0).unwrap();
        assert!((xi - 2.845_417_368_331_05).abs() < 1e-13);
    }

    #[test]
    fn log_cosh_examples() {
        assert_eq!(stable_log_cosh(0.0), 0.0);
        assert!((stable_log_cosh(1000.0) - 999.306_852_819_440_1).abs() < 1e-12);
        assert!((stable_log_cosh(-1000.0) - 999.306_852_819_440_1).abs() < 1e-12);
        // arbitrary-precision reference: 1.3250027473578644
        assert!((stable_log_cosh(2.0) - 1.325_002_747_357_864_4).abs() < 1e-15);
        assert!(stable_log_cosh(1e300).is_finite());
    }

    #[test]
    fn log_cosh_small_arguments_keep_relative_accuracy() {
        let y = 1e-8;
        assert!((stable_log_cosh(y) / (0.5 * y * y) - 1.0).abs() < 1e-12);
        for &y in &[0.3, 0.999_999, 1.0, 1.5, 19.999, 20.0, 25.0] {
            let naive = f64::cosh(y).ln();
            assert!((stable_log_cosh(y) - naive).abs() < 4e-15 * naive.max(1.0), "y={y}");
        }
    }

    #[test]
    fn decoupled_closed_form_at_origin() {
        let i = landscape_i(&p(0.4, 0.0, 1.1, 100.0), 0.0).unwrap();
        assert!((i - 54.306_852_819_440_05).abs() < 1e-12);
    }

    #[test]
    fn vanishing_beta_flattens_landscape() {
        let i = landscape_i(&p(0.9, 1.0, 1.1, 1e-12), 0.3).unwrap();
        assert!((0.0..1e-20).contains(&i));
    }

    #[test]
    fn omega_at_origin_equals_i() {
        let params = p(0.9, 1.0, 1.1, 100.0);
        assert_eq!(omega(&params, 0.0).unwrap(), landscape_i(&params, 0.0).unwrap());
    }

    #[test]
    fn omega_without_coupling_is_quadratic() {
        let o = omega(&p(0.0, 0.0, 1.1, 100.0), 0.3).unwrap();
        assert!((o - 45.306_852_819_440_05).abs() < 1e-11);
    }

    #[test]
    fn omega_is_even() {
        let params = p(0.93, 0.7, 0.4, 37.0);
        for &x in &[0.01, 0.2, 0.77, 2.5] {
            assert_eq!(omega(&params, x).unwrap(), omega(&params, -x).unwrap());
        }
    }

    #[test]
    fn validation_names_field() {
        let err = ModelParams::new(1.0, 1.0, 1.0, 0.0).unwrap_err();
        assert!(matches!(err, Error::Invalid { field: "beta", .. }));
        let err = ModelParams::new(-1.0, 1.0, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::Invalid { field: "lambda", .. }));
        let err = ModelParams::new(1.0, f64::NAN, 1.0, 1.0).unwrap_err();
        assert!(matches!(
            err,
            Error::Invalid {
                field: "spin_coupling",
                ..
            }
        ));
    }

    #[test]
    fn parameter_names_round_trip() {
        for p in Parameter::ALL {
            assert_eq!(p.name().parse::<Parameter>().unwrap(), p);
        }
        assert!("gamma".parse::<Parameter>().is_err());
    }
}
