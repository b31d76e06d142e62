//! Exact finite-N reference values.
//!
//! Two Hamiltonians are diagonalized exactly: the spin chain at a frozen field
//! amplitude x,
//!
//! `H' = Σ_j [2λx σ^X_j + (ε/2) σ^Z_j − J σ^Y_j σ^Y_{j+1}]`,
//!
//! and the full spin-boson Hamiltonian with a truncated Fock space,
//!
//! `H = a†a + Σ_j [(λ/√N)(a + a†) σ^X_j + (ε/2) σ^Z_j − J σ^Y_j σ^Y_{j+1}]`,
//!
//! both on a periodic ring. Bit j of a basis index is set when spin j points
//! down. Spectra are obtained block by block in momentum sectors, and for the
//! full model also in sectors of the parity `(−1)^{a†a + #down}`.

mod sectors;

use std::f64::consts::LN_2;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::{find_local_maxima_with, ScanSettings};
use crate::model::{quasiparticle_energy, stable_log_cosh, ModelParams};
use sectors::{block_bytes, blocks, dense, solve_block, RingHamiltonian};

pub const MAX_CHAIN_SITES: usize = 14;
pub const MAX_FULL_SITES: usize = 8;
pub const MIN_CUTOFF: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub sites: usize,
}

impl ChainSpec {
    pub fn new(sites: usize) -> Result<Self> {
        let spec = ChainSpec { sites };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_CHAIN_SITES).contains(&self.sites) {
            return Err(Error::invalid(
                "sites",
                format!("chain needs 2..={MAX_CHAIN_SITES} sites"),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinBosonSpec {
    pub sites: usize,
    /// Highest Fock state kept.
    pub cutoff: usize,
}

impl SpinBosonSpec {
    pub fn new(sites: usize, cutoff: usize) -> Result<Self> {
        let spec = SpinBosonSpec { sites, cutoff };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_FULL_SITES).contains(&self.sites) {
            return Err(Error::invalid(
                "sites",
                format!("spin-boson model needs 2..={MAX_FULL_SITES} sites"),
            ));
        }
        if self.cutoff < MIN_CUTOFF {
            return Err(Error::invalid("cutoff", format!("must be >= {MIN_CUTOFF}")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        (self.cutoff + 1) << self.sites
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleSettings {
    /// Bytes the largest dense matrix (with solver workspace) may occupy.
    pub memory_budget: u64,
    /// `full_ed` repeats at `cutoff + cutoff_check` ...
    pub cutoff_check: usize,
    /// ... and fails if any output moves by more than this, relatively.
    pub cutoff_rel_tol: f64,
    /// Used for the thermodynamic-limit predictions.
    pub scan: ScanSettings,
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings {
            memory_budget: 2 << 30,
            cutoff_check: 8,
            cutoff_rel_tol: 1e-6,
            scan: ScanSettings::default(),
        }
    }
}

/// An exact finite-N value next to its thermodynamic-limit prediction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub exact: f64,
    pub predicted: f64,
    pub gap: f64,
}

impl Comparison {
    fn new(exact: f64, predicted: f64) -> Self {
        Comparison {
            exact,
            predicted,
            gap: (exact - predicted).abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    /// `(1/N) log Z` against `Ω(x*) + log 2`.
    pub log_z_per_site: Comparison,
    /// `⟨a†a⟩/N` against `Θ = x*² + 1/(2β)`.
    pub photons_per_site: Comparison,
    pub sites: usize,
    pub cutoff: usize,
    pub check_cutoff: usize,
    /// Largest relative change of either exact value between the two cutoffs.
    pub cutoff_relative_change: f64,
    pub dimension: usize,
    pub x_star: f64,
}

struct Chain {
    sites: usize,
    field: f64,
    splitting: f64,
    coupling: f64,
}

impl Chain {
    fn new(params: &ModelParams, x: f64, sites: usize) -> Self {
        Chain {
            sites,
            field: 2.0 * params.lambda * x,
            splitting: 0.5 * params.epsilon,
            coupling: params.spin_coupling,
        }
    }
}

/// `−J σ^Y_j σ^Y_{j+1}` flips both spins with amplitude `+J` when they are
/// parallel and `−J` when antiparallel. A two-site ring has two bonds between
/// the same pair.
fn push_yy(state: usize, sites: usize, coupling: f64, out: &mut Vec<(usize, f64)>) {
    if coupling == 0.0 {
        return;
    }
    for j in 0..sites {
        let k = (j + 1) % sites;
        let parallel = ((state >> j) & 1) == ((state >> k) & 1);
        let amp = if parallel { coupling } else { -coupling };
        out.push((state ^ (1 << j) ^ (1 << k), amp));
    }
}

fn splitting_energy(bits: usize, sites: usize, half_eps: f64) -> f64 {
    let down = (bits & ((1 << sites) - 1)).count_ones() as f64;
    half_eps * (sites as f64 - 2.0 * down)
}

impl RingHamiltonian for Chain {
    fn sites(&self) -> usize {
        self.sites
    }

    fn dim(&self) -> usize {
        1 << self.sites
    }

    fn apply(&self, state: usize, out: &mut Vec<(usize, f64)>) {
        out.push((state, splitting_energy(state, self.sites, self.splitting)));
        if self.field != 0.0 {
            for j in 0..self.sites {
                out.push((state ^ (1 << j), self.field));
            }
        }
        push_yy(state, self.sites, self.coupling, out);
    }
}

struct SpinBoson {
    sites: usize,
    cutoff: usize,
    coupling_per_root_n: f64,
    splitting: f64,
    spin_coupling: f64,
}

impl SpinBoson {
    fn new(params: &ModelParams, spec: &SpinBosonSpec) -> Self {
        SpinBoson {
            sites: spec.sites,
            cutoff: spec.cutoff,
            coupling_per_root_n: params.lambda / (spec.sites as f64).sqrt(),
            splitting: 0.5 * params.epsilon,
            spin_coupling: params.spin_coupling,
        }
    }

    fn photons(&self, state: usize) -> usize {
        state >> self.sites
    }
}

impl RingHamiltonian for SpinBoson {
    fn sites(&self) -> usize {
        self.sites
    }

    fn dim(&self) -> usize {
        (self.cutoff + 1) << self.sites
    }

    fn apply(&self, state: usize, out: &mut Vec<(usize, f64)>) {
        let n = self.photons(state);
        let stride = 1usize << self.sites;
        out.push((state, n as f64 + splitting_energy(state, self.sites, self.splitting)));
        if self.coupling_per_root_n != 0.0 {
            for j in 0..self.sites {
                let flipped = state ^ (1 << j);
                if n > 0 {
                    out.push((flipped - stride, self.coupling_per_root_n * (n as f64).sqrt()));
                }
                if n < self.cutoff {
                    out.push((flipped + stride, self.coupling_per_root_n * ((n + 1) as f64).sqrt()));
                }
            }
        }
        push_yy(state, self.sites, self.spin_coupling, out);
    }

    fn sector(&self, state: usize) -> u8 {
        ((self.photons(state) as u32 + (state & ((1 << self.sites) - 1)).count_ones()) % 2) as u8
    }
}

fn check_budget(required: u64, settings: &OracleSettings) -> Result<()> {
    if required > settings.memory_budget {
        return Err(Error::MemoryBudget {
            required,
            budget: settings.memory_budget,
        });
    }
    Ok(())
}

/// Thermal sums over `(energy, observable, weight)`: returns `log Z` and the
/// thermal average of the observable.
fn thermal(levels: &[(f64, f64, f64)], beta: f64) -> (f64, f64) {
    let shift = levels
        .iter()
        .map(|&(e, _, _)| -beta * e)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut z = 0.0;
    let mut obs = 0.0;
    for &(e, o, w) in levels {
        let b = w * (-beta * e - shift).exp();
        z += b;
        obs += b * o;
    }
    (shift + z.ln(), obs / z)
}

fn spectrum<H: RingHamiltonian>(
    h: &H,
    observable: Option<&dyn Fn(usize) -> f64>,
    settings: &OracleSettings,
) -> Result<Vec<(f64, f64, f64)>> {
    let bl = blocks(h);
    check_budget(block_bytes(&bl, h.sites(), observable.is_some()), settings)?;
    let mut levels = Vec::with_capacity(h.dim());
    for b in &bl {
        let w = b.weight(h.sites());
        levels.extend(solve_block(h, b, observable)?.into_iter().map(|(e, o)| (e, o, w)));
    }
    Ok(levels)
}

pub fn chain_log_z_exact(params: &ModelParams, x: f64, spec: &ChainSpec) -> Result<f64> {
    chain_log_z_exact_with(params, x, spec, &OracleSettings::default())
}

/// `(1/N) log Tr e^{−βH'}` from the full spectrum of the chain.
pub fn chain_log_z_exact_with(
    params: &ModelParams,
    x: f64,
    spec: &ChainSpec,
    settings: &OracleSettings,
) -> Result<f64> {
    params.validate()?;
    spec.validate()?;
    check_x(x)?;
    let chain = Chain::new(params, x, spec.sites);
    let levels = spectrum(&chain, None, settings)?;
    Ok(thermal(&levels, params.beta).0 / spec.sites as f64)
}

/// Same quantity from one dense diagonalization of the whole 2^N space.
pub fn chain_log_z_dense(params: &ModelParams, x: f64, spec: &ChainSpec, settings: &OracleSettings) -> Result<f64> {
    params.validate()?;
    spec.validate()?;
    check_x(x)?;
    let d = 1u64 << spec.sites;
    check_budget(2 * d * d * 8, settings)?;
    let energies = chain_hamiltonian(params, x, spec).symmetric_eigenvalues();
    let levels: Vec<_> = energies.iter().map(|&e| (e, 0.0, 1.0)).collect();
    Ok(thermal(&levels, params.beta).0 / spec.sites as f64)
}

/// Dense chain Hamiltonian in the computational basis.
pub fn chain_hamiltonian(params: &ModelParams, x: f64, spec: &ChainSpec) -> DMatrix<f64> {
    dense(&Chain::new(params, x, spec.sites))
}

/// Dense spin-boson Hamiltonian; basis index `n * 2^N + spins`.
pub fn spin_boson_hamiltonian(params: &ModelParams, spec: &SpinBosonSpec) -> DMatrix<f64> {
    dense(&SpinBoson::new(params, spec))
}

/// Free-fermion product `(1/N) Σ_k log[2 cosh(βξ_k/2)]` over k = 2πm/N.
/// No fermion-parity projection is applied.
pub fn chain_log_z_product_formula(params: &ModelParams, x: f64, spec: &ChainSpec) -> Result<f64> {
    params.validate()?;
    spec.validate()?;
    check_x(x)?;
    let n = spec.sites;
    if params.spin_coupling == 0.0 {
        return Ok(stable_log_cosh(params.beta * params.site_field(x)) + LN_2);
    }
    let mut sum = 0.0;
    for m in 0..n {
        let k = 2.0 * std::f64::consts::PI * m as f64 / n as f64;
        let xi = quasiparticle_energy(params, x, k)?;
        sum += stable_log_cosh(0.5 * params.beta * xi);
    }
    Ok(sum / n as f64 + LN_2)
}

fn check_x(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::invalid("x", "must be finite"));
    }
    Ok(())
}

pub fn full_ed(params: &ModelParams, spec: &SpinBosonSpec) -> Result<OracleReport> {
    full_ed_with(params, spec, &OracleSettings::default())
}

/// Exact `(1/N) log Z` and `⟨a†a⟩/N` of the truncated spin-boson model,
/// checked for cutoff convergence and compared with the landscape prediction.
pub fn full_ed_with(params: &ModelParams, spec: &SpinBosonSpec, settings: &OracleSettings) -> Result<OracleReport> {
    params.validate()?;
    spec.validate()?;
    let check = SpinBosonSpec {
        cutoff: spec.cutoff + settings.cutoff_check,
        ..*spec
    };
    let (log_z, photons) = spin_boson_thermal(params, spec, settings)?;
    let (log_z_check, photons_check) = spin_boson_thermal(params, &check, settings)?;
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
    let change = rel(log_z, log_z_check).max(rel(photons, photons_check));
    if !(change < settings.cutoff_rel_tol) {
        return Err(Error::CutoffUnconverged {
            cutoff: spec.cutoff,
            check_cutoff: check.cutoff,
            relative_change: change,
        });
    }

    let top = find_local_maxima_with(params, &settings.scan)?.global();
    let theta = top.x * top.x + 0.5 / params.beta;
    Ok(OracleReport {
        log_z_per_site: Comparison::new(log_z, top.omega + LN_2),
        photons_per_site: Comparison::new(photons, theta),
        sites: spec.sites,
        cutoff: spec.cutoff,
        check_cutoff: check.cutoff,
        cutoff_relative_change: change,
        dimension: spec.dim(),
        x_star: top.x,
    })
}

/// `(1/N) log Z` and `⟨a†a⟩/N` at a single cutoff.
pub fn spin_boson_thermal(params: &ModelParams, spec: &SpinBosonSpec, settings: &OracleSettings) -> Result<(f64, f64)> {
    params.validate()?;
    spec.validate()?;
    let h = SpinBoson::new(params, spec);
    let photons = |state: usize| h.photons(state) as f64;
    let levels = spectrum(&h, Some(&photons), settings)?;
    let (log_z, n) = thermal(&levels, params.beta);
    let sites = spec.sites as f64;
    Ok((log_z / sites, n / sites))
}
