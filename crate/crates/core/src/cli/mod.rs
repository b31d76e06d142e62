//! Command-line front end. Every command writes one CSV document
//! (`reproduce-fig2` writes one per curve) headed by `#` metadata lines that echo the resolved
//! configuration.
//!
//! Exit status: 0 on success, 1 for configuration errors, 2 for numerical
//! failures.

pub mod config;
pub mod csv;

use std::f64::consts::LN_2;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;

use crate::error::{Error, Result};
use crate::landscape::{find_local_maxima_with, scan_bound, ScanSettings};
use crate::model::{effective_field_g, landscape_i_with, omega_with, ModelParams};
use crate::oracle::{
    chain_log_z_exact_with, chain_log_z_product_formula, full_ed_with, ChainSpec, OracleSettings, SpinBosonSpec,
};
use crate::phase::{
    classify_transition_with, hysteresis_branches_with, phase_map_with, sweep_with, PhaseSettings, SweepResult,
    SweepSpec, TransitionRecord,
};
use crate::quadrature::Quadrature;
pub use config::{parse_axis, Command, Layer, Numerics, RunConfig, XRange};
use csv::{real, Csv};

pub const THREADS_ENV: &str = "DICKE_PHASE_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "dicke-phase",
    version,
    about = "Free-energy landscapes and superradiant transitions of the Y-Y coupled Dicke model"
)]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long = "spin-coupling")]
    pub spin_coupling: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Swept parameter, repeat for phase maps.
    #[arg(long, value_name = "PARAM:START:STOP:STEPS", allow_hyphen_values = true)]
    pub sweep: Vec<String>,
    #[arg(long = "x-range", value_name = "START:STOP:POINTS", allow_hyphen_values = true)]
    pub x_range: Option<String>,
    /// Field amplitude for the chain oracle.
    #[arg(long)]
    pub x: Option<f64>,
    /// Output file (directory for reproduce-fig2); stdout when absent.
    #[arg(long)]
    pub out: Option<String>,
    /// Starting quadrature intervals.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Landscape scan grid points.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub sites: Option<usize>,
    /// Boson Fock-space cutoff.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// TOML file with any of the above; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Cli {
    fn layer(&self) -> Result<Layer> {
        let sweeps = if self.sweep.is_empty() {
            None
        } else {
            Some(self.sweep.iter().map(|s| parse_axis(s)).collect::<Result<Vec<_>>>()?)
        };
        Ok(Layer {
            command: None,
            x: self.x,
            sites: self.sites,
            cutoff: self.cutoff,
            out: self.out.clone(),
            couplings: None,
            params: config::PartialParams {
                lambda: self.lambda,
                spin_coupling: self.spin_coupling,
                epsilon: self.epsilon,
                beta: self.beta,
            },
            numerics: config::PartialNumerics {
                nodes: self.nodes,
                grid: self.grid,
            },
            x_range: self.x_range.as_deref().map(str::parse).transpose()?,
            sweeps,
        })
    }

    pub fn resolve(&self) -> Result<RunConfig> {
        let file = self.config.as_deref().map(Layer::read).transpose()?;
        RunConfig::resolve(self.command, self.layer()?, file)
    }
}

/// One produced document and where it goes (`None` = stdout).
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub path: Option<PathBuf>,
    pub text: String,
}

/// Parse, run and write; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let rendered = e.to_string();
            eprintln!("{}", rendered.lines().next().unwrap_or("error: invalid arguments"));
            return 1;
        }
    };
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return 1;
    }
    let outputs = match cli.resolve().and_then(|cfg| run(&cfg)) {
        Ok(outputs) => outputs,
        Err(e) => {
            eprintln!("error: {e}");
            return if e.is_config_error() { 1 } else { 2 };
        }
    };
    match write_outputs(&outputs) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn init_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::invalid(THREADS_ENV, format!("'{raw}' is not a non-negative integer")))?;
    // A pool built earlier in this process stays in place.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn write_outputs(outputs: &[Output]) -> Result<()> {
    let io = |path: &Path, e: std::io::Error| Error::invalid("out", format!("{}: {e}", path.display()));
    for out in outputs {
        match &out.path {
            Some(path) => {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
                }
                std::fs::write(path, &out.text).map_err(|e| io(path, e))?;
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(out.text.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| io(Path::new("<stdout>"), e))?;
            }
        }
    }
    Ok(())
}

fn scan_settings(cfg: &RunConfig) -> ScanSettings {
    ScanSettings {
        grid_points: cfg.numerics.grid,
        quadrature: Quadrature {
            nodes: cfg.numerics.nodes,
            max_nodes: Quadrature::default().max_nodes.max(cfg.numerics.nodes),
            ..Quadrature::default()
        },
        ..ScanSettings::default()
    }
}

fn phase_settings(cfg: &RunConfig) -> PhaseSettings {
    PhaseSettings {
        scan: scan_settings(cfg),
        ..PhaseSettings::default()
    }
}

fn single(cfg: &RunConfig, csv: Csv) -> Vec<Output> {
    vec![Output {
        path: cfg.out.as_ref().map(PathBuf::from),
        text: csv.into_string(),
    }]
}

/// Execute a resolved configuration and render its CSV documents.
pub fn run(cfg: &RunConfig) -> Result<Vec<Output>> {
    cfg.validate()?;
    match cfg.command {
        Command::EvalOmega => eval_omega(cfg),
        Command::FindMax => find_max(cfg),
        Command::Sweep | Command::ReproduceFig4 => {
            let spec = SweepSpec {
                axis: cfg.sweeps[0],
                fixed: cfg.params,
            };
            let mut csv = Csv::new(cfg);
            write_sweep(&mut csv, &spec, &phase_settings(cfg))?;
            Ok(single(cfg, csv))
        }
        Command::PhaseMap | Command::ReproduceFig3 => phase_map(cfg),
        Command::Hysteresis => hysteresis(cfg),
        Command::OracleChain => oracle_chain(cfg),
        Command::OracleFull => oracle_full(cfg),
        Command::ReproduceFig1 => reproduce_fig1(cfg),
        Command::ReproduceFig2 => reproduce_fig2(cfg),
    }
}

fn eval_omega(cfg: &RunConfig) -> Result<Vec<Output>> {
    let p = cfg.params;
    let quad = scan_settings(cfg).quadrature;
    let range = cfg.x_range.unwrap_or(XRange {
        start: 0.0,
        stop: scan_bound(&p),
        points: 201,
    });
    let mut csv = Csv::new(cfg);
    csv.row(&["x", "omega", "landscape_i", "g"]);
    for i in 0..range.points {
        let x = range.value(i);
        let g = match effective_field_g(&p, x) {
            Ok(g) => real(g),
            Err(Error::ZeroCoupling) => String::new(),
            Err(e) => return Err(e),
        };
        csv.row(&[
            real(x),
            real(omega_with(&p, x, &quad)?),
            real(landscape_i_with(&p, x, &quad)?),
            g,
        ]);
    }
    Ok(single(cfg, csv))
}

fn find_max(cfg: &RunConfig) -> Result<Vec<Output>> {
    let report = find_local_maxima_with(&cfg.params, &scan_settings(cfg))?;
    let mut csv = Csv::new(cfg);
    csv.meta(&format!("coexistence_gap={}", real(report.coexistence_gap)));
    csv.meta(&format!("tie={}", report.tie));
    csv.row(&["x", "omega", "is_global"]);
    for m in &report.maxima {
        csv.row(&[real(m.x), real(m.omega), m.is_global.to_string()]);
    }
    Ok(single(cfg, csv))
}

fn transition_line(name: &str, t: &TransitionRecord) -> String {
    format!(
        "transition {name}={} order={} jump={} coexistence_width={} bracket={}:{}",
        real(t.critical_value),
        t.order.as_str(),
        real(t.jump),
        real(t.coexistence_width),
        real(t.bracket.0),
        real(t.bracket.1)
    )
}

fn write_sweep(csv: &mut Csv, spec: &SweepSpec, settings: &PhaseSettings) -> Result<SweepResult> {
    let result = sweep_with(spec, settings)?;
    let name = spec.axis.parameter.name();
    for t in classify_transition_with(&result, settings)? {
        csv.meta(&transition_line(name, &t));
    }
    csv.row(&[name, "x_star", "theta", "omega_star", "tie", "n_maxima"]);
    for r in &result.records {
        csv.row(&[
            real(r.value),
            real(r.x_star),
            real(r.theta),
            real(r.omega_star),
            r.tie.to_string(),
            r.n_maxima.map(|n| n.to_string()).unwrap_or_default(),
        ]);
    }
    Ok(result)
}

fn phase_map(cfg: &RunConfig) -> Result<Vec<Output>> {
    let (a, b) = (cfg.sweeps[0], cfg.sweeps[1]);
    let map = phase_map_with(&a, &b, &cfg.params, &phase_settings(cfg))?;
    let mut csv = Csv::new(cfg);
    csv.row(&[
        a.parameter.name(),
        b.parameter.name(),
        "x_star",
        "omega_star",
        "n_maxima",
        "phase",
        "boundary",
    ]);
    for c in &map.cells {
        csv.row(&[
            real(c.a_value),
            real(c.b_value),
            real(c.x_star),
            real(c.omega_star),
            c.n_maxima.to_string(),
            c.phase.as_str().to_string(),
            c.boundary.map(|o| o.as_str()).unwrap_or("").to_string(),
        ]);
    }
    Ok(single(cfg, csv))
}

fn hysteresis(cfg: &RunConfig) -> Result<Vec<Output>> {
    let spec = SweepSpec {
        axis: cfg.sweeps[0],
        fixed: cfg.params,
    };
    let branches = hysteresis_branches_with(&spec, &phase_settings(cfg))?;
    let name = spec.axis.parameter.name();
    let mut csv = Csv::new(cfg);
    for (lo, hi) in branches.disagreement_windows(1e-6) {
        csv.meta(&format!("window {name}={}:{}", real(lo), real(hi)));
    }
    csv.row(&[name, "x_forward", "x_backward", "theta_forward", "theta_backward"]);
    for (f, b) in branches.forward.records.iter().zip(branches.backward_aligned()) {
        csv.row(&[
            real(f.value),
            real(f.x_star),
            real(b.x_star),
            real(f.theta),
            real(b.theta),
        ]);
    }
    Ok(single(cfg, csv))
}

fn oracle_settings(cfg: &RunConfig) -> OracleSettings {
    OracleSettings {
        scan: scan_settings(cfg),
        ..OracleSettings::default()
    }
}

fn oracle_chain(cfg: &RunConfig) -> Result<Vec<Output>> {
    let p = cfg.params;
    let x = cfg.x.unwrap_or_default();
    let spec = ChainSpec::new(cfg.sites.unwrap_or_default())?;
    let settings = oracle_settings(cfg);
    let exact = chain_log_z_exact_with(&p, x, &spec, &settings)?;
    let product = chain_log_z_product_formula(&p, x, &spec)?;
    let predicted = landscape_i_with(&p, x, &settings.scan.quadrature)? + LN_2;
    let mut csv = Csv::new(cfg);
    csv.row(&["sites", "x", "log_z_exact", "log_z_product", "log_z_predicted"]);
    csv.row(&[
        spec.sites.to_string(),
        real(x),
        real(exact),
        real(product),
        real(predicted),
    ]);
    Ok(single(cfg, csv))
}

fn oracle_full(cfg: &RunConfig) -> Result<Vec<Output>> {
    let spec = SpinBosonSpec::new(cfg.sites.unwrap_or_default(), cfg.cutoff.unwrap_or_default())?;
    let r = full_ed_with(&cfg.params, &spec, &oracle_settings(cfg))?;
    let mut csv = Csv::new(cfg);
    csv.row(&[
        "sites",
        "cutoff",
        "check_cutoff",
        "cutoff_relative_change",
        "x_star",
        "log_z_exact",
        "log_z_predicted",
        "photons_exact",
        "photons_predicted",
    ]);
    csv.row(&[
        r.sites.to_string(),
        r.cutoff.to_string(),
        r.check_cutoff.to_string(),
        real(r.cutoff_relative_change),
        real(r.x_star),
        real(r.log_z_per_site.exact),
        real(r.log_z_per_site.predicted),
        real(r.photons_per_site.exact),
        real(r.photons_per_site.predicted),
    ]);
    Ok(single(cfg, csv))
}

fn reproduce_fig1(cfg: &RunConfig) -> Result<Vec<Output>> {
    let axis = cfg.sweeps[0];
    let settings = scan_settings(cfg);
    let range = cfg.x_range.expect("reproduce-fig1 has a default x range");
    let mut csv = Csv::new(cfg);
    let name = axis.parameter.name();
    let curves: Vec<(f64, ModelParams)> = axis
        .values()
        .into_iter()
        .map(|v| (v, cfg.params.with(axis.parameter, v)))
        .collect();
    for (v, p) in &curves {
        let report = find_local_maxima_with(p, &settings)?;
        let xs: Vec<String> = report.maxima.iter().map(|m| real(m.x)).collect();
        csv.meta(&format!("maxima {name}={} x={}", real(*v), xs.join(":")));
    }
    csv.row(&[name, "x", "omega"]);
    for (v, p) in &curves {
        for i in 0..range.points {
            let x = range.value(i);
            csv.row(&[real(*v), real(x), real(omega_with(p, x, &settings.quadrature)?)]);
        }
    }
    Ok(single(cfg, csv))
}

fn reproduce_fig2(cfg: &RunConfig) -> Result<Vec<Output>> {
    let dir = PathBuf::from(cfg.out.as_deref().unwrap_or("."));
    let settings = phase_settings(cfg);
    let mut outputs = Vec::new();
    for &j in &cfg.couplings {
        let spec = SweepSpec {
            axis: cfg.sweeps[0],
            fixed: cfg.params.with(crate::model::Parameter::SpinCoupling, j),
        };
        let mut csv = Csv::new(cfg);
        csv.meta(&format!("curve spin_coupling={}", real(j)));
        write_sweep(&mut csv, &spec, &settings)?;
        outputs.push(Output {
            path: Some(dir.join(format!("fig2_spin_coupling_{j}.csv"))),
            text: csv.into_string(),
        });
    }
    Ok(outputs)
}
