//! Run configuration: flags layered over an optional TOML file layered over
//! per-command defaults.

use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, Parameter};
use crate::phase::{linspace_value, Axis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    EvalOmega,
    FindMax,
    Sweep,
    PhaseMap,
    Hysteresis,
    OracleChain,
    OracleFull,
    ReproduceFig1,
    ReproduceFig2,
    ReproduceFig3,
    ReproduceFig4,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::EvalOmega => "eval-omega",
            Command::FindMax => "find-max",
            Command::Sweep => "sweep",
            Command::PhaseMap => "phase-map",
            Command::Hysteresis => "hysteresis",
            Command::OracleChain => "oracle-chain",
            Command::OracleFull => "oracle-full",
            Command::ReproduceFig1 => "reproduce-fig1",
            Command::ReproduceFig2 => "reproduce-fig2",
            Command::ReproduceFig3 => "reproduce-fig3",
            Command::ReproduceFig4 => "reproduce-fig4",
        }
    }

    fn sweep_count(self) -> usize {
        match self {
            Command::Sweep
            | Command::Hysteresis
            | Command::ReproduceFig1
            | Command::ReproduceFig2
            | Command::ReproduceFig4 => 1,
            Command::PhaseMap | Command::ReproduceFig3 => 2,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XRange {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl XRange {
    pub fn value(&self, i: usize) -> f64 {
        linspace_value(self.start, self.stop, i, self.points)
    }

    fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::invalid("x_range", "start and stop must be finite"));
        }
        if self.points == 0 {
            return Err(Error::invalid("x_range", "points must be >= 1"));
        }
        Ok(())
    }
}

impl FromStr for XRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, points] = parts[..] else {
            return Err(Error::invalid(
                "x_range",
                format!("expected start:stop:points, got '{s}'"),
            ));
        };
        Ok(XRange {
            start: parse_real("x_range", start)?,
            stop: parse_real("x_range", stop)?,
            points: points
                .parse()
                .map_err(|_| Error::invalid("x_range", format!("points '{points}' is not an integer")))?,
        })
    }
}

/// Parse `param:start:stop:steps`.
pub fn parse_axis(s: &str) -> Result<Axis> {
    let parts: Vec<&str> = s.split(':').collect();
    let [param, start, stop, steps] = parts[..] else {
        return Err(Error::invalid(
            "sweep",
            format!("expected param:start:stop:steps, got '{s}'"),
        ));
    };
    Ok(Axis::new(
        param.parse::<Parameter>()?,
        parse_real("sweep", start)?,
        parse_real("sweep", stop)?,
        steps
            .parse()
            .map_err(|_| Error::invalid("sweep", format!("steps '{steps}' is not an integer")))?,
    ))
}

fn parse_real(field: &'static str, s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::invalid(field, format!("'{s}' is not a number")))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    /// Starting quadrature intervals on [0, π].
    pub nodes: usize,
    /// Landscape scan grid points.
    pub grid: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            nodes: 4096,
            grid: 2001,
        }
    }
}

/// Fully resolved settings of one run. Echoed into every CSV it produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sites: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    /// Spin couplings of the `reproduce-fig2` curves. A `--spin-coupling` flag replaces
    /// the list with its single value.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub couplings: Vec<f64>,
    pub params: ModelParams,
    pub numerics: Numerics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_range: Option<XRange>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweeps: Vec<Axis>,
}

/// Anything a layer may set. Flags and the config file both produce one.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    pub command: Option<Command>,
    pub x: Option<f64>,
    pub sites: Option<usize>,
    pub cutoff: Option<usize>,
    pub out: Option<String>,
    pub couplings: Option<Vec<f64>>,
    #[serde(default)]
    pub params: PartialParams,
    #[serde(default)]
    pub numerics: PartialNumerics,
    pub x_range: Option<XRange>,
    pub sweeps: Option<Vec<Axis>>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialParams {
    pub lambda: Option<f64>,
    pub spin_coupling: Option<f64>,
    pub epsilon: Option<f64>,
    pub beta: Option<f64>,
}

impl PartialParams {
    fn get(&self, p: Parameter) -> Option<f64> {
        match p {
            Parameter::Lambda => self.lambda,
            Parameter::SpinCoupling => self.spin_coupling,
            Parameter::Epsilon => self.epsilon,
            Parameter::Beta => self.beta,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialNumerics {
    pub nodes: Option<usize>,
    pub grid: Option<usize>,
}

impl Layer {
    pub fn from_toml(text: &str) -> Result<Layer> {
        toml::from_str(text).map_err(|e| Error::invalid("config", e.message().replace('\n', " ")))
    }

    pub fn read(path: &Path) -> Result<Layer> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid("config", format!("cannot read {}: {e}", path.display())))?;
        Layer::from_toml(&text)
    }

    /// `self` wins wherever both layers set a value.
    pub fn over(self, below: Layer) -> Layer {
        Layer {
            command: self.command.or(below.command),
            x: self.x.or(below.x),
            sites: self.sites.or(below.sites),
            cutoff: self.cutoff.or(below.cutoff),
            out: self.out.or(below.out),
            couplings: self.couplings.or(below.couplings),
            params: PartialParams {
                lambda: self.params.lambda.or(below.params.lambda),
                spin_coupling: self.params.spin_coupling.or(below.params.spin_coupling),
                epsilon: self.params.epsilon.or(below.params.epsilon),
                beta: self.params.beta.or(below.params.beta),
            },
            numerics: PartialNumerics {
                nodes: self.numerics.nodes.or(below.numerics.nodes),
                grid: self.numerics.grid.or(below.numerics.grid),
            },
            x_range: self.x_range.or(below.x_range),
            sweeps: self.sweeps.or(below.sweeps),
        }
    }
}

/// Built-in settings of each command. The `reproduce-fig*` commands come with
/// complete parameter sets.
fn defaults(command: Command) -> Layer {
    let params = |lambda, spin_coupling, epsilon, beta| PartialParams {
        lambda: Some(lambda),
        spin_coupling: Some(spin_coupling),
        epsilon: Some(epsilon),
        beta: Some(beta),
    };
    let axis = |p, start, stop, steps| Axis::new(p, start, stop, steps);
    match command {
        Command::OracleFull => Layer {
            cutoff: Some(32),
            ..Layer::default()
        },
        Command::ReproduceFig1 => Layer {
            params: params(0.9, 1.0, 1.1, 100.0),
            sweeps: Some(vec![axis(Parameter::Lambda, 0.85, 0.95, 5)]),
            x_range: Some(XRange {
                start: 0.0,
                stop: 1.2,
                points: 241,
            }),
            ..Layer::default()
        },
        Command::ReproduceFig2 => Layer {
            params: params(1.0, 1.0, 1.1, 100.0),
            couplings: Some(vec![1.0, 0.8]),
            sweeps: Some(vec![axis(Parameter::Lambda, 0.0, 2.0, 201)]),
            out: Some(".".into()),
            ..Layer::default()
        },
        Command::ReproduceFig3 => Layer {
            params: params(1.3, 1.0, 1.1, 100.0),
            sweeps: Some(vec![
                axis(Parameter::SpinCoupling, 0.1, 2.0, 100),
                axis(Parameter::Epsilon, 0.1, 3.0, 100),
            ]),
            ..Layer::default()
        },
        Command::ReproduceFig4 => Layer {
            params: params(0.9, 1.0, 1.1, 100.0),
            sweeps: Some(vec![axis(Parameter::Beta, 100.0, 0.25, 400)]),
            ..Layer::default()
        },
        _ => Layer::default(),
    }
}

impl RunConfig {
    /// Resolve flags over the config file over the command defaults, and validate.
    pub fn resolve(command: Command, flags: Layer, file: Option<Layer>) -> Result<RunConfig> {
        let file = file.unwrap_or_default();
        if let Some(c) = file.command {
            if c != command {
                return Err(Error::invalid(
                    "command",
                    format!("config file is for '{}', not '{}'", c.name(), command.name()),
                ));
            }
        }
        let explicit_coupling = flags.params.spin_coupling;
        let merged = flags.over(file).over(defaults(command));
        let swept: Vec<Parameter> = merged.sweeps.iter().flatten().map(|a| a.parameter).collect();
        let mut params = ModelParams {
            lambda: 0.0,
            spin_coupling: 0.0,
            epsilon: 0.0,
            beta: 1.0,
        };
        for p in Parameter::ALL {
            match merged.params.get(p) {
                Some(v) => params = params.with(p, v),
                None if swept.contains(&p) => {}
                None => return Err(Error::invalid(p.name(), "not set (pass a flag or a config file)")),
            }
        }
        let defaults = Numerics::default();
        let mut cfg = RunConfig {
            command,
            x: merged.x,
            sites: merged.sites,
            cutoff: merged.cutoff,
            out: merged.out,
            couplings: merged.couplings.unwrap_or_default(),
            params,
            numerics: Numerics {
                nodes: merged.numerics.nodes.unwrap_or(defaults.nodes),
                grid: merged.numerics.grid.unwrap_or(defaults.grid),
            },
            x_range: merged.x_range,
            sweeps: merged.sweeps.unwrap_or_default(),
        };
        if command == Command::ReproduceFig2 {
            if let Some(j) = explicit_coupling {
                cfg.couplings = vec![j];
            }
            if let Some(&j) = cfg.couplings.first() {
                cfg.params.spin_coupling = j;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let swept: Vec<Parameter> = self.sweeps.iter().map(|a| a.parameter).collect();
        let mut probe = self.params;
        for a in &self.sweeps {
            a.validate()?;
            probe = probe.with(a.parameter, a.start);
            probe.validate()?;
            probe = probe.with(a.parameter, a.stop);
        }
        probe.validate()?;

        let want = self.command.sweep_count();
        if self.sweeps.len() != want {
            return Err(Error::invalid(
                "sweep",
                format!(
                    "{} takes {want} --sweep axes, got {}",
                    self.command.name(),
                    self.sweeps.len()
                ),
            ));
        }
        if want == 2 && swept[0] == swept[1] {
            return Err(Error::invalid("sweep", "phase map axes must be different parameters"));
        }
        if self.numerics.nodes < 2 || !self.numerics.nodes.is_multiple_of(2) {
            return Err(Error::invalid("nodes", "must be an even integer >= 2"));
        }
        if self.numerics.grid < 3 {
            return Err(Error::invalid("grid", "must be >= 3"));
        }
        if let Some(r) = &self.x_range {
            r.validate()?;
        }
        if let Some(x) = self.x {
            if !x.is_finite() {
                return Err(Error::invalid("x", "must be finite"));
            }
        }
        match self.command {
            Command::OracleChain => {
                self.sites.ok_or_else(|| Error::invalid("sites", "not set"))?;
                self.x.ok_or_else(|| Error::invalid("x", "not set"))?;
            }
            Command::OracleFull => {
                self.sites.ok_or_else(|| Error::invalid("sites", "not set"))?;
            }
            Command::ReproduceFig2 => {
                if self.couplings.is_empty() {
                    return Err(Error::invalid("couplings", "needs at least one value"));
                }
                for &j in &self.couplings {
                    self.params.with(Parameter::SpinCoupling, j).validate()?;
                }
                if self.out.is_none() {
                    return Err(Error::invalid("out", "reproduce-fig2 writes a directory"));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// The config as TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }

    pub fn from_toml(text: &str) -> Result<RunConfig> {
        toml::from_str(text).map_err(|e| Error::invalid("config", e.message().replace('\n', " ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_parsing() {
        let a = parse_axis("lambda:0:2:201").unwrap();
        assert_eq!(a, Axis::new(Parameter::Lambda, 0.0, 2.0, 201));
        assert!(matches!(
            parse_axis("lambda:0:2"),
            Err(Error::Invalid { field: "sweep", .. })
        ));
        assert!(matches!(
            parse_axis("mu:0:2:3"),
            Err(Error::Invalid { field: "sweep", .. })
        ));
        assert!(matches!(
            parse_axis("beta:0:x:3"),
            Err(Error::Invalid { field: "sweep", .. })
        ));
    }

    #[test]
    fn missing_parameter_is_named() {
        let flags = Layer {
            params: PartialParams {
                lambda: Some(1.0),
                epsilon: Some(1.0),
                beta: Some(1.0),
                ..PartialParams::default()
            },
            ..Layer::default()
        };
        let err = RunConfig::resolve(Command::FindMax, flags, None).unwrap_err();
        assert!(matches!(
            err,
            Error::Invalid {
                field: "spin_coupling",
                ..
            }
        ));
    }

    #[test]
    fn flags_override_file() {
        let file =
            Layer::from_toml("[params]\nlambda = 0.5\nspin_coupling = 1.0\nepsilon = 1.1\nbeta = 10.0\n").unwrap();
        let flags = Layer {
            params: PartialParams {
                lambda: Some(0.7),
                ..PartialParams::default()
            },
            ..Layer::default()
        };
        let cfg = RunConfig::resolve(Command::FindMax, flags, Some(file)).unwrap();
        assert_eq!(cfg.params.lambda, 0.7);
        assert_eq!(cfg.params.beta, 10.0);
    }

    #[test]
    fn unknown_file_keys_are_rejected() {
        assert!(matches!(
            Layer::from_toml("lamda = 1.0"),
            Err(Error::Invalid { field: "config", .. })
        ));
    }

    #[test]
    fn toml_round_trip() {
        for command in [
            Command::ReproduceFig1,
            Command::ReproduceFig2,
            Command::ReproduceFig3,
            Command::ReproduceFig4,
        ] {
            let cfg = RunConfig::resolve(command, Layer::default(), None).unwrap();
            assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
        }
    }

    #[test]
    fn fig2_takes_explicit_coupling() {
        let flags = Layer {
            params: PartialParams {
                spin_coupling: Some(0.5),
                ..PartialParams::default()
            },
            ..Layer::default()
        };
        let cfg = RunConfig::resolve(Command::ReproduceFig2, flags, None).unwrap();
        assert_eq!(cfg.couplings, vec![0.5]);
        let cfg = RunConfig::resolve(Command::ReproduceFig2, Layer::default(), None).unwrap();
        assert_eq!(cfg.couplings, vec![1.0, 0.8]);
    }

    #[test]
    fn sweep_count_is_checked() {
        let flags = Layer {
            params: PartialParams {
                lambda: Some(1.0),
                spin_coupling: Some(1.0),
                epsilon: Some(1.0),
                beta: Some(1.0),
            },
            ..Layer::default()
        };
        let err = RunConfig::resolve(Command::Sweep, flags, None).unwrap_err();
        assert!(matches!(err, Error::Invalid { field: "sweep", .. }));
    }
}
