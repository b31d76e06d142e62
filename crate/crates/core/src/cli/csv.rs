//! CSV with `#` metadata lines: UTF-8, LF, comma separated, reals to 17
//! significant digits.

use super::config::RunConfig;
use crate::error::{Error, Result};

const CONFIG_BEGIN: &str = "# config begin";
const CONFIG_END: &str = "# config end";

pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    /// Start a document with the version line and the echoed config.
    pub fn new(cfg: &RunConfig) -> Csv {
        let mut csv = Csv::default();
        csv.meta(&format!("dicke-phase {}", env!("CARGO_PKG_VERSION")));
        csv.text.push_str(CONFIG_BEGIN);
        csv.text.push('\n');
        for line in cfg.to_toml().lines() {
            csv.meta(line);
        }
        csv.text.push_str(CONFIG_END);
        csv.text.push('\n');
        csv
    }

    pub fn meta(&mut self, line: &str) {
        self.text.push_str("# ");
        self.text.push_str(line);
        self.text.push('\n');
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        for (i, f) in fields.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            self.text.push_str(f.as_ref());
        }
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Recover the config echoed into a CSV produced by [`Csv::new`].
pub fn echoed_config(csv: &str) -> Result<RunConfig> {
    let mut lines = csv.lines().skip_while(|l| *l != CONFIG_BEGIN);
    if lines.next().is_none() {
        return Err(Error::invalid("config", "no echoed config block"));
    }
    let mut toml = String::new();
    for line in lines.take_while(|l| *l != CONFIG_END) {
        let body = line.strip_prefix("# ").unwrap_or_else(|| line.trim_start_matches('#'));
        toml.push_str(body);
        toml.push('\n');
    }
    RunConfig::from_toml(&toml)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_keep_seventeen_digits() {
        assert_eq!(real(0.1), "1.0000000000000001e-1");
        assert_eq!(real(-2.5), "-2.5000000000000000e0");
        let v = std::f64::consts::PI;
        assert_eq!(real(v).parse::<f64>().unwrap(), v);
    }
}
