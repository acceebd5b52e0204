//! `key = value` run configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Every key is
//! optional; unknown keys are rejected.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::rootfind::{Precision, EPS_REAL};

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub j: Option<usize>,
    pub window: (f64, f64),
    /// Corrector tolerance on `|Q|`, relative to its term scale.
    pub locus_tol: f64,
    /// Relative `|Im z|` threshold for a zero to count as real.
    pub eps_real: f64,
    /// Stabilization target for `beta` along the sector ray.
    pub beta_tol: f64,
    pub precision: Precision,
    pub strict: bool,
    pub raw_lambda: bool,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    /// Seed for randomly placed Schwarzian sample points.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            j: None,
            window: (-10.0, 400.0),
            locus_tol: 1e-10,
            eps_real: EPS_REAL,
            beta_tol: 1e-8,
            precision: Precision::default(),
            strict: false,
            raw_lambda: false,
            out: None,
            report: None,
            seed: 0,
        }
    }
}

fn bad(key: &str, value: &str) -> Error {
    Error::InvalidInput(format!("bad value {value:?} for {key}"))
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| bad(key, value))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("line {}: expected key = value", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "J" => self.j = Some(num(key, value)?),
            "b_min" => self.window.0 = num(key, value)?,
            "b_max" => self.window.1 = num(key, value)?,
            "locus_tol" => self.locus_tol = num(key, value)?,
            "eps_real" => self.eps_real = num(key, value)?,
            "beta_tol" => self.beta_tol = num(key, value)?,
            "precision" => self.precision = Precision { bits: num(key, value)? },
            "strict" => self.strict = num(key, value)?,
            "raw_lambda" => self.raw_lambda = num(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "report" => self.report = Some(PathBuf::from(value)),
            "seed" => self.seed = num(key, value)?,
            _ => return Err(Error::InvalidInput(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.window;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidInput(format!("empty b window [{lo}, {hi}]")));
        }
        for (name, v) in [
            ("locus_tol", self.locus_tol),
            ("eps_real", self.eps_real),
            ("beta_tol", self.beta_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if self.precision.bits < 53 {
            return Err(Error::InvalidInput(format!(
                "precision must be at least 53 bits, got {}",
                self.precision.bits
            )));
        }
        if self.j == Some(0) {
            return Err(Error::InvalidJ(0));
        }
        Ok(())
    }

    /// Serializes every set key; `parse(&cfg.to_text()) == cfg`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(j) = self.j {
            let _ = writeln!(s, "J = {j}");
        }
        // Display for f64 is the shortest string that parses back exactly.
        let _ = writeln!(s, "b_min = {}", self.window.0);
        let _ = writeln!(s, "b_max = {}", self.window.1);
        let _ = writeln!(s, "locus_tol = {:e}", self.locus_tol);
        let _ = writeln!(s, "eps_real = {:e}", self.eps_real);
        let _ = writeln!(s, "beta_tol = {:e}", self.beta_tol);
        let _ = writeln!(s, "precision = {}", self.precision.bits);
        let _ = writeln!(s, "strict = {}", self.strict);
        let _ = writeln!(s, "raw_lambda = {}", self.raw_lambda);
        if let Some(p) = &self.out {
            let _ = writeln!(s, "out = {}", p.display());
        }
        if let Some(p) = &self.report {
            let _ = writeln!(s, "report = {}", p.display());
        }
        let _ = writeln!(s, "seed = {}", self.seed);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_comments_and_keys() {
        let cfg = RunConfig::parse("# run\nJ = 3\n\nb_min=-5\nb_max = 20\nstrict = true\n").unwrap();
        assert_eq!(cfg.j, Some(3));
        assert_eq!(cfg.window, (-5.0, 20.0));
        assert!(cfg.strict);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::parse("J = three").is_err());
        assert!(RunConfig::parse("colour = red").is_err());
        assert!(RunConfig::parse("b_min = 5\nb_max = 1").is_err());
        assert!(RunConfig::parse("locus_tol = -1").is_err());
        assert!(RunConfig::parse("just words").is_err());
    }

    proptest! {
        #[test]
        fn round_trip(
            j in proptest::option::of(1usize..50),
            lo in -1e3f64..0.0,
            width in 1e-3f64..1e3,
            tol in 1e-14f64..1e-2,
            bits in 53u32..400,
            strict: bool,
            seed: u64,
        ) {
            let cfg = RunConfig {
                j,
                window: (lo, lo + width),
                locus_tol: tol,
                eps_real: tol * 3.0,
                beta_tol: tol / 7.0,
                precision: Precision { bits },
                strict,
                raw_lambda: !strict,
                out: Some(PathBuf::from("locus.csv")),
                report: None,
                seed,
            };
            prop_assert_eq!(RunConfig::parse(&cfg.to_text()).unwrap(), cfg);
        }
    }
}
