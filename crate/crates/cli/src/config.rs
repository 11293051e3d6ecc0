//! Experiment configuration: `key = value` files merged with flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use fourier_dunkl::weights::PowerWeight;
use fourier_dunkl::AlphaParam;

use crate::CliError;

/// `|x|^b (1-x)^A (1+x)^B` times optional extra factors `|x-t|^γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    pub b: f64,
    pub a: f64,
    pub bb: f64,
    pub extra: Vec<(f64, f64)>,
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec { b: 0.0, a: 0.0, bb: 0.0, extra: Vec::new() }
    }
}

impl WeightSpec {
    /// Parses `"b,A,B"` optionally followed by `",t:gamma"` entries.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("weight must look like \"b,A,B[,t:gamma...]\", got {s:?}"));
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() < 3 {
            return Err(bad());
        }
        let num = |t: &str| t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
        let mut extra = Vec::new();
        for item in &parts[3..] {
            let (t, g) = item.split_once(':').ok_or_else(bad)?;
            extra.push((num(t)?, num(g)?));
        }
        Ok(WeightSpec { b: num(parts[0])?, a: num(parts[1])?, bb: num(parts[2])?, extra })
    }

    pub fn weight(&self) -> PowerWeight {
        PowerWeight::jacobi_type(self.b, self.a, self.bb).mul(&PowerWeight::new(self.extra.iter().copied()))
    }

    pub fn is_jacobi_type(&self) -> bool {
        self.extra.is_empty()
    }
}

/// Validated settings shared by all commands.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub alpha: AlphaParam,
    pub p: f64,
    pub n_max: usize,
    pub weight: WeightSpec,
    pub order: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Explicit list of degrees; defaults depend on the command.
    pub ns: Option<Vec<usize>>,
    /// Sample points for kernel sweeps.
    pub grid: Option<Vec<f64>>,
    pub method: String,
    pub function: String,
    pub delta: f64,
    pub budget: usize,
    pub numeric: bool,
}

/// Flags accepted by every command. Any flag overrides the same key in
/// `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// `key = value` file; `#` starts a comment
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub nmax: Option<String>,
    /// Quadrature nodes per half-interval
    #[arg(long)]
    pub order: Option<String>,
    /// "b,A,B" for |x|^b (1-x)^A (1+x)^B, plus optional ",t:gamma" factors
    #[arg(long, allow_hyphen_values = true)]
    pub weight: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    /// Comma-separated degrees
    #[arg(long)]
    pub ns: Option<String>,
    /// Comma-separated sample points
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// matrix_pnorm or random_probe
    #[arg(long)]
    pub method: Option<String>,
    /// constant, sign, step, odd, bump, power:BETA or e:J
    #[arg(long)]
    pub function: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub budget: Option<String>,
    /// Also run the numeric A_p checker
    #[arg(long)]
    pub numeric: bool,
}

const KEYS: &[&str] = &[
    "alpha", "p", "nmax", "order", "weight", "seed", "out", "ns", "grid", "method", "function", "delta", "budget",
    "numeric",
];

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
        let k = k.trim().to_ascii_lowercase().replace(['-', '_'], "");
        if !KEYS.contains(&k.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown key {k:?}", i + 1)));
        }
        map.insert(k, v.trim().trim_matches('"').to_string());
    }
    Ok(map)
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid value for {key}: {v:?}")))
}

fn parse_list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>, CliError> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse(key, s)).collect()
}

impl ConfigArgs {
    fn merged(&self) -> Result<BTreeMap<String, String>, CliError> {
        let mut map = match &self.config {
            Some(path) => read_config(path)?,
            None => BTreeMap::new(),
        };
        let flags = [
            ("alpha", &self.alpha),
            ("p", &self.p),
            ("nmax", &self.nmax),
            ("order", &self.order),
            ("weight", &self.weight),
            ("seed", &self.seed),
            ("out", &self.out),
            ("ns", &self.ns),
            ("grid", &self.grid),
            ("method", &self.method),
            ("function", &self.function),
            ("delta", &self.delta),
            ("budget", &self.budget),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                map.insert(k.to_string(), v.clone());
            }
        }
        if self.numeric {
            map.insert("numeric".into(), "true".into());
        }
        Ok(map)
    }

    /// Merges file and flags and validates the result.
    pub fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let m = self.merged()?;
        let get = |k: &str| m.get(k).map(String::as_str);

        let alpha_v: f64 = get("alpha").map(|v| parse("alpha", v)).transpose()?.unwrap_or(0.0);
        let alpha = AlphaParam::new(alpha_v).map_err(|e| CliError::Usage(e.to_string()))?;
        let p: f64 = get("p").map(|v| parse("p", v)).transpose()?.unwrap_or(2.0);
        if !(p.is_finite() && p > 1.0) {
            return Err(CliError::Usage(format!("p must satisfy 1 < p < inf, got {p}")));
        }
        let n_max: usize = get("nmax").map(|v| parse("nmax", v)).transpose()?.unwrap_or(16);
        if n_max < 1 {
            return Err(CliError::Usage("nmax must be at least 1".into()));
        }
        let order: usize = get("order")
            .map(|v| parse("order", v))
            .transpose()?
            .unwrap_or(fourier_dunkl::measure::DEFAULT_ORDER);
        if order < 2 {
            return Err(CliError::Usage("order must be at least 2".into()));
        }
        let weight = get("weight").map(WeightSpec::parse).transpose()?.unwrap_or_default();
        let seed: u64 = get("seed").map(|v| parse("seed", v)).transpose()?.unwrap_or(0);
        let ns = get("ns").map(|v| parse_list::<usize>("ns", v)).transpose()?;
        if let Some(ns) = &ns {
            if ns.is_empty() || ns.iter().any(|&n| n < 1) {
                return Err(CliError::Usage("ns must list degrees >= 1".into()));
            }
        }
        let grid = get("grid").map(|v| parse_list::<f64>("grid", v)).transpose()?;
        if let Some(g) = &grid {
            if g.is_empty() || g.iter().any(|x| !(-1.0 < *x && *x < 1.0)) {
                return Err(CliError::Usage("grid points must lie in (-1, 1)".into()));
            }
        }
        let method = get("method").unwrap_or("matrix_pnorm").to_string();
        if method != "matrix_pnorm" && method != "random_probe" {
            return Err(CliError::Usage(format!("unknown method {method:?}")));
        }
        let delta: f64 = get("delta").map(|v| parse("delta", v)).transpose()?.unwrap_or(1.0);
        if !(delta.is_finite() && delta >= 1.0) {
            return Err(CliError::Usage(format!("delta must be >= 1, got {delta}")));
        }
        let budget: usize = get("budget").map(|v| parse("budget", v)).transpose()?.unwrap_or(20);
        let numeric = get("numeric").map(|v| parse::<bool>("numeric", v)).transpose()?.unwrap_or(false);
        Ok(ExperimentConfig {
            alpha,
            p,
            n_max,
            weight,
            order,
            seed,
            out: get("out").map(PathBuf::from),
            ns,
            grid,
            method,
            function: get("function").unwrap_or("sign").to_string(),
            delta,
            budget,
            numeric,
        })
    }
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_spec_forms() {
        let w = WeightSpec::parse("0.4, 0, -0.2").unwrap();
        assert_eq!((w.b, w.a, w.bb), (0.4, 0.0, -0.2));
        let w = WeightSpec::parse("0,0,0,0.5:-0.3").unwrap();
        assert_eq!(w.extra, vec![(0.5, -0.3)]);
        assert!(WeightSpec::parse("1,2").is_err());
        assert!(WeightSpec::parse("1,2,x").is_err());
    }

    #[test]
    fn config_text_and_overrides() {
        let m = parse_config_text("# run\nalpha = -0.75\np=3 # inline\n\nweight = \"0.4,0,0\"\n").unwrap();
        assert_eq!(m["alpha"], "-0.75");
        assert_eq!(m["p"], "3");
        assert_eq!(m["weight"], "0.4,0,0");
        assert!(parse_config_text("bogus = 1").is_err());
        assert!(parse_config_text("alpha 1").is_err());

        let args = ConfigArgs { p: Some("4".into()), ..Default::default() };
        let c = args.resolve().unwrap();
        assert_eq!(c.p, 4.0);
        assert_eq!(c.order, 128);
        let bad = ConfigArgs { nmax: Some("0".into()), ..Default::default() };
        assert!(matches!(bad.resolve(), Err(CliError::Usage(_))));
    }
}
