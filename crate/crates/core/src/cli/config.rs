use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ComplexPoint, LogModel};

/// Keys accepted in a config file; they match the long flag names.
pub const KEYS: &[&str] = &[
    "model",
    "lambda",
    "Rf",
    "address",
    "t",
    "M",
    "K",
    "samples",
    "seed",
    "suite",
    "symbols",
    "max-period",
    "viewport",
    "size",
    "R",
    "depth",
    "out",
    "allow-non-disjoint",
    "plane",
    "tol",
];

/// Reads `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("config line {}: expected key = value", i + 1)))?;
        let k = k.trim().trim_start_matches("--");
        if !KEYS.contains(&k) {
            return Err(Error::InvalidArgument(format!("config line {}: unknown key {k:?}", i + 1)));
        }
        out.insert(k.to_string(), v.trim().trim_matches('"').to_string());
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Trace,
    Verify,
    Brush,
    Render,
}

/// Every effective setting of a run, after defaults, config file and flags.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub model: String,
    pub lambda: [f64; 2],
    #[serde(rename = "Rf")]
    pub rf: f64,
    pub allow_non_disjoint: bool,
    pub address: String,
    pub t: [f64; 3],
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub samples: usize,
    pub seed: u64,
    pub suite: Option<String>,
    pub symbols: Vec<String>,
    pub max_period: usize,
    pub viewport: [f64; 4],
    pub size: [usize; 2],
    #[serde(rename = "R")]
    pub r: f64,
    pub depth: usize,
    pub tol: f64,
    pub plane: String,
    /// Not echoed, so the same run written to two paths gives equal bytes.
    #[serde(skip)]
    pub out: Option<String>,
}

pub const SUITES: &[&str] = &["headstart", "expansion", "speedorder", "accumulation", "brush-axioms"];

fn bad(key: &str, value: &str, why: &str) -> Error {
    Error::InvalidArgument(format!("--{key} {value:?}: {why}"))
}

fn num(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v.trim().parse().map_err(|_| bad(key, v, "not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad(key, v, "not finite"))
    }
}

fn count(key: &str, v: &str) -> Result<usize> {
    v.trim().parse().map_err(|_| bad(key, v, "not a nonnegative integer"))
}

fn list(key: &str, v: &str, n: usize) -> Result<Vec<f64>> {
    let parts: Vec<f64> = v.split(',').map(|p| num(key, p)).collect::<Result<_>>()?;
    if parts.len() != n {
        return Err(bad(key, v, &format!("expected {n} comma-separated numbers")));
    }
    Ok(parts)
}

fn flag(key: &str, v: &str) -> Result<bool> {
    match v.trim() {
        "" | "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(bad(key, v, "expected true or false")),
    }
}

/// `a:b:step`, inclusive of `b` up to rounding.
pub fn parse_grid(v: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = v.split(':').collect();
    if parts.len() != 3 {
        return Err(bad("t", v, "expected a:b:step"));
    }
    let (a, b, step) = (num("t", parts[0])?, num("t", parts[1])?, num("t", parts[2])?);
    if !(step > 0.0) || b < a {
        return Err(bad("t", v, "need a <= b and step > 0"));
    }
    if (b - a) / step > 1e7 {
        return Err(bad("t", v, "too many grid points"));
    }
    Ok([a, b, step])
}

pub fn grid_points(g: [f64; 3]) -> Vec<f64> {
    let [a, b, step] = g;
    let n = ((b - a) / step + 1e-9).floor() as usize + 1;
    (0..n).map(|i| a + i as f64 * step).collect()
}

fn defaults(cmd: Command) -> BTreeMap<&'static str, &'static str> {
    let mut d = BTreeMap::from([
        ("model", "exp"),
        ("lambda", "0.25"),
        ("Rf", "2"),
        ("address", "0"),
        ("t", "1:10:0.5"),
        ("M", "2"),
        ("K", "1"),
        ("samples", "1000"),
        ("seed", "0"),
        ("symbols", "-1,0,1"),
        ("max-period", "2"),
        ("viewport", "-2,6,-3,3"),
        ("size", "400x300"),
        ("R", "4"),
        ("depth", "8"),
        ("tol", "0.01"),
        ("plane", "f"),
        ("allow-non-disjoint", "false"),
    ]);
    match cmd {
        Command::Brush => {
            d.insert("t", "0.25:10:0.25");
            d.insert("depth", "4");
        }
        Command::Render => {
            d.insert("depth", "40");
        }
        Command::Trace | Command::Verify => {}
    }
    d
}

impl RunConfig {
    /// Resolves settings from `values` (config file overlaid with flags)
    /// on top of the command's defaults.
    pub fn resolve(cmd: Command, values: &BTreeMap<String, String>) -> Result<RunConfig> {
        let d = defaults(cmd);
        let get = |k: &str| -> String {
            values.get(k).cloned().unwrap_or_else(|| d.get(k).copied().unwrap_or("").to_string())
        };
        let model = get("model");
        if model != "exp" && model != "sine" {
            return Err(bad("model", &model, "expected exp or sine"));
        }
        let lambda_text = get("lambda");
        let lambda = match lambda_text.split(',').count() {
            1 => [num("lambda", &lambda_text)?, 0.0],
            _ => {
                let v = list("lambda", &lambda_text, 2)?;
                [v[0], v[1]]
            }
        };
        let vp = list("viewport", &get("viewport"), 4)?;
        let size_text = get("size");
        let (w, h) = size_text.split_once(['x', 'X']).ok_or_else(|| bad("size", &size_text, "expected WxH"))?;
        let size = [count("size", w)?, count("size", h)?];
        if size[0] == 0 || size[1] == 0 {
            return Err(bad("size", &size_text, "width and height must be positive"));
        }
        let plane = get("plane");
        if plane != "f" && plane != "log" {
            return Err(bad("plane", &plane, "expected f or log"));
        }
        let suite = values.get("suite").cloned();
        if let Some(s) = &suite {
            if !SUITES.contains(&s.as_str()) {
                return Err(bad("suite", s, &format!("expected one of {}", SUITES.join(", "))));
            }
        }
        let symbols_text = get("symbols");
        let symbols: Vec<String> =
            symbols_text.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        let seed_text = get("seed");
        Ok(RunConfig {
            command: match cmd {
                Command::Trace => "trace",
                Command::Verify => "verify",
                Command::Brush => "brush",
                Command::Render => "render",
            },
            model,
            lambda,
            rf: num("Rf", &get("Rf"))?,
            allow_non_disjoint: flag("allow-non-disjoint", &get("allow-non-disjoint"))?,
            address: get("address"),
            t: parse_grid(&get("t"))?,
            m: num("M", &get("M"))?,
            k: num("K", &get("K"))?,
            samples: count("samples", &get("samples"))?,
            seed: seed_text.trim().parse().map_err(|_| bad("seed", &seed_text, "not a nonnegative integer"))?,
            suite,
            symbols,
            max_period: count("max-period", &get("max-period"))?,
            viewport: [vp[0], vp[1], vp[2], vp[3]],
            size,
            r: num("R", &get("R"))?,
            depth: count("depth", &get("depth"))?,
            tol: num("tol", &get("tol"))?,
            plane,
            out: values.get("out").cloned().filter(|o| o != "-"),
        })
    }

    /// The model without the disjoint-type gate.
    pub fn model_unchecked(&self) -> Result<LogModel> {
        match self.model.as_str() {
            "exp" => LogModel::exp_unchecked(ComplexPoint::new(self.lambda[0], self.lambda[1]), self.rf),
            _ => {
                if self.lambda[1] != 0.0 {
                    return Err(Error::InfeasibleModel("the sine family needs a real lambda".into()));
                }
                LogModel::sine_unchecked(self.lambda[0], self.rf)
            }
        }
    }

    /// The model, rejected unless it is of disjoint type or the check was
    /// waived.
    pub fn model(&self) -> Result<LogModel> {
        let m = self.model_unchecked()?;
        if !self.allow_non_disjoint && !m.validate_disjoint_type() {
            return Err(Error::InfeasibleModel(format!(
                "{} model with lambda = {}{:+}i and Rf = {} is not of disjoint type",
                self.model, self.lambda[0], self.lambda[1], self.rf
            )));
        }
        Ok(m)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn grid_is_inclusive() {
        let g = grid_points(parse_grid("1:10:0.5").unwrap());
        assert_eq!(g.len(), 19);
        assert_eq!((g[0], g[18]), (1.0, 10.0));
        assert_eq!(grid_points(parse_grid("0:0.3:0.1").unwrap()).len(), 4);
        assert!(parse_grid("1:0:0.5").is_err() && parse_grid("1:2:0").is_err() && parse_grid("1:2").is_err());
    }

    #[test]
    fn defaults_and_overrides() {
        let c = RunConfig::resolve(Command::Render, &map(&[])).unwrap();
        assert_eq!((c.depth, c.size, c.r), (40, [400, 300], 4.0));
        let c = RunConfig::resolve(Command::Trace, &map(&[("lambda", "0.1,0.05"), ("depth", "3")])).unwrap();
        assert_eq!((c.lambda, c.depth), ([0.1, 0.05], 3));
        assert!(RunConfig::resolve(Command::Trace, &map(&[("model", "cosh")])).is_err());
        assert!(RunConfig::resolve(Command::Trace, &map(&[("size", "0x3")])).is_err());
        assert!(RunConfig::resolve(Command::Verify, &map(&[("suite", "nope")])).is_err());
        assert!(RunConfig::resolve(Command::Trace, &map(&[("model", "sine"), ("lambda", "1,1")]))
            .unwrap()
            .model()
            .is_err());
    }

    #[test]
    fn config_file_syntax() {
        let m = parse_config("# comment\nmodel = exp\nRf=2.5  # trailing\n\nout = \"a b.csv\"\n").unwrap();
        assert_eq!(m["Rf"], "2.5");
        assert_eq!(m["out"], "a b.csv");
        assert!(parse_config("colour = red").is_err());
        assert!(parse_config("model exp").is_err());
    }

    #[test]
    fn disjoint_gate() {
        let c = RunConfig::resolve(Command::Trace, &map(&[("Rf", "20")])).unwrap();
        assert!(matches!(c.model(), Err(Error::InfeasibleModel(_))));
        assert!(c.model_unchecked().is_ok());
        let waived = RunConfig::resolve(Command::Trace, &map(&[("Rf", "20"), ("allow-non-disjoint", "true")])).unwrap();
        assert!(waived.model().is_ok());
    }
}
