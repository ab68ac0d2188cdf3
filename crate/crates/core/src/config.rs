//! Flat key-value run configuration.
//!
//! The file is a TOML document restricted to top-level `key = value` pairs.
//! Every key is optional; unset keys take the built-in defaults, so an empty
//! file describes the nominal experiment. Plant parameters use the field
//! names of [`PlantParams`]; the controller's model copy uses the same names
//! prefixed with `model_` and defaults to the simulated plant.
//!
//! | keys | meaning |
//! |------|---------|
//! | `ps rho cd w ap ctp beta_e vt mt bp k delta_l delta_r kv` | simulated plant |
//! | `model_<plant key>` | controller model override |
//! | `lambda` or `c0 c1`, `kappa`, `phi`, `freeze_adaptation` | controller |
//! | `centers`, `d_hat0` (arrays) | fuzzy estimator |
//! | `scenario` (`"constant-ps"` / `"varying-ps"`), `duration`, `dt_plant`, `dt_control`, `amplitude`, `omega`, `x0`, `v0`, `pl0` | scenario |
//! | `transient_fraction`, `monitor_window`, `growth_tolerance`, `e_threshold` | stability monitor |
//! | `out`, `emit_plot_data` | output |

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use toml::{Table, Value};

use crate::controller::ControllerParams;
use crate::error::{Error, Result};
use crate::fuzzy::FuzzyEstimator;
use crate::plant::PlantParams;
use crate::sim::{Scenario, SupplyMode};

/// Output file used when plot data is requested without an explicit path.
pub const DEFAULT_PLOT_FILE: &str = "servo_run.csv";

const PLANT_KEYS: [&str; 14] = [
    "ps", "rho", "cd", "w", "ap", "ctp", "beta_e", "vt", "mt", "bp", "k", "delta_l", "delta_r", "kv",
];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub plant: PlantParams<f64>,
    pub controller: ControllerParams<f64>,
    pub estimator: FuzzyEstimator<f64>,
    pub scenario: Scenario<f64>,
    pub out: Option<PathBuf>,
    pub emit_plot_data: bool,
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let table: Table = text.parse().map_err(|e: toml::de::Error| Error::Parse(e.message().to_string()))?;
    let mut doc = Doc { table };
    let cfg = doc.resolve()?;
    if let Some(key) = doc.table.keys().next() {
        return Err(Error::Config { key: key.clone(), reason: "unknown key".into() });
    }
    cfg.validate()?;
    Ok(cfg)
}

struct Doc {
    table: Table,
}

impl Doc {
    fn take(&mut self, key: &str) -> Option<Value> {
        self.table.remove(key)
    }

    fn float(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => as_float(key, &v),
        }
    }

    fn opt_float(&mut self, key: &str) -> Result<Option<f64>> {
        self.take(key).map(|v| as_float(key, &v)).transpose()
    }

    fn boolean(&mut self, key: &str, default: bool) -> Result<bool> {
        match self.take(key) {
            None => Ok(default),
            Some(Value::Boolean(b)) => Ok(b),
            Some(_) => Err(bad(key, "expected true or false")),
        }
    }

    fn string(&mut self, key: &str) -> Result<Option<String>> {
        match self.take(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(_) => Err(bad(key, "expected a quoted string")),
        }
    }

    fn floats(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.take(key) {
            None => Ok(None),
            Some(Value::Array(items)) => items.iter().map(|v| as_float(key, v)).collect::<Result<_>>().map(Some),
            Some(_) => Err(bad(key, "expected an array of numbers")),
        }
    }

    fn plant(&mut self, prefix: &str, base: &PlantParams<f64>) -> Result<PlantParams<f64>> {
        let mut p = *base;
        for name in PLANT_KEYS {
            let key = format!("{prefix}{name}");
            if let Some(v) = self.opt_float(&key)? {
                *plant_field(&mut p, name) = v;
            }
        }
        Ok(p)
    }

    fn resolve(&mut self) -> Result<RunConfig> {
        let defaults = RunConfig::default();
        let plant = self.plant("", &defaults.plant)?;
        let model = self.plant("model_", &plant)?;

        let lambda = self.opt_float("lambda")?;
        let base = ControllerParams::from_lambda(lambda.unwrap_or(8.0), 1.0, 0.5, model);
        let c0 = self.float("c0", base.c0)?;
        let c1 = self.float("c1", base.c1)?;
        let kappa = self.float("kappa", base.kappa)?;
        let phi = self.float("phi", base.phi)?;
        let frozen = self.boolean("freeze_adaptation", false)?;
        let mut controller = ControllerParams { c0, c1, kappa, phi, adaptive: true, model };
        if frozen {
            controller = controller.frozen();
        }

        let centers = self.floats("centers")?.unwrap_or_else(|| defaults.estimator.centers().to_vec());
        let d_hat0 = self.floats("d_hat0")?.unwrap_or_else(|| vec![0.0; centers.len()]);
        let estimator = FuzzyEstimator::new(centers, d_hat0)?;

        let d = defaults.scenario;
        let supply = match self.string("scenario")?.as_deref() {
            None => d.supply,
            Some(name) => parse_supply(name)?,
        };
        let mut scenario = Scenario {
            duration: self.float("duration", d.duration)?,
            dt_plant: self.float("dt_plant", d.dt_plant)?,
            dt_control: self.float("dt_control", d.dt_control)?,
            supply,
            ..d
        };
        scenario.reference.amplitude = self.float("amplitude", d.reference.amplitude)?;
        scenario.reference.omega = self.float("omega", d.reference.omega)?;
        scenario.initial.x = self.float("x0", d.initial.x)?;
        scenario.initial.v = self.float("v0", d.initial.v)?;
        scenario.initial.pl = self.float("pl0", d.initial.pl)?;
        let m = &mut scenario.monitor;
        m.transient_fraction = self.float("transient_fraction", m.transient_fraction)?;
        m.window = self.float("monitor_window", m.window)?;
        m.growth_tolerance = self.float("growth_tolerance", m.growth_tolerance)?;
        m.final_mean_e_threshold = self.float("e_threshold", m.final_mean_e_threshold)?;

        Ok(RunConfig {
            plant,
            controller,
            estimator,
            scenario,
            out: self.string("out")?.map(PathBuf::from),
            emit_plot_data: self.boolean("emit_plot_data", false)?,
        })
    }
}

fn plant_field<'a>(p: &'a mut PlantParams<f64>, name: &str) -> &'a mut f64 {
    match name {
        "ps" => &mut p.ps,
        "rho" => &mut p.rho,
        "cd" => &mut p.cd,
        "w" => &mut p.w,
        "ap" => &mut p.ap,
        "ctp" => &mut p.ctp,
        "beta_e" => &mut p.beta_e,
        "vt" => &mut p.vt,
        "mt" => &mut p.mt,
        "bp" => &mut p.bp,
        "k" => &mut p.k,
        "delta_l" => &mut p.delta_l,
        "delta_r" => &mut p.delta_r,
        "kv" => &mut p.kv,
        _ => unreachable!("unknown plant field {name}"),
    }
}

fn plant_values(p: &PlantParams<f64>) -> [f64; 14] {
    [p.ps, p.rho, p.cd, p.w, p.ap, p.ctp, p.beta_e, p.vt, p.mt, p.bp, p.k, p.delta_l, p.delta_r, p.kv]
}

fn as_float(key: &str, v: &Value) -> Result<f64> {
    let x = match v {
        Value::Float(f) => *f,
        Value::Integer(i) => *i as f64,
        _ => return Err(bad(key, "expected a number")),
    };
    if !x.is_finite() {
        return Err(bad(key, "must be finite"));
    }
    Ok(x)
}

fn bad(key: &str, reason: &str) -> Error {
    Error::Config { key: key.to_string(), reason: reason.to_string() }
}

pub fn parse_supply(name: &str) -> Result<SupplyMode> {
    match name {
        "constant-ps" => Ok(SupplyMode::Constant),
        "varying-ps" => Ok(SupplyMode::Varying),
        other => Err(bad("scenario", &format!("expected constant-ps or varying-ps, got {other:?}"))),
    }
}

pub fn supply_name(mode: SupplyMode) -> &'static str {
    match mode {
        SupplyMode::Constant => "constant-ps",
        SupplyMode::Varying => "varying-ps",
    }
}

impl RunConfig {
    /// Checks every module invariant. Errors name the config key.
    pub fn validate(&self) -> Result<()> {
        self.plant.validate()?;
        self.controller.validate().map_err(|e| match e {
            Error::InvalidParameter { name, reason } if PLANT_KEYS.contains(&name.as_str()) => {
                Error::InvalidParameter { name: format!("model_{name}"), reason }
            }
            other => other,
        })?;
        self.scenario.validate()
    }

    /// Path the CSV goes to, if any.
    pub fn output_path(&self) -> Option<PathBuf> {
        match (&self.out, self.emit_plot_data) {
            (Some(p), _) => Some(p.clone()),
            (None, true) => Some(PathBuf::from(DEFAULT_PLOT_FILE)),
            (None, false) => None,
        }
    }

    /// Fully resolved configuration in the input format. Parsing the dump
    /// reproduces `self`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let line = |s: &mut String, k: &str, v: f64| writeln!(s, "{k} = {v:?}").unwrap();
        s.push_str("# plant\n");
        for (k, v) in PLANT_KEYS.iter().zip(plant_values(&self.plant)) {
            line(&mut s, k, v);
        }
        s.push_str("# controller model\n");
        for (k, v) in PLANT_KEYS.iter().zip(plant_values(&self.controller.model)) {
            line(&mut s, &format!("model_{k}"), v);
        }
        s.push_str("# controller\n");
        let c = &self.controller;
        line(&mut s, "c0", c.c0);
        line(&mut s, "c1", c.c1);
        line(&mut s, "kappa", c.kappa);
        if c.adaptive {
            line(&mut s, "phi", c.phi);
        }
        writeln!(s, "freeze_adaptation = {}", !c.adaptive).unwrap();
        s.push_str("# fuzzy estimator\n");
        let list = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ");
        writeln!(s, "centers = [{}]", list(self.estimator.centers())).unwrap();
        writeln!(s, "d_hat0 = [{}]", list(self.estimator.consequents())).unwrap();
        s.push_str("# scenario\n");
        let sc = &self.scenario;
        writeln!(s, "scenario = \"{}\"", supply_name(sc.supply)).unwrap();
        line(&mut s, "duration", sc.duration);
        line(&mut s, "dt_plant", sc.dt_plant);
        line(&mut s, "dt_control", sc.dt_control);
        line(&mut s, "amplitude", sc.reference.amplitude);
        line(&mut s, "omega", sc.reference.omega);
        line(&mut s, "x0", sc.initial.x);
        line(&mut s, "v0", sc.initial.v);
        line(&mut s, "pl0", sc.initial.pl);
        s.push_str("# stability monitor\n");
        line(&mut s, "transient_fraction", sc.monitor.transient_fraction);
        line(&mut s, "monitor_window", sc.monitor.window);
        line(&mut s, "growth_tolerance", sc.monitor.growth_tolerance);
        line(&mut s, "e_threshold", sc.monitor.final_mean_e_threshold);
        s.push_str("# output\n");
        if let Some(out) = &self.out {
            writeln!(s, "out = {}", Value::String(out.display().to_string())).unwrap();
        }
        writeln!(s, "emit_plot_data = {}", self.emit_plot_data).unwrap();
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::DEFAULT_CENTERS;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.plant.ps, 7.0e6);
        assert_eq!((cfg.plant.delta_l, cfg.plant.delta_r), (-1.1, 0.9));
        assert_eq!((cfg.controller.kappa, cfg.controller.phi), (1.0, 0.5));
        assert_eq!(cfg.estimator.centers(), &DEFAULT_CENTERS);
        assert_eq!(cfg.scenario.dt_plant, 1.0 / 800.0);
        assert_eq!(cfg.scenario.dt_control, 1.0 / 400.0);
    }

    #[test]
    fn lambda_expands() {
        let cfg = parse_config("lambda = 8").unwrap();
        assert_eq!((cfg.controller.c0, cfg.controller.c1), (64.0, 16.0));
        let cfg = parse_config("lambda = 5\nc1 = 12.0").unwrap();
        assert_eq!((cfg.controller.c0, cfg.controller.c1), (25.0, 12.0));
    }

    #[test]
    fn invalid_values_name_key() {
        let err = parse_config("delta_l = 0.5").unwrap_err();
        assert!(matches!(&err, Error::InvalidParameter { name, .. } if name == "delta_l"), "{err}");
        assert!(err.to_string().contains("delta_l"));

        let err = parse_config("model_kv = -1").unwrap_err();
        assert!(err.to_string().contains("model_kv"), "{err}");

        let err = parse_config("c1 = -3").unwrap_err();
        assert!(err.to_string().contains("c1"), "{err}");

        let err = parse_config("dt_control = 0.003").unwrap_err();
        assert!(err.to_string().contains("dt_control"), "{err}");
    }

    #[test]
    fn unknown_and_malformed_keys() {
        let err = parse_config("supply = 3").unwrap_err();
        assert_eq!(err, Error::Config { key: "supply".into(), reason: "unknown key".into() });
        let err = parse_config("kappa = \"big\"").unwrap_err();
        assert!(matches!(err, Error::Config { key, .. } if key == "kappa"));
        let err = parse_config("scenario = \"wobbly\"").unwrap_err();
        assert!(matches!(err, Error::Config { key, .. } if key == "scenario"));
        assert!(matches!(parse_config("kappa = = 1"), Err(Error::Parse(_))));
        let err = parse_config("centers = [0.0, 1.0]\nd_hat0 = [0, 0, 0]").unwrap_err();
        assert!(err.to_string().contains("d_hat0"), "{err}");
        let err = parse_config("centers = [1.0, 0.0]").unwrap_err();
        assert!(err.to_string().contains("centers"), "{err}");
    }

    #[test]
    fn model_defaults_to_plant_overrides() {
        let cfg = parse_config("ps = 5e6\nmodel_k = 80").unwrap();
        assert_eq!(cfg.controller.model.ps, 5.0e6);
        assert_eq!(cfg.controller.model.k, 80.0);
        assert_eq!(cfg.plant.k, 75.0);
    }

    #[test]
    fn dump_is_a_fixed_point() {
        for text in [
            "",
            "lambda = 3\nscenario = \"varying-ps\"\nout = \"a b.csv\"\nemit_plot_data = true",
            "freeze_adaptation = true\nkv = 7e-6\ncenters = [-1, 0, 1]\nd_hat0 = [-0.5, 0, 0.25]",
        ] {
            let cfg = parse_config(text).unwrap();
            let again = parse_config(&cfg.dump()).unwrap();
            assert_eq!(again, cfg);
            assert_eq!(again.dump(), cfg.dump());
        }
    }

    #[test]
    fn output_path_rules() {
        assert_eq!(parse_config("").unwrap().output_path(), None);
        assert_eq!(
            parse_config("emit_plot_data = true").unwrap().output_path(),
            Some(PathBuf::from(DEFAULT_PLOT_FILE))
        );
        assert_eq!(parse_config("out = \"x.csv\"").unwrap().output_path(), Some(PathBuf::from("x.csv")));
    }
}
