//! Run configuration documents.
//!
//! A document is a JSON object. System parameters sit at the top level with
//! the unit in the key name; frequencies are linear (Hz) and are converted to
//! rad/s here. Command settings live in optional blocks. Every key is checked:
//! unknown keys, missing required keys and wrongly typed values are all
//! collected into one error.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{OmitError, Result};
use crate::oracle::OracleSettings;
use crate::params::{DetuningPolicy, SystemParams};
use crate::response::DEFAULT_SPECTRUM_POINTS;

/// Required top-level keys, in document order.
pub const REQUIRED_KEYS: [&str; 10] = [
    "lambda_c_m",
    "cavity_length_m",
    "m_eff_kg",
    "omega_m_hz",
    "gamma_m_hz",
    "kappa_hz",
    "r0_m",
    "c_bias_f",
    "u_bias_v",
    "p_pump_w",
];

fn hz(f: f64) -> f64 {
    2.0 * PI * f
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSettings {
    pub n: u32,
    /// Explicit x range (rad/s); both or neither.
    pub x_range: Option<(f64, f64)>,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeRange {
    pub n_min: u32,
    pub n_max: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig3Settings {
    pub range: ChargeRange,
    pub points: usize,
    /// Half-span of each panel in units of `sqrt(beta(n))`.
    pub span_sqrt_beta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig4Curve {
    pub label: String,
    pub m_eff: f64,
    pub u_bias: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig4Settings {
    pub range: ChargeRange,
    pub curves: Vec<Fig4Curve>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleParameterSet {
    /// Damping and pump power swapped for values that keep integration short.
    Scaled,
    /// Parameters exactly as configured.
    Literal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub parameter_set: OracleParameterSet,
    pub n: u32,
    pub detunings: usize,
    /// Detunings span `omega_m +- span_sqrt_beta * sqrt(beta)`.
    pub span_sqrt_beta: f64,
    pub settings: OracleSettings,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvertSettings {
    /// Measured window width (rad/s).
    pub width: Option<f64>,
    pub range: ChargeRange,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: SystemParams,
    pub spectrum: SpectrumSettings,
    pub sweep: ChargeRange,
    pub fig2: ChargeRange,
    pub fig3: Fig3Settings,
    pub fig4: Fig4Settings,
    pub oracle: OracleConfig,
    pub invert: InvertSettings,
    /// The document with every default filled in. Parsing it again yields
    /// the same configuration.
    pub resolved: Value,
}

impl RunConfig {
    /// Parameters used by the `oracle` command.
    pub fn oracle_params(&self) -> SystemParams {
        match self.oracle.parameter_set {
            OracleParameterSet::Literal => self.params,
            OracleParameterSet::Scaled => {
                let scaled = SystemParams::oracle_scaled();
                SystemParams {
                    gamma_m: scaled.gamma_m,
                    p_pump: scaled.p_pump,
                    ..self.params
                }
            }
        }
    }
}

/// Key reader over one JSON object. Records what it consumed so leftovers
/// can be reported as unknown.
struct Reader<'a> {
    prefix: String,
    map: &'a Map<String, Value>,
    seen: BTreeSet<&'static str>,
    resolved: Map<String, Value>,
    missing: Vec<String>,
    errors: Vec<String>,
}

impl<'a> Reader<'a> {
    fn new(prefix: &str, map: &'a Map<String, Value>) -> Self {
        Self {
            prefix: prefix.to_string(),
            map,
            seen: BTreeSet::new(),
            resolved: Map::new(),
            missing: Vec::new(),
            errors: Vec::new(),
        }
    }

    fn path(&self, key: &str) -> String {
        format!("{}{}", self.prefix, key)
    }

    fn take(&mut self, key: &'static str) -> Option<&'a Value> {
        self.seen.insert(key);
        self.map.get(key)
    }

    fn parse_num(&mut self, key: &'static str, v: &Value) -> Option<f64> {
        match v.as_f64() {
            Some(x) => {
                self.resolved.insert(key.into(), v.clone());
                Some(x)
            }
            None => {
                self.errors.push(format!(
                    "key '{}' must be a number (got {v})",
                    self.path(key)
                ));
                None
            }
        }
    }

    fn num(&mut self, key: &'static str) -> f64 {
        match self.take(key) {
            Some(v) => self.parse_num(key, v).unwrap_or(f64::NAN),
            None => {
                self.missing.push(self.path(key));
                f64::NAN
            }
        }
    }

    fn opt_num(&mut self, key: &'static str) -> Option<f64> {
        let v = self.take(key)?;
        self.parse_num(key, v)
    }

    fn num_or(&mut self, key: &'static str, default: f64) -> f64 {
        match self.take(key) {
            Some(v) => self.parse_num(key, v).unwrap_or(default),
            None => {
                self.resolved.insert(key.into(), default.into());
                default
            }
        }
    }

    fn count_or(&mut self, key: &'static str, default: u32) -> u32 {
        let parsed = match self.take(key) {
            None => None,
            Some(v) => {
                let int = v
                    .as_u64()
                    .or_else(|| {
                        v.as_f64()
                            .filter(|x| x.fract() == 0.0 && *x >= 0.0)
                            .map(|x| x as u64)
                    })
                    .and_then(|x| u32::try_from(x).ok());
                if int.is_none() {
                    self.errors.push(format!(
                        "key '{}' must be a non-negative integer (got {v})",
                        self.path(key)
                    ));
                }
                int
            }
        };
        let n = parsed.unwrap_or(default);
        self.resolved.insert(key.into(), n.into());
        n
    }

    fn bool_or(&mut self, key: &'static str, default: bool) -> bool {
        let b = match self.take(key) {
            None => default,
            Some(Value::Bool(b)) => *b,
            Some(v) => {
                self.errors.push(format!(
                    "key '{}' must be true or false (got {v})",
                    self.path(key)
                ));
                default
            }
        };
        self.resolved.insert(key.into(), b.into());
        b
    }

    fn str_or(&mut self, key: &'static str, default: &str) -> String {
        let s = match self.take(key) {
            None => default.to_string(),
            Some(Value::String(s)) => s.clone(),
            Some(v) => {
                self.errors.push(format!(
                    "key '{}' must be a string (got {v})",
                    self.path(key)
                ));
                default.to_string()
            }
        };
        self.resolved.insert(key.into(), s.clone().into());
        s
    }

    fn block(&mut self, key: &'static str) -> Option<&'a Map<String, Value>> {
        match self.take(key)? {
            Value::Object(m) => Some(m),
            v => {
                self.errors.push(format!(
                    "key '{}' must be an object (got {v})",
                    self.path(key)
                ));
                None
            }
        }
    }

    /// Folds a finished child reader into this one under `key`.
    fn adopt(&mut self, key: &'static str, child: Reader<'_>) {
        let (resolved, missing, errors) = child.finish();
        self.missing.extend(missing);
        self.errors.extend(errors);
        self.resolved.insert(key.into(), Value::Object(resolved));
    }

    fn finish(mut self) -> (Map<String, Value>, Vec<String>, Vec<String>) {
        let unknown: Vec<String> = self
            .map
            .keys()
            .filter(|k| !self.seen.contains(k.as_str()))
            .map(|k| self.path(k))
            .collect();
        if !unknown.is_empty() {
            self.errors.insert(
                0,
                format!(
                    "unknown key{} {}",
                    if unknown.len() > 1 { "s" } else { "" },
                    unknown
                        .iter()
                        .map(|k| format!("'{k}'"))
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            );
        }
        (self.resolved, self.missing, self.errors)
    }
}

fn empty() -> &'static Map<String, Value> {
    static EMPTY: std::sync::OnceLock<Map<String, Value>> = std::sync::OnceLock::new();
    EMPTY.get_or_init(Map::new)
}

fn read_range(r: &mut Reader<'_>, n_min: u32, n_max: u32) -> ChargeRange {
    ChargeRange {
        n_min: r.count_or("n_min", n_min),
        n_max: r.count_or("n_max", n_max),
    }
}

fn check_range(errors: &mut Vec<String>, block: &str, range: ChargeRange) {
    if range.n_min > range.n_max {
        errors.push(format!(
            "{block}: n_min ({}) must not exceed n_max ({})",
            range.n_min, range.n_max
        ));
    }
}

fn default_curves() -> Vec<Fig4Curve> {
    let curve = |label: &str, m_eff: f64, u_bias: f64| Fig4Curve {
        label: label.into(),
        m_eff,
        u_bias,
    };
    vec![
        curve("heavy", 1450e-12, 1.0),
        curve("reference", 145e-12, 1.0),
        curve("intermediate", 14.5e-12, 0.1),
        curve("light", 1.45e-12, 0.1),
    ]
}

fn read_curves(r: &mut Reader<'_>) -> Vec<Fig4Curve> {
    let Some(v) = r.take("curves") else {
        let curves = default_curves();
        let doc: Vec<Value> = curves
            .iter()
            .map(|c| serde_json::json!({"label": c.label, "m_eff_kg": c.m_eff, "u_bias_v": c.u_bias}))
            .collect();
        r.resolved.insert("curves".into(), Value::Array(doc));
        return curves;
    };
    let Value::Array(items) = v else {
        r.errors.push(format!(
            "key '{}' must be an array (got {v})",
            r.path("curves")
        ));
        return Vec::new();
    };
    let mut curves = Vec::new();
    let mut doc = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let prefix = format!("{}curves[{i}].", r.prefix);
        let Value::Object(m) = item else {
            r.errors.push(format!(
                "key '{}' must be an object (got {item})",
                &prefix[..prefix.len() - 1]
            ));
            continue;
        };
        let mut c = Reader::new(&prefix, m);
        let label = c.str_or("label", &format!("curve{i}"));
        let m_eff = c.num("m_eff_kg");
        let u_bias = c.num("u_bias_v");
        let (resolved, missing, errors) = c.finish();
        r.missing.extend(missing);
        r.errors.extend(errors);
        doc.push(Value::Object(resolved));
        curves.push(Fig4Curve {
            label,
            m_eff,
            u_bias,
        });
    }
    if curves.is_empty() && r.errors.is_empty() {
        r.errors
            .push(format!("key '{}' must not be empty", r.path("curves")));
    }
    r.resolved.insert("curves".into(), Value::Array(doc));
    curves
}

/// Parses a document already loaded as JSON.
pub fn parse_value(doc: &Value) -> Result<RunConfig> {
    let Value::Object(map) = doc else {
        return Err(OmitError::Config(format!(
            "config document must be a JSON object (got {doc})"
        )));
    };
    let mut r = Reader::new("", map);
    let lambda_c = r.num("lambda_c_m");
    let cavity_length = r.num("cavity_length_m");
    let m_eff = r.num("m_eff_kg");
    let omega_m = hz(r.num("omega_m_hz"));
    let gamma_m = hz(r.num("gamma_m_hz"));
    let kappa = hz(r.num("kappa_hz"));
    let r0 = r.num("r0_m");
    let c_bias = r.num("c_bias_f");
    let u_bias = r.num("u_bias_v");
    let p_pump = r.num("p_pump_w");
    let n_charge = r.count_or("n_charge", 0);
    let delta_c_policy = match r.opt_num("delta_c_hz") {
        Some(f) => DetuningPolicy::Explicit(hz(f)),
        None => DetuningPolicy::ResonantAtZeroCharge,
    };
    let coulomb_repulsive = r.bool_or("coulomb_repulsive", false);
    let params = SystemParams {
        lambda_c,
        cavity_length,
        m_eff,
        omega_m,
        gamma_m,
        kappa,
        r0,
        c_bias,
        u_bias,
        p_pump,
        n_charge,
        delta_c_policy,
        coulomb_repulsive,
    };

    let mut b = Reader::new("spectrum.", r.block("spectrum").unwrap_or(empty()));
    let n = b.count_or("n", n_charge);
    let x_min = b.opt_num("x_min_hz").map(hz);
    let x_max = b.opt_num("x_max_hz").map(hz);
    let points = b.count_or("points", DEFAULT_SPECTRUM_POINTS as u32) as usize;
    let x_range = match (x_min, x_max) {
        (Some(lo), Some(hi)) => Some((lo, hi)),
        (None, None) => None,
        _ => {
            b.errors
                .push("spectrum: x_min_hz and x_max_hz must be given together".into());
            None
        }
    };
    r.adopt("spectrum", b);
    let spectrum = SpectrumSettings { n, x_range, points };

    let mut b = Reader::new("sweep.", r.block("sweep").unwrap_or(empty()));
    let sweep = read_range(&mut b, 0, 40);
    r.adopt("sweep", b);

    let mut b = Reader::new("fig2.", r.block("fig2").unwrap_or(empty()));
    let fig2 = read_range(&mut b, 0, 80);
    r.adopt("fig2", b);

    let mut b = Reader::new("fig3.", r.block("fig3").unwrap_or(empty()));
    let fig3 = Fig3Settings {
        range: read_range(&mut b, 0, 40),
        points: b.count_or("points", DEFAULT_SPECTRUM_POINTS as u32) as usize,
        span_sqrt_beta: b.num_or("span_sqrt_beta", 4.0),
    };
    r.adopt("fig3", b);

    let mut b = Reader::new("fig4.", r.block("fig4").unwrap_or(empty()));
    let fig4 = Fig4Settings {
        range: read_range(&mut b, 0, 40),
        curves: read_curves(&mut b),
    };
    r.adopt("fig4", b);

    let mut b = Reader::new("oracle.", r.block("oracle").unwrap_or(empty()));
    let defaults = OracleSettings::default();
    let parameter_set = match b.str_or("parameter_set", "scaled").as_str() {
        "scaled" => OracleParameterSet::Scaled,
        "literal" => OracleParameterSet::Literal,
        other => {
            b.errors.push(format!(
                "key 'oracle.parameter_set' must be \"scaled\" or \"literal\" (got \"{other}\")"
            ));
            OracleParameterSet::Scaled
        }
    };
    let oracle = OracleConfig {
        parameter_set,
        n: b.count_or("n", n_charge),
        detunings: b.count_or("detunings", 11) as usize,
        span_sqrt_beta: b.num_or("span_sqrt_beta", 2.0),
        settings: OracleSettings {
            eps_p_ratio: b.num_or("eps_p_ratio", defaults.eps_p_ratio),
            rtol: b.num_or("rtol", defaults.rtol),
            window_periods: b.count_or("window_periods", defaults.window_periods as u32) as usize,
            samples_per_period: b.count_or("samples_per_period", defaults.samples_per_period as u32)
                as usize,
            max_time: b.num_or("max_time_s", defaults.max_time),
        },
    };
    r.adopt("oracle", b);

    let mut b = Reader::new("invert.", r.block("invert").unwrap_or(empty()));
    let width_hz = b.opt_num("width_hz");
    let width_rad = b.opt_num("width_rad_s");
    let width = match (width_hz, width_rad) {
        (Some(_), Some(_)) => {
            b.errors
                .push("invert: give only one of width_hz and width_rad_s".into());
            None
        }
        (Some(f), None) => Some(hz(f)),
        (None, w) => w,
    };
    let invert = InvertSettings {
        width,
        range: read_range(&mut b, 0, 40),
    };
    r.adopt("invert", b);

    let (resolved, missing, mut errors) = r.finish();
    check_range(&mut errors, "sweep", sweep);
    check_range(&mut errors, "fig2", fig2);
    check_range(&mut errors, "fig3", fig3.range);
    check_range(&mut errors, "fig4", fig4.range);
    check_range(&mut errors, "invert", invert.range);

    let mut problems = errors;
    if !missing.is_empty() {
        problems.push(format!("missing required keys: {}", missing.join(", ")));
    }
    if !problems.is_empty() {
        return Err(OmitError::Config(problems.join("; ")));
    }

    Ok(RunConfig {
        params,
        spectrum,
        sweep,
        fig2,
        fig3,
        fig4,
        oracle,
        invert,
        resolved: Value::Object(resolved),
    })
}

fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| OmitError::Config(format!("malformed config: {e}")))
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_value(&parse_document(text)?)
}

/// Applies `key=value` to the raw document. `key` may be dotted
/// (`fig3.points`); `value` is read as JSON, falling back to a plain string.
pub fn apply_override(doc: &mut Value, entry: &str) -> Result<()> {
    let (key, raw) = entry.split_once('=').ok_or_else(|| {
        OmitError::Config(format!("override '{entry}' is not of the form key=value"))
    })?;
    let path: Vec<&str> = key.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(OmitError::Config(format!(
            "override '{entry}' has an empty key"
        )));
    }
    let value = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.to_string()));

    let mut node = doc;
    for part in &path[..path.len() - 1] {
        let Value::Object(map) = node else {
            return Err(OmitError::Config(format!(
                "override '{entry}': '{part}' is not inside an object"
            )));
        };
        node = map
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Map::new()));
    }
    let Value::Object(map) = node else {
        return Err(OmitError::Config(format!(
            "override '{entry}': parent of '{key}' is not an object"
        )));
    };
    map.insert(path[path.len() - 1].to_string(), value);
    Ok(())
}

pub fn parse_config_with_overrides(text: &str, overrides: &[String]) -> Result<RunConfig> {
    let mut doc = parse_document(text)?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    parse_value(&doc)
}

pub fn load_config(path: &Path, overrides: &[String]) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| OmitError::Config(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_with_overrides(&text, overrides)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2: &str = include_str!("../presets/fig2.config");

    #[test]
    fn shipped_preset_matches_reference_set() {
        let cfg = parse_config(FIG2).unwrap();
        assert_eq!(cfg.params, SystemParams::fig2());
    }

    #[test]
    fn conclusion_preset_changes_only_voltage() {
        let cfg = parse_config(include_str!("../presets/conclusion.config")).unwrap();
        assert_eq!(
            cfg.params,
            SystemParams {
                u_bias: 0.1,
                ..SystemParams::fig2()
            }
        );
    }

    #[test]
    fn angular_unit_key_is_unknown() {
        let text = FIG2.replace("omega_m_hz", "omega_m_rad");
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("unknown key 'omega_m_rad'"), "{err}");
        assert!(err.contains("missing required keys: omega_m_hz"), "{err}");
    }

    #[test]
    fn empty_document_lists_every_required_key() {
        let err = parse_config("{}").unwrap_err();
        assert_eq!(err.kind(), crate::error::ErrorKind::Config);
        let msg = err.to_string();
        for key in REQUIRED_KEYS {
            assert!(msg.contains(key), "{key} not in {msg}");
        }
    }

    #[test]
    fn non_numeric_value_names_key() {
        let text = FIG2.replace("\"kappa_hz\": 215000", "\"kappa_hz\": \"215 kHz\"");
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("'kappa_hz' must be a number"), "{err}");
    }

    #[test]
    fn unknown_block_key_is_rejected() {
        let err = parse_config_with_overrides(FIG2, &["fig3.point=5".into()])
            .unwrap_err()
            .to_string();
        assert!(err.contains("'fig3.point'"), "{err}");
    }

    #[test]
    fn malformed_json_is_config_error() {
        let err = parse_config("{ \"lambda_c_m\": ").unwrap_err();
        assert_eq!(err.kind(), crate::error::ErrorKind::Config);
    }

    #[test]
    fn defaults_are_documented_values() {
        let cfg = parse_config(FIG2).unwrap();
        assert_eq!(
            cfg.fig3.range,
            ChargeRange {
                n_min: 0,
                n_max: 40
            }
        );
        assert_eq!(cfg.fig3.points, 2001);
        assert_eq!(cfg.fig3.span_sqrt_beta, 4.0);
        assert_eq!(
            cfg.fig2,
            ChargeRange {
                n_min: 0,
                n_max: 80
            }
        );
        assert_eq!(cfg.oracle.parameter_set, OracleParameterSet::Scaled);
        assert_eq!(cfg.oracle.detunings, 11);
        assert_eq!(cfg.spectrum.x_range, None);
        assert_eq!(cfg.invert.width, None);
        assert_eq!(cfg.fig4.curves.len(), 4);
    }

    #[test]
    fn resolved_document_reparses_identically() {
        let cfg = parse_config_with_overrides(
            FIG2,
            &[
                "delta_c_hz=1000000".into(),
                "spectrum.x_min_hz=-1e5".into(),
                "spectrum.x_max_hz=1e5".into(),
                "invert.width_rad_s=700000".into(),
            ],
        )
        .unwrap();
        let again = parse_value(&cfg.resolved).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn overrides_convert_frequency_units() {
        let cfg =
            parse_config_with_overrides(FIG2, &["delta_c_hz=1e6".into(), "n_charge=12".into()])
                .unwrap();
        assert_eq!(
            cfg.params.delta_c_policy,
            DetuningPolicy::Explicit(2.0 * PI * 1e6)
        );
        assert_eq!(cfg.params.n_charge, 12);
        assert_eq!(cfg.spectrum.n, 12);
        let cfg = parse_config_with_overrides(FIG2, &["invert.width_hz=1".into()]).unwrap();
        assert_eq!(cfg.invert.width, Some(2.0 * PI));
    }

    #[test]
    fn override_floats_parse_exactly() {
        for text in [
            "1037361.1485007177",
            "1037361.1485007176",
            "5.654491174832768e-13",
        ] {
            let cfg =
                parse_config_with_overrides(FIG2, &[format!("invert.width_rad_s={text}")]).unwrap();
            assert_eq!(cfg.invert.width, Some(text.parse::<f64>().unwrap()));
        }
    }

    #[test]
    fn override_needs_equals_sign() {
        assert!(parse_config_with_overrides(FIG2, &["kappa_hz".into()]).is_err());
        assert!(parse_config_with_overrides(FIG2, &["=3".into()]).is_err());
    }

    #[test]
    fn fractional_count_is_rejected() {
        let err = parse_config_with_overrides(FIG2, &["n_charge=2.5".into()])
            .unwrap_err()
            .to_string();
        assert!(
            err.contains("'n_charge' must be a non-negative integer"),
            "{err}"
        );
    }

    #[test]
    fn inverted_range_is_rejected() {
        assert!(parse_config_with_overrides(FIG2, &["sweep.n_min=50".into()]).is_err());
    }

    #[test]
    fn both_width_units_is_an_error() {
        let r = parse_config_with_overrides(
            FIG2,
            &["invert.width_hz=1".into(), "invert.width_rad_s=1".into()],
        );
        assert!(r.is_err());
    }

    #[test]
    fn curve_entries_are_strict() {
        let err = parse_config_with_overrides(
            FIG2,
            &[r#"fig4.curves=[{"m_eff_kg": 1e-12, "u_volts": 0.1}]"#.into()],
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("fig4.curves[0].u_volts"), "{err}");
        assert!(err.contains("fig4.curves[0].u_bias_v"), "{err}");
    }

    #[test]
    fn scaled_oracle_set_keeps_other_params() {
        let cfg = parse_config(FIG2).unwrap();
        assert_eq!(cfg.oracle_params(), SystemParams::oracle_scaled());
        let cfg =
            parse_config_with_overrides(FIG2, &["oracle.parameter_set=literal".into()]).unwrap();
        assert_eq!(cfg.oracle_params(), SystemParams::fig2());
    }
}
