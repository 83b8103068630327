//! System parameters, unit conversion and the derived regime-boundary heights.
//!
//! Configuration files carry radio quantities the way link budgets are
//! usually written (dBm for powers, dB for ratios); everything inside the
//! crate is linear watts and linear ratios. The conversion happens exactly
//! once, in [`build_params`], so none of the SINR math ever sees a decibel.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Watts to dBm.
pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

/// dB ratio to linear ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear ratio to dB.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// All scalar model parameters, in meters, watts and linear ratios.
///
/// The two disks of the scenario: the cell is a disk of radius `r1` centered
/// at the terrestrial base station (TBS); the stadium is a disk of radius
/// `r2` whose center sits `d` meters from the TBS, with the aerial base
/// station (ABS) hovering `h` meters above the stadium center. Devices
/// served by the ABS (AsDs) are uniform inside the stadium; users served by
/// the TBS (TsUEs) are uniform over the cell minus the stadium.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Cell radius (m).
    pub r1: f64,
    /// Stadium radius (m).
    pub r2: f64,
    /// Stadium-center-to-TBS distance (m).
    pub d: f64,
    /// ABS height above the stadium center (m).
    pub h: f64,
    /// Terrestrial path-loss exponent.
    pub alpha_b: f64,
    /// LOS aerial path-loss exponent.
    pub alpha_los: f64,
    /// NLOS aerial path-loss exponent.
    pub alpha_nlos: f64,
    /// LOS additional attenuation factor (linear).
    pub eta_los: f64,
    /// NLOS additional attenuation factor (linear).
    pub eta_nlos: f64,
    /// Nakagami order of the LOS aerial link.
    pub m_los: u32,
    /// Nakagami order of the NLOS aerial link.
    pub m_nlos: u32,
    /// TBS uplink receiver sensitivity (W).
    pub rho_b: f64,
    /// ABS uplink receiver sensitivity (W).
    pub rho_d: f64,
    /// AsD maximum transmit power (W).
    pub p_max: f64,
    /// TBS transmit power (W).
    pub p_t: f64,
    /// ABS transmit power (W).
    pub p_a: f64,
    /// TBS uplink SINR threshold (linear).
    pub gamma_u_t: f64,
    /// ABS uplink SINR threshold (linear).
    pub gamma_u_a: f64,
    /// TsUE downlink SINR threshold (linear).
    pub gamma_d_t: f64,
    /// AsD downlink SINR threshold (linear).
    pub gamma_d_a: f64,
    /// Noise power (W).
    pub sigma2: f64,
}

impl Default for SystemParams {
    /// The parameter set of the bundled example configuration
    /// (`configs/stadium.cfg`): a 500 m cell, 100 m stadium 200 m from the
    /// TBS, ABS at 400 m.
    fn default() -> Self {
        SystemParams {
            r1: 500.0,
            r2: 100.0,
            d: 200.0,
            h: 400.0,
            alpha_b: 4.0,
            alpha_los: 2.5,
            alpha_nlos: 4.0,
            eta_los: 1.0,
            eta_nlos: db_to_linear(-20.0),
            m_los: 5,
            m_nlos: 1,
            rho_b: dbm_to_watts(-75.0),
            rho_d: dbm_to_watts(-50.0),
            p_max: dbm_to_watts(20.0),
            p_t: dbm_to_watts(40.0),
            p_a: dbm_to_watts(20.0),
            gamma_u_t: 1.0,
            gamma_u_a: 1.0,
            gamma_d_t: 1.0,
            gamma_d_a: 1.0,
            sigma2: dbm_to_watts(-100.0),
        }
    }
}

impl SystemParams {
    /// Checks every invariant, including stadium containment
    /// (`d + r2 <= r1`). Construction paths that read user configuration go
    /// through this.
    pub fn validate(&self) -> Result<()> {
        self.validate_relaxed()?;
        if self.d + self.r2 > self.r1 {
            return Err(Error::invalid(
                "d_m",
                format!(
                    "stadium must lie inside the cell: d + r2 = {} > r1 = {}",
                    self.d + self.r2,
                    self.r1
                ),
            ));
        }
        Ok(())
    }

    /// Checks every invariant except stadium containment.
    ///
    /// Distance sweeps past the cell edge (and far-field checks) need
    /// parameter sets where the stadium pokes out of — or lies beyond — the
    /// cell. The distance distributions handle that geometry; the strict
    /// check stays on the configuration path.
    pub fn validate_relaxed(&self) -> Result<()> {
        if !(self.r2 > 0.0 && self.r1 > self.r2) {
            return Err(Error::invalid("r1_m", "R1 > R2 > 0 required"));
        }
        if self.d < 0.0 {
            return Err(Error::invalid("d_m", "d >= 0 required"));
        }
        if !(self.h > 0.0) {
            return Err(Error::invalid("h_m", "h > 0 required"));
        }
        for (key, v) in [
            ("rho_b_dbm", self.rho_b),
            ("rho_d_dbm", self.rho_d),
            ("p_max_dbm", self.p_max),
            ("p_t_dbm", self.p_t),
            ("p_a_dbm", self.p_a),
            ("gamma_u_t_db", self.gamma_u_t),
            ("gamma_u_a_db", self.gamma_u_a),
            ("gamma_d_t_db", self.gamma_d_t),
            ("gamma_d_a_db", self.gamma_d_a),
            ("sigma2_dbm", self.sigma2),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(key, "must be positive and finite"));
            }
        }
        for (key, v) in [
            ("alpha_b", self.alpha_b),
            ("alpha_los", self.alpha_los),
            ("alpha_nlos", self.alpha_nlos),
        ] {
            if !(v >= 2.0) {
                return Err(Error::invalid(key, "path-loss exponent >= 2 required"));
            }
        }
        if !(self.eta_los > self.eta_nlos && self.eta_nlos > 0.0) {
            return Err(Error::invalid("eta_los_db", "eta_los > eta_nlos > 0 required"));
        }
        if self.m_los < 1 || self.m_nlos < 1 {
            return Err(Error::invalid("m_los", "Nakagami order must be >= 1"));
        }
        Ok(())
    }

    /// Copy with a different ABS height.
    pub fn with_height(&self, h: f64) -> Self {
        SystemParams { h, ..self.clone() }
    }

    /// Copy with a different stadium-to-TBS distance.
    pub fn with_distance(&self, d: f64) -> Self {
        SystemParams { d, ..self.clone() }
    }

    /// Largest 3-D distance from the ABS to a point inside the stadium.
    pub fn asd_support_top(&self) -> f64 {
        (self.h * self.h + self.r2 * self.r2).sqrt()
    }
}

/// Which LOS-probability fit to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LosModel {
    /// Sigmoid-in-elevation fit.
    Model1,
    /// Power-law-in-elevation fit (valid above 15 degrees of elevation).
    Model2,
}

/// Aerial-channel environment: the LOS-probability model plus its two
/// fitted constants.
#[derive(Debug, Clone, PartialEq)]
pub struct AerialEnvironment {
    pub model: LosModel,
    /// `C` constant of the selected model.
    pub c: f64,
    /// `B` constant of the selected model.
    pub b: f64,
    /// Label used in CSV output (`suburban`, `urban`, ... or `custom`).
    pub name: String,
}

/// The four tabulated Model 1 environments, `(name, C1, B1)`.
pub const MODEL1_PRESETS: [(&str, f64, f64); 4] = [
    ("suburban", 4.88, 0.43),
    ("urban", 9.6117, 0.1581),
    ("dense-urban", 11.95, 0.136),
    ("high-rise-urban", 27.23, 0.08),
];

impl AerialEnvironment {
    /// Named preset for the given model. Model 2 only has an `urban` fit
    /// (`C2 = 0.6`, `B2 = 0.11` at 2 GHz).
    pub fn preset(model: LosModel, name: &str) -> Result<Self> {
        match model {
            LosModel::Model1 => MODEL1_PRESETS
                .iter()
                .find(|(n, _, _)| *n == name)
                .map(|&(n, c, b)| AerialEnvironment {
                    model,
                    c,
                    b,
                    name: n.to_string(),
                })
                .ok_or_else(|| {
                    Error::invalid("env_name", format!("unknown model-1 environment `{name}`"))
                }),
            LosModel::Model2 => {
                if name == "urban" {
                    Ok(AerialEnvironment {
                        model,
                        c: 0.6,
                        b: 0.11,
                        name: name.to_string(),
                    })
                } else {
                    Err(Error::invalid(
                        "env_name",
                        format!("model 2 only has an `urban` preset, got `{name}`"),
                    ))
                }
            }
        }
    }

    /// Environment with user-supplied constants.
    pub fn custom(model: LosModel, c: f64, b: f64) -> Result<Self> {
        if !(c > 0.0 && b > 0.0) {
            return Err(Error::invalid("env_c", "environment constants must be positive"));
        }
        Ok(AerialEnvironment {
            model,
            c,
            b,
            name: "custom".to_string(),
        })
    }
}

/// Heights at which the AsD power-control law changes shape, per LOS state.
///
/// `zmax_k = (P_max eta_k / rho_d)^(1/alpha_k)` is the link distance where
/// channel inversion for state `k` meets the power cap; `hcrit_k` is the ABS
/// height at which even the stadium rim stays within inversion range
/// (`sqrt(zmax_k^2 - r2^2)`, zero when the cap already binds inside the
/// stadium).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeBoundaries {
    pub zmax_los: f64,
    pub zmax_nlos: f64,
    pub hcrit_los: f64,
    pub hcrit_nlos: f64,
}

/// Derives the four boundary heights from the power-control parameters.
pub fn regime_boundaries(p: &SystemParams) -> RegimeBoundaries {
    let zmax = |eta: f64, alpha: f64| (p.p_max * eta / p.rho_d).powf(1.0 / alpha);
    let hcrit = |z: f64| (z * z - p.r2 * p.r2).max(0.0).sqrt();
    let zmax_los = zmax(p.eta_los, p.alpha_los);
    let zmax_nlos = zmax(p.eta_nlos, p.alpha_nlos);
    RegimeBoundaries {
        zmax_los,
        zmax_nlos,
        hcrit_los: hcrit(zmax_los),
        hcrit_nlos: hcrit(zmax_nlos),
    }
}

/// A parsed configuration file: flat `key = value` pairs.
///
/// Lines starting with `#` or `;` are comments; `[section]` headers are
/// accepted and ignored (keys are globally unique).
#[derive(Debug, Clone, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find(['#', ';']) {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() || (line.starts_with('[') && line.ends_with(']')) {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::invalid(
                    "config",
                    format!("line {}: expected `key = value`, got `{line}`", lineno + 1),
                ));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if values.insert(key.clone(), value).is_some() {
                return Err(Error::invalid(&key, "duplicate key"));
            }
        }
        Ok(Config { values })
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::invalid("config", format!("cannot read {}: {e}", path.display()))
        })?;
        Config::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Overrides or inserts a key (CLI flags override file values).
    pub fn set(&mut self, key: &str, value: impl fmt::Display) {
        self.values.insert(key.to_string(), value.to_string());
    }

    fn required(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| Error::MissingKey(key.to_string()))
    }

    fn f64(&self, key: &str) -> Result<f64> {
        let raw = self.required(key)?;
        raw.parse::<f64>()
            .map_err(|_| Error::invalid(key, format!("not a number: `{raw}`")))
    }

    fn integer(&self, key: &str) -> Result<u32> {
        let raw = self.required(key)?;
        raw.parse::<u32>()
            .map_err(|_| Error::invalid(key, format!("must be a positive integer, got `{raw}`")))
    }
}

/// Builds validated [`SystemParams`] from a configuration, converting dBm
/// powers and dB ratios to watts and linear ratios.
pub fn build_params(cfg: &Config) -> Result<SystemParams> {
    let p = SystemParams {
        r1: cfg.f64("r1_m")?,
        r2: cfg.f64("r2_m")?,
        d: cfg.f64("d_m")?,
        h: cfg.f64("h_m")?,
        alpha_b: cfg.f64("alpha_b")?,
        alpha_los: cfg.f64("alpha_los")?,
        alpha_nlos: cfg.f64("alpha_nlos")?,
        eta_los: db_to_linear(cfg.f64("eta_los_db")?),
        eta_nlos: db_to_linear(cfg.f64("eta_nlos_db")?),
        m_los: cfg.integer("m_los")?,
        m_nlos: cfg.integer("m_nlos")?,
        rho_b: dbm_to_watts(cfg.f64("rho_b_dbm")?),
        rho_d: dbm_to_watts(cfg.f64("rho_d_dbm")?),
        p_max: dbm_to_watts(cfg.f64("p_max_dbm")?),
        p_t: dbm_to_watts(cfg.f64("p_t_dbm")?),
        p_a: dbm_to_watts(cfg.f64("p_a_dbm")?),
        gamma_u_t: db_to_linear(cfg.f64("gamma_u_t_db")?),
        gamma_u_a: db_to_linear(cfg.f64("gamma_u_a_db")?),
        gamma_d_t: db_to_linear(cfg.f64("gamma_d_t_db")?),
        gamma_d_a: db_to_linear(cfg.f64("gamma_d_a_db")?),
        sigma2: dbm_to_watts(cfg.f64("sigma2_dbm")?),
    };
    p.validate()?;
    Ok(p)
}

/// Builds the aerial environment from `env_model` plus either `env_name`
/// (preset) or `env_c`/`env_b` (custom constants).
pub fn build_environment(cfg: &Config) -> Result<AerialEnvironment> {
    let model = match cfg.required("env_model")? {
        "1" => LosModel::Model1,
        "2" => LosModel::Model2,
        other => return Err(Error::invalid("env_model", format!("expected 1 or 2, got `{other}`"))),
    };
    match (cfg.get("env_c"), cfg.get("env_b")) {
        (Some(_), Some(_)) => AerialEnvironment::custom(model, cfg.f64("env_c")?, cfg.f64("env_b")?),
        (None, None) => AerialEnvironment::preset(model, cfg.required("env_name")?),
        _ => Err(Error::invalid("env_c", "env_c and env_b must be given together")),
    }
}
