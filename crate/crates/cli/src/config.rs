//! Run configuration: the JSON file format, angle and grid parsing.

use std::fmt;
use std::path::PathBuf;

use dshell_fem::{BoundaryCondition, Layout};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

/// Angle in radians. Deserializes from a number (radians) or a string with an optional
/// `deg`, `°` or `rad` suffix; always serializes as a number in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle(pub f64);

impl Angle {
    pub fn radians(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse angle {input:?}: {reason}")]
pub struct AngleError {
    pub input: String,
    pub reason: &'static str,
}

/// Parses `"0.5"`, `"0.5rad"`, `"45deg"` or `"45°"` into radians.
pub fn parse_angle(s: &str) -> Result<f64, AngleError> {
    let bad = |reason| AngleError {
        input: s.to_string(),
        reason,
    };
    let t = s.trim();
    let (num, scale) = if let Some(x) = t.strip_suffix("deg").or_else(|| t.strip_suffix('°')) {
        (x, std::f64::consts::PI / 180.0)
    } else if let Some(x) = t.strip_suffix("rad") {
        (x, 1.0)
    } else {
        (t, 1.0)
    };
    let num = num.trim_end();
    if num.is_empty() {
        return Err(bad("missing number"));
    }
    let v: f64 = num.parse().map_err(|_| bad("not a number"))?;
    if !v.is_finite() {
        return Err(bad("not finite"));
    }
    Ok(v * scale)
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = Angle;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an angle in radians or a string such as \"45deg\"")
            }
            fn visit_f64<E: serde::de::Error>(self, v: f64) -> Result<Angle, E> {
                Ok(Angle(v))
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Angle, E> {
                Ok(Angle(v as f64))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Angle, E> {
                Ok(Angle(v as f64))
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Angle, E> {
                parse_angle(v).map(Angle).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    Gap,
    SpinOrbit,
    CriticalAngle,
    Testfn,
    Aux1d,
    Weyl,
    FemCount,
    Sweep,
    Deficiency,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Gap => "gap",
            Subcommand::SpinOrbit => "spin-orbit",
            Subcommand::CriticalAngle => "critical-angle",
            Subcommand::Testfn => "testfn",
            Subcommand::Aux1d => "aux1d",
            Subcommand::Weyl => "weyl",
            Subcommand::FemCount => "fem-count",
            Subcommand::Sweep => "sweep",
            Subcommand::Deficiency => "deficiency",
        }
    }
}

/// Mesh settings; absent fields take the defaults of the chosen subcommand.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bc: Option<BoundaryCondition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<Layout>,
}

/// Everything a run needs. The same type is read from `--config` files and embedded,
/// fully resolved, in every report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Subcommand>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Angle>,
    /// Number of modes `N` of the test-function family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<Vec<u32>>,
    /// Strip parameter `L` for `testfn`; defaults to the optimal one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    /// `[re, im]` pairs, one per mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Weyl sequence indices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<Angle>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mesh: Option<MeshConfig>,
    /// Number of Ritz values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    /// Directory receiving `A.mtx` and `B.mtx`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub export: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_grid: Option<Vec<Angle>>,
    /// Output file; standard output when absent. Not embedded in reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Worker threads. Not embedded in reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("config: {e}")))
}

impl RunConfig {
    /// Fields set in `over` replace those in `self`; mesh fields merge one by one.
    pub fn merge(mut self, over: RunConfig) -> RunConfig {
        macro_rules! take {
            ($($f:ident),*) => {$(
                if over.$f.is_some() {
                    self.$f = over.$f;
                }
            )*};
        }
        take!(
            command,
            tau,
            m,
            omega,
            modes,
            length,
            coefficients,
            gamma,
            lambda,
            n,
            window,
            radii,
            theta,
            k,
            sigma,
            export,
            tau_grid,
            omega_grid,
            output,
            threads
        );
        if let Some(o) = over.mesh {
            let mut mc = self.mesh.unwrap_or_default();
            mc.radius = o.radius.or(mc.radius);
            mc.h = o.h.or(mc.h);
            mc.grading = o.grading.or(mc.grading);
            mc.bc = o.bc.or(mc.bc);
            mc.layout = o.layout.or(mc.layout);
            self.mesh = Some(mc);
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

/// Largest grid accepted from `start:stop:count`.
pub const MAX_GRID: usize = 100_000;

/// Parses a grid: either a comma-separated list or `start:stop:count` (inclusive, evenly
/// spaced). Each item goes through `item`.
pub fn parse_grid(s: &str, item: impl Fn(&str) -> Result<f64, String>) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        1 => s.split(',').map(|x| item(x.trim())).collect(),
        3 => {
            let a = item(parts[0].trim())?;
            let b = item(parts[1].trim())?;
            let n: usize = parts[2].trim().parse().map_err(|_| format!("bad count in {s:?}"))?;
            match n {
                0 => Err(format!("empty grid {s:?}")),
                n if n > MAX_GRID => Err(format!("grid {s:?} has more than {MAX_GRID} points")),
                1 => Ok(vec![a]),
                _ => {
                    let v: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
                    if v.iter().all(|x| x.is_finite()) {
                        Ok(v)
                    } else {
                        Err(format!("grid {s:?} overflows"))
                    }
                }
            }
        }
        _ => Err(format!("grid {s:?} is neither a list nor start:stop:count")),
    }
}

/// Finite floating-point number.
pub fn parse_number(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("not a finite number: {s:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert_eq!(parse_angle(" 0.25 rad").unwrap(), 0.25);
        assert_eq!(parse_angle("45deg").unwrap(), PI / 4.0);
        assert_eq!(parse_angle("90°").unwrap(), PI / 2.0);
        assert_eq!(parse_angle("-1e-3").unwrap(), -1e-3);
        for s in ["", "deg", "x", "inf", "NaNdeg", "45 degrees"] {
            assert!(parse_angle(s).is_err(), "{s}");
        }
    }

    #[test]
    fn angle_in_json() {
        let c = parse_config(r#"{"omega": "30deg", "theta": [0.5, "-90deg"]}"#).unwrap();
        assert_eq!(c.omega, Some(Angle(PI / 6.0)));
        assert_eq!(c.theta.unwrap()[1], Angle(-PI / 2.0));
        assert!(parse_config(r#"{"omega": true}"#).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse_config(r#"{"tau": -1, "mass": 1}"#).is_err());
        assert!(parse_config(r#"{"mesh": {"hh": 0.1}}"#).is_err());
        assert!(parse_config(r#"{"command": "gapp"}"#).is_err());
    }

    #[test]
    fn merge_prefers_the_override() {
        let file = parse_config(r#"{"tau": -1, "m": 2, "mesh": {"h": 0.3, "radius": 5}}"#).unwrap();
        let flags = RunConfig {
            tau: Some(-3.0),
            mesh: Some(MeshConfig {
                h: Some(0.1),
                ..Default::default()
            }),
            ..Default::default()
        };
        let c = file.merge(flags);
        assert_eq!((c.tau, c.m), (Some(-3.0), Some(2.0)));
        let mc = c.mesh.unwrap();
        assert_eq!((mc.h, mc.radius), (Some(0.1), Some(5.0)));
    }

    #[test]
    fn json_round_trip() {
        let c = parse_config(r#"{"command": "fem-count", "tau": -1, "omega": "1deg", "mesh": {"bc": "neumann", "layout": "strip"}, "k": 3}"#).unwrap();
        assert_eq!(parse_config(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1,2, 3", parse_number).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(parse_grid("-1:1:3", parse_number).unwrap(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(parse_grid("2:5:1", parse_number).unwrap(), vec![2.0]);
        assert!(parse_grid("1:2", parse_number).is_err());
        assert!(parse_grid("1:2:0", parse_number).is_err());
        assert!(parse_grid("0:1:18446744073709551615", parse_number).is_err());
        assert!(parse_grid("-1e308:1e308:3", parse_number).is_err());
        assert!(parse_grid("1,inf", parse_number).is_err());
    }
}
