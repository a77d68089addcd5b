//! Flat `key = value` settings. A config file supplies defaults, command
//! line flags override it, and [`Settings::resolve`] turns the merged map
//! into typed parameters.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use entcap_core::{Direction, OptimizerConfig};

use crate::error::{CliError, Result};
use crate::params::{ChannelParams, Family, Grid, Method};

/// Keys accepted by both the config file and the command line.
pub const FLAG_KEYS: &[&str] = &[
    "family", "xi", "xi-y", "xi-z", "delta", "p", "mean", "sigma", "dir", "method", "grid", "seed",
    "restarts", "out", "degrees", "jobs",
];

/// Optimizer knobs only settable from a config file.
pub const FILE_ONLY_KEYS: &[&str] = &[
    "fd-step",
    "initial-step",
    "shrink-factor",
    "convergence-tol",
    "max-iters",
];

const ANGLE_KEYS: &[&str] = &["xi", "xi-y", "xi-z", "delta", "mean", "sigma"];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

/// Which directions a command computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Directions {
    pub up: bool,
    pub down: bool,
}

impl FromStr for Directions {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "up" => Ok(Self {
                up: true,
                down: false,
            }),
            "down" => Ok(Self {
                up: false,
                down: true,
            }),
            "both" => Ok(Self {
                up: true,
                down: true,
            }),
            other => Err(CliError::validation(format!(
                "unknown direction '{other}' (expected up, down or both)"
            ))),
        }
    }
}

impl Directions {
    pub fn iter(self) -> impl Iterator<Item = Direction> {
        [(self.up, Direction::Up), (self.down, Direction::Down)]
            .into_iter()
            .filter_map(|(on, d)| on.then_some(d))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Resolved {
    pub params: ChannelParams,
    pub method: Method,
    pub directions: Directions,
    pub grid: Option<Grid>,
    pub optimizer: OptimizerConfig,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

/// What the command needs from the settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Purpose {
    Point,
    Sweep,
}

impl Settings {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut s = Settings::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::validation(format!(
                    "{origin}:{}: expected key = value, got '{line}'",
                    n + 1
                )));
            };
            let key = k.trim();
            if !FLAG_KEYS.contains(&key) && !FILE_ONLY_KEYS.contains(&key) {
                return Err(CliError::validation(format!(
                    "{origin}:{}: unknown key '{key}'",
                    n + 1
                )));
            }
            s.values.insert(key.to_string(), v.trim().to_string());
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// `other` wins on shared keys.
    pub fn merged_with(mut self, other: Settings) -> Self {
        self.values.extend(other.values);
        self
    }

    fn typed<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::validation(format!("invalid value '{v}' for {key}")))
            })
            .transpose()
    }

    fn flag(&self, key: &str) -> Result<bool> {
        match self.get(key) {
            None | Some("false") => Ok(false),
            Some("true") => Ok(true),
            Some(v) => Err(CliError::validation(format!(
                "{key} must be true or false, got '{v}'"
            ))),
        }
    }

    fn angle(&self, key: &str, scale: f64) -> Result<Option<f64>> {
        Ok(self.typed::<f64>(key)?.map(|v| v * scale))
    }

    pub fn resolve(&self, purpose: Purpose) -> Result<Resolved> {
        let family: Family = self
            .get("family")
            .ok_or_else(|| CliError::validation("missing required --family"))?
            .parse()?;
        let scale = if self.flag("degrees")? {
            std::f64::consts::PI / 180.0
        } else {
            1.0
        };
        let variable = family.sweep_variable();

        let grid = match purpose {
            Purpose::Sweep => {
                let g: Grid = self
                    .get("grid")
                    .ok_or_else(|| CliError::validation("sweep needs --grid start:stop:points"))?
                    .parse()?;
                if self.get(variable.key()).is_some() {
                    return Err(CliError::validation(format!(
                        "{} is the sweep variable for {family}; set it through --grid",
                        variable.key()
                    )));
                }
                Some(g.scaled(scale))
            }
            Purpose::Point => {
                if self.get("grid").is_some() {
                    return Err(CliError::validation("--grid only applies to sweep"));
                }
                None
            }
        };
        let needed = |key: &str| -> Result<f64> {
            let swept = purpose == Purpose::Sweep && key == variable.key();
            match self.angle(key, scale)? {
                Some(v) => Ok(v),
                None if swept => Ok(0.0),
                None => Err(CliError::validation(format!("{family} needs --{key}"))),
            }
        };
        for key in ANGLE_KEYS {
            if self.get(key).is_some() && !uses(family, key) {
                return Err(CliError::validation(format!(
                    "--{key} does not apply to {family}"
                )));
            }
        }

        let params = match family {
            Family::Gaussian => ChannelParams {
                family,
                xi: 0.0,
                xi_y: 0.0,
                xi_z: 0.0,
                delta: 0.0,
                p: 1.0,
                mean: needed("mean")?,
                sigma: needed("sigma")?,
            },
            _ => {
                let xi = needed("xi")?;
                let (xi_y, xi_z) = match family {
                    Family::CnotMix => (0.0, 0.0),
                    Family::DcnotMix => (
                        self.angle("xi-y", scale)?.unwrap_or(xi),
                        self.angle("xi-z", scale)?.unwrap_or(0.0),
                    ),
                    _ => (
                        self.angle("xi-y", scale)?.unwrap_or(xi),
                        self.angle("xi-z", scale)?.unwrap_or(xi),
                    ),
                };
                ChannelParams {
                    family,
                    xi,
                    xi_y,
                    xi_z,
                    delta: needed("delta")?,
                    p: self.typed("p")?.unwrap_or(0.5),
                    mean: 0.0,
                    sigma: 0.0,
                }
            }
        };
        if family == Family::Gaussian && self.get("p").is_some() {
            return Err(CliError::validation("--p does not apply to gaussian"));
        }
        // surface channel errors before any optimization starts
        match grid {
            Some(g) => {
                for v in g.values() {
                    params.at(v).channel()?;
                }
            }
            None => {
                params.channel()?;
            }
        }

        let method = self
            .typed::<Method>("method")?
            .unwrap_or(family.default_method());
        if method == Method::Method1 && matches!(family, Family::DcnotMix | Family::SwapMix) {
            return Err(CliError::validation(format!(
                "method1 only handles CNOT-class mixtures; use method2 for {family}"
            )));
        }

        let directions = match (purpose, self.get("dir")) {
            (_, Some(d)) => d.parse()?,
            (Purpose::Sweep, None) => Directions {
                up: true,
                down: true,
            },
            (Purpose::Point, None) => {
                return Err(CliError::validation("point needs --dir up|down|both"))
            }
        };

        let mut optimizer = OptimizerConfig::default();
        if let Some(v) = self.typed("seed")? {
            optimizer.rng_seed = v;
        }
        if let Some(v) = self.typed("restarts")? {
            optimizer.restarts = v;
        }
        if let Some(v) = self.typed("fd-step")? {
            optimizer.fd_step = v;
        }
        if let Some(v) = self.typed("initial-step")? {
            optimizer.initial_step = v;
        }
        if let Some(v) = self.typed("shrink-factor")? {
            optimizer.shrink_factor = v;
        }
        if let Some(v) = self.typed("convergence-tol")? {
            optimizer.convergence_tol = v;
        }
        if let Some(v) = self.typed("max-iters")? {
            optimizer.max_iters = v;
        }
        optimizer.validate()?;

        let jobs = self.typed::<usize>("jobs")?;
        if jobs == Some(0) {
            return Err(CliError::validation("--jobs must be positive"));
        }

        Ok(Resolved {
            params,
            method,
            directions,
            grid,
            optimizer,
            out: self.get("out").map(PathBuf::from),
            jobs,
        })
    }
}

fn uses(family: Family, key: &str) -> bool {
    match family {
        Family::Gaussian => matches!(key, "mean" | "sigma"),
        Family::CnotMix => matches!(key, "xi" | "delta"),
        Family::DcnotMix | Family::SwapMix => matches!(key, "xi" | "xi-y" | "xi-z" | "delta"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(pairs: &[(&str, &str)]) -> Settings {
        let mut s = Settings::default();
        for (k, v) in pairs {
            s.set(k, *v);
        }
        s
    }

    #[test]
    fn file_parsing() {
        let s = Settings::parse("# recipe\nfamily = cnot-mix\n\nxi=0.3  # comment\n", "f").unwrap();
        assert_eq!(s.get("family"), Some("cnot-mix"));
        assert_eq!(s.get("xi"), Some("0.3"));
        assert!(Settings::parse("family cnot-mix", "f").is_err());
        assert!(Settings::parse("colour = red", "f").is_err());
        assert!(Settings::parse("max-iters = 10", "f").is_ok());
    }

    #[test]
    fn flags_override_file() {
        let file = settings(&[
            ("family", "cnot-mix"),
            ("xi", "0.1"),
            ("delta", "0"),
            ("dir", "up"),
        ]);
        let flags = settings(&[("xi", "0.2")]);
        let r = file.merged_with(flags).resolve(Purpose::Point).unwrap();
        assert_eq!(r.params.xi, 0.2);
        assert_eq!(r.method, Method::Method1);
    }

    #[test]
    fn degrees_convert_angles() {
        let s = settings(&[
            ("family", "cnot-mix"),
            ("xi", "45"),
            ("degrees", "true"),
            ("grid", "-45:45:3"),
        ]);
        let r = s.resolve(Purpose::Sweep).unwrap();
        assert!((r.params.xi - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((r.grid.unwrap().stop - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert_eq!(
            r.directions,
            Directions {
                up: true,
                down: true
            }
        );
    }

    #[test]
    fn validation_errors() {
        let cases: &[&[(&str, &str)]] = &[
            &[("xi", "0.1")],
            &[("family", "cnot-mix"), ("delta", "0"), ("dir", "up")],
            &[
                ("family", "dcnot-mix"),
                ("xi", "0.3"),
                ("delta", "0"),
                ("dir", "up"),
                ("method", "method1"),
            ],
            &[
                ("family", "gaussian"),
                ("mean", "0.3"),
                ("sigma", "-1"),
                ("dir", "up"),
            ],
            &[
                ("family", "gaussian"),
                ("mean", "0.3"),
                ("sigma", "0.1"),
                ("dir", "up"),
                ("xi", "0.1"),
            ],
            &[
                ("family", "cnot-mix"),
                ("xi", "0.3"),
                ("delta", "0"),
                ("dir", "up"),
                ("restarts", "0"),
            ],
            &[
                ("family", "cnot-mix"),
                ("xi", "0.3"),
                ("delta", "0"),
                ("dir", "sideways"),
            ],
            &[
                ("family", "cnot-mix"),
                ("xi", "0.3"),
                ("delta", "0"),
                ("dir", "up"),
                ("jobs", "0"),
            ],
            &[
                ("family", "cnot-mix"),
                ("xi", "0.3"),
                ("delta", "0"),
                ("dir", "up"),
                ("degrees", "yes"),
            ],
        ];
        for case in cases {
            let err = settings(case).resolve(Purpose::Point).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{case:?}: {err}");
        }
        let sweep_with_delta = settings(&[
            ("family", "cnot-mix"),
            ("xi", "0.3"),
            ("delta", "0"),
            ("grid", "0:1:3"),
        ]);
        assert!(sweep_with_delta.resolve(Purpose::Sweep).is_err());
        let one_point = settings(&[("family", "cnot-mix"), ("xi", "0.3"), ("grid", "0:1:1")]);
        assert!(one_point.resolve(Purpose::Sweep).is_err());
    }
}
