use std::fmt;
use std::str::FromStr;

use entcap_core::channels::xx_rotation;
use entcap_core::{
    gaussian_channel, mixture_channel, CanonicalParams, GaussianNoiseSpec, RandomUnitaryChannel,
};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    CnotMix,
    DcnotMix,
    SwapMix,
    Gaussian,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::CnotMix => "cnot-mix",
            Family::DcnotMix => "dcnot-mix",
            Family::SwapMix => "swap-mix",
            Family::Gaussian => "gaussian",
        }
    }

    /// The quantity a sweep varies: the branch offset for discrete
    /// mixtures, the mean angle for the Gaussian channel.
    pub fn sweep_variable(self) -> SweepVariable {
        match self {
            Family::Gaussian => SweepVariable::Mean,
            _ => SweepVariable::Delta,
        }
    }

    pub fn default_method(self) -> Method {
        match self {
            Family::CnotMix | Family::Gaussian => Method::Method1,
            Family::DcnotMix | Family::SwapMix => Method::Method2,
        }
    }
}

impl FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cnot-mix" => Ok(Family::CnotMix),
            "dcnot-mix" => Ok(Family::DcnotMix),
            "swap-mix" => Ok(Family::SwapMix),
            "gaussian" => Ok(Family::Gaussian),
            other => Err(CliError::validation(format!(
                "unknown family '{other}' (expected cnot-mix, dcnot-mix, swap-mix or gaussian)"
            ))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Method1,
    Method2,
}

impl FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "method1" => Ok(Method::Method1),
            "method2" => Ok(Method::Method2),
            other => Err(CliError::validation(format!(
                "unknown method '{other}' (expected method1 or method2)"
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Method1 => "method1",
            Method::Method2 => "method2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVariable {
    Delta,
    Mean,
}

impl SweepVariable {
    pub fn key(self) -> &'static str {
        match self {
            SweepVariable::Delta => "delta",
            SweepVariable::Mean => "mean",
        }
    }
}

/// `start:stop:points`, angles in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(CliError::validation(format!(
                "grid needs at least 2 points, got {points}"
            )));
        }
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(CliError::validation(format!(
                "grid start {start} must be below stop {stop}"
            )));
        }
        Ok(Self {
            start,
            stop,
            points,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..self.points)
            .map(|k| {
                if k == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * k as f64 / n as f64
                }
            })
            .collect()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            start: self.start * factor,
            stop: self.stop * factor,
            points: self.points,
        }
    }
}

impl FromStr for Grid {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CliError::validation(format!("grid '{s}' is not start:stop:points"));
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(bad());
        };
        let start = a.trim().parse().map_err(|_| bad())?;
        let stop = b.trim().parse().map_err(|_| bad())?;
        let points = n.trim().parse().map_err(|_| bad())?;
        Grid::new(start, stop, points)
    }
}

/// Channel parameters, radians. Discrete mixtures are
/// `p U(xi, xi_y, xi_z) + (1 - p) U(xi', xi_y', xi_z')` where `delta` is
/// added to the angles that define the class: `xi` for cnot-mix, `xi` and
/// `xi_y` for dcnot-mix, all three for swap-mix.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelParams {
    pub family: Family,
    pub xi: f64,
    pub xi_y: f64,
    pub xi_z: f64,
    pub delta: f64,
    pub p: f64,
    pub mean: f64,
    pub sigma: f64,
}

impl ChannelParams {
    /// Copy with the sweep variable set to `value`.
    pub fn at(&self, value: f64) -> Self {
        let mut out = self.clone();
        match self.family.sweep_variable() {
            SweepVariable::Delta => out.delta = value,
            SweepVariable::Mean => out.mean = value,
        }
        out
    }

    pub fn channel(&self) -> Result<RandomUnitaryChannel> {
        let weights = || -> Result<(f64, f64)> {
            if !(0.0..=1.0).contains(&self.p) {
                return Err(CliError::validation(format!(
                    "p = {} must lie in [0, 1]",
                    self.p
                )));
            }
            Ok((self.p, 1.0 - self.p))
        };
        let ch = match self.family {
            Family::CnotMix => {
                let (w1, w2) = weights()?;
                mixture_channel(nonzero(vec![
                    (w1, xx_rotation(self.xi).into()),
                    (w2, xx_rotation(self.xi + self.delta).into()),
                ]))?
            }
            Family::DcnotMix | Family::SwapMix => {
                let (w1, w2) = weights()?;
                let first = CanonicalParams::new(self.xi, self.xi_y, self.xi_z)?;
                let z_shift = if self.family == Family::SwapMix {
                    self.delta
                } else {
                    0.0
                };
                let second = CanonicalParams::canonicalize(
                    self.xi + self.delta,
                    self.xi_y + self.delta,
                    self.xi_z + z_shift,
                )?;
                mixture_channel(nonzero(vec![(w1, first.into()), (w2, second.into())]))?
            }
            Family::Gaussian => gaussian_channel(&GaussianNoiseSpec::new(self.mean, self.sigma)?),
        };
        Ok(ch)
    }
}

fn nonzero<T>(entries: Vec<(f64, T)>) -> Vec<(f64, T)> {
    entries.into_iter().filter(|(w, _)| *w > 0.0).collect()
}
