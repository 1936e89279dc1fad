use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{ScalarField, VelocityField};
use crate::grid::GridSpec;

use super::history::FrameSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EquationKind {
    /// Prescribed velocity.
    Drift,
    /// Velocity `u = (-R₂θ, R₁θ)` recomputed from the scalar.
    Sqg,
}

/// Sign in front of the advection term of the forward equation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AdvectionSign {
    /// `θ_t = (u·∇)θ - Λθ`.
    #[default]
    Paper,
    /// `θ_t = -(u·∇)θ - Λθ`.
    Standard,
}

impl AdvectionSign {
    pub fn sigma(self) -> f64 {
        match self {
            AdvectionSign::Paper => 1.0,
            AdvectionSign::Standard => -1.0,
        }
    }
}

/// Velocity prescription for drift runs.
#[derive(Clone, Debug)]
pub enum VelocitySpec {
    Zero,
    Constant([f64; 2]),
    /// `u = (0, a sin(2πx₁))`; two dimensions only.
    Shear { amplitude: f64 },
    /// Frames loaded from a history file, linearly interpolated in time.
    Recorded(Arc<FrameSeries>),
}

impl VelocitySpec {
    pub fn is_static(&self) -> bool {
        !matches!(self, VelocitySpec::Recorded(_))
    }

    pub fn describe(&self) -> String {
        match self {
            VelocitySpec::Zero => "zero".into(),
            VelocitySpec::Constant(c) => format!("constant({:e},{:e})", c[0], c[1]),
            VelocitySpec::Shear { amplitude } => format!("shear({amplitude:e})"),
            VelocitySpec::Recorded(s) => format!("recorded(frames={},dt={:e})", s.len(), s.dt()),
        }
    }

    fn validate(&self, grid: GridSpec) -> Result<()> {
        match self {
            VelocitySpec::Zero => Ok(()),
            VelocitySpec::Constant(c) => {
                if !c.iter().all(|v| v.is_finite()) {
                    return Err(Error::config("velocity.constant", "components must be finite"));
                }
                if grid.dim() == 1 && c[1] != 0.0 {
                    return Err(Error::config("velocity.constant", "one component expected for d = 1"));
                }
                Ok(())
            }
            VelocitySpec::Shear { amplitude } => {
                if grid.dim() != 2 {
                    return Err(Error::config("velocity.kind", "shear requires d = 2"));
                }
                if !amplitude.is_finite() {
                    return Err(Error::config("velocity.amplitude", "must be finite"));
                }
                Ok(())
            }
            VelocitySpec::Recorded(s) => {
                if s.grid() != grid {
                    return Err(Error::config("velocity.file", "history grid differs from grid"));
                }
                Ok(())
            }
        }
    }

    /// Velocity at forward time `t`.
    pub fn velocity_at(&self, grid: GridSpec, t: f64) -> Result<VelocityField> {
        match self {
            VelocitySpec::Zero => Ok(VelocityField::zeros(grid)),
            VelocitySpec::Constant(c) => VelocityField::constant(grid, &c[..grid.dim()]),
            VelocitySpec::Shear { amplitude } => shear(grid, *amplitude),
            VelocitySpec::Recorded(s) => s.at(t),
        }
    }
}

/// `u = (0, a sin(2πx₁))`.
pub fn shear(grid: GridSpec, amplitude: f64) -> Result<VelocityField> {
    if grid.dim() != 2 {
        return Err(Error::Dimension {
            required: 2,
            actual: grid.dim(),
        });
    }
    let second = ScalarField::from_fn(grid, |x| amplitude * (TAU * x[0]).sin())?;
    VelocityField::new(grid, vec![ScalarField::zeros(grid), second], true)
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub grid: GridSpec,
    pub kind: EquationKind,
    pub sign: AdvectionSign,
    /// Dissipation order; the dissipative operator is `(-Δ)^{α/2}`.
    pub alpha: f64,
    /// Time step; `None` selects the default from the velocity bound.
    pub dt: Option<f64>,
    pub t_end: f64,
    pub velocity: VelocitySpec,
    /// Steps between recorded series rows.
    pub cadence: usize,
}

impl SimConfig {
    /// Zero-velocity drift run with `α = 1`, the paper sign and `T = 0`.
    pub fn new(grid: GridSpec) -> Self {
        SimConfig {
            grid,
            kind: EquationKind::Drift,
            sign: AdvectionSign::Paper,
            alpha: 1.0,
            dt: None,
            t_end: 0.0,
            velocity: VelocitySpec::Zero,
            cadence: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return Err(Error::config("equation.alpha", "must lie in (0, 2]"));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::config("time.T", "must be finite and >= 0"));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::config("time.dt", "must be finite and > 0"));
            }
        }
        if self.cadence == 0 {
            return Err(Error::config("output.cadence", "must be >= 1"));
        }
        if self.kind == EquationKind::Sqg && self.grid.dim() != 2 {
            return Err(Error::config("equation.kind", "sqg requires grid.d = 2"));
        }
        if self.kind == EquationKind::Drift {
            self.velocity.validate(self.grid)?;
        }
        Ok(())
    }

    /// Largest admissible step under `dt·‖u‖_∞·N <= 1/2`.
    pub fn admissible_dt(&self, speed: f64) -> f64 {
        if speed > 0.0 {
            0.5 / (speed * self.grid.n() as f64)
        } else {
            f64::INFINITY
        }
    }

    /// `0.25 / (‖u‖_∞ N + 2π N/2)`.
    pub fn default_dt(&self, speed: f64) -> f64 {
        let n = self.grid.n() as f64;
        0.25 / (speed * n + PI * n)
    }

    /// Step count and the effective step: `dt` is shrunk so that a whole
    /// number of steps lands exactly on `T`.
    pub fn schedule(&self, speed: f64) -> (usize, f64) {
        let dt = self.dt.unwrap_or_else(|| self.default_dt(speed));
        if self.t_end == 0.0 {
            return (0, dt);
        }
        let steps = ((self.t_end / dt) - 1e-9).ceil().max(1.0) as usize;
        (steps, self.t_end / steps as f64)
    }

    pub(crate) fn check_cfl(&self, dt: f64, speed: f64) -> Result<()> {
        let admissible = self.admissible_dt(speed);
        if dt > admissible * (1.0 + 1e-12) {
            return Err(Error::Cfl { dt, admissible });
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        format!(
            "d={} N={} kind={:?} sign={:?} alpha={:e} dt={} T={:e} velocity={} cadence={}",
            self.grid.dim(),
            self.grid.n(),
            self.kind,
            self.sign,
            self.alpha,
            self.dt.map_or("default".to_string(), |v| format!("{v:e}")),
            self.t_end,
            self.velocity.describe(),
            self.cadence
        )
    }
}
