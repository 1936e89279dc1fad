//! Velocity histories consumed by the dual equation, which needs
//! `u(·, t - s)` for dual times `s ∈ [0, t]`.

use std::sync::{Arc, Mutex};

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::VelocityField;
use crate::grid::GridSpec;
use crate::spectral::AdvectionOperator;

use super::config::{SimConfig, VelocitySpec};
use super::integrator::{sqg_operator, velocity_from_hat, Stepper};

/// Default memory cap for stored frames.
pub const DEFAULT_MEMORY_CAP: u64 = 2 << 30;

/// Time instants closer than this fraction of a step to a frame snap to it.
const SNAP: f64 = 1e-9;

/// Equally spaced velocity frames `u(k dt)`, `k = 0..len`.
#[derive(Clone, Debug)]
pub struct FrameSeries {
    grid: GridSpec,
    dt: f64,
    frames: Vec<VelocityField>,
}

impl FrameSeries {
    pub fn new(grid: GridSpec, dt: f64, frames: Vec<VelocityField>) -> Result<Self> {
        if frames.is_empty() {
            return Err(Error::Precondition("velocity history has no frames".into()));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::OutOfRange {
                what: "history dt",
                value: dt,
                allowed: "> 0",
            });
        }
        for f in &frames {
            if f.grid() != grid {
                return Err(Error::GridMismatch("history frame grid differs".into()));
            }
            if !f.is_divergence_free() {
                return Err(Error::Precondition("history frames must be divergence free".into()));
            }
        }
        Ok(FrameSeries { grid, dt, frames })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn frames(&self) -> &[VelocityField] {
        &self.frames
    }

    /// Last covered forward time.
    pub fn covered(&self) -> f64 {
        self.dt * (self.frames.len() - 1) as f64
    }

    /// Velocity at `t`, linear in time between frames.
    pub fn at(&self, t: f64) -> Result<VelocityField> {
        interpolate(self.covered(), self.dt, self.frames.len(), t, |k| Ok(self.frames[k].clone()))
    }
}

fn interpolate(
    covered: f64,
    dt: f64,
    len: usize,
    t: f64,
    frame: impl Fn(usize) -> Result<VelocityField>,
) -> Result<VelocityField> {
    let pos = t / dt;
    if pos < -SNAP || t > covered + SNAP * dt {
        return Err(Error::HistoryGap {
            covered,
            requested: t,
        });
    }
    let nearest = pos.round();
    if (pos - nearest).abs() < SNAP {
        return frame((nearest.max(0.0) as usize).min(len - 1));
    }
    let k = pos.floor() as usize;
    let w = pos - k as f64;
    frame(k)?.lerp(&frame(k + 1)?, w)
}

/// Segmented re-simulation of an SQG run: the scalar is checkpointed every
/// `segment` steps and the frames of one segment are regenerated on demand.
pub struct Checkpointed {
    cfg: SimConfig,
    dt: f64,
    steps: usize,
    segment: usize,
    checkpoints: Vec<Vec<Complex64>>,
    cache: Mutex<Option<(usize, Arc<Vec<VelocityField>>)>>,
}

impl std::fmt::Debug for Checkpointed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Checkpointed")
            .field("dt", &self.dt)
            .field("steps", &self.steps)
            .field("segment", &self.segment)
            .field("checkpoints", &self.checkpoints.len())
            .finish()
    }
}

impl Checkpointed {
    pub(crate) fn new(cfg: SimConfig, dt: f64, steps: usize, segment: usize, checkpoints: Vec<Vec<Complex64>>) -> Self {
        Checkpointed {
            cfg,
            dt,
            steps,
            segment,
            checkpoints,
            cache: Mutex::new(None),
        }
    }

    pub fn segment_len(&self) -> usize {
        self.segment
    }

    fn segment_frames(&self, seg: usize) -> Result<Arc<Vec<VelocityField>>> {
        let mut cache = self.cache.lock().expect("history cache poisoned");
        if let Some((s, frames)) = cache.as_ref() {
            if *s == seg {
                return Ok(frames.clone());
            }
        }
        let grid = self.cfg.grid;
        let stepper = Stepper::new(grid, self.cfg.alpha, self.dt);
        let sigma = self.cfg.sign.sigma();
        let start = seg * self.segment;
        let end = (start + self.segment).min(self.steps);
        let mut hat = self.checkpoints[seg].clone();
        let mut frames = vec![velocity_from_hat(grid, &hat)];
        for _ in start..end {
            let op = sqg_operator(grid, &hat);
            hat = stepper.step(&hat, sigma, &op, |s| Ok(sqg_operator(grid, s)))?;
            frames.push(velocity_from_hat(grid, &hat));
        }
        let frames = Arc::new(frames);
        *cache = Some((seg, frames.clone()));
        Ok(frames)
    }

    fn frame(&self, k: usize) -> Result<VelocityField> {
        let seg = (k / self.segment).min(self.checkpoints.len() - 1);
        let frames = self.segment_frames(seg)?;
        Ok(frames[k - seg * self.segment].clone())
    }
}

/// Source of `u(·, τ)` for forward times `τ ∈ [0, covered]`.
#[derive(Clone, Debug)]
pub enum VelocityHistory {
    /// Analytic or file-backed prescription, valid up to `covered`.
    Prescribed { grid: GridSpec, spec: VelocitySpec, covered: f64 },
    /// Frames stored during a forward run.
    Stored(Arc<FrameSeries>),
    /// Frames regenerated from checkpoints.
    Checkpointed(Arc<Checkpointed>),
}

impl VelocityHistory {
    pub fn prescribed(grid: GridSpec, spec: VelocitySpec, covered: f64) -> Self {
        VelocityHistory::Prescribed { grid, spec, covered }
    }

    pub fn grid(&self) -> GridSpec {
        match self {
            VelocityHistory::Prescribed { grid, .. } => *grid,
            VelocityHistory::Stored(s) => s.grid(),
            VelocityHistory::Checkpointed(c) => c.cfg.grid,
        }
    }

    pub fn covered(&self) -> f64 {
        match self {
            VelocityHistory::Prescribed { covered, .. } => *covered,
            VelocityHistory::Stored(s) => s.covered(),
            VelocityHistory::Checkpointed(c) => c.dt * c.steps as f64,
        }
    }

    pub(crate) fn is_static(&self) -> bool {
        matches!(self, VelocityHistory::Prescribed { spec, .. } if spec.is_static())
    }

    pub fn velocity_at(&self, t: f64) -> Result<VelocityField> {
        match self {
            VelocityHistory::Prescribed { grid, spec, covered } => {
                if t < 0.0 || t > covered + SNAP * covered.max(1.0) {
                    return Err(Error::HistoryGap {
                        covered: *covered,
                        requested: t,
                    });
                }
                spec.velocity_at(*grid, t.min(*covered))
            }
            VelocityHistory::Stored(s) => s.at(t),
            VelocityHistory::Checkpointed(c) => {
                interpolate(self.covered(), c.dt, c.steps + 1, t, |k| c.frame(k))
            }
        }
    }

    pub(crate) fn operator_at(&self, t: f64) -> Result<AdvectionOperator> {
        Ok(AdvectionOperator::new(&self.velocity_at(t)?))
    }

    /// Materializes every frame; for writing history files.
    pub fn to_frames(&self, dt: f64) -> Result<FrameSeries> {
        let steps = (self.covered() / dt).round() as usize;
        let frames = (0..=steps)
            .map(|k| self.velocity_at((k as f64 * dt).min(self.covered())))
            .collect::<Result<Vec<_>>>()?;
        FrameSeries::new(self.grid(), dt, frames)
    }
}

/// Bytes needed to store `frames` velocity frames.
pub fn frame_bytes(grid: GridSpec, frames: usize) -> u64 {
    (frames as u64) * (grid.dim() * grid.len() * std::mem::size_of::<f64>()) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frames_interpolate_linearly() {
        let g = GridSpec::new(1, 8).unwrap();
        let frames = vec![
            VelocityField::constant(g, &[0.0]).unwrap(),
            VelocityField::constant(g, &[1.0]).unwrap(),
        ];
        let s = FrameSeries::new(g, 0.5, frames).unwrap();
        let u = s.at(0.125).unwrap();
        assert!((u.components()[0].values()[3] - 0.25).abs() < 1e-15);
        assert!(matches!(s.at(0.6), Err(Error::HistoryGap { .. })));
    }

    #[test]
    fn prescribed_history_reports_gap() {
        let g = GridSpec::new(1, 8).unwrap();
        let h = VelocityHistory::prescribed(g, VelocitySpec::Zero, 1.0);
        assert!(h.velocity_at(1.0).is_ok());
        let err = h.velocity_at(1.5).unwrap_err();
        assert!(err.to_string().contains("1.5"));
    }
}
