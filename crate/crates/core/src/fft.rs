//! Cached rustfft plans and d-dimensional transforms over row-major buffers.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::grid::GridSpec;

type Plan = Arc<dyn Fft<f64>>;

static PLANS: LazyLock<Mutex<HashMap<(usize, bool), Plan>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn plan(n: usize, inverse: bool) -> Plan {
    let mut plans = PLANS.lock().expect("fft plan cache poisoned");
    plans
        .entry((n, inverse))
        .or_insert_with(|| {
            let dir = if inverse {
                FftDirection::Inverse
            } else {
                FftDirection::Forward
            };
            FftPlanner::new().plan_fft(n, dir)
        })
        .clone()
}

/// In-place transpose of a square row-major matrix, in cache blocks.
fn transpose(n: usize, data: &mut [Complex64]) {
    const B: usize = 32;
    for bi in (0..n).step_by(B) {
        for bj in (bi..n).step_by(B) {
            for i in bi..(bi + B).min(n) {
                let start = if bi == bj { i + 1 } else { bj };
                for j in start..(bj + B).min(n) {
                    data.swap(i * n + j, j * n + i);
                }
            }
        }
    }
}

thread_local! {
    static SCRATCH: RefCell<Vec<Complex64>> = const { RefCell::new(Vec::new()) };
}

fn transform(grid: GridSpec, data: &mut [Complex64], inverse: bool) {
    let fft = plan(grid.n(), inverse);
    SCRATCH.with(|cell| {
        let mut scratch = cell.borrow_mut();
        let need = fft.get_inplace_scratch_len();
        if scratch.len() < need {
            scratch.resize(need, Complex64::new(0.0, 0.0));
        }
        fft.process_with_scratch(data, &mut scratch[..need]);
        if grid.dim() == 2 {
            transpose(grid.n(), data);
            fft.process_with_scratch(data, &mut scratch[..need]);
            transpose(grid.n(), data);
        }
    });
}

/// Forward DFT normalized so that coefficient `n` is `N^{-d} Σ_x f(x) e^{-2πi n·x}`.
pub(crate) fn forward(grid: GridSpec, data: &mut [Complex64]) {
    transform(grid, data, false);
    let scale = 1.0 / grid.len() as f64;
    for c in data.iter_mut() {
        *c *= scale;
    }
}

/// Inverse of [`forward`]: synthesis `Σ_n c_n e^{2πi n·x}`.
pub(crate) fn inverse(grid: GridSpec, data: &mut [Complex64]) {
    transform(grid, data, true);
}

pub(crate) fn forward_real(grid: GridSpec, values: &[f64]) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward(grid, &mut data);
    data
}

pub(crate) fn inverse_real(grid: GridSpec, coeffs: &[Complex64]) -> Vec<f64> {
    let mut data = coeffs.to_vec();
    inverse(grid, &mut data);
    data.into_iter().map(|c| c.re).collect()
}
