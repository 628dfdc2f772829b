//! Phase sweeps and visibility extraction.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::first_quantized::Limits;
use crate::fock::StateVector;
use crate::optics::{coincidence_probability, DetectorLayout, LinearNetwork};
use crate::states::KValue;

pub const DEFAULT_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FringeResult {
    pub phase_grid: Vec<f64>,
    pub rates: Vec<f64>,
    pub fundamental: u32,
    pub constant_term: f64,
    /// `b` in `rate ≈ a − b·cos(nφ)`.
    pub cosine_amplitude: f64,
    pub visibility: f64,
    /// Largest deviation of a rate from the single-harmonic reconstruction.
    pub residual: f64,
}

/// Constant and `−cos(nφ)` coefficients of samples on the uniform grid
/// `φ_j = 2πj/P`. Exact for single-harmonic signals when `P ≥ 4n`.
pub fn harmonic_projection(rates: &[f64], n: u32) -> (f64, f64) {
    let p = rates.len() as f64;
    let constant = rates.iter().sum::<f64>() / p;
    let cosine = rates
        .iter()
        .enumerate()
        .map(|(j, r)| r * (n as f64 * uniform_phase(j, rates.len())).cos())
        .sum::<f64>()
        * 2.0
        / p;
    (constant, -cosine)
}

fn uniform_phase(j: usize, points: usize) -> f64 {
    2.0 * PI * j as f64 / points as f64
}

pub fn uniform_grid(points: usize) -> Vec<f64> {
    (0..points).map(|j| uniform_phase(j, points)).collect()
}

impl FringeResult {
    pub fn from_rates(rates: Vec<f64>, fundamental: u32) -> Result<Self> {
        check_grid(rates.len(), fundamental)?;
        let (a, b) = harmonic_projection(&rates, fundamental);
        let phase_grid = uniform_grid(rates.len());
        let residual = phase_grid
            .iter()
            .zip(&rates)
            .map(|(phi, r)| (r - (a - b * (fundamental as f64 * phi).cos())).abs())
            .fold(0.0, f64::max);
        let visibility = if a > 0.0 { b.abs() / a } else { 0.0 };
        Ok(FringeResult {
            phase_grid,
            rates,
            fundamental,
            constant_term: a,
            cosine_amplitude: b,
            visibility,
            residual,
        })
    }
}

fn check_grid(points: usize, fundamental: u32) -> Result<()> {
    if fundamental == 0 {
        return Err(Error::Grid("fundamental harmonic must be ≥ 1".into()));
    }
    let need = 4 * fundamental as usize;
    if points < need {
        return Err(Error::Grid(format!(
            "{points} points cannot resolve harmonic {fundamental}; need at least {need}"
        )));
    }
    Ok(())
}

/// Sweep a collective polarization phase `φ` over `points` uniform values in
/// `[0, 2π)`, recording the coincidence rate at each. The fundamental is
/// the state's photon number. Grid points are evaluated in parallel and
/// assembled in grid order.
pub fn fringe_sweep(
    state: &StateVector,
    net: &LinearNetwork,
    layout: &DetectorLayout,
    points: usize,
    limits: &Limits,
) -> Result<FringeResult> {
    let n = state.photon_number();
    check_grid(points, n)?;
    let rates = uniform_grid(points)
        .into_par_iter()
        .map(|phi| coincidence_probability(state, &net.with_phase(phi), layout, limits))
        .collect::<Result<Vec<f64>>>()?;
    FringeResult::from_rates(rates, n)
}

/// `3(1 + 2K)/(7 + 2K)`.
pub fn visibility_prediction(k: KValue) -> f64 {
    let k = k.value();
    3.0 * (1.0 + 2.0 * k) / (7.0 + 2.0 * k)
}
