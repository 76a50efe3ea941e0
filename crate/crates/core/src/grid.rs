//! Uniform periodic grids in space and time.
//!
//! The spatial box is `[-L, L)` with `n` equispaced nodes and the standard
//! discrete frequency set `xi_k = pi k / L`, `k = 0, 1, ..., n/2-1, -n/2, ..., -1`
//! (rustfft layout: symmetric about zero up to the single Nyquist mode).
//! The time window is `[-T_grid, T_grid)` with the same layout, so `t = 0`
//! is always a grid node and both transforms are plain FFTs.

use crate::error::{CoreError, Result};
use serde::Serialize;

/// One-dimensional periodic grid on `[-L, L)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid1D {
    n: usize,
    half_width: f64,
}

impl Grid1D {
    pub fn new(n_points: usize, box_halfwidth: f64) -> Result<Self> {
        if !n_points.is_power_of_two() || n_points < 4 {
            return Err(CoreError::InvalidArgument(format!(
                "grid size must be a power of two >= 4, got {n_points}"
            )));
        }
        if !(box_halfwidth > 0.0) {
            return Err(CoreError::InvalidArgument(format!(
                "box half-width must be positive, got {box_halfwidth}"
            )));
        }
        Ok(Self { n: n_points, half_width: box_halfwidth })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Node spacing `h = 2L/n`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Frequency spacing `pi / L`.
    pub fn freq_spacing(&self) -> f64 {
        std::f64::consts::PI / self.half_width
    }

    pub fn node(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Signed frequency of FFT bin `k`.
    pub fn frequency(&self, k: usize) -> f64 {
        let m = if k < self.n / 2 { k as isize } else { k as isize - self.n as isize };
        m as f64 * self.freq_spacing()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.frequency(k)).collect()
    }

    /// Index of the node at `x = 0`.
    pub fn zero_index(&self) -> usize {
        self.n / 2
    }

    /// Largest frequency kept by the 2/3 dealias rule.
    pub fn dealias_cutoff(&self) -> f64 {
        self.freq_spacing() * (self.n as f64 / 3.0)
    }
}

/// Tensor grid: a spatial [`Grid1D`] crossed with a uniform time window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpaceTimeGrid {
    space: Grid1D,
    n_time: usize,
    horizon: f64,
}

impl SpaceTimeGrid {
    pub fn new(space: Grid1D, n_time: usize, horizon: f64) -> Result<Self> {
        if !n_time.is_power_of_two() || n_time < 4 {
            return Err(CoreError::InvalidArgument(format!(
                "time grid size must be a power of two >= 4, got {n_time}"
            )));
        }
        if !(horizon > 0.0) {
            return Err(CoreError::InvalidArgument(format!(
                "time horizon must be positive, got {horizon}"
            )));
        }
        Ok(Self { space, n_time, horizon })
    }

    pub fn space(&self) -> &Grid1D {
        &self.space
    }

    pub fn n_time(&self) -> usize {
        self.n_time
    }

    /// Stored half-window in time.
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn time_spacing(&self) -> f64 {
        2.0 * self.horizon / self.n_time as f64
    }

    pub fn time_freq_spacing(&self) -> f64 {
        std::f64::consts::PI / self.horizon
    }

    pub fn time_node(&self, k: usize) -> f64 {
        -self.horizon + k as f64 * self.time_spacing()
    }

    pub fn time_nodes(&self) -> Vec<f64> {
        (0..self.n_time).map(|k| self.time_node(k)).collect()
    }

    pub fn time_frequency(&self, m: usize) -> f64 {
        let s = if m < self.n_time / 2 { m as isize } else { m as isize - self.n_time as isize };
        s as f64 * self.time_freq_spacing()
    }

    /// Index of the node at `t = 0`.
    pub fn time_zero_index(&self) -> usize {
        self.n_time / 2
    }

    pub fn len(&self) -> usize {
        self.space.len() * self.n_time
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Cell measure `dxi * dtau` of the discrete frequency lattice, recorded in
    /// run manifests for reproducibility.
    pub fn frequency_cell(&self) -> f64 {
        self.space.freq_spacing() * self.time_freq_spacing()
    }
}
