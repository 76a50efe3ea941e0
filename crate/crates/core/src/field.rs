//! Complex fields on periodic grids with cached Fourier representations.
//!
//! Transform conventions (continuum-normalized):
//!
//! ```text
//! forward:  g_hat(xi)  = h   * sum_j exp(-i x_j xi) g(x_j)
//! inverse:  g(x)       = (d_xi / 2 pi) * sum_k exp(+i x xi_k) g_hat(xi_k)
//! ```
//!
//! so the discrete pair mirrors `int exp(-i x xi) g dx` and its inversion with
//! the `1/(2 pi)` on the inverse. Space-time fields apply the same pair in each
//! variable; the boundary-trace inversion then carries the expected `1/(4 pi^2)`.

use crate::error::{CoreError, Result};
use crate::grid::{Grid1D, SpaceTimeGrid};
use crate::par;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub use num_complex::Complex64;

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().unwrap();
    cache
        .entry((n, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(n)
            } else {
                planner.plan_fft_forward(n)
            }
        })
        .clone()
}

/// In-place forward transform of one row: FFT, then `spacing * (-1)^k`.
/// The sign flip accounts for the box starting at `-L` rather than `0`.
fn forward_row(buf: &mut [Complex64], spacing: f64) {
    let n = buf.len();
    plan(n, false).process(buf);
    for (k, v) in buf.iter_mut().enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        *v *= sign * spacing;
    }
}

/// In-place inverse transform of one row: `(-1)^k`, inverse FFT, `d_xi / 2 pi`.
fn inverse_row(buf: &mut [Complex64], freq_spacing: f64) {
    let n = buf.len();
    for (k, v) in buf.iter_mut().enumerate() {
        if k % 2 == 1 {
            *v = -*v;
        }
    }
    plan(n, true).process(buf);
    let scale = freq_spacing / (2.0 * std::f64::consts::PI);
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// Complex samples on a [`Grid1D`] plus the cached transform. Whichever
/// representation a constructor provides, the other is computed on first use.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Grid1D,
    values: OnceLock<Vec<Complex64>>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl SpectralField {
    pub fn from_values(grid: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(CoreError::InvalidArgument(format!(
                "value count {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        let cell = OnceLock::new();
        let _ = cell.set(values);
        Ok(Self { grid, values: cell, spectrum: OnceLock::new() })
    }

    pub fn from_spectrum(grid: Grid1D, spectrum: Vec<Complex64>) -> Result<Self> {
        if spectrum.len() != grid.len() {
            return Err(CoreError::InvalidArgument(format!(
                "spectrum count {} does not match grid size {}",
                spectrum.len(),
                grid.len()
            )));
        }
        let cell = OnceLock::new();
        let _ = cell.set(spectrum);
        Ok(Self { grid, values: OnceLock::new(), spectrum: cell })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.len()).map(|j| f(grid.node(j))).collect();
        Self::from_values(grid, values).expect("length matches by construction")
    }

    pub fn from_real_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn zeros(grid: Grid1D) -> Self {
        let n = grid.len();
        Self::from_values(grid, vec![Complex64::default(); n]).unwrap()
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        self.values.get_or_init(|| {
            let mut buf = self.spectrum.get().expect("one representation present").clone();
            inverse_row(&mut buf, self.grid.freq_spacing());
            buf
        })
    }

    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum.get_or_init(|| {
            let mut buf = self.values.get().expect("one representation present").clone();
            forward_row(&mut buf, self.grid.spacing());
            buf
        })
    }

    /// New field with spectrum `f(k, xi_k, g_hat_k)`.
    pub fn map_spectrum(&self, f: impl Fn(usize, f64, Complex64) -> Complex64) -> Self {
        let spec = self
            .spectrum()
            .iter()
            .enumerate()
            .map(|(k, &v)| f(k, self.grid.frequency(k), v))
            .collect();
        Self::from_spectrum(self.grid.clone(), spec).unwrap()
    }

    /// Spectral derivative: multiplication by `i xi`. The lone Nyquist mode has
    /// no conjugate partner and is dropped to keep real fields real.
    pub fn derivative(&self) -> Self {
        let n = self.grid.len();
        self.map_spectrum(|k, xi, v| {
            if k == n / 2 {
                Complex64::default()
            } else {
                Complex64::new(0.0, xi) * v
            }
        })
    }

    /// Band-limited evaluation at an arbitrary point (trigonometric
    /// interpolation through the stored spectrum).
    pub fn eval_at(&self, x: f64) -> Complex64 {
        let spec = self.spectrum();
        let scale = self.grid.freq_spacing() / (2.0 * std::f64::consts::PI);
        let mut acc = Complex64::default();
        for (k, &c) in spec.iter().enumerate() {
            let xi = self.grid.frequency(k);
            acc += c * Complex64::new(0.0, x * xi).exp();
        }
        acc * scale
    }

    /// Physical-space L2 norm, `sqrt(h sum |g|^2)`.
    pub fn l2_norm(&self) -> f64 {
        let h = self.grid.spacing();
        (self.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * h).sqrt()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        let v = self
            .values()
            .iter()
            .zip(other.values())
            .map(|(a, b)| a + b)
            .collect();
        Self::from_values(self.grid.clone(), v).unwrap()
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        let v = self
            .values()
            .iter()
            .zip(other.values())
            .map(|(a, b)| a - b)
            .collect();
        Self::from_values(self.grid.clone(), v).unwrap()
    }

    pub fn scale(&self, c: f64) -> Self {
        let v = self.values().iter().map(|a| a * c).collect();
        Self::from_values(self.grid.clone(), v).unwrap()
    }

    /// Zero every mode with `|xi|` above the 2/3-rule cutoff.
    pub fn dealias_23(&self) -> Self {
        let cut = self.grid.dealias_cutoff();
        self.map_spectrum(|_, xi, v| if xi.abs() > cut { Complex64::default() } else { v })
    }
}

/// Complex samples on a [`SpaceTimeGrid`] (row-major, time outer) plus the
/// cached `(xi, tau)` spectrum in the same layout.
#[derive(Debug, Clone)]
pub struct SpaceTimeField {
    grid: SpaceTimeGrid,
    values: OnceLock<Vec<Complex64>>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl SpaceTimeField {
    pub fn from_values(grid: SpaceTimeGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(CoreError::InvalidArgument(format!(
                "value count {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        let cell = OnceLock::new();
        let _ = cell.set(values);
        Ok(Self { grid, values: cell, spectrum: OnceLock::new() })
    }

    pub fn from_spectrum(grid: SpaceTimeGrid, spectrum: Vec<Complex64>) -> Result<Self> {
        if spectrum.len() != grid.len() {
            return Err(CoreError::InvalidArgument(format!(
                "spectrum count {} does not match grid size {}",
                spectrum.len(),
                grid.len()
            )));
        }
        let cell = OnceLock::new();
        let _ = cell.set(spectrum);
        Ok(Self { grid, values: OnceLock::new(), spectrum: cell })
    }

    pub fn from_fn(grid: SpaceTimeGrid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let nx = grid.space().len();
        let mut values = vec![Complex64::default(); grid.len()];
        for it in 0..grid.n_time() {
            let t = grid.time_node(it);
            for ix in 0..nx {
                values[it * nx + ix] = f(grid.space().node(ix), t);
            }
        }
        Self::from_values(grid, values).unwrap()
    }

    pub fn zeros(grid: SpaceTimeGrid) -> Self {
        let n = grid.len();
        Self::from_values(grid, vec![Complex64::default(); n]).unwrap()
    }

    pub fn grid(&self) -> &SpaceTimeGrid {
        &self.grid
    }

    /// Transform values -> spectrum: forward in `x` along each time row, then
    /// forward in `t` down each frequency column.
    fn compute_spectrum(&self) -> Vec<Complex64> {
        let nx = self.grid.space().len();
        let nt = self.grid.n_time();
        let mut buf = self.values.get().expect("one representation present").clone();
        let hx = self.grid.space().spacing();
        par::maybe_par_chunks_mut(&mut buf, nx, |_, row| forward_row(row, hx));
        // time direction: gather columns, transform, scatter back
        let ht = self.grid.time_spacing();
        let cols: Vec<usize> = (0..nx).collect();
        let transformed = par::maybe_par_map(cols, |ix| {
            let mut col: Vec<Complex64> = (0..nt).map(|it| buf[it * nx + ix]).collect();
            forward_row(&mut col, ht);
            col
        });
        let mut out = vec![Complex64::default(); buf.len()];
        for (ix, col) in transformed.iter().enumerate() {
            for (im, &v) in col.iter().enumerate() {
                out[im * nx + ix] = v;
            }
        }
        out
    }

    fn compute_values(&self) -> Vec<Complex64> {
        let nx = self.grid.space().len();
        let nt = self.grid.n_time();
        let spec = self.spectrum.get().expect("one representation present");
        let dtau = self.grid.time_freq_spacing();
        let cols: Vec<usize> = (0..nx).collect();
        let back = par::maybe_par_map(cols, |ik| {
            let mut col: Vec<Complex64> = (0..nt).map(|im| spec[im * nx + ik]).collect();
            inverse_row(&mut col, dtau);
            col
        });
        let mut buf = vec![Complex64::default(); spec.len()];
        for (ik, col) in back.iter().enumerate() {
            for (it, &v) in col.iter().enumerate() {
                buf[it * nx + ik] = v;
            }
        }
        let dxi = self.grid.space().freq_spacing();
        par::maybe_par_chunks_mut(&mut buf, nx, |_, row| inverse_row(row, dxi));
        buf
    }

    pub fn values(&self) -> &[Complex64] {
        self.values.get_or_init(|| self.compute_values())
    }

    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum.get_or_init(|| self.compute_spectrum())
    }

    pub fn value(&self, ix: usize, it: usize) -> Complex64 {
        self.values()[it * self.grid.space().len() + ix]
    }

    /// One time row as a [`SpectralField`] on the spatial grid.
    pub fn space_slice(&self, it: usize) -> SpectralField {
        let nx = self.grid.space().len();
        let row = self.values()[it * nx..(it + 1) * nx].to_vec();
        SpectralField::from_values(self.grid.space().clone(), row).unwrap()
    }

    /// All values at a fixed spatial node, ordered by time.
    pub fn time_series(&self, ix: usize) -> Vec<Complex64> {
        let nx = self.grid.space().len();
        (0..self.grid.n_time()).map(|it| self.values()[it * nx + ix]).collect()
    }

    /// New field with spectrum `f(xi, tau, v)`.
    pub fn map_spectrum(&self, f: impl Fn(f64, f64, Complex64) -> Complex64 + Sync + Send) -> Self {
        let nx = self.grid.space().len();
        let mut spec = self.spectrum().to_vec();
        let grid = self.grid.clone();
        par::maybe_par_chunks_mut(&mut spec, nx, |im, row| {
            let tau = grid.time_frequency(im);
            for (k, v) in row.iter_mut().enumerate() {
                *v = f(grid.space().frequency(k), tau, *v);
            }
        });
        Self::from_spectrum(self.grid.clone(), spec).unwrap()
    }

    /// Pointwise (physical-space) map `f(x, t, v)`.
    pub fn map_values(&self, f: impl Fn(f64, f64, Complex64) -> Complex64 + Sync + Send) -> Self {
        let nx = self.grid.space().len();
        let mut vals = self.values().to_vec();
        let grid = self.grid.clone();
        par::maybe_par_chunks_mut(&mut vals, nx, |it, row| {
            let t = grid.time_node(it);
            for (ix, v) in row.iter_mut().enumerate() {
                *v = f(grid.space().node(ix), t, *v);
            }
        });
        Self::from_values(self.grid.clone(), vals).unwrap()
    }

    /// Spatial spectral derivative applied on every time row.
    pub fn derivative_x(&self) -> Self {
        self.map_spectrum(|xi, _, v| Complex64::new(0.0, xi) * v)
            .zero_nyquist_x()
    }

    fn zero_nyquist_x(&self) -> Self {
        let nx = self.grid.space().len();
        let mut spec = self.spectrum().to_vec();
        for im in 0..self.grid.n_time() {
            spec[im * nx + nx / 2] = Complex64::default();
        }
        Self::from_spectrum(self.grid.clone(), spec).unwrap()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        let v = self
            .values()
            .iter()
            .zip(other.values())
            .map(|(a, b)| a + b)
            .collect();
        Self::from_values(self.grid.clone(), v).unwrap()
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        let v = self
            .values()
            .iter()
            .zip(other.values())
            .map(|(a, b)| a - b)
            .collect();
        Self::from_values(self.grid.clone(), v).unwrap()
    }

    pub fn scale(&self, c: f64) -> Self {
        let v = self.values().iter().map(|a| a * c).collect();
        Self::from_values(self.grid.clone(), v).unwrap()
    }

    /// Pointwise product of two fields on the same grid.
    pub fn mul_pointwise(&self, other: &Self) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        let v = self
            .values()
            .iter()
            .zip(other.values())
            .map(|(a, b)| a * b)
            .collect();
        Self::from_values(self.grid.clone(), v).unwrap()
    }

    /// 2/3-rule dealiasing in the spatial variable.
    pub fn dealias_23_x(&self) -> Self {
        let cut = self.grid.space().dealias_cutoff();
        self.map_spectrum(move |xi, _, v| if xi.abs() > cut { Complex64::default() } else { v })
    }

    /// Physical-space L2 norm over the full box,
    /// `sqrt(hx ht sum |g|^2)`.
    pub fn l2_norm(&self) -> f64 {
        let w = self.grid.space().spacing() * self.grid.time_spacing();
        (self.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * w).sqrt()
    }
}
