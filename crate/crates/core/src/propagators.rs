//! Airy propagator groups and the Duhamel integral.
//!
//! The groups are exact Fourier multipliers `exp(i c t xi^3)` with dispersion
//! coefficient `c = 1` for the first equation and `c = alpha` for the second.
//! The Duhamel term uses a trapezoid-class rule (second order in the forcing,
//! which is merely continuous at the cutoff edges, so a higher-order rule
//! would not buy its nominal order); the propagator phase itself is integrated
//! exactly per mode, keeping large `xi^3` out of the error constant.

use crate::cutoff;
use crate::error::{CoreError, Result};
use crate::field::{Complex64, SpaceTimeField, SpectralField};
use crate::par;

/// Evolve a spatial field by the Airy group: spectrum times `exp(i c t xi^3)`.
pub fn airy_evolve(f: &SpectralField, t: f64, c: f64) -> Result<SpectralField> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(CoreError::InvalidArgument(format!(
            "dispersion coefficient c = {c} outside (0, 1]"
        )));
    }
    Ok(f.map_spectrum(|_, xi, v| v * Complex64::new(0.0, c * t * xi * xi * xi).exp()))
}

/// Sample the Airy flow of `f` on every node of a space-time grid.
pub fn airy_flow(
    f: &SpectralField,
    grid: &crate::grid::SpaceTimeGrid,
    c: f64,
) -> Result<SpaceTimeField> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(CoreError::InvalidArgument(format!(
            "dispersion coefficient c = {c} outside (0, 1]"
        )));
    }
    if grid.space() != f.grid() {
        return Err(CoreError::InvalidArgument(
            "spatial grids of field and space-time grid differ".into(),
        ));
    }
    let nx = grid.space().len();
    let nt = grid.n_time();
    let spec = f.spectrum().to_vec();
    let rows = par::maybe_par_map((0..nt).collect(), |it| {
        let t = grid.time_node(it);
        let evolved: Vec<Complex64> = spec
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let xi = grid.space().frequency(k);
                v * Complex64::new(0.0, c * t * xi * xi * xi).exp()
            })
            .collect();
        let slice = SpectralField::from_spectrum(grid.space().clone(), evolved).unwrap();
        slice.values().to_vec()
    });
    let mut values = Vec::with_capacity(nx * nt);
    for row in rows {
        values.extend_from_slice(&row);
    }
    SpaceTimeField::from_values(grid.clone(), values)
}

/// First two moments of `exp(-i om u)` against `{1, u}` over `[0, dt]`,
/// series-evaluated near `om dt = 0` to dodge cancellation.
pub(crate) fn phase_moments(om: f64, dt: f64) -> (Complex64, Complex64) {
    let z = om * dt;
    if z.abs() < 1e-3 {
        // I0 = dt sum (-iz)^n / (n! (n+1)),  I1 = dt^2 sum (-iz)^n / (n! (n+2))
        let miz = Complex64::new(0.0, -z);
        let mut term = Complex64::new(1.0, 0.0);
        let mut i0 = Complex64::new(1.0, 0.0);
        let mut i1 = Complex64::new(0.5, 0.0);
        for n in 1..=8 {
            term *= miz / n as f64;
            i0 += term / (n + 1) as f64;
            i1 += term / (n + 2) as f64;
        }
        (i0 * dt, i1 * dt * dt)
    } else {
        let e = Complex64::new(0.0, -z).exp();
        let i0 = (Complex64::new(1.0, 0.0) - e) / Complex64::new(0.0, om);
        let i1 = e * Complex64::new(1.0 / (om * om), dt / om) - 1.0 / (om * om);
        (i0, i1)
    }
}

/// Duhamel integral `int_0^t W^{t-t'} F(., t') dt'` evaluated at every grid
/// time, per Fourier mode. The quadrature is a product trapezoid: the
/// propagator phase `exp(-i c t' xi^3)` is integrated exactly against the
/// piecewise-linear interpolant of `F_hat(xi, .)`, so the rule is second order
/// in the forcing with no stiffness from large `xi^3`. For `t < 0` the
/// orientation of `int_0^t` flips the sign of the backward sum.
pub fn duhamel_integral(forcing: &SpaceTimeField, c: f64) -> Result<SpaceTimeField> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(CoreError::InvalidArgument(format!(
            "dispersion coefficient c = {c} outside (0, 1]"
        )));
    }
    let grid = forcing.grid().clone();
    let nx = grid.space().len();
    let nt = grid.n_time();
    let dt = grid.time_spacing();
    let i0 = grid.time_zero_index();

    // hybrid representation: forward transform in x only, per time row
    let mut hat = forcing.values().to_vec();
    par::maybe_par_chunks_mut(&mut hat, nx, |_, row| {
        let f = SpectralField::from_values(grid.space().clone(), row.to_vec()).unwrap();
        row.copy_from_slice(f.spectrum());
    });

    let cols = par::maybe_par_map((0..nx).collect(), |k| {
        let xi = grid.space().frequency(k);
        let om = c * xi * xi * xi;
        let (m0, m1) = phase_moments(om, dt);
        let fk = |it: usize| hat[it * nx + k];
        // integral of exp(-i om t') F_hat over [t_it, t_it + dt]
        let interval = |it: usize| {
            let ta = grid.time_node(it);
            let fa = fk(it);
            let slope = (fk(it + 1) - fa) / dt;
            Complex64::new(0.0, -om * ta).exp() * (fa * m0 + slope * m1)
        };
        let mut cum = vec![Complex64::default(); nt];
        for it in i0 + 1..nt {
            cum[it] = cum[it - 1] + interval(it - 1);
        }
        for it in (0..i0).rev() {
            cum[it] = cum[it + 1] - interval(it);
        }
        (0..nt)
            .map(|it| {
                let t = grid.time_node(it);
                cum[it] * Complex64::new(0.0, om * t).exp()
            })
            .collect::<Vec<_>>()
    });

    // back to physical space, row by row
    let mut spec_rows = vec![Complex64::default(); nx * nt];
    for (k, col) in cols.iter().enumerate() {
        for (it, &v) in col.iter().enumerate() {
            spec_rows[it * nx + k] = v;
        }
    }
    par::maybe_par_chunks_mut(&mut spec_rows, nx, |_, row| {
        let f = SpectralField::from_spectrum(grid.space().clone(), row.to_vec()).unwrap();
        row.copy_from_slice(f.values());
    });
    SpaceTimeField::from_values(grid, spec_rows)
}

/// Pointwise multiplication by the canonical bump `eta(t / scale)`.
pub fn time_cutoff(field: &SpaceTimeField, scale: f64) -> Result<SpaceTimeField> {
    if !(scale > 0.0) {
        return Err(CoreError::InvalidArgument(format!(
            "cutoff scale must be positive, got {scale}"
        )));
    }
    Ok(field.map_values(|_, t, v| v * cutoff::eta_scaled(t, scale)))
}
