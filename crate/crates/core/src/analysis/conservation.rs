//! The four conserved functionals of the coupled system and their drift
//! under a whole-line evolution: the two masses, the `L^2` energy, and the
//! Hamiltonian `(1/2) int u_x^2 + alpha v_x^2 - u v^2`.

use crate::field::{SpaceTimeField, SpectralField};
use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConservedQuantities {
    pub mass_u: f64,
    pub mass_v: f64,
    pub energy: f64,
    pub hamiltonian: f64,
}

impl ConservedQuantities {
    pub fn as_array(&self) -> [f64; 4] {
        [self.mass_u, self.mass_v, self.energy, self.hamiltonian]
    }
}

/// Box quadrature of the four functionals for real-valued fields (imaginary
/// round-off parts are ignored).
pub fn conserved_quantities(u: &SpectralField, v: &SpectralField, alpha: f64) -> ConservedQuantities {
    let h = u.grid().spacing();
    let ux = u.derivative();
    let vx = v.derivative();
    let mut mass_u = 0.0;
    let mut mass_v = 0.0;
    let mut energy = 0.0;
    let mut ham = 0.0;
    for j in 0..u.grid().len() {
        let uj = u.values()[j].re;
        let vj = v.values()[j].re;
        mass_u += uj;
        mass_v += vj;
        energy += uj * uj + vj * vj;
        let uxj = ux.values()[j].re;
        let vxj = vx.values()[j].re;
        ham += uxj * uxj + alpha * vxj * vxj - uj * vj * vj;
    }
    ConservedQuantities {
        mass_u: mass_u * h,
        mass_v: mass_v * h,
        energy: energy * h,
        hamiltonian: 0.5 * ham * h,
    }
}

/// Drift of each functional over the monitored window, relative to
/// `max(|Q(0)|, 1)`.
#[derive(Debug, Clone, Serialize)]
pub struct DriftReport {
    pub times: Vec<f64>,
    pub series: Vec<ConservedQuantities>,
    /// `max_t |Q(t) - Q(0)| / max(|Q(0)|, 1)` for (mass_u, mass_v, energy, H).
    pub max_rel_drift: [f64; 4],
}

/// Monitor the conserved quantities of a whole-line run at every grid time in
/// `[0, t_max]`.
pub fn conservation_drift(
    u: &SpaceTimeField,
    v: &SpaceTimeField,
    alpha: f64,
    t_max: f64,
) -> DriftReport {
    let grid = u.grid();
    let i0 = grid.time_zero_index();
    let mut times = Vec::new();
    let mut series = Vec::new();
    for it in i0..grid.n_time() {
        let t = grid.time_node(it);
        if t > t_max + 1e-12 {
            break;
        }
        times.push(t);
        series.push(conserved_quantities(&u.space_slice(it), &v.space_slice(it), alpha));
    }
    let q0 = series[0].as_array();
    let mut max_rel = [0.0f64; 4];
    for q in &series {
        let qa = q.as_array();
        for k in 0..4 {
            let rel = (qa[k] - q0[k]).abs() / q0[k].abs().max(1.0);
            max_rel[k] = max_rel[k].max(rel);
        }
    }
    DriftReport { times, series, max_rel_drift: max_rel }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Complex64;
    use crate::grid::Grid1D;
    use crate::solver::{picard_solve_ivp, SolverParams};

    #[test]
    fn zero_fields_have_zero_quantities() {
        let g = Grid1D::new(128, 15.0).unwrap();
        let z = SpectralField::zeros(g);
        let q = conserved_quantities(&z, &z.clone(), 0.5);
        assert_eq!(q.as_array(), [0.0; 4]);
    }

    #[test]
    fn gaussian_closed_forms() {
        // u = exp(-x^2/2), v = 0:
        //   mass_u = sqrt(2 pi), H = (1/2) int x^2 exp(-x^2) = sqrt(pi)/4
        let g = Grid1D::new(1024, 20.0).unwrap();
        let u = SpectralField::from_real_fn(g.clone(), |x| (-x * x / 2.0).exp());
        let v = SpectralField::zeros(g);
        let q = conserved_quantities(&u, &v, 0.7);
        let mass = (2.0 * std::f64::consts::PI).sqrt(); // 2.5066282746310002
        let ham = std::f64::consts::PI.sqrt() / 4.0; // 0.44311346272637897
        assert!((q.mass_u - mass).abs() < 1e-10, "mass {}", q.mass_u);
        assert!((q.hamiltonian - ham).abs() < 1e-10, "H {}", q.hamiltonian);
        assert_eq!(q.mass_v, 0.0);
    }

    #[test]
    fn translation_invariance() {
        let g = Grid1D::new(256, 20.0).unwrap();
        let u = SpectralField::from_real_fn(g.clone(), |x| (-x * x / 2.0).exp() * (1.0 + 0.3 * x.sin()));
        let v = SpectralField::from_real_fn(g.clone(), |x| 0.5 * (-x * x / 3.0).exp());
        let q = conserved_quantities(&u, &v, 0.5);
        // circular shift by 17 nodes
        let shift = |f: &SpectralField| {
            let n = f.grid().len();
            let vals: Vec<Complex64> = (0..n).map(|j| f.values()[(j + 17) % n]).collect();
            SpectralField::from_values(f.grid().clone(), vals).unwrap()
        };
        let qs = conserved_quantities(&shift(&u), &shift(&v), 0.5);
        for (a, b) in q.as_array().iter().zip(qs.as_array()) {
            assert!((a - b).abs() < 1e-10 * a.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn small_ivp_drift_is_small_and_refines() {
        // coarse smoke test; the acceptance suite runs the reference version
        let g = Grid1D::new(128, 20.0).unwrap();
        let u0 = SpectralField::from_real_fn(g.clone(), |x| 0.1 * (-x * x).exp());
        let v0 = SpectralField::from_real_fn(g.clone(), |x| 0.1 * (-x * x / 2.0).exp());
        let drift_at = |nt: usize| {
            let mut params = SolverParams::coarse(0.05);
            params.nt = nt;
            params.picard_tol = 1e-11;
            let out = picard_solve_ivp(&u0, &v0, 0.5, 1.0, &params).unwrap();
            let rep = conservation_drift(&out.u, &out.v, 0.5, 0.05);
            rep.max_rel_drift
        };
        let d64 = drift_at(64);
        let d128 = drift_at(128);
        assert!(d64[2] < 1e-5, "energy drift {:.3e}", d64[2]);
        // refinement shrinks the energy drift
        assert!(
            d128[2] < d64[2] || d64[2] < 1e-12,
            "drift did not refine: {:.3e} -> {:.3e}",
            d64[2],
            d128[2]
        );
    }
}
