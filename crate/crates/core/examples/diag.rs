use mb_halfline::analysis::conservation_drift;
use mb_halfline::field::SpectralField;
use mb_halfline::grid::Grid1D;
use mb_halfline::solver::{picard_solve_ivp, SolverParams};

fn main() {
    let space = Grid1D::new(256, 20.0).unwrap();
    let u0 = SpectralField::from_real_fn(space.clone(), |x| 0.1 * (-x * x).exp());
    let v0 = SpectralField::from_real_fn(space.clone(), |x| 0.1 * (-x * x / 2.0).exp());
    let mut params = SolverParams::reference(0.1);
    params.nx = 256;
    params.nt = 256;
    params.picard_tol = 1e-12;
    let run = picard_solve_ivp(&u0, &v0, 0.5, 1.0, &params).unwrap();
    println!(
        "accepted T = {}, halvings = {}, iters = {}",
        run.report.accepted_time_horizon,
        run.report.halvings,
        run.report.iterations.len()
    );
    let rep = conservation_drift(&run.u, &run.v, 0.5, run.report.accepted_time_horizon);
    println!("drift over accepted window: {:?}", rep.max_rel_drift);
}
