//! Index from end-window unitaries of the restricted symmetry on a dense
//! ring, compared with the MPS route.
use spt_index::extraction::{compare_routes, Tolerances};
use spt_index::fixtures::{mps_route, window_ring, window_route, CircuitChoice, Fixture};
use spt_index::state::RingArc;

fn main() -> spt_index::Result<()> {
    let tol = Tolerances::default();
    for (name, depth) in [("eps:pauli", 0), ("eps:pauli", 1), ("eps:Z3xZ3", 0), ("product:Z2xZ2", 1)] {
        let fx = Fixture::parse(name)?;
        let w = depth + 1;
        let n = window_ring(&fx, w);
        let choice = CircuitChoice { depth, seed: 2, uniform: true, inject: false };
        let (win, inv) = window_route(&fx, n, RingArc::new(0, n / 2), w, choice, &tol)?;
        let mps = mps_route(&fx, depth, 2, false, &tol)?;
        let (agree, _) = compare_routes(&mps, &win)?;
        println!(
            "{name:<14} N={n} w={w} depth={depth}: window residual {:.1e}, invariance {:.1e}, routes agree = {agree}",
            win.residual, inv
        );
    }
    Ok(())
}
