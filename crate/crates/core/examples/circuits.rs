//! Samples equivariant brickwork circuits, applies them, undoes them, and
//! shows the light cone of the restricted symmetry.
use spt_index::circuits::{apply_circuit, build_brickwork, light_cone_defect};
use spt_index::fixtures::Fixture;
use spt_index::state::RingArc;

fn main() -> spt_index::Result<()> {
    let psi = Fixture::parse("eps:pauli")?.dense(10)?;
    for depth in 1..=3 {
        let c = build_brickwork(psi.spec(), depth, 5)?;
        let phi = apply_circuit(&psi, &c)?;
        let back = apply_circuit(&phi, &c.inverse())?;
        println!(
            "depth {depth}: {} gates, max equivariance residual {:.1e}, invariance after {:.1e}, |<psi|C^-1 C psi>| = {:.12}",
            c.gate_count(),
            c.max_residual(),
            phi.invariance_residual()?,
            psi.overlap(&back).norm()
        );
    }
    let c = build_brickwork(psi.spec(), 1, 5)?;
    for d in light_cone_defect(&psi, &c, RingArc::new(0, 5), &[1, 2])? {
        println!("depth 1, halfwidth {}: factorization {:.1e}, composition {:.1e}", d.w, d.factorization, d.composition);
    }
    Ok(())
}
