//! Index from the transfer operator of uniform MPS fixtures, with and without
//! a uniform equivariant circuit.
use spt_index::extraction::Tolerances;
use spt_index::fixtures::{mps_route, Fixture};

fn main() -> spt_index::Result<()> {
    let tol = Tolerances::default();
    for name in ["eps:pauli", "eps:clock-shift:3:1", "eps:clock-shift:3:2", "charged:Z3xZ3"] {
        let fx = Fixture::parse(name)?;
        for depth in [0, 2] {
            let r = mps_route(&fx, depth, 1, false, &tol)?;
            println!(
                "{name:<22} depth={depth} bond={} class index={:?} trivial={} residual={:.1e} scalar defect={:.1e}",
                r.parameters["bond"],
                r.class.index,
                r.class.is_trivial(),
                r.residual,
                r.scalar_defect
            );
        }
    }
    Ok(())
}
