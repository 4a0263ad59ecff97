//! Classes multiply under stacking; a pair state stacked with its dual is
//! trivial.
use spt_index::extraction::{stacked_index_mps, Tolerances};
use spt_index::fixtures::Fixture;

fn main() -> spt_index::Result<()> {
    let tol = Tolerances::default();
    let pairs = [
        ("eps:pauli", "eps:pauli"),
        ("eps:pauli", "eps:dual:pauli"),
        ("eps:clock-shift:3:1", "eps:clock-shift:3:1"),
        ("eps:clock-shift:3:1", "eps:clock-shift:3:2"),
        ("eps:Z3xZ3", "charged:Z3xZ3"),
    ];
    for (a, b) in pairs {
        let (fa, fb) = (Fixture::parse(a)?, Fixture::parse(b)?);
        let r = stacked_index_mps(&fa.mps()?, &fb.mps()?, &tol)?;
        println!(
            "{a} x {b}: {:?} * {:?} -> {:?}, product law {}",
            r.first.class.index, r.second.class.index, r.stacked.class.index, r.product_law
        );
    }
    Ok(())
}
