//! One symmetric layer that disentangles a chain of charged Z2 sites.
use spt_index::circuits::{swindle_demo, z2_swindle_fixture};

fn main() -> spt_index::Result<()> {
    let (g, rep, w, w_prime) = z2_swindle_fixture()?;
    let demo = swindle_demo(g, &rep, &w, &w_prime, 4)?;
    println!("sites {:?}", demo.sites);
    println!("invariance defect before: {:?}", demo.invariance_before);
    println!("invariance defect after:  {:?}", demo.invariance_defects);
    println!("purity defect after:      {:?}", demo.purity_defects);
    println!("passed = {}", demo.passed(1e-9));
    Ok(())
}
