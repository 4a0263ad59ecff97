//! Entropy profiles, Schmidt tails, closeness measures and the Pinsker and
//! Fannes checks on small states.
use rand::SeedableRng;

use spt_index::circuits::{apply_circuit, build_brickwork};
use spt_index::diagnostics::{closeness, fannes_bound, pinsker_check, schmidt_tail, von_neumann, EntropyProfile};
use spt_index::fixtures::Fixture;
use spt_index::linalg::random_density;
use spt_index::state::RingArc;

fn main() -> spt_index::Result<()> {
    let psi = Fixture::parse("product:Z2xZ2")?.dense(8)?;
    let phi = apply_circuit(&psi, &build_brickwork(psi.spec(), 2, 9)?)?;
    let profile = EntropyProfile::cuts(&phi, 0)?;
    print!("{}", profile.to_csv());
    println!("bound 2 d ln 4 = {:.4}", 2.0 * 2.0 * 4f64.ln());

    let tail = schmidt_tail(&phi, &RingArc::new(0, 4).sites(8))?;
    println!("Schmidt rank across half the ring: {}", tail.rank());

    let p = pinsker_check(&phi, &[0, 1], &[3, 4])?;
    println!("I = {:.4}, |rho_AB - rho_A rho_B|_1 = {:.4} <= {:.4}: {}", p.mutual_information, p.distance, p.bound, p.holds);

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let a = random_density(3, &mut rng);
    let b = a.mapv(|z| z * 0.95) + random_density(3, &mut rng).mapv(|z| z * 0.05);
    let c = closeness(&a, &b)?;
    let gap = (von_neumann(&a)? - von_neumann(&b)?).abs();
    println!("T = {:.4}, F = {:.4}, |dS| = {gap:.4} <= Fannes {:.4}", c.trace_distance, c.fidelity, fannes_bound(c.trace_distance, 3)?);
    Ok(())
}
