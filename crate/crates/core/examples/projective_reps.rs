//! Clock-shift and twisted regular representations with their cocycles.
use spt_index::extraction::classify;
use spt_index::projective::{clock_shift_rep, cocycle_of_rep, dual_rep, is_irreducible, tensor_rep, twisted_regular_rep};

fn main() -> spt_index::Result<()> {
    for (n, q) in [(2, 1), (3, 1), (3, 2), (4, 1)] {
        let rho = clock_shift_rep(n, q)?;
        let (_, class, err) = classify(&cocycle_of_rep(rho.group(), rho.matrices())?, 1e-6)?;
        println!(
            "clock-shift n={n} q={q}: dim {} irreducible={} class index={:?} trivial={} snap error {err:.1e}",
            rho.dim(),
            is_irreducible(&rho)?,
            class.index,
            class.is_trivial()
        );
    }
    let pauli = clock_shift_rep(2, 1)?;
    let pair = tensor_rep(&pauli, &dual_rep(&pauli))?;
    let (_, class, _) = classify(pair.cocycle(), 1e-6)?;
    println!("pauli (x) dual: dim {} trivial={}", pair.dim(), class.is_trivial());

    let regular = twisted_regular_rep(pauli.cocycle())?;
    println!("twisted regular rep of the pauli cocycle: dim {}, relation residual {:.1e}", regular.dim(), regular.relation_residual());
    Ok(())
}
