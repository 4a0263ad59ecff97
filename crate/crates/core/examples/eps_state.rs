//! Builds entangled-pair states on small rings and checks their structure.
use spt_index::diagnostics::entanglement_entropy;
use spt_index::fixtures::parse_rep;
use spt_index::mps::build_eps_mps;
use spt_index::state::{build_eps_dense, RingArc};

fn main() -> spt_index::Result<()> {
    for (name, n) in [("pauli", 8), ("Z3xZ3", 5)] {
        let rho = parse_rep(name)?;
        let psi = build_eps_dense(&rho, n)?;
        println!("{name} on {n} sites: dim {} norm {:.12} invariance residual {:.1e}", psi.spec().total_dim(), psi.norm(), psi.invariance_residual()?);
        for len in 1..=n / 2 {
            let s = entanglement_entropy(&psi, &RingArc::new(0, len).sites(n))?;
            println!("  S[0,{len}) = {s:.12} (2 ln D = {:.12})", 2.0 * (rho.dim() as f64).ln());
        }
        // same state from the uniform MPS
        let amps = build_eps_mps(&rho).ring_amplitudes(n);
        let overlap: f64 = psi.amplitudes().iter().zip(amps.iter()).map(|(a, b)| a.conj() * b).sum::<num_complex::Complex64>().norm();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        println!("  |<dense|mps>| / |mps| = {:.12}", overlap / norm);
    }
    Ok(())
}
