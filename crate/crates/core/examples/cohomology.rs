//! Enumerates H^2(G, U(1)) for a few small groups and compares two cocycles.
use std::sync::Arc;

use spt_index::cohomology::{cohomologous, enumerate_h2};
use spt_index::group::{builtin_group, cyclic_group, direct_product, dihedral_group};
use spt_index::projective::{cocycle_of_rep, clock_shift_rep};

fn main() -> spt_index::Result<()> {
    let groups = [
        ("Z6", cyclic_group(6)?),
        ("Z2xZ2", builtin_group("Z2xZ2")?),
        ("Z2xZ4", direct_product(&cyclic_group(2)?, &cyclic_group(4)?)),
        ("Z3xZ3", builtin_group("Z3xZ3")?),
        ("D4", dihedral_group(4)?),
    ];
    for (name, g) in groups {
        let h2 = enumerate_h2(&Arc::new(g))?;
        println!("{name:<6} |H2| = {} ({})", h2.len(), h2.structure());
    }

    // q = 1 and q = 4 = 1 mod 3 give the same class, q = 2 does not
    let a = clock_shift_rep(3, 1)?;
    let g = a.group().clone();
    let nu1 = cocycle_of_rep(&g, a.matrices())?;
    for q in [2, 4] {
        let b = clock_shift_rep(3, q)?;
        let nu = cocycle_of_rep(&g, b.matrices())?;
        let (s1, _, _) = spt_index::extraction::classify(&nu1, 1e-6)?;
        let (s2, _, _) = spt_index::extraction::classify(&nu, 1e-6)?;
        println!("clock-shift q=1 vs q={q}: cohomologous = {}", cohomologous(&s1, &s2)?.is_some());
    }
    Ok(())
}
