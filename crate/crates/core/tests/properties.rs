//! Randomized properties: gauge covariance, closeness measures, entropy
//! inequalities, gate equivariance, light cones and arc independence.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spt_index::circuits::{build_brickwork, equivariance_residual, light_cone_defect, sample_equivariant_gate};
use spt_index::cocycle::{coboundary, Cochain1};
use spt_index::cocycle::SNAP_TOL;
use spt_index::cohomology::cohomologous;
use spt_index::diagnostics::{closeness, fannes_bound, fannes_regime, fidelity, mutual_information, trace_distance, von_neumann};
use spt_index::extraction::{classify, extract_mps_index, extract_window_index, Tolerances};
use spt_index::fixtures::{parse_rep, Fixture};
use spt_index::group::dihedral_group;
use spt_index::linalg::{ginibre, haar_unitary, random_density, Mat};
use spt_index::mps::SymmetricMps;
use spt_index::projective::{cocycle_of_rep, regauge, twisted_regular_rep};
use spt_index::state::{DenseState, RingArc, SiteSpec};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Qubit trace distance from Bloch vectors, `|r1 - r2| / 2`.
fn bloch_distance(a: &Mat, b: &Mat) -> f64 {
    let bloch = |r: &Mat| [2.0 * r[(0, 1)].re, -2.0 * r[(0, 1)].im, (r[(0, 0)] - r[(1, 1)]).re];
    let (x, y) = (bloch(a), bloch(b));
    0.5 * x.iter().zip(&y).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn regauging_moves_the_cocycle_by_a_coboundary(vals in prop::collection::vec(0u64..12, 4)) {
        let rho = parse_rep("pauli").unwrap();
        let g = rho.group().clone();
        let mut v = vals;
        v[g.identity()] = 0;
        let mu = Cochain1::exact(g.clone(), 12, v).unwrap();
        let moved = regauge(&rho, &mu).unwrap();
        let nu = cocycle_of_rep(&g, rho.matrices()).unwrap();
        let nu2 = cocycle_of_rep(&g, moved.matrices()).unwrap();
        let dmu = coboundary(&mu);
        for a in 0..4 {
            for b in 0..4 {
                let want = nu.phase(a, b) / dmu.phase(a, b);
                prop_assert!((nu2.phase(a, b) - want).norm() < 1e-9);
            }
        }
        prop_assert_eq!(classify(&nu2, SNAP_TOL).unwrap().1, classify(&nu, SNAP_TOL).unwrap().1);
        // and the index of the pair state does not see the gauge
        let tol = Tolerances::default();
        let r0 = extract_mps_index(&SymmetricMps::eps(&rho).unwrap(), serde_json::json!({}), &tol).unwrap();
        let r1 = extract_mps_index(&SymmetricMps::eps(&moved).unwrap(), serde_json::json!({}), &tol).unwrap();
        prop_assert!(cohomologous(&r0.snapped, &r1.snapped).unwrap().is_some());
    }

    #[test]
    fn metric_properties(seed in 0u64..10_000, dim in 2usize..5) {
        let mut r = rng(seed);
        let (a, b, c) = (random_density(dim, &mut r), random_density(dim, &mut r), random_density(dim, &mut r));
        let ab = trace_distance(&a, &b).unwrap();
        prop_assert!((ab - trace_distance(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!(trace_distance(&a, &a).unwrap() < 1e-12);
        prop_assert!(ab <= trace_distance(&a, &c).unwrap() + trace_distance(&c, &b).unwrap() + 1e-12);
        prop_assert!((0.0..=1.0).contains(&ab));
        let f = fidelity(&a, &b).unwrap();
        prop_assert!((f - fidelity(&b, &a).unwrap()).abs() < 1e-9);
        prop_assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn mutual_information_is_nonnegative(seed in 0u64..10_000) {
        // random state on three qubits: subadditivity S(AB) <= S(A) + S(B)
        let g = Arc::new(spt_index::group::cyclic_group(1).unwrap());
        let spec = Arc::new(SiteSpec::uniform(g, vec![Mat::eye(2)], 3).unwrap());
        let v = ginibre(8, 1, &mut rng(seed)).column(0).to_owned();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let psi = DenseState::new(spec, v.mapv(|z| z / n)).unwrap();
        prop_assert!(mutual_information(&psi, &[0], &[1]).unwrap() >= -1e-10);
        prop_assert!(mutual_information(&psi, &[0], &[1, 2]).unwrap() >= -1e-10);
        let s0 = von_neumann(&psi.reduced_density(&[0]).unwrap()).unwrap();
        let s12 = von_neumann(&psi.reduced_density(&[1, 2]).unwrap()).unwrap();
        prop_assert!((s0 - s12).abs() < 1e-9);
    }
}

#[test]
fn sandwich_holds_on_a_thousand_pairs() {
    let mut r = rng(2024);
    for k in 0..1000 {
        let dim = 2 + k % 3;
        let (a, b) = (random_density(dim, &mut r), random_density(dim, &mut r));
        let c = closeness(&a, &b).unwrap();
        assert!(1.0 - c.fidelity <= c.trace_distance + 1e-9);
        assert!(c.trace_distance <= (1.0 - c.fidelity * c.fidelity).sqrt() + 1e-9);
        if dim == 2 {
            assert!((c.trace_distance - bloch_distance(&a, &b)).abs() < 1e-10);
        }
    }
}

#[test]
fn fannes_audit() {
    let mut r = rng(7);
    let mut applied = 0;
    for k in 0..1000 {
        let dim = 2 + k % 4;
        let a = random_density(dim, &mut r);
        let p = 0.3 * (k as f64 + 0.5) / 1000.0;
        let b = a.mapv(|z| z * (1.0 - p)) + random_density(dim, &mut r).mapv(|z| z * p);
        let t = trace_distance(&a, &b).unwrap();
        let gap = (von_neumann(&a).unwrap() - von_neumann(&b).unwrap()).abs();
        match fannes_bound(t, dim) {
            Ok(bound) => {
                assert!(gap <= bound + 1e-12, "dim {dim} T {t}: {gap} > {bound}");
                applied += 1;
            }
            Err(e) => {
                assert_eq!(e.code(), "bound_inapplicable");
                assert!(t > fannes_regime());
            }
        }
    }
    assert!(applied > 900, "only {applied} trials inside the regime");
}

#[test]
fn sampled_gates_are_equivariant_for_every_seed() {
    let d3 = Arc::new(dihedral_group(3).unwrap());
    let regular = twisted_regular_rep(&spt_index::cocycle::Cocycle2::trivial(d3)).unwrap();
    let reps = [parse_rep("pauli").unwrap(), parse_rep("Z3xZ3").unwrap(), regular];
    for rho in &reps {
        let site: Vec<Mat> = rho.matrices().iter().map(|q| spt_index::linalg::kron(q, &q.mapv(|z| z.conj()))).collect();
        let dim = site[0].nrows();
        // two-site gates only when the window stays small
        let n = if dim * dim <= 81 { 2 } else { 1 };
        let spec = SiteSpec::uniform(rho.group().clone(), site, n).unwrap();
        let window: Vec<usize> = (0..n).collect();
        for seed in 0..100 {
            let g = sample_equivariant_gate(&spec, &window, seed).unwrap();
            let rep: Vec<Mat> = (0..rho.group().order()).map(|h| spec.window_rep(&window, h)).collect();
            let res = equivariance_residual(&g.matrix, &rep);
            // 1e-9 in general, 1e-10 for the four-dimensional Pauli sites
            let bound = if dim == 4 { 1e-10 } else { 1e-9 };
            assert!(res < bound, "dim {dim} seed {seed}: {res:e}");
            assert!((g.residual - res).abs() < 1e-12);
        }
    }
    // a Haar gate is not
    let spec = Fixture::parse("eps:pauli").unwrap().spec(2).unwrap();
    let rep: Vec<Mat> = (0..4).map(|h| spec.window_rep(&[0, 1], h)).collect();
    let u = haar_unitary(16, &mut rng(1)).unwrap();
    assert!(equivariance_residual(&u, &rep) > 1e-3);
}

#[test]
fn light_cone_closes_at_depth_plus_one() {
    let f = Fixture::parse("eps:pauli").unwrap();
    let psi = f.dense(10).unwrap();
    for seed in 0..3 {
        let c = build_brickwork(psi.spec(), 1, seed).unwrap();
        let prof = light_cone_defect(&psi, &c, RingArc::new(0, 5), &[2]).unwrap();
        assert!(prof[0].defect() < 1e-8, "seed {seed}: {:?}", prof[0]);
    }
}

#[test]
fn class_does_not_depend_on_the_arc() {
    let tol = Tolerances::default();
    for name in ["eps:pauli", "charged:Z2xZ2"] {
        let psi = Fixture::parse(name).unwrap().dense(8).unwrap();
        let classes: Vec<_> = [(0, 4), (1, 4), (2, 3), (3, 5), (5, 3)]
            .iter()
            .map(|&(s, l)| extract_window_index(&psi, RingArc::new(s, l), 1, &tol).unwrap().class)
            .collect();
        assert!(classes.windows(2).all(|w| w[0] == w[1]), "{name}");
    }
}

#[test]
fn overlap_of_regions_is_refused() {
    let psi = Fixture::parse("eps:pauli").unwrap().dense(4).unwrap();
    let e = mutual_information(&psi, &[0, 1], &[1, 2]).unwrap_err();
    assert_eq!(e.code(), "overlapping_regions");
    let bad = Mat::from_elem((2, 2), C64::new(1.0, 0.0));
    assert_eq!(trace_distance(&bad, &Mat::eye(2)).unwrap_err().code(), "not_density_matrix");
}
