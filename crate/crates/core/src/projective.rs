//! Projective unitary representations `Q(g) Q(h) = nu(g,h) Q(gh)`.

use std::sync::Arc;

use ndarray::Array2;

use crate::cocycle::{check_cocycle, inverse_cocycle, same_group, stack, Cochain1, Cocycle2};
use crate::error::{Error, Result};
use crate::group::{direct_product, cyclic_group, FiniteGroup};
use crate::linalg::{c, conj, dagger, frobenius, identity, kron, null_space, scalar_part, trace, unitarity_residual, Mat, C64};

/// Unitarity tolerance for representation matrices.
pub const UNITARY_TOL: f64 = 1e-10;
/// Tolerance on the scalar defect of `Q(g)Q(h)Q(gh)^-1`.
pub const PROJECTIVE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct ProjectiveRep {
    group: Arc<FiniteGroup>,
    matrices: Vec<Mat>,
    cocycle: Cocycle2,
}

impl ProjectiveRep {
    /// Validate the matrices and compute their cocycle.
    pub fn new(group: Arc<FiniteGroup>, matrices: Vec<Mat>) -> Result<Self> {
        let cocycle = cocycle_of_rep(&group, &matrices)?;
        Ok(ProjectiveRep { group, matrices, cocycle })
    }

    /// Trust a known exact cocycle; still checked against the matrices.
    pub fn with_cocycle(group: Arc<FiniteGroup>, matrices: Vec<Mat>, cocycle: Cocycle2) -> Result<Self> {
        let measured = cocycle_of_rep(&group, &matrices)?;
        let d = measured.max_distance(&cocycle);
        if d > PROJECTIVE_TOL {
            return Err(Error::InvalidArgument(format!("matrices do not realize the given cocycle (distance {d:.3e})")));
        }
        Ok(ProjectiveRep { group, matrices, cocycle })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn matrices(&self) -> &[Mat] {
        &self.matrices
    }

    pub fn matrix(&self, g: usize) -> &Mat {
        &self.matrices[g]
    }

    pub fn cocycle(&self) -> &Cocycle2 {
        &self.cocycle
    }

    /// Largest `|Q(g)Q(h) - nu(g,h)Q(gh)|_F`.
    pub fn relation_residual(&self) -> f64 {
        let n = self.group.order();
        let mut r = 0.0_f64;
        for g in 0..n {
            for h in 0..n {
                let lhs = self.matrices[g].dot(&self.matrices[h]);
                let rhs = self.matrices[self.group.mul(g, h)].mapv(|z| z * self.cocycle.phase(g, h));
                r = r.max(frobenius(&(lhs - rhs)));
            }
        }
        r
    }

    pub fn is_ordinary(&self) -> bool {
        let one = C64::new(1.0, 0.0);
        self.cocycle.to_complex_table().iter().flatten().all(|z| (z - one).norm() < PROJECTIVE_TOL)
    }
}

/// `nu(g,h) = tr(Q(gh)^dagger Q(g) Q(h)) / D`, after checking unitarity and
/// that every `Q(g)Q(h)Q(gh)^-1` is a scalar.
pub fn cocycle_of_rep(group: &Arc<FiniteGroup>, matrices: &[Mat]) -> Result<Cocycle2> {
    let n = group.order();
    if matrices.len() != n {
        return Err(Error::DimensionMismatch(format!("{} matrices for a group of order {n}", matrices.len())));
    }
    let d = matrices[0].nrows();
    for (g, q) in matrices.iter().enumerate() {
        if q.dim() != (d, d) {
            return Err(Error::DimensionMismatch(format!("matrix {g} is not {d}x{d}")));
        }
        let r = unitarity_residual(q);
        if r > UNITARY_TOL {
            return Err(Error::InvalidArgument(format!("matrix {g} is not unitary (residual {r:.3e})")));
        }
    }
    let mut table = vec![vec![C64::new(1.0, 0.0); n]; n];
    for g in 0..n {
        for h in 0..n {
            let m = matrices[g].dot(&matrices[h]).dot(&dagger(&matrices[group.mul(g, h)]));
            let (z, defect) = scalar_part(&m);
            if defect > PROJECTIVE_TOL {
                return Err(Error::NotProjective { g, h, defect });
            }
            table[g][h] = z;
        }
    }
    let nu = Cocycle2::float(group.clone(), table.into_iter().map(|r| r.into_iter().map(|z| z / z.norm()).collect()).collect())?;
    debug_assert!(check_cocycle(&nu, 1e-8).holds);
    Ok(nu)
}

fn shift(n: usize) -> Mat {
    Array2::from_shape_fn((n, n), |(i, j)| if i == (j + 1) % n { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

fn clock(n: usize, q: i64) -> Mat {
    Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            crate::linalg::root_of_unity(q * i as i64, n as u64)
        } else {
            c(0.0, 0.0)
        }
    })
}

fn mat_pow(m: &Mat, k: usize) -> Mat {
    (0..k).fold(identity(m.nrows()), |acc, _| acc.dot(m))
}

/// `Q((j,k)) = X^j Z^(qk)` on `Z_n x Z_n` with `X|i> = |i+1>` and
/// `Z = diag(w^i)`, `w = exp(2 pi i / n)`. The pairing is
/// `beta((1,0),(0,1)) = exp(-2 pi i q / n)`.
pub fn clock_shift_rep(n: usize, q: i64) -> Result<ProjectiveRep> {
    if n < 2 {
        return Err(Error::InvalidArgument("clock-shift needs n >= 2".into()));
    }
    let zn = cyclic_group(n)?;
    let group = Arc::new(direct_product(&zn, &zn));
    let x = shift(n);
    let z = clock(n, q);
    let mut matrices = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            matrices.push(mat_pow(&x, j).dot(&mat_pow(&z, k)));
        }
    }
    // X^j1 Z^(q k1) X^j2 Z^(q k2) = w^(q k1 j2) X^(j1+j2) Z^(q(k1+k2))
    let qm = q.rem_euclid(n as i64) as u64;
    let values = (0..n * n)
        .map(|g| (0..n * n).map(|h| ((g % n) as u64 * (h / n) as u64 * qm) % n as u64).collect())
        .collect();
    let cocycle = Cocycle2::exact(group.clone(), n as u64, values)?;
    ProjectiveRep::with_cocycle(group, matrices, cocycle)
}

/// `Q(g)_{h,h'} = nu(g,h') [h = g h']` on `C[G]`; realizes `nu` exactly.
pub fn twisted_regular_rep(nu: &Cocycle2) -> Result<ProjectiveRep> {
    if !crate::cocycle::is_normalized(nu) {
        return Err(Error::Unnormalized);
    }
    let group = nu.group().clone();
    let n = group.order();
    let matrices = (0..n)
        .map(|g| {
            let mut m = Array2::zeros((n, n));
            for hp in 0..n {
                m[(group.mul(g, hp), hp)] = nu.phase(g, hp);
            }
            m
        })
        .collect();
    ProjectiveRep::with_cocycle(group, matrices, nu.clone())
}

/// `Q(g) -> conj(Q(g))`, cocycle conjugated.
pub fn dual_rep(rho: &ProjectiveRep) -> ProjectiveRep {
    ProjectiveRep {
        group: rho.group.clone(),
        matrices: rho.matrices.iter().map(conj).collect(),
        cocycle: inverse_cocycle(&rho.cocycle),
    }
}

/// Kronecker product; cocycles multiply.
pub fn tensor_rep(a: &ProjectiveRep, b: &ProjectiveRep) -> Result<ProjectiveRep> {
    if !same_group(&a.group, &b.group) {
        return Err(Error::GroupMismatch);
    }
    Ok(ProjectiveRep {
        group: a.group.clone(),
        matrices: a.matrices.iter().zip(&b.matrices).map(|(x, y)| kron(x, y)).collect(),
        cocycle: stack(&a.cocycle, &b.cocycle)?,
    })
}

/// `Q'(g) = mu(g)^-1 Q(g)`, whose cocycle is `nu / d mu`.
pub fn regauge(rho: &ProjectiveRep, mu: &Cochain1) -> Result<ProjectiveRep> {
    if !same_group(&rho.group, mu.group()) {
        return Err(Error::GroupMismatch);
    }
    let matrices = rho
        .matrices
        .iter()
        .enumerate()
        .map(|(g, m)| {
            let p = mu.phase(g).conj();
            m.mapv(|z| z * p)
        })
        .collect();
    ProjectiveRep::new(rho.group.clone(), matrices)
}

/// One-dimensional trivial representation.
pub fn trivial_rep(group: Arc<FiniteGroup>) -> ProjectiveRep {
    let n = group.order();
    ProjectiveRep {
        matrices: vec![identity(1); n],
        cocycle: Cocycle2::trivial(group.clone()),
        group,
    }
}

/// Dimension of `{M : M Q(g) = Q(g) M for all g}`.
pub fn commutant_dimension(matrices: &[Mat]) -> Result<usize> {
    let d = matrices[0].nrows();
    let id = identity(d);
    // row-major vec: vec(Q M) = (Q x I) vec M, vec(M Q) = (I x Q^T) vec M
    let mut rows = Array2::<C64>::zeros((matrices.len() * d * d, d * d));
    for (g, q) in matrices.iter().enumerate() {
        let block = kron(q, &id) - kron(&id, &q.t().to_owned());
        rows.slice_mut(ndarray::s![g * d * d..(g + 1) * d * d, ..]).assign(&block);
    }
    if frobenius(&rows) == 0.0 {
        return Ok(d * d);
    }
    Ok(null_space(&rows, 1e-9)?.ncols())
}

/// Schur's test: irreducible iff the commutant is one-dimensional.
pub fn is_irreducible(rho: &ProjectiveRep) -> Result<bool> {
    Ok(commutant_dimension(&rho.matrices)? == 1)
}

/// `tr Q(g)` for every element.
pub fn characters(rho: &ProjectiveRep) -> Vec<C64> {
    rho.matrices.iter().map(trace).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::pairing;
    use crate::cohomology::{cohomologous, enumerate_h2, is_coboundary, reduce_to_class};
    use crate::linalg::root_of_unity;

    fn pauli() -> ProjectiveRep {
        clock_shift_rep(2, 1).unwrap()
    }

    // element indices in Z_n x Z_n: (j,k) -> j*n + k; a = (1,0), b = (0,1)
    const A: usize = 2;
    const B: usize = 1;
    const AB: usize = 3;

    #[test]
    fn pauli_cocycle_entries() {
        let p = pauli();
        let nu = cocycle_of_rep(p.group(), p.matrices()).unwrap();
        assert!((nu.phase(A, B) - c(1.0, 0.0)).norm() < 1e-12);
        assert!((nu.phase(B, A) - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((nu.phase(AB, AB) - c(-1.0, 0.0)).norm() < 1e-12);
        assert!(nu.max_distance(p.cocycle()) < 1e-12);
        assert!(p.relation_residual() < 1e-12);
    }

    #[test]
    fn clock_shift_pairing_orientation() {
        for q in 0..3 {
            let r = clock_shift_rep(3, q).unwrap();
            let beta = pairing(r.cocycle()).unwrap();
            assert!((beta.phase(3, 1) - root_of_unity(-q, 3)).norm() < 1e-12, "q={q}");
            assert!(r.relation_residual() < 1e-12);
        }
        assert!(clock_shift_rep(3, 0).unwrap().is_ordinary());
    }

    #[test]
    fn identity_matrices_give_trivial_cocycle() {
        let g = Arc::new(crate::group::builtin_group("Z2xZ2").unwrap());
        let nu = cocycle_of_rep(&g, &vec![identity(3); 4]).unwrap();
        assert!(nu.max_distance(&Cocycle2::trivial(g)) < 1e-15);
    }

    #[test]
    fn non_projective_rejected() {
        let g = Arc::new(crate::group::builtin_group("Z2").unwrap());
        let diag = Array2::from_diag(&ndarray::arr1(&[c(1.0, 0.0), c(0.0, 1.0)]));
        assert!(matches!(cocycle_of_rep(&g, &[identity(2), diag]), Err(Error::NotProjective { .. })));
    }

    #[test]
    fn twisted_regular_round_trip() {
        for name in ["Z2", "Z2xZ2", "Z3xZ3", "Z2xZ4", "D4", "D3", "Z3"] {
            let g = Arc::new(crate::group::builtin_group(name).unwrap());
            for cls in &enumerate_h2(&g).unwrap().classes {
                let r = twisted_regular_rep(&cls.representative).unwrap();
                let measured = cocycle_of_rep(r.group(), r.matrices()).unwrap();
                let (snapped, _) = crate::cocycle::snap_to_roots(&measured, g.order() as u64, 1e-6).unwrap();
                assert!(cohomologous(&snapped, &cls.representative).unwrap().is_some(), "{name}");
            }
        }
    }

    #[test]
    fn dual_and_tensor() {
        let p = pauli();
        let dd = dual_rep(&dual_rep(&p));
        assert_eq!(dd.matrices(), p.matrices());
        let pp = tensor_rep(&p, &p).unwrap();
        assert!(reduce_to_class(pp.cocycle()).unwrap().is_trivial());
        assert!(!is_irreducible(&pp).unwrap());
        assert_eq!(commutant_dimension(pp.matrices()).unwrap(), 4);
        assert!(is_irreducible(&p).unwrap());
        let t = tensor_rep(&p, &trivial_rep(p.group().clone())).unwrap();
        assert_eq!(t.cocycle(), p.cocycle());
    }

    #[test]
    fn pauli_times_dual_regauges_to_ordinary() {
        let p = pauli();
        let pd = tensor_rep(&p, &dual_rep(&p)).unwrap();
        let mu = is_coboundary(pd.cocycle()).unwrap().unwrap();
        let ordinary = regauge(&pd, &mu).unwrap();
        assert!(ordinary.is_ordinary());
    }

    #[test]
    fn z3_dual_inverts_class() {
        let r = clock_shift_rep(3, 1).unwrap();
        let cls = reduce_to_class(dual_rep(&r).cocycle()).unwrap();
        let r2 = clock_shift_rep(3, 2).unwrap();
        assert_eq!(cls, reduce_to_class(r2.cocycle()).unwrap());
    }
}
