//! Small dense complex linear-algebra toolkit shared by every module.
//!
//! Everything here is a thin layer over `ndarray` / `ndarray-linalg`
//! (LAPACK). Matrices are `Array2<Complex64>`, row-major.

use ndarray::{s, Array1, Array2, Axis};
use ndarray_linalg::{Eigh, EigValsh, JobSvd, QR, SVD, SVDDC, UPLO};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;

pub type C64 = Complex64;
pub type Mat = Array2<C64>;
pub type CVec = Array1<C64>;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `exp(2 pi i k / m)`
pub fn root_of_unity(k: i64, m: u64) -> C64 {
    let theta = 2.0 * std::f64::consts::PI * (k.rem_euclid(m as i64) as f64) / m as f64;
    C64::from_polar(1.0, theta)
}

pub fn identity(n: usize) -> Mat {
    Array2::from_diag_elem(n, C64::new(1.0, 0.0))
}

pub fn dagger(m: &Mat) -> Mat {
    m.t().mapv(|z| z.conj())
}

pub fn conj(m: &Mat) -> Mat {
    m.mapv(|z| z.conj())
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            out.slice_mut(s![i * br..(i + 1) * br, j * bc..(j + 1) * bc])
                .assign(&b.mapv(|z| z * aij));
        }
    }
    out
}

pub fn trace(m: &Mat) -> C64 {
    m.diag().sum()
}

pub fn frobenius(m: &Mat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_norm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `<a|b>` (conjugate-linear in the first slot).
pub fn inner(a: &CVec, b: &CVec) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `|| U U^dagger - 1 ||_F`
pub fn unitarity_residual(u: &Mat) -> f64 {
    let n = u.nrows();
    frobenius(&(u.dot(&dagger(u)) - identity(n)))
}

/// `|| A B - B A ||_F`
pub fn commutator_norm(a: &Mat, b: &Mat) -> f64 {
    frobenius(&(a.dot(b) - b.dot(a)))
}

/// Best scalar approximation `c * 1` of a square matrix and the Frobenius
/// distance to it.
pub fn scalar_part(m: &Mat) -> (C64, f64) {
    let n = m.nrows();
    let c = trace(m) / n as f64;
    (c, frobenius(&(m - &identity(n).mapv(|z| z * c))))
}

/// Unit-modulus phase of a complex number; `1` for (numerically) zero input.
pub fn phase_of(z: C64) -> C64 {
    let r = z.norm();
    if r < 1e-300 {
        C64::new(1.0, 0.0)
    } else {
        z / r
    }
}

/// Multiply by the phase that makes the first entry with modulus above `tol`
/// (row-major scan) real and positive.
pub fn fix_first_entry_phase(m: &Mat, tol: f64) -> Mat {
    match m.iter().find(|z| z.norm() > tol) {
        Some(z) => {
            let p = phase_of(*z).conj();
            m.mapv(|x| x * p)
        }
        None => m.clone(),
    }
}

/// Result of a polar decomposition `M = U P`.
#[derive(Debug, Clone)]
pub struct Polar {
    /// Unitary factor; a partial isometry when `M` is rank deficient.
    pub unitary: Mat,
    /// Singular values of `M` in descending order.
    pub singular_values: Vec<f64>,
    /// Number of singular values kept above the cutoff.
    pub rank: usize,
}

/// Polar factor via SVD with singular values replaced by one. Singular values
/// below `rel_cutoff * s_max` are treated as zero, so rank-deficient inputs
/// yield a partial isometry on the support of `M^dagger M`.
pub fn polar(m: &Mat, rel_cutoff: f64) -> Result<Polar> {
    let (u, s, vt) = m.svddc(JobSvd::Some)?;
    let u = u.expect("requested U");
    let vt = vt.expect("requested Vt");
    let smax = s.iter().cloned().fold(0.0_f64, f64::max);
    let rank = s.iter().filter(|&&x| x > rel_cutoff * smax && x > 1e-300).count();
    let ur = u.slice(s![.., ..rank]).to_owned();
    let vr = vt.slice(s![..rank, ..]).to_owned();
    Ok(Polar {
        unitary: ur.dot(&vr),
        singular_values: s.to_vec(),
        rank,
    })
}

pub fn singular_values(m: &Mat) -> Result<Vec<f64>> {
    let (_, s, _) = m.svddc(JobSvd::None)?;
    Ok(s.to_vec())
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending.
pub fn eigh(m: &Mat) -> Result<(Vec<f64>, Mat)> {
    let herm = (m + &dagger(m)).mapv(|z| z * 0.5);
    // LAPACK sees the row-major buffer as the transpose, i.e. conj(herm),
    // so the returned eigenvectors come back conjugated.
    let (vals, vecs) = herm.eigh(UPLO::Upper)?;
    Ok((vals.to_vec(), conj(&vecs)))
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(m: &Mat) -> Result<Vec<f64>> {
    let herm = (m + &dagger(m)).mapv(|z| z * 0.5);
    Ok(herm.eigvalsh(UPLO::Upper)?.to_vec())
}

/// Apply `f` to the eigenvalues of a Hermitian matrix.
pub fn hermitian_fn(m: &Mat, f: impl Fn(f64) -> f64) -> Result<Mat> {
    let (vals, vecs) = eigh(m)?;
    let mut scaled = vecs.clone();
    for (j, &v) in vals.iter().enumerate() {
        let fv = f(v);
        scaled.column_mut(j).mapv_inplace(|z| z * fv);
    }
    Ok(scaled.dot(&dagger(&vecs)))
}

/// Numerical rank from singular values relative to the largest one.
pub fn rank(m: &Mat, rel_tol: f64) -> Result<usize> {
    let s = singular_values(m)?;
    let smax = s.iter().cloned().fold(0.0_f64, f64::max);
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&x| x > rel_tol * smax).count())
}

/// Orthonormal basis of the null space of `m` (columns).
pub fn null_space(m: &Mat, rel_tol: f64) -> Result<Mat> {
    let (_, s, vt) = m.svd(false, true)?;
    let vt = vt.expect("requested Vt");
    let ncols = m.ncols();
    let smax = s.iter().cloned().fold(0.0_f64, f64::max);
    let r = s.iter().filter(|&&x| x > rel_tol * smax.max(1e-300)).count();
    let basis = vt.slice(s![r..ncols, ..]).t().mapv(|z| z.conj());
    Ok(basis)
}

pub fn ginibre<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Mat {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    Array2::from_shape_fn((n, m), |_| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * scale, im * scale)
    })
}

/// Haar-distributed `n x n` unitary (QR of a Ginibre matrix with the
/// diagonal phases of R divided out).
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Mat> {
    let z = ginibre(n, n, rng);
    let (q, r) = z.qr()?;
    let mut q = q;
    for j in 0..n {
        let p = phase_of(r[(j, j)]);
        q.column_mut(j).mapv_inplace(|x| x * p);
    }
    Ok(q)
}

/// Random density matrix `G G^dagger / tr` from a Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat {
    let g = ginibre(n, n, rng);
    let rho = g.dot(&dagger(&g));
    let t = trace(&rho).re;
    rho.mapv(|z| z / t)
}

/// Outer product `|a><b|`.
pub fn outer(a: &CVec, b: &CVec) -> Mat {
    let ac = a.view().insert_axis(Axis(1));
    let bc = b.mapv(|z| z.conj());
    let br = bc.view().insert_axis(Axis(0));
    ac.dot(&br)
}
