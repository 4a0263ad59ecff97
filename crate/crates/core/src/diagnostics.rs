//! Entanglement and closeness diagnostics on dense states.
//!
//! All entropies use the natural logarithm. Eigenvalues below
//! [`EIGEN_CLIP`] are treated as zero before taking logs.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, hermitian_fn, kron, singular_values, trace, Mat};
use crate::state::{DenseState, RingArc};

pub const EIGEN_CLIP: f64 = 1e-14;
/// Most negative eigenvalue accepted in a density matrix.
pub const PSD_TOL: f64 = 1e-10;
/// Allowed deviation of a density matrix trace from one.
pub const TRACE_TOL: f64 = 1e-8;
/// Slack for the inequality self-checks.
pub const CHECK_SLACK: f64 = 1e-9;

/// `-sum p ln p` over a spectrum, ignoring entries below the clip.
pub fn shannon(vals: &[f64]) -> f64 {
    vals.iter().filter(|&&p| p > EIGEN_CLIP).map(|&p| -p * p.ln()).sum()
}

pub fn von_neumann(rho: &Mat) -> Result<f64> {
    Ok(shannon(&eigvalsh(rho)?))
}

/// Entropy of the reduced state on `sites`, computed on the smaller side.
pub fn entanglement_entropy(psi: &DenseState, sites: &[usize]) -> Result<f64> {
    Ok(shannon(&psi.schmidt_spectrum(sites)?))
}

fn check_density(rho: &Mat) -> Result<Vec<f64>> {
    let vals = eigvalsh(rho)?;
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let tr = trace(rho).re;
    if min < -PSD_TOL || (tr - 1.0).abs() > TRACE_TOL {
        return Err(Error::NotDensityMatrix { min_eigenvalue: min, trace: tr });
    }
    Ok(vals)
}

fn check_pair(r1: &Mat, r2: &Mat) -> Result<()> {
    if r1.dim() != r2.dim() || r1.nrows() != r1.ncols() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", r1.dim(), r2.dim())));
    }
    check_density(r1)?;
    check_density(r2)?;
    Ok(())
}

/// `(1/2) |r1 - r2|_1`.
pub fn trace_distance(r1: &Mat, r2: &Mat) -> Result<f64> {
    check_pair(r1, r2)?;
    Ok(half_l1(r1, r2)?)
}

fn half_l1(r1: &Mat, r2: &Mat) -> Result<f64> {
    let vals = eigvalsh(&(r1 - r2))?;
    Ok((0.5 * vals.iter().map(|v| v.abs()).sum::<f64>()).min(1.0))
}

/// `|sqrt(r1) sqrt(r2)|_1`.
pub fn fidelity(r1: &Mat, r2: &Mat) -> Result<f64> {
    check_pair(r1, r2)?;
    raw_fidelity(r1, r2)
}

fn raw_fidelity(r1: &Mat, r2: &Mat) -> Result<f64> {
    let root = |r: &Mat| hermitian_fn(r, |x| x.max(0.0).sqrt());
    let sv = singular_values(&root(r1)?.dot(&root(r2)?))?;
    Ok(sv.iter().sum::<f64>().min(1.0))
}

/// Trace distance and fidelity of one pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Closeness {
    pub trace_distance: f64,
    pub fidelity: f64,
}

/// Both measures, verified against `1 - F <= T <= sqrt(1 - F^2)`.
pub fn closeness(r1: &Mat, r2: &Mat) -> Result<Closeness> {
    check_pair(r1, r2)?;
    let t = half_l1(r1, r2)?;
    let f = raw_fidelity(r1, r2)?;
    let upper = (1.0 - f * f).max(0.0).sqrt();
    if 1.0 - f > t + CHECK_SLACK || t > upper + CHECK_SLACK {
        return Err(Error::SelfCheck(format!("fidelity {f} and trace distance {t} violate the sandwich")));
    }
    Ok(Closeness { trace_distance: t, fidelity: f })
}

/// Largest trace distance at which [`fannes_bound`] applies.
pub fn fannes_regime() -> f64 {
    1.0 / (2.0 * std::f64::consts::E)
}

/// Continuity bound `|S(r1) - S(r2)| <= 2T ln(dim) - 2T ln(2T)` for trace
/// distance `T <= 1/(2e)`, i.e. `|r1 - r2|_1 ln(dim) + eta(|r1 - r2|_1)`
/// with `eta(x) = -x ln x`. `T = 0` gives 0.
pub fn fannes_bound(t: f64, dim: usize) -> Result<f64> {
    if !(0.0..=fannes_regime()).contains(&t) || dim < 2 {
        return Err(Error::BoundInapplicable { t });
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let x = 2.0 * t;
    Ok(x * (dim as f64).ln() - x * x.ln())
}

fn disjoint(a: &[usize], b: &[usize]) -> Result<()> {
    if a.iter().any(|s| b.contains(s)) {
        return Err(Error::OverlappingRegions);
    }
    Ok(())
}

/// `S(A) + S(B) - S(AB)`.
pub fn mutual_information(psi: &DenseState, a: &[usize], b: &[usize]) -> Result<f64> {
    disjoint(a, b)?;
    let ab: Vec<usize> = a.iter().chain(b).copied().collect();
    Ok(entanglement_entropy(psi, a)? + entanglement_entropy(psi, b)? - entanglement_entropy(psi, &ab)?)
}

/// Outcome of `|rho_AB - rho_A (x) rho_B|_1 <= sqrt(2 I(A:B))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinskerCheck {
    pub mutual_information: f64,
    pub distance: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn pinsker_check(psi: &DenseState, a: &[usize], b: &[usize]) -> Result<PinskerCheck> {
    disjoint(a, b)?;
    let ab: Vec<usize> = a.iter().chain(b).copied().collect();
    let rho_ab = psi.reduced_density(&ab)?;
    let rho_a = psi.reduced_density(a)?;
    let rho_b = psi.reduced_density(b)?;
    let info = von_neumann(&rho_a)? + von_neumann(&rho_b)? - von_neumann(&rho_ab)?;
    let distance = 2.0 * half_l1(&rho_ab, &kron(&rho_a, &rho_b))?;
    let bound = (2.0 * info.max(0.0)).sqrt();
    Ok(PinskerCheck {
        mutual_information: info,
        distance,
        bound,
        holds: info >= -CHECK_SLACK && distance <= bound + CHECK_SLACK,
    })
}

/// Entropies of the intervals `start .. start + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyProfile {
    pub start: usize,
    pub lengths: Vec<usize>,
    pub entropies: Vec<f64>,
}

impl EntropyProfile {
    /// Every interval length `1 ..= N-1` from `start`.
    pub fn cuts(psi: &DenseState, start: usize) -> Result<Self> {
        let lengths: Vec<usize> = (1..psi.n_sites()).collect();
        Self::intervals(psi, start, &lengths)
    }

    pub fn intervals(psi: &DenseState, start: usize, lengths: &[usize]) -> Result<Self> {
        let n = psi.n_sites();
        let mut entropies = Vec::with_capacity(lengths.len());
        for &len in lengths {
            let arc = RingArc::new(start, len);
            arc.validate(n)?;
            entropies.push(entanglement_entropy(psi, &arc.sites(n))?);
        }
        Ok(EntropyProfile { start, lengths: lengths.to_vec(), entropies })
    }

    pub fn max(&self) -> f64 {
        self.entropies.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("cut,entropy\n");
        for (k, s) in self.lengths.iter().zip(&self.entropies) {
            out.push_str(&format!("{k},{s:.17e}\n"));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({"start": self.start, "lengths": self.lengths, "entropies": self.entropies})
    }
}

/// Tail sums `eps(k) = sum_{j > k} lambda_j` of the descending Schmidt
/// spectrum, normalized so that `eps(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtTail {
    pub sites: Vec<usize>,
    pub epsilon: Vec<f64>,
}

impl SchmidtTail {
    /// Number of Schmidt values above [`EIGEN_CLIP`].
    pub fn rank(&self) -> usize {
        self.epsilon.windows(2).filter(|w| w[0] - w[1] > EIGEN_CLIP).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,epsilon\n");
        for (k, e) in self.epsilon.iter().enumerate() {
            out.push_str(&format!("{k},{e:.17e}\n"));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({"sites": self.sites, "epsilon": self.epsilon, "rank": self.rank()})
    }
}

pub fn schmidt_tail(psi: &DenseState, sites: &[usize]) -> Result<SchmidtTail> {
    let spectrum = psi.schmidt_spectrum(sites)?;
    let total: f64 = spectrum.iter().sum();
    let mut epsilon = vec![0.0; spectrum.len() + 1];
    for k in (0..spectrum.len()).rev() {
        epsilon[k] = epsilon[k + 1] + spectrum[k] / total;
    }
    epsilon[0] = 1.0;
    Ok(SchmidtTail { sites: sites.to_vec(), epsilon })
}
