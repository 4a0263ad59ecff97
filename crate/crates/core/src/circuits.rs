//! Symmetric brickwork circuits.
//!
//! Gates are sampled Haar-uniformly from the commutant of the window
//! representation: the window space is split into irreducible copies, copies
//! of the same irrep are aligned by an intertwiner, and each multiplicity
//! space receives its own Haar unitary.

use std::sync::Arc;

use ndarray::{s, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::extraction::{composition_table, factorize_all};
use crate::io::{matrix_from_json, matrix_json};
use crate::linalg::{commutator_norm, dagger, eigh, frobenius, ginibre, haar_unitary, identity, kron, outer, trace, unitarity_residual, CVec, Mat, C64};
use crate::state::{character_of, DenseState, RingArc, SiteSpec};

pub const GATE_UNITARY_TOL: f64 = 1e-10;
pub const GATE_EQUIVARIANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct EquivariantGate {
    pub window: Vec<usize>,
    pub matrix: Mat,
    /// `max_g |[U, R_win(g)]|_F`
    pub residual: f64,
}

/// `max_g |[U, R(g)]|_F`
pub fn equivariance_residual(u: &Mat, rep: &[Mat]) -> f64 {
    rep.iter().map(|r| commutator_norm(u, r)).fold(0.0, f64::max)
}

/// `(1/|G|) sum_g R(g) M R(g)†`
pub fn twirl(m: &Mat, rep: &[Mat]) -> Mat {
    let mut acc: Mat = Array2::zeros(m.dim());
    for r in rep {
        acc = acc + r.dot(m).dot(&dagger(r));
    }
    acc.mapv(|z| z / rep.len() as f64)
}

/// Orthonormal bases (columns) of the irreducible copies, grouped by
/// character. Each group's bases are aligned so that `R(g)` acts by the same
/// matrix on every copy.
fn isotypic_copies<R: Rng>(rep: &[Mat], rng: &mut R) -> Result<Vec<Vec<Mat>>> {
    let n = rep[0].nrows();
    let h = ginibre(n, n, rng);
    let h = twirl(&(&h + &dagger(&h)), rep);
    let (vals, vecs) = eigh(&h)?;
    let mut copies: Vec<Mat> = Vec::new();
    let mut start = 0;
    for k in 1..=n {
        if k == n || (vals[k] - vals[start]).abs() > 1e-8 {
            copies.push(vecs.slice(s![.., start..k]).to_owned());
            start = k;
        }
    }
    let chars: Vec<Vec<C64>> = copies
        .iter()
        .map(|b| rep.iter().map(|r| trace(&dagger(b).dot(r).dot(b))).collect())
        .collect();
    let mut groups: Vec<(Vec<C64>, Vec<Mat>)> = Vec::new();
    for (b, ch) in copies.into_iter().zip(chars) {
        let found = groups.iter_mut().find(|(c, _)| c.iter().zip(&ch).all(|(x, y)| (x - y).norm() < 1e-6));
        match found {
            Some((_, list)) => list.push(b),
            None => groups.push((ch, vec![b])),
        }
    }
    let x = twirl(&ginibre(n, n, rng), rep);
    let mut out = Vec::with_capacity(groups.len());
    for (_, list) in groups {
        let first = list[0].clone();
        let dim = first.ncols() as f64;
        let mut aligned = vec![first.clone()];
        for b in &list[1..] {
            // intertwiner copy 1 -> copy j, a multiple of a unitary
            let t = dagger(b).dot(&x).dot(&first);
            let scale = frobenius(&t) / dim.sqrt();
            if scale < 1e-8 {
                return Err(Error::Linalg("degenerate intertwiner while aligning copies".into()));
            }
            aligned.push(b.dot(&t.mapv(|z| z / scale)));
        }
        out.push(aligned);
    }
    Ok(out)
}

/// Haar-random unitary on the commutant of `rep`.
pub fn sample_commutant_unitary(rep: &[Mat], seed: u64) -> Result<Mat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rep[0].nrows();
    for _ in 0..8 {
        let Ok(groups) = isotypic_copies(rep, &mut rng) else { continue };
        let mut u = Array2::zeros((n, n));
        for copies in &groups {
            let m = copies.len();
            let w = haar_unitary(m, &mut rng)?;
            for j in 0..m {
                for k in 0..m {
                    u = u + copies[j].dot(&dagger(&copies[k])).mapv(|z| z * w[(j, k)]);
                }
            }
        }
        if unitarity_residual(&u) <= GATE_UNITARY_TOL && equivariance_residual(&u, rep) <= GATE_EQUIVARIANCE_TOL {
            return Ok(u);
        }
    }
    Err(Error::Linalg("could not resolve the isotypic decomposition".into()))
}

/// Haar-random gate on `window` commuting with the window symmetry.
pub fn sample_equivariant_gate(spec: &SiteSpec, window: &[usize], seed: u64) -> Result<EquivariantGate> {
    let n = spec.n_sites();
    if window.is_empty() || window.iter().any(|&s| s >= n) {
        return Err(Error::InvalidArgument(format!("window {window:?} is not valid on {n} sites")));
    }
    let rep: Vec<Mat> = (0..spec.group().order()).map(|g| spec.window_rep(window, g)).collect();
    let matrix = sample_commutant_unitary(&rep, seed)?;
    let residual = equivariance_residual(&matrix, &rep);
    Ok(EquivariantGate { window: window.to_vec(), matrix, residual })
}

/// Wrap a given matrix as a gate, measuring (not enforcing) equivariance.
pub fn gate_from_matrix(spec: &SiteSpec, window: &[usize], matrix: Mat) -> Result<EquivariantGate> {
    let dim = spec.region_dim(window);
    if matrix.dim() != (dim, dim) {
        return Err(Error::DimensionMismatch(format!("gate on {window:?} must be {dim}x{dim}")));
    }
    let rep: Vec<Mat> = (0..spec.group().order()).map(|g| spec.window_rep(window, g)).collect();
    let residual = equivariance_residual(&matrix, &rep);
    Ok(EquivariantGate { window: window.to_vec(), matrix, residual })
}

#[derive(Debug, Clone)]
pub struct BrickworkCircuit {
    pub n_sites: usize,
    pub seed: u64,
    /// Every layer repeats one gate (translation-invariant circuit).
    pub uniform: bool,
    pub layers: Vec<Vec<EquivariantGate>>,
}

/// Windows of brickwork layer `l`: `(o + 2k, o + 2k + 1) mod N`, `o = l % 2`.
pub fn layer_windows(n: usize, layer: usize) -> Vec<Vec<usize>> {
    let o = layer % 2;
    (0..n / 2).map(|k| vec![(o + 2 * k) % n, (o + 2 * k + 1) % n]).collect()
}

fn check_ring(spec: &SiteSpec) -> Result<()> {
    if spec.n_sites() < 2 {
        return Err(Error::InvalidArgument("brickwork needs at least 2 sites".into()));
    }
    Ok(())
}

/// Independent equivariant gates everywhere.
pub fn build_brickwork(spec: &SiteSpec, depth: usize, seed: u64) -> Result<BrickworkCircuit> {
    check_ring(spec)?;
    let n = spec.n_sites();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layers = Vec::with_capacity(depth);
    for l in 0..depth {
        let mut layer = Vec::new();
        for win in layer_windows(n, l) {
            layer.push(sample_equivariant_gate(spec, &win, rng.gen())?);
        }
        layers.push(layer);
    }
    Ok(BrickworkCircuit { n_sites: n, seed, uniform: false, layers })
}

/// One gate per layer, repeated around the ring. Needs an even ring with
/// identical sites.
pub fn build_uniform_brickwork(spec: &SiteSpec, depth: usize, seed: u64) -> Result<BrickworkCircuit> {
    check_ring(spec)?;
    let n = spec.n_sites();
    if n % 2 != 0 || (1..n).any(|j| spec.site_rep(j).as_ref() != spec.site_rep(0).as_ref()) {
        return Err(Error::InvalidArgument("uniform brickwork needs an even ring of identical sites".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layers = Vec::with_capacity(depth);
    for l in 0..depth {
        let gate = sample_equivariant_gate(spec, &[0, 1], rng.gen())?;
        let layer = layer_windows(n, l)
            .into_iter()
            .map(|win| EquivariantGate { window: win, matrix: gate.matrix.clone(), residual: gate.residual })
            .collect();
        layers.push(layer);
    }
    Ok(BrickworkCircuit { n_sites: n, seed, uniform: true, layers })
}

impl BrickworkCircuit {
    pub fn identity(n_sites: usize) -> Self {
        BrickworkCircuit { n_sites, seed: 0, uniform: true, layers: vec![] }
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(|l| l.len()).sum()
    }

    pub fn max_residual(&self) -> f64 {
        self.layers.iter().flatten().map(|g| g.residual).fold(0.0, f64::max)
    }

    /// The per-layer gate of a uniform circuit.
    pub fn layer_gates(&self) -> Option<Vec<Mat>> {
        if !self.uniform {
            return None;
        }
        Some(self.layers.iter().filter_map(|l| l.first().map(|g| g.matrix.clone())).collect())
    }

    /// Layers reversed, gates daggered.
    pub fn inverse(&self) -> BrickworkCircuit {
        let layers = self
            .layers
            .iter()
            .rev()
            .map(|l| {
                l.iter()
                    .map(|g| EquivariantGate { window: g.window.clone(), matrix: dagger(&g.matrix), residual: g.residual })
                    .collect()
            })
            .collect();
        BrickworkCircuit { n_sites: self.n_sites, seed: self.seed, uniform: self.uniform, layers }
    }

    /// Layer windows must be pairwise disjoint.
    pub fn validate(&self) -> Result<()> {
        for (l, layer) in self.layers.iter().enumerate() {
            let mut seen = vec![false; self.n_sites];
            for g in layer {
                for &s in &g.window {
                    if s >= self.n_sites || seen[s] {
                        return Err(Error::InvalidArgument(format!("layer {l}: overlapping or invalid window {:?}", g.window)));
                    }
                    seen[s] = true;
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n_sites": self.n_sites,
            "depth": self.depth(),
            "seed": self.seed,
            "uniform": self.uniform,
            "layers": self.layers.iter().map(|l| l.iter().map(|g| json!({
                "window": g.window,
                "matrix": matrix_json(&g.matrix),
            })).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    /// Replays a circuit file; equivariance residuals are recomputed
    /// against `spec`.
    pub fn from_json(v: &Value, spec: &SiteSpec) -> Result<Self> {
        let bad = |m: &str| Error::InvalidArgument(format!("circuit file: {m}"));
        let n_sites = v.get("n_sites").and_then(|x| x.as_u64()).ok_or_else(|| bad("n_sites"))? as usize;
        if n_sites != spec.n_sites() {
            return Err(Error::DimensionMismatch(format!("circuit for {n_sites} sites, state has {}", spec.n_sites())));
        }
        let seed = v.get("seed").and_then(|x| x.as_u64()).unwrap_or(0);
        let uniform = v.get("uniform").and_then(|x| x.as_bool()).unwrap_or(false);
        let layers_v = v.get("layers").and_then(|x| x.as_array()).ok_or_else(|| bad("layers"))?;
        let mut layers = Vec::with_capacity(layers_v.len());
        for lv in layers_v {
            let mut layer = Vec::new();
            for gv in lv.as_array().ok_or_else(|| bad("layer"))? {
                let window: Vec<usize> = gv
                    .get("window")
                    .and_then(|w| w.as_array())
                    .ok_or_else(|| bad("window"))?
                    .iter()
                    .map(|s| s.as_u64().map(|s| s as usize).ok_or_else(|| bad("window entry")))
                    .collect::<Result<_>>()?;
                let m = matrix_from_json(gv.get("matrix").ok_or_else(|| bad("matrix"))?)?;
                layer.push(gate_from_matrix(spec, &window, m)?);
            }
            layers.push(layer);
        }
        let c = BrickworkCircuit { n_sites, seed, uniform, layers };
        c.validate()?;
        Ok(c)
    }
}

/// Gate-by-gate application. Refuses gates whose equivariance residual is
/// above [`GATE_EQUIVARIANCE_TOL`].
pub fn apply_circuit(psi: &DenseState, c: &BrickworkCircuit) -> Result<DenseState> {
    if c.n_sites != psi.n_sites() {
        return Err(Error::DimensionMismatch(format!("circuit for {} sites, state has {}", c.n_sites, psi.n_sites())));
    }
    c.validate()?;
    let mut out = psi.clone();
    for layer in &c.layers {
        for g in layer {
            if g.residual > GATE_EQUIVARIANCE_TOL {
                return Err(Error::NotEquivariant { residual: g.residual });
            }
            out = out.apply_operator(&g.window, &g.matrix)?;
        }
    }
    Ok(out)
}

/// Same as [`apply_circuit`] without the equivariance gate (for negative
/// controls and symmetry-free experiments).
pub fn apply_circuit_unchecked(psi: &DenseState, c: &BrickworkCircuit) -> Result<DenseState> {
    let mut out = psi.clone();
    for layer in &c.layers {
        for g in layer {
            out = out.apply_operator(&g.window, &g.matrix)?;
        }
    }
    Ok(out)
}

/// Unitary on `W (x) W*` that is the identity off the plane spanned by
/// `w (x) conj(w)` and `w' (x) conj(w')` and rotates the first into the
/// second. `rep` acts on `W`; the gate commutes with `R (x) conj(R)`.
pub fn swindle_gate(rep: &[Mat], w: &CVec, w_prime: &CVec) -> Result<EquivariantGate> {
    let n = rep[0].nrows();
    if w.len() != n || w_prime.len() != n {
        return Err(Error::DimensionMismatch(format!("vectors must have length {n}")));
    }
    for v in [w, w_prime] {
        let norm = crate::linalg::vec_norm(v);
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm });
        }
    }
    let (_, res) = character_of(rep, w);
    if res > 1e-9 {
        return Err(Error::NotCharacterVector { residual: res });
    }
    let (chi, res) = character_of(rep, w_prime);
    let trivial = chi.iter().all(|c| (c - C64::new(1.0, 0.0)).norm() < 1e-9);
    if res > 1e-9 || !trivial {
        return Err(Error::InvalidArgument("w' must be a G-invariant vector".into()));
    }
    let pair = |v: &CVec| -> CVec {
        let vc = v.mapv(|z| z.conj());
        let mut out = CVec::zeros(n * n);
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = v[i] * vc[j];
            }
        }
        out
    };
    let a = pair(w);
    let b = pair(w_prime);
    let c = crate::linalg::inner(&a, &b);
    let perp = &b - &a.mapv(|z| z * c);
    let s = crate::linalg::vec_norm(&perp);
    let mut u = identity(n * n);
    if s > 1e-12 {
        let bp = perp.mapv(|z| z / s);
        // on (a, bp): columns (c, s) and (-s, conj c)
        let new_bp = &a.mapv(|z| z * (-s)) + &bp.mapv(|z| z * c.conj());
        u = u - outer(&a, &a) - outer(&bp, &bp) + outer(&b, &a) + outer(&new_bp, &bp);
    } else {
        // w' (x) conj(w') = c * w (x) conj(w); rotate by the phase only
        u = u + outer(&a, &a).mapv(|z| z * (c - C64::new(1.0, 0.0)));
    }
    let pair_rep: Vec<Mat> = rep.iter().map(|r| kron(r, &crate::linalg::conj(r))).collect();
    let residual = equivariance_residual(&u, &pair_rep);
    Ok(EquivariantGate { window: vec![0, 1], matrix: u, residual })
}

/// Finite swindle fixture: the chain `W, W*, W, W*, ..., W, W*` of `2K`
/// factors carrying `w, conj(w), w, ...`. Physical sites group the factors
/// as `(W_0), (W*_1 W_1), ..., (W*_K)`.
#[derive(Debug, Clone)]
pub struct SwindleDemo {
    pub pairs: usize,
    pub before: DenseState,
    pub after: DenseState,
    pub gate: EquivariantGate,
    /// Factor indices of each physical site.
    pub sites: Vec<Vec<usize>>,
    /// Per physical site: `1 - tr(rho^2)`.
    pub purity_defects: Vec<f64>,
    /// Per physical site: `max_g |1 - tr(rho R(g))|`.
    pub invariance_defects: Vec<f64>,
    /// Same quantity before the circuit, showing the charges.
    pub invariance_before: Vec<f64>,
}

impl SwindleDemo {
    pub fn passed(&self, tol: f64) -> bool {
        self.purity_defects.iter().chain(&self.invariance_defects).all(|&d| d < tol)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pairs": self.pairs,
            "sites": self.sites,
            "gate_unitarity": unitarity_residual(&self.gate.matrix),
            "gate_equivariance": self.gate.residual,
            "purity_defects": self.purity_defects,
            "invariance_defects": self.invariance_defects,
            "invariance_before": self.invariance_before,
            "passed": self.passed(1e-9),
        })
    }
}

/// Applies one layer of [`swindle_gate`] on the factor pairs
/// `(W_j, W*_{j+1})` and reports the physical-site reduced densities.
pub fn swindle_demo(group: Arc<crate::group::FiniteGroup>, rep: &[Mat], w: &CVec, w_prime: &CVec, pairs: usize) -> Result<SwindleDemo> {
    if pairs == 0 {
        return Err(Error::InvalidArgument("need at least one pair".into()));
    }
    let gate = swindle_gate(rep, w, w_prime)?;
    let dual: Vec<Mat> = rep.iter().map(crate::linalg::conj).collect();
    let reps: Vec<Arc<Vec<Mat>>> = (0..2 * pairs)
        .map(|k| Arc::new(if k % 2 == 0 { rep.to_vec() } else { dual.clone() }))
        .collect();
    let spec = Arc::new(SiteSpec::new(group, reps)?);
    let wc = w.mapv(|z| z.conj());
    let vectors: Vec<CVec> = (0..2 * pairs).map(|k| if k % 2 == 0 { w.clone() } else { wc.clone() }).collect();
    let (before, _) = crate::state::build_product_state(spec.clone(), &vectors)?;
    let mut after = before.clone();
    for j in 0..pairs {
        after = after.apply_operator(&[2 * j, 2 * j + 1], &gate.matrix)?;
    }
    let mut sites = vec![vec![0]];
    for j in 1..pairs {
        sites.push(vec![2 * j - 1, 2 * j]);
    }
    sites.push(vec![2 * pairs - 1]);
    let order = spec.group().order();
    let site_defects = |psi: &DenseState| -> Result<(Vec<f64>, Vec<f64>)> {
        let mut pur = Vec::new();
        let mut inv = Vec::new();
        for s in &sites {
            let rho = psi.reduced_density(s)?;
            pur.push((1.0 - trace(&rho.dot(&rho)).re).abs());
            let worst = (0..order)
                .map(|g| (C64::new(1.0, 0.0) - trace(&rho.dot(&spec.window_rep(s, g)))).norm())
                .fold(0.0, f64::max);
            inv.push(worst);
        }
        Ok((pur, inv))
    };
    let (purity_defects, invariance_defects) = site_defects(&after)?;
    let (_, invariance_before) = site_defects(&before)?;
    Ok(SwindleDemo { pairs, before, after, gate, sites, purity_defects, invariance_defects, invariance_before })
}

/// The two-dimensional Z2 fixture: `W = trivial (+) sign`, `w` the sign
/// vector, `w'` the invariant one.
pub fn z2_swindle_fixture() -> Result<(Arc<crate::group::FiniteGroup>, Vec<Mat>, CVec, CVec)> {
    let g = Arc::new(crate::group::cyclic_group(2)?);
    let mut sign = identity(2);
    sign[(1, 1)] = C64::new(-1.0, 0.0);
    let w = CVec::from(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
    let wp = CVec::from(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    Ok((g, vec![identity(2), sign], w, wp))
}

/// How well the circuit-dressed restricted symmetry is captured by window
/// unitaries of halfwidth `w`.
#[derive(Debug, Clone)]
pub struct LightConeDefect {
    pub w: usize,
    /// Largest factorization residual over the group.
    pub factorization: f64,
    /// Largest `|B_gh - B_g (R_in(g) B_h R_in(g)†)|` on the state, after
    /// removing the best phase.
    pub composition: f64,
}

impl LightConeDefect {
    pub fn defect(&self) -> f64 {
        self.factorization.max(self.composition)
    }
}

/// Defect profile for `w` in `ws`. The state is `C psi` with `psi` the
/// input; the restricted symmetry is that of the arc.
pub fn light_cone_defect(psi: &DenseState, c: &BrickworkCircuit, arc: RingArc, ws: &[usize]) -> Result<Vec<LightConeDefect>> {
    let phi = apply_circuit(psi, c)?;
    let grp = phi.spec().group().clone();
    let mut out = Vec::with_capacity(ws.len());
    for &w in ws {
        let facts = factorize_all(&phi, arc, w)?;
        let factorization = facts.iter().map(|f| f.residual).fold(0.0, f64::max);
        let mut left: Vec<Mat> = facts.iter().map(|f| f.left.clone()).collect();
        left[grp.identity()] = identity(left[0].nrows());
        let table = composition_table(&phi, &left, &facts[0].left_sites, w)?;
        let composition = table.iter().flatten().map(|z| (1.0 - z.norm()).abs()).fold(0.0, f64::max);
        out.push(LightConeDefect { w, factorization, composition });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::clock_shift_rep;
    use crate::state::build_eps_dense;

    fn pauli_spec(n: usize) -> SiteSpec {
        let p = clock_shift_rep(2, 1).unwrap();
        let rep = p.matrices().iter().map(|q| kron(q, &crate::linalg::conj(q))).collect();
        SiteSpec::uniform(p.group().clone(), rep, n).unwrap()
    }

    #[test]
    fn sampled_gates_commute_and_repeat() {
        let spec = pauli_spec(2);
        for seed in 0..20 {
            let g = sample_equivariant_gate(&spec, &[0, 1], seed).unwrap();
            assert!(g.residual < 1e-10);
            assert!(unitarity_residual(&g.matrix) < 1e-10);
        }
        let a = sample_equivariant_gate(&spec, &[0, 1], 7).unwrap();
        let b = sample_equivariant_gate(&spec, &[0, 1], 7).unwrap();
        assert_eq!(a.matrix, b.matrix);
    }

    #[test]
    fn nonabelian_window_gate_is_equivariant() {
        let g = Arc::new(crate::group::dihedral_group(3).unwrap());
        // regular representation of D3
        let n = g.order();
        let rep: Vec<Mat> = (0..n)
            .map(|x| {
                let mut m = Array2::zeros((n, n));
                for y in 0..n {
                    m[(g.mul(x, y), y)] = C64::new(1.0, 0.0);
                }
                m
            })
            .collect();
        let u = sample_commutant_unitary(&rep, 3).unwrap();
        assert!(equivariance_residual(&u, &rep) < 1e-10);
    }

    #[test]
    fn brickwork_layout_and_inverse() {
        let spec = pauli_spec(4);
        let c = build_brickwork(&spec, 1, 1).unwrap();
        assert_eq!(c.layers[0].iter().map(|g| g.window.clone()).collect::<Vec<_>>(), vec![vec![0, 1], vec![2, 3]]);
        let c = build_brickwork(&spec, 3, 5).unwrap();
        let psi = build_eps_dense(&clock_shift_rep(2, 1).unwrap(), 4).unwrap();
        let phi = apply_circuit(&psi, &c).unwrap();
        assert!(phi.invariance_residual().unwrap() < 1e-9);
        let back = apply_circuit(&phi, &c.inverse()).unwrap();
        assert!((back.overlap(&psi).norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn swindle_fixture_disentangles() {
        let (g, rep, w, wp) = z2_swindle_fixture().unwrap();
        let demo = swindle_demo(g, &rep, &w, &wp, 3).unwrap();
        assert!(demo.passed(1e-9), "{:?}", demo.to_json());
        assert!(demo.invariance_before[0] > 0.5);
        let same = swindle_gate(&rep, &wp, &wp).unwrap();
        assert!(frobenius(&(same.matrix - identity(4))) < 1e-12);
    }
}
