//! Uniform matrix-product states and their (mixed) transfer maps.
//!
//! Two concrete tensors implement [`Transfer`]: a plain single-site
//! [`UniformMps`] with an on-site representation, and [`BrickworkMps`], a
//! two-site block of a uniform MPS after a translation-invariant brickwork
//! circuit of depth at most three. The latter never materializes the blocked
//! tensor; its transfer map is contracted layer by layer.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use ndarray::Array2;
use ndarray_linalg::{Eig, SVD};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{dagger, frobenius, ginibre, identity, kron, trace, CVec, Mat, C64};
use crate::projective::ProjectiveRep;
use crate::state::check_ordinary;

/// `X -> sum_i (R(g)A)^i X (A^i)^dagger` and its relatives.
pub trait Transfer {
    fn group(&self) -> &Arc<FiniteGroup>;
    fn bond(&self) -> usize;
    /// Mixed transfer map `E_g`; the identity element gives the plain map.
    fn apply(&self, g: usize, x: &Mat) -> Mat;
    /// Hilbert-Schmidt adjoint of the plain map, `X -> sum_i A^i† X A^i`.
    fn apply_adjoint(&self, x: &Mat) -> Mat;
    /// Relative residual `|(R(g)A) - e^{i theta} V† A V| / |A|`, norms summed
    /// over the physical index. The default evaluates both sums through
    /// transfer maps, which costs nothing extra but has a floor near `1e-8`
    /// from cancellation.
    fn relation_residual(&self, g: usize, v: &Mat, theta: f64) -> f64 {
        let e = self.group().identity();
        let norm = trace(&self.apply(e, &identity(self.bond()))).re;
        let cross = trace(&self.apply(g, &dagger(v)).dot(v));
        let r2 = 2.0 - 2.0 * (C64::from_polar(1.0, -theta) * cross).re / norm;
        r2.max(0.0).sqrt()
    }
}

/// Translation-invariant MPS tensor `A^i`, `i < d`, each `D x D`.
#[derive(Debug, Clone)]
pub struct UniformMps {
    tensors: Vec<Mat>,
}

impl UniformMps {
    pub fn new(tensors: Vec<Mat>) -> Result<Self> {
        let d = tensors.first().map(|a| a.nrows()).ok_or_else(|| Error::InvalidArgument("empty MPS tensor".into()))?;
        if tensors.iter().any(|a| a.dim() != (d, d)) {
            return Err(Error::DimensionMismatch("MPS matrices must share one square bond dimension".into()));
        }
        Ok(UniformMps { tensors })
    }

    pub fn physical_dim(&self) -> usize {
        self.tensors.len()
    }

    pub fn bond(&self) -> usize {
        self.tensors[0].nrows()
    }

    pub fn tensors(&self) -> &[Mat] {
        &self.tensors
    }

    /// `sum_i A^i X A^i†`
    pub fn transfer(&self, x: &Mat) -> Mat {
        let mut out = Array2::zeros(x.dim());
        for a in &self.tensors {
            out = out + a.dot(x).dot(&dagger(a));
        }
        out
    }

    /// Site-wise tensor product: physical index `i*d2 + j`, bond `a*D2 + b`.
    pub fn stacked(a: &UniformMps, b: &UniformMps) -> UniformMps {
        let mut t = Vec::with_capacity(a.physical_dim() * b.physical_dim());
        for x in &a.tensors {
            for y in &b.tensors {
                t.push(kron(x, y));
            }
        }
        UniformMps { tensors: t }
    }

    /// Amplitudes `tr(A^{i_0} ... A^{i_{N-1}})` of the periodic ring,
    /// site 0 slowest.
    pub fn ring_amplitudes(&self, n_sites: usize) -> CVec {
        let d = self.physical_dim();
        let mut prefixes: Vec<Mat> = vec![identity(self.bond())];
        for _ in 0..n_sites {
            let mut next = Vec::with_capacity(prefixes.len() * d);
            for p in &prefixes {
                for a in &self.tensors {
                    next.push(p.dot(a));
                }
            }
            prefixes = next;
        }
        prefixes.iter().map(trace).collect()
    }
}

/// `A^{(m,n)} = |m><n| / sqrt(D)` with physical index `m*D + n`.
pub fn build_eps_mps(rho: &ProjectiveRep) -> UniformMps {
    let d = rho.dim();
    let s = 1.0 / (d as f64).sqrt();
    let mut t = Vec::with_capacity(d * d);
    for m in 0..d {
        for n in 0..d {
            let mut a = Array2::zeros((d, d));
            a[(m, n)] = C64::new(s, 0.0);
            t.push(a);
        }
    }
    UniformMps { tensors: t }
}

/// A uniform MPS together with an on-site ordinary representation.
#[derive(Debug, Clone)]
pub struct SymmetricMps {
    group: Arc<FiniteGroup>,
    mps: UniformMps,
    rep: Vec<Mat>,
    /// `(R(g)A)^i` per element.
    rotated: Vec<Vec<Mat>>,
}

impl SymmetricMps {
    pub fn new(group: Arc<FiniteGroup>, mps: UniformMps, rep: Vec<Mat>) -> Result<Self> {
        check_ordinary(&group, &rep)?;
        if rep[0].nrows() != mps.physical_dim() {
            return Err(Error::DimensionMismatch(format!(
                "representation dimension {} vs physical dimension {}",
                rep[0].nrows(),
                mps.physical_dim()
            )));
        }
        let rotated = rep.iter().map(|r| rotate(r, mps.tensors())).collect();
        Ok(SymmetricMps { group, mps, rep, rotated })
    }

    /// Entangled-pair MPS with site representation `Q (x) conj(Q)`.
    pub fn eps(rho: &ProjectiveRep) -> Result<Self> {
        let rep = rho.matrices().iter().map(|q| kron(q, &crate::linalg::conj(q))).collect();
        SymmetricMps::new(rho.group().clone(), build_eps_mps(rho), rep)
    }

    pub fn stacked(a: &SymmetricMps, b: &SymmetricMps) -> Result<Self> {
        if !crate::cocycle::same_group(&a.group, &b.group) {
            return Err(Error::GroupMismatch);
        }
        let rep = a.rep.iter().zip(&b.rep).map(|(x, y)| kron(x, y)).collect();
        SymmetricMps::new(a.group.clone(), UniformMps::stacked(&a.mps, &b.mps), rep)
    }

    pub fn mps(&self) -> &UniformMps {
        &self.mps
    }

    pub fn rep(&self) -> &[Mat] {
        &self.rep
    }
}

fn rotate(r: &Mat, a: &[Mat]) -> Vec<Mat> {
    (0..a.len())
        .map(|i| {
            let mut acc = Array2::zeros(a[0].dim());
            for (j, aj) in a.iter().enumerate() {
                let c = r[(i, j)];
                if c.norm() > 0.0 {
                    acc = acc + aj.mapv(|z| z * c);
                }
            }
            acc
        })
        .collect()
}

impl Transfer for SymmetricMps {
    fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    fn bond(&self) -> usize {
        self.mps.bond()
    }

    fn apply(&self, g: usize, x: &Mat) -> Mat {
        let mut out = Array2::zeros(x.dim());
        for (at, a) in self.rotated[g].iter().zip(self.mps.tensors()) {
            out = out + at.dot(x).dot(&dagger(a));
        }
        out
    }

    fn apply_adjoint(&self, x: &Mat) -> Mat {
        let mut out = Array2::zeros(x.dim());
        for a in self.mps.tensors() {
            out = out + dagger(a).dot(x).dot(a);
        }
        out
    }

    fn relation_residual(&self, g: usize, v: &Mat, theta: f64) -> f64 {
        let ph = C64::from_polar(1.0, theta);
        let vd = dagger(v);
        let mut r2 = 0.0;
        let mut norm = 0.0;
        for (at, a) in self.rotated[g].iter().zip(self.mps.tensors()) {
            let diff = at - &vd.dot(a).dot(v).mapv(|z| z * ph);
            r2 += frobenius(&diff).powi(2);
            norm += frobenius(a).powi(2);
        }
        (r2 / norm).sqrt()
    }
}

/// Operator-Schmidt decomposition `U = sum_s L_s (x) R_s` of an operator on
/// two sites of dimension `d` (`U` indexed `(a b),(a' b')`, first site
/// slowest). Terms below `1e-13` of the largest weight are dropped.
pub fn operator_schmidt(u: &Mat, d: usize) -> Result<Vec<(Mat, Mat)>> {
    let mut t = Array2::<C64>::zeros((d * d, d * d));
    for a in 0..d {
        for b in 0..d {
            for ap in 0..d {
                for bp in 0..d {
                    t[(a * d + ap, b * d + bp)] = u[(a * d + b, ap * d + bp)];
                }
            }
        }
    }
    let (uu, s, vt) = t.svd(true, true)?;
    let (uu, vt) = (uu.expect("U"), vt.expect("Vt"));
    let smax = s.iter().cloned().fold(0.0_f64, f64::max);
    let mut terms = Vec::new();
    for k in 0..s.len() {
        if s[k] <= 1e-13 * smax {
            continue;
        }
        let w = s[k].sqrt();
        let l = Array2::from_shape_fn((d, d), |(a, ap)| uu[(a * d + ap, k)] * w);
        let r = Array2::from_shape_fn((d, d), |(b, bp)| vt[(k, b * d + bp)] * w);
        terms.push((l, r));
    }
    Ok(terms)
}

/// Per-element data of the mixed transfer map of a [`BrickworkMps`]: for
/// each operator-Schmidt term `Ka (x) Kb` of the outer-conjugated symmetry,
/// `P1[(s,s'),(j1,j1')] = (R_s'† Ka R_s)[j1',j1]` and
/// `P2[(j2,j2'),(t,t')] = (L_t'† Kb L_t)[j2',j2]`.
struct Prepared {
    terms: Vec<(Mat, Mat)>,
}

/// Two-site block of a uniform MPS after a uniform brickwork circuit of depth
/// at most 3: the first (even) layer is folded into the block tensor, the odd
/// layer is split across the block boundary by an operator-Schmidt
/// decomposition, and the last even layer conjugates the physical symmetry.
pub struct BrickworkMps {
    group: Arc<FiniteGroup>,
    d: usize,
    inner_bond: usize,
    /// `F[(j1, a), (j2, b)] = M^{j1 j2}[a, b]`.
    f: Mat,
    /// Ops on the left site of the block, incoming bond index.
    left_ops: Vec<Mat>,
    /// Ops on the right site of the block, outgoing bond index.
    right_ops: Vec<Mat>,
    outer: Option<Mat>,
    block_rep: Vec<Mat>,
    cache: Mutex<HashMap<usize, Arc<Prepared>>>,
}

impl BrickworkMps {
    /// `gates[l]` is the two-site gate of layer `l`; layer 0 acts inside
    /// blocks `(2k, 2k+1)`, layer 1 across them, layer 2 inside again.
    pub fn new(base: &SymmetricMps, gates: &[Mat]) -> Result<Self> {
        if gates.len() > 3 {
            return Err(Error::InvalidArgument(format!(
                "the uniform MPS route supports circuit depth <= 3, got {}",
                gates.len()
            )));
        }
        let d = base.mps.physical_dim();
        let dd = d * d;
        for g in gates {
            if g.dim() != (dd, dd) {
                return Err(Error::DimensionMismatch(format!("gate must be {dd}x{dd}")));
            }
        }
        let a = base.mps.tensors();
        let bond = base.mps.bond();
        let pairs: Vec<Mat> = (0..dd).map(|k| a[k / d].dot(&a[k % d])).collect();
        let inner: Vec<Mat> = match gates.first() {
            Some(u1) => rotate(u1, &pairs),
            None => pairs,
        };
        let mut f = Array2::zeros((d * bond, d * bond));
        for j1 in 0..d {
            for j2 in 0..d {
                let m = &inner[j1 * d + j2];
                for al in 0..bond {
                    for be in 0..bond {
                        f[(j1 * bond + al, j2 * bond + be)] = m[(al, be)];
                    }
                }
            }
        }
        let (left_ops, right_ops) = match gates.get(1) {
            Some(u2) => {
                // U2 acts on (right site of block k, left site of block k+1)
                let terms = operator_schmidt(u2, d)?;
                let right: Vec<Mat> = terms.iter().map(|(l, _)| l.clone()).collect();
                let left: Vec<Mat> = terms.iter().map(|(_, r)| r.clone()).collect();
                (left, right)
            }
            None => (vec![identity(d)], vec![identity(d)]),
        };
        let block_rep = base.rep.iter().map(|r| kron(r, r)).collect();
        Ok(BrickworkMps {
            group: base.group.clone(),
            d,
            inner_bond: bond,
            f,
            left_ops,
            right_ops,
            outer: gates.get(2).cloned(),
            block_rep,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn depth_bond(&self) -> (usize, usize) {
        (self.left_ops.len(), self.inner_bond)
    }

    pub fn block_rep(&self) -> &[Mat] {
        &self.block_rep
    }

    fn prepared(&self, g: usize) -> Arc<Prepared> {
        if let Some(p) = self.cache.lock().unwrap().get(&g) {
            return p.clone();
        }
        let k = match &self.outer {
            Some(u3) => dagger(u3).dot(&self.block_rep[g]).dot(u3),
            None => self.block_rep[g].clone(),
        };
        let d = self.d;
        let r = self.left_ops.len();
        let kterms = operator_schmidt(&k, d).expect("operator SVD");
        let mut terms = Vec::with_capacity(kterms.len());
        for (ka, kb) in &kterms {
            let mut p1 = Array2::zeros((r * r, d * d));
            let mut p2 = Array2::zeros((d * d, r * r));
            for sp in 0..r {
                let la = dagger(&self.left_ops[sp]).dot(ka);
                let lb = dagger(&self.right_ops[sp]).dot(kb);
                for s in 0..r {
                    let m1 = la.dot(&self.left_ops[s]);
                    let m2 = lb.dot(&self.right_ops[s]);
                    for j in 0..d {
                        for jp in 0..d {
                            p1[(s * r + sp, j * d + jp)] = m1[(jp, j)];
                            p2[(j * d + jp, s * r + sp)] = m2[(jp, j)];
                        }
                    }
                }
            }
            terms.push((p1, p2));
        }
        let p = Arc::new(Prepared { terms });
        self.cache.lock().unwrap().insert(g, p.clone());
        p
    }

    /// Explicit blocked tensors (for testing small cases): index
    /// `i1*d + i2`, bond `s*D + a`.
    pub fn explicit_tensors(&self) -> Vec<Mat> {
        let (d, bd, r) = (self.d, self.inner_bond, self.left_ops.len());
        let mut out = Vec::with_capacity(d * d);
        for i1 in 0..d {
            for i2 in 0..d {
                let mut c = Array2::zeros((r * bd, r * bd));
                for s in 0..r {
                    for t in 0..r {
                        for j1 in 0..d {
                            for j2 in 0..d {
                                let w = self.left_ops[s][(i1, j1)] * self.right_ops[t][(i2, j2)];
                                if w.norm() == 0.0 {
                                    continue;
                                }
                                for al in 0..bd {
                                    for be in 0..bd {
                                        c[(s * bd + al, t * bd + be)] += w * self.f[(j1 * bd + al, j2 * bd + be)];
                                    }
                                }
                            }
                        }
                    }
                }
                out.push(c);
            }
        }
        match &self.outer {
            Some(u3) => rotate(u3, &out),
            None => out,
        }
    }
}

/// `Xr[(t,t'),(b,b')] = X[t*D+b, t'*D+b']` and back.
fn split_pairs(x: &Mat, r: usize, bd: usize) -> Mat {
    let mut out = Array2::zeros((r * r, bd * bd));
    for t in 0..r {
        for tp in 0..r {
            for b in 0..bd {
                for bp in 0..bd {
                    out[(t * r + tp, b * bd + bp)] = x[(t * bd + b, tp * bd + bp)];
                }
            }
        }
    }
    out
}

fn join_pairs(xr: &Mat, r: usize, bd: usize) -> Mat {
    let mut out = Array2::zeros((r * bd, r * bd));
    for t in 0..r {
        for tp in 0..r {
            for b in 0..bd {
                for bp in 0..bd {
                    out[(t * bd + b, tp * bd + bp)] = xr[(t * r + tp, b * bd + bp)];
                }
            }
        }
    }
    out
}

impl BrickworkMps {
    fn stages(&self, p1: &Mat, p2: &Mat, x: &Mat) -> Mat {
        let (d, bd, r) = (self.d, self.inner_bond, self.left_ops.len());
        let z = p2.dot(&split_pairs(x, r, bd)); // [(j2,j2'),(b,b')]
        let w = self.f.dot(&join_pairs(&z, d, bd)).dot(&dagger(&self.f)); // [(j1 a),(j1' a')]
        join_pairs(&p1.dot(&split_pairs(&w, d, bd)), r, bd)
    }

    fn stages_adjoint(&self, p1: &Mat, p2: &Mat, y: &Mat) -> Mat {
        let (d, bd, r) = (self.d, self.inner_bond, self.left_ops.len());
        let w = join_pairs(&dagger(p1).dot(&split_pairs(y, r, bd)), d, bd);
        let z = dagger(&self.f).dot(&w).dot(&self.f);
        join_pairs(&dagger(p2).dot(&split_pairs(&z, d, bd)), r, bd)
    }
}

impl Transfer for BrickworkMps {
    fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    fn bond(&self) -> usize {
        self.left_ops.len() * self.inner_bond
    }

    fn apply(&self, g: usize, x: &Mat) -> Mat {
        let prep = self.prepared(g);
        let mut out = Array2::zeros(x.dim());
        for (p1, p2) in &prep.terms {
            out = out + self.stages(p1, p2, x);
        }
        out
    }

    fn apply_adjoint(&self, y: &Mat) -> Mat {
        let prep = self.prepared(self.group.identity());
        let mut out = Array2::zeros(y.dim());
        for (p1, p2) in &prep.terms {
            out = out + self.stages_adjoint(p1, p2, y);
        }
        out
    }
}

/// Dominant eigenpair of a linear map on `D x D` matrices.
#[derive(Debug, Clone)]
pub struct Dominant {
    pub value: C64,
    pub vector: Mat,
    /// Modulus of the next eigenvalue (only computed when requested).
    pub second: Option<f64>,
}

pub const POWER_TOL: f64 = 1e-12;
pub const POWER_MAX_ITER: usize = 10_000;
/// Bond dimensions up to this use a dense eigensolver.
pub const DENSE_EIG_MAX_BOND: usize = 8;

fn superoperator(bond: usize, map: &dyn Fn(&Mat) -> Mat) -> Mat {
    let n = bond * bond;
    let mut s = Array2::zeros((n, n));
    for a in 0..bond {
        for b in 0..bond {
            let mut e = Array2::zeros((bond, bond));
            e[(a, b)] = C64::new(1.0, 0.0);
            let y = map(&e);
            for (k, v) in y.iter().enumerate() {
                s[(k, a * bond + b)] = *v;
            }
        }
    }
    s
}

fn dense_dominant(bond: usize, map: &dyn Fn(&Mat) -> Mat, want_second: bool) -> Result<Dominant> {
    let s = superoperator(bond, map);
    let (vals, vecs) = s.eig()?;
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&i, &j| vals[j].norm().partial_cmp(&vals[i].norm()).unwrap().then(i.cmp(&j)));
    let top = order[0];
    let vector = Array2::from_shape_fn((bond, bond), |(a, b)| vecs[(a * bond + b, top)]);
    let second = want_second.then(|| order.get(1).map_or(0.0, |&k| vals[k].norm()));
    Ok(Dominant { value: vals[top], vector, second })
}

fn normalize(x: &Mat) -> Mat {
    let n = frobenius(x);
    x.mapv(|z| z / n)
}

fn mat_inner(a: &Mat, b: &Mat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn power_iteration(bond: usize, map: &dyn Fn(&Mat) -> Mat, seed: u64) -> Result<(C64, Mat)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = normalize(&ginibre(bond, bond, &mut rng));
    let mut residual = f64::INFINITY;
    for _ in 0..POWER_MAX_ITER {
        let y = map(&x);
        let lambda = mat_inner(&x, &y);
        residual = frobenius(&(&y - &x.mapv(|z| z * lambda)));
        if residual <= POWER_TOL * lambda.norm().max(1e-300) {
            return Ok((lambda, x));
        }
        let ny = frobenius(&y);
        if ny == 0.0 {
            return Ok((C64::new(0.0, 0.0), x));
        }
        x = y.mapv(|z| z / ny);
    }
    Err(Error::NoConvergence { iterations: POWER_MAX_ITER, residual })
}

/// Dominant eigenpair of `E_g`; with `want_second` (identity element only)
/// also the modulus of the subleading eigenvalue, by deflation against the
/// left fixed point.
pub fn dominant<T: Transfer + ?Sized>(t: &T, g: usize, want_second: bool) -> Result<Dominant> {
    let bond = t.bond();
    let map = |x: &Mat| t.apply(g, x);
    if bond <= DENSE_EIG_MAX_BOND {
        return dense_dominant(bond, &map, want_second);
    }
    let (value, vector) = power_iteration(bond, &map, 0x5eed ^ g as u64)?;
    if !want_second {
        return Ok(Dominant { value, vector, second: None });
    }
    let adj = |x: &Mat| t.apply_adjoint(x);
    let (_, left) = power_iteration(bond, &adj, 0x1ef7)?;
    let denom = mat_inner(&left, &vector);
    let project = |y: &Mat| -> Mat {
        let c = mat_inner(&left, y) / denom;
        y - &vector.mapv(|z| z * c)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0xdef1);
    let mut y = normalize(&project(&ginibre(bond, bond, &mut rng)));
    let mut est = 0.0_f64;
    for k in 0..200 {
        let ny = project(&map(&y));
        let nrm = frobenius(&ny);
        // geometric mean over consecutive steps smooths complex pairs
        est = if k == 0 { nrm } else { (est * nrm).sqrt() };
        if nrm < 1e-13 * value.norm() {
            est = nrm;
            break;
        }
        y = ny.mapv(|z| z / nrm);
    }
    Ok(Dominant { value, vector, second: Some(est) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::clock_shift_rep;
    use crate::state::build_eps_dense;
    use rand::SeedableRng;

    #[test]
    fn eps_transfer_is_rank_one() {
        let p = clock_shift_rep(2, 1).unwrap();
        let m = SymmetricMps::eps(&p).unwrap();
        let dom = dominant(&m, 0, true).unwrap();
        assert!((dom.value - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(dom.second.unwrap() < 1e-12);
        let x = dom.vector.mapv(|z| z / dom.vector[(0, 0)]);
        assert!(frobenius(&(x - identity(2))) < 1e-12);
    }

    #[test]
    fn product_mps_has_scalar_transfer() {
        let g = Arc::new(crate::group::builtin_group("Z2").unwrap());
        let m = UniformMps::new(vec![identity(1)]).unwrap();
        let s = SymmetricMps::new(g, m, vec![identity(1), identity(1)]).unwrap();
        let dom = dominant(&s, 0, true).unwrap();
        assert!((dom.value - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ring_contraction_matches_dense_eps() {
        for (n, q) in [(2, 1), (3, 1)] {
            let r = clock_shift_rep(n, q).unwrap();
            let mps = build_eps_mps(&r);
            for sites in 2..=4 {
                if n == 3 && sites == 4 {
                    continue;
                }
                let amps = mps.ring_amplitudes(sites);
                let dense = build_eps_dense(&r, sites).unwrap();
                let ov = crate::linalg::inner(&amps, dense.amplitudes()).norm() / crate::linalg::vec_norm(&amps);
                assert!((ov - 1.0).abs() < 1e-10, "n={n} N={sites}");
            }
        }
    }

    #[test]
    fn operator_schmidt_reassembles() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = crate::linalg::haar_unitary(9, &mut rng).unwrap();
        let terms = operator_schmidt(&u, 3).unwrap();
        let sum = terms.iter().fold(Array2::zeros((9, 9)), |acc, (l, r)| acc + kron(l, r));
        assert!(frobenius(&(sum - u)) < 1e-12);
    }

    fn brickwork_fixture(depth: usize) -> (SymmetricMps, BrickworkMps) {
        let p = clock_shift_rep(2, 1).unwrap();
        let base = SymmetricMps::eps(&p).unwrap();
        let spec = crate::state::SiteSpec::uniform(p.group().clone(), base.rep().to_vec(), 2).unwrap();
        let gates: Vec<Mat> = (0..depth)
            .map(|l| crate::circuits::sample_equivariant_gate(&spec, &[0, 1], 100 + l as u64).unwrap().matrix)
            .collect();
        let bw = BrickworkMps::new(&base, &gates).unwrap();
        (base, bw)
    }

    #[test]
    fn staged_transfer_matches_explicit_tensors() {
        for depth in 0..=3 {
            let (base, bw) = brickwork_fixture(depth);
            let tensors = bw.explicit_tensors();
            let explicit = SymmetricMps::new(
                base.group.clone(),
                UniformMps::new(tensors).unwrap(),
                bw.block_rep().to_vec(),
            )
            .unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let x = ginibre(bw.bond(), bw.bond(), &mut rng);
            let y = ginibre(bw.bond(), bw.bond(), &mut rng);
            for g in 0..4 {
                let d = frobenius(&(bw.apply(g, &x) - explicit.apply(g, &x)));
                assert!(d < 1e-10, "depth {depth} g {g}: {d}");
            }
            let lhs = mat_inner(&y, &bw.apply(0, &x));
            let rhs = mat_inner(&bw.apply_adjoint(&y), &x);
            assert!((lhs - rhs).norm() < 1e-10);
            let d = frobenius(&(bw.apply_adjoint(&y) - explicit.apply_adjoint(&y)));
            assert!(d < 1e-10);
        }
    }

    #[test]
    fn brickwork_transfer_stays_normalized() {
        let (_, bw) = brickwork_fixture(3);
        let dom = dominant(&bw, 0, true).unwrap();
        assert!((dom.value - C64::new(1.0, 0.0)).norm() < 1e-9, "{}", dom.value);
        assert!(dom.second.unwrap() < 0.5);
    }
}
