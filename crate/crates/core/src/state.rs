//! Dense state vectors on a periodic ring of sites.
//!
//! Amplitudes are stored site-major: site 0 is the slowest index. Every
//! partial trace, gate application and Schmidt decomposition goes through
//! [`Layout`], which splits the flat index into a region part and its
//! complement.

use std::sync::Arc;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{dagger, eigh, eigvalsh, frobenius, identity, inner, kron, unitarity_residual, vec_norm, CVec, Mat, C64};
use crate::projective::ProjectiveRep;

/// Default amplitude cap for dense vectors.
pub const DEFAULT_DENSE_CAP: usize = 1 << 20;
pub const NORM_TOL: f64 = 1e-10;

/// Amplitude cap, overridable through `SPT_DENSE_CAP`.
pub fn dense_cap() -> usize {
    std::env::var("SPT_DENSE_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_DENSE_CAP)
}

pub(crate) fn check_cap(needed: usize) -> Result<()> {
    let cap = dense_cap();
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    Ok(())
}

/// Contiguous run of sites on the ring, wrapping allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RingArc {
    pub start: usize,
    pub len: usize,
}

impl RingArc {
    pub fn new(start: usize, len: usize) -> Self {
        RingArc { start, len }
    }

    pub fn sites(&self, n: usize) -> Vec<usize> {
        (0..self.len).map(|k| (self.start + k) % n).collect()
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.len == 0 || self.len > n || self.start >= n {
            return Err(Error::InvalidArgument(format!(
                "arc {}:{} is not valid on a ring of {n} sites",
                self.start, self.len
            )));
        }
        Ok(())
    }

    pub fn complement(&self, n: usize) -> Option<RingArc> {
        (self.len < n).then(|| RingArc::new((self.start + self.len) % n, n - self.len))
    }

    /// `"start:len"`
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("arc '{s}' must look like start:len"));
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        Ok(RingArc::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
    }
}

/// Site dimensions and on-site ordinary representations.
#[derive(Debug, Clone)]
pub struct SiteSpec {
    group: Arc<FiniteGroup>,
    dims: Vec<usize>,
    reps: Vec<Arc<Vec<Mat>>>,
}

/// Tolerance for the homomorphism property of site representations.
pub const SITE_REP_TOL: f64 = 1e-10;

impl SiteSpec {
    pub fn new(group: Arc<FiniteGroup>, reps: Vec<Arc<Vec<Mat>>>) -> Result<Self> {
        if reps.is_empty() {
            return Err(Error::InvalidArgument("a ring needs at least one site".into()));
        }
        let mut dims = Vec::with_capacity(reps.len());
        for (j, rep) in reps.iter().enumerate() {
            check_ordinary(&group, rep).map_err(|e| match e {
                Error::InvalidArgument(m) => Error::InvalidArgument(format!("site {j}: {m}")),
                other => other,
            })?;
            dims.push(rep[0].nrows());
        }
        let spec = SiteSpec { group, dims, reps };
        check_cap(spec.total_dim_saturating())?;
        Ok(spec)
    }

    /// `n` copies of the same site representation.
    pub fn uniform(group: Arc<FiniteGroup>, rep: Vec<Mat>, n: usize) -> Result<Self> {
        let rep = Arc::new(rep);
        SiteSpec::new(group, vec![rep; n])
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn n_sites(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, site: usize) -> usize {
        self.dims[site]
    }

    pub fn site_rep(&self, site: usize) -> &Arc<Vec<Mat>> {
        &self.reps[site]
    }

    pub fn rep(&self, site: usize, g: usize) -> &Mat {
        &self.reps[site][g]
    }

    fn total_dim_saturating(&self) -> usize {
        self.dims.iter().fold(1_usize, |a, &d| a.saturating_mul(d))
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn region_dim(&self, sites: &[usize]) -> usize {
        sites.iter().fold(1_usize, |a, &s| a.saturating_mul(self.dims[s]))
    }

    /// `R_win(g) = kron of the site matrices`, in the order given.
    pub fn window_rep(&self, sites: &[usize], g: usize) -> Mat {
        sites.iter().fold(identity(1), |acc, &s| kron(&acc, self.rep(s, g)))
    }

    /// Site-wise tensor product of two rings of equal length.
    pub fn stacked(a: &SiteSpec, b: &SiteSpec) -> Result<SiteSpec> {
        if !crate::cocycle::same_group(&a.group, &b.group) {
            return Err(Error::GroupMismatch);
        }
        if a.n_sites() != b.n_sites() {
            return Err(Error::DimensionMismatch("stacked rings need equal lengths".into()));
        }
        let reps = (0..a.n_sites())
            .map(|j| Arc::new(a.reps[j].iter().zip(b.reps[j].iter()).map(|(x, y)| kron(x, y)).collect()))
            .collect();
        SiteSpec::new(a.group.clone(), reps)
    }

    fn check_sites(&self, sites: &[usize]) -> Result<()> {
        let n = self.n_sites();
        let mut seen = vec![false; n];
        for &s in sites {
            if s >= n {
                return Err(Error::InvalidArgument(format!("site {s} is outside the ring of {n} sites")));
            }
            if seen[s] {
                return Err(Error::InvalidArgument(format!("site {s} listed twice")));
            }
            seen[s] = true;
        }
        Ok(())
    }
}

/// Check unitarity and `R(g)R(h) = R(gh)`.
pub fn check_ordinary(group: &FiniteGroup, rep: &[Mat]) -> Result<()> {
    let n = group.order();
    if rep.len() != n {
        return Err(Error::DimensionMismatch(format!("{} matrices for a group of order {n}", rep.len())));
    }
    let d = rep[0].nrows();
    for (g, m) in rep.iter().enumerate() {
        if m.dim() != (d, d) {
            return Err(Error::DimensionMismatch(format!("matrix {g} is not {d}x{d}")));
        }
        let r = unitarity_residual(m);
        if r > SITE_REP_TOL {
            return Err(Error::InvalidArgument(format!("R({g}) is not unitary (residual {r:.3e})")));
        }
    }
    for g in 0..n {
        for h in 0..n {
            let r = frobenius(&(rep[g].dot(&rep[h]) - &rep[group.mul(g, h)]));
            if r > SITE_REP_TOL {
                return Err(Error::InvalidArgument(format!(
                    "R({g})R({h}) != R({g}{h}) (residual {r:.3e}); site representations must be ordinary"
                )));
            }
        }
    }
    Ok(())
}

/// Index split of the flat amplitude vector into a region and its
/// complement: amplitude `offs[a] + bases[b]` has region configuration `a`
/// (first listed site slowest) and complement configuration `b`.
pub struct Layout {
    pub offs: Vec<usize>,
    pub bases: Vec<usize>,
}

impl Layout {
    pub fn new(dims: &[usize], sites: &[usize]) -> Layout {
        let n = dims.len();
        let mut strides = vec![1_usize; n];
        for j in (0..n.saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * dims[j + 1];
        }
        let mut in_region = vec![false; n];
        for &s in sites {
            in_region[s] = true;
        }
        let expand = |list: &[usize]| -> Vec<usize> {
            let mut out = vec![0_usize];
            for &s in list {
                let mut next = Vec::with_capacity(out.len() * dims[s]);
                for &o in &out {
                    for k in 0..dims[s] {
                        next.push(o + k * strides[s]);
                    }
                }
                out = next;
            }
            out
        };
        let rest: Vec<usize> = (0..n).filter(|&j| !in_region[j]).collect();
        Layout { offs: expand(sites), bases: expand(&rest) }
    }

    /// Amplitudes as a `region x complement` matrix (column-major storage).
    pub fn gather(&self, amps: &CVec) -> Mat {
        let src = amps.as_slice().expect("contiguous amplitudes");
        let mut buf = Vec::with_capacity(self.offs.len() * self.bases.len());
        for &base in &self.bases {
            buf.extend(self.offs.iter().map(|&off| src[base + off]));
        }
        Array2::from_shape_vec((self.bases.len(), self.offs.len()), buf).expect("layout shape").reversed_axes()
    }

    pub fn scatter(&self, m: &Mat, amps: &mut CVec) {
        let dst = amps.as_slice_mut().expect("contiguous amplitudes");
        let mt = m.t();
        let mt = mt.as_standard_layout();
        let src = mt.as_slice().expect("standard layout");
        let na = self.offs.len();
        for (b, &base) in self.bases.iter().enumerate() {
            let row = &src[b * na..(b + 1) * na];
            for (&off, &z) in self.offs.iter().zip(row) {
                dst[base + off] = z;
            }
        }
    }
}

/// `(row, entry)` of the single nonzero in each column, if `m` has that shape.
fn monomial(m: &Mat) -> Option<Vec<(usize, C64)>> {
    let mut out = Vec::with_capacity(m.ncols());
    for col in m.columns() {
        let mut nz = col.iter().enumerate().filter(|(_, z)| **z != C64::new(0.0, 0.0));
        let first = nz.next()?;
        if nz.next().is_some() {
            return None;
        }
        out.push((first.0, *first.1));
    }
    Some(out)
}

/// Monomial matrix acting on one tensor factor of `amps`.
fn permute_site(amps: &CVec, stride: usize, d: usize, mono: &[(usize, C64)]) -> CVec {
    let src = amps.as_slice().expect("contiguous amplitudes");
    let mut out = vec![C64::new(0.0, 0.0); src.len()];
    let block = stride * d;
    for (hi, chunk) in src.chunks(block).enumerate() {
        let base = hi * block;
        for (k, &(row, z)) in mono.iter().enumerate() {
            let from = &chunk[k * stride..(k + 1) * stride];
            let to = &mut out[base + row * stride..base + (row + 1) * stride];
            for (t, f) in to.iter_mut().zip(from) {
                *t = z * f;
            }
        }
    }
    CVec::from(out)
}

/// Normalized state vector on a [`SiteSpec`].
#[derive(Debug, Clone)]
pub struct DenseState {
    spec: Arc<SiteSpec>,
    amps: CVec,
}

impl DenseState {
    pub fn new(spec: Arc<SiteSpec>, amps: CVec) -> Result<Self> {
        if amps.len() != spec.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a ring of dimension {}",
                amps.len(),
                spec.total_dim()
            )));
        }
        let norm = vec_norm(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(DenseState { spec, amps })
    }

    pub fn spec(&self) -> &Arc<SiteSpec> {
        &self.spec
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amps
    }

    pub fn n_sites(&self) -> usize {
        self.spec.n_sites()
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amps)
    }

    /// `<self|other>`
    pub fn overlap(&self, other: &DenseState) -> C64 {
        inner(&self.amps, &other.amps)
    }

    fn layout(&self, sites: &[usize]) -> Result<Layout> {
        self.spec.check_sites(sites)?;
        Ok(Layout::new(self.spec.dims(), sites))
    }

    /// Apply an operator on the listed sites (first site slowest in the
    /// operator's index). The operator need not be unitary; the result is
    /// returned unnormalized as a raw vector.
    pub fn apply_raw(&self, sites: &[usize], op: &Mat) -> Result<CVec> {
        let lay = self.layout(sites)?;
        let m = lay.offs.len();
        if op.dim() != (m, m) {
            return Err(Error::DimensionMismatch(format!("operator is {:?}, region dimension is {m}", op.dim())));
        }
        let x = lay.gather(&self.amps);
        let y = op.dot(&x);
        let mut out = self.amps.clone();
        lay.scatter(&y, &mut out);
        Ok(out)
    }

    /// Apply a unitary on the listed sites.
    pub fn apply_operator(&self, sites: &[usize], op: &Mat) -> Result<DenseState> {
        let r = unitarity_residual(op);
        if r > 1e-10 {
            return Err(Error::InvalidArgument(format!("gate is not unitary (residual {r:.3e})")));
        }
        Ok(DenseState { spec: self.spec.clone(), amps: self.apply_raw(sites, op)? })
    }

    /// Same as [`apply_operator`](Self::apply_operator) on a contiguous window.
    pub fn apply_gate(&self, window: RingArc, gate: &Mat) -> Result<DenseState> {
        window.validate(self.n_sites())?;
        self.apply_operator(&window.sites(self.n_sites()), gate)
    }

    /// `prod_{k in sites} R_k(g)`.
    pub fn apply_symmetry_on(&self, g: usize, sites: &[usize]) -> Result<DenseState> {
        self.spec.check_sites(sites)?;
        let mut amps = self.amps.clone();
        let dims = self.spec.dims();
        for &s in sites {
            let r = self.spec.rep(s, g);
            if let Some(mono) = monomial(r) {
                let stride: usize = dims[s + 1..].iter().product();
                amps = permute_site(&amps, stride, dims[s], &mono);
            } else {
                let lay = Layout::new(dims, &[s]);
                let y = r.dot(&lay.gather(&amps));
                lay.scatter(&y, &mut amps);
            }
        }
        Ok(DenseState { spec: self.spec.clone(), amps })
    }

    /// Symmetry restricted to an arc; `None` acts on the whole ring.
    pub fn apply_symmetry(&self, g: usize, arc: Option<RingArc>) -> Result<DenseState> {
        let sites: Vec<usize> = match arc {
            Some(a) => {
                a.validate(self.n_sites())?;
                a.sites(self.n_sites())
            }
            None => (0..self.n_sites()).collect(),
        };
        self.apply_symmetry_on(g, &sites)
    }

    /// `<psi| R(g) |psi>` for the whole ring.
    pub fn symmetry_overlap(&self, g: usize) -> Result<C64> {
        Ok(self.overlap(&self.apply_symmetry(g, None)?))
    }

    /// Largest `|1 - |<psi|R(g)psi>||` over the group.
    pub fn invariance_residual(&self) -> Result<f64> {
        let mut r = 0.0_f64;
        for g in 0..self.spec.group().order() {
            r = r.max((1.0 - self.symmetry_overlap(g)?.norm()).abs());
        }
        Ok(r)
    }

    /// Reduced density matrix on the listed sites (order as given).
    pub fn reduced_density(&self, sites: &[usize]) -> Result<Mat> {
        check_cap(self.spec.region_dim(sites))?;
        let x = self.layout(sites)?.gather(&self.amps);
        Ok(x.dot(&dagger(&x)))
    }

    /// `Tr_{complement} |phi><psi|` on the listed sites, where `phi = self`.
    pub fn cross_operator(&self, psi: &DenseState, sites: &[usize]) -> Result<Mat> {
        if self.amps.len() != psi.amps.len() || self.spec.dims() != psi.spec.dims() {
            return Err(Error::DimensionMismatch("states live on different rings".into()));
        }
        check_cap(self.spec.region_dim(sites))?;
        let lay = self.layout(sites)?;
        let a = lay.gather(&self.amps);
        let b = lay.gather(&psi.amps);
        Ok(a.dot(&dagger(&b)))
    }

    /// Schmidt coefficients squared across `sites | rest`, descending.
    pub fn schmidt_spectrum(&self, sites: &[usize]) -> Result<Vec<f64>> {
        self.spec.check_sites(sites)?;
        let n = self.n_sites();
        let rest: Vec<usize> = (0..n).filter(|s| !sites.contains(s)).collect();
        let small = if self.spec.region_dim(sites) <= self.spec.region_dim(&rest) { sites.to_vec() } else { rest };
        let mut vals = eigvalsh(&self.reduced_density(&small)?)?;
        for v in vals.iter_mut() {
            *v = v.max(0.0);
        }
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(vals)
    }

    /// State agreeing with `self` on the arc and factorized far from it: the
    /// arc is purified into the fewest complement sites nearest its two ends
    /// (alternating right, left); the remaining complement sites carry the
    /// dominant eigenvector of their single-site reduced density.
    pub fn truncate(&self, arc: RingArc) -> Result<DenseState> {
        let n = self.n_sites();
        arc.validate(n)?;
        let sites = arc.sites(n);
        let Some(comp) = arc.complement(n) else {
            return Ok(self.clone());
        };
        let comp_sites = comp.sites(n);
        let rho = self.reduced_density(&sites)?;
        let (vals, vecs) = eigh(&rho)?;
        let keep: Vec<usize> = (0..vals.len()).rev().filter(|&k| vals[k] > 1e-13).collect();
        let rank = keep.len();

        // purifier sites from both ends of the complement, right end first
        let mut purifier = Vec::new();
        let (mut lo, mut hi) = (0_usize, comp_sites.len());
        let mut cap = 1_usize;
        let mut take_right = true;
        while cap < rank && lo < hi {
            let s = if take_right {
                lo += 1;
                comp_sites[lo - 1]
            } else {
                hi -= 1;
                comp_sites[hi]
            };
            take_right = !take_right;
            cap = cap.saturating_mul(self.spec.dim(s));
            purifier.push(s);
        }
        if cap < rank {
            return Err(Error::PurificationRank { rank, available: cap });
        }
        purifier.sort_unstable();
        let filler: Vec<usize> = comp_sites.iter().copied().filter(|s| !purifier.contains(s)).collect();

        // arc (x) purifier block: sum_k sqrt(l_k) |u_k> |k>
        let mut block_sites = sites.clone();
        block_sites.extend(&purifier);
        let arc_dim = self.spec.region_dim(&sites);
        let pur_dim = self.spec.region_dim(&purifier);
        let mut block = Array1::<C64>::zeros(arc_dim * pur_dim);
        for (k, &col) in keep.iter().enumerate() {
            let amp = vals[col].sqrt();
            for a in 0..arc_dim {
                block[a * pur_dim + k] += vecs[(a, col)] * amp;
            }
        }
        let mut fill_vecs = Vec::new();
        for &s in &filler {
            let (v, u) = eigh(&self.reduced_density(&[s])?)?;
            let top = v.len() - 1;
            fill_vecs.push(u.column(top).to_owned());
        }
        let mut ordered = block_sites.clone();
        ordered.extend(&filler);
        // amplitudes in `ordered` site order, then scattered to ring order
        let mut flat = block;
        for v in &fill_vecs {
            let mut next = Array1::zeros(flat.len() * v.len());
            for (i, x) in flat.iter().enumerate() {
                for (j, y) in v.iter().enumerate() {
                    next[i * v.len() + j] = x * y;
                }
            }
            flat = next;
        }
        let lay = Layout::new(self.spec.dims(), &ordered);
        let mut amps = Array1::zeros(self.amps.len());
        for (a, &off) in lay.offs.iter().enumerate() {
            amps[off] = flat[a];
        }
        let nrm = vec_norm(&amps);
        DenseState::new(self.spec.clone(), amps.mapv(|z| z / nrm))
    }
}

/// Entangled-pair ring from a projective representation: site `j` is
/// `W (x) W*` with index `m*D + n`, bond `(n_j, m_{j+1})` in the maximally
/// entangled vector, site representation `Q (x) conj(Q)`.
pub fn build_eps_dense(rho: &ProjectiveRep, n_sites: usize) -> Result<DenseState> {
    if n_sites < 2 {
        return Err(Error::InvalidArgument("an entangled-pair ring needs at least 2 sites".into()));
    }
    let d = rho.dim();
    let site_rep: Vec<Mat> = rho.matrices().iter().map(|q| kron(q, &crate::linalg::conj(q))).collect();
    let dd = d * d;
    let needed = (0..n_sites).fold(1_usize, |a, _| a.saturating_mul(dd));
    check_cap(needed)?;
    let spec = Arc::new(SiteSpec::uniform(rho.group().clone(), site_rep, n_sites)?);
    let mut amps = Array1::<C64>::zeros(needed);
    let amp = C64::new((d as f64).powf(-(n_sites as f64) / 2.0), 0.0);
    let bonds = (0..n_sites).fold(1_usize, |a, _| a * d);
    let mut ns = vec![0_usize; n_sites];
    for mut code in 0..bonds {
        for j in (0..n_sites).rev() {
            ns[j] = code % d;
            code /= d;
        }
        let mut idx = 0_usize;
        for j in 0..n_sites {
            let m = ns[(j + n_sites - 1) % n_sites];
            idx = idx * dd + m * d + ns[j];
        }
        amps[idx] = amp;
    }
    DenseState::new(spec, amps)
}

/// Per-site character data of a product state.
#[derive(Debug, Clone)]
pub struct ProductInvariance {
    /// For each site, the character `chi(g)` of its vector when it spans a
    /// one-dimensional subrepresentation, else `None`.
    pub characters: Vec<Option<Vec<C64>>>,
    /// Largest `|R(g)v - chi(g) v|` over sites that do carry a character.
    pub residual: f64,
    /// Elements under which the product of characters is not 1.
    pub broken: Vec<usize>,
    pub invariant: bool,
}

/// Character of `v` under `rep` when `v` spans a one-dimensional
/// subrepresentation, with the residual `max_g |R(g) v - chi(g) v|`.
pub fn character_of(rep: &[Mat], v: &CVec) -> (Vec<C64>, f64) {
    let mut chi = Vec::with_capacity(rep.len());
    let mut res = 0.0_f64;
    for m in rep {
        let rv = m.dot(v);
        let c = inner(v, &rv);
        res = res.max(vec_norm(&(&rv - &v.mapv(|z| z * c))));
        chi.push(c);
    }
    (chi, res)
}

/// Tensor product of unit site vectors, with the character bookkeeping that
/// decides global invariance.
pub fn build_product_state(spec: Arc<SiteSpec>, vectors: &[CVec]) -> Result<(DenseState, ProductInvariance)> {
    let n = spec.n_sites();
    if vectors.len() != n {
        return Err(Error::DimensionMismatch(format!("{} vectors for {n} sites", vectors.len())));
    }
    check_cap(spec.total_dim_saturating())?;
    for (j, v) in vectors.iter().enumerate() {
        if v.len() != spec.dim(j) {
            return Err(Error::DimensionMismatch(format!("site {j} vector has length {}", v.len())));
        }
        let norm = vec_norm(v);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
    }
    let mut amps = Array1::from_elem(1, C64::new(1.0, 0.0));
    for v in vectors {
        let mut next = Array1::zeros(amps.len() * v.len());
        for (i, x) in amps.iter().enumerate() {
            for (k, y) in v.iter().enumerate() {
                next[i * v.len() + k] = x * y;
            }
        }
        amps = next;
    }
    let order = spec.group().order();
    let mut characters = Vec::with_capacity(n);
    let mut residual = 0.0_f64;
    let mut total = vec![C64::new(1.0, 0.0); order];
    let mut all_char = true;
    for (j, v) in vectors.iter().enumerate() {
        let (chi, res) = character_of(spec.site_rep(j), v);
        if res <= 1e-9 {
            residual = residual.max(res);
            for (t, c) in total.iter_mut().zip(&chi) {
                *t *= c;
            }
            characters.push(Some(chi));
        } else {
            all_char = false;
            characters.push(None);
        }
    }
    let state = DenseState::new(spec.clone(), amps)?;
    let broken: Vec<usize> = if all_char {
        (0..order).filter(|&g| (total[g] - C64::new(1.0, 0.0)).norm() > 1e-9).collect()
    } else {
        let mut b = Vec::new();
        for g in 0..order {
            if (state.symmetry_overlap(g)? - C64::new(1.0, 0.0)).norm() > 1e-9 {
                b.push(g);
            }
        }
        b
    };
    let invariant = broken.is_empty();
    Ok((state, ProductInvariance { characters, residual, broken, invariant }))
}

/// Site-wise tensor product of two states on rings of equal length: site
/// `j` of the result is `(site j of a) (x) (site j of b)`.
pub fn stacked_state(a: &DenseState, b: &DenseState) -> Result<DenseState> {
    let spec = Arc::new(SiteSpec::stacked(a.spec(), b.spec())?);
    check_cap(spec.total_dim_saturating())?;
    let n = spec.n_sites();
    let (da, db) = (a.spec().dims(), b.spec().dims());
    let mut amps = Array1::<C64>::zeros(spec.total_dim());
    let mut xa = vec![0_usize; n];
    let mut xb = vec![0_usize; n];
    for (ia, &za) in a.amplitudes().iter().enumerate() {
        if za.norm() == 0.0 {
            continue;
        }
        let mut c = ia;
        for j in (0..n).rev() {
            xa[j] = c % da[j];
            c /= da[j];
        }
        for (ib, &zb) in b.amplitudes().iter().enumerate() {
            if zb.norm() == 0.0 {
                continue;
            }
            let mut c = ib;
            for j in (0..n).rev() {
                xb[j] = c % db[j];
                c /= db[j];
            }
            let idx = (0..n).fold(0_usize, |acc, j| acc * da[j] * db[j] + xa[j] * db[j] + xb[j]);
            amps[idx] = za * zb;
        }
    }
    DenseState::new(spec, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, trace};
    use crate::projective::clock_shift_rep;

    fn basis(d: usize, k: usize) -> CVec {
        Array1::from_shape_fn(d, |i| if i == k { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    #[test]
    fn eps_pauli_two_sites() {
        let p = clock_shift_rep(2, 1).unwrap();
        let psi = build_eps_dense(&p, 2).unwrap();
        assert_eq!(psi.amplitudes().len(), 16);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        for g in 0..4 {
            assert!((psi.symmetry_overlap(g).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn eps_single_site_is_maximally_mixed() {
        for (n, q) in [(2, 1), (3, 1)] {
            let r = clock_shift_rep(n, q).unwrap();
            let psi = build_eps_dense(&r, 4).unwrap();
            let rho = psi.reduced_density(&[1]).unwrap();
            let target = identity(n * n).mapv(|z| z / (n * n) as f64);
            assert!(frobenius(&(rho - target)) < 1e-12);
            let s = psi.schmidt_spectrum(&[0, 1]).unwrap();
            assert_eq!(s.iter().filter(|&&x| x > 1e-12).count(), n * n);
            assert!(s.iter().take(n * n).all(|&x| (x - 1.0 / (n * n) as f64).abs() < 1e-12));
        }
    }

    #[test]
    fn one_dim_rep_gives_product_state() {
        let g = Arc::new(crate::group::builtin_group("Z2").unwrap());
        let r = crate::projective::trivial_rep(g);
        let psi = build_eps_dense(&r, 3).unwrap();
        assert_eq!(psi.amplitudes().len(), 1);
    }

    #[test]
    fn whole_ring_density_is_pure_projector() {
        let p = clock_shift_rep(2, 1).unwrap();
        let psi = build_eps_dense(&p, 3).unwrap();
        let rho = psi.reduced_density(&[0, 1, 2]).unwrap();
        assert!((trace(&rho.dot(&rho)).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_ring_symmetry_changes_only_endpoints() {
        let p = clock_shift_rep(2, 1).unwrap();
        let psi = build_eps_dense(&p, 6).unwrap();
        let phi = psi.apply_symmetry(2, Some(RingArc::new(1, 3))).unwrap();
        // sites 1..3 acted on; walls at cuts (0|1) and (3|4)
        for s in 0..6 {
            let d = frobenius(&(phi.reduced_density(&[s]).unwrap() - psi.reduced_density(&[s]).unwrap()));
            assert!(d < 1e-12, "site {s}");
        }
        let pair = |st: &DenseState| st.reduced_density(&[0, 1]).unwrap();
        assert!(frobenius(&(pair(&phi) - pair(&psi))) > 1e-3);
        let far = |st: &DenseState| st.reduced_density(&[1, 2]).unwrap();
        assert!(frobenius(&(far(&phi) - far(&psi))) < 1e-12);
    }

    #[test]
    fn swap_gate_on_product_state() {
        let g = Arc::new(crate::group::builtin_group("Z2").unwrap());
        let spec = Arc::new(SiteSpec::uniform(g, vec![identity(2), identity(2)], 3).unwrap());
        let (psi, inv) = build_product_state(spec.clone(), &[basis(2, 0), basis(2, 1), basis(2, 0)]).unwrap();
        assert!(inv.invariant);
        let mut swap = Array2::zeros((4, 4));
        for a in 0..2 {
            for b in 0..2 {
                swap[(b * 2 + a, a * 2 + b)] = c(1.0, 0.0);
            }
        }
        let out = psi.apply_gate(RingArc::new(0, 2), &swap).unwrap();
        let (expect, _) = build_product_state(spec, &[basis(2, 1), basis(2, 0), basis(2, 0)]).unwrap();
        assert!((out.overlap(&expect).norm() - 1.0).abs() < 1e-12);
        // wrapping window
        let out = psi.apply_gate(RingArc::new(2, 2), &swap).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn character_flagging() {
        let g = Arc::new(crate::group::builtin_group("Z2").unwrap());
        let sign = vec![identity(2), Array2::from_diag(&ndarray::arr1(&[c(1.0, 0.0), c(-1.0, 0.0)]))];
        let spec = Arc::new(SiteSpec::uniform(g, sign, 3).unwrap());
        let (_, inv) = build_product_state(spec.clone(), &[basis(2, 1), basis(2, 0), basis(2, 0)]).unwrap();
        assert!(!inv.invariant);
        assert_eq!(inv.broken, vec![1]);
        let (_, inv) = build_product_state(spec, &[basis(2, 1), basis(2, 1), basis(2, 0)]).unwrap();
        assert!(inv.invariant);
    }

    #[test]
    fn cross_operator_trace_and_rank_one() {
        let p = clock_shift_rep(2, 1).unwrap();
        let psi = build_eps_dense(&p, 4).unwrap();
        let m = psi.cross_operator(&psi, &[1, 2]).unwrap();
        assert!((trace(&m) - c(1.0, 0.0)).norm() < 1e-12);
        let g = Arc::new(crate::group::builtin_group("Z2").unwrap());
        let spec = Arc::new(SiteSpec::uniform(g, vec![identity(2), identity(2)], 2).unwrap());
        let v = Array1::from(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let (prod, _) = build_product_state(spec, &[v.clone(), basis(2, 0)]).unwrap();
        let m = prod.cross_operator(&prod, &[0]).unwrap();
        assert!(frobenius(&(m - crate::linalg::outer(&v, &v))) < 1e-12);
    }

    #[test]
    fn wall_cross_operator_is_proportional_to_unitary() {
        let p = clock_shift_rep(2, 1).unwrap();
        let psi = build_eps_dense(&p, 6).unwrap();
        let phi = psi.apply_symmetry(1, Some(RingArc::new(0, 3))).unwrap();
        // sites 0 and 2 carry the two wall operators
        let m = phi.cross_operator(&psi, &[0, 2]).unwrap();
        let s = crate::linalg::singular_values(&m).unwrap();
        assert!(s[0] > 1e-3);
        assert!(s.iter().all(|x| (x - s[0]).abs() < 1e-8), "{s:?}");
    }

    #[test]
    fn truncation_matches_on_arc() {
        let p = clock_shift_rep(2, 1).unwrap();
        let psi = build_eps_dense(&p, 5).unwrap();
        let arc = RingArc::new(1, 3);
        let t = psi.truncate(arc).unwrap();
        let sites = arc.sites(5);
        let d = frobenius(&(t.reduced_density(&sites).unwrap() - psi.reduced_density(&sites).unwrap()));
        assert!(d < 1e-9);
        let rank = t.schmidt_spectrum(&sites).unwrap().iter().filter(|&&x| x > 1e-12).count();
        assert!(rank <= 4);
        let t2 = t.truncate(arc).unwrap();
        assert!(frobenius(&(t2.reduced_density(&sites).unwrap() - t.reduced_density(&sites).unwrap())) < 1e-9);
    }

    #[test]
    fn truncation_of_product_state_is_itself() {
        let g = Arc::new(crate::group::builtin_group("Z2").unwrap());
        let spec = Arc::new(SiteSpec::uniform(g, vec![identity(2), identity(2)], 4).unwrap());
        let v = Array1::from(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let (prod, _) = build_product_state(spec, &[v.clone(), basis(2, 1), v.clone(), basis(2, 0)]).unwrap();
        let t = prod.truncate(RingArc::new(0, 2)).unwrap();
        assert!((t.overlap(&prod).norm() - 1.0).abs() < 1e-12, "{} {} {}", t.overlap(&prod), t.amplitudes(), prod.amplitudes());
    }

    #[test]
    fn cap_is_enforced() {
        let r = clock_shift_rep(3, 1).unwrap();
        assert!(matches!(build_eps_dense(&r, 7), Err(Error::CapExceeded { .. })));
    }
}
