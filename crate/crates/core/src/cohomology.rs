//! Exact second cohomology `H^2(G, U(1))` of small finite groups.
//!
//! Phases are handled additively: an exact cocycle with denominator `M` is a
//! residue vector `r in Z_M^{n^2}`. The coboundary map
//! `D: Z^n -> Z^{n^2}`, `(D mu)(g,h) = mu(g) + mu(h) - mu(gh)`, is diagonalized
//! once per group and working modulus. Membership `nu = d mu` for a U(1)-valued
//! `mu` is decided over `Z_L` with `L = lcm(M, n) * n`: if `nu = d mu` then
//! `mu(g)^n = prod_h nu(g,h)` is an `M`-th root, so `mu` takes values in the
//! `nM`-th roots and a solution modulo `L` exists whenever one exists at all.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

use crate::cocycle::{check_cocycle, normalize_gauge, pairing, ratio, Cochain1, Cocycle2, COCYCLE_TOL};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::snf::{diagonalize, inv_mod, mat_vec_mod, Diagonal};

/// Largest group order `enumerate_h2` accepts by default.
pub const DEFAULT_ORDER_BOUND: usize = 16;

fn coboundary_matrix(g: &FiniteGroup) -> Vec<Vec<i64>> {
    let n = g.order();
    let mut d = vec![vec![0_i64; n]; n * n];
    for a in 0..n {
        for b in 0..n {
            let row = &mut d[a * n + b];
            row[a] += 1;
            row[b] += 1;
            row[g.mul(a, b)] -= 1;
        }
    }
    d
}

fn cocycle_matrix(g: &FiniteGroup) -> Vec<Vec<i64>> {
    let n = g.order();
    let mut c = vec![vec![0_i64; n * n]; n * n * n];
    for a in 0..n {
        for b in 0..n {
            let ab = g.mul(a, b);
            for k in 0..n {
                let bk = g.mul(b, k);
                let row = &mut c[(a * n + b) * n + k];
                row[a * n + b] += 1;
                row[ab * n + k] += 1;
                row[b * n + k] -= 1;
                row[a * n + bk] -= 1;
            }
        }
    }
    c
}

type DiagCache = Mutex<HashMap<(FiniteGroup, i64), Arc<Diagonal>>>;

fn coboundary_diagonal(g: &FiniteGroup, modulus: i64) -> Result<Arc<Diagonal>> {
    static CACHE: OnceLock<DiagCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (g.clone(), modulus);
    if let Some(d) = cache.lock().unwrap().get(&key) {
        return Ok(d.clone());
    }
    let d = Arc::new(diagonalize(&coboundary_matrix(g), g.order(), modulus, true, true)?);
    cache.lock().unwrap().insert(key, d.clone());
    Ok(d)
}

/// Residues of `nu` rescaled to denominator `l`, flattened row-major.
fn residues(nu: &Cocycle2, l: u64) -> Result<Vec<i64>> {
    let (m, v) = nu.exact_parts().ok_or(Error::FloatMode)?;
    let f = l / m;
    Ok(v.iter().flatten().map(|&k| (k * f % l) as i64).collect())
}

fn working_modulus(nu: &Cocycle2) -> Result<u64> {
    let (m, _) = nu.exact_parts().ok_or(Error::FloatMode)?;
    let n = nu.order() as u64;
    m.lcm(&n).checked_mul(n).ok_or(Error::Overflow)
}

/// Coset of `r` in `Z_L^{n^2} / im D`, in the diagonal basis: entry `i` is
/// `(P r)_i` reduced modulo `gcd(s_i, L)` (modulo `L` past the rank).
fn class_vector(d: &Diagonal, r: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let l = d.modulus;
    let pr = mat_vec_mod(d.p.as_ref().expect("P tracked"), r, l);
    let moduli: Vec<i64> = (0..pr.len())
        .map(|i| if i < d.rank() { d.diag[i].gcd(&l) } else { l })
        .collect();
    let v = pr.iter().zip(&moduli).map(|(x, m)| x.rem_euclid(*m)).collect();
    (v, moduli)
}

/// Decide whether an exact cocycle is a coboundary of some U(1) cochain and
/// return a witness `mu` with `coboundary(mu) = nu`.
pub fn is_coboundary(nu: &Cocycle2) -> Result<Option<Cochain1>> {
    if !nu.is_exact() {
        return Err(Error::FloatMode);
    }
    let chk = check_cocycle(nu, COCYCLE_TOL);
    if !chk.holds {
        return Err(Error::NotCocycle { residual: chk.residual });
    }
    let l = working_modulus(nu)?;
    let li = i64::try_from(l).map_err(|_| Error::Overflow)?;
    let d = coboundary_diagonal(nu.group(), li)?;
    let r = residues(nu, l)?;
    let pr = mat_vec_mod(d.p.as_ref().expect("P tracked"), &r, li);
    let n = nu.order();
    let mut y = vec![0_i64; n];
    for (i, &b) in pr.iter().enumerate() {
        if i < d.rank() {
            let s = d.diag[i].rem_euclid(li);
            let g = s.gcd(&li);
            if b % g != 0 {
                return Ok(None);
            }
            let lg = li / g;
            let inv = inv_mod(s / g, lg).expect("coprime after dividing by gcd");
            y[i] = ((b / g) as i128 * inv as i128).rem_euclid(lg as i128) as i64;
        } else if b != 0 {
            return Ok(None);
        }
    }
    let mu = mat_vec_mod(d.q.as_ref().expect("Q tracked"), &y, li);
    Ok(Some(Cochain1::exact(nu.group().clone(), l, mu.into_iter().map(|x| x as u64).collect())?))
}

/// One class of `H^2` with a representative valued in `|G|`-th roots.
#[derive(Debug, Clone)]
pub struct ClassRep {
    pub index: usize,
    pub representative: Cocycle2,
    /// Coset vector at modulus `|G|^2` (see [`H2::moduli`]).
    pub coset: Vec<i64>,
    /// Order of the class in `H^2`.
    pub order: usize,
}

/// Enumerated `H^2(G, U(1))`.
#[derive(Debug, Clone)]
pub struct H2 {
    pub group: Arc<FiniteGroup>,
    /// Invariant factors `d_1 | d_2 | ...`; empty for the trivial group.
    pub invariant_factors: Vec<u64>,
    pub classes: Vec<ClassRep>,
    /// Moduli of the coset-vector coordinates.
    pub moduli: Vec<i64>,
    lookup: HashMap<Vec<i64>, usize>,
}

impl H2 {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of the class of `a * b`.
    pub fn product(&self, a: usize, b: usize) -> usize {
        let v = add_vec(&self.classes[a].coset, &self.classes[b].coset, &self.moduli);
        self.lookup[&v]
    }

    /// Index of the class of `nu^-1`.
    pub fn inverse(&self, a: usize) -> usize {
        let v: Vec<i64> = self.classes[a]
            .coset
            .iter()
            .zip(&self.moduli)
            .map(|(x, m)| (-x).rem_euclid(*m))
            .collect();
        self.lookup[&v]
    }

    /// `"Z2"`, `"Z2 x Z4"`, or `"0"` for the trivial group.
    pub fn structure(&self) -> String {
        if self.invariant_factors.is_empty() {
            "0".into()
        } else {
            self.invariant_factors.iter().map(|d| format!("Z{d}")).collect::<Vec<_>>().join(" x ")
        }
    }
}

fn add_vec(a: &[i64], b: &[i64], moduli: &[i64]) -> Vec<i64> {
    a.iter().zip(b).zip(moduli).map(|((x, y), m)| (x + y).rem_euclid(*m)).collect()
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Invariant factors of a finite abelian group from its element orders:
/// the number of cyclic factors of order at least `p^j` in the primary
/// decomposition is `log_p(|H[p^j]| / |H[p^{j-1}]|)`.
fn invariant_factors(orders: &[usize]) -> Vec<u64> {
    let size = orders.len() as u64;
    let mut per_prime: Vec<Vec<u64>> = Vec::new(); // prime powers, descending
    for p in prime_factors(size) {
        let mut powers = Vec::new();
        let mut prev = 1_usize;
        let mut j = 1;
        let mut counts = Vec::new();
        loop {
            let pj = p.pow(j) as usize;
            let c = orders.iter().filter(|&&o| pj % o == 0).count();
            if c == prev {
                break;
            }
            let mut ratio = c / prev;
            let mut k = 0;
            while ratio > 1 {
                ratio /= p as usize;
                k += 1;
            }
            counts.push(k); // number of factors with order >= p^j
            prev = c;
            j += 1;
        }
        for (idx, &k) in counts.iter().enumerate() {
            let next = counts.get(idx + 1).copied().unwrap_or(0);
            for _ in 0..(k - next) {
                powers.push(p.pow(idx as u32 + 1));
            }
        }
        powers.sort_unstable_by(|a, b| b.cmp(a));
        per_prime.push(powers);
    }
    let len = per_prime.iter().map(Vec::len).max().unwrap_or(0);
    let mut out: Vec<u64> = (0..len)
        .map(|i| per_prime.iter().map(|v| v.get(i).copied().unwrap_or(1)).product())
        .collect();
    out.reverse();
    out
}

fn enumerate_uncached(group: &Arc<FiniteGroup>) -> Result<H2> {
    let n = group.order();
    let ni = n as i64;
    // kernel of the cocycle map modulo n
    let c = diagonalize(&cocycle_matrix(group), n * n, ni.max(2), false, true)?;
    let q = c.q.as_ref().expect("Q tracked");
    let cols = n * n;
    let mut generators: Vec<Vec<i64>> = Vec::new();
    for i in 0..cols {
        let scale = if i < c.rank() { ni / c.diag[i].gcd(&ni) } else { 1 };
        if scale % ni == 0 {
            continue;
        }
        generators.push((0..cols).map(|row| (q[row][i] * scale).rem_euclid(ni)).collect());
    }

    let l0 = ni * ni;
    let d = coboundary_diagonal(group, l0)?;
    let scaled = |x: &[i64]| x.iter().map(|v| v * ni).collect::<Vec<_>>();
    let (zero, moduli) = class_vector(&d, &vec![0; cols]);
    let mut gens: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    for x in generators {
        let (v, _) = class_vector(&d, &scaled(&x));
        if v != zero && !gens.iter().any(|(w, _)| *w == v) {
            gens.push((v, x));
        }
    }

    let mut lookup = HashMap::new();
    let mut found: Vec<(Vec<i64>, Vec<i64>)> = vec![(zero.clone(), vec![0; cols])];
    lookup.insert(zero, 0_usize);
    let mut queue = VecDeque::from([0_usize]);
    while let Some(idx) = queue.pop_front() {
        for (gv, gx) in &gens {
            let v = add_vec(&found[idx].0, gv, &moduli);
            if lookup.contains_key(&v) {
                continue;
            }
            let x: Vec<i64> = found[idx].1.iter().zip(gx).map(|(a, b)| (a + b).rem_euclid(ni)).collect();
            lookup.insert(v.clone(), found.len());
            queue.push_back(found.len());
            found.push((v, x));
        }
    }

    let mut classes = Vec::with_capacity(found.len());
    for (index, (coset, x)) in found.iter().enumerate() {
        let table = x.chunks(n).map(|r| r.iter().map(|&k| k as u64).collect()).collect();
        let representative = normalize_gauge(&Cocycle2::exact(group.clone(), n as u64, table)?).reduced();
        let mut order = 1;
        let mut acc = coset.clone();
        while acc.iter().any(|&a| a != 0) {
            acc = add_vec(&acc, coset, &moduli);
            order += 1;
        }
        classes.push(ClassRep { index, representative, coset: coset.clone(), order });
    }
    let orders: Vec<usize> = classes.iter().map(|c| c.order).collect();
    Ok(H2 {
        group: group.clone(),
        invariant_factors: invariant_factors(&orders),
        classes,
        moduli,
        lookup,
    })
}

/// Enumerate `H^2(G, U(1))` with one representative per class, valued in
/// `|G|`-th roots of unity. Results are cached per group table.
pub fn enumerate_h2(group: &Arc<FiniteGroup>) -> Result<Arc<H2>> {
    enumerate_h2_bounded(group, DEFAULT_ORDER_BOUND)
}

pub fn enumerate_h2_bounded(group: &Arc<FiniteGroup>, bound: usize) -> Result<Arc<H2>> {
    if group.order() > bound {
        return Err(Error::OrderTooLarge { order: group.order(), bound });
    }
    static CACHE: OnceLock<Mutex<HashMap<FiniteGroup, Arc<H2>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(h) = cache.lock().unwrap().get(group.as_ref()) {
        return Ok(h.clone());
    }
    let h = Arc::new(enumerate_uncached(group)?);
    cache.lock().unwrap().insert(group.as_ref().clone(), h.clone());
    Ok(h)
}

/// Cohomology class of a cocycle.
#[derive(Debug, Clone)]
pub struct CohomologyClass {
    pub group: Arc<FiniteGroup>,
    /// Position in [`enumerate_h2`]; `None` when the group is past the
    /// enumeration bound.
    pub index: Option<usize>,
    /// Coset vector of the matching enumerated representative.
    pub coset: Option<Vec<i64>>,
    /// Commutator pairing (abelian groups), reduced to lowest denominator.
    pub pairing: Option<Cocycle2>,
}

impl CohomologyClass {
    pub fn is_trivial(&self) -> bool {
        match (self.index, &self.pairing) {
            (Some(i), _) => i == 0,
            (None, Some(b)) => b.exact_parts().map_or(false, |(_, v)| v.iter().flatten().all(|&k| k == 0)),
            _ => false,
        }
    }
}

impl PartialEq for CohomologyClass {
    fn eq(&self, other: &Self) -> bool {
        crate::cocycle::same_group(&self.group, &other.group)
            && match (self.index, other.index) {
                (Some(a), Some(b)) => a == b,
                _ => self.pairing.is_some() && self.pairing == other.pairing,
            }
    }
}

/// Canonical class label of an exact cocycle. Within the enumeration bound
/// the class is matched against the enumerated representatives; abelian
/// groups additionally carry the pairing table, which alone determines the
/// class and is the only label past the bound.
pub fn reduce_to_class(nu: &Cocycle2) -> Result<CohomologyClass> {
    if !nu.is_exact() {
        return Err(Error::FloatMode);
    }
    let chk = check_cocycle(nu, COCYCLE_TOL);
    if !chk.holds {
        return Err(Error::NotCocycle { residual: chk.residual });
    }
    let group = nu.group().clone();
    let beta = pairing(nu).map(|b| b.reduced());
    if group.order() > DEFAULT_ORDER_BOUND {
        return Ok(CohomologyClass { group, index: None, coset: None, pairing: beta });
    }
    let h2 = enumerate_h2(&group)?;
    for cls in &h2.classes {
        if is_coboundary(&ratio(nu, &cls.representative)?)?.is_some() {
            return Ok(CohomologyClass {
                group,
                index: Some(cls.index),
                coset: Some(cls.coset.clone()),
                pairing: beta,
            });
        }
    }
    unreachable!("every cocycle lies in some enumerated class")
}

/// Whether two exact cocycles are cohomologous, with the witness `mu` such
/// that `a = b * d mu`.
pub fn cohomologous(a: &Cocycle2, b: &Cocycle2) -> Result<Option<Cochain1>> {
    is_coboundary(&ratio(a, b)?)
}
