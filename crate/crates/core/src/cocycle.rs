//! U(1)-valued 2-cocycles and 1-cochains on a finite group.
//!
//! Phases come in two flavours. Exact tables store residues `k` with a
//! shared denominator `M` (value `exp(2 pi i k / M)`); float tables store
//! unit-modulus complex numbers. Classification only ever touches exact
//! tables; float tables produced by numerical extraction cross over through
//! [`snap_to_roots`].

use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{root_of_unity, C64};

/// Residual tolerance for the cocycle identity on float tables.
pub const COCYCLE_TOL: f64 = 1e-9;
/// Default distance allowed between a float phase and the root it snaps to.
pub const SNAP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseValue {
    Exact { k: u64, denominator: u64 },
    Float(C64),
}

impl PhaseValue {
    pub fn to_complex(self) -> C64 {
        match self {
            PhaseValue::Exact { k, denominator } => root_of_unity(k as i64, denominator),
            PhaseValue::Float(z) => z,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Phases<T> {
    Exact { denominator: u64, values: T },
    Float(T),
}

/// `nu(g, h)` for all pairs, row `g`, column `h`.
#[derive(Debug, Clone)]
pub struct Cocycle2 {
    group: Arc<FiniteGroup>,
    exact: Option<(u64, Vec<Vec<u64>>)>,
    float: Option<Vec<Vec<C64>>>,
}

/// `mu(g)` for all `g`.
#[derive(Debug, Clone)]
pub struct Cochain1 {
    group: Arc<FiniteGroup>,
    exact: Option<(u64, Vec<u64>)>,
    float: Option<Vec<C64>>,
}

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a.table() == b.table()
}

impl Cocycle2 {
    pub fn exact(group: Arc<FiniteGroup>, denominator: u64, values: Vec<Vec<u64>>) -> Result<Self> {
        let n = group.order();
        if denominator == 0 {
            return Err(Error::InvalidArgument("denominator must be positive".into()));
        }
        if values.len() != n || values.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("cocycle table must be {n}x{n}")));
        }
        let values = values
            .into_iter()
            .map(|r| r.into_iter().map(|k| k % denominator).collect())
            .collect();
        Ok(Cocycle2 { group, exact: Some((denominator, values)), float: None })
    }

    /// Float table; entries must have unit modulus to 1e-12 (they are
    /// renormalized onto the circle).
    pub fn float(group: Arc<FiniteGroup>, values: Vec<Vec<C64>>) -> Result<Self> {
        let n = group.order();
        if values.len() != n || values.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("cocycle table must be {n}x{n}")));
        }
        if let Some(z) = values.iter().flatten().find(|z| (z.norm() - 1.0).abs() > 1e-12) {
            return Err(Error::InvalidArgument(format!("phase {z} does not have unit modulus")));
        }
        let values = values.into_iter().map(|r| r.into_iter().map(|z| z / z.norm()).collect()).collect();
        Ok(Cocycle2 { group, exact: None, float: Some(values) })
    }

    /// Float table from arbitrary nonzero complex numbers (projected onto the
    /// unit circle without the modulus check).
    pub(crate) fn float_from_phases(group: Arc<FiniteGroup>, values: Vec<Vec<C64>>) -> Self {
        let values = values
            .into_iter()
            .map(|r| r.into_iter().map(crate::linalg::phase_of).collect())
            .collect();
        Cocycle2 { group, exact: None, float: Some(values) }
    }

    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        Cocycle2 { group, exact: Some((1, vec![vec![0; n]; n])), float: None }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// `(denominator, residues)` for exact tables.
    pub fn exact_parts(&self) -> Option<(u64, &Vec<Vec<u64>>)> {
        self.exact.as_ref().map(|(m, v)| (*m, v))
    }

    pub fn value(&self, g: usize, h: usize) -> PhaseValue {
        match (&self.exact, &self.float) {
            (Some((m, v)), _) => PhaseValue::Exact { k: v[g][h], denominator: *m },
            (_, Some(v)) => PhaseValue::Float(v[g][h]),
            _ => unreachable!("cocycle without values"),
        }
    }

    #[inline]
    pub fn phase(&self, g: usize, h: usize) -> C64 {
        self.value(g, h).to_complex()
    }

    pub fn to_complex_table(&self) -> Vec<Vec<C64>> {
        let n = self.order();
        (0..n).map(|g| (0..n).map(|h| self.phase(g, h)).collect()).collect()
    }

    pub fn to_float(&self) -> Cocycle2 {
        Cocycle2 { group: self.group.clone(), exact: None, float: Some(self.to_complex_table()) }
    }

    /// Rewrite an exact table over a multiple of its denominator.
    pub fn with_denominator(&self, denominator: u64) -> Result<Cocycle2> {
        let (m, v) = self.exact.as_ref().ok_or(Error::FloatMode)?;
        if denominator % m != 0 {
            return Err(Error::InvalidArgument(format!("{denominator} is not a multiple of {m}")));
        }
        let f = denominator / m;
        let values = v.iter().map(|r| r.iter().map(|k| k * f).collect()).collect();
        Cocycle2::exact(self.group.clone(), denominator, values)
    }

    /// Reduce an exact table to the smallest denominator expressing it.
    pub fn reduced(&self) -> Cocycle2 {
        match &self.exact {
            Some((m, v)) => {
                let g = v.iter().flatten().fold(*m, |acc, &k| acc.gcd(&k));
                let values = v.iter().map(|r| r.iter().map(|k| k / g).collect()).collect();
                Cocycle2 { group: self.group.clone(), exact: Some((m / g, values)), float: None }
            }
            None => self.clone(),
        }
    }

    /// Max over cells of `|nu(g,h) - other(g,h)|`.
    pub fn max_distance(&self, other: &Cocycle2) -> f64 {
        let n = self.order();
        let mut d = 0.0_f64;
        for g in 0..n {
            for h in 0..n {
                d = d.max((self.phase(g, h) - other.phase(g, h)).norm());
            }
        }
        d
    }
}

impl PartialEq for Cocycle2 {
    /// Tables compare equal when they describe the same phases: exact tables
    /// after reduction, float tables entrywise.
    fn eq(&self, other: &Self) -> bool {
        if !same_group(&self.group, &other.group) {
            return false;
        }
        match (&self.reduced().exact, &other.reduced().exact) {
            (Some(a), Some(b)) => a == b,
            (None, None) => self.float == other.float,
            _ => false,
        }
    }
}

impl Cochain1 {
    pub fn exact(group: Arc<FiniteGroup>, denominator: u64, values: Vec<u64>) -> Result<Self> {
        if values.len() != group.order() || denominator == 0 {
            return Err(Error::DimensionMismatch("cochain length must equal the group order".into()));
        }
        let values = values.into_iter().map(|k| k % denominator).collect();
        Ok(Cochain1 { group, exact: Some((denominator, values)), float: None })
    }

    pub fn float(group: Arc<FiniteGroup>, values: Vec<C64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::DimensionMismatch("cochain length must equal the group order".into()));
        }
        if let Some(z) = values.iter().find(|z| (z.norm() - 1.0).abs() > 1e-12) {
            return Err(Error::InvalidArgument(format!("phase {z} does not have unit modulus")));
        }
        Ok(Cochain1 { group, exact: None, float: Some(values) })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn exact_parts(&self) -> Option<(u64, &Vec<u64>)> {
        self.exact.as_ref().map(|(m, v)| (*m, v))
    }

    pub fn value(&self, g: usize) -> PhaseValue {
        match (&self.exact, &self.float) {
            (Some((m, v)), _) => PhaseValue::Exact { k: v[g], denominator: *m },
            (_, Some(v)) => PhaseValue::Float(v[g]),
            _ => unreachable!("cochain without values"),
        }
    }

    pub fn phase(&self, g: usize) -> C64 {
        self.value(g).to_complex()
    }

    pub fn is_trivial(&self) -> bool {
        match (&self.exact, &self.float) {
            (Some((_, v)), _) => v.iter().all(|&k| k == 0),
            (_, Some(v)) => v.iter().all(|z| (z - C64::new(1.0, 0.0)).norm() < 1e-12),
            _ => unreachable!(),
        }
    }
}

/// Outcome of [`check_cocycle`].
#[derive(Debug, Clone, PartialEq)]
pub struct CocycleCheck {
    pub holds: bool,
    /// `max |nu(g,h) nu(gh,k) - nu(h,k) nu(g,hk)|` over all triples.
    pub residual: f64,
    /// First triple violating the identity, if any.
    pub violation: Option<(usize, usize, usize)>,
}

/// Verify `nu(g,h) nu(gh,k) = nu(h,k) nu(g,hk)`: exactly for exact tables,
/// within `tol` for float tables.
pub fn check_cocycle(nu: &Cocycle2, tol: f64) -> CocycleCheck {
    let grp = nu.group();
    let n = grp.order();
    let mut residual = 0.0_f64;
    let mut violation = None;
    for g in 0..n {
        for h in 0..n {
            let gh = grp.mul(g, h);
            for k in 0..n {
                let hk = grp.mul(h, k);
                let bad = match &nu.exact {
                    Some((m, v)) => (v[g][h] + v[gh][k]) % m != (v[h][k] + v[g][hk]) % m,
                    None => false,
                };
                let r = (nu.phase(g, h) * nu.phase(gh, k) - nu.phase(h, k) * nu.phase(g, hk)).norm();
                residual = residual.max(r);
                let bad = if nu.is_exact() { bad } else { r > tol };
                if bad && violation.is_none() {
                    violation = Some((g, h, k));
                }
            }
        }
    }
    CocycleCheck { holds: violation.is_none(), residual, violation }
}

/// Multiply by the constant coboundary `nu(e,e)^-1`, giving
/// `nu(e,g) = nu(g,e) = 1` for every cocycle.
pub fn normalize_gauge(nu: &Cocycle2) -> Cocycle2 {
    let e = nu.group().identity();
    match (&nu.exact, &nu.float) {
        (Some((m, v)), _) => {
            let c = v[e][e];
            let values = v.iter().map(|r| r.iter().map(|k| (k + m - c) % m).collect()).collect();
            Cocycle2 { group: nu.group.clone(), exact: Some((*m, values)), float: None }
        }
        (_, Some(v)) => {
            let c = v[e][e].conj();
            let values = v.iter().map(|r| r.iter().map(|z| z * c).collect()).collect();
            Cocycle2 { group: nu.group.clone(), exact: None, float: Some(values) }
        }
        _ => unreachable!(),
    }
}

pub fn is_normalized(nu: &Cocycle2) -> bool {
    let e = nu.group().identity();
    (0..nu.order()).all(|g| {
        let one = C64::new(1.0, 0.0);
        (nu.phase(e, g) - one).norm() < 1e-12 && (nu.phase(g, e) - one).norm() < 1e-12
    })
}

fn combine(a: &Cocycle2, b: &Cocycle2, conj_b: bool) -> Result<Cocycle2> {
    if !same_group(&a.group, &b.group) {
        return Err(Error::GroupMismatch);
    }
    let n = a.order();
    match (&a.exact, &b.exact) {
        (Some((ma, va)), Some((mb, vb))) => {
            let m = ma.lcm(mb);
            let (fa, fb) = (m / ma, m / mb);
            let values = (0..n)
                .map(|g| {
                    (0..n)
                        .map(|h| {
                            let kb = (vb[g][h] * fb) % m;
                            let kb = if conj_b { (m - kb) % m } else { kb };
                            (va[g][h] * fa + kb) % m
                        })
                        .collect()
                })
                .collect();
            Cocycle2::exact(a.group.clone(), m, values)
        }
        _ => {
            let values = (0..n)
                .map(|g| {
                    (0..n)
                        .map(|h| {
                            let zb = b.phase(g, h);
                            a.phase(g, h) * if conj_b { zb.conj() } else { zb }
                        })
                        .collect()
                })
                .collect();
            Ok(Cocycle2::float_from_phases(a.group.clone(), values))
        }
    }
}

/// Pointwise product: the cocycle of the stacked system.
pub fn stack(a: &Cocycle2, b: &Cocycle2) -> Result<Cocycle2> {
    combine(a, b, false)
}

/// `a / b` pointwise.
pub fn ratio(a: &Cocycle2, b: &Cocycle2) -> Result<Cocycle2> {
    combine(a, b, true)
}

/// Entrywise complex conjugate.
pub fn inverse_cocycle(nu: &Cocycle2) -> Cocycle2 {
    match (&nu.exact, &nu.float) {
        (Some((m, v)), _) => {
            let values = v.iter().map(|r| r.iter().map(|k| (m - k) % m).collect()).collect();
            Cocycle2 { group: nu.group.clone(), exact: Some((*m, values)), float: None }
        }
        (_, Some(v)) => {
            let values = v.iter().map(|r| r.iter().map(|z| z.conj()).collect()).collect();
            Cocycle2 { group: nu.group.clone(), exact: None, float: Some(values) }
        }
        _ => unreachable!(),
    }
}

/// `(d mu)(g,h) = mu(g) mu(h) / mu(gh)`.
pub fn coboundary(mu: &Cochain1) -> Cocycle2 {
    let grp = mu.group().clone();
    let n = grp.order();
    match (&mu.exact, &mu.float) {
        (Some((m, v)), _) => {
            let values = (0..n)
                .map(|g| (0..n).map(|h| (v[g] + v[h] + m - v[grp.mul(g, h)]) % m).collect())
                .collect();
            Cocycle2 { group: grp, exact: Some((*m, values)), float: None }
        }
        (_, Some(v)) => {
            let values = (0..n)
                .map(|g| (0..n).map(|h| v[g] * v[h] * v[grp.mul(g, h)].conj()).collect())
                .collect();
            Cocycle2::float_from_phases(grp, values)
        }
        _ => unreachable!(),
    }
}

/// Commutator pairing `beta(g,h) = nu(g,h) / nu(h,g)`, defined for abelian
/// groups. Exact input gives an exact table with the same denominator.
pub fn pairing(nu: &Cocycle2) -> Option<Cocycle2> {
    if !nu.group().is_abelian() {
        return None;
    }
    let n = nu.order();
    Some(match &nu.exact {
        Some((m, v)) => {
            let values = (0..n)
                .map(|g| (0..n).map(|h| (v[g][h] + m - v[h][g]) % m).collect())
                .collect();
            Cocycle2 { group: nu.group.clone(), exact: Some((*m, values)), float: None }
        }
        None => {
            let values = (0..n)
                .map(|g| (0..n).map(|h| nu.phase(g, h) * nu.phase(h, g).conj()).collect())
                .collect();
            Cocycle2::float_from_phases(nu.group.clone(), values)
        }
    })
}

/// A cohomologous float cocycle whose entries are `|G|`-th roots of unity
/// (up to rounding). With `f(g) = prod_h nu(g,h)` the cocycle identity gives
/// `nu^n = d f`, so multiplying by `d mu` with `mu = f^(-1/n)` kills the
/// `n`-th power. The principal branch of the root is used.
pub fn root_gauge(nu: &Cocycle2) -> Cocycle2 {
    let grp = nu.group().clone();
    let n = grp.order();
    let f: Vec<C64> = (0..n)
        .map(|g| (0..n).map(|h| nu.phase(g, h)).product::<C64>())
        .collect();
    let mu: Vec<C64> = f
        .iter()
        .map(|z| C64::from_polar(1.0, -z.arg() / n as f64))
        .collect();
    let values = (0..n)
        .map(|g| {
            (0..n)
                .map(|h| nu.phase(g, h) * mu[g] * mu[h] * mu[grp.mul(g, h)].conj())
                .collect()
        })
        .collect();
    Cocycle2::float_from_phases(grp, values)
}

/// Snap every entry of a float table (after dividing by `nu(e,e)`) to the
/// nearest `denominator`-th root of unity. Returns the exact table and the
/// largest snapping distance; refuses when some entry is farther than `tol`.
pub fn snap_to_roots(nu: &Cocycle2, denominator: u64, tol: f64) -> Result<(Cocycle2, f64)> {
    if denominator == 0 {
        return Err(Error::InvalidArgument("denominator must be positive".into()));
    }
    if nu.is_exact() {
        let m = nu.exact_parts().unwrap().0;
        if denominator % m == 0 {
            return Ok((normalize_gauge(&nu.with_denominator(denominator)?), 0.0));
        }
    }
    let normalized = normalize_gauge(&nu.to_float());
    let n = nu.order();
    let mut worst = 0.0_f64;
    let mut values = vec![vec![0_u64; n]; n];
    for g in 0..n {
        for h in 0..n {
            let z = normalized.phase(g, h);
            let t = z.arg() / (2.0 * std::f64::consts::PI) * denominator as f64;
            let k = t.round().rem_euclid(denominator as f64) as u64;
            let dist = (z - root_of_unity(k as i64, denominator)).norm();
            if dist > tol {
                return Err(Error::SnapRefused { g, h, distance: dist, denominator });
            }
            worst = worst.max(dist);
            values[g][h] = k;
        }
    }
    Ok((Cocycle2::exact(nu.group().clone(), denominator, values)?, worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin_group;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grp(name: &str) -> Arc<FiniteGroup> {
        Arc::new(builtin_group(name).unwrap())
    }

    /// Pauli cocycle on Z2xZ2 with Q(e)=I, Q(a)=X, Q(b)=Z, Q(ab)=XZ, written
    /// out by hand from the 2x2 products (elements: 0=e, 1=b, 2=a, 3=ab in
    /// the direct-product indexing a*2+b).
    pub(crate) fn pauli_cocycle() -> Cocycle2 {
        // residues mod 2; nu(g,h) = -1 where Q(g)Q(h) = -Q(gh)
        // index: (x,z) -> 2x + z, Q = X^x Z^z
        // Q(g)Q(h) = X^x1 Z^z1 X^x2 Z^z2 = (-1)^(z1 x2) X^(x1+x2) Z^(z1+z2)
        let mut v = vec![vec![0_u64; 4]; 4];
        for g in 0..4 {
            for h in 0..4 {
                let (z1, x2) = (g % 2, h / 2);
                v[g][h] = (z1 * x2) as u64;
            }
        }
        Cocycle2::exact(grp("Z2xZ2"), 2, v).unwrap()
    }

    #[test]
    fn trivial_passes() {
        let nu = Cocycle2::trivial(grp("Z2xZ3"));
        let c = check_cocycle(&nu, COCYCLE_TOL);
        assert!(c.holds);
        assert_eq!(c.residual, 0.0);
    }

    #[test]
    fn pauli_passes_and_single_flip_fails() {
        assert!(check_cocycle(&pauli_cocycle(), COCYCLE_TOL).holds);
        let g = grp("Z2xZ2");
        let mut v = vec![vec![0_u64; 4]; 4];
        v[2][1] = 1; // (a, b)
        let bad = Cocycle2::exact(g, 2, v).unwrap();
        let c = check_cocycle(&bad, COCYCLE_TOL);
        assert!(!c.holds);
        let (x, y, z) = c.violation.unwrap();
        let grp = bad.group();
        let lhs = (bad.phase(x, y) * bad.phase(grp.mul(x, y), z)).re;
        let rhs = (bad.phase(y, z) * bad.phase(x, grp.mul(y, z))).re;
        assert!((lhs - rhs).abs() > 1.0);
    }

    #[test]
    fn normalization() {
        let p = pauli_cocycle();
        assert_eq!(normalize_gauge(&p), p);
        let g = grp("Z3");
        let c = Cocycle2::exact(g.clone(), 5, vec![vec![2; 3]; 3]).unwrap();
        assert!(check_cocycle(&c, COCYCLE_TOL).holds);
        assert_eq!(normalize_gauge(&c), Cocycle2::trivial(g));
        // shift Pauli by a constant, normalizing brings it back
        let shifted = stack(&p, &Cocycle2::exact(p.group().clone(), 4, vec![vec![1; 4]; 4]).unwrap()).unwrap();
        let back = normalize_gauge(&shifted);
        assert_eq!(pairing(&back), pairing(&p).map(|b| b.with_denominator(4).unwrap()));
        assert!(is_normalized(&back));
    }

    #[test]
    fn stacking_pauli_twice_has_trivial_pairing() {
        let p = pauli_cocycle();
        let pp = stack(&p, &p).unwrap();
        let beta = pairing(&pp).unwrap();
        assert!(beta.exact_parts().unwrap().1.iter().flatten().all(|&k| k == 0));
        assert_eq!(stack(&p, &Cocycle2::trivial(p.group().clone())).unwrap(), p);
    }

    #[test]
    fn inverse_of_pauli_has_same_pairing() {
        let p = pauli_cocycle();
        assert_eq!(pairing(&inverse_cocycle(&p)), pairing(&p));
        let t = Cocycle2::trivial(grp("Z2xZ2"));
        assert_eq!(inverse_cocycle(&t), t);
    }

    #[test]
    fn group_mismatch() {
        let a = Cocycle2::trivial(grp("Z2"));
        let b = Cocycle2::trivial(grp("Z3"));
        assert!(matches!(stack(&a, &b), Err(Error::GroupMismatch)));
    }

    #[test]
    fn coboundaries_are_cocycles_with_trivial_pairing() {
        let g = grp("Z2xZ2");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let mu: Vec<C64> = (0..4).map(|_| C64::from_polar(1.0, rng.gen_range(0.0..6.3))).collect();
            let nu = coboundary(&Cochain1::float(g.clone(), mu).unwrap());
            assert!(check_cocycle(&nu, COCYCLE_TOL).holds);
            let beta = pairing(&nu).unwrap();
            for row in beta.to_complex_table() {
                for z in row {
                    assert!((z - C64::new(1.0, 0.0)).norm() < 1e-12);
                }
            }
        }
        let trivial = coboundary(&Cochain1::exact(g.clone(), 1, vec![0; 4]).unwrap());
        assert_eq!(trivial, Cocycle2::trivial(g));
    }

    #[test]
    fn coboundary_of_i_power_on_z4() {
        // mu(g) = i^g, (d mu)(g,h) = i^(g + h - (g+h mod 4)) = 1 unless wrap: i^4 = 1
        let g = grp("Z4");
        let nu = coboundary(&Cochain1::exact(g.clone(), 4, vec![0, 1, 2, 3]).unwrap());
        let (_, v) = nu.exact_parts().unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(v[a][b], 0, "({a},{b})");
            }
        }
    }

    #[test]
    fn pairing_invariant_under_coboundary() {
        let p = pauli_cocycle();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mu: Vec<C64> = (0..4).map(|_| C64::from_polar(1.0, rng.gen_range(0.0..6.3))).collect();
        let shifted = stack(&p, &coboundary(&Cochain1::float(p.group().clone(), mu).unwrap())).unwrap();
        let b1 = pairing(&p).unwrap();
        let b2 = pairing(&shifted).unwrap();
        assert!(b1.max_distance(&b2) < 1e-12);
    }

    #[test]
    fn snapping() {
        let g = grp("Z2xZ2");
        let p = pauli_cocycle();
        let (s, err) = snap_to_roots(&p.to_float(), 2, SNAP_TOL).unwrap();
        assert_eq!(s, p);
        assert!(err < 1e-15);
        // noisy
        let noisy: Vec<Vec<C64>> = p
            .to_complex_table()
            .into_iter()
            .map(|r| r.into_iter().map(|z| z * C64::from_polar(1.0, 1e-9)).collect())
            .collect();
        let noisy = Cocycle2::float(g.clone(), noisy).unwrap();
        let (s, err) = snap_to_roots(&noisy, 4, SNAP_TOL).unwrap();
        assert_eq!(s, p);
        assert!(err < 1e-8);
        // e^{i pi/7} is not a 4th root
        let mut t = vec![vec![C64::new(1.0, 0.0); 4]; 4];
        t[1][2] = C64::from_polar(1.0, std::f64::consts::PI / 7.0);
        let t = Cocycle2::float(g, t).unwrap();
        assert!(matches!(snap_to_roots(&t, 4, SNAP_TOL), Err(Error::SnapRefused { g: 1, h: 2, .. })));
    }

    #[test]
    fn root_gauge_lands_on_roots() {
        let p = pauli_cocycle();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mu: Vec<C64> = (0..4).map(|_| C64::from_polar(1.0, rng.gen_range(0.0..6.3))).collect();
        let messy = stack(&p.to_float(), &coboundary(&Cochain1::float(p.group().clone(), mu).unwrap())).unwrap();
        assert!(snap_to_roots(&messy, 4, SNAP_TOL).is_err());
        let fixed = root_gauge(&messy);
        let (s, _) = snap_to_roots(&fixed, 4, SNAP_TOL).unwrap();
        assert!(check_cocycle(&s, 0.0).holds);
        assert_eq!(pairing(&s), pairing(&p).map(|b| b.with_denominator(4).unwrap()));
    }
}
