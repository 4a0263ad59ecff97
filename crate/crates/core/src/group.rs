//! Finite groups given extensionally by their multiplication table.

use crate::error::{Error, Result};

/// Index of an element inside a [`FiniteGroup`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub usize);

/// A finite group as a multiplication table: `table[g][h] = g * h`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
}

/// The first axiom failure found by [`validate_group`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Identity { g: usize },
    Associativity { g: usize, h: usize, k: usize },
    Inverse { g: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Identity { g } => write!(f, "e*{g} or {g}*e differs from {g}"),
            Violation::Associativity { g, h, k } => write!(f, "({g}*{h})*{k} != {g}*({h}*{k})"),
            Violation::Inverse { g } => write!(f, "{g}*inverse({g}) != e"),
        }
    }
}

/// Check the group axioms on raw data. Returns `Ok(None)` when all hold,
/// `Ok(Some(v))` with the first violation otherwise, and `Err` for tables that
/// are not even well-formed (wrong shape or out-of-range entries).
pub fn validate_group(
    table: &[Vec<usize>],
    identity: usize,
    inverse: &[usize],
) -> Result<Option<Violation>> {
    let n = table.len();
    if n == 0 {
        return Err(Error::MalformedGroup("empty table".into()));
    }
    if table.iter().any(|row| row.len() != n) {
        return Err(Error::MalformedGroup(format!("table is not {n}x{n}")));
    }
    if table.iter().flatten().any(|&x| x >= n) {
        return Err(Error::MalformedGroup("entry out of range".into()));
    }
    if identity >= n || inverse.len() != n || inverse.iter().any(|&x| x >= n) {
        return Err(Error::MalformedGroup("identity/inverse out of range".into()));
    }
    for g in 0..n {
        if table[identity][g] != g || table[g][identity] != g {
            return Ok(Some(Violation::Identity { g }));
        }
    }
    for g in 0..n {
        if table[g][inverse[g]] != identity {
            return Ok(Some(Violation::Inverse { g }));
        }
    }
    for g in 0..n {
        for h in 0..n {
            let gh = table[g][h];
            for k in 0..n {
                if table[gh][k] != table[g][table[h][k]] {
                    return Ok(Some(Violation::Associativity { g, h, k }));
                }
            }
        }
    }
    Ok(None)
}

impl FiniteGroup {
    /// Build from a table, deriving the identity and inverses, relabelling so
    /// that the identity is element 0, and checking the axioms.
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n) || table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::MalformedGroup(format!("table must be n x n with entries < n (n = {n})")));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::GroupAxiom("no identity element".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            match (0..n).find(|&h| table[g][h] == identity) {
                Some(h) => inverse[g] = h,
                None => return Err(Error::GroupAxiom(format!("element {g} has no inverse"))),
            }
        }
        if let Some(v) = validate_group(&table, identity, &inverse)? {
            return Err(Error::GroupAxiom(v.to_string()));
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::MalformedGroup("label count differs from order".into()));
            }
        }
        let group = FiniteGroup { order: n, table, identity, inverse, labels };
        Ok(group.canonicalize())
    }

    /// Relabel so the identity sits at index 0 (swap with the old index 0).
    fn canonicalize(self) -> Self {
        if self.identity == 0 {
            return self;
        }
        let n = self.order;
        let e = self.identity;
        let perm: Vec<usize> = (0..n)
            .map(|g| if g == 0 { e } else if g == e { 0 } else { g })
            .collect();
        // perm is an involution: new index i corresponds to old perm[i]
        let table = (0..n)
            .map(|i| (0..n).map(|j| perm[self.table[perm[i]][perm[j]]]).collect())
            .collect();
        let inverse = (0..n).map(|i| perm[self.inverse[perm[i]]]).collect();
        let labels = self
            .labels
            .map(|l| (0..n).map(|i| l[perm[i]].clone()).collect());
        FiniteGroup { order: n, table, identity: 0, inverse, labels }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverse
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(Error::MalformedGroup("label count differs from order".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|g| (0..g).all(|h| self.table[g][h] == self.table[h][g]))
    }

    /// Order of an element.
    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Smallest common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|g| self.element_order(g))
            .fold(1, num_integer::lcm)
    }

    /// Re-run the axiom check on the stored table.
    pub fn validate(&self) -> Result<Option<Violation>> {
        validate_group(&self.table, self.identity, &self.inverse)
    }
}

/// `Z_n` with `g * h = (g + h) mod n`.
pub fn cyclic_group(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidArgument("cyclic group needs n >= 1".into()));
    }
    let table = (0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect();
    let inverse = (0..n).map(|g| (n - g) % n).collect();
    Ok(FiniteGroup { order: n, table, identity: 0, inverse, labels: None })
}

/// Direct product with element `(a, b)` stored at index `a * n2 + b`.
pub fn direct_product(g1: &FiniteGroup, g2: &FiniteGroup) -> FiniteGroup {
    let (n1, n2) = (g1.order, g2.order);
    let n = n1 * n2;
    let split = |x: usize| (x / n2, x % n2);
    let table = (0..n)
        .map(|x| {
            let (a, b) = split(x);
            (0..n)
                .map(|y| {
                    let (c, d) = split(y);
                    g1.mul(a, c) * n2 + g2.mul(b, d)
                })
                .collect()
        })
        .collect();
    let inverse = (0..n)
        .map(|x| {
            let (a, b) = split(x);
            g1.inv(a) * n2 + g2.inv(b)
        })
        .collect();
    let labels = match (&g1.labels, &g2.labels) {
        (None, None) => None,
        _ => Some(
            (0..n)
                .map(|x| {
                    let (a, b) = split(x);
                    format!("({},{})", g1.label(a), g2.label(b))
                })
                .collect(),
        ),
    };
    FiniteGroup {
        order: n,
        table,
        identity: g1.identity * n2 + g2.identity,
        inverse,
        labels,
    }
}

/// Dihedral group of order `2m`: index `k` is the rotation `r^k`, index
/// `m + k` is the reflection `s r^k`.
pub fn dihedral_group(m: usize) -> Result<FiniteGroup> {
    if m == 0 {
        return Err(Error::InvalidArgument("dihedral group needs m >= 1".into()));
    }
    let n = 2 * m;
    // (s^a r^i)(s^b r^j) = s^(a+b) r^((-1)^b i + j)
    let decode = |x: usize| (x / m, x % m);
    let table: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let (a, i) = decode(x);
            (0..n)
                .map(|y| {
                    let (b, j) = decode(y);
                    let rot = if b == 0 { (i + j) % m } else { (m - i + j) % m };
                    ((a + b) % 2) * m + rot
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(table, None)
}

/// Builtin group names: `Z<n>`, `Z<m>xZ<n>` (any number of factors), `D<m>`
/// (dihedral of order 2m).
pub fn builtin_group(name: &str) -> Result<FiniteGroup> {
    let bad = || Error::InvalidArgument(format!("unknown group '{name}'"));
    if let Some(rest) = name.strip_prefix('D') {
        let m: usize = rest.parse().map_err(|_| bad())?;
        return dihedral_group(m);
    }
    let mut acc: Option<FiniteGroup> = None;
    for factor in name.split(['x', 'X']) {
        let n: usize = factor.strip_prefix('Z').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let z = cyclic_group(n)?;
        acc = Some(match acc {
            None => z,
            Some(g) => direct_product(&g, &z),
        });
    }
    acc.ok_or_else(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_is_valid() {
        let t = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(validate_group(&t, 0, &[0, 1]).unwrap(), None);
    }

    #[test]
    fn z2_with_idempotent_fails_inverse() {
        let t = vec![vec![0, 1], vec![1, 1]];
        let v = validate_group(&t, 0, &[0, 1]).unwrap();
        assert_eq!(v, Some(Violation::Inverse { g: 1 }));
        assert!(matches!(FiniteGroup::from_table(t, None), Err(Error::GroupAxiom(_))));
    }

    #[test]
    fn malformed_is_structural_error() {
        let t = vec![vec![0, 1], vec![1]];
        assert!(matches!(validate_group(&t, 0, &[0, 1]), Err(Error::MalformedGroup(_))));
        let t = vec![vec![0, 2], vec![1, 0]];
        assert!(matches!(validate_group(&t, 0, &[0, 1]), Err(Error::MalformedGroup(_))));
    }

    #[test]
    fn cyclic_basics() {
        let z1 = cyclic_group(1).unwrap();
        assert_eq!(z1.order(), 1);
        let z2 = cyclic_group(2).unwrap();
        assert_eq!(z2.inverses(), &[0, 1]);
        let z3 = cyclic_group(3).unwrap();
        assert_eq!(z3.inv(1), 2);
        assert!(cyclic_group(0).is_err());
    }

    #[test]
    fn z2xz2_exhaustive() {
        let z2 = cyclic_group(2).unwrap();
        let k = direct_product(&z2, &z2);
        assert_eq!(k.order(), 4);
        assert!(k.is_abelian());
        assert_eq!(k.validate().unwrap(), None);
    }

    #[test]
    fn z2xz3_is_cyclic() {
        let g = direct_product(&cyclic_group(2).unwrap(), &cyclic_group(3).unwrap());
        assert!(g.elements().any(|x| g.element_order(x) == 6));
    }

    #[test]
    fn trivial_times_g() {
        let z3 = cyclic_group(3).unwrap();
        let g = direct_product(&cyclic_group(1).unwrap(), &z3);
        assert_eq!(g.table(), z3.table());
    }

    #[test]
    fn dihedral_nonabelian() {
        let d4 = dihedral_group(4).unwrap();
        assert_eq!(d4.order(), 8);
        assert!(!d4.is_abelian());
        let pair = (0..8).flat_map(|g| (0..8).map(move |h| (g, h))).find(|&(g, h)| d4.mul(g, h) != d4.mul(h, g));
        assert!(pair.is_some());
        assert!(cyclic_group(1).unwrap().is_abelian());
        assert!(builtin_group("Z3xZ3").unwrap().is_abelian());
    }

    #[test]
    fn identity_relabelled_to_zero() {
        // Z2 with identity stored at index 1
        let t = vec![vec![1, 0], vec![0, 1]];
        let g = FiniteGroup::from_table(t, Some(vec!["a".into(), "e".into()])).unwrap();
        assert_eq!(g.identity(), 0);
        assert_eq!(g.label(0), "e");
        assert_eq!(g.table(), &[vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn inverse_is_involution_and_products_valid() {
        for name in ["Z1", "Z4", "Z2xZ2", "Z3xZ3", "Z2xZ4", "D3", "D4"] {
            let g = builtin_group(name).unwrap();
            assert_eq!(g.validate().unwrap(), None, "{name}");
            assert!(g.elements().all(|x| g.inv(g.inv(x)) == x));
        }
        let a = builtin_group("Z2").unwrap();
        let d = builtin_group("D3").unwrap();
        let p = direct_product(&a, &d);
        assert_eq!(p.order(), 12);
        assert_eq!(p.is_abelian(), a.is_abelian() && d.is_abelian());
    }
}
