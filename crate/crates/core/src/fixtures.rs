//! Named fixtures and the invariance suite.
//!
//! Representation names: `pauli`, `clock-shift:n:q`, `Z2xZ2` (= pauli),
//! `Z3xZ3` (= clock-shift:3:1), `trivial:<group>`, `regular:<group>` and
//! `dual:<name>`. State fixtures put either entangled pairs (`eps`) or a
//! product of site vectors on the ring whose sites carry `Q (x) conj(Q)`:
//! `product` uses the invariant vector `vec(1)`, `charged` uses `vec(Q(g1))`
//! which has a nontrivial character.

use std::sync::Arc;

use ndarray::Array2;
use serde_json::{json, Value};

use crate::circuits::{apply_circuit, build_brickwork, build_uniform_brickwork, gate_from_matrix, BrickworkCircuit};
use crate::cocycle::Cocycle2;
use crate::cohomology::{cohomologous, reduce_to_class, CohomologyClass};
use crate::error::{Error, Result};
use crate::extraction::{extract_mps_index, extract_window_index, stacked_index_mps, ExtractionReport, Tolerances};
use crate::group::{builtin_group, FiniteGroup};
use crate::io::class_json;
use crate::linalg::{conj, haar_unitary, kron, CVec, Mat};
use crate::mps::{BrickworkMps, SymmetricMps, UniformMps};
use crate::projective::{clock_shift_rep, dual_rep, trivial_rep, twisted_regular_rep, ProjectiveRep};
use crate::state::{build_eps_dense, build_product_state, DenseState, RingArc, SiteSpec};

/// Projective representation by fixture name.
pub fn parse_rep(name: &str) -> Result<ProjectiveRep> {
    let bad = || Error::InvalidArgument(format!("unknown representation '{name}'"));
    if let Some(rest) = name.strip_prefix("dual:") {
        return Ok(dual_rep(&parse_rep(rest)?));
    }
    if let Some(rest) = name.strip_prefix("trivial:") {
        return Ok(trivial_rep(Arc::new(builtin_group(rest)?)));
    }
    if let Some(rest) = name.strip_prefix("regular:") {
        return twisted_regular_rep(&Cocycle2::trivial(Arc::new(builtin_group(rest)?)));
    }
    if let Some(rest) = name.strip_prefix("clock-shift:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 2 {
            return Err(bad());
        }
        let n: usize = parts[0].parse().map_err(|_| bad())?;
        let q: i64 = parts[1].parse().map_err(|_| bad())?;
        return clock_shift_rep(n, q);
    }
    match name {
        "pauli" | "Z2xZ2" => clock_shift_rep(2, 1),
        "Z3xZ3" => clock_shift_rep(3, 1),
        _ => Err(bad()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Eps,
    Product,
    Charged,
}

impl StateKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "eps" => Ok(StateKind::Eps),
            "product" => Ok(StateKind::Product),
            "charged" => Ok(StateKind::Charged),
            _ => Err(Error::InvalidArgument(format!("unknown state kind '{s}' (eps, product, charged)"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            StateKind::Eps => "eps",
            StateKind::Product => "product",
            StateKind::Charged => "charged",
        }
    }
}

/// A symmetric state family on sites `W (x) W*`.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub rep_name: String,
    pub rep: ProjectiveRep,
    pub kind: StateKind,
}

impl Fixture {
    pub fn new(rep_name: &str, kind: StateKind) -> Result<Self> {
        Ok(Fixture { rep_name: rep_name.to_string(), rep: parse_rep(rep_name)?, kind })
    }

    pub fn from_rep(rep_name: &str, rep: ProjectiveRep, kind: StateKind) -> Self {
        Fixture { rep_name: rep_name.to_string(), rep, kind }
    }

    /// `"<kind>:<rep>"`, e.g. `eps:pauli`.
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, rep) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("fixture '{s}' must look like kind:rep")))?;
        Fixture::new(rep, StateKind::parse(kind)?)
    }

    pub fn name(&self) -> String {
        format!("{}:{}", self.kind.name(), self.rep_name)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.rep.group()
    }

    pub fn site_rep(&self) -> Vec<Mat> {
        self.rep.matrices().iter().map(|q| kron(q, &conj(q))).collect()
    }

    pub fn spec(&self, n_sites: usize) -> Result<SiteSpec> {
        SiteSpec::uniform(self.group().clone(), self.site_rep(), n_sites)
    }

    /// Site vector of product fixtures: `vec(1)/sqrt(D)` or `vec(Q(1))/sqrt(D)`.
    fn site_vector(&self) -> CVec {
        let d = self.rep.dim();
        let m = match self.kind {
            StateKind::Charged if self.group().order() > 1 => self.rep.matrix(1).clone(),
            _ => Array2::eye(d),
        };
        let s = 1.0 / (d as f64).sqrt();
        CVec::from_iter(m.iter().map(|z| z * s))
    }

    /// Expected class: that of the edge representation for pairs, trivial
    /// for products.
    pub fn expected_class(&self) -> Result<CohomologyClass> {
        match self.kind {
            StateKind::Eps => reduce_to_class(self.rep.cocycle()),
            _ => reduce_to_class(&Cocycle2::trivial(self.group().clone())),
        }
    }

    pub fn dense(&self, n_sites: usize) -> Result<DenseState> {
        match self.kind {
            StateKind::Eps => build_eps_dense(&self.rep, n_sites),
            _ => {
                let spec = Arc::new(self.spec(n_sites)?);
                let v = self.site_vector();
                let (psi, inv) = build_product_state(spec, &vec![v; n_sites])?;
                if !inv.invariant {
                    return Err(Error::NotInvariant { g: inv.broken[0], modulus: 0.0 });
                }
                Ok(psi)
            }
        }
    }

    pub fn mps(&self) -> Result<SymmetricMps> {
        match self.kind {
            StateKind::Eps => SymmetricMps::eps(&self.rep),
            _ => {
                let v = self.site_vector();
                let tensors = v.iter().map(|z| Array2::from_elem((1, 1), *z)).collect();
                SymmetricMps::new(self.group().clone(), UniformMps::new(tensors)?, self.site_rep())
            }
        }
    }
}

/// Smallest ring for the window route with halfwidth `w` and arc `N/2`
/// (both sides of the arc need `2w + 1` sites).
/// Charged products need `N` to be a multiple of the group exponent so
/// that the charges cancel.
pub fn window_ring(fx: &Fixture, w: usize) -> usize {
    let step = if fx.kind == StateKind::Charged { fx.group().exponent().max(2) } else { 2 };
    (4 * w + 2).div_ceil(step) * step
}

/// One suite case.
#[derive(Debug, Clone)]
pub struct SuiteCase {
    pub fixture: String,
    pub route: &'static str,
    pub depth: usize,
    pub seed: u64,
    pub expected: CohomologyClass,
    pub found: Option<CohomologyClass>,
    pub residual: f64,
    pub invariance: f64,
    pub error: Option<String>,
    pub passed: bool,
}

impl SuiteCase {
    fn key(&self) -> (String, &'static str, usize, u64) {
        (self.fixture.clone(), self.route, self.depth, self.seed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "fixture": self.fixture,
            "route": self.route,
            "depth": self.depth,
            "seed": self.seed,
            "expected": class_json(&self.expected),
            "found": self.found.as_ref().map(class_json),
            "residual": self.residual,
            "invariance_residual": self.invariance,
            "error": self.error,
            "passed": self.passed,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub fixtures: Vec<String>,
    pub depths: Vec<usize>,
    pub seeds: Vec<u64>,
    /// Window route runs when the ring `4w` with `w = depth + 1` fits the cap.
    pub window: bool,
    pub stacking: bool,
    /// Replace the first gate of every circuit by a Haar gate.
    pub inject_nonequivariant: bool,
    pub tolerances: Tolerances,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            fixtures: ["eps:Z2xZ2", "eps:Z3xZ3", "eps:clock-shift:3:2", "product:Z2xZ2", "charged:Z2xZ2", "product:Z3xZ3", "charged:Z3xZ3"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            depths: vec![0, 1, 2, 3],
            seeds: (0..5).collect(),
            window: true,
            stacking: true,
            inject_nonequivariant: false,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct StackCase {
    pub first: String,
    pub second: String,
    pub product_law: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub cases: Vec<SuiteCase>,
    pub stacks: Vec<StackCase>,
    pub tolerances: Tolerances,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed) && self.stacks.iter().all(|s| s.product_law)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .cases
            .iter()
            .filter(|c| !c.passed)
            .map(|c| {
                format!(
                    "{} route={} depth={} seed={}: {}",
                    c.fixture,
                    c.route,
                    c.depth,
                    c.seed,
                    c.error.clone().unwrap_or_else(|| "class changed".into())
                )
            })
            .collect();
        out.extend(
            self.stacks
                .iter()
                .filter(|s| !s.product_law)
                .map(|s| format!("stack {} x {}: {}", s.first, s.second, s.error.clone().unwrap_or_else(|| "product law fails".into()))),
        );
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tool": "spt-index",
            "version": env!("CARGO_PKG_VERSION"),
            "passed": self.passed(),
            "tolerances": self.tolerances.to_json(),
            "cases": self.cases.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "stacks": self.stacks.iter().map(|s| json!({
                "first": s.first, "second": s.second, "product_law": s.product_law, "error": s.error,
            })).collect::<Vec<_>>(),
            "failures": self.failures(),
        })
    }
}

fn inject(c: &mut BrickworkCircuit, spec: &SiteSpec, seed: u64) -> Result<()> {
    if let Some(first) = c.layers.first_mut().and_then(|l| l.first_mut()) {
        let dim = first.matrix.nrows();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed ^ 0xbad);
        *first = gate_from_matrix(spec, &first.window, haar_unitary(dim, &mut rng)?)?;
    }
    Ok(())
}

/// Circuit applied before extraction.
#[derive(Debug, Clone, Copy, Default)]
pub struct CircuitChoice {
    pub depth: usize,
    pub seed: u64,
    /// One gate per layer, repeated around the ring.
    pub uniform: bool,
    /// Replace the first gate by a Haar gate (negative control).
    pub inject: bool,
}

/// MPS route on the fixture after a uniform brickwork circuit of the given
/// depth.
pub fn mps_route(fx: &Fixture, depth: usize, seed: u64, inject_gate: bool, tol: &Tolerances) -> Result<ExtractionReport> {
    let ring = fx.spec(2 * depth.max(1))?;
    let mut c = build_uniform_brickwork(&ring, depth, seed)?;
    if inject_gate {
        inject(&mut c, &ring, seed)?;
    }
    if c.max_residual() > crate::circuits::GATE_EQUIVARIANCE_TOL {
        return Err(Error::NotEquivariant { residual: c.max_residual() });
    }
    let base = fx.mps()?;
    let gates = c.layer_gates().unwrap_or_default();
    let params = json!({"fixture": fx.name(), "depth": depth, "seed": seed});
    if gates.is_empty() {
        extract_mps_index(&base, params, tol)
    } else {
        extract_mps_index(&BrickworkMps::new(&base, &gates)?, params, tol)
    }
}

/// The fixture on `n` sites after the chosen circuit.
pub fn prepared_state(fx: &Fixture, n: usize, circuit: CircuitChoice) -> Result<DenseState> {
    let psi = fx.dense(n)?;
    if circuit.depth == 0 {
        return Ok(psi);
    }
    let mut c = if circuit.uniform {
        build_uniform_brickwork(psi.spec(), circuit.depth, circuit.seed)?
    } else {
        build_brickwork(psi.spec(), circuit.depth, circuit.seed)?
    };
    if circuit.inject {
        inject(&mut c, psi.spec(), circuit.seed)?;
    }
    apply_circuit(&psi, &c)
}

/// Window route on the fixture after the chosen circuit; also returns the
/// invariance residual of the prepared state.
pub fn window_route(fx: &Fixture, n: usize, arc: RingArc, w: usize, circuit: CircuitChoice, tol: &Tolerances) -> Result<(ExtractionReport, f64)> {
    let phi = prepared_state(fx, n, circuit)?;
    let inv = phi.invariance_residual()?;
    let mut report = extract_window_index(&phi, arc, w, tol)?;
    report.parameters["fixture"] = json!(fx.name());
    report.parameters["depth"] = json!(circuit.depth);
    report.parameters["seed"] = json!(circuit.seed);
    report.parameters["uniform_circuit"] = json!(circuit.uniform);
    Ok((report, inv))
}

fn run_case(
    fx: &Fixture,
    route: &'static str,
    depth: usize,
    seed: u64,
    cfg: &SuiteConfig,
) -> SuiteCase {
    let expected = fx.expected_class().expect("fixture class");
    let mut case = SuiteCase {
        fixture: fx.name(),
        route,
        depth,
        seed,
        expected: expected.clone(),
        found: None,
        residual: 0.0,
        invariance: 0.0,
        error: None,
        passed: false,
    };
    let outcome = if route == "mps" {
        mps_route(fx, depth, seed, cfg.inject_nonequivariant, &cfg.tolerances).map(|r| (r, 0.0))
    } else {
        let w = depth + 1;
        let n = window_ring(fx, w);
        let circuit = CircuitChoice { depth, seed, uniform: false, inject: cfg.inject_nonequivariant };
        window_route(fx, n, RingArc::new(0, n / 2), w, circuit, &cfg.tolerances)
    };
    match outcome {
        Ok((report, inv)) => {
            case.residual = report.residual;
            case.invariance = inv;
            case.passed = report.class == expected && inv <= 1e-9;
            case.found = Some(report.class);
        }
        Err(e) => {
            case.error = Some(format!("{}: {}", e.code(), e));
        }
    }
    case
}

/// Whether the window route is affordable for this fixture and depth.
pub fn window_feasible(fx: &Fixture, depth: usize) -> bool {
    let w = depth + 1;
    let n = window_ring(fx, w);
    let d = fx.site_rep()[0].nrows();
    (0..n).try_fold(1_usize, |a, _| a.checked_mul(d)).map_or(false, |t| t <= crate::state::dense_cap())
}

/// Fixtures x depths x seeds on the MPS route (uniform circuits) and, where
/// affordable, the window route (independent gates, `w = depth + 1`); then
/// the stacking law over all fixture pairs.
pub fn run_invariance_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let fixtures = cfg.fixtures.iter().map(|s| Fixture::parse(s)).collect::<Result<Vec<_>>>()?;
    let mut cases = Vec::new();
    for fx in &fixtures {
        for &depth in &cfg.depths {
            for &seed in &cfg.seeds {
                cases.push(run_case(fx, "mps", depth, seed, cfg));
                if cfg.window && window_feasible(fx, depth) {
                    cases.push(run_case(fx, "window", depth, seed, cfg));
                }
            }
        }
    }
    cases.sort_by_key(|c| c.key());
    let mut stacks = Vec::new();
    if cfg.stacking {
        for (i, a) in fixtures.iter().enumerate() {
            for b in &fixtures[i..] {
                if !crate::cocycle::same_group(a.group(), b.group()) {
                    continue;
                }
                let r = (|| stacked_index_mps(&a.mps()?, &b.mps()?, &cfg.tolerances))();
                stacks.push(match r {
                    Ok(r) => StackCase { first: a.name(), second: b.name(), product_law: r.product_law, error: None },
                    Err(e) => StackCase { first: a.name(), second: b.name(), product_law: false, error: Some(e.to_string()) },
                });
            }
        }
    }
    Ok(SuiteReport { cases, stacks, tolerances: cfg.tolerances })
}

/// Classes of two reports agree at the cocycle level.
pub fn same_class(a: &ExtractionReport, b: &ExtractionReport) -> Result<bool> {
    Ok(cohomologous(&a.snapped, &b.snapped)?.is_some())
}
