//! Command-line front end for the `spt` binary.
//!
//! Every command writes `report.json` (plus tables or state files) into
//! `--out` and echoes the report on stdout. Exit codes: 0 success, 1 domain
//! error (one JSON line on stderr), 2 usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::circuits::{apply_circuit, build_brickwork, build_uniform_brickwork, swindle_demo, z2_swindle_fixture, BrickworkCircuit};
use crate::cocycle::{Cocycle2, SNAP_TOL};
use crate::cohomology::{cohomologous, enumerate_h2, reduce_to_class};
use crate::diagnostics::{pinsker_check, schmidt_tail, EntropyProfile};
use crate::error::Error;
use crate::extraction::{classify, compare_routes, extract_window_index, stacked_index_mps, stacked_index_window, Tolerances};
use crate::fixtures::{mps_route, parse_rep, prepared_state, run_invariance_suite, window_ring, CircuitChoice, Fixture, StateKind, SuiteConfig};
use crate::group::{cyclic_group, direct_product, FiniteGroup};
use crate::io::{class_json, cochain_json, cocycle_file_json, cocycle_from_json, group_json, h2_json, load_group, load_state, rep_from_json, rep_json, save_state, spec_json};
use crate::projective::{clock_shift_rep, cocycle_of_rep, twisted_regular_rep, ProjectiveRep};
use crate::state::{DenseState, RingArc};

#[derive(Parser, Debug, Serialize)]
#[command(name = "spt", version, about = "Cohomological index of symmetric spin chains")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Directory for report.json, tables and state files.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Add wall-clock timing to reports (they are then no longer reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Amplitude cap for dense states; overrides SPT_DENSE_CAP.
    #[arg(long, global = true)]
    pub dense_cap: Option<usize>,
    /// Do not echo the report on stdout.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Subcommand, Debug, Serialize)]
pub enum Command {
    /// Finite groups.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Second cohomology.
    #[command(subcommand)]
    Cohomology(CohomologyCmd),
    /// Projective representations.
    #[command(subcommand)]
    Rep(RepCmd),
    /// Dense ring states.
    #[command(subcommand)]
    State(StateCmd),
    /// Index extraction.
    #[command(subcommand)]
    Index(IndexCmd),
    /// Equivariant circuits.
    #[command(subcommand)]
    Circuit(CircuitCmd),
    /// Entanglement diagnostics.
    #[command(subcommand)]
    Diag(DiagCmd),
    /// Demonstrations.
    #[command(subcommand)]
    Demo(DemoCmd),
}

#[derive(Subcommand, Debug, Serialize)]
pub enum GroupCmd {
    /// Check the axioms of a builtin group or group JSON file.
    Validate {
        #[arg(long)]
        group: String,
    },
    /// Direct product of two groups.
    Product {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Cyclic group of order n.
    Cyclic {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug, Serialize)]
pub enum CohomologyCmd {
    /// List the classes of H^2(G, U(1)).
    Enumerate {
        #[arg(long)]
        group: String,
    },
    /// Decide whether two cocycle files are cohomologous.
    Compare {
        #[arg(long)]
        first: PathBuf,
        #[arg(long)]
        second: PathBuf,
    },
}

#[derive(Subcommand, Debug, Serialize)]
pub enum RepCmd {
    /// Clock and shift matrices X^j Z^(qk) of Z_n x Z_n.
    ClockShift {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        q: i64,
    },
    /// Regular representation, twisted by a cocycle file if given.
    Regular {
        #[arg(long, required_unless_present = "cocycle")]
        group: Option<String>,
        #[arg(long)]
        cocycle: Option<PathBuf>,
    },
    /// Cocycle and class of a representation (name or JSON file).
    CocycleOf {
        #[arg(long)]
        rep: String,
    },
}

/// A fixture, optionally dressed by a brickwork circuit.
#[derive(Args, Debug, Clone, Serialize)]
pub struct FixtureArgs {
    /// Representation name (pauli, Z3xZ3, clock-shift:n:q, ...) or rep JSON file.
    #[arg(long, default_value = "pauli")]
    pub rep: String,
    /// eps, product or charged.
    #[arg(long, default_value = "eps")]
    pub kind: String,
    #[arg(long, default_value_t = 0)]
    pub depth: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Repeat one gate per layer instead of sampling every gate.
    #[arg(long)]
    pub uniform: bool,
}

/// A dense state: either a state file or a fixture on `N` sites.
#[derive(Args, Debug, Clone, Serialize)]
pub struct StateArgs {
    /// State header written by `state build-*` or `circuit apply`.
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[command(flatten)]
    pub fixture: FixtureArgs,
    #[arg(long = "N")]
    pub n_sites: Option<usize>,
}

#[derive(Args, Debug, Clone, Copy, Serialize)]
pub struct TolArgs {
    #[arg(long)]
    pub tol_invariance: Option<f64>,
    #[arg(long)]
    pub tol_relation: Option<f64>,
    #[arg(long)]
    pub tol_scalar: Option<f64>,
    #[arg(long)]
    pub tol_factorization: Option<f64>,
    #[arg(long)]
    pub tol_snap: Option<f64>,
}

#[derive(Subcommand, Debug, Serialize)]
pub enum StateCmd {
    /// Entangled-pair state on N sites.
    BuildEps {
        #[arg(long, default_value = "pauli")]
        rep: String,
        #[arg(long = "N")]
        n_sites: usize,
        #[arg(long, default_value = "eps")]
        name: String,
    },
    /// Product of invariant (or, with --charged, character) site vectors.
    BuildProduct {
        #[arg(long, default_value = "pauli")]
        rep: String,
        #[arg(long = "N")]
        n_sites: usize,
        #[arg(long)]
        charged: bool,
        #[arg(long, default_value = "product")]
        name: String,
    },
    /// Summary of a state file.
    Info {
        #[arg(long)]
        state: PathBuf,
    },
}

#[derive(Subcommand, Debug, Serialize)]
pub enum IndexCmd {
    /// Index from the transfer operator of the uniform MPS.
    ExtractMps {
        #[command(flatten)]
        fixture: FixtureArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Index from end-window unitaries on a dense ring.
    ExtractWindow {
        #[command(flatten)]
        source: StateArgs,
        /// Arc as start:len; defaults to 0:N/2.
        #[arg(long)]
        arc: Option<String>,
        /// End-window width; defaults to depth + 1.
        #[arg(long)]
        w: Option<usize>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Both routes on the same fixture and circuit (uniform gates).
    Compare {
        #[command(flatten)]
        fixture: FixtureArgs,
        #[arg(long = "N")]
        n_sites: Option<usize>,
        #[arg(long)]
        arc: Option<String>,
        /// End-window width; defaults to depth + 1.
        #[arg(long)]
        w: Option<usize>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Index of a stacked pair of fixtures and the product law.
    Stack {
        #[arg(long, default_value = "pauli")]
        rep: String,
        #[arg(long, default_value = "eps")]
        kind: String,
        #[arg(long, default_value = "dual:pauli")]
        rep2: String,
        #[arg(long, default_value = "eps")]
        kind2: String,
        /// Use the window route on N sites instead of the MPS route.
        #[arg(long)]
        window: bool,
        #[arg(long = "N")]
        n_sites: Option<usize>,
        #[arg(long)]
        arc: Option<String>,
        /// End-window width; defaults to depth + 1.
        #[arg(long)]
        w: Option<usize>,
        #[command(flatten)]
        tol: TolArgs,
    },
}

#[derive(Subcommand, Debug, Serialize)]
pub enum CircuitCmd {
    /// Sample an equivariant brickwork circuit and write circuit.json.
    Sample {
        #[arg(long, default_value = "pauli")]
        rep: String,
        #[arg(long = "N")]
        n_sites: usize,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        uniform: bool,
    },
    /// Apply a circuit file to a state file.
    Apply {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, default_value = "evolved")]
        name: String,
    },
    /// Class stability under equivariant circuits across fixtures and seeds.
    InvarianceSuite {
        /// Comma-separated kind:rep fixtures; default is the standard set.
        #[arg(long, value_delimiter = ',')]
        fixtures: Vec<String>,
        #[arg(long, value_delimiter = ',', default_values_t = [0usize, 1, 2, 3])]
        depths: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[arg(long)]
        no_window: bool,
        #[arg(long)]
        no_stacking: bool,
        /// Negative control: replace one gate per circuit by a Haar gate.
        #[arg(long)]
        inject_nonequivariant: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
}

#[derive(Subcommand, Debug, Serialize)]
pub enum DiagCmd {
    /// Entropies of the intervals start..start+k, written to entropy.csv.
    Entropy {
        #[command(flatten)]
        source: StateArgs,
        #[arg(long, default_value_t = 0)]
        start: usize,
    },
    /// Schmidt tail across an arc, written to schmidt.csv.
    Schmidt {
        #[command(flatten)]
        source: StateArgs,
        /// Arc as start:len; defaults to 0:N/2.
        #[arg(long)]
        cut: Option<String>,
    },
    /// Mutual information of two disjoint arcs and the Pinsker check.
    MutualInfo {
        #[command(flatten)]
        source: StateArgs,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
}

#[derive(Subcommand, Debug, Serialize)]
pub enum DemoCmd {
    /// Disentangle a charged Z2 product chain with one symmetric layer.
    Swindle {
        #[arg(long, default_value_t = 3)]
        pairs: usize,
    },
}

/// Failure reported on stderr with exit code 1.
#[derive(Debug)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub context: Value,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError { code: e.code().to_string(), message: e.to_string(), context: Value::Null }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Files produced by a command besides `report.json`.
struct Output {
    report: Value,
    files: Vec<(String, String)>,
    /// Set when the command ran but its checks failed.
    failure: Option<CliError>,
}

impl Output {
    fn report(report: Value) -> Self {
        Output { report, files: vec![], failure: None }
    }
}

fn tolerances(t: &TolArgs) -> CliResult<Tolerances> {
    let mut tol = Tolerances::default();
    let set = |slot: &mut f64, v: Option<f64>| -> CliResult<()> {
        if let Some(v) = v {
            if !(v > 0.0) {
                return Err(Error::InvalidArgument(format!("tolerances must be positive, got {v}")).into());
            }
            *slot = v;
        }
        Ok(())
    };
    set(&mut tol.invariance, t.tol_invariance)?;
    set(&mut tol.relation, t.tol_relation)?;
    set(&mut tol.scalar, t.tol_scalar)?;
    set(&mut tol.factorization, t.tol_factorization)?;
    set(&mut tol.snap, t.tol_snap)?;
    Ok(tol)
}

/// Representation by fixture name or from a rep JSON file.
fn load_rep(name: &str) -> CliResult<ProjectiveRep> {
    let path = Path::new(name);
    if path.is_file() {
        let v: Value = serde_json::from_str(&fs::read_to_string(path).map_err(Error::from)?).map_err(Error::from)?;
        return Ok(rep_from_json(&v, path.parent())?);
    }
    Ok(parse_rep(name)?)
}

fn fixture(rep: &str, kind: &str) -> CliResult<Fixture> {
    Ok(Fixture::from_rep(rep, load_rep(rep)?, StateKind::parse(kind)?))
}

fn circuit_choice(f: &FixtureArgs) -> CircuitChoice {
    CircuitChoice { depth: f.depth, seed: f.seed, uniform: f.uniform, inject: false }
}

fn parse_arc(s: Option<&str>, n: usize) -> CliResult<RingArc> {
    let arc = match s {
        Some(s) => RingArc::parse(s)?,
        None => RingArc::new(0, n / 2),
    };
    arc.validate(n)?;
    Ok(arc)
}

fn load_state_or_fixture(s: &StateArgs) -> CliResult<DenseState> {
    if let Some(p) = &s.state {
        return Ok(load_state(p)?);
    }
    let fx = fixture(&s.fixture.rep, &s.fixture.kind)?;
    let n = s.n_sites.ok_or_else(|| CliError::from(Error::InvalidArgument("give --state or --N".into())))?;
    Ok(prepared_state(&fx, n, circuit_choice(&s.fixture))?)
}

fn group_arg(s: &str) -> CliResult<Arc<FiniteGroup>> {
    Ok(Arc::new(load_group(s, None)?))
}

fn read_json(p: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(p).map_err(Error::from)?;
    Ok(serde_json::from_str(&text).map_err(Error::from)?)
}

/// Exact representative of a cocycle file (float tables are snapped).
fn exact_cocycle(nu: Cocycle2) -> CliResult<Cocycle2> {
    if nu.is_exact() {
        return Ok(nu);
    }
    Ok(classify(&nu, SNAP_TOL)?.0)
}

fn run_group(cmd: &GroupCmd) -> CliResult<Output> {
    let described = |g: &FiniteGroup| {
        json!({
            "group": group_json(g),
            "order": g.order(),
            "abelian": g.is_abelian(),
            "exponent": g.exponent(),
        })
    };
    Ok(Output::report(match cmd {
        GroupCmd::Validate { group } => {
            // files go through the table checks of the loader
            let mut v = described(&load_group(group, None)?);
            v["valid"] = json!(true);
            v
        }
        GroupCmd::Product { left, right } => described(&direct_product(&load_group(left, None)?, &load_group(right, None)?)),
        GroupCmd::Cyclic { n } => described(&cyclic_group(*n)?),
    }))
}

fn run_cohomology(cmd: &CohomologyCmd) -> CliResult<Output> {
    Ok(Output::report(match cmd {
        CohomologyCmd::Enumerate { group } => {
            let h2 = enumerate_h2(&group_arg(group)?)?;
            let mut v = h2_json(&h2);
            v["count"] = json!(h2.len());
            v
        }
        CohomologyCmd::Compare { first, second } => {
            let a = exact_cocycle(cocycle_from_json(&read_json(first)?, None, first.parent())?)?;
            let b = exact_cocycle(cocycle_from_json(&read_json(second)?, Some(a.group().clone()), second.parent())?)?;
            let mu = cohomologous(&a, &b)?;
            json!({
                "cohomologous": mu.is_some(),
                "cochain": mu.as_ref().map(cochain_json),
                "first": class_json(&reduce_to_class(&a)?),
                "second": class_json(&reduce_to_class(&b)?),
            })
        }
    }))
}

fn rep_report(rho: &ProjectiveRep) -> CliResult<Value> {
    let (_, class, _) = classify(&rho.cocycle().to_float(), SNAP_TOL)?;
    let mut v = rep_json(rho);
    v["class"] = class_json(&class);
    Ok(v)
}

fn run_rep(cmd: &RepCmd) -> CliResult<Output> {
    Ok(Output::report(match cmd {
        RepCmd::ClockShift { n, q } => rep_report(&clock_shift_rep(*n, *q)?)?,
        RepCmd::Regular { group, cocycle } => {
            let nu = match (cocycle, group) {
                (Some(p), _) => exact_cocycle(cocycle_from_json(&read_json(p)?, None, p.parent())?)?,
                (None, Some(g)) => Cocycle2::trivial(group_arg(g)?),
                (None, None) => return Err(Error::InvalidArgument("give --group or --cocycle".into()).into()),
            };
            rep_report(&twisted_regular_rep(&nu)?)?
        }
        RepCmd::CocycleOf { rep } => {
            let rho = load_rep(rep)?;
            let nu = cocycle_of_rep(rho.group(), rho.matrices())?;
            let (snapped, class, err) = classify(&nu.to_float(), SNAP_TOL)?;
            json!({
                "cocycle": cocycle_file_json(&nu),
                "snapped": cocycle_file_json(&snapped),
                "snap_error": err,
                "class": class_json(&class),
            })
        }
    }))
}

fn state_summary(psi: &DenseState) -> CliResult<Value> {
    let profile = EntropyProfile::cuts(psi, 0)?;
    Ok(json!({
        "spec": spec_json(psi.spec()),
        "n_sites": psi.n_sites(),
        "total_dim": psi.spec().total_dim(),
        "norm": psi.norm(),
        "invariance_residual": psi.invariance_residual()?,
        "entropy_profile": profile.to_json(),
    }))
}

fn run_state(cmd: &StateCmd, out: &Path) -> CliResult<Output> {
    let (psi, name) = match cmd {
        StateCmd::BuildEps { rep, n_sites, name } => (fixture(rep, "eps")?.dense(*n_sites)?, name),
        StateCmd::BuildProduct { rep, n_sites, charged, name } => {
            (fixture(rep, if *charged { "charged" } else { "product" })?.dense(*n_sites)?, name)
        }
        StateCmd::Info { state } => return Ok(Output::report(state_summary(&load_state(state)?)?)),
    };
    let header = out.join(format!("{name}.json"));
    save_state(&psi, &header)?;
    let mut v = state_summary(&psi)?;
    v["file"] = json!(header.display().to_string());
    Ok(Output::report(v))
}

fn run_index(cmd: &IndexCmd, timing: bool) -> CliResult<Output> {
    match cmd {
        IndexCmd::ExtractMps { fixture: f, tol } => {
            let fx = fixture(&f.rep, &f.kind)?;
            let r = mps_route(&fx, f.depth, f.seed, false, &tolerances(tol)?)?;
            Ok(Output::report(r.to_json(timing)))
        }
        IndexCmd::ExtractWindow { source, arc, w, tol } => {
            let tol = tolerances(tol)?;
            let w = &w.unwrap_or(source.fixture.depth + 1);
            let psi = match (&source.state, source.n_sites) {
                (None, None) => {
                    let fx = fixture(&source.fixture.rep, &source.fixture.kind)?;
                    prepared_state(&fx, window_ring(&fx, *w), circuit_choice(&source.fixture))?
                }
                _ => load_state_or_fixture(source)?,
            };
            let arc = parse_arc(arc.as_deref(), psi.n_sites())?;
            Ok(Output::report(extract_window_index(&psi, arc, *w, &tol)?.to_json(timing)))
        }
        IndexCmd::Compare { fixture: f, n_sites, arc, w, tol } => {
            let tol = tolerances(tol)?;
            let w = &w.unwrap_or(f.depth + 1);
            let fx = fixture(&f.rep, &f.kind)?;
            let n = n_sites.unwrap_or_else(|| window_ring(&fx, *w));
            let arc = parse_arc(arc.as_deref(), n)?;
            let mps = mps_route(&fx, f.depth, f.seed, false, &tol)?;
            let choice = CircuitChoice { uniform: true, ..circuit_choice(f) };
            let psi = prepared_state(&fx, n, choice)?;
            let window = extract_window_index(&psi, arc, *w, &tol)?;
            let (agree, mu) = compare_routes(&mps, &window)?;
            let report = json!({
                "agree": agree,
                "cochain": mu.as_ref().map(cochain_json),
                "mps": mps.to_json(timing),
                "window": window.to_json(timing),
            });
            let failure = (!agree).then(|| CliError {
                code: "routes_disagree".into(),
                message: "MPS and window routes give different classes".into(),
                context: json!({"mps": class_json(&mps.class), "window": class_json(&window.class)}),
            });
            Ok(Output { report, files: vec![], failure })
        }
        IndexCmd::Stack { rep, kind, rep2, kind2, window, n_sites, arc, w, tol } => {
            let tol = tolerances(tol)?;
            let w = &w.unwrap_or(1);
            let (a, b) = (fixture(rep, kind)?, fixture(rep2, kind2)?);
            let r = if *window {
                let n = n_sites.unwrap_or_else(|| window_ring(&a, *w).max(window_ring(&b, *w)));
                let arc = parse_arc(arc.as_deref(), n)?;
                stacked_index_window(&a.dense(n)?, &b.dense(n)?, arc, *w, &tol)?
            } else {
                stacked_index_mps(&a.mps()?, &b.mps()?, &tol)?
            };
            let failure = (!r.product_law).then(|| CliError {
                code: "product_law_failed".into(),
                message: "class of the stack is not the product of the classes".into(),
                context: Value::Null,
            });
            Ok(Output { report: r.to_json(timing), files: vec![], failure })
        }
    }
}

fn run_circuit(cmd: &CircuitCmd, out: &Path) -> CliResult<Output> {
    match cmd {
        CircuitCmd::Sample { rep, n_sites, depth, seed, uniform } => {
            let spec = fixture(rep, "eps")?.spec(*n_sites)?;
            let c = if *uniform {
                build_uniform_brickwork(&spec, *depth, *seed)?
            } else {
                build_brickwork(&spec, *depth, *seed)?
            };
            let body = serde_json::to_string_pretty(&c.to_json()).map_err(Error::from)? + "\n";
            Ok(Output {
                report: json!({
                    "n_sites": n_sites,
                    "depth": c.depth(),
                    "gates": c.gate_count(),
                    "max_equivariance_residual": c.max_residual(),
                    "file": out.join("circuit.json").display().to_string(),
                }),
                files: vec![("circuit.json".into(), body)],
                failure: None,
            })
        }
        CircuitCmd::Apply { state, circuit, name } => {
            let psi = load_state(state)?;
            let c = BrickworkCircuit::from_json(&read_json(circuit)?, psi.spec())?;
            let phi = apply_circuit(&psi, &c)?;
            let header = out.join(format!("{name}.json"));
            save_state(&phi, &header)?;
            Ok(Output::report(json!({
                "depth": c.depth(),
                "max_equivariance_residual": c.max_residual(),
                "invariance_before": psi.invariance_residual()?,
                "invariance_after": phi.invariance_residual()?,
                "file": header.display().to_string(),
            })))
        }
        CircuitCmd::InvarianceSuite { fixtures, depths, seeds, no_window, no_stacking, inject_nonequivariant, tol } => {
            let mut cfg = SuiteConfig::default();
            if !fixtures.is_empty() {
                cfg.fixtures = fixtures.clone();
            }
            cfg.depths = depths.clone();
            cfg.seeds = (0..*seeds).collect();
            cfg.window = !no_window;
            cfg.stacking = !no_stacking;
            cfg.inject_nonequivariant = *inject_nonequivariant;
            cfg.tolerances = tolerances(tol)?;
            let r = run_invariance_suite(&cfg)?;
            let mut csv = String::from("fixture,route,depth,seed,passed,residual,invariance_residual,error\n");
            for c in &r.cases {
                csv.push_str(&format!(
                    "{},{},{},{},{},{:e},{:e},{}\n",
                    c.fixture,
                    c.route,
                    c.depth,
                    c.seed,
                    c.passed,
                    c.residual,
                    c.invariance,
                    c.error.as_deref().unwrap_or("").replace(',', ";")
                ));
            }
            let failures = r.failures();
            let failure = (!failures.is_empty()).then(|| CliError {
                code: "suite_failed".into(),
                message: failures[0].clone(),
                context: json!({"failures": failures}),
            });
            Ok(Output { report: r.to_json(), files: vec![("suite.csv".into(), csv)], failure })
        }
    }
}

fn run_diag(cmd: &DiagCmd) -> CliResult<Output> {
    match cmd {
        DiagCmd::Entropy { source, start } => {
            let psi = load_state_or_fixture(source)?;
            let p = EntropyProfile::cuts(&psi, *start)?;
            Ok(Output {
                report: json!({"profile": p.to_json(), "max": p.max()}),
                files: vec![("entropy.csv".into(), p.to_csv())],
                failure: None,
            })
        }
        DiagCmd::Schmidt { source, cut } => {
            let psi = load_state_or_fixture(source)?;
            let arc = parse_arc(cut.as_deref(), psi.n_sites())?;
            let t = schmidt_tail(&psi, &arc.sites(psi.n_sites()))?;
            Ok(Output { report: t.to_json(), files: vec![("schmidt.csv".into(), t.to_csv())], failure: None })
        }
        DiagCmd::MutualInfo { source, a, b } => {
            let psi = load_state_or_fixture(source)?;
            let n = psi.n_sites();
            let (ra, rb) = (parse_arc(Some(a), n)?, parse_arc(Some(b), n)?);
            let p = pinsker_check(&psi, &ra.sites(n), &rb.sites(n))?;
            Ok(Output::report(json!({
                "mutual_information": p.mutual_information,
                "distance_l1": p.distance,
                "pinsker_bound": p.bound,
                "pinsker_holds": p.holds,
            })))
        }
    }
}

fn run_demo(cmd: &DemoCmd) -> CliResult<Output> {
    match cmd {
        DemoCmd::Swindle { pairs } => {
            let (g, rep, w, w_prime) = z2_swindle_fixture()?;
            let d = swindle_demo(g, &rep, &w, &w_prime, *pairs)?;
            let failure = (!d.passed(1e-9)).then(|| CliError {
                code: "swindle_failed".into(),
                message: "some site is not an invariant pure state".into(),
                context: Value::Null,
            });
            Ok(Output { report: d.to_json(), files: vec![], failure })
        }
    }
}

fn kebab(k: &str) -> String {
    let mut out = String::new();
    for (i, c) in k.chars().enumerate() {
        if c.is_uppercase() && i > 0 {
            out.push('-');
        }
        out.extend(c.to_lowercase());
    }
    out
}

fn command_name(c: &Command) -> String {
    let v = serde_json::to_value(c).unwrap_or(Value::Null);
    // externally tagged enums: {"Index": {"ExtractMps": {...}}}
    let mut parts = Vec::new();
    let mut cur = &v;
    while let Value::Object(m) = cur {
        match m.iter().next() {
            Some((k, inner)) if m.len() == 1 && k.chars().next().is_some_and(|c| c.is_uppercase()) => {
                parts.push(kebab(k));
                cur = inner;
            }
            _ => break,
        }
    }
    parts.join(" ")
}

/// Runs a parsed command; the report, files and any check failure.
pub fn execute(cli: &Cli) -> std::result::Result<Value, CliError> {
    if let Some(cap) = cli.common.dense_cap {
        std::env::set_var("SPT_DENSE_CAP", cap.to_string());
    }
    let out = &cli.common.out;
    fs::create_dir_all(out).map_err(Error::from)?;
    let result = match &cli.command {
        Command::Group(c) => run_group(c),
        Command::Cohomology(c) => run_cohomology(c),
        Command::Rep(c) => run_rep(c),
        Command::State(c) => run_state(c, out),
        Command::Index(c) => run_index(c, cli.common.timing),
        Command::Circuit(c) => run_circuit(c, out),
        Command::Diag(c) => run_diag(c),
        Command::Demo(c) => run_demo(c),
    };
    let name = command_name(&cli.command);
    let output = result.map_err(|mut e| {
        if e.context.is_null() {
            e.context = json!({"command": name});
        }
        e
    })?;
    let mut report = output.report;
    if let Value::Object(m) = &mut report {
        m.entry("tool").or_insert(json!("spt-index"));
        m.entry("version").or_insert(json!(env!("CARGO_PKG_VERSION")));
        m.insert("command".into(), json!(name));
        m.insert("config".into(), serde_json::to_value(&cli.command).map_err(Error::from)?);
    }
    let body = serde_json::to_string_pretty(&report).map_err(Error::from)? + "\n";
    fs::write(out.join("report.json"), &body).map_err(Error::from)?;
    for (file, text) in &output.files {
        fs::write(out.join(file), text).map_err(Error::from)?;
    }
    if !cli.common.quiet {
        print!("{body}");
    }
    match output.failure {
        Some(mut e) => {
            if e.context.is_null() {
                e.context = json!({"command": name});
            }
            Err(e)
        }
        None => Ok(report),
    }
}

/// Entry point of the `spt` binary.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            let line = json!({"code": e.code, "message": e.message, "context": e.context});
            eprintln!("{line}");
            ExitCode::from(1)
        }
    }
}
