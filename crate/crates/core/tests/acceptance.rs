//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the criteria execute one after another and their wall-clock
//! budgets are measured on an otherwise idle process.

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use spt_index::circuits::{apply_circuit, build_brickwork, swindle_demo, z2_swindle_fixture};
use spt_index::cocycle::Cocycle2;
use spt_index::cohomology::enumerate_h2;
use spt_index::diagnostics::{entanglement_entropy, pinsker_check, schmidt_tail, shannon, SchmidtTail};
use spt_index::extraction::{stacked_index_mps, ExtractionReport, Tolerances};
use spt_index::fixtures::{mps_route, run_invariance_suite, window_ring, window_route, CircuitChoice, Fixture, StateKind, SuiteConfig};
use spt_index::group::{cyclic_group, direct_product};
use spt_index::linalg::dagger;
use spt_index::projective::ProjectiveRep;
use spt_index::state::{dense_cap, RingArc};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fx(s: &str) -> Fixture {
    Fixture::parse(s).unwrap_or_else(|e| panic!("fixture {s}: {e}"))
}

fn all_fixtures() -> Vec<Fixture> {
    SuiteConfig::default().fixtures.iter().map(|s| fx(s)).collect()
}

/// Commutator phases `Q(g) Q(h) Q(g)^-1 Q(h)^-1 = beta(g, h)` read off the
/// matrices; a complete invariant for abelian groups.
fn commutator_phases(rho: &ProjectiveRep) -> Vec<Vec<C64>> {
    let n = rho.group().order();
    let d = rho.dim() as f64;
    (0..n)
        .map(|g| {
            (0..n)
                .map(|h| {
                    let (a, b) = (rho.matrix(g), rho.matrix(h));
                    let c = a.dot(b).dot(&dagger(a)).dot(&dagger(b));
                    c.diag().sum() / d
                })
                .collect()
        })
        .collect()
}

/// `nu(g, h) / nu(h, g)` of a cocycle.
fn antisymmetrized(nu: &Cocycle2) -> Vec<Vec<C64>> {
    let n = nu.order();
    (0..n).map(|g| (0..n).map(|h| nu.phase(g, h) / nu.phase(h, g)).collect()).collect()
}

fn table_distance(a: &[Vec<C64>], b: &[Vec<C64>]) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn is_trivial_table(a: &[Vec<C64>]) -> bool {
    a.iter().flatten().all(|z| (z - 1.0).norm() < 1e-9)
}

fn budget(label: &str, t: Duration, limit: f64) -> Result<(), String> {
    ensure(t.as_secs_f64() < limit, || format!("{label} took {:.2} s, budget {limit} s", t.as_secs_f64()))
}

fn criterion_1() -> Check {
    let t0 = Instant::now();
    let count = |g| enumerate_h2(&Arc::new(g)).map(|h| h.len()).map_err(|e| e.to_string());
    for n in 1..=12 {
        let k = count(cyclic_group(n).unwrap())?;
        ensure(k == 1, || format!("Z{n}: {k} classes"))?;
    }
    for m in 1..=4 {
        for n in 1..=4 {
            let g = direct_product(&cyclic_group(m).unwrap(), &cyclic_group(n).unwrap());
            let k = count(g)?;
            let want = num_integer::gcd(m, n);
            ensure(k == want, || format!("Z{m}xZ{n}: {k} classes, expected {want}"))?;
        }
    }
    budget("enumeration", t0.elapsed(), 5.0)?;
    Ok(format!("cyclic n<=12 and Zm x Zn (m,n<=4) match; {:.2} s", t0.elapsed().as_secs_f64()))
}

fn criterion_2() -> Check {
    let tol = Tolerances::default();
    let mut classes = Vec::new();
    for rep in ["pauli", "clock-shift:3:1", "clock-shift:3:2"] {
        let f = fx(&format!("eps:{rep}"));
        let t0 = Instant::now();
        let r = mps_route(&f, 0, 0, false, &tol).map_err(|e| format!("{rep}: {e}"))?;
        budget(rep, t0.elapsed(), 1.0)?;
        ensure(r.residual < 1e-10, || format!("{rep}: residual {:.2e}", r.residual))?;
        let want = commutator_phases(&f.rep);
        let got = antisymmetrized(&r.snapped);
        ensure(!is_trivial_table(&want), || format!("{rep}: oracle pairing is trivial"))?;
        let dist = table_distance(&want, &got);
        ensure(dist < 1e-9, || format!("{rep}: pairing differs from the commutators by {dist:.2e}"))?;
        ensure(!r.class.is_trivial(), || format!("{rep}: trivial class"))?;
        classes.push(r.class);
    }
    ensure(classes[1] != classes[2], || "q=1 and q=2 land in the same class".into())?;
    Ok("Pauli nontrivial; clock-shift q=1,2 give the two distinct nontrivial classes".into())
}

fn criterion_3() -> Check {
    let tol = Tolerances::default();
    let t0 = Instant::now();
    let mut runs = 0;
    let mut worst: f64 = 0.0;
    for f in all_fixtures() {
        let d = f.site_rep()[0].nrows();
        let fits = |n: usize| (d as f64).powi(n as i32) <= dense_cap() as f64;
        // charged products need N to be a multiple of the exponent
        let step = if f.kind == StateKind::Charged { f.group().exponent() } else { 1 };
        for w in 1..=2 {
            // N = 6..8, plus the smallest ring that holds halfwidth-2 windows
            let rings: Vec<usize> = [6, 7, 8, window_ring(&f, 2)]
                .into_iter()
                .filter(|&n| n >= window_ring(&f, w) && n % step == 0 && fits(n))
                .collect();
            for n in rings {
                for depth in 0..w {
                    for seed in 0..if depth == 0 { 1 } else { 3 } {
                        let arc = RingArc::new(0, n / 2);
                        let choice = CircuitChoice { depth, seed, uniform: true, inject: false };
                        let (win, _) = window_route(&f, n, arc, w, choice, &tol).map_err(|e| format!("{} N={n} w={w} depth={depth}: {e}", f.name()))?;
                        let mps = mps_route(&f, depth, seed, false, &tol).map_err(|e| format!("{} mps depth={depth}: {e}", f.name()))?;
                        ensure(win.class == mps.class, || format!("{} N={n} w={w} depth={depth} seed={seed}: routes disagree", f.name()))?;
                        ensure(win.residual < 1e-8, || format!("{} N={n} w={w} depth={depth}: residual {:.2e}", f.name(), win.residual))?;
                        worst = worst.max(win.residual);
                        runs += 1;
                    }
                }
            }
        }
    }
    budget("window matrix", t0.elapsed(), 30.0)?;
    Ok(format!("{runs} window runs agree with the MPS route, worst residual {worst:.1e}; {:.1} s", t0.elapsed().as_secs_f64()))
}

fn criterion_4() -> Check {
    let tol = Tolerances::default();
    let mut n_checked = 0;
    for name in ["product:Z2xZ2", "charged:Z2xZ2", "product:Z3xZ3", "charged:Z3xZ3", "product:clock-shift:3:2", "charged:clock-shift:3:2"] {
        let f = fx(name);
        let mps = mps_route(&f, 0, 0, false, &tol).map_err(|e| format!("{name}: {e}"))?;
        let n = window_ring(&f, 1);
        let (win, _) = window_route(&f, n, RingArc::new(0, n / 2), 1, CircuitChoice::default(), &tol).map_err(|e| format!("{name}: {e}"))?;
        for r in [&mps, &win] {
            ensure(r.class.is_trivial(), || format!("{name} {}: nontrivial class", r.route.name()))?;
            ensure(is_trivial_table(&antisymmetrized(&r.snapped)), || format!("{name}: nontrivial pairing"))?;
            ensure(r.residual < 1e-10, || format!("{name} {}: residual {:.2e}", r.route.name(), r.residual))?;
        }
        n_checked += 1;
    }
    Ok(format!("{n_checked} product fixtures trivial on both routes"))
}

fn criterion_5() -> Check {
    let t0 = Instant::now();
    let cfg = SuiteConfig { stacking: false, ..SuiteConfig::default() };
    let r = run_invariance_suite(&cfg).map_err(|e| e.to_string())?;
    let failures = r.failures();
    ensure(failures.is_empty(), || format!("{} failures, first: {}", failures.len(), failures[0]))?;
    let worst_inv = r.cases.iter().map(|c| c.invariance).fold(0.0, f64::max);
    ensure(worst_inv <= 1e-9, || format!("invariance residual {worst_inv:.2e}"))?;
    let n_cases = r.cases.len();

    let control = SuiteConfig { depths: vec![1, 2, 3], stacking: false, inject_nonequivariant: true, ..SuiteConfig::default() };
    let bad = run_invariance_suite(&control).map_err(|e| e.to_string())?;
    for c in &bad.cases {
        let caught = c.error.as_deref().is_some_and(|e| e.starts_with("not_equivariant"));
        ensure(caught, || format!("control {} {} depth={} seed={} not caught: {:?}", c.fixture, c.route, c.depth, c.seed, c.error))?;
    }
    Ok(format!(
        "{n_cases} cases keep their class, invariance <= {worst_inv:.1e}; {} injected cases all refused; {:.1} s",
        bad.cases.len(),
        t0.elapsed().as_secs_f64()
    ))
}

fn criterion_6() -> Check {
    let tol = Tolerances::default();
    let fixtures = all_fixtures();
    let mut pairs = 0;
    for (i, a) in fixtures.iter().enumerate() {
        for b in &fixtures[i..] {
            if a.group().order() != b.group().order() || a.group().table() != b.group().table() {
                continue;
            }
            let s = stacked_index_mps(&a.mps().unwrap(), &b.mps().unwrap(), &tol).map_err(|e| format!("{} x {}: {e}", a.name(), b.name()))?;
            ensure(s.product_law, || format!("{} x {}: product law fails", a.name(), b.name()))?;
            // independent check: pairings multiply
            let (pa, pb, pab) = (antisymmetrized(&s.first.snapped), antisymmetrized(&s.second.snapped), antisymmetrized(&s.stacked.snapped));
            let prod: Vec<Vec<C64>> = pa.iter().zip(&pb).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u * v).collect()).collect();
            ensure(table_distance(&prod, &pab) < 1e-9, || format!("{} x {}: pairings do not multiply", a.name(), b.name()))?;
            pairs += 1;
        }
    }
    for rep in ["pauli", "Z3xZ3", "clock-shift:3:2"] {
        let a = fx(&format!("eps:{rep}"));
        let b = fx(&format!("eps:dual:{rep}"));
        let s = stacked_index_mps(&a.mps().unwrap(), &b.mps().unwrap(), &tol).map_err(|e| format!("{rep} x dual: {e}"))?;
        ensure(s.stacked.class.is_trivial(), || format!("{rep} x dual: nontrivial"))?;
        ensure(!s.first.class.is_trivial(), || format!("{rep}: trivial on its own"))?;
    }
    Ok(format!("product law on {pairs} pairs; EPS(Q) x EPS(Q*) trivial for 3 reps"))
}

/// Every interval of the ring up to complements (a pure state gives an
/// interval and its complement the same spectrum).
fn intervals(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for len in 1..=n / 2 {
        let starts = if 2 * len == n { n / 2 } else { n };
        out.extend((0..starts).map(|s| RingArc::new(s, len).sites(n)));
    }
    out
}

/// Schmidt values back from their tail sums.
fn spectrum_of(t: &SchmidtTail) -> Vec<f64> {
    t.epsilon.windows(2).map(|w| w[0] - w[1]).collect()
}

fn criterion_7() -> Check {
    // product states under depth-d circuits
    let mut worst_ratio: f64 = 0.0;
    for (name, n) in [("product:Z2xZ2", 8), ("charged:Z2xZ2", 8), ("product:Z3xZ3", 6), ("charged:Z3xZ3", 6)] {
        let f = fx(name);
        let psi = f.dense(n).map_err(|e| e.to_string())?;
        let dmax = f.site_rep()[0].nrows();
        for depth in 1..=3 {
            let c = build_brickwork(psi.spec(), depth, 11 * depth as u64).map_err(|e| e.to_string())?;
            let phi = apply_circuit(&psi, &c).map_err(|e| e.to_string())?;
            let bound = 2.0 * depth as f64 * (dmax as f64).ln();
            let rank_bound = (dmax as f64).powi(2 * depth as i32);
            for sites in intervals(n) {
                let tail = schmidt_tail(&phi, &sites).map_err(|e| e.to_string())?;
                let s = shannon(&spectrum_of(&tail));
                ensure(s <= bound + 1e-9, || format!("{name} depth={depth} {sites:?}: S={s:.4} > {bound:.4}"))?;
                worst_ratio = worst_ratio.max(s / bound);
                let rank = tail.rank();
                ensure(rank as f64 <= rank_bound, || format!("{name} depth={depth} {sites:?}: Schmidt rank {rank} > {rank_bound}"))?;
            }
        }
    }
    // pair states: every interval carries two half bonds
    for (name, n) in [("eps:pauli", 8), ("eps:Z3xZ3", 6), ("eps:clock-shift:3:2", 6)] {
        let f = fx(name);
        let psi = f.dense(n).map_err(|e| e.to_string())?;
        let want = 2.0 * (f.rep.dim() as f64).ln();
        for sites in intervals(n) {
            let s = entanglement_entropy(&psi, &sites).map_err(|e| e.to_string())?;
            ensure((s - want).abs() < 1e-9, || format!("{name} {sites:?}: S={s} vs {want}"))?;
        }
    }
    let mut pinsker = 0;
    for f in all_fixtures() {
        let n = window_ring(&f, 1);
        let psi = f.dense(n).map_err(|e| e.to_string())?;
        let d = f.site_rep()[0].nrows();
        let pairs = [((0, 1), (1, 1)), ((0, 1), (2, 1)), ((0, 1), (3, 2)), ((0, 2), (3, 2)), ((0, 2), (2, 2))];
        // the joint density is formed explicitly, so keep it small
        for (a, b) in pairs.into_iter().filter(|(a, b)| d.pow((a.1 + b.1) as u32) <= 1024) {
            let (ra, rb) = (RingArc::new(a.0, a.1).sites(n), RingArc::new(b.0, b.1).sites(n));
            let p = pinsker_check(&psi, &ra, &rb).map_err(|e| e.to_string())?;
            ensure(p.holds, || format!("{} Pinsker fails: I={} dist={}", f.name(), p.mutual_information, p.distance))?;
            pinsker += 1;
        }
    }
    Ok(format!("entropy and Schmidt-rank bounds hold (max S/bound {worst_ratio:.2}); EPS entropies exact; {pinsker} Pinsker checks pass"))
}

fn criterion_8() -> Check {
    let (g, rep, w, wp) = z2_swindle_fixture().map_err(|e| e.to_string())?;
    for pairs in 1..=4 {
        let d = swindle_demo(g.clone(), &rep, &w, &wp, pairs).map_err(|e| e.to_string())?;
        let worst = d.purity_defects.iter().chain(&d.invariance_defects).copied().fold(0.0, f64::max);
        ensure(d.passed(1e-9), || format!("pairs={pairs}: defect {worst:.2e}"))?;
        // the input really is charged at the ends
        let charged = d.invariance_before.first().copied().unwrap_or(0.0);
        ensure(charged > 0.5, || format!("pairs={pairs}: input end site already invariant"))?;
    }
    Ok("one symmetric layer leaves pure invariant sites for 1..4 pairs".into())
}

fn report_text(r: &ExtractionReport) -> String {
    serde_json::to_string(&r.to_json(false)).unwrap()
}

fn criterion_9() -> Check {
    let tol = Tolerances::default();
    let f = fx("eps:Z3xZ3");
    let a = report_text(&mps_route(&f, 2, 7, false, &tol).map_err(|e| e.to_string())?);
    let b = report_text(&mps_route(&f, 2, 7, false, &tol).map_err(|e| e.to_string())?);
    ensure(a == b, || "MPS reports differ".into())?;
    let p = fx("eps:pauli");
    let n = window_ring(&p, 2);
    let choice = CircuitChoice { depth: 1, seed: 3, uniform: false, inject: false };
    let run = || window_route(&p, n, RingArc::new(0, n / 2), 2, choice, &tol).map(|r| report_text(&r.0));
    ensure(run().map_err(|e| e.to_string())? == run().map_err(|e| e.to_string())?, || "window reports differ".into())?;

    let cfg = SuiteConfig { fixtures: vec!["eps:pauli".into(), "charged:Z3xZ3".into()], depths: vec![0, 2], seeds: vec![1, 2], ..SuiteConfig::default() };
    let s1 = serde_json::to_string(&run_invariance_suite(&cfg).map_err(|e| e.to_string())?.to_json()).unwrap();
    let s2 = serde_json::to_string(&run_invariance_suite(&cfg).map_err(|e| e.to_string())?.to_json()).unwrap();
    ensure(s1 == s2, || "suite reports differ".into())?;

    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut bytes = Vec::new();
    for d in &dirs {
        let out = Command::new(env!("CARGO_BIN_EXE_spt"))
            .args(["--quiet", "--out"])
            .arg(d.path())
            .args(["index", "compare", "--rep", "pauli", "--depth", "1", "--seed", "5"])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), || format!("cli failed: {}", String::from_utf8_lossy(&out.stderr)))?;
        bytes.push(std::fs::read(d.path().join("report.json")).map_err(|e| e.to_string())?);
    }
    ensure(bytes[0] == bytes[1], || "CLI report.json differs between runs".into())?;
    Ok("MPS, window, suite and CLI reports are byte-identical across reruns".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("cohomology enumeration", criterion_1),
        ("pair-state index, MPS route", criterion_2),
        ("window route matches MPS route", criterion_3),
        ("product states are trivial", criterion_4),
        ("circuit invariance and negative control", criterion_5),
        ("stacking and inverse", criterion_6),
        ("entropy and decay bounds", criterion_7),
        ("swindle layer", criterion_8),
        ("determinism", criterion_9),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let k = i + 1;
        if only.is_some_and(|o| o != k) {
            continue;
        }
        let t0 = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {k} PASS [{name}] {detail} ({secs:.1} s)"),
            Err(detail) => {
                failed += 1;
                println!("criterion {k} FAIL [{name}] {detail} ({secs:.1} s)");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
