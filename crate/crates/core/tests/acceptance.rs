//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! The process fails if a criterion outside `KNOWN_FAILURES` fails, or if a
//! known failure starts passing.

use std::sync::Arc;
use std::time::{Duration, Instant};

use dlcusp::dlchar::{self, ClassTable};
use dlcusp::gf::FieldTower;
use dlcusp::groups::{Bounds, GroupKind, Seed, TorusKind};
use dlcusp::multiplicity;
use dlcusp::rootdata::{library, IntMatrix};
use dlcusp::suites;
use dlcusp::Exec;

/// Split tori under an involution with `θ* = −1`: at `t = diag(1, −1)`
/// `det Ad = −1` while `α(t)·(−α)(t) = +1`.
const KNOWN_FAILURES: &[u32] = &[2];

const TOL: f64 = 1e-6;

struct Outcome {
    pass: bool,
    detail: String,
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let mut out = f();
    let took = start.elapsed();
    if took > limit {
        out.pass = false;
        out.detail = format!("{} (over the {:?} limit)", out.detail, limit);
    }
    (out, took)
}

fn bounds() -> Bounds {
    Bounds::default()
}

fn criterion_1() -> Outcome {
    let mut data = library::all();
    let shipped = data.len();
    data.extend(suites::random_twists(128, 0x5eed).expect("random twists"));
    let reports = suites::sigma_suite(&data, Exec::default());
    let bad: Vec<&str> = reports.iter().filter(|r| !r.agree).map(|r| r.datum.as_str()).collect();
    Outcome {
        pass: bad.is_empty() && reports.len() >= shipped + 100,
        detail: format!("{shipped} shipped + {} random data; disagreeing: {bad:?}", reports.len() - shipped),
    }
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut all_minus_one_on_split = true;
    for q in [3, 5, 7] {
        for torus in [TorusKind::Elliptic, TorusKind::Split] {
            for seed in Seed::named_for(GroupKind::Gl2) {
                let reports = suites::epsilon_suite(GroupKind::Gl2, q, torus, &seed, &bounds(), Exec::default())
                    .expect("epsilon suite");
                for r in reports {
                    checked += 1;
                    if !r.agree() {
                        all_minus_one_on_split &=
                            torus == TorusKind::Split && r.theta_star == IntMatrix::identity(2).scale(-1);
                        failures.push(format!("q={} {} {} {}: {}/{}", r.q, r.torus, r.seed, r.theta, r.disagreements, r.domain));
                    }
                }
            }
        }
    }
    let shown: Vec<&String> = failures.iter().take(3).collect();
    Outcome {
        pass: failures.is_empty() && checked > 0,
        detail: format!(
            "{checked} stable involutions, {} disagreeing (all split with θ* = -1: {all_minus_one_on_split}); first: {shown:?}",
            failures.len()
        ),
    }
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for q in [3, 5] {
        for torus in [TorusKind::Elliptic, TorusKind::Split] {
            for seed in Seed::named_for(GroupKind::Gl2) {
                for r in suites::phi_theta_suite(GroupKind::Gl2, q, torus, &seed, &bounds(), Exec::default())
                    .expect("phi_theta suite")
                {
                    checked += 1;
                    if !r.agree {
                        failures.push(format!("q={} {} {}", r.q, r.torus, r.theta));
                    }
                }
            }
        }
    }
    Outcome { pass: failures.is_empty() && checked > 0, detail: format!("{checked} involutions; failing: {failures:?}") }
}

fn criterion_4() -> Outcome {
    let reports = suites::no_fixed_root_suite(&library::all()).expect("no fixed root suite");
    let bad: Vec<String> =
        reports.iter().filter(|r| !r.agree || !r.four_roots_even).map(|r| format!("{} {:?}", r.datum, r.theta)).collect();
    Outcome {
        pass: bad.is_empty() && !reports.is_empty(),
        detail: format!("{} (datum, θ*) pairs without fixed roots; failing: {bad:?}", reports.len()),
    }
}

fn criterion_5() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for q in [3u64, 5, 7] {
        let tower = Arc::new(FieldTower::build(q, &[1, 2]).expect("tower"));
        let table = Arc::new(ClassTable::new(tower).expect("class table"));
        let all = match dlchar::all_cuspidal(&table, Exec::default()) {
            Ok(v) => v,
            Err(e) => {
                pass = false;
                lines.push(format!("q={q}: {e}"));
                continue;
            }
        };
        let mut worst_norm = 0.0f64;
        let mut worst_unipotent = 0.0f64;
        let mut degrees_ok = true;
        for c in &all {
            let chi = c.character();
            let n = dlchar::class_inner_product(chi, chi).expect("inner product");
            worst_norm = worst_norm.max((n - 1.0).norm());
            degrees_ok &= (chi.degree() - (q - 1) as f64).norm() < TOL;
            worst_unipotent = worst_unipotent.max(dlchar::unipotent_average_defect(&table, chi, Exec::default()));
        }
        let ok = all.len() as u64 == (q * q - q) / 2 && worst_norm < TOL && worst_unipotent < TOL && degrees_ok;
        pass &= ok;
        lines.push(format!("q={q}: {} characters, max |<χ,χ>-1| {worst_norm:.1e}, max unipotent {worst_unipotent:.1e}", all.len()));
    }
    Outcome { pass, detail: lines.join("; ") }
}

/// Criterion 6 with the sample counts collected for criterion 8.
fn criterion_6_and_8() -> (Outcome, Outcome) {
    let mut pass6 = true;
    let mut pass8 = true;
    let mut lines = Vec::new();
    let mut sampled = Vec::new();
    for q in [3u64, 5, 7] {
        for seed in [Seed::Diag, Seed::Antidiag, Seed::TransposeInverse] {
            let (setup, rows) = match multiplicity::run(GroupKind::Gl2, q, seed, &bounds(), Exec::default()) {
                Ok(x) => x,
                Err(e) => {
                    pass6 = false;
                    lines.push(format!("q={q} {}: {e}", seed.name()));
                    continue;
                }
            };
            let n = setup.census().len();
            let mut values = Vec::new();
            for r in rows {
                match r {
                    Ok(r) => {
                        pass8 &= r.lhs_samples.len() == n.min(4);
                        values.push(r.lhs);
                    }
                    Err(e) => {
                        pass6 = false;
                        pass8 &= !matches!(e, multiplicity::MultError::ThetaDependence(_));
                        lines.push(format!("q={q} {}: {e}", seed.name()));
                    }
                }
            }
            pass6 &= values.len() as u64 == (q * q - q) / 2;
            if q == 3 && seed == Seed::Diag {
                pass6 &= values == [1, 0, 0];
                lines.push(format!("q=3 diag multiplicities {values:?}"));
            }
            sampled.push(format!("{}@{q}:{}", seed.name(), n.min(4)));
        }
    }
    (
        Outcome { pass: pass6, detail: format!("9 (q, Θ) grids, lhs = rhs; {}", lines.join("; ")) },
        Outcome { pass: pass8, detail: format!("representatives per Θ (all of Θ when |Θ| < 4): {}", sampled.join(" ")) },
    )
}

fn criterion_7() -> Outcome {
    let (_, rows) = multiplicity::run(GroupKind::Gl2XGl2, 3, Seed::Swap, &bounds(), Exec::default()).expect("gl2_x_gl2 run");
    let mut grid = vec![vec![u64::MAX; 3]; 3];
    let mut errors = Vec::new();
    for (k, r) in rows.into_iter().enumerate() {
        match r {
            Ok(r) if r.lhs == r.rhs => grid[k / 3][k % 3] = r.lhs,
            Ok(r) => errors.push(format!("{:?}: {} vs {}", r.pairs, r.lhs, r.rhs)),
            Err(e) => errors.push(e.to_string()),
        }
    }
    let pass = errors.is_empty() && (0..3).all(|i| (0..3).all(|j| grid[i][j] == u64::from(i == j)));
    Outcome { pass, detail: format!("grid {grid:?}; errors {errors:?}") }
}

fn main() {
    // `cargo test` passes harness flags such as `--nocapture`; `--list` must
    // not run anything.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut results: Vec<(u32, Outcome, Duration)> = Vec::new();
    let secs = Duration::from_secs;
    let (o, t) = timed(secs(1), criterion_1);
    results.push((1, o, t));
    let (o, t) = timed(secs(10), criterion_2);
    results.push((2, o, t));
    let (o, t) = timed(secs(10), criterion_3);
    results.push((3, o, t));
    let (o, t) = timed(secs(1), criterion_4);
    results.push((4, o, t));
    let (o, t) = timed(secs(60), criterion_5);
    results.push((5, o, t));
    let start = Instant::now();
    let (o6, o8) = criterion_6_and_8();
    let t6 = start.elapsed();
    let o6 = if t6 > secs(300) { Outcome { pass: false, detail: format!("{} (over 300s)", o6.detail) } } else { o6 };
    results.push((6, o6, t6));
    let (o, t) = timed(secs(120), criterion_7);
    results.push((7, o, t));
    results.push((8, o8, t6));

    let mut unexpected = Vec::new();
    for (n, o, t) in &results {
        let known = KNOWN_FAILURES.contains(n);
        let tag = match (o.pass, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
            (true, true) => "PASS (expected to fail)",
        };
        println!("criterion {n}: {tag} [{:.2}s] {}", t.as_secs_f64(), o.detail);
        if o.pass == known {
            unexpected.push(*n);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
