//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use radclean::classify::{classify_rad_clean, verify_witness, Case, Reason, TraceProperty};
use radclean::cli::{ClassifyReport, TracePropertyReport};
use radclean::oracle::{
    brute_predicate, exhaustive_cross_check, Budget, OracleReport, Predicate, Selection,
};
use radclean::quadratic::Evidence;
use radclean::series::{classify_series_matrix, evaluate_at_zero};
use radclean::{classify, Mat2, Ring};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_radclean"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "radclean {args:?} exited with {}: {}",
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn json<T: serde::de::DeserializeOwned>(args: &[&str]) -> Result<T, String> {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    serde_json::from_str(&cli(&full)?).map_err(|e| e.to_string())
}

fn zmod(m: u64) -> Ring {
    Ring::zmod(m).unwrap()
}

fn nilpotent_example() -> Outcome {
    let r: ClassifyReport = json(&["classify", "--ring", "Zmod:4", "--matrix", "2,3;0,2"])?;
    ensure!(r.strongly_clean, "expected strongly clean");
    ensure!(!r.strongly_rad_clean, "expected not strongly rad-clean");
    Ok("strongly_clean=true strongly_rad_clean=false".into())
}

fn invertible_and_localized_examples() -> Outcome {
    let r = zmod(4);
    let a = Mat2::from_ints(&r, [[1, 1], [1, 0]]);
    let c = classify_rad_clean(&a).map_err(|e| e.to_string())?;
    ensure!(
        c.case == Case::Invertible && c.strongly_rad_clean,
        "got {:?}",
        c.case
    );
    let b = Budget::default();
    ensure!(
        brute_predicate(&a, Predicate::RadClean, b).unwrap(),
        "oracle: not rad-clean"
    );
    ensure!(
        !brute_predicate(&a, Predicate::JClean, b).unwrap(),
        "oracle: j-clean"
    );

    let zl = Ring::zloc(3).unwrap();
    let m = Mat2::from_ints(&zl, [[2, 1], [-1, 1]]);
    let c = classify_rad_clean(&m).map_err(|e| e.to_string())?;
    ensure!(c.case == Case::NotRadClean, "got {:?}", c.case);
    ensure!(
        c.reason == Some(Reason::TraceNotUnit),
        "reason {:?}",
        c.reason
    );
    Ok("Invertible, j-clean=false; Zloc:3 NotRadClean (trace-not-unit)".into())
}

fn z4_trace_property() -> Outcome {
    let t: TracePropertyReport = json(&["trace-property", "--ring", "Zmod:4"])?;
    ensure!(t.holds, "trace property fails: {t:?}");
    ensure!(
        t.evidence == Some(Evidence::Exhaustive),
        "evidence {:?}",
        t.evidence
    );
    ensure!(t.pairs_checked == 4, "checked {} pairs", t.pairs_checked);

    // independent count of unit-trace matrices over Z/4
    let mut unit_trace = 0;
    for a in 0..4u64 {
        for d in 0..4u64 {
            if (a + d) % 2 == 1 {
                unit_trace += 16;
            }
        }
    }
    let report: OracleReport = json(&["oracle", "--ring", "Zmod:4", "--check", "rad-clean"])?;
    let tallies = &report.tallies;
    ensure!(
        tallies.invertible_trace == unit_trace,
        "oracle counted {} unit-trace matrices, enumeration {unit_trace}",
        tallies.invertible_trace
    );
    ensure!(
        tallies.invertible_trace_rad_clean == unit_trace,
        "only {} of {unit_trace} unit-trace matrices are rad-clean",
        tallies.invertible_trace_rad_clean
    );
    let rad = tallies.rad_clean.unwrap_or(0);
    ensure!(rad < report.total_matrices, "every matrix is rad-clean");
    Ok(format!(
        "4 pairs solved; {unit_trace}/{unit_trace} unit-trace matrices rad-clean; {} of 256 not rad-clean",
        report.total_matrices - rad
    ))
}

fn padic_samples() -> Outcome {
    let ring = Ring::padic(2, 32).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut done = 0;
    while done < 100 {
        let [a, b, c] = [0; 3].map(|_| ring.random_elem(&mut rng));
        let d = &ring.random_unit(&mut rng) - &a;
        let m = Mat2::new(a, b, c, d).unwrap();
        ensure!(m.trace().is_unit(), "sampler produced non-unit trace");
        let v = classify_rad_clean(&m).map_err(|e| format!("{m}: {e}"))?;
        ensure!(v.strongly_rad_clean, "{m} rejected");
        let w = v.witness.ok_or("missing witness")?;
        verify_witness(&m, w.e, w.u).map_err(|e| e.to_string())?;
        done += 1;
    }
    let r: ClassifyReport = json(&["classify", "--ring", "Padic:2:32", "--matrix", "1,1;1,1"])?;
    ensure!(!r.strongly_rad_clean, "[[1,1],[1,1]] accepted");
    Ok("100/100 unit-trace samples verified; [[1,1],[1,1]] rejected".into())
}

fn oracle_sweeps() -> Result<Vec<OracleReport>, String> {
    [4, 8, 9]
        .into_iter()
        .map(|m| {
            exhaustive_cross_check(&zmod(m), Selection::All, Budget::default())
                .map_err(|e| e.to_string())
        })
        .collect()
}

fn oracle_equivalence(reports: &[OracleReport]) -> Outcome {
    let mut summary = Vec::new();
    for (r, expected) in reports.iter().zip([256, 4096, 6561]) {
        ensure!(
            r.total_matrices == expected,
            "{}: {} matrices",
            r.ring,
            r.total_matrices
        );
        ensure!(
            r.mismatches.is_empty(),
            "{}: {} mismatches, first {:?}",
            r.ring,
            r.mismatches.len(),
            r.mismatches[0]
        );
        ensure!(
            r.implication_violations.is_empty(),
            "{}: implication violations {:?}",
            r.ring,
            r.implication_violations
        );
        let wants_disc = r.ring == "Zmod:9";
        ensure!(
            r.compared.iter().any(|c| c == "discriminant-square") == wants_disc,
            "{}: compared {:?}",
            r.ring,
            r.compared
        );
        summary.push(format!("{} {} paths", r.ring, r.compared.len()));
    }
    Ok(format!(
        "0 mismatches, 0 violations ({})",
        summary.join(", ")
    ))
}

fn witness_soundness(reports: &[OracleReport]) -> Outcome {
    let mut total = 0;
    for r in reports {
        ensure!(
            r.witness_failures.is_empty(),
            "{}: {:?}",
            r.ring,
            r.witness_failures
        );
        let rad = r.tallies.rad_clean.unwrap_or(0);
        ensure!(
            r.witnesses_verified == rad,
            "{}: {} witnesses for {rad} matrices",
            r.ring,
            r.witnesses_verified
        );
        total += rad;
    }
    Ok(format!("{total} witnesses pass all five conditions"))
}

fn series_lifting() -> Outcome {
    let mut split = 0;
    for m in [4, 9] {
        let base = zmod(m);
        let ring = Ring::series(&base, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(m);
        for _ in 0..100 {
            let [a, b, c, d] = [0; 4].map(|_| ring.random_elem(&mut rng));
            let mat = Mat2::new(a, b, c, d).unwrap();
            let lifted = classify_series_matrix(&mat).map_err(|e| format!("{mat}: {e}"))?;
            let base_verdict =
                classify_rad_clean(&evaluate_at_zero(&mat).unwrap()).map_err(|e| e.to_string())?;
            ensure!(
                lifted.case == base_verdict.case
                    && lifted.strongly_rad_clean == base_verdict.strongly_rad_clean,
                "{mat}: series {:?} vs base {:?}",
                lifted.case,
                base_verdict.case
            );
            if let Some(roots) = &lifted.roots {
                split += 1;
                let chi = mat.char_data().chi;
                ensure!(
                    chi.eval(&roots.alpha).unwrap().is_zero(),
                    "{mat}: residual at alpha"
                );
                ensure!(
                    chi.eval(&roots.beta).unwrap().is_zero(),
                    "{mat}: residual at beta"
                );
            }
            if let Some(w) = lifted.witness {
                verify_witness(&mat, w.e, w.u).map_err(|e| e.to_string())?;
            }
        }
    }
    Ok(format!(
        "200 matrices agree with A(0); {split} lifted splits with zero residual"
    ))
}

fn series_trace_property() -> Outcome {
    let ring = Ring::parse("Series(Zmod:4;6)").unwrap();
    match classify::trace_property_check(&ring, 100).map_err(|e| e.to_string())? {
        TraceProperty::Holds { pairs_checked, .. } => {
            Ok(format!("holds, {pairs_checked} pairs checked"))
        }
        other => Err(format!("{other:?}")),
    }
}

fn determinism() -> Outcome {
    let invocations: [&[&str]; 5] = [
        &[
            "classify",
            "--ring",
            "Zmod:9",
            "--matrix",
            "0,-3;1,1",
            "--witness",
        ],
        &[
            "trace-property",
            "--ring",
            "Series(Zmod:4;6)",
            "--samples",
            "20",
        ],
        &["trace-property", "--ring", "Zloc:3"],
        &["oracle", "--ring", "Zmod:4"],
        &[
            "lift",
            "--ring",
            "Series(Zmod:4;3)",
            "--mu",
            "1",
            "--lambda",
            "[0,2]",
            "--b0",
            "0",
        ],
    ];
    for args in invocations {
        let mut full = vec!["--format", "json"];
        full.extend_from_slice(args);
        let first = cli(&full)?;
        let second = cli(&full)?;
        ensure!(first == second, "{args:?} differs between runs");
        let v: serde_json::Value = serde_json::from_str(&first).map_err(|e| e.to_string())?;
        ensure!(
            v.to_string() + "\n" == first,
            "{args:?} is not canonical JSON"
        );
    }
    Ok(format!("{} invocations byte-identical", invocations.len()))
}

fn run(id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into()))
    });
    let elapsed = start.elapsed();
    let (ok, detail) = match result {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d}; took {elapsed:.2?}, limit {limit:?}")),
        Err(e) => (false, e),
    };
    println!(
        "{} criterion {id}: {name} [{elapsed:.2?}] {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut ok = true;
    ok &= run(
        1,
        "nilpotent-trace matrix over Z/4",
        secs(1),
        nilpotent_example,
    );
    ok &= run(
        2,
        "invertible and localized examples",
        secs(1),
        invertible_and_localized_examples,
    );
    ok &= run(3, "trace property over Z/4", secs(5), z4_trace_property);
    ok &= run(4, "p-adic unit-trace samples", secs(5), padic_samples);

    let start = Instant::now();
    let sweeps =
        panic::catch_unwind(oracle_sweeps).unwrap_or_else(|_| Err("oracle sweep panicked".into()));
    let sweep_time = start.elapsed();
    let limit = secs(300);
    ok &= run(
        5,
        "oracle equivalence on Z/4, Z/8, Z/9",
        limit.saturating_sub(sweep_time),
        || oracle_equivalence(&sweeps.clone()?).map(|d| format!("{d}; sweeps {sweep_time:.2?}")),
    );
    ok &= run(
        6,
        "witness soundness",
        limit.saturating_sub(sweep_time),
        || witness_soundness(&sweeps.clone()?),
    );

    ok &= run(7, "series lifting", secs(30), series_lifting);
    ok &= run(
        8,
        "trace property over Series(Zmod:4;6)",
        secs(10),
        series_trace_property,
    );
    ok &= run(9, "deterministic JSON reports", secs(60), determinism);

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
