//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any failed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use isol_core::misa::misa_framework;
use isol_core::{
    bind_assessment, evaluate, export_schema, export_scores, gap_report, parse_schema, parse_scores, render_result,
    sensitivity, validate_schema, Format, Layer, RenderOptions, ScoresFormat,
};
use isol_testkit::{arb_scored_schema, props, SCALE};
use proptest::prelude::*;
use proptest::sample::Index;
use proptest::test_runner::{RngAlgorithm, TestRng, TestRunner};

const REFERENCE_CSV: &str = "node_id,score\n5,54.5\n8,50\n1,51.1\n7,55.8\n6,85\n2,72\n3,47.5\n4,59";

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn near(label: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || format!("{label}: got {got}, want {want} (tol {tol:e})"))
}

/// Runs `test` on `cases` inputs from a fixed-seed generator.
fn run_cases<S>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S: Strategy,
    S::Value: std::fmt::Debug,
{
    let config = ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| {
        let text = e.to_string();
        text.lines().next().unwrap_or_default().chars().take(400).collect()
    })
}

fn reference_result() -> (isol_core::FrameworkSchema, isol_core::EvaluationResult) {
    let schema = misa_framework();
    let raw = parse_scores(REFERENCE_CSV, ScoresFormat::Csv).expect("reference scores parses");
    let assessment = bind_assessment(&schema, &raw).expect("reference scores binds");
    let result = evaluate(&schema, &assessment);
    (schema, result)
}

fn ac1_reference_assessment() -> Check {
    let started = Instant::now();
    let (schema, result) = reference_result();
    let text = render_result(&result, &schema, &RenderOptions::new(Format::Table, 1).unwrap());
    let elapsed = started.elapsed();

    let expected = [
        (Layer::Organization, 54.5),
        (Layer::Stakeholder, 50.0),
        (Layer::ToolTechnology, 53.45),
        (Layer::Policy, 78.5),
        (Layer::Culture, 47.5),
        (Layer::Knowledge, 59.0),
    ];
    for (layer, want) in expected {
        near(layer.name(), result.layer(layer).unwrap().value, want, 1e-9)?;
    }
    // (54.5 + 50 + 53.45 + 78.5 + 47.5 + 59) / 6
    near("overall", result.overall(), 342.95 / 6.0, 1e-9)?;
    let last = text.lines().last().unwrap_or_default();
    ensure(last.starts_with("Overall Score") && last.ends_with(" 57.2"), || {
        format!("overall row renders as `{last}`")
    })?;
    ensure(elapsed.as_secs_f64() < 1.0, || format!("took {elapsed:?}"))?;
    Ok(format!("overall {} renders 57.2 in {elapsed:?}", result.overall()))
}

fn ac2_extremes() -> Check {
    let (_, result) = reference_result();
    let values: Vec<(Layer, f64)> = result.layers().map(|l| (l.layer, l.value)).collect();
    let max = values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    let argmax: Vec<_> = values.iter().filter(|v| v.1 == max).map(|v| v.0).collect();
    let argmin: Vec<_> = values.iter().filter(|v| v.1 == min).map(|v| v.0).collect();
    ensure(argmax == [Layer::Policy], || format!("argmax {argmax:?}"))?;
    ensure(argmin == [Layer::Culture], || format!("argmin {argmin:?}"))?;
    near("policy", max, 78.5, 1e-9)?;
    near("culture", min, 47.5, 1e-9)?;
    let gaps = gap_report(&result);
    ensure(gaps.ranking()[0] == Layer::Culture, || format!("ranking {:?}", gaps.ranking()))?;
    Ok("policy unique max 78.5, culture unique min 47.5 and ranked first".into())
}

fn ac3_oracle_equivalence() -> Check {
    run_cases(1000, arb_scored_schema(), |(doc, scores)| props::oracle_agreement(&doc, &scores, 1e-12))?;
    Ok("1000 random schemas agree with the naive evaluator within 1e-12".into())
}

fn ac4_sensitivity() -> Check {
    run_cases(200, arb_scored_schema(), |(doc, scores)| props::sensitivity_agreement(&doc, &scores, 1, 1e-6, 1e-9))?;
    let schema = misa_framework();
    for control in ["5", "8", "3", "4"] {
        let s = sensitivity(&schema, control).map_err(|e| e.to_string())?;
        ensure(s == 1.0 / 6.0, || format!("control {control}: {s}"))?;
    }
    for control in ["1", "7", "6", "2"] {
        let s = sensitivity(&schema, control).map_err(|e| e.to_string())?;
        ensure(s == 1.0 / 12.0, || format!("control {control}: {s}"))?;
    }
    Ok("200 schemas match finite differences (rel 1e-6) and sum to 1; MISA 1/6 and 1/12 exact".into())
}

fn ac5_property_suite() -> Check {
    const CASES: u32 = 500;
    let mut done = Vec::new();

    run_cases(CASES, arb_scored_schema(), |(doc, scores)| props::bounded(&doc, &scores))
        .map_err(|e| format!("boundedness: {e}"))?;
    done.push("boundedness");

    run_cases(CASES, (arb_scored_schema(), 0.0..=SCALE), |((doc, scores), c)| {
        props::uniform_fixed_point(&doc, &scores, c)
    })
    .map_err(|e| format!("idempotence: {e}"))?;
    done.push("idempotence");

    run_cases(CASES, (arb_scored_schema(), prop::collection::vec(any::<u64>(), 1..64)), |((doc, scores), keys)| {
        props::permutation_invariant(&doc, &scores, &keys)
    })
    .map_err(|e| format!("permutation invariance: {e}"))?;
    done.push("permutation");

    run_cases(CASES, (arb_scored_schema(), any::<Index>(), 0.01..=1.0f64), |((doc, scores), pick, delta)| {
        props::monotone_increment(&doc, &scores, pick, delta)
    })
    .map_err(|e| format!("monotonicity: {e}"))?;
    done.push("monotonicity");

    run_cases(CASES, (arb_scored_schema(), 0.1..=1.0f64, 0.0..=1.0f64), |((doc, scores), a, b)| {
        props::affine_equivariant(&doc, &scores, a, b)
    })
    .map_err(|e| format!("affine equivariance: {e}"))?;
    done.push("affine");

    Ok(format!("{CASES} cases each: {}", done.join(", ")))
}

fn ac6_io_fidelity() -> Check {
    let schema = misa_framework();
    let exported = export_schema(&schema);
    let again = validate_schema(&parse_schema(&exported).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(again == schema, || "builtin:misa does not round-trip".into())?;
    ensure(export_schema(&again) == exported, || "export is not a fixpoint".into())?;

    let csv_doc = parse_scores(REFERENCE_CSV, ScoresFormat::Csv).map_err(|e| e.to_string())?;
    let json_doc =
        parse_scores(&export_scores(&csv_doc, ScoresFormat::Json), ScoresFormat::Json).map_err(|e| e.to_string())?;
    let back =
        parse_scores(&export_scores(&json_doc, ScoresFormat::Csv), ScoresFormat::Csv).map_err(|e| e.to_string())?;
    ensure(json_doc.pairs() == csv_doc.pairs() && back.pairs() == csv_doc.pairs(), || {
        "reference scores changed across CSV/JSON".into()
    })?;

    let fixture = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/reference.csv");
    let assess = || {
        Command::new(env!("CARGO_BIN_EXE_isol"))
            .args(["assess", "--schema", "builtin:misa", "--scores"])
            .arg(&fixture)
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (assess()?, assess()?);
    ensure(a.status.success() && b.status.success(), || "assess failed".into())?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || "assess output differs between runs".into())?;
    Ok(format!("schema and scores round-trip; assess output stable ({} bytes)", a.stdout.len()))
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("AC1 reference assessment", ac1_reference_assessment),
        ("AC2 layer extremes", ac2_extremes),
        ("AC3 oracle equivalence", ac3_oracle_equivalence),
        ("AC4 sensitivity correctness", ac4_sensitivity),
        ("AC5 property suite", ac5_property_suite),
        ("AC6 I/O fidelity", ac6_io_fidelity),
    ];

    let mut failed = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_owned()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name} ({secs:.2}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name} ({secs:.2}s): {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
