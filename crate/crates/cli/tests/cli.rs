mod common;

use coha_core::commvar::Interpolation;
use coha_core::hallalg::{AssociativityReport, CommutatorEntry, HallElement, ModuleClassTable};
use coha_core::mcgroupoid::{FibrationReport, GroupoidCard, QuasiIsoReport};
use coha_core::series::{LaurentBiSeries, PowerStructureReport};
use common::{coha, schema, schema_errors, without_wall_time};
use serde_json::{json, Value};

fn parse<T: serde::de::DeserializeOwned>(v: &Value) -> T {
    serde_json::from_value(v.clone()).unwrap()
}

#[test]
fn count_one_by_one_over_f2() {
    let r = coha("commvar count --variety commuting --n 1 --p 2");
    assert_eq!(r.code, 0);
    let rec = r.record();
    assert_eq!(rec["outputs"]["count"], json!(4));
    assert_eq!(rec["command"], "commvar count");
    assert_eq!(rec["version"], env!("CARGO_PKG_VERSION"));
    assert!(rec["wall_time_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn methods_agree() {
    for m in ["brute", "kernel", "classes"] {
        let r = coha(&format!("commvar count --variety commuting --n 2 --p 2 --method {m}"));
        assert_eq!(r.outputs()["count"], json!(88), "{m}");
    }
    let r = coha("commvar count --variety nilcommuting --n 2 --p 2");
    assert_eq!(r.outputs()["count"], json!(10));
}

#[test]
fn repeated_runs_are_identical_apart_from_wall_time() {
    for args in [
        "hall table --nmax 2 --p 2",
        "series feitfine --N 3 --K 4 --eval-at 2",
        "mc card --catalog-entry nilpotent-action",
        "commvar count --variety commuting --n 2 --p 3",
    ] {
        let (a, b) = (coha(args), coha(args));
        assert_eq!(a.code, 0, "{args}");
        assert_eq!(without_wall_time(&a.stdout), without_wall_time(&b.stdout), "{args}");
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let a = coha("commvar count --variety commuting --n 2 --p 5 --threads 1");
    let b = coha("commvar count --variety commuting --n 2 --p 5");
    assert_eq!(a.outputs(), b.outputs());
    assert_eq!(a.record()["options"]["threads"], json!(1));
}

#[test]
fn emitted_tables_parse_back() {
    let t: ModuleClassTable = parse(&coha("hall table --nmax 2 --p 2").outputs());
    assert_eq!(t.classes_of_length(2).len(), 28);
    let _: PowerStructureReport = parse(&coha("series power-structure --q 2 --N 2").outputs());
    let _: AssociativityReport = parse(&coha("hall assoc --lmax 2").outputs());
    let _: Vec<CommutatorEntry> = parse(&coha("hall commutators --lmax 2").outputs()["entries"]);
    let _: HallElement = parse(&coha("hall product --lhs n1-0 --rhs n1-1").outputs()["product"]);
    let _: LaurentBiSeries = parse(&coha("series feitfine --N 2 --K 2").outputs()["series"]);
    let _: Interpolation = parse(&coha("commvar interpolate --variety nilcommuting --n 2 --degree 3").outputs()["interpolation"]);
    let _: GroupoidCard = parse(&coha("mc card --catalog-entry abelian-full").outputs()["card"]);
    let _: QuasiIsoReport = parse(&coha("mc compare --lhs abelian-zero-d --rhs abelian-zero-d-plus-acyclic").outputs()["report"]);
    let _: FibrationReport = parse(&coha("mc fibration --catalog-entry fiber-with-gauge").outputs()["report"]);
}

#[test]
fn affine_plane_pbw_matches_product_series() {
    let pbw: LaurentBiSeries = parse(&coha("series pbw --betti 0,0,0,0,1 --N 2 --K 3").outputs()["series"]);
    let ff: LaurentBiSeries = parse(&coha("series feitfine --N 2 --K 3").outputs()["series"]);
    assert!(pbw.agrees_with(&ff));
    assert_eq!(pbw.first_disagreement(&ff), None);
}

#[test]
fn associativity_at_two() {
    let r = coha("hall assoc --lmax 3 --p 2");
    assert_eq!(r.code, 0);
    assert_eq!(r.outputs()["violations"], json!([]));
}

#[test]
fn product_of_points() {
    let r = coha("hall product --lhs n1-0 --rhs n1-1 --p 2");
    let prod: HallElement = parse(&r.outputs()["product"]);
    assert_eq!(prod.coefficients().len(), 1);
}

#[test]
fn exit_codes_separate_failure_kinds() {
    let r = coha("commvar count --variety commuting --n 9 --p 2");
    assert_eq!(r.code, 2);
    assert_eq!(r.record()["error"]["kind"], "precondition");
    assert_eq!(r.record()["outputs"], Value::Null);

    let r = coha("hall table --nmax 4 --p 2");
    assert_eq!(r.code, 4);
    assert_eq!(r.record()["error"]["kind"], "infeasible");

    // too low a degree bound misses the held-out prime
    let r = coha("commvar interpolate --variety nilcommuting --n 2 --degree 2");
    assert_eq!(r.code, 3);
    assert_eq!(r.record()["status"], "check-failed");

    let r = coha("mc compare --lhs nilpotent-action --rhs zero");
    assert_eq!(r.code, 2);

    let r = coha("mc compare --lhs abelian-zero-d --rhs abelian-zero-d --map zero-map");
    assert_eq!(r.code, 2);
    let r = coha("mc compare --lhs abelian-zero-d --rhs abelian-zero-d");
    assert_eq!(r.code, 0);
    assert_eq!(r.outputs()["map"], "identity");
    let r = coha("mc compare --lhs zero --rhs abelian-d1-inj --map zero-map");
    assert_eq!(r.code, 2);

    let r = coha("mc card --catalog-entry no-such-entry");
    assert_eq!(r.code, 2);

    let r = coha("hall frobnicate");
    assert_eq!(r.code, 2);
    assert_eq!(r.record()["status"], "precondition");
}

#[test]
fn non_quasi_isomorphism_is_a_precondition_failure() {
    let r = coha("mc compare --lhs nilpotent-action --rhs nilpotent-action-with-d");
    assert_eq!(r.code, 2, "{}", r.stdout);
    assert!(r.record()["error"]["message"].as_str().unwrap().contains("precondition"));
}

#[test]
fn csv_only_for_flat_tables() {
    let r = coha("commvar count --variety commuting --n 2 --p 2 --format csv");
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, "variety,n,p,count\ncommuting,2,2,88\n");
    let rec: Value = serde_json::from_str(&r.stderr).unwrap();
    assert_eq!(rec["outputs"]["count"], json!(88));

    let r = coha("hall table --nmax 1 --p 2 --format csv");
    assert_eq!(r.code, 0);
    let mut lines = r.stdout.lines();
    assert_eq!(lines.next(), Some("m,n,l,count"));
    assert!(lines.any(|l| l == "n1-0,n1-0,n0-0,1"));

    let r = coha("hall assoc --lmax 2 --format csv");
    assert_eq!(r.code, 2);
}

#[test]
fn output_flag_writes_the_record() {
    let path = std::env::temp_dir().join(format!("coha-cli-test-{}.json", std::process::id()));
    let r = coha(&format!("series power-structure --q 2 --N 2 --output {}", path.display()));
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    let rec: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(rec["outputs"]["equal"], json!(true));
}

#[test]
fn every_record_matches_the_schema() {
    let schema = schema();
    for args in [
        "commvar count --variety commuting --n 2 --p 3",
        "commvar interpolate --variety nilcommuting --n 2 --degree 3",
        "commvar interpolate --variety nilcommuting --n 2 --degree 2",
        "series feitfine --N 2 --K 3 --eval-at 5",
        "series pbw --betti 1,0,1,0,1 --N 2 --K 2",
        "series power-structure --q 2 --N 2",
        "series power-structure --q 3 --N 2",
        "hall table --nmax 2 --p 3",
        "hall product --lhs n1-1 --rhs n2-3",
        "hall assoc --lmax 2",
        "hall commutators --lmax 2 --p 3",
        "mc card --catalog-entry quadratic-with-d",
        "mc compare --lhs abelian-d0-id --rhs zero",
        "mc compare --lhs nilpotent-action --rhs zero",
        "mc fibration --catalog-entry per-fiber-only",
        "hall table",
    ] {
        let rec = coha(args).record();
        let errs = schema_errors(&schema, &rec);
        assert!(errs.is_empty(), "{args}: {errs:?}");
    }
}

#[test]
fn schema_rejects_malformed_outputs() {
    let schema = schema();
    let mut rec = coha("commvar count --variety commuting --n 1 --p 2").record();
    rec["outputs"]["count"] = json!("four");
    assert!(!schema_errors(&schema, &rec).is_empty());
    let mut rec = coha("hall commutators --lmax 1").record();
    rec["outputs"]["entries"][0]["lhs"] = json!("x1");
    assert!(!schema_errors(&schema, &rec).is_empty());
}
