use std::process::{Command, Output};
use std::sync::OnceLock;

use proptest::prelude::*;
use smolyak::corpus::CorpusFunction;
use smolyak::io::{expansion_from_table, expansion_table, parse_rational, rational_string, Format, Table};
use smolyak_core::cubature::{Method, RecoveryConfig};
use smolyak_core::math::ratio;
use smolyak_core::GridVariant;

fn smolyak(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smolyak")).args(args).output().expect("binary runs")
}

fn table(out: &Output) -> Table {
    Table::read_csv(out.stdout.as_slice()).expect("csv output")
}

fn column(t: &Table, name: &str) -> Vec<f64> {
    let c = t.column(name).unwrap();
    t.rows
        .iter()
        .map(|r| match &r[c] {
            serde_json::Value::Number(n) => n.as_f64().unwrap(),
            serde_json::Value::String(s) => s.parse().unwrap(),
            v => panic!("unexpected cell {v}"),
        })
        .collect()
}

#[test]
fn grid_example_has_six_generating_pairs() {
    let out = smolyak(&["grid", "--d", "2", "--m", "3", "--variant", "interior"]);
    assert_eq!(out.status.code(), Some(0));
    let t = table(&out);
    assert_eq!(t.rows.len(), 6);
    let x1 = column(&t, "x1");
    let x2 = column(&t, "x2");
    let mut pts: Vec<(u64, u64)> = x1.iter().zip(&x2).map(|(a, b)| (a.to_bits(), b.to_bits())).collect();
    pts.sort();
    pts.dedup();
    assert_eq!(pts.len(), 5);
}

#[test]
fn exit_codes() {
    assert_eq!(smolyak(&["nonsense"]).status.code(), Some(2));
    assert_eq!(smolyak(&["recover", "--scheme", "septic"]).status.code(), Some(2));
    assert_eq!(smolyak(&["recover", "--corpus", "nosuch"]).status.code(), Some(2));
    assert_eq!(smolyak(&["grid", "--d", "0"]).status.code(), Some(2));
    assert_eq!(smolyak(&["bounds", "--m", "5", "--m-max", "3"]).status.code(), Some(2));
    assert_eq!(smolyak(&["recover", "--scheme", "file:/nonexistent/scheme.json"]).status.code(), Some(1));
    assert_eq!(smolyak(&["grid", "--out", "/nonexistent/dir/grid.csv"]).status.code(), Some(1));
    assert_eq!(smolyak(&["--help"]).status.code(), Some(0));
}

#[test]
fn runs_are_reproducible() {
    let args = ["convergence", "--d", "4", "--nu", "4", "--corpus", "prodsine", "--m", "4", "--m-max", "5", "--seed", "7"];
    let a = smolyak(&args);
    let b = smolyak(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let w = ["witness", "--d", "1", "--m", "4", "--trials", "500", "--seed", "3", "--format", "json"];
    assert_eq!(smolyak(&w).stdout, smolyak(&w).stdout);
}

#[test]
fn bounds_table_is_ordered() {
    let out = smolyak(&["bounds", "--d", "3", "--nu", "2", "--alpha", "1.5", "--p", "2", "--m", "1", "--m-max", "8"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let t = table(&out);
    assert!(!t.rows.is_empty());
    let values = column(&t, "value");
    assert!(values.iter().all(|v| v.is_finite() && *v >= 0.0));
}

#[test]
fn convergence_stays_below_bound() {
    let out = smolyak(&["convergence", "--corpus", "zbump", "--variant", "interior", "--m", "2", "--m-max", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let t = table(&out);
    let err = column(&t, "empirical_error_p");
    let up = column(&t, "upper_bound_refined");
    assert_eq!(err.len(), 6);
    assert!(err.iter().zip(&up).all(|(e, u)| e <= u));
    assert!(err.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn integrate_and_recover_modes_succeed() {
    let out = smolyak(&["integrate", "--d", "2", "--m", "4", "--variant", "nu", "--nu", "1", "--corpus", "hat", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let w = column(&table(&out), "weight");
    assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let out = smolyak(&["recover", "--scheme", "cubic", "--m", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let t = table(&out);
    let e = expansion_from_table(&t).unwrap();
    assert!(e.coefficient_count() > 0);
}

#[test]
fn few_active_matches_its_low_dimensional_form() {
    let lo = CorpusFunction::build("fewactive", 2, 2, 2.0, 2).unwrap();
    let hi = CorpusFunction::build("fewactive", 6, 2, 2.0, 2).unwrap();
    assert_eq!(hi.active.len(), 2);
    let lift = |x: &[f64]| {
        let mut y = vec![0.37; 6];
        for (j, &a) in hi.active.iter().enumerate() {
            y[a] = x[j];
        }
        y
    };
    for i in 0..50 {
        let x = [(i as f64 * 0.618).fract(), (i as f64 * 0.414).fract()];
        assert!((lo.eval(&x) - hi.eval(&lift(&x))).abs() < 1e-12);
    }
    // Sparse-grid recovery in d = 6 restricted to the active plane reproduces the d = 2 recovery.
    let m = 5;
    let r2 = RecoveryConfig::new(2, m, GridVariant::Full, Method::Faber).unwrap().recover(|x: &[f64]| lo.eval(x)).unwrap();
    let r6 = RecoveryConfig::new(6, m, GridVariant::SupportBounded(2), Method::Faber)
        .unwrap()
        .recover(|x: &[f64]| hi.eval(x))
        .unwrap();
    for i in 0..200 {
        let x = [(i as f64 * 0.7548776662).fract(), (i as f64 * 0.5698402910).fract()];
        let a = r2.expansion.evaluate(&x);
        let b = r6.expansion.evaluate(&lift(&x));
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
}

#[test]
fn constants_are_recovered_exactly() {
    for scheme in ["faber", "linear", "cubic", "quintic"] {
        let out = smolyak(&["convergence", "--corpus", "constant", "--d", "3", "--scheme", scheme, "--m", "3", "--m-max", "4"]);
        assert_eq!(out.status.code(), Some(0), "{scheme}: {}", String::from_utf8_lossy(&out.stderr));
        let err = column(&table(&out), "empirical_error_p");
        assert!(err.iter().all(|e| *e < 1e-13), "{scheme}: {err:?}");
    }
}

#[test]
fn expansion_csv_round_trip() {
    let f = CorpusFunction::build("prodsine", 2, 2, 2.0, 2).unwrap();
    let rec = RecoveryConfig::new(2, 4, GridVariant::Full, Method::Faber).unwrap().recover(|x: &[f64]| f.eval(x)).unwrap();
    let text = expansion_table(&rec.expansion).to_string(Format::Csv).unwrap();
    let back = expansion_from_table(&Table::read_csv(text.as_bytes()).unwrap()).unwrap();
    for x in [[0.1, 0.2], [0.5, 0.9], [0.33, 0.71]] {
        assert_eq!(back.evaluate(&x), rec.expansion.evaluate(&x));
    }
}

fn members() -> &'static [CorpusFunction] {
    static M: OnceLock<Vec<CorpusFunction>> = OnceLock::new();
    M.get_or_init(|| smolyak::corpus::NAMES.iter().map(|n| CorpusFunction::build(n, 3, 2, 1.0, 2).unwrap()).collect())
}

proptest! {
    #[test]
    fn rational_strings_round_trip(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
        let q = ratio(n, d);
        prop_assert_eq!(parse_rational(&rational_string(&q)).unwrap(), q);
    }

    #[test]
    fn corpus_members_are_periodic(x in prop::collection::vec(0.0f64..1.0, 3), j in 0usize..3, which in 0usize..6) {
        let f = &members()[which];
        let mut y = x.clone();
        y[j] += 1.0;
        prop_assert!((f.eval(&x) - f.eval(&y)).abs() < 1e-12);
        prop_assert!(f.eval(&x).abs() <= 1.0 + 1e-12);
    }
}
