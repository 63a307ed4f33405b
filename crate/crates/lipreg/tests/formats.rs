use lipreg::formats::{
    read_cpwl_json, read_data_csv, read_json, to_json_string, write_data_csv, write_envelope_csv,
    write_json, AdmmReportJson, CpwlJson, FitResultJson, FormatError, ReluJson,
};
use lipreg::pipeline::fit_hybrid;
use lipreg_core::{
    cpwl_to_relu_network, AdmmConfig, CpwlFunction, DataSet, EnvelopeBand, ReluNetParams,
};
use proptest::prelude::*;
use serde_json::Value;

fn keys(v: &Value) -> Vec<&str> {
    let mut k: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    k.sort_unstable();
    k
}

fn sample() -> CpwlFunction {
    CpwlFunction::new(0.25, -1.0, vec![0.1, 0.7], vec![2.0, -0.5]).unwrap()
}

#[test]
fn cpwl_json_layout_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let f = sample();
    write_json(&path, &CpwlJson::from(&f)).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.ends_with('\n'));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(keys(&v), ["c0", "c1", "coeffs", "knots"]);
    assert_eq!(read_cpwl_json(&path).unwrap(), f);
}

#[test]
fn relu_json_uses_capital_k() {
    let p = cpwl_to_relu_network(&sample());
    let v: Value = serde_json::from_str(&to_json_string(&ReluJson::from(&p))).unwrap();
    assert_eq!(keys(&v), ["K", "b", "c0", "c1", "v", "w"]);
    assert_eq!(v["K"], 2);
    let back: ReluJson = serde_json::from_value(v).unwrap();
    assert_eq!(ReluNetParams::try_from(back).unwrap(), p);

    let bad = ReluJson {
        k: 3,
        ..ReluJson::from(&p)
    };
    assert!(ReluNetParams::try_from(bad).is_err());
}

#[test]
fn fit_result_json_layout() {
    let d = DataSet::new(vec![0.0, 0.3, 0.5, 1.0], vec![0.0, 0.1, 0.4, 0.2]).unwrap();
    let r = fit_hybrid(&d, 0.01, 2.0, &AdmmConfig::default()).unwrap();
    let v: Value = serde_json::from_str(&to_json_string(&FitResultJson::from(&r))).unwrap();
    assert_eq!(keys(&v), ["metrics", "model", "solver", "z"]);
    assert_eq!(
        keys(&v["metrics"]),
        [
            "lambda",
            "lbar",
            "lipschitz",
            "loss",
            "num_regions",
            "objective",
            "tv2"
        ]
    );
    assert_eq!(
        keys(&v["solver"]),
        [
            "converged",
            "dual_residual",
            "iterations",
            "objective",
            "primal_residual",
            "z"
        ]
    );
    let back: FitResultJson = serde_json::from_value(v).unwrap();
    assert_eq!(back, FitResultJson::from(&r));
    assert_eq!(back.solver, AdmmReportJson::from(&r.solver));
}

#[test]
fn lipschitz_metrics_omit_lbar() {
    let d = DataSet::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]).unwrap();
    let r = lipreg::pipeline::fit_lipschitz(&d, 0.1, &AdmmConfig::default()).unwrap();
    let v: Value = serde_json::from_str(&to_json_string(&FitResultJson::from(&r))).unwrap();
    assert!(v["metrics"].get("lbar").is_none());
}

#[test]
fn csv_header_is_checked() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    std::fs::write(&path, "a,b\n0,1\n").unwrap();
    assert!(matches!(
        read_data_csv(&path),
        Err(FormatError::Header { .. })
    ));
    std::fs::write(&path, "x,y\n0,1\n0,2\n").unwrap();
    assert!(matches!(
        read_data_csv(&path),
        Err(FormatError::Invalid { .. })
    ));
    std::fs::write(&path, "x,y\n0,nope\n").unwrap();
    assert!(matches!(read_data_csv(&path), Err(FormatError::Csv { .. })));
    assert!(matches!(
        read_data_csv(&dir.path().join("missing.csv")),
        Err(FormatError::Io { .. })
    ));
}

#[test]
fn csv_rows_are_sorted_on_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    std::fs::write(&path, "x,y\n1, 3\n0.5,2\n-1,1\n").unwrap();
    let d = read_data_csv(&path).unwrap();
    assert_eq!(d.xs(), [-1.0, 0.5, 1.0]);
    assert_eq!(d.ys(), [1.0, 2.0, 3.0]);
}

#[test]
fn envelope_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.csv");
    let bands = [EnvelopeBand {
        x: 0.5,
        lo: -0.25,
        hi: 1.0,
    }];
    write_envelope_csv(&path, &bands).unwrap();
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "x,lo,hi\n0.5,-0.25,1\n"
    );
}

#[test]
fn json_errors_carry_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"c0\": 1}").unwrap();
    let err = read_json::<CpwlJson>(&path).unwrap_err();
    assert!(err.to_string().contains("bad.json"), "{err}");
}

proptest! {
    #[test]
    fn csv_round_trip_is_bit_exact(
        pts in prop::collection::btree_map(any::<i64>(), any::<f64>().prop_filter("finite", |v| v.is_finite()), 1..40),
    ) {
        let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().map(|(k, y)| (k as f64 * 1e-3, y)).unzip();
        prop_assume!(xs.windows(2).all(|w| w[0] < w[1]));
        let d = DataSet::new(xs, ys).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        write_data_csv(&path, &d).unwrap();
        let back = read_data_csv(&path).unwrap();
        for (a, b) in d.xs().iter().zip(back.xs()).chain(d.ys().iter().zip(back.ys())) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
