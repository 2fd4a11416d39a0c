//! The CSV files read by the plotting scripts.

use ffprime::budget::Limits;
use ffprime::constraints::ConstraintSet;
use ffprime::counting::{sweep, write_sweep_csv, Template, SWEEP_HEADER};
use ffprime::ffield::FieldCtx;
use ffprime::polyring::PolyRing;
use ffprime::spectral::{PrimeTable, Spectrum};

#[test]
fn spectrum_dump_schema() {
    let ctx = FieldCtx::prime(3).unwrap();
    let limits = Limits::spectrum();
    let c = ConstraintSet::from_json(&ctx, r#"{"n": 4, "forbidden": {"1": [1], "3": [0]}}"#).unwrap();
    let primes = PrimeTable::new(&ctx, 4, &limits).unwrap();
    let s = Spectrum::compute(&c, &ctx, &primes, &limits).unwrap();
    let mut buf = Vec::new();
    s.write_csv(&PolyRing::new(&ctx), &mut buf).unwrap();

    let mut rdr = csv::Reader::from_reader(buf.as_slice());
    assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), ["F", "class", "degH", "|fhat|", "|f|"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 81);
    assert_eq!(rows.iter().filter(|r| &r[1] == "S1").count(), 3);
    for r in &rows {
        assert!(["S1", "S2", "S3"].contains(&&r[1]));
        let deg_h: usize = r[2].parse().unwrap();
        assert!(deg_h <= 2);
        let fhat: f64 = r[3].parse().unwrap();
        assert!((0.0..=2.0 * 2.0 * 81.0).contains(&fhat));
        r[4].parse::<f64>().unwrap();
    }
}

#[test]
fn sweep_schema_and_budget_columns() {
    let rows = sweep(&Template::parse("avoid:0", 0).unwrap(), &[2, 3], 2..=5, 0.25, 0.1, &Limits::spectrum());
    let mut buf = Vec::new();
    write_sweep_csv(&rows, &mut buf).unwrap();
    let mut rdr = csv::Reader::from_reader(buf.as_slice());
    assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), SWEEP_HEADER);
    let records: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 8);
    let col = |name: &str| SWEEP_HEADER.iter().position(|h| *h == name).unwrap();
    for r in &records {
        let exact: f64 = r[col("exact")].parse().unwrap();
        assert_eq!(r[col("exact")], r[col("parseval")]);
        let x: f64 = r[col("main_x_re")].parse().unwrap();
        let first: f64 = r[col("first_term")].parse().unwrap();
        let yh: f64 = r[col("yh_sum")].parse().unwrap();
        assert!((exact - x).abs() <= first + yh, "{r:?}");
        let sigma = r[col("sigma_num")].parse::<f64>().unwrap() / r[col("sigma_den")].parse::<f64>().unwrap();
        let pi: f64 = r[col("pi_qn")].parse().unwrap();
        let deviation: f64 = r[col("deviation")].parse().unwrap();
        assert!((deviation - (exact - sigma * pi).abs()).abs() < 1e-6);
        assert!(r[col("flags")].contains("asymptotic-ignored"));
    }
}
