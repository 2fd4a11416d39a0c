//! The Fourier spectrum of a constraint set and the Parseval count.
//!
//! Writes `spectrum.csv` in the working directory when given `--csv`.

use std::fs::File;

use ffprime::budget::Limits;
use ffprime::constraints::ConstraintSet;
use ffprime::counting::count_exact;
use ffprime::ffield::FieldCtx;
use ffprime::polyring::PolyRing;
use ffprime::spectral::{fhat_direct, fhat_product, parseval_count, Class, PrimeTable, Spectrum};

fn main() -> ffprime::error::Result<()> {
    let ctx = FieldCtx::prime(3)?;
    let ring = PolyRing::new(&ctx);
    let n = 4;
    let limits = Limits::spectrum();
    let c = ConstraintSet::from_json(&ctx, r#"{"n": 4, "fixed": {"3": 1}, "forbidden": {"1": [0]}}"#)?;

    let primes = PrimeTable::new(&ctx, n, &limits)?;
    let spectrum = Spectrum::compute(&c, &ctx, &primes, &limits)?;
    let [s1, s2, s3] = spectrum.partition_counts();
    println!("{} frequencies: S1 {s1}, S2 {s2}, S3 {s3}", spectrum.entries.len());

    for e in spectrum.entries.iter().filter(|e| e.class == Class::S1) {
        println!("  {:<8} fhat = {}  f = {}", ring.display(&e.f), e.fhat, e.fval);
    }
    let loudest = spectrum
        .entries
        .iter()
        .filter(|e| e.class != Class::S1)
        .max_by(|a, b| a.fhat.abs().total_cmp(&b.fhat.abs()))
        .expect("nonempty");
    println!("largest |fhat| off S1: {:.3} at {}", loudest.fhat.abs(), ring.display(&loudest.f));

    let theta = ffprime::spectral::frequency_of(&loudest.f, n);
    assert_eq!(fhat_product(&c, &ctx, &theta)?, fhat_direct(&c, &ctx, &theta, &limits)?);

    println!("enumeration {}", count_exact(&c, &ctx, &limits)?);
    println!("parseval    {}", parseval_count(&c, &ctx, &primes, &limits)?);

    if std::env::args().any(|a| a == "--csv") {
        spectrum.write_csv(&ring, File::create("spectrum.csv").expect("create spectrum.csv"))?;
        println!("wrote spectrum.csv");
    }
    Ok(())
}
