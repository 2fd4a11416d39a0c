//! Dirichlet approximation of a Laurent tail by G/H with deg H ≤ n/2.

use ffprime::ffield::FieldCtx;
use ffprime::laurent::{dirichlet_approx, frac_of_rational, zero_run_check};
use ffprime::polyring::PolyRing;

fn main() -> ffprime::error::Result<()> {
    let ctx = FieldCtx::prime(2)?;
    let ring = PolyRing::new(&ctx);
    let n = 8;

    let g = ring.parse("T+1")?;
    let h = ring.parse("T^3+T+1")?;
    let theta = frac_of_rational(&ring, &g, &h, n + 1)?;
    let digits: Vec<String> = theta.coeffs().iter().map(|c| c.to_string()).collect();
    println!("{{(T+1)/(T^3+T+1)}} = 0.{} ...", digits.join(""));

    let a = dirichlet_approx(&ring, &theta, n)?;
    println!("n = {n}: G = {}, H = {}, errorDeg = {}", ring.display(&a.g), ring.display(&a.h), a.error_deg);

    // Perturb a digit past n/2 and the approximation must move to a lower-quality pair.
    let mut coeffs = theta.coeffs().to_vec();
    coeffs[6] = ctx.add(coeffs[6], ctx.one());
    let bumped = ffprime::laurent::LaurentTail::from_coeffs(coeffs);
    let b = dirichlet_approx(&ring, &bumped, n)?;
    println!("perturbed: G = {}, H = {}, errorDeg = {}", ring.display(&b.g), ring.display(&b.h), b.error_deg);

    let ok = zero_run_check(&ring, &g, &h, 3, None)?;
    println!("no run of 3 zeros in the expansion: {ok}");
    Ok(())
}
