//! Arithmetic in F_9 and the additive character ψ(x) = ζ_3^{Tr x}.
//!
//! Run with `cargo run --example field_characters`.

use ffprime::cyclo::CycInt;
use ffprime::ffield::FieldCtx;

fn main() -> ffprime::error::Result<()> {
    let f9 = FieldCtx::from_order(9)?;
    println!("F_{} = F_{}[x]/({:?})", f9.q(), f9.p(), f9.modulus());

    for x in f9.elements() {
        let inv = f9.inv(x).map_or("-".to_string(), |y| f9.element_to_text(y));
        println!(
            "  {:>6}  coords {:?}  inverse {:>6}  trace {}  psi {}",
            f9.element_to_text(x),
            f9.coords(x),
            inv,
            f9.trace(x)?,
            f9.psi(x)?
        );
    }

    // Orthogonality: summing a nontrivial character over the field gives 0.
    let mut total = CycInt::zero(f9.p());
    for x in f9.elements() {
        total += &f9.psi(x)?;
    }
    println!("sum of psi over F_9 = {total}");
    Ok(())
}
