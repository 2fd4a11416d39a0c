//! Splitting count − X over the frequency classes and bounding it.

use ffprime::budget::Limits;
use ffprime::constraints::ConstraintSet;
use ffprime::counting::{error_decomposition, format_rational};
use ffprime::ffield::FieldCtx;

fn main() -> ffprime::error::Result<()> {
    let ctx = FieldCtx::prime(3)?;
    let c = ConstraintSet::avoiding(&ctx, 6, ctx.zero())?;
    let report = error_decomposition(&c, &ctx, 0.25, 0.1, &Limits::spectrum())?;
    let chain = &report.chain;

    println!("q = 3, n = 6, every coefficient nonzero");
    println!("count           {}", chain.exact);
    println!("sigma*pi        {}", format_rational(&report.main_exact));
    println!("X (from S1)     {}", format_rational(&chain.main.x));
    println!("|count - X|     {}", format_rational(&chain.y_measured));
    println!("first term      {:.3}", chain.first_term);
    for y in &chain.yh {
        println!("Y_{}             {:.3} (bounds {:.1}, {:.1})", y.h, y.y_h, y.init.rhs, y.bigi.rhs);
    }
    println!("sum q^-h Y_h    {:.3}", chain.yh_sum);
    println!("chain holds     {} (margin {:.3})", chain.chain.holds(), chain.chain.margin());
    println!("flags           {}", report.budget.flags.join(" "));
    Ok(())
}
