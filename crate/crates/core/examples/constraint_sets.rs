//! Building coefficient constraints and reading off 𝔖, #𝒞 and window data.

use std::collections::BTreeMap;

use ffprime::constraints::ConstraintSet;
use ffprime::counting::format_rational;
use ffprime::ffield::{FieldCtx, FieldElement};

fn main() -> ffprime::error::Result<()> {
    let ctx = FieldCtx::prime(5)?;

    let maynard = ConstraintSet::avoiding(&ctx, 3, ctx.zero())?;
    println!("avoid 0, n = 3: sigma = {}", format_rational(&maynard.singular_series()));

    let text = r#"{"n": 6, "fixed": {"5": 2, "2": 0}, "forbidden": {"0": [1, 4], "3": [3]}}"#;
    let c = ConstraintSet::from_json(&ctx, text)?;
    println!("parsed {} (hash {})", c.to_json(&ctx), c.hash(&ctx));
    println!("  #C = {}, I = {}", c.cardinality(), c.num_fixed());
    println!("  sigma = {}", format_rational(&c.singular_series()));
    println!("  R = {}", format_rational(&c.heuristic_correction()));
    for m in 1..=c.n() - c.num_fixed() {
        println!("  alpha({m}) = {}", c.alpha(m)?);
    }
    for m in 1..=c.n() {
        let (w, hits) = c.best_window(m)?;
        println!("  best window of length {m}: start {} meets {hits} fixed indices", w.x);
    }

    let mut fixed = BTreeMap::new();
    fixed.insert(0, FieldElement(1));
    fixed.insert(1, FieldElement(0));
    let p = ConstraintSet::prescribed(&ctx, 4, fixed)?;
    println!("prescribed {}: sigma = {}", p.to_json(&ctx), format_rational(&p.singular_series()));

    match ConstraintSet::from_json(&ctx, r#"{"n": 3, "fixed": {"0": 0}}"#) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
