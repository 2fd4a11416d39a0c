//! Irreducibility testing and the prime count π_q(n).

use ffprime::budget::Limits;
use ffprime::ffield::FieldCtx;
use ffprime::polyring::{prime_count, MonicUniverse, PolyRing};

fn main() -> ffprime::error::Result<()> {
    let ctx = FieldCtx::prime(3)?;
    let ring = PolyRing::new(&ctx);

    let f = ring.parse("T^4+T+2")?;
    let g = ring.parse("T^4+1")?;
    for p in [&f, &g] {
        println!("{} irreducible: {}", ring.display(p), ring.is_irreducible(p)?);
    }
    let (quo, rem) = ring.div_rem(&f, &ring.parse("T^2+1")?)?;
    println!("T^4+T+2 = (T^2+1)({}) + {}", ring.display(&quo), ring.display(&rem));

    let limits = Limits::enumeration();
    for n in 1..=6 {
        let universe = MonicUniverse::new(&ctx, n, &limits)?;
        let mut found = 0u128;
        for p in universe.iter() {
            if ring.is_irreducible(&p)? {
                found += 1;
            }
        }
        println!("n = {n}: enumerated {found}, necklace formula {}", prime_count(&ctx, n as i64)?);
    }
    Ok(())
}
