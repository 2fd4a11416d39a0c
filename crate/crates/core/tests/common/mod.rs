//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use ffprime::constraints::ConstraintSet;
use ffprime::ffield::{FieldCtx, FieldElement};
use ffprime::polyring::{monic_at, Poly, PolyRing};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Coefficient vectors (constant first, monic) of every monic polynomial
/// of degree `n`, in odometer order.
pub fn monics(ctx: &FieldCtx, n: usize) -> Vec<Vec<FieldElement>> {
    let q = ctx.q();
    let mut out = Vec::new();
    let mut cur = vec![FieldElement(0); n];
    loop {
        let mut v = cur.clone();
        v.push(ctx.one());
        out.push(v);
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            cur[i].0 += 1;
            if cur[i].0 < q {
                break;
            }
            cur[i].0 = 0;
            i += 1;
        }
    }
}

fn poly_mul(ctx: &FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let mut out = vec![ctx.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ctx.add(out[i + j], ctx.mul(x, y));
        }
    }
    out
}

/// Monic irreducibles of degree `n`, found by sieving out every product
/// of two monic polynomials of positive degree.
pub fn sieve_primes(ctx: &FieldCtx, n: usize) -> HashSet<Vec<FieldElement>> {
    let mut reducible = HashSet::new();
    for d in 1..=n / 2 {
        let small = monics(ctx, d);
        let large = monics(ctx, n - d);
        for a in &small {
            for b in &large {
                reducible.insert(poly_mul(ctx, a, b));
            }
        }
    }
    monics(ctx, n).into_iter().filter(|f| !reducible.contains(f)).collect()
}

/// `#(𝒞 ∩ primes)` by direct membership tests.
pub fn oracle_count(c: &ConstraintSet, primes: &HashSet<Vec<FieldElement>>) -> u128 {
    primes.iter().filter(|p| member(c, p)).count() as u128
}

pub fn member(c: &ConstraintSet, coeffs: &[FieldElement]) -> bool {
    (0..c.n()).all(|i| match c.fixed().get(&i) {
        Some(&a) => coeffs[i] == a,
        None => !c.forbidden().get(&i).is_some_and(|s| s.contains(&coeffs[i])),
    })
}

/// The first `len` digits of `{G/H}` by long division, for monic `H`.
pub fn expand(ctx: &FieldCtx, g: &[FieldElement], h: &[FieldElement], len: usize) -> Vec<FieldElement> {
    let d = h.len() - 1;
    let mut r = vec![ctx.zero(); d + 1];
    for (i, &x) in g.iter().enumerate() {
        if i < d {
            r[i] = x;
        }
    }
    let mut digits = Vec::with_capacity(len);
    for _ in 0..len {
        r.rotate_right(1);
        let top = r[d];
        digits.push(top);
        for i in 0..=d {
            r[i] = ctx.sub(r[i], ctx.mul(top, h[i]));
        }
    }
    digits
}

/// Reduced fractions of denominator degree `h`, enumerated without the
/// library's fraction enumerator.
pub fn fractions(ctx: &FieldCtx, h: usize) -> Vec<(Poly, Poly)> {
    let ring = PolyRing::new(ctx);
    let size = (ctx.q() as u128).pow(h as u32);
    let squares: Vec<Poly> = (1..=h / 2)
        .flat_map(|d| (0..(ctx.q() as u128).pow(d as u32)).map(move |i| (d, i)))
        .map(|(d, i)| {
            let s = monic_at(ctx, d, i);
            ring.mul(&s, &s)
        })
        .collect();
    let mut out = Vec::new();
    for hi in 0..size {
        let den = monic_at(ctx, h, hi);
        if den.is_one() || den.is_t() {
            continue;
        }
        if squares.iter().any(|s| ring.rem(&den, s).unwrap().is_zero()) {
            continue;
        }
        for gi in 1..size {
            let g = Poly::new(monic_at(ctx, h, gi).coeffs()[..h].to_vec());
            if ring.gcd(&g, &den).unwrap().is_one() {
                out.push((g, den.clone()));
            }
        }
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` seeded random constraint sets of degree `n`.
pub fn random_sets(ctx: &FieldCtx, n: usize, count: usize, seed: u64) -> Vec<ConstraintSet> {
    let mut r = rng(seed ^ ((ctx.q() as u64) << 20) ^ n as u64);
    let max_forbidden = (ctx.q() as usize / 2).max(1);
    (0..count)
        .map(|_| ConstraintSet::random(ctx, n, max_forbidden, &mut r).unwrap())
        .collect()
}

/// `α(m)` by trying every `m`-subset of the free indices.
pub fn alpha_brute(c: &ConstraintSet, m: usize) -> u128 {
    let free: Vec<u128> = c.free_indices().map(|j| c.n_forbidden(j) as u128 + 1).collect();
    let mut best = 0;
    for mask in 0u32..(1 << free.len()) {
        if mask.count_ones() as usize == m {
            let p = (0..free.len()).filter(|&i| mask >> i & 1 == 1).map(|i| free[i]).product();
            best = best.max(p);
        }
    }
    best
}

pub fn avoiding_all(ctx: &FieldCtx, n: usize, a: FieldElement) -> ConstraintSet {
    let forbidden = (0..n).map(|j| (j, [a].into_iter().collect())).collect();
    ConstraintSet::new(ctx, n, BTreeMap::new(), forbidden).unwrap()
}
