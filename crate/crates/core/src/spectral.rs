//! The Fourier transform `F̂_{q,n}` of a constraint indicator, the prime
//! exponential sum `f`, and the identities and bounds that connect them.
//!
//! Frequencies are tails `θ` read to `n + 1` places. For monic `G` of
//! degree `n`, `e(Gθ) = ψ(Σ_{i=0}^{n} g_i θ_{-i-1})`, which gives both the
//! enumeration form of `F̂` and its product form
//! `F̂(θ) = ψ(θ_{-n-1}) ∏_i Σ_{g∈C_i} ψ(g θ_{-i-1})`.

use std::fmt;
use std::io::Write;
use std::ops::Range;

use rayon::prelude::*;

use crate::budget::Limits;
use crate::constraints::{ConstraintSet, Window};
use crate::cyclo::CycInt;
use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FieldElement};
use crate::laurent::{dirichlet_approx, frac_of_rational, reduced_fractions, Approximant, LaurentTail};
use crate::polyring::{MonicUniverse, Poly, PolyRing};

/// Relative tolerance on floating-point magnitude inequalities.
pub const REL_SLACK: f64 = 1e-6;

/// A measured `lhs ≤ rhs`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
}

impl Inequality {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Inequality { lhs, rhs }
    }

    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * (1.0 + REL_SLACK) + REL_SLACK
    }

    /// `rhs − lhs`.
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// Runs `f` on each shard of the universe in parallel, results in shard
/// order.
pub(crate) fn map_shards<T, F>(u: &MonicUniverse, limits: &Limits, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(Range<u128>) -> Result<T> + Sync,
{
    let count = limits.shards.max(1);
    (0..count)
        .into_par_iter()
        .map(|s| f(u.shard_range(s, count)))
        .collect()
}

fn need_prec(theta: &LaurentTail, needed: usize) -> Result<()> {
    if theta.prec() < needed {
        return Err(Error::Precision {
            needed,
            available: theta.prec(),
        });
    }
    Ok(())
}

/// `Σ_i c_i θ_{-i-1}` over the given coefficients.
#[inline]
pub fn pairing(ctx: &FieldCtx, coeffs: &[FieldElement], theta: &LaurentTail) -> FieldElement {
    let t = theta.coeffs();
    coeffs
        .iter()
        .zip(t)
        .fold(FieldElement::ZERO, |acc, (&c, &th)| ctx.add(acc, ctx.mul(c, th)))
}

/// Exponent histogram of a character sum.
struct Histogram {
    p: u32,
    counts: Vec<i128>,
}

impl Histogram {
    fn new(p: u32) -> Self {
        Histogram {
            p,
            counts: vec![0; p as usize],
        }
    }

    #[inline]
    fn push(&mut self, ctx: &FieldCtx, x: FieldElement) {
        self.counts[ctx.trace_unchecked(x) as usize] += 1;
    }

    fn finish(&self) -> CycInt {
        CycInt::from_exponent_counts(self.p, &self.counts)
    }
}

/// `θ_F = {T^{-n}F}` at the working precision `n + 1`.
pub fn frequency_of(f: &Poly, n: usize) -> LaurentTail {
    LaurentTail::frequency(f, n, n + 1)
}

/// The local sums `Σ_{g∈C_i} ψ(g θ_{-i-1})` for `i = 0..n`.
pub fn fhat_factors(c: &ConstraintSet, ctx: &FieldCtx, theta: &LaurentTail) -> Result<Vec<CycInt>> {
    need_prec(theta, c.n())?;
    Ok((0..c.n())
        .map(|i| {
            let th = theta.get(i + 1);
            let mut hist = Histogram::new(ctx.p());
            for g in c.allowed(i) {
                hist.push(ctx, ctx.mul(g, th));
            }
            hist.finish()
        })
        .collect())
}

/// `F̂_{q,n}(θ)` in product form.
pub fn fhat_product(c: &ConstraintSet, ctx: &FieldCtx, theta: &LaurentTail) -> Result<CycInt> {
    need_prec(theta, c.n() + 1)?;
    let mut acc = ctx.psi(theta.get(c.n() + 1))?;
    for factor in fhat_factors(c, ctx, theta)? {
        acc = &acc * &factor;
    }
    Ok(acc)
}

/// `F̂_{q,n}(θ) = Σ_{G∈𝒞} e(Gθ)` by enumeration of `M_n`.
pub fn fhat_direct(c: &ConstraintSet, ctx: &FieldCtx, theta: &LaurentTail, limits: &Limits) -> Result<CycInt> {
    let n = c.n();
    need_prec(theta, n + 1)?;
    let u = MonicUniverse::new(ctx, n, limits)?;
    let mut hist = Histogram::new(ctx.p());
    let mut buf = vec![FieldElement::ONE; n + 1];
    for idx in 0..u.len() {
        u.fill(idx, &mut buf);
        if c.contains_coeffs(&buf[..n]) {
            hist.push(ctx, pairing(ctx, &buf, theta));
        }
    }
    Ok(hist.finish())
}

/// `F̂_{q,n}(θ_G)` for every `G ∈ M_n`, in universe order.
pub fn fhat_spectrum(c: &ConstraintSet, ctx: &FieldCtx, limits: &Limits) -> Result<Vec<CycInt>> {
    let n = c.n();
    let u = MonicUniverse::new(ctx, n, limits)?;
    let parts = map_shards(&u, limits, |range| {
        range
            .map(|idx| fhat_product(c, ctx, &frequency_of(&u.get(idx), n)))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(parts.into_iter().flatten().collect())
}

/// The monic irreducibles of degree `n`, stored as coefficient vectors
/// `p_0, …, p_{n-1}, 1`.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    n: usize,
    primes: Vec<Vec<FieldElement>>,
}

impl PrimeTable {
    pub fn new(ctx: &FieldCtx, n: usize, limits: &Limits) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("prime table needs n >= 1".into()));
        }
        let u = MonicUniverse::new(ctx, n, limits)?;
        let ring = PolyRing::new(ctx);
        let parts = map_shards(&u, limits, |range| {
            let mut out = Vec::new();
            for idx in range {
                let f = u.get(idx);
                if ring.is_irreducible(&f)? {
                    out.push(f.coeffs().to_vec());
                }
            }
            Ok(out)
        })?;
        Ok(PrimeTable {
            n,
            primes: parts.into_iter().flatten().collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// `π_q(n)`, by enumeration.
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = &[FieldElement]> {
        self.primes.iter().map(|v| v.as_slice())
    }

    pub fn polys(&self) -> impl Iterator<Item = Poly> + '_ {
        self.primes.iter().map(|v| Poly::new(v.clone()))
    }

    /// Number of primes with constant coefficient `c`.
    pub fn count_with_constant(&self, c: FieldElement) -> usize {
        self.primes.iter().filter(|p| p[0] == c).count()
    }

    /// `f(θ) = Σ_P e(θP)`.
    pub fn exp_sum(&self, ctx: &FieldCtx, theta: &LaurentTail) -> Result<CycInt> {
        need_prec(theta, self.n + 1)?;
        let mut hist = Histogram::new(ctx.p());
        for p in &self.primes {
            hist.push(ctx, pairing(ctx, p, theta));
        }
        Ok(hist.finish())
    }
}

/// The classes of the partition of `M_n` by approximation quality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    S1,
    S2,
    S3,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Class::S1 => "S1",
            Class::S2 => "S2",
            Class::S3 => "S3",
        };
        f.write_str(s)
    }
}

/// Class of the frequency `θ_F` together with its Dirichlet approximant.
pub fn classify(ring: &PolyRing, n: usize, f: &Poly) -> Result<(Class, Approximant)> {
    if f.degree() != Some(n) || !ring.is_monic(f) {
        return Err(Error::Precondition(format!("frequency must be monic of degree {n}")));
    }
    let theta = frequency_of(f, n);
    let approx = dirichlet_approx(ring, &theta, n)?;
    // θ_F = c/T exactly when f_{n-2} = … = f_0 = 0
    if (0..n.saturating_sub(1)).all(|i| f.coeff(i).is_zero()) {
        return Ok((Class::S1, approx));
    }
    let h = &approx.h;
    let good_h = !h.is_one() && !h.is_t() && ring.is_squarefree(h)?;
    let close = approx.error_deg.below_half(-2 * n as i64);
    let class = if good_h && close { Class::S2 } else { Class::S3 };
    Ok((class, approx))
}

/// One frequency of the spectrum.
#[derive(Clone, Debug)]
pub struct SpectrumEntry {
    pub f: Poly,
    pub class: Class,
    pub approx: Approximant,
    /// `F̂_{q,n}(θ_F)`.
    pub fhat: CycInt,
    /// `f(−θ_F)`.
    pub fval: CycInt,
}

/// All frequencies `θ_F`, `F ∈ M_n`, in universe order.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub n: usize,
    pub entries: Vec<SpectrumEntry>,
}

impl Spectrum {
    pub fn compute(c: &ConstraintSet, ctx: &FieldCtx, primes: &PrimeTable, limits: &Limits) -> Result<Self> {
        let n = c.n();
        if primes.degree() != n {
            return Err(Error::Precondition("prime table degree differs from n".into()));
        }
        let u = MonicUniverse::new(ctx, n, limits)?;
        let ring = PolyRing::new(ctx);
        let parts = map_shards(&u, limits, |range| {
            range
                .map(|idx| {
                    let f = u.get(idx);
                    let theta = frequency_of(&f, n);
                    let (class, approx) = classify(&ring, n, &f)?;
                    Ok(SpectrumEntry {
                        fhat: fhat_product(c, ctx, &theta)?,
                        fval: primes.exp_sum(ctx, &theta.neg(ctx))?,
                        f,
                        class,
                        approx,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })?;
        Ok(Spectrum {
            n,
            entries: parts.into_iter().flatten().collect(),
        })
    }

    /// `#S1, #S2, #S3`.
    pub fn partition_counts(&self) -> [usize; 3] {
        let mut out = [0; 3];
        for e in &self.entries {
            out[e.class as usize] += 1;
        }
        out
    }

    /// `Σ F̂(θ_F) f(−θ_F)` over the given classes.
    pub fn weighted_sum(&self, p: u32, classes: &[Class]) -> CycInt {
        self.entries
            .iter()
            .filter(|e| classes.contains(&e.class))
            .fold(CycInt::zero(p), |acc, e| acc + &e.fhat * &e.fval)
    }

    /// Writes the `F,class,degH,|fhat|,|f|` table.
    pub fn write_csv<W: Write>(&self, ring: &PolyRing, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Config(format!("writing spectrum: {e}"));
        w.write_record(["F", "class", "degH", "|fhat|", "|f|"]).map_err(io)?;
        for e in &self.entries {
            w.write_record([
                ring.display(&e.f),
                e.class.to_string(),
                e.approx.deg_h().to_string(),
                format!("{:.9}", e.fhat.abs()),
                format!("{:.9}", e.fval.abs()),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Config(format!("writing spectrum: {e}")))?;
        Ok(())
    }
}

/// `q^n` as an `i128`.
fn q_pow(ctx: &FieldCtx, n: usize) -> Result<i128> {
    (ctx.q() as i128)
        .checked_pow(n as u32)
        .ok_or_else(|| Error::Config(format!("q^{n} overflows")))
}

/// Parseval count `(1/q^n) Σ_F F̂(θ_F) f(−θ_F)`, checked to be a
/// non-negative rational integer.
pub fn parseval_count(c: &ConstraintSet, ctx: &FieldCtx, primes: &PrimeTable, limits: &Limits) -> Result<u128> {
    let n = c.n();
    if primes.degree() != n {
        return Err(Error::Precondition("prime table degree differs from n".into()));
    }
    let u = MonicUniverse::new(ctx, n, limits)?;
    let parts = map_shards(&u, limits, |range| {
        let mut acc = CycInt::zero(ctx.p());
        for idx in range {
            let theta = frequency_of(&u.get(idx), n);
            let fhat = fhat_product(c, ctx, &theta)?;
            let fval = primes.exp_sum(ctx, &theta.neg(ctx))?;
            acc += &(&fhat * &fval);
        }
        Ok(acc)
    })?;
    let total = parts.into_iter().fold(CycInt::zero(ctx.p()), |a, b| a + b);
    integer_quotient(&total, q_pow(ctx, n)?, "Parseval sum")
}

fn integer_quotient(total: &CycInt, d: i128, what: &str) -> Result<u128> {
    let value = total
        .as_integer()
        .ok_or_else(|| Error::Internal(format!("{what} {total} is not a rational integer")))?;
    if value < 0 || value % d != 0 {
        return Err(Error::Internal(format!("{what} {value} is not a non-negative multiple of {d}")));
    }
    Ok((value / d) as u128)
}

/// `Σ_G F̂(θ_G) e(−T^{-n} G F)` from a precomputed [`fhat_spectrum`].
pub fn inversion_sum(ctx: &FieldCtx, n: usize, fhats: &[CycInt], f: &Poly) -> Result<CycInt> {
    let size = q_pow(ctx, n)? as usize;
    if fhats.len() != size {
        return Err(Error::Precondition("spectrum size differs from q^n".into()));
    }
    let fc: Vec<FieldElement> = (0..=n).map(|i| f.coeff(i)).collect();
    let mut acc = CycInt::zero(ctx.p());
    for (idx, fhat) in fhats.iter().enumerate() {
        let theta = frequency_of(&crate::polyring::monic_at(ctx, n, idx as u128), n);
        let phase = ctx.psi(ctx.neg(pairing(ctx, &fc, &theta)))?;
        acc += &(fhat * &phase);
    }
    Ok(acc)
}

/// Checks `(1/q^n) Σ_G F̂(θ_G) e(−T^{-n}GF) = 𝟙_𝒞(F)` exactly.
pub fn fourier_inversion_check(c: &ConstraintSet, ctx: &FieldCtx, f: &Poly, limits: &Limits) -> Result<bool> {
    let ring = PolyRing::new(ctx);
    let member = c.member_of(&ring, f)?;
    let fhats = fhat_spectrum(c, ctx, limits)?;
    let sum = inversion_sum(ctx, c.n(), &fhats, f)?;
    let expected = if member { q_pow(ctx, c.n())? } else { 0 };
    Ok(sum == CycInt::from_int(ctx.p(), expected))
}

/// Outcome of the `|f(θ_F)|` circle-method bound at one frequency.
#[derive(Clone, Debug)]
pub struct CircCheck {
    pub class: Class,
    pub deg_h: usize,
    pub bound: Inequality,
    /// False for `S1`, whose denominators `1` and `T` the bound does not
    /// address.
    pub covered: bool,
}

/// `|f(θ_F)| ≤ q^{n−½⌊n/2⌋} + [F ∈ S2]·q^{n−deg H_F}`.
pub fn circ_method_bound_check(ring: &PolyRing, n: usize, f: &Poly, primes: &PrimeTable) -> Result<CircCheck> {
    let ctx = ring.ctx();
    let (class, approx) = classify(ring, n, f)?;
    let abs_f = primes.exp_sum(ctx, &frequency_of(f, n))?.abs();
    let q = ctx.q() as f64;
    let mut rhs = q.powf(n as f64 - 0.5 * (n / 2) as f64);
    if class == Class::S2 {
        rhs += q.powi((n - approx.deg_h()) as i32);
    }
    Ok(CircCheck {
        class,
        deg_h: approx.deg_h(),
        bound: Inequality::new(abs_f, rhs),
        covered: class != Class::S1,
    })
}

/// Zero and nonzero positions of `θ` over `𝓙`: `Z(θ)`, `N(θ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroPattern {
    pub zeros: Vec<usize>,
    pub nonzeros: Vec<usize>,
}

pub fn zero_pattern(c: &ConstraintSet, theta: &LaurentTail) -> Result<ZeroPattern> {
    need_prec(theta, c.n())?;
    let (zeros, nonzeros) = c.free_indices().partition(|&i| theta.get(i + 1).is_zero());
    Ok(ZeroPattern { zeros, nonzeros })
}

/// `|F̂(θ)| ≤ ∏_{N(θ)} N_i ∏_{Z(θ)} q`.
pub fn fhat_bound_check(c: &ConstraintSet, ctx: &FieldCtx, theta: &LaurentTail) -> Result<Inequality> {
    let zp = zero_pattern(c, theta)?;
    let q = ctx.q() as f64;
    let rhs = zp.nonzeros.iter().map(|&i| c.n_forbidden(i) as f64).product::<f64>() * q.powi(zp.zeros.len() as i32);
    Ok(Inequality::new(fhat_product(c, ctx, theta)?.abs(), rhs))
}

/// `Σ_F |F̂(θ_F)| ≤ α(n−I)·q^n`.
pub fn gen_bound_check(c: &ConstraintSet, ctx: &FieldCtx, limits: &Limits) -> Result<Inequality> {
    let n = c.n();
    let mags: Vec<f64> = fhat_spectrum(c, ctx, limits)?.iter().map(CycInt::abs).collect();
    let lhs = mags.iter().sum();
    let rhs = c.alpha(n - c.num_fixed())? as f64 * (ctx.q() as f64).powi(n as i32);
    Ok(Inequality::new(lhs, rhs))
}

/// `|F̂_{q,n}(θ)| ≤ α_{∉K}(#N_{∉K}) q^{#Z_{∉K}} |F̂_{q,l}(T^x θ)|` for
/// `K = K_{x,l}`, the right side using the window transform.
pub fn window_split_check(c: &ConstraintSet, ctx: &FieldCtx, theta: &LaurentTail, w: Window) -> Result<Inequality> {
    need_prec(theta, c.n() + 1)?;
    let sub = c.window(w)?;
    let zp = zero_pattern(c, theta)?;
    let outside_n = zp.nonzeros.iter().filter(|&&i| !w.contains(i)).count();
    let outside_z = zp.zeros.iter().filter(|&&i| !w.contains(i)).count();
    let inner = fhat_product(&sub, ctx, &theta.shift(w.x)?)?.abs();
    let rhs = c.alpha_outside(w, outside_n)? as f64 * (ctx.q() as f64).powi(outside_z as i32) * inner;
    Ok(Inequality::new(fhat_product(c, ctx, theta)?.abs(), rhs))
}

/// Checks `|F̂(θ1)| = |F̂(θ2)|` exactly for tails agreeing to `n` places.
pub fn tail_indifference_check(
    c: &ConstraintSet,
    ctx: &FieldCtx,
    theta1: &LaurentTail,
    theta2: &LaurentTail,
) -> Result<bool> {
    if !theta1.agrees_to(theta2, c.n()) {
        return Err(Error::Precondition(format!("tails must agree on their first {} coefficients", c.n())));
    }
    let a = fhat_product(c, ctx, theta1)?;
    let b = fhat_product(c, ctx, theta2)?;
    Ok(a.norm_sq() == b.norm_sq())
}

/// `Y_h` with the two window bounds on it.
#[derive(Clone, Debug)]
pub struct YhReport {
    pub h: usize,
    pub pairs: usize,
    pub y_h: f64,
    /// `t_h = max{I_{∉K_{0,2h}}, ⌊n/h⌋ − 2}`.
    pub t_h: usize,
    /// `Y_h ≤ α(2h + t_h − I) q^{n − t_h}`.
    pub init: Inequality,
    /// The minimising window of length `2h`.
    pub window: Window,
    pub fixed_in_window: usize,
    /// `Y_h ≤ α(2h − I_{∈K}) q^{n + 1 − I_{∉K}}`.
    pub bigi: Inequality,
}

/// `Y_h = Σ |F̂_{q,n}(G/H)|` over reduced fractions of degree `h`.
pub fn fraction_sum_y(c: &ConstraintSet, ctx: &FieldCtx, h: usize, limits: &Limits) -> Result<YhReport> {
    let n = c.n();
    if h == 0 || 2 * h > n {
        return Err(Error::Precondition(format!("Y_h needs 1 <= h <= n/2, got h = {h}, n = {n}")));
    }
    limits.check((ctx.q() as u128).pow(2 * h as u32))?;
    let ring = PolyRing::new(ctx);
    let fractions = reduced_fractions(&ring, h)?;
    let mags = fractions
        .par_iter()
        .map(|(g, den)| Ok(fhat_product(c, ctx, &frac_of_rational(&ring, g, den, n + 1)?)?.abs()))
        .collect::<Result<Vec<f64>>>()?;
    let y_h: f64 = mags.iter().sum();

    let q = ctx.q() as f64;
    let i = c.num_fixed();
    let k0 = Window { x: 0, m: 2 * h };
    let outside0 = i - c.fixed_in(k0);
    let t_h = outside0.max(n / h - 2);
    let init_rhs = c.alpha(2 * h + t_h - i)? as f64 * q.powi((n - t_h) as i32);

    let (window, fixed_in_window) = c.best_window(2 * h)?;
    let outside = i - fixed_in_window;
    let bigi_rhs = c.alpha(2 * h - fixed_in_window)? as f64 * q.powi((n + 1 - outside) as i32);

    Ok(YhReport {
        h,
        pairs: fractions.len(),
        y_h,
        t_h,
        init: Inequality::new(y_h, init_rhs),
        window,
        fixed_in_window,
        bigi: Inequality::new(y_h, bigi_rhs),
    })
}

/// `α(m) < q^{εm}` for `0 < m ≤ #𝓙`.
pub fn alpha_hypothesis(c: &ConstraintSet, q: u32, eps: f64) -> Result<bool> {
    let ln_q = (q as f64).ln();
    for m in 1..=(c.n() - c.num_fixed()) {
        if (c.alpha(m)? as f64).ln() >= eps * m as f64 * ln_q {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One of the three `ε`-forms of the bound on `Y_h`.
#[derive(Clone, Debug)]
pub struct PropRow {
    pub h: usize,
    pub form: u8,
    pub exponent: f64,
    pub bound: Inequality,
    /// Whether the `α(m) < q^{εm}` hypothesis held, so that the row is a
    /// claim rather than a report.
    pub assertable: bool,
}

/// Evaluates the `ε`-forms for each report whose `h` is in range.
pub fn prop_rows(c: &ConstraintSet, q: u32, eps: f64, reports: &[YhReport]) -> Result<Vec<PropRow>> {
    let hyp = alpha_hypothesis(c, q, eps)?;
    let (n, i) = (c.n() as f64, c.num_fixed() as f64);
    let qf = q as f64;
    let mut rows = Vec::new();
    for r in reports {
        let h = r.h as f64;
        let mut push = |form: u8, exponent: f64| {
            rows.push(PropRow {
                h: r.h,
                form,
                exponent,
                bound: Inequality::new(r.y_h, qf.powf(exponent)),
                assertable: hyp,
            })
        };
        if i == 0.0 || h <= n / i {
            push(1, n + 3.0 * (1.0 - eps) - (1.0 - eps) * n / h + 2.0 * eps * h - eps * i);
        }
        push(2, n - i + 1.0 + (2.0 * eps + (1.0 - eps) * 4.0 * i / n) * h);
        if h < n / 4.0 {
            push(3, n - i + 1.0 + (2.0 * eps + (1.0 - eps) * 3.0 * i / n) * h);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::prime_count;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    fn limits() -> Limits {
        Limits::new(1 << 20).with_shards(3)
    }

    fn universe(ctx: &FieldCtx, n: usize) -> Vec<Poly> {
        MonicUniverse::new(ctx, n, &limits()).unwrap().iter().collect()
    }

    #[test]
    fn fhat_at_zero_is_cardinality() {
        let ctx = FieldCtx::prime(3).unwrap();
        let c = ConstraintSet::avoiding(&ctx, 3, FieldElement(0)).unwrap();
        let z = LaurentTail::zero(4);
        assert_eq!(fhat_product(&c, &ctx, &z).unwrap(), CycInt::from_int(3, 8));
        assert_eq!(fhat_direct(&c, &ctx, &z, &limits()).unwrap(), CycInt::from_int(3, 8));
        assert!(fhat_product(&c, &ctx, &LaurentTail::zero(3)).is_err());
    }

    #[test]
    fn singleton_fhat_is_a_unit() {
        let ctx = FieldCtx::prime(5).unwrap();
        let fixed: BTreeMap<_, _> = (0..3).map(|i| (i, FieldElement(i as u32 + 1))).collect();
        let c = ConstraintSet::prescribed(&ctx, 3, fixed).unwrap();
        let theta = LaurentTail::from_coeffs([1, 4, 2, 3].map(FieldElement).to_vec());
        assert!((fhat_product(&c, &ctx, &theta).unwrap().abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_matches_direct_randomly() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for q in [2u64, 3, 4] {
            let ctx = FieldCtx::from_order(q).unwrap();
            for n in 1..=3 {
                let c = ConstraintSet::random(&ctx, n, 2, &mut rng).unwrap();
                for f in universe(&ctx, n + 1) {
                    // every tail of length n + 1
                    let theta = LaurentTail::from_coeffs(f.coeffs()[..n + 1].to_vec());
                    assert_eq!(
                        fhat_product(&c, &ctx, &theta).unwrap(),
                        fhat_direct(&c, &ctx, &theta, &limits()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn prime_sum_examples() {
        let ctx = FieldCtx::prime(2).unwrap();
        let ring = PolyRing::new(&ctx);
        let primes = PrimeTable::new(&ctx, 2, &limits()).unwrap();
        assert_eq!(primes.len(), 1);
        assert_eq!(primes.exp_sum(&ctx, &LaurentTail::zero(3)).unwrap(), CycInt::from_int(2, 1));
        // only T^2+T+1; e(θP) with θ = 1/T picks the T coefficient, 1
        let inv_t = frac_of_rational(&ring, &ring.one(), &ring.t(), 3).unwrap();
        assert_eq!(primes.exp_sum(&ctx, &inv_t).unwrap(), CycInt::from_int(2, -1));
        for (q, n) in [(3u64, 4usize), (4, 3), (5, 2)] {
            let ctx = FieldCtx::from_order(q).unwrap();
            let t = PrimeTable::new(&ctx, n, &limits()).unwrap();
            assert_eq!(t.len() as u128, prime_count(&ctx, n as i64).unwrap());
        }
    }

    #[test]
    fn prime_sum_symmetry() {
        let ctx = FieldCtx::prime(3).unwrap();
        let primes = PrimeTable::new(&ctx, 4, &limits()).unwrap();
        for f in universe(&ctx, 4).into_iter().step_by(7) {
            let theta = LaurentTail::from_coeffs(f.coeffs().to_vec());
            let a = primes.exp_sum(&ctx, &theta).unwrap();
            let b = primes.exp_sum(&ctx, &theta.neg(&ctx)).unwrap();
            assert_eq!(a.norm_sq(), b.norm_sq());
        }
    }

    #[test]
    fn parseval_matches_trivial_count() {
        let ctx = FieldCtx::prime(2).unwrap();
        let primes = PrimeTable::new(&ctx, 3, &limits()).unwrap();
        let all = ConstraintSet::unconstrained(&ctx, 3).unwrap();
        assert_eq!(parseval_count(&all, &ctx, &primes, &limits()).unwrap(), 2);
        let fixed = ConstraintSet::prescribed(&ctx, 3, BTreeMap::from([(0, FieldElement(1))])).unwrap();
        assert_eq!(parseval_count(&fixed, &ctx, &primes, &limits()).unwrap(), 2);
        let t2 = ConstraintSet::prescribed(&ctx, 3, BTreeMap::from([(2, FieldElement(0))])).unwrap();
        assert_eq!(parseval_count(&t2, &ctx, &primes, &limits()).unwrap(), 1);
    }

    #[test]
    fn parseval_is_shard_independent() {
        let ctx = FieldCtx::prime(3).unwrap();
        let c = ConstraintSet::avoiding(&ctx, 4, FieldElement(1)).unwrap();
        let primes = PrimeTable::new(&ctx, 4, &limits()).unwrap();
        let a = parseval_count(&c, &ctx, &primes, &limits().with_shards(1)).unwrap();
        let b = parseval_count(&c, &ctx, &primes, &limits().with_shards(17)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn inversion_holds_exhaustively() {
        let ctx = FieldCtx::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = ConstraintSet::random(&ctx, 3, 2, &mut rng).unwrap();
        let ring = PolyRing::new(&ctx);
        let fhats = fhat_spectrum(&c, &ctx, &limits()).unwrap();
        for f in universe(&ctx, 3) {
            let sum = inversion_sum(&ctx, 3, &fhats, &f).unwrap();
            let want = if c.member_of(&ring, &f).unwrap() { 27 } else { 0 };
            assert_eq!(sum, CycInt::from_int(3, want));
        }
    }

    #[test]
    fn classify_examples() {
        let ctx = FieldCtx::prime(3).unwrap();
        let ring = PolyRing::new(&ctx);
        assert_eq!(classify(&ring, 4, &ring.parse("T^4").unwrap()).unwrap().0, Class::S1);
        assert_eq!(classify(&ring, 4, &ring.parse("T^4+2*T^3").unwrap()).unwrap().0, Class::S1);
        let all = universe(&ctx, 5);
        let mut counts = [0; 3];
        for f in &all {
            counts[classify(&ring, 5, f).unwrap().0 as usize] += 1;
        }
        assert_eq!(counts[0], 3);
        assert_eq!(counts.iter().sum::<usize>(), all.len());
        assert!(classify(&ring, 4, &ring.parse("T^3").unwrap()).is_err());
    }

    #[test]
    fn tail_indifference() {
        let ctx = FieldCtx::prime(3).unwrap();
        let c = ConstraintSet::avoiding(&ctx, 3, FieldElement(2)).unwrap();
        let a = LaurentTail::from_coeffs([1, 0, 2, 0].map(FieldElement).to_vec());
        let b = LaurentTail::from_coeffs([1, 0, 2, 1].map(FieldElement).to_vec());
        assert!(tail_indifference_check(&c, &ctx, &a, &a).unwrap());
        assert!(tail_indifference_check(&c, &ctx, &a, &b).unwrap());
        assert_ne!(fhat_product(&c, &ctx, &a).unwrap(), fhat_product(&c, &ctx, &b).unwrap());
        let d = LaurentTail::from_coeffs([2, 0, 2, 0].map(FieldElement).to_vec());
        assert!(tail_indifference_check(&c, &ctx, &a, &d).is_err());
    }

    #[test]
    fn window_split_full_window_is_equality() {
        let ctx = FieldCtx::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = ConstraintSet::random(&ctx, 4, 2, &mut rng).unwrap();
        let theta = LaurentTail::from_coeffs([2, 1, 0, 1, 2].map(FieldElement).to_vec());
        let ineq = window_split_check(&c, &ctx, &theta, Window { x: 0, m: 4 }).unwrap();
        assert!((ineq.lhs - ineq.rhs).abs() < 1e-9);
    }

    #[test]
    fn singleton_y_h_counts_pairs() {
        let ctx = FieldCtx::prime(2).unwrap();
        let fixed: BTreeMap<_, _> = (0..6).map(|i| (i, FieldElement(1))).collect();
        let c = ConstraintSet::prescribed(&ctx, 6, fixed).unwrap();
        for h in 1..=3 {
            let r = fraction_sum_y(&c, &ctx, h, &limits()).unwrap();
            assert!((r.y_h - r.pairs as f64).abs() < 1e-9);
            assert!(r.init.holds() && r.bigi.holds());
        }
        assert!(fraction_sum_y(&c, &ctx, 4, &limits()).is_err());
    }

    #[test]
    fn spectrum_csv_shape() {
        let ctx = FieldCtx::prime(3).unwrap();
        let ring = PolyRing::new(&ctx);
        let c = ConstraintSet::unconstrained(&ctx, 2).unwrap();
        let primes = PrimeTable::new(&ctx, 2, &limits()).unwrap();
        let s = Spectrum::compute(&c, &ctx, &primes, &limits()).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&ring, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "F,class,degH,|fhat|,|f|");
        assert_eq!(lines.len(), 10);
        assert_eq!(s.partition_counts()[0], 3);
    }
}
