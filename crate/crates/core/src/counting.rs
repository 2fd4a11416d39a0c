//! Prime counts in constraint sets by enumeration and by Parseval, the
//! `S1` main term, and the finite error chain bounding the rest.

use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::budget::Limits;
use crate::constraints::ConstraintSet;
use crate::cyclo::CycInt;
use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FieldElement};
use crate::laurent::LaurentTail;
use crate::polyring::{prime_count, MonicUniverse, PolyRing};
use crate::spectral::{
    fhat_product, fraction_sum_y, map_shards, Class, Inequality, PrimeTable, Spectrum, YhReport,
};

/// Exact header of the sweep CSV.
pub const SWEEP_HEADER: [&str; 16] = [
    "q",
    "n",
    "I",
    "constraint_hash",
    "exact",
    "parseval",
    "sigma_num",
    "sigma_den",
    "pi_qn",
    "main_x_re",
    "deviation",
    "first_term",
    "yh_sum",
    "epsilon",
    "tau",
    "flags",
];

fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Primes in `𝒞` by enumeration.
pub fn count_exact(c: &ConstraintSet, ctx: &FieldCtx, limits: &Limits) -> Result<u128> {
    let n = c.n();
    let u = MonicUniverse::new(ctx, n, limits)?;
    let ring = PolyRing::new(ctx);
    let parts = map_shards(&u, limits, |range| {
        let mut buf = vec![FieldElement::ONE; n + 1];
        let mut count = 0u128;
        for idx in range {
            u.fill(idx, &mut buf);
            if c.contains_coeffs(&buf[..n]) && ring.is_irreducible(&u.get(idx))? {
                count += 1;
            }
        }
        Ok(count)
    })?;
    Ok(parts.into_iter().sum())
}

/// One value of `c` in the main-term identity
/// `#{F ∈ 𝒞 : f_0 = c} = 𝟙_{C_0}(c)·∏_{1≤i∈𝓙}(q − N_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantRow {
    pub c: FieldElement,
    pub members: u128,
    pub product: u128,
    pub primes: u128,
}

/// The `S1` main term `X` and the identities that evaluate it.
#[derive(Clone, Debug)]
pub struct MainTerm {
    /// `X = (1/q^n) Σ_a F̂(a/T) f(−a/T)`.
    pub x: BigRational,
    /// `(1/q^{n-1}) Σ_c #{F ∈ 𝒞 : f_0 = c}·#{P : p_0 = c}`.
    pub x_by_constant: BigRational,
    /// `(1/q^{n-1}) ∏_{1≤i∈𝓙}(q − N_i) Σ_{c ∈ C_0} #{P : p_0 = c}`.
    pub x_factored: BigRational,
    pub rows: Vec<ConstantRow>,
}

impl MainTerm {
    /// All three forms agree and every row satisfies the identity.
    pub fn consistent(&self) -> bool {
        self.x == self.x_by_constant
            && self.x == self.x_factored
            && self.rows.iter().all(|r| r.members == r.product)
    }
}

pub fn main_term_s1(c: &ConstraintSet, ctx: &FieldCtx, primes: &PrimeTable, limits: &Limits) -> Result<MainTerm> {
    let n = c.n();
    let q = ctx.q();
    let u = MonicUniverse::new(ctx, n, limits)?;

    let mut s1 = CycInt::zero(ctx.p());
    for a in ctx.elements() {
        let theta = LaurentTail::c_over_t(a, n + 1);
        let fhat = fhat_product(c, ctx, &theta)?;
        let fval = primes.exp_sum(ctx, &theta.neg(ctx))?;
        s1 += &(&fhat * &fval);
    }
    let s1 = s1
        .as_integer()
        .ok_or_else(|| Error::Internal(format!("S1 sum {s1} is not a rational integer")))?;
    let qn = BigInt::from(q).pow(n as u32);
    let x = ratio(s1, qn);

    let per_c = map_shards(&u, limits, |range| {
        let mut counts = vec![0u128; q as usize];
        let mut buf = vec![FieldElement::ONE; n + 1];
        for idx in range {
            u.fill(idx, &mut buf);
            if c.contains_coeffs(&buf[..n]) {
                counts[buf[0].0 as usize] += 1;
            }
        }
        Ok(counts)
    })?;
    let tail_product: u128 = c
        .free_indices()
        .filter(|&i| i >= 1)
        .map(|i| (q as u128) - c.n_forbidden(i) as u128)
        .product();
    let rows: Vec<ConstantRow> = ctx
        .elements()
        .map(|cv| ConstantRow {
            c: cv,
            members: per_c.iter().map(|v| v[cv.0 as usize]).sum(),
            product: if c.allows(0, cv) { tail_product } else { 0 },
            primes: primes.count_with_constant(cv) as u128,
        })
        .collect();

    let qn1 = BigInt::from(q).pow(n as u32 - 1);
    let by_constant: BigInt = rows.iter().map(|r| BigInt::from(r.members) * BigInt::from(r.primes)).sum();
    let allowed_primes: BigInt = rows
        .iter()
        .filter(|r| c.allows(0, r.c))
        .map(|r| BigInt::from(r.primes))
        .sum();
    Ok(MainTerm {
        x,
        x_by_constant: ratio(by_constant, qn1.clone()),
        x_factored: ratio(BigInt::from(tail_product) * allowed_primes, qn1),
        rows,
    })
}

/// Primes with constant coefficient `c ≠ 0` against `π_q(n)/(q−1)`.
#[derive(Clone, Debug)]
pub struct ProgressionReport {
    pub rows: Vec<(FieldElement, u128, f64)>,
    /// Smallest `C` with every deviation at most `C·q^{n/2+1}`.
    pub constant: f64,
}

impl ProgressionReport {
    /// The deviations fit under `q^{n/2+1}`.
    pub fn within_default(&self) -> bool {
        self.constant <= 1.0
    }
}

pub fn progression_check(ctx: &FieldCtx, primes: &PrimeTable) -> ProgressionReport {
    let q = ctx.q() as f64;
    let n = primes.degree() as f64;
    let expected = primes.len() as f64 / (q - 1.0);
    let rows: Vec<_> = ctx
        .elements()
        .filter(|c| !c.is_zero())
        .map(|c| {
            let count = primes.count_with_constant(c) as u128;
            (c, count, (count as f64 - expected).abs())
        })
        .collect();
    let scale = q.powf(n / 2.0 + 1.0);
    let constant = rows.iter().map(|r| r.2 / scale).fold(0.0, f64::max);
    ProgressionReport { rows, constant }
}

/// The exact pieces of `count − X = (1/q^n) Σ_{S2∪S3} F̂ f` and the finite
/// bound on their size.
#[derive(Clone, Debug)]
pub struct ErrorChain {
    pub exact: u128,
    pub parseval: u128,
    pub main: MainTerm,
    /// `|count − X|`.
    pub y_measured: BigRational,
    /// `α(n−I)·q^{n−½⌊n/2⌋}`.
    pub first_term: f64,
    /// `Y_h` for `h = 1..⌊n/2⌋`.
    pub yh: Vec<YhReport>,
    /// `Σ_h q^{−h} Y_h`.
    pub yh_sum: f64,
    /// The triangle-inequality bound before the Fourier-mass estimates.
    pub triangle: f64,
    pub partition: [usize; 3],
    /// `|count − X| ≤ first_term + Σ_h q^{−h} Y_h`.
    pub chain: Inequality,
}

/// Runs both counts, the main term and the error chain, failing with an
/// assertion error when an exact identity breaks or the chain bound
/// fails.
pub fn error_chain(c: &ConstraintSet, ctx: &FieldCtx, limits: &Limits) -> Result<ErrorChain> {
    let n = c.n();
    if n < 2 {
        return Err(Error::Precondition("the error chain needs n >= 2".into()));
    }
    let q = ctx.q();
    let qf = q as f64;
    let primes = PrimeTable::new(ctx, n, limits)?;
    let exact = count_exact(c, ctx, limits)?;
    let spectrum = Spectrum::compute(c, ctx, &primes, limits)?;
    let qn = BigInt::from(q).pow(n as u32);

    let whole = spectrum.weighted_sum(ctx.p(), &[Class::S1, Class::S2, Class::S3]);
    let whole = whole
        .as_integer()
        .ok_or_else(|| Error::Assertion(format!("Parseval sum {whole} is not a rational integer")))?;
    let parseval = ratio(whole, qn.clone());
    if parseval != ratio(BigInt::from(exact), 1) {
        return Err(Error::Assertion(format!("Parseval count {parseval} differs from enumeration {exact}")));
    }

    let main = main_term_s1(c, ctx, &primes, limits)?;
    if !main.consistent() {
        return Err(Error::Assertion(format!(
            "main-term identities disagree: X = {}, by constant = {}, factored = {}",
            main.x, main.x_by_constant, main.x_factored
        )));
    }
    let rest = spectrum.weighted_sum(ctx.p(), &[Class::S2, Class::S3]);
    let rest = rest
        .as_integer()
        .ok_or_else(|| Error::Assertion(format!("S2+S3 sum {rest} is not a rational integer")))?;
    let rest = ratio(rest, qn);
    let diff = ratio(BigInt::from(exact), 1) - &main.x;
    if rest != diff {
        return Err(Error::Assertion(format!("S2+S3 mass {rest} differs from count - X = {diff}")));
    }
    let y_measured = diff.abs();

    let top = qf.powf(n as f64 - 0.5 * (n / 2) as f64);
    let first_term = c.alpha(n - c.num_fixed())? as f64 * top;
    let yh = (1..=n / 2)
        .map(|h| fraction_sum_y(c, ctx, h, limits))
        .collect::<Result<Vec<_>>>()?;
    let yh_sum = yh.iter().map(|r| qf.powi(-(r.h as i32)) * r.y_h).sum();

    let qn_f = qf.powi(n as i32);
    let triangle = spectrum
        .entries
        .iter()
        .map(|e| match e.class {
            Class::S1 => 0.0,
            Class::S2 => e.fhat.abs() * (top + qf.powi((n - e.approx.deg_h()) as i32)),
            Class::S3 => e.fhat.abs() * top,
        })
        .sum::<f64>()
        / qn_f;

    let chain = Inequality::new(to_f64(&y_measured), first_term + yh_sum);
    if !chain.holds() {
        return Err(Error::Assertion(format!(
            "|count - X| = {} exceeds first term {} + fraction sum {}",
            chain.lhs, first_term, yh_sum
        )));
    }
    Ok(ErrorChain {
        exact,
        parseval: exact,
        main,
        y_measured,
        first_term,
        yh,
        yh_sum,
        triangle,
        partition: spectrum.partition_counts(),
        chain,
    })
}

/// Evaluations of the asymptotic error terms at a concrete instance. None
/// of these are claims: the `o(1)` and `B` contributions are replaced by
/// `slack`.
#[derive(Clone, Debug)]
pub struct BoundBudget {
    pub epsilon: f64,
    pub tau: f64,
    pub slack: f64,
    /// `s = √((1−ε)/(1−2ε))·√n`.
    pub s: f64,
    /// `y = I·s/n`.
    pub y: f64,
    /// `m_{n,I,ε} = min{n/I, s}`.
    pub m: f64,
    /// `ρ = I/n`.
    pub rho: f64,
    /// `m_{n,I} = min{n/I, √n}`.
    pub m_pollack: f64,
    /// `β = 1 − 2ε − 4(1−ε)I/n`.
    pub beta: f64,
    pub first_term: f64,
    /// `q^{n−I} q^{−(1−2ε+o(1)) m}`.
    pub second_term_small_i: f64,
    /// `q^{n−I} q^{−(1−2ε) n/I + 4 − 3ε + B}`, when `I > 0`.
    pub second_term_big_i: Option<f64>,
    /// `C_{q,ε,τ} = (1 − q^{−(1−2ε)τ})^{−1}`.
    pub c_eps_tau: f64,
    /// `C_{q,ε,y} = (1 − q^{−(1−2ε)(y²−1)})^{−1}`, when `y > 1`.
    pub c_eps_y: Option<f64>,
    /// `B_{q,ε,τ,y} = log_q(C_{q,ε,y} + 2C_{q,ε,τ})`.
    pub b_eps_tau_y: Option<f64>,
    /// `I/n < ¼·(1−2ε)/(1−ε)·(1−τ)`.
    pub density_ok: bool,
    /// `n/4 − n/I ≥ (1−ε)/β`, when `I > 0` and `β > 0`.
    pub n_beta_ineq: Option<bool>,
    pub flags: Vec<String>,
}

impl BoundBudget {
    pub fn new(c: &ConstraintSet, q: u32, epsilon: f64, tau: f64, slack: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(Error::Config(format!("epsilon must lie in (0, 1/2), got {epsilon}")));
        }
        if tau.is_nan() || tau <= 0.0 {
            return Err(Error::Config(format!("tau must be positive, got {tau}")));
        }
        let qf = q as f64;
        let max_n = c.free_indices().map(|j| c.n_forbidden(j)).max().unwrap_or(0);
        if max_n as f64 >= qf.powf(epsilon) {
            return Err(Error::Config(format!(
                "max N_j = {max_n} is not below q^epsilon = {:.6}",
                qf.powf(epsilon)
            )));
        }
        let n = c.n() as f64;
        let i = c.num_fixed() as f64;
        let n_over_i = if i > 0.0 { n / i } else { f64::INFINITY };
        let s = ((1.0 - epsilon) / (1.0 - 2.0 * epsilon)).sqrt() * n.sqrt();
        let y = i * s / n;
        let m = n_over_i.min(s);
        let beta = 1.0 - 2.0 * epsilon - 4.0 * (1.0 - epsilon) * i / n;
        let first_term = c.alpha(c.n() - c.num_fixed())? as f64 * qf.powf(n - 0.5 * (c.n() / 2) as f64);
        let c_eps_tau = 1.0 / (1.0 - qf.powf(-(1.0 - 2.0 * epsilon) * tau));
        let c_eps_y = (y > 1.0).then(|| 1.0 / (1.0 - qf.powf(-(1.0 - 2.0 * epsilon) * (y * y - 1.0))));
        let b_eps_tau_y = c_eps_y.map(|cy| (cy + 2.0 * c_eps_tau).ln() / qf.ln());
        let second_term_small_i = qf.powf(n - i - (1.0 - 2.0 * epsilon + slack) * m);
        let second_term_big_i = (i > 0.0)
            .then(|| qf.powf(n - i - (1.0 - 2.0 * epsilon) * n_over_i + 4.0 - 3.0 * epsilon + slack));
        let mut flags = Vec::new();
        if slack == 0.0 {
            flags.push("asymptotic-ignored".to_string());
        }
        let density_ok = i / n < 0.25 * (1.0 - 2.0 * epsilon) / (1.0 - epsilon) * (1.0 - tau);
        if !density_ok {
            flags.push("density-condition-fails".to_string());
        }
        let n_beta_ineq = (i > 0.0 && beta > 0.0).then(|| n / 4.0 - n / i >= (1.0 - epsilon) / beta);
        if n_beta_ineq == Some(false) {
            flags.push("n-beta-ineq-fails".to_string());
        }
        Ok(BoundBudget {
            epsilon,
            tau,
            slack,
            s,
            y,
            m,
            rho: i / n,
            m_pollack: n_over_i.min(n.sqrt()),
            beta,
            first_term,
            second_term_small_i,
            second_term_big_i,
            c_eps_tau,
            c_eps_y,
            b_eps_tau_y,
            density_ok,
            n_beta_ineq,
            flags,
        })
    }
}

/// The full report for one instance.
#[derive(Clone, Debug)]
pub struct CountReport {
    pub q: u32,
    pub n: usize,
    pub num_fixed: usize,
    pub constraint_hash: String,
    pub sigma: BigRational,
    pub pi_qn: u128,
    /// `𝔖·π_q(n)`.
    pub main_exact: BigRational,
    /// `|count − 𝔖·π_q(n)|`.
    pub deviation: f64,
    pub chain: ErrorChain,
    pub budget: BoundBudget,
}

pub fn error_decomposition(
    c: &ConstraintSet,
    ctx: &FieldCtx,
    epsilon: f64,
    tau: f64,
    limits: &Limits,
) -> Result<CountReport> {
    let budget = BoundBudget::new(c, ctx.q(), epsilon, tau, 0.0)?;
    let chain = error_chain(c, ctx, limits)?;
    let pi_qn = prime_count(ctx, c.n() as i64)?;
    let sigma = c.singular_series();
    let main_exact = &sigma * ratio(BigInt::from(pi_qn), 1);
    let deviation = to_f64(&(ratio(BigInt::from(chain.exact), 1) - &main_exact).abs());
    Ok(CountReport {
        q: ctx.q(),
        n: c.n(),
        num_fixed: c.num_fixed(),
        constraint_hash: c.hash(ctx),
        sigma,
        pi_qn,
        main_exact,
        deviation,
        chain,
        budget,
    })
}

/// How each sweep cell builds its constraint set.
#[derive(Clone, Debug, PartialEq)]
pub enum Template {
    Unconstrained,
    /// Every coefficient avoids the element with this index.
    Avoid(u32),
    /// Prescribed values by index.
    Prescribed(Vec<(usize, u32)>),
    /// Seeded random sets with at most this many forbidden values.
    Random { seed: u64, max_forbidden: usize },
}

impl Template {
    /// Parses `unconstrained`, `avoid:<a>`, `fixed:<i>=<a>,…` or
    /// `random:<max forbidden>` (seeded by `seed`).
    pub fn parse(s: &str, seed: u64) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown template {s:?}"));
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "unconstrained" if arg.is_empty() => Ok(Template::Unconstrained),
            "avoid" => Ok(Template::Avoid(arg.parse().map_err(|_| bad())?)),
            "fixed" => {
                let pairs = arg
                    .split(',')
                    .map(|p| {
                        let (i, a) = p.split_once('=').ok_or_else(bad)?;
                        Ok((i.trim().parse().map_err(|_| bad())?, a.trim().parse().map_err(|_| bad())?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Template::Prescribed(pairs))
            }
            "random" => Ok(Template::Random {
                seed,
                max_forbidden: arg.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }

    pub fn build(&self, ctx: &FieldCtx, n: usize) -> Result<ConstraintSet> {
        match self {
            Template::Unconstrained => ConstraintSet::unconstrained(ctx, n),
            Template::Avoid(a) => ConstraintSet::avoiding(ctx, n, ctx.check(FieldElement(*a))?),
            Template::Prescribed(pairs) => {
                let fixed = pairs
                    .iter()
                    .filter(|(i, _)| *i < n)
                    .map(|&(i, a)| Ok((i, ctx.check(FieldElement(a))?)))
                    .collect::<Result<_>>()?;
                ConstraintSet::prescribed(ctx, n, fixed)
            }
            Template::Random { seed, max_forbidden } => {
                let cell_seed = seed ^ ((ctx.q() as u64) << 32) ^ n as u64;
                ConstraintSet::random(ctx, n, *max_forbidden, &mut ChaCha8Rng::seed_from_u64(cell_seed))
            }
        }
    }
}

/// One sweep cell: a report or the error that stopped it.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub q: u32,
    pub n: usize,
    pub epsilon: f64,
    pub tau: f64,
    pub outcome: std::result::Result<CountReport, Error>,
}

impl SweepRow {
    pub fn record(&self) -> Vec<String> {
        let (q, n) = (self.q.to_string(), self.n.to_string());
        let (eps, tau) = (self.epsilon.to_string(), self.tau.to_string());
        match &self.outcome {
            Ok(r) => {
                let mut flags = r.budget.flags.clone();
                if !r.chain.main.consistent() {
                    flags.push("main-term-mismatch".into());
                }
                vec![
                    q,
                    n,
                    r.num_fixed.to_string(),
                    r.constraint_hash.clone(),
                    r.chain.exact.to_string(),
                    r.chain.parseval.to_string(),
                    r.sigma.numer().to_string(),
                    r.sigma.denom().to_string(),
                    r.pi_qn.to_string(),
                    format!("{:.9}", to_f64(&r.chain.main.x)),
                    format!("{:.9}", r.deviation),
                    format!("{:.9}", r.chain.first_term),
                    format!("{:.9}", r.chain.yh_sum),
                    eps,
                    tau,
                    flags.join(";"),
                ]
            }
            Err(e) => {
                let mut rec = vec![q, n];
                rec.extend(std::iter::repeat_n(String::new(), 11));
                rec.extend([eps, tau, format!("error: {e}")]);
                rec
            }
        }
    }
}

/// One report per `(q, n)` cell, `q` outer and `n` inner; cells that fail
/// keep their error in the row.
pub fn sweep(
    template: &Template,
    q_list: &[u64],
    n_range: std::ops::RangeInclusive<usize>,
    epsilon: f64,
    tau: f64,
    limits: &Limits,
) -> Vec<SweepRow> {
    let cells: Vec<(u64, usize)> = q_list
        .iter()
        .flat_map(|&q| n_range.clone().map(move |n| (q, n)))
        .collect();
    cells
        .par_iter()
        .map(|&(q, n)| {
            let outcome = FieldCtx::from_order(q).and_then(|ctx| {
                let c = template.build(&ctx, n)?;
                error_decomposition(&c, &ctx, epsilon, tau, limits)
            });
            SweepRow {
                q: q as u32,
                n,
                epsilon,
                tau,
                outcome,
            }
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Config(format!("writing sweep: {e}"));
    w.write_record(SWEEP_HEADER).map_err(io)?;
    for r in rows {
        w.write_record(r.record()).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Config(format!("writing sweep: {e}")))?;
    Ok(())
}

/// Exact rational as `num/den` (or an integer).
pub fn format_rational(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn limits() -> Limits {
        Limits::new(1 << 22).with_shards(4)
    }

    #[test]
    fn exact_count_examples() {
        let ctx = FieldCtx::prime(2).unwrap();
        let c = ConstraintSet::prescribed(&ctx, 3, BTreeMap::from([(0, FieldElement(1))])).unwrap();
        assert_eq!(count_exact(&c, &ctx, &limits()).unwrap(), 2);
        for n in 1..=6 {
            let all = ConstraintSet::unconstrained(&ctx, n).unwrap();
            assert_eq!(count_exact(&all, &ctx, &limits()).unwrap(), prime_count(&ctx, n as i64).unwrap());
        }
        let ctx3 = FieldCtx::prime(3).unwrap();
        for i in 0..3 {
            for a in 1..3 {
                let c = ConstraintSet::prescribed(&ctx3, 3, BTreeMap::from([(i, FieldElement(a))])).unwrap();
                assert!(count_exact(&c, &ctx3, &limits()).unwrap() > 0);
            }
        }
    }

    #[test]
    fn main_term_identities() {
        let ctx = FieldCtx::prime(3).unwrap();
        let primes = PrimeTable::new(&ctx, 4, &limits()).unwrap();
        let c = ConstraintSet::avoiding(&ctx, 4, FieldElement(0)).unwrap();
        let m = main_term_s1(&c, &ctx, &primes, &limits()).unwrap();
        assert!(m.consistent(), "{m:?}");
        // f_0 = 0 is excluded, so only c = 1, 2 carry members
        assert_eq!(m.rows[0].members, 0);
        assert_eq!(m.rows[1].members, 8);
    }

    #[test]
    fn unconstrained_main_term_is_prime_count() {
        // with no constraints X = (1/q^{n-1})·q^{n-1}·π_q(n)
        let ctx = FieldCtx::prime(5).unwrap();
        let primes = PrimeTable::new(&ctx, 3, &limits()).unwrap();
        let c = ConstraintSet::unconstrained(&ctx, 3).unwrap();
        let m = main_term_s1(&c, &ctx, &primes, &limits()).unwrap();
        assert_eq!(m.x, ratio(40, 1));
    }

    #[test]
    fn progression_constant() {
        let ctx = FieldCtx::prime(3).unwrap();
        let primes = PrimeTable::new(&ctx, 4, &limits()).unwrap();
        let r = progression_check(&ctx, &primes);
        // p_0 is the norm of a root. The 72 elements of degree 4 in F_81
        // split 40 of norm 2 and 32 of norm 1 (F_9^* all has norm 1).
        assert_eq!(r.rows.iter().map(|x| x.1).collect::<Vec<_>>(), vec![8, 10]);
        assert!((r.constant - 1.0 / 27.0).abs() < 1e-12);
        assert!(r.within_default());
    }

    #[test]
    fn chain_small() {
        let ctx = FieldCtx::prime(3).unwrap();
        let c = ConstraintSet::avoiding(&ctx, 4, FieldElement(0)).unwrap();
        let r = error_chain(&c, &ctx, &limits()).unwrap();
        assert_eq!(r.exact, r.parseval);
        assert!(r.chain.holds());
        assert_eq!(r.partition.iter().sum::<usize>(), 81);
    }

    #[test]
    fn budget_validation() {
        let ctx = FieldCtx::prime(3).unwrap();
        let c = ConstraintSet::avoiding(&ctx, 4, FieldElement(0)).unwrap();
        assert!(BoundBudget::new(&c, 3, 0.5, 0.1, 0.0).is_err());
        assert!(BoundBudget::new(&c, 3, 0.25, 0.0, 0.0).is_err());
        let b = BoundBudget::new(&c, 3, 0.25, 0.1, 0.0).unwrap();
        assert!(b.flags.contains(&"asymptotic-ignored".to_string()));
        assert!((b.s - (0.75f64 / 0.5).sqrt() * 2.0).abs() < 1e-12);
        assert_eq!(b.y, 0.0);
        let two = ConstraintSet::new(
            &ctx,
            4,
            BTreeMap::new(),
            BTreeMap::from([(1, std::collections::BTreeSet::from([FieldElement(0), FieldElement(1)]))]),
        )
        .unwrap();
        assert!(matches!(BoundBudget::new(&two, 3, 0.25, 0.1, 0.0), Err(Error::Config(_))));
    }

    #[test]
    fn sweep_rows_and_header() {
        let rows = sweep(&Template::Unconstrained, &[3], 2..=4, 0.25, 0.1, &limits());
        for r in &rows {
            let rep = r.outcome.as_ref().unwrap();
            assert_eq!(rep.chain.exact, rep.pi_qn);
        }
        let mut buf = Vec::new();
        write_sweep_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "q,n,I,constraint_hash,exact,parseval,sigma_num,sigma_den,pi_qn,main_x_re,deviation,first_term,yh_sum,epsilon,tau,flags"
        );
        assert_eq!(text.lines().count(), 4);
        let (from, to) = (3, 2);
        let empty = sweep(&Template::Unconstrained, &[3], from..=to, 0.25, 0.1, &limits());
        assert!(empty.is_empty());
    }

    #[test]
    fn sweep_keeps_going_after_errors() {
        let rows = sweep(&Template::Avoid(7), &[3, 11], 2..=2, 0.25, 0.1, &limits());
        assert!(rows[0].outcome.is_err());
        assert!(rows[1].outcome.is_ok());
        assert!(rows[0].record()[15].starts_with("error:"));
    }

    #[test]
    fn template_parsing() {
        assert_eq!(Template::parse("avoid:0", 1).unwrap(), Template::Avoid(0));
        assert_eq!(
            Template::parse("fixed:0=1,3=2", 1).unwrap(),
            Template::Prescribed(vec![(0, 1), (3, 2)])
        );
        assert!(Template::parse("bogus", 1).is_err());
    }
}
