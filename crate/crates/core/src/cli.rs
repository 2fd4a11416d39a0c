//! The `ffprime` command line.
//!
//! Exit codes: 0 on success, 1 on bad input or exceeded budgets, 2 when an
//! exact identity or a checked bound fails.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::Limits;
use crate::constraints::ConstraintSet;
use crate::counting::{
    count_exact, format_rational, main_term_s1, progression_check, sweep, write_sweep_csv, Template,
};
use crate::error::{Error, Result};
use crate::ffield::FieldCtx;
use crate::laurent::{
    dirichlet_approx, frac_of_rational, shift_multiplicity, zero_run_exhaustive, LaurentTail,
};
use crate::polyring::{prime_count, MonicUniverse, Poly, PolyRing};
use crate::spectral::{
    circ_method_bound_check, fhat_bound_check, fhat_spectrum, fraction_sum_y, gen_bound_check, inversion_sum,
    parseval_count, window_split_check, Class, PrimeTable, Spectrum,
};
use crate::constraints::Window;
use crate::cyclo::CycInt;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_251_016;

#[derive(Parser, Debug)]
#[command(name = "ffprime", version, about = "Count irreducible polynomials over F_q in coefficient-constrained sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Field order (a prime power)
    #[arg(long, conflicts_with_all = ["p", "k", "modulus"])]
    pub q: Option<u64>,
    /// Characteristic, with --k and optionally --modulus
    #[arg(long)]
    pub p: Option<u32>,
    /// Extension degree
    #[arg(long, requires = "p")]
    pub k: Option<u32>,
    /// Modulus coefficients over F_p, constant term first (e.g. 1,1,1)
    #[arg(long, requires = "p")]
    pub modulus: Option<String>,
    /// Degree of the polynomials
    #[arg(long)]
    pub n: Option<usize>,
    /// Constraint set in JSON
    #[arg(long)]
    pub constraints: Option<PathBuf>,
    /// Seed for random constraint sets
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Number of enumeration shards
    #[arg(long)]
    pub shards: Option<usize>,
    /// Ignore enumeration budgets
    #[arg(long)]
    pub force_budget: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Enum,
    Fourier,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Parseval,
    Inversion,
    Bounds,
    Lemmas,
    Partition,
    Mainterm,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count primes in the constraint set
    Count {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Print the singular series
    Sigma {
        #[command(flatten)]
        common: Common,
    },
    /// Compute the spectrum of frequencies
    Fourier {
        #[command(flatten)]
        common: Common,
        /// Spectrum CSV output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dirichlet approximation of a rational G/H
    Approx {
        #[command(flatten)]
        common: Common,
        /// The rational, e.g. "1/T^2+1"
        theta: String,
    },
    /// Run a verification suite
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Number of random constraint sets
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Full reports over a grid of (q, n)
    Sweep {
        #[command(flatten)]
        common: Common,
        /// unconstrained | avoid:<a> | fixed:<i>=<a>,... | random:<max forbidden>
        #[arg(long, default_value = "unconstrained")]
        template: String,
        /// Comma-separated field orders
        #[arg(long, value_delimiter = ',', default_value = "3")]
        qs: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        n_from: usize,
        #[arg(long, default_value_t = 4)]
        n_to: usize,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.1)]
        tau: f64,
        /// Sweep CSV output (standard output if absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Common {
    fn field(&self) -> Result<FieldCtx> {
        match (self.q, self.p) {
            (Some(q), None) => FieldCtx::from_order(q),
            (None, Some(p)) => {
                let modulus = self
                    .modulus
                    .as_deref()
                    .map(|m| {
                        m.split(',')
                            .map(|c| c.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad modulus {m:?}"))))
                            .collect::<Result<Vec<_>>>()
                    })
                    .transpose()?;
                FieldCtx::new(p, self.k.unwrap_or(1), modulus)
            }
            (None, None) => Err(Error::Config("give --q or --p".into())),
            (Some(_), Some(_)) => Err(Error::Config("give only one of --q and --p".into())),
        }
    }

    fn constraint_set(&self, ctx: &FieldCtx) -> Result<ConstraintSet> {
        match &self.constraints {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("reading {}: {e}", path.display())))?;
                let c = ConstraintSet::from_json(ctx, &text)?;
                if let Some(n) = self.n {
                    if n != c.n() {
                        return Err(Error::Config(format!("--n {n} differs from the constraint file's n = {}", c.n())));
                    }
                }
                Ok(c)
            }
            None => ConstraintSet::unconstrained(ctx, self.degree()?),
        }
    }

    fn degree(&self) -> Result<usize> {
        self.n.ok_or_else(|| Error::Config("--n is required".into()))
    }

    fn limits(&self, base: Limits) -> Limits {
        let l = base.forced(self.force_budget);
        match self.shards {
            Some(s) => l.with_shards(s),
            None => l,
        }
    }
}

/// Parses `args` and runs the command, writing to `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_assertion() {
                2
            } else {
                1
            }
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Config(format!("output: {e}"))
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<bool> {
    match command {
        Command::Count { common, method } => cmd_count(&common, method, out),
        Command::Sigma { common } => cmd_sigma(&common, out),
        Command::Fourier { common, out: path } => cmd_fourier(&common, path, out),
        Command::Approx { common, theta } => cmd_approx(&common, &theta, out),
        Command::Verify { common, suite, samples } => cmd_verify(&common, suite, samples, out),
        Command::Sweep {
            common,
            template,
            qs,
            n_from,
            n_to,
            epsilon,
            tau,
            out: path,
        } => {
            let template = Template::parse(&template, common.seed)?;
            let limits = common.limits(Limits::spectrum());
            let rows = sweep(&template, &qs, n_from..=n_to, epsilon, tau, &limits);
            match path {
                Some(p) => {
                    let f = File::create(&p).map_err(io_err)?;
                    write_sweep_csv(&rows, BufWriter::new(f))?;
                    writeln!(out, "# seed = {}", common.seed).map_err(io_err)?;
                    writeln!(out, "wrote {} rows to {}", rows.len(), p.display()).map_err(io_err)?;
                }
                None => write_sweep_csv(&rows, &mut *out)?,
            }
            Ok(true)
        }
    }
}

fn header(out: &mut dyn Write, ctx: &FieldCtx, c: &ConstraintSet, seed: u64) -> Result<()> {
    writeln!(
        out,
        "# q = {}, n = {}, I = {}, constraints = {}, seed = {seed}",
        ctx.q(),
        c.n(),
        c.num_fixed(),
        c.hash(ctx)
    )
    .map_err(io_err)
}

fn cmd_count(common: &Common, method: Method, out: &mut dyn Write) -> Result<bool> {
    let ctx = common.field()?;
    let c = common.constraint_set(&ctx)?;
    header(out, &ctx, &c, common.seed)?;
    let exact = match method {
        Method::Enum | Method::Both => Some(count_exact(&c, &ctx, &common.limits(Limits::enumeration()))?),
        Method::Fourier => None,
    };
    let fourier = match method {
        Method::Fourier | Method::Both => {
            let limits = common.limits(Limits::spectrum());
            let primes = PrimeTable::new(&ctx, c.n(), &limits)?;
            Some(parseval_count(&c, &ctx, &primes, &limits)?)
        }
        Method::Enum => None,
    };
    if let Some(v) = exact {
        writeln!(out, "exact = {v}").map_err(io_err)?;
    }
    if let Some(v) = fourier {
        writeln!(out, "parseval = {v}").map_err(io_err)?;
    }
    let predicted = c.singular_series() * num_rational::BigRational::from_integer(prime_count(&ctx, c.n() as i64)?.into());
    writeln!(out, "sigma*pi = {} ~ {:.6}", format_rational(&predicted), ratio_f64(&predicted)).map_err(io_err)?;
    if let (Some(a), Some(b)) = (exact, fourier) {
        if a != b {
            return Err(Error::Assertion(format!("enumeration count {a} differs from Parseval count {b}")));
        }
    }
    Ok(true)
}

fn ratio_f64(r: &num_rational::BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

fn cmd_sigma(common: &Common, out: &mut dyn Write) -> Result<bool> {
    let ctx = common.field()?;
    let c = common.constraint_set(&ctx)?;
    header(out, &ctx, &c, common.seed)?;
    let s = c.singular_series();
    writeln!(out, "sigma = {}", format_rational(&s)).map_err(io_err)?;
    writeln!(out, "cardinality = {}", c.cardinality()).map_err(io_err)?;
    writeln!(out, "R = {}", format_rational(&c.heuristic_correction())).map_err(io_err)?;
    Ok(true)
}

fn cmd_fourier(common: &Common, path: Option<PathBuf>, out: &mut dyn Write) -> Result<bool> {
    let ctx = common.field()?;
    let c = common.constraint_set(&ctx)?;
    header(out, &ctx, &c, common.seed)?;
    let limits = common.limits(Limits::spectrum());
    let primes = PrimeTable::new(&ctx, c.n(), &limits)?;
    let spectrum = Spectrum::compute(&c, &ctx, &primes, &limits)?;
    let [s1, s2, s3] = spectrum.partition_counts();
    writeln!(out, "S1 = {s1}, S2 = {s2}, S3 = {s3}").map_err(io_err)?;
    let total = spectrum.weighted_sum(ctx.p(), &[Class::S1, Class::S2, Class::S3]);
    let qn = (ctx.q() as i128).pow(c.n() as u32);
    match total.as_integer() {
        Some(v) if v % qn == 0 => writeln!(out, "parseval = {}", v / qn).map_err(io_err)?,
        _ => return Err(Error::Assertion(format!("Parseval sum {total} is not a multiple of q^n"))),
    }
    if let Some(p) = path {
        let f = File::create(&p).map_err(io_err)?;
        spectrum.write_csv(&PolyRing::new(&ctx), BufWriter::new(f))?;
        writeln!(out, "wrote {} rows to {}", spectrum.entries.len(), p.display()).map_err(io_err)?;
    }
    Ok(true)
}

fn cmd_approx(common: &Common, theta: &str, out: &mut dyn Write) -> Result<bool> {
    let ctx = common.field()?;
    let ring = PolyRing::new(&ctx);
    let n = common.degree()?;
    let (g, h) = theta
        .split_once('/')
        .ok_or_else(|| Error::Parse(format!("expected G/H, got {theta:?}")))?;
    let g = ring.parse(g)?;
    let h = ring.parse(h)?;
    if h.is_zero() {
        return Err(Error::InvalidPoly("zero denominator".into()));
    }
    let tail = frac_of_rational(&ring, &g, &h, n + 1)?;
    let a = dirichlet_approx(&ring, &tail, n)?;
    writeln!(out, "G = {}", ring.display(&a.g)).map_err(io_err)?;
    writeln!(out, "H = {}", ring.display(&a.h)).map_err(io_err)?;
    writeln!(out, "errorDeg = {}", a.error_deg).map_err(io_err)?;
    Ok(true)
}

/// Pass/fail tally for a suite.
struct Tally<'a> {
    out: &'a mut dyn Write,
    failures: usize,
}

impl Tally<'_> {
    fn check(&mut self, ok: bool, name: &str, detail: impl std::fmt::Display) -> Result<()> {
        if !ok {
            self.failures += 1;
        }
        writeln!(self.out, "{} {name}: {detail}", if ok { "PASS" } else { "FAIL" }).map_err(io_err)
    }

    fn note(&mut self, text: impl std::fmt::Display) -> Result<()> {
        writeln!(self.out, "     {text}").map_err(io_err)
    }
}

/// The given constraint set (or `M_n`) followed by `samples` random ones.
fn constraint_family(common: &Common, ctx: &FieldCtx, samples: usize) -> Result<Vec<ConstraintSet>> {
    let first = common.constraint_set(ctx)?;
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let mut out = vec![first.clone()];
    for _ in 0..samples {
        out.push(ConstraintSet::random(ctx, first.n(), (ctx.q() as usize / 2).max(1), &mut rng)?);
    }
    Ok(out)
}

fn cmd_verify(common: &Common, suite: Suite, samples: usize, out: &mut dyn Write) -> Result<bool> {
    let ctx = common.field()?;
    let ring = PolyRing::new(&ctx);
    let limits = common.limits(Limits::spectrum());
    let n = match (&common.constraints, common.n) {
        (None, n) => n.ok_or_else(|| Error::Config("--n is required".into()))?,
        (Some(_), _) => common.constraint_set(&ctx)?.n(),
    };
    writeln!(out, "# suite = {suite:?}, q = {}, n = {n}, seed = {}", ctx.q(), common.seed).map_err(io_err)?;
    let mut t = Tally { out, failures: 0 };
    match suite {
        Suite::Parseval => {
            let primes = PrimeTable::new(&ctx, n, &limits)?;
            for c in constraint_family(common, &ctx, samples)? {
                let exact = count_exact(&c, &ctx, &limits)?;
                let fourier = parseval_count(&c, &ctx, &primes, &limits)?;
                t.check(exact == fourier, "parseval", format!("{} exact {exact} parseval {fourier}", c.hash(&ctx)))?;
            }
        }
        Suite::Inversion => {
            for c in constraint_family(common, &ctx, samples)? {
                let fhats = fhat_spectrum(&c, &ctx, &limits)?;
                let qn = (ctx.q() as i128).pow(n as u32);
                let mut bad = None;
                for f in MonicUniverse::new(&ctx, n, &limits)?.iter() {
                    let want = if c.member_of(&ring, &f)? { qn } else { 0 };
                    if inversion_sum(&ctx, n, &fhats, &f)? != CycInt::from_int(ctx.p(), want) {
                        bad = Some(f);
                        break;
                    }
                }
                let detail = match &bad {
                    None => format!("{} all {qn} frequencies", c.hash(&ctx)),
                    Some(f) => format!("{} fails at F = {}", c.hash(&ctx), ring.display(f)),
                };
                t.check(bad.is_none(), "inversion", detail)?;
            }
        }
        Suite::Bounds => verify_bounds(common, &ctx, n, samples, &limits, &mut t)?,
        Suite::Lemmas => verify_lemmas(common, &ctx, n, &limits, &mut t)?,
        Suite::Partition => {
            let c = ConstraintSet::unconstrained(&ctx, n)?;
            let primes = PrimeTable::new(&ctx, n, &limits)?;
            let s = Spectrum::compute(&c, &ctx, &primes, &limits)?;
            let [s1, s2, s3] = s.partition_counts();
            t.note(format!("#S1 = {s1}, #S2 = {s2}, #S3 = {s3}"))?;
            t.check(s1 == ctx.q() as usize, "S1 size", format!("{s1} (q = {})", ctx.q()))?;
            t.check(s1 + s2 + s3 == s.entries.len(), "partition", format!("{} frequencies", s.entries.len()))?;
        }
        Suite::Mainterm => {
            let primes = PrimeTable::new(&ctx, n, &limits)?;
            for c in constraint_family(common, &ctx, samples)? {
                let m = main_term_s1(&c, &ctx, &primes, &limits)?;
                t.check(m.consistent(), "main term", format!("{} X = {}", c.hash(&ctx), format_rational(&m.x)))?;
            }
            let prog = progression_check(&ctx, &primes);
            t.note(format!("progression constant {:.6} (relative to q^(n/2+1))", prog.constant))?;
            if !prog.within_default() {
                t.note("progression deviations exceed q^(n/2+1); reporting the constant instead")?;
            }
        }
    }
    let failures = t.failures;
    writeln!(t.out, "{}", if failures == 0 { "all checks passed".to_string() } else { format!("{failures} checks failed") })
        .map_err(io_err)?;
    Ok(failures == 0)
}

fn verify_bounds(
    common: &Common,
    ctx: &FieldCtx,
    n: usize,
    samples: usize,
    limits: &Limits,
    t: &mut Tally,
) -> Result<()> {
    let ring = PolyRing::new(ctx);
    let primes = PrimeTable::new(ctx, n, limits)?;
    let universe: Vec<Poly> = MonicUniverse::new(ctx, n, limits)?.iter().collect();

    let mut worst: Option<(Poly, f64)> = None;
    let mut s1_over = 0;
    for f in &universe {
        let chk = circ_method_bound_check(&ring, n, f, &primes)?;
        if chk.bound.holds() {
            continue;
        }
        if !chk.covered {
            s1_over += 1;
        } else if worst.as_ref().is_none_or(|w| chk.bound.lhs - chk.bound.rhs > w.1) {
            worst = Some((f.clone(), chk.bound.lhs - chk.bound.rhs));
        }
    }
    let detail = match &worst {
        None => format!("all {} frequencies", universe.len()),
        Some((f, excess)) => format!("exceeded by {excess:.6} at F = {}", ring.display(f)),
    };
    t.check(worst.is_none(), "circle-method bound on |f|", detail)?;
    if s1_over > 0 {
        t.note(format!("{s1_over} S1 frequencies exceed the bound; S1 lies outside its hypotheses"))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(common.seed ^ 0x5eed);
    for c in constraint_family(common, ctx, samples)? {
        let g = gen_bound_check(&c, ctx, limits)?;
        t.check(g.holds(), "total Fourier mass", format!("{} {:.6} <= {:.6}", c.hash(ctx), g.lhs, g.rhs))?;
        let mut pointwise = true;
        let mut split = true;
        for f in &universe {
            let mut coeffs: Vec<_> = f.coeffs()[..n].iter().rev().copied().collect();
            coeffs.push(ctx.elements().nth(rng.gen_range(0..ctx.q() as usize)).expect("element"));
            let theta = LaurentTail::from_coeffs(coeffs);
            pointwise &= fhat_bound_check(&c, ctx, &theta)?.holds();
            let l = rng.gen_range(1..=n);
            let x = rng.gen_range(0..=n - l);
            split &= window_split_check(&c, ctx, &theta, Window { x, m: l })?.holds();
        }
        t.check(pointwise, "pointwise |fhat| bound", c.hash(ctx))?;
        t.check(split, "window split", c.hash(ctx))?;
        for h in 1..=n / 2 {
            let r = fraction_sum_y(&c, ctx, h, limits)?;
            t.check(
                r.init.holds(),
                "Y_h initial window",
                format!("{} h = {h}: {:.6} <= {:.6}", c.hash(ctx), r.y_h, r.init.rhs),
            )?;
            t.check(
                r.bigi.holds(),
                "Y_h best window",
                format!("{} h = {h}: {:.6} <= {:.6}", c.hash(ctx), r.y_h, r.bigi.rhs),
            )?;
        }
    }
    Ok(())
}

fn verify_lemmas(common: &Common, ctx: &FieldCtx, n: usize, limits: &Limits, t: &mut Tally) -> Result<()> {
    let ring = PolyRing::new(ctx);
    for h in 1..=(n / 2).max(1) {
        limits.check((ctx.q() as u128).pow(2 * h as u32))?;
        let (checked, bad) = zero_run_exhaustive(&ring, h, None)?;
        let detail = match &bad {
            None => format!("deg H = {h}, {checked} fractions"),
            Some((g, den)) => format!("run of zeros in {}/{}", ring.display(g), ring.display(den)),
        };
        t.check(bad.is_none(), "zero runs", detail)?;
        for x in 0..=4 {
            let (mult, _) = shift_multiplicity(&ring, h, x)?;
            let cap = if x == 0 { 1 } else { ctx.q() as usize };
            t.check(mult <= cap, "shift multiplicity", format!("h = {h}, x = {x}: {mult} <= {cap}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let mut worst = None;
    for _ in 0..1000 {
        let size = rng.gen_range(1..=n.max(1));
        let fixed = (0..size)
            .filter(|_| rng.gen_bool(0.5))
            .map(|i| (i, ctx.one()))
            .collect();
        let c = ConstraintSet::prescribed(ctx, size, fixed)?;
        let m = rng.gen_range(1..=size);
        if let Err(e) = c.best_window(m) {
            worst = Some(e.to_string());
            break;
        }
    }
    t.check(worst.is_none(), "window selection", worst.unwrap_or_else(|| "1000 random instances".into()))
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = run(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    code
}
