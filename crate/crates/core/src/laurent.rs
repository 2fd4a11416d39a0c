//! Truncated elements of the unit interval of `F_q((1/T))`, the map `e(·)`,
//! and Dirichlet approximation by fractions `G/H`.
//!
//! Absolute values are kept as exponents: `|θ| = q^{abs_deg(θ)}`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::cyclo::CycInt;
use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FieldElement};
use crate::polyring::{monic_at, Poly, PolyRing};

/// Default number of tail coefficients inspected by [`zero_run_check`]
/// for a denominator of degree `h`.
pub fn default_zero_run_precision(h: usize) -> usize {
    4 * h + 16
}

/// Exponent of an absolute value, with `NegInf` for an element that
/// vanishes to the stored precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AbsDeg {
    NegInf,
    Finite(i64),
}

impl AbsDeg {
    /// `self < q^{-num/2}`, for exponents given in half units.
    pub fn below_half(self, num_half: i64) -> bool {
        match self {
            AbsDeg::NegInf => true,
            AbsDeg::Finite(e) => 2 * e < num_half,
        }
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            AbsDeg::NegInf => None,
            AbsDeg::Finite(e) => Some(e),
        }
    }
}

impl fmt::Display for AbsDeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsDeg::NegInf => write!(f, "-inf"),
            AbsDeg::Finite(e) => write!(f, "{e}"),
        }
    }
}

/// `Σ_{j=1}^{N} θ_{-j} T^{-j}`, stored as `[θ_{-1}, …, θ_{-N}]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentTail {
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for LaurentTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<u32> = self.coeffs.iter().map(|c| c.0).collect();
        write!(f, "Tail{v:?}")
    }
}

impl LaurentTail {
    pub fn zero(prec: usize) -> Self {
        LaurentTail {
            coeffs: vec![FieldElement::ZERO; prec],
        }
    }

    /// From `[θ_{-1}, …, θ_{-N}]`.
    pub fn from_coeffs(coeffs: Vec<FieldElement>) -> Self {
        LaurentTail { coeffs }
    }

    /// `c·T^{-1}`.
    pub fn c_over_t(c: FieldElement, prec: usize) -> Self {
        let mut t = Self::zero(prec.max(1));
        t.coeffs[0] = c;
        t
    }

    /// `θ_F = {T^{-n} F}` for a monic `F` of degree `n`: the coefficients
    /// `f_{n-1}, …, f_0` followed by zeros up to `prec`.
    pub fn frequency(f: &Poly, n: usize, prec: usize) -> Self {
        let mut coeffs = vec![FieldElement::ZERO; prec];
        for (j, slot) in coeffs.iter_mut().enumerate().take(n.min(prec)) {
            *slot = f.coeff(n - 1 - j);
        }
        LaurentTail { coeffs }
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// `θ_{-j}` for `1 ≤ j ≤ prec`.
    pub fn get(&self, j: usize) -> FieldElement {
        assert!(j >= 1 && j <= self.coeffs.len(), "tail index -{j} outside precision {}", self.prec());
        self.coeffs[j - 1]
    }

    pub fn truncate(&self, prec: usize) -> Result<Self> {
        if prec > self.prec() {
            return Err(Error::Precision {
                needed: prec,
                available: self.prec(),
            });
        }
        Ok(LaurentTail {
            coeffs: self.coeffs[..prec].to_vec(),
        })
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        LaurentTail {
            coeffs: (0..n).map(|i| ctx.add(self.coeffs[i], other.coeffs[i])).collect(),
        }
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Self {
        LaurentTail {
            coeffs: self.coeffs.iter().map(|&c| ctx.neg(c)).collect(),
        }
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Self) -> Self {
        self.add(ctx, &other.neg(ctx))
    }

    /// `{T^x θ}`: drops the first `x` coefficients.
    pub fn shift(&self, x: usize) -> Result<Self> {
        if x > self.prec() {
            return Err(Error::Precision {
                needed: x,
                available: self.prec(),
            });
        }
        Ok(LaurentTail {
            coeffs: self.coeffs[x..].to_vec(),
        })
    }

    /// True when the two tails agree on `θ_{-1}, …, θ_{-n}`, i.e. they are
    /// congruent modulo `q^{-n}`.
    pub fn agrees_to(&self, other: &Self, n: usize) -> bool {
        n <= self.prec() && n <= other.prec() && self.coeffs[..n] == other.coeffs[..n]
    }
}

/// `{g/h}` to `prec` coefficients, by long division of the remainder.
pub fn frac_of_rational(ring: &PolyRing, g: &Poly, h: &Poly, prec: usize) -> Result<LaurentTail> {
    let ctx = ring.ctx();
    let d = h
        .degree()
        .ok_or_else(|| Error::InvalidPoly("fraction with zero denominator".into()))?;
    let inv_lead = ctx.inv(h.lead()).expect("nonzero leading coefficient");
    // r has degree < d throughout; r·T has degree ≤ d
    let mut r: Vec<FieldElement> = ring.rem(g, h)?.coeffs().to_vec();
    r.resize(d, FieldElement::ZERO);
    let hc = h.coeffs();
    let mut out = Vec::with_capacity(prec);
    for _ in 0..prec {
        // r ← T·r; digit = (coefficient of T^d) / lead(h); r ← r − digit·h
        let top = if d == 0 { FieldElement::ZERO } else { r[d - 1] };
        for i in (1..d).rev() {
            r[i] = r[i - 1];
        }
        if d > 0 {
            r[0] = FieldElement::ZERO;
        }
        let digit = ctx.mul(top, inv_lead);
        if !digit.is_zero() {
            for i in 0..d {
                r[i] = ctx.sub(r[i], ctx.mul(digit, hc[i]));
            }
        }
        out.push(digit);
    }
    Ok(LaurentTail::from_coeffs(out))
}

/// `e(θ) = ψ(θ_{-1})`.
pub fn e_map(ctx: &FieldCtx, theta: &LaurentTail) -> Result<CycInt> {
    if theta.prec() == 0 {
        return Err(Error::Precision { needed: 1, available: 0 });
    }
    ctx.psi(theta.get(1))
}

/// `{f·θ}` to `want` coefficients; needs `θ.prec ≥ deg f + want`.
pub fn mul_poly_tail(ring: &PolyRing, f: &Poly, theta: &LaurentTail, want: usize) -> Result<LaurentTail> {
    let ctx = ring.ctx();
    let Some(df) = f.degree() else {
        return Ok(LaurentTail::zero(want));
    };
    let needed = df + want;
    if theta.prec() < needed {
        return Err(Error::Precision {
            needed,
            available: theta.prec(),
        });
    }
    // (fθ)_{-j} = Σ_i f_i θ_{-j-i}
    let coeffs = (1..=want)
        .map(|j| {
            f.coeffs()
                .iter()
                .enumerate()
                .fold(FieldElement::ZERO, |acc, (i, &fi)| ctx.add(acc, ctx.mul(fi, theta.get(j + i))))
        })
        .collect();
    Ok(LaurentTail::from_coeffs(coeffs))
}

/// Exponent of `|θ|`: `-j` for the first nonzero `θ_{-j}`.
pub fn abs_deg(theta: &LaurentTail) -> AbsDeg {
    theta
        .coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .map_or(AbsDeg::NegInf, |i| AbsDeg::Finite(-(i as i64) - 1))
}

/// The Dirichlet approximant of a tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Approximant {
    pub g: Poly,
    pub h: Poly,
    /// Exponent of `|{θ − G/H}|`, to the precision of `θ`.
    pub error_deg: AbsDeg,
}

impl Approximant {
    pub fn deg_h(&self) -> usize {
        self.h.degree().expect("denominator is nonzero")
    }
}

/// The unique coprime `(G, H)` with `H` monic, `deg G < deg H ≤ n/2` and
/// `|{θ − G/H}| < q^{-deg H - n/2}`.
///
/// Runs the continued-fraction expansion of `A/T^n`, where `A` carries
/// the first `n` tail coefficients, and keeps the last convergent whose
/// denominator has degree at most `n/2`. The result is checked against the
/// defining inequality before it is returned.
pub fn dirichlet_approx(ring: &PolyRing, theta: &LaurentTail, n: usize) -> Result<Approximant> {
    let ctx = ring.ctx();
    if theta.prec() < n {
        return Err(Error::Precision {
            needed: n,
            available: theta.prec(),
        });
    }
    let half = n / 2;
    // A = Σ_{j=1}^{n} θ_{-j} T^{n-j}, so A/T^n agrees with θ to n places.
    let a = Poly::new((0..n).map(|i| theta.get(n - i)).collect());
    let b = Poly::monomial(n, FieldElement::ONE);

    let (mut p_prev, mut p_cur) = (ring.one(), Poly::zero());
    let (mut q_prev, mut q_cur) = (Poly::zero(), ring.one());
    let (mut best_p, mut best_q) = (p_cur.clone(), q_cur.clone());
    // a_0 = A div T^n = 0; continue with the expansion of T^n / A
    let (mut x, mut y) = (b, a);
    while !y.is_zero() {
        let (quo, r) = ring.div_rem(&x, &y)?;
        let p_next = ring.add(&ring.mul(&quo, &p_cur), &p_prev);
        let q_next = ring.add(&ring.mul(&quo, &q_cur), &q_prev);
        if q_next.degree().expect("nonzero") > half {
            break;
        }
        best_p = p_next.clone();
        best_q = q_next.clone();
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
        x = std::mem::replace(&mut y, r);
    }

    let inv = ctx.inv(best_q.lead()).expect("nonzero denominator");
    let g = ring.scale(&best_p, inv);
    let h = ring.scale(&best_q, inv);
    let deg_h = h.degree().expect("nonzero denominator");

    let approx = frac_of_rational(ring, &g, &h, theta.prec())?;
    let error_deg = abs_deg(&theta.sub(ctx, &approx));
    let coprime = ring.gcd(&g, &h)?.is_one();
    let smaller = g.degree().is_none_or(|dg| dg < deg_h);
    if !coprime || !smaller || deg_h > half || !error_deg.below_half(-2 * deg_h as i64 - n as i64) {
        return Err(Error::Internal(format!(
            "Dirichlet approximant ({g:?}, {h:?}) fails its defining inequality for {theta:?}, n = {n}"
        )));
    }
    Ok(Approximant { g, h, error_deg })
}

/// Checks that `{g/h}` has no run of `window = deg h` consecutive zero
/// coefficients among its first `prec` coefficients (default
/// `4·deg h + 16`).
///
/// Preconditions, reported as distinct errors: `h` monic, squarefree, not
/// `1` or `T`; `gcd(g, h) = 1`; `window = deg h`.
pub fn zero_run_check(ring: &PolyRing, g: &Poly, h: &Poly, window: usize, prec: Option<usize>) -> Result<bool> {
    if h.is_zero() || !ring.is_monic(h) {
        return Err(Error::Precondition("denominator must be monic".into()));
    }
    if h.is_one() || h.is_t() {
        return Err(Error::Precondition("denominator 1 and T are excluded".into()));
    }
    if !ring.is_squarefree(h)? {
        return Err(Error::Precondition("denominator is not squarefree".into()));
    }
    if !ring.gcd(g, h)?.is_one() {
        return Err(Error::Precondition("numerator and denominator are not coprime".into()));
    }
    let dh = h.degree().expect("nonzero");
    if window != dh {
        return Err(Error::Precondition(format!("window {window} differs from deg h = {dh}")));
    }
    let prec = prec.unwrap_or_else(|| default_zero_run_precision(dh));
    let tail = frac_of_rational(ring, g, h, prec)?;
    let mut run = 0;
    for c in tail.coeffs() {
        if c.is_zero() {
            run += 1;
            if run >= window {
                return Ok(false);
            }
        } else {
            run = 0;
        }
    }
    Ok(true)
}

/// Orders tails lexicographically, for deterministic output.
pub fn cmp_tails(a: &LaurentTail, b: &LaurentTail) -> Ordering {
    a.coeffs().cmp(b.coeffs())
}

/// Reduced fractions `(G, H)` with `H ∉ {1, T}` monic squarefree of degree
/// `h` and `G` coprime to `H` of smaller degree, in universe order of `H`
/// then `G`.
pub fn reduced_fractions(ring: &PolyRing, h: usize) -> Result<Vec<(Poly, Poly)>> {
    let ctx = ring.ctx();
    let size = (ctx.q() as u128)
        .checked_pow(h as u32)
        .filter(|&s| s <= u32::MAX as u128)
        .ok_or_else(|| Error::Precondition(format!("too many fractions of degree {h}")))?;
    let mut out = Vec::new();
    for hi in 0..size {
        let den = monic_at(ctx, h, hi);
        if den.is_one() || den.is_t() || !ring.is_squarefree(&den)? {
            continue;
        }
        for gi in 1..size {
            let num = Poly::new(monic_at(ctx, h, gi).coeffs()[..h].to_vec());
            if ring.gcd(&num, &den)?.is_one() {
                out.push((num, den.clone()));
            }
        }
    }
    Ok(out)
}

/// Runs [`zero_run_check`] on every reduced fraction of degree `h` and
/// returns the first failing pair, if any, with the number checked.
pub fn zero_run_exhaustive(ring: &PolyRing, h: usize, prec: Option<usize>) -> Result<(usize, Option<(Poly, Poly)>)> {
    let fractions = reduced_fractions(ring, h)?;
    for (g, den) in &fractions {
        if !zero_run_check(ring, g, den, h, prec)? {
            return Ok((fractions.len(), Some((g.clone(), den.clone()))));
        }
    }
    Ok((fractions.len(), None))
}

/// The largest number of reduced fractions `G/H` of degree `h` whose
/// shifts `{T^x G/H}` agree on their first `2h` coefficients, together
/// with one such common prefix.
pub fn shift_multiplicity(ring: &PolyRing, h: usize, x: usize) -> Result<(usize, LaurentTail)> {
    let tx = Poly::monomial(x, FieldElement::ONE);
    let mut classes: HashMap<LaurentTail, usize> = HashMap::new();
    for (g, den) in reduced_fractions(ring, h)? {
        let shifted = ring.rem(&ring.mul(&tx, &g), &den)?;
        *classes.entry(frac_of_rational(ring, &shifted, &den, 2 * h)?).or_default() += 1;
    }
    Ok(classes
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then_with(|| cmp_tails(&b.0, &a.0)))
        .map(|(t, c)| (c, t))
        .unwrap_or((0, LaurentTail::zero(2 * h))))
}
