//! Polynomials over `F_q`: arithmetic, gcd, squarefree and irreducibility
//! tests, enumeration of the monic universe `M_n`, and `π_q(n)`.

use std::fmt;
use std::ops::Range;

use crate::budget::Limits;
use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FieldElement};

/// A dense polynomial, `coeffs[i]` being the coefficient of `T^i`.
///
/// There are never zero coefficients above the degree; the zero polynomial
/// has no coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::new(vec![c])
    }

    /// `c · T^d`.
    pub fn monomial(d: usize, c: FieldElement) -> Self {
        let mut coeffs = vec![FieldElement::ZERO; d + 1];
        coeffs[d] = c;
        Self::new(coeffs)
    }

    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_indices(indices: &[u32]) -> Self {
        Self::new(indices.iter().map(|&i| FieldElement(i)).collect())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    /// True for the polynomial `T`.
    pub fn is_t(&self) -> bool {
        self.coeffs == [FieldElement::ZERO, FieldElement::ONE]
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [FieldElement::ONE]
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<u32> = self.coeffs.iter().map(|c| c.0).collect();
        write!(f, "Poly{v:?}")
    }
}

/// Polynomial arithmetic over a fixed field.
#[derive(Clone, Copy)]
pub struct PolyRing<'a> {
    ctx: &'a FieldCtx,
}

impl<'a> PolyRing<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Self {
        PolyRing { ctx }
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    /// The polynomial `T`.
    pub fn t(&self) -> Poly {
        Poly::monomial(1, FieldElement::ONE)
    }

    pub fn one(&self) -> Poly {
        Poly::constant(FieldElement::ONE)
    }

    pub fn is_monic(&self, f: &Poly) -> bool {
        f.lead() == FieldElement::ONE
    }

    pub fn check(&self, f: &Poly) -> Result<()> {
        for &c in f.coeffs() {
            self.ctx.check(c)?;
        }
        Ok(())
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        Poly::new((0..n).map(|i| self.ctx.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        Poly::new((0..n).map(|i| self.ctx.sub(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly::new(a.coeffs.iter().map(|&c| self.ctx.neg(c)).collect())
    }

    pub fn scale(&self, a: &Poly, c: FieldElement) -> Poly {
        Poly::new(a.coeffs.iter().map(|&x| self.ctx.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElement::ZERO; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = self.ctx.add(out[i + j], self.ctx.mul(x, y));
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder; fails on a zero divisor.
    pub fn div_rem(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        let db = b
            .degree()
            .ok_or_else(|| Error::InvalidPoly("division by the zero polynomial".into()))?;
        let inv_lead = self.ctx.inv(b.lead()).expect("nonzero leading coefficient");
        let mut rem = a.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(), a.clone()));
        }
        let mut quot = vec![FieldElement::ZERO; rem.len() - db];
        for d in (db..rem.len()).rev() {
            let c = rem[d];
            if c.is_zero() {
                continue;
            }
            let factor = self.ctx.mul(c, inv_lead);
            quot[d - db] = factor;
            for (i, &bc) in b.coeffs.iter().enumerate() {
                let t = d - db + i;
                rem[t] = self.ctx.sub(rem[t], self.ctx.mul(factor, bc));
            }
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(self.div_rem(a, b)?.1)
    }

    /// Scales a nonzero polynomial to leading coefficient one.
    pub fn make_monic(&self, a: &Poly) -> Poly {
        match self.ctx.inv(a.lead()) {
            Some(i) => self.scale(a, i),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor; fails when both inputs are zero.
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidPoly("gcd(0, 0) is undefined".into()));
        }
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y)?;
            x = y;
            y = r;
        }
        Ok(self.make_monic(&x))
    }

    /// `(g, s, t)` with `s·a + t·b = g = gcd(a, b)` monic.
    pub fn ext_gcd(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidPoly("gcd(0, 0) is undefined".into()));
        }
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), self.one());
        while !r1.is_zero() {
            let (quo, r) = self.div_rem(&r0, &r1)?;
            let s = self.sub(&s0, &self.mul(&quo, &s1));
            let t = self.sub(&t0, &self.mul(&quo, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = self.ctx.inv(r0.lead()).expect("nonzero gcd");
        Ok((self.scale(&r0, inv), self.scale(&s0, inv), self.scale(&t0, inv)))
    }

    pub fn derivative(&self, a: &Poly) -> Poly {
        Poly::new(
            a.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| self.ctx.mul(self.ctx.from_int(i as i64), c))
                .collect(),
        )
    }

    /// True when `a` is `b^p` for some polynomial `b`, i.e. only exponents
    /// divisible by `p` carry nonzero coefficients. Over a finite field
    /// every coefficient has a `p`-th root, so this is exactly the case of
    /// a vanishing derivative.
    pub fn is_pth_power(&self, a: &Poly) -> bool {
        let p = self.ctx.p() as usize;
        a.coeffs.iter().enumerate().all(|(i, c)| c.is_zero() || i % p == 0)
    }

    pub fn is_squarefree(&self, h: &Poly) -> Result<bool> {
        let d = h
            .degree()
            .ok_or_else(|| Error::InvalidPoly("squarefreeness of the zero polynomial".into()))?;
        if d == 0 {
            return Ok(true);
        }
        if self.is_pth_power(h) {
            return Ok(false);
        }
        let g = self.gcd(h, &self.derivative(h))?;
        Ok(g.degree() == Some(0))
    }

    pub fn mul_mod(&self, a: &Poly, b: &Poly, m: &Poly) -> Result<Poly> {
        self.rem(&self.mul(a, b), m)
    }

    pub fn pow_mod(&self, base: &Poly, mut e: u64, m: &Poly) -> Result<Poly> {
        let mut acc = self.rem(&self.one(), m)?;
        let mut b = self.rem(base, m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_mod(&acc, &b, m)?;
            }
            e >>= 1;
            if e > 0 {
                b = self.mul_mod(&b, &b, m)?;
            }
        }
        Ok(acc)
    }

    /// Rabin's test: `f` of degree `n` is irreducible iff
    /// `T^{q^n} ≡ T (mod f)` and `gcd(T^{q^{n/r}} − T, f) = 1` for every
    /// prime `r | n`.
    pub fn is_irreducible(&self, f: &Poly) -> Result<bool> {
        let n = match f.degree() {
            None | Some(0) => {
                return Err(Error::InvalidPoly("irreducibility of a constant polynomial".into()))
            }
            Some(n) => n,
        };
        if n == 1 {
            return Ok(true);
        }
        let f = self.make_monic(f);
        if f.coeff(0).is_zero() {
            return Ok(false);
        }
        let q = self.ctx.q() as u64;
        let t = self.rem(&self.t(), &f)?;
        let divisors: Vec<usize> = prime_factors(n as u64).into_iter().map(|r| n / r as usize).collect();
        let mut frob = t.clone();
        for d in 1..=n {
            frob = self.pow_mod(&frob, q, &f)?;
            if divisors.contains(&d) {
                let g = self.gcd(&self.sub(&frob, &t), &f)?;
                if g.degree() != Some(0) {
                    return Ok(false);
                }
            }
        }
        Ok(frob == t)
    }

    /// The first monic irreducible of degree `k` in universe order.
    pub fn first_irreducible(&self, k: usize) -> Option<Poly> {
        let size = (self.ctx.q() as u128).checked_pow(k as u32)?;
        (0..size)
            .map(|i| monic_at(self.ctx, k, i))
            .find(|f| self.is_irreducible(f).unwrap_or(false))
    }

    /// Parses a polynomial in coefficient-list form (`"c0,c1,…,cn"`,
    /// elements per the field's text encoding) or, over prime fields, in
    /// display form such as `"T^3+2*T+1"`.
    pub fn parse(&self, s: &str) -> Result<Poly> {
        let s = s.trim();
        if s.contains('T') || s.contains('t') {
            if self.ctx.k() != 1 {
                return Err(Error::Parse("display form is only supported over prime fields".into()));
            }
            return self.parse_display(s);
        }
        let v: serde_json::Value =
            serde_json::from_str(&format!("[{s}]")).map_err(|e| Error::Parse(format!("polynomial {s:?}: {e}")))?;
        let items = v.as_array().expect("wrapped in brackets");
        let coeffs = items
            .iter()
            .map(|c| self.ctx.element_from_json(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(coeffs))
    }

    fn parse_display(&self, s: &str) -> Result<Poly> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut acc = Poly::zero();
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !current.is_empty() && !current.ends_with('^') {
                terms.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            } else if (ch == '+' || ch == '-') && current.is_empty() {
                negative ^= ch == '-';
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            return Err(Error::Parse(format!("polynomial {s:?} ends with an operator")));
        }
        terms.push((negative, current));
        let bad = |t: &str| Error::Parse(format!("cannot parse term {t:?} in {s:?}"));
        for (neg, term) in terms {
            let term_l = term.replace('t', "T");
            let (coef, deg) = match term_l.find('T') {
                None => (term_l.parse::<i64>().map_err(|_| bad(&term))?, 0usize),
                Some(pos) => {
                    let head = term_l[..pos].trim_end_matches('*');
                    let coef = if head.is_empty() {
                        1
                    } else {
                        head.parse::<i64>().map_err(|_| bad(&term))?
                    };
                    let tail = &term_l[pos + 1..];
                    let deg = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .and_then(|e| e.parse::<usize>().ok())
                            .ok_or_else(|| bad(&term))?
                    };
                    (coef, deg)
                }
            };
            let c = self.ctx.from_int(if neg { -coef } else { coef });
            acc = self.add(&acc, &Poly::monomial(deg, c));
        }
        Ok(acc)
    }

    /// Coefficient-list text form, constant term first.
    pub fn format(&self, f: &Poly) -> String {
        if f.is_zero() {
            return self.ctx.element_to_text(FieldElement::ZERO);
        }
        f.coeffs
            .iter()
            .map(|&c| self.ctx.element_to_text(c))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Human-readable form such as `T^3+2*T+1`. Extension-field
    /// coefficients are shown by index in brackets.
    pub fn display(&self, f: &Poly) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let coef = |c: FieldElement| {
            if self.ctx.k() == 1 {
                c.0.to_string()
            } else {
                format!("[{}]", c.0)
            }
        };
        let mut parts = Vec::new();
        for (i, &c) in f.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = match (i, c == FieldElement::ONE) {
                (0, _) => coef(c),
                (1, true) => "T".into(),
                (1, false) => format!("{}*T", coef(c)),
                (_, true) => format!("T^{i}"),
                (_, false) => format!("{}*T^{i}", coef(c)),
            };
            parts.push(s);
        }
        parts.join("+")
    }
}

/// Distinct prime factors of `n`.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The Möbius function.
pub fn mobius(n: u64) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `π_q(n) = (1/n) Σ_{d|n} μ(d) q^{n/d}`, the number of monic irreducibles
/// of degree `n`.
pub fn prime_count(ctx: &FieldCtx, n: i64) -> Result<u128> {
    if n <= 0 {
        return Err(Error::Precondition(format!("π_q(n) needs n >= 1, got {n}")));
    }
    let n = n as u64;
    let q = ctx.q() as i128;
    let overflow = || Error::Config(format!("π_{q}({n}) overflows 128-bit arithmetic"));
    let mut total: i128 = 0;
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let mu = mobius(d) as i128;
        if mu == 0 {
            continue;
        }
        let term = q.checked_pow((n / d) as u32).ok_or_else(overflow)?;
        total = total.checked_add(mu * term).ok_or_else(overflow)?;
    }
    debug_assert_eq!(total % n as i128, 0);
    Ok((total / n as i128) as u128)
}

/// The monic polynomial of degree `n` at position `index` of the universe:
/// the base-`q` digits of `index` are the coefficients `b_0, …, b_{n-1}`,
/// `b_0` varying fastest.
pub fn monic_at(ctx: &FieldCtx, n: usize, index: u128) -> Poly {
    let mut coeffs = vec![FieldElement::ZERO; n + 1];
    fill_digits(ctx.q(), index, &mut coeffs[..n]);
    coeffs[n] = FieldElement::ONE;
    Poly::new(coeffs)
}

fn fill_digits(q: u32, mut index: u128, out: &mut [FieldElement]) {
    for slot in out.iter_mut() {
        *slot = FieldElement((index % q as u128) as u32);
        index /= q as u128;
    }
}

/// The `q^n` monic polynomials of degree `n`, in odometer order.
#[derive(Clone, Copy)]
pub struct MonicUniverse<'a> {
    ctx: &'a FieldCtx,
    n: usize,
    size: u128,
}

impl<'a> MonicUniverse<'a> {
    pub fn new(ctx: &'a FieldCtx, n: usize, limits: &Limits) -> Result<Self> {
        let size = (ctx.q() as u128)
            .checked_pow(n as u32)
            .ok_or(Error::BudgetExceeded {
                size: u128::MAX,
                limit: limits.max_universe,
            })?;
        limits.check(size)?;
        Ok(MonicUniverse { ctx, n, size })
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> u128 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, index: u128) -> Poly {
        monic_at(self.ctx, self.n, index)
    }

    /// Writes the non-leading coefficients `b_0..b_{n-1}` of the element at
    /// `index` into `buf`.
    pub fn fill(&self, index: u128, buf: &mut [FieldElement]) {
        fill_digits(self.ctx.q(), index, &mut buf[..self.n]);
    }

    pub fn iter(&self) -> impl Iterator<Item = Poly> + 'a {
        let (ctx, n) = (self.ctx, self.n);
        (0..self.size).map(move |i| monic_at(ctx, n, i))
    }

    /// Index range of slice `s` out of `count`. Slices are contiguous in
    /// odometer order, so each one fixes a range of the leading
    /// non-monic coefficients.
    pub fn shard_range(&self, s: usize, count: usize) -> Range<u128> {
        assert!(count > 0 && s < count, "shard {s} out of {count}");
        let lo = self.size * s as u128 / count as u128;
        let hi = self.size * (s as u128 + 1) / count as u128;
        lo..hi
    }

    pub fn shard(&self, s: usize, count: usize) -> impl Iterator<Item = Poly> + 'a {
        let (ctx, n) = (self.ctx, self.n);
        self.shard_range(s, count).map(move |i| monic_at(ctx, n, i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    #[test]
    fn gcd_examples() {
        let ctx = f(2);
        let r = PolyRing::new(&ctx);
        let a = r.parse("T^2+1").unwrap();
        let b = r.parse("T+1").unwrap();
        assert_eq!(r.gcd(&a, &b).unwrap(), b);
        let ctx3 = f(3);
        let r3 = PolyRing::new(&ctx3);
        let p = r3.parse("2*T^2+1").unwrap();
        assert_eq!(r3.gcd(&p, &Poly::zero()).unwrap(), r3.make_monic(&p));
        assert!(r3.gcd(&Poly::zero(), &Poly::zero()).is_err());
    }

    #[test]
    fn ext_gcd_bezout() {
        let ctx = f(5);
        let r = PolyRing::new(&ctx);
        let a = r.parse("T^3+2*T+1").unwrap();
        let b = r.parse("T^2+4").unwrap();
        let (g, s, t) = r.ext_gcd(&a, &b).unwrap();
        assert_eq!(r.add(&r.mul(&s, &a), &r.mul(&t, &b)), g);
        assert_eq!(g, r.gcd(&a, &b).unwrap());
    }

    #[test]
    fn squarefree_examples() {
        let ctx2 = f(2);
        let r2 = PolyRing::new(&ctx2);
        assert!(r2.is_squarefree(&r2.parse("T^2+T").unwrap()).unwrap());
        let ctx3 = f(3);
        let r3 = PolyRing::new(&ctx3);
        assert!(!r3.is_squarefree(&r3.parse("T^2+2*T+1").unwrap()).unwrap());
        // T^3 - 2 = (T - 2)^3 over F_3: derivative vanishes
        let cube = r3.parse("T^3-2").unwrap();
        assert!(r3.derivative(&cube).is_zero());
        assert!(r3.is_pth_power(&cube));
        assert!(!r3.is_squarefree(&cube).unwrap());
        let lin = r3.parse("T-2").unwrap();
        assert_eq!(r3.mul(&lin, &r3.mul(&lin, &lin)), cube);
        assert!(r3.is_squarefree(&Poly::zero()).is_err());
    }

    #[test]
    fn irreducible_examples() {
        let ctx = f(2);
        let r = PolyRing::new(&ctx);
        assert!(r.is_irreducible(&r.parse("T^2+T+1").unwrap()).unwrap());
        assert!(!r.is_irreducible(&r.parse("T^2+1").unwrap()).unwrap());
        assert!(r.is_irreducible(&r.parse("T").unwrap()).unwrap());
        assert!(r.is_irreducible(&r.parse("T+1").unwrap()).unwrap());
        assert!(r.is_irreducible(&r.parse("1").unwrap()).is_err());
    }

    #[test]
    fn prime_count_examples() {
        assert_eq!(prime_count(&f(2), 2).unwrap(), 1);
        assert_eq!(prime_count(&f(3), 2).unwrap(), 3);
        for p in [2, 3, 5, 7] {
            assert_eq!(prime_count(&f(p), 1).unwrap(), p as u128);
        }
        assert!(prime_count(&f(2), 0).is_err());
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(30), -1);
    }

    #[test]
    fn universe_order_and_shards() {
        let ctx = f(2);
        let r = PolyRing::new(&ctx);
        let u = MonicUniverse::new(&ctx, 2, &Limits::new(100)).unwrap();
        let all: Vec<String> = u.iter().map(|p| r.display(&p)).collect();
        assert_eq!(all, ["T^2", "T^2+1", "T^2+T", "T^2+T+1"]);

        let ctx3 = f(3);
        let u3 = MonicUniverse::new(&ctx3, 4, &Limits::new(100)).unwrap();
        assert_eq!(u3.iter().count(), 81);
        let mut seen: Vec<Poly> = (0..7).flat_map(|s| u3.shard(s, 7)).collect();
        assert_eq!(seen.len(), 81);
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 81);

        assert!(matches!(
            MonicUniverse::new(&ctx3, 5, &Limits::new(100)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn parse_and_format() {
        let ctx = f(5);
        let r = PolyRing::new(&ctx);
        let p = r.parse("T^3+2*T+1").unwrap();
        assert_eq!(r.format(&p), "1,2,0,1");
        assert_eq!(r.parse("1,2,0,1").unwrap(), p);
        assert_eq!(r.display(&p), "T^3+2*T+1");
        assert_eq!(r.parse("T^2 - 1").unwrap(), r.parse("4,0,1").unwrap());
        assert_eq!(r.parse("-T").unwrap(), r.parse("0,4").unwrap());
        assert!(r.parse("T^").is_err());
        assert!(r.parse("1,7").is_err());

        let ctx9 = FieldCtx::from_order(9).unwrap();
        let r9 = PolyRing::new(&ctx9);
        let g = r9.parse("[1,0],[0,1],[1,0]").unwrap();
        assert_eq!(g.degree(), Some(2));
        assert_eq!(r9.format(&g), "[1,0],[0,1],[1,0]");
        assert!(r9.parse("T+1").is_err());
    }
}
