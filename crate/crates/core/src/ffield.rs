//! Arithmetic in `F_q = F_{p^k}`, the absolute trace, and the additive
//! character `ψ(a) = ζ_p^{Tr(a)}` valued in exact cyclotomic integers.
//!
//! Elements are stored as their index `Σ c_i p^i`, where `(c_0, …, c_{k-1})`
//! are the coordinates in the power basis of the defining modulus. The
//! index order is the fixed enumeration order of the field.

use std::fmt;

use serde_json::Value;

use crate::cyclo::CycInt;
use crate::error::{Error, Result};
use crate::polyring::{Poly, PolyRing};

/// Largest characteristic accepted by [`FieldCtx`].
pub const MAX_CHARACTERISTIC: u32 = 97;

/// Largest field order accepted by [`FieldCtx`].
pub const MAX_ORDER: u64 = 1 << 20;

// Above this order the addition and multiplication tables are not built.
const TABLE_LIMIT: u32 = 1024;

/// An element of `F_q`, identified by its index in `0..q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field `F_q` together with its defining data and lookup tables.
///
/// Immutable after construction and cheap to share behind an `Arc`.
pub struct FieldCtx {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    add_table: Option<Vec<u32>>,
    mul_table: Option<Vec<u32>>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    trace: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldCtx {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// The field of order `q`, which must be a prime power, with the
    /// default modulus.
    pub fn from_order(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidField(format!("order {q} is not a prime power")));
        }
        let p = (2..=q)
            .find(|d| q.is_multiple_of(*d))
            .expect("q >= 2 has a smallest divisor");
        let mut k = 0;
        let mut rest = q;
        while rest.is_multiple_of(p) {
            rest /= p;
            k += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidField(format!("order {q} is not a prime power")));
        }
        let p = u32::try_from(p).map_err(|_| Error::InvalidField(format!("characteristic {p} too large")))?;
        Self::new(p, k, None)
    }

    /// `F_{p^k}` defined by `modulus`, a monic irreducible polynomial over
    /// `F_p` of degree `k` given as coefficients (constant first). With
    /// `None` the lexicographically first monic irreducible of degree `k`
    /// is used.
    pub fn new(p: u32, k: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p > MAX_CHARACTERISTIC {
            return Err(Error::InvalidField(format!(
                "characteristic {p} exceeds the supported maximum {MAX_CHARACTERISTIC}"
            )));
        }
        if k == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        let q = (p as u64)
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::InvalidField(format!("{p}^{k} exceeds the supported order {MAX_ORDER}")))?
            as u32;

        let modulus = if k == 1 {
            match modulus {
                Some(m) if m.len() == 2 && m[1] == 1 => m,
                Some(m) if m.len() != 2 => {
                    return Err(Error::InvalidField(format!(
                        "modulus {m:?} has degree {} but k = 1",
                        m.len().saturating_sub(1)
                    )))
                }
                Some(m) => return Err(Error::InvalidField(format!("modulus {m:?} is not monic"))),
                None => vec![0, 1],
            }
        } else {
            let base = Self::prime(p)?;
            let ring = PolyRing::new(&base);
            match modulus {
                Some(m) => {
                    if m.iter().any(|&c| c >= p) {
                        return Err(Error::InvalidField(format!("modulus {m:?} has coefficients outside F_{p}")));
                    }
                    let poly = Poly::from_indices(&m);
                    if poly.degree() != Some(k as usize) || !ring.is_monic(&poly) {
                        return Err(Error::InvalidField(format!("modulus {m:?} is not monic of degree {k}")));
                    }
                    if !ring.is_irreducible(&poly)? {
                        return Err(Error::InvalidField(format!("modulus {m:?} is reducible over F_{p}")));
                    }
                    m
                }
                None => ring
                    .first_irreducible(k as usize)
                    .map(|f| f.coeffs().iter().map(|c| c.0).collect())
                    .ok_or_else(|| Error::Internal(format!("no irreducible of degree {k} over F_{p}")))?,
            }
        };

        let mut ctx = FieldCtx {
            p,
            k,
            q,
            modulus,
            add_table: None,
            mul_table: None,
            neg: Vec::new(),
            inv: Vec::new(),
            trace: Vec::new(),
        };
        ctx.neg = (0..q).map(|x| ctx.neg_slow(x)).collect();
        if q <= TABLE_LIMIT {
            let mut add = Vec::with_capacity((q * q) as usize);
            let mut mul = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    add.push(ctx.add_slow(a, b));
                    mul.push(ctx.mul_slow(a, b));
                }
            }
            ctx.add_table = Some(add);
            ctx.mul_table = Some(mul);
        }
        ctx.inv = (0..q).map(|x| ctx.inv_search(x)).collect();
        ctx.trace = (0..q).map(|x| ctx.trace_slow(x)).collect();
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining modulus over `F_p`, constant first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Checks that `x` is an element of this field.
    pub fn check(&self, x: FieldElement) -> Result<FieldElement> {
        if x.0 < self.q {
            Ok(x)
        } else {
            Err(Error::ContextMismatch {
                value: x.0,
                q: self.q as u64,
            })
        }
    }

    /// The element with the given power-basis coordinates (constant first).
    pub fn from_coords(&self, coords: &[u32]) -> Result<FieldElement> {
        if coords.len() != self.k as usize {
            return Err(Error::Parse(format!(
                "expected {} coordinates, got {}",
                self.k,
                coords.len()
            )));
        }
        let mut idx = 0u32;
        for &c in coords.iter().rev() {
            if c >= self.p {
                return Err(Error::Parse(format!("coordinate {c} is not a residue mod {}", self.p)));
            }
            idx = idx * self.p + c;
        }
        Ok(FieldElement(idx))
    }

    pub fn coords(&self, x: FieldElement) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.k as usize);
        let mut idx = x.0;
        for _ in 0..self.k {
            v.push(idx % self.p);
            idx /= self.p;
        }
        v
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.add_table {
            Some(t) => FieldElement(t[(a.0 * self.q + b.0) as usize]),
            None => FieldElement(self.add_slow(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.mul_table {
            Some(t) => FieldElement(t[(a.0 * self.q + b.0) as usize]),
            None => FieldElement(self.mul_slow(a.0, b.0)),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            None
        } else {
            Some(FieldElement(self.inv[a.0 as usize]))
        }
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `Tr_{F_q/F_p}(x) = x + x^p + … + x^{p^{k-1}}`, as a residue mod `p`.
    pub fn trace(&self, x: FieldElement) -> Result<u32> {
        self.check(x)?;
        Ok(self.trace[x.0 as usize])
    }

    /// Table lookup of the trace without the membership check.
    #[inline]
    pub fn trace_unchecked(&self, x: FieldElement) -> u32 {
        self.trace[x.0 as usize]
    }

    /// `ψ(x) = exp(2πi·Tr(x)/p)` as the canonical `ζ_p^{Tr(x)}`.
    pub fn psi(&self, x: FieldElement) -> Result<CycInt> {
        Ok(CycInt::zeta_pow(self.p, self.trace(x)? as i64))
    }

    /// All `q` elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q).map(FieldElement)
    }

    /// JSON encoding: an integer when `k = 1`, otherwise the coordinate
    /// array (constant term first).
    pub fn element_to_json(&self, x: FieldElement) -> Value {
        if self.k == 1 {
            Value::from(x.0)
        } else {
            Value::from(self.coords(x))
        }
    }

    pub fn element_from_json(&self, v: &Value) -> Result<FieldElement> {
        match v {
            Value::Number(n) if self.k == 1 => {
                let n = n
                    .as_u64()
                    .ok_or_else(|| Error::Parse(format!("field element {n} is not a non-negative integer")))?;
                if n >= self.p as u64 {
                    return Err(Error::Parse(format!("field element {n} is not in 0..{}", self.p)));
                }
                Ok(FieldElement(n as u32))
            }
            Value::Array(items) if self.k > 1 => {
                let coords = items
                    .iter()
                    .map(|c| {
                        c.as_u64()
                            .and_then(|c| u32::try_from(c).ok())
                            .ok_or_else(|| Error::Parse(format!("bad coordinate {c}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                self.from_coords(&coords)
            }
            other => Err(Error::Parse(format!(
                "field element {other} does not match the encoding for F_{}",
                self.q
            ))),
        }
    }

    /// Text form: same as the JSON encoding, rendered compactly.
    pub fn element_to_text(&self, x: FieldElement) -> String {
        self.element_to_json(x).to_string()
    }

    pub fn element_from_text(&self, s: &str) -> Result<FieldElement> {
        let v: Value = serde_json::from_str(s.trim()).map_err(|e| Error::Parse(format!("field element {s:?}: {e}")))?;
        self.element_from_json(&v)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let mut a = a;
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * scale;
            a /= self.p;
            scale *= self.p;
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let k = self.k as usize;
        let ca = self.coords(FieldElement(a));
        let cb = self.coords(FieldElement(b));
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in ca.iter().enumerate() {
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // reduce by the monic modulus from the top down
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let t = d - k + i;
                prod[t] = (prod[t] + (p - c) * m as u64) % p;
            }
        }
        let coords: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        self.from_coords(&coords).expect("reduced coordinates are in range").0
    }

    fn inv_search(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        // a^{q-2}
        self.pow(FieldElement(a), self.q as u64 - 2).0
    }

    fn trace_slow(&self, x: u32) -> u32 {
        let mut acc = FieldElement::ZERO;
        let mut term = FieldElement(x);
        for _ in 0..self.k {
            acc = self.add(acc, term);
            term = self.pow(term, self.p as u64);
        }
        debug_assert!(acc.0 < self.p, "trace must land in the prime field");
        acc.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(FieldCtx::prime(4).is_err());
        assert!(FieldCtx::prime(101).is_err());
        assert!(FieldCtx::new(3, 0, None).is_err());
        assert!(FieldCtx::from_order(12).is_err());
        // T^2 + 1 = (T + 1)^2 over F_2
        assert!(FieldCtx::new(2, 2, Some(vec![1, 0, 1])).is_err());
    }

    #[test]
    fn default_moduli() {
        assert_eq!(FieldCtx::new(2, 2, None).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FieldCtx::new(3, 2, None).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FieldCtx::new(2, 3, None).unwrap().modulus(), &[1, 1, 0, 1]);
        let f = FieldCtx::from_order(9).unwrap();
        assert_eq!((f.p(), f.k(), f.q()), (3, 2, 9));
    }

    #[test]
    fn trace_examples() {
        let f = FieldCtx::prime(7).unwrap();
        for a in f.elements() {
            assert_eq!(f.trace(a).unwrap(), a.0);
        }
        let f4 = FieldCtx::new(2, 2, Some(vec![1, 1, 1])).unwrap();
        assert_eq!(f4.trace(FieldElement::ZERO).unwrap(), 0);
        // θ = T mod (T²+T+1); θ² = θ + 1, so θ + θ² = 2θ + 1 = 1.
        let theta = f4.from_coords(&[0, 1]).unwrap();
        assert_eq!(f4.mul(theta, theta), f4.from_coords(&[1, 1]).unwrap());
        assert_eq!(f4.trace(theta).unwrap(), 1);
        assert!(matches!(f4.trace(FieldElement(4)), Err(Error::ContextMismatch { .. })));
    }

    #[test]
    fn psi_examples() {
        let f = FieldCtx::prime(3).unwrap();
        assert_eq!(f.psi(FieldElement::ZERO).unwrap(), CycInt::one(3));
        let prod = &f.psi(FieldElement(1)).unwrap() * &f.psi(FieldElement(2)).unwrap();
        assert_eq!(prod, CycInt::one(3));
    }

    fn fields() -> Vec<FieldCtx> {
        [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (2, 4), (3, 3), (3, 4), (7, 1)]
            .into_iter()
            .map(|(p, k)| FieldCtx::new(p, k, None).unwrap())
            .collect()
    }

    #[test]
    fn field_axioms_hold() {
        for f in fields() {
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
                if let Some(i) = f.inv(a) {
                    assert_eq!(f.mul(a, i), FieldElement::ONE, "q={} a={a}", f.q());
                }
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.trace(f.add(a, b)).unwrap(), (f.trace(a).unwrap() + f.trace(b).unwrap()) % f.p());
                }
            }
        }
    }

    #[test]
    fn psi_is_additive_and_orthogonal() {
        for f in fields() {
            for a in f.elements() {
                for b in f.elements() {
                    let lhs = f.psi(f.add(a, b)).unwrap();
                    let rhs = &f.psi(a).unwrap() * &f.psi(b).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
            for b in f.elements() {
                let mut s = CycInt::zero(f.p());
                for a in f.elements() {
                    s += &f.psi(f.mul(a, b)).unwrap();
                }
                let want = if b.is_zero() { f.q() as i128 } else { 0 };
                assert_eq!(s.as_integer(), Some(want), "q={} b={b}", f.q());
            }
        }
    }

    #[test]
    fn trace_is_surjective() {
        for f in fields().into_iter().filter(|f| f.q() <= 81) {
            let mut hit = vec![false; f.p() as usize];
            for a in f.elements() {
                hit[f.trace(a).unwrap() as usize] = true;
            }
            assert!(hit.iter().all(|&h| h), "q={}", f.q());
        }
    }

    #[test]
    fn enumeration_order() {
        let f2 = FieldCtx::prime(2).unwrap();
        assert_eq!(f2.elements().collect::<Vec<_>>(), vec![FieldElement(0), FieldElement(1)]);
        let f4 = FieldCtx::from_order(4).unwrap();
        let all: Vec<_> = f4.elements().collect();
        assert_eq!(all.len(), 4);
        assert_eq!(all.iter().collect::<std::collections::HashSet<_>>().len(), 4);
        let f9 = FieldCtx::from_order(9).unwrap();
        let all: Vec<_> = f9.elements().collect();
        assert_eq!(all[0], FieldElement::ZERO);
        assert!(all.contains(&FieldElement::ONE));
    }

    #[test]
    fn json_round_trip() {
        let f = FieldCtx::from_order(9).unwrap();
        for a in f.elements() {
            let v = f.element_to_json(a);
            assert!(v.is_array());
            assert_eq!(f.element_from_json(&v).unwrap(), a);
        }
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(f5.element_to_json(FieldElement(3)), Value::from(3));
        assert!(f5.element_from_text("5").is_err());
        assert!(f5.element_from_text("[1]").is_err());
    }

    #[test]
    fn large_field_without_tables() {
        // 3^7 = 2187 exceeds the table limit and exercises the direct path
        let f = FieldCtx::new(3, 7, None).unwrap();
        let a = FieldElement(1234);
        let b = FieldElement(777);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
        assert_eq!(f.trace(f.add(a, b)).unwrap(), (f.trace(a).unwrap() + f.trace(b).unwrap()) % 3);
    }
}
