//! Exact arithmetic in the cyclotomic ring `Z[ζ_p]`.
//!
//! Every additive character value over a field of characteristic `p` is a
//! power of `ζ_p = exp(2πi/p)`, so sums and products of character values are
//! elements of `Z[ζ_p]`. They are stored in the power basis
//! `{1, ζ, …, ζ^{p-2}}`; the relation `1 + ζ + … + ζ^{p-1} = 0` rewrites
//! `ζ^{p-1}` as `-(1 + ζ + … + ζ^{p-2})`, which makes the representation
//! unique.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

/// An element `Σ c_i ζ_p^i` of `Z[ζ_p]` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u32,
    coeffs: Vec<i128>,
}

impl CycInt {
    pub fn zero(p: u32) -> Self {
        assert!(p >= 2, "cyclotomic ring needs a prime p >= 2");
        CycInt {
            p,
            coeffs: vec![0; (p - 1) as usize],
        }
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, 1)
    }

    pub fn from_int(p: u32, value: i128) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = value;
        z
    }

    /// `ζ_p^e` for any integer exponent.
    pub fn zeta_pow(p: u32, e: i64) -> Self {
        let e = e.rem_euclid(p as i64) as usize;
        let mut z = Self::zero(p);
        if e < (p - 1) as usize {
            z.coeffs[e] = 1;
        } else {
            z.coeffs.iter_mut().for_each(|c| *c = -1);
        }
        z
    }

    /// `Σ_e counts[e] · ζ^e` where `counts` has length `p`.
    ///
    /// This is how character sums are accumulated: bucket each term by its
    /// exponent, then canonicalise once.
    pub fn from_exponent_counts(p: u32, counts: &[i128]) -> Self {
        assert_eq!(counts.len(), p as usize, "need one bucket per exponent");
        let top = counts[(p - 1) as usize];
        CycInt {
            p,
            coeffs: counts[..(p - 1) as usize].iter().map(|&c| c - top).collect(),
        }
    }

    /// Builds an element from raw power-basis coordinates, canonicalising
    /// a trailing `ζ^{p-1}` coordinate if one is supplied.
    pub fn from_coeffs(p: u32, coeffs: &[i128]) -> Self {
        let mut counts = vec![0i128; p as usize];
        for (i, &c) in coeffs.iter().enumerate() {
            counts[i % p as usize] += c;
        }
        Self::from_exponent_counts(p, &counts)
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// `Some(n)` when the element is the rational integer `n`.
    pub fn as_integer(&self) -> Option<i128> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    /// Complex conjugation, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let p = self.p as usize;
        let mut counts = vec![0i128; p];
        for (i, &c) in self.coeffs.iter().enumerate() {
            counts[(p - i) % p] += c;
        }
        Self::from_exponent_counts(self.p, &counts)
    }

    /// `z · conj(z)`, the exact squared absolute value. It is a totally real
    /// element; at desk scale it is compared exactly or embedded once.
    pub fn norm_sq(&self) -> Self {
        self * &self.conj()
    }

    pub fn scale(&self, k: i128) -> Self {
        CycInt {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .map(|&c| c.checked_mul(k).expect("cyclotomic coefficient overflow"))
                .collect(),
        }
    }

    /// Exact division by a rational integer; `None` if some coordinate is
    /// not divisible.
    pub fn div_exact(&self, d: i128) -> Option<Self> {
        if d == 0 || self.coeffs.iter().any(|&c| c % d != 0) {
            return None;
        }
        Some(CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&c| c / d).collect(),
        })
    }

    /// Image under `ζ ↦ exp(2πi/p)`.
    pub fn embed(&self) -> Complex64 {
        let p = self.p as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let angle = 2.0 * std::f64::consts::PI * i as f64 / p;
                Complex64::from_polar(c as f64, angle)
            })
            .sum()
    }

    /// `|z|` through the exact norm, which avoids cancellation in the
    /// embedding of `z` itself.
    pub fn abs(&self) -> f64 {
        self.norm_sq().embed().re.max(0.0).sqrt()
    }

    fn check_same_ring(&self, other: &Self) {
        assert_eq!(self.p, other.p, "cyclotomic rings of different primes");
    }
}

/// Floating embedding of a canonical element for prime `p`.
pub fn complex_embed(z: &CycInt, p: u32) -> Complex64 {
    assert_eq!(z.prime(), p, "element is not canonical for this prime");
    z.embed()
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt[p={}]{:?}", self.p, self.coeffs)
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.unsigned_abs();
            let term = match (i, mag) {
                (0, m) => m.to_string(),
                (1, 1) => "z".to_string(),
                (1, m) => format!("{m}*z"),
                (e, 1) => format!("z^{e}"),
                (e, m) => format!("{m}*z^{e}"),
            };
            write!(f, "{sign}{term}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.check_same_ring(rhs);
        CycInt {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.checked_add(*b).expect("cyclotomic coefficient overflow"))
                .collect(),
        }
    }
}

impl Add for CycInt {
    type Output = CycInt;
    fn add(self, rhs: CycInt) -> CycInt {
        &self + &rhs
    }
}

impl AddAssign<&CycInt> for CycInt {
    fn add_assign(&mut self, rhs: &CycInt) {
        self.check_same_ring(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a = a.checked_add(*b).expect("cyclotomic coefficient overflow");
        }
    }
}

impl<'a> Sub<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self + &(-rhs)
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

impl<'a> Mul<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.check_same_ring(rhs);
        let p = self.p as usize;
        let mut counts = vec![0i128; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let t = a.checked_mul(b).expect("cyclotomic coefficient overflow");
                let slot = &mut counts[(i + j) % p];
                *slot = slot.checked_add(t).expect("cyclotomic coefficient overflow");
            }
        }
        CycInt::from_exponent_counts(self.p, &counts)
    }
}

impl Mul for CycInt {
    type Output = CycInt;
    fn mul(self, rhs: CycInt) -> CycInt {
        &self * &rhs
    }
}
