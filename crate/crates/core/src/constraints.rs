//! Coefficient constraint sets `𝒞`: indices in `𝓘` carry a prescribed
//! value, indices in `𝓙` avoid a forbidden set `S_j`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FieldElement};
use crate::polyring::{Poly, PolyRing};

/// The index window `K_{x,m} = {x, …, x+m−1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub x: usize,
    pub m: usize,
}

impl Window {
    pub fn contains(&self, i: usize) -> bool {
        i >= self.x && i < self.x + self.m
    }

    pub fn members(&self) -> std::ops::Range<usize> {
        self.x..self.x + self.m
    }
}

/// A constraint set on the coefficients `b_0, …, b_{n-1}` of monic degree
/// `n` polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSet {
    n: usize,
    q: u32,
    fixed: BTreeMap<usize, FieldElement>,
    forbidden: BTreeMap<usize, BTreeSet<FieldElement>>,
    // allowed[i][c] is the indicator of C_i
    allowed: Vec<Vec<bool>>,
}

impl ConstraintSet {
    /// Validates and builds a constraint set. Indices in neither map are
    /// free (`S_j = ∅`).
    pub fn new(
        ctx: &FieldCtx,
        n: usize,
        fixed: BTreeMap<usize, FieldElement>,
        forbidden: BTreeMap<usize, BTreeSet<FieldElement>>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::ConstraintSet("degree n must be at least 1".into()));
        }
        for (&i, &a) in &fixed {
            if i >= n {
                return Err(Error::Constraint { index: i, rule: format!("index outside 0..{n}") });
            }
            ctx.check(a).map_err(|_| Error::Constraint {
                index: i,
                rule: format!("prescribed value {a} is not in F_{}", ctx.q()),
            })?;
            if i == 0 && a.is_zero() {
                return Err(Error::Constraint {
                    index: 0,
                    rule: "prescribed constant coefficient must be nonzero".into(),
                });
            }
        }
        let mut forbidden = forbidden;
        forbidden.retain(|_, s| !s.is_empty());
        for (&j, set) in &forbidden {
            if j >= n {
                return Err(Error::Constraint { index: j, rule: format!("index outside 0..{n}") });
            }
            if fixed.contains_key(&j) {
                return Err(Error::Constraint {
                    index: j,
                    rule: "index is both prescribed and constrained by a forbidden set".into(),
                });
            }
            for &b in set {
                ctx.check(b).map_err(|_| Error::Constraint {
                    index: j,
                    rule: format!("forbidden value {b} is not in F_{}", ctx.q()),
                })?;
            }
            if set.len() >= ctx.q() as usize {
                return Err(Error::Constraint {
                    index: j,
                    rule: format!("forbidden set of size {} leaves no admissible value", set.len()),
                });
            }
        }
        Ok(Self::build(n, ctx.q(), fixed, forbidden))
    }

    fn build(
        n: usize,
        q: u32,
        fixed: BTreeMap<usize, FieldElement>,
        forbidden: BTreeMap<usize, BTreeSet<FieldElement>>,
    ) -> Self {
        let allowed = (0..n)
            .map(|i| {
                (0..q)
                    .map(|c| match fixed.get(&i) {
                        Some(a) => a.0 == c,
                        None => forbidden.get(&i).is_none_or(|s| !s.contains(&FieldElement(c))),
                    })
                    .collect()
            })
            .collect();
        ConstraintSet {
            n,
            q,
            fixed,
            forbidden,
            allowed,
        }
    }

    /// No constraints at all: `𝒞 = M_n`.
    pub fn unconstrained(ctx: &FieldCtx, n: usize) -> Result<Self> {
        Self::new(ctx, n, BTreeMap::new(), BTreeMap::new())
    }

    /// Every coefficient avoids the value `a`.
    pub fn avoiding(ctx: &FieldCtx, n: usize, a: FieldElement) -> Result<Self> {
        let forbidden = (0..n).map(|j| (j, BTreeSet::from([a]))).collect();
        Self::new(ctx, n, BTreeMap::new(), forbidden)
    }

    /// Only prescribed coefficients; the rest are free.
    pub fn prescribed(ctx: &FieldCtx, n: usize, fixed: BTreeMap<usize, FieldElement>) -> Result<Self> {
        Self::new(ctx, n, fixed, BTreeMap::new())
    }

    /// The constraints on `K_{x,l}`, re-indexed to `0..l`. The result
    /// describes the window transform and is not subject to the rules
    /// on the constant coefficient.
    pub fn window(&self, w: Window) -> Result<Self> {
        if w.m == 0 || w.x + w.m > self.n {
            return Err(Error::Precondition(format!(
                "window K_{{{},{}}} does not fit in 0..{}",
                w.x, w.m, self.n
            )));
        }
        let shift = |i: usize| i.checked_sub(w.x).filter(|&j| j < w.m);
        let fixed = self.fixed.iter().filter_map(|(&i, &a)| shift(i).map(|j| (j, a))).collect();
        let forbidden = self
            .forbidden
            .iter()
            .filter_map(|(&i, s)| shift(i).map(|j| (j, s.clone())))
            .collect();
        Ok(Self::build(w.m, self.q, fixed, forbidden))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn fixed(&self) -> &BTreeMap<usize, FieldElement> {
        &self.fixed
    }

    pub fn forbidden(&self) -> &BTreeMap<usize, BTreeSet<FieldElement>> {
        &self.forbidden
    }

    /// `I = #𝓘`.
    pub fn num_fixed(&self) -> usize {
        self.fixed.len()
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        self.fixed.contains_key(&i)
    }

    /// The indices of `𝓙`, ascending.
    pub fn free_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|i| !self.fixed.contains_key(i))
    }

    /// `N_j = #S_j` (zero for unconstrained and prescribed indices).
    pub fn n_forbidden(&self, j: usize) -> usize {
        self.forbidden.get(&j).map_or(0, |s| s.len())
    }

    /// Indicator of `C_i` at `c`.
    #[inline]
    pub fn allows(&self, i: usize, c: FieldElement) -> bool {
        self.allowed[i][c.0 as usize]
    }

    /// The admissible values `C_i` at index `i`.
    pub fn allowed(&self, i: usize) -> impl Iterator<Item = FieldElement> + '_ {
        self.allowed[i]
            .iter()
            .enumerate()
            .filter(|(_, &ok)| ok)
            .map(|(c, _)| FieldElement(c as u32))
    }

    /// Membership of the monic polynomial with non-leading coefficients
    /// `b`.
    #[inline]
    pub fn contains_coeffs(&self, b: &[FieldElement]) -> bool {
        b.iter().enumerate().all(|(i, &c)| self.allowed[i][c.0 as usize])
    }

    /// `𝟙_𝒞(f)`; `f` must be monic of degree `n`.
    pub fn member_of(&self, ring: &PolyRing, f: &Poly) -> Result<bool> {
        if f.degree() != Some(self.n) || !ring.is_monic(f) {
            return Err(Error::Precondition(format!(
                "membership needs a monic polynomial of degree {}",
                self.n
            )));
        }
        ring.check(f)?;
        Ok(self.contains_coeffs(&f.coeffs()[..self.n]))
    }

    /// `#𝒞 = ∏_{j∈𝓙} (q − N_j)`.
    pub fn cardinality(&self) -> u128 {
        self.free_indices()
            .map(|j| (self.q as u128) - self.n_forbidden(j) as u128)
            .product()
    }

    /// Number of forbidden values at index 0 that matter for primes: a
    /// forbidden `0` there only excludes polynomials divisible by `T`.
    fn effective_n0(&self) -> usize {
        self.forbidden
            .get(&0)
            .map_or(0, |s| s.iter().filter(|c| !c.is_zero()).count())
    }

    /// The singular series `𝔖`, so that `𝔖·π_q(n)` is the expected number
    /// of primes in `𝒞`.
    pub fn singular_series(&self) -> BigRational {
        let q = BigInt::from(self.q);
        let denom = q.pow((self.n - 1) as u32) * (&q - 1);
        let prod_pos: BigInt = self
            .free_indices()
            .filter(|&j| j > 0)
            .map(|j| &q - BigInt::from(self.n_forbidden(j)))
            .product();
        let numer = if self.is_fixed(0) {
            prod_pos
        } else {
            (&q - 1 - BigInt::from(self.effective_n0())) * prod_pos
        };
        BigRational::new(numer, denom)
    }

    /// The correction factor `R` in `𝔖 = (#𝒞/q^n)·R`.
    pub fn heuristic_correction(&self) -> BigRational {
        let density = BigRational::new(
            BigInt::from(self.cardinality()),
            BigInt::from(self.q).pow(self.n as u32),
        );
        self.singular_series() / density
    }

    fn alpha_over(&self, indices: impl Iterator<Item = usize>, m: usize) -> Result<u128> {
        let mut factors: Vec<u128> = indices.map(|j| self.n_forbidden(j) as u128 + 1).collect();
        if m > factors.len() {
            return Err(Error::Precondition(format!(
                "alpha({m}) needs m <= {} available indices",
                factors.len()
            )));
        }
        factors.sort_unstable_by(|a, b| b.cmp(a));
        Ok(factors[..m].iter().product())
    }

    /// `α(m)`: the largest product of `N_j + 1` over `m` distinct indices
    /// of `𝓙`, attained on the `m` largest factors.
    pub fn alpha(&self, m: usize) -> Result<u128> {
        self.alpha_over(self.free_indices(), m)
    }

    /// `α_{∉K}(m)`: as [`alpha`](Self::alpha) but over `𝓙 \ K`.
    pub fn alpha_outside(&self, w: Window, m: usize) -> Result<u128> {
        self.alpha_over(self.free_indices().filter(|&j| !w.contains(j)), m)
    }

    /// `#(K ∩ 𝓘)`.
    pub fn fixed_in(&self, w: Window) -> usize {
        self.fixed.keys().filter(|&&i| w.contains(i)).count()
    }

    /// A window of length `m` meeting `𝓘` in as few indices as possible
    /// (smallest `x` on ties), together with that intersection size. The
    /// minimum is checked against `< 2m·I/n`, and against `< (3m/2)·I/n`
    /// when `m ≤ n/2`.
    pub fn best_window(&self, m: usize) -> Result<(Window, usize)> {
        if m == 0 || m > self.n {
            return Err(Error::Precondition(format!("window length {m} outside 1..={}", self.n)));
        }
        let (w, hits) = (0..=self.n - m)
            .map(|x| {
                let w = Window { x, m };
                (w, self.fixed_in(w))
            })
            .min_by_key(|&(w, hits)| (hits, w.x))
            .expect("at least one window");
        let (i, n) = (self.num_fixed(), self.n);
        // with I = 0 both bounds are 0 and the minimum 0 meets them with equality
        if i > 0 {
            if hits * n >= 2 * m * i {
                return Err(Error::Internal(format!("window minimum {hits} is not below 2m·I/n")));
            }
            if 2 * m <= n && 2 * hits * n >= 3 * m * i {
                return Err(Error::Internal(format!("window minimum {hits} is not below (3m/2)·I/n")));
            }
        }
        Ok((w, hits))
    }

    /// Parses the JSON constraint format
    /// `{"n": …, "fixed": {"i": elt}, "forbidden": {"j": [elt, …]}}`.
    pub fn from_json(ctx: &FieldCtx, text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("constraint JSON: {e}")))?;
        Self::from_value(ctx, &v)
    }

    pub fn from_value(ctx: &FieldCtx, v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("constraint JSON must be an object".into()))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "n" | "fixed" | "forbidden") {
                return Err(Error::Parse(format!("unknown constraint field {key:?}")));
            }
        }
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("constraint JSON needs a non-negative integer \"n\"".into()))?
            as usize;
        let index = |k: &str| {
            k.parse::<usize>()
                .map_err(|_| Error::Parse(format!("constraint index {k:?} is not a non-negative integer")))
        };
        let mut fixed = BTreeMap::new();
        if let Some(f) = obj.get("fixed") {
            let f = f
                .as_object()
                .ok_or_else(|| Error::Parse("\"fixed\" must be an object".into()))?;
            for (k, val) in f {
                let i = index(k)?;
                let a = ctx.element_from_json(val).map_err(|e| Error::Constraint {
                    index: i,
                    rule: e.to_string(),
                })?;
                fixed.insert(i, a);
            }
        }
        let mut forbidden = BTreeMap::new();
        if let Some(f) = obj.get("forbidden") {
            let f = f
                .as_object()
                .ok_or_else(|| Error::Parse("\"forbidden\" must be an object".into()))?;
            for (k, val) in f {
                let j = index(k)?;
                let items = val.as_array().ok_or_else(|| Error::Constraint {
                    index: j,
                    rule: "forbidden values must be a list".into(),
                })?;
                let mut set = BTreeSet::new();
                for item in items {
                    let b = ctx.element_from_json(item).map_err(|e| Error::Constraint {
                        index: j,
                        rule: e.to_string(),
                    })?;
                    if !set.insert(b) {
                        return Err(Error::Constraint {
                            index: j,
                            rule: format!("forbidden value {item} listed twice"),
                        });
                    }
                }
                forbidden.insert(j, set);
            }
        }
        Self::new(ctx, n, fixed, forbidden)
    }

    /// Canonical JSON (sorted indices, empty forbidden sets omitted).
    pub fn to_json(&self, ctx: &FieldCtx) -> Value {
        let mut obj = Map::new();
        obj.insert("n".into(), Value::from(self.n));
        let fixed: Map<String, Value> = self
            .fixed
            .iter()
            .map(|(i, &a)| (i.to_string(), ctx.element_to_json(a)))
            .collect();
        obj.insert("fixed".into(), Value::Object(fixed));
        let forbidden: Map<String, Value> = self
            .forbidden
            .iter()
            .map(|(j, s)| (j.to_string(), Value::from(s.iter().map(|&b| ctx.element_to_json(b)).collect::<Vec<_>>())))
            .collect();
        obj.insert("forbidden".into(), Value::Object(forbidden));
        Value::Object(obj)
    }

    /// Short stable digest of the canonical JSON plus the field order.
    pub fn hash(&self, ctx: &FieldCtx) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("q={};", ctx.q()));
        hasher.update(canonical_json(&self.to_json(ctx)));
        hex::encode(&hasher.finalize()[..8])
    }

    /// A random constraint set: each index is prescribed with probability
    /// 1/4, otherwise it forbids up to `max_forbidden` (capped at `q − 1`)
    /// random values. The constant coefficient respects `a_0 ≠ 0` and
    /// `0 ∉ S_0`.
    pub fn random<R: Rng>(ctx: &FieldCtx, n: usize, max_forbidden: usize, rng: &mut R) -> Result<Self> {
        let q = ctx.q();
        let cap = max_forbidden.min(q as usize - 1);
        let mut fixed = BTreeMap::new();
        let mut forbidden = BTreeMap::new();
        for i in 0..n {
            if rng.gen_ratio(1, 4) {
                let a = if i == 0 { rng.gen_range(1..q) } else { rng.gen_range(0..q) };
                fixed.insert(i, FieldElement(a));
            } else {
                let size = rng.gen_range(0..=cap);
                let mut set = BTreeSet::new();
                while set.len() < size {
                    let b = FieldElement(rng.gen_range(0..q));
                    if !(i == 0 && b.is_zero()) {
                        set.insert(b);
                    }
                    if i == 0 && set.len() >= q as usize - 1 {
                        break;
                    }
                }
                forbidden.insert(i, set);
            }
        }
        Self::new(ctx, n, fixed, forbidden)
    }
}

/// JSON text with object keys in sorted order.
fn canonical_json(v: &Value) -> String {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort_by(|a, b| match (a.parse::<usize>(), b.parse::<usize>()) {
                (Ok(x), Ok(y)) => x.cmp(&y),
                _ => a.cmp(b),
            });
            let body: Vec<String> = keys
                .into_iter()
                .map(|k| format!("{}:{}", Value::from(k.as_str()), canonical_json(&m[k])))
                .collect();
            format!("{{{}}}", body.join(","))
        }
        Value::Array(a) => format!("[{}]", a.iter().map(canonical_json).collect::<Vec<_>>().join(",")),
        other => other.to_string(),
    }
}
