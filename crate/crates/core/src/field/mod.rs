//! Finite fields F_{p^m} in a canonical power-basis model.
//!
//! A field is pinned by its modulus: the smallest monic irreducible of degree
//! `m`, where polynomials are ordered by the integer `sum c_i p^i` of their
//! non-leading coefficients. Elements are coefficient vectors in the power
//! basis of that modulus, constant term first. The same integer encoding
//! orders elements, which is how "smallest generator" is defined.

mod linalg;
mod poly;
mod semilinear;

pub use linalg::{FpMatrix, Mat};
pub use semilinear::{
    saturate_fixed_points, semilinear_fixed_points, FieldEmbedding, FixedPoints, Saturation, SemilinearOperator,
    DEFAULT_SATURATION_CAP,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on `m * log2(p)` accepted by [`make_field`].
pub const MAX_FIELD_BITS: f64 = 256.0;

/// Fields up to this order support generator searches and exhaustive enumeration.
pub const ENUMERABLE_ORDER: u128 = 1 << 40;

/// Element of F_{p^m}: power-basis coordinates, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(pub(crate) Vec<u64>);

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// The element's coefficients when it lies in the prime field.
    pub fn as_prime(&self) -> Option<u64> {
        if self.0[1..].iter().all(|&c| c == 0) {
            Some(self.0[0])
        } else {
            None
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FieldCtxRepr {
    p: u64,
    m: usize,
    modulus: Vec<u64>,
}

/// The coefficient field F_{p^m}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "FieldCtxRepr", try_from = "FieldCtxRepr")]
pub struct FieldCtx {
    p: u64,
    m: usize,
    /// Monic modulus, length `m + 1`, constant term first.
    modulus: Vec<u64>,
    /// `frob[k]` is `x^{k p}` reduced modulo the modulus.
    frob: Vec<Vec<u64>>,
}

impl From<FieldCtx> for FieldCtxRepr {
    fn from(ctx: FieldCtx) -> Self {
        FieldCtxRepr { p: ctx.p, m: ctx.m, modulus: ctx.modulus }
    }
}

impl TryFrom<FieldCtxRepr> for FieldCtx {
    type Error = Error;

    fn try_from(r: FieldCtxRepr) -> Result<Self> {
        let ctx = make_field(r.p, r.m)?;
        if ctx.modulus != r.modulus {
            return Err(Error::InvalidParameter(format!(
                "modulus {:?} is not the canonical modulus {:?}",
                r.modulus, ctx.modulus
            )));
        }
        Ok(ctx)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// Builds the canonical model of F_{p^m}.
pub fn make_field(p: u64, m: usize) -> Result<FieldCtx> {
    if !is_prime(p) || p >= 1 << 31 {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("extension degree must be positive".into()));
    }
    if m as f64 * (p as f64).log2() > MAX_FIELD_BITS {
        return Err(Error::FieldTooLarge { p, m });
    }
    let mut digits = vec![0u64; m];
    let modulus = loop {
        let mut f = digits.clone();
        f.push(1);
        if poly::fp_is_irreducible(&f, p) {
            break f;
        }
        // increment base-p counter, constant term least significant
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    };
    let mut frob = Vec::with_capacity(m);
    for k in 0..m {
        let mut mono = vec![0u64; k * p as usize + 1];
        mono[k * p as usize] = 1;
        let mut r = poly::fp_rem(&mono, &modulus, p);
        r.resize(m, 0);
        frob.push(r);
    }
    Ok(FieldCtx { p, m, modulus, frob })
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Field order, when it fits in 128 bits.
    pub fn order(&self) -> Option<u128> {
        let mut q: u128 = 1;
        for _ in 0..self.m {
            q = q.checked_mul(self.p as u128)?;
        }
        Some(q)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(vec![0; self.m])
    }

    pub fn one(&self) -> FieldElem {
        self.from_u64(1)
    }

    /// Image of an integer in the prime field.
    pub fn from_u64(&self, x: u64) -> FieldElem {
        let mut v = vec![0; self.m];
        v[0] = x % self.p;
        FieldElem(v)
    }

    pub fn from_i64(&self, x: i64) -> FieldElem {
        self.from_u64(x.rem_euclid(self.p as i64) as u64)
    }

    /// Builds an element from explicit coordinates, validating them.
    pub fn elem(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() != self.m || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidParameter(format!("{coeffs:?} is not an element of F_{}^{}", self.p, self.m)));
        }
        Ok(FieldElem(coeffs.to_vec()))
    }

    /// The generator `x` of the power basis.
    pub fn gen(&self) -> FieldElem {
        if self.m == 1 {
            return FieldElem(vec![(self.p - self.modulus[0]) % self.p]);
        }
        let mut v = vec![0; self.m];
        v[1] = 1;
        FieldElem(v)
    }

    /// Integer encoding `sum c_i p^i`; `None` if the field is too large.
    pub fn index(&self, a: &FieldElem) -> Option<u128> {
        let mut acc: u128 = 0;
        for &c in a.0.iter().rev() {
            acc = acc.checked_mul(self.p as u128)?.checked_add(c as u128)?;
        }
        Some(acc)
    }

    pub fn from_index(&self, idx: u128) -> Option<FieldElem> {
        if let Some(q) = self.order() {
            if idx >= q {
                return None;
            }
        }
        Some(self.from_index_lossy(idx))
    }

    /// Base-p digits of `idx`, truncated to `m` digits.
    pub(crate) fn from_index_lossy(&self, mut idx: u128) -> FieldElem {
        let mut v = vec![0; self.m];
        for c in v.iter_mut() {
            *c = (idx % self.p as u128) as u64;
            idx /= self.p as u128;
        }
        FieldElem(v)
    }

    /// Compares elements by their integer encoding.
    pub fn cmp_index(&self, a: &FieldElem, b: &FieldElem) -> std::cmp::Ordering {
        a.0.iter().rev().cmp(b.0.iter().rev())
    }

    /// All elements in index order. Only for enumerable fields.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        let q = self.order().filter(|&q| q <= ENUMERABLE_ORDER).expect("field too large to enumerate");
        (0..q).map(move |i| self.from_index_lossy(i))
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.p;
        FieldElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + y) % p).collect())
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.p;
        FieldElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + p - y) % p).collect())
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        let p = self.p;
        FieldElem(a.0.iter().map(|&x| (p - x) % p).collect())
    }

    pub fn scale(&self, a: &FieldElem, k: u64) -> FieldElem {
        let p = self.p;
        let k = k % p;
        FieldElem(a.0.iter().map(|&x| x * k % p).collect())
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.p;
        let m = self.m;
        if m == 1 {
            return FieldElem(vec![a.0[0] * b.0[0] % p]);
        }
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for top in (m..2 * m - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for i in 0..m {
                let s = top - m + i;
                prod[s] = (prod[s] + p - c * self.modulus[i] % p) % p;
            }
        }
        prod.truncate(m);
        FieldElem(prod)
    }

    pub fn pow(&self, a: &FieldElem, mut e: u128) -> FieldElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: &FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return None;
        }
        let p = self.p;
        if self.m == 1 {
            return Some(FieldElem(vec![poly::inv_mod(a.0[0], p)]));
        }
        // invariant: s_i * a = r_i (mod modulus)
        let mut r0 = self.modulus.clone();
        let mut r1 = a.0.clone();
        while r1.last() == Some(&0) {
            r1.pop();
        }
        let mut s0: Vec<u64> = Vec::new();
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            let (q, r) = poly::fp_divmod(&r0, &r1, p);
            let s2 = poly::fp_sub(&s0, &poly::fp_mul(&q, &s1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        debug_assert_eq!(r0.len(), 1);
        let c_inv = poly::inv_mod(r0[0], p);
        let mut out: Vec<u64> = s0.iter().map(|&x| x * c_inv % p).collect();
        out = poly::fp_rem(&out, &self.modulus, p);
        out.resize(self.m, 0);
        Some(FieldElem(out))
    }

    /// The p-power map `x -> x^p`.
    pub fn frobenius(&self, a: &FieldElem) -> FieldElem {
        let p = self.p;
        if self.m == 1 {
            return a.clone();
        }
        let mut out = vec![0u64; self.m];
        for (k, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &f) in out.iter_mut().zip(&self.frob[k]) {
                *o = (*o + c * f) % p;
            }
        }
        FieldElem(out)
    }

    pub fn frobenius_iter(&self, a: &FieldElem, k: usize) -> FieldElem {
        (0..k % self.m).fold(a.clone(), |x, _| self.frobenius(&x))
    }

    /// Smallest multiplicative generator in index order.
    pub fn generator(&self) -> Result<FieldElem> {
        let q = self.order().filter(|&q| q <= ENUMERABLE_ORDER).ok_or(Error::FieldTooLarge { p: self.p, m: self.m })?;
        let n = (q - 1) as u64;
        let factors = poly::prime_factors(n);
        for idx in 1..q {
            let g = self.from_index_lossy(idx);
            if factors.iter().all(|&l| self.pow(&g, (n / l) as u128) != self.one()) {
                return Ok(g);
            }
        }
        unreachable!("finite fields have cyclic unit groups")
    }

    /// Multiplicative order of a nonzero element, for enumerable fields.
    pub fn mult_order(&self, a: &FieldElem) -> Option<u64> {
        let q = self.order().filter(|&q| q <= ENUMERABLE_ORDER)?;
        if a.is_zero() {
            return None;
        }
        let mut n = (q - 1) as u64;
        for l in poly::prime_factors(n) {
            while n.is_multiple_of(l) && self.pow(a, (n / l) as u128) == self.one() {
                n /= l;
            }
        }
        Some(n)
    }
}

/// x -> x^p.
pub fn frobenius(ctx: &FieldCtx, x: &FieldElem) -> FieldElem {
    ctx.frobenius(x)
}

/// `g^{(q-1)/d}` for the smallest generator `g`; an element of exact order `d`.
pub fn primitive_root_of_unity(ctx: &FieldCtx, d: u64) -> Result<FieldElem> {
    let q = ctx.order().ok_or(Error::FieldTooLarge { p: ctx.p, m: ctx.m })?;
    if d == 0 || (q - 1) % d as u128 != 0 {
        return Err(Error::NoRootsOfUnity { d, q_minus_one: q - 1 });
    }
    if d == 1 {
        return Ok(ctx.one());
    }
    let g = ctx.generator()?;
    Ok(ctx.pow(&g, (q - 1) / d as u128))
}

/// The unique `e` in `[0, d)` with `xi^e = x`.
pub fn mu_log(ctx: &FieldCtx, x: &FieldElem, xi: &FieldElem, d: u64) -> Result<u64> {
    let mut acc = ctx.one();
    for e in 0..d {
        if &acc == x {
            return Ok(e);
        }
        acc = ctx.mul(&acc, xi);
    }
    Err(Error::NotRootOfUnity { d })
}

/// Smallest `m` with `d | p^m - 1`.
pub fn minimal_degree_for(p: u64, d: u64) -> Result<usize> {
    if d == 0 || p.is_multiple_of(d) && d != 1 || gcd(p, d) != 1 {
        return Err(Error::InvalidParameter(format!("d = {d} must be coprime to p = {p}")));
    }
    let mut pm = p % d;
    let mut m = 1;
    while pm % d != 1 % d {
        pm = pm * p % d;
        m += 1;
    }
    Ok(m)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
