//! Truncated Laurent series with tracked precision.
//!
//! A series is known on the window `[lo, hi)`: every coefficient below `lo`
//! is zero, coefficients in the window are exact, nothing at or above `hi`
//! is known. `hi = None` marks a Laurent polynomial known exactly.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

/// Reduced rational number with positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RationalRepr")]
pub struct RationalLevel {
    num: i64,
    den: i64,
}

#[derive(Deserialize)]
struct RationalRepr {
    num: i64,
    den: i64,
}

impl TryFrom<RationalRepr> for RationalLevel {
    type Error = String;
    fn try_from(r: RationalRepr) -> std::result::Result<Self, String> {
        if r.den <= 0 {
            return Err(format!("denominator {} must be positive", r.den));
        }
        Ok(RationalLevel::new(r.num, r.den))
    }
}

fn igcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl RationalLevel {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let s = den.signum();
        let g = igcd(num, den).max(1);
        RationalLevel { num: s * num / g, den: s * den / g }
    }

    pub fn int(n: i64) -> Self {
        RationalLevel { num: n, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn floor(&self) -> i64 {
        self.num.div_euclid(self.den)
    }

    pub fn ceil(&self) -> i64 {
        -(-self.num).div_euclid(self.den)
    }

    /// Fractional part in `[0, 1)`.
    pub fn frac(&self) -> RationalLevel {
        RationalLevel::new(self.num.rem_euclid(self.den), self.den)
    }

    pub fn add(&self, o: &RationalLevel) -> RationalLevel {
        RationalLevel::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }

    pub fn sub(&self, o: &RationalLevel) -> RationalLevel {
        RationalLevel::new(self.num * o.den - o.num * self.den, self.den * o.den)
    }

    pub fn add_int(&self, k: i64) -> RationalLevel {
        RationalLevel { num: self.num + k * self.den, den: self.den }
    }

    pub fn scale(&self, k: i64) -> RationalLevel {
        RationalLevel::new(self.num * k, self.den)
    }

    pub fn div_int(&self, k: i64) -> RationalLevel {
        RationalLevel::new(self.num, self.den * k)
    }
}

impl Ord for RationalLevel {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.num as i128 * o.den as i128).cmp(&(o.num as i128 * self.den as i128))
    }
}

impl PartialOrd for RationalLevel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for RationalLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Lowest exponent of a series, as far as its window determines it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Valuation {
    Finite(i64),
    /// No nonzero coefficient is known. `window_limited` is false only for
    /// the exact zero series.
    Infinite {
        window_limited: bool,
    },
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct LaurentSeries {
    lo: i64,
    hi: Option<i64>,
    terms: BTreeMap<i64, FieldElem>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    lo: i64,
    hi: Option<i64>,
    terms: Vec<(i64, FieldElem)>,
}

impl From<LaurentSeries> for SeriesRepr {
    fn from(s: LaurentSeries) -> Self {
        SeriesRepr { lo: s.lo, hi: s.hi, terms: s.terms.into_iter().collect() }
    }
}

impl TryFrom<SeriesRepr> for LaurentSeries {
    type Error = String;
    fn try_from(r: SeriesRepr) -> std::result::Result<Self, String> {
        if r.hi.is_some_and(|h| h <= r.lo) {
            return Err("empty window".into());
        }
        let mut terms = BTreeMap::new();
        for (e, c) in r.terms {
            if c.is_zero() {
                return Err(format!("stored zero coefficient at exponent {e}"));
            }
            if e < r.lo || r.hi.is_some_and(|h| e >= h) {
                return Err(format!("exponent {e} outside window"));
            }
            if terms.insert(e, c).is_some() {
                return Err(format!("duplicate exponent {e}"));
            }
        }
        Ok(LaurentSeries { lo: r.lo, hi: r.hi, terms }.normalized())
    }
}

fn min_hi(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl LaurentSeries {
    pub fn zero() -> Self {
        LaurentSeries { lo: 0, hi: None, terms: BTreeMap::new() }
    }

    /// Exact Laurent polynomial from `(exponent, coefficient)` pairs.
    pub fn poly(ctx: &FieldCtx, terms: impl IntoIterator<Item = (i64, FieldElem)>) -> Self {
        let mut out = BTreeMap::new();
        for (e, c) in terms {
            let entry = out.entry(e).or_insert_with(|| ctx.zero());
            *entry = ctx.add(entry, &c);
        }
        out.retain(|_, c: &mut FieldElem| !c.is_zero());
        let lo = out.keys().next().copied().unwrap_or(0);
        LaurentSeries { lo, hi: None, terms: out }
    }

    pub fn monomial(ctx: &FieldCtx, c: FieldElem, e: i64) -> Self {
        Self::poly(ctx, [(e, c)])
    }

    pub fn constant(ctx: &FieldCtx, c: FieldElem) -> Self {
        Self::monomial(ctx, c, 0)
    }

    /// The coordinate `t`.
    pub fn t(ctx: &FieldCtx) -> Self {
        Self::monomial(ctx, ctx.one(), 1)
    }

    /// Series known on `[lo, hi)`, dropping terms outside the window.
    pub fn truncated(
        ctx: &FieldCtx,
        terms: impl IntoIterator<Item = (i64, FieldElem)>,
        lo: i64,
        hi: i64,
    ) -> Result<Self> {
        if hi <= lo {
            return Err(Error::Window(format!("empty window [{lo}, {hi})")));
        }
        let p = Self::poly(ctx, terms);
        if p.terms.keys().next().is_some_and(|&e| e < lo) {
            return Err(Error::Window(format!("term below window start {lo}")));
        }
        Ok(p.with_window(lo, Some(hi)))
    }

    fn with_window(mut self, lo: i64, hi: Option<i64>) -> Self {
        self.lo = lo;
        self.hi = hi;
        if let Some(h) = hi {
            self.terms.retain(|&e, _| e < h);
        }
        self.normalized()
    }

    /// Exact series carry `lo` = lowest exponent, so equality is structural.
    fn normalized(mut self) -> Self {
        if self.hi.is_none() {
            self.lo = self.terms.keys().next().copied().unwrap_or(0);
        }
        self
    }

    /// Forgets everything at or above `hi`.
    pub fn truncate(&self, hi: i64) -> Self {
        let h = min_hi(self.hi, Some(hi)).unwrap();
        let lo = self.lo.min(h - 1);
        self.clone().with_window(lo, Some(h))
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> Option<i64> {
        self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.hi.is_none()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &FieldElem)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.keys().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `t^e`, if the window determines it.
    pub fn coeff(&self, ctx: &FieldCtx, e: i64) -> Result<FieldElem> {
        if self.hi.is_some_and(|h| e >= h) {
            return Err(Error::Window(format!("coefficient of t^{e} is beyond precision")));
        }
        Ok(self.terms.get(&e).cloned().unwrap_or_else(|| ctx.zero()))
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.keys().next() {
            Some(&e) => Valuation::Finite(e),
            None => Valuation::Infinite { window_limited: self.hi.is_some() },
        }
    }

    pub fn add(&self, ctx: &FieldCtx, o: &Self) -> Self {
        let hi = min_hi(self.hi, o.hi);
        let lo = self.lo.min(o.lo);
        let mut terms = self.terms.clone();
        for (&e, c) in &o.terms {
            let entry = terms.entry(e).or_insert_with(|| ctx.zero());
            *entry = ctx.add(entry, c);
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentSeries { lo, hi, terms }.with_window(lo, hi)
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Self {
        self.map_coeffs(|c| ctx.neg(c))
    }

    pub fn sub(&self, ctx: &FieldCtx, o: &Self) -> Self {
        self.add(ctx, &o.neg(ctx))
    }

    pub fn scale(&self, ctx: &FieldCtx, k: &FieldElem) -> Self {
        if k.is_zero() {
            return LaurentSeries { lo: self.lo, hi: self.hi, terms: BTreeMap::new() }.normalized();
        }
        self.map_coeffs(|c| ctx.mul(c, k))
    }

    fn map_coeffs(&self, f: impl Fn(&FieldElem) -> FieldElem) -> Self {
        LaurentSeries {
            lo: self.lo,
            hi: self.hi,
            terms: self.terms.iter().map(|(&e, c)| (e, f(c))).filter(|(_, c)| !c.is_zero()).collect(),
        }
        .normalized()
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            lo: self.lo + k,
            hi: self.hi.map(|h| h + k),
            terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
        .normalized()
    }

    pub fn mul(&self, ctx: &FieldCtx, o: &Self) -> Self {
        let lo = self.lo + o.lo;
        let hi = min_hi(self.hi.map(|h| h + o.lo), o.hi.map(|h| h + self.lo));
        let mut terms: BTreeMap<i64, FieldElem> = BTreeMap::new();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &o.terms {
                let e = e1 + e2;
                if hi.is_some_and(|h| e >= h) {
                    continue;
                }
                let entry = terms.entry(e).or_insert_with(|| ctx.zero());
                *entry = ctx.add(entry, &ctx.mul(c1, c2));
            }
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentSeries { lo, hi, terms }.normalized()
    }

    /// Parses sums of monomials such as `3t^-2+t-1`, with integer coefficients.
    pub fn parse(ctx: &FieldCtx, s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let bad = |msg: &str| Error::Parse(format!("{msg} in {s:?}"));
        let mut terms = Vec::new();
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1i64;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if i > 0 {
                return Err(bad("expected + or -"));
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coeff: Option<i64> =
                if i > start { Some(s[start..i].parse().map_err(|_| bad("coefficient overflow"))?) } else { None };
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
            }
            let exp = if i < bytes.len() && bytes[i] == b't' {
                i += 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let es = i;
                    if i < bytes.len() && (bytes[i] == b'-' || bytes[i] == b'+') {
                        i += 1;
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    s[es..i].parse::<i64>().map_err(|_| bad("bad exponent"))?
                } else {
                    1
                }
            } else if coeff.is_some() {
                0
            } else {
                return Err(bad("expected a term"));
            };
            let c = sign * coeff.unwrap_or(1);
            terms.push((exp, ctx.from_i64(c)));
        }
        Ok(Self::poly(ctx, terms))
    }

    pub fn display(&self, ctx: &FieldCtx) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&e, c)| {
                let coeff = match c.as_prime() {
                    Some(v) => v.to_string(),
                    None => format!("{:?}", c.coeffs()),
                };
                match e {
                    0 => coeff,
                    _ if c == &ctx.one() => format!("t^{e}"),
                    _ => format!("{coeff}t^{e}"),
                }
            })
            .collect();
        parts.join("+")
    }
}

/// `sum c_i t^i -> sum c_i^p t^{pi}`.
pub fn frob_series(ctx: &FieldCtx, f: &LaurentSeries) -> LaurentSeries {
    let p = ctx.p() as i64;
    LaurentSeries {
        lo: f.lo * p,
        hi: f.hi.map(|h| h * p),
        terms: f.terms.iter().map(|(&e, c)| (e * p, ctx.frobenius(c))).collect(),
    }
}

/// Substitutes `t = s^d`.
pub fn kummer_pullback(ctx: &FieldCtx, f: &LaurentSeries, d: u64) -> Result<LaurentSeries> {
    if d == 0 || crate::field::gcd(d, ctx.p()) != 1 {
        return Err(Error::InvalidParameter(format!("cover degree {d} must be coprime to p = {}", ctx.p())));
    }
    let d = d as i64;
    Ok(LaurentSeries {
        lo: f.lo * d,
        hi: f.hi.map(|h| h * d),
        terms: f.terms.iter().map(|(&e, c)| (e * d, c.clone())).collect(),
    })
}

/// The automorphism `s -> xi^a s`: the coefficient of `s^j` is scaled by `xi^{aj}`.
pub fn galois_act(ctx: &FieldCtx, a: i64, g: &LaurentSeries, xi: &FieldElem, d: u64) -> LaurentSeries {
    let d = d as i64;
    let powers: Vec<FieldElem> = (0..d)
        .scan(ctx.one(), |acc, _| {
            let cur = acc.clone();
            *acc = ctx.mul(acc, xi);
            Some(cur)
        })
        .collect();
    LaurentSeries {
        lo: g.lo,
        hi: g.hi,
        terms: g.terms.iter().map(|(&j, c)| (j, ctx.mul(c, &powers[(a * j).rem_euclid(d) as usize]))).collect(),
    }
}

/// `valuation(f) / d`; `f` lies in `V^r` exactly when this is at least `r`.
pub fn standard_level(f: &LaurentSeries, d: u64) -> Result<RationalLevel> {
    match f.valuation() {
        Valuation::Finite(v) => Ok(RationalLevel::new(v, d as i64)),
        Valuation::Infinite { .. } => Err(Error::ZeroSeries),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, primitive_root_of_unity};

    #[test]
    fn valuations() {
        let f7 = make_field(7, 1).unwrap();
        let f = LaurentSeries::parse(&f7, "t^-2+t").unwrap();
        assert_eq!(f.valuation(), Valuation::Finite(-2));
        assert_eq!(LaurentSeries::parse(&f7, "3t^5").unwrap().valuation(), Valuation::Finite(5));
        let z = LaurentSeries::truncated(&f7, [], -4, 4).unwrap();
        assert_eq!(z.valuation(), Valuation::Infinite { window_limited: true });
    }

    #[test]
    fn frobenius_on_series() {
        let f5 = make_field(5, 1).unwrap();
        let f = LaurentSeries::parse(&f5, "1+t").unwrap();
        assert_eq!(frob_series(&f5, &f), LaurentSeries::parse(&f5, "1+t^5").unwrap());
        let g = LaurentSeries::parse(&f5, "t^-1").unwrap();
        assert_eq!(frob_series(&f5, &g), LaurentSeries::parse(&f5, "t^-5").unwrap());

        let f49 = make_field(7, 2).unwrap();
        let gam = f49.generator().unwrap();
        let s = LaurentSeries::monomial(&f49, gam.clone(), 1);
        let expect = LaurentSeries::monomial(&f49, f49.pow(&gam, 7), 7);
        assert_eq!(frob_series(&f49, &s), expect);

        let w = LaurentSeries::truncated(&f5, [(0, f5.one())], -2, 3).unwrap();
        let fw = frob_series(&f5, &w);
        assert_eq!((fw.lo(), fw.hi()), (-10, Some(15)));
    }

    #[test]
    fn pullbacks() {
        let f5 = make_field(5, 1).unwrap();
        let t = LaurentSeries::t(&f5);
        assert_eq!(kummer_pullback(&f5, &t, 3).unwrap(), LaurentSeries::monomial(&f5, f5.one(), 3));
        let f = LaurentSeries::parse(&f5, "t^-2+t").unwrap();
        assert_eq!(kummer_pullback(&f5, &f, 2).unwrap(), LaurentSeries::parse(&f5, "t^-4+t^2").unwrap());
        let c = LaurentSeries::constant(&f5, f5.from_u64(3));
        assert_eq!(kummer_pullback(&f5, &c, 4).unwrap(), c);
        assert!(kummer_pullback(&f5, &c, 5).is_err());
    }

    #[test]
    fn galois_examples() {
        let f7 = make_field(7, 1).unwrap();
        let xi = primitive_root_of_unity(&f7, 3).unwrap();
        assert_eq!(xi, f7.from_u64(2));
        let s = LaurentSeries::t(&f7);
        assert_eq!(galois_act(&f7, 1, &s, &xi, 3), LaurentSeries::monomial(&f7, f7.from_u64(2), 1));
        let s2 = LaurentSeries::monomial(&f7, f7.one(), 2);
        assert_eq!(galois_act(&f7, 1, &s2, &xi, 3), LaurentSeries::monomial(&f7, f7.from_u64(4), 2));
        let g = LaurentSeries::parse(&f7, "3t^-2+t+5t^4").unwrap();
        assert_eq!(galois_act(&f7, 3, &g, &xi, 3), g);
    }

    #[test]
    fn standard_levels() {
        let f7 = make_field(7, 1).unwrap();
        let mono = |e| LaurentSeries::monomial(&f7, f7.one(), e);
        assert_eq!(standard_level(&mono(2), 3).unwrap(), RationalLevel::new(2, 3));
        assert_eq!(standard_level(&mono(-3), 3).unwrap(), RationalLevel::int(-1));
        assert_eq!(standard_level(&mono(6), 3).unwrap(), RationalLevel::int(2));
        assert!(matches!(standard_level(&LaurentSeries::zero(), 3), Err(Error::ZeroSeries)));
    }

    #[test]
    fn product_window() {
        let f5 = make_field(5, 1).unwrap();
        let a = LaurentSeries::truncated(&f5, [(0, f5.one())], 0, 4).unwrap();
        let b = LaurentSeries::truncated(&f5, [(-1, f5.one())], -1, 2).unwrap();
        let c = a.mul(&f5, &b);
        assert_eq!((c.lo(), c.hi()), (-1, Some(2)));
        let exact = LaurentSeries::parse(&f5, "t^-2").unwrap();
        let e = a.mul(&f5, &exact);
        assert_eq!(e.hi(), Some(2));
    }

    #[test]
    fn parse_and_serde() {
        let f5 = make_field(5, 1).unwrap();
        let f = LaurentSeries::parse(&f5, "3t^-2 + t - 1").unwrap();
        assert_eq!(f.coeff(&f5, -2).unwrap(), f5.from_u64(3));
        assert_eq!(f.coeff(&f5, 0).unwrap(), f5.from_u64(4));
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"lo":-2,"hi":null,"terms":[[-2,[3]],[0,[4]],[1,[1]]]}"#);
        let back: LaurentSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        assert!(LaurentSeries::parse(&f5, "3x").is_err());
        assert!(serde_json::from_str::<LaurentSeries>(r#"{"lo":0,"hi":2,"terms":[[5,[1]]]}"#).is_err());
    }

    #[test]
    fn rationals() {
        let r = RationalLevel::new(-2, 6);
        assert_eq!((r.num(), r.den()), (-1, 3));
        assert_eq!(r.floor(), -1);
        assert_eq!(r.ceil(), 0);
        assert_eq!(r.frac(), RationalLevel::new(2, 3));
        assert!(RationalLevel::new(1, 3) < RationalLevel::new(1, 2));
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"num":-1,"den":3}"#);
    }
}
