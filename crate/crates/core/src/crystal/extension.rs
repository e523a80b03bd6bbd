use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::section::{Mono, Section};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::series::{frob_series, LaurentSeries, Valuation};

/// `sum g_m t^{-m}` modulo regular functions; keys are `m >= 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeltaElement {
    terms: BTreeMap<u64, FieldElem>,
}

impl DeltaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `e_m`, the class of `t^{-m}`.
    pub fn e(ctx: &FieldCtx, m: u64) -> Self {
        Self::from_terms(ctx, [(m, ctx.one())])
    }

    pub fn from_terms(ctx: &FieldCtx, terms: impl IntoIterator<Item = (u64, FieldElem)>) -> Self {
        let mut out = DeltaElement::zero();
        for (m, c) in terms {
            assert!(m >= 1, "delta classes start at e_1");
            out.add_term(ctx, m, &c);
        }
        out
    }

    /// Negative-exponent part of a Laurent series.
    pub fn class_of(ctx: &FieldCtx, f: &LaurentSeries) -> Result<Self> {
        if f.hi().is_some_and(|h| h <= 0) {
            return Err(Error::Window("polar part is beyond the known precision".into()));
        }
        Ok(Self::from_terms(ctx, f.terms().filter(|(e, _)| *e < 0).map(|(e, c)| ((-e) as u64, c.clone()))))
    }

    fn add_term(&mut self, ctx: &FieldCtx, m: u64, c: &FieldElem) {
        let v = match self.terms.get(&m) {
            Some(old) => ctx.add(old, c),
            None => c.clone(),
        };
        if v.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, v);
        }
    }

    pub fn add(&self, ctx: &FieldCtx, o: &Self) -> Self {
        let mut out = self.clone();
        for (&m, c) in &o.terms {
            out.add_term(ctx, m, c);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &FieldElem)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_support(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    /// `g -> g^p`: `e_m -> e_{pm}` with coefficients raised to the p-th power.
    pub fn frobenius(&self, ctx: &FieldCtx) -> Self {
        let p = ctx.p();
        DeltaElement { terms: self.terms.iter().map(|(&m, c)| (m * p, ctx.frobenius(c))).collect() }
    }

    /// Multiplication by `t`: `e_m -> e_{m-1}`, with `e_0 = 0`.
    pub fn mul_t(&self) -> Self {
        DeltaElement { terms: self.terms.iter().filter(|(&m, _)| m > 1).map(|(&m, c)| (m - 1, c.clone())).collect() }
    }
}

/// `M_c = j_*O_U (+) Delta` with `F(f, g) = (f^p, t f^p c + g^p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionModule {
    #[serde(skip)]
    ctx: FieldCtx,
    pub c: LaurentSeries,
    /// `-v_t(c) - 1`; absent in the split case `c = 0`.
    pub n: Option<u64>,
    #[serde(rename = "N")]
    pub cap: u64,
}

pub fn build_extension(c: &LaurentSeries, cap: u64, ctx: &FieldCtx) -> Result<ExtensionModule> {
    if !c.is_exact() {
        return Err(Error::InvalidParameter("the class c(t) must be a Laurent polynomial".into()));
    }
    let n = match c.valuation() {
        Valuation::Finite(v) if v <= -1 => Some((-v - 1) as u64),
        Valuation::Finite(v) => {
            return Err(Error::InvalidParameter(format!(
                "c(t) has valuation {v}; only pole classes (valuation <= -1) or c = 0 are accepted"
            )))
        }
        Valuation::Infinite { .. } => None,
    };
    Ok(ExtensionModule { ctx: ctx.clone(), c: c.clone(), n, cap })
}

impl ExtensionModule {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn is_split(&self) -> bool {
        self.c.is_zero()
    }

    pub fn apply_f(&self, f: &LaurentSeries, g: &DeltaElement) -> Result<(LaurentSeries, DeltaElement)> {
        let ctx = &self.ctx;
        let fp = frob_series(ctx, f);
        let middle = fp.mul(ctx, &self.c).shift(1);
        let g2 = DeltaElement::class_of(ctx, &middle)?.add(ctx, &g.frobenius(ctx));
        Ok((fp, g2))
    }

    /// Splits a section into its `(f, g)` components.
    pub fn components(&self, x: &Section) -> (LaurentSeries, DeltaElement) {
        let ctx = &self.ctx;
        let f = LaurentSeries::poly(ctx, x.terms().filter(|(m, _)| m.comp == 0).map(|(m, c)| (m.exp, c.clone())));
        let g = DeltaElement::from_terms(
            ctx,
            x.terms().filter(|(m, _)| m.comp == 1).map(|(m, c)| ((-m.exp) as u64, c.clone())),
        );
        (f, g)
    }

    pub fn section(&self, f: &LaurentSeries, g: &DeltaElement) -> Section {
        let ctx = &self.ctx;
        let fs = f.terms().map(|(e, c)| (Mono::new(0, 0, e), c.clone()));
        let gs = g.terms().map(|(m, c)| (Mono::new(1, 0, -(m as i64)), c.clone()));
        Section::from_terms(ctx, fs.chain(gs))
    }

    pub fn frobenius(&self, x: &Section) -> Section {
        let (f, g) = self.components(x);
        let (f2, g2) = self.apply_f(&f, &g).expect("exact sections have exact images");
        self.section(&f2, &g2)
    }
}

/// Multiplication by `t` on monomials of `j_*O_U (+) Delta`.
pub(crate) fn extension_mul_t(ctx: &FieldCtx, x: &Section) -> Section {
    x.map_monos(ctx, |m| {
        let exp = m.exp + 1;
        (m.comp == 0 || exp < 0).then_some(Mono { exp, ..*m })
    })
}

/// One preimage under `t`; the kernel of `t` is spanned by `e_1`.
pub(crate) fn extension_t_preimage(ctx: &FieldCtx, x: &Section) -> Section {
    x.map_monos(ctx, |m| Some(Mono { exp: m.exp - 1, ..*m }))
}

/// Result of solving `F(x) = x` on global sections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionSolutions {
    pub dim: usize,
    /// `(f, g)` pairs spanning the solutions over F_p.
    pub basis: Vec<(LaurentSeries, DeltaElement)>,
    /// Pole order of `t c(t)`; coefficients beyond it only propagate.
    pub pole_order: u64,
}

/// Fixed points of F on `k[t, 1/t] (+) Delta`.
///
/// `f = f^p` forces `f` to be a constant `lambda` in F_p; the delta part
/// then satisfies `g_m = lambda c'_m + [p | m] g_{m/p}^p` with `c' = t c`.
/// Past the pole order `P` of `c'` the recursion only moves `g_m` to
/// `g_{pm}`, so `g` has finite support iff `g_m = 0` for `P/p < m <= P`.
pub fn sol_extension(module: &ExtensionModule, cap: u64) -> Result<ExtensionSolutions> {
    let ctx = module.ctx();
    let p = ctx.p();
    let cprime = module.c.shift(1);
    let polar = DeltaElement::class_of(ctx, &cprime)?;
    let big_p = polar.max_support().unwrap_or(0);
    if big_p > cap {
        return Err(Error::RecursionCap { cap, needed: big_p });
    }
    let mut g: BTreeMap<u64, FieldElem> = BTreeMap::new();
    for m in 1..=big_p {
        let mut v = polar.terms.get(&m).cloned().unwrap_or_else(|| ctx.zero());
        if m % p == 0 {
            if let Some(prev) = g.get(&(m / p)) {
                v = ctx.add(&v, &ctx.frobenius(prev));
            }
        }
        if !v.is_zero() {
            g.insert(m, v);
        }
    }
    let finite = g.keys().all(|&m| m * p <= big_p);
    let basis = if finite {
        let one = LaurentSeries::constant(ctx, ctx.one());
        vec![(one, DeltaElement { terms: g })]
    } else {
        Vec::new()
    };
    Ok(ExtensionSolutions { dim: basis.len(), basis, pole_order: big_p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn module(p: u64, c: &str) -> ExtensionModule {
        let ctx = make_field(p, 1).unwrap();
        let c = if c == "0" { LaurentSeries::zero() } else { LaurentSeries::parse(&ctx, c).unwrap() };
        build_extension(&c, 64, &ctx).unwrap()
    }

    #[test]
    fn pole_data() {
        assert_eq!(module(5, "t^-2").n, Some(1));
        assert_eq!(module(5, "0").n, None);
        assert_eq!(module(5, "t^-11").n, Some(10));
        let ctx = make_field(5, 1).unwrap();
        assert!(build_extension(&LaurentSeries::t(&ctx), 64, &ctx).is_err());
    }

    #[test]
    fn frobenius_examples() {
        let m = module(5, "t^-2");
        let ctx = m.ctx().clone();
        let one = LaurentSeries::constant(&ctx, ctx.one());
        assert_eq!(m.apply_f(&one, &DeltaElement::zero()).unwrap(), (one.clone(), DeltaElement::e(&ctx, 1)));
        let t = LaurentSeries::t(&ctx);
        let t5 = LaurentSeries::monomial(&ctx, ctx.one(), 5);
        assert_eq!(m.apply_f(&t, &DeltaElement::zero()).unwrap(), (t5, DeltaElement::zero()));
        for c in ["t^-2", "0", "3t^-4+t^-1"] {
            let m = module(5, c);
            assert_eq!(
                m.apply_f(&LaurentSeries::zero(), &DeltaElement::e(&ctx, 1)).unwrap(),
                (LaurentSeries::zero(), DeltaElement::e(&ctx, 5))
            );
        }
    }

    #[test]
    fn solutions() {
        assert_eq!(sol_extension(&module(5, "0"), 64).unwrap().dim, 1);
        assert_eq!(sol_extension(&module(5, "t^-2"), 64).unwrap().dim, 0);
        let s = sol_extension(&module(5, "t^-2-t^-6"), 64).unwrap();
        assert_eq!(s.dim, 1);
        let m = module(5, "t^-2-t^-6");
        let (f, g) = &s.basis[0];
        assert_eq!(&m.apply_f(f, g).unwrap(), &(f.clone(), g.clone()));
        assert!(matches!(sol_extension(&module(5, "t^-9"), 4), Err(Error::RecursionCap { .. })));
    }
}
