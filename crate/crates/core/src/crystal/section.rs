use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::field::{FieldCtx, FieldElem};

/// A monomial section.
///
/// For Kummer crystals `comp` is the weight class, `sub` the index in the
/// weight basis and `exp` the exponent of the cover variable `s`. For
/// extension modules `comp = 0` is the `j_*O_U` part with `exp` the power of
/// `t`, and `comp = 1` is the delta part with `exp = -m` standing for `e_m`.
/// `u` is the power of the new uniformizer after a Kummer pullback.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mono {
    pub comp: u32,
    pub sub: u32,
    pub exp: i64,
    pub u: u32,
}

impl Mono {
    pub fn new(comp: u32, sub: u32, exp: i64) -> Self {
        Mono { comp, sub, exp, u: 0 }
    }

    pub fn with_u(self, u: u32) -> Self {
        Mono { u, ..self }
    }
}

/// Finite linear combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Section {
    terms: BTreeMap<Mono, FieldElem>,
}

impl Section {
    pub fn zero() -> Self {
        Section::default()
    }

    pub fn mono(m: Mono, c: FieldElem) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Section { terms }
    }

    pub fn unit(ctx: &FieldCtx, m: Mono) -> Self {
        Self::mono(m, ctx.one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &FieldElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Option<&FieldElem> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, ctx: &FieldCtx, m: Mono, c: &FieldElem) {
        if c.is_zero() {
            return;
        }
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

    pub fn add(&self, ctx: &FieldCtx, o: &Section) -> Section {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(ctx, *m, c);
        }
        out
    }

    pub fn sub(&self, ctx: &FieldCtx, o: &Section) -> Section {
        self.add(ctx, &o.scale(ctx, &ctx.from_i64(-1)))
    }

    pub fn scale(&self, ctx: &FieldCtx, k: &FieldElem) -> Section {
        if k.is_zero() {
            return Section::zero();
        }
        Section { terms: self.terms.iter().map(|(m, c)| (*m, ctx.mul(c, k))).collect() }
    }

    /// Applies `f` to every monomial, dropping those mapped to `None`.
    pub fn map_monos(&self, ctx: &FieldCtx, f: impl Fn(&Mono) -> Option<Mono>) -> Section {
        let mut out = Section::zero();
        for (m, c) in &self.terms {
            if let Some(n) = f(m) {
                out.add_term(ctx, n, c);
            }
        }
        out
    }

    pub fn from_terms(ctx: &FieldCtx, terms: impl IntoIterator<Item = (Mono, FieldElem)>) -> Section {
        let mut out = Section::zero();
        for (m, c) in terms {
            out.add_term(ctx, m, &c);
        }
        out
    }
}
