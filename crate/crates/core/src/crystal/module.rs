use serde::Serialize;

use super::extension::{extension_mul_t, extension_t_preimage, ExtensionModule};
use super::kummer::KummerCrystal;
use super::section::{Mono, Section};
use crate::field::FieldCtx;

/// The unit F-modules handled by the filtration engine.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FModule {
    Kummer(KummerCrystal),
    Extension(ExtensionModule),
    /// Delta functions alone, with `F(e_m) = e_{pm}`.
    Delta {
        #[serde(skip)]
        ctx: FieldCtx,
    },
    /// Pullback along `u^degree = t`; sections are base sections times `u^k`, `0 <= k < degree`.
    Pulled {
        base: Box<FModule>,
        degree: u64,
    },
}

impl FModule {
    pub fn delta(ctx: &FieldCtx) -> Self {
        FModule::Delta { ctx: ctx.clone() }
    }

    pub fn pulled(base: FModule, degree: u64) -> Self {
        assert!(degree >= 1);
        FModule::Pulled { base: Box::new(base), degree }
    }

    pub fn ctx(&self) -> &FieldCtx {
        match self {
            FModule::Kummer(k) => k.ctx(),
            FModule::Extension(e) => e.ctx(),
            FModule::Delta { ctx } => ctx,
            FModule::Pulled { base, .. } => base.ctx(),
        }
    }

    pub fn p(&self) -> u64 {
        self.ctx().p()
    }

    /// The p-linear endomorphism F.
    pub fn frobenius(&self, x: &Section) -> Section {
        match self {
            FModule::Kummer(k) => k.frobenius(x),
            FModule::Extension(e) => e.frobenius(x),
            FModule::Delta { ctx } => {
                let p = ctx.p() as i64;
                let mut out = Section::zero();
                for (m, c) in x.terms() {
                    out.add_term(ctx, Mono { exp: m.exp * p, ..*m }, &ctx.frobenius(c));
                }
                out
            }
            FModule::Pulled { base, degree } => {
                let ctx = base.ctx();
                let (p, d) = (base.p(), *degree);
                let mut out = Section::zero();
                for (m, c) in x.terms() {
                    let k = m.u as u64 * p;
                    let mut img = base.frobenius(&Section::mono(m.with_u(0), c.clone()));
                    for _ in 0..k / d {
                        img = base.mul_t(&img);
                    }
                    out = out.add(ctx, &img.map_monos(ctx, |n| Some(n.with_u((k % d) as u32))));
                }
                out
            }
        }
    }

    pub fn mul_t(&self, x: &Section) -> Section {
        match self {
            FModule::Kummer(k) => k.mul_t(x),
            FModule::Extension(_) | FModule::Delta { .. } => extension_mul_t(self.ctx(), x),
            FModule::Pulled { base, .. } => base.mul_t(x),
        }
    }

    /// Multiplication by the local equation of the divisor: `t`, or `u` after a pullback.
    pub fn mul_uniformizer(&self, x: &Section) -> Section {
        match self {
            FModule::Pulled { base, degree } => {
                let ctx = base.ctx();
                let mut out = Section::zero();
                for (m, c) in x.terms() {
                    let k = m.u as u64 + 1;
                    let piece = if k == *degree {
                        base.mul_t(&Section::mono(m.with_u(0), c.clone()))
                    } else {
                        Section::mono(m.with_u(k as u32), c.clone())
                    };
                    out = out.add(ctx, &piece);
                }
                out
            }
            _ => self.mul_t(x),
        }
    }

    /// Some `y` with `t y = x`.
    pub fn t_preimage(&self, x: &Section) -> Section {
        match self {
            FModule::Kummer(k) => k.t_preimage(x),
            FModule::Extension(_) | FModule::Delta { .. } => extension_t_preimage(self.ctx(), x),
            FModule::Pulled { base, .. } => base.t_preimage(x),
        }
    }

    /// A basis of the kernel of `t`.
    pub fn t_kernel(&self) -> Vec<Section> {
        match self {
            FModule::Kummer(_) => Vec::new(),
            FModule::Extension(_) | FModule::Delta { .. } => {
                vec![Section::unit(self.ctx(), Mono::new(1, 0, -1))]
            }
            FModule::Pulled { base, degree } => {
                let ctx = base.ctx();
                base.t_kernel()
                    .iter()
                    .flat_map(|s| (0..*degree).map(move |k| s.map_monos(ctx, |m| Some(m.with_u(k as u32)))))
                    .collect()
            }
        }
    }
}
