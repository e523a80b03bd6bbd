use serde::Serialize;

use super::rep::{frobenius_on_weights, weight_decompose, CyclicRep, WeightDecomposition};
use super::section::{Mono, Section};
use crate::error::Result;
use crate::field::{mu_log, semilinear_fixed_points, FieldCtx, FieldElem, FixedPoints, Mat, SemilinearOperator};
use crate::series::{galois_act, LaurentSeries};

/// Data of one weight class of a Kummer crystal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightData {
    pub a: u64,
    pub dim: usize,
    /// Exponents of `s` allowed with this weight are `shift mod d`.
    pub shift: u64,
    /// Matrix of F from class `a` to class `p a mod d`.
    pub frob: Mat,
}

/// The descent of `W (x) O_V` along the cover `s^d = t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KummerCrystal {
    #[serde(skip)]
    ctx: FieldCtx,
    pub d: u64,
    pub rank: usize,
    pub weights: Vec<WeightData>,
    pub decomposition: WeightDecomposition,
    #[serde(skip)]
    rep_mat: Mat,
}

pub fn build_kummer_crystal(rep: &CyclicRep, ctx: &FieldCtx) -> Result<KummerCrystal> {
    let dec = weight_decompose(rep, ctx)?;
    let frobs = frobenius_on_weights(&dec, ctx)?;
    let d = rep.d();
    let mut weights = Vec::with_capacity(d as usize);
    let mut chi = ctx.one();
    for (a, frob) in frobs.into_iter().enumerate() {
        let inv = ctx.inv(&chi).expect("roots of unity are units");
        let shift = mu_log(ctx, &inv, &dec.xi, d)?;
        weights.push(WeightData { a: a as u64, dim: dec.bases[a].len(), shift, frob });
        chi = ctx.mul(&chi, &dec.xi);
    }
    Ok(KummerCrystal {
        ctx: ctx.clone(),
        d,
        rank: rep.rank(),
        weights,
        decomposition: dec,
        rep_mat: Mat::from_fp(ctx, rep.mat()),
    })
}

impl KummerCrystal {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.weights.iter().map(|w| w.dim).collect()
    }

    pub fn shifts(&self) -> Vec<u64> {
        self.weights.iter().map(|w| w.shift).collect()
    }

    pub fn xi(&self) -> &FieldElem {
        &self.decomposition.xi
    }

    /// The representation matrix over F_q.
    pub fn rep_matrix(&self) -> &Mat {
        &self.rep_mat
    }

    pub fn frobenius(&self, x: &Section) -> Section {
        let ctx = &self.ctx;
        let (p, d) = (self.p(), self.d);
        let mut out = Section::zero();
        for (m, c) in x.terms() {
            let w = &self.weights[m.comp as usize];
            let target = ((p * m.comp as u64) % d) as u32;
            let cp = ctx.frobenius(c);
            for j in 0..w.frob.rows() {
                let b = w.frob.get(j, m.sub as usize);
                if !b.is_zero() {
                    out.add_term(ctx, Mono::new(target, j as u32, m.exp * p as i64), &ctx.mul(&cp, b));
                }
            }
        }
        out
    }

    pub fn mul_t(&self, x: &Section) -> Section {
        let d = self.d as i64;
        x.map_monos(&self.ctx, |m| Some(Mono { exp: m.exp + d, ..*m }))
    }

    pub fn t_preimage(&self, x: &Section) -> Section {
        let d = self.d as i64;
        x.map_monos(&self.ctx, |m| Some(Mono { exp: m.exp - d, ..*m }))
    }

    /// Whether `exp` is an allowed exponent for class `a`.
    pub fn admits(&self, a: usize, exp: i64) -> bool {
        exp.rem_euclid(self.d as i64) == self.weights[a].shift as i64
    }

    /// The `s`-series attached to each basis vector of `W`: the section
    /// viewed upstairs in `W (x) O_V` with `W` in its F_p-basis.
    pub fn upstairs(&self, x: &Section) -> Vec<LaurentSeries> {
        let ctx = &self.ctx;
        let r = self.rank;
        let mut comps: Vec<Vec<(i64, FieldElem)>> = vec![Vec::new(); r];
        for (m, c) in x.terms() {
            let w = &self.decomposition.bases[m.comp as usize][m.sub as usize];
            for (k, wk) in w.iter().enumerate() {
                if !wk.is_zero() {
                    comps[k].push((m.exp, ctx.mul(c, wk)));
                }
            }
        }
        comps.into_iter().map(|t| LaurentSeries::poly(ctx, t)).collect()
    }

    /// Applies the generator diagonally on `W (x) O_V`: the representation on
    /// `W` and `s -> xi s` on functions.
    pub fn act_upstairs(&self, v: &[LaurentSeries]) -> Vec<LaurentSeries> {
        let ctx = &self.ctx;
        let moved: Vec<LaurentSeries> = v.iter().map(|f| galois_act(ctx, 1, f, self.xi(), self.d)).collect();
        (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .fold(LaurentSeries::zero(), |acc, j| acc.add(ctx, &moved[j].scale(ctx, self.rep_mat.get(i, j))))
            })
            .collect()
    }
}

/// Fixed points of F on global sections over F_q. F multiplies exponents
/// by p, so only the exponent-0 part of class 0 can be fixed; there F is
/// `x -> B_0 x^(p)`.
pub fn sol_kummer(kc: &KummerCrystal) -> Result<FixedPoints> {
    let ctx = kc.ctx();
    let b0 = &kc.weights[0].frob;
    if b0.rows() == 0 {
        return Ok(FixedPoints { basis: Vec::new() });
    }
    let op = SemilinearOperator::new(ctx, b0.clone())?;
    Ok(semilinear_fixed_points(ctx, &op))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn trivial_crystal() {
        let ctx = make_field(5, 1).unwrap();
        let kc = build_kummer_crystal(&CyclicRep::trivial(5, 1, 1).unwrap(), &ctx).unwrap();
        assert_eq!(kc.weights.len(), 1);
        assert_eq!((kc.weights[0].dim, kc.weights[0].shift), (1, 0));
        assert_eq!(kc.weights[0].frob, Mat::identity(&ctx, 1));
    }

    #[test]
    fn companion_shifts() {
        let ctx = make_field(5, 2).unwrap();
        let kc = build_kummer_crystal(&CyclicRep::companion(5, 3).unwrap(), &ctx).unwrap();
        assert_eq!(kc.dims(), vec![0, 1, 1]);
        assert_eq!(kc.shifts(), vec![0, 2, 1]);
    }

    #[test]
    fn rank_two_trivial() {
        let ctx = make_field(7, 1).unwrap();
        let kc = build_kummer_crystal(&CyclicRep::trivial(7, 3, 2).unwrap(), &ctx).unwrap();
        assert_eq!(kc.dims(), vec![2, 0, 0]);
    }

    #[test]
    fn allowed_monomials_are_invariant() {
        let ctx = make_field(7, 1).unwrap();
        let rep = CyclicRep::regular(7, 3).unwrap().direct_sum(&CyclicRep::companion(7, 3).unwrap()).unwrap();
        let kc = build_kummer_crystal(&rep, &ctx).unwrap();
        for a in 0..3 {
            for sub in 0..kc.weights[a].dim {
                for exp in -4..5 {
                    let x = Section::unit(&ctx, Mono::new(a as u32, sub as u32, exp));
                    let up = kc.upstairs(&x);
                    assert_eq!(kc.act_upstairs(&up) == up, kc.admits(a, exp), "a={a} exp={exp}");
                }
            }
        }
    }

    #[test]
    fn frobenius_matches_upstairs() {
        let ctx = make_field(5, 2).unwrap();
        let kc = build_kummer_crystal(&CyclicRep::regular(5, 3).unwrap(), &ctx).unwrap();
        let g = ctx.generator().unwrap();
        for a in 0..3u32 {
            let exp = kc.weights[a as usize].shift as i64 - 3;
            let x = Section::mono(Mono::new(a, 0, exp), g.clone());
            let down = kc.upstairs(&kc.frobenius(&x));
            let up: Vec<LaurentSeries> = kc.upstairs(&x).iter().map(|f| crate::series::frob_series(&ctx, f)).collect();
            assert_eq!(down, up);
        }
    }
}
