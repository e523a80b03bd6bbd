use serde::Serialize;

use super::object::{functor_g, CGObject};
use crate::crystal::{FModule, KummerCrystal, Section};
use crate::error::{Error, Result};
use crate::field::{saturate_fixed_points, FieldCtx, Mat, SemilinearOperator};
use crate::series::RationalLevel;
use crate::vfilt::{graded_keys, standard_vfilt, transition, FiltrationSpec, Rule, Transition, Window};

/// `Gr^0` with the p-linear map induced by F.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NearbyUnipotent {
    pub dim: usize,
    /// `x -> frob x^(p)` in the key basis of `Gr^0`.
    pub frob: Mat,
}

impl NearbyUnipotent {
    /// F_p-dimension of the fixed points after saturating the field.
    pub fn saturated_fixed_dim(&self, ctx: &FieldCtx, cap: usize) -> Result<usize> {
        if self.dim == 0 {
            return Ok(0);
        }
        let op = SemilinearOperator::new(ctx, self.frob.clone())?;
        Ok(saturate_fixed_points(ctx, &op, cap)?.fixed.dim())
    }
}

fn require_window(spec: &FiltrationSpec, levels: &[i64]) -> Result<()> {
    for &l in levels {
        if !spec.window.contains(&RationalLevel::int(l)) {
            return Err(Error::Window(format!(
                "level {l} lies outside the window [{}, {})",
                spec.window.lo, spec.window.hi
            )));
        }
    }
    Ok(())
}

fn defined(tr: Transition, what: &str) -> Result<Transition> {
    match tr.undefined_at {
        Some((k, _)) => Err(Error::Hypothesis(format!("{what} is not defined on the graded piece: key {k:?}"))),
        None => Ok(tr),
    }
}

pub fn nearby_unipotent(spec: &FiltrationSpec, module: &FModule) -> Result<NearbyUnipotent> {
    require_window(spec, &[0])?;
    let zero = RationalLevel::int(0);
    let tr = defined(transition(spec, module, zero, zero, |x| module.frobenius(x)), "F on Gr^0")?;
    Ok(NearbyUnipotent { dim: tr.matrix.cols(), frob: tr.matrix })
}

fn apply_n(x: &Section, n: i64, f: impl Fn(&Section) -> Section) -> Section {
    (0..n).fold(x.clone(), |acc, _| f(&acc))
}

/// `Gr^{[0,1)}` as an object of the category: the piece at level `j/d` is
/// graded by the class `-j mod d`, and F into `Gr^{p j/d}` is brought back
/// into `[0,1)` by inverse `t`-multiplications.
pub fn nearby_full(spec: &FiltrationSpec, module: &FModule) -> Result<CGObject> {
    let Rule::Kummer { d, .. } = spec.rule else {
        return Err(Error::InvalidParameter("full nearby cycles need a Kummer filtration".into()));
    };
    require_window(spec, &[0])?;
    let ctx = module.ctx();
    let p = ctx.p() as i64;
    let di = d as i64;
    let mut mats: Vec<Option<Mat>> = vec![None; d as usize];
    for j in 0..di {
        let r = RationalLevel::new(j, di);
        let a = (-j).rem_euclid(di) as usize;
        let k = (p * j).div_euclid(di);
        let target = RationalLevel::new((p * j).rem_euclid(di), di);
        let tr = transition(spec, module, r, target, |x| apply_n(&module.frobenius(x), k, |y| module.t_preimage(y)));
        let tr = defined(tr, "normalized F")?;
        mats[a] = Some(tr.matrix);
    }
    let mats = mats.into_iter().map(|m| m.expect("every class is visited")).collect();
    CGObject::new(ctx, d, mats)
}

/// The vanishing pair `Gr^{-1} -> Gr^{-p}` and the `(t, t^p)` morphism to `Gr^0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vanishing {
    pub dim: usize,
    /// F from `Gr^{-1}` to `Gr^{-p}`.
    pub frob: Mat,
    /// `t: Gr^{-1} -> Gr^0`.
    pub to_nearby_source: Mat,
    /// `t^p: Gr^{-p} -> Gr^0`.
    pub to_nearby_target: Mat,
    pub nearby: NearbyUnipotent,
    /// `t^p F = F t` entrywise.
    pub intertwines: bool,
}

pub fn vanishing(spec: &FiltrationSpec, module: &FModule) -> Result<Vanishing> {
    let ctx = module.ctx();
    let p = ctx.p() as i64;
    require_window(spec, &[-p, -1, 0])?;
    let m1 = RationalLevel::int(-1);
    let mp = RationalLevel::int(-p);
    let zero = RationalLevel::int(0);
    let frob = defined(transition(spec, module, m1, mp, |x| module.frobenius(x)), "F on Gr^-1")?.matrix;
    let src = defined(transition(spec, module, m1, zero, |x| module.mul_t(x)), "t on Gr^-1")?.matrix;
    let tgt =
        defined(transition(spec, module, mp, zero, |x| apply_n(x, p, |y| module.mul_t(y))), "t^p on Gr^-p")?.matrix;
    let nearby = nearby_unipotent(spec, module)?;
    let lhs = tgt.mul(ctx, &frob);
    let rhs = nearby.frob.mul(ctx, &src.frobenius(ctx));
    Ok(Vanishing {
        dim: graded_keys(&spec.rule, m1).len(),
        intertwines: lhs == rhs,
        frob,
        to_nearby_source: src,
        to_nearby_target: tgt,
        nearby,
    })
}

/// Window wide enough for the nearby and vanishing computations.
pub fn default_window(p: u64) -> Window {
    Window::new(-(p as i64) - 1, 2)
}

/// The representation recovered from the nearby cycles of the standard filtration.
pub fn recover_rep(kc: &KummerCrystal, cap: usize) -> Result<crate::crystal::CyclicRep> {
    let spec = standard_vfilt(kc, default_window(kc.p()));
    let module = FModule::Kummer(kc.clone());
    let obj = nearby_full(&spec, &module)?;
    functor_g(&obj, kc.ctx(), cap)
}
