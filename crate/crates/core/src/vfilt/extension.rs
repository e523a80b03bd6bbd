use serde::Serialize;

use super::spec::{maximize_level, FiltrationSpec, Rule, Window};
use crate::crystal::{ExtensionModule, KummerCrystal, Mono, Section};
use crate::error::{Error, Result};
use crate::series::RationalLevel;

/// The filtration induced by the standard filtration on the Kummer cover.
pub fn standard_vfilt(kc: &KummerCrystal, window: Window) -> FiltrationSpec {
    FiltrationSpec::new(Rule::Kummer { d: kc.d, shifts: kc.shifts(), dims: kc.dims() }, window)
}

/// `level(f, g) = min(v_t(f) - n/p, -max supp(g))`, defined when `p` does not divide `n`.
pub fn mc_vfilt(module: &ExtensionModule, window: Window) -> Result<FiltrationSpec> {
    let p = module.ctx().p();
    let n = module.n.ok_or_else(|| Error::Hypothesis("c = 0: use the split filtration".into()))?;
    if n % p == 0 {
        return Err(Error::Hypothesis(format!("p = {p} divides n = {n}; the module needs a depth grading instead")));
    }
    Ok(FiltrationSpec::new(Rule::Extension { n, p }, window))
}

/// Grading with `x_i = (t^i, -e_{l-i})` in degree `i - l/p`, for `n = l p` with `p` not dividing `l`.
pub fn mc_depth_grading(module: &ExtensionModule, window: Window) -> Result<FiltrationSpec> {
    let p = module.ctx().p();
    let n = module.n.ok_or_else(|| Error::Hypothesis("c = 0 has no depth grading".into()))?;
    if n == 0 || n % p != 0 || (n / p).is_multiple_of(p) {
        return Err(Error::Hypothesis(format!("n = {n} is not l*{p} with {p} not dividing l")));
    }
    Ok(FiltrationSpec::new(Rule::DepthGrading { l: n / p, p }, window))
}

/// `e_m` at level `-m`.
pub fn delta_vfilt(window: Window) -> FiltrationSpec {
    FiltrationSpec::new(Rule::Delta, window)
}

/// Direct sum of the integer filtration and the delta filtration.
pub fn split_vfilt(p: u64, window: Window) -> FiltrationSpec {
    FiltrationSpec::new(Rule::Extension { n: 0, p }, window)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftedExactness {
    pub shift: RationalLevel,
    /// Induced levels on `e_m`, in window order.
    pub sub_levels: Vec<RationalLevel>,
    /// Induced levels on the quotient classes of `t^v`.
    pub quotient_levels: Vec<RationalLevel>,
    pub sub_matches_delta: bool,
    pub quotient_matches_shift: bool,
    pub witness: Option<String>,
}

impl ShiftedExactness {
    pub fn exact(&self) -> bool {
        self.sub_matches_delta && self.quotient_matches_shift
    }
}

/// Compares the filtrations induced on `Delta` and on `j_*O_U` with the delta
/// filtration and the integer filtration shifted by `-n/p`.
pub fn shifted_exactness(module: &ExtensionModule, spec: &FiltrationSpec) -> Result<ShiftedExactness> {
    let ctx = module.ctx();
    let (n, p) = match spec.rule {
        Rule::Extension { n, p } => (n, p),
        _ => return Err(Error::InvalidParameter("shifted exactness needs an extension filtration".into())),
    };
    if module.n.unwrap_or(0) != n || p != ctx.p() {
        return Err(Error::InvalidParameter("filtration does not match the module".into()));
    }
    let shift = RationalLevel::new(-(n as i64), p as i64);
    let window = spec.window;
    let delta = delta_vfilt(window);
    let mut witness = None;

    let mut sub_levels = Vec::new();
    let mut sub_ok = true;
    for k in delta.family() {
        let x = Section::unit(ctx, k);
        let got = spec.level(ctx, &x);
        let want = delta.level(ctx, &x);
        if got != want {
            sub_ok = false;
            witness.get_or_insert_with(|| format!("e_{} has level {got:?} in the sub, expected {want:?}", -k.exp));
        }
        sub_levels.extend(got);
    }

    // Lifts of a quotient class differ by delta sections; a pole order past
    // the window cannot beat the `g = 0` lift.
    let lo = RationalLevel::int(window.lo).sub(&RationalLevel::int(1));
    let free: Vec<Section> =
        delta.rule.keys_in(lo, RationalLevel::int(window.hi)).into_iter().map(|k| Section::unit(ctx, k)).collect();
    let mut quotient_levels = Vec::new();
    let mut quot_ok = true;
    let v0 = RationalLevel::int(window.lo).sub(&shift).ceil();
    let v1 = RationalLevel::int(window.hi).sub(&shift).ceil();
    for v in v0..v1 {
        let x = Section::unit(ctx, Mono::new(0, 0, v));
        let (_, got) = maximize_level(&spec.rule, ctx, &x, &free);
        let want = RationalLevel::int(v).add(&shift);
        if got != Some(want) {
            quot_ok = false;
            witness.get_or_insert_with(|| format!("t^{v} has quotient level {got:?}, expected {want}"));
        }
        quotient_levels.extend(got);
    }
    Ok(ShiftedExactness {
        shift,
        sub_levels,
        quotient_levels,
        sub_matches_delta: sub_ok,
        quotient_matches_shift: quot_ok,
        witness,
    })
}
