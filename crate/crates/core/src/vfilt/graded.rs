use serde::Serialize;

use super::spec::{FiltrationSpec, Rule};
use crate::crystal::{FModule, Mono, Section};
use crate::field::{FieldCtx, Mat};
use crate::series::RationalLevel;

/// Matrix of a map between graded pieces, in the key bases of both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transition {
    pub source: RationalLevel,
    pub target: RationalLevel,
    /// Rows indexed by target keys, columns by source keys.
    pub matrix: Mat,
    /// Set when some source image falls below the target level, so no
    /// induced map exists; holds the offending key and the image level.
    pub undefined_at: Option<(Mono, Option<RationalLevel>)>,
}

impl Transition {
    pub fn is_iso(&self, ctx: &FieldCtx) -> bool {
        self.undefined_at.is_none() && self.matrix.is_square() && self.matrix.is_invertible(ctx)
    }
}

/// Generators of `Gr^r`.
pub fn graded_keys(rule: &Rule, r: RationalLevel) -> Vec<Mono> {
    rule.keys_at(r).into_iter().filter(|k| rule.is_generator(k)).collect()
}

/// Assembles the map `Gr^source -> Gr^target` induced by `op`.
pub fn transition(
    spec: &FiltrationSpec,
    module: &FModule,
    source: RationalLevel,
    target: RationalLevel,
    op: impl Fn(&Section) -> Section,
) -> Transition {
    let ctx = module.ctx();
    let rule = &spec.rule;
    let src = graded_keys(rule, source);
    let tgt = graded_keys(rule, target);
    let mut matrix = Mat::zeros(ctx, tgt.len(), src.len());
    let mut undefined_at = None;
    for (j, k) in src.iter().enumerate() {
        let img = op(&rule.basis_section(ctx, k));
        let lvl = rule.level(ctx, &img);
        if lvl.is_some_and(|l| l < target) {
            undefined_at.get_or_insert((*k, lvl));
            continue;
        }
        let coords = rule.coordinates(ctx, &img);
        for (i, tk) in tgt.iter().enumerate() {
            if let Some(c) = coords.get(tk) {
                matrix.set(i, j, c.clone());
            }
        }
    }
    Transition { source, target, matrix, undefined_at }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedLevel {
    pub level: RationalLevel,
    pub dim: usize,
    /// F into `Gr^{p r}` (p-linear: columns are images of basis vectors).
    pub frob: Transition,
    /// Multiplication by `t` into `Gr^{r+1}`.
    pub mul_t: Transition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedReport {
    pub levels: Vec<GradedLevel>,
}

impl GradedReport {
    pub fn at(&self, r: RationalLevel) -> Option<&GradedLevel> {
        self.levels.iter().find(|g| g.level == r)
    }

    pub fn dims(&self) -> Vec<(RationalLevel, usize)> {
        self.levels.iter().map(|g| (g.level, g.dim)).collect()
    }
}

/// Graded pieces at every jump in the window, with the maps induced by F and `t`.
pub fn graded(spec: &FiltrationSpec, module: &FModule) -> GradedReport {
    let p = module.p() as i64;
    let levels = spec
        .jumps()
        .into_iter()
        .map(|r| GradedLevel {
            level: r,
            dim: graded_keys(&spec.rule, r).len(),
            frob: transition(spec, module, r, r.scale(p), |x| module.frobenius(x)),
            mul_t: transition(spec, module, r, r.add_int(1), |x| module.mul_t(x)),
        })
        .collect();
    GradedReport { levels }
}
