use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::crystal::{Mono, Section};
use crate::field::{FieldCtx, FieldElem};
use crate::series::{standard_level, LaurentSeries, RationalLevel};

/// Integer level window `[lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Self {
        assert!(lo < hi, "empty window");
        Window { lo, hi }
    }

    /// `[-n, n)`.
    pub fn symmetric(n: i64) -> Self {
        Self::new(-n, n)
    }

    pub fn contains(&self, r: &RationalLevel) -> bool {
        *r >= RationalLevel::int(self.lo) && *r < RationalLevel::int(self.hi)
    }
}

/// How the level of a section is computed.
///
/// Every rule fixes an adapted basis of the module (its keys); a section's
/// level is the minimum key level over its nonzero adapted coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    /// Standard filtration on a Kummer crystal: `w (x) s^e` has level `e/d`.
    Kummer { d: u64, shifts: Vec<u64>, dims: Vec<usize> },
    /// `(t^v, 0)` at `v - n/p` and `(0, e_m)` at `-m`.
    Extension { n: u64, p: u64 },
    /// `e_m` at `-m`.
    Delta,
    /// `x_i = (t^i, -t^{i-l})` at `i - l/p` and `(0, e_m)` at `-m`.
    DepthGrading { l: u64, p: u64 },
    /// `V'^r = V^{r + offset}`.
    Shifted { base: Box<Rule>, offset: RationalLevel },
    /// `pi^* V` along `u^degree = t`.
    Pulled { base: Box<Rule>, degree: u64 },
}

fn ceil_int(r: RationalLevel) -> i64 {
    r.ceil()
}

/// Monomials `(0,0,v)` with `v - shift` in `[lo, hi)`.
fn f_keys(lo: RationalLevel, hi: RationalLevel, shift: RationalLevel) -> impl Iterator<Item = Mono> {
    (ceil_int(lo.add(&shift))..ceil_int(hi.add(&shift))).map(|v| Mono::new(0, 0, v))
}

/// Delta monomials `e_m` with `-m` in `[lo, hi)`.
fn delta_keys(lo: RationalLevel, hi: RationalLevel) -> impl Iterator<Item = Mono> {
    let first = (hi.scale(-1).floor() + 1).max(1);
    let last = lo.scale(-1).floor();
    (first..=last).map(|m| Mono::new(1, 0, -m))
}

impl Rule {
    pub fn key_level(&self, k: &Mono) -> RationalLevel {
        match self {
            Rule::Kummer { d, .. } => RationalLevel::new(k.exp, *d as i64),
            Rule::Extension { n: s, p } | Rule::DepthGrading { l: s, p } => match k.comp {
                0 => RationalLevel::int(k.exp).sub(&RationalLevel::new(*s as i64, *p as i64)),
                _ => RationalLevel::int(k.exp),
            },
            Rule::Delta => RationalLevel::int(k.exp),
            Rule::Shifted { base, offset } => base.key_level(k).sub(offset),
            Rule::Pulled { base, .. } => base.key_level(&k.with_u(0)),
        }
    }

    /// Adapted basis elements with level in `[lo, hi)`, sorted by level then key.
    pub fn keys_in(&self, lo: RationalLevel, hi: RationalLevel) -> Vec<Mono> {
        let mut out: Vec<Mono> = match self {
            Rule::Kummer { d, shifts, dims } => {
                let d = *d as i64;
                let (e0, e1) = (ceil_int(lo.scale(d)), ceil_int(hi.scale(d)));
                let mut v = Vec::new();
                for (a, (&sh, &dim)) in shifts.iter().zip(dims).enumerate() {
                    for e in e0..e1 {
                        if e.rem_euclid(d) == sh as i64 {
                            v.extend((0..dim).map(|i| Mono::new(a as u32, i as u32, e)));
                        }
                    }
                }
                v
            }
            Rule::Extension { n: s, p } | Rule::DepthGrading { l: s, p } => {
                let shift = RationalLevel::new(*s as i64, *p as i64);
                f_keys(lo, hi, shift).chain(delta_keys(lo, hi)).collect()
            }
            Rule::Delta => delta_keys(lo, hi).collect(),
            Rule::Shifted { base, offset } => base.keys_in(lo.add(offset), hi.add(offset)),
            Rule::Pulled { base, degree } => {
                base.keys_in(lo, hi).into_iter().flat_map(|k| (0..*degree).map(move |u| k.with_u(u as u32))).collect()
            }
        };
        out.sort_by_key(|k| (self.key_level(k), *k));
        out
    }

    /// Keys at exactly level `r`.
    pub fn keys_at(&self, r: RationalLevel) -> Vec<Mono> {
        let lo = RationalLevel::int(r.floor());
        self.keys_in(lo, lo.add_int(1)).into_iter().filter(|k| self.key_level(k) == r).collect()
    }

    /// Keys that generate graded pieces over the special fiber. After a
    /// pullback these are the `u^0` keys.
    pub fn is_generator(&self, k: &Mono) -> bool {
        match self {
            Rule::Pulled { .. } => k.u == 0,
            Rule::Shifted { base, .. } => base.is_generator(k),
            _ => true,
        }
    }

    /// The module section represented by an adapted key.
    pub fn basis_section(&self, ctx: &FieldCtx, k: &Mono) -> Section {
        match self {
            Rule::DepthGrading { l, .. } if k.comp == 0 => {
                let mut s = Section::unit(ctx, *k);
                let m = *l as i64 - k.exp;
                if m >= 1 {
                    s.add_term(ctx, Mono::new(1, 0, -m), &ctx.from_i64(-1));
                }
                s
            }
            Rule::Shifted { base, .. } => base.basis_section(ctx, k),
            Rule::Pulled { base, .. } => base.basis_section(ctx, &k.with_u(0)).map_monos(ctx, |m| Some(m.with_u(k.u))),
            _ => Section::unit(ctx, *k),
        }
    }

    /// Adapted coordinates of a section.
    pub fn coordinates(&self, ctx: &FieldCtx, x: &Section) -> BTreeMap<Mono, FieldElem> {
        match self {
            Rule::DepthGrading { l, .. } => {
                let l = *l as i64;
                let mut out: BTreeMap<Mono, FieldElem> = BTreeMap::new();
                let mut delta: BTreeMap<i64, FieldElem> = BTreeMap::new();
                for (m, c) in x.terms() {
                    if m.comp == 0 {
                        out.insert(*m, c.clone());
                        if l - m.exp >= 1 {
                            let e = delta.entry(m.exp - l).or_insert_with(|| ctx.zero());
                            *e = ctx.add(e, c);
                        }
                    } else {
                        let e = delta.entry(m.exp).or_insert_with(|| ctx.zero());
                        *e = ctx.add(e, c);
                    }
                }
                for (exp, c) in delta {
                    if !c.is_zero() {
                        out.insert(Mono::new(1, 0, exp), c);
                    }
                }
                out
            }
            Rule::Shifted { base, .. } => base.coordinates(ctx, x),
            Rule::Pulled { base, .. } => {
                let mut groups: BTreeMap<u32, Section> = BTreeMap::new();
                for (m, c) in x.terms() {
                    groups.entry(m.u).or_default().add_term(ctx, m.with_u(0), c);
                }
                let mut out = BTreeMap::new();
                for (u, s) in groups {
                    for (k, c) in base.coordinates(ctx, &s) {
                        out.insert(k.with_u(u), c);
                    }
                }
                out
            }
            _ => x.terms().map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// Level of a section; `None` for zero (level `+infinity`).
    pub fn level(&self, ctx: &FieldCtx, x: &Section) -> Option<RationalLevel> {
        match self {
            Rule::Kummer { d, .. } => {
                let mut comps: BTreeMap<(u32, u32), Vec<(i64, FieldElem)>> = BTreeMap::new();
                for (m, c) in x.terms() {
                    comps.entry((m.comp, m.sub)).or_default().push((m.exp, c.clone()));
                }
                comps.into_values().filter_map(|terms| standard_level(&LaurentSeries::poly(ctx, terms), *d).ok()).min()
            }
            Rule::Shifted { base, offset } => base.level(ctx, x).map(|l| l.sub(offset)),
            _ => self.coordinates(ctx, x).keys().map(|k| self.key_level(k)).min(),
        }
    }
}

/// A rule together with the window in which it is examined.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiltrationSpec {
    #[serde(flatten)]
    pub rule: Rule,
    pub window: Window,
}

impl FiltrationSpec {
    pub fn new(rule: Rule, window: Window) -> Self {
        FiltrationSpec { rule, window }
    }

    pub fn level(&self, ctx: &FieldCtx, x: &Section) -> Option<RationalLevel> {
        self.rule.level(ctx, x)
    }

    /// Adapted keys with level in the window.
    pub fn family(&self) -> Vec<Mono> {
        self.rule.keys_in(RationalLevel::int(self.window.lo), RationalLevel::int(self.window.hi))
    }

    /// Levels in the window where the graded piece is nonzero.
    pub fn jumps(&self) -> Vec<RationalLevel> {
        let mut v: Vec<RationalLevel> = self.family().iter().map(|k| self.rule.key_level(k)).collect();
        v.dedup();
        v
    }

    pub fn shifted(&self, offset: RationalLevel) -> FiltrationSpec {
        FiltrationSpec { rule: Rule::Shifted { base: Box::new(self.rule.clone()), offset }, window: self.window }
    }
}

/// Maximizes the level over `y + span(free)`.
///
/// Free vectors are echelonized with pivots at their lowest adapted key;
/// the lowest key of `y` is cancelled while it is a pivot. No combination
/// can raise the level past a lowest key that is not a pivot.
pub fn maximize_level(rule: &Rule, ctx: &FieldCtx, y: &Section, free: &[Section]) -> (Section, Option<RationalLevel>) {
    let order = |k: &Mono| (rule.key_level(k), *k);
    let lowest = |c: &BTreeMap<Mono, FieldElem>| c.keys().min_by_key(|k| order(k)).copied();
    let mut pivots: Vec<(Mono, BTreeMap<Mono, FieldElem>, Section)> = Vec::new();
    for f in free {
        let mut c = rule.coordinates(ctx, f);
        let mut s = f.clone();
        while let Some(k) = lowest(&c) {
            let Some((_, pc, ps)) = pivots.iter().find(|(pk, _, _)| *pk == k) else {
                break;
            };
            let factor = ctx.mul(&c[&k], &ctx.inv(&pc[&k]).expect("pivot entries are nonzero"));
            c = sub_coords(ctx, &c, pc, &factor);
            s = s.sub(ctx, &ps.scale(ctx, &factor));
        }
        if let Some(k) = lowest(&c) {
            pivots.push((k, c, s));
        }
    }
    let mut c = rule.coordinates(ctx, y);
    let mut s = y.clone();
    while let Some(k) = lowest(&c) {
        let Some((_, pc, ps)) = pivots.iter().find(|(pk, _, _)| *pk == k) else {
            break;
        };
        let factor = ctx.mul(&c[&k], &ctx.inv(&pc[&k]).expect("pivot entries are nonzero"));
        c = sub_coords(ctx, &c, pc, &factor);
        s = s.sub(ctx, &ps.scale(ctx, &factor));
    }
    let level = lowest(&c).map(|k| rule.key_level(&k));
    (s, level)
}

fn sub_coords(
    ctx: &FieldCtx,
    a: &BTreeMap<Mono, FieldElem>,
    b: &BTreeMap<Mono, FieldElem>,
    factor: &FieldElem,
) -> BTreeMap<Mono, FieldElem> {
    let mut out = a.clone();
    for (k, v) in b {
        let e = out.entry(*k).or_insert_with(|| ctx.zero());
        *e = ctx.sub(e, &ctx.mul(v, factor));
    }
    out.retain(|_, v| !v.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn r(n: i64, d: i64) -> RationalLevel {
        RationalLevel::new(n, d)
    }

    #[test]
    fn delta_key_ranges() {
        let keys: Vec<i64> = delta_keys(r(-3, 1), r(-1, 1)).map(|m| m.exp).collect();
        assert_eq!(keys, vec![-2, -3]);
        let keys: Vec<i64> = delta_keys(r(-5, 2), r(0, 1)).map(|m| m.exp).collect();
        assert_eq!(keys, vec![-1, -2]);
        assert_eq!(delta_keys(r(0, 1), r(4, 1)).count(), 0);
        let keys: Vec<i64> = delta_keys(r(-2, 1), r(-3, 2)).map(|m| m.exp).collect();
        assert_eq!(keys, vec![-2]);
    }

    #[test]
    fn extension_levels() {
        let ctx = make_field(5, 1).unwrap();
        let rule = Rule::Extension { n: 1, p: 5 };
        let one = Section::unit(&ctx, Mono::new(0, 0, 0));
        assert_eq!(rule.level(&ctx, &one), Some(r(-1, 5)));
        let both = one.add(&ctx, &Section::unit(&ctx, Mono::new(1, 0, -1)));
        assert_eq!(rule.level(&ctx, &both), Some(r(-1, 1)));
        let ks = rule.keys_in(r(-2, 1), r(1, 1));
        let levels: Vec<RationalLevel> = ks.iter().map(|k| rule.key_level(k)).collect();
        assert_eq!(levels, vec![r(-2, 1), r(-6, 5), r(-1, 1), r(-1, 5), r(4, 5)]);
    }

    #[test]
    fn kummer_keys_follow_shifts() {
        let rule = Rule::Kummer { d: 3, shifts: vec![0, 2, 1], dims: vec![0, 1, 1] };
        let levels: Vec<RationalLevel> = rule.keys_in(r(0, 1), r(2, 1)).iter().map(|k| rule.key_level(k)).collect();
        assert_eq!(levels, vec![r(1, 3), r(2, 3), r(4, 3), r(5, 3)]);
        assert_eq!(rule.keys_at(r(2, 3)), vec![Mono::new(1, 0, 2)]);
    }

    #[test]
    fn depth_grading_coordinates() {
        let ctx = make_field(5, 1).unwrap();
        let rule = Rule::DepthGrading { l: 2, p: 5 };
        let x0 = rule.basis_section(&ctx, &Mono::new(0, 0, 0));
        assert_eq!(rule.coordinates(&ctx, &x0).len(), 1);
        let one = Section::unit(&ctx, Mono::new(0, 0, 0));
        assert_eq!(rule.level(&ctx, &one), Some(r(-2, 1)));
        let e2 = Section::unit(&ctx, Mono::new(1, 0, -2));
        let (best, lvl) = maximize_level(&rule, &ctx, &one, &[e2]);
        assert_eq!(lvl, Some(r(-2, 5)));
        assert_eq!(best, x0);
    }

    #[test]
    fn shifted_levels() {
        let ctx = make_field(5, 1).unwrap();
        let base = Rule::Extension { n: 0, p: 5 };
        let sh = Rule::Shifted { base: Box::new(base), offset: r(1, 1) };
        let t = Section::unit(&ctx, Mono::new(0, 0, 1));
        assert_eq!(sh.level(&ctx, &t), Some(r(0, 1)));
        assert_eq!(sh.keys_at(r(0, 1)), vec![Mono::new(0, 0, 1)]);
    }
}
