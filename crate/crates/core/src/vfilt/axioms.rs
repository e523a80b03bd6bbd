use serde::Serialize;

use super::graded::{graded_keys, transition, Transition};
use super::spec::{maximize_level, FiltrationSpec};
use crate::crystal::{FModule, Mono, Section};
use crate::series::RationalLevel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axiom {
    A1,
    A2,
    A3,
    A4,
    SS1,
    SS2,
    SS3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    WindowLimited,
    /// Outside the axiom's scope (SS3 at level -1).
    Exempt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub level: Option<RationalLevel>,
    pub section: Option<Section>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub axiom: Axiom,
    pub status: Status,
    pub tested: usize,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelStatus {
    pub level: RationalLevel,
    pub status: Status,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub depth: Option<u64>,
    pub results: Vec<AxiomResult>,
    /// A4 per source level.
    pub a4_levels: Vec<LevelStatus>,
    /// SS3 per source level.
    pub ss3_levels: Vec<LevelStatus>,
}

impl AxiomReport {
    pub fn get(&self, axiom: Axiom) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.axiom == axiom)
    }

    pub fn status(&self, axiom: Axiom) -> Option<Status> {
        self.get(axiom).map(|r| r.status)
    }

    pub fn passes(&self, axiom: Axiom) -> bool {
        self.status(axiom) == Some(Status::Pass)
    }

    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.status == Status::Pass)
    }

    pub fn failures(&self) -> Vec<&AxiomResult> {
        self.results.iter().filter(|r| r.status == Status::Fail).collect()
    }

    /// Combines a specializing and a super-specializing report.
    pub fn merge(mut self, other: AxiomReport) -> AxiomReport {
        self.results.extend(other.results);
        self.a4_levels.extend(other.a4_levels);
        self.ss3_levels.extend(other.ss3_levels);
        self.depth = self.depth.or(other.depth);
        self
    }
}

fn at_least(l: Option<RationalLevel>, r: RationalLevel) -> bool {
    l.is_none_or(|l| l >= r)
}

fn witness(level: Option<RationalLevel>, section: Option<Section>, note: impl Into<String>) -> Option<Witness> {
    Some(Witness { level, section, note: note.into() })
}

fn fmt_level(l: Option<RationalLevel>) -> String {
    l.map_or_else(|| "+inf".to_string(), |l| l.to_string())
}

struct Tally {
    axiom: Axiom,
    tested: usize,
    witness: Option<Witness>,
}

impl Tally {
    fn new(axiom: Axiom) -> Self {
        Tally { axiom, tested: 0, witness: None }
    }

    fn check(&mut self, ok: bool, w: impl FnOnce() -> Option<Witness>) {
        self.tested += 1;
        if !ok && self.witness.is_none() {
            self.witness = w();
        }
    }

    fn finish(self) -> AxiomResult {
        let status = if self.witness.is_some() { Status::Fail } else { Status::Pass };
        AxiomResult { axiom: self.axiom, status, tested: self.tested, witness: self.witness }
    }
}

fn map_status(ctx: &crate::field::FieldCtx, tr: &Transition) -> (Status, Option<Witness>) {
    if let Some((k, lvl)) = tr.undefined_at {
        return (
            Status::Fail,
            witness(
                Some(tr.source),
                Some(Section::unit(ctx, k)),
                format!("image has level {} below {}", fmt_level(lvl), tr.target),
            ),
        );
    }
    if tr.is_iso(ctx) {
        return (Status::Pass, None);
    }
    let rank = tr.matrix.rank(ctx);
    (
        Status::Fail,
        witness(
            Some(tr.source),
            None,
            format!(
                "map Gr^{} -> Gr^{} is {}x{} of rank {rank}",
                tr.source,
                tr.target,
                tr.matrix.rows(),
                tr.matrix.cols()
            ),
        ),
    )
}

/// Axioms A1-A4 at depth `k`, on the adapted family inside the window.
///
/// Depth 0 is tested with the ideal to the first power, since `I^0 V^i`
/// would be all of `V^i`.
pub fn check_specializing(spec: &FiltrationSpec, module: &FModule, depth: u64) -> AxiomReport {
    let ctx = module.ctx();
    let rule = &spec.rule;
    let p = module.p() as i64;
    let mut a1 = Tally::new(Axiom::A1);
    let mut a2 = Tally::new(Axiom::A2);
    let mut a3 = Tally::new(Axiom::A3);
    for k in spec.family() {
        let l = rule.key_level(&k);
        let x = rule.basis_section(ctx, &k);
        let lx = rule.level(ctx, &x);
        a1.check(lx == Some(l), || witness(lx, Some(x.clone()), format!("evaluator disagrees with key level {l}")));
        let tx = module.mul_t(&x);
        let ltx = rule.level(ctx, &tx);
        a1.check(at_least(ltx, l), || witness(Some(l), Some(x.clone()), "t-multiple leaves V^r"));
        a1.check(ltx.is_none_or(|m| m > l), || witness(Some(l), Some(x.clone()), "level does not grow along t"));
        let ux = module.mul_uniformizer(&x);
        a1.check(at_least(rule.level(ctx, &ux), l), || {
            witness(Some(l), Some(x.clone()), "uniformizer multiple leaves V^r")
        });

        let mut y = x.clone();
        for _ in 0..depth.max(1) {
            y = module.mul_uniformizer(&y);
        }
        let ly = rule.level(ctx, &y);
        a2.check(at_least(ly, l.add_int(1)), || {
            witness(Some(l), Some(x.clone()), format!("ideal multiple has level {}", fmt_level(ly)))
        });

        let fx = module.frobenius(&x);
        let lf = rule.level(ctx, &fx);
        a3.check(at_least(lf, l.scale(p)), || {
            witness(Some(l), Some(x.clone()), format!("F(x) has level {} < {}", fmt_level(lf), l.scale(p)))
        });
    }

    let mut a4_levels = Vec::new();
    for r in spec.jumps() {
        if graded_keys(rule, r).is_empty() {
            continue;
        }
        let tr = transition(spec, module, r, r.scale(p), |x| module.frobenius(x));
        let (status, w) = map_status(ctx, &tr);
        a4_levels.push(LevelStatus { level: r, status, witness: w });
    }
    let a4_fail = a4_levels.iter().find(|s| s.status == Status::Fail);
    let a4 = AxiomResult {
        axiom: Axiom::A4,
        status: if a4_fail.is_some() { Status::Fail } else { Status::Pass },
        tested: a4_levels.len(),
        witness: a4_fail.and_then(|s| s.witness.clone()),
    };
    AxiomReport {
        depth: Some(depth),
        results: vec![a1.finish(), a2.finish(), a3.finish(), a4],
        a4_levels,
        ss3_levels: Vec::new(),
    }
}

/// Maximal-level preimage of `x` under `t`.
pub fn best_t_preimage(spec: &FiltrationSpec, module: &FModule, x: &Section) -> (Section, Option<RationalLevel>) {
    let y = module.t_preimage(x);
    maximize_level(&spec.rule, module.ctx(), &y, &module.t_kernel())
}

/// SS1-SS3 on the adapted family inside the window.
pub fn check_super(spec: &FiltrationSpec, module: &FModule) -> AxiomReport {
    let ctx = module.ctx();
    let rule = &spec.rule;
    let zero = RationalLevel::int(0);
    let top = RationalLevel::int(spec.window.hi - 1);

    let mut ss2 = Tally::new(Axiom::SS2);
    let mut generators: Vec<(Mono, RationalLevel)> = Vec::new();
    for k in spec.family() {
        let l = rule.key_level(&k);
        let x = rule.basis_section(ctx, &k);
        let (_, ly) = best_t_preimage(spec, module, &x);
        if l >= zero && !at_least(ly, zero) {
            generators.push((k, l));
        }
        let below = l.add_int(-1);
        ss2.check(at_least(ly, below), || {
            let a = ly.expect("a failing preimage has finite level");
            let i = if below != RationalLevel::int(-1) { below } else { a.add(&below).div_int(2) };
            witness(
                Some(i),
                Some(x.clone()),
                format!("x is in V^{} but its best t-preimage has level {a}", i.add_int(1)),
            )
        });
    }
    let ss1_status = if generators.iter().all(|(_, l)| *l < top) { Status::Pass } else { Status::WindowLimited };
    let ss1 = AxiomResult {
        axiom: Axiom::SS1,
        status: ss1_status,
        tested: generators.len(),
        witness: (ss1_status != Status::Pass).then(|| Witness {
            level: generators.last().map(|g| g.1),
            section: generators.last().map(|g| Section::unit(ctx, g.0)),
            note: "generators of V^0 reach the top of the window".into(),
        }),
    };

    let mut levels: Vec<RationalLevel> = spec.jumps();
    levels.extend(spec.jumps().iter().map(|r| r.add_int(-1)).filter(|r| spec.window.contains(r)));
    levels.sort();
    levels.dedup();
    let minus_one = RationalLevel::int(-1);
    let mut ss3_levels = Vec::new();
    for r in levels {
        let tr = transition(spec, module, r, r.add_int(1), |x| module.mul_t(x));
        let (status, w) = map_status(ctx, &tr);
        let status = if r == minus_one && status == Status::Fail { Status::Exempt } else { status };
        let w = if r == minus_one && w.is_none() {
            witness(Some(r), None, "m_t at level -1 is an isomorphism here")
        } else {
            w
        };
        ss3_levels.push(LevelStatus { level: r, status, witness: w });
    }
    let ss3_fail = ss3_levels.iter().find(|s| s.status == Status::Fail);
    let ss3 = AxiomResult {
        axiom: Axiom::SS3,
        status: if ss3_fail.is_some() { Status::Fail } else { Status::Pass },
        tested: ss3_levels.len(),
        witness: ss3_fail.and_then(|s| s.witness.clone()),
    };
    AxiomReport { depth: None, results: vec![ss1, ss2.finish(), ss3], a4_levels: Vec::new(), ss3_levels }
}
