use serde::Serialize;

use super::axioms::{check_specializing, AxiomReport};
use super::spec::{FiltrationSpec, Rule};
use crate::crystal::{FModule, KummerCrystal, Mono, Section};
use crate::error::{Error, Result};
use crate::field::gcd;
use crate::series::RationalLevel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    /// The first filtration is contained in the second.
    Contained,
    ReverseContained,
    Incomparable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub relation: Relation,
    pub tested: usize,
    /// First section where the level functions differ, with both levels.
    pub witness: Option<(Section, Option<RationalLevel>, Option<RationalLevel>)>,
}

fn relation_of(levels: impl Iterator<Item = (Section, Option<RationalLevel>, Option<RationalLevel>)>) -> Comparison {
    let (mut le, mut ge, mut tested) = (true, true, 0);
    let mut witness = None;
    for (x, l1, l2) in levels {
        tested += 1;
        // None is +infinity.
        let ord = match (l1, l2) {
            (Some(a), Some(b)) => a.cmp(&b),
            (None, None) => std::cmp::Ordering::Equal,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (Some(_), None) => std::cmp::Ordering::Less,
        };
        if ord.is_ne() && witness.is_none() {
            witness = Some((x, l1, l2));
        }
        le &= ord.is_le();
        ge &= ord.is_ge();
    }
    let relation = match (le, ge) {
        (true, true) => Relation::Equal,
        (true, false) => Relation::Contained,
        (false, true) => Relation::ReverseContained,
        (false, false) => Relation::Incomparable,
    };
    Comparison { relation, tested, witness }
}

/// Compares two filtrations of one module by their level functions on the
/// union of both adapted families. `level1 <= level2` everywhere means
/// `V1^r` is contained in `V2^r` for every `r`.
pub fn compare(spec1: &FiltrationSpec, spec2: &FiltrationSpec, module: &FModule) -> Comparison {
    let ctx = module.ctx();
    let mut family: Vec<Section> = spec1.family().iter().map(|k| spec1.rule.basis_section(ctx, k)).collect();
    family.extend(spec2.family().iter().map(|k| spec2.rule.basis_section(ctx, k)));
    relation_of(family.into_iter().map(|x| {
        let (a, b) = (spec1.level(ctx, &x), spec2.level(ctx, &x));
        (x, a, b)
    }))
}

/// Transports a section of the degree-`d` presentation to the degree-`d e`
/// one: `w (x) s^E -> w (x) s'^{eE}` with `w` re-expressed in the weight
/// basis of the larger presentation.
fn transport(small: &KummerCrystal, big: &KummerCrystal, e: u64, x: &Section) -> Result<Section> {
    let ctx = small.ctx();
    let mut out = Section::zero();
    for (m, c) in x.terms() {
        let w = &small.decomposition.bases[m.comp as usize][m.sub as usize];
        let a2 = m.comp as u64 * e;
        let coords = big.decomposition.coordinates(ctx, a2 as usize, w).ok_or_else(|| {
            Error::Dimension(format!("weight vector of class {} is not in class {a2} upstairs", m.comp))
        })?;
        for (j, cj) in coords.iter().enumerate() {
            out.add_term(ctx, Mono::new(a2 as u32, j as u32, m.exp * e as i64), &ctx.mul(c, cj));
        }
    }
    Ok(out)
}

/// Inverse of [`transport`].
fn transport_back(small: &KummerCrystal, big: &KummerCrystal, e: u64, x: &Section) -> Result<Section> {
    let ctx = small.ctx();
    let mut out = Section::zero();
    for (m, c) in x.terms() {
        if !(m.comp as u64).is_multiple_of(e) || m.exp % e as i64 != 0 {
            return Err(Error::Dimension("section is not inflated from the smaller cover".into()));
        }
        let a = m.comp as u64 / e;
        let w = &big.decomposition.bases[m.comp as usize][m.sub as usize];
        let coords = small.decomposition.coordinates(ctx, a as usize, w).ok_or_else(|| {
            Error::Dimension(format!("weight vector of class {} is not in class {a} downstairs", m.comp))
        })?;
        for (j, cj) in coords.iter().enumerate() {
            out.add_term(ctx, Mono::new(a as u32, j as u32, m.exp / e as i64), &ctx.mul(c, cj));
        }
    }
    Ok(out)
}

/// Compares the standard filtration of the degree-`d` presentation with the
/// one built independently from the degree-`d e` presentation of the same
/// representation, over a common field.
pub fn compare_presentations(
    small: &KummerCrystal,
    spec_small: &FiltrationSpec,
    big: &KummerCrystal,
    spec_big: &FiltrationSpec,
) -> Result<Comparison> {
    let ctx = small.ctx();
    if !big.d.is_multiple_of(small.d) || ctx != big.ctx() {
        return Err(Error::InvalidParameter("presentations must share the field and nest".into()));
    }
    let e = big.d / small.d;
    let mut rows = Vec::new();
    for k in spec_small.family() {
        let x = spec_small.rule.basis_section(ctx, &k);
        let y = transport(small, big, e, &x)?;
        rows.push((x.clone(), spec_small.level(ctx, &x), spec_big.level(ctx, &y)));
    }
    for k in spec_big.family() {
        let y = spec_big.rule.basis_section(ctx, &k);
        let x = transport_back(small, big, e, &y)?;
        rows.push((x.clone(), spec_small.level(ctx, &x), spec_big.level(ctx, &y)));
    }
    Ok(relation_of(rows.into_iter()))
}

#[derive(Clone, Debug, Serialize)]
pub struct Pullback {
    pub spec: FiltrationSpec,
    #[serde(skip)]
    pub module: FModule,
    pub degree: u64,
    pub depth: u64,
    /// Jumps multiplied by the cover degree.
    pub jumps_in_cover_units: Vec<RationalLevel>,
    pub axioms: AxiomReport,
}

/// `pi^* V` along `u^{d'} = t`, checked as a specializing filtration at depth
/// `d' * max(depth, 1)`.
pub fn pullback_filtration(spec: &FiltrationSpec, module: &FModule, degree: u64, depth: u64) -> Result<Pullback> {
    if degree == 0 || gcd(degree, module.p()) != 1 {
        return Err(Error::InvalidParameter(format!("cover degree {degree} must be prime to p = {}", module.p())));
    }
    if matches!(module, FModule::Pulled { .. }) {
        return Err(Error::InvalidParameter("iterated pullbacks are not supported".into()));
    }
    let pulled_spec = FiltrationSpec::new(Rule::Pulled { base: Box::new(spec.rule.clone()), degree }, spec.window);
    let pulled = FModule::pulled(module.clone(), degree);
    let depth = degree * depth.max(1);
    let axioms = check_specializing(&pulled_spec, &pulled, depth);
    let jumps_in_cover_units = pulled_spec.jumps().iter().map(|r| r.scale(degree as i64)).collect();
    Ok(Pullback { spec: pulled_spec, module: pulled, degree, depth, jumps_in_cover_units, axioms })
}
