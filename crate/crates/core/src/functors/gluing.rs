use serde::Serialize;

use super::cycles::{default_window, vanishing, Vanishing};
use crate::crystal::{build_extension, build_kummer_crystal, CyclicRep, ExtensionModule, FModule, KummerCrystal};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::series::LaurentSeries;
use crate::vfilt::{split_vfilt, standard_vfilt, FiltrationSpec};

/// What the module looks like away from the divisor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "open", rename_all = "snake_case")]
pub enum OpenPart {
    /// Trivialized by the Kummer cover attached to this representation.
    Kummer { rep: CyclicRep },
    /// The structure sheaf.
    Structure,
}

/// `(M|_U, V -> W, a)`: open part, vanishing pair and its map to nearby cycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename = "gluing_triple")]
pub struct GluingTriple {
    pub open: OpenPart,
    pub pair: Vanishing,
}

impl GluingTriple {
    /// Rank of the delta part: the kernel of `t` on `Gr^{-1}`.
    pub fn delta_rank(&self, ctx: &FieldCtx) -> usize {
        self.pair.dim - self.pair.to_nearby_source.rank(ctx)
    }
}

pub fn gluing_data_kummer(kc: &KummerCrystal, rep: &CyclicRep) -> Result<GluingTriple> {
    let module = FModule::Kummer(kc.clone());
    let spec = standard_vfilt(kc, default_window(kc.p()));
    Ok(GluingTriple { open: OpenPart::Kummer { rep: rep.clone() }, pair: vanishing(&spec, &module)? })
}

/// Gluing data of an extension; only split extensions qualify.
pub fn gluing_data_extension(module: &ExtensionModule) -> Result<GluingTriple> {
    if !module.is_split() {
        return Err(Error::NotSplit(format!("c = {} is nonzero", module.c.display(module.ctx()))));
    }
    let ctx = module.ctx();
    let spec: FiltrationSpec = split_vfilt(ctx.p(), default_window(ctx.p()));
    let pair = vanishing(&spec, &FModule::Extension(module.clone()))?;
    Ok(GluingTriple { open: OpenPart::Structure, pair })
}

/// A module rebuilt from gluing data.
#[derive(Clone, Debug)]
pub enum Reconstructed {
    Kummer(KummerCrystal, CyclicRep),
    Split(ExtensionModule),
}

/// Rebuilds a module from the open part and the delta rank, then checks that
/// its gluing data agrees with the input.
pub fn reconstruct(triple: &GluingTriple, ctx: &FieldCtx) -> Result<(Reconstructed, bool)> {
    let delta = triple.delta_rank(ctx);
    let (module, again) = match (&triple.open, delta) {
        (OpenPart::Kummer { rep }, 0) => {
            let kc = build_kummer_crystal(rep, ctx)?;
            let again = gluing_data_kummer(&kc, rep)?;
            (Reconstructed::Kummer(kc, rep.clone()), again)
        }
        (OpenPart::Structure, 1) => {
            let m = build_extension(&LaurentSeries::zero(), 64, ctx)?;
            let again = gluing_data_extension(&m)?;
            (Reconstructed::Split(m), again)
        }
        (open, k) => {
            return Err(Error::InvalidParameter(format!("cannot rebuild open part {open:?} with {k} delta summands")))
        }
    };
    let same = again == *triple;
    Ok((module, same))
}
