use vfilt_core::crystal::{
    build_extension, build_kummer_crystal, CyclicRep, ExtensionModule, FModule, KummerCrystal, RepDescriptor,
};
use vfilt_core::field::{make_field, minimal_degree_for};
use vfilt_core::vfilt::{mc_depth_grading, mc_vfilt, split_vfilt, standard_vfilt, FiltrationSpec, Window};
use vfilt_core::{Error, FieldCtx, LaurentSeries, Result};

use crate::args::{Builtin, JobArgs};

pub enum Object {
    Kummer { rep: CyclicRep, kc: KummerCrystal },
    Extension(ExtensionModule),
}

pub struct Resolved {
    pub ctx: FieldCtx,
    pub object: Object,
    pub window: Window,
}

/// Which filtration was built on the object.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiltrationKind {
    Standard,
    Split,
    Extension,
    Depth,
}

impl FiltrationKind {
    pub fn name(self) -> &'static str {
        match self {
            FiltrationKind::Standard => "standard",
            FiltrationKind::Split => "split",
            FiltrationKind::Extension => "extension",
            FiltrationKind::Depth => "depth_grading",
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub fn require_p(job: &JobArgs) -> Result<u64> {
    job.p.ok_or_else(|| invalid("--p is required"))
}

pub fn window(job: &JobArgs) -> Result<Window> {
    if job.window < 1 {
        return Err(invalid(format!("--window must be positive, got {}", job.window)));
    }
    Ok(Window::symmetric(job.window))
}

/// The representation named on the command line, if any.
pub fn load_rep(job: &JobArgs, p: u64) -> Result<Option<CyclicRep>> {
    match (&job.rep, job.rep_builtin) {
        (Some(_), Some(_)) => Err(invalid("--rep and --rep-builtin are exclusive")),
        (Some(path), None) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
            let desc: RepDescriptor =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            if let Some(d) = job.d {
                if d != desc.d {
                    return Err(invalid(format!("--d {d} disagrees with d = {} in {}", desc.d, path.display())));
                }
            }
            CyclicRep::from_descriptor(p, &desc).map(Some)
        }
        (None, Some(b)) => {
            let d = job.d.ok_or_else(|| invalid("--rep-builtin needs --d"))?;
            let rep = match b {
                Builtin::Trivial => CyclicRep::trivial(p, d, job.rank),
                Builtin::Companion => CyclicRep::companion(p, d),
                Builtin::Regular => CyclicRep::regular(p, d),
            }?;
            Ok(Some(rep))
        }
        (None, None) => Ok(None),
    }
}

pub fn resolve(job: &JobArgs) -> Result<Resolved> {
    let p = require_p(job)?;
    let window = window(job)?;
    let rep = load_rep(job, p)?;
    match (rep, &job.c) {
        (Some(_), Some(_)) => Err(invalid("give either a representation or --c, not both")),
        (None, None) => Err(invalid("one of --rep, --rep-builtin or --c is required")),
        (Some(rep), None) => {
            let m = match job.m {
                Some(m) => m,
                None => minimal_degree_for(p, rep.d())?,
            };
            let ctx = make_field(p, m)?;
            let kc = build_kummer_crystal(&rep, &ctx)?;
            Ok(Resolved { ctx, object: Object::Kummer { rep, kc }, window })
        }
        (None, Some(expr)) => {
            let ctx = make_field(p, job.m.unwrap_or(1))?;
            let c = LaurentSeries::parse(&ctx, expr)?;
            let module = build_extension(&c, job.window as u64, &ctx)?;
            Ok(Resolved { ctx, object: Object::Extension(module), window })
        }
    }
}

impl Resolved {
    pub fn module(&self) -> FModule {
        match &self.object {
            Object::Kummer { kc, .. } => FModule::Kummer(kc.clone()),
            Object::Extension(m) => FModule::Extension(m.clone()),
        }
    }

    /// The canonical filtration when one is defined, else the depth grading.
    pub fn filtration(&self) -> Result<(FiltrationSpec, FiltrationKind)> {
        match &self.object {
            Object::Kummer { kc, .. } => Ok((standard_vfilt(kc, self.window), FiltrationKind::Standard)),
            Object::Extension(m) => match m.n {
                None => Ok((split_vfilt(self.ctx.p(), self.window), FiltrationKind::Split)),
                Some(n) if n % self.ctx.p() != 0 => Ok((mc_vfilt(m, self.window)?, FiltrationKind::Extension)),
                Some(_) => Ok((mc_depth_grading(m, self.window)?, FiltrationKind::Depth)),
            },
        }
    }

    pub fn kummer(&self, what: &str) -> Result<(&CyclicRep, &KummerCrystal)> {
        match &self.object {
            Object::Kummer { rep, kc } => Ok((rep, kc)),
            Object::Extension(_) => Err(invalid(format!("{what} needs a representation"))),
        }
    }
}
