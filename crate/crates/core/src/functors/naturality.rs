use serde::Serialize;

use super::object::{fixed_data, functor_f_with_basis, is_morphism, lcm, lift_basis, CGObject};
use crate::crystal::{CyclicRep, WeightDecomposition};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem, FieldEmbedding, FpMatrix, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctorTag {
    F,
    G,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NaturalityReport {
    pub functor: FunctorTag,
    pub pass: bool,
    pub witness: Option<String>,
}

fn fail(functor: FunctorTag, w: String) -> NaturalityReport {
    NaturalityReport { functor, pass: false, witness: Some(w) }
}

/// `F(f)` in the weight bases: the graded block map.
fn graded_map(ctx: &FieldCtx, f: &FpMatrix, src: &WeightDecomposition, tgt: &WeightDecomposition) -> Option<Mat> {
    let n_src: usize = src.dims().iter().sum();
    let n_tgt: usize = tgt.dims().iter().sum();
    let fm = Mat::from_fp(ctx, f);
    let mut out = Mat::zeros(ctx, n_tgt, n_src);
    let (mut col, mut row_off) = (0, vec![0; tgt.bases.len()]);
    let mut acc = 0;
    for (a, b) in tgt.bases.iter().enumerate() {
        row_off[a] = acc;
        acc += b.len();
    }
    for (a, basis) in src.bases.iter().enumerate() {
        for w in basis {
            let img = fm.mul_vec(ctx, w);
            let coords = tgt.coordinates(ctx, a, &img)?;
            for (i, c) in coords.into_iter().enumerate() {
                out.set(row_off[a] + i, col, c);
            }
            col += 1;
        }
    }
    Some(out)
}

/// Flattened weight basis as columns: the map `n_V: V -> V (x) F_q` read in weight coordinates.
fn weight_coords(ctx: &FieldCtx, dec: &WeightDecomposition) -> Mat {
    let cols: Vec<Vec<FieldElem>> = dec.bases.iter().flatten().cloned().collect();
    let n = cols.first().map_or(0, Vec::len);
    Mat::from_cols(ctx, &cols, n).inverse(ctx).expect("weight bases span")
}

/// Checks the squares of the natural isomorphism `G F = id` on a map of
/// representations: `F(f)` must be a morphism of objects, and `n_{V'} f = G(F(f)) n_V`.
pub fn naturality_rep_morphism(
    ctx: &FieldCtx,
    src: &CyclicRep,
    tgt: &CyclicRep,
    f: &FpMatrix,
) -> Result<NaturalityReport> {
    let tag = FunctorTag::F;
    if f.rows() != tgt.rank() || f.cols() != src.rank() {
        return Err(Error::Dimension("map has the wrong shape".into()));
    }
    let lhs = f.mul(src.mat());
    let rhs = tgt.mat().mul(f);
    if lhs != rhs {
        return Ok(fail(tag, format!("f sigma != sigma' f: {:?} vs {:?}", lhs.to_rows(), rhs.to_rows())));
    }
    let (ox, dx) = functor_f_with_basis(src, ctx)?;
    let (oy, dy) = functor_f_with_basis(tgt, ctx)?;
    let Some(ff) = graded_map(ctx, f, &dx, &dy) else {
        return Ok(fail(tag, "F(f) is not graded".into()));
    };
    if !is_morphism(ctx, &ox, &oy, &ff) {
        return Ok(fail(tag, "F(f) does not commute with tau".into()));
    }
    // n_V sends v to its weight coordinates; G(F(f)) acts on those by F(f).
    let nx = weight_coords(ctx, &dx);
    let ny = weight_coords(ctx, &dy);
    let left = ny.mul(ctx, &Mat::from_fp(ctx, f));
    let right = ff.mul(ctx, &nx);
    if left != right {
        return Ok(fail(tag, "n_V' f != G(F(f)) n_V".into()));
    }
    Ok(NaturalityReport { functor: tag, pass: true, witness: None })
}

/// Checks that a morphism of objects restricts to an equivariant F_p-map
/// between the fixed points.
pub fn naturality_object_morphism(
    ctx: &FieldCtx,
    x: &CGObject,
    y: &CGObject,
    phi: &Mat,
    cap: usize,
) -> Result<NaturalityReport> {
    let tag = FunctorTag::G;
    if !is_morphism(ctx, x, y, phi) {
        return Ok(fail(tag, "phi is not a morphism of objects".into()));
    }
    let fx = fixed_data(x, ctx, cap)?;
    let fy = fixed_data(y, ctx, cap)?;
    let emb = FieldEmbedding::new(ctx, lcm(fx.r, fy.r))?;
    let big = emb.big();
    let bx = lift_basis(ctx, &fx, &emb)?;
    let by = lift_basis(ctx, &fy, &emb)?;
    let phi_big = phi.map(|e| emb.map(e));
    let restricted = by.inverse(big).expect("fixed bases are invertible").mul(big, &phi_big.mul(big, &bx));
    let Some(g) = restricted.to_fp(big) else {
        return Ok(fail(tag, "phi does not preserve F_p-rational fixed points".into()));
    };
    if g.mul(fx.rep.mat()) != fy.rep.mat().mul(&g) {
        return Ok(fail(tag, "G(phi) is not equivariant".into()));
    }
    Ok(NaturalityReport { functor: tag, pass: true, witness: None })
}
