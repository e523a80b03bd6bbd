use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::crystal::{frobenius_on_weights, weight_decompose, CyclicRep, WeightDecomposition};
use crate::error::{Error, Result};
use crate::field::{
    gcd, make_field, minimal_degree_for, primitive_root_of_unity, saturate_fixed_points, FieldCtx, FieldElem,
    FieldEmbedding, FpMatrix, Mat, SemilinearOperator,
};

/// One graded piece of an object of the category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CGClass {
    pub a: u64,
    pub dim: usize,
    /// `x -> C x^(p)` from class `a` to class `p a mod d`.
    #[serde(rename = "C")]
    pub c: Mat,
}

/// An object `V -> W` in canonical form: `W` is the Frobenius twist of `V`
/// and the linearization is the identity, so only the p-linear pieces remain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CGObject {
    pub d: u64,
    pub classes: Vec<CGClass>,
}

impl CGObject {
    pub fn new(ctx: &FieldCtx, d: u64, mats: Vec<Mat>) -> Result<Self> {
        let p = ctx.p();
        if d == 0 || gcd(d, p) != 1 {
            return Err(Error::InvalidParameter(format!("d = {d} must be positive and prime to p = {p}")));
        }
        if mats.len() != d as usize {
            return Err(Error::Dimension(format!("expected {d} classes, got {}", mats.len())));
        }
        for (a, m) in mats.iter().enumerate() {
            let b = (p as usize * a) % d as usize;
            if !m.is_square() || m.rows() != mats[b].cols() {
                return Err(Error::Dimension(format!(
                    "class {a} maps to class {b}: expected a {}x{} matrix, got {}x{}",
                    mats[b].cols(),
                    m.cols(),
                    m.rows(),
                    m.cols()
                )));
            }
            if m.rows() > 0 && !m.is_invertible(ctx) {
                return Err(Error::Singular(format!("C_{a} is not invertible")));
            }
        }
        let classes = mats.into_iter().enumerate().map(|(a, c)| CGClass { a: a as u64, dim: c.cols(), c }).collect();
        Ok(CGObject { d, classes })
    }

    /// Brings `tau: V_a -> W_{pa}` into canonical form, given linear
    /// identifications `ident[b]: W_b -> V_b`.
    pub fn normalize(ctx: &FieldCtx, d: u64, tau: Vec<Mat>, ident: &[Mat]) -> Result<Self> {
        let p = ctx.p() as usize;
        if ident.len() != tau.len() {
            return Err(Error::Dimension("tau and its identification have different class counts".into()));
        }
        let mut mats = Vec::with_capacity(tau.len());
        for (a, t) in tau.into_iter().enumerate() {
            let b = (p * a) % d as usize;
            let id = &ident[b];
            if id.cols() != t.rows() || (id.rows() > 0 && !id.is_invertible(ctx)) {
                return Err(Error::Singular(format!("identification of W_{b} is not an isomorphism")));
            }
            mats.push(id.mul(ctx, &t));
        }
        Self::new(ctx, d, mats)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.dim).collect()
    }

    pub fn rank(&self) -> usize {
        self.classes.iter().map(|c| c.dim).sum()
    }

    /// Offsets of each class in the flattened space.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.classes
            .iter()
            .map(|c| {
                let o = acc;
                acc += c.dim;
                o
            })
            .collect()
    }

    /// The graded p-linear map as one block matrix on `(+)_a V_a`.
    pub fn flatten(&self, ctx: &FieldCtx) -> Mat {
        let n = self.rank();
        let off = self.offsets();
        let p = ctx.p() as usize;
        let d = self.d as usize;
        let mut m = Mat::zeros(ctx, n, n);
        for cl in &self.classes {
            let a = cl.a as usize;
            let b = (p * a) % d;
            for i in 0..cl.c.rows() {
                for j in 0..cl.c.cols() {
                    m.set(off[b] + i, off[a] + j, cl.c.get(i, j).clone());
                }
            }
        }
        m
    }

    /// Grading operator: `xi^a` on class `a`.
    pub fn sigma(&self, ctx: &FieldCtx, xi: &FieldElem) -> Mat {
        let n = self.rank();
        let mut m = Mat::zeros(ctx, n, n);
        let mut k = 0;
        for cl in &self.classes {
            let ev = ctx.pow(xi, cl.a as u128);
            for _ in 0..cl.dim {
                m.set(k, k, ev.clone());
                k += 1;
            }
        }
        m
    }

    /// The same object over a larger field.
    pub fn base_change(&self, emb: &FieldEmbedding) -> CGObject {
        CGObject {
            d: self.d,
            classes: self.classes.iter().map(|c| CGClass { a: c.a, dim: c.dim, c: c.c.map(|x| emb.map(x)) }).collect(),
        }
    }
}

/// The smallest field carrying the `d`-th roots of unity.
pub fn splitting_field(p: u64, d: u64) -> Result<FieldCtx> {
    make_field(p, minimal_degree_for(p, d)?)
}

/// `V (x) F_q` graded by weights, with `tau = id (x) Frob`.
pub fn functor_f(rep: &CyclicRep, ctx: &FieldCtx) -> Result<CGObject> {
    let dec = weight_decompose(rep, ctx)?;
    let mats = frobenius_on_weights(&dec, ctx)?;
    CGObject::new(ctx, rep.d(), mats)
}

/// Weight decomposition together with `F(rep)`, sharing the basis.
pub fn functor_f_with_basis(rep: &CyclicRep, ctx: &FieldCtx) -> Result<(CGObject, WeightDecomposition)> {
    let dec = weight_decompose(rep, ctx)?;
    let mats = frobenius_on_weights(&dec, ctx)?;
    Ok((CGObject::new(ctx, rep.d(), mats)?, dec))
}

/// Fixed points of an object, with the generator's action on them.
#[derive(Clone, Debug)]
pub struct FixedData {
    pub rep: CyclicRep,
    /// Saturation degree over the object's field.
    pub r: usize,
    pub embedding: FieldEmbedding,
    /// Columns: F_p-basis of the fixed vectors in the flattened space.
    pub basis: Mat,
}

/// `G(obj)`: fixed vectors of `x -> C x^(p)`, after enlarging the field,
/// with the generator acting by `xi^a` on class `a`.
pub fn functor_g(obj: &CGObject, ctx: &FieldCtx, cap: usize) -> Result<CyclicRep> {
    Ok(fixed_data(obj, ctx, cap)?.rep)
}

pub fn fixed_data(obj: &CGObject, ctx: &FieldCtx, cap: usize) -> Result<FixedData> {
    let p = ctx.p();
    let n = obj.rank();
    let xi = primitive_root_of_unity(ctx, obj.d)?;
    if n == 0 {
        return Err(Error::Dimension("the zero object has no nonzero representation".into()));
    }
    let op = SemilinearOperator::new(ctx, obj.flatten(ctx))?;
    let sat = saturate_fixed_points(ctx, &op, cap)?;
    let big = sat.field();
    let basis = Mat::from_cols(big, &sat.fixed.basis, n);
    let inv = basis.inverse(big).ok_or_else(|| Error::Singular("fixed vectors are dependent over the field".into()))?;
    let sigma = obj.sigma(big, &sat.embedding.map(&xi));
    let s = inv.mul(big, &sigma.mul(big, &basis));
    let fp = s
        .to_fp(big)
        .ok_or_else(|| Error::InvalidRep("generator action on fixed points is not defined over F_p".into()))?;
    let rep = CyclicRep::new(p, obj.d, &fp.to_rows())?;
    Ok(FixedData { rep, r: sat.r, embedding: sat.embedding, basis })
}

/// Multiplicity of `xi^a` as an eigenvalue of the generator, for each `a`,
/// with `xi` the canonical primitive root of the splitting field.
pub fn eigenvalue_multiset(rep: &CyclicRep) -> Result<Vec<usize>> {
    let ctx = splitting_field(rep.p(), rep.d())?;
    Ok(weight_decompose(rep, &ctx)?.dims())
}

/// Reps of a cyclic group of order prime to `p` are semisimple, so they are
/// isomorphic exactly when their eigenvalue multisets agree.
pub fn reps_isomorphic(a: &CyclicRep, b: &CyclicRep) -> Result<bool> {
    if a.p() != b.p() || a.d() != b.d() {
        return Ok(false);
    }
    Ok(eigenvalue_multiset(a)? == eigenvalue_multiset(b)?)
}

/// An explicit isomorphism between two objects over a common extension.
#[derive(Clone, Debug)]
pub struct ObjectIso {
    pub embedding: FieldEmbedding,
    /// Block-diagonal map between the flattened spaces.
    pub map: Mat,
}

/// Searches for `phi` with `phi_{pa} C_a = C'_a phi_a^(p)` on every class.
///
/// Both objects are trivialized by their fixed points; an F_p-intertwiner of
/// the generator actions on those lifts to an isomorphism of objects.
pub fn object_isomorphism(x: &CGObject, y: &CGObject, ctx: &FieldCtx, cap: usize) -> Result<Option<ObjectIso>> {
    if x.d != y.d || x.dims() != y.dims() {
        return Ok(None);
    }
    let n = x.rank();
    if n == 0 {
        return Ok(Some(ObjectIso { embedding: FieldEmbedding::identity(ctx), map: Mat::zeros(ctx, 0, 0) }));
    }
    let fx = fixed_data(x, ctx, cap)?;
    let fy = fixed_data(y, ctx, cap)?;
    let Some(t) = intertwiner(fx.rep.mat(), fy.rep.mat()) else {
        return Ok(None);
    };
    let r = lcm(fx.r, fy.r);
    let emb = FieldEmbedding::new(ctx, r)?;
    let big = emb.big();
    let bx = lift_basis(ctx, &fx, &emb)?;
    let by = lift_basis(ctx, &fy, &emb)?;
    let t = Mat::from_fp(big, &t);
    let phi = by.mul(big, &t.mul(big, &bx.inverse(big).expect("fixed bases are invertible")));
    let xb = x.base_change(&emb);
    let yb = y.base_change(&emb);
    if !is_morphism(big, &xb, &yb, &phi) {
        return Err(Error::InvalidRep("lifted intertwiner does not respect the p-linear maps".into()));
    }
    Ok(Some(ObjectIso { embedding: emb, map: phi }))
}

/// Whether `phi` is graded and satisfies `phi C = C' phi^(p)` on the flattened spaces.
pub fn is_morphism(ctx: &FieldCtx, x: &CGObject, y: &CGObject, phi: &Mat) -> bool {
    if phi.rows() != y.rank() || phi.cols() != x.rank() {
        return false;
    }
    let (ox, oy) = (x.offsets(), y.offsets());
    for i in 0..phi.rows() {
        for j in 0..phi.cols() {
            let ci = class_of(&oy, &y.dims(), i);
            let cj = class_of(&ox, &x.dims(), j);
            if ci != cj && !phi.get(i, j).is_zero() {
                return false;
            }
        }
    }
    let lhs = phi.mul(ctx, &x.flatten(ctx));
    let rhs = y.flatten(ctx).mul(ctx, &phi.frobenius(ctx));
    lhs == rhs
}

fn class_of(offsets: &[usize], dims: &[usize], i: usize) -> usize {
    (0..offsets.len()).find(|&a| i >= offsets[a] && i < offsets[a] + dims[a]).expect("index in range")
}

/// The fixed basis of `fd`, moved into the field of `outer` so that the
/// copy of the base field agrees with `outer`.
pub(crate) fn lift_basis(ctx: &FieldCtx, fd: &FixedData, outer: &FieldEmbedding) -> Result<Mat> {
    if !outer.degree().is_multiple_of(fd.r) {
        return Err(Error::InvalidParameter(format!(
            "degree {} is not a multiple of the saturation degree {}",
            outer.degree(),
            fd.r
        )));
    }
    let inner = FieldEmbedding::new(fd.embedding.big(), outer.degree() / fd.r)?;
    Ok(fd.basis.map(|e| relift(ctx, &fd.embedding, &inner, outer, e)))
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a as u64, b as u64) as usize * b
}

/// Re-embeds an element of `F_{q^{r_i}}` into `F_{q^r}` so that the copy of
/// `F_q` inside agrees with `outer`.
fn relift(
    ctx: &FieldCtx,
    first: &FieldEmbedding,
    inner: &FieldEmbedding,
    outer: &FieldEmbedding,
    e: &FieldElem,
) -> FieldElem {
    let mid = inner.map(e);
    // `inner.map(first.map(g))` and `outer.map(g)` are roots of the same
    // minimal polynomial; they differ by a power of Frobenius.
    let g = ctx.gen();
    let want = outer.map(&g);
    let got = inner.map(&first.map(&g));
    let big = outer.big();
    let mut k = 0;
    let mut cur = got.clone();
    while cur != want {
        cur = big.frobenius(&cur);
        k += 1;
        assert!(k <= big.m() * 2, "embeddings of F_q do not match up to Frobenius");
    }
    big.frobenius_iter(&mid, k)
}

/// Basis of `{T : T a = b T}` over F_p, `T` of shape `rank(b) x rank(a)`.
pub fn hom_basis(a: &FpMatrix, b: &FpMatrix) -> Vec<FpMatrix> {
    let (n, m) = (a.rows(), b.rows());
    let p = a.p();
    // Unknown T_{ij} has index i*n + j; equation (T a - b T)_{ij} = 0.
    let mut sys = FpMatrix::zeros(p, m * n, m * n);
    for i in 0..m {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                let v = sys.get(row, i * n + k);
                sys.set(row, i * n + k, (v + a.get(k, j)) % p);
            }
            for k in 0..m {
                let v = sys.get(row, k * n + j);
                sys.set(row, k * n + j, (v + p - b.get(i, k)) % p);
            }
        }
    }
    sys.kernel()
        .into_iter()
        .map(|v| FpMatrix::from_rows(p, &v.chunks(n).map(<[u64]>::to_vec).collect::<Vec<_>>()))
        .collect()
}

/// An invertible `T` over F_p with `T a = b T`, if one exists.
///
/// Random combinations of the Hom basis from a fixed seed; for isomorphic
/// semisimple representations a random element is invertible with
/// probability bounded below independently of the rank.
pub fn intertwiner(a: &FpMatrix, b: &FpMatrix) -> Option<FpMatrix> {
    let n = a.rows();
    let p = a.p();
    if b.rows() != n {
        return None;
    }
    if n == 0 {
        return Some(FpMatrix::zeros(p, 0, 0));
    }
    let basis = hom_basis(a, b);
    if basis.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..512 {
        let mut t = FpMatrix::zeros(p, n, n);
        for h in &basis {
            let c = rng.gen_range(0..p);
            for i in 0..n {
                for j in 0..n {
                    t.set(i, j, (t.get(i, j) + c * h.get(i, j)) % p);
                }
            }
        }
        if t.inverse().is_some() {
            return Some(t);
        }
    }
    None
}
