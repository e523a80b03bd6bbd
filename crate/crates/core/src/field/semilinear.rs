//! Fixed points of Frobenius-semilinear operators `v -> A v^(p)`.

use serde::{Deserialize, Serialize};

use super::linalg::{FpMatrix, Mat};
use super::{make_field, poly, FieldCtx, FieldElem};
use crate::error::{Error, Result};

pub const DEFAULT_SATURATION_CAP: usize = 24;

/// `v -> A v^(p)` on `F_q^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemilinearOperator {
    n: usize,
    entries: Mat,
    invertible: bool,
}

impl SemilinearOperator {
    pub fn new(ctx: &FieldCtx, entries: Mat) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::Dimension(format!(
                "semilinear operator must be square, got {}x{}",
                entries.rows(),
                entries.cols()
            )));
        }
        let invertible = entries.is_invertible(ctx);
        Ok(SemilinearOperator { n: entries.rows(), entries, invertible })
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Self {
        SemilinearOperator { n, entries: Mat::identity(ctx, n), invertible: true }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &Mat {
        &self.entries
    }

    pub fn is_invertible(&self) -> bool {
        self.invertible
    }

    pub fn apply(&self, ctx: &FieldCtx, v: &[FieldElem]) -> Vec<FieldElem> {
        let vp: Vec<FieldElem> = v.iter().map(|x| ctx.frobenius(x)).collect();
        self.entries.mul_vec(ctx, &vp)
    }

    /// `A A^(p) ... A^(p^{m-1})`, the linear operator given by the m-th iterate.
    pub fn norm(&self, ctx: &FieldCtx) -> Mat {
        let mut acc = Mat::identity(ctx, self.n);
        let mut twist = self.entries.clone();
        for _ in 0..ctx.m() {
            acc = acc.mul(ctx, &twist);
            twist = twist.frobenius(ctx);
        }
        acc
    }

    /// The same operator with entries pushed into a larger field.
    pub fn base_change(&self, emb: &FieldEmbedding) -> SemilinearOperator {
        SemilinearOperator { n: self.n, entries: self.entries.map(|x| emb.map(x)), invertible: self.invertible }
    }
}

/// An F_p-basis of a fixed space, in reduced echelon form over F_p coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPoints {
    pub basis: Vec<Vec<FieldElem>>,
}

impl FixedPoints {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Kernel of the F_p-linear map `v -> v - A v^(p)` on `F_p^{nm}`.
pub fn semilinear_fixed_points(ctx: &FieldCtx, a: &SemilinearOperator) -> FixedPoints {
    let (n, m, p) = (a.n, ctx.m(), ctx.p());
    let dim = n * m;
    let mut map = FpMatrix::zeros(p, dim, dim);
    for j in 0..n {
        for k in 0..m {
            let mut coords = vec![0u64; m];
            coords[k] = 1;
            let mut v = vec![ctx.zero(); n];
            v[j] = FieldElem(coords);
            let av = a.apply(ctx, &v);
            let col = j * m + k;
            for (i, (x, y)) in v.iter().zip(&av).enumerate() {
                let diff = ctx.sub(x, y);
                for (kk, &c) in diff.coeffs().iter().enumerate() {
                    map.set(i * m + kk, col, c);
                }
            }
        }
    }
    let basis = map.kernel().into_iter().map(|w| w.chunks(m).map(|c| FieldElem(c.to_vec())).collect()).collect();
    FixedPoints { basis }
}

/// Inclusion `F_{p^m} -> F_{p^{mr}}` sending the power-basis generator to a
/// fixed root of its modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldEmbedding {
    small: FieldCtx,
    big: FieldCtx,
    root: FieldElem,
}

impl FieldEmbedding {
    /// Embeds `small` into its degree-`r` extension. The root is the smallest
    /// member of its Frobenius orbit, so the choice does not depend on the
    /// root-finding path.
    pub fn new(small: &FieldCtx, r: usize) -> Result<Self> {
        let big = make_field(small.p(), small.m() * r)?;
        let root = if small.m() == 1 {
            big.zero()
        } else {
            let f: Vec<FieldElem> = small.modulus().iter().map(|&c| big.from_u64(c)).collect();
            let r0 = poly::find_root(&big, &f).ok_or_else(|| {
                Error::InvalidParameter(format!("no root of the modulus found in F_{}^{}", big.p(), big.m()))
            })?;
            let mut orbit = Vec::with_capacity(small.m());
            let mut x = r0;
            for _ in 0..small.m() {
                let next = big.frobenius(&x);
                orbit.push(x);
                x = next;
            }
            orbit.into_iter().min_by(|a, b| big.cmp_index(a, b)).expect("orbit is nonempty")
        };
        Ok(FieldEmbedding { small: small.clone(), big, root })
    }

    pub fn identity(ctx: &FieldCtx) -> Self {
        FieldEmbedding { small: ctx.clone(), big: ctx.clone(), root: ctx.gen() }
    }

    pub fn small(&self) -> &FieldCtx {
        &self.small
    }

    pub fn big(&self) -> &FieldCtx {
        &self.big
    }

    pub fn degree(&self) -> usize {
        self.big.m() / self.small.m()
    }

    pub fn map(&self, x: &FieldElem) -> FieldElem {
        if self.small.m() == 1 || self.big.m() == self.small.m() {
            let mut v = x.coeffs().to_vec();
            v.resize(self.big.m(), 0);
            return FieldElem(v);
        }
        let mut acc = self.big.zero();
        let mut pw = self.big.one();
        for &c in x.coeffs() {
            if c != 0 {
                acc = self.big.add(&acc, &self.big.scale(&pw, c));
            }
            pw = self.big.mul(&pw, &self.root);
        }
        acc
    }
}

/// Result of enlarging the field until the fixed space has full dimension.
#[derive(Clone, Debug)]
pub struct Saturation {
    pub r: usize,
    pub embedding: FieldEmbedding,
    pub fixed: FixedPoints,
    /// Fixed-point dimension for each degree tried, `r = 1..`.
    pub profile: Vec<usize>,
}

impl Saturation {
    pub fn field(&self) -> &FieldCtx {
        self.embedding.big()
    }
}

/// Searches `r = 1..=cap` for the first extension where the fixed space of
/// an invertible operator reaches dimension `n`.
pub fn saturate_fixed_points(ctx: &FieldCtx, a: &SemilinearOperator, cap: usize) -> Result<Saturation> {
    if !a.is_invertible() {
        return Err(Error::Singular("saturation needs an invertible operator".into()));
    }
    let mut profile = Vec::new();
    for r in 1..=cap {
        let embedding = match FieldEmbedding::new(ctx, r) {
            Ok(e) => e,
            Err(Error::FieldTooLarge { .. }) => break,
            Err(e) => return Err(e),
        };
        let op = a.base_change(&embedding);
        let fixed = semilinear_fixed_points(embedding.big(), &op);
        profile.push(fixed.dim());
        if fixed.dim() == a.n {
            return Ok(Saturation { r, embedding, fixed, profile });
        }
    }
    Err(Error::SaturationCap { cap, profile })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_dim(ctx: &FieldCtx, a: &SemilinearOperator) -> usize {
        let q = ctx.order().unwrap();
        let total = q.pow(a.n() as u32);
        let mut count: u128 = 0;
        for idx in 0..total {
            let mut rest = idx;
            let v: Vec<FieldElem> = (0..a.n())
                .map(|_| {
                    let e = ctx.from_index(rest % q).unwrap();
                    rest /= q;
                    e
                })
                .collect();
            if a.apply(ctx, &v) == v {
                count += 1;
            }
        }
        let mut dim = 0;
        let mut pw = 1u128;
        while pw < count {
            pw *= ctx.p() as u128;
            dim += 1;
        }
        assert_eq!(pw, count, "solution count is a power of p");
        dim
    }

    fn one_by_one(ctx: &FieldCtx, x: FieldElem) -> SemilinearOperator {
        SemilinearOperator::new(ctx, Mat::from_rows(vec![vec![x]], 1)).unwrap()
    }

    #[test]
    fn identity_over_prime_field() {
        let ctx = make_field(5, 1).unwrap();
        for n in 1..4 {
            let fp = semilinear_fixed_points(&ctx, &SemilinearOperator::identity(&ctx, n));
            assert_eq!(fp.dim(), n);
        }
    }

    #[test]
    fn scalar_operators_over_f49() {
        let ctx = make_field(7, 2).unwrap();
        let one = one_by_one(&ctx, ctx.one());
        assert_eq!(semilinear_fixed_points(&ctx, &one).dim(), 1);
        assert_eq!(brute_dim(&ctx, &one), 1);

        let g = ctx.generator().unwrap();
        let a = one_by_one(&ctx, g);
        assert_eq!(semilinear_fixed_points(&ctx, &a).dim(), 0);
        assert_eq!(brute_dim(&ctx, &a), 0);
    }

    #[test]
    fn fixed_vectors_are_fixed() {
        let ctx = make_field(5, 2).unwrap();
        let g = ctx.generator().unwrap();
        let a = Mat::from_rows(vec![vec![ctx.zero(), ctx.one()], vec![ctx.one(), ctx.zero()]], 2);
        let op = SemilinearOperator::new(&ctx, a).unwrap();
        let fp = semilinear_fixed_points(&ctx, &op);
        assert_eq!(fp.dim(), brute_dim(&ctx, &op));
        for v in &fp.basis {
            assert_eq!(&op.apply(&ctx, v), v);
        }
        let op2 =
            SemilinearOperator::new(&ctx, Mat::from_rows(vec![vec![g.clone(), g.clone()], vec![g, ctx.one()]], 2))
                .unwrap();
        assert_eq!(semilinear_fixed_points(&ctx, &op2).dim(), brute_dim(&ctx, &op2));
    }

    #[test]
    fn saturation_matches_norm_order() {
        let ctx = make_field(7, 2).unwrap();
        let g = ctx.generator().unwrap();
        let a = one_by_one(&ctx, g);
        let norm = a.norm(&ctx);
        let expected = ctx.mult_order(norm.get(0, 0)).unwrap() as usize;
        let sat = saturate_fixed_points(&ctx, &a, DEFAULT_SATURATION_CAP).unwrap();
        assert_eq!(sat.r, expected);
        assert_eq!(sat.r, 6);
        assert_eq!(sat.fixed.dim(), 1);
        assert!(sat.profile[..sat.r - 1].iter().all(|&d| d == 0));
        let big = sat.field();
        let op = a.base_change(&sat.embedding);
        assert_eq!(op.apply(big, &sat.fixed.basis[0]), sat.fixed.basis[0]);
    }

    #[test]
    fn saturation_of_identity_is_immediate() {
        let ctx = make_field(5, 1).unwrap();
        let sat = saturate_fixed_points(&ctx, &SemilinearOperator::identity(&ctx, 2), 24).unwrap();
        assert_eq!((sat.r, sat.fixed.dim()), (1, 2));
    }

    #[test]
    fn saturation_cap_reports_profile() {
        let ctx = make_field(7, 2).unwrap();
        let a = one_by_one(&ctx, ctx.generator().unwrap());
        match saturate_fixed_points(&ctx, &a, 3) {
            Err(Error::SaturationCap { cap: 3, profile }) => assert_eq!(profile, vec![0, 0, 0]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = make_field(5, 2).unwrap();
        let emb = FieldEmbedding::new(&small, 3).unwrap();
        let big = emb.big();
        for a in small.elements().step_by(3) {
            for b in small.elements().step_by(7) {
                assert_eq!(emb.map(&small.mul(&a, &b)), big.mul(&emb.map(&a), &emb.map(&b)));
                assert_eq!(emb.map(&small.add(&a, &b)), big.add(&emb.map(&a), &emb.map(&b)));
            }
            assert_eq!(emb.map(&small.frobenius(&a)), big.frobenius(&emb.map(&a)));
        }
    }
}
