use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{gcd, primitive_root_of_unity, FieldCtx, FieldElem, FpMatrix, Mat};

/// An F_p-representation of Z/d, given by the image of the generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicRep {
    d: u64,
    mat: FpMatrix,
}

/// Serialized form `{d, r, mat}`; the prime comes from the surrounding job.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepDescriptor {
    pub d: u64,
    pub r: usize,
    pub mat: Vec<Vec<u64>>,
}

impl CyclicRep {
    pub fn new(p: u64, d: u64, rows: &[Vec<u64>]) -> Result<Self> {
        if d == 0 || gcd(d, p) != 1 {
            return Err(Error::InvalidRep(format!("order d = {d} must be positive and prime to p = {p}")));
        }
        let r = rows.len();
        if r == 0 || rows.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidRep("matrix must be square and nonempty".into()));
        }
        if rows.iter().flatten().any(|&x| x >= p) {
            return Err(Error::InvalidRep(format!("entries must lie in [0, {p})")));
        }
        let mat = FpMatrix::from_rows(p, rows);
        if !mat.pow(d).is_identity() {
            return Err(Error::InvalidRep(format!("matrix does not satisfy mat^{d} = 1")));
        }
        Ok(CyclicRep { d, mat })
    }

    pub fn from_descriptor(p: u64, desc: &RepDescriptor) -> Result<Self> {
        if desc.r != desc.mat.len() {
            return Err(Error::InvalidRep(format!("r = {} but matrix has {} rows", desc.r, desc.mat.len())));
        }
        Self::new(p, desc.d, &desc.mat)
    }

    pub fn descriptor(&self) -> RepDescriptor {
        RepDescriptor { d: self.d, r: self.rank(), mat: self.mat.to_rows() }
    }

    pub fn trivial(p: u64, d: u64, r: usize) -> Result<Self> {
        let rows: Vec<Vec<u64>> = (0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect();
        Self::new(p, d, &rows)
    }

    /// Companion matrix of `x^{d-1} + ... + x + 1`: the regular representation
    /// with the trivial summand removed.
    pub fn companion(p: u64, d: u64) -> Result<Self> {
        let n = (d - 1) as usize;
        let mut rows = vec![vec![0u64; n]; n];
        for i in 1..n {
            rows[i][i - 1] = 1;
        }
        for row in rows.iter_mut() {
            row[n - 1] = p - 1;
        }
        Self::new(p, d, &rows)
    }

    /// Cyclic permutation of `d` basis vectors.
    pub fn regular(p: u64, d: u64) -> Result<Self> {
        let n = d as usize;
        let mut rows = vec![vec![0u64; n]; n];
        for i in 0..n {
            rows[(i + 1) % n][i] = 1;
        }
        Self::new(p, d, &rows)
    }

    pub fn direct_sum(&self, o: &CyclicRep) -> Result<Self> {
        if self.d != o.d || self.p() != o.p() {
            return Err(Error::InvalidRep("direct sum of incompatible representations".into()));
        }
        let (r1, r2) = (self.rank(), o.rank());
        let mut rows = vec![vec![0u64; r1 + r2]; r1 + r2];
        for i in 0..r1 {
            for j in 0..r1 {
                rows[i][j] = self.mat.get(i, j);
            }
        }
        for i in 0..r2 {
            for j in 0..r2 {
                rows[r1 + i][r1 + j] = o.mat.get(i, j);
            }
        }
        Self::new(self.p(), self.d, &rows)
    }

    /// The same matrix viewed as a representation of Z/(d e).
    pub fn inflate(&self, e: u64) -> Result<Self> {
        Self::new(self.p(), self.d * e, &self.mat.to_rows())
    }

    pub fn p(&self) -> u64 {
        self.mat.p()
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn rank(&self) -> usize {
        self.mat.rows()
    }

    pub fn mat(&self) -> &FpMatrix {
        &self.mat
    }
}

impl Serialize for CyclicRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.descriptor().serialize(s)
    }
}

/// Eigenspaces of the generator over F_q: class `a` carries eigenvalue `xi^a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightDecomposition {
    pub d: u64,
    pub xi: FieldElem,
    /// Echelonized basis vectors per class, indexed by `a`.
    pub bases: Vec<Vec<Vec<FieldElem>>>,
}

impl WeightDecomposition {
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// Coordinates of `v` in the class-`a` basis, if `v` lies in that eigenspace.
    pub fn coordinates(&self, ctx: &FieldCtx, a: usize, v: &[FieldElem]) -> Option<Vec<FieldElem>> {
        let basis = &self.bases[a];
        let coords: Vec<FieldElem> = basis
            .iter()
            .map(|b| {
                let piv = b.iter().position(|x| !x.is_zero()).expect("basis vectors are nonzero");
                v[piv].clone()
            })
            .collect();
        let mut recon = vec![ctx.zero(); v.len()];
        for (c, b) in coords.iter().zip(basis) {
            for (r, x) in recon.iter_mut().zip(b) {
                *r = ctx.add(r, &ctx.mul(c, x));
            }
        }
        (recon == v).then_some(coords)
    }
}

pub fn weight_decompose(rep: &CyclicRep, ctx: &FieldCtx) -> Result<WeightDecomposition> {
    if ctx.p() != rep.p() {
        return Err(Error::InvalidParameter(format!(
            "representation is over F_{} but the field has characteristic {}",
            rep.p(),
            ctx.p()
        )));
    }
    let d = rep.d();
    let xi = primitive_root_of_unity(ctx, d)?;
    let mat = Mat::from_fp(ctx, rep.mat());
    let r = rep.rank();
    let mut bases = Vec::with_capacity(d as usize);
    let mut eig = ctx.one();
    for _ in 0..d {
        let mut shifted = mat.clone();
        for i in 0..r {
            let v = ctx.sub(shifted.get(i, i), &eig);
            shifted.set(i, i, v);
        }
        bases.push(shifted.kernel(ctx));
        eig = ctx.mul(&eig, &xi);
    }
    let total: usize = bases.iter().map(Vec::len).sum();
    if total != r {
        return Err(Error::InvalidRep(format!("eigenspaces have total dimension {total}, expected {r}")));
    }
    Ok(WeightDecomposition { d, xi, bases })
}

/// `B_a`: coordinates of the p-th powers of the class-`a` basis in the class `pa` basis.
pub fn frobenius_on_weights(dec: &WeightDecomposition, ctx: &FieldCtx) -> Result<Vec<Mat>> {
    let d = dec.d as usize;
    let p = ctx.p() as usize;
    let mut out = Vec::with_capacity(d);
    for a in 0..d {
        let b = (p * a) % d;
        let cols: Vec<Vec<FieldElem>> = dec.bases[a]
            .iter()
            .map(|w| {
                let wp: Vec<FieldElem> = w.iter().map(|x| ctx.frobenius(x)).collect();
                dec.coordinates(ctx, b, &wp)
                    .ok_or_else(|| Error::Singular(format!("Frobenius twist of class {a} does not land in class {b}")))
            })
            .collect::<Result<_>>()?;
        let m = Mat::from_cols(ctx, &cols, dec.bases[b].len());
        if !m.is_invertible(ctx) {
            return Err(Error::Singular(format!("Frobenius matrix of class {a} is not invertible")));
        }
        out.push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn rejects_bad_reps() {
        assert!(CyclicRep::new(5, 3, &[vec![2]]).is_err());
        assert!(CyclicRep::new(5, 5, &[vec![1]]).is_err());
        assert!(CyclicRep::new(5, 2, &[vec![4]]).is_ok());
    }

    #[test]
    fn trivial_rank_one() {
        let ctx = make_field(5, 2).unwrap();
        let rep = CyclicRep::trivial(5, 3, 1).unwrap();
        let dec = weight_decompose(&rep, &ctx).unwrap();
        assert_eq!(dec.dims(), vec![1, 0, 0]);
        let b = frobenius_on_weights(&dec, &ctx).unwrap();
        assert_eq!(b[0], Mat::identity(&ctx, 1));
    }

    #[test]
    fn companion_over_f25() {
        let ctx = make_field(5, 2).unwrap();
        let rep = CyclicRep::companion(5, 3).unwrap();
        let dec = weight_decompose(&rep, &ctx).unwrap();
        assert_eq!(dec.dims(), vec![0, 1, 1]);
        let b = frobenius_on_weights(&dec, &ctx).unwrap();
        assert!(b[1].is_invertible(&ctx) && b[2].is_invertible(&ctx));
        assert_eq!((b[1].rows(), b[2].rows()), (1, 1));
    }

    #[test]
    fn regular_rep() {
        let ctx = make_field(7, 1).unwrap();
        let rep = CyclicRep::regular(7, 3).unwrap();
        let dec = weight_decompose(&rep, &ctx).unwrap();
        assert_eq!(dec.dims(), vec![1, 1, 1]);
        assert!(frobenius_on_weights(&dec, &ctx).unwrap().iter().all(|m| m.rows() == 1 && m.is_invertible(&ctx)));
    }

    #[test]
    fn needs_roots_of_unity() {
        let ctx = make_field(5, 1).unwrap();
        assert!(matches!(
            weight_decompose(&CyclicRep::companion(5, 3).unwrap(), &ctx),
            Err(Error::NoRootsOfUnity { .. })
        ));
    }
}
