//! Dense matrices over a [`FieldCtx`] and over the prime field.

use serde::{Deserialize, Serialize};

use super::{poly::inv_mod, FieldCtx, FieldElem};

/// Row-major matrix over F_{p^m}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Mat {
    pub fn zeros(ctx: &FieldCtx, rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![ctx.zero(); rows * cols] }
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElem>>, cols: usize) -> Self {
        let r = rows.len();
        let data: Vec<FieldElem> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * cols, "ragged matrix");
        Mat { rows: r, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(ctx: &FieldCtx, cols: &[Vec<FieldElem>], rows: usize) -> Self {
        let mut m = Self::zeros(ctx, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    /// Lifts a prime-field matrix.
    pub fn from_fp(ctx: &FieldCtx, a: &FpMatrix) -> Self {
        let mut m = Self::zeros(ctx, a.rows(), a.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                m.set(i, j, ctx.from_u64(a.get(i, j)));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElem::is_zero)
    }

    pub fn map(&self, f: impl Fn(&FieldElem) -> FieldElem) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Entrywise p-th power.
    pub fn frobenius(&self, ctx: &FieldCtx) -> Self {
        self.map(|x| ctx.frobenius(x))
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Mat::zeros(ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = ctx.add(out.get(i, j), &ctx.mul(a, b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, ctx: &FieldCtx, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(ctx.zero(), |acc, (a, b)| ctx.add(&acc, &ctx.mul(a, b))))
            .collect()
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| ctx.sub(a, b)).collect(),
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Mat { rows: self.cols, cols: self.rows, data }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, ctx: &FieldCtx) -> (Mat, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(piv) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(piv, r);
            let inv = ctx.inv(a.get(r, c)).expect("pivot is nonzero");
            for j in 0..a.cols {
                let v = ctx.mul(a.get(r, j), &inv);
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                if i == r || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in 0..a.cols {
                    let v = ctx.sub(a.get(i, j), &ctx.mul(&f, a.get(r, j)));
                    a.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        self.rref(ctx).1.len()
    }

    /// Canonical (reduced echelon) basis of the right kernel.
    pub fn kernel(&self, ctx: &FieldCtx) -> Vec<Vec<FieldElem>> {
        let (r, pivots) = self.rref(ctx);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis: Vec<Vec<FieldElem>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![ctx.zero(); self.cols];
                v[f] = ctx.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = ctx.neg(r.get(row, f));
                }
                v
            })
            .collect();
        echelonize(ctx, &basis, self.cols)
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Mat::zeros(ctx, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, ctx.one());
        }
        let (r, pivots) = aug.rref(ctx);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Mat::zeros(ctx, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(out)
    }

    pub fn is_invertible(&self, ctx: &FieldCtx) -> bool {
        self.is_square() && self.rank(ctx) == self.rows
    }

    pub fn pow(&self, ctx: &FieldCtx, mut e: u64) -> Mat {
        let mut acc = Mat::identity(ctx, self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ctx, &b);
            }
            b = b.mul(ctx, &b);
            e >>= 1;
        }
        acc
    }

    /// Integer entries, for matrices over the prime field.
    pub fn to_fp(&self, ctx: &FieldCtx) -> Option<FpMatrix> {
        let data: Option<Vec<u64>> = self.data.iter().map(FieldElem::as_prime).collect();
        Some(FpMatrix { rows: self.rows, cols: self.cols, data: data?, p: ctx.p() })
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Reduced echelon basis of the span of `vectors`.
pub(crate) fn echelonize(ctx: &FieldCtx, vectors: &[Vec<FieldElem>], len: usize) -> Vec<Vec<FieldElem>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Mat::from_rows(vectors.to_vec(), len);
    let (r, pivots) = m.rref(ctx);
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Row-major matrix over F_p with `u64` residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
    p: u64,
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix { rows, cols, data: vec![0; rows * cols], p }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        FpMatrix { rows: rows.len(), cols, data: rows.iter().flatten().map(|&x| x % p).collect(), p }
    }

    pub fn with_modulus(mut self, p: u64) -> Self {
        self.p = p;
        for x in self.data.iter_mut() {
            *x %= p;
        }
        self
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let p = self.p;
        let mut out = FpMatrix::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = (out.data[idx] + a * other.get(k, j)) % p;
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        let p = self.p;
        FpMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| (a + p - b) % p).collect(),
            p,
        }
    }

    pub fn pow(&self, mut e: u64) -> FpMatrix {
        let mut acc = FpMatrix::identity(self.p, self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u64::from(i == j)))
    }

    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let p = self.p;
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(piv) = (r..a.rows).find(|&i| a.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..a.cols {
                    a.data.swap(piv * a.cols + j, r * a.cols + j);
                }
            }
            let inv = inv_mod(a.get(r, c), p);
            for j in 0..a.cols {
                let idx = r * a.cols + j;
                a.data[idx] = a.data[idx] * inv % p;
            }
            for i in 0..a.rows {
                let f = a.get(i, c);
                if i == r || f == 0 {
                    continue;
                }
                for j in c..a.cols {
                    let idx = i * a.cols + j;
                    a.data[idx] = (a.data[idx] + p - f * a.data[r * a.cols + j] % p) % p;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical (reduced echelon) basis of the right kernel, as rows.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis: Vec<Vec<u64>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![0u64; self.cols];
                v[f] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - r.get(row, f)) % p;
                }
                v
            })
            .collect();
        if basis.is_empty() {
            return basis;
        }
        let b = FpMatrix::from_rows(p, &basis);
        let (e, piv) = b.rref();
        (0..piv.len()).map(|i| e.to_rows()[i].clone()).collect()
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = FpMatrix::zeros(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = FpMatrix::zeros(self.p, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j));
            }
        }
        Some(out)
    }

    pub fn trace(&self) -> u64 {
        (0..self.rows.min(self.cols)).fold(0, |acc, i| (acc + self.get(i, i)) % self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn inverse_roundtrip_over_extension() {
        let ctx = make_field(5, 2).unwrap();
        let g = ctx.gen();
        let a = Mat::from_rows(vec![vec![g.clone(), ctx.one()], vec![ctx.one(), ctx.zero()]], 2);
        let inv = a.inverse(&ctx).unwrap();
        assert_eq!(a.mul(&ctx, &inv), Mat::identity(&ctx, 2));
        let sing = Mat::from_rows(vec![vec![g.clone(), g.clone()], vec![g.clone(), g]], 2);
        assert!(sing.inverse(&ctx).is_none());
    }

    #[test]
    fn fp_kernel_dimension() {
        let a = FpMatrix::from_rows(7, &[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!((v[0] + 2 * v[1] + 3 * v[2]) % 7, 0);
        }
    }
}
