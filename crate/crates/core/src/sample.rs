//! Seeded random representations, objects and morphisms.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::crystal::CyclicRep;
use crate::error::{Error, Result};
use crate::field::{primitive_root_of_unity, FieldCtx, FieldElem, FpMatrix, Mat};
use crate::functors::{functor_f, hom_basis, splitting_field, CGObject};

pub use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Orbits of `a -> p a` on `Z/d`.
pub fn frobenius_orbits(p: u64, d: u64) -> Vec<Vec<u64>> {
    let mut seen = vec![false; d as usize];
    let mut out = Vec::new();
    for a in 0..d {
        if seen[a as usize] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut b = a;
        while !seen[b as usize] {
            seen[b as usize] = true;
            orbit.push(b);
            b = (b * p) % d;
        }
        out.push(orbit);
    }
    out
}

/// Companion matrix of the minimal polynomial of `xi^a` over F_p: the
/// irreducible representation attached to the orbit of `a`.
pub fn irreducible_block(p: u64, d: u64, orbit: &[u64]) -> Result<FpMatrix> {
    let ctx = splitting_field(p, d)?;
    let xi = primitive_root_of_unity(&ctx, d)?;
    // Coefficients low to high of prod (x - xi^b).
    let mut poly: Vec<FieldElem> = vec![ctx.one()];
    for &b in orbit {
        let root = ctx.pow(&xi, b as u128);
        let mut next = vec![ctx.zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = ctx.add(&next[i + 1], c);
            next[i] = ctx.sub(&next[i], &ctx.mul(c, &root));
        }
        poly = next;
    }
    let coeffs: Vec<u64> = poly
        .iter()
        .map(|c| c.as_prime().ok_or_else(|| Error::InvalidRep("orbit polynomial is not over F_p".into())))
        .collect::<Result<_>>()?;
    let k = orbit.len();
    let mut m = FpMatrix::zeros(p, k, k);
    for i in 1..k {
        m.set(i, i - 1, 1);
    }
    for i in 0..k {
        m.set(i, k - 1, (p - coeffs[i]) % p);
    }
    Ok(m)
}

fn block_diag(p: u64, blocks: &[FpMatrix]) -> FpMatrix {
    let n: usize = blocks.iter().map(FpMatrix::rows).sum();
    let mut m = FpMatrix::zeros(p, n, n);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                m.set(off + i, off + j, b.get(i, j));
            }
        }
        off += b.rows();
    }
    m
}

pub fn random_invertible_fp(rng: &mut ChaCha8Rng, p: u64, n: usize) -> FpMatrix {
    loop {
        let rows: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect()).collect();
        let m = FpMatrix::from_rows(p, &rows);
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// A random semisimple representation of `Z/d` of rank `1..=max_rank`:
/// irreducible blocks conjugated by a random change of basis.
pub fn random_rep(rng: &mut ChaCha8Rng, p: u64, d: u64, max_rank: usize) -> Result<CyclicRep> {
    let orbits = frobenius_orbits(p, d);
    let target = rng.gen_range(1..=max_rank);
    let mut blocks = Vec::new();
    let mut left = target;
    while left > 0 {
        let fits: Vec<&Vec<u64>> = orbits.iter().filter(|o| o.len() <= left).collect();
        let orbit = fits.choose(rng).expect("the trivial orbit always fits");
        blocks.push(irreducible_block(p, d, orbit)?);
        left -= orbit.len();
    }
    let m = block_diag(p, &blocks);
    let g = random_invertible_fp(rng, p, target);
    let conj = g.mul(&m).mul(&g.inverse().expect("invertible"));
    CyclicRep::new(p, d, &conj.to_rows())
}

fn random_elem(rng: &mut ChaCha8Rng, ctx: &FieldCtx) -> FieldElem {
    let q = ctx.order().expect("sampling needs an enumerable field");
    ctx.from_index(rng.gen_range(0..q)).expect("index in range")
}

pub fn random_invertible(rng: &mut ChaCha8Rng, ctx: &FieldCtx, n: usize) -> Mat {
    loop {
        let rows: Vec<Vec<FieldElem>> = (0..n).map(|_| (0..n).map(|_| random_elem(rng, ctx)).collect()).collect();
        let m = Mat::from_rows(rows, n);
        if n == 0 || m.is_invertible(ctx) {
            return m;
        }
    }
}

/// `F(rep)` moved by a random graded change of basis and twisted by random
/// nonzero scalars of F_p per class. The twist changes the object over
/// `F_q`, not over its algebraic closure.
pub fn random_object(rng: &mut ChaCha8Rng, rep: &CyclicRep, ctx: &FieldCtx) -> Result<CGObject> {
    let base = functor_f(rep, ctx)?;
    let p = ctx.p() as usize;
    let d = base.d as usize;
    let gauge: Vec<Mat> = base.classes.iter().map(|c| random_invertible(rng, ctx, c.dim)).collect();
    let mut mats = Vec::with_capacity(d);
    for cl in &base.classes {
        let a = cl.a as usize;
        let b = (p * a) % d;
        if cl.dim == 0 {
            mats.push(cl.c.clone());
            continue;
        }
        let lam = ctx.from_u64(rng.gen_range(1..ctx.p()));
        let inv = gauge[a].frobenius(ctx).inverse(ctx).expect("gauge is invertible");
        let c = gauge[b].mul(ctx, &cl.c).mul(ctx, &inv).map(|x| ctx.mul(x, &lam));
        mats.push(c);
    }
    CGObject::new(ctx, base.d, mats)
}

/// A random F_p-linear map intertwining the two actions (possibly zero).
pub fn random_equivariant_map(rng: &mut ChaCha8Rng, src: &CyclicRep, tgt: &CyclicRep) -> FpMatrix {
    let p = src.p();
    let mut t = FpMatrix::zeros(p, tgt.rank(), src.rank());
    for h in hom_basis(src.mat(), tgt.mat()) {
        let c = rng.gen_range(0..p);
        for i in 0..t.rows() {
            for j in 0..t.cols() {
                t.set(i, j, (t.get(i, j) + c * h.get(i, j)) % p);
            }
        }
    }
    t
}

/// A random F_p-linear map that does not intertwine, when one exists.
pub fn random_non_equivariant_map(rng: &mut ChaCha8Rng, src: &CyclicRep, tgt: &CyclicRep) -> Option<FpMatrix> {
    let p = src.p();
    for _ in 0..256 {
        let rows: Vec<Vec<u64>> =
            (0..tgt.rank()).map(|_| (0..src.rank()).map(|_| rng.gen_range(0..p)).collect()).collect();
        let t = FpMatrix::from_rows(p, &rows);
        if t.mul(src.mat()) != tgt.mat().mul(&t) {
            return Some(t);
        }
    }
    None
}

/// Pairs `(p, d)` from the acceptance grid with `d` prime to `p`.
pub fn grid() -> Vec<(u64, u64)> {
    let mut v = Vec::new();
    for p in [5u64, 7] {
        for d in [2u64, 3, 4, 6] {
            v.push((p, d));
        }
    }
    v
}
