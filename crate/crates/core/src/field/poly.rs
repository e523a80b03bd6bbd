//! Dense univariate polynomials, coefficients stored constant term first.
//!
//! Two flavours live here: polynomials over the prime field (plain `u64`
//! residues, used to find moduli) and polynomials over an arbitrary
//! [`FieldCtx`] (used for root finding when embedding one field in another).

use super::{FieldCtx, FieldElem};

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a % p, p - 2, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Remainder of `a` modulo `b` over F_p. `b` must be nonzero and trimmed.
pub(crate) fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let top = r.len() - 1;
        let coef = r[top] * lead_inv % p;
        if coef != 0 {
            let shift = top - db;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - coef * bi % p) % p;
            }
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    trim(&mut prod);
    prod
}

/// Quotient and remainder over F_p; `b` nonzero and trimmed.
pub(crate) fn fp_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    let mut q = vec![0u64; r.len().saturating_sub(db)];
    while r.len() > db {
        let top = r.len() - 1;
        let coef = r[top] * lead_inv % p;
        let shift = top - db;
        q[shift] = coef;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - coef * bi % p) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub(crate) fn fp_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    fp_rem(&prod, f, p)
}

fn fp_powmod(base: &[u64], mut exp: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = fp_rem(&[1], f, p);
    let mut b = fp_rem(base, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = fp_mulmod(&acc, &b, f, p);
        }
        b = fp_mulmod(&b, &b, f, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = fp_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

pub(crate) fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial over F_p.
pub(crate) fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = [0u64, 1];
    // powers[k] = x^{p^k} mod f
    let mut powers = Vec::with_capacity(m + 1);
    let mut cur = fp_rem(&x, f, p);
    powers.push(cur.clone());
    for _ in 0..m {
        cur = fp_powmod(&cur, p, f, p);
        powers.push(cur.clone());
    }
    if fp_sub(&powers[m], &x, p) != Vec::<u64>::new() {
        return false;
    }
    for l in prime_factors(m as u64) {
        let k = m / l as usize;
        let diff = fp_sub(&powers[k], &x, p);
        let g = fp_gcd(f, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

// ---- polynomials over an arbitrary finite field ----

pub(crate) type Poly = Vec<FieldElem>;

fn ptrim(a: &mut Poly) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

pub(crate) fn poly_rem(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> Poly {
    let mut r = a.to_vec();
    ptrim(&mut r);
    let db = b.len() - 1;
    let lead_inv = ctx.inv(&b[db]).expect("leading coefficient is nonzero");
    while r.len() > db {
        let top = r.len() - 1;
        let coef = ctx.mul(&r[top], &lead_inv);
        let shift = top - db;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = ctx.sub(&r[shift + i], &ctx.mul(&coef, bi));
        }
        ptrim(&mut r);
    }
    r
}

pub(crate) fn poly_mulmod(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem], f: &[FieldElem]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![ctx.zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            prod[i + j] = ctx.add(&prod[i + j], &ctx.mul(ai, bj));
        }
    }
    poly_rem(ctx, &prod, f)
}

fn poly_powmod(ctx: &FieldCtx, base: &[FieldElem], mut exp: u64, f: &[FieldElem]) -> Poly {
    let mut acc = poly_rem(ctx, &[ctx.one()], f);
    let mut b = poly_rem(ctx, base, f);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mulmod(ctx, &acc, &b, f);
        }
        b = poly_mulmod(ctx, &b, &b, f);
        exp >>= 1;
    }
    acc
}

fn poly_monic(ctx: &FieldCtx, mut a: Poly) -> Poly {
    ptrim(&mut a);
    if let Some(lead) = a.last() {
        let inv = ctx.inv(lead).expect("nonzero lead");
        for c in a.iter_mut() {
            *c = ctx.mul(c, &inv);
        }
    }
    a
}

pub(crate) fn poly_gcd(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> Poly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    ptrim(&mut x);
    ptrim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(ctx, &x, &y);
        x = y;
        y = r;
    }
    poly_monic(ctx, x)
}

fn poly_divexact(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> Poly {
    let mut r = a.to_vec();
    ptrim(&mut r);
    let db = b.len() - 1;
    let lead_inv = ctx.inv(&b[db]).expect("nonzero lead");
    let mut q = vec![ctx.zero(); r.len().saturating_sub(db)];
    while r.len() > db {
        let top = r.len() - 1;
        let coef = ctx.mul(&r[top], &lead_inv);
        let shift = top - db;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = ctx.sub(&r[shift + i], &ctx.mul(&coef, bi));
        }
        q[shift] = coef;
        ptrim(&mut r);
    }
    debug_assert!(r.is_empty());
    q
}

/// Candidate splitting polynomial for Cantor–Zassenhaus with shift `delta`.
fn splitter(ctx: &FieldCtx, f: &[FieldElem], delta: &FieldElem) -> Poly {
    let p = ctx.p();
    let k = ctx.m();
    if p == 2 {
        // absolute trace of delta * X
        let y = poly_rem(ctx, &[ctx.zero(), delta.clone()], f);
        let mut acc: Poly = Vec::new();
        let mut w = y;
        for _ in 0..k {
            acc = poly_add(ctx, &acc, &w);
            w = poly_mulmod(ctx, &w, &w, f);
        }
        acc
    } else {
        // (X + delta)^{(Q-1)/2} - 1, exponent written as ((p-1)/2) * sum p^i
        let y = poly_rem(ctx, &[delta.clone(), ctx.one()], f);
        let z = poly_powmod(ctx, &y, (p - 1) / 2, f);
        let mut acc = poly_rem(ctx, &[ctx.one()], f);
        let mut w = z;
        for _ in 0..k {
            acc = poly_mulmod(ctx, &acc, &w, f);
            w = poly_powmod(ctx, &w, p, f);
        }
        poly_sub(ctx, &acc, &[ctx.one()])
    }
}

fn poly_add(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> Poly {
    let n = a.len().max(b.len());
    let zero = ctx.zero();
    let mut out: Poly = (0..n).map(|i| ctx.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero))).collect();
    ptrim(&mut out);
    out
}

fn poly_sub(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> Poly {
    let n = a.len().max(b.len());
    let zero = ctx.zero();
    let mut out: Poly = (0..n).map(|i| ctx.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero))).collect();
    ptrim(&mut out);
    out
}

/// One root of a monic squarefree polynomial that splits into linear
/// factors over `ctx`. Shifts are tried in index order, so the search is
/// deterministic.
pub(crate) fn find_root(ctx: &FieldCtx, f: &[FieldElem]) -> Option<FieldElem> {
    let mut f = poly_monic(ctx, f.to_vec());
    let mut counter: u128 = 0;
    loop {
        match f.len() {
            0 | 1 => return None,
            2 => return Some(ctx.neg(&f[0])),
            _ => {}
        }
        let delta = ctx.from_index_lossy(counter);
        counter += 1;
        if counter > 10_000 {
            return None;
        }
        let s = splitter(ctx, &f, &delta);
        let g = poly_gcd(ctx, &f, &s);
        if g.len() > 1 && g.len() < f.len() {
            let h = poly_divexact(ctx, &f, &g);
            f = if g.len() <= h.len() { g } else { poly_monic(ctx, h) };
        }
    }
}
