//! Dense univariate polynomials over a [`Gf`], little-endian coefficient vectors.
//!
//! Only what tower construction needs: multiplication modulo a monic
//! polynomial, exponentiation, gcd and an irreducibility test.

use super::gf::Gf;

pub(crate) fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn sub(f: &Gf, a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out: Vec<u32> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            f.sub(x, y)
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(f: &Gf, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo `m`; `m` must be nonzero.
pub(crate) fn rem(f: &Gf, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut m = m.to_vec();
    trim(&mut m);
    let dm = m.len() - 1;
    let lead_inv = f.inv(m[dm]).expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    trim(&mut r);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = f.mul(r[top], lead_inv);
        let shift = top - dm;
        for (j, &mj) in m.iter().enumerate() {
            r[shift + j] = f.sub(r[shift + j], f.mul(c, mj));
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mulmod(f: &Gf, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    rem(f, &mul(f, a, b), m)
}

pub(crate) fn powmod(f: &Gf, a: &[u32], mut e: u128, m: &[u32]) -> Vec<u32> {
    let mut base = rem(f, a, m);
    let mut acc = rem(f, &[1], m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &base, m);
        }
        base = mulmod(f, &base, &base, m);
        e >>= 1;
    }
    acc
}

/// Monic gcd.
pub(crate) fn gcd(f: &Gf, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let inv = f.inv(lead).expect("nonzero");
        for c in x.iter_mut() {
            *c = f.mul(*c, inv);
        }
    }
    x
}

/// Ben-Or test: `m` (degree d) is irreducible iff gcd(X^{s^i} - X, m) = 1
/// for all 1 <= i <= d/2, where s is the order of the coefficient field.
pub(crate) fn is_irreducible(f: &Gf, m: &[u32]) -> bool {
    let mut m = m.to_vec();
    trim(&mut m);
    if m.len() < 2 {
        return false;
    }
    let d = m.len() - 1;
    let x = vec![0, 1];
    let mut frob = rem(f, &x, &m);
    for _ in 0..d / 2 {
        frob = powmod(f, &frob, f.order() as u128, &m);
        let g = gcd(f, &sub(f, &frob, &x), &m);
        if g.len() != 1 {
            return false;
        }
    }
    true
}
