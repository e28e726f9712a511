//! A single finite field with precomputed exponent/logarithm tables.
//!
//! Elements are `u32` indices. The index of an element is the integer whose
//! base-`p` digits are its coordinates over the prime field, least
//! significant first. For an extension built with [`Gf::extension`] this
//! means the index is `sum c_j * s^j` where `c_j` are the coordinates over the
//! base field (itself of order `s`) in the power basis of the defining root.
//! Subfield elements therefore keep their index when embedded.

use super::poly;
use crate::error::{Error, Result};

/// Largest field order the table representation accepts.
pub const MAX_ORDER: u64 = 1 << 20;

const ADD_TABLE_MAX: u32 = 1024;

#[derive(Clone, Debug)]
pub struct Gf {
    p: u32,
    degree: u32,
    order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl Gf {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Gf> {
        if !is_prime(p as u64) {
            return Err(Error::BadTower(format!("{p} is not prime")));
        }
        if p as u64 > MAX_ORDER {
            return Err(Error::TooLarge {
                size: p as u128,
                limit: MAX_ORDER as u128,
            });
        }
        let factors = prime_factors((p - 1) as u64);
        let pow_mod = |mut b: u64, mut e: u64| {
            let mut acc = 1u64;
            b %= p as u64;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * b % p as u64;
                }
                b = b * b % p as u64;
                e >>= 1;
            }
            acc
        };
        let g = (1..p as u64)
            .find(|&g| factors.iter().all(|&f| pow_mod(g, (p as u64 - 1) / f) != 1))
            .expect("prime field has a primitive root");
        let mut walk = Vec::with_capacity(p as usize - 1);
        let mut x = 1u64;
        for _ in 0..p - 1 {
            walk.push(x as u32);
            x = x * g % p as u64;
        }
        Ok(Gf::from_walk(p, 1, walk))
    }

    /// The extension `base[X]/(modulus)`; `modulus` is monic over `base`,
    /// given little-endian as base-field indices.
    pub fn extension(base: &Gf, modulus: &[u32]) -> Result<Gf> {
        let mut m = modulus.to_vec();
        poly::trim(&mut m);
        if m.len() < 2 {
            return Err(Error::BadTower(
                "modulus must have degree at least 1".into(),
            ));
        }
        if m.iter().any(|&c| c >= base.order) {
            return Err(Error::BadTower(
                "modulus coefficient outside the base field".into(),
            ));
        }
        if *m.last().unwrap() != 1 {
            return Err(Error::BadTower("modulus must be monic".into()));
        }
        let d = (m.len() - 1) as u32;
        let order = (base.order as u64)
            .checked_pow(d)
            .filter(|&o| o <= MAX_ORDER);
        let order = match order {
            Some(o) => o,
            None => {
                return Err(Error::TooLarge {
                    size: (base.order as u128).saturating_pow(d),
                    limit: MAX_ORDER as u128,
                })
            }
        };
        if !poly::is_irreducible(base, &m) {
            return Err(Error::NotIrreducible(format!(
                "{m:?} over a field of order {}",
                base.order
            )));
        }
        let s = base.order as u64;
        let encode = |c: &[u32]| c.iter().rev().fold(0u64, |acc, &x| acc * s + x as u64) as u32;
        let decode = |mut v: u64| {
            (0..d)
                .map(|_| {
                    let c = (v % s) as u32;
                    v /= s;
                    c
                })
                .collect::<Vec<u32>>()
        };
        let factors = prime_factors(order - 1);
        let generator = (1..order)
            .map(decode)
            .find(|c| {
                factors
                    .iter()
                    .all(|&f| poly::powmod(base, c, ((order - 1) / f) as u128, &m) != [1])
            })
            .ok_or_else(|| Error::NotIrreducible("no primitive element".into()))?;
        let mut walk = Vec::with_capacity(order as usize - 1);
        let mut x = vec![1u32];
        for _ in 0..order - 1 {
            let mut padded = x.clone();
            padded.resize(d as usize, 0);
            walk.push(encode(&padded));
            x = poly::mulmod(base, &x, &generator, &m);
        }
        Ok(Gf::from_walk(base.p, base.degree * d, walk))
    }

    fn from_walk(p: u32, degree: u32, walk: Vec<u32>) -> Gf {
        let order = walk.len() as u32 + 1;
        let mut log = vec![u32::MAX; order as usize];
        for (i, &v) in walk.iter().enumerate() {
            log[v as usize] = i as u32;
        }
        let mut exp = walk.clone();
        exp.extend_from_slice(&walk);
        let mut gf = Gf {
            p,
            degree,
            order,
            exp,
            log,
            neg: Vec::new(),
            add_table: None,
        };
        gf.neg = (0..order).map(|a| gf.neg_digits(a)).collect();
        if order <= ADD_TABLE_MAX {
            let mut t = Vec::with_capacity((order * order) as usize);
            for a in 0..order {
                for b in 0..order {
                    t.push(gf.add_digits(a, b));
                }
            }
            gf.add_table = Some(t);
        }
        gf
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.p;
        let (mut out, mut place) = (0u32, 1u32);
        while a != 0 || b != 0 {
            out += (a % p + b % p) % p * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    fn neg_digits(&self, mut a: u32) -> u32 {
        let p = self.p;
        let (mut out, mut place) = (0u32, 1u32);
        while a != 0 {
            out += (p - a % p) % p * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// The primitive element the tables were generated from.
    pub fn primitive(&self) -> u32 {
        self.exp[if self.order == 2 { 0 } else { 1 }]
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add_table {
            Some(t) => t[(a * self.order + b) as usize],
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize];
        Some(if l == 0 {
            1
        } else {
            self.exp[(self.order - 1 - l) as usize]
        })
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = (self.order - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// Discrete logarithm to the table's primitive element.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn exp(&self, k: u64) -> u32 {
        self.exp[(k % (self.order as u64 - 1)) as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: u32) -> Option<u64> {
        let l = self.log(a)? as u64;
        let n = (self.order - 1) as u64;
        Some(n / gcd(l, n))
    }

    /// Embeds an integer through `Z -> F_p`.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn sum<I: IntoIterator<Item = u32>>(&self, it: I) -> u32 {
        it.into_iter().fold(0, |acc, x| self.add(acc, x))
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_axioms_exhaustive() {
        for p in [2, 3, 5, 7, 13] {
            let f = Gf::prime(p).unwrap();
            for a in 0..p {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..p {
                    assert_eq!(f.add(a, b), (a + b) % p);
                    assert_eq!(f.mul(a, b), a * b % p);
                }
            }
        }
    }

    #[test]
    fn rejects_composite_and_reducible() {
        assert!(matches!(Gf::prime(9), Err(Error::BadTower(_))));
        let f5 = Gf::prime(5).unwrap();
        assert!(matches!(
            Gf::extension(&f5, &[1, 0, 1]),
            Err(Error::NotIrreducible(_))
        ));
        assert!(matches!(
            Gf::extension(&f5, &[3, 0, 2]),
            Err(Error::BadTower(_))
        ));
    }

    #[test]
    fn extension_matches_schoolbook() {
        // F_25 = F_5[u]/(u^2 - 2)
        let f5 = Gf::prime(5).unwrap();
        let f25 = Gf::extension(&f5, &[3, 0, 1]).unwrap();
        assert_eq!(f25.order(), 25);
        for a in 0..25u32 {
            for b in 0..25u32 {
                let (a0, a1, b0, b1) = (a % 5, a / 5, b % 5, b / 5);
                let c0 = (a0 * b0 + 2 * a1 * b1) % 5;
                let c1 = (a0 * b1 + a1 * b0) % 5;
                assert_eq!(f25.mul(a, b), c0 + 5 * c1);
                assert_eq!(f25.add(a, b), (a0 + b0) % 5 + 5 * ((a1 + b1) % 5));
            }
        }
        assert_eq!(f25.mult_order(f25.primitive()), Some(24));
    }

    #[test]
    fn pow_and_inverse() {
        let f5 = Gf::prime(5).unwrap();
        let f = Gf::extension(&f5, &[2, 4, 1]).unwrap();
        for a in 1..f.order() {
            assert_eq!(f.pow(a, (f.order() - 1) as u64), 1);
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            assert_eq!(f.div(a, a), Some(1));
        }
        assert_eq!(f.pow(0, 0), 1);
        assert_eq!(f.inv(0), None);
    }
}
