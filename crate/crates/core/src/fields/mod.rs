//! The tower `F_p ⊂ F_q = F_{p^m} ⊂ L = F_{q^r}`.
//!
//! All three levels share one integer encoding (see [`gf`]): an element of a
//! lower level has the same index in every level above it, so embedding is
//! free and `Elem` only needs to carry its level for checked arithmetic and
//! formatting.

pub mod gf;
mod poly;
mod text;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use gf::Gf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    /// `F_p`
    Prime,
    /// `K = F_q`
    Mid,
    /// `L = F_{q^r}`
    Top,
}

/// A tower element tagged with its level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Elem {
    pub level: Level,
    pub value: u32,
}

impl Elem {
    pub fn new(level: Level, value: u32) -> Elem {
        Elem { level, value }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Serializable description of a tower.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDescriptor {
    pub p: u32,
    pub m: u32,
    pub r: u32,
    /// Monic, little-endian, coefficients in `F_p`.
    pub base_modulus: Vec<u32>,
    /// Monic, little-endian; each coefficient is an `F_q` element given by
    /// its `F_p` coordinates.
    pub top_modulus: Vec<Vec<u32>>,
}

#[derive(Debug, Clone)]
pub struct FieldTower {
    p: u32,
    m: u32,
    r: u32,
    base_modulus: Vec<u32>,
    top_modulus: Vec<u32>,
    prime: Gf,
    mid: Gf,
    top: Gf,
    generator_of_units: u32,
}

impl FieldTower {
    /// Tower with the default moduli (see [`FieldTower::default_modulus`]).
    pub fn new(p: u32, m: u32, r: u32) -> Result<FieldTower> {
        let prime = Gf::prime(p)?;
        let base_modulus = Self::default_modulus(&prime, m)?;
        let mid = Gf::extension(&prime, &base_modulus)?;
        let top_modulus = Self::default_modulus(&mid, r)?;
        Self::assemble(p, m, r, base_modulus, top_modulus, prime, mid)
    }

    /// Tower with explicit moduli, both monic and little-endian. The top
    /// modulus coefficients are `F_q` indices.
    pub fn with_moduli(
        p: u32,
        m: u32,
        r: u32,
        base_modulus: Vec<u32>,
        top_modulus: Vec<u32>,
    ) -> Result<FieldTower> {
        if base_modulus.len() != m as usize + 1 {
            return Err(Error::BadTower(format!(
                "base modulus must have degree {m}"
            )));
        }
        if top_modulus.len() != r as usize + 1 {
            return Err(Error::BadTower(format!("top modulus must have degree {r}")));
        }
        let prime = Gf::prime(p)?;
        let mid = Gf::extension(&prime, &base_modulus)?;
        Self::assemble(p, m, r, base_modulus, top_modulus, prime, mid)
    }

    pub fn from_descriptor(d: &TowerDescriptor) -> Result<FieldTower> {
        let p = d.p;
        let top = d
            .top_modulus
            .iter()
            .map(|coords| {
                if coords.len() != d.m as usize || coords.iter().any(|&c| c >= p) {
                    return Err(Error::BadTower("malformed top modulus coefficient".into()));
                }
                Ok(coords.iter().rev().fold(0u32, |acc, &c| acc * p + c))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_moduli(p, d.m, d.r, d.base_modulus.clone(), top)
    }

    fn assemble(
        p: u32,
        m: u32,
        r: u32,
        base_modulus: Vec<u32>,
        top_modulus: Vec<u32>,
        prime: Gf,
        mid: Gf,
    ) -> Result<FieldTower> {
        if m == 0 || r == 0 {
            return Err(Error::BadTower("extension degrees must be positive".into()));
        }
        let top = Gf::extension(&mid, &top_modulus)?;
        let generator_of_units = (1..mid.order())
            .find(|&g| mid.mult_order(g) == Some(mid.order() as u64 - 1))
            .unwrap_or(1);
        Ok(FieldTower {
            p,
            m,
            r,
            base_modulus,
            top_modulus,
            prime,
            mid,
            top,
            generator_of_units,
        })
    }

    /// Default defining polynomial of a degree-`d` extension of `base`.
    ///
    /// * `d = 1`: `X`, so the extension is `base` itself.
    /// * `d = 2`, odd characteristic: `X^2 - ν` with `ν` the least-index
    ///   nonsquare; the root `u` then satisfies `θ(u) = -u`. Over `F_5` this is
    ///   `u^2 = 2`.
    /// * otherwise: the first irreducible monic polynomial in the order where
    ///   the coefficient of `X^{d-1}` is most significant.
    pub fn default_modulus(base: &Gf, d: u32) -> Result<Vec<u32>> {
        if d == 0 {
            return Err(Error::BadTower("extension degree must be positive".into()));
        }
        if d == 1 {
            return Ok(vec![0, 1]);
        }
        let s = base.order() as u64;
        if d == 2 && base.characteristic() != 2 {
            let half = (s - 1) / 2;
            let nu = (1..base.order())
                .find(|&x| base.pow(x, half) != 1)
                .expect("odd field has a nonsquare");
            return Ok(vec![base.neg(nu), 0, 1]);
        }
        let count = s
            .checked_pow(d)
            .filter(|&c| c <= gf::MAX_ORDER)
            .ok_or(Error::TooLarge {
                size: (s as u128).saturating_pow(d),
                limit: gf::MAX_ORDER as u128,
            })?;
        for n in 0..count {
            let mut coeffs: Vec<u32> = (0..d).map(|i| ((n / s.pow(i)) % s) as u32).collect();
            coeffs.push(1);
            if poly::is_irreducible(base, &coeffs) {
                return Ok(coeffs);
            }
        }
        Err(Error::NotIrreducible(format!(
            "no irreducible of degree {d}"
        )))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `q = p^m`
    pub fn q(&self) -> u32 {
        self.mid.order()
    }

    pub fn prime(&self) -> &Gf {
        &self.prime
    }

    /// `K = F_q`
    pub fn mid(&self) -> &Gf {
        &self.mid
    }

    /// `L = F_{q^r}`
    pub fn top(&self) -> &Gf {
        &self.top
    }

    pub fn field(&self, level: Level) -> &Gf {
        match level {
            Level::Prime => &self.prime,
            Level::Mid => &self.mid,
            Level::Top => &self.top,
        }
    }

    pub fn base_modulus(&self) -> &[u32] {
        &self.base_modulus
    }

    pub fn top_modulus(&self) -> &[u32] {
        &self.top_modulus
    }

    /// A primitive element of `F_q^*` (the least index with full order).
    pub fn generator_of_units(&self) -> u32 {
        self.generator_of_units
    }

    pub fn descriptor(&self) -> TowerDescriptor {
        TowerDescriptor {
            p: self.p,
            m: self.m,
            r: self.r,
            base_modulus: self.base_modulus.clone(),
            top_modulus: self
                .top_modulus
                .iter()
                .map(|&c| self.coords(Level::Mid, c))
                .collect(),
        }
    }

    /// Extension degree of `level` over the level below it.
    pub fn level_degree(&self, level: Level) -> u32 {
        match level {
            Level::Prime => 1,
            Level::Mid => self.m,
            Level::Top => self.r,
        }
    }

    fn lower_order(&self, level: Level) -> u32 {
        match level {
            Level::Prime | Level::Mid => self.p,
            Level::Top => self.mid.order(),
        }
    }

    /// Coordinates over the next-lower level, little-endian in the defining root.
    pub fn coords(&self, level: Level, mut value: u32) -> Vec<u32> {
        let s = self.lower_order(level);
        (0..self.level_degree(level))
            .map(|_| {
                let c = value % s;
                value /= s;
                c
            })
            .collect()
    }

    pub fn from_coords(&self, level: Level, coords: &[u32]) -> Result<Elem> {
        let s = self.lower_order(level);
        let d = self.level_degree(level) as usize;
        if coords.len() != d {
            return Err(Error::LengthMismatch {
                expected: d,
                got: coords.len(),
            });
        }
        if coords.iter().any(|&c| c >= s) {
            return Err(Error::BadParams(
                "coordinate outside the lower field".into(),
            ));
        }
        let value = coords.iter().rev().fold(0u32, |acc, &c| acc * s + c);
        Ok(Elem::new(level, value))
    }

    pub fn elem(&self, level: Level, value: u32) -> Result<Elem> {
        if value >= self.field(level).order() {
            return Err(Error::BadParams(format!(
                "{value} is not an element of {level:?}"
            )));
        }
        Ok(Elem::new(level, value))
    }

    /// Lifts `e` to a higher (or equal) level.
    pub fn embed(&self, e: Elem, level: Level) -> Result<Elem> {
        if level < e.level {
            return Err(Error::LevelMismatch(e.level, level));
        }
        Ok(Elem::new(level, e.value))
    }

    /// Checked field arithmetic on same-level operands.
    pub fn arithmetic(&self, a: Elem, b: Elem, op: ArithOp) -> Result<Elem> {
        if a.level != b.level {
            return Err(Error::LevelMismatch(a.level, b.level));
        }
        let f = self.field(a.level);
        let value = match op {
            ArithOp::Add => f.add(a.value, b.value),
            ArithOp::Sub => f.sub(a.value, b.value),
            ArithOp::Mul => f.mul(a.value, b.value),
            ArithOp::Div => f.div(a.value, b.value).ok_or(Error::DivisionByZero)?,
        };
        Ok(Elem::new(a.level, value))
    }

    /// `θ^h(x) = x^{q^h}` on `L`, `h` taken mod `r` (negative allowed).
    pub fn frob(&self, x: u32, h: i64) -> u32 {
        let h = h.rem_euclid(self.r as i64) as u32;
        if x == 0 || h == 0 {
            return x;
        }
        let n = (self.top.order() - 1) as u64;
        let qh = (self.q() as u64).pow(h) % n;
        self.top.exp(self.top.log(x).unwrap() as u64 * qh % n)
    }

    pub fn frobenius(&self, x: Elem, h: i64) -> Result<Elem> {
        if x.level != Level::Top {
            return Err(Error::LevelMismatch(x.level, Level::Top));
        }
        Ok(Elem::new(Level::Top, self.frob(x.value, h)))
    }

    /// `Tr_{L|K}(x) = Σ_{i<r} θ^i(x)`, returned as an `F_q` index.
    pub fn trace(&self, x: u32) -> u32 {
        let v = self.top.sum((0..self.r as i64).map(|i| self.frob(x, i)));
        debug_assert!(v < self.q());
        v
    }

    /// `N_{L|K}(x) = Π_{i<r} θ^i(x) = x^{(q^r-1)/(q-1)}`.
    pub fn norm(&self, x: u32) -> u32 {
        let q = self.q() as u64;
        let e = (self.top.order() as u64 - 1) / (q - 1);
        self.top.pow(x, e)
    }

    pub fn trace_and_norm(&self, x: Elem) -> Result<(Elem, Elem)> {
        if x.level != Level::Top {
            return Err(Error::LevelMismatch(x.level, Level::Top));
        }
        Ok((
            Elem::new(Level::Mid, self.trace(x.value)),
            Elem::new(Level::Mid, self.norm(x.value)),
        ))
    }

    /// Lexicographic key of a top-level element: its coordinate tuple
    /// `(c_0, c_1, ...)` compared from `c_0`.
    pub fn lex_key(&self, x: u32) -> Vec<u32> {
        self.coords(Level::Top, x)
    }

    /// The lexicographically least `α ∈ L` with `N(α) = λ`.
    pub fn norm_preimage(&self, lambda: Elem) -> Result<Elem> {
        if lambda.level == Level::Top {
            return Err(Error::LevelMismatch(lambda.level, Level::Mid));
        }
        if lambda.value == 0 {
            return Err(Error::ZeroInput);
        }
        let q = self.q() as u64;
        let r = self.r;
        // enumerate coordinate tuples with c_0 most significant
        let total = self.top.order() as u64;
        (1..total)
            .map(|n| {
                let mut v = 0u64;
                let mut rest = n;
                for i in 0..r {
                    let digit = rest % q;
                    rest /= q;
                    // digit i of n (from the least significant end) is c_{r-1-i}
                    v += digit * q.pow(r - 1 - i);
                }
                v as u32
            })
            .find(|&a| self.norm(a) == lambda.value)
            .map(|a| Elem::new(Level::Top, a))
            .ok_or(Error::ZeroInput)
    }

    /// Euler's criterion on `F_q`. In characteristic 2 every element is a square.
    pub fn is_square(&self, x: Elem) -> Result<bool> {
        if x.level == Level::Top {
            return Err(Error::LevelMismatch(x.level, Level::Mid));
        }
        if x.value == 0 {
            return Err(Error::ZeroInput);
        }
        Ok(self.is_square_mid(x.value))
    }

    pub(crate) fn is_square_mid(&self, x: u32) -> bool {
        let q = self.q() as u64;
        if q.is_multiple_of(2) {
            return true;
        }
        self.mid.pow(x, (q - 1) / 2) == 1
    }

    /// For `r = 2`, `q` odd: the lexicographically least `α` with `α^q = -α`.
    pub fn skew_unit(&self) -> Result<Elem> {
        if self.r != 2 {
            return Err(Error::BadTower(format!(
                "skew unit needs r = 2, got r = {}",
                self.r
            )));
        }
        if self.p == 2 {
            return Err(Error::BadTower("skew unit needs odd q".into()));
        }
        // ker(θ + 1) is one-dimensional over K, spanned by u - θ(u)
        let u = self.q();
        let base = self.top.sub(u, self.frob(u, 1));
        let alpha = (1..self.q())
            .map(|c| self.top.mul(c, base))
            .min_by_key(|&a| self.lex_key(a))
            .expect("q > 1");
        Ok(Elem::new(Level::Top, alpha))
    }

    /// The subgroup of `F_q^*` of order `ℓ`, as consecutive powers
    /// `λ_i = ζ^{i-1}` of `ζ = g^{(q-1)/ℓ}`, `g` = [`Self::generator_of_units`].
    pub fn subgroup_lambda(&self, ell: u64) -> Result<Vec<Elem>> {
        let n = self.q() as u64 - 1;
        if ell == 0 || !n.is_multiple_of(ell) {
            return Err(Error::NotADivisor { ell, order: n });
        }
        self.ell_in_field(ell)?;
        let zeta = self.mid.pow(self.generator_of_units, n / ell);
        Ok((0..ell)
            .map(|i| Elem::new(Level::Mid, self.mid.pow(zeta, i)))
            .collect())
    }

    /// `ℓ mod p` as an `F_q` element; rejects `ℓ ≡ 0 (mod p)`.
    pub fn ell_in_field(&self, ell: u64) -> Result<u32> {
        let v = (ell % self.p as u64) as u32;
        if v == 0 {
            return Err(Error::BadParams(format!(
                "ℓ = {ell} vanishes in characteristic {}",
                self.p
            )));
        }
        Ok(v)
    }

    pub fn format(&self, e: Elem) -> String {
        text::format(self, e)
    }

    pub fn format_bracket(&self, e: Elem) -> String {
        text::format_bracket(self, e)
    }

    pub fn parse(&self, level: Level, s: &str) -> Result<Elem> {
        text::parse(self, level, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f25() -> FieldTower {
        FieldTower::new(5, 1, 2).unwrap()
    }

    fn top(t: &FieldTower, s: &str) -> u32 {
        t.parse(Level::Top, s).unwrap().value
    }

    #[test]
    fn default_f25_has_u_squared_two() {
        let t = f25();
        assert_eq!(t.top_modulus(), &[3, 0, 1]);
        let u = top(&t, "0+1u");
        assert_eq!(t.top().mul(u, u), 2);
        let eta = top(&t, "2+1u");
        assert_eq!(t.top().mul(eta, eta), top(&t, "1+4u"));
    }

    #[test]
    fn arithmetic_errors() {
        let t = f25();
        let a = Elem::new(Level::Top, 7);
        let b = Elem::new(Level::Mid, 3);
        assert_eq!(
            t.arithmetic(a, b, ArithOp::Add),
            Err(Error::LevelMismatch(Level::Top, Level::Mid))
        );
        let z = Elem::new(Level::Top, 0);
        assert_eq!(t.arithmetic(a, z, ArithOp::Div), Err(Error::DivisionByZero));
        let one = Elem::new(Level::Top, 1);
        assert_eq!(t.arithmetic(a, one, ArithOp::Mul).unwrap(), a);
    }

    #[test]
    fn frobenius_examples() {
        let t = f25();
        let u = top(&t, "u");
        assert_eq!(t.frob(u, 1), top(&t, "4u"));
        for x in 0..25 {
            assert_eq!(t.frob(x, 2), x);
            assert_eq!(t.frob(t.frob(x, 1), -1), x);
        }
        for c in 0..5 {
            assert_eq!(t.frob(c, 1), c);
        }
    }

    #[test]
    fn trace_and_norm_examples() {
        let t = f25();
        assert_eq!(t.trace(1), 2);
        assert_eq!(t.trace(top(&t, "u")), 0);
        assert_eq!(t.trace(2), 4);
        assert_eq!(t.norm(1), 1);
        let (tr, n) = t
            .trace_and_norm(Elem::new(Level::Top, top(&t, "2+1u")))
            .unwrap();
        // (2+u)(2-u) = 4 - 2 = 2
        assert_eq!((tr.value, n.value), (4, 2));
        assert!(t.trace_and_norm(Elem::new(Level::Mid, 1)).is_err());
    }

    #[test]
    fn norm_preimage_round_trips() {
        let t = f25();
        for lam in 1..5 {
            let a = t.norm_preimage(Elem::new(Level::Mid, lam)).unwrap();
            // α · α^5 = λ
            assert_eq!(t.top().mul(a.value, t.top().pow(a.value, 5)), lam);
        }
        assert_eq!(t.norm_preimage(Elem::new(Level::Mid, 1)).unwrap().value, 1);
        // N(a + bu) = a^2 - 2b^2 = 4: least tuple is (1, 1)
        assert_eq!(
            t.norm_preimage(Elem::new(Level::Mid, 4)).unwrap().value,
            top(&t, "1+1u")
        );
        assert_eq!(
            t.norm_preimage(Elem::new(Level::Mid, 0)),
            Err(Error::ZeroInput)
        );
    }

    #[test]
    fn squares_in_f5() {
        let t = f25();
        let sq = |x| t.is_square(Elem::new(Level::Mid, x)).unwrap();
        assert!(sq(4));
        assert!(sq(1));
        assert!(!sq(2));
        assert!(!sq(3));
        assert_eq!(t.is_square(Elem::new(Level::Mid, 0)), Err(Error::ZeroInput));
    }

    #[test]
    fn squares_match_table_up_to_49() {
        for (p, m) in [
            (3, 1),
            (5, 1),
            (7, 1),
            (11, 1),
            (13, 1),
            (3, 2),
            (5, 2),
            (7, 2),
        ] {
            let t = FieldTower::new(p, m, 2).unwrap();
            let k = t.mid();
            let squares: std::collections::HashSet<u32> =
                (1..k.order()).map(|x| k.mul(x, x)).collect();
            for x in 1..k.order() {
                assert_eq!(
                    t.is_square(Elem::new(Level::Mid, x)).unwrap(),
                    squares.contains(&x)
                );
            }
        }
    }

    #[test]
    fn skew_unit_f25() {
        let t = f25();
        let a = t.skew_unit().unwrap();
        assert_eq!(a.value, top(&t, "u"));
        assert!(FieldTower::new(5, 1, 3).unwrap().skew_unit().is_err());
    }

    #[test]
    fn skew_unit_properties_across_towers() {
        for (p, m) in [(5, 1), (13, 1), (3, 2), (17, 1), (5, 2)] {
            let t = FieldTower::new(p, m, 2).unwrap();
            let a = t.skew_unit().unwrap().value;
            let top = t.top();
            assert_eq!(t.frob(a, 1), top.neg(a));
            let a2 = top.mul(a, a);
            assert!(a2 < t.q(), "α² ∈ F_q");
            assert!(!t.is_square_mid(a2));
            // α^{q+1} = -α²
            assert_eq!(top.pow(a, t.q() as u64 + 1), top.neg(a2));
        }
    }

    #[test]
    fn subgroups() {
        let t = f25();
        let vals = |ell| {
            t.subgroup_lambda(ell)
                .unwrap()
                .iter()
                .map(|e| e.value)
                .collect::<Vec<_>>()
        };
        assert_eq!(vals(2), vec![1, 4]);
        assert_eq!(vals(1), vec![1]);
        let g = t.generator_of_units();
        assert_eq!(vals(4), vec![1, g, t.mid().mul(g, g), t.mid().pow(g, 3)]);
        assert_eq!(
            t.subgroup_lambda(3),
            Err(Error::NotADivisor { ell: 3, order: 4 })
        );
    }

    #[test]
    fn subgroup_closed_under_multiplication() {
        let t = FieldTower::new(13, 1, 2).unwrap();
        for ell in [1, 2, 3, 4, 6, 12] {
            let set: Vec<u32> = t
                .subgroup_lambda(ell)
                .unwrap()
                .iter()
                .map(|e| e.value)
                .collect();
            let uniq: std::collections::HashSet<_> = set.iter().collect();
            assert_eq!(uniq.len(), ell as usize);
            for &a in &set {
                for &b in &set {
                    assert!(set.contains(&t.mid().mul(a, b)));
                }
            }
        }
    }

    #[test]
    fn trace_matches_matrix_trace() {
        // matrix of multiplication by x in the power basis {1, u, ..., u^{r-1}}
        for (p, m, r) in [(5, 1, 2), (3, 1, 3), (3, 2, 2), (2, 1, 4)] {
            let t = FieldTower::new(p, m, r).unwrap();
            let q = t.q();
            for x in 0..t.top().order() {
                let mut acc = 0;
                for i in 0..r {
                    let basis = q.pow(i);
                    let img = t.top().mul(x, basis);
                    acc = t.mid().add(acc, t.coords(Level::Top, img)[i as usize]);
                }
                assert_eq!(t.trace(x), acc);
            }
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let t = FieldTower::new(3, 2, 2).unwrap();
        let d = t.descriptor();
        let back = FieldTower::from_descriptor(&d).unwrap();
        assert_eq!(back.top_modulus(), t.top_modulus());
        assert_eq!(back.base_modulus(), t.base_modulus());
    }

    #[test]
    fn explicit_moduli() {
        let t = FieldTower::with_moduli(5, 1, 2, vec![0, 1], vec![2, 4, 1]).unwrap();
        assert_eq!(t.q(), 5);
        assert!(FieldTower::with_moduli(5, 1, 2, vec![0, 1], vec![1, 0, 1]).is_err());
    }
}
