//! The skew polynomial ring `L[X;θ]`, its quotient `R_Λ = L[X;θ]/(H_Λ)`,
//! evaluation into `(L[θ])^ℓ` and the sum-rank weight.
//!
//! Coefficients are raw top-level indices of the tower. Elements of `R_Λ` have
//! `K`-coordinates indexed by `j·r + t`: coefficient `j` of the reduced
//! representative, `F_q`-coordinate `t` of that coefficient in the power basis.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Elem, FieldTower, Level};
use crate::linalg::Mat;

/// `f_0 + f_1 X + ...`, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SkewPoly {
    coeffs: Vec<u32>,
}

impl SkewPoly {
    pub fn new(mut coeffs: Vec<u32>) -> SkewPoly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        SkewPoly { coeffs }
    }

    pub fn zero() -> SkewPoly {
        SkewPoly::default()
    }

    pub fn constant(c: u32) -> SkewPoly {
        SkewPoly::new(vec![c])
    }

    pub fn one() -> SkewPoly {
        SkewPoly::constant(1)
    }

    /// `c X^deg`
    pub fn monomial(c: u32, deg: usize) -> SkewPoly {
        let mut v = vec![0; deg + 1];
        v[deg] = c;
        SkewPoly::new(v)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, t: &FieldTower, other: &SkewPoly) -> SkewPoly {
        let f = t.top();
        let n = self.coeffs.len().max(other.coeffs.len());
        SkewPoly::new(
            (0..n)
                .map(|i| f.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, t: &FieldTower, other: &SkewPoly) -> SkewPoly {
        let f = t.top();
        let n = self.coeffs.len().max(other.coeffs.len());
        SkewPoly::new(
            (0..n)
                .map(|i| f.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    /// `c · f` (scalar on the left).
    pub fn scale(&self, t: &FieldTower, c: u32) -> SkewPoly {
        SkewPoly::new(self.coeffs.iter().map(|&x| t.top().mul(c, x)).collect())
    }

    pub fn mul(&self, t: &FieldTower, other: &SkewPoly) -> SkewPoly {
        skew_mul(t, self, other)
    }

    /// `f0 + f1*X + f2*X^2`, coefficients in parentheses when they contain
    /// an operator.
    pub fn format(&self, t: &FieldTower) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let s = t.format(Elem::new(Level::Top, c));
                let s = if i > 0 && s.contains('+') {
                    format!("({s})")
                } else {
                    s
                };
                match i {
                    0 => s,
                    1 => format!("{s}*X"),
                    _ => format!("{s}*X^{i}"),
                }
            })
            .collect();
        terms.join(" + ")
    }

    /// Inverse of [`SkewPoly::format`]; also accepts bare `X`, `X^k` and
    /// repeated degrees (summed), so an unparenthesized constant such as
    /// `2+1u` may be split into its terms.
    pub fn parse(t: &FieldTower, s: &str) -> Result<SkewPoly> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let f = t.top();
        let mut coeffs: Vec<u32> = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        let mut pieces = Vec::new();
        for (i, c) in s.char_indices() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                '+' if depth == 0 => {
                    pieces.push(&s[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        pieces.push(&s[start..]);
        for piece in pieces {
            let (coef, deg) = match piece.rfind('X') {
                Some(pos) if !inside_parens(piece, pos) => {
                    let after = &piece[pos + 1..];
                    let deg: usize = if after.is_empty() {
                        1
                    } else {
                        after
                            .strip_prefix('^')
                            .and_then(|d| d.parse().ok())
                            .ok_or_else(|| Error::Parse(format!("bad degree in {piece:?}")))?
                    };
                    let c = piece[..pos].trim_end_matches('*');
                    let c = c
                        .strip_prefix('(')
                        .and_then(|x| x.strip_suffix(')'))
                        .unwrap_or(c);
                    let v = if c.is_empty() {
                        1
                    } else {
                        t.parse(Level::Top, c)?.value
                    };
                    (v, deg)
                }
                _ => {
                    let c = piece
                        .strip_prefix('(')
                        .and_then(|x| x.strip_suffix(')'))
                        .unwrap_or(piece);
                    (t.parse(Level::Top, c)?.value, 0)
                }
            };
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, 0);
            }
            coeffs[deg] = f.add(coeffs[deg], coef);
        }
        Ok(SkewPoly::new(coeffs))
    }
}

fn inside_parens(s: &str, pos: usize) -> bool {
    let mut depth = 0i32;
    for c in s[..pos].chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
    }
    depth != 0
}

/// `(ab)_n = Σ_{i+j=n} a_i θ^i(b_j)`.
pub fn skew_mul(t: &FieldTower, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
    if a.is_zero() || b.is_zero() {
        return SkewPoly::zero();
    }
    let f = t.top();
    let mut out = vec![0u32; a.coeffs.len() + b.coeffs.len() - 1];
    for (i, &ai) in a.coeffs.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.coeffs.iter().enumerate() {
            if bj != 0 {
                out[i + j] = f.add(out[i + j], f.mul(ai, t.frob(bj, i as i64)));
            }
        }
    }
    SkewPoly::new(out)
}

/// `H_Λ = Π (X^r − λ_i)`.
pub fn build_h_lambda(t: &FieldTower, lambda: &[u32]) -> SkewPoly {
    let r = t.r() as usize;
    lambda.iter().fold(SkewPoly::one(), |acc, &l| {
        let mut factor = vec![0u32; r + 1];
        factor[0] = t.top().neg(l);
        factor[r] = 1;
        skew_mul(t, &acc, &SkewPoly::new(factor))
    })
}

/// How `X` acts at block `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalRule {
    /// `X ↦ α_i θ`, so `X^j ↦ α_i θ(α_i) ⋯ θ^{j−1}(α_i) θ^j`.
    #[default]
    NormPreimage,
    /// `X^j ↦ λ_i^j θ^j`.
    PowerOfLambda,
}

/// The quotient `R_Λ` together with its evaluation data.
#[derive(Debug, Clone)]
pub struct QuotientCtx {
    pub tower: Arc<FieldTower>,
    /// `F_q` indices.
    pub lambda: Vec<u32>,
    /// `N(α_i) = λ_i`, top-level indices.
    pub alphas: Vec<u32>,
    pub h_lambda: SkewPoly,
    pub rule: EvalRule,
}

impl QuotientCtx {
    /// `Λ` the subgroup of order `ell`.
    pub fn new(tower: Arc<FieldTower>, ell: u64) -> Result<QuotientCtx> {
        let lambda: Vec<u32> = tower
            .subgroup_lambda(ell)?
            .iter()
            .map(|e| e.value)
            .collect();
        QuotientCtx::with_lambda(tower, lambda)
    }

    /// Any set of distinct elements of `F_q^*`.
    pub fn with_lambda(tower: Arc<FieldTower>, lambda: Vec<u32>) -> Result<QuotientCtx> {
        if lambda.is_empty() {
            return Err(Error::BadParams("Λ is empty".into()));
        }
        let mut sorted = lambda.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != lambda.len() {
            return Err(Error::BadParams("Λ has repeated elements".into()));
        }
        if let Some(&bad) = lambda.iter().find(|&&l| l == 0 || l >= tower.q()) {
            return Err(Error::BadParams(format!("λ = {bad} is not in F_q^*")));
        }
        tower.ell_in_field(lambda.len() as u64)?;
        let alphas = lambda
            .iter()
            .map(|&l| {
                tower
                    .norm_preimage(Elem::new(Level::Mid, l))
                    .map(|e| e.value)
            })
            .collect::<Result<Vec<_>>>()?;
        let h_lambda = build_h_lambda(&tower, &lambda);
        Ok(QuotientCtx {
            tower,
            lambda,
            alphas,
            h_lambda,
            rule: EvalRule::default(),
        })
    }

    pub fn with_rule(mut self, rule: EvalRule) -> QuotientCtx {
        self.rule = rule;
        self
    }

    pub fn ell(&self) -> usize {
        self.lambda.len()
    }

    pub fn r(&self) -> usize {
        self.tower.r() as usize
    }

    /// `deg H_Λ = ℓr`
    pub fn modulus_degree(&self) -> usize {
        self.ell() * self.r()
    }

    /// `dim_K R_Λ = ℓr²`
    pub fn dim_k(&self) -> usize {
        self.modulus_degree() * self.r()
    }

    /// Representative of degree `< ℓr`.
    pub fn reduce(&self, f: &SkewPoly) -> SkewPoly {
        reduce(f, self)
    }

    pub fn to_k_coords(&self, f: &SkewPoly) -> Vec<u32> {
        let red = self.reduce(f);
        (0..self.modulus_degree())
            .flat_map(|j| self.tower.coords(Level::Top, red.coeff(j)))
            .collect()
    }

    pub fn from_k_coords(&self, v: &[u32]) -> Result<SkewPoly> {
        if v.len() != self.dim_k() {
            return Err(Error::LengthMismatch {
                expected: self.dim_k(),
                got: v.len(),
            });
        }
        let coeffs = v
            .chunks(self.r())
            .map(|c| self.tower.from_coords(Level::Top, c).map(|e| e.value))
            .collect::<Result<Vec<_>>>()?;
        Ok(SkewPoly::new(coeffs))
    }

    /// The `j·r + t`-th ambient basis element `u^t X^j`.
    pub fn k_basis_element(&self, index: usize) -> SkewPoly {
        let (j, t) = (index / self.r(), index % self.r());
        SkewPoly::monomial(self.tower.top().pow(self.tower.q(), t as u64), j)
    }

    /// Block point `i` (0-based): `α_i` or `λ_i` depending on the rule.
    fn point(&self, i: usize) -> u32 {
        match self.rule {
            EvalRule::NormPreimage => self.alphas[i],
            EvalRule::PowerOfLambda => self.lambda[i],
        }
    }

    /// `F(α_i)` for the 0-based block index `i`.
    pub fn evaluate(&self, f: &SkewPoly, i: usize) -> Result<ThetaPoly> {
        if i >= self.ell() {
            return Err(Error::BlockOutOfRange {
                index: i,
                ell: self.ell(),
            });
        }
        Ok(evaluate_at(&self.tower, f, self.point(i)))
    }

    pub fn eval_map(&self, f: &SkewPoly) -> SumRankVector {
        let red = self.reduce(f);
        SumRankVector {
            parts: (0..self.ell())
                .map(|i| evaluate_at(&self.tower, &red, self.point(i)))
                .collect(),
        }
    }

    /// `K`-coordinates of a point of `(L[θ])^ℓ`, block-major, then `θ^j`,
    /// then `F_q`-coordinate.
    pub fn sum_rank_coords(&self, v: &SumRankVector) -> Vec<u32> {
        v.parts
            .iter()
            .flat_map(|p| {
                p.coeffs
                    .iter()
                    .flat_map(|&c| self.tower.coords(Level::Top, c))
            })
            .collect()
    }

    /// `ℓ⁻¹ Σ_i tr(F(α_i) ∘ G(α_i^{-1}))`, with `tr` the trace of the
    /// `K`-linear map. Agrees with [`QuotientCtx::form`] on constants; on other
    /// inputs it is only a diagnostic.
    pub fn evaluation_side_form(&self, f: &SkewPoly, g: &SkewPoly) -> u32 {
        let t = &*self.tower;
        let mid = t.mid();
        let (f, g) = (self.reduce(f), self.reduce(g));
        let total = mid.sum((0..self.ell()).map(|i| {
            let a = self.point(i);
            let fa = evaluate_at(t, &f, a);
            let ga = evaluate_at(t, &g, t.top().inv(a).unwrap());
            fa.compose(t, &ga).linear_trace(t)
        }));
        let ell = t
            .ell_in_field(self.ell() as u64)
            .expect("checked at construction");
        mid.div(total, ell).unwrap()
    }

    /// `⟨F,G⟩_Λ = Tr(Σ_{i<ℓr} f_i g_i)` on reduced representatives.
    pub fn form(&self, f: &SkewPoly, g: &SkewPoly) -> u32 {
        let t = &*self.tower;
        let (f, g) = (self.reduce(f), self.reduce(g));
        let n = f.coeffs.len().min(g.coeffs.len());
        t.trace(
            t.top()
                .sum((0..n).map(|i| t.top().mul(f.coeff(i), g.coeff(i)))),
        )
    }
}

/// Left division remainder by `H_Λ`; `H_Λ` is monic with `F_q`
/// coefficients, so shifting it by `X^s` leaves its coefficients unchanged.
pub fn reduce(f: &SkewPoly, ctx: &QuotientCtx) -> SkewPoly {
    let n = ctx.modulus_degree();
    if f.coeffs.len() <= n {
        return f.clone();
    }
    let top = ctx.tower.top();
    let h = &ctx.h_lambda.coeffs;
    let mut c = f.coeffs.clone();
    for d in (n..c.len()).rev() {
        let lead = c[d];
        if lead == 0 {
            continue;
        }
        let shift = d - n;
        for (i, &hi) in h.iter().enumerate() {
            if hi != 0 {
                c[shift + i] = top.sub(c[shift + i], top.mul(lead, hi));
            }
        }
    }
    c.truncate(n);
    SkewPoly::new(c)
}

/// `N_j(a) = a θ(a) ⋯ θ^{j−1}(a)`; for `a ∈ K` this is `a^j`.
fn twisted_power(t: &FieldTower, a: u32, j: usize) -> u32 {
    (0..j).fold(1, |acc, s| t.top().mul(acc, t.frob(a, s as i64)))
}

/// `Σ_j f_j N_j(a) θ^{j mod r}`.
fn evaluate_at(t: &FieldTower, f: &SkewPoly, a: u32) -> ThetaPoly {
    let r = t.r() as usize;
    let top = t.top();
    let mut coeffs = vec![0u32; r];
    let mut scale = 1u32;
    for (j, &fj) in f.coeffs.iter().enumerate() {
        if j > 0 {
            scale = top.mul(scale, t.frob(a, (j - 1) as i64));
        }
        debug_assert_eq!(scale, twisted_power(t, a, j));
        if fj != 0 {
            coeffs[j % r] = top.add(coeffs[j % r], top.mul(fj, scale));
        }
    }
    ThetaPoly { coeffs }
}

/// `Σ_{j<r} c_j θ^j`, acting on `L` as `x ↦ Σ c_j θ^j(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThetaPoly {
    pub coeffs: Vec<u32>,
}

impl ThetaPoly {
    pub fn zero(r: usize) -> ThetaPoly {
        ThetaPoly { coeffs: vec![0; r] }
    }

    pub fn identity(r: usize) -> ThetaPoly {
        let mut coeffs = vec![0; r];
        coeffs[0] = 1;
        ThetaPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn apply(&self, t: &FieldTower, x: u32) -> u32 {
        let top = t.top();
        top.sum(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, &c)| top.mul(c, t.frob(x, j as i64))),
        )
    }

    /// `self ∘ other`, using `θ^i b = θ^i(b) θ^i` and `θ^r = 1`.
    pub fn compose(&self, t: &FieldTower, other: &ThetaPoly) -> ThetaPoly {
        let r = self.coeffs.len();
        let top = t.top();
        let mut out = vec![0u32; r];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let k = (i + j) % r;
                out[k] = top.add(out[k], top.mul(a, t.frob(b, i as i64)));
            }
        }
        ThetaPoly { coeffs: out }
    }

    /// `r x r` matrix over `K`; column `s` holds the coordinates of the image
    /// of `u^s`.
    pub fn matrix(&self, t: &FieldTower) -> Mat {
        let r = t.r() as usize;
        let mut m = Mat::zeros(Level::Mid, r, r);
        for s in 0..r {
            let image = self.apply(t, t.top().pow(t.q(), s as u64));
            for (row, c) in t.coords(Level::Top, image).into_iter().enumerate() {
                m.set(row, s, c);
            }
        }
        m
    }

    pub fn linear_trace(&self, t: &FieldTower) -> u32 {
        let m = self.matrix(t);
        t.mid().sum((0..m.rows()).map(|i| m.get(i, i)))
    }

    pub fn format(&self, t: &FieldTower) -> String {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| {
                let s = t.format(Elem::new(Level::Top, c));
                match j {
                    0 => format!("({s})"),
                    1 => format!("({s})θ"),
                    _ => format!("({s})θ^{j}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

pub fn theta_rank(t: &FieldTower, p: &ThetaPoly) -> usize {
    p.matrix(t).rank(t)
}

/// `(F(α_1), ..., F(α_ℓ))`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SumRankVector {
    pub parts: Vec<ThetaPoly>,
}

impl SumRankVector {
    pub fn compose(&self, t: &FieldTower, other: &SumRankVector) -> Result<SumRankVector> {
        if self.parts.len() != other.parts.len() {
            return Err(Error::LengthMismatch {
                expected: self.parts.len(),
                got: other.parts.len(),
            });
        }
        Ok(SumRankVector {
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| a.compose(t, b))
                .collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(ThetaPoly::is_zero)
    }
}

pub fn sum_rank_weight(t: &FieldTower, v: &SumRankVector) -> usize {
    v.parts.iter().map(|p| theta_rank(t, p)).sum()
}
