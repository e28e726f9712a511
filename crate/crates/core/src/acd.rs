//! Additive twisted Reed–Solomon codes over `F_{q²}`:
//! `C_k(γ) = ev_Λ{a_0 + Σ_{i<k} a_i X^i + γ a_k X^k : a_0, a_k ∈ F_q, a_i ∈ F_{q²}}`
//! with the trace-Hermitian form `Tr(Σ u_i v_i^q)`.
//!
//! `α` below is the skew unit (`α^q = −α`) and `γ` the twist scalar. Both
//! are top-level indices; `Λ` and all matrices over `F_q` use `F_q` indices.

use std::fmt;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{FieldTower, Level};
use crate::linalg::{Mat, Subspace};

pub const DEFAULT_ENUM_LIMIT: u128 = 10_000_000;
/// Largest `2ℓ` accepted by [`acd_oracle`].
pub const DEFAULT_HULL_LIMIT: usize = 64;

#[derive(Debug, Clone)]
pub struct AcdParams {
    pub tower: Arc<FieldTower>,
    pub k: usize,
    pub lambda: Vec<u32>,
    pub gamma: u32,
    pub alpha: u32,
}

/// `r = 2`, `q ≡ 1 (mod 4)`, `q ≥ 5`.
pub fn check_tower(t: &FieldTower) -> Result<()> {
    if t.r() != 2 {
        return Err(Error::BadTower(format!("need r = 2, got {}", t.r())));
    }
    if t.q() % 4 != 1 || t.q() < 5 {
        return Err(Error::BadTower(format!(
            "need q ≡ 1 (mod 4) and q ≥ 5, got q = {}",
            t.q()
        )));
    }
    Ok(())
}

impl AcdParams {
    pub fn new(
        tower: Arc<FieldTower>,
        k: usize,
        lambda: Vec<u32>,
        gamma: u32,
    ) -> Result<AcdParams> {
        check_tower(&tower)?;
        let q = tower.q();
        if let Some(&bad) = lambda.iter().find(|&&l| l == 0 || l >= q) {
            return Err(Error::BadParams(format!("λ = {bad} is not in F_q^*")));
        }
        let mut sorted = lambda.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != lambda.len() {
            return Err(Error::BadParams("Λ has repeated elements".into()));
        }
        if k == 0 || k + 1 > lambda.len() {
            return Err(Error::BadParams(format!(
                "need 1 ≤ k ≤ ℓ−1, got k = {k}, ℓ = {}",
                lambda.len()
            )));
        }
        if gamma == 0 || gamma >= tower.top().order() {
            return Err(Error::BadParams(
                "γ must be a nonzero element of F_{q²}".into(),
            ));
        }
        let alpha = tower.skew_unit()?.value;
        Ok(AcdParams {
            tower,
            k,
            lambda,
            gamma,
            alpha,
        })
    }

    pub fn ell(&self) -> usize {
        self.lambda.len()
    }

    pub fn q(&self) -> u32 {
        self.tower.q()
    }

    /// `Tr(γ)`
    pub fn trace_gamma(&self) -> u32 {
        self.tower.trace(self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    One,
    X(usize),
    AlphaX(usize),
    GammaXk,
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKind::One => write!(f, "1"),
            BasisKind::X(i) => write!(f, "X^{i}"),
            BasisKind::AlphaX(i) => write!(f, "αX^{i}"),
            BasisKind::GammaXk => write!(f, "γX^k"),
        }
    }
}

/// `1; X^i (i = 1..k−1); αX^i (i = 1..k−1); γX^k`
pub fn basis_kinds(k: usize) -> Vec<BasisKind> {
    let mut out = vec![BasisKind::One];
    out.extend((1..k).map(BasisKind::X));
    out.extend((1..k).map(BasisKind::AlphaX));
    out.push(BasisKind::GammaXk);
    out
}

/// Coefficient vectors (length `k+1`) of the ordered basis.
pub fn code_basis(params: &AcdParams) -> Vec<Vec<u32>> {
    let k = params.k;
    basis_kinds(k)
        .into_iter()
        .map(|kind| {
            let mut c = vec![0u32; k + 1];
            match kind {
                BasisKind::One => c[0] = 1,
                BasisKind::X(i) => c[i] = 1,
                BasisKind::AlphaX(i) => c[i] = params.alpha,
                BasisKind::GammaXk => c[k] = params.gamma,
            }
            c
        })
        .collect()
}

fn horner(t: &FieldTower, coeffs: &[u32], x: u32) -> u32 {
    let top = t.top();
    coeffs
        .iter()
        .rev()
        .fold(0, |acc, &c| top.add(top.mul(acc, x), c))
}

/// `2k × ℓ` over `F_{q²}`, rows are the evaluated basis.
pub fn generator(params: &AcdParams) -> Mat {
    let rows: Vec<Vec<u32>> = code_basis(params)
        .iter()
        .map(|c| {
            params
                .lambda
                .iter()
                .map(|&l| horner(&params.tower, c, l))
                .collect()
        })
        .collect();
    Mat::from_rows(Level::Top, &rows, params.ell()).unwrap()
}

/// `Σ m_r · row_r`, `m` over `F_q`.
pub fn encode(params: &AcdParams, message: &[u32]) -> Result<Vec<u32>> {
    let n = 2 * params.k;
    if message.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: message.len(),
        });
    }
    if let Some(&bad) = message.iter().find(|&&m| m >= params.q()) {
        return Err(Error::BadParams(format!(
            "message symbol {bad} is not in F_q"
        )));
    }
    let g = generator(params);
    let top = params.tower.top();
    Ok((0..params.ell())
        .map(|j| top.sum((0..n).map(|r| top.mul(message[r], g.get(r, j)))))
        .collect())
}

/// `Tr(Σ u_i v_i^q)`
pub fn trace_hermitian(t: &FieldTower, u: &[u32], v: &[u32]) -> Result<u32> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    let top = t.top();
    Ok(t.trace(top.sum(u.iter().zip(v).map(|(&a, &b)| top.mul(a, t.frob(b, 1))))))
}

/// `G G†` with `(G†)_{i,j} = G_{j,i}^q`.
pub fn gg_dagger(params: &AcdParams) -> Mat {
    let t = &*params.tower;
    let top = t.top();
    let g = generator(params);
    let n = g.rows();
    let mut out = Mat::zeros(Level::Top, n, n);
    for r in 0..n {
        for s in 0..n {
            let v = top.sum((0..g.cols()).map(|j| top.mul(g.get(r, j), t.frob(g.get(s, j), 1))));
            out.set(r, s, v);
        }
    }
    out
}

/// Entrywise trace of [`gg_dagger`].
pub fn t_matrix(params: &AcdParams) -> Mat {
    let gg = gg_dagger(params);
    let data = gg.data().iter().map(|&x| params.tower.trace(x)).collect();
    Mat::new(Level::Mid, gg.rows(), gg.cols(), data).unwrap()
}

/// `p_e = Σ_{λ∈Λ} λ^e` for `e = 0..=max_e`, with `p_0 = ℓ mod p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSums {
    pub values: Vec<u32>,
}

impl PowerSums {
    pub fn direct(t: &FieldTower, lambda: &[u32], max_e: usize) -> PowerSums {
        let mid = t.mid();
        let mut values: Vec<u32> = (0..=max_e)
            .map(|e| mid.sum(lambda.iter().map(|&l| mid.pow(l, e as u64))))
            .collect();
        values[0] = (lambda.len() as u64 % t.p() as u64) as u32;
        PowerSums { values }
    }

    /// Closed form for `Λ = {g^0, ..., g^{ℓ−1}}`:
    /// `p_e = (g^{eℓ} − 1)/(g^e − 1)`, or `ℓ` when `g^e = 1`.
    pub fn geometric(t: &FieldTower, g: u32, ell: usize, max_e: usize) -> PowerSums {
        let mid = t.mid();
        let ell_mod = (ell as u64 % t.p() as u64) as u32;
        let values = (0..=max_e)
            .map(|e| {
                let ge = mid.pow(g, e as u64);
                if ge == 1 {
                    ell_mod
                } else {
                    let num = mid.sub(mid.pow(ge, ell as u64), 1);
                    mid.div(num, mid.sub(ge, 1)).unwrap()
                }
            })
            .collect();
        PowerSums { values }
    }

    pub fn get(&self, e: usize) -> u32 {
        self.values[e]
    }
}

/// One entry of `GG†` and of its trace, from the closed forms in terms of
/// power sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableEntry {
    pub gg: u32,
    pub trace: u32,
}

/// Closed form of `Σ_λ P(λ) Q(λ)^q` and its trace. Pairs mixing `1`/`X^i`
/// with `αX^j` are `∓α p_{i+j}` and have trace zero.
pub fn table_entry(params: &AcdParams, ps: &PowerSums, p: BasisKind, q: BasisKind) -> TableEntry {
    use BasisKind::*;
    let t = &*params.tower;
    let (top, mid) = (t.top(), t.mid());
    let (k, alpha, gamma) = (params.k, params.alpha, params.gamma);
    let gamma_q = t.frob(gamma, 1);
    let a2 = top.mul(alpha, alpha);
    let two = mid.from_int(2);
    let tr_gamma = t.trace(gamma);
    let tr_ag = t.trace(top.mul(alpha, gamma));
    let deg = |b: BasisKind| match b {
        One => 0,
        X(i) | AlphaX(i) => i,
        GammaXk => k,
    };
    let pe = ps.get(deg(p) + deg(q));
    let (gg, trace) = match (p, q) {
        (One | X(_), One | X(_)) => (pe, mid.mul(two, pe)),
        (AlphaX(_), AlphaX(_)) => {
            let v = top.neg(top.mul(a2, pe));
            (v, mid.mul(two, v))
        }
        (One | X(_), AlphaX(_)) => (top.neg(top.mul(alpha, pe)), 0),
        (AlphaX(_), One | X(_)) => (top.mul(alpha, pe), 0),
        (One | X(_), GammaXk) => (top.mul(gamma_q, pe), mid.mul(pe, tr_gamma)),
        (GammaXk, One | X(_)) => (top.mul(gamma, pe), mid.mul(pe, tr_gamma)),
        (AlphaX(_), GammaXk) => (
            top.mul(top.mul(alpha, gamma_q), pe),
            mid.neg(mid.mul(pe, tr_ag)),
        ),
        (GammaXk, AlphaX(_)) => (
            top.neg(top.mul(top.mul(gamma, alpha), pe)),
            mid.neg(mid.mul(pe, tr_ag)),
        ),
        (GammaXk, GammaXk) => {
            let v = top.mul(top.mul(gamma, gamma_q), pe);
            (v, mid.mul(two, v))
        }
    };
    TableEntry { gg, trace }
}

/// `(GG†, T)` assembled from [`table_entry`].
pub fn table_matrices(params: &AcdParams) -> (Mat, Mat) {
    let ps = PowerSums::direct(&params.tower, &params.lambda, 2 * params.k);
    let kinds = basis_kinds(params.k);
    let n = kinds.len();
    let mut gg = Mat::zeros(Level::Top, n, n);
    let mut tr = Mat::zeros(Level::Mid, n, n);
    for (r, &p) in kinds.iter().enumerate() {
        for (s, &q) in kinds.iter().enumerate() {
            let e = table_entry(params, &ps, p, q);
            gg.set(r, s, e.gg);
            tr.set(r, s, e.trace);
        }
    }
    (gg, tr)
}

/// `G_0 = (p_{i+j})_{0≤i,j≤k−1}`, `M = (p_{i+j})_{1≤i,j≤k−1}`,
/// `v_i = p_i`, `w_i = p_{k+i}` (`i = 1..k−1`), `H = (p_{i+j})_{1≤i,j≤k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredBlocks {
    pub g0: Mat,
    pub m: Mat,
    pub v: Vec<u32>,
    pub w: Vec<u32>,
    pub h: Mat,
    pub p2k: u32,
}

fn hankel(ps: &PowerSums, range: std::ops::RangeInclusive<usize>) -> Mat {
    let idx: Vec<usize> = range.collect();
    let n = idx.len();
    let mut m = Mat::zeros(Level::Mid, n, n);
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            m.set(a, b, ps.get(i + j));
        }
    }
    m
}

pub fn structured_blocks(ps: &PowerSums, k: usize) -> StructuredBlocks {
    StructuredBlocks {
        g0: hankel(ps, 0..=k - 1),
        m: if k == 1 {
            Mat::zeros(Level::Mid, 0, 0)
        } else {
            hankel(ps, 1..=k - 1)
        },
        v: (1..k).map(|i| ps.get(i)).collect(),
        w: (1..k).map(|i| ps.get(k + i)).collect(),
        h: hankel(ps, 1..=k),
        p2k: ps.get(2 * k),
    }
}

/// `diag(X, W)` as predicted for `Tr(γ) = 0`.
pub fn predicted_t_blocks(params: &AcdParams) -> Mat {
    let t = &*params.tower;
    let (top, mid) = (t.top(), t.mid());
    let k = params.k;
    let ps = PowerSums::direct(t, &params.lambda, 2 * k);
    let b = structured_blocks(&ps, k);
    let two = mid.from_int(2);
    let a2 = top.mul(params.alpha, params.alpha);
    let tr_ag = t.trace(top.mul(params.alpha, params.gamma));
    let gq1 = top.mul(params.gamma, t.frob(params.gamma, 1));
    let n = 2 * k;
    let mut out = Mat::zeros(Level::Mid, n, n);
    // X on {1, X^i}
    for i in 0..k {
        for j in 0..k {
            out.set(i, j, mid.mul(two, b.g0.get(i, j)));
        }
    }
    // W on {αX^i, γX^k}
    let off = k;
    for i in 0..k - 1 {
        for j in 0..k - 1 {
            out.set(
                off + i,
                off + j,
                mid.neg(mid.mul(mid.mul(two, a2), b.m.get(i, j))),
            );
        }
        let e = mid.neg(mid.mul(tr_ag, b.w[i]));
        out.set(off + i, n - 1, e);
        out.set(n - 1, off + i, e);
    }
    out.set(n - 1, n - 1, mid.mul(mid.mul(two, gq1), b.p2k));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredVerdict {
    pub det_g0: u32,
    pub det_m: u32,
    pub delta: u32,
    /// `det G_0 ≠ 0 ∧ Δ ≠ 0`
    pub acd: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcdVerdict {
    pub det_t: u32,
    /// `det T ≠ 0`
    pub matrix: bool,
    pub structured: Result<StructuredVerdict>,
}

/// `Δ = 2γ^{q+1} p_{2k} + Tr(αγ)²/(2α²) · wᵀ M⁻¹ w`
pub fn delta(params: &AcdParams, blocks: &StructuredBlocks) -> Result<u32> {
    let t = &*params.tower;
    let (top, mid) = (t.top(), t.mid());
    let quad = if params.k == 1 {
        0
    } else {
        let z = blocks.m.solve(t, &blocks.w)?.ok_or(Error::SingularM)?;
        mid.sum(blocks.w.iter().zip(&z).map(|(&a, &b)| mid.mul(a, b)))
    };
    let two = mid.from_int(2);
    let a2 = top.mul(params.alpha, params.alpha);
    let gq1 = top.mul(params.gamma, t.frob(params.gamma, 1));
    let tr_ag = t.trace(top.mul(params.alpha, params.gamma));
    let coef = top.div(top.mul(tr_ag, tr_ag), top.mul(two, a2)).unwrap();
    let d = top.add(top.mul(top.mul(two, gq1), blocks.p2k), top.mul(coef, quad));
    debug_assert!(d < t.q());
    Ok(d)
}

fn structured_verdict(params: &AcdParams) -> Result<StructuredVerdict> {
    if params.trace_gamma() != 0 {
        return Err(Error::TraceNonzero);
    }
    let t = &*params.tower;
    let ps = PowerSums::direct(t, &params.lambda, 2 * params.k);
    let blocks = structured_blocks(&ps, params.k);
    let det_m = blocks.m.det(t)?;
    if det_m == 0 {
        return Err(Error::SingularM);
    }
    let det_g0 = blocks.g0.det(t)?;
    let delta = delta(params, &blocks)?;
    Ok(StructuredVerdict {
        det_g0,
        det_m,
        delta,
        acd: det_g0 != 0 && delta != 0,
    })
}

pub fn acd_check(params: &AcdParams) -> AcdVerdict {
    let det_t = t_matrix(params).det(&params.tower).unwrap();
    AcdVerdict {
        det_t,
        matrix: det_t != 0,
        structured: structured_verdict(params),
    }
}

/// `(a, b)` with `x = a + bα`.
fn split(params: &AcdParams, x: u32) -> (u32, u32) {
    let t = &*params.tower;
    let top = t.top();
    let xq = t.frob(x, 1);
    let two = top.from_int(2);
    let a = top.div(top.add(x, xq), two).unwrap();
    let b = top.div(top.sub(x, xq), top.mul(two, params.alpha)).unwrap();
    debug_assert!(a < t.q() && b < t.q());
    (a, b)
}

/// Generator rows over `F_q`, coordinates `(a_1, b_1, a_2, b_2, ...)`.
pub fn expanded_generator(params: &AcdParams) -> Mat {
    let g = generator(params);
    let rows: Vec<Vec<u32>> = (0..g.rows())
        .map(|r| {
            g.row(r)
                .iter()
                .flat_map(|&x| {
                    let (a, b) = split(params, x);
                    [a, b]
                })
                .collect()
        })
        .collect();
    Mat::from_rows(Level::Mid, &rows, 2 * params.ell()).unwrap()
}

/// `dim_{F_q} C`
pub fn code_dim(params: &AcdParams) -> usize {
    expanded_generator(params).rank(&params.tower)
}

/// `dim(C ∩ C⊥)` by linear algebra on `F_q^{2ℓ}`.
pub fn acd_oracle(params: &AcdParams) -> Result<usize> {
    let n = 2 * params.ell();
    if n > DEFAULT_HULL_LIMIT {
        return Err(Error::TooLarge {
            size: n as u128,
            limit: DEFAULT_HULL_LIMIT as u128,
        });
    }
    let t = &*params.tower;
    let unit = [1u32, params.alpha];
    let mut form = Mat::zeros(Level::Mid, n, n);
    for a in 0..n {
        for b in 0..n {
            if a / 2 == b / 2 {
                form.set(a, b, trace_hermitian(t, &[unit[a % 2]], &[unit[b % 2]])?);
            }
        }
    }
    let c = Subspace::span(t, &expanded_generator(params));
    let dual = c.orthogonal(t, &form)?;
    debug_assert_eq!(c.dim() + dual.dim(), n);
    Ok(c.intersect(t, &dual)?.dim())
}

/// `γ^{q+1}` is a nonsquare in `F_q`.
pub fn mds_criterion(params: &AcdParams) -> bool {
    let t = &*params.tower;
    let n = t.top().mul(params.gamma, t.frob(params.gamma, 1));
    !t.is_square_mid(n)
}

/// `ℓ − k + 1`
pub fn singleton_bound(params: &AcdParams) -> usize {
    params.ell() - params.k + 1
}

/// Minimum Hamming weight over the `q^{2k} − 1` nonzero codewords.
pub fn min_distance_oracle(params: &AcdParams, limit: u128) -> Result<usize> {
    let q = params.q();
    let n = 2 * params.k;
    let size = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > limit {
        return Err(Error::TooLarge { size, limit });
    }
    let top = params.tower.top();
    let g = generator(params);
    let ell = params.ell();
    let mut digits = vec![0u32; n];
    let mut word = vec![0u32; ell];
    let mut best = usize::MAX;
    loop {
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(best);
            }
            let old = digits[pos];
            let new = if old + 1 == q { 0 } else { old + 1 };
            digits[pos] = new;
            let d = top.sub(new, old);
            for (w, &x) in word.iter_mut().zip(g.row(pos)) {
                *w = top.add(*w, top.mul(d, x));
            }
            if new != 0 {
                break;
            }
            pos += 1;
        }
        best = best.min(word.iter().filter(|&&x| x != 0).count());
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootProduct {
    /// `(−1)^k γ a_k Π λ`
    pub forced_a0: u32,
    /// `P(0)` for the Lagrange interpolant of `−γ a_k λ^k` on the roots.
    pub interpolated_a0: u32,
    pub in_base_field: bool,
    /// The member of `D_k(γ)` vanishing on the roots, when one exists.
    pub member: Option<Vec<u32>>,
}

fn poly_mul(t: &FieldTower, a: &[u32], b: &[u32]) -> Vec<u32> {
    let top = t.top();
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = top.add(out[i + j], top.mul(x, y));
        }
    }
    out
}

pub fn root_product_check(params: &AcdParams, roots: &[u32], a_k: u32) -> Result<RootProduct> {
    let k = params.k;
    if roots.len() != k {
        return Err(Error::BadRoots(format!(
            "need {k} roots, got {}",
            roots.len()
        )));
    }
    let mut sorted = roots.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != k {
        return Err(Error::BadRoots("roots are not distinct".into()));
    }
    if let Some(r) = roots.iter().find(|r| !params.lambda.contains(r)) {
        return Err(Error::BadRoots(format!("{r} is not in Λ")));
    }
    if a_k == 0 || a_k >= params.q() {
        return Err(Error::BadParams(
            "a_k must be a nonzero element of F_q".into(),
        ));
    }
    let t = &*params.tower;
    let top = t.top();
    let lead = top.mul(params.gamma, a_k);
    let prod = roots.iter().fold(1, |acc, &l| top.mul(acc, l));
    let mut forced = top.mul(lead, prod);
    if k % 2 == 1 {
        forced = top.neg(forced);
    }
    // P = Σ_j y_j ℓ_j(X), y_j = −γ a_k λ_j^k
    let mut p = vec![0u32; k];
    for (j, &lj) in roots.iter().enumerate() {
        let y = top.neg(top.mul(lead, top.pow(lj, k as u64)));
        let mut basis = vec![1u32];
        let mut denom = 1u32;
        for (m, &lm) in roots.iter().enumerate() {
            if m != j {
                basis = poly_mul(t, &basis, &[top.neg(lm), 1]);
                denom = top.mul(denom, top.sub(lj, lm));
            }
        }
        let scale = top.div(y, denom).unwrap();
        for (c, &b) in p.iter_mut().zip(&basis) {
            *c = top.add(*c, top.mul(scale, b));
        }
    }
    let interpolated = p[0];
    let in_base_field = t.frob(forced, 1) == forced;
    let member = in_base_field.then(|| {
        let mut f = p.clone();
        f.push(lead);
        debug_assert!(roots.iter().all(|&r| horner(t, &f, r) == 0));
        f
    });
    Ok(RootProduct {
        forced_a0: forced,
        interpolated_a0: interpolated,
        in_base_field,
        member,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStrategy {
    Geometric,
    Exhaustive,
    /// Geometric, then exhaustive.
    Auto,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub params: AcdParams,
    pub strategy: SearchStrategy,
    /// Primitive `g` with `Λ = {g^0, ..., g^{ℓ−1}}`, for the geometric strategy.
    pub generator: Option<u32>,
    /// Candidates examined across all strategies tried.
    pub scanned: usize,
}

#[derive(Debug, Default, Clone, Copy)]
struct FailureTally {
    g0: usize,
    m: usize,
    h: usize,
}

impl FailureTally {
    fn describe(&self) -> String {
        format!(
            "det G0 = 0: {}, det M = 0: {}, det H = 0: {}",
            self.g0, self.m, self.h
        )
    }
}

/// All three determinants nonzero; otherwise records the first that vanished.
fn accept(t: &FieldTower, ps: &PowerSums, k: usize, tally: &mut FailureTally) -> bool {
    let b = structured_blocks(ps, k);
    if b.g0.det(t).unwrap() == 0 {
        tally.g0 += 1;
        false
    } else if b.m.det(t).unwrap() == 0 {
        tally.m += 1;
        false
    } else if b.h.det(t).unwrap() == 0 {
        tally.h += 1;
        false
    } else {
        true
    }
}

/// Lexicographic `size`-subsets of `0..n`.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let size = c.len();
    for i in (0..size).rev() {
        if c[i] < n - size + i {
            c[i] += 1;
            for j in i + 1..size {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Finds `Λ` with `γ = α` passing both structured conditions.
pub fn lambda_search(
    tower: Arc<FieldTower>,
    k: usize,
    ell: usize,
    strategy: SearchStrategy,
) -> Result<SearchOutcome> {
    check_tower(&tower)?;
    let q = tower.q() as usize;
    if k == 0 || 2 * k > ell || ell + 2 > q {
        return Err(Error::BadParams(format!(
            "need 1 ≤ k, 2k ≤ ℓ ≤ q−2; got k = {k}, ℓ = {ell}, q = {q}"
        )));
    }
    let alpha = tower.skew_unit()?.value;
    let t = &*tower;
    let mut scanned = 0;
    let mut tally = FailureTally::default();
    let finish = |lambda: Vec<u32>, strategy, generator, scanned| {
        let params = AcdParams::new(tower.clone(), k, lambda, alpha)?;
        Ok(SearchOutcome {
            params,
            strategy,
            generator,
            scanned,
        })
    };
    if matches!(strategy, SearchStrategy::Geometric | SearchStrategy::Auto) {
        for g in 1..q as u32 {
            if t.mid().mult_order(g) != Some(q as u64 - 1) {
                continue;
            }
            scanned += 1;
            let ps = PowerSums::geometric(t, g, ell, 2 * k);
            if accept(t, &ps, k, &mut tally) {
                let lambda = (0..ell).map(|i| t.mid().pow(g, i as u64)).collect();
                return finish(lambda, SearchStrategy::Geometric, Some(g), scanned);
            }
        }
    }
    if matches!(strategy, SearchStrategy::Exhaustive | SearchStrategy::Auto) {
        let mut c: Vec<usize> = (0..ell).collect();
        loop {
            scanned += 1;
            let lambda: Vec<u32> = c.iter().map(|&i| i as u32 + 1).collect();
            let ps = PowerSums::direct(t, &lambda, 2 * k);
            if accept(t, &ps, k, &mut tally) {
                return finish(lambda, SearchStrategy::Exhaustive, None, scanned);
            }
            if !next_combination(&mut c, q - 1) {
                break;
            }
        }
    }
    Err(Error::NotFound {
        scanned,
        detail: tally.describe(),
    })
}

/// `Δ = −2α² det H / det M` for `γ = α`.
pub fn delta_identity_check(params: &AcdParams) -> Result<bool> {
    if params.gamma != params.alpha {
        return Err(Error::BadParams("the identity is stated for γ = α".into()));
    }
    let t = &*params.tower;
    let mid = t.mid();
    let ps = PowerSums::direct(t, &params.lambda, 2 * params.k);
    let blocks = structured_blocks(&ps, params.k);
    let det_m = blocks.m.det(t)?;
    if det_m == 0 {
        return Err(Error::SingularM);
    }
    let lhs = delta(params, &blocks)?;
    let a2 = t.top().mul(params.alpha, params.alpha);
    let rhs = mid
        .div(
            mid.mul(mid.neg(mid.mul(mid.from_int(2), a2)), blocks.h.det(t)?),
            det_m,
        )
        .unwrap();
    Ok(lhs == rhs)
}

/// Random `Λ` of size `ell` and random `γ`; `γ ∈ F_q^* α` when `trace_zero`.
pub fn random_params<R: Rng>(
    tower: Arc<FieldTower>,
    k: usize,
    ell: usize,
    trace_zero: bool,
    rng: &mut R,
) -> Result<AcdParams> {
    check_tower(&tower)?;
    let q = tower.q();
    if ell + 1 > q as usize {
        return Err(Error::BadParams(format!("ℓ = {ell} exceeds q − 1")));
    }
    let lambda: Vec<u32> = sample(rng, q as usize - 1, ell)
        .into_iter()
        .map(|i| i as u32 + 1)
        .collect();
    let alpha = tower.skew_unit()?.value;
    let gamma = if trace_zero {
        tower.top().mul(rng.random_range(1..q), alpha)
    } else {
        rng.random_range(1..tower.top().order())
    };
    AcdParams::new(tower, k, lambda, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Elem;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f25() -> Arc<FieldTower> {
        Arc::new(FieldTower::new(5, 1, 2).unwrap())
    }

    fn params(t: &Arc<FieldTower>, k: usize, lambda: &[u32], gamma: &str) -> AcdParams {
        let g = t.parse(Level::Top, gamma).unwrap().value;
        AcdParams::new(t.clone(), k, lambda.to_vec(), g).unwrap()
    }

    #[test]
    fn basis_shapes() {
        let t = Arc::new(FieldTower::new(13, 1, 2).unwrap());
        let p1 = params(&t, 1, &[1, 2], "u");
        assert_eq!(code_basis(&p1), vec![vec![1, 0], vec![0, p1.gamma]]);
        let p2 = params(&t, 2, &[1, 2, 3, 4], "u");
        let b = code_basis(&p2);
        assert_eq!(b.len(), 4);
        assert_eq!(b[2], vec![0, p2.alpha, 0]);
        assert_eq!(code_dim(&p2), 4);
    }

    #[test]
    fn encode_examples() {
        let t = f25();
        let p = params(&t, 1, &[1, 2, 3], "u");
        assert_eq!(encode(&p, &[0, 0]).unwrap(), vec![0, 0, 0]);
        assert_eq!(encode(&p, &[1, 0]).unwrap(), vec![1, 1, 1]);
        let got: Vec<String> = encode(&p, &[1, 1])
            .unwrap()
            .iter()
            .map(|&x| t.format(Elem::new(Level::Top, x)))
            .collect();
        assert_eq!(got, vec!["1+1u", "1+2u", "1+3u"]);
        assert!(matches!(
            encode(&p, &[1]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn trace_hermitian_examples() {
        let t = f25();
        assert_eq!(trace_hermitian(&t, &[1], &[1]).unwrap(), 2);
        assert_eq!(trace_hermitian(&t, &[5], &[5]).unwrap(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..100 {
            let x: Vec<u32> = (0..4).map(|_| rng.random_range(0..25)).collect();
            let y: Vec<u32> = (0..4).map(|_| rng.random_range(0..25)).collect();
            assert_eq!(
                trace_hermitian(&t, &x, &y).unwrap(),
                trace_hermitian(&t, &y, &x).unwrap()
            );
        }
    }

    #[test]
    fn t_matrix_examples() {
        let t = f25();
        let p = params(&t, 1, &[2, 3], "u");
        assert_eq!(
            t_matrix(&p),
            Mat::new(Level::Mid, 2, 2, vec![4, 0, 0, 3]).unwrap()
        );
        let v = acd_check(&p);
        assert!(v.matrix);
        assert!(v.structured.unwrap().acd);
        assert_eq!(acd_oracle(&p).unwrap(), 0);

        let bad = params(&t, 1, &[1, 2], "u");
        let v = acd_check(&bad);
        assert!(!v.matrix);
        assert_eq!(v.structured.unwrap().delta, 0);
        assert!(acd_oracle(&bad).unwrap() >= 1);
    }

    #[test]
    fn table_matches_direct_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for q in [5u32, 13] {
            let t = Arc::new(FieldTower::new(q, 1, 2).unwrap());
            for _ in 0..40 {
                let ell = rng.random_range(2..=(q as usize - 2).min(8));
                let k = rng.random_range(1..ell.min(4));
                for trace_zero in [true, false] {
                    let p = random_params(t.clone(), k, ell, trace_zero, &mut rng).unwrap();
                    let (gg, tr) = table_matrices(&p);
                    assert_eq!(gg, gg_dagger(&p));
                    assert_eq!(tr, t_matrix(&p));
                    if trace_zero {
                        assert_eq!(tr, predicted_t_blocks(&p));
                    }
                }
            }
        }
    }

    #[test]
    fn power_sum_closed_form() {
        let t = FieldTower::new(13, 1, 2).unwrap();
        for g in 2..13u32 {
            for ell in 1..12 {
                let lambda: Vec<u32> = (0..ell).map(|i| t.mid().pow(g, i as u64)).collect();
                let mut distinct = lambda.clone();
                distinct.sort_unstable();
                distinct.dedup();
                if distinct.len() != ell {
                    continue;
                }
                assert_eq!(
                    PowerSums::geometric(&t, g, ell, 10),
                    PowerSums::direct(&t, &lambda, 10)
                );
            }
        }
    }

    #[test]
    fn structured_agrees_with_matrix_and_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for q in [5u32, 13] {
            let t = Arc::new(FieldTower::new(q, 1, 2).unwrap());
            for _ in 0..60 {
                let ell = rng.random_range(2..=(q as usize - 2).min(8));
                let k = rng.random_range(1..ell.min(4));
                let trace_zero = rng.random_bool(0.5);
                let p = random_params(t.clone(), k, ell, trace_zero, &mut rng).unwrap();
                let v = acd_check(&p);
                assert_eq!(v.matrix, acd_oracle(&p).unwrap() == 0);
                match v.structured {
                    Ok(s) => assert_eq!(s.acd, v.matrix),
                    Err(Error::TraceNonzero) => assert!(!trace_zero),
                    Err(Error::SingularM) => assert!(k >= 2),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn mds_examples() {
        let t = f25();
        assert!(mds_criterion(&params(&t, 1, &[1, 2], "u")));
        assert!(!mds_criterion(&params(&t, 1, &[1, 2], "1")));
        for c in 1..5 {
            assert!(!mds_criterion(
                &AcdParams::new(t.clone(), 1, vec![1, 2], c).unwrap()
            ));
        }
    }

    #[test]
    fn min_distance_examples() {
        let t = f25();
        let p = params(&t, 1, &[1, 2, 3], "u");
        assert_eq!(min_distance_oracle(&p, DEFAULT_ENUM_LIMIT).unwrap(), 3);
        let p = params(&t, 1, &[2, 3], "u");
        assert_eq!(min_distance_oracle(&p, DEFAULT_ENUM_LIMIT).unwrap(), 2);
        let sq = params(&t, 1, &[1, 2, 3], "1");
        let d = min_distance_oracle(&sq, DEFAULT_ENUM_LIMIT).unwrap();
        assert!(d >= 1 && d <= singleton_bound(&sq));
        assert!(matches!(
            min_distance_oracle(&p, 10),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn root_product_examples() {
        let t = Arc::new(FieldTower::new(13, 1, 2).unwrap());
        // γ ∈ F_q: a member with k roots exists
        let p = params(&t, 2, &[1, 2, 3, 4, 5], "3");
        let rp = root_product_check(&p, &[2, 5], 7).unwrap();
        assert!(rp.in_base_field);
        assert_eq!(rp.forced_a0, rp.interpolated_a0);
        let f = rp.member.unwrap();
        assert_eq!(horner(&t, &f, 2), 0);
        assert_eq!(horner(&t, &f, 5), 0);
        // γ = α: never
        let p = params(&t, 2, &[1, 2, 3, 4, 5], "u");
        for a in 1..5 {
            for b in a + 1..=5 {
                for ak in 1..13 {
                    let rp = root_product_check(&p, &[a, b], ak).unwrap();
                    assert!(!rp.in_base_field);
                    assert_eq!(rp.forced_a0, rp.interpolated_a0);
                }
            }
        }
        assert!(matches!(
            root_product_check(&p, &[1, 1], 1),
            Err(Error::BadRoots(_))
        ));
        assert!(matches!(
            root_product_check(&p, &[1, 9], 1),
            Err(Error::BadRoots(_))
        ));
    }

    #[test]
    fn search_examples() {
        let t = f25();
        let found = lambda_search(t.clone(), 1, 3, SearchStrategy::Exhaustive).unwrap();
        assert_eq!(found.params.lambda, vec![1, 2, 3]);
        let ps = PowerSums::direct(&t, &found.params.lambda, 2);
        assert_eq!(ps.get(2), 4);
        assert!(acd_check(&found.params).matrix);
        assert!(mds_criterion(&found.params));

        assert!(matches!(
            lambda_search(t.clone(), 1, 2, SearchStrategy::Geometric),
            Err(Error::NotFound { scanned: 2, .. })
        ));
        let auto = lambda_search(t.clone(), 1, 2, SearchStrategy::Auto).unwrap();
        assert_eq!(auto.strategy, SearchStrategy::Exhaustive);
        assert!(acd_check(&auto.params).matrix);
        // {2, 3} also qualifies
        let other = AcdParams::new(t.clone(), 1, vec![2, 3], auto.params.alpha).unwrap();
        assert!(acd_check(&other).matrix);
        assert_eq!(PowerSums::geometric(&t, 2, 2, 2).get(0), 2);
    }

    #[test]
    fn delta_identity() {
        let t = f25();
        let p = AcdParams::new(t.clone(), 1, vec![2, 3], t.skew_unit().unwrap().value).unwrap();
        assert!(delta_identity_check(&p).unwrap());
        let t13 = Arc::new(FieldTower::new(13, 1, 2).unwrap());
        let found = lambda_search(t13.clone(), 2, 4, SearchStrategy::Geometric).unwrap();
        assert!(delta_identity_check(&found.params).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let alpha = t13.skew_unit().unwrap().value;
        for _ in 0..50 {
            let ell = rng.random_range(3..=11);
            let k = rng.random_range(1..=ell / 2);
            let mut p = random_params(t13.clone(), k, ell, true, &mut rng).unwrap();
            p.gamma = alpha;
            match delta_identity_check(&p) {
                Ok(ok) => assert!(ok),
                Err(e) => assert_eq!(e, Error::SingularM),
            }
        }
    }

    #[test]
    fn rejects_bad_towers_and_params() {
        let t7 = Arc::new(FieldTower::new(7, 1, 2).unwrap());
        assert!(matches!(
            AcdParams::new(t7, 1, vec![1, 2], 7),
            Err(Error::BadTower(_))
        ));
        let t = f25();
        assert!(AcdParams::new(t.clone(), 2, vec![1, 2], 5).is_err());
        assert!(AcdParams::new(t.clone(), 1, vec![1, 1], 5).is_err());
        assert!(AcdParams::new(t.clone(), 1, vec![0, 1], 5).is_err());
        assert!(AcdParams::new(t, 1, vec![1, 2], 0).is_err());
    }
}
