//! Twisted linearized Reed–Solomon codes with a constant-term twist:
//! `{f_0 + f_1 X + ... + f_{k−1} X^{k−1} + η θ^h(f_0) X^k}` inside `R_Λ`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::{FieldTower, Level};
use crate::linalg::{Mat, Subspace};
use crate::skew::{QuotientCtx, SkewPoly};

/// Default cap on `|C|` for exhaustive distance computations.
pub const DEFAULT_ENUM_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone)]
pub struct TlrsParams {
    pub ctx: Arc<QuotientCtx>,
    pub k: usize,
    pub h: usize,
    /// Top-level index, nonzero.
    pub eta: u32,
}

impl TlrsParams {
    pub fn new(ctx: Arc<QuotientCtx>, k: usize, h: usize, eta: u32) -> Result<TlrsParams> {
        let params = TlrsParams { ctx, k, h, eta };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.ctx.modulus_degree();
        if self.k == 0 || self.k >= n {
            return Err(Error::BadParams(format!(
                "k = {} outside [1, {}]",
                self.k,
                n - 1
            )));
        }
        if self.h >= self.ctx.r() {
            return Err(Error::BadParams(format!(
                "h = {} outside [0, {}]",
                self.h,
                self.ctx.r() - 1
            )));
        }
        if self.eta == 0 || self.eta >= self.tower().top().order() {
            return Err(Error::BadParams("η must be a nonzero element of L".into()));
        }
        Ok(())
    }

    pub fn tower(&self) -> &FieldTower {
        &self.ctx.tower
    }
}

#[derive(Debug, Clone)]
pub struct TlrsCode {
    pub params: TlrsParams,
    /// Power basis `1, u, ..., u^{r−1}` of `L` over `K`.
    pub betas: Vec<u32>,
    /// `β_t X^j` for `j = 1..k−1` (j-major), then `β_t + η θ^h(β_t) X^k`.
    pub basis_polys: Vec<SkewPoly>,
}

pub fn build_code(params: &TlrsParams) -> Result<TlrsCode> {
    params.validate()?;
    let t = params.tower();
    let r = params.ctx.r();
    let betas: Vec<u32> = (0..r).map(|i| t.top().pow(t.q(), i as u64)).collect();
    let mut basis_polys = Vec::with_capacity(params.k * r);
    for j in 1..params.k {
        basis_polys.extend(betas.iter().map(|&b| SkewPoly::monomial(b, j)));
    }
    for &b in &betas {
        let mut c = vec![0u32; params.k + 1];
        c[0] = b;
        c[params.k] = t.top().mul(params.eta, t.frob(b, params.h as i64));
        basis_polys.push(SkewPoly::new(c));
    }
    Ok(TlrsCode {
        params: params.clone(),
        betas,
        basis_polys,
    })
}

impl TlrsCode {
    pub fn ctx(&self) -> &QuotientCtx {
        &self.params.ctx
    }

    pub fn tower(&self) -> &FieldTower {
        &self.params.ctx.tower
    }

    /// `kr`
    pub fn dim(&self) -> usize {
        self.basis_polys.len()
    }

    /// Basis rows in ambient `K`-coordinates.
    pub fn generator(&self) -> Mat {
        let rows: Vec<Vec<u32>> = self
            .basis_polys
            .iter()
            .map(|f| self.ctx().to_k_coords(f))
            .collect();
        Mat::from_rows(Level::Mid, &rows, self.ctx().dim_k()).unwrap()
    }

    pub fn subspace(&self) -> Subspace {
        Subspace::span(self.tower(), &self.generator())
    }

    /// `f_0 + ... + f_{k−1} X^{k−1} + η θ^h(f_0) X^k`
    pub fn member(&self, f: &[u32]) -> Result<SkewPoly> {
        if f.len() != self.params.k {
            return Err(Error::LengthMismatch {
                expected: self.params.k,
                got: f.len(),
            });
        }
        let t = self.tower();
        let mut c = f.to_vec();
        c.push(
            t.top()
                .mul(self.params.eta, t.frob(f[0], self.params.h as i64)),
        );
        Ok(SkewPoly::new(c))
    }
}

pub fn lambda_form(f: &SkewPoly, g: &SkewPoly, ctx: &QuotientCtx) -> u32 {
    ctx.form(f, g)
}

/// `G[r,s] = ⟨b_r, b_s⟩_Λ`, straight from the form.
pub fn gram_entrywise(code: &TlrsCode) -> Mat {
    let n = code.dim();
    let mut g = Mat::zeros(Level::Mid, n, n);
    for (i, f) in code.basis_polys.iter().enumerate() {
        for (j, h) in code.basis_polys.iter().enumerate() {
            g.set(i, j, code.ctx().form(f, h));
        }
    }
    g
}

/// `M = (Tr(β_t β_u))`, `B = (Tr(α β_t β_u))` and `α = θ^{−h}(1 + η²)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramBlocks {
    pub m: Mat,
    pub b: Mat,
    pub alpha: u32,
}

pub fn gram_blocks(code: &TlrsCode) -> GramBlocks {
    let t = code.tower();
    let top = t.top();
    let eta = code.params.eta;
    let alpha = t.frob(top.add(1, top.mul(eta, eta)), -(code.params.h as i64));
    let r = code.betas.len();
    let mut m = Mat::zeros(Level::Mid, r, r);
    let mut b = Mat::zeros(Level::Mid, r, r);
    for (i, &x) in code.betas.iter().enumerate() {
        for (j, &y) in code.betas.iter().enumerate() {
            let xy = top.mul(x, y);
            m.set(i, j, t.trace(xy));
            b.set(i, j, t.trace(top.mul(alpha, xy)));
        }
    }
    GramBlocks { m, b, alpha }
}

/// `diag(I_{k−1} ⊗ M, B)`
pub fn assemble_gram(k: usize, blocks: &GramBlocks) -> Mat {
    let mut parts: Vec<&Mat> = vec![&blocks.m; k - 1];
    parts.push(&blocks.b);
    Mat::block_diag(Level::Mid, &parts)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramReport {
    pub gram: Mat,
    pub det_value: u32,
    pub m_block: Mat,
    pub b_block: Mat,
    pub alpha_value: u32,
    /// `det(M)^{k−1} · det(B)`
    pub det_by_blocks: u32,
    pub lcd_by_criterion: bool,
    pub lcd_by_oracle: Option<bool>,
    pub hull_dim: Option<usize>,
}

pub fn gram(code: &TlrsCode, with_oracle: bool) -> GramReport {
    let t = code.tower();
    let g = gram_entrywise(code);
    let blocks = gram_blocks(code);
    let det_value = g.det(t).unwrap();
    let det_m = blocks.m.det(t).unwrap();
    let det_by_blocks = t.mid().mul(
        t.mid().pow(det_m, (code.params.k - 1) as u64),
        blocks.b.det(t).unwrap(),
    );
    let hull_dim = with_oracle.then(|| hull_oracle(code));
    GramReport {
        gram: g,
        det_value,
        m_block: blocks.m,
        b_block: blocks.b,
        alpha_value: blocks.alpha,
        det_by_blocks,
        lcd_by_criterion: lcd_criterion(&code.params),
        lcd_by_oracle: hull_dim.map(|d| d == 0),
        hull_dim,
    }
}

/// `1 + η² ≠ 0`
pub fn lcd_criterion(params: &TlrsParams) -> bool {
    let top = params.tower().top();
    top.add(1, top.mul(params.eta, params.eta)) != 0
}

/// Gram matrix of `⟨·,·⟩_Λ` on the ambient `K`-basis of `R_Λ`.
pub fn ambient_form(ctx: &QuotientCtx) -> Mat {
    let n = ctx.dim_k();
    let basis: Vec<SkewPoly> = (0..n).map(|i| ctx.k_basis_element(i)).collect();
    let mut g = Mat::zeros(Level::Mid, n, n);
    for i in 0..n {
        for j in 0..n {
            g.set(i, j, ctx.form(&basis[i], &basis[j]));
        }
    }
    g
}

/// `{G : ⟨F,G⟩_Λ = 0 ∀F ∈ sub}`
pub fn dual_of(ctx: &QuotientCtx, sub: &Subspace) -> Result<Subspace> {
    sub.orthogonal(&ctx.tower, &ambient_form(ctx))
}

pub fn dual_basis(code: &TlrsCode) -> Subspace {
    dual_of(code.ctx(), &code.subspace()).expect("ambient dimensions agree")
}

/// `dim_K(C ∩ C⊥)`
pub fn hull_oracle(code: &TlrsCode) -> usize {
    let c = code.subspace();
    let d = dual_basis(code);
    c.intersect(code.tower(), &d)
        .expect("ambient dimensions agree")
        .dim()
}

/// Minimum sum-rank weight over the nonzero codewords, by enumerating all
/// `q^{kr}` `K`-combinations of the basis.
pub fn min_sum_rank_distance(code: &TlrsCode, limit: u128) -> Result<usize> {
    let t = code.tower();
    let ctx = code.ctx();
    let q = t.q();
    let n = code.dim();
    let size = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > limit {
        return Err(Error::TooLarge { size, limit });
    }
    let (ell, r) = (ctx.ell(), ctx.r());
    let block = r * r;
    // per basis element: ℓ blocks of r×r matrices, flattened
    let images: Vec<Vec<u32>> = code
        .basis_polys
        .iter()
        .map(|f| {
            ctx.eval_map(f)
                .parts
                .iter()
                .flat_map(|p| p.matrix(t).data().to_vec())
                .collect()
        })
        .collect();
    let mid = t.mid();
    let mut digits = vec![0u32; n];
    let mut acc = vec![0u32; ell * block];
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
            let delta = mid.sub(new, old);
            for (a, &v) in acc.iter_mut().zip(&images[pos]) {
                *a = mid.add(*a, mid.mul(delta, v));
            }
            if new != 0 {
                break;
            }
            pos += 1;
        }
        let weight: usize = acc
            .chunks(block)
            .map(|c| Mat::new(Level::Mid, r, r, c.to_vec()).unwrap().rank(t))
            .sum();
        best = best.min(weight);
    }
}

/// `ℓr − k + 1`
pub fn singleton_bound(params: &TlrsParams) -> usize {
    params.ctx.modulus_degree() - params.k + 1
}
