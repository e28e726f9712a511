//! Serializable records of TLRS and ACD runs. Elements are written in the
//! tower's term form (`2+1u`), matrices as nested arrays of those strings.

use serde::Serialize;

use crate::acd::{self, AcdParams, SearchOutcome, SearchStrategy};
use crate::error::{Error, Result};
use crate::fields::{Elem, FieldTower, Level, TowerDescriptor};
use crate::linalg::Mat;
use crate::tlrs::{self, TlrsCode};

pub const SCHEMA: u32 = 1;

/// Whether and how to run exhaustive distance enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMode {
    Skip,
    /// Run only when the code size is within the limit.
    IfWithinLimit,
    /// Fail with [`Error::TooLarge`] when over the limit.
    Required,
}

#[derive(Debug, Clone, Copy)]
pub struct RecordOptions {
    pub oracle: bool,
    pub distance: DistanceMode,
    pub limit: u128,
}

impl Default for RecordOptions {
    fn default() -> Self {
        RecordOptions {
            oracle: true,
            distance: DistanceMode::IfWithinLimit,
            limit: tlrs::DEFAULT_ENUM_LIMIT,
        }
    }
}

fn run_distance<F: FnOnce(u128) -> Result<usize>>(
    opts: &RecordOptions,
    f: F,
) -> Result<Option<usize>> {
    match opts.distance {
        DistanceMode::Skip => Ok(None),
        DistanceMode::Required => f(opts.limit).map(Some),
        DistanceMode::IfWithinLimit => match f(opts.limit) {
            Ok(d) => Ok(Some(d)),
            Err(Error::TooLarge { .. }) => Ok(None),
            Err(e) => Err(e),
        },
    }
}

fn fmt(t: &FieldTower, level: Level, v: u32) -> String {
    t.format(Elem::new(level, v))
}

fn fmt_vec(t: &FieldTower, level: Level, v: &[u32]) -> Vec<String> {
    v.iter().map(|&x| fmt(t, level, x)).collect()
}

fn fmt_mat(t: &FieldTower, m: &Mat) -> Vec<Vec<String>> {
    m.format_rows(t)
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct TlrsRecord {
    pub schema: u32,
    pub kind: &'static str,
    pub tower: TowerDescriptor,
    pub q: u32,
    pub ell: usize,
    pub lambda: Vec<String>,
    pub k: usize,
    pub h: usize,
    pub eta: String,
    pub eta_squared: String,
    pub one_plus_eta_squared: String,
    /// `θ^{−h}(1 + η²)`
    pub alpha: String,
    pub gram: Vec<Vec<String>>,
    pub gram_det: String,
    pub m_block: Vec<Vec<String>>,
    pub b_block: Vec<Vec<String>>,
    pub det_by_blocks: String,
    pub lcd_by_criterion: bool,
    pub lcd_by_gram: bool,
    pub lcd_by_oracle: Option<bool>,
    pub hull_dim: Option<usize>,
    pub dim_code: usize,
    pub dim_dual: Option<usize>,
    pub dim_ambient: usize,
    /// `ℓr − kr`, the smaller count sometimes quoted for `dim C⊥`; compare
    /// with `dim_dual`.
    pub dual_dim_lr_minus_kr: i64,
    pub min_sum_rank_distance: Option<usize>,
    pub singleton_bound: usize,
    /// Criterion, Gram, block formula and oracle all agree.
    pub consistent: bool,
}

pub fn tlrs_record(code: &TlrsCode, opts: &RecordOptions) -> Result<TlrsRecord> {
    let t = code.tower();
    let ctx = code.ctx();
    let top = t.top();
    let p = &code.params;
    let rep = tlrs::gram(code, opts.oracle);
    let dim_dual = opts.oracle.then(|| tlrs::dual_basis(code).dim());
    let distance = run_distance(opts, |limit| tlrs::min_sum_rank_distance(code, limit))?;
    let eta2 = top.mul(p.eta, p.eta);
    let lcd_by_gram = rep.det_value != 0;
    let consistent = rep.det_value == rep.det_by_blocks
        && rep.gram == tlrs::assemble_gram(p.k, &tlrs::gram_blocks(code))
        && lcd_by_gram == rep.lcd_by_criterion
        && rep.lcd_by_oracle.is_none_or(|o| o == rep.lcd_by_criterion)
        && dim_dual.is_none_or(|d| d + code.dim() == ctx.dim_k());
    let (ell, r, k) = (ctx.ell() as i64, ctx.r() as i64, p.k as i64);
    Ok(TlrsRecord {
        schema: SCHEMA,
        kind: "tlrs",
        tower: t.descriptor(),
        q: t.q(),
        ell: ctx.ell(),
        lambda: fmt_vec(t, Level::Mid, &ctx.lambda),
        k: p.k,
        h: p.h,
        eta: fmt(t, Level::Top, p.eta),
        eta_squared: fmt(t, Level::Top, eta2),
        one_plus_eta_squared: fmt(t, Level::Top, top.add(1, eta2)),
        alpha: fmt(t, Level::Top, rep.alpha_value),
        gram: fmt_mat(t, &rep.gram),
        gram_det: fmt(t, Level::Mid, rep.det_value),
        m_block: fmt_mat(t, &rep.m_block),
        b_block: fmt_mat(t, &rep.b_block),
        det_by_blocks: fmt(t, Level::Mid, rep.det_by_blocks),
        lcd_by_criterion: rep.lcd_by_criterion,
        lcd_by_gram,
        lcd_by_oracle: rep.lcd_by_oracle,
        hull_dim: rep.hull_dim,
        dim_code: code.dim(),
        dim_dual,
        dim_ambient: ctx.dim_k(),
        dual_dim_lr_minus_kr: ell * r - k * r,
        min_sum_rank_distance: distance,
        singleton_bound: tlrs::singleton_bound(p),
        consistent,
    })
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SearchInfo {
    pub strategy: SearchStrategy,
    pub generator: Option<String>,
    pub scanned: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct AcdRecord {
    pub schema: u32,
    pub kind: &'static str,
    pub tower: TowerDescriptor,
    pub q: u32,
    pub k: usize,
    pub ell: usize,
    pub lambda: Vec<String>,
    pub gamma: String,
    pub alpha: String,
    pub alpha_squared: String,
    pub trace_gamma: String,
    pub generator: Vec<Vec<String>>,
    pub t_matrix: Vec<Vec<String>>,
    pub det_t: String,
    pub g0: Vec<Vec<String>>,
    pub m_block: Vec<Vec<String>>,
    pub w: Vec<String>,
    pub p2k: String,
    pub delta: Option<String>,
    /// Why the structured path did not apply, if it did not.
    pub structured_note: Option<String>,
    pub acd_by_matrix: bool,
    pub acd_by_structure: Option<bool>,
    pub acd_by_oracle: Option<bool>,
    pub hull_dim: Option<usize>,
    /// Closed forms for every entry of `GG†` and `T` match direct sums.
    pub table_matches: bool,
    pub mds_by_criterion: bool,
    pub min_distance: Option<usize>,
    pub singleton_bound: usize,
    pub search: Option<SearchInfo>,
    pub consistent: bool,
}

pub fn acd_record(params: &AcdParams, opts: &RecordOptions) -> Result<AcdRecord> {
    let t = &*params.tower;
    let verdict = acd::acd_check(params);
    let tm = acd::t_matrix(params);
    let (gg_table, t_table) = acd::table_matrices(params);
    let table_matches = gg_table == acd::gg_dagger(params) && t_table == tm;
    let ps = acd::PowerSums::direct(t, &params.lambda, 2 * params.k);
    let blocks = acd::structured_blocks(&ps, params.k);
    let hull_dim = if opts.oracle {
        Some(acd::acd_oracle(params)?)
    } else {
        None
    };
    let distance = run_distance(opts, |limit| acd::min_distance_oracle(params, limit))?;
    let mds = acd::mds_criterion(params);
    let singleton = acd::singleton_bound(params);
    let (delta, acd_by_structure, note) = match &verdict.structured {
        Ok(s) => (Some(fmt(t, Level::Mid, s.delta)), Some(s.acd), None),
        Err(e) => (None, None, Some(e.to_string())),
    };
    let acd_by_oracle = hull_dim.map(|h| h == 0);
    let consistent = table_matches
        && acd_by_oracle.is_none_or(|o| o == verdict.matrix)
        && acd_by_structure.is_none_or(|s| s == verdict.matrix)
        && distance.is_none_or(|d| d <= singleton && (!mds || d == singleton));
    let a2 = t.top().mul(params.alpha, params.alpha);
    Ok(AcdRecord {
        schema: SCHEMA,
        kind: "acd",
        tower: t.descriptor(),
        q: t.q(),
        k: params.k,
        ell: params.ell(),
        lambda: fmt_vec(t, Level::Mid, &params.lambda),
        gamma: fmt(t, Level::Top, params.gamma),
        alpha: fmt(t, Level::Top, params.alpha),
        alpha_squared: fmt(t, Level::Mid, a2),
        trace_gamma: fmt(t, Level::Mid, params.trace_gamma()),
        generator: fmt_mat(t, &acd::generator(params)),
        t_matrix: fmt_mat(t, &tm),
        det_t: fmt(t, Level::Mid, verdict.det_t),
        g0: fmt_mat(t, &blocks.g0),
        m_block: fmt_mat(t, &blocks.m),
        w: fmt_vec(t, Level::Mid, &blocks.w),
        p2k: fmt(t, Level::Mid, blocks.p2k),
        delta,
        structured_note: note,
        acd_by_matrix: verdict.matrix,
        acd_by_structure,
        acd_by_oracle,
        hull_dim,
        table_matches,
        mds_by_criterion: mds,
        min_distance: distance,
        singleton_bound: singleton,
        search: None,
        consistent,
    })
}

pub fn search_record(found: &SearchOutcome, opts: &RecordOptions) -> Result<AcdRecord> {
    let mut rec = acd_record(&found.params, opts)?;
    let t = &*found.params.tower;
    rec.search = Some(SearchInfo {
        strategy: found.strategy,
        generator: found.generator.map(|g| fmt(t, Level::Mid, g)),
        scanned: found.scanned,
    });
    rec.consistent = rec.consistent && rec.acd_by_matrix && rec.mds_by_criterion;
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skew::QuotientCtx;
    use crate::tlrs::{build_code, TlrsParams};
    use std::sync::Arc;

    #[test]
    fn tlrs_example_record() {
        let t = Arc::new(FieldTower::new(5, 1, 2).unwrap());
        let ctx = Arc::new(QuotientCtx::new(t.clone(), 2).unwrap());
        let eta = t.parse(Level::Top, "2+1u").unwrap().value;
        let code = build_code(&TlrsParams::new(ctx, 1, 0, eta).unwrap()).unwrap();
        let rec = tlrs_record(&code, &RecordOptions::default()).unwrap();
        assert_eq!(rec.gram, vec![vec!["4", "1"], vec!["1", "3"]]);
        assert_eq!(rec.eta_squared, "1+4u");
        assert_eq!(rec.one_plus_eta_squared, "2+4u");
        assert_eq!(rec.gram_det, "1");
        assert_eq!(rec.hull_dim, Some(0));
        assert_eq!(rec.dim_dual, Some(6));
        assert_eq!(rec.dual_dim_lr_minus_kr, 2);
        assert!(rec.consistent);
        assert!(rec.min_sum_rank_distance.is_some());
    }

    #[test]
    fn acd_distance_modes() {
        let t = Arc::new(FieldTower::new(13, 1, 2).unwrap());
        let alpha = t.skew_unit().unwrap().value;
        let p = AcdParams::new(t, 3, vec![1, 2, 3, 4, 5, 6], alpha).unwrap();
        let small = RecordOptions {
            limit: 1000,
            ..RecordOptions::default()
        };
        assert_eq!(acd_record(&p, &small).unwrap().min_distance, None);
        let strict = RecordOptions {
            distance: DistanceMode::Required,
            ..small
        };
        assert!(matches!(
            acd_record(&p, &strict),
            Err(Error::TooLarge { .. })
        ));
    }
}
