use std::env;
use std::io::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use skewcodes::acd::{self, AcdParams, SearchStrategy};
use skewcodes::{
    acd_record, build_code, search_record, tlrs_record, Elem, FieldTower, Level, QuotientCtx,
    RecordOptions, TlrsParams,
};

use crate::args::{
    AcdBuild, AcdSearch, AcdSweep, Command, DistanceArg, Format, OutputArgs, TlrsBuild, TlrsSweep,
    TowerArgs,
};
use crate::output::{matrix, Check, RecordWriter};
use crate::CliError;

/// Overrides the default limit on codewords enumerated by distance oracles.
pub const LIMIT_ENV: &str = "SKEWCODES_ENUM_LIMIT";

const CHUNK: usize = 256;

pub fn run<W: Write>(cmd: &Command, out: W) -> Result<bool, CliError> {
    match cmd {
        Command::TlrsBuild(a) => tlrs_build(a, out),
        Command::TlrsSweep(a) => tlrs_sweep(a, out),
        Command::AcdBuild(a) => acd_build(a, out),
        Command::AcdSearch(a) => acd_search(a, out),
        Command::AcdSweep(a) => acd_sweep(a, out),
        Command::VerifyPaperExamples(a) => verify(a.format, out),
    }
}

fn enum_limit() -> Result<u128, CliError> {
    match env::var(LIMIT_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Config(format!(
                "{LIMIT_ENV} must be a non-negative integer, got {v:?}"
            ))
        }),
        Err(env::VarError::NotPresent) => Ok(skewcodes::tlrs::DEFAULT_ENUM_LIMIT),
        Err(e) => Err(CliError::Config(format!("{LIMIT_ENV}: {e}"))),
    }
}

fn options(out: &OutputArgs, default_distance: DistanceArg) -> Result<RecordOptions, CliError> {
    Ok(RecordOptions {
        oracle: !out.no_oracle,
        distance: out.distance.unwrap_or(default_distance).into(),
        limit: enum_limit()?,
    })
}

fn tower(a: &TowerArgs) -> Result<Arc<FieldTower>, CliError> {
    Ok(Arc::new(FieldTower::new(a.p, a.m, a.r)?))
}

/// `1,4` or `{1, 4}`.
fn parse_set(t: &FieldTower, level: Level, s: &str) -> Result<Vec<u32>, CliError> {
    let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
    inner
        .split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| Ok(t.parse(level, x)?.value))
        .collect()
}

/// Maps `f` over `items` on a worker pool, handing results to `sink` in
/// input order. At most one chunk is held in memory.
fn stream<I, T, R, F, S>(items: I, jobs: Option<usize>, f: F, mut sink: S) -> Result<(), CliError>
where
    I: Iterator<Item = T>,
    T: Send,
    R: Send,
    F: Fn(T) -> Result<R, CliError> + Sync + Send,
    S: FnMut(R) -> Result<(), CliError>,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let mut items = items;
    loop {
        let chunk: Vec<T> = items.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return Ok(());
        }
        let results: Vec<Result<R, CliError>> =
            pool.install(|| chunk.into_par_iter().map(&f).collect());
        for r in results {
            sink(r?)?;
        }
    }
}

fn tlrs_build<W: Write>(a: &TlrsBuild, out: W) -> Result<bool, CliError> {
    let opts = options(&a.out, DistanceArg::Auto)?;
    let t = tower(&a.tower)?;
    let ctx = match (&a.lambda, a.ell) {
        (Some(s), ell) => {
            let lambda = parse_set(&t, Level::Mid, s)?;
            if ell.is_some_and(|e| e != lambda.len()) {
                return Err(CliError::Config(format!(
                    "--ell {} but Λ has {} elements",
                    ell.unwrap(),
                    lambda.len()
                )));
            }
            QuotientCtx::with_lambda(t.clone(), lambda)?
        }
        (None, Some(ell)) => QuotientCtx::new(t.clone(), ell as u64)?,
        (None, None) => {
            return Err(CliError::Config(
                "one of --ell or --lambda is required".into(),
            ))
        }
    };
    let ctx = Arc::new(ctx.with_rule(a.rule.into()));
    let eta = t.parse(Level::Top, &a.eta)?.value;
    let code = build_code(&TlrsParams::new(ctx, a.k, a.h, eta)?)?;
    let rec = tlrs_record(&code, &opts)?;
    let mut w = RecordWriter::new(a.out.format, out);
    w.tlrs(&rec)?;
    w.finish()?;
    Ok(rec.consistent)
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn tlrs_sweep<W: Write>(a: &TlrsSweep, out: W) -> Result<bool, CliError> {
    let opts = options(&a.out, DistanceArg::Never)?;
    let t = tower(&a.tower)?;
    let (q, r) = (t.q() as usize, t.r() as usize);
    let ells: Vec<usize> = match a.ell {
        Some(ell) => vec![ell],
        None => divisors(q - 1)
            .into_iter()
            .filter(|&l| l * r * r <= a.max_ambient)
            .collect(),
    };
    let mut ctxs = Vec::new();
    for ell in ells {
        let ctx = QuotientCtx::new(t.clone(), ell as u64)?.with_rule(a.rule.into());
        let n = ell * r;
        if a.k.is_some_and(|k| k == 0 || k >= n) {
            return Err(CliError::Config(format!(
                "k outside [1, {}] for ℓ = {ell}",
                n - 1
            )));
        }
        ctxs.push(Arc::new(ctx));
    }
    if a.h.is_some_and(|h| h >= r) {
        return Err(CliError::Config(format!("h outside [0, {}]", r - 1)));
    }
    let size = t.top().order();
    let items = ctxs.into_iter().flat_map(move |ctx| {
        let n = ctx.modulus_degree();
        let ks: Vec<usize> = a.k.map_or_else(|| (1..n).collect(), |k| vec![k]);
        let hs: Vec<usize> = a.h.map_or_else(|| (0..r).collect(), |h| vec![h]);
        ks.into_iter().flat_map(move |k| {
            let ctx = ctx.clone();
            hs.clone().into_iter().flat_map(move |h| {
                let ctx = ctx.clone();
                (1..size).map(move |eta| (ctx.clone(), k, h, eta))
            })
        })
    });
    let mut w = RecordWriter::new(a.out.format, out);
    let mut bad = 0usize;
    stream(
        items,
        a.jobs,
        |(ctx, k, h, eta)| {
            let code = build_code(&TlrsParams::new(ctx, k, h, eta)?)?;
            Ok(tlrs_record(&code, &opts)?)
        },
        |rec| {
            bad += usize::from(!rec.consistent);
            w.tlrs(&rec)
        },
    )?;
    eprintln!("{} records, {} inconsistent", w.count(), bad);
    w.finish()?;
    Ok(bad == 0)
}

fn acd_build<W: Write>(a: &AcdBuild, out: W) -> Result<bool, CliError> {
    let opts = options(&a.out, DistanceArg::Auto)?;
    let t = tower(&a.tower)?;
    acd::check_tower(&t)?;
    let lambda = parse_set(&t, Level::Mid, &a.lambda)?;
    let gamma = match &a.gamma {
        Some(g) => t.parse(Level::Top, g)?.value,
        None => t.skew_unit()?.value,
    };
    let rec = acd_record(&AcdParams::new(t, a.k, lambda, gamma)?, &opts)?;
    let mut w = RecordWriter::new(a.out.format, out);
    w.acd(&rec)?;
    w.finish()?;
    Ok(rec.consistent)
}

fn acd_search<W: Write>(a: &AcdSearch, out: W) -> Result<bool, CliError> {
    let opts = options(&a.out, DistanceArg::Auto)?;
    let t = tower(&a.tower)?;
    let found = acd::lambda_search(t, a.k, a.ell, a.strategy.into())?;
    let rec = search_record(&found, &opts)?;
    let mut w = RecordWriter::new(a.out.format, out);
    w.acd(&rec)?;
    w.finish()?;
    Ok(rec.consistent)
}

fn acd_sweep<W: Write>(a: &AcdSweep, out: W) -> Result<bool, CliError> {
    let opts = options(&a.out, DistanceArg::Never)?;
    let t = tower(&a.tower)?;
    acd::check_tower(&t)?;
    let ell_hi = a.ell_max.min(t.q() as usize - 1);
    if ell_hi < 2 || a.k_max == 0 {
        return Err(CliError::Config(
            "need --ell-max ≥ 2 and --k-max ≥ 1".into(),
        ));
    }
    let (seed, k_max) = (a.seed, a.k_max);
    let mut w = RecordWriter::new(a.out.format, out);
    let mut bad = 0usize;
    stream(
        0..a.samples,
        a.jobs,
        |i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let ell = rng.random_range(2..=ell_hi);
            let k = rng.random_range(1..=k_max.min(ell - 1));
            let params = acd::random_params(t.clone(), k, ell, i % 2 == 0, &mut rng)?;
            Ok(acd_record(&params, &opts)?)
        },
        |rec| {
            bad += usize::from(!rec.consistent);
            w.acd(&rec)
        },
    )?;
    eprintln!("{} records, {} inconsistent", w.count(), bad);
    w.finish()?;
    Ok(bad == 0)
}

fn check(name: &str, expected: impl ToString, actual: impl ToString) -> Check {
    let (expected, actual) = (expected.to_string(), actual.to_string());
    Check {
        name: name.into(),
        pass: expected == actual,
        expected,
        actual,
    }
}

fn verify<W: Write>(format: Format, out: W) -> Result<bool, CliError> {
    let opts = RecordOptions {
        limit: enum_limit()?,
        ..RecordOptions::default()
    };
    let t = Arc::new(FieldTower::new(5, 1, 2)?);
    let ctx = Arc::new(QuotientCtx::new(t.clone(), 2)?);
    let mut checks = vec![check(
        "subgroup of order 2",
        "{1, 4}",
        format!("{{{}, {}}}", ctx.lambda[0], ctx.lambda[1]),
    )];

    let eta = t.parse(Level::Top, "2+1u")?.value;
    let lcd = tlrs_record(
        &build_code(&TlrsParams::new(ctx.clone(), 1, 0, eta)?)?,
        &opts,
    )?;
    checks.push(check("LCD example: eta^2", "1+4u", &lcd.eta_squared));
    checks.push(check(
        "LCD example: 1+eta^2",
        "2+4u",
        &lcd.one_plus_eta_squared,
    ));
    checks.push(check(
        "LCD example: Gram",
        "[[4,1],[1,3]]",
        matrix(&lcd.gram),
    ));
    checks.push(check("LCD example: det", "1", &lcd.gram_det));
    checks.push(check(
        "LCD example: verdicts (criterion, Gram, oracle)",
        "true true true",
        format!(
            "{} {} {}",
            lcd.lcd_by_criterion,
            lcd.lcd_by_gram,
            lcd.lcd_by_oracle.unwrap_or(false)
        ),
    ));
    checks.push(check(
        "LCD example: hull dim",
        0,
        lcd.hull_dim.map_or(-1, |h| h as i64),
    ));

    let eta = t.parse(Level::Top, "2")?.value;
    let so = tlrs_record(&build_code(&TlrsParams::new(ctx, 1, 0, eta)?)?, &opts)?;
    checks.push(check(
        "self-orthogonal example: 1+eta^2",
        "0+0u",
        &so.one_plus_eta_squared,
    ));
    checks.push(check(
        "self-orthogonal example: Gram",
        "[[0,0],[0,0]]",
        matrix(&so.gram),
    ));
    checks.push(check(
        "self-orthogonal example: LCD",
        "false",
        so.lcd_by_criterion || so.lcd_by_gram,
    ));
    checks.push(check(
        "self-orthogonal example: hull dim",
        2,
        so.hull_dim.map_or(-1, |h| h as i64),
    ));

    let u = t.parse(Level::Top, "u")?.value;
    let p = AcdParams::new(t.clone(), 1, vec![2, 3], u)?;
    let rec = acd_record(&p, &opts)?;
    checks.push(check(
        "ACD Λ={2,3}, γ=u: T",
        "[[4,0],[0,3]]",
        matrix(&rec.t_matrix),
    ));
    checks.push(check(
        "ACD Λ={2,3}, γ=u: verdicts (matrix, structured, oracle)",
        "true true true",
        format!(
            "{} {} {}",
            rec.acd_by_matrix,
            rec.acd_by_structure.unwrap_or(false),
            rec.acd_by_oracle.unwrap_or(false)
        ),
    ));

    let p = AcdParams::new(t.clone(), 1, vec![1, 2], u)?;
    let rec = acd_record(&p, &opts)?;
    checks.push(check(
        "ACD Λ={1,2}, γ=u: Delta",
        "0",
        rec.delta.as_deref().unwrap_or("n/a"),
    ));
    checks.push(check(
        "ACD Λ={1,2}, γ=u: verdicts (matrix, oracle)",
        "false false",
        format!(
            "{} {}",
            rec.acd_by_matrix,
            rec.acd_by_oracle.unwrap_or(true)
        ),
    ));

    let p = AcdParams::new(t.clone(), 1, vec![1, 2, 3], u)?;
    let word = acd::encode(&p, &[1, 1])?;
    let word: Vec<String> = word
        .iter()
        .map(|&x| t.format(Elem::new(Level::Top, x)))
        .collect();
    checks.push(check(
        "ACD Λ={1,2,3}, γ=u: encode (1,1)",
        "1+1u,1+2u,1+3u",
        word.join(","),
    ));

    let found = acd::lambda_search(t.clone(), 1, 3, SearchStrategy::Exhaustive)?;
    let rec = search_record(&found, &opts)?;
    checks.push(check(
        "search k=1, ℓ=3 (exhaustive): Λ",
        "1,2,3",
        rec.lambda.join(","),
    ));
    checks.push(check(
        "search k=1, ℓ=3: ACD, MDS, d",
        "true true 3",
        format!(
            "{} {} {}",
            rec.acd_by_matrix,
            rec.mds_by_criterion,
            opt_num(rec.min_distance)
        ),
    ));

    let geometric = acd::lambda_search(t.clone(), 1, 2, SearchStrategy::Geometric);
    checks.push(check(
        "search k=1, ℓ=2 (geometric): not found",
        true,
        geometric.is_err(),
    ));
    let auto = search_record(&acd::lambda_search(t, 1, 2, SearchStrategy::Auto)?, &opts)?;
    checks.push(check(
        "search k=1, ℓ=2 (auto): ACD, MDS, d",
        "true true 2",
        format!(
            "{} {} {}",
            auto.acd_by_matrix,
            auto.mds_by_criterion,
            opt_num(auto.min_distance)
        ),
    ));

    let mut w = RecordWriter::new(format, out);
    for c in &checks {
        w.check(c)?;
    }
    w.finish()?;
    Ok(checks.iter().all(|c| c.pass))
}

fn opt_num(v: Option<usize>) -> String {
    v.map_or_else(|| "n/a".into(), |x| x.to_string())
}
