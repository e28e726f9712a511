use std::io::Write;

use serde::Serialize;
use skewcodes::{AcdRecord, TlrsRecord};

use crate::args::Format;
use crate::CliError;

/// One line of `verify-paper-examples`.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
struct TlrsRow<'a> {
    q: u32,
    r: u32,
    ell: usize,
    lambda: String,
    k: usize,
    h: usize,
    eta: &'a str,
    one_plus_eta_squared: &'a str,
    alpha: &'a str,
    gram_det: &'a str,
    det_by_blocks: &'a str,
    lcd_by_criterion: bool,
    lcd_by_gram: bool,
    lcd_by_oracle: Option<bool>,
    hull_dim: Option<usize>,
    dim_code: usize,
    dim_dual: Option<usize>,
    dim_ambient: usize,
    min_sum_rank_distance: Option<usize>,
    singleton_bound: usize,
    consistent: bool,
}

#[derive(Debug, Serialize)]
struct AcdRow<'a> {
    q: u32,
    k: usize,
    ell: usize,
    lambda: String,
    gamma: &'a str,
    trace_gamma: &'a str,
    det_t: &'a str,
    delta: Option<&'a str>,
    structured_note: Option<&'a str>,
    acd_by_matrix: bool,
    acd_by_structure: Option<bool>,
    acd_by_oracle: Option<bool>,
    hull_dim: Option<usize>,
    table_matches: bool,
    mds_by_criterion: bool,
    min_distance: Option<usize>,
    singleton_bound: usize,
    strategy: Option<String>,
    generator: Option<&'a str>,
    scanned: Option<usize>,
    consistent: bool,
}

fn set(v: &[String]) -> String {
    format!("{{{}}}", v.join(", "))
}

pub fn matrix(m: &[Vec<String>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| format!("[{}]", r.join(","))).collect();
    format!("[{}]", rows.join(","))
}

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref()
        .map_or_else(|| "n/a".to_string(), |x| x.to_string())
}

fn tower_name(q: u32, r: u32) -> String {
    format!("F_{} / F_{}", (q as u64).pow(r), q)
}

/// Writes records in the chosen format. JSON is one object per line; CSV
/// gets its header from the first record.
pub struct RecordWriter<W: Write> {
    format: Format,
    sink: Sink<W>,
    count: usize,
}

enum Sink<W: Write> {
    Plain(W),
    Csv(Box<csv::Writer<W>>),
}

impl<W: Write> RecordWriter<W> {
    pub fn new(format: Format, out: W) -> Self {
        let sink = match format {
            Format::Csv => Sink::Csv(Box::new(csv::Writer::from_writer(out))),
            _ => Sink::Plain(out),
        };
        RecordWriter {
            format,
            sink,
            count: 0,
        }
    }

    fn plain(&mut self) -> &mut W {
        match &mut self.sink {
            Sink::Plain(w) => w,
            Sink::Csv(_) => unreachable!("plain output on a csv sink"),
        }
    }

    fn json<T: Serialize>(&mut self, rec: &T) -> Result<(), CliError> {
        let out = self.plain();
        serde_json::to_writer(&mut *out, rec).map_err(std::io::Error::from)?;
        writeln!(out)?;
        Ok(())
    }

    fn row<T: Serialize>(&mut self, row: &T) -> Result<(), CliError> {
        let Sink::Csv(w) = &mut self.sink else {
            unreachable!("csv row on a plain sink")
        };
        w.serialize(row).map_err(std::io::Error::other)?;
        w.flush()?;
        Ok(())
    }

    fn text(&mut self, lines: &[String]) -> Result<(), CliError> {
        let first = self.count == 0;
        let out = self.plain();
        if !first {
            writeln!(out)?;
        }
        for l in lines {
            writeln!(out, "{l}")?;
        }
        Ok(())
    }

    pub fn tlrs(&mut self, rec: &TlrsRecord) -> Result<(), CliError> {
        match self.format {
            Format::Json => self.json(rec)?,
            Format::Csv => self.row(&TlrsRow {
                q: rec.q,
                r: rec.tower.r,
                ell: rec.ell,
                lambda: rec.lambda.join(" "),
                k: rec.k,
                h: rec.h,
                eta: &rec.eta,
                one_plus_eta_squared: &rec.one_plus_eta_squared,
                alpha: &rec.alpha,
                gram_det: &rec.gram_det,
                det_by_blocks: &rec.det_by_blocks,
                lcd_by_criterion: rec.lcd_by_criterion,
                lcd_by_gram: rec.lcd_by_gram,
                lcd_by_oracle: rec.lcd_by_oracle,
                hull_dim: rec.hull_dim,
                dim_code: rec.dim_code,
                dim_dual: rec.dim_dual,
                dim_ambient: rec.dim_ambient,
                min_sum_rank_distance: rec.min_sum_rank_distance,
                singleton_bound: rec.singleton_bound,
                consistent: rec.consistent,
            })?,
            Format::Text => {
                let lines = vec![
                    format!(
                        "TLRS code over {}, Λ = {}, k = {}, h = {}",
                        tower_name(rec.q, rec.tower.r),
                        set(&rec.lambda),
                        rec.k,
                        rec.h
                    ),
                    format!("eta: {}", rec.eta),
                    format!("eta^2: {}", rec.eta_squared),
                    format!("1+eta^2: {}", rec.one_plus_eta_squared),
                    format!("alpha: {}", rec.alpha),
                    format!("Gram: {}", matrix(&rec.gram)),
                    format!("det: {} (by blocks: {})", rec.gram_det, rec.det_by_blocks),
                    format!(
                        "LCD: {} (criterion {}, Gram {}, oracle {})",
                        rec.lcd_by_criterion,
                        rec.lcd_by_criterion,
                        rec.lcd_by_gram,
                        opt(&rec.lcd_by_oracle)
                    ),
                    format!("hull dim: {}", opt(&rec.hull_dim)),
                    format!(
                        "dim C: {}, dim dual: {}, ambient: {}",
                        rec.dim_code,
                        opt(&rec.dim_dual),
                        rec.dim_ambient
                    ),
                    format!(
                        "min sum-rank distance: {} (Singleton bound {})",
                        opt(&rec.min_sum_rank_distance),
                        rec.singleton_bound
                    ),
                    format!("consistent: {}", rec.consistent),
                ];
                self.text(&lines)?
            }
        }
        self.count += 1;
        Ok(())
    }

    pub fn acd(&mut self, rec: &AcdRecord) -> Result<(), CliError> {
        match self.format {
            Format::Json => self.json(rec)?,
            Format::Csv => self.row(&AcdRow {
                q: rec.q,
                k: rec.k,
                ell: rec.ell,
                lambda: rec.lambda.join(" "),
                gamma: &rec.gamma,
                trace_gamma: &rec.trace_gamma,
                det_t: &rec.det_t,
                delta: rec.delta.as_deref(),
                structured_note: rec.structured_note.as_deref(),
                acd_by_matrix: rec.acd_by_matrix,
                acd_by_structure: rec.acd_by_structure,
                acd_by_oracle: rec.acd_by_oracle,
                hull_dim: rec.hull_dim,
                table_matches: rec.table_matches,
                mds_by_criterion: rec.mds_by_criterion,
                min_distance: rec.min_distance,
                singleton_bound: rec.singleton_bound,
                strategy: rec
                    .search
                    .as_ref()
                    .map(|s| format!("{:?}", s.strategy).to_lowercase()),
                generator: rec.search.as_ref().and_then(|s| s.generator.as_deref()),
                scanned: rec.search.as_ref().map(|s| s.scanned),
                consistent: rec.consistent,
            })?,
            Format::Text => {
                let mut lines = vec![
                    format!(
                        "ACD code over {}, Λ = {}, k = {}",
                        tower_name(rec.q, rec.tower.r),
                        set(&rec.lambda),
                        rec.k
                    ),
                    format!(
                        "gamma: {} (Tr = {}), alpha: {}",
                        rec.gamma, rec.trace_gamma, rec.alpha
                    ),
                    format!("T: {}", matrix(&rec.t_matrix)),
                    format!("det T: {}", rec.det_t),
                    format!("G0: {}", matrix(&rec.g0)),
                    format!("M: {}", matrix(&rec.m_block)),
                    format!("w: [{}], p_2k: {}", rec.w.join(","), rec.p2k),
                ];
                lines.push(match (&rec.delta, &rec.structured_note) {
                    (Some(d), _) => format!("Delta: {d}"),
                    (None, Some(n)) => format!("Delta: n/a ({n})"),
                    (None, None) => "Delta: n/a".to_string(),
                });
                lines.push(format!(
                    "ACD: {} (matrix {}, structured {}, oracle {})",
                    rec.acd_by_matrix,
                    rec.acd_by_matrix,
                    opt(&rec.acd_by_structure),
                    opt(&rec.acd_by_oracle)
                ));
                lines.push(format!("hull dim: {}", opt(&rec.hull_dim)));
                lines.push(format!(
                    "MDS: {} (criterion), d = {}, Singleton bound {}",
                    rec.mds_by_criterion,
                    opt(&rec.min_distance),
                    rec.singleton_bound
                ));
                if let Some(s) = &rec.search {
                    lines.push(format!(
                        "search: {}, generator {}, scanned {}",
                        format!("{:?}", s.strategy).to_lowercase(),
                        opt(&s.generator),
                        s.scanned
                    ));
                }
                lines.push(format!("consistent: {}", rec.consistent));
                self.text(&lines)?
            }
        }
        self.count += 1;
        Ok(())
    }

    pub fn check(&mut self, c: &Check) -> Result<(), CliError> {
        match self.format {
            Format::Json => self.json(c)?,
            Format::Csv => self.row(c)?,
            Format::Text => {
                let tag = if c.pass { "PASS" } else { "FAIL" };
                writeln!(
                    self.plain(),
                    "{tag} {}: expected {}, got {}",
                    c.name,
                    c.expected,
                    c.actual
                )?;
            }
        }
        self.count += 1;
        Ok(())
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn finish(self) -> Result<(), CliError> {
        match self.sink {
            Sink::Plain(mut w) => w.flush()?,
            Sink::Csv(mut w) => w.flush()?,
        }
        Ok(())
    }
}
