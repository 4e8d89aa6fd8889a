//! Monte-Carlo decoding experiments and their CSV form.
//!
//! Every trial draws from its own ChaCha8 stream derived from the seed, the
//! error rank and the trial index, so results do not depend on scheduling.

use std::io::Write;
use std::time::Instant;

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bound::{product_success_bound, ratio, to_decimal};
use crate::error::{Error, Result};
use crate::lrpc::{CodeParams, FailureLine};
use crate::product_ring::{ProductExtension, ProductLrpcCode, ProductRing};
use crate::spec::{parse_ext_clause, parse_ring_spec, ExtClause};

pub const CSV_HEADER: &str = "t,trials,failures,empirical_failure,bound_failure,\
reason_line5,reason_line8,reason_line14,reason_line16,reason_line18,wall_ms";

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    /// Ring spec, optionally carrying its own `ext` clause.
    pub ring: String,
    /// Overrides the clause in `ring` when set.
    pub ext: Option<String>,
    pub params: CodeParams,
    pub t_min: usize,
    pub t_max: usize,
    pub trials: u64,
    pub seed: u64,
    pub fresh_code_per_trial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub t: usize,
    pub trials: u64,
    pub failures: u64,
    /// Indexed by [`FailureLine::index`].
    pub reasons: [u64; 5],
    /// `1 - success bound`, absent outside the bound's hypotheses.
    pub bound_failure: Option<BigRational>,
    pub wall_ms: Option<u64>,
}

impl TrialRecord {
    pub fn empirical_failure(&self) -> BigRational {
        ratio(self.failures, self.trials)
    }
}

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn trial_rng(seed: u64, t: usize, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ mix(mix(t as u64) ^ trial))
}

fn code_rng(seed: u64, t: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed ^ 0x636f_6465) ^ mix(t as u64 + 1))
}

/// The product extension described by a config.
pub fn build_extension(ring: &str, ext: Option<&str>) -> Result<ProductExtension> {
    let spec = parse_ring_spec(ring)?;
    let clause: ExtClause = match ext {
        Some(e) => parse_ext_clause(e)?,
        None => spec
            .ext
            .clone()
            .ok_or_else(|| Error::InvalidParams("no extension degree given".into()))?,
    };
    ProductExtension::from_clause(ProductRing::from_spec(&spec)?, &clause)
}

enum Outcome {
    Success,
    Failure(FailureLine),
}

fn run_trial(code: &ProductLrpcCode, t: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let c = code.random_codeword(rng);
    let ts = vec![t; code.codes().len()];
    let e = code.sample_error(&ts, rng)?;
    let ext = code.ext();
    let r: Vec<_> = c.iter().zip(&e).map(|(a, b)| crate::arith::RingOps::add(ext, a, b)).collect();
    Ok(match code.decode(&r) {
        Ok(d) if d == c => Outcome::Success,
        // a wrong codeword means the erasure step picked the wrong error
        Ok(_) => Outcome::Failure(FailureLine::Line18),
        Err(f) => Outcome::Failure(f.first_line()),
    })
}

/// Runs every `t` in `t_min..=t_max`.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParams("trials must be positive".into()));
    }
    if cfg.t_min > cfg.t_max {
        return Err(Error::InvalidParams(format!("empty range {}..{}", cfg.t_min, cfg.t_max)));
    }
    cfg.params.validate()?;
    let ext = build_extension(&cfg.ring, cfg.ext.as_deref())?;
    let m = ext.m();
    let qs: Vec<u64> = ext.ring().factors().iter().map(|r| r.q()).collect();
    let mut out = Vec::new();
    for t in cfg.t_min..=cfg.t_max {
        if t > cfg.params.n || t > m {
            return Err(Error::InvalidParams(format!("t={t} exceeds min(n, m)")));
        }
        let start = Instant::now();
        // one code per t unless every trial draws its own
        let shared = if cfg.fresh_code_per_trial {
            None
        } else {
            Some(ProductLrpcCode::generate(ext.clone(), cfg.params, &mut code_rng(cfg.seed, t))?)
        };
        let outcomes = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = trial_rng(cfg.seed, t, trial);
                match &shared {
                    Some(code) => run_trial(code, t, &mut rng),
                    None => {
                        let code = ProductLrpcCode::generate(ext.clone(), cfg.params, &mut rng)?;
                        run_trial(&code, t, &mut rng)
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let mut reasons = [0u64; 5];
        for o in &outcomes {
            if let Outcome::Failure(line) = o {
                reasons[line.index()] += 1;
            }
        }
        let factors: Vec<(u64, usize)> = qs.iter().map(|&q| (q, t)).collect();
        let bound_failure = product_success_bound(&factors, cfg.params, m)
            .ok()
            .map(|b| BigRational::from_integer(1.into()) - b);
        out.push(TrialRecord {
            t,
            trials: cfg.trials,
            failures: reasons.iter().sum(),
            reasons,
            bound_failure,
            wall_ms: Some(start.elapsed().as_millis() as u64),
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct CsvOptions {
    pub precision: usize,
    /// Fill `wall_ms`; off by default so identical seeds give identical bytes.
    pub timing: bool,
    pub external_bound: bool,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions { precision: 6, timing: false, external_bound: false }
    }
}

pub fn emit_csv<W: Write>(records: &[TrialRecord], opts: CsvOptions, mut w: W) -> Result<()> {
    let header = if opts.external_bound { format!("{CSV_HEADER},external_bound") } else { CSV_HEADER.to_string() };
    writeln!(w, "{header}")?;
    for r in records {
        let bound = r.bound_failure.as_ref().map(|b| to_decimal(b, opts.precision)).unwrap_or_default();
        let reasons: Vec<String> = r.reasons.iter().map(u64::to_string).collect();
        let wall = if opts.timing { r.wall_ms.map(|x| x.to_string()).unwrap_or_default() } else { String::new() };
        write!(
            w,
            "{},{},{},{},{},{},{}",
            r.t,
            r.trials,
            r.failures,
            to_decimal(&r.empirical_failure(), opts.precision),
            bound,
            reasons.join(","),
            wall
        )?;
        if opts.external_bound {
            write!(w, ",")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn to_csv_string(records: &[TrialRecord], opts: CsvOptions) -> String {
    let mut buf = Vec::new();
    emit_csv(records, opts, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// One parsed CSV row; decimals stay as text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvRow {
    pub t: usize,
    pub trials: u64,
    pub failures: u64,
    pub empirical_failure: String,
    pub bound_failure: Option<String>,
    pub reasons: [u64; 5],
    pub wall_ms: Option<u64>,
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Format("empty csv".into()))?;
    if !header.starts_with(CSV_HEADER) {
        return Err(Error::Format(format!("unexpected header {header:?}")));
    }
    let num = |s: &str| s.parse::<u64>().map_err(|_| Error::Format(format!("bad integer {s:?}")));
    let opt = |s: &str| (!s.is_empty()).then(|| s.to_string());
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() < 11 {
                return Err(Error::Format(format!("short row {line:?}")));
            }
            let mut reasons = [0u64; 5];
            for (i, r) in reasons.iter_mut().enumerate() {
                *r = num(f[5 + i])?;
            }
            Ok(CsvRow {
                t: num(f[0])? as usize,
                trials: num(f[1])?,
                failures: num(f[2])?,
                empirical_failure: f[3].to_string(),
                bound_failure: opt(f[4]),
                reasons,
                wall_ms: opt(f[10]).map(|s| num(&s)).transpose()?,
            })
        })
        .collect()
}
