//! The `verify` pipeline: hypothesis checks in order, then the conclusion
//! checks when no hypothesis failed.

use serde::Serialize;

use crate::coincidence::{strong_coincidence, CoincidenceVerdict};
use crate::config::{Params, SystemConfig};
use crate::directive::{DirectiveSequence, Irreducibility, Primitivity};
use crate::error::Result;
use crate::language::{balance, BalanceCertificate, BalanceStatus};
use crate::price::{price_report, PriceReport, Recurrence, Verdict};
use crate::rauzy::{fractal_points, orbit_vs_shift, rotation_factor, subtile_overlap, OrbitReport, OverlapEstimate, RotationFactor};
use crate::spectral::{rational_independence, right_eigenvector, IndependenceReport, RightEigen, DEFAULT_PARTIAL_QUOTIENT_CAP};
use crate::word::Letter;

pub const SCHEMA_VERSION: u32 = 1;

/// Overlap measure below which the subtiles count as disjoint.
pub const OVERLAP_THRESHOLD: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Passed,
    Failed,
    Unknown,
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::VerifiedOnWindow => Status::Passed,
            Verdict::Refuted => Status::Failed,
            Verdict::Unknown => Status::Unknown,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Unimodularity {
    pub status: Status,
    /// Determinants of the distinct substitutions in the sequence, by name.
    pub determinants: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check<T> {
    pub status: Status,
    pub result: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenReport {
    pub u: [f64; 2],
    pub u1_prime: f64,
    pub right: RightEigen,
    pub independence: IndependenceReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageError {
    pub stage: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Classification {
    /// Every hypothesis verified on its window and every conclusion check passed.
    HypothesesMetConclusionVerified,
    HypothesisFailure { which: String },
    Inconclusive { reasons: Vec<String> },
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub sequence: String,
    pub params: Params,
    pub unimodular: Option<Unimodularity>,
    pub primitive: Option<Check<Primitivity>>,
    pub irreducible: Option<Check<Irreducibility>>,
    pub recurrence: Option<Check<Recurrence>>,
    pub balance: Option<Check<BalanceCertificate>>,
    pub price: Option<PriceReport>,
    pub eigen: Option<EigenReport>,
    pub coincidence: Option<CoincidenceVerdict>,
    pub rotation: Option<RotationFactor>,
    pub orbit: Option<OrbitReport>,
    pub overlap: Option<OverlapEstimate>,
    pub skipped: Vec<&'static str>,
    pub errors: Vec<StageError>,
    pub classification: Classification,
}

fn describe(d: &DirectiveSequence) -> String {
    let names = |from: usize, to: usize| (from..to).map(|n| d.name(n).unwrap_or("?").to_string()).collect::<Vec<_>>().join(", ");
    let q = d.preperiod_len();
    match (d.period(), d.horizon()) {
        (Some(p), _) if q == 0 => format!("periodic [{}]", names(0, p)),
        (Some(p), _) => format!("prefix [{}] cycle [{}]", names(0, q), names(q, q + p)),
        (None, Some(h)) => format!("window [{}]", names(0, h)),
        (None, None) => String::from("?"),
    }
}

struct Runner {
    errors: Vec<StageError>,
    skipped: Vec<&'static str>,
    failure: Option<String>,
    unknown: Vec<String>,
}

impl Runner {
    /// Runs a stage unless a hypothesis already failed.
    fn stage<T>(&mut self, name: &'static str, f: impl FnOnce() -> Result<T>) -> Option<T> {
        if self.failure.is_some() {
            self.skipped.push(name);
            return None;
        }
        match f() {
            Ok(x) => Some(x),
            Err(e) => {
                self.errors.push(StageError {
                    stage: name,
                    message: e.to_string(),
                });
                self.unknown.push(format!("{name}: error"));
                None
            }
        }
    }

    fn record(&mut self, name: &str, status: Status) {
        match status {
            Status::Passed => {}
            Status::Failed => {
                if self.failure.is_none() {
                    self.failure = Some(name.to_string());
                }
            }
            Status::Unknown => self.unknown.push(format!("{name}: unknown")),
        }
    }
}

pub fn run_verify(cfg: &SystemConfig) -> Result<VerifyReport> {
    let d = cfg.directive()?;
    let p = &cfg.params;
    let horizon = |n: usize| d.horizon().map_or(n, |h| n.min(h));
    let mut run = Runner {
        errors: Vec::new(),
        skipped: Vec::new(),
        failure: None,
        unknown: Vec::new(),
    };

    let unimodular = run.stage("unimodular", || {
        let mut seen: Vec<(String, String)> = Vec::new();
        let mut ok = true;
        let len = d.preperiod_len() + d.period().unwrap_or(0);
        for n in 0..horizon(len.max(1)) {
            let name = d.name(n)?.to_string();
            if seen.iter().any(|(s, _)| *s == name) {
                continue;
            }
            let s = d.get(n)?;
            ok &= s.is_unimodular();
            seen.push((name, s.incidence().det().to_string()));
        }
        Ok(Unimodularity {
            status: if ok { Status::Passed } else { Status::Failed },
            determinants: seen,
        })
    });
    if let Some(u) = &unimodular {
        run.record("unimodular", u.status);
    }

    let primitive = run.stage("primitive", || {
        let result = d.is_primitive(0, horizon(p.depth))?;
        let status = match (&result, d.primitivity_decided()?) {
            (_, Some(false)) => Status::Failed,
            (Primitivity::PositiveAt { .. }, _) => Status::Passed,
            (Primitivity::Unknown { .. }, _) => Status::Unknown,
        };
        Ok(Check { status, result })
    });
    if let Some(c) = &primitive {
        run.record("primitive", c.status);
    }

    let irreducible = run.stage("irreducible", || {
        let to = horizon(p.irreducible_to);
        let result = d.is_algebraically_irreducible(0, p.irreducible_from.min(to), to)?;
        let status = match result {
            Irreducibility::VerifiedOnWindow { .. } => Status::Passed,
            Irreducibility::Refuted { .. } => Status::Failed,
            Irreducibility::Unknown { .. } => Status::Unknown,
        };
        Ok(Check { status, result })
    });
    if let Some(c) = &irreducible {
        run.record("irreducible", c.status);
    }

    let price = run.stage("price", || price_report(&d, &p.price_params()));
    let recurrence = price.as_ref().map(|r| Check {
        status: r.r.verdict.into(),
        result: r.r.clone(),
    });
    if let Some(c) = &recurrence {
        run.record("recurrence", c.status);
    }

    let bal = run.stage("balance", || {
        let result = balance(&d, p.shift, p.maxlen, p.bound)?;
        let status = match result.status {
            BalanceStatus::CertifiedUpToL => Status::Passed,
            BalanceStatus::Refuted { .. } => Status::Failed,
            BalanceStatus::Unknown => Status::Unknown,
        };
        Ok(Check { status, result })
    });
    if let Some(c) = &bal {
        run.record("balance", c.status);
    }
    if let Some(pr) = &price {
        // (R) and (C) are reported above in their own stages.
        for (name, v) in [("price-P", pr.p.verdict), ("price-I", pr.i.verdict), ("price-C", pr.c.verdict), ("price-E", pr.e.verdict)] {
            run.record(name, v.into());
        }
    }

    let eigen = run.stage("eigen", || {
        let right = right_eigenvector(&d, horizon(p.eigen_depth), p.tolerance, p.precision)?;
        let u = right.best().clone();
        let implied_by_hypotheses = irreducible.as_ref().is_some_and(|c| c.status == Status::Passed)
            && bal.as_ref().is_some_and(|c| c.status == Status::Passed);
        Ok(EigenReport {
            u: u.to_f64(),
            u1_prime: u.u1_prime(),
            independence: IndependenceReport {
                verdict: rational_independence(&u, DEFAULT_PARTIAL_QUOTIENT_CAP),
                implied_by_hypotheses,
            },
            right,
        })
    });

    let coincidence = run.stage("coincidence", || strong_coincidence(&d, horizon(p.cap), false));
    if let Some(CoincidenceVerdict::NoneUpTo { cap }) = &coincidence {
        run.unknown.push(format!("coincidence: none up to n = {cap}"));
    }

    let u = eigen.as_ref().map(|e| e.right.best().clone());
    let rotation = match &u {
        Some(u) => run.stage("rotation", || Ok(rotation_factor(u))),
        None => {
            run.skipped.push("rotation");
            None
        }
    };
    let orbit = match &u {
        Some(u) => run.stage("orbit", || orbit_vs_shift(&d, u, p.steps, p.classifier_depth, None)),
        None => {
            run.skipped.push("orbit");
            None
        }
    };
    if let Some(o) = &orbit {
        if o.mismatches > 0 {
            run.unknown.push(format!("orbit: {} mismatches", o.mismatches));
        }
    }
    let c = bal.as_ref().map_or(1, |b| b.result.c.max(1)) as f64;
    let overlap = match &u {
        Some(u) => run.stage("overlap", || {
            let approx = fractal_points(&d, u, p.fractal_depth, Letter::One)?;
            subtile_overlap(&approx, p.bin_width, c)
        }),
        None => {
            run.skipped.push("overlap");
            None
        }
    };
    if let Some(o) = &overlap {
        if o.measure >= OVERLAP_THRESHOLD || o.outside > 0 {
            run.unknown.push(format!("overlap: measure {} with {} points outside", o.measure, o.outside));
        }
    }

    let classification = match (&run.failure, run.unknown.is_empty()) {
        (Some(which), _) => Classification::HypothesisFailure { which: which.clone() },
        (None, true) => Classification::HypothesesMetConclusionVerified,
        (None, false) => Classification::Inconclusive {
            reasons: run.unknown.clone(),
        },
    };

    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        sequence: describe(&d),
        params: p.clone(),
        unimodular,
        primitive,
        irreducible,
        recurrence,
        balance: bal,
        price,
        eigen,
        coincidence,
        rotation,
        orbit,
        overlap,
        skipped: run.skipped,
        errors: run.errors,
        classification,
    })
}
