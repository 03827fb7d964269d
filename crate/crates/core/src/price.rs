//! Property PRICE (Primitivity, Recurrence, algebraic Irreducibility,
//! C-balancedness, recurrent left Eigenvector) checked on a finite window.
//!
//! For (eventually) periodic sequences the pair sequences are
//! `ℓ_k = ℓ_1 + (k-1)p` and `n_k = kp`; for finite windows they are chosen
//! greedily inside the horizon.

use serde::Serialize;

use crate::directive::{DirectiveSequence, Irreducibility, RecurrenceDecision};
use crate::error::Result;
use crate::language::{balance, BalanceStatus};
use crate::matrix::Mat2;
use crate::spectral::{left_perron, left_vector_trace, DirectionVec, LeftVecTrace, DEFAULT_PRECISION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    VerifiedOnWindow,
    Refuted,
    Unknown,
}

#[derive(Debug, Clone)]
pub struct PriceParams {
    /// Largest block length `h` and, for finite windows, the search horizon.
    pub depth: usize,
    pub pairs: usize,
    /// Range of `ℓ − k` for the irreducibility check.
    pub irreducible_lengths: (usize, usize),
    pub maxlen: usize,
    pub balance_bound: Option<u64>,
    pub tol: f64,
    pub precision: u32,
    pub left_vector: Option<DirectionVec>,
}

impl Default for PriceParams {
    fn default() -> Self {
        PriceParams {
            depth: 20,
            pairs: 5,
            irreducible_lengths: (1, 50),
            maxlen: 200,
            balance_bound: None,
            tol: 1e-9,
            precision: DEFAULT_PRECISION,
            left_vector: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PositiveBlock {
    pub verdict: Verdict,
    pub h: Option<usize>,
    pub block: Option<Mat2>,
    pub ells: Vec<usize>,
    /// Whether `M_[ℓ_k − h, ℓ_k) = B` holds for every `k` by periodicity.
    pub all_k: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Recurrence {
    pub verdict: Verdict,
    /// Matched windows `(n_k, ℓ_k)`.
    pub pairs: Vec<(usize, usize)>,
    pub decided: Option<RecurrenceDecision>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IrreducibleCheck {
    pub verdict: Verdict,
    /// Checked `ℓ − k` range.
    pub lengths: (usize, usize),
    pub per_shift: Vec<Irreducibility>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BalancedCheck {
    pub verdict: Verdict,
    #[serde(rename = "C")]
    pub c: Option<u64>,
    pub max_len: usize,
    /// Shifts `n_k + ℓ_k` whose languages were certified.
    pub shifts: Vec<usize>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LeftEigenCheck {
    pub verdict: Verdict,
    /// Where `v` came from: `given`, `block`, `cycle` or `ones`.
    pub source: &'static str,
    pub tol: f64,
    pub trace: Option<LeftVecTrace>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PriceReport {
    #[serde(rename = "P")]
    pub p: PositiveBlock,
    #[serde(rename = "R")]
    pub r: Recurrence,
    #[serde(rename = "I")]
    pub i: IrreducibleCheck,
    #[serde(rename = "C")]
    pub c: BalancedCheck,
    #[serde(rename = "E")]
    pub e: LeftEigenCheck,
}

impl PriceReport {
    pub fn all_verified(&self) -> bool {
        [self.p.verdict, self.r.verdict, self.i.verdict, self.c.verdict, self.e.verdict]
            .iter()
            .all(|v| *v == Verdict::VerifiedOnWindow)
    }

    /// First condition refuted, by letter.
    pub fn first_refuted(&self) -> Option<&'static str> {
        [
            ("P", self.p.verdict),
            ("R", self.r.verdict),
            ("I", self.i.verdict),
            ("C", self.c.verdict),
            ("E", self.e.verdict),
        ]
        .into_iter()
        .find(|(_, v)| *v == Verdict::Refuted)
        .map(|(name, _)| name)
    }
}

pub fn price_report(d: &DirectiveSequence, params: &PriceParams) -> Result<PriceReport> {
    let p = positive_block(d, params)?;
    let r = recurrence(d, &p, params)?;
    let i = irreducible(d, params)?;
    let c = balanced(d, &r.pairs, params)?;
    let e = left_eigen(d, &p, &r.pairs, params)?;
    Ok(PriceReport { p, r, i, c, e })
}

fn positive_block(d: &DirectiveSequence, params: &PriceParams) -> Result<PositiveBlock> {
    let unknown = PositiveBlock {
        verdict: Verdict::Unknown,
        h: None,
        block: None,
        ells: Vec::new(),
        all_k: false,
    };
    match d.period() {
        Some(per) => {
            // Blocks starting in the periodic part repeat every period.
            let q = d.preperiod_len();
            for h in 1..=params.depth {
                for ell in h + q..h + q + per {
                    let b = d.product_matrix(ell - h, ell)?;
                    if b.is_positive() {
                        let ells = (0..params.pairs.max(1)).map(|k| ell + k * per).collect();
                        return Ok(PositiveBlock {
                            verdict: Verdict::VerifiedOnWindow,
                            h: Some(h),
                            block: Some(b),
                            ells,
                            all_k: true,
                        });
                    }
                }
            }
            Ok(unknown)
        }
        None => {
            let horizon = d.horizon().unwrap_or(0);
            for h in 1..=params.depth.min(horizon) {
                // Positive blocks in order of first appearance, with every ℓ they end at.
                let mut groups: Vec<(Mat2, Vec<usize>)> = Vec::new();
                for ell in h..=horizon {
                    let b = d.product_matrix(ell - h, ell)?;
                    if !b.is_positive() {
                        continue;
                    }
                    match groups.iter_mut().find(|(m, _)| *m == b) {
                        Some((_, ells)) => ells.push(ell),
                        None => groups.push((b, vec![ell])),
                    }
                }
                if let Some((b, ells)) = groups.into_iter().find(|(_, e)| e.len() >= 2) {
                    return Ok(PositiveBlock {
                        verdict: Verdict::VerifiedOnWindow,
                        h: Some(h),
                        block: Some(b),
                        ells,
                        all_k: false,
                    });
                }
            }
            Ok(unknown)
        }
    }
}

fn recurrence(d: &DirectiveSequence, p: &PositiveBlock, params: &PriceParams) -> Result<Recurrence> {
    let decided = d.recurrence_decided()?;
    let mut pairs = Vec::new();
    match (d.period(), &decided) {
        (_, Some(RecurrenceDecision::NotRecurrent { .. })) => {
            return Ok(Recurrence {
                verdict: Verdict::Refuted,
                pairs,
                decided,
            });
        }
        (Some(per), _) => {
            let ells: Vec<usize> = if p.ells.is_empty() {
                (1..=params.pairs).collect()
            } else {
                p.ells.clone()
            };
            for (k, &ell) in ells.iter().enumerate() {
                let n = (k + 1) * per;
                if d.recurrence_windows(ell, n + ell)?.contains(&n) {
                    pairs.push((n, ell));
                }
            }
        }
        (None, _) => {
            let horizon = d.horizon().unwrap_or(0);
            let mut last_n = 0;
            for &ell in &p.ells {
                if ell > horizon {
                    break;
                }
                let hit = d
                    .recurrence_windows(ell, horizon)?
                    .into_iter()
                    .find(|&n| n > last_n);
                match hit {
                    Some(n) => {
                        pairs.push((n, ell));
                        last_n = n;
                    }
                    None => break,
                }
            }
        }
    }
    let verdict = if pairs.is_empty() {
        Verdict::Unknown
    } else {
        Verdict::VerifiedOnWindow
    };
    Ok(Recurrence {
        verdict,
        pairs,
        decided,
    })
}

fn irreducible(d: &DirectiveSequence, params: &PriceParams) -> Result<IrreducibleCheck> {
    let (lo, hi) = params.irreducible_lengths;
    let lo = lo.max(1);
    let (shifts, hi) = match (d.period(), d.horizon()) {
        (Some(p), _) => (d.preperiod_len() + p, hi),
        (None, Some(h)) => (1, hi.min(h)),
        (None, None) => unreachable!("finite windows carry a horizon"),
    };
    if hi < lo {
        return Ok(IrreducibleCheck {
            verdict: Verdict::Unknown,
            lengths: (lo, hi),
            per_shift: Vec::new(),
        });
    }
    let mut per_shift = Vec::with_capacity(shifts);
    for k in 0..shifts {
        per_shift.push(d.is_algebraically_irreducible(k, k + lo, k + hi)?);
    }
    let verdict = if per_shift.iter().any(|x| matches!(x, Irreducibility::Refuted { .. })) {
        Verdict::Refuted
    } else if per_shift
        .iter()
        .all(|x| matches!(x, Irreducibility::VerifiedOnWindow { .. }))
    {
        Verdict::VerifiedOnWindow
    } else {
        Verdict::Unknown
    };
    Ok(IrreducibleCheck {
        verdict,
        lengths: (lo, hi),
        per_shift,
    })
}

fn balanced(d: &DirectiveSequence, pairs: &[(usize, usize)], params: &PriceParams) -> Result<BalancedCheck> {
    let mut shifts: Vec<usize> = pairs.iter().map(|(n, l)| n + l).collect();
    if let Some(p) = d.period() {
        // L^(m) depends only on the tail, hence on m modulo the period past the preperiod.
        let q = d.preperiod_len();
        let mut seen = Vec::new();
        shifts.retain(|&m| {
            let key = if m >= q { q + (m - q) % p } else { m };
            let fresh = !seen.contains(&key);
            seen.push(key);
            fresh
        });
    }
    let mut out = BalancedCheck {
        verdict: Verdict::Unknown,
        c: None,
        max_len: params.maxlen,
        shifts: Vec::new(),
        note: None,
    };
    if shifts.is_empty() {
        out.note = Some("no recurrence pairs".into());
        return Ok(out);
    }
    let mut c = 0;
    let mut all = true;
    for &m in &shifts {
        let cert = match balance(d, m, params.maxlen, params.balance_bound) {
            Ok(cert) => cert,
            Err(e) => {
                out.note = Some(format!("shift {m}: {e}"));
                all = false;
                continue;
            }
        };
        c = c.max(cert.c);
        match cert.status {
            BalanceStatus::CertifiedUpToL => out.shifts.push(m),
            BalanceStatus::Refuted { .. } => {
                out.verdict = Verdict::Refuted;
                out.c = Some(cert.c);
                out.note = Some(format!("shift {m} exceeds the bound"));
                return Ok(out);
            }
            BalanceStatus::Unknown => {
                all = false;
                out.note.get_or_insert_with(|| format!("shift {m}: factors not saturated"));
            }
        }
    }
    out.c = Some(c);
    if all {
        out.verdict = Verdict::VerifiedOnWindow;
    }
    Ok(out)
}

fn left_eigen(
    d: &DirectiveSequence,
    p: &PositiveBlock,
    pairs: &[(usize, usize)],
    params: &PriceParams,
) -> Result<LeftEigenCheck> {
    let mut candidates: Vec<(&'static str, DirectionVec)> = Vec::new();
    if let Some(v) = &params.left_vector {
        candidates.push(("given", v.clone()));
    } else {
        if let Some(v) = p.block.as_ref().and_then(|b| left_perron(b, params.precision)) {
            candidates.push(("block", v));
        }
        if let (Some(per), 0) = (d.period(), d.preperiod_len()) {
            let cycle = d.product_matrix(0, per)?;
            if let Some(v) = left_perron(&cycle, params.precision) {
                candidates.push(("cycle", v));
            }
        }
        if candidates.is_empty() {
            candidates.push(("ones", DirectionVec::ones()));
        }
    }
    let indices: Vec<usize> = pairs.iter().map(|(n, _)| *n).collect();
    let mut first = None;
    for (source, v) in candidates {
        if indices.is_empty() {
            return Ok(LeftEigenCheck {
                verdict: Verdict::Unknown,
                source,
                tol: params.tol,
                trace: None,
            });
        }
        let trace = left_vector_trace(d, &v, &indices)?;
        let ok = trace.last_angle().is_some_and(|a| a < params.tol);
        let check = LeftEigenCheck {
            verdict: if ok { Verdict::VerifiedOnWindow } else { Verdict::Unknown },
            source,
            tol: params.tol,
            trace: Some(trace),
        };
        if ok {
            return Ok(check);
        }
        first.get_or_insert(check);
    }
    Ok(first.expect("at least one candidate"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Substitution;

    fn report(d: &DirectiveSequence) -> PriceReport {
        price_report(d, &PriceParams::default()).unwrap()
    }

    #[test]
    fn fibonacci_has_price() {
        let d = DirectiveSequence::periodic(vec![Substitution::fibonacci()]).unwrap();
        let r = report(&d);
        assert_eq!(r.p.h, Some(2));
        assert_eq!(r.p.block, Some(Mat2::from_i64([[2, 1], [1, 1]])));
        assert_eq!(r.r.verdict, Verdict::VerifiedOnWindow);
        assert_eq!(r.r.pairs[0], (1, 2));
        assert_eq!(r.i.verdict, Verdict::VerifiedOnWindow);
        assert_eq!(r.c.c, Some(1));
        assert_eq!(r.e.source, "block");
        assert!(r.all_verified());
    }

    #[test]
    fn single_letter_window_is_inconclusive() {
        let d = DirectiveSequence::finite_window(vec![Substitution::fibonacci()]).unwrap();
        let r = report(&d);
        assert_eq!(r.p.verdict, Verdict::Unknown);
        assert_eq!(r.r.verdict, Verdict::Unknown);
        assert_eq!(r.c.verdict, Verdict::Unknown);
        assert_eq!(r.e.verdict, Verdict::Unknown);
        assert!(!r.all_verified());
    }

    #[test]
    fn thue_morse_is_reducible() {
        let tm = Substitution::from_images("12", "21").unwrap();
        let d = DirectiveSequence::periodic(vec![tm]).unwrap();
        let r = report(&d);
        assert_eq!(r.i.verdict, Verdict::Refuted);
        assert_eq!(r.first_refuted(), Some("I"));
    }

    #[test]
    fn period_two_left_vector_falls_back_to_cycle() {
        let a = Substitution::fibonacci();
        let b = Substitution::from_images("112", "12").unwrap();
        let d = DirectiveSequence::periodic(vec![a, b]).unwrap();
        let r = report(&d);
        assert_eq!(r.p.verdict, Verdict::VerifiedOnWindow);
        assert_eq!(r.e.verdict, Verdict::VerifiedOnWindow);
    }

    #[test]
    fn preperiod_breaks_recurrence() {
        let tm = Substitution::from_images("12", "21").unwrap();
        let d = DirectiveSequence::eventually_periodic(vec![tm], vec![Substitution::fibonacci()]).unwrap();
        assert_eq!(report(&d).r.verdict, Verdict::Refuted);
    }
}
