//! Limit-word prefixes, factor languages `L^(m)` and balance certificates.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::directive::DirectiveSequence;
use crate::error::{Error, Result};
use crate::word::{composite_image, composite_image_len, ImageIter, Letter, Word};

/// Depth cap for limit-word iteration on infinite sequences.
pub const DEFAULT_LIMIT_DEPTH: usize = 1024;
/// Largest image materialized while generating factors.
pub const MAX_IMAGE_LEN: u64 = 1 << 22;

fn image_prefix(d: &DirectiveSequence, a: Letter, n: usize, len: usize) -> Result<Vec<Letter>> {
    let seg = d.segment(0, n)?;
    Ok(ImageIter::new(&seg, a).take(len).collect())
}

/// Length-`len` prefix of the limit word of `D` seeded at `a`, i.e. the
/// common prefix of `σ_[0,n)(a)` for all large `n` along the period.
///
/// Periodic sequences are sampled every `2p` steps so that limit points of
/// period two (alternating first letters) still converge.
pub fn limit_word_prefix(d: &DirectiveSequence, a: Letter, len: usize) -> Result<Word> {
    limit_word_prefix_with_depth(d, a, len, DEFAULT_LIMIT_DEPTH)
}

pub fn limit_word_prefix_with_depth(
    d: &DirectiveSequence,
    a: Letter,
    len: usize,
    max_depth: usize,
) -> Result<Word> {
    if len == 0 {
        return Ok(Word::empty());
    }
    let (start, stride, last) = match (d.period(), d.horizon()) {
        (Some(p), _) => (d.preperiod_len().max(1), 2 * p, max_depth),
        (None, Some(h)) => (1, 1, h),
        (None, None) => unreachable!("finite windows carry a horizon"),
    };
    let long_enough = |n: usize| -> Result<bool> {
        Ok(composite_image_len(&d.segment(0, n)?, a) >= len as u64)
    };
    let mut n = start;
    while n + stride <= last {
        if long_enough(n)? {
            let here = image_prefix(d, a, n, len)?;
            let there = image_prefix(d, a, n + stride, len)?;
            if here == there {
                return Ok(Word::new(here));
            }
        }
        n += stride;
    }
    match d.horizon() {
        Some(h) if d.period().is_none() => Err(Error::HorizonExceeded {
            requested: h + 1,
            horizon: h,
        }),
        _ => Err(Error::NonStabilizing {
            wanted: len,
            depth: max_depth,
        }),
    }
}

/// Factors of `L^(m)` up to length `max_len`.
///
/// Stored as the set of maximal windows: every length-`max_len` factor of a
/// generating image, plus whole images shorter than that. All shorter factors
/// are factors of these.
#[derive(Debug, Clone, Serialize)]
pub struct FactorSet {
    pub shift: usize,
    pub max_len: usize,
    /// Generating depth `n` reached: images `σ_[m,n)(i)` were used.
    pub depth: usize,
    pub saturated: bool,
    #[serde(skip)]
    windows: BTreeSet<Word>,
}

impl FactorSet {
    pub fn of_length(&self, n: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        if n == 0 || n > self.max_len {
            return out;
        }
        for w in &self.windows {
            for f in w.letters().windows(n) {
                out.insert(Word::new(f.to_vec()));
            }
        }
        out
    }

    pub fn count(&self, n: usize) -> usize {
        self.of_length(n).len()
    }

    pub fn contains(&self, w: &Word) -> bool {
        if w.is_empty() {
            return true;
        }
        w.len() <= self.max_len
            && self
                .windows
                .iter()
                .any(|x| x.letters().windows(w.len()).any(|f| f == w.letters()))
    }

    /// All members of length `1..=max_len`.
    pub fn all(&self) -> BTreeSet<Word> {
        (1..=self.max_len).flat_map(|n| self.of_length(n)).collect()
    }

    pub fn windows(&self) -> &BTreeSet<Word> {
        &self.windows
    }
}

/// Generates `L^(m)` up to length `max_len` from the images `σ_[m,n)(i)`.
///
/// Saturated once no new factor has appeared for `max(2, p)` consecutive
/// depths (`p` the period, 1 for finite windows) and both images are at least
/// `max_len` long.
pub fn factors(d: &DirectiveSequence, m: usize, max_len: usize) -> Result<FactorSet> {
    factors_with_depth(d, m, max_len, DEFAULT_LIMIT_DEPTH)
}

pub fn factors_with_depth(
    d: &DirectiveSequence,
    m: usize,
    max_len: usize,
    max_depth: usize,
) -> Result<FactorSet> {
    let mut windows = BTreeSet::new();
    let mut set = FactorSet {
        shift: m,
        max_len,
        depth: m,
        saturated: max_len == 0,
        windows: BTreeSet::new(),
    };
    if max_len == 0 {
        return Ok(set);
    }
    let needed = d.period().unwrap_or(1).max(2);
    let last = match d.horizon() {
        Some(h) => {
            d.check_horizon(m)?;
            h
        }
        None => m + max_depth,
    };
    let mut quiet = 0;
    for n in m + 1..=last {
        let seg = d.segment(m, n)?;
        let lens = Letter::ALL.map(|a| composite_image_len(&seg, a));
        if lens.iter().any(|&l| l > MAX_IMAGE_LEN) {
            break;
        }
        let mut fresh = false;
        for a in Letter::ALL {
            let img = composite_image(&seg, a);
            if img.len() < max_len {
                fresh |= windows.insert(img);
            } else {
                for w in img.letters().windows(max_len) {
                    if !windows.contains(w) {
                        windows.insert(Word::new(w.to_vec()));
                        fresh = true;
                    }
                }
            }
        }
        set.depth = n;
        let long = lens.iter().all(|&l| l >= max_len as u64);
        quiet = if fresh || !long { 0 } else { quiet + 1 };
        if quiet >= needed {
            set.saturated = true;
            break;
        }
    }
    // Short images that are factors of long windows add nothing.
    let long: Vec<Word> = windows.iter().filter(|w| w.len() == max_len).cloned().collect();
    windows.retain(|w| {
        w.len() == max_len
            || !long
                .iter()
                .any(|x| x.letters().windows(w.len()).any(|f| f == w.letters()))
    });
    set.windows = windows;
    Ok(set)
}

/// Distinct factors of `w` of each length `1..=max_len`, by sliding windows.
pub fn factors_from_prefix(w: &Word, max_len: usize) -> Vec<BTreeSet<Word>> {
    (1..=max_len)
        .map(|n| {
            w.letters()
                .windows(n)
                .map(|f| Word::new(f.to_vec()))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LengthExtremes {
    pub len: usize,
    pub min_ones: u64,
    pub max_ones: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BalanceStatus {
    CertifiedUpToL,
    /// Factors were not saturated; the extremes are lower bounds only.
    Unknown,
    /// The spread exceeds the requested bound.
    Refuted { bound: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct BalanceCertificate {
    #[serde(rename = "C")]
    pub c: u64,
    #[serde(rename = "L")]
    pub max_len: usize,
    pub shift: usize,
    pub depth: usize,
    pub status: BalanceStatus,
    /// Two factors of equal length whose `|·|₁` differ by `C`.
    pub witness: Option<(Word, Word)>,
    pub per_length: Vec<LengthExtremes>,
}

impl BalanceCertificate {
    pub fn is_certified(&self) -> bool {
        self.status == BalanceStatus::CertifiedUpToL
    }
}

/// Smallest `C` such that `L^(m)` is `C`-balanced on lengths `≤ max_len`.
///
/// On two letters `|u|₂ − |v|₂ = −(|u|₁ − |v|₁)`, so the per-length spread of
/// `|w|₁` decides balance.
pub fn balance(d: &DirectiveSequence, m: usize, max_len: usize, bound: Option<u64>) -> Result<BalanceCertificate> {
    let fs = factors(d, m, max_len)?;
    Ok(balance_of(&fs, bound))
}

pub fn balance_of(fs: &FactorSet, bound: Option<u64>) -> BalanceCertificate {
    let n = fs.max_len;
    // (min, max, where min attained, where max attained) per length.
    let mut ext: Vec<Option<(u64, u64, (usize, usize), (usize, usize))>> = vec![None; n + 1];
    let windows: Vec<&Word> = fs.windows.iter().collect();
    for (wi, w) in windows.iter().enumerate() {
        let mut ps = Vec::with_capacity(w.len() + 1);
        ps.push(0u64);
        for a in w.letters() {
            ps.push(ps.last().copied().unwrap_or(0) + u64::from(*a == Letter::One));
        }
        for len in 1..=w.len() {
            let slot = &mut ext[len];
            for s in 0..=w.len() - len {
                let ones = ps[s + len] - ps[s];
                match slot {
                    None => *slot = Some((ones, ones, (wi, s), (wi, s))),
                    Some((lo, hi, at_lo, at_hi)) => {
                        if ones < *lo {
                            *lo = ones;
                            *at_lo = (wi, s);
                        }
                        if ones > *hi {
                            *hi = ones;
                            *at_hi = (wi, s);
                        }
                    }
                }
            }
        }
    }
    let mut per_length = Vec::new();
    let mut c = 0;
    let mut witness = None;
    for (len, e) in ext.iter().enumerate().skip(1) {
        let Some((lo, hi, at_lo, at_hi)) = *e else {
            continue;
        };
        per_length.push(LengthExtremes { len, min_ones: lo, max_ones: hi });
        if hi - lo > c {
            c = hi - lo;
            let cut = |(wi, s): (usize, usize)| Word::new(windows[wi].letters()[s..s + len].to_vec());
            witness = Some((cut(at_hi), cut(at_lo)));
        }
    }
    let status = match bound {
        Some(b) if c > b => BalanceStatus::Refuted { bound: b },
        _ if !fs.saturated => BalanceStatus::Unknown,
        _ => BalanceStatus::CertifiedUpToL,
    };
    BalanceCertificate {
        c,
        max_len: n,
        shift: fs.shift,
        depth: fs.depth,
        status,
        witness,
        per_length,
    }
}
