//! Rauzy fractal approximations on the line `1⊥`, the exchange of pieces,
//! and the rotation checks.
//!
//! Points of `1⊥` are stored by their `π₀` coordinate. For a prefix `p` of a
//! limit word, `π₀(π_{u,1} l(p)) = |p|₁ − |p|·u₁′` with `u₁′ = u₁/(u₁+u₂)`.

use serde::Serialize;

use crate::directive::DirectiveSequence;
use crate::error::{Error, Result};
use crate::language::limit_word_prefix;
use crate::spectral::{pi0_of_counts, rational_independence, DirectionVec, Independence, DEFAULT_PARTIAL_QUOTIENT_CAP};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FractalPoint {
    pub pi0: f64,
    pub label: Letter,
}

/// Projected prefixes of a limit word, each labeled by the letter after it.
#[derive(Debug, Clone, Serialize)]
pub struct RauzyApprox {
    pub depth: usize,
    pub u1_prime: f64,
    pub points: Vec<FractalPoint>,
}

impl RauzyApprox {
    /// Points from the prefixes of `word` of lengths `start..word.len()`.
    pub fn from_word(word: &Word, u1_prime: f64, start: usize) -> Self {
        let mut counts = [0u64; 2];
        let mut points = Vec::with_capacity(word.len().saturating_sub(start));
        for (k, &a) in word.letters().iter().enumerate() {
            if k >= start {
                points.push(FractalPoint {
                    pi0: pi0_of_counts(counts, u1_prime),
                    label: a,
                });
            }
            counts[a.index()] += 1;
        }
        RauzyApprox {
            depth: points.len(),
            u1_prime,
            points,
        }
    }

    pub fn range(&self) -> Option<(f64, f64)> {
        let mut it = self.points.iter().map(|p| p.pi0);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x))))
    }

    /// Points outside `[−c, c]`.
    pub fn outside(&self, c: f64) -> usize {
        self.points.iter().filter(|p| p.pi0.abs() > c).count()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Precondition(format!("csv: {e}"));
        w.write_record(["index", "pi0", "label"]).map_err(io)?;
        for (i, p) in self.points.iter().enumerate() {
            w.write_record([i.to_string(), format!("{:.17e}", p.pi0), p.label.to_string()])
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Precondition(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Precondition(format!("csv: {e}")))
    }

    /// Two colored strips, one per subtile, along the `π₀` axis.
    pub fn to_svg(&self) -> String {
        let (lo, hi) = self.range().unwrap_or((-1.0, 1.0));
        let span = (hi - lo).max(1e-12);
        let width = 800.0;
        let pad = 20.0;
        let mut svg = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"120\" viewBox=\"0 0 {w} 120\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
            w = width + 2.0 * pad
        );
        for p in &self.points {
            let x = pad + (p.pi0 - lo) / span * width;
            let (y, color) = match p.label {
                Letter::One => (20.0, "#1f77b4"),
                Letter::Two => (60.0, "#d62728"),
            };
            svg.push_str(&format!(
                "<line x1=\"{x:.3}\" y1=\"{y}\" x2=\"{x:.3}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"0.3\"/>\n",
                y + 40.0
            ));
        }
        svg.push_str("</svg>\n");
        svg
    }
}

/// `π₀` of the first `depth` projected prefixes of the limit word seeded at `seed`.
pub fn fractal_points(d: &DirectiveSequence, u: &DirectionVec, depth: usize, seed: Letter) -> Result<RauzyApprox> {
    let word = limit_word_prefix(d, seed, depth)?;
    Ok(RauzyApprox::from_word(&word, u.u1_prime(), 0))
}

/// Piecewise translation `x ↦ x + π₀(π_{u,1} e_i)` on the subtile `R(i)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExchangeMap {
    pub t: [f64; 2],
}

impl ExchangeMap {
    /// `t₁ = 1 − u₁′`, `t₂ = −u₁′`.
    pub fn new(u1_prime: f64) -> Self {
        ExchangeMap {
            t: [1.0 - u1_prime, -u1_prime],
        }
    }

    pub fn from_direction(u: &DirectionVec) -> Self {
        Self::new(u.u1_prime())
    }
}

pub fn exchange(map: &ExchangeMap, x: f64, label: Letter) -> f64 {
    x + map.t[label.index()]
}

/// Labels points of `R` by the nearest point of a reference approximation.
struct Classifier {
    xs: Vec<f64>,
    labels: Vec<Letter>,
}

impl Classifier {
    fn new(approx: &RauzyApprox) -> Result<Self> {
        if approx.points.is_empty() {
            return Err(Error::Precondition("empty fractal approximation".into()));
        }
        let mut pts = approx.points.clone();
        pts.sort_by(|a, b| a.pi0.total_cmp(&b.pi0));
        Ok(Classifier {
            xs: pts.iter().map(|p| p.pi0).collect(),
            labels: pts.iter().map(|p| p.label).collect(),
        })
    }

    fn label(&self, x: f64) -> Letter {
        let i = self.xs.partition_point(|&y| y < x);
        let pick = match (i.checked_sub(1), (i < self.xs.len()).then_some(i)) {
            (Some(a), Some(b)) => {
                if x - self.xs[a] <= self.xs[b] - x {
                    a
                } else {
                    b
                }
            }
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!("classifier is non-empty"),
        };
        self.labels[pick]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport {
    pub steps: usize,
    pub classifier_points: usize,
    pub map: ExchangeMap,
    pub mismatches: usize,
    pub first_mismatch: Option<usize>,
    /// Up to the first 32 mismatch positions.
    pub positions: Vec<usize>,
    /// Length of the longest run of one label along the orbit.
    pub longest_run: usize,
}

impl OrbitReport {
    /// Whether both labels occur in every window of `len` consecutive steps.
    pub fn both_labels_within(&self, len: usize) -> bool {
        self.longest_run < len
    }
}

/// Runs the exchange of pieces from `φ(ω) = 0` and compares the subtile of
/// the `n`-th iterate with the `n`-th letter of the limit word.
///
/// Subtiles are read off the projected prefixes of lengths
/// `steps..steps + classifier_depth`, none of which lies on the orbit being
/// checked. `map` overrides the translations (e.g. with a perturbed angle).
pub fn orbit_vs_shift(
    d: &DirectiveSequence,
    u: &DirectionVec,
    steps: usize,
    classifier_depth: usize,
    map: Option<ExchangeMap>,
) -> Result<OrbitReport> {
    let u1p = u.u1_prime();
    let word = limit_word_prefix(d, Letter::One, steps + classifier_depth)?;
    let classifier = Classifier::new(&RauzyApprox::from_word(&word, u1p, steps))?;
    let map = map.unwrap_or_else(|| ExchangeMap::new(u1p));
    let mut x = 0.0;
    let mut mismatches = 0;
    let mut positions = Vec::new();
    let (mut run, mut longest_run, mut prev) = (0, 0, None);
    for (n, &expected) in word.letters()[..steps].iter().enumerate() {
        let label = classifier.label(x);
        if label != expected {
            mismatches += 1;
            if positions.len() < 32 {
                positions.push(n);
            }
        }
        run = if prev == Some(label) { run + 1 } else { 1 };
        longest_run = longest_run.max(run);
        prev = Some(label);
        x = exchange(&map, x, label);
    }
    Ok(OrbitReport {
        steps,
        classifier_points: classifier.xs.len(),
        map,
        mismatches,
        first_mismatch: positions.first().copied(),
        positions,
        longest_run,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RotationFactor {
    /// `π₀(π_{u,1} e₁) mod 1 = (1 − u₁′) mod 1`.
    pub angle: f64,
    pub rational: bool,
    pub translations: [f64; 2],
    /// `|t₁ mod 1 − t₂ mod 1|`, zero up to rounding.
    pub congruence_defect: f64,
}

pub fn rotation_factor(u: &DirectionVec) -> RotationFactor {
    let map = ExchangeMap::from_direction(u);
    let angle = map.t[0].rem_euclid(1.0);
    let t2 = map.t[1].rem_euclid(1.0);
    let defect = (angle - t2).abs();
    let rational = matches!(
        rational_independence(u, DEFAULT_PARTIAL_QUOTIENT_CAP),
        Independence::Dependent { .. }
    );
    RotationFactor {
        angle,
        rational,
        translations: map.t,
        congruence_defect: defect.min(1.0 - defect),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OverlapEstimate {
    pub bin_width: f64,
    pub bins: usize,
    pub occupied_bins: usize,
    pub mixed_bins: usize,
    /// `mixed_bins · bin_width`.
    pub measure: f64,
    /// Points outside `[−C, C]`, not binned.
    pub outside: usize,
}

/// Bins `[−c, c]` and measures the bins holding points of both subtiles.
pub fn subtile_overlap(approx: &RauzyApprox, bin_width: f64, c: f64) -> Result<OverlapEstimate> {
    if !(bin_width > 0.0) || !(c > 0.0) {
        return Err(Error::Precondition("bin width and C must be positive".into()));
    }
    let bins = (2.0 * c / bin_width).ceil() as usize;
    let mut seen = vec![[false; 2]; bins];
    let mut outside = 0;
    for p in &approx.points {
        if p.pi0.abs() > c {
            outside += 1;
            continue;
        }
        let b = (((p.pi0 + c) / bin_width) as usize).min(bins - 1);
        seen[b][p.label.index()] = true;
    }
    let occupied_bins = seen.iter().filter(|s| s[0] || s[1]).count();
    let mixed_bins = seen.iter().filter(|s| s[0] && s[1]).count();
    Ok(OverlapEstimate {
        bin_width,
        bins,
        occupied_bins,
        mixed_bins,
        measure: mixed_bins as f64 * bin_width,
        outside,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ZWalk {
    pub z: Vec<i64>,
    /// Steps with `|z_{n+1} − z_n| > 1`.
    pub step_violations: Vec<usize>,
    /// Indices with `|z_n| > C`.
    pub bound_violations: Vec<usize>,
    /// Largest distance of the real `π₀` difference from its integer rounding.
    pub residual: f64,
    pub sign_changes: usize,
    /// First `n` with `z_n = 0` after the walk has changed sign.
    pub zero_after_sign_change: Option<usize>,
}

/// `z_n = π₀(π_{u,1}(l(u_[0,n)) − l(v_[0,n))))`, which is the integer
/// `|u_[0,n)|₁ − |v_[0,n)|₁` since the lengths agree.
pub fn zwalk(a: &Word, b: &Word, u: &DirectionVec, steps: usize, c: i64) -> Result<ZWalk> {
    for w in [a, b] {
        if w.len() < steps {
            return Err(Error::Length {
                needed: steps,
                got: w.len(),
            });
        }
    }
    let u1p = u.u1_prime();
    let mut ca = [0u64; 2];
    let mut cb = [0u64; 2];
    let mut z = Vec::with_capacity(steps + 1);
    let mut residual: f64 = 0.0;
    for n in 0..=steps {
        let real = pi0_of_counts(ca, u1p) - pi0_of_counts(cb, u1p);
        let zn = real.round() as i64;
        residual = residual.max((real - zn as f64).abs());
        z.push(zn);
        if n < steps {
            ca[a.letters()[n].index()] += 1;
            cb[b.letters()[n].index()] += 1;
        }
    }
    let step_violations = (0..steps).filter(|&n| (z[n + 1] - z[n]).abs() > 1).collect();
    let bound_violations = (0..=steps).filter(|&n| z[n].abs() > c).collect();
    let mut sign_changes = 0;
    let mut zero_after_sign_change = None;
    let mut last_sign = 0;
    for (n, &zn) in z.iter().enumerate() {
        let s = zn.signum();
        if s != 0 {
            if last_sign != 0 && s != last_sign {
                sign_changes += 1;
            }
            last_sign = s;
        } else if sign_changes > 0 && zero_after_sign_change.is_none() {
            zero_after_sign_change = Some(n);
        }
    }
    Ok(ZWalk {
        z,
        step_violations,
        bound_violations,
        residual,
        sign_changes,
        zero_after_sign_change,
    })
}
