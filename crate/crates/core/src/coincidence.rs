//! Geometric substitutions `E₁`, the strong coincidence test, and an
//! explorer for configurations of segments cut by a moving line.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::directive::DirectiveSequence;
use crate::error::{Error, Result};
use crate::spectral::height;
use crate::word::{ImageIter, Letter, Substitution, Word};

/// `[x, i]`, the half-open unit segment `x + [0,1) e_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GeomSegment {
    pub x: [i64; 2],
    pub i: Letter,
}

impl GeomSegment {
    pub fn new(x: [i64; 2], i: Letter) -> Self {
        GeomSegment { x, i }
    }

    pub fn origin(i: Letter) -> Self {
        GeomSegment { x: [0, 0], i }
    }

    /// `x + e_i`.
    pub fn end(&self) -> Result<[i64; 2]> {
        let mut e = self.x;
        e[self.i.index()] = e[self.i.index()]
            .checked_add(1)
            .ok_or(Error::Overflow("segment endpoint"))?;
        Ok(e)
    }

    pub fn translate(&self, t: [i64; 2]) -> Result<Self> {
        Ok(GeomSegment {
            x: [
                self.x[0].checked_add(t[0]).ok_or(Error::Overflow("translation"))?,
                self.x[1].checked_add(t[1]).ok_or(Error::Overflow("translation"))?,
            ],
            i: self.i,
        })
    }
}

fn small_matrix(s: &Substitution) -> Result<[[i64; 2]; 2]> {
    s.incidence().to_i64().ok_or(Error::Overflow("incidence matrix"))
}

fn mul_vec(m: &[[i64; 2]; 2], x: [i64; 2]) -> Result<[i64; 2]> {
    let row = |r: usize| -> Option<i64> { m[r][0].checked_mul(x[0])?.checked_add(m[r][1].checked_mul(x[1])?) };
    Ok([
        row(0).ok_or(Error::Overflow("E1 image"))?,
        row(1).ok_or(Error::Overflow("E1 image"))?,
    ])
}

/// `E₁(σ)[x, i] = {[M_σ x + l(p), j] : pj prefix of σ(i)}`, in the order of
/// the letters of `σ(i)`, so consecutive elements chain into a broken line.
pub fn e1_image(s: &Substitution, seg: &GeomSegment) -> Result<Vec<GeomSegment>> {
    let m = small_matrix(s)?;
    let mut pos = mul_vec(&m, seg.x)?;
    let mut out = Vec::with_capacity(s.image(seg.i).len());
    for &j in s.image(seg.i).letters() {
        out.push(GeomSegment { x: pos, i: j });
        pos[j.index()] = pos[j.index()].checked_add(1).ok_or(Error::Overflow("E1 image"))?;
    }
    Ok(out)
}

/// Largest broken line materialized by the explicit `E₁` iterates.
pub const MAX_BROKEN_LINE: usize = 1 << 22;

/// `E₁(σ_0 ⋯ σ_{n-1})[x, i] = E₁(σ_0) ⋯ E₁(σ_{n-1})[x, i]`, as an ordered broken line.
pub fn e1_image_composite(subs: &[Substitution], seg: &GeomSegment) -> Result<Vec<GeomSegment>> {
    let mut line = vec![*seg];
    for s in subs.iter().rev() {
        let grown: usize = line.iter().map(|g| s.image(g.i).len()).sum();
        if grown > MAX_BROKEN_LINE {
            return Err(Error::Precondition(format!(
                "broken line of {grown} segments exceeds {MAX_BROKEN_LINE}"
            )));
        }
        let mut next = Vec::with_capacity(grown);
        for g in &line {
            next.extend(e1_image(s, g)?);
        }
        line = next;
    }
    Ok(line)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoincidenceWitness {
    pub n: usize,
    /// Common length of the two prefixes.
    pub position: u64,
    /// `l(p₁) = l(p₂)`.
    pub counts: [u64; 2],
    pub letter: Letter,
    /// The common element `[l(p), j]` of both `E₁` images.
    pub segment: GeomSegment,
    /// The prefixes themselves when short enough to print.
    pub prefix1: Option<Word>,
    pub prefix2: Option<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CoincidenceVerdict {
    CoincidentAt {
        n: usize,
        witness: CoincidenceWitness,
        /// Every coincident `n ≤ cap`, when requested.
        #[serde(skip_serializing_if = "Option::is_none")]
        all: Option<Vec<usize>>,
    },
    NoneUpTo {
        cap: usize,
    },
}

impl CoincidenceVerdict {
    pub fn least(&self) -> Option<usize> {
        match self {
            CoincidenceVerdict::CoincidentAt { n, .. } => Some(*n),
            CoincidenceVerdict::NoneUpTo { .. } => None,
        }
    }
}

/// Longest prefix printed in a witness.
const WITNESS_PREFIX_MAX: u64 = 64;
/// Longest image pair scanned per `n`.
pub const MAX_COINCIDENCE_SCAN: u64 = 1 << 28;

/// First position where `σ_[0,n)(1)` and `σ_[0,n)(2)` have prefixes with
/// equal abelianization followed by the same letter.
///
/// Equal abelianization forces equal length, so the two images are streamed
/// side by side and only the difference of `|·|₁` is tracked.
pub fn coincidence_at(subs: &[Substitution]) -> Result<Option<CoincidenceWitness>> {
    let mut a = ImageIter::new(subs, Letter::One);
    let mut b = ImageIter::new(subs, Letter::Two);
    let mut ones = [0u64; 2];
    let mut t = 0u64;
    while let (Some(x), Some(y)) = (a.next(), b.next()) {
        if ones[0] == ones[1] && x == y {
            let counts = [ones[0], t - ones[0]];
            let short = (t <= WITNESS_PREFIX_MAX).then(|| {
                let p: Vec<Letter> = ImageIter::new(subs, Letter::One).take(t as usize).collect();
                Word::new(p)
            });
            let short2 = (t <= WITNESS_PREFIX_MAX).then(|| {
                let p: Vec<Letter> = ImageIter::new(subs, Letter::Two).take(t as usize).collect();
                Word::new(p)
            });
            let xi = |c: u64| i64::try_from(c).map_err(|_| Error::Overflow("witness position"));
            return Ok(Some(CoincidenceWitness {
                n: subs.len(),
                position: t,
                counts,
                letter: x,
                segment: GeomSegment::new([xi(counts[0])?, xi(counts[1])?], x),
                prefix1: short,
                prefix2: short2,
            }));
        }
        ones[0] += u64::from(x == Letter::One);
        ones[1] += u64::from(y == Letter::One);
        t += 1;
        if t > MAX_COINCIDENCE_SCAN {
            return Err(Error::Precondition(format!(
                "images of depth {} exceed {MAX_COINCIDENCE_SCAN} letters",
                subs.len()
            )));
        }
    }
    Ok(None)
}

/// Least `n ≤ cap` with `E₁(σ_[0,n))[0,1] ∩ E₁(σ_[0,n))[0,2] ≠ ∅`.
pub fn strong_coincidence(d: &DirectiveSequence, cap: usize, all: bool) -> Result<CoincidenceVerdict> {
    d.check_horizon(cap)?;
    let mut first: Option<CoincidenceWitness> = None;
    let mut hits = Vec::new();
    for n in 1..=cap {
        let seg = d.segment(0, n)?;
        if let Some(w) = coincidence_at(&seg)? {
            hits.push(n);
            first.get_or_insert(w);
            if !all {
                break;
            }
        }
    }
    Ok(match first {
        Some(witness) => CoincidenceVerdict::CoincidentAt {
            n: witness.n,
            witness,
            all: all.then_some(hits),
        },
        None => CoincidenceVerdict::NoneUpTo { cap },
    })
}

/// A segment of an iterate, tagged with the index of the segment of `K` it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TaggedSegment {
    pub segment: GeomSegment,
    pub source: usize,
}

/// `K^(n)`: the broken lines `E₁(σ_[0,n))[x,i]` for `[x,i] ∈ K`.
pub fn configuration_iterate(d: &DirectiveSequence, k: &[GeomSegment], n: usize) -> Result<Vec<TaggedSegment>> {
    let subs = d.segment(0, n)?;
    let mut out = Vec::new();
    for (source, seg) in k.iter().enumerate() {
        for segment in e1_image_composite(&subs, seg)? {
            out.push(TaggedSegment { segment, source });
        }
    }
    Ok(out)
}

fn as_f64(x: [i64; 2]) -> [f64; 2] {
    [x[0] as f64, x[1] as f64]
}

/// Open height interval `(H(x), H(x + e_i))` of a segment.
pub fn height_interval(seg: &GeomSegment, u: [f64; 2], w: [f64; 2]) -> Result<(f64, f64)> {
    let a = height(as_f64(seg.x), u, w)?;
    let b = height(as_f64(seg.end()?), u, w)?;
    Ok((a.min(b), a.max(b)))
}

/// A set of distinct segments all cut in their interior by one translate of `w⊥`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Configuration {
    pub segments: Vec<GeomSegment>,
    pub w: [f64; 2],
}

impl Configuration {
    /// Checks distinctness and that the open height intervals share a point.
    pub fn new(mut segments: Vec<GeomSegment>, u: [f64; 2], w: [f64; 2]) -> Result<Self> {
        segments.sort();
        if segments.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::Precondition("configuration segments must be distinct".into()));
        }
        if common_height(&segments, u, w)?.is_none() {
            return Err(Error::Precondition("no translate of w⊥ meets every segment".into()));
        }
        Ok(Configuration { segments, w })
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn translate(&self, t: [i64; 2]) -> Result<Self> {
        let segments = self.segments.iter().map(|s| s.translate(t)).collect::<Result<_>>()?;
        Ok(Configuration { segments, w: self.w })
    }
}

/// The open interval of heights meeting every segment, if non-empty.
pub fn common_height(segments: &[GeomSegment], u: [f64; 2], w: [f64; 2]) -> Result<Option<(f64, f64)>> {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for s in segments {
        let (a, b) = height_interval(s, u, w)?;
        lo = lo.max(a);
        hi = hi.min(b);
    }
    Ok((lo < hi).then_some((lo, hi)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StripeSlice {
    pub t: f64,
    pub configuration: Vec<GeomSegment>,
    pub sources: Vec<usize>,
    /// `t` coincides with an endpoint height of some segment.
    pub degenerate: bool,
}

/// Relative tolerance for two heights to count as equal.
pub const HEIGHT_TOLERANCE: f64 = 1e-12;

/// Segments whose interior meets the line `v⊥ + t·u`.
pub fn stripe_slice(segments: &[TaggedSegment], v: [f64; 2], u: [f64; 2], t: f64) -> Result<StripeSlice> {
    let mut configuration = Vec::new();
    let mut sources = Vec::new();
    let mut degenerate = false;
    let tol = HEIGHT_TOLERANCE * t.abs().max(1.0);
    for s in segments {
        let (a, b) = height_interval(&s.segment, u, v)?;
        if (t - a).abs() <= tol || (t - b).abs() <= tol {
            degenerate = true;
        }
        if a < t && t < b {
            configuration.push(s.segment);
            sources.push(s.source);
        }
    }
    Ok(StripeSlice {
        t,
        configuration,
        sources,
        degenerate,
    })
}

/// `T_{u,C} = {x ∈ ℤ² : ‖π_{u,1} x‖ < C + 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationDomain {
    pub u1_prime: f64,
    pub c: f64,
}

pub fn truncation_domain(u: [f64; 2], c: f64) -> Result<TruncationDomain> {
    if !(u[0] > 0.0 && u[1] > 0.0) {
        return Err(Error::Precondition("truncation domain needs a positive u".into()));
    }
    Ok(TruncationDomain {
        u1_prime: u[0] / (u[0] + u[1]),
        c,
    })
}

impl TruncationDomain {
    /// `π_{u,1} x = (y, −y)` with `y = x₁ − (x₁ + x₂) u₁′`; the max norm is `|y|`.
    pub fn norm(&self, x: [i64; 2]) -> f64 {
        x[0] as f64 - (x[0] as f64 + x[1] as f64) * self.u1_prime
    }

    pub fn contains(&self, x: [i64; 2]) -> bool {
        self.norm(x).abs() < self.c + 1.0
    }
}

/// A pair of segments of `K` whose `E₁(σ_[0,n))` images share an element.
pub fn n_coincidence(d: &DirectiveSequence, k: &[GeomSegment], n: usize) -> Result<Option<(usize, usize, GeomSegment)>> {
    let subs = d.segment(0, n)?;
    let images: Vec<HashSet<GeomSegment>> = k
        .iter()
        .map(|s| e1_image_composite(&subs, s).map(|v| v.into_iter().collect()))
        .collect::<Result<_>>()?;
    for a in 0..images.len() {
        for b in a + 1..images.len() {
            if let Some(common) = images[a].intersection(&images[b]).min() {
                return Ok(Some((a, b, *common)));
            }
        }
    }
    Ok(None)
}

/// The first `n ∈ J` at which `K` has an `n`-coincidence.
pub fn j_coincidence(d: &DirectiveSequence, k: &[GeomSegment], j: &[usize]) -> Result<Option<usize>> {
    for &n in j {
        if n_coincidence(d, k, n)?.is_some() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlicePeriod {
    pub a: usize,
    pub b: usize,
    pub translation: [i64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct ExplorerReport {
    pub n: usize,
    pub u: [f64; 2],
    pub v: [f64; 2],
    /// Heights at which every broken line of `K^(n)` is present.
    pub stripe: Option<(f64, f64)>,
    /// Vertex heights inside the stripe, increasing.
    pub vertex_heights: Vec<f64>,
    pub slices: Vec<StripeSlice>,
    /// Pairs of distinct vertices with equal heights.
    pub degenerate_heights: Vec<f64>,
    /// Least `(b, a)` with `K_{a+b} = K_a + t`, if any.
    pub period: Option<SlicePeriod>,
    #[serde(skip)]
    pub segments: Vec<TaggedSegment>,
}

/// Slices `K^(n)` at the midpoints between consecutive vertex heights.
///
/// Observational only: reports what the slices look like and whether they
/// repeat up to translation, without drawing conclusions.
pub fn explore(d: &DirectiveSequence, k: &[GeomSegment], n: usize, u: [f64; 2], v: [f64; 2]) -> Result<ExplorerReport> {
    let segments = configuration_iterate(d, k, n)?;
    let m = d.product_matrix(0, n)?;
    let m = m.to_i64().ok_or(Error::Overflow("M_[0,n)"))?;
    // Each broken line spans the heights between the images of its endpoints.
    let mut stripe = (f64::NEG_INFINITY, f64::INFINITY);
    for s in k {
        let a = height(as_f64(mul_vec(&m, s.x)?), u, v)?;
        let b = height(as_f64(mul_vec(&m, s.end()?)?), u, v)?;
        stripe.0 = stripe.0.max(a.min(b));
        stripe.1 = stripe.1.min(a.max(b));
    }
    let stripe = (stripe.0 < stripe.1).then_some(stripe);
    let mut vertices: Vec<([i64; 2], f64)> = Vec::new();
    let mut seen = HashSet::new();
    for s in &segments {
        for p in [s.segment.x, s.segment.end()?] {
            if seen.insert(p) {
                vertices.push((p, height(as_f64(p), u, v)?));
            }
        }
    }
    vertices.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let mut degenerate_heights = Vec::new();
    for w in vertices.windows(2) {
        if (w[1].1 - w[0].1).abs() <= HEIGHT_TOLERANCE * w[0].1.abs().max(1.0) {
            degenerate_heights.push(w[0].1);
        }
    }
    let mut vertex_heights: Vec<f64> = match stripe {
        Some((lo, hi)) => vertices.iter().map(|v| v.1).filter(|h| *h > lo && *h < hi).collect(),
        None => Vec::new(),
    };
    vertex_heights.dedup_by(|a, b| (*a - *b).abs() <= HEIGHT_TOLERANCE * b.abs().max(1.0));
    let mut slices = Vec::new();
    if let Some((lo, hi)) = stripe {
        let mut cuts = vec![lo];
        cuts.extend(vertex_heights.iter().copied());
        cuts.push(hi);
        for w in cuts.windows(2) {
            slices.push(stripe_slice(&segments, v, u, 0.5 * (w[0] + w[1]))?);
        }
    }
    let period = slice_period(&slices);
    Ok(ExplorerReport {
        n,
        u,
        v,
        stripe,
        vertex_heights,
        slices,
        degenerate_heights,
        period,
        segments,
    })
}

fn normalized(slice: &StripeSlice) -> Option<(Vec<GeomSegment>, [i64; 2])> {
    let base = slice.configuration.iter().min()?.x;
    let mut segs: Vec<GeomSegment> = slice
        .configuration
        .iter()
        .map(|s| GeomSegment::new([s.x[0] - base[0], s.x[1] - base[1]], s.i))
        .collect();
    segs.sort();
    Some((segs, base))
}

fn slice_period(slices: &[StripeSlice]) -> Option<SlicePeriod> {
    let shapes: Vec<Option<(Vec<GeomSegment>, [i64; 2])>> = slices.iter().map(normalized).collect();
    for b in 1..slices.len() {
        for a in 0..slices.len() - b {
            if let (Some((s1, p1)), Some((s2, p2))) = (&shapes[a], &shapes[a + b]) {
                let t = [p2[0] - p1[0], p2[1] - p1[1]];
                if s1 == s2 && t != [0, 0] {
                    return Some(SlicePeriod { a, b, translation: t });
                }
            }
        }
    }
    None
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// SVG drawing of the broken lines of `K^(n)` with the slicing lines `v⊥ + t·u`.
pub fn explorer_svg(report: &ExplorerReport) -> String {
    let pts: Vec<[i64; 2]> = report
        .segments
        .iter()
        .flat_map(|s| [s.segment.x, s.segment.end().unwrap_or(s.segment.x)])
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (0i64, 1i64, 0i64, 1i64);
    for p in &pts {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        y0 = y0.min(p[1]);
        y1 = y1.max(p[1]);
    }
    let scale = 600.0 / ((x1 - x0).max(y1 - y0).max(1) as f64);
    let pad = 20.0;
    let w = (x1 - x0) as f64 * scale + 2.0 * pad;
    let h = (y1 - y0) as f64 * scale + 2.0 * pad;
    let px = |x: f64| pad + (x - x0 as f64) * scale;
    let py = |y: f64| h - pad - (y - y0 as f64) * scale;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for slice in &report.slices {
        // Points of v⊥ + t·u: t·u + s·(v₂, −v₁).
        let (u, v) = (report.u, report.v);
        let norm = (v[0] * v[0] + v[1] * v[1]).sqrt();
        let dir = [v[1] / norm, -v[0] / norm];
        let span = ((x1 - x0).max(y1 - y0) as f64) * 2.0;
        let c = [slice.t * u[0], slice.t * u[1]];
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#bbbbbb" stroke-width="0.5"/>"##,
            px(c[0] - span * dir[0]),
            py(c[1] - span * dir[1]),
            px(c[0] + span * dir[0]),
            py(c[1] + span * dir[1]),
        );
    }
    for s in &report.segments {
        let a = as_f64(s.segment.x);
        let b = as_f64(s.segment.end().unwrap_or(s.segment.x));
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="2"/>"#,
            px(a[0]),
            py(a[1]),
            px(b[0]),
            py(b[1]),
            PALETTE[s.source % PALETTE.len()],
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> DirectiveSequence {
        DirectiveSequence::periodic(vec![Substitution::fibonacci()]).unwrap()
    }

    fn seg(x: i64, y: i64, i: u8) -> GeomSegment {
        GeomSegment::new([x, y], if i == 1 { Letter::One } else { Letter::Two })
    }

    const U: [f64; 2] = [1.0, 0.618_033_988_749_894_9];

    #[test]
    fn e1_examples() {
        let s = Substitution::fibonacci();
        assert_eq!(e1_image(&s, &seg(0, 0, 1)).unwrap(), vec![seg(0, 0, 1), seg(1, 0, 2)]);
        assert_eq!(e1_image(&s, &seg(0, 0, 2)).unwrap(), vec![seg(0, 0, 1)]);
        // M x = (3, 2) for x = (2, 1).
        assert_eq!(e1_image(&s, &seg(2, 1, 1)).unwrap(), vec![seg(3, 2, 1), seg(4, 2, 2)]);
    }

    #[test]
    fn fibonacci_coincides_immediately() {
        let v = strong_coincidence(&fib(), 10, false).unwrap();
        let CoincidenceVerdict::CoincidentAt { n, witness, .. } = v else {
            panic!("expected a coincidence");
        };
        assert_eq!(n, 1);
        assert_eq!(witness.counts, [0, 0]);
        assert_eq!(witness.letter, Letter::One);
        assert_eq!(witness.prefix1, Some(Word::empty()));
        assert_eq!(witness.prefix2, Some(Word::empty()));
    }

    #[test]
    fn thue_morse_never_coincides() {
        let tm = Substitution::from_images("12", "21").unwrap();
        let d = DirectiveSequence::periodic(vec![tm]).unwrap();
        assert_eq!(strong_coincidence(&d, 10, true).unwrap(), CoincidenceVerdict::NoneUpTo { cap: 10 });
        assert_eq!(strong_coincidence(&d, 0, false).unwrap(), CoincidenceVerdict::NoneUpTo { cap: 0 });
    }

    #[test]
    fn iterate_examples() {
        let k = [seg(0, 0, 1), seg(0, 0, 2)];
        let it = configuration_iterate(&fib(), &k, 1).unwrap();
        let got: Vec<(GeomSegment, usize)> = it.iter().map(|t| (t.segment, t.source)).collect();
        assert_eq!(got, vec![(seg(0, 0, 1), 0), (seg(1, 0, 2), 0), (seg(0, 0, 1), 1)]);
        let zero = configuration_iterate(&fib(), &k, 0).unwrap();
        assert_eq!(zero.len(), 2);
    }

    #[test]
    fn slices() {
        let one = [TaggedSegment { segment: seg(0, 0, 1), source: 0 }];
        let v = [1.0, 1.0];
        let (a, b) = height_interval(&seg(0, 0, 1), U, v).unwrap();
        let mid = stripe_slice(&one, v, U, 0.5 * (a + b)).unwrap();
        assert_eq!(mid.configuration, vec![seg(0, 0, 1)]);
        assert!(stripe_slice(&one, v, U, b + 1.0).unwrap().configuration.is_empty());

        let k = [seg(0, 0, 1), seg(0, 0, 2)];
        let it = configuration_iterate(&fib(), &k, 2).unwrap();
        // Both broken lines start with [0,1]: one tagged copy from each source.
        let slice = stripe_slice(&it, v, U, 0.2).unwrap();
        assert_eq!(slice.configuration, vec![seg(0, 0, 1), seg(0, 0, 1)]);
        assert_eq!(slice.sources, vec![0, 1]);
        assert!(!slice.degenerate);
    }

    #[test]
    fn configuration_validation() {
        let v = [1.0, 1.0];
        assert!(Configuration::new(vec![seg(0, 0, 1), seg(0, 0, 2)], U, v).is_ok());
        assert!(Configuration::new(vec![seg(0, 0, 1), seg(0, 0, 1)], U, v).is_err());
        assert!(Configuration::new(vec![seg(0, 0, 1), seg(5, 5, 2)], U, v).is_err());
    }

    #[test]
    fn truncation_examples() {
        let t = truncation_domain(U, 1.0).unwrap();
        assert!(t.contains([0, 0]));
        assert!(!t.contains([5, -5]));
        assert!(t.contains([8, 5]) && t.contains([89, 55]));
    }

    #[test]
    fn j_coincidence_is_translation_invariant() {
        let k = [seg(0, 0, 1), seg(0, 0, 2)];
        let moved: Vec<GeomSegment> = k.iter().map(|s| s.translate([1, -1]).unwrap()).collect();
        let j = [1, 2, 3];
        assert_eq!(j_coincidence(&fib(), &k, &j).unwrap(), Some(1));
        assert_eq!(j_coincidence(&fib(), &moved, &j).unwrap(), Some(1));
    }

    #[test]
    fn explorer_runs() {
        let k = [seg(0, 0, 1), seg(0, 0, 2)];
        let r = explore(&fib(), &k, 6, U, [1.0, 1.0]).unwrap();
        assert!(r.stripe.is_some());
        assert!(!r.slices.is_empty());
        assert!(r.slices.iter().all(|s| s.configuration.len() == 2));
        assert!(explorer_svg(&r).starts_with("<svg"));
    }
}
