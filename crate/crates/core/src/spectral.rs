//! Generalized right eigenvector, left-vector traces, heights and the
//! projections onto `w⊥`.

use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_2;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::directive::DirectiveSequence;
use crate::error::{Error, Result};
use crate::matrix::{Mat2, Vec2};
use crate::quadratic::{mat_apply, normalize_max, perron_pair, Quadratic};

pub const DEFAULT_PRECISION: u32 = 128;

/// A non-negative direction in ℝ², normalized to maximum norm 1.
///
/// Coordinates are kept as rationals rounded to `precision` bits; when the
/// direction is known in closed form the exact ℚ(√d) coordinates ride along.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionVec {
    coords: [BigRational; 2],
    precision: u32,
    // Absolute error bound on each coordinate.
    error: f64,
    exact: Option<[Quadratic; 2]>,
}

fn round_to_bits(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = x * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.round().to_integer(), scale)
}

fn normalize_rational(v: [BigRational; 2]) -> Result<[BigRational; 2]> {
    if v[0].is_negative() || v[1].is_negative() {
        return Err(Error::Precondition("direction must be non-negative".into()));
    }
    let big = if v[0] >= v[1] { v[0].clone() } else { v[1].clone() };
    if big.is_zero() {
        return Err(Error::Precondition("direction must be non-zero".into()));
    }
    Ok([&v[0] / &big, &v[1] / &big])
}

impl DirectionVec {
    pub fn from_f64(x: f64, y: f64) -> Result<Self> {
        let conv = |t: f64| {
            BigRational::from_float(t)
                .ok_or_else(|| Error::Precondition(format!("non-finite coordinate {t}")))
        };
        let coords = normalize_rational([conv(x)?, conv(y)?])?;
        Ok(DirectionVec {
            coords,
            precision: f64::MANTISSA_DIGITS,
            error: 4.0 * f64::EPSILON,
            exact: None,
        })
    }

    /// From exact rationals; `error` bounds how far the true direction may lie.
    pub fn from_rationals(v: [BigRational; 2], precision: u32, error: f64) -> Result<Self> {
        let [a, b] = normalize_rational(v)?;
        let rounding = 2f64.powi(-(precision as i32));
        Ok(DirectionVec {
            coords: [round_to_bits(&a, precision), round_to_bits(&b, precision)],
            precision,
            error: error + rounding,
            exact: None,
        })
    }

    pub fn from_integers(v: &Vec2, precision: u32, error: f64) -> Result<Self> {
        Self::from_rationals(
            [
                BigRational::from_integer(v.0[0].clone()),
                BigRational::from_integer(v.0[1].clone()),
            ],
            precision,
            error,
        )
    }

    pub fn from_exact(v: [Quadratic; 2], precision: u32) -> Result<Self> {
        let v = normalize_max(&v)
            .ok_or_else(|| Error::Precondition("direction must be non-negative and non-zero".into()))?;
        let coords = [v[0].to_rational(precision), v[1].to_rational(precision)];
        Ok(DirectionVec {
            coords,
            precision,
            error: 2f64.powi(-(precision as i32)),
            exact: Some(v),
        })
    }

    pub fn ones() -> Self {
        DirectionVec {
            coords: [BigRational::one(), BigRational::one()],
            precision: DEFAULT_PRECISION,
            error: 0.0,
            exact: None,
        }
    }

    pub fn coords(&self) -> &[BigRational; 2] {
        &self.coords
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn error(&self) -> f64 {
        self.error
    }

    pub fn exact(&self) -> Option<&[Quadratic; 2]> {
        self.exact.as_ref()
    }

    pub fn to_f64(&self) -> [f64; 2] {
        match &self.exact {
            Some(e) => [e[0].to_f64(), e[1].to_f64()],
            None => [
                self.coords[0].to_f64().unwrap_or(f64::NAN),
                self.coords[1].to_f64().unwrap_or(f64::NAN),
            ],
        }
    }

    /// `u_1 / (u_1 + u_2)`, the first coordinate after scaling `⟨u, 1⟩ = 1`.
    pub fn u1_prime(&self) -> f64 {
        if let Some(e) = &self.exact {
            return (&e[0] / &(&e[0] + &e[1])).to_f64();
        }
        let sum = &self.coords[0] + &self.coords[1];
        (&self.coords[0] / sum).to_f64().unwrap_or(f64::NAN)
    }

    /// Ratio of the smaller coordinate to the larger one (the other is 1).
    fn minor_ratio(&self) -> BigRational {
        if self.coords[0] >= self.coords[1] {
            self.coords[1].clone()
        } else {
            self.coords[0].clone()
        }
    }
}

impl Serialize for DirectionVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DirectionVec", 4)?;
        st.serialize_field("float", &self.to_f64())?;
        st.serialize_field(
            "exact",
            &self.exact.as_ref().map(|e| [e[0].to_string(), e[1].to_string()]),
        )?;
        st.serialize_field("precision_bits", &self.precision)?;
        st.serialize_field("error_bound", &self.error)?;
        st.end()
    }
}

/// Angle between two vectors, `atan2(|a × b|, a · b)`.
pub fn angle(a: [f64; 2], b: [f64; 2]) -> f64 {
    let cross = a[0] * b[1] - a[1] * b[0];
    let dot = a[0] * b[0] + a[1] * b[1];
    cross.abs().atan2(dot)
}

fn angle_rational(a: &[BigRational; 2], b: &[BigRational; 2]) -> f64 {
    let cross = &a[0] * &b[1] - &a[1] * &b[0];
    if cross.is_zero() {
        return 0.0;
    }
    let dot = &a[0] * &b[0] + &a[1] * &b[1];
    let cross = cross.abs().to_f64().unwrap_or(f64::NAN);
    let dot = dot.to_f64().unwrap_or(f64::NAN);
    cross.atan2(dot)
}

fn column_direction(m: &Mat2, j: usize) -> Result<[BigRational; 2]> {
    normalize_rational([
        BigRational::from_integer(m.get(0, j).clone()),
        BigRational::from_integer(m.get(1, j).clone()),
    ])
}

/// Angle between the two column directions of `M_[0,n)`.
pub fn cone_angle(d: &DirectiveSequence, n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(FRAC_PI_2);
    }
    let m = d.product_matrix(0, n)?;
    Ok(angle_rational(&column_direction(&m, 0)?, &column_direction(&m, 1)?))
}

#[derive(Debug, Clone, Serialize)]
pub struct RightEigen {
    /// From the contracted cone: the direction of the column sum of `M_[0,n)`.
    pub iterated: DirectionVec,
    /// Perron direction of the cycle product pushed through the preperiod.
    pub exact: Option<DirectionVec>,
    pub depth: usize,
    pub cone_angle: f64,
}

impl RightEigen {
    /// The exact direction when available, else the iterated one.
    pub fn best(&self) -> &DirectionVec {
        self.exact.as_ref().unwrap_or(&self.iterated)
    }
}

/// Generalized right eigenvector: the common direction of the nested cones
/// `M_[0,n) ℝ²₊`, found once their angle drops below `tol`.
pub fn right_eigenvector(
    d: &DirectiveSequence,
    depth: usize,
    tol: f64,
    precision: u32,
) -> Result<RightEigen> {
    let mut seen_positive = false;
    for n in 1..=depth {
        let m = d.product_matrix(0, n)?;
        if !m.is_positive() {
            continue;
        }
        seen_positive = true;
        let last_angle = cone_angle(d, n)?;
        if last_angle < tol {
            let sum = &m.column(0) + &m.column(1);
            // The cone has width `last_angle`; each coordinate is off by at most that.
            let iterated = DirectionVec::from_integers(&sum, precision, last_angle)?;
            return Ok(RightEigen {
                iterated,
                exact: exact_right_eigenvector(d, precision)?,
                depth: n,
                cone_angle: last_angle,
            });
        }
    }
    if seen_positive || depth == 0 {
        Err(Error::NotContracted(depth))
    } else {
        Err(Error::NotPrimitive(depth))
    }
}

/// Closed-form right eigenvector for (eventually) periodic sequences with a
/// primitive cycle product.
pub fn exact_right_eigenvector(d: &DirectiveSequence, precision: u32) -> Result<Option<DirectionVec>> {
    let Some(p) = d.period() else {
        return Ok(None);
    };
    let q = d.preperiod_len();
    let cycle = d.product_matrix(q, q + p)?;
    if !(&cycle * &cycle).is_positive() {
        return Ok(None);
    }
    let Some((_, tail)) = perron_pair(&cycle) else {
        return Ok(None);
    };
    let head = d.product_matrix(0, q)?;
    let v = mat_apply(&head, &tail);
    DirectionVec::from_exact(v, precision).map(Some)
}

/// Perron direction of `ᵗB`, the default left vector when a positive block is known.
pub fn left_perron(b: &Mat2, precision: u32) -> Option<DirectionVec> {
    let (_, v) = perron_pair(&b.transpose())?;
    DirectionVec::from_exact(v, precision).ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Independence {
    Independent,
    Dependent { ratio: String },
    /// No small-denominator rational fits within the stated precision.
    UnknownLeaningIndependent { checked_depth: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct IndependenceReport {
    pub verdict: Independence,
    /// Set when the window is algebraically irreducible and balanced, in which
    /// case the coordinates are independent regardless of the numeric verdict.
    pub implied_by_hypotheses: bool,
}

pub const DEFAULT_PARTIAL_QUOTIENT_CAP: usize = 40;

/// Decides whether `u_1 : u_2` is rational.
///
/// Exact directions are settled symbolically. Otherwise the continued
/// fraction of the stored ratio is expanded; a convergent `p/q` within the
/// error bound with `q³·ε ≤ 1` is reported as the rational value.
pub fn rational_independence(u: &DirectionVec, cap: usize) -> Independence {
    if let Some(e) = u.exact() {
        let (small, big) = match (&e[0] - &e[1]).signum() {
            Ordering::Less => (&e[0], &e[1]),
            _ => (&e[1], &e[0]),
        };
        let ratio = small / big;
        return match ratio.as_rational() {
            Some(r) => Independence::Dependent { ratio: r.to_string() },
            None => Independence::Independent,
        };
    }
    let x = u.minor_ratio();
    let eps = BigRational::from_float(u.error().max(f64::MIN_POSITIVE)).expect("finite error bound");
    classify_ratio(&x, &eps, cap)
}

pub(crate) fn classify_ratio(x: &BigRational, eps: &BigRational, cap: usize) -> Independence {
    // Convergents h/k of the continued fraction of x.
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    for depth in 0..cap {
        let a = rest.floor().to_integer();
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let conv = BigRational::new(h.clone(), k.clone());
        let err = (x - &conv).abs();
        if &err <= eps {
            let kq = BigRational::from_integer(&k * &k * &k);
            if kq * eps <= BigRational::one() {
                return Independence::Dependent { ratio: conv.to_string() };
            }
            return Independence::UnknownLeaningIndependent { checked_depth: depth + 1 };
        }
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    Independence::UnknownLeaningIndependent { checked_depth: cap }
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceEntry {
    pub n: usize,
    pub vector: [f64; 2],
    pub angle: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LeftVecTrace {
    pub v: DirectionVec,
    pub entries: Vec<TraceEntry>,
}

impl LeftVecTrace {
    pub fn last_angle(&self) -> Option<f64> {
        self.entries.last().map(|e| e.angle)
    }
}

/// Normalized `ᵗ(M_[0,n)) v` for each `n` in `indices`, with the angle to `v`.
pub fn left_vector_trace(d: &DirectiveSequence, v: &DirectionVec, indices: &[usize]) -> Result<LeftVecTrace> {
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidWindow("trace indices must be strictly increasing".into()));
    }
    let mut entries = Vec::with_capacity(indices.len());
    for &n in indices {
        let mt = d.product_matrix(0, n)?.transpose();
        let entry = match v.exact() {
            Some(e) => {
                let w = normalize_max(&mat_apply(&mt, e))
                    .ok_or_else(|| Error::Precondition("left vector collapsed to zero".into()))?;
                let cross = &(&w[0] * &e[1]) - &(&w[1] * &e[0]);
                let vec = [w[0].to_f64(), w[1].to_f64()];
                let ang = if cross.is_zero() { 0.0 } else { angle(vec, v.to_f64()) };
                TraceEntry { n, vector: vec, angle: ang }
            }
            None => {
                let c = v.coords();
                let img = [
                    BigRational::from_integer(mt.get(0, 0).clone()) * &c[0]
                        + BigRational::from_integer(mt.get(0, 1).clone()) * &c[1],
                    BigRational::from_integer(mt.get(1, 0).clone()) * &c[0]
                        + BigRational::from_integer(mt.get(1, 1).clone()) * &c[1],
                ];
                let w = normalize_rational(img)?;
                let ang = angle_rational(&w, c);
                let vec = [w[0].to_f64().unwrap_or(f64::NAN), w[1].to_f64().unwrap_or(f64::NAN)];
                TraceEntry { n, vector: vec, angle: ang }
            }
        };
        entries.push(entry);
    }
    Ok(LeftVecTrace { v: v.clone(), entries })
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Height `H(x) = ⟨x, w⟩ / ⟨u, w⟩`: the `u`-coefficient of `x = H(x)·u + π_{u,w} x`.
pub fn height(x: [f64; 2], u: [f64; 2], w: [f64; 2]) -> Result<f64> {
    let uw = dot(u, w);
    let scale = (u[0].abs() + u[1].abs()) * (w[0].abs() + w[1].abs());
    if uw == 0.0 || uw.abs() <= 1e-15 * scale {
        return Err(Error::Orthogonal);
    }
    Ok(dot(x, w) / uw)
}

/// Projection along `u` onto `w⊥`: `x − H(x)·u`.
pub fn project(x: [f64; 2], u: [f64; 2], w: [f64; 2]) -> Result<[f64; 2]> {
    let h = height(x, u, w)?;
    Ok([x[0] - h * u[0], x[1] - h * u[1]])
}

pub const ON_LINE_TOLERANCE: f64 = 1e-9;

/// First coordinate of a point `(x, −x)` of `1⊥`.
pub fn pi0(x: [f64; 2]) -> Result<f64> {
    let scale = 1f64.max(x[0].abs()).max(x[1].abs());
    if (x[0] + x[1]).abs() > ON_LINE_TOLERANCE * scale {
        return Err(Error::NotOnLine(x[0], x[1]));
    }
    Ok(x[0])
}

/// `π_0(π_{u,1} l(p))` for a prefix with letter counts `(a, b)`: `a − (a+b)·u₁′`.
#[inline]
pub fn pi0_of_counts(counts: [u64; 2], u1_prime: f64) -> f64 {
    counts[0] as f64 - (counts[0] + counts[1]) as f64 * u1_prime
}

/// Reduces a rational vector to coprime integers; used in reports.
pub fn primitive_integer_vector(v: &Vec2) -> Vec2 {
    let g = v.0[0].gcd(&v.0[1]);
    if g.is_zero() {
        return v.clone();
    }
    Vec2([&v.0[0] / &g, &v.0[1] / &g])
}
