//! Exact arithmetic in ℚ(√d): numbers `a + b√d` with rational `a`, `b`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::matrix::Mat2;

/// `a + b·√d` with `d > 1` free of small square factors.
///
/// Values with different `d` never mix; every constructor in this crate
/// derives `d` from one discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quadratic {
    pub a: BigRational,
    pub b: BigRational,
    pub d: BigInt,
}

/// Splits `n > 0` into `(s, d)` with `n = s²·d`, pulling out square factors
/// of primes below `2^16`. Larger repeated factors may remain in `d`.
pub fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive(), "square_free_split needs a positive integer");
    let mut d = n.clone();
    let mut s = BigInt::one();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1u32 << 16);
    while p < limit && &p * &p <= d {
        let p2 = &p * &p;
        while (&d % &p2).is_zero() {
            d /= &p2;
            s *= &p;
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    let r = d.sqrt();
    if &r * &r == d {
        s *= r;
        d = BigInt::one();
    }
    (s, d)
}

impl Quadratic {
    pub fn rational(a: BigRational, d: BigInt) -> Self {
        Quadratic {
            a,
            b: BigRational::zero(),
            d,
        }
    }

    pub fn from_int(a: impl Into<BigInt>, d: BigInt) -> Self {
        Self::rational(BigRational::from_integer(a.into()), d)
    }

    /// `√d` itself.
    pub fn sqrt_d(d: BigInt) -> Self {
        Quadratic {
            a: BigRational::zero(),
            b: BigRational::one(),
            d,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() || self.d.is_one()
    }

    /// The rational value when the irrational part vanishes.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.d.is_one() {
            Some(&self.a + &self.b)
        } else if self.b.is_zero() {
            Some(self.a.clone())
        } else {
            None
        }
    }

    pub fn conjugate(&self) -> Self {
        Quadratic {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }

    /// `a² − b²d`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.clone())
    }

    /// Exact sign of `a + b√d`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        if sa == sb || sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // Opposite signs: compare a² with b²d.
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(self.d.clone());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        // Avoid cancellation when a and b√d nearly cancel: use the conjugate.
        let plus = a + b * d.sqrt();
        if plus.abs() < 1e-8 * (a.abs() + (b * d.sqrt()).abs()) && !self.is_zero() {
            let n = self.norm().to_f64().unwrap_or(f64::NAN);
            return n / (a - b * d.sqrt());
        }
        plus
    }

    /// Rational approximation with absolute error below `2^-bits`.
    pub fn to_rational(&self, bits: u32) -> BigRational {
        if self.b.is_zero() {
            return self.a.clone();
        }
        // floor(√d · 2^bits') / 2^bits' with enough guard bits for |b|.
        let guard = self.b.abs().ceil().to_integer().bits() as u32 + 2;
        let shift = bits + guard;
        let scale = BigInt::one() << shift;
        let root = (&self.d * &scale * &scale).sqrt();
        let sqrt_d = BigRational::new(root, scale);
        &self.a + &self.b * sqrt_d
    }
}

impl Add for &Quadratic {
    type Output = Quadratic;

    fn add(self, rhs: &Quadratic) -> Quadratic {
        debug_assert_eq!(self.d, rhs.d);
        Quadratic {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            d: self.d.clone(),
        }
    }
}

impl Sub for &Quadratic {
    type Output = Quadratic;

    fn sub(self, rhs: &Quadratic) -> Quadratic {
        debug_assert_eq!(self.d, rhs.d);
        Quadratic {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            d: self.d.clone(),
        }
    }
}

impl Mul for &Quadratic {
    type Output = Quadratic;

    fn mul(self, rhs: &Quadratic) -> Quadratic {
        debug_assert_eq!(self.d, rhs.d);
        let d = BigRational::from_integer(self.d.clone());
        Quadratic {
            a: &self.a * &rhs.a + &self.b * &rhs.b * d,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            d: self.d.clone(),
        }
    }
}

impl Div for &Quadratic {
    type Output = Quadratic;

    /// Panics on division by zero.
    fn div(self, rhs: &Quadratic) -> Quadratic {
        let n = rhs.norm();
        assert!(!n.is_zero(), "division by zero in ℚ(√d)");
        let num = self * &rhs.conjugate();
        Quadratic {
            a: num.a / &n,
            b: num.b / &n,
            d: self.d.clone(),
        }
    }
}

impl Neg for &Quadratic {
    type Output = Quadratic;

    fn neg(self) -> Quadratic {
        Quadratic {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }
}

impl PartialOrd for Quadratic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.d == other.d).then(|| (self - other).signum())
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.as_rational().expect("rational"));
        }
        if !self.a.is_zero() {
            write!(f, "{} ", self.a)?;
            f.write_str(if self.b.is_negative() { "- " } else { "+ " })?;
        } else if self.b.is_negative() {
            f.write_str("-")?;
        }
        let b = self.b.abs();
        if !b.is_one() {
            write!(f, "{b}*")?;
        }
        write!(f, "sqrt({})", self.d)
    }
}

/// Perron (dominant) eigenvalue and eigenvector of a primitive non-negative
/// 2×2 matrix, exactly, with the eigenvector scaled to max-norm 1.
pub fn perron_pair(m: &Mat2) -> Option<(Quadratic, [Quadratic; 2])> {
    if !m.is_nonnegative() {
        return None;
    }
    let disc = m.discriminant();
    if !disc.is_positive() {
        return None;
    }
    let (s, d) = square_free_split(&disc);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    // λ = (tr + s√d)/2
    let lambda = if d.is_one() {
        // Rational eigenvalue; keep the irrational part zero so norms stay exact.
        Quadratic::rational(BigRational::from_integer(m.trace() + s) * &half, d.clone())
    } else {
        Quadratic {
            a: BigRational::from_integer(m.trace()) * &half,
            b: BigRational::from_integer(s) * &half,
            d: d.clone(),
        }
    };
    let (a, b, c, e) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let vec = if !b.is_zero() {
        [Quadratic::from_int(b.clone(), d.clone()), &lambda - &Quadratic::from_int(a.clone(), d.clone())]
    } else if !c.is_zero() {
        [&lambda - &Quadratic::from_int(e.clone(), d.clone()), Quadratic::from_int(c.clone(), d.clone())]
    } else {
        return None;
    };
    let vec = normalize_max(&vec)?;
    Some((lambda, vec))
}

/// Scales a non-negative vector so its larger coordinate is exactly 1.
pub fn normalize_max(v: &[Quadratic; 2]) -> Option<[Quadratic; 2]> {
    if v[0].signum() == Ordering::Less || v[1].signum() == Ordering::Less {
        return None;
    }
    let big = match (&v[0] - &v[1]).signum() {
        Ordering::Less => &v[1],
        _ => &v[0],
    };
    if big.is_zero() {
        return None;
    }
    Some([&v[0] / big, &v[1] / big])
}

/// Integer matrix times a vector over ℚ(√d).
pub fn mat_apply(m: &Mat2, v: &[Quadratic; 2]) -> [Quadratic; 2] {
    let d = v[0].d.clone();
    let entry = |i: usize, j: usize| Quadratic::from_int(m.get(i, j).clone(), d.clone());
    [
        &(&entry(0, 0) * &v[0]) + &(&entry(0, 1) * &v[1]),
        &(&entry(1, 0) * &v[0]) + &(&entry(1, 1) * &v[1]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, d: i64) -> Quadratic {
        Quadratic {
            a: BigRational::from_integer(a.into()),
            b: BigRational::from_integer(b.into()),
            d: d.into(),
        }
    }

    #[test]
    fn square_free() {
        assert_eq!(square_free_split(&BigInt::from(5)), (1.into(), 5.into()));
        assert_eq!(square_free_split(&BigInt::from(20)), (2.into(), 5.into()));
        assert_eq!(square_free_split(&BigInt::from(36)), (6.into(), 1.into()));
        assert_eq!(square_free_split(&BigInt::from(12)), (2.into(), 3.into()));
    }

    #[test]
    fn field_ops() {
        let x = q(1, 1, 5);
        let y = q(-1, 1, 5);
        // (1+√5)(−1+√5) = 4
        assert_eq!((&x * &y).as_rational(), Some(BigRational::from_integer(4.into())));
        let r = &x / &x;
        assert_eq!(r.as_rational(), Some(BigRational::one()));
        assert_eq!(q(-3, 1, 5).signum(), Ordering::Less);
        assert_eq!(q(-2, 1, 5).signum(), Ordering::Greater);
        assert_eq!(q(3, -1, 9).signum(), Ordering::Equal);
    }

    #[test]
    fn fibonacci_perron() {
        let (lambda, v) = perron_pair(&Mat2::from_i64([[1, 1], [1, 0]])).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((lambda.to_f64() - phi).abs() < 1e-15);
        assert_eq!(v[0].as_rational(), Some(BigRational::one()));
        // (√5 − 1)/2
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(v[1].a, -half.clone());
        assert_eq!(v[1].b, half);
        assert_eq!(v[1].to_string(), "-1/2 + 1/2*sqrt(5)");
    }

    #[test]
    fn rational_perron_root() {
        let (lambda, v) = perron_pair(&Mat2::from_i64([[1, 1], [1, 1]])).unwrap();
        assert_eq!(lambda.as_rational(), Some(BigRational::from_integer(2.into())));
        assert!(v.iter().all(|x| x.as_rational() == Some(BigRational::one())));
    }

    #[test]
    fn rational_approximation() {
        let x = q(0, 1, 2);
        let r = x.to_rational(100);
        let err = (&r * &r - BigRational::from_integer(2.into())).abs();
        assert!(err < BigRational::new(1.into(), BigInt::one() << 98));
    }
}
