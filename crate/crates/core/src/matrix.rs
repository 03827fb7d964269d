//! 2×2 integer matrices and integer vectors with arbitrary-precision entries.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vec2(pub [BigInt; 2]);

impl Vec2 {
    pub fn new(a: BigInt, b: BigInt) -> Self {
        Vec2([a, b])
    }

    pub fn from_i64(a: i64, b: i64) -> Self {
        Vec2([a.into(), b.into()])
    }

    pub fn zero() -> Self {
        Vec2([BigInt::zero(), BigInt::zero()])
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [to_f64(&self.0[0]), to_f64(&self.0[1])]
    }

    pub fn to_i64(&self) -> Option<[i64; 2]> {
        Some([self.0[0].to_i64()?, self.0[1].to_i64()?])
    }
}

impl Add for &Vec2 {
    type Output = Vec2;

    fn add(self, rhs: &Vec2) -> Vec2 {
        Vec2([&self.0[0] + &rhs.0[0], &self.0[1] + &rhs.0[1]])
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0[0], self.0[1])
    }
}

/// A 2×2 integer matrix, `m[row][col]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2(pub [[BigInt; 2]; 2]);

impl Mat2 {
    pub fn new(m: [[BigInt; 2]; 2]) -> Self {
        Mat2(m)
    }

    pub fn from_i64(m: [[i64; 2]; 2]) -> Self {
        Mat2([
            [m[0][0].into(), m[0][1].into()],
            [m[1][0].into(), m[1][1].into()],
        ])
    }

    pub fn identity() -> Self {
        Mat2::from_i64([[1, 0], [0, 1]])
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.0[i][j]
    }

    pub fn column(&self, j: usize) -> Vec2 {
        Vec2([self.0[0][j].clone(), self.0[1][j].clone()])
    }

    pub fn transpose(&self) -> Mat2 {
        let m = &self.0;
        Mat2([
            [m[0][0].clone(), m[1][0].clone()],
            [m[0][1].clone(), m[1][1].clone()],
        ])
    }

    pub fn det(&self) -> BigInt {
        let m = &self.0;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    pub fn trace(&self) -> BigInt {
        &self.0[0][0] + &self.0[1][1]
    }

    /// Discriminant `tr² − 4·det` of the characteristic polynomial.
    pub fn discriminant(&self) -> BigInt {
        let t = self.trace();
        &t * &t - BigInt::from(4) * self.det()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_positive())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().flatten().all(|x| !x.is_negative())
    }

    /// Whether `x² − tr·x + det` is irreducible over ℚ.
    ///
    /// A monic integer quadratic is irreducible iff its discriminant is not a
    /// perfect square.
    pub fn char_poly_irreducible(&self) -> bool {
        !is_perfect_square(&self.discriminant())
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        let m = &self.0;
        Vec2([
            &m[0][0] * &v.0[0] + &m[0][1] * &v.0[1],
            &m[1][0] * &v.0[0] + &m[1][1] * &v.0[1],
        ])
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        let m = &self.0;
        [
            [to_f64(&m[0][0]), to_f64(&m[0][1])],
            [to_f64(&m[1][0]), to_f64(&m[1][1])],
        ]
    }

    pub fn to_i64(&self) -> Option<[[i64; 2]; 2]> {
        let m = &self.0;
        Some([
            [m[0][0].to_i64()?, m[0][1].to_i64()?],
            [m[1][0].to_i64()?, m[1][1].to_i64()?],
        ])
    }

    /// Entries as decimal strings, row-major.
    pub fn to_strings(&self) -> [[String; 2]; 2] {
        let m = &self.0;
        [
            [m[0][0].to_string(), m[0][1].to_string()],
            [m[1][0].to_string(), m[1][1].to_string()],
        ]
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let entry = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        Mat2([[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        &self * &rhs
    }
}

impl One for Mat2 {
    fn one() -> Self {
        Mat2::identity()
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "[[{},{}],[{},{}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

impl Serialize for Mat2 {
    /// Entries are emitted as JSON integers when they fit in `i64`, else as strings.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut rows = s.serialize_seq(Some(2))?;
        for row in &self.0 {
            let cells: Vec<serde_json::Value> = row.iter().map(bigint_json).collect();
            rows.serialize_element(&cells)?;
        }
        rows.end()
    }
}

pub(crate) fn bigint_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Lossy conversion; huge values saturate to ±∞.
pub fn to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_power() {
        let m = Mat2::from_i64([[1, 1], [1, 0]]);
        let mut p = Mat2::identity();
        for _ in 0..10 {
            p = &p * &m;
        }
        assert_eq!(p, Mat2::from_i64([[89, 55], [55, 34]]));
        assert_eq!(p.det(), BigInt::from(1));
    }

    #[test]
    fn products_past_u64_stay_exact() {
        let m = Mat2::from_i64([[1, 1], [1, 0]]);
        let mut p = Mat2::identity();
        for _ in 0..200 {
            p = &p * &m;
        }
        // Cassini: F(n+1)F(n-1) − F(n)² = (−1)^n.
        assert_eq!(p.det(), BigInt::from(1));
        assert!(p.get(0, 0).to_u64().is_none());
    }

    #[test]
    fn perfect_squares() {
        assert!(is_perfect_square(&BigInt::from(0)));
        assert!(is_perfect_square(&BigInt::from(4)));
        assert!(!is_perfect_square(&BigInt::from(5)));
        assert!(!is_perfect_square(&BigInt::from(-4)));
    }

    #[test]
    fn irreducibility_examples() {
        assert!(Mat2::from_i64([[1, 1], [1, 0]]).char_poly_irreducible());
        assert!(!Mat2::from_i64([[1, 1], [1, 1]]).char_poly_irreducible());
        assert!(!Mat2::identity().char_poly_irreducible());
    }
}
