//! Exact half-integer angular momentum arithmetic and Clebsch-Gordan
//! coefficients (Condon-Shortley phase convention).
//!
//! The Racah closed-form sum is evaluated in exact rational arithmetic; the only
//! floating point operation is the final square root. This keeps coefficients
//! such as `sqrt(2/3)` exact to the last ulp.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An integer or half-integer stored as twice its value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(value: i32) -> Self {
        HalfInt(2 * value)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// `j(j+1)`, the eigenvalue of the squared angular momentum.
    pub fn casimir(self) -> f64 {
        let j = self.value();
        j * (j + 1.0)
    }

    /// The projections `-j, -j+1, ..., j`.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        let j2 = self.0;
        (-j2..=j2).step_by(2).map(HalfInt)
    }

    /// Whether `m` is a valid projection of `self` viewed as a magnitude.
    pub fn admits_projection(self, m: HalfInt) -> bool {
        self.0 >= 0 && m.0.abs() <= self.0 && (self.0 - m.0) % 2 == 0
    }

    /// Recovers `j` from a `j(j+1)` expectation value, if it lies within `tol`
    /// of an allowed value.
    pub fn from_casimir(value: f64, tol: f64) -> Option<HalfInt> {
        if !value.is_finite() || value < -tol {
            return None;
        }
        let j = (-1.0 + (1.0 + 4.0 * value.max(0.0)).sqrt()) / 2.0;
        let candidate = HalfInt((2.0 * j).round() as i32);
        ((candidate.casimir() - value).abs() < tol).then_some(candidate)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: Self) -> Self {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: Self) -> Self {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> Self {
        HalfInt(-self.0)
    }
}

/// Label of a coupled state `|(l s) j m>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoupledLabel {
    pub l: HalfInt,
    pub s: HalfInt,
    pub j: HalfInt,
    pub m: HalfInt,
}

impl CoupledLabel {
    pub fn new(l: HalfInt, s: HalfInt, j: HalfInt, m: HalfInt) -> Result<Self> {
        let label = CoupledLabel { l, s, j, m };
        if triangle(l, s, j) && j.admits_projection(m) && l.twice() >= 0 && s.twice() >= 0 {
            Ok(label)
        } else {
            Err(Error::InvalidCoupling { l, s, j, m })
        }
    }
}

fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (a, b, c) = (a.twice(), b.twice(), c.twice());
    a >= 0 && b >= 0 && c >= 0 && c >= (a - b).abs() && c <= a + b && (a + b + c) % 2 == 0
}

fn factorial(n: i32) -> BigInt {
    debug_assert!(n >= 0);
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Converts a sum of twice-values into the integer it represents.
fn whole(twice: i32) -> i32 {
    debug_assert!(twice % 2 == 0);
    twice / 2
}

/// Clebsch-Gordan coefficient `<j1 m1; j2 m2 | j m>`.
///
/// Returns 0 for any combination violating the projection or triangle rules.
pub fn cg(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> f64 {
    if m1 + m2 != m
        || !triangle(j1, j2, j)
        || !j1.admits_projection(m1)
        || !j2.admits_projection(m2)
        || !j.admits_projection(m)
    {
        return 0.0;
    }
    let (j1, m1, j2, m2, j, m) = (j1.0, m1.0, j2.0, m2.0, j.0, m.0);

    let f = |twice: i32| factorial(whole(twice));
    let mut prefactor = BigRational::new(
        BigInt::from(j + 1) * f(j + j1 - j2) * f(j - j1 + j2) * f(j1 + j2 - j),
        f(j1 + j2 + j + 2),
    );
    prefactor *= BigRational::from_integer(
        f(j + m) * f(j - m) * f(j1 - m1) * f(j1 + m1) * f(j2 - m2) * f(j2 + m2),
    );

    // Each factorial argument below must be non-negative.
    let k_min = 0.max(whole(j2 - j - m1)).max(whole(j1 + m2 - j));
    let k_max = whole(j1 + j2 - j).min(whole(j1 - m1)).min(whole(j2 + m2));
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let denom = factorial(k)
            * f(j1 + j2 - j - 2 * k)
            * f(j1 - m1 - 2 * k)
            * f(j2 + m2 - 2 * k)
            * f(j - j2 + m1 + 2 * k)
            * f(j - j1 - m2 + 2 * k);
        let sign = if k % 2 == 0 { 1 } else { -1 };
        sum += BigRational::new(BigInt::from(sign), denom);
    }
    if sum.is_zero() {
        return 0.0;
    }
    let squared = prefactor * &sum * &sum;
    let magnitude = squared.to_f64().unwrap_or(f64::NAN).sqrt();
    if sum.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

/// Expansion of `|(l s) j m>` over the uncoupled product basis `|l ml>|s ms>`.
///
/// Only non-vanishing coefficients are returned, keyed by `(ml, ms)`.
pub fn coupled_state(
    l: HalfInt,
    s: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<BTreeMap<(HalfInt, HalfInt), f64>> {
    CoupledLabel::new(l, s, j, m)?;
    let mut out = BTreeMap::new();
    for ml in l.projections() {
        let ms = m - ml;
        if !s.admits_projection(ms) {
            continue;
        }
        let c = cg(l, ml, s, ms, j, m);
        if c != 0.0 {
            out.insert((ml, ms), c);
        }
    }
    Ok(out)
}
