//! Exact rational phases, stored as multiples of π.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use serde::Serialize;

/// An angle `(numerator / denominator) · π`, kept in lowest terms with the
/// numerator reduced into `[0, 2·denominator)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Phase {
    num: i64,
    den: i64,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };
    pub const PI: Phase = Phase { num: 1, den: 1 };
    pub const HALF_PI: Phase = Phase { num: 1, den: 2 };
    pub const MINUS_HALF_PI: Phase = Phase { num: 3, den: 2 };
    pub const QUARTER_PI: Phase = Phase { num: 1, den: 4 };
    pub const MINUS_QUARTER_PI: Phase = Phase { num: 7, den: 4 };

    /// Builds `num/den · π`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Phase {
        assert!(den != 0, "phase denominator must be non-zero");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Phase {
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd(num, den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        num = num.rem_euclid(2 * den);
        Phase {
            num: num as i64,
            den: den as i64,
        }
    }

    pub fn numerator(self) -> i64 {
        self.num
    }

    pub fn denominator(self) -> i64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// Multiples of π/2.
    pub fn is_clifford(self) -> bool {
        self.den <= 2
    }

    /// 0 or π.
    pub fn is_pauli(self) -> bool {
        self.den == 1
    }

    /// ±π/2.
    pub fn is_proper_clifford(self) -> bool {
        self.den == 2
    }

    pub fn to_radians(self) -> f64 {
        self.num as f64 / self.den as f64 * std::f64::consts::PI
    }

    /// Best rational approximation of `radians / π` with denominator at most
    /// `max_den`, via continued fractions. Returns the phase and the absolute
    /// snap error in radians.
    pub fn approximate(radians: f64, max_den: i64) -> (Phase, f64) {
        let x = radians / std::f64::consts::PI;
        let (n, d) = best_rational(x.rem_euclid(2.0), max_den);
        let phase = Phase::new(n, d);
        let snapped = n as f64 / d as f64 * std::f64::consts::PI;
        let err = (snapped - radians.rem_euclid(2.0 * std::f64::consts::PI)).abs();
        (phase, err)
    }
}

fn best_rational(x: f64, max_den: i64) -> (i64, i64) {
    // Convergents h/k of the continued fraction of x.
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut frac = x;
    for _ in 0..64 {
        let a = frac.floor();
        if a.abs() > i64::MAX as f64 / 4.0 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = match (
            a.checked_mul(h1).and_then(|v| v.checked_add(h0)),
            a.checked_mul(k1).and_then(|v| v.checked_add(k0)),
        ) {
            (Some(h), Some(k)) => (h, k),
            _ => break,
        };
        if k2 > max_den {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let rem = frac - a as f64;
        if rem.abs() < 1e-12 {
            break;
        }
        frac = 1.0 / rem;
    }
    if k1 == 0 {
        (x.round() as i64, 1)
    } else {
        (h1, k1)
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        let num = self.num as i128 * rhs.den as i128 + rhs.num as i128 * self.den as i128;
        Phase::from_i128(num, self.den as i128 * rhs.den as i128)
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        *self = *self + rhs;
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::from_i128(-(self.num as i128), self.den as i128)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        self + (-rhs)
    }
}

/// Formats as an OpenQASM angle expression, e.g. `0`, `pi`, `3*pi/4`.
impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "0"),
            (1, 1) => write!(f, "pi"),
            (n, 1) => write!(f, "{n}*pi"),
            (1, d) => write!(f, "pi/{d}"),
            (n, d) => write!(f, "{n}*pi/{d}"),
        }
    }
}
