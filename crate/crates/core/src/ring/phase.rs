use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;

/// A root of unity `exp(2πi · num/den)`, kept as a reduced fraction in `[0, 1)`.
///
/// Linear characters of finite groups only take root-of-unity values, so
/// comparing phases is exact. `Add` is multiplication of the roots.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase {
    num: u64,
    den: u64,
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };

    pub fn new(num: u64, den: u64) -> Phase {
        assert!(den > 0, "phase denominator must be positive");
        let num = num % den;
        let g = num.gcd(&den);
        Phase {
            num: num / g,
            den: den / g,
        }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// Multiplicative order of the root of unity.
    pub fn order(self) -> u64 {
        self.den
    }

    /// `k`-th power of the root.
    pub fn times(self, k: u64) -> Phase {
        Phase::new(((self.num as u128 * k as u128) % self.den as u128) as u64, self.den)
    }

    /// The `branch`-th `k`-th root: `(num/den + branch)/k`.
    pub fn root(self, k: u64, branch: u64) -> Phase {
        Phase::new(self.num + (branch % k) * self.den, self.den * k)
    }

    pub fn to_complex(self) -> Complex64 {
        let angle = std::f64::consts::TAU * self.num as f64 / self.den as f64;
        Complex64::new(angle.cos(), angle.sin())
    }
}

impl Add for Phase {
    type Output = Phase;

    fn add(self, rhs: Phase) -> Phase {
        let den = self.den.lcm(&rhs.den);
        Phase::new(self.num * (den / self.den) + rhs.num * (den / rhs.den), den)
    }
}

impl Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        Phase::new(self.den - self.num, self.den)
    }
}

impl Sub for Phase {
    type Output = Phase;

    fn sub(self, rhs: Phase) -> Phase {
        self + (-rhs)
    }
}

impl std::iter::Sum for Phase {
    fn sum<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::ZERO, |a, b| a + b)
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({}/{})", self.num, self.den)
    }
}
