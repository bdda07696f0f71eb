//! The scalar abstractions shared by the Pfaffian and symmetric-function
//! layers: exact rationals, floats, and truncated polynomials all implement
//! [`Ring`].

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::pfaffian::{self, SkewMatrix};
use crate::rational::{self, Q};

/// Commutative ring with unit (zero and one come from `num_traits`).
/// Operations take references so big-number and polynomial types avoid
/// needless clones.
pub trait Ring: Clone + PartialEq + core::fmt::Debug + Zero + One {
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn from_rational(q: &Q) -> Self;

    fn scale(&self, q: &Q) -> Self {
        self.times(&Self::from_rational(q))
    }

    /// Pfaffian of an even-order skew matrix. The default is division-free
    /// minor expansion; fields override it with elimination.
    fn pfaffian(m: &SkewMatrix<Self>) -> Self {
        pfaffian::pfaffian_by_minors(m)
    }
}

pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;

    /// Pivot preference during elimination; larger is better. Exact fields
    /// only need "nonzero".
    fn pivot_weight(&self) -> f64;
}

impl Ring for Q {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_rational(q: &Q) -> Self {
        q.clone()
    }
    fn scale(&self, q: &Q) -> Self {
        self * q
    }
    fn pfaffian(m: &SkewMatrix<Self>) -> Self {
        pfaffian::pfaffian_by_elimination(m)
    }
}

impl Field for Q {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn pivot_weight(&self) -> f64 {
        if Zero::is_zero(self) {
            0.0
        } else {
            1.0
        }
    }
}

impl Ring for f64 {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_rational(q: &Q) -> Self {
        rational::to_f64(q)
    }
    fn pfaffian(m: &SkewMatrix<Self>) -> Self {
        pfaffian::pfaffian_f64(m, pfaffian::DEFAULT_SINGULAR_TOL)
    }
}

impl Field for f64 {
    fn inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn pivot_weight(&self) -> f64 {
        libm::fabs(*self)
    }
}

/// `value * 2^(half_exp / 2)`: keeps track of the `sqrt(2)` factors that the
/// neutral-fermion normalizations introduce, so they can cancel exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Sqrt2Scaled<T> {
    pub value: T,
    pub half_exp: i32,
}

impl<T: Ring> Sqrt2Scaled<T> {
    pub fn new(value: T, half_exp: i32) -> Self {
        Self { value, half_exp }
    }

    pub fn times(&self, other: &Self) -> Self {
        Self {
            value: self.value.times(&other.value),
            half_exp: self.half_exp + other.half_exp,
        }
    }

    /// Collapses to `T`; an odd exponent would leave an irrational factor.
    pub fn into_exact(self) -> Result<T> {
        if self.half_exp % 2 != 0 {
            return Err(Error::HalfIntegerPower(self.half_exp));
        }
        Ok(self.value.scale(&rational::pow2(self.half_exp / 2)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn sqrt2_cancels_only_in_pairs() {
        let a = Sqrt2Scaled::new(q(3, 1), 1);
        let b = Sqrt2Scaled::new(q(1, 2), 1);
        assert_eq!(a.times(&b).into_exact().unwrap(), q(3, 1));
        assert_eq!(
            Sqrt2Scaled::new(q(1, 1), 3).into_exact(),
            Err(Error::HalfIntegerPower(3))
        );
        assert_eq!(Sqrt2Scaled::new(q(1, 1), -4).into_exact().unwrap(), q(1, 4));
    }
}
