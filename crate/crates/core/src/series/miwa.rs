use alloc::collections::BTreeMap;

use num_traits::{Pow, Zero};

use crate::error::{Error, Result};
use crate::rational::{q, Q};

/// Numeric values for odd times; absent indices read as zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TimeVector {
    values: BTreeMap<i32, Q>,
}

impl TimeVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, n: i32, value: Q) -> Result<()> {
        if n % 2 == 0 {
            return Err(Error::EvenIndex(n));
        }
        if value.is_zero() {
            self.values.remove(&n);
        } else {
            self.values.insert(n, value);
        }
        Ok(())
    }

    pub fn get(&self, n: i32) -> Q {
        self.values.get(&n).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &Q)> {
        self.values.iter().map(|(&n, v)| (n, v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Combines two vectors (e.g. a positive and a negative specialization).
    pub fn merged(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&n, v) in &other.values {
            let sum = out.get(n) + v;
            out.set(n, sum).expect("keys are odd");
        }
        out
    }

    /// Multiplies every value by `s`.
    pub fn scaled(&self, s: &Q) -> Self {
        let mut out = Self::new();
        for (&n, v) in &self.values {
            out.set(n, v * s).expect("keys are odd");
        }
        out
    }
}

/// Which family of times a specialization feeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// `t_{±n} = (2/n) Σ_i x_i^n` for odd `n ≤ n_max`.
pub fn miwa_times(x: &[Q], n_max: i32, side: Side) -> Result<TimeVector> {
    if n_max <= 0 || n_max % 2 == 0 {
        return Err(Error::Invalid(alloc::format!(
            "Miwa cutoff must be odd and positive, got {n_max}"
        )));
    }
    let mut t = TimeVector::new();
    for n in (1..=n_max).step_by(2) {
        let power_sum: Q = x.iter().map(|xi| xi.clone().pow(n as u32)).sum();
        let idx = if side == Side::Plus { n } else { -n };
        t.set(idx, power_sum * q(2, n as i64))?;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    #[test]
    fn single_point() {
        let t = miwa_times(&[q(1, 2)], 3, Side::Plus).unwrap();
        assert_eq!(t.get(1), qi(1));
        assert_eq!(t.get(3), q(1, 12));
        assert_eq!(t.get(5), qi(0));
    }

    #[test]
    fn empty_and_cancelling() {
        assert!(miwa_times(&[], 9, Side::Plus).unwrap().is_zero());
        assert!(miwa_times(&[qi(1), qi(-1)], 3, Side::Minus)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn negative_side_and_validation() {
        let t = miwa_times(&[q(1, 3)], 1, Side::Minus).unwrap();
        assert_eq!(t.get(-1), q(2, 3));
        assert_eq!(t.get(1), qi(0));
        assert!(miwa_times(&[], 4, Side::Plus).is_err());
        assert_eq!(TimeVector::new().set(2, qi(1)), Err(Error::EvenIndex(2)));
    }
}
