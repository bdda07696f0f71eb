use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use super::poly::{OddPoly, Var};
use crate::error::{Error, Result};
use crate::rational::Q;

/// Polynomial in Hirota symbols `D_n` (odd `n`, either sign).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HirotaOp {
    terms: Vec<(Q, Vec<i32>)>,
}

impl HirotaOp {
    pub fn new(terms: impl IntoIterator<Item = (Q, Vec<i32>)>) -> Result<Self> {
        let mut merged: BTreeMap<Vec<i32>, Q> = BTreeMap::new();
        for (c, mut idx) in terms {
            if let Some(&n) = idx.iter().find(|&&n| n % 2 == 0) {
                return Err(Error::EvenIndex(n));
            }
            idx.sort_unstable();
            *merged.entry(idx).or_insert_with(Q::zero) += c;
        }
        Ok(Self {
            terms: merged
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (c, i))
                .collect(),
        })
    }

    /// A single product `D_{n_1} ⋯ D_{n_k}`.
    pub fn monomial(indices: &[i32]) -> Result<Self> {
        Self::new([(Q::one(), indices.to_vec())])
    }

    pub fn terms(&self) -> &[(Q, Vec<i32>)] {
        &self.terms
    }

    /// Largest total weight `Σ|n_i|` over the terms.
    pub fn weight(&self) -> i64 {
        self.terms
            .iter()
            .map(|(_, idx)| idx.iter().map(|n| n.unsigned_abs() as i64).sum())
            .max()
            .unwrap_or(0)
    }

    /// Largest weight carried by positive and by negative indices, taken
    /// separately; applying the operator lowers a cap by at most this.
    pub fn bi_weight(&self) -> (i64, i64) {
        let side = |neg: bool| {
            self.terms
                .iter()
                .map(|(_, idx)| {
                    idx.iter()
                        .filter(|&&n| (n < 0) == neg)
                        .map(|n| n.unsigned_abs() as i64)
                        .sum::<i64>()
                })
                .max()
                .unwrap_or(0)
        };
        (side(false), side(true))
    }
}

impl fmt::Display for HirotaOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (c, idx)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            if !a.is_one() || idx.is_empty() {
                write!(f, "{a}")?;
            }
            for n in idx {
                write!(f, "D{n}")?;
            }
        }
        Ok(())
    }
}

/// Mixed partial derivative, memoized by the sorted index list.
fn derivative<'a>(
    p: &OddPoly,
    idx: &[i32],
    memo: &'a mut BTreeMap<Vec<i32>, OddPoly>,
) -> &'a OddPoly {
    if !memo.contains_key(idx) {
        let value = match idx.split_last() {
            None => p.clone(),
            Some((&last, rest)) => derivative(p, rest, memo).derivative(Var::t(last)),
        };
        memo.insert(idx.to_vec(), value);
    }
    &memo[idx]
}

/// `P(D) f·g = P(∂_t - ∂_{t'}) f(t) g(t') |_{t'=t}`.
pub fn hirota(op: &HirotaOp, f: &OddPoly, g: &OddPoly) -> OddPoly {
    let mut df = BTreeMap::new();
    let mut dg = BTreeMap::new();
    let mut out: Option<OddPoly> = None;
    for (c, idx) in &op.terms {
        let k = idx.len();
        for mask in 0u32..(1 << k) {
            let (mut on_f, mut on_g) = (Vec::new(), Vec::new());
            for (i, &n) in idx.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    on_f.push(n);
                } else {
                    on_g.push(n);
                }
            }
            let sign = if on_g.len() % 2 == 1 {
                -c.clone()
            } else {
                c.clone()
            };
            let a = derivative(f, &on_f, &mut df).clone();
            let b = derivative(g, &on_g, &mut dg);
            let term = a.mul(b).scale(&sign);
            out = Some(match out {
                None => term,
                Some(acc) => acc.add(&term),
            });
        }
    }
    out.unwrap_or_else(|| f.mul(g).scale(&Q::zero()))
}
