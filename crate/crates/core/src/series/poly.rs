use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Q};

/// Cap value meaning "exact at every weight".
pub const UNBOUNDED: i64 = i64::MAX / 4;

fn cap_add(a: i64, b: i64) -> i64 {
    if a >= UNBOUNDED || b >= UNBOUNDED {
        UNBOUNDED
    } else {
        (a + b).min(UNBOUNDED)
    }
}

/// A time variable `t_n` (`n` odd, possibly negative), optionally primed to
/// form an independent second copy `t'_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Var {
    index: i32,
    primed: bool,
}

impl Var {
    pub fn new(index: i32) -> Result<Self> {
        if index % 2 == 0 {
            return Err(Error::EvenIndex(index));
        }
        Ok(Self {
            index,
            primed: false,
        })
    }

    /// `t_n` for an index known to be odd.
    pub fn t(index: i32) -> Self {
        assert!(index % 2 != 0, "time index {index} must be odd");
        Self {
            index,
            primed: false,
        }
    }

    pub fn primed(self) -> Self {
        Self {
            primed: true,
            ..self
        }
    }

    pub fn unprimed(self) -> Self {
        Self {
            primed: false,
            ..self
        }
    }

    pub fn index(self) -> i32 {
        self.index
    }

    pub fn is_primed(self) -> bool {
        self.primed
    }

    pub fn is_negative(self) -> bool {
        self.index < 0
    }

    pub fn weight(self) -> i64 {
        self.index.unsigned_abs() as i64
    }

    fn key(self) -> (bool, bool, u32) {
        (self.primed, self.index < 0, self.index.unsigned_abs())
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}{}", self.index, if self.primed { "'" } else { "" })
    }
}

impl core::str::FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, primed) = match s.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let digits = body
            .strip_prefix('t')
            .ok_or_else(|| Error::Invalid(format!("bad variable name {s:?}")))?;
        let index: i32 = digits
            .parse()
            .map_err(|_| Error::Invalid(format!("bad variable name {s:?}")))?;
        let v = Var::new(index)?;
        Ok(if primed { v.primed() } else { v })
    }
}

/// Product of variables with positive exponents, sorted by variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Self(alloc::vec![(v, e)])
        }
    }

    /// Builds from arbitrary `(var, exp)` pairs, merging repeats.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Self(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |&(_, e)| e)
    }

    /// `(positive-side weight, negative-side weight)`.
    pub fn weights(&self) -> (i64, i64) {
        self.0.iter().fold((0, 0), |(p, n), &(v, e)| {
            let w = v.weight() * e as i64;
            if v.is_negative() {
                (p, n + w)
            } else {
                (p + w, n)
            }
        })
    }

    pub fn total_weight(&self) -> i64 {
        let (p, n) = self.weights();
        p + n
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self(out)
    }

    /// `d/dv`: the multiplicity and the lowered monomial, or `None` if `v`
    /// does not occur.
    pub fn derivative(&self, v: Var) -> Option<(u32, Self)> {
        let pos = self.0.iter().position(|(w, _)| *w == v)?;
        let e = self.0[pos].1;
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(pos);
        } else {
            out[pos].1 -= 1;
        }
        Some((e, Self(out)))
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Self {
        Self::from_pairs(self.0.iter().map(|&(v, e)| (f(v), e)))
    }
}

/// Graded order: total weight first, then the sparse exponent list.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_weight()
            .cmp(&other.total_weight())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Truncation region: a term is exact when its positive-side weight is at
/// most `pos` and its negative-side weight at most `neg`. A negative value
/// means nothing on that side is known; [`UNBOUNDED`] means exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cap {
    pub pos: i64,
    pub neg: i64,
}

impl Cap {
    /// One-sided cap: positive weight at most `d`.
    pub fn new(d: i64) -> Self {
        Self {
            pos: d,
            neg: UNBOUNDED,
        }
    }

    pub fn bi(pos: i64, neg: i64) -> Self {
        Self { pos, neg }
    }

    pub fn unbounded() -> Self {
        Self {
            pos: UNBOUNDED,
            neg: UNBOUNDED,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        self.pos >= UNBOUNDED && self.neg >= UNBOUNDED
    }

    pub fn min(self, other: Self) -> Self {
        Self {
            pos: self.pos.min(other.pos),
            neg: self.neg.min(other.neg),
        }
    }

    pub fn admits(&self, m: &Monomial) -> bool {
        let (p, n) = m.weights();
        p <= self.pos && n <= self.neg
    }

    fn lowered(self, pos: i64, neg: i64) -> Self {
        let sub = |c: i64, d: i64| if c >= UNBOUNDED { UNBOUNDED } else { c - d };
        Self {
            pos: sub(self.pos, pos),
            neg: sub(self.neg, neg),
        }
    }
}

impl fmt::Display for Cap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |f: &mut fmt::Formatter<'_>, c: i64| {
            if c >= UNBOUNDED {
                write!(f, "inf")
            } else {
                write!(f, "{c}")
            }
        };
        write!(f, "(")?;
        show(f, self.pos)?;
        write!(f, ", ")?;
        show(f, self.neg)?;
        write!(f, ")")
    }
}

/// Polynomial in odd times with exact rational coefficients, known up to
/// its [`Cap`]. Zero coefficients are never stored.
///
/// Products track valuations, so multiplying a truncated factor by an exact
/// factor of high weight keeps every term that is actually determined.
/// Equality compares coefficients only.
#[derive(Clone, Debug)]
pub struct OddPoly {
    terms: BTreeMap<Monomial, Q>,
    cap: Cap,
}

impl PartialEq for OddPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl OddPoly {
    pub fn zero_with_cap(cap: Cap) -> Self {
        Self {
            terms: BTreeMap::new(),
            cap,
        }
    }

    pub fn zero() -> Self {
        Self::zero_with_cap(Cap::unbounded())
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Self::zero_with_cap(Cap::unbounded());
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(v: Var) -> Self {
        Self::term(Q::one(), Monomial::var(v, 1))
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        let mut p = Self::zero_with_cap(Cap::unbounded());
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Q)>, cap: Cap) -> Self {
        let mut p = Self::zero_with_cap(cap);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn cap(&self) -> Cap {
        self.cap
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one())
    }

    /// Adds `c * m` if `m` lies inside the cap.
    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() || !self.cap.admits(&m) {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Restricts to a smaller cap.
    pub fn truncate(&self, cap: Cap) -> Self {
        let cap = self.cap.min(cap);
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| cap.admits(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            cap,
        }
    }

    /// Largest total weight among stored terms (0 for the zero polynomial).
    pub fn weighted_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(Monomial::total_weight)
            .max()
            .unwrap_or(0)
    }

    /// Minimum positive / negative weight over all terms, known or not.
    fn valuations(&self) -> (i64, i64) {
        let mut vp = UNBOUNDED;
        let mut vn = UNBOUNDED;
        for m in self.terms.keys() {
            let (p, n) = m.weights();
            vp = vp.min(p);
            vn = vn.min(n);
        }
        // Unknown terms beyond the positive cap have positive weight > cap,
        // but may carry any negative weight, and vice versa.
        if self.cap.pos < UNBOUNDED {
            vp = vp.min(self.cap.pos.max(-1) + 1);
            vn = 0;
        }
        if self.cap.neg < UNBOUNDED {
            vn = vn.min(self.cap.neg.max(-1) + 1);
            vp = 0;
        }
        (vp, vn)
    }

    fn product_cap(&self, other: &Self) -> Cap {
        let (vp_a, vn_a) = self.valuations();
        let (vp_b, vn_b) = other.valuations();
        Cap {
            pos: cap_add(self.cap.pos, vp_b).min(cap_add(other.cap.pos, vp_a)),
            neg: cap_add(self.cap.neg, vn_b).min(cap_add(other.cap.neg, vn_a)),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let cap = self.cap.min(other.cap);
        let mut out = self.truncate(cap);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            cap: self.cap,
        }
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero_with_cap(self.cap);
        }
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
            cap: self.cap,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cap = self.product_cap(other);
        let mut out = Self::zero_with_cap(cap);
        let weighted_b: Vec<(&Monomial, &Q, (i64, i64))> = other
            .terms
            .iter()
            .map(|(m, c)| (m, c, m.weights()))
            .collect();
        for (ma, ca) in &self.terms {
            let (pa, na) = ma.weights();
            for &(mb, cb, (pb, nb)) in &weighted_b {
                if pa + pb > cap.pos || na + nb > cap.neg {
                    continue;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(Q::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `∂/∂v`; the cap drops by the weight of `v` on its side.
    pub fn derivative(&self, v: Var) -> Self {
        let cap = if v.is_negative() {
            self.cap.lowered(0, v.weight())
        } else {
            self.cap.lowered(v.weight(), 0)
        };
        let mut out = Self::zero_with_cap(cap);
        for (m, c) in &self.terms {
            if let Some((e, low)) = m.derivative(v) {
                out.add_term(low, c * Q::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Renames variables (weights must be preserved, e.g. priming).
    pub fn map_vars(&self, f: impl Fn(Var) -> Var + Copy) -> Self {
        Self::from_terms(
            self.terms.iter().map(|(m, c)| (m.map_vars(f), c.clone())),
            self.cap,
        )
    }

    pub fn primed(&self) -> Self {
        self.map_vars(Var::primed)
    }

    /// Evaluates the stored terms; variables without a value are an error.
    pub fn eval_with(&self, value: impl Fn(Var) -> Option<Q>) -> Result<Q> {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &(v, e) in m.factors() {
                let x = value(v).ok_or_else(|| Error::UnboundVariable(format!("{v}")))?;
                term *= num_traits::Pow::pow(x, e);
            }
            total += term;
        }
        Ok(total)
    }

    /// Evaluates at numeric times; primed variables are unbound.
    pub fn eval(&self, t: &super::TimeVector) -> Result<Q> {
        self.eval_with(|v| {
            if v.is_primed() {
                None
            } else {
                Some(t.get(v.index()))
            }
        })
    }

    /// Largest absolute coefficient, handy for reports.
    pub fn max_abs_coeff(&self) -> Q {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Q::zero)
    }

    pub fn to_text(&self) -> String {
        format!("{self}")
    }
}

impl fmt::Display for OddPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Zero for OddPoly {
    fn zero() -> Self {
        OddPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for OddPoly {
    fn one() -> Self {
        OddPoly::one()
    }
}

impl core::ops::Add for OddPoly {
    type Output = OddPoly;
    fn add(self, other: Self) -> Self {
        OddPoly::add(&self, &other)
    }
}

impl core::ops::Sub for OddPoly {
    type Output = OddPoly;
    fn sub(self, other: Self) -> Self {
        OddPoly::sub(&self, &other)
    }
}

impl core::ops::Mul for OddPoly {
    type Output = OddPoly;
    fn mul(self, other: Self) -> Self {
        OddPoly::mul(&self, &other)
    }
}

impl core::ops::Neg for OddPoly {
    type Output = OddPoly;
    fn neg(self) -> Self {
        OddPoly::neg(&self)
    }
}

impl crate::algebra::Ring for OddPoly {
    fn plus(&self, other: &Self) -> Self {
        OddPoly::add(self, other)
    }
    fn minus(&self, other: &Self) -> Self {
        OddPoly::sub(self, other)
    }
    fn times(&self, other: &Self) -> Self {
        OddPoly::mul(self, other)
    }
    fn negated(&self) -> Self {
        OddPoly::neg(self)
    }
    fn from_rational(q: &Q) -> Self {
        Self::constant(q.clone())
    }
    fn scale(&self, q: &Q) -> Self {
        OddPoly::scale(self, q)
    }
}

/// `Σ_k p^k / k!` truncated at `cap`; `p` must have no constant term.
pub fn poly_exp(p: &OddPoly, cap: Cap) -> Result<OddPoly> {
    if !p.constant_term().is_zero() {
        return Err(Error::NonzeroConstant);
    }
    let cap = cap.min(p.cap());
    // Each term must gain weight on a side with a finite cap, or the series
    // would not terminate.
    for m in p.terms.keys() {
        let (wp, wn) = m.weights();
        let grows = (wp > 0 && cap.pos < UNBOUNDED) || (wn > 0 && cap.neg < UNBOUNDED);
        if !grows {
            return Err(Error::UnboundedCap);
        }
    }
    let mut total = OddPoly::constant(Q::one()).truncate(cap);
    let mut term = total.clone();
    let mut k = 1i64;
    loop {
        term = term.mul(p).truncate(cap).scale(&rational::q(1, k));
        if term.is_empty() {
            break;
        }
        total = total.add(&term);
        k += 1;
    }
    Ok(total.truncate(cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use proptest::prelude::*;

    fn t(n: i32) -> OddPoly {
        OddPoly::var(Var::t(n))
    }

    fn c(x: Q) -> OddPoly {
        OddPoly::constant(x)
    }

    #[test]
    fn exp_of_t1() {
        let e = poly_exp(&t(1), Cap::new(3)).unwrap();
        let expected = c(qi(1))
            .add(&t(1))
            .add(&t(1).pow(2).scale(&q(1, 2)))
            .add(&t(1).pow(3).scale(&q(1, 6)));
        assert_eq!(e, expected);
        assert_eq!(e.cap(), Cap::new(3));
    }

    #[test]
    fn exp_of_zero_is_one() {
        assert_eq!(poly_exp(&OddPoly::zero(), Cap::new(5)).unwrap(), c(qi(1)));
    }

    #[test]
    fn exp_of_two_t1_plus_two_t3() {
        // brute-force Taylor oracle: expand Σ_k (2t1+2t3)^k/k! by hand to weight 3
        // k=1: 2t1 + 2t3; k=2: (4t1² + ...)/2 -> 2t1²; k=3: 8t1³/6 -> 4/3 t1³
        let p = t(1).scale(&qi(2)).add(&t(3).scale(&qi(2)));
        let e = poly_exp(&p, Cap::new(3)).unwrap();
        let expected = c(qi(1))
            .add(&t(1).scale(&qi(2)))
            .add(&t(1).pow(2).scale(&qi(2)))
            .add(&t(1).pow(3).scale(&q(4, 3)))
            .add(&t(3).scale(&qi(2)));
        assert_eq!(e, expected);
    }

    #[test]
    fn exp_rejects_constant_term() {
        assert_eq!(
            poly_exp(&c(qi(1)).add(&t(1)), Cap::new(3)),
            Err(Error::NonzeroConstant)
        );
        assert_eq!(poly_exp(&t(1), Cap::unbounded()), Err(Error::UnboundedCap));
    }

    #[test]
    fn product_cap_uses_valuation() {
        // f known to weight 4, g exactly t3^2 (weight 6): f*g is known to 10
        let f = poly_exp(&t(1), Cap::new(4)).unwrap();
        let g = t(3).pow(2);
        let prod = f.mul(&g);
        assert_eq!(prod.cap().pos, 10);
        assert_eq!(prod.weighted_degree(), 10);
        // two truncated factors: min of (cap + valuation)
        let h = poly_exp(&t(3), Cap::new(7)).unwrap().sub(&c(qi(1)));
        assert_eq!(f.mul(&h).cap().pos, 4 + 3);
    }

    #[test]
    fn derivative_lowers_cap() {
        let f = poly_exp(&t(1).add(&t(3)), Cap::new(6)).unwrap();
        let d = f.derivative(Var::t(3));
        assert_eq!(d.cap().pos, 3);
        // d/dt3 e^{t1+t3} = e^{t1+t3}
        assert_eq!(d, f.truncate(Cap::new(3)));
    }

    #[test]
    fn var_parsing_and_display() {
        let v: Var = "t-3'".parse().unwrap();
        assert_eq!(v, Var::t(-3).primed());
        assert_eq!(alloc::format!("{v}"), "t-3'");
        assert!("t2".parse::<Var>().is_err());
        assert!("x1".parse::<Var>().is_err());
        let p = t(1).pow(2).scale(&q(-1, 2)).add(&t(3)).add(&c(qi(2)));
        assert_eq!(alloc::format!("{p}"), "2 - 1/2*t1^2 + t3");
    }

    #[test]
    fn two_sided_caps() {
        let f = poly_exp(&t(1).mul(&t(-1)).scale(&q(1, 2)), Cap::bi(3, 2)).unwrap();
        // e^{t1 t-1 / 2} to bidegree (3, 2): 1 + x + x²/2 with x = t1 t-1 / 2
        assert_eq!(f.len(), 3);
        assert_eq!(
            f.coeff(&Monomial::from_pairs([(Var::t(1), 2), (Var::t(-1), 2)])),
            q(1, 8)
        );
    }

    fn small_poly() -> impl Strategy<Value = OddPoly> {
        proptest::collection::vec((0u32..3, 0u32..2, 0u32..2, -4i64..5), 0..5).prop_map(|v| {
            let mut p = OddPoly::zero();
            for (a, b, e, k) in v {
                let m = Monomial::from_pairs([(Var::t(1), a), (Var::t(3), b), (Var::t(5), e)]);
                if !m.is_one() {
                    p.add_term(m, qi(k));
                }
            }
            p
        })
    }

    proptest! {
        #[test]
        fn exp_inverse(a in small_poly()) {
            let cap = Cap::new(8);
            let e1 = poly_exp(&a, cap).unwrap();
            let e2 = poly_exp(&a.neg(), cap).unwrap();
            prop_assert_eq!(e1.mul(&e2).truncate(cap), c(qi(1)));
        }

        #[test]
        fn multiplication_commutes_and_distributes(a in small_poly(), b in small_poly(), d in small_poly()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&d)), a.mul(&b).add(&a.mul(&d)));
        }
    }
}
