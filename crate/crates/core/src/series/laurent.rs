use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Pow};

use super::poly::{Cap, Monomial, OddPoly, Var, UNBOUNDED};
use crate::error::{Error, Result};
use crate::rational::{self, Q};

/// Inclusive range of `z`-exponents a series may occupy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: i32,
    pub hi: i32,
}

impl Window {
    pub fn new(lo: i32, hi: i32) -> Self {
        assert!(lo <= hi, "empty window [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn symmetric(r: i32) -> Self {
        Self::new(-r, r)
    }

    pub fn contains(&self, k: i32) -> bool {
        self.lo <= k && k <= self.hi
    }

    fn check(&self, k: i32) -> Result<()> {
        if self.contains(k) {
            Ok(())
        } else {
            Err(Error::WindowOverflow {
                exponent: k,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }
}

/// Laurent polynomial in `z` with [`OddPoly`] coefficients.
///
/// Every coefficient inside the window is tracked. Coefficients outside it
/// are zero up to the cap `outside`: for an exactly finite series that cap
/// is unbounded, for a truncated exponential it is the degree cap used to
/// build it. Operations that would put a nonzero term outside the window
/// fail with [`Error::WindowOverflow`].
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries {
    coeffs: BTreeMap<i32, OddPoly>,
    window: Window,
    outside: Cap,
}

impl LaurentSeries {
    pub fn zero(window: Window) -> Self {
        Self {
            coeffs: BTreeMap::new(),
            window,
            outside: Cap::unbounded(),
        }
    }

    /// `p · z^0`.
    pub fn constant(p: OddPoly, window: Window) -> Result<Self> {
        let mut s = Self::zero(window);
        s.add_at(0, &p)?;
        Ok(s)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Cap up to which exponents outside the window are known to vanish.
    pub fn outside_cap(&self) -> Cap {
        self.outside
    }

    pub fn coeff(&self, k: i32) -> Result<OddPoly> {
        self.window.check(k)?;
        Ok(self
            .coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| OddPoly::zero_with_cap(self.outside)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &OddPoly)> {
        self.coeffs.iter().map(|(&k, p)| (k, p))
    }

    /// Adds `p · z^k`.
    pub fn add_at(&mut self, k: i32, p: &OddPoly) -> Result<()> {
        if p.is_empty() {
            return Ok(());
        }
        self.window.check(k)?;
        let entry = self
            .coeffs
            .entry(k)
            .or_insert_with(|| OddPoly::zero_with_cap(Cap::unbounded()));
        *entry = entry.add(p);
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.outside = self.outside.min(other.outside);
        for (&k, p) in &other.coeffs {
            out.add_at(k, p)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&k, p)| (k, p.scale(c)))
                .filter(|(_, p)| !p.is_empty())
                .collect(),
            ..self.clone()
        }
    }

    /// Multiplies every coefficient by the same polynomial.
    pub fn mul_poly(&self, p: &OddPoly) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&k, c)| (k, c.mul(p)))
                .filter(|(_, c)| !c.is_empty())
                .collect(),
            ..self.clone()
        }
    }

    /// Convolution product, laid out in `window`.
    pub fn mul(&self, other: &Self, window: Window) -> Result<Self> {
        let outside = self.outside.min(other.outside);
        let mut out = Self {
            coeffs: BTreeMap::new(),
            window,
            outside,
        };
        for (&i, a) in &self.coeffs {
            for (&j, b) in &other.coeffs {
                let prod = a.mul(b).truncate(outside);
                out.add_at(i + j, &prod)?;
            }
        }
        if !outside.is_unbounded() {
            for p in out.coeffs.values_mut() {
                *p = p.truncate(outside);
            }
        }
        Ok(out)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&OddPoly) -> OddPoly) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&k, p)| (k, f(p)))
                .filter(|(_, p)| !p.is_empty())
                .collect(),
            ..self.clone()
        }
    }

    /// Replaces `z` by `1/z`.
    pub fn invert_z(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&k, p)| (-k, p.clone())).collect(),
            window: Window::new(-self.window.hi, -self.window.lo),
            outside: self.outside,
        }
    }

    /// Evaluates at a numeric `z`, giving a polynomial in the times.
    pub fn eval_z(&self, z: &Q) -> OddPoly {
        let mut out = OddPoly::zero_with_cap(self.outside);
        for (&k, p) in &self.coeffs {
            let zk = if k >= 0 {
                z.clone().pow(k as u32)
            } else {
                z.recip().pow((-k) as u32)
            };
            out = out.add(&p.scale(&zk));
        }
        out
    }
}

/// Coefficient of `z^0`, the formal contour integral `∮ dz/(2πi z)`.
pub fn residue_z0(s: &LaurentSeries) -> Result<OddPoly> {
    s.coeff(0)
}

/// Which way a Miwa shift moves the times.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftSign {
    /// `t - [z^{-1}]`
    Minus,
    /// `t + [z^{-1}]`
    Plus,
}

/// `p(t ∓ [z^{-1}])` on the unprimed positive times, with
/// `[z^{-1}]_n = 2 z^{-n} / n`.
pub fn miwa_shift(p: &OddPoly, sign: ShiftSign, window: Window) -> Result<LaurentSeries> {
    miwa_shift_on(p, sign, false, false, window)
}

/// General Miwa shift. `primed` selects the primed copy of the times;
/// `negative` shifts `t_{-n} → t_{-n} ∓ 2 z^n / n` instead of the positive
/// times. The coefficient of `z^{∓k}` loses `k` from the cap of the
/// shifted side.
pub fn miwa_shift_on(
    p: &OddPoly,
    sign: ShiftSign,
    primed: bool,
    negative: bool,
    window: Window,
) -> Result<LaurentSeries> {
    let s = match sign {
        ShiftSign::Minus => -Q::one(),
        ShiftSign::Plus => Q::one(),
    };
    let shifted = |v: Var| v.is_primed() == primed && v.is_negative() == negative;
    let mut acc: BTreeMap<i32, OddPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        // Expand each shifted factor binomially; the rest stays put.
        let mut fixed = Vec::new();
        let mut partial: BTreeMap<i32, OddPoly> = BTreeMap::new();
        partial.insert(0, OddPoly::constant(c.clone()));
        for &(v, e) in m.factors() {
            if !shifted(v) {
                fixed.push((v, e));
                continue;
            }
            let w = v.weight() as i32;
            let dir = if negative { w } else { -w };
            let a = &s * rational::q(2, w as i64);
            let mut next: BTreeMap<i32, OddPoly> = BTreeMap::new();
            for j in 0..=e {
                let coef = Q::from_integer(rational::binomial(e, j)) * a.clone().pow(j);
                let factor = OddPoly::term(coef, Monomial::var(v, e - j));
                for (&k, q) in &partial {
                    let slot = next.entry(k + dir * j as i32).or_insert_with(OddPoly::zero);
                    *slot = slot.add(&q.mul(&factor));
                }
            }
            partial = next;
        }
        let rest = OddPoly::term(Q::one(), Monomial::from_pairs(fixed));
        for (k, q) in partial {
            let slot = acc.entry(k).or_insert_with(OddPoly::zero);
            *slot = slot.add(&q.mul(&rest));
        }
    }
    let cap = p.cap();
    let mut out = LaurentSeries::zero(window);
    for (k, q) in acc {
        let lost = k.unsigned_abs() as i64;
        let lowered = |c: i64| if c >= UNBOUNDED { UNBOUNDED } else { c - lost };
        let kcap = if negative {
            Cap::bi(cap.pos, lowered(cap.neg))
        } else {
            Cap::bi(lowered(cap.pos), cap.neg)
        };
        out.add_at(k, &q.truncate(kcap))?;
    }
    Ok(out)
}

/// `exp(Σ_n a_n z^n)` for linear coefficients `a_n` that all sit on the
/// same side of `z^0`.
///
/// Each `a_n` must carry at least `|n|` units of weight on sides with a
/// finite cap, so the coefficient of `z^{±k}` has weight `≥ k` and the
/// series ends after the sum of the finite caps. The result is exact
/// within `cap`; exponents beyond that vanish up to `cap`.
pub fn exp_xi(a: &BTreeMap<i32, OddPoly>, cap: Cap, window: Window) -> Result<LaurentSeries> {
    let positive = a.keys().all(|&n| n > 0);
    let negative = a.keys().all(|&n| n < 0);
    if !(positive || negative) {
        return Err(Error::Invalid(
            "exp_xi needs all z-exponents on one side".into(),
        ));
    }
    let mut bound = 0i64;
    if cap.pos < UNBOUNDED {
        bound += cap.pos.max(0);
    }
    if cap.neg < UNBOUNDED {
        bound += cap.neg.max(0);
    }
    if cap.is_unbounded() && !a.is_empty() {
        return Err(Error::UnboundedCap);
    }
    for (&n, p) in a {
        for (m, _) in p.terms() {
            let (wp, wn) = m.weights();
            let mut w = 0;
            if cap.pos < UNBOUNDED {
                w += wp;
            }
            if cap.neg < UNBOUNDED {
                w += wn;
            }
            if w < n.unsigned_abs() as i64 {
                return Err(Error::Invalid(alloc::format!(
                    "coefficient of z^{n} is too light to truncate"
                )));
            }
        }
    }
    // k h_k = Σ_n n a_n h_{k-n}, written in |n|.
    let mut h: Vec<OddPoly> = alloc::vec![OddPoly::constant(Q::one()).truncate(cap)];
    for k in 1..=bound {
        let mut acc = OddPoly::zero_with_cap(cap);
        for (&n, an) in a {
            let step = n.unsigned_abs() as i64;
            if step > k {
                continue;
            }
            let term = an
                .mul(&h[(k - step) as usize])
                .scale(&Q::from_integer((step).into()));
            acc = acc.add(&term);
        }
        h.push(acc.scale(&rational::q(1, k)).truncate(cap));
    }
    let mut out = LaurentSeries::zero(window);
    out.outside = cap;
    for (k, hk) in h.iter().enumerate() {
        let e = if positive { k as i32 } else { -(k as i32) };
        out.add_at(e, hk)?;
    }
    Ok(out)
}
