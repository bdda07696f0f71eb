//! Schur Q- and P-functions and vacuum expectations of neutral fermions.
//!
//! Everything is expressed through a table of `q_k`, the coefficients of
//! `exp(s Σ_{n odd} t_n z^n)`. With `s = 1` they are `q_k(t/2)`, the values
//! that enter every Pfaffian below; with `s = 2` they are `q_k(t)`.
//!
//! Fermion expectations use the contraction table
//! `⟨φ_m φ_n⟩ = (-1)^m δ_{m,-n}` for `n > 0`, `1/2 δ_{m,0}` for `n = 0`
//! and `0` for `n < 0`, transported through the time evolution
//! `φ_i ↦ Σ_k q_k(t/2) φ_{i-k}`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Pow, Zero};

use crate::algebra::{Ring, Sqrt2Scaled};
use crate::error::{Error, Result};
use crate::partition::StrictPartition;
use crate::pfaffian::{pfaffian_even, SkewMatrix};
use crate::rational::{self, Q};
use crate::series::{exp_xi, Cap, OddPoly, TimeVector, Var, Window, UNBOUNDED};

/// Argument scaling of the time variables in `q_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    /// `q_k(t)`, generated by `e^{2ξ(t,z)}`.
    Full,
    /// `q_k(t/2)`, generated by `e^{ξ(t,z)}`.
    Half,
}

impl Scale {
    fn factor(self) -> Q {
        match self {
            Scale::Full => rational::qi(2),
            Scale::Half => Q::one(),
        }
    }
}

/// Cached `q_0, …, q_{k_max}` over some ring; `q_k = 0` for `k < 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct QTable<T> {
    q: Vec<T>,
}

impl<T: Ring> QTable<T> {
    pub fn from_values(q: Vec<T>) -> Self {
        assert!(!q.is_empty(), "q-table needs at least q_0");
        Self { q }
    }

    /// The table at `t = 0`: `q_0 = 1`, all others zero.
    pub fn vacuum(k_max: u32) -> Self {
        let mut q = vec![T::zero(); k_max as usize + 1];
        q[0] = T::one();
        Self { q }
    }

    pub fn k_max(&self) -> i64 {
        self.q.len() as i64 - 1
    }

    pub fn get(&self, k: i64) -> Result<T> {
        if k < 0 {
            return Ok(T::zero());
        }
        self.q.get(k as usize).cloned().ok_or(Error::TableTooShort {
            k,
            max: self.k_max(),
        })
    }

    pub fn values(&self) -> &[T] {
        &self.q
    }
}

impl QTable<OddPoly> {
    /// `q_k` as polynomials in `t_1, t_3, …` for `k ≤ k_max`.
    pub fn symbolic(k_max: u32, scale: Scale) -> Self {
        Self::symbolic_on(k_max, &scale.factor(), false, false)
    }

    /// Coefficients of `exp(s Σ_n v_n z^n)` where `v_n` is `t_n`, or
    /// `t_{-n}` when `negative`, primed when `primed`.
    pub fn symbolic_on(k_max: u32, s: &Q, negative: bool, primed: bool) -> Self {
        let mut a = BTreeMap::new();
        for n in (1..=k_max as i32).step_by(2) {
            let idx = if negative { -n } else { n };
            let v = if primed {
                Var::t(idx).primed()
            } else {
                Var::t(idx)
            };
            a.insert(n, OddPoly::var(v).scale(s));
        }
        let cap = if negative {
            Cap::bi(UNBOUNDED, k_max as i64)
        } else {
            Cap::bi(k_max as i64, UNBOUNDED)
        };
        let series =
            exp_xi(&a, cap, Window::new(0, k_max as i32)).expect("weights match exponents");
        let q = (0..=k_max as i32)
            .map(|k| series.coeff(k).expect("inside window"))
            .collect();
        Self { q }
    }
}

impl QTable<Q> {
    /// `q_k(t/2)` at Miwa times `t_n = (2/n) Σ x_i^n`, i.e. the coefficients
    /// of `∏_i (1 + x_i z)/(1 - x_i z)`.
    pub fn miwa(x: &[Q], k_max: u32) -> Self {
        let len = k_max as usize + 1;
        let mut q = vec![Q::zero(); len];
        q[0] = Q::one();
        for xi in x {
            // (1 + xz)/(1 - xz) = 1 + Σ_{k≥1} 2 x^k z^k
            let factor: Vec<Q> = (0..len)
                .map(|k| {
                    if k == 0 {
                        Q::one()
                    } else {
                        rational::qi(2) * xi.clone().pow(k as u32)
                    }
                })
                .collect();
            q = (0..len)
                .map(|k| (0..=k).map(|j| &q[j] * &factor[k - j]).sum())
                .collect();
        }
        Self { q }
    }

    /// Coefficients of `exp(s Σ t_n z^n)` at numeric times (positive
    /// indices only); `s = 1` gives `q_k(t/2)`.
    pub fn at_times(t: &TimeVector, s: &Q, k_max: u32) -> Self {
        let mut q = vec![Q::one()];
        for k in 1..=k_max as i64 {
            let mut acc = Q::zero();
            for n in (1..=k).step_by(2) {
                let tn = t.get(n as i32);
                if !tn.is_zero() {
                    acc += Q::from_integer(n.into()) * s * tn * &q[(k - n) as usize];
                }
            }
            q.push(acc / Q::from_integer(k.into()));
        }
        Self { q }
    }
}

/// `q_{a,b} = q_a q_b + 2 Σ_{k=1}^{b} (-1)^k q_{a+k} q_{b-k}`.
///
/// Skew for `(a,b) ≠ (0,0)`; `q_{0,0} = 1`.
pub fn q_pair<T: Ring>(table: &QTable<T>, a: i64, b: i64) -> Result<T> {
    let mut acc = table.get(a)?.times(&table.get(b)?);
    for k in 1..=b {
        let term = table
            .get(a + k)?
            .times(&table.get(b - k)?)
            .scale(&rational::qi(2));
        acc = if k % 2 == 1 {
            acc.minus(&term)
        } else {
            acc.plus(&term)
        };
    }
    Ok(acc)
}

/// `⟨0| e^{H_+(t)} φ_a φ_b |0⟩` for any integers `a`, `b`, from a
/// half-scale table.
pub fn two_point<T: Ring>(table: &QTable<T>, a: i64, b: i64) -> Result<T> {
    let mut acc = if a >= 0 && b >= 0 {
        table
            .get(a)?
            .times(&table.get(b)?)
            .scale(&rational::q(1, 2))
    } else {
        T::zero()
    };
    for k in 1.max(-a)..=b {
        let term = table.get(a + k)?.times(&table.get(b - k)?);
        acc = if k % 2 == 1 {
            acc.minus(&term)
        } else {
            acc.plus(&term)
        };
    }
    Ok(acc)
}

/// Wick evaluation of `⟨0| e^{H_+(t)} φ_{m_1} ⋯ φ_{m_{2n}} |0⟩`.
pub fn vev_modes<T: Ring>(table: &QTable<T>, modes: &[i64]) -> Result<T> {
    if modes.len() % 2 == 1 {
        return Err(Error::OddModeCount(modes.len()));
    }
    let n = modes.len();
    let mut m = SkewMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, two_point(table, modes[i], modes[j])?);
        }
    }
    pfaffian_even(&m)
}

/// A finite linear combination `Σ c_i φ_i` of fermion modes.
pub type ModeCombo = Vec<(i64, Q)>;

/// Wick evaluation for products of mode combinations.
pub fn vev_combos<T: Ring>(table: &QTable<T>, ops: &[ModeCombo]) -> Result<T> {
    if ops.len() % 2 == 1 {
        return Err(Error::OddModeCount(ops.len()));
    }
    let n = ops.len();
    let mut m = SkewMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let mut acc = T::zero();
            for (a, ca) in &ops[i] {
                for (b, cb) in &ops[j] {
                    let v = two_point(table, *a, *b)?;
                    if !v.is_zero() {
                        acc = acc.plus(&v.scale(&(ca * cb)));
                    }
                }
            }
            m.set(i, j, acc);
        }
    }
    pfaffian_even(&m)
}

/// Pfaffian form of `Q_λ(t)` from a half-scale table: `Pf(q_{λ_i,λ_j})`,
/// bordered by the column `q_{λ_i}` when `l(λ)` is odd.
pub fn schur_q<T: Ring>(table: &QTable<T>, lambda: &StrictPartition) -> Result<T> {
    let parts: Vec<i64> = lambda.parts().iter().map(|&p| p as i64).collect();
    let l = parts.len();
    let n = l + l % 2;
    let mut m = SkewMatrix::zeros(n);
    for i in 0..l {
        for j in i + 1..l {
            m.set(i, j, q_pair(table, parts[i], parts[j])?);
        }
        if l % 2 == 1 {
            m.set(i, l, table.get(parts[i])?);
        }
    }
    pfaffian_even(&m)
}

/// `P_λ = 2^{-l(λ)} Q_λ`.
pub fn schur_p<T: Ring>(table: &QTable<T>, lambda: &StrictPartition) -> Result<T> {
    Ok(schur_q(table, lambda)?.scale(&rational::pow2(-(lambda.len() as i32))))
}

/// `Q_λ` from the fermionic side: `2^{l/2} ⟨φ_{λ_1} ⋯ φ_{λ_l}⟩`, with mode
/// `0` appended and one more `√2` when `l` is odd.
pub fn schur_q_via_vev<T: Ring>(table: &QTable<T>, lambda: &StrictPartition) -> Result<T> {
    let mut modes: Vec<i64> = lambda.parts().iter().map(|&p| p as i64).collect();
    let mut half_exp = modes.len() as i32;
    if modes.len() % 2 == 1 {
        modes.push(0);
        half_exp += 1;
    }
    Sqrt2Scaled::new(vev_modes(table, &modes)?, half_exp).into_exact()
}

/// `Q_λ(x)` at a point specialization.
pub fn schur_q_at(lambda: &StrictPartition, x: &[Q]) -> Result<Q> {
    let k = lambda.parts().iter().take(2).sum::<u32>();
    schur_q(&QTable::miwa(x, k), lambda)
}

/// `P_λ(x)` at a point specialization.
pub fn schur_p_at(lambda: &StrictPartition, x: &[Q]) -> Result<Q> {
    let k = lambda.parts().iter().take(2).sum::<u32>();
    schur_p(&QTable::miwa(x, k), lambda)
}

/// `⟨φ(z) φ(w)⟩ = ½ (1 - w/z)/(1 + w/z)` for `|w| < |z|`.
pub fn wick_pair(z: &Q, w: &Q) -> Result<Q> {
    let r = w / z;
    if r.clone().pow(2u32) >= Q::one() {
        return Err(Error::Divergent(alloc::format!(
            "|{w}| must be below |{z}|"
        )));
    }
    Ok((Q::one() - &r) / (Q::one() + &r) * rational::q(1, 2))
}

/// `⟨φ(z) φ(w)⟩` summed from the vacuum contraction table: the modes
/// `|n| ≤ cutoff` exactly, plus the closed geometric remainder
/// `Σ_{n > cutoff} (-w/z)^n`.
pub fn wick_pair_from_modes(z: &Q, w: &Q, cutoff: u32) -> Result<Q> {
    let r = w / z;
    if r.clone().pow(2u32) >= Q::one() {
        return Err(Error::Divergent(alloc::format!(
            "|{w}| must be below |{z}|"
        )));
    }
    let table = QTable::<Q>::vacuum(2 * cutoff);
    let mut acc = Q::zero();
    let c = cutoff as i64;
    for m in -c..=c {
        for n in -c..=c {
            let v = two_point(&table, m, n)?;
            if !v.is_zero() {
                acc += v * zpow(z, m) * zpow(w, n);
            }
        }
    }
    let minus_r = -r;
    let tail = minus_r.clone().pow(cutoff + 1) / (Q::one() - minus_r);
    Ok(acc + tail)
}

fn zpow(z: &Q, k: i64) -> Q {
    if k >= 0 {
        z.clone().pow(k as u32)
    } else {
        z.recip().pow((-k) as u32)
    }
}

/// `Pf(⟨φ(z_i) φ(z_j)⟩)_{i<j}` with pair values from [`wick_pair_from_modes`].
pub fn wick_pfaffian(z: &[Q], cutoff: u32) -> Result<Q> {
    let n = z.len();
    let mut m = SkewMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, wick_pair_from_modes(&z[i], &z[j], cutoff)?);
        }
    }
    pfaffian_even(&m)
}

/// `2^{-s} ∏_{j<j'} (1 - z_{j'}/z_j)/(1 + z_{j'}/z_j)` for `2s` points.
pub fn wick_product(z: &[Q]) -> Result<Q> {
    if z.len() % 2 == 1 {
        return Err(Error::OddModeCount(z.len()));
    }
    let mut acc = rational::pow2(-(z.len() as i32 / 2));
    for j in 0..z.len() {
        for k in j + 1..z.len() {
            let r = &z[k] / &z[j];
            acc *= (Q::one() - &r) / (Q::one() + r);
        }
    }
    Ok(acc)
}
