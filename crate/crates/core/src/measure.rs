//! The shifted Schur measure `M(λ) = P_λ(x) Q_λ(y) / Z` on strict
//! partitions, its correlation functions `ρ(A) = M(λ : A ⊂ λ)`, and the
//! Pfaffian kernel that reproduces them.
//!
//! Kernel coefficients. Conjugating `φ_a` by the two time evolutions gives
//! `Φ_a = Σ_m f_m φ_{a-m}`, where `Σ_m f_m z^m` is
//! `F(z) = ∏_i (1 + x_i z)/(1 - x_i z) · ∏_j (1 - y_j/z)/(1 + y_j/z)`,
//! so `f_m = Σ_{j≥0} q_{m+j}(x) g_j(y)` with `g_j` the coefficients of
//! `∏(1 - y w)/(1 + y w)`. Contracting two such fields with the vacuum
//! table gives
//!
//! `K(a, b) = ½ f_a f_b + Σ_{k≥1} (-1)^k f_{a+k} f_{b-k}`,
//!
//! and `ρ(A) = ∏_{a∈A} (-1)^a · Pf[K(u_i, u_j)]` over the ordering
//! `u = (a_1 > … > a_s, -a_s, …, -a_1)`. The sign factor was fixed against
//! the brute-force sum and is covered by tests.
//!
//! Error control. With `X = max x`, `Y = max y`, `σ = (XY)^{-1/4}`,
//! `α = Xσ`, `β = Yσ` (so `αβ = √(XY) < 1`), Cauchy estimates on circles of
//! radius `1/α` and `1/β` give `|q_k| ≤ M_1 α^k`, `|g_j| ≤ M_2 β^j` with
//! `M_1 = ∏(1 + x/α)/(1 - x/α)` and `M_2` likewise. Every truncated sum
//! below is bounded by the corresponding geometric tail.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partition::StrictPartition;
use crate::pfaffian::{pfaffian_f64, SkewMatrix, DEFAULT_SINGULAR_TOL};
use crate::rational::{self, Q};
use crate::schurq::{schur_q, QTable};

const EPS: f64 = f64::EPSILON;

/// Coefficient accuracy below which float rounding dominates.
const COEFF_TOL_FLOOR: f64 = 2e-13;

/// Two point specializations `x`, `y` with entries in `(0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecPair {
    x: Vec<Q>,
    y: Vec<Q>,
}

impl SpecPair {
    pub fn new(x: Vec<Q>, y: Vec<Q>) -> Result<Self> {
        for v in x.iter().chain(&y) {
            if *v <= Q::zero() || *v >= Q::one() {
                return Err(Error::Divergent(alloc::format!("{v} is not in (0, 1)")));
            }
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &[Q] {
        &self.x
    }

    pub fn y(&self) -> &[Q] {
        &self.y
    }

    /// `max x · max y`.
    pub fn r(&self) -> Q {
        max_or_zero(&self.x) * max_or_zero(&self.y)
    }

    /// `Q_λ` vanishes for `l(λ)` above the number of variables on either side.
    pub fn max_length(&self) -> usize {
        self.x.len().min(self.y.len())
    }
}

fn max_or_zero(v: &[Q]) -> Q {
    v.iter().cloned().max().unwrap_or_else(Q::zero)
}

/// `Z = ∏_{i,j} (1 + x_i y_j)/(1 - x_i y_j)`.
pub fn z_value(spec: &SpecPair) -> Q {
    let mut z = Q::one();
    for xi in &spec.x {
        for yj in &spec.y {
            let p = xi * yj;
            z *= (Q::one() + &p) / (Q::one() - p);
        }
    }
    z
}

/// `Σ_{n odd ≤ n_max} (n/2) t_n t_{-n}` at Miwa times, which tends to `log Z`.
pub fn log_z_series(spec: &SpecPair, n_max: u32) -> f64 {
    let mut acc = 0.0;
    for n in (1..=n_max).step_by(2) {
        let px: f64 = spec
            .x
            .iter()
            .map(|v| libm::pow(rational::to_f64(v), n as f64))
            .sum();
        let py: f64 = spec
            .y
            .iter()
            .map(|v| libm::pow(rational::to_f64(v), n as f64))
            .sum();
        let (tp, tm) = (2.0 / n as f64 * px, 2.0 / n as f64 * py);
        acc += n as f64 / 2.0 * tp * tm;
    }
    acc
}

/// Precomputed `q`-tables for both specializations.
#[derive(Clone, Debug)]
pub struct MeasureTables {
    qx: QTable<Q>,
    qy: QTable<Q>,
    z_inv: Q,
}

impl MeasureTables {
    /// Tables good for partitions with largest part at most `max_part`.
    pub fn new(spec: &SpecPair, max_part: u32) -> Self {
        Self {
            qx: QTable::miwa(&spec.x, 2 * max_part),
            qy: QTable::miwa(&spec.y, 2 * max_part),
            z_inv: z_value(spec).recip(),
        }
    }

    /// `M(λ) = 2^{-l} Q_λ(x) Q_λ(y) / Z`.
    pub fn weight(&self, lambda: &StrictPartition) -> Result<Q> {
        let qx = schur_q(&self.qx, lambda)?;
        if qx.is_zero() {
            return Ok(qx);
        }
        let qy = schur_q(&self.qy, lambda)?;
        Ok(qx * qy * rational::pow2(-(lambda.len() as i32)) * &self.z_inv)
    }
}

/// `M(λ)` for a single partition.
pub fn measure_weight(lambda: &StrictPartition, spec: &SpecPair) -> Result<Q> {
    MeasureTables::new(spec, lambda.largest()).weight(lambda)
}

/// `Σ_{λ_1 ≤ n} P_λ(x) Q_λ(y)`, the truncated Cauchy sum.
pub fn cauchy_partial_sum(spec: &SpecPair, n: u32) -> Result<Q> {
    let tables = MeasureTables::new(spec, n);
    let z = z_value(spec);
    let mut acc = Q::zero();
    for lambda in StrictPartition::bounded(n, spec.max_length()) {
        acc += tables.weight(&lambda)?;
    }
    Ok(acc * z)
}

/// Exact partial sum of `ρ(A)` and a rigorous bound on what is missing.
#[derive(Clone, Debug, PartialEq)]
pub struct BruteRho {
    pub value: Q,
    /// `1 - Σ_{λ_1 ≤ N} M(λ)`; all weights are nonnegative, so the
    /// omitted part of `ρ(A)` is at most this.
    pub tail_bound: Q,
    pub cutoff: u32,
}

/// `ρ(A)` by summing `M(λ)` over strict `λ ⊇ A` with `λ_1 ≤ cutoff`.
pub fn rho_brute(a: &[u32], spec: &SpecPair, cutoff: u32) -> Result<BruteRho> {
    let max = a.iter().copied().max().unwrap_or(0);
    if cutoff < max {
        return Err(Error::CutoffTooSmall { cutoff, max });
    }
    if a.contains(&0) {
        return Err(Error::Invalid(
            "correlation sets hold positive integers".into(),
        ));
    }
    let tables = MeasureTables::new(spec, cutoff);
    let mut value = Q::zero();
    let mut total = Q::zero();
    for lambda in StrictPartition::bounded(cutoff, spec.max_length()) {
        let w = tables.weight(&lambda)?;
        if a.iter().all(|&p| lambda.contains(p)) {
            value += &w;
        }
        total += w;
    }
    Ok(BruteRho {
        value,
        tail_bound: Q::one() - total,
        cutoff,
    })
}

/// Raises the cutoff until the tail bound drops below `tol`.
pub fn rho_brute_to_tol(a: &[u32], spec: &SpecPair, tol: f64) -> Result<BruteRho> {
    let mut cutoff = a.iter().copied().max().unwrap_or(0).max(1);
    loop {
        let r = rho_brute(a, spec, cutoff)?;
        if rational::to_f64(&r.tail_bound) <= tol {
            return Ok(r);
        }
        if cutoff >= 400 {
            return Err(Error::Tolerance {
                requested: tol,
                achieved: rational::to_f64(&r.tail_bound),
            });
        }
        cutoff += 4;
    }
}

/// Constants of the Cauchy estimates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailConstants {
    pub alpha: f64,
    pub beta: f64,
    /// `M_1 M_2`.
    pub m12: f64,
    /// `M_1 M_2 / (1 - αβ)`, so `|f_m| ≤ C α^m` (`m ≥ 0`), `C β^{|m|}` (`m < 0`).
    pub c: f64,
}

impl TailConstants {
    pub fn new(spec: &SpecPair) -> Self {
        let xs: Vec<f64> = spec.x.iter().map(rational::to_f64).collect();
        let ys: Vec<f64> = spec.y.iter().map(rational::to_f64).collect();
        let xm = xs.iter().cloned().fold(0.0, f64::max);
        let ym = ys.iter().cloned().fold(0.0, f64::max);
        let (alpha, beta) = match (xm > 0.0, ym > 0.0) {
            (true, true) => {
                let s = libm::pow(xm * ym, -0.25);
                (xm * s, ym * s)
            }
            (true, false) => (libm::sqrt(xm), 0.0),
            (false, true) => (0.0, libm::sqrt(ym)),
            (false, false) => (0.0, 0.0),
        };
        let bound = |vals: &[f64], rad: f64| {
            vals.iter()
                .map(|v| (1.0 + v / rad) / (1.0 - v / rad))
                .product::<f64>()
        };
        let m1 = if alpha > 0.0 { bound(&xs, alpha) } else { 1.0 };
        let m2 = if beta > 0.0 { bound(&ys, beta) } else { 1.0 };
        let m12 = m1 * m2;
        Self {
            alpha,
            beta,
            m12,
            c: m12 / (1.0 - alpha * beta),
        }
    }

    fn ab(&self) -> f64 {
        self.alpha * self.beta
    }

    /// Bound on `|f_m|`.
    pub fn f_bound(&self, m: i64) -> f64 {
        if m >= 0 {
            self.c * powi0(self.alpha, m)
        } else {
            self.c * powi0(self.beta, -m)
        }
    }

    /// Bound on `Σ_{j > jmax} |q_{m+j} g_j|`.
    fn j_tail(&self, m: i64, jmax: i64) -> f64 {
        let j0 = (jmax + 1).max(-m);
        self.m12 * powi0(self.alpha, m + j0) * powi0(self.beta, j0) / (1.0 - self.ab())
    }

    /// Bound on `Σ_{k > kmax} |f_{a+k} f_{b-k}|` once `kmax ≥ max(-a, b)`.
    fn k_tail(&self, a: i64, b: i64, kmax: i64) -> f64 {
        let k0 = kmax + 1;
        self.c * self.c * powi0(self.alpha, a + k0) * powi0(self.beta, k0 - b) / (1.0 - self.ab())
    }
}

/// `x^k` with `0^0 = 1`.
fn powi0(x: f64, k: i64) -> f64 {
    if k == 0 {
        1.0
    } else {
        libm::pow(x, k as f64)
    }
}

fn miwa_f64(vals: &[f64], k_max: usize, sign: f64) -> Vec<f64> {
    // coefficients of ∏ (1 + s v z)/(1 - s v z)
    let mut q = vec![0.0; k_max + 1];
    q[0] = 1.0;
    for &v in vals {
        let mut next = vec![0.0; k_max + 1];
        for k in 0..=k_max {
            let mut acc = q[k];
            let mut p = 1.0;
            for j in 1..=k {
                p *= sign * v;
                acc += 2.0 * p * q[k - j];
            }
            next[k] = acc;
        }
        q = next;
    }
    q
}

/// Laurent coefficients `f_m` of `F(z)` on a window `[-M, M]`.
#[derive(Clone, Debug)]
pub struct KernelCoeffs {
    f: BTreeMap<i64, f64>,
    window: i64,
    /// Uniform bound on `|f_m - f_m^{computed}|` over the window.
    pub error: f64,
    pub tails: TailConstants,
}

impl KernelCoeffs {
    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn get(&self, m: i64) -> Result<f64> {
        self.f.get(&m).copied().ok_or_else(|| {
            Error::Invalid(alloc::format!(
                "f_{m} lies outside the kernel window [-{w}, {w}]",
                w = self.window
            ))
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.f.iter().map(|(&m, &v)| (m, v))
    }
}

/// `f_m` for `|m| ≤ window` with error at most `tol`.
pub fn kernel_coeffs(spec: &SpecPair, window: i64, tol: f64) -> Result<KernelCoeffs> {
    let tails = TailConstants::new(spec);
    let mut jmax = window.max(1);
    while tails.j_tail(-window, jmax) > tol / 2.0 {
        jmax += 8;
        if jmax > 100_000 {
            return Err(Error::Tolerance {
                requested: tol,
                achieved: tails.j_tail(-window, jmax),
            });
        }
    }
    let xs: Vec<f64> = spec.x.iter().map(rational::to_f64).collect();
    let ys: Vec<f64> = spec.y.iter().map(rational::to_f64).collect();
    let len = (window + jmax) as usize;
    let qx = miwa_f64(&xs, len, 1.0);
    let gy = miwa_f64(&ys, jmax as usize, -1.0);
    let mut f = BTreeMap::new();
    let mut error: f64 = 0.0;
    for m in -window..=window {
        let mut acc = 0.0;
        let mut abs = 0.0;
        for j in 0.max(-m)..=jmax {
            let term = qx[(m + j) as usize] * gy[j as usize];
            acc += term;
            abs += libm::fabs(term);
        }
        let rounding = 2.0 * (jmax as f64 + 2.0) * EPS * abs;
        error = error.max(tails.j_tail(m, jmax) + rounding);
        f.insert(m, acc);
    }
    if error > tol {
        return Err(Error::Tolerance {
            requested: tol,
            achieved: error,
        });
    }
    Ok(KernelCoeffs {
        f,
        window,
        error,
        tails,
    })
}

/// A kernel entry with its error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelValue {
    pub value: f64,
    pub bound: f64,
}

/// `K(a, b) = ½ f_a f_b + Σ_{k≥1} (-1)^k f_{a+k} f_{b-k}` to within `tol`.
pub fn kernel_k(coeffs: &KernelCoeffs, a: i64, b: i64, tol: f64) -> Result<KernelValue> {
    let t = &coeffs.tails;
    let mut kmax = (-a).max(b).max(1);
    while t.k_tail(a, b, kmax) > tol / 2.0 {
        kmax += 1;
        if a + kmax > coeffs.window || kmax - b > coeffs.window {
            return Err(Error::Tolerance {
                requested: tol,
                achieved: t.k_tail(a, b, kmax),
            });
        }
    }
    if a + kmax > coeffs.window
        || kmax - b > coeffs.window
        || a.abs() > coeffs.window
        || b.abs() > coeffs.window
    {
        return Err(Error::Invalid(alloc::format!(
            "K({a},{b}) needs f up to index {} but the window is {}",
            (a + kmax).max(kmax - b),
            coeffs.window
        )));
    }
    let d = coeffs.error;
    let mut prop = 0.0;
    let (fa, fb) = (coeffs.get(a)?, coeffs.get(b)?);
    let mut value = 0.5 * fa * fb;
    let mut abs = libm::fabs(value);
    prop += 0.5 * (d * (libm::fabs(fa) + libm::fabs(fb)) + d * d);
    for k in 1..=kmax {
        let (u, v) = (coeffs.get(a + k)?, coeffs.get(b - k)?);
        let term = u * v;
        value += if k % 2 == 1 { -term } else { term };
        abs += libm::fabs(term);
        prop += d * (libm::fabs(u) + libm::fabs(v)) + d * d;
    }
    let bound = t.k_tail(a, b, kmax) + prop + 2.0 * (kmax as f64 + 2.0) * EPS * abs;
    if bound > tol {
        return Err(Error::Tolerance {
            requested: tol,
            achieved: bound,
        });
    }
    Ok(KernelValue { value, bound })
}

/// Index order `(a_1 > … > a_s, -a_s, …, -a_1)` for a correlation set.
pub fn kernel_order(a: &[u32]) -> Vec<i64> {
    let mut parts: Vec<i64> = a.iter().map(|&v| v as i64).collect();
    parts.sort_unstable_by(|u, v| v.cmp(u));
    parts.dedup();
    let neg: Vec<i64> = parts.iter().rev().map(|v| -v).collect();
    parts.extend(neg);
    parts
}

/// `ρ(A)` from the Pfaffian kernel, with an error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PfRho {
    pub value: f64,
    pub bound: f64,
}

/// `ρ(A) = ∏(-1)^a Pf[K(u_i, u_j)]` to within roughly `tol`.
pub fn rho_pf(a: &[u32], spec: &SpecPair, tol: f64) -> Result<PfRho> {
    if a.contains(&0) {
        return Err(Error::Invalid(
            "correlation sets hold positive integers".into(),
        ));
    }
    let order = kernel_order(a);
    if order.is_empty() {
        return Ok(PfRho {
            value: 1.0,
            bound: 0.0,
        });
    }
    let s = order.len() / 2;
    let perfect_matchings: f64 = (1..=s).map(|k| (2 * k - 1) as f64).product();
    let entry_tol = tol / (4.0 * perfect_matchings * s as f64);
    let tails = TailConstants::new(spec);
    let amax = order[0];
    // The pair (-a_1, a_1) has the slowest k-tail; its cutoff serves all pairs.
    let mut kmax = amax.max(1);
    while tails.k_tail(-amax, amax, kmax) > entry_tol / 4.0 {
        kmax += 1;
        if kmax > 100_000 {
            return Err(Error::Tolerance {
                requested: tol,
                achieved: tails.k_tail(-amax, amax, kmax),
            });
        }
    }
    let window = amax + kmax + 2;
    let f_mass: f64 = (-window..=window).map(|m| tails.f_bound(m)).sum();
    let coeff_tol = (entry_tol / (8.0 * (f_mass + 1.0))).max(COEFF_TOL_FLOOR);
    let coeffs = kernel_coeffs(spec, window, coeff_tol)?;
    let n = order.len();
    let mut m = SkewMatrix::<f64>::zeros(n);
    let mut entry_bound: f64 = 0.0;
    let mut entry_max: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let kv = kernel_k(&coeffs, order[i], order[j], entry_tol)?;
            entry_bound = entry_bound.max(kv.bound);
            entry_max = entry_max.max(libm::fabs(kv.value));
            m.set(i, j, kv.value);
        }
    }
    let sign = if a.iter().map(|&v| v as u64).sum::<u64>() % 2 == 1 {
        -1.0
    } else {
        1.0
    };
    let value = sign * pfaffian_f64(&m, DEFAULT_SINGULAR_TOL);
    // Pf is a sum of (2s-1)!! products of s entries.
    let bound = perfect_matchings
        * s as f64
        * entry_bound
        * libm::pow(entry_max + entry_bound, (s - 1) as f64)
        + 4.0 * EPS * perfect_matchings * libm::pow(entry_max, s as f64);
    if bound > tol {
        return Err(Error::Tolerance {
            requested: tol,
            achieved: bound,
        });
    }
    Ok(PfRho { value, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn spec(x: &[(i64, i64)], y: &[(i64, i64)]) -> SpecPair {
        SpecPair::new(
            x.iter().map(|&(a, b)| q(a, b)).collect(),
            y.iter().map(|&(a, b)| q(a, b)).collect(),
        )
        .unwrap()
    }

    fn sp(p: &[u32]) -> StrictPartition {
        StrictPartition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn partition_function() {
        assert_eq!(z_value(&spec(&[(1, 2)], &[(1, 2)])), q(5, 3));
        assert_eq!(z_value(&spec(&[], &[(1, 2)])), qi(1));
        assert!(SpecPair::new(vec![qi(1)], vec![]).is_err());
        let s = spec(&[(2, 5), (1, 5)], &[(3, 10), (1, 10)]);
        let lz = libm::log(rational::to_f64(&z_value(&s)));
        assert!((log_z_series(&s, 41) - lz).abs() < 1e-14);
    }

    #[test]
    fn weights() {
        let s = spec(&[(1, 2)], &[(1, 2)]);
        assert_eq!(
            measure_weight(&StrictPartition::empty(), &s).unwrap(),
            q(3, 5)
        );
        assert_eq!(measure_weight(&sp(&[1]), &s).unwrap(), q(3, 10));
        assert_eq!(measure_weight(&sp(&[2, 1]), &s).unwrap(), qi(0));
        let r = rho_brute(&[], &s, 40).unwrap();
        assert!(rational::to_f64(&(qi(1) - &r.value)) < 1e-10);
        assert_eq!(r.tail_bound, qi(1) - r.value);
    }

    #[test]
    fn brute_one_variable_closed_form() {
        let s = spec(&[(1, 3)], &[(1, 2)]);
        let xy = q(1, 6);
        for k in 1..=4u32 {
            let r = rho_brute(&[k], &s, 10).unwrap();
            let closed =
                qi(2) * num_traits::Pow::pow(xy.clone(), k) * (qi(1) - &xy) / (qi(1) + &xy);
            // only λ = (k) contributes with one variable
            assert_eq!(r.value, closed);
        }
        assert_eq!(
            rho_brute(&[5], &s, 4),
            Err(Error::CutoffTooSmall { cutoff: 4, max: 5 })
        );
    }

    #[test]
    fn monotone_in_the_set() {
        let s = spec(&[(2, 5), (1, 5)], &[(3, 10), (1, 10)]);
        let a = rho_brute(&[2], &s, 12).unwrap().value;
        let b = rho_brute(&[2, 1], &s, 12).unwrap().value;
        let c = rho_brute(&[3, 2, 1], &s, 12).unwrap().value;
        assert!(b <= a && c <= b);
        assert_eq!(c, qi(0));
    }

    #[test]
    fn one_sided_coefficients() {
        let s = spec(&[(1, 3), (1, 4)], &[]);
        let f = kernel_coeffs(&s, 6, 1e-12).unwrap();
        let q = QTable::miwa(s.x(), 6);
        for m in -6..=6 {
            let expect = if m < 0 {
                0.0
            } else {
                rational::to_f64(&q.get(m).unwrap())
            };
            assert!((f.get(m).unwrap() - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn coefficients_square_to_one() {
        // F(z) F(-z) = 1
        let s = spec(&[(2, 5), (1, 5)], &[(3, 10), (1, 10)]);
        let f = kernel_coeffs(&s, 40, 1e-12).unwrap();
        for n in -6i64..=6 {
            let mut acc = 0.0;
            for m in -30i64..=30 {
                let k = n - m;
                if k.abs() > 40 {
                    continue;
                }
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * f.get(m).unwrap() * f.get(k).unwrap();
            }
            let expect = if n == 0 { 1.0 } else { 0.0 };
            assert!((acc - expect).abs() < 1e-12, "N={n}: {acc}");
        }
    }

    /// `f_m` by the trapezoid rule on `|z| = ρ`, independent of any series.
    fn f_by_contour(spec: &SpecPair, m: i64, radius: f64, nodes: usize) -> f64 {
        let xs: Vec<f64> = spec.x().iter().map(rational::to_f64).collect();
        let ys: Vec<f64> = spec.y().iter().map(rational::to_f64).collect();
        let mut acc = 0.0;
        for k in 0..nodes {
            let th = 2.0 * core::f64::consts::PI * k as f64 / nodes as f64;
            let (zr, zi) = (radius * th.cos(), radius * th.sin());
            let mut fr = 1.0;
            let mut fi = 0.0;
            let mut mul = |ar: f64, ai: f64, br: f64, bi: f64| {
                // (a)/(b) multiplied into (fr, fi)
                let d = br * br + bi * bi;
                let (qr, qi) = ((ar * br + ai * bi) / d, (ai * br - ar * bi) / d);
                let (nr, ni) = (fr * qr - fi * qi, fr * qi + fi * qr);
                fr = nr;
                fi = ni;
            };
            for &x in &xs {
                mul(1.0 + x * zr, x * zi, 1.0 - x * zr, -x * zi);
            }
            let zz = zr * zr + zi * zi;
            let (wr, wi) = (zr / zz, -zi / zz);
            for &y in &ys {
                mul(1.0 - y * wr, -y * wi, 1.0 + y * wr, y * wi);
            }
            // z^{-m} on the circle
            let ang = -(m as f64) * th;
            let sc = libm::pow(radius, -(m as f64));
            acc += sc * (fr * ang.cos() - fi * ang.sin());
        }
        acc / nodes as f64
    }

    #[test]
    fn coefficients_match_contour_integral() {
        let s = spec(&[(1, 2)], &[(1, 2)]);
        let f = kernel_coeffs(&s, 8, 1e-12).unwrap();
        for m in -3..=3 {
            let c = f_by_contour(&s, m, 1.0, 256);
            assert!(
                (f.get(m).unwrap() - c).abs() < 1e-12,
                "f_{m}: {} vs {c}",
                f.get(m).unwrap()
            );
        }
        let s2 = spec(&[(2, 5), (1, 5)], &[(3, 10), (1, 10)]);
        let f2 = kernel_coeffs(&s2, 8, 1e-12).unwrap();
        for m in -4..=4 {
            let c = f_by_contour(&s2, m, 1.2, 512);
            assert!((f2.get(m).unwrap() - c).abs() < 1e-12);
        }
    }

    #[test]
    fn coefficient_bounds_hold() {
        let s = spec(&[(2, 5), (1, 5)], &[(3, 10), (1, 10)]);
        let f = kernel_coeffs(&s, 30, 1e-12).unwrap();
        for (m, v) in f.iter() {
            assert!(v.abs() <= f.tails.f_bound(m) * (1.0 + 1e-12), "f_{m}");
        }
    }

    #[test]
    fn kernel_values() {
        let empty = spec(&[], &[]);
        let f = kernel_coeffs(&empty, 4, 1e-12).unwrap();
        assert_eq!(kernel_k(&f, 0, 0, 1e-12).unwrap().value, 0.5);
        let s = spec(&[(2, 5), (1, 5)], &[(3, 10), (1, 10)]);
        let f = kernel_coeffs(&s, 60, 1e-12).unwrap();
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                if a + b == 0 {
                    continue;
                }
                let u = kernel_k(&f, a, b, 1e-11).unwrap().value;
                let v = kernel_k(&f, b, a, 1e-11).unwrap().value;
                assert!((u + v).abs() < 1e-12, "K({a},{b}) + K({b},{a}) = {}", u + v);
            }
        }
        let small = kernel_coeffs(&s, 5, 1e-10).unwrap();
        assert!(kernel_k(&small, 4, 2, 1e-12).is_err());
    }

    #[test]
    fn pfaffian_rho_matches_brute_force() {
        let s = spec(&[(1, 2)], &[(1, 2)]);
        for k in 1..=3u32 {
            let pf = rho_pf(&[k], &s, 1e-11).unwrap();
            let br = rho_brute_to_tol(&[k], &s, 1e-13).unwrap();
            assert!(
                (pf.value - rational::to_f64(&br.value)).abs() < 1e-10,
                "k={k}"
            );
        }
        let s2 = spec(&[(2, 5), (1, 5)], &[(3, 10), (1, 10)]);
        let pf = rho_pf(&[2, 1], &s2, 1e-10).unwrap();
        let br = rho_brute_to_tol(&[2, 1], &s2, 1e-12).unwrap();
        assert!((pf.value - rational::to_f64(&br.value)).abs() < 1e-9);
        assert_eq!(rho_pf(&[], &s2, 1e-10).unwrap().value, 1.0);
    }
}
