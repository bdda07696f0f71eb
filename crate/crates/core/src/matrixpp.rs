//! Pfaffian point processes on finite measure spaces.
//!
//! A process is given by `n` functions `φ_i`, a skew kernel `ε` and a finite
//! space of weighted points. All integrals become finite sums, so every
//! identity here is checked in exact rational arithmetic.
//!
//! For odd `n` the moment matrix is bordered by the column `∫φ_i dμ`. The
//! kernel for a point set `S = {x_1 < … < x_l}` is then assembled on
//! `2l + 2` indices: two per point (`φ`-type and `εφ`-type) followed by two
//! border indices `a`, `b` shared by all points, with
//! `(φ(x_i), a) = Σ_k φ_k(x_i) W_{k,n}`, `(εφ(x_i), a) = Σ_k (εφ_k)(x_i) W_{k,n}`,
//! `(εφ(x_i), b) = -1`, `(a, b) = 1` and zeros elsewhere (`W = M^{-T}`).
//! This equals the even kernel of the system extended by a phantom particle
//! carrying `φ_n` with `ε(x, phantom) = 1`; the `(a, b)` entry makes the empty
//! set have correlation 1.
//! Repeating the border per point would give a matrix with equal rows.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Pow, Zero};

use crate::algebra::Ring;
use crate::error::{Error, Result};
use crate::linalg::{inverse, transpose, Dense};
use crate::pfaffian::{pfaffian_even, SkewMatrix};
use crate::rational::{self, Q};
use crate::series::{poly_exp, Cap, OddPoly, Var};

/// Distinct positive points with positive weights.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSpace {
    points: Vec<Q>,
    weights: Vec<Q>,
}

impl FiniteSpace {
    pub fn new(points: Vec<Q>, weights: Vec<Q>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::Dimension(alloc::format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if *p <= Q::zero() {
                return Err(Error::Invalid(alloc::format!("point {p} is not positive")));
            }
            if points[..i].contains(p) {
                return Err(Error::Invalid(alloc::format!("point {p} is repeated")));
            }
        }
        if let Some(w) = weights.iter().find(|w| **w <= Q::zero()) {
            return Err(Error::Invalid(alloc::format!("weight {w} is not positive")));
        }
        Ok(Self { points, weights })
    }

    /// Unit weights.
    pub fn uniform(points: Vec<Q>) -> Result<Self> {
        let w = vec![Q::one(); points.len()];
        Self::new(points, w)
    }

    pub fn points(&self) -> &[Q] {
        &self.points
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The family `φ_0, φ_1, …`.
pub trait TestFunctions {
    fn eval(&self, i: usize, x: &Q) -> Q;
}

/// A skew kernel `ε(x, y) = -ε(y, x)`.
pub trait SkewKernel {
    fn eval(&self, x: &Q, y: &Q) -> Q;
}

/// `φ_i(x) = x^i`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Monomials;

impl TestFunctions for Monomials {
    fn eval(&self, i: usize, x: &Q) -> Q {
        x.clone().pow(i as u32)
    }
}

/// `ε(x, y) = (x - y)/(x + y)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Bures;

impl SkewKernel for Bures {
    fn eval(&self, x: &Q, y: &Q) -> Q {
        (x - y) / (x + y)
    }
}

/// `ε(x, y) = sgn(y - x)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SignKernel;

impl SkewKernel for SignKernel {
    fn eval(&self, x: &Q, y: &Q) -> Q {
        match x.cmp(y) {
            core::cmp::Ordering::Less => Q::one(),
            core::cmp::Ordering::Equal => Q::zero(),
            core::cmp::Ordering::Greater => -Q::one(),
        }
    }
}

/// `n` particles on a finite space.
#[derive(Clone, Debug)]
pub struct ProcessSpec<P = Monomials, E = Bures> {
    pub n: usize,
    pub phi: P,
    pub eps: E,
    pub space: FiniteSpace,
}

impl ProcessSpec {
    /// Monomials and the Bures kernel.
    pub fn bures(space: FiniteSpace, n: usize) -> Self {
        Self {
            n,
            phi: Monomials,
            eps: Bures,
            space,
        }
    }
}

impl<P: TestFunctions, E: SkewKernel> ProcessSpec<P, E> {
    /// `M_{ij} = Σ_{p,q} φ_i(x_p) ε(x_p, x_q) φ_j(x_q) μ_p μ_q`, bordered by
    /// `M_{i,n} = Σ_p φ_i(x_p) μ_p` when `n` is odd.
    pub fn moment_matrix(&self) -> SkewMatrix<Q> {
        let n = self.n;
        let order = n + n % 2;
        let pts = self.space.points();
        let mu = self.space.weights();
        let phi: Vec<Vec<Q>> = (0..n)
            .map(|i| pts.iter().map(|x| self.phi.eval(i, x)).collect())
            .collect();
        let mut m = SkewMatrix::zeros(order);
        for i in 0..n {
            let e = self.eps_dot_values(&phi[i]);
            for j in i + 1..n {
                // Σ_q φ_j(x_q) μ_q (Σ_p φ_i(x_p) ε(x_p,x_q) μ_p) = -Σ_q φ_j μ_q (εφ_i)(x_q)
                let v: Q = (0..pts.len()).map(|q| -(&phi[j][q] * &e[q] * &mu[q])).sum();
                m.set(i, j, v);
            }
            if n % 2 == 1 {
                let v: Q = (0..pts.len()).map(|p| &phi[i][p] * &mu[p]).sum();
                m.set(i, n, v);
            }
        }
        m
    }

    fn eps_dot_values(&self, f: &[Q]) -> Vec<Q> {
        let pts = self.space.points();
        let mu = self.space.weights();
        pts.iter()
            .map(|x| {
                (0..pts.len())
                    .map(|q| self.eps.eval(x, &pts[q]) * &f[q] * &mu[q])
                    .sum()
            })
            .collect()
    }

    /// `(ε·φ_j)(x_p) = Σ_q ε(x_p, x_q) φ_j(x_q) μ_q` at every space point.
    pub fn eps_dot(&self, j: usize) -> Vec<Q> {
        let f: Vec<Q> = self
            .space
            .points()
            .iter()
            .map(|x| self.phi.eval(j, x))
            .collect();
        self.eps_dot_values(&f)
    }

    /// `(ε·φ_j)(x)` at an arbitrary point.
    pub fn eps_dot_at(&self, j: usize, x: &Q) -> Q {
        let pts = self.space.points();
        let mu = self.space.weights();
        (0..pts.len())
            .map(|q| self.eps.eval(x, &pts[q]) * self.phi.eval(j, &pts[q]) * &mu[q])
            .sum()
    }

    /// Inverts the moment matrix once for repeated kernel evaluations.
    pub fn prepare(&self) -> Result<Prepared<'_, P, E>> {
        let m = self.moment_matrix();
        let pf = pfaffian_even(&m)?;
        if pf.is_zero() {
            return Err(Error::Singular);
        }
        let w = transpose(&inverse(&m.to_dense())?);
        Ok(Prepared { spec: self, w, pf })
    }

    /// `R(S)` by summing out the remaining `n - |S|` particles:
    /// `1/((n-l)! Pf(M)) Σ det(φ_i(x_j)) Pf(ε⁺(x_i, x_j)) ∏ μ`.
    pub fn corr_direct(&self, s: &[Q]) -> Result<Q> {
        let n = self.n;
        let l = s.len();
        if l > n {
            return Ok(Q::zero());
        }
        if has_repeats(s) {
            return Ok(Q::zero());
        }
        let pf_m = pfaffian_even(&self.moment_matrix())?;
        if pf_m.is_zero() {
            return Err(Error::Singular);
        }
        let pts = self.space.points();
        let mu = self.space.weights();
        let mut total = Q::zero();
        let mut idx = vec![0usize; n - l];
        // ordered (n-l)-tuples of space points; coincident points drop out
        loop {
            let mut xs: Vec<Q> = s.to_vec();
            xs.extend(idx.iter().map(|&p| pts[p].clone()));
            if !has_repeats(&xs) {
                let w: Q = idx.iter().map(|&p| mu[p].clone()).product();
                total += self.density(&xs)? * w;
            }
            if !advance(&mut idx, pts.len()) {
                break;
            }
        }
        let fact = Q::from_integer(rational::factorial((n - l) as u32));
        Ok(total / (fact * pf_m))
    }

    /// `det(φ_i(x_j)) Pf(ε⁺(x_i, x_j))` for exactly `n` points.
    pub fn density(&self, xs: &[Q]) -> Result<Q> {
        let n = self.n;
        if xs.len() != n {
            return Err(Error::Dimension(alloc::format!("density needs {n} points")));
        }
        let phi: Dense<Q> = (0..n)
            .map(|i| xs.iter().map(|x| self.phi.eval(i, x)).collect())
            .collect();
        let d = crate::linalg::det(&phi);
        if d.is_zero() {
            return Ok(d);
        }
        let order = n + n % 2;
        let mut e = SkewMatrix::zeros(order);
        for i in 0..n {
            for j in i + 1..n {
                e.set(i, j, self.eps.eval(&xs[i], &xs[j]));
            }
            if n % 2 == 1 {
                e.set(i, n, Q::one());
            }
        }
        Ok(d * pfaffian_even(&e)?)
    }

    /// `R(S) = Pf(K(S))`, with `S` taken in increasing order.
    pub fn corr_pf(&self, s: &[Q]) -> Result<Q> {
        self.prepare()?.corr_pf(s)
    }
}

fn has_repeats(xs: &[Q]) -> bool {
    (0..xs.len()).any(|i| xs[..i].contains(&xs[i]))
}

/// Odometer over `{0..base}^len`.
fn advance(idx: &mut [usize], base: usize) -> bool {
    for d in idx.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// A process with its moment matrix inverted.
#[derive(Clone, Debug)]
pub struct Prepared<'a, P, E> {
    spec: &'a ProcessSpec<P, E>,
    /// `M^{-T}` (bordered when `n` is odd).
    w: Dense<Q>,
    pf: Q,
}

impl<P: TestFunctions, E: SkewKernel> Prepared<'_, P, E> {
    pub fn pf_moment(&self) -> &Q {
        &self.pf
    }

    fn features(&self, x: &Q) -> (Vec<Q>, Vec<Q>) {
        let n = self.spec.n;
        (
            (0..n).map(|i| self.spec.phi.eval(i, x)).collect(),
            (0..n).map(|i| self.spec.eps_dot_at(i, x)).collect(),
        )
    }

    fn bilinear(&self, u: &[Q], v: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                acc += ui * &self.w[i][j] * vj;
            }
        }
        acc
    }

    fn border(&self, u: &[Q]) -> Q {
        let n = self.spec.n;
        u.iter().enumerate().map(|(i, ui)| ui * &self.w[i][n]).sum()
    }

    /// The 2×2 kernel block `K(x, y)`.
    pub fn kernel_block(&self, x: &Q, y: &Q) -> [[Q; 2]; 2] {
        let (fx, gx) = self.features(x);
        let (fy, gy) = self.features(y);
        [
            [self.bilinear(&fx, &fy), self.bilinear(&fx, &gy)],
            [
                self.bilinear(&gx, &fy),
                self.bilinear(&gx, &gy) - self.spec.eps.eval(x, y),
            ],
        ]
    }

    /// The 4×4 bordered block `K⁺(x, y)` for odd `n`.
    pub fn kernel_block_plus(&self, x: &Q, y: &Q) -> Result<[[Q; 4]; 4]> {
        if self.spec.n.is_multiple_of(2) {
            return Err(Error::Order {
                order: self.spec.n,
                expected: "odd particle number",
            });
        }
        let k = self.kernel_block(x, y);
        let (fx, gx) = self.features(x);
        let (fy, gy) = self.features(y);
        let z = Q::zero;
        let [[k11, k12], [k21, k22]] = k;
        Ok([
            [k11, k12, self.border(&fx), z()],
            [k21, k22, self.border(&gx), -Q::one()],
            [-self.border(&fy), -self.border(&gy), z(), Q::one()],
            [z(), Q::one(), -Q::one(), z()],
        ])
    }

    /// The skew matrix whose Pfaffian is `R(S)`.
    pub fn kernel_matrix(&self, s: &[Q]) -> Result<SkewMatrix<Q>> {
        let mut pts = s.to_vec();
        pts.sort();
        let l = pts.len();
        let odd = self.spec.n % 2 == 1;
        let order = 2 * l + if odd { 2 } else { 0 };
        let mut m = SkewMatrix::zeros(order);
        if odd {
            m.set(2 * l, 2 * l + 1, Q::one());
        }
        for i in 0..l {
            for j in i..l {
                if odd {
                    let b = self.kernel_block_plus(&pts[i], &pts[j])?;
                    fill(&mut m, i, j, [[&b[0][0], &b[0][1]], [&b[1][0], &b[1][1]]]);
                    if i == j {
                        m.set(2 * i, 2 * l, b[0][2].clone());
                        m.set(2 * i + 1, 2 * l, b[1][2].clone());
                        m.set(2 * i + 1, 2 * l + 1, b[1][3].clone());
                    }
                } else {
                    let b = self.kernel_block(&pts[i], &pts[j]);
                    fill(&mut m, i, j, [[&b[0][0], &b[0][1]], [&b[1][0], &b[1][1]]]);
                }
            }
        }
        Ok(m)
    }

    pub fn corr_pf(&self, s: &[Q]) -> Result<Q> {
        pfaffian_even(&self.kernel_matrix(s)?)
    }
}

fn fill(m: &mut SkewMatrix<Q>, i: usize, j: usize, b: [[&Q; 2]; 2]) {
    if i == j {
        m.set(2 * i, 2 * i + 1, b[0][1].clone());
    } else {
        for (r, row) in b.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m.set(2 * i + r, 2 * j + c, (*v).clone());
            }
        }
    }
}

/// `Σ_{x} R(S ∪ {x}) μ(x)` over space points outside `S`, which should equal
/// `(n - |S|) R(S)`.
pub fn integrate_out<P: TestFunctions, E: SkewKernel>(
    prepared: &Prepared<'_, P, E>,
    s: &[Q],
) -> Result<Q> {
    let space = &prepared.spec.space;
    let mut acc = Q::zero();
    for (x, mu) in space.points().iter().zip(space.weights()) {
        if s.contains(x) {
            continue;
        }
        let mut t = s.to_vec();
        t.push(x.clone());
        acc += prepared.corr_pf(&t)? * mu;
    }
    Ok(acc)
}

/// `ω(x_p; t) = μ_p exp(Σ_{k odd ≤ k_max} t_k x_p^k)` truncated at `cap`.
pub fn time_weights(space: &FiniteSpace, k_max: u32, cap: Cap) -> Result<Vec<OddPoly>> {
    space
        .points()
        .iter()
        .zip(space.weights())
        .map(|(x, mu)| {
            let mut xi = OddPoly::zero();
            for k in (1..=k_max as i32).step_by(2) {
                xi = xi.add(&OddPoly::var(Var::t(k)).scale(&x.clone().pow(k as u32)));
            }
            Ok(poly_exp(&xi, cap)?.scale(mu))
        })
        .collect()
}

/// `τ_n = (1/n!) Σ ∏_{i<j} (x_i - x_j)²/(x_i + x_j) ∏ ω(x_i)` over ordered
/// `n`-tuples of space points.
pub fn bures_tau_sum<T: Ring>(points: &[Q], weights: &[T], n: usize) -> T {
    let mut total = T::zero();
    let mut idx = vec![0usize; n];
    if n == 0 {
        return T::one();
    }
    loop {
        let distinct = (0..n).all(|i| !idx[..i].contains(&idx[i]));
        if distinct {
            let mut c = Q::one();
            for i in 0..n {
                for j in i + 1..n {
                    let (a, b) = (&points[idx[i]], &points[idx[j]]);
                    c *= (a - b).pow(2u32) / (a + b);
                }
            }
            let mut w = T::from_rational(&c);
            for &p in &idx {
                w = w.times(&weights[p]);
            }
            total = total.plus(&w);
        }
        if !advance(&mut idx, points.len()) {
            break;
        }
    }
    total.scale(&Q::from_integer(rational::factorial(n as u32)).recip())
}

/// Moments `ω_{ij} = Σ (x-y)/(x+y) x^i y^j ω(x) ω(y)` and `ω_i = Σ x^i ω(x)`.
pub fn bures_moments<T: Ring>(points: &[Q], weights: &[T], n: usize) -> (SkewMatrix<T>, Vec<T>) {
    let mut m = SkewMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let mut acc = T::zero();
            for (p, x) in points.iter().enumerate() {
                for (q, y) in points.iter().enumerate() {
                    if p == q {
                        continue;
                    }
                    let c = (x - y) / (x + y) * x.clone().pow(i as u32) * y.clone().pow(j as u32);
                    acc = acc.plus(&weights[p].times(&weights[q]).scale(&c));
                }
            }
            m.set(i, j, acc);
        }
    }
    let single = (0..n)
        .map(|i| {
            points.iter().zip(weights).fold(T::zero(), |acc, (x, w)| {
                acc.plus(&w.scale(&x.clone().pow(i as u32)))
            })
        })
        .collect();
    (m, single)
}

/// `τ_n` from moments: `(-1)^{n(n-1)/2} Pf(ω_{ij})_{0≤i,j<n}` for even `n`,
/// and the same sign times the Pfaffian bordered on the left by `ω_j` for
/// odd `n`.
pub fn bures_tau_pf<T: Ring>(points: &[Q], weights: &[T], n: usize) -> Result<T> {
    let (om, single) = bures_moments(points, weights, n);
    let pf = if n.is_multiple_of(2) {
        pfaffian_even(&om)?
    } else {
        let mut b = SkewMatrix::zeros(n + 1);
        for j in 0..n {
            b.set(0, j + 1, single[j].clone());
            for k in j + 1..n {
                b.set(j + 1, k + 1, om.get(j, k));
            }
        }
        pfaffian_even(&b)?
    };
    Ok(if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
        pf.negated()
    } else {
        pf
    })
}

/// `τ_n` computed both ways; a disagreement is an error.
pub fn bures_tau<T: Ring>(points: &[Q], weights: &[T], n: usize) -> Result<T> {
    if n == 0 || n > 8 {
        return Err(Error::Invalid(alloc::format!(
            "particle number {n} outside 1..=8"
        )));
    }
    let a = bures_tau_sum(points, weights, n);
    let b = bures_tau_pf(points, weights, n)?;
    if a != b {
        return Err(Error::IdentityMismatch(alloc::format!(
            "n-fold sum and moment Pfaffian differ for n = {n}"
        )));
    }
    Ok(a)
}
