//! Skew-symmetric matrices and their Pfaffians.
//!
//! Three evaluation routes exist:
//!
//! * minor expansion with memoization over index subsets, which works over
//!   any commutative ring (used for polynomial entries);
//! * skew Gaussian elimination over a field, exact for rationals;
//! * the same elimination in `f64` with pivoting and a relative singularity
//!   tolerance.
//!
//! Odd orders go through the bordered matrix `A⁺` (extra column of ones,
//! row of minus ones). For orders up to 7 the permutation-sum definition is
//! available as an independent check.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{Field, Ring};
use crate::error::{Error, Result};
use crate::rational::{self, Q};

pub const DEFAULT_SINGULAR_TOL: f64 = 1e-12;

/// Largest order accepted by [`debruijn_sigma_sum`]; the sum has `n!` terms.
pub const SIGMA_SUM_MAX_ORDER: usize = 7;

/// Square skew-symmetric matrix storing only the strict upper triangle,
/// row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix<T> {
    n: usize,
    upper: Vec<T>,
}

impl<T: Ring> SkewMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            upper: vec![T::zero(); n * n.saturating_sub(1) / 2],
        }
    }

    /// Builds the matrix from `f(i, j)` evaluated for `i < j`.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                upper.push(f(i, j));
            }
        }
        Self { n, upper }
    }

    /// Checks skewness of a dense square matrix.
    pub fn from_dense(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("matrix is not square".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if !row[i].is_zero() {
                return Err(Error::Invalid(alloc::format!(
                    "nonzero diagonal entry at {i}"
                )));
            }
            for j in i + 1..n {
                if row[j].plus(&rows[j][i]) != T::zero() {
                    return Err(Error::Invalid(alloc::format!(
                        "entries ({i},{j}) and ({j},{i}) are not opposite"
                    )));
                }
            }
        }
        Ok(Self::from_upper_fn(n, |i, j| rows[i][j].clone()))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        match i.cmp(&j) {
            core::cmp::Ordering::Less => self.upper[self.slot(i, j)].clone(),
            core::cmp::Ordering::Greater => self.upper[self.slot(j, i)].negated(),
            core::cmp::Ordering::Equal => T::zero(),
        }
    }

    /// Sets `a_ij` (and implicitly `a_ji = -a_ij`). Diagonal writes are
    /// ignored unless the value is zero.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        match i.cmp(&j) {
            core::cmp::Ordering::Less => {
                let s = self.slot(i, j);
                self.upper[s] = v;
            }
            core::cmp::Ordering::Greater => {
                let s = self.slot(j, i);
                self.upper[s] = v.negated();
            }
            core::cmp::Ordering::Equal => debug_assert!(v.is_zero()),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Entries `(i, j, a_ij)` with `i < j`.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .zip(self.upper.iter())
            .map(|((i, j), v)| (i, j, v))
    }

    pub fn map<U: Ring>(&self, f: impl FnMut(&T) -> U) -> SkewMatrix<U> {
        SkewMatrix {
            n: self.n,
            upper: self.upper.iter().map(f).collect(),
        }
    }

    /// Principal submatrix on `idx` (in the given order).
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Self::from_upper_fn(idx.len(), |a, b| self.get(idx[a], idx[b]))
    }

    /// Simultaneous swap of rows and columns `i` and `j`.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let perm: Vec<usize> = (0..self.n)
            .map(|k| {
                if k == i {
                    j
                } else if k == j {
                    i
                } else {
                    k
                }
            })
            .collect();
        self.submatrix(&perm)
    }
}

/// Pfaffian of an even-order matrix by the ring's preferred route.
pub fn pfaffian_even<T: Ring>(m: &SkewMatrix<T>) -> Result<T> {
    if !m.order().is_multiple_of(2) {
        return Err(Error::Order {
            order: m.order(),
            expected: "even",
        });
    }
    Ok(T::pfaffian(m))
}

/// Adds the column of ones / row of minus ones that turns an odd-order
/// matrix into the even-order `A⁺`.
pub fn border_plus<T: Ring>(m: &SkewMatrix<T>) -> Result<SkewMatrix<T>> {
    let n = m.order();
    if n.is_multiple_of(2) {
        return Err(Error::Order {
            order: n,
            expected: "odd",
        });
    }
    Ok(SkewMatrix::from_upper_fn(n + 1, |i, j| {
        if j == n {
            T::one()
        } else {
            m.get(i, j)
        }
    }))
}

/// Pfaffian for any order: even orders directly, odd orders as `Pf(A⁺)`.
pub fn pfaffian_debruijn<T: Ring>(m: &SkewMatrix<T>) -> T {
    if m.order().is_multiple_of(2) {
        T::pfaffian(m)
    } else {
        // border_plus cannot fail on odd order
        T::pfaffian(&border_plus(m).expect("odd order"))
    }
}

/// The permutation-sum definition
/// `Pf(A) = 1/(2^m m!) Σ_σ sgn(σ) a_{σ1σ2} ⋯ a_{σ(2m-1)σ(2m)}`, `m = ⌊n/2⌋`,
/// with the last index left unpaired when `n` is odd.
pub fn debruijn_sigma_sum<T: Ring>(m: &SkewMatrix<T>) -> Result<T> {
    let n = m.order();
    if n > SIGMA_SUM_MAX_ORDER {
        return Err(Error::Order {
            order: n,
            expected: "at most 7 for the permutation sum",
        });
    }
    let half = n / 2;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = T::zero();
    let mut visit = |p: &[usize], odd: bool| {
        let mut term = T::one();
        for r in 0..half {
            term = term.times(&m.get(p[2 * r], p[2 * r + 1]));
            if term.is_zero() {
                return;
            }
        }
        total = if odd {
            total.minus(&term)
        } else {
            total.plus(&term)
        };
    };
    // Heap's algorithm; every swap flips the parity.
    let mut c = vec![0usize; n];
    let mut odd = false;
    visit(&perm, odd);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            odd = !odd;
            visit(&perm, odd);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    let norm = rational::pow2(half as i32) * Q::from_integer(rational::factorial(half as u32));
    Ok(total.scale(&norm.recip()))
}

/// Division-free Pfaffian: expansion along the first remaining index,
/// memoized over subsets. Cost `O(2^n n)` ring operations.
pub fn pfaffian_by_minors<T: Ring>(m: &SkewMatrix<T>) -> T {
    let n = m.order();
    if n % 2 == 1 {
        return T::zero();
    }
    if n == 0 {
        return T::one();
    }
    assert!(n <= 26, "minor expansion is limited to order 26");
    let mut memo: Vec<Option<T>> = vec![None; 1usize << n];
    memo[0] = Some(T::one());
    let full = (1usize << n) - 1;
    minors_rec(m, full, &mut memo)
}

fn minors_rec<T: Ring>(m: &SkewMatrix<T>, mask: usize, memo: &mut Vec<Option<T>>) -> T {
    if let Some(v) = &memo[mask] {
        return v.clone();
    }
    let i = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << i);
    let mut acc = T::zero();
    let mut positive = true;
    let mut bits = rest;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let a = m.get(i, j);
        if !a.is_zero() {
            let sub = minors_rec(m, rest & !(1 << j), memo);
            if !sub.is_zero() {
                let term = a.times(&sub);
                acc = if positive {
                    acc.plus(&term)
                } else {
                    acc.minus(&term)
                };
            }
        }
        positive = !positive;
    }
    memo[mask] = Some(acc.clone());
    acc
}

/// Exact skew elimination; any nonzero pivot is acceptable.
pub fn pfaffian_by_elimination<F: Field>(m: &SkewMatrix<F>) -> F {
    eliminate(m, 0.0)
}

/// Floating-point Pfaffian with partial pivoting. A pivot below
/// `tol * max|a_ij|` makes the matrix numerically singular and yields 0.
pub fn pfaffian_f64(m: &SkewMatrix<f64>, tol: f64) -> f64 {
    let scale = m
        .upper
        .iter()
        .fold(0.0f64, |acc, v| acc.max(libm::fabs(*v)));
    eliminate(m, tol * scale)
}

fn eliminate<F: Field>(m: &SkewMatrix<F>, threshold: f64) -> F {
    let n = m.order();
    if n % 2 == 1 {
        return F::zero();
    }
    let mut a = m.to_dense();
    let mut pf = F::one();
    let mut k = 0;
    while k < n {
        let mut best = k + 1;
        let mut best_w = a[k][k + 1].pivot_weight();
        for j in k + 2..n {
            let w = a[k][j].pivot_weight();
            if w > best_w {
                best = j;
                best_w = w;
            }
        }
        if best_w == 0.0 || best_w <= threshold {
            return F::zero();
        }
        if best != k + 1 {
            a.swap(k + 1, best);
            for row in a.iter_mut() {
                row.swap(k + 1, best);
            }
            pf = pf.negated();
        }
        let p = a[k][k + 1].clone();
        let p_inv = p.inv().expect("pivot is nonzero");
        pf = pf.times(&p);
        for i in k + 2..n {
            for j in i + 1..n {
                let num = a[k + 1][i]
                    .times(&a[k][j])
                    .minus(&a[k][i].times(&a[k + 1][j]));
                if !num.is_zero() {
                    let v = a[i][j].plus(&num.times(&p_inv));
                    a[j][i] = v.negated();
                    a[i][j] = v;
                }
            }
        }
        k += 2;
    }
    pf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::rational::{q, qi};
    use proptest::prelude::*;

    fn from_upper(n: usize, vals: &[i64]) -> SkewMatrix<Q> {
        let mut it = vals.iter();
        SkewMatrix::from_upper_fn(n, |_, _| qi(*it.next().unwrap()))
    }

    #[test]
    fn two_by_two() {
        let m = from_upper(2, &[7]);
        assert_eq!(pfaffian_even(&m).unwrap(), qi(7));
    }

    #[test]
    fn four_by_four_matches_formula() {
        // upper (a,b,c,d,e,f) -> af - be + cd
        let (a, b, c, d, e, f) = (2, 3, 5, 7, 11, 13);
        let m = from_upper(4, &[a, b, c, d, e, f]);
        let expected = qi(a * f - b * e + c * d);
        assert_eq!(pfaffian_by_elimination(&m), expected);
        assert_eq!(pfaffian_by_minors(&m), expected);
        assert_eq!(
            pfaffian_f64(&m.map(rational::to_f64), 1e-12),
            (a * f - b * e + c * d) as f64
        );
    }

    #[test]
    fn odd_order_rejected_by_even_route() {
        let m = from_upper(3, &[1, 2, 3]);
        assert!(matches!(pfaffian_even(&m), Err(Error::Order { .. })));
        assert!(border_plus(&from_upper(2, &[1])).is_err());
    }

    #[test]
    fn bordering_small_cases() {
        let one = SkewMatrix::<Q>::zeros(1);
        let b = border_plus(&one).unwrap();
        assert_eq!(b.order(), 2);
        assert_eq!(b.get(0, 1), qi(1));
        assert_eq!(b.get(1, 0), qi(-1));
        assert_eq!(pfaffian_debruijn(&one), qi(1));
        assert_eq!(debruijn_sigma_sum(&one).unwrap(), qi(1));

        let m = from_upper(3, &[2, 3, 5]);
        assert_eq!(pfaffian_debruijn(&m), qi(2 - 3 + 5));
        assert_eq!(debruijn_sigma_sum(&m).unwrap(), qi(2 - 3 + 5));
        // bordering once yields even order, so a second call is rejected
        assert!(border_plus(&border_plus(&m).unwrap()).is_err());
    }

    #[test]
    fn empty_pfaffian_is_one() {
        assert_eq!(pfaffian_even(&SkewMatrix::<Q>::zeros(0)).unwrap(), qi(1));
        assert_eq!(
            debruijn_sigma_sum(&SkewMatrix::<Q>::zeros(0)).unwrap(),
            qi(1)
        );
    }

    #[test]
    fn singular_float_matrix_is_zero() {
        // rank 2 matrix of order 4
        let m = SkewMatrix::from_upper_fn(4, |i, j| if (i, j) == (0, 1) { 1.0 } else { 0.0 });
        assert_eq!(pfaffian_f64(&m, 1e-12), 0.0);
        assert_eq!(
            pfaffian_by_elimination(&from_upper(4, &[1, 0, 0, 0, 0, 0])),
            qi(0)
        );
    }

    #[test]
    fn sigma_sum_order_limit() {
        assert!(debruijn_sigma_sum(&SkewMatrix::<Q>::zeros(8)).is_err());
    }

    fn skew_strategy(n: usize) -> impl Strategy<Value = SkewMatrix<Q>> {
        proptest::collection::vec((-9i64..10, 1i64..4), n * (n - 1) / 2).prop_map(move |v| {
            let mut it = v.into_iter();
            SkewMatrix::from_upper_fn(n, |_, _| {
                let (a, b) = it.next().unwrap();
                q(a, b)
            })
        })
    }

    proptest! {
        #[test]
        fn square_is_determinant(m in (1usize..4).prop_flat_map(|h| skew_strategy(2 * h))) {
            let pf = pfaffian_even(&m).unwrap();
            prop_assert_eq!(&pf * &pf, linalg::det(&m.to_dense()));
            prop_assert_eq!(pfaffian_by_minors(&m), pf);
        }

        #[test]
        fn odd_orders_agree_with_sigma_sum(m in prop_oneof![skew_strategy(1), skew_strategy(3), skew_strategy(5)]) {
            prop_assert_eq!(pfaffian_debruijn(&m), debruijn_sigma_sum(&m).unwrap());
        }

        #[test]
        fn even_sigma_sum_is_classical(m in prop_oneof![skew_strategy(2), skew_strategy(4), skew_strategy(6)]) {
            prop_assert_eq!(pfaffian_even(&m).unwrap(), debruijn_sigma_sum(&m).unwrap());
        }

        #[test]
        fn simultaneous_swap_flips_sign(m in skew_strategy(6), i in 0usize..6, j in 0usize..6) {
            prop_assume!(i != j);
            let pf = pfaffian_even(&m).unwrap();
            prop_assert_eq!(pfaffian_even(&m.swapped(i, j)).unwrap(), -pf);
        }

        #[test]
        fn congruence_scales_by_det(m in skew_strategy(4), b in proptest::collection::vec(-5i64..6, 16)) {
            let bm: Vec<Vec<Q>> = (0..4).map(|i| (0..4).map(|j| qi(b[4 * i + j])).collect()).collect();
            let c = linalg::congruence(&bm, &m);
            prop_assert_eq!(pfaffian_even(&c).unwrap(), linalg::det(&bm) * pfaffian_even(&m).unwrap());
        }
    }
}
