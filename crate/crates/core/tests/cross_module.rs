//! Identities that tie several modules together.

use num_traits::{One, Zero};
use pfafflow_core::bkp::{self, GSpec, TauSeries};
use pfafflow_core::matrixpp::{integrate_out, FiniteSpace, ProcessSpec};
use pfafflow_core::measure::{measure_weight, rho_brute, rho_pf, SpecPair};
use pfafflow_core::pfaffian::{pfaffian_even, pfaffian_f64, SkewMatrix};
use pfafflow_core::rational::{q, qi, to_f64};
use pfafflow_core::schurq::schur_q_at;
use pfafflow_core::series::{miwa_times, Side};
use pfafflow_core::{StrictPartition, Q};
use proptest::prelude::*;

#[test]
fn polynomial_tau_at_miwa_times_is_the_point_value() {
    let x = [q(1, 2), q(-1, 3), qi(2)];
    for lam in StrictPartition::up_to_weight(7) {
        let tau = TauSeries::schur_q(&lam).unwrap();
        let t = miwa_times(&x, 7, Side::Plus).unwrap();
        assert_eq!(
            tau.body.eval(&t).unwrap(),
            schur_q_at(&lam, &x).unwrap(),
            "{lam}"
        );
    }
}

#[test]
fn group_like_tau_at_miwa_times() {
    // 1 + (c/2)(t1^3/6 - 2 t3) at a single Miwa point x: t1 = 2x, t3 = 2x^3/3.
    let g: GSpec = "c=3,r=2,s=1".parse().unwrap();
    let tau = bkp::tau_from_g(&g, 6).unwrap();
    let x = q(1, 5);
    let t = miwa_times(std::slice::from_ref(&x), 5, Side::Plus).unwrap();
    let t1 = qi(2) * &x;
    let t3 = qi(2) * &x * &x * &x / qi(3);
    let q21 = &t1 * &t1 * &t1 / qi(6) - qi(2) * t3;
    assert_eq!(tau.body.eval(&t).unwrap(), Q::one() + q(3, 2) * q21);
}

#[test]
fn measure_is_normalized_by_the_cauchy_product() {
    let spec = SpecPair::new(vec![q(1, 3)], vec![q(1, 4)]).unwrap();
    let total: Q = StrictPartition::bounded(30, 1)
        .iter()
        .map(|l| measure_weight(l, &spec).unwrap())
        .sum();
    assert!((1.0 - to_f64(&total)).abs() < 1e-12);
}

#[test]
fn empty_set_has_unit_correlation() {
    let spec = SpecPair::new(vec![q(2, 5), q(1, 5)], vec![q(3, 10), q(1, 10)]).unwrap();
    let pf = rho_pf(&[], &spec, 1e-10).unwrap();
    assert!((pf.value - 1.0).abs() < 1e-10);
    let br = rho_brute(&[], &spec, 25).unwrap();
    assert!(to_f64(&(Q::one() - br.value)) <= to_f64(&br.tail_bound) + 1e-15);
}

/// `Σ_x R(S ∪ {x}) μ(x) = (n - |S|) R(S)` on a finite space.
#[test]
fn correlations_integrate_down() {
    for n in [3usize, 4] {
        let space = FiniteSpace::new(
            vec![q(1, 2), qi(1), qi(2), qi(3), qi(5)],
            vec![qi(1), q(2, 3), q(1, 2), qi(2), q(1, 7)],
        )
        .unwrap();
        let spec = ProcessSpec::bures(space, n);
        let prep = spec.prepare().unwrap();
        let pts = spec.space.points().to_vec();
        for s in [
            vec![],
            vec![pts[0].clone()],
            vec![pts[1].clone(), pts[3].clone()],
        ] {
            let lhs = integrate_out(&prep, &s).unwrap();
            let rhs = prep.corr_pf(&s).unwrap() * qi((n - s.len()) as i64);
            assert_eq!(lhs, rhs, "n = {n}, S = {s:?}");
        }
    }
}

fn skew(n: usize) -> impl Strategy<Value = SkewMatrix<Q>> {
    prop::collection::vec((-20i64..=20, 1i64..=6), n * (n - 1) / 2).prop_map(move |v| {
        let mut it = v.into_iter();
        SkewMatrix::from_upper_fn(n, |_, _| {
            let (a, b) = it.next().unwrap();
            q(a, b)
        })
    })
}

proptest! {
    #[test]
    fn float_pfaffian_tracks_exact(m in prop_oneof![skew(4), skew(6), skew(8)]) {
        let exact = pfaffian_even(&m).unwrap();
        let approx = pfaffian_f64(&m.map(to_f64), 1e-14);
        let scale = to_f64(&exact).abs().max(1.0);
        if exact.is_zero() {
            prop_assert!(approx.abs() < 1e-6);
        } else {
            prop_assert!((approx - to_f64(&exact)).abs() / scale < 1e-9);
        }
    }
}
