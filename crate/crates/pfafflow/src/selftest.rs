//! Invariant suites run by `pfafflow selftest`.

use std::str::FromStr;

use pfafflow_core::bkp::{self, Equation, TauSeries};
use pfafflow_core::linalg::{congruence, det, Dense};
use pfafflow_core::matrixpp::{bures_tau, time_weights, FiniteSpace, ProcessSpec};
use pfafflow_core::measure::{rho_brute_to_tol, rho_pf, SpecPair};
use pfafflow_core::pfaffian::{
    border_plus, debruijn_sigma_sum, pfaffian_by_minors, pfaffian_even, SkewMatrix,
};
use pfafflow_core::rational::{q, qi, to_f64};
use pfafflow_core::schurq::{schur_q, schur_q_via_vev, wick_pfaffian, wick_product, QTable, Scale};
use pfafflow_core::{Cap, StrictPartition, Q};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::UsageError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Pfaffian,
    Schurq,
    Measure,
    Matrixpp,
    Bkp,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Pfaffian => "pfaffian",
            Suite::Schurq => "schurq",
            Suite::Measure => "measure",
            Suite::Matrixpp => "matrixpp",
            Suite::Bkp => "bkp",
        }
    }
}

impl FromStr for Suite {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, UsageError> {
        [
            Suite::All,
            Suite::Pfaffian,
            Suite::Schurq,
            Suite::Measure,
            Suite::Matrixpp,
            Suite::Bkp,
        ]
        .into_iter()
        .find(|x| x.name() == s)
        .ok_or_else(|| UsageError(format!("unknown suite {s:?}")))
    }
}

type Outcome = Result<(), String>;

struct Check {
    suite: Suite,
    name: &'static str,
    run: fn(&RunConfig) -> Outcome,
}

#[derive(Serialize, Debug, Clone)]
pub struct CheckReport {
    pub suite: &'static str,
    pub name: &'static str,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Serialize, Debug, Clone)]
pub struct SelftestReport {
    pub suite: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckReport>,
}

impl SelftestReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

pub fn run(suite: Suite, cfg: &RunConfig) -> SelftestReport {
    let chosen: Vec<&Check> = CHECKS
        .iter()
        .filter(|c| suite == Suite::All || c.suite == suite)
        .collect();
    let checks: Vec<CheckReport> = chosen
        .par_iter()
        .map(|c| {
            let out = (c.run)(cfg);
            CheckReport {
                suite: c.suite.name(),
                name: c.name,
                pass: out.is_ok(),
                detail: out.err(),
            }
        })
        .collect();
    let passed = checks.iter().filter(|c| c.pass).count();
    SelftestReport {
        suite: suite.name(),
        passed,
        failed: checks.len() - passed,
        checks,
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Small deterministic rational entries.
fn entry(seed: usize, i: usize, j: usize) -> Q {
    let v = (seed * 31 + i * 17 + j * 7 + i * j) % 13;
    q(v as i64 - 6, 1 + ((i + j + seed) % 3) as i64)
}

static CHECKS: &[Check] = &[
    Check {
        suite: Suite::Pfaffian,
        name: "congruence",
        run: |_| {
            for seed in 0..6 {
                for n in [4usize, 6] {
                    let a = SkewMatrix::from_upper_fn(n, |i, j| entry(seed, i, j));
                    let b: Dense<Q> = (0..n)
                        .map(|i| (0..n).map(|j| entry(seed + 5, j, i)).collect())
                        .collect();
                    let lhs = pfaffian_even(&congruence(&b, &a)).map_err(fail)?;
                    let rhs = det(&b) * pfaffian_even(&a).map_err(fail)?;
                    ensure(lhs == rhs, || format!("order {n}, seed {seed}"))?;
                }
            }
            Ok(())
        },
    },
    Check {
        suite: Suite::Pfaffian,
        name: "debruijn-bordering",
        run: |_| {
            for n in [1usize, 3, 5] {
                let a = SkewMatrix::from_upper_fn(n, |i, j| entry(n, i, j));
                let sigma = debruijn_sigma_sum(&a).map_err(fail)?;
                let bordered = pfaffian_even(&border_plus(&a).map_err(fail)?).map_err(fail)?;
                ensure(sigma == bordered, || format!("order {n}"))?;
            }
            Ok(())
        },
    },
    Check {
        suite: Suite::Pfaffian,
        name: "minors-vs-elimination",
        run: |_| {
            let a = SkewMatrix::from_upper_fn(6, |i, j| entry(2, i, j));
            ensure(
                pfaffian_by_minors(&a) == pfaffian_even(&a).map_err(fail)?,
                || "order 6".into(),
            )
        },
    },
    Check {
        suite: Suite::Schurq,
        name: "pfaffian-vs-vev",
        run: |_| {
            let table = QTable::symbolic(16, Scale::Half);
            for lambda in StrictPartition::up_to_weight(8) {
                let a = schur_q(&table, &lambda).map_err(fail)?;
                let b = schur_q_via_vev(&table, &lambda).map_err(fail)?;
                ensure(a == b, || format!("lambda = {lambda}"))?;
            }
            Ok(())
        },
    },
    Check {
        suite: Suite::Schurq,
        name: "wick-product",
        run: |_| {
            for z in [
                vec![qi(3), qi(2), qi(1), q(1, 2)],
                vec![qi(5), qi(4), qi(2), qi(1), q(1, 2), q(1, 3)],
            ] {
                let pf = wick_pfaffian(&z, 8).map_err(fail)?;
                ensure(pf == wick_product(&z).map_err(fail)?, || {
                    format!("{} points", z.len())
                })?;
            }
            Ok(())
        },
    },
    Check {
        suite: Suite::Measure,
        name: "pfaffian-vs-brute",
        run: |cfg| {
            let spec = default_spec();
            let tol = cfg.tol.max(1e-9);
            for a in [vec![1u32], vec![2], vec![2, 1], vec![3, 1]] {
                let pf = rho_pf(&a, &spec, tol).map_err(fail)?;
                let br = rho_brute_to_tol(&a, &spec, tol).map_err(fail)?;
                let gap = (pf.value - to_f64(&br.value)).abs();
                ensure(gap <= 2.0 * tol, || format!("A = {a:?}: gap {gap:e}"))?;
            }
            Ok(())
        },
    },
    Check {
        suite: Suite::Measure,
        name: "one-variable-closed-form",
        run: |cfg| {
            let spec = SpecPair::new(vec![q(1, 2)], vec![q(1, 2)]).map_err(fail)?;
            for k in 1..=4u32 {
                let exact = 2.0 * 0.25f64.powi(k as i32) * 0.6;
                let pf = rho_pf(&[k], &spec, cfg.tol).map_err(fail)?;
                ensure((pf.value - exact).abs() <= cfg.tol, || format!("k = {k}"))?;
            }
            Ok(())
        },
    },
    Check {
        suite: Suite::Matrixpp,
        name: "corr-pf-vs-direct",
        run: |_| {
            for n in [3usize, 4] {
                let space = FiniteSpace::uniform((1..=5).map(qi).collect()).map_err(fail)?;
                let spec = ProcessSpec::bures(space, n);
                let prep = spec.prepare().map_err(fail)?;
                let pts = spec.space.points().to_vec();
                for mask in 0u32..32 {
                    let s: Vec<Q> = (0..5)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| pts[i].clone())
                        .collect();
                    if s.len() > n {
                        continue;
                    }
                    let a = prep.corr_pf(&s).map_err(fail)?;
                    let b = spec.corr_direct(&s).map_err(fail)?;
                    ensure(a == b, || format!("n = {n}, S = {s:?}"))?;
                }
            }
            Ok(())
        },
    },
    Check {
        suite: Suite::Matrixpp,
        name: "bures-partition-function",
        run: |cfg| {
            let space = FiniteSpace::new(
                (1..=5).map(qi).collect(),
                vec![qi(1), q(1, 2), q(1, 3), q(1, 4), q(1, 5)],
            )
            .map_err(fail)?;
            for n in 1..=4 {
                bures_tau(space.points(), space.weights(), n).map_err(fail)?;
            }
            let w = time_weights(&space, cfg.n_max.min(3), Cap::new(2)).map_err(fail)?;
            for n in 1..=3 {
                bures_tau(space.points(), &w, n).map_err(fail)?;
            }
            Ok(())
        },
    },
    Check {
        suite: Suite::Bkp,
        name: "residue-identity",
        run: |_| {
            for g in bkp::catalog() {
                let tau = bkp::tau_from_g(&g, 6).map_err(fail)?;
                let r = bkp::bkp_residue_check(&tau, 6).map_err(fail)?;
                ensure(r.is_empty(), || format!("G = {g}"))?;
            }
            let lam: StrictPartition = "(3,1)".parse().map_err(fail)?;
            let r = bkp::bkp_residue_check(&TauSeries::schur_q(&lam).map_err(fail)?, 6)
                .map_err(fail)?;
            ensure(r.is_empty(), || "Q_(3,1)".into())
        },
    },
    Check {
        suite: Suite::Bkp,
        name: "modified-members",
        run: |_| {
            for g in bkp::catalog() {
                let (a, b) = bkp::tau_pair_from_g(&g, &q(1, 2), 7).map_err(fail)?;
                for eq in [Equation::Mbkp1, Equation::Mbkp2] {
                    let r = bkp::hirota_zero_check(&eq.operator().expect("hirota form"), &a, &b);
                    ensure(r.is_empty(), || format!("{} for G = {g}", eq.name()))?;
                }
            }
            Ok(())
        },
    },
    Check {
        suite: Suite::Bkp,
        name: "negative-flows",
        run: |_| {
            for g in bkp::catalog() {
                let tau = bkp::tau_two_sided(&g, 6, 3).map_err(fail)?;
                let op = Equation::Negflow1.operator().expect("hirota form");
                ensure(bkp::hirota_zero_check(&op, &tau, &tau).is_empty(), || {
                    format!("negflow1 for G = {g}")
                })?;
                let (a, b) = bkp::tau_pair_two_sided(&g, &q(1, 3), 6, 3).map_err(fail)?;
                let op = Equation::Mixed1.operator().expect("hirota form");
                ensure(bkp::hirota_zero_check(&op, &a, &b).is_empty(), || {
                    format!("mixed1 for G = {g}")
                })?;
            }
            Ok(())
        },
    },
];

/// `x = (2/5, 1/5)`, `y = (3/10, 1/10)`.
pub fn default_spec() -> SpecPair {
    SpecPair::new(vec![q(2, 5), q(1, 5)], vec![q(3, 10), q(1, 10)]).expect("valid specialization")
}
