//! BKP tau functions built from finite group-like elements, and the
//! bilinear identities they satisfy.
//!
//! `G = ∏_j (1 + c_j φ_{r_j} φ_{s_j})` with `r_j > s_j ≥ 0`. Each factor is
//! group-like because `(φ_r φ_s)^2 = -φ_r^2 φ_s^2 = 0` when `r ≠ 0`.
//!
//! Two-sided expectations are reduced to one-sided ones in two independent
//! ways: by expanding `e^{H_-}|0⟩` in Schur Q-functions of `t_-`, or by
//! conjugating `G` with `e^{H_-}`, which sends `φ_r` to
//! `Σ_k q̃_k φ_{r+k}` (`q̃_k` the coefficients of `e^{-ξ(t_-, w)}`) and
//! leaves the scalar `e^{Σ (k/2) t_k t_{-k}}` in front.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Pow, Zero};

use crate::algebra::Sqrt2Scaled;
use crate::error::{Error, Result};
use crate::partition::StrictPartition;
use crate::pfaffian::{pfaffian_even, SkewMatrix};
use crate::rational::{self, Q};
use crate::schurq::{schur_q, two_point, vev_modes, QTable, Scale};
use crate::series::{
    exp_xi, hirota, miwa_shift_on, poly_exp, residue_z0, Cap, HirotaOp, OddPoly, ShiftSign, Var,
    Window, UNBOUNDED,
};

/// One factor `1 + c φ_r φ_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub c: Q,
    pub r: i64,
    pub s: i64,
}

/// A group-like element as an ordered product of factors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GSpec {
    factors: Vec<Factor>,
}

impl GSpec {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        for f in &factors {
            if !(f.r > f.s && f.s >= 0) {
                return Err(Error::Invalid(alloc::format!(
                    "factor indices need r > s >= 0, got r = {}, s = {}",
                    f.r,
                    f.s
                )));
            }
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Largest mode index.
    pub fn max_mode(&self) -> i64 {
        self.factors.iter().map(|f| f.r).max().unwrap_or(0)
    }

    /// `(coefficient, modes)` for each subset of factors, in product order.
    fn expansion(&self) -> Vec<(Q, Vec<i64>)> {
        let k = self.factors.len();
        (0u32..1 << k)
            .map(|mask| {
                let mut c = Q::one();
                let mut modes = Vec::new();
                for (j, f) in self.factors.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        c *= &f.c;
                        modes.push(f.r);
                        modes.push(f.s);
                    }
                }
                (c, modes)
            })
            .collect()
    }
}

/// Parses `c=1/2,r=2,s=1;c=1,r=3,s=0`. An empty string or `1` is `G = 1`.
impl FromStr for GSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Self::identity());
        }
        let mut factors = Vec::new();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (mut c, mut r, mut sv) = (None, None, None);
            for kv in part.split(',') {
                let (k, v) = kv.split_once('=').ok_or_else(|| {
                    Error::Invalid(alloc::format!("expected key=value in {kv:?}"))
                })?;
                let v = v.trim();
                let bad = || Error::Invalid(alloc::format!("bad value {v:?} for {}", k.trim()));
                match k.trim() {
                    "c" => c = Some(rational::parse_q(v).map_err(|_| bad())?),
                    "r" => r = Some(v.parse::<i64>().map_err(|_| bad())?),
                    "s" => sv = Some(v.parse::<i64>().map_err(|_| bad())?),
                    other => return Err(Error::Invalid(alloc::format!("unknown key {other:?}"))),
                }
            }
            match (c, r, sv) {
                (Some(c), Some(r), Some(s)) => factors.push(Factor { c, r, s }),
                _ => {
                    return Err(Error::Invalid(alloc::format!(
                        "factor {part:?} needs c, r and s"
                    )))
                }
            }
        }
        Self::new(factors)
    }
}

impl fmt::Display for GSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, x) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "c={},r={},s={}", x.c, x.r, x.s)?;
        }
        Ok(())
    }
}

/// How a tau function was produced.
#[derive(Clone, Debug, PartialEq)]
pub enum Route {
    /// `⟨0| e^{H_+} G |0⟩`.
    Vacuum,
    /// `2 ⟨0| e^{H_+} φ(z) G e^{H_-} φ_0 |0⟩`.
    Partner { z: Q },
    /// `⟨0| e^{H_+} G e^{H_-} |0⟩` through the Q-function expansion of `e^{H_-}|0⟩`.
    QBasis,
    /// `⟨0| e^{H_+} G e^{H_-} |0⟩` through conjugation by `e^{H_-}`.
    Conjugated,
    /// `Q_λ(t/2)`.
    SchurQ(StrictPartition),
    /// Supplied directly.
    Explicit,
}

/// A truncated tau function with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct TauSeries {
    pub body: OddPoly,
    pub g: GSpec,
    pub route: Route,
}

impl TauSeries {
    pub fn explicit(body: OddPoly) -> Self {
        Self {
            body,
            g: GSpec::identity(),
            route: Route::Explicit,
        }
    }

    /// `Q_λ(t/2)` as a polynomial tau function.
    pub fn schur_q(lambda: &StrictPartition) -> Result<Self> {
        let k = lambda.weight().max(1);
        let table = QTable::symbolic(k, Scale::Half);
        let q = schur_q(&table, lambda)?;
        Ok(Self {
            body: exact(&q),
            g: GSpec::identity(),
            route: Route::SchurQ(lambda.clone()),
        })
    }

    pub fn cap(&self) -> Cap {
        self.body.cap()
    }
}

/// Drops the cap of a polynomial known to be exact.
fn exact(p: &OddPoly) -> OddPoly {
    OddPoly::from_terms(
        p.terms().map(|(m, c)| (m.clone(), c.clone())),
        Cap::unbounded(),
    )
}

fn table_for(max_mode: i64, d_plus: u32) -> QTable<OddPoly> {
    QTable::symbolic(d_plus + 2 * max_mode as u32 + 1, Scale::Half)
}

/// `τ(t) = ⟨0| e^{H_+(t)} G |0⟩`, exact up to weight `d`.
pub fn tau_from_g(g: &GSpec, d: u32) -> Result<TauSeries> {
    let cap = Cap::new(d as i64);
    let table = table_for(g.max_mode(), d);
    let mut body = OddPoly::zero_with_cap(cap);
    for (c, modes) in g.expansion() {
        let v = vev_modes(&table, &modes)?;
        body = body.add(&v.truncate(cap).scale(&c));
    }
    Ok(TauSeries {
        body: body.truncate(cap),
        g: g.clone(),
        route: Route::Vacuum,
    })
}

type Combo = Vec<(i64, OddPoly)>;

/// Wick evaluation of `⟨0| e^{H_+} A_1 ⋯ A_{2n} |0⟩` for linear combinations
/// of modes with polynomial coefficients, truncated at `cap`.
struct Evaluator {
    table: QTable<OddPoly>,
    cap: Cap,
}

impl Evaluator {
    fn vev(&self, ops: &[Combo]) -> Result<OddPoly> {
        if ops.len() % 2 == 1 {
            return Err(Error::OddModeCount(ops.len()));
        }
        let n = ops.len();
        let mut m = SkewMatrix::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                let mut acc = OddPoly::zero_with_cap(self.cap);
                for (a, ca) in &ops[i] {
                    for (b, cb) in &ops[j] {
                        let v = two_point(&self.table, *a, *b)?;
                        if !v.is_empty() {
                            acc = acc.add(&v.mul(&ca.mul(cb)).truncate(self.cap));
                        }
                    }
                }
                m.set(i, j, acc);
            }
        }
        Ok(pfaffian_even(&m)?.truncate(self.cap))
    }
}

/// Coefficients of `exp(s Σ_n t_{-n} w^n)` up to `w^{d}`.
fn negative_table(d: u32, s: &Q) -> Vec<OddPoly> {
    if d == 0 {
        return vec![OddPoly::one()];
    }
    QTable::symbolic_on(d, s, true, false).values().to_vec()
}

/// `e^{[H_+, H_-]} = exp(Σ_{k odd} (k/2) t_k t_{-k})` at `cap`.
pub fn commutator_exp(cap: Cap) -> Result<OddPoly> {
    let mut x = OddPoly::zero();
    let kmax = cap.pos.min(cap.neg);
    for k in (1..=kmax as i32).step_by(2) {
        let term = OddPoly::var(Var::t(k)).mul(&OddPoly::var(Var::t(-k)));
        x = x.add(&term.scale(&Q::new(k.into(), 2.into())));
    }
    poly_exp(&x, cap)
}

struct TwoSided {
    eval: Evaluator,
    conj: Vec<OddPoly>,
    front: OddPoly,
    d_minus: u32,
}

impl TwoSided {
    /// `d_minus = 0` gives the one-sided setting.
    fn new(max_mode: i64, d_plus: u32, d_minus: u32) -> Result<Self> {
        let (cap, front) = if d_minus == 0 {
            (Cap::new(d_plus as i64), OddPoly::one())
        } else {
            let cap = Cap::bi(d_plus as i64, d_minus as i64);
            (cap, commutator_exp(cap)?)
        };
        let reach = max_mode + d_minus as i64;
        Ok(Self {
            eval: Evaluator {
                table: table_for(reach, d_plus),
                cap,
            },
            conj: negative_table(d_minus, &-Q::one()),
            front,
            d_minus,
        })
    }

    /// `e^{-H_-} φ_r e^{H_-} = Σ_k q̃_k φ_{r+k}`.
    fn conj_mode(&self, r: i64) -> Combo {
        (0..=self.d_minus as i64)
            .map(|k| (r + k, self.conj[k as usize].clone()))
            .filter(|(_, c)| !c.is_empty())
            .collect()
    }

    /// `e^{-H_-} φ(z) e^{H_-} = e^{-ξ(t_-, 1/z)} φ(z)` on the modes that can
    /// contribute below the cap.
    fn conj_field(&self, z: &Q, lo: i64, hi: i64) -> Combo {
        let zi = z.clone().recip();
        let mut e = OddPoly::zero();
        for (k, q) in self.conj.iter().enumerate() {
            e = e.add(&q.scale(&zi.clone().pow(k as u32)));
        }
        (lo..=hi).map(|i| (i, e.scale(&zpow(z, i)))).collect()
    }
}

fn zpow(z: &Q, i: i64) -> Q {
    if i >= 0 {
        z.clone().pow(i as u32)
    } else {
        z.clone().recip().pow((-i) as u32)
    }
}

fn plain(r: i64) -> Combo {
    vec![(r, OddPoly::one())]
}

/// The pair `(τ_n, τ_{n+1})` with `τ_{n+1} = 2⟨0| e^{H_+} φ(z) G φ_0 |0⟩`,
/// both exact up to weight `d`.
pub fn tau_pair_from_g(g: &GSpec, z: &Q, d: u32) -> Result<(TauSeries, TauSeries)> {
    let (a, b) = pair_impl(g, z, d, 0)?;
    Ok((
        TauSeries {
            route: Route::Vacuum,
            ..a
        },
        b,
    ))
}

fn pair_impl(g: &GSpec, z: &Q, d_plus: u32, d_minus: u32) -> Result<(TauSeries, TauSeries)> {
    if z.is_zero() {
        return Err(Error::Invalid(
            "the spectral parameter must be nonzero".into(),
        ));
    }
    let ts = TwoSided::new(g.max_mode(), d_plus, d_minus)?;
    let cap = ts.eval.cap;
    let reach = g.max_mode() + d_minus as i64;
    let field = ts.conj_field(z, -reach, d_plus as i64);
    let mut n = OddPoly::zero_with_cap(cap);
    let mut n1 = OddPoly::zero_with_cap(cap);
    for (c, modes) in g.expansion() {
        let mut ops: Vec<Combo> = modes.iter().map(|&r| ts.conj_mode(r)).collect();
        n = n.add(&ts.eval.vev(&ops)?.scale(&c));
        ops.insert(0, field.clone());
        ops.push(plain(0));
        n1 = n1.add(&ts.eval.vev(&ops)?.scale(&(c.clone() * rational::qi(2))));
    }
    let n = ts.front.mul(&n).truncate(cap);
    let n1 = ts.front.mul(&n1).truncate(cap);
    Ok((
        TauSeries {
            body: n,
            g: g.clone(),
            route: Route::Conjugated,
        },
        TauSeries {
            body: n1,
            g: g.clone(),
            route: Route::Partner { z: z.clone() },
        },
    ))
}

/// Two-sided pair `(⟨e^{H_+} G e^{H_-}⟩, 2⟨e^{H_+} φ(z) G e^{H_-} φ_0⟩)` up to
/// weights `(d_plus, d_minus)`.
pub fn tau_pair_two_sided(
    g: &GSpec,
    z: &Q,
    d_plus: u32,
    d_minus: u32,
) -> Result<(TauSeries, TauSeries)> {
    pair_impl(g, z, d_plus, d_minus)
}

/// `⟨0| e^{H_+} G e^{H_-} |0⟩` by conjugation.
pub fn tau_two_sided_conjugated(g: &GSpec, d_plus: u32, d_minus: u32) -> Result<TauSeries> {
    let ts = TwoSided::new(g.max_mode(), d_plus, d_minus)?;
    let cap = ts.eval.cap;
    let mut acc = OddPoly::zero_with_cap(cap);
    for (c, modes) in g.expansion() {
        let ops: Vec<Combo> = modes.iter().map(|&r| ts.conj_mode(r)).collect();
        acc = acc.add(&ts.eval.vev(&ops)?.scale(&c));
    }
    Ok(TauSeries {
        body: ts.front.mul(&acc).truncate(cap),
        g: g.clone(),
        route: Route::Conjugated,
    })
}

/// `⟨0| e^{H_+} G e^{H_-} |0⟩` from
/// `e^{H_-}|0⟩ = Σ_λ 2^{-l(λ)/2} Q_λ(t_-) φ_{λ_1} ⋯ φ_{λ_l} |α(λ)⟩`,
/// with `|α(λ)⟩ = √2 φ_0 |0⟩` for odd `l(λ)`.
pub fn tau_two_sided(g: &GSpec, d_plus: u32, d_minus: u32) -> Result<TauSeries> {
    let cap = Cap::bi(d_plus as i64, d_minus as i64);
    let reach = g.max_mode().max(d_minus as i64);
    let table = table_for(reach, d_plus);
    let neg = QTable::from_values(negative_table(d_minus, &Q::one()));
    let mut acc = OddPoly::zero_with_cap(cap);
    for lambda in StrictPartition::up_to_weight(d_minus) {
        let q_neg = schur_q(&neg, &lambda)?;
        let parts: Vec<i64> = lambda.parts().iter().map(|&p| p as i64).collect();
        let odd = parts.len() % 2 == 1;
        let half_exp = -(parts.len() as i32) + i32::from(odd);
        for (c, modes) in g.expansion() {
            let mut all = modes;
            all.extend(&parts);
            if odd {
                all.push(0);
            }
            let v = vev_modes(&table, &all)?.truncate(cap);
            if v.is_empty() {
                continue;
            }
            let term = Sqrt2Scaled::new(v.mul(&q_neg).scale(&c), half_exp).into_exact()?;
            acc = acc.add(&term.truncate(cap));
        }
    }
    Ok(TauSeries {
        body: acc.truncate(cap),
        g: g.clone(),
        route: Route::QBasis,
    })
}

/// `P(D) τ·σ`; an empty result means the equation holds below the cap.
pub fn hirota_zero_check(op: &HirotaOp, tau: &TauSeries, sigma: &TauSeries) -> OddPoly {
    hirota(op, &tau.body, &sigma.body)
}

/// The named Hirota equations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equation {
    /// `∮ e^{ξ(t-t',z)} τ(t-[z^{-1}]) τ(t'+[z^{-1}]) dz/(2πiz) = τ(t)τ(t')`.
    BkpResidue,
    /// `(D_1^3 - D_3) τ_n·τ_{n+1}`.
    Mbkp1,
    /// `(6D_5 - 5D_3D_1^2 - D_1^5) τ_n·τ_{n+1}`.
    Mbkp2,
    /// `D_{-1}(D_3 - D_1^3) τ·τ`.
    Negflow1,
    /// `D_1 D_{-1} τ_n·τ_{n+1}`.
    Mixed1,
}

impl Equation {
    pub const ALL: [Equation; 5] = [
        Equation::BkpResidue,
        Equation::Mbkp1,
        Equation::Mbkp2,
        Equation::Negflow1,
        Equation::Mixed1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Equation::BkpResidue => "bkp-residue",
            Equation::Mbkp1 => "mbkp1",
            Equation::Mbkp2 => "mbkp2",
            Equation::Negflow1 => "negflow1",
            Equation::Mixed1 => "mixed1",
        }
    }

    /// The Hirota operator, or `None` for the residue form.
    pub fn operator(self) -> Option<HirotaOp> {
        let q = rational::qi;
        let op = match self {
            Equation::BkpResidue => return None,
            Equation::Mbkp1 => HirotaOp::new([(q(1), vec![1, 1, 1]), (q(-1), vec![3])]),
            Equation::Mbkp2 => HirotaOp::new([
                (q(6), vec![5]),
                (q(-5), vec![3, 1, 1]),
                (q(-1), vec![1, 1, 1, 1, 1]),
            ]),
            Equation::Negflow1 => HirotaOp::new([(q(1), vec![-1, 3]), (q(-1), vec![-1, 1, 1, 1])]),
            Equation::Mixed1 => HirotaOp::new([(q(1), vec![1, -1])]),
        };
        Some(op.expect("catalog operators use odd indices"))
    }
}

impl FromStr for Equation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Equation::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Invalid(alloc::format!("unknown equation {s:?}")))
    }
}

/// `Σ_n (u v_n + u' v'_n) z^{±n}` over odd `n` up to the cap of that side.
fn xi_coeffs(cap: Cap, negative: bool, u: Q, u_primed: Q) -> BTreeMap<i32, OddPoly> {
    let d = if negative { cap.neg } else { cap.pos };
    let mut a = BTreeMap::new();
    for n in (1..=d as i32).step_by(2) {
        let v = Var::t(if negative { -n } else { n });
        let c = OddPoly::var(v)
            .scale(&u)
            .add(&OddPoly::var(v.primed()).scale(&u_primed));
        a.insert(if negative { -n } else { n }, c);
    }
    a
}

fn window_for(cap: Cap) -> Window {
    let p = if cap.pos >= UNBOUNDED {
        0
    } else {
        cap.pos.max(0)
    };
    let n = if cap.neg >= UNBOUNDED {
        0
    } else {
        cap.neg.max(0)
    };
    // a product of two shifted factors reaches twice the cap
    Window::symmetric(2 * p.max(n) as i32)
}

/// `∮_{C_∞} e^{ξ(t_+ - t'_+, z)} f(t_+ - [z^{-1}], t_-) g(t'_+ + [z^{-1}], t'_-) dz/(2πiz)`.
fn contour_infinity(f: &OddPoly, g: &OddPoly, cap: Cap) -> Result<OddPoly> {
    let w = window_for(cap);
    let a = miwa_shift_on(f, ShiftSign::Minus, false, false, w)?;
    let b = miwa_shift_on(&g.primed(), ShiftSign::Plus, true, false, w)?;
    let e = exp_xi(&xi_coeffs(cap, false, Q::one(), -Q::one()), cap, w)?;
    let prod = e.mul(&a, w)?.mul(&b, w)?;
    Ok(residue_z0(&prod)?.truncate(cap))
}

/// `∮_{C_0} e^{ξ(t'_- - t_-, 1/z)} f(t_+, t_- + [z]) g(t'_+, t'_- - [z]) dz/(2πiz)`.
fn contour_zero(f: &OddPoly, g: &OddPoly, cap: Cap) -> Result<OddPoly> {
    let w = window_for(cap);
    let a = miwa_shift_on(f, ShiftSign::Plus, false, true, w)?;
    let b = miwa_shift_on(&g.primed(), ShiftSign::Minus, true, true, w)?;
    let e = exp_xi(&xi_coeffs(cap, true, -Q::one(), Q::one()), cap, w)?;
    let prod = e.mul(&a, w)?.mul(&b, w)?;
    Ok(residue_z0(&prod)?.truncate(cap))
}

/// Left minus right side of the BKP residue identity, truncated at `d`.
pub fn bkp_residue_check(tau: &TauSeries, d: u32) -> Result<OddPoly> {
    let cap = Cap::new(d as i64).min(tau.cap());
    let lhs = contour_infinity(&tau.body, &tau.body, cap)?;
    let rhs = tau.body.mul(&tau.body.primed()).truncate(cap);
    Ok(lhs.sub(&rhs).truncate(cap))
}

/// `∮_{C_∞} e^{ξ(t-t',z)} τ_{n+1}(t-[z^{-1}]) τ_n(t'+[z^{-1}]) - 2τ_n(t)τ_{n+1}(t') + τ_{n+1}(t)τ_n(t')`.
pub fn mbkp_residue_check(tau_n: &TauSeries, tau_n1: &TauSeries, d: u32) -> Result<OddPoly> {
    let cap = Cap::new(d as i64).min(tau_n.cap()).min(tau_n1.cap());
    let lhs = contour_infinity(&tau_n1.body, &tau_n.body, cap)?;
    let two = rational::qi(2);
    let rhs = tau_n
        .body
        .mul(&tau_n1.body.primed())
        .scale(&two)
        .sub(&tau_n1.body.mul(&tau_n.body.primed()));
    Ok(lhs.sub(&rhs.truncate(cap)).truncate(cap))
}

/// Left minus right side of the negative-flow residue identity for a
/// two-sided tau.
pub fn negflow_residue_check(tau: &TauSeries, d_plus: u32, d_minus: u32) -> Result<OddPoly> {
    let cap = Cap::bi(d_plus as i64, d_minus as i64).min(tau.cap());
    let lhs = contour_infinity(&tau.body, &tau.body, cap)?;
    let rhs = contour_zero(&tau.body, &tau.body, cap)?;
    Ok(lhs.sub(&rhs).truncate(cap))
}

/// The two-sided modified identity
/// `∮_{C_0} e^{ξ(t'_- - t_-, 1/z)} τ_{n+1}(t_+, t_-+[z]) τ_n(t'_+, t'_- - [z])
///  = 2τ_n(t)τ_{n+1}(t') - ∮_{C_∞} e^{ξ(t_+ - t'_+, z)} τ_{n+1}(t_+ - [z^{-1}], t_-) τ_n(t'_+ + [z^{-1}], t'_-)`.
pub fn mixed_residue_check(
    tau_n: &TauSeries,
    tau_n1: &TauSeries,
    d_plus: u32,
    d_minus: u32,
) -> Result<OddPoly> {
    let cap = Cap::bi(d_plus as i64, d_minus as i64)
        .min(tau_n.cap())
        .min(tau_n1.cap());
    let zero = contour_zero(&tau_n1.body, &tau_n.body, cap)?;
    let inf = contour_infinity(&tau_n1.body, &tau_n.body, cap)?;
    let two = tau_n
        .body
        .mul(&tau_n1.body.primed())
        .scale(&rational::qi(2));
    Ok(zero.add(&inf).sub(&two).truncate(cap))
}

/// Test catalog of group-like elements.
/// Residual of `eq` for the tau (or pair) built from `g`, valid through
/// weighted degree `d_plus` (and `d_minus` in the negative times). Taus are
/// built with enough headroom that the operator's own weight does not eat
/// into the checked range. `z` is the spectral parameter of the partner.
pub fn check_equation(
    eq: Equation,
    g: &GSpec,
    z: &Q,
    d_plus: u32,
    d_minus: u32,
) -> Result<OddPoly> {
    let op = match eq.operator() {
        None => return bkp_residue_check(&tau_from_g(g, d_plus)?, d_plus),
        Some(op) => op,
    };
    let (wp, wn) = op.bi_weight();
    let dp = d_plus + wp as u32;
    let dn = d_minus + wn as u32;
    let residual = match eq {
        Equation::Mbkp1 | Equation::Mbkp2 => {
            let (a, b) = tau_pair_from_g(g, z, dp)?;
            hirota_zero_check(&op, &a, &b)
        }
        Equation::Negflow1 => {
            let tau = tau_two_sided(g, dp, dn)?;
            hirota_zero_check(&op, &tau, &tau)
        }
        _ => {
            let (a, b) = tau_pair_two_sided(g, z, dp, dn)?;
            hirota_zero_check(&op, &a, &b)
        }
    };
    let cap = if wn > 0 {
        Cap::bi(d_plus as i64, d_minus as i64)
    } else {
        Cap::new(d_plus as i64)
    };
    Ok(residual.truncate(cap))
}

pub fn catalog() -> Vec<GSpec> {
    [
        "1",
        "c=1,r=2,s=1",
        "c=1/2,r=2,s=1",
        "c=1/3,r=3,s=0",
        "c=1/2,r=3,s=1;c=-2,r=2,s=0",
        "c=1,r=4,s=1;c=1/2,r=2,s=1",
    ]
    .iter()
    .map(|s| s.parse().expect("catalog entries are valid"))
    .collect()
}
