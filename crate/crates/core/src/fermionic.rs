//! Fermionic polynomials `F^{p,i}_{a,b}(L)` and their modified variants.
//!
//! A fermionic sum runs over the `(n, m)` solutions of [`crate::nmsystem`]
//! and weighs each by `q^{Φ(m)} ∏_j [n_j + m_j; n_j]`, with
//! `4Φ(m) = m·C̃·m - 2A·m` in quarter units.

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::memo::Memo;
use crate::nmsystem::{delta, enumerate, FermSetup, ModelParams, Mode, NMSolution};
use crate::qgauss::{qbinom, qbinom_modified};
use crate::qlaurent::{truncated_mul, Exponent, QLaurent, QSeries};
use crate::report::{check, compare_poly, Instance, Params, VerifyReport};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Standard,
    Modified,
}

impl Variant {
    fn mode(self) -> Mode {
        match self {
            Variant::Standard => Mode::Standard,
            Variant::Modified => Mode::Modified,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FermPoly {
    pub params: ModelParams,
    pub variant: Variant,
    pub value: QLaurent,
}

static FERMI: Memo<(ModelParams, Variant), QLaurent> = Memo::new(1 << 14);

/// `Φ(m)`; always on the quarter lattice.
pub fn phi(setup: &FermSetup, m: &[i64]) -> Exponent {
    let c = &setup.matrices.c_tilde;
    let a = &setup.vectors.a_vec;
    let quad: i64 = m
        .iter()
        .enumerate()
        .map(|(r, x)| x * c[r].iter().zip(m).map(|(cij, y)| cij * y).sum::<i64>())
        .sum();
    let lin: i64 = a.iter().zip(m).map(|(x, y)| x * y).sum();
    Exponent::from_quarters(quad - 2 * lin)
}

/// `q^{Φ(m)} ∏_j [n_j + m_j; n_j]` for one solution.
pub fn term(setup: &FermSetup, sol: &NMSolution, variant: Variant) -> QLaurent {
    let mut acc = QLaurent::q_pow(phi(setup, &sol.m));
    for (n, m) in sol.n.iter().zip(&sol.m) {
        let factor = match variant {
            Variant::Standard => qbinom(*n, *m),
            Variant::Modified => qbinom_modified(*n, *m),
        };
        if factor.is_zero() {
            return QLaurent::zero();
        }
        acc = &acc * &factor;
    }
    acc
}

/// The fermionic sum for validated parameters.
pub fn fermi(params: ModelParams, variant: Variant) -> FermPoly {
    let value = FERMI.get_or((params, variant), || {
        let setup = FermSetup::new(params);
        enumerate(&setup, variant.mode())
            .iter()
            .map(|s| term(&setup, s, variant))
            .sum()
    });
    FermPoly {
        params,
        variant,
        value,
    }
}

/// The standard sum with every term above `cutoff` discarded; same value as
/// `fermi(..).value.truncate(cutoff)` without forming high-order terms.
pub fn fermi_truncated(params: ModelParams, cutoff: Exponent) -> QSeries {
    let setup = FermSetup::new(params);
    let mut acc = QLaurent::zero();
    for sol in enumerate(&setup, Mode::Standard) {
        let e = phi(&setup, &sol.m);
        if e > cutoff {
            continue;
        }
        let mut t = QLaurent::q_pow(e);
        for (n, m) in sol.n.iter().zip(&sol.m) {
            t = truncated_mul(&t, &qbinom(*n, *m), cutoff);
        }
        acc += t;
    }
    QSeries::new(acc, cutoff)
}

/// `F` with the boundary conventions used by the recurrences: zero for
/// `L < 0` or `b = p`, and `F^{p,1}_{p-1,b} ≡ F^{p,0}_{1,b}`.
pub fn fermi_poly(p: i64, a: i64, b: i64, i: i64, l: i64, variant: Variant) -> Result<QLaurent> {
    if l < 0 || (b == p && p >= 4) {
        return Ok(QLaurent::zero());
    }
    if i == 1 && a == p - 1 {
        return fermi_poly(p, 1, b, 0, l, variant);
    }
    Ok(fermi(ModelParams::new(p, a, b, i, l)?, variant).value)
}

/// Which family a parity condition refers to.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Side {
    /// `F^{p,0}_{a,b}`.
    Even,
    /// `F^{p,1}_{p-a,b}`.
    Odd,
}

/// True on the branch with prefactor `q^{L-1/2}` in the recurrences and a
/// plain `B` (rather than `B̃`) on the bosonic side.
///
/// Even: `a + δ_{a,1} + b + δ_{b,1} ≡ 0`. Odd: `a + b + δ_{b,1} ≡ 1` (mod 2).
pub fn half_branch(side: Side, a: i64, b: i64) -> bool {
    match side {
        Side::Even => (a + delta(a, 1) + b + delta(b, 1)).rem_euclid(2) == 0,
        Side::Odd => (a + b + delta(b, 1)).rem_euclid(2) == 1,
    }
}

/// `φ(a, b) = (b-a)(b-a+1)/4`.
pub fn prefactor_phi(a: i64, b: i64) -> Exponent {
    Exponent::from_quarters((b - a) * (b - a + 1))
}

/// `φ̃(a, b) = (b-a)(b-a+3)/4`.
pub fn prefactor_phi_tilde(a: i64, b: i64) -> Exponent {
    Exponent::from_quarters((b - a) * (b - a + 3))
}

fn q(e: Exponent) -> QLaurent {
    QLaurent::q_pow(e)
}

fn qi(e: i64) -> QLaurent {
    q(Exponent::from_int(e))
}

/// Right-hand sides of the six recurrences for a family `g(b, L)` with
/// `g(p, ·) = 0`, returned as `(label, b, lhs, rhs)`.
fn recurrence_cases(
    p: i64,
    l: i64,
    side: Side,
    a: i64,
    half: Exponent,
    g: &dyn Fn(i64, i64) -> QLaurent,
) -> Vec<(&'static str, i64, QLaurent, QLaurent)> {
    let lm1 = qi(l - 1);
    let f = &lm1 - &QLaurent::one();
    let inv_sqrt = q(Exponent::from_quarters(-2));
    let mut out = Vec::new();
    for b in 1..p {
        let h = half_branch(side, a, b);
        let (label, rhs) = match (b, h) {
            (1, true) => ("b=1 recurrence, half branch", &g(1, l - 1) + &(&q(half) * &g(2, l - 1))),
            (1, false) => ("b=1 recurrence, integral branch", &g(1, l - 1) + &(&lm1 * &g(2, l - 1))),
            (2, true) => (
                "b=2 recurrence, half branch",
                &(&(&lm1 * &g(3, l - 1)) + &(&q(half) * &g(1, l - 1))) + &g(2, l - 1),
            ),
            (2, false) => (
                "b=2 recurrence, integral branch",
                &(&(&inv_sqrt * &g(3, l - 1)) + &g(1, l - 1)) + &(&lm1 * &g(2, l - 1)),
            ),
            (_, true) => (
                "b>=3 recurrence, half branch",
                &(&(&(&lm1 * &g(b + 1, l - 1)) + &(&q(half) * &g(b - 1, l - 1))) + &g(b, l - 1))
                    + &(&(&lm1 * &f) * &g(b, l - 2)),
            ),
            (_, false) => {
                let up = &g(b + 1, l - 1) + &(&f * &g(b + 1, l - 2));
                let down = &g(b - 1, l - 1) + &(&f * &g(b - 1, l - 2));
                let same = &g(b, l - 1) + &(&(&qi(l - 2) * &f) * &g(b, l - 2));
                ("b>=3 recurrence, integral branch", &(&(&inv_sqrt * &up) + &down) + &same)
            }
        };
        out.push((label, b, g(b, l), rhs));
    }
    out
}

fn verify_recurrences_with(
    suite: &str,
    p: i64,
    a: i64,
    l_max: i64,
    side: Side,
    half: fn(i64) -> Exponent,
) -> Result<VerifyReport> {
    let (family_a, i, variant) = match side {
        Side::Even => (a, 0, Variant::Standard),
        Side::Odd => (p - a, 1, Variant::Modified),
    };
    // validate once; the closure below only sees valid b or the boundary b = p
    ModelParams::new(p, family_a, 1, i, 0)?;
    let g = move |b: i64, l: i64| -> QLaurent {
        fermi_poly(p, family_a, b, i, l, variant).expect("parameters validated above")
    };
    let instances = (1..=l_max)
        .into_par_iter()
        .flat_map_iter(|l| {
            recurrence_cases(p, l, side, a, half(l), &g)
                .into_iter()
                .map(move |(label, b, lhs, rhs)| {
                    let params = Params::new().with("p", p).with("a", a).with("b", b).with("i", i).with("L", l);
                    compare_poly(label, params, &lhs, &rhs)
                })
        })
        .collect();
    Ok(VerifyReport::new(suite, instances))
}

fn half_exponent(l: i64) -> Exponent {
    Exponent::from_halves(2 * l - 1)
}

/// The six recurrences of `F^{p,0}_{a,b}(L)` in `b`, for `1 <= L <= l_max`.
pub fn verify_even_recurrences(p: i64, a: i64, l_max: i64) -> Result<VerifyReport> {
    verify_recurrences_with("fermionic-recurrences", p, a, l_max, Side::Even, half_exponent)
}

/// The same recurrences for the modified `F̄^{p,1}_{p-a,b}(L)`, `2 <= a <= p-2`.
pub fn verify_odd_recurrences(p: i64, a: i64, l_max: i64) -> Result<VerifyReport> {
    if !(2..=p - 2).contains(&a) {
        return Err(Error::InvalidParams(format!(
            "odd recurrences need 2 <= a <= p-2, got a = {a}"
        )));
    }
    verify_recurrences_with("fermionic-recurrences", p, a, l_max, Side::Odd, half_exponent)
}

/// `P(L, C0, B) = Σ_{m1} (-1)^{m1} q^{(m1²-m1)/2 - L m1} [B+C0-m1; B] [B+1+L; m1]`.
#[allow(non_snake_case)]
pub fn chu_vandermonde_P(l: i64, c0: i64, b: i64) -> QLaurent {
    (0..=c0)
        .map(|m1| {
            let sign = if m1 % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let t = &qbinom(b, c0 - m1) * &qbinom(m1, b + 1 + l - m1);
            t.shift(Exponent::from_halves(m1 * m1 - m1 - 2 * l * m1)).scale(&sign)
        })
        .sum()
}

/// `(-1)^{C0} q^{C0(C0-1)/2 - C0 L} [L; C0]`.
pub fn chu_vandermonde_closed(l: i64, c0: i64) -> QLaurent {
    let sign = if c0 % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    qbinom(c0, l - c0)
        .shift(Exponent::from_halves(c0 * (c0 - 1) - 2 * c0 * l))
        .scale(&sign)
}

/// Closed form, `B`-independence and vanishing of `P` for `L, C0, B <= max`,
/// and the unit contribution of the negative-`n0` solution for `p` in `ps`.
pub fn verify_alternating_sum(max: i64, ps: &[i64]) -> Result<VerifyReport> {
    let mut cases = Vec::new();
    for l in 0..=max {
        for c0 in 0..=max {
            cases.push((l, c0));
        }
    }
    let mut instances: Vec<Instance> = cases
        .into_par_iter()
        .flat_map_iter(|(l, c0)| {
            let closed = chu_vandermonde_closed(l, c0);
            let base = chu_vandermonde_P(l, c0, 0);
            let mut v = Vec::new();
            for b in 0..=max {
                let params = Params::new().with("L", l).with("C0", c0).with("B", b);
                let pv = chu_vandermonde_P(l, c0, b);
                v.push(compare_poly("alternating sum closed form", params.clone(), &pv, &closed));
                v.push(compare_poly("alternating sum independent of B", params.clone(), &pv, &base));
                if c0 > l {
                    v.push(check("alternating sum vanishes for C0 > L", params, pv.is_zero(), || {
                        format!("P = {pv}")
                    }));
                }
            }
            v
        })
        .collect();
    for &p in ps {
        for b in 2..=p - 2 {
            let (params, sol) = crate::nmsystem::negative_n0_solution(p, b)?;
            let setup = FermSetup::new(params);
            let rp = || params.report_params();
            let found = enumerate(&setup, Mode::Modified).contains(&sol);
            instances.push(check("negative n0 solution enumerated", rp(), found, || {
                "modified enumeration misses the solution".into()
            }));
            let t = term(&setup, &sol, Variant::Modified);
            instances.push(compare_poly("negative n0 solution contributes 1", rp(), &t, &QLaurent::one()));
        }
    }
    Ok(VerifyReport::new("appendix-a", instances))
}

/// `F̄ - F = δ_{L,0} δ_{a,p-b} θ(1<b<p-1)` for `i = 1` and `F̄ = F` for `i = 0`.
pub fn modified_correction(params: &ModelParams) -> QLaurent {
    let ModelParams { p, a, b, i, l } = *params;
    if i == 1 && l == 0 && a == p - b && 1 < b && b < p - 1 {
        QLaurent::one()
    } else {
        QLaurent::zero()
    }
}

/// The standard/modified relation for every `(a, b, i)` and `L <= l_max`.
pub fn verify_modified_relation(p: i64, l_max: i64) -> Result<VerifyReport> {
    let mut cases = Vec::new();
    for (a, b, i) in crate::nmsystem::all_triples(p) {
        for l in 0..=l_max {
            cases.push(ModelParams::new(p, a, b, i, l)?);
        }
    }
    let instances = cases
        .into_par_iter()
        .map(|params| {
            let std = fermi(params, Variant::Standard).value;
            let modi = fermi(params, Variant::Modified).value;
            compare_poly(
                "modified minus standard",
                params.report_params(),
                &(&modi - &std),
                &modified_correction(&params),
            )
        })
        .collect();
    Ok(VerifyReport::new("modified-relation", instances))
}
