//! Virasoro characters of `M(p, p+1)`, `L → ∞` limits of fermionic sums, and
//! the finitized and character identities connecting them.

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::bosonic::{even_rhs, odd_rhs};
use crate::error::{Error, Result};
use crate::fermionic::{
    fermi_poly, fermi_truncated, half_branch, prefactor_phi, prefactor_phi_tilde, Side, Variant,
};
use crate::nmsystem::{delta, FermSetup, ModelParams};
use crate::qgauss::{qbinom, qtrinom};
use crate::qlaurent::{pochhammer, series_inverse, truncated_mul, Exponent, PochhammerOrder, QLaurent, QSeries};
use crate::report::{check, compare_poly, compare_series, Instance, Params, VerifyReport};

/// Default upper limit on `L` for the stabilization path.
pub const DEFAULT_L_CAP: i64 = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharSeries {
    pub p: i64,
    pub r: i64,
    pub s: i64,
    pub value: QSeries,
}

fn inverse_qinf(cutoff: Exponent) -> Result<QSeries> {
    series_inverse(&pochhammer(PochhammerOrder::Infinite, cutoff)?)
}

/// `χ^{p,p+1}_{r,s}` truncated at `cutoff`, for `1 <= r <= p-1`, `1 <= s <= p`.
pub fn chi(p: i64, r: i64, s: i64, cutoff: Exponent) -> Result<CharSeries> {
    if p < 4 || !(1..p).contains(&r) || !(1..=p).contains(&s) {
        return Err(Error::InvalidParams(format!(
            "character needs p >= 4, 1 <= r <= p-1, 1 <= s <= p; got p = {p}, r = {r}, s = {s}"
        )));
    }
    let pp = p + 1;
    let k = p * s + pp * r;
    let mut terms: Vec<(Exponent, BigInt)> = Vec::new();
    let mut push = |e: i64, c: i64| {
        let e = Exponent::from_int(e);
        if e <= cutoff {
            terms.push((e, BigInt::from(c)));
        }
    };
    push(0, 1);
    push(r * s, -1);
    // both exponents are at least pp'j² - |j|K
    let mut j = 1;
    while Exponent::from_int(p * pp * j * j - j * k) <= cutoff {
        for j in [j, -j] {
            push(p * pp * j * j + j * (pp * r - p * s), 1);
            push((p * j + r) * (pp * j + s), -1);
        }
        j += 1;
    }
    let theta = QSeries::new(QLaurent::from_terms(terms), cutoff);
    Ok(CharSeries {
        p,
        r,
        s,
        value: theta.mul(&inverse_qinf(cutoff)?),
    })
}

/// `Σ q^{e} χ_{a,s}` over `(e, s)`, shifting the character side; terms with
/// `s > p` are dropped.
fn chi_combo(p: i64, a: i64, parts: &[(Exponent, i64)], cutoff: Exponent) -> Result<QSeries> {
    let mut acc = QSeries::new(QLaurent::zero(), cutoff);
    for &(e, s) in parts {
        if s > p {
            continue;
        }
        let ext = if e < Exponent::ZERO { cutoff - e } else { cutoff };
        let c = chi(p, a, s, ext)?.value.shift(e).truncate(cutoff);
        acc = acc.add(&c);
    }
    Ok(acc)
}

/// Largest value of `m_k` on `{ (m-c)·S·(m-c) <= rhs }`, from the diagonal of
/// `S^{-1}`, rounded up with a unit safety margin.
fn ellipsoid_bounds(s_inv: &[Vec<f64>], lin: &[f64], cutoff: Exponent) -> Vec<i64> {
    let d = lin.len();
    // c = S^{-1} A / ... with 4Φ = m·S·m - 2 A·m, the center is S^{-1} A
    let c: Vec<f64> = (0..d).map(|i| (0..d).map(|j| s_inv[i][j] * lin[j]).sum()).collect();
    let ac: f64 = (0..d).map(|i| lin[i] * c[i]).sum();
    let rhs = (cutoff.quarters() as f64 + ac).max(0.0);
    (0..d)
        .map(|k| (c[k] + (rhs * s_inv[k][k]).sqrt()).floor().max(0.0) as i64 + 1)
        .collect()
}

/// Inverse of the `A_n` Cartan matrix: `min(i,j)(n+1-max(i,j))/(n+1)`, 1-based.
fn cartan_inverse(n: usize) -> Vec<Vec<f64>> {
    (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| (i.min(j) * (n + 1 - i.max(j))) as f64 / (n + 1) as f64)
                .collect()
        })
        .collect()
}

/// Calls `visit` on every vector in the box `0 <= m_k <= hi_k`.
fn for_each_in_box(hi: &[i64], mut visit: impl FnMut(&[i64])) {
    let d = hi.len();
    let mut m = vec![0i64; d];
    loop {
        visit(&m);
        let mut k = 0;
        loop {
            if k == d {
                return;
            }
            m[k] += 1;
            if m[k] <= hi[k] {
                break;
            }
            m[k] = 0;
            k += 1;
        }
    }
}

fn inv_qpoch(k: i64, cutoff: Exponent) -> QSeries {
    series_inverse(&pochhammer(PochhammerOrder::Finite(k), cutoff).expect("k >= 0"))
        .expect("(q)_k has constant term 1")
}

/// Box containing every `m` with `Φ(m) <= cutoff`. The symmetric part of
/// `C̃` is `diag(2) ⊕ Cartan(A_{p-2})`.
fn limit_box(setup: &FermSetup, cutoff: Exponent) -> Vec<i64> {
    let d = setup.params.dim();
    let ci = cartan_inverse(d - 1);
    let mut s_inv = vec![vec![0.0; d]; d];
    s_inv[0][0] = 0.5;
    for r in 1..d {
        for c in 1..d {
            s_inv[r][c] = ci[r - 1][c - 1];
        }
    }
    let lin: Vec<f64> = setup.vectors.a_vec.iter().map(|&x| x as f64).collect();
    ellipsoid_bounds(&s_inv, &lin, cutoff)
}

/// `Σ_m q^{Φ(m)} / (q)_{m0} ∏_{j>=1} [((Ĩm)_j + u_j)/2; m_j]`, the `L → ∞`
/// limit of `F^{p,i}_{a,b}(L)`, summed directly over a bounding box.
pub fn fermi_limit_direct(p: i64, i: i64, a: i64, b: i64, cutoff: Exponent) -> Result<QSeries> {
    if i == 1 && a == p - 1 {
        return fermi_limit_direct(p, 0, 1, b, cutoff);
    }
    let setup = FermSetup::new(ModelParams::new(p, a, b, i, 0)?);
    let d = setup.params.dim();
    let it = &setup.matrices.i_tilde;
    let u = &setup.vectors.u;
    let hi = limit_box(&setup, cutoff);
    let parity = setup.params.top_parity();

    let mut acc = QLaurent::zero();
    for_each_in_box(&hi, |m| {
        if m[d - 1].rem_euclid(2) != parity {
            return;
        }
        let e = crate::fermionic::phi(&setup, m);
        if e > cutoff {
            return;
        }
        let mut t = inv_qpoch(m[0], cutoff - e).poly().shift(e);
        for j in 1..d {
            let top2: i64 = (0..d).map(|k| it[j][k] * m[k]).sum::<i64>() + u[j];
            if top2 % 2 != 0 {
                return;
            }
            t = truncated_mul(&t, &qbinom(top2 / 2 - m[j], m[j]), cutoff);
            if t.is_zero() {
                return;
            }
        }
        acc += t;
    });
    Ok(QSeries::new(acc, cutoff))
}

/// The limit through truncated `F(L)` for increasing `L`, stopping once the
/// truncation is unchanged over two consecutive steps. The scan starts at the
/// first `L` where every `m` with `Φ(m) <= cutoff` has `n0 >= 0`.
pub fn fermi_limit_stabilized(
    p: i64,
    i: i64,
    a: i64,
    b: i64,
    cutoff: Exponent,
    l_cap: i64,
) -> Result<QSeries> {
    if i == 1 && a == p - 1 {
        return fermi_limit_stabilized(p, 0, 1, b, cutoff, l_cap);
    }
    let base = ModelParams::new(p, a, b, i, 0)?;
    // below this L some m inside the cutoff box still has n0 < 0, so equal
    // consecutive values need not be final
    let hi = limit_box(&FermSetup::new(base), cutoff);
    let floor = hi[0] + (hi[2] + 1) / 2;
    let mut prev: Option<QSeries> = None;
    let mut unchanged = 0;
    for l in floor.min(l_cap + 1)..=l_cap {
        let cur = fermi_truncated(base.with_l(l)?, cutoff);
        if prev.as_ref() == Some(&cur) {
            unchanged += 1;
            if unchanged == 2 {
                return Ok(cur);
            }
        } else {
            unchanged = 0;
        }
        prev = Some(cur);
    }
    Err(Error::NotStabilized { l_cap })
}

/// The `L → ∞` limit, via the direct sum.
pub fn fermi_limit(p: i64, i: i64, a: i64, b: i64, cutoff: Exponent) -> Result<QSeries> {
    fermi_limit_direct(p, i, a, b, cutoff)
}

/// `Σ_m q^{(m·C·m - 2 λ·m)/4} / (q)_{m_1} ∏_{j=2}^{p-2} [((I m)_j + t_j)/2; m_j]`
/// over `m ∈ Z^{p-2}_{>=0}` with `m_{p-2}` even, using the `A_{p-2}` Cartan
/// and incidence matrices. Vectors are 0-based (`m[0]` is `m_1`).
fn cartan_form_sum(p: i64, lambda: &[i64], tops: &[i64], cutoff: Exponent) -> QLaurent {
    let n = (p - 2) as usize;
    let incidence = |r: usize, c: usize| (r + 1 == c || c + 1 == r) as i64;
    let lin: Vec<f64> = lambda.iter().map(|&x| x as f64).collect();
    let hi = ellipsoid_bounds(&cartan_inverse(n), &lin, cutoff);
    let mut acc = QLaurent::zero();
    for_each_in_box(&hi, |m| {
        if m[n - 1] % 2 != 0 {
            return;
        }
        let quad: i64 = (0..n)
            .map(|r| m[r] * (0..n).map(|c| (2 * (r == c) as i64 - incidence(r, c)) * m[c]).sum::<i64>())
            .sum();
        let lin: i64 = lambda.iter().zip(m).map(|(x, y)| x * y).sum();
        let e = Exponent::from_quarters(quad - 2 * lin);
        if e > cutoff {
            return;
        }
        let mut t = inv_qpoch(m[0], cutoff - e).poly().shift(e);
        for j in 1..n {
            let top2: i64 = (0..n).map(|k| incidence(j, k) * m[k]).sum::<i64>() + tops[j];
            if top2 % 2 != 0 {
                return;
            }
            t = truncated_mul(&t, &qbinom(top2 / 2 - m[j], m[j]), cutoff);
            if t.is_zero() {
                return;
            }
        }
        acc += t;
    });
    acc
}

/// Character side of the even identity for `Fer^{p,0}_{a,b}`.
fn even_char_side(p: i64, a: i64, b: i64, cutoff: Exponent) -> Result<QSeries> {
    let half = half_branch(Side::Even, a, b);
    let parts = match (b, half) {
        (1, true) => vec![(Exponent::from_quarters(a * (a - 1)), 1)],
        (1, false) => vec![(Exponent::from_quarters((a - 1) * (a - 2)), 2)],
        (_, true) => vec![(prefactor_phi(a, b), b + 1)],
        (_, false) => {
            let e = prefactor_phi_tilde(a, b);
            vec![(e, b + 2), (e + Exponent::from_int(a - b), b)]
        }
    };
    chi_combo(p, a, &parts, cutoff)
}

/// Character side of the odd identity for `Fer^{p,1}_{p-a,b}`.
fn odd_char_side(p: i64, a: i64, b: i64, cutoff: Exponent) -> Result<QSeries> {
    let half = half_branch(Side::Odd, a, b);
    let parts = match (b, half) {
        (1, true) => vec![(prefactor_phi(p - a, p - 1), 1)],
        (1, false) => vec![(prefactor_phi_tilde(p - a, p - 1) + Exponent::from_int(1 - a), 2)],
        (_, true) => vec![(
            prefactor_phi(p - a, p - 1) + prefactor_phi(a, b) - Exponent::from_quarters((a - 1) * a),
            b + 1,
        )],
        (_, false) => {
            let e = prefactor_phi_tilde(p - a, p - 1) + prefactor_phi_tilde(a, b)
                - Exponent::from_quarters((a - 1) * (a + 2));
            vec![(e, b + 2), (e + Exponent::from_int(a - b), b)]
        }
    };
    chi_combo(p, a, &parts, cutoff)
}

fn char_params(p: i64, a: i64, b: i64, i: i64) -> Params {
    Params::new().with("p", p).with("a", a).with("b", b).with("i", i)
}

enum CharCase {
    Headline,
    CartanHeadline,
    Even(i64, i64),
    Odd(i64, i64),
    Summed(i64, i64),
}

fn char_instance(p: i64, case: CharCase, cutoff: Exponent) -> Result<Instance> {
    let chi11 = || chi(p, 1, 1, cutoff).map(|c| c.value);
    Ok(match case {
        CharCase::Headline => {
            let lhs = fermi_limit(p, 0, 1, 1, cutoff)?;
            compare_series("fermionic form of chi_{1,1}", char_params(p, 1, 1, 0), &lhs, &chi11()?)
        }
        CharCase::CartanHeadline => {
            let n = (p - 2) as usize;
            let lhs = QSeries::new(cartan_form_sum(p, &vec![0; n], &vec![0; n], cutoff), cutoff);
            compare_series("Cartan fermionic form of chi_{1,1}", Params::new().with("p", p), &lhs, &chi11()?)
        }
        CharCase::Even(a, b) => {
            let lhs = fermi_limit(p, 0, a, b, cutoff)?;
            let label = match (b, half_branch(Side::Even, a, b)) {
                (1, _) => "even character identity, b=1",
                (_, true) => "even character identity",
                (_, false) => "even extended character identity",
            };
            compare_series(label, char_params(p, a, b, 0), &lhs, &even_char_side(p, a, b, cutoff)?)
        }
        CharCase::Odd(a, b) => {
            let lhs = fermi_limit(p, 1, p - a, b, cutoff)?;
            let label = match (b, half_branch(Side::Odd, a, b)) {
                (1, _) => "odd character identity, b=1",
                (_, true) => "odd character identity",
                (_, false) => "odd extended character identity",
            };
            compare_series(label, char_params(p, a, b, 1), &lhs, &odd_char_side(p, a, b, cutoff)?)
        }
        CharCase::Summed(a, b) => {
            let n = (p - 2) as usize;
            let mut lambda = vec![0i64; n];
            lambda[0] += 1;
            lambda[(b - 1) as usize] += 1;
            let mut tops = vec![0i64; n];
            for j in 2..=p - 2 {
                tops[(j - 1) as usize] = delta(a, j) + delta(b, j);
            }
            let lhs = QSeries::new(cartan_form_sum(p, &lambda, &tops, cutoff), cutoff);
            let e = prefactor_phi_tilde(a, b);
            let rhs = chi_combo(p, a, &[(e, b + 2), (e + Exponent::from_int(a - b), b)], cutoff)?;
            compare_series("Cartan form extended identity", char_params(p, a, b, 0), &lhs, &rhs)
        }
    })
}

/// All character identities at one `p` to `cutoff`: both fermionic forms of
/// `χ_{1,1}`, the even and odd identities for every `(a, b)`, and the
/// Cartan-form extended identity for `2 <= a, b <= p-2`, `a + b` odd.
pub fn verify_character_identities(p: i64, cutoff: Exponent) -> Result<VerifyReport> {
    if p < 4 {
        return Err(Error::InvalidParams(format!("p = {p} violates p >= 4")));
    }
    let mut cases = vec![CharCase::Headline, CharCase::CartanHeadline];
    for a in 1..=p - 2 {
        for b in 1..p {
            cases.push(CharCase::Even(a, b));
            cases.push(CharCase::Odd(a, b));
        }
    }
    for a in 2..=p - 2 {
        for b in 2..=p - 2 {
            if (a + b) % 2 == 1 {
                cases.push(CharCase::Summed(a, b));
            }
        }
    }
    let instances = cases
        .into_par_iter()
        .map(|c| char_instance(p, c, cutoff))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport::new("character-identities", instances))
}

/// Direct and stabilization paths of the limit agree for every `(a, b, i)`.
pub fn verify_limit_paths(p: i64, cutoff: Exponent, l_cap: i64) -> Result<VerifyReport> {
    let triples = crate::nmsystem::all_triples(p);
    let instances = triples
        .into_par_iter()
        .map(|(a, b, i)| {
            let direct = fermi_limit_direct(p, i, a, b, cutoff)?;
            let stable = fermi_limit_stabilized(p, i, a, b, cutoff, l_cap)?;
            Ok(compare_series("limit paths agree", char_params(p, a, b, i), &direct, &stable))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport::new("character-identities", instances))
}

fn finitized_instance(p: i64, a: i64, b: i64, i: i64, l: i64) -> Result<Instance> {
    let rp = Params::new().with("p", p).with("a", a).with("b", b).with("i", i).with("L", l);
    Ok(if i == 0 {
        let lhs = fermi_poly(p, a, b, 0, l, Variant::Standard)?;
        let label = if b == 1 { "even polynomial identity, b=1" } else { "even polynomial identity" };
        compare_poly(label, rp, &lhs, &even_rhs(p, a, b, l))
    } else {
        let mut lhs = fermi_poly(p, p - a, b, 1, l, Variant::Standard)?;
        if b >= 2 && l == 0 && a == b {
            lhs += QLaurent::one();
        }
        let label = if b == 1 { "odd polynomial identity, b=1" } else { "odd polynomial identity" };
        compare_poly(label, rp, &lhs, &odd_rhs(p, a, b, l))
    })
}

/// The polynomial identity for one `(p, a, b, i)` and `L <= l_max`. For
/// `i = 1` the fermionic side is `F^{p,1}_{p-a,b}`.
pub fn verify_finitized(p: i64, a: i64, b: i64, i: i64, l_max: i64) -> Result<VerifyReport> {
    ModelParams::new(p, a, b, i, 0)?;
    let instances = (0..=l_max)
        .into_par_iter()
        .map(|l| finitized_instance(p, a, b, i, l))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport::new(if i == 0 { "even-identities" } else { "odd-identities" }, instances))
}

/// Every `(a, b)` of one parity class.
pub fn verify_identities(p: i64, i: i64, l_max: i64) -> Result<VerifyReport> {
    let mut cases = Vec::new();
    for a in 1..=p - 2 {
        for b in 1..p {
            for l in 0..=l_max {
                cases.push((a, b, l));
            }
        }
    }
    let mut instances = cases
        .into_par_iter()
        .map(|(a, b, l)| finitized_instance(p, a, b, i, l))
        .collect::<Result<Vec<_>>>()?;
    if i == 1 {
        instances.extend(reflection_route_instances(p, l_max)?);
    }
    Ok(VerifyReport::new(if i == 0 { "even-identities" } else { "odd-identities" }, instances))
}

/// `F^{p,1}_{p-a,1} = F^{p,0}_{p-a,p-1}`, and the even bosonic side at
/// `(p-a, p-1)` equals the odd one at `(a, 1)`.
fn reflection_route_instances(p: i64, l_max: i64) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for a in 2..=p - 2 {
        for l in 0..=l_max {
            let rp = || Params::new().with("p", p).with("a", a).with("b", 1).with("i", 1).with("L", l);
            out.push(compare_poly(
                "odd b=1 family equals even b=p-1 family",
                rp(),
                &fermi_poly(p, p - a, 1, 1, l, Variant::Standard)?,
                &fermi_poly(p, p - a, p - 1, 0, l, Variant::Standard)?,
            ));
            out.push(compare_poly(
                "odd b=1 bosonic side via reflection",
                rp(),
                &even_rhs(p, p - a, p - 1, l),
                &odd_rhs(p, a, 1, l),
            ));
        }
    }
    Ok(out)
}

/// Left side of the headline polynomial identity, summed over `m` with
/// binomial tops `(Ĩm/2 + L e0)_j`, independent of the `(n, m)` enumerator.
pub fn headline_lhs(p: i64, l: i64) -> QLaurent {
    let d = (p - 1) as usize;
    let mats = crate::nmsystem::FermMatrices::new(p);
    let it = &mats.i_tilde;
    let ct = &mats.c_tilde;
    // nonnegative tops make m_2, m_3, ... convex and nonincreasing, with
    // m_2 <= 2L, m_0 <= L - m_2/2 and m_1 <= m_2/2
    fn tail(k: usize, m: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64])) {
        if k == m.len() {
            visit(m);
            return;
        }
        let lo = if k == 3 { 0 } else { (2 * m[k - 1] - m[k - 2]).max(0) };
        for v in lo..=m[k - 1] {
            m[k] = v;
            tail(k + 1, m, visit);
        }
    }
    let mut acc = QLaurent::zero();
    let mut visit = |m: &[i64]| {
        if m[d - 1] % 2 != 0 {
            return;
        }
        let mut t = QLaurent::one();
        for j in 0..d {
            let top2: i64 = (0..d).map(|k| it[j][k] * m[k]).sum::<i64>() + 2 * l * delta(j as i64, 0);
            if top2 % 2 != 0 || top2 / 2 < m[j] {
                return;
            }
            t = &t * &qbinom(top2 / 2 - m[j], m[j]);
        }
        let quad: i64 = (0..d)
            .map(|r| m[r] * (0..d).map(|c| ct[r][c] * m[c]).sum::<i64>())
            .sum();
        acc += t.shift(Exponent::from_quarters(quad));
    };
    let mut m = vec![0i64; d];
    for m2 in 0..=2 * l {
        for m0 in 0..=l - (m2 + 1) / 2 {
            for m1 in 0..=m2 / 2 {
                m[0] = m0;
                m[1] = m1;
                m[2] = m2;
                tail(3, &mut m, &mut visit);
            }
        }
    }
    acc
}

/// Right side of the headline identity, written directly in trinomials.
pub fn headline_rhs(p: i64, l: i64) -> QLaurent {
    let pp = p + 1;
    let jmax = (l + 2) / (2 * p) + 1;
    (-jmax..=jmax)
        .map(|j| {
            let a = qtrinom(l, 2 * p * j, 0).shift(Exponent::from_int(p * pp * j * j + j));
            let b = qtrinom(l, 2 * p * j + 2, 0).shift(Exponent::from_int((j * p + 1) * (j * pp + 1)));
            &a - &b
        })
        .sum()
}

/// The headline polynomial identity for `L <= l_max`.
pub fn verify_headline_finitized(p: i64, l_max: i64) -> Result<VerifyReport> {
    if p < 4 {
        return Err(Error::InvalidParams(format!("p = {p} violates p >= 4")));
    }
    let instances = (0..=l_max)
        .into_par_iter()
        .map(|l| {
            compare_poly(
                "headline polynomial identity",
                Params::new().with("p", p).with("L", l),
                &headline_lhs(p, l),
                &headline_rhs(p, l),
            )
        })
        .collect();
    Ok(VerifyReport::new("even-identities", instances))
}

/// Bosonic sums at large `L` against their character limits.
pub fn verify_bosonic_limits(p: i64, cutoff: Exponent, l: i64) -> Result<VerifyReport> {
    let mut instances = Vec::new();
    for a in 1..=p - 2 {
        for b in 1..p {
            let rp = || Params::new().with("p", p).with("a", a).with("b", b).with("L", l);
            let lhs = QSeries::new(even_rhs(p, a, b, l), cutoff);
            let rhs = even_char_side(p, a, b, cutoff)?;
            instances.push(compare_series("even bosonic side tends to characters", rp(), &lhs, &rhs));
            let lhs = QSeries::new(odd_rhs(p, a, b, l), cutoff);
            let rhs = odd_char_side(p, a, b, cutoff)?;
            instances.push(compare_series("odd bosonic side tends to characters", rp(), &lhs, &rhs));
        }
    }
    Ok(VerifyReport::new("character-identities", instances))
}

/// True when every known coefficient is a nonnegative integer and the
/// constant term is 1.
pub fn is_normalized_nonnegative(c: &CharSeries) -> bool {
    c.value.coeff(Exponent::ZERO).is_one() && c.value.poly().is_nonnegative()
}

/// Checks normalization and nonnegativity of every character at one `p`.
pub fn verify_character_positivity(p: i64, cutoff: Exponent) -> Result<VerifyReport> {
    let mut instances = Vec::new();
    for r in 1..p {
        for s in 1..=p {
            let c = chi(p, r, s, cutoff)?;
            instances.push(check(
                "character normalized and nonnegative",
                Params::new().with("p", p).with("r", r).with("s", s),
                is_normalized_nonnegative(&c),
                || format!("{}", c.value),
            ));
        }
    }
    Ok(VerifyReport::new("character-identities", instances))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(c: &QSeries, n: i64) -> Vec<i64> {
        (0..=n)
            .map(|k| i64::try_from(c.coeff(Exponent::from_int(k))).unwrap())
            .collect()
    }

    const N: i64 = 20;

    fn cut() -> Exponent {
        Exponent::from_int(N)
    }

    #[test]
    fn chi_matches_reference_values() {
        let c = chi(4, 1, 1, cut()).unwrap();
        assert_eq!(
            ints(&c.value, N),
            vec![1, 0, 1, 1, 2, 2, 4, 4, 7, 8, 12, 14, 20, 23, 32, 38, 50, 59, 77, 91, 116]
        );
        let c = chi(5, 2, 3, cut()).unwrap();
        assert_eq!(
            ints(&c.value, N),
            vec![1, 1, 2, 3, 5, 7, 10, 14, 20, 26, 36, 47, 63, 81, 106, 135, 174, 219, 278, 347, 436]
        );
    }

    #[test]
    fn chi_symmetry_and_range() {
        for p in 4..=6 {
            for r in 1..p {
                for s in 1..=p {
                    let x = chi(p, r, s, cut()).unwrap();
                    let y = chi(p, p - r, p + 1 - s, cut()).unwrap();
                    assert_eq!(x.value, y.value);
                    assert!(is_normalized_nonnegative(&x));
                }
            }
        }
        assert!(chi(4, 0, 1, cut()).is_err());
        assert!(chi(4, 1, 5, cut()).is_err());
    }

    #[test]
    fn limit_paths_agree_p4() {
        let r = verify_limit_paths(4, Exponent::from_int(10), DEFAULT_L_CAP).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn stabilization_is_monotone() {
        let c = Exponent::from_int(8);
        let base = ModelParams::new(4, 2, 3, 0, 0).unwrap();
        let limit = fermi_limit_stabilized(4, 0, 2, 3, c, DEFAULT_L_CAP).unwrap();
        let first = (0..)
            .find(|&l| fermi_truncated(base.with_l(l).unwrap(), c) == limit)
            .unwrap();
        for l in first..first + 5 {
            assert_eq!(fermi_truncated(base.with_l(l).unwrap(), c), limit, "L = {l}");
        }
    }

    #[test]
    fn stabilization_cap_reports_error() {
        let r = fermi_limit_stabilized(5, 0, 1, 1, cut(), 3);
        assert_eq!(r, Err(Error::NotStabilized { l_cap: 3 }));
    }

    #[test]
    fn character_identities_p4() {
        let r = verify_character_identities(4, Exponent::from_int(12)).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn headline_identity_small() {
        for p in 4..=5 {
            let r = verify_headline_finitized(p, 6).unwrap();
            assert!(r.all_passed(), "{r}");
        }
    }

    #[test]
    fn headline_lhs_matches_fermionic_sum() {
        for p in 4..=6 {
            for l in 0..=5 {
                let f = fermi_poly(p, 1, 1, 0, l, Variant::Standard).unwrap();
                assert_eq!(headline_lhs(p, l), f, "p={p} L={l}");
            }
        }
    }

    #[test]
    fn finitized_identities_p5() {
        for i in 0..=1 {
            let r = verify_identities(5, i, 5).unwrap();
            assert!(r.all_passed(), "{r}");
        }
    }

    #[test]
    fn bosonic_limits_p4() {
        let r = verify_bosonic_limits(4, Exponent::from_int(6), 16).unwrap();
        assert!(r.all_passed(), "{r}");
    }
}
