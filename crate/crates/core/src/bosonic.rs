//! Bosonic alternating sums of q-trinomials.
//!
//! With `p' = p + 1`:
//!
//! - `B(L, s)  = Σ_j q^{pp'j² + j(p'a - ps)} T_0(L, 2pj+a-b) - q^{(pj+a)(p'j+s)} T_0(L, 2pj+a+b)`
//! - `B̃(L, s) = Σ_j q^{pp'j² + j(p'a - ps)} T_1(L, 2pj+a-b) - q^{pp'j² + j(p'a+p(s-2)) + a(s-1) - b} T_1(L, 2pj+a+b)`
//! - `B'(L)    = Σ_j q^{pp'j² + j(p'a - p(b+1))} T_1(L, 2pj+a-b) - q^{pp'j² + j(p'a+p(b-1)) + b(a-1)} T_1(L, 2pj+a+b)`
//!
//! Only the `s` values appearing in the identities (`1, 2, b, b+1, b+2`) are
//! exercised by the verification suites.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fermionic::{half_branch, prefactor_phi, prefactor_phi_tilde, Side};
use crate::memo::Memo;
use crate::qgauss::qtrinom;
use crate::qlaurent::{Exponent, QLaurent};
use crate::report::{check, compare_poly, Instance, Params, VerifyReport};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BosKind {
    B,
    Btilde,
    Bprime,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BosPoly {
    pub kind: BosKind,
    pub p: i64,
    pub a: i64,
    pub b: i64,
    pub s: i64,
    #[serde(rename = "L")]
    pub l: i64,
    pub value: QLaurent,
}

static BOSE: Memo<(BosKind, i64, i64, i64, i64, i64), QLaurent> = Memo::new(1 << 16);

/// Exponents (integral powers of `q`) and trinomial superscript of the two
/// terms at summation index `j`.
fn term_data(kind: BosKind, p: i64, a: i64, b: i64, s: i64, j: i64) -> (i64, i64, i64) {
    let pp = p + 1;
    let quad = p * pp * j * j;
    match kind {
        BosKind::B => (quad + j * (pp * a - p * s), (p * j + a) * (pp * j + s), 0),
        BosKind::Btilde => (
            quad + j * (pp * a - p * s),
            quad + j * (pp * a + p * (s - 2)) + a * (s - 1) - b,
            1,
        ),
        BosKind::Bprime => (
            quad + j * (pp * a - p * (b + 1)),
            quad + j * (pp * a + p * (b - 1)) + b * (a - 1),
            1,
        ),
    }
}

/// Contribution of summation index `j`, or `None` when both trinomials vanish.
fn term_at(kind: BosKind, p: i64, a: i64, b: i64, s: i64, l: i64, j: i64) -> Option<QLaurent> {
    let (e1, e2, n) = term_data(kind, p, a, b, s, j);
    let (t1, t2) = (qtrinom(l, 2 * p * j + a - b, n), qtrinom(l, 2 * p * j + a + b, n));
    if t1.is_zero() && t2.is_zero() {
        return None;
    }
    Some(&t1.shift(Exponent::from_int(e1)) - &t2.shift(Exponent::from_int(e2)))
}

/// Walks `j` outward from 0 in both directions, stopping on each side after
/// two consecutive indices with both trinomials zero.
fn alternating_sum(kind: BosKind, p: i64, a: i64, b: i64, s: i64, l: i64) -> QLaurent {
    let mut acc = term_at(kind, p, a, b, s, l, 0).unwrap_or_default();
    for dir in [1, -1] {
        let (mut j, mut empty) = (dir, 0);
        while empty < 2 {
            match term_at(kind, p, a, b, s, l, j) {
                Some(t) => {
                    acc += t;
                    empty = 0;
                }
                None => empty += 1,
            }
            j += dir;
        }
    }
    acc
}

/// The bosonic polynomial; zero for `L < 0`. `s` is ignored for `B'`.
pub fn bose_value(kind: BosKind, p: i64, a: i64, b: i64, s: i64, l: i64) -> QLaurent {
    if l < 0 {
        return QLaurent::zero();
    }
    let s = if kind == BosKind::Bprime { 0 } else { s };
    BOSE.get_or((kind, p, a, b, s, l), || alternating_sum(kind, p, a, b, s, l))
}

/// Validated evaluation.
pub fn bose(kind: BosKind, p: i64, a: i64, b: i64, s: i64, l: i64) -> Result<BosPoly> {
    if p < 4 {
        return Err(Error::InvalidParams(format!("p = {p} violates p >= 4")));
    }
    if l < 0 {
        return Err(Error::InvalidParams(format!("L = {l} violates L >= 0")));
    }
    Ok(BosPoly {
        kind,
        p,
        a,
        b,
        s,
        l,
        value: bose_value(kind, p, a, b, s, l),
    })
}

/// Largest `|j|` that can contribute: `(L + |a| + |b|)/(2p) + 1`.
pub fn j_bound(p: i64, a: i64, b: i64, l: i64) -> i64 {
    (l + a.abs() + b.abs()) / (2 * p) + 1
}

fn qi(e: i64) -> QLaurent {
    QLaurent::q_pow(Exponent::from_int(e))
}

/// Bosonic side of the even identity for `F^{p,0}_{a,b}(L)`.
pub fn even_rhs(p: i64, a: i64, b: i64, l: i64) -> QLaurent {
    let half = half_branch(Side::Even, a, b);
    let (pref, kind, s) = match (b, half) {
        (1, true) => (Exponent::from_quarters(a * (a - 1)), BosKind::B, 1),
        (1, false) => (Exponent::from_quarters((a - 1) * (a - 2)), BosKind::B, 2),
        (_, true) => (prefactor_phi(a, b), BosKind::B, b + 1),
        (_, false) => (prefactor_phi_tilde(a, b), BosKind::Btilde, b + 2),
    };
    bose_value(kind, p, a, b, s, l).shift(pref)
}

/// Bosonic side of the odd identity for `F^{p,1}_{p-a,b}(L)` (plus
/// `δ_{L,0} δ_{a,b}` when `b >= 2`).
pub fn odd_rhs(p: i64, a: i64, b: i64, l: i64) -> QLaurent {
    let half = half_branch(Side::Odd, a, b);
    let (pref, kind, s) = match (b, half) {
        (1, true) => (prefactor_phi(p - a, p - 1), BosKind::B, 1),
        (1, false) => (
            prefactor_phi_tilde(p - a, p - 1) + Exponent::from_int(1 - a),
            BosKind::B,
            2,
        ),
        (_, true) => (
            prefactor_phi(p - a, p - 1) + prefactor_phi(a, b) - Exponent::from_quarters((a - 1) * a),
            BosKind::B,
            b + 1,
        ),
        (_, false) => (
            prefactor_phi_tilde(p - a, p - 1) + prefactor_phi_tilde(a, b)
                - Exponent::from_quarters((a - 1) * (a + 2)),
            BosKind::Btilde,
            b + 2,
        ),
    };
    bose_value(kind, p, a, b, s, l).shift(pref)
}

fn rp(p: i64, a: i64, b: i64, l: i64) -> Params {
    Params::new().with("p", p).with("a", a).with("b", b).with("L", l)
}

/// `(label, b, lhs, rhs)` for the six recurrences at one `(a, L)`.
fn recurrence_cases(p: i64, a: i64, l: i64, mutate: bool) -> Vec<(&'static str, i64, QLaurent, QLaurent)> {
    let bb = |b: i64, l: i64, s: i64| bose_value(BosKind::B, p, a, b, s, l);
    let bt = |b: i64, l: i64, s: i64| bose_value(BosKind::Btilde, p, a, b, s, l);
    let f = &qi(l - 1) - &QLaurent::one();
    let mut out = vec![
        ("B(L,1) at b=1", 1, bb(1, l, 1), &bb(1, l - 1, 1) + &(&qi(l + 1 - a) * &bb(2, l - 1, 3))),
        ("B(L,2) at b=1", 1, bb(1, l, 2), &bb(1, l - 1, 2) + &(&qi(l + 1 - a) * &bt(2, l - 1, 4))),
        (
            "B(L,3) at b=2",
            2,
            bb(2, l, 3),
            &(&bb(2, l - 1, 3) + &(&qi(l + a - 2) * &bb(1, l - 1, 1))) + &(&qi(l - a + 2) * &bt(3, l - 1, 5)),
        ),
        (
            "Btilde(L,4) at b=2",
            2,
            bt(2, l, 4),
            &(&(&qi(l - 1) * &bt(2, l - 1, 4)) + &(&qi(a - 2) * &bb(1, l - 1, 2))) + &bb(3, l - 1, 4),
        ),
    ];
    for b in 2..p {
        let lift = if mutate { QLaurent::one() } else { qi(l - a + b) };
        let rhs = &(&(&bb(b, l - 1, b + 1) + &(&(&qi(l - 1) * &f) * &bb(b, l - 2, b + 1)))
            + &(&lift * &bt(b + 1, l - 1, b + 3)))
            + &(&qi(l - 1) * &bt(b - 1, l - 1, b + 1));
        out.push(("B(L,b+1) general b", b, bb(b, l, b + 1), rhs));
        let rhs = &(&(&bb(b + 1, l - 1, b + 2) + &(&f * &bb(b + 1, l - 2, b + 2)))
            + &(&qi(a - b) * &(&bb(b - 1, l - 1, b) + &(&f * &bb(b - 1, l - 2, b)))))
            + &(&bt(b, l - 1, b + 2) + &(&(&qi(l - 2) * &f) * &bt(b, l - 2, b + 2)));
        out.push(("Btilde(L,b+2) general b", b, bt(b, l, b + 2), rhs));
    }
    out
}

fn recurrences_report(p: i64, a: i64, l_max: i64, mutate: bool) -> VerifyReport {
    let instances = (1..=l_max)
        .into_par_iter()
        .flat_map_iter(|l| {
            recurrence_cases(p, a, l, mutate)
                .into_iter()
                .map(move |(label, b, lhs, rhs)| compare_poly(label, rp(p, a, b, l), &lhs, &rhs))
        })
        .collect();
    VerifyReport::new("bosonic-recurrences", instances)
}

/// The six recurrences in `L` for `1 <= L <= l_max`, all `b`.
pub fn verify_bosonic_recurrences(p: i64, a: i64, l_max: i64) -> Result<VerifyReport> {
    if p < 4 {
        return Err(Error::InvalidParams(format!("p = {p} violates p >= 4")));
    }
    Ok(recurrences_report(p, a, l_max, false))
}

/// Rebuilds `B_{a,1}(L,1)`, `B_{a,1}(L,2)`, `B_{a,b}(L,b+1)` and
/// `B̃_{a,b}(L,b+2)` (`2 <= b <= p-1`) from their `L = 0` values `δ_{a,b}`
/// using only the recurrences, and compares with direct evaluation.
pub fn replay_bosonic_recurrences(p: i64, a: i64, l_max: i64) -> Result<VerifyReport> {
    if p < 4 || l_max < 0 {
        return Err(Error::InvalidParams(format!("need p >= 4 and l_max >= 0, got p = {p}, l_max = {l_max}")));
    }
    let pu = p as usize;
    let zero = QLaurent::zero;
    // x1[L], x2[L]; y[L][b], z[L][b] for b in 0..=p (entries outside 2..p-1 stay zero)
    let mut x1: Vec<QLaurent> = Vec::new();
    let mut x2: Vec<QLaurent> = Vec::new();
    let mut y: Vec<Vec<QLaurent>> = Vec::new();
    let mut z: Vec<Vec<QLaurent>> = Vec::new();
    let d = |u: i64, v: i64| QLaurent::constant((u == v) as i64);
    x1.push(d(a, 1));
    x2.push(d(a, 1));
    y.push((0..=p).map(|b| if (2..p).contains(&b) { d(a, b) } else { zero() }).collect());
    z.push(y[0].clone());
    for l in 1..=l_max {
        let lu = l as usize;
        let f = &qi(l - 1) - &QLaurent::one();
        let get = |v: &Vec<Vec<QLaurent>>, ll: i64, b: usize| -> QLaurent {
            if ll < 0 || b >= pu {
                zero()
            } else {
                v[ll as usize][b].clone()
            }
        };
        let nx1 = &x1[lu - 1] + &(&qi(l + 1 - a) * &get(&y, l - 1, 2));
        let nx2 = &x2[lu - 1] + &(&qi(l + 1 - a) * &get(&z, l - 1, 2));
        let mut ny = vec![zero(); pu + 1];
        let mut nz = vec![zero(); pu + 1];
        ny[2] = &(&get(&y, l - 1, 2) + &(&qi(l + a - 2) * &x1[lu - 1])) + &(&qi(l - a + 2) * &get(&z, l - 1, 3));
        nz[2] = &(&(&qi(l - 1) * &get(&z, l - 1, 2)) + &(&qi(a - 2) * &x2[lu - 1])) + &get(&y, l - 1, 3);
        for b in 3..pu {
            let bi = b as i64;
            ny[b] = &(&(&get(&y, l - 1, b) + &(&(&qi(l - 1) * &f) * &get(&y, l - 2, b)))
                + &(&qi(l - a + bi) * &get(&z, l - 1, b + 1)))
                + &(&qi(l - 1) * &get(&z, l - 1, b - 1));
            nz[b] = &(&(&get(&y, l - 1, b + 1) + &(&f * &get(&y, l - 2, b + 1)))
                + &(&qi(a - bi) * &(&get(&y, l - 1, b - 1) + &(&f * &get(&y, l - 2, b - 1)))))
                + &(&get(&z, l - 1, b) + &(&(&qi(l - 2) * &f) * &get(&z, l - 2, b)));
        }
        x1.push(nx1);
        x2.push(nx2);
        y.push(ny);
        z.push(nz);
    }
    let mut instances = Vec::new();
    for l in 0..=l_max {
        let lu = l as usize;
        let bb = |b: i64, s: i64| bose_value(BosKind::B, p, a, b, s, l);
        let bt = |b: i64, s: i64| bose_value(BosKind::Btilde, p, a, b, s, l);
        instances.push(compare_poly("replayed B(L,1) at b=1", rp(p, a, 1, l), &x1[lu], &bb(1, 1)));
        instances.push(compare_poly("replayed B(L,2) at b=1", rp(p, a, 1, l), &x2[lu], &bb(1, 2)));
        for b in 2..p {
            let bu = b as usize;
            instances.push(compare_poly("replayed B(L,b+1)", rp(p, a, b, l), &y[lu][bu], &bb(b, b + 1)));
            instances.push(compare_poly("replayed Btilde(L,b+2)", rp(p, a, b, l), &z[lu][bu], &bt(b, b + 2)));
        }
    }
    Ok(VerifyReport::new("bosonic-recurrences", instances))
}

fn relation_instances(p: i64, l: i64) -> Vec<Instance> {
    let bb = |a: i64, b: i64, s: i64| bose_value(BosKind::B, p, a, b, s, l);
    let bt = |a: i64, b: i64, s: i64| bose_value(BosKind::Btilde, p, a, b, s, l);
    let bp = |a: i64, b: i64| bose_value(BosKind::Bprime, p, a, b, 0, l);
    let mut out = Vec::new();
    for a in 1..p {
        out.push(compare_poly("reflection of B at b=p-1", rp(p, a, p - 1, l), &bb(a, p - 1, p), &bb(p - a, 1, 1)));
        out.push(compare_poly(
            "reflection of Btilde at b=p-1",
            rp(p, a, p - 1, l),
            &bt(a, p - 1, p + 1),
            &bb(p - a, 1, 2).shift(Exponent::from_int(a - p + 1)),
        ));
        out.push(check("closing at b=p", rp(p, a, p, l), bb(a, p, p + 1).is_zero() && bt(a, p, p + 2).is_zero(), || {
            "B(L,p+1) or Btilde(L,p+2) is nonzero at b = p".into()
        }));
        out.push(compare_poly("B equals Btilde at b=1, s=2", rp(p, a, 1, l), &bb(a, 1, 2), &bt(a, 1, 2)));
        for b in 1..p {
            out.push(compare_poly("duality of B", rp(p, a, b, l), &bb(p - a, p - b, p - b + 1), &bb(a, b, b)));
            out.push(compare_poly(
                "duality of Btilde and Bprime",
                rp(p, a, b, l),
                &bt(p - a, p - b, p - b + 2),
                &bp(a, b).shift(Exponent::from_int(b - a)),
            ));
        }
    }
    for a in 1..=p - 2 {
        for b in 1..p {
            let e = even_rhs(p, a, b, l);
            let o = odd_rhs(p, a, b, l);
            out.push(check("shifted bosonic sides nonnegative", rp(p, a, b, l), e.is_nonnegative() && o.is_nonnegative(), || {
                format!("even side {e}, odd side {o}")
            }));
        }
    }
    out
}

/// Reflections, dualities, closings, `B = B̃` at `(b, s) = (1, 2)`, and
/// nonnegativity of the prefactor-shifted identity sides, for `L <= l_max`.
pub fn verify_bosonic_relations(p: i64, l_max: i64) -> Result<VerifyReport> {
    if p < 4 {
        return Err(Error::InvalidParams(format!("p = {p} violates p >= 4")));
    }
    let instances = (0..=l_max)
        .into_par_iter()
        .flat_map_iter(|l| relation_instances(p, l))
        .collect();
    Ok(VerifyReport::new("bosonic-relations", instances))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_zero_is_delta() {
        for kind in [BosKind::B, BosKind::Btilde, BosKind::Bprime] {
            for a in 1..=4 {
                for b in 1..=4 {
                    for s in [1, 2, b, b + 1, b + 2] {
                        let v = bose(kind, 5, a, b, s, 0).unwrap().value;
                        assert_eq!(v, QLaurent::constant((a == b) as i64), "{kind:?} a={a} b={b} s={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn terms_vanish_beyond_support_bound() {
        for kind in [BosKind::B, BosKind::Btilde, BosKind::Bprime] {
            for p in 4..=6 {
                for l in 0..=12 {
                    for a in 1..p {
                        for b in 1..=p {
                            let jb = j_bound(p, a, b, l);
                            for j in [jb + 1, jb + 2, -jb - 1, -jb - 2] {
                                assert!(term_at(kind, p, a, b, b + 1, l, j).is_none());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn agrees_with_fixed_window_sum() {
        let (p, l) = (5, 9);
        for a in 1..p {
            for b in 1..p {
                let jb = j_bound(p, a, b, l) + 3;
                let window: QLaurent = (-jb..=jb)
                    .filter_map(|j| term_at(BosKind::Btilde, p, a, b, b + 2, l, j))
                    .sum();
                assert_eq!(window, bose_value(BosKind::Btilde, p, a, b, b + 2, l));
            }
        }
    }

    #[test]
    fn recurrences_p4() {
        for a in 1..=2 {
            let r = verify_bosonic_recurrences(4, a, 8).unwrap();
            assert!(r.all_passed(), "{r}");
        }
    }

    #[test]
    fn dropped_lift_factor_is_caught() {
        let r = recurrences_report(4, 1, 6, true);
        assert!(!r.all_passed());
        assert!(r.failures().all(|f| f.equation == "B(L,b+1) general b"));
    }

    #[test]
    fn replay_reproduces_direct_values() {
        for p in 4..=5 {
            for a in 1..=p - 2 {
                let r = replay_bosonic_recurrences(p, a, 7).unwrap();
                assert!(r.all_passed(), "{r}");
            }
        }
    }

    #[test]
    fn relations_p5() {
        let r = verify_bosonic_relations(5, 6).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn rejects_small_p() {
        assert!(bose(BosKind::B, 3, 1, 1, 1, 0).is_err());
        assert!(bose(BosKind::B, 4, 1, 1, 1, -1).is_err());
    }
}
