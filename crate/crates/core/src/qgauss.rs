//! Gaussian polynomials and q-trinomial coefficients.
//!
//! `qbinom(n, m)` is `[n+m; n]`, nonzero only for `n, m >= 0`. The modified
//! binomial `(q^{n+1})_m / (q)_m` extends it to negative `n`. Trinomials
//! `T_n(L, A)` are sums of exact multinomial quotients.

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::memo::Memo;
use crate::qlaurent::{pochhammer, qpoch_poly, series_inverse, Exponent, PochhammerOrder, QLaurent, QSeries};
use crate::report::{check, compare_poly, Instance, Params, VerifyReport};

static QPOCH: Memo<u32, QLaurent> = Memo::new(4096);
static QBINOM: Memo<(i64, i64), QLaurent> = Memo::new(1 << 16);
static MULTINOM: Memo<(i64, i64, i64), QLaurent> = Memo::new(1 << 16);
static QTRINOM: Memo<(i64, i64, i64), QLaurent> = Memo::new(1 << 16);

fn qi(e: i64) -> QLaurent {
    QLaurent::q_pow(Exponent::from_int(e))
}

/// `(q)_k`, cached.
pub fn qpoch(k: u32) -> QLaurent {
    QPOCH.get_or(k, || qpoch_poly(k))
}

/// `(q)_{a+b+c} / ((q)_a (q)_b (q)_c)` by exact division.
fn multinomial(a: i64, b: i64, c: i64) -> QLaurent {
    let mut key = [a, b, c];
    key.sort_unstable();
    MULTINOM.get_or((key[0], key[1], key[2]), || {
        let den = &(&qpoch(a as u32) * &qpoch(b as u32)) * &qpoch(c as u32);
        qpoch((a + b + c) as u32)
            .div_exact(&den)
            .expect("multinomial quotient is a polynomial")
    })
}

/// `[n+m; n]`; zero unless `n, m >= 0`.
pub fn qbinom(n: i64, m: i64) -> QLaurent {
    if n < 0 || m < 0 {
        return QLaurent::zero();
    }
    let key = (n.min(m), n.max(m));
    QBINOM.get_or(key, || {
        let den = &qpoch(n as u32) * &qpoch(m as u32);
        qpoch((n + m) as u32)
            .div_exact(&den)
            .expect("Gaussian binomial is a polynomial")
    })
}

/// `(q^{n+1})_m / (q)_m`, computed by direct exact division; zero for `m < 0`.
pub fn qbinom_modified(n: i64, m: i64) -> QLaurent {
    if m < 0 {
        return QLaurent::zero();
    }
    if n >= 0 {
        return qbinom(n, m);
    }
    let mut num = QLaurent::one();
    for k in 0..m {
        let e = n + 1 + k;
        num = &num * &(&QLaurent::one() - &qi(e));
    }
    num.div_exact(&qpoch(m as u32))
        .expect("(q^{n+1})_m is divisible by (q)_m")
}

/// The modified binomial through its three-branch closed form.
pub fn qbinom_modified_branches(n: i64, m: i64) -> QLaurent {
    if n >= 0 && m >= 0 {
        qbinom(n, m)
    } else if n + m < 0 && m >= 0 {
        let sign = if m % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        // (m+1+2n)m is always even
        qbinom(-n - 1 - m, m)
            .shift(Exponent::from_halves((m + 1 + 2 * n) * m))
            .scale(&sign)
    } else {
        QLaurent::zero()
    }
}

/// The q-trinomial `T_n(L, A)`; zero when `L < 0` or `|A| > L`.
pub fn qtrinom(l: i64, a: i64, n: i64) -> QLaurent {
    if l < 0 || a.abs() > l {
        return QLaurent::zero();
    }
    QTRINOM.get_or((l, a, n), || {
        let mut acc = QLaurent::zero();
        let mut j = 0.max(-a);
        while l - 2 * j - a >= 0 {
            acc += multinomial(j, j + a, l - 2 * j - a).shift(Exponent::from_int(j * (j + a - n)));
            j += 1;
        }
        acc
    })
}

/// Coefficient of `x^{L+A}` in `(1 + x + x^2)^L`.
pub fn classical_trinomial(l: i64, a: i64) -> BigInt {
    if l < 0 || a.abs() > l {
        return BigInt::from(0);
    }
    let mut row: Vec<BigInt> = vec![BigInt::one()];
    for _ in 0..l {
        let mut next = vec![BigInt::from(0); row.len() + 2];
        for (k, c) in row.iter().enumerate() {
            for d in 0..3 {
                next[k + d] += c;
            }
        }
        row = next;
    }
    row[(l + a) as usize].clone()
}

/// `lim_{L→∞} T_n(L, A)` for `n ∈ {0, 1}`: `1/(q)_∞` and `(1 + q^A)/(q)_∞`.
pub fn trinom_limit(a: i64, n: i64, cutoff: Exponent) -> Result<QSeries> {
    let extra = Exponent::from_int((-a).max(0));
    let inv = series_inverse(&pochhammer(PochhammerOrder::Infinite, cutoff + extra)?)?;
    match n {
        0 => Ok(inv.truncate(cutoff)),
        1 => Ok(inv.truncate(cutoff).add(&inv.shift(Exponent::from_int(a)).truncate(cutoff))),
        _ => Err(Error::InvalidParams(format!(
            "trinomial limit is defined for n in {{0, 1}}, got n = {n}"
        ))),
    }
}

fn trinomial_instances(l: i64, a: i64) -> Vec<Instance> {
    let t = qtrinom;
    let one = QLaurent::one;
    let params = || Params::new().with("L", l).with("A", a);
    let mut out = vec![
        compare_poly("T0 symmetry", params(), &t(l, a, 0), &t(l, -a, 0)),
        compare_poly("T1 reflection", params(), &t(l, a, 1), &(&qi(a) * &t(l, -a, 1))),
        compare_poly(
            "T0-T1 difference",
            params(),
            &(&t(l, a, 0) - &(&qi(l - a) * &t(l, a, 1))),
            &(&t(l, a + 1, 0) - &(&qi(l) * &t(l, a + 1, 1))),
        ),
        compare_poly(
            "T1 shift difference",
            params(),
            &(&t(l, a + 1, 1) - &(&qi(1 - a) * &t(l, a - 1, 1))),
            &(&(&qi(a + 1) * &t(l, a + 1, 0)) - &(&qi(1 - a) * &t(l, a - 1, 0))),
        ),
    ];
    for n in -1..=2 {
        let p = params().with("n", n);
        out.push(check(
            "classical specialization",
            p,
            t(l, a, n).eval_at_one() == classical_trinomial(l, a),
            || format!("T_{n}({l},{a}) at q = 1 differs from the trinomial coefficient"),
        ));
    }
    if l < 1 {
        return out;
    }
    let w = &one() - &qi(l);
    let w1 = &qi(l - 1) - &one();
    out.push(compare_poly(
        "T0 recurrence",
        params(),
        &t(l, a, 0),
        &(&(&t(l - 1, a + 1, 0) + &(&qi(l - 1 - a) * &t(l - 1, a, 1))) + &(&qi(l - a) * &t(l - 1, a - 1, 0))),
    ));
    out.push(compare_poly(
        "T1 recurrence",
        params(),
        &t(l, a, 1),
        &(&(&t(l - 1, a - 1, 0) + &(&qi(l - 1) * &t(l - 1, a, 1))) + &(&qi(a) * &t(l - 1, a + 1, 0))),
    ));
    out.push(compare_poly(
        "T0 mirrored recurrence",
        params(),
        &t(l, a, 0),
        &(&(&t(l - 1, a - 1, 0) + &(&qi(l - 1) * &t(l - 1, a, 1))) + &(&qi(l + a) * &t(l - 1, a + 1, 0))),
    ));
    for n in -1..=2 {
        let mut rhs = &(&(&qi(l - a) * &t(l - 1, a - 1, n)) + &(&qi(l + a - n) * &t(l - 1, a + 1, n)))
            + &t(l - 1, a, n);
        rhs += &(&qi(l - 1 - n) * &(&one() - &qi(l - 1))) * &t(l - 2, a, n);
        out.push(compare_poly("Tn three-term recurrence", params().with("n", n), &t(l, a, n), &rhs));
    }
    out.push(compare_poly(
        "T1 from T0",
        params(),
        &t(l, a, 1),
        &(&t(l, a, 0) + &(&(&qi(a) * &w) * &t(l - 1, a + 1, 0))),
    ));
    out.push(compare_poly(
        "T0 from T1",
        params(),
        &t(l, a, 0),
        &(&(&(&qi(l) * &t(l, a, 1)) + &(&w * &t(l - 1, a - 1, 0))) + &(&(&qi(l - 1) * &w) * &t(l - 1, a, 1))),
    ));
    out.push(compare_poly(
        "T0 mixed recurrence",
        params(),
        &t(l, a, 0),
        &(&(&(&(&qi(l - a) * &t(l - 1, a - 1, 1)) + &t(l - 1, a, 0)) + &(&qi(l - 1) * &t(l - 1, a + 1, 1)))
            + &(&(&qi(l - 1) * &w1) * &t(l - 2, a, 0))),
    ));
    let inner = &(&t(l - 2, a - 1, 0) + &(&qi(a) * &t(l - 2, a + 1, 0))) + &(&qi(l - 2) * &t(l - 2, a, 1));
    out.push(compare_poly(
        "T1 mixed recurrence",
        params(),
        &t(l, a, 1),
        &(&(&(&t(l - 1, a - 1, 0) + &t(l - 1, a, 1)) + &(&qi(a) * &t(l - 1, a + 1, 0))) + &(&w1 * &inner)),
    ));
    out.push(compare_poly(
        "T0 lowered",
        params(),
        &t(l, a - 1, 0),
        &(&(&(&qi(l + 1 - a) * &t(l, a - 1, 1)) + &(&w * &t(l - 1, a - 1, 0)))
            + &(&(&qi(l - 1) * &w) * &t(l - 1, a, 1))),
    ));
    out.push(compare_poly(
        "T0 raised",
        params(),
        &t(l, a + 1, 0),
        &(&(&(&qi(l) * &t(l, a + 1, 1)) + &(&w * &t(l - 1, a + 1, 0)))
            + &(&(&qi(l - 1 - a) * &w) * &t(l - 1, a, 1))),
    ));
    out
}

/// Symmetry, recurrence and `q = 1` checks of `T_n(L, A)` for `L <= l_max`
/// and `|A| <= L + 2`.
pub fn verify_trinomial_properties(l_max: i64) -> VerifyReport {
    let pairs: Vec<(i64, i64)> = (0..=l_max)
        .flat_map(|l| (-l - 2..=l + 2).map(move |a| (l, a)))
        .collect();
    let instances = pairs
        .par_iter()
        .flat_map_iter(|&(l, a)| trinomial_instances(l, a))
        .collect();
    VerifyReport::new("trinomial", instances)
}

/// Pascal-type recurrences of the standard binomial for `0 <= n, m <= std_max`
/// (excluding `n = m = 0`), of the modified binomial for `|n| <= mod_max`,
/// `0 <= m <= mod_max`, and agreement of the modified binomial with its
/// closed form on `[-branch_max, branch_max]^2`.
pub fn verify_binomial_recurrences(std_max: i64, mod_max: i64, branch_max: i64) -> VerifyReport {
    let mut instances = Vec::new();
    let pascal = |b: &dyn Fn(i64, i64) -> QLaurent, n: i64, m: i64| {
        (
            &b(n - 1, m) + &(&qi(n) * &b(n, m - 1)),
            &b(n, m - 1) + &(&qi(m) * &b(n - 1, m)),
        )
    };
    for n in 0..=std_max {
        for m in 0..=std_max {
            if n == 0 && m == 0 {
                continue;
            }
            let p = || Params::new().with("n", n).with("m", m);
            let (r1, r2) = pascal(&qbinom, n, m);
            instances.push(compare_poly("binomial first recurrence", p(), &qbinom(n, m), &r1));
            instances.push(compare_poly("binomial second recurrence", p(), &qbinom(n, m), &r2));
        }
    }
    for n in -mod_max..=mod_max {
        for m in 0..=mod_max {
            let p = || Params::new().with("n", n).with("m", m);
            let (r1, r2) = pascal(&qbinom_modified, n, m);
            let lhs = qbinom_modified(n, m);
            instances.push(compare_poly("modified first recurrence", p(), &lhs, &r1));
            instances.push(compare_poly("modified second recurrence", p(), &lhs, &r2));
        }
    }
    for n in -branch_max..=branch_max {
        for m in -branch_max..=branch_max {
            instances.push(compare_poly(
                "modified closed form",
                Params::new().with("n", n).with("m", m),
                &qbinom_modified(n, m),
                &qbinom_modified_branches(n, m),
            ));
        }
    }
    VerifyReport::new("binomial", instances)
}
