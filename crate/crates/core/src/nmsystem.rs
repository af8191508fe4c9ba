//! The `(n, m)` constraint system indexing the terms of fermionic sums.
//!
//! Vectors have length `p - 1` and are indexed `0..=p-2`. Half-integral
//! quantities (`Ĩm/2`, `u/2`) are handled on the doubled lattice: every
//! relation below is multiplied through by 2 before it is checked.

use rayon::prelude::*;
use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::report::{check, Instance, Params, VerifyReport};

/// Default slack above `L` for `C0 = m0 + m1` in modified mode.
pub const DEFAULT_MARGIN: i64 = 2;

pub fn delta(x: i64, y: i64) -> i64 {
    (x == y) as i64
}

/// Parity `x mod 2` in `{0, 1}`.
pub fn ptilde(x: i64) -> i64 {
    x.rem_euclid(2)
}

pub fn theta(cond: bool) -> i64 {
    cond as i64
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ModelParams {
    pub p: i64,
    pub a: i64,
    pub b: i64,
    pub i: i64,
    #[serde(rename = "L")]
    pub l: i64,
}

impl ModelParams {
    /// Checks `p >= 4`, `1 <= a <= p-2`, `1 <= b <= p-1`, `i ∈ {0, 1}`, `L >= 0`.
    pub fn new(p: i64, a: i64, b: i64, i: i64, l: i64) -> Result<Self> {
        let bad = |what: String| Err(Error::InvalidParams(what));
        if p < 4 {
            return bad(format!("p = {p} violates p >= 4"));
        }
        if !(1..=p - 2).contains(&a) {
            return bad(format!("a = {a} violates 1 <= a <= p-2 = {}", p - 2));
        }
        if !(1..=p - 1).contains(&b) {
            return bad(format!("b = {b} violates 1 <= b <= p-1 = {}", p - 1));
        }
        if i != 0 && i != 1 {
            return bad(format!("i = {i} violates i ∈ {{0, 1}}"));
        }
        if l < 0 {
            return bad(format!("L = {l} violates L >= 0"));
        }
        Ok(ModelParams { p, a, b, i, l })
    }

    pub fn with_l(self, l: i64) -> Result<Self> {
        ModelParams::new(self.p, self.a, self.b, self.i, l)
    }

    /// Vector length `p - 1`.
    pub fn dim(&self) -> usize {
        (self.p - 1) as usize
    }

    /// Required parity of `m_{p-2}`: `i`, flipped when `b = p-1`.
    pub fn top_parity(&self) -> i64 {
        if self.b == self.p - 1 {
            1 - self.i
        } else {
            self.i
        }
    }

    pub fn report_params(&self) -> Params {
        Params::new()
            .with("p", self.p)
            .with("a", self.a)
            .with("b", self.b)
            .with("i", self.i)
            .with("L", self.l)
    }
}

/// `Ĩ`, `C̃ = 2 - Ĩ` of size `p-1`, and the `A_{p-2}` incidence and Cartan
/// matrices of size `p-2` (indexed `0..p-2` for nodes `1..=p-2`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FermMatrices {
    pub i_tilde: Vec<Vec<i64>>,
    pub c_tilde: Vec<Vec<i64>>,
    pub i_cartanless: Vec<Vec<i64>>,
    pub c_cartan: Vec<Vec<i64>>,
}

impl FermMatrices {
    #[allow(clippy::needless_range_loop)]
    pub fn new(p: i64) -> Self {
        let d = (p - 1) as usize;
        let mut i_tilde = vec![vec![0i64; d]; d];
        for j in 0..d {
            i_tilde[0][j] = -delta(j as i64, 2);
            i_tilde[j][0] = delta(j as i64, 2);
        }
        for r in 1..d {
            for c in 1..d {
                i_tilde[r][c] = delta(r as i64, c as i64 + 1) + delta(r as i64, c as i64 - 1);
            }
        }
        let two_minus = |m: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
            m.iter()
                .enumerate()
                .map(|(r, row)| row.iter().enumerate().map(|(c, x)| 2 * delta(r as i64, c as i64) - x).collect())
                .collect()
        };
        let n = d - 1;
        let i_cartanless: Vec<Vec<i64>> = (0..n)
            .map(|r| (0..n).map(|c| delta(r as i64, c as i64 + 1) + delta(r as i64, c as i64 - 1)).collect())
            .collect();
        FermMatrices {
            c_tilde: two_minus(&i_tilde),
            c_cartan: two_minus(&i_cartanless),
            i_tilde,
            i_cartanless,
        }
    }
}

/// The integer vectors `u^i_{a,b}` and `A^i_{a,b}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UAVectors {
    pub u: Vec<i64>,
    #[serde(rename = "A")]
    pub a_vec: Vec<i64>,
}

impl UAVectors {
    pub fn new(params: &ModelParams) -> Self {
        let ModelParams { p, a, b, i, .. } = *params;
        let d = params.dim();
        let e = |k: i64| -> Vec<i64> { (0..d as i64).map(|j| delta(j, k)).collect() };
        let s = ptilde(a + delta(a, 1) + b + delta(b, 1) + delta(i, 1) * (p - 1));
        let (ea, eb, e1, e0) = (e(a), e(b), e(1), e(0));
        let u = (0..d)
            .map(|k| theta(a > 1) * ea[k] + theta(b > 1) * eb[k] + s * (e1[k] - e0[k]))
            .collect();
        let a_vec = (0..d).map(|k| theta(b > 1) * eb[k] + s * e1[k]).collect();
        UAVectors { u, a_vec }
    }
}

/// Parameters together with their matrices and vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FermSetup {
    pub params: ModelParams,
    pub matrices: FermMatrices,
    pub vectors: UAVectors,
}

impl FermSetup {
    pub fn new(params: ModelParams) -> Self {
        FermSetup {
            matrices: FermMatrices::new(params.p),
            vectors: UAVectors::new(&params),
            params,
        }
    }
}

/// Validates parameters and builds the matrices and vectors.
pub fn build_params(p: i64, a: i64, b: i64, i: i64, l: i64) -> Result<FermSetup> {
    Ok(FermSetup::new(ModelParams::new(p, a, b, i, l)?))
}

/// One solution; serializes as `[n, m]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NMSolution {
    pub n: Vec<i64>,
    pub m: Vec<i64>,
}

impl Serialize for NMSolution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&self.n)?;
        t.serialize_element(&self.m)?;
        t.end()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Standard,
    Modified,
}

/// `2(n + m) = Ĩm + 2L e0 + u` row by row, plus the parity of `m_{p-2}`.
pub fn satisfies_system(setup: &FermSetup, sol: &NMSolution) -> bool {
    let d = setup.params.dim();
    if sol.n.len() != d || sol.m.len() != d {
        return false;
    }
    let it = &setup.matrices.i_tilde;
    let u = &setup.vectors.u;
    let rows_ok = (0..d).all(|j| {
        let im: i64 = (0..d).map(|k| it[j][k] * sol.m[k]).sum();
        2 * (sol.n[j] + sol.m[j]) == im + 2 * setup.params.l * delta(j as i64, 0) + u[j]
    });
    rows_ok && ptilde(sol.m[d - 1]) == setup.params.top_parity()
}

/// Sign and range conditions of the given mode (`C0` cap not included).
fn admissible(sol: &NMSolution, mode: Mode) -> bool {
    if sol.m.iter().any(|&x| x < 0) || sol.n[1..].iter().any(|&x| x < 0) {
        return false;
    }
    match mode {
        Mode::Standard => sol.n[0] >= 0,
        // a nonzero modified binomial at negative n0 needs n0 + m0 < 0
        Mode::Modified => sol.n[0] >= 0 || sol.n[0] + sol.m[0] < 0,
    }
}

/// All solutions, sorted. Modified mode uses [`DEFAULT_MARGIN`].
pub fn enumerate(setup: &FermSetup, mode: Mode) -> Vec<NMSolution> {
    match mode {
        Mode::Standard => enumerate_inner(setup, None),
        Mode::Modified => enumerate_modified_with_margin(setup, DEFAULT_MARGIN),
    }
}

/// Modified-mode solutions with `m0 + m1 <= L + margin`.
pub fn enumerate_modified_with_margin(setup: &FermSetup, margin: i64) -> Vec<NMSolution> {
    enumerate_inner(setup, Some(margin))
}

/// Free variables are `n_2..n_{p-2}` and `m_{p-2}`, bounded through the
/// weighted sum `W = Σ_{j=1}^{p-3} 2j n_{j+1} + (p-2) m_{p-2}`, which equals
/// `L + U - n0 - n1` (standard) or `U + m0 + m1` (modified), where
/// `U = Σ_{j=1}^{p-3} j u_{j+1}`. The remaining entries are then determined.
fn enumerate_inner(setup: &FermSetup, margin: Option<i64>) -> Vec<NMSolution> {
    let params = &setup.params;
    let (p, l) = (params.p, params.l);
    let u = &setup.vectors.u;
    let d = params.dim();
    let top = d - 1;
    let big_u: i64 = (1..=p - 3).map(|j| j * u[(j + 1) as usize]).sum();
    let bound = l + big_u + margin.unwrap_or(0);
    let mode = if margin.is_some() { Mode::Modified } else { Mode::Standard };

    let mut out = Vec::new();
    let mut n = vec![0i64; d];
    let mut m = vec![0i64; d];
    // weights of n_2..n_{p-2}
    let weights: Vec<i64> = (2..=top).map(|j| 2 * (j as i64 - 1)).collect();

    fn walk(
        k: usize,
        budget: i64,
        weights: &[i64],
        n: &mut Vec<i64>,
        visit: &mut dyn FnMut(&[i64], i64),
    ) {
        if k == weights.len() {
            visit(&n[2..], budget);
            return;
        }
        let mut v = 0;
        while v * weights[k] <= budget {
            n[k + 2] = v;
            walk(k + 1, budget - v * weights[k], weights, n, visit);
            v += 1;
        }
        n[k + 2] = 0;
    }

    let mut visit = |free_n: &[i64], budget: i64| {
        // free_n holds n_2..n_{p-2}
        let mut nv = vec![0i64; d];
        nv[2..].copy_from_slice(free_n);
        let dn = |j: usize, nv: &[i64]| 2 * nv[j] - u[j];
        let mut mt = params.top_parity();
        while mt * (p - 2) <= budget {
            m.iter_mut().for_each(|x| *x = 0);
            m[top] = mt;
            let mut ok = true;
            for k in (2..top).rev() {
                let s: i64 = (1..=top - k).map(|j| j as i64 * dn(k + j, &nv)).sum();
                m[k] = s + (p - 1 - k as i64) * mt;
                if m[k] < 0 {
                    ok = false;
                    break;
                }
            }
            let m2 = m[2];
            if ok && (m2 + u[1]) % 2 == 0 && (u[0] - m2) % 2 == 0 {
                let half = (m2 + u[1]) / 2;
                for n1 in 0..=half {
                    nv[1] = n1;
                    let twice_m0: i64 =
                        (1..=top).map(|j| j as i64 * dn(j, &nv)).sum::<i64>() + (p - 1) * mt;
                    if twice_m0 < 0 || twice_m0 % 2 != 0 {
                        continue;
                    }
                    m[0] = twice_m0 / 2;
                    m[1] = half - n1;
                    nv[0] = l + (u[0] - m2) / 2 - m[0];
                    if let Some(mg) = margin {
                        if m[0] + m[1] > l + mg {
                            continue;
                        }
                    }
                    let sol = NMSolution { n: nv.clone(), m: m.clone() };
                    if admissible(&sol, mode) && satisfies_system(setup, &sol) {
                        out.push(sol);
                    }
                }
            }
            mt += 2;
        }
    };
    walk(0, bound, &weights, &mut n, &mut visit);
    out.sort();
    out.dedup();
    out
}

/// Brute force over `0 <= m_j <= 2L + p`, standard mode. Test oracle only.
pub fn naive_box_search(setup: &FermSetup) -> Vec<NMSolution> {
    let params = &setup.params;
    let d = params.dim();
    let hi = 2 * params.l + params.p;
    let it = &setup.matrices.i_tilde;
    let u = &setup.vectors.u;
    let mut out = Vec::new();
    let mut m = vec![0i64; d];
    loop {
        let mut n = Vec::with_capacity(d);
        for j in 0..d {
            let rhs: i64 = (0..d).map(|k| it[j][k] * m[k]).sum::<i64>()
                + 2 * params.l * delta(j as i64, 0)
                + u[j];
            if rhs % 2 != 0 {
                break;
            }
            n.push(rhs / 2 - m[j]);
        }
        if n.len() == d && n.iter().all(|&x| x >= 0) && ptilde(m[d - 1]) == params.top_parity() {
            out.push(NMSolution { n, m: m.clone() });
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == d {
                out.sort();
                return out;
            }
            m[k] += 1;
            if m[k] <= hi {
                break;
            }
            m[k] = 0;
            k += 1;
        }
    }
}

/// The five linear consequences of the system, each on the doubled lattice.
pub fn check_consequences(setup: &FermSetup, sol: &NMSolution) -> bool {
    let ModelParams { p, l, .. } = setup.params;
    let u = &setup.vectors.u;
    let (n, m) = (&sol.n, &sol.m);
    let top = (p - 2) as usize;
    let dn = |j: usize| 2 * n[j] - u[j];
    let mt = m[top];

    let by_length = 2 * l
        == 2 * n[0] + 2 * n[1] + (1..top).map(|j| 2 * j as i64 * dn(j + 1)).sum::<i64>() + 2 * (p - 2) * mt;
    let by_counts = l == n[0] + n[1] + m[0] + m[1];
    let by_m2 = 2 * l == 2 * n[0] + 2 * n[1] + 2 * m[2] + 2 * (2..=top).map(dn).sum::<i64>() + 2 * mt;
    let by_m0 = 2 * m[0] == (1..=top).map(|j| j as i64 * dn(j)).sum::<i64>() + (p - 1) * mt;
    let by_tail = (2..=top).all(|k| {
        m[k] == (1..=top - k).map(|j| j as i64 * dn(k + j)).sum::<i64>() + (p - 1 - k as i64) * mt
    });
    by_length && by_counts && by_m2 && by_m0 && by_tail
}

/// The negative-`n0` solution at `L = 0`, `i = 1`, `a = p - b`, for
/// `2 <= b <= p-2`: `n0 = -n1 = -1`, all other `n` and `m0, m1` zero.
pub fn negative_n0_solution(p: i64, b: i64) -> Result<(ModelParams, NMSolution)> {
    if p < 4 || !(2..=p - 2).contains(&b) {
        return Err(Error::InvalidParams(format!(
            "needs p >= 4 and 2 <= b <= p-2, got p = {p}, b = {b}"
        )));
    }
    let params = ModelParams::new(p, p - b, b, 1, 0)?;
    let d = params.dim();
    let mut n = vec![0i64; d];
    n[0] = -1;
    n[1] = 1;
    let (lo, hi) = (b.min(p - b), b.max(p - b));
    let mut m = vec![0i64; d];
    for k in 2..=p - 2 {
        m[k as usize] = if k <= lo {
            k - 1
        } else if k >= hi {
            p - 1 - k
        } else {
            lo - 1
        };
    }
    Ok((params, NMSolution { n, m }))
}

/// Every `(a, b, i)` for one `p`.
pub fn all_triples(p: i64) -> Vec<(i64, i64, i64)> {
    let mut v = Vec::new();
    for a in 1..=p - 2 {
        for b in 1..=p - 1 {
            for i in 0..=1 {
                v.push((a, b, i));
            }
        }
    }
    v
}

fn oracle_instances(params: ModelParams) -> Vec<Instance> {
    let setup = FermSetup::new(params);
    let fast = enumerate(&setup, Mode::Standard);
    let slow = naive_box_search(&setup);
    let rp = || params.report_params();
    let mut out = vec![check("enumeration matches box search", rp(), fast == slow, || {
        format!("pruned enumeration found {}, box search found {}", fast.len(), slow.len())
    })];
    let bad = fast.iter().filter(|s| !check_consequences(&setup, s)).count();
    out.push(check("linear consequences", rp(), bad == 0, || {
        format!("{bad} solutions violate a consequence")
    }));
    out
}

/// Pruned enumeration against the box-search oracle for all `(a, b, i)` and
/// `L <= l_max`.
pub fn verify_nm_oracle(p: i64, l_max: i64) -> Result<VerifyReport> {
    let mut cases = Vec::new();
    for (a, b, i) in all_triples(p) {
        for l in 0..=l_max {
            cases.push(ModelParams::new(p, a, b, i, l)?);
        }
    }
    let instances = cases.into_par_iter().flat_map_iter(oracle_instances).collect();
    Ok(VerifyReport::new("nm-oracle", instances))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(p: i64, a: i64, b: i64, i: i64, l: i64) -> FermSetup {
        build_params(p, a, b, i, l).unwrap()
    }

    #[test]
    fn i_tilde_for_p4() {
        let m = FermMatrices::new(4);
        assert_eq!(m.i_tilde, vec![vec![0, 0, -1], vec![0, 0, 1], vec![1, 1, 0]]);
        assert_eq!(m.c_tilde, vec![vec![2, 0, 1], vec![0, 2, -1], vec![-1, -1, 2]]);
        assert_eq!(m.i_cartanless, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(m.c_cartan, vec![vec![2, -1], vec![-1, 2]]);
    }

    #[test]
    fn u_and_a_vectors() {
        let v = UAVectors::new(&ModelParams::new(5, 1, 1, 0, 0).unwrap());
        assert_eq!(v.u, vec![0; 4]);
        assert_eq!(v.a_vec, vec![0; 4]);
        // p=5, a=2, b=3, i=0: parity of 2+3 is odd
        let v = UAVectors::new(&ModelParams::new(5, 2, 3, 0, 0).unwrap());
        assert_eq!(v.u, vec![-1, 1, 1, 1]);
        assert_eq!(v.a_vec, vec![0, 1, 0, 1]);
    }

    #[test]
    fn rejects_out_of_range() {
        for (p, a, b, i, l, word) in [
            (3, 1, 1, 0, 0, "p"),
            (5, 4, 1, 0, 0, "a"),
            (5, 1, 5, 0, 0, "b"),
            (5, 1, 1, 2, 0, "i"),
            (5, 1, 1, 0, -1, "L"),
        ] {
            let msg = ModelParams::new(p, a, b, i, l).unwrap_err().to_string();
            assert!(msg.contains(&format!("{word} = ")), "{msg}");
        }
    }

    #[test]
    fn l_zero_has_single_solution_iff_a_equals_b() {
        for p in 4..=6 {
            for a in 1..=p - 2 {
                for b in 1..=p - 1 {
                    let sols = enumerate(&setup(p, a, b, 0, 0), Mode::Standard);
                    if a == b {
                        let mut n = vec![0; (p - 1) as usize];
                        // u = 2 e_a for a >= 2 and u = 0 for a = 1
                        n[a as usize] = theta(a > 1);
                        assert_eq!(sols, vec![NMSolution { n, m: vec![0; (p - 1) as usize] }]);
                    } else {
                        assert!(sols.is_empty(), "p={p} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn matches_box_search_small() {
        let r = verify_nm_oracle(4, 4).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn perturbed_solution_breaks_consequences() {
        let s = setup(4, 1, 1, 0, 3);
        let sol = enumerate(&s, Mode::Standard).into_iter().next().unwrap();
        assert!(check_consequences(&s, &sol));
        let mut bad = sol.clone();
        bad.m[0] += 1;
        assert!(!check_consequences(&s, &bad));
    }

    #[test]
    fn negative_n0_solution_is_enumerated() {
        for p in 4..=7 {
            for b in 2..=p - 2 {
                let (params, sol) = negative_n0_solution(p, b).unwrap();
                let s = FermSetup::new(params);
                assert!(satisfies_system(&s, &sol), "p={p} b={b}");
                assert!(check_consequences(&s, &sol));
                assert!(enumerate(&s, Mode::Modified).contains(&sol));
                assert!(!enumerate(&s, Mode::Standard).contains(&sol));
            }
        }
        assert!(negative_n0_solution(5, 4).is_err());
    }

    #[test]
    fn modified_contains_standard() {
        for (a, b, i) in all_triples(5) {
            for l in 0..=3 {
                let s = setup(5, a, b, i, l);
                let modified = enumerate(&s, Mode::Modified);
                for sol in enumerate(&s, Mode::Standard) {
                    assert!(modified.contains(&sol));
                }
                assert!(modified.iter().all(|x| check_consequences(&s, x)));
            }
        }
    }

    #[test]
    fn serializes_as_pair() {
        let sol = NMSolution { n: vec![1, 0], m: vec![0, 2] };
        assert_eq!(serde_json::to_string(&sol).unwrap(), "[[1,0],[0,2]]");
    }
}
