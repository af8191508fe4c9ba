//! Structured pass/fail records for identity sweeps.

use std::cmp::Ordering;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::qlaurent::{QLaurent, QSeries};

/// Named integer parameters of one identity instance, in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params(Vec<(&'static str, i64)>);

impl Params {
    pub fn new() -> Self {
        Params(Vec::new())
    }

    pub fn with(mut self, name: &'static str, value: i64) -> Self {
        self.0.push((name, value));
        self
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.0.iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, i64)> + '_ {
        self.0.iter().copied()
    }

    fn sort_key(&self) -> [Option<i64>; 5] {
        ["p", "a", "b", "i", "L"].map(|k| self.get(k))
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (name, v)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{name}={v}")?;
        }
        Ok(())
    }
}

impl Serialize for Params {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// First coefficient at which the two sides disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub exp_quarters: i64,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub params: Params,
    pub equation: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<Mismatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Instance {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn order(&self, other: &Instance) -> Ordering {
        self.params
            .sort_key()
            .cmp(&other.params.sort_key())
            .then_with(|| self.equation.cmp(&other.equation))
            .then_with(|| self.params.0.cmp(&other.params.0))
    }
}

/// Compares two polynomials exactly.
pub fn compare_poly(equation: &str, params: Params, left: &QLaurent, right: &QLaurent) -> Instance {
    let mismatch = left.first_difference(right).map(|(e, l, r)| Mismatch {
        exp_quarters: e.quarters(),
        left: l.to_string(),
        right: r.to_string(),
    });
    Instance {
        params,
        equation: equation.to_string(),
        status: if mismatch.is_none() { Status::Pass } else { Status::Fail },
        mismatch,
        note: None,
    }
}

/// Compares two series up to their common cutoff.
pub fn compare_series(equation: &str, params: Params, left: &QSeries, right: &QSeries) -> Instance {
    let mismatch = left.first_difference(right).map(|(e, l, r)| Mismatch {
        exp_quarters: e.quarters(),
        left: l.to_string(),
        right: r.to_string(),
    });
    Instance {
        params,
        equation: equation.to_string(),
        status: if mismatch.is_none() { Status::Pass } else { Status::Fail },
        mismatch,
        note: None,
    }
}

/// A yes/no check with an optional explanation on failure.
pub fn check(equation: &str, params: Params, ok: bool, note: impl FnOnce() -> String) -> Instance {
    Instance {
        params,
        equation: equation.to_string(),
        status: if ok { Status::Pass } else { Status::Fail },
        mismatch: None,
        note: if ok { None } else { Some(note()) },
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub instances: Vec<Instance>,
    pub totals: Totals,
}

impl VerifyReport {
    /// Sorts instances by `(p, a, b, i, L, equation)` and tallies them.
    pub fn new(suite: impl Into<String>, mut instances: Vec<Instance>) -> Self {
        instances.sort_by(|x, y| x.order(y));
        let failed = instances.iter().filter(|i| !i.passed()).count();
        VerifyReport {
            suite: suite.into(),
            totals: Totals {
                passed: instances.len() - failed,
                failed,
            },
            instances,
        }
    }

    /// Concatenates reports under a new suite name.
    pub fn merge(suite: impl Into<String>, parts: impl IntoIterator<Item = VerifyReport>) -> Self {
        let all = parts.into_iter().flat_map(|r| r.instances).collect();
        VerifyReport::new(suite, all)
    }

    pub fn all_passed(&self) -> bool {
        self.totals.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Instance> {
        self.instances.iter().filter(|i| !i.passed())
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.all_passed() { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "{verdict} {}: {} passed, {} failed",
            self.suite, self.totals.passed, self.totals.failed
        )?;
        for inst in self.failures() {
            write!(f, "  FAIL {} [{}]", inst.equation, inst.params)?;
            if let Some(m) = &inst.mismatch {
                write!(
                    f,
                    " first difference at q^({}/4): left {} right {}",
                    m.exp_quarters, m.left, m.right
                )?;
            }
            if let Some(n) = &inst.note {
                write!(f, " ({n})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlaurent::Exponent;

    #[test]
    fn instances_sorted_by_parameters_then_equation() {
        let one = QLaurent::one();
        let r = VerifyReport::new(
            "s",
            vec![
                compare_poly("x", Params::new().with("p", 5).with("L", 0), &one, &one),
                compare_poly("b", Params::new().with("p", 4).with("L", 2), &one, &one),
                compare_poly("a", Params::new().with("p", 4).with("L", 2), &one, &one),
                compare_poly("a", Params::new().with("p", 4).with("L", 1), &one, &one),
            ],
        );
        let order: Vec<(i64, i64, &str)> = r
            .instances
            .iter()
            .map(|i| (i.params.get("p").unwrap(), i.params.get("L").unwrap(), i.equation.as_str()))
            .collect();
        assert_eq!(order, vec![(4, 1, "a"), (4, 2, "a"), (4, 2, "b"), (5, 0, "x")]);
    }

    #[test]
    fn mismatch_records_first_difference() {
        let l = QLaurent::from_int_coeffs(&[1, 2, 3]);
        let r = QLaurent::from_int_coeffs(&[1, 5, 3]);
        let inst = compare_poly("eq", Params::new(), &l, &r);
        assert_eq!(inst.status, Status::Fail);
        let m = inst.mismatch.unwrap();
        assert_eq!(m.exp_quarters, Exponent::from_int(1).quarters());
        assert_eq!((m.left.as_str(), m.right.as_str()), ("2", "5"));
        let report = VerifyReport::new("s", vec![compare_poly("eq", Params::new(), &l, &r)]);
        assert!(!report.all_passed());
        assert_eq!(report.totals, Totals { passed: 0, failed: 1 });
    }
}
