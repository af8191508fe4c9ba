//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails. All comparisons are exact.

use std::process::ExitCode;
use std::time::Instant;

use qident::bosonic::{replay_bosonic_recurrences, verify_bosonic_recurrences, verify_bosonic_relations};
use qident::characters::{
    verify_character_identities, verify_headline_finitized, verify_identities, verify_limit_paths,
    DEFAULT_L_CAP,
};
use qident::fermionic::{
    verify_alternating_sum, verify_even_recurrences, verify_modified_relation, verify_odd_recurrences,
};
use qident::nmsystem::verify_nm_oracle;
use qident::qgauss::{verify_binomial_recurrences, verify_trinomial_properties};
use qident::{Exponent, Result, VerifyReport};

const IDENTITY_P: [i64; 3] = [4, 5, 6];
const IDENTITY_L_MAX: i64 = 12;
const HEADLINE_P: [i64; 4] = [4, 5, 6, 7];
const HEADLINE_L_MAX: i64 = 12;
const TRINOMIAL_L_MAX: i64 = 20;
const BOSONIC_L_MAX: i64 = 12;
const FERMIONIC_P: [i64; 2] = [4, 5];
const FERMIONIC_L_MAX: i64 = 10;
const BINOMIAL_STD_MAX: i64 = 10;
const MODIFIED_PASCAL_MAX: i64 = 8;
const MODIFIED_BRANCH_MAX: i64 = 10;
const MODIFIED_RELATION_L_MAX: i64 = 3;
const ALTERNATING_MAX: i64 = 10;
const CHARACTER_CUTOFF: i64 = 20;
const ORACLE_P: [i64; 2] = [4, 5];
const ORACLE_L_MAX: i64 = 8;

fn per_p(suite: &str, ps: &[i64], f: impl Fn(i64) -> Result<VerifyReport>) -> Result<VerifyReport> {
    let parts = ps.iter().map(|&p| f(p)).collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport::merge(suite, parts))
}

fn even_identities() -> Result<VerifyReport> {
    per_p("even-identities", &IDENTITY_P, |p| verify_identities(p, 0, IDENTITY_L_MAX))
}

fn odd_identities() -> Result<VerifyReport> {
    per_p("odd-identities", &IDENTITY_P, |p| verify_identities(p, 1, IDENTITY_L_MAX))
}

fn headline() -> Result<VerifyReport> {
    per_p("headline", &HEADLINE_P, |p| verify_headline_finitized(p, HEADLINE_L_MAX))
}

fn trinomials() -> Result<VerifyReport> {
    Ok(verify_trinomial_properties(TRINOMIAL_L_MAX))
}

fn bosonic() -> Result<VerifyReport> {
    per_p("bosonic", &IDENTITY_P, |p| {
        let mut parts = vec![verify_bosonic_relations(p, BOSONIC_L_MAX)?];
        for a in 1..=p - 2 {
            parts.push(verify_bosonic_recurrences(p, a, BOSONIC_L_MAX)?);
            parts.push(replay_bosonic_recurrences(p, a, BOSONIC_L_MAX)?);
        }
        Ok(VerifyReport::merge("bosonic", parts))
    })
}

fn fermionic() -> Result<VerifyReport> {
    per_p("fermionic-recurrences", &FERMIONIC_P, |p| {
        let mut parts = Vec::new();
        for a in 1..=p - 2 {
            parts.push(verify_even_recurrences(p, a, FERMIONIC_L_MAX)?);
        }
        for a in 2..=p - 2 {
            parts.push(verify_odd_recurrences(p, a, FERMIONIC_L_MAX)?);
        }
        Ok(VerifyReport::merge("fermionic-recurrences", parts))
    })
}

fn modified_binomials() -> Result<VerifyReport> {
    let mut parts = vec![verify_binomial_recurrences(
        BINOMIAL_STD_MAX,
        MODIFIED_PASCAL_MAX,
        MODIFIED_BRANCH_MAX,
    )];
    for p in IDENTITY_P {
        parts.push(verify_modified_relation(p, MODIFIED_RELATION_L_MAX)?);
    }
    Ok(VerifyReport::merge("modified-binomials", parts))
}

fn alternating_sum() -> Result<VerifyReport> {
    verify_alternating_sum(ALTERNATING_MAX, &IDENTITY_P)
}

fn characters() -> Result<VerifyReport> {
    let cutoff = Exponent::from_int(CHARACTER_CUTOFF);
    per_p("character-identities", &IDENTITY_P, |p| {
        Ok(VerifyReport::merge(
            "character-identities",
            [
                verify_character_identities(p, cutoff)?,
                verify_limit_paths(p, cutoff, DEFAULT_L_CAP)?,
            ],
        ))
    })
}

fn oracle() -> Result<VerifyReport> {
    per_p("nm-oracle", &ORACLE_P, |p| verify_nm_oracle(p, ORACLE_L_MAX))
}

type Criterion = (&'static str, fn() -> Result<VerifyReport>);

const CRITERIA: [Criterion; 10] = [
    ("even polynomial identities, p 4..6, L <= 12", even_identities),
    ("odd polynomial identities with L=0 correction, p 4..6, L <= 12", odd_identities),
    ("headline polynomial identity, p 4..7, L <= 12", headline),
    ("trinomial properties, L <= 20, n in -1..2", trinomials),
    ("bosonic recurrences, relations and replay, p 4..6, L <= 12", bosonic),
    ("fermionic recurrences, p 4..5, L <= 10", fermionic),
    ("modified binomial layer and modified relation", modified_binomials),
    ("alternating sum and negative n0 solution, ranges <= 10", alternating_sum),
    ("character identities and limit paths, p 4..6, to q^20", characters),
    ("(n,m) enumeration against box search, p 4..5, L <= 8", oracle),
];

fn main() -> ExitCode {
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = false;
    for (k, (name, run)) in CRITERIA.iter().enumerate() {
        let id = k + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let secs = || start.elapsed().as_secs_f64();
        match run() {
            Ok(r) if r.all_passed() => {
                println!("PASS {id:>2} {name} ({} instances, {:.1}s)", r.totals.passed, secs());
            }
            Ok(r) => {
                failed = true;
                println!("FAIL {id:>2} {name} ({:.1}s)", secs());
                print!("{r}");
            }
            Err(e) => {
                failed = true;
                println!("FAIL {id:>2} {name}: {e}");
            }
        }
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
