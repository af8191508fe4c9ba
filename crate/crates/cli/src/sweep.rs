//! Sweep configuration and suite dispatch for `verify`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::ValueEnum;
use serde::Deserialize;

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
use qident::{Exponent, VerifyReport};

/// The modified relation sums over unbounded `C0`; its sweep is capped here.
pub const MODIFIED_RELATION_L_CAP: i64 = 3;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    TrinomialProperties,
    BinomialRecurrences,
    NmOracle,
    EvenIdentities,
    OddIdentities,
    FermionicRecurrences,
    BosonicRecurrences,
    BosonicRelations,
    CharacterIdentities,
    AppendixA,
    All,
}

impl Suite {
    const EACH: [Suite; 10] = [
        Suite::TrinomialProperties,
        Suite::BinomialRecurrences,
        Suite::NmOracle,
        Suite::EvenIdentities,
        Suite::OddIdentities,
        Suite::FermionicRecurrences,
        Suite::BosonicRecurrences,
        Suite::BosonicRelations,
        Suite::CharacterIdentities,
        Suite::AppendixA,
    ];

    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::EACH.to_vec(),
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::TrinomialProperties => "trinomial-properties",
            Suite::BinomialRecurrences => "binomial-recurrences",
            Suite::NmOracle => "nm-oracle",
            Suite::EvenIdentities => "even-identities",
            Suite::OddIdentities => "odd-identities",
            Suite::FermionicRecurrences => "fermionic-recurrences",
            Suite::BosonicRecurrences => "bosonic-recurrences",
            Suite::BosonicRelations => "bosonic-relations",
            Suite::CharacterIdentities => "character-identities",
            Suite::AppendixA => "appendix-a",
            Suite::All => "all",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Inclusive range of `p`, written `4..6`, `4..=6` or `5`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PRange {
    pub lo: i64,
    pub hi: i64,
}

impl FromStr for PRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("bad p range {s:?}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo < 4 {
            return Err(format!("p range {s:?} violates p >= 4"));
        }
        if lo > hi {
            return Err(format!("p range {s:?} is empty"));
        }
        Ok(PRange { lo, hi })
    }
}

impl<'de> Deserialize<'de> for PRange {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for PRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

/// Optional settings read from a TOML file; every key mirrors a flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub suite: Option<Suite>,
    pub p: Option<PRange>,
    pub l_max: Option<i64>,
    pub cutoff: Option<i64>,
    pub format: Option<Format>,
    pub jobs: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub suite: Suite,
    pub p: PRange,
    pub l_max: i64,
    pub cutoff: i64,
    pub format: Format,
    pub jobs: Option<usize>,
}

impl SweepConfig {
    pub const DEFAULT_P: PRange = PRange { lo: 4, hi: 6 };
    pub const DEFAULT_L_MAX: i64 = 8;
    pub const DEFAULT_CUTOFF: i64 = 20;

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.l_max < 0 {
            bail!("l-max = {} violates l-max >= 0", self.l_max);
        }
        if self.cutoff < 0 {
            bail!("cutoff = {} violates cutoff >= 0", self.cutoff);
        }
        if self.jobs == Some(0) {
            bail!("jobs must be positive");
        }
        Ok(())
    }

    fn ps(&self) -> Vec<i64> {
        (self.p.lo..=self.p.hi).collect()
    }
}

fn per_p(
    suite: Suite,
    ps: &[i64],
    f: impl Fn(i64) -> qident::Result<Vec<VerifyReport>>,
) -> qident::Result<VerifyReport> {
    let mut parts = Vec::new();
    for &p in ps {
        parts.extend(f(p)?);
    }
    Ok(VerifyReport::merge(suite.name(), parts))
}

/// Runs one concrete suite over the configured sweep.
pub fn run_suite(suite: Suite, cfg: &SweepConfig) -> qident::Result<VerifyReport> {
    let ps = cfg.ps();
    let l = cfg.l_max;
    let cutoff = Exponent::from_int(cfg.cutoff);
    match suite {
        Suite::TrinomialProperties => Ok(VerifyReport::merge(suite.name(), [verify_trinomial_properties(l)])),
        Suite::BinomialRecurrences => per_p(suite, &ps, |p| {
            Ok(vec![verify_modified_relation(p, l.min(MODIFIED_RELATION_L_CAP))?])
        })
        .map(|r| VerifyReport::merge(suite.name(), [r, verify_binomial_recurrences(l, l, l)])),
        Suite::NmOracle => per_p(suite, &ps, |p| Ok(vec![verify_nm_oracle(p, l)?])),
        Suite::EvenIdentities => per_p(suite, &ps, |p| {
            Ok(vec![verify_identities(p, 0, l)?, verify_headline_finitized(p, l)?])
        }),
        Suite::OddIdentities => per_p(suite, &ps, |p| Ok(vec![verify_identities(p, 1, l)?])),
        Suite::FermionicRecurrences => per_p(suite, &ps, |p| {
            let mut out = Vec::new();
            for a in 1..=p - 2 {
                out.push(verify_even_recurrences(p, a, l)?);
            }
            for a in 2..=p - 2 {
                out.push(verify_odd_recurrences(p, a, l)?);
            }
            Ok(out)
        }),
        Suite::BosonicRecurrences => per_p(suite, &ps, |p| {
            let mut out = Vec::new();
            for a in 1..=p - 2 {
                out.push(verify_bosonic_recurrences(p, a, l)?);
                out.push(replay_bosonic_recurrences(p, a, l)?);
            }
            Ok(out)
        }),
        Suite::BosonicRelations => per_p(suite, &ps, |p| Ok(vec![verify_bosonic_relations(p, l)?])),
        Suite::CharacterIdentities => per_p(suite, &ps, |p| {
            Ok(vec![
                verify_character_identities(p, cutoff)?,
                verify_limit_paths(p, cutoff, DEFAULT_L_CAP)?,
            ])
        }),
        Suite::AppendixA => verify_alternating_sum(l, &ps).map(|r| VerifyReport::merge(suite.name(), [r])),
        Suite::All => unreachable!("expanded before dispatch"),
    }
}
