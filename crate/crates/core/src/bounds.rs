//! Seed bounds on Hilbert numbers and the replication arithmetic built on
//! them.
//!
//! A degree-`n` field with `k` hyperbolic cycles replicates through `T_m` to a
//! degree-`(n+1)m - 1` field with `m^2 k` cycles, so every factorization
//! `N + 1 = (n + 1) m` turns a seed bound at `n` into one at `N`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable naming a JSON file that replaces the built-in seeds.
pub const SEED_TABLE_ENV: &str = "CYCLEREP_SEED_TABLE";

const BUILTIN_SEEDS: &str = include_str!("../data/seeds.json");
const BUILTIN_PUB: &str = include_str!("../data/table1_pub.json");

/// Degrees shown in the published-versus-replicated comparison.
pub const TABLE_DEGREES: [u32; 18] = [
    11, 13, 14, 15, 17, 19, 20, 21, 23, 24, 25, 26, 27, 29, 31, 35, 39, 43,
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub n: u32,
    pub value: u64,
    pub source: String,
}

/// Lower bounds `H(n) >= value` used as replication inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedTable {
    entries: BTreeMap<u32, (u64, String)>,
}

impl SeedTable {
    pub fn from_records(records: Vec<SeedRecord>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for r in records {
            if r.value == 0 {
                return Err(Error::InvalidParameter(format!(
                    "seed value for n = {} must be positive",
                    r.n
                )));
            }
            if r.source.trim().is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "seed for n = {} has no source",
                    r.n
                )));
            }
            if entries.insert(r.n, (r.value, r.source)).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "duplicate seed for n = {}",
                    r.n
                )));
            }
        }
        Ok(Self { entries })
    }

    /// Parses `[{"n": .., "value": .., "source": ..}, ..]`.
    pub fn from_json(text: &str) -> Result<Self> {
        let records: Vec<SeedRecord> =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_records(records)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read seed table {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// The file named by `CYCLEREP_SEED_TABLE` if set, else the built-in table.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(SEED_TABLE_ENV) {
            Some(p) if !p.is_empty() => Self::from_path(Path::new(&p)),
            _ => Ok(builtin_seed_table()),
        }
    }

    pub fn lookup(&self, n: u32) -> Result<(u64, &str)> {
        self.entries
            .get(&n)
            .map(|(v, s)| (*v, s.as_str()))
            .ok_or(Error::MissingSeed(n))
    }

    pub fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.keys().copied()
    }

    pub fn records(&self) -> Vec<SeedRecord> {
        self.entries
            .iter()
            .map(|(&n, (value, source))| SeedRecord {
                n,
                value: *value,
                source: source.clone(),
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.records()).expect("seed records always serialize")
    }
}

pub fn builtin_seed_table() -> SeedTable {
    SeedTable::from_json(BUILTIN_SEEDS).expect("embedded seed table is valid")
}

/// A lower bound `H(N) >= value`, with the `(n, m)` replication that gives
/// it when there is one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub target_degree: u32,
    pub value: u64,
    pub witness: Option<(u32, u32)>,
    pub source: String,
    /// The seed value `H(n) >= seed` behind a witnessed entry.
    pub seed_value: Option<u64>,
}

impl BoundEntry {
    /// `H(29) ≥ 9·H(9) ≥ 9·120 = 1080`, or `H(N) ≥ value` without a witness.
    pub fn chain(&self) -> String {
        let n_target = self.target_degree;
        match (self.witness, self.seed_value) {
            (Some((n, m)), Some(seed)) => {
                let m2 = u64::from(m) * u64::from(m);
                format!("H({n_target}) ≥ {m2}·H({n}) ≥ {m2}·{seed} = {}", self.value)
            }
            _ => format!("H({n_target}) ≥ {}", self.value),
        }
    }
}

impl fmt::Display for BoundEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.chain())
    }
}

/// `H((n+1)m - 1) >= m^2 seed(n)`.
pub fn replication_bound(n: u32, m: u32, seeds: &SeedTable) -> Result<BoundEntry> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "replication factor must be >= 2, got {m}"
        )));
    }
    let (seed, source) = seeds.lookup(n)?;
    let overflow = || Error::InvalidParameter(format!("bound for n = {n}, m = {m} overflows"));
    let target = (n.checked_add(1))
        .and_then(|k| k.checked_mul(m))
        .map(|k| k - 1)
        .ok_or_else(overflow)?;
    let value = u64::from(m)
        .checked_mul(u64::from(m))
        .and_then(|m2| m2.checked_mul(seed))
        .ok_or_else(overflow)?;
    Ok(BoundEntry {
        target_degree: target,
        value,
        witness: Some((n, m)),
        source: source.to_string(),
        seed_value: Some(seed),
    })
}

/// Best one-step replication bound for degree `N`: the largest value over
/// all `N + 1 = (n + 1) m` with `m >= 2` and `n` seeded, smallest `m` on ties.
pub fn best_cheb_bound(target: u32, seeds: &SeedTable) -> Result<BoundEntry> {
    if target < 3 {
        return Err(Error::InvalidParameter(format!(
            "target degree must be >= 3, got {target}"
        )));
    }
    let total = u64::from(target) + 1;
    let mut best: Option<BoundEntry> = None;
    for m in 2..=total {
        let (q, r) = total.div_rem(&m);
        if r != 0 || q < 2 {
            continue;
        }
        let n = (q - 1) as u32;
        if seeds.lookup(n).is_err() {
            continue;
        }
        let entry = replication_bound(n, m as u32, seeds)?;
        if best.as_ref().is_none_or(|b| entry.value > b.value) {
            best = Some(entry);
        }
    }
    best.ok_or(Error::NoWitness { target })
}

/// A published bound `L_pub(N)` with its citation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PubValue {
    pub n: u32,
    pub value: u64,
    pub source: String,
    pub citation: String,
}

pub fn builtin_pub_values() -> Vec<PubValue> {
    serde_json::from_str(BUILTIN_PUB).expect("embedded published bounds are valid")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub n: u32,
    pub l_pub: u64,
    pub l_pub_source: String,
    pub l_ch: u64,
    pub witness: (u32, u32),
    pub delta: i64,
}

/// Published bound against the best one-step replication bound, one row
/// per entry of `pub_values`.
pub fn table_pub_vs_cheb(seeds: &SeedTable, pub_values: &[PubValue]) -> Result<Vec<ComparisonRow>> {
    pub_values
        .iter()
        .map(|p| {
            let best = best_cheb_bound(p.n, seeds)?;
            Ok(ComparisonRow {
                n: p.n,
                l_pub: p.value,
                l_pub_source: format!("{} {}", p.source, p.citation),
                l_ch: best.value,
                witness: best.witness.expect("replication bounds carry a witness"),
                delta: best.value as i64 - p.value as i64,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationRow {
    pub n: u32,
    pub factorization: String,
    pub seed_bound: String,
    pub theorem_output: String,
    pub value: u64,
}

/// How each best bound is obtained: `12=6·2`, `H(5) ≥ 37`, `H(11) ≥ 4·37`.
pub fn table_derivation(seeds: &SeedTable, degrees: &[u32]) -> Result<Vec<DerivationRow>> {
    degrees
        .iter()
        .map(|&target| {
            let best = best_cheb_bound(target, seeds)?;
            let (n, m) = best.witness.expect("replication bounds carry a witness");
            let seed = best.seed_value.expect("replication bounds carry a seed");
            Ok(DerivationRow {
                n: target,
                factorization: format!("{}={}·{m}", target + 1, n + 1),
                seed_bound: format!("H({n}) ≥ {seed}"),
                theorem_output: format!("H({target}) ≥ {}·{seed}", m * m),
                value: best.value,
            })
        })
        .collect()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    let mut line = fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",");
    line.push('\n');
    line
}

pub const COMPARISON_HEADER: [&str; 5] = ["N", "L_pub(N)", "L_Ch(N)", "seed (n,m)", "Delta"];
pub const DERIVATION_HEADER: [&str; 5] = [
    "N",
    "factorization of N+1",
    "seed bound used",
    "theorem output",
    "value of L_Ch(N)",
];

pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut out = csv_line(&COMPARISON_HEADER.map(String::from));
    for r in rows {
        out.push_str(&csv_line(&[
            r.n.to_string(),
            r.l_pub.to_string(),
            r.l_ch.to_string(),
            format!("({},{})", r.witness.0, r.witness.1),
            r.delta.to_string(),
        ]));
    }
    out
}

pub fn derivation_csv(rows: &[DerivationRow]) -> String {
    let mut out = csv_line(&DERIVATION_HEADER.map(String::from));
    for r in rows {
        out.push_str(&csv_line(&[
            r.n.to_string(),
            r.factorization.clone(),
            r.seed_bound.clone(),
            r.theorem_output.clone(),
            r.value.to_string(),
        ]));
    }
    out
}

/// `k0 ((N + 1) / (n0 + 1))^2`, the most cycles any replication-only
/// schedule from a degree-`n0` field with `k0` cycles can reach at degree `N`.
pub fn quadratic_ceiling(
    k0: impl Into<BigUint>,
    n0: impl Into<BigUint>,
    target: impl Into<BigUint>,
) -> Result<BigRational> {
    let (k0, n0, target) = (k0.into(), n0.into(), target.into());
    if n0 < BigUint::one() {
        return Err(Error::InvalidParameter("n0 must be at least 1".into()));
    }
    if target < n0 {
        return Err(Error::InvalidParameter(format!(
            "N = {target} is below n0 = {n0}"
        )));
    }
    let ratio = BigRational::new((target + 1u32).into(), (n0 + 1u32).into());
    Ok(BigRational::from_integer(k0.into()) * &ratio * &ratio)
}

/// Iterated replication from a degree-`n0` field with `k0` cycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub n0: u64,
    pub k0: u64,
    pub steps: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleBound {
    pub degree: BigUint,
    pub cycle_bound: BigUint,
}

/// Final degree and cycle count of a schedule; the count always equals the
/// quadratic ceiling at that degree.
pub fn schedule_bound(s: &Schedule) -> Result<ScheduleBound> {
    if s.n0 < 1 {
        return Err(Error::InvalidParameter("n0 must be at least 1".into()));
    }
    if let Some(bad) = s.steps.iter().find(|&&m| m < 2) {
        return Err(Error::InvalidParameter(format!(
            "replication factors must be >= 2, got {bad}"
        )));
    }
    let product: BigUint = s.steps.iter().map(|&m| BigUint::from(m)).product();
    let degree = (BigUint::from(s.n0) + 1u32) * &product - 1u32;
    let cycle_bound = BigUint::from(s.k0) * &product * &product;
    let ceiling = quadratic_ceiling(s.k0, s.n0, degree.clone())?;
    assert!(
        ceiling.is_integer() && ceiling.to_integer() == cycle_bound.clone().into(),
        "schedule bound must saturate the quadratic ceiling"
    );
    Ok(ScheduleBound {
        degree,
        cycle_bound,
    })
}

/// All ordered factorizations of `q` into factors `>= 2`; `[[]]` for `q = 1`.
pub fn ordered_factorizations(q: u64) -> Vec<Vec<u64>> {
    if q == 1 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 2..=q {
        if q.is_multiple_of(first) {
            for mut rest in ordered_factorizations(q / first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
    }
    out
}
