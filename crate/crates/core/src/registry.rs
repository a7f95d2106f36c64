//! Embedded registry of known taxicab numbers (T2..T14, plus the W5 and R6
//! aliases) with their decompositions, stored as a plain-text table:
//! one `label value power ways` line per entry followed by `pair x y` lines.

use crate::arith::factorize;
use crate::taxisearch::TaxicabRecord;
use crate::{Error, Result};
use num_bigint::BigUint;
use num_integer::Integer;
use once_cell::sync::Lazy;

const REGISTRY_TEXT: &str = include_str!("data/registry.txt");

#[derive(Clone, Debug)]
pub struct RegistryEntry {
    pub label: String,
    pub value: BigUint,
    pub power: u32,
    pub ways: usize,
    pub pairs: Vec<(BigUint, BigUint)>,
}

static ENTRIES: Lazy<Vec<RegistryEntry>> = Lazy::new(|| {
    parse(REGISTRY_TEXT).expect("embedded registry must parse")
});

pub fn parse(text: &str) -> Result<Vec<RegistryEntry>> {
    let bad = |msg: String| Error::InvalidInput(msg);
    let mut entries: Vec<RegistryEntry> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("pair ") {
            let entry = entries
                .last_mut()
                .ok_or_else(|| bad(format!("line {}: pair before any entry", idx + 1)))?;
            let mut parts = rest.split_whitespace();
            let x: BigUint = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad(format!("line {}: bad pair", idx + 1)))?;
            let y: BigUint = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad(format!("line {}: bad pair", idx + 1)))?;
            entry.pairs.push((x, y));
        } else {
            let mut parts = line.split_whitespace();
            let label = parts
                .next()
                .ok_or_else(|| bad(format!("line {}: missing label", idx + 1)))?
                .to_string();
            let value = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad(format!("line {}: bad value", idx + 1)))?;
            let power = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad(format!("line {}: bad power", idx + 1)))?;
            let ways = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad(format!("line {}: bad ways", idx + 1)))?;
            entries.push(RegistryEntry {
                label,
                value,
                power,
                ways,
                pairs: Vec::new(),
            });
        }
    }
    for e in &entries {
        if e.pairs.len() != e.ways {
            return Err(bad(format!("{}: {} pairs, ways={}", e.label, e.pairs.len(), e.ways)));
        }
    }
    Ok(entries)
}

pub fn entries() -> &'static [RegistryEntry] {
    &ENTRIES
}

pub fn lookup(label: &str) -> Result<&'static RegistryEntry> {
    ENTRIES
        .iter()
        .find(|e| e.label == label)
        .ok_or_else(|| Error::UnknownLabel(label.into()))
}

/// Builds a validated search seed from an even registry entry.  The value is
/// factored on the spot; every prime factor of a registry number lies below
/// the trial-division bound, so this never depends on randomized factoring.
pub fn record(label: &str) -> Result<TaxicabRecord> {
    let entry = lookup(label)?;
    to_record(entry)
}

pub fn to_record(entry: &RegistryEntry) -> Result<TaxicabRecord> {
    if entry.value.is_odd() {
        return Err(Error::InvalidInput(format!(
            "{} is odd and cannot seed a median search",
            entry.label
        )));
    }
    let medians: Vec<BigUint> = entry
        .pairs
        .iter()
        .map(|(x, y)| (x + y) >> 1u32)
        .collect();
    let factorization = factorize(&entry.value)?;
    TaxicabRecord::new(
        entry.value.clone(),
        entry.power,
        medians,
        Vec::new(),
        entry.value.clone(),
        factorization,
    )
}
