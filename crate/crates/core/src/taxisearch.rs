//! Iterative taxicab search: from a k-way representable seed, scan cubic
//! multipliers M and hunt an extra median among the divisors of M^3 * T,
//! with resumable checkpoints and deterministic parallel ranges.

use crate::arith::{factorize, integer_nth_root, is_probable_prime, Factorization};
use crate::cubeform::{decompose, median_bounds, median_offsets, solve_h};
use crate::{Error, Result};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

/// A number with k known representations as a sum of two n-th powers,
/// together with its multiplier chain back to a seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaxicabRecord {
    pub value: BigUint,
    pub power: u32,
    pub ways: usize,
    /// Strictly ascending medians, one per representation.
    pub medians: Vec<BigUint>,
    /// Multipliers applied to the seed, in application order.
    pub chain: Vec<BigUint>,
    pub seed_value: BigUint,
    pub factorization: Factorization,
}

impl TaxicabRecord {
    pub fn new(
        value: BigUint,
        power: u32,
        medians: Vec<BigUint>,
        chain: Vec<BigUint>,
        seed_value: BigUint,
        factorization: Factorization,
    ) -> Result<Self> {
        let rec = TaxicabRecord {
            ways: medians.len(),
            value,
            power,
            medians,
            chain,
            seed_value,
            factorization,
        };
        rec.validate()?;
        Ok(rec)
    }

    /// Checks every structural invariant; used on construction and on the
    /// seed of every search.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidSeed(msg));
        if self.medians.len() != self.ways || self.ways == 0 {
            return fail("ways must equal the number of medians".into());
        }
        if !self.medians.windows(2).all(|w| w[0] < w[1]) {
            return fail("medians must be strictly ascending".into());
        }
        if self.factorization.value() != self.value {
            return fail("factorization does not multiply to value".into());
        }
        let mut chain_cubed = BigUint::one();
        for mu in &self.chain {
            chain_cubed *= mu.pow(self.power);
        }
        if chain_cubed * &self.seed_value != self.value {
            return fail("chain product and seed do not reproduce value".into());
        }
        if self.value.is_even() {
            let Some((lo, hi)) = median_bounds(&self.value, self.power) else {
                return fail("median bounds are empty".into());
            };
            let first_residue = &self.medians[0] % self.power;
            for m in &self.medians {
                if m < &lo || m > &hi {
                    return fail(format!("median {m} outside bounds"));
                }
                if m % self.power != first_residue {
                    return fail(format!("median {m} breaks pairwise congruence"));
                }
                if solve_h(&self.value, m, self.power).is_none() {
                    return fail(format!("{m} is not a median of the value"));
                }
            }
        }
        Ok(())
    }
}

/// Largest multiplier worth scanning from T: floor(2 * T^(2/3)), computed
/// exactly as 2 * floor(cbrt(T^2)).  Monotone in T.
pub fn max_multiplier_bound(record: &TaxicabRecord) -> BigUint {
    integer_nth_root(&(&record.value * &record.value), 3) << 1u32
}

/// Certified lower bound 2 * (2n / (2 - 2^(1/n)))^n * (k-1)^n for an even
/// k-way representable number.  2^(1/n) is bracketed from below at 64
/// fractional bits, and the result is floored, so the returned value never
/// exceeds the true bound.
pub fn taxicab_lower_bound(n: u32, k: u32) -> BigUint {
    assert!(n >= 3 && n % 2 == 1 && k >= 2);
    // root = floor(2^(1/n) * 2^64): root^n <= 2^(64n+1)
    let root = integer_nth_root(&(BigUint::one() << (64 * n + 1)), n);
    let numerator =
        (BigUint::from(2u32 * n * (k - 1)).pow(n) << 1u32) * (BigUint::one() << (64 * n));
    let denominator = ((BigUint::one() << 65u32) - root).pow(n);
    numerator / denominator
}

/// lcm(m_1, ..., m_k) <= (2 m_1)^n -- medians share divisors once there are
/// "too many" of them.
pub fn median_lcm_check(record: &TaxicabRecord) -> bool {
    let mut l = BigUint::one();
    for m in &record.medians {
        l = l.lcm(m);
    }
    l <= (&record.medians[0] << 1u32).pow(record.power)
}

/// One multiplier trial: N = M^3 * T.  Candidate medians are the divisors of
/// N inside the median bounds, filtered by the mod-3 congruence and resolved
/// with the offset equation.  Returns a record only when strictly more
/// distinct medians than the input appear.
pub fn search_step(record: &TaxicabRecord, multiplier: &BigUint) -> Result<Option<TaxicabRecord>> {
    record.validate()?;
    if record.power != 3 || !record.value.is_even() {
        return Err(Error::InvalidSeed(
            "search requires a cubic seed with even value".into(),
        ));
    }
    if multiplier < &BigUint::from(2u32) {
        return Err(Error::InvalidInput("multiplier must be at least 2".into()));
    }
    let m_factors = factorize(multiplier)?;
    let value = multiplier.pow(3) * &record.value;
    let factorization = record.factorization.merge(&m_factors.pow(3));
    let medians: Vec<BigUint> = median_offsets(&value, &factorization, 3)
        .into_iter()
        .filter(|(_, h)| !h.is_zero())
        .map(|(m, _)| m)
        .collect();
    if medians.len() <= record.ways {
        return Ok(None);
    }
    // Lifting invariant: every input median survives scaled by M.
    for m in &record.medians {
        let lifted = m * multiplier;
        assert!(
            medians.binary_search(&lifted).is_ok(),
            "lifted median {lifted} missing"
        );
    }
    // Cross-validate the hit against the reference decomposition path.
    let reference = decompose(&value, 3, Some(&factorization), false)?;
    assert_eq!(
        reference.len(),
        medians.len(),
        "median scan disagrees with full decomposition"
    );
    let mut chain = record.chain.clone();
    chain.push(multiplier.clone());
    TaxicabRecord::new(
        value,
        3,
        medians,
        chain,
        record.seed_value.clone(),
        factorization,
    )
    .map(Some)
}

/// Resumable state of a multiplier-range search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchCheckpoint {
    pub seed_value: BigUint,
    pub power: u32,
    pub next_multiplier: BigUint,
    pub found: Vec<(BigUint, BigUint)>,
}

impl SearchCheckpoint {
    pub fn new(seed: &TaxicabRecord, next_multiplier: BigUint) -> Self {
        SearchCheckpoint {
            seed_value: seed.value.clone(),
            power: seed.power,
            next_multiplier,
            found: Vec::new(),
        }
    }

    pub fn serialize(&self) -> String {
        let mut s = format!(
            "seed={}\npower={}\nnext_multiplier={}\n",
            self.seed_value, self.power, self.next_multiplier
        );
        for (m, median) in &self.found {
            s.push_str(&format!("found {m} {median}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::MalformedCheckpoint(msg.into());
        let mut lines = text.lines();
        let seed_value = lines
            .next()
            .and_then(|l| l.strip_prefix("seed="))
            .ok_or_else(|| bad("missing seed line"))?
            .parse()
            .map_err(|_| bad("bad seed value"))?;
        let power = lines
            .next()
            .and_then(|l| l.strip_prefix("power="))
            .ok_or_else(|| bad("missing power line"))?
            .parse()
            .map_err(|_| bad("bad power value"))?;
        let next_multiplier = lines
            .next()
            .and_then(|l| l.strip_prefix("next_multiplier="))
            .ok_or_else(|| bad("missing next_multiplier line"))?
            .parse()
            .map_err(|_| bad("bad next_multiplier value"))?;
        let mut found = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let rest = line
                .strip_prefix("found ")
                .ok_or_else(|| bad("unexpected line"))?;
            let mut parts = rest.split_whitespace();
            let m = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad("bad found multiplier"))?;
            let median = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad("bad found median"))?;
            found.push((m, median));
        }
        Ok(SearchCheckpoint {
            seed_value,
            power,
            next_multiplier,
            found,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Atomic write via a sibling temp file and rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        std::fs::write(&tmp, self.serialize())?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    pub prime_only: bool,
    /// Worker threads; 0 and 1 both mean sequential.
    pub workers: usize,
    pub checkpoint_path: Option<PathBuf>,
}

/// Scans multipliers in [from, to] and reports every M whose step succeeds,
/// ascending.  Output is a pure function of (seed, range, prime_only)
/// regardless of worker count; the checkpoint advances after each completed
/// multiplier and resuming never re-reports or skips one.
pub fn search_range(
    seed: &TaxicabRecord,
    from: &BigUint,
    to: &BigUint,
    opts: &SearchOptions,
    mut on_hit: impl FnMut(&BigUint, &TaxicabRecord),
) -> Result<Vec<(BigUint, TaxicabRecord)>> {
    seed.validate()?;
    let two = BigUint::from(2u32);
    if from < &two || from > to || to > &max_multiplier_bound(seed) {
        return Err(Error::InvalidInput(format!(
            "range [{from}, {to}] outside [2, {}]",
            max_multiplier_bound(seed)
        )));
    }
    let mut checkpoint = match &opts.checkpoint_path {
        Some(path) if path.exists() => {
            let c = SearchCheckpoint::load(path)?;
            if c.seed_value != seed.value || c.power != seed.power {
                return Err(Error::CheckpointMismatch(format!(
                    "checkpoint is for seed {} power {}",
                    c.seed_value, c.power
                )));
            }
            Some(c)
        }
        Some(_) => Some(SearchCheckpoint::new(seed, from.clone())),
        None => None,
    };
    let start = match &checkpoint {
        Some(c) if &c.next_multiplier > from => c.next_multiplier.clone(),
        _ => from.clone(),
    };

    let mut candidates = Vec::new();
    let mut m = start;
    while &m <= to {
        if !opts.prime_only || is_probable_prime(&m) {
            candidates.push(m.clone());
        }
        m += 1u32;
    }

    let mut hits: Vec<(BigUint, TaxicabRecord)> = Vec::new();
    let next_index = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, Result<Option<TaxicabRecord>>)>();
    let worker_count = opts.workers.max(1).min(candidates.len().max(1));
    let mut first_error: Option<Error> = None;

    std::thread::scope(|scope| {
        for _ in 0..worker_count {
            let tx = tx.clone();
            let candidates = &candidates;
            let next_index = &next_index;
            scope.spawn(move || loop {
                let i = next_index.fetch_add(1, Ordering::Relaxed);
                if i >= candidates.len() {
                    break;
                }
                if tx.send((i, search_step(seed, &candidates[i]))).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut pending: BTreeMap<usize, Result<Option<TaxicabRecord>>> = BTreeMap::new();
        let mut frontier = 0usize;
        while frontier < candidates.len() {
            let Ok((i, res)) = rx.recv() else { break };
            pending.insert(i, res);
            while let Some(res) = pending.remove(&frontier) {
                let m = &candidates[frontier];
                match res {
                    Ok(Some(record)) => {
                        if let Some(c) = checkpoint.as_mut() {
                            let new_median = first_new_median(seed, m, &record);
                            c.found.push((m.clone(), new_median));
                        }
                        on_hit(m, &record);
                        hits.push((m.clone(), record));
                    }
                    Ok(None) => {}
                    Err(e) => {
                        if first_error.is_none() {
                            first_error = Some(e);
                        }
                    }
                }
                if let Some(c) = checkpoint.as_mut() {
                    c.next_multiplier = m + 1u32;
                    if let Some(path) = &opts.checkpoint_path {
                        if let Err(e) = c.save(path) {
                            if first_error.is_none() {
                                first_error = Some(e);
                            }
                        }
                    }
                }
                frontier += 1;
                if frontier >= candidates.len() {
                    break;
                }
            }
        }
    });

    match first_error {
        Some(e) => Err(e),
        None => Ok(hits),
    }
}

/// The smallest median of the new record that is not a lifted input median.
fn first_new_median(seed: &TaxicabRecord, multiplier: &BigUint, record: &TaxicabRecord) -> BigUint {
    let lifted: Vec<BigUint> = seed.medians.iter().map(|m| m * multiplier).collect();
    record
        .medians
        .iter()
        .find(|m| !lifted.contains(m))
        .cloned()
        .unwrap_or_else(|| record.medians[0].clone())
}
