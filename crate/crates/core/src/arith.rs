//! Arbitrary-precision integer primitives: roots, square detection, primality,
//! factorization, and bounded divisor enumeration.

use crate::{Error, Result};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;

/// Trial division covers all primes below this bound.
const TRIAL_LIMIT: u32 = 1_000_000;

/// Divisor sets up to this cardinality are materialized and sorted; larger
/// ones are enumerated lazily by pruned depth-first traversal.
const MATERIALIZE_LIMIT: u64 = 1 << 20;

/// Miller-Rabin with the fixed base set below is deterministic under this
/// threshold (Sorenson & Webster); larger inputs get 64 pseudorandom rounds.
const DETERMINISTIC_MR_LIMIT: &str = "3317044064679887385961981";

static SMALL_PRIMES: Lazy<Vec<u32>> = Lazy::new(|| {
    let n = TRIAL_LIMIT as usize;
    let mut composite = vec![false; n];
    let mut primes = Vec::with_capacity(78_498);
    for p in 2..n {
        if composite[p] {
            continue;
        }
        primes.push(p as u32);
        let mut q = p * p;
        while q < n {
            composite[q] = true;
            q += p;
        }
    }
    primes
});

/// A positive integer as an ordered multiset of (prime, exponent) pairs.
/// The empty list represents 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization { factors: Vec::new() }
    }

    /// Builds a factorization from explicit (prime, exponent) pairs,
    /// checking primality, strict ordering, and positive exponents.
    pub fn from_factors(factors: Vec<(BigUint, u32)>) -> Result<Self> {
        for window in factors.windows(2) {
            if window[0].0 >= window[1].0 {
                return Err(Error::InvalidInput(
                    "factor primes must be strictly increasing".into(),
                ));
            }
        }
        for (p, e) in &factors {
            if *e == 0 {
                return Err(Error::InvalidInput(format!("zero exponent on {p}")));
            }
            if !is_probable_prime(p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
        }
        Ok(Factorization { factors })
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// The represented value, i.e. the product of all prime powers.
    pub fn value(&self) -> BigUint {
        let mut v = BigUint::one();
        for (p, e) in &self.factors {
            v *= p.pow(*e);
        }
        v
    }

    /// Number of divisors, which may overflow u64 for extreme inputs; callers
    /// treat `None` as "more than can be materialized".
    pub fn divisor_count(&self) -> Option<u64> {
        let mut c: u64 = 1;
        for (_, e) in &self.factors {
            c = c.checked_mul(*e as u64 + 1)?;
        }
        Some(c)
    }

    /// Product of two factorizations (multiset union of prime powers).
    pub fn merge(&self, other: &Factorization) -> Factorization {
        let mut out: Vec<(BigUint, u32)> = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            match self.factors[i].0.cmp(&other.factors[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.factors[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.factors[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.factors[i].0.clone(), self.factors[i].1 + other.factors[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Factorization { factors: out }
    }

    /// The factorization of value^k.
    pub fn pow(&self, k: u32) -> Factorization {
        if k == 0 {
            return Factorization::one();
        }
        Factorization {
            factors: self.factors.iter().map(|(p, e)| (p.clone(), e * k)).collect(),
        }
    }

    /// All divisors d of the represented value with `lo <= d <= hi`, strictly
    /// ascending.  Small divisor sets are materialized and sliced; large ones
    /// are enumerated by pruned depth-first traversal of exponent vectors.
    pub fn divisors_in_range(&self, lo: &BigUint, hi: &BigUint) -> Vec<BigUint> {
        if lo > hi {
            return Vec::new();
        }
        match self.divisor_count() {
            Some(c) if c <= MATERIALIZE_LIMIT => self.divisors_in_range_materialized(lo, hi),
            _ => self.divisors_in_range_lazy(lo, hi),
        }
    }

    fn divisors_in_range_materialized(&self, lo: &BigUint, hi: &BigUint) -> Vec<BigUint> {
        let mut divs = vec![BigUint::one()];
        for (p, e) in &self.factors {
            let base = divs.len();
            let mut power = BigUint::one();
            for _ in 0..*e {
                power *= p;
                for i in 0..base {
                    divs.push(&divs[i] * &power);
                }
            }
        }
        divs.sort_unstable();
        let start = divs.partition_point(|d| d < lo);
        let end = divs.partition_point(|d| d <= hi);
        divs[start..end].to_vec()
    }

    fn divisors_in_range_lazy(&self, lo: &BigUint, hi: &BigUint) -> Vec<BigUint> {
        // Primes in decreasing order; suffix[i] is the largest divisor
        // obtainable from primes i.. and drives the lower-bound prune.
        let mut primes: Vec<(BigUint, u32)> = self.factors.clone();
        primes.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut suffix = vec![BigUint::one(); primes.len() + 1];
        for i in (0..primes.len()).rev() {
            suffix[i] = &suffix[i + 1] * primes[i].0.pow(primes[i].1);
        }
        let mut out = Vec::new();
        fn rec(
            primes: &[(BigUint, u32)],
            suffix: &[BigUint],
            i: usize,
            cur: BigUint,
            lo: &BigUint,
            hi: &BigUint,
            out: &mut Vec<BigUint>,
        ) {
            if &cur * &suffix[i] < *lo {
                return;
            }
            if i == primes.len() {
                if cur >= *lo {
                    out.push(cur);
                }
                return;
            }
            let (p, e) = &primes[i];
            let mut v = cur;
            for _ in 0..=*e {
                rec(primes, suffix, i + 1, v.clone(), lo, hi, out);
                v *= p;
                if v > *hi {
                    break;
                }
            }
        }
        rec(&primes, &suffix, 0, BigUint::one(), lo, hi, &mut out);
        out.sort_unstable();
        out
    }

    /// Calls `emit` once per divisor d with `lo <= d <= hi`, in no particular
    /// order.  Meet-in-the-middle: divisors over the small primes are
    /// materialized and sorted once, then each product over the large primes
    /// selects its matching window by binary search.  This keeps the cost
    /// proportional to the output plus the two halves even when the full
    /// divisor count is astronomical.
    pub fn for_each_divisor_in_range_u64(&self, lo: u64, hi: u64, mut emit: impl FnMut(u64)) {
        if lo > hi {
            return;
        }
        let mut primes: Vec<(u64, u32)> = Vec::new();
        for (p, e) in &self.factors {
            let Some(p64) = p.to_u64() else { continue };
            if p64 > hi {
                continue;
            }
            // cap the exponent at the largest power still within range
            let mut cap = 0u32;
            let mut v = 1u64;
            for _ in 0..*e {
                match v.checked_mul(p64) {
                    Some(w) if w <= hi => {
                        v = w;
                        cap += 1;
                    }
                    _ => break,
                }
            }
            primes.push((p64, cap));
        }
        primes.sort_unstable();
        let mut split = 0usize;
        let mut b_count: u64 = 1;
        while split < primes.len() {
            let next = b_count.saturating_mul(primes[split].1 as u64 + 1);
            if next > MATERIALIZE_LIMIT {
                break;
            }
            b_count = next;
            split += 1;
        }
        let (small_half, large_half) = primes.split_at(split);
        let mut table: Vec<u64> = vec![1];
        for &(p, e) in small_half {
            let base = table.len();
            let mut pw = p;
            for step in 0..e {
                for i in 0..base {
                    if let Some(v) = table[i].checked_mul(pw) {
                        if v <= hi {
                            table.push(v);
                        }
                    }
                }
                if step + 1 < e {
                    match pw.checked_mul(p) {
                        Some(w) if w <= hi => pw = w,
                        _ => break,
                    }
                }
            }
        }
        table.sort_unstable();
        fn rec(
            primes: &[(u64, u32)],
            i: usize,
            cur: u64,
            lo: u64,
            hi: u64,
            table: &[u64],
            emit: &mut impl FnMut(u64),
        ) {
            if i == primes.len() {
                let lo_t = lo.div_ceil(cur);
                let hi_t = hi / cur;
                let start = table.partition_point(|&d| d < lo_t);
                let end = table.partition_point(|&d| d <= hi_t);
                for &d in &table[start..end] {
                    emit(cur * d);
                }
                return;
            }
            let (p, e) = primes[i];
            let mut v = cur;
            for _ in 0..=e {
                rec(primes, i + 1, v, lo, hi, table, emit);
                match v.checked_mul(p) {
                    Some(w) if w <= hi => v = w,
                    _ => break,
                }
            }
        }
        rec(large_half, 0, 1, lo, hi, &table, &mut emit);
    }
}

/// Floor of the n-th root: returns r with r^n <= value < (r+1)^n.
pub fn integer_nth_root(value: &BigUint, n: u32) -> BigUint {
    assert!(n >= 1, "root order must be positive");
    value.nth_root(n)
}

// Quadratic-residue tables; a square must be a residue modulo each base.
static QR64: Lazy<[bool; 64]> = Lazy::new(|| qr_table::<64>());
static QR63: Lazy<[bool; 63]> = Lazy::new(|| qr_table::<63>());
static QR65: Lazy<[bool; 65]> = Lazy::new(|| qr_table::<65>());
static QR11: Lazy<[bool; 11]> = Lazy::new(|| qr_table::<11>());

fn qr_table<const M: usize>() -> [bool; M] {
    let mut t = [false; M];
    for i in 0..M {
        t[i * i % M] = true;
    }
    t
}

/// Returns r with r^2 = value when one exists.  The residue prefilter rejects
/// the vast majority of non-squares before the exact root is taken.
pub fn is_perfect_square(value: &BigUint) -> Option<BigUint> {
    let low = (value % 64u32).to_usize().unwrap();
    if !QR64[low] {
        return None;
    }
    if !QR63[(value % 63u32).to_usize().unwrap()]
        || !QR65[(value % 65u32).to_usize().unwrap()]
        || !QR11[(value % 11u32).to_usize().unwrap()]
    {
        return None;
    }
    let r = value.sqrt();
    if &(&r * &r) == value {
        Some(r)
    } else {
        None
    }
}

/// Fixed-width variant of [`is_perfect_square`] for hot loops.
pub fn is_perfect_square_u128(value: u128) -> Option<u128> {
    if !QR64[(value % 64) as usize]
        || !QR63[(value % 63) as usize]
        || !QR65[(value % 65) as usize]
        || !QR11[(value % 11) as usize]
    {
        return None;
    }
    let r = value.isqrt();
    if r * r == value {
        Some(r)
    } else {
        None
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn low_bits_seed(n: &BigUint) -> u64 {
    let digits = n.to_u64_digits();
    digits.iter().fold(0x5851f42d4c957f2d_u64, |acc, d| {
        acc.rotate_left(7) ^ *d
    })
}

/// Miller-Rabin primality: exact below a fixed threshold, error probability
/// below 2^-64 for larger composites.  Deterministically seeded.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    if let Some(small) = n.to_u32() {
        if small < TRIAL_LIMIT {
            return SMALL_PRIMES.binary_search(&small).is_ok();
        }
    }
    for p in &SMALL_PRIMES[..64] {
        if (n % *p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;

    let witness = |a: &BigUint| -> bool {
        // true => composite
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                return false;
            }
        }
        true
    };

    static MR_LIMIT: Lazy<BigUint> =
        Lazy::new(|| DETERMINISTIC_MR_LIMIT.parse().unwrap());
    if n < &MR_LIMIT {
        // n exceeds 10^6 here, so every base is a proper residue.
        const BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
        return BASES.iter().all(|&b| !witness(&BigUint::from(b)));
    }
    let mut state = low_bits_seed(n);
    for _ in 0..64 {
        // Draw a base in [2, n-2]; n is huge here so rejection is moot.
        let mut a = BigUint::zero();
        let words = (n.bits() / 64 + 1) as usize;
        for _ in 0..words {
            a = (a << 64) | BigUint::from(splitmix64(&mut state));
        }
        a = a % (&n_minus_1 - 1u32) + 2u32;
        if witness(&a) {
            return false;
        }
    }
    true
}

fn mulmod_u128(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn brent_rho_u64(n: u64, seed: &mut u64) -> u64 {
    // Brent's cycle variant; returns a nontrivial factor of composite odd n.
    loop {
        let c = splitmix64(seed) % (n - 2) + 1;
        let mut y = splitmix64(seed) % n;
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = mulmod_u128(y, y, n).wrapping_add(c) % n;
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let lim = 128.min(r - k);
                for _ in 0..lim {
                    y = mulmod_u128(y, y, n).wrapping_add(c) % n;
                    q = mulmod_u128(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += lim;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = mulmod_u128(ys, ys, n).wrapping_add(c) % n;
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
}

fn brent_rho_big(n: &BigUint, seed: &mut u64) -> Option<BigUint> {
    let one = BigUint::one();
    for _ in 0..64 {
        let c = BigUint::from(splitmix64(seed) | 1);
        let mut y = BigUint::from(splitmix64(seed)) % n;
        let mut g = BigUint::one();
        let mut q = BigUint::one();
        let mut r: u64 = 1;
        let mut x = BigUint::zero();
        let mut ys = BigUint::zero();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = (&y * &y + &c) % n;
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let lim = 128.min(r - k);
                for _ in 0..lim {
                    y = (&y * &y + &c) % n;
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = &q * diff % n;
                }
                g = q.gcd(n);
                k += lim;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = (&ys * &ys + &c) % n;
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if &g != n && g > one {
            return Some(g);
        }
    }
    None
}

fn factor_u64(mut n: u64, out: &mut Vec<(BigUint, u32)>) {
    for &p in SMALL_PRIMES.iter() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((BigUint::from(p), e));
        }
    }
    if n == 1 {
        return;
    }
    if is_probable_prime(&BigUint::from(n)) {
        out.push((BigUint::from(n), 1));
        return;
    }
    let mut seed = n ^ 0xda942042e4dd58b5;
    let f = brent_rho_u64(n, &mut seed);
    factor_u64(f, out);
    factor_u64(n / f, out);
}

/// Factors a positive integer: trial division below 10^6, then deterministic
/// seeded Brent rho, with Miller-Rabin certification of prime cofactors.
pub fn factorize(n: &BigUint) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    let mut raw: Vec<(BigUint, u32)> = Vec::new();
    if let Some(small) = n.to_u64() {
        if small > 1 {
            factor_u64(small, &mut raw);
        }
    } else {
        let mut rem = n.clone();
        for &p in SMALL_PRIMES.iter() {
            if rem.is_one() {
                break;
            }
            if (&rem % p).is_zero() {
                let mut e = 0;
                let big_p = BigUint::from(p);
                while (&rem % p).is_zero() {
                    rem /= &big_p;
                    e += 1;
                }
                raw.push((big_p, e));
            }
            if let Some(r) = rem.to_u64() {
                if (p as u64) * (p as u64) > r {
                    break;
                }
            }
        }
        // Crack remaining cofactors with rho; every prime found is certified.
        let mut stack = Vec::new();
        if !rem.is_one() {
            stack.push(rem);
        }
        while let Some(m) = stack.pop() {
            if let Some(small) = m.to_u64() {
                factor_u64(small, &mut raw);
                continue;
            }
            if is_probable_prime(&m) {
                raw.push((m, 1));
                continue;
            }
            let mut seed = low_bits_seed(&m);
            match brent_rho_big(&m, &mut seed) {
                Some(f) => {
                    stack.push(&m / &f);
                    stack.push(f);
                }
                None => return Err(Error::TooHard(m)),
            }
        }
    }
    raw.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut factors: Vec<(BigUint, u32)> = Vec::with_capacity(raw.len());
    for (p, e) in raw {
        match factors.last_mut() {
            Some(last) if last.0 == p => last.1 += e,
            _ => factors.push((p, e)),
        }
    }
    Ok(Factorization { factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn big(s: &str) -> BigUint {
        s.parse().unwrap()
    }

    #[test]
    fn nth_root_examples() {
        assert_eq!(integer_nth_root(&big("2052"), 3), big("12"));
        assert_eq!(integer_nth_root(&big("1"), 5), big("1"));
        assert_eq!(integer_nth_root(&big("0"), 3), big("0"));
    }

    #[test]
    fn perfect_square_examples() {
        assert_eq!(is_perfect_square(&big("1089")), Some(big("33")));
        assert_eq!(is_perfect_square(&big("0")), Some(big("0")));
        assert_eq!(is_perfect_square(&big("2")), None);
    }

    #[test]
    fn primality_examples() {
        assert!(is_probable_prime(&big("79")));
        assert!(!is_probable_prime(&big("1")));
        assert!(!is_probable_prime(&big("4104")));
        assert!(is_probable_prime(&big("2305843009213693951"))); // 2^61 - 1
        assert!(!is_probable_prime(&big("2305843009213693953")));
    }

    #[test]
    fn primality_large() {
        // 2^127 - 1 is prime; 2^128 + 1 = 59649589127497217 * 5704689200685129054721.
        assert!(is_probable_prime(&big("170141183460469231731687303715884105727")));
        assert!(!is_probable_prime(&big("340282366920938463463374607431768211457")));
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(&big("4104")).unwrap();
        assert_eq!(
            f.factors(),
            &[(big("2"), 3), (big("3"), 3), (big("19"), 1)]
        );
        assert_eq!(factorize(&big("1")).unwrap(), Factorization::one());

        let w5 = factorize(&big("48988659276962496")).unwrap();
        assert_eq!(w5.value(), big("48988659276962496"));
        let expect: Vec<(BigUint, u32)> = vec![
            (big("2"), 6),
            (big("3"), 3),
            (big("7"), 4),
            (big("13"), 1),
            (big("19"), 1),
            (big("43"), 1),
            (big("73"), 1),
            (big("97"), 1),
            (big("157"), 1),
        ];
        assert_eq!(w5.factors(), expect.as_slice());
        assert_eq!(w5.divisor_count(), Some(8960));
    }

    #[test]
    fn factorize_cracks_medium_semiprime() {
        // Two 12-digit primes; out of trial-division range, rho territory.
        let p = big("100000000003");
        let q = big("100000000019");
        let f = factorize(&(&p * &q)).unwrap();
        assert_eq!(f.factors(), &[(p, 1), (q, 1)]);
    }

    #[test]
    fn divisors_in_range_examples() {
        let f = factorize(&big("4104")).unwrap();
        assert_eq!(
            f.divisors_in_range(&big("9"), &big("12")),
            vec![big("9"), big("12")]
        );
        assert!(f.divisors_in_range(&big("5"), &big("5")).is_empty());
        assert_eq!(
            Factorization::one().divisors_in_range(&big("1"), &big("10")),
            vec![big("1")]
        );
    }

    #[test]
    fn divisor_strategies_agree() {
        let f = factorize(&big("963761198400")).unwrap(); // highly composite
        let lo = big("1000");
        let hi = big("50000");
        let a = f.divisors_in_range_materialized(&lo, &hi);
        let b = f.divisors_in_range_lazy(&lo, &hi);
        assert_eq!(a, b);
        assert!(!a.is_empty());
        assert!(a.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn from_factors_rejects_bad_input() {
        assert!(Factorization::from_factors(vec![(big("4"), 1)]).is_err());
        assert!(Factorization::from_factors(vec![(big("3"), 1), (big("2"), 1)]).is_err());
        assert!(Factorization::from_factors(vec![(big("2"), 0)]).is_err());
    }
}
