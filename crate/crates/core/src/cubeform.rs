//! The median/offset machinery for `(m - h)^n + (m + h)^n = N`: median bounds,
//! congruence and forbidden-divisor filters, offset solving, and complete
//! two-equal-odd-power decomposition.
//!
//! For even `N` every median divides `N`, so decomposition reduces to scanning
//! the divisors of `N` inside the median bounds and solving for the offset.
//! Odd `N` is handled by decomposing `2^n N` and halving the even-even pairs.

use crate::arith::{
    factorize, integer_nth_root, is_perfect_square, is_perfect_square_u128, Factorization,
};
use crate::{Error, Result};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// One representation x^n + sign*y^n = N, with its median/offset when the
/// pair has a common parity (x = m - h, y = m + h).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub x: BigUint,
    pub y: BigUint,
    pub sign: Sign,
    pub n: u32,
    pub median: Option<BigUint>,
    pub offset: Option<BigUint>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lemma1Class {
    /// n | N and n^2 | N.
    DivisibleSquare,
    /// n | N but n^2 does not divide N: no representation exists.
    DivisibleViolation,
    /// n does not divide N.
    Coprime,
}

/// Outcome of the forbidden-prime scan.  Violators do not rule N out; every
/// primitive representation must have all of them dividing the median.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ForbiddenScan {
    Clean,
    Violators(Vec<BigUint>),
}

/// The inclusive interval of integers that can be medians of a representation
/// of even N: (2m)^n > N (from h < m) and 2 m^n <= N (h = 0 boundary).
/// Returns None when the interval is empty.
pub fn median_bounds(n_val: &BigUint, n: u32) -> Option<(BigUint, BigUint)> {
    debug_assert!(n >= 3 && n % 2 == 1);
    let one = BigUint::one();
    let mut lo = integer_nth_root(&(n_val >> n), n);
    while (&lo << 1u32).pow(n) <= *n_val {
        lo += &one;
    }
    let mut hi = integer_nth_root(&(n_val >> 1u32), n);
    loop {
        if hi.is_zero() {
            return None;
        }
        if (hi.pow(n) << 1u32) <= *n_val {
            break;
        }
        hi -= &one;
    }
    if lo > hi {
        None
    } else {
        Some((lo, hi))
    }
}

/// Median congruence filter.  Non-strict: m = N/2 (mod n), valid for every
/// median of even N.  Strict: modulus 12 (n = 3) or 20 (n = 5), valid only
/// for primitive representations with m, h of opposite parity; callers must
/// treat it as heuristic pruning.
pub fn median_congruence_ok(m: &BigUint, n_val: &BigUint, n: u32, strict: bool) -> bool {
    let half = n_val >> 1u32;
    let modulus: u32 = if strict {
        match n {
            3 => 12,
            5 => 20,
            _ => n,
        }
    } else {
        n
    };
    m % modulus == half % modulus
}

/// Classifies even N against the divisibility clause: if n | N then n^2 | N
/// is necessary for a representation to exist.
pub fn lemma1_divisibility(n_val: &BigUint, n: u32) -> Lemma1Class {
    if (n_val % n).is_zero() {
        if (n_val % (n * n)).is_zero() {
            Lemma1Class::DivisibleSquare
        } else {
            Lemma1Class::DivisibleViolation
        }
    } else {
        Lemma1Class::Coprime
    }
}

/// Scans a factorization for primes that cannot divide the cofactor of a
/// primitive representation: p = 5, 11 (mod 12) in the cubic case,
/// p = +-1 (mod 10) in the quintic case.
pub fn forbidden_divisor_scan(f: &Factorization, n: u32) -> ForbiddenScan {
    assert!(n == 3 || n == 5, "forbidden-divisor scan is cubic or quintic");
    let violators: Vec<BigUint> = f
        .factors()
        .iter()
        .filter(|(p, _)| match n {
            3 => matches!((p % 12u32).to_u32(), Some(5) | Some(11)),
            _ => matches!((p % 10u32).to_u32(), Some(1) | Some(9)),
        })
        .map(|(p, _)| p.clone())
        .collect();
    if violators.is_empty() {
        ForbiddenScan::Clean
    } else {
        ForbiddenScan::Violators(violators)
    }
}

/// The even expansion polynomial sum_k C(n,2k) m^(n-2k-1) h^(2k), so that
/// (m-h)^n + (m+h)^n = 2m * poly(m, h).
fn expansion_poly(m: &BigUint, h: &BigUint, n: u32) -> BigUint {
    let mut acc = BigUint::zero();
    let h2 = h * h;
    // binomial C(n, 2k) built incrementally
    let mut binom = BigUint::one();
    let mut h_pow = BigUint::one();
    for k in 0..=(n - 1) / 2 {
        if k > 0 {
            // C(n, 2k) = C(n, 2k-2) * (n-2k+2)(n-2k+1) / ((2k-1)(2k))
            binom = binom * (n - 2 * k + 2) * (n - 2 * k + 1) / ((2 * k - 1) * (2 * k));
            h_pow *= &h2;
        }
        acc += &binom * m.pow(n - 2 * k - 1) * &h_pow;
    }
    acc
}

/// Solves for the offset: the unique h with 0 <= h < m and
/// (m-h)^n + (m+h)^n = N, if any.  Cubic case closed-form via
/// h^2 = (N/(2m) - m^2)/3; general odd n by monotone binary search.
pub fn solve_h(n_val: &BigUint, m: &BigUint, n: u32) -> Option<BigUint> {
    if m.is_zero() {
        return None;
    }
    let two_m = m << 1u32;
    let (q, rem) = n_val.div_rem(&two_m);
    if !rem.is_zero() {
        return None;
    }
    if n == 3 {
        let m2 = m * m;
        if q < m2 {
            return None;
        }
        let diff = &q - &m2;
        if !(&diff % 3u32).is_zero() {
            return None;
        }
        let h = is_perfect_square(&(diff / 3u32))?;
        if h < *m {
            Some(h)
        } else {
            None
        }
    } else {
        // poly(m, h) is strictly increasing in h on h >= 0.
        let mut lo = BigUint::zero();
        let mut hi = m - 1u32;
        while lo <= hi {
            let mid = (&lo + &hi) >> 1u32;
            match expansion_poly(m, &mid, n).cmp(&q) {
                std::cmp::Ordering::Equal => return Some(mid),
                std::cmp::Ordering::Less => lo = mid + 1u32,
                std::cmp::Ordering::Greater => {
                    if mid.is_zero() {
                        return None;
                    }
                    hi = mid - 1u32;
                }
            }
        }
        None
    }
}

/// (median, offset) pairs of even N, scanning the divisor candidates of `f`
/// inside the median window, ascending by median.  Offsets may be zero.
pub(crate) fn median_offsets(n_val: &BigUint, f: &Factorization, n: u32) -> Vec<(BigUint, BigUint)> {
    let Some((lo, hi)) = median_bounds(n_val, n) else {
        return Vec::new();
    };
    if n == 3 {
        if let (Some(lo64), Some(hi64)) = (lo.to_u64(), hi.to_u64()) {
            // hi < 2^62 keeps every cofactor N/(2m) < 4 hi^2 inside u128
            if hi64 < (1u64 << 62) {
                return median_offsets_u64(n_val, f, lo64, hi64);
            }
        }
        if let Some(out) = median_offsets_u256(n_val, f, &lo, &hi) {
            return out;
        }
        return median_offsets_big(n_val, f, &lo, &hi);
    }
    let mut out = Vec::new();
    for m in f.divisors_in_range(&lo, &hi) {
        if !median_congruence_ok(&m, n_val, n, false) {
            continue;
        }
        if let Some(h) = solve_h(n_val, &m, n) {
            out.push((m, h));
        }
    }
    out
}

/// The cubic fast path: candidates fit u64 and cofactors fit u128, so the
/// whole scan runs on fixed-width integers with no allocation per candidate.
fn median_offsets_u64(
    n_val: &BigUint,
    f: &Factorization,
    lo: u64,
    hi: u64,
) -> Vec<(BigUint, BigUint)> {
    let half = n_val >> 1u32;
    let residue = (&half % 3u32).to_u64().unwrap();
    // N/2 as little-endian limbs for manual short division
    let limbs = half.to_u64_digits();
    let mut hits: Vec<(u64, u64)> = Vec::new();
    f.for_each_divisor_in_range_u64(lo, hi, |m| {
        if m % 3 != residue {
            return;
        }
        // q = (N/2) / m, bailing out on a remainder or a quotient over 128 bits
        let mut rem: u64 = 0;
        let mut q: u128 = 0;
        for &limb in limbs.iter().rev() {
            let cur = ((rem as u128) << 64) | limb as u128;
            if q >> 64 != 0 {
                return;
            }
            q = (q << 64) | cur / m as u128;
            rem = (cur % m as u128) as u64;
        }
        if rem != 0 {
            return;
        }
        let m_sq = (m as u128) * (m as u128);
        let Some(diff) = q.checked_sub(m_sq) else {
            return;
        };
        if diff % 3 != 0 {
            return;
        }
        if let Some(h) = is_perfect_square_u128(diff / 3) {
            if h < m as u128 {
                hits.push((m, h as u64));
            }
        }
    });
    hits.sort_unstable();
    hits.into_iter()
        .map(|(m, h)| (BigUint::from(m), BigUint::from(h)))
        .collect()
}

/// Little-endian 256-bit accumulator for the mid-size cubic scan: at T14
/// scale the medians are ~100 bits and every intermediate (cofactor, median
/// squared, offset discriminant) stays under 256 bits, so the hot loop can
/// avoid heap arithmetic entirely.
type U256 = [u64; 4];

fn u256_from(v: &BigUint) -> U256 {
    let mut out = [0u64; 4];
    for (i, limb) in v.to_u64_digits().into_iter().enumerate() {
        out[i] = limb;
    }
    out
}

fn u256_to_biguint(v: &U256) -> BigUint {
    BigUint::from_slice(
        &v.iter()
            .flat_map(|&l| [l as u32, (l >> 32) as u32])
            .collect::<Vec<u32>>(),
    )
}

/// Low 256 bits of the product; callers guarantee the true product fits.
fn u256_mul(a: &U256, b: &U256) -> U256 {
    let mut r = [0u64; 4];
    for i in 0..4 {
        if a[i] == 0 {
            continue;
        }
        let mut carry: u128 = 0;
        for j in 0..4 - i {
            let cur = r[i + j] as u128 + a[i] as u128 * b[j] as u128 + carry;
            r[i + j] = cur as u64;
            carry = cur >> 64;
        }
    }
    r
}

fn u256_square_u128(m: u128) -> U256 {
    let a = [m as u64, (m >> 64) as u64, 0, 0];
    u256_mul(&a, &a)
}

fn u256_lt(a: &U256, b: &U256) -> bool {
    for i in (0..4).rev() {
        if a[i] != b[i] {
            return a[i] < b[i];
        }
    }
    false
}

fn u256_sub(a: &U256, b: &U256) -> U256 {
    let mut r = [0u64; 4];
    let mut borrow = 0u64;
    for i in 0..4 {
        let (d, b1) = a[i].overflowing_sub(b[i]);
        let (d, b2) = d.overflowing_sub(borrow);
        r[i] = d;
        borrow = (b1 | b2) as u64;
    }
    r
}

fn u256_shr1(a: &U256) -> U256 {
    let mut r = [0u64; 4];
    for i in 0..4 {
        r[i] = a[i] >> 1;
        if i < 3 {
            r[i] |= a[i + 1] << 63;
        }
    }
    r
}

// 2^64 = 1 (mod 3), so the residue is the limb sum's
fn u256_mod3(a: &U256) -> u64 {
    a.iter().map(|&l| l % 3).sum::<u64>() % 3
}

fn u256_divmod_u64(a: &U256, d: u64) -> (U256, u64) {
    let mut q = [0u64; 4];
    let mut rem: u64 = 0;
    for i in (0..4).rev() {
        let cur = ((rem as u128) << 64) | a[i] as u128;
        q[i] = (cur / d as u128) as u64;
        rem = (cur % d as u128) as u64;
    }
    (q, rem)
}

const QR64_MASK: u64 = {
    let mut mask = 0u64;
    let mut i = 0u64;
    while i < 64 {
        mask |= 1 << ((i * i) % 64);
        i += 1;
    }
    mask
};

/// Fixed-width variant of the meet-in-the-middle scan, used whenever the
/// window and all intermediates provably fit the u128/U256 budget.  Returns
/// None when they do not and the caller must take the heap path.
fn median_offsets_u256(
    n_val: &BigUint,
    f: &Factorization,
    lo: &BigUint,
    hi: &BigUint,
) -> Option<Vec<(BigUint, BigUint)>> {
    const TABLE_LIMIT: u64 = 1 << 18;
    // medians fit u128 with room for the squared term, and the doubled
    // cofactor N/m <= N/lo stays under 256 bits
    if hi.bits() > 126 || n_val.bits() > lo.bits() + 254 {
        return None;
    }
    let residue = ((n_val >> 1u32) % 3u32).to_u64().unwrap();
    let factors = f.factors();
    let mut split = 0usize;
    let mut count: u64 = 1;
    while split < factors.len() {
        let next = count.saturating_mul(factors[split].1 as u64 + 1);
        if next > TABLE_LIMIT {
            break;
        }
        count = next;
        split += 1;
    }
    let (small, large) = factors.split_at(split);
    let small_product: BigUint = small.iter().map(|(p, e)| p.pow(*e)).product();
    let large_product: BigUint = large.iter().map(|(p, e)| p.pow(*e)).product();
    if small_product.bits() > 256 || large_product.bits() > 256 {
        return None;
    }
    let large: Vec<(u64, u32)> = large
        .iter()
        .map(|(p, e)| p.to_u64().map(|p| (p, *e)))
        .collect::<Option<_>>()?;

    let mut table: Vec<(BigUint, BigUint)> = vec![(BigUint::one(), small_product)];
    for (p, e) in small {
        let base = table.len();
        let mut pw = BigUint::one();
        for _ in 0..*e {
            pw *= p;
            for i in 0..base {
                let b = &table[i].0 * &pw;
                if &b <= hi {
                    let cof = &table[i].1 / &pw;
                    table.push((b, cof));
                }
            }
        }
    }
    table.sort_unstable_by(|x, y| x.0.cmp(&y.0));
    let mut classes: [Vec<(u128, U256)>; 3] = Default::default();
    for (b, cof) in &table {
        let r = (b % 3u32).to_usize().unwrap();
        classes[r].push((b.to_u128().unwrap(), u256_from(cof)));
    }

    let lo = lo.to_u128().unwrap();
    let hi = hi.to_u128().unwrap();
    let mut hits: Vec<(u128, u128)> = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        large: &[(u64, u32)],
        i: usize,
        a: u128,
        cof_a: U256,
        lo: u128,
        hi: u128,
        residue: u64,
        classes: &[Vec<(u128, U256)>; 3],
        hits: &mut Vec<(u128, u128)>,
    ) {
        if i == large.len() {
            let wanted: &[usize] = match (a % 3) as u64 {
                0 if residue == 0 => &[0, 1, 2],
                0 => return,
                // b = residue * a^{-1} (mod 3); 2 is its own inverse
                1 => match residue {
                    0 => &[0],
                    1 => &[1],
                    _ => &[2],
                },
                _ => match residue {
                    0 => &[0],
                    1 => &[2],
                    _ => &[1],
                },
            };
            let lo_b = lo.div_ceil(a);
            let hi_b = hi / a;
            for &ci in wanted {
                let class = &classes[ci];
                let start = class.partition_point(|&(b, _)| b < lo_b);
                let end = class.partition_point(|&(b, _)| b <= hi_b);
                for (b, cof_b) in &class[start..end] {
                    let twice_q = u256_mul(&cof_a, cof_b);
                    if twice_q[0] & 1 == 1 {
                        continue;
                    }
                    let q = u256_shr1(&twice_q);
                    let m = a * b;
                    let m_sq = u256_square_u128(m);
                    if u256_lt(&q, &m_sq) {
                        continue;
                    }
                    let diff = u256_sub(&q, &m_sq);
                    if u256_mod3(&diff) != 0 {
                        continue;
                    }
                    let (h_sq, _) = u256_divmod_u64(&diff, 3);
                    if QR64_MASK >> (h_sq[0] & 63) & 1 == 0 {
                        continue;
                    }
                    if let Some(h) = is_perfect_square(&u256_to_biguint(&h_sq)) {
                        if let Some(h) = h.to_u128() {
                            if h < m {
                                hits.push((m, h));
                            }
                        }
                    }
                }
            }
            return;
        }
        let (p, e) = large[i];
        let mut a = a;
        let mut cof_a = cof_a;
        for step in 0..=e {
            rec(large, i + 1, a, cof_a, lo, hi, residue, classes, hits);
            if step < e {
                match a.checked_mul(p as u128) {
                    Some(next) if next <= hi => a = next,
                    _ => break,
                }
                cof_a = u256_divmod_u64(&cof_a, p).0;
            }
        }
    }
    rec(
        &large,
        0,
        1,
        u256_from(&large_product),
        lo,
        hi,
        residue,
        &classes,
        &mut hits,
    );
    hits.sort_unstable();
    Some(
        hits.into_iter()
            .map(|(m, h)| (BigUint::from(m), BigUint::from(h)))
            .collect(),
    )
}

/// Arbitrary-precision cubic scan for windows beyond u64.  Meet-in-the-middle
/// over a split of the prime factors: divisors of the small-prime half are
/// tabulated once with their cofactors and bucketed by residue mod 3, so each
/// product over the large-prime half selects only the congruent part of its
/// window, and the cofactor N/m costs a multiplication instead of a division.
fn median_offsets_big(
    n_val: &BigUint,
    f: &Factorization,
    lo: &BigUint,
    hi: &BigUint,
) -> Vec<(BigUint, BigUint)> {
    const TABLE_LIMIT: u64 = 1 << 18;
    let residue = ((n_val >> 1u32) % 3u32).to_u32().unwrap();
    let factors = f.factors();
    let mut split = 0usize;
    let mut count: u64 = 1;
    while split < factors.len() {
        let next = count.saturating_mul(factors[split].1 as u64 + 1);
        if next > TABLE_LIMIT {
            break;
        }
        count = next;
        split += 1;
    }
    let (small, large) = factors.split_at(split);
    let small_product: BigUint = small.iter().map(|(p, e)| p.pow(*e)).product();
    let mut table: Vec<(BigUint, BigUint)> = vec![(BigUint::one(), small_product)];
    for (p, e) in small {
        let base = table.len();
        let mut pw = BigUint::one();
        for _ in 0..*e {
            pw *= p;
            for i in 0..base {
                let b = &table[i].0 * &pw;
                if &b <= hi {
                    let cof = &table[i].1 / &pw;
                    table.push((b, cof));
                }
            }
        }
    }
    table.sort_unstable_by(|x, y| x.0.cmp(&y.0));
    let mut classes: [Vec<(BigUint, BigUint)>; 3] = Default::default();
    for (b, cof) in table {
        let r = (&b % 3u32).to_usize().unwrap();
        classes[r].push((b, cof));
    }

    let large_product: BigUint = large.iter().map(|(p, e)| p.pow(*e)).product();
    let mut hits: Vec<(BigUint, BigUint)> = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        large: &[(BigUint, u32)],
        i: usize,
        a: &BigUint,
        cof_a: &BigUint,
        lo: &BigUint,
        hi: &BigUint,
        residue: u32,
        classes: &[Vec<(BigUint, BigUint)>; 3],
        hits: &mut Vec<(BigUint, BigUint)>,
    ) {
        if i == large.len() {
            let a_mod = (a % 3u32).to_u32().unwrap();
            let wanted: &[usize] = match a_mod {
                0 if residue == 0 => &[0, 1, 2],
                0 => return,
                // b = residue * a^{-1} (mod 3); 2 is its own inverse
                1 => match residue {
                    0 => &[0],
                    1 => &[1],
                    _ => &[2],
                },
                _ => match residue {
                    0 => &[0],
                    1 => &[2],
                    _ => &[1],
                },
            };
            let lo_b = (lo + a - 1u32) / a;
            let hi_b = hi / a;
            for &ci in wanted {
                let class = &classes[ci];
                let start = class.partition_point(|(b, _)| b < &lo_b);
                let end = class.partition_point(|(b, _)| b <= &hi_b);
                for (b, cof_b) in &class[start..end] {
                    let twice_q = cof_a * cof_b;
                    if twice_q.is_odd() {
                        continue;
                    }
                    let q = twice_q >> 1u32;
                    let m = a * b;
                    let m_sq = &m * &m;
                    if q < m_sq {
                        continue;
                    }
                    let diff = q - m_sq;
                    if !(&diff % 3u32).is_zero() {
                        continue;
                    }
                    if let Some(h) = is_perfect_square(&(diff / 3u32)) {
                        if h < m {
                            hits.push((m, h));
                        }
                    }
                }
            }
            return;
        }
        let (p, e) = &large[i];
        let mut a = a.clone();
        let mut cof_a = cof_a.clone();
        for step in 0..=*e {
            rec(large, i + 1, &a, &cof_a, lo, hi, residue, classes, hits);
            if step < *e {
                a *= p;
                if &a > hi {
                    break;
                }
                cof_a /= p;
            }
        }
    }
    rec(
        large,
        0,
        &BigUint::one(),
        &large_product,
        lo,
        hi,
        residue,
        &classes,
        &mut hits,
    );
    hits.sort_unstable_by(|x, y| x.0.cmp(&y.0));
    hits
}

fn decompose_even(
    n_val: &BigUint,
    n: u32,
    f: &Factorization,
    allow_equal: bool,
) -> Vec<Decomposition> {
    median_offsets(n_val, f, n)
        .into_iter()
        .filter(|(_, h)| allow_equal || !h.is_zero())
        .map(|(m, h)| Decomposition {
            x: &m - &h,
            y: &m + &h,
            sign: Sign::Plus,
            n,
            median: Some(m),
            offset: Some(h),
        })
        .collect()
}

/// All unordered pairs 0 < x <= y with x^n + y^n = N, ascending by x.
/// Equal parts (x = y) are reported only when `allow_equal` is set.
/// A supplied factorization must multiply to N (even N) or 2^n N (odd N).
pub fn decompose(
    n_val: &BigUint,
    n: u32,
    f: Option<&Factorization>,
    allow_equal: bool,
) -> Result<Vec<Decomposition>> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "exponent must be odd and >= 3, got {n}"
        )));
    }
    if n_val < &BigUint::from(2u32) {
        return Ok(Vec::new());
    }
    let mut out = if n_val.is_even() {
        let owned;
        let fact = match f {
            Some(fact) => {
                if fact.value() != *n_val {
                    return Err(Error::InvalidInput(
                        "supplied factorization does not multiply to N".into(),
                    ));
                }
                fact
            }
            None => {
                owned = factorize(n_val)?;
                &owned
            }
        };
        decompose_even(n_val, n, fact, allow_equal)
    } else {
        let target = n_val << n;
        let owned;
        let fact = match f {
            Some(fact) => {
                if fact.value() != target {
                    return Err(Error::InvalidInput(
                        "supplied factorization does not multiply to 2^n N".into(),
                    ));
                }
                fact
            }
            None => {
                owned = factorize(&target)?;
                &owned
            }
        };
        let mut halved = Vec::new();
        for d in decompose_even(&target, n, fact, allow_equal) {
            if d.x.is_even() && d.y.is_even() {
                let x = &d.x >> 1u32;
                let y = &d.y >> 1u32;
                let (median, offset) = if x.is_even() == y.is_even() {
                    (Some((&x + &y) >> 1u32), Some((&y - &x) >> 1u32))
                } else {
                    (None, None)
                };
                halved.push(Decomposition {
                    x,
                    y,
                    sign: Sign::Plus,
                    n,
                    median,
                    offset,
                });
            }
        }
        halved
    };
    out.sort_by(|a, b| a.x.cmp(&b.x));
    out.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    Ok(out)
}
