//! Signed-cube decompositions x^3 - y^3 = N and cabtaxi order counting.
//!
//! The difference analogue of the median method: for each divisor d = x - y
//! of N with d^3 <= 4N, the discriminant 12 N/d - 3 d^2 must be a perfect
//! square congruent to 3d mod 6.

use crate::arith::{factorize, integer_nth_root, is_perfect_square, Factorization};
use crate::cubeform::{decompose, Decomposition, Sign};
use crate::taxisearch::TaxicabRecord;
use crate::{Error, Result};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// All pairs x > y > 0 with x^3 - y^3 = N, ascending by y.
pub fn decompose_difference(
    n_val: &BigUint,
    f: Option<&Factorization>,
) -> Result<Vec<Decomposition>> {
    if n_val.is_zero() {
        return Err(Error::InvalidInput("N must be positive".into()));
    }
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
    let d_max = integer_nth_root(&(n_val << 2u32), 3);
    let mut out = Vec::new();
    for d in fact.divisors_in_range(&BigUint::one(), &d_max) {
        let quotient = n_val / &d; // exact: d divides N
        let d_sq = &d * &d;
        let twelve_q = quotient * 12u32;
        let three_d_sq = d_sq * 3u32;
        if twelve_q < three_d_sq {
            continue;
        }
        let Some(s) = is_perfect_square(&(twelve_q - three_d_sq)) else {
            continue;
        };
        let three_d = &d * 3u32;
        if s <= three_d || !((&s - &three_d) % 6u32).is_zero() {
            continue;
        }
        let y = (s - three_d) / 6u32;
        out.push(Decomposition {
            x: &y + &d,
            y,
            sign: Sign::Minus,
            n: 3,
            median: None,
            offset: None,
        });
    }
    out.sort_by(|a, b| a.y.cmp(&b.y));
    Ok(out)
}

/// Distinct-part sum representations plus difference representations.
pub fn cabtaxi_order(n_val: &BigUint, f: Option<&Factorization>) -> Result<usize> {
    let sums = if n_val.is_even() {
        decompose(n_val, 3, f, false)?
    } else {
        // decompose wants the factorization of 2^3 N in the odd case
        let owned = f.map(|fact| fact.merge(&factorize(&BigUint::from(8u32)).unwrap()));
        decompose(n_val, 3, owned.as_ref(), false)?
    };
    let diffs = decompose_difference(n_val, f)?;
    Ok(sums.len() + diffs.len())
}

/// Orders of T and 125 T against the k+2 / k+4 cabtaxi observations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiveCubedReport {
    pub order_of_t: usize,
    pub order_of_125t: usize,
    pub claim_k_plus_2: bool,
    pub claim_k_plus_4: bool,
}

pub fn five_cubed_check(record: &TaxicabRecord) -> Result<FiveCubedReport> {
    record.validate()?;
    if record.power != 3 {
        return Err(Error::InvalidInput("five-cubed check is cubic only".into()));
    }
    let order_of_t = cabtaxi_order(&record.value, Some(&record.factorization))?;
    let five_cubed = factorize(&BigUint::from(125u32))?;
    let scaled = &record.value * 125u32;
    let scaled_f = record.factorization.merge(&five_cubed);
    let order_of_125t = cabtaxi_order(&scaled, Some(&scaled_f))?;
    Ok(FiveCubedReport {
        order_of_t,
        order_of_125t,
        claim_k_plus_2: order_of_t >= record.ways + 2,
        claim_k_plus_4: order_of_125t >= record.ways + 4,
    })
}
