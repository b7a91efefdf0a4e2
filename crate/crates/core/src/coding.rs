//! The pairing function `<n, j> = 2^n (2j + 1) - 1` and its inverse.
//!
//! This is a bijection between pairs of naturals and naturals. It is used for
//! digraph slices and for the Gödel numbering of formulas.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Largest shift accepted by [`pair_big`]; beyond this the code would not fit
/// in memory in any useful way.
pub const MAX_SHIFT_BITS: u64 = 1 << 24;

/// `2^n (2j + 1) - 1`, or `None` on overflow.
pub fn pair(n: u64, j: u64) -> Option<u64> {
    if n >= 64 {
        return None;
    }
    let odd = j.checked_mul(2)?.checked_add(1)?;
    Some(odd.checked_mul(1u64 << n)? - 1)
}

/// Inverse of [`pair`]: every natural decodes to exactly one pair.
pub fn unpair(x: u64) -> (u64, u64) {
    let y = x as u128 + 1;
    let n = y.trailing_zeros();
    let odd = y >> n;
    (n as u64, ((odd - 1) / 2) as u64)
}

/// Arbitrary precision [`pair`]. Fails when `n` exceeds [`MAX_SHIFT_BITS`].
pub fn pair_big(n: &BigUint, j: &BigUint) -> Option<BigUint> {
    let shift = n.to_u64().filter(|s| *s <= MAX_SHIFT_BITS)?;
    let odd: BigUint = (j << 1u32) + 1u32;
    Some((odd << shift) - 1u32)
}

/// Arbitrary precision [`unpair`].
pub fn unpair_big(x: &BigUint) -> (BigUint, BigUint) {
    let y: BigUint = x + 1u32;
    let n = y.trailing_zeros().unwrap_or(0);
    let odd = y >> n;
    let j = if odd.is_zero() {
        BigUint::zero()
    } else {
        (odd - BigUint::one()) >> 1u32
    };
    (BigUint::from(n), j)
}
