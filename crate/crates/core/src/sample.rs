//! Seeded random elements with bounded rational coordinates.

use num_bigint::BigInt;
use rand::Rng;

use crate::algebra::{dim, CdNumber, NINER_COORDS, SIXTEEN_ON_LEVEL};
use crate::rational::Rational;

/// `p/q` with `|p| <= bound`, `1 <= q <= bound`.
pub fn bounded_rational<R: Rng + ?Sized>(rng: &mut R, bound: u32) -> Rational {
    let b = i64::from(bound.max(1));
    Rational::new(
        BigInt::from(rng.gen_range(-b..=b)),
        BigInt::from(rng.gen_range(1..=b)),
    )
}

/// `p/q` with `1 <= p, q <= bound`.
pub fn positive_rational<R: Rng + ?Sized>(rng: &mut R, bound: u32) -> Rational {
    let b = i64::from(bound.max(1));
    Rational::new(
        BigInt::from(rng.gen_range(1..=b)),
        BigInt::from(rng.gen_range(1..=b)),
    )
}

pub fn element<R: Rng + ?Sized>(rng: &mut R, level: u8, bound: u32) -> CdNumber {
    let coords = (0..dim(level)).map(|_| bounded_rational(rng, bound)).collect();
    CdNumber::new(level, coords).expect("level checked by caller")
}

pub fn nonzero_element<R: Rng + ?Sized>(rng: &mut R, level: u8, bound: u32) -> CdNumber {
    loop {
        let x = element(rng, level, bound);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A niner with coordinates past `active` forced to zero.
pub fn niner<R: Rng + ?Sized>(rng: &mut R, bound: u32, active: usize) -> CdNumber {
    let active = active.clamp(1, NINER_COORDS);
    let coords = (0..dim(SIXTEEN_ON_LEVEL))
        .map(|i| {
            if i < active {
                bounded_rational(rng, bound)
            } else {
                Rational::default()
            }
        })
        .collect();
    CdNumber::new(SIXTEEN_ON_LEVEL, coords).unwrap()
}

pub fn nonzero_niner<R: Rng + ?Sized>(rng: &mut R, bound: u32, active: usize) -> CdNumber {
    loop {
        let x = niner(rng, bound, active);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A niner strictly positive on its first `active` coordinates.
pub fn positive_niner<R: Rng + ?Sized>(rng: &mut R, bound: u32, active: usize) -> CdNumber {
    let active = active.clamp(1, NINER_COORDS);
    let coords = (0..dim(SIXTEEN_ON_LEVEL))
        .map(|i| {
            if i < active {
                positive_rational(rng, bound)
            } else {
                Rational::default()
            }
        })
        .collect();
    CdNumber::new(SIXTEEN_ON_LEVEL, coords).unwrap()
}
