//! Checked `i128` rationals used as a fast path for exact products.
//!
//! Any overflow poisons the value; callers redo the computation with
//! [`Rational`] when a poisoned value reaches the output. Both paths evaluate
//! the same expressions, so results agree exactly.
//!
//! Values are reduced lazily: only once a numerator or denominator passes
//! [`REDUCE_ABOVE`]. Below that bound any single product or sum fits in an
//! `i128`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::rational::Rational;

const REDUCE_ABOVE: u128 = 1 << 40;

#[derive(Clone, Copy, Debug)]
pub(crate) enum Small {
    /// Positive denominator, not necessarily in lowest terms.
    Val(i128, i128),
    Overflow,
}

impl Small {
    fn make(num: Option<i128>, den: Option<i128>) -> Small {
        let (Some(n), Some(d)) = (num, den) else {
            return Small::Overflow;
        };
        // gcd and negation are not total on i128::MIN
        if d <= 0 || n == i128::MIN {
            return Small::Overflow;
        }
        if n.unsigned_abs() > REDUCE_ABOVE || d.unsigned_abs() > REDUCE_ABOVE {
            let g = n.gcd(&d);
            return Small::Val(n / g, d / g);
        }
        Small::Val(n, d)
    }

    pub(crate) fn from_rational(r: &Rational) -> Option<Small> {
        let (n, d) = (r.numer().to_i128()?, r.denom().to_i128()?);
        (n != i128::MIN).then_some(Small::Val(n, d))
    }

    pub(crate) fn to_rational(self) -> Option<Rational> {
        match self {
            Small::Val(n, d) => Some(Rational::new(BigInt::from(n), BigInt::from(d))),
            Small::Overflow => None,
        }
    }

    #[cfg(test)]
    fn is_overflow(self) -> bool {
        matches!(self, Small::Overflow)
    }
}

impl Zero for Small {
    fn zero() -> Self {
        Small::Val(0, 1)
    }

    fn is_zero(&self) -> bool {
        matches!(self, Small::Val(0, _))
    }
}

impl Add for Small {
    type Output = Small;
    fn add(self, rhs: Small) -> Small {
        let (Small::Val(a, b), Small::Val(c, d)) = (self, rhs) else {
            return Small::Overflow;
        };
        if b == d {
            return Small::make(a.checked_add(c), Some(b));
        }
        let num = a
            .checked_mul(d)
            .and_then(|x| c.checked_mul(b).and_then(|y| x.checked_add(y)));
        Small::make(num, b.checked_mul(d))
    }
}

impl Neg for Small {
    type Output = Small;
    fn neg(self) -> Small {
        match self {
            Small::Val(n, d) => Small::make(n.checked_neg(), Some(d)),
            Small::Overflow => Small::Overflow,
        }
    }
}

impl Sub for Small {
    type Output = Small;
    fn sub(self, rhs: Small) -> Small {
        self + (-rhs)
    }
}

impl Mul for Small {
    type Output = Small;
    fn mul(self, rhs: Small) -> Small {
        let (Small::Val(a, b), Small::Val(c, d)) = (self, rhs) else {
            return Small::Overflow;
        };
        if a == 0 || c == 0 {
            return Small::zero();
        }
        Small::make(a.checked_mul(c), b.checked_mul(d))
    }
}

impl Div for Small {
    type Output = Small;
    fn div(self, rhs: Small) -> Small {
        match rhs {
            Small::Val(0, _) | Small::Overflow => Small::Overflow,
            Small::Val(n, d) if n < 0 => self * Small::make(d.checked_neg(), n.checked_neg()),
            Small::Val(n, d) => self * Small::Val(d, n),
        }
    }
}

/// Arbitrary-precision fraction with the same lazy reduction, used when
/// [`Small`] overflows.
#[derive(Clone, Debug)]
pub(crate) struct Wide {
    num: BigInt,
    den: BigInt,
}

const WIDE_REDUCE_BITS: u64 = 192;

impl Wide {
    fn make(num: BigInt, den: BigInt) -> Wide {
        if num.bits() > WIDE_REDUCE_BITS || den.bits() > WIDE_REDUCE_BITS {
            let g = num.gcd(&den);
            return Wide {
                num: num / &g,
                den: den / g,
            };
        }
        Wide { num, den }
    }

    pub(crate) fn from_rational(r: &Rational) -> Wide {
        Wide {
            num: r.numer().clone(),
            den: r.denom().clone(),
        }
    }

    pub(crate) fn into_rational(self) -> Rational {
        Rational::new(self.num, self.den)
    }
}

impl Zero for Wide {
    fn zero() -> Self {
        Wide {
            num: BigInt::zero(),
            den: BigInt::from(1),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl Add for Wide {
    type Output = Wide;
    fn add(self, rhs: Wide) -> Wide {
        if self.den == rhs.den {
            return Wide::make(self.num + rhs.num, self.den);
        }
        Wide::make(self.num * &rhs.den + rhs.num * &self.den, self.den * rhs.den)
    }
}

impl Neg for Wide {
    type Output = Wide;
    fn neg(self) -> Wide {
        Wide {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Sub for Wide {
    type Output = Wide;
    fn sub(self, rhs: Wide) -> Wide {
        self + (-rhs)
    }
}

impl Mul for Wide {
    type Output = Wide;
    fn mul(self, rhs: Wide) -> Wide {
        if self.num.is_zero() || rhs.num.is_zero() {
            return Wide::zero();
        }
        Wide::make(self.num * rhs.num, self.den * rhs.den)
    }
}

impl Div for Wide {
    type Output = Wide;
    fn div(self, rhs: Wide) -> Wide {
        assert!(!rhs.num.is_zero(), "division by zero");
        if rhs.num.sign() == num_bigint::Sign::Minus {
            Wide::make(-(self.num * rhs.den), self.den * -rhs.num)
        } else {
            Wide::make(self.num * rhs.den, self.den * rhs.num)
        }
    }
}
