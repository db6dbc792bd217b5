//! Exact arithmetic on the Conway-Smith 2^n-on tower, levels 0 through 4.
//!
//! A level-`n` number has `2^n` rational coordinates laid out as a recursive
//! pair `(a, b)`: the low half holds the coordinates of `a`, the high half
//! those of `b`, each half ordered the same way one level down. Level 3 is
//! the octonions and level 4 the 16-ons.
//!
//! Products use the Conway-Smith doubling rule
//!
//! ```text
//! (a,b)(c,d) = ( ac - conj(b conj(d)),
//!                conj(conj(b) conj(c))
//!                  + conj(conj(b) conj(conj(a) conj(conj(b^-1) conj(d)))) )
//! ```
//!
//! with `(a,0)(c,d) = (ac, conj(a) d)` when `b = 0`. For levels up to three
//! this reproduces a classical Cayley-Dickson algebra; at level four it gives
//! a left semialgebra with a multiplicative norm, which is only right
//! distributive over niners.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use arrayvec::ArrayVec;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, Rational};
use crate::small::{Small, Wide};

/// Highest supported level (the 16-ons).
pub const MAX_LEVEL: u8 = 4;
pub const OCTONION_LEVEL: u8 = 3;
pub const SIXTEEN_ON_LEVEL: u8 = 4;
/// Niners are 16-ons whose coordinates past this count are zero.
pub const NINER_COORDS: usize = 9;

/// An element of the 2^n-on tower.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CdNumber {
    level: u8,
    coords: Vec<Rational>,
}

/// Sign pattern of a coordinate vector. `HasZeroCoord` wins over `Mixed`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignClass {
    AllPositive,
    AllNegative,
    Mixed,
    HasZeroCoord,
}

impl SignClass {
    /// Two classes describe the same privileged orthant.
    pub fn same_orthant(self, other: SignClass) -> bool {
        matches!(
            (self, other),
            (SignClass::AllPositive, SignClass::AllPositive)
                | (SignClass::AllNegative, SignClass::AllNegative)
        )
    }

    pub fn is_privileged(self) -> bool {
        matches!(self, SignClass::AllPositive | SignClass::AllNegative)
    }
}

fn check_level(level: u8) -> Result<()> {
    if level > MAX_LEVEL {
        Err(Error::LevelOutOfRange(level))
    } else {
        Ok(())
    }
}

pub fn dim(level: u8) -> usize {
    1usize << level
}

impl CdNumber {
    pub fn new(level: u8, coords: Vec<Rational>) -> Result<Self> {
        check_level(level)?;
        if coords.len() != dim(level) {
            return Err(Error::CoordCount {
                level,
                expected: dim(level),
                got: coords.len(),
            });
        }
        Ok(CdNumber { level, coords })
    }

    /// Integer coordinates; convenient in tests and examples.
    pub fn from_ints(level: u8, coords: &[i64]) -> Result<Self> {
        Self::new(level, coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(level: u8) -> Self {
        assert!(level <= MAX_LEVEL, "level {level} out of range");
        CdNumber {
            level,
            coords: vec![Rational::zero(); dim(level)],
        }
    }

    pub fn real(level: u8, value: Rational) -> Self {
        let mut x = Self::zero(level);
        x.coords[0] = value;
        x
    }

    pub fn one(level: u8) -> Self {
        Self::real(level, int(1))
    }

    /// The basis unit `e_i`.
    pub fn basis(level: u8, index: usize) -> Self {
        let mut x = Self::zero(level);
        assert!(index < x.coords.len(), "basis index {index} out of range");
        x.coords[index] = int(1);
        x
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Lower and upper halves as numbers one level down.
    pub fn split(&self) -> Result<(CdNumber, CdNumber)> {
        if self.level == 0 {
            return Err(Error::WrongLevel {
                expected: 1,
                got: 0,
            });
        }
        let h = self.dim() / 2;
        Ok((
            CdNumber {
                level: self.level - 1,
                coords: self.coords[..h].to_vec(),
            },
            CdNumber {
                level: self.level - 1,
                coords: self.coords[h..].to_vec(),
            },
        ))
    }

    /// Inverse of [`split`](Self::split).
    pub fn join(a: &CdNumber, b: &CdNumber) -> Result<CdNumber> {
        same_level(a, b)?;
        let mut coords = a.coords.clone();
        coords.extend_from_slice(&b.coords);
        CdNumber::new(a.level + 1, coords)
    }

    pub fn add(&self, other: &CdNumber) -> Result<CdNumber> {
        same_level(self, other)?;
        Ok(CdNumber {
            level: self.level,
            coords: add_slices(&self.coords, &other.coords).into_iter().collect(),
        })
    }

    pub fn sub(&self, other: &CdNumber) -> Result<CdNumber> {
        same_level(self, other)?;
        Ok(CdNumber {
            level: self.level,
            coords: sub_slices(&self.coords, &other.coords).into_iter().collect(),
        })
    }

    pub fn scale(&self, s: &Rational) -> CdNumber {
        CdNumber {
            level: self.level,
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    /// Level 0 is fixed; above that `(a, b)` maps to `(conj(a), -b)`.
    pub fn conjugate(&self) -> CdNumber {
        CdNumber {
            level: self.level,
            coords: conj(&self.coords).into_iter().collect(),
        }
    }

    /// Sum of squared coordinates; equals the real part of `x * conj(x)`.
    pub fn norm_sq(&self) -> Rational {
        norm_sq(&self.coords)
    }

    /// `conj(x) / |x|^2`.
    pub fn inverse(&self) -> Result<CdNumber> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(CdNumber {
            level: self.level,
            coords: inv(&self.coords).into_iter().collect(),
        })
    }

    /// The general doubling product, recursive at every level.
    pub fn mul_conway_smith(&self, other: &CdNumber) -> Result<CdNumber> {
        same_level(self, other)?;
        Ok(CdNumber {
            level: self.level,
            coords: exact(&self.coords, &other.coords, mul_general, mul_general),
        })
    }

    /// The level-4 shortcut `(a,b)(c,d) = (ac - d conj(b), cb + (conj(a) b^-1)(bd))`
    /// over octonion halves, with the same `b = 0` branch as the general rule.
    pub fn mul_16on_simplified(&self, other: &CdNumber) -> Result<CdNumber> {
        same_level(self, other)?;
        if self.level != SIXTEEN_ON_LEVEL {
            return Err(Error::WrongLevel {
                expected: SIXTEEN_ON_LEVEL,
                got: self.level,
            });
        }
        Ok(CdNumber {
            level: self.level,
            coords: exact(&self.coords, &other.coords, mul_simplified, mul_simplified),
        })
    }

    /// True iff coordinates 9..15 vanish. Only meaningful for 16-ons.
    pub fn is_niner(&self) -> Result<bool> {
        if self.level != SIXTEEN_ON_LEVEL {
            return Err(Error::WrongLevel {
                expected: SIXTEEN_ON_LEVEL,
                got: self.level,
            });
        }
        Ok(self.coords[NINER_COORDS..].iter().all(Zero::is_zero))
    }

    /// Sign class of the full coordinate vector.
    pub fn sign_class(&self) -> SignClass {
        sign_class_of(self.coords.iter())
    }

    /// Sign class restricted to the coordinates selected by `support`.
    pub fn sign_class_on(&self, support: &[bool]) -> SignClass {
        sign_class_of(
            self.coords
                .iter()
                .zip(support)
                .filter(|(_, &keep)| keep)
                .map(|(c, _)| c),
        )
    }

    /// Pads with zero upper halves up to `target_level`.
    pub fn embed(&self, target_level: u8) -> Result<CdNumber> {
        check_level(target_level)?;
        if target_level < self.level {
            return Err(Error::EmbedDown {
                from: self.level,
                to: target_level,
            });
        }
        let mut coords = self.coords.clone();
        coords.resize(dim(target_level), Rational::zero());
        Ok(CdNumber {
            level: target_level,
            coords,
        })
    }
}

fn same_level(x: &CdNumber, y: &CdNumber) -> Result<()> {
    if x.level == y.level {
        Ok(())
    } else {
        Err(Error::LevelMismatch {
            left: x.level,
            right: y.level,
        })
    }
}

fn sign_class_of<'a>(coords: impl Iterator<Item = &'a Rational>) -> SignClass {
    let (mut pos, mut neg) = (false, false);
    for c in coords {
        if c.is_zero() {
            return SignClass::HasZeroCoord;
        }
        if c.is_positive() {
            pos = true;
        } else {
            neg = true;
        }
    }
    match (pos, neg) {
        (true, false) => SignClass::AllPositive,
        (false, true) => SignClass::AllNegative,
        (true, true) => SignClass::Mixed,
        // an empty selection has no coordinates of either sign
        (false, false) => SignClass::HasZeroCoord,
    }
}

/// Field operations shared by [`Rational`] and the checked fast path.
trait Scalar:
    Clone
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + Zero
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>
{
}

/// Coordinates of one operand; at most 16.
type Buf<S> = ArrayVec<S, 16>;

fn is_zero_slice<S: Scalar>(x: &[S]) -> bool {
    x.iter().all(Zero::is_zero)
}

fn add_slices<S: Scalar>(x: &[S], y: &[S]) -> Buf<S> {
    x.iter().zip(y).map(|(a, b)| a.clone() + b.clone()).collect()
}

fn sub_slices<S: Scalar>(x: &[S], y: &[S]) -> Buf<S> {
    x.iter().zip(y).map(|(a, b)| a.clone() - b.clone()).collect()
}

fn conj<S: Scalar>(x: &[S]) -> Buf<S> {
    if x.len() == 1 {
        return x.iter().cloned().collect();
    }
    let (a, b) = x.split_at(x.len() / 2);
    let mut out = conj(a);
    out.extend(b.iter().map(|v| -v.clone()));
    out
}

fn norm_sq<S: Scalar>(x: &[S]) -> S {
    x.iter().fold(S::zero(), |acc, c| acc + c.clone() * c.clone())
}

fn inv<S: Scalar>(x: &[S]) -> Buf<S> {
    let n = norm_sq(x);
    conj(x).into_iter().map(|c| c / n.clone()).collect()
}

// Transcribed term by term from the doubling rule; do not simplify.
fn mul_general<S: Scalar>(x: &[S], y: &[S]) -> Buf<S> {
    if x.len() == 1 {
        let mut out = Buf::new();
        out.push(x[0].clone() * y[0].clone());
        return out;
    }
    let h = x.len() / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);

    if is_zero_slice(b) {
        let mut out = mul_general(a, c);
        out.extend(mul_general(&conj(a), d));
        return out;
    }

    // ac - conj(b conj(d))
    let first = sub_slices(&mul_general(a, c), &conj(&mul_general(b, &conj(d))));

    // conj(conj(b) conj(c))
    let s1 = conj(&mul_general(&conj(b), &conj(c)));
    // conj(conj(b) conj(conj(a) conj(conj(b^-1) conj(d))))
    let innermost = conj(&mul_general(&conj(&inv(b)), &conj(d)));
    let middle = conj(&mul_general(&conj(a), &innermost));
    let s2 = conj(&mul_general(&conj(b), &middle));

    let mut out = first;
    out.extend(add_slices(&s1, &s2));
    out
}

// (a,b)(c,d) = (ac - d conj(b), cb + (conj(a) b^-1)(bd)) on level-4 halves.
fn mul_simplified<S: Scalar>(x: &[S], y: &[S]) -> Buf<S> {
    let h = x.len() / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let mut out;
    if is_zero_slice(b) {
        out = mul_general(a, c);
        out.extend(mul_general(&conj(a), d));
    } else {
        out = sub_slices(&mul_general(a, c), &mul_general(d, &conj(b)));
        let left = mul_general(c, b);
        let right = mul_general(&mul_general(&conj(a), &inv(b)), &mul_general(b, d));
        out.extend(add_slices(&left, &right));
    }
    out
}

/// Evaluates `fast` on checked machine rationals and repeats the same
/// computation with `slow` when anything overflowed.
fn exact(
    x: &[Rational],
    y: &[Rational],
    fast: fn(&[Small], &[Small]) -> Buf<Small>,
    slow: fn(&[Wide], &[Wide]) -> Buf<Wide>,
) -> Vec<Rational> {
    let to_small = |v: &[Rational]| v.iter().map(Small::from_rational).collect::<Option<Vec<_>>>();
    if let (Some(sx), Some(sy)) = (to_small(x), to_small(y)) {
        if let Some(out) = fast(&sx, &sy).into_iter().map(Small::to_rational).collect() {
            return out;
        }
    }
    let to_wide = |v: &[Rational]| v.iter().map(Wide::from_rational).collect::<Vec<_>>();
    slow(&to_wide(x), &to_wide(y))
        .into_iter()
        .map(Wide::into_rational)
        .collect()
}

fn expect_same(x: &CdNumber, y: &CdNumber) {
    if x.level != y.level {
        panic!("level mismatch: {} vs {}", x.level, y.level);
    }
}

// Operator forms panic on level mismatch; use the inherent methods for a
// `Result`.
impl Add for &CdNumber {
    type Output = CdNumber;
    fn add(self, rhs: &CdNumber) -> CdNumber {
        expect_same(self, rhs);
        CdNumber::add(self, rhs).unwrap()
    }
}

impl Sub for &CdNumber {
    type Output = CdNumber;
    fn sub(self, rhs: &CdNumber) -> CdNumber {
        expect_same(self, rhs);
        CdNumber::sub(self, rhs).unwrap()
    }
}

impl Mul for &CdNumber {
    type Output = CdNumber;
    fn mul(self, rhs: &CdNumber) -> CdNumber {
        expect_same(self, rhs);
        self.mul_conway_smith(rhs).unwrap()
    }
}

impl Neg for &CdNumber {
    type Output = CdNumber;
    fn neg(self) -> CdNumber {
        CdNumber {
            level: self.level,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

/// `L<level> [c0, c1, ...]` with canonical rational coordinates.
impl fmt::Display for CdNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{} [", self.level)?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&format_rational(c))?;
        }
        f.write_str("]")
    }
}

impl FromStr for CdNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed element `{s}`"));
        let rest = s.trim().strip_prefix('L').ok_or_else(bad)?;
        let (level, rest) = rest.split_once(' ').ok_or_else(bad)?;
        let level: u8 = level.parse().map_err(|_| bad())?;
        let body = rest
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let coords = body
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        CdNumber::new(level, coords)
    }
}
