//! Sumsets, product sets, quotient sets and multiplicative energies over
//! finite sets of 2^n-ons.
//!
//! Every construction ranges over ordered pairs (equal elements included) and
//! is computed by brute-force enumeration against a hash index of canonical
//! elements. Nothing here relies on associativity or commutativity, so these
//! routines serve as the reference for the bound pipeline.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::CdNumber;
use crate::error::Result;
use crate::rational::{count, Rational};
use crate::set::ElementSet;

/// Which quotient a count or construction refers to: `Left` is `a b^-1`,
/// `Right` is `b^-1 a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    /// `a b^-1` for `Left`, `b^-1 a` for `Right`.
    pub fn quotient(self, a: &CdNumber, b_inv: &CdNumber) -> CdNumber {
        match self {
            Side::Left => a * b_inv,
            Side::Right => b_inv * a,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// An element of the ratioset with its representation counts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatioProfile {
    pub x: CdNumber,
    /// `#{(a, b) in A^2 : a b^-1 = x}`
    pub ell: u64,
    /// `#{(a, b) in A^2 : b^-1 a = x}`
    pub r: u64,
}

impl RatioProfile {
    pub fn count(&self, side: Side) -> u64 {
        match side {
            Side::Left => self.ell,
            Side::Right => self.r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSets {
    /// `A A^-1`
    pub left: ElementSet,
    /// `A^-1 A`
    pub right: ElementSet,
    /// `A A^-1 ∩ A^-1 A`
    pub ratioset: ElementSet,
}

/// Representation counts over the full left and right quotient sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationCounts {
    pub left: BTreeMap<CdNumber, u64>,
    pub right: BTreeMap<CdNumber, u64>,
}

pub fn sumset(a: &ElementSet) -> ElementSet {
    let sums = a.iter().flat_map(|x| a.iter().map(move |y| x + y));
    ElementSet::new(a.level(), sums).expect("closed under level")
}

pub fn productset(a: &ElementSet) -> ElementSet {
    let products = a.iter().flat_map(|x| a.iter().map(move |y| x * y));
    ElementSet::new(a.level(), products).expect("closed under level")
}

pub fn inverse_set(a: &ElementSet) -> Result<ElementSet> {
    a.require_nonzero()?;
    let inverses = a.iter().map(CdNumber::inverse).collect::<Result<Vec<_>>>()?;
    ElementSet::new(a.level(), inverses)
}

fn inverses(a: &ElementSet) -> Result<Vec<CdNumber>> {
    a.require_nonzero()?;
    a.iter().map(CdNumber::inverse).collect()
}

pub fn representation_counts(a: &ElementSet) -> Result<RepresentationCounts> {
    let inv = inverses(a)?;
    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    for x in a {
        for b_inv in &inv {
            *left.entry(Side::Left.quotient(x, b_inv)).or_insert(0) += 1;
            *right.entry(Side::Right.quotient(x, b_inv)).or_insert(0) += 1;
        }
    }
    Ok(RepresentationCounts { left, right })
}

pub fn quotient_sets(a: &ElementSet) -> Result<QuotientSets> {
    let counts = representation_counts(a)?;
    let level = a.level();
    let ratioset = counts
        .left
        .keys()
        .filter(|x| counts.right.contains_key(*x))
        .cloned();
    Ok(QuotientSets {
        ratioset: ElementSet::new(level, ratioset)?,
        left: ElementSet::new(level, counts.left.into_keys())?,
        right: ElementSet::new(level, counts.right.into_keys())?,
    })
}

/// One profile per element of the ratioset, in canonical order.
pub fn ratio_profiles(a: &ElementSet) -> Result<Vec<RatioProfile>> {
    let counts = representation_counts(a)?;
    Ok(profiles_from_counts(&counts))
}

pub(crate) fn profiles_from_counts(counts: &RepresentationCounts) -> Vec<RatioProfile> {
    counts
        .left
        .iter()
        .filter_map(|(x, &ell)| {
            counts.right.get(x).map(|&r| RatioProfile {
                x: x.clone(),
                ell,
                r,
            })
        })
        .collect()
}

/// Interns elements so quadruple conditions become integer comparisons.
#[derive(Default)]
struct Index {
    ids: HashMap<CdNumber, usize>,
}

impl Index {
    fn id(&mut self, x: CdNumber) -> usize {
        let next = self.ids.len();
        *self.ids.entry(x).or_insert(next)
    }
}

fn count_equal(lhs: &[usize], rhs: &[usize]) -> u64 {
    let mut n = 0;
    for l in lhs {
        for r in rhs {
            if l == r {
                n += 1;
            }
        }
    }
    n
}

/// `E(A) = #{(a, b, c, d) in A^4 : c a = d b}` by quadruple enumeration.
pub fn energy(a: &ElementSet) -> u64 {
    let mut index = Index::default();
    let products: Vec<usize> = a
        .iter()
        .flat_map(|c| a.iter().map(move |x| c * x))
        .map(|p| index.id(p))
        .collect();
    count_equal(&products, &products)
}

/// `E'(A) = #{(a, b, c, d) in A^4 : a b^-1 = c^-1 d}` by quadruple enumeration.
pub fn energy_prime(a: &ElementSet) -> Result<u64> {
    let inv = inverses(a)?;
    let mut index = Index::default();
    let mut left = Vec::with_capacity(a.len() * a.len());
    let mut right = Vec::with_capacity(a.len() * a.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in a.iter().enumerate() {
            // a b^-1 with (a, b) = (x, y); c^-1 d with (c, d) = (x, y)
            left.push(index.id(x * &inv[j]));
            right.push(index.id(&inv[i] * y));
        }
    }
    Ok(count_equal(&left, &right))
}

/// Outcome of testing `Σ ℓr >= min(Σ ℓ², Σ r²)` over the ratioset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HypothesisCheck {
    pub holds: bool,
    /// Side attaining the minimum; `Left` on ties.
    pub min_side: Side,
    pub sum_ell_r: u64,
    pub sum_ell_sq: u64,
    pub sum_r_sq: u64,
}

pub fn hypothesis_check(profiles: &[RatioProfile]) -> HypothesisCheck {
    let sum_ell_r = profiles.iter().map(|p| p.ell * p.r).sum();
    let sum_ell_sq = profiles.iter().map(|p| p.ell * p.ell).sum();
    let sum_r_sq: u64 = profiles.iter().map(|p| p.r * p.r).sum();
    let (min_side, min) = if sum_ell_sq <= sum_r_sq {
        (Side::Left, sum_ell_sq)
    } else {
        (Side::Right, sum_r_sq)
    };
    HypothesisCheck {
        holds: sum_ell_r >= min,
        min_side,
        sum_ell_r,
        sum_ell_sq,
        sum_r_sq,
    }
}

/// Compares `Σ_{x in A/A} ℓ(x)` against `|A|² |A/A| / |A A^-1|`, which
/// holds only when representations spread evenly. Reported, never assumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllSumIdentity {
    pub actual: u64,
    pub claimed: Rational,
    pub holds: bool,
}

pub fn ell_sum_identity(a: &ElementSet) -> Result<EllSumIdentity> {
    let counts = representation_counts(a)?;
    let profiles = profiles_from_counts(&counts);
    let actual: u64 = profiles.iter().map(|p| p.ell).sum();
    let n = a.len() as u64;
    let claimed = count(n * n * profiles.len() as u64) / count(counts.left.len() as u64);
    Ok(EllSumIdentity {
        holds: count(actual) == claimed,
        actual,
        claimed,
    })
}

/// Both sides of the `E'` lower bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnergyBoundReport {
    pub hypothesis: HypothesisCheck,
    pub lhs: u64,
    /// `|A|^4 |A/A| / min(|A A^-1|, |A^-1 A|)^2`
    pub general_rhs: Rational,
    /// `None` when the hypothesis fails: no claim is made.
    pub general_satisfied: Option<bool>,
    /// `|A|^4 / |AA|`, only for inverse-closed sets.
    pub inverse_closed_rhs: Option<Rational>,
    pub inverse_closed_satisfied: Option<bool>,
}

impl EnergyBoundReport {
    pub fn applicable(&self) -> bool {
        self.hypothesis.holds
    }
}

pub fn energy_lower_bound(a: &ElementSet) -> Result<EnergyBoundReport> {
    let counts = representation_counts(a)?;
    let profiles = profiles_from_counts(&counts);
    let hypothesis = hypothesis_check(&profiles);
    let lhs = hypothesis.sum_ell_r;
    let n4 = (a.len() as u64).pow(4);
    let min_quot = counts.left.len().min(counts.right.len()) as u64;
    let general_rhs = count(n4 * profiles.len() as u64) / count(min_quot * min_quot);
    let applicable = hypothesis.holds;
    let general_satisfied = applicable.then(|| count(lhs) >= general_rhs);
    let (inverse_closed_rhs, inverse_closed_satisfied) = if a.is_inverse_closed() {
        let rhs = count(n4) / count(productset(a).len() as u64);
        let ok = applicable.then(|| count(lhs) >= rhs);
        (Some(rhs), ok)
    } else {
        (None, None)
    };
    Ok(EnergyBoundReport {
        hypothesis,
        lhs,
        general_rhs,
        general_satisfied,
        inverse_closed_rhs,
        inverse_closed_satisfied,
    })
}
