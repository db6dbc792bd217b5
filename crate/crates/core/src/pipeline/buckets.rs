use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rational::{ceil_log2, count, floor_log2};
use crate::setops::{RatioProfile, Side};

use super::{ChainStage, Relation};

/// Ratioset profiles grouped by the dyadic size of their primary count.
///
/// The primary count is `ℓ` when `primary == Left` and `r` otherwise. Only
/// profiles whose primary count dominates the secondary one are bucketed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicBuckets {
    /// Count used for bucketing after the orientation test.
    pub primary: Side,
    /// The orientation test flipped the requested primary count.
    pub swapped: bool,
    pub buckets: BTreeMap<u32, Vec<RatioProfile>>,
    /// `Σ primary(x)²` per bucket.
    pub weights: BTreeMap<u32, u64>,
    /// Heaviest bucket, smallest index on ties.
    pub chosen_i: u32,
    /// `E'(A) = Σ ℓ r` over all profiles.
    pub energy_prime: u64,
    /// The two-sided pigeonhole estimate for the chosen bucket.
    pub audit: [ChainStage; 2],
}

impl DyadicBuckets {
    /// The set R: profiles in the chosen bucket, in canonical order.
    pub fn r_profiles(&self) -> &[RatioProfile] {
        &self.buckets[&self.chosen_i]
    }

    pub fn r_size(&self) -> usize {
        self.r_profiles().len()
    }

    pub fn primary_count(&self, p: &RatioProfile) -> u64 {
        p.count(self.primary)
    }
}

/// `ceil(log2 |A|)`, clamped to 1 so the `|A| = 1` case stays finite.
pub fn log_factor(set_size: usize) -> u64 {
    u64::from(ceil_log2(set_size).max(1))
}

/// Buckets profiles by `2^I <= ℓ(x) < 2^(I+1)` among those with `ℓ(x) >= r(x)`
/// and picks the heaviest bucket.
///
/// `requested` names the count playing the role of `ℓ`. If
/// `Σ_{ℓ>=r} ℓr < Σ_{ℓ<=r} ℓr` the roles of the two counts are swapped.
pub fn select_r(
    profiles: &[RatioProfile],
    set_size: usize,
    requested: Side,
) -> Result<DyadicBuckets> {
    if profiles.is_empty() {
        return Err(Error::EmptySet);
    }
    let dominant = |side: Side| -> u64 {
        profiles
            .iter()
            .filter(|p| p.count(side) >= p.count(side.other()))
            .map(|p| p.ell * p.r)
            .sum()
    };
    let swapped = dominant(requested) < dominant(requested.other());
    let primary = if swapped { requested.other() } else { requested };

    let mut buckets: BTreeMap<u32, Vec<RatioProfile>> = BTreeMap::new();
    for p in profiles {
        let (main, other) = (p.count(primary), p.count(primary.other()));
        if main >= other && main > 0 {
            buckets.entry(floor_log2(main)).or_default().push(p.clone());
        }
    }
    let weights: BTreeMap<u32, u64> = buckets
        .iter()
        .map(|(&i, ps)| (i, ps.iter().map(|p| p.count(primary).pow(2)).sum()))
        .collect();
    let chosen_i = weights
        .iter()
        .fold(None, |best: Option<(u32, u64)>, (&i, &w)| match best {
            Some((_, bw)) if bw >= w => best,
            _ => Some((i, w)),
        })
        .map(|(i, _)| i)
        .ok_or(Error::DegenerateR { size: 0 })?;

    let energy_prime: u64 = profiles.iter().map(|p| p.ell * p.r).sum();
    let weight = count(weights[&chosen_i]);
    let r_size = buckets[&chosen_i].len() as u64;
    let log = log_factor(set_size);
    let audit = [
        ChainStage::new(
            "pigeonhole_lower",
            "sum_{x in R} l(x)^2 >= E'(A) / (2 ceil(log2|A|))",
            weight.clone(),
            Relation::Ge,
            count(energy_prime) / count(2 * log),
            true,
        ),
        ChainStage::new(
            "pigeonhole_upper",
            "sum_{x in R} l(x)^2 < |R| 2^(2I+2)",
            weight,
            Relation::Lt,
            count(r_size << (2 * chosen_i + 2)),
            true,
        ),
    ];
    Ok(DyadicBuckets {
        primary,
        swapped,
        buckets,
        weights,
        chosen_i,
        energy_prime,
        audit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CdNumber;
    use crate::rational::int;

    fn profile(v: i64, ell: u64, r: u64) -> RatioProfile {
        RatioProfile {
            x: CdNumber::real(4, int(v)),
            ell,
            r,
        }
    }

    #[test]
    fn all_ones_is_one_bucket() {
        let ps: Vec<_> = (1..=5).map(|v| profile(v, 1, 1)).collect();
        let b = select_r(&ps, 3, Side::Left).unwrap();
        assert_eq!(b.chosen_i, 0);
        assert_eq!(b.r_size(), 5);
        assert_eq!(b.buckets.len(), 1);
    }

    #[test]
    fn one_two_picks_the_top_bucket() {
        // A = {1, 2}: ℓ(1/2) = 1, ℓ(1) = 2, ℓ(2) = 1
        let ps = vec![profile(1, 2, 2), profile(2, 1, 1), profile(3, 1, 1)];
        let b = select_r(&ps, 2, Side::Left).unwrap();
        assert_eq!(b.weights[&0], 2);
        assert_eq!(b.weights[&1], 4);
        assert_eq!(b.chosen_i, 1);
        assert_eq!(b.r_size(), 1);
        assert!(b.audit.iter().all(|s| s.holds));
    }

    #[test]
    fn ties_prefer_smaller_index() {
        // bucket 0 weight 4 (four ones), bucket 1 weight 4 (one two)
        let mut ps: Vec<_> = (1..=4).map(|v| profile(v, 1, 1)).collect();
        ps.push(profile(9, 2, 2));
        let b = select_r(&ps, 4, Side::Left).unwrap();
        assert_eq!(b.chosen_i, 0);
    }

    #[test]
    fn orientation_swaps_when_right_dominates() {
        let ps = vec![profile(1, 1, 3), profile(2, 1, 2), profile(3, 2, 1)];
        let b = select_r(&ps, 3, Side::Left).unwrap();
        // Σ_{ℓ>=r} ℓr = 2 < Σ_{ℓ<=r} ℓr = 5
        assert!(b.swapped);
        assert_eq!(b.primary, Side::Right);
        let members: Vec<u64> = b.buckets.values().flatten().map(|p| p.r).collect();
        assert_eq!(members.len(), 2);
    }

    #[test]
    fn each_dominant_profile_lands_in_one_bucket() {
        let ps: Vec<_> = (1..20).map(|v| profile(v, v as u64, (v as u64) % 7)).collect();
        let b = select_r(&ps, 20, Side::Left).unwrap();
        let total: usize = b.buckets.values().map(Vec::len).sum();
        let dominant = ps.iter().filter(|p| p.count(b.primary) >= p.count(b.primary.other())).count();
        assert_eq!(total, dominant);
        for (i, members) in &b.buckets {
            for p in members {
                let c = p.count(b.primary);
                assert!(1u64 << i <= c && c < 1u64 << (i + 1));
            }
        }
    }

    #[test]
    fn empty_profiles_rejected() {
        assert_eq!(select_r(&[], 3, Side::Left), Err(Error::EmptySet));
    }
}
