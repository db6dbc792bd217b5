use std::collections::BTreeSet;

use crate::algebra::{CdNumber, OCTONION_LEVEL};
use crate::error::{Error, Result};
use crate::rational::{count, Rational};
use crate::set::ElementSet;
use crate::setops::{
    self, ell_sum_identity, hypothesis_check, EllSumIdentity, HypothesisCheck, RatioProfile, Side,
};

use super::{
    build_sx, log_factor, phi_map, select_r, verify_ball_lemma, BallCheck, ChainStage, CountBasis,
    DyadicBuckets, EvalOptions, Mode, Relation,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    Certified,
    Uncertified(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SxSummary {
    pub x: CdNumber,
    pub phi_x: CdNumber,
    pub size: u64,
    /// `reps(x) * reps(φ(x))`
    pub expected: u64,
    pub solver_hits: usize,
    pub ball: BallCheck,
}

impl SxSummary {
    pub fn injective(&self) -> bool {
        self.size == self.expected
    }
}

/// `k_lower > ceiling` would contradict the known kissing-number bound and
/// points at an implementation bug.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SanityCheck {
    pub ceiling: u64,
    pub violated: bool,
}

/// The same functional evaluated with the other count basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompanionSummary {
    Degenerate {
        basis: CountBasis,
        size: usize,
    },
    Bound {
        basis: CountBasis,
        primary: Side,
        chosen_i: u32,
        r_size: usize,
        sum_sx: u64,
        union_sx: u64,
        ratio: Rational,
        chain_holds: bool,
    },
}

/// Every quantity of the bound chain for one set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub mode: Mode,
    pub side: Side,
    pub basis: CountBasis,
    pub certification: Certification,
    pub set_size: usize,
    pub sumset_size: usize,
    pub productset_size: usize,
    pub left_quotient_size: usize,
    pub right_quotient_size: usize,
    pub ratioset_size: usize,
    pub energy: u64,
    pub energy_prime: u64,
    pub hypothesis: HypothesisCheck,
    pub ell_sum: EllSumIdentity,
    pub buckets: DyadicBuckets,
    pub phi: Vec<(CdNumber, CdNumber)>,
    /// Empty when S_x was not computed (uncertified without override).
    pub sx: Vec<SxSummary>,
    pub sum_sx: Option<u64>,
    pub union_sx: Option<u64>,
    /// `Σ|S_x| / |∪ S_x|`
    pub ratio: Option<Rational>,
    /// `ratio - 1`: the lower bound on `k_16` (on `k_8` in octonion mode).
    pub k_lower: Option<Rational>,
    pub chain: Vec<ChainStage>,
    pub sanity: Option<SanityCheck>,
    pub companion: Option<CompanionSummary>,
}

impl BoundReport {
    pub fn is_certified(&self) -> bool {
        self.certification == Certification::Certified
    }

    pub fn chosen_i(&self) -> u32 {
        self.buckets.chosen_i
    }

    pub fn r_profiles(&self) -> &[RatioProfile] {
        self.buckets.r_profiles()
    }

    pub fn r_size(&self) -> usize {
        self.buckets.r_size()
    }

    /// All audited chain stages hold.
    pub fn chain_holds(&self) -> bool {
        self.chain.iter().filter(|s| s.audited).all(|s| s.holds)
    }

    pub fn ball_lemma_holds(&self) -> bool {
        self.sx.iter().all(|s| s.ball.passed())
    }

    pub fn injective(&self) -> bool {
        self.sx.iter().all(SxSummary::injective)
    }

    pub fn sanity_violated(&self) -> bool {
        self.sanity.is_some_and(|s| s.violated)
    }
}

struct Core {
    buckets: DyadicBuckets,
    phi: Vec<(CdNumber, CdNumber)>,
    sx: Vec<SxSummary>,
    union: BTreeSet<(CdNumber, CdNumber)>,
}

fn run_core(
    a: &ElementSet,
    profiles: &[RatioProfile],
    requested: Side,
    side: Side,
    compute_sx: bool,
) -> Result<Core> {
    let buckets = select_r(profiles, a.len(), requested)?;
    let r: Vec<CdNumber> = buckets.r_profiles().iter().map(|p| p.x.clone()).collect();
    let phi = phi_map(&r)?;
    let mut sx = Vec::new();
    let mut union = BTreeSet::new();
    if compute_sx {
        for (x, phi_x) in &phi {
            let set = build_sx(a, x, phi_x, side)?;
            let ball = verify_ball_lemma(a, &set, side);
            sx.push(SxSummary {
                x: x.clone(),
                phi_x: phi_x.clone(),
                size: set.len() as u64,
                expected: set.expected_len(),
                solver_hits: set.solver_hits,
                ball,
            });
            union.extend(set.pairs);
        }
    }
    Ok(Core {
        buckets,
        phi,
        sx,
        union,
    })
}

fn chain_stages(
    mode: Mode,
    core: &Core,
    set_size: usize,
    sumset_size: usize,
    energy: u64,
    energy_prime: u64,
) -> Vec<ChainStage> {
    let c = count(mode.ball_constant());
    let b = &core.buckets;
    let dyadic = count((b.r_size() as u64) << (2 * b.chosen_i)) / &c;
    let log = count(8 * mode.ball_constant() * log_factor(set_size));
    let mut stages = b.audit.to_vec();
    if !core.sx.is_empty() {
        let sum = count(core.sx.iter().map(|s| s.size).sum());
        let union = count(core.union.len() as u64);
        stages.push(ChainStage::new(
            "sumset_square",
            "|A+A|^2 >= |U S_x|",
            count((sumset_size as u64).pow(2)),
            Relation::Ge,
            union.clone(),
            true,
        ));
        stages.push(ChainStage::new(
            "ball_count",
            "|U S_x| >= sum |S_x| / C",
            union,
            Relation::Ge,
            &sum / &c,
            true,
        ));
        stages.push(ChainStage::new(
            "dyadic_floor",
            "sum |S_x| / C >= |R| 2^(2I) / C",
            sum / &c,
            Relation::Ge,
            dyadic.clone(),
            true,
        ));
    }
    stages.push(ChainStage::new(
        "energy_prime_tail",
        "|R| 2^(2I) / C >= E'(A) / (8 C ceil(log2|A|))",
        dyadic.clone(),
        Relation::Ge,
        count(energy_prime) / &log,
        true,
    ));
    stages.push(ChainStage::new(
        "energy_tail",
        "|R| 2^(2I) / C >= E(A) / (8 C ceil(log2|A|))",
        dyadic,
        Relation::Ge,
        count(energy) / log,
        false,
    ));
    stages
}

fn check_mode(a: &ElementSet, mode: Mode) -> Result<()> {
    match mode {
        Mode::Octonion if a.level() > OCTONION_LEVEL => Err(Error::ModeRequirement(
            "octonion mode takes sets of level at most 3",
        )),
        Mode::SixteenOn if !a.is_all_niner() => Err(Error::ModeRequirement(
            "sixteen_on mode takes sets of niners (level 4, coordinates 9..15 zero)",
        )),
        _ => Ok(()),
    }
}

fn uncertified_reason(a: &ElementSet) -> Option<String> {
    if a.privileged_orthant().is_some() {
        return None;
    }
    let support = a.support();
    if let Some(x) = a.iter().find(|x| !x.sign_class_on(&support).is_privileged()) {
        return Some(format!(
            "element {x} is {:?} on the set's support; no common privileged orthant",
            x.sign_class_on(&support)
        ));
    }
    let first = a.elements().first()?;
    let class = first.sign_class_on(&support);
    let other = a.iter().find(|x| x.sign_class_on(&support) != class)?;
    Some(format!(
        "element {other} is {:?} but element {first} is {class:?}",
        other.sign_class_on(&support)
    ))
}

/// Runs the whole chain on `a`: ratio profiles, dyadic choice of R, φ, the
/// sets S_x, the geometric checks, and `k_lower = Σ|S_x| / |∪ S_x| - 1`.
///
/// Fails with [`Error::DegenerateR`] when the chosen bucket holds fewer than
/// two ratios. A set outside a single privileged orthant yields an
/// uncertified report without S_x, unless `allow_uncertified` is set.
pub fn evaluate_bound(a: &ElementSet, opts: EvalOptions) -> Result<BoundReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    a.require_nonzero()?;
    check_mode(a, opts.mode)?;

    let counts = setops::representation_counts(a)?;
    let profiles = setops::profiles_from_counts(&counts);
    let hypothesis = hypothesis_check(&profiles);
    let energy_prime = hypothesis.sum_ell_r;
    let energy = setops::energy(a);
    let sumset_size = setops::sumset(a).len();

    let certification = match uncertified_reason(a) {
        None => Certification::Certified,
        Some(reason) => Certification::Uncertified(reason),
    };
    let compute_sx = certification == Certification::Certified || opts.allow_uncertified;
    let requested = opts.basis.requested_side(opts.side);
    let core = run_core(a, &profiles, requested, opts.side, compute_sx)?;
    let chain = chain_stages(opts.mode, &core, a.len(), sumset_size, energy, energy_prime);

    let (sum_sx, union_sx, ratio, k_lower, sanity) = if compute_sx {
        let sum: u64 = core.sx.iter().map(|s| s.size).sum();
        let union = core.union.len() as u64;
        let ratio = count(sum) / count(union);
        let k = &ratio - count(1);
        let ceiling = opts.mode.kissing_ceiling();
        let sanity = SanityCheck {
            ceiling,
            violated: k > count(ceiling),
        };
        (Some(sum), Some(union), Some(ratio), Some(k), Some(sanity))
    } else {
        (None, None, None, None, None)
    };

    let other_basis = match opts.basis {
        CountBasis::Intro => CountBasis::Strict,
        CountBasis::Strict => CountBasis::Intro,
    };
    let other_requested = other_basis.requested_side(opts.side);
    let companion = (compute_sx && other_requested != requested).then(|| {
        match run_core(a, &profiles, other_requested, opts.side, true) {
            Ok(other) => {
                let sum: u64 = other.sx.iter().map(|s| s.size).sum();
                let union = other.union.len() as u64;
                let chain = chain_stages(opts.mode, &other, a.len(), sumset_size, energy, energy_prime);
                CompanionSummary::Bound {
                    basis: other_basis,
                    primary: other.buckets.primary,
                    chosen_i: other.buckets.chosen_i,
                    r_size: other.buckets.r_size(),
                    sum_sx: sum,
                    union_sx: union,
                    ratio: count(sum) / count(union),
                    chain_holds: chain.iter().filter(|s| s.audited).all(|s| s.holds),
                }
            }
            Err(Error::DegenerateR { size }) => CompanionSummary::Degenerate {
                basis: other_basis,
                size,
            },
            Err(e) => unreachable!("companion evaluation cannot fail differently: {e}"),
        }
    });

    Ok(BoundReport {
        mode: opts.mode,
        side: opts.side,
        basis: opts.basis,
        certification,
        set_size: a.len(),
        sumset_size,
        productset_size: setops::productset(a).len(),
        left_quotient_size: counts.left.len(),
        right_quotient_size: counts.right.len(),
        ratioset_size: profiles.len(),
        energy,
        energy_prime,
        hypothesis,
        ell_sum: ell_sum_identity(a)?,
        buckets: core.buckets,
        phi: core.phi,
        sx: core.sx,
        sum_sx,
        union_sx,
        ratio,
        k_lower,
        chain,
        sanity,
        companion,
    })
}

/// `max(|A+A|, |AA|) >= |A|^(4/3) / (1928 ceil(log2|A|))^(1/3)`, compared
/// exactly after cubing both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumProductCheck {
    pub set_size: usize,
    pub sumset_size: usize,
    pub productset_size: usize,
    /// `max(|A+A|, |AA|)^3`
    pub lhs_cubed: Rational,
    /// `|A|^4 / (1928 ceil(log2|A|))`
    pub rhs_cubed: Rational,
    pub holds: bool,
}

/// `8 * 241`: the octonion chain's constant.
pub const OCTONION_SUM_PRODUCT_CONSTANT: u64 = 8 * 241;

pub fn octonion_sum_product(a: &ElementSet) -> Result<SumProductCheck> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let sumset_size = setops::sumset(a).len();
    let productset_size = setops::productset(a).len();
    let m = sumset_size.max(productset_size) as u64;
    let n = a.len() as u64;
    let lhs_cubed = count(m).pow(3);
    let rhs_cubed = count(n).pow(4) / count(OCTONION_SUM_PRODUCT_CONSTANT * log_factor(a.len()));
    Ok(SumProductCheck {
        set_size: a.len(),
        sumset_size,
        productset_size,
        holds: lhs_cubed >= rhs_cubed,
        lhs_cubed,
        rhs_cubed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn reals(values: &[i64]) -> ElementSet {
        ElementSet::new(4, values.iter().map(|&v| CdNumber::real(4, int(v)))).unwrap()
    }

    #[test]
    fn geometric_progression() {
        let a = reals(&[1, 2, 4, 8]);
        let rep = evaluate_bound(&a, EvalOptions::new(Mode::SixteenOn)).unwrap();
        assert!(rep.is_certified());
        assert_eq!(rep.chosen_i(), 1);
        assert_eq!(rep.r_size(), 4);
        assert_eq!(rep.energy_prime, 44);
        assert_eq!(rep.energy, 44);
        assert_eq!(rep.sum_sx, Some(27));
        assert_eq!(rep.union_sx, Some(21));
        assert_eq!(rep.ratio, Some(ratio(9, 7)));
        assert_eq!(rep.k_lower, Some(ratio(2, 7)));
        assert!(rep.chain_holds());
        assert!(rep.ball_lemma_holds());
        assert!(rep.injective());
        assert!(!rep.sanity_violated());
        // real sets have ℓ = r, so the strict basis agrees
        match rep.companion {
            Some(CompanionSummary::Bound { ratio: r, .. }) => assert_eq!(r, ratio(9, 7)),
            other => panic!("unexpected companion {other:?}"),
        }
    }

    #[test]
    fn singleton_bucket_is_degenerate() {
        let a = reals(&[1, 2]);
        assert_eq!(
            evaluate_bound(&a, EvalOptions::new(Mode::SixteenOn)),
            Err(Error::DegenerateR { size: 1 })
        );
    }

    #[test]
    fn empty_and_zero_rejected() {
        assert_eq!(
            evaluate_bound(&ElementSet::empty(4), EvalOptions::new(Mode::SixteenOn)),
            Err(Error::EmptySet)
        );
        assert_eq!(
            evaluate_bound(&reals(&[0, 1]), EvalOptions::new(Mode::SixteenOn)),
            Err(Error::ZeroInSet)
        );
    }

    #[test]
    fn mode_requirements() {
        let non_niner = ElementSet::new(4, vec![CdNumber::one(4), CdNumber::basis(4, 12)]).unwrap();
        assert!(matches!(
            evaluate_bound(&non_niner, EvalOptions::new(Mode::SixteenOn)),
            Err(Error::ModeRequirement(_))
        ));
        assert!(matches!(
            evaluate_bound(&reals(&[1, 2, 4]), EvalOptions::new(Mode::Octonion)),
            Err(Error::ModeRequirement(_))
        ));
    }

    #[test]
    fn mixed_signs_are_uncertified() {
        let a = reals(&[1, 2, 4, 8, -16]);
        let rep = evaluate_bound(&a, EvalOptions::new(Mode::SixteenOn)).unwrap();
        assert!(matches!(rep.certification, Certification::Uncertified(_)));
        assert!(rep.ratio.is_none());
        assert!(rep.sx.is_empty());

        let mut opts = EvalOptions::new(Mode::SixteenOn);
        opts.allow_uncertified = true;
        let forced = evaluate_bound(&a, opts).unwrap();
        assert!(!forced.is_certified());
        assert!(forced.ratio.is_some());
        assert!(forced.sx.iter().all(|s| s.ball == BallCheck::NotApplicable));
    }

    #[test]
    fn octonion_mode_on_reals() {
        let a = ElementSet::new(3, [1, 2, 4, 8].iter().map(|&v| CdNumber::real(3, int(v)))).unwrap();
        let rep = evaluate_bound(&a, EvalOptions::new(Mode::Octonion)).unwrap();
        assert_eq!(rep.side, Side::Left);
        assert_eq!(rep.ratio, Some(ratio(9, 7)));
        assert!(rep.companion.is_none());
        assert_eq!(rep.sanity.unwrap().ceiling, 240);
    }

    #[test]
    fn sum_product_cubed_comparison() {
        let a = ElementSet::new(3, [1, 2].iter().map(|&v| CdNumber::real(3, int(v)))).unwrap();
        let c = octonion_sum_product(&a).unwrap();
        assert_eq!(c.lhs_cubed, int(27));
        assert_eq!(c.rhs_cubed, ratio(16, 1928));
        assert!(c.holds);
    }
}
