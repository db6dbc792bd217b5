//! Randomised exact property suites: algebraic laws of the tower, set
//! operation cross-checks, and bound-chain audits on generated sets.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{CdNumber, NINER_COORDS, OCTONION_LEVEL, SIXTEEN_ON_LEVEL};
use crate::error::Error;
use crate::pipeline::{evaluate_bound, octonion_sum_product, EvalOptions, Mode};
use crate::rational::Rational;
use crate::sample;
use crate::search::{generate_candidate, Acceptance, Generator, Move, SearchConfig};
use crate::set::ElementSet;
use crate::setops;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Setops,
    Pipeline,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Setops => "setops",
            Suite::Pipeline => "pipeline",
            Suite::All => "all",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [Suite::Algebra, Suite::Setops, Suite::Pipeline, Suite::All]
            .into_iter()
            .find(|v| v.name() == s)
    }
}

/// Tally for one law. A trial is skipped when its random input does not meet
/// the law's precondition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
    pub first_failure: Option<String>,
}

impl LawResult {
    fn new(suite: &'static str, name: &'static str) -> Self {
        LawResult {
            suite,
            name,
            passed: 0,
            failed: 0,
            skipped: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub suite: Suite,
    pub trials: u64,
    pub seed: u64,
    pub laws: Vec<LawResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.laws.iter().all(LawResult::ok)
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "suite {}  trials {}  seed {}\n",
            self.suite.name(),
            self.trials,
            self.seed
        );
        for law in &self.laws {
            out.push_str(&format!(
                "{} {}/{}: passed {}  failed {}  skipped {}\n",
                if law.ok() { "PASS" } else { "FAIL" },
                law.suite,
                law.name,
                law.passed,
                law.failed,
                law.skipped
            ));
            if let Some(f) = &law.first_failure {
                out.push_str(&format!("  first failure: {f}\n"));
            }
        }
        out.push_str(if self.all_passed() { "all laws hold\n" } else { "some laws FAILED\n" });
        out
    }
}

/// Coordinate bound for random elements.
const BOUND: u32 = 9;

/// A level-4 element, sometimes with a vanishing half so the special
/// branches of the product are exercised.
fn element<R: Rng + ?Sized>(rng: &mut R) -> CdNumber {
    let x = sample::element(rng, SIXTEEN_ON_LEVEL, BOUND);
    let mut coords = x.into_coords();
    match rng.gen_range(0..8) {
        0 | 1 => coords[8..].iter_mut().for_each(Rational::set_zero),
        2 => coords[..8].iter_mut().for_each(Rational::set_zero),
        _ => {}
    }
    CdNumber::new(SIXTEEN_ON_LEVEL, coords).unwrap()
}

fn nonzero<R: Rng + ?Sized>(rng: &mut R) -> CdNumber {
    loop {
        let x = element(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

fn real<R: Rng + ?Sized>(rng: &mut R) -> (Rational, CdNumber) {
    let s = sample::bounded_rational(rng, BOUND);
    (s.clone(), CdNumber::real(SIXTEEN_ON_LEVEL, s))
}

fn show(xs: &[&CdNumber]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// The ten basic laws of the 2^n-ons at level 4, plus the two product forms,
/// norm multiplicativity, and right distributivity over niners.
pub fn algebra_laws(trials: u64, seed: u64) -> Vec<LawResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = [
        "unit",
        "zero",
        "additive_group",
        "norm",
        "real_scalars",
        "weak_linearity",
        "left_distributivity",
        "inverse",
        "left_alternativity",
        "left_cancellation",
        "norm_multiplicative",
        "simplified_product",
        "niner_right_distributivity",
    ];
    let mut laws: Vec<LawResult> = names.iter().map(|n| LawResult::new("algebra", n)).collect();
    let one = CdNumber::one(SIXTEEN_ON_LEVEL);
    let zero = CdNumber::zero(SIXTEEN_ON_LEVEL);

    for _ in 0..trials {
        let x = element(&mut rng);
        let y = element(&mut rng);
        let z = element(&mut rng);
        let (s, sr) = real(&mut rng);
        let xy = &x * &y;

        laws[0].record(&one * &x == x && &x * &one == x, || show(&[&x]));
        laws[1].record(
            &zero + &x == x && &x + &zero == x && (&zero * &x).is_zero() && (&x * &zero).is_zero(),
            || show(&[&x]),
        );
        laws[2].record(
            &x + &y == &y + &x && &(&x + &y) + &z == &x + &(&y + &z) && (&x + &(-&x)).is_zero(),
            || show(&[&x, &y, &z]),
        );
        let n = CdNumber::real(SIXTEEN_ON_LEVEL, x.norm_sq());
        laws[3].record(&x * &x.conjugate() == n && &x.conjugate() * &x == n, || show(&[&x]));

        let sxy = xy.scale(&s);
        laws[4].record(
            (&x.scale(&s) * &y) == sxy
                && (&(&x * &sr) * &y) == sxy
                && (&x * &y.scale(&s)) == sxy
                && (&x * &(&y * &sr)) == sxy
                && (&sr * &xy) == sxy,
            || show(&[&x, &y, &sr]),
        );
        laws[5].record(
            &(&x + &sr) * &y == &xy + &(&sr * &y) && &x * &(&y + &sr) == &xy + &(&x * &sr),
            || show(&[&x, &y, &sr]),
        );
        laws[6].record(&x * &(&y + &z) == &xy + &(&x * &z), || show(&[&x, &y, &z]));

        let w = nonzero(&mut rng);
        let w_inv = w.inverse().unwrap();
        laws[7].record(
            &w_inv * &w == one
                && &w * &w_inv == one
                && w_inv == w.conjugate().scale(&(Rational::one() / w.norm_sq()))
                && w_inv.conjugate() == w.conjugate().inverse().unwrap(),
            || show(&[&w]),
        );
        laws[8].record(&x * &xy == &(&x * &x) * &y, || show(&[&x, &y]));
        laws[9].record(&w * &(&w_inv * &y) == y, || show(&[&w, &y]));
        laws[10].record(xy.norm_sq() == x.norm_sq() * y.norm_sq(), || show(&[&x, &y]));
        laws[11].record(
            x.mul_16on_simplified(&y).unwrap() == x.mul_conway_smith(&y).unwrap(),
            || show(&[&x, &y]),
        );

        let nx = sample::niner(&mut rng, BOUND, NINER_COORDS);
        laws[12].record(&(&y + &z) * &nx == &(&y * &nx) + &(&z * &nx), || show(&[&y, &z, &nx]));
    }
    laws
}

fn random_set<R: Rng + ?Sized>(rng: &mut R, level: u8, size: usize) -> ElementSet {
    let elements = (0..size).map(|_| sample::nonzero_element(rng, level, 3));
    ElementSet::new(level, elements).unwrap()
}

fn inverse_closed_niners<R: Rng + ?Sized>(rng: &mut R, half: usize) -> ElementSet {
    let active = rng.gen_range(1..=3);
    let base = ElementSet::new(
        SIXTEEN_ON_LEVEL,
        (0..half).map(|_| sample::nonzero_niner(rng, 3, active)),
    )
    .unwrap();
    base.inverse_closure().unwrap()
}

/// Cross-checks of the finite-set machinery on random sets.
pub fn setops_laws(trials: u64, seed: u64) -> Vec<LawResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut e_prime = LawResult::new("setops", "energy_prime_two_paths");
    let mut totals = LawResult::new("setops", "representation_totals");
    let mut sumset = LawResult::new("setops", "sumset_size_bounds");
    let mut lemma_ic = LawResult::new("setops", "energy_prime_inverse_closed_bound");
    let mut lemma_gen = LawResult::new("setops", "energy_prime_general_bound");

    for _ in 0..trials {
        let level = if rng.gen_bool(0.5) { OCTONION_LEVEL } else { SIXTEEN_ON_LEVEL };
        let size = rng.gen_range(3..=8);
        let a = random_set(&mut rng, level, size);
        let n = a.len() as u64;

        let profiles = setops::ratio_profiles(&a).unwrap();
        let direct = setops::energy_prime(&a).unwrap();
        let via_profiles: u64 = profiles.iter().map(|p| p.ell * p.r).sum();
        e_prime.record(direct == via_profiles, || format!("{direct} vs {via_profiles} on {a:?}"));

        let counts = setops::representation_counts(&a).unwrap();
        let left: u64 = counts.left.values().sum();
        let right: u64 = counts.right.values().sum();
        totals.record(left == n * n && right == n * n, || format!("{left}, {right} for |A| = {n}"));

        let s = setops::sumset(&a).len() as u64;
        sumset.record(n <= s && s <= n * (n + 1) / 2, || format!("|A+A| = {s}, |A| = {n}"));

        let half = rng.gen_range(2..=4);
        let b = inverse_closed_niners(&mut rng, half);
        let report = setops::energy_lower_bound(&b).unwrap();
        match report.inverse_closed_satisfied {
            Some(ok) => lemma_ic.record(ok, || format!("{report:?}")),
            None => lemma_ic.skipped += 1,
        }
        match report.general_satisfied {
            Some(ok) => lemma_gen.record(ok, || format!("{report:?}")),
            None => lemma_gen.skipped += 1,
        }
    }
    vec![e_prime, totals, sumset, lemma_ic, lemma_gen]
}

fn pipeline_config(seed: u64, generator: Generator, active: usize) -> SearchConfig {
    SearchConfig {
        seed,
        iterations: 0,
        min_size: 3,
        max_size: 6,
        coordinate_bound: 4,
        active_coords: active,
        generator,
        moves: Move::ALL.to_vec(),
        acceptance: Acceptance::HillClimb,
        initial_temperature: Rational::one(),
        decay: Rational::one(),
    }
}

/// Bound-chain audits on generated positive niner sets and the octonion
/// sum-product inequality on inverse-closed octonion sets.
pub fn pipeline_laws(trials: u64, seed: u64) -> Vec<LawResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chain = LawResult::new("pipeline", "chain_audit");
    let mut ball = LawResult::new("pipeline", "ball_lemma");
    let mut ceiling = LawResult::new("pipeline", "kissing_ceiling");
    let mut sum_product = LawResult::new("pipeline", "octonion_sum_product");

    let generators = [Generator::Geometric, Generator::LatticeSlice, Generator::Random];
    for t in 0..trials {
        let generator = generators[(t % 3) as usize];
        let active = rng.gen_range(1..=3);
        let config = pipeline_config(rng.gen(), generator, active);
        let evaluated = generate_candidate(&config, &mut rng)
            .map(|a| (evaluate_bound(&a, EvalOptions::new(Mode::SixteenOn)), a));
        match evaluated {
            Ok((Ok(r), a)) if r.is_certified() => {
                chain.record(r.chain_holds(), || format!("{a:?}"));
                ball.record(r.ball_lemma_holds(), || format!("{a:?}"));
                ceiling.record(!r.sanity_violated(), || format!("{:?} on {a:?}", r.k_lower));
            }
            Ok((Err(e), _)) if !matches!(e, Error::DegenerateR { .. }) => {
                let msg = e.to_string();
                chain.record(false, || msg);
            }
            // uncertified, degenerate, or no candidate of the requested shape
            _ => {
                chain.skipped += 1;
                ball.skipped += 1;
                ceiling.skipped += 1;
            }
        }

        let half = rng.gen_range(2..=6);
        let base = ElementSet::new(
            OCTONION_LEVEL,
            (0..half).map(|_| sample::nonzero_element(&mut rng, OCTONION_LEVEL, 3)),
        )
        .unwrap();
        let closed = base.inverse_closure().unwrap();
        let profiles = setops::ratio_profiles(&closed).unwrap();
        if closed.len() >= 4 && setops::hypothesis_check(&profiles).holds {
            let c = octonion_sum_product(&closed).unwrap();
            sum_product.record(c.holds, || format!("{c:?}"));
        } else {
            sum_product.skipped += 1;
        }
    }
    vec![chain, ball, ceiling, sum_product]
}

pub fn run_suite(suite: Suite, trials: u64, seed: u64) -> VerifyReport {
    let laws = match suite {
        Suite::Algebra => algebra_laws(trials, seed),
        Suite::Setops => setops_laws(trials, seed),
        Suite::Pipeline => pipeline_laws(trials, seed),
        Suite::All => {
            let mut laws = algebra_laws(trials, seed);
            laws.extend(setops_laws(trials, seed));
            laws.extend(pipeline_laws(trials, seed));
            laws
        }
    };
    VerifyReport {
        suite,
        trials,
        seed,
        laws,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_suite_passes() {
        let r = run_suite(Suite::Algebra, 30, 1);
        assert!(r.all_passed(), "{}", r.render());
        assert_eq!(r.laws.len(), 13);
        assert!(r.laws.iter().all(|l| l.passed == 30));
    }

    #[test]
    fn setops_suite_passes() {
        let r = run_suite(Suite::Setops, 10, 2);
        assert!(r.all_passed(), "{}", r.render());
    }

    #[test]
    fn pipeline_suite_passes() {
        let r = run_suite(Suite::Pipeline, 12, 3);
        assert!(r.all_passed(), "{}", r.render());
    }

    #[test]
    fn failures_are_reported() {
        let mut law = LawResult::new("x", "y");
        law.record(true, String::new);
        law.record(false, || "first".into());
        law.record(false, || "second".into());
        assert_eq!((law.passed, law.failed), (1, 2));
        assert_eq!(law.first_failure.as_deref(), Some("first"));
        let report = VerifyReport {
            suite: Suite::Algebra,
            trials: 3,
            seed: 0,
            laws: vec![law],
        };
        assert!(!report.all_passed());
        assert!(report.render().contains("FAIL x/y"));
    }
}
