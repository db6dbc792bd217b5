//! Seeded local search over finite sets of positive niners, maximising the
//! bound ratio `Σ|S_x| / |∪ S_x|` exactly.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{CdNumber, SignClass, NINER_COORDS, SIXTEEN_ON_LEVEL};
use crate::error::{Error, Result};
use crate::pipeline::{evaluate_bound, BoundReport, EvalOptions, Mode};
use crate::rational::{count, format_rational, int, parse_rational, Rational};
use crate::sample::positive_niner;
use crate::set::ElementSet;

macro_rules! named_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn name(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }

            pub fn from_name(s: &str) -> Option<Self> {
                Self::ALL.iter().copied().find(|v| v.name() == s)
            }
        }
    };
}

named_enum!(
    /// How the initial candidate is drawn.
    Generator {
        Random => "random",
        Geometric => "geometric",
        LatticeSlice => "lattice_slice",
    }
);

named_enum!(Move {
    ReplaceElement => "replace_element",
    PerturbCoordinate => "perturb_coordinate",
    AddElement => "add_element",
    RemoveElement => "remove_element",
});

named_enum!(Acceptance {
    HillClimb => "hill_climb",
    Anneal => "anneal",
});

/// Search parameters, read from a TOML table:
///
/// ```toml
/// seed = 7
/// iterations = 200
/// set_size = [3, 8]
/// coordinate_bound = 5
/// active_coords = 1
/// generator = "geometric"
/// moves = ["replace_element", "perturb_coordinate", "add_element", "remove_element"]
/// acceptance = "anneal"
/// initial_temperature = "1/4"
/// decay = "19/20"
/// ```
///
/// `active_coords` is how many of the nine niner coordinates are used (all
/// of them strictly positive). Only `seed`, `iterations` and `set_size` are
/// required.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub seed: u64,
    pub iterations: u64,
    pub min_size: usize,
    pub max_size: usize,
    pub coordinate_bound: u32,
    pub active_coords: usize,
    pub generator: Generator,
    pub moves: Vec<Move>,
    pub acceptance: Acceptance,
    pub initial_temperature: Rational,
    pub decay: Rational,
}

const KEYS: &[&str] = &[
    "seed",
    "iterations",
    "set_size",
    "coordinate_bound",
    "active_coords",
    "generator",
    "moves",
    "acceptance",
    "initial_temperature",
    "decay",
];

/// Sizes above this make exhaustive S_x enumeration impractical.
pub const MAX_SET_SIZE: usize = 64;

fn config_err(field: &'static str, reason: impl Into<String>) -> Error {
    Error::Config {
        field,
        reason: reason.into(),
    }
}

fn get_int(table: &toml::Table, field: &'static str) -> Result<Option<i64>> {
    match table.get(field) {
        None => Ok(None),
        Some(toml::Value::Integer(i)) => Ok(Some(*i)),
        Some(other) => Err(config_err(field, format!("expected an integer, got {other}"))),
    }
}

fn get_str<'a>(table: &'a toml::Table, field: &'static str) -> Result<Option<&'a str>> {
    match table.get(field) {
        None => Ok(None),
        Some(toml::Value::String(s)) => Ok(Some(s)),
        Some(other) => Err(config_err(field, format!("expected a string, got {other}"))),
    }
}

fn get_rational(table: &toml::Table, field: &'static str, default: Rational) -> Result<Rational> {
    match table.get(field) {
        None => Ok(default),
        Some(toml::Value::Integer(i)) => Ok(int(*i)),
        Some(toml::Value::String(s)) => {
            parse_rational(s).map_err(|e| config_err(field, e.to_string()))
        }
        Some(other) => Err(config_err(field, format!("expected \"num/den\", got {other}"))),
    }
}

fn get_named<T>(
    table: &toml::Table,
    field: &'static str,
    default: T,
    parse: fn(&str) -> Option<T>,
) -> Result<T> {
    match get_str(table, field)? {
        None => Ok(default),
        Some(s) => parse(s).ok_or_else(|| config_err(field, format!("unknown value `{s}`"))),
    }
}

fn non_negative<T: TryFrom<i64>>(field: &'static str, value: i64) -> Result<T> {
    T::try_from(value).map_err(|_| config_err(field, format!("{value} is out of range")))
}

impl SearchConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Parse(e.message().to_string()))?;
        Self::from_table(&table)
    }

    pub fn from_table(table: &toml::Table) -> Result<Self> {
        if let Some(key) = table.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(config_err("(top level)", format!("unknown key `{key}`")));
        }
        let seed = match table.get("seed") {
            None => return Err(config_err("seed", "missing")),
            Some(toml::Value::Integer(i)) => non_negative("seed", *i)?,
            Some(toml::Value::String(s)) => s
                .parse()
                .map_err(|_| config_err("seed", format!("`{s}` is not a 64-bit unsigned integer")))?,
            Some(other) => return Err(config_err("seed", format!("expected an integer, got {other}"))),
        };
        let iterations = non_negative(
            "iterations",
            get_int(table, "iterations")?.ok_or_else(|| config_err("iterations", "missing"))?,
        )?;
        let (min_size, max_size) = match table.get("set_size") {
            None => return Err(config_err("set_size", "missing")),
            Some(toml::Value::Array(bounds)) => match bounds.as_slice() {
                [toml::Value::Integer(lo), toml::Value::Integer(hi)] => {
                    (non_negative("set_size", *lo)?, non_negative("set_size", *hi)?)
                }
                _ => return Err(config_err("set_size", "expected [min, max]")),
            },
            Some(toml::Value::Integer(n)) => {
                let n = non_negative("set_size", *n)?;
                (n, n)
            }
            Some(other) => return Err(config_err("set_size", format!("expected [min, max], got {other}"))),
        };
        let coordinate_bound = match get_int(table, "coordinate_bound")? {
            None => 5,
            Some(b) => non_negative("coordinate_bound", b)?,
        };
        let active_coords = match get_int(table, "active_coords")? {
            None => NINER_COORDS,
            Some(a) => non_negative("active_coords", a)?,
        };
        let moves = match table.get("moves") {
            None => Move::ALL.to_vec(),
            Some(toml::Value::Array(items)) => items
                .iter()
                .map(|v| match v {
                    toml::Value::String(s) => Move::from_name(s)
                        .ok_or_else(|| config_err("moves", format!("unknown move `{s}`"))),
                    other => Err(config_err("moves", format!("expected a string, got {other}"))),
                })
                .collect::<Result<_>>()?,
            Some(other) => return Err(config_err("moves", format!("expected a list, got {other}"))),
        };
        let config = SearchConfig {
            seed,
            iterations,
            min_size,
            max_size,
            coordinate_bound,
            active_coords,
            generator: get_named(table, "generator", Generator::Random, Generator::from_name)?,
            moves,
            acceptance: get_named(table, "acceptance", Acceptance::HillClimb, Acceptance::from_name)?,
            initial_temperature: get_rational(table, "initial_temperature", Rational::new(1.into(), 4.into()))?,
            decay: get_rational(table, "decay", Rational::new(19.into(), 20.into()))?,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_size < 3 {
            return Err(config_err("set_size", "minimum must be at least 3"));
        }
        if self.max_size < self.min_size {
            return Err(config_err("set_size", "maximum is below minimum"));
        }
        if self.max_size > MAX_SET_SIZE {
            return Err(config_err("set_size", format!("maximum exceeds {MAX_SET_SIZE}")));
        }
        if self.coordinate_bound == 0 {
            return Err(config_err("coordinate_bound", "must be positive"));
        }
        if !(1..=NINER_COORDS).contains(&self.active_coords) {
            return Err(config_err("active_coords", format!("must lie in 1..={NINER_COORDS}")));
        }
        if self.moves.is_empty() {
            return Err(config_err("moves", "at least one move is required"));
        }
        if !self.initial_temperature.is_positive() {
            return Err(config_err("initial_temperature", "must be positive"));
        }
        if !self.decay.is_positive() || self.decay > Rational::one() {
            return Err(config_err("decay", "must lie in (0, 1]"));
        }
        Ok(())
    }

    /// The canonical TOML rendering; parses back to the same config.
    pub fn to_toml_table(&self) -> toml::Table {
        let mut t = toml::Table::new();
        let seed = match i64::try_from(self.seed) {
            Ok(s) => toml::Value::Integer(s),
            Err(_) => toml::Value::String(self.seed.to_string()),
        };
        t.insert("seed".into(), seed);
        t.insert("iterations".into(), toml::Value::Integer(self.iterations as i64));
        t.insert(
            "set_size".into(),
            toml::Value::Array(vec![
                toml::Value::Integer(self.min_size as i64),
                toml::Value::Integer(self.max_size as i64),
            ]),
        );
        t.insert("coordinate_bound".into(), toml::Value::Integer(self.coordinate_bound.into()));
        t.insert("active_coords".into(), toml::Value::Integer(self.active_coords as i64));
        t.insert("generator".into(), toml::Value::String(self.generator.name().into()));
        t.insert(
            "moves".into(),
            toml::Value::Array(
                self.moves
                    .iter()
                    .map(|m| toml::Value::String(m.name().into()))
                    .collect(),
            ),
        );
        t.insert("acceptance".into(), toml::Value::String(self.acceptance.name().into()));
        t.insert(
            "initial_temperature".into(),
            toml::Value::String(format_rational(&self.initial_temperature)),
        );
        t.insert("decay".into(), toml::Value::String(format_rational(&self.decay)));
        t
    }
}

/// Draws per requested element before generation gives up.
const DRAWS_PER_ELEMENT: usize = 64;
/// Generators `g` tried before `geometric` falls back to `random`.
const GEOMETRIC_TRIES: usize = 32;
/// Draws a single move makes before reporting itself inapplicable.
const MOVE_TRIES: usize = 32;

/// Positive on the first `active` coordinates, zero on the rest.
fn fits_shape(x: &CdNumber, active: usize) -> bool {
    x.level() == SIXTEEN_ON_LEVEL
        && x.coords()
            .iter()
            .enumerate()
            .all(|(i, c)| if i < active { c.is_positive() } else { c.is_zero() })
}

fn lattice_point<R: Rng + ?Sized>(rng: &mut R, bound: u32, active: usize) -> CdNumber {
    let coords = (0..crate::algebra::dim(SIXTEEN_ON_LEVEL))
        .map(|i| {
            if i < active {
                count(rng.gen_range(1..=u64::from(bound)))
            } else {
                Rational::zero()
            }
        })
        .collect();
    CdNumber::new(SIXTEEN_ON_LEVEL, coords).expect("sixteen coordinates")
}

/// A fresh element of the kind the configured generator draws.
fn draw_element<R: Rng + ?Sized>(config: &SearchConfig, rng: &mut R) -> CdNumber {
    match config.generator {
        Generator::LatticeSlice => lattice_point(rng, config.coordinate_bound, config.active_coords),
        Generator::Random | Generator::Geometric => {
            positive_niner(rng, config.coordinate_bound, config.active_coords)
        }
    }
}

fn draw_coordinate<R: Rng + ?Sized>(config: &SearchConfig, rng: &mut R) -> Rational {
    match config.generator {
        Generator::LatticeSlice => count(rng.gen_range(1..=u64::from(config.coordinate_bound))),
        Generator::Random | Generator::Geometric => {
            crate::sample::positive_rational(rng, config.coordinate_bound)
        }
    }
}

fn distinct_set<R: Rng + ?Sized>(config: &SearchConfig, rng: &mut R, size: usize) -> Result<ElementSet> {
    let mut chosen = BTreeSet::new();
    let budget = DRAWS_PER_ELEMENT * size;
    let mut draws = 0;
    while chosen.len() < size {
        if draws == budget {
            return Err(Error::Generation(draws));
        }
        draws += 1;
        chosen.insert(draw_element(config, rng));
    }
    ElementSet::new(SIXTEEN_ON_LEVEL, chosen)
}

/// `{g, g^2, ..., g^size}` if every power keeps the positive niner shape.
fn geometric_set<R: Rng + ?Sized>(config: &SearchConfig, rng: &mut R, size: usize) -> Option<ElementSet> {
    let g = positive_niner(rng, config.coordinate_bound, config.active_coords);
    let mut powers = Vec::with_capacity(size);
    let mut p = g.clone();
    for _ in 0..size {
        if !fits_shape(&p, config.active_coords) {
            return None;
        }
        let next = &p * &g;
        powers.push(p);
        p = next;
    }
    let set = ElementSet::new(SIXTEEN_ON_LEVEL, powers).ok()?;
    (set.len() == size).then_some(set)
}

/// Draws the initial candidate. Every element is a niner, strictly positive
/// on the first `active_coords` coordinates, with numerators and
/// denominators within `coordinate_bound`; powers built by `geometric` may
/// exceed the bound, the generator `g` does not.
pub fn generate_candidate<R: Rng + ?Sized>(config: &SearchConfig, rng: &mut R) -> Result<ElementSet> {
    let size = rng.gen_range(config.min_size..=config.max_size);
    if config.generator == Generator::Geometric {
        for _ in 0..GEOMETRIC_TRIES {
            if let Some(set) = geometric_set(config, rng, size) {
                return Ok(set);
            }
        }
    }
    distinct_set(config, rng, size)
}

fn with_element_replaced(a: &ElementSet, index: usize, x: CdNumber) -> ElementSet {
    let mut elements = a.elements().to_vec();
    elements[index] = x;
    ElementSet::new(a.level(), elements).expect("same level")
}

/// Applies one move. Returns the input unchanged with `false` when the move
/// cannot keep the set valid: size limits, distinctness, positivity.
///
/// `perturb_coordinate` moves one coordinate `c` of an element to a new
/// value `v` drawn within the coordinate bound with `|v - c|` below the
/// element's smallest active coordinate.
pub fn local_move<R: Rng + ?Sized>(
    config: &SearchConfig,
    a: &ElementSet,
    mv: Move,
    rng: &mut R,
) -> (ElementSet, bool) {
    let unchanged = || (a.clone(), false);
    if a.is_empty() {
        return unchanged();
    }
    match mv {
        Move::ReplaceElement => {
            let index = rng.gen_range(0..a.len());
            for _ in 0..MOVE_TRIES {
                let x = draw_element(config, rng);
                if !a.contains(&x) {
                    return (with_element_replaced(a, index, x), true);
                }
            }
            unchanged()
        }
        Move::PerturbCoordinate => {
            let index = rng.gen_range(0..a.len());
            let x = &a.elements()[index];
            let active = config.active_coords;
            let j = rng.gen_range(0..active);
            let cap = x.coords()[..active]
                .iter()
                .min()
                .cloned()
                .unwrap_or_else(Rational::zero);
            let c = &x.coords()[j];
            for _ in 0..MOVE_TRIES {
                let v = draw_coordinate(config, rng);
                if &v == c || (&v - c).abs() >= cap {
                    continue;
                }
                let mut coords = x.coords().to_vec();
                coords[j] = v;
                let y = CdNumber::new(SIXTEEN_ON_LEVEL, coords).expect("sixteen coordinates");
                if !a.contains(&y) {
                    return (with_element_replaced(a, index, y), true);
                }
            }
            unchanged()
        }
        Move::AddElement => {
            if a.len() >= config.max_size {
                return unchanged();
            }
            for _ in 0..MOVE_TRIES {
                let x = draw_element(config, rng);
                if !a.contains(&x) {
                    let elements = a.iter().cloned().chain(std::iter::once(x));
                    return (ElementSet::new(a.level(), elements).expect("same level"), true);
                }
            }
            unchanged()
        }
        Move::RemoveElement => {
            if a.len() <= config.min_size {
                return unchanged();
            }
            let index = rng.gen_range(0..a.len());
            let elements = a
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != index)
                .map(|(_, x)| x.clone());
            (ElementSet::new(a.level(), elements).expect("same level"), true)
        }
    }
}

/// Constraints every evaluated candidate must meet, checked on the set itself.
pub fn check_candidate(config: &SearchConfig, a: &ElementSet) -> std::result::Result<(), String> {
    if !(config.min_size..=config.max_size).contains(&a.len()) {
        return Err(format!(
            "size {} outside {}..={}",
            a.len(),
            config.min_size,
            config.max_size
        ));
    }
    if a.contains_zero() {
        return Err("set contains zero".into());
    }
    if !a.is_all_niner() {
        return Err("set contains a non-niner".into());
    }
    if a.privileged_orthant() != Some(SignClass::AllPositive) {
        return Err("set is not in the positive privileged orthant".into());
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// A certified report with this ratio.
    Certified,
    /// The chosen bucket held a single ratio; scored as 1.
    Degenerate,
    /// Constraint violation or evaluation error; scored as 0.
    Rejected(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Score {
    pub ratio: Rational,
    pub outcome: Outcome,
}

/// Scores a candidate by a full sixteen_on evaluation.
pub fn score_candidate(config: &SearchConfig, a: &ElementSet) -> (Score, Option<BoundReport>) {
    let rejected = |reason: String| {
        (
            Score {
                ratio: Rational::zero(),
                outcome: Outcome::Rejected(reason),
            },
            None,
        )
    };
    if let Err(reason) = check_candidate(config, a) {
        return rejected(reason);
    }
    match evaluate_bound(a, EvalOptions::new(Mode::SixteenOn)) {
        Ok(report) if !report.is_certified() => rejected("report is uncertified".into()),
        Ok(report) if report.sanity_violated() => rejected("ratio exceeds the kissing ceiling".into()),
        Ok(report) => match report.ratio.clone() {
            Some(ratio) => (
                Score {
                    ratio,
                    outcome: Outcome::Certified,
                },
                Some(report),
            ),
            None => rejected("report has no ratio".into()),
        },
        Err(Error::DegenerateR { .. }) => (
            Score {
                ratio: Rational::one(),
                outcome: Outcome::Degenerate,
            },
            None,
        ),
        Err(e) => rejected(e.to_string()),
    }
}

/// Bits of the fixed grid used for annealing probabilities and temperatures.
pub const GRID_BITS: u32 = 48;

fn grid_scale() -> BigInt {
    BigInt::one() << GRID_BITS
}

/// `x` rounded down to a multiple of `2^-48`.
pub fn floor_to_grid(x: &Rational) -> Rational {
    let scale = grid_scale();
    Rational::new((x * Rational::from_integer(scale.clone())).floor().to_integer(), scale)
}

/// `exp(-t)` for `t >= 0`, as a multiple of `2^-48` in `[0, 1]`.
///
/// `t` is first rounded down to the grid, the Taylor series is summed
/// exactly until its terms fall below `2^-52` past the peak, and the sum is
/// rounded down to the grid. The absolute error is below `3 * 2^-48`, which
/// is under `1.1e-14`. Returns 0 for `t >= 40`.
pub fn exp_neg(t: &Rational) -> Rational {
    if !t.is_positive() {
        return Rational::one();
    }
    let t = floor_to_grid(t);
    if t >= int(40) {
        return Rational::zero();
    }
    let tiny = Rational::new(BigInt::one(), BigInt::one() << 52);
    let mut sum = Rational::zero();
    let mut term = Rational::one();
    let mut n = 0u64;
    loop {
        sum += &term;
        n += 1;
        term = -(term * &t) / count(n);
        if count(n) > t && term.abs() < tiny {
            break;
        }
    }
    let rounded = floor_to_grid(&sum);
    rounded.clamp(Rational::zero(), Rational::one())
}

fn accept<R: Rng + ?Sized>(
    acceptance: Acceptance,
    candidate: &Rational,
    current: &Rational,
    temperature: &Rational,
    rng: &mut R,
) -> bool {
    if candidate >= current {
        return true;
    }
    match acceptance {
        Acceptance::HillClimb => false,
        Acceptance::Anneal => {
            if temperature.is_zero() {
                return false;
            }
            let p = exp_neg(&((current - candidate) / temperature));
            let threshold = (p * Rational::from_integer(grid_scale())).to_integer();
            let draw = BigInt::from(rng.gen::<u64>() >> (64 - GRID_BITS));
            draw < threshold
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistoryEntry {
    pub iteration: u64,
    /// `None` for the initial candidate.
    pub mv: Option<Move>,
    /// Candidate score, `None` when the move was inapplicable.
    pub candidate: Option<Rational>,
    pub accepted: bool,
    pub current: Rational,
    pub best: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub iteration: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchRecord {
    pub config: SearchConfig,
    pub best_set: ElementSet,
    /// Score from a fresh evaluation of `best_set`.
    pub best_score: Score,
    /// Present when the best set is certified.
    pub best_report: Option<BoundReport>,
    pub history: Vec<HistoryEntry>,
    pub failures: Vec<Failure>,
}

/// Runs the configured search. Fully determined by the config, including
/// its seed. The best set is re-evaluated from scratch before returning.
pub fn run_search(config: &SearchConfig) -> Result<SearchRecord> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut failures = Vec::new();
    let mut log = |iteration: u64, score: &Score| {
        if let Outcome::Rejected(reason) = &score.outcome {
            failures.push(Failure {
                iteration,
                reason: reason.clone(),
            });
        }
    };

    let mut current = generate_candidate(config, &mut rng)?;
    let (mut current_score, _) = score_candidate(config, &current);
    log(0, &current_score);
    let mut best = current.clone();
    let mut best_score = current_score.clone();
    let mut history = vec![HistoryEntry {
        iteration: 0,
        mv: None,
        candidate: Some(current_score.ratio.clone()),
        accepted: true,
        current: current_score.ratio.clone(),
        best: best_score.ratio.clone(),
    }];
    let mut temperature = config.initial_temperature.clone();

    for iteration in 1..=config.iterations {
        let mv = config.moves[rng.gen_range(0..config.moves.len())];
        let (candidate, applied) = local_move(config, &current, mv, &mut rng);
        let mut entry = HistoryEntry {
            iteration,
            mv: Some(mv),
            candidate: None,
            accepted: false,
            current: Rational::zero(),
            best: Rational::zero(),
        };
        if applied {
            let (score, _) = score_candidate(config, &candidate);
            log(iteration, &score);
            entry.candidate = Some(score.ratio.clone());
            entry.accepted = accept(
                config.acceptance,
                &score.ratio,
                &current_score.ratio,
                &temperature,
                &mut rng,
            );
            if score.ratio > best_score.ratio {
                best = candidate.clone();
                best_score = score.clone();
            }
            if entry.accepted {
                current = candidate;
                current_score = score;
            }
        }
        if config.acceptance == Acceptance::Anneal {
            temperature = floor_to_grid(&(&temperature * &config.decay));
        }
        entry.current = current_score.ratio.clone();
        entry.best = best_score.ratio.clone();
        history.push(entry);
    }

    let (fresh, report) = score_candidate(config, &best);
    if fresh != best_score {
        return Err(Error::Reverification(format!(
            "recorded {}, fresh {}",
            format_rational(&best_score.ratio),
            format_rational(&fresh.ratio)
        )));
    }
    Ok(SearchRecord {
        config: config.clone(),
        best_set: best,
        best_score: fresh,
        best_report: report,
        history,
        failures,
    })
}
