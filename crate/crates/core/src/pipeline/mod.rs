//! Dyadic selection of R, the nearest-neighbour map φ, the sets S_x, and the
//! kissing-number lower-bound functional `Σ|S_x| / |∪ S_x| - 1` with an
//! audit of every inequality in the chain that bounds it.

mod buckets;
mod phi;
mod report;
mod sx;

use std::fmt;

use crate::rational::Rational;
use crate::setops::Side;

pub use buckets::{log_factor, select_r, DyadicBuckets};
pub use phi::phi_map;
pub use report::{
    evaluate_bound, octonion_sum_product, BoundReport, Certification, CompanionSummary,
    SanityCheck, SumProductCheck, SxSummary,
};
pub use sx::{build_sx, solve_quadruple, verify_ball_lemma, BallCheck, Quadruple, SxSet};

/// Which half of the argument is being run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Octonion sets, left quotients, ball-count constant 241.
    Octonion,
    /// Niner sets in the 16-ons, right quotients, ball-count constant 7333.
    SixteenOn,
}

impl Mode {
    /// Upper bound on the number of mutually non-central balls through a
    /// point: the kissing number (or its best upper bound) plus one.
    pub fn ball_constant(self) -> u64 {
        match self {
            Mode::Octonion => 241,
            Mode::SixteenOn => 7333,
        }
    }

    /// Ceiling that `k_lower` must never exceed: `k_8 = 240` and `k_16 <= 7332`.
    pub fn kissing_ceiling(self) -> u64 {
        self.ball_constant() - 1
    }

    pub fn default_side(self) -> Side {
        match self {
            Mode::Octonion => Side::Left,
            Mode::SixteenOn => Side::Right,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Octonion => "octonion",
            Mode::SixteenOn => "sixteen_on",
        }
    }
}

/// Which representation count drives the dyadic bucketing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CountBasis {
    /// Always the left-quotient count `ℓ`, whatever side S_x uses.
    Intro,
    /// The count matching the quotient S_x is built from.
    Strict,
}

impl CountBasis {
    pub fn requested_side(self, sx_side: Side) -> Side {
        match self {
            CountBasis::Intro => Side::Left,
            CountBasis::Strict => sx_side,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CountBasis::Intro => "intro",
            CountBasis::Strict => "strict",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    pub mode: Mode,
    pub side: Side,
    pub basis: CountBasis,
    /// Compute S_x and the ratio even when the set is not certified.
    pub allow_uncertified: bool,
}

impl EvalOptions {
    pub fn new(mode: Mode) -> Self {
        EvalOptions {
            mode,
            side: mode.default_side(),
            basis: CountBasis::Intro,
            allow_uncertified: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Lt,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Ge => lhs >= rhs,
            Relation::Lt => lhs < rhs,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Ge => ">=",
            Relation::Lt => "<",
        })
    }
}

/// One inequality of the chain, evaluated exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStage {
    pub name: &'static str,
    pub statement: &'static str,
    pub lhs: Rational,
    pub relation: Relation,
    pub rhs: Rational,
    pub holds: bool,
    /// Audited stages must hold on certified inputs; the rest are recorded
    /// for comparison only.
    pub audited: bool,
}

impl ChainStage {
    pub fn new(
        name: &'static str,
        statement: &'static str,
        lhs: Rational,
        relation: Relation,
        rhs: Rational,
        audited: bool,
    ) -> Self {
        let holds = relation.holds(&lhs, &rhs);
        ChainStage {
            name,
            statement,
            lhs,
            relation,
            rhs,
            holds,
            audited,
        }
    }
}
