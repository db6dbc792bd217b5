use std::collections::BTreeSet;

use crate::algebra::CdNumber;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::set::ElementSet;
use crate::setops::Side;

/// `(a, b, c, d)` with `a + c = p`, `b + d = q`.
pub type Quadruple = [CdNumber; 4];

/// `S_x = {(a + c, b + d) : quot(a, b) = x, quot(c, d) = φ(x)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SxSet {
    pub x: CdNumber,
    pub phi_x: CdNumber,
    pub side: Side,
    pub pairs: BTreeSet<(CdNumber, CdNumber)>,
    /// Every quadruple behind the pairs, one per combination of
    /// representatives.
    pub quadruples: Vec<Quadruple>,
    pub reps_x: u64,
    pub reps_phi: u64,
    /// Quadruples recovered exactly from their pair by [`solve_quadruple`].
    pub solver_hits: usize,
}

impl SxSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `reps(x) * reps(φ(x))`, the size when no two quadruples collide.
    pub fn expected_len(&self) -> u64 {
        self.reps_x * self.reps_phi
    }

    pub fn injective(&self) -> bool {
        self.len() as u64 == self.expected_len()
    }
}

fn representatives(a: &ElementSet, inv: &[CdNumber], q: &CdNumber, side: Side) -> Vec<(CdNumber, CdNumber)> {
    let mut out = Vec::new();
    for u in a {
        for (v, v_inv) in a.iter().zip(inv) {
            if &side.quotient(u, v_inv) == q {
                out.push((u.clone(), v.clone()));
            }
        }
    }
    out
}

pub fn build_sx(a: &ElementSet, x: &CdNumber, phi_x: &CdNumber, side: Side) -> Result<SxSet> {
    if x == phi_x {
        return Err(Error::SameQuotient);
    }
    a.require_nonzero()?;
    let inv = a.iter().map(CdNumber::inverse).collect::<Result<Vec<_>>>()?;
    let reps_x = representatives(a, &inv, x, side);
    let reps_phi = representatives(a, &inv, phi_x, side);

    let mut pairs = BTreeSet::new();
    let mut quadruples = Vec::with_capacity(reps_x.len() * reps_phi.len());
    let mut solver_hits = 0;
    for (qa, qb) in &reps_x {
        for (qc, qd) in &reps_phi {
            let p = qa + qc;
            let q = qb + qd;
            let quad = [qa.clone(), qb.clone(), qc.clone(), qd.clone()];
            if solve_quadruple(side, &p, &q, x, phi_x).as_ref() == Some(&quad) {
                solver_hits += 1;
            }
            pairs.insert((p, q));
            quadruples.push(quad);
        }
    }
    Ok(SxSet {
        x: x.clone(),
        phi_x: phi_x.clone(),
        side,
        pairs,
        quadruples,
        reps_x: reps_x.len() as u64,
        reps_phi: reps_phi.len() as u64,
        solver_hits,
    })
}

/// The closed-form solution of `a + c = p`, `b + d = q`, `quot(a, b) = x`,
/// `quot(c, d) = y`:
///
/// ```text
/// d = (y - x)^-1 (p - x q),  b = q - d,  c = y d | d y,  a = x b | b x
/// ```
///
/// (left | right quotients). Returns the quadruple only if it actually
/// satisfies all four equations; in the 16-ons the derivation needs
/// identities that do not hold in general.
pub fn solve_quadruple(
    side: Side,
    p: &CdNumber,
    q: &CdNumber,
    x: &CdNumber,
    y: &CdNumber,
) -> Option<Quadruple> {
    let diff_inv = (y - x).inverse().ok()?;
    let d = &diff_inv * &(p - &(x * q));
    let b = q - &d;
    let (a, c) = match side {
        Side::Left => (x * &b, y * &d),
        Side::Right => (&b * x, &d * y),
    };
    let b_inv = b.inverse().ok()?;
    let d_inv = d.inverse().ok()?;
    let ok = &(&a + &c) == p
        && &(&b + &d) == q
        && &side.quotient(&a, &b_inv) == x
        && &side.quotient(&c, &d_inv) == y;
    ok.then_some([a, b, c, d])
}

/// Result of checking that every quotient of sums lands in the closed ball
/// around `x` of radius `|φ(x) - x|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BallCheck {
    /// The set does not lie in one privileged orthant; nothing certified.
    NotApplicable,
    Holds { checked: usize },
    Fails {
        quadruple: Box<Quadruple>,
        lhs: Rational,
        rhs: Rational,
    },
}

impl BallCheck {
    pub fn passed(&self) -> bool {
        matches!(self, BallCheck::Holds { .. })
    }
}

pub fn verify_ball_lemma(a: &ElementSet, sx: &SxSet, side: Side) -> BallCheck {
    if a.privileged_orthant().is_none() {
        return BallCheck::NotApplicable;
    }
    let radius = (&sx.phi_x - &sx.x).norm_sq();
    for quad in &sx.quadruples {
        let [qa, qb, qc, qd] = quad;
        let p = qa + qc;
        let q = qb + qd;
        let Ok(q_inv) = q.inverse() else {
            return BallCheck::Fails {
                quadruple: Box::new(quad.clone()),
                lhs: Rational::default(),
                rhs: radius,
            };
        };
        let quotient = side.quotient(&p, &q_inv);
        let dist = (&quotient - &sx.x).norm_sq();
        if dist > radius {
            return BallCheck::Fails {
                quadruple: Box::new(quad.clone()),
                lhs: dist,
                rhs: radius,
            };
        }
    }
    BallCheck::Holds {
        checked: sx.quadruples.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn reals(values: &[Rational]) -> ElementSet {
        ElementSet::new(4, values.iter().map(|v| CdNumber::real(4, v.clone()))).unwrap()
    }

    fn real(v: Rational) -> CdNumber {
        CdNumber::real(4, v)
    }

    #[test]
    fn one_by_one_gives_one_pair() {
        let a = reals(&[int(1), int(2)]);
        let s = build_sx(&a, &real(int(2)), &real(ratio(1, 2)), Side::Right).unwrap();
        assert_eq!((s.reps_x, s.reps_phi), (1, 1));
        assert_eq!(s.len(), 1);
        // (2 + 1, 1 + 2)
        assert!(s.pairs.contains(&(real(int(3)), real(int(3)))));
    }

    #[test]
    fn one_two_four() {
        // quadruple enumeration: 2 = 2/1 = 4/2, 4 = 4/1
        let a = reals(&[int(1), int(2), int(4)]);
        for side in [Side::Left, Side::Right] {
            let s = build_sx(&a, &real(int(2)), &real(int(4)), side).unwrap();
            assert_eq!(s.len(), 2);
            assert!(s.injective());
            assert_eq!(s.solver_hits, 2);
            let expected: BTreeSet<_> = [
                (real(int(6)), real(int(2))),
                (real(int(8)), real(int(3))),
            ]
            .into_iter()
            .collect();
            assert_eq!(s.pairs, expected);
        }
    }

    #[test]
    fn same_quotient_rejected() {
        let a = reals(&[int(1), int(2)]);
        assert_eq!(
            build_sx(&a, &real(int(2)), &real(int(2)), Side::Left),
            Err(Error::SameQuotient)
        );
    }

    #[test]
    fn mediant_lies_between() {
        let a = reals(&[int(1), int(2), int(3), int(5)]);
        let s = build_sx(&a, &real(ratio(2, 3)), &real(ratio(3, 5)), Side::Right).unwrap();
        assert!(verify_ball_lemma(&a, &s, Side::Right).passed());
    }

    #[test]
    fn ball_check_requires_an_orthant() {
        let a = reals(&[int(1), int(-2)]);
        let s = build_sx(&a, &real(int(-2)), &real(ratio(-1, 2)), Side::Right).unwrap();
        assert_eq!(verify_ball_lemma(&a, &s, Side::Right), BallCheck::NotApplicable);
    }

    #[test]
    fn near_equal_quotients_land_inside() {
        // quotients 3/4 and 4/5 are close; every mediant lies strictly inside
        let a = reals(&[int(3), int(4), int(5)]);
        let s = build_sx(&a, &real(ratio(3, 4)), &real(ratio(4, 5)), Side::Left).unwrap();
        let radius = (&s.phi_x - &s.x).norm_sq();
        for [qa, qb, qc, qd] in &s.quadruples {
            let med = &(qa + qc) * &(qb + qd).inverse().unwrap();
            assert!((&med - &s.x).norm_sq() < radius);
        }
        assert!(verify_ball_lemma(&a, &s, Side::Left).passed());
    }
}
