use std::collections::HashSet;

use num_traits::Zero;

use crate::algebra::{dim, CdNumber, SignClass, SIXTEEN_ON_LEVEL};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A finite set of 2^n-ons at a single level, kept in canonical
/// (lexicographic) order without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElementSet {
    level: u8,
    elements: Vec<CdNumber>,
}

/// Structural properties of a set, as recorded in set files.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SetFlags {
    pub nonzero: bool,
    pub inverse_closed: bool,
    pub all_niner: bool,
    pub single_privileged_orthant: bool,
}

impl ElementSet {
    pub fn new(level: u8, elements: impl IntoIterator<Item = CdNumber>) -> Result<Self> {
        if level > crate::algebra::MAX_LEVEL {
            return Err(Error::LevelOutOfRange(level));
        }
        let mut elements: Vec<CdNumber> = elements.into_iter().collect();
        if let Some(bad) = elements.iter().find(|x| x.level() != level) {
            return Err(Error::LevelMismatch {
                left: level,
                right: bad.level(),
            });
        }
        elements.sort();
        elements.dedup();
        Ok(ElementSet { level, elements })
    }

    /// Infers the level from the first element; the input must be nonempty.
    pub fn from_elements(elements: Vec<CdNumber>) -> Result<Self> {
        let level = elements.first().ok_or(Error::EmptySet)?.level();
        Self::new(level, elements)
    }

    pub fn empty(level: u8) -> Self {
        ElementSet {
            level,
            elements: Vec::new(),
        }
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CdNumber] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CdNumber> {
        self.elements.iter()
    }

    pub fn contains(&self, x: &CdNumber) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn contains_zero(&self) -> bool {
        self.elements.iter().any(CdNumber::is_zero)
    }

    pub(crate) fn require_nonzero(&self) -> Result<()> {
        if self.contains_zero() {
            Err(Error::ZeroInSet)
        } else {
            Ok(())
        }
    }

    pub fn is_inverse_closed(&self) -> bool {
        let members: HashSet<&CdNumber> = self.elements.iter().collect();
        self.elements
            .iter()
            .all(|x| x.inverse().map(|inv| members.contains(&inv)).unwrap_or(false))
    }

    pub fn is_all_niner(&self) -> bool {
        self.level == SIXTEEN_ON_LEVEL
            && self.elements.iter().all(|x| x.is_niner().unwrap_or(false))
    }

    /// Coordinates that are nonzero in at least one element.
    pub fn support(&self) -> Vec<bool> {
        (0..dim(self.level))
            .map(|i| self.elements.iter().any(|x| !x.coords()[i].is_zero()))
            .collect()
    }

    /// The privileged orthant shared by every element, if any.
    ///
    /// Signs are taken on the common support of the set: coordinates that
    /// vanish on every element are ignored, every other coordinate must be
    /// strictly positive (or strictly negative) on every element. Niners and
    /// lower-level numbers embedded in the 16-ons have identically-zero
    /// coordinates, and those do not affect `|b + d| >= |d|`.
    pub fn privileged_orthant(&self) -> Option<SignClass> {
        let first = self.elements.first()?;
        let support = self.support();
        let class = first.sign_class_on(&support);
        if !class.is_privileged() {
            return None;
        }
        self.elements
            .iter()
            .all(|x| x.sign_class_on(&support) == class)
            .then_some(class)
    }

    pub fn flags(&self) -> SetFlags {
        SetFlags {
            nonzero: !self.contains_zero(),
            inverse_closed: self.is_inverse_closed(),
            all_niner: self.is_all_niner(),
            single_privileged_orthant: self.privileged_orthant().is_some(),
        }
    }

    /// `{s * a : a in A}`.
    pub fn scale(&self, s: &Rational) -> ElementSet {
        ElementSet::new(self.level, self.elements.iter().map(|x| x.scale(s)))
            .expect("scaling preserves level")
    }

    /// Adds every missing inverse.
    pub fn inverse_closure(&self) -> Result<ElementSet> {
        self.require_nonzero()?;
        let mut all = self.elements.clone();
        for x in &self.elements {
            all.push(x.inverse()?);
        }
        ElementSet::new(self.level, all)
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = &'a CdNumber;
    type IntoIter = std::slice::Iter<'a, CdNumber>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}
