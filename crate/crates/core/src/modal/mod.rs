//! Kripke frames, their modal operators, and (co/bi)simulations.

mod maps;
mod sim;

use std::sync::Arc;

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub use maps::{classify_frame_map, classify_map_raw, FrameMapReport, MapVerdict};
pub use sim::{
    check_simulatory, classify_sim, forth_back, greatest_fixpoint, greatest_fixpoint_within,
    lemma_equivalence_harness, LemmaReport, Side, SimCounterexample, SimKind, SimReport,
    SimulatoryReport,
};

pub use crate::buffer::{buffer_fixture, BufferFixture};

use crate::carrier::{Carrier, CarrierError, Subset};
use crate::config::{EnumConfig, EnumerationTooLarge};
use crate::lattice::{Caba, CabaElement, LatticeError};
use crate::relations::{FinRel, RelError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModalError {
    #[error("`{0}` is not an open map: {1}")]
    NotOpenMap(String, String),
    #[error("relation or map does not match the frames: {0}")]
    FrameMismatch(String),
    #[error("duplicate predicate `{0}`")]
    DuplicatePredicate(String),
    #[error(transparent)]
    Carrier(#[from] CarrierError),
    #[error(transparent)]
    Relation(#[from] RelError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    TooLarge(#[from] EnumerationTooLarge),
}

/// A finite Kripke frame with named predicates.
///
/// The world carrier is named after the frame, so relations between frames
/// are [`FinRel`]s between their world carriers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    worlds: Arc<Carrier>,
    trans: FinRel,
    valuation: IndexMap<String, Subset>,
}

impl Frame {
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        worlds: impl IntoIterator<Item = S>,
    ) -> Result<Self, ModalError> {
        Ok(Self::from_carrier(Carrier::new(name, worlds)?))
    }

    pub fn from_carrier(worlds: Arc<Carrier>) -> Self {
        let trans = FinRel::empty(worlds.clone(), worlds.clone());
        Self {
            worlds,
            trans,
            valuation: IndexMap::new(),
        }
    }

    /// Replaces the transition relation; it must be over this frame's worlds.
    pub fn with_transitions(mut self, trans: FinRel) -> Result<Self, ModalError> {
        if trans.src() != &self.worlds || trans.dst() != &self.worlds {
            return Err(ModalError::FrameMismatch(format!(
                "transitions `{} -> {}` on frame `{}`",
                trans.src().name(),
                trans.dst().name(),
                self.name()
            )));
        }
        self.trans = trans;
        Ok(self)
    }

    pub fn add_transition(&mut self, from: &str, to: &str) -> Result<(), ModalError> {
        let i = self.worlds.require(from)?;
        let j = self.worlds.require(to)?;
        self.trans.insert(i, j);
        Ok(())
    }

    pub fn add_predicate<'a>(
        &mut self,
        name: impl Into<String>,
        worlds: impl IntoIterator<Item = &'a str>,
    ) -> Result<(), ModalError> {
        let set = self.worlds.subset_of(worlds)?;
        self.set_predicate(name, set)
    }

    pub fn set_predicate(
        &mut self,
        name: impl Into<String>,
        set: Subset,
    ) -> Result<(), ModalError> {
        let name = name.into();
        if self.valuation.contains_key(&name) {
            return Err(ModalError::DuplicatePredicate(name));
        }
        self.valuation
            .insert(name, set.intersection(self.worlds.full()));
        Ok(())
    }

    pub fn name(&self) -> &str {
        self.worlds.name()
    }

    pub fn worlds(&self) -> &Arc<Carrier> {
        &self.worlds
    }

    pub fn transitions(&self) -> &FinRel {
        &self.trans
    }

    pub fn valuation(&self) -> &IndexMap<String, Subset> {
        &self.valuation
    }

    pub fn predicate(&self, name: &str) -> Option<Subset> {
        self.valuation.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn successors(&self, w: usize) -> Subset {
        self.trans.row(w)
    }

    /// `◆A = { w | ∃v ∈ A. v → w }`.
    pub fn diamond(&self, a: Subset) -> Subset {
        self.trans.image(a)
    }

    /// `□A = { w | ∀v. w → v ⇒ v ∈ A }`.
    pub fn boxed(&self, a: Subset) -> Subset {
        box_of(self.trans.rows(), a)
    }
}

pub(crate) fn diamond_of(rows: &[Subset], a: Subset) -> Subset {
    a.iter().fold(Subset::EMPTY, |acc, v| acc.union(rows[v]))
}

pub(crate) fn box_of(rows: &[Subset], a: Subset) -> Subset {
    rows.iter()
        .enumerate()
        .filter(|(_, r)| r.is_subset_of(a))
        .map(|(w, _)| w)
        .collect()
}

/// Result of checking `◆ ⊣ □`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdjunctionCheck {
    pub holds: bool,
    pub exhaustive: bool,
    pub pairs_checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// The powerset of a frame's worlds with its `◆ ⊣ □` pair.
#[derive(Debug, Clone)]
pub struct Cabao {
    caba: Caba,
    trans: FinRel,
    pub adjunction: AdjunctionCheck,
}

/// Pairs sampled when the adjunction is too large to check exhaustively.
const ADJUNCTION_SAMPLES: u64 = 4096;

/// Builds the operator algebra of `frame`, checking `◆A ⊆ B ⇔ A ⊆ □B` on
/// every pair when `2^|W| · 2^|W|` fits the bound, and on seeded samples
/// otherwise.
pub fn modal_operators(frame: &Frame, cfg: &EnumConfig) -> Cabao {
    let n = frame.len();
    let rows = frame.trans.rows();
    let violated = |a: Subset, b: Subset| {
        diamond_of(rows, a).is_subset_of(b) != a.is_subset_of(box_of(rows, b))
    };
    let render = |a: Subset, b: Subset| {
        format!(
            "A = {}, B = {}",
            frame.worlds.render(a),
            frame.worlds.render(b)
        )
    };
    let adjunction = if cfg.check_pairs(n, n).is_ok() {
        let witness = Subset::all(n)
            .flat_map(|a| Subset::all(n).map(move |b| (a, b)))
            .find(|&(a, b)| violated(a, b))
            .map(|(a, b)| render(a, b));
        AdjunctionCheck {
            holds: witness.is_none(),
            exhaustive: true,
            pairs_checked: 1 << (2 * n),
            witness,
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let full = frame.worlds.full().0;
        let witness = (0..ADJUNCTION_SAMPLES)
            .map(|_| {
                (
                    Subset(rng.gen::<u64>() & full),
                    Subset(rng.gen::<u64>() & full),
                )
            })
            .find(|&(a, b)| violated(a, b))
            .map(|(a, b)| render(a, b));
        AdjunctionCheck {
            holds: witness.is_none(),
            exhaustive: false,
            pairs_checked: ADJUNCTION_SAMPLES,
            witness,
        }
    };
    Cabao {
        caba: Caba::powerset(frame.worlds.clone()),
        trans: frame.trans.clone(),
        adjunction,
    }
}

impl Cabao {
    pub fn caba(&self) -> &Caba {
        &self.caba
    }

    pub fn diamond(&self, a: Subset) -> Subset {
        diamond_of(self.trans.rows(), a)
    }

    pub fn boxed(&self, a: Subset) -> Subset {
        box_of(self.trans.rows(), a)
    }

    pub fn diamond_element(&self, a: &CabaElement) -> CabaElement {
        self.caba.element(self.diamond(a.atom_set()))
    }

    pub fn box_element(&self, a: &CabaElement) -> CabaElement {
        self.caba.element(self.boxed(a.atom_set()))
    }

    /// `◆` as a table over every subset, in binary counting order.
    pub(crate) fn diamond_table(&self) -> Vec<Subset> {
        Subset::all(self.caba.atom_count())
            .map(|a| self.diamond(a))
            .collect()
    }

    pub(crate) fn box_table(&self) -> Vec<Subset> {
        Subset::all(self.caba.atom_count())
            .map(|a| self.boxed(a))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a_to_b() -> Frame {
        let mut f = Frame::new("F", ["a", "b"]).unwrap();
        f.add_transition("a", "b").unwrap();
        f
    }

    #[test]
    fn diamond_and_box_on_a_to_b() {
        let f = a_to_b();
        let ops = modal_operators(&f, &EnumConfig::default());
        let w = f.worlds();
        assert_eq!(
            ops.diamond(w.subset_of(["a"]).unwrap()),
            w.subset_of(["b"]).unwrap()
        );
        assert_eq!(ops.boxed(w.subset_of(["b"]).unwrap()), w.full());
        assert_eq!(ops.diamond(Subset::EMPTY), Subset::EMPTY);
        assert!(ops.adjunction.holds && ops.adjunction.exhaustive);
    }

    #[test]
    fn adjunction_is_sampled_on_large_frames() {
        let worlds: Vec<String> = (0..12).map(|i| format!("w{i}")).collect();
        let mut f = Frame::new("Big", worlds.iter().map(String::as_str)).unwrap();
        for i in 0..12 {
            f.add_transition(&worlds[i], &worlds[(i * 5 + 1) % 12])
                .unwrap();
        }
        let ops = modal_operators(&f, &EnumConfig::default());
        assert!(!ops.adjunction.exhaustive);
        assert!(ops.adjunction.holds);
    }

    #[test]
    fn transitions_must_live_on_the_frame() {
        let other = Carrier::new("G", ["a", "b"]).unwrap();
        let err = a_to_b()
            .with_transitions(FinRel::empty(other.clone(), other))
            .unwrap_err();
        assert!(matches!(err, ModalError::FrameMismatch(_)));
        let mut f = a_to_b();
        assert!(matches!(
            f.add_transition("a", "zz"),
            Err(ModalError::Carrier(_))
        ));
        f.add_predicate("p", ["a"]).unwrap();
        assert!(matches!(
            f.add_predicate("p", ["b"]),
            Err(ModalError::DuplicatePredicate(_))
        ));
    }
}
