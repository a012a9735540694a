//! Seeded random generators for relations, functions and frames.

use std::sync::Arc;

use rand::Rng;

use crate::carrier::{Carrier, Subset};
use crate::lattice::FiniteFunction;
use crate::modal::Frame;
use crate::relations::FinRel;

/// Each pair is included independently with probability one half.
pub fn random_rel(rng: &mut impl Rng, src: &Arc<Carrier>, dst: &Arc<Carrier>) -> FinRel {
    let full = dst.full().0;
    let rows = (0..src.len())
        .map(|_| Subset(rng.gen::<u64>() & full))
        .collect();
    FinRel::from_rows(src.clone(), dst.clone(), rows)
}

pub fn random_function(
    rng: &mut impl Rng,
    src: &Arc<Carrier>,
    dst: &Arc<Carrier>,
) -> FiniteFunction {
    let map = (0..src.len())
        .map(|_| rng.gen_range(0..dst.len()))
        .collect();
    FiniteFunction::new(src.clone(), dst.clone(), map).expect("random map is total")
}

/// A frame named `name` on worlds `0..size` with random transitions.
pub fn random_frame(rng: &mut impl Rng, name: &str, size: usize) -> Frame {
    let worlds = Carrier::numbered(name, size);
    let trans = random_rel(rng, &worlds, &worlds);
    Frame::from_carrier(worlds)
        .with_transitions(trans)
        .expect("transitions are over the frame's worlds")
}

/// A carrier named `name` whose size is drawn from `1..=max`.
pub fn random_carrier(rng: &mut impl Rng, name: &str, max: usize) -> Arc<Carrier> {
    Carrier::numbered(name, rng.gen_range(1..=max))
}
