//! Deterministic inputs for the benches.

use duality_lab::{Carrier, FinRel, Frame, Subset};

/// A relation between numbered carriers whose rows follow a fixed pattern
/// derived from `salt`.
pub fn patterned_rel(n: usize, m: usize, salt: u64) -> FinRel {
    let (x, y) = (Carrier::numbered("X", n), Carrier::numbered("Y", m));
    let mask = y.full().0;
    let rows = (0..n as u64)
        .map(|i| {
            Subset(
                i.wrapping_mul(0x9E37_79B9_7F4A_7C15)
                    .wrapping_add(salt)
                    .rotate_left(17)
                    & mask,
            )
        })
        .collect();
    FinRel::from_rows(x, y, rows)
}

/// `n` worlds in a cycle, each also stepping two ahead.
pub fn ring(name: &str, n: usize) -> Frame {
    let w = Carrier::numbered(name, n);
    let rows = (0..n)
        .map(|i| Subset::singleton((i + 1) % n).with((i + 2) % n))
        .collect();
    Frame::from_carrier(w.clone())
        .with_transitions(FinRel::from_rows(w.clone(), w, rows))
        .expect("rows over the ring")
}
