use serde::Serialize;

use crate::carrier::Subset;
use crate::config::EnumConfig;
use crate::lattice::FiniteFunction;

use super::{box_of, Frame, ModalError};

/// The four independent verdicts on a map between frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MapVerdict {
    /// Transitions are preserved.
    pub morphism: bool,
    /// `f^* ∘ □_Y ⊆ □_X ∘ f^*` pointwise.
    pub morphism_via_box: bool,
    /// A morphism whose every target transition lifts back.
    pub open: bool,
    /// `f^* ∘ □_Y = □_X ∘ f^*`.
    pub open_via_box: bool,
}

impl MapVerdict {
    /// Both morphism tests agree and both openness tests agree.
    pub fn consistent(&self) -> bool {
        self.morphism == self.morphism_via_box && self.open == self.open_via_box
    }
}

/// Classifies `map` (source world index to target world index) using only the
/// successor masks of both frames.
pub fn classify_map_raw(map: &[usize], x_rows: &[Subset], y_rows: &[Subset]) -> MapVerdict {
    let image = |s: Subset| s.iter().fold(Subset::EMPTY, |acc, x| acc.with(map[x]));
    let preimage =
        |b: Subset| -> Subset { (0..map.len()).filter(|&x| b.contains(map[x])).collect() };

    let morphism = (0..map.len()).all(|x| image(x_rows[x]).is_subset_of(y_rows[map[x]]));
    let back = (0..map.len()).all(|x| y_rows[map[x]].is_subset_of(image(x_rows[x])));

    let mut morphism_via_box = true;
    let mut open_via_box = true;
    for b in Subset::all(y_rows.len()) {
        let lhs = preimage(box_of(y_rows, b));
        let rhs = box_of(x_rows, preimage(b));
        if !lhs.is_subset_of(rhs) {
            morphism_via_box = false;
        }
        if lhs != rhs {
            open_via_box = false;
        }
        if !morphism_via_box && !open_via_box {
            break;
        }
    }
    MapVerdict {
        morphism,
        morphism_via_box,
        open: morphism && back,
        open_via_box,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrameMapReport {
    pub verdict: MapVerdict,
    /// A source transition `x -> x'` whose image is not a transition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub morphism_witness: Option<String>,
    /// A target transition out of `f(x)` with no matching source transition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub open_witness: Option<String>,
    /// A target predicate `B` where the two sides of the box test differ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub box_witness: Option<String>,
}

impl FrameMapReport {
    pub fn morphism(&self) -> bool {
        self.verdict.morphism
    }

    pub fn open(&self) -> bool {
        self.verdict.open
    }
}

/// Classifies `f : X → Y` as a frame morphism and as an open map, each both
/// directly and through the box operators.
pub fn classify_frame_map(
    f: &FiniteFunction,
    x: &Frame,
    y: &Frame,
    cfg: &EnumConfig,
) -> Result<FrameMapReport, ModalError> {
    if f.src() != x.worlds() || f.dst() != y.worlds() {
        return Err(ModalError::FrameMismatch(format!(
            "map `{} -> {}` between frames `{}` and `{}`",
            f.src().name(),
            f.dst().name(),
            x.name(),
            y.name()
        )));
    }
    cfg.check_count(1u128 << y.len())?;
    let map = f.mapping();
    let (xr, yr) = (x.transitions().rows(), y.transitions().rows());
    let verdict = classify_map_raw(map, xr, yr);
    let (xw, yw) = (x.worlds(), y.worlds());

    let morphism_witness = (0..map.len()).find_map(|a| {
        xr[a]
            .iter()
            .find(|&b| !yr[map[a]].contains(map[b]))
            .map(|b| {
                format!(
                    "{} -> {} maps to {} -> {}, which is not a transition",
                    xw.element(a),
                    xw.element(b),
                    yw.element(map[a]),
                    yw.element(map[b])
                )
            })
    });
    let open_witness = (0..map.len()).find_map(|a| {
        let reached: Subset = xr[a].iter().map(|b| map[b]).collect();
        yr[map[a]].difference(reached).iter().next().map(|t| {
            format!(
                "{} -> {} has no preimage transition from {}",
                yw.element(map[a]),
                yw.element(t),
                xw.element(a)
            )
        })
    });
    let box_witness = Subset::all(y.len()).find_map(|b| {
        let lhs = f.preimage(y.boxed(b));
        let rhs = x.boxed(f.preimage(b));
        (lhs != rhs).then(|| {
            format!(
                "B = {}: f*(box B) = {}, box f*(B) = {}",
                yw.render(b),
                xw.render(lhs),
                xw.render(rhs)
            )
        })
    });
    Ok(FrameMapReport {
        verdict,
        morphism_witness,
        open_witness,
        box_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_open() {
        let mut f = Frame::new("F", ["a", "b"]).unwrap();
        f.add_transition("a", "b").unwrap();
        f.add_transition("b", "b").unwrap();
        let id = FiniteFunction::identity(f.worlds().clone());
        let r = classify_frame_map(&id, &f, &f, &EnumConfig::default()).unwrap();
        assert!(r.morphism() && r.open() && r.verdict.consistent());
        assert!(r.box_witness.is_none());
    }

    #[test]
    fn deadlocked_world_onto_live_one_is_not_open() {
        let x = Frame::new("One", ["z"]).unwrap();
        let mut y = Frame::new("F", ["a", "b"]).unwrap();
        y.add_transition("a", "b").unwrap();
        let f = FiniteFunction::from_pairs(x.worlds().clone(), y.worlds().clone(), [("z", "a")])
            .unwrap();
        let r = classify_frame_map(&f, &x, &y, &EnumConfig::default()).unwrap();
        assert!(r.morphism());
        assert!(!r.open());
        assert!(r.verdict.consistent());
        assert_eq!(
            r.open_witness.as_deref(),
            Some("a -> b has no preimage transition from z")
        );
    }

    #[test]
    fn non_morphism_has_witness() {
        let mut x = Frame::new("X", ["p", "q"]).unwrap();
        x.add_transition("p", "q").unwrap();
        let y = Frame::new("Y", ["u"]).unwrap();
        let f = FiniteFunction::from_pairs(
            x.worlds().clone(),
            y.worlds().clone(),
            [("p", "u"), ("q", "u")],
        )
        .unwrap();
        let r = classify_frame_map(&f, &x, &y, &EnumConfig::default()).unwrap();
        assert!(!r.morphism() && !r.verdict.morphism_via_box);
        assert!(r.morphism_witness.unwrap().starts_with("p -> q"));
    }

    #[test]
    fn map_must_match_frames() {
        let x = Frame::new("X", ["p"]).unwrap();
        let y = Frame::new("Y", ["u"]).unwrap();
        let id = FiniteFunction::identity(x.worlds().clone());
        assert!(matches!(
            classify_frame_map(&id, &x, &y, &EnumConfig::default()),
            Err(ModalError::FrameMismatch(_))
        ));
    }
}
