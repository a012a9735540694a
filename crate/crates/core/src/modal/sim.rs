use serde::Serialize;

use crate::carrier::Subset;
use crate::config::EnumConfig;
use crate::lattice::LawCheck;
use crate::relations::{self, lower_holds, lower_lift, CabaRel, DaReport, FinRel, RelError};

use super::{Cabao, Frame, ModalError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Forth,
    Back,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SimKind {
    Simulation,
    Bisimulation,
}

/// A related pair whose forth or back condition fails at `transition`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimCounterexample {
    pub pair: (String, String),
    pub side: Side,
    pub transition: (String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimReport {
    pub is_simulation: bool,
    pub is_cosimulation: bool,
    pub is_bisimulation: bool,
    pub counterexamples: Vec<SimCounterexample>,
}

fn check_frames(q: &FinRel, x: &Frame, y: &Frame) -> Result<(), ModalError> {
    if q.src() != x.worlds() || q.dst() != y.worlds() {
        return Err(ModalError::FrameMismatch(format!(
            "relation `{} -> {}` between frames `{}` and `{}`",
            q.src().name(),
            q.dst().name(),
            x.name(),
            y.name()
        )));
    }
    Ok(())
}

/// First successor of `x` with no matching successor of `y`.
fn forth_failure(q: &[Subset], xr: &[Subset], yr: &[Subset], x: usize, y: usize) -> Option<usize> {
    xr[x].iter().find(|&x2| !q[x2].intersects(yr[y]))
}

/// First successor of `y` with no matching successor of `x`.
fn back_failure(qt: &[Subset], xr: &[Subset], yr: &[Subset], x: usize, y: usize) -> Option<usize> {
    yr[y].iter().find(|&y2| !qt[y2].intersects(xr[x]))
}

/// `(is_simulation, is_cosimulation)` without collecting witnesses.
pub fn forth_back(q: &FinRel, x: &Frame, y: &Frame) -> (bool, bool) {
    let qt = q.dagger();
    let (xr, yr) = (x.transitions().rows(), y.transitions().rows());
    let mut sim = true;
    let mut cosim = true;
    for (a, b) in q.pairs() {
        sim &= forth_failure(q.rows(), xr, yr, a, b).is_none();
        cosim &= back_failure(qt.rows(), xr, yr, a, b).is_none();
        if !sim && !cosim {
            break;
        }
    }
    (sim, cosim)
}

/// Checks the forth and back conditions on every related pair.
pub fn classify_sim(q: &FinRel, x: &Frame, y: &Frame) -> Result<SimReport, ModalError> {
    check_frames(q, x, y)?;
    let qt = q.dagger();
    let (xr, yr) = (x.transitions().rows(), y.transitions().rows());
    let (xw, yw) = (x.worlds(), y.worlds());
    let mut counterexamples = Vec::new();
    for (a, b) in q.pairs() {
        let pair = (xw.element(a).to_owned(), yw.element(b).to_owned());
        for a2 in xr[a].iter().filter(|&a2| !q.row(a2).intersects(yr[b])) {
            counterexamples.push(SimCounterexample {
                pair: pair.clone(),
                side: Side::Forth,
                transition: (xw.element(a).to_owned(), xw.element(a2).to_owned()),
            });
        }
        for b2 in yr[b].iter().filter(|&b2| !qt.row(b2).intersects(xr[a])) {
            counterexamples.push(SimCounterexample {
                pair: pair.clone(),
                side: Side::Back,
                transition: (yw.element(b).to_owned(), yw.element(b2).to_owned()),
            });
        }
    }
    let is_simulation = !counterexamples.iter().any(|c| c.side == Side::Forth);
    let is_cosimulation = !counterexamples.iter().any(|c| c.side == Side::Back);
    Ok(SimReport {
        is_simulation,
        is_cosimulation,
        is_bisimulation: is_simulation && is_cosimulation,
        counterexamples,
    })
}

/// The largest (bi)simulation between `x` and `y`.
pub fn greatest_fixpoint(kind: SimKind, x: &Frame, y: &Frame) -> FinRel {
    let total = FinRel::total(x.worlds().clone(), y.worlds().clone());
    greatest_fixpoint_within(kind, x, y, &total).expect("total relation matches the frames")
}

/// The largest (bi)simulation contained in `start`: violating pairs are
/// removed until none remain.
pub fn greatest_fixpoint_within(
    kind: SimKind,
    x: &Frame,
    y: &Frame,
    start: &FinRel,
) -> Result<FinRel, ModalError> {
    check_frames(start, x, y)?;
    let (xr, yr) = (x.transitions().rows(), y.transitions().rows());
    let mut q = start.clone();
    loop {
        let qt = q.dagger();
        let violating: Vec<(usize, usize)> = q
            .pairs()
            .filter(|&(a, b)| {
                forth_failure(q.rows(), xr, yr, a, b).is_some()
                    || (kind == SimKind::Bisimulation
                        && back_failure(qt.rows(), xr, yr, a, b).is_some())
            })
            .collect();
        if violating.is_empty() {
            return Ok(q);
        }
        for (a, b) in violating {
            q.remove(a, b);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimulatoryReport {
    pub directionally_atomic: DaReport,
    /// `A Q □B ⇒ ◆A Q B`.
    pub simulatory: LawCheck,
    /// `B Ř □A ⇒ ◆B Ř A`, with `Ř` computed from its definition.
    pub cosimulatory: LawCheck,
    pub bisimulatory: bool,
}

/// Checks a directionally atomic relation between operator algebras for the
/// simulatory and cosimulatory implications, over every pair of elements.
pub fn check_simulatory(
    q: &CabaRel,
    src: &Cabao,
    dst: &Cabao,
    cfg: &EnumConfig,
) -> Result<SimulatoryReport, ModalError> {
    if q.src() != src.caba() || q.dst() != dst.caba() {
        return Err(ModalError::FrameMismatch(format!(
            "relation `{} -> {}` between algebras `{}` and `{}`",
            q.src().name(),
            q.dst().name(),
            src.caba().name(),
            dst.caba().name()
        )));
    }
    let da = relations::check_directionally_atomic(q, cfg)?;
    if let Some(reason) = da.first_failure() {
        return Err(RelError::NotDirectionallyAtomic(reason).into());
    }
    let m = q.matrix(cfg)?;
    let v = relations::variant_by_definition(q, cfg)?.matrix(cfg)?;
    let (n, k) = (src.caba().atom_count(), dst.caba().atom_count());
    let (dia_src, box_src) = (src.diamond_table(), src.box_table());
    let (dia_dst, box_dst) = (dst.diamond_table(), dst.box_table());
    let render = |a: Subset, b: Subset| {
        format!(
            "A = {}, B = {}",
            src.caba().atoms().render(a),
            dst.caba().atoms().render(b)
        )
    };

    let sim = Subset::all(n)
        .flat_map(|a| Subset::all(k).map(move |b| (a, b)))
        .find(|&(a, b)| m.get(a, box_dst[b.0 as usize]) && !m.get(dia_src[a.0 as usize], b))
        .map(|(a, b)| render(a, b));
    let cosim = Subset::all(k)
        .flat_map(|b| Subset::all(n).map(move |a| (b, a)))
        .find(|&(b, a)| v.get(b, box_src[a.0 as usize]) && !v.get(dia_dst[b.0 as usize], a))
        .map(|(b, a)| render(a, b));

    let bisimulatory = sim.is_none() && cosim.is_none();
    Ok(SimulatoryReport {
        directionally_atomic: da,
        simulatory: sim.map_or_else(LawCheck::pass, LawCheck::fail),
        cosimulatory: cosim.map_or_else(LawCheck::pass, LawCheck::fail),
        bisimulatory,
    })
}

/// The three equivalent characterisations of simulation (and, through the
/// variant, of cosimulation), each evaluated on its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    /// forth condition; `A ⇓Q B ⇒ ◆A ⇓Q ◆B`; `A ⇓Q □B ⇒ ◆A ⇓Q B`.
    pub simulation: [bool; 3],
    /// back condition; `B Ř A ⇒ ◆B Ř ◆A`; `B Ř □A ⇒ ◆B Ř A`.
    pub cosimulation: [bool; 3],
}

impl LemmaReport {
    pub fn agree(&self) -> bool {
        self.simulation.iter().all(|&v| v == self.simulation[0])
            && self.cosimulation.iter().all(|&v| v == self.cosimulation[0])
    }
}

pub fn lemma_equivalence_harness(
    q: &FinRel,
    x: &Frame,
    y: &Frame,
    cfg: &EnumConfig,
) -> Result<LemmaReport, ModalError> {
    check_frames(q, x, y)?;
    let (n, k) = (x.len(), y.len());
    cfg.check_pairs(n, k)?;
    let (forth, back) = forth_back(q, x, y);

    let pairs = || Subset::all(n).flat_map(move |a| Subset::all(k).map(move |b| (a, b)));
    let sim_ii =
        pairs().all(|(a, b)| !lower_holds(q, a, b) || lower_holds(q, x.diamond(a), y.diamond(b)));
    let sim_iii =
        pairs().all(|(a, b)| !lower_holds(q, a, y.boxed(b)) || lower_holds(q, x.diamond(a), b));

    let v = relations::variant_by_definition(&lower_lift(q), cfg)?.matrix(cfg)?;
    let cosim_ii = pairs().all(|(a, b)| !v.get(b, a) || v.get(y.diamond(b), x.diamond(a)));
    let cosim_iii = pairs().all(|(a, b)| !v.get(b, x.boxed(a)) || v.get(y.diamond(b), a));

    Ok(LemmaReport {
        simulation: [forth, sim_ii, sim_iii],
        cosimulation: [back, cosim_ii, cosim_iii],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modal::modal_operators;

    fn loop_and_sink() -> Frame {
        let mut f = Frame::new("X", ["a", "b"]).unwrap();
        f.add_transition("a", "a").unwrap();
        f
    }

    #[test]
    fn empty_relation_is_a_bisimulation() {
        let x = loop_and_sink();
        let r = classify_sim(
            &FinRel::empty(x.worlds().clone(), x.worlds().clone()),
            &x,
            &x,
        )
        .unwrap();
        assert!(r.is_simulation && r.is_cosimulation && r.is_bisimulation);
        assert!(r.counterexamples.is_empty());
    }

    #[test]
    fn greatest_bisimulation_separates_loop_from_sink() {
        let x = loop_and_sink();
        let g = greatest_fixpoint(SimKind::Bisimulation, &x, &x);
        assert_eq!(g, FinRel::identity(x.worlds().clone()));
        assert!(classify_sim(&g, &x, &x).unwrap().is_bisimulation);
        // the sink is simulated by the loop, not vice versa
        let s = greatest_fixpoint(SimKind::Simulation, &x, &x);
        assert!(s.contains(1, 0) && !s.contains(0, 1));
    }

    #[test]
    fn counterexamples_name_the_failing_side() {
        let mut x = Frame::new("X", ["p", "q"]).unwrap();
        x.add_transition("p", "q").unwrap();
        let y = Frame::new("Y", ["u"]).unwrap();
        let q = FinRel::from_pairs(x.worlds().clone(), y.worlds().clone(), [("p", "u")]).unwrap();
        let r = classify_sim(&q, &x, &y).unwrap();
        assert!(!r.is_simulation && r.is_cosimulation);
        assert_eq!(r.counterexamples.len(), 1);
        assert_eq!(r.counterexamples[0].side, Side::Forth);
        assert_eq!(
            r.counterexamples[0].transition,
            ("p".to_owned(), "q".to_owned())
        );
    }

    #[test]
    fn order_is_bisimulatory() {
        let x = loop_and_sink();
        let cfg = EnumConfig::default();
        let ops = modal_operators(&x, &cfg);
        let order = CabaRel::order(ops.caba(), &cfg).unwrap();
        let r = check_simulatory(&order, &ops, &ops, &cfg).unwrap();
        assert!(r.bisimulatory, "{r:?}");
    }

    #[test]
    fn simulation_without_back_lifts_to_simulatory_only() {
        // One-world deadlock z related to a; a -> b has no answer from z.
        let mut y = Frame::new("Y", ["a", "b"]).unwrap();
        y.add_transition("a", "b").unwrap();
        let x = Frame::new("X", ["z"]).unwrap();
        let q = FinRel::from_pairs(x.worlds().clone(), y.worlds().clone(), [("z", "a")]).unwrap();
        let sim = classify_sim(&q, &x, &y).unwrap();
        assert!(sim.is_simulation && !sim.is_cosimulation);
        let cfg = EnumConfig::default();
        let r = check_simulatory(
            &lower_lift(&q),
            &modal_operators(&x, &cfg),
            &modal_operators(&y, &cfg),
            &cfg,
        )
        .unwrap();
        assert!(r.simulatory.holds && !r.cosimulatory.holds);
    }

    #[test]
    fn harness_agrees_on_identity() {
        let x = loop_and_sink();
        let r = lemma_equivalence_harness(
            &FinRel::identity(x.worlds().clone()),
            &x,
            &x,
            &EnumConfig::default(),
        )
        .unwrap();
        assert_eq!(r.simulation, [true; 3]);
        assert_eq!(r.cosimulation, [true; 3]);
    }
}
