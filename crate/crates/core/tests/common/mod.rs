//! Generators shared by the property tests and the acceptance run.
#![allow(dead_code)]

use std::sync::Arc;

use duality_lab::logic::{
    check_derivation, holds_statement, CheckOptions, Entailment, Premise, Rule, Statement,
};
use duality_lab::modal::{greatest_fixpoint_within, SimKind};
use duality_lab::sample::{random_frame, random_rel};
use duality_lab::{
    Carrier, Derivation, FinRel, Formula, Frame, Judgment, Models, RelExpr, Subset, Theory,
};
use rand::Rng;

/// Frame `name` on `n` numbered worlds whose transition rows are packed in
/// `code`, `n` bits per row.
pub fn frame_from_code(name: &str, n: usize, code: u64) -> Frame {
    let worlds = Carrier::numbered(name, n);
    let mask = worlds.full().0;
    let rows = (0..n).map(|i| Subset((code >> (i * n)) & mask)).collect();
    let trans = FinRel::from_rows(worlds.clone(), worlds.clone(), rows);
    Frame::from_carrier(worlds).with_transitions(trans).unwrap()
}

/// Every frame on `n` worlds.
pub fn all_frames(name: &str, n: usize) -> Vec<Frame> {
    (0..1u64 << (n * n))
        .map(|c| frame_from_code(name, n, c))
        .collect()
}

pub fn rel_from_rows(src: &Arc<Carrier>, dst: &Arc<Carrier>, rows: &[u64]) -> FinRel {
    let mask = dst.full().0;
    FinRel::from_rows(
        src.clone(),
        dst.clone(),
        rows.iter().map(|r| Subset(r & mask)).collect(),
    )
}

/// `Or[@w, ...]` over the members of `s`.
pub fn set_formula(frame: &Frame, s: Subset) -> Formula {
    Formula::Or(
        s.iter()
            .map(|i| Formula::world(frame.worlds().element(i)))
            .collect(),
    )
}

pub fn random_subset(rng: &mut impl Rng, carrier: &Arc<Carrier>) -> Subset {
    Subset(rng.gen::<u64>() & carrier.full().0)
}

/// The largest simulation (or bisimulation) inside a random relation.
pub fn random_simulation(rng: &mut impl Rng, kind: SimKind, x: &Frame, y: &Frame) -> FinRel {
    let start = random_rel(rng, x.worlds(), y.worlds());
    greatest_fixpoint_within(kind, x, y, &start).unwrap()
}

pub fn small_frame(rng: &mut impl Rng, name: &str, max: usize) -> Frame {
    let n = rng.gen_range(1..=max);
    random_frame(rng, name, n)
}

/// A rule application whose premises are theory facts (judgments) or
/// semantic leaves (entailments), usually true, sometimes not.
pub struct Instance {
    pub rule: Rule,
    pub models: Models,
    pub theory: Theory,
    pub derivation: Derivation,
}

pub enum Verdict {
    Accepted,
    Rejected,
}

impl Instance {
    /// Runs the checker. An accepted instance with a false conclusion is
    /// returned as `Err` with a description.
    pub fn check(&self) -> Result<Verdict, String> {
        match check_derivation(
            &self.derivation,
            &self.models,
            &self.theory,
            CheckOptions::default(),
        ) {
            Ok(report) => {
                let truth = holds_statement(&self.derivation.conclusion, &self.models)
                    .map_err(|e| e.to_string())?;
                if truth && report.root_true {
                    Ok(Verdict::Accepted)
                } else {
                    Err(format!(
                        "{} accepted `{}` which is false",
                        self.rule, self.derivation.conclusion
                    ))
                }
            }
            Err(_) => Ok(Verdict::Rejected),
        }
    }
}

struct Gen<'a, R: Rng> {
    rng: &'a mut R,
    /// Probability that a premise target is chosen at random rather than to
    /// make the premise true.
    noise: f64,
}

impl<R: Rng> Gen<'_, R> {
    fn noisy(&mut self) -> bool {
        self.rng.gen_bool(self.noise)
    }

    /// A target `T` with `S ⇓q T` unless some member of `S` has no successor.
    fn rhs(&mut self, q: &FinRel, s: Subset) -> Subset {
        if self.noisy() {
            return random_subset(self.rng, q.dst());
        }
        let extra = random_subset(self.rng, q.dst());
        q.image(s).union(if self.rng.gen_bool(0.5) {
            extra
        } else {
            Subset::EMPTY
        })
    }

    /// A source `S` with `S ⇓q T`.
    fn lhs(&mut self, q: &FinRel, t: Subset) -> Subset {
        if self.noisy() {
            return random_subset(self.rng, q.src());
        }
        let ok = Subset(
            (0..q.src().len())
                .filter(|&i| q.row(i).intersects(t))
                .fold(0, |m, i| m | 1 << i),
        );
        ok.intersection(random_subset(self.rng, q.src()))
    }

    fn superset(&mut self, c: &Arc<Carrier>, s: Subset) -> Subset {
        if self.noisy() {
            random_subset(self.rng, c)
        } else {
            s.union(random_subset(self.rng, c))
        }
    }

    fn subset(&mut self, c: &Arc<Carrier>, s: Subset) -> Subset {
        if self.noisy() {
            random_subset(self.rng, c)
        } else {
            s.intersection(random_subset(self.rng, c))
        }
    }
}

/// A random application of `rule` over frames with at most `max` worlds.
pub fn rule_instance(rng: &mut impl Rng, rule: Rule, max: usize) -> Instance {
    let x = small_frame(rng, "X", max);
    let y = small_frame(rng, "Y", max);
    let z = small_frame(rng, "Z", max);
    let q = match rule {
        Rule::SimDia | Rule::SimBoxDia if rng.gen_bool(0.85) => {
            random_simulation(rng, SimKind::Simulation, &x, &y)
        }
        Rule::CosimDia | Rule::CosimBoxDia if rng.gen_bool(0.85) => {
            random_simulation(rng, SimKind::Bisimulation, &x, &y)
        }
        _ => random_rel(rng, x.worlds(), y.worlds()),
    };
    let r = random_rel(rng, y.worlds(), z.worlds());
    let models = Models::new()
        .with_frame(x.clone())
        .with_frame(y.clone())
        .with_frame(z.clone())
        .with_relation("Q", q.clone())
        .with_relation("R", r.clone());
    let mut theory = Theory::new("T");
    let mut g = Gen { rng, noise: 0.1 };
    let named_q = RelExpr::named("Q");
    let sf = set_formula;

    let derivation = match rule {
        Rule::Consequence => {
            let s = random_subset(g.rng, x.worlds());
            let s2 = g.subset(x.worlds(), s);
            let t = g.rhs(&q, s);
            let t2 = g.superset(y.worlds(), t);
            theory.add("j", Judgment::new(sf(&x, s), named_q.clone(), sf(&y, t)));
            let pre = Premise::Sem(Entailment::new("X", sf(&x, s2), sf(&x, s)));
            let post = Premise::Sem(Entailment::new("Y", sf(&y, t), sf(&y, t2)));
            let fact = Premise::Fact("j".into());
            let (lhs, rhs, premises) = match g.rng.gen_range(0..3) {
                0 => (s2, t2, vec![pre, fact, post]),
                1 => (s2, t, vec![pre, fact]),
                _ => (s, t2, vec![fact, post]),
            };
            Derivation::new(
                Judgment::new(sf(&x, lhs), named_q, sf(&y, rhs)),
                rule,
                premises,
            )
        }
        Rule::OrLeft => {
            let k = g.rng.gen_range(1..=3);
            let parts: Vec<Subset> = (0..k).map(|_| random_subset(g.rng, x.worlds())).collect();
            let all = parts.iter().fold(Subset::EMPTY, |a, &p| a.union(p));
            let t = g.rhs(&q, all);
            let mut premises = Vec::new();
            for (i, &p) in parts.iter().enumerate() {
                // Each premise is checked on its own, so noise goes per part.
                let ti = if g.noisy() {
                    random_subset(g.rng, y.worlds())
                } else {
                    t
                };
                let name = format!("j{i}");
                theory.add(
                    name.clone(),
                    Judgment::new(sf(&x, p), named_q.clone(), sf(&y, ti)),
                );
                premises.push(Premise::Fact(name));
            }
            let lhs = Formula::Or(parts.iter().map(|&p| sf(&x, p)).collect());
            Derivation::new(Judgment::new(lhs, named_q, sf(&y, t)), rule, premises)
        }
        Rule::Compose => {
            let s = random_subset(g.rng, x.worlds());
            let t = g.rhs(&q, s);
            let u = g.rhs(&r, t);
            theory.add("a", Judgment::new(sf(&x, s), named_q.clone(), sf(&y, t)));
            theory.add(
                "b",
                Judgment::new(sf(&y, t), RelExpr::named("R"), sf(&z, u)),
            );
            let rel = named_q.then(RelExpr::named("R"));
            Derivation::new(
                Judgment::new(sf(&x, s), rel, sf(&z, u)),
                rule,
                vec![Premise::Fact("a".into()), Premise::Fact("b".into())],
            )
        }
        Rule::IdIntro => {
            let s = random_subset(g.rng, x.worlds());
            let t = g.superset(x.worlds(), s);
            Derivation::new(
                Judgment::new(sf(&x, s), RelExpr::Id("X".into()), sf(&x, t)),
                rule,
                vec![Premise::Sem(Entailment::new("X", sf(&x, s), sf(&x, t)))],
            )
        }
        Rule::IdElim => {
            let s = random_subset(g.rng, x.worlds());
            let t = g.superset(x.worlds(), s);
            theory.add(
                "j",
                Judgment::new(sf(&x, s), RelExpr::Id("X".into()), sf(&x, t)),
            );
            Derivation::new(
                Entailment::new("X", sf(&x, s), sf(&x, t)),
                rule,
                vec![Premise::Fact("j".into())],
            )
        }
        Rule::SimDia | Rule::SimBoxDia | Rule::CosimDia | Rule::CosimBoxDia => {
            let cosim = matches!(rule, Rule::CosimDia | Rule::CosimBoxDia);
            let (rel, expr, src, dst) = if cosim {
                (q.dagger(), named_q.dagger(), &y, &x)
            } else {
                (q.clone(), named_q, &x, &y)
            };
            let (premise, conclusion) = if matches!(rule, Rule::SimDia | Rule::CosimDia) {
                let s = random_subset(g.rng, src.worlds());
                let t = g.rhs(&rel, s);
                (
                    Judgment::new(sf(src, s), expr.clone(), sf(dst, t)),
                    Judgment::new(sf(src, s).dia(), expr, sf(dst, t).dia()),
                )
            } else {
                let t = random_subset(g.rng, dst.worlds());
                let s = g.lhs(&rel, dst.boxed(t));
                (
                    Judgment::new(sf(src, s), expr.clone(), sf(dst, t).boxed()),
                    Judgment::new(sf(src, s).dia(), expr, sf(dst, t)),
                )
            };
            theory.add("j", premise);
            Derivation::new(conclusion, rule, vec![Premise::Fact("j".into())])
        }
    };
    Instance {
        rule,
        models,
        theory,
        derivation,
    }
}

/// Conclusion of a derivation as a statement, for reporting.
pub fn describe(s: &Statement) -> String {
    s.to_string()
}
