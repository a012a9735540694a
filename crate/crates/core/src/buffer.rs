//! Buffer frames over values `0..=n_max`: `X` (empty, left or right full),
//! `Y` (empty, or one of three full states), the bisimulation `Q` between
//! them, a background theory, and a one-place quotient of `X`.

use indexmap::IndexMap;

use crate::lattice::FiniteFunction;
use crate::logic::{
    verify_theory, Derivation, Entailment, Formula, Judgment, Models, Premise, RelExpr, Rule,
    Theory,
};
use crate::modal::{Frame, ModalError};
use crate::relations::FinRel;

pub const DEFAULT_N_MAX: usize = 3;

#[derive(Debug, Clone)]
pub struct BufferFixture {
    pub n_max: usize,
    pub x: Frame,
    pub y: Frame,
    pub q: FinRel,
    pub theory: Theory,
    /// `main_n` for each `n`, then `main` combining them.
    pub derivations: IndexMap<String, Derivation>,
    /// One-place buffer: `empty_Z` and `F<n>`.
    pub z: Frame,
    /// `X → Z` collapsing `L<n>` and `R<n>` onto `F<n>`.
    pub quotient: FiniteFunction,
}

impl BufferFixture {
    pub fn models(&self) -> Models {
        Models::new()
            .with_frame(self.x.clone())
            .with_frame(self.y.clone())
            .with_relation("Q", self.q.clone())
    }

    /// The judgment `⟨◆L_n ∨ ◆R_n⟩ Q ⟨empty_Y⟩`.
    pub fn target(n: usize) -> Judgment {
        Judgment::new(target_lhs(n), q(), Formula::pred("empty_Y"))
    }
}

fn q() -> RelExpr {
    RelExpr::named("Q")
}

fn target_lhs(n: usize) -> Formula {
    Formula::Or(vec![
        Formula::pred(format!("L_{n}")).dia(),
        Formula::pred(format!("R_{n}")).dia(),
    ])
}

fn full(side: &str, n_max: usize) -> Formula {
    Formula::Or(
        (0..=n_max)
            .map(|n| Formula::pred(format!("F_{side}_{n}")))
            .collect(),
    )
}

/// `⟨◆P⟩ Q ⟨empty_Y⟩` from the fact `⟨P⟩ Q ⟨F_Y(n)⟩`.
fn branch(pred: &str, n: usize) -> Derivation {
    let p = Formula::pred(format!("{pred}_{n}"));
    let box_empty = Formula::pred("empty_Y").boxed();
    let weakened = Derivation::new(
        Judgment::new(p.clone(), q(), box_empty.clone()),
        Rule::Consequence,
        vec![
            Premise::Fact(format!("{pred}_sim_{n}")),
            Premise::Sem(Entailment::new(
                "Y",
                Formula::pred(format!("F_Y_{n}")),
                box_empty,
            )),
        ],
    );
    Derivation::new(
        Judgment::new(p.dia(), q(), Formula::pred("empty_Y")),
        Rule::SimBoxDia,
        vec![Premise::Rule(weakened)],
    )
}

fn frame_x(n_max: usize) -> Result<Frame, ModalError> {
    let mut worlds = vec!["empty_X".to_owned()];
    for n in 0..=n_max {
        worlds.push(format!("L{n}"));
        worlds.push(format!("R{n}"));
    }
    let mut x = Frame::new("X", worlds.iter().map(String::as_str))?;
    x.add_predicate("empty_X", ["empty_X"])?;
    for n in 0..=n_max {
        let (l, r) = (format!("L{n}"), format!("R{n}"));
        for w in [&l, &r] {
            x.add_transition("empty_X", w)?;
            x.add_transition(w, "empty_X")?;
        }
        x.add_predicate(format!("L_{n}"), [l.as_str()])?;
        x.add_predicate(format!("R_{n}"), [r.as_str()])?;
        x.add_predicate(format!("F_X_{n}"), [l.as_str(), r.as_str()])?;
    }
    Ok(x)
}

fn frame_y(n_max: usize) -> Result<Frame, ModalError> {
    let mut worlds = vec!["empty_Y".to_owned()];
    for n in 0..=n_max {
        worlds.extend(["A", "B", "C"].map(|s| format!("{s}{n}")));
    }
    let mut y = Frame::new("Y", worlds.iter().map(String::as_str))?;
    y.add_predicate("empty_Y", ["empty_Y"])?;
    for n in 0..=n_max {
        let states = ["A", "B", "C"].map(|s| format!("{s}{n}"));
        for w in &states {
            y.add_transition("empty_Y", w)?;
            y.add_transition(w, "empty_Y")?;
        }
        y.add_predicate(format!("F_Y_{n}"), states.iter().map(String::as_str))?;
    }
    Ok(y)
}

fn frame_z(n_max: usize) -> Result<Frame, ModalError> {
    let mut worlds = vec!["empty_Z".to_owned()];
    worlds.extend((0..=n_max).map(|n| format!("F{n}")));
    let mut z = Frame::new("Z", worlds.iter().map(String::as_str))?;
    for w in &worlds[1..] {
        z.add_transition("empty_Z", w)?;
        z.add_transition(w, "empty_Z")?;
    }
    Ok(z)
}

/// Builds the buffers for values `0..=n_max`. Every theory fact is verified
/// against the frames before returning.
pub fn buffer_fixture(n_max: usize) -> Result<BufferFixture, ModalError> {
    let x = frame_x(n_max)?;
    let y = frame_y(n_max)?;
    let z = frame_z(n_max)?;

    let mut pairs = vec![("empty_X".to_owned(), "empty_Y".to_owned())];
    for n in 0..=n_max {
        for a in ["L", "R"] {
            for b in ["A", "B", "C"] {
                pairs.push((format!("{a}{n}"), format!("{b}{n}")));
            }
        }
    }
    let q_rel = FinRel::from_pairs(
        x.worlds().clone(),
        y.worlds().clone(),
        pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())),
    )?;

    let mut theory = Theory::new("T");
    for (frame, side) in [("X", "X"), ("Y", "Y")] {
        let empty = Formula::pred(format!("empty_{side}"));
        for (op, g) in [("dia", empty.clone().dia()), ("box", empty.clone().boxed())] {
            theory.add(
                format!("{op}_empty_{side}_le"),
                Entailment::new(frame, g.clone(), full(side, n_max)),
            );
            theory.add(
                format!("{op}_empty_{side}_ge"),
                Entailment::new(frame, full(side, n_max), g),
            );
        }
    }
    for n in 0..=n_max {
        for p in ["L", "R"] {
            theory.add(
                format!("{p}_sim_{n}"),
                Judgment::new(
                    Formula::pred(format!("{p}_{n}")),
                    q(),
                    Formula::pred(format!("F_Y_{n}")),
                ),
            );
        }
    }

    let mut derivations = IndexMap::new();
    for n in 0..=n_max {
        let d = Derivation::new(
            BufferFixture::target(n),
            Rule::OrLeft,
            vec![Premise::Rule(branch("L", n)), Premise::Rule(branch("R", n))],
        );
        derivations.insert(format!("main_{n}"), d);
    }
    let main = Derivation::new(
        Judgment::new(
            Formula::Or((0..=n_max).map(target_lhs).collect()),
            q(),
            Formula::pred("empty_Y"),
        ),
        Rule::OrLeft,
        derivations.values().cloned().map(Premise::Rule).collect(),
    );
    derivations.insert("main".to_owned(), main);

    let mut map = vec![0; x.len()];
    for n in 0..=n_max {
        map[1 + 2 * n] = 1 + n;
        map[2 + 2 * n] = 1 + n;
    }
    let quotient = FiniteFunction::new(x.worlds().clone(), z.worlds().clone(), map)
        .expect("quotient map is total by construction");

    let fixture = BufferFixture {
        n_max,
        x,
        y,
        q: q_rel,
        theory,
        derivations,
        z,
        quotient,
    };
    verify_theory(&fixture.theory, &fixture.models())
        .expect("buffer theory facts hold on the frames");
    Ok(fixture)
}
