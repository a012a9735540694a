//! Formulas over frames, entailments, judgments `⟨φ⟩ Q ⟨ψ⟩`, and a checker
//! for derivations built from the relational proof rules.

mod check;

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

pub use check::{check_derivation, verify_theory, CheckOptions, CheckReport, NodeAudit, SideAudit};

use crate::carrier::Subset;
use crate::modal::{Frame, ModalError};
use crate::relations::{lower_holds, FinRel, RelError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("unresolved {kind} `{name}`")]
    Unresolved { kind: &'static str, name: String },
    #[error("{path}: premises do not match rule {rule}: {detail}")]
    SchemaMismatch {
        path: String,
        rule: String,
        detail: String,
    },
    #[error("{path}: unknown rule `{name}`")]
    UnknownRule { path: String, name: String },
    #[error("{path}: unknown fact `{name}`")]
    UnknownFact { path: String, name: String },
    #[error("{path}: side condition failed: {detail}")]
    SideConditionFailed { path: String, detail: String },
    #[error("{path}: semantically false: {detail}")]
    SemanticLeafFalse { path: String, detail: String },
    #[error(transparent)]
    Relation(#[from] RelError),
    #[error(transparent)]
    Modal(#[from] ModalError),
}

/// A formula, interpreted as a set of worlds of some frame.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Formula {
    Top,
    Bot,
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Dia(Box<Formula>),
    Box(Box<Formula>),
    Pred(String),
    World(String),
}

impl Formula {
    pub fn pred(name: impl Into<String>) -> Self {
        Formula::Pred(name.into())
    }

    pub fn world(name: impl Into<String>) -> Self {
        Formula::World(name.into())
    }

    pub fn dia(self) -> Self {
        Formula::Dia(Box::new(self))
    }

    pub fn boxed(self) -> Self {
        Formula::Box(Box::new(self))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    fn is_infix_or(&self) -> bool {
        matches!(self, Formula::Or(v) if v.len() >= 2)
    }

    fn is_infix(&self) -> bool {
        matches!(self, Formula::Or(v) | Formula::And(v) if v.len() >= 2)
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, head: &str, items: &[Formula]) -> fmt::Result {
    write!(f, "{head}[")?;
    for (i, g) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{g}")?;
    }
    f.write_str("]")
}

fn write_child(f: &mut fmt::Formatter<'_>, g: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({g})")
    } else {
        write!(f, "{g}")
    }
}

/// Concrete syntax accepted by the workspace parser: `|` binds loosest, then
/// `&`, then the prefix operators `!`, `dia`, `box`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("top"),
            Formula::Bot => f.write_str("bot"),
            Formula::Pred(p) => f.write_str(p),
            Formula::World(w) => write!(f, "@{w}"),
            Formula::Or(v) if v.len() >= 2 => {
                for (i, g) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    write_child(f, g, g.is_infix_or())?;
                }
                Ok(())
            }
            Formula::And(v) if v.len() >= 2 => {
                for (i, g) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" & ")?;
                    }
                    write_child(f, g, g.is_infix())?;
                }
                Ok(())
            }
            Formula::Or(v) => write_list(f, "Or", v),
            Formula::And(v) => write_list(f, "And", v),
            Formula::Not(g) => {
                f.write_str("!")?;
                write_child(f, g, g.is_infix())
            }
            Formula::Dia(g) => {
                f.write_str("dia ")?;
                write_child(f, g, g.is_infix())
            }
            Formula::Box(g) => {
                f.write_str("box ")?;
                write_child(f, g, g.is_infix())
            }
        }
    }
}

/// Denotation of `phi` in `frame`.
pub fn eval_formula(phi: &Formula, frame: &Frame) -> Result<Subset, LogicError> {
    Ok(match phi {
        Formula::Top => frame.worlds().full(),
        Formula::Bot => Subset::EMPTY,
        Formula::Pred(p) => frame.predicate(p).ok_or_else(|| LogicError::Unresolved {
            kind: "predicate",
            name: format!("{}.{p}", frame.name()),
        })?,
        Formula::World(w) => {
            Subset::singleton(
                frame
                    .worlds()
                    .index_of(w)
                    .ok_or_else(|| LogicError::Unresolved {
                        kind: "world",
                        name: format!("{}.{w}", frame.name()),
                    })?,
            )
        }
        Formula::And(v) => {
            let mut acc = frame.worlds().full();
            for g in v {
                acc = acc.intersection(eval_formula(g, frame)?);
            }
            acc
        }
        Formula::Or(v) => {
            let mut acc = Subset::EMPTY;
            for g in v {
                acc = acc.union(eval_formula(g, frame)?);
            }
            acc
        }
        Formula::Not(g) => eval_formula(g, frame)?.complement(frame.len()),
        Formula::Dia(g) => frame.diamond(eval_formula(g, frame)?),
        Formula::Box(g) => frame.boxed(eval_formula(g, frame)?),
    })
}

/// `φ ⊢ ψ`, read as containment of denotations.
pub fn holds_entailment(frame: &Frame, phi: &Formula, psi: &Formula) -> Result<bool, LogicError> {
    Ok(eval_formula(phi, frame)?.is_subset_of(eval_formula(psi, frame)?))
}

/// A relation between frames, built from named relations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum RelExpr {
    Named(String),
    /// Identity on the named frame.
    Id(String),
    Dagger(Box<RelExpr>),
    Seq(Box<RelExpr>, Box<RelExpr>),
}

impl RelExpr {
    pub fn named(name: impl Into<String>) -> Self {
        RelExpr::Named(name.into())
    }

    pub fn dagger(self) -> Self {
        RelExpr::Dagger(Box::new(self))
    }

    pub fn then(self, next: RelExpr) -> Self {
        RelExpr::Seq(Box::new(self), Box::new(next))
    }
}

impl fmt::Display for RelExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelExpr::Named(n) => f.write_str(n),
            RelExpr::Id(frame) => write!(f, "id({frame})"),
            RelExpr::Dagger(r) if matches!(**r, RelExpr::Seq(..)) => write!(f, "({r})^"),
            RelExpr::Dagger(r) => write!(f, "{r}^"),
            RelExpr::Seq(a, b) if matches!(**b, RelExpr::Seq(..)) => write!(f, "{a} ; ({b})"),
            RelExpr::Seq(a, b) => write!(f, "{a} ; {b}"),
        }
    }
}

/// `⟨lhs⟩ rel ⟨rhs⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Judgment {
    pub lhs: Formula,
    pub rel: RelExpr,
    pub rhs: Formula,
}

impl Judgment {
    pub fn new(lhs: Formula, rel: RelExpr, rhs: Formula) -> Self {
        Self { lhs, rel, rhs }
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] {}", self.lhs, self.rel, self.rhs)
    }
}

/// `lhs ⊢ rhs` on a named frame.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Entailment {
    pub frame: String,
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Entailment {
    pub fn new(frame: impl Into<String>, lhs: Formula, rhs: Formula) -> Self {
        Self {
            frame: frame.into(),
            lhs,
            rhs,
        }
    }
}

impl fmt::Display for Entailment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {} => {}", self.frame, self.lhs, self.rhs)
    }
}

/// A judgment or an entailment: theory facts and derivation conclusions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Statement {
    Judgment(Judgment),
    Entailment(Entailment),
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Judgment(j) => j.fmt(f),
            Statement::Entailment(e) => e.fmt(f),
        }
    }
}

impl From<Judgment> for Statement {
    fn from(j: Judgment) -> Self {
        Statement::Judgment(j)
    }
}

impl From<Entailment> for Statement {
    fn from(e: Entailment) -> Self {
        Statement::Entailment(e)
    }
}

/// Named background facts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Theory {
    pub name: String,
    pub facts: IndexMap<String, Statement>,
}

impl Theory {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            facts: IndexMap::new(),
        }
    }

    pub fn add(&mut self, name: impl Into<String>, fact: impl Into<Statement>) -> &mut Self {
        self.facts.insert(name.into(), fact.into());
        self
    }

    pub fn get(&self, name: &str) -> Option<&Statement> {
        self.facts.get(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    Consequence,
    OrLeft,
    Compose,
    IdIntro,
    IdElim,
    SimDia,
    SimBoxDia,
    CosimDia,
    CosimBoxDia,
}

impl Rule {
    pub const ALL: [Rule; 9] = [
        Rule::Consequence,
        Rule::OrLeft,
        Rule::Compose,
        Rule::IdIntro,
        Rule::IdElim,
        Rule::SimDia,
        Rule::SimBoxDia,
        Rule::CosimDia,
        Rule::CosimBoxDia,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Consequence => "Consequence",
            Rule::OrLeft => "OrLeft",
            Rule::Compose => "Compose",
            Rule::IdIntro => "IdIntro",
            Rule::IdElim => "IdElim",
            Rule::SimDia => "SimDia",
            Rule::SimBoxDia => "SimBoxDia",
            Rule::CosimDia => "CosimDia",
            Rule::CosimBoxDia => "CosimBoxDia",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| s.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Premise {
    Rule(Derivation),
    /// An entailment discharged semantically.
    Sem(Entailment),
    /// A named theory fact.
    Fact(String),
}

/// A proof tree. The rule is kept by name so unknown rules surface when
/// checked rather than when built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub conclusion: Statement,
    pub rule: String,
    pub premises: Vec<Premise>,
}

impl Derivation {
    pub fn new(conclusion: impl Into<Statement>, rule: Rule, premises: Vec<Premise>) -> Self {
        Self {
            conclusion: conclusion.into(),
            rule: rule.name().to_owned(),
            premises,
        }
    }
}

/// Frames and named relations that judgments are evaluated against.
#[derive(Debug, Clone, Default)]
pub struct Models {
    pub frames: IndexMap<String, Frame>,
    pub relations: IndexMap<String, FinRel>,
}

impl Models {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_frame(mut self, frame: Frame) -> Self {
        self.frames.insert(frame.name().to_owned(), frame);
        self
    }

    pub fn with_relation(mut self, name: impl Into<String>, rel: FinRel) -> Self {
        self.relations.insert(name.into(), rel);
        self
    }

    pub fn frame(&self, name: &str) -> Result<&Frame, LogicError> {
        self.frames.get(name).ok_or_else(|| LogicError::Unresolved {
            kind: "frame",
            name: name.to_owned(),
        })
    }

    /// Evaluates a relation expression to a concrete relation.
    pub fn resolve(&self, rel: &RelExpr) -> Result<FinRel, LogicError> {
        Ok(match rel {
            RelExpr::Named(n) => {
                self.relations
                    .get(n)
                    .cloned()
                    .ok_or_else(|| LogicError::Unresolved {
                        kind: "relation",
                        name: n.clone(),
                    })?
            }
            RelExpr::Id(f) => FinRel::identity(self.frame(f)?.worlds().clone()),
            RelExpr::Dagger(r) => self.resolve(r)?.dagger(),
            RelExpr::Seq(a, b) => self.resolve(a)?.compose(&self.resolve(b)?)?,
        })
    }

    /// Source and target frames of a resolved relation.
    pub fn endpoints(&self, rel: &FinRel) -> Result<(&Frame, &Frame), LogicError> {
        let x = self.frame(rel.src().name())?;
        let y = self.frame(rel.dst().name())?;
        if x.worlds() != rel.src() || y.worlds() != rel.dst() {
            return Err(ModalError::FrameMismatch(format!(
                "relation `{} -> {}` does not match the declared frames",
                rel.src().name(),
                rel.dst().name()
            ))
            .into());
        }
        Ok((x, y))
    }
}

/// Truth of a judgment, with a failing world from the left-hand side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JudgmentVerdict {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

/// `⟨φ⟩ Q ⟨ψ⟩` holds when every world satisfying `φ` is related to some world
/// satisfying `ψ`.
pub fn holds_judgment(j: &Judgment, models: &Models) -> Result<JudgmentVerdict, LogicError> {
    let q = models.resolve(&j.rel)?;
    let (x, y) = models.endpoints(&q)?;
    let a = eval_formula(&j.lhs, x)?;
    let b = eval_formula(&j.rhs, y)?;
    let holds = lower_holds(&q, a, b);
    let counterexample = if holds {
        None
    } else {
        a.iter()
            .find(|&w| !q.row(w).intersects(b))
            .map(|w| x.worlds().element(w).to_owned())
    };
    Ok(JudgmentVerdict {
        holds,
        counterexample,
    })
}

/// Semantic truth of either kind of statement.
pub fn holds_statement(s: &Statement, models: &Models) -> Result<bool, LogicError> {
    match s {
        Statement::Judgment(j) => Ok(holds_judgment(j, models)?.holds),
        Statement::Entailment(e) => holds_entailment(models.frame(&e.frame)?, &e.lhs, &e.rhs),
    }
}
