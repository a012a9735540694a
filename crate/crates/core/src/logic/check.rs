use std::collections::HashMap;

use serde::Serialize;

use crate::modal::forth_back;

use super::{
    holds_entailment, holds_statement, Derivation, Entailment, Formula, Judgment, LogicError,
    Models, Premise, RelExpr, Rule, Statement, Theory,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckOptions {
    /// Trust theory facts instead of re-verifying them.
    pub assume_theory: bool,
}

/// Semantic truth of one derivation node, for audit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeAudit {
    pub path: String,
    pub rule: String,
    pub conclusion: String,
    pub semantically_true: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SideAudit {
    pub relation: String,
    pub property: &'static str,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub conclusion: String,
    pub root_true: bool,
    /// Theory facts were assumed rather than verified.
    pub conditional: bool,
    pub nodes: Vec<NodeAudit>,
    pub side_conditions: Vec<SideAudit>,
    pub leaves_checked: usize,
    pub facts_checked: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Property {
    Simulation,
    Cosimulation,
}

impl Property {
    fn name(self) -> &'static str {
        match self {
            Property::Simulation => "simulation",
            Property::Cosimulation => "cosimulation",
        }
    }
}

struct Collected<'a> {
    side: Vec<(String, RelExpr, Property)>,
    leaves: Vec<(String, &'a Entailment)>,
    facts: Vec<(String, &'a str)>,
    nodes: Vec<(String, &'a Derivation)>,
}

struct Schema<'a> {
    path: &'a str,
    rule: Rule,
    models: &'a Models,
}

impl Schema<'_> {
    fn fail<T>(&self, detail: impl Into<String>) -> Result<T, LogicError> {
        Err(LogicError::SchemaMismatch {
            path: self.path.to_owned(),
            rule: self.rule.name().to_owned(),
            detail: detail.into(),
        })
    }

    fn judgment<'s>(&self, s: &'s Statement, what: &str) -> Result<&'s Judgment, LogicError> {
        match s {
            Statement::Judgment(j) => Ok(j),
            Statement::Entailment(e) => {
                self.fail(format!("{what} must be a judgment, found `{e}`"))
            }
        }
    }

    fn entailment<'s>(&self, s: &'s Statement, what: &str) -> Result<&'s Entailment, LogicError> {
        match s {
            Statement::Entailment(e) => Ok(e),
            Statement::Judgment(j) => {
                self.fail(format!("{what} must be an entailment, found `{j}`"))
            }
        }
    }

    fn same<T: PartialEq + std::fmt::Display>(
        &self,
        found: &T,
        expected: &T,
        what: &str,
    ) -> Result<(), LogicError> {
        if found == expected {
            Ok(())
        } else {
            self.fail(format!("{what}: expected `{expected}`, found `{found}`"))
        }
    }

    fn arity(&self, premises: &[Statement], allowed: &[usize]) -> Result<(), LogicError> {
        if allowed.contains(&premises.len()) {
            Ok(())
        } else {
            self.fail(format!(
                "takes {allowed:?} premises, found {}",
                premises.len()
            ))
        }
    }

    /// Names of the frames a relation expression runs between.
    fn frames(&self, rel: &RelExpr) -> Result<(String, String), LogicError> {
        let q = self.models.resolve(rel)?;
        Ok((q.src().name().to_owned(), q.dst().name().to_owned()))
    }

    fn frame_is(&self, e: &Entailment, frame: &str, what: &str) -> Result<(), LogicError> {
        if e.frame == frame {
            Ok(())
        } else {
            self.fail(format!(
                "{what} must be over frame `{frame}`, found `{}`",
                e.frame
            ))
        }
    }

    /// Matches premises against the rule and returns the relation property
    /// the rule requires, if any.
    fn check(
        &self,
        conclusion: &Statement,
        p: &[Statement],
    ) -> Result<Option<(RelExpr, Property)>, LogicError> {
        if self.rule == Rule::IdElim {
            self.arity(p, &[1])?;
            let e = self.entailment(conclusion, "conclusion")?;
            let j = self.judgment(&p[0], "premise")?;
            self.same(&j.rel, &RelExpr::Id(e.frame.clone()), "premise relation")?;
            self.same(&j.lhs, &e.lhs, "left formula")?;
            self.same(&j.rhs, &e.rhs, "right formula")?;
            return Ok(None);
        }
        let c = self.judgment(conclusion, "conclusion")?;
        match self.rule {
            Rule::Consequence => {
                self.arity(p, &[2, 3])?;
                let (src, dst) = self.frames(&c.rel)?;
                let (pre, j, post) = match (p.len(), &p[0]) {
                    (3, _) => (Some(&p[0]), &p[1], Some(&p[2])),
                    (_, Statement::Entailment(_)) => (Some(&p[0]), &p[1], None),
                    _ => (None, &p[0], Some(&p[1])),
                };
                let j = self.judgment(j, "middle premise")?;
                self.same(&j.rel, &c.rel, "relation")?;
                match pre {
                    Some(s) => {
                        let e = self.entailment(s, "left premise")?;
                        self.frame_is(e, &src, "left premise")?;
                        self.same(&e.lhs, &c.lhs, "strengthened formula")?;
                        self.same(&e.rhs, &j.lhs, "left premise target")?;
                    }
                    None => self.same(&j.lhs, &c.lhs, "left formula")?,
                }
                match post {
                    Some(s) => {
                        let e = self.entailment(s, "right premise")?;
                        self.frame_is(e, &dst, "right premise")?;
                        self.same(&e.lhs, &j.rhs, "right premise source")?;
                        self.same(&e.rhs, &c.rhs, "weakened formula")?;
                    }
                    None => self.same(&j.rhs, &c.rhs, "right formula")?,
                }
                Ok(None)
            }
            Rule::OrLeft => {
                let Formula::Or(parts) = &c.lhs else {
                    return self.fail(format!(
                        "conclusion left formula `{}` is not a disjunction",
                        c.lhs
                    ));
                };
                if parts.len() != p.len() {
                    return self.fail(format!(
                        "{} disjuncts but {} premises",
                        parts.len(),
                        p.len()
                    ));
                }
                for (i, (s, phi)) in p.iter().zip(parts).enumerate() {
                    let j = self.judgment(s, &format!("premise {i}"))?;
                    self.same(&j.lhs, phi, &format!("disjunct {i}"))?;
                    self.same(&j.rel, &c.rel, &format!("premise {i} relation"))?;
                    self.same(&j.rhs, &c.rhs, &format!("premise {i} right formula"))?;
                }
                Ok(None)
            }
            Rule::Compose => {
                self.arity(p, &[2])?;
                let a = self.judgment(&p[0], "first premise")?;
                let b = self.judgment(&p[1], "second premise")?;
                self.same(&c.rel, &a.rel.clone().then(b.rel.clone()), "relation")?;
                self.same(&a.lhs, &c.lhs, "left formula")?;
                self.same(&b.lhs, &a.rhs, "middle formula")?;
                self.same(&b.rhs, &c.rhs, "right formula")?;
                Ok(None)
            }
            Rule::IdIntro => {
                self.arity(p, &[1])?;
                let e = self.entailment(&p[0], "premise")?;
                self.same(&c.rel, &RelExpr::Id(e.frame.clone()), "relation")?;
                self.same(&e.lhs, &c.lhs, "left formula")?;
                self.same(&e.rhs, &c.rhs, "right formula")?;
                Ok(None)
            }
            Rule::SimDia | Rule::SimBoxDia | Rule::CosimDia | Rule::CosimBoxDia => {
                self.arity(p, &[1])?;
                let j = self.judgment(&p[0], "premise")?;
                self.same(&j.rel, &c.rel, "relation")?;
                self.same(&c.lhs, &j.lhs.clone().dia(), "left formula")?;
                if matches!(self.rule, Rule::SimDia | Rule::CosimDia) {
                    self.same(&c.rhs, &j.rhs.clone().dia(), "right formula")?;
                } else {
                    self.same(&j.rhs, &c.rhs.clone().boxed(), "premise right formula")?;
                }
                if matches!(self.rule, Rule::SimDia | Rule::SimBoxDia) {
                    Ok(Some((c.rel.clone(), Property::Simulation)))
                } else {
                    let RelExpr::Dagger(inner) = &c.rel else {
                        return self.fail(format!("relation `{}` must be a converse `Q^`", c.rel));
                    };
                    Ok(Some(((**inner).clone(), Property::Cosimulation)))
                }
            }
            Rule::IdElim => unreachable!(),
        }
    }
}

fn collect<'a>(
    d: &'a Derivation,
    path: String,
    models: &Models,
    theory: &'a Theory,
    out: &mut Collected<'a>,
) -> Result<(), LogicError> {
    out.nodes.push((path.clone(), d));
    let rule: Rule = d.rule.parse().map_err(|name| LogicError::UnknownRule {
        path: path.clone(),
        name,
    })?;
    let mut premises = Vec::with_capacity(d.premises.len());
    for (i, p) in d.premises.iter().enumerate() {
        let sub = format!("{path}.{i}");
        premises.push(match p {
            Premise::Rule(child) => {
                collect(child, sub, models, theory, out)?;
                child.conclusion.clone()
            }
            Premise::Sem(e) => {
                out.leaves.push((sub, e));
                Statement::Entailment(e.clone())
            }
            Premise::Fact(name) => {
                let fact = theory.get(name).ok_or_else(|| LogicError::UnknownFact {
                    path: sub.clone(),
                    name: name.clone(),
                })?;
                out.facts.push((sub, name.as_str()));
                fact.clone()
            }
        });
    }
    let schema = Schema {
        path: &path,
        rule,
        models,
    };
    if let Some((rel, prop)) = schema.check(&d.conclusion, &premises)? {
        out.side.push((path, rel, prop));
    }
    Ok(())
}

/// Checks `d` against `theory` in `models`: premise shapes first, then the
/// relation properties some rules require, then entailment leaves, then
/// theory facts (skipped with [`CheckOptions::assume_theory`]).
pub fn check_derivation(
    d: &Derivation,
    models: &Models,
    theory: &Theory,
    opts: CheckOptions,
) -> Result<CheckReport, LogicError> {
    let mut c = Collected {
        side: vec![],
        leaves: vec![],
        facts: vec![],
        nodes: vec![],
    };
    collect(d, "root".to_owned(), models, theory, &mut c)?;

    let mut cache: HashMap<(RelExpr, Property), bool> = HashMap::new();
    let mut side_conditions = Vec::new();
    for (path, rel, prop) in &c.side {
        let key = (rel.clone(), *prop);
        let holds = match cache.get(&key) {
            Some(&h) => h,
            None => {
                let q = models.resolve(rel)?;
                let (x, y) = models.endpoints(&q)?;
                let (sim, cosim) = forth_back(&q, x, y);
                let h = if *prop == Property::Simulation {
                    sim
                } else {
                    cosim
                };
                cache.insert(key, h);
                side_conditions.push(SideAudit {
                    relation: rel.to_string(),
                    property: prop.name(),
                    holds: h,
                });
                h
            }
        };
        if !holds {
            return Err(LogicError::SideConditionFailed {
                path: path.clone(),
                detail: format!("`{rel}` is not a {}", prop.name()),
            });
        }
    }

    for (path, e) in &c.leaves {
        if !holds_entailment(models.frame(&e.frame)?, &e.lhs, &e.rhs)? {
            return Err(LogicError::SemanticLeafFalse {
                path: path.clone(),
                detail: e.to_string(),
            });
        }
    }

    if !opts.assume_theory {
        for (path, name) in &c.facts {
            let fact = &theory.facts[*name];
            if !holds_statement(fact, models)? {
                return Err(LogicError::SemanticLeafFalse {
                    path: path.clone(),
                    detail: format!("fact `{name}`: {fact}"),
                });
            }
        }
    }

    let mut nodes = Vec::with_capacity(c.nodes.len());
    for (path, node) in &c.nodes {
        nodes.push(NodeAudit {
            path: path.clone(),
            rule: node.rule.clone(),
            conclusion: node.conclusion.to_string(),
            semantically_true: holds_statement(&node.conclusion, models)?,
        });
    }
    Ok(CheckReport {
        conclusion: d.conclusion.to_string(),
        root_true: nodes[0].semantically_true,
        conditional: opts.assume_theory && !c.facts.is_empty(),
        nodes,
        side_conditions,
        leaves_checked: c.leaves.len(),
        facts_checked: if opts.assume_theory { 0 } else { c.facts.len() },
    })
}

/// Verifies every fact of `theory` semantically.
pub fn verify_theory(theory: &Theory, models: &Models) -> Result<(), LogicError> {
    for (name, fact) in &theory.facts {
        if !holds_statement(fact, models)? {
            return Err(LogicError::SemanticLeafFalse {
                path: format!("{}.{name}", theory.name),
                detail: fact.to_string(),
            });
        }
    }
    Ok(())
}
