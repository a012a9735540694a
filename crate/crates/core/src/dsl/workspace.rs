use std::fmt::Write as _;

use indexmap::IndexMap;

use crate::buffer::BufferFixture;
use crate::lattice::{Caba, FiniteFunction};
use crate::logic::{Derivation, Models, Premise, RelExpr, Theory};
use crate::modal::Frame;
use crate::relations::{CabaRel, FinRel};

use super::Pos;

/// What a relation declaration relates.
#[derive(Debug, Clone)]
pub enum RelBody {
    /// Between the worlds of two frames.
    Frames(FinRel),
    /// Between the elements of two declared CABAs, listed pair by pair.
    Cabas {
        rel: CabaRel,
        pairs: Vec<(String, Vec<String>)>,
    },
}

#[derive(Debug, Clone)]
pub struct RelDecl {
    pub src: String,
    pub dst: String,
    pub body: RelBody,
}

impl RelDecl {
    pub fn frame_relation(&self) -> Option<&FinRel> {
        match &self.body {
            RelBody::Frames(r) => Some(r),
            RelBody::Cabas { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FunDecl {
    pub src: String,
    pub dst: String,
    pub function: FiniteFunction,
}

#[derive(Debug, Clone)]
pub struct CabaDecl {
    pub caba: Caba,
    /// The `leq` pairs as written; the order is their reflexive-transitive
    /// closure.
    pub generators: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct FormulaDecl {
    pub frame: String,
    pub formula: crate::logic::Formula,
}

/// `over (F1, R, F2)` header of theories and derivations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Over {
    pub left: String,
    pub rel: RelExpr,
    pub right: String,
}

#[derive(Debug, Clone)]
pub struct TheoryDecl {
    pub over: Over,
    pub theory: Theory,
}

#[derive(Debug, Clone)]
pub struct DerivationDecl {
    pub over: Over,
    pub uses: String,
    pub derivation: Derivation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeclKind {
    Frame,
    Rel,
    Fun,
    Caba,
    Formula,
    Theory,
    Derive,
}

impl DeclKind {
    pub fn keyword(self) -> &'static str {
        match self {
            DeclKind::Frame => "frame",
            DeclKind::Rel => "rel",
            DeclKind::Fun => "fun",
            DeclKind::Caba => "caba",
            DeclKind::Formula => "formula",
            DeclKind::Theory => "theory",
            DeclKind::Derive => "derive",
        }
    }
}

/// A parsed workspace. Every declaration kind is keyed by name; `order`
/// remembers the declaration sequence for serialization.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub frames: IndexMap<String, Frame>,
    pub relations: IndexMap<String, RelDecl>,
    pub functions: IndexMap<String, FunDecl>,
    pub cabas: IndexMap<String, CabaDecl>,
    pub formulas: IndexMap<String, FormulaDecl>,
    pub theories: IndexMap<String, TheoryDecl>,
    pub derivations: IndexMap<String, DerivationDecl>,
    pub order: Vec<(DeclKind, String, Option<Pos>)>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Frames and frame relations, for evaluating judgments.
    pub fn models(&self) -> Models {
        let mut m = Models::new();
        for f in self.frames.values() {
            m = m.with_frame(f.clone());
        }
        for (name, r) in &self.relations {
            if let Some(rel) = r.frame_relation() {
                m = m.with_relation(name.clone(), rel.clone());
            }
        }
        m
    }

    pub fn position(&self, kind: DeclKind, name: &str) -> Option<Pos> {
        self.order
            .iter()
            .find(|(k, n, _)| *k == kind && n == name)
            .and_then(|(_, _, p)| *p)
    }

    pub fn push_frame(&mut self, frame: Frame) {
        self.order
            .push((DeclKind::Frame, frame.name().to_owned(), None));
        self.frames.insert(frame.name().to_owned(), frame);
    }

    pub fn push_relation(&mut self, name: impl Into<String>, rel: FinRel) {
        let name = name.into();
        self.order.push((DeclKind::Rel, name.clone(), None));
        let decl = RelDecl {
            src: rel.src().name().to_owned(),
            dst: rel.dst().name().to_owned(),
            body: RelBody::Frames(rel),
        };
        self.relations.insert(name, decl);
    }

    pub fn push_function(&mut self, name: impl Into<String>, function: FiniteFunction) {
        let name = name.into();
        self.order.push((DeclKind::Fun, name.clone(), None));
        let decl = FunDecl {
            src: function.src().name().to_owned(),
            dst: function.dst().name().to_owned(),
            function,
        };
        self.functions.insert(name, decl);
    }

    pub fn push_theory(&mut self, over: Over, theory: Theory) {
        self.order
            .push((DeclKind::Theory, theory.name.clone(), None));
        self.theories
            .insert(theory.name.clone(), TheoryDecl { over, theory });
    }

    pub fn push_derivation(
        &mut self,
        name: impl Into<String>,
        over: Over,
        uses: impl Into<String>,
        d: Derivation,
    ) {
        let name = name.into();
        self.order.push((DeclKind::Derive, name.clone(), None));
        self.derivations.insert(
            name,
            DerivationDecl {
                over,
                uses: uses.into(),
                derivation: d,
            },
        );
    }

    /// Canonical text: declarations in declaration order, fixed layout.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (i, (kind, name, _)) in self.order.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            match kind {
                DeclKind::Frame => write_frame(&mut out, &self.frames[name]),
                DeclKind::Rel => write_rel(&mut out, name, &self.relations[name]),
                DeclKind::Fun => write_fun(&mut out, name, &self.functions[name]),
                DeclKind::Caba => write_caba(&mut out, name, &self.cabas[name]),
                DeclKind::Formula => {
                    let f = &self.formulas[name];
                    let _ = writeln!(out, "formula {name} over {} = {} ;", f.frame, f.formula);
                }
                DeclKind::Theory => write_theory(&mut out, &self.theories[name]),
                DeclKind::Derive => write_derive(&mut out, name, &self.derivations[name]),
            }
        }
        out
    }
}

fn write_rows(out: &mut String, rel: &FinRel, indent: &str, sep: &str) -> bool {
    let lines: Vec<String> = (0..rel.src().len())
        .filter(|&i| !rel.row(i).is_empty())
        .map(|i| {
            let targets: Vec<&str> = rel.row(i).iter().map(|j| rel.dst().element(j)).collect();
            format!("{indent}{} -> {}", rel.src().element(i), targets.join(" "))
        })
        .collect();
    out.push_str(&lines.join(sep));
    !lines.is_empty()
}

fn write_frame(out: &mut String, f: &Frame) {
    let _ = writeln!(out, "frame {} {{", f.name());
    let _ = writeln!(out, "  worlds {} ;", f.worlds().elements().join(" "));
    if !f.transitions().is_empty() {
        out.push_str("  trans\n");
        write_rows(out, f.transitions(), "    ", ",\n");
        out.push_str(" ;\n");
    }
    for (p, set) in f.valuation() {
        let members: Vec<&str> = set.iter().map(|w| f.worlds().element(w)).collect();
        if members.is_empty() {
            let _ = writeln!(out, "  pred {p} = {{ }} ;");
        } else {
            let _ = writeln!(out, "  pred {p} = {{ {} }} ;", members.join(" "));
        }
    }
    out.push_str("}\n");
}

fn write_rel(out: &mut String, name: &str, r: &RelDecl) {
    let _ = write!(out, "rel {name} : {} -> {} {{", r.src, r.dst);
    let any = match &r.body {
        RelBody::Frames(rel) => {
            out.push('\n');
            write_rows(out, rel, "  ", ",\n")
        }
        RelBody::Cabas { pairs, .. } => {
            out.push('\n');
            let lines: Vec<String> = pairs
                .iter()
                .map(|(a, bs)| format!("  {a} -> {}", bs.join(" ")))
                .collect();
            out.push_str(&lines.join(",\n"));
            !lines.is_empty()
        }
    };
    if any {
        out.push('\n');
    }
    out.push_str("}\n");
}

fn write_fun(out: &mut String, name: &str, f: &FunDecl) {
    let _ = writeln!(out, "fun {name} : {} -> {} {{", f.src, f.dst);
    let func = &f.function;
    let lines: Vec<String> = (0..func.src().len())
        .map(|i| {
            format!(
                "  {} -> {}",
                func.src().element(i),
                func.dst().element(func.apply(i))
            )
        })
        .collect();
    out.push_str(&lines.join(",\n"));
    if !lines.is_empty() {
        out.push('\n');
    }
    out.push_str("}\n");
}

fn write_caba(out: &mut String, name: &str, c: &CabaDecl) {
    let elems = c
        .caba
        .named_order()
        .map(|o| o.elements().elements().join(" "))
        .unwrap_or_default();
    let _ = writeln!(out, "caba {name} {{");
    let _ = writeln!(out, "  elems {elems} ;");
    if !c.generators.is_empty() {
        let pairs: Vec<String> = c
            .generators
            .iter()
            .map(|(a, b)| format!("{a} <= {b}"))
            .collect();
        let _ = writeln!(out, "  leq {} ;", pairs.join(", "));
    }
    out.push_str("}\n");
}

fn over(o: &Over) -> String {
    format!("({}, {}, {})", o.left, o.rel, o.right)
}

fn write_theory(out: &mut String, t: &TheoryDecl) {
    let _ = writeln!(out, "theory {} over {} {{", t.theory.name, over(&t.over));
    for (name, fact) in &t.theory.facts {
        let _ = writeln!(out, "  fact {name} : {fact} ;");
    }
    out.push_str("}\n");
}

fn write_node(out: &mut String, d: &Derivation, depth: usize) {
    let pad = "  ".repeat(depth);
    let _ = writeln!(out, "{pad}conclusion {} ;", d.conclusion);
    let _ = writeln!(out, "{pad}rule {} {{", d.rule);
    for p in &d.premises {
        match p {
            Premise::Rule(child) => write_node(out, child, depth + 1),
            Premise::Sem(e) => {
                let _ = writeln!(out, "{pad}  sem {e} ;");
            }
            Premise::Fact(name) => {
                let _ = writeln!(out, "{pad}  fact {name} ;");
            }
        }
    }
    let _ = writeln!(out, "{pad}}}");
}

fn write_derive(out: &mut String, name: &str, d: &DerivationDecl) {
    let _ = writeln!(
        out,
        "derive {name} over {} uses {} {{",
        over(&d.over),
        d.uses
    );
    write_node(out, &d.derivation, 1);
    out.push_str("}\n");
}

/// The buffer fixture as a workspace: frames `X`, `Y`, `Z`, relation `Q`,
/// the quotient `quotient : X -> Z`, theory `T`, and its derivations.
pub fn buffer_workspace(fixture: &BufferFixture) -> Workspace {
    let mut ws = Workspace::new();
    ws.push_frame(fixture.x.clone());
    ws.push_frame(fixture.y.clone());
    ws.push_frame(fixture.z.clone());
    ws.push_relation("Q", fixture.q.clone());
    ws.push_function("quotient", fixture.quotient.clone());
    let over = Over {
        left: "X".into(),
        rel: RelExpr::named("Q"),
        right: "Y".into(),
    };
    ws.push_theory(over.clone(), fixture.theory.clone());
    for (name, d) in &fixture.derivations {
        ws.push_derivation(
            name.clone(),
            over.clone(),
            fixture.theory.name.clone(),
            d.clone(),
        );
    }
    ws
}

impl std::fmt::Display for Over {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&over(self))
    }
}
