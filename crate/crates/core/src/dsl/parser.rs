use std::sync::Arc;

use crate::carrier::{Carrier, Subset};
use crate::config::EnumConfig;
use crate::lattice::{Caba, FiniteFunction};
use crate::logic::{
    Derivation, Entailment, Formula, Judgment, Premise, RelExpr, Statement, Theory,
};
use crate::modal::Frame;
use crate::relations::{CabaRel, FinRel};

use super::lexer::{Tok, Token};
use super::workspace::{
    CabaDecl, DeclKind, DerivationDecl, FormulaDecl, FunDecl, Over, RelBody, RelDecl, TheoryDecl,
};
use super::{ParseError, Pos, Workspace};

const TOP_LEVEL: [&str; 7] = ["frame", "rel", "fun", "caba", "formula", "theory", "derive"];
const RESERVED: [&str; 14] = [
    "frame", "rel", "fun", "caba", "formula", "theory", "derive", "top", "bot", "dia", "box", "Or",
    "And", "id",
];

type PResult<T> = Result<T, ParseError>;

pub(crate) struct Parser {
    toks: Vec<Token>,
    i: usize,
    pub(crate) ws: Workspace,
    pub(crate) errors: Vec<ParseError>,
}

fn semantic(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError {
        pos,
        message: message.into(),
        expected: vec![],
    }
}

impl Parser {
    pub(crate) fn new(toks: Vec<Token>) -> Self {
        Self {
            toks,
            i: 0,
            ws: Workspace::new(),
            errors: vec![],
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.i + 1).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError {
            pos: self.pos(),
            message: format!("unexpected {}", self.peek().describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<Pos> {
        if self.peek() == &t {
            Ok(self.advance().pos)
        } else {
            Err(self.unexpected(&[&format!("`{t}`")]))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> PResult<Pos> {
        if self.is_kw(kw) {
            Ok(self.advance().pos)
        } else {
            Err(self.unexpected(&[&format!("`{kw}`")]))
        }
    }

    /// A user-chosen name: identifier, not reserved.
    fn name(&mut self) -> PResult<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => Ok((s, self.advance().pos)),
            Tok::Ident(s) => Err(semantic(self.pos(), format!("`{s}` is reserved"))),
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    /// World or element name: integer, or any identifier but a top-level
    /// keyword.
    fn member(&mut self) -> PResult<(String, Pos)> {
        if self.at_member() {
            let t = self.advance();
            match t.tok {
                Tok::Int(s) | Tok::Ident(s) => Ok((s, t.pos)),
                _ => unreachable!(),
            }
        } else {
            Err(self.unexpected(&["identifier", "integer"]))
        }
    }

    fn at_member(&self) -> bool {
        matches!(self.peek(), Tok::Int(_))
            || matches!(self.peek(), Tok::Ident(s) if !TOP_LEVEL.contains(&s.as_str()))
    }

    pub(crate) fn parse(&mut self) {
        while self.peek() != &Tok::Eof {
            if let Err(e) = self.declaration() {
                self.errors.push(e);
                self.advance();
                while !matches!(self.peek(), Tok::Eof)
                    && !matches!(self.peek(), Tok::Ident(s) if TOP_LEVEL.contains(&s.as_str()))
                {
                    self.advance();
                }
            }
        }
    }

    fn declaration(&mut self) -> PResult<()> {
        let kw = match self.peek() {
            Tok::Ident(s) if TOP_LEVEL.contains(&s.as_str()) => s.clone(),
            _ => return Err(self.unexpected(&TOP_LEVEL.map(|k| k))),
        };
        self.advance();
        match kw.as_str() {
            "frame" => self.frame(),
            "rel" => self.rel(),
            "fun" => self.fun(),
            "caba" => self.caba(),
            "formula" => self.formula_decl(),
            "theory" => self.theory(),
            _ => self.derive(),
        }
    }

    fn fresh(&self, kind: DeclKind, name: &str, pos: Pos) -> PResult<()> {
        let taken = match kind {
            DeclKind::Frame | DeclKind::Caba => {
                self.ws.frames.contains_key(name) || self.ws.cabas.contains_key(name)
            }
            DeclKind::Rel => self.ws.relations.contains_key(name),
            DeclKind::Fun => self.ws.functions.contains_key(name),
            DeclKind::Formula => self.ws.formulas.contains_key(name),
            DeclKind::Theory => self.ws.theories.contains_key(name),
            DeclKind::Derive => self.ws.derivations.contains_key(name),
        };
        if taken {
            Err(semantic(
                pos,
                format!("duplicate {} `{name}`", kind.keyword()),
            ))
        } else {
            Ok(())
        }
    }

    fn frame_ref(&self, name: &str, pos: Pos) -> PResult<&Frame> {
        self.ws
            .frames
            .get(name)
            .ok_or_else(|| semantic(pos, format!("unknown frame `{name}`")))
    }

    fn world(&self, carrier: &Arc<Carrier>, (w, pos): &(String, Pos)) -> PResult<usize> {
        carrier
            .index_of(w)
            .ok_or_else(|| semantic(*pos, format!("unknown world `{w}` in `{}`", carrier.name())))
    }

    // frame F { worlds ... ; trans a -> b c, ... ; pred p = { ... } ; }
    fn frame(&mut self) -> PResult<()> {
        let (name, pos) = self.name()?;
        self.fresh(DeclKind::Frame, &name, pos)?;
        self.expect(Tok::LBrace)?;
        self.keyword("worlds")?;
        let mut worlds = Vec::new();
        while self.at_member() {
            worlds.push(self.member()?.0);
        }
        self.expect(Tok::Semi)?;
        let mut frame =
            Frame::new(name.clone(), worlds).map_err(|e| semantic(pos, e.to_string()))?;
        loop {
            if self.is_kw("trans") {
                self.advance();
                for (from, targets) in self.arrow_list(true)? {
                    self.world(frame.worlds(), &from)?;
                    for t in &targets {
                        self.world(frame.worlds(), t)?;
                        frame.add_transition(&from.0, &t.0).expect("worlds checked");
                    }
                }
                self.expect(Tok::Semi)?;
            } else if self.is_kw("pred") {
                self.advance();
                let (p, ppos) = self.name()?;
                self.expect(Tok::Eq)?;
                self.expect(Tok::LBrace)?;
                let mut set = Subset::EMPTY;
                while self.at_member() {
                    let w = self.member()?;
                    set.insert(self.world(frame.worlds(), &w)?);
                }
                self.expect(Tok::RBrace)?;
                self.expect(Tok::Semi)?;
                frame
                    .set_predicate(p, set)
                    .map_err(|e| semantic(ppos, e.to_string()))?;
            } else if self.eat(&Tok::RBrace) {
                break;
            } else {
                return Err(self.unexpected(&["`trans`", "`pred`", "`}`"]));
            }
        }
        self.ws
            .order
            .push((DeclKind::Frame, name.clone(), Some(pos)));
        self.ws.frames.insert(name, frame);
        Ok(())
    }

    /// `a -> b c, d -> e` with an optional trailing comma. With `many`
    /// false, exactly one target per source.
    #[allow(clippy::type_complexity)]
    fn arrow_list(&mut self, many: bool) -> PResult<Vec<((String, Pos), Vec<(String, Pos)>)>> {
        let mut out = Vec::new();
        while self.at_member() {
            let from = self.member()?;
            self.expect(Tok::Arrow)?;
            let mut targets = vec![self.member()?];
            while many && self.at_member() {
                targets.push(self.member()?);
            }
            out.push((from, targets));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(out)
    }

    fn endpoints(&mut self) -> PResult<((String, Pos), (String, Pos))> {
        self.expect(Tok::Colon)?;
        let a = self.name()?;
        self.expect(Tok::Arrow)?;
        let b = self.name()?;
        Ok((a, b))
    }

    // rel Q : A -> B { a -> b c, ... }
    fn rel(&mut self) -> PResult<()> {
        let (name, pos) = self.name()?;
        self.fresh(DeclKind::Rel, &name, pos)?;
        let ((a, apos), (b, bpos)) = self.endpoints()?;
        self.expect(Tok::LBrace)?;
        let pairs = self.arrow_list(true)?;
        self.expect(Tok::RBrace)?;
        let body = match (self.ws.frames.get(&a), self.ws.frames.get(&b)) {
            (Some(x), Some(y)) => {
                let mut rel = FinRel::empty(x.worlds().clone(), y.worlds().clone());
                for (from, targets) in &pairs {
                    let i = self.world(x.worlds(), from)?;
                    for t in targets {
                        rel.insert(i, self.world(y.worlds(), t)?);
                    }
                }
                RelBody::Frames(rel)
            }
            (Some(_), None) | (None, Some(_)) => {
                return Err(semantic(
                    pos,
                    format!("`{a}` and `{b}` must both be frames or both be cabas"),
                ))
            }
            (None, None) => {
                let ca = self.caba_ref(&a, apos)?.clone();
                let cb = self.caba_ref(&b, bpos)?.clone();
                let mut resolved = Vec::new();
                let mut grouped: Vec<(String, Vec<String>)> = Vec::new();
                for ((from, fpos), targets) in &pairs {
                    let e = ca
                        .element_named(from)
                        .map_err(|err| semantic(*fpos, err.to_string()))?;
                    let entry = match grouped.iter().position(|(g, _)| g == from) {
                        Some(k) => k,
                        None => {
                            grouped.push((from.clone(), vec![]));
                            grouped.len() - 1
                        }
                    };
                    for (t, tpos) in targets {
                        let f = cb
                            .element_named(t)
                            .map_err(|err| semantic(*tpos, err.to_string()))?;
                        resolved.push((e.clone(), f));
                        if !grouped[entry].1.contains(t) {
                            grouped[entry].1.push(t.clone());
                        }
                    }
                }
                let rel = CabaRel::from_pairs(ca, cb, &EnumConfig::from_env(), resolved)
                    .map_err(|e| semantic(pos, e.to_string()))?;
                RelBody::Cabas {
                    rel,
                    pairs: grouped,
                }
            }
        };
        self.ws.order.push((DeclKind::Rel, name.clone(), Some(pos)));
        self.ws.relations.insert(
            name,
            RelDecl {
                src: a,
                dst: b,
                body,
            },
        );
        Ok(())
    }

    fn caba_ref(&self, name: &str, pos: Pos) -> PResult<&Caba> {
        self.ws
            .cabas
            .get(name)
            .map(|c| &c.caba)
            .ok_or_else(|| semantic(pos, format!("unknown frame or caba `{name}`")))
    }

    // fun f : A -> B { a -> b, ... }
    fn fun(&mut self) -> PResult<()> {
        let (name, pos) = self.name()?;
        self.fresh(DeclKind::Fun, &name, pos)?;
        let ((a, apos), (b, bpos)) = self.endpoints()?;
        self.expect(Tok::LBrace)?;
        let pairs = self.arrow_list(false)?;
        self.expect(Tok::RBrace)?;
        let x = self.frame_ref(&a, apos)?.worlds().clone();
        let y = self.frame_ref(&b, bpos)?.worlds().clone();
        for (from, targets) in &pairs {
            self.world(&x, from)?;
            self.world(&y, &targets[0])?;
        }
        let function = FiniteFunction::from_pairs(
            x,
            y,
            pairs
                .iter()
                .map(|((f, _), t)| (f.as_str(), t[0].0.as_str())),
        )
        .map_err(|e| semantic(pos, e.to_string()))?;
        self.ws.order.push((DeclKind::Fun, name.clone(), Some(pos)));
        self.ws.functions.insert(
            name,
            FunDecl {
                src: a,
                dst: b,
                function,
            },
        );
        Ok(())
    }

    // caba C { elems e ... ; leq a <= b, ... ; }
    fn caba(&mut self) -> PResult<()> {
        let (name, pos) = self.name()?;
        self.fresh(DeclKind::Caba, &name, pos)?;
        self.expect(Tok::LBrace)?;
        self.keyword("elems")?;
        let mut elems = Vec::new();
        while self.at_member() {
            elems.push(self.member()?.0);
        }
        self.expect(Tok::Semi)?;
        let carrier =
            Carrier::new(name.clone(), elems).map_err(|e| semantic(pos, e.to_string()))?;
        let mut generators = Vec::new();
        let mut leq = FinRel::identity(carrier.clone());
        if self.is_kw("leq") {
            self.advance();
            while self.at_member() {
                let a = self.member()?;
                self.expect(Tok::Le)?;
                let b = self.member()?;
                leq.insert(self.world(&carrier, &a)?, self.world(&carrier, &b)?);
                generators.push((a.0, b.0));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::Semi)?;
        }
        self.expect(Tok::RBrace)?;
        let leq = leq.reflexive_transitive_closure().expect("endorelation");
        let caba =
            Caba::named(name.clone(), carrier, leq).map_err(|e| semantic(pos, e.to_string()))?;
        self.ws
            .order
            .push((DeclKind::Caba, name.clone(), Some(pos)));
        self.ws.cabas.insert(name, CabaDecl { caba, generators });
        Ok(())
    }

    // formula g over F = ... [;]
    fn formula_decl(&mut self) -> PResult<()> {
        let (name, pos) = self.name()?;
        self.fresh(DeclKind::Formula, &name, pos)?;
        self.keyword("over")?;
        let (frame, fpos) = self.name()?;
        self.frame_ref(&frame, fpos)?;
        self.expect(Tok::Eq)?;
        let raw = self.formula()?;
        let formula = self.resolve(raw, &frame)?;
        self.eat(&Tok::Semi);
        self.ws
            .order
            .push((DeclKind::Formula, name.clone(), Some(pos)));
        self.ws
            .formulas
            .insert(name, FormulaDecl { frame, formula });
        Ok(())
    }

    fn over(&mut self) -> PResult<Over> {
        self.keyword("over")?;
        self.expect(Tok::LParen)?;
        let (left, lpos) = self.name()?;
        self.expect(Tok::Comma)?;
        let rpos = self.pos();
        let rel = self.rel_expr()?;
        self.expect(Tok::Comma)?;
        let (right, _) = self.name()?;
        self.expect(Tok::RParen)?;
        self.frame_ref(&left, lpos)?;
        let (a, b) = self.rel_frames(&rel, rpos)?;
        if a != left || b != right {
            return Err(semantic(
                rpos,
                format!("`{rel}` relates `{a}` to `{b}`, not `{left}` to `{right}`"),
            ));
        }
        Ok(Over { left, rel, right })
    }

    // theory T over (F1, Q, F2) { fact n : stmt ; ... }
    fn theory(&mut self) -> PResult<()> {
        let (name, pos) = self.name()?;
        self.fresh(DeclKind::Theory, &name, pos)?;
        let over = self.over()?;
        self.expect(Tok::LBrace)?;
        let mut theory = Theory::new(name.clone());
        while self.is_kw("fact") {
            self.advance();
            let (fact, fpos) = self.name()?;
            if theory.facts.contains_key(&fact) {
                return Err(semantic(fpos, format!("duplicate fact `{fact}`")));
            }
            self.expect(Tok::Colon)?;
            let stmt = self.statement()?;
            self.expect(Tok::Semi)?;
            theory.add(fact, stmt);
        }
        self.expect(Tok::RBrace)?;
        self.ws
            .order
            .push((DeclKind::Theory, name.clone(), Some(pos)));
        self.ws.theories.insert(name, TheoryDecl { over, theory });
        Ok(())
    }

    // derive D over (F1, Q, F2) uses T { node }
    fn derive(&mut self) -> PResult<()> {
        let (name, pos) = self.name()?;
        self.fresh(DeclKind::Derive, &name, pos)?;
        let over = self.over()?;
        self.keyword("uses")?;
        let (uses, upos) = self.name()?;
        if !self.ws.theories.contains_key(&uses) {
            return Err(semantic(upos, format!("unknown theory `{uses}`")));
        }
        self.expect(Tok::LBrace)?;
        let derivation = self.node()?;
        self.expect(Tok::RBrace)?;
        self.ws
            .order
            .push((DeclKind::Derive, name.clone(), Some(pos)));
        self.ws.derivations.insert(
            name,
            DerivationDecl {
                over,
                uses,
                derivation,
            },
        );
        Ok(())
    }

    // conclusion stmt ; rule NAME { premise* }
    fn node(&mut self) -> PResult<Derivation> {
        self.keyword("conclusion")?;
        let conclusion = self.statement()?;
        self.expect(Tok::Semi)?;
        self.keyword("rule")?;
        let (rule, _) = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut premises = Vec::new();
        loop {
            if self.is_kw("conclusion") {
                premises.push(Premise::Rule(self.node()?));
            } else if self.is_kw("sem") {
                self.advance();
                let pos = self.pos();
                match self.statement()? {
                    Statement::Entailment(e) => premises.push(Premise::Sem(e)),
                    Statement::Judgment(_) => {
                        return Err(semantic(pos, "`sem` premises must be entailments"))
                    }
                }
                self.expect(Tok::Semi)?;
            } else if self.is_kw("fact") {
                self.advance();
                premises.push(Premise::Fact(self.name()?.0));
                self.expect(Tok::Semi)?;
            } else if self.eat(&Tok::RBrace) {
                break;
            } else {
                return Err(self.unexpected(&["`conclusion`", "`sem`", "`fact`", "`}`"]));
            }
        }
        Ok(Derivation {
            conclusion,
            rule,
            premises,
        })
    }

    // F |- g => g'   or   g [R] g'
    fn statement(&mut self) -> PResult<Statement> {
        if matches!(self.peek(), Tok::Ident(_)) && self.peek2() == &Tok::Turnstile {
            let (frame, fpos) = self.name()?;
            self.frame_ref(&frame, fpos)?;
            self.advance();
            let lhs = self.formula()?;
            self.expect(Tok::Implies)?;
            let rhs = self.formula()?;
            let lhs = self.resolve(lhs, &frame)?;
            let rhs = self.resolve(rhs, &frame)?;
            return Ok(Entailment::new(frame, lhs, rhs).into());
        }
        let lhs = self.formula()?;
        self.expect(Tok::LBrack)?;
        let rpos = self.pos();
        let rel = self.rel_expr()?;
        self.expect(Tok::RBrack)?;
        let rhs = self.formula()?;
        let (a, b) = self.rel_frames(&rel, rpos)?;
        let lhs = self.resolve(lhs, &a)?;
        let rhs = self.resolve(rhs, &b)?;
        Ok(Judgment::new(lhs, rel, rhs).into())
    }

    fn rel_expr(&mut self) -> PResult<RelExpr> {
        let mut r = self.rel_postfix()?;
        while self.eat(&Tok::Semi) {
            r = r.then(self.rel_postfix()?);
        }
        Ok(r)
    }

    fn rel_postfix(&mut self) -> PResult<RelExpr> {
        let mut r = if self.eat(&Tok::LParen) {
            let r = self.rel_expr()?;
            self.expect(Tok::RParen)?;
            r
        } else if self.is_kw("id") {
            self.advance();
            self.expect(Tok::LParen)?;
            let (f, _) = self.name()?;
            self.expect(Tok::RParen)?;
            RelExpr::Id(f)
        } else {
            RelExpr::Named(
                self.name()
                    .map_err(|_| self.unexpected(&["relation name", "`id`", "`(`"]))?
                    .0,
            )
        };
        while self.eat(&Tok::Caret) {
            r = r.dagger();
        }
        Ok(r)
    }

    /// Source and target frame names of a relation expression.
    fn rel_frames(&self, rel: &RelExpr, pos: Pos) -> PResult<(String, String)> {
        Ok(match rel {
            RelExpr::Named(n) => match self.ws.relations.get(n) {
                Some(RelDecl {
                    src,
                    dst,
                    body: RelBody::Frames(_),
                }) => (src.clone(), dst.clone()),
                Some(_) => {
                    return Err(semantic(
                        pos,
                        format!("relation `{n}` is not between frames"),
                    ))
                }
                None => return Err(semantic(pos, format!("unknown relation `{n}`"))),
            },
            RelExpr::Id(f) => {
                self.frame_ref(f, pos)?;
                (f.clone(), f.clone())
            }
            RelExpr::Dagger(r) => {
                let (a, b) = self.rel_frames(r, pos)?;
                (b, a)
            }
            RelExpr::Seq(r, s) => {
                let (a, b) = self.rel_frames(r, pos)?;
                let (c, d) = self.rel_frames(s, pos)?;
                if b != c {
                    return Err(semantic(
                        pos,
                        format!("cannot compose `{r}` (into `{b}`) with `{s}` (from `{c}`)"),
                    ));
                }
                (a, d)
            }
        })
    }

    // formula := and ('|' and)* ; and := unary ('&' unary)* ;
    // unary := '!' unary | 'dia' unary | 'box' unary | atom
    fn formula(&mut self) -> PResult<Raw> {
        let mut parts = vec![self.conjunction()?];
        while self.eat(&Tok::Bar) {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Raw::Or(parts)
        })
    }

    fn conjunction(&mut self) -> PResult<Raw> {
        let mut parts = vec![self.unary()?];
        while self.eat(&Tok::Amp) {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Raw::And(parts)
        })
    }

    fn unary(&mut self) -> PResult<Raw> {
        if self.eat(&Tok::Bang) {
            return Ok(Raw::Not(Box::new(self.unary()?)));
        }
        if self.is_kw("dia") {
            self.advance();
            return Ok(Raw::Dia(Box::new(self.unary()?)));
        }
        if self.is_kw("box") {
            self.advance();
            return Ok(Raw::Box(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Raw> {
        const EXPECTED: [&str; 9] = [
            "`top`", "`bot`", "`!`", "`dia`", "`box`", "`@`", "`(`", "`Or[`", "name",
        ];
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::At => {
                self.advance();
                let (w, pos) = self.member()?;
                Ok(Raw::World(w, pos))
            }
            Tok::Ident(s) => match s.as_str() {
                "top" => {
                    self.advance();
                    Ok(Raw::Top)
                }
                "bot" => {
                    self.advance();
                    Ok(Raw::Bot)
                }
                "Or" | "And" => {
                    self.advance();
                    self.expect(Tok::LBrack)?;
                    let mut items = Vec::new();
                    if !self.eat(&Tok::RBrack) {
                        loop {
                            items.push(self.formula()?);
                            if self.eat(&Tok::RBrack) {
                                break;
                            }
                            self.expect(Tok::Comma)?;
                        }
                    }
                    Ok(if s == "Or" {
                        Raw::Or(items)
                    } else {
                        Raw::And(items)
                    })
                }
                _ if RESERVED.contains(&s.as_str()) => Err(self.unexpected(&EXPECTED)),
                _ => {
                    let pos = self.advance().pos;
                    Ok(Raw::Name(s, pos))
                }
            },
            _ => Err(self.unexpected(&EXPECTED)),
        }
    }

    /// Binds names: a predicate of `frame` first, then a formula declared
    /// over `frame`, which is inlined.
    fn resolve(&self, raw: Raw, frame: &str) -> PResult<Formula> {
        let f = &self.ws.frames[frame];
        let all = |v: Vec<Raw>| {
            v.into_iter()
                .map(|r| self.resolve(r, frame))
                .collect::<PResult<Vec<_>>>()
        };
        Ok(match raw {
            Raw::Top => Formula::Top,
            Raw::Bot => Formula::Bot,
            Raw::And(v) => Formula::And(all(v)?),
            Raw::Or(v) => Formula::Or(all(v)?),
            Raw::Not(g) => self.resolve(*g, frame)?.not(),
            Raw::Dia(g) => self.resolve(*g, frame)?.dia(),
            Raw::Box(g) => self.resolve(*g, frame)?.boxed(),
            Raw::World(w, pos) => {
                self.world(f.worlds(), &(w.clone(), pos))?;
                Formula::World(w)
            }
            Raw::Name(n, pos) => {
                if f.predicate(&n).is_some() {
                    Formula::Pred(n)
                } else {
                    match self.ws.formulas.get(&n) {
                        Some(d) if d.frame == frame => d.formula.clone(),
                        Some(d) => {
                            return Err(semantic(
                                pos,
                                format!("formula `{n}` is over `{}`, not `{frame}`", d.frame),
                            ))
                        }
                        None => {
                            return Err(semantic(
                                pos,
                                format!("unknown predicate or formula `{n}` on `{frame}`"),
                            ))
                        }
                    }
                }
            }
        })
    }
}

/// Formula syntax before names are bound to a frame.
#[derive(Debug, Clone)]
pub(crate) enum Raw {
    Top,
    Bot,
    And(Vec<Raw>),
    Or(Vec<Raw>),
    Not(Box<Raw>),
    Dia(Box<Raw>),
    Box(Box<Raw>),
    Name(String, Pos),
    World(String, Pos),
}
