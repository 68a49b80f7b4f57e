//! Quasi-identities over unary predicates and unary function symbols, with a
//! line-oriented text form.
//!
//! ```text
//! # comment lines before the header are kept as notes
//! style combined
//! pred P_1 P_2 U
//! fun i sigma
//! const w
//! sigma(w) = w
//! P_1(sigma(x)) -> P_2(x)
//! P_1(x) & P_2(x) -> U(x)
//! ```

use std::fmt;

use crate::error::{Error, Result};

pub const VARIABLES: [&str; 3] = ["x", "y", "z"];

pub const PRESENTATION_GRAMMAR: &str = "\
presentation format (one item per line, '#' starts a comment):
  style first|second|combined|fixture
  pred <name>...   fun <name>...   const <name>...
  <law>            premises joined by '&', then '->', then one atom; facts omit premises
  atom:  P(term) | term = term
  term:  x | y | z | <const> | <fun>(term)";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn app(f: &str, t: Term) -> Term {
        Term::App(f.to_string(), Box::new(t))
    }

    /// Applies the symbols innermost first: `apply_all(["f","g"], x)` is `g(f(x))`.
    pub fn apply_all<'a>(symbols: impl IntoIterator<Item = &'a str>, t: Term) -> Term {
        symbols.into_iter().fold(t, |acc, f| Term::app(f, acc))
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Const(_) => {}
            Term::App(_, t) => t.collect_vars(out),
        }
    }

    /// Replaces every occurrence of variable `v` by `by`.
    pub fn substitute(&self, v: &str, by: &Term) -> Term {
        match self {
            Term::Var(x) if x == v => by.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, t) => Term::App(f.clone(), Box::new(t.substitute(v, by))),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => write!(f, "{v}"),
            Term::App(g, t) => write!(f, "{g}({t})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Pred(String, Term),
    Eq(Term, Term),
}

impl Atom {
    pub fn pred(p: &str, t: Term) -> Atom {
        Atom::Pred(p.to_string(), t)
    }

    pub fn eq(a: Term, b: Term) -> Atom {
        Atom::Eq(a, b)
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Atom::Pred(_, t) => t.collect_vars(out),
            Atom::Eq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn substitute(&self, v: &str, by: &Term) -> Atom {
        match self {
            Atom::Pred(p, t) => Atom::Pred(p.clone(), t.substitute(v, by)),
            Atom::Eq(a, b) => Atom::Eq(a.substitute(v, by), b.substitute(v, by)),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Pred(p, t) => write!(f, "{p}({t})"),
            Atom::Eq(a, b) => write!(f, "{a} = {b}"),
        }
    }
}

/// `premises -> conclusion`; a fact when there are no premises. Premises are
/// kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuasiIdentity {
    premises: Vec<Atom>,
    conclusion: Atom,
}

impl QuasiIdentity {
    pub fn new(mut premises: Vec<Atom>, conclusion: Atom) -> Self {
        premises.sort();
        premises.dedup();
        QuasiIdentity { premises, conclusion }
    }

    pub fn fact(conclusion: Atom) -> Self {
        QuasiIdentity {
            premises: Vec::new(),
            conclusion,
        }
    }

    pub fn premises(&self) -> &[Atom] {
        &self.premises
    }

    pub fn conclusion(&self) -> &Atom {
        &self.conclusion
    }

    /// Variables in order of first occurrence (premises, then conclusion).
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        for a in &self.premises {
            a.collect_vars(&mut out);
        }
        self.conclusion.collect_vars(&mut out);
        out
    }

    pub fn substitute(&self, v: &str, by: &Term) -> QuasiIdentity {
        QuasiIdentity::new(
            self.premises.iter().map(|a| a.substitute(v, by)).collect(),
            self.conclusion.substitute(v, by),
        )
    }
}

impl fmt::Display for QuasiIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.premises.is_empty() {
            let ps: Vec<String> = self.premises.iter().map(|a| a.to_string()).collect();
            write!(f, "{} -> ", ps.join(" & "))?;
        }
        write!(f, "{}", self.conclusion)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Style {
    First,
    Second,
    Combined,
    Fixture,
}

impl Style {
    pub fn as_str(self) -> &'static str {
        match self {
            Style::First => "first",
            Style::Second => "second",
            Style::Combined => "combined",
            Style::Fixture => "fixture",
        }
    }

    fn parse(s: &str) -> Option<Style> {
        match s {
            "first" => Some(Style::First),
            "second" => Some(Style::Second),
            "combined" => Some(Style::Combined),
            "fixture" => Some(Style::Fixture),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub style: Style,
    pub notes: Vec<String>,
    pub predicates: Vec<String>,
    pub functions: Vec<String>,
    pub constants: Vec<String>,
    laws: Vec<QuasiIdentity>,
}

impl Presentation {
    pub fn new(style: Style, predicates: Vec<String>, functions: Vec<String>, constants: Vec<String>) -> Self {
        Presentation {
            style,
            notes: Vec::new(),
            predicates,
            functions,
            constants,
            laws: Vec::new(),
        }
    }

    pub fn laws(&self) -> &[QuasiIdentity] {
        &self.laws
    }

    /// Appends a law unless it is already present.
    pub fn push(&mut self, law: QuasiIdentity) {
        if !self.laws.contains(&law) {
            self.laws.push(law);
        }
    }

    pub fn contains(&self, law: &QuasiIdentity) -> bool {
        self.laws.contains(law)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for n in &self.notes {
            out.push_str(&format!("# {n}\n"));
        }
        out.push_str(&format!("style {}\n", self.style.as_str()));
        for (kw, names) in [("pred", &self.predicates), ("fun", &self.functions), ("const", &self.constants)] {
            if !names.is_empty() {
                out.push_str(&format!("{kw} {}\n", names.join(" ")));
            }
        }
        for law in &self.laws {
            out.push_str(&format!("{law}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Presentation> {
        let mut p = Presentation::new(Style::Fixture, Vec::new(), Vec::new(), Vec::new());
        let mut in_header = true;
        let mut saw_style = false;
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let trimmed = raw.trim();
            if let Some(note) = trimmed.strip_prefix('#') {
                if in_header && p.predicates.is_empty() && !saw_style {
                    p.notes.push(note.strip_prefix(' ').unwrap_or(note).to_string());
                }
                continue;
            }
            if trimmed.is_empty() {
                continue;
            }
            let mut words = trimmed.split_whitespace();
            let head = words.next().unwrap_or("");
            let col = raw.find(head).unwrap_or(0) + 1;
            match head {
                "style" if in_header => {
                    let v = words.next().unwrap_or("");
                    p.style = Style::parse(v).ok_or_else(|| perr(line, col, &format!("unknown style '{v}'")))?;
                    saw_style = true;
                }
                "pred" | "fun" | "const" if in_header => {
                    let list = match head {
                        "pred" => &mut p.predicates,
                        "fun" => &mut p.functions,
                        _ => &mut p.constants,
                    };
                    for w in words {
                        if !is_ident(w) {
                            return Err(perr(line, col, &format!("bad symbol name '{w}'")));
                        }
                        list.push(w.to_string());
                    }
                }
                _ => {
                    in_header = false;
                    let law = parse_law_line(raw, line, &p)?;
                    p.push(law);
                }
            }
        }
        Ok(p)
    }

    /// Parses law lines against this presentation's declarations.
    pub fn parse_laws(&self, text: &str) -> Result<Vec<QuasiIdentity>> {
        let mut out = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            out.push(parse_law_line(raw, ln + 1, self)?);
        }
        Ok(out)
    }

    pub fn parse_law(&self, text: &str) -> Result<QuasiIdentity> {
        parse_law_line(text, 1, self)
    }
}

fn is_ident(w: &str) -> bool {
    let mut c = w.chars();
    c.next().is_some_and(|c| c.is_ascii_alphabetic()) && c.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn perr(line: usize, column: usize, message: &str) -> Error {
    Error::Parse {
        line,
        column,
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Amp,
    Arrow,
    Equals,
}

fn lex(line: &str, line_no: usize) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let col = line[..pos].chars().count() + 1;
        match c {
            '#' => break,
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((col, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((col, Tok::RParen));
                i += 1;
            }
            '&' => {
                out.push((col, Tok::Amp));
                i += 1;
            }
            '=' => {
                out.push((col, Tok::Equals));
                i += 1;
            }
            '-' if chars.get(i + 1).map(|p| p.1) == Some('>') => {
                out.push((col, Tok::Arrow));
                i += 2;
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = pos;
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                let end = chars.get(i).map_or(line.len(), |p| p.0);
                out.push((col, Tok::Ident(line[start..end].to_string())));
            }
            other => return Err(perr(line_no, col, &format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    line: usize,
    ctx: &'a Presentation,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    /// Column of the current token, or of the last one at end of line.
    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or(1, |t| t.0)
    }

    fn err(&self, msg: &str) -> Error {
        perr(self.line, self.col(), msg)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {what}")))
        }
    }

    fn term(&mut self) -> Result<Term> {
        let col = self.col();
        let name = match self.peek() {
            Some(Tok::Ident(n)) => n.clone(),
            _ => return Err(self.err("expected a term")),
        };
        self.pos += 1;
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let inner = self.term()?;
            self.expect(Tok::RParen, "')'")?;
            return Ok(Term::App(name, Box::new(inner)));
        }
        if VARIABLES.contains(&name.as_str()) {
            Ok(Term::Var(name))
        } else if self.ctx.constants.contains(&name) || (self.ctx.constants.is_empty() && (name == "w" || name == "e")) {
            Ok(Term::Const(name))
        } else {
            Err(perr(self.line, col, &format!("unknown variable or constant '{name}'")))
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        let col = self.col();
        let t = self.term()?;
        if self.peek() == Some(&Tok::Equals) {
            self.pos += 1;
            let rhs = self.term()?;
            self.check_term(&t, col)?;
            self.check_term(&rhs, col)?;
            return Ok(Atom::Eq(t, rhs));
        }
        match t {
            Term::App(p, arg) => {
                if !self.ctx.predicates.is_empty() && !self.ctx.predicates.contains(&p) {
                    return Err(perr(self.line, col, &format!("undeclared predicate '{p}'")));
                }
                self.check_term(&arg, col)?;
                Ok(Atom::Pred(p, *arg))
            }
            _ => Err(perr(self.line, col, "expected a predicate application or an equation")),
        }
    }

    fn check_term(&self, t: &Term, col: usize) -> Result<()> {
        match t {
            Term::App(f, inner) => {
                if !self.ctx.functions.contains(f) {
                    return Err(perr(self.line, col, &format!("undeclared function '{f}'")));
                }
                self.check_term(inner, col)
            }
            _ => Ok(()),
        }
    }

    fn law(&mut self) -> Result<QuasiIdentity> {
        let mut atoms = vec![self.atom()?];
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            atoms.push(self.atom()?);
        }
        let law = if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let c = self.atom()?;
            QuasiIdentity::new(atoms, c)
        } else if atoms.len() == 1 {
            QuasiIdentity::fact(atoms.pop().expect("one atom"))
        } else {
            return Err(self.err("expected '->'"));
        };
        if self.pos < self.toks.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(law)
    }
}

fn parse_law_line(raw: &str, line: usize, ctx: &Presentation) -> Result<QuasiIdentity> {
    let toks = lex(raw, line)?;
    if toks.is_empty() {
        return Err(perr(line, 1, "empty law"));
    }
    Parser { toks, pos: 0, line, ctx }.law()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Presentation {
        Presentation::new(
            Style::Combined,
            vec!["A".into(), "B".into(), "U".into()],
            vec!["i".into(), "f".into()],
            vec!["w".into()],
        )
    }

    #[test]
    fn one_premise_law() {
        let q = ctx().parse_law("A(f(x)) -> B(x)").unwrap();
        assert_eq!(q.premises().len(), 1);
        assert_eq!(q.conclusion(), &Atom::pred("B", Term::var("x")));
        assert_eq!(q.to_string(), "A(f(x)) -> B(x)");
    }

    #[test]
    fn unclosed_call_reports_column_two() {
        let err = ctx().parse_law("A(").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 1,
                column: 2,
                message: "expected a term".into()
            }
        );
    }

    #[test]
    fn equations_and_facts() {
        let q = ctx().parse_law("f(x) = f(y) -> x = y").unwrap();
        assert_eq!(q.variables(), vec!["x".to_string(), "y".to_string()]);
        let fact = ctx().parse_law("A(w)").unwrap();
        assert!(fact.premises().is_empty());
    }

    #[test]
    fn rejects_undeclared() {
        assert!(ctx().parse_law("C(x)").is_err());
        assert!(ctx().parse_law("g(x) = x").is_err());
        assert!(ctx().parse_law("A(q)").is_err());
    }

    #[test]
    fn premises_are_canonical() {
        let a = ctx().parse_law("B(x) & A(x) & B(x) -> U(x)").unwrap();
        let b = ctx().parse_law("A(x) & B(x) -> U(x)").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn round_trip() {
        let mut p = ctx();
        p.notes.push("demo".into());
        p.push(QuasiIdentity::fact(Atom::pred("A", Term::constant("w"))));
        p.push(p.parse_law("A(x) & B(x) -> U(x)").unwrap());
        p.push(p.parse_law("U(x) -> x = w").unwrap());
        let text = p.render();
        let again = Presentation::parse(&text).unwrap();
        assert_eq!(again, p);
        assert_eq!(again.render(), text);
    }
}
