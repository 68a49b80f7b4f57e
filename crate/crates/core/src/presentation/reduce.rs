//! Rewriting a quasi-identity into equivalent laws in at most one variable,
//! relative to a second-style or combined context.

use std::collections::HashMap;

use crate::error::{Error, Result};

use super::syntax::{Atom, Presentation, QuasiIdentity, Style, Term};

/// Composition data recovered from a context presentation. Symbol 0 is the
/// identity; `table[(inner, outer)]` is the symbol equal to `outer(inner(x))`.
#[derive(Debug, Clone)]
pub struct ReductionContext {
    symbols: Vec<String>,
    index: HashMap<String, usize>,
    table: HashMap<(usize, usize), usize>,
    constant: String,
    predicates: Vec<String>,
}

impl ReductionContext {
    pub fn from_presentation(ctx: &Presentation) -> Result<Self> {
        let constant = match ctx.style {
            Style::Second | Style::Combined => ctx
                .constants
                .first()
                .cloned()
                .ok_or_else(|| Error::NotReducible("context declares no constant".into()))?,
            other => {
                return Err(Error::NotReducible(format!(
                    "context style {} is neither second nor combined",
                    other.as_str()
                )))
            }
        };
        let x = Term::var("x");
        // identity: the symbol with the fact f(x) = x
        let identity = ctx.laws().iter().find_map(|q| match (q.premises(), q.conclusion()) {
            ([], Atom::Eq(Term::App(f, inner), rhs)) if **inner == x && *rhs == x => Some(f.clone()),
            _ => None,
        });
        let mut symbols = vec![identity.clone().unwrap_or_default()];
        symbols.extend(ctx.functions.iter().filter(|f| Some(*f) != identity.as_ref()).cloned());
        let index: HashMap<String, usize> = symbols
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty())
            .map(|(i, s)| (s.clone(), i))
            .collect();
        if identity.is_none() && symbols.len() > 1 {
            return Err(Error::NotReducible("functions declared without an identity law".into()));
        }
        let mut table = HashMap::new();
        for f in 0..symbols.len() {
            table.insert((0, f), f);
            table.insert((f, 0), f);
        }
        for q in ctx.laws() {
            if !q.premises().is_empty() {
                continue;
            }
            if let Atom::Eq(Term::App(outer, mid), rhs) = q.conclusion() {
                if let Term::App(inner, base) = &**mid {
                    if **base != x {
                        continue;
                    }
                    let h = match rhs {
                        Term::Var(v) if v == "x" => Some(0),
                        Term::App(h, b) if **b == x => index.get(h).copied(),
                        _ => None,
                    };
                    if let (Some(&i), Some(&o), Some(h)) = (index.get(inner), index.get(outer), h) {
                        table.insert((i, o), h);
                    }
                }
            }
        }
        for i in 1..symbols.len() {
            for o in 1..symbols.len() {
                if !table.contains_key(&(i, o)) {
                    return Err(Error::NotReducible(format!(
                        "context gives no value for {}({}(x))",
                        symbols[o], symbols[i]
                    )));
                }
            }
        }
        Ok(ReductionContext {
            symbols,
            index,
            table,
            constant,
            predicates: ctx.predicates.clone(),
        })
    }

    fn seq(&self, inner: usize, outer: usize) -> usize {
        self.table[&(inner, outer)]
    }

    fn term(&self, f: usize, v: &str) -> Term {
        if f == 0 {
            Term::var(v)
        } else {
            Term::app(&self.symbols[f], Term::var(v))
        }
    }
}

/// A term reduced to `w`/`e` or `f(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Flat {
    Const,
    App(usize, String),
}

/// Atomic formulae up to equivalence modulo the context laws.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Normal {
    True,
    Pred(String, usize, String),
    /// `v = w`
    IsConst(String),
    /// `h(u) = v` with `u != v`
    Link(usize, String, String),
}

fn flatten(cx: &ReductionContext, t: &Term) -> Result<Flat> {
    match t {
        Term::Var(v) => Ok(Flat::App(0, v.clone())),
        Term::Const(c) if *c == cx.constant => Ok(Flat::Const),
        Term::Const(c) => Err(Error::NotReducible(format!("unknown constant {c}"))),
        Term::App(f, inner) => {
            let fi = *cx
                .index
                .get(f)
                .ok_or_else(|| Error::NotReducible(format!("unknown function {f}")))?;
            Ok(match flatten(cx, inner)? {
                Flat::Const => Flat::Const,
                Flat::App(g, v) => Flat::App(cx.seq(g, fi), v),
            })
        }
    }
}

fn normalize(cx: &ReductionContext, a: &Atom) -> Result<Normal> {
    match a {
        Atom::Pred(p, t) => {
            if !cx.predicates.contains(p) {
                return Err(Error::NotReducible(format!("unknown predicate {p}")));
            }
            Ok(match flatten(cx, t)? {
                Flat::Const => Normal::True,
                Flat::App(f, v) => Normal::Pred(p.clone(), f, v),
            })
        }
        Atom::Eq(l, r) => {
            let (l, r) = (flatten(cx, l)?, flatten(cx, r)?);
            Ok(match (l, r) {
                (Flat::Const, Flat::Const) => Normal::True,
                (Flat::Const, Flat::App(_, v)) | (Flat::App(_, v), Flat::Const) => Normal::IsConst(v),
                (Flat::App(f, u), Flat::App(g, v)) if u == v => {
                    if f == g {
                        Normal::True
                    } else {
                        Normal::IsConst(u)
                    }
                }
                (Flat::App(f, u), Flat::App(g, v)) => {
                    let n = cx.symbols.len();
                    if let Some(h) = (0..n).find(|&h| cx.seq(h, g) == f) {
                        Normal::Link(h, u, v)
                    } else if let Some(h) = (0..n).find(|&h| cx.seq(h, f) == g) {
                        Normal::Link(h, v, u)
                    } else {
                        return Err(Error::NotReducible(format!(
                            "no h relates {} and {}",
                            cx.symbols[f], cx.symbols[g]
                        )));
                    }
                }
            })
        }
    }
}

fn render(cx: &ReductionContext, n: &Normal, rename: &str) -> Atom {
    match n {
        Normal::Pred(p, f, _) => Atom::pred(p, cx.term(*f, rename)),
        Normal::IsConst(_) => Atom::eq(Term::var(rename), Term::constant(&cx.constant)),
        Normal::True | Normal::Link(..) => unreachable!("only single-variable atoms are rendered"),
    }
}

fn var_of(n: &Normal) -> Option<&str> {
    match n {
        Normal::Pred(_, _, v) | Normal::IsConst(v) => Some(v),
        _ => None,
    }
}

/// One-variable laws equivalent to `q` modulo the context. An empty result
/// means `q` follows from the context alone.
pub fn reduce_to_one_variable(q: &QuasiIdentity, ctx: &Presentation) -> Result<Vec<QuasiIdentity>> {
    let cx = ReductionContext::from_presentation(ctx)?;
    reduce_with(&cx, q)
}

pub fn reduce_with(cx: &ReductionContext, q: &QuasiIdentity) -> Result<Vec<QuasiIdentity>> {
    let mut law = q.clone();
    let (premises, conclusion) = loop {
        let premises: Vec<Normal> = law
            .premises()
            .iter()
            .map(|a| normalize(cx, a))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|n| *n != Normal::True)
            .collect();
        let conclusion = normalize(cx, law.conclusion())?;
        if conclusion == Normal::True || premises.contains(&conclusion) {
            return Ok(Vec::new());
        }
        // eliminate variables fixed by equational premises
        let step = premises.iter().find_map(|n| match n {
            Normal::IsConst(v) => Some((v.clone(), Term::constant(&cx.constant))),
            Normal::Link(h, u, v) => Some((v.clone(), cx.term(*h, u))),
            _ => None,
        });
        match step {
            Some((v, by)) => law = law.substitute(&v, &by),
            None => break (premises, conclusion),
        }
    };

    let one = |v: &str, concl: Normal| -> QuasiIdentity {
        let ps: Vec<Atom> = premises
            .iter()
            .filter(|n| var_of(n) == Some(v))
            .map(|n| render(cx, n, "x"))
            .collect();
        QuasiIdentity::new(ps, render(cx, &concl, "x"))
    };
    let mut out = match &conclusion {
        Normal::Pred(_, _, v) | Normal::IsConst(v) => vec![one(v, conclusion.clone())],
        Normal::Link(_, u, v) => vec![
            one(u, Normal::IsConst(u.clone())),
            one(v, Normal::IsConst(v.clone())),
        ],
        Normal::True => unreachable!(),
    };
    out.dedup();
    out.retain(|q| !q.premises().contains(q.conclusion()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{Operator, OperatorMonoid, DEFAULT_CLOSURE_BOUND};
    use crate::presentation::emit::{present_combined, present_second};
    use crate::semilattice::Semilattice;

    fn diamond() -> Semilattice {
        Semilattice::from_order(4, |x, y| x == y || x == 0 || y == 3).unwrap()
    }

    fn combined() -> Presentation {
        let s = diamond();
        let sigma = Operator::new(&s, vec![0, 2, 1, 3]).unwrap();
        let m = OperatorMonoid::generate(&s, &[("sigma".into(), sigma)], DEFAULT_CLOSURE_BOUND).unwrap();
        present_combined(&s, &m).unwrap()
    }

    fn reduce(ctx: &Presentation, text: &str) -> Vec<String> {
        let q = ctx.parse_law(text).unwrap();
        reduce_to_one_variable(&q, ctx)
            .unwrap()
            .iter()
            .map(|q| q.to_string())
            .collect()
    }

    #[test]
    fn drops_foreign_variables() {
        let ctx = present_second(&diamond());
        assert_eq!(reduce(&ctx, "P_1(x) & P_2(y) -> E(x)"), ["P_1(x) -> E(x)"]);
    }

    #[test]
    fn splits_equation_between_variables() {
        let ctx = present_second(&Semilattice::chain(4));
        assert_eq!(
            reduce(&ctx, "P_1(x) & P_2(y) & E(z) -> x = y"),
            ["P_1(x) -> x = e", "P_2(x) -> x = e"]
        );
    }

    #[test]
    fn one_variable_law_unchanged() {
        let ctx = present_second(&diamond());
        assert_eq!(reduce(&ctx, "P_1(x) -> P_2(x)"), ["P_1(x) -> P_2(x)"]);
    }

    #[test]
    fn combined_normalizes_terms() {
        let ctx = combined();
        assert_eq!(reduce(&ctx, "P_1(sigma(sigma(y))) -> U(y)"), ["P_1(x) -> U(x)"]);
        assert_eq!(reduce(&ctx, "sigma(x) = sigma(y) -> x = y"), Vec::<String>::new());
        assert_eq!(reduce(&ctx, "sigma(x) = y & P_1(y) -> P_2(x)"), ["P_1(sigma(x)) -> P_2(x)"]);
        assert_eq!(reduce(&ctx, "sigma(x) = x -> P_1(x)"), Vec::<String>::new());
        assert_eq!(reduce(&ctx, "P_1(x) -> sigma(x) = x"), ["P_1(x) -> x = w"]);
    }

    #[test]
    fn rejects_other_styles() {
        let ctx = crate::presentation::emit::present_first(&diamond());
        let q = ctx.parse_law("P_1(x) -> P_2(x)").unwrap();
        assert!(matches!(reduce_to_one_variable(&q, &ctx), Err(Error::NotReducible(_))));
    }
}
