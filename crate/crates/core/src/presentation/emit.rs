//! Law generators for the three representations and the near-leaf fixture.

use crate::error::{Error, Result};
use crate::monoid::{OperatorMonoid, IDENTITY_NAME};
use crate::semilattice::{bit, members, Mask, Semilattice};

use super::syntax::{Atom, Presentation, QuasiIdentity, Style, Term};

/// Default truncation for the `k > 0` schemata of the near-leaf fixture.
pub const DEFAULT_SCHEMA_BOUND: usize = 4;

/// Predicate for a nonzero element: `P_i`, with top named `U` (or `E` in
/// the second style).
pub fn predicate_name(s: &Semilattice, a: usize, style: Style) -> String {
    if a == s.top() {
        if style == Style::Second { "E" } else { "U" }.to_string()
    } else {
        format!("P_{a}")
    }
}

fn predicates(s: &Semilattice, style: Style) -> Vec<String> {
    s.elements().skip(1).map(|a| predicate_name(s, a, style)).collect()
}

/// Antichains `C` of nonzero elements with `|C| >= 2`, `⋁C >= b`, no member
/// above `b`, minimal under `C' <= C iff every c' lies below some c`.
pub fn irredundant_covers(s: &Semilattice, b: usize) -> Vec<Vec<usize>> {
    let n = s.size();
    assert!(n <= 20, "cover enumeration limited to 20 elements");
    let nonzero: Mask = s.full_mask() & !bit(0);
    let candidates: Vec<Mask> = (1u64..1 << n)
        .filter(|&c| c & !nonzero == 0 && c.count_ones() >= 2)
        .filter(|&c| members(c).all(|x| !s.leq(b, x)))
        .filter(|&c| members(c).all(|x| members(c).all(|y| x == y || !s.leq(x, y))))
        .filter(|&c| s.leq(b, s.join_all(c)))
        .collect();
    let below = |lo: Mask, hi: Mask| members(lo).all(|x| members(hi).any(|y| s.leq(x, y)));
    candidates
        .iter()
        .copied()
        .filter(|&c| candidates.iter().all(|&d| d == c || !below(d, c)))
        .map(|c| members(c).collect())
        .collect()
}

fn x() -> Term {
    Term::var("x")
}

/// Order laws `A(x) -> B(x)` for `a > b` and join laws over irredundant covers.
fn order_and_join_laws(p: &mut Presentation, s: &Semilattice, style: Style) {
    let name = |a: usize| predicate_name(s, a, style);
    for a in s.elements().skip(1) {
        for b in s.elements().skip(1) {
            if s.lt(b, a) {
                p.push(QuasiIdentity::new(vec![Atom::pred(&name(a), x())], Atom::pred(&name(b), x())));
            }
        }
    }
    for b in s.elements().skip(1) {
        for cover in irredundant_covers(s, b) {
            let premises = cover.iter().map(|&c| Atom::pred(&name(c), x())).collect();
            p.push(QuasiIdentity::new(premises, Atom::pred(&name(b), x())));
        }
    }
}

pub fn present_first(s: &Semilattice) -> Presentation {
    let mut p = Presentation::new(Style::First, predicates(s, Style::First), Vec::new(), Vec::new());
    p.notes.push("first representation".into());
    p.push(QuasiIdentity::fact(Atom::eq(x(), Term::var("y"))));
    order_and_join_laws(&mut p, s, Style::First);
    p
}

pub fn present_second(s: &Semilattice) -> Presentation {
    let e = || Term::constant("e");
    let mut p = Presentation::new(Style::Second, predicates(s, Style::Second), Vec::new(), vec!["e".into()]);
    p.notes.push("second representation".into());
    for a in s.elements().skip(1) {
        p.push(QuasiIdentity::fact(Atom::pred(&predicate_name(s, a, Style::Second), e())));
    }
    if s.size() == 1 {
        // top is 0, whose predicate would hold everywhere
        p.push(QuasiIdentity::fact(Atom::eq(x(), e())));
    } else {
        p.push(QuasiIdentity::new(
            vec![Atom::pred(&predicate_name(s, s.top(), Style::Second), x())],
            Atom::eq(x(), e()),
        ));
    }
    order_and_join_laws(&mut p, s, Style::Second);
    p
}

/// `f(t)`, or `t` itself for the identity.
pub fn apply_name(m: &OperatorMonoid, f: usize, t: Term) -> Term {
    if f == 0 {
        t
    } else {
        Term::app(m.name(f), t)
    }
}

/// The atoms of `𝒫(s)`: `A(f(x))` with `a != 0` and `f(a) = s`.
pub fn p_atoms(s: &Semilattice, m: &OperatorMonoid, target: usize) -> Vec<Atom> {
    let mut out = Vec::new();
    for a in s.elements().skip(1) {
        for f in 0..m.len() {
            if m.element(f).apply(a) == target {
                out.push(Atom::pred(&predicate_name(s, a, Style::Combined), apply_name(m, f, x())));
            }
        }
    }
    out
}

pub fn present_combined(s: &Semilattice, m: &OperatorMonoid) -> Result<Presentation> {
    let flags = m.properties(s);
    if !flags.reductive {
        return Err(Error::MissingProperty("reductive"));
    }
    if !flags.right_cancellative {
        return Err(Error::MissingProperty("right_cancellative"));
    }
    if !flags.fixes_top {
        return Err(Error::MissingProperty("fixes_top"));
    }
    let w = || Term::constant("w");
    let name = |a: usize| predicate_name(s, a, Style::Combined);
    let mut p = Presentation::new(Style::Combined, predicates(s, Style::Combined), m.names().to_vec(), vec!["w".into()]);
    p.notes.push("combined representation".into());
    let ids = 1..m.len();

    // operators fix w
    for f in ids.clone() {
        p.push(QuasiIdentity::fact(Atom::eq(Term::app(m.name(f), w()), w())));
    }
    // monoid action: f(g(x)) = h(x) with h = g∘f
    p.push(QuasiIdentity::fact(Atom::eq(Term::app(IDENTITY_NAME, x()), x())));
    for f in ids.clone() {
        for g in ids.clone() {
            let h = m.compose(g, f);
            let lhs = Term::app(m.name(f), Term::app(m.name(g), x()));
            p.push(QuasiIdentity::fact(Atom::eq(lhs, apply_name(m, h, x()))));
        }
    }
    // injectivity
    for f in ids.clone() {
        p.push(QuasiIdentity::new(
            vec![Atom::eq(Term::app(m.name(f), x()), Term::app(m.name(f), Term::var("y")))],
            Atom::eq(x(), Term::var("y")),
        ));
    }
    // distinct operators agree only at w
    for f in 0..m.len() {
        for g in f + 1..m.len() {
            p.push(QuasiIdentity::new(
                vec![Atom::eq(apply_name(m, f, x()), apply_name(m, g, x()))],
                Atom::eq(x(), w()),
            ));
        }
    }
    // top collapses to w
    if s.size() == 1 {
        p.push(QuasiIdentity::fact(Atom::eq(x(), w())));
    } else {
        p.push(QuasiIdentity::new(vec![Atom::pred(&name(s.top()), x())], Atom::eq(x(), w())));
    }
    // atoms sent to zero
    for atom in p_atoms(s, m, 0) {
        p.push(QuasiIdentity::fact(atom));
    }
    // every predicate holds at w
    for a in s.elements().skip(1) {
        p.push(QuasiIdentity::fact(Atom::pred(&name(a), w())));
    }
    // order laws: β -> α for β ∈ 𝒫(b), α ∈ 𝒫(a), 0 < a <= b
    for a in s.elements().skip(1) {
        let alphas = p_atoms(s, m, a);
        for b in s.elements().filter(|&b| s.leq(a, b)) {
            for beta in p_atoms(s, m, b) {
                for alpha in &alphas {
                    if *alpha != beta {
                        p.push(QuasiIdentity::new(vec![beta.clone()], alpha.clone()));
                    }
                }
            }
        }
    }
    // join laws over irredundant covers, canonical premises B_j(x)
    for a in s.elements().skip(1) {
        for cover in irredundant_covers(s, a) {
            let premises = cover.iter().map(|&c| Atom::pred(&name(c), x())).collect();
            p.push(QuasiIdentity::new(premises, Atom::pred(&name(a), x())));
        }
    }
    Ok(p)
}

/// The near-leaf fixture, `k > 0` schemata truncated at `bound`.
pub fn present_dual_near_leaf(bound: usize) -> Presentation {
    let e = || Term::constant("e");
    let f = |t: Term| Term::app("f", t);
    let g = |t: Term| Term::app("g", t);
    let pred = |p: &str, t: Term| Atom::pred(p, t);
    let law = |ps: Vec<Atom>, c: Atom| QuasiIdentity::new(ps, c);
    let mut p = Presentation::new(
        Style::Fixture,
        ["A", "B", "C", "D"].map(String::from).to_vec(),
        vec!["f".into(), "g".into()],
        vec!["e".into()],
    );
    p.notes.push("dual near-leaf".into());
    p.notes.push(format!(
        "truncated: x = f^k(x) -> x = e and x = g^k(x) -> x = e only for 0 < k <= {bound}"
    ));
    p.push(QuasiIdentity::fact(Atom::eq(f(g(x())), x())));
    p.push(QuasiIdentity::fact(Atom::eq(g(f(x())), x())));
    for a in ["A", "B", "C", "D"] {
        p.push(QuasiIdentity::fact(pred(a, e())));
    }
    p.push(QuasiIdentity::fact(Atom::eq(f(e()), e())));
    p.push(QuasiIdentity::fact(Atom::eq(g(e()), e())));
    p.push(law(vec![pred("D", x())], pred("C", x())));
    p.push(law(vec![pred("C", x())], pred("B", x())));
    p.push(law(vec![pred("B", x())], pred("A", x())));
    p.push(law(vec![pred("C", x())], pred("D", g(x()))));
    p.push(law(vec![pred("B", x())], pred("C", g(x()))));
    p.push(law(vec![pred("A", x())], pred("B", g(x()))));
    p.push(law(vec![pred("A", x()), pred("C", g(x()))], pred("B", x())));
    p.push(law(vec![pred("B", x()), pred("D", g(x()))], pred("C", x())));
    for sym in ["f", "g"] {
        for k in 1..=bound {
            let power = Term::apply_all(std::iter::repeat_n(sym, k), x());
            p.push(law(vec![Atom::eq(x(), power)], Atom::eq(x(), e())));
        }
    }
    p
}

/// Number of laws of the form `x = f^k(x) -> x = e`.
pub fn power_schema_instances(p: &Presentation) -> usize {
    p.laws()
        .iter()
        .filter(|q| {
            matches!(q.premises(), [Atom::Eq(Term::Var(_), Term::App(..))])
                && matches!(q.conclusion(), Atom::Eq(_, Term::Const(_)))
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{Operator, DEFAULT_CLOSURE_BOUND};

    fn diamond() -> Semilattice {
        Semilattice::from_order(4, |x, y| x == y || x == 0 || y == 3).unwrap()
    }

    fn swap(s: &Semilattice) -> OperatorMonoid {
        let sigma = Operator::new(s, vec![0, 2, 1, 3]).unwrap();
        OperatorMonoid::generate(s, &[("sigma".into(), sigma)], DEFAULT_CLOSURE_BOUND).unwrap()
    }

    fn has_law(p: &Presentation, text: &str) -> bool {
        p.contains(&p.parse_law(text).unwrap())
    }

    #[test]
    fn first_on_chain_and_diamond() {
        let chain = present_first(&Semilattice::chain(3));
        assert!(has_law(&chain, "U(x) -> P_1(x)"));
        assert!(has_law(&chain, "x = y"));
        let d = present_first(&diamond());
        assert!(has_law(&d, "P_1(x) & P_2(x) -> U(x)"));
        let one = present_first(&Semilattice::chain(1));
        assert_eq!(one.laws().len(), 1);
    }

    #[test]
    fn second_on_chain() {
        let p = present_second(&Semilattice::chain(3));
        for law in ["P_1(e)", "E(e)", "E(x) -> x = e", "E(x) -> P_1(x)"] {
            assert!(has_law(&p, law), "{law}");
        }
        let d = present_second(&diamond());
        assert!(has_law(&d, "P_1(x) & P_2(x) -> E(x)"));
    }

    #[test]
    fn combined_on_swap() {
        let s = diamond();
        let p = present_combined(&s, &swap(&s)).unwrap();
        for law in [
            "P_1(sigma(x)) -> P_2(x)",
            "U(x) -> x = w",
            "x = sigma(x) -> x = w",
            "sigma(w) = w",
            "sigma(sigma(x)) = x",
            "i(x) = x",
            "sigma(x) = sigma(y) -> x = y",
            "P_1(w)",
            "P_1(x) & P_2(x) -> U(x)",
        ] {
            assert!(has_law(&p, law), "{law}");
        }
        assert!(!p.laws().iter().any(|q| q.to_string().contains("i(w)")));
    }

    #[test]
    fn combined_requires_flags() {
        let s = Semilattice::chain(3);
        let f = Operator::new(&s, vec![0, 0, 2]).unwrap();
        let m = OperatorMonoid::closure(&s, &[f], 10).unwrap();
        assert_eq!(present_combined(&s, &m).unwrap_err(), Error::MissingProperty("right_cancellative"));
        let g = Operator::new(&s, vec![0, 1, 1]).unwrap();
        let m = OperatorMonoid::closure(&s, &[g], 10).unwrap();
        assert!(present_combined(&s, &m).is_err());
    }

    #[test]
    fn covers_of_diamond_top() {
        let s = diamond();
        assert_eq!(irredundant_covers(&s, 3), vec![vec![1, 2]]);
        assert!(irredundant_covers(&s, 1).is_empty());
        let chain = Semilattice::chain(4);
        assert!(irredundant_covers(&chain, 3).is_empty());
    }

    #[test]
    fn near_leaf_schemata() {
        let p = present_dual_near_leaf(2);
        assert_eq!(power_schema_instances(&p), 4);
        assert!(has_law(&p, "D(x) -> C(x)"));
        assert!(has_law(&p, "A(x) & C(g(x)) -> B(x)"));
        assert!(has_law(&p, "x = f(f(x)) -> x = e"));
        assert!(p.notes.iter().any(|n| n.starts_with("truncated")));
        assert_eq!(power_schema_instances(&present_dual_near_leaf(DEFAULT_SCHEMA_BOUND)), 8);
    }

    #[test]
    fn render_parse_identity() {
        let s = diamond();
        for p in [
            present_first(&s),
            present_second(&s),
            present_combined(&s, &swap(&s)).unwrap(),
            present_dual_near_leaf(3),
        ] {
            let text = p.render();
            let again = Presentation::parse(&text).unwrap();
            assert_eq!(again, p);
        }
    }
}
