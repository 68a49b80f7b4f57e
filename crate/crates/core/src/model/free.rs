//! One-generator free structures of the second and combined presentations
//! and the end-to-end checks built on them.

use crate::congruence::{congruence_lattice, CongruenceLattice};
use crate::eon::{eon_lattice, EonMode, DEFAULT_EXHAUSTIVE_BOUND};
use crate::error::{Error, Result};
use crate::monoid::{Operator, OperatorMonoid, DEFAULT_CLOSURE_BOUND};
use crate::presentation::emit::apply_name;
use crate::presentation::{present_combined, present_second, reduce_to_one_variable, Presentation, QuasiIdentity, Term};
use crate::report::Report;
use crate::partition::Partition;
use crate::semilattice::{bit, has, Mask, Semilattice};

use super::kcon::{endomorphisms, k_congruences, pseudo_lemma_failure, CompactConSemilattice, Generator, StructureCongruence};
use super::structure::{compile_all, enumerate_models, CompiledLaw, FiniteStructure, Signature};

/// Free structure on `x` together with its laws and the endomorphisms the
/// construction predicts.
#[derive(Debug, Clone)]
pub struct FreeStructure {
    pub structure: FiniteStructure,
    pub presentation: Presentation,
    pub laws: Vec<CompiledLaw>,
    pub generator: usize,
    pub constant: usize,
    /// Named maps, duplicates removed, in presentation order.
    pub expected: Vec<(String, Vec<usize>)>,
}

fn dedup_named(maps: Vec<(String, Vec<usize>)>) -> Vec<(String, Vec<usize>)> {
    let mut out: Vec<(String, Vec<usize>)> = Vec::new();
    for (name, map) in maps {
        if !out.iter().any(|(_, m)| *m == map) {
            out.push((name, map));
        }
    }
    out
}

/// Carrier `{f(x) : f ∈ M} ∪ {w}`: element `f` is `f(x)` and `|M|` is `w`.
/// Symbol `g` sends `f(x)` to `(f∘g)(x)`; `A` holds at `f(x)` iff
/// `f(a) = 0`, and everywhere at `w`. For one-element `S` the law `x = w`
/// collapses the carrier to `{w}`.
pub fn free_structure(s: &Semilattice, m: &OperatorMonoid) -> Result<FreeStructure> {
    let presentation = present_combined(s, m)?;
    let sig = Signature::of(&presentation);
    let laws = compile_all(presentation.laws(), &sig)?;
    let k = m.len();
    let (structure, generator, constant, expected) = if s.size() == 1 {
        let st = FiniteStructure::new(sig, vec!["w".into()], vec![vec![0]; k], vec![0], Vec::new())?;
        (st, 0, 0, vec![("eps_w".to_string(), vec![0])])
    } else {
        let w = k;
        let mut labels: Vec<String> = (0..k).map(|f| apply_name(m, f, Term::var("x")).to_string()).collect();
        labels.push("w".into());
        let funcs = (0..k)
            .map(|g| {
                let mut t: Vec<usize> = (0..k).map(|f| m.compose(f, g)).collect();
                t.push(w);
                t
            })
            .collect();
        let preds: Vec<Mask> = s
            .elements()
            .skip(1)
            .map(|a| {
                (0..k)
                    .filter(|&f| m.element(f).apply(a) == 0)
                    .fold(bit(w), |acc, f| acc | bit(f))
            })
            .collect();
        let st = FiniteStructure::new(sig, labels, funcs, vec![w], preds)?;
        let mut expected: Vec<(String, Vec<usize>)> = (0..k)
            .map(|h| {
                let mut map: Vec<usize> = (0..k).map(|f| m.compose(h, f)).collect();
                map.push(w);
                (format!("eps_{}", m.name(h)), map)
            })
            .collect();
        expected.push(("eps_w".into(), vec![w; k + 1]));
        (st, 0, w, expected)
    };
    Ok(FreeStructure {
        structure,
        presentation,
        laws,
        generator,
        constant,
        expected: dedup_named(expected),
    })
}

/// Carrier `{x, e}` with every predicate true at `e` only; `{e}` when `S`
/// is trivial.
pub fn free_structure_second(s: &Semilattice) -> Result<FreeStructure> {
    let presentation = present_second(s);
    let sig = Signature::of(&presentation);
    let laws = compile_all(presentation.laws(), &sig)?;
    let preds = s.size() - 1;
    let (structure, expected) = if s.size() == 1 {
        let st = FiniteStructure::new(sig, vec!["e".into()], Vec::new(), vec![0], Vec::new())?;
        (st, vec![("eps_x".to_string(), vec![0])])
    } else {
        let st = FiniteStructure::new(sig, vec!["x".into(), "e".into()], Vec::new(), vec![1], vec![0b10; preds])?;
        (st, vec![("eps_x".to_string(), vec![0, 1]), ("eps_e".to_string(), vec![1, 1])])
    };
    let e = structure.consts[0];
    Ok(FreeStructure {
        structure,
        presentation,
        laws,
        generator: 0,
        constant: e,
        expected,
    })
}

impl FreeStructure {
    /// All endomorphisms, named, after checking they are exactly the
    /// predicted ones.
    pub fn endomorphisms(&self) -> Result<Vec<(String, Vec<usize>)>> {
        let mut found = endomorphisms(&self.structure)?;
        let mut predicted: Vec<Vec<usize>> = self.expected.iter().map(|(_, m)| m.clone()).collect();
        found.sort();
        predicted.sort();
        if found != predicted {
            let extra: Vec<String> = found
                .iter()
                .filter(|m| !predicted.contains(m))
                .map(|m| format!("{m:?}"))
                .collect();
            let missing: Vec<String> = predicted
                .iter()
                .filter(|m| !found.contains(m))
                .map(|m| format!("{m:?}"))
                .collect();
            return Err(Error::UnexpectedEndomorphism(format!(
                "extra [{}] missing [{}]",
                extra.join(" "),
                missing.join(" ")
            )));
        }
        Ok(self.expected.clone())
    }

    pub fn k_congruences(&self) -> Result<CompactConSemilattice> {
        k_congruences(&self.structure, &self.laws)
    }
}

/// `θ^I`: Δ (∇ when `I = S`) with `A` holding at `f(x)` iff `f(a) ∈ I`
/// and always at `w`.
pub fn theta_ideal(s: &Semilattice, m: &OperatorMonoid, free: &FreeStructure, ideal: Mask) -> StructureCongruence {
    let n = free.structure.size();
    let theta0 = if ideal == s.full_mask() {
        Partition::full(n)
    } else {
        Partition::discrete(n)
    };
    let all: Mask = (0..n).fold(0, |acc, x| acc | bit(x));
    let theta1 = s
        .elements()
        .skip(1)
        .map(|a| {
            if theta0.is_full() {
                return all;
            }
            (0..m.len())
                .filter(|&f| has(ideal, m.element(f).apply(a)))
                .fold(bit(free.constant), |acc, f| acc | bit(f))
        })
        .collect();
    StructureCongruence { theta0, theta1 }
}

/// Induced operators of every endomorphism, checked join- and
/// zero-preserving.
pub fn induced_operators(t: &CompactConSemilattice, endos: &[(String, Vec<usize>)]) -> Result<Vec<(String, Operator)>> {
    endos
        .iter()
        .map(|(name, map)| Ok((name.clone(), t.induced_operator(map)?)))
        .collect()
}

/// `Con(T, ∨, 0, Ê)` where `Ê` is generated by the induced operators.
pub fn induced_congruences(
    t: &CompactConSemilattice,
    ops: &[(String, Operator)],
) -> Result<(OperatorMonoid, CongruenceLattice)> {
    let e = OperatorMonoid::generate(&t.semilattice, ops, DEFAULT_CLOSURE_BOUND)?;
    let con = congruence_lattice(&t.semilattice, &e);
    Ok((e, con))
}

fn mask_label(s: &Semilattice, mask: Mask) -> String {
    let xs: Vec<String> = s.elements().filter(|&x| has(mask, x)).map(|x| x.to_string()).collect();
    format!("{{{}}}", xs.join(","))
}

/// Checks the free structure of the combined presentation stage by stage,
/// ending with `Con(T, Ê) ≅ Con(S, M)`.
pub fn verify_combined(s: &Semilattice, m: &OperatorMonoid) -> Result<Report> {
    let free = free_structure(s, m)?;
    let t = free.k_congruences()?;
    let ideals: Vec<Mask> = s.ideals().iter().map(|i| i.members).collect();
    let thetas: Vec<StructureCongruence> = ideals.iter().map(|&i| theta_ideal(s, m, &free, i)).collect();
    let mut r = Report::new();

    let claim1 = ideals.iter().zip(&thetas).find_map(|(&i, th)| {
        let q = free.structure.quotient(&th.theta0, &th.theta1);
        free.laws
            .iter()
            .find(|l| !l.holds_in(&q))
            .map(|l| format!("I={} law={}", mask_label(s, i), l.source))
            .or_else(|| t.index_of(th).is_none().then(|| format!("I={} not enumerated", mask_label(s, i))))
    });
    r.check("ideal-models", claim1);

    let mut claim2 = None;
    'outer: for (a, &i) in ideals.iter().enumerate() {
        for (b, &j) in ideals.iter().enumerate() {
            let subset = i & !j == 0;
            if subset != thetas[a].leq(&thetas[b]) || (a != b && thetas[a] == thetas[b]) {
                claim2 = Some(format!("I={} J={}", mask_label(s, i), mask_label(s, j)));
                break 'outer;
            }
        }
    }
    r.check("ideal-order", claim2);

    let claim3 = t
        .elements
        .iter()
        .find(|e| !thetas.contains(e))
        .map(|e| format!("extra={}", e.label(&free.structure)))
        .or_else(|| (t.len() != ideals.len()).then(|| format!("k_congruences={} ideals={}", t.len(), ideals.len())));
    r.check("ideal-count", claim3);

    let endos = match free.endomorphisms() {
        Ok(e) => {
            r.check("endomorphisms", None);
            e
        }
        Err(err) => {
            r.check("endomorphisms", Some(err.to_string()));
            endomorphisms(&free.structure)?
                .into_iter()
                .enumerate()
                .map(|(k, map)| (format!("eps{k}"), map))
                .collect()
        }
    };
    let ops = induced_operators(&t, &endos)?;

    // s ↦ index of θ^{↓s}
    let theta_of = |x: usize| t.index_of(&theta_ideal(s, m, &free, s.down_set(x)));
    let w_map = vec![free.constant; free.structure.size()];
    let eps_w = t.induced_operator(&w_map)?;
    let claim4 = s.elements().find_map(|x| match theta_of(x) {
        Some(i) if eps_w.apply(i) == t.zero() => None,
        Some(i) => Some(format!("s={x} image={}", t.label(eps_w.apply(i)))),
        None => Some(format!("s={x} theta missing")),
    });
    r.check("eps-w-zero", claim4);

    let mut claim5 = None;
    if s.size() > 1 {
        'h: for h in 0..m.len() {
            let mut map: Vec<usize> = (0..m.len()).map(|f| m.compose(h, f)).collect();
            map.push(free.constant);
            let op = t.induced_operator(&map)?;
            for x in s.elements() {
                let hx = m.element(h).apply(x);
                if theta_of(x).map(|i| op.apply(i)) != theta_of(hx) {
                    claim5 = Some(format!("h={} s={x}", m.name(h)));
                    break 'h;
                }
            }
        }
    }
    r.check("eps-h-shift", claim5);

    let (_, con_t) = induced_congruences(&t, &ops)?;
    let con_s = congruence_lattice(s, m);
    let iso = (!con_t.lattice.is_isomorphic(&con_s.lattice))
        .then(|| format!("con_T={} con_S={}", con_t.len(), con_s.len()));
    r.check("final-iso", iso);
    Ok(r)
}

/// Pipeline for the second presentation: `Con(T, Ê) ≅ Eon(S)`.
pub fn verify_second(s: &Semilattice) -> Result<Report> {
    let free = free_structure_second(s)?;
    let t = free.k_congruences()?;
    let mut r = Report::new();
    let ideals = s.ideals().len();
    r.check(
        "k-count",
        (t.len() != ideals).then(|| format!("k_congruences={} ideals={ideals}", t.len())),
    );
    let endos = match free.endomorphisms() {
        Ok(e) => {
            r.check("endomorphisms", None);
            e
        }
        Err(err) => {
            r.check("endomorphisms", Some(err.to_string()));
            return Ok(r);
        }
    };
    let ops = induced_operators(&t, &endos)?;
    let (_, con_t) = induced_congruences(&t, &ops)?;
    let eon = eon_lattice(s, &OperatorMonoid::trivial(s), EonMode::Auto, DEFAULT_EXHAUSTIVE_BOUND)?;
    r.check(
        "final-iso",
        (!con_t.lattice.is_isomorphic(&eon.lattice)).then(|| format!("con_T={} eon_S={}", con_t.len(), eon.len())),
    );
    Ok(r)
}

/// Least K-congruence collapsing the carrier, checked against the join of
/// `ε̂(con(x, w))` over all endomorphisms, and the pseudo-one lemma.
pub fn verify_pseudo_lemma(s: &Semilattice, m: &OperatorMonoid) -> Result<Report> {
    let free = free_structure(s, m)?;
    let t = free.k_congruences()?;
    let endos = free.endomorphisms()?;
    let ops = induced_operators(&t, &endos)?;
    let mut r = Report::new();
    let upsilon = t.upsilon(&free.laws)?;
    r.check(
        "upsilon-top",
        (upsilon != t.semilattice.top()).then(|| format!("upsilon={}", t.label(upsilon))),
    );
    let kappa = t.generated(&[Generator::Pair(free.generator, free.constant)])?;
    let via_kappa = ops.iter().fold(t.zero(), |acc, (_, op)| t.join(acc, op.apply(kappa)));
    r.check(
        "upsilon-kappa",
        (via_kappa != upsilon).then(|| format!("join={} upsilon={}", t.label(via_kappa), t.label(upsilon))),
    );
    r.check("pseudo-lemma", pseudo_lemma_failure(&t, &ops, upsilon));
    Ok(r)
}

/// Result of comparing laws with their one-variable reductions over all
/// small models of a context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub models: usize,
    pub laws: usize,
    pub mismatches: Vec<String>,
}

impl ReductionReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks that each law and its reduction hold in exactly the same models of
/// `ctx` with at most `max_size` elements.
pub fn reduction_check(ctx: &Presentation, laws: &[QuasiIdentity], max_size: usize) -> Result<ReductionReport> {
    let sig = Signature::of(ctx);
    let context = compile_all(ctx.laws(), &sig)?;
    let models = enumerate_models(&sig, &context, max_size);
    let mut mismatches = Vec::new();
    for q in laws {
        let original = compile_all(std::slice::from_ref(q), &sig)?;
        let reduced_laws = reduce_to_one_variable(q, ctx)?;
        let reduced = compile_all(&reduced_laws, &sig)?;
        if let Some(model) = models
            .iter()
            .find(|a| original[0].holds_in(a) != reduced.iter().all(|l| l.holds_in(a)))
        {
            let shown: Vec<String> = reduced_laws.iter().map(|l| l.to_string()).collect();
            mismatches.push(format!(
                "law [{q}] reduced [{}] differ on model of size {}",
                shown.join("; "),
                model.size()
            ));
        }
    }
    Ok(ReductionReport {
        models: models.len(),
        laws: laws.len(),
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::structure::satisfies;
    use crate::monoid::DEFAULT_CLOSURE_BOUND;

    fn diamond() -> Semilattice {
        Semilattice::from_order(4, |x, y| x == y || x == 0 || y == 3).unwrap()
    }

    fn swap(s: &Semilattice) -> OperatorMonoid {
        let sigma = Operator::new(s, vec![0, 2, 1, 3]).unwrap();
        OperatorMonoid::generate(s, &[("sigma".into(), sigma)], DEFAULT_CLOSURE_BOUND).unwrap()
    }

    #[test]
    fn free_structure_sizes() {
        let s = diamond();
        assert_eq!(free_structure(&s, &OperatorMonoid::trivial(&s)).unwrap().structure.size(), 2);
        let f = free_structure(&s, &swap(&s)).unwrap();
        assert_eq!(f.structure.labels, ["x", "sigma(x)", "w"]);
    }

    #[test]
    fn free_structure_satisfies_its_laws() {
        let s = diamond();
        let f = free_structure(&s, &swap(&s)).unwrap();
        for q in f.presentation.laws() {
            assert!(satisfies(&f.structure, q).unwrap(), "{q}");
        }
        let q = f.presentation.parse_law("sigma(x) = sigma(y) -> x = y").unwrap();
        assert!(satisfies(&f.structure, &q).unwrap());
    }

    #[test]
    fn retraction_is_refused() {
        let s = Semilattice::chain(3);
        let r = Operator::new(&s, vec![0, 0, 2]).unwrap();
        let m = OperatorMonoid::generate(&s, &[("r".into(), r)], DEFAULT_CLOSURE_BOUND).unwrap();
        assert_eq!(free_structure(&s, &m).unwrap_err(), Error::MissingProperty("right_cancellative"));
    }

    #[test]
    fn endomorphism_counts() {
        let s = diamond();
        let trivial = free_structure(&s, &OperatorMonoid::trivial(&s)).unwrap();
        assert_eq!(trivial.endomorphisms().unwrap().len(), 2);
        let f = free_structure(&s, &swap(&s)).unwrap();
        let endos = f.endomorphisms().unwrap();
        assert_eq!(endos.len(), 3);
        let sigma = &endos.iter().find(|(n, _)| n == "eps_sigma").unwrap().1;
        let twice: Vec<usize> = (0..3).map(|x| sigma[sigma[x]]).collect();
        assert_eq!(twice, [0, 1, 2]);
    }

    #[test]
    fn swap_pipeline() {
        let s = diamond();
        let m = swap(&s);
        let r = verify_combined(&s, &m).unwrap();
        assert!(r.passed(), "{}", r.render());
        let f = free_structure(&s, &m).unwrap();
        let t = f.k_congruences().unwrap();
        assert_eq!(t.len(), 4);
        let (_, con) = induced_congruences(&t, &induced_operators(&t, &f.endomorphisms().unwrap()).unwrap()).unwrap();
        assert_eq!(con.len(), 3);
    }

    #[test]
    fn swap_exchanges_atoms() {
        let s = diamond();
        let m = swap(&s);
        let f = free_structure(&s, &m).unwrap();
        let t = f.k_congruences().unwrap();
        let a = t.index_of(&theta_ideal(&s, &m, &f, s.down_set(1))).unwrap();
        let b = t.index_of(&theta_ideal(&s, &m, &f, s.down_set(2))).unwrap();
        let op = t.induced_operator(&[1, 0, 2]).unwrap();
        assert_eq!(op.apply(a), b);
        assert_eq!(op.apply(b), a);
    }

    #[test]
    fn small_pipelines() {
        let c3 = Semilattice::chain(3);
        assert!(verify_combined(&c3, &OperatorMonoid::trivial(&c3)).unwrap().passed());
        let one = Semilattice::chain(1);
        let r = verify_combined(&one, &OperatorMonoid::trivial(&one)).unwrap();
        assert!(r.passed(), "{}", r.render());
        let d = diamond();
        assert!(verify_combined(&d, &OperatorMonoid::trivial(&d)).unwrap().passed());
    }

    #[test]
    fn second_pipeline() {
        for s in [Semilattice::chain(1), Semilattice::chain(3), diamond()] {
            let r = verify_second(&s).unwrap();
            assert!(r.passed(), "{}", r.render());
        }
    }

    #[test]
    fn pseudo_lemma_on_swap() {
        let s = diamond();
        let r = verify_pseudo_lemma(&s, &swap(&s)).unwrap();
        assert!(r.passed(), "{}", r.render());
    }

    #[test]
    fn reduction_agrees_on_small_models() {
        let s = diamond();
        let ctx = present_combined(&s, &swap(&s)).unwrap();
        let laws = ctx
            .parse_laws("P_1(x) & P_2(y) -> U(x)\nsigma(x) = y & P_1(y) -> P_2(x)\nP_1(x) & P_2(y) -> sigma(x) = y")
            .unwrap();
        let r = reduction_check(&ctx, &laws, 3).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches);
        assert!(r.models > 0);
    }
}
