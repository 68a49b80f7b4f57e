//! Small semilattices up to isomorphism, their operators, and seeded random
//! instances and laws for sweeps.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::Instance;
use crate::monoid::{Operator, DEFAULT_CLOSURE_BOUND};
use crate::presentation::{Atom, Presentation, QuasiIdentity, Term, VARIABLES};
use crate::semilattice::Semilattice;

/// Largest carrier [`semilattices`] enumerates.
pub const CATALOG_BOUND: usize = 7;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// Order matrix as a bit code under a relabelling of the inner elements.
fn order_code(n: usize, leq: &[Vec<bool>], perm: &[usize]) -> u64 {
    let relabel = |x: usize| if x == 0 || x == n - 1 { x } else { perm[x - 1] + 1 };
    let mut code = 0u64;
    for x in 0..n {
        for y in 0..n {
            if leq[x][y] {
                code |= 1 << (relabel(x) * n + relabel(y));
            }
        }
    }
    code
}

fn is_lattice(n: usize, leq: &[Vec<bool>]) -> bool {
    (0..n).all(|a| {
        (0..n).all(|b| {
            let ubs: Vec<usize> = (0..n).filter(|&u| leq[a][u] && leq[b][u]).collect();
            ubs.iter().any(|&u| ubs.iter().all(|&v| leq[u][v]))
        })
    })
}

/// Join-semilattices with 0 on `n` elements, one per isomorphism class.
/// Orders are enumerated with `0` least, `n-1` greatest and every strict
/// relation increasing in index, then deduplicated by a canonical code.
pub fn semilattices(n: usize) -> Vec<Semilattice> {
    assert!((1..=CATALOG_BOUND).contains(&n), "catalog covers 1..={CATALOG_BOUND} elements");
    if n <= 2 {
        return vec![Semilattice::chain(n)];
    }
    let inner: Vec<(usize, usize)> = (1..n - 1).flat_map(|i| (i + 1..n - 1).map(move |j| (i, j))).collect();
    let perms = permutations(n - 2);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for bits in 0u64..1 << inner.len() {
        let mut leq = vec![vec![false; n]; n];
        for x in 0..n {
            leq[x][x] = true;
            leq[0][x] = true;
            leq[x][n - 1] = true;
        }
        for (k, &(i, j)) in inner.iter().enumerate() {
            if bits >> k & 1 == 1 {
                leq[i][j] = true;
            }
        }
        let transitive = (0..n).all(|a| (0..n).all(|b| !leq[a][b] || (0..n).all(|c| !leq[b][c] || leq[a][c])));
        if !transitive || !is_lattice(n, &leq) {
            continue;
        }
        let canonical = perms.iter().map(|p| order_code(n, &leq, p)).min().expect("nonempty");
        if seen.insert(canonical) {
            out.push(Semilattice::from_order(n, |a, b| leq[a][b]).expect("lattice order"));
        }
    }
    out
}

/// Every semilattice on at most `max` elements, by size.
pub fn semilattices_up_to(max: usize) -> Vec<Semilattice> {
    (1..=max).flat_map(semilattices).collect()
}

/// All operators, in lexicographic order of image tables.
pub fn all_operators(s: &Semilattice) -> Vec<Operator> {
    let n = s.size();
    let mut images = vec![0; n];
    let mut out = Vec::new();
    loop {
        if let Ok(op) = Operator::new(s, images.clone()) {
            out.push(op);
        }
        let mut k = n;
        loop {
            if k == 1 {
                return out;
            }
            k -= 1;
            images[k] += 1;
            if images[k] < n {
                break;
            }
            images[k] = 0;
        }
    }
}

/// Bijective operators, i.e. order automorphisms.
pub fn automorphisms(s: &Semilattice) -> Vec<Operator> {
    all_operators(s)
        .into_iter()
        .filter(|op| {
            let mut seen = op.images().to_vec();
            seen.sort_unstable();
            seen.dedup();
            seen.len() == s.size()
        })
        .collect()
}

fn order(op: &Operator) -> usize {
    let mut p = op.clone();
    let mut k = 1;
    while !p.is_identity() {
        p = p.after(op);
        k += 1;
    }
    k
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random semilattice on at most `max` elements with the monoid generated
/// by one random operator.
pub fn random_single_generator(rng: &mut impl Rng, max: usize) -> Instance {
    let n = rng.gen_range(1..=max);
    let s = semilattices(n).choose(rng).expect("nonempty").clone();
    let f = all_operators(&s).choose(rng).expect("identity exists").clone();
    Instance::new(s, vec![("f".into(), f)], DEFAULT_CLOSURE_BOUND).expect("closure of one operator is small")
}

/// A random semilattice on at most `max` elements with the cyclic group of
/// a random automorphism of order at most `max_order`.
pub fn random_automorphism_group(rng: &mut impl Rng, max: usize, max_order: usize) -> Instance {
    let n = rng.gen_range(1..=max);
    let s = semilattices(n).choose(rng).expect("nonempty").clone();
    let autos: Vec<Operator> = automorphisms(&s).into_iter().filter(|g| order(g) <= max_order).collect();
    let g = autos.choose(rng).expect("identity is an automorphism").clone();
    Instance::new(s, vec![("g".into(), g)], DEFAULT_CLOSURE_BOUND).expect("cyclic group closes")
}

fn random_term(rng: &mut impl Rng, ctx: &Presentation, vars: &[&str], depth: usize) -> Term {
    if depth > 0 && !ctx.functions.is_empty() && rng.gen_bool(0.5) {
        let f = ctx.functions.choose(rng).expect("nonempty");
        return Term::app(f, random_term(rng, ctx, vars, depth - 1));
    }
    match ctx.constants.first() {
        Some(c) if rng.gen_ratio(1, 6) => Term::constant(c),
        _ => Term::var(vars.choose(rng).expect("nonempty")),
    }
}

fn random_atom(rng: &mut impl Rng, ctx: &Presentation, vars: &[&str]) -> Atom {
    if !ctx.predicates.is_empty() && rng.gen_bool(0.6) {
        let p = ctx.predicates.choose(rng).expect("nonempty");
        Atom::pred(p, random_term(rng, ctx, vars, 2))
    } else {
        Atom::eq(random_term(rng, ctx, vars, 2), random_term(rng, ctx, vars, 2))
    }
}

/// A random quasi-identity over the symbols of `ctx` using at most
/// `max_vars` of `x, y, z` and at most three premises.
pub fn random_quasi_identity(rng: &mut impl Rng, ctx: &Presentation, max_vars: usize) -> QuasiIdentity {
    let k = rng.gen_range(1..=max_vars.clamp(1, VARIABLES.len()));
    let vars = &VARIABLES[..k];
    let premises = (0..rng.gen_range(0..=3)).map(|_| random_atom(rng, ctx, vars)).collect();
    QuasiIdentity::new(premises, random_atom(rng, ctx, vars))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::FiniteLattice;

    #[test]
    fn lattice_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| semilattices(n).len()).collect();
        assert_eq!(counts, [1, 1, 1, 2, 5, 15, 53]);
    }

    #[test]
    fn catalog_is_iso_free() {
        let all = semilattices(5);
        let lattices: Vec<FiniteLattice> = all
            .iter()
            .map(|s| FiniteLattice::from_order((0..5).map(|x| x.to_string()).collect(), |a, b| s.leq(a, b)).unwrap())
            .collect();
        for i in 0..lattices.len() {
            for j in i + 1..lattices.len() {
                assert!(!lattices[i].is_isomorphic(&lattices[j]));
            }
        }
    }

    #[test]
    fn chain_operators() {
        // monotone maps on {0<1<2} fixing 0
        assert_eq!(all_operators(&Semilattice::chain(3)).len(), 6);
        assert_eq!(automorphisms(&Semilattice::chain(3)).len(), 1);
    }

    #[test]
    fn diamond_has_swap() {
        let d = Semilattice::from_order(4, |x, y| x == y || x == 0 || y == 3).unwrap();
        let autos = automorphisms(&d);
        assert_eq!(autos.len(), 2);
        assert!(autos.iter().all(|g| order(g) <= 2));
    }

    #[test]
    fn random_instances_are_seeded() {
        let a = random_automorphism_group(&mut rng(7), 5, 3);
        let b = random_automorphism_group(&mut rng(7), 5, 3);
        assert_eq!(a.render(), b.render());
        assert!(a.monoid.len() <= 3 && a.monoid.flags().is_group);
        let c = random_single_generator(&mut rng(3), 5);
        assert!(c.semilattice.size() <= 5);
    }

    #[test]
    fn random_laws_use_few_variables() {
        let ctx = Presentation::new(
            crate::presentation::Style::Fixture,
            vec!["A".into()],
            vec!["f".into()],
            vec!["w".into()],
        );
        let mut r = rng(1);
        for _ in 0..50 {
            let q = random_quasi_identity(&mut r, &ctx, 3);
            assert!(q.variables().len() <= 3);
            assert!(q.premises().len() <= 3);
        }
    }
}
