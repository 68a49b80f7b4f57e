//! Finite structures over unary signatures, quasi-identity evaluation and
//! exhaustive model search.

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::presentation::{Atom, Presentation, QuasiIdentity, Term};
use crate::semilattice::{bit, has, members, Mask, MAX_CARRIER};

/// Predicate, function and constant symbols, each addressed by position.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    pub predicates: Vec<String>,
    pub functions: Vec<String>,
    pub constants: Vec<String>,
}

fn lookup(names: &[String], name: &str) -> Result<usize> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| Error::Uninterpreted(name.to_string()))
}

impl Signature {
    pub fn of(p: &Presentation) -> Signature {
        Signature {
            predicates: p.predicates.clone(),
            functions: p.functions.clone(),
            constants: p.constants.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteStructure {
    pub signature: Signature,
    pub labels: Vec<String>,
    /// `funcs[f][x]` is the value of symbol `f` at `x`.
    pub funcs: Vec<Vec<usize>>,
    pub consts: Vec<usize>,
    pub preds: Vec<Mask>,
}

impl FiniteStructure {
    pub fn new(
        signature: Signature,
        labels: Vec<String>,
        funcs: Vec<Vec<usize>>,
        consts: Vec<usize>,
        preds: Vec<Mask>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 || n > MAX_CARRIER {
            return Err(Error::CarrierTooLarge {
                size: n,
                bound: MAX_CARRIER,
            });
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let ok = funcs.len() == signature.functions.len()
            && funcs.iter().all(|t| t.len() == n && t.iter().all(|&v| v < n))
            && consts.len() == signature.constants.len()
            && consts.iter().all(|&c| c < n)
            && preds.len() == signature.predicates.len()
            && preds.iter().all(|&m| m & !full == 0);
        if !ok {
            return Err(Error::Parse {
                line: 0,
                column: 0,
                message: "structure tables do not match the signature".into(),
            });
        }
        Ok(FiniteStructure {
            signature,
            labels,
            funcs,
            consts,
            preds,
        })
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn holds(&self, p: usize, x: usize) -> bool {
        has(self.preds[p], x)
    }

    /// Whether `theta0` is compatible with every operation.
    pub fn is_compatible(&self, theta0: &Partition) -> bool {
        (0..self.size()).all(|x| {
            let r = theta0.rep(x);
            self.funcs.iter().all(|t| theta0.related(t[x], t[r]))
        })
    }

    /// Quotient by a compatible `theta0` with predicates `theta1`, which must
    /// be unions of blocks. Blocks are numbered by least member.
    pub fn quotient(&self, theta0: &Partition, theta1: &[Mask]) -> FiniteStructure {
        let block = theta0.block_index();
        let blocks = theta0.blocks();
        let labels = blocks
            .iter()
            .map(|b| b.iter().map(|&x| self.labels[x].as_str()).collect::<Vec<_>>().join("~"))
            .collect();
        let funcs = self
            .funcs
            .iter()
            .map(|t| blocks.iter().map(|b| block[t[b[0]]]).collect())
            .collect();
        let consts = self.consts.iter().map(|&c| block[c]).collect();
        let preds = theta1
            .iter()
            .map(|&m| members(m).fold(0, |acc, x| acc | bit(block[x])))
            .collect();
        FiniteStructure {
            signature: self.signature.clone(),
            labels,
            funcs,
            consts,
            preds,
        }
    }

    /// Whether `map` preserves operations, constants and predicates.
    pub fn is_endomorphism(&self, map: &[usize]) -> bool {
        let n = self.size();
        map.len() == n
            && self.consts.iter().all(|&c| map[c] == c)
            && self.funcs.iter().all(|t| (0..n).all(|x| map[t[x]] == t[map[x]]))
            && self.preds.iter().all(|&m| members(m).all(|x| has(m, map[x])))
    }

    pub fn render(&self) -> String {
        let mut out = format!("carrier {}\n", self.labels.join(" "));
        for (name, c) in self.signature.constants.iter().zip(&self.consts) {
            out.push_str(&format!("const {name} = {}\n", self.labels[*c]));
        }
        for (name, t) in self.signature.functions.iter().zip(&self.funcs) {
            let images: Vec<&str> = t.iter().map(|&v| self.labels[v].as_str()).collect();
            out.push_str(&format!("fun {name} {}\n", images.join(" ")));
        }
        for (name, &m) in self.signature.predicates.iter().zip(&self.preds) {
            let ext: Vec<&str> = members(m).map(|x| self.labels[x].as_str()).collect();
            out.push_str(&format!("pred {name} {{{}}}\n", ext.join(",")));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Base {
    Var(usize),
    Const(usize),
}

/// A term as a base followed by symbols applied innermost first.
#[derive(Debug, Clone, PartialEq, Eq)]
struct CTerm {
    base: Base,
    funcs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum CAtom {
    Pred(usize, CTerm),
    Eq(CTerm, CTerm),
}

/// A quasi-identity resolved against a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledLaw {
    pub source: QuasiIdentity,
    premises: Vec<CAtom>,
    conclusion: CAtom,
    vars: usize,
}

fn compile_term(t: &Term, sig: &Signature, vars: &[String]) -> Result<CTerm> {
    match t {
        Term::Var(v) => Ok(CTerm {
            base: Base::Var(vars.iter().position(|u| u == v).expect("variable collected")),
            funcs: Vec::new(),
        }),
        Term::Const(c) => Ok(CTerm {
            base: Base::Const(lookup(&sig.constants, c)?),
            funcs: Vec::new(),
        }),
        Term::App(f, inner) => {
            let mut ct = compile_term(inner, sig, vars)?;
            ct.funcs.push(lookup(&sig.functions, f)?);
            Ok(ct)
        }
    }
}

fn compile_atom(a: &Atom, sig: &Signature, vars: &[String]) -> Result<CAtom> {
    Ok(match a {
        Atom::Pred(p, t) => CAtom::Pred(lookup(&sig.predicates, p)?, compile_term(t, sig, vars)?),
        Atom::Eq(l, r) => CAtom::Eq(compile_term(l, sig, vars)?, compile_term(r, sig, vars)?),
    })
}

pub fn compile(q: &QuasiIdentity, sig: &Signature) -> Result<CompiledLaw> {
    let vars = q.variables();
    Ok(CompiledLaw {
        source: q.clone(),
        premises: q
            .premises()
            .iter()
            .map(|a| compile_atom(a, sig, &vars))
            .collect::<Result<_>>()?,
        conclusion: compile_atom(q.conclusion(), sig, &vars)?,
        vars: vars.len(),
    })
}

pub fn compile_all(laws: &[QuasiIdentity], sig: &Signature) -> Result<Vec<CompiledLaw>> {
    laws.iter().map(|q| compile(q, sig)).collect()
}

/// Possibly partial interpretation; `None` marks an unassigned cell.
trait Interp {
    fn size(&self) -> usize;
    fn func(&self, f: usize, x: usize) -> Option<usize>;
    fn constant(&self, c: usize) -> usize;
    fn pred(&self, p: usize, x: usize) -> Option<bool>;
}

impl Interp for FiniteStructure {
    fn size(&self) -> usize {
        self.labels.len()
    }
    fn func(&self, f: usize, x: usize) -> Option<usize> {
        Some(self.funcs[f][x])
    }
    fn constant(&self, c: usize) -> usize {
        self.consts[c]
    }
    fn pred(&self, p: usize, x: usize) -> Option<bool> {
        Some(has(self.preds[p], x))
    }
}

fn eval_term<I: Interp>(i: &I, t: &CTerm, env: &[usize]) -> Option<usize> {
    let mut v = match t.base {
        Base::Var(k) => env[k],
        Base::Const(c) => i.constant(c),
    };
    for &f in &t.funcs {
        v = i.func(f, v)?;
    }
    Some(v)
}

fn eval_atom<I: Interp>(i: &I, a: &CAtom, env: &[usize]) -> Option<bool> {
    match a {
        CAtom::Pred(p, t) => i.pred(*p, eval_term(i, t, env)?),
        CAtom::Eq(l, r) => Some(eval_term(i, l, env)? == eval_term(i, r, env)?),
    }
}

/// First assignment under which every premise is definitely true and the
/// conclusion definitely false.
fn violation<I: Interp>(i: &I, law: &CompiledLaw) -> Option<Vec<usize>> {
    let n = i.size();
    let mut env = vec![0; law.vars];
    loop {
        if eval_atom(i, &law.conclusion, &env) == Some(false)
            && law.premises.iter().all(|a| eval_atom(i, a, &env) == Some(true))
        {
            return Some(env);
        }
        // odometer
        let mut k = 0;
        loop {
            if k == env.len() {
                return None;
            }
            env[k] += 1;
            if env[k] < n {
                break;
            }
            env[k] = 0;
            k += 1;
        }
    }
}

impl CompiledLaw {
    pub fn holds_in(&self, a: &FiniteStructure) -> bool {
        violation(a, self).is_none()
    }

    /// A falsifying assignment, as carrier labels in variable order.
    pub fn counterexample(&self, a: &FiniteStructure) -> Option<Vec<String>> {
        violation(a, self).map(|env| env.into_iter().map(|x| a.labels[x].clone()).collect())
    }
}

pub fn satisfies(a: &FiniteStructure, q: &QuasiIdentity) -> Result<bool> {
    Ok(compile(q, &a.signature)?.holds_in(a))
}

/// First law of `laws` failing in `a`.
pub fn first_failure<'a>(a: &FiniteStructure, laws: &'a [CompiledLaw]) -> Option<&'a CompiledLaw> {
    laws.iter().find(|l| !l.holds_in(a))
}

#[derive(Debug, Clone)]
struct Partial {
    size: usize,
    funcs: Vec<Vec<Option<usize>>>,
    consts: Vec<usize>,
    known: Vec<Mask>,
    value: Vec<Mask>,
}

impl Interp for Partial {
    fn size(&self) -> usize {
        self.size
    }
    fn func(&self, f: usize, x: usize) -> Option<usize> {
        self.funcs[f][x]
    }
    fn constant(&self, c: usize) -> usize {
        self.consts[c]
    }
    fn pred(&self, p: usize, x: usize) -> Option<bool> {
        has(self.known[p], x).then(|| has(self.value[p], x))
    }
}

#[derive(Debug, Clone, Copy)]
enum Cell {
    Func(usize, usize),
    Pred(usize, usize),
}

/// Depth-first enumeration of all structures on a fixed carrier that
/// satisfy a law set, with some cells fixed in advance.
#[derive(Debug, Clone)]
pub struct ModelSearch<'a> {
    signature: &'a Signature,
    laws: &'a [CompiledLaw],
    labels: Vec<String>,
    partial: Partial,
}

impl<'a> ModelSearch<'a> {
    pub fn new(signature: &'a Signature, laws: &'a [CompiledLaw], size: usize, consts: Vec<usize>) -> Self {
        assert!(size > 0 && size <= MAX_CARRIER);
        assert_eq!(consts.len(), signature.constants.len());
        ModelSearch {
            signature,
            laws,
            labels: (0..size).map(|x| x.to_string()).collect(),
            partial: Partial {
                size,
                funcs: vec![vec![None; size]; signature.functions.len()],
                consts,
                known: vec![0; signature.predicates.len()],
                value: vec![0; signature.predicates.len()],
            },
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.partial.size);
        self.labels = labels;
        self
    }

    pub fn fix_function(&mut self, f: usize, table: &[usize]) {
        self.partial.funcs[f] = table.iter().map(|&v| Some(v)).collect();
    }

    pub fn fix_predicate(&mut self, p: usize, x: usize, value: bool) {
        self.partial.known[p] |= bit(x);
        if value {
            self.partial.value[p] |= bit(x);
        } else {
            self.partial.value[p] &= !bit(x);
        }
    }

    fn consistent(&self, p: &Partial) -> bool {
        self.laws.iter().all(|l| violation(p, l).is_none())
    }

    /// Calls `visit` on every model; stops early when it returns `false`.
    pub fn run(&self, mut visit: impl FnMut(&FiniteStructure) -> bool) {
        let mut cells = Vec::new();
        for (f, t) in self.partial.funcs.iter().enumerate() {
            cells.extend((0..self.partial.size).filter(|&x| t[x].is_none()).map(|x| Cell::Func(f, x)));
        }
        for (p, &k) in self.partial.known.iter().enumerate() {
            cells.extend((0..self.partial.size).filter(|&x| !has(k, x)).map(|x| Cell::Pred(p, x)));
        }
        let mut partial = self.partial.clone();
        if self.consistent(&partial) {
            self.dfs(&cells, 0, &mut partial, &mut visit);
        }
    }

    fn dfs(
        &self,
        cells: &[Cell],
        k: usize,
        p: &mut Partial,
        visit: &mut impl FnMut(&FiniteStructure) -> bool,
    ) -> bool {
        let Some(&cell) = cells.get(k) else {
            let s = FiniteStructure {
                signature: self.signature.clone(),
                labels: self.labels.clone(),
                funcs: p
                    .funcs
                    .iter()
                    .map(|t| t.iter().map(|v| v.expect("complete")).collect())
                    .collect(),
                consts: p.consts.clone(),
                preds: p.value.clone(),
            };
            return visit(&s);
        };
        match cell {
            Cell::Func(f, x) => {
                for v in 0..p.size {
                    p.funcs[f][x] = Some(v);
                    if self.consistent(p) && !self.dfs(cells, k + 1, p, visit) {
                        return false;
                    }
                }
                p.funcs[f][x] = None;
            }
            Cell::Pred(q, x) => {
                p.known[q] |= bit(x);
                for value in [false, true] {
                    if value {
                        p.value[q] |= bit(x);
                    }
                    if self.consistent(p) && !self.dfs(cells, k + 1, p, visit) {
                        return false;
                    }
                }
                p.known[q] &= !bit(x);
                p.value[q] &= !bit(x);
            }
        }
        true
    }
}

/// All models of `laws` with carrier `0..n` for `1 <= n <= max_size`. The
/// first constant is pinned to element 0; every structure is isomorphic to
/// one of this form.
pub fn enumerate_models(sig: &Signature, laws: &[CompiledLaw], max_size: usize) -> Vec<FiniteStructure> {
    let mut out = Vec::new();
    for n in 1..=max_size {
        let others = sig.constants.len().saturating_sub(1);
        let combos = n.pow(others as u32);
        for code in 0..combos {
            let mut consts = Vec::with_capacity(sig.constants.len());
            if !sig.constants.is_empty() {
                consts.push(0);
            }
            let mut c = code;
            for _ in 0..others {
                consts.push(c % n);
                c /= n;
            }
            ModelSearch::new(sig, laws, n, consts).run(|s| {
                out.push(s.clone());
                true
            });
        }
    }
    out
}
