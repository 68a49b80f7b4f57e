//! Semilattice-with-operators input files.
//!
//! ```text
//! # 2x2 with the swap automorphism
//! semilattice 4
//! join 0 1 2 3 1 1 3 3 2 3 2 3 3 3 3 3
//! zero 0
//! op sigma 0 2 1 3
//! end
//! ```
//!
//! Operator lines give generators; the instance's monoid is their closure.

use crate::error::{Error, Result};
use crate::monoid::{Operator, OperatorMonoid, IDENTITY_NAME};
use crate::semilattice::Semilattice;

pub const INPUT_GRAMMAR: &str = "\
input format (one item per line, '#' starts a comment):
  semilattice <n>
  join <n*n space-separated indices, row-major>
  zero <i>
  op <name> <n images>      (repeatable; generators of the operator monoid)
  end";

const RESERVED: &[&str] = &[IDENTITY_NAME, "x", "y", "z", "w", "e"];

/// A semilattice together with its operator monoid.
#[derive(Debug, Clone)]
pub struct Instance {
    pub semilattice: Semilattice,
    pub monoid: OperatorMonoid,
    /// Generators as given, in canonical indices.
    pub generators: Vec<(String, Operator)>,
}

impl Instance {
    pub fn new(semilattice: Semilattice, generators: Vec<(String, Operator)>, bound: usize) -> Result<Self> {
        let monoid = OperatorMonoid::generate(&semilattice, &generators, bound)?;
        Ok(Instance {
            semilattice,
            monoid,
            generators,
        })
    }

    pub fn trivial(semilattice: Semilattice) -> Self {
        let monoid = OperatorMonoid::trivial(&semilattice);
        Instance {
            semilattice,
            monoid,
            generators: Vec::new(),
        }
    }

    pub fn parse(text: &str, bound: usize) -> Result<Self> {
        let mut size: Option<usize> = None;
        let mut join: Option<Vec<usize>> = None;
        let mut zero: Option<usize> = None;
        let mut ops: Vec<(String, Vec<usize>, usize)> = Vec::new();
        let mut ended = false;

        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut tokens = tokenize(content);
            let Some((col, keyword)) = tokens.next() else {
                continue;
            };
            if ended {
                return Err(parse_err(line_no, col, "content after 'end'"));
            }
            let rest: Vec<(usize, &str)> = tokens.collect();
            let numbers = |rest: &[(usize, &str)]| -> Result<Vec<usize>> {
                rest.iter()
                    .map(|&(c, t)| {
                        t.parse::<usize>()
                            .map_err(|_| parse_err(line_no, c, &format!("expected an index, found '{t}'")))
                    })
                    .collect()
            };
            match keyword {
                "semilattice" => {
                    let v = numbers(&rest)?;
                    if v.len() != 1 {
                        return Err(parse_err(line_no, col, "semilattice takes one size"));
                    }
                    size = Some(v[0]);
                }
                "join" => join = Some(numbers(&rest)?),
                "zero" => {
                    let v = numbers(&rest)?;
                    if v.len() != 1 {
                        return Err(parse_err(line_no, col, "zero takes one index"));
                    }
                    zero = Some(v[0]);
                }
                "op" => {
                    let Some(&(ncol, name)) = rest.first() else {
                        return Err(parse_err(line_no, col, "op needs a name"));
                    };
                    if !valid_op_name(name) {
                        return Err(parse_err(
                            line_no,
                            ncol,
                            &format!("invalid operator name '{name}' (letters and digits, not i/x/y/z/w/e)"),
                        ));
                    }
                    ops.push((name.to_string(), numbers(&rest[1..])?, line_no));
                }
                "end" => ended = true,
                other => {
                    return Err(parse_err(line_no, col, &format!("unknown keyword '{other}'")));
                }
            }
        }
        let n = size.ok_or_else(|| parse_err(1, 1, "missing 'semilattice <n>' line"))?;
        let join = join.ok_or_else(|| parse_err(1, 1, "missing 'join' line"))?;
        let zero = zero.ok_or_else(|| parse_err(1, 1, "missing 'zero' line"))?;
        if !ended {
            return Err(parse_err(text.lines().count().max(1), 1, "missing 'end'"));
        }
        let s = Semilattice::validate(n, &join, zero)?;

        let mut generators = Vec::new();
        for (name, images, _line) in ops {
            if generators.iter().any(|(g, _): &(String, Operator)| *g == name) {
                return Err(Error::NotAnOperator(format!("{name}: duplicate operator name")));
            }
            if images.len() != n || images.iter().any(|&v| v >= n) {
                return Err(Error::NotAnOperator(format!(
                    "{name}: expected {n} images in 0..{n}"
                )));
            }
            let mut canonical = vec![0; n];
            for (i, &v) in images.iter().enumerate() {
                canonical[s.from_input_index(i)] = s.from_input_index(v);
            }
            let op = Operator::new(&s, canonical).map_err(|e| match e {
                Error::NotAnOperator(m) => Error::NotAnOperator(format!("{name}: {m}")),
                other => other,
            })?;
            generators.push((name, op));
        }
        Instance::new(s, generators, bound)
    }

    /// Canonical text form (zero at index 0).
    pub fn render(&self) -> String {
        let s = &self.semilattice;
        let mut out = format!("semilattice {}\njoin", s.size());
        for v in s.join_table() {
            out.push_str(&format!(" {v}"));
        }
        out.push_str("\nzero 0\n");
        for (name, op) in &self.generators {
            out.push_str(&format!("op {name}"));
            for v in op.images() {
                out.push_str(&format!(" {v}"));
            }
            out.push('\n');
        }
        out.push_str("end\n");
        out
    }
}

fn valid_op_name(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric())
        && !RESERVED.contains(&name)
}

fn tokenize(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(st) = start.take() {
                out.push((st + 1, &line[st..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push((st + 1, &line[st..]));
    }
    out.into_iter()
}

fn parse_err(line: usize, column: usize, message: &str) -> Error {
    Error::Parse {
        line,
        column,
        message: message.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::DEFAULT_CLOSURE_BOUND;

    const S22_SWAP: &str = "\
# diamond with swap
semilattice 4
join 0 1 2 3 1 1 3 3 2 3 2 3 3 3 3 3
zero 0
op sigma 0 2 1 3
end
";

    #[test]
    fn parses_diamond_with_swap() {
        let inst = Instance::parse(S22_SWAP, DEFAULT_CLOSURE_BOUND).unwrap();
        assert_eq!(inst.semilattice.size(), 4);
        assert_eq!(inst.monoid.len(), 2);
        assert!(inst.monoid.flags().is_group);
    }

    #[test]
    fn render_round_trip() {
        let inst = Instance::parse(S22_SWAP, DEFAULT_CLOSURE_BOUND).unwrap();
        let text = inst.render();
        let again = Instance::parse(&text, DEFAULT_CLOSURE_BOUND).unwrap();
        assert_eq!(again.render(), text);
    }

    #[test]
    fn relabels_operators_with_zero() {
        // chain 2 < 1 < 0 with p: 2->2, 1->2, 0->1
        let text = "semilattice 3\njoin 0 0 0 0 1 1 0 1 2\nzero 2\nop p 1 2 2\nend\n";
        let inst = Instance::parse(text, 100).unwrap();
        let p = &inst.generators[0].1;
        // canonical: 0 <-> 2 swapped, so chain 0 < 1 < 2 and p = 0,0,1
        assert_eq!(p.images(), &[0, 0, 1]);
    }

    #[test]
    fn reports_bad_token_position() {
        let text = "semilattice 2\njoin 0 1 1 q\nzero 0\nend\n";
        let err = Instance::parse(text, 100).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                column: 12,
                message: "expected an index, found 'q'".into()
            }
        );
    }

    #[test]
    fn rejects_non_operator() {
        let text = "semilattice 3\njoin 0 1 2 1 1 2 2 2 2\nzero 0\nop f 0 2 1\nend\n";
        let err = Instance::parse(text, 100).unwrap_err();
        assert!(matches!(err, Error::NotAnOperator(m) if m.starts_with("f:")));
    }

    #[test]
    fn rejects_reserved_names() {
        let text = "semilattice 1\njoin 0\nzero 0\nop w 0\nend\n";
        assert!(matches!(Instance::parse(text, 100), Err(Error::Parse { line: 4, .. })));
    }
}
