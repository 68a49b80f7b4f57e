//! Machine-readable check lines: `CHECK <name> PASS|FAIL [witness]`.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CHECK {} {}", self.name, if self.passed { "PASS" } else { "FAIL" })?;
        if let Some(w) = &self.witness {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    /// Records a check that fails iff `failure` carries a witness.
    pub fn check(&mut self, name: &str, failure: Option<String>) -> bool {
        let passed = failure.is_none();
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            witness: failure,
        });
        passed
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        self.checks.iter().map(|c| format!("{c}\n")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_lines() {
        let mut r = Report::new();
        r.check("a", None);
        r.check("b", Some("x=1".into()));
        assert_eq!(r.render(), "CHECK a PASS\nCHECK b FAIL x=1\n");
        assert!(!r.passed());
        assert!(r.get("a").unwrap().passed);
    }
}
