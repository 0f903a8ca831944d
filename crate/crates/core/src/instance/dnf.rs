use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    /// 0-indexed variable.
    pub var: usize,
    /// `false` for a negated literal.
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Self { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Self { var, positive: false }
    }

    pub fn holds(&self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }

    /// Signed 1-indexed form used in files.
    pub fn to_signed(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }
}

/// Conjunction of three literals over distinct variables.
pub type Clause = [Literal; 3];

/// A Max-3-DNF instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dnf3Formula {
    n: usize,
    clauses: Vec<Clause>,
}

impl Dnf3Formula {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self> {
        for (j, c) in clauses.iter().enumerate() {
            check_clause(n, c).map_err(|m| Error::InvalidParameter(format!("clause {}: {m}", j + 1)))?;
        }
        Ok(Self { n, clauses })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause_satisfied(clause: &Clause, assignment: &[bool]) -> bool {
        clause.iter().all(|l| l.holds(assignment))
    }

    /// Number of clauses satisfied by `assignment`.
    pub fn satisfied(&self, assignment: &[bool]) -> usize {
        self.clauses.iter().filter(|c| Self::clause_satisfied(c, assignment)).count()
    }

    /// Reads one clause per line as signed 1-indexed literals (`1 -2 3`).
    ///
    /// An optional first line `p dnf <n> <m>` declares the variable count;
    /// without it `n` is the largest variable index that appears. Lines
    /// starting with `c` are comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut declared: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut max_var = 0usize;
        for (i, line) in text.lines().enumerate() {
            let lno = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                if declared.is_some() || !clauses.is_empty() {
                    return Err(Error::parse(lno, "header must come before clauses"));
                }
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let ["dnf", n, m] = parts.as_slice() else {
                    return Err(Error::parse(lno, "header must be `p dnf <n> <m>`"));
                };
                let n = n.parse().map_err(|_| Error::parse(lno, "bad variable count"))?;
                let m = m.parse().map_err(|_| Error::parse(lno, "bad clause count"))?;
                declared = Some((n, m));
                continue;
            }
            let lits = line
                .split_whitespace()
                .map(|tok| match tok.parse::<i64>() {
                    Ok(0) | Err(_) => Err(Error::parse(lno, format!("bad literal `{tok}`"))),
                    Ok(v) => Ok(Literal { var: (v.unsigned_abs() - 1) as usize, positive: v > 0 }),
                })
                .collect::<Result<Vec<_>>>()?;
            let clause: Clause = lits
                .try_into()
                .map_err(|_| Error::parse(lno, "a clause needs exactly three literals"))?;
            let n_bound = declared.map_or(usize::MAX, |(n, _)| n);
            check_clause(n_bound, &clause).map_err(|m| Error::parse(lno, m))?;
            max_var = clause.iter().fold(max_var, |acc, l| acc.max(l.var + 1));
            clauses.push(clause);
        }
        let n = match declared {
            Some((n, m)) => {
                if m != clauses.len() {
                    return Err(Error::parse(1, format!("declared {m} clauses, found {}", clauses.len())));
                }
                n
            }
            None => max_var,
        };
        Ok(Self { n, clauses })
    }

    /// Writes the `p dnf` header followed by one clause per line.
    pub fn serialize(&self) -> String {
        let mut out = format!("p dnf {} {}", self.n, self.clauses.len());
        for c in &self.clauses {
            let lits: Vec<String> = c.iter().map(|l| l.to_signed().to_string()).collect();
            out.push('\n');
            out.push_str(&lits.join(" "));
        }
        out
    }
}

fn check_clause(n: usize, c: &Clause) -> std::result::Result<(), String> {
    if let Some(l) = c.iter().find(|l| l.var >= n) {
        return Err(format!("variable {} out of range", l.var + 1));
    }
    if c[0].var == c[1].var || c[0].var == c[2].var || c[1].var == c[2].var {
        return Err("literals must use distinct variables".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_without_header() {
        let f = Dnf3Formula::parse("1 -2 3\n-1 2 4\n").unwrap();
        assert_eq!(f.n(), 4);
        assert_eq!(f.m(), 2);
        assert_eq!(f.clauses()[0], [Literal::pos(0), Literal::neg(1), Literal::pos(2)]);
    }

    #[test]
    fn header_keeps_unused_variables() {
        let f = Dnf3Formula::parse("p dnf 6 1\n1 -2 3").unwrap();
        assert_eq!(f.n(), 6);
        assert_eq!(Dnf3Formula::parse(&f.serialize()).unwrap(), f);
        let empty = Dnf3Formula::new(3, vec![]).unwrap();
        assert_eq!(empty.serialize(), "p dnf 3 0");
        assert_eq!(Dnf3Formula::parse("p dnf 3 0").unwrap(), empty);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Dnf3Formula::parse("1 2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Dnf3Formula::parse("1 2 3\n1 -1 2"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Dnf3Formula::parse("1 0 2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Dnf3Formula::parse("p dnf 2 1\n1 2 3"), Err(Error::Parse { line: 2, .. })));
        assert!(Dnf3Formula::parse("p dnf 3 2\n1 2 3").is_err());
    }

    #[test]
    fn satisfaction_count() {
        let f = Dnf3Formula::parse("1 -2 3\n1 2 3").unwrap();
        assert_eq!(f.satisfied(&[true, false, true]), 1);
        assert_eq!(f.satisfied(&[true, true, true]), 1);
        assert_eq!(f.satisfied(&[false, false, false]), 0);
    }
}
