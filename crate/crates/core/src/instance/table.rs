use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `T` rows of `n` nonnegative entries. Backs both [`WeightSequence`] and
/// [`ProcTimeMatrix`], which share the CSV layout: a header `n=<n>` followed
/// by one comma-separated row per line.
#[derive(Debug, Clone, PartialEq)]
struct RowTable<S> {
    n: usize,
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> RowTable<S> {
    fn new(n: usize, rows: Vec<Vec<S>>) -> Result<Self> {
        for (t, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() }.at_round(t + 1));
            }
            if let Some(i) = row.iter().position(|v| *v < S::zero()) {
                return Err(Error::InvalidParameter(format!("row {}: entry {i} is negative", t + 1)));
            }
        }
        Ok(Self { n, rows })
    }

    fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (hline, header) = lines
            .by_ref()
            .find(|(_, l)| !l.is_empty())
            .ok_or_else(|| Error::parse(1, "missing `n=<n>` header"))?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::parse(hline, "header must be `n=<n>`"))?;
        let mut rows = Vec::new();
        for (lno, line) in lines {
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|cell| {
                    S::parse_decimal(cell).ok_or_else(|| Error::parse(lno, format!("bad number `{}`", cell.trim())))
                })
                .collect::<Result<Vec<S>>>()?;
            if row.len() != n {
                return Err(Error::parse(lno, format!("expected {n} entries, found {}", row.len())));
            }
            if row.iter().any(|v| *v < S::zero()) {
                return Err(Error::parse(lno, "negative entry"));
            }
            rows.push(row);
        }
        Ok(Self { n, rows })
    }

    fn serialize(&self) -> String {
        let mut out = format!("n={}", self.n);
        for row in &self.rows {
            out.push('\n');
            let cells: Vec<String> = row.iter().map(Scalar::to_decimal).collect();
            out.push_str(&cells.join(","));
        }
        out
    }
}

macro_rules! row_table_type {
    ($(#[$doc:meta])* $name:ident, $rows_fn:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name<S> {
            table: RowTable<S>,
        }

        impl<S: Scalar> $name<S> {
            pub fn new(n: usize, rows: Vec<Vec<S>>) -> Result<Self> {
                RowTable::new(n, rows).map(|table| Self { table })
            }

            pub fn empty(n: usize) -> Self {
                Self { table: RowTable { n, rows: Vec::new() } }
            }

            pub fn n(&self) -> usize {
                self.table.n
            }

            /// Number of rows.
            pub fn len(&self) -> usize {
                self.table.rows.len()
            }

            pub fn is_empty(&self) -> bool {
                self.table.rows.is_empty()
            }

            pub fn $rows_fn(&self) -> &[Vec<S>] {
                &self.table.rows
            }

            pub fn row(&self, t: usize) -> &[S] {
                &self.table.rows[t]
            }

            /// Largest entry, zero when empty.
            pub fn max_entry(&self) -> S {
                self.table.rows.iter().flatten().fold(S::zero(), |m, v| m.max_of(*v))
            }

            pub fn parse(text: &str) -> Result<Self> {
                RowTable::parse(text).map(|table| Self { table })
            }

            pub fn serialize(&self) -> String {
                self.table.serialize()
            }
        }
    };
}

row_table_type!(
    /// The adversary's revealed weight rows `w^1..w^T`, one entry per element.
    WeightSequence,
    rows
);

row_table_type!(
    /// Processing-time vectors of a multi-instance `P3||Cmax` problem, one
    /// row per instance and one column per job.
    ProcTimeMatrix,
    rows
);
