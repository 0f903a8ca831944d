use std::collections::HashSet;

use crate::error::{Error, Result};

/// Undirected simple graph on vertices `0..n`.
///
/// Edges are stored normalized (`u < v`) in insertion order; the edge index
/// is the position in that list and is what edge-weight rows refer to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (k, (u, v)) in edges.into_iter().enumerate() {
            check_edge(n, u, v, &mut seen).map_err(|m| Error::InvalidParameter(format!("edge {k}: {m}")))?;
            out.push((u.min(v), u.max(v)));
        }
        Ok(Self { n, edges: out })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, edges: Vec::new() }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self { n, edges }
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Self { n, edges: (1..n).map(|v| (v - 1, v)).collect() }
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Self { n: leaves + 1, edges: (1..=leaves).map(|v| (0, v)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbor bitmask per vertex. Only valid for `n <= 64`.
    pub(crate) fn adjacency_masks(&self) -> Vec<u64> {
        debug_assert!(self.n <= 64);
        let mut adj = vec![0u64; self.n];
        for &(u, v) in &self.edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Parses the edge-list format: a header line `n m`, then `m` lines `u v`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (hline, header) = lines
            .by_ref()
            .find(|(_, l)| !l.is_empty())
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let nums: Vec<&str> = header.split_whitespace().collect();
        let [n, m] = nums.as_slice() else {
            return Err(Error::parse(hline, "header must be `n m`"));
        };
        let n: usize = n.parse().map_err(|_| Error::parse(hline, "bad vertex count"))?;
        let m: usize = m.parse().map_err(|_| Error::parse(hline, "bad edge count"))?;

        let mut seen = HashSet::new();
        let mut edges = Vec::with_capacity(m);
        for (lno, line) in lines {
            if line.is_empty() {
                continue;
            }
            if edges.len() == m {
                return Err(Error::parse(lno, format!("more than the declared {m} edges")));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [u, v] = parts.as_slice() else {
                return Err(Error::parse(lno, "edge line must be `u v`"));
            };
            let u: usize = u.parse().map_err(|_| Error::parse(lno, "bad endpoint"))?;
            let v: usize = v.parse().map_err(|_| Error::parse(lno, "bad endpoint"))?;
            check_edge(n, u, v, &mut seen).map_err(|msg| Error::parse(lno, msg))?;
            edges.push((u.min(v), u.max(v)));
        }
        if edges.len() != m {
            return Err(Error::parse(hline, format!("declared {m} edges, found {}", edges.len())));
        }
        Ok(Self { n, edges })
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("{} {}", self.n, self.edges.len());
        for (u, v) in &self.edges {
            out.push_str(&format!("\n{u} {v}"));
        }
        out
    }
}

fn check_edge(
    n: usize,
    u: usize,
    v: usize,
    seen: &mut HashSet<(usize, usize)>,
) -> std::result::Result<(), String> {
    if u >= n || v >= n {
        return Err(format!("endpoint out of range [0, {n})"));
    }
    if u == v {
        return Err(format!("self-loop at vertex {u}"));
    }
    if !seen.insert((u.min(v), u.max(v))) {
        return Err(format!("duplicate edge {u} {v}"));
    }
    Ok(())
}
