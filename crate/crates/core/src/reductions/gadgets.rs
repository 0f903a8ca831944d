//! Multi-instance hardness gadgets and exhaustive correspondence checks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Dnf3Formula, Graph, ProcTimeMatrix, WeightSequence};
use crate::minmax::{multi_makespan, multi_minmax_cost, MachineAssignment, ParallelArcChain, VertexSubset};
use crate::scalar::{Rational, Scalar};

/// Largest variable count [`validate_correspondence`] enumerates.
pub const CORRESPONDENCE_LIMIT: usize = 12;
/// Largest vertex count for the exhaustive graph-reduction checks.
pub const VC_REDUCTION_LIMIT: usize = 12;
pub const COLORING_LIMIT: usize = 12;

/// Position of a vertex inside its variable's 4-cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexRole {
    /// `u_i`
    Base,
    /// `u_i^t`
    True,
    /// `ū_i`
    Bar,
    /// `u_i^f`
    False,
}

/// One 4-cycle `u_i – u_i^t – ū_i – u_i^f – u_i` per variable, with one
/// edge-weight row per clause.
///
/// Vertex `4i + k` has role `k` in `Base, True, Bar, False` order. Edge
/// `4i + k` of the graph is, for `k = 0..4`: `u u^t`, `u^t ū`, `ū u^f`,
/// `u u^f`. Setting `x_i` true selects edges `u u^t` and `ū u^f`; false
/// selects `u^t ū` and `u u^f`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingGadget<S> {
    pub graph: Graph,
    pub weight_rows: Vec<Vec<S>>,
}

impl<S: Scalar> MatchingGadget<S> {
    pub fn variables(&self) -> usize {
        self.graph.n() / 4
    }

    pub fn vertex_role(v: usize) -> (usize, VertexRole) {
        let role = match v % 4 {
            0 => VertexRole::Base,
            1 => VertexRole::True,
            2 => VertexRole::Bar,
            _ => VertexRole::False,
        };
        (v / 4, role)
    }

    /// Edge indices of `M_σ`, ascending.
    pub fn matching_for(&self, assignment: &[bool]) -> Result<Vec<usize>> {
        if assignment.len() != self.variables() {
            return Err(Error::DimensionMismatch { expected: self.variables(), found: assignment.len() });
        }
        let mut edges = Vec::with_capacity(2 * assignment.len());
        for (i, &value) in assignment.iter().enumerate() {
            if value {
                edges.extend([4 * i, 4 * i + 2]);
            } else {
                edges.extend([4 * i + 1, 4 * i + 3]);
            }
        }
        Ok(edges)
    }

    /// Inverse of [`matching_for`](Self::matching_for); `None` if `edges` is
    /// not a perfect matching of the gadget.
    pub fn assignment_for(&self, edges: &[usize]) -> Option<Vec<bool>> {
        let n = self.variables();
        let mut sorted = edges.to_vec();
        sorted.sort_unstable();
        if sorted.len() != 2 * n {
            return None;
        }
        sorted
            .chunks(2)
            .enumerate()
            .map(|(i, pair)| match (pair[0].checked_sub(4 * i)?, pair[1].checked_sub(4 * i)?) {
                (0, 2) => Some(true),
                (1, 3) => Some(false),
                _ => None,
            })
            .collect()
    }
}

/// Clause `C_j` becomes row `j`: `w(u_i u_i^t) = 1` iff `¬x_i ∈ C_j`,
/// `w(u_i u_i^f) = 1` iff `x_i ∈ C_j`, every other edge 0. A matching then
/// costs 0 on row `j` exactly when its assignment satisfies `C_j`.
pub fn dnf_to_matching<S: Scalar>(f: &Dnf3Formula) -> MatchingGadget<S> {
    let n = f.n();
    let edges = (0..n).flat_map(|i| {
        let b = 4 * i;
        [(b, b + 1), (b + 1, b + 2), (b + 2, b + 3), (b, b + 3)]
    });
    let graph = Graph::new(4 * n, edges).expect("4-cycles are simple");
    let weight_rows = f
        .clauses()
        .iter()
        .map(|clause| {
            let mut row = vec![S::zero(); 4 * n];
            for lit in clause {
                let k = if lit.positive { 3 } else { 0 };
                row[4 * lit.var + k] = S::one();
            }
            row
        })
        .collect();
    MatchingGadget { graph, weight_rows }
}

/// Chain of `n` stages with arcs `e^t_i` (index `2i`) and `e^f_i` (index
/// `2i + 1`); clause `C_j` puts weight 1 on `e^f_i` when `x_i ∈ C_j` and on
/// `e^t_i` when `¬x_i ∈ C_j`.
pub fn dnf_to_path<S: Scalar>(f: &Dnf3Formula) -> (ParallelArcChain, Vec<Vec<S>>) {
    let chain = ParallelArcChain { stages: f.n() };
    let rows = f
        .clauses()
        .iter()
        .map(|clause| {
            let mut row = vec![S::zero(); chain.arc_count()];
            for lit in clause {
                let arc = if lit.positive { ParallelArcChain::false_arc(lit.var) } else { ParallelArcChain::true_arc(lit.var) };
                row[arc] = S::one();
            }
            row
        })
        .collect();
    (chain, rows)
}

/// Row `i` puts weight 1 on vertex `i`, so a set's total cost is its size.
pub fn vc_to_multi_vc<S: Scalar>(g: &Graph) -> WeightSequence<S> {
    let rows = (0..g.n())
        .map(|i| {
            let mut row = vec![S::zero(); g.n()];
            row[i] = S::one();
            row
        })
        .collect();
    WeightSequence::new(g.n(), rows).expect("one-hot rows are valid")
}

/// One job per vertex and one processing-time row per edge `(i, j)` with
/// unit times on jobs `i` and `j`. The total makespan is `m` exactly when
/// the graph is 3-colorable.
pub fn threecolor_to_p3<S: Scalar>(g: &Graph) -> ProcTimeMatrix<S> {
    let rows = g
        .edges()
        .iter()
        .map(|&(i, j)| {
            let mut row = vec![S::zero(); g.n()];
            row[i] = S::one();
            row[j] = S::one();
            row
        })
        .collect();
    ProcTimeMatrix::new(g.n(), rows).expect("0/1 rows are valid")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrespondenceViolation {
    /// `matching` or `path`.
    pub gadget: &'static str,
    /// One `T`/`F` per variable.
    pub assignment: String,
    pub satisfied: usize,
    pub gadget_cost: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    pub formula_id: String,
    pub assignments_checked: usize,
    pub violations: Vec<CorrespondenceViolation>,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `satisfied(σ) = m − cost(M_σ)` and `satisfied(σ) = m − cost(P_σ)`
/// for every assignment, in exact arithmetic.
pub fn validate_correspondence(f: &Dnf3Formula) -> Result<CorrespondenceReport> {
    let n = f.n();
    if n > CORRESPONDENCE_LIMIT {
        return Err(Error::TooLarge { what: "assignment enumeration", size: n, limit: CORRESPONDENCE_LIMIT });
    }
    let matching = dnf_to_matching::<Rational>(f);
    let (_, path_rows) = dnf_to_path::<Rational>(f);
    let m = Rational::from_usize_exact(f.m());
    let mut violations = Vec::new();
    for mask in 0u64..1 << n {
        let sigma: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        let satisfied = f.satisfied(&sigma);
        let expected = Rational::from_usize_exact(satisfied);
        let costs = [
            ("matching", multi_minmax_cost(&matching.matching_for(&sigma)?, &matching.weight_rows)?),
            ("path", multi_minmax_cost(&ParallelArcChain::path_arcs(&sigma), &path_rows)?),
        ];
        for (gadget, cost) in costs {
            if m - cost != expected {
                violations.push(CorrespondenceViolation {
                    gadget,
                    assignment: sigma.iter().map(|&b| if b { 'T' } else { 'F' }).collect(),
                    satisfied,
                    gadget_cost: cost.to_decimal(),
                });
            }
        }
    }
    Ok(CorrespondenceReport { formula_id: content_id(&f.serialize()), assignments_checked: 1 << n, violations })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphReductionReport {
    pub reduction: &'static str,
    pub graph_id: String,
    pub cases_checked: usize,
    pub violations: Vec<String>,
}

impl GraphReductionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that every vertex subset costs its size on the one-hot rows.
pub fn validate_vc_reduction(g: &Graph) -> Result<GraphReductionReport> {
    let n = g.n();
    if n > VC_REDUCTION_LIMIT {
        return Err(Error::TooLarge { what: "subset enumeration", size: n, limit: VC_REDUCTION_LIMIT });
    }
    let rows = vc_to_multi_vc::<Rational>(g);
    let mut violations = Vec::new();
    for mask in 0u64..1 << n {
        let s = VertexSubset::from_mask(mask);
        let cost = multi_minmax_cost(s.members(), rows.rows())?;
        if cost != Rational::from_usize_exact(s.len()) {
            violations.push(format!("subset {{{}}} costs {}", s.to_field(), cost));
        }
    }
    Ok(GraphReductionReport { reduction: "multi_vc", graph_id: content_id(&g.serialize()), cases_checked: 1 << n, violations })
}

/// Checks `min total makespan = m ⇔ 3-colorable`, evaluating every machine
/// assignment: each one is also a coloring, proper exactly when every edge
/// row has makespan 1.
pub fn validate_threecolor_reduction(g: &Graph) -> Result<GraphReductionReport> {
    let n = g.n();
    if n > COLORING_LIMIT {
        return Err(Error::TooLarge { what: "coloring enumeration", size: n, limit: COLORING_LIMIT });
    }
    let jobs = threecolor_to_p3::<Rational>(g);
    let m = Rational::from_usize_exact(g.m());
    let mut colorable = false;
    let mut reaches_m = false;
    let mut violations = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let machine = base3_digits(code, n);
        let proper = g.edges().iter().all(|&(u, v)| machine[u] != machine[v]);
        let span = multi_makespan(&MachineAssignment { machine }, &jobs)?;
        if proper != (span == m) {
            violations.push(format!("assignment {code}: proper={proper} makespan={span}"));
        }
        colorable |= proper;
        reaches_m |= span == m;
    }
    if colorable != reaches_m {
        violations.push(format!("colorable={colorable} but makespan m reachable={reaches_m}"));
    }
    Ok(GraphReductionReport { reduction: "p3_cmax", graph_id: content_id(&g.serialize()), cases_checked: total, violations })
}

/// Whether `g` has a proper 3-coloring (backtracking).
pub fn is_three_colorable(g: &Graph) -> bool {
    fn extend(v: usize, nbrs: &[Vec<usize>], color: &mut [u8]) -> bool {
        if v == color.len() {
            return true;
        }
        for c in 0..3 {
            if nbrs[v].iter().all(|&u| u > v || color[u] != c) {
                color[v] = c;
                if extend(v + 1, nbrs, color) {
                    return true;
                }
            }
        }
        false
    }
    extend(0, &g.neighbors(), &mut vec![0; g.n()])
}

fn base3_digits(mut code: usize, n: usize) -> Vec<u8> {
    (0..n)
        .map(|_| {
            let d = (code % 3) as u8;
            code /= 3;
            d
        })
        .collect()
}

/// 64-bit FNV-1a of `text`, as 16 hex digits.
pub fn content_id(text: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}
