//! Min-max objectives, the polynomial threshold solver for single-instance
//! min-max vertex cover, and exhaustive multi-instance oracles.
//!
//! The max over an empty selection is 0. Feasibility is checked separately
//! (for example with [`is_vertex_cover`]).

use crate::error::{Error, Result};
use crate::instance::{Graph, ProcTimeMatrix, WeightSequence};
use crate::scalar::Scalar;

pub const HINDSIGHT_VC_LIMIT: usize = 25;
pub const MATCHING_LIMIT: usize = 16;
pub const PATH_LIMIT: usize = 20;
pub const P3_LIMIT: usize = 12;

/// A set of vertex indices, kept sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSubset {
    members: Vec<usize>,
}

impl VertexSubset {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Self { members }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_mask(mask: u64) -> Self {
        Self { members: (0..64).filter(|i| mask >> i & 1 == 1).collect() }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Members joined with `;`, as written in trace files.
    pub fn to_field(&self) -> String {
        let parts: Vec<String> = self.members.iter().map(|v| v.to_string()).collect();
        parts.join(";")
    }
}

/// Machine index (0, 1 or 2) for each job of a `P3||Cmax` schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineAssignment {
    pub machine: Vec<u8>,
}

/// `v_0 - v_1 - ... - v_n` with two parallel arcs per stage. Arc `2i` is the
/// "true" arc of stage `i`, arc `2i + 1` the "false" arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParallelArcChain {
    pub stages: usize,
}

impl ParallelArcChain {
    pub fn arc_count(&self) -> usize {
        2 * self.stages
    }

    pub fn true_arc(stage: usize) -> usize {
        2 * stage
    }

    pub fn false_arc(stage: usize) -> usize {
        2 * stage + 1
    }

    /// Arc indices used by the path that takes the true arc where
    /// `choice[i]` holds.
    pub fn path_arcs(choice: &[bool]) -> Vec<usize> {
        choice
            .iter()
            .enumerate()
            .map(|(i, &t)| if t { Self::true_arc(i) } else { Self::false_arc(i) })
            .collect()
    }
}

/// `max_{i in s} w_i`, or 0 for the empty set.
pub fn minmax_value<S: Scalar>(s: &VertexSubset, w: &[S]) -> Result<S> {
    selection_max(s.members(), w)
}

fn selection_max<S: Scalar>(selection: &[usize], w: &[S]) -> Result<S> {
    selection.iter().try_fold(S::zero(), |acc, &i| {
        w.get(i)
            .map(|v| acc.max_of(*v))
            .ok_or(Error::DimensionMismatch { expected: i + 1, found: w.len() })
    })
}

pub fn is_vertex_cover(g: &Graph, s: &VertexSubset) -> bool {
    g.edges().iter().all(|&(u, v)| s.contains(u) || s.contains(v))
}

/// Exact single-row min-max vertex cover by thresholding.
///
/// Scans the distinct weights in increasing order and returns the first
/// threshold `w*` whose eligible set `{i : w_i <= w*}` covers every edge.
/// An edgeless graph gets the empty cover at cost 0.
pub fn static_minmax_vc<S: Scalar>(g: &Graph, w: &[S]) -> Result<(VertexSubset, S)> {
    if w.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: w.len() });
    }
    if g.m() == 0 {
        return Ok((VertexSubset::empty(), S::zero()));
    }
    let mut thresholds: Vec<S> = w.to_vec();
    thresholds.sort_by(|a, b| a.partial_cmp(b).expect("weights must be comparable"));
    thresholds.dedup();
    for t in thresholds {
        let eligible = VertexSubset::new((0..g.n()).filter(|&i| w[i] <= t));
        if is_vertex_cover(g, &eligible) {
            return Ok((eligible, t));
        }
    }
    unreachable!("the full vertex set is always a cover")
}

/// Inclusion-minimal vertex covers of `g` as bitmasks, in increasing order.
pub(crate) fn minimal_cover_masks(g: &Graph) -> Result<Vec<u64>> {
    let n = g.n();
    if n > HINDSIGHT_VC_LIMIT {
        return Err(Error::TooLarge { what: "vertex cover enumeration", size: n, limit: HINDSIGHT_VC_LIMIT });
    }
    let adj = g.adjacency_masks();
    let mut out = Vec::new();
    'mask: for mask in 0u64..(1u64 << n) {
        let outside = !mask;
        for (v, &nb) in adj.iter().enumerate() {
            let uncovered = nb & outside;
            // outside vertices need every neighbor inside; inside vertices
            // need some neighbor outside, or they could be dropped.
            if (mask >> v & 1 == 1) == (uncovered == 0) {
                continue 'mask;
            }
        }
        out.push(mask);
    }
    Ok(out)
}

/// Best static vertex cover in hindsight for `Σ_t max_{i∈s} w^t_i`.
///
/// Exhaustive over inclusion-minimal covers (the objective is monotone, so
/// an optimum is always among them). Ties prefer fewer vertices, then the
/// lexicographically smallest member list.
pub fn best_static_vc_hindsight<S: Scalar>(g: &Graph, seq: &WeightSequence<S>) -> Result<(VertexSubset, S)> {
    if seq.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: seq.n() });
    }
    let covers = minimal_cover_masks(g)?;
    let mut best: Option<(S, VertexSubset)> = None;
    for mask in covers {
        let set = VertexSubset::from_mask(mask);
        let cost = multi_minmax_cost(set.members(), seq.rows())?;
        let better = match &best {
            None => true,
            Some((bc, bs)) => cost < *bc || (cost == *bc && (set.len(), set.members()) < (bs.len(), bs.members())),
        };
        if better {
            best = Some((cost, set));
        }
    }
    let (cost, set) = best.expect("a graph always has a vertex cover");
    Ok((set, cost))
}

/// `Σ_j max_{e∈selection} w^j_e`.
pub fn multi_minmax_cost<S: Scalar>(selection: &[usize], rows: &[Vec<S>]) -> Result<S> {
    rows.iter().try_fold(S::zero(), |acc, row| Ok(acc + selection_max(selection, row)?))
}

/// Exhaustive multi-instance min-max perfect matching. `rows` hold one
/// weight per edge of `g`, indexed like `g.edges()`. Returns the matching's
/// edge indices.
pub fn brute_force_multi_matching<S: Scalar>(g: &Graph, rows: &[Vec<S>]) -> Result<(Vec<usize>, S)> {
    let n = g.n();
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    if n > MATCHING_LIMIT {
        return Err(Error::TooLarge { what: "perfect matching enumeration", size: n, limit: MATCHING_LIMIT });
    }
    if let Some(row) = rows.iter().find(|r| r.len() != g.m()) {
        return Err(Error::DimensionMismatch { expected: g.m(), found: row.len() });
    }
    let mut incident = vec![Vec::new(); n];
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        incident[u].push((v, k));
        incident[v].push((u, k));
    }
    let mut matchings = Vec::new();
    enumerate_matchings(&incident, &mut vec![false; n], &mut Vec::new(), &mut matchings);

    let mut best: Option<(Vec<usize>, S)> = None;
    for mut m in matchings {
        m.sort_unstable();
        let cost = multi_minmax_cost(&m, rows)?;
        if best.as_ref().is_none_or(|(_, bc)| cost < *bc) {
            best = Some((m, cost));
        }
    }
    best.ok_or(Error::NoPerfectMatching)
}

fn enumerate_matchings(
    incident: &[Vec<(usize, usize)>],
    used: &mut Vec<bool>,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let Some(u) = used.iter().position(|x| !x) else {
        out.push(current.clone());
        return;
    };
    used[u] = true;
    for &(v, k) in &incident[u] {
        if !used[v] {
            used[v] = true;
            current.push(k);
            enumerate_matchings(incident, used, current, out);
            current.pop();
            used[v] = false;
        }
    }
    used[u] = false;
}

/// Exhaustive multi-instance min-max `v_0`–`v_n` path over a parallel-arc
/// chain. The returned path lists, per stage, whether the true arc is taken.
/// Paths are tried with all-true first; ties keep the earlier path.
pub fn brute_force_multi_path<S: Scalar>(chain: ParallelArcChain, rows: &[Vec<S>]) -> Result<(Vec<bool>, S)> {
    let n = chain.stages;
    if n > PATH_LIMIT {
        return Err(Error::TooLarge { what: "path enumeration", size: n, limit: PATH_LIMIT });
    }
    if let Some(row) = rows.iter().find(|r| r.len() != chain.arc_count()) {
        return Err(Error::DimensionMismatch { expected: chain.arc_count(), found: row.len() });
    }
    let mut best: Option<(Vec<bool>, S)> = None;
    for mask in 0u64..(1u64 << n) {
        let choice: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 0).collect();
        let cost = multi_minmax_cost(&ParallelArcChain::path_arcs(&choice), rows)?;
        if best.as_ref().is_none_or(|(_, bc)| cost < *bc) {
            best = Some((choice, cost));
        }
    }
    Ok(best.expect("at least one path"))
}

/// Total makespan `Σ_rows max_machine Σ_{jobs on machine} p`.
pub fn multi_makespan<S: Scalar>(assignment: &MachineAssignment, jobs: &ProcTimeMatrix<S>) -> Result<S> {
    if assignment.machine.len() != jobs.n() {
        return Err(Error::DimensionMismatch { expected: jobs.n(), found: assignment.machine.len() });
    }
    Ok(jobs.rows().iter().fold(S::zero(), |acc, row| {
        let mut loads = [S::zero(); 3];
        for (j, &m) in assignment.machine.iter().enumerate() {
            loads[m as usize] += row[j];
        }
        acc + loads[0].max_of(loads[1]).max_of(loads[2])
    }))
}

/// Exhaustive multi-instance `P3||Cmax` over all `3^n` assignments.
pub fn brute_force_multi_p3cmax<S: Scalar>(jobs: &ProcTimeMatrix<S>) -> Result<(MachineAssignment, S)> {
    let n = jobs.n();
    if n > P3_LIMIT {
        return Err(Error::TooLarge { what: "P3||Cmax enumeration", size: n, limit: P3_LIMIT });
    }
    let mut current = MachineAssignment { machine: vec![0; n] };
    let mut best = (current.clone(), multi_makespan(&current, jobs)?);
    loop {
        // base-3 increment
        let mut k = 0;
        while k < n && current.machine[k] == 2 {
            current.machine[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
        current.machine[k] += 1;
        let cost = multi_makespan(&current, jobs)?;
        if cost < best.1 {
            best = (current.clone(), cost);
        }
    }
    Ok(best)
}
