//! The cycle space over GF(2): edge sets, fundamental-cycle coordinates,
//! edge-disjoint circuit decomposition and 2-basis verification.

use std::fmt;

use crate::error::{CycleError, Result};
use crate::graph::{SpanningForest, WeightedMultigraph};
use crate::scalar::Scalar;

const WORD: usize = 64;

/// A set of edges of a fixed host graph, stored as a dense bit vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EdgeSetZ2 {
    len: usize,
    words: Vec<u64>,
}

impl fmt::Debug for EdgeSetZ2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EdgeSetZ2{:?}", self.iter().collect::<Vec<_>>())
    }
}

impl EdgeSetZ2 {
    /// The empty set over `edge_count` edges.
    pub fn empty(edge_count: usize) -> Self {
        Self { len: edge_count, words: vec![0; edge_count.div_ceil(WORD)] }
    }

    /// Builds a set from edge indices; repeated indices cancel in pairs.
    pub fn from_edges<I: IntoIterator<Item = usize>>(edge_count: usize, edges: I) -> Result<Self> {
        let mut set = Self::empty(edge_count);
        for e in edges {
            if e >= edge_count {
                return Err(CycleError::HostMismatch { expected: edge_count, found: e + 1 });
            }
            set.toggle(e);
        }
        Ok(set)
    }

    /// Number of edges of the host graph.
    pub fn host_len(&self) -> usize {
        self.len
    }

    pub fn contains(&self, edge: usize) -> bool {
        edge < self.len && self.words[edge / WORD] >> (edge % WORD) & 1 == 1
    }

    pub fn toggle(&mut self, edge: usize) {
        self.words[edge / WORD] ^= 1 << (edge % WORD);
    }

    pub fn insert(&mut self, edge: usize) {
        self.words[edge / WORD] |= 1 << (edge % WORD);
    }

    pub fn remove(&mut self, edge: usize) {
        self.words[edge / WORD] &= !(1 << (edge % WORD));
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    /// Edge indices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&e| self.contains(e))
    }

    pub fn is_disjoint(&self, other: &EdgeSetZ2) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    fn check_host(&self, other: &EdgeSetZ2) -> Result<()> {
        if self.len != other.len {
            return Err(CycleError::HostMismatch { expected: self.len, found: other.len });
        }
        Ok(())
    }

    fn xor_assign(&mut self, other: &EdgeSetZ2) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Total length of the edges in the set.
    pub fn length<S: Scalar>(&self, graph: &WeightedMultigraph<S>) -> S {
        crate::scalar::sum(self.iter().map(|e| graph.length(e).clone()))
    }
}

/// Symmetric difference.
pub fn z2_sum(a: &EdgeSetZ2, b: &EdgeSetZ2) -> Result<EdgeSetZ2> {
    a.check_host(b)?;
    let mut out = a.clone();
    out.xor_assign(b);
    Ok(out)
}

fn check_graph<S: Scalar>(graph: &WeightedMultigraph<S>, set: &EdgeSetZ2) -> Result<()> {
    if set.host_len() != graph.edge_count() {
        return Err(CycleError::HostMismatch { expected: graph.edge_count(), found: set.host_len() });
    }
    Ok(())
}

/// Degree of every vertex in the spanning subgraph `set`; a loop counts twice.
fn degrees<S: Scalar>(graph: &WeightedMultigraph<S>, set: &EdgeSetZ2) -> Vec<usize> {
    let mut degree = vec![0; graph.vertex_count()];
    for e in set.iter() {
        let edge = graph.edge(e);
        degree[edge.tail] += 1;
        degree[edge.head] += 1;
    }
    degree
}

/// Lowest vertex of odd degree in `set`, if any.
pub fn first_odd_vertex<S: Scalar>(graph: &WeightedMultigraph<S>, set: &EdgeSetZ2) -> Option<usize> {
    degrees(graph, set).iter().position(|d| d % 2 == 1)
}

/// Even degree at every vertex.
pub fn in_cycle_space<S: Scalar>(graph: &WeightedMultigraph<S>, set: &EdgeSetZ2) -> bool {
    set.host_len() == graph.edge_count() && first_odd_vertex(graph, set).is_none()
}

fn require_cycle_space<S: Scalar>(graph: &WeightedMultigraph<S>, set: &EdgeSetZ2) -> Result<()> {
    check_graph(graph, set)?;
    match first_odd_vertex(graph, set) {
        Some(vertex) => Err(CycleError::OddDegree { vertex }),
        None => Ok(()),
    }
}

/// Nonempty, connected, and 2-regular on its vertices (a lone loop qualifies).
pub fn is_circuit<S: Scalar>(graph: &WeightedMultigraph<S>, set: &EdgeSetZ2) -> bool {
    if set.host_len() != graph.edge_count() || set.is_empty() {
        return false;
    }
    let degree = degrees(graph, set);
    if degree.iter().any(|&d| d != 0 && d != 2) {
        return false;
    }
    let touched: Vec<usize> = (0..graph.vertex_count()).filter(|&v| degree[v] > 0).collect();
    let mut seen = vec![false; graph.vertex_count()];
    let mut stack = vec![touched[0]];
    seen[touched[0]] = true;
    while let Some(v) = stack.pop() {
        for &e in graph.incident(v) {
            if !set.contains(e) {
                continue;
            }
            let w = graph.edge(e).other(v).expect("incident");
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    touched.iter().all(|&v| seen[v])
}

/// The chord together with the tree path joining its endpoints.
pub fn fundamental_cycle<S: Scalar>(
    graph: &WeightedMultigraph<S>,
    forest: &SpanningForest,
    chord: usize,
) -> Result<EdgeSetZ2> {
    if chord >= graph.edge_count() {
        return Err(CycleError::HostMismatch { expected: graph.edge_count(), found: chord + 1 });
    }
    if forest.is_tree_edge(chord) {
        return Err(CycleError::NotAChord(chord));
    }
    let edge = graph.edge(chord);
    let path = forest.tree_path(graph, edge.head, edge.tail)?;
    EdgeSetZ2::from_edges(graph.edge_count(), std::iter::once(chord).chain(path.iter().map(|s| s.edge)))
}

/// Coordinates of a cycle-space element in the fundamental basis: one bit per
/// chord, in the forest's chord order.
pub fn z2_coordinates<S: Scalar>(
    graph: &WeightedMultigraph<S>,
    forest: &SpanningForest,
    set: &EdgeSetZ2,
) -> Result<Vec<bool>> {
    require_cycle_space(graph, set)?;
    Ok(forest.chords().iter().map(|&c| set.contains(c)).collect())
}

/// Sum of the fundamental cycles selected by `coordinates`.
pub fn from_z2_coordinates<S: Scalar>(
    graph: &WeightedMultigraph<S>,
    forest: &SpanningForest,
    coordinates: &[bool],
) -> Result<EdgeSetZ2> {
    if coordinates.len() != forest.chords().len() {
        return Err(CycleError::HostMismatch { expected: forest.chords().len(), found: coordinates.len() });
    }
    let mut out = EdgeSetZ2::empty(graph.edge_count());
    for (&chord, &bit) in forest.chords().iter().zip(coordinates) {
        if bit {
            out.xor_assign(&fundamental_cycle(graph, forest, chord)?);
        }
    }
    Ok(out)
}

/// Splits a cycle-space element into pairwise edge-disjoint circuits.
///
/// Walks from the lowest-index remaining edge (starting at its tail), always
/// leaving by the lowest-index unused incident edge, and cuts off a circuit as
/// soon as the walk revisits a vertex of the current path. Loops are cut off
/// immediately.
pub fn decompose_edge_disjoint_circuits<S: Scalar>(
    graph: &WeightedMultigraph<S>,
    set: &EdgeSetZ2,
) -> Result<Vec<EdgeSetZ2>> {
    require_cycle_space(graph, set)?;
    let m = graph.edge_count();
    let mut remaining = set.clone();
    let mut circuits = Vec::new();
    let mut position: Vec<Option<usize>> = vec![None; graph.vertex_count()];

    while let Some(first) = remaining.first() {
        let start = graph.edge(first).tail;
        let mut path_vertices = vec![start];
        let mut path_edges: Vec<usize> = Vec::new();
        position[start] = Some(0);
        let mut current = start;
        let mut next = Some(first);
        while let Some(e) = next {
            remaining.remove(e);
            let edge = graph.edge(e);
            if edge.is_loop() {
                circuits.push(EdgeSetZ2::from_edges(m, [e])?);
            } else {
                let w = edge.other(current).expect("incident");
                path_edges.push(e);
                match position[w] {
                    Some(p) => {
                        circuits.push(EdgeSetZ2::from_edges(m, path_edges.drain(p..))?);
                        for v in path_vertices.drain(p + 1..) {
                            position[v] = None;
                        }
                    }
                    None => {
                        position[w] = Some(path_vertices.len());
                        path_vertices.push(w);
                    }
                }
                current = w;
            }
            next = graph.incident(current).iter().copied().find(|&f| remaining.contains(f));
        }
        debug_assert_eq!(path_vertices, vec![start]);
        position[start] = None;
    }
    Ok(circuits)
}

/// GF(2) rank of a family of edge sets of one host.
pub fn gf2_rank(rows: &[EdgeSetZ2]) -> usize {
    let mut pivots: Vec<(usize, EdgeSetZ2)> = Vec::new();
    for row in rows {
        let mut row = row.clone();
        for (pivot, basis) in &pivots {
            if row.contains(*pivot) {
                row.xor_assign(basis);
            }
        }
        if let Some(pivot) = row.first() {
            // keep the basis fully reduced on pivot columns
            for (_, basis) in pivots.iter_mut() {
                if basis.contains(pivot) {
                    basis.xor_assign(&row);
                }
            }
            pivots.push((pivot, row));
        }
    }
    pivots.len()
}

/// First violated 2-basis condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoBasisViolation {
    /// Member `member` is not an edge set of the host graph.
    WrongHost { member: usize },
    NotInCycleSpace { member: usize, vertex: usize },
    DoesNotSpan { rank: usize, required: usize },
    EdgeMultiplicity { edge: usize, count: usize },
}

impl fmt::Display for TwoBasisViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::WrongHost { member } => write!(f, "member {member} is not an edge set of this graph"),
            Self::NotInCycleSpace { member, vertex } => {
                write!(f, "member {member} is not in the cycle space (vertex {vertex} has odd degree)")
            }
            Self::DoesNotSpan { rank, required } => write!(f, "does not span (rank {rank} < {required})"),
            Self::EdgeMultiplicity { edge, count } => write!(f, "edge {edge} in {count} members"),
        }
    }
}

/// Outcome of [`verify_two_basis`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoBasisVerdict {
    pub rank: usize,
    pub required: usize,
    pub violation: Option<TwoBasisViolation>,
}

impl TwoBasisVerdict {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

impl fmt::Display for TwoBasisVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => write!(f, "true"),
            Some(v) => write!(f, "false: {v}"),
        }
    }
}

/// Checks that `basis` lies in the cycle space, spans it, and uses no edge more
/// than twice, reporting the first failed condition in that order.
pub fn verify_two_basis<S: Scalar>(graph: &WeightedMultigraph<S>, basis: &[EdgeSetZ2]) -> TwoBasisVerdict {
    let forest = SpanningForest::new(graph);
    let required = forest.cycle_rank();
    let verdict = |rank, violation| TwoBasisVerdict { rank, required, violation: Some(violation) };

    for (member, set) in basis.iter().enumerate() {
        if set.host_len() != graph.edge_count() {
            return verdict(0, TwoBasisViolation::WrongHost { member });
        }
        if let Some(vertex) = first_odd_vertex(graph, set) {
            return verdict(0, TwoBasisViolation::NotInCycleSpace { member, vertex });
        }
    }
    let rank = gf2_rank(basis);
    if rank < required {
        return verdict(rank, TwoBasisViolation::DoesNotSpan { rank, required });
    }
    let mut usage = vec![0usize; graph.edge_count()];
    for set in basis {
        for e in set.iter() {
            usage[e] += 1;
        }
    }
    if let Some(edge) = usage.iter().position(|&c| c > 2) {
        return verdict(rank, TwoBasisViolation::EdgeMultiplicity { edge, count: usage[edge] });
    }
    TwoBasisVerdict { rank, required, violation: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type G = WeightedMultigraph<Rational>;

    fn owl() -> G {
        // u=0, v=1, x=2, y=3; middle edge first
        G::from_ratio_strings(4, &[(0, 1, "1"), (0, 2, "1"), (2, 1, "1"), (1, 3, "1"), (3, 0, "1")]).unwrap()
    }

    fn k4() -> G {
        G::from_ratio_strings(4, &[(0, 1, "1"), (0, 2, "1"), (0, 3, "1"), (1, 2, "1"), (1, 3, "1"), (2, 3, "1")])
            .unwrap()
    }

    fn set(m: usize, edges: &[usize]) -> EdgeSetZ2 {
        EdgeSetZ2::from_edges(m, edges.iter().copied()).unwrap()
    }

    #[test]
    fn sums() {
        let a = set(5, &[0, 1, 2]);
        assert!(z2_sum(&a, &a).unwrap().is_empty());
        assert_eq!(z2_sum(&set(5, &[0]), &set(5, &[3])).unwrap(), set(5, &[0, 3]));
        // owl triangles share the middle edge
        assert_eq!(z2_sum(&set(5, &[0, 1, 2]), &set(5, &[0, 3, 4])).unwrap(), set(5, &[1, 2, 3, 4]));
        assert!(z2_sum(&a, &set(6, &[])).is_err());
    }

    #[test]
    fn membership() {
        let g = owl();
        assert!(in_cycle_space(&g, &set(5, &[])));
        assert!(!in_cycle_space(&g, &set(5, &[1])));
        let f = SpanningForest::new(&g);
        for &c in f.chords() {
            assert!(in_cycle_space(&g, &fundamental_cycle(&g, &f, c).unwrap()));
        }
    }

    #[test]
    fn owl_fundamental_cycles_are_the_eyes() {
        let g = owl();
        let f = SpanningForest::new(&g);
        assert_eq!(f.tree_edges(), vec![0, 2, 3]);
        assert_eq!(f.chords(), &[1, 4]);
        assert_eq!(fundamental_cycle(&g, &f, 1).unwrap(), set(5, &[0, 1, 2]));
        assert_eq!(fundamental_cycle(&g, &f, 4).unwrap(), set(5, &[0, 3, 4]));
        assert!(matches!(fundamental_cycle(&g, &f, 0), Err(CycleError::NotAChord(0))));
        let outer = set(5, &[1, 2, 3, 4]);
        assert_eq!(z2_coordinates(&g, &f, &outer).unwrap(), vec![true, true]);
        assert_eq!(z2_coordinates(&g, &f, &set(5, &[])).unwrap(), vec![false, false]);
        assert!(matches!(z2_coordinates(&g, &f, &set(5, &[0])), Err(CycleError::OddDegree { vertex: 0 })));
    }

    #[test]
    fn small_fundamental_cycles() {
        let tri = G::from_ratio_strings(3, &[(0, 1, "1"), (1, 2, "1"), (2, 0, "1")]).unwrap();
        let f = SpanningForest::new(&tri);
        assert_eq!(fundamental_cycle(&tri, &f, 2).unwrap(), set(3, &[0, 1, 2]));
        let pair = G::from_ratio_strings(2, &[(0, 1, "1"), (1, 0, "2")]).unwrap();
        let f = SpanningForest::new(&pair);
        assert_eq!(fundamental_cycle(&pair, &f, 1).unwrap(), set(2, &[0, 1]));
        let fc = fundamental_cycle(&pair, &f, 1).unwrap();
        assert_eq!(z2_coordinates(&pair, &f, &fc).unwrap(), vec![true]);
    }

    #[test]
    fn decomposition_examples() {
        let g = G::from_ratio_strings(
            6,
            &[(0, 1, "1"), (1, 2, "1"), (2, 0, "1"), (3, 4, "1"), (4, 5, "1"), (5, 3, "1")],
        )
        .unwrap();
        assert!(decompose_edge_disjoint_circuits(&g, &set(6, &[])).unwrap().is_empty());
        assert_eq!(decompose_edge_disjoint_circuits(&g, &set(6, &[0, 1, 2])).unwrap(), vec![set(6, &[0, 1, 2])]);
        let both = decompose_edge_disjoint_circuits(&g, &set(6, &[0, 1, 2, 3, 4, 5])).unwrap();
        assert_eq!(both, vec![set(6, &[0, 1, 2]), set(6, &[3, 4, 5])]);
        assert!(matches!(
            decompose_edge_disjoint_circuits(&g, &set(6, &[0])),
            Err(CycleError::OddDegree { vertex: 0 })
        ));
    }

    #[test]
    fn decomposition_splits_figure_eight_and_loops() {
        // two triangles through vertex 0 plus a loop at 0
        let g = G::from_ratio_strings(
            5,
            &[(0, 1, "1"), (1, 2, "1"), (2, 0, "1"), (0, 3, "1"), (3, 4, "1"), (4, 0, "1"), (0, 0, "1")],
        )
        .unwrap();
        let all = set(7, &[0, 1, 2, 3, 4, 5, 6]);
        let parts = decompose_edge_disjoint_circuits(&g, &all).unwrap();
        assert_eq!(parts.len(), 3);
        assert!(parts.iter().all(|p| is_circuit(&g, p)));
        assert!(parts.contains(&set(7, &[6])));
    }

    #[test]
    fn circuit_recognition() {
        let g = owl();
        assert!(is_circuit(&g, &set(5, &[1, 2, 3, 4])));
        assert!(!is_circuit(&g, &set(5, &[0, 1, 2, 3, 4])));
        assert!(!is_circuit(&g, &set(5, &[])));
    }

    #[test]
    fn two_basis_examples() {
        let g = k4();
        let faces = vec![set(6, &[0, 1, 3]), set(6, &[1, 2, 5]), set(6, &[0, 2, 4])];
        let verdict = verify_two_basis(&g, &faces);
        assert!(verdict.holds());
        assert_eq!(verdict.to_string(), "true");

        let o = owl();
        let one = verify_two_basis(&o, &[set(5, &[0, 1, 2])]);
        assert_eq!(one.to_string(), "false: does not span (rank 1 < 2)");

        let f = SpanningForest::new(&g);
        assert_eq!(f.tree_edges(), vec![0, 3, 5]);
        let fundamental: Vec<_> = f.chords().iter().map(|&c| fundamental_cycle(&g, &f, c).unwrap()).collect();
        let verdict = verify_two_basis(&g, &fundamental);
        assert_eq!(verdict.violation, Some(TwoBasisViolation::EdgeMultiplicity { edge: 3, count: 3 }));
        assert_eq!(verdict.to_string(), "false: edge 3 in 3 members");

        let odd = verify_two_basis(&g, &[set(6, &[0])]);
        assert!(matches!(odd.violation, Some(TwoBasisViolation::NotInCycleSpace { member: 0, .. })));
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![set(5, &[0, 1, 2]), set(5, &[0, 3, 4]), set(5, &[1, 2, 3, 4])];
        assert_eq!(gf2_rank(&rows), 2);
        assert_eq!(gf2_rank(&[]), 0);
        let big = EdgeSetZ2::from_edges(130, [0, 64, 129]).unwrap();
        assert_eq!(big.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(big.first(), Some(0));
    }
}
