//! Edge-weighted multigraphs, spanning forests, closed walks and exhaustions.

use std::fmt::Write as _;

use crate::error::{CycleError, Result};
use crate::scalar::Scalar;

/// An oriented edge with a strictly positive length.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge<S> {
    pub tail: usize,
    pub head: usize,
    pub length: S,
}

impl<S> Edge<S> {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    /// The endpoint opposite to `vertex`, if `vertex` is incident.
    pub fn other(&self, vertex: usize) -> Option<usize> {
        if vertex == self.tail {
            Some(self.head)
        } else if vertex == self.head {
            Some(self.tail)
        } else {
            None
        }
    }
}

/// Multigraph with stable edge indices `0..m`. Parallel edges and self-loops
/// are allowed. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMultigraph<S> {
    vertex_count: usize,
    edges: Vec<Edge<S>>,
    // incident edge indices per vertex, ascending, loops listed once
    incidence: Vec<Vec<usize>>,
}

impl<S: Scalar> WeightedMultigraph<S> {
    /// Validates and builds a graph; edge order is preserved.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize, S)>) -> Result<Self> {
        let mut incidence = vec![Vec::new(); vertex_count];
        let mut out = Vec::with_capacity(edges.len());
        for (index, (tail, head, length)) in edges.into_iter().enumerate() {
            if !(length > S::zero()) {
                return Err(CycleError::NonPositiveLength { edge: index, length: length.to_string() });
            }
            for vertex in [tail, head] {
                if vertex >= vertex_count {
                    return Err(CycleError::DanglingEndpoint { edge: index, vertex, vertex_count });
                }
            }
            incidence[tail].push(index);
            if head != tail {
                incidence[head].push(index);
            }
            out.push(Edge { tail, head, length });
        }
        Ok(Self { vertex_count, edges: out, incidence })
    }

    /// Convenience constructor parsing `"p/q"` length strings.
    pub fn from_ratio_strings(vertex_count: usize, edges: &[(usize, usize, &str)]) -> Result<Self> {
        let parsed = edges
            .iter()
            .map(|&(t, h, l)| Ok((t, h, S::parse_ratio(l)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vertex_count, parsed)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge<S>] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Edge<S> {
        &self.edges[index]
    }

    pub fn length(&self, index: usize) -> &S {
        &self.edges[index].length
    }

    /// Incident edge indices of `vertex` in ascending order.
    pub fn incident(&self, vertex: usize) -> &[usize] {
        &self.incidence[vertex]
    }

    pub fn total_length(&self) -> S {
        crate::scalar::sum(self.edges.iter().map(|e| e.length.clone()))
    }

    /// Applies `f` to every length, keeping the combinatorics.
    pub fn map_lengths<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Result<WeightedMultigraph<T>> {
        WeightedMultigraph::new(
            self.vertex_count,
            self.edges.iter().map(|e| (e.tail, e.head, f(&e.length))).collect(),
        )
    }

    /// Adjacency lists `(neighbour, edge)` ignoring loops and the edge `skip`.
    fn adjacency_skipping(&self, skip: Option<usize>) -> Vec<Vec<(usize, usize)>> {
        let mut adjacency = vec![Vec::new(); self.vertex_count];
        for (index, edge) in self.edges.iter().enumerate() {
            if Some(index) == skip || edge.is_loop() {
                continue;
            }
            adjacency[edge.tail].push((edge.head, index));
            adjacency[edge.head].push((edge.tail, index));
        }
        adjacency
    }

    fn dijkstra(&self, adjacency: &[Vec<(usize, usize)>], source: usize) -> Vec<Option<S>> {
        let n = self.vertex_count;
        let mut dist: Vec<Option<S>> = vec![None; n];
        let mut done = vec![false; n];
        dist[source] = Some(S::zero());
        loop {
            let mut best: Option<usize> = None;
            for v in 0..n {
                if done[v] {
                    continue;
                }
                if let Some(d) = &dist[v] {
                    match best {
                        Some(b) if dist[b].as_ref().is_some_and(|db| db <= d) => {}
                        _ => best = Some(v),
                    }
                }
            }
            let Some(u) = best else { break };
            done[u] = true;
            let du = dist[u].clone().expect("reached");
            for &(w, e) in &adjacency[u] {
                let candidate = du.clone() + self.edges[e].length.clone();
                if dist[w].as_ref().is_none_or(|dw| candidate < *dw) {
                    dist[w] = Some(candidate);
                }
            }
        }
        dist
    }

    /// Shortest-path distances from `source` (`None` when unreachable).
    pub fn distances_from(&self, source: usize) -> Result<Vec<Option<S>>> {
        if source >= self.vertex_count {
            return Err(CycleError::UnknownVertex(source));
        }
        Ok(self.dijkstra(&self.adjacency_skipping(None), source))
    }

    /// All-pairs shortest-path metric.
    pub fn distance_matrix(&self) -> Vec<Vec<Option<S>>> {
        let adjacency = self.adjacency_skipping(None);
        (0..self.vertex_count).map(|s| self.dijkstra(&adjacency, s)).collect()
    }

    /// Length of a shortest cycle containing edge `index`, if one exists.
    pub fn shortest_cycle_through(&self, index: usize) -> Option<S> {
        let edge = self.edges.get(index)?;
        if edge.is_loop() {
            return Some(edge.length.clone());
        }
        let dist = self.dijkstra(&self.adjacency_skipping(Some(index)), edge.tail);
        dist[edge.head].clone().map(|d| d + edge.length.clone())
    }

    /// Shortest cycle length in the whole graph (`None` for forests).
    pub fn girth(&self) -> Option<S> {
        (0..self.edge_count())
            .filter_map(|e| self.shortest_cycle_through(e))
            .fold(None, |best: Option<S>, c| match best {
                Some(b) if b <= c => Some(b),
                _ => Some(c),
            })
    }

    /// Graphviz export; edge labels carry lengths and indices.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{name}\" {{");
        for v in 0..self.vertex_count {
            let _ = writeln!(out, "  {v};");
        }
        for (index, edge) in self.edges.iter().enumerate() {
            let _ = writeln!(out, "  {} -> {} [label=\"e{index}: {}\"];", edge.tail, edge.head, edge.length);
        }
        out.push_str("}\n");
        out
    }
}

/// Deterministic depth-first spanning forest: one tree per component, rooted at
/// the lowest vertex index, neighbours explored in ascending edge index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningForest {
    edge_count: usize,
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
    component: Vec<usize>,
    roots: Vec<usize>,
    preorder: Vec<usize>,
    in_tree: Vec<bool>,
    chords: Vec<usize>,
    chord_slot: Vec<Option<usize>>,
}

impl SpanningForest {
    pub fn new<S: Scalar>(graph: &WeightedMultigraph<S>) -> Self {
        let n = graph.vertex_count();
        let m = graph.edge_count();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut component = vec![usize::MAX; n];
        let mut roots = Vec::new();
        let mut preorder = Vec::with_capacity(n);
        let mut in_tree = vec![false; m];

        for root in 0..n {
            if component[root] != usize::MAX {
                continue;
            }
            let id = roots.len();
            roots.push(root);
            component[root] = id;
            preorder.push(root);
            // (vertex, position in its incidence list)
            let mut stack = vec![(root, 0usize)];
            while let Some(top) = stack.last_mut() {
                let (v, cursor) = *top;
                let incident = graph.incident(v);
                if cursor == incident.len() {
                    stack.pop();
                    continue;
                }
                top.1 += 1;
                let e = incident[cursor];
                let w = graph.edge(e).other(v).expect("incident edge");
                if component[w] == usize::MAX {
                    component[w] = id;
                    parent[w] = Some((e, v));
                    depth[w] = depth[v] + 1;
                    in_tree[e] = true;
                    preorder.push(w);
                    stack.push((w, 0));
                }
            }
        }

        let chords: Vec<usize> = (0..m).filter(|&e| !in_tree[e]).collect();
        let mut chord_slot = vec![None; m];
        for (slot, &e) in chords.iter().enumerate() {
            chord_slot[e] = Some(slot);
        }
        Self { edge_count: m, parent, depth, component, roots, preorder, in_tree, chords, chord_slot }
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn component_count(&self) -> usize {
        self.roots.len()
    }

    pub fn component_of(&self, vertex: usize) -> usize {
        self.component[vertex]
    }

    /// `(edge, parent vertex)` of a non-root vertex.
    pub fn parent(&self, vertex: usize) -> Option<(usize, usize)> {
        self.parent[vertex]
    }

    pub fn depth(&self, vertex: usize) -> usize {
        self.depth[vertex]
    }

    /// Vertices in DFS discovery order; parents precede children.
    pub fn preorder(&self) -> &[usize] {
        &self.preorder
    }

    pub fn is_tree_edge(&self, edge: usize) -> bool {
        self.in_tree[edge]
    }

    pub fn tree_edges(&self) -> Vec<usize> {
        (0..self.edge_count).filter(|&e| self.in_tree[e]).collect()
    }

    /// Non-tree edges in ascending index order; this is the coordinate order
    /// of homology classes.
    pub fn chords(&self) -> &[usize] {
        &self.chords
    }

    pub fn chord_slot(&self, edge: usize) -> Option<usize> {
        self.chord_slot.get(edge).copied().flatten()
    }

    /// Dimension of the cycle space, `m - n + #components`.
    pub fn cycle_rank(&self) -> usize {
        self.chords.len()
    }

    /// Oriented tree path from `from` to `to`. Both must lie in one component.
    pub fn tree_path<S: Scalar>(&self, graph: &WeightedMultigraph<S>, from: usize, to: usize) -> Result<Vec<Step>> {
        for v in [from, to] {
            if v >= self.vertex_count() {
                return Err(CycleError::UnknownVertex(v));
            }
        }
        if self.component[from] != self.component[to] {
            return Err(CycleError::InvalidParameter(format!(
                "vertices {from} and {to} lie in different components"
            )));
        }
        let mut up = Vec::new();
        let mut down = Vec::new();
        let (mut a, mut b) = (from, to);
        while a != b {
            if self.depth[a] >= self.depth[b] {
                let (e, p) = self.parent[a].expect("non-root");
                up.push(Step { edge: e, forward: graph.edge(e).tail == a });
                a = p;
            } else {
                let (e, p) = self.parent[b].expect("non-root");
                // traversed later from p down to b
                down.push(Step { edge: e, forward: graph.edge(e).tail == p });
                b = p;
            }
        }
        up.extend(down.into_iter().rev());
        Ok(up)
    }
}

/// One traversal of an edge; `forward` means tail to head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

impl Step {
    pub fn new(edge: usize, forward: bool) -> Self {
        Self { edge, forward }
    }

    pub fn reversed(self) -> Self {
        Self { edge: self.edge, forward: !self.forward }
    }

    /// `(from, to)` vertices of this traversal.
    pub fn endpoints<S>(&self, graph: &WeightedMultigraph<S>) -> (usize, usize) {
        let edge = &graph.edges[self.edge];
        if self.forward {
            (edge.tail, edge.head)
        } else {
            (edge.head, edge.tail)
        }
    }
}

/// A walk given by its start vertex and the oriented edge traversals.
/// Closedness and incidence are checked against a graph on use.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClosedWalk {
    pub start: usize,
    pub steps: Vec<Step>,
}

impl ClosedWalk {
    pub fn new(start: usize, steps: Vec<Step>) -> Self {
        Self { start, steps }
    }

    pub fn empty(start: usize) -> Self {
        Self { start, steps: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Visited vertices, `steps.len() + 1` of them, after checking incidences.
    pub fn vertices<S: Scalar>(&self, graph: &WeightedMultigraph<S>) -> Result<Vec<usize>> {
        if self.start >= graph.vertex_count() {
            return Err(CycleError::UnknownVertex(self.start));
        }
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut at = self.start;
        out.push(at);
        for (i, step) in self.steps.iter().enumerate() {
            if step.edge >= graph.edge_count() {
                return Err(CycleError::UnknownEdge { step: i, edge: step.edge });
            }
            let (from, to) = step.endpoints(graph);
            if from != at {
                return Err(CycleError::InvalidIncidence { step: i, edge: step.edge, vertex: at });
            }
            at = to;
            out.push(at);
        }
        Ok(out)
    }

    /// Checks incidences and that the walk returns to its start.
    pub fn validate_closed<S: Scalar>(&self, graph: &WeightedMultigraph<S>) -> Result<()> {
        let vertices = self.vertices(graph)?;
        let end = *vertices.last().expect("nonempty");
        if end != self.start {
            return Err(CycleError::OpenWalk { start: self.start, end });
        }
        Ok(())
    }

    /// Concatenation; both walks must share the base vertex.
    pub fn concat(&self, other: &ClosedWalk) -> Result<ClosedWalk> {
        if self.start != other.start {
            return Err(CycleError::InvalidParameter(format!(
                "walks based at {} and {} cannot be concatenated",
                self.start, other.start
            )));
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Ok(ClosedWalk::new(self.start, steps))
    }

    /// The same walk traversed backwards.
    pub fn reversed(&self) -> ClosedWalk {
        ClosedWalk::new(self.start, self.steps.iter().rev().map(|s| s.reversed()).collect())
    }
}

/// Sum of traversed edge lengths, counted with multiplicity.
pub fn walk_length<S: Scalar>(graph: &WeightedMultigraph<S>, walk: &ClosedWalk) -> Result<S> {
    walk.vertices(graph)?;
    Ok(crate::scalar::sum(walk.steps.iter().map(|s| graph.length(s.edge).clone())))
}

/// A nested sequence of finite graphs `G_1, G_2, ...` with injective edge maps
/// `G_n -> G_{n+1}` preserving endpoints and lengths.
pub trait Exhaustion<S: Scalar> {
    /// `G_n` for `n >= 1`.
    fn stage(&self, n: usize) -> Result<WeightedMultigraph<S>>;

    /// Image in `G_{n+1}` of every edge of `G_n`.
    fn edge_map(&self, n: usize) -> Result<Vec<usize>>;

    /// Image in `G_{n+1}` of every vertex of `G_n`.
    fn vertex_map(&self, n: usize) -> Result<Vec<usize>>;

    /// Composite edge map `G_from -> G_to`.
    fn composite_edge_map(&self, from: usize, to: usize) -> Result<Vec<usize>> {
        if from == 0 || to < from {
            return Err(CycleError::InvalidParameter(format!("no map from stage {from} to stage {to}")));
        }
        let mut map: Vec<usize> = (0..self.stage(from)?.edge_count()).collect();
        for n in from..to {
            let step = self.edge_map(n)?;
            map = map.into_iter().map(|e| step[e]).collect();
        }
        Ok(map)
    }
}

/// `G_n` of an exhaustion.
pub fn exhaustion_step<S: Scalar, X: Exhaustion<S> + ?Sized>(exhaustion: &X, n: usize) -> Result<WeightedMultigraph<S>> {
    if n == 0 {
        return Err(CycleError::InvalidParameter("exhaustion stages start at 1".into()));
    }
    exhaustion.stage(n)
}

/// Checks that the step map `G_n -> G_{n+1}` is injective and preserves
/// endpoints and lengths.
pub fn check_exhaustion_step<S: Scalar, X: Exhaustion<S> + ?Sized>(exhaustion: &X, n: usize) -> Result<()> {
    let small = exhaustion_step(exhaustion, n)?;
    let large = exhaustion_step(exhaustion, n + 1)?;
    let edges = exhaustion.edge_map(n)?;
    let vertices = exhaustion.vertex_map(n)?;
    let bad = |msg: String| Err(CycleError::InvalidParameter(format!("stage {n}: {msg}")));
    if edges.len() != small.edge_count() || vertices.len() != small.vertex_count() {
        return bad("map sizes do not match the stage".into());
    }
    let mut hit = vec![false; large.edge_count()];
    for (e, &image) in edges.iter().enumerate() {
        if image >= large.edge_count() || std::mem::replace(&mut hit[image], true) {
            return bad(format!("edge {e} maps to {image}, not injective or out of range"));
        }
        let (a, b) = (small.edge(e), large.edge(image));
        if vertices[a.tail] != b.tail || vertices[a.head] != b.head || a.length != b.length {
            return bad(format!("edge {e} is not preserved by the map"));
        }
    }
    Ok(())
}

/// Exhaustion defined by user-supplied closures. `limit` bounds the stages of
/// finite families; stages are produced by `make_stage` and the step maps are
/// derived from `make_maps`.
pub struct GeneratorExhaustion<S, G, M> {
    make_stage: G,
    make_maps: M,
    limit: Option<usize>,
    _scalar: std::marker::PhantomData<S>,
}

impl<S, G, M> GeneratorExhaustion<S, G, M>
where
    S: Scalar,
    G: Fn(usize) -> Result<WeightedMultigraph<S>>,
    M: Fn(usize) -> (Vec<usize>, Vec<usize>),
{
    /// `make_maps(n)` returns `(vertex_map, edge_map)` from stage `n` to `n + 1`.
    pub fn new(make_stage: G, make_maps: M, limit: Option<usize>) -> Self {
        Self { make_stage, make_maps, limit, _scalar: std::marker::PhantomData }
    }

    fn check(&self, n: usize) -> Result<()> {
        match self.limit {
            Some(limit) if n > limit => Err(CycleError::ExhaustionEnded(n)),
            _ if n == 0 => Err(CycleError::InvalidParameter("exhaustion stages start at 1".into())),
            _ => Ok(()),
        }
    }
}

impl<S, G, M> Exhaustion<S> for GeneratorExhaustion<S, G, M>
where
    S: Scalar,
    G: Fn(usize) -> Result<WeightedMultigraph<S>>,
    M: Fn(usize) -> (Vec<usize>, Vec<usize>),
{
    fn stage(&self, n: usize) -> Result<WeightedMultigraph<S>> {
        self.check(n)?;
        (self.make_stage)(n)
    }

    fn edge_map(&self, n: usize) -> Result<Vec<usize>> {
        self.check(n + 1)?;
        Ok((self.make_maps)(n).1)
    }

    fn vertex_map(&self, n: usize) -> Result<Vec<usize>> {
        self.check(n + 1)?;
        Ok((self.make_maps)(n).0)
    }
}
