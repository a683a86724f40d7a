//! Integer homology of a graph through circulations.
//!
//! A graph has no 2-cells, so every class of `H_1(G; Z)` contains exactly one
//! circulation, and any chain of closed walks in the class has length at least
//! `sum |f_e| * len(e)` of that circulation. Classes are stored as their values
//! on the chords of a fixed [`SpanningForest`]; tree-edge flows are forced by
//! conservation.

use std::ops::{Add, Neg, Sub};

use crate::error::{CycleError, Result};
use crate::graph::{ClosedWalk, SpanningForest, Step, WeightedMultigraph};
use crate::scalar::{sum, Scalar};
use crate::z2::{is_circuit, EdgeSetZ2};

/// Integer flow per edge, signed relative to the stored edge orientation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circulation {
    flows: Vec<i64>,
}

impl Circulation {
    pub fn zero(edge_count: usize) -> Self {
        Self { flows: vec![0; edge_count] }
    }

    /// Wraps raw flows; conservation is checked by the operations that need it.
    pub fn from_flows(flows: Vec<i64>) -> Self {
        Self { flows }
    }

    pub fn flows(&self) -> &[i64] {
        &self.flows
    }

    pub fn flow(&self, edge: usize) -> i64 {
        self.flows[edge]
    }

    pub fn edge_count(&self) -> usize {
        self.flows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.flows.iter().all(|&f| f == 0)
    }

    /// Edges carrying nonzero flow.
    pub fn support(&self) -> EdgeSetZ2 {
        let edges = self.flows.iter().enumerate().filter(|(_, &f)| f != 0).map(|(e, _)| e);
        EdgeSetZ2::from_edges(self.flows.len(), edges).expect("indices in range")
    }

    pub fn scaled(&self, factor: i64) -> Self {
        Self { flows: self.flows.iter().map(|f| f * factor).collect() }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(i64, i64) -> i64) -> Result<Self> {
        if self.flows.len() != other.flows.len() {
            return Err(CycleError::HostMismatch { expected: self.flows.len(), found: other.flows.len() });
        }
        Ok(Self { flows: self.flows.iter().zip(&other.flows).map(|(&a, &b)| op(a, b)).collect() })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }
}

/// Lowest vertex where inflow differs from outflow, with its net outflow.
pub fn conservation_violation<S: Scalar>(graph: &WeightedMultigraph<S>, circulation: &Circulation) -> Option<(usize, i64)> {
    let mut net = vec![0i64; graph.vertex_count()];
    for (e, &f) in circulation.flows.iter().enumerate() {
        let edge = graph.edge(e);
        net[edge.tail] += f;
        net[edge.head] -= f;
    }
    net.iter().position(|&x| x != 0).map(|v| (v, net[v]))
}

pub fn check_conservation<S: Scalar>(graph: &WeightedMultigraph<S>, circulation: &Circulation) -> Result<()> {
    if circulation.edge_count() != graph.edge_count() {
        return Err(CycleError::HostMismatch { expected: graph.edge_count(), found: circulation.edge_count() });
    }
    match conservation_violation(graph, circulation) {
        Some((vertex, net)) => Err(CycleError::ConservationViolated { vertex, net }),
        None => Ok(()),
    }
}

/// Net signed traversal count of every edge along a closed walk.
pub fn walk_to_circulation<S: Scalar>(graph: &WeightedMultigraph<S>, walk: &ClosedWalk) -> Result<Circulation> {
    walk.validate_closed(graph)?;
    let mut flows = vec![0i64; graph.edge_count()];
    for step in &walk.steps {
        flows[step.edge] += if step.forward { 1 } else { -1 };
    }
    Ok(Circulation { flows })
}

/// `sum |f_e| * len(e)`.
pub fn length_of_circulation<S: Scalar>(graph: &WeightedMultigraph<S>, circulation: &Circulation) -> S {
    sum(circulation
        .flows
        .iter()
        .enumerate()
        .filter(|(_, &f)| f != 0)
        .map(|(e, &f)| S::from_int(f.abs()) * graph.length(e).clone()))
}

/// Class coordinates: one integer per chord of the forest, in chord order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomologyClass {
    coords: Vec<i64>,
}

impl HomologyClass {
    pub fn new(coords: Vec<i64>) -> Self {
        Self { coords }
    }

    pub fn zero(dimension: usize) -> Self {
        Self { coords: vec![0; dimension] }
    }

    /// Unit vector at chord slot `slot`.
    pub fn unit(dimension: usize, slot: usize) -> Self {
        let mut coords = vec![0; dimension];
        coords[slot] = 1;
        Self { coords }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl Add for &HomologyClass {
    type Output = HomologyClass;

    fn add(self, rhs: &HomologyClass) -> HomologyClass {
        assert_eq!(self.coords.len(), rhs.coords.len(), "classes over different forests");
        HomologyClass { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &HomologyClass {
    type Output = HomologyClass;

    fn sub(self, rhs: &HomologyClass) -> HomologyClass {
        self + &(-rhs)
    }
}

impl Neg for &HomologyClass {
    type Output = HomologyClass;

    fn neg(self) -> HomologyClass {
        HomologyClass { coords: self.coords.iter().map(|c| -c).collect() }
    }
}

/// An oriented simple cycle (or a single loop) traversed `multiplicity` times.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleWithMultiplicity {
    pub cycle: ClosedWalk,
    pub multiplicity: u64,
}

impl CycleWithMultiplicity {
    /// Unit circulation of the underlying cycle.
    pub fn unit_circulation(&self, edge_count: usize) -> Circulation {
        let mut flows = vec![0i64; edge_count];
        for step in &self.cycle.steps {
            flows[step.edge] += if step.forward { 1 } else { -1 };
        }
        Circulation { flows }
    }

    pub fn circulation(&self, edge_count: usize) -> Circulation {
        self.unit_circulation(edge_count).scaled(self.multiplicity as i64)
    }

    /// Length of one traversal.
    pub fn cycle_length<S: Scalar>(&self, graph: &WeightedMultigraph<S>) -> S {
        sum(self.cycle.steps.iter().map(|s| graph.length(s.edge).clone()))
    }

    /// `multiplicity * cycle_length`.
    pub fn length<S: Scalar>(&self, graph: &WeightedMultigraph<S>) -> S {
        S::from_int(self.multiplicity as i64) * self.cycle_length(graph)
    }

    /// No vertex repeats before closing; a lone loop also counts.
    pub fn is_simple<S: Scalar>(&self, graph: &WeightedMultigraph<S>) -> bool {
        let Ok(vertices) = self.cycle.vertices(graph) else { return false };
        if self.cycle.steps.is_empty() || vertices.first() != vertices.last() {
            return false;
        }
        let inner = &vertices[..vertices.len() - 1];
        let mut seen = vec![false; graph.vertex_count()];
        inner.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }
}

/// Splits a circulation into simple cycles that each follow the sign of the
/// flow on every edge they use.
///
/// Starts at the lowest-index edge with residual flow and keeps leaving by the
/// lowest-index edge with residual flow in the forward direction of that flow;
/// the first repeated vertex closes a cycle, which is removed with the largest
/// possible multiplicity. Cycles are rotated to start at their lowest edge.
pub fn flow_decompose<S: Scalar>(graph: &WeightedMultigraph<S>, circulation: &Circulation) -> Result<Vec<CycleWithMultiplicity>> {
    check_conservation(graph, circulation)?;
    let mut residual = circulation.flows.clone();
    let mut position: Vec<Option<usize>> = vec![None; graph.vertex_count()];
    let mut out = Vec::new();

    let leaving = |residual: &[i64], e: usize, at: usize| -> Option<Step> {
        let edge = graph.edge(e);
        match residual[e] {
            0 => None,
            r if r > 0 && edge.tail == at => Some(Step::new(e, true)),
            r if r < 0 && edge.head == at => Some(Step::new(e, false)),
            _ => None,
        }
    };

    while let Some(first) = residual.iter().position(|&r| r != 0) {
        let first_step = Step::new(first, residual[first] > 0);
        let (from, mut current) = first_step.endpoints(graph);
        let mut visited = vec![from];
        let mut steps = vec![first_step];
        position[from] = Some(0);
        let cycle: Vec<Step> = loop {
            if graph.edge(steps[steps.len() - 1].edge).is_loop() {
                break vec![steps[steps.len() - 1]];
            }
            if let Some(p) = position[current] {
                break steps[p..].to_vec();
            }
            position[current] = Some(visited.len());
            visited.push(current);
            let step = graph
                .incident(current)
                .iter()
                .find_map(|&e| leaving(&residual, e, current))
                .expect("conservation guarantees an outgoing residual edge");
            steps.push(step);
            current = step.endpoints(graph).1;
        };
        for v in visited {
            position[v] = None;
        }

        let multiplicity = cycle.iter().map(|s| residual[s.edge].unsigned_abs()).min().expect("nonempty cycle");
        for s in &cycle {
            residual[s.edge] -= if s.forward { multiplicity as i64 } else { -(multiplicity as i64) };
        }
        let pivot = (0..cycle.len()).min_by_key(|&i| cycle[i].edge).expect("nonempty cycle");
        let mut rotated = cycle[pivot..].to_vec();
        rotated.extend_from_slice(&cycle[..pivot]);
        let start = rotated[0].endpoints(graph).0;
        out.push(CycleWithMultiplicity { cycle: ClosedWalk::new(start, rotated), multiplicity });
    }
    Ok(out)
}

/// Homology of one graph, anchored to one spanning forest.
#[derive(Debug, Clone)]
pub struct Homology<'g, S> {
    graph: &'g WeightedMultigraph<S>,
    forest: SpanningForest,
}

impl<'g, S: Scalar> Homology<'g, S> {
    /// Uses the deterministic DFS forest of `graph`.
    pub fn new(graph: &'g WeightedMultigraph<S>) -> Self {
        Self { graph, forest: SpanningForest::new(graph) }
    }

    pub fn with_forest(graph: &'g WeightedMultigraph<S>, forest: SpanningForest) -> Result<Self> {
        if forest.edge_count() != graph.edge_count() || forest.vertex_count() != graph.vertex_count() {
            return Err(CycleError::HostMismatch { expected: graph.edge_count(), found: forest.edge_count() });
        }
        Ok(Self { graph, forest })
    }

    pub fn graph(&self) -> &'g WeightedMultigraph<S> {
        self.graph
    }

    pub fn forest(&self) -> &SpanningForest {
        &self.forest
    }

    /// Rank of `H_1`, the number of chords.
    pub fn dimension(&self) -> usize {
        self.forest.chords().len()
    }

    fn check_class(&self, class: &HomologyClass) -> Result<()> {
        if class.dimension() != self.dimension() {
            return Err(CycleError::HostMismatch { expected: self.dimension(), found: class.dimension() });
        }
        Ok(())
    }

    pub fn zero(&self) -> HomologyClass {
        HomologyClass::zero(self.dimension())
    }

    /// Reads the chord values of a circulation.
    pub fn class_of(&self, circulation: &Circulation) -> Result<HomologyClass> {
        check_conservation(self.graph, circulation)?;
        Ok(HomologyClass { coords: self.forest.chords().iter().map(|&c| circulation.flow(c)).collect() })
    }

    pub fn class_of_walk(&self, walk: &ClosedWalk) -> Result<HomologyClass> {
        self.class_of(&walk_to_circulation(self.graph, walk)?)
    }

    /// The unique circulation with the given chord values.
    pub fn circulation_of(&self, class: &HomologyClass) -> Result<Circulation> {
        self.check_class(class)?;
        let mut flows = vec![0i64; self.graph.edge_count()];
        for (&chord, &value) in self.forest.chords().iter().zip(&class.coords) {
            flows[chord] = value;
        }
        // children before parents: every tree edge below v is already set
        for &v in self.forest.preorder().iter().rev() {
            let Some((parent_edge, _)) = self.forest.parent(v) else { continue };
            let mut outflow = 0i64;
            for &e in self.graph.incident(v) {
                if e == parent_edge {
                    continue;
                }
                let edge = self.graph.edge(e);
                if edge.tail == v {
                    outflow += flows[e];
                }
                if edge.head == v {
                    outflow -= flows[e];
                }
            }
            flows[parent_edge] = if self.graph.edge(parent_edge).tail == v { -outflow } else { outflow };
        }
        Ok(Circulation { flows })
    }

    /// Fundamental cycle of chord slot `slot` as an oriented walk starting at
    /// the chord's tail.
    pub fn fundamental_walk(&self, slot: usize) -> Result<ClosedWalk> {
        let chord = *self
            .forest
            .chords()
            .get(slot)
            .ok_or(CycleError::HostMismatch { expected: self.dimension(), found: slot + 1 })?;
        let edge = self.graph.edge(chord);
        let mut steps = vec![Step::new(chord, true)];
        steps.extend(self.forest.tree_path(self.graph, edge.head, edge.tail)?);
        Ok(ClosedWalk::new(edge.tail, steps))
    }

    /// `len(h)`, the length of the class's circulation.
    pub fn length(&self, class: &HomologyClass) -> Result<S> {
        Ok(length_of_circulation(self.graph, &self.circulation_of(class)?))
    }

    /// The minimal-length representative of a class and its length.
    pub fn min_length_representative(&self, class: &HomologyClass) -> Result<(Circulation, S)> {
        let circulation = self.circulation_of(class)?;
        let length = length_of_circulation(self.graph, &circulation);
        Ok((circulation, length))
    }

    pub fn flow_decompose(&self, circulation: &Circulation) -> Result<Vec<CycleWithMultiplicity>> {
        flow_decompose(self.graph, circulation)
    }

    /// `d ⪯ c`: on every edge the flow of `d` lies between 0 and that of `c`.
    pub fn is_subclass(&self, d: &HomologyClass, c: &HomologyClass) -> Result<bool> {
        let fd = self.circulation_of(d)?;
        let fc = self.circulation_of(c)?;
        Ok(fd.flows.iter().zip(&fc.flows).all(|(&a, &b)| if b >= 0 { 0 <= a && a <= b } else { b <= a && a <= 0 }))
    }

    /// `d ⪯ c` by its definition `len(c) = len(d) + len(c - d)`; only meaningful
    /// for exact scalars.
    pub fn is_subclass_by_length(&self, d: &HomologyClass, c: &HomologyClass) -> Result<bool> {
        self.check_class(d)?;
        Ok(self.length(c)? == self.length(d)? + self.length(&(c - d))?)
    }

    /// Nonzero with no subclass besides 0 and itself; equivalently, a unit flow
    /// around one simple cycle.
    pub fn is_primitive(&self, class: &HomologyClass) -> Result<bool> {
        let circulation = self.circulation_of(class)?;
        if circulation.is_zero() || circulation.flows.iter().any(|f| f.abs() > 1) {
            return Ok(false);
        }
        Ok(is_circuit(self.graph, &circulation.support()))
    }

    /// Unit class of an oriented cycle.
    pub fn class_of_cycle(&self, cycle: &CycleWithMultiplicity) -> Result<HomologyClass> {
        self.class_of(&cycle.unit_circulation(self.graph.edge_count()))
    }

    /// Economical split into primitive classes: the flow decomposition of the
    /// minimal circulation, with multiplicity-k cycles expanded into k copies.
    pub fn primitive_decompose(&self, class: &HomologyClass) -> Result<Vec<HomologyClass>> {
        let circulation = self.circulation_of(class)?;
        let mut out = Vec::new();
        for cycle in self.flow_decompose(&circulation)? {
            let unit = self.class_of_cycle(&cycle)?;
            out.extend(std::iter::repeat_n(unit, cycle.multiplicity as usize));
        }
        Ok(out)
    }

    /// `c = ⊕ parts`: the parts sum to `c` and their lengths add up to `len(c)`.
    pub fn check_oplus(&self, class: &HomologyClass, parts: &[HomologyClass]) -> Result<bool> {
        self.check_class(class)?;
        let mut total = self.zero();
        let mut length = S::zero();
        for part in parts {
            self.check_class(part)?;
            total = &total + part;
            length = length + self.length(part)?;
        }
        Ok(total == *class && length == self.length(class)?)
    }
}
