//! Area budgets for the `d_1` pseudo-metric on homology classes.
//!
//! Nothing here builds an area extension. Every function returns a closed-form
//! budget: disc fillings of area at most `(π/2) len²` per closed curve, the
//! cylinder closeness threshold, the squares inequality threshold, and the
//! Hausdorff lower bound for isometrically embedded circles. Areas are kept as
//! exact multiples of a power of π.

use std::fmt;

use crate::error::{CycleError, Result};
use crate::graph::{ClosedWalk, WeightedMultigraph};
use crate::homology::{CycleWithMultiplicity, Homology, HomologyClass};
use crate::scalar::{sum, Scalar};

/// The value `coeff · π^pi_power`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiMultiple<S> {
    pub coeff: S,
    pub pi_power: i32,
}

impl<S: Scalar> PiMultiple<S> {
    pub fn new(coeff: S, pi_power: i32) -> Self {
        Self { coeff, pi_power }
    }

    /// A plain rational, `π^0`.
    pub fn rational(coeff: S) -> Self {
        Self { coeff, pi_power: 0 }
    }

    pub fn approx(&self) -> f64 {
        self.coeff.approx() * std::f64::consts::PI.powi(self.pi_power)
    }
}

impl<S: Scalar> fmt::Display for PiMultiple<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_power {
            0 => write!(f, "{}", self.coeff.ratio_string()),
            1 => write!(f, "{}·π", self.coeff.ratio_string()),
            p => write!(f, "{}·π^{}", self.coeff.ratio_string(), p),
        }
    }
}

/// An area `pi_coeff · π`, always nonnegative.
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub struct AreaBudget<S> {
    pub pi_coeff: S,
}

impl<S: Scalar> AreaBudget<S> {
    pub fn zero() -> Self {
        Self { pi_coeff: S::zero() }
    }

    pub fn approx(&self) -> f64 {
        self.pi_coeff.approx() * std::f64::consts::PI
    }

    pub fn as_pi_multiple(&self) -> PiMultiple<S> {
        PiMultiple::new(self.pi_coeff.clone(), 1)
    }
}

impl<S: Scalar> fmt::Display for AreaBudget<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·π", self.pi_coeff.ratio_string())
    }
}

fn positive<S: Scalar>(name: &str, value: &S) -> Result<()> {
    if !(*value > S::zero()) {
        return Err(CycleError::InvalidParameter(format!("{name} must be positive, got {value}")));
    }
    Ok(())
}

/// Total area of one disc per closed curve, `Σ (π/2) len_i²`.
pub fn disc_area_budget<S: Scalar>(lengths: &[S]) -> Result<AreaBudget<S>> {
    if let Some(bad) = lengths.iter().find(|l| **l < S::zero()) {
        return Err(CycleError::InvalidParameter(format!("negative length {bad}")));
    }
    let squares = sum(lengths.iter().map(|l| l.clone() * l.clone()));
    Ok(AreaBudget { pi_coeff: squares / S::from_int(2) })
}

/// Upper bound on `d_1(h, 0)`: fill every piece of the primitive decomposition
/// with a disc.
pub fn d1_upper_bound<S: Scalar>(homology: &Homology<'_, S>, class: &HomologyClass) -> Result<AreaBudget<S>> {
    let lengths = homology
        .primitive_decompose(class)?
        .iter()
        .map(|piece| homology.length(piece))
        .collect::<Result<Vec<_>>>()?;
    disc_area_budget(&lengths)
}

/// `r = eps / total`: positive numbers below `r` summing to `total` have
/// squares summing to less than `eps`.
pub fn squares_threshold<S: Scalar>(total: &S, eps: &S) -> Result<S> {
    positive("total", total)?;
    positive("eps", eps)?;
    Ok(eps.clone() / total.clone())
}

/// Closeness threshold for the cylinder filling of two closed curves of length
/// below `l + eps`, with `eps` measured in units of π.
///
/// With `k >= 1` pieces each boundary circle of the cylinder is shorter than
/// `δ(2 + 2/k) <= 4δ` and their lengths sum to less than `3l`, so the discs
/// cost less than `(π/2)·4δ·3l = 6πlδ`. Taking `δ = eps/(6l)` keeps the excess
/// area below `eps·π`.
pub fn cylinder_delta<S: Scalar>(l: &S, eps: &S) -> Result<S> {
    positive("eps", eps)?;
    if !(eps < l) {
        return Err(CycleError::InvalidParameter(format!("eps must be smaller than l (eps = {eps}, l = {l})")));
    }
    Ok(eps.clone() / (S::from_int(6) * l.clone()))
}

/// Width bound `5δ` of the cylinder homotopy for constant-speed curves.
pub fn cylinder_width_bound<S: Scalar>(l: &S, eps: &S) -> Result<S> {
    Ok(S::from_int(5) * cylinder_delta(l, eps)?)
}

/// Lower bound `(c / 2π)²` on `d_1(class, 0)` for a circle of circumference
/// `c = a·π^p` that is isometrically embedded; returned as `(a²/4)·π^(2p-2)`.
pub fn circle_lower_bound<S: Scalar>(circumference: &PiMultiple<S>) -> Result<PiMultiple<S>> {
    positive("circumference", &circumference.coeff)?;
    let a = circumference.coeff.clone();
    Ok(PiMultiple::new(a.clone() * a / S::from_int(4), 2 * circumference.pi_power - 2))
}

/// True when distances along the cycle agree with graph distances for every
/// pair of cycle vertices.
pub fn is_isometric_cycle<S: Scalar>(graph: &WeightedMultigraph<S>, cycle: &CycleWithMultiplicity) -> bool {
    if !cycle.is_simple(graph) {
        return false;
    }
    let steps = &cycle.cycle.steps;
    let total = cycle.cycle_length(graph);
    let Ok(vertices) = cycle.cycle.vertices(graph) else { return false };
    let mut offsets = Vec::with_capacity(steps.len());
    let mut acc = S::zero();
    for s in steps {
        offsets.push(acc.clone());
        acc = acc + graph.length(s.edge).clone();
    }
    for i in 0..steps.len() {
        let Ok(dist) = graph.distances_from(vertices[i]) else { return false };
        for j in i + 1..steps.len() {
            let along = offsets[j].clone() - offsets[i].clone();
            let around = total.clone() - along.clone();
            let on_cycle = if around < along { around } else { along };
            if dist[vertices[j]].as_ref() != Some(&on_cycle) {
                return false;
            }
        }
    }
    true
}

/// [`circle_lower_bound`] for a graph cycle, or `None` (no certified lower
/// bound) when the cycle is not isometrically embedded.
pub fn certified_cycle_lower_bound<S: Scalar>(
    graph: &WeightedMultigraph<S>,
    cycle: &CycleWithMultiplicity,
) -> Result<Option<PiMultiple<S>>> {
    if !is_isometric_cycle(graph, cycle) {
        return Ok(None);
    }
    circle_lower_bound(&PiMultiple::rational(cycle.cycle_length(graph))).map(Some)
}

/// A closed walk cut into `k` consecutive nonempty pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct SubdividedPath<S> {
    walk: ClosedWalk,
    breakpoints: Vec<usize>,
    piece_lengths: Vec<S>,
    // first and last vertex of every piece
    piece_ends: Vec<(usize, usize)>,
}

impl<S: Scalar> SubdividedPath<S> {
    /// `breakpoints` are the step indices where pieces begin: they start at 0
    /// and increase strictly. An empty walk has the single piece `[0]`.
    pub fn new(graph: &WeightedMultigraph<S>, walk: ClosedWalk, breakpoints: Vec<usize>) -> Result<Self> {
        walk.validate_closed(graph)?;
        let vertices = walk.vertices(graph)?;
        let steps = walk.steps.len();
        let ordered = breakpoints.first() == Some(&0)
            && breakpoints.windows(2).all(|w| w[0] < w[1])
            && breakpoints.last().is_some_and(|&b| b < steps.max(1));
        if !ordered {
            return Err(CycleError::InvalidParameter(format!(
                "breakpoints {breakpoints:?} must start at 0 and increase strictly below {steps}"
            )));
        }
        let mut piece_lengths = Vec::with_capacity(breakpoints.len());
        let mut piece_ends = Vec::with_capacity(breakpoints.len());
        for (i, &start) in breakpoints.iter().enumerate() {
            let end = breakpoints.get(i + 1).copied().unwrap_or(steps);
            piece_lengths.push(sum(walk.steps[start..end].iter().map(|s| graph.length(s.edge).clone())));
            piece_ends.push((vertices[start], vertices[end]));
        }
        Ok(Self { walk, breakpoints, piece_lengths, piece_ends })
    }

    /// One piece per edge traversal.
    pub fn per_edge(graph: &WeightedMultigraph<S>, walk: ClosedWalk) -> Result<Self> {
        let breakpoints = (0..walk.steps.len().max(1)).collect();
        Self::new(graph, walk, breakpoints)
    }

    pub fn walk(&self) -> &ClosedWalk {
        &self.walk
    }

    pub fn breakpoints(&self) -> &[usize] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn piece_lengths(&self) -> &[S] {
        &self.piece_lengths
    }

    pub fn length(&self) -> S {
        sum(self.piece_lengths.iter().cloned())
    }
}

/// Which δ-closeness requirement failed first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CloseFailure {
    TotalLength,
    PieceLength { piece: usize },
    PrefixLength { piece: usize },
    EndpointDistance { piece: usize },
}

fn abs_diff<S: Scalar>(a: &S, b: &S) -> S {
    (a.clone() - b.clone()).abs()
}

/// First failed δ-closeness requirement, or `None` when `a` and `b` are δ-close
/// under `distance`.
pub fn delta_close_failure<S: Scalar>(
    a: &SubdividedPath<S>,
    b: &SubdividedPath<S>,
    delta: &S,
    distance: impl Fn(usize, usize) -> S,
) -> Result<Option<CloseFailure>> {
    let k = a.pieces();
    if k != b.pieces() {
        return Err(CycleError::HostMismatch { expected: k, found: b.pieces() });
    }
    positive("delta", delta)?;
    if !(abs_diff(&a.length(), &b.length()) < *delta) {
        return Ok(Some(CloseFailure::TotalLength));
    }
    let endpoint_tolerance = delta.clone() / S::from_int(k as i64);
    let (mut prefix_a, mut prefix_b) = (S::zero(), S::zero());
    for piece in 0..k {
        let (la, lb) = (&a.piece_lengths[piece], &b.piece_lengths[piece]);
        if !(*la < *delta && *lb < *delta) {
            return Ok(Some(CloseFailure::PieceLength { piece }));
        }
        prefix_a = prefix_a + la.clone();
        prefix_b = prefix_b + lb.clone();
        if !(abs_diff(&prefix_a, &prefix_b) < *delta) {
            return Ok(Some(CloseFailure::PrefixLength { piece }));
        }
        let ((p, q), (p2, q2)) = (a.piece_ends[piece], b.piece_ends[piece]);
        if !(distance(p, p2) < endpoint_tolerance && distance(q, q2) < endpoint_tolerance) {
            return Ok(Some(CloseFailure::EndpointDistance { piece }));
        }
    }
    Ok(None)
}

/// Whether two subdivided closed walks are δ-close.
pub fn delta_close_check<S: Scalar>(
    a: &SubdividedPath<S>,
    b: &SubdividedPath<S>,
    delta: &S,
    distance: impl Fn(usize, usize) -> S,
) -> Result<bool> {
    Ok(delta_close_failure(a, b, delta, distance)?.is_none())
}

/// What is known about the terms beyond the materialized prefix of a
/// σ-representative.
#[derive(Debug, Clone, PartialEq)]
pub enum TailBound<S> {
    /// The representative is finite.
    Finite,
    /// Certified upper bound on the sum of squared lengths beyond the prefix.
    SquareSum(S),
    /// No finite bound is known.
    Unbounded,
}

/// One member of a σ-representative.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaTerm<S> {
    /// The cycle, when the term comes from a graph; length-only streams leave
    /// it empty.
    pub cycle: Option<CycleWithMultiplicity>,
    pub length: S,
    /// Exhaustion stage in which the cycle lives.
    pub truncation: usize,
}

/// A sequence of 1-cycles whose partial sums are meant to form a Cauchy
/// sequence; stored as a finite prefix plus a bound on the rest.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaRepresentative<S> {
    terms: Vec<SigmaTerm<S>>,
    tail: TailBound<S>,
}

impl<S: Scalar> SigmaRepresentative<S> {
    pub fn new(terms: Vec<SigmaTerm<S>>, tail: TailBound<S>) -> Result<Self> {
        for (i, term) in terms.iter().enumerate() {
            positive(&format!("term {i} length"), &term.length)?;
        }
        if terms.windows(2).any(|w| w[0].truncation > w[1].truncation) {
            return Err(CycleError::InvalidParameter("truncation indices must be non-decreasing".into()));
        }
        if let TailBound::SquareSum(bound) = &tail {
            if *bound < S::zero() {
                return Err(CycleError::InvalidParameter(format!("negative tail bound {bound}")));
            }
        }
        Ok(Self { terms, tail })
    }

    /// Terms without cycles, all at truncation 1.
    pub fn from_lengths(lengths: Vec<S>, tail: TailBound<S>) -> Result<Self> {
        let terms = lengths.into_iter().map(|length| SigmaTerm { cycle: None, length, truncation: 1 }).collect();
        Self::new(terms, tail)
    }

    /// Terms from graph cycles living in stage `truncation`.
    pub fn from_cycles(
        graph: &WeightedMultigraph<S>,
        cycles: Vec<CycleWithMultiplicity>,
        truncation: usize,
        tail: TailBound<S>,
    ) -> Result<Self> {
        let terms = cycles
            .into_iter()
            .map(|c| SigmaTerm { length: c.length(graph), cycle: Some(c), truncation })
            .collect();
        Self::new(terms, tail)
    }

    pub fn terms(&self) -> &[SigmaTerm<S>] {
        &self.terms
    }

    pub fn tail(&self) -> &TailBound<S> {
        &self.tail
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lengths(&self) -> Vec<S> {
        self.terms.iter().map(|t| t.length.clone()).collect()
    }

    /// Sum of the prefix lengths.
    pub fn prefix_length(&self) -> S {
        sum(self.terms.iter().map(|t| t.length.clone()))
    }
}

/// Disc budget of every term after the first `n`, including the certified
/// tail; `None` when the tail is unbounded.
pub fn sigma_tail_bound<S: Scalar>(rep: &SigmaRepresentative<S>, n: usize) -> Result<Option<AreaBudget<S>>> {
    if n > rep.len() {
        return Err(CycleError::InvalidParameter(format!("prefix index {n} beyond {} terms", rep.len())));
    }
    let prefix = disc_area_budget(&rep.lengths()[n..])?;
    Ok(match &rep.tail {
        TailBound::Finite => Some(prefix),
        TailBound::SquareSum(bound) => {
            Some(AreaBudget { pi_coeff: prefix.pi_coeff + bound.clone() / S::from_int(2) })
        }
        TailBound::Unbounded => None,
    })
}

/// Per-ε witness of [`cauchy_verify`].
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyReport<S> {
    /// For each ε of the schedule, the first prefix index whose tail budget is
    /// below ε (as a multiple of π).
    pub witnesses: Vec<(S, Option<usize>)>,
}

impl<S> CauchyReport<S> {
    pub fn holds(&self) -> bool {
        self.witnesses.iter().all(|(_, w)| w.is_some())
    }
}

/// Checks that for every ε of a strictly decreasing positive schedule some tail
/// of the representative fits in an area budget below `ε·π`.
pub fn cauchy_report<S: Scalar>(rep: &SigmaRepresentative<S>, schedule: &[S]) -> Result<CauchyReport<S>> {
    for eps in schedule {
        positive("schedule entry", eps)?;
    }
    if schedule.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(CycleError::InvalidParameter("schedule must be strictly decreasing".into()));
    }
    let tails = (0..=rep.len()).map(|n| sigma_tail_bound(rep, n)).collect::<Result<Vec<_>>>()?;
    let witnesses = schedule
        .iter()
        .map(|eps| {
            let hit = tails.iter().position(|t| t.as_ref().is_some_and(|b| b.pi_coeff < *eps));
            (eps.clone(), hit)
        })
        .collect();
    Ok(CauchyReport { witnesses })
}

pub fn cauchy_verify<S: Scalar>(rep: &SigmaRepresentative<S>, schedule: &[S]) -> Result<bool> {
    Ok(cauchy_report(rep, schedule)?.holds())
}

/// Outcome of [`fragmentability_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct FragmentabilityReport<S> {
    pub fragmentable: bool,
    /// The primitive decomposition used as certificate family.
    pub pieces: Vec<HomologyClass>,
    pub piece_lengths: Vec<S>,
    /// Shortest cycle through any edge carrying flow; below this δ only the
    /// zero class splits into pieces shorter than δ.
    pub threshold: Option<S>,
}

/// Whether the primitive decomposition of `class` has all pieces shorter than
/// `delta`.
pub fn fragmentability_report<S: Scalar>(
    homology: &Homology<'_, S>,
    class: &HomologyClass,
    delta: &S,
) -> Result<FragmentabilityReport<S>> {
    positive("delta", delta)?;
    let pieces = homology.primitive_decompose(class)?;
    let piece_lengths = pieces.iter().map(|p| homology.length(p)).collect::<Result<Vec<_>>>()?;
    let fragmentable = piece_lengths.iter().all(|l| l < delta);
    let graph = homology.graph();
    let threshold = homology
        .circulation_of(class)?
        .support()
        .iter()
        .filter_map(|e| graph.shortest_cycle_through(e))
        .fold(None, |best: Option<S>, c| match best {
            Some(b) if b <= c => Some(b),
            _ => Some(c),
        });
    Ok(FragmentabilityReport { fragmentable, pieces, piece_lengths, threshold })
}
