//! Example spaces as weighted graphs: the owl, the ladder, the comb, the
//! sine-comb and discretized circles, plus exhaustions of the infinite ones.
//!
//! Circles are `k`-gons (default 4) whose perimeter is the circle's length.
//! The comb uses teeth of length 1 and spine segments of length `2^-i`.

use crate::error::{CycleError, Result};
use crate::graph::{ClosedWalk, Exhaustion, Step, WeightedMultigraph};
use crate::homology::{CycleWithMultiplicity, Homology, HomologyClass};
use crate::metric::{SigmaRepresentative, SigmaTerm, TailBound};
use crate::scalar::Scalar;

pub const DEFAULT_CIRCLE_SIDES: usize = 4;

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(CycleError::InvalidParameter(msg.to_string()))
    }
}

/// Unit-length owl: two triangles `u x v` and `u v y` sharing the middle edge
/// `uv`. Vertices `u=0, v=1, x=2, y=3`; edges `uv, ux, xv, vy, yu`.
#[derive(Debug, Clone)]
pub struct Owl<S> {
    pub graph: WeightedMultigraph<S>,
    /// Left triangle `u -> x -> v -> u`.
    pub sigma: ClosedWalk,
    /// Right triangle `u -> v -> y -> u`; the middle edge cancels in `σ + τ`.
    pub tau: ClosedWalk,
}

pub const OWL_MIDDLE_EDGE: usize = 0;

pub fn make_owl<S: Scalar>() -> Owl<S> {
    let one = || S::one();
    let graph = WeightedMultigraph::new(4, vec![(0, 1, one()), (0, 2, one()), (2, 1, one()), (1, 3, one()), (3, 0, one())])
        .expect("owl is valid");
    let sigma = ClosedWalk::new(0, vec![Step::new(1, true), Step::new(2, true), Step::new(0, false)]);
    let tau = ClosedWalk::new(0, vec![Step::new(0, true), Step::new(3, true), Step::new(4, true)]);
    Owl { graph, sigma, tau }
}

impl<S: Scalar> Owl<S> {
    /// `σ` followed by `τ`, a chain of length 6 in the class of the outer cycle.
    pub fn sigma_then_tau(&self) -> ClosedWalk {
        self.sigma.concat(&self.tau).expect("both based at u")
    }
}

/// Finite ladder with `n` squares. Square `i` has rungs of length `2^-(i-1)`
/// and `2^-i` and horizontal sides of length `2^-(i+1)`, so its perimeter is
/// `4·2^-i` and the total length stays below 4.
#[derive(Debug, Clone)]
pub struct Ladder<S> {
    pub graph: WeightedMultigraph<S>,
    /// Counter-clockwise boundary of every square, each starting at its
    /// top-left corner.
    pub squares: Vec<ClosedWalk>,
    /// Winds every square once, walks back, then goes once around the outer
    /// boundary clockwise.
    pub sigma: ClosedWalk,
}

fn ladder_top(i: usize) -> usize {
    2 * i
}

fn ladder_bottom(i: usize) -> usize {
    2 * i + 1
}

// edge indices: rung 0 first, then (top_i, bottom_i, rung_i) per square
fn ladder_rung(i: usize) -> usize {
    3 * i
}

fn ladder_top_edge(i: usize) -> usize {
    3 * i - 2
}

fn ladder_bottom_edge(i: usize) -> usize {
    3 * i - 1
}

pub fn make_ladder<S: Scalar>(n: usize) -> Result<Ladder<S>> {
    require(n >= 1, "ladder needs at least one square")?;
    let mut edges = vec![(ladder_bottom(0), ladder_top(0), S::one())];
    for i in 1..=n {
        let side = S::pow2_inv(i as u32 + 1);
        edges.push((ladder_top(i), ladder_top(i - 1), side.clone()));
        edges.push((ladder_bottom(i - 1), ladder_bottom(i), side));
        edges.push((ladder_bottom(i), ladder_top(i), S::pow2_inv(i as u32)));
    }
    let graph = WeightedMultigraph::new(2 * (n + 1), edges)?;

    let square = |i: usize| {
        vec![
            Step::new(ladder_rung(i - 1), false),
            Step::new(ladder_bottom_edge(i), true),
            Step::new(ladder_rung(i), true),
            Step::new(ladder_top_edge(i), true),
        ]
    };
    let squares: Vec<ClosedWalk> = (1..=n).map(|i| ClosedWalk::new(ladder_top(i - 1), square(i))).collect();

    let mut steps = Vec::new();
    for i in 1..=n {
        steps.extend(square(i));
        if i < n {
            steps.push(Step::new(ladder_top_edge(i), false));
        }
    }
    for i in (1..n).rev() {
        steps.push(Step::new(ladder_top_edge(i), true));
    }
    // clockwise outer boundary from t_0
    for i in 1..=n {
        steps.push(Step::new(ladder_top_edge(i), false));
    }
    steps.push(Step::new(ladder_rung(n), false));
    for i in (1..=n).rev() {
        steps.push(Step::new(ladder_bottom_edge(i), false));
    }
    steps.push(Step::new(ladder_rung(0), true));
    let sigma = ClosedWalk::new(ladder_top(0), steps);
    Ok(Ladder { graph, squares, sigma })
}

/// Appends a `sides`-gon of the given perimeter through `anchor`, returning
/// the circle walk from `anchor`.
fn attach_circle<S: Scalar>(
    edges: &mut Vec<(usize, usize, S)>,
    vertex_count: &mut usize,
    anchor: usize,
    perimeter: S,
    sides: usize,
) -> ClosedWalk {
    let side = perimeter / S::from_int(sides as i64);
    let mut steps = Vec::with_capacity(sides);
    let mut previous = anchor;
    for j in 0..sides {
        let next = if j + 1 == sides {
            anchor
        } else {
            *vertex_count += 1;
            *vertex_count - 1
        };
        steps.push(Step::new(edges.len(), true));
        edges.push((previous, next, side.clone()));
        previous = next;
    }
    ClosedWalk::new(anchor, steps)
}

fn unit_cycle(walk: ClosedWalk) -> CycleWithMultiplicity {
    CycleWithMultiplicity { cycle: walk, multiplicity: 1 }
}

/// `Σ_{i>n} (2^-i)² = 4^-n / 3`.
fn geometric_square_tail<S: Scalar>(n: usize) -> S {
    S::pow2_inv(2 * n as u32) / S::from_int(3)
}

/// Comb truncated after `n` teeth: spine segment `i` of length `2^-i`, a tooth
/// of length 1 hanging from its right end, and a circle of length `2^-i` at
/// the foot of the tooth.
#[derive(Debug, Clone)]
pub struct Comb<S> {
    pub graph: WeightedMultigraph<S>,
    /// `τ_i`, once around circle `i`.
    pub circles: Vec<CycleWithMultiplicity>,
    /// `(τ_i)` with the exact tail of the infinite comb.
    pub representative: SigmaRepresentative<S>,
    /// Along the spine, down and up every tooth, around every circle, and
    /// back along the spine.
    pub connected_walk: ClosedWalk,
}

pub fn make_comb<S: Scalar>(n: usize) -> Result<Comb<S>> {
    make_comb_with_sides(n, DEFAULT_CIRCLE_SIDES)
}

pub fn make_comb_with_sides<S: Scalar>(n: usize, sides: usize) -> Result<Comb<S>> {
    require(n >= 1, "comb needs at least one tooth")?;
    require(sides >= 1, "circles need at least one side")?;
    let mut edges = Vec::new();
    let mut vertex_count = 1;
    let mut circles = Vec::with_capacity(n);
    let mut walk = Vec::new();
    let mut spine = Vec::with_capacity(n);
    let mut previous = 0;
    for i in 1..=n {
        let joint = vertex_count;
        let foot = vertex_count + 1;
        vertex_count += 2;
        spine.push(edges.len());
        walk.push(Step::new(edges.len(), true));
        edges.push((previous, joint, S::pow2_inv(i as u32)));
        let tooth = edges.len();
        edges.push((joint, foot, S::one()));
        let circle = attach_circle(&mut edges, &mut vertex_count, foot, S::pow2_inv(i as u32), sides);
        walk.push(Step::new(tooth, true));
        walk.extend_from_slice(&circle.steps);
        walk.push(Step::new(tooth, false));
        circles.push(unit_cycle(circle));
        previous = joint;
    }
    walk.extend(spine.iter().rev().map(|&e| Step::new(e, false)));
    let graph = WeightedMultigraph::new(vertex_count, edges)?;
    let terms = circles
        .iter()
        .enumerate()
        .map(|(i, c)| SigmaTerm { cycle: Some(c.clone()), length: c.length(&graph), truncation: i + 1 })
        .collect();
    let representative = SigmaRepresentative::new(terms, TailBound::SquareSum(geometric_square_tail(n)))?;
    Ok(Comb { graph, circles, representative, connected_walk: ClosedWalk::new(0, walk) })
}

/// A path `u_1 ... u_n` with unit segments standing in for the sine curve, and
/// a circle of length `2^-i` attached at `u_i`.
#[derive(Debug, Clone)]
pub struct SineComb<S> {
    pub graph: WeightedMultigraph<S>,
    pub circles: Vec<CycleWithMultiplicity>,
    /// `⟦σ_i⟧`, the class of circle `i`.
    pub classes: Vec<HomologyClass>,
    /// `(σ_i)` as a length stream with the exact tail.
    pub representative: SigmaRepresentative<S>,
}

pub fn make_sine_comb<S: Scalar>(n: usize) -> Result<SineComb<S>> {
    make_sine_comb_with_sides(n, DEFAULT_CIRCLE_SIDES)
}

pub fn make_sine_comb_with_sides<S: Scalar>(n: usize, sides: usize) -> Result<SineComb<S>> {
    require(n >= 1, "sine comb needs at least one circle")?;
    require(sides >= 1, "circles need at least one side")?;
    let mut edges = Vec::new();
    let mut vertex_count = 0;
    let mut circles = Vec::with_capacity(n);
    let mut previous = None;
    for i in 1..=n {
        let anchor = vertex_count;
        vertex_count += 1;
        if let Some(p) = previous {
            edges.push((p, anchor, S::one()));
        }
        let circle = attach_circle(&mut edges, &mut vertex_count, anchor, S::pow2_inv(i as u32), sides);
        circles.push(unit_cycle(circle));
        previous = Some(anchor);
    }
    let graph = WeightedMultigraph::new(vertex_count, edges)?;
    let homology = Homology::new(&graph);
    let classes = circles.iter().map(|c| homology.class_of_cycle(c)).collect::<Result<Vec<_>>>()?;
    let terms = circles
        .iter()
        .enumerate()
        .map(|(i, c)| SigmaTerm { cycle: Some(c.clone()), length: c.length(&graph), truncation: i + 1 })
        .collect();
    let representative = SigmaRepresentative::new(terms, TailBound::SquareSum(geometric_square_tail(n)))?;
    Ok(SineComb { graph, circles, classes, representative })
}

/// `k`-gon with every side `total_length / k`; `k = 1` is a single loop.
pub fn make_cycle<S: Scalar>(k: usize, total_length: S) -> Result<WeightedMultigraph<S>> {
    require(k >= 1, "cycle needs at least one edge")?;
    require(total_length > S::zero(), "cycle length must be positive")?;
    let side = total_length / S::from_int(k as i64);
    WeightedMultigraph::new(k, (0..k).map(|i| (i, (i + 1) % k, side.clone())).collect())
}

/// The oriented cycle `0 -> 1 -> ... -> 0` of [`make_cycle`].
pub fn cycle_walk(k: usize) -> ClosedWalk {
    ClosedWalk::new(0, (0..k).map(|e| Step::new(e, true)).collect())
}

/// Exhaustions whose stages extend each other by appending vertices and edges,
/// so every step map is the inclusion of a prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefixExhaustion {
    Ladder,
    Comb { sides: usize },
    SineComb { sides: usize },
}

impl<S: Scalar> Exhaustion<S> for PrefixExhaustion {
    fn stage(&self, n: usize) -> Result<WeightedMultigraph<S>> {
        require(n >= 1, "exhaustion stages start at 1")?;
        match *self {
            Self::Ladder => Ok(make_ladder(n)?.graph),
            Self::Comb { sides } => Ok(make_comb_with_sides(n, sides)?.graph),
            Self::SineComb { sides } => Ok(make_sine_comb_with_sides(n, sides)?.graph),
        }
    }

    fn edge_map(&self, n: usize) -> Result<Vec<usize>> {
        Ok((0..Exhaustion::<S>::stage(self, n)?.edge_count()).collect())
    }

    fn vertex_map(&self, n: usize) -> Result<Vec<usize>> {
        Ok((0..Exhaustion::<S>::stage(self, n)?.vertex_count()).collect())
    }
}

/// Named example space with its distinguished classes and walks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceRecipe {
    Owl,
    Ladder { n: usize },
    Comb { n: usize, sides: usize },
    SineComb { n: usize, sides: usize },
    Cycle { k: usize, total_length: String },
}

/// A built recipe: graph plus named classes and walks.
#[derive(Debug, Clone)]
pub struct Space<S> {
    pub name: String,
    pub graph: WeightedMultigraph<S>,
    pub classes: Vec<(String, HomologyClass)>,
    pub walks: Vec<(String, ClosedWalk)>,
    pub representative: Option<SigmaRepresentative<S>>,
}

impl SpaceRecipe {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Owl => "owl",
            Self::Ladder { .. } => "ladder",
            Self::Comb { .. } => "comb",
            Self::SineComb { .. } => "sine-comb",
            Self::Cycle { .. } => "cycle",
        }
    }

    pub fn build<S: Scalar>(&self) -> Result<Space<S>> {
        let name = self.name().to_string();
        match self {
            Self::Owl => {
                let owl = make_owl::<S>();
                let h = Homology::new(&owl.graph);
                let sigma = h.class_of_walk(&owl.sigma)?;
                let tau = h.class_of_walk(&owl.tau)?;
                let sum = &sigma + &tau;
                Ok(Space {
                    name,
                    classes: vec![("sigma".into(), sigma), ("tau".into(), tau), ("sigma+tau".into(), sum)],
                    walks: vec![("sigma".into(), owl.sigma.clone()), ("tau".into(), owl.tau.clone())],
                    graph: owl.graph,
                    representative: None,
                })
            }
            Self::Ladder { n } => {
                let ladder = make_ladder::<S>(*n)?;
                let h = Homology::new(&ladder.graph);
                let mut classes = Vec::new();
                for (i, sq) in ladder.squares.iter().enumerate() {
                    classes.push((format!("square{}", i + 1), h.class_of_walk(sq)?));
                }
                let all = classes.iter().fold(h.zero(), |acc, (_, c)| &acc + c);
                classes.push(("all-squares".into(), all));
                classes.push(("sigma".into(), h.class_of_walk(&ladder.sigma)?));
                Ok(Space {
                    name,
                    classes,
                    walks: vec![("sigma".into(), ladder.sigma.clone())],
                    graph: ladder.graph,
                    representative: None,
                })
            }
            Self::Comb { n, sides } => {
                let comb = make_comb_with_sides::<S>(*n, *sides)?;
                let h = Homology::new(&comb.graph);
                let mut classes = Vec::new();
                for (i, c) in comb.circles.iter().enumerate() {
                    classes.push((format!("tau{}", i + 1), h.class_of_cycle(c)?));
                }
                let all = classes.iter().fold(h.zero(), |acc, (_, c)| &acc + c);
                classes.push(("sum".into(), all));
                let mut walks: Vec<(String, ClosedWalk)> = comb
                    .circles
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (format!("tau{}", i + 1), c.cycle.clone()))
                    .collect();
                walks.push(("connected".into(), comb.connected_walk.clone()));
                Ok(Space { name, classes, walks, graph: comb.graph, representative: Some(comb.representative) })
            }
            Self::SineComb { n, sides } => {
                let sine = make_sine_comb_with_sides::<S>(*n, *sides)?;
                let classes =
                    sine.classes.iter().enumerate().map(|(i, c)| (format!("sigma{}", i + 1), c.clone())).collect();
                let walks =
                    sine.circles.iter().enumerate().map(|(i, c)| (format!("sigma{}", i + 1), c.cycle.clone())).collect();
                Ok(Space { name, classes, walks, graph: sine.graph, representative: Some(sine.representative) })
            }
            Self::Cycle { k, total_length } => {
                let graph = make_cycle::<S>(*k, S::parse_ratio(total_length)?)?;
                let walk = cycle_walk(*k);
                let class = Homology::new(&graph).class_of_walk(&walk)?;
                Ok(Space {
                    name,
                    classes: vec![("circle".into(), class)],
                    walks: vec![("circle".into(), walk)],
                    graph,
                    representative: None,
                })
            }
        }
    }
}
