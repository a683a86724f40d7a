//! JSON interchange for graphs, walks, edge sets, circulations, classes,
//! budgets, σ-representatives and space manifests.
//!
//! Lengths are decimal-free rational strings. Every numeric result carries an
//! exactness marker next to its float approximation.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CycleError, Result};
use crate::graph::{ClosedWalk, Step, WeightedMultigraph};
use crate::homology::{Circulation, CycleWithMultiplicity, HomologyClass};
use crate::metric::{AreaBudget, PiMultiple, SigmaRepresentative, TailBound};
use crate::scalar::Scalar;
use crate::spaces::{Space, SpaceRecipe};
use crate::z2::EdgeSetZ2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
    pub length: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: usize,
    pub edges: Vec<EdgeJson>,
}

impl GraphJson {
    pub fn from_graph<S: Scalar>(graph: &WeightedMultigraph<S>) -> Self {
        let edges = graph
            .edges()
            .iter()
            .enumerate()
            .map(|(id, e)| EdgeJson { id, tail: e.tail, head: e.head, length: e.length.ratio_string() })
            .collect();
        Self { vertices: graph.vertex_count(), edges }
    }

    /// Edge ids must be a permutation of `0..m`; edges are placed by id.
    pub fn to_graph<S: Scalar>(&self) -> Result<WeightedMultigraph<S>> {
        let m = self.edges.len();
        let mut slots: Vec<Option<(usize, usize, S)>> = (0..m).map(|_| None).collect();
        for e in &self.edges {
            if e.id >= m || slots[e.id].is_some() {
                return Err(CycleError::Parse(format!("edge ids must be 0..{m} without repeats (got {})", e.id)));
            }
            slots[e.id] = Some((e.tail, e.head, S::parse_ratio(&e.length)?));
        }
        WeightedMultigraph::new(self.vertices, slots.into_iter().map(|s| s.expect("filled")).collect())
    }
}

fn parse_err(err: serde_json::Error) -> CycleError {
    CycleError::Parse(err.to_string())
}

pub fn parse_graph<S: Scalar>(text: &str) -> Result<WeightedMultigraph<S>> {
    serde_json::from_str::<GraphJson>(text).map_err(parse_err)?.to_graph()
}

pub fn graph_to_value<S: Scalar>(graph: &WeightedMultigraph<S>) -> Value {
    serde_json::to_value(GraphJson::from_graph(graph)).expect("plain data")
}

pub fn graph_to_string<S: Scalar>(graph: &WeightedMultigraph<S>) -> String {
    serde_json::to_string_pretty(&GraphJson::from_graph(graph)).expect("plain data")
}

pub fn exactness<S: Scalar>() -> &'static str {
    if S::EXACT {
        "exact"
    } else {
        "float-approximation"
    }
}

/// `{"value": "p/q", "approx": x, "exactness": ...}`.
pub fn length_value<S: Scalar>(x: &S) -> Value {
    json!({ "value": x.ratio_string(), "approx": x.approx(), "exactness": exactness::<S>() })
}

/// `{"value": "q·π", "approx": x, "exactness": ...}`.
pub fn budget_value<S: Scalar>(budget: &AreaBudget<S>) -> Value {
    pi_value(&budget.as_pi_multiple())
}

pub fn pi_value<S: Scalar>(x: &PiMultiple<S>) -> Value {
    json!({ "value": x.to_string(), "approx": x.approx(), "exactness": exactness::<S>() })
}

pub fn walk_to_value(walk: &ClosedWalk) -> Value {
    let steps: Vec<Value> = walk.steps.iter().map(|s| json!({ "edge": s.edge, "forward": s.forward })).collect();
    json!({ "start": walk.start, "steps": steps })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StepJson {
    edge: usize,
    forward: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WalkJson {
    start: usize,
    steps: Vec<StepJson>,
}

pub fn walk_from_value(value: &Value) -> Result<ClosedWalk> {
    let w: WalkJson = serde_json::from_value(value.clone()).map_err(parse_err)?;
    Ok(ClosedWalk::new(w.start, w.steps.into_iter().map(|s| Step::new(s.edge, s.forward)).collect()))
}

pub fn edge_set_to_value(set: &EdgeSetZ2) -> Value {
    json!(set.iter().collect::<Vec<_>>())
}

/// Sorted or unsorted index array; repeated indices are rejected.
pub fn edge_set_from_value(value: &Value, edge_count: usize) -> Result<EdgeSetZ2> {
    let edges: Vec<usize> = serde_json::from_value(value.clone()).map_err(parse_err)?;
    let mut set = EdgeSetZ2::empty(edge_count);
    for e in edges {
        if e >= edge_count {
            return Err(CycleError::UnknownEdge { step: 0, edge: e });
        }
        if set.contains(e) {
            return Err(CycleError::Parse(format!("edge {e} listed twice")));
        }
        set.insert(e);
    }
    Ok(set)
}

/// Nonzero entries only, ascending by edge.
pub fn circulation_to_value(c: &Circulation) -> Value {
    let entries: Vec<Value> = c
        .flows()
        .iter()
        .enumerate()
        .filter(|(_, &f)| f != 0)
        .map(|(e, &f)| json!({ "edge": e, "flow": f }))
        .collect();
    Value::Array(entries)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FlowJson {
    edge: usize,
    flow: i64,
}

pub fn circulation_from_value(value: &Value, edge_count: usize) -> Result<Circulation> {
    let entries: Vec<FlowJson> = serde_json::from_value(value.clone()).map_err(parse_err)?;
    let mut flows = vec![0i64; edge_count];
    for FlowJson { edge, flow } in entries {
        if edge >= edge_count {
            return Err(CycleError::UnknownEdge { step: 0, edge });
        }
        flows[edge] += flow;
    }
    Ok(Circulation::from_flows(flows))
}

pub fn class_to_value(class: &HomologyClass) -> Value {
    json!(class.coords())
}

pub fn class_from_value(value: &Value) -> Result<HomologyClass> {
    Ok(HomologyClass::new(serde_json::from_value(value.clone()).map_err(parse_err)?))
}

pub fn cycle_to_value<S: Scalar>(graph: &WeightedMultigraph<S>, cycle: &CycleWithMultiplicity) -> Value {
    json!({
        "walk": walk_to_value(&cycle.cycle),
        "multiplicity": cycle.multiplicity,
        "length": length_value(&cycle.length(graph)),
    })
}

pub fn cycle_from_value(value: &Value) -> Result<CycleWithMultiplicity> {
    let walk = value.get("walk").ok_or_else(|| CycleError::Parse("cycle without walk".into()))?;
    let multiplicity = value
        .get("multiplicity")
        .and_then(Value::as_u64)
        .ok_or_else(|| CycleError::Parse("cycle without multiplicity".into()))?;
    Ok(CycleWithMultiplicity { cycle: walk_from_value(walk)?, multiplicity })
}

pub fn tail_to_value<S: Scalar>(tail: &TailBound<S>) -> Value {
    match tail {
        TailBound::Finite => json!({ "kind": "finite" }),
        TailBound::SquareSum(b) => json!({ "kind": "square-sum", "bound": length_value(b) }),
        TailBound::Unbounded => json!({ "kind": "unbounded" }),
    }
}

/// Ordered terms with their lengths and truncation stage.
pub fn representative_to_value<S: Scalar>(graph: &WeightedMultigraph<S>, rep: &SigmaRepresentative<S>) -> Value {
    let terms: Vec<Value> = rep
        .terms()
        .iter()
        .map(|t| {
            json!({
                "cycle": t.cycle.as_ref().map(|c| cycle_to_value(graph, c)),
                "length": length_value(&t.length),
                "truncation": t.truncation,
            })
        })
        .collect();
    json!({
        "terms": terms,
        "prefix_length": length_value(&rep.prefix_length()),
        "tail": tail_to_value(rep.tail()),
    })
}

pub fn recipe_to_value(recipe: &SpaceRecipe) -> Value {
    let params = match recipe {
        SpaceRecipe::Owl => json!({}),
        SpaceRecipe::Ladder { n } => json!({ "n": n }),
        SpaceRecipe::Comb { n, sides } | SpaceRecipe::SineComb { n, sides } => json!({ "n": n, "sides": sides }),
        SpaceRecipe::Cycle { k, total_length } => json!({ "k": k, "total_length": total_length }),
    };
    json!({ "name": recipe.name(), "params": params })
}

/// Graph plus the manifest of named classes, walks and σ-representative.
pub fn space_to_value<S: Scalar>(recipe: &SpaceRecipe, space: &Space<S>) -> Value {
    let classes: Vec<Value> =
        space.classes.iter().map(|(name, c)| json!({ "name": name, "coords": class_to_value(c) })).collect();
    let walks: Vec<Value> =
        space.walks.iter().map(|(name, w)| json!({ "name": name, "walk": walk_to_value(w) })).collect();
    json!({
        "recipe": recipe_to_value(recipe),
        "graph": graph_to_value(&space.graph),
        "classes": classes,
        "walks": walks,
        "representative": space.representative.as_ref().map(|r| representative_to_value(&space.graph, r)),
    })
}

/// A basis file is either a bare array of edge arrays or `{"basis": [...]}`.
pub fn basis_from_value(value: &Value, edge_count: usize) -> Result<Vec<EdgeSetZ2>> {
    let members = match value {
        Value::Array(items) => items,
        Value::Object(map) => match map.get("basis") {
            Some(Value::Array(items)) => items,
            _ => return Err(CycleError::Parse("expected a \"basis\" array".into())),
        },
        _ => return Err(CycleError::Parse("expected an array of edge sets".into())),
    };
    members.iter().map(|m| edge_set_from_value(m, edge_count)).collect()
}

pub fn basis_to_value(basis: &[EdgeSetZ2]) -> Value {
    json!({ "basis": basis.iter().map(edge_set_to_value).collect::<Vec<_>>() })
}
