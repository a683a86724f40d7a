//! Command-line front end for `cyclespace`.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit code,
//! the human-readable text and the JSON report. `main` only prints and writes
//! files.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use cyclespace::json::{
    basis_from_value, budget_value, circulation_from_value, circulation_to_value, class_from_value, class_to_value,
    cycle_to_value, edge_set_from_value, edge_set_to_value, graph_to_value, length_value, pi_value,
    representative_to_value, space_to_value, walk_from_value, walk_to_value, GraphJson,
};
use cyclespace::metric::{
    cauchy_report, certified_cycle_lower_bound, circle_lower_bound, d1_upper_bound, disc_area_budget,
    sigma_tail_bound, PiMultiple,
};
use cyclespace::spaces::{cycle_walk, make_comb, make_ladder, make_owl, make_sine_comb, SpaceRecipe};
use cyclespace::z2::{decompose_edge_disjoint_circuits, verify_two_basis, EdgeSetZ2};
use cyclespace::{
    homology::walk_to_circulation, walk_length, ClosedWalk, CycleError, Graph, Homology, HomologyClass, Rational,
    Scalar, Step,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "cyclespace", version, about = "Length-weighted cycle spaces of weighted multigraphs")]
pub struct Cli {
    /// Write the JSON report to FILE (`-` for standard output).
    #[arg(long, global = true, value_name = "FILE")]
    pub json: Option<PathBuf>,
    /// Write the graph(s) in DOT format to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    pub dot: Option<PathBuf>,
    /// Worker threads for batches of independent inputs.
    #[arg(long, global = true, default_value_t = 1, value_name = "K")]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Minimal-length representative of a class and its primitive decomposition.
    Minrep {
        /// Graph or space manifest; repeat for a batch.
        #[arg(long, required = true, value_name = "FILE")]
        graph: Vec<PathBuf>,
        /// Chord vector (`1,-1`), `walk:START:E+,E-,...`, `@name` from a
        /// manifest, or a JSON file holding a class, walk or circulation.
        #[arg(long, value_name = "SPEC", allow_hyphen_values = true)]
        class: String,
    },
    /// Splits an even edge set into edge-disjoint circuits.
    #[command(name = "decompose-z2")]
    DecomposeZ2 {
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        /// Edge indices (`0,1,2`) or a JSON file with an index array.
        #[arg(long, value_name = "LIST")]
        edges: String,
    },
    /// Checks whether a family of edge sets is a 2-basis of the cycle space.
    #[command(name = "verify-2basis")]
    Verify2Basis {
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        #[arg(long, value_name = "FILE")]
        basis: PathBuf,
    },
    /// Scripted demos: owl, ladder, comb, sine-comb, circle.
    Demo {
        name: String,
        #[arg(long, value_name = "N")]
        n: Option<usize>,
    },
    /// Emits an example space with its manifest of named classes and walks.
    Generate {
        /// owl, ladder, comb, sine-comb or cycle.
        name: String,
        #[arg(long, value_name = "N")]
        n: Option<usize>,
        /// Sides per discretized circle.
        #[arg(long, value_name = "K")]
        sides: Option<usize>,
        /// Total length for `cycle`.
        #[arg(long, value_name = "P/Q")]
        length: Option<String>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub report: Value,
    pub dot: Option<String>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
    detail: Value,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into(), detail: Value::Null }
    }
}

impl From<CycleError> for Failure {
    fn from(err: CycleError) -> Self {
        let (code, detail) = match &err {
            CycleError::HostMismatch { .. } | CycleError::NotAChord(_) => (EXIT_MISMATCH, Value::Null),
            CycleError::OddDegree { vertex } => (EXIT_PRECONDITION, json!({ "first_odd_vertex": vertex })),
            CycleError::ConservationViolated { vertex, net } => {
                (EXIT_PRECONDITION, json!({ "vertex": vertex, "net_flow": net }))
            }
            _ => (EXIT_INPUT, Value::Null),
        };
        Self { code, message: err.to_string(), detail }
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// Accumulates input bytes for the report digest.
#[derive(Default)]
struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Run<String> {
        let bytes = fs::read(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
        self.hasher.update(&bytes);
        String::from_utf8(bytes).map_err(|_| Failure::input(format!("{} is not UTF-8", path.display())))
    }

    fn add(&mut self, text: &str) {
        self.hasher.update(text.as_bytes());
    }

    fn digest(self) -> String {
        let bytes = self.hasher.finalize();
        let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
        format!("sha256:{hex}")
    }
}

fn parse_json(text: &str, what: &str) -> Run<Value> {
    serde_json::from_str(text).map_err(|e| Failure::input(format!("{what}: {e}")))
}

/// A graph file holds either a bare graph or a document with a `graph` field.
struct LoadedGraph {
    graph: Graph,
    document: Value,
}

fn load_graph(inputs: &mut Inputs, path: &Path) -> Run<LoadedGraph> {
    let document = parse_json(&inputs.read(path)?, &path.display().to_string())?;
    let graph_value = document.get("graph").unwrap_or(&document);
    let parsed: GraphJson =
        serde_json::from_value(graph_value.clone()).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(LoadedGraph { graph: parsed.to_graph()?, document })
}

fn parse_int_list<T: std::str::FromStr>(text: &str) -> Option<Vec<T>> {
    let inner = text.trim().trim_start_matches(['[', '(']).trim_end_matches([']', ')']).trim();
    if inner.is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|t| t.trim().parse().ok()).collect()
}

/// `walk:START:E+,E-,...`; a bare edge index means forward.
fn parse_walk_spec(spec: &str) -> Run<ClosedWalk> {
    let bad = || Failure::input(format!("malformed walk spec {spec:?}"));
    let mut parts = spec.splitn(3, ':');
    parts.next();
    let start = parts.next().and_then(|s| s.trim().parse().ok()).ok_or_else(bad)?;
    let body = parts.next().unwrap_or("").trim();
    let mut steps = Vec::new();
    for token in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (digits, forward) = match token.strip_suffix('-') {
            Some(d) => (d, false),
            None => (token.strip_suffix('+').unwrap_or(token), true),
        };
        steps.push(Step::new(digits.parse().map_err(|_| bad())?, forward));
    }
    Ok(ClosedWalk::new(start, steps))
}

fn class_from_document(h: &Homology<'_, Rational>, value: &Value) -> Run<HomologyClass> {
    match value {
        Value::Array(items) if items.iter().all(Value::is_i64) => Ok(class_from_value(value)?),
        Value::Array(_) => {
            let c = circulation_from_value(value, h.graph().edge_count())?;
            Ok(h.class_of(&c)?)
        }
        Value::Object(map) => {
            if map.contains_key("start") {
                return Ok(h.class_of_walk(&walk_from_value(value)?)?);
            }
            for key in ["circulation", "class", "walk"] {
                if let Some(inner) = map.get(key) {
                    return class_from_document(h, inner);
                }
            }
            match map.get("results").and_then(|r| r.as_array()).and_then(|r| r.first()) {
                Some(first) => class_from_document(h, first),
                None => Err(Failure::input("no class, walk or circulation in document")),
            }
        }
        _ => Err(Failure::input("expected a class, walk or circulation")),
    }
}

fn resolve_class(
    inputs: &mut Inputs,
    loaded: &LoadedGraph,
    h: &Homology<'_, Rational>,
    spec: &str,
) -> Run<HomologyClass> {
    let spec = spec.trim();
    if let Some(name) = spec.strip_prefix('@') {
        let classes = loaded.document.get("classes").and_then(Value::as_array);
        let found = classes
            .into_iter()
            .flatten()
            .find(|c| c.get("name").and_then(Value::as_str) == Some(name))
            .ok_or_else(|| Failure::input(format!("no class named {name:?} in the manifest")))?;
        return Ok(class_from_value(&found["coords"])?);
    }
    if spec.starts_with("walk:") {
        return Ok(h.class_of_walk(&parse_walk_spec(spec)?)?);
    }
    if let Some(coords) = parse_int_list::<i64>(spec) {
        return Ok(HomologyClass::new(coords));
    }
    let path = Path::new(spec);
    if path.is_file() {
        let text = inputs.read(path)?;
        return class_from_document(h, &parse_json(&text, spec)?);
    }
    Err(Failure::input(format!("cannot interpret class spec {spec:?}")))
}

fn resolve_edges(inputs: &mut Inputs, spec: &str, edge_count: usize) -> Run<EdgeSetZ2> {
    let value = if let Some(list) = parse_int_list::<usize>(spec) {
        json!(list)
    } else if Path::new(spec).is_file() {
        let doc = parse_json(&inputs.read(Path::new(spec))?, spec)?;
        match doc {
            Value::Object(ref map) => map.get("edges").cloned().ok_or_else(|| Failure::input("no \"edges\" array"))?,
            other => other,
        }
    } else {
        return Err(Failure::input(format!("cannot interpret edge list {spec:?}")));
    };
    Ok(edge_set_from_value(&value, edge_count)?)
}

fn text_row(out: &mut String, cells: &[String], widths: &[usize]) {
    let line: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:>w$}")).collect();
    out.push_str(line.join("  ").trim_end());
    out.push('\n');
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    text_row(&mut out, &header.iter().map(|s| s.to_string()).collect::<Vec<_>>(), &widths);
    for row in rows {
        text_row(&mut out, row, &widths);
    }
    out
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn minrep_one(loaded: &LoadedGraph, class: &HomologyClass) -> Run<(Value, String)> {
    let g = &loaded.graph;
    let h = Homology::new(g);
    let (circulation, length) = h.min_length_representative(class)?;
    let cycles = h.flow_decompose(&circulation)?;
    let pieces = h.primitive_decompose(class)?;
    let piece_lengths = pieces.iter().map(|p| h.length(p)).collect::<cyclespace::Result<Vec<_>>>()?;
    let total = cyclespace::scalar::sum(piece_lengths.iter().cloned());
    let oplus = h.check_oplus(class, &pieces)?;
    let mut text = format!("class {:?}: length {} (≈ {:.6})\n", class.coords(), length, length.approx());
    let flows: Vec<String> =
        circulation.flows().iter().enumerate().filter(|(_, f)| **f != 0).map(|(e, f)| format!("e{e}:{f}")).collect();
    text.push_str(&format!("circulation: {}\n", if flows.is_empty() { "0".into() } else { flows.join(" ") }));
    let rows: Vec<Vec<String>> = cycles
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let edges: Vec<String> =
                c.cycle.steps.iter().map(|s| format!("{}{}", s.edge, if s.forward { "+" } else { "-" })).collect();
            vec![i.to_string(), c.multiplicity.to_string(), c.cycle_length(g).to_string(), c.length(g).to_string(), edges.join(",")]
        })
        .collect();
    text.push_str(&table(&["piece", "mult", "cycle length", "length", "steps"], &rows));
    text.push_str(&format!("pieces sum to {total}; ⊕ holds: {oplus}\n"));
    let report = json!({
        "class": class_to_value(class),
        "circulation": circulation_to_value(&circulation),
        "length": length_value(&length),
        "decomposition": cycles.iter().map(|c| cycle_to_value(g, c)).collect::<Vec<_>>(),
        "primitive_pieces": pieces.iter().zip(&piece_lengths).map(|(p, l)| json!({
            "class": class_to_value(p),
            "length": length_value(l),
        })).collect::<Vec<_>>(),
        "pieces_total": length_value(&total),
        "lengths_add_exactly": total == length,
        "oplus": oplus,
    });
    Ok((report, text))
}

fn cmd_minrep(cli: &Cli, graphs: &[PathBuf], spec: &str, inputs: &mut Inputs) -> Run<(Value, String, Option<String>)> {
    let mut jobs = Vec::with_capacity(graphs.len());
    for path in graphs {
        let loaded = load_graph(inputs, path)?;
        let h = Homology::new(&loaded.graph);
        let class = resolve_class(inputs, &loaded, &h, spec)?;
        jobs.push((path.clone(), loaded, class));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build()
        .map_err(|e| Failure::input(format!("thread pool: {e}")))?;
    let outcomes: Vec<Run<(Value, String)>> =
        pool.install(|| jobs.par_iter().map(|(_, loaded, class)| minrep_one(loaded, class)).collect());
    let mut results = Vec::new();
    let mut text = String::new();
    for ((path, _, _), outcome) in jobs.iter().zip(outcomes) {
        let (mut value, body) = outcome?;
        value["graph"] = json!(path.display().to_string());
        if graphs.len() > 1 {
            text.push_str(&format!("== {}\n", path.display()));
        }
        text.push_str(&body);
        results.push(value);
    }
    let dot = jobs.iter().map(|(p, l, _)| l.graph.to_dot(&p.display().to_string())).collect::<Vec<_>>().join("\n");
    Ok((json!(results), text, Some(dot)))
}

fn cmd_decompose(graph: &Path, edges: &str, inputs: &mut Inputs) -> Run<(Value, String, Option<String>)> {
    let loaded = load_graph(inputs, graph)?;
    let g = &loaded.graph;
    let set = resolve_edges(inputs, edges, g.edge_count())?;
    let circuits = decompose_edge_disjoint_circuits(g, &set)?;
    let lengths: Vec<Rational> = circuits.iter().map(|c| c.length(g)).collect();
    let total = cyclespace::scalar::sum(lengths.iter().cloned());
    let mut union = EdgeSetZ2::empty(g.edge_count());
    let mut disjoint = true;
    for c in &circuits {
        disjoint &= union.is_disjoint(c);
        for e in c.iter() {
            union.insert(e);
        }
    }
    let partition = disjoint && union == set;
    let conserved = total == set.length(g);
    let rows: Vec<Vec<String>> = circuits
        .iter()
        .zip(&lengths)
        .enumerate()
        .map(|(i, (c, l))| vec![i.to_string(), l.to_string(), format!("{:?}", c.iter().collect::<Vec<_>>())])
        .collect();
    let mut text = format!("{} circuit(s)\n", circuits.len());
    text.push_str(&table(&["circuit", "length", "edges"], &rows));
    text.push_str(&format!("partition: {partition}; length conserved: {conserved} (total {total})\n"));
    let report = json!({
        "edges": edge_set_to_value(&set),
        "circuits": circuits.iter().zip(&lengths).map(|(c, l)| json!({
            "edges": edge_set_to_value(c),
            "length": length_value(l),
        })).collect::<Vec<_>>(),
        "partition": partition,
        "length_conserved": conserved,
        "total_length": length_value(&total),
    });
    Ok((report, text, Some(g.to_dot("graph"))))
}

fn cmd_verify(graph: &Path, basis: &Path, inputs: &mut Inputs) -> Run<(Value, String, Option<String>)> {
    let loaded = load_graph(inputs, graph)?;
    let g = &loaded.graph;
    let doc = parse_json(&inputs.read(basis)?, &basis.display().to_string())?;
    // a previous verify-2basis report is accepted as well
    let doc = doc.get("results").filter(|r| r.get("basis").is_some()).cloned().unwrap_or(doc);
    let members = basis_from_value(&doc, g.edge_count())?;
    let verdict = verify_two_basis(g, &members);
    let text = format!("{verdict}\nrank {} of {} required, {} member(s)\n", verdict.rank, verdict.required, members.len());
    let report = json!({
        "verdict": verdict.to_string(),
        "holds": verdict.holds(),
        "rank": verdict.rank,
        "required": verdict.required,
        "basis": members.iter().map(edge_set_to_value).collect::<Vec<_>>(),
    });
    Ok((report, text, Some(g.to_dot("graph"))))
}

fn demo_owl() -> Run<(Value, String, Graph)> {
    let owl = make_owl::<Rational>();
    let g = &owl.graph;
    let h = Homology::new(g);
    let sigma = h.class_of_walk(&owl.sigma)?;
    let tau = h.class_of_walk(&owl.tau)?;
    let sum = &sigma + &tau;
    let (ls, lt, lc) = (h.length(&sigma)?, h.length(&tau)?, h.length(&sum)?);
    let naive = walk_length(g, &owl.sigma_then_tau())?;
    let oplus_naive = h.check_oplus(&sum, &[sigma.clone(), tau.clone()])?;
    let pieces = h.primitive_decompose(&sum)?;
    let oplus_primitive = h.check_oplus(&sum, &pieces)?;
    let rows = vec![
        vec!["{σ, τ}".to_string(), format!("{ls} + {lt}"), (ls.clone() + lt.clone()).to_string(), oplus_naive.to_string()],
        vec![
            "primitive".to_string(),
            pieces.iter().map(|p| h.length(p).map(|l| l.to_string())).collect::<cyclespace::Result<Vec<_>>>()?.join(" + "),
            lc.to_string(),
            oplus_primitive.to_string(),
        ],
    ];
    let mut text = format!("owl: ℓ(⟦σ+τ⟧) = {lc}, walk σ·τ has length {naive}\n");
    text.push_str(&table(&["family", "lengths", "sum", "⊕"], &rows));
    let report = json!({
        "sigma_length": length_value(&ls),
        "tau_length": length_value(&lt),
        "class_length": length_value(&lc),
        "naive_walk_length": length_value(&naive),
        "oplus_sigma_tau": oplus_naive,
        "primitive_pieces": pieces.iter().map(class_to_value).collect::<Vec<_>>(),
        "oplus_primitive": oplus_primitive,
        "circulation": circulation_to_value(&h.circulation_of(&sum)?),
        "walks": { "sigma": walk_to_value(&owl.sigma), "tau": walk_to_value(&owl.tau) },
    });
    Ok((report, text, owl.graph))
}

fn demo_ladder(n: usize) -> Run<(Value, String, Graph)> {
    let mut rows = Vec::new();
    let mut values = Vec::new();
    let mut last = None;
    for k in 1..=n {
        let ladder = make_ladder::<Rational>(k)?;
        let net = walk_to_circulation(&ladder.graph, &ladder.sigma)?;
        let len = walk_length(&ladder.graph, &ladder.sigma)?;
        rows.push(vec![k.to_string(), ladder.sigma.steps.len().to_string(), len.to_string(), net.is_zero().to_string()]);
        values.push(json!({ "n": k, "walk_length": length_value(&len), "net_zero": net.is_zero() }));
        last = Some(ladder.graph);
    }
    let text = format!("ladder: σ-imitation walk nets to zero\n{}", table(&["n", "steps", "walk length", "net zero"], &rows));
    let all = values.iter().all(|v| v["net_zero"] == json!(true));
    Ok((json!({ "rows": values, "all_zero": all }), text, last.expect("n >= 1")))
}

fn demo_comb(n: usize) -> Run<(Value, String, Graph)> {
    let mut rows = Vec::new();
    let mut values = Vec::new();
    let mut last = None;
    for k in 1..=n {
        let comb = make_comb::<Rational>(k)?;
        let h = Homology::new(&comb.graph);
        let sigma = comb.representative.prefix_length();
        let class = h.class_of_walk(&comb.connected_walk)?;
        let min = h.length(&class)?;
        let walk = walk_length(&comb.graph, &comb.connected_walk)?;
        let bound = Rational::from_int(2 * k as i64);
        let tail = sigma_tail_bound(&comb.representative, comb.representative.len())?.expect("bounded tail");
        rows.push(vec![k.to_string(), sigma.to_string(), min.to_string(), walk.to_string(), bound.to_string(), tail.to_string()]);
        values.push(json!({
            "n": k,
            "sigma_rep_length": length_value(&sigma),
            "class_length": length_value(&min),
            "connected_walk_length": length_value(&walk),
            "walk_lower_bound": length_value(&bound),
            "walk_at_least_bound": walk >= bound,
            "tail_budget": budget_value(&tail),
        }));
        last = Some(comb);
    }
    let comb = last.expect("n >= 1");
    let text = format!(
        "comb: σ-representative vs connected walk\n{}",
        table(&["n", "σ-rep", "ℓ(class)", "connected walk", "2n", "tail budget"], &rows)
    );
    let report = json!({
        "rows": values,
        "representative": representative_to_value(&comb.graph, &comb.representative),
    });
    Ok((report, text, comb.graph))
}

fn demo_sine_comb(n: usize) -> Run<(Value, String, Graph)> {
    let sine = make_sine_comb::<Rational>(n)?;
    let g = &sine.graph;
    let h = Homology::new(g);
    let mut rows = Vec::new();
    let mut circles = Vec::new();
    for (i, (class, cycle)) in sine.classes.iter().zip(&sine.circles).enumerate() {
        let upper = d1_upper_bound(&h, class)?;
        let lower = certified_cycle_lower_bound(g, cycle)?;
        let lower_text = lower.as_ref().map_or("none".to_string(), |l| l.to_string());
        rows.push(vec![(i + 1).to_string(), cycle.length(g).to_string(), upper.to_string(), lower_text]);
        circles.push(json!({
            "i": i + 1,
            "class": class_to_value(class),
            "length": length_value(&cycle.length(g)),
            "upper_to_zero": budget_value(&upper),
            "lower_to_zero": lower.as_ref().map(pi_value),
        }));
    }
    let mut text = format!("sine-comb: distances of ⟦σ_i⟧ to 0\n{}", table(&["i", "ℓ(σ_i)", "d₁ ≤", "d₁ ≥"], &rows));

    // sup over j > i ≥ N of the two-disc budget is attained at (N, N+1)
    let schedule: Vec<Rational> = (1..=6).map(|k| Rational::from_int(1) / Rational::from_int(10i64.pow(k))).collect();
    let pair_budget =
        |i: usize| disc_area_budget(&[Rational::pow2_inv(i as u32), Rational::pow2_inv(i as u32 + 1)]);
    let mut witness_rows = Vec::new();
    let mut witnesses = Vec::new();
    for eps in &schedule {
        let mut hit = None;
        for i in 1..=n {
            if pair_budget(i)?.pi_coeff < *eps {
                hit = Some(i);
                break;
            }
        }
        let shown = hit.map_or("-".to_string(), |i| i.to_string());
        let budget = hit.map(pair_budget).transpose()?;
        witness_rows.push(vec![format!("{eps}·π"), shown, budget.as_ref().map_or("-".into(), |b| b.to_string())]);
        witnesses.push(json!({ "epsilon": pi_value(&PiMultiple::new(eps.clone(), 1)), "n": hit, "budget": budget.as_ref().map(budget_value) }));
    }
    let holds = witnesses.iter().all(|w| !w["n"].is_null());
    text.push_str("pairwise budgets d₁(σ_i, σ_j) ≤ (1/2)(4^-i + 4^-j)·π for j > i ≥ N\n");
    text.push_str(&table(&["ε", "N", "sup budget"], &witness_rows));
    text.push_str(&format!("Cauchy: {holds}\n"));
    let tail = cauchy_report(&sine.representative, &schedule)?;
    let report = json!({
        "circles": circles,
        "pairwise_witnesses": witnesses,
        "cauchy": holds,
        "representative_cauchy": tail.holds(),
    });
    Ok((report, text, sine.graph))
}

fn demo_circle() -> Run<(Value, String, Graph)> {
    let two_pi = PiMultiple::new(Rational::from_int(2), 1);
    let m = circle_lower_bound(&two_pi)?;
    let mut rows = Vec::new();
    let mut scalings = Vec::new();
    for (a, b) in [(1, 1), (2, 1), (3, 1), (1, 2), (1, 3), (2, 3), (3, 2), (5, 4), (7, 3), (10, 1)] {
        let scale = q(a, b);
        let c = PiMultiple::new(Rational::from_int(2) * scale.clone(), 1);
        let bound = circle_lower_bound(&c)?;
        let ratio = bound.coeff.clone() / (m.coeff.clone() * scale.clone() * scale.clone());
        rows.push(vec![scale.to_string(), c.to_string(), bound.to_string(), ratio.to_string()]);
        scalings.push(json!({
            "scale": length_value(&scale),
            "circumference": pi_value(&c),
            "lower_bound": pi_value(&bound),
            "quadratic": bound.pi_power == m.pi_power && ratio == Rational::from_int(1),
        }));
    }
    let k = 4;
    let g = cyclespace::spaces::make_cycle::<Rational>(k, Rational::from_int(1))?;
    let h = Homology::new(&g);
    let class = h.class_of_walk(&cycle_walk(k))?;
    let upper = d1_upper_bound(&h, &class)?;
    let cycle = cyclespace::CycleWithMultiplicity { cycle: cycle_walk(k), multiplicity: 1 };
    let lower = certified_cycle_lower_bound(&g, &cycle)?;
    let mut text = format!("circle: lower bound at circumference {two_pi} is {m}\n");
    text.push_str(&table(&["scale", "circumference", "lower bound", "bound / (M·scale²)"], &rows));
    text.push_str(&format!(
        "unit-perimeter {k}-gon: {} ≤ d₁(class, 0) ≤ {upper}\n",
        lower.as_ref().map_or("none".to_string(), |l| l.to_string())
    ));
    let report = json!({
        "lower_bound_at_two_pi": pi_value(&m),
        "scalings": scalings,
        "polygon": {
            "sides": k,
            "upper": budget_value(&upper),
            "lower": lower.as_ref().map(pi_value),
        },
    });
    Ok((report, text, g))
}

fn cmd_demo(name: &str, n: Option<usize>, inputs: &mut Inputs) -> Run<(Value, String, Option<String>)> {
    let positive = |n: usize| if n == 0 { Err(Failure::input("--n must be at least 1")) } else { Ok(n) };
    let (value, text, graph) = match name {
        "owl" => demo_owl()?,
        "ladder" => demo_ladder(positive(n.unwrap_or(16))?)?,
        "comb" => demo_comb(positive(n.unwrap_or(10))?)?,
        "sine-comb" => demo_sine_comb(positive(n.unwrap_or(12))?)?,
        "circle" => demo_circle()?,
        other => {
            return Err(Failure::input(format!(
                "unknown demo {other:?} (expected owl, ladder, comb, sine-comb or circle)"
            )))
        }
    };
    inputs.add(&serde_json::to_string(&graph_to_value(&graph)).expect("plain data"));
    let mut value = value;
    value["demo"] = json!(name);
    value["graph"] = graph_to_value(&graph);
    Ok((value, text, Some(graph.to_dot(name))))
}

fn cmd_generate(
    name: &str,
    n: Option<usize>,
    sides: Option<usize>,
    length: Option<&str>,
    inputs: &mut Inputs,
) -> Run<(Value, String, Option<String>)> {
    let n = n.unwrap_or(4);
    let sides = sides.unwrap_or(cyclespace::spaces::DEFAULT_CIRCLE_SIDES);
    let recipe = match name {
        "owl" => SpaceRecipe::Owl,
        "ladder" => SpaceRecipe::Ladder { n },
        "comb" => SpaceRecipe::Comb { n, sides },
        "sine-comb" => SpaceRecipe::SineComb { n, sides },
        "cycle" => SpaceRecipe::Cycle { k: n, total_length: length.unwrap_or("1").to_string() },
        other => return Err(Failure::input(format!("unknown space {other:?}"))),
    };
    let space = recipe.build::<Rational>()?;
    let manifest = space_to_value(&recipe, &space);
    inputs.add(&serde_json::to_string(&manifest).expect("plain data"));
    let rows: Vec<Vec<String>> =
        space.classes.iter().map(|(name, c)| vec![name.clone(), format!("{:?}", c.coords())]).collect();
    let mut text = format!(
        "{}: {} vertices, {} edges, total length {}\n",
        recipe.name(),
        space.graph.vertex_count(),
        space.graph.edge_count(),
        space.graph.total_length()
    );
    text.push_str(&table(&["class", "coordinates"], &rows));
    Ok((manifest, text, Some(space.graph.to_dot(recipe.name()))))
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let echo: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return Outcome { code, text: err.to_string(), report: Value::Null, dot: None };
        }
    };
    let mut inputs = Inputs::default();
    let outcome = match &cli.command {
        Command::Minrep { graph, class } => cmd_minrep(&cli, graph, class, &mut inputs),
        Command::DecomposeZ2 { graph, edges } => cmd_decompose(graph, edges, &mut inputs),
        Command::Verify2Basis { graph, basis } => cmd_verify(graph, basis, &mut inputs),
        Command::Demo { name, n } => cmd_demo(name, *n, &mut inputs),
        Command::Generate { name, n, sides, length } => cmd_generate(name, *n, *sides, length.as_deref(), &mut inputs),
    };
    let mut report = Map::new();
    report.insert("command".into(), json!(echo));
    report.insert("input_digest".into(), json!(inputs.digest()));
    report.insert("scalar".into(), json!(cyclespace::json::exactness::<Rational>()));
    match outcome {
        Ok((value, text, dot)) => {
            match (&cli.command, value) {
                // manifests keep their own top-level layout so they load as graphs
                (Command::Generate { .. }, Value::Object(map)) => report.extend(map),
                (_, value) => {
                    report.insert("results".into(), value);
                }
            }
            Outcome { code: EXIT_OK, text, report: Value::Object(report), dot }
        }
        Err(failure) => {
            report.insert(
                "error".into(),
                json!({ "code": failure.code, "message": failure.message, "detail": failure.detail }),
            );
            Outcome { code: failure.code, text: format!("error: {}\n", failure.message), report: Value::Object(report), dot: None }
        }
    }
}
