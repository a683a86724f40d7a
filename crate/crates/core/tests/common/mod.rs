//! Random instances and brute-force oracles shared by the integration tests.
//! Nothing here calls into the library's algorithms except to read the chord
//! set, which defines the coordinates being compared.
#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};

use cyclespace::{Circulation, Graph, HomologyClass, Rational, Scalar, SpanningForest};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

pub fn random_length(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.gen_range(1..=9), rng.gen_range(1..=6))
}

/// Connected multigraph with loops and parallel edges allowed.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Graph {
    assert!(n >= 1 && m + 1 >= n);
    let mut edges = Vec::with_capacity(m);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push(if rng.gen_bool(0.5) { (u, v) } else { (v, u) });
    }
    while edges.len() < m {
        edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    edges.shuffle(rng);
    Graph::new(n, edges.into_iter().map(|(a, b)| (a, b, random_length(rng))).collect()).unwrap()
}

/// Possibly disconnected multigraph.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Graph {
    let edges = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), random_length(rng))).collect();
    Graph::new(n, edges).unwrap()
}

pub fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Every connected multigraph on 1..=3 vertices with 1..=`max_edges` edges,
/// as endpoint lists (one representative per multiset of slots).
pub fn small_multigraphs(max_edges: usize) -> Vec<(usize, Vec<(usize, usize)>)> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
        for m in 1..=max_edges {
            let mut choice = vec![0usize; m];
            loop {
                let edges: Vec<_> = choice.iter().map(|&i| slots[i]).collect();
                if is_connected(n, &edges) {
                    out.push((n, edges));
                }
                // next nondecreasing sequence
                let mut i = m;
                while i > 0 && choice[i - 1] == slots.len() - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                choice[i - 1] += 1;
                let v = choice[i - 1];
                for c in &mut choice[i..] {
                    *c = v;
                }
            }
        }
    }
    out
}

pub fn net_flow(g: &Graph, flows: &[i64]) -> Vec<i64> {
    let mut net = vec![0i64; g.vertex_count()];
    for (e, &f) in flows.iter().enumerate() {
        let edge = g.edge(e);
        net[edge.tail] -= f;
        net[edge.head] += f;
    }
    net
}

/// Lengths as integers over one common denominator: `ℓ(e) = w[e] / d`.
pub fn integer_weights(g: &Graph) -> (Vec<i64>, i64) {
    use num_integer::Integer;
    let d = g.edges().iter().fold(1i64, |acc, e| acc.lcm(&i64::try_from(e.length.denom().clone()).unwrap()));
    let w = g
        .edges()
        .iter()
        .map(|e| i64::try_from(e.length.numer().clone()).unwrap() * (d / i64::try_from(e.length.denom().clone()).unwrap()))
        .collect();
    (w, d)
}

pub fn flow_length(g: &Graph, flows: &[i64]) -> Rational {
    flows.iter().enumerate().fold(q(0, 1), |acc, (e, &f)| acc + g.length(e).clone() * Rational::from_int(f.abs()))
}

/// Every circulation with `|f_e| ≤ bound`, by backtracking over edges with a
/// conservation check once a vertex has all its edges assigned.
pub fn circulations_in_box(g: &Graph, bound: i64) -> Vec<Vec<i64>> {
    let m = g.edge_count();
    let mut last_edge = vec![None; g.vertex_count()];
    for e in 0..m {
        let edge = g.edge(e);
        last_edge[edge.tail] = Some(e);
        last_edge[edge.head] = Some(e);
    }
    let mut out = Vec::new();
    let mut flows = vec![0i64; m];
    let mut net = vec![0i64; g.vertex_count()];
    fn go(
        g: &Graph,
        e: usize,
        bound: i64,
        last_edge: &[Option<usize>],
        flows: &mut Vec<i64>,
        net: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if e == g.edge_count() {
            out.push(flows.clone());
            return;
        }
        let edge = g.edge(e);
        for f in -bound..=bound {
            net[edge.tail] -= f;
            net[edge.head] += f;
            flows[e] = f;
            let closed = |v: usize| last_edge[v] != Some(e) || net[v] == 0;
            if closed(edge.tail) && closed(edge.head) {
                go(g, e + 1, bound, last_edge, flows, net, out);
            }
            net[edge.tail] += f;
            net[edge.head] -= f;
        }
        flows[e] = 0;
    }
    go(g, 0, bound, &last_edge, &mut flows, &mut net, &mut out);
    out
}

/// Minimum chain length per class among circulations in the box, keyed by
/// chord values, together with how many circulations realize each class.
pub fn box_minima(g: &Graph, chords: &[usize], bound: i64) -> BTreeMap<Vec<i64>, (Rational, usize)> {
    let (w, d) = integer_weights(g);
    let mut best: BTreeMap<Vec<i64>, (i64, usize)> = BTreeMap::new();
    for flows in circulations_in_box(g, bound) {
        let key: Vec<i64> = chords.iter().map(|&c| flows[c]).collect();
        let len: i64 = flows.iter().zip(&w).map(|(f, w)| f.abs() * w).sum();
        best.entry(key)
            .and_modify(|(l, count)| {
                *count += 1;
                *l = (*l).min(len);
            })
            .or_insert((len, 1));
    }
    best.into_iter().map(|(k, (l, c))| (k, (q(l, d), c))).collect()
}

/// Smallest `Σ (x⁺_e + x⁻_e) ℓ(e)` over chains whose net flow is a circulation
/// with the given chord values, searching `x^± ≤ bound` on non-chord edges.
/// Without `split`, only `x⁺ x⁻ = 0` is tried and `|x⁺ - x⁻| ≤ bound`.
pub fn chain_minimum(g: &Graph, chords: &[usize], class: &[i64], bound: i64, split: bool) -> Option<Rational> {
    let m = g.edge_count();
    let mut fixed = vec![None; m];
    for (slot, &c) in chords.iter().enumerate() {
        fixed[c] = Some(class[slot]);
    }
    let free: Vec<usize> = (0..m).filter(|e| fixed[*e].is_none()).collect();
    let (w, d) = integer_weights(g);
    let mut best: Option<i64> = None;
    let mut flows: Vec<i64> = fixed.iter().map(|f| f.unwrap_or(0)).collect();
    let mut cost_extra = vec![0i64; m];
    #[allow(clippy::too_many_arguments)]
    fn go(
        g: &Graph,
        w: &[i64],
        free: &[usize],
        i: usize,
        bound: i64,
        split: bool,
        flows: &mut Vec<i64>,
        extra: &mut Vec<i64>,
        best: &mut Option<i64>,
    ) {
        if i == free.len() {
            if net_flow(g, flows).iter().all(|&x| x == 0) {
                let cost: i64 = (0..flows.len()).map(|e| w[e] * (flows[e].abs() + 2 * extra[e])).sum();
                if best.is_none_or(|b| cost < b) {
                    *best = Some(cost);
                }
            }
            return;
        }
        let e = free[i];
        if split {
            for plus in 0..=bound {
                for minus in 0..=bound {
                    flows[e] = plus - minus;
                    extra[e] = plus.min(minus);
                    go(g, w, free, i + 1, bound, split, flows, extra, best);
                }
            }
        } else {
            for f in -bound..=bound {
                flows[e] = f;
                go(g, w, free, i + 1, bound, split, flows, extra, best);
            }
        }
        flows[e] = 0;
        extra[e] = 0;
    }
    go(g, &w, &free, 0, bound, split, &mut flows, &mut cost_extra, &mut best);
    best.map(|b| q(b, d))
}

/// Unit flow on a simple cycle: entries in {-1,0,1}, nonempty support that is
/// connected with every vertex of degree 2, or a single loop.
pub fn is_unit_simple_cycle(g: &Graph, flows: &[i64]) -> bool {
    if flows.iter().any(|f| f.abs() > 1) || net_flow(g, flows).iter().any(|&x| x != 0) {
        return false;
    }
    let support: Vec<usize> = (0..flows.len()).filter(|&e| flows[e] != 0).collect();
    is_circuit_oracle(g, &support)
}

/// Connected edge set in which every touched vertex has degree 2 (a loop
/// counts twice).
pub fn is_circuit_oracle(g: &Graph, edges: &[usize]) -> bool {
    if edges.is_empty() {
        return false;
    }
    let mut degree = vec![0usize; g.vertex_count()];
    for &e in edges {
        degree[g.edge(e).tail] += 1;
        degree[g.edge(e).head] += 1;
    }
    if degree.iter().any(|&d| d != 0 && d != 2) {
        return false;
    }
    let touched: Vec<usize> = (0..g.vertex_count()).filter(|&v| degree[v] > 0).collect();
    let local: BTreeMap<usize, usize> = touched.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let pairs: Vec<(usize, usize)> = edges.iter().map(|&e| (local[&g.edge(e).tail], local[&g.edge(e).head])).collect();
    is_connected(touched.len(), &pairs)
}

/// Even subgraph built from a random edge subset by pairing its odd vertices
/// along BFS paths.
pub fn random_even_set(rng: &mut ChaCha8Rng, g: &Graph) -> Vec<bool> {
    let m = g.edge_count();
    let mut set: Vec<bool> = (0..m).map(|_| rng.gen_bool(0.5)).collect();
    let mut parity = vec![false; g.vertex_count()];
    for e in 0..m {
        if set[e] && !g.edge(e).is_loop() {
            parity[g.edge(e).tail] ^= true;
            parity[g.edge(e).head] ^= true;
        }
    }
    loop {
        let Some(a) = parity.iter().position(|&p| p) else { break };
        // BFS from a to the nearest other odd vertex
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; g.vertex_count()];
        let mut seen = vec![false; g.vertex_count()];
        seen[a] = true;
        let mut queue = VecDeque::from([a]);
        let mut target = None;
        while let Some(v) = queue.pop_front() {
            if v != a && parity[v] {
                target = Some(v);
                break;
            }
            for e in 0..m {
                let edge = g.edge(e);
                for (x, y) in [(edge.tail, edge.head), (edge.head, edge.tail)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        prev[y] = Some((e, v));
                        queue.push_back(y);
                    }
                }
            }
        }
        let b = target.expect("odd vertices come in pairs per component");
        let mut v = b;
        while v != a {
            let (e, p) = prev[v].unwrap();
            set[e] ^= true;
            v = p;
        }
        parity[a] = false;
        parity[b] = false;
    }
    set
}

/// Rank over GF(2) by counting the span: `|span| = 2^rank`.
pub fn span_rank(rows: &[Vec<bool>]) -> usize {
    let m = rows.first().map_or(0, Vec::len);
    let mut span = std::collections::BTreeSet::from([vec![false; m]]);
    for row in rows {
        let shifted: Vec<Vec<bool>> =
            span.iter().map(|s| s.iter().zip(row).map(|(a, b)| a ^ b).collect()).collect();
        span.extend(shifted);
    }
    span.len().trailing_zeros() as usize
}

pub fn random_class(rng: &mut ChaCha8Rng, dim: usize, range: i64) -> HomologyClass {
    HomologyClass::new((0..dim).map(|_| rng.gen_range(-range..=range)).collect())
}

pub fn chords_of(g: &Graph) -> Vec<usize> {
    SpanningForest::new(g).chords().to_vec()
}

pub fn flows(c: &Circulation) -> Vec<i64> {
    c.flows().to_vec()
}

/// All subclass candidates `d` with `ℓ(c) = ℓ(d) + ℓ(c - d)`, found by
/// scanning circulations in a box; `c` is primitive iff the only ones are
/// `0` and `c`.
pub fn proper_subflows_by_length(g: &Graph, chords: &[usize], class: &[i64], bound: i64) -> Vec<Vec<i64>> {
    let minima = box_minima(g, chords, bound);
    let total = &minima[class].0;
    minima
        .iter()
        .filter(|(d, _)| {
            let rest: Vec<i64> = class.iter().zip(d.iter()).map(|(a, b)| a - b).collect();
            d.iter().any(|&x| x != 0)
                && rest.iter().any(|&x| x != 0)
                && minima.get(&rest).is_some_and(|(lr, _)| minima[*d].0.clone() + lr.clone() == *total)
        })
        .map(|(d, _)| d.clone())
        .collect()
}
