mod common;

use common::*;
use cyclespace::graph::check_exhaustion_step;
use cyclespace::homology::{flow_decompose, length_of_circulation, walk_to_circulation};
use cyclespace::json::{graph_to_string, space_to_value};
use cyclespace::metric::{
    circle_lower_bound, disc_area_budget, fragmentability_report, sigma_tail_bound, squares_threshold, PiMultiple,
    SigmaRepresentative, TailBound,
};
use cyclespace::spaces::{make_comb, make_ladder, PrefixExhaustion, SpaceRecipe};
use cyclespace::z2::{
    decompose_edge_disjoint_circuits, from_z2_coordinates, verify_two_basis, z2_coordinates, z2_sum,
};
use cyclespace::{
    walk_length, Circulation, ClosedWalk, EdgeSetZ2, Exhaustion, Graph, Homology, HomologyClass, Rational, Scalar,
    SpanningForest, Step,
};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn components(g: &Graph) -> usize {
    let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for e in g.edges() {
        let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
        parent[a] = b;
    }
    (0..g.vertex_count()).filter(|&v| find(&mut parent, v) == v).count()
}

/// Random closed walk: wander from `start`, then return along the tree path.
fn random_closed_walk(rng: &mut ChaCha8Rng, g: &Graph, start: usize, steps: usize) -> ClosedWalk {
    let mut path: Vec<Step> = Vec::new();
    let mut at = start;
    for _ in 0..steps {
        let incident = g.incident(at);
        if incident.is_empty() {
            break;
        }
        let e = incident[rng.gen_range(0..incident.len())];
        let edge = g.edge(e);
        let forward = if edge.is_loop() { rng.gen_bool(0.5) } else { edge.tail == at };
        path.push(Step::new(e, forward));
        at = if forward { edge.head } else { edge.tail };
    }
    path.extend(SpanningForest::new(g).tree_path(g, at, start).unwrap());
    ClosedWalk::new(start, path)
}

/// Circulation as a random integer combination of random cycles.
fn random_circulation(rng: &mut ChaCha8Rng, g: &Graph) -> Circulation {
    let h = Homology::new(g);
    let class = random_class(rng, h.dimension(), 3);
    h.circulation_of(&class).unwrap()
}

fn seeded() -> impl Strategy<Value = ChaCha8Rng> {
    any::<u64>().prop_map(rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn chord_count_is_cycle_rank(mut r in seeded(), n in 1usize..10, m in 0usize..16) {
        let g = random_graph(&mut r, n, m);
        let f = SpanningForest::new(&g);
        prop_assert_eq!(f.chords().len(), m + components(&g) - n);
        prop_assert_eq!(f.tree_edges().len() + f.chords().len(), m);
        let again = SpanningForest::new(&g.clone());
        prop_assert_eq!(f.tree_edges(), again.tree_edges());
    }

    #[test]
    fn walk_length_is_additive(mut r in seeded(), n in 1usize..7, m in 1usize..12) {
        let g = random_connected(&mut r, n, m.max(n - 1).max(1));
        let a = random_closed_walk(&mut r, &g, 0, 5);
        let b = random_closed_walk(&mut r, &g, 0, 4);
        let joined = a.concat(&b).unwrap();
        prop_assert_eq!(
            walk_length(&g, &joined).unwrap(),
            walk_length(&g, &a).unwrap() + walk_length(&g, &b).unwrap()
        );
    }

    #[test]
    fn exhaustion_maps_compose(from in 1usize..6, gap in 1usize..4, sides in 1usize..5) {
        for x in [PrefixExhaustion::Ladder, PrefixExhaustion::Comb { sides }, PrefixExhaustion::SineComb { sides }] {
            let direct = Exhaustion::<Rational>::composite_edge_map(&x, from, from + gap).unwrap();
            let mut composed: Vec<usize> = (0..direct.len()).collect();
            for k in from..from + gap {
                let step = Exhaustion::<Rational>::edge_map(&x, k).unwrap();
                composed = composed.iter().map(|&e| step[e]).collect();
                check_exhaustion_step::<Rational, _>(&x, k).unwrap();
            }
            prop_assert_eq!(direct, composed);
        }
    }

    #[test]
    fn even_sets_split_into_disjoint_circuits(mut r in seeded(), n in 1usize..=12, m in 0usize..=20) {
        let g = random_graph(&mut r, n, m);
        let even = random_even_set(&mut r, &g);
        let set = EdgeSetZ2::from_edges(m, (0..m).filter(|&e| even[e])).unwrap();
        let circuits = decompose_edge_disjoint_circuits(&g, &set).unwrap();
        let mut union = EdgeSetZ2::empty(m);
        for c in &circuits {
            prop_assert!(is_circuit_oracle(&g, &c.iter().collect::<Vec<_>>()));
            prop_assert!(union.is_disjoint(c));
            union = z2_sum(&union, c).unwrap();
        }
        prop_assert_eq!(&union, &set);
        let total = circuits.iter().fold(q(0, 1), |acc, c| acc + c.length(&g));
        prop_assert_eq!(total, set.length(&g));
    }

    #[test]
    fn z2_coordinates_round_trip(mut r in seeded(), n in 1usize..9, m in 0usize..14) {
        let g = random_graph(&mut r, n, m);
        let f = SpanningForest::new(&g);
        let even = random_even_set(&mut r, &g);
        let set = EdgeSetZ2::from_edges(m, (0..m).filter(|&e| even[e])).unwrap();
        let coords = z2_coordinates(&g, &f, &set).unwrap();
        prop_assert_eq!(from_z2_coordinates(&g, &f, &coords).unwrap(), set);
    }

    #[test]
    fn two_basis_matches_rank_oracle(mut r in seeded(), n in 1usize..6, m in 0usize..=10, k in 0usize..6) {
        let g = random_graph(&mut r, n, m);
        let family: Vec<Vec<bool>> = (0..k)
            .map(|_| if r.gen_bool(0.9) { random_even_set(&mut r, &g) } else { (0..m).map(|_| r.gen_bool(0.5)).collect() })
            .collect();
        let sets: Vec<EdgeSetZ2> =
            family.iter().map(|f| EdgeSetZ2::from_edges(m, (0..m).filter(|&e| f[e])).unwrap()).collect();
        let verdict = verify_two_basis(&g, &sets);

        let even = |f: &Vec<bool>| {
            let mut deg = vec![0usize; n];
            for e in (0..m).filter(|&e| f[e]) {
                deg[g.edge(e).tail] += 1;
                deg[g.edge(e).head] += 1;
            }
            deg.iter().all(|d| d % 2 == 0)
        };
        let required = m + components(&g) - n;
        let all_even = family.iter().all(even);
        let rank = span_rank(&family);
        let max_use = (0..m).map(|e| family.iter().filter(|f| f[e]).count()).max().unwrap_or(0);
        let expected = all_even && rank == required && max_use <= 2;
        prop_assert_eq!(verdict.holds(), expected, "{}", verdict);
        prop_assert_eq!(verdict.required, required);
        if all_even {
            prop_assert_eq!(verdict.rank, rank);
        }
    }

    #[test]
    fn classes_and_circulations_are_in_bijection(mut r in seeded(), n in 1usize..8, m in 1usize..14) {
        let g = random_connected(&mut r, n, m.max(n - 1));
        let h = Homology::new(&g);
        let class = random_class(&mut r, h.dimension(), 4);
        let c = h.circulation_of(&class).unwrap();
        prop_assert_eq!(h.class_of(&c).unwrap(), class);
        let other = random_circulation(&mut r, &g);
        let walked = walk_to_circulation(&g, &random_closed_walk(&mut r, &g, 0, 6)).unwrap();
        let sum = other.try_add(&walked).unwrap();
        prop_assert_eq!(h.circulation_of(&h.class_of(&sum).unwrap()).unwrap(), sum);
    }

    #[test]
    fn flow_decomposition_conserves(mut r in seeded(), n in 1usize..8, m in 1usize..14) {
        let g = random_connected(&mut r, n, m.max(n - 1));
        let c = random_circulation(&mut r, &g);
        let cycles = flow_decompose(&g, &c).unwrap();
        let mut total = Circulation::zero(g.edge_count());
        let mut len = q(0, 1);
        for cycle in &cycles {
            prop_assert!(cycle.is_simple(&g));
            prop_assert!(cycle.multiplicity >= 1);
            total = total.try_add(&cycle.circulation(g.edge_count())).unwrap();
            len += cycle.length(&g);
        }
        prop_assert_eq!(total, c.clone());
        prop_assert_eq!(len, length_of_circulation(&g, &c));
    }

    #[test]
    fn triangle_inequality_and_positivity(mut r in seeded(), n in 1usize..8, m in 1usize..14) {
        let g = random_connected(&mut r, n, m.max(n - 1));
        let h = Homology::new(&g);
        let c = random_class(&mut r, h.dimension(), 3);
        let d = random_class(&mut r, h.dimension(), 3);
        let (lc, ld) = (h.length(&c).unwrap(), h.length(&d).unwrap());
        prop_assert!(h.length(&(&c + &d)).unwrap() <= lc.clone() + ld);
        prop_assert_eq!(lc == q(0, 1), c.is_zero());
        prop_assert!(lc >= q(0, 1));
    }

    #[test]
    fn oplus_composes(mut r in seeded(), n in 1usize..7, m in 1usize..11) {
        let g = random_connected(&mut r, n, m.max(n - 1));
        let h = Homology::new(&g);
        let dim = h.dimension();
        for _ in 0..20 {
            let c = random_class(&mut r, dim, 2);
            let d = random_class(&mut r, dim, 2);
            let e = &c - &d;
            if !h.check_oplus(&c, &[d.clone(), e.clone()]).unwrap() {
                continue;
            }
            let f = random_class(&mut r, dim, 2);
            let gg = &e - &f;
            if !h.check_oplus(&e, &[f.clone(), gg.clone()]).unwrap() {
                continue;
            }
            let df = &d + &f;
            prop_assert!(h.check_oplus(&c, &[df.clone(), gg]).unwrap());
            prop_assert!(h.check_oplus(&df, &[d, f]).unwrap());
        }
    }

    #[test]
    fn disc_budget_is_monotone(lengths in prop::collection::vec((1i64..50, 1i64..20), 0..8), extra in (1i64..50, 1i64..20)) {
        let mut ls: Vec<Rational> = lengths.iter().map(|&(a, b)| q(a, b)).collect();
        let before = disc_area_budget(&ls).unwrap();
        ls.push(q(extra.0, extra.1));
        prop_assert!(disc_area_budget(&ls).unwrap() >= before);
    }

    #[test]
    fn squares_guarantee_adversarial(total in (1i64..40, 1i64..8), eps in (1i64..20, 1i64..30), slack in 1i64..1000) {
        let total = q(total.0, total.1);
        let eps = q(eps.0, eps.1);
        let r = squares_threshold(&total, &eps).unwrap();
        // parts as large as allowed: just below r, remainder last
        let part = r.clone() * q(slack, slack + 1);
        let mut rest = total.clone();
        let mut squares = q(0, 1);
        let mut count = 0;
        while rest > q(0, 1) && count < 5000 {
            let p = if part < rest { part.clone() } else { rest.clone() };
            squares += p.clone() * p.clone();
            rest -= p;
            count += 1;
        }
        prop_assume!(rest == q(0, 1));
        prop_assert!(squares < eps);
    }

    #[test]
    fn fragmentable_only_at_zero_below_girth(mut r in seeded(), n in 1usize..7, m in 1usize..11) {
        let g = random_connected(&mut r, n, m.max(n - 1));
        let h = Homology::new(&g);
        let Some(girth) = g.girth() else { return Ok(()) };
        let class = random_class(&mut r, h.dimension(), 2);
        for delta in [girth.clone(), girth.clone() * q(1, 2), girth * q(1, 100)] {
            let report = fragmentability_report(&h, &class, &delta).unwrap();
            prop_assert_eq!(report.fragmentable, class.is_zero());
        }
    }

    #[test]
    fn circle_bound_scales_quadratically(a in 1i64..200, b in 1i64..200) {
        let s = q(a, b);
        let base = circle_lower_bound(&PiMultiple::new(q(2, 1), 1)).unwrap();
        let scaled = circle_lower_bound(&PiMultiple::new(q(2, 1) * s.clone(), 1)).unwrap();
        prop_assert_eq!(scaled.coeff, base.coeff * s.clone() * s);
        prop_assert_eq!(scaled.pi_power, base.pi_power);
    }

    #[test]
    fn ladder_walk_nets_to_zero(n in 1usize..40) {
        let ladder = make_ladder::<Rational>(n).unwrap();
        prop_assert!(walk_to_circulation(&ladder.graph, &ladder.sigma).unwrap().is_zero());
    }
}

#[test]
fn primitivity_matches_brute_force() {
    let mut r = rng(31);
    let mut checked = 0;
    while checked < 600 {
        let n = r.gen_range(1..=5);
        let m = r.gen_range((n - 1).max(1)..=8);
        let g = random_connected(&mut r, n, m);
        let h = Homology::new(&g);
        let chords = chords_of(&g);
        for _ in 0..6 {
            let class = random_class(&mut r, h.dimension(), 1);
            let flows = h.circulation_of(&class).unwrap();
            let bound = flows.flows().iter().map(|f| f.abs()).max().unwrap_or(0).max(1);
            let oracle = !class.is_zero() && proper_subflows_by_length(&g, &chords, class.coords(), bound).is_empty();
            assert_eq!(h.is_primitive(&class).unwrap(), oracle, "{:?} on {g:?}", class.coords());
            checked += 1;
        }
    }
}

/// Closed walks are chains too: none may be shorter than the minimum of its
/// class, and single-cycle classes are attained by some walk.
#[test]
fn closed_walks_never_beat_the_minimum() {
    let mut r = rng(37);
    for _ in 0..40 {
        let n = r.gen_range(1..=3);
        let m = r.gen_range(n..=4);
        let g = random_connected(&mut r, n, m);
        let h = Homology::new(&g);
        let mut best: std::collections::BTreeMap<Vec<i64>, Rational> = Default::default();
        // every closed walk from vertex 0 with at most 5 steps
        let mut stack = vec![ClosedWalk::empty(0)];
        while let Some(w) = stack.pop() {
            let at = w.vertices(&g).unwrap().last().copied().unwrap_or(0);
            if at == 0 && !w.is_empty() {
                let class = h.class_of_walk(&w).unwrap();
                let len = walk_length(&g, &w).unwrap();
                let min = h.length(&class).unwrap();
                assert!(len >= min, "walk {w:?} shorter than ℓ(class)");
                let entry = best.entry(class.coords().to_vec()).or_insert(len.clone());
                if len < *entry {
                    *entry = len;
                }
            }
            if w.steps.len() == 5 {
                continue;
            }
            for &e in g.incident(at) {
                let edge = g.edge(e);
                for forward in [true, false] {
                    if (forward && edge.tail == at) || (!forward && edge.head == at) {
                        let mut steps = w.steps.clone();
                        steps.push(Step::new(e, forward));
                        stack.push(ClosedWalk::new(0, steps));
                    }
                }
            }
        }
        for (coords, len) in best {
            let class = HomologyClass::new(coords);
            let support = h.circulation_of(&class).unwrap().support();
            let through_start = support.iter().any(|e| g.edge(e).tail == 0 || g.edge(e).head == 0);
            if h.is_primitive(&class).unwrap() && through_start {
                assert_eq!(len, h.length(&class).unwrap());
            }
        }
    }
}

#[test]
fn tail_bounds_shrink_iff_squares_converge() {
    let geometric = make_comb::<Rational>(12).unwrap().representative;
    let harmonic = SigmaRepresentative::from_lengths((1..=40).map(|i| q(1, i)).collect(), TailBound::SquareSum(q(1, 40))).unwrap();
    for rep in [&geometric, &harmonic] {
        let tails: Vec<Rational> = (0..=rep.len()).map(|n| sigma_tail_bound(rep, n).unwrap().unwrap().pi_coeff).collect();
        assert!(tails.windows(2).all(|w| w[1] <= w[0]));
    }
    let last = sigma_tail_bound(&harmonic, 40).unwrap().unwrap().pi_coeff;
    assert!(last <= q(1, 80));
    let constant = SigmaRepresentative::from_lengths(vec![q(1, 1); 40], TailBound::Unbounded).unwrap();
    assert!((0..=40).all(|n| sigma_tail_bound(&constant, n).unwrap().is_none()));
}

#[test]
fn generators_are_deterministic_and_round_trip() {
    for recipe in [
        SpaceRecipe::Owl,
        SpaceRecipe::Ladder { n: 7 },
        SpaceRecipe::Comb { n: 6, sides: 3 },
        SpaceRecipe::SineComb { n: 6, sides: 1 },
        SpaceRecipe::Cycle { k: 1, total_length: "1".into() },
        SpaceRecipe::Cycle { k: 4, total_length: "1".into() },
    ] {
        let a = recipe.build::<Rational>().unwrap();
        let b = recipe.build::<Rational>().unwrap();
        assert_eq!(space_to_value(&recipe, &a).to_string(), space_to_value(&recipe, &b).to_string());
        let text = graph_to_string(&a.graph);
        assert_eq!(cyclespace::json::parse_graph::<Rational>(&text).unwrap(), a.graph);
        let h = Homology::new(&a.graph);
        for (_, class) in &a.classes {
            assert_eq!(h.class_of(&h.circulation_of(class).unwrap()).unwrap(), *class);
        }
    }
}

#[test]
fn comb_gap_for_many_n() {
    for n in 1..=40usize {
        let comb = make_comb::<Rational>(n).unwrap();
        assert!(comb.representative.prefix_length() < q(1, 1));
        assert!(walk_length(&comb.graph, &comb.connected_walk).unwrap() >= Rational::from_int(2 * n as i64));
    }
}
