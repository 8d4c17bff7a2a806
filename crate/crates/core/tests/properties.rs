//! Randomised invariants of the simulator, pool, tasks, supernet and tree.

use std::f64::consts::PI;

use proptest::prelude::*;

use qas_core::tasks::{oracle_ground_energy, oracle_maxcut, maxcut_hamiltonian};
use qas_core::{
    allowed_actions, bind_circuit, build_pool, finetune, init_params, CircuitLayout, GateKind, GateOp, Graph,
    HardLimits, InitKind, InitScheme, OperationPool, OptimizerConfig, OptimizerMethod, PauliSumObservable,
    SearchConfig, SearchTree, SharedParameters, StateVector, Task, Topology, VqlsPayload,
};
use qas_core::simulator::PauliString;

fn gate_strategy(n: usize) -> impl Strategy<Value = GateOp> {
    let angle = -PI..PI;
    (0..7usize, 0..n, 1..n.max(2), angle.clone(), angle.clone(), angle).prop_map(move |(k, q, off, a, b, c)| {
        match k {
            0 => GateOp::h(q),
            1 if n > 1 => GateOp::cnot(q, (q + off) % n),
            2 => GateOp::rot(q, a, b, c),
            3 => GateOp::rz(q, a),
            4 => GateOp::ry(q, a),
            5 => GateOp::u3(q, a, b, c),
            _ => GateOp::placeholder(),
        }
    })
}

fn circuit_strategy() -> impl Strategy<Value = (usize, Vec<GateOp>)> {
    (1..=6usize).prop_flat_map(|n| (Just(n), prop::collection::vec(gate_strategy(n), 0..30)))
}

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (2..=6usize).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let m = pairs.len();
        (Just(n), Just(pairs), prop::collection::vec((any::<bool>(), 0.1f64..3.0), m)).prop_map(|(n, pairs, pick)| {
            let edges: Vec<(usize, usize, f64)> =
                pairs.iter().zip(&pick).filter(|(_, (keep, _))| *keep).map(|(&(u, v), &(_, w))| (u, v, w)).collect();
            Graph::weighted(n, &edges).unwrap()
        })
    })
}

fn random_layout_params(pool: &OperationPool, picks: &[usize], seed: u64) -> (CircuitLayout, SharedParameters) {
    let layout = CircuitLayout::new(picks.iter().map(|&k| k % pool.size()).collect());
    let layers = layout.len().max(1);
    let params = init_params(layers, pool.size(), pool.max_params().max(1), InitScheme::Uniform { half_width: PI }, seed)
        .unwrap();
    (layout, params)
}

fn rich_pool(n: usize) -> OperationPool {
    build_pool(n, &[GateKind::Rot, GateKind::Ry, GateKind::H], &Topology::AllToAll, true).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gates_preserve_norm((n, gates) in circuit_strategy()) {
        let mut s = StateVector::new(n, InitKind::Plus).unwrap();
        for g in &gates {
            s.apply(g).unwrap();
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn expectation_is_linear_in_coefficients(
        (n, gates) in circuit_strategy(),
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
        seed in any::<u64>(),
    ) {
        let words: Vec<String> = {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            (0..2).map(|_| (0..n).map(|_| ['I', 'X', 'Y', 'Z'][rng.gen_range(0..4)]).collect()).collect()
        };
        let s = qas_core::run_gates(&StateVector::new(n, InitKind::Zeros).unwrap(), &gates).unwrap();
        let p = PauliString::parse(&words[0]).unwrap();
        let q = PauliString::parse(&words[1]).unwrap();
        let ep = p.expectation_complex(&s).unwrap();
        let eq = q.expectation_complex(&s).unwrap();
        prop_assert!(ep.im.abs() <= 1e-10 && eq.im.abs() <= 1e-10);
        let sum = PauliSumObservable::from_words(n, &[(a, &words[0]), (b, &words[1])]).unwrap();
        prop_assert!((sum.expectation(&s).unwrap() - (a * ep.re + b * eq.re)).abs() <= 1e-10);
    }

    #[test]
    fn allowed_actions_shrink_and_never_dead_end(
        n in 2..=4usize,
        cap in 0..4usize,
        picks in prop::collection::vec(any::<usize>(), 1..8),
    ) {
        let pool = rich_pool(n);
        let limits = HardLimits::new(8).unwrap().with_cap(GateKind::Cnot, cap).with_cap(GateKind::H, 1);
        let mut prefix = CircuitLayout::empty();
        let mut prev = allowed_actions(&prefix, &pool, &limits).unwrap();
        for &pick in &picks {
            prop_assert!(!prev.is_empty());
            prefix.push(prev[pick % prev.len()]);
            if prefix.len() == limits.max_layers {
                break;
            }
            let next = allowed_actions(&prefix, &pool, &limits).unwrap();
            prop_assert!(next.iter().all(|a| prev.contains(a)));
            prop_assert!(next.contains(&pool.placeholder_index().unwrap()));
            prev = next;
        }
        prop_assert!(limits.admits(&pool, &prefix));
    }

    #[test]
    fn pool_order_is_canonical(n in 1..=5usize, ring in any::<bool>()) {
        let topo = if ring { Topology::Ring } else { Topology::Line };
        let a = build_pool(n, &[GateKind::Ry, GateKind::Rot], &topo, true).unwrap();
        let b = build_pool(n, &[GateKind::Rot, GateKind::Ry], &topo, true).unwrap();
        prop_assert_eq!(a.entries(), b.entries());
        let e = a.entries();
        prop_assert_eq!(e.last().unwrap().kind, GateKind::Placeholder);
        let singles: Vec<_> = e.iter().filter(|x| x.wires.len() == 1).map(|x| (x.kind, x.wires[0])).collect();
        let mut sorted = singles.clone();
        sorted.sort();
        prop_assert_eq!(singles, sorted);
        let cnots: Vec<_> = e.iter().filter(|x| x.kind == GateKind::Cnot).map(|x| (x.wires[0], x.wires[1])).collect();
        let mut sorted = cnots.clone();
        sorted.sort();
        prop_assert_eq!(cnots, sorted);
    }

    #[test]
    fn qec_loss_in_unit_interval(picks in prop::collection::vec(any::<usize>(), 0..8), seed in any::<u64>()) {
        let task = Task::qec422().unwrap();
        let pool = rich_pool(4);
        let (layout, params) = random_layout_params(&pool, &picks, seed);
        let l = task.loss(&pool, &layout, &params).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&l));
    }

    #[test]
    fn vqls_cost_in_unit_interval(
        n in 1..=4usize,
        words in prop::collection::vec((-1.0f64..1.0, 0..4usize), 0..4),
        picks in prop::collection::vec(any::<usize>(), 0..8),
        seed in any::<u64>(),
    ) {
        let mut terms = vec![(2.0, PauliString::identity(n))];
        for (i, (c, q)) in words.iter().enumerate() {
            let mut w = vec!['I'; n];
            w[q % n] = ['X', 'Y', 'Z'][i % 3];
            terms.push((*c * 0.5, PauliString::parse(&w.iter().collect::<String>()).unwrap()));
        }
        let task = Task::vqls(VqlsPayload::new(n, terms).unwrap()).unwrap();
        let pool = rich_pool(n);
        let (layout, params) = random_layout_params(&pool, &picks, seed);
        let c = task.loss(&pool, &layout, &params).unwrap();
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&c));
    }

    #[test]
    fn chemistry_loss_respects_variational_bound(
        n in 1..=4usize,
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..6),
        seed in any::<u64>(),
        picks in prop::collection::vec(any::<usize>(), 0..10),
    ) {
        let words: Vec<String> = {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            coeffs.iter().map(|_| (0..n).map(|_| ['I', 'X', 'Y', 'Z'][rng.gen_range(0..4)]).collect()).collect()
        };
        let refs: Vec<(f64, &str)> = coeffs.iter().zip(&words).map(|(c, w)| (*c, w.as_str())).collect();
        let h = PauliSumObservable::from_words(n, &refs).unwrap();
        let e0 = oracle_ground_energy(&h).unwrap();
        let task = Task::chemistry(h).unwrap();
        let pool = rich_pool(n);
        let (layout, params) = random_layout_params(&pool, &picks, seed);
        prop_assert!(task.loss(&pool, &layout, &params).unwrap() >= e0 - 1e-9);
    }

    #[test]
    fn maxcut_loss_bounded_by_max_cut(
        graph in graph_strategy(),
        picks in prop::collection::vec(any::<usize>(), 0..10),
        seed in any::<u64>(),
    ) {
        let (best, argmax) = oracle_maxcut(&graph).unwrap();
        let h = maxcut_hamiltonian(&graph).unwrap();
        let e0 = oracle_ground_energy(&h).unwrap();
        prop_assert!((e0 + best).abs() <= 1e-9);
        for bits in &argmax {
            prop_assert!((graph.cut_value(bits).unwrap() - best).abs() <= 1e-9);
        }
        let task = Task::maxcut(graph.clone()).unwrap();
        let pool = rich_pool(graph.vertices);
        let (layout, params) = random_layout_params(&pool, &picks, seed);
        prop_assert!(task.loss(&pool, &layout, &params).unwrap() >= -best - 1e-9);
        let identity = task.loss(&pool, &CircuitLayout::empty(), &params).unwrap();
        prop_assert!((identity + graph.total_weight() / 2.0).abs() <= 1e-9);
    }

    #[test]
    fn trailing_placeholder_costs_exactly_beta(
        beta in 0.0f64..0.5,
        picks in prop::collection::vec(any::<usize>(), 0..5),
        seed in any::<u64>(),
    ) {
        let graph = Graph::unweighted(3, &[(0, 1), (1, 2)]).unwrap();
        let task = Task::maxcut(graph).unwrap().with_penalty(beta);
        let pool = rich_pool(3);
        let ph = pool.placeholder_index().unwrap();
        let (layout, _) = random_layout_params(&pool, &picks, seed);
        let longer = layout.extended(ph);
        let params = init_params(longer.len(), pool.size(), 3, InitScheme::Uniform { half_width: PI }, seed).unwrap();
        let a = task.evaluate(&pool, &layout, &params).unwrap();
        let b = task.evaluate(&pool, &longer, &params).unwrap();
        prop_assert!((a.loss - b.loss).abs() <= 1e-12);
        prop_assert!((a.reward - b.reward - beta).abs() <= 1e-12);
    }

    #[test]
    fn finetune_touches_only_layout_slots(
        picks in prop::collection::vec(any::<usize>(), 1..6),
        seed in any::<u64>(),
    ) {
        let task = Task::chemistry(PauliSumObservable::from_words(3, &[(1.0, "ZZI"), (0.5, "XIX")]).unwrap()).unwrap();
        let pool = rich_pool(3);
        let (layout, params) = random_layout_params(&pool, &picks, seed);
        let cfg = OptimizerConfig { steps: 3, learning_rate: 0.05, ..Default::default() };
        let (after, _) = finetune(&task, &pool, &layout, &params, &cfg).unwrap();
        let touched = params.touched_indices(&pool, &layout).unwrap();
        for (i, (x, y)) in params.values().iter().zip(after.values()).enumerate() {
            if !touched.contains(&i) {
                prop_assert_eq!(x.to_bits(), y.to_bits());
            }
        }
        // Any two layouts sharing a (layer, op) pair read the same angles.
        let other = CircuitLayout::new(layout.iter().copied().rev().collect());
        for (layer, (&k1, &k2)) in layout.iter().zip(other.iter()).enumerate() {
            if k1 == k2 {
                let g1 = bind_circuit(&pool, &layout, &after).unwrap();
                let g2 = bind_circuit(&pool, &other, &after).unwrap();
                prop_assert_eq!(&g1[layer].params, &g2[layer].params);
            }
        }
    }

    #[test]
    fn alpha_zero_selection_ignores_reward_offset(shift in 0u32..50, seed in 0u64..1000) {
        // Non-negative whole offsets keep ratio-0 pruning inactive and the running means exact.
        let offset = f64::from(shift);
        let pool = build_pool(3, &[GateKind::Ry], &Topology::Line, true).unwrap();
        let limits = HardLimits::new(3).unwrap();
        let cfg = SearchConfig { alpha: 0.0, prune_ratio: 0.0, seed, ..Default::default() };
        let score = |l: &CircuitLayout| l.iter().enumerate().map(|(i, &k)| ((k * 5 + i) % 7) as f64).sum::<f64>();
        let mut a = SearchTree::new(&pool, &limits, &cfg).unwrap();
        let mut b = SearchTree::new(&pool, &limits, &cfg).unwrap();
        for _ in 0..5 {
            let la = a.sample_arc(&mut |l: &CircuitLayout| Ok(score(l)), 6).unwrap();
            let lb = b.sample_arc(&mut |l: &CircuitLayout| Ok(score(l) + offset), 6).unwrap();
            prop_assert_eq!(la, lb);
        }
    }

    #[test]
    fn fixed_arc_means_and_arc_consistency(rewards in prop::collection::vec(-5.0f64..5.0, 1..20)) {
        let pool = build_pool(2, &[GateKind::Ry], &Topology::Line, false).unwrap();
        let limits = HardLimits::new(3).unwrap();
        let mut tree = SearchTree::new(&pool, &limits, &SearchConfig::default()).unwrap();
        let leaf = tree.descend(tree.root()).unwrap();
        for &r in &rewards {
            tree.backpropagate(leaf, r);
        }
        let mean = rewards.iter().sum::<f64>() / rewards.len() as f64;
        let mut cur = leaf;
        while let Some((parent, action)) = tree.node(cur).parent() {
            let node = tree.node(cur);
            prop_assert_eq!(node.depth(), tree.node(parent).depth() + 1);
            prop_assert_eq!(*node.prefix().last().unwrap(), action);
            let arm = tree.node(parent).arm(action).unwrap();
            prop_assert_eq!(arm.pulls, rewards.len() as u64);
            prop_assert!((arm.avg_reward - mean).abs() <= 1e-12);
            cur = parent;
        }
    }
}

#[test]
fn one_parameter_finetune_descends_monotonically() {
    let task = Task::chemistry(PauliSumObservable::from_words(1, &[(1.0, "Z")]).unwrap()).unwrap();
    let pool = build_pool(1, &[GateKind::Ry], &Topology::Line, false).unwrap();
    let layout = CircuitLayout::new(vec![0]);
    let params = SharedParameters::from_values((1, 1, 1), vec![0.3]).unwrap();
    // Plain gradient descent; Adam's momentum overshoots near the minimum.
    for lr in [0.01, 0.05, 0.1] {
        let cfg = OptimizerConfig { method: OptimizerMethod::Sgd, learning_rate: lr, steps: 200, ..Default::default() };
        let (_, trace) = finetune(&task, &pool, &layout, &params, &cfg).unwrap();
        for w in trace[5..].windows(2) {
            assert!(w[1] <= w[0] + 1e-15, "lr {lr}: {} -> {}", w[0], w[1]);
        }
    }
}
