use color488::analysis::{run_samples, SampleJob};
use color488::decoders::{
    check_failure, decode_correlated, decode_restricted, Decoder, DecoderConfig, DecoderKind,
    Order, SpacetimeSyndrome,
};
use color488::lattice::{restricted_graph, Color, ColorCodeLattice};
use color488::matching::{
    build_defect_graph, build_sparse_defect_graph, mwpm, recover_paths, DefectGraph,
};
use color488::noise::{sample_bitflip, sample_depolarizing_mapped, syndrome, NoiseModel, ShotRng};
use color488::Weight;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn distance() -> impl Strategy<Value = usize> {
    prop_oneof![Just(4usize), Just(6), Just(8)]
}

fn lattice(d: usize) -> ColorCodeLattice {
    ColorCodeLattice::new(d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn restricted_graph_is_a_pure_function(d in distance(), blue in any::<bool>(), w_b in 0.9f64..=1.0) {
        let lat = lattice(d);
        let color = if blue { Color::Blue } else { Color::Green };
        let a = restricted_graph(&lat, color, w_b).unwrap();
        let b = restricted_graph(&lat, color, w_b).unwrap();
        prop_assert_eq!(&a.edges, &b.edges);
        prop_assert_eq!(a.num_nodes(), b.num_nodes());
        for v in 0..a.num_nodes() {
            prop_assert_eq!(a.neighbours(v), b.neighbours(v));
        }
    }

    #[test]
    fn matched_paths_flip_exactly_the_defects(d in distance(), seed in any::<u64>(), density in 0.02f64..0.3) {
        let lat = lattice(d);
        let g = restricted_graph(&lat, Color::Blue, 0.999).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut checks: Vec<usize> = (0..g.num_nodes()).filter(|&v| !g.is_boundary(v)).collect();
        checks.shuffle(&mut rng);
        let k = ((checks.len() as f64 * density) as usize).max(1);
        let defects = &checks[..k];
        for dg in [build_defect_graph(&g, defects).unwrap(), build_sparse_defect_graph(&g, defects).unwrap()] {
            let m = mwpm(&dg, Some(seed)).unwrap();
            let paths = recover_paths(&m, &dg);
            let mut parity = vec![false; g.num_nodes()];
            for &e in paths.iter().flatten() {
                let edge = &g.edges[e];
                parity[edge.a] ^= true;
                parity[edge.b] ^= true;
            }
            for v in 0..g.num_nodes() {
                if !g.is_boundary(v) {
                    prop_assert_eq!(parity[v], defects.contains(&v), "node {}", v);
                }
            }
        }
    }

    #[test]
    fn sparse_and_complete_graphs_agree(d in distance(), seed in any::<u64>(), density in 0.02f64..0.5) {
        let lat = lattice(d);
        let g = restricted_graph(&lat, Color::Green, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let checks: Vec<usize> = (0..g.num_nodes()).filter(|&v| !g.is_boundary(v)).collect();
        let defects: Vec<usize> = checks.into_iter().filter(|_| rand::Rng::random_bool(&mut rng, density)).collect();
        let full = mwpm(&build_defect_graph(&g, &defects).unwrap(), None).unwrap();
        let sparse = mwpm(&build_sparse_defect_graph(&g, &defects).unwrap(), None).unwrap();
        prop_assert_eq!(full.weight, sparse.weight);
    }

    #[test]
    fn matching_is_deterministic(n in 1usize..8, seed in any::<u64>(), ws in proptest::collection::vec(1i64..50, 120)) {
        let n = 2 * n;
        let mut edges = Vec::new();
        let mut it = ws.iter().cycle();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b, Weight::from_units(*it.next().unwrap())));
            }
        }
        let g = DefectGraph::from_edges(n, &edges).unwrap();
        prop_assert_eq!(mwpm(&g, Some(seed)).unwrap(), mwpm(&g, Some(seed)).unwrap());
        prop_assert_eq!(mwpm(&g, None).unwrap(), mwpm(&g, None).unwrap());
    }

    #[test]
    fn decodes_leave_no_residual_syndrome(d in distance(), seed in any::<u64>(), p in 0.0f64..0.2, depol in any::<bool>()) {
        let lat = lattice(d);
        let mut rng = ShotRng::for_shot(seed, 0);
        let error = if depol { sample_depolarizing_mapped(&lat, p, &mut rng) } else { sample_bitflip(&lat, p, &mut rng) };
        let syn = syndrome(&lat, &error);
        for cfg in [DecoderConfig::restricted(), DecoderConfig::correlated(), DecoderConfig::correlated().with_order(Order::RgThenRb)] {
            let corr = Decoder::new(&lat, cfg).unwrap().decode(&syn, Some(seed)).unwrap();
            prop_assert!(corr.residual_zero);
            prop_assert!(check_failure(&error, &corr, &lat).is_ok());
        }
    }

    #[test]
    fn correlated_without_zeroing_is_restricted(d in distance(), seed in any::<u64>(), p in 0.0f64..0.15) {
        let lat = lattice(d);
        let error = sample_bitflip(&lat, p, &mut ShotRng::for_shot(seed, 1));
        let syn = syndrome(&lat, &error);
        let cfg = DecoderConfig { zero_weight_enabled: false, w_b: 1.0, seed: Some(seed), ..DecoderConfig::correlated() };
        prop_assert_eq!(decode_correlated(&lat, &syn, &cfg).unwrap(), decode_restricted(&lat, &syn, &cfg).unwrap());
    }

    #[test]
    fn zeroing_never_raises_stage_two_weight(d in distance(), seed in any::<u64>(), p in 0.0f64..0.15) {
        let lat = lattice(d);
        let error = sample_bitflip(&lat, p, &mut ShotRng::for_shot(seed, 2));
        let syn = SpacetimeSyndrome::single(&syndrome(&lat, &error));
        let off = Decoder::new(&lat, DecoderConfig { zero_weight_enabled: false, ..DecoderConfig::correlated() }).unwrap();
        let on = Decoder::new(&lat, DecoderConfig::correlated()).unwrap();
        let a = off.decode_traced_independent(&syn, Some(seed)).unwrap();
        let b = on.decode_traced(&syn, Some(seed)).unwrap();
        prop_assert!(b.second.matching.weight.units() <= a.second.matching.weight.units());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn tallies_ignore_worker_count(seed in any::<u64>(), family in 0usize..4, restricted in any::<bool>()) {
        let family = [
            NoiseModel::BitflipColor,
            NoiseModel::DepolarizingSurfaceMapped,
            NoiseModel::PhenomenologicalColor,
            NoiseModel::PhenomenologicalSurfaceMapped,
        ][family];
        let decoder = if restricted { DecoderKind::Restricted } else { DecoderKind::Correlated };
        let p = if family.is_phenomenological() { 0.03 } else { 0.09 };
        let job = SampleJob::new(family, decoder, 4, p, 64, seed);
        let a = run_samples(&job, Some(1)).unwrap();
        prop_assert_eq!(&a, &run_samples(&job, Some(3)).unwrap());
        prop_assert_eq!(&a, &run_samples(&job, None).unwrap());
    }
}
