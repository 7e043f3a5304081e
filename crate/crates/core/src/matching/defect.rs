//! Defect graphs and minimum-weight perfect matching over them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::blossom::max_weight_matching;
use super::paths::{boundary_distances, shortest_paths, shortest_paths_bounded, ShortestPaths};
use crate::error::{Error, Result};
use crate::lattice::RestrictedGraph;
use crate::weight::Weight;

/// Complete matching problem over a set of defects.
///
/// With `k` defects, nodes `0..k` are the defects and node `k + i` is the
/// virtual partner of defect `i`. Defect pairs are joined at their
/// shortest-path distance, each defect to its own partner at its boundary
/// distance, and partners to each other at zero cost.
#[derive(Clone, Debug)]
pub struct DefectGraph {
    /// Restricted-graph node of each defect (empty for abstract graphs).
    pub defects: Vec<usize>,
    num_nodes: usize,
    /// Dense symmetric weights, `None` where no edge exists.
    weights: Vec<Option<Weight>>,
    tables: Vec<ShortestPaths>,
    /// Boundary node reached by each defect's own-partner edge.
    exits: Vec<usize>,
    /// Boundary distance of each defect in sparse graphs, empty otherwise.
    reach: Vec<Weight>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matching {
    /// Matched node pairs with `a < b`, sorted.
    pub pairs: Vec<(usize, usize)>,
    /// Restricted-graph edge indices realising each pair (empty for abstract
    /// graphs and for partner-partner pairs).
    pub paths: Vec<Vec<usize>>,
    pub weight: Weight,
}

impl Matching {
    pub fn empty() -> Self {
        Matching {
            pairs: Vec::new(),
            paths: Vec::new(),
            weight: Weight::ZERO,
        }
    }
}

/// Builds the complete defect graph for `defects`, given as restricted-graph
/// nodes.
pub fn build_defect_graph(g: &RestrictedGraph, defects: &[usize]) -> Result<DefectGraph> {
    build(g, defects, false)
}

/// Like [`build_defect_graph`], but leaves out every defect pair at least as
/// far apart as the sum of their boundary distances. Such a pair can always
/// be replaced by two boundary matches of no greater weight, so the minimum
/// matching weight is unchanged, and the searches stop much earlier.
pub fn build_sparse_defect_graph(g: &RestrictedGraph, defects: &[usize]) -> Result<DefectGraph> {
    build(g, defects, true)
}

fn build(g: &RestrictedGraph, defects: &[usize], sparse: bool) -> Result<DefectGraph> {
    for &d in defects {
        if d >= g.num_nodes() || g.is_boundary(d) {
            return Err(Error::InvalidParameter(format!(
                "defect {d} is not a check node of the graph"
            )));
        }
    }
    let k = defects.len();
    let reach: Vec<Weight> = if sparse {
        let all = boundary_distances(g);
        defects.iter().map(|&x| all[x]).collect()
    } else {
        Vec::new()
    };
    let tables: Vec<ShortestPaths> = if sparse {
        (0..k)
            .map(|i| {
                let targets: Vec<(usize, Weight)> = (0..k)
                    .filter(|&j| owns(&reach, i, j))
                    .map(|j| (defects[j], reach[j]))
                    .collect();
                shortest_paths_bounded(g, defects[i], reach[i], &targets)
            })
            .collect()
    } else {
        shortest_paths(g, defects)
    };
    let mut dg = DefectGraph::with_nodes(2 * k);
    let mut exits = Vec::with_capacity(k);
    for i in 0..k {
        for j in i + 1..k {
            let w = if sparse {
                let (s, t) = if owns(&reach, i, j) { (i, j) } else { (j, i) };
                let w = tables[s].distance(defects[t]);
                if w < reach[i] + reach[j] {
                    w
                } else {
                    Weight::INFINITY
                }
            } else {
                tables[i].distance(defects[j])
            };
            if w.is_finite() {
                dg.set(i, j, w);
            }
        }
        let (b, w) = tables[i].nearest_boundary(g);
        if w.is_finite() {
            dg.set(i, k + i, w);
        }
        exits.push(b);
        for j in i + 1..k {
            dg.set(k + i, k + j, Weight::ZERO);
        }
    }
    dg.defects = defects.to_vec();
    dg.tables = tables;
    dg.exits = exits;
    dg.reach = reach;
    Ok(dg)
}

/// Whether the search from defect `i` is responsible for the pair `(i, j)`:
/// the endpoint farther from the boundary owns it, ties to the smaller index.
/// The owner's search radius then stays within twice its boundary distance.
fn owns(reach: &[Weight], i: usize, j: usize) -> bool {
    i != j && (reach[i] > reach[j] || (reach[i] == reach[j] && i < j))
}

impl DefectGraph {
    fn with_nodes(n: usize) -> Self {
        DefectGraph {
            defects: Vec::new(),
            num_nodes: n,
            weights: vec![None; n * n],
            tables: Vec::new(),
            exits: Vec::new(),
            reach: Vec::new(),
        }
    }

    /// An abstract weighted graph with no lattice behind it.
    pub fn from_edges(num_nodes: usize, edges: &[(usize, usize, Weight)]) -> Result<Self> {
        let mut g = DefectGraph::with_nodes(num_nodes);
        for &(a, b, w) in edges {
            if a == b || a >= num_nodes || b >= num_nodes {
                return Err(Error::InvalidParameter(format!(
                    "edge ({a}, {b}) invalid for {num_nodes} nodes"
                )));
            }
            if w < Weight::ZERO {
                return Err(Error::InvalidParameter(format!(
                    "edge ({a}, {b}) has negative weight"
                )));
            }
            g.set(a, b, w);
        }
        Ok(g)
    }

    fn set(&mut self, a: usize, b: usize, w: Weight) {
        let n = self.num_nodes;
        self.weights[a * n + b] = Some(w);
        self.weights[b * n + a] = Some(w);
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_defects(&self) -> usize {
        self.defects.len()
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<Weight> {
        self.weights[a * self.num_nodes + b]
    }

    /// Edges `(a, b, w)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize, Weight)> {
        let n = self.num_nodes;
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if let Some(w) = self.weight(a, b) {
                    out.push((a, b, w));
                }
            }
        }
        out
    }

    fn is_virtual(&self, node: usize) -> bool {
        !self.tables.is_empty() && node >= self.defects.len()
    }

    /// Restricted-graph node behind a defect-graph node; partners resolve to
    /// the boundary node their defect exits through.
    pub fn resolve(&self, node: usize) -> Option<usize> {
        if self.tables.is_empty() {
            None
        } else if self.is_virtual(node) {
            Some(self.exits[node - self.defects.len()])
        } else {
            Some(self.defects[node])
        }
    }

    /// JSON-friendly view used by decode traces.
    pub fn dump(&self) -> DefectGraphDump {
        DefectGraphDump {
            defects: self.defects.clone(),
            num_nodes: self.num_nodes,
            edges: self
                .edges()
                .into_iter()
                .map(|(a, b, w)| (a, b, w.to_f64()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectGraphDump {
    pub defects: Vec<usize>,
    pub num_nodes: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

/// Exact minimum-weight perfect matching.
///
/// With a seed, every edge gets an independent perturbation below the
/// nominal resolution, so exactly tied optima are chosen between at random
/// while strictly better matchings always win.
pub fn mwpm(g: &DefectGraph, seed: Option<u64>) -> Result<Matching> {
    let n = g.num_nodes();
    if n % 2 == 1 {
        return Err(Error::OddNodeCount(n));
    }
    if n == 0 {
        return Ok(Matching::empty());
    }
    let mut w = g.weights.clone();
    if let Some(seed) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for a in 0..n {
            for b in a + 1..n {
                if let Some(x) = w[a * n + b] {
                    let y = x.perturbed(rng.random());
                    w[a * n + b] = Some(y);
                    w[b * n + a] = Some(y);
                }
            }
        }
    }
    let pairs = if g.tables.is_empty() {
        solve_general(n, &w)?
    } else {
        solve_with_partners(g.defects.len(), &w)?
    };
    let weight = pairs
        .iter()
        .map(|&(a, b)| g.weight(a, b).expect("matched along an edge"))
        .sum();
    let mut m = Matching {
        pairs,
        paths: Vec::new(),
        weight,
    };
    m.paths = recover_paths(&m, g);
    Ok(m)
}

fn solve_general(n: usize, w: &[Option<Weight>]) -> Result<Vec<(usize, usize)>> {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if let Some(x) = w[a * n + b] {
                edges.push((a, b, x.raw()));
            }
        }
    }
    let top = edges.iter().map(|e| e.2).max().unwrap_or(0) + 1;
    let gains: Vec<(usize, usize, i128)> = edges.iter().map(|&(a, b, x)| (a, b, top - x)).collect();
    let mate = max_weight_matching(n, &gains, true);
    if mate.iter().any(Option::is_none) {
        return Err(Error::NoPerfectMatching);
    }
    Ok(mate
        .iter()
        .enumerate()
        .filter_map(|(a, m)| m.filter(|&b| a < b).map(|b| (a, b)))
        .collect())
}

/// Partner graphs reduce to a matching over the defects alone: pairing `i`
/// with `j` instead of sending both to the boundary saves
/// `b_i + b_j - d_ij`, and a maximum-saving matching gives the optimum.
fn solve_with_partners(k: usize, w: &[Option<Weight>]) -> Result<Vec<(usize, usize)>> {
    let n = 2 * k;
    let exit = |i: usize| w[i * n + k + i];
    let mut gains = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let Some(dij) = w[i * n + j] else { continue };
            let gain = match (exit(i), exit(j)) {
                (Some(bi), Some(bj)) => (bi + bj - dij).raw(),
                // a defect without a boundary route must pair up
                _ => Weight::INFINITY.raw() / 4,
            };
            if gain > 0 {
                gains.push((i, j, gain));
            }
        }
    }
    let mate = max_weight_matching(k, &gains, false);
    let mut pairs = Vec::with_capacity(k);
    let mut spare = Vec::new();
    for (i, m) in mate.iter().enumerate() {
        match m {
            Some(j) if i < *j => pairs.push((i, *j)),
            Some(_) => {}
            None => {
                if exit(i).is_none() {
                    return Err(Error::NoPerfectMatching);
                }
                pairs.push((i, k + i));
            }
        }
        if m.is_some() {
            spare.push(k + i);
        }
    }
    pairs.extend(spare.chunks(2).map(|c| (c[0], c[1])));
    pairs.sort_unstable();
    Ok(pairs)
}

/// Restricted-graph edges realising each matched pair.
pub fn recover_paths(m: &Matching, g: &DefectGraph) -> Vec<Vec<usize>> {
    let k = g.defects.len();
    m.pairs
        .iter()
        .map(|&(a, b)| {
            if g.tables.is_empty() || (g.is_virtual(a) && g.is_virtual(b)) {
                Vec::new()
            } else if g.is_virtual(b) {
                debug_assert_eq!(b, a + k);
                g.tables[a].path_to(g.exits[a])
            } else if g.reach.is_empty() || owns(&g.reach, a, b) {
                g.tables[a].path_to(g.defects[b])
            } else {
                let mut path = g.tables[b].path_to(g.defects[a]);
                path.reverse();
                path
            }
        })
        .collect()
}

/// Subset dynamic program, for graphs of at most this many nodes.
pub const ORACLE_NODE_LIMIT: usize = 20;

/// Exact minimum-weight perfect matching by dynamic programming over node
/// subsets. Exponential; meant as a reference.
pub fn mwpm_oracle(g: &DefectGraph) -> Result<Matching> {
    let n = g.num_nodes();
    if n > ORACLE_NODE_LIMIT {
        return Err(Error::Capacity(format!(
            "{n} nodes exceed the oracle limit of {ORACLE_NODE_LIMIT}"
        )));
    }
    if n % 2 == 1 {
        return Err(Error::OddNodeCount(n));
    }
    let full = (1usize << n) - 1;
    // best[mask]: cheapest perfect matching of the nodes in mask
    let mut best: Vec<Option<Weight>> = vec![None; 1 << n];
    let mut choice = vec![0usize; 1 << n];
    best[0] = Some(Weight::ZERO);
    for mask in 1..=full {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let a = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << a);
        let mut r = rest;
        while r != 0 {
            let b = r.trailing_zeros() as usize;
            r &= r - 1;
            let (Some(w), Some(sub)) = (g.weight(a, b), best[rest & !(1 << b)]) else {
                continue;
            };
            let total = sub + w;
            if best[mask].is_none_or(|cur| total < cur) {
                best[mask] = Some(total);
                choice[mask] = b;
            }
        }
    }
    let weight = best[full].ok_or(Error::NoPerfectMatching)?;
    let mut pairs = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let a = mask.trailing_zeros() as usize;
        let b = choice[mask];
        pairs.push((a, b));
        mask &= !(1 << a) & !(1 << b);
    }
    pairs.sort_unstable();
    let mut m = Matching {
        pairs,
        paths: Vec::new(),
        weight,
    };
    m.paths = recover_paths(&m, g);
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{restricted_graph, Color, ColorCodeLattice, EdgeKind};
    use proptest::prelude::*;
    use rand::Rng;

    fn w(x: i64) -> Weight {
        Weight::from_units(x)
    }

    #[test]
    fn forced_single_edge() {
        let g = DefectGraph::from_edges(2, &[(0, 1, w(7))]).unwrap();
        let m = mwpm(&g, None).unwrap();
        assert_eq!(m.pairs, vec![(0, 1)]);
        assert_eq!(m.weight, w(7));
        assert_eq!(mwpm_oracle(&g).unwrap().weight, w(7));
    }

    #[test]
    fn four_cycle() {
        let g =
            DefectGraph::from_edges(4, &[(0, 1, w(1)), (1, 2, w(1)), (2, 3, w(1)), (3, 0, w(1))])
                .unwrap();
        let m = mwpm(&g, Some(3)).unwrap();
        assert_eq!(m.weight.units(), 2);
        assert_eq!(m.pairs.len(), 2);
    }

    #[test]
    fn empty_and_odd() {
        let g = DefectGraph::from_edges(0, &[]).unwrap();
        assert_eq!(mwpm(&g, None).unwrap(), Matching::empty());
        assert_eq!(mwpm_oracle(&g).unwrap().weight, Weight::ZERO);
        let g = DefectGraph::from_edges(3, &[(0, 1, w(1))]).unwrap();
        assert!(matches!(mwpm(&g, None), Err(Error::OddNodeCount(3))));
        let g = DefectGraph::from_edges(22, &[]).unwrap();
        assert!(matches!(mwpm_oracle(&g), Err(Error::Capacity(_))));
    }

    #[test]
    fn seeded_ties_split_both_ways() {
        let g =
            DefectGraph::from_edges(4, &[(0, 1, w(1)), (1, 2, w(1)), (2, 3, w(1)), (3, 0, w(1))])
                .unwrap();
        let mut first = 0;
        for seed in 0..200 {
            let m = mwpm(&g, Some(seed)).unwrap();
            assert_eq!(m, mwpm(&g, Some(seed)).unwrap());
            if m.pairs[0] == (0, 1) {
                first += 1;
            }
        }
        assert!((60..140).contains(&first), "{first}");
    }

    #[test]
    fn two_defects_give_four_nodes() {
        let lat = ColorCodeLattice::new(4).unwrap();
        let g = restricted_graph(&lat, Color::Blue, 0.999).unwrap();
        let dg = build_defect_graph(&g, &[0, 1]).unwrap();
        assert_eq!(dg.num_nodes(), 4);
        assert_eq!(dg.edges().len(), 4);
        assert_eq!(dg.weight(2, 3), Some(Weight::ZERO));
        let empty = build_defect_graph(&g, &[]).unwrap();
        assert_eq!(mwpm(&empty, None).unwrap(), Matching::empty());
        let boundary = g.boundary_nodes().next().unwrap();
        assert!(build_defect_graph(&g, &[boundary]).is_err());
    }

    #[test]
    fn discounted_boundary_edge() {
        let lat = ColorCodeLattice::new(4).unwrap();
        let g = restricted_graph(&lat, Color::Blue, 0.999).unwrap();
        let boundary = g.boundary_nodes().next().unwrap();
        let (node, edge) = g
            .neighbours(boundary)
            .iter()
            .copied()
            .find(|&(_, e)| g.edges[e].discounted)
            .unwrap();
        let dg = build_defect_graph(&g, &[node]).unwrap();
        assert_eq!(dg.weight(0, 1), Some(Weight::from_f64(0.999)));
        let m = mwpm(&dg, None).unwrap();
        assert_eq!(m.paths, vec![vec![edge]]);
    }

    #[test]
    fn lattice_matchings_are_consistent() {
        let lat = ColorCodeLattice::new(6).unwrap();
        let g = restricted_graph(&lat, Color::Green, 1.0).unwrap();
        let checks = g.checks_per_round();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let mut defects: Vec<usize> = (0..checks).filter(|_| rng.random_bool(0.25)).collect();
            defects.truncate(10);
            let dg = build_defect_graph(&g, &defects).unwrap();
            let m = mwpm(&dg, Some(rng.random())).unwrap();
            assert_eq!(m.weight, mwpm_oracle(&dg).unwrap().weight);
            let mut parity = vec![0u8; g.num_nodes()];
            let mut total = Weight::ZERO;
            for (&(a, b), path) in m.pairs.iter().zip(&m.paths) {
                let expected = dg.weight(a, b).unwrap();
                let resum: Weight = path.iter().map(|&e| g.edges[e].weight).sum();
                assert_eq!(resum, expected);
                total += resum;
                if !(dg.is_virtual(a) && dg.is_virtual(b)) {
                    assert!(!path.is_empty());
                }
                for &e in path {
                    assert!(matches!(g.edges[e].kind, EdgeKind::Qubit { .. }));
                    parity[g.edges[e].a] ^= 1;
                    parity[g.edges[e].b] ^= 1;
                }
            }
            assert_eq!(total, m.weight);
            for node in 0..checks {
                assert_eq!(parity[node] == 1, defects.contains(&node));
            }
        }
    }

    #[test]
    fn sparse_graph_keeps_the_optimum() {
        let lat = ColorCodeLattice::new(8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let planar = restricted_graph(&lat, Color::Blue, 0.999).unwrap();
        let stacked = planar.spacetime(4, 0.02, 0.02).unwrap();
        for g in [planar, stacked] {
            let nodes: Vec<usize> = (0..g.num_nodes()).filter(|&v| !g.is_boundary(v)).collect();
            for density in [0.05, 0.15, 0.4] {
                for _ in 0..40 {
                    let mut h = g.clone();
                    h.perturb(rng.random());
                    let defects: Vec<usize> = nodes
                        .iter()
                        .copied()
                        .filter(|_| rng.random_bool(density))
                        .collect();
                    let full = mwpm(&build_defect_graph(&h, &defects).unwrap(), None).unwrap();
                    let sparse_dg = build_sparse_defect_graph(&h, &defects).unwrap();
                    let sparse = mwpm(&sparse_dg, None).unwrap();
                    assert_eq!(full.weight, sparse.weight);
                    for (&(a, b), path) in sparse.pairs.iter().zip(&sparse.paths) {
                        let resum: Weight = path.iter().map(|&e| h.edges[e].weight).sum();
                        assert_eq!(resum, sparse_dg.weight(a, b).unwrap());
                    }
                }
            }
        }
    }

    fn random_graph() -> impl Strategy<Value = DefectGraph> {
        (1usize..=7).prop_flat_map(|half| {
            let n = 2 * half;
            let pairs = n * (n - 1) / 2;
            proptest::collection::vec(proptest::option::weighted(0.8, 0i64..20), pairs).prop_map(
                move |ws| {
                    let mut edges = Vec::new();
                    let mut it = ws.into_iter();
                    for a in 0..n {
                        for b in a + 1..n {
                            if let Some(x) = it.next().unwrap() {
                                edges.push((a, b, Weight::from_units(x)));
                            }
                        }
                    }
                    // a guaranteed perfect matching keeps most instances feasible
                    for a in (0..n).step_by(2) {
                        if !edges.iter().any(|&(x, y, _)| (x, y) == (a, a + 1)) {
                            edges.push((a, a + 1, Weight::from_units(25)));
                        }
                    }
                    DefectGraph::from_edges(n, &edges).unwrap()
                },
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn blossom_agrees_with_subset_dp(g in random_graph(), seed in any::<u64>(), alt in any::<u64>()) {
            let exact = mwpm_oracle(&g).unwrap();
            let m = mwpm(&g, None).unwrap();
            prop_assert_eq!(m.weight, exact.weight);
            let seeded = mwpm(&g, Some(seed)).unwrap();
            prop_assert_eq!(seeded.weight.units(), exact.weight.units());

            let mut seen = vec![0; g.num_nodes()];
            for &(a, b) in &m.pairs {
                seen[a] += 1;
                seen[b] += 1;
            }
            prop_assert!(seen.iter().all(|&k| k == 1));

            // a random alternative perfect matching never beats the optimum
            let mut order: Vec<usize> = (0..g.num_nodes()).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(alt);
            for i in (1..order.len()).rev() {
                order.swap(i, rng.random_range(0..=i));
            }
            let alternative: Option<Weight> = order.chunks(2).map(|p| g.weight(p[0], p[1])).sum();
            if let Some(total) = alternative {
                prop_assert!(m.weight <= total);
            }
        }
    }
}
