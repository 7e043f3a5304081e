//! Single-source shortest paths over restricted graphs.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::lattice::RestrictedGraph;
use crate::weight::Weight;

/// Distances and predecessor trail from one source node.
#[derive(Clone, Debug)]
pub struct ShortestPaths {
    pub source: usize,
    pub dist: Vec<Weight>,
    /// `(previous node, edge index)` on the chosen shortest path.
    pub pred: Vec<Option<(usize, usize)>>,
}

impl ShortestPaths {
    pub fn distance(&self, node: usize) -> Weight {
        self.dist[node]
    }

    /// Edge indices from the source to `target`, in order from the source.
    /// Empty when `target` is the source or unreachable.
    pub fn path_to(&self, target: usize) -> Vec<usize> {
        let mut edges = Vec::new();
        let mut node = target;
        while let Some((prev, edge)) = self.pred[node] {
            edges.push(edge);
            node = prev;
        }
        edges.reverse();
        edges
    }

    /// Closest boundary node and its distance; ties go to the smaller index.
    pub fn nearest_boundary(&self, g: &RestrictedGraph) -> (usize, Weight) {
        g.boundary_nodes()
            .map(|b| (b, self.dist[b]))
            .min_by_key(|&(b, w)| (w, b))
            .expect("every restricted graph has a boundary node")
    }
}

/// Dijkstra from `source`. Unreachable nodes keep [`Weight::INFINITY`]. When
/// two shortest routes tie exactly, the predecessor with the smaller node
/// index wins, so the trail is deterministic.
pub fn shortest_paths_from(g: &RestrictedGraph, source: usize) -> ShortestPaths {
    search(g, source, None)
}

/// Distance from every node to its nearest boundary node.
pub fn boundary_distances(g: &RestrictedGraph) -> Vec<Weight> {
    let n = g.num_nodes();
    let mut dist = vec![Weight::INFINITY; n];
    let mut heap = BinaryHeap::new();
    for b in g.boundary_nodes() {
        dist[b] = Weight::ZERO;
        heap.push(Reverse((Weight::ZERO, b)));
    }
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, e) in g.neighbours(u) {
            let nd = d + g.edges[e].weight;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist
}

/// Dijkstra from `source` cut off once no further target can be closer
/// than the sum of its boundary distance and the source's.
///
/// `targets` pairs each target node with its boundary distance. On return,
/// every node nearer than `reach[source] + reach[t]` for some unsettled
/// target `t`, and the nearest boundary node, carry the same distance and
/// trail as in the full search.
pub fn shortest_paths_bounded(
    g: &RestrictedGraph,
    source: usize,
    source_reach: Weight,
    targets: &[(usize, Weight)],
) -> ShortestPaths {
    let mut order: Vec<(Weight, usize)> = targets.iter().map(|&(t, b)| (b, t)).collect();
    order.sort_unstable_by(|a, b| b.cmp(a));
    let mut next = 0;
    search(g, source, Some((source_reach, order.as_slice(), &mut next)))
}

fn search(
    g: &RestrictedGraph,
    source: usize,
    mut cutoff: Option<(Weight, &[(Weight, usize)], &mut usize)>,
) -> ShortestPaths {
    let n = g.num_nodes();
    let mut dist = vec![Weight::INFINITY; n];
    let mut pred: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = Weight::ZERO;
    heap.push(Reverse((Weight::ZERO, source)));
    let mut boundary_at = None;
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        if let Some((reach, order, next)) = cutoff.as_mut() {
            while **next < order.len() && done[order[**next].1] {
                **next += 1;
            }
            let far = order.get(**next).map_or(Weight::ZERO, |&(b, _)| b);
            // boundary nodes tied with the nearest one must be settled too
            let exits_done = boundary_at.is_some_and(|b| d > b);
            if exits_done && d >= *reach + far {
                break;
            }
        }
        done[u] = true;
        if boundary_at.is_none() && g.is_boundary(u) {
            boundary_at = Some(d);
        }
        for &(v, e) in g.neighbours(u) {
            if done[v] {
                continue;
            }
            let w = g.edges[e].weight;
            debug_assert!(w >= Weight::ZERO, "negative edge weight");
            let nd = d + w;
            let better = nd < dist[v] || (nd == dist[v] && pred[v].is_some_and(|(p, _)| u < p));
            if better {
                let improved = nd < dist[v];
                dist[v] = nd;
                pred[v] = Some((u, e));
                if improved {
                    heap.push(Reverse((nd, v)));
                }
            }
        }
    }
    ShortestPaths { source, dist, pred }
}

/// Shortest-path tables for each source.
pub fn shortest_paths(g: &RestrictedGraph, sources: &[usize]) -> Vec<ShortestPaths> {
    sources.iter().map(|&s| shortest_paths_from(g, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{restricted_graph, Color, ColorCodeLattice, RestrictedGraph};

    fn floyd(g: &RestrictedGraph) -> Vec<Vec<Weight>> {
        let n = g.num_nodes();
        let mut d = vec![vec![Weight::INFINITY; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = Weight::ZERO;
        }
        for e in &g.edges {
            if e.weight < d[e.a][e.b] {
                d[e.a][e.b] = e.weight;
                d[e.b][e.a] = e.weight;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k].is_finite() && d[k][j].is_finite() && d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        d
    }

    #[test]
    fn boundary_neighbour_at_unit_distance() {
        let lat = ColorCodeLattice::new(4).unwrap();
        let g = restricted_graph(&lat, Color::Green, 1.0).unwrap();
        let b = g.boundary_nodes().next().unwrap();
        let sp = shortest_paths_from(&g, b);
        let (n, _) = g.neighbours(b)[0];
        assert_eq!(sp.distance(n), Weight::from_f64(1.0));
        assert_eq!(sp.path_to(n).len(), 1);
    }

    #[test]
    fn two_step_path_through_red() {
        let lat = ColorCodeLattice::new(6).unwrap();
        let g = restricted_graph(&lat, Color::Green, 1.0).unwrap();
        // any two octagons sharing a red neighbour are two unit edges apart
        let (a, b) = (0..g.checks_per_round())
            .filter(|&i| lat.checks[g.nodes[i].check.unwrap()].color == Color::Red)
            .find_map(|red| {
                let mut octs: Vec<usize> = g
                    .neighbours(red)
                    .iter()
                    .map(|&(v, _)| v)
                    .filter(|&v| !g.is_boundary(v))
                    .collect();
                octs.dedup();
                (octs.len() >= 2).then(|| (octs[0], octs[1]))
            })
            .unwrap();
        let sp = shortest_paths_from(&g, a);
        assert_eq!(sp.distance(b), Weight::from_f64(2.0));
    }

    #[test]
    fn matches_all_pairs_brute_force() {
        for d in [4, 6] {
            let lat = ColorCodeLattice::new(d).unwrap();
            for removed in [Color::Blue, Color::Green] {
                let mut g = restricted_graph(&lat, removed, 0.999).unwrap();
                g.perturb(7);
                let all = floyd(&g);
                let tables = shortest_paths(&g, &(0..g.num_nodes()).collect::<Vec<_>>());
                for (i, t) in tables.iter().enumerate() {
                    for j in 0..g.num_nodes() {
                        assert_eq!(t.distance(j), all[i][j]);
                        assert_eq!(t.distance(j), tables[j].distance(i));
                        let resum: Weight = t.path_to(j).iter().map(|&e| g.edges[e].weight).sum();
                        assert_eq!(resum, t.distance(j));
                    }
                }
            }
        }
    }

    #[test]
    fn spacetime_graph_is_connected() {
        let lat = ColorCodeLattice::new(4).unwrap();
        let g = restricted_graph(&lat, Color::Blue, 1.0).unwrap();
        let st = g.spacetime(2, 0.01, 0.01).unwrap();
        let sp = shortest_paths_from(&st, 0);
        assert!(sp.dist.iter().all(|w| w.is_finite()));
    }
}
