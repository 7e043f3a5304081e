//! Restricted matching graphs.
//!
//! Removing every check of one color leaves a graph whose nodes are the
//! remaining checks and whose edges are qubits: each qubit joins its red
//! square to its octagon of the surviving color, or to a virtual boundary node
//! when it lies on a boundary of that color. The same structure, stacked over
//! measurement rounds, is the space-time graph used under phenomenological
//! noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use super::color::{Color, ColorCodeLattice};
use crate::error::{Error, Result};
use crate::weight::Weight;

/// Which edges receive the reduced boundary weight `w_b`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryDiscount {
    /// No discount; every qubit edge has weight 1.
    None,
    /// Every edge of a red square that touches this graph's boundary: the
    /// top and bottom block rows of `R_b`, the left and right block columns
    /// of `R_g`.
    #[default]
    BoundaryRedChecks,
    /// Every edge with an endpoint whose check contains a qubit of the top or
    /// bottom (green) boundary. Meaningful for `R_g`.
    GreenBoundaryChecks,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphNode {
    /// Lattice check id, `None` for a virtual boundary node.
    pub check: Option<usize>,
    pub round: usize,
}

impl GraphNode {
    pub fn is_boundary(&self) -> bool {
        self.check.is_none()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum EdgeKind {
    /// A data qubit error in a given round.
    Qubit { qubit: usize },
    /// A measurement error on a check between two consecutive rounds.
    Measurement { check: usize },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub a: usize,
    pub b: usize,
    pub weight: Weight,
    pub kind: EdgeKind,
    /// Round of a qubit edge; lower round of a measurement edge.
    pub round: usize,
    pub discounted: bool,
}

impl GraphEdge {
    pub fn other(&self, node: usize) -> usize {
        if node == self.a {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Clone, Debug)]
pub struct RestrictedGraph {
    pub removed: Color,
    pub rounds: usize,
    pub nodes: Arc<[GraphNode]>,
    pub edges: Vec<GraphEdge>,
    // shared so that per-shot copies only duplicate the edge weights
    adjacency: Arc<[Vec<(usize, usize)>]>,
    /// check id -> node index within a round
    local: Arc<[Option<usize>]>,
    per_round: usize,
}

/// The single-round graph with the default discount rule: `w_b` on the
/// boundary red squares of `R_b`, uniform weights on `R_g`.
pub fn restricted_graph(
    lat: &ColorCodeLattice,
    removed: Color,
    w_b: f64,
) -> Result<RestrictedGraph> {
    let discount = if removed == Color::Blue {
        BoundaryDiscount::BoundaryRedChecks
    } else {
        BoundaryDiscount::None
    };
    RestrictedGraph::new(lat, removed, discount, w_b)
}

impl RestrictedGraph {
    pub fn new(
        lat: &ColorCodeLattice,
        removed: Color,
        discount: BoundaryDiscount,
        w_b: f64,
    ) -> Result<Self> {
        if removed == Color::Red {
            return Err(Error::InvalidParameter(
                "restricted graphs remove green or blue checks, not red".into(),
            ));
        }
        if !(w_b > 0.0 && w_b <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "boundary weight {w_b} outside (0, 1]"
            )));
        }
        let kept = if removed == Color::Blue {
            Color::Green
        } else {
            Color::Blue
        };

        let mut local = vec![None; lat.num_checks()];
        let mut nodes = Vec::new();
        for check in &lat.checks {
            if check.color != removed {
                local[check.id] = Some(nodes.len());
                nodes.push(GraphNode {
                    check: Some(check.id),
                    round: 0,
                });
            }
        }
        let boundary = nodes.len();
        nodes.push(GraphNode {
            check: None,
            round: 0,
        });

        let green_boundary_checks: Vec<bool> = {
            let mut marks = vec![false; lat.num_checks()];
            let last_row = 2 * lat.face_grid_side() - 1;
            for q in lat
                .qubits
                .iter()
                .filter(|q| q.row == 0 || q.row == last_row)
            {
                let qc = lat.qubit_checks(q.id);
                marks[qc.red] = true;
                for c in [qc.green, qc.blue].into_iter().flatten() {
                    marks[c] = true;
                }
            }
            marks
        };

        let unit = Weight::from_f64(1.0);
        let reduced = Weight::from_f64(w_b);
        let mut edges = Vec::with_capacity(lat.num_qubits());
        for q in &lat.qubits {
            let qc = lat.qubit_checks(q.id);
            let partner = if kept == Color::Green {
                qc.green
            } else {
                qc.blue
            };
            let a = local[qc.red].expect("red checks are kept");
            let b = partner.map_or(boundary, |c| local[c].expect("kept color"));
            let block = lat.block_of_check(qc.red).expect("red check is a block");
            let discounted = match discount {
                BoundaryDiscount::None => false,
                BoundaryDiscount::BoundaryRedChecks => match removed {
                    Color::Blue => lat.is_top_or_bottom_block(block),
                    _ => lat.is_left_or_right_block(block),
                },
                BoundaryDiscount::GreenBoundaryChecks => {
                    green_boundary_checks[qc.red]
                        || partner.is_some_and(|c| green_boundary_checks[c])
                }
            };
            edges.push(GraphEdge {
                a,
                b,
                weight: if discounted { reduced } else { unit },
                kind: EdgeKind::Qubit { qubit: q.id },
                round: 0,
                discounted,
            });
        }
        Ok(Self::assemble(
            removed,
            1,
            nodes.into(),
            edges,
            local.into(),
            boundary + 1,
        ))
    }

    fn assemble(
        removed: Color,
        rounds: usize,
        nodes: Arc<[GraphNode]>,
        edges: Vec<GraphEdge>,
        local: Arc<[Option<usize>]>,
        per_round: usize,
    ) -> Self {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for (i, e) in edges.iter().enumerate() {
            adjacency[e.a].push((e.b, i));
            adjacency[e.b].push((e.a, i));
        }
        RestrictedGraph {
            removed,
            rounds,
            nodes,
            edges,
            adjacency: adjacency.into(),
            local,
            per_round,
        }
    }

    /// Stacks `rounds` copies of a single-round graph. Qubit edges keep their
    /// planar weight; every check gets a measurement edge between consecutive
    /// rounds. The last round is taken as perfect, so no measurement edge
    /// leaves it. Weights follow `ln((1-x)/x)` normalised so a data error at
    /// rate `p` costs 1.
    pub fn spacetime(&self, rounds: usize, p: f64, q: f64) -> Result<Self> {
        if self.rounds != 1 {
            return Err(Error::InvalidParameter(
                "space-time graphs are built from a single-round graph".into(),
            ));
        }
        if rounds < 1 {
            return Err(Error::InvalidParameter(
                "at least one round is required".into(),
            ));
        }
        let vertical = if p == q {
            Weight::from_f64(1.0)
        } else {
            let log_odds = |x: f64| ((1.0 - x) / x).ln();
            if !(p > 0.0 && p < 0.5 && q > 0.0 && q < 0.5) {
                return Err(Error::InvalidParameter(format!(
                    "rates p={p}, q={q} must lie in (0, 0.5)"
                )));
            }
            Weight::from_f64(log_odds(q) / log_odds(p))
        };

        let per_round = self.per_round;
        let mut nodes = Vec::with_capacity(per_round * rounds);
        for t in 0..rounds {
            nodes.extend(self.nodes.iter().map(|n| GraphNode {
                check: n.check,
                round: t,
            }));
        }
        let mut edges = Vec::with_capacity(self.edges.len() * rounds + per_round * rounds);
        for t in 0..rounds {
            let offset = t * per_round;
            edges.extend(self.edges.iter().map(|e| GraphEdge {
                a: e.a + offset,
                b: e.b + offset,
                round: t,
                ..*e
            }));
        }
        for t in 0..rounds.saturating_sub(1) {
            for (i, n) in self.nodes.iter().enumerate() {
                if let Some(check) = n.check {
                    edges.push(GraphEdge {
                        a: t * per_round + i,
                        b: (t + 1) * per_round + i,
                        weight: vertical,
                        kind: EdgeKind::Measurement { check },
                        round: t,
                        discounted: false,
                    });
                }
            }
        }
        Ok(Self::assemble(
            self.removed,
            rounds,
            nodes.into(),
            edges,
            self.local.clone(),
            per_round,
        ))
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Node of a check in a given round, if the check survives the restriction.
    pub fn node_of(&self, check: usize, round: usize) -> Option<usize> {
        if round >= self.rounds {
            return None;
        }
        self.local
            .get(check)
            .copied()
            .flatten()
            .map(|i| round * self.per_round + i)
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        self.nodes[node].is_boundary()
    }

    pub fn boundary_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.rounds).map(move |t| t * self.per_round + self.per_round - 1)
    }

    pub fn neighbours(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    /// Lattice-check nodes of a round (the virtual boundary excluded).
    pub fn checks_per_round(&self) -> usize {
        self.per_round - 1
    }

    pub fn set_weight(&mut self, edge: usize, weight: Weight) {
        self.edges[edge].weight = weight;
    }

    /// Drops the nominal weight of every edge at `node` to zero, keeping any
    /// tie-break perturbation.
    pub fn zero_edges_at(&mut self, node: usize) {
        for &(_, e) in &self.adjacency[node] {
            self.edges[e].weight = self.edges[e].weight.zeroed();
        }
    }

    /// Like [`zero_edges_at`](Self::zero_edges_at) but leaves measurement
    /// edges alone.
    pub fn zero_qubit_edges_at(&mut self, node: usize) {
        for &(_, e) in &self.adjacency[node] {
            if matches!(self.edges[e].kind, EdgeKind::Qubit { .. }) {
                self.edges[e].weight = self.edges[e].weight.zeroed();
            }
        }
    }

    /// Drops every edge for which `keep` is false. Edge indices are renumbered.
    pub fn retain_edges<F: FnMut(&GraphEdge) -> bool>(self, keep: F) -> Self {
        let edges = self.edges.into_iter().filter(keep).collect();
        Self::assemble(
            self.removed,
            self.rounds,
            self.nodes,
            edges,
            self.local,
            self.per_round,
        )
    }

    /// Adds an independent tie-break perturbation to every edge.
    pub fn perturb(&mut self, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for e in &mut self.edges {
            e.weight = e.weight.perturbed(rng.random());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_edge_per_qubit() {
        for d in [4, 6, 8] {
            let lat = ColorCodeLattice::new(d).unwrap();
            for removed in [Color::Blue, Color::Green] {
                let g = restricted_graph(&lat, removed, 0.999).unwrap();
                assert_eq!(g.edges.len(), lat.num_qubits());
                let mut seen = vec![false; lat.num_qubits()];
                for e in &g.edges {
                    let EdgeKind::Qubit { qubit } = e.kind else {
                        panic!("planar graph has only qubit edges")
                    };
                    assert!(!seen[qubit]);
                    seen[qubit] = true;
                }
                let boundary = g.boundary_nodes().next().unwrap();
                assert!(!g.neighbours(boundary).is_empty());
            }
        }
    }

    #[test]
    fn boundary_rows_discounted_in_rb() {
        let lat = ColorCodeLattice::new(4).unwrap();
        let g = restricted_graph(&lat, Color::Blue, 0.999).unwrap();
        let reduced = Weight::from_f64(0.999);
        let unit = Weight::from_f64(1.0);
        for e in &g.edges {
            let EdgeKind::Qubit { qubit } = e.kind else {
                unreachable!()
            };
            let block = lat.block_of_qubit(qubit);
            let expected = if lat.is_top_or_bottom_block(block.id) {
                reduced
            } else {
                unit
            };
            assert_eq!(e.weight, expected);
        }
        // d=4: four of the five blocks sit in the first or last row
        assert_eq!(g.edges.iter().filter(|e| e.discounted).count(), 16);

        let g = restricted_graph(&lat, Color::Green, 1.0).unwrap();
        assert!(g.edges.iter().all(|e| e.weight == unit));
    }

    #[test]
    fn rejects_red_and_bad_weight() {
        let lat = ColorCodeLattice::new(4).unwrap();
        assert!(restricted_graph(&lat, Color::Red, 1.0).is_err());
        assert!(restricted_graph(&lat, Color::Blue, 0.0).is_err());
        assert!(restricted_graph(&lat, Color::Blue, 1.5).is_err());
    }

    #[test]
    fn construction_is_deterministic() {
        let lat = ColorCodeLattice::new(6).unwrap();
        let a = restricted_graph(&lat, Color::Blue, 0.999).unwrap();
        let b = restricted_graph(&lat, Color::Blue, 0.999).unwrap();
        assert_eq!(a.nodes, b.nodes);
        assert_eq!(a.edges, b.edges);
    }

    #[test]
    fn spacetime_replication() {
        let lat = ColorCodeLattice::new(4).unwrap();
        let g = restricted_graph(&lat, Color::Blue, 0.999).unwrap();
        let st1 = g.spacetime(1, 0.01, 0.01).unwrap();
        assert_eq!(st1.nodes, g.nodes);
        assert_eq!(st1.edges, g.edges);

        let st = g.spacetime(3, 0.01, 0.01).unwrap();
        assert_eq!(st.num_nodes(), 3 * g.num_nodes());
        let vertical = st
            .edges
            .iter()
            .filter(|e| matches!(e.kind, EdgeKind::Measurement { .. }))
            .count();
        assert_eq!(vertical, 2 * g.checks_per_round());
        // discount survives in every round
        assert_eq!(st.edges.iter().filter(|e| e.discounted).count(), 3 * 16);
        assert!(g.spacetime(0, 0.01, 0.01).is_err());
    }

    #[test]
    fn green_boundary_rule_touches_only_rg_boundary_region() {
        let lat = ColorCodeLattice::new(6).unwrap();
        let g = RestrictedGraph::new(
            &lat,
            Color::Green,
            BoundaryDiscount::GreenBoundaryChecks,
            0.999,
        )
        .unwrap();
        let n = g.edges.iter().filter(|e| e.discounted).count();
        assert!(n > 0 && n < g.edges.len());
    }
}
