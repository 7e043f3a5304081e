//! Two-stage matching on restricted (or space-time) graphs.

use serde::Serialize;

use super::lift::{lift_correction, verify_residual};
use super::{derive_seed, Correction, DecoderConfig, SpacetimeSyndrome, Syndrome};
use crate::error::{Error, Result};
use crate::lattice::{BoundaryDiscount, Color, ColorCodeLattice, EdgeKind, RestrictedGraph};
use crate::matching::{build_sparse_defect_graph, mwpm, DefectGraph, DefectGraphDump, Matching};

/// Space-time settings: rounds, data and measurement error rates, and
/// whether red checks are ever misread.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct SpacetimeOptions {
    pub rounds: usize,
    pub p: f64,
    pub q: f64,
    pub red_measurements: bool,
}

/// Stacks `rounds` copies of `g` with measurement edges between them.
pub fn build_spacetime_graph(
    g: &RestrictedGraph,
    rounds: usize,
    p: f64,
    q: f64,
) -> Result<RestrictedGraph> {
    g.spacetime(rounds, p, q)
}

/// A decoder with its stage graphs built once and reused across shots.
#[derive(Clone, Debug)]
pub struct Decoder<'a> {
    lat: &'a ColorCodeLattice,
    cfg: DecoderConfig,
    graphs: [RestrictedGraph; 2],
}

/// Red checks crossed by first-stage paths.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Marked {
    /// `(check, round)` of every red node entered and left through qubit edges.
    pub nodes: Vec<(usize, usize)>,
    /// `(check, lower round)` of every red measurement edge on a path.
    pub vertical: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageTrace {
    pub removed: Color,
    pub defects: Vec<(usize, usize)>,
    pub graph: DefectGraphDump,
    pub matching: Matching,
    /// Qubits whose edges the matching used an odd number of times.
    pub qubits: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecodeTrace {
    pub config: DecoderConfig,
    pub rounds: usize,
    pub first: StageTrace,
    pub marked: Marked,
    /// `(node a, node b)` of each second-stage edge set to zero.
    pub zeroed_edges: Vec<(usize, usize)>,
    pub second: StageTrace,
    pub correction: Correction,
}

struct Stage {
    defects: Vec<(usize, usize)>,
    dg: DefectGraph,
    matching: Matching,
    qubits: Vec<usize>,
}

impl<'a> Decoder<'a> {
    /// Single-round decoder.
    pub fn new(lat: &'a ColorCodeLattice, cfg: DecoderConfig) -> Result<Self> {
        cfg.validate()?;
        let [first, second] = cfg.order.removed();
        let w_b = cfg.w_b;
        let (d1, d2) = match cfg.discount {
            BoundaryDiscount::None => (BoundaryDiscount::None, BoundaryDiscount::None),
            BoundaryDiscount::BoundaryRedChecks => {
                (BoundaryDiscount::BoundaryRedChecks, BoundaryDiscount::None)
            }
            BoundaryDiscount::GreenBoundaryChecks => (
                BoundaryDiscount::None,
                BoundaryDiscount::GreenBoundaryChecks,
            ),
        };
        let graphs = [
            RestrictedGraph::new(lat, first, d1, w_b)?,
            RestrictedGraph::new(lat, second, d2, w_b)?,
        ];
        Ok(Decoder { lat, cfg, graphs })
    }

    /// Decoder over `opts.rounds` rounds of difference syndromes.
    pub fn spacetime(
        lat: &'a ColorCodeLattice,
        cfg: DecoderConfig,
        opts: SpacetimeOptions,
    ) -> Result<Self> {
        let planar = Decoder::new(lat, cfg)?;
        let lift = |g: &RestrictedGraph| -> Result<RestrictedGraph> {
            let st = build_spacetime_graph(g, opts.rounds, opts.p, opts.q)?;
            Ok(if opts.red_measurements {
                st
            } else {
                st.retain_edges(|e| match e.kind {
                    EdgeKind::Measurement { check } => lat.checks[check].color != Color::Red,
                    EdgeKind::Qubit { .. } => true,
                })
            })
        };
        let graphs = [lift(&planar.graphs[0])?, lift(&planar.graphs[1])?];
        Ok(Decoder { lat, cfg, graphs })
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.cfg
    }

    pub fn rounds(&self) -> usize {
        self.graphs[0].rounds
    }

    pub fn graph(&self, stage: usize) -> &RestrictedGraph {
        &self.graphs[stage]
    }

    /// Decodes a single-round syndrome.
    pub fn decode(&self, syn: &Syndrome, tie_seed: Option<u64>) -> Result<Correction> {
        self.decode_rounds(&SpacetimeSyndrome::single(syn), tie_seed)
    }

    /// Decodes a difference syndrome; returns the correction for the data
    /// error accumulated by the end.
    pub fn decode_rounds(
        &self,
        syn: &SpacetimeSyndrome,
        tie_seed: Option<u64>,
    ) -> Result<Correction> {
        self.run(syn, tie_seed, None)
    }

    pub fn decode_traced(
        &self,
        syn: &SpacetimeSyndrome,
        tie_seed: Option<u64>,
    ) -> Result<DecodeTrace> {
        let mut trace = None;
        self.run(syn, tie_seed, Some(&mut trace))?;
        Ok(trace.expect("trace filled by run"))
    }

    /// Matches both graphs without any reweighting between them.
    pub fn decode_independent(
        &self,
        syn: &SpacetimeSyndrome,
        tie_seed: Option<u64>,
    ) -> Result<Correction> {
        self.independent(syn, tie_seed, None)
    }

    pub fn decode_traced_independent(
        &self,
        syn: &SpacetimeSyndrome,
        tie_seed: Option<u64>,
    ) -> Result<DecodeTrace> {
        let mut trace = None;
        self.independent(syn, tie_seed, Some(&mut trace))?;
        Ok(trace.expect("trace filled by independent"))
    }

    fn independent(
        &self,
        syn: &SpacetimeSyndrome,
        tie_seed: Option<u64>,
        trace: Option<&mut Option<DecodeTrace>>,
    ) -> Result<Correction> {
        self.check_shape(syn)?;
        let (g1, g2) = (self.seeded(0, tie_seed), self.seeded(1, tie_seed));
        let s1 = self.match_stage(&g1, syn)?;
        let s2 = self.match_stage(&g2, syn)?;
        self.finish(
            syn,
            (s1, &g1),
            Marked::default(),
            Vec::new(),
            (s2, &g2),
            trace,
        )
    }

    fn finish(
        &self,
        syn: &SpacetimeSyndrome,
        (s1, g1): (Stage, &RestrictedGraph),
        marked: Marked,
        mut zeroed: Vec<(usize, usize)>,
        (s2, g2): (Stage, &RestrictedGraph),
        trace: Option<&mut Option<DecodeTrace>>,
    ) -> Result<Correction> {
        let (paths_b, paths_g) = if self.cfg.order.removed()[0] == Color::Blue {
            (&s1.qubits, &s2.qubits)
        } else {
            (&s2.qubits, &s1.qubits)
        };
        let mut corr = lift_correction(paths_b, paths_g, self.lat)?;
        verify_residual(self.lat, &mut corr, &syn.accumulated())?;
        if let Some(out) = trace {
            let stage_trace = |s: Stage, g: &RestrictedGraph| StageTrace {
                removed: g.removed,
                defects: s.defects,
                graph: s.dg.dump(),
                matching: s.matching,
                qubits: s.qubits,
            };
            zeroed.sort_unstable();
            zeroed.dedup();
            *out = Some(DecodeTrace {
                config: self.cfg,
                rounds: self.rounds(),
                first: stage_trace(s1, g1),
                marked,
                zeroed_edges: zeroed,
                second: stage_trace(s2, g2),
                correction: corr.clone(),
            });
        }
        Ok(corr)
    }

    fn check_shape(&self, syn: &SpacetimeSyndrome) -> Result<()> {
        if syn.rounds.len() != self.rounds() {
            return Err(Error::InconsistentSyndrome(format!(
                "{} rounds given, decoder expects {}",
                syn.rounds.len(),
                self.rounds()
            )));
        }
        if let Some(r) = syn.rounds.iter().find(|r| r.len() != self.lat.num_checks()) {
            return Err(Error::InconsistentSyndrome(format!(
                "{} syndrome bits for {} checks",
                r.len(),
                self.lat.num_checks()
            )));
        }
        Ok(())
    }

    fn seeded(&self, stage: usize, tie_seed: Option<u64>) -> RestrictedGraph {
        let mut g = self.graphs[stage].clone();
        if let Some(s) = tie_seed {
            g.perturb(derive_seed(s, stage as u64));
        }
        g
    }

    fn match_stage(&self, g: &RestrictedGraph, syn: &SpacetimeSyndrome) -> Result<Stage> {
        let defects: Vec<(usize, usize)> = syn
            .defects()
            .filter(|&(c, _)| self.lat.checks[c].color != g.removed)
            .collect();
        let nodes: Vec<usize> = defects
            .iter()
            .map(|&(c, t)| g.node_of(c, t).expect("kept check"))
            .collect();
        let dg = build_sparse_defect_graph(g, &nodes)?;
        let matching = mwpm(&dg, None)?;
        let mut parity = vec![false; self.lat.num_qubits()];
        for &e in matching.paths.iter().flatten() {
            if let EdgeKind::Qubit { qubit } = g.edges[e].kind {
                parity[qubit] ^= true;
            }
        }
        let qubits = (0..parity.len()).filter(|&q| parity[q]).collect();
        Ok(Stage {
            defects,
            dg,
            matching,
            qubits,
        })
    }

    fn run(
        &self,
        syn: &SpacetimeSyndrome,
        tie_seed: Option<u64>,
        trace: Option<&mut Option<DecodeTrace>>,
    ) -> Result<Correction> {
        self.check_shape(syn)?;
        let g1 = self.seeded(0, tie_seed);
        let s1 = self.match_stage(&g1, syn)?;

        let mut g2 = self.seeded(1, tie_seed);
        let mut marked = Marked::default();
        let mut zeroed = Vec::new();
        if self.cfg.zero_weight_enabled {
            marked = mark_traversed(&s1.matching, &s1.dg, &g1, self.lat);
            for &(c, t) in &marked.nodes {
                let node = g2.node_of(c, t).expect("red checks are in every graph");
                for &(other, e) in g2.neighbours(node) {
                    if matches!(g2.edges[e].kind, EdgeKind::Qubit { .. }) {
                        zeroed.push((node.min(other), node.max(other)));
                    }
                }
                g2.zero_qubit_edges_at(node);
            }
            if self.cfg.zero_measurement_edges {
                for &(c, t) in &marked.vertical {
                    let (a, b) = (g2.node_of(c, t).unwrap(), g2.node_of(c, t + 1).unwrap());
                    let edge = g2.neighbours(a).iter().find(|&&(o, e)| {
                        o == b && matches!(g2.edges[e].kind, EdgeKind::Measurement { .. })
                    });
                    if let Some(&(_, e)) = edge {
                        g2.set_weight(e, g2.edges[e].weight.zeroed());
                        zeroed.push((a, b));
                    }
                }
            }
        }
        let s2 = self.match_stage(&g2, syn)?;
        self.finish(syn, (s1, &g1), marked, zeroed, (s2, &g2), trace)
    }
}

/// Red checks that first-stage paths pass through.
///
/// A red node counts when a path enters and leaves it through qubit edges,
/// so endpoints never count. In space-time graphs the red measurement edges
/// on the paths are reported separately.
pub fn mark_traversed(
    m: &Matching,
    dg: &DefectGraph,
    g: &RestrictedGraph,
    lat: &ColorCodeLattice,
) -> Marked {
    let mut marked = Marked::default();
    for (&(a, _), path) in m.pairs.iter().zip(&m.paths) {
        let Some(mut node) = dg.resolve(a) else {
            continue;
        };
        for (i, &e) in path.iter().enumerate() {
            let edge = &g.edges[e];
            let next = edge.other(node);
            if let EdgeKind::Measurement { check } = edge.kind {
                if lat.checks[check].color == Color::Red {
                    marked.vertical.push((check, edge.round));
                }
            }
            let interior = i + 1 < path.len();
            if interior {
                let after = &g.edges[path[i + 1]];
                let both_qubit = matches!(edge.kind, EdgeKind::Qubit { .. })
                    && matches!(after.kind, EdgeKind::Qubit { .. });
                if let Some(check) = g.nodes[next].check {
                    if both_qubit && lat.checks[check].color == Color::Red {
                        marked.nodes.push((check, g.nodes[next].round));
                    }
                }
            }
            node = next;
        }
    }
    marked.nodes.sort_unstable();
    marked.nodes.dedup();
    marked.vertical.sort_unstable();
    marked.vertical.dedup();
    marked
}

/// Independent matching on the two restricted graphs.
pub fn decode_restricted(
    lat: &ColorCodeLattice,
    syn: &Syndrome,
    cfg: &DecoderConfig,
) -> Result<Correction> {
    let cfg = DecoderConfig {
        zero_weight_enabled: false,
        ..*cfg
    };
    Decoder::new(lat, cfg)?.decode_independent(&SpacetimeSyndrome::single(syn), cfg.seed)
}

/// Two-stage matching with the second stage reweighted by the first.
pub fn decode_correlated(
    lat: &ColorCodeLattice,
    syn: &Syndrome,
    cfg: &DecoderConfig,
) -> Result<Correction> {
    Decoder::new(lat, *cfg)?.decode(syn, cfg.seed)
}

/// Two-stage matching on space-time graphs.
pub fn decode_correlated_spacetime(
    lat: &ColorCodeLattice,
    syn: &SpacetimeSyndrome,
    cfg: &DecoderConfig,
    opts: SpacetimeOptions,
) -> Result<Correction> {
    Decoder::spacetime(lat, *cfg, opts)?.decode_rounds(syn, cfg.seed)
}
