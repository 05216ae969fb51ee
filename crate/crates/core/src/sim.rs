//! Round-based simulation of the distributed pipeline.
//!
//! Each phase freezes the coloring, grows a candidate chain for every
//! uncolored edge independently (data-parallel when the `parallel` feature
//! is on), resolves conflicts with a maximal independent set of the
//! conflict graph, and augments the chosen chains. Phases repeat until the
//! coloring is total. Rounds are charged synthetically per an explicit
//! policy recorded in the ledger; no message passing is emulated.

use std::time::Instant;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::chain::{augment_with_happy_chain, Chain};
use crate::coloring::{Color, PartialColoring};
use crate::conflict::{independent_set, ConflictGraph, MisAlgorithm};
use crate::fan::single_step_vizing;
use crate::gen::{derive_seed, rng_from};
use crate::graph::{EdgeId, Graph};
use crate::msva::{find_augmenting_chain, run_msva_in, run_msva_traced, MsvaParams, MsvaTrace};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("phase cap {cap} exceeded with {uncolored} edges still uncolored")]
    PhaseCapExceeded { cap: usize, uncolored: usize },
}

/// Synthetic round accounting policy. `Off` zeroes the ledger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RoundAccounting {
    #[default]
    Synthetic,
    Off,
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    /// Explicit ℓ/T; `None` derives the per-graph defaults from `epsilon`.
    pub params: Option<MsvaParams>,
    /// Fraction ε in T = max(8, ⌊ε ln n⌋).
    pub epsilon: f64,
    pub mis: MisAlgorithm,
    pub phase_cap: usize,
    pub master_seed: u64,
    pub accounting: RoundAccounting,
    /// Force single-step coloring of the smallest uncolored edge whenever a
    /// phase makes no progress; guarantees termination.
    pub straggler_fallback: bool,
    /// Collect per-run step traces (opt-in; sizeable on big graphs).
    pub trace: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            params: None,
            epsilon: 1.0 / 16.0,
            mis: MisAlgorithm::Luby,
            phase_cap: 1 << 20,
            master_seed: 0,
            accounting: RoundAccounting::Synthetic,
            straggler_fallback: true,
            trace: false,
        }
    }
}

impl SimConfig {
    pub fn seeded(seed: u64) -> Self {
        Self {
            master_seed: seed,
            ..Self::default()
        }
    }

    pub fn resolved_params(&self, graph: &Graph) -> MsvaParams {
        self.params
            .unwrap_or_else(|| MsvaParams::for_graph(graph, self.epsilon))
    }
}

/// Per-phase record.
#[derive(Debug, Clone, Serialize)]
pub struct PhaseStats {
    pub phase: usize,
    pub uncolored_before: usize,
    pub uncolored_after: usize,
    /// Edges whose run succeeded within the step cap.
    pub lucky: usize,
    pub independent_set_size: usize,
    pub fallback_count: usize,
    pub rounds_charged: u64,
    /// Longest candidate chain grown this phase (0 when none).
    pub max_chain_len: usize,
    /// Total length of the candidate chains grown this phase.
    pub chain_len_sum: usize,
    /// Wall time is informational only and never serialized, so stats
    /// files stay byte-identical across reruns.
    #[serde(skip_serializing)]
    pub wall_seconds: f64,
}

/// Synthetic charges for one phase: chain growth costs one radius, conflict
/// detection two radii, each MIS iteration one round, augmentation one
/// radius, where radius = T(ℓ+Δ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PhaseRounds {
    pub phase: usize,
    pub growth: u64,
    pub conflict: u64,
    pub mis: u64,
    pub augment: u64,
}

impl PhaseRounds {
    pub fn total(&self) -> u64 {
        self.growth + self.conflict + self.mis + self.augment
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct RoundLedger {
    pub phases: Vec<PhaseRounds>,
    pub growth_total: u64,
    pub conflict_total: u64,
    pub mis_total: u64,
    pub augment_total: u64,
    pub total: u64,
}

impl RoundLedger {
    fn push(&mut self, rounds: PhaseRounds) {
        self.growth_total += rounds.growth;
        self.conflict_total += rounds.conflict;
        self.mis_total += rounds.mis;
        self.augment_total += rounds.augment;
        self.total += rounds.total();
        self.phases.push(rounds);
    }
}

#[derive(Debug, Clone)]
pub struct GrowOutput {
    /// Lucky edges and their chains, in edge-id order.
    pub candidates: Vec<(EdgeId, Chain)>,
    pub traces: Vec<MsvaTrace>,
}

/// Grows a candidate chain for every uncolored edge against the frozen
/// coloring, sequentially. Unlucky edges are absent from the result. The
/// per-edge RNG stream is derived from (master seed, phase, edge id), so
/// the output is identical to the parallel version.
pub fn grow_candidates_seq(
    graph: &Graph,
    phi: &PartialColoring,
    uncolored: &[EdgeId],
    params: &MsvaParams,
    master_seed: u64,
    phase: u64,
    collect_traces: bool,
) -> GrowOutput {
    let mut work = phi.clone();
    let mut candidates = Vec::new();
    let mut traces = Vec::new();
    for &e in uncolored {
        let mut rng = rng_from(derive_seed(master_seed, phase, e as u64));
        if collect_traces {
            let (outcome, trace) =
                run_msva_traced(graph, &mut work, e, params, &mut rng).expect("edge is blank");
            traces.push(trace);
            if let Some(chain) = outcome.chain() {
                candidates.push((e, chain.clone()));
            }
        } else if let Some(chain) = run_msva_in(graph, &mut work, e, params, &mut rng)
            .expect("edge is blank")
            .chain()
        {
            candidates.push((e, chain.clone()));
        }
    }
    GrowOutput { candidates, traces }
}

/// Parallel twin of `grow_candidates_seq`: one working copy of the coloring
/// per rayon worker, results collected in edge order.
#[cfg(feature = "parallel")]
pub fn grow_candidates_par(
    graph: &Graph,
    phi: &PartialColoring,
    uncolored: &[EdgeId],
    params: &MsvaParams,
    master_seed: u64,
    phase: u64,
    collect_traces: bool,
) -> GrowOutput {
    let results: Vec<(EdgeId, Option<Chain>, Option<MsvaTrace>)> = uncolored
        .par_iter()
        .map_init(
            || phi.clone(),
            |work, &e| {
                let mut rng = rng_from(derive_seed(master_seed, phase, e as u64));
                if collect_traces {
                    let (outcome, trace) = run_msva_traced(graph, work, e, params, &mut rng)
                        .expect("edge is blank");
                    (e, outcome.chain().cloned(), Some(trace))
                } else {
                    let outcome =
                        run_msva_in(graph, work, e, params, &mut rng).expect("edge is blank");
                    (e, outcome.chain().cloned(), None)
                }
            },
        )
        .collect();
    let mut candidates = Vec::new();
    let mut traces = Vec::new();
    for (e, chain, trace) in results {
        if let Some(chain) = chain {
            candidates.push((e, chain));
        }
        if let Some(trace) = trace {
            traces.push(trace);
        }
    }
    GrowOutput { candidates, traces }
}

/// Feature-dispatched candidate growth.
pub fn grow_candidates(
    graph: &Graph,
    phi: &PartialColoring,
    uncolored: &[EdgeId],
    params: &MsvaParams,
    master_seed: u64,
    phase: u64,
    collect_traces: bool,
) -> GrowOutput {
    #[cfg(feature = "parallel")]
    {
        grow_candidates_par(graph, phi, uncolored, params, master_seed, phase, collect_traces)
    }
    #[cfg(not(feature = "parallel"))]
    {
        grow_candidates_seq(graph, phi, uncolored, params, master_seed, phase, collect_traces)
    }
}

/// Applies the selected chains. The selection must be pairwise
/// vertex-disjoint (asserted); properness afterwards is an internal
/// invariant of the conflict graph.
pub fn apply_phase(graph: &Graph, phi: &mut PartialColoring, selected: &[(EdgeId, Chain)]) {
    let mut claimed = vec![false; graph.vertex_count()];
    for (e, chain) in selected {
        for v in chain.vertex_set(graph) {
            assert!(
                !claimed[v],
                "selected chains are not vertex-disjoint at vertex {v} (edge {e})"
            );
            claimed[v] = true;
        }
    }
    for (_, chain) in selected {
        augment_with_happy_chain(graph, phi, chain)
            .expect("selected candidates are happy for the frozen coloring");
    }
    debug_assert!(phi.is_proper(graph), "phase application broke properness");
}

#[derive(Debug, Clone)]
pub struct SimOutput {
    pub coloring: PartialColoring,
    pub phases: Vec<PhaseStats>,
    pub ledger: RoundLedger,
    pub traces: Vec<MsvaTrace>,
}

/// Runs phases until the coloring is total.
pub fn simulate_coloring(graph: &Graph, config: &SimConfig) -> Result<SimOutput, SimError> {
    let params = config.resolved_params(graph);
    let radius = params.chain_length_bound(graph.max_degree()) as u64;
    let mut phi = PartialColoring::new(graph);
    let mut phases = Vec::new();
    let mut ledger = RoundLedger::default();
    let mut traces = Vec::new();
    let mut phase = 0usize;

    while !phi.is_total() {
        phase += 1;
        if phase > config.phase_cap {
            return Err(SimError::PhaseCapExceeded {
                cap: config.phase_cap,
                uncolored: phi.edge_count() - phi.colored_count(),
            });
        }
        let start = Instant::now();
        let uncolored: Vec<EdgeId> = graph.edge_ids().filter(|&e| phi.is_blank(e)).collect();
        let uncolored_before = uncolored.len();

        let grown = grow_candidates(
            graph,
            &phi,
            &uncolored,
            &params,
            config.master_seed,
            phase as u64,
            config.trace,
        );
        traces.extend(grown.traces);
        let lucky = grown.candidates.len();
        let max_chain_len = grown
            .candidates
            .iter()
            .map(|(_, c)| c.len())
            .max()
            .unwrap_or(0);
        let chain_len_sum: usize = grown.candidates.iter().map(|(_, c)| c.len()).sum();

        let gamma = ConflictGraph::build(graph, &grown.candidates);
        let mut mis_rng = rng_from(derive_seed(config.master_seed, phase as u64, u64::MAX));
        let (winners, mis_rounds) = independent_set(&gamma, &mut mis_rng, config.mis);
        let selected: Vec<(EdgeId, Chain)> = winners
            .iter()
            .map(|&i| grown.candidates[i].clone())
            .collect();

        apply_phase(graph, &mut phi, &selected);

        let mut fallback_count = 0;
        if selected.is_empty() {
            if config.straggler_fallback {
                let e = *uncolored.first().expect("loop guard: some edge is blank");
                let chain = single_step_vizing(graph, &mut phi, e);
                augment_with_happy_chain(graph, &mut phi, &chain)
                    .expect("single-step chains are happy");
                fallback_count = 1;
            }
        }

        let rounds = match config.accounting {
            RoundAccounting::Synthetic => PhaseRounds {
                phase,
                growth: radius,
                conflict: 2 * radius,
                mis: mis_rounds as u64,
                augment: radius,
            },
            RoundAccounting::Off => PhaseRounds {
                phase,
                growth: 0,
                conflict: 0,
                mis: 0,
                augment: 0,
            },
        };
        let stats = PhaseStats {
            phase,
            uncolored_before,
            uncolored_after: phi.edge_count() - phi.colored_count(),
            lucky,
            independent_set_size: selected.len(),
            fallback_count,
            rounds_charged: rounds.total(),
            max_chain_len,
            chain_len_sum,
            wall_seconds: start.elapsed().as_secs_f64(),
        };
        debug_assert_eq!(
            stats.uncolored_after,
            stats.uncolored_before - selected.len() - fallback_count,
            "uncolored count must drop by exactly the number of augmentations"
        );
        ledger.push(rounds);
        phases.push(stats);
    }

    Ok(SimOutput {
        coloring: phi,
        phases,
        ledger,
        traces,
    })
}

#[derive(Debug, Clone)]
pub struct SeqConfig {
    pub params: Option<MsvaParams>,
    pub epsilon: f64,
    pub max_retries: usize,
    pub fallback: bool,
    pub seed: u64,
    pub trace: bool,
}

impl Default for SeqConfig {
    fn default() -> Self {
        Self {
            params: None,
            epsilon: 1.0 / 16.0,
            max_retries: 32,
            fallback: true,
            seed: 0,
            trace: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub struct SeqStats {
    pub edges_colored: usize,
    /// Edges colored through the multi-step construction (no fallback).
    pub msva_successes: usize,
    pub fallbacks: usize,
    pub attempts_total: usize,
    /// Longest non-fallback chain.
    pub max_chain_len: usize,
    pub mean_chain_len: f64,
}

#[derive(Debug, Clone)]
pub struct SeqOutput {
    pub coloring: PartialColoring,
    pub stats: SeqStats,
    pub traces: Vec<MsvaTrace>,
}

/// Sequential baseline: colors edges one at a time in id order, each via
/// the retrying multi-step construction with single-step fallback.
pub fn color_sequential(graph: &Graph, config: &SeqConfig) -> Result<SeqOutput, SimError> {
    let params = config
        .params
        .unwrap_or_else(|| MsvaParams::for_graph(graph, config.epsilon));
    let mut phi = PartialColoring::new(graph);
    let mut stats = SeqStats::default();
    let mut traces = Vec::new();
    let mut chain_len_sum = 0usize;
    for e in graph.edge_ids() {
        if !phi.is_blank(e) {
            continue;
        }
        let mut rng = rng_from(derive_seed(config.seed, 0x5e71, e as u64));
        if config.trace {
            // Mirror the retry loop, keeping each attempt's trace.
            let mut found = None;
            for attempt in 1..=config.max_retries {
                let (outcome, trace) =
                    run_msva_traced(graph, &mut phi, e, &params, &mut rng).expect("blank edge");
                traces.push(trace);
                stats.attempts_total += 1;
                if let Some(chain) = outcome.chain() {
                    found = Some((chain.clone(), attempt));
                    break;
                }
            }
            match found {
                Some((chain, _)) => {
                    stats.msva_successes += 1;
                    stats.max_chain_len = stats.max_chain_len.max(chain.len());
                    chain_len_sum += chain.len();
                    augment_with_happy_chain(graph, &mut phi, &chain).expect("happy chain");
                }
                None if config.fallback => {
                    let chain = single_step_vizing(graph, &mut phi, e);
                    stats.fallbacks += 1;
                    augment_with_happy_chain(graph, &mut phi, &chain).expect("happy chain");
                }
                None => {
                    // Surfaced the same way as the untraced path below.
                    return Err(SimError::PhaseCapExceeded {
                        cap: config.max_retries,
                        uncolored: phi.edge_count() - phi.colored_count(),
                    });
                }
            }
        } else {
            let (chain, attempt_stats) = find_augmenting_chain(
                graph,
                &mut phi,
                e,
                &params,
                config.max_retries,
                config.fallback,
                &mut rng,
            )
            .map_err(|_| SimError::PhaseCapExceeded {
                cap: config.max_retries,
                uncolored: phi.edge_count() - phi.colored_count(),
            })?;
            stats.attempts_total += attempt_stats.attempts;
            if attempt_stats.fell_back {
                stats.fallbacks += 1;
            } else {
                stats.msva_successes += 1;
                stats.max_chain_len = stats.max_chain_len.max(chain.len());
                chain_len_sum += chain.len();
            }
            augment_with_happy_chain(graph, &mut phi, &chain).expect("happy chain");
        }
        stats.edges_colored += 1;
    }
    stats.mean_chain_len = if stats.msva_successes > 0 {
        chain_len_sum as f64 / stats.msva_successes as f64
    } else {
        0.0
    };
    Ok(SeqOutput {
        coloring: phi,
        stats,
        traces,
    })
}

/// Machine-readable verification report for a coloring assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub palette: usize,
    pub colored_count: usize,
    pub total: bool,
    pub first_blank: Option<EdgeId>,
    pub proper: bool,
    pub first_clash: Option<(EdgeId, EdgeId)>,
    pub palette_ok: bool,
    pub first_overflow: Option<(EdgeId, Color)>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.total && self.proper && self.palette_ok
    }
}

/// Checks totality, properness, and the palette bound of an arbitrary
/// assignment (which may be improper or overfull, e.g. parsed from a file).
pub fn verify_output(graph: &Graph, assignment: &[Option<Color>]) -> VerifyReport {
    assert_eq!(assignment.len(), graph.edge_count());
    let palette = graph.palette();
    let colored_count = assignment.iter().flatten().count();
    let first_blank = graph.edge_ids().find(|&e| assignment[e].is_none());
    let first_overflow = graph
        .edge_ids()
        .find_map(|e| assignment[e].filter(|&c| c == 0 || c > palette).map(|c| (e, c)));
    let mut first_clash = None;
    'scan: for v in graph.vertices() {
        let mut seen: Vec<Option<EdgeId>> = vec![None; palette + 2];
        for &(_, e) in graph.neighbors(v) {
            if let Some(c) = assignment[e] {
                let slot = c.min(palette + 1);
                if let Some(prev) = seen[slot] {
                    let (a, b) = (prev.min(e), prev.max(e));
                    first_clash = Some((a, b));
                    break 'scan;
                }
                seen[slot] = Some(e);
            }
        }
    }
    VerifyReport {
        n: graph.vertex_count(),
        m: graph.edge_count(),
        delta: graph.max_degree(),
        palette,
        colored_count,
        total: first_blank.is_none(),
        first_blank,
        proper: first_clash.is_none(),
        first_clash,
        palette_ok: first_overflow.is_none(),
        first_overflow,
    }
}

/// Output summary written next to coloring files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub palette: usize,
    pub colored_count: usize,
}

impl Summary {
    pub fn new(graph: &Graph, assignment: &[Option<Color>]) -> Self {
        Self {
            n: graph.vertex_count(),
            m: graph.edge_count(),
            delta: graph.max_degree(),
            palette: graph.palette(),
            colored_count: assignment.iter().flatten().count(),
        }
    }
}

/// Renders an assignment as "edge_id color" lines (colored edges only).
pub fn write_coloring_text(assignment: &[Option<Color>]) -> String {
    let mut out = String::new();
    for (e, c) in assignment.iter().enumerate() {
        if let Some(c) = c {
            out.push_str(&format!("{e} {c}\n"));
        }
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringFileError {
    #[error("line {line}: expected \"edge_id color\", got {got:?}")]
    Malformed { line: usize, got: String },
    #[error("line {line}: unknown edge id {edge} (graph has {m} edges)")]
    UnknownEdge { line: usize, edge: usize, m: usize },
    #[error("line {line}: duplicate entry for edge {edge}")]
    DuplicateEdge { line: usize, edge: usize },
}

/// Parses "edge_id color" lines into an assignment over `edge_count`
/// edges. Colors are not validated against the palette here; verification
/// flags overfull entries instead of refusing to read them.
pub fn parse_coloring_text(
    text: &str,
    edge_count: usize,
) -> Result<Vec<Option<Color>>, ColoringFileError> {
    let mut assignment = vec![None; edge_count];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let (e, c) = match (
            it.next().and_then(|t| t.parse::<usize>().ok()),
            it.next().and_then(|t| t.parse::<Color>().ok()),
            it.next(),
        ) {
            (Some(e), Some(c), None) => (e, c),
            _ => {
                return Err(ColoringFileError::Malformed {
                    line: lineno + 1,
                    got: line.to_string(),
                })
            }
        };
        if e >= edge_count {
            return Err(ColoringFileError::UnknownEdge {
                line: lineno + 1,
                edge: e,
                m: edge_count,
            });
        }
        if assignment[e].is_some() {
            return Err(ColoringFileError::DuplicateEdge {
                line: lineno + 1,
                edge: e,
            });
        }
        assignment[e] = Some(c);
    }
    Ok(assignment)
}
