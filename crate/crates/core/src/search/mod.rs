//! Exact maximum intersecting and non-trivially intersecting families by
//! maximum-clique search on the intersection graph.

mod clique;
pub mod graph;
pub mod oracle;
pub mod verify;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{Family, MultiPartSet, PartStructure};
use clique::{Kind, Solver};
pub use graph::{IntersectionGraph, DEFAULT_VERTEX_CAP};
pub use oracle::{oracle_max, optimal_families, ORACLE_BNB_CAP, ORACLE_ENUM_CAP};
pub use verify::{verify_instance, InstanceReport, SearchReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Intersecting,
    Nontrivial,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Intersecting => "intersecting",
            Mode::Nontrivial => "nontrivial",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "intersecting" => Ok(Mode::Intersecting),
            "nontrivial" => Ok(Mode::Nontrivial),
            other => Err(Error::BadParameters(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Optimal,
    /// No family of the requested kind exists.
    Infeasible,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStatus::Optimal => "optimal",
            SearchStatus::Infeasible => "infeasible",
        })
    }
}

/// How non-trivial optima are found. Both are exact; they share the
/// coloring bound but differ in how non-triviality is reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// While the clique has a common element `x`, branch over the
    /// candidates avoiding `x`. Intersecting search starts from the largest
    /// star and looks only for larger non-trivial families.
    #[default]
    Forcing,
    /// Plain clique expansion. In non-trivial search the incumbent accepts
    /// only non-trivial cliques, and a branch stops once an element is
    /// shared by the clique and all its candidates. Slow when stars are much
    /// larger than the answer.
    IncumbentFilter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub vertex_cap: usize,
    /// Worker threads for root branches; 1 runs inline.
    pub threads: usize,
    pub engine: Engine,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { vertex_cap: DEFAULT_VERTEX_CAP, threads: 1, engine: Engine::Forcing }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub status: SearchStatus,
    pub size: usize,
    /// Empty when infeasible.
    pub witness: Family,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

pub fn max_family(ps: &PartStructure, mode: Mode) -> Result<SearchResult> {
    max_family_with(ps, mode, &SearchConfig::default())
}

/// Searches with the parts in canonical order and maps the witness back.
pub fn max_family_with(ps: &PartStructure, mode: Mode, cfg: &SearchConfig) -> Result<SearchResult> {
    let start = Instant::now();
    let perm = canonical_order(ps);
    if perm.iter().enumerate().all(|(i, &s)| i == s) {
        let g = IntersectionGraph::build(ps, cfg.vertex_cap)?;
        return Ok(search_graph(&g, mode, cfg, start));
    }
    let n: Vec<i64> = perm.iter().map(|&s| ps.ns()[s].into()).collect();
    let k: Vec<i64> = perm.iter().map(|&s| ps.ks()[s].into()).collect();
    let q = PartStructure::new(&n, &k)?;
    let g = IntersectionGraph::build(&q, cfg.vertex_cap)?;
    let mut r = search_graph(&g, mode, cfg, start);
    let mut back = Vec::with_capacity(r.witness.len());
    for m in r.witness.iter() {
        let mut parts = vec![Vec::new(); perm.len()];
        for (i, &s) in perm.iter().enumerate() {
            parts[s] = m.parts()[i].clone();
        }
        back.push(MultiPartSet::new(ps, parts)?);
    }
    r.witness = Family::new(ps, back)?;
    r.elapsed = start.elapsed();
    Ok(r)
}

/// Parts by increasing `n/k`, then `(n, k)`. Permuting parts is an
/// isomorphism; putting the tightest parts first (fastest-varying in the
/// vertex order) makes greedy coloring markedly better on ties `n = 2k`.
fn canonical_order(ps: &PartStructure) -> Vec<usize> {
    let (n, k) = (ps.ns(), ps.ks());
    let mut perm: Vec<usize> = (0..ps.parts()).collect();
    perm.sort_by(|&a, &b| {
        (u64::from(n[a]) * u64::from(k[b]))
            .cmp(&(u64::from(n[b]) * u64::from(k[a])))
            .then((n[a], k[a]).cmp(&(n[b], k[b])))
            .then(a.cmp(&b))
    });
    perm
}

/// Runs the configured engine on a prebuilt graph; `start` is the instant
/// the reported elapsed time is measured from.
pub fn search_graph(g: &IntersectionGraph, mode: Mode, cfg: &SearchConfig, start: Instant) -> SearchResult {
    let kind = match (mode, cfg.engine) {
        (_, Engine::Forcing) => Kind::Forcing,
        (Mode::Intersecting, Engine::IncumbentFilter) => Kind::Any,
        (Mode::Nontrivial, Engine::IncumbentFilter) => Kind::Filter,
    };
    let solver = Solver::new(g, kind);
    if mode == Mode::Intersecting && kind == Kind::Forcing {
        solver.seed_largest_star();
    }
    let (clique, nodes) = solver.run(cfg.threads.max(1)).into_parts();
    let status = if clique.is_empty() { SearchStatus::Infeasible } else { SearchStatus::Optimal };
    SearchResult {
        status,
        size: clique.len(),
        witness: g.family_of(&clique),
        nodes_explored: nodes,
        elapsed: start.elapsed(),
    }
}
