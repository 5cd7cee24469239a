use std::time::Instant;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::{max_family_with, oracle_max, IntersectionGraph, Mode, SearchConfig, SearchResult, SearchStatus, ORACLE_BNB_CAP};
use crate::error::Result;
use crate::family::{FamilyClass, PartStructure};
use crate::formulas::{frankl_bound, m_max};
use crate::json::PartDoc;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceDoc {
    pub parts: Vec<PartDoc>,
}

impl InstanceDoc {
    pub fn of(ps: &PartStructure) -> Self {
        Self { parts: ps.to_doc() }
    }
}

/// One search run, in the form printed by the command-line tool.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub instance: InstanceDoc,
    pub mode: Mode,
    pub size: usize,
    pub status: SearchStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_m_max: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_frankl: Option<bool>,
    pub nodes: u64,
    pub ms: u128,
}

impl SearchReport {
    pub fn new(ps: &PartStructure, mode: Mode, r: &SearchResult) -> Self {
        let (matches_m_max, matches_frankl) = match mode {
            Mode::Nontrivial => (Some(m_max(ps).ok().map(|m| m.value.to_usize() == Some(r.size)).unwrap_or(r.size == 0)), None),
            Mode::Intersecting => (None, Some(frankl_bound(ps).to_usize() == Some(r.size))),
        };
        Self {
            instance: InstanceDoc::of(ps),
            mode,
            size: r.size,
            status: r.status,
            matches_m_max,
            matches_frankl,
            nodes: r.nodes_explored,
            ms: r.elapsed.as_millis(),
        }
    }
}

/// How the exact non-trivial optimum relates to the best construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    /// The optimum beats every construction; recorded, not an error.
    Exceeds,
    /// The optimum is below a construction size, which is impossible for a
    /// correct build.
    Below,
    /// No admissible construction exists for this instance.
    NoConstruction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectingCheck {
    pub size: usize,
    pub frankl_bound: u64,
    /// `None` outside the regime where the bound is exact.
    pub agrees: Option<bool>,
    pub witness_ok: bool,
    pub oracle_size: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NontrivialCheck {
    pub status: SearchStatus,
    pub size: usize,
    pub m_max: Option<u64>,
    pub relation: Relation,
    pub witness_ok: bool,
    pub oracle_size: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceReport {
    pub instance: InstanceDoc,
    pub ekr_regime: bool,
    pub intersecting: IntersectingCheck,
    pub nontrivial: NontrivialCheck,
    pub ok: bool,
    pub ms: u128,
}

/// Solves both modes and compares them with the closed forms and, within
/// the oracle cap, with the oracle.
pub fn verify_instance(ps: &PartStructure, cfg: &SearchConfig) -> Result<InstanceReport> {
    let start = Instant::now();
    // fail early with the graph's own cap error
    IntersectionGraph::build(ps, cfg.vertex_cap)?;
    let with_oracle = ps.layer_size_u64().is_some_and(|n| n <= ORACLE_BNB_CAP as u64);

    let inter = max_family_with(ps, Mode::Intersecting, cfg)?;
    let bound = frankl_bound(ps).to_u64().expect("bounded by the vertex cap");
    let inter_oracle = if with_oracle { Some(oracle_max(ps, Mode::Intersecting)?.size) } else { None };
    let intersecting = IntersectingCheck {
        size: inter.size,
        frankl_bound: bound,
        agrees: ps.ekr_regime().then_some(inter.size as u64 == bound),
        witness_ok: inter.witness.is_intersecting() && inter.witness.len() == inter.size,
        oracle_size: inter_oracle,
    };

    let nt = max_family_with(ps, Mode::Nontrivial, cfg)?;
    let construction = m_max(ps).ok().map(|m| m.value.to_u64().expect("bounded by the vertex cap"));
    let relation = match construction {
        None => Relation::NoConstruction,
        Some(c) if (nt.size as u64) == c => Relation::Equal,
        Some(c) if (nt.size as u64) > c => Relation::Exceeds,
        Some(_) => Relation::Below,
    };
    let nt_witness_ok = match nt.status {
        SearchStatus::Optimal => nt.witness.classify() == FamilyClass::Nontrivial && nt.witness.len() == nt.size,
        SearchStatus::Infeasible => nt.witness.is_empty() && nt.size == 0,
    };
    let nt_oracle = if with_oracle { Some(oracle_max(ps, Mode::Nontrivial)?.size) } else { None };
    let nontrivial = NontrivialCheck {
        status: nt.status,
        size: nt.size,
        m_max: construction,
        relation,
        witness_ok: nt_witness_ok,
        oracle_size: nt_oracle,
    };

    let ok = intersecting.agrees != Some(false)
        && intersecting.witness_ok
        && intersecting.oracle_size.is_none_or(|s| s == intersecting.size)
        && nontrivial.relation != Relation::Below
        && nontrivial.witness_ok
        && nontrivial.oracle_size.is_none_or(|s| s == nontrivial.size);
    Ok(InstanceReport {
        instance: InstanceDoc::of(ps),
        ekr_regime: ps.ekr_regime(),
        intersecting,
        nontrivial,
        ok,
        ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(n: &[i64], k: &[i64]) -> PartStructure {
        PartStructure::new(n, k).unwrap()
    }

    #[test]
    fn reports() {
        let r = verify_instance(&ps(&[2, 2, 2], &[1, 1, 1]), &SearchConfig::default()).unwrap();
        assert!(r.ok);
        assert_eq!((r.nontrivial.size, r.nontrivial.m_max, r.nontrivial.relation), (4, Some(4), Relation::Equal));
        assert_eq!(r.nontrivial.oracle_size, Some(4));

        let r = verify_instance(&ps(&[6], &[2]), &SearchConfig::default()).unwrap();
        assert!(r.ok);
        assert_eq!((r.intersecting.size, r.intersecting.agrees), (5, Some(true)));
        assert_eq!((r.nontrivial.size, r.nontrivial.m_max), (3, Some(3)));

        let r = verify_instance(&ps(&[2, 2], &[1, 1]), &SearchConfig::default()).unwrap();
        assert!(r.ok);
        assert_eq!(r.nontrivial.status, SearchStatus::Infeasible);
        assert_eq!(r.nontrivial.relation, Relation::NoConstruction);
    }

    #[test]
    fn search_report_shape() {
        let p = ps(&[3, 3, 3], &[1, 1, 1]);
        let r = max_family_with(&p, Mode::Nontrivial, &SearchConfig::default()).unwrap();
        let v = serde_json::to_value(SearchReport::new(&p, Mode::Nontrivial, &r)).unwrap();
        assert_eq!(v["mode"], "nontrivial");
        assert_eq!(v["size"], 7);
        assert_eq!(v["status"], "optimal");
        assert_eq!(v["matches_m_max"], true);
        assert!(v.get("matches_frankl").is_none());
        assert_eq!(v["instance"]["parts"][0]["n"], 3);
    }
}
