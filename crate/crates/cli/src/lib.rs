//! Command-line harness for `mpfam`: argument helpers, reproduction bundles
//! and the report format they share.

pub mod report;
pub mod suites;

use mpfam::search::SearchConfig;
use mpfam::DEFAULT_LAYER_CAP;

pub use report::{Claim, ReproductionReport, Status};

pub const LAYER_CAP_VAR: &str = "MPFAM_LAYER_CAP";
pub const VERTEX_CAP_VAR: &str = "MPFAM_VERTEX_CAP";

/// Seed of the randomized shifting bundle; fixed so reports are repeatable.
pub const SHIFTING_SEED: u64 = 0x5eed;

fn env_cap(var: &str) -> Result<Option<u64>, String> {
    match std::env::var(var) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| format!("{var}={v:?} is not a non-negative integer")),
        Err(_) => Ok(None),
    }
}

/// Layer cap for materializing families, from the environment if set.
pub fn layer_cap() -> Result<u64, String> {
    Ok(env_cap(LAYER_CAP_VAR)?.unwrap_or(DEFAULT_LAYER_CAP))
}

/// Search configuration with the vertex cap taken from the environment if
/// set.
pub fn search_config(threads: usize) -> Result<SearchConfig, String> {
    let mut cfg = SearchConfig { threads: threads.max(1), ..SearchConfig::default() };
    if let Some(cap) = env_cap(VERTEX_CAP_VAR)? {
        cfg.vertex_cap = usize::try_from(cap).map_err(|_| format!("{VERTEX_CAP_VAR} too large"))?;
    }
    Ok(cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Counterexample,
    K1Table,
    HmTable,
    Identities,
    All,
}

/// Runs a reproduction bundle. `k1` selects the part counts and the largest
/// `n` of the `k = 1` table.
pub fn reproduce(suite: Suite, k1: (&[usize], i64), cfg: &SearchConfig) -> ReproductionReport {
    match suite {
        Suite::Counterexample => {
            let mut r = suites::counterexample();
            r.extend(suites::recorded_optimum(cfg));
            r
        }
        Suite::K1Table => suites::k1_table(k1.0, k1.1, cfg),
        Suite::HmTable => suites::hm_table(cfg),
        Suite::Identities => suites::identities(),
        Suite::All => {
            let mut r = ReproductionReport::new("all");
            for s in [Suite::Counterexample, Suite::K1Table, Suite::HmTable, Suite::Identities] {
                r.extend(reproduce(s, k1, cfg));
            }
            r
        }
    }
}

/// Every bundle, including the property sweeps and the engine
/// cross-validation.
pub fn selftest(cfg: &SearchConfig) -> ReproductionReport {
    let mut r = ReproductionReport::new("selftest");
    r.extend(reproduce(Suite::All, (&[3, 4], 4), cfg));
    r.extend(suites::frankl_grid(cfg));
    r.extend(suites::coherence(10_000));
    r.extend(suites::shifting_suite(1000, SHIFTING_SEED));
    r.extend(suites::cross_validation(cfg));
    r
}
