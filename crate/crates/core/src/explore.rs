//! Per-graph evidence for two open problems about robustly critical graphs:
//! whether k-critical graphs with χ = χ_DP whose bad (k−1)-fold covers are
//! all full must be robustly critical, and whether robust criticality forces
//! `P(G,k) = P_DP(G,k)`. Rows report measured facts only.

use num_bigint::BigUint;
use serde::Serialize;

use crate::coloring::{chromatic_polynomial_eval, is_k_critical};
use crate::dp::{every_bad_cover_canonical, every_bad_cover_full, find_bad_full_cover, p_dp, Mode};
use crate::error::{Error, Limits, Result};
use crate::format::to_graph6;
use crate::graph::SimpleGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExploreRow {
    pub graph6: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub critical: bool,
    /// χ_DP(G) = k (only computed for k-critical graphs).
    pub chi_dp_is_k: Option<bool>,
    pub every_bad_cover_full: Option<bool>,
    pub robust: Option<bool>,
    #[serde(serialize_with = "opt_big")]
    pub p: Option<BigUint>,
    #[serde(serialize_with = "opt_big")]
    pub p_dp: Option<BigUint>,
    /// Set when some quantity was skipped because a cap was hit.
    pub notice: Option<String>,
}

fn opt_big<S: serde::Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_none(),
    }
}

impl ExploreRow {
    /// Critical, χ_DP = k and every bad (k−1)-fold cover full.
    pub fn hypothesis_holds(&self) -> Option<bool> {
        Some(self.critical && self.chi_dp_is_k? && self.every_bad_cover_full?)
    }
}

fn capped<T>(r: Result<T>, what: &str, notice: &mut Vec<String>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e @ Error::CapExceeded { .. }) => {
            notice.push(format!("{what}: {e}"));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

pub fn explore_graph(g: &SimpleGraph, k: usize, limits: &Limits) -> Result<ExploreRow> {
    if k < 2 {
        return Err(Error::Precondition("explorer needs k >= 2".into()));
    }
    let mut notice = Vec::new();
    let critical = capped(is_k_critical(g, k, limits), "criticality", &mut notice)?;
    let is_crit = critical == Some(true);
    let (mut chi_dp_is_k, mut full, mut robust) = (None, None, None);
    if is_crit {
        chi_dp_is_k = capped(find_bad_full_cover(g, k, limits), "chi_dp", &mut notice)?.map(|c| c.is_none());
        full = capped(every_bad_cover_full(g, k - 1, limits), "fullness", &mut notice)?;
        robust = capped(every_bad_cover_canonical(g, k - 1, Mode::Reduced, limits), "robustness", &mut notice)?;
    } else if critical.is_some() {
        robust = Some(false);
    }
    let p = capped(chromatic_polynomial_eval(g, k, limits), "P(G,k)", &mut notice)?;
    let pdp = capped(p_dp(g, k, limits), "P_DP(G,k)", &mut notice)?;
    Ok(ExploreRow {
        graph6: to_graph6(g),
        n: g.n(),
        m: g.edge_count(),
        k,
        critical: is_crit,
        chi_dp_is_k,
        every_bad_cover_full: full,
        robust,
        p,
        p_dp: pdp,
        notice: (!notice.is_empty()).then(|| notice.join("; ")),
    })
}

pub fn explore(graphs: &[SimpleGraph], k: usize, limits: &Limits) -> Result<Vec<ExploreRow>> {
    graphs.iter().map(|g| explore_graph(g, k, limits)).collect()
}
