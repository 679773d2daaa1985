//! Deterministic bad cover of `G □ K_{1,t}`: shift class `i` is paired with
//! leaf `y_i`, and the member of class `i` with shift `r` is sent to colour
//! `r` of the leaf at every vertex. A colouring in class `i` therefore
//! removes one and the same colour from each list of leaf `i`, leaving a
//! canonical (k−1)-fold cover of a k-chromatic graph.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::certificate::{CertificateKind, CoverCertificate};
use super::{shift_classes, verify_bad_by_volatility, BadnessVerdict, ProductCover, ShiftClasses};
use crate::coloring::{chromatic_polynomial_eval, is_k_critical};
use crate::cover::Matching;
use crate::dp::chi_dp;
use crate::error::{Error, Limits, Result};
use crate::graph::SimpleGraph;

/// Which hypotheses of the construction are checked before building.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HypothesisChecks {
    pub critical: bool,
    /// Also confirm χ_DP(G) = k by exhaustive enumeration.
    pub chi_dp: bool,
}

impl Default for HypothesisChecks {
    fn default() -> Self {
        HypothesisChecks {
            critical: true,
            chi_dp: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct StarOutcome {
    pub product: ProductCover,
    pub classes: ShiftClasses,
    pub verdict: BadnessVerdict,
    pub certificate: CoverCertificate,
}

/// Cross matchings of the star construction; no threshold or hypothesis
/// checks, leaves beyond the class count get empty matchings and classes
/// beyond `t` stay unpaired.
pub fn star_product_cover(g: &SimpleGraph, k: usize, t: usize, limits: &Limits) -> Result<(ProductCover, ShiftClasses)> {
    let classes = shift_classes(g, k, limits)?;
    let pc = star_from_classes(g, k, t, &classes)?;
    Ok((pc, classes))
}

pub(crate) fn star_from_classes(g: &SimpleGraph, k: usize, t: usize, classes: &ShiftClasses) -> Result<ProductCover> {
    let pairing: Vec<Option<usize>> = (0..t).map(|q| (q < classes.len()).then_some(q)).collect();
    star_from_pairing(g, k, classes, &pairing)
}

/// Leaf `q` receives the class `pairing[q]`, or empty matchings for `None`.
pub(crate) fn star_from_pairing(
    g: &SimpleGraph,
    k: usize,
    classes: &ShiftClasses,
    pairing: &[Option<usize>],
) -> Result<ProductCover> {
    if let Some(bad) = pairing.iter().flatten().find(|&&i| i >= classes.len()) {
        return Err(Error::Certificate(format!("pairing names class {bad} of {}", classes.len())));
    }
    ProductCover::build(g, 1, pairing.len(), k, |u, _, q| match pairing[q] {
        Some(i) => Matching::from_permutation(&(0..k).map(|a| classes.shift_of(i, u, a)).collect::<Vec<_>>()),
        None => Matching::empty(k, k),
    })
}

pub(crate) fn check_hypotheses(g: &SimpleGraph, k: usize, checks: HypothesisChecks, limits: &Limits) -> Result<()> {
    if checks.critical && !is_k_critical(g, k, limits)? {
        return Err(Error::Hypothesis(format!("graph is not {k}-critical")));
    }
    if checks.chi_dp {
        let x = chi_dp(g, limits)?;
        if x != k {
            return Err(Error::Hypothesis(format!("DP-chromatic number is {x}, not {k}")));
        }
    }
    Ok(())
}

/// Builds and verifies the star construction; requires `t ≥ P(G,k)/k`.
pub fn build_star_bad_cover(
    g: &SimpleGraph,
    k: usize,
    t: usize,
    checks: HypothesisChecks,
    limits: &Limits,
) -> Result<StarOutcome> {
    if k < 2 {
        return Err(Error::Precondition("star construction needs k >= 2".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    check_hypotheses(g, k, checks, limits)?;
    let p = chromatic_polynomial_eval(g, k, limits)?;
    let needed = &p / BigUint::from(k);
    if BigUint::from(t) < needed {
        return Err(Error::Precondition(format!(
            "t = {t} is below the threshold P(G,{k})/{k} = {needed}"
        )));
    }
    let needed = needed.to_usize().ok_or(Error::Overflow("class count"))?;
    let (product, classes) = star_product_cover(g, k, t, limits)?;
    debug_assert_eq!(classes.len(), needed);
    let verdict = verify_bad_by_volatility(&product, limits)?;
    let pairing = (0..t).map(|q| (q < classes.len()).then_some(q)).collect();
    let certificate = CoverCertificate::new_star(g, k, t, &classes, pairing, &product, &verdict);
    debug_assert_eq!(certificate.kind, CertificateKind::Star);
    Ok(StarOutcome {
        product,
        classes,
        verdict,
        certificate,
    })
}
