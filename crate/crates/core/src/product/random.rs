//! Randomised bad cover of `G □ K_{l,t}` for `l ≥ 2` with `A = k + l − 1`
//! colours per list.
//!
//! The `A`-colourings of `G` fall into `b = P(G,A)/A` shift classes. Each
//! block is a tuple `p ∈ [b]^l` (lexicographic order) and owns `c` leaves.
//! For leaf `ω` of a block and each `j`, a uniform bijection `σ_{j,ω}` of
//! `[A]` sends the member of class `p_j` with shift `s` to colour `σ(s)` of
//! the leaf. A colouring whose parts have shifts `s` removes the colours
//! `σ_{1,ω}(s_1), …, σ_{l,ω}(s_l)` at every vertex of the leaf, so it is
//! volatile there exactly when these `l` colours are distinct. A block is
//! resampled until each of its `A^l` colourings is volatile for one of its
//! leaves.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use super::certificate::{BlockRecord, CoverCertificate};
use super::constants::c_constant;
use super::star::{build_star_bad_cover, check_hypotheses, HypothesisChecks};
use super::{shift_classes, verify_bad_by_volatility, BadnessVerdict, ProductCover, ShiftClasses};
use crate::coloring::chromatic_polynomial_eval;
use crate::cover::Matching;
use crate::error::{Error, Limits, Result};
use crate::graph::SimpleGraph;

/// `σ[j][ω][s]` for one block.
type Bijections = Vec<Vec<Vec<usize>>>;

/// Resampling limit per block.
pub const RETRY_CAP: u32 = 10_000;

#[derive(Debug, Clone)]
pub struct RandomOutcome {
    pub product: ProductCover,
    pub verdict: BadnessVerdict,
    pub certificate: CoverCertificate,
    /// Sampling attempts per block (1 = accepted on the first draw).
    pub attempts: Vec<u32>,
}

impl RandomOutcome {
    /// Total number of rejected draws.
    pub fn resamples(&self) -> u64 {
        self.attempts.iter().map(|&a| u64::from(a) - 1).sum()
    }
}

/// Block `m` of `[b]^l` in lexicographic order.
pub fn block_tuple(m: usize, b: usize, l: usize) -> Vec<usize> {
    let mut p = vec![0; l];
    let mut rest = m;
    for slot in p.iter_mut().rev() {
        *slot = rest % b;
        rest /= b;
    }
    p
}

/// Whether every shift tuple in `[A]^l` meets pairwise distinct colours under
/// the bijections of at least one leaf (`sigma[j][ω]`).
pub fn block_covers_all(sigma: &[Vec<Vec<usize>>], a: usize) -> bool {
    let l = sigma.len();
    let c = sigma.first().map_or(0, Vec::len);
    let total = a.pow(l as u32);
    let mut seen = vec![false; a];
    (0..total).all(|code| {
        let s = block_tuple(code, a, l);
        (0..c).any(|w| {
            seen.iter_mut().for_each(|x| *x = false);
            (0..l).all(|j| !std::mem::replace(&mut seen[sigma[j][w][s[j]]], true))
        })
    })
}

/// Draws `l·c` bijections for block `m` until the block succeeds.
pub fn sample_block(seed: u64, m: usize, a: usize, l: usize, c: usize) -> Result<(Vec<Vec<Vec<usize>>>, u32)> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(m as u64);
    for attempt in 1..=RETRY_CAP {
        let sigma: Vec<Vec<Vec<usize>>> = (0..l)
            .map(|_| {
                (0..c)
                    .map(|_| {
                        let mut p: Vec<usize> = (0..a).collect();
                        p.shuffle(&mut rng);
                        p
                    })
                    .collect()
            })
            .collect();
        if block_covers_all(&sigma, a) {
            return Ok((sigma, attempt));
        }
    }
    Err(Error::RetryCapExhausted {
        block: m,
        attempts: RETRY_CAP as usize,
    })
}

/// Assembles the product cover from per-block bijections; leaves beyond
/// `c · b^l` get empty matchings.
pub(crate) fn random_from_blocks(
    g: &SimpleGraph,
    k: usize,
    l: usize,
    t: usize,
    classes: &ShiftClasses,
    c: usize,
    blocks: &[BlockRecord],
) -> Result<ProductCover> {
    let a = k + l - 1;
    let b = classes.len();
    ProductCover::build(g, l, t, a, |u, j, q| {
        let m = q / c;
        match blocks.get(m) {
            Some(block) => {
                let class = block.p[j];
                let sigma = &block.bijections[j][q % c];
                let perm: Vec<usize> = (0..a).map(|x| sigma[classes.shift_of(class, u, x)]).collect();
                debug_assert!(class < b);
                Matching::from_permutation(&perm)
            }
            None => Matching::empty(a, a),
        }
    })
}

/// Builds, resamples and verifies the randomised construction. `l = 1` is
/// delegated to the deterministic star construction.
#[allow(clippy::too_many_arguments)]
pub fn build_random_bad_cover(
    g: &SimpleGraph,
    k: usize,
    l: usize,
    t: usize,
    seed: u64,
    checks: HypothesisChecks,
    limits: &Limits,
) -> Result<RandomOutcome> {
    if l == 1 {
        let star = build_star_bad_cover(g, k, t, checks, limits)?;
        return Ok(RandomOutcome {
            product: star.product,
            verdict: star.verdict,
            certificate: star.certificate,
            attempts: Vec::new(),
        });
    }
    if l == 0 {
        return Err(Error::Precondition("l must be at least 1".into()));
    }
    if k < 2 {
        return Err(Error::Precondition("random construction needs k >= 2".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    check_hypotheses(g, k, checks, limits)?;
    let a = k + l - 1;
    let d = chromatic_polynomial_eval(g, a, limits)?;
    let b_big = &d / BigUint::from(a);
    let c = c_constant(k, l)?;
    let needed = BigUint::from(c) * b_big.pow(l as u32);
    if BigUint::from(t) < needed {
        return Err(Error::Precondition(format!(
            "t = {t} is below the threshold c·(P(G,{a})/{a})^{l} = {c}·{b_big}^{l} = {needed}"
        )));
    }
    let classes = shift_classes(g, a, limits)?;
    let b = classes.len();
    debug_assert_eq!(Some(b), b_big.to_usize());
    let c = c as usize;
    let block_count = b.pow(l as u32);
    let sampled: Result<Vec<(Bijections, u32)>> = (0..block_count)
        .into_par_iter()
        .map(|m| sample_block(seed, m, a, l, c))
        .collect();
    let blocks: Vec<BlockRecord> = sampled?
        .into_iter()
        .enumerate()
        .map(|(m, (bijections, attempts))| BlockRecord {
            p: block_tuple(m, b, l),
            leaves: (c * m..c * m + c).collect(),
            attempts,
            bijections,
        })
        .collect();
    let product = random_from_blocks(g, k, l, t, &classes, c, &blocks)?;
    let verdict = verify_bad_by_volatility(&product, limits)?;
    let attempts = blocks.iter().map(|bl| bl.attempts).collect();
    let certificate = CoverCertificate::new_random(g, k, l, t, seed, &classes, c as u64, &d, blocks, &product, &verdict);
    Ok(RandomOutcome {
        product,
        verdict,
        certificate,
        attempts,
    })
}
