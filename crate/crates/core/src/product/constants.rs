//! Constants of the randomised construction and bracket values for the star
//! threshold.
//!
//! With `A = k + l − 1`, a uniformly random tuple of `l` bijections onto
//! `[A]` sends `l` fixed colourings to distinct colours with probability
//! `p = A! / ((k−1)! A^l)`. Writing `N = (k−1)! A^l` and `D = N − A!`, the
//! number of leaves per block is the ceiling of `l ln A / ln(N/D)`, which
//! is decided exactly as the least `c` with `N^c ≥ A^l D^c`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::coloring::chromatic_polynomial_eval;
use crate::dp::{is_robustly_critical, p_dp, Mode};
use crate::error::{Error, Limits, Resource, Result};
use crate::graph::SimpleGraph;

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, x| acc * x)
}

fn domain(k: usize, l: usize) -> Result<()> {
    if k < 2 || l < 2 {
        return Err(Error::Domain(format!("constant requires k >= 2 and l >= 2, got k = {k}, l = {l}")));
    }
    Ok(())
}

/// `(N, D, A^l)` for the pair `(k, l)`.
fn block_terms(k: usize, l: usize) -> (BigUint, BigUint, BigUint) {
    let a = (k + l - 1) as u64;
    let al = BigUint::from(a).pow(l as u32);
    let n = factorial(k as u64 - 1) * &al;
    let d = &n - factorial(a);
    (n, d, al)
}

fn least_c(k: usize, l: usize, strict: bool) -> Result<u64> {
    domain(k, l)?;
    let (n, d, al) = block_terms(k, l);
    let holds = |c: u64| {
        let lhs = n.pow(c as u32);
        let rhs = &al * d.pow(c as u32);
        if strict {
            lhs > rhs
        } else {
            lhs >= rhs
        }
    };
    // floating estimate, then settled by exact comparisons
    let ratio = n.to_f64().unwrap_or(f64::INFINITY).ln() - d.to_f64().unwrap_or(f64::INFINITY).ln();
    let estimate = (l as f64 * ((k + l - 1) as f64).ln() / ratio).ceil();
    if !estimate.is_finite() || estimate > 1e6 {
        return Err(Error::Domain(format!("constant for k = {k}, l = {l} is too large to evaluate exactly")));
    }
    let mut c = (estimate as u64).max(1);
    while c > 1 && holds(c - 1) {
        c -= 1;
    }
    while !holds(c) {
        c += 1;
    }
    Ok(c)
}

/// Leaves per block: the ceiling of `l ln A / (ln (k−1)! + l ln A − ln((k−1)! A^l − A!))`.
pub fn c_constant(k: usize, l: usize) -> Result<u64> {
    least_c(k, l, false)
}

/// Least `c` with `A^l (1 − p)^c < 1`, i.e. fewer than one uncovered element
/// per block in expectation.
pub fn c_constant_strict(k: usize, l: usize) -> Result<u64> {
    least_c(k, l, true)
}

/// The closed-form upper bound `l (k−1)! ln A / A! · A^l` on the constant.
pub fn c_upper_bound(k: usize, l: usize) -> Result<f64> {
    domain(k, l)?;
    let a = (k + l - 1) as f64;
    let ratio = BigRational::new(
        factorial(k as u64 - 1).into(),
        factorial((k + l - 1) as u64).into(),
    );
    let ratio = ratio.to_f64().ok_or(Error::Overflow("bound ratio"))?;
    Ok(l as f64 * ratio * a.ln() * a.powi(l as i32))
}

/// Whether the constant obeys its closed-form bound; ties closer than the
/// floating tolerance are reported as undecidable.
pub fn c_bound_check(k: usize, l: usize) -> Result<bool> {
    let c = c_constant(k, l)? as f64;
    let bound = c_upper_bound(k, l)?;
    if (c - bound).abs() <= 1e-12 * bound.abs().max(1.0) {
        return Err(Error::Domain(format!("bound comparison for k = {k}, l = {l} is within rounding")));
    }
    Ok(c <= bound)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbabilityMethod {
    Formula,
    /// Counts over every tuple of bijections.
    Exact,
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProbabilityResult {
    Exact(BigRational),
    Estimate { successes: u64, samples: u64 },
}

impl ProbabilityResult {
    pub fn to_f64(&self) -> f64 {
        match self {
            ProbabilityResult::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            ProbabilityResult::Estimate { successes, samples } => *successes as f64 / *samples as f64,
        }
    }
}

const EXACT_CAP: u64 = 100_000_000;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Probability that `l` independent uniform bijections onto `[k+l−1]` send
/// one fixed colouring class member each to pairwise distinct colours.
pub fn volatility_probability(k: usize, l: usize, method: ProbabilityMethod) -> Result<ProbabilityResult> {
    if k < 2 || l < 1 {
        return Err(Error::Domain(format!("probability requires k >= 2 and l >= 1, got k = {k}, l = {l}")));
    }
    let a = k + l - 1;
    match method {
        ProbabilityMethod::Formula => {
            let num = factorial(a as u64);
            let den = factorial(k as u64 - 1) * BigUint::from(a).pow(l as u32);
            Ok(ProbabilityResult::Exact(BigRational::new(num.into(), den.into())))
        }
        ProbabilityMethod::Exact => {
            let perms = factorial(a as u64)
                .to_u64()
                .filter(|&f| f.checked_pow(l as u32).is_some_and(|t| t <= EXACT_CAP))
                .ok_or(Error::CapExceeded {
                    resource: Resource::Colorings,
                    cap: EXACT_CAP,
                })?;
            let all = permutations(a);
            let total = perms.pow(l as u32);
            let mut good = 0u64;
            let mut idx = vec![0usize; l];
            let mut seen = vec![false; a];
            for _ in 0..total {
                seen.iter_mut().for_each(|s| *s = false);
                let distinct = idx.iter().all(|&i| !std::mem::replace(&mut seen[all[i][0]], true));
                good += u64::from(distinct);
                for slot in idx.iter_mut().rev() {
                    *slot += 1;
                    if *slot < all.len() {
                        break;
                    }
                    *slot = 0;
                }
            }
            Ok(ProbabilityResult::Exact(BigRational::new(
                BigUint::from(good).into(),
                BigUint::from(total).into(),
            )))
        }
        ProbabilityMethod::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::Domain("Monte Carlo needs at least one sample".into()));
            }
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let mut perm: Vec<usize> = (0..a).collect();
            let mut seen = vec![false; a];
            let mut successes = 0;
            for _ in 0..samples {
                seen.iter_mut().for_each(|s| *s = false);
                let mut distinct = true;
                for _ in 0..l {
                    perm.shuffle(&mut rng);
                    distinct &= !std::mem::replace(&mut seen[perm[0]], true);
                }
                successes += u64::from(distinct);
            }
            Ok(ProbabilityResult::Estimate { successes, samples })
        }
    }
}

/// `P_DP(G,k)/k ≤ f ≤ P(G,k)/k` for a robustly k-critical graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FdpBracket {
    pub lower: BigRational,
    pub upper: BigRational,
}

impl FdpBracket {
    pub fn exact(&self) -> Option<&BigRational> {
        (self.lower == self.upper).then_some(&self.lower)
    }
}

pub fn f_dp_bracket(g: &SimpleGraph, k: usize, limits: &Limits) -> Result<FdpBracket> {
    let verdict = is_robustly_critical(g, k, Mode::Reduced, limits)?;
    if !verdict.critical {
        return Err(Error::Hypothesis(format!("graph is not {k}-critical")));
    }
    if !verdict.robust {
        return Err(Error::Hypothesis(format!("graph is not robustly {k}-critical")));
    }
    let kk = BigRational::from_integer(BigUint::from(k).into());
    let lower = BigRational::from_integer(p_dp(g, k, limits)?.into()) / &kk;
    let upper = BigRational::from_integer(chromatic_polynomial_eval(g, k, limits)?.into()) / &kk;
    debug_assert!(lower <= upper && !upper.is_zero());
    Ok(FdpBracket { lower, upper })
}
