//! Self-contained JSON certificates for constructed product covers.
//!
//! A certificate records the base graph (graph6), every integer parameter,
//! the class representatives, the pairing or block bijections, the seed and
//! the full list of matchings. Its `hash` is the SHA-256 of the serialised
//! certificate with an empty `hash` field. Replaying rebuilds the cover from
//! the construction data and compares it with the recorded matchings.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::random::random_from_blocks;
use super::star::star_from_pairing;
use super::{shift_classes, verify_bad_by_volatility, BadnessVerdict, ProductCover, ShiftClasses};
use crate::cover::MatchingRecord;
use crate::error::{Error, Limits, Result};
use crate::format::{parse_graph6, to_graph6};
use crate::graph::SimpleGraph;

pub const CERTIFICATE_VERSION: u32 = 1;
pub const STATUS_BAD: &str = "BAD verified";
pub const STATUS_NOT_BAD: &str = "NOT BAD";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Star,
    Random,
}

/// One block of the randomised construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRecord {
    /// Class index per part `x_j`.
    pub p: Vec<usize>,
    pub leaves: Vec<usize>,
    pub attempts: u32,
    /// `bijections[j][ω][s]`: colour of leaf `ω` receiving shift `s` of part `j`.
    pub bijections: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCertificate {
    pub version: u32,
    pub kind: CertificateKind,
    pub graph6: String,
    pub k: usize,
    pub l: usize,
    pub t: usize,
    /// List size on every vertex of the product.
    pub fold: usize,
    pub seed: Option<u64>,
    /// Class representatives, in class order.
    pub classes: Vec<Vec<usize>>,
    /// Star: class paired with each leaf.
    pub pairing: Option<Vec<Option<usize>>>,
    /// Random: number of `fold`-colourings of the base graph, as a decimal string.
    pub d: Option<String>,
    pub c: Option<u64>,
    pub blocks: Vec<BlockRecord>,
    pub matchings: Vec<MatchingRecord>,
    pub x_colorings: usize,
    pub verified: bool,
    pub status: String,
    pub hash: String,
}

/// Result of re-checking a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub bad: bool,
    pub x_colorings: usize,
    pub status: String,
    /// Whether the recomputed status equals the recorded one.
    pub status_matches: bool,
}

fn status_of(verdict: &BadnessVerdict) -> String {
    if verdict.bad { STATUS_BAD } else { STATUS_NOT_BAD }.to_string()
}

impl CoverCertificate {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        kind: CertificateKind,
        g: &SimpleGraph,
        k: usize,
        l: usize,
        t: usize,
        seed: Option<u64>,
        classes: &ShiftClasses,
        pairing: Option<Vec<Option<usize>>>,
        d: Option<String>,
        c: Option<u64>,
        blocks: Vec<BlockRecord>,
        product: &ProductCover,
        verdict: &BadnessVerdict,
    ) -> Self {
        let mut cert = CoverCertificate {
            version: CERTIFICATE_VERSION,
            kind,
            graph6: to_graph6(g),
            k,
            l,
            t,
            fold: product.fold(),
            seed,
            classes: classes.representatives.iter().map(|r| r.colors.clone()).collect(),
            pairing,
            d,
            c,
            blocks,
            matchings: product.cover().to_record().matchings,
            x_colorings: verdict.x_colorings,
            verified: verdict.bad,
            status: status_of(verdict),
            hash: String::new(),
        };
        cert.hash = cert.compute_hash();
        cert
    }

    pub(crate) fn new_star(
        g: &SimpleGraph,
        k: usize,
        t: usize,
        classes: &ShiftClasses,
        pairing: Vec<Option<usize>>,
        product: &ProductCover,
        verdict: &BadnessVerdict,
    ) -> Self {
        Self::assemble(
            CertificateKind::Star,
            g,
            k,
            1,
            t,
            None,
            classes,
            Some(pairing),
            None,
            None,
            Vec::new(),
            product,
            verdict,
        )
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new_random(
        g: &SimpleGraph,
        k: usize,
        l: usize,
        t: usize,
        seed: u64,
        classes: &ShiftClasses,
        c: u64,
        d: &BigUint,
        blocks: Vec<BlockRecord>,
        product: &ProductCover,
        verdict: &BadnessVerdict,
    ) -> Self {
        Self::assemble(
            CertificateKind::Random,
            g,
            k,
            l,
            t,
            Some(seed),
            classes,
            None,
            Some(d.to_string()),
            Some(c),
            blocks,
            product,
            verdict,
        )
    }

    /// SHA-256 (hex) of the compact serialisation with `hash` blanked.
    pub fn compute_hash(&self) -> String {
        let mut blank = self.clone();
        blank.hash.clear();
        let body = serde_json::to_vec(&blank).expect("certificate serialises");
        hex::encode(Sha256::digest(&body))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn graph(&self) -> Result<SimpleGraph> {
        parse_graph6(&self.graph6)
    }

    /// Rebuilds the product cover from the construction data and checks it
    /// against the recorded hash and matchings.
    pub fn replay(&self, limits: &Limits) -> Result<ProductCover> {
        if self.version != CERTIFICATE_VERSION {
            return Err(Error::Certificate(format!("unsupported version {}", self.version)));
        }
        if self.compute_hash() != self.hash {
            return Err(Error::Certificate("content hash mismatch".into()));
        }
        let g = self.graph()?;
        let classes = shift_classes(&g, self.fold, limits)?;
        let reps: Vec<Vec<usize>> = classes.representatives.iter().map(|r| r.colors.clone()).collect();
        if reps != self.classes {
            return Err(Error::Certificate("class representatives differ from the recomputed ones".into()));
        }
        let product = match self.kind {
            CertificateKind::Star => {
                let pairing = self
                    .pairing
                    .as_ref()
                    .ok_or_else(|| Error::Certificate("star certificate without pairing".into()))?;
                if self.l != 1 || self.fold != self.k || pairing.len() != self.t {
                    return Err(Error::Certificate("star parameters are inconsistent".into()));
                }
                star_from_pairing(&g, self.k, &classes, pairing)?
            }
            CertificateKind::Random => {
                let c = self.c.ok_or_else(|| Error::Certificate("random certificate without c".into()))? as usize;
                if self.l < 2 || self.fold != self.k + self.l - 1 || c == 0 {
                    return Err(Error::Certificate("random parameters are inconsistent".into()));
                }
                self.check_blocks(classes.len(), c)?;
                random_from_blocks(&g, self.k, self.l, self.t, &classes, c, &self.blocks)?
            }
        };
        if product.cover().to_record().matchings != self.matchings {
            return Err(Error::Certificate("replayed matchings differ from the recorded ones".into()));
        }
        Ok(product)
    }

    fn check_blocks(&self, b: usize, c: usize) -> Result<()> {
        let a = self.fold;
        let expected = b.checked_pow(self.l as u32).ok_or(Error::Overflow("block count"))?;
        if self.blocks.len() != expected || c * expected > self.t {
            return Err(Error::Certificate("block count does not match the parameters".into()));
        }
        for (m, blk) in self.blocks.iter().enumerate() {
            let perm_ok = |p: &Vec<usize>| {
                let mut s = p.clone();
                s.sort_unstable();
                s == (0..a).collect::<Vec<_>>()
            };
            let shape_ok = blk.p.len() == self.l
                && blk.p.iter().all(|&x| x < b)
                && blk.leaves == (c * m..c * m + c).collect::<Vec<_>>()
                && blk.bijections.len() == self.l
                && blk.bijections.iter().all(|row| row.len() == c && row.iter().all(perm_ok));
            if !shape_ok || blk.p != super::random::block_tuple(m, b, self.l) {
                return Err(Error::Certificate(format!("block {m} is malformed")));
            }
        }
        Ok(())
    }

    /// Replays the certificate and reruns the volatility verification.
    pub fn verify(&self, limits: &Limits) -> Result<VerifyReport> {
        let product = self.replay(limits)?;
        let verdict = verify_bad_by_volatility(&product, limits)?;
        let status = status_of(&verdict);
        Ok(VerifyReport {
            bad: verdict.bad,
            x_colorings: verdict.x_colorings,
            status_matches: status == self.status && verdict.bad == self.verified,
            status,
        })
    }
}
