//! Pieces of the reference/test evaluation protocol that need no clock:
//! horizontal splitting, shared-concept matching, Pearson correlation and
//! the averaged elapsed time.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bitset::AttrSet;
use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::lattice::ConceptLattice;

pub const DEFAULT_SPLIT_RATIO: f64 = 0.5;

/// A context split horizontally into reference and test objects.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitPair {
    pub reference: FormalContext,
    pub test: FormalContext,
    /// Original object indices on each side, ascending.
    pub reference_objects: Vec<usize>,
    pub test_objects: Vec<usize>,
    pub seed: u64,
    pub ratio: f64,
}

/// How objects are assigned before taking the reference prefix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SplitOrder {
    /// Seeded shuffle (ChaCha8, `SliceRandom::shuffle`).
    #[default]
    Shuffled,
    /// File order, no shuffle.
    Ordered,
}

/// Number of reference objects: `ceil(ratio * n)`, kept within `1..n`.
///
/// A tolerance of 1e-9 absorbs products such as `0.7 * 10` that land just
/// above an integer.
pub fn reference_size(ratio: f64, n: usize) -> usize {
    let raw = libm::ceil(ratio * n as f64 - 1e-9);
    (raw.max(1.0) as usize).min(n - 1)
}

pub fn split_context(ctx: &FormalContext, ratio: f64, seed: u64) -> Result<SplitPair> {
    split_context_with(ctx, ratio, seed, SplitOrder::Shuffled)
}

pub fn split_context_with(ctx: &FormalContext, ratio: f64, seed: u64, order: SplitOrder) -> Result<SplitPair> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::SplitRatio(ratio));
    }
    let n = ctx.n_objects();
    if n < 2 {
        return Err(Error::TooFewObjects(n));
    }
    let mut objects: Vec<usize> = (0..n).collect();
    if order == SplitOrder::Shuffled {
        objects.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let k = reference_size(ratio, n);
    let mut reference = objects[..k].to_vec();
    reference.sort_unstable();
    let mut pair = split_by_objects(ctx, &reference)?;
    pair.seed = seed;
    pair.ratio = ratio;
    Ok(pair)
}

/// Explicit split: `reference_objects` go to the reference side, the rest
/// to the test side, each in original order.
pub fn split_by_objects(ctx: &FormalContext, reference_objects: &[usize]) -> Result<SplitPair> {
    let n = ctx.n_objects();
    let mut on_reference = alloc::vec![false; n];
    for &g in reference_objects {
        if g >= n || on_reference[g] {
            return Err(Error::BadPartition(g));
        }
        on_reference[g] = true;
    }
    let reference_objects: Vec<usize> = (0..n).filter(|&g| on_reference[g]).collect();
    let test_objects: Vec<usize> = (0..n).filter(|&g| !on_reference[g]).collect();
    Ok(SplitPair {
        reference: ctx.select_objects(&reference_objects)?,
        test: ctx.select_objects(&test_objects)?,
        ratio: reference_objects.len() as f64 / n.max(1) as f64,
        reference_objects,
        test_objects,
        seed: 0,
    })
}

/// Concepts of the two lattices with equal intents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharedConceptPairs {
    /// `(reference id, test id)`, ordered by intent size then intent bit
    /// pattern.
    pub pairs: Vec<(usize, usize)>,
}

impl SharedConceptPairs {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

pub fn shared_concepts(reference: &ConceptLattice, test: &ConceptLattice) -> Result<SharedConceptPairs> {
    if reference.attributes() != test.attributes() {
        return Err(Error::AttributeMismatch);
    }
    let mut matched: BTreeMap<(usize, &AttrSet), (usize, usize)> = BTreeMap::new();
    for c in reference.concepts() {
        if let Some(t) = test.find_intent(&c.intent) {
            matched.insert((c.intent.count(), &c.intent), (c.id, t));
        }
    }
    Ok(SharedConceptPairs {
        pairs: matched.into_values().collect(),
    })
}

/// Pearson correlation of paired scores.
///
/// `Ok(None)` means undefined: one of the two lists has zero variance.
/// Deviations are taken from the means before summing, which is the same
/// quantity as the raw-moment form `sum(xy) - n*mean(x)*mean(y)` over the
/// product of `sqrt(sum(x^2) - n*mean(x)^2)` terms, without its cancellation.
pub fn pearson(pairs: &[(f64, f64)]) -> Result<Option<f64>> {
    let n = pairs.len();
    if n < 2 {
        return Err(Error::TooFewPairs(n));
    }
    let (x0, y0) = pairs[0];
    if pairs.iter().all(|p| p.0 == x0) || pairs.iter().all(|p| p.1 == y0) {
        return Ok(None);
    }
    let nf = n as f64;
    let mean_x = pairs.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = pairs.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in pairs {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(None);
    }
    let r = sxy / (libm::sqrt(sxx) * libm::sqrt(syy));
    Ok(Some(r.clamp(-1.0, 1.0)))
}

/// Mean of the two sides' mean elapsed times.
pub fn avg_elapsed_time(reference: &[f64], test: &[f64]) -> Result<f64> {
    if reference.is_empty() || test.is_empty() {
        return Err(Error::EmptyTimings);
    }
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    Ok(0.5 * (mean(reference) + mean(test)))
}
