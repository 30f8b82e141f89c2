//! The Conceptual Relevance index and the intentional stability baseline.
//!
//! Conceptual Relevance combines two ratios through an activation function:
//!
//! * `alpha`: the share of intent attributes whose removal changes the
//!   extent, `|{m in B : (B \ {m})' != A}| / |B|` (0 for an empty intent);
//! * `beta`: the number of minimal generators over the number of non-trivial
//!   subsets of the intent, `|H| / (2^|B| - 2)`, taken only when both `|H|`
//!   and `|B|` exceed 1 and 0 otherwise.
//!
//! Stability is the fraction of extent subsets whose derivation is still the
//! intent. It is computed either by exhaustive enumeration of the extent's
//! power set or exactly over the whole lattice by subtracting the counts of
//! all strictly smaller concepts.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::bitset::{AttrSet, ObjSet};
use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::generators::{face_family, minimal_generators, FaceFamily, MinGenSet};
use crate::lattice::{ConceptLattice, FormalConcept};

/// Largest extent accepted by [`stability_bruteforce`] by default.
pub const STABILITY_BRUTE_FORCE_MAX_EXTENT: usize = 24;

/// Combines `alpha` and `beta` into the final score.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Activation {
    #[default]
    Arithmetic,
    Geometric,
    Harmonic,
    Product,
    Min,
    Max,
}

impl Activation {
    pub const ALL: [Activation; 6] = [
        Activation::Arithmetic,
        Activation::Geometric,
        Activation::Harmonic,
        Activation::Product,
        Activation::Min,
        Activation::Max,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Activation::Arithmetic => "arithmetic",
            Activation::Geometric => "geometric",
            Activation::Harmonic => "harmonic",
            Activation::Product => "product",
            Activation::Min => "min",
            Activation::Max => "max",
        }
    }

    pub fn apply(self, alpha: f64, beta: f64) -> f64 {
        match self {
            Activation::Arithmetic => (alpha + beta) / 2.0,
            Activation::Geometric => libm::sqrt(alpha * beta),
            Activation::Harmonic => {
                if alpha + beta == 0.0 {
                    0.0
                } else {
                    2.0 * alpha * beta / (alpha + beta)
                }
            }
            Activation::Product => alpha * beta,
            Activation::Min => alpha.min(beta),
            Activation::Max => alpha.max(beta),
        }
    }
}

impl FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Activation::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownActivation(s.into()))
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Applies the activation called `name`.
pub fn activation(name: &str, alpha: f64, beta: f64) -> Result<f64> {
    Ok(name.parse::<Activation>()?.apply(alpha, beta))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelevanceScore {
    pub alpha: f64,
    pub beta: f64,
    pub value: f64,
    pub activation: Activation,
    /// Number of conceptually relevant attributes (numerator of `alpha`).
    pub relevant: usize,
    pub n_mingens: usize,
}

/// `(B \ {m})' != A`.
pub fn is_relevant_attribute(ctx: &FormalContext, c: &FormalConcept, m: usize) -> Result<bool> {
    if !c.intent.contains(m) {
        return Err(Error::AttributeNotInIntent(m));
    }
    let mut rest = c.intent.clone();
    rest.remove(m);
    Ok(ctx.extent_of(&rest) != c.extent)
}

/// All conceptually relevant attributes of `c`.
///
/// Uses prefix and suffix intersections of the attribute columns so that
/// each `(B \ {m})'` costs one intersection instead of `|B| - 1`.
pub fn relevant_attributes(ctx: &FormalContext, c: &FormalConcept) -> AttrSet {
    let members = c.intent.to_vec();
    let k = members.len();
    let mut out = AttrSet::empty(c.intent.width());
    if k == 0 {
        return out;
    }
    let mut suffix: Vec<ObjSet> = vec![ctx.all_objects(); k + 1];
    for i in (0..k).rev() {
        let (head, tail) = suffix.split_at_mut(i + 1);
        head[i].copy_from(&tail[0]);
        head[i].intersect_with(ctx.column(members[i]));
    }
    let mut prefix = ctx.all_objects();
    let mut without = ctx.all_objects();
    for (i, &m) in members.iter().enumerate() {
        without.copy_from(&prefix);
        without.intersect_with(&suffix[i + 1]);
        if without != c.extent {
            out.insert(m);
        }
        prefix.intersect_with(ctx.column(m));
    }
    out
}

pub fn alpha_in(ctx: &FormalContext, c: &FormalConcept) -> f64 {
    let size = c.intent.count();
    if size == 0 {
        return 0.0;
    }
    relevant_attributes(ctx, c).count() as f64 / size as f64
}

/// `n_mingens / (2^intent_size - 2)` under the `> 1` guards, correctly
/// rounded for any intent size.
pub fn beta_ratio(n_mingens: usize, intent_size: usize) -> f64 {
    if n_mingens <= 1 || intent_size <= 1 {
        return 0.0;
    }
    if intent_size <= 53 {
        // numerator and denominator are exact in f64, so one rounding
        return n_mingens as f64 / ((1u64 << intent_size) - 2) as f64;
    }
    let den = (BigInt::one() << intent_size) - 2;
    BigRational::new(BigInt::from(n_mingens), den).to_f64().unwrap_or(0.0)
}

pub fn beta_in(c: &FormalConcept, gens: &MinGenSet) -> f64 {
    beta_ratio(gens.len(), c.intent.count())
}

/// Conceptual Relevance of `c` given its intentional faces.
pub fn conceptual_relevance(
    ctx: &FormalContext,
    c: &FormalConcept,
    faces: &FaceFamily,
    activation: Activation,
) -> RelevanceScore {
    let size = c.intent.count();
    let relevant = if size == 0 {
        0
    } else {
        relevant_attributes(ctx, c).count()
    };
    let alpha = if size == 0 { 0.0 } else { relevant as f64 / size as f64 };
    let gens = minimal_generators(c, faces);
    let beta = beta_ratio(gens.len(), size);
    RelevanceScore {
        alpha,
        beta,
        value: activation.apply(alpha, beta),
        activation,
        relevant,
        n_mingens: gens.len(),
    }
}

/// Face retrieval plus [`conceptual_relevance`] for concept `id`.
pub fn score_concept(
    ctx: &FormalContext,
    lat: &ConceptLattice,
    id: usize,
    activation: Activation,
) -> Result<RelevanceScore> {
    let faces = face_family(lat, id)?;
    Ok(conceptual_relevance(ctx, lat.concept(id)?, &faces, activation))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum StabilityMethod {
    #[default]
    BruteForce,
    LatticeDp,
}

impl StabilityMethod {
    pub fn name(self) -> &'static str {
        match self {
            StabilityMethod::BruteForce => "brute",
            StabilityMethod::LatticeDp => "dp",
        }
    }
}

/// Exact stability `count / 2^extent_size`, with its float rendering.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityScore {
    /// Extent subsets whose derivation equals the intent.
    pub count: BigUint,
    pub extent_size: usize,
    pub value: f64,
    pub method: StabilityMethod,
}

impl StabilityScore {
    fn new(count: BigUint, extent_size: usize, method: StabilityMethod) -> Self {
        let value = dyadic_to_f64(&count, extent_size);
        StabilityScore {
            count,
            extent_size,
            value,
            method,
        }
    }

    /// Rational equality, ignoring the method.
    pub fn same_ratio(&self, other: &StabilityScore) -> bool {
        self.count == other.count && self.extent_size == other.extent_size
    }
}

fn dyadic_to_f64(count: &BigUint, exp: usize) -> f64 {
    if exp <= 53 {
        if let Some(c) = count.to_u64() {
            if c <= 1 << 53 {
                return c as f64 / (1u64 << exp) as f64;
            }
        }
    }
    BigRational::new(BigInt::from(count.clone()), BigInt::one() << exp)
        .to_f64()
        .unwrap_or(0.0)
}

/// Stability by enumerating every subset of the extent.
pub fn stability_bruteforce(ctx: &FormalContext, c: &FormalConcept) -> Result<StabilityScore> {
    stability_bruteforce_capped(ctx, c, STABILITY_BRUTE_FORCE_MAX_EXTENT)
}

pub fn stability_bruteforce_capped(
    ctx: &FormalContext,
    c: &FormalConcept,
    max_extent: usize,
) -> Result<StabilityScore> {
    let rows: Vec<&AttrSet> = c.extent.iter().map(|g| ctx.row(g)).collect();
    let size = rows.len();
    if size > max_extent || size >= 64 {
        return Err(Error::OracleLimit {
            what: "extent",
            size,
            limit: max_extent.min(63),
        });
    }
    // levels[d] holds the derivation of the subset chosen among the first d
    // objects; the empty subset derives to the whole attribute set.
    let mut levels = vec![ctx.all_attributes(); size + 1];
    let count = count_subsets(&rows, 0, &mut levels, &c.intent);
    Ok(StabilityScore::new(
        BigUint::from(count),
        size,
        StabilityMethod::BruteForce,
    ))
}

fn count_subsets(rows: &[&AttrSet], depth: usize, levels: &mut [AttrSet], target: &AttrSet) -> u64 {
    if depth == rows.len() {
        return u64::from(levels[depth] == *target);
    }
    let (head, tail) = levels.split_at_mut(depth + 1);
    tail[0].copy_from(&head[depth]);
    let without = count_subsets(rows, depth + 1, levels, target);
    let (head, tail) = levels.split_at_mut(depth + 1);
    tail[0].copy_from(&head[depth]);
    tail[0].intersect_with(rows[depth]);
    without + count_subsets(rows, depth + 1, levels, target)
}

/// Exact stability of every concept, indexed by concept id.
///
/// Every subset of an extent closes to exactly one extent below or equal to
/// it, so `count(c) = 2^|A_c| - sum of count(d)` over concepts `d` strictly
/// below `c`. Concepts are processed by ascending extent size.
pub fn stability_lattice(lat: &ConceptLattice) -> Vec<StabilityScore> {
    let concepts = lat.concepts();
    let n = concepts.len();
    let sizes: Vec<usize> = concepts.iter().map(|c| c.extent.count()).collect();
    let mut counts: Vec<BigUint> = vec![BigUint::zero(); n];
    for id in (0..n).rev() {
        let extent = &concepts[id].extent;
        let mut count = BigUint::one() << sizes[id];
        for below in id + 1..n {
            if sizes[below] < sizes[id] && concepts[below].extent.is_subset(extent) {
                count -= &counts[below];
            }
        }
        counts[id] = count;
    }
    counts
        .into_iter()
        .zip(sizes)
        .map(|(count, size)| StabilityScore::new(count, size, StabilityMethod::LatticeDp))
        .collect()
}
