//! Concept enumeration and the cover relation of the concept lattice.
//!
//! Concepts are enumerated with Close-by-One over the attribute universe and
//! then sorted into canonical order: descending extent size, ties broken by
//! the extent bit pattern ascending (see [`BitSet`](crate::bitset::BitSet)
//! ordering). Ids are positions in that order, so the top concept is always
//! id 0 and the bottom concept is always the last id.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::bitset::{AttrSet, ObjSet};
use crate::context::FormalContext;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_CONCEPTS: usize = 5_000_000;
/// Above this many concepts, [`CoverStrategy::Auto`] switches from the
/// pairwise reduction to upper-neighbour search.
pub const PAIRWISE_COVER_LIMIT: usize = 10_000;
/// Largest attribute count accepted by [`brute_force_concepts`].
pub const BRUTE_FORCE_MAX_ATTRS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalConcept {
    pub id: usize,
    pub extent: ObjSet,
    pub intent: AttrSet,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CoverStrategy {
    #[default]
    Auto,
    /// Full order by pairwise extent inclusion, then reduce.
    Pairwise,
    /// Upper-neighbour search per concept (Lindig).
    Neighbors,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeOptions {
    pub max_concepts: usize,
    pub covers: CoverStrategy,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        LatticeOptions {
            max_concepts: DEFAULT_MAX_CONCEPTS,
            covers: CoverStrategy::Auto,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConceptLattice {
    concepts: Vec<FormalConcept>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    by_intent: BTreeMap<AttrSet, usize>,
    attributes: Vec<String>,
    n_objects: usize,
}

impl ConceptLattice {
    pub fn build(ctx: &FormalContext) -> Result<Self> {
        Self::build_with(ctx, &LatticeOptions::default())
    }

    pub fn build_with(ctx: &FormalContext, opts: &LatticeOptions) -> Result<Self> {
        let mut found = Vec::new();
        let top_extent = ctx.all_objects();
        let top_intent = ctx.intent_of(&top_extent);
        push_capped(&mut found, (top_extent.clone(), top_intent.clone()), opts.max_concepts)?;
        close_by_one(ctx, &top_extent, &top_intent, 0, &mut found, opts.max_concepts)?;
        sort_canonical(&mut found);

        let concepts: Vec<FormalConcept> = found
            .into_iter()
            .enumerate()
            .map(|(id, (extent, intent))| FormalConcept { id, extent, intent })
            .collect();
        let strategy = match opts.covers {
            CoverStrategy::Auto if concepts.len() <= PAIRWISE_COVER_LIMIT => CoverStrategy::Pairwise,
            CoverStrategy::Auto => CoverStrategy::Neighbors,
            s => s,
        };
        let upper = match strategy {
            CoverStrategy::Neighbors => neighbor_covers(ctx, &concepts),
            _ => pairwise_covers(&concepts),
        };
        let mut lower = alloc::vec![Vec::new(); concepts.len()];
        for (c, ups) in upper.iter().enumerate() {
            for &u in ups {
                lower[u].push(c);
            }
        }
        let by_intent = concepts.iter().map(|c| (c.intent.clone(), c.id)).collect();
        Ok(ConceptLattice {
            concepts,
            upper,
            lower,
            by_intent,
            attributes: ctx.attributes().to_vec(),
            n_objects: ctx.n_objects(),
        })
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    /// Never true for a built lattice: even the empty context has one concept.
    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concepts(&self) -> &[FormalConcept] {
        &self.concepts
    }

    pub fn concept(&self, id: usize) -> Result<&FormalConcept> {
        self.concepts.get(id).ok_or(Error::UnknownConcept(id))
    }

    pub fn top(&self) -> usize {
        0
    }

    pub fn bottom(&self) -> usize {
        self.concepts.len() - 1
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    /// Immediate successors of `id` (larger extents), ascending by id.
    pub fn upper_covers(&self, id: usize) -> Result<&[usize]> {
        self.upper.get(id).map(Vec::as_slice).ok_or(Error::UnknownConcept(id))
    }

    /// Immediate predecessors of `id` (smaller extents), ascending by id.
    pub fn lower_covers(&self, id: usize) -> Result<&[usize]> {
        self.lower.get(id).map(Vec::as_slice).ok_or(Error::UnknownConcept(id))
    }

    pub fn find_intent(&self, intent: &AttrSet) -> Option<usize> {
        self.by_intent.get(intent).copied()
    }

    /// `a ⪯ b` in the lattice order.
    pub fn leq(&self, a: usize, b: usize) -> Result<bool> {
        Ok(self.concept(a)?.extent.is_subset(&self.concept(b)?.extent))
    }

    /// Intentional face `B \ B_u` of concept `id` with respect to its upper
    /// cover `upper`.
    pub fn intentional_face(&self, id: usize, upper: usize) -> Result<AttrSet> {
        let c = self.concept(id)?;
        let u = self.concept(upper)?;
        if !self.upper[id].contains(&upper) {
            return Err(Error::NotUpperCover { concept: id, upper });
        }
        Ok(c.intent.difference(&u.intent))
    }
}

fn push_capped(out: &mut Vec<(ObjSet, AttrSet)>, concept: (ObjSet, AttrSet), limit: usize) -> Result<()> {
    if out.len() >= limit {
        return Err(Error::TooManyConcepts { limit });
    }
    out.push(concept);
    Ok(())
}

// Kuznetsov's Close-by-One: extend by each attribute j >= start not yet in
// the intent, keep the closure only if it adds no attribute below j.
fn close_by_one(
    ctx: &FormalContext,
    extent: &ObjSet,
    intent: &AttrSet,
    start: usize,
    out: &mut Vec<(ObjSet, AttrSet)>,
    limit: usize,
) -> Result<()> {
    for j in start..ctx.n_attributes() {
        if intent.contains(j) {
            continue;
        }
        let next_extent = extent.intersection(ctx.column(j));
        let next_intent = ctx.intent_of(&next_extent);
        if next_intent.agrees_below(intent, j) {
            push_capped(out, (next_extent.clone(), next_intent.clone()), limit)?;
            close_by_one(ctx, &next_extent, &next_intent, j + 1, out, limit)?;
        }
    }
    Ok(())
}

fn sort_canonical(concepts: &mut [(ObjSet, AttrSet)]) {
    concepts.sort_by(|a, b| (Reverse(a.0.count()), &a.0).cmp(&(Reverse(b.0.count()), &b.0)));
}

fn pairwise_covers(concepts: &[FormalConcept]) -> Vec<Vec<usize>> {
    let sizes: Vec<usize> = concepts.iter().map(|c| c.extent.count()).collect();
    concepts
        .iter()
        .map(|c| {
            let mut covers: Vec<usize> = Vec::new();
            // Candidates in ascending extent size: every concept strictly
            // between c and a candidate is visited before that candidate.
            for j in (0..c.id).rev() {
                if sizes[j] == sizes[c.id] || !c.extent.is_subset(&concepts[j].extent) {
                    continue;
                }
                let ext = &concepts[j].extent;
                if covers.iter().all(|&k| !concepts[k].extent.is_subset(ext)) {
                    covers.push(j);
                }
            }
            covers.sort_unstable();
            covers
        })
        .collect()
}

fn neighbor_covers(ctx: &FormalContext, concepts: &[FormalConcept]) -> Vec<Vec<usize>> {
    let by_extent: BTreeMap<&ObjSet, usize> = concepts.iter().map(|c| (&c.extent, c.id)).collect();
    concepts
        .iter()
        .map(|c| {
            let outside = c.extent.complement();
            let mut min = outside.clone();
            let mut covers = Vec::new();
            for g in &outside {
                let intent = c.intent.intersection(ctx.row(g));
                let extent = ctx.extent_of(&intent);
                let mut grown = extent.difference(&c.extent);
                grown.remove(g);
                if min.intersects(&grown) {
                    min.remove(g);
                } else {
                    covers.push(by_extent[&extent]);
                }
            }
            covers.sort_unstable();
            covers
        })
        .collect()
}

/// Every concept of `ctx` obtained by closing all `2^|M|` attribute subsets,
/// in canonical order. Test oracle for [`ConceptLattice::build`].
pub fn brute_force_concepts(ctx: &FormalContext) -> Result<Vec<(ObjSet, AttrSet)>> {
    let n = ctx.n_attributes();
    if n > BRUTE_FORCE_MAX_ATTRS {
        return Err(Error::OracleLimit {
            what: "attribute set",
            size: n,
            limit: BRUTE_FORCE_MAX_ATTRS,
        });
    }
    let mut seen = BTreeSet::new();
    for mask in 0u32..(1u32 << n) {
        let attrs = AttrSet::from_indices(n, (0..n).filter(|&m| mask & (1 << m) != 0));
        let extent = ctx.extent_of(&attrs);
        let intent = ctx.intent_of(&extent);
        seen.insert((extent, intent));
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    sort_canonical(&mut out);
    Ok(out)
}
