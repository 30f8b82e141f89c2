//! Minimal generators of concept intents.
//!
//! A subset `h` of an intent `B` generates `B` exactly when it is not
//! contained in the intent of any upper cover, i.e. when it meets every
//! intentional face. The minimal generators are therefore the minimal
//! transversals of the face family, which is how [`minimal_generators`]
//! computes them without touching the context.

use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::AttrSet;
use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::lattice::{ConceptLattice, FormalConcept};

/// Largest intent accepted by [`brute_force_mingen`].
pub const BRUTE_FORCE_MAX_INTENT: usize = 18;

/// Intentional faces of one concept, one per upper cover in id order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceFamily {
    pub faces: Vec<AttrSet>,
}

/// Minimal generators in canonical order: ascending cardinality, then bit
/// pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinGenSet {
    pub gens: Vec<AttrSet>,
}

impl MinGenSet {
    fn canonical(mut gens: Vec<AttrSet>) -> Self {
        gens.sort_by(|a, b| (a.count(), a).cmp(&(b.count(), b)));
        gens.dedup();
        MinGenSet { gens }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Attributes common to every minimal generator.
    pub fn core(&self, width: usize) -> AttrSet {
        self.gens.iter().fold(AttrSet::full(width), |mut acc, h| {
            acc.intersect_with(h);
            acc
        })
    }
}

pub fn face_family(lat: &ConceptLattice, id: usize) -> Result<FaceFamily> {
    let faces = lat
        .upper_covers(id)?
        .iter()
        .map(|&u| lat.intentional_face(id, u))
        .collect::<Result<_>>()?;
    Ok(FaceFamily { faces })
}

/// Minimal transversals of `faces`, built face by face (Berge).
///
/// Each partial transversal that misses the next face is extended by every
/// attribute of that face; non-minimal candidates are filtered out after each
/// step. An empty family yields the single empty generator.
pub fn minimal_generators(concept: &FormalConcept, faces: &FaceFamily) -> MinGenSet {
    let width = concept.intent.width();
    let mut order: Vec<&AttrSet> = faces.faces.iter().collect();
    // Small faces first keep the intermediate families small.
    order.sort_by_key(|f| f.count());

    let mut partial = vec![AttrSet::empty(width)];
    for face in order {
        debug_assert!(face.is_subset(&concept.intent));
        let mut hit = Vec::with_capacity(partial.len());
        let mut missed = Vec::new();
        for t in partial {
            if t.intersects(face) {
                hit.push(t);
            } else {
                missed.push(t);
            }
        }
        let mut extended = Vec::new();
        for t in &missed {
            for m in face {
                let mut cand = t.clone();
                cand.insert(m);
                // A superset of an already-hitting transversal is not minimal.
                if !hit.iter().any(|h| h.is_subset(&cand)) {
                    extended.push(cand);
                }
            }
        }
        extended.sort_by(|a, b| (a.count(), a).cmp(&(b.count(), b)));
        extended.dedup();
        let mut kept: Vec<AttrSet> = Vec::with_capacity(extended.len());
        for cand in extended {
            if !kept.iter().any(|k| k.is_subset(&cand)) {
                kept.push(cand);
            }
        }
        hit.extend(kept);
        partial = hit;
    }
    MinGenSet::canonical(partial)
}

/// `h'' == intent`, for `h` inside `intent`.
pub fn is_generator(ctx: &FormalContext, h: &AttrSet, intent: &AttrSet) -> Result<bool> {
    if !h.is_subset(intent) {
        return Err(Error::NotSubsetOfIntent);
    }
    Ok(&ctx.closure(h) == intent)
}

/// Minimal generators by definition: every subset of the intent in order of
/// size, keeping generators with no kept subset. Test oracle for
/// [`minimal_generators`].
pub fn brute_force_mingen(ctx: &FormalContext, concept: &FormalConcept) -> Result<MinGenSet> {
    let members = concept.intent.to_vec();
    let k = members.len();
    if k > BRUTE_FORCE_MAX_INTENT {
        return Err(Error::OracleLimit {
            what: "intent",
            size: k,
            limit: BRUTE_FORCE_MAX_INTENT,
        });
    }
    let width = concept.intent.width();
    let mut masks: Vec<u32> = (0..(1u32 << k)).collect();
    masks.sort_by_key(|m| m.count_ones());
    let mut kept: Vec<AttrSet> = Vec::new();
    for mask in masks {
        let h = AttrSet::from_indices(width, (0..k).filter(|i| mask & (1 << i) != 0).map(|i| members[i]));
        if kept.iter().any(|g| g.is_subset(&h)) {
            continue;
        }
        if is_generator(ctx, &h, &concept.intent)? {
            kept.push(h);
        }
    }
    Ok(MinGenSet::canonical(kept))
}
