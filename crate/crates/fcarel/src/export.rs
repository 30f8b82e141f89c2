//! Lattice JSON and per-concept score CSV.

use rayon::prelude::*;
use serde::Serialize;

use fcarel_core::relevance::{stability_bruteforce_capped, STABILITY_BRUTE_FORCE_MAX_EXTENT};
use fcarel_core::{score_concept, stability_lattice, Activation, AttrSet, ConceptLattice, FormalContext, ObjSet};
use fcarel_core::{RelevanceScore, StabilityMethod, StabilityScore};

#[derive(Debug, Serialize)]
struct ConceptRecord<'a> {
    id: usize,
    extent: Vec<&'a str>,
    intent: Vec<&'a str>,
    upper: &'a [usize],
}

pub fn object_names<'a>(ctx: &'a FormalContext, set: &ObjSet) -> Vec<&'a str> {
    set.iter().map(|g| ctx.objects()[g].as_str()).collect()
}

pub fn attribute_names<'a>(ctx: &'a FormalContext, set: &AttrSet) -> Vec<&'a str> {
    set.iter().map(|m| ctx.attributes()[m].as_str()).collect()
}

/// JSON array of `{id, extent, intent, upper}` in canonical order.
pub fn lattice_json(ctx: &FormalContext, lat: &ConceptLattice) -> String {
    let records: Vec<ConceptRecord<'_>> = lat
        .concepts()
        .iter()
        .map(|c| ConceptRecord {
            id: c.id,
            extent: object_names(ctx, &c.extent),
            intent: attribute_names(ctx, &c.intent),
            upper: lat.upper_covers(c.id).expect("id from the lattice"),
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("plain data serializes")
}

/// Formats a score with 12 significant digits, trailing zeros removed.
pub fn fmt_score(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_nan() {
            "undefined".into()
        } else {
            format!("{}", x)
        };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Which columns of the score CSV to fill.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScoreSelection {
    pub relevance: bool,
    pub stability: bool,
}

#[derive(Clone, Debug)]
pub struct ScoreOptions {
    pub activation: Activation,
    pub stability_method: StabilityMethod,
    pub max_stability_extent: usize,
    pub select: ScoreSelection,
}

impl Default for ScoreOptions {
    fn default() -> Self {
        ScoreOptions {
            activation: Activation::Arithmetic,
            stability_method: StabilityMethod::BruteForce,
            max_stability_extent: STABILITY_BRUTE_FORCE_MAX_EXTENT,
            select: ScoreSelection {
                relevance: true,
                stability: true,
            },
        }
    }
}

pub struct ConceptScores {
    pub relevance: Option<RelevanceScore>,
    /// `None` inside the vector when brute force exceeded its cap.
    pub stability: Option<Option<StabilityScore>>,
}

/// Scores every concept, in id order. Per-concept work runs on the rayon
/// pool; the output order does not depend on it.
pub fn score_lattice(ctx: &FormalContext, lat: &ConceptLattice, opts: &ScoreOptions) -> Vec<ConceptScores> {
    let dp =
        (opts.select.stability && opts.stability_method == StabilityMethod::LatticeDp).then(|| stability_lattice(lat));
    (0..lat.len())
        .into_par_iter()
        .map(|id| {
            let relevance = opts
                .select
                .relevance
                .then(|| score_concept(ctx, lat, id, opts.activation).expect("id from the lattice"));
            let stability = opts.select.stability.then(|| match &dp {
                Some(all) => Some(all[id].clone()),
                None => {
                    let c = lat.concept(id).expect("id from the lattice");
                    stability_bruteforce_capped(ctx, c, opts.max_stability_extent).ok()
                }
            });
            ConceptScores { relevance, stability }
        })
        .collect()
}

/// `concept_id,extent_size,intent_size,alpha,beta,cr,stability,n_mingens`;
/// unselected columns are empty, stability over the brute-force cap is
/// `undefined`.
pub fn score_csv(lat: &ConceptLattice, scores: &[ConceptScores]) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer
        .write_record([
            "concept_id",
            "extent_size",
            "intent_size",
            "alpha",
            "beta",
            "cr",
            "stability",
            "n_mingens",
        ])
        .expect("in-memory write");
    for (c, s) in lat.concepts().iter().zip(scores) {
        let (alpha, beta, cr, n) = match &s.relevance {
            Some(r) => (
                fmt_score(r.alpha),
                fmt_score(r.beta),
                fmt_score(r.value),
                r.n_mingens.to_string(),
            ),
            None => Default::default(),
        };
        let stability = match &s.stability {
            Some(Some(st)) => fmt_score(st.value),
            Some(None) => "undefined".into(),
            None => String::new(),
        };
        writer
            .write_record([
                c.id.to_string(),
                c.extent.count().to_string(),
                c.intent.count().to_string(),
                alpha,
                beta,
                cr,
                stability,
                n,
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ascii output")
}
