//! Reference/test evaluation run: split, build both lattices, match shared
//! intents, score and time each side, correlate.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use fcarel_core::eval::{avg_elapsed_time, pearson, shared_concepts, split_context_with, SplitOrder, SplitPair};
use fcarel_core::relevance::{stability_bruteforce_capped, STABILITY_BRUTE_FORCE_MAX_EXTENT};
use fcarel_core::{
    score_concept, stability_lattice, Activation, ConceptLattice, Error, LatticeOptions, StabilityMethod,
};

use crate::export::{attribute_names, fmt_score};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IndexKind {
    #[default]
    Cr,
    Stability,
}

impl IndexKind {
    pub fn name(self) -> &'static str {
        match self {
            IndexKind::Cr => "cr",
            IndexKind::Stability => "stability",
        }
    }
}

impl FromStr for IndexKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cr" => Ok(IndexKind::Cr),
            "stability" => Ok(IndexKind::Stability),
            _ => Err(format!("unknown index {s:?}")),
        }
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub ratio: f64,
    pub seed: u64,
    pub index: IndexKind,
    pub activation: Activation,
    pub stability_method: StabilityMethod,
    pub max_stability_extent: usize,
    pub split_order: SplitOrder,
    pub lattice: LatticeOptions,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            ratio: fcarel_core::eval::DEFAULT_SPLIT_RATIO,
            seed: 42,
            index: IndexKind::Cr,
            activation: Activation::Arithmetic,
            stability_method: StabilityMethod::BruteForce,
            max_stability_extent: STABILITY_BRUTE_FORCE_MAX_EXTENT,
            split_order: SplitOrder::Shuffled,
            lattice: LatticeOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Reference,
    Test,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Reference => "reference",
            Side::Test => "test",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScoreRow {
    pub intent: Vec<String>,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimingRow {
    pub side: Side,
    pub concept_id: usize,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct EvalReport {
    pub index: IndexKind,
    /// Activation name for CR, stability method name otherwise.
    pub activation: String,
    pub n: usize,
    /// `None` when undefined (fewer than two pairs or a constant list).
    pub xi: Option<f64>,
    /// `None` when nothing was timed.
    pub tau: Option<f64>,
    pub score_rows: Vec<ScoreRow>,
    pub timing_rows: Vec<TimingRow>,
    /// Shared concepts removed because an extent exceeded the brute-force
    /// stability cap on either side.
    pub dropped: usize,
    pub reference_concepts: usize,
    pub test_concepts: usize,
}

pub fn run_experiment(ctx: &fcarel_core::FormalContext, config: &ExperimentConfig) -> Result<EvalReport, Error> {
    let pair = split_context_with(ctx, config.ratio, config.seed, config.split_order)?;
    run_on_split(&pair, config)
}

/// Runs the protocol on an existing split; `ratio`, `seed` and
/// `split_order` of the config are ignored.
pub fn run_on_split(pair: &SplitPair, config: &ExperimentConfig) -> Result<EvalReport, Error> {
    let ref_lat = ConceptLattice::build_with(&pair.reference, &config.lattice)?;
    let test_lat = ConceptLattice::build_with(&pair.test, &config.lattice)?;
    let shared = shared_concepts(&ref_lat, &test_lat)?;

    let mut pairs = shared.pairs;
    let mut dropped = 0;
    if config.index == IndexKind::Stability && config.stability_method == StabilityMethod::BruteForce {
        let cap = config.max_stability_extent;
        let before = pairs.len();
        pairs.retain(|&(r, t)| {
            ref_lat.concepts()[r].extent.count() <= cap && test_lat.concepts()[t].extent.count() <= cap
        });
        dropped = before - pairs.len();
    }

    let ref_ids: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let test_ids: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    let (xs, ref_times) = score_side(&pair.reference, &ref_lat, &ref_ids, config)?;
    let (ys, test_times) = score_side(&pair.test, &test_lat, &test_ids, config)?;

    let score_rows: Vec<ScoreRow> = pairs
        .iter()
        .zip(xs.iter().zip(&ys))
        .map(|(&(r, _), (&x, &y))| ScoreRow {
            intent: attribute_names(&pair.reference, &ref_lat.concepts()[r].intent)
                .into_iter()
                .map(String::from)
                .collect(),
            x,
            y,
        })
        .collect();
    let xy: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
    let xi = if xy.len() < 2 { None } else { pearson(&xy)? };
    let tau = if pairs.is_empty() {
        None
    } else {
        Some(avg_elapsed_time(&ref_times, &test_times)?)
    };
    let timing_rows = timing_rows(Side::Reference, &ref_ids, &ref_times)
        .chain(timing_rows(Side::Test, &test_ids, &test_times))
        .collect();

    Ok(EvalReport {
        index: config.index,
        activation: match config.index {
            IndexKind::Cr => config.activation.name().to_string(),
            IndexKind::Stability => config.stability_method.name().to_string(),
        },
        n: pairs.len(),
        xi,
        tau,
        score_rows,
        timing_rows,
        dropped,
        reference_concepts: ref_lat.len(),
        test_concepts: test_lat.len(),
    })
}

fn timing_rows<'a>(side: Side, ids: &'a [usize], secs: &'a [f64]) -> impl Iterator<Item = TimingRow> + 'a {
    ids.iter().zip(secs).map(move |(&concept_id, &seconds)| TimingRow {
        side,
        concept_id,
        seconds,
    })
}

/// Scores `ids` sequentially, timing each call on its own. The lattice-wide
/// stability pass is timed once and spread evenly over all concepts.
fn score_side(
    ctx: &fcarel_core::FormalContext,
    lat: &ConceptLattice,
    ids: &[usize],
    config: &ExperimentConfig,
) -> Result<(Vec<f64>, Vec<f64>), Error> {
    let mut scores = Vec::with_capacity(ids.len());
    let mut times = Vec::with_capacity(ids.len());
    match (config.index, config.stability_method) {
        (IndexKind::Cr, _) => {
            for &id in ids {
                let start = Instant::now();
                let s = score_concept(ctx, lat, id, config.activation)?;
                times.push(start.elapsed().as_secs_f64());
                scores.push(s.value);
            }
        }
        (IndexKind::Stability, StabilityMethod::BruteForce) => {
            for &id in ids {
                let c = lat.concept(id)?;
                let start = Instant::now();
                let s = stability_bruteforce_capped(ctx, c, config.max_stability_extent)?;
                times.push(start.elapsed().as_secs_f64());
                scores.push(s.value);
            }
        }
        (IndexKind::Stability, StabilityMethod::LatticeDp) => {
            let start = Instant::now();
            let all = stability_lattice(lat);
            let per = start.elapsed().as_secs_f64() / lat.len() as f64;
            for &id in ids {
                scores.push(all[id].value);
                times.push(per);
            }
        }
    }
    Ok((scores, times))
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

fn opt_score(x: Option<f64>) -> String {
    x.map_or_else(|| "undefined".to_string(), fmt_score)
}

impl EvalReport {
    /// `intent,x,y`, intent names joined with `;`.
    pub fn scores_csv(&self) -> String {
        let mut w = csv_writer();
        w.write_record(["intent", "x", "y"]).expect("in-memory write");
        for row in &self.score_rows {
            w.write_record([row.intent.join(";"), fmt_score(row.x), fmt_score(row.y)])
                .expect("in-memory write");
        }
        finish(w)
    }

    /// `index,activation,n,xi,tau_seconds`.
    pub fn summary_csv(&self) -> String {
        let mut w = csv_writer();
        w.write_record(["index", "activation", "n", "xi", "tau_seconds"])
            .expect("in-memory write");
        w.write_record([
            self.index.name().to_string(),
            self.activation.clone(),
            self.n.to_string(),
            opt_score(self.xi),
            opt_score(self.tau),
        ])
        .expect("in-memory write");
        finish(w)
    }

    /// `side,concept_id,seconds`.
    pub fn timings_csv(&self) -> String {
        let mut w = csv_writer();
        w.write_record(["side", "concept_id", "seconds"])
            .expect("in-memory write");
        for t in &self.timing_rows {
            w.write_record([
                t.side.name().to_string(),
                t.concept_id.to_string(),
                fmt_score(t.seconds),
            ])
            .expect("in-memory write");
        }
        finish(w)
    }

    /// `index n xi tau` summary line.
    pub fn summary_line(&self) -> String {
        format!(
            "{} {} {} {}",
            self.index,
            self.n,
            opt_score(self.xi),
            opt_score(self.tau)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fcarel_core::eval::split_by_objects;
    use fcarel_core::relevance::stability_bruteforce;
    use fcarel_core::FormalContext;

    fn doubled(ctx: &FormalContext) -> FormalContext {
        let n = ctx.n_objects();
        FormalContext::from_fn(2 * n, ctx.n_attributes(), |g, m| ctx.incident(g % n, m))
    }

    #[test]
    fn duplicated_objects_correlate_perfectly() {
        let base = FormalContext::coin_toss(12, 6, 0.4, 3).unwrap();
        let pair = split_by_objects(&doubled(&base), &(0..12).collect::<Vec<_>>()).unwrap();
        for index in [IndexKind::Cr, IndexKind::Stability] {
            let config = ExperimentConfig {
                index,
                ..Default::default()
            };
            let report = run_on_split(&pair, &config).unwrap();
            assert_eq!(report.n, report.reference_concepts);
            assert!(report.score_rows.iter().all(|r| r.x == r.y));
            assert!((report.xi.unwrap() - 1.0).abs() < 1e-9);
            assert_eq!(report.timing_rows.len(), 2 * report.n);
        }
    }

    #[test]
    fn harness_adds_no_arithmetic() {
        let ctx = FormalContext::coin_toss(20, 5, 0.5, 9).unwrap();
        let config = ExperimentConfig {
            seed: 4,
            ..Default::default()
        };
        let report = run_experiment(&ctx, &config).unwrap();
        let pair = split_context_with(&ctx, 0.5, 4, SplitOrder::Shuffled).unwrap();
        let lat = ConceptLattice::build(&pair.reference).unwrap();
        for (row, t) in report.score_rows.iter().zip(&report.timing_rows) {
            let expected = score_concept(&pair.reference, &lat, t.concept_id, Activation::Arithmetic).unwrap();
            assert_eq!(row.x, expected.value);
        }

        let stab = run_experiment(
            &ctx,
            &ExperimentConfig {
                seed: 4,
                index: IndexKind::Stability,
                ..Default::default()
            },
        )
        .unwrap();
        for (row, t) in stab.score_rows.iter().zip(&stab.timing_rows) {
            assert_eq!(
                row.x,
                stability_bruteforce(&pair.reference, lat.concept(t.concept_id).unwrap())
                    .unwrap()
                    .value
            );
        }
    }

    #[test]
    fn oversized_extents_are_dropped() {
        let ctx = FormalContext::from_fn(20, 2, |g, m| g % 2 == 0 || m == 0);
        let config = ExperimentConfig {
            index: IndexKind::Stability,
            max_stability_extent: 5,
            ..Default::default()
        };
        let report = run_experiment(&ctx, &config).unwrap();
        assert!(report.dropped > 0);
        assert_eq!(report.n + report.dropped, {
            let pair = split_context_with(&ctx, 0.5, 42, SplitOrder::Shuffled).unwrap();
            shared_concepts(
                &ConceptLattice::build(&pair.reference).unwrap(),
                &ConceptLattice::build(&pair.test).unwrap(),
            )
            .unwrap()
            .len()
        });

        let dp = run_experiment(
            &ctx,
            &ExperimentConfig {
                stability_method: StabilityMethod::LatticeDp,
                ..config
            },
        )
        .unwrap();
        assert_eq!(dp.dropped, 0);
    }

    #[test]
    fn report_csvs() {
        let report = EvalReport {
            index: IndexKind::Cr,
            activation: "arithmetic".into(),
            n: 1,
            xi: None,
            tau: Some(0.5),
            score_rows: vec![ScoreRow {
                intent: vec!["a".into(), "b c".into()],
                x: 0.25,
                y: 1.0 / 3.0,
            }],
            timing_rows: vec![TimingRow {
                side: Side::Test,
                concept_id: 3,
                seconds: 0.5,
            }],
            dropped: 0,
            reference_concepts: 2,
            test_concepts: 2,
        };
        assert_eq!(report.scores_csv(), "intent,x,y\na;b c,0.25,0.333333333333\n");
        assert_eq!(
            report.summary_csv(),
            "index,activation,n,xi,tau_seconds\ncr,arithmetic,1,undefined,0.5\n"
        );
        assert_eq!(report.timings_csv(), "side,concept_id,seconds\ntest,3,0.5\n");
        assert_eq!(report.summary_line(), "cr 1 undefined 0.5");
    }
}
