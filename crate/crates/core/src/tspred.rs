//! Active-track count series per day and 1-NN day classification under
//! banded DTW, with LB_Keogh pruning that provably never changes the result.

use std::collections::BTreeSet;

use chrono::NaiveDate;

use crate::day::{DayRecord, Dataset};
use crate::dtw::{dtw_distance, lb_keogh};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// How many distinct tracks were active in each theta-second interval of
/// one day. Always exactly duration·60/θ values long.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSeries {
    pub date: NaiveDate,
    pub theta: u32,
    pub counts: Vec<u32>,
    pub label: Option<bool>,
}

impl CountSeries {
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn values<S: Real>(&self) -> Vec<S> {
        self.counts
            .iter()
            .map(|&c| S::from_config(f64::from(c)))
            .collect()
    }
}

/// Count distinct active tracks per interval: a track is active in interval s
/// when it has at least one point with frame in [θ·s·fps, θ·(s+1)·fps).
/// A track spanning several intervals counts once in each. Points whose
/// frames lie beyond the nominal day length are ignored.
pub fn count_series<S: Real>(
    day: &DayRecord<S>,
    theta: u32,
    frame_rate: f64,
    duration_minutes: u32,
) -> Result<CountSeries> {
    if theta == 0 {
        return Err(Error::Config("theta must be positive".into()));
    }
    let total_seconds = duration_minutes * 60;
    if !total_seconds.is_multiple_of(theta) {
        return Err(Error::Config(format!(
            "theta {theta}s does not divide the {duration_minutes}-minute day"
        )));
    }
    if !(frame_rate.is_finite() && frame_rate > 0.0) {
        return Err(Error::Config("frame_rate must be positive".into()));
    }
    let num_intervals = (total_seconds / theta) as usize;
    let frames_per_interval = f64::from(theta) * frame_rate;

    let mut active: BTreeSet<(usize, &str)> = BTreeSet::new();
    for track in &day.tracks {
        for p in track.points() {
            let s = (f64::from(p.frame) / frames_per_interval).floor() as usize;
            if s < num_intervals {
                active.insert((s, track.id()));
            }
        }
    }
    let mut counts = vec![0u32; num_intervals];
    for (s, _) in active {
        counts[s] += 1;
    }
    Ok(CountSeries {
        date: day.date,
        theta,
        counts,
        label: day.label,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NNConfig {
    pub k: usize,
    /// Sakoe-Chiba radius shared by DTW and the pruning bound.
    pub band_radius: usize,
    /// Skip candidates whose lower bound already exceeds the kth-best
    /// distance. Disabling this must never change any result.
    pub prune: bool,
}

impl Default for NNConfig {
    fn default() -> Self {
        NNConfig {
            k: 1,
            band_radius: 2,
            prune: true,
        }
    }
}

impl NNConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        Ok(())
    }
}

/// One retained neighbor, for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborHit<S> {
    pub index: usize,
    pub date: NaiveDate,
    pub label: bool,
    pub distance: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NNPrediction<S> {
    pub predicted: bool,
    /// The k nearest training series, closest first. Distance ties keep the
    /// earliest-scanned index.
    pub neighbors: Vec<NeighborHit<S>>,
    /// Candidates skipped on the lower bound alone.
    pub pruned: usize,
}

/// k-NN with banded DTW, scanning training in order and pruning candidates
/// whose LB_Keogh bound cannot beat the current kth-best distance. The
/// prediction is the strict majority of the neighbor labels (a tie counts as
/// normal); k=1 is the nearest neighbor's label.
pub fn knn_predict<S: Real>(
    test: &CountSeries,
    training: &[CountSeries],
    config: &NNConfig,
) -> Result<NNPrediction<S>> {
    config.validate()?;
    if training.is_empty() {
        return Err(Error::InvalidInput("training set is empty".into()));
    }
    for t in training {
        if t.label.is_none() {
            return Err(Error::InvalidInput(format!(
                "training series {} has no label",
                t.date
            )));
        }
        if t.len() != test.len() {
            return Err(Error::InvalidInput(format!(
                "training series {} length {} does not match test length {}",
                t.date,
                t.len(),
                test.len()
            )));
        }
    }

    let query: Vec<S> = test.values();
    let mut best: Vec<NeighborHit<S>> = Vec::with_capacity(config.k);
    let mut pruned = 0usize;
    for (index, cand) in training.iter().enumerate() {
        let values: Vec<S> = cand.values();
        if config.prune && best.len() == config.k {
            let kth = best.last().unwrap().distance;
            if lb_keogh(&query, &values, config.band_radius)? >= kth {
                pruned += 1;
                continue;
            }
        }
        let distance = dtw_distance(&query, &values, config.band_radius)?;
        let hit = NeighborHit {
            index,
            date: cand.date,
            label: cand.label.unwrap(),
            distance,
        };
        if best.len() < config.k {
            best.push(hit);
            best.sort_by(|a, b| {
                a.distance
                    .partial_cmp(&b.distance)
                    .unwrap()
                    .then(a.index.cmp(&b.index))
            });
        } else if distance < best.last().unwrap().distance {
            *best.last_mut().unwrap() = hit;
            best.sort_by(|a, b| {
                a.distance
                    .partial_cmp(&b.distance)
                    .unwrap()
                    .then(a.index.cmp(&b.index))
            });
        }
    }

    let positives = best.iter().filter(|h| h.label).count();
    Ok(NNPrediction {
        predicted: positives * 2 > best.len(),
        neighbors: best,
        pruned,
    })
}

/// Chronological 50:50 split: the first ⌈n/2⌉ series train, the rest test.
pub fn split_half(series: &[CountSeries]) -> Result<(&[CountSeries], &[CountSeries])> {
    if series.len() < 2 {
        return Err(Error::InvalidInput(
            "need at least two series to split".into(),
        ));
    }
    let cut = series.len().div_ceil(2);
    Ok(series.split_at(cut))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeseriesParams {
    pub theta_seconds: u32,
    pub nn: NNConfig,
}

impl Default for TimeseriesParams {
    fn default() -> Self {
        TimeseriesParams {
            theta_seconds: 15,
            nn: NNConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TsPrediction<S> {
    pub date: NaiveDate,
    pub predicted: bool,
    pub label: Option<bool>,
    pub nn_date: NaiveDate,
    pub nn_distance: S,
}

/// Count-series pipeline: build one series per day, split 50:50 by date,
/// classify each test day by its labeled nearest neighbors.
pub fn run_timeseries_pipeline<S: Real>(
    dataset: &Dataset<S>,
    params: &TimeseriesParams,
) -> Result<Vec<TsPrediction<S>>> {
    let series: Vec<CountSeries> = dataset
        .days()
        .iter()
        .map(|day| {
            count_series(
                day,
                params.theta_seconds,
                dataset.scene.frame_rate,
                dataset.scene.duration_minutes,
            )
        })
        .collect::<Result<_>>()?;
    let (train, test) = split_half(&series)?;
    test.iter()
        .map(|t| {
            let nn = knn_predict::<S>(t, train, &params.nn)?;
            let nearest = &nn.neighbors[0];
            Ok(TsPrediction {
                date: t.date,
                predicted: nn.predicted,
                label: t.label,
                nn_date: nearest.date,
                nn_distance: nearest.distance,
            })
        })
        .collect()
}

/// Count series as CSV: header `date,c_0,…`, one day per line.
pub fn count_series_csv(series: &[CountSeries]) -> String {
    let width = series.first().map_or(0, CountSeries::len);
    let mut out = String::from("date");
    for i in 0..width {
        out.push_str(&format!(",c_{i}"));
    }
    out.push('\n');
    for s in series {
        out.push_str(&s.date.to_string());
        for c in &s.counts {
            out.push_str(&format!(",{c}"));
        }
        out.push('\n');
    }
    out
}
