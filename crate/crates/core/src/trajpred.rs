//! Trajectory-level anomaly scoring lifted to day-level predictions.
//!
//! Per sliding weekday window: cluster the three training days, fit a rate
//! and a minimum-likelihood threshold per cluster, then classify every test
//! track against its best cluster and flag the day when the anomalous-track
//! ratio reaches lambda.

use std::collections::HashMap;

use chrono::{Days, NaiveDate};

use crate::cluster::{cluster_tracks, ClusterParams, SegmentCluster};
use crate::day::{DayRecord, Dataset};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::track::Track;

/// Fitted per-cluster scoring model.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterStat<S> {
    pub representative: Track<S>,
    /// Reciprocal mean training distance, 1/px².
    pub eta: S,
    /// Minimum training likelihood; test tracks below it are suspect.
    pub gamma_threshold: S,
    pub training_count: usize,
}

/// Mean nearest-point squared distance from each point of `p` to `q`.
/// Asymmetric in general: the average runs over `p`'s points only.
pub fn track_distance<S: Real>(p: &Track<S>, q: &Track<S>) -> S {
    let mut sum = S::zero();
    for tp in p.positions() {
        let nearest = q
            .positions()
            .map(|tq| tp.dist_sq(tq))
            .fold(S::infinity(), S::min);
        sum += nearest;
    }
    sum / S::from_config(p.len() as f64)
}

/// exp(−η·D(track, representative)), in (0, 1].
pub fn likelihood<S: Real>(track: &Track<S>, stat: &ClusterStat<S>) -> S {
    (-stat.eta * track_distance(track, &stat.representative)).exp()
}

/// Ceiling for η when every training member coincides with the
/// representative (mean distance zero).
pub const ETA_CAP: f64 = 1e6;

/// Fit η (reciprocal mean member distance) and γ (minimum member likelihood)
/// for one cluster. `members` are the full training tracks backing the
/// cluster, not their partitioned segments.
pub fn fit_cluster_stats<S: Real>(
    cluster: &SegmentCluster<S>,
    members: &[&Track<S>],
) -> Result<ClusterStat<S>> {
    if members.is_empty() {
        return Err(Error::InvalidInput("cluster has no member tracks".into()));
    }
    let distances: Vec<S> = members
        .iter()
        .map(|m| track_distance(m, &cluster.representative))
        .collect();
    let sum = distances.iter().fold(S::zero(), |acc, &d| acc + d);
    let (eta, gamma_threshold) = if sum == S::zero() {
        (S::from_config(ETA_CAP), S::one())
    } else {
        let eta = S::from_config(members.len() as f64) / sum;
        let gamma = distances
            .iter()
            .map(|&d| (-eta * d).exp())
            .fold(S::infinity(), S::min);
        (eta, gamma)
    };
    Ok(ClusterStat {
        representative: cluster.representative.clone(),
        eta,
        gamma_threshold,
        training_count: members.len(),
    })
}

/// Verdict for one test track against a fitted model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackClassification<S> {
    pub anomalous: bool,
    /// Index of the best-likelihood cluster (ties pick the smallest index).
    pub best_cluster: usize,
    pub likelihood: S,
    pub distance: S,
}

/// Score `track` against every cluster, keep the likelihood argmax j*, and
/// call the track anomalous when its likelihood falls below γ_{j*} while its
/// distance exceeds `delta`.
pub fn classify_track<S: Real>(
    track: &Track<S>,
    model: &[ClusterStat<S>],
    delta: S,
) -> Result<TrackClassification<S>> {
    if model.is_empty() {
        return Err(Error::InvalidInput("model has no clusters".into()));
    }
    let mut best = 0usize;
    let mut best_like = S::neg_infinity();
    let mut best_dist = S::zero();
    for (j, stat) in model.iter().enumerate() {
        let d = track_distance(track, &stat.representative);
        let p = (-stat.eta * d).exp();
        if p > best_like {
            best = j;
            best_like = p;
            best_dist = d;
        }
    }
    let anomalous = best_like < model[best].gamma_threshold && best_dist > delta;
    Ok(TrackClassification {
        anomalous,
        best_cluster: best,
        likelihood: best_like,
        distance: best_dist,
    })
}

/// Day-level verdict: the anomalous-track ratio and its thresholding.
#[derive(Debug, Clone, PartialEq)]
pub struct DayPrediction<S> {
    pub date: NaiveDate,
    pub total_tracks: usize,
    pub anomalous_tracks: usize,
    /// anomalous_tracks / total_tracks, exactly.
    pub psi: S,
    pub predicted: bool,
    /// Ground-truth label carried over from the day record, when present.
    pub label: Option<bool>,
}

/// Classify every track of the day, in track order.
pub fn classify_day<S: Real>(
    day: &DayRecord<S>,
    model: &[ClusterStat<S>],
    delta: S,
) -> Result<Vec<TrackClassification<S>>> {
    if day.tracks.is_empty() {
        return Err(Error::EmptyDay(day.date));
    }
    day.tracks
        .iter()
        .map(|track| classify_track(track, model, delta))
        .collect()
}

/// Classify every track of the day and flag the day when ψ ≥ lambda.
pub fn predict_day<S: Real>(
    day: &DayRecord<S>,
    model: &[ClusterStat<S>],
    delta: S,
    lambda: S,
) -> Result<DayPrediction<S>> {
    let anomalous = classify_day(day, model, delta)?
        .iter()
        .filter(|c| c.anomalous)
        .count();
    let total = day.tracks.len();
    let psi = S::from_config(anomalous as f64) / S::from_config(total as f64);
    Ok(DayPrediction {
        date: day.date,
        total_tracks: total,
        anomalous_tracks: anomalous,
        psi,
        predicted: psi >= lambda,
        label: day.label,
    })
}

/// One sliding evaluation unit: same-weekday training dates and the
/// following same-weekday test date.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeScaleWindow {
    pub training_dates: Vec<NaiveDate>,
    pub test_date: NaiveDate,
}

/// Enumerate every window of `omega_days / stride_days` dates spaced
/// `stride_days` apart whose dates are all present in the dataset; the last
/// date tests, the earlier ones train. Dates missing from the dataset break
/// a window rather than stretch it. Defaults (28, 7) give 3 same-weekday
/// training days plus the next same-weekday test day.
pub fn schedule_windows<S: Real>(
    dataset: &Dataset<S>,
    omega_days: u32,
    stride_days: u32,
) -> Result<Vec<TimeScaleWindow>> {
    if stride_days == 0 {
        return Err(Error::Config("stride must be positive".into()));
    }
    if !omega_days.is_multiple_of(stride_days) {
        return Err(Error::Config(format!(
            "window of {omega_days} days is not a multiple of the {stride_days}-day stride"
        )));
    }
    let steps = omega_days / stride_days;
    if steps < 2 {
        return Err(Error::Config(
            "window must cover at least two strides (one training, one test)".into(),
        ));
    }

    let mut windows = Vec::new();
    for base in dataset.dates() {
        let mut dates = Vec::with_capacity(steps as usize);
        for k in 0..steps {
            let d = base
                .checked_add_days(Days::new(u64::from(k * stride_days)))
                .ok_or_else(|| Error::Config("window overflows the calendar".into()))?;
            dates.push(d);
        }
        if dates.iter().all(|d| dataset.day(*d).is_some()) {
            let test_date = dates.pop().unwrap();
            windows.push(TimeScaleWindow {
                training_dates: dates,
                test_date,
            });
        }
    }
    Ok(windows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryParams<S> {
    pub cluster: ClusterParams<S>,
    /// Distance guard: a track is only anomalous beyond this distance.
    pub delta: S,
    /// Day threshold on the anomalous-track ratio.
    pub lambda: S,
    pub omega_days: u32,
    pub stride_days: u32,
}

impl<S: Real> Default for TrajectoryParams<S> {
    fn default() -> Self {
        TrajectoryParams {
            cluster: ClusterParams::default(),
            delta: S::from_config(1000.0),
            lambda: S::from_config(0.01),
            omega_days: 28,
            stride_days: 7,
        }
    }
}

impl<S: Real> TrajectoryParams<S> {
    pub fn validate(&self) -> Result<()> {
        self.cluster.validate()?;
        if !(self.delta.is_finite() && self.delta > S::zero()) {
            return Err(Error::Config("delta must be positive".into()));
        }
        if !(self.lambda.is_finite() && self.lambda >= S::zero() && self.lambda <= S::one()) {
            return Err(Error::Config("lambda must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// A window the pipeline could not score, and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedWindow {
    pub test_date: NaiveDate,
    pub reason: String,
}

/// Per-track classification detail behind one day prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackDiagnostic<S> {
    pub date: NaiveDate,
    pub track_id: String,
    pub result: TrackClassification<S>,
}

/// The clusters fitted for one scored window, keyed by its test date.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowModel<S> {
    pub test_date: NaiveDate,
    pub clusters: Vec<SegmentCluster<S>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryOutcome<S> {
    pub predictions: Vec<DayPrediction<S>>,
    pub skipped: Vec<SkippedWindow>,
    /// One entry per test track, in prediction order.
    pub diagnostics: Vec<TrackDiagnostic<S>>,
    /// One entry per prediction, in the same order.
    pub models: Vec<WindowModel<S>>,
}

/// Run the full trajectory pipeline over every scheduled window.
///
/// Windows whose training days yield no clusters, or whose test day has no
/// tracks, are skipped and reported rather than failing the run.
pub fn run_trajectory_pipeline<S: Real>(
    dataset: &Dataset<S>,
    params: &TrajectoryParams<S>,
) -> Result<TrajectoryOutcome<S>> {
    params.validate()?;
    let windows = schedule_windows(dataset, params.omega_days, params.stride_days)?;
    let mut outcome = TrajectoryOutcome {
        predictions: Vec::new(),
        skipped: Vec::new(),
        diagnostics: Vec::new(),
        models: Vec::new(),
    };

    for window in windows {
        let training: Vec<&DayRecord<S>> = window
            .training_dates
            .iter()
            .map(|d| dataset.day(*d).expect("window dates are present"))
            .collect();
        let test_day = dataset.day(window.test_date).expect("window dates are present");
        if test_day.tracks.is_empty() {
            outcome.skipped.push(SkippedWindow {
                test_date: window.test_date,
                reason: "test day has no tracks".into(),
            });
            continue;
        }

        let mut dated: Vec<(NaiveDate, &Track<S>)> = Vec::new();
        let mut by_key: HashMap<(NaiveDate, &str), &Track<S>> = HashMap::new();
        for day in &training {
            for track in &day.tracks {
                dated.push((day.date, track));
                by_key.insert((day.date, track.id()), track);
            }
        }

        let clusters = cluster_tracks(&dated, &params.cluster)?;
        if clusters.is_empty() {
            outcome.skipped.push(SkippedWindow {
                test_date: window.test_date,
                reason: "training days produced no clusters".into(),
            });
            continue;
        }

        let model: Vec<ClusterStat<S>> = clusters
            .iter()
            .map(|cluster| {
                let members: Vec<&Track<S>> = cluster
                    .member_tracks()
                    .into_iter()
                    .map(|key| *by_key.get(&key).expect("member track came from training"))
                    .collect();
                fit_cluster_stats(cluster, &members)
            })
            .collect::<Result<_>>()?;

        let per_track = classify_day(test_day, &model, params.delta)?;
        for (track, result) in test_day.tracks.iter().zip(&per_track) {
            outcome.diagnostics.push(TrackDiagnostic {
                date: test_day.date,
                track_id: track.id().to_string(),
                result: *result,
            });
        }
        outcome
            .predictions
            .push(predict_day(test_day, &model, params.delta, params.lambda)?);
        outcome.models.push(WindowModel {
            test_date: test_day.date,
            clusters,
        });
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::representative_track;
    use crate::cluster::{Segment, SegmentKey};
    use crate::geom::Point;
    use crate::scene::SceneConfig;
    use crate::synth::{generate_synthetic_dataset, AnomalyKind, AnomalySpec, SynthSpec};
    use crate::track::TrackPoint;

    fn track_of(id: &str, points: &[(f64, f64)]) -> Track<f64> {
        let pts = points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| TrackPoint::new(i as u32, x, y))
            .collect();
        Track::new(id, pts).unwrap()
    }

    fn line_track(id: &str, y: f64) -> Track<f64> {
        track_of(id, &[(0.0, y), (100.0, y), (200.0, y)])
    }

    fn stat_for(rep: Track<f64>, eta: f64, gamma: f64) -> ClusterStat<f64> {
        ClusterStat {
            representative: rep,
            eta,
            gamma_threshold: gamma,
            training_count: 3,
        }
    }

    #[test]
    fn track_distance_examples() {
        let p = track_of("p", &[(0.0, 0.0), (1.0, 0.0)]);
        assert_eq!(track_distance(&p, &p), 0.0);

        let q = track_of("q", &[(0.0, 1.0), (900.0, 900.0)]);
        // nearest q-point for both p-points is (0,1): (0+1 + 1+1)/2
        assert_eq!(track_distance(&p, &q), 1.5);
        assert_ne!(track_distance(&p, &q), track_distance(&q, &p));
    }

    #[test]
    fn track_distance_matches_double_loop_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let n = rng.gen_range(2..12);
            let m = rng.gen_range(2..12);
            let mk = |rng: &mut rand_chacha::ChaCha8Rng, n: usize| {
                let pts: Vec<(f64, f64)> = (0..n)
                    .map(|_| (rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0)))
                    .collect();
                track_of("t", &pts)
            };
            let p = mk(&mut rng, n);
            let q = mk(&mut rng, m);

            let mut oracle = 0.0f64;
            for a in p.points() {
                let mut best = f64::INFINITY;
                for b in q.points() {
                    let dx = a.x - b.x;
                    let dy = a.y - b.y;
                    best = best.min(dx * dx + dy * dy);
                }
                oracle += best;
            }
            oracle /= p.len() as f64;
            assert_eq!(track_distance(&p, &q), oracle);
        }
    }

    #[test]
    fn likelihood_fixture_and_monotonicity() {
        let rep = line_track("rep", 0.0);
        let stat = stat_for(rep.clone(), 0.001, 0.5);
        assert_eq!(likelihood(&rep, &stat), 1.0);

        // members offset by (10,30) sit at squared distance 100+900 per point
        let far = rep.translated(10.0, 30.0);
        assert_eq!(track_distance(&far, &rep), 1000.0);
        assert_eq!(likelihood(&far, &stat), (-1.0f64).exp());
        assert_eq!((-1.0f64).exp(), 0.36787944117144233);

        let mut prev = 1.0;
        for k in 1..8 {
            let t = rep.translated(0.0, 10.0 * k as f64);
            let l = likelihood(&t, &stat);
            assert!(l < prev, "likelihood must fall as distance grows");
            prev = l;
        }
    }

    fn cluster_around(rep: Track<f64>) -> SegmentCluster<f64> {
        let members = vec![Segment {
            start: Point::new(0.0, 0.0),
            end: Point::new(200.0, 0.0),
            key: SegmentKey {
                date: "2012-01-02".parse().unwrap(),
                track: "m".into(),
                index: 0,
            },
        }];
        SegmentCluster {
            members,
            representative: rep,
        }
    }

    #[test]
    fn fit_examples_from_hand_computation() {
        let rep = line_track("rep", 0.0);
        let cluster = cluster_around(rep.clone());

        let m = rep.translated(10.0, 30.0); // D = 1000 exactly
        let members = vec![&m, &m, &m];
        let stat = fit_cluster_stats(&cluster, &members).unwrap();
        assert_eq!(stat.eta, 3.0 / 3000.0);
        assert_eq!(stat.eta, 0.001);
        assert_eq!(stat.gamma_threshold, (-1.0f64).exp());
        assert_eq!(stat.training_count, 3);

        // degenerate: member coincides with representative
        let same = vec![&rep];
        let stat = fit_cluster_stats(&cluster, &same).unwrap();
        assert_eq!(stat.eta, 1e6);
        assert_eq!(stat.gamma_threshold, 1.0);

        // distances 500 and 1500: eta 0.001, gamma from the farther member
        let near = rep.translated(10.0, 20.0); // 100+400 = 500
        let far = rep.translated(15.0, sqrt_1275()); // 225+1275 = 1500
        let stat = fit_cluster_stats(&cluster, &[&near, &far]).unwrap();
        assert_eq!(stat.eta, 2.0 / 2000.0);
        let d_far = track_distance(&far, &rep);
        assert!((d_far - 1500.0).abs() < 1e-9);
        assert!((stat.gamma_threshold - (-1.5f64).exp()).abs() < 1e-12);
        assert_eq!((-1.5f64).exp(), 0.22313016014842982);

        assert!(fit_cluster_stats::<f64>(&cluster, &[]).is_err());
    }

    fn sqrt_1275() -> f64 {
        1275.0f64.sqrt()
    }

    #[test]
    fn mean_training_distance_is_reciprocal_eta() {
        let rep = line_track("rep", 0.0);
        let cluster = cluster_around(rep.clone());
        let m1 = rep.translated(3.0, 4.0);
        let m2 = rep.translated(-7.0, 1.0);
        let m3 = rep.translated(0.5, -11.0);
        let members = vec![&m1, &m2, &m3];
        let stat = fit_cluster_stats(&cluster, &members).unwrap();
        let mean: f64 = members
            .iter()
            .map(|m| track_distance(m, &rep))
            .sum::<f64>()
            / 3.0;
        assert!((mean - 1.0 / stat.eta).abs() < 1e-12 * mean.max(1.0));

        for m in members {
            assert!(likelihood(m, &stat) >= stat.gamma_threshold);
        }
    }

    #[test]
    fn classification_follows_both_guards() {
        let rep = line_track("rep", 0.0);
        let model = vec![stat_for(rep.clone(), 0.01, 0.5)];

        // likelihood 1 >= gamma: normal
        let same = classify_track(&rep, &model, 1000.0).unwrap();
        assert!(!same.anomalous);
        assert_eq!(same.best_cluster, 0);
        assert_eq!(same.likelihood, 1.0);

        // D = 900 <= delta: distance guard blocks the flag
        let near = rep.translated(30.0, 0.0);
        let got = classify_track(&near, &model, 1000.0).unwrap();
        assert_eq!(got.distance, 900.0);
        assert!(got.likelihood < 0.5);
        assert!(!got.anomalous);

        // far on both counts: anomalous
        let far = rep.translated(200.0, 200.0);
        let got = classify_track(&far, &model, 1000.0).unwrap();
        assert!(got.distance > 1000.0);
        assert!(got.anomalous);

        assert!(classify_track(&rep, &[], 1000.0).is_err());
    }

    #[test]
    fn classification_ties_pick_the_smallest_index() {
        let rep = line_track("rep", 0.0);
        let model = vec![
            stat_for(rep.clone(), 0.001, 0.5),
            stat_for(rep.clone(), 0.001, 0.5),
        ];
        let got = classify_track(&rep.translated(5.0, 5.0), &model, 1000.0).unwrap();
        assert_eq!(got.best_cluster, 0);
    }

    #[test]
    fn delta_monotonicity() {
        let rep = line_track("rep", 0.0);
        let track = rep.translated(40.0, 0.0); // D = 1600
        let mut flagged = Vec::new();
        for delta in [100.0, 1000.0, 1599.0, 1600.0, 1601.0, 5000.0] {
            let model = vec![stat_for(rep.clone(), 0.01, 0.9)];
            let got = classify_track(&track, &model, delta).unwrap();
            flagged.push(got.anomalous);
        }
        // non-increasing in delta; D > delta is strict so 1600 itself passes
        assert_eq!(flagged, vec![true, true, true, false, false, false]);
    }

    #[test]
    fn day_threshold_is_inclusive_and_monotone_in_lambda() {
        let rep = line_track("rep", 0.0);
        let model = vec![stat_for(rep.clone(), 0.001, 0.5)];
        let mut tracks: Vec<Track<f64>> = (0..99)
            .map(|i| {
                let mut t = rep.clone();
                t = Track::new(format!("n{i}"), t.points().to_vec()).unwrap();
                t
            })
            .collect();
        tracks.push(Track::new("far", rep.translated(2000.0, 2000.0).points().to_vec()).unwrap());
        let mut day = DayRecord::new("2012-01-30".parse().unwrap(), tracks);
        day.label = Some(true);

        let got = predict_day(&day, &model, 1000.0, 0.01).unwrap();
        assert_eq!(got.total_tracks, 100);
        assert_eq!(got.anomalous_tracks, 1);
        assert_eq!(got.psi, 0.01);
        assert!(got.predicted, "boundary psi == lambda must flag the day");
        assert_eq!(got.label, Some(true));

        let higher = predict_day(&day, &model, 1000.0, 0.0100001).unwrap();
        assert!(!higher.predicted);

        let all_normal = DayRecord::new("2012-01-31".parse().unwrap(), vec![rep.clone()]);
        let got = predict_day(&all_normal, &model, 1000.0, 0.01).unwrap();
        assert_eq!(got.psi, 0.0);
        assert!(!got.predicted);

        let empty = DayRecord::<f64>::new("2012-02-01".parse().unwrap(), vec![]);
        assert!(matches!(
            predict_day(&empty, &model, 1000.0, 0.01),
            Err(Error::EmptyDay(_))
        ));
    }

    fn dataset_with_dates(dates: &[&str]) -> Dataset<f64> {
        let scene = SceneConfig::with_defaults(640, 480).unwrap();
        let days = dates
            .iter()
            .map(|d| DayRecord::new(d.parse().unwrap(), vec![line_track("t", 10.0)]))
            .collect();
        Dataset::new(scene, days).unwrap()
    }

    #[test]
    fn window_schedule_over_consecutive_mondays() {
        let four = dataset_with_dates(&["2012-01-02", "2012-01-09", "2012-01-16", "2012-01-23"]);
        let got = schedule_windows(&four, 28, 7).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].test_date, "2012-01-23".parse().unwrap());
        assert_eq!(got[0].training_dates.len(), 3);

        let five = dataset_with_dates(&[
            "2012-01-02",
            "2012-01-09",
            "2012-01-16",
            "2012-01-23",
            "2012-01-30",
        ]);
        let got = schedule_windows(&five, 28, 7).unwrap();
        assert_eq!(got.len(), 2);
        assert_eq!(got[1].training_dates[0], "2012-01-09".parse().unwrap());
    }

    #[test]
    fn missing_dates_break_windows_instead_of_stretching() {
        // 5 Mondays with the middle one missing
        let ds = dataset_with_dates(&["2012-01-02", "2012-01-09", "2012-01-23", "2012-01-30"]);
        let got = schedule_windows(&ds, 28, 7).unwrap();
        assert!(got.is_empty());

        // every emitted window has all dates present
        let mixed = dataset_with_dates(&[
            "2012-01-02",
            "2012-01-03",
            "2012-01-09",
            "2012-01-10",
            "2012-01-16",
            "2012-01-17",
            "2012-01-23",
            "2012-01-30",
        ]);
        let got = schedule_windows(&mixed, 28, 7).unwrap();
        assert_eq!(got.len(), 2);
        for w in &got {
            for d in w.training_dates.iter().chain([&w.test_date]) {
                assert!(mixed.day(*d).is_some());
            }
        }
    }

    #[test]
    fn window_parameters_are_validated() {
        let ds = dataset_with_dates(&["2012-01-02"]);
        assert!(schedule_windows(&ds, 28, 0).is_err());
        assert!(schedule_windows(&ds, 28, 5).is_err());
        assert!(schedule_windows(&ds, 7, 7).is_err());
        assert!(schedule_windows(&ds, 14, 7).is_ok());
    }

    #[test]
    fn pipeline_recovers_a_planted_off_lane_day() {
        let mut spec = SynthSpec::demo_two_lanes("2012-01-02".parse().unwrap(), 22);
        spec.lanes.truncate(1);
        spec.lanes[0].mean_tracks = 40.0;
        spec.lanes[0].sigma = 4.0;
        spec.anomalies = vec![AnomalySpec {
            day: 21,
            kind: AnomalyKind::OffLane {
                polyline: vec![[320.0, 20.0], [320.0, 460.0]],
                track_count: 20,
                sigma: 4.0,
            },
        }];
        let ds: Dataset<f64> = generate_synthetic_dataset(&spec, 42).unwrap();
        let params = TrajectoryParams::default();
        let out = run_trajectory_pipeline(&ds, &params).unwrap();
        assert!(out.skipped.is_empty());
        assert_eq!(out.predictions.len(), 1);
        let p = &out.predictions[0];
        assert_eq!(p.date, "2012-01-23".parse().unwrap());
        assert!(p.predicted, "psi = {}", p.psi);
        assert_eq!(p.label, Some(true));
        assert!(p.anomalous_tracks >= 15, "got {}", p.anomalous_tracks);
    }

    #[test]
    fn training_day_replayed_as_test_day_stays_clean() {
        let mut spec = SynthSpec::demo_two_lanes("2012-01-02".parse().unwrap(), 22);
        spec.lanes[0].mean_tracks = 30.0;
        spec.lanes[1].mean_tracks = 30.0;
        let ds: Dataset<f64> = generate_synthetic_dataset(&spec, 11).unwrap();
        let params = TrajectoryParams::default();
        let out = run_trajectory_pipeline(&ds, &params).unwrap();
        assert_eq!(out.predictions.len(), 1);
        assert!(!out.predictions[0].predicted, "psi = {}", out.predictions[0].psi);
    }

    #[test]
    fn representative_fed_model_scores_its_own_cluster_normal() {
        // wire cluster fitting to classification end to end on a tiny fixture
        let members: Vec<Segment<f64>> = (0..3)
            .map(|i| Segment {
                start: Point::new(0.0, i as f64),
                end: Point::new(200.0, i as f64),
                key: SegmentKey {
                    date: "2012-01-02".parse().unwrap(),
                    track: format!("t{i}"),
                    index: 0,
                },
            })
            .collect();
        let params = ClusterParams {
            min_lines: 3,
            smoothing_gamma: 100.0,
            ..ClusterParams::default()
        };
        let rep = representative_track(&members, &params).unwrap();
        let cluster = SegmentCluster {
            members,
            representative: rep,
        };
        let t0 = line_track("t0", 0.0);
        let t1 = line_track("t1", 1.0);
        let t2 = line_track("t2", 2.0);
        let stat = fit_cluster_stats(&cluster, &[&t0, &t1, &t2]).unwrap();
        for t in [&t0, &t1, &t2] {
            let got = classify_track(t, std::slice::from_ref(&stat), 1000.0).unwrap();
            assert!(!got.anomalous);
        }
    }
}
