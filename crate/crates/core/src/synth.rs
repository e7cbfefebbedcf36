//! Seeded synthetic dataset generator.
//!
//! Desk-scale stand-in for real camera data: a handful of lane corridors,
//! Poisson track counts, Gaussian lateral noise, and planted anomalous days
//! with known labels. Everything is a pure function of (spec, seed).

use chrono::{Datelike, Days, NaiveDate, Weekday};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::day::{DayRecord, Dataset};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::Real;
use crate::scene::SceneConfig;
use crate::track::{Track, TrackPoint};

/// One traffic corridor: tracks follow `polyline` with a per-track lateral
/// Gaussian offset of std dev `sigma`, and the number of tracks per day is
/// Poisson with mean `mean_tracks`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaneSpec {
    pub polyline: Vec<[f64; 2]>,
    pub mean_tracks: f64,
    pub sigma: f64,
    /// Restrict the lane to these weekdays; absent = active every day.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weekdays: Option<Vec<Weekday>>,
}

impl LaneSpec {
    pub fn new(polyline: Vec<[f64; 2]>, mean_tracks: f64, sigma: f64) -> Self {
        LaneSpec {
            polyline,
            mean_tracks,
            sigma,
            weekdays: None,
        }
    }

    fn active_on(&self, weekday: Weekday) -> bool {
        match &self.weekdays {
            None => true,
            Some(days) => days.contains(&weekday),
        }
    }
}

/// How a planted anomalous day differs from a typical one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnomalyKind {
    /// Extra tracks along a corridor that no lane uses.
    OffLane {
        polyline: Vec<[f64; 2]>,
        track_count: u32,
        sigma: f64,
    },
    /// Scale every lane's mean track count (surge > 1, drop < 1).
    CountFactor { factor: f64 },
}

/// A planted anomaly on the day `day` steps after the start date.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnomalySpec {
    pub day: u32,
    #[serde(flatten)]
    pub kind: AnomalyKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    pub scene: SceneConfig,
    pub start_date: NaiveDate,
    pub num_days: u32,
    /// Samples per track, spaced at equal arclength fractions along the lane.
    #[serde(default = "default_points_per_track")]
    pub points_per_track: u32,
    /// Frame gap between consecutive samples of a track.
    #[serde(default = "default_frame_step")]
    pub frame_step: u32,
    pub lanes: Vec<LaneSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub anomalies: Vec<AnomalySpec>,
}

fn default_points_per_track() -> u32 {
    20
}

fn default_frame_step() -> u32 {
    2
}

impl SynthSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: SynthSpec =
            toml::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("spec serializes")
    }

    /// Two horizontal corridors across a 640x480 scene. Enough structure for
    /// clustering and counting demos without being slow.
    pub fn demo_two_lanes(start_date: NaiveDate, num_days: u32) -> Self {
        let scene = SceneConfig::new(640, 480, 30, 80).unwrap();
        SynthSpec {
            scene,
            start_date,
            num_days,
            points_per_track: default_points_per_track(),
            frame_step: default_frame_step(),
            lanes: vec![
                LaneSpec::new(vec![[40.0, 150.0], [600.0, 150.0]], 20.0, 6.0),
                LaneSpec::new(vec![[600.0, 330.0], [40.0, 330.0]], 20.0, 6.0),
            ],
            anomalies: Vec::new(),
        }
    }

    /// The two-lane demo plus two vertical corridors.
    pub fn demo_four_lanes(start_date: NaiveDate, num_days: u32) -> Self {
        let mut spec = Self::demo_two_lanes(start_date, num_days);
        spec.lanes.push(LaneSpec::new(
            vec![[160.0, 20.0], [160.0, 460.0]],
            20.0,
            6.0,
        ));
        spec.lanes.push(LaneSpec::new(
            vec![[480.0, 460.0], [480.0, 20.0]],
            20.0,
            6.0,
        ));
        spec
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_days == 0 {
            return Err(Error::InvalidSpec("num_days must be positive".into()));
        }
        if self.lanes.is_empty() {
            return Err(Error::InvalidSpec("at least one lane required".into()));
        }
        if self.points_per_track < 2 {
            return Err(Error::InvalidSpec("points_per_track must be >= 2".into()));
        }
        if self.frame_step == 0 {
            return Err(Error::InvalidSpec("frame_step must be positive".into()));
        }
        let span = u64::from(self.points_per_track - 1) * u64::from(self.frame_step);
        if span >= self.scene.frames_per_day() {
            return Err(Error::InvalidSpec(format!(
                "a track spans {span} frames but a day has only {}",
                self.scene.frames_per_day()
            )));
        }
        for (i, lane) in self.lanes.iter().enumerate() {
            validate_corridor(&lane.polyline, &format!("lane {i}"))?;
            if !lane.mean_tracks.is_finite() || lane.mean_tracks < 0.0 {
                return Err(Error::InvalidSpec(format!(
                    "lane {i}: mean_tracks must be finite and non-negative"
                )));
            }
            validate_sigma(lane.sigma, &format!("lane {i}"))?;
        }
        for (i, anomaly) in self.anomalies.iter().enumerate() {
            if anomaly.day >= self.num_days {
                return Err(Error::InvalidSpec(format!(
                    "anomaly {i}: day {} out of range 0..{}",
                    anomaly.day, self.num_days
                )));
            }
            match &anomaly.kind {
                AnomalyKind::OffLane {
                    polyline, sigma, ..
                } => {
                    validate_corridor(polyline, &format!("anomaly {i}"))?;
                    validate_sigma(*sigma, &format!("anomaly {i}"))?;
                }
                AnomalyKind::CountFactor { factor } => {
                    if !factor.is_finite() || *factor < 0.0 {
                        return Err(Error::InvalidSpec(format!(
                            "anomaly {i}: factor must be finite and non-negative"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn validate_corridor(polyline: &[[f64; 2]], what: &str) -> Result<()> {
    if polyline.len() < 2 {
        return Err(Error::InvalidSpec(format!(
            "{what}: polyline needs at least 2 points"
        )));
    }
    if polyline.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidSpec(format!(
            "{what}: polyline has non-finite coordinates"
        )));
    }
    if corridor_length(polyline) <= 0.0 {
        return Err(Error::InvalidSpec(format!("{what}: polyline has zero length")));
    }
    Ok(())
}

fn validate_sigma(sigma: f64, what: &str) -> Result<()> {
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::InvalidSpec(format!(
            "{what}: sigma must be finite and non-negative"
        )));
    }
    Ok(())
}

fn corridor_length(polyline: &[[f64; 2]]) -> f64 {
    polyline
        .windows(2)
        .map(|w| ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2)).sqrt())
        .sum()
}

/// Position on the polyline at arclength fraction `f` in [0,1], plus the unit
/// normal of the segment it falls on.
fn corridor_sample(polyline: &[[f64; 2]], f: f64) -> (Point<f64>, Point<f64>) {
    let total = corridor_length(polyline);
    let target = f * total;
    let mut walked = 0.0;
    let mut hit = None;
    for w in polyline.windows(2) {
        let a = Point::new(w[0][0], w[0][1]);
        let b = Point::new(w[1][0], w[1][1]);
        let len = (b - a).norm();
        if len == 0.0 {
            continue;
        }
        hit = Some((a, b, len, walked));
        if walked + len >= target {
            break;
        }
        walked += len;
    }
    let (a, b, len, walked) = hit.expect("corridor_length > 0 was validated");
    let t = ((target - walked) / len).clamp(0.0, 1.0);
    let dir = (b - a).scale(1.0 / len);
    let pos = a + (b - a).scale(t);
    (pos, Point::new(-dir.y, dir.x))
}

/// Generate the full labeled dataset for `spec` with the given seed.
/// Identical (spec, seed) pairs yield identical datasets.
pub fn generate_synthetic_dataset<S: Real>(spec: &SynthSpec, seed: u64) -> Result<Dataset<S>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut days = Vec::with_capacity(spec.num_days as usize);

    for day_index in 0..spec.num_days {
        let date = spec
            .start_date
            .checked_add_days(Days::new(u64::from(day_index)))
            .ok_or_else(|| Error::InvalidSpec("date range overflows the calendar".into()))?;
        let anomaly = spec.anomalies.iter().find(|a| a.day == day_index);
        let count_factor = match anomaly.map(|a| &a.kind) {
            Some(AnomalyKind::CountFactor { factor }) => *factor,
            _ => 1.0,
        };

        let mut tracks = Vec::new();
        let mut counter = 0u32;
        for lane in &spec.lanes {
            if !lane.active_on(date.weekday()) {
                continue;
            }
            let n = sample_count(&mut rng, lane.mean_tracks * count_factor);
            for _ in 0..n {
                tracks.push(make_track(
                    spec,
                    &lane.polyline,
                    lane.sigma,
                    &mut rng,
                    &mut counter,
                )?);
            }
        }
        if let Some(AnomalyKind::OffLane {
            polyline,
            track_count,
            sigma,
        }) = anomaly.map(|a| &a.kind)
        {
            for _ in 0..*track_count {
                tracks.push(make_track(spec, polyline, *sigma, &mut rng, &mut counter)?);
            }
        }

        let mut record = DayRecord::new(date, tracks);
        record.label = Some(anomaly.is_some());
        days.push(record);
    }
    Dataset::new(spec.scene.clone(), days)
}

fn sample_count(rng: &mut ChaCha8Rng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("validated mean").sample(rng) as u64
}

fn make_track<S: Real>(
    spec: &SynthSpec,
    polyline: &[[f64; 2]],
    sigma: f64,
    rng: &mut ChaCha8Rng,
    counter: &mut u32,
) -> Result<Track<S>> {
    let offset = Normal::new(0.0, sigma).expect("validated sigma").sample(rng);
    let span = u64::from(spec.points_per_track - 1) * u64::from(spec.frame_step);
    let max_start = spec.scene.frames_per_day() - 1 - span;
    let start = rng.gen_range(0..=max_start) as u32;

    let denom = f64::from(spec.points_per_track - 1);
    let points = (0..spec.points_per_track)
        .map(|k| {
            let (pos, normal) = corridor_sample(polyline, f64::from(k) / denom);
            let p = pos + normal.scale(offset);
            TrackPoint::new(
                start + k * spec.frame_step,
                S::from_config(p.x),
                S::from_config(p.y),
            )
        })
        .collect();

    let id = format!("t{counter}");
    *counter += 1;
    Track::new(id, points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn start() -> NaiveDate {
        "2012-01-02".parse().unwrap()
    }

    #[test]
    fn deterministic_for_fixed_spec_and_seed() {
        let spec = SynthSpec::demo_two_lanes(start(), 7);
        let a: Dataset<f64> = generate_synthetic_dataset(&spec, 42).unwrap();
        let b: Dataset<f64> = generate_synthetic_dataset(&spec, 42).unwrap();
        assert_eq!(a, b);
        let c: Dataset<f64> = generate_synthetic_dataset(&spec, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn labels_mark_exactly_the_planted_days() {
        let mut spec = SynthSpec::demo_two_lanes(start(), 28);
        spec.anomalies = vec![
            AnomalySpec {
                day: 7,
                kind: AnomalyKind::CountFactor { factor: 3.0 },
            },
            AnomalySpec {
                day: 21,
                kind: AnomalyKind::OffLane {
                    polyline: vec![[320.0, 20.0], [320.0, 460.0]],
                    track_count: 30,
                    sigma: 4.0,
                },
            },
        ];
        let ds: Dataset<f64> = generate_synthetic_dataset(&spec, 42).unwrap();
        assert_eq!(ds.len(), 28);
        let flagged: Vec<u32> = ds
            .days()
            .iter()
            .enumerate()
            .filter(|(_, d)| d.label == Some(true))
            .map(|(i, _)| i as u32)
            .collect();
        assert_eq!(flagged, vec![7, 21]);
        assert!(ds.days().iter().all(|d| d.label.is_some()));
    }

    #[test]
    fn zero_sigma_lane_tracks_share_coordinates() {
        let mut spec = SynthSpec::demo_two_lanes(start(), 1);
        spec.lanes.truncate(1);
        spec.lanes[0].sigma = 0.0;
        spec.lanes[0].mean_tracks = 12.0;
        let ds: Dataset<f64> = generate_synthetic_dataset(&spec, 7).unwrap();
        let day = &ds.days()[0];
        assert!(day.tracks.len() > 1, "poisson(12) produced {}", day.tracks.len());
        let coords: Vec<Vec<(f64, f64)>> = day
            .tracks
            .iter()
            .map(|t| t.points().iter().map(|p| (p.x, p.y)).collect())
            .collect();
        for c in &coords[1..] {
            assert_eq!(c, &coords[0]);
        }
    }

    #[test]
    fn weekday_restricted_lane_skips_other_days() {
        let mut spec = SynthSpec::demo_two_lanes(start(), 2);
        spec.lanes[1].weekdays = Some(vec![Weekday::Tue]);
        spec.lanes[0].sigma = 0.0;
        spec.lanes[1].sigma = 0.0;
        let ds: Dataset<f64> = generate_synthetic_dataset(&spec, 1).unwrap();
        let on_lane2 = |d: &DayRecord<f64>| {
            d.tracks
                .iter()
                .any(|t| t.points().iter().all(|p| (p.y - 330.0).abs() < 1e-9))
        };
        assert!(!on_lane2(&ds.days()[0]), "monday should have no lane-2 tracks");
        assert!(on_lane2(&ds.days()[1]), "tuesday should have lane-2 tracks");
    }

    #[test]
    fn rejects_degenerate_specs() {
        let mut no_days = SynthSpec::demo_two_lanes(start(), 1);
        no_days.num_days = 0;
        assert!(generate_synthetic_dataset::<f64>(&no_days, 0).is_err());

        let mut no_lanes = SynthSpec::demo_two_lanes(start(), 1);
        no_lanes.lanes.clear();
        assert!(generate_synthetic_dataset::<f64>(&no_lanes, 0).is_err());

        let mut bad_day = SynthSpec::demo_two_lanes(start(), 5);
        bad_day.anomalies = vec![AnomalySpec {
            day: 5,
            kind: AnomalyKind::CountFactor { factor: 2.0 },
        }];
        assert!(generate_synthetic_dataset::<f64>(&bad_day, 0).is_err());

        let mut flat = SynthSpec::demo_two_lanes(start(), 1);
        flat.lanes[0].polyline = vec![[10.0, 10.0], [10.0, 10.0]];
        assert!(generate_synthetic_dataset::<f64>(&flat, 0).is_err());
    }

    #[test]
    fn toml_roundtrip_preserves_spec() {
        let mut spec = SynthSpec::demo_four_lanes(start(), 14);
        spec.lanes[2].weekdays = Some(vec![Weekday::Mon, Weekday::Fri]);
        spec.anomalies = vec![
            AnomalySpec {
                day: 3,
                kind: AnomalyKind::CountFactor { factor: 0.2 },
            },
            AnomalySpec {
                day: 9,
                kind: AnomalyKind::OffLane {
                    polyline: vec![[0.0, 0.0], [100.0, 100.0]],
                    track_count: 15,
                    sigma: 2.5,
                },
            },
        ];
        let text = spec.to_toml();
        let back = SynthSpec::from_toml(&text).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn corridor_sampling_hits_segment_boundaries() {
        let poly = vec![[0.0, 0.0], [10.0, 0.0], [10.0, 10.0]];
        let (p, n) = corridor_sample(&poly, 0.0);
        assert_eq!((p.x, p.y), (0.0, 0.0));
        assert_eq!((n.x, n.y), (0.0, 1.0));
        let (p, _) = corridor_sample(&poly, 0.5);
        assert_eq!((p.x, p.y), (10.0, 0.0));
        let (p, n) = corridor_sample(&poly, 1.0);
        assert_eq!((p.x, p.y), (10.0, 10.0));
        assert_eq!((n.x, n.y), (-1.0, 0.0));
    }
}
