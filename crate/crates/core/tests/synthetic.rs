use chrono::NaiveDate;
use trajan::geom::point_polyline_distance;
use trajan::io::serialize_day_file;
use trajan::synth::{generate_synthetic_dataset, AnomalyKind, AnomalySpec, SynthSpec};
use trajan::{Dataset, Point};

fn start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2012, 1, 2).unwrap()
}

fn day_texts(dataset: &Dataset) -> Vec<String> {
    dataset
        .days()
        .iter()
        .map(|d| serialize_day_file(&d.tracks))
        .collect()
}

#[test]
fn same_seed_reproduces_every_byte() {
    let spec = SynthSpec::demo_two_lanes(start(), 10);
    let a: Dataset = generate_synthetic_dataset(&spec, 7).unwrap();
    let b: Dataset = generate_synthetic_dataset(&spec, 7).unwrap();
    assert_eq!(day_texts(&a), day_texts(&b));

    let c: Dataset = generate_synthetic_dataset(&spec, 8).unwrap();
    assert_ne!(day_texts(&a), day_texts(&c));
}

#[test]
fn lane_points_stay_inside_their_corridors() {
    let spec = SynthSpec::demo_two_lanes(start(), 10);
    let dataset: Dataset = generate_synthetic_dataset(&spec, 7).unwrap();
    let corridors: Vec<Vec<Point>> = spec
        .lanes
        .iter()
        .map(|l| l.polyline.iter().map(|&[x, y]| Point::new(x, y)).collect())
        .collect();
    // 4 sigma on either side of the centerline.
    let half_width = 4.0 * 6.0;

    let mut total = 0u64;
    let mut inside = 0u64;
    for day in dataset.days() {
        for track in &day.tracks {
            for p in track.positions() {
                total += 1;
                let near = corridors
                    .iter()
                    .any(|c| point_polyline_distance(p, c) <= half_width);
                if near {
                    inside += 1;
                }
            }
        }
    }
    assert!(total > 5_000, "expected a dense corpus, got {total} points");
    assert!(
        inside as f64 >= 0.99 * total as f64,
        "{inside} of {total} points near a lane"
    );
}

#[test]
fn planted_anomaly_sets_the_labels() {
    let mut spec = SynthSpec::demo_two_lanes(start(), 6);
    let corridor = vec![[320.0, 20.0], [320.0, 460.0]];
    spec.anomalies.push(AnomalySpec {
        day: 3,
        kind: AnomalyKind::OffLane {
            polyline: corridor.clone(),
            track_count: 15,
            sigma: 4.0,
        },
    });
    let dataset: Dataset = generate_synthetic_dataset(&spec, 21).unwrap();

    for (i, day) in dataset.days().iter().enumerate() {
        assert_eq!(day.label, Some(i == 3), "day {i}");
    }

    let oracle: Vec<Point> = corridor.iter().map(|&[x, y]| Point::new(x, y)).collect();
    let off_lane = |day: &trajan::DayRecord| {
        day.tracks
            .iter()
            .filter(|t| t.positions().all(|p| point_polyline_distance(p, &oracle) <= 16.0))
            .count()
    };
    assert!(off_lane(&dataset.days()[3]) >= 15);
    assert_eq!(off_lane(&dataset.days()[2]), 0);
}
