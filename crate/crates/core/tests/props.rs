use std::collections::BTreeSet;

use chrono::{Days, NaiveDate};
use proptest::prelude::*;
use trajan::day::{filter_days, DayRecord, Dataset};
use trajan::footmap::compute_footmap_days;
use trajan::heatmap::accumulate_heatmap_days;
use trajan::io::{parse_day_file, serialize_day_file};
use trajan::{SceneConfig, Track, TrackPoint};

fn coord() -> impl Strategy<Value = f64> {
    -100.0f64..700.0
}

fn tracks_strategy(max: usize) -> impl Strategy<Value = Vec<Track>> {
    prop::collection::vec(
        (
            0u32..100,
            prop::collection::vec((1u32..50, coord(), coord()), 2..6),
        ),
        0..max,
    )
    .prop_map(|raw| {
        raw.into_iter()
            .enumerate()
            .map(|(i, (start, steps))| {
                let mut frame = start;
                let mut points = Vec::with_capacity(steps.len());
                for (delta, x, y) in steps {
                    points.push(TrackPoint::new(frame, x, y));
                    frame += delta;
                }
                Track::new(format!("t{i}"), points).unwrap()
            })
            .collect()
    })
}

fn scene() -> SceneConfig {
    SceneConfig::new(640, 480, 30, 80).unwrap()
}

fn day0() -> NaiveDate {
    NaiveDate::from_ymd_opt(2012, 1, 2).unwrap()
}

fn two_days(tracks: Vec<Track>, split: usize) -> Vec<DayRecord<f64>> {
    let split = split.min(tracks.len());
    let (a, b) = tracks.split_at(split);
    vec![
        DayRecord::new(day0(), a.to_vec()),
        DayRecord::new(day0().succ_opt().unwrap(), b.to_vec()),
    ]
}

proptest! {
    #[test]
    fn day_file_roundtrips_exactly(tracks in tracks_strategy(8)) {
        let text = serialize_day_file(&tracks);
        let (parsed, diag) = parse_day_file::<f64>(&text).unwrap();
        prop_assert!(diag.short_tracks.is_empty());
        prop_assert_eq!(parsed, tracks);
    }

    #[test]
    fn heatmap_conserves_points_and_ignores_day_order(
        tracks in tracks_strategy(8),
        split in 0usize..9,
    ) {
        let days = two_days(tracks.clone(), split);
        let (grid, tally) = accumulate_heatmap_days(&scene(), &days);
        let points: usize = tracks.iter().map(Track::len).sum();
        prop_assert_eq!(tally.in_bounds + tally.out_of_bounds, points as u64);
        prop_assert_eq!(grid.total(), tally.in_bounds);

        let reversed: Vec<_> = days.into_iter().rev().collect();
        let (again, _) = accumulate_heatmap_days(&scene(), &reversed);
        prop_assert_eq!(grid, again);
    }

    #[test]
    fn footmap_columns_partition_the_points(
        tracks in tracks_strategy(8),
        split in 0usize..9,
    ) {
        let days = two_days(tracks.clone(), split);
        let (fm, tally) = compute_footmap_days(&scene(), &days);
        let points: usize = tracks.iter().map(Track::len).sum();
        prop_assert_eq!(tally.in_bounds + tally.out_of_bounds, points as u64);
        prop_assert_eq!(fm.total(), tally.in_bounds);
        let by_column: u64 = (0..fm.num_days()).map(|d| fm.column_sum(d)).sum();
        prop_assert_eq!(by_column, fm.total());
    }

    #[test]
    fn chained_exclusions_equal_their_union(
        n in 1u64..12,
        a in prop::collection::btree_set(0u64..12, 0..6),
        b in prop::collection::btree_set(0u64..12, 0..6),
    ) {
        let days: Vec<DayRecord<f64>> = (0..n)
            .map(|i| DayRecord::new(day0() + Days::new(i), Vec::new()))
            .collect();
        let dataset = Dataset::new(scene(), days).unwrap();
        let dates = |s: &BTreeSet<u64>| -> BTreeSet<NaiveDate> {
            s.iter().map(|&i| day0() + Days::new(i)).collect()
        };
        let (a, b) = (dates(&a), dates(&b));
        let union: BTreeSet<NaiveDate> = a.union(&b).copied().collect();
        let chained = filter_days(&filter_days(&dataset, &a), &b);
        let joint = filter_days(&dataset, &union);
        prop_assert_eq!(
            chained.dates().collect::<Vec<_>>(),
            joint.dates().collect::<Vec<_>>()
        );
    }
}
