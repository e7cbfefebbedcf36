//! Pools × days activity matrix.
//!
//! The scene is tiled with non-overlapping square patches ("pools"); each
//! footmap column is one day, each row one pool, each entry the number of
//! track points that fell into that pool on that day.

use chrono::NaiveDate;

use crate::day::{DayRecord, Dataset};
use crate::heatmap::BoundsTally;
use crate::scalar::Real;
use crate::scene::SceneConfig;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Footmap {
    pool_count: u32,
    day_dates: Vec<NaiveDate>,
    /// values[pool][day]; pools enumerate patches left-to-right, then
    /// top-to-bottom, so the scene's top row of patches comes first.
    values: Vec<Vec<u64>>,
}

impl Footmap {
    pub fn pool_count(&self) -> u32 {
        self.pool_count
    }

    pub fn day_dates(&self) -> &[NaiveDate] {
        &self.day_dates
    }

    pub fn num_days(&self) -> usize {
        self.day_dates.len()
    }

    pub fn at(&self, pool: u32, day: usize) -> u64 {
        self.values[pool as usize][day]
    }

    pub fn row(&self, pool: u32) -> &[u64] {
        &self.values[pool as usize]
    }

    pub fn column_sum(&self, day: usize) -> u64 {
        self.values.iter().map(|row| row[day]).sum()
    }

    pub fn total(&self) -> u64 {
        self.values.iter().flatten().sum()
    }

    pub fn max(&self) -> u64 {
        self.values.iter().flatten().copied().max().unwrap_or(0)
    }
}

/// Pool every in-bounds point of each day into its patch.
pub fn compute_footmap_days<S: Real>(
    scene: &SceneConfig,
    days: &[DayRecord<S>],
) -> (Footmap, BoundsTally) {
    let pools = scene.pool_count();
    let pools_x = scene.pools_x() as usize;
    let patch = scene.patch_size as usize;
    let mut values = vec![vec![0u64; days.len()]; pools as usize];
    let mut tally = BoundsTally::default();
    let (w, h) = (
        S::from_config(f64::from(scene.width)),
        S::from_config(f64::from(scene.height)),
    );
    for (d, day) in days.iter().enumerate() {
        for track in &day.tracks {
            for p in track.points() {
                if p.x >= S::zero() && p.x < w && p.y >= S::zero() && p.y < h {
                    let col = p.x.floor().to_usize().unwrap() / patch;
                    let row = p.y.floor().to_usize().unwrap() / patch;
                    values[row * pools_x + col][d] += 1;
                    tally.in_bounds += 1;
                } else {
                    tally.out_of_bounds += 1;
                }
            }
        }
    }
    (
        Footmap {
            pool_count: pools,
            day_dates: days.iter().map(|d| d.date).collect(),
            values,
        },
        tally,
    )
}

pub fn compute_footmap<S: Real>(dataset: &Dataset<S>) -> (Footmap, BoundsTally) {
    compute_footmap_days(&dataset.scene, dataset.days())
}
