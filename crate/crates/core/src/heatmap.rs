//! Scene-wide point accumulation.
//!
//! Every in-bounds track point increments one pixel cell; the resulting grid
//! is what the log-scaled renderer visualizes.

use crate::day::{DayRecord, Dataset};
use crate::scalar::Real;
use crate::scene::SceneConfig;

/// Dense per-pixel point counts, row-major with row = y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeatmapGrid {
    width: u32,
    height: u32,
    counts: Vec<u64>,
}

impl HeatmapGrid {
    pub fn zeros(width: u32, height: u32) -> Self {
        HeatmapGrid {
            width,
            height,
            counts: vec![0; width as usize * height as usize],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn at(&self, row: u32, col: u32) -> u64 {
        self.counts[row as usize * self.width as usize + col as usize]
    }

    /// Row-major cell counts (row = y, col = x).
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn max(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.counts.chunks(self.width as usize)
    }
}

/// How many points landed inside vs. outside the scene rectangle.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BoundsTally {
    pub in_bounds: u64,
    pub out_of_bounds: u64,
}

/// Bin every track point of `days` into pixel cell (⌊y⌋, ⌊x⌋).
/// Out-of-bounds points are skipped and tallied.
pub fn accumulate_heatmap_days<S: Real>(
    scene: &SceneConfig,
    days: &[DayRecord<S>],
) -> (HeatmapGrid, BoundsTally) {
    let mut grid = HeatmapGrid::zeros(scene.width, scene.height);
    let mut tally = BoundsTally::default();
    let (w, h) = (
        S::from_config(f64::from(scene.width)),
        S::from_config(f64::from(scene.height)),
    );
    for day in days {
        for track in &day.tracks {
            for p in track.points() {
                if p.x >= S::zero() && p.x < w && p.y >= S::zero() && p.y < h {
                    let col = p.x.floor().to_usize().unwrap();
                    let row = p.y.floor().to_usize().unwrap();
                    grid.counts[row * scene.width as usize + col] += 1;
                    tally.in_bounds += 1;
                } else {
                    tally.out_of_bounds += 1;
                }
            }
        }
    }
    (grid, tally)
}

pub fn accumulate_heatmap<S: Real>(dataset: &Dataset<S>) -> (HeatmapGrid, BoundsTally) {
    accumulate_heatmap_days(&dataset.scene, dataset.days())
}
