//! Log-scaled jet rendering of count matrices, plus PPM/CSV serialization.

use crate::footmap::Footmap;
use crate::heatmap::HeatmapGrid;

/// ln(1+count) normalized by ln(1+max), in [0,1]. An all-zero matrix has
/// max = 0 and maps everything to 0.
pub fn log_intensity(count: u64, max: u64) -> f64 {
    if max == 0 {
        return 0.0;
    }
    (1.0 + count as f64).ln() / (1.0 + max as f64).ln()
}

/// Piecewise-linear jet colormap over t ∈ [0,1]:
/// blue, cyan, green, yellow, red at t = 0, ¼, ½, ¾, 1.
pub fn jet(t: f64) -> [u8; 3] {
    const KNOTS: [[f64; 3]; 5] = [
        [0.0, 0.0, 1.0],
        [0.0, 1.0, 1.0],
        [0.0, 1.0, 0.0],
        [1.0, 1.0, 0.0],
        [1.0, 0.0, 0.0],
    ];
    let t = t.clamp(0.0, 1.0) * 4.0;
    let i = (t.floor() as usize).min(3);
    let f = t - i as f64;
    let mut rgb = [0u8; 3];
    for c in 0..3 {
        let v = KNOTS[i][c] + (KNOTS[i + 1][c] - KNOTS[i][c]) * f;
        rgb[c] = (v * 255.0).round() as u8;
    }
    rgb
}

/// Simple packed RGB image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageRgb {
    pub width: u32,
    pub height: u32,
    /// Row-major pixels, top row first.
    pub pixels: Vec<[u8; 3]>,
}

impl ImageRgb {
    /// Binary PPM (P6) encoding.
    pub fn ppm_bytes(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.reserve(self.pixels.len() * 3);
        for p in &self.pixels {
            out.extend_from_slice(p);
        }
        out
    }
}

fn render_counts<'a>(
    width: u32,
    height: u32,
    max: u64,
    counts: impl Iterator<Item = &'a u64>,
) -> ImageRgb {
    ImageRgb {
        width,
        height,
        pixels: counts.map(|&c| jet(log_intensity(c, max))).collect(),
    }
}

/// One pixel per scene cell, log-normalized jet coloring.
pub fn render_heatmap_log(grid: &HeatmapGrid) -> ImageRgb {
    render_counts(grid.width(), grid.height(), grid.max(), grid.counts().iter())
}

/// One pixel per (pool, day) cell: rows = pools, columns = days.
pub fn render_footmap(footmap: &Footmap) -> ImageRgb {
    let max = footmap.max();
    let pools = footmap.pool_count();
    render_counts(
        footmap.num_days() as u32,
        pools,
        max,
        (0..pools).flat_map(|p| footmap.row(p).iter()),
    )
}

/// Raw counts as a CSV matrix, one scene row per line.
pub fn heatmap_csv(grid: &HeatmapGrid) -> String {
    let mut out = String::new();
    for row in grid.rows() {
        push_row(&mut out, row);
    }
    out
}

/// Raw counts as a CSV matrix, one pool per line, one column per day.
pub fn footmap_csv(footmap: &Footmap) -> String {
    let mut out = String::new();
    for pool in 0..footmap.pool_count() {
        push_row(&mut out, footmap.row(pool));
    }
    out
}

/// Sidecar for `footmap_csv`: `column,date` per line, with a header.
pub fn footmap_dates_csv(footmap: &Footmap) -> String {
    let mut out = String::from("column,date\n");
    for (i, date) in footmap.day_dates().iter().enumerate() {
        out.push_str(&format!("{i},{date}\n"));
    }
    out
}

fn push_row(out: &mut String, row: &[u64]) {
    for (i, v) in row.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&v.to_string());
    }
    out.push('\n');
}
