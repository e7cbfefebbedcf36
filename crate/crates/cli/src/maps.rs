//! `heatmap` and `footmap`: descriptive accumulation maps.

use trajan::footmap::compute_footmap;
use trajan::heatmap::accumulate_heatmap;
use trajan::render::{
    footmap_csv, footmap_dates_csv, heatmap_csv, render_footmap, render_heatmap_log,
};
use trajan::Result;

use crate::data::load_data;
use crate::output::{atomic_write, Manifest};
use crate::{FootmapArgs, MapArgs};

pub fn run_heatmap(args: MapArgs) -> Result<()> {
    let dataset = load_data(&args.data.data, args.data.exclude.as_ref(), None)?;
    let (grid, tally) = accumulate_heatmap(&dataset);
    let out = &args.out.out;

    atomic_write(&out.join(&args.csv), heatmap_csv(&grid).as_bytes())?;
    atomic_write(&out.join(&args.ppm), &render_heatmap_log(&grid).ppm_bytes())?;

    Manifest::new("heatmap")
        .param("data", args.data.data.display())
        .opt_path("exclude", args.data.exclude.as_ref())
        .param("csv", &args.csv)
        .param("ppm", &args.ppm)
        .count("days", dataset.len() as u64)
        .count("points_in_bounds", tally.in_bounds)
        .count("points_out_of_bounds", tally.out_of_bounds)
        .count("max_cell", grid.max())
        .write(out)?;

    println!(
        "heatmap over {} days: {} points binned, {} out of bounds",
        dataset.len(),
        tally.in_bounds,
        tally.out_of_bounds
    );
    Ok(())
}

pub fn run_footmap(args: FootmapArgs) -> Result<()> {
    let dataset = load_data(&args.data.data, args.data.exclude.as_ref(), None)?;
    let (footmap, tally) = compute_footmap(&dataset);
    let out = &args.out.out;

    atomic_write(&out.join(&args.csv), footmap_csv(&footmap).as_bytes())?;
    atomic_write(&out.join(&args.ppm), &render_footmap(&footmap).ppm_bytes())?;
    atomic_write(&out.join(&args.dates), footmap_dates_csv(&footmap).as_bytes())?;

    Manifest::new("footmap")
        .param("data", args.data.data.display())
        .opt_path("exclude", args.data.exclude.as_ref())
        .param("csv", &args.csv)
        .param("ppm", &args.ppm)
        .param("dates", &args.dates)
        .count("days", footmap.num_days() as u64)
        .count("pools", u64::from(footmap.pool_count()))
        .count("points_in_bounds", tally.in_bounds)
        .count("points_out_of_bounds", tally.out_of_bounds)
        .write(out)?;

    println!(
        "footmap {} pools x {} days: {} points pooled",
        footmap.pool_count(),
        footmap.num_days(),
        tally.in_bounds
    );
    Ok(())
}
