//! `synth`: generate a labeled dataset directory from a generator spec.

use trajan::io::serialize_day_file;
use trajan::synth::{generate_synthetic_dataset, SynthSpec};
use trajan::{Dataset, Result};

use crate::data::read_text;
use crate::output::{atomic_write, Manifest};
use crate::SynthArgs;

pub fn run(args: SynthArgs) -> Result<()> {
    let default_start = "2012-01-02".parse().expect("valid date");
    let mut spec = match &args.spec {
        Some(path) => SynthSpec::from_toml(&read_text(path)?)?,
        None if args.four_lanes => SynthSpec::demo_four_lanes(default_start, 28),
        None => SynthSpec::demo_two_lanes(default_start, 28),
    };
    if let Some(days) = args.days {
        spec.num_days = days;
    }
    if let Some(start) = args.start {
        spec.start_date = start;
    }
    spec.validate()?;

    let dataset: Dataset = generate_synthetic_dataset(&spec, args.seed)?;
    let out = &args.out.out;

    atomic_write(&out.join("scene.toml"), spec.scene.to_toml().as_bytes())?;
    atomic_write(&out.join("spec.toml"), spec.to_toml().as_bytes())?;

    let mut labels = String::new();
    let mut tracks = 0u64;
    let mut points = 0u64;
    for day in dataset.days() {
        let name = format!("{}.csv", day.date);
        atomic_write(&out.join(name), serialize_day_file(&day.tracks).as_bytes())?;
        tracks += day.tracks.len() as u64;
        points += day.total_points() as u64;
        if let Some(label) = day.label {
            labels.push_str(&format!("{},{}\n", day.date, u8::from(label)));
        }
    }
    atomic_write(&out.join("labels.csv"), labels.as_bytes())?;

    Manifest::new("synth")
        .param("seed", args.seed)
        .param("days", spec.num_days)
        .param("start", spec.start_date)
        .opt_path("spec", args.spec.as_ref())
        .param("four_lanes", args.four_lanes)
        .count("days", dataset.len() as u64)
        .count("tracks", tracks)
        .count("points", points)
        .write(out)?;

    println!(
        "wrote {} days ({tracks} tracks, {points} points) to {}",
        dataset.len(),
        out.display()
    );
    Ok(())
}
