//! `predict-ts` and `sweep-ts`: count-series nearest-neighbor pipeline.

use std::fmt::Write as _;

use trajan::eval::{confusion, metrics, round2};
use trajan::tspred::{count_series, count_series_csv, run_timeseries_pipeline, NNConfig,
    TimeseriesParams, TsPrediction};
use trajan::{Dataset, Result};

use crate::data::{label_str, load_data, report_against_labels};
use crate::output::{atomic_write, Manifest};
use crate::{SweepArgs, TsArgs};

fn predictions_csv(predictions: &[TsPrediction<f64>]) -> String {
    let mut csv = String::from("date,predicted,label,nn_date,nn_distance\n");
    for p in predictions {
        writeln!(
            csv,
            "{},{},{},{},{}",
            p.date,
            u8::from(p.predicted),
            label_str(p.label),
            p.nn_date,
            p.nn_distance
        )
        .unwrap();
    }
    csv
}

fn all_series_csv(dataset: &Dataset, theta: u32) -> Result<String> {
    let series = dataset
        .days()
        .iter()
        .map(|day| {
            count_series::<f64>(
                day,
                theta,
                dataset.scene.frame_rate,
                dataset.scene.duration_minutes,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(count_series_csv(&series))
}

pub fn run_predict(args: TsArgs) -> Result<()> {
    let dataset = load_data(
        &args.data.data,
        args.data.exclude.as_ref(),
        args.data.annotations.as_ref(),
    )?;
    let params = TimeseriesParams {
        theta_seconds: args.theta,
        nn: NNConfig {
            k: args.k,
            band_radius: args.r,
            prune: !args.no_prune,
        },
    };
    let predictions = run_timeseries_pipeline::<f64>(&dataset, &params)?;
    let out = &args.out.out;

    atomic_write(&out.join(&args.csv), predictions_csv(&predictions).as_bytes())?;
    if args.dump_series {
        atomic_write(
            &out.join("count_series.csv"),
            all_series_csv(&dataset, args.theta)?.as_bytes(),
        )?;
    }

    let flagged = predictions.iter().filter(|p| p.predicted).count();
    Manifest::new("predict-ts")
        .param("data", args.data.data.display())
        .opt_path("exclude", args.data.exclude.as_ref())
        .opt_path("annotations", args.data.annotations.as_ref())
        .param("csv", &args.csv)
        .param("theta", args.theta)
        .param("k", args.k)
        .param("r", args.r)
        .param("prune", !args.no_prune)
        .count("days", dataset.len() as u64)
        .count("test_days", predictions.len() as u64)
        .count("days_flagged", flagged as u64)
        .write(out)?;

    println!("scored {} test days, flagged {flagged}", predictions.len());
    let rows: Vec<_> = predictions
        .iter()
        .map(|p| (p.date, p.predicted, p.label))
        .collect();
    report_against_labels(&rows);
    Ok(())
}

pub fn run_sweep(args: SweepArgs) -> Result<()> {
    let dataset = load_data(
        &args.data.data,
        args.data.exclude.as_ref(),
        args.data.annotations.as_ref(),
    )?;
    let out = &args.out.out;

    let mut csv = String::from("r,tp,fp,fn,tn,precision,recall,f1\n");
    for r in 0..=args.r_max {
        let params = TimeseriesParams {
            theta_seconds: args.theta,
            nn: NNConfig {
                k: args.k,
                band_radius: r,
                prune: true,
            },
        };
        let predictions = run_timeseries_pipeline::<f64>(&dataset, &params)?;
        let mut pred_map = std::collections::BTreeMap::new();
        let mut truth_map = std::collections::BTreeMap::new();
        for p in &predictions {
            if let Some(label) = p.label {
                pred_map.insert(p.date, p.predicted);
                truth_map.insert(p.date, label);
            }
        }
        let cm = confusion(&pred_map, &truth_map)?;
        let m = metrics(&cm);
        writeln!(
            csv,
            "{r},{},{},{},{},{},{},{}",
            cm.true_positives,
            cm.false_positives,
            cm.false_negatives,
            cm.true_negatives,
            round2(m.precision),
            round2(m.recall),
            round2(m.f1)
        )
        .unwrap();
    }
    atomic_write(&out.join(&args.csv), csv.as_bytes())?;

    Manifest::new("sweep-ts")
        .param("data", args.data.data.display())
        .opt_path("exclude", args.data.exclude.as_ref())
        .opt_path("annotations", args.data.annotations.as_ref())
        .param("csv", &args.csv)
        .param("theta", args.theta)
        .param("k", args.k)
        .param("r_max", args.r_max)
        .count("days", dataset.len() as u64)
        .count("radii", args.r_max as u64 + 1)
        .write(out)?;

    println!("swept band radii 0..={}", args.r_max);
    Ok(())
}
