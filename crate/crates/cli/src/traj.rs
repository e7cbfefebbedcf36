//! `predict-traj`: cluster-likelihood pipeline over sliding weekday windows.

use std::fmt::Write as _;

use trajan::cluster::{membership_csv, representatives_csv, ClusterParams};
use trajan::trajpred::{run_trajectory_pipeline, TrajectoryParams};
use trajan::Result;

use crate::data::{label_str, load_data, report_against_labels};
use crate::output::{atomic_write, Manifest};
use crate::TrajArgs;

pub fn run(args: TrajArgs) -> Result<()> {
    let dataset = load_data(
        &args.data.data,
        args.data.exclude.as_ref(),
        args.data.annotations.as_ref(),
    )?;
    let params = TrajectoryParams {
        cluster: ClusterParams {
            eps: args.eps,
            min_lines: args.min_lines,
            mdl_partition: !args.no_mdl,
            smoothing_gamma: args.smoothing,
            weights: args.weights,
        },
        delta: args.delta,
        lambda: args.lambda,
        omega_days: args.omega,
        stride_days: args.stride,
    };
    let outcome = run_trajectory_pipeline(&dataset, &params)?;
    let out = &args.out.out;

    let mut csv = String::from("date,weekday,n_total,n_ano,psi,predicted,label\n");
    for p in &outcome.predictions {
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            p.date,
            p.date.format("%a"),
            p.total_tracks,
            p.anomalous_tracks,
            p.psi,
            u8::from(p.predicted),
            label_str(p.label)
        )
        .unwrap();
    }
    atomic_write(&out.join(&args.csv), csv.as_bytes())?;

    if args.per_track {
        let mut csv = String::from("date,track_id,cluster,likelihood,distance,anomalous\n");
        for d in &outcome.diagnostics {
            writeln!(
                csv,
                "{},{},{},{},{},{}",
                d.date,
                d.track_id,
                d.result.best_cluster,
                d.result.likelihood,
                d.result.distance,
                u8::from(d.result.anomalous)
            )
            .unwrap();
        }
        atomic_write(&out.join("traj_tracks.csv"), csv.as_bytes())?;
    }

    if args.dump_clusters {
        let dir = out.join("clusters");
        for model in &outcome.models {
            atomic_write(
                &dir.join(format!("{}_representatives.csv", model.test_date)),
                representatives_csv(&model.clusters).as_bytes(),
            )?;
            atomic_write(
                &dir.join(format!("{}_membership.csv", model.test_date)),
                membership_csv(&model.clusters).as_bytes(),
            )?;
        }
    }

    for skip in &outcome.skipped {
        eprintln!("skipped {}: {}", skip.test_date, skip.reason);
    }

    let flagged = outcome.predictions.iter().filter(|p| p.predicted).count();
    Manifest::new("predict-traj")
        .param("data", args.data.data.display())
        .opt_path("exclude", args.data.exclude.as_ref())
        .opt_path("annotations", args.data.annotations.as_ref())
        .param("csv", &args.csv)
        .param("lambda", args.lambda)
        .param("delta", args.delta)
        .param("eps", args.eps)
        .param("min_lines", args.min_lines)
        .param("smoothing", args.smoothing)
        .param(
            "weights",
            format!("{},{},{}", args.weights[0], args.weights[1], args.weights[2]),
        )
        .param("omega", args.omega)
        .param("stride", args.stride)
        .param("mdl", !args.no_mdl)
        .count("days", dataset.len() as u64)
        .count("windows_scored", outcome.predictions.len() as u64)
        .count("windows_skipped", outcome.skipped.len() as u64)
        .count("days_flagged", flagged as u64)
        .write(out)?;

    println!(
        "scored {} windows ({} skipped), flagged {flagged}",
        outcome.predictions.len(),
        outcome.skipped.len()
    );
    let rows: Vec<_> = outcome
        .predictions
        .iter()
        .map(|p| (p.date, p.predicted, p.label))
        .collect();
    report_against_labels(&rows);
    Ok(())
}
