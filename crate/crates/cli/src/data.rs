//! Dataset loading shared by the analysis subcommands.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use trajan::day::filter_days;
use trajan::eval::{metrics, round2, ConfusionMatrix};
use trajan::io::{load_annotations, load_exclusions, load_dataset_dir};
use trajan::{Dataset, Error, Result};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

/// Load a dataset directory, drop excluded dates, and attach day labels.
/// Labels come from `annotations` when given, else from `labels.csv` inside
/// the dataset directory when present.
pub fn load_data(
    dir: &Path,
    exclude: Option<&PathBuf>,
    annotations: Option<&PathBuf>,
) -> Result<Dataset> {
    let mut dataset: Dataset = load_dataset_dir(dir)?;
    if let Some(path) = exclude {
        let drop = load_exclusions(path)?;
        dataset = filter_days(&dataset, &drop);
    }
    let label_file = annotations.cloned().or_else(|| {
        let default = dir.join("labels.csv");
        default.is_file().then_some(default)
    });
    if let Some(path) = label_file {
        let labels = load_annotations(&path)?;
        dataset = dataset.with_labels(&labels);
    }
    Ok(dataset)
}

pub fn label_str(label: Option<bool>) -> &'static str {
    match label {
        Some(true) => "1",
        Some(false) => "0",
        None => "",
    }
}

pub fn print_confusion(cm: &ConfusionMatrix) {
    let m = metrics(cm);
    println!("tp {}", cm.true_positives);
    println!("fp {}", cm.false_positives);
    println!("fn {}", cm.false_negatives);
    println!("tn {}", cm.true_negatives);
    println!("precision {}", round2(m.precision));
    println!("recall {}", round2(m.recall));
    println!("f1 {}", round2(m.f1));
}

/// Score labeled predictions and print the confusion matrix; quietly skip
/// when nothing is labeled.
pub fn report_against_labels(rows: &[(NaiveDate, bool, Option<bool>)]) {
    let mut predictions = BTreeMap::new();
    let mut truth = BTreeMap::new();
    for &(date, predicted, label) in rows {
        if let Some(actual) = label {
            predictions.insert(date, predicted);
            truth.insert(date, actual);
        }
    }
    match trajan::eval::confusion(&predictions, &truth) {
        Ok(cm) => print_confusion(&cm),
        Err(_) => eprintln!("no labeled days to score"),
    }
}
