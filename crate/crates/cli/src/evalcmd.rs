//! `eval`: confusion matrix and metrics from prediction and truth CSVs.

use std::collections::BTreeMap;
use std::path::Path;

use chrono::NaiveDate;
use trajan::eval::{confusion, metrics, round2};
use trajan::io::parse_annotations;
use trajan::{Error, Result};

use crate::data::{print_confusion, read_text};
use crate::output::{atomic_write, Manifest};
use crate::EvalArgs;

/// Read a per-day binary CSV. With a header, the date column plus the first
/// column named in `prefer` are used and blank values skip the row; without
/// one the bare `date,label` annotation format applies. Duplicate dates keep
/// the last row.
fn parse_binary_csv(
    text: &str,
    prefer: &[&str],
    path: &Path,
) -> Result<BTreeMap<NaiveDate, bool>> {
    let at = |lineno: usize, message: String| {
        Error::InvalidInput(format!("{}:{lineno}: {message}", path.display()))
    };
    let header = text
        .lines()
        .next()
        .map(|line| line.split(',').map(str::trim).collect::<Vec<_>>())
        .unwrap_or_default();
    if !header.contains(&"date") {
        return parse_annotations(text)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())));
    }

    let date_col = header.iter().position(|&f| f == "date").unwrap();
    let value_col = prefer
        .iter()
        .find_map(|name| header.iter().position(|f| f == name))
        .ok_or_else(|| at(1, format!("no column named one of {prefer:?}")))?;

    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate().skip(1) {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() <= date_col.max(value_col) {
            return Err(at(lineno, format!("expected {} fields", header.len())));
        }
        let date: NaiveDate = fields[date_col]
            .parse()
            .map_err(|_| at(lineno, format!("bad date {:?}", fields[date_col])))?;
        let value = match fields[value_col] {
            "" => continue,
            "0" => false,
            "1" => true,
            other => return Err(at(lineno, format!("bad binary value {other:?}"))),
        };
        map.insert(date, value);
    }
    Ok(map)
}

pub fn run(args: EvalArgs) -> Result<()> {
    let predictions = parse_binary_csv(
        &read_text(&args.pred)?,
        &["predicted", "label"],
        &args.pred,
    )?;
    let truth = parse_binary_csv(&read_text(&args.truth)?, &["label", "predicted"], &args.truth)?;
    let cm = confusion(&predictions, &truth)?;
    let m = metrics(&cm);
    print_confusion(&cm);

    let out = &args.out.out;
    let csv = format!(
        "tp,fp,fn,tn,precision,recall,f1\n{},{},{},{},{},{},{}\n",
        cm.true_positives,
        cm.false_positives,
        cm.false_negatives,
        cm.true_negatives,
        round2(m.precision),
        round2(m.recall),
        round2(m.f1)
    );
    atomic_write(&out.join(&args.csv), csv.as_bytes())?;

    Manifest::new("eval")
        .param("pred", args.pred.display())
        .param("truth", args.truth.display())
        .param("csv", &args.csv)
        .count("tp", cm.true_positives)
        .count("fp", cm.false_positives)
        .count("fn", cm.false_negatives)
        .count("tn", cm.true_negatives)
        .write(out)?;
    Ok(())
}
