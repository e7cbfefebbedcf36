//! Confusion-matrix evaluation against day annotations.
//! Anomalous is the positive class throughout.

use std::collections::BTreeMap;

use chrono::NaiveDate;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub true_positives: u64,
    pub false_positives: u64,
    pub false_negatives: u64,
    pub true_negatives: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        ConfusionMatrix {
            true_positives: tp,
            false_positives: fp,
            false_negatives: fn_,
            true_negatives: tn,
        }
    }

    pub fn total(&self) -> u64 {
        self.true_positives + self.false_positives + self.false_negatives + self.true_negatives
    }
}

/// Tally predictions against truth over the dates present in both maps.
/// Days missing from either side are excluded, never assumed typical.
pub fn confusion(
    predictions: &BTreeMap<NaiveDate, bool>,
    truth: &BTreeMap<NaiveDate, bool>,
) -> Result<ConfusionMatrix> {
    let mut cm = ConfusionMatrix::default();
    for (date, &predicted) in predictions {
        let Some(&actual) = truth.get(date) else {
            continue;
        };
        match (predicted, actual) {
            (true, true) => cm.true_positives += 1,
            (true, false) => cm.false_positives += 1,
            (false, true) => cm.false_negatives += 1,
            (false, false) => cm.true_negatives += 1,
        }
    }
    if cm.total() == 0 {
        return Err(Error::InvalidInput(
            "no dates are present in both predictions and truth".into(),
        ));
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Precision, recall, and F1 with 0/0 mapped to 0 rather than 1, so empty
/// predictors earn nothing.
pub fn metrics(cm: &ConfusionMatrix) -> Metrics {
    let tp = cm.true_positives as f64;
    let precision = ratio(tp, tp + cm.false_positives as f64);
    let recall = ratio(tp, tp + cm.false_negatives as f64);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Metrics {
        precision,
        recall,
        f1,
    }
}

fn ratio(num: f64, denom: f64) -> f64 {
    if denom == 0.0 {
        0.0
    } else {
        num / denom
    }
}

/// Round to 2 decimals, halves away from zero (table display convention).
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn date(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    fn days(pairs: &[(&str, bool)]) -> BTreeMap<NaiveDate, bool> {
        pairs.iter().map(|&(d, v)| (date(d), v)).collect()
    }

    #[test]
    fn perfect_and_all_negative_predictors() {
        let truth: BTreeMap<NaiveDate, bool> = (1..=10)
            .map(|i| (date(&format!("2012-01-{i:02}")), i <= 4))
            .collect();
        let cm = confusion(&truth, &truth).unwrap();
        assert_eq!(cm, ConfusionMatrix::new(4, 0, 0, 6));

        let negative: BTreeMap<NaiveDate, bool> =
            truth.keys().map(|d| (*d, false)).collect();
        let cm = confusion(&negative, &truth).unwrap();
        assert_eq!(cm, ConfusionMatrix::new(0, 0, 4, 6));
    }

    #[test]
    fn only_shared_dates_are_scored() {
        let pred = days(&[("2012-01-01", true), ("2012-01-02", false), ("2012-01-03", true)]);
        let truth = days(&[("2012-01-02", true), ("2012-01-03", true), ("2012-01-04", false)]);
        let cm = confusion(&pred, &truth).unwrap();
        assert_eq!(cm, ConfusionMatrix::new(1, 0, 1, 0));
        assert_eq!(cm.total(), 2);

        let disjoint = days(&[("2099-01-01", true)]);
        assert!(confusion(&disjoint, &truth).is_err());
    }

    #[test]
    fn reference_confusion_matrix_metrics() {
        let m = metrics(&ConfusionMatrix::new(50, 110, 7, 46));
        assert_eq!(m.precision, 0.3125);
        assert_eq!(round2(m.precision), 0.31);
        assert_eq!(round2(m.recall), 0.88);
        assert_eq!(round2(m.f1), 0.46);
    }

    #[test]
    fn degenerate_denominators_score_zero() {
        let m = metrics(&ConfusionMatrix::new(0, 0, 0, 10));
        assert_eq!((m.precision, m.recall, m.f1), (0.0, 0.0, 0.0));

        let m = metrics(&ConfusionMatrix::new(1, 0, 0, 0));
        assert_eq!((m.precision, m.recall, m.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(round2(0.455), 0.46);
        assert_eq!(round2(0.125), 0.13);
        assert_eq!(round2(-0.125), -0.13);
        assert_eq!(round2(0.124999), 0.12);
    }
}
