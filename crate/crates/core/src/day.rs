//! Day-granularity containers: one record per calendar day, a dataset per scene.

use std::collections::BTreeSet;

use chrono::{Datelike, NaiveDate, Weekday};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::scene::SceneConfig;
use crate::track::Track;

/// All tracks observed on one calendar day, with an optional anomaly label.
#[derive(Debug, Clone, PartialEq)]
pub struct DayRecord<S> {
    pub date: NaiveDate,
    pub tracks: Vec<Track<S>>,
    /// Ground truth: `true` = anomalous day, `false` = typical. Absent when unannotated.
    pub label: Option<bool>,
}

impl<S: Real> DayRecord<S> {
    pub fn new(date: NaiveDate, tracks: Vec<Track<S>>) -> Self {
        DayRecord {
            date,
            tracks,
            label: None,
        }
    }

    /// Weekday derived from the date.
    pub fn weekday(&self) -> Weekday {
        self.date.weekday()
    }

    pub fn total_points(&self) -> usize {
        self.tracks.iter().map(|t| t.len()).sum()
    }
}

/// A scene plus its day records, sorted ascending by date with unique dates.
/// Calendar gaps are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<S> {
    pub scene: SceneConfig,
    days: Vec<DayRecord<S>>,
}

impl<S: Real> Dataset<S> {
    pub fn new(scene: SceneConfig, mut days: Vec<DayRecord<S>>) -> Result<Self> {
        days.sort_by_key(|d| d.date);
        for w in days.windows(2) {
            if w[0].date == w[1].date {
                return Err(Error::InvalidInput(format!(
                    "duplicate day record for {}",
                    w[0].date
                )));
            }
        }
        Ok(Dataset { scene, days })
    }

    pub fn days(&self) -> &[DayRecord<S>] {
        &self.days
    }

    pub fn len(&self) -> usize {
        self.days.len()
    }

    pub fn is_empty(&self) -> bool {
        self.days.is_empty()
    }

    pub fn day(&self, date: NaiveDate) -> Option<&DayRecord<S>> {
        self.days
            .binary_search_by_key(&date, |d| d.date)
            .ok()
            .map(|i| &self.days[i])
    }

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.days.iter().map(|d| d.date)
    }

    /// Attach labels from an annotation map; unlisted dates stay unlabeled.
    pub fn with_labels(mut self, labels: &std::collections::BTreeMap<NaiveDate, bool>) -> Self {
        for day in &mut self.days {
            if let Some(&l) = labels.get(&day.date) {
                day.label = Some(l);
            }
        }
        self
    }
}

/// A copy of `dataset` without the excluded dates. Excluding an absent date
/// is a no-op; the input is left untouched.
pub fn filter_days<S: Real>(dataset: &Dataset<S>, exclusion: &BTreeSet<NaiveDate>) -> Dataset<S> {
    Dataset {
        scene: dataset.scene.clone(),
        days: dataset
            .days
            .iter()
            .filter(|d| !exclusion.contains(&d.date))
            .cloned()
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::track::TrackPoint;

    fn date(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    fn track(id: &str) -> Track<f64> {
        Track::new(
            id,
            vec![TrackPoint::new(0, 1.0, 1.0), TrackPoint::new(1, 2.0, 2.0)],
        )
        .unwrap()
    }

    fn dataset(dates: &[&str]) -> Dataset<f64> {
        let scene = SceneConfig::with_defaults(160, 160).unwrap();
        let days = dates
            .iter()
            .map(|d| DayRecord::new(date(d), vec![track("t1")]))
            .collect();
        Dataset::new(scene, days).unwrap()
    }

    #[test]
    fn sorts_days_and_rejects_duplicates() {
        let ds = dataset(&["2012-01-03", "2012-01-01", "2012-01-02"]);
        let got: Vec<_> = ds.dates().collect();
        assert_eq!(
            got,
            vec![date("2012-01-01"), date("2012-01-02"), date("2012-01-03")]
        );

        let scene = SceneConfig::with_defaults(160, 160).unwrap();
        let dup = vec![
            DayRecord::<f64>::new(date("2012-01-01"), vec![]),
            DayRecord::new(date("2012-01-01"), vec![]),
        ];
        assert!(Dataset::new(scene, dup).is_err());
    }

    #[test]
    fn filter_removes_listed_dates_only() {
        let ds = dataset(&["2012-01-01", "2012-01-02", "2012-01-03"]);
        let excl: BTreeSet<_> = [date("2012-01-02"), date("2099-01-01")].into();
        let filtered = filter_days(&ds, &excl);
        assert_eq!(filtered.len(), 2);
        assert_eq!(ds.len(), 3);

        let empty = filter_days(&ds, &BTreeSet::new());
        assert_eq!(&empty, &ds);

        let one = dataset(&["2012-01-01"]);
        let gone = filter_days(&one, &[date("2012-01-01")].into());
        assert!(gone.is_empty());
    }

    #[test]
    fn filter_composes_over_set_union() {
        let ds = dataset(&[
            "2012-01-01",
            "2012-01-02",
            "2012-01-03",
            "2012-01-04",
            "2012-01-05",
        ]);
        let a: BTreeSet<_> = [date("2012-01-02"), date("2012-01-04")].into();
        let b: BTreeSet<_> = [date("2012-01-04"), date("2012-01-05")].into();
        let union: BTreeSet<_> = a.union(&b).cloned().collect();
        assert_eq!(
            filter_days(&ds, &union),
            filter_days(&filter_days(&ds, &a), &b)
        );
    }

    #[test]
    fn weekday_matches_date() {
        let day = DayRecord::<f64>::new(date("2012-01-02"), vec![]);
        assert_eq!(day.weekday(), Weekday::Mon);
    }
}
