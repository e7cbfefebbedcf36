//! Plain-text interchange: day CSVs, annotation lists, exclusion lists.
//!
//! A day file holds one point per line, `track_id,frame,x,y`, no header.
//! Points for a track may be interleaved with other tracks; within a track
//! frames must be unique. Tracks keep their first-appearance order.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use chrono::NaiveDate;

use crate::day::{DayRecord, Dataset};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::scene::SceneConfig;
use crate::track::{Track, TrackPoint};

/// Non-fatal observations made while parsing a day file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseDiagnostics {
    /// Track ids that had fewer than two points and were dropped.
    pub short_tracks: Vec<String>,
}

/// Parse day-file text. Returns tracks in first-appearance order plus
/// diagnostics for anything silently skipped.
pub fn parse_day_file<S: Real>(text: &str) -> Result<(Vec<Track<S>>, ParseDiagnostics)> {
    let mut order: Vec<String> = Vec::new();
    let mut by_id: HashMap<String, Vec<TrackPoint<S>>> = HashMap::new();
    let mut seen: BTreeSet<(String, u32)> = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let id = fields
            .next()
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| Error::parse(lineno, "missing track id"))?;
        let frame: u32 = next_field(&mut fields, lineno, "frame")?
            .parse()
            .map_err(|_| Error::parse(lineno, "frame is not a non-negative integer"))?;
        let x: S = parse_coord(next_field(&mut fields, lineno, "x")?, lineno)?;
        let y: S = parse_coord(next_field(&mut fields, lineno, "y")?, lineno)?;
        if fields.next().is_some() {
            return Err(Error::parse(lineno, "expected 4 fields: track_id,frame,x,y"));
        }
        if !seen.insert((id.to_string(), frame)) {
            return Err(Error::parse(
                lineno,
                format!("duplicate frame {frame} for track {id}"),
            ));
        }
        match by_id.entry(id.to_string()) {
            Entry::Vacant(e) => {
                order.push(id.to_string());
                e.insert(vec![TrackPoint::new(frame, x, y)]);
            }
            Entry::Occupied(mut e) => e.get_mut().push(TrackPoint::new(frame, x, y)),
        }
    }

    let mut tracks = Vec::with_capacity(order.len());
    let mut diag = ParseDiagnostics::default();
    for id in order {
        let mut points = by_id.remove(&id).unwrap();
        if points.len() < 2 {
            diag.short_tracks.push(id);
            continue;
        }
        points.sort_by_key(|p| p.frame);
        tracks.push(Track::new(id, points)?);
    }
    Ok((tracks, diag))
}

fn next_field<'a>(
    fields: &mut impl Iterator<Item = &'a str>,
    lineno: usize,
    name: &str,
) -> Result<&'a str> {
    fields
        .next()
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| Error::parse(lineno, format!("missing {name}")))
}

fn parse_coord<S: Real>(s: &str, lineno: usize) -> Result<S> {
    let v: S = s
        .parse()
        .map_err(|_| Error::parse(lineno, format!("bad coordinate {s:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(lineno, format!("non-finite coordinate {s:?}")));
    }
    Ok(v)
}

/// Day-file text for `tracks`, in the same dialect `parse_day_file` reads.
/// Coordinates are written with the scalar's shortest round-trip formatting,
/// so parse(serialize(tracks)) reproduces the input exactly.
pub fn serialize_day_file<S: Real>(tracks: &[Track<S>]) -> String {
    let mut out = String::new();
    for track in tracks {
        for p in track.points() {
            out.push_str(track.id());
            out.push(',');
            out.push_str(&p.frame.to_string());
            out.push(',');
            out.push_str(&p.x.to_string());
            out.push(',');
            out.push_str(&p.y.to_string());
            out.push('\n');
        }
    }
    out
}

/// Parse annotation text: `YYYY-MM-DD,label` per line, label 0 or 1.
/// A date listed twice keeps the last entry.
pub fn parse_annotations(text: &str) -> Result<BTreeMap<NaiveDate, bool>> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let (date_s, label_s) = line
            .split_once(',')
            .ok_or_else(|| Error::parse(lineno, "expected date,label"))?;
        let date: NaiveDate = date_s
            .trim()
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad date {:?}", date_s.trim())))?;
        let label = match label_s.trim() {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::parse(lineno, format!("label must be 0 or 1, got {other:?}")))
            }
        };
        map.insert(date, label);
    }
    Ok(map)
}

pub fn load_annotations(path: &Path) -> Result<BTreeMap<NaiveDate, bool>> {
    parse_annotations(&fs::read_to_string(path)?)
}

/// Parse exclusion text: one `YYYY-MM-DD` per line.
pub fn parse_exclusions(text: &str) -> Result<BTreeSet<NaiveDate>> {
    let mut set = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let date: NaiveDate = line
            .parse()
            .map_err(|_| Error::parse(idx + 1, format!("bad date {line:?}")))?;
        set.insert(date);
    }
    Ok(set)
}

pub fn load_exclusions(path: &Path) -> Result<BTreeSet<NaiveDate>> {
    parse_exclusions(&fs::read_to_string(path)?)
}

/// Load a dataset directory: `scene.toml` plus one `YYYY-MM-DD.csv` per day.
/// CSV files whose stem is not a date are ignored (e.g. labels.csv).
pub fn load_dataset_dir<S: Real>(dir: &Path) -> Result<Dataset<S>> {
    let read = |path: &Path| {
        fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
    };

    let mut entries: Vec<_> = fs::read_dir(dir)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", dir.display())))?
        .collect::<std::io::Result<_>>()?;
    entries.sort_by_key(|e| e.file_name());

    let mut days = Vec::new();
    for entry in entries {
        let path = entry.path();
        if path.extension().and_then(|e| e.to_str()) != Some("csv") {
            continue;
        }
        let Some(date) = path
            .file_stem()
            .and_then(|s| s.to_str())
            .and_then(|s| s.parse::<NaiveDate>().ok())
        else {
            continue;
        };
        let (tracks, _diag) = parse_day_file(&read(&path)?).map_err(|e| match e {
            Error::Parse { line, message } => Error::Parse {
                line,
                message: format!("{}: {message}", path.display()),
            },
            other => other,
        })?;
        days.push(DayRecord::new(date, tracks));
    }
    if days.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no day files found in {}",
            dir.display()
        )));
    }

    let scene_path = dir.join("scene.toml");
    let scene = SceneConfig::from_toml(&read(&scene_path)?)
        .map_err(|e| Error::Config(format!("{}: {e}", scene_path.display())))?;
    Dataset::new(scene, days)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_interleaved_tracks_in_appearance_order() {
        let text = "b,0,1.0,2.0\na,0,5.0,6.0\nb,2,3.0,4.0\na,1,7.0,8.0\n";
        let (tracks, diag) = parse_day_file::<f64>(text).unwrap();
        assert!(diag.short_tracks.is_empty());
        assert_eq!(tracks.len(), 2);
        assert_eq!(tracks[0].id(), "b");
        assert_eq!(tracks[1].id(), "a");
        assert_eq!(tracks[0].points()[1].frame, 2);
    }

    #[test]
    fn sorts_frames_within_a_track() {
        let text = "a,5,1.0,1.0\na,2,2.0,2.0\na,9,3.0,3.0\n";
        let (tracks, _) = parse_day_file::<f64>(text).unwrap();
        let frames: Vec<_> = tracks[0].points().iter().map(|p| p.frame).collect();
        assert_eq!(frames, vec![2, 5, 9]);
    }

    #[test]
    fn rejects_duplicate_frame_with_line_number() {
        let text = "a,1,0.0,0.0\na,2,1.0,1.0\na,1,2.0,2.0\n";
        let err = parse_day_file::<f64>(text).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_rows() {
        for bad in [
            "a,1,0.0\n",
            "a,1,0.0,1.0,extra\n",
            "a,-1,0.0,1.0\n",
            "a,x,0.0,1.0\n",
            "a,1,nan,1.0\n",
            ",1,0.0,1.0\n",
        ] {
            assert!(parse_day_file::<f64>(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn drops_single_point_tracks_into_diagnostics() {
        let text = "a,0,0.0,0.0\nb,0,1.0,1.0\nb,1,2.0,2.0\n";
        let (tracks, diag) = parse_day_file::<f64>(text).unwrap();
        assert_eq!(tracks.len(), 1);
        assert_eq!(tracks[0].id(), "b");
        assert_eq!(diag.short_tracks, vec!["a".to_string()]);
    }

    #[test]
    fn serialize_then_parse_is_identity() {
        let text = "a,0,0.5,1.25\na,3,2.0,3.0\nc,1,-4.5,0.0\nc,2,6.0,7.125\n";
        let (tracks, _) = parse_day_file::<f64>(text).unwrap();
        let round = serialize_day_file(&tracks);
        let (again, _) = parse_day_file::<f64>(&round).unwrap();
        assert_eq!(tracks, again);
    }

    #[test]
    fn annotations_parse_and_validate() {
        let map = parse_annotations("2012-01-01,0\n2012-01-02,1\n\n2012-01-01,1\n").unwrap();
        assert_eq!(map.len(), 2);
        assert!(map[&"2012-01-01".parse::<NaiveDate>().unwrap()]);
        assert!(parse_annotations("2012-01-01,2\n").is_err());
        assert!(parse_annotations("notadate,1\n").is_err());
        assert!(parse_annotations("2012-01-01\n").is_err());
    }

    #[test]
    fn exclusions_parse() {
        let set = parse_exclusions("2012-03-01\n2012-01-01\n").unwrap();
        assert_eq!(set.len(), 2);
        assert!(parse_exclusions("garbage\n").is_err());
    }
}
