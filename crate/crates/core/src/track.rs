//! Track domain types: one moving object's centroid path within a day.

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::Real;

/// One centroid observation: frame index plus pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackPoint<S> {
    pub frame: u32,
    pub x: S,
    pub y: S,
}

impl<S: Real> TrackPoint<S> {
    pub fn new(frame: u32, x: S, y: S) -> Self {
        TrackPoint { frame, x, y }
    }

    pub fn pos(&self) -> Point<S> {
        Point::new(self.x, self.y)
    }
}

/// An ordered centroid sequence for one object, unique by id within its day.
///
/// Invariants enforced at construction: at least two points, strictly
/// increasing frame indices, finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Track<S> {
    id: String,
    points: Vec<TrackPoint<S>>,
}

impl<S: Real> Track<S> {
    pub fn new(id: impl Into<String>, points: Vec<TrackPoint<S>>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() || id.contains(',') {
            return Err(Error::InvalidInput(format!(
                "track id {id:?} must be a non-empty token without commas"
            )));
        }
        if points.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "track {id} has {} point(s); at least 2 required",
                points.len()
            )));
        }
        for p in &points {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "track {id} has a non-finite coordinate at frame {}",
                    p.frame
                )));
            }
        }
        for w in points.windows(2) {
            if w[1].frame <= w[0].frame {
                return Err(Error::InvalidInput(format!(
                    "track {id}: frame indices not strictly increasing ({} then {})",
                    w[0].frame, w[1].frame
                )));
            }
        }
        Ok(Track { id, points })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn points(&self) -> &[TrackPoint<S>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least two points
    }

    pub fn positions(&self) -> impl Iterator<Item = Point<S>> + '_ {
        self.points.iter().map(|p| p.pos())
    }

    pub fn first_frame(&self) -> u32 {
        self.points[0].frame
    }

    pub fn last_frame(&self) -> u32 {
        self.points[self.points.len() - 1].frame
    }

    /// Same geometry shifted by (dx, dy); frames unchanged.
    pub fn translated(&self, dx: S, dy: S) -> Track<S> {
        Track {
            id: self.id.clone(),
            points: self
                .points
                .iter()
                .map(|p| TrackPoint::new(p.frame, p.x + dx, p.y + dy))
                .collect(),
        }
    }
}
