//! Scene configuration: pixel dimensions, video length, pooling patch size.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const DEFAULT_DURATION_MINUTES: u32 = 30;
pub const DEFAULT_PATCH_SIZE: u32 = 80;
pub const DEFAULT_FRAME_RATE: f64 = 1.0;

/// Static facts about the monitored scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    /// Scene width in pixels.
    pub width: u32,
    /// Scene height in pixels.
    pub height: u32,
    /// Nominal video length per day, minutes.
    #[serde(default = "default_duration")]
    pub duration_minutes: u32,
    /// Side of the square pooling patch, pixels. Must divide both dimensions.
    #[serde(default = "default_patch")]
    pub patch_size: u32,
    /// Frames per second used to map frame indices to wall-clock seconds.
    #[serde(default = "default_fps")]
    pub frame_rate: f64,
}

fn default_duration() -> u32 {
    DEFAULT_DURATION_MINUTES
}

fn default_patch() -> u32 {
    DEFAULT_PATCH_SIZE
}

fn default_fps() -> f64 {
    DEFAULT_FRAME_RATE
}

impl SceneConfig {
    pub fn new(width: u32, height: u32, duration_minutes: u32, patch_size: u32) -> Result<Self> {
        SceneConfig {
            width,
            height,
            duration_minutes,
            patch_size,
            frame_rate: DEFAULT_FRAME_RATE,
        }
        .validated()
    }

    /// 30-minute day, 80 px patches, 1 fps.
    pub fn with_defaults(width: u32, height: u32) -> Result<Self> {
        SceneConfig::new(width, height, DEFAULT_DURATION_MINUTES, DEFAULT_PATCH_SIZE)
    }

    pub fn frame_rate(mut self, fps: f64) -> Result<Self> {
        self.frame_rate = fps;
        self.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::Config("scene dimensions must be positive".into()));
        }
        if self.duration_minutes == 0 {
            return Err(Error::Config("duration_minutes must be positive".into()));
        }
        if self.patch_size == 0 {
            return Err(Error::Config("patch_size must be positive".into()));
        }
        if !self.width.is_multiple_of(self.patch_size) || !self.height.is_multiple_of(self.patch_size) {
            return Err(Error::Config(format!(
                "patch_size {} must divide width {} and height {}",
                self.patch_size, self.width, self.height
            )));
        }
        if !(self.frame_rate.is_finite() && self.frame_rate > 0.0) {
            return Err(Error::Config("frame_rate must be positive".into()));
        }
        Ok(self)
    }

    /// Patches per row.
    pub fn pools_x(&self) -> u32 {
        self.width / self.patch_size
    }

    /// Patches per column.
    pub fn pools_y(&self) -> u32 {
        self.height / self.patch_size
    }

    /// Total pool count, row-major over the patch grid.
    pub fn pool_count(&self) -> u32 {
        self.pools_x() * self.pools_y()
    }

    /// Total frames in one nominal day.
    pub fn frames_per_day(&self) -> u64 {
        (self.duration_minutes as f64 * 60.0 * self.frame_rate).round() as u64
    }

    /// Parse the `scene.toml` key/value format.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SceneConfig = toml::from_str(text)
            .map_err(|e| Error::Config(format!("scene config: {e}")))?;
        cfg.validated()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scene config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_indivisible_patch() {
        assert!(SceneConfig::new(100, 100, 30, 80).is_err());
        assert!(SceneConfig::new(160, 160, 30, 80).is_ok());
    }

    #[test]
    fn toml_roundtrip_with_defaults() {
        let cfg = SceneConfig::from_toml("width = 640\nheight = 480\n").unwrap();
        assert_eq!(cfg.duration_minutes, 30);
        assert_eq!(cfg.patch_size, 80);
        assert_eq!(cfg.frame_rate, 1.0);
        assert_eq!(cfg.pool_count(), 48);
        let back = SceneConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(SceneConfig::from_toml("width = 640\nheight = 480\nwdith = 3\n").is_err());
    }
}
