//! Pixel ↔ world mapping from two clicked points a known distance apart.

use serde::{Deserialize, Serialize};

use super::ScenarioError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Calibration {
    pub p1_px: [f64; 2],
    pub p2_px: [f64; 2],
    pub distance_m: f64,
    pub image_height_px: f64,
}

impl Calibration {
    pub fn transform(&self) -> Result<PixelTransform, ScenarioError> {
        calibrate(self.p1_px, self.p2_px, self.distance_m, self.image_height_px)
    }
}

/// Uniform scale with the pixel y-axis flipped: the world origin sits at the
/// image's bottom-left corner and world y points up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PixelTransform {
    pub meters_per_px: f64,
    pub image_height_px: f64,
}

impl PixelTransform {
    pub fn to_world(&self, px: [f64; 2]) -> (f64, f64) {
        (
            px[0] * self.meters_per_px,
            (self.image_height_px - px[1]) * self.meters_per_px,
        )
    }

    pub fn to_pixel(&self, x: f64, y: f64) -> [f64; 2] {
        [x / self.meters_per_px, self.image_height_px - y / self.meters_per_px]
    }
}

pub fn calibrate(
    p1_px: [f64; 2],
    p2_px: [f64; 2],
    distance_m: f64,
    image_height_px: f64,
) -> Result<PixelTransform, ScenarioError> {
    let span = (p2_px[0] - p1_px[0]).hypot(p2_px[1] - p1_px[1]);
    let finite = p1_px.iter().chain(&p2_px).all(|v| v.is_finite()) && image_height_px.is_finite();
    if !finite || span <= 0.0 || distance_m <= 0.0 || !distance_m.is_finite() || image_height_px < 0.0 {
        return Err(ScenarioError::DegenerateCalibration);
    }
    Ok(PixelTransform {
        meters_per_px: distance_m / span,
        image_height_px,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn scale_examples() {
        let t = calibrate([0.0, 0.0], [100.0, 0.0], 50.0, 600.0).unwrap();
        assert_eq!(t.meters_per_px, 0.5);
        let t = calibrate([0.0, 0.0], [30.0, 40.0], 100.0, 600.0).unwrap();
        assert_eq!(t.meters_per_px, 2.0);
    }

    #[test]
    fn y_axis_flips() {
        let t = calibrate([0.0, 0.0], [10.0, 0.0], 10.0, 500.0).unwrap();
        assert_eq!(t.to_world([0.0, 500.0]), (0.0, 0.0));
        assert_eq!(t.to_world([0.0, 0.0]), (0.0, 500.0));
    }

    #[test]
    fn degenerate_rejected() {
        assert!(calibrate([3.0, 4.0], [3.0, 4.0], 10.0, 100.0).is_err());
        assert!(calibrate([0.0, 0.0], [1.0, 0.0], 0.0, 100.0).is_err());
        assert!(calibrate([0.0, 0.0], [1.0, 0.0], -5.0, 100.0).is_err());
        assert!(calibrate([0.0, f64::NAN], [1.0, 0.0], 5.0, 100.0).is_err());
    }

    proptest! {
        #[test]
        fn world_pixel_round_trip(
            x in -1e4..1e4f64, y in -1e4..1e4f64,
            span in 1.0..2000.0f64, dist in 0.1..5000.0f64, h in 0.0..8000.0f64,
        ) {
            let t = calibrate([0.0, 0.0], [span, 0.0], dist, h).unwrap();
            let (wx, wy) = t.to_world(t.to_pixel(x, y));
            prop_assert!((wx - x).abs() <= 1e-9 * (1.0 + x.abs()));
            prop_assert!((wy - y).abs() <= 1e-9 * (1.0 + y.abs()));
        }
    }
}
