//! The persisted scenario document.
//!
//! Positions are meters in the calibrated world frame (x east, y north).
//! Bearings are compass degrees, clockwise from north. Truck and turntable
//! parameters are kept in the units site engineers quote them in.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::calibration::{calibrate, Calibration};
use super::ScenarioError;
use crate::cost::{FuelRates, OperatingSchedule, TruckParams, WearRates};
use crate::geometry::{wrap, DirectedPoint};
use crate::trip::RouteId;
use crate::turntable::TurntableSpec;

pub const SCHEMA_VERSION: u32 = 1;

/// Math heading (radians, counterclockwise from east) for a compass bearing.
pub fn bearing_to_heading(bearing_deg: f64) -> f64 {
    wrap((90.0 - bearing_deg).to_radians())
}

/// Compass bearing in `[0, 360)` for a math heading.
pub fn heading_to_bearing(heading: f64) -> f64 {
    let b = (90.0 - heading.to_degrees()).rem_euclid(360.0);
    if b >= 360.0 {
        0.0
    } else {
        b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub bearing_deg: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, bearing_deg: f64) -> Self {
        Self { x, y, bearing_deg }
    }

    pub fn to_directed(&self) -> DirectedPoint {
        DirectedPoint::new(self.x, self.y, bearing_to_heading(self.bearing_deg))
    }

    pub fn from_directed(p: &DirectedPoint) -> Self {
        Self {
            x: p.x,
            y: p.y,
            bearing_deg: heading_to_bearing(p.heading),
        }
    }

    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.bearing_deg.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruckParameters {
    pub max_forward_speed_kmh: f64,
    pub max_reverse_speed_kmh: f64,
    pub acceleration_mps2: f64,
    pub deceleration_mps2: f64,
    pub tipping_duration_s: f64,
    pub turning_radius_m: f64,
    pub fuel_forward_cruise_lph: f64,
    pub fuel_reverse_cruise_lph: f64,
    pub fuel_forward_accel_lph: f64,
    pub fuel_reverse_accel_lph: f64,
    pub fuel_decel_idle_lph: f64,
    pub fuel_tipping_lph: f64,
    pub tyre_wear_loaded_mmph: f64,
    pub tyre_wear_empty_mmph: f64,
}

impl Default for TruckParameters {
    fn default() -> Self {
        Self {
            max_forward_speed_kmh: 10.0,
            max_reverse_speed_kmh: 2.5,
            acceleration_mps2: 0.5,
            deceleration_mps2: 1.8,
            tipping_duration_s: 40.0,
            turning_radius_m: 28.4,
            fuel_forward_cruise_lph: 150.0,
            fuel_reverse_cruise_lph: 205.0,
            fuel_forward_accel_lph: 361.0,
            fuel_reverse_accel_lph: 395.0,
            fuel_decel_idle_lph: 53.7,
            fuel_tipping_lph: 211.7,
            tyre_wear_loaded_mmph: 0.0231,
            tyre_wear_empty_mmph: 0.0119,
        }
    }
}

impl TruckParameters {
    pub fn to_params(&self) -> TruckParams {
        TruckParams {
            v_fwd_max: self.max_forward_speed_kmh / 3.6,
            v_rev_max: self.max_reverse_speed_kmh / 3.6,
            accel: self.acceleration_mps2,
            decel: self.deceleration_mps2,
            tipping_duration: self.tipping_duration_s,
            turning_radius: self.turning_radius_m,
            fuel: FuelRates {
                cruise_fwd: self.fuel_forward_cruise_lph,
                cruise_rev: self.fuel_reverse_cruise_lph,
                accel_fwd: self.fuel_forward_accel_lph,
                accel_rev: self.fuel_reverse_accel_lph,
                decel_or_idle: self.fuel_decel_idle_lph,
                tipping: self.fuel_tipping_lph,
            },
            wear: WearRates {
                loaded: self.tyre_wear_loaded_mmph,
                empty: self.tyre_wear_empty_mmph,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TurntableParameters {
    pub max_angular_speed_dps: f64,
    pub angular_accel_dps2: f64,
    pub diameter_m: f64,
}

impl Default for TurntableParameters {
    fn default() -> Self {
        Self {
            max_angular_speed_dps: 6.0,
            angular_accel_dps2: 1.2,
            diameter_m: 15.0,
        }
    }
}

impl TurntableParameters {
    /// Turntable seated at a dump point; the truck leaves along the dump bearing.
    pub fn at(&self, dump: &DirectedPoint) -> TurntableSpec {
        TurntableSpec {
            center: dump.position(),
            exit_heading: dump.heading,
            diameter: self.diameter_m,
            max_angular_speed: self.max_angular_speed_dps.to_radians(),
            angular_accel: self.angular_accel_dps2.to_radians(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryExitPair {
    pub label: String,
    pub entry: Pose,
    pub exit: Pose,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DumpPoint {
    pub label: String,
    /// Bearing is the direction the truck drives off after tipping.
    pub pose: Pose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Section {
    Inbound,
    Outbound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Waypoint {
    pub route_id: RouteId,
    pub section: Section,
    /// Order within the section; lower indices are visited first.
    pub index: u32,
    pub pose: Pose,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReverseOverride {
    pub route_id: RouteId,
    pub pose: Pose,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub image_ref: Option<String>,
    #[serde(default)]
    pub calibration: Option<Calibration>,
    #[serde(default)]
    pub truck: TruckParameters,
    #[serde(default)]
    pub turntable: TurntableParameters,
    #[serde(default)]
    pub schedule: OperatingSchedule,
    #[serde(default)]
    pub entry_exit_pairs: Vec<EntryExitPair>,
    #[serde(default)]
    pub dump_points: Vec<DumpPoint>,
    #[serde(default)]
    pub waypoints: Vec<Waypoint>,
    #[serde(default)]
    pub reverse_overrides: Vec<ReverseOverride>,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            name: String::new(),
            image_ref: None,
            calibration: None,
            truck: TruckParameters::default(),
            turntable: TurntableParameters::default(),
            schedule: OperatingSchedule::default(),
            entry_exit_pairs: Vec::new(),
            dump_points: Vec::new(),
            waypoints: Vec::new(),
            reverse_overrides: Vec::new(),
        }
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Every (pair, dump) combination, pairs outermost.
    pub fn route_ids(&self) -> impl Iterator<Item = RouteId> + '_ {
        (0..self.entry_exit_pairs.len())
            .flat_map(move |pair| (0..self.dump_points.len()).map(move |dump| RouteId { pair, dump }))
    }

    pub fn has_route(&self, id: RouteId) -> bool {
        id.pair < self.entry_exit_pairs.len() && id.dump < self.dump_points.len()
    }

    /// Waypoint poses for one section of a route, in visiting order.
    pub fn waypoints_for(&self, id: RouteId, section: Section) -> Vec<DirectedPoint> {
        let mut wps: Vec<&Waypoint> = self
            .waypoints
            .iter()
            .filter(|w| w.route_id == id && w.section == section)
            .collect();
        wps.sort_by_key(|w| w.index);
        wps.iter().map(|w| w.pose.to_directed()).collect()
    }

    pub fn reverse_override_for(&self, id: RouteId) -> Option<DirectedPoint> {
        self.reverse_overrides
            .iter()
            .find(|o| o.route_id == id)
            .map(|o| o.pose.to_directed())
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ScenarioError::UnsupportedSchema(self.schema_version));
        }
        if let Some(c) = &self.calibration {
            calibrate(c.p1_px, c.p2_px, c.distance_m, c.image_height_px)?;
        }
        let bad = self.truck.to_params().violations();
        if let Some(first) = bad.first() {
            return Err(ScenarioError::InvalidParameter(format!("truck: {first}")));
        }
        let tt = &self.turntable;
        for (name, v) in [
            ("max_angular_speed_dps", tt.max_angular_speed_dps),
            ("angular_accel_dps2", tt.angular_accel_dps2),
            ("diameter_m", tt.diameter_m),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ScenarioError::InvalidParameter(format!("turntable: {name}")));
            }
        }
        let sch = &self.schedule;
        if sch.trips_per_shift == 0 || sch.shifts_per_day == 0 || sch.days_per_year == 0 {
            return Err(ScenarioError::InvalidParameter(
                "schedule counts must be positive".into(),
            ));
        }

        let poses = self
            .entry_exit_pairs
            .iter()
            .flat_map(|p| [(&p.label, &p.entry), (&p.label, &p.exit)])
            .chain(self.dump_points.iter().map(|d| (&d.label, &d.pose)));
        for (label, pose) in poses {
            if !pose.is_finite() {
                return Err(ScenarioError::NonFinite(label.clone()));
            }
        }

        let mut seen = BTreeSet::new();
        for w in &self.waypoints {
            if !self.has_route(w.route_id) {
                return Err(ScenarioError::UnknownRoute(w.route_id));
            }
            if !w.pose.is_finite() {
                return Err(ScenarioError::NonFinite(format!("waypoint on {}", w.route_id)));
            }
            if !seen.insert((w.route_id, w.section, w.index)) {
                return Err(ScenarioError::DuplicateWaypoint {
                    route_id: w.route_id,
                    index: w.index,
                });
            }
        }
        let mut seen = BTreeSet::new();
        for o in &self.reverse_overrides {
            if !self.has_route(o.route_id) {
                return Err(ScenarioError::UnknownRoute(o.route_id));
            }
            if !o.pose.is_finite() {
                return Err(ScenarioError::NonFinite(format!("reverse override on {}", o.route_id)));
            }
            if !seen.insert(o.route_id) {
                return Err(ScenarioError::DuplicateOverride(o.route_id));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compass_conversion() {
        let cases = [(0.0, 90.0), (90.0, 0.0), (180.0, 270.0), (270.0, 180.0), (45.0, 45.0)];
        for (bearing, math_deg) in cases {
            let h = bearing_to_heading(bearing);
            assert!((h.to_degrees() - math_deg).abs() < 1e-9, "{bearing}");
            assert!((heading_to_bearing(h) - bearing).abs() < 1e-9);
        }
    }

    #[test]
    fn defaults_match_site_table() {
        let p = TruckParameters::default().to_params();
        assert_eq!(p, TruckParams::default());
    }

    #[test]
    fn unknown_route_rejected() {
        let mut s = Scenario::default();
        s.reverse_overrides.push(ReverseOverride {
            route_id: RouteId { pair: 0, dump: 0 },
            pose: Pose::new(0.0, 0.0, 0.0),
        });
        assert!(matches!(s.validate(), Err(ScenarioError::UnknownRoute(_))));
    }

    #[test]
    fn wrong_schema_rejected() {
        let s = Scenario {
            schema_version: 7,
            ..Scenario::default()
        };
        assert!(matches!(s.validate(), Err(ScenarioError::UnsupportedSchema(7))));
    }

    #[test]
    fn unknown_field_is_a_parse_error() {
        let err = Scenario::from_json(r#"{"schema_version": 1, "bogus": 3}"#).unwrap_err();
        assert!(matches!(err, ScenarioError::Parse(_)));
    }

    #[test]
    fn minimal_document_gets_defaults() {
        let s = Scenario::from_json(r#"{"schema_version": 1}"#).unwrap();
        assert_eq!(s, Scenario::default());
    }
}
