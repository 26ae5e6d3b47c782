//! Approaches onto a turntable and turntable rotation timing.
//!
//! A truck may drive onto the turntable heading anywhere within the half-plane
//! of directions facing the crusher; the turntable then swings it round so it
//! can leave along `exit_heading`, directly away from the crusher.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::dubins::{pick_shortest, shortest_csc, solve_point_target, DubinsCandidate, PointCandidate};
use crate::geometry::{angle_diff, DirectedPoint, PathPlan};
use crate::PlanError;

const ADMISSIBLE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurntableSpec {
    pub center: (f64, f64),
    /// Heading of a truck driving straight off the turntable, away from the crusher.
    pub exit_heading: f64,
    pub diameter: f64,
    /// rad/s
    pub max_angular_speed: f64,
    /// rad/s², used for both speeding up and slowing down
    pub angular_accel: f64,
}

impl TurntableSpec {
    pub fn exit_pose(&self) -> DirectedPoint {
        DirectedPoint::new(self.center.0, self.center.1, self.exit_heading)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurntableApproach {
    pub plan: PathPlan,
    pub entry_heading: f64,
    pub rotation_angle: f64,
    pub used_fallback: bool,
    pub total_length: f64,
}

/// Whether a truck arriving with `entry_heading` can be turned to leave along
/// `exit_heading`: the entry must be within a quarter turn of heading straight
/// at the crusher (boundary included).
pub fn admissible_entry(entry_heading: f64, exit_heading: f64) -> bool {
    angle_diff(entry_heading, exit_heading + PI).abs() <= FRAC_PI_2 + ADMISSIBLE_EPS
}

/// Smallest absolute rotation taking `entry_heading` to `exit_heading`, in `[0, π]`.
pub fn rotation_between(entry_heading: f64, exit_heading: f64) -> f64 {
    angle_diff(exit_heading, entry_heading).abs()
}

/// Two-stage approach: the shortest arc-straight path into the center with an
/// admissible entry heading; failing that, the shortest arc-straight-arc path
/// arriving square to the exit direction from either side.
pub fn plan_turntable_approach(
    start: &DirectedPoint,
    tt: &TurntableSpec,
    radius: f64,
) -> Result<TurntableApproach, PlanError> {
    let distance = (tt.center.0 - start.x).hypot(tt.center.1 - start.y);
    if distance < tt.diameter {
        return Err(PlanError::StartTooClose {
            distance,
            diameter: tt.diameter,
        });
    }

    let direct = solve_point_target(start, tt.center, radius).unwrap_or_default();
    let admissible = direct
        .into_iter()
        .filter(|c| admissible_entry(c.entry_heading, tt.exit_heading));
    if let Some(best) = pick_shortest(admissible, |c: &PointCandidate| c.total_length) {
        return Ok(TurntableApproach {
            rotation_angle: rotation_between(best.entry_heading, tt.exit_heading),
            entry_heading: best.entry_heading,
            total_length: best.total_length,
            plan: best.plan,
            used_fallback: false,
        });
    }

    let square = [tt.exit_heading + FRAC_PI_2, tt.exit_heading - FRAC_PI_2]
        .into_iter()
        .filter_map(|h| shortest_csc(start, &DirectedPoint::new(tt.center.0, tt.center.1, h), radius).ok());
    let best = pick_shortest(square, |c: &DubinsCandidate| c.total_length).ok_or(PlanError::NoPathExists)?;
    let entry_heading = best
        .plan
        .segments
        .iter()
        .fold(best.plan.start, |p, s| s.advance(&p))
        .heading;
    Ok(TurntableApproach {
        entry_heading,
        rotation_angle: FRAC_PI_2,
        total_length: best.total_length,
        plan: best.plan,
        used_fallback: true,
    })
}

/// Seconds to rotate through `angle` from rest to rest with a trapezoidal
/// (or, for short swings, triangular) angular speed profile.
pub fn rotation_time(angle: f64, tt: &TurntableSpec) -> f64 {
    debug_assert!(angle >= 0.0);
    let (w, a) = (tt.max_angular_speed, tt.angular_accel);
    if angle >= w * w / a {
        angle / w + w / a
    } else {
        2.0 * (angle / a).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::integrate_path;

    const R: f64 = 28.4;

    fn spec(exit_heading: f64) -> TurntableSpec {
        TurntableSpec {
            center: (0.0, 0.0),
            exit_heading,
            diameter: 15.0,
            max_angular_speed: 6f64.to_radians(),
            angular_accel: 1.2f64.to_radians(),
        }
    }

    #[test]
    fn admissibility_truth_table() {
        for exit in [0.0, 1.0, PI, 5.5] {
            assert!(admissible_entry(exit + PI, exit));
            assert!(admissible_entry(exit + FRAC_PI_2, exit));
            assert!(admissible_entry(exit - FRAC_PI_2, exit));
            assert!(!admissible_entry(exit, exit));
            assert!(!admissible_entry(exit + FRAC_PI_2 - 1e-6, exit));
        }
    }

    #[test]
    fn head_on_approach() {
        let a = plan_turntable_approach(&DirectedPoint::new(-100.0, 0.0, 0.0), &spec(PI), R).unwrap();
        assert!(!a.used_fallback);
        assert_eq!(a.plan.form_label, "LS");
        assert!((a.total_length - 100.0).abs() < 1e-9);
        assert!(a.entry_heading.abs() < 1e-12);
        assert!((a.rotation_angle - PI).abs() < 1e-12);
    }

    #[test]
    fn approach_from_behind_falls_back_to_square_entry() {
        let tt = spec(0.0);
        let start = DirectedPoint::new(-100.0, 0.0, 0.0);
        let a = plan_turntable_approach(&start, &tt, R).unwrap();
        assert!(a.used_fallback);
        assert_eq!(a.rotation_angle, FRAC_PI_2);
        assert!(admissible_entry(a.entry_heading, tt.exit_heading));
        let end = integrate_path(&a.plan);
        assert!(end.x.hypot(end.y) < 1e-6);
        assert!((rotation_between(end.heading, 0.0) - FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn too_close() {
        let err = plan_turntable_approach(&DirectedPoint::new(10.0, 0.0, 0.0), &spec(0.0), R).unwrap_err();
        assert!(matches!(err, PlanError::StartTooClose { .. }));
    }

    #[test]
    fn rotation_times() {
        let tt = spec(0.0);
        assert!((rotation_time(PI, &tt) - 35.0).abs() < 1e-9);
        assert!((rotation_time(FRAC_PI_2, &tt) - 20.0).abs() < 1e-9);
        assert_eq!(rotation_time(0.0, &tt), 0.0);
        // Triangular: 10° with α = 1.2°/s² peaks at 3.46°/s < 6°/s.
        assert!((rotation_time(10f64.to_radians(), &tt) - 2.0 * (10.0f64 / 1.2).sqrt()).abs() < 1e-9);
    }
}
