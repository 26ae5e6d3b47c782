//! Time, fuel and tyre-wear costs of truck trips.
//!
//! Motion along a leg follows a trapezoidal speed profile. Fuel is charged
//! per phase at an hourly rate chosen by phase kind and travel direction;
//! tyre wear accrues per hour at the loaded or empty rate, including while
//! standing.

use serde::{Deserialize, Serialize};

use crate::geometry::Direction;
use crate::trip::{Manoeuvre, TripPlan};
use crate::turntable::rotation_time;

/// Hourly fuel burn, L/h.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuelRates {
    pub cruise_fwd: f64,
    pub cruise_rev: f64,
    pub accel_fwd: f64,
    pub accel_rev: f64,
    pub decel_or_idle: f64,
    pub tipping: f64,
}

/// Tyre wear, mm/h.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WearRates {
    pub loaded: f64,
    pub empty: f64,
}

/// Truck parameters in SI units (m, s, m/s, m/s²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruckParams {
    pub v_fwd_max: f64,
    pub v_rev_max: f64,
    pub accel: f64,
    pub decel: f64,
    pub tipping_duration: f64,
    pub turning_radius: f64,
    pub fuel: FuelRates,
    pub wear: WearRates,
}

impl Default for TruckParams {
    fn default() -> Self {
        Self {
            v_fwd_max: 10.0 / 3.6,
            v_rev_max: 2.5 / 3.6,
            accel: 0.5,
            decel: 1.8,
            tipping_duration: 40.0,
            turning_radius: 28.4,
            fuel: FuelRates {
                cruise_fwd: 150.0,
                cruise_rev: 205.0,
                accel_fwd: 361.0,
                accel_rev: 395.0,
                decel_or_idle: 53.7,
                tipping: 211.7,
            },
            wear: WearRates {
                loaded: 0.0231,
                empty: 0.0119,
            },
        }
    }
}

impl TruckParams {
    /// Names of parameters that break the positivity or speed-order rules.
    pub fn violations(&self) -> Vec<&'static str> {
        let checks = [
            ("v_fwd_max", self.v_fwd_max),
            ("v_rev_max", self.v_rev_max),
            ("accel", self.accel),
            ("decel", self.decel),
            ("tipping_duration", self.tipping_duration),
            ("turning_radius", self.turning_radius),
            ("fuel.cruise_fwd", self.fuel.cruise_fwd),
            ("fuel.cruise_rev", self.fuel.cruise_rev),
            ("fuel.accel_fwd", self.fuel.accel_fwd),
            ("fuel.accel_rev", self.fuel.accel_rev),
            ("fuel.decel_or_idle", self.fuel.decel_or_idle),
            ("fuel.tipping", self.fuel.tipping),
            ("wear.loaded", self.wear.loaded),
            ("wear.empty", self.wear.empty),
        ];
        let mut bad: Vec<&'static str> = checks
            .iter()
            .filter(|(_, v)| !(v.is_finite() && *v > 0.0))
            .map(|(n, _)| *n)
            .collect();
        if self.v_rev_max >= self.v_fwd_max {
            bad.push("v_rev_max must be below v_fwd_max");
        }
        bad
    }

    pub fn forward(&self) -> Kinematics {
        Kinematics {
            v_max: self.v_fwd_max,
            accel: self.accel,
            decel: self.decel,
        }
    }

    pub fn reverse(&self) -> Kinematics {
        Kinematics {
            v_max: self.v_rev_max,
            accel: self.accel,
            decel: self.decel,
        }
    }

    fn fuel_rate(&self, kind: PhaseKind, direction: Option<Direction>) -> f64 {
        let f = &self.fuel;
        match (kind, direction) {
            (PhaseKind::Accel, Some(Direction::Reverse)) => f.accel_rev,
            (PhaseKind::Accel, _) => f.accel_fwd,
            (PhaseKind::Cruise, Some(Direction::Reverse)) => f.cruise_rev,
            (PhaseKind::Cruise, _) => f.cruise_fwd,
            (PhaseKind::Decel | PhaseKind::Idle | PhaseKind::Rotate, _) => f.decel_or_idle,
            (PhaseKind::Tipping, _) => f.tipping,
        }
    }

    fn wear_rate(&self, loaded: bool) -> f64 {
        if loaded {
            self.wear.loaded
        } else {
            self.wear.empty
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub v_max: f64,
    pub accel: f64,
    pub decel: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseKind {
    Accel,
    Cruise,
    Decel,
    Idle,
    Tipping,
    Rotate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    pub kind: PhaseKind,
    pub duration: f64,
    pub distance: f64,
    /// `None` for stationary phases.
    pub direction: Option<Direction>,
    pub loaded: bool,
}

impl Phase {
    pub fn stationary(kind: PhaseKind, duration: f64, loaded: bool) -> Self {
        Self {
            kind,
            duration,
            distance: 0.0,
            direction: None,
            loaded,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MotionProfile {
    pub phases: Vec<Phase>,
}

impl MotionProfile {
    pub fn duration(&self) -> f64 {
        self.phases.iter().map(|p| p.duration).sum()
    }

    pub fn distance(&self) -> f64 {
        self.phases.iter().map(|p| p.distance).sum()
    }

    pub fn then(mut self, other: MotionProfile) -> Self {
        self.phases.extend(other.phases);
        self
    }

    pub fn push(&mut self, phase: Phase) {
        self.phases.push(phase);
    }
}

/// Trapezoidal speed profile over `distance`.
///
/// A boundary that is not a stop is crossed at `v_max`. When the leg is too
/// short to brake from (or reach) `v_max`, the moving boundary is crossed at
/// the fastest speed the distance allows instead.
pub fn motion_time(
    distance: f64,
    kin: Kinematics,
    start_at_rest: bool,
    end_at_rest: bool,
    direction: Direction,
    loaded: bool,
) -> MotionProfile {
    debug_assert!(distance >= 0.0);
    let mut profile = MotionProfile::default();
    if distance <= 0.0 {
        return profile;
    }
    let Kinematics {
        v_max: v,
        accel: a,
        decel: d,
    } = kin;
    let phase = |kind, duration: f64, distance: f64| Phase {
        kind,
        duration,
        distance,
        direction: Some(direction),
        loaded,
    };

    let v0 = if start_at_rest { 0.0 } else { v };
    let v1 = if end_at_rest { 0.0 } else { v };
    let accel_dist = (v * v - v0 * v0) / (2.0 * a);
    let decel_dist = (v * v - v1 * v1) / (2.0 * d);

    if distance >= accel_dist + decel_dist {
        if accel_dist > 0.0 {
            profile.push(phase(PhaseKind::Accel, (v - v0) / a, accel_dist));
        }
        let cruise = distance - accel_dist - decel_dist;
        if cruise > 0.0 {
            profile.push(phase(PhaseKind::Cruise, cruise / v, cruise));
        }
        if decel_dist > 0.0 {
            profile.push(phase(PhaseKind::Decel, (v - v1) / d, decel_dist));
        }
        return profile;
    }

    match (start_at_rest, end_at_rest) {
        (true, true) => {
            let peak = (2.0 * distance * a * d / (a + d)).sqrt();
            let up = peak * peak / (2.0 * a);
            profile.push(phase(PhaseKind::Accel, peak / a, up));
            profile.push(phase(PhaseKind::Decel, peak / d, distance - up));
        }
        (true, false) => {
            profile.push(phase(PhaseKind::Accel, (2.0 * distance / a).sqrt(), distance));
        }
        (false, true) => {
            profile.push(phase(PhaseKind::Decel, (2.0 * distance / d).sqrt(), distance));
        }
        (false, false) => unreachable!("no ramps when both boundaries are at speed"),
    }
    profile
}

pub fn fuel_of(profile: &MotionProfile, params: &TruckParams) -> f64 {
    profile
        .phases
        .iter()
        .map(|p| params.fuel_rate(p.kind, p.direction) * p.duration / 3600.0)
        .sum()
}

pub fn wear_of(profile: &MotionProfile, params: &TruckParams) -> f64 {
    profile
        .phases
        .iter()
        .map(|p| params.wear_rate(p.loaded) * p.duration / 3600.0)
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    #[serde(flatten)]
    pub phase: Phase,
    pub fuel: f64,
    pub tyre_wear: f64,
}

/// Trip totals (s, L, mm) and the per-phase ledger they sum.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub time: f64,
    pub fuel: f64,
    pub tyre_wear: f64,
    pub ledger: Vec<LedgerEntry>,
}

impl CostBreakdown {
    pub fn of(profile: &MotionProfile, params: &TruckParams) -> Self {
        let ledger: Vec<LedgerEntry> = profile
            .phases
            .iter()
            .map(|&p| LedgerEntry {
                phase: p,
                fuel: params.fuel_rate(p.kind, p.direction) * p.duration / 3600.0,
                tyre_wear: params.wear_rate(p.loaded) * p.duration / 3600.0,
            })
            .collect();
        Self {
            time: ledger.iter().map(|e| e.phase.duration).sum(),
            fuel: ledger.iter().map(|e| e.fuel).sum(),
            tyre_wear: ledger.iter().map(|e| e.tyre_wear).sum(),
            ledger,
        }
    }
}

/// Full speed/stop schedule of a trip. The load is carried until tipping ends.
pub fn trip_profile(trip: &TripPlan, params: &TruckParams) -> MotionProfile {
    let enter_at_rest = !trip.boundary_at_speed;
    let fwd = params.forward();
    let inbound = trip.inbound_length();
    let mut profile = match &trip.manoeuvre {
        Manoeuvre::Reverse { approach } => motion_time(
            inbound + approach.forward_length,
            fwd,
            enter_at_rest,
            true,
            Direction::Forward,
            true,
        )
        .then(motion_time(
            approach.reverse_length,
            params.reverse(),
            true,
            true,
            Direction::Reverse,
            true,
        )),
        Manoeuvre::Turntable { approach, turntable } => {
            let mut p = motion_time(
                inbound + approach.total_length,
                fwd,
                enter_at_rest,
                true,
                Direction::Forward,
                true,
            );
            p.push(Phase::stationary(
                PhaseKind::Rotate,
                rotation_time(approach.rotation_angle, turntable),
                true,
            ));
            p
        }
    };
    profile.push(Phase::stationary(PhaseKind::Tipping, params.tipping_duration, true));
    profile.then(motion_time(
        trip.outbound_length(),
        fwd,
        true,
        !trip.boundary_at_speed,
        Direction::Forward,
        false,
    ))
}

pub fn trip_cost(trip: &TripPlan, params: &TruckParams) -> CostBreakdown {
    CostBreakdown::of(&trip_profile(trip, params), params)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatingSchedule {
    pub trips_per_shift: u32,
    pub shifts_per_day: u32,
    pub days_per_year: u32,
}

impl Default for OperatingSchedule {
    fn default() -> Self {
        Self {
            trips_per_shift: 109,
            shifts_per_day: 3,
            days_per_year: 365,
        }
    }
}

impl OperatingSchedule {
    pub fn trips_per_year(&self) -> u64 {
        u64::from(self.trips_per_shift) * u64::from(self.shifts_per_day) * u64::from(self.days_per_year)
    }
}

/// Differences in s, L and mm.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CostDelta {
    pub time: f64,
    pub fuel: f64,
    pub tyre_wear: f64,
}

impl CostDelta {
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            time: self.time * k,
            fuel: self.fuel * k,
            tyre_wear: self.tyre_wear * k,
        }
    }

    pub fn time_hours(&self) -> f64 {
        self.time / 3600.0
    }
}

/// What installing a turntable saves on one route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Savings {
    /// Cost without the turntable minus cost with it.
    pub per_trip: CostDelta,
    pub annual: CostDelta,
    pub trips_per_year: u64,
}

impl Savings {
    pub fn from_per_trip(per_trip: CostDelta, schedule: &OperatingSchedule) -> Self {
        let trips_per_year = schedule.trips_per_year();
        Self {
            per_trip,
            annual: per_trip.scaled(trips_per_year as f64),
            trips_per_year,
        }
    }
}

pub fn compare_and_annualize(
    with_tt: &CostBreakdown,
    without_tt: &CostBreakdown,
    schedule: &OperatingSchedule,
) -> Savings {
    let per_trip = CostDelta {
        time: without_tt.time - with_tt.time,
        fuel: without_tt.fuel - with_tt.fuel,
        tyre_wear: without_tt.tyre_wear - with_tt.tyre_wear,
    };
    Savings::from_per_trip(per_trip, schedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Bang-bang simulation at 1 ms: accelerate to v_max, brake as late as
    /// the stopping distance allows. A moving start on a leg shorter than the
    /// braking distance enters at the speed it can still stop from.
    fn simulate(distance: f64, kin: Kinematics, start_at_rest: bool, end_at_rest: bool) -> f64 {
        let dt = 1e-3;
        let v_in = match (start_at_rest, end_at_rest) {
            (true, _) => 0.0,
            (false, true) => kin.v_max.min((2.0 * kin.decel * distance).sqrt()),
            (false, false) => kin.v_max,
        };
        let (mut s, mut v, mut t) = (0.0, v_in, 0.0);
        let mut braking = false;
        loop {
            braking |= end_at_rest && v * v / (2.0 * kin.decel) >= distance - s;
            let a = if braking {
                -kin.decel
            } else if v < kin.v_max {
                kin.accel
            } else {
                0.0
            };
            let v_next = (v + a * dt).min(kin.v_max);
            if braking && v_next <= 0.0 {
                return t + v / kin.decel;
            }
            s += 0.5 * (v + v_next) * dt;
            v = v_next;
            t += dt;
            if !end_at_rest && s >= distance {
                return t - (s - distance) / v;
            }
        }
    }

    fn fwd() -> Kinematics {
        TruckParams::default().forward()
    }

    #[test]
    fn hundred_metres_stop_to_stop() {
        let p = motion_time(100.0, fwd(), true, true, Direction::Forward, true);
        assert_eq!(p.phases.len(), 3);
        let [a, c, d] = [p.phases[0], p.phases[1], p.phases[2]];
        assert!((a.duration - 5.556).abs() < 1e-3 && (a.distance - 7.716).abs() < 1e-3);
        assert!((c.duration - 32.451).abs() < 1e-3 && (c.distance - 90.140).abs() < 1e-3);
        assert!((d.duration - 1.543).abs() < 1e-3 && (d.distance - 2.143).abs() < 1e-3);
        assert!((p.duration() - 39.549).abs() < 1e-3);
        assert!((p.duration() - simulate(100.0, fwd(), true, true)).abs() < 0.01);
    }

    #[test]
    fn five_metres_is_triangular() {
        let p = motion_time(5.0, fwd(), true, true, Direction::Forward, true);
        assert_eq!(p.phases.len(), 2);
        let peak = p.phases[0].duration * 0.5;
        assert!((peak - 1.978).abs() < 1e-3);
        assert!((p.duration() - 5.055).abs() < 1e-3);
        assert!((p.duration() - simulate(5.0, fwd(), true, true)).abs() < 0.01);
        assert!((p.distance() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn zero_distance_is_empty() {
        let p = motion_time(0.0, fwd(), true, true, Direction::Forward, true);
        assert!(p.phases.is_empty());
        assert_eq!(p.duration(), 0.0);
    }

    #[test]
    fn short_legs_with_moving_boundary() {
        let k = fwd();
        let p = motion_time(1.0, k, false, true, Direction::Forward, true);
        assert_eq!(p.phases.len(), 1);
        assert!((p.duration() - (2.0 / k.decel).sqrt()).abs() < 1e-12);
        let p = motion_time(1.0, k, true, false, Direction::Forward, true);
        assert!((p.duration() - (2.0 / k.accel).sqrt()).abs() < 1e-12);
        let p = motion_time(50.0, k, false, false, Direction::Forward, true);
        assert_eq!(p.phases.len(), 1);
        assert!((p.duration() - 50.0 / k.v_max).abs() < 1e-12);
    }

    #[test]
    fn fuel_examples() {
        let params = TruckParams::default();
        let mut tip = MotionProfile::default();
        tip.push(Phase::stationary(PhaseKind::Tipping, 40.0, true));
        assert!((fuel_of(&tip, &params) - 2.352).abs() < 1e-3);

        let p = motion_time(100.0, fwd(), true, true, Direction::Forward, true);
        let parts: Vec<f64> = p
            .phases
            .iter()
            .map(|ph| fuel_of(&MotionProfile { phases: vec![*ph] }, &params))
            .collect();
        assert!((parts[0] - 0.557).abs() < 1e-3);
        assert!((parts[1] - 1.352).abs() < 1e-3);
        assert!((parts[2] - 0.023).abs() < 1e-3);
        assert!((fuel_of(&p, &params) - 1.932).abs() < 1e-3);
        assert_eq!(fuel_of(&MotionProfile::default(), &params), 0.0);
    }

    #[test]
    fn reverse_rates_apply() {
        let params = TruckParams::default();
        let p = motion_time(44.61, params.reverse(), true, true, Direction::Reverse, true);
        assert!((p.duration() - 65.13).abs() < 0.01);
        let expected = p.phases[0].duration * 395.0 / 3600.0
            + p.phases[1].duration * 205.0 / 3600.0
            + p.phases[2].duration * 53.7 / 3600.0;
        assert!((fuel_of(&p, &params) - expected).abs() < 1e-12);
    }

    #[test]
    fn wear_examples() {
        let params = TruckParams::default();
        let one = |loaded| MotionProfile {
            phases: vec![Phase::stationary(PhaseKind::Idle, 120.0, loaded)],
        };
        assert!((wear_of(&one(true), &params) - 0.00077).abs() < 1e-9);
        assert!((wear_of(&one(false), &params) - 0.000397).abs() < 1e-6);
        assert_eq!(wear_of(&MotionProfile::default(), &params), 0.0);
    }

    #[test]
    fn annualization() {
        let s = Savings::from_per_trip(
            CostDelta {
                time: 50.25,
                fuel: 4.022,
                tyre_wear: 4.78e-4,
            },
            &OperatingSchedule::default(),
        );
        assert_eq!(s.trips_per_year, 109 * 3 * 365);
        assert!((s.annual.time_hours() / 1666.0 - 1.0).abs() < 0.01);
        assert!((s.annual.fuel / 480_000.0 - 1.0).abs() < 0.01);
        assert!((s.annual.tyre_wear / 57.0 - 1.0).abs() < 0.02);
    }

    #[test]
    fn defaults_are_valid() {
        assert!(TruckParams::default().violations().is_empty());
        let mut p = TruckParams {
            v_rev_max: 5.0,
            ..TruckParams::default()
        };
        p.fuel.tipping = 0.0;
        assert_eq!(p.violations().len(), 2);
    }

    proptest! {
        #[test]
        fn motion_time_is_monotone(d in 0.0..2000.0f64, extra in 1e-6..50.0f64, sr: bool, er: bool) {
            let k = fwd();
            let t0 = motion_time(d, k, sr, er, Direction::Forward, true).duration();
            let t1 = motion_time(d + extra, k, sr, er, Direction::Forward, true).duration();
            prop_assert!(t1 > t0);
        }

        #[test]
        fn profile_distance_matches(d in 0.0..2000.0f64, sr: bool, er: bool) {
            let p = motion_time(d, fwd(), sr, er, Direction::Forward, false);
            prop_assert!((p.distance() - d).abs() < 1e-9);
            prop_assert!(p.phases.iter().all(|ph| ph.duration >= 0.0 && ph.distance >= 0.0));
        }

        #[test]
        fn breakdown_totals_match_ledger(d1 in 0.0..500.0f64, d2 in 0.0..500.0f64, idle in 0.0..100.0f64) {
            let params = TruckParams::default();
            let mut p = motion_time(d1, fwd(), true, true, Direction::Forward, true);
            p.push(Phase::stationary(PhaseKind::Idle, idle, true));
            let p = p.then(motion_time(d2, params.reverse(), true, true, Direction::Reverse, false));
            let b = CostBreakdown::of(&p, &params);
            prop_assert!((b.time - p.duration()).abs() < 1e-9);
            prop_assert!((b.fuel - fuel_of(&p, &params)).abs() < 1e-9);
            prop_assert!((b.tyre_wear - wear_of(&p, &params)).abs() < 1e-9);
        }
    }

    #[test]
    fn continuous_at_triangle_transition() {
        let k = fwd();
        let edge = k.v_max * k.v_max / (2.0 * k.accel) + k.v_max * k.v_max / (2.0 * k.decel);
        let below = motion_time(edge - 1e-6, k, true, true, Direction::Forward, true).duration();
        let above = motion_time(edge + 1e-6, k, true, true, Direction::Forward, true).duration();
        assert!((above - below).abs() < 1e-5);
    }

    #[test]
    fn closed_form_matches_simulation_up_to_2km() {
        let k = fwd();
        for d in [0.5, 3.0, 9.8, 10.0, 25.0, 100.0, 640.0, 2000.0] {
            for (sr, er) in [(true, true), (true, false), (false, true)] {
                let t = motion_time(d, k, sr, er, Direction::Forward, true).duration();
                let sim = simulate(d, k, sr, er);
                assert!((t - sim).abs() < 0.01, "{d} m {sr}/{er}: {t} vs {sim}");
            }
        }
    }
}
