//! Time-domain nuclear forward scattering response of one crystal arm:
//! multiple-scattering Bessel envelope, hyperfine quantum beat, and the
//! phase jump imprinted by inverting the hyperfine field.

use serde::{Deserialize, Serialize};

use crate::bessel::j1;
use crate::error::{Error, Result};
use crate::real::Real;

/// Nuclear and crystal constants defining the forward-scattering response
/// of one arm: effective resonant thickness, decay rate, Zeeman beat frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleParams<T> {
    alpha: T,
    gamma: T,
    delta_b: T,
}

impl<T: Real> SampleParams<T> {
    /// `alpha` dimensionless, `gamma` in 1/ns, `delta_b` in rad/ns.
    pub fn new(alpha: T, gamma: T, delta_b: T) -> Result<Self> {
        if !(alpha.is_finite() && alpha > T::zero()) {
            return Err(Error::validation("sample.alpha", format!("must be > 0, got {alpha}")));
        }
        if !(gamma.is_finite() && gamma > T::zero()) {
            return Err(Error::validation("sample.gamma", format!("must be > 0, got {gamma}")));
        }
        if !(delta_b.is_finite() && delta_b >= T::zero()) {
            return Err(Error::validation("sample.delta_b", format!("must be >= 0, got {delta_b}")));
        }
        Ok(Self { alpha, gamma, delta_b })
    }

    /// Beat frequency given as a multiple of gamma.
    pub fn with_delta_b_in_gamma(alpha: T, gamma: T, delta_b_over_gamma: T) -> Result<Self> {
        Self::new(alpha, gamma, delta_b_over_gamma * gamma)
    }

    /// 57Fe defaults: alpha = 1, gamma = 1/141 ns^-1, delta_b = 30 gamma.
    pub fn fe57_default() -> Self {
        let gamma = T::one() / T::of(141.0);
        Self {
            alpha: T::one(),
            gamma,
            delta_b: T::of(30.0) * gamma,
        }
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    /// Beat angular frequency in rad/ns.
    pub fn delta_b(&self) -> T {
        self.delta_b
    }

    /// Beat frequency as a multiple of gamma.
    pub fn delta_b_over_gamma(&self) -> T {
        self.delta_b / self.gamma
    }
}

/// Which interferometer arm a schedule drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arm {
    Left,
    Right,
}

/// Piecewise-constant sign schedule of the hyperfine field on one arm.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSchedule<T> {
    segments: Vec<(T, i8)>,
    arm: Arm,
}

impl<T: Real> FieldSchedule<T> {
    /// Segment list of (start time in ns, sign). Start times must be strictly
    /// increasing with the first at 0; signs are +1 or -1.
    pub fn new(segments: Vec<(T, i8)>, arm: Arm) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::validation("schedule.segments", "must be non-empty"));
        }
        if segments[0].0 != T::zero() {
            return Err(Error::validation("schedule.segments", "first segment must start at 0"));
        }
        for pair in segments.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::validation(
                    "schedule.segments",
                    "start times must be strictly increasing",
                ));
            }
        }
        for &(_, s) in &segments {
            if s != 1 && s != -1 {
                return Err(Error::validation("schedule.segments", "signs must be +1 or -1"));
            }
        }
        Ok(Self { segments, arm })
    }

    /// Constant +1 field.
    pub fn constant(arm: Arm) -> Self {
        Self {
            segments: vec![(T::zero(), 1)],
            arm,
        }
    }

    /// +1 field inverted to -1 at the switching time.
    pub fn inverted_at(t_phi: T, arm: Arm) -> Result<Self> {
        if !(t_phi.is_finite() && t_phi > T::zero()) {
            return Err(Error::validation("schedule.t_phi", format!("must be > 0, got {t_phi}")));
        }
        Self::new(vec![(T::zero(), 1), (t_phi, -1)], arm)
    }

    pub fn arm(&self) -> Arm {
        self.arm
    }

    pub fn segments(&self) -> &[(T, i8)] {
        &self.segments
    }

    pub fn sign_at(&self, t: T) -> i8 {
        let mut sign = self.segments[0].1;
        for &(start, s) in &self.segments {
            if t >= start {
                sign = s;
            } else {
                break;
            }
        }
        sign
    }
}

/// Uniform time grid in ns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    t_start: T,
    t_end: T,
    dt: T,
    len: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t_start: T, t_end: T, dt: T) -> Result<Self> {
        if !(t_start.is_finite() && t_start >= T::zero()) {
            return Err(Error::validation("grid.t_start", format!("must be >= 0, got {t_start}")));
        }
        if !(t_end.is_finite() && t_end > t_start) {
            return Err(Error::validation("grid.t_end", format!("must be > t_start, got {t_end}")));
        }
        if !(dt.is_finite() && dt > T::zero()) {
            return Err(Error::validation("grid.dt", format!("must be > 0, got {dt}")));
        }
        // nudge against rounding so an exact integer span keeps its endpoint
        let steps = ((t_end - t_start) / dt + T::of(1e-9)).floor();
        let len = steps.to_usize().ok_or_else(|| {
            Error::validation("grid", "too many samples for this platform")
        })? + 1;
        Ok(Self { t_start, t_end, dt, len })
    }

    /// Default window: ten 57Fe lifetimes at 0.01 ns resolution.
    pub fn default_for_fe57() -> Self {
        Self::new(T::zero(), T::of(1410.0), T::of(0.01)).expect("static grid")
    }

    pub fn t_start(&self) -> T {
        self.t_start
    }

    pub fn t_end(&self) -> T {
        self.t_end
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, i: usize) -> T {
        self.t_start + T::of(i as f64) * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.len).map(move |i| self.time(i))
    }

    /// The grid resolves the quantum beat when dt <= pi/(20 delta_b).
    pub fn resolves_beat(&self, delta_b: T) -> bool {
        delta_b == T::zero() || self.dt <= T::PI() / (T::of(20.0) * delta_b)
    }

    fn require_beat_resolution(&self, delta_b: T) -> Result<()> {
        if self.resolves_beat(delta_b) {
            Ok(())
        } else {
            Err(Error::validation(
                "grid.dt",
                format!("dt = {} does not resolve the beat; need dt <= pi/(20 delta_b)", self.dt),
            ))
        }
    }
}

/// Real-valued scattered amplitude sampled on a grid (unnormalized; the
/// detection stage normalizes once).
#[derive(Debug, Clone, PartialEq)]
pub struct Wavepacket<T> {
    pub grid: TimeGrid<T>,
    pub amplitude: Vec<T>,
}

/// Envelope A(t) = alpha J1(2 sqrt(alpha Gamma t)) / sqrt(alpha Gamma t) * exp(-Gamma t / 2),
/// with the analytic limit A(0) = alpha.
pub fn envelope<T: Real>(s: &SampleParams<T>, t: T) -> Result<T> {
    if !t.is_finite() || t < T::zero() {
        return Err(Error::domain(format!("envelope: time must be finite and >= 0, got {t}")));
    }
    Ok(envelope_unchecked(s, t))
}

#[inline]
fn envelope_unchecked<T: Real>(s: &SampleParams<T>, t: T) -> T {
    let x = s.alpha * s.gamma * t;
    let decay = (-s.gamma * t * T::half()).exp();
    if x == T::zero() {
        return s.alpha * decay;
    }
    let r = x.sqrt();
    s.alpha * j1(T::two() * r) / r * decay
}

/// Scattered wavepacket psi(t) = A(t) cos(delta_b t) sampled on the grid.
pub fn scattered_wavepacket<T: Real>(s: &SampleParams<T>, grid: &TimeGrid<T>) -> Result<Wavepacket<T>> {
    grid.require_beat_resolution(s.delta_b)?;
    let amplitude = grid
        .times()
        .map(|t| envelope_unchecked(s, t) * (s.delta_b * t).cos())
        .collect();
    Ok(Wavepacket { grid: *grid, amplitude })
}

/// Signed phase integral of sign(t) * delta_b over [0, tau].
///
/// Precondition: tau >= 0 (panics otherwise).
pub fn accumulated_phase<T: Real>(sched: &FieldSchedule<T>, s: &SampleParams<T>, tau: T) -> T {
    assert!(tau >= T::zero(), "accumulated_phase: tau must be >= 0");
    let mut phase = T::zero();
    let segs = sched.segments();
    for (i, &(start, sign)) in segs.iter().enumerate() {
        if start >= tau {
            break;
        }
        let end = segs.get(i + 1).map(|&(t, _)| t).unwrap_or(tau);
        let end = if end < tau { end } else { tau };
        let sign = if sign > 0 { T::one() } else { -T::one() };
        phase += sign * s.delta_b * (end - start);
    }
    phase
}

/// Post-switching wavepackets of the two arms, as functions of the delay t
/// after the inversion time. The right arm carries the -2 phi phase jump.
///
/// The quotient in the switched arm is cancelled analytically:
///   psi_L(t) = A(T_phi + t) cos[delta_b (T_phi + t)]
///   psi_R(t) = A(T_phi + t) cos[delta_b (T_phi - t)]
pub fn switched_pair<T: Real>(
    s: &SampleParams<T>,
    t_phi: T,
    grid: &TimeGrid<T>,
) -> Result<(Wavepacket<T>, Wavepacket<T>)> {
    if !t_phi.is_finite() || t_phi < T::zero() {
        return Err(Error::domain(format!("switched_pair: t_phi must be >= 0, got {t_phi}")));
    }
    grid.require_beat_resolution(s.delta_b)?;
    let n = grid.len();
    let mut psi_r = Vec::with_capacity(n);
    let mut psi_l = Vec::with_capacity(n);
    for t in grid.times() {
        let a = envelope_unchecked(s, t_phi + t);
        psi_r.push(a * (s.delta_b * (t_phi - t)).cos());
        psi_l.push(a * (s.delta_b * (t_phi + t)).cos());
    }
    Ok((
        Wavepacket { grid: *grid, amplitude: psi_r },
        Wavepacket { grid: *grid, amplitude: psi_l },
    ))
}
