//! Single-photon propagation through the BS1 -> samples -> mirror -> BS2
//! chain, and the resulting time-resolved and time-integrated detector
//! intensities. One photon in linear optics reduces exactly to classical
//! amplitude algebra, so modes are complex sample arrays.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::nuclear::{switched_pair, SampleParams, TimeGrid};
use crate::real::Real;

/// Two-mode complex field on a shared time grid. Mode `a` heads toward
/// detector B, mode `b` toward detector C.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeField<T> {
    pub grid: TimeGrid<T>,
    pub a: Vec<Complex<T>>,
    pub b: Vec<Complex<T>>,
}

impl<T: Real> TwoModeField<T> {
    /// Canonical single-photon input: unit pulse in mode a, vacuum in b.
    pub fn single_photon_input(grid: &TimeGrid<T>) -> Self {
        let n = grid.len();
        Self {
            grid: *grid,
            a: vec![Complex::new(T::one(), T::zero()); n],
            b: vec![Complex::new(T::zero(), T::zero()); n],
        }
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        Self {
            grid: self.grid,
            a: self.a.iter().map(|z| z * c).collect(),
            b: self.b.iter().map(|z| z * c).collect(),
        }
    }
}

/// One linear element of the chain, acting as a 2x2 complex matrix at every
/// time sample.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearElement<T> {
    /// 50/50 splitter (1/sqrt 2) [[1, i], [i, 1]]; unitary, and the squared
    /// paper form 1/2 [[1,i],[i,1]]...[[1,i],[i,1]] is reproduced by applying
    /// it twice.
    BeamSplitter,
    /// Minus identity.
    Mirror,
    /// Static phase on the upper arm: diag(e^{i theta}, 1).
    ArmPhase { theta: T },
    /// Time-dependent diagonal forward-scattering element diag(psi_R(t), psi_L(t)).
    Sample { psi_r: Vec<T>, psi_l: Vec<T> },
}

/// Fringe sample: integrated intensities at both detectors for one switching
/// time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringePoint<T> {
    pub t_phi: T,
    pub q_b: T,
    pub q_c: T,
}

impl<T: Real> FringePoint<T> {
    /// Normalized channel q_b / (q_b + q_c); zero total maps to 0.
    pub fn q_b_norm(&self) -> T {
        let total = self.q_b + self.q_c;
        if total > T::zero() {
            self.q_b / total
        } else {
            T::zero()
        }
    }
}

/// Apply one element pointwise over the shared grid.
pub fn apply_element<T: Real>(e: &LinearElement<T>, f: &TwoModeField<T>) -> Result<TwoModeField<T>> {
    let n = f.grid.len();
    if f.a.len() != n || f.b.len() != n {
        return Err(Error::GridMismatch(format!(
            "field arrays have {}/{} samples, grid has {n}",
            f.a.len(),
            f.b.len()
        )));
    }
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    match e {
        LinearElement::BeamSplitter => {
            let w = T::one() / T::two().sqrt();
            for i in 0..n {
                let (x, y) = (f.a[i], f.b[i]);
                a.push((x + y * Complex::i()) * w);
                b.push((x * Complex::i() + y) * w);
            }
        }
        LinearElement::Mirror => {
            for i in 0..n {
                a.push(-f.a[i]);
                b.push(-f.b[i]);
            }
        }
        LinearElement::ArmPhase { theta } => {
            let ph = Complex::new(theta.cos(), theta.sin());
            for i in 0..n {
                a.push(f.a[i] * ph);
                b.push(f.b[i]);
            }
        }
        LinearElement::Sample { psi_r, psi_l } => {
            if psi_r.len() != n || psi_l.len() != n {
                return Err(Error::GridMismatch(format!(
                    "sample element has {}/{} samples, grid has {n}",
                    psi_r.len(),
                    psi_l.len()
                )));
            }
            for i in 0..n {
                a.push(f.a[i] * psi_r[i]);
                b.push(f.b[i] * psi_l[i]);
            }
        }
    }
    Ok(TwoModeField { grid: f.grid, a, b })
}

/// Full chain BS2 * mirror * diag(psi_R, psi_L) * BS1 with an optional static
/// arm phase before the sample element.
pub fn propagate_chain_with_phase<T: Real>(
    s: &SampleParams<T>,
    t_phi: T,
    grid: &TimeGrid<T>,
    input: &TwoModeField<T>,
    theta: T,
) -> Result<TwoModeField<T>> {
    let (psi_r, psi_l) = switched_pair(s, t_phi, grid)?;
    let mut f = apply_element(&LinearElement::BeamSplitter, input)?;
    if theta != T::zero() {
        f = apply_element(&LinearElement::ArmPhase { theta }, &f)?;
    }
    f = apply_element(
        &LinearElement::Sample {
            psi_r: psi_r.amplitude,
            psi_l: psi_l.amplitude,
        },
        &f,
    )?;
    f = apply_element(&LinearElement::Mirror, &f)?;
    apply_element(&LinearElement::BeamSplitter, &f)
}

/// Balanced chain (theta = 0). For the canonical input (1, 0) the output is
/// a_out = -(psi_R - psi_L)/2 and b_out = -i (psi_R + psi_L)/2.
pub fn propagate_chain<T: Real>(
    s: &SampleParams<T>,
    t_phi: T,
    grid: &TimeGrid<T>,
    input: &TwoModeField<T>,
) -> Result<TwoModeField<T>> {
    propagate_chain_with_phase(s, t_phi, grid, input, T::zero())
}

/// Trapezoidal time-integrals of |a_out|^2 and |b_out|^2.
pub fn detector_intensities<T: Real>(out: &TwoModeField<T>) -> (T, T) {
    let q_b = trapezoid(&out.a, out.grid.dt());
    let q_c = trapezoid(&out.b, out.grid.dt());
    (q_b, q_c)
}

fn trapezoid<T: Real>(z: &[Complex<T>], dt: T) -> T {
    let mut acc = T::zero();
    for w in z.windows(2) {
        acc += (w[0].norm_sqr() + w[1].norm_sqr()) * T::half();
    }
    acc * dt
}

/// One fringe point per switching time; points are evaluated independently
/// and in parallel, so results do not depend on scheduling.
pub fn fringe_scan<T: Real>(
    s: &SampleParams<T>,
    grid: &TimeGrid<T>,
    t_phi_list: &[T],
) -> Result<Vec<FringePoint<T>>> {
    if t_phi_list.is_empty() {
        return Err(Error::domain("fringe_scan: empty t_phi list"));
    }
    if let Some(bad) = t_phi_list.iter().find(|t| !t.is_finite() || **t < T::zero()) {
        return Err(Error::domain(format!("fringe_scan: invalid t_phi {bad}")));
    }
    t_phi_list
        .par_iter()
        .map(|&t_phi| {
            let input = TwoModeField::single_photon_input(grid);
            let out = propagate_chain(s, t_phi, grid, &input)?;
            let (q_b, q_c) = detector_intensities(&out);
            Ok(FringePoint { t_phi, q_b, q_c })
        })
        .collect()
}

/// Routing probabilities for a photon crossing the chain with unit sample
/// transmission (the non-absorbed prompt photon). Balanced: (0, 1).
pub fn prompt_routing<T: Real>(theta: T) -> (T, T) {
    // chain algebra on a single sample with psi_R = psi_L = 1
    let one = Complex::new(T::one(), T::zero());
    let w = T::one() / T::two().sqrt();
    let (mut x, mut y) = (one * w, Complex::i() * w); // BS1 on (1, 0)
    x = x * Complex::new(theta.cos(), theta.sin());
    x = -x;
    y = -y; // mirror
    let a = (x + y * Complex::i()) * w;
    let b = (x * Complex::i() + y) * w; // BS2
    let (pa, pb) = (a.norm_sqr(), b.norm_sqr());
    let total = pa + pb;
    (pa / total, pb / total)
}
