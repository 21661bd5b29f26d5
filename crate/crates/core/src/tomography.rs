//! Reconstruction of the two-path photon-number density matrix from measured
//! probabilities and fringe visibility, and the concurrence lower bound.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::interferometer::FringePoint;
use crate::real::Real;

/// Diagonal detection probabilities p_ij (i photons from the left crystal,
/// j from the right).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalProbs<T> {
    pub p00: T,
    pub p01: T,
    pub p10: T,
    pub p11: T,
}

impl<T: Real> DiagonalProbs<T> {
    pub fn new(p00: T, p01: T, p10: T, p11: T) -> Result<Self> {
        for (name, p) in [("p00", p00), ("p01", p01), ("p10", p10), ("p11", p11)] {
            if !(p.is_finite() && p >= T::zero() && p <= T::one()) {
                return Err(Error::validation(
                    format!("probs.{name}"),
                    format!("must lie in [0, 1], got {p}"),
                ));
            }
        }
        Ok(Self { p00, p01, p10, p11 })
    }

    /// Infer the vacuum probability from the measured ones:
    /// p00 = 1 - (p01 + p10 + p11).
    pub fn with_inferred_p00(p01: T, p10: T, p11: T) -> Result<Self> {
        let p00 = T::one() - (p01 + p10 + p11);
        if p00 < -T::of(1e-9) {
            return Err(Error::InconsistentCounts(format!(
                "measured fractions sum to {} > 1",
                p01 + p10 + p11
            )));
        }
        Self::new(p00.max(T::zero()), p01, p10, p11)
    }

    pub fn trace(&self) -> T {
        self.p00 + self.p01 + self.p10 + self.p11
    }
}

/// Fringe visibility in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Visibility<T>(T);

impl<T: Real> Visibility<T> {
    pub fn new(v: T) -> Result<Self> {
        if !(v.is_finite() && v >= T::zero() && v <= T::one()) {
            return Err(Error::validation("visibility", format!("must lie in [0, 1], got {v}")));
        }
        Ok(Self(v))
    }

    pub fn value(&self) -> T {
        self.0
    }
}

/// Sparse photon-number-basis density matrix of the two-path state: diagonal
/// p_ij with the single coherence d_tpe between |01> and |10>. The coherence
/// is stored real and non-negative; the fixed relative factor i of the
/// two-path state is a bookkeeping convention and drops out of the
/// concurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TPEDensityMatrix<T> {
    pub probs: DiagonalProbs<T>,
    pub d_tpe: T,
    pub big_p: T,
}

impl<T: Real> TPEDensityMatrix<T> {
    /// Dense 4x4 realization of the sparsity pattern, normalized by P.
    pub fn matrix(&self) -> [[Complex<T>; 4]; 4] {
        let z = Complex::new(T::zero(), T::zero());
        let re = |x: T| Complex::new(x, T::zero());
        let p = self.big_p;
        [
            [re(self.probs.p00 / p), z, z, z],
            [z, re(self.probs.p01 / p), re(self.d_tpe / p), z],
            [z, re(self.d_tpe / p), re(self.probs.p10 / p), z],
            [z, z, z, re(self.probs.p11 / p)],
        ]
    }
}

/// Michelson contrast (q_max - q_min)/(q_max + q_min) of the normalized
/// channel q_b/(q_b + q_c).
pub fn visibility_from_fringe<T: Real>(points: &[FringePoint<T>]) -> Result<Visibility<T>> {
    if points.len() < 2 {
        return Err(Error::domain("visibility: need at least 2 fringe points"));
    }
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for p in points {
        let q = p.q_b_norm();
        lo = lo.min(q);
        hi = hi.max(q);
    }
    if hi - lo == T::zero() {
        return Err(Error::UndefinedVisibility(
            "all fringe points equal; no contrast information".into(),
        ));
    }
    Visibility::new((hi - lo) / (hi + lo))
}

/// Coherence estimate d_tpe = V (p01 + p10) / 2.
pub fn coherence_estimate<T: Real>(probs: &DiagonalProbs<T>, v: Visibility<T>) -> T {
    v.value() * (probs.p01 + probs.p10) * T::half()
}

/// Fill the sparsity pattern from measured probabilities and visibility.
/// `p00 = None` applies the inference p00 = 1 - (p01 + p10 + p11).
pub fn assemble_rho<T: Real>(
    p00: Option<T>,
    p01: T,
    p10: T,
    p11: T,
    v: Visibility<T>,
) -> Result<TPEDensityMatrix<T>> {
    let probs = match p00 {
        Some(p00) => DiagonalProbs::new(p00, p01, p10, p11)?,
        None => DiagonalProbs::with_inferred_p00(p01, p10, p11)?,
    };
    // positivity of the central 2x2 block bounds the coherence by the
    // geometric mean of the one-photon populations
    let d_tpe = coherence_estimate(&probs, v).min((probs.p01 * probs.p10).sqrt());
    Ok(TPEDensityMatrix {
        probs,
        d_tpe,
        big_p: probs.trace(),
    })
}

/// Concurrence lower bound C = max{0, (2/P)(|d_tpe| - sqrt(p00 p11))};
/// C = 1 marks maximal entanglement.
pub fn concurrence<T: Real>(rho: &TPEDensityMatrix<T>) -> Result<T> {
    if rho.big_p <= T::zero() {
        return Err(Error::DegenerateState);
    }
    let raw = T::two() / rho.big_p * (rho.d_tpe.abs() - (rho.probs.p00 * rho.probs.p11).sqrt());
    Ok(raw.max(T::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vis(v: f64) -> Visibility<f64> {
        Visibility::new(v).unwrap()
    }

    fn fringe(points: &[(f64, f64)]) -> Vec<FringePoint<f64>> {
        points
            .iter()
            .map(|&(q_b, q_c)| FringePoint { t_phi: 0.0, q_b, q_c })
            .collect()
    }

    #[test]
    fn ideal_sin_squared_fringe_has_unit_visibility() {
        let pts: Vec<(f64, f64)> = (0..=40)
            .map(|k| {
                let phi = k as f64 * std::f64::consts::PI / 40.0;
                (phi.sin().powi(2), phi.cos().powi(2))
            })
            .collect();
        let v = visibility_from_fringe(&fringe(&pts)).unwrap();
        assert!((v.value() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn incoherent_background_reduces_contrast() {
        let pts: Vec<(f64, f64)> = (0..=40)
            .map(|k| {
                let phi = k as f64 * std::f64::consts::PI / 40.0;
                (phi.sin().powi(2) + 0.5, phi.cos().powi(2) + 0.5)
            })
            .collect();
        let v = visibility_from_fringe(&fringe(&pts)).unwrap();
        assert!(v.value() < 1.0);
        assert!(v.value() > 0.0);
    }

    #[test]
    fn two_point_full_contrast() {
        let v = visibility_from_fringe(&fringe(&[(1.0, 0.0), (0.0, 1.0)])).unwrap();
        assert_eq!(v.value(), 1.0);
    }

    #[test]
    fn flat_fringe_is_undefined() {
        let r = visibility_from_fringe(&fringe(&[(0.5, 0.5), (0.5, 0.5)]));
        assert!(matches!(r, Err(Error::UndefinedVisibility(_))));
    }

    #[test]
    fn coherence_cases() {
        let p = DiagonalProbs::new(0.0, 0.5, 0.5, 0.0).unwrap();
        assert_eq!(coherence_estimate(&p, vis(1.0)), 0.5);
        let p = DiagonalProbs::new(0.2, 0.4, 0.4, 0.0).unwrap();
        assert!((coherence_estimate(&p, vis(0.9)) - 0.36).abs() < 1e-15);
        assert_eq!(coherence_estimate(&p, vis(0.0)), 0.0);
    }

    #[test]
    fn ideal_two_path_state_is_maximally_entangled() {
        let rho = assemble_rho(Some(0.0), 0.5, 0.5, 0.0, vis(1.0)).unwrap();
        assert!((concurrence(&rho).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vacuum_has_no_entanglement() {
        let rho = assemble_rho(Some(1.0), 0.0, 0.0, 0.0, vis(0.0)).unwrap();
        assert_eq!(concurrence(&rho).unwrap(), 0.0);
    }

    #[test]
    fn worked_concurrence_case() {
        // d = 0.9 (0.4 + 0.4)/2 = 0.36, sqrt(0.15 * 0.05) = 0.0866025...
        let rho = assemble_rho(Some(0.15), 0.4, 0.4, 0.05, vis(0.9)).unwrap();
        let c = concurrence(&rho).unwrap();
        assert!((c - 0.5468).abs() < 5e-5, "got {c}");
    }

    #[test]
    fn inferred_p00() {
        let rho = assemble_rho(None, 0.1, 0.15, 0.05, vis(0.5)).unwrap();
        assert!((rho.probs.p00 - 0.7).abs() < 1e-15);
        assert!((rho.big_p - 1.0).abs() < 1e-15);
    }

    #[test]
    fn overfull_counts_are_inconsistent() {
        assert!(matches!(
            DiagonalProbs::with_inferred_p00(0.6, 0.6, 0.0),
            Err(Error::InconsistentCounts(_))
        ));
    }

    #[test]
    fn pure_state_projector_pattern() {
        // (0, 1/sqrt2, i/sqrt2, 0) outer product, up to the real-coherence
        // convention: diagonal (0, 1/2, 1/2, 0) and |coherence| = 1/2
        let rho = assemble_rho(Some(0.0), 0.5, 0.5, 0.0, vis(1.0)).unwrap();
        let m = rho.matrix();
        assert!((m[1][1].re - 0.5).abs() < 1e-15);
        assert!((m[2][2].re - 0.5).abs() < 1e-15);
        assert!((m[1][2].norm() - 0.5).abs() < 1e-15);
        assert!(m[0][0].norm() < 1e-15 && m[3][3].norm() < 1e-15);
    }

    #[test]
    fn degenerate_trace_is_an_error() {
        let rho = TPEDensityMatrix {
            probs: DiagonalProbs::new(0.0, 0.0, 0.0, 0.0).unwrap(),
            d_tpe: 0.0,
            big_p: 0.0,
        };
        assert!(matches!(concurrence(&rho), Err(Error::DegenerateState)));
    }

    proptest! {
        #[test]
        fn concurrence_is_monotone_in_visibility(
            p01 in 0.0f64..0.5,
            p10 in 0.0f64..0.5,
            p11 in 0.0f64..0.05,
        ) {
            prop_assume!(p01 + p10 + p11 <= 1.0);
            let mut last = -1.0f64;
            for k in 0..=20 {
                let v = k as f64 / 20.0;
                let rho = assemble_rho(None, p01, p10, p11, vis(v)).unwrap();
                let c = concurrence(&rho).unwrap();
                prop_assert!(c + 1e-12 >= last);
                last = c;
            }
        }

        #[test]
        fn concurrence_is_scale_invariant(
            p00 in 0.01f64..0.3,
            p01 in 0.01f64..0.3,
            p10 in 0.01f64..0.3,
            p11 in 0.0f64..0.05,
            v in 0.0f64..1.0,
            lambda in 0.1f64..2.0,
        ) {
            let rho = assemble_rho(Some(p00), p01, p10, p11, vis(v)).unwrap();
            let scaled = TPEDensityMatrix {
                probs: DiagonalProbs {
                    p00: p00 * lambda,
                    p01: p01 * lambda,
                    p10: p10 * lambda,
                    p11: p11 * lambda,
                },
                d_tpe: rho.d_tpe * lambda,
                big_p: rho.big_p * lambda,
            };
            let (c1, c2) = (concurrence(&rho).unwrap(), concurrence(&scaled).unwrap());
            prop_assert!((c1 - c2).abs() < 1e-12);
        }

        #[test]
        fn clamp_is_exact(
            p00 in 0.1f64..0.5,
            p11 in 0.1f64..0.5,
            d in 0.0f64..0.05,
        ) {
            prop_assume!(d <= (p00 * p11).sqrt());
            let probs = DiagonalProbs::new(p00, 0.1, 0.1, p11).unwrap();
            let rho = TPEDensityMatrix { probs, d_tpe: d, big_p: probs.trace() };
            prop_assert_eq!(concurrence(&rho).unwrap(), 0.0);
        }

        #[test]
        fn unit_trace_and_hermiticity(
            p00 in 0.01f64..0.4,
            p01 in 0.01f64..0.4,
            p10 in 0.01f64..0.4,
            p11 in 0.0f64..0.1,
            v in 0.0f64..1.0,
        ) {
            let rho = assemble_rho(Some(p00), p01, p10, p11, vis(v)).unwrap();
            let m = rho.matrix();
            let trace: f64 = (0..4).map(|i| m[i][i].re).sum();
            prop_assert!((trace - 1.0).abs() < 1e-12);
            for i in 0..4 {
                for j in 0..4 {
                    prop_assert!((m[i][j] - m[j][i].conj()).norm() < 1e-15);
                }
            }
        }
    }
}
