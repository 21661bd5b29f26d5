//! Bessel function of the first kind and first order, J1.
//!
//! Ascending power series below the crossover, Hankel asymptotic expansion
//! above it. Absolute accuracy better than 1e-10 over [0, 200] in f64.

use crate::error::{Error, Result};
use crate::real::Real;

const SERIES_CROSSOVER: f64 = 12.0;

/// J1(x) for finite x >= 0.
pub fn bessel_j1<T: Real>(x: T) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::domain(format!("bessel_j1: non-finite input {x}")));
    }
    if x < T::zero() {
        return Err(Error::domain(format!("bessel_j1: negative input {x}")));
    }
    Ok(j1(x))
}

/// J1 without domain checks; callers guarantee finite x >= 0.
pub(crate) fn j1<T: Real>(x: T) -> T {
    if x <= T::of(SERIES_CROSSOVER) {
        j1_series(x)
    } else {
        j1_asymptotic(x)
    }
}

/// Ascending series J1(x) = (x/2) sum_k (-1)^k (x^2/4)^k / (k! (k+1)!).
fn j1_series<T: Real>(x: T) -> T {
    let q = -x * x / T::of(4.0);
    let mut term = x * T::half();
    let mut sum = term;
    let tol = T::epsilon() * T::of(1e-2);
    for k in 1..200 {
        term = term * q / (T::of(k as f64) * T::of((k + 1) as f64));
        sum += term;
        if term.abs() < tol {
            break;
        }
    }
    sum
}

/// Hankel expansion: J1(x) ~ sqrt(2/(pi x)) [P(x) cos chi - Q(x) sin chi],
/// chi = x - 3 pi/4. Terms are summed until they stop decreasing.
fn j1_asymptotic<T: Real>(x: T) -> T {
    let mu = T::of(4.0); // 4 nu^2 for nu = 1
    let mut p = T::one();
    let mut q = T::zero();
    let mut a = T::one(); // a_k recurrence
    let mut prev_mag = T::infinity();
    let tol = T::epsilon() * T::of(1e-3);
    for k in 1..60u32 {
        let two_k_m1 = T::of((2 * k - 1) as f64);
        a = a * (mu - two_k_m1 * two_k_m1) / (T::of(8.0) * T::of(k as f64));
        let term = a / x.powi(k as i32);
        let mag = term.abs();
        if mag >= prev_mag {
            break; // divergent tail of the asymptotic series
        }
        prev_mag = mag;
        // sign pattern (-1)^floor(k/2) on a_k/x^k; odd k feeds Q, even k feeds P
        let sign = if (k / 2) % 2 == 0 { T::one() } else { -T::one() };
        if k % 2 == 1 {
            q += sign * term;
        } else {
            p += sign * term;
        }
        if mag < tol {
            break;
        }
    }
    let chi = x - T::of(3.0) * T::FRAC_PI_4();
    (T::two() / (T::PI() * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
