//! XPDC source estimates: second-order susceptibility of the diamond 111
//! reflection, pump photon density, down-converted signal flux scaling, and
//! the heralded entanglement production rate. All internal arithmetic in SI.

use crate::error::{Error, Result};

/// SI constants (CODATA 2018).
pub mod consts {
    /// Elementary charge, C.
    pub const E: f64 = 1.602_176_634e-19;
    /// Electron mass, kg.
    pub const M_E: f64 = 9.109_383_701_5e-31;
    /// Speed of light, m/s.
    pub const C: f64 = 2.997_924_58e8;
    /// Vacuum permittivity, F/m.
    pub const EPS0: f64 = 8.854_187_812_8e-12;
    /// Reduced Planck constant, J s.
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// One electronvolt, J.
    pub const EV: f64 = 1.602_176_634e-19;
    /// C/N to statcoulomb/dyne: 2.998e9 statC per C over 1e5 dyn per N.
    pub const STATC_PER_DYN_PER_C_PER_N: f64 = 2.997_924_58e4;
}

/// Angular frequency in rad/s from a photon energy in eV.
pub fn omega_from_ev(energy_ev: f64) -> f64 {
    energy_ev * consts::EV / consts::HBAR
}

/// Inputs of the susceptibility formula. Energies are taken in eV and
/// converted to angular frequencies internally.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XPDCParams {
    /// Signal photon energy, eV.
    pub e_signal_ev: f64,
    /// Idler photon energy, eV.
    pub e_idler_ev: f64,
    /// Unit-cell number density, 1/m^3.
    pub n_cell: f64,
    /// Linear structure factor of bound electrons for the 111 reflection.
    /// Placeholder default of order unity; supply a literature value for
    /// quantitative work.
    pub f_v111: f64,
    /// Magnitude of the 111 reciprocal lattice vector, 1/m.
    pub q111: f64,
}

/// Conventional diamond lattice constant, m.
pub const DIAMOND_LATTICE_A: f64 = 3.567e-10;

impl XPDCParams {
    /// Diamond 111 defaults with the 14.4 keV signal / 100 eV idler split.
    pub fn diamond_default() -> Self {
        let a = DIAMOND_LATTICE_A;
        Self {
            e_signal_ev: 14.4e3,
            e_idler_ev: 100.0,
            n_cell: 1.0 / (a * a * a),
            f_v111: 3.0,
            q111: 2.0 * std::f64::consts::PI * 3.0f64.sqrt() / a,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("xpdc.e_signal_ev", self.e_signal_ev),
            ("xpdc.e_idler_ev", self.e_idler_ev),
            ("xpdc.n_cell", self.n_cell),
            ("xpdc.f_v111", self.f_v111),
            ("xpdc.q111", self.q111),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::validation(name, format!("must be > 0, got {v}")));
            }
        }
        if self.e_signal_ev == self.e_idler_ev {
            return Err(Error::validation(
                "xpdc.e_idler_ev",
                "signal and idler energies must differ",
            ));
        }
        Ok(())
    }
}

/// Pump pulse train parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpParams {
    pub photons_per_pulse: f64,
    /// Repetition rate, 1/s.
    pub rep_rate: f64,
    /// Focal spot area, mm^2.
    pub spot_area_mm2: f64,
}

impl PumpParams {
    /// XFEL pulse-train reference: 1e12 photons/pulse at 2.7e4 Hz on 0.0005 mm^2.
    pub fn xfel_default() -> Self {
        Self {
            photons_per_pulse: 1e12,
            rep_rate: 2.7e4,
            spot_area_mm2: 0.0005,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("pump.photons_per_pulse", self.photons_per_pulse),
            ("pump.rep_rate", self.rep_rate),
            ("pump.spot_area_mm2", self.spot_area_mm2),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::validation(name, format!("must be > 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// Anchor point for the quadratic-in-chi, linear-in-pump flux scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceReference {
    /// Reference susceptibility, C/N.
    pub chi_ref: f64,
    /// Reference pump density, photons/s/mm^2.
    pub ip_ref: f64,
    /// Reference signal flux, photons/s.
    pub xi_ref: f64,
    /// Signal bandwidth at the reference, eV.
    pub bandwidth_ev: f64,
}

impl SourceReference {
    /// Published anchor: chi ~ 1e-20 C/N, I_p = 5.5e18 photons/s/mm^2,
    /// xi_s = 2.9e6 photons/s in 1 eV.
    pub fn published_default() -> Self {
        Self {
            chi_ref: 1e-20,
            ip_ref: 5.5e18,
            xi_ref: 2.9e6,
            bandwidth_ev: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("source_ref.chi_ref", self.chi_ref),
            ("source_ref.ip_ref", self.ip_ref),
            ("source_ref.xi_ref", self.xi_ref),
            ("source_ref.bandwidth_ev", self.bandwidth_ev),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::validation(name, format!("must be > 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// |chi2_111| = N e^3 F (c^2 Q^2 - 4 w_s w_i) / [4 c eps0 m^2 w_s w_i^2 (w_s^2 - w_i^2)],
/// absolute value, in C/N.
pub fn chi2_111(p: &XPDCParams) -> Result<f64> {
    p.validate()?;
    let ws = omega_from_ev(p.e_signal_ev);
    let wi = omega_from_ev(p.e_idler_ev);
    if ws == wi {
        return Err(Error::domain("chi2_111: singular denominator, omega_s = omega_i"));
    }
    let c = consts::C;
    let numerator = p.n_cell * consts::E.powi(3) * p.f_v111 * (c * c * p.q111 * p.q111 - 4.0 * ws * wi);
    let denominator = 4.0 * c * consts::EPS0 * consts::M_E.powi(2) * ws * wi * wi * (ws * ws - wi * wi);
    Ok((numerator / denominator).abs())
}

/// Same susceptibility expressed in statcoulombs/dynes.
pub fn chi2_111_cgs(p: &XPDCParams) -> Result<f64> {
    Ok(chi2_111(p)? * consts::STATC_PER_DYN_PER_C_PER_N)
}

/// Pump photon density in photons/s/mm^2.
pub fn pump_density(p: &PumpParams) -> Result<f64> {
    p.validate()?;
    Ok(p.photons_per_pulse * p.rep_rate / p.spot_area_mm2)
}

/// Signal flux by scaling from the anchor: xi = xi_ref (chi/chi_ref)^2 (ip/ip_ref).
pub fn signal_flux(r: &SourceReference, chi: f64, ip: f64) -> Result<f64> {
    r.validate()?;
    if !(chi.is_finite() && chi > 0.0) {
        return Err(Error::domain(format!("signal_flux: chi must be > 0, got {chi}")));
    }
    if !(ip.is_finite() && ip > 0.0) {
        return Err(Error::domain(format!("signal_flux: ip must be > 0, got {ip}")));
    }
    let ratio = chi / r.chi_ref;
    Ok(r.xi_ref * ratio * ratio * (ip / r.ip_ref))
}

/// Heralded entanglement rate R_E = xi_s * dE_n / dE_s in Hz, for a signal
/// flux in photons/s and bandwidths in eV with dE_s >= dE_n > 0.
pub fn heralded_rate(xi_s: f64, de_n_ev: f64, de_s_ev: f64) -> Result<f64> {
    if !(de_n_ev.is_finite() && de_n_ev > 0.0) {
        return Err(Error::domain(format!("heralded_rate: dE_n must be > 0, got {de_n_ev}")));
    }
    if !(de_s_ev.is_finite() && de_s_ev >= de_n_ev) {
        return Err(Error::domain(format!(
            "heralded_rate: need dE_s >= dE_n, got dE_s = {de_s_ev}, dE_n = {de_n_ev}"
        )));
    }
    if !(xi_s.is_finite() && xi_s >= 0.0) {
        return Err(Error::domain(format!("heralded_rate: xi_s must be >= 0, got {xi_s}")));
    }
    Ok(xi_s * de_n_ev / de_s_ev)
}
