//! Laboratory parameters to coupling rates, and the resulting estimates for
//! the qubit-qubit and qubit-oscillator setups. SI units throughout.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jaynes_cummings::jc_witness_closed_form;

/// Gravitational constant (m³ kg⁻¹ s⁻²).
pub const G: f64 = 6.674e-11;
/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.0546e-34;
/// Density of tungsten (kg/m³).
pub const TUNGSTEN_DENSITY: f64 = 19300.0;

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

/// Two masses, each in a superposition of two positions along a common axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitQubitSetup {
    /// Memory mass (kg).
    pub big_m: f64,
    /// Probe mass (kg).
    pub m: f64,
    /// Branch separation of the memory mass (m).
    pub delta_big_x: f64,
    /// Branch separation of the probe mass (m).
    pub delta_x: f64,
    /// Vertical offset between the two interferometers (m).
    pub d: f64,
}

impl QubitQubitSetup {
    /// `M = m = 1e-14 kg`, `ΔX = 100 μm`, `Δx = 300 μm`, `d = 0`.
    pub fn reference() -> Self {
        QubitQubitSetup { big_m: 1e-14, m: 1e-14, delta_big_x: 100e-6, delta_x: 300e-6, d: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        positive("M", self.big_m)?;
        positive("m", self.m)?;
        positive("delta_X", self.delta_big_x)?;
        positive("delta_x", self.delta_x)?;
        if !(self.d >= 0.0) || !self.d.is_finite() {
            return Err(Error::InvalidParameter(format!("d must be non-negative, got {}", self.d)));
        }
        Ok(())
    }
}

/// `g = GMm/(2ħ) [(((ΔX-Δx)/2)² + d²)^{-1/2} - (((ΔX+Δx)/2)² + d²)^{-1/2}]`.
pub fn qubit_qubit_coupling(setup: &QubitQubitSetup) -> Result<f64> {
    setup.validate()?;
    let near = ((setup.delta_big_x - setup.delta_x) / 2.0).hypot(setup.d);
    if near == 0.0 {
        return Err(Error::InvalidParameter("coincident branches (zero separation)".into()));
    }
    let far = ((setup.delta_big_x + setup.delta_x) / 2.0).hypot(setup.d);
    Ok(G * setup.big_m * setup.m / (2.0 * HBAR) * (1.0 / near - 1.0 / far))
}

/// `τ = arccos(-1/3)/(4g)`: the shortest interaction time at which the
/// analytical witness `λ[1/3 + cos 4gτ]` turns negative.
pub fn min_negative_time(g: f64) -> Result<f64> {
    positive("g", g)?;
    Ok((-1.0f64 / 3.0).acos() / (4.0 * g))
}

/// Probe mass coupled to a spherical oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitOscillatorSetup {
    /// Probe mass (kg).
    pub m: f64,
    /// Oscillator mass (kg).
    pub big_m: f64,
    /// Oscillator frequency (Hz).
    pub frequency: f64,
    /// Near branch distance from the oscillator centre (m).
    pub d_l: f64,
    /// Far branch distance from the oscillator centre (m).
    pub d_r: f64,
    /// Oscillator density (kg/m³).
    pub density: f64,
}

/// Radius of a homogeneous sphere, `(3M/(4πρ))^{1/3}`.
pub fn sphere_radius(mass: f64, density: f64) -> f64 {
    (3.0 * mass / (4.0 * PI * density)).cbrt()
}

impl QubitOscillatorSetup {
    /// Branch distances given from the sphere surface.
    pub fn from_surface_distances(
        m: f64,
        big_m: f64,
        frequency: f64,
        surface_l: f64,
        surface_r: f64,
        density: f64,
    ) -> Result<Self> {
        positive("M", big_m)?;
        positive("density", density)?;
        let r = sphere_radius(big_m, density);
        let s = QubitOscillatorSetup { m, big_m, frequency, d_l: r + surface_l, d_r: r + surface_r, density };
        s.validate()?;
        Ok(s)
    }

    /// 1 mg tungsten at 10 Hz, branches 100 μm and 350 μm from the surface, `m = 1e-14 kg`.
    pub fn reference() -> Self {
        Self::from_surface_distances(1e-14, 1e-6, 10.0, 100e-6, 350e-6, TUNGSTEN_DENSITY)
            .expect("reference parameters are valid")
    }

    pub fn radius(&self) -> f64 {
        sphere_radius(self.big_m, self.density)
    }

    pub fn omega(&self) -> f64 {
        2.0 * PI * self.frequency
    }

    pub fn validate(&self) -> Result<()> {
        positive("m", self.m)?;
        positive("M", self.big_m)?;
        positive("frequency", self.frequency)?;
        positive("density", self.density)?;
        if !(self.d_r > self.d_l) {
            return Err(Error::InvalidParameter(format!(
                "need d_r > d_l for a nonzero coupling, got d_l = {}, d_r = {}",
                self.d_l, self.d_r
            )));
        }
        let r = self.radius();
        if !(self.d_l > r) {
            return Err(Error::InvalidParameter(format!("d_l = {} lies inside the sphere (radius {r})", self.d_l)));
        }
        Ok(())
    }
}

/// `g = G m √M / √(8ħω) (d_l^{-2} - d_r^{-2})`.
pub fn qubit_osc_coupling(setup: &QubitOscillatorSetup) -> Result<f64> {
    setup.validate()?;
    Ok(G * setup.m * setup.big_m.sqrt() / (8.0 * HBAR * setup.omega()).sqrt()
        * (setup.d_l.powi(-2) - setup.d_r.powi(-2)))
}

/// Probe mass needed for witness magnitude `target_w_mag` at interaction time
/// `τ = π/(2κ)`, using `|w| ≈ 2g²/Δ²` and `Δ² = 4κ² - 4g²`. `setup.m` is ignored.
pub fn required_probe_mass(setup: &QubitOscillatorSetup, target_w_mag: f64, tau: f64) -> Result<f64> {
    positive("target |w|", target_w_mag)?;
    positive("tau", tau)?;
    let kappa = PI / (2.0 * tau);
    let g = kappa * (4.0 * target_w_mag / (2.0 + 4.0 * target_w_mag)).sqrt();
    if !(g < kappa) {
        return Err(Error::InvalidParameter("target unreachable: coupling would exceed kappa".into()));
    }
    let unit = QubitOscillatorSetup { m: 1.0, ..*setup };
    Ok(g / qubit_osc_coupling(&unit)?)
}

/// Exact witness `|Δ|/sqrt(4g²+Δ²) - 1` for the given setup at `τ = π/(2κ)`.
pub fn oscillator_witness(setup: &QubitOscillatorSetup, tau: f64) -> Result<f64> {
    positive("tau", tau)?;
    let g = qubit_osc_coupling(setup)?;
    let kappa = PI / (2.0 * tau);
    if g >= kappa {
        return Err(Error::InvalidParameter(format!("coupling {g} exceeds kappa {kappa} for tau = {tau}")));
    }
    let delta = 2.0 * (kappa * kappa - g * g).sqrt();
    Ok(jc_witness_closed_form(g, delta))
}
