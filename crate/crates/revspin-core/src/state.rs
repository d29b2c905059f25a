//! Pure states of a spin-s system in the S_z eigenbasis.

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::numeric::Kahan;
use num_complex::Complex64;

/// Tolerance on |sum |c|^2 - 1| for externally supplied amplitudes.
pub const NORM_TOL: f64 = 1e-12;

/// A normalized pure state of a spin-s system. Amplitudes are stored in
/// descending order of the magnetic quantum number: sigma = s, s-1, ..., -s.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinState {
    s: HalfInt,
    amps: Vec<Complex64>,
}

impl SpinState {
    /// Validates the spin, the amplitude count (2s+1), and normalization
    /// within [`NORM_TOL`].
    pub fn new(s: HalfInt, amps: Vec<Complex64>) -> Result<Self> {
        s.require_spin()?;
        if amps.len() != s.dim() {
            return Err(Error::AmplitudeCount { expected: s.dim(), got: amps.len() });
        }
        let norm_sq = sum_norm_sqr(&amps);
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq, tol: NORM_TOL });
        }
        Ok(SpinState { s, amps })
    }

    /// Basis state |sigma>.
    pub fn basis(s: HalfInt, sigma: HalfInt) -> Result<Self> {
        s.require_spin()?;
        sigma.require_projection_of(s)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); s.dim()];
        amps[sigma.index_in(s).expect("validated projection")] = Complex64::new(1.0, 0.0);
        Ok(SpinState { s, amps })
    }

    /// Equal-weight superposition of all 2s+1 basis states with real
    /// positive amplitudes.
    pub fn uniform(s: HalfInt) -> Result<Self> {
        s.require_spin()?;
        let w = 1.0 / (s.dim() as f64).sqrt();
        Ok(SpinState { s, amps: vec![Complex64::new(w, 0.0); s.dim()] })
    }

    /// Normalizes an arbitrary nonzero amplitude vector.
    pub fn normalized(s: HalfInt, amps: Vec<Complex64>) -> Result<Self> {
        s.require_spin()?;
        if amps.len() != s.dim() {
            return Err(Error::AmplitudeCount { expected: s.dim(), got: amps.len() });
        }
        let norm = sum_norm_sqr(&amps).sqrt();
        if norm.is_nan() || norm <= 0.0 || norm.is_infinite() {
            return Err(Error::ZeroVector);
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(SpinState { s, amps })
    }

    /// Construct without renormalizing. Callers guarantee the vector is
    /// normalized up to arithmetic rounding (e.g. output of a unitary).
    pub(crate) fn from_amplitudes_unchecked(s: HalfInt, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), s.dim());
        SpinState { s, amps }
    }

    pub fn spin(&self) -> HalfInt {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// Amplitudes in descending sigma order.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, sigma: HalfInt) -> Result<Complex64> {
        let idx = sigma.index_in(self.s).ok_or(Error::InvalidProjection { j: self.s, m: sigma })?;
        Ok(self.amps[idx])
    }

    pub fn norm_sqr(&self) -> f64 {
        sum_norm_sqr(&self.amps)
    }

    /// <self|other>. Both states must carry the same spin.
    pub fn overlap(&self, other: &SpinState) -> Complex64 {
        assert_eq!(self.s, other.s, "overlap requires equal spins");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |<self|other>|.
    pub fn fidelity(&self, other: &SpinState) -> f64 {
        self.overlap(other).norm()
    }

    /// Mean and variance of S_z in units of hbar.
    pub fn z_moments(&self) -> (f64, f64) {
        let mut mean = Kahan::new();
        let mut second = Kahan::new();
        for (sigma, c) in self.s.projections().zip(&self.amps) {
            let w = c.norm_sqr();
            let v = sigma.value();
            mean.add(v * w);
            second.add(v * v * w);
        }
        let m = mean.value();
        (m, second.value() - m * m)
    }
}

fn sum_norm_sqr(amps: &[Complex64]) -> f64 {
    let mut k = Kahan::new();
    for a in amps {
        k.add(a.norm_sqr());
    }
    k.value()
}
