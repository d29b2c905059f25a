//! Probes prepared in a superposition of different spin magnitudes.
//!
//! When the probe magnitude j fluctuates coherently, the back-action on a
//! spin-1/2 system for readout m is the sum over contributing magnitudes,
//!
//! ```text
//! M_m = sum'_j  b_j a^(j)_{m,sigma}(theta, phi) |sigma><sigma| ,
//! ```
//!
//! the prime restricting to components whose projection lattice contains m.
//! The reversing parameter set (pi - theta, pi - phi) still works: every
//! component picks up the same outcome phase e^{-i m pi}, independent of j,
//! so the reversal stays proportional across the superposition. The naive
//! alternative (pi - theta, -phi) attaches a j-dependent sign (-1)^{j+m}
//! and no longer cancels when magnitudes of both parities contribute to
//! the same outcome.

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::measure::{coefficient_a, MeasurementParams};
use crate::state::NORM_TOL;
use num_complex::Complex64;
use std::collections::BTreeSet;
use std::f64::consts::PI;

/// Normalized coherent superposition of probe magnitudes.
#[derive(Clone, Debug)]
pub struct ProbeSuperposition {
    /// (j, b_j) sorted by ascending j.
    components: Vec<(HalfInt, Complex64)>,
}

impl ProbeSuperposition {
    /// Validate and sort the component list. Magnitudes must be distinct
    /// and non-negative, and the weights normalized.
    pub fn new(mut components: Vec<(HalfInt, Complex64)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyProbe);
        }
        components.sort_by_key(|(j, _)| *j);
        let mut norm_sq = 0.0;
        for (idx, (j, b)) in components.iter().enumerate() {
            if j.is_negative() {
                return Err(Error::NegativeSpin(*j));
            }
            if idx > 0 && components[idx - 1].0 == *j {
                return Err(Error::DuplicateProbeComponent(*j));
            }
            norm_sq += b.norm_sqr();
        }
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq, tol: NORM_TOL });
        }
        Ok(ProbeSuperposition { components })
    }

    pub fn components(&self) -> &[(HalfInt, Complex64)] {
        &self.components
    }

    /// Union of the component projection lattices, descending. Magnitudes
    /// of different parity contribute interleaved integer and half-odd
    /// outcomes.
    pub fn outcomes(&self) -> Vec<HalfInt> {
        let mut twice: BTreeSet<i32> = BTreeSet::new();
        for (j, _) in &self.components {
            for m in j.projections() {
                twice.insert(m.twice());
            }
        }
        twice.into_iter().rev().map(HalfInt::from_twice).collect()
    }

    fn contributes(j: HalfInt, m: HalfInt) -> bool {
        m.twice().abs() <= j.twice() && (j.twice() - m.twice()).rem_euclid(2) == 0
    }
}

fn operator_entries(
    probe: &ProbeSuperposition,
    theta: f64,
    phi: f64,
    g: f64,
    m: HalfInt,
    wrap: bool,
) -> Result<[Complex64; 2]> {
    let mut entries = [Complex64::new(0.0, 0.0); 2];
    let mut any = false;
    for &(j, b) in probe.components() {
        if !ProbeSuperposition::contributes(j, m) {
            continue;
        }
        any = true;
        let params = if wrap {
            MeasurementParams::new(j, g, theta, phi)?
        } else {
            MeasurementParams::new_unwrapped(j, g, theta, phi)
        };
        for (k, sigma) in [HalfInt::HALF, -HalfInt::HALF].into_iter().enumerate() {
            entries[k] += b * coefficient_a(&params, m, sigma)?;
        }
    }
    if !any {
        return Err(Error::NoContribution(m));
    }
    Ok(entries)
}

/// Diagonal entries (sigma = +1/2 then -1/2) of the back-action operator
/// for outcome m on a spin-1/2 system.
pub fn fluct_operator(
    probe: &ProbeSuperposition,
    theta: f64,
    phi: f64,
    g: f64,
    m: HalfInt,
) -> Result<[Complex64; 2]> {
    operator_entries(probe, theta, phi, g, m, true)
}

/// Entry-wise ratios of the composed operator R M_m for one outcome.
#[derive(Clone, Copy, Debug)]
pub struct ReversalRatios {
    pub m: HalfInt,
    /// (up entry)/(down entry) of the product using the working reversal
    /// parameters (pi - theta, pi - phi). Unity means the composition is
    /// proportional to the identity.
    pub ratio_good: Complex64,
    /// Same ratio for the naive parameters (pi - theta, -phi).
    pub ratio_bad: Complex64,
}

/// Compose each outcome's back-action with the two candidate reversal
/// operators and report how close each product is to a multiple of the
/// identity.
pub fn fluct_reversal_check(
    probe: &ProbeSuperposition,
    theta: f64,
    phi: f64,
    g: f64,
) -> Result<Vec<ReversalRatios>> {
    if !theta.is_finite() || !(0.0..=PI).contains(&theta) {
        return Err(Error::ThetaRange(theta));
    }
    for (name, value) in [("g", g), ("phi", phi)] {
        if !value.is_finite() {
            return Err(Error::NonFinite { name, value });
        }
    }
    let phi = crate::numeric::wrap_angle(phi);
    let mut out = Vec::new();
    for m in probe.outcomes() {
        let first = operator_entries(probe, theta, phi, g, m, false)?;
        let good = operator_entries(probe, PI - theta, PI - phi, g, -m, false)?;
        let bad = operator_entries(probe, PI - theta, -phi, g, m, false)?;
        let mut ratios = [Complex64::new(0.0, 0.0); 2];
        for (slot, second) in [good, bad].into_iter().enumerate() {
            let up = second[0] * first[0];
            let dn = second[1] * first[1];
            if up.norm_sqr() == 0.0 || dn.norm_sqr() == 0.0 {
                return Err(Error::VanishingEntry(m));
            }
            ratios[slot] = up / dn;
        }
        out.push(ReversalRatios { m, ratio_good: ratios[0], ratio_bad: ratios[1] });
    }
    Ok(out)
}
