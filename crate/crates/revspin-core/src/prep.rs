//! State engineering through post-selected probe readouts.
//!
//! Measuring a large equatorial coherent state with the probe tuned to
//! theta = pi/2, phi = 0 filters the binomial S_z distribution down to two
//! mirror-image components around +/- sigma_tilde: the readout m selects
//! the magnitude |sigma| it is most consistent with while leaving the sign
//! untouched, so the survivor is a cat-like superposition. The center
//! follows the readout through sigma_tilde ~ atan(sqrt((j+m)/(j-m)))/g and
//! the pair carries the relative phase (-1)^{j+m} e^{2 i sigma_tilde
//! varphi}. A later probe coupled to the pair sees an effective spin 1/2
//! with coupling renormalized to 2 g sigma_tilde.

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::measure::{measure, MeasurementParams};
use crate::state::SpinState;
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// Which pair of coherent directions a cat state superposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatAxis {
    X,
    Z,
}

/// Spin coherent state along +x: amplitudes 2^{-s} sqrt(C(2s, s+sigma)).
pub fn coherent_x_state(s: HalfInt) -> Result<SpinState> {
    prepare_coherent_equatorial(s, 0.0)
}

/// Equatorial spin coherent state at azimuth `varphi`:
/// c_sigma = e^{-i sigma varphi} 2^{-s} sqrt(C(2s, s+sigma)).
pub fn prepare_coherent_equatorial(s: HalfInt, varphi: f64) -> Result<SpinState> {
    s.require_spin()?;
    if !varphi.is_finite() {
        return Err(Error::NonFinite { name: "varphi", value: varphi });
    }
    let two_s = s.twice() as usize;
    let ln_norm = -(s.value()) * (2.0f64).ln();
    let amps = s
        .projections()
        .map(|sigma| {
            let ln_mag =
                ln_norm + 0.5 * crate::numeric::ln_binomial(two_s, ((s + sigma).twice() / 2) as usize);
            Complex64::from_polar(ln_mag.exp(), -sigma.value() * varphi)
        })
        .collect();
    SpinState::new(s, amps)
}

/// Superposition c_plus |+axis> + c_minus |-axis>, normalized. The +/-z
/// constituents are the extremal basis states; the +/-x ones are coherent
/// states.
pub fn cat_state(axis: CatAxis, s: HalfInt, c_plus: Complex64, c_minus: Complex64) -> Result<SpinState> {
    s.require_spin()?;
    for (name, c) in [("c_plus", c_plus), ("c_minus", c_minus)] {
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::NonFinite { name, value: c.norm() });
        }
    }
    let n = s.dim();
    let mut amps = vec![Complex64::new(0.0, 0.0); n];
    match axis {
        CatAxis::Z => {
            amps[0] = c_plus;
            amps[n - 1] = c_minus;
        }
        CatAxis::X => {
            let plus = coherent_x_state(s)?;
            let minus = prepare_coherent_equatorial(s, std::f64::consts::PI)?;
            for (dst, (p, q)) in amps.iter_mut().zip(plus.amplitudes().iter().zip(minus.amplitudes())) {
                *dst = c_plus * p + c_minus * q;
            }
        }
    }
    SpinState::normalized(s, amps)
}

/// Mean and variance of S_z in `state`.
pub fn spin_variance(state: &SpinState) -> (f64, f64) {
    state.z_moments()
}

/// Effective coupling seen by the +/- sigma_tilde pair: 2 g sigma_tilde.
/// The association matches the phase accumulated per component, so a
/// spin-1/2 run at the returned coupling reproduces the pair's
/// coefficients exactly.
pub fn renormalized_g(g: f64, sigma_tilde: HalfInt) -> Result<f64> {
    if !g.is_finite() {
        return Err(Error::NonFinite { name: "g", value: g });
    }
    if sigma_tilde.twice() == 0 {
        return Err(Error::ZeroSigmaTilde);
    }
    Ok(2.0 * g * sigma_tilde.value())
}

/// Outcome of one post-selected preparation run.
#[derive(Clone, Debug)]
pub struct PrepResult {
    /// Readout the preparation conditions on.
    pub outcome_m: HalfInt,
    /// Probability of obtaining that readout.
    pub probability: f64,
    /// Normalized post-measurement system state.
    pub state: SpinState,
    /// S_z distribution of `state`, descending sigma.
    pub distribution: Vec<(HalfInt, f64)>,
    /// Mirror pair (+sigma_tilde, -sigma_tilde) carrying the most weight.
    pub peaks: (HalfInt, HalfInt),
    /// Continuum estimate atan(sqrt((j+m)/(j-m)))/g of the peak location.
    pub peak_estimate: f64,
    /// Unit phase of the -sigma_tilde component relative to +sigma_tilde.
    pub relative_phase: Complex64,
    /// Probability weight outside the mirror pair.
    pub leaked: f64,
}

/// Measure the equatorial coherent state at azimuth `varphi` with probe
/// parameters (j, g, pi/2, 0) and condition on readout m.
pub fn subspace_prepare(
    s: HalfInt,
    j: HalfInt,
    g: f64,
    varphi: f64,
    m: HalfInt,
) -> Result<PrepResult> {
    let initial = prepare_coherent_equatorial(s, varphi)?;
    let params = MeasurementParams::new(j, g, FRAC_PI_2, 0.0)?;
    m.require_projection_of(j)?;
    let table = measure(&initial, &params);
    let outcome = table.get(m).expect("m verified on the lattice");
    if outcome.underflow {
        return Err(Error::VanishingPreparation(m));
    }
    let state = outcome.post.clone();
    let distribution: Vec<(HalfInt, f64)> = s
        .projections()
        .zip(state.amplitudes())
        .map(|(sigma, c)| (sigma, c.norm_sqr()))
        .collect();

    let mut peak = HalfInt::from_twice(s.twice() % 2);
    let mut best = f64::NEG_INFINITY;
    for &(sigma, rho) in &distribution {
        if sigma.is_negative() {
            break;
        }
        if rho > best {
            best = rho;
            peak = sigma;
        }
    }
    let peaks = (peak, -peak);

    let peak_estimate = if (j + m).twice() == 0 {
        0.0
    } else {
        (((j + m).value()) / ((j - m).value())).sqrt().atan() / g
    };

    let (relative_phase, leaked) = if peak.twice() == 0 {
        (Complex64::new(1.0, 0.0), 1.0 - best)
    } else {
        let up = state.amplitude(peak).expect("peak on the lattice");
        let dn = state.amplitude(-peak).expect("mirror peak on the lattice");
        let ratio = dn / up;
        let phase = if ratio.norm() > 0.0 { ratio / ratio.norm() } else { Complex64::new(1.0, 0.0) };
        (phase, 1.0 - up.norm_sqr() - dn.norm_sqr())
    };

    Ok(PrepResult {
        outcome_m: m,
        probability: outcome.probability,
        state,
        distribution,
        peaks,
        peak_estimate,
        relative_phase,
        leaked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::coefficient_a;
    use crate::numeric::parity_sign;
    use crate::wigner::rotate_state;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    #[test]
    fn equatorial_coherent_state_matches_the_rotated_pole() {
        let s = HalfInt::from_twice(7);
        let varphi = 0.83;
        let direct = prepare_coherent_equatorial(s, varphi).unwrap();
        let top = SpinState::basis(s, s).unwrap();
        let rotated = rotate_state(&top, FRAC_PI_2, varphi);
        for sigma in s.projections() {
            let a = direct.amplitude(sigma).unwrap();
            let b = rotated.amplitude(sigma).unwrap();
            assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-14);
            assert_abs_diff_eq!(a.im, b.im, epsilon = 1e-14);
        }
    }

    #[test]
    fn coherent_x_state_is_binomial_and_normalized() {
        let s = HalfInt::from_int(10);
        let state = coherent_x_state(s).unwrap();
        assert_relative_eq!(state.norm_sqr(), 1.0, max_relative = 1e-12);
        let (mean, var) = spin_variance(&state);
        assert_abs_diff_eq!(mean, 0.0, epsilon = 1e-12);
        assert_relative_eq!(var, s.value() / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn cat_states_superpose_the_requested_directions() {
        let s = HalfInt::from_int(2);
        let w = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z = cat_state(CatAxis::Z, s, w, w).unwrap();
        assert_relative_eq!(z.amplitude(s).unwrap().re, w.re, max_relative = 1e-14);
        assert_relative_eq!(z.amplitude(-s).unwrap().re, w.re, max_relative = 1e-14);
        assert_abs_diff_eq!(z.amplitude(HalfInt::ZERO).unwrap().norm(), 0.0, epsilon = 1e-15);

        // Equal-weight x cat: odd binomial amplitudes cancel.
        let x = cat_state(CatAxis::X, s, w, w).unwrap();
        assert_abs_diff_eq!(x.amplitude(HalfInt::from_int(1)).unwrap().norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(x.amplitude(HalfInt::from_int(-1)).unwrap().norm(), 0.0, epsilon = 1e-14);
        assert!(x.amplitude(HalfInt::ZERO).unwrap().norm() > 0.1);

        // Nothing to normalize when both weights vanish.
        let zero = Complex64::new(0.0, 0.0);
        assert!(matches!(cat_state(CatAxis::Z, s, zero, zero), Err(Error::ZeroVector)));
    }

    #[test]
    fn preparation_reference_run() {
        // s = 10, j = 10, g = 0.25, varphi = 0, m = 5.
        let s = HalfInt::from_int(10);
        let j = HalfInt::from_int(10);
        let m = HalfInt::from_int(5);
        let prep = subspace_prepare(s, j, 0.25, 0.0, m).unwrap();
        assert_relative_eq!(prep.probability, 0.0157067738, max_relative = 1e-8);
        assert_eq!(prep.peaks, (HalfInt::from_int(4), HalfInt::from_int(-4)));
        assert_relative_eq!(prep.peak_estimate, 4.0 * PI / 3.0, max_relative = 1e-14);
        // (-1)^{j+m} = -1 and varphi = 0: the pair is antisymmetric.
        assert_abs_diff_eq!(prep.relative_phase.re, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(prep.relative_phase.im, 0.0, epsilon = 1e-12);
        assert!((0.0..1.0).contains(&prep.leaked), "leak = {}", prep.leaked);
        let rho = |sigma: i32| prep.state.amplitude(HalfInt::from_int(sigma)).unwrap().norm_sqr();
        assert_relative_eq!(prep.leaked, 1.0 - rho(4) - rho(-4), max_relative = 1e-12);
    }

    #[test]
    fn distribution_is_symmetric_and_total() {
        let s = HalfInt::from_int(10);
        let prep =
            subspace_prepare(s, HalfInt::from_int(10), 0.25, 0.4, HalfInt::from_int(5)).unwrap();
        let rho = &prep.distribution;
        let n = rho.len();
        let total: f64 = rho.iter().map(|&(_, p)| p).sum();
        assert_relative_eq!(total, 1.0, max_relative = 1e-12);
        for k in 0..n {
            let (sigma, p) = rho[k];
            let (mirror, q) = rho[n - 1 - k];
            assert_eq!(mirror, -sigma);
            if p > 1e-300 {
                assert_relative_eq!(p, q, max_relative = 1e-11, epsilon = 1e-300);
            }
        }
        // sigma = 0 never survives an informative readout of an integer spin.
        assert!(prep.state.amplitude(HalfInt::ZERO).unwrap().norm_sqr() < 1e-30);
    }

    #[test]
    fn relative_phase_tracks_the_azimuth() {
        let s = HalfInt::from_int(10);
        let j = HalfInt::from_int(10);
        let m = HalfInt::from_int(5);
        let varphi = 0.3;
        let prep = subspace_prepare(s, j, 0.25, varphi, m).unwrap();
        let sigma_tilde = prep.peaks.0.value();
        let expect = parity_sign((j + m).twice() / 2)
            * Complex64::from_polar(1.0, 2.0 * sigma_tilde * varphi);
        assert_abs_diff_eq!(prep.relative_phase.re, expect.re, epsilon = 1e-11);
        assert_abs_diff_eq!(prep.relative_phase.im, expect.im, epsilon = 1e-11);
    }

    #[test]
    fn extremal_readout_peaks_at_the_pole() {
        let s = HalfInt::from_int(4);
        let j = HalfInt::from_int(3);
        let prep = subspace_prepare(s, j, 0.4, 0.0, HalfInt::from_int(3)).unwrap();
        assert_relative_eq!(prep.peak_estimate, FRAC_PI_2 / 0.4, max_relative = 1e-14);
        let low = subspace_prepare(s, j, 0.4, 0.0, HalfInt::from_int(-3)).unwrap();
        assert_eq!(low.peak_estimate, 0.0);
        assert_eq!(low.peaks.0, HalfInt::ZERO);
        assert_eq!(low.relative_phase, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn renormalized_coupling_reproduces_pair_coefficients_exactly() {
        let j = HalfInt::from_int(10);
        let g = 0.25;
        let sigma_tilde = HalfInt::from_int(4);
        let g_eff = renormalized_g(g, sigma_tilde).unwrap();
        let full = MeasurementParams::new(j, g, FRAC_PI_2, 0.0).unwrap();
        let half = MeasurementParams::new(j, g_eff, FRAC_PI_2, 0.0).unwrap();
        for m in j.projections() {
            for (big, small) in [
                (sigma_tilde, HalfInt::HALF),
                (-sigma_tilde, -HalfInt::HALF),
            ] {
                let a_full = coefficient_a(&full, m, big).unwrap();
                let a_half = coefficient_a(&half, m, small).unwrap();
                assert_eq!(a_full, a_half, "m = {m}, sigma = {big}");
            }
        }
    }

    #[test]
    fn renormalized_coupling_rejects_the_stationary_component() {
        assert!(matches!(renormalized_g(0.3, HalfInt::ZERO), Err(Error::ZeroSigmaTilde)));
        assert_relative_eq!(
            renormalized_g(0.3, HalfInt::from_twice(3)).unwrap(),
            0.9,
            max_relative = 1e-15
        );
    }

    #[test]
    fn vanishing_readouts_are_reported() {
        // g = 0 leaves the probe along +x: only m = -j can fire.
        let s = HalfInt::from_int(2);
        let j = HalfInt::from_int(8);
        let err = subspace_prepare(s, j, 0.0, 0.0, HalfInt::from_int(8));
        assert!(matches!(err, Err(Error::VanishingPreparation(_))));
        let ok = subspace_prepare(s, j, 0.0, 0.0, HalfInt::from_int(-8)).unwrap();
        assert_relative_eq!(ok.probability, 1.0, max_relative = 1e-12);
        assert_eq!(ok.peak_estimate, 0.0);
    }
}
