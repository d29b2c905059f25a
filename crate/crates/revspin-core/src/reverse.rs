//! Reversing measurement, two-stage statistics, and recovery diagnostics.
//!
//! The reversal strategy runs a second measurement with the probe prepared
//! at the complementary direction (pi - theta, pi - phi). The coefficient
//! identity
//!
//! ```text
//! a_{m' sigma}(pi - theta, pi - phi) = e^{-i m' pi} a_{-m', -sigma}(theta, phi)
//! ```
//!
//! makes the second-stage outcome m' = -m special: for s = 1/2 the composed
//! operator T_{-m}(rev) T_m(orig) is proportional to the identity, so the
//! premeasurement state returns up to a global phase e^{i alpha}. The second
//! identity
//!
//! ```text
//! a_{m' sigma}(pi - theta, -phi) = (-1)^{j + m'} a_{m', -sigma}(theta, phi)
//! ```
//!
//! underlies the variant that recovers at m' = +m. Away from exact recovery
//! the quality of the reversal is tracked through joint probabilities
//! p_{m m'}, overlap fidelities F_{m m'}, and several closed-form summaries
//! (recovery probability q, width delta m, large-j asymptotics, weak-coupling
//! expansions).

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::measure::{
    chi, CoefficientSet, MeasurementParams, UNDERFLOW_PROBABILITY,
};
use crate::numeric::{atan2_branch, parity_sign, phase_i_pow, Kahan};
use crate::state::SpinState;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Fidelity threshold defining "successful" recovery in q'.
pub const RECOVERY_FIDELITY_THRESHOLD: f64 = 0.95;

/// Default bound on the weak-interaction expansion parameter.
pub const WEAK_MARGIN_FACTOR: f64 = 0.01;

/// Probe parameters of the reversing stage: (j, g, pi - theta, pi - phi),
/// with phi reduced back into (-pi, pi].
pub fn reversing_params(params: &MeasurementParams) -> MeasurementParams {
    MeasurementParams::new(params.j(), params.g(), PI - params.theta(), PI - params.phi())
        .expect("complement of valid parameters")
}

/// Reversing-stage parameters kept at the literal angles (pi - theta,
/// pi - phi) without reducing phi. The half-angle amplitudes of a
/// half-odd-integer probe change sign under phi -> phi - 2pi, so internal
/// compositions use this form to keep relative phases exact.
fn reversing_params_literal(params: &MeasurementParams) -> MeasurementParams {
    MeasurementParams::new_unwrapped(params.j(), params.g(), PI - params.theta(), PI - params.phi())
}

/// Largest deviations found when checking the two coefficient identities.
#[derive(Clone, Copy, Debug)]
pub struct SymmetryDeviation {
    /// max |a(pi-theta, pi-phi)_{m sigma} - e^{-i m pi} a_{-m, -sigma}|
    pub reversing: f64,
    /// max |a(pi-theta, -phi)_{m sigma} - (-1)^{j+m} a_{m, -sigma}|
    pub variant: f64,
}

impl SymmetryDeviation {
    pub fn max(&self) -> f64 {
        self.reversing.max(self.variant)
    }
}

/// Verify both coefficient identities entrywise over the full (m, sigma)
/// grid of probe spin j and system spin s.
pub fn symmetry_check(params: &MeasurementParams, s: HalfInt) -> Result<SymmetryDeviation> {
    s.require_spin()?;
    let base = CoefficientSet::new(params, s)?;
    let reversing = CoefficientSet::new(&reversing_params_literal(params), s)?;
    let variant_params = MeasurementParams::new_unwrapped(
        params.j(),
        params.g(),
        PI - params.theta(),
        -params.phi(),
    );
    let variant = CoefficientSet::new(&variant_params, s)?;

    let mut dev_rev = 0.0f64;
    let mut dev_var = 0.0f64;
    for m in params.j().projections() {
        let jm_int = (params.j().twice() + m.twice()) / 2;
        for sigma in s.projections() {
            let lhs = reversing.a(m, sigma).expect("grid point");
            let rhs = phase_i_pow(-m.twice()) * base.a(-m, -sigma).expect("grid point");
            dev_rev = dev_rev.max((lhs - rhs).norm());

            let lhs2 = variant.a(m, sigma).expect("grid point");
            let rhs2 = parity_sign(jm_int) * base.a(m, -sigma).expect("grid point");
            dev_var = dev_var.max((lhs2 - rhs2).norm());
        }
    }
    Ok(SymmetryDeviation { reversing: dev_rev, variant: dev_var })
}

/// One (m, m') cell of the two-stage statistics.
#[derive(Clone, Copy, Debug)]
pub struct JointEntry {
    pub m: HalfInt,
    pub mp: HalfInt,
    pub probability: f64,
    /// |<psi | psi_{m m'}>|; 0 when the cell probability underflowed.
    pub fidelity: f64,
}

/// Joint outcome statistics of measurement followed by reversal.
#[derive(Clone, Debug)]
pub struct JointTable {
    params_first: MeasurementParams,
    params_second: MeasurementParams,
    state: SpinState,
    entries: Vec<JointEntry>,
}

impl JointTable {
    pub fn params_first(&self) -> &MeasurementParams {
        &self.params_first
    }

    /// Reversing-stage parameters in the canonical phi domain.
    pub fn params_second(&self) -> &MeasurementParams {
        &self.params_second
    }

    pub fn state(&self) -> &SpinState {
        &self.state
    }

    /// Entries in row-major order: m descending outer, m' descending inner.
    pub fn entries(&self) -> &[JointEntry] {
        &self.entries
    }

    pub fn get(&self, m: HalfInt, mp: HalfInt) -> Option<&JointEntry> {
        let j = self.params_first.j();
        let row = m.index_in(j)?;
        let col = mp.index_in(j)?;
        Some(&self.entries[row * j.dim() + col])
    }

    pub fn total_probability(&self) -> f64 {
        let mut k = Kahan::new();
        for e in &self.entries {
            k.add(e.probability);
        }
        k.value()
    }

    /// sum p_{m m'} F_{m m'}.
    pub fn average_fidelity(&self) -> f64 {
        let mut k = Kahan::new();
        for e in &self.entries {
            k.add(e.probability * e.fidelity);
        }
        k.value()
    }

    /// sum p_{m m'} F_{m m'}^2.
    pub fn average_sq_fidelity(&self) -> f64 {
        let mut k = Kahan::new();
        for e in &self.entries {
            k.add(e.probability * e.fidelity * e.fidelity);
        }
        k.value()
    }

    /// First-stage marginal p_m, descending in m.
    pub fn marginal_first(&self) -> Vec<(HalfInt, f64)> {
        let j = self.params_first.j();
        let n = j.dim();
        j.projections()
            .enumerate()
            .map(|(row, m)| {
                let mut k = Kahan::new();
                for e in &self.entries[row * n..(row + 1) * n] {
                    k.add(e.probability);
                }
                (m, k.value())
            })
            .collect()
    }

    /// Probability mass on the exact-recovery diagonal m' = -m.
    pub fn diagonal_mass(&self) -> f64 {
        let j = self.params_first.j();
        let mut k = Kahan::new();
        for m in j.projections() {
            if let Some(e) = self.get(m, -m) {
                k.add(e.probability);
            }
        }
        k.value()
    }

    /// Probability mass on cells with fidelity at or above `threshold`.
    pub fn recovered_mass(&self, threshold: f64) -> f64 {
        let mut k = Kahan::new();
        for e in &self.entries {
            if e.fidelity >= threshold {
                k.add(e.probability);
            }
        }
        k.value()
    }
}

/// Run the measurement and its reversal on `state`, collecting every
/// (m, m') probability and fidelity.
pub fn joint_measure(state: &SpinState, params: &MeasurementParams) -> JointTable {
    let s = state.spin();
    let first = CoefficientSet::new(params, s).expect("spin of a valid state");
    let second =
        CoefficientSet::new(&reversing_params_literal(params), s).expect("complement params");
    let weights: Vec<f64> = state.amplitudes().iter().map(|c| c.norm_sqr()).collect();
    let j = params.j();
    let n = j.dim();

    let mut entries = Vec::with_capacity(n * n);
    for (row, m) in j.projections().enumerate() {
        for (row2, mp) in j.projections().enumerate() {
            let mut p = Kahan::new();
            let mut overlap = Complex64::new(0.0, 0.0);
            for (col, &w) in weights.iter().enumerate() {
                let prod = second.table()[(row2, col)] * first.table()[(row, col)];
                p.add(prod.norm_sqr() * w);
                overlap += prod * w;
            }
            let p = p.value();
            let fidelity =
                if p < UNDERFLOW_PROBABILITY { 0.0 } else { overlap.norm() / p.sqrt() };
            entries.push(JointEntry { m, mp, probability: p, fidelity });
        }
    }
    JointTable {
        params_first: *params,
        params_second: reversing_params(params),
        state: state.clone(),
        entries,
    }
}

/// System state conditioned on the ordered outcome pair (m, m').
#[derive(Clone, Debug)]
pub struct FinalState {
    pub state: SpinState,
    pub probability: f64,
    /// Phase of the overlap <psi_in | psi_out>; 1 when the overlap
    /// vanishes. Equal to the recovery phase e^{i alpha} on m' = -m.
    pub phase: Complex64,
}

/// Normalized state after observing first m and then m', including the
/// physical prefactor e^{-i m' pi} of the reversing coefficients.
pub fn final_state(
    state: &SpinState,
    params: &MeasurementParams,
    m: HalfInt,
    mp: HalfInt,
) -> Result<FinalState> {
    let s = state.spin();
    m.require_projection_of(params.j())?;
    mp.require_projection_of(params.j())?;
    let first = CoefficientSet::new(params, s)?;
    let second = CoefficientSet::new(&reversing_params_literal(params), s)?;

    let mut p = Kahan::new();
    let mut amps = Vec::with_capacity(s.dim());
    for (sigma, c) in s.projections().zip(state.amplitudes()) {
        let w = second.a(mp, sigma).expect("grid point")
            * first.a(m, sigma).expect("grid point")
            * c;
        p.add(w.norm_sqr());
        amps.push(w);
    }
    let p = p.value();
    if p < UNDERFLOW_PROBABILITY {
        return Err(Error::VanishingProbability { m, mp });
    }
    let scale = p.sqrt();
    let front = phase_i_pow(-mp.twice());
    for a in &mut amps {
        *a = front * *a / scale;
    }
    let out = SpinState::from_amplitudes_unchecked(s, amps);
    let overlap = state.overlap(&out);
    let phase = if overlap.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        overlap / overlap.norm()
    };
    Ok(FinalState { state: out, probability: p, phase })
}

/// Probability that the reversal lands on the exact-recovery diagonal,
/// q = sum_m |a_{m,+1/2} a_{m,-1/2}|^2.
///
/// The value is state-independent for s = 1/2; passing a state routes the
/// computation through the composed two-stage products instead of the
/// closed form, which is useful as a cross-check.
pub fn recovery_probability(
    params: &MeasurementParams,
    state: Option<&SpinState>,
) -> Result<f64> {
    match state {
        None => {
            let set = CoefficientSet::new(params, HalfInt::HALF)?;
            let mut k = Kahan::new();
            for row in 0..params.j().dim() {
                let prod = set.table()[(row, 0)] * set.table()[(row, 1)];
                k.add(prod.norm_sqr());
            }
            Ok(k.value())
        }
        Some(state) => {
            if state.spin() != HalfInt::HALF {
                return Err(Error::NotSpinHalf(state.spin()));
            }
            Ok(joint_measure(state, params).diagonal_mass())
        }
    }
}

/// Characteristic half-width delta m of the near-recovery band around
/// m' = -m for s = 1/2:
///
/// ```text
/// delta m = sqrt(8/5) [ (ln(e_+/e_-))^2 + 4 f^2 ]^{-1/2},
/// e_sigma = (1 - chi_sigma) / (1 + chi_sigma),
/// f = atan2( sin(2 theta) cos(phi) sin(g),
///            1 - sin^2(theta) (cos^2(phi) + sin^2(g)) )
/// ```
///
/// Infinite when both factors vanish (e.g. g = 0, where every outcome
/// recovers); errors when a chi_sigma saturates to +-1.
pub fn recovery_width(params: &MeasurementParams) -> Result<f64> {
    let chi_p = chi(HalfInt::HALF, params);
    let chi_m = chi(-HalfInt::HALF, params);
    for x in [chi_p, chi_m] {
        if 1.0 - x <= 0.0 || 1.0 + x <= 0.0 {
            return Err(Error::SingularWidth(x));
        }
    }
    let log_ratio = (((1.0 - chi_p) / (1.0 + chi_p)) / ((1.0 - chi_m) / (1.0 + chi_m))).ln();
    let theta = params.theta();
    let phi = params.phi();
    let g = params.g();
    let s2 = theta.sin() * theta.sin();
    let f = atan2_branch(
        (2.0 * theta).sin() * phi.cos() * g.sin(),
        1.0 - s2 * (phi.cos() * phi.cos() + g.sin() * g.sin()),
    );
    let denom_sq = log_ratio * log_ratio + 4.0 * f * f;
    if denom_sq == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((8.0f64 / 5.0).sqrt() / denom_sq.sqrt())
}

/// Probability mass of outcome pairs whose fidelity reaches `threshold`
/// (q' at the conventional threshold [`RECOVERY_FIDELITY_THRESHOLD`]).
pub fn approx_recovery_probability(
    state: &SpinState,
    params: &MeasurementParams,
    threshold: f64,
) -> f64 {
    joint_measure(state, params).recovered_mass(threshold)
}

/// Summary of the recovery structure for an s = 1/2 system.
#[derive(Clone, Debug)]
pub struct RecoveryReport {
    /// Exact-recovery probability q.
    pub q: f64,
    /// Near-recovery probability q' at the chosen threshold.
    pub q_prime: f64,
    /// Closed-form width delta m.
    pub width: f64,
    /// Recovery phase e^{i alpha} per first-stage outcome m, for every m
    /// whose coefficient product is nonzero.
    pub phase_per_m: Vec<(HalfInt, Complex64)>,
}

/// Assemble q, q', delta m, and the per-outcome recovery phases.
pub fn recovery_report(
    state: &SpinState,
    params: &MeasurementParams,
    threshold: f64,
) -> Result<RecoveryReport> {
    if state.spin() != HalfInt::HALF {
        return Err(Error::NotSpinHalf(state.spin()));
    }
    let q = recovery_probability(params, None)?;
    let q_prime = approx_recovery_probability(state, params, threshold);
    let width = recovery_width(params)?;
    let set = CoefficientSet::new(params, HalfInt::HALF)?;
    let mut phase_per_m = Vec::new();
    for (row, m) in params.j().projections().enumerate() {
        let prod = set.table()[(row, 0)] * set.table()[(row, 1)];
        if prod.norm() > 0.0 {
            // Both reversal factors contribute e^{-i m' pi} = e^{+i m pi},
            // so the pair (m, -m) returns the state with phase
            // (-1)^{2m} P / |P|, P = a_{m,+1/2} a_{m,-1/2}.
            let phase = parity_sign(m.twice()) * prod / prod.norm();
            phase_per_m.push((m, phase));
        }
    }
    Ok(RecoveryReport { q, q_prime, width, phase_per_m })
}

/// Weak-interaction analogue of the recovery width for s > 1/2:
///
/// ```text
/// delta m~ = (1 / (2 sqrt(10) s)) sqrt(1 - sin^2 theta cos^2 phi)
///            / |g sin theta|
/// ```
pub fn weak_width(params: &MeasurementParams, s: HalfInt) -> Result<f64> {
    s.require_spin()?;
    if s == HalfInt::ZERO {
        return Err(Error::SingularWeakWidth("s = 0"));
    }
    let theta = params.theta();
    if theta.sin() == 0.0 {
        return Err(Error::SingularWeakWidth("sin(theta) = 0"));
    }
    if params.g() == 0.0 {
        return Err(Error::SingularWeakWidth("g = 0"));
    }
    let st = theta.sin();
    let cp = params.phi().cos();
    let num = (1.0 - st * st * cp * cp).max(0.0).sqrt();
    Ok(num / (2.0 * 10.0f64.sqrt() * s.value() * (params.g() * st).abs()))
}

/// Expansion parameter of the weak-interaction approximation,
/// 2 g^4 s^4 j^2 sin^2(theta) / (1 - |sin theta cos phi|)^2. The expansion
/// is trusted when this is at most [`WEAK_MARGIN_FACTOR`].
pub fn weak_condition_margin(params: &MeasurementParams, s: HalfInt) -> f64 {
    let st = params.theta().sin();
    let denom_root = 1.0 - (st * params.phi().cos()).abs();
    let gs = params.g() * s.value();
    let num = 2.0 * gs.powi(4) * params.j().value().powi(2) * st * st;
    if denom_root == 0.0 {
        return if num == 0.0 { 0.0 } else { f64::INFINITY };
    }
    num / (denom_root * denom_root)
}

/// True when the weak-interaction margin is within [`WEAK_MARGIN_FACTOR`].
pub fn weak_condition_holds(params: &MeasurementParams, s: HalfInt) -> bool {
    weak_condition_margin(params, s) <= WEAK_MARGIN_FACTOR
}

/// Quadratic approximation to the fidelity of the pair (m, m'):
/// F = 1 - (Var(S_z) / (20 s^2)) ((m + m') / width)^2, with the s = 1/2
/// width for spin-1/2 systems and the weak-interaction width otherwise.
pub fn quadratic_fidelity_bound(
    state: &SpinState,
    params: &MeasurementParams,
    m: HalfInt,
    mp: HalfInt,
) -> Result<f64> {
    m.require_projection_of(params.j())?;
    mp.require_projection_of(params.j())?;
    let s = state.spin();
    let width = if s == HalfInt::HALF {
        recovery_width(params)?
    } else {
        weak_width(params, s)?
    };
    let (_, var) = state.z_moments();
    let x = (m.value() + mp.value()) / width;
    Ok(1.0 - var / (20.0 * s.value() * s.value()) * x * x)
}

/// Which stage an approximation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// After the first measurement alone.
    First,
    /// After measurement plus reversal.
    Joint,
}

fn spin_half_weights(state: &SpinState) -> Result<(f64, f64)> {
    if state.spin() != HalfInt::HALF {
        return Err(Error::NotSpinHalf(state.spin()));
    }
    let w_plus = state.amplitudes()[0].norm_sqr();
    let w_minus = state.amplitudes()[1].norm_sqr();
    Ok((w_plus, w_minus))
}

fn h_factor(params: &MeasurementParams) -> f64 {
    let st = params.theta().sin();
    let sg = params.g().sin();
    1.0 - st * st * sg * sg
}

fn k_factor(params: &MeasurementParams) -> f64 {
    2.0 * atan2_branch(-params.g().sin() * params.theta().cos(), params.g().cos())
}

/// Closed form of sum_m p_m F_m^2 for s = 1/2:
/// |c_+|^4 + |c_-|^4 + 2 |c_+|^2 |c_-|^2 h^j cos(j k) with
/// h = 1 - sin^2(theta) sin^2(g) and k = 2 atan2(-sin g cos theta, cos g).
pub fn avg_sq_fidelity_first(state: &SpinState, params: &MeasurementParams) -> Result<f64> {
    let (wp, wm) = spin_half_weights(state)?;
    let j = params.j().value();
    let h = h_factor(params);
    let k = k_factor(params);
    Ok(wp * wp + wm * wm + 2.0 * wp * wm * h.powf(j) * (j * k).cos())
}

/// Closed form of sum_{m m'} p_{m m'} F_{m m'}^2 for s = 1/2:
/// |c_+|^4 + |c_-|^4 + 2 |c_+|^2 |c_-|^2 h^{2j}.
pub fn avg_sq_fidelity_joint(state: &SpinState, params: &MeasurementParams) -> Result<f64> {
    let (wp, wm) = spin_half_weights(state)?;
    let h = h_factor(params);
    Ok(wp * wp + wm * wm + 2.0 * wp * wm * h.powi(params.j().twice()))
}

/// Large-j estimate of the exact-recovery probability,
/// q ~ exp(-j (chi_+ - chi_-)^2 / (2 v)) / sqrt(2 pi j v) with
/// v = 1 - (chi_+^2 + chi_-^2)/2.
pub fn asymptotic_recovery(params: &MeasurementParams) -> f64 {
    let chi_p = chi(HalfInt::HALF, params);
    let chi_m = chi(-HalfInt::HALF, params);
    let v = 1.0 - 0.5 * (chi_p * chi_p + chi_m * chi_m);
    let j = params.j().value();
    let dchi = chi_p - chi_m;
    (-j * dchi * dchi / (2.0 * v)).exp() / (2.0 * PI * j * v).sqrt()
}

/// Bundle of the large-j closed forms for an s = 1/2 system.
#[derive(Clone, Copy, Debug)]
pub struct AsymptoticsReport {
    /// Fidelity decay base h = 1 - sin^2(theta) sin^2(g).
    pub h: f64,
    /// Oscillation rate k = 2 atan2(-sin g cos theta, cos g).
    pub k: f64,
    /// Outcome-variance scale v = 1 - (chi_+^2 + chi_-^2)/2.
    pub v: f64,
    pub avg_sq_fidelity_first: f64,
    pub avg_sq_fidelity_joint: f64,
    pub q_asymptotic: f64,
}

pub fn asymptotics_report(
    state: &SpinState,
    params: &MeasurementParams,
) -> Result<AsymptoticsReport> {
    let chi_p = chi(HalfInt::HALF, params);
    let chi_m = chi(-HalfInt::HALF, params);
    Ok(AsymptoticsReport {
        h: h_factor(params),
        k: k_factor(params),
        v: 1.0 - 0.5 * (chi_p * chi_p + chi_m * chi_m),
        avg_sq_fidelity_first: avg_sq_fidelity_first(state, params)?,
        avg_sq_fidelity_joint: avg_sq_fidelity_joint(state, params)?,
        q_asymptotic: asymptotic_recovery(params),
    })
}

/// Second-order weak-coupling expansion of the average fidelity
/// sum p F (not p F^2): 1 - g^2 j Var(S_z) (sin^2 theta + 2 j cos^2 theta)
/// after the first stage, 1 - 2 g^2 j Var(S_z) sin^2 theta after the
/// reversal.
pub fn avg_fidelity_weak(state: &SpinState, params: &MeasurementParams, stage: Stage) -> f64 {
    let (_, var) = state.z_moments();
    let j = params.j().value();
    let g2 = params.g() * params.g();
    let st = params.theta().sin();
    let ct = params.theta().cos();
    match stage {
        Stage::First => 1.0 - g2 * j * var * (st * st + 2.0 * j * ct * ct),
        Stage::Joint => 1.0 - 2.0 * g2 * j * var * st * st,
    }
}

/// Two-branch left inverse of the outcome operator T_m: branch R0 undoes
/// T_m exactly (R0 T_m = kappa I), branch R1 completes the pair so that
/// R0^dag R0 + R1^dag R1 = I. Both are diagonal; entries descend in sigma.
#[derive(Clone, Debug)]
pub struct LeftInverse {
    pub r0: Vec<Complex64>,
    pub r1: Vec<f64>,
    pub kappa: f64,
}

/// Construct the left inverse at outcome m for system spin s. `kappa`
/// defaults to min_sigma |a_{m sigma}|, the largest admissible value; the
/// success probability of the undo branch on a premeasurement state is
/// kappa^2 / p_m.
pub fn left_inverse_measurement(
    params: &MeasurementParams,
    s: HalfInt,
    m: HalfInt,
    kappa: Option<f64>,
) -> Result<LeftInverse> {
    s.require_spin()?;
    m.require_projection_of(params.j())?;
    let entries: Vec<Complex64> = s
        .projections()
        .map(|sigma| crate::measure::coefficient_a(params, m, sigma).expect("validated m"))
        .collect();
    // the binomial closed form carries exact zeros at saturated bias, where
    // the complex product leaves only rounding residue
    for sigma in s.projections() {
        if crate::measure::coefficient_magnitude_sq(params, m, sigma).expect("validated m") == 0.0
        {
            return Err(Error::NotInvertible { m, sigma });
        }
    }
    let bound = entries.iter().map(|a| a.norm()).fold(f64::INFINITY, f64::min);
    if bound == 0.0 {
        let weakest = s
            .projections()
            .zip(&entries)
            .min_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(sigma, _)| sigma)
            .unwrap_or(s);
        return Err(Error::NotInvertible { m, sigma: weakest });
    }
    let kappa = kappa.unwrap_or(bound);
    if kappa.is_nan() || kappa <= 0.0 || kappa > bound * (1.0 + 1e-12) {
        return Err(Error::KappaTooLarge { kappa, bound });
    }
    let r0: Vec<Complex64> = entries.iter().map(|a| kappa / a).collect();
    let r1: Vec<f64> = entries
        .iter()
        .map(|a| (1.0 - (kappa * kappa) / a.norm_sqr()).max(0.0).sqrt())
        .collect();
    Ok(LeftInverse { r0, r1, kappa })
}
