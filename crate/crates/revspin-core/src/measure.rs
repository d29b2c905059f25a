//! First-stage measurement: probe coefficients, outcome statistics, and the
//! admissibility conditions.
//!
//! A spin-j probe prepared along (theta, phi) couples to the system through
//! e^{-2i g J_z S_z} and is read out along the equatorial axis described in
//! [`crate::oracle`]. Conditioned on the system component sigma, outcome m
//! carries the amplitude
//!
//! ```text
//! a_{m sigma} = 2^{-j} sqrt((2j)! / ((j+m)!(j-m)!)) z_+^{j-m} z_-^{j+m},
//! z_+- = e^{-i beta/2} cos(theta/2) +- e^{+i beta/2} sin(theta/2),
//! beta = 2 g sigma + phi.
//! ```
//!
//! |z_+-|^2 = 1 +- chi_sigma with chi_sigma = sin(theta) cos(beta), so
//! |a_{m sigma}|^2 is the binomial distribution over the 2j+1 outcomes with
//! single-trial bias (1 - chi)/2: mean -j chi_sigma, variance
//! j (1 - chi_sigma^2)/2. Measuring m updates the system state through the
//! diagonal operator T_m = sum_sigma a_{m sigma} |sigma><sigma|.

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::numeric::{ln_binomial, powu, wrap_angle, Kahan};
use crate::state::SpinState;
use ndarray::Array2;
use num_complex::Complex64;

/// Tolerance used by the admissibility conditions when testing whether a
/// trigonometric factor vanishes or saturates.
pub const TOL_COND: f64 = 1e-9;

/// Outcome probabilities below this are treated as numerically extinct: the
/// conditional state is not normalized and the outcome is flagged.
pub const UNDERFLOW_PROBABILITY: f64 = 1e-300;

/// Probe parameters of one measurement stage.
///
/// `j` is the probe spin, `g` the dimensionless coupling, and (`theta`,
/// `phi`) the probe preparation direction. `phi` is stored wrapped into
/// (-pi, pi]; `theta` must lie in [0, pi].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementParams {
    j: HalfInt,
    g: f64,
    theta: f64,
    phi: f64,
}

impl MeasurementParams {
    pub fn new(j: HalfInt, g: f64, theta: f64, phi: f64) -> Result<Self> {
        j.require_spin()?;
        for (name, v) in [("g", g), ("theta", theta), ("phi", phi)] {
            if !v.is_finite() {
                return Err(Error::NonFinite { name, value: v });
            }
        }
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::ThetaRange(theta));
        }
        Ok(MeasurementParams { j, g, theta, phi: wrap_angle(phi) })
    }

    /// Internal constructor keeping `phi` at its literal value. Half-integer
    /// probes pick up a sign under phi -> phi + 2pi, so derived parameter
    /// sets (reversal complements, symmetry variants) are built unreduced.
    /// Inputs come from already-validated parameter sets.
    pub(crate) fn new_unwrapped(j: HalfInt, g: f64, theta: f64, phi: f64) -> Self {
        debug_assert!(!j.is_negative());
        debug_assert!((0.0..=std::f64::consts::PI).contains(&theta));
        MeasurementParams { j, g, theta, phi }
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Wrapped into (-pi, pi].
    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub(crate) fn beta(&self, sigma: HalfInt) -> f64 {
        2.0 * self.g * sigma.value() + self.phi
    }
}

/// chi_sigma = sin(theta) cos(2 g sigma + phi), the bias parameter of the
/// outcome distribution conditioned on system component sigma.
pub fn chi(sigma: HalfInt, params: &MeasurementParams) -> f64 {
    params.theta.sin() * params.beta(sigma).cos()
}

/// Conditional probe amplitude a_{m sigma}.
pub fn coefficient_a(params: &MeasurementParams, m: HalfInt, sigma: HalfInt) -> Result<Complex64> {
    m.require_projection_of(params.j)?;
    Ok(coefficient_unchecked(params, m, sigma))
}

fn coefficient_unchecked(params: &MeasurementParams, m: HalfInt, sigma: HalfInt) -> Complex64 {
    let j = params.j;
    let half_beta = 0.5 * params.beta(sigma);
    let e_minus = Complex64::from_polar(1.0, -half_beta);
    let e_plus = e_minus.conj();
    let (sin_h, cos_h) = (0.5 * params.theta).sin_cos();
    let z_plus = e_minus * cos_h + e_plus * sin_h;
    let z_minus = e_minus * cos_h - e_plus * sin_h;

    let jp = ((j.twice() + m.twice()) / 2) as usize;
    let jm = ((j.twice() - m.twice()) / 2) as usize;
    let pref =
        (0.5 * ln_binomial(jp + jm, jp) - j.value() * std::f64::consts::LN_2).exp();
    pref * powu(z_plus, jm as u32) * powu(z_minus, jp as u32)
}

/// |a_{m sigma}|^2 through the binomial closed form, bypassing complex
/// arithmetic. Exact zeros at the distribution endpoints are preserved.
pub fn coefficient_magnitude_sq(
    params: &MeasurementParams,
    m: HalfInt,
    sigma: HalfInt,
) -> Result<f64> {
    m.require_projection_of(params.j)?;
    Ok(magnitude_sq_unchecked(params, m, sigma))
}

fn magnitude_sq_unchecked(params: &MeasurementParams, m: HalfInt, sigma: HalfInt) -> f64 {
    let j = params.j;
    let x = chi(sigma, params);
    let lo = 0.5 * (1.0 - x); // single-trial weight pulling toward m = +j
    let hi = 0.5 * (1.0 + x);
    let jp = ((j.twice() + m.twice()) / 2) as usize;
    let jm = ((j.twice() - m.twice()) / 2) as usize;
    if hi == 0.0 && jm > 0 {
        return 0.0;
    }
    if lo == 0.0 && jp > 0 {
        return 0.0;
    }
    let mut ln = ln_binomial(jp + jm, jp);
    if jm > 0 {
        ln += (jm as f64) * hi.ln();
    }
    if jp > 0 {
        ln += (jp as f64) * lo.ln();
    }
    ln.exp()
}

/// Mean and variance of the outcome m conditioned on system component
/// sigma: (-j chi_sigma, j (1 - chi_sigma^2) / 2).
pub fn binomial_moments(params: &MeasurementParams, sigma: HalfInt) -> (f64, f64) {
    let x = chi(sigma, params);
    let j = params.j.value();
    (-j * x, 0.5 * j * (1.0 - x * x))
}

/// Gaussian density approximating |a_{m sigma}|^2 at large j. Errors when
/// the conditional distribution is deterministic (variance zero).
pub fn clt_approximation(params: &MeasurementParams, sigma: HalfInt, m: HalfInt) -> Result<f64> {
    m.require_projection_of(params.j)?;
    let (mean, var) = binomial_moments(params, sigma);
    if var <= 0.0 {
        return Err(Error::SingularDistribution { sigma, chi: chi(sigma, params) });
    }
    let dm = m.value() - mean;
    Ok((-0.5 * dm * dm / var).exp() / (2.0 * std::f64::consts::PI * var).sqrt())
}

/// One offending factor found by an admissibility condition.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionFailure {
    /// Human-readable name of the vanishing or saturating quantity.
    pub quantity: String,
    /// Its offending magnitude (distance from the allowed region).
    pub magnitude: f64,
}

/// Outcome of an admissibility test: `holds` plus diagnostics for every
/// violated factor.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    pub holds: bool,
    pub failures: Vec<ConditionFailure>,
}

impl ConditionReport {
    fn from_failures(failures: Vec<ConditionFailure>) -> Self {
        ConditionReport { holds: failures.is_empty(), failures }
    }
}

/// The measurement extracts information about S_z only if sin(theta) and
/// sin(g) are both nonzero, and additionally sin((2s-1) g + phi) != 0 when
/// required: always at s = 1/2, and for s > 1/2 only in the degenerate case
/// cos(g) = 0. All tests use [`TOL_COND`].
pub fn information_condition(params: &MeasurementParams, s: HalfInt) -> ConditionReport {
    let mut failures = Vec::new();
    let sin_theta = params.theta.sin();
    if sin_theta.abs() <= TOL_COND {
        failures.push(ConditionFailure {
            quantity: "sin(theta)".to_owned(),
            magnitude: sin_theta.abs(),
        });
    }
    let sin_g = params.g.sin();
    if sin_g.abs() <= TOL_COND {
        failures.push(ConditionFailure { quantity: "sin(g)".to_owned(), magnitude: sin_g.abs() });
    }
    let third_applies = s == HalfInt::HALF
        || (s > HalfInt::HALF && params.g.cos().abs() <= TOL_COND);
    if third_applies {
        let arg = (s.twice() - 1) as f64 * params.g + params.phi;
        let v = arg.sin();
        if v.abs() <= TOL_COND {
            failures.push(ConditionFailure {
                quantity: "sin((2s-1)g + phi)".to_owned(),
                magnitude: v.abs(),
            });
        }
    }
    ConditionReport::from_failures(failures)
}

/// Every outcome operator stays invertible iff no component sigma reaches
/// |chi_sigma| = 1, i.e. |sin theta| = 1 together with |cos(2 g sigma +
/// phi)| = 1. Saturation within [`TOL_COND`] counts as failure.
pub fn reversibility_condition(params: &MeasurementParams, s: HalfInt) -> ConditionReport {
    let mut failures = Vec::new();
    let sin_gap = 1.0 - params.theta.sin().abs();
    for sigma in s.projections() {
        let cos_gap = 1.0 - params.beta(sigma).cos().abs();
        if sin_gap <= TOL_COND && cos_gap <= TOL_COND {
            failures.push(ConditionFailure {
                quantity: format!("1 - |chi_sigma| at sigma = {sigma}"),
                magnitude: sin_gap.max(cos_gap),
            });
        }
    }
    ConditionReport::from_failures(failures)
}

/// Precomputed table of a_{m sigma}: rows m = j..-j, columns
/// sigma = s..-s.
#[derive(Clone, Debug)]
pub struct CoefficientSet {
    params: MeasurementParams,
    s: HalfInt,
    table: Array2<Complex64>,
}

impl CoefficientSet {
    pub fn new(params: &MeasurementParams, s: HalfInt) -> Result<Self> {
        s.require_spin()?;
        let rows = params.j.dim();
        let cols = s.dim();
        let mut table = Array2::from_elem((rows, cols), Complex64::new(0.0, 0.0));
        for (row, m) in params.j.projections().enumerate() {
            for (col, sigma) in s.projections().enumerate() {
                table[(row, col)] = coefficient_unchecked(params, m, sigma);
            }
        }
        Ok(CoefficientSet { params: *params, s, table })
    }

    pub fn params(&self) -> &MeasurementParams {
        &self.params
    }

    pub fn system_spin(&self) -> HalfInt {
        self.s
    }

    pub fn a(&self, m: HalfInt, sigma: HalfInt) -> Result<Complex64> {
        let row = m.require_projection_of(self.params.j)?.index_in(self.params.j).expect("validated");
        let col = sigma.require_projection_of(self.s)?.index_in(self.s).expect("validated");
        Ok(self.table[(row, col)])
    }

    pub fn table(&self) -> &Array2<Complex64> {
        &self.table
    }

    /// Max per-column deviation of sum_m |a_{m sigma}|^2 from 1.
    pub fn completeness_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for col in 0..self.s.dim() {
            let mut k = Kahan::new();
            for row in 0..self.params.j.dim() {
                k.add(self.table[(row, col)].norm_sqr());
            }
            worst = worst.max((k.value() - 1.0).abs());
        }
        worst
    }
}

/// Diagonal measurement operator T_m as its 2s+1 diagonal entries,
/// descending in sigma.
pub fn measurement_operator(
    params: &MeasurementParams,
    s: HalfInt,
    m: HalfInt,
) -> Result<Vec<Complex64>> {
    s.require_spin()?;
    m.require_projection_of(params.j)?;
    Ok(s.projections().map(|sigma| coefficient_unchecked(params, m, sigma)).collect())
}

/// Statistics of a single outcome m.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub m: HalfInt,
    pub probability: f64,
    /// Overlap fidelity |<psi|psi_m>| between pre- and post-measurement
    /// states; 0 when the outcome underflowed.
    pub fidelity: f64,
    /// Conditional post-measurement state. All-zero when `underflow`.
    pub post: SpinState,
    /// Set when `probability` fell below [`UNDERFLOW_PROBABILITY`].
    pub underflow: bool,
}

/// Full first-stage outcome statistics for one input state.
#[derive(Clone, Debug)]
pub struct OutcomeTable {
    params: MeasurementParams,
    outcomes: Vec<Outcome>,
}

impl OutcomeTable {
    pub fn params(&self) -> &MeasurementParams {
        &self.params
    }

    /// Outcomes in descending m order.
    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn get(&self, m: HalfInt) -> Option<&Outcome> {
        m.index_in(self.params.j).map(|i| &self.outcomes[i])
    }

    pub fn total_probability(&self) -> f64 {
        let mut k = Kahan::new();
        for o in &self.outcomes {
            k.add(o.probability);
        }
        k.value()
    }

    /// sum_m p_m F_m.
    pub fn average_fidelity(&self) -> f64 {
        let mut k = Kahan::new();
        for o in &self.outcomes {
            k.add(o.probability * o.fidelity);
        }
        k.value()
    }

    /// sum_m p_m F_m^2.
    pub fn average_sq_fidelity(&self) -> f64 {
        let mut k = Kahan::new();
        for o in &self.outcomes {
            k.add(o.probability * o.fidelity * o.fidelity);
        }
        k.value()
    }

    /// sum_m m p_m.
    pub fn mean_outcome(&self) -> f64 {
        let mut k = Kahan::new();
        for o in &self.outcomes {
            k.add(o.m.value() * o.probability);
        }
        k.value()
    }
}

/// Measure `state` once. Yields every outcome's probability, conditional
/// post-measurement state, and overlap fidelity.
pub fn measure(state: &SpinState, params: &MeasurementParams) -> OutcomeTable {
    let s = state.spin();
    let set = CoefficientSet::new(params, s).expect("spin of a valid state");
    let weights: Vec<f64> = state.amplitudes().iter().map(|c| c.norm_sqr()).collect();
    let n_s = s.dim();

    let mut outcomes = Vec::with_capacity(params.j.dim());
    for (row, m) in params.j.projections().enumerate() {
        let mut p = Kahan::new();
        let mut overlap = Complex64::new(0.0, 0.0);
        for (col, &w) in weights.iter().enumerate() {
            let a = set.table[(row, col)];
            p.add(a.norm_sqr() * w);
            overlap += a * w;
        }
        let p = p.value();
        if p < UNDERFLOW_PROBABILITY {
            outcomes.push(Outcome {
                m,
                probability: p,
                fidelity: 0.0,
                post: SpinState::from_amplitudes_unchecked(
                    s,
                    vec![Complex64::new(0.0, 0.0); n_s],
                ),
                underflow: true,
            });
            continue;
        }
        let scale = p.sqrt();
        let post_amps = (0..n_s)
            .map(|col| set.table[(row, col)] * state.amplitudes()[col] / scale)
            .collect();
        outcomes.push(Outcome {
            m,
            probability: p,
            fidelity: overlap.norm() / scale,
            post: SpinState::from_amplitudes_unchecked(s, post_amps),
            underflow: false,
        });
    }
    OutcomeTable { params: *params, outcomes }
}

/// Expectation of the outcome m over the full ensemble:
/// -j sum_sigma chi_sigma |c_sigma|^2.
pub fn expected_outcome(state: &SpinState, params: &MeasurementParams) -> f64 {
    let j = params.j.value();
    let mut k = Kahan::new();
    for (sigma, c) in state.spin().projections().zip(state.amplitudes()) {
        k.add(-j * chi(sigma, params) * c.norm_sqr());
    }
    k.value()
}
