//! Binary hypothesis discrimination through the probe readout.
//!
//! Two equiprobable orthogonal candidate states of a spin-1/2 system,
//!
//! ```text
//! |a> =  cos(gamma/2) |+1/2> + sin(gamma/2) |-1/2>
//! |b> = -sin(gamma/2) |+1/2> + cos(gamma/2) |-1/2>
//! ```
//!
//! are told apart by observing the probe. The prior entropy is 1 bit; the
//! information gained from outcome m is I(m) = 1 - H(posterior). Because the
//! reversal undoes the first stage exactly on m' = -m, those outcome pairs
//! return the posterior to 1/2 and refund the extracted information, while
//! generic pairs sharpen it further: information flow and disturbance trade
//! off outcome by outcome.

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::measure::{measure, MeasurementParams};
use crate::numeric::Kahan;
use crate::reverse::joint_measure;
use crate::state::SpinState;
use num_complex::Complex64;

/// Outcomes with total probability below this are dropped from posterior
/// statistics and reported in `skipped`.
pub const INFO_SKIP_THRESHOLD: f64 = 1e-15;

/// Pair of equiprobable orthogonal spin-1/2 hypotheses.
#[derive(Clone, Debug)]
pub struct HypothesisPair {
    gamma: f64,
    first: SpinState,
    second: SpinState,
}

impl HypothesisPair {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn first(&self) -> &SpinState {
        &self.first
    }

    pub fn second(&self) -> &SpinState {
        &self.second
    }

    /// Shannon entropy of the equiprobable prior, in bits.
    pub fn prior_entropy(&self) -> f64 {
        1.0
    }
}

/// Build the hypothesis pair at mixing angle `gamma`, restricted to the
/// open interval (0, pi/2) so neither hypothesis is a basis state or a
/// symmetric superposition.
pub fn make_hypothesis_pair(gamma: f64) -> Result<HypothesisPair> {
    if !gamma.is_finite() || gamma <= 0.0 || gamma >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::GammaRange(gamma));
    }
    let (sin_h, cos_h) = (0.5 * gamma).sin_cos();
    let first = SpinState::new(
        HalfInt::HALF,
        vec![Complex64::new(cos_h, 0.0), Complex64::new(sin_h, 0.0)],
    )?;
    let second = SpinState::new(
        HalfInt::HALF,
        vec![Complex64::new(-sin_h, 0.0), Complex64::new(cos_h, 0.0)],
    )?;
    Ok(HypothesisPair { gamma, first, second })
}

/// Per-outcome information and disturbance figures. `info` and `fidelity`
/// are absent when the outcome was skipped as numerically unpopulated.
#[derive(Clone, Copy, Debug)]
pub struct InfoRecord {
    pub m: HalfInt,
    /// Total outcome probability (both hypotheses averaged).
    pub probability: f64,
    /// Information gain in bits: 1 - H(posterior), averaged over any second
    /// stage.
    pub info: Option<f64>,
    /// Fidelity to the true pre-measurement state, posterior-averaged.
    pub fidelity: Option<f64>,
}

/// Outcome-resolved analysis of one stage.
#[derive(Clone, Debug)]
pub struct StageAnalysis {
    records: Vec<InfoRecord>,
    skipped: Vec<HalfInt>,
}

impl StageAnalysis {
    /// One record per outcome m, descending.
    pub fn records(&self) -> &[InfoRecord] {
        &self.records
    }

    /// Outcomes excluded by [`INFO_SKIP_THRESHOLD`].
    pub fn skipped(&self) -> &[HalfInt] {
        &self.skipped
    }

    pub fn get(&self, m: HalfInt) -> Option<&InfoRecord> {
        self.records.iter().find(|r| r.m == m)
    }

    /// sum_m p(m) I(m) over populated outcomes.
    pub fn expected_info(&self) -> f64 {
        let mut k = Kahan::new();
        for r in &self.records {
            if let Some(i) = r.info {
                k.add(r.probability * i);
            }
        }
        k.value()
    }

    /// sum_m p(m) F(m) over populated outcomes.
    pub fn expected_fidelity(&self) -> f64 {
        let mut k = Kahan::new();
        for r in &self.records {
            if let Some(f) = r.fidelity {
                k.add(r.probability * f);
            }
        }
        k.value()
    }
}

fn binary_entropy_bits(p: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p));
    let mut h = 0.0;
    for x in [p, 1.0 - p] {
        if x > 0.0 {
            h -= x * x.log2();
        }
    }
    h
}

/// Analyze the first measurement alone: posterior information gain and
/// fidelity to the true state for every outcome m.
pub fn analyze_first(pair: &HypothesisPair, params: &MeasurementParams) -> StageAnalysis {
    let table_a = measure(pair.first(), params);
    let table_b = measure(pair.second(), params);
    let mut records = Vec::with_capacity(params.j().dim());
    let mut skipped = Vec::new();
    for (oa, ob) in table_a.outcomes().iter().zip(table_b.outcomes()) {
        let m = oa.m;
        let p = 0.5 * (oa.probability + ob.probability);
        if p < INFO_SKIP_THRESHOLD {
            skipped.push(m);
            records.push(InfoRecord { m, probability: p, info: None, fidelity: None });
            continue;
        }
        let post_a = 0.5 * oa.probability / p;
        let info = 1.0 - binary_entropy_bits(post_a);
        let fidelity = post_a * oa.fidelity + (1.0 - post_a) * ob.fidelity;
        records.push(InfoRecord { m, probability: p, info: Some(info), fidelity: Some(fidelity) });
    }
    StageAnalysis { records, skipped }
}

/// Analyze measurement plus reversal: for each first outcome m, the
/// expected information I'(m) and fidelity F'(m) after the second outcome
/// m' is also observed, weighted by p(m'|m).
pub fn analyze_joint(pair: &HypothesisPair, params: &MeasurementParams) -> StageAnalysis {
    let joint_a = joint_measure(pair.first(), params);
    let joint_b = joint_measure(pair.second(), params);
    let j = params.j();
    let n = j.dim();
    let mut records = Vec::with_capacity(n);
    let mut skipped = Vec::new();
    for (row, m) in j.projections().enumerate() {
        let cells_a = &joint_a.entries()[row * n..(row + 1) * n];
        let cells_b = &joint_b.entries()[row * n..(row + 1) * n];
        let mut p_first = Kahan::new();
        for (ea, eb) in cells_a.iter().zip(cells_b) {
            p_first.add(0.5 * (ea.probability + eb.probability));
        }
        let p_first = p_first.value();
        if p_first < INFO_SKIP_THRESHOLD {
            skipped.push(m);
            records.push(InfoRecord { m, probability: p_first, info: None, fidelity: None });
            continue;
        }
        let mut info = Kahan::new();
        let mut fidelity = Kahan::new();
        for (ea, eb) in cells_a.iter().zip(cells_b) {
            let p_cell = 0.5 * (ea.probability + eb.probability);
            if p_cell < INFO_SKIP_THRESHOLD {
                continue;
            }
            let post_a = 0.5 * ea.probability / p_cell;
            let w = p_cell / p_first;
            info.add(w * (1.0 - binary_entropy_bits(post_a)));
            fidelity.add(w * (post_a * ea.fidelity + (1.0 - post_a) * eb.fidelity));
        }
        records.push(InfoRecord {
            m,
            probability: p_first,
            info: Some(info.value()),
            fidelity: Some(fidelity.value()),
        });
    }
    StageAnalysis { records, skipped }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

    fn reference_params() -> MeasurementParams {
        MeasurementParams::new(HalfInt::from_int(10), 0.25, FRAC_PI_6, FRAC_PI_6).unwrap()
    }

    #[test]
    fn hypotheses_are_orthonormal() {
        let pair = make_hypothesis_pair(FRAC_PI_6).unwrap();
        assert_relative_eq!(pair.first().norm_sqr(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(pair.second().norm_sqr(), 1.0, max_relative = 1e-14);
        let o = pair.first().overlap(pair.second());
        assert_abs_diff_eq!(o.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(o.im, 0.0, epsilon = 1e-15);
        assert_eq!(pair.prior_entropy(), 1.0);
    }

    #[test]
    fn gamma_endpoints_are_rejected() {
        assert!(matches!(make_hypothesis_pair(0.0), Err(Error::GammaRange(_))));
        assert!(matches!(make_hypothesis_pair(FRAC_PI_2), Err(Error::GammaRange(_))));
        assert!(matches!(make_hypothesis_pair(-0.3), Err(Error::GammaRange(_))));
        assert!(matches!(make_hypothesis_pair(f64::NAN), Err(Error::GammaRange(_))));
        assert!(make_hypothesis_pair(1.0).is_ok());
    }

    #[test]
    fn first_stage_probabilities_cover_the_lattice() {
        let pair = make_hypothesis_pair(FRAC_PI_6).unwrap();
        let analysis = analyze_first(&pair, &reference_params());
        assert_eq!(analysis.records().len(), 21);
        let total: f64 = analysis.records().iter().map(|r| r.probability).sum();
        assert_relative_eq!(total, 1.0, max_relative = 1e-12);
        for r in analysis.records() {
            let info = r.info.expect("populated outcome");
            assert!((0.0..=1.0).contains(&info), "I({}) = {info}", r.m);
            let f = r.fidelity.expect("populated outcome");
            assert!((0.0..=1.0 + 1e-12).contains(&f));
        }
    }

    #[test]
    fn uninformative_parameters_give_zero_information() {
        // phi = 0 at s = 1/2 makes both hypotheses produce identical
        // outcome statistics.
        let pair = make_hypothesis_pair(FRAC_PI_6).unwrap();
        let params = MeasurementParams::new(HalfInt::from_int(5), 0.25, FRAC_PI_6, 0.0).unwrap();
        let analysis = analyze_first(&pair, &params);
        for r in analysis.records() {
            if let Some(info) = r.info {
                assert_abs_diff_eq!(info, 0.0, epsilon = 1e-12);
            }
        }
        assert_abs_diff_eq!(analysis.expected_info(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn joint_stage_matches_first_stage_marginals() {
        let pair = make_hypothesis_pair(FRAC_PI_6).unwrap();
        let params = reference_params();
        let first = analyze_first(&pair, &params);
        let joint = analyze_joint(&pair, &params);
        for (rf, rj) in first.records().iter().zip(joint.records()) {
            assert_eq!(rf.m, rj.m);
            assert_relative_eq!(rf.probability, rj.probability, max_relative = 1e-11);
        }
    }

    #[test]
    fn reference_outcome_gains_information_and_fidelity_from_the_reversal() {
        // m = -1 at the running example: the second stage raises both the
        // expected information and the expected fidelity.
        let pair = make_hypothesis_pair(FRAC_PI_6).unwrap();
        let params = reference_params();
        let first = analyze_first(&pair, &params);
        let joint = analyze_joint(&pair, &params);
        let m = HalfInt::from_int(-1);
        let rf = first.get(m).unwrap();
        let rj = joint.get(m).unwrap();
        assert_relative_eq!(rf.info.unwrap(), 0.1119, max_relative = 1e-3);
        assert_relative_eq!(rj.info.unwrap(), 0.1486, max_relative = 1e-3);
        assert_relative_eq!(rf.fidelity.unwrap(), 0.9571, max_relative = 1e-3);
        assert_relative_eq!(rj.fidelity.unwrap(), 0.9719, max_relative = 1e-3);
    }

    #[test]
    fn information_never_exceeds_the_prior_entropy() {
        let pair = make_hypothesis_pair(0.9).unwrap();
        let params =
            MeasurementParams::new(HalfInt::from_int(4), 0.6, 1.1, 2.0).unwrap();
        for analysis in [analyze_first(&pair, &params), analyze_joint(&pair, &params)] {
            for r in analysis.records() {
                if let Some(i) = r.info {
                    assert!((-1e-14..=1.0).contains(&i));
                }
            }
            assert!(analysis.expected_info() <= pair.prior_entropy());
        }
    }
}
