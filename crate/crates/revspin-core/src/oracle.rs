//! Brute-force reference simulation of one probe-system interaction.
//!
//! Everything here is built from first principles so it can serve as an
//! independent cross-check of the closed-form amplitudes: the probe rotation
//! uses a series matrix exponential of the angular-momentum generator (not
//! the factorial formulas in [`crate::wigner`]), the coupling is applied as
//! exact diagonal phases, and the readout rotation is again a matrix
//! exponential.
//!
//! The modeled sequence for probe spin j prepared along (theta, phi) and a
//! system in state |psi> = sum_sigma c_sigma |sigma>:
//!
//! 1. probe init: |theta, phi> = e^{-i phi J_z} e^{-i theta J_y} |j j>,
//! 2. coupling:   e^{-2i g J_z S_z} (hbar = 1, g dimensionless),
//! 3. readout:    apply e^{-i (pi/2) J_y}, then measure J_z. Outcome m thus
//!    projects onto e^{+i (pi/2) J_y} |j m>; with this orientation a probe
//!    prepared along +x (theta = pi/2, phi = 0, g = 0) reads out m = -j.
//!
//! Keeping this code independent of the production path is the point; do not
//! "simplify" it to call the closed forms.

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::state::SpinState;
use ndarray::Array2;
use num_complex::Complex64;

/// Cap on (2j+1)(2s+1) for the dense simulation.
pub const MAX_JOINT_DIM: usize = 4096;

/// Real generator K = i J_y in the descending J_z basis, so that the
/// rotation e^{-i theta J_y} equals the real matrix exponential e^{-theta K}.
/// K is antisymmetric with K[(m+1), m] = +(1/2) sqrt(j(j+1) - m(m+1)).
pub fn jy_generator(j: HalfInt) -> Result<Array2<f64>> {
    j.require_spin()?;
    let n = j.dim();
    let jj = j.value() * (j.value() + 1.0);
    let mut k = Array2::zeros((n, n));
    for (col, m) in j.projections().enumerate() {
        if col > 0 {
            // row above holds m+1
            let r = 0.5 * (jj - m.value() * (m.value() + 1.0)).sqrt();
            k[(col - 1, col)] = r;
            k[(col, col - 1)] = -r;
        }
    }
    Ok(k)
}

/// Dense matrix exponential by scaling and squaring of the Taylor series.
/// Adequate for the bounded-norm generators used here; not a general-purpose
/// expm.
pub fn matrix_exp(a: &Array2<f64>) -> Array2<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix_exp needs a square matrix");
    let norm = one_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.mapv(|x| x / f64::powi(2.0, squarings as i32));

    let mut result = Array2::eye(n);
    let mut term = Array2::eye(n);
    for k in 1..400 {
        term = term.dot(&scaled).mapv(|x| x / k as f64);
        result += &term;
        if one_norm(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

fn one_norm(a: &Array2<f64>) -> f64 {
    let mut worst = 0.0f64;
    for col in a.columns() {
        worst = worst.max(col.iter().map(|x| x.abs()).sum());
    }
    worst
}

/// Entangled probe + system amplitudes after the interaction, indexed by
/// (probe m descending, system sigma descending). Stored in the measurement
/// basis of the probe: index m already refers to the J_x-type outcome.
#[derive(Clone, Debug)]
pub struct JointState {
    j: HalfInt,
    s: HalfInt,
    amps: Array2<Complex64>,
}

impl JointState {
    pub fn probe_spin(&self) -> HalfInt {
        self.j
    }

    pub fn system_spin(&self) -> HalfInt {
        self.s
    }

    pub fn amplitude(&self, m: HalfInt, sigma: HalfInt) -> Result<Complex64> {
        let row = m.require_projection_of(self.j)?.index_in(self.j).expect("validated");
        let col = sigma.require_projection_of(self.s)?.index_in(self.s).expect("validated");
        Ok(self.amps[(row, col)])
    }

    pub fn amplitudes(&self) -> &Array2<Complex64> {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Run the full sequence for probe spin `j`, coupling `g`, and initial probe
/// direction (`theta`, `phi`).
pub fn evolve(theta: f64, phi: f64, system: &SpinState, j: HalfInt, g: f64) -> Result<JointState> {
    j.require_spin()?;
    for (name, v) in [("theta", theta), ("phi", phi), ("g", g)] {
        if !v.is_finite() {
            return Err(Error::NonFinite { name, value: v });
        }
    }
    let s = system.spin();
    let np = j.dim();
    let ns = s.dim();
    let dim = np * ns;
    if dim > MAX_JOINT_DIM {
        return Err(Error::JointTooLarge(dim));
    }

    let k = jy_generator(j)?;

    // probe init: e^{-theta K} applied to |j j>, then J_z phases
    let u_theta = matrix_exp(&k.mapv(|x| -theta * x));
    let mut probe: Vec<Complex64> = (0..np)
        .map(|row| Complex64::new(u_theta[(row, 0)], 0.0))
        .collect();
    for (row, m) in j.projections().enumerate() {
        probe[row] *= Complex64::from_polar(1.0, -m.value() * phi);
    }

    // product state, then coupling phases e^{-2 i g m sigma}
    let mut amps = Array2::from_elem((np, ns), Complex64::new(0.0, 0.0));
    for (row, m) in j.projections().enumerate() {
        for (col, sigma) in s.projections().enumerate() {
            let phase = Complex64::from_polar(1.0, -2.0 * g * m.value() * sigma.value());
            amps[(row, col)] = probe[row] * system.amplitudes()[col] * phase;
        }
    }

    // readout basis change: amplitude of outcome m is
    // <j m| e^{-i (pi/2) J_y} |probe part>, i.e. rows of e^{-(pi/2) K}.
    let u_read = matrix_exp(&k.mapv(|x| -std::f64::consts::FRAC_PI_2 * x));
    let mut rotated = Array2::from_elem((np, ns), Complex64::new(0.0, 0.0));
    for col in 0..ns {
        for row in 0..np {
            let mut acc = Complex64::new(0.0, 0.0);
            for inner in 0..np {
                acc += u_read[(row, inner)] * amps[(inner, col)];
            }
            rotated[(row, col)] = acc;
        }
    }

    Ok(JointState { j, s, amps: rotated })
}

/// Probability of probe outcome `m` and the normalized conditional system
/// state.
pub fn projective_probe_measurement(joint: &JointState, m: HalfInt) -> Result<(f64, SpinState)> {
    let row = m
        .require_projection_of(joint.j)?
        .index_in(joint.j)
        .expect("validated");
    let ns = joint.s.dim();
    let mut p = 0.0;
    for col in 0..ns {
        p += joint.amps[(row, col)].norm_sqr();
    }
    if p == 0.0 {
        return Err(Error::ZeroProbabilityOutcome(m));
    }
    let scale = p.sqrt();
    let amps = (0..ns).map(|col| joint.amps[(row, col)] / scale).collect();
    Ok((p, SpinState::from_amplitudes_unchecked(joint.s, amps)))
}
