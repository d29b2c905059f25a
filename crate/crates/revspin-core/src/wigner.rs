//! Wigner small-d rotation matrix elements d^j_{m' m}(theta).
//!
//! Convention: d^j_{m' m}(theta) = <j m'| e^{-i theta J_y} |j m>, so that for
//! j = 1/2
//!
//! ```text
//! d = [ cos(theta/2)  -sin(theta/2) ]      (rows/columns ordered m = +1/2, -1/2)
//!     [ sin(theta/2)   cos(theta/2) ]
//! ```
//!
//! Elements are evaluated by the standard factorial sum
//!
//! ```text
//! d^j_{m' m} = sum_k (-1)^{k - m + m'}
//!              sqrt((j+m)!(j-m)!(j+m')!(j-m')!)
//!              / ((j+m-k)! k! (j-k-m')! (k-m+m')!)
//!              cos(theta/2)^{2j-2k+m-m'} sin(theta/2)^{2k-m+m'}
//! ```
//!
//! assembled in log space so entries stay accurate out to large j. Terms with
//! an exactly vanishing base and positive exponent are skipped, which makes
//! the endpoint theta = 0 return exact Kronecker deltas.

use crate::error::Result;
use crate::halfint::HalfInt;
use crate::numeric::{ln_factorial, parity_sign, Kahan};
use crate::state::SpinState;
use ndarray::Array2;
use num_complex::Complex64;

/// Single element d^j_{m' m}(theta). `mp` and `m` must be magnetic quantum
/// numbers of `j`.
pub fn wigner_small_d(j: HalfInt, mp: HalfInt, m: HalfInt, theta: f64) -> Result<f64> {
    j.require_spin()?;
    mp.require_projection_of(j)?;
    m.require_projection_of(j)?;
    Ok(small_d_unchecked(j, mp, m, theta))
}

fn small_d_unchecked(j: HalfInt, mp: HalfInt, m: HalfInt, theta: f64) -> f64 {
    let jm = ((j.twice() + m.twice()) / 2) as i64;
    let jmm = ((j.twice() - m.twice()) / 2) as i64;
    let jmp = ((j.twice() + mp.twice()) / 2) as i64;
    let jmpm = ((j.twice() - mp.twice()) / 2) as i64;
    let diff = ((m.twice() - mp.twice()) / 2) as i64; // m - m'

    let half = 0.5 * theta;
    let (sin_h, cos_h) = half.sin_cos();
    if sin_h == 0.0 && cos_h == 1.0 {
        return if mp == m { 1.0 } else { 0.0 };
    }

    let ln_pref = 0.5
        * (ln_factorial(jm as usize)
            + ln_factorial(jmm as usize)
            + ln_factorial(jmp as usize)
            + ln_factorial(jmpm as usize));

    let k_min = diff.max(0);
    let k_max = jm.min(jmpm);
    let mut sum = Kahan::new();
    for k in k_min..=k_max {
        let e_cos = (jm + jmm) - 2 * k + diff; // 2j - 2k + m - m'
        let e_sin = 2 * k - diff;
        debug_assert!(e_cos >= 0 && e_sin >= 0);
        if cos_h == 0.0 && e_cos != 0 {
            continue;
        }
        if sin_h == 0.0 && e_sin != 0 {
            continue;
        }
        let mut ln_mag = ln_pref
            - ln_factorial((jm - k) as usize)
            - ln_factorial(k as usize)
            - ln_factorial((jmpm - k) as usize)
            - ln_factorial((k - diff) as usize);
        if e_cos > 0 {
            ln_mag += (e_cos as f64) * cos_h.abs().ln();
        }
        if e_sin > 0 {
            ln_mag += (e_sin as f64) * sin_h.abs().ln();
        }
        let mut sign = parity_sign((k - diff) as i32);
        if cos_h < 0.0 && e_cos % 2 != 0 {
            sign = -sign;
        }
        if sin_h < 0.0 && e_sin % 2 != 0 {
            sign = -sign;
        }
        sum.add(sign * ln_mag.exp());
    }
    sum.value()
}

/// Full (2j+1) x (2j+1) matrix of d^j_{m' m}(theta), rows and columns in
/// descending magnetic order.
#[derive(Clone, Debug)]
pub struct WignerMatrix {
    j: HalfInt,
    theta: f64,
    elements: Array2<f64>,
}

impl WignerMatrix {
    pub fn new(j: HalfInt, theta: f64) -> Result<Self> {
        j.require_spin()?;
        let n = j.dim();
        let mut elements = Array2::zeros((n, n));
        for (row, mp) in j.projections().enumerate() {
            for (col, m) in j.projections().enumerate() {
                elements[(row, col)] = small_d_unchecked(j, mp, m, theta);
            }
        }
        Ok(WignerMatrix { j, theta, elements })
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn element(&self, mp: HalfInt, m: HalfInt) -> Result<f64> {
        let row = mp.require_projection_of(self.j)?.index_in(self.j).expect("validated");
        let col = m.require_projection_of(self.j)?.index_in(self.j).expect("validated");
        Ok(self.elements[(row, col)])
    }

    pub fn elements(&self) -> &Array2<f64> {
        &self.elements
    }

    /// Max |D^T D - I| entry; zero for an exactly orthogonal matrix.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.j.dim();
        let gram = self.elements.t().dot(&self.elements);
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((gram[(r, c)] - target).abs());
            }
        }
        worst
    }
}

/// Rotate a spin state: c'_sigma = e^{-i sigma phi} sum_{sigma''}
/// d^s_{sigma sigma''}(theta) c_{sigma''}. This is the action of
/// e^{-i phi S_z} e^{-i theta S_y}.
pub fn rotate_state(state: &SpinState, theta: f64, phi: f64) -> SpinState {
    let s = state.spin();
    let d = WignerMatrix::new(s, theta).expect("spin of a valid state");
    let input = state.amplitudes();
    let n = s.dim();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (row, sigma) in s.projections().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (col, c) in input.iter().enumerate() {
            acc += d.elements()[(row, col)] * c;
        }
        out[row] = Complex64::from_polar(1.0, -sigma.value() * phi) * acc;
    }
    SpinState::from_amplitudes_unchecked(s, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    #[test]
    fn spin_half_block_matches_half_angle_forms() {
        let j = HalfInt::HALF;
        let theta = 0.7f64;
        let (sh, ch) = (0.5 * theta).sin_cos();
        let pp = wigner_small_d(j, HalfInt::HALF, HalfInt::HALF, theta).unwrap();
        let pm = wigner_small_d(j, HalfInt::HALF, -HalfInt::HALF, theta).unwrap();
        let mp = wigner_small_d(j, -HalfInt::HALF, HalfInt::HALF, theta).unwrap();
        let mm = wigner_small_d(j, -HalfInt::HALF, -HalfInt::HALF, theta).unwrap();
        assert_relative_eq!(pp, ch, max_relative = 1e-15);
        assert_relative_eq!(pm, -sh, max_relative = 1e-15);
        assert_relative_eq!(mp, sh, max_relative = 1e-15);
        assert_relative_eq!(mm, ch, max_relative = 1e-15);
    }

    #[test]
    fn spin_one_beam_splitter_elements() {
        let j = HalfInt::ONE;
        let v = wigner_small_d(j, HalfInt::ZERO, HalfInt::ONE, FRAC_PI_2).unwrap();
        assert_relative_eq!(v, std::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-14);
        let u = wigner_small_d(j, HalfInt::ONE, HalfInt::ZERO, FRAC_PI_2).unwrap();
        assert_relative_eq!(u, -std::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-14);
        let w = wigner_small_d(j, HalfInt::ZERO, HalfInt::ZERO, FRAC_PI_3).unwrap();
        assert_relative_eq!(w, FRAC_PI_3.cos(), max_relative = 1e-14);
    }

    #[test]
    fn zero_angle_gives_exact_identity() {
        let j = HalfInt::from_twice(9);
        let d = WignerMatrix::new(j, 0.0).unwrap();
        for (r, mp) in j.projections().enumerate() {
            for (c, m) in j.projections().enumerate() {
                let expect = if r == c { 1.0 } else { 0.0 };
                assert_eq!(d.element(mp, m).unwrap(), expect, "mp={mp} m={m}");
            }
        }
    }

    #[test]
    fn matrices_stay_orthogonal_out_to_moderate_spin() {
        for twice_j in [1, 2, 5, 10, 17, 25] {
            let j = HalfInt::from_twice(twice_j);
            for theta in [0.0, 0.3, FRAC_PI_2, 2.4, PI] {
                let d = WignerMatrix::new(j, theta).unwrap();
                assert!(
                    d.orthogonality_defect() < 1e-10,
                    "2j={twice_j} theta={theta}: defect {}",
                    d.orthogonality_defect()
                );
            }
        }
    }

    #[test]
    fn composition_of_same_axis_rotations() {
        let j = HalfInt::from_twice(5);
        let (a, b) = (0.9, 0.7);
        let da = WignerMatrix::new(j, a).unwrap();
        let db = WignerMatrix::new(j, b).unwrap();
        let dab = WignerMatrix::new(j, a + b).unwrap();
        let product = da.elements().dot(db.elements());
        for r in 0..j.dim() {
            for c in 0..j.dim() {
                assert_relative_eq!(
                    product[(r, c)],
                    dab.elements()[(r, c)],
                    epsilon = 1e-13,
                    max_relative = 1e-11
                );
            }
        }
    }

    #[test]
    fn symmetry_under_negating_both_indices() {
        let j = HalfInt::from_twice(7);
        let theta = 1.1;
        for mp in j.projections() {
            for m in j.projections() {
                let lhs = wigner_small_d(j, mp, m, theta).unwrap();
                let sign = parity_sign((m.twice() - mp.twice()) / 2);
                let rhs = sign * wigner_small_d(j, -mp, -m, theta).unwrap();
                assert_relative_eq!(lhs, rhs, epsilon = 1e-14, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn rotate_state_preserves_norm_and_matches_column() {
        let s = HalfInt::from_int(2);
        let top = SpinState::basis(s, HalfInt::from_int(2)).unwrap();
        let rotated = rotate_state(&top, FRAC_PI_2, 0.4);
        assert_relative_eq!(rotated.norm_sqr(), 1.0, max_relative = 1e-13);
        for sigma in s.projections() {
            let expect = wigner_small_d(s, sigma, s, FRAC_PI_2).unwrap();
            let phase = Complex64::from_polar(1.0, -sigma.value() * 0.4);
            let got = rotated.amplitude(sigma).unwrap();
            let want = phase * expect;
            assert_relative_eq!(got.re, want.re, epsilon = 1e-14);
            assert_relative_eq!(got.im, want.im, epsilon = 1e-14);
        }
    }

    #[test]
    fn rejects_foreign_projections() {
        assert!(wigner_small_d(HalfInt::ONE, HalfInt::HALF, HalfInt::ZERO, 0.2).is_err());
        assert!(wigner_small_d(HalfInt::from_twice(-2), HalfInt::ZERO, HalfInt::ZERO, 0.2).is_err());
    }
}
