//! Small numerical kernels shared across the crate: log-factorials, exact
//! complex integer powers, compensated summation, and exact phase factors.

use num_complex::Complex64;
use std::sync::OnceLock;

const LN_FACTORIAL_TABLE_LEN: usize = 8192;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACTORIAL_TABLE_LEN);
        t.push(0.0);
        let mut acc = Kahan::new();
        for k in 1..LN_FACTORIAL_TABLE_LEN {
            acc.add((k as f64).ln());
            t.push(acc.value());
        }
        t
    })
}

/// ln(n!). Exact cumulative table for small n, Stirling series beyond it.
pub(crate) fn ln_factorial(n: usize) -> f64 {
    if n < LN_FACTORIAL_TABLE_LEN {
        return ln_factorial_table()[n];
    }
    let x = n as f64;
    let x2 = x * x;
    x * x.ln() - x
        + 0.5 * (2.0 * std::f64::consts::PI * x).ln()
        + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x * x2)
        + 1.0 / (1260.0 * x2 * x2 * x)
}

/// ln C(n, k) for 0 <= k <= n.
pub(crate) fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// z^n by squaring. The empty product convention applies: powu(z, 0) == 1
/// even for z == 0, which keeps binomial-amplitude limits exact at the
/// endpoints theta = 0, pi.
pub(crate) fn powu(z: Complex64, n: u32) -> Complex64 {
    let mut result = Complex64::new(1.0, 0.0);
    let mut base = z;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result *= base;
        }
        e >>= 1;
        if e > 0 {
            base *= base;
        }
    }
    result
}

/// Neumaier-compensated accumulator. Used wherever many same-sign or
/// cancelling terms must agree across summation orders to ~1e-15.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// e^{i pi q} for half-integer q given as 2q, evaluated exactly as a power
/// of i. e^{i pi q} = i^{2q}, so only 2q mod 4 matters.
pub(crate) fn phase_i_pow(twice: i32) -> Complex64 {
    match twice.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// (-1)^n for possibly negative n.
pub(crate) fn parity_sign(n: i32) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Wrap an angle into (-pi, pi].
pub(crate) fn wrap_angle(x: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    if x > -PI && x <= PI {
        return x;
    }
    let mut r = x.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    if r <= -PI {
        r += TAU;
    }
    r
}

/// atan2 with the result forced onto the branch (-pi, pi].
pub(crate) fn atan2_branch(y: f64, x: f64) -> f64 {
    let a = y.atan2(x);
    if a == -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn factorial_table_matches_direct_products() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert_relative_eq!(ln_factorial(5), 120f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(ln_factorial(20), 2432902008176640000f64.ln(), max_relative = 1e-14);
    }

    #[test]
    fn stirling_tail_is_continuous() {
        // Both sides sit near 6.6e4, so the difference is known to about an
        // ulp of that magnitude, not of ln(n).
        let n = LN_FACTORIAL_TABLE_LEN;
        let table_end = ln_factorial(n - 1);
        let stirling = ln_factorial(n);
        approx::assert_abs_diff_eq!(stirling - table_end, (n as f64).ln(), epsilon = 5e-11);
    }

    #[test]
    fn binomial_small_values() {
        assert_relative_eq!(ln_binomial(4, 2).exp(), 6.0, max_relative = 1e-14);
        assert_relative_eq!(ln_binomial(20, 10).exp(), 184756.0, max_relative = 1e-13);
    }

    #[test]
    fn powu_zero_exponent_is_one_even_at_zero_base() {
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(powu(z, 0), Complex64::new(1.0, 0.0));
        let w = Complex64::new(0.3, -0.4);
        assert_eq!(powu(w, 1), w);
        let w5 = w * w * w * w * w;
        let p5 = powu(w, 5);
        assert_relative_eq!(p5.re, w5.re, max_relative = 1e-14);
        assert_relative_eq!(p5.im, w5.im, max_relative = 1e-14);
    }

    #[test]
    fn kahan_recovers_cancellation() {
        let mut k = Kahan::new();
        k.add(1.0);
        for _ in 0..10 {
            k.add(1e-17);
        }
        k.add(-1.0);
        assert_relative_eq!(k.value(), 1e-16, max_relative = 1e-10);
    }

    #[test]
    fn phase_powers_cycle() {
        assert_eq!(phase_i_pow(0), Complex64::new(1.0, 0.0));
        assert_eq!(phase_i_pow(1), Complex64::new(0.0, 1.0));
        assert_eq!(phase_i_pow(2), Complex64::new(-1.0, 0.0));
        assert_eq!(phase_i_pow(3), Complex64::new(0.0, -1.0));
        assert_eq!(phase_i_pow(-1), Complex64::new(0.0, -1.0));
        assert_eq!(phase_i_pow(-2), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn wrap_angle_lands_on_half_open_interval() {
        use std::f64::consts::PI;
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert_relative_eq!(wrap_angle(3.0 * PI), PI, max_relative = 1e-12);
        assert_relative_eq!(wrap_angle(-2.5 * PI), -0.5 * PI, max_relative = 1e-12);
        assert_eq!(wrap_angle(0.25), 0.25);
    }
}
