//! Scenario assembly: per-target defaults, flag overrides, and initial
//! state construction from the --state grammar.

use crate::expr::{parse_half_int, Angle};
use crate::{Failure, ScenarioArgs};
use num_complex::Complex64;
use revspin_core::prep::{cat_state, coherent_x_state, prepare_coherent_equatorial, CatAxis};
use revspin_core::{HalfInt, MeasurementParams, SpinState};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};

/// Default scenario for one subcommand target.
#[derive(Clone, Copy)]
pub struct Defaults {
    pub s: HalfInt,
    pub j: HalfInt,
    pub g: f64,
    pub theta: f64,
    pub phi: f64,
    pub state: &'static str,
    pub gamma: f64,
    pub m: HalfInt,
}

/// Strong-measurement reference point: an s = 1/2 system read out by a
/// j = 10 probe.
pub const REFERENCE: Defaults = Defaults {
    s: HalfInt::HALF,
    j: HalfInt::from_int(10),
    g: 0.25,
    theta: FRAC_PI_6,
    phi: FRAC_PI_6,
    state: "equal",
    gamma: FRAC_PI_6,
    m: HalfInt::from_int(5),
};

/// Weak-coupling reference point: a large system probed gently.
pub const WEAK: Defaults = Defaults {
    s: HalfInt::from_int(10),
    j: HalfInt::from_int(50),
    g: 0.01,
    theta: PI / 12.0,
    phi: FRAC_PI_4,
    state: "coherent-x",
    gamma: FRAC_PI_6,
    m: HalfInt::from_int(5),
};

/// Post-selected preparation target. Here --phi is the azimuth of the
/// equatorial state and --m the conditioning outcome; theta and the
/// state spec are unused because the probe geometry is fixed.
pub const PREPARATION: Defaults = Defaults {
    s: HalfInt::from_int(10),
    j: HalfInt::from_int(10),
    g: 0.25,
    theta: FRAC_PI_2,
    phi: 0.0,
    state: "equal",
    gamma: FRAC_PI_6,
    m: HalfInt::from_int(5),
};

/// A fully resolved scenario.
pub struct Scenario {
    pub s: HalfInt,
    pub params: MeasurementParams,
    pub state: SpinState,
    pub gamma: f64,
    pub m: HalfInt,
}

pub fn resolve(args: &ScenarioArgs, defaults: &Defaults) -> Result<Scenario, Failure> {
    let s = override_half(&args.s, defaults.s, "--s")?;
    let j = override_half(&args.j, defaults.j, "--j")?;
    let g = override_angle(&args.g, defaults.g, "--g")?;
    let theta = override_angle(&args.theta, defaults.theta, "--theta")?;
    let phi = override_angle(&args.phi, defaults.phi, "--phi")?;
    let gamma = override_angle(&args.gamma, defaults.gamma, "--gamma")?;
    let m = override_half(&args.m, defaults.m, "--m")?;
    let params = MeasurementParams::new(j, g, theta, phi)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let spec = args.state.as_deref().unwrap_or(defaults.state);
    let state = build_state(spec, s)?;
    Ok(Scenario { s, params, state, gamma, m })
}

fn override_half(flag: &Option<String>, fallback: HalfInt, name: &str) -> Result<HalfInt, Failure> {
    match flag {
        None => Ok(fallback),
        Some(text) => {
            parse_half_int(text).map_err(|e| Failure::Usage(format!("{name}: {e}")))
        }
    }
}

fn override_angle(flag: &Option<String>, fallback: f64, name: &str) -> Result<f64, Failure> {
    match flag {
        None => Ok(fallback),
        Some(text) => Angle::parse(text)
            .map(|angle| angle.radians())
            .map_err(|e| Failure::Usage(format!("{name}: {e}"))),
    }
}

fn build_state(spec: &str, s: HalfInt) -> Result<SpinState, Failure> {
    let core = |e: revspin_core::Error| Failure::Usage(e.to_string());
    if spec == "equal" {
        return SpinState::uniform(s).map_err(core);
    }
    if spec == "coherent-x" {
        return coherent_x_state(s).map_err(core);
    }
    if let Some(rest) = spec.strip_prefix("basis:") {
        let sigma = parse_half_int(rest).map_err(Failure::Usage)?;
        return SpinState::basis(s, sigma).map_err(core);
    }
    if let Some(rest) = spec.strip_prefix("coherent-eq:") {
        let azimuth = Angle::parse(rest).map_err(Failure::Usage)?;
        return prepare_coherent_equatorial(s, azimuth.radians()).map_err(core);
    }
    if let Some(rest) = spec.strip_prefix("cat-x:") {
        let (plus, minus) = parse_cat_weights(rest)?;
        return cat_state(CatAxis::X, s, plus, minus).map_err(core);
    }
    if let Some(rest) = spec.strip_prefix("cat-z:") {
        let (plus, minus) = parse_cat_weights(rest)?;
        return cat_state(CatAxis::Z, s, plus, minus).map_err(core);
    }
    if let Some(path) = spec.strip_prefix("amps:") {
        return read_amplitudes(path, s);
    }
    Err(Failure::Usage(format!("unknown state spec {spec:?}")))
}

fn parse_cat_weights(text: &str) -> Result<(Complex64, Complex64), Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(Failure::Usage(format!(
            "cat weights must be RE,IM,RE,IM, got {text:?}"
        )));
    }
    let mut values = [0.0; 4];
    for (slot, part) in values.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|e| Failure::Usage(format!("cat weight {part:?}: {e}")))?;
    }
    Ok((
        Complex64::new(values[0], values[1]),
        Complex64::new(values[2], values[3]),
    ))
}

/// Reads one amplitude per line, "RE IM", highest sigma first. The
/// trailing newline is required so truncated files are caught.
fn read_amplitudes(path: &str, s: HalfInt) -> Result<SpinState, Failure> {
    let content =
        std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))?;
    if !content.ends_with('\n') {
        return Err(Failure::Usage(format!("{path}: missing trailing newline")));
    }
    let mut amplitudes = Vec::new();
    for (index, line) in content.lines().enumerate() {
        let mut fields = line.split_whitespace();
        let (Some(re), Some(im), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Failure::Usage(format!(
                "{path}:{}: expected \"RE IM\"",
                index + 1
            )));
        };
        let re: f64 = re
            .parse()
            .map_err(|e| Failure::Usage(format!("{path}:{}: {e}", index + 1)))?;
        let im: f64 = im
            .parse()
            .map_err(|e| Failure::Usage(format!("{path}:{}: {e}", index + 1)))?;
        amplitudes.push(Complex64::new(re, im));
    }
    SpinState::new(s, amplitudes).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}
