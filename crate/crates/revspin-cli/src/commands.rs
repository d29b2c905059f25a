//! Subcommand implementations. Each data-producing command resolves a
//! scenario, computes with revspin-core, and writes one CSV file;
//! oracle-check prints to stdout instead.

use crate::expr::{parse_half_int, Angle};
use crate::output::{fmt_value, Csv};
use crate::scenario::{resolve, Defaults, Scenario, PREPARATION, REFERENCE, WEAK};
use crate::{Failure, ScenarioArgs, Vary};
use rayon::prelude::*;
use revspin_core::bayes::{analyze_first, analyze_joint, make_hypothesis_pair};
use revspin_core::measure::{coefficient_magnitude_sq, reversibility_condition, CoefficientSet};
use revspin_core::oracle::evolve;
use revspin_core::prep::{prepare_coherent_equatorial, subspace_prepare};
use revspin_core::reverse::{
    approx_recovery_probability, recovery_probability, recovery_width, weak_width, JointEntry,
    RECOVERY_FIDELITY_THRESHOLD,
};
use revspin_core::{joint_measure, measure, Error, HalfInt, MeasurementParams, SpinState};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};
use std::path::Path;

fn write_file(dir: &Path, name: &str, content: &str) -> Result<(), Failure> {
    let path = dir.join(name);
    std::fs::write(&path, content).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn condition(e: Error) -> Failure {
    Failure::Condition(e.to_string())
}

/// Rejects scenarios where some outcome operator is singular, so no
/// reversing measurement exists.
fn require_reversible(scenario: &Scenario) -> Result<(), Failure> {
    let report = reversibility_condition(&scenario.params, scenario.s);
    if report.holds {
        return Ok(());
    }
    let detail: Vec<String> = report
        .failures
        .iter()
        .map(|f| format!("{} = {:.3e}", f.quantity, f.magnitude))
        .collect();
    Err(Failure::Condition(format!(
        "reversal undefined at these parameters: {}",
        detail.join("; ")
    )))
}

pub fn figure(id: u8, out: &Path, args: &ScenarioArgs) -> Result<(), Failure> {
    let csv = match id {
        1 => amplitude_profile(args)?,
        3 => first_stage_table(args, &REFERENCE)?,
        4 => joint_table(args, &REFERENCE, Column::Probability)?,
        5 => joint_table(args, &REFERENCE, Column::Fidelity)?,
        6 => information_table(args)?,
        7 => fidelity_oscillation(args)?,
        8 => preparation_table(args)?,
        9 => first_stage_table(args, &WEAK)?,
        10 => joint_table(args, &WEAK, Column::Probability)?,
        11 => joint_table(args, &WEAK, Column::Fidelity)?,
        _ => unreachable!("ids validated at parse time"),
    };
    write_file(out, &format!("fig{id}.csv"), &csv)
}

fn amplitude_profile(args: &ScenarioArgs) -> Result<String, Failure> {
    let scenario = resolve(args, &REFERENCE)?;
    let params = &scenario.params;
    let mut csv = Csv::new("m,asq_plus,asq_minus");
    for m in params.j().projections() {
        let plus = coefficient_magnitude_sq(params, m, HalfInt::HALF).map_err(usage)?;
        let minus = coefficient_magnitude_sq(params, m, -HalfInt::HALF).map_err(usage)?;
        csv.row([m.to_string(), fmt_value(plus), fmt_value(minus)]);
    }
    Ok(csv.into_string())
}

fn first_stage_table(args: &ScenarioArgs, defaults: &Defaults) -> Result<String, Failure> {
    let scenario = resolve(args, defaults)?;
    let table = measure(&scenario.state, &scenario.params);
    let mut csv = Csv::new("m,p,fidelity");
    for outcome in table.outcomes() {
        csv.row([
            outcome.m.to_string(),
            fmt_value(outcome.probability),
            fmt_value(outcome.fidelity),
        ]);
    }
    Ok(csv.into_string())
}

enum Column {
    Probability,
    Fidelity,
}

fn joint_table(args: &ScenarioArgs, defaults: &Defaults, column: Column) -> Result<String, Failure> {
    let scenario = resolve(args, defaults)?;
    require_reversible(&scenario)?;
    let table = joint_measure(&scenario.state, &scenario.params);
    let (name, pick): (&str, fn(&JointEntry) -> f64) = match column {
        Column::Probability => ("p", |e| e.probability),
        Column::Fidelity => ("fidelity", |e| e.fidelity),
    };
    let mut csv = Csv::new(&format!("m,mp,{name}"));
    for entry in table.entries() {
        csv.row([
            entry.m.to_string(),
            entry.mp.to_string(),
            fmt_value(pick(entry)),
        ]);
    }
    Ok(csv.into_string())
}

fn information_table(args: &ScenarioArgs) -> Result<String, Failure> {
    let scenario = resolve(args, &REFERENCE)?;
    require_reversible(&scenario)?;
    let pair = make_hypothesis_pair(scenario.gamma).map_err(usage)?;
    let first = analyze_first(&pair, &scenario.params);
    let joint = analyze_joint(&pair, &scenario.params);
    let cell = |value: Option<f64>| value.map(fmt_value).unwrap_or_default();
    let mut csv = Csv::new("m,p,info,fidelity,info_next,fidelity_next");
    for (outcome, retried) in first.records().iter().zip(joint.records()) {
        csv.row([
            outcome.m.to_string(),
            fmt_value(outcome.probability),
            cell(outcome.info),
            cell(outcome.fidelity),
            cell(retried.info),
            cell(retried.fidelity),
        ]);
    }
    Ok(csv.into_string())
}

const OSCILLATION: Defaults = Defaults {
    j: HalfInt::from_int(50),
    ..REFERENCE
};

/// Average squared fidelity and exact-recovery probability as the probe
/// spin grows; defined for s = 1/2 where the closed form for q exists.
fn fidelity_oscillation(args: &ScenarioArgs) -> Result<String, Failure> {
    let scenario = resolve(args, &OSCILLATION)?;
    if scenario.s != HalfInt::HALF {
        return Err(Failure::Usage(
            "figure 7 is defined for s = 1/2".to_owned(),
        ));
    }
    require_reversible(&scenario)?;
    let mut csv = Csv::new("j,avg_sq_fidelity,q");
    for twice_j in 1..=scenario.params.j().twice() {
        let j = HalfInt::from_twice(twice_j);
        let params = MeasurementParams::new(
            j,
            scenario.params.g(),
            scenario.params.theta(),
            scenario.params.phi(),
        )
        .map_err(usage)?;
        let sq = measure(&scenario.state, &params).average_sq_fidelity();
        let q = recovery_probability(&params, None).map_err(condition)?;
        csv.row([j.to_string(), fmt_value(sq), fmt_value(q)]);
    }
    Ok(csv.into_string())
}

/// Initial equatorial weights next to the post-selected distribution.
fn preparation_table(args: &ScenarioArgs) -> Result<String, Failure> {
    let scenario = resolve(args, &PREPARATION)?;
    let azimuth = scenario.params.phi();
    let initial = prepare_coherent_equatorial(scenario.s, azimuth).map_err(usage)?;
    let prep = subspace_prepare(
        scenario.s,
        scenario.params.j(),
        scenario.params.g(),
        azimuth,
        scenario.m,
    )
    .map_err(|e| match e {
        Error::VanishingPreparation(_) => condition(e),
        other => usage(other),
    })?;
    let mut csv = Csv::new("sigma,initial,prepared");
    for ((sigma, weight), amplitude) in prep.distribution.iter().zip(initial.amplitudes()) {
        csv.row([
            sigma.to_string(),
            fmt_value(amplitude.norm_sqr()),
            fmt_value(*weight),
        ]);
    }
    Ok(csv.into_string())
}

const ZCAT: Defaults = Defaults {
    state: "cat-z:1,0,1,0",
    ..WEAK
};

fn preset_defaults(preset: &str) -> Result<&'static Defaults, Failure> {
    match preset {
        "paper-3-1" => Ok(&REFERENCE),
        "paper-4-2" => Ok(&WEAK),
        "paper-4-3-zcat" => Ok(&ZCAT),
        other => Err(Failure::Usage(format!("unknown preset {other:?}"))),
    }
}

fn preset_decimals(preset: Option<&str>, metric: &str) -> usize {
    match (preset, metric) {
        (Some("paper-3-1"), "delta_m") => 1,
        (Some("paper-3-1"), _) => 2,
        (Some("paper-4-2"), "q_prime") => 5,
        (Some("paper-4-2"), "delta_m_tilde") => 1,
        (Some("paper-4-2"), _) => 3,
        (Some("paper-4-3-zcat"), "q_prime") => 2,
        (Some("paper-4-3-zcat"), "delta_m_tilde") => 1,
        (Some("paper-4-3-zcat"), _) => 3,
        _ => 4,
    }
}

pub fn metrics(preset: Option<&str>, out: &Path, args: &ScenarioArgs) -> Result<(), Failure> {
    let defaults = match preset {
        Some(name) => preset_defaults(name)?,
        None => &REFERENCE,
    };
    let scenario = resolve(args, defaults)?;
    require_reversible(&scenario)?;
    let first = measure(&scenario.state, &scenario.params);
    let joint = joint_measure(&scenario.state, &scenario.params);
    let mut rows: Vec<(&str, f64)> = vec![
        ("avg_fidelity_first", first.average_fidelity()),
        ("avg_fidelity_joint", joint.average_fidelity()),
    ];
    if scenario.s == HalfInt::HALF {
        let q = recovery_probability(&scenario.params, None).map_err(condition)?;
        let qp = approx_recovery_probability(
            &scenario.state,
            &scenario.params,
            RECOVERY_FIDELITY_THRESHOLD,
        );
        let width = recovery_width(&scenario.params).map_err(condition)?;
        rows.push(("q", q));
        rows.push(("q_prime", qp));
        rows.push(("delta_m", width));
    } else {
        let width = weak_width(&scenario.params, scenario.s).map_err(condition)?;
        rows.push(("delta_m_tilde", width));
        rows.push(("q_prime", joint.recovered_mass(RECOVERY_FIDELITY_THRESHOLD)));
    }
    let mut csv = Csv::new("metric,value,rounded");
    for (name, value) in rows {
        let decimals = preset_decimals(preset, name);
        csv.row([
            name.to_owned(),
            fmt_value(value),
            format!("{value:.decimals$}"),
        ]);
    }
    write_file(out, "metrics.csv", &csv.into_string())
}

pub fn oracle_check(max_two_j: i32, max_two_s: i32, tol: f64) -> Result<(), Failure> {
    if max_two_j < 1 || max_two_s < 1 {
        return Err(Failure::Usage("spin caps must be at least 1".to_owned()));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Failure::Usage(format!(
            "tolerance {tol} must be positive and finite"
        )));
    }
    let thetas = [0.4, FRAC_PI_2, 2.7];
    let phis = [-2.1, FRAC_PI_6, 2.9];
    let gs = [0.1, 0.25, 1.3];
    let mut csv = Csv::new("two_j,two_s,max_dev");
    let mut worst = 0.0f64;
    for twice_j in 1..=max_two_j {
        let j = HalfInt::from_twice(twice_j);
        for twice_s in 1..=max_two_s {
            let s = HalfInt::from_twice(twice_s);
            let system = SpinState::uniform(s).map_err(usage)?;
            let mut max_dev = 0.0f64;
            for &theta in &thetas {
                for &phi in &phis {
                    for &g in &gs {
                        let joint = evolve(theta, phi, &system, j, g).map_err(usage)?;
                        let params = MeasurementParams::new(j, g, theta, phi).map_err(usage)?;
                        let set = CoefficientSet::new(&params, s).map_err(usage)?;
                        for (row, m) in j.projections().enumerate() {
                            for (col, sigma) in s.projections().enumerate() {
                                let closed = set.table()[(row, col)] * system.amplitudes()[col];
                                let brute = joint.amplitude(m, sigma).map_err(usage)?;
                                max_dev = max_dev.max((closed - brute).norm());
                            }
                        }
                    }
                }
            }
            csv.row([
                twice_j.to_string(),
                twice_s.to_string(),
                fmt_value(max_dev),
            ]);
            worst = worst.max(max_dev);
        }
    }
    print!("{}", csv.into_string());
    if worst > tol {
        return Err(Failure::Numerical(format!(
            "max amplitude deviation {worst:.3e} exceeds tolerance {tol:.3e}"
        )));
    }
    Ok(())
}

enum GridValue {
    Spin(HalfInt),
    Real(f64),
}

fn build_grid(vary: Vary, range: &str) -> Result<Vec<GridValue>, Failure> {
    let parts: Vec<&str> = range.split(':').collect();
    let &[start, stop, step] = parts.as_slice() else {
        return Err(Failure::Usage(format!(
            "--range must be A:B:STEP, got {range:?}"
        )));
    };
    if vary == Vary::J {
        let a = parse_half_int(start).map_err(Failure::Usage)?;
        let b = parse_half_int(stop).map_err(Failure::Usage)?;
        let d = parse_half_int(step).map_err(Failure::Usage)?;
        if d.twice() <= 0 {
            return Err(Failure::Usage("step must be positive".to_owned()));
        }
        if a.twice() < 1 {
            return Err(Failure::Usage("j must be at least 1/2".to_owned()));
        }
        let mut grid = Vec::new();
        let mut twice = a.twice();
        while twice <= b.twice() {
            grid.push(GridValue::Spin(HalfInt::from_twice(twice)));
            twice += d.twice();
        }
        if grid.is_empty() {
            return Err(Failure::Usage("empty grid".to_owned()));
        }
        return Ok(grid);
    }
    let a = Angle::parse(start).map_err(Failure::Usage)?.radians();
    let b = Angle::parse(stop).map_err(Failure::Usage)?.radians();
    let d = Angle::parse(step).map_err(Failure::Usage)?.radians();
    if !d.is_finite() || d <= 0.0 {
        return Err(Failure::Usage("step must be positive".to_owned()));
    }
    let slack = d * 1e-9;
    let mut grid = Vec::new();
    let mut k = 0u32;
    loop {
        let value = a + f64::from(k) * d;
        if value > b + slack {
            break;
        }
        grid.push(GridValue::Real(value));
        k += 1;
    }
    if grid.is_empty() {
        return Err(Failure::Usage("empty grid".to_owned()));
    }
    Ok(grid)
}

fn sweep_row(scenario: &Scenario, vary: Vary, value: &GridValue) -> Result<String, Failure> {
    let base = &scenario.params;
    let (label, params) = match (vary, value) {
        (Vary::J, GridValue::Spin(j)) => (
            j.to_string(),
            MeasurementParams::new(*j, base.g(), base.theta(), base.phi()),
        ),
        (Vary::G, GridValue::Real(g)) => (
            fmt_value(*g),
            MeasurementParams::new(base.j(), *g, base.theta(), base.phi()),
        ),
        (Vary::Theta, GridValue::Real(theta)) => (
            fmt_value(*theta),
            MeasurementParams::new(base.j(), base.g(), *theta, base.phi()),
        ),
        (Vary::Phi, GridValue::Real(phi)) => (
            fmt_value(*phi),
            MeasurementParams::new(base.j(), base.g(), base.theta(), *phi),
        ),
        _ => unreachable!("grid values match the varied parameter"),
    };
    let params = params.map_err(usage)?;
    let first = measure(&scenario.state, &params);
    let joint = joint_measure(&scenario.state, &params);
    let q = if scenario.s == HalfInt::HALF {
        recovery_probability(&params, None).ok()
    } else {
        None
    };
    let q_prime = joint.recovered_mass(RECOVERY_FIDELITY_THRESHOLD);
    let width = if scenario.s == HalfInt::HALF {
        recovery_width(&params).ok()
    } else {
        weak_width(&params, scenario.s).ok()
    }
    .filter(|w| w.is_finite());
    let cells = [
        label,
        fmt_value(first.average_fidelity()),
        fmt_value(joint.average_fidelity()),
        q.map(fmt_value).unwrap_or_default(),
        fmt_value(q_prime),
        width.map(fmt_value).unwrap_or_default(),
    ];
    Ok(cells.join(","))
}

fn thread_cap() -> Result<Option<usize>, Failure> {
    match std::env::var("REVSPIN_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Failure::Usage(format!("REVSPIN_THREADS: {e}"))),
        Ok(text) => {
            let n: usize = text.parse().map_err(|_| {
                Failure::Usage(format!(
                    "REVSPIN_THREADS = {text:?} is not a positive integer"
                ))
            })?;
            if n == 0 {
                return Err(Failure::Usage(
                    "REVSPIN_THREADS must be positive".to_owned(),
                ));
            }
            Ok(Some(n))
        }
    }
}

pub fn sweep(vary: Vary, range: &str, out: &Path, args: &ScenarioArgs) -> Result<(), Failure> {
    let scenario = resolve(args, &REFERENCE)?;
    let cap = thread_cap()?;
    let grid = build_grid(vary, range)?;
    let compute = || -> Result<Vec<String>, Failure> {
        grid.par_iter()
            .map(|point| sweep_row(&scenario, vary, point))
            .collect()
    };
    let rows = match cap {
        None => compute(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Io(e.to_string()))?
            .install(compute),
    }?;
    let mut csv = Csv::new("value,avg_fidelity_first,avg_fidelity_joint,q,q_prime,width");
    for row in rows {
        csv.row([row]);
    }
    write_file(out, "sweep.csv", &csv.into_string())
}
