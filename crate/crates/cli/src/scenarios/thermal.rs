//! Particle-creation and horizon-thermodynamics scenarios.

use num_complex::Complex64;
use serde::Serialize;

use qfl_core::blackhole::{area_theorem_check, first_law_check, schwarzschild, BlackHoleParams};
use qfl_core::bogoliubov::{
    bose_einstein, hawking_spectrum, hawking_temperature, quench_map, single_mode_occupation_check,
    sudden_quench, thermality_fit, unruh_spectrum, unruh_temperature, vacuum_occupation,
    QuenchMode, QuenchModel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CliError, CliResult, Context, Scenario};
use crate::report::{csv_f64, write_csv, write_json, RunReport};

/// Quench report schema: `{m_in, m_out, L, modes: [...]}`.
#[derive(Serialize)]
struct QuenchReport {
    m_in: f64,
    m_out: f64,
    #[serde(rename = "L")]
    l: f64,
    modes: Vec<QuenchMode>,
}

pub fn quench(ctx: &Context) -> CliResult<RunReport> {
    let mut report = RunReport::new(Scenario::Quench.name());
    ctx.params.echo_into(&mut report);
    let m_in = ctx.params.get_f64("m_in", 1.0)?;
    let m_out = ctx.params.get_f64("m_out", 2.0)?;
    let length = ctx.params.get_f64("length", 2.0 * std::f64::consts::PI)?;
    let n_max = ctx.params.get_i64("n_max", 8)?;
    let truncation = ctx.params.get_usize("truncation", 64)?;
    report.input("m_in", m_in);
    report.input("m_out", m_out);
    report.input("length", length);
    report.input("n_max", n_max);
    report.input("truncation", truncation);
    if n_max < 0 {
        return Err(CliError::Usage("n_max must be >= 0".into()));
    }

    let modes: Vec<i64> = (-n_max..=n_max).collect();
    let model = QuenchModel::new(m_in, m_out, length, modes.clone())?;
    let per_mode = sudden_quench(&model)?;

    let mut worst_unitarity = 0.0f64;
    for mode in &per_mode {
        worst_unitarity =
            worst_unitarity.max((mode.alpha * mode.alpha - mode.beta * mode.beta - 1.0).abs());
    }
    report.value("max_unitarity_residual", worst_unitarity);
    report.check_bound("|alpha|^2 - |beta|^2 = 1 per mode", worst_unitarity, 1e-12);

    // Inner-product route must reproduce the closed form.
    let map = quench_map(&model)?;
    let normalization = map.normalization_residual();
    report.value("normalization_residual", normalization);
    report.check_bound("bogoliubov normalization identity", normalization, 1e-10);
    let mut worst_cross = 0.0f64;
    for (row, mode) in per_mode.iter().enumerate() {
        worst_cross = worst_cross.max((vacuum_occupation(&map, row)? - mode.n_created).abs());
    }
    report.value("max_route_disagreement", worst_cross);
    report.check_bound(
        "inner-product route matches the matching solve",
        worst_cross,
        1e-10,
    );

    // Operator-level check on the k = 0 (or lowest |n|) mode.
    let reference = per_mode
        .iter()
        .min_by(|a, b| a.n.abs().cmp(&b.n.abs()))
        .expect("at least one mode");
    let occ = single_mode_occupation_check(
        Complex64::new(reference.alpha, 0.0),
        Complex64::new(reference.beta, 0.0),
        truncation,
    )?;
    report.value("reference_n_created", reference.n_created);
    report.value("operator_route_occupation", occ);
    report.check_bound(
        "operator-level occupation agrees",
        occ - reference.n_created,
        1e-6,
    );

    if ctx.format.json() {
        let path = ctx.scenario_dir(Scenario::Quench).join("quench.json");
        write_json(
            &path,
            &QuenchReport {
                m_in,
                m_out,
                l: length,
                modes: per_mode.clone(),
            },
        )?;
        report.artifacts.push(path);
    }
    Ok(report)
}

fn spectrum_scenario(
    ctx: &Context,
    scenario: Scenario,
    temperature: f64,
    occupation: impl Fn(f64) -> CliResult<f64>,
    report: &mut RunReport,
) -> CliResult<()> {
    let omega_min = ctx.params.get_f64("omega_min", 0.1 * temperature)?;
    let omega_max = ctx.params.get_f64("omega_max", 5.0 * temperature)?;
    let count = ctx.params.get_usize("count", 20)?;
    if count < 2 || !(omega_max > omega_min) || !(omega_min > 0.0) {
        return Err(CliError::Usage(
            "need count >= 2 and 0 < omega_min < omega_max".into(),
        ));
    }
    report.input("omega_min", omega_min);
    report.input("omega_max", omega_max);
    report.input("count", count);

    let mut samples = Vec::with_capacity(count);
    let mut worst_identity = 0.0f64;
    for i in 0..count {
        let omega = omega_min + (omega_max - omega_min) * i as f64 / (count - 1) as f64;
        let n = occupation(omega)?;
        worst_identity = worst_identity.max((n - bose_einstein(omega, temperature)?).abs());
        samples.push((omega, n));
    }
    report.value("temperature", temperature);
    report.value("max_identity_residual", worst_identity);
    report.check_bound("spectrum is bose-einstein at T", worst_identity, 1e-12);

    let (slope, intercept, resid) = thermality_fit(&samples)?;
    report.value("fit_slope", slope);
    report.value("fit_intercept", intercept);
    report.value("fit_residual", resid);
    report.check_bound("log(1 + 1/n) is linear in omega", resid, 1e-10);
    report.check_bound(
        "fit slope is 1/T",
        slope - 1.0 / temperature,
        1e-8 * slope.abs().max(1.0),
    );

    if ctx.format.csv() {
        let rows: Vec<String> = samples
            .iter()
            .map(|&(w, n)| format!("{},{},{}", csv_f64(w), csv_f64(n), csv_f64(temperature)))
            .collect();
        let path = ctx.scenario_dir(scenario).join("spectrum.csv");
        write_csv(&path, "omega,occupation,temperature", &rows)?;
        report.artifacts.push(path);
    }
    Ok(())
}

pub fn unruh(ctx: &Context) -> CliResult<RunReport> {
    let mut report = RunReport::new(Scenario::Unruh.name());
    ctx.params.echo_into(&mut report);
    let acceleration = ctx.params.get_f64("acceleration", 2.0)?;
    if !(acceleration > 0.0) {
        return Err(CliError::Usage("acceleration must be positive".into()));
    }
    report.input("acceleration", acceleration);
    let temperature = unruh_temperature(acceleration);
    spectrum_scenario(
        ctx,
        Scenario::Unruh,
        temperature,
        |omega| Ok(unruh_spectrum(omega, acceleration)?),
        &mut report,
    )?;
    Ok(report)
}

pub fn hawking(ctx: &Context) -> CliResult<RunReport> {
    let mut report = RunReport::new(Scenario::Hawking.name());
    ctx.params.echo_into(&mut report);
    let mass = ctx.params.get_f64("mass", 1.0)?;
    let g = ctx.params.get_f64("g", 1.0)?;
    if !(mass > 0.0) || !(g > 0.0) {
        return Err(CliError::Usage("mass and g must be positive".into()));
    }
    report.input("mass", mass);
    report.input("g", g);
    let temperature = hawking_temperature(mass, g);
    spectrum_scenario(
        ctx,
        Scenario::Hawking,
        temperature,
        |omega| Ok(hawking_spectrum(omega, mass, g)?),
        &mut report,
    )?;

    // Cross-module coherence with the horizon geometry.
    let derived = schwarzschild(&BlackHoleParams::schwarzschild(mass, g)?)?;
    let diff = (derived.temperature - temperature).abs();
    report.value("horizon_temperature", derived.temperature);
    report.check_bound("spectrum temperature equals the horizon one", diff, 1e-15);
    Ok(report)
}

/// Blackhole report schema: `{M, G, r_h, A, kappa, T, S, first_law_residual}`.
#[derive(Serialize)]
struct BlackholeReport {
    #[serde(rename = "M")]
    mass: f64,
    #[serde(rename = "G")]
    g: f64,
    r_h: f64,
    #[serde(rename = "A")]
    area: f64,
    kappa: f64,
    #[serde(rename = "T")]
    temperature: f64,
    #[serde(rename = "S")]
    entropy: f64,
    first_law_residual: f64,
}

pub fn blackhole(ctx: &Context) -> CliResult<RunReport> {
    let mut report = RunReport::new(Scenario::Blackhole.name());
    ctx.params.echo_into(&mut report);
    let mass = ctx.params.get_f64("mass", 1.0)?;
    let g = ctx.params.get_f64("g", 1.0)?;
    let dm = ctx.params.get_f64("dm", 1e-4)?;
    let mergers = ctx.params.get_usize("mergers", 1000)?;
    report.input("mass", mass);
    report.input("g", g);
    report.input("dm", dm);
    report.input("mergers", mergers);

    let params = BlackHoleParams::schwarzschild(mass, g)?;
    let derived = schwarzschild(&params)?;
    report.value("r_h", derived.r_h);
    report.value("area", derived.area);
    report.value("kappa", derived.kappa);
    report.value("temperature", derived.temperature);
    report.value("entropy", derived.entropy);

    let pi = std::f64::consts::PI;
    report.check_bound(
        "S = 4*pi*G*M^2",
        derived.entropy - 4.0 * pi * g * mass * mass,
        1e-12 * derived.entropy.max(1.0),
    );
    report.check_bound(
        "T*S = M/2",
        derived.temperature * derived.entropy - mass / 2.0,
        1e-12 * mass.max(1.0),
    );
    report.check_bound(
        "S/A = 1/(4G)",
        derived.entropy / derived.area - 1.0 / (4.0 * g),
        1e-12 / g,
    );

    let fine = first_law_check(&params, dm)?;
    let coarse = first_law_check(&params, 2.0 * dm)?;
    report.value("first_law_residual", fine.residual);
    report.value("ds_geometric", fine.ds_geometric);
    report.value("dm_over_t", fine.dm_over_t);
    report.check_bound("first law residual", fine.residual, 1e-6);
    let ratio = coarse.residual / fine.residual;
    report.value("richardson_ratio", ratio);
    report.check(
        "residual is O(dM^2)",
        (ratio - 4.0).abs() <= 0.8,
        format!("doubling dM scales the residual by {ratio}"),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(ctx.params.seed);
    let mut strict = true;
    for _ in 0..mergers {
        let m1 = rng.random::<f64>() * 10.0 + 1e-3;
        let m2 = rng.random::<f64>() * 10.0 + 1e-3;
        let check = area_theorem_check(m1, m2, g)?;
        strict &= check.area_merged > check.area_sum;
    }
    report.check(
        "area theorem strict for random mergers",
        strict,
        format!("{mergers} random pairs"),
    );

    if ctx.format.json() {
        let path = ctx.scenario_dir(Scenario::Blackhole).join("blackhole.json");
        write_json(
            &path,
            &BlackholeReport {
                mass,
                g,
                r_h: derived.r_h,
                area: derived.area,
                kappa: derived.kappa,
                temperature: derived.temperature,
                entropy: derived.entropy,
                first_law_residual: fine.residual,
            },
        )?;
        report.artifacts.push(path);
    }
    Ok(report)
}
