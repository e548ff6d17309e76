//! Relativistic and Fock-space scenarios: the j⁰-negativity witness on a
//! Klein-Gordon mode sum, the Dirac algebra checks, and harmonic vs
//! anharmonic oscillator spectra.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qfl_core::fock::{general_h, harmonic_h, ladder, Polynomial};
use qfl_core::relativistic::{
    dirac_current, dirac_gammas, eta, kg_current, kg_inner, negativity_scan, total_charge,
    FrequencySign, KGField, KGFieldSpec, KGModeSpec, SpinorValue,
};

use super::{CliError, CliResult, Context, Scenario};
use crate::report::{csv_f64, write_csv, write_json, RunReport};

pub fn kg_negativity(ctx: &Context) -> CliResult<RunReport> {
    let mut report = RunReport::new(Scenario::KgNegativity.name());
    ctx.params.echo_into(&mut report);
    let t_max = ctx.params.get_f64("t_max", 10.0)?;
    let grid = ctx.params.get_usize("grid", 512)?;

    // A field description can be ingested from JSON; otherwise the default
    // two-mode superposition is built from the n1/n2 parameters.
    let field = match ctx.params.get_path("field") {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| {
                CliError::Usage(format!("cannot read field spec {}: {e}", path.display()))
            })?;
            let spec: KGFieldSpec = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("bad field spec JSON: {e}")))?;
            spec.build()?
        }
        None => {
            let n1 = ctx.params.get_i64("n1", 1)?;
            let n2 = ctx.params.get_i64("n2", 3)?;
            let mass = ctx.params.get_f64("mass", 1.0)?;
            let length = ctx.params.get_f64("length", 2.0 * std::f64::consts::PI)?;
            KGField::new(
                length,
                vec![
                    (
                        KGModeSpec::new(length, n1, mass, FrequencySign::Positive)?,
                        Complex64::new(1.0, 0.0),
                    ),
                    (
                        KGModeSpec::new(length, n2, mass, FrequencySign::Positive)?,
                        Complex64::new(1.0, 0.0),
                    ),
                ],
            )?
        }
    };
    report.input("terms", field.terms.len());

    // Inner-product conservation over a spread of times.
    let probe = KGField::new(field.l, vec![field.terms[0]])?;
    let normalization = kg_inner(&probe, &probe, 0.0)?;
    let samples: Vec<Complex64> = [0.0, 0.9, 1.7, 3.3, 6.1]
        .iter()
        .map(|&t| kg_inner(&probe, &field, t))
        .collect::<Result<_, _>>()?;
    let spread = samples
        .iter()
        .map(|v| (v - samples[0]).norm())
        .fold(0.0, f64::max);
    report.value("inner_product_time_spread", spread);
    report.check_bound("inner product is conserved", spread, 1e-10);
    report.value("mode_norm", normalization.re);

    let conj = probe.conjugated();
    let neg_norm = kg_inner(&conj, &conj, 0.0)?;
    report.value("conjugate_norm", neg_norm.re);
    report.check_bound("negative-frequency norm is -1", neg_norm.re + 1.0, 1e-12);

    let scan = negativity_scan(&field, (0.0, t_max), (0.0, field.l), grid, grid)?;
    let charge = total_charge(&field);
    report.value("min_j0", scan.min_j0);
    report.value("argmin_t", scan.argmin.0);
    report.value("argmin_x", scan.argmin.1);
    report.value("total_charge", charge);
    report.check(
        "pointwise density goes negative",
        scan.min_j0 < 0.0,
        format!("min j0 = {}", scan.min_j0),
    );
    report.check(
        "integrated charge stays positive",
        charge > 0.0,
        format!("integral = {charge}"),
    );

    if ctx.format.csv() {
        // Decimated j0/j1 table over the scan window.
        let rows_n = 128.min(grid);
        let mut rows = Vec::with_capacity(rows_n * rows_n);
        for it in 0..rows_n {
            let t = t_max * it as f64 / (rows_n - 1) as f64;
            let xs: Vec<f64> = (0..rows_n)
                .map(|ix| field.l * ix as f64 / (rows_n - 1) as f64)
                .collect();
            let (j0, j1) = kg_current(&field, t, &xs);
            for (ix, &x) in xs.iter().enumerate() {
                rows.push(format!(
                    "{},{},{},{}",
                    csv_f64(t),
                    csv_f64(x),
                    csv_f64(j0[ix]),
                    csv_f64(j1[ix])
                ));
            }
        }
        let path = ctx.scenario_dir(Scenario::KgNegativity).join("current.csv");
        write_csv(&path, "t,x,j0,j1", &rows)?;
        report.artifacts.push(path);
    }
    Ok(report)
}

pub fn dirac_check(ctx: &Context) -> CliResult<RunReport> {
    let mut report = RunReport::new(Scenario::DiracCheck.name());
    ctx.params.echo_into(&mut report);
    let spinors = ctx.params.get_usize("spinors", 10_000)?;
    report.input("spinors", spinors);

    let g = dirac_gammas();
    let mut worst_identity = 0.0f64;
    for mu in 0..4 {
        for nu in mu..4 {
            let anti = g.gamma[mu] * g.gamma[nu] + g.gamma[nu] * g.gamma[mu];
            let expected = nalgebra::Matrix4::identity()
                .map(|v: Complex64| v * Complex64::new(2.0 * eta(mu, nu), 0.0));
            let diff = (anti - expected)
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            worst_identity = worst_identity.max(diff);
        }
    }
    report.value("max_anticommutator_deviation", worst_identity);
    report.check(
        "all 10 anticommutator identities exact",
        worst_identity == 0.0,
        format!("max deviation {worst_identity}"),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(ctx.params.seed);
    let mut min_j0 = f64::INFINITY;
    let mut max_im = 0.0f64;
    for _ in 0..spinors {
        let mut spinor = [Complex64::default(); 4];
        for slot in &mut spinor {
            *slot = Complex64::new(
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            );
        }
        let value = SpinorValue::new(spinor);
        let j = dirac_current(&value, &g);
        min_j0 = min_j0.min(j[0]);
        // All four components must be real: check through the bilinear.
        let psi = nalgebra::Vector4::from_row_slice(&value.components);
        for mu in 0..4 {
            let bilinear = (psi.adjoint() * g.gamma[0] * g.gamma[mu] * psi)[(0, 0)];
            max_im = max_im.max(bilinear.im.abs());
        }
    }
    report.value("min_j0", min_j0);
    report.value("max_im_component", max_im);
    report.check(
        "j0 is non-negative for every spinor",
        min_j0 >= 0.0,
        format!("min j0 = {min_j0}"),
    );
    report.check_bound("current components are real", max_im, 1e-12);
    Ok(report)
}

/// The spectrum report schema for the fock-spectrum scenario.
#[derive(Serialize)]
struct SpectrumReport {
    dim: usize,
    omega: f64,
    potential: String,
    eigenvalues: Vec<f64>,
    n_commutator_norm: f64,
}

pub fn fock_spectrum(ctx: &Context) -> CliResult<RunReport> {
    let mut report = RunReport::new(Scenario::FockSpectrum.name());
    ctx.params.echo_into(&mut report);
    let dim = ctx.params.get_usize("dim", 64)?;
    let omega = ctx.params.get_f64("omega", 1.0)?;
    let mass = ctx.params.get_f64("mass", 1.0)?;
    let potential = ctx.params.get_str("potential", "harmonic");
    report.input("dim", dim);
    report.input("omega", omega);
    report.input("potential", &potential);

    // "harmonic" or "quartic:<lambda>"; anything else is unsupported.
    let (v, label) = if potential == "harmonic" {
        (Polynomial::harmonic(mass, omega), "harmonic".to_string())
    } else if let Some(lambda_text) = potential.strip_prefix("quartic:") {
        let lambda: f64 = lambda_text
            .parse()
            .map_err(|_| CliError::Usage(format!("bad quartic coefficient '{lambda_text}'")))?;
        let mut coeffs = Polynomial::harmonic(mass, omega).coeffs;
        coeffs.extend([0.0, lambda]);
        (Polynomial::new(coeffs), format!("quartic:{lambda}"))
    } else {
        return Err(CliError::Usage(format!(
            "unsupported potential '{potential}' (use 'harmonic' or 'quartic:<lambda>')"
        )));
    };

    let is_harmonic = label == "harmonic";
    // The split frequency is a free parameter; a stiffer basis converges
    // faster for the quartic (see the fock module docs).
    let default_basis = if is_harmonic { omega } else { 2.0 * omega };
    let basis_omega = ctx.params.get_f64("basis_omega", default_basis)?;
    report.input("basis_omega", basis_omega);

    let spectrum = general_h(&ladder(dim)?, basis_omega, &v, mass)?;
    report.value("n_commutator_norm", spectrum.n_commutator_norm);
    report.value("ground_energy", spectrum.eigenvalues[0]);

    if is_harmonic {
        let reference = harmonic_h(&ladder(dim)?, omega)?;
        let max_gap_err = spectrum
            .eigenvalues
            .windows(2)
            .map(|w| ((w[1] - w[0]) - omega).abs())
            .fold(0.0, f64::max);
        let max_err = spectrum
            .eigenvalues
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        report.value("max_gap_deviation", max_gap_err);
        report.check_bound("gaps all equal omega", max_gap_err, 1e-12);
        report.check_bound("spectrum matches omega(n + 1/2)", max_err, 1e-12);
        report.check(
            "[N, H] vanishes",
            spectrum.n_commutator_norm == 0.0,
            format!("norm = {}", spectrum.n_commutator_norm),
        );
    } else {
        let doubled = general_h(&ladder(2 * dim)?, basis_omega, &v, mass)?;
        let low = spectrum.low_third();
        let drift = low
            .iter()
            .zip(doubled.eigenvalues.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        report.value("truncation_drift", drift);
        report.check_bound("low third stable under truncation doubling", drift, 1e-6);
        let gaps: Vec<f64> = low.windows(2).map(|w| w[1] - w[0]).collect();
        let monotone = gaps.windows(2).all(|w| w[1] > w[0]);
        report.check(
            "gaps strictly increase",
            monotone,
            "anharmonic spectrum is not equidistant",
        );
        report.check(
            "[N, H] does not vanish",
            spectrum.n_commutator_norm > 0.0,
            format!("norm = {}", spectrum.n_commutator_norm),
        );
    }

    if ctx.format.json() {
        let path = ctx
            .scenario_dir(Scenario::FockSpectrum)
            .join("spectrum.json");
        write_json(
            &path,
            &SpectrumReport {
                dim,
                omega,
                potential: label,
                eigenvalues: spectrum.eigenvalues.clone(),
                n_commutator_norm: spectrum.n_commutator_norm,
            },
        )?;
        report.artifacts.push(path);
    }
    Ok(report)
}
