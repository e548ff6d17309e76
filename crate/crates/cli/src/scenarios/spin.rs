//! Finite-dimensional scenarios: Hardy witness, sequential measurement
//! chains, EPR correlations and the time-operator trace obstruction.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qfl_core::spin::{
    born_probabilities, chain_probability, collapse, commutator, epr_state, hardy_state,
    hardy_witness, outcome_frequencies, pauli, pauli_theorem_obstruction, tensor_ops,
    tensor_states, OperatorMatrix, StateVector,
};

use super::{CliResult, Context, Scenario};
use crate::report::RunReport;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn hardy(ctx: &Context) -> CliResult<RunReport> {
    let mut report = RunReport::new(Scenario::Hardy.name());
    ctx.params.echo_into(&mut report);

    let (amplitude, probability) = hardy_witness();
    let expected = -1.0 / (2.0 * 3.0f64.sqrt());
    report.value("amplitude_re", amplitude.re);
    report.value("amplitude_im", amplitude.im);
    report.value("probability", probability);
    report.value("expected_amplitude", expected);
    report.check_bound(
        "amplitude matches -1/(2*sqrt(3))",
        amplitude.re - expected,
        1e-12,
    );
    report.check_bound("amplitude is real", amplitude.im, 1e-12);
    report.check_bound("probability is 1/12", probability - 1.0 / 12.0, 1e-12);

    // The three classical inferences hold as exact zero amplitudes.
    let h = hardy_state();
    let up = qfl_core::spin::up();
    let down = qfl_core::spin::down();
    let down1 = StateVector::normalized(vec![c(1.0, 0.0), c(-1.0, 0.0)]).expect("static state");
    let claim_i = tensor_states(&up, &up).inner(&h).norm();
    let claim_ii = tensor_states(&down, &down1).inner(&h).norm();
    let claim_iii = tensor_states(&down1, &down).inner(&h).norm();
    report.value("claim_i_amplitude", claim_i);
    report.value("claim_ii_amplitude", claim_ii);
    report.value("claim_iii_amplitude", claim_iii);
    report.check_bound("claim (i): never both up", claim_i, 1e-12);
    report.check_bound("claim (ii): first down forces second up1", claim_ii, 1e-12);
    report.check_bound(
        "claim (iii): second down forces first up1",
        claim_iii,
        1e-12,
    );
    Ok(report)
}

pub fn sequential(ctx: &Context) -> CliResult<RunReport> {
    let mut report = RunReport::new(Scenario::Sequential.name());
    ctx.params.echo_into(&mut report);
    let runs = ctx.params.get_usize("runs", 100_000)? as u64;
    report.input("runs", runs);

    let up1 = StateVector::normalized(vec![c(1.0, 0.0), c(1.0, 0.0)]).expect("static state");
    let chain = [(pauli(3)?, 1.0), (pauli(1)?, -1.0)];
    let p = chain_probability(&up1, &chain)?;
    report.value("chain_probability", p);
    report.check_bound("chain probability is 0.25", p - 0.25, 1e-12);

    let counts = outcome_frequencies(&up1, &[pauli(3)?, pauli(1)?], ctx.params.seed, runs)?;
    let freq = counts.frequency_of(&[1.0, -1.0]);
    let sigma = (0.25 * 0.75 / runs as f64).sqrt();
    report.value("mc_frequency", freq);
    report.value("mc_three_sigma", 3.0 * sigma);
    report.check(
        "monte carlo within 3 sigma of 0.25",
        (freq - 0.25).abs() < 3.0 * sigma,
        format!("|{} - 0.25| < {}", freq, 3.0 * sigma),
    );
    Ok(report)
}

pub fn epr(ctx: &Context) -> CliResult<RunReport> {
    let mut report = RunReport::new(Scenario::Epr.name());
    ctx.params.echo_into(&mut report);

    let state = epr_state();
    let first = tensor_ops(&pauli(3)?, &OperatorMatrix::identity(2));
    let probs = born_probabilities(&state, &first)?;
    report.value("p_first_up", probs[0].1);
    report.value("p_first_down", probs[1].1);
    report.check_bound("first-particle outcomes are 50:50", probs[0].1 - 0.5, 1e-10);

    // Conditional second-particle state after finding the first one up.
    let collapsed = collapse(&state, &first, 1.0)?;
    let second = StateVector::normalized(vec![collapsed.amplitude(0), collapsed.amplitude(1)])?;
    let fidelity = second.overlap_probability(&qfl_core::spin::down());
    report.value("conditional_down_fidelity", fidelity);
    report.check_bound("second particle is opposite", fidelity - 1.0, 1e-10);

    let comm = commutator(
        &tensor_ops(&pauli(1)?, &OperatorMatrix::identity(2)),
        &tensor_ops(&OperatorMatrix::identity(2), &pauli(2)?),
    )?;
    let comm_norm = comm.max_abs_diff(&OperatorMatrix::zeros(4));
    report.value("cross_commutator_norm", comm_norm);
    report.check(
        "subsystem operators commute exactly",
        comm_norm == 0.0,
        format!("max |[s1x1, 1xs2]| = {comm_norm}"),
    );
    Ok(report)
}

pub fn pauli_obstruction(ctx: &Context) -> CliResult<RunReport> {
    let mut report = RunReport::new(Scenario::PauliObstruction.name());
    ctx.params.echo_into(&mut report);
    let trials = ctx.params.get_usize("trials", 100)?;
    let max_dim = ctx.params.get_usize("max_dim", 16)?;
    if max_dim < 2 {
        return Err(super::CliError::Usage("max_dim must be >= 2".into()));
    }
    report.input("trials", trials);
    report.input("max_dim", max_dim);

    let mut rng = ChaCha8Rng::seed_from_u64(ctx.params.seed);
    let mut worst = 0.0f64;
    for trial in 0..trials {
        let dim = 2 + trial % (max_dim - 1);
        let mut random_hermitian = || -> CliResult<OperatorMatrix> {
            let raw = DMatrix::from_fn(dim, dim, |_, _| {
                c(
                    rng.random::<f64>() * 2.0 - 1.0,
                    rng.random::<f64>() * 2.0 - 1.0,
                )
            });
            Ok(OperatorMatrix::new((&raw + raw.adjoint()) * c(0.5, 0.0))?)
        };
        let t = random_hermitian()?;
        let h = random_hermitian()?;
        let (lhs, rhs) = pauli_theorem_obstruction(&t, &h, 1.0)?;
        worst = worst.max(lhs.norm());
        if (rhs - c(0.0, -(dim as f64))).norm() != 0.0 {
            report.check("rhs is -i*hbar*dim", false, format!("dim {dim}: {rhs}"));
        }
    }
    report.value("max_commutator_trace", worst);
    report.check_bound("tr[T,H] vanishes while tr(-i*1) does not", worst, 1e-10);
    Ok(report)
}
