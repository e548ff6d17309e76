//! Mode-basis changes and particle creation.
//!
//! A change of positive-frequency mode basis mixes creation and
//! annihilation operators linearly; the mixing coefficients are
//! Klein-Gordon inner products, `α_{lk} = (f̄_l, f_k)` and
//! `β*_{lk} = (f̄_l, f_k*)`, and a nonzero β row means the in-vacuum is
//! full of out-particles: `⟨0|N̄_l|0⟩ = Σ_k |β_{lk}|²`.
//!
//! The concrete nontrivial map here is a sudden mass quench in flat
//! 1+1 spacetime: in-modes of mass `m_in` are matched to out-modes of mass
//! `m_out` by continuity of the field and its first time derivative at
//! t = 0. That is a model choice standing in for a time-dependent
//! background; the Bogoliubov algebra is identical. The Unruh and Hawking
//! occupation spectra are implemented as stated results and cross-checked
//! against the Bose-Einstein form.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::relativistic::{kg_inner, FrequencySign, KGField};

// ---------------------------------------------------------------------------
// Bogoliubov maps
// ---------------------------------------------------------------------------

/// The (α, β) coefficient arrays of a mode-basis change, indexed
/// `(out l, in k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovMap {
    pub alpha: DMatrix<Complex64>,
    pub beta: DMatrix<Complex64>,
}

impl BogoliubovMap {
    /// Max deviation of `Σ_k (α_{lk}α*_{l'k} - β*_{lk}β_{l'k})` from
    /// `δ_{ll'}`.
    pub fn normalization_residual(&self) -> f64 {
        let rows = self.alpha.nrows();
        let mut worst: f64 = 0.0;
        for l in 0..rows {
            for l_prime in 0..rows {
                let mut acc = Complex64::default();
                for k in 0..self.alpha.ncols() {
                    acc += self.alpha[(l, k)] * self.alpha[(l_prime, k)].conj()
                        - self.beta[(l, k)].conj() * self.beta[(l_prime, k)];
                }
                let expected = if l == l_prime { 1.0 } else { 0.0 };
                worst = worst.max((acc - Complex64::new(expected, 0.0)).norm());
            }
        }
        worst
    }

    pub fn is_trivial(&self, tol: f64) -> bool {
        self.beta.iter().all(|z| z.norm() < tol)
    }
}

const ORTHONORMALITY_TOL: f64 = 1e-10;

/// Builds the Bogoliubov map between two positive-frequency mode bases from
/// Klein-Gordon inner products evaluated at the matching time `t`:
/// `α_{lk} = (out_l, in_k)`, `β*_{lk} = (out_l, in_k*)`.
///
/// Both bases must be orthonormal under the inner product —
/// `(f_i, f_j) = δ_{ij}`, `(f_i, f_j*) = 0` — which is checked on entry and
/// reported with the offending pair on failure.
pub fn bogoliubov_from_bases(
    in_modes: &[KGField],
    out_modes: &[KGField],
    t: f64,
) -> Result<BogoliubovMap> {
    check_orthonormal(in_modes, "in", t)?;
    check_orthonormal(out_modes, "out", t)?;
    let rows = out_modes.len();
    let cols = in_modes.len();
    let mut alpha = DMatrix::zeros(rows, cols);
    let mut beta = DMatrix::zeros(rows, cols);
    for (l, out) in out_modes.iter().enumerate() {
        for (k, in_mode) in in_modes.iter().enumerate() {
            alpha[(l, k)] = kg_inner(out, in_mode, t)?;
            beta[(l, k)] = kg_inner(out, &in_mode.conjugated(), t)?.conj();
        }
    }
    Ok(BogoliubovMap { alpha, beta })
}

fn check_orthonormal(modes: &[KGField], which: &str, t: f64) -> Result<()> {
    for (i, f) in modes.iter().enumerate() {
        for (j, g) in modes.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            let inner = kg_inner(f, g, t)?;
            if (inner - Complex64::new(expected, 0.0)).norm() > ORTHONORMALITY_TOL {
                return Err(Error::ContractViolation(format!(
                    "{which}-basis pair ({i}, {j}) has (f, g) = {inner} instead of {expected}"
                )));
            }
            let cross = kg_inner(f, &g.conjugated(), t)?;
            if cross.norm() > ORTHONORMALITY_TOL {
                return Err(Error::ContractViolation(format!(
                    "{which}-basis pair ({i}, {j}) has (f, g*) = {cross} instead of 0"
                )));
            }
        }
    }
    Ok(())
}

/// Mean out-particle number in the in-vacuum for out-mode `l`:
/// `Σ_k |β_{lk}|²`.
pub fn vacuum_occupation(map: &BogoliubovMap, l: usize) -> Result<f64> {
    if l >= map.beta.nrows() {
        return Err(Error::InvalidArgument(format!("no out-mode row {l}")));
    }
    Ok(map.beta.row(l).iter().map(|z| z.norm_sqr()).sum())
}

// ---------------------------------------------------------------------------
// Sudden quench
// ---------------------------------------------------------------------------

/// A sudden mass change `m_in → m_out` at t = 0 on a periodic box of length
/// `l`, restricted to the listed lattice mode indices.
#[derive(Debug, Clone, PartialEq)]
pub struct QuenchModel {
    pub m_in: f64,
    pub m_out: f64,
    pub l: f64,
    pub modes: Vec<i64>,
}

impl QuenchModel {
    pub fn new(m_in: f64, m_out: f64, l: f64, modes: Vec<i64>) -> Result<Self> {
        if m_in < 0.0 || m_out < 0.0 || !(l > 0.0) {
            return Err(Error::InvalidArgument(
                "masses must be >= 0 and L > 0".into(),
            ));
        }
        if modes.is_empty() {
            return Err(Error::InvalidArgument("no modes listed".into()));
        }
        for &n in &modes {
            // Massless k = 0 modes have no frequency; reject early.
            let k = 2.0 * std::f64::consts::PI * n as f64 / l;
            crate::relativistic::omega(k, m_in)?;
            crate::relativistic::omega(k, m_out)?;
        }
        Ok(Self {
            m_in,
            m_out,
            l,
            modes,
        })
    }
}

/// Per-mode quench outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuenchMode {
    pub n: i64,
    pub omega_in: f64,
    pub omega_out: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `|β|²`, the mean number of created out-quanta in this mode.
    pub n_created: f64,
}

/// Matches each in-mode `e^{-iω_in t}/√(2ω_in L)` to
/// `α·e^{-iω_out t} + β·e^{+iω_out t}` (same normalization) by continuity
/// of the value and the first time derivative at t = 0:
///
/// `α = (ω_out + ω_in)/(2√(ω_in·ω_out))`,
/// `β = (ω_out - ω_in)/(2√(ω_in·ω_out))`,
///
/// so `|α|² - |β|² = 1` per mode and `β = 0` iff the masses agree.
pub fn sudden_quench(q: &QuenchModel) -> Result<Vec<QuenchMode>> {
    q.modes
        .iter()
        .map(|&n| {
            let k = 2.0 * std::f64::consts::PI * n as f64 / q.l;
            let w_in = crate::relativistic::omega(k, q.m_in)?;
            let w_out = crate::relativistic::omega(k, q.m_out)?;
            let root = 2.0 * (w_in * w_out).sqrt();
            let alpha = (w_out + w_in) / root;
            let beta = (w_out - w_in) / root;
            Ok(QuenchMode {
                n,
                omega_in: w_in,
                omega_out: w_out,
                alpha,
                beta,
                n_created: beta * beta,
            })
        })
        .collect()
}

/// The same quench expressed as a [`BogoliubovMap`] through the general
/// inner-product route: in- and out-bases are single-mode fields of mass
/// `m_in` and `m_out`, matched at t = 0. The β entry for out-row `l` sits
/// at the in-column with the opposite lattice index.
pub fn quench_map(q: &QuenchModel) -> Result<BogoliubovMap> {
    let in_basis: Vec<KGField> = q
        .modes
        .iter()
        .map(|&n| KGField::single_mode(q.l, n, q.m_in, FrequencySign::Positive))
        .collect::<Result<_>>()?;
    let out_basis: Vec<KGField> = q
        .modes
        .iter()
        .map(|&n| KGField::single_mode(q.l, n, q.m_out, FrequencySign::Positive))
        .collect::<Result<_>>()?;
    bogoliubov_from_bases(&in_basis, &out_basis, 0.0)
}

/// Vacuum expectation of the transformed single-mode number operator
/// `b†b` with `b = α·a + β*·a†`, evaluated on a truncated ladder of size
/// `truncation`. Equals `|β|²` once the truncation holds at least two
/// states; this is the operator-level route to the same number.
pub fn single_mode_occupation_check(
    alpha: Complex64,
    beta: Complex64,
    truncation: usize,
) -> Result<f64> {
    let fs = crate::fock::ladder(truncation)?;
    let a = fs.annihilator_op();
    let a_dag = fs.creator_op();
    let b = a.scaled(alpha).add(&a_dag.scaled(beta.conj()))?;
    let n_bar = b.adjoint().mul(&b)?;
    Ok(n_bar.entry(0, 0).re)
}

// ---------------------------------------------------------------------------
// Thermal spectra
// ---------------------------------------------------------------------------

/// Bose-Einstein occupation `1/(e^{ω/T} - 1)`.
pub fn bose_einstein(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) || !(temperature > 0.0) {
        return Err(Error::InvalidArgument(
            "omega and temperature must be positive".into(),
        ));
    }
    Ok(1.0 / (omega / temperature).exp_m1())
}

/// Occupation an accelerated observer attributes to the inertial vacuum:
/// `1/(e^{2πω/a} - 1)`, a Bose-Einstein spectrum at `T = a/2π`.
pub fn unruh_spectrum(omega: f64, acceleration: f64) -> Result<f64> {
    if !(omega > 0.0) || !(acceleration > 0.0) {
        return Err(Error::InvalidArgument(
            "omega and acceleration must be positive".into(),
        ));
    }
    Ok(1.0 / (2.0 * std::f64::consts::PI * omega / acceleration).exp_m1())
}

pub fn unruh_temperature(acceleration: f64) -> f64 {
    acceleration / (2.0 * std::f64::consts::PI)
}

/// Occupation of Hawking radiation seen far from a mass-M hole:
/// `1/(e^{8πGMω} - 1)`, thermal at `T = 1/(8πGM)`.
pub fn hawking_spectrum(omega: f64, mass: f64, g: f64) -> Result<f64> {
    if !(omega > 0.0) || !(mass > 0.0) || !(g > 0.0) {
        return Err(Error::InvalidArgument(
            "omega, M and G must be positive".into(),
        ));
    }
    Ok(1.0 / (8.0 * std::f64::consts::PI * g * mass * omega).exp_m1())
}

pub fn hawking_temperature(mass: f64, g: f64) -> f64 {
    1.0 / (8.0 * std::f64::consts::PI * g * mass)
}

/// Fits `log(1 + 1/n(ω))` against ω over the sampled frequencies; a
/// thermal spectrum gives slope `1/T`, intercept 0. Returns
/// `(slope, intercept, max_abs_residual)`.
pub fn thermality_fit(samples: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    if samples.len() < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let xs: Vec<f64> = samples.iter().map(|&(w, _)| w).collect();
    let ys: Vec<f64> = samples.iter().map(|&(_, n)| (1.0 / n).ln_1p()).collect();
    Ok(linalg::linear_fit(&xs, &ys))
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relativistic::KGModeSpec;

    const TAU: f64 = 2.0 * std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn basis(l: f64, mass: f64, ns: &[i64]) -> Vec<KGField> {
        ns.iter()
            .map(|&n| KGField::single_mode(l, n, mass, FrequencySign::Positive).unwrap())
            .collect()
    }

    #[test]
    fn identity_transformation_is_trivial() {
        let b = basis(TAU, 1.0, &[-1, 0, 1]);
        let map = bogoliubov_from_bases(&b, &b, 0.0).unwrap();
        for l in 0..3 {
            for k in 0..3 {
                let expected = if l == k { 1.0 } else { 0.0 };
                assert!((map.alpha[(l, k)] - c(expected, 0.0)).norm() < 1e-12);
            }
            assert!((vacuum_occupation(&map, l).unwrap()).abs() < 1e-24);
        }
        assert!(map.is_trivial(1e-12));
        assert!(map.normalization_residual() < 1e-10);
    }

    #[test]
    fn phase_rotated_basis_gives_unimodular_diagonal_alpha() {
        let b = basis(TAU, 1.0, &[1, 2]);
        let rotated: Vec<KGField> = b
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let phase = Complex64::from_polar(1.0, 0.4 + 0.3 * i as f64);
                KGField::new(
                    f.l,
                    f.terms.iter().map(|(m, cc)| (*m, cc * phase)).collect(),
                )
                .unwrap()
            })
            .collect();
        let map = bogoliubov_from_bases(&b, &rotated, 0.0).unwrap();
        for l in 0..2 {
            assert!((map.alpha[(l, l)].norm() - 1.0).abs() < 1e-12);
            assert!(vacuum_occupation(&map, l).unwrap() < 1e-24);
        }
        assert!(map.normalization_residual() < 1e-10);
    }

    #[test]
    fn non_orthonormal_basis_is_rejected_with_the_pair_named() {
        let good = basis(TAU, 1.0, &[1, 2]);
        let mut bad = good.clone();
        bad[1] = KGField::new(
            TAU,
            vec![(
                KGModeSpec::new(TAU, 2, 1.0, FrequencySign::Positive).unwrap(),
                c(1.3, 0.0),
            )],
        )
        .unwrap();
        let err = bogoliubov_from_bases(&bad, &good, 0.0).unwrap_err();
        match err {
            Error::ContractViolation(msg) => assert!(msg.contains("(1, 1)"), "{msg}"),
            other => panic!("wrong error {other:?}"),
        }
    }

    #[test]
    fn quench_closed_form_matches_the_linear_solve_oracle() {
        // Oracle: solve the 2x2 matching system
        //   value:      (2ω_in)^{-1/2} = (α + β)(2ω_out)^{-1/2}
        //   derivative: -iω_in(2ω_in)^{-1/2} = (-iαω_out + iβω_out)(2ω_out)^{-1/2}
        // numerically and compare.
        let q = QuenchModel::new(1.0, 2.0, TAU, vec![0, 1, 3]).unwrap();
        let modes = sudden_quench(&q).unwrap();
        for mode in &modes {
            let w_in = mode.omega_in;
            let w_out = mode.omega_out;
            let lhs =
                nalgebra::Matrix2::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, -w_out), c(0.0, w_out));
            let scale = (w_out / w_in).sqrt();
            let rhs = nalgebra::Vector2::new(c(scale, 0.0), c(0.0, -w_in * scale));
            let sol = lhs.lu().solve(&rhs).unwrap();
            assert!((sol[0] - c(mode.alpha, 0.0)).norm() < 1e-12);
            assert!((sol[1] - c(mode.beta, 0.0)).norm() < 1e-12);
            assert!((mode.alpha * mode.alpha - mode.beta * mode.beta - 1.0).abs() < 1e-12);
        }
        // k = 0: |β|² = (ω_out - ω_in)²/(4ω_inω_out) = 1/8.
        assert!((modes[0].n_created - 0.125).abs() < 1e-12);
    }

    #[test]
    fn quench_inner_product_route_agrees_with_the_closed_form() {
        let q = QuenchModel::new(1.0, 2.0, TAU, vec![-2, 0, 2]).unwrap();
        let per_mode = sudden_quench(&q).unwrap();
        let map = quench_map(&q).unwrap();
        assert!(map.normalization_residual() < 1e-10);
        for (row, mode) in per_mode.iter().enumerate() {
            assert!((map.alpha[(row, row)] - c(mode.alpha, 0.0)).norm() < 1e-12);
            // β couples out-mode n to in-mode -n.
            let col = q.modes.iter().position(|&n| n == -mode.n).unwrap();
            assert!((map.beta[(row, col)] - c(mode.beta, 0.0)).norm() < 1e-12);
            assert!((vacuum_occupation(&map, row).unwrap() - mode.n_created).abs() < 1e-12);
        }
    }

    #[test]
    fn no_quench_means_no_creation() {
        let q = QuenchModel::new(1.0, 1.0, TAU, vec![0, 1, 2]).unwrap();
        for mode in sudden_quench(&q).unwrap() {
            assert_eq!(mode.beta, 0.0);
        }
    }

    #[test]
    fn ultraviolet_modes_ignore_the_quench() {
        // k = 100·m: |β|² falls like ((ω_out-ω_in)/2ω)² ~ (Δm²/4k²)².
        let l = TAU;
        let n_uv = 100;
        let q = QuenchModel::new(1.0, 2.0, l, vec![1, n_uv]).unwrap();
        let modes = sudden_quench(&q).unwrap();
        assert!(modes[1].n_created < 1e-7);
        assert!(modes[1].n_created < modes[0].n_created * 1e-4);
    }

    #[test]
    fn occupation_is_invariant_under_in_basis_phase_rotation() {
        let q = QuenchModel::new(1.0, 2.0, TAU, vec![0]).unwrap();
        let in_basis: Vec<KGField> = vec![KGField::new(
            TAU,
            vec![(
                KGModeSpec::new(TAU, 0, 1.0, FrequencySign::Positive).unwrap(),
                Complex64::from_polar(1.0, 1.234),
            )],
        )
        .unwrap()];
        let out_basis = basis(TAU, 2.0, &[0]);
        let map = bogoliubov_from_bases(&in_basis, &out_basis, 0.0).unwrap();
        let reference = quench_map(&q).unwrap();
        assert!(
            (vacuum_occupation(&map, 0).unwrap() - vacuum_occupation(&reference, 0).unwrap()).abs()
                < 1e-12
        );
    }

    #[test]
    fn operator_level_occupation_matches_beta_squared() {
        let q = QuenchModel::new(1.0, 2.0, TAU, vec![0]).unwrap();
        let mode = sudden_quench(&q).unwrap()[0];
        let occ = single_mode_occupation_check(c(mode.alpha, 0.0), c(mode.beta, 0.0), 64).unwrap();
        assert!((occ - mode.n_created).abs() < 1e-6);
    }

    #[test]
    fn unruh_value_at_the_corner_frequency() {
        // Oracle: high-precision evaluation of 1/(e - 1).
        let a = 3.7;
        let omega = a / TAU;
        let expected = 1.0 / (std::f64::consts::E - 1.0);
        assert!((unruh_spectrum(omega, a).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn unruh_tail_is_boltzmann() {
        // Oracle: series expansion — at ω = 5a the ratio to e^{-2πω/a} is
        // 1/(1 - e^{-2πω/a}), within 1% of 1.
        let a = 1.0;
        let omega = 5.0;
        let occ = unruh_spectrum(omega, a).unwrap();
        let boltzmann = (-TAU * omega / a).exp();
        assert!((occ / boltzmann - 1.0).abs() < 0.01);
    }

    #[test]
    fn unruh_is_bose_einstein_at_a_over_2pi() {
        for i in 1..=20 {
            let omega = 0.25 * i as f64;
            let a = 2.0;
            let lhs = unruh_spectrum(omega, a).unwrap();
            let rhs = bose_einstein(omega, unruh_temperature(a)).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn hawking_is_bose_einstein_at_its_temperature() {
        let (m, g) = (1.3, 0.8);
        for i in 1..=20 {
            let omega = 0.02 * i as f64;
            let lhs = hawking_spectrum(omega, m, g).unwrap();
            let rhs = bose_einstein(omega, hawking_temperature(m, g)).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
        }
        // G = M = 1, ω = 1/8π → 1/(e - 1).
        let corner = hawking_spectrum(1.0 / (8.0 * std::f64::consts::PI), 1.0, 1.0).unwrap();
        assert!((corner - 1.0 / (std::f64::consts::E - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn heavier_holes_are_colder() {
        let omega = 0.05;
        let n1 = hawking_spectrum(omega, 1.0, 1.0).unwrap();
        let n2 = hawking_spectrum(omega, 2.0, 1.0).unwrap();
        assert!(n2 < n1);
    }

    #[test]
    fn spectra_reject_non_positive_arguments() {
        assert!(unruh_spectrum(0.0, 1.0).is_err());
        assert!(unruh_spectrum(1.0, -1.0).is_err());
        assert!(hawking_spectrum(1.0, 0.0, 1.0).is_err());
        assert!(bose_einstein(1.0, 0.0).is_err());
    }

    #[test]
    fn thermal_spectra_are_log_linear_in_omega() {
        let t = 0.6;
        let samples: Vec<(f64, f64)> = (1..=20)
            .map(|i| {
                let omega = 0.1 * i as f64;
                (omega, bose_einstein(omega, t).unwrap())
            })
            .collect();
        let (slope, intercept, resid) = thermality_fit(&samples).unwrap();
        assert!((slope - 1.0 / t).abs() < 1e-10);
        assert!(intercept.abs() < 1e-10);
        assert!(resid < 1e-10);
    }
}
