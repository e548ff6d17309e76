//! Truncated Fock spaces and second-quantized operator algebra.
//!
//! Operators are built at a working truncation `N_max`; the canonical
//! commutator `[a, a†] = 1` then holds on every basis state with
//! `n < N_max` (to machine rounding), with the truncation defect confined
//! to the top state. Spectra are validated by doubling the truncation and
//! trusting only the low third.
//!
//! The oscillator split `H = ω(N̂ + 1/2) + [V(x̂) - mω²x̂²/2]` treats ω as a
//! free parameter: physical eigenvalues do not depend on it, while the
//! number-operator decomposition does, which is the point of the
//! "quanta are not always particles" demonstrations.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin::{OperatorMatrix, StateVector};

// ---------------------------------------------------------------------------
// Single-mode ladder algebra
// ---------------------------------------------------------------------------

/// Ladder operators on the truncated number basis `{|0⟩, ..., |N_max⟩}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockSpace {
    dim: usize,
    a: DMatrix<f64>,
    a_dag: DMatrix<f64>,
}

/// Builds the ladder pair at truncation `dim = N_max + 1`:
/// `a†|n⟩ = √(n+1)|n+1⟩`, `a|n⟩ = √n|n-1⟩`, `a|0⟩ = 0`.
pub fn ladder(dim: usize) -> Result<FockSpace> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "truncation needs dim >= 2, got {dim}"
        )));
    }
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = (n as f64).sqrt();
    }
    let a_dag = a.transpose();
    Ok(FockSpace { dim, a, a_dag })
}

impl FockSpace {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_max(&self) -> usize {
        self.dim - 1
    }

    pub fn annihilator(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn creator(&self) -> &DMatrix<f64> {
        &self.a_dag
    }

    /// Complex copies for use with the finite-dimensional state engine.
    pub fn annihilator_op(&self) -> OperatorMatrix {
        OperatorMatrix::new(self.a.map(|v| Complex64::new(v, 0.0))).expect("square")
    }

    pub fn creator_op(&self) -> OperatorMatrix {
        OperatorMatrix::new(self.a_dag.map(|v| Complex64::new(v, 0.0))).expect("square")
    }

    /// `x̂ = (a + a†)/√(2mω)`.
    pub fn position(&self, mass: f64, omega: f64) -> DMatrix<f64> {
        (&self.a + &self.a_dag) / (2.0 * mass * omega).sqrt()
    }
}

/// `N̂ = a†a`, diagonal with entries 0..N_max.
pub fn number_op(fs: &FockSpace) -> OperatorMatrix {
    let n = &fs.a_dag * &fs.a;
    OperatorMatrix::new(n.map(|v| Complex64::new(v, 0.0))).expect("square")
}

/// The normalized number state `(a†)ⁿ|0⟩/√n!`, built by raising the vacuum.
pub fn fock_state(fs: &FockSpace, n: usize) -> Result<StateVector> {
    if n > fs.n_max() {
        return Err(Error::InvalidArgument(format!(
            "n = {n} exceeds the truncation N_max = {}",
            fs.n_max()
        )));
    }
    let mut v = DVector::<f64>::zeros(fs.dim);
    v[0] = 1.0;
    for k in 0..n {
        v = &fs.a_dag * v;
        v /= ((k + 1) as f64).sqrt();
    }
    StateVector::new(v.iter().map(|&r| Complex64::new(r, 0.0)).collect())
}

// ---------------------------------------------------------------------------
// Hamiltonians
// ---------------------------------------------------------------------------

/// Harmonic spectrum `{ω(n + 1/2)}`, ascending. `H = ω(N̂ + 1/2)` is
/// diagonal, so no solver is involved and the gaps are exactly ω (for ω
/// values with exact binary products).
pub fn harmonic_h(fs: &FockSpace, omega: f64) -> Result<Vec<f64>> {
    if !(omega > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "omega must be > 0, got {omega}"
        )));
    }
    Ok((0..fs.dim).map(|n| omega * (n as f64 + 0.5)).collect())
}

/// A real polynomial potential `V(x) = Σ c_k x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    /// `coeffs[k]` multiplies `x^k`.
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    /// `mω²x²/2`.
    pub fn harmonic(mass: f64, omega: f64) -> Self {
        Self::new(vec![0.0, 0.0, 0.5 * mass * omega * omega])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or(0.0)
                    - other.coeffs.get(k).copied().unwrap_or(0.0)
            })
            .collect();
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Horner evaluation at a matrix argument.
    pub fn eval_matrix(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let dim = x.nrows();
        let mut acc = DMatrix::<f64>::zeros(dim, dim);
        for &c in self.coeffs.iter().rev() {
            acc = x * acc;
            for i in 0..dim {
                acc[(i, i)] += c;
            }
        }
        acc
    }
}

/// Spectrum report of the general single-particle Hamiltonian in the
/// oscillator split.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralSpectrum {
    /// Eigenvalues ascending; only the low third is truncation-clean.
    pub eigenvalues: Vec<f64>,
    /// Frobenius norm of `[N̂, H]`; zero iff the bracket vanishes, i.e.
    /// iff the potential is the matching harmonic one.
    pub n_commutator_norm: f64,
}

impl GeneralSpectrum {
    /// The truncation-trustworthy low third of the spectrum.
    pub fn low_third(&self) -> &[f64] {
        &self.eigenvalues[..self.eigenvalues.len() / 3]
    }
}

/// `H = ω(N̂ + 1/2) + [V(x̂) - mω²x̂²/2]` with `x̂ = (a + a†)/√(2mω)`,
/// diagonalized densely. The bracket is assembled as one polynomial
/// (`V - mω²x²/2`) before matrix evaluation, so a matching harmonic `V`
/// cancels coefficient-by-coefficient and the commutator norm is exactly 0.
pub fn general_h(fs: &FockSpace, omega: f64, v: &Polynomial, mass: f64) -> Result<GeneralSpectrum> {
    if !(omega > 0.0) || !(mass > 0.0) {
        return Err(Error::InvalidArgument(
            "omega and mass must be positive".into(),
        ));
    }
    let dim = fs.dim;
    let bracket_poly = v.sub(&Polynomial::harmonic(mass, omega));
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for n in 0..dim {
        h[(n, n)] = omega * (n as f64 + 0.5);
    }
    if !bracket_poly.is_zero() {
        let x = fs.position(mass, omega);
        h += bracket_poly.eval_matrix(&x);
    }

    // [N, H]_{ij} = (i - j)·H_{ij}; N is exactly diagonal.
    let mut comm_sq = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let e = (i as f64 - j as f64) * h[(i, j)];
            comm_sq += e * e;
        }
    }

    let mut eigenvalues: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(GeneralSpectrum {
        eigenvalues,
        n_commutator_norm: comm_sq.sqrt(),
    })
}

// ---------------------------------------------------------------------------
// Multimode registers
// ---------------------------------------------------------------------------

/// One bosonic mode of a multimode register.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpec {
    pub label: String,
    pub omega: f64,
    pub truncation: usize,
}

/// A finite family of modes with a hard cap on the product dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiMode {
    pub modes: Vec<ModeSpec>,
}

impl MultiMode {
    pub const MAX_DIM: usize = 4096;

    pub fn new(modes: Vec<ModeSpec>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidArgument("no modes".into()));
        }
        let mut dim: usize = 1;
        for m in &modes {
            if !(m.omega > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "mode {} has non-positive frequency",
                    m.label
                )));
            }
            if m.truncation < 2 {
                return Err(Error::InvalidArgument(format!(
                    "mode {} needs truncation >= 2",
                    m.label
                )));
            }
            dim = dim
                .checked_mul(m.truncation)
                .filter(|&d| d <= Self::MAX_DIM)
                .ok_or_else(|| {
                    Error::ResourceLimit(format!(
                        "multimode dimension exceeds the {} cap",
                        Self::MAX_DIM
                    ))
                })?;
        }
        Ok(Self { modes })
    }

    pub fn total_dim(&self) -> usize {
        self.modes.iter().map(|m| m.truncation).product()
    }

    /// Annihilator of mode `k` embedded in the product space (mode 0 is the
    /// slow/leftmost factor).
    pub fn annihilator(&self, k: usize) -> Result<DMatrix<f64>> {
        if k >= self.modes.len() {
            return Err(Error::InvalidArgument(format!("no mode {k}")));
        }
        let mut op = DMatrix::<f64>::identity(1, 1);
        for (j, mode) in self.modes.iter().enumerate() {
            let factor = if j == k {
                ladder(mode.truncation)?.a
            } else {
                DMatrix::identity(mode.truncation, mode.truncation)
            };
            op = op.kronecker(&factor);
        }
        Ok(op)
    }
}

/// Spectrum of the multimode free Hamiltonian `H = Σ_k ω_k(N̂_k + 1/2)`
/// against the occupation-tuple enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiModeSpectrum {
    /// Eigenvalues of the assembled matrix, ascending.
    pub eigenvalues: Vec<f64>,
    /// `Σ_k ω_k(n_k + 1/2)` per occupation tuple, ascending.
    pub enumerated: Vec<f64>,
    /// `max |eigenvalue - enumerated|` after sorting both.
    pub max_mismatch: f64,
    /// `Σ_k ω_k/2`.
    pub ground_energy: f64,
}

/// Assembles `H = Σ_k ω_k(N̂_k + 1/2)` as a matrix on the product space and
/// reconciles its spectrum with direct occupation enumeration. The matrix
/// is diagonal in the product number basis, so every eigenvalue must match
/// an occupation tuple exactly.
pub fn multimode_free_h(mm: &MultiMode) -> Result<MultiModeSpectrum> {
    let dim = mm.total_dim();
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for (k, mode) in mm.modes.iter().enumerate() {
        let a_k = mm.annihilator(k)?;
        let n_k = a_k.transpose() * &a_k;
        h += (n_k + DMatrix::<f64>::identity(dim, dim) * 0.5) * mode.omega;
    }
    let mut eigenvalues: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);

    let mut enumerated = Vec::with_capacity(dim);
    let mut tuple = vec![0usize; mm.modes.len()];
    loop {
        let energy: f64 = mm
            .modes
            .iter()
            .zip(&tuple)
            .map(|(m, &n)| m.omega * (n as f64 + 0.5))
            .sum();
        enumerated.push(energy);
        // Advance the tuple odometer (last mode fastest).
        let mut pos = mm.modes.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < mm.modes[pos].truncation {
                break;
            }
            tuple[pos] = 0;
            if pos == 0 {
                pos = usize::MAX;
                break;
            }
        }
        if pos == usize::MAX || enumerated.len() == dim {
            break;
        }
    }
    enumerated.sort_by(f64::total_cmp);

    let max_mismatch = eigenvalues
        .iter()
        .zip(&enumerated)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let ground_energy = mm.modes.iter().map(|m| m.omega / 2.0).sum();
    Ok(MultiModeSpectrum {
        eigenvalues,
        enumerated,
        max_mismatch,
        ground_energy,
    })
}

/// Builds the two-quantum state `Σ f(k₁,k₂)·a†_{k₁}a†_{k₂}|0⟩` on a
/// register of `f.nrows()` modes, reads back the two-argument wave function
/// `ψ(k₁,k₂) = ⟨0|a_{k₁}a_{k₂}|state⟩` and returns its maximum symmetry
/// defect `max |ψ(k₁,k₂) - ψ(k₂,k₁)|`. The construction symmetrizes any
/// input, so the defect vanishes even for asymmetric `f`; an antisymmetric
/// `f` annihilates the state entirely.
pub fn two_boson_symmetry(f: &DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
    if !f.is_square() || f.nrows() < 2 {
        return Err(Error::InvalidArgument(
            "coefficient array must be square with >= 2 modes".into(),
        ));
    }
    let n_modes = f.nrows();
    let mm = MultiMode::new(
        (0..n_modes)
            .map(|k| ModeSpec {
                label: format!("k{k}"),
                omega: 1.0,
                truncation: 3,
            })
            .collect(),
    )?;
    let dim = mm.total_dim();
    let annihilators: Vec<DMatrix<f64>> = (0..n_modes)
        .map(|k| mm.annihilator(k))
        .collect::<Result<_>>()?;

    let mut vacuum = DVector::<f64>::zeros(dim);
    vacuum[0] = 1.0;
    let mut state = DVector::<f64>::zeros(dim);
    for k1 in 0..n_modes {
        for k2 in 0..n_modes {
            if f[(k1, k2)] == 0.0 {
                continue;
            }
            let raised = &annihilators[k1].transpose() * (&annihilators[k2].transpose() * &vacuum);
            state += raised * f[(k1, k2)];
        }
    }

    let mut readback = DMatrix::<f64>::zeros(n_modes, n_modes);
    for k1 in 0..n_modes {
        for k2 in 0..n_modes {
            let lowered = &annihilators[k1] * (&annihilators[k2] * &state);
            readback[(k1, k2)] = lowered[0];
        }
    }
    let mut defect: f64 = 0.0;
    for k1 in 0..n_modes {
        for k2 in 0..n_modes {
            defect = defect.max((readback[(k1, k2)] - readback[(k2, k1)]).abs());
        }
    }
    Ok((readback, defect))
}

// ---------------------------------------------------------------------------
// Fermions
// ---------------------------------------------------------------------------

/// Fermionic modes on `2^n_modes` dimensions via the ordered sign-string
/// construction with mode 1 as the innermost factor. All entries are
/// integers, so the anticommutation identities hold exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionRegister {
    pub n_modes: usize,
    annihilators: Vec<OperatorMatrix>,
}

pub fn fermion_register(n_modes: usize) -> Result<FermionRegister> {
    const MAX_MODES: usize = 10;
    if n_modes == 0 {
        return Err(Error::InvalidArgument("need at least one mode".into()));
    }
    if n_modes > MAX_MODES {
        return Err(Error::ResourceLimit(format!(
            "fermion registers are capped at {MAX_MODES} modes"
        )));
    }
    let lower = DMatrix::<f64>::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let sign = DMatrix::<f64>::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let id = DMatrix::<f64>::identity(2, 2);

    let annihilators = (1..=n_modes)
        .map(|j| {
            // Leftmost factor is the highest mode; mode 1 sits innermost
            // (rightmost). Modes below j carry the sign string.
            let mut op = DMatrix::<f64>::identity(1, 1);
            for mode in (1..=n_modes).rev() {
                let factor = if mode == j {
                    &lower
                } else if mode < j {
                    &sign
                } else {
                    &id
                };
                op = op.kronecker(factor);
            }
            OperatorMatrix::new(op.map(|v| Complex64::new(v, 0.0))).expect("square")
        })
        .collect();
    Ok(FermionRegister {
        n_modes,
        annihilators,
    })
}

impl FermionRegister {
    pub fn dim(&self) -> usize {
        1 << self.n_modes
    }

    /// Annihilator of mode `k` (1-based).
    pub fn annihilator(&self, k: usize) -> Result<&OperatorMatrix> {
        self.annihilators
            .get(k - 1)
            .ok_or_else(|| Error::InvalidArgument(format!("no mode {k}")))
    }

    pub fn creator(&self, k: usize) -> Result<OperatorMatrix> {
        Ok(self.annihilator(k)?.adjoint())
    }

    pub fn vacuum(&self) -> StateVector {
        StateVector::basis(self.dim(), 0)
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{anticommutator, commutator, expectation, OperatorMatrix};

    #[test]
    fn ladder_rejects_trivial_dims() {
        assert!(ladder(1).is_err());
        assert!(ladder(2).is_ok());
    }

    #[test]
    fn creator_raises_with_sqrt_weights() {
        // Oracle: the raising recursion a†|n⟩ = √(n+1)|n+1⟩ applied to |2⟩.
        let fs = ladder(4).unwrap();
        let two = fock_state(&fs, 2).unwrap();
        let raised = fs.creator_op().apply(&two).unwrap();
        assert!((raised[3].re - 3.0f64.sqrt()).abs() < 1e-14);
        assert!(raised[0].norm() < 1e-15 && raised[1].norm() < 1e-15 && raised[2].norm() < 1e-15);
    }

    #[test]
    fn vacuum_is_annihilated() {
        let fs = ladder(5).unwrap();
        let vac = fock_state(&fs, 0).unwrap();
        let lowered = fs.annihilator_op().apply(&vac).unwrap();
        assert!(lowered.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn canonical_commutator_holds_below_the_truncation() {
        let fs = ladder(8).unwrap();
        let comm = commutator(&fs.annihilator_op(), &fs.creator_op()).unwrap();
        for n in 0..fs.n_max() {
            for m in 0..fs.dim() {
                let expected = if m == n { 1.0 } else { 0.0 };
                assert!(
                    (comm.entry(m, n).re - expected).abs() < 1e-12,
                    "[a, a†] entry ({m},{n})"
                );
            }
        }
        // The defect sits entirely in the top state: entry = -N_max.
        assert!((comm.entry(fs.n_max(), fs.n_max()).re + fs.n_max() as f64).abs() < 1e-12);
    }

    #[test]
    fn number_operator_counts_quanta() {
        let fs = ladder(6).unwrap();
        let n_op = number_op(&fs);
        let three = fock_state(&fs, 3).unwrap();
        assert!((expectation(&three, &n_op).unwrap() - 3.0).abs() < 1e-13);
        let image = n_op.apply(&three).unwrap();
        // Eigenstate: N|3⟩ = 3|3⟩.
        for i in 0..6 {
            let expected = if i == 3 { 3.0 } else { 0.0 };
            assert!((image[i].re - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn fock_states_are_orthonormal() {
        let fs = ladder(6).unwrap();
        let two = fock_state(&fs, 2).unwrap();
        let three = fock_state(&fs, 3).unwrap();
        assert!(two.inner(&three).norm() < 1e-15);
        assert!((two.inner(&two).re - 1.0).abs() < 1e-13);
        assert!(fock_state(&fs, 6).is_err());
    }

    #[test]
    fn harmonic_spectrum_is_equidistant() {
        let fs = ladder(5).unwrap();
        let spec = harmonic_h(&fs, 1.0).unwrap();
        assert_eq!(spec, vec![0.5, 1.5, 2.5, 3.5, 4.5]);
        for w in spec.windows(2) {
            assert_eq!(w[1] - w[0], 1.0);
        }
        let doubled = harmonic_h(&fs, 2.0).unwrap();
        for (a, b) in spec.iter().zip(&doubled) {
            assert_eq!(2.0 * a, *b);
        }
    }

    #[test]
    fn matching_harmonic_potential_kills_the_bracket() {
        let fs = ladder(64).unwrap();
        let v = Polynomial::harmonic(1.0, 1.0);
        let spec = general_h(&fs, 1.0, &v, 1.0).unwrap();
        assert_eq!(spec.n_commutator_norm, 0.0);
        for (n, val) in spec.eigenvalues.iter().enumerate() {
            assert!((val - (n as f64 + 0.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn quartic_perturbation_spreads_the_gaps() {
        // Oracle: dense diagonalization at dim 128 vs 256 agreeing to 1e-6
        // on the low third. The basis frequency 2.0 matches the quartic
        // stiffness at these levels; in the soft ω = 1 basis the top of the
        // low third only converges to ~2e-4 at dim 128.
        let v = Polynomial::new(vec![0.0, 0.0, 0.5, 0.0, 0.1]);
        let coarse = general_h(&ladder(128).unwrap(), 2.0, &v, 1.0).unwrap();
        let fine = general_h(&ladder(256).unwrap(), 2.0, &v, 1.0).unwrap();
        assert!(coarse.n_commutator_norm > 0.1);
        let low = coarse.low_third();
        for (a, b) in low.iter().zip(fine.eigenvalues.iter()) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
        let gaps: Vec<f64> = low.windows(2).map(|w| w[1] - w[0]).collect();
        for w in gaps.windows(2) {
            assert!(w[1] > w[0], "gaps must strictly increase: {:?}", w);
        }
    }

    #[test]
    fn free_particle_bracket_is_nonzero() {
        let fs = ladder(32).unwrap();
        let spec = general_h(&fs, 1.0, &Polynomial::new(vec![0.0]), 1.0).unwrap();
        assert!(spec.n_commutator_norm > 0.0);
    }

    #[test]
    fn number_states_are_energy_eigenstates_iff_the_bracket_vanishes() {
        let fs = ladder(48).unwrap();
        // Residual of H|n⟩ = E|n⟩ for |n⟩ = fock_state(n), measured as the
        // component of H|n⟩ orthogonal to |n⟩.
        let eigen_residual = |v: &Polynomial| -> f64 {
            let x = fs.position(1.0, 1.0);
            let bracket = v.sub(&Polynomial::harmonic(1.0, 1.0));
            let mut h = bracket.eval_matrix(&x);
            for n in 0..fs.dim() {
                h[(n, n)] += n as f64 + 0.5;
            }
            let mut worst = 0.0f64;
            for n in 0..8 {
                let mut col = DVector::<f64>::zeros(fs.dim());
                col[n] = 1.0;
                let image = &h * col;
                for m in 0..fs.dim() {
                    if m != n {
                        worst = worst.max(image[m].abs());
                    }
                }
            }
            worst
        };
        let harmonic = Polynomial::harmonic(1.0, 1.0);
        let quartic = Polynomial::new(vec![0.0, 0.0, 0.5, 0.0, 0.1]);
        assert_eq!(eigen_residual(&harmonic), 0.0);
        assert!(eigen_residual(&quartic) > 0.01);
        assert_eq!(
            general_h(&fs, 1.0, &harmonic, 1.0)
                .unwrap()
                .n_commutator_norm,
            0.0
        );
        assert!(
            general_h(&fs, 1.0, &quartic, 1.0)
                .unwrap()
                .n_commutator_norm
                > 0.0
        );
    }

    #[test]
    fn physical_spectrum_does_not_depend_on_the_oscillator_split() {
        // V = x²/2 fixed; the basis parameter ω varies. Low eigenvalues
        // must agree while the N-split (the bracket) differs.
        let v = Polynomial::harmonic(1.0, 1.0);
        let reference = general_h(&ladder(128).unwrap(), 1.0, &v, 1.0).unwrap();
        let skewed = general_h(&ladder(128).unwrap(), 1.3, &v, 1.0).unwrap();
        assert_eq!(reference.n_commutator_norm, 0.0);
        assert!(skewed.n_commutator_norm > 0.1);
        for (a, b) in reference.eigenvalues[..20]
            .iter()
            .zip(&skewed.eigenvalues[..20])
        {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn multimode_spectrum_matches_occupation_enumeration() {
        // Oracle: the occupation-tuple enumeration.
        let mm = MultiMode::new(vec![
            ModeSpec {
                label: "k1".into(),
                omega: 1.0,
                truncation: 3,
            },
            ModeSpec {
                label: "k2".into(),
                omega: 2.0f64.sqrt(),
                truncation: 3,
            },
        ])
        .unwrap();
        let spec = multimode_free_h(&mm).unwrap();
        assert_eq!(spec.eigenvalues.len(), 9);
        assert!(spec.max_mismatch < 1e-12);
        assert!((spec.ground_energy - (0.5 + 2.0f64.sqrt() / 2.0)).abs() < 1e-15);
        assert!((spec.eigenvalues[0] - spec.ground_energy).abs() < 1e-12);
        // Field-energy positivity.
        assert!(spec
            .eigenvalues
            .iter()
            .all(|&e| e >= spec.ground_energy - 1e-12));
    }

    #[test]
    fn single_mode_multimode_reduces_to_harmonic() {
        let mm = MultiMode::new(vec![ModeSpec {
            label: "k".into(),
            omega: 1.5,
            truncation: 6,
        }])
        .unwrap();
        let spec = multimode_free_h(&mm).unwrap();
        let reference = harmonic_h(&ladder(6).unwrap(), 1.5).unwrap();
        for (a, b) in spec.eigenvalues.iter().zip(&reference) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn multimode_cap_is_enforced() {
        let make = |count: usize| -> Vec<ModeSpec> {
            (0..count)
                .map(|k| ModeSpec {
                    label: format!("k{k}"),
                    omega: 1.0,
                    truncation: 2,
                })
                .collect()
        };
        assert!(MultiMode::new(make(12)).is_ok()); // 2^12 = 4096, at the cap
        assert!(matches!(
            MultiMode::new(make(13)),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn asymmetric_two_boson_input_reads_back_symmetric() {
        // Oracle: explicit 2-mode matrix construction.
        let mut f = DMatrix::<f64>::zeros(2, 2);
        f[(0, 1)] = 1.0; // f(k1,k2) = δ_{k1,0} δ_{k2,1}, deliberately asymmetric
        let (readback, defect) = two_boson_symmetry(&f).unwrap();
        assert!(defect < 1e-12);
        assert!((readback[(0, 1)] - 1.0).abs() < 1e-12);
        assert!((readback[(1, 0)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_input_equals_its_symmetrization() {
        let mut f = DMatrix::<f64>::zeros(3, 3);
        f[(0, 1)] = 0.5;
        f[(1, 0)] = 0.5;
        f[(2, 2)] = 1.0;
        let (read_sym, defect) = two_boson_symmetry(&f).unwrap();
        assert!(defect < 1e-12);
        // Any f with the same symmetrization produces the same state.
        let mut g = DMatrix::<f64>::zeros(3, 3);
        g[(0, 1)] = 1.0;
        g[(2, 2)] = 1.0;
        let (read_asym, _) = two_boson_symmetry(&g).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((read_sym[(i, j)] - read_asym[(i, j)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn antisymmetric_two_boson_input_is_annihilated() {
        let mut f = DMatrix::<f64>::zeros(2, 2);
        f[(0, 1)] = 1.0;
        f[(1, 0)] = -1.0;
        let (readback, defect) = two_boson_symmetry(&f).unwrap();
        assert!(defect < 1e-15);
        assert!(readback.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn fermion_anticommutators_hold_exactly() {
        let reg = fermion_register(3).unwrap();
        let dim = reg.dim();
        for j in 1..=3 {
            for k in 1..=3 {
                let a_j = reg.annihilator(j).unwrap();
                let a_k_dag = reg.creator(k).unwrap();
                let anti = anticommutator(a_j, &a_k_dag).unwrap();
                let expected = if j == k {
                    OperatorMatrix::identity(dim)
                } else {
                    OperatorMatrix::zeros(dim)
                };
                assert_eq!(anti.max_abs_diff(&expected), 0.0, "{{a_{j}, a_{k}†}}");

                let both = anticommutator(a_j, reg.annihilator(k).unwrap()).unwrap();
                assert_eq!(both.max_abs_diff(&OperatorMatrix::zeros(dim)), 0.0);
            }
        }
    }

    #[test]
    fn double_occupation_is_impossible() {
        let reg = fermion_register(2).unwrap();
        let created = reg.creator(1).unwrap();
        let once = created.apply(&reg.vacuum()).unwrap();
        let twice = created.entries() * once;
        assert!(twice.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn fermion_register_caps_modes() {
        assert!(matches!(fermion_register(11), Err(Error::ResourceLimit(_))));
        assert!(fermion_register(0).is_err());
    }
}
