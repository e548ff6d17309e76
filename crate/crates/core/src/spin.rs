//! Finite-dimensional quantum state engine.
//!
//! States are complex unit vectors, observables are hermitian matrices.
//! Measurement follows the Born rule with projective (Lüders) collapse;
//! degenerate eigenvalues are merged into a single outcome that projects
//! onto the full eigenspace. Tensor products use the left factor as the
//! slow index, so `tensor_states(up, down)` is `(0, 1, 0, 0)` in the basis
//! order (uu, ud, du, dd).

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, ALG_TOL};

/// Eigenvalues closer than this are treated as one degenerate outcome.
const DEGENERACY_TOL: f64 = 1e-8;

/// Born probabilities below this count as impossible outcomes.
const PROB_FLOOR: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// A normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: DVector<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized (within 1e-12).
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let amps = DVector::from_vec(amplitudes);
        if amps.is_empty() {
            return Err(Error::InvalidArgument("empty state vector".into()));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > ALG_TOL {
            return Err(Error::InvalidArgument(format!(
                "state vector norm {norm} is not 1"
            )));
        }
        Ok(Self { amps })
    }

    /// Normalizes arbitrary amplitudes; fails on the zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let mut amps = DVector::from_vec(amplitudes);
        let norm = amps.norm();
        if amps.is_empty() || norm < 1e-300 {
            return Err(Error::InvalidArgument(
                "cannot normalize a (near-)zero vector".into(),
            ));
        }
        amps /= Complex64::new(norm, 0.0);
        Ok(Self { amps })
    }

    /// Computational basis state `|idx⟩` in `dim` dimensions.
    pub fn basis(dim: usize, idx: usize) -> Self {
        assert!(idx < dim, "basis index {idx} out of range for dim {dim}");
        let mut amps = DVector::zeros(dim);
        amps[idx] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn amplitude(&self, i: usize) -> Complex64 {
        self.amps[i]
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps.dotc(&other.amps)
    }

    /// |⟨self|other⟩|², clamped into [0, 1] against rounding.
    pub fn overlap_probability(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr().clamp(0.0, 1.0)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.amps - &other.amps)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Spin-z up `|↑⟩ = (1, 0)`.
pub fn up() -> StateVector {
    StateVector::basis(2, 0)
}

/// Spin-z down `|↓⟩ = (0, 1)`.
pub fn down() -> StateVector {
    StateVector::basis(2, 1)
}

/// A square complex matrix with a verified hermiticity flag.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
    hermitian: bool,
}

impl OperatorMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() || entries.is_empty() {
            return Err(Error::InvalidArgument(
                "operator must be a non-empty square matrix".into(),
            ));
        }
        let hermitian = linalg::is_hermitian(&entries, ALG_TOL);
        Ok(Self { entries, hermitian })
    }

    pub fn from_rows(dim: usize, rows: &[Complex64]) -> Result<Self> {
        Self::new(DMatrix::from_row_slice(dim, dim, rows))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: DMatrix::identity(dim, dim),
            hermitian: true,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: DMatrix::zeros(dim, dim),
            hermitian: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// The hermiticity flag computed at construction, not asserted.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Self::new(&self.entries * &other.entries)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Self::new(&self.entries + &other.entries)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Self::new(&self.entries - &other.entries)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::new(&self.entries * factor).expect("scaling keeps the shape")
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.entries.adjoint()).expect("adjoint keeps the shape")
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn apply(&self, psi: &StateVector) -> Result<DVector<Complex64>> {
        if self.dim() != psi.dim() {
            return Err(Error::DimMismatch(format!(
                "operator dim {} vs state dim {}",
                self.dim(),
                psi.dim()
            )));
        }
        Ok(&self.entries * psi.amplitudes())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        linalg::max_abs(&(&self.entries - &other.entries))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(format!(
                "{} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    fn require_hermitian(&self) -> Result<()> {
        if !self.hermitian {
            return Err(Error::ContractViolation(
                "observable is not hermitian".into(),
            ));
        }
        Ok(())
    }
}

/// One realized measurement chain: per-step `(eigenvalue, post state)`,
/// the Born probability of the whole chain, and the seed that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub outcomes: Vec<(f64, StateVector)>,
    pub probability: f64,
    pub seed: u64,
}

// ---------------------------------------------------------------------------
// Pauli algebra
// ---------------------------------------------------------------------------

/// Pauli matrix `σ_i`, `i ∈ {1, 2, 3}`.
pub fn pauli(i: usize) -> Result<OperatorMatrix> {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let im = Complex64::new(0.0, 1.0);
    let rows = match i {
        1 => [z, one, one, z],
        2 => [z, -im, im, z],
        3 => [one, z, z, -one],
        _ => {
            return Err(Error::InvalidArgument(format!(
                "pauli index must be 1, 2 or 3, got {i}"
            )))
        }
    };
    OperatorMatrix::from_rows(2, &rows)
}

/// `AB - BA`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// `AB + BA`.
pub fn anticommutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    a.mul(b)?.add(&b.mul(a)?)
}

// ---------------------------------------------------------------------------
// Spectral decomposition and measurement
// ---------------------------------------------------------------------------

/// Orthonormal eigenpairs of a hermitian observable, eigenvalues descending,
/// each eigenvector phased so its first non-negligible component is real
/// and positive.
pub fn eigenbasis(a: &OperatorMatrix) -> Result<Vec<(f64, StateVector)>> {
    a.require_hermitian()?;
    let (vals, vecs) = linalg::hermitian_eigen(a.entries());
    Ok(vals
        .into_iter()
        .zip(vecs)
        .map(|(val, vec)| (val, StateVector { amps: vec }))
        .collect())
}

/// Eigenvalues clustered into degenerate outcomes; each cluster carries the
/// representative eigenvalue and the orthonormal vectors spanning its
/// eigenspace.
fn outcome_clusters(a: &OperatorMatrix) -> Result<Vec<(f64, Vec<StateVector>)>> {
    let pairs = eigenbasis(a)?;
    let mut clusters: Vec<(f64, Vec<StateVector>)> = Vec::new();
    for (val, vec) in pairs {
        match clusters.last_mut() {
            Some((rep, members)) if (val - *rep).abs() < DEGENERACY_TOL => members.push(vec),
            _ => clusters.push((val, vec![vec])),
        }
    }
    Ok(clusters)
}

/// `⟨ψ|A|ψ⟩` for a hermitian observable.
pub fn expectation(psi: &StateVector, a: &OperatorMatrix) -> Result<f64> {
    a.require_hermitian()?;
    let image = a.apply(psi)?;
    Ok(psi.amplitudes().dotc(&image).re)
}

/// Born probabilities per outcome, degenerate eigenvalues merged,
/// eigenvalues descending. Probabilities sum to 1 within 1e-12.
pub fn born_probabilities(psi: &StateVector, a: &OperatorMatrix) -> Result<Vec<(f64, f64)>> {
    let clusters = outcome_clusters(a)?;
    if a.dim() != psi.dim() {
        return Err(Error::DimMismatch(format!(
            "operator dim {} vs state dim {}",
            a.dim(),
            psi.dim()
        )));
    }
    Ok(clusters
        .into_iter()
        .map(|(val, members)| {
            let p: f64 = members.iter().map(|v| v.overlap_probability(psi)).sum();
            (val, p.clamp(0.0, 1.0))
        })
        .collect())
}

/// Lüders collapse: renormalized projection of `psi` onto the eigenspace of
/// `eigenvalue`. Fails with [`Error::ImpossibleOutcome`] when the Born
/// probability of that outcome vanishes.
pub fn collapse(psi: &StateVector, a: &OperatorMatrix, eigenvalue: f64) -> Result<StateVector> {
    let clusters = outcome_clusters(a)?;
    let (_, members) = clusters
        .into_iter()
        .find(|(val, _)| (val - eigenvalue).abs() < DEGENERACY_TOL)
        .ok_or_else(|| {
            Error::InvalidArgument(format!("eigenvalue {eigenvalue} is not in the spectrum"))
        })?;
    project_collapse(psi, &members, eigenvalue)
}

fn project_collapse(
    psi: &StateVector,
    eigenspace: &[StateVector],
    eigenvalue: f64,
) -> Result<StateVector> {
    let mut projected = DVector::zeros(psi.dim());
    for v in eigenspace {
        let coeff = v.inner(psi);
        projected += v.amplitudes() * coeff;
    }
    let p = projected.norm_squared();
    if p < PROB_FLOOR {
        return Err(Error::ImpossibleOutcome(format!(
            "outcome {eigenvalue} has Born probability {p:.3e}"
        )));
    }
    projected /= Complex64::new(p.sqrt(), 0.0);
    Ok(StateVector { amps: projected })
}

/// Probability of a collapse chain: the product of conditional Born
/// probabilities along `steps`. An impossible intermediate outcome yields 0.
pub fn chain_probability(psi0: &StateVector, steps: &[(OperatorMatrix, f64)]) -> Result<f64> {
    let mut state = psi0.clone();
    let mut prob = 1.0;
    for (op, requested) in steps {
        let clusters = outcome_clusters(op)?;
        let (val, members) = clusters
            .into_iter()
            .find(|(val, _)| (val - requested).abs() < DEGENERACY_TOL)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("eigenvalue {requested} is not in the spectrum"))
            })?;
        let p: f64 = members.iter().map(|v| v.overlap_probability(&state)).sum();
        if p < PROB_FLOOR {
            return Ok(0.0);
        }
        prob *= p;
        state = project_collapse(&state, &members, val)?;
    }
    Ok(prob)
}

// ---------------------------------------------------------------------------
// Monte Carlo realization
// ---------------------------------------------------------------------------

/// One seeded realization of the measurement sequence `ops` starting from
/// `psi0`. Deterministic for a fixed seed; an ensemble over substreams of
/// the same seed reproduces [`chain_probability`] frequencies.
pub fn simulate_sequence(
    psi0: &StateVector,
    ops: &[OperatorMatrix],
    seed: u64,
) -> Result<MeasurementRecord> {
    let decomposed = ops
        .iter()
        .map(outcome_clusters)
        .collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    simulate_with_rng(psi0, &decomposed, &mut rng, seed)
}

fn simulate_with_rng(
    psi0: &StateVector,
    decomposed: &[Vec<(f64, Vec<StateVector>)>],
    rng: &mut ChaCha8Rng,
    seed: u64,
) -> Result<MeasurementRecord> {
    let mut state = psi0.clone();
    let mut outcomes = Vec::with_capacity(decomposed.len());
    let mut probability = 1.0;
    for clusters in decomposed {
        let u: f64 = rng.random();
        let mut cumulative = 0.0;
        let mut chosen = None;
        for (val, members) in clusters {
            let p: f64 = members.iter().map(|v| v.overlap_probability(&state)).sum();
            cumulative += p;
            if u < cumulative {
                chosen = Some((*val, members, p));
                break;
            }
        }
        // Rounding can leave u just above the cumulative sum; take the last
        // outcome with nonzero probability.
        let (val, members, p) = match chosen {
            Some(c) => c,
            None => {
                let (val, members) = clusters
                    .iter()
                    .rev()
                    .find(|(_, m)| {
                        m.iter().map(|v| v.overlap_probability(&state)).sum::<f64>() > PROB_FLOOR
                    })
                    .ok_or_else(|| {
                        Error::ImpossibleOutcome("state has no reachable outcome".into())
                    })?;
                let p = members.iter().map(|v| v.overlap_probability(&state)).sum();
                (*val, members, p)
            }
        };
        state = project_collapse(&state, members, val)?;
        probability *= p;
        outcomes.push((val, state.clone()));
    }
    Ok(MeasurementRecord {
        outcomes,
        probability,
        seed,
    })
}

/// Outcome-chain counts over `runs` seeded realizations.
///
/// Run `i` draws from substream `i` of `seed` (ChaCha stream counter), so
/// the ensemble is reproducible and independent of the parallel schedule.
#[derive(Debug, Clone)]
pub struct EnsembleCounts {
    /// Outcome eigenvalues per measurement step (descending, merged).
    pub eigenvalues: Vec<Vec<f64>>,
    /// Chain index -> count; the chain is one outcome index per step.
    pub counts: BTreeMap<Vec<usize>, u64>,
    pub runs: u64,
}

impl EnsembleCounts {
    /// Empirical frequency of the chain identified by eigenvalues.
    pub fn frequency_of(&self, chain: &[f64]) -> f64 {
        let idx: Option<Vec<usize>> = chain
            .iter()
            .enumerate()
            .map(|(step, want)| {
                self.eigenvalues[step]
                    .iter()
                    .position(|v| (v - want).abs() < DEGENERACY_TOL)
            })
            .collect();
        match idx.and_then(|key| self.counts.get(&key)) {
            Some(&c) => c as f64 / self.runs as f64,
            None => 0.0,
        }
    }
}

/// Runs `simulate_sequence` over per-run substreams and tallies chains.
pub fn outcome_frequencies(
    psi0: &StateVector,
    ops: &[OperatorMatrix],
    seed: u64,
    runs: u64,
) -> Result<EnsembleCounts> {
    let decomposed = ops
        .iter()
        .map(outcome_clusters)
        .collect::<Result<Vec<_>>>()?;
    let eigenvalues: Vec<Vec<f64>> = decomposed
        .iter()
        .map(|clusters| clusters.iter().map(|(v, _)| *v).collect())
        .collect();

    let counts = (0..runs)
        .into_par_iter()
        .map(|run| -> Result<Vec<usize>> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(run);
            let record = simulate_with_rng(psi0, &decomposed, &mut rng, seed)?;
            Ok(record
                .outcomes
                .iter()
                .enumerate()
                .map(|(step, (val, _))| {
                    eigenvalues[step]
                        .iter()
                        .position(|v| (v - val).abs() < DEGENERACY_TOL)
                        .expect("outcome comes from the same cluster list")
                })
                .collect())
        })
        .try_fold(BTreeMap::new, |mut acc: BTreeMap<Vec<usize>, u64>, key| {
            key.map(|key| {
                *acc.entry(key).or_insert(0) += 1;
                acc
            })
        })
        .try_reduce(BTreeMap::new, |mut a, b| {
            for (key, count) in b {
                *a.entry(key).or_insert(0) += count;
            }
            Ok(a)
        })?;

    Ok(EnsembleCounts {
        eigenvalues,
        counts,
        runs,
    })
}

// ---------------------------------------------------------------------------
// Composite systems
// ---------------------------------------------------------------------------

/// Kronecker product of states; the left factor is the slow index.
pub fn tensor_states(a: &StateVector, b: &StateVector) -> StateVector {
    StateVector {
        amps: linalg::kron_vec(a.amplitudes(), b.amplitudes()),
    }
}

/// Kronecker product of operators; `(A ⊗ 1)` commutes with `(1 ⊗ B)` exactly.
pub fn tensor_ops(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    OperatorMatrix::new(linalg::kron_mat(a.entries(), b.entries()))
        .expect("kronecker product of square matrices is square")
}

/// `(|↑↓⟩ + |↓↑⟩)/√2`.
pub fn epr_state() -> StateVector {
    let ud = tensor_states(&up(), &down());
    let du = tensor_states(&down(), &up());
    StateVector::normalized((ud.amps + du.amps).data.into())
        .expect("sum of orthogonal unit vectors is nonzero")
}

/// `(|↓↓⟩ + |↑↓⟩ + |↓↑⟩)/√3`.
pub fn hardy_state() -> StateVector {
    let dd = tensor_states(&down(), &down());
    let ud = tensor_states(&up(), &down());
    let du = tensor_states(&down(), &up());
    StateVector::normalized((dd.amps + ud.amps + du.amps).data.into())
        .expect("sum of orthogonal unit vectors is nonzero")
}

/// Joint amplitude and probability for both particles of the Hardy state to
/// be found in the lower `σ_1` eigenstate: `⟨↓₁|⟨↓₁|ψ⟩` and its square
/// modulus. The classical inference from the three forms of the state says
/// this must vanish; it equals `-1/(2√3)`.
pub fn hardy_witness() -> (Complex64, f64) {
    let down1 = StateVector::normalized(vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)])
        .expect("nonzero");
    let probe = tensor_states(&down1, &down1);
    let amplitude = probe.inner(&hardy_state());
    (amplitude, amplitude.norm_sqr())
}

/// Von Neumann premeasurement: entangles `psi` with orthonormal pointer
/// states, one per distinct eigenvalue of `a`, producing
/// `Σ_a (P_a ψ) ⊗ |pointer_a⟩`. Pointer states are computational basis
/// vectors indexed in descending-eigenvalue order.
pub fn premeasurement(
    psi: &StateVector,
    a: &OperatorMatrix,
    pointer_dim: usize,
) -> Result<StateVector> {
    let clusters = outcome_clusters(a)?;
    if a.dim() != psi.dim() {
        return Err(Error::DimMismatch(format!(
            "operator dim {} vs state dim {}",
            a.dim(),
            psi.dim()
        )));
    }
    if pointer_dim < clusters.len() {
        return Err(Error::InvalidArgument(format!(
            "pointer dim {} is smaller than the {} distinct outcomes",
            pointer_dim,
            clusters.len()
        )));
    }
    let mut total = DVector::zeros(psi.dim() * pointer_dim);
    for (outcome_idx, (_, members)) in clusters.iter().enumerate() {
        let mut branch = DVector::zeros(psi.dim());
        for v in members {
            branch += v.amplitudes() * v.inner(psi);
        }
        let pointer = StateVector::basis(pointer_dim, outcome_idx);
        total += linalg::kron_vec(&branch, pointer.amplitudes());
    }
    StateVector::new(total.data.into())
}

/// Probabilities of each pointer basis state after tracing out the system:
/// the diagonal of the reduced pointer density matrix.
pub fn pointer_marginal(total: &StateVector, system_dim: usize) -> Result<Vec<f64>> {
    if !total.dim().is_multiple_of(system_dim) {
        return Err(Error::DimMismatch(format!(
            "state dim {} is not a multiple of system dim {}",
            total.dim(),
            system_dim
        )));
    }
    let pointer_dim = total.dim() / system_dim;
    let mut marginal = vec![0.0; pointer_dim];
    for i in 0..system_dim {
        for (j, slot) in marginal.iter_mut().enumerate() {
            *slot += total.amplitude(i * pointer_dim + j).norm_sqr();
        }
    }
    Ok(marginal)
}

// ---------------------------------------------------------------------------
// Time-operator trace obstruction
// ---------------------------------------------------------------------------

/// Traces of both sides of `[T, H] = -iħ·1` in finite dimension `d`:
/// `tr([T,H])` vanishes by cyclicity while `tr(-iħ·1) = -iħd`, so the
/// relation has no finite-dimensional solution.
pub fn pauli_theorem_obstruction(
    t: &OperatorMatrix,
    h: &OperatorMatrix,
    hbar: f64,
) -> Result<(Complex64, Complex64)> {
    let lhs = commutator(t, h)?.trace();
    let rhs = Complex64::new(0.0, -hbar * t.dim() as f64);
    Ok((lhs, rhs))
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
