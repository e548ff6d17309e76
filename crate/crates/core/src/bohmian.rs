//! Nonrelativistic wave mechanics on a 1D grid with a pilot-wave layer.
//!
//! The Schrödinger equation is stepped with Crank–Nicolson (a tridiagonal
//! solve per step), which is unitary up to rounding, so norm conservation
//! is a solver property rather than a tuning accident. On top of the wave
//! field sit the polar decomposition `ψ = √ρ·exp(iS/ħ)`, the quantum
//! potential `Q = -(ħ²/2m)·(∂²√ρ)/√ρ`, the guidance velocity
//! `v = ħ·Im(ψ*∂ψ)/(m|ψ|²)`, trajectory integration, and the two-particle
//! nonlocality witness.
//!
//! Nodes: the guidance law is singular where `ρ → 0`. Points with density
//! below `NODE_EPSILON` (relative to the maximum) get masked derived
//! quantities (NaN) and velocities clamped to `±v_max = 10ħ/(m·dx)`. This
//! is a regularization choice, not a claim about the physics at nodes.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Relative density below which a point counts as a node.
pub const NODE_EPSILON: f64 = 1e-10;

/// Velocity clamp in units of ħ/(m·dx).
const V_MAX_FACTOR: f64 = 10.0;

// ---------------------------------------------------------------------------
// Grid and field types
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    HardWall,
}

/// Uniform 1D spatial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    pub boundary: Boundary,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_points: usize, boundary: Boundary) -> Result<Self> {
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "bad grid bounds [{x_min}, {x_max}]"
            )));
        }
        if n_points < 16 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 16 points, got {n_points}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
            boundary,
        })
    }

    pub fn dx(&self) -> f64 {
        match self.boundary {
            Boundary::Periodic => (self.x_max - self.x_min) / self.n_points as f64,
            Boundary::HardWall => (self.x_max - self.x_min) / (self.n_points - 1) as f64,
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_min && x <= self.x_max
    }
}

/// A complex wave field sampled on a grid, with its physical constants.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub values: Vec<Complex64>,
    pub grid: Grid1D,
    pub mass: f64,
    pub hbar: f64,
    pub t: f64,
}

impl WaveField {
    pub fn new(values: Vec<Complex64>, grid: Grid1D, mass: f64, hbar: f64, t: f64) -> Result<Self> {
        if values.len() != grid.n_points {
            return Err(Error::DimMismatch(format!(
                "{} values on a {}-point grid",
                values.len(),
                grid.n_points
            )));
        }
        if !(mass > 0.0) || !(hbar > 0.0) {
            return Err(Error::InvalidArgument(
                "mass and hbar must be positive".into(),
            ));
        }
        Ok(Self {
            values,
            grid,
            mass,
            hbar,
            t,
        })
    }

    /// Builds from unnormalized samples and normalizes the discrete norm.
    pub fn from_samples<F: Fn(f64) -> Complex64>(
        grid: Grid1D,
        mass: f64,
        hbar: f64,
        f: F,
    ) -> Result<Self> {
        let values: Vec<Complex64> = grid.points().iter().map(|&x| f(x)).collect();
        let mut field = Self::new(values, grid, mass, hbar, 0.0)?;
        field.normalize()?;
        Ok(field)
    }

    /// Discrete norm `Σ|ψ_i|²·dx`.
    pub fn norm(&self) -> f64 {
        let dx = self.grid.dx();
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * dx
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::InvalidArgument("cannot normalize zero field".into()));
        }
        let scale = 1.0 / n.sqrt();
        for z in &mut self.values {
            *z *= scale;
        }
        Ok(())
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm_sqr()).collect()
    }

    fn node_threshold(&self) -> f64 {
        let max_rho = self.values.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
        NODE_EPSILON * max_rho
    }

    pub fn v_max(&self) -> f64 {
        V_MAX_FACTOR * self.hbar / (self.mass * self.grid.dx())
    }
}

/// Polar decomposition of a wave field: density and (unwrapped) action.
/// `s` is NaN wherever the density is below the node threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct MadelungPair {
    pub rho: Vec<f64>,
    pub s: Vec<f64>,
}

/// One guidance-law trajectory: `(t, x)` samples in strictly increasing
/// time, plus a flag set when the trajectory left a hard-wall grid and was
/// truncated.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<(f64, f64)>,
    pub start: f64,
    pub truncated: bool,
}

impl Trajectory {
    pub fn final_position(&self) -> f64 {
        self.samples.last().map(|&(_, x)| x).unwrap_or(self.start)
    }
}

// ---------------------------------------------------------------------------
// Crank–Nicolson evolution
// ---------------------------------------------------------------------------

/// Solves a complex tridiagonal system with constant off-diagonals by the
/// Thomas algorithm.
fn thomas_solve(diag: &[Complex64], off: Complex64, rhs: &[Complex64], out: &mut [Complex64]) {
    let n = diag.len();
    let mut c_prime = vec![Complex64::default(); n];
    let mut d_prime = vec![Complex64::default(); n];
    let mut denom = diag[0];
    c_prime[0] = off / denom;
    d_prime[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - off * c_prime[i - 1];
        c_prime[i] = off / denom;
        d_prime[i] = (rhs[i] - off * d_prime[i - 1]) / denom;
    }
    out[n - 1] = d_prime[n - 1];
    for i in (0..n - 1).rev() {
        out[i] = d_prime[i] - c_prime[i] * out[i + 1];
    }
}

/// Cyclic variant via the Sherman–Morrison correction.
fn thomas_solve_periodic(
    diag: &[Complex64],
    off: Complex64,
    rhs: &[Complex64],
    out: &mut [Complex64],
) {
    let n = diag.len();
    let gamma = -diag[0];
    let mut d_mod: Vec<Complex64> = diag.to_vec();
    d_mod[0] = diag[0] - gamma;
    d_mod[n - 1] = diag[n - 1] - off * off / gamma;

    let mut y = vec![Complex64::default(); n];
    thomas_solve(&d_mod, off, rhs, &mut y);

    let mut u = vec![Complex64::default(); n];
    u[0] = gamma;
    u[n - 1] = off;
    let mut z = vec![Complex64::default(); n];
    thomas_solve(&d_mod, off, &u, &mut z);

    let v_dot_y = y[0] + (off / gamma) * y[n - 1];
    let v_dot_z = Complex64::new(1.0, 0.0) + z[0] + (off / gamma) * z[n - 1];
    let factor = v_dot_y / v_dot_z;
    for i in 0..n {
        out[i] = y[i] - factor * z[i];
    }
}

/// Advances a wave field through `steps` Crank–Nicolson steps of size `dt`
/// in the static potential `potential` (values on the grid).
///
/// The scheme is `(1 + i·dt·H/2ħ)ψ' = (1 - i·dt·H/2ħ)ψ` with the standard
/// three-point Laplacian, so the discrete norm is conserved up to rounding.
/// A `dt` above `m·dx²/ħ` is accepted but logged as a warning since the
/// phase accuracy degrades.
pub fn evolve(psi: &WaveField, potential: &[f64], dt: f64, steps: usize) -> Result<WaveField> {
    if potential.len() != psi.grid.n_points {
        return Err(Error::DimMismatch(format!(
            "potential has {} values on a {}-point grid",
            potential.len(),
            psi.grid.n_points
        )));
    }
    if potential.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "potential contains non-finite values".into(),
        ));
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "dt must be positive, got {dt}"
        )));
    }
    let dx = psi.grid.dx();
    if dt > psi.mass * dx * dx / psi.hbar {
        log::warn!(
            "dt = {dt} exceeds the recommended m·dx²/ħ = {}; accuracy may suffer",
            psi.mass * dx * dx / psi.hbar
        );
    }
    if steps == 0 {
        return Ok(psi.clone());
    }

    let hbar = psi.hbar;
    let kinetic = hbar * hbar / (2.0 * psi.mass * dx * dx);
    // H = kinetic tridiagonal + V: diag 2k + V_i, off -k.
    let alpha = Complex64::new(0.0, dt / (2.0 * hbar));
    let a_off = alpha * Complex64::new(-kinetic, 0.0);
    let b_off = -a_off;
    let one = Complex64::new(1.0, 0.0);
    let a_diag: Vec<Complex64> = potential
        .iter()
        .map(|&v| one + alpha * Complex64::new(2.0 * kinetic + v, 0.0))
        .collect();
    let b_diag: Vec<Complex64> = potential
        .iter()
        .map(|&v| one - alpha * Complex64::new(2.0 * kinetic + v, 0.0))
        .collect();

    let n = psi.grid.n_points;
    let mut current = psi.values.clone();
    let mut rhs = vec![Complex64::default(); n];
    let mut next = vec![Complex64::default(); n];
    for _ in 0..steps {
        match psi.grid.boundary {
            Boundary::HardWall => {
                rhs[0] = b_diag[0] * current[0] + b_off * current[1];
                for i in 1..n - 1 {
                    rhs[i] = b_diag[i] * current[i] + b_off * (current[i - 1] + current[i + 1]);
                }
                rhs[n - 1] = b_diag[n - 1] * current[n - 1] + b_off * current[n - 2];
                thomas_solve(&a_diag, a_off, &rhs, &mut next);
            }
            Boundary::Periodic => {
                for i in 0..n {
                    let left = current[(i + n - 1) % n];
                    let right = current[(i + 1) % n];
                    rhs[i] = b_diag[i] * current[i] + b_off * (left + right);
                }
                thomas_solve_periodic(&a_diag, a_off, &rhs, &mut next);
            }
        }
        std::mem::swap(&mut current, &mut next);
    }

    WaveField::new(
        current,
        psi.grid.clone(),
        psi.mass,
        hbar,
        psi.t + dt * steps as f64,
    )
}

// ---------------------------------------------------------------------------
// Polar decomposition
// ---------------------------------------------------------------------------

/// Density and unwrapped action of a wave field. The action is the phase
/// times ħ, unwrapped left to right; node points carry NaN.
pub fn madelung(psi: &WaveField) -> MadelungPair {
    let rho = psi.density();
    let threshold = psi.node_threshold();
    let mut s = vec![f64::NAN; rho.len()];
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for i in 0..rho.len() {
        if rho[i] <= threshold {
            prev = None;
            continue;
        }
        let raw = psi.values[i].arg();
        if let Some(p) = prev {
            let mut jump = raw + offset - p;
            while jump > std::f64::consts::PI {
                offset -= 2.0 * std::f64::consts::PI;
                jump -= 2.0 * std::f64::consts::PI;
            }
            while jump < -std::f64::consts::PI {
                offset += 2.0 * std::f64::consts::PI;
                jump += 2.0 * std::f64::consts::PI;
            }
        }
        let unwrapped = raw + offset;
        s[i] = psi.hbar * unwrapped;
        prev = Some(unwrapped);
    }
    MadelungPair { rho, s }
}

/// Rebuilds `ψ = √ρ·exp(iS/ħ)`. NaN action at a node is treated as zero
/// phase (the amplitude there is negligible by construction).
pub fn synthesize(
    rho: &[f64],
    s: &[f64],
    grid: &Grid1D,
    hbar: f64,
    mass: f64,
    t: f64,
) -> Result<WaveField> {
    if rho.len() != grid.n_points || s.len() != grid.n_points {
        return Err(Error::DimMismatch(
            "rho/S length does not match the grid".into(),
        ));
    }
    if rho.iter().any(|&r| r < 0.0) {
        return Err(Error::InvalidArgument("negative density".into()));
    }
    let values = rho
        .iter()
        .zip(s)
        .map(|(&r, &si)| {
            let phase = if si.is_nan() { 0.0 } else { si / hbar };
            Complex64::from_polar(r.sqrt(), phase)
        })
        .collect();
    WaveField::new(values, grid.clone(), mass, hbar, t)
}

// ---------------------------------------------------------------------------
// Quantum potential and guidance velocity
// ---------------------------------------------------------------------------

fn laplacian_1d(f: &[f64], dx: f64, boundary: Boundary) -> Vec<f64> {
    let n = f.len();
    let inv = 1.0 / (dx * dx);
    let mut out = vec![f64::NAN; n];
    for i in 1..n - 1 {
        out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * inv;
    }
    if boundary == Boundary::Periodic {
        out[0] = (f[n - 1] - 2.0 * f[0] + f[1]) * inv;
        out[n - 1] = (f[n - 2] - 2.0 * f[n - 1] + f[0]) * inv;
    }
    out
}

/// `Q = -(ħ²/2m)·(∂²√ρ)/√ρ` with a three-point Laplacian. Node points and
/// hard-wall endpoints are NaN.
pub fn quantum_potential(psi: &WaveField) -> Vec<f64> {
    let threshold = psi.node_threshold();
    let sqrt_rho: Vec<f64> = psi.values.iter().map(|z| z.norm()).collect();
    let lap = laplacian_1d(&sqrt_rho, psi.grid.dx(), psi.grid.boundary);
    let factor = -psi.hbar * psi.hbar / (2.0 * psi.mass);
    sqrt_rho
        .iter()
        .zip(&lap)
        .map(|(&r, &l)| {
            if r * r <= threshold || l.is_nan() {
                f64::NAN
            } else {
                factor * l / r
            }
        })
        .collect()
}

/// Guidance velocity `v = ħ·Im(ψ*·∂ψ)/(m·|ψ|²)` with central differences,
/// clamped to `±v_max` and set to zero at nodes.
pub fn velocity_field(psi: &WaveField) -> Vec<f64> {
    let n = psi.grid.n_points;
    let dx = psi.grid.dx();
    let threshold = psi.node_threshold();
    let v_max = psi.v_max();
    let mut out = vec![0.0; n];
    let derivative = |i: usize| -> Complex64 {
        match psi.grid.boundary {
            Boundary::Periodic => {
                (psi.values[(i + 1) % n] - psi.values[(i + n - 1) % n])
                    / Complex64::new(2.0 * dx, 0.0)
            }
            Boundary::HardWall => {
                if i == 0 {
                    (psi.values[1] - psi.values[0]) / Complex64::new(dx, 0.0)
                } else if i == n - 1 {
                    (psi.values[n - 1] - psi.values[n - 2]) / Complex64::new(dx, 0.0)
                } else {
                    (psi.values[i + 1] - psi.values[i - 1]) / Complex64::new(2.0 * dx, 0.0)
                }
            }
        }
    };
    for (i, slot) in out.iter_mut().enumerate() {
        let rho = psi.values[i].norm_sqr();
        if rho <= threshold {
            continue;
        }
        let v = psi.hbar * (psi.values[i].conj() * derivative(i)).im / (psi.mass * rho);
        *slot = v.clamp(-v_max, v_max);
    }
    out
}

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

fn interp_linear(grid: &Grid1D, field: &[f64], x: f64) -> f64 {
    let dx = grid.dx();
    let pos = (x - grid.x_min) / dx;
    let i = (pos.floor() as isize).clamp(0, grid.n_points as isize - 2) as usize;
    let frac = (pos - i as f64).clamp(0.0, 1.0);
    field[i] * (1.0 - frac) + field[i + 1] * frac
}

/// Velocity at `(t, x)` by linear interpolation between two snapshots.
struct VelocityHistory<'a> {
    grid: &'a Grid1D,
    t0: f64,
    dt: f64,
    fields: Vec<Vec<f64>>,
}

impl VelocityHistory<'_> {
    fn eval(&self, t: f64, x: f64) -> f64 {
        let steps = self.fields.len() - 1;
        let pos = ((t - self.t0) / self.dt).clamp(0.0, steps as f64);
        let j = (pos.floor() as usize).min(steps.saturating_sub(1));
        let frac = (pos - j as f64).clamp(0.0, 1.0);
        let a = interp_linear(self.grid, &self.fields[j], x);
        let b = interp_linear(self.grid, &self.fields[j + 1], x);
        a * (1.0 - frac) + b * frac
    }
}

/// Integrates `ẋ = v(x, t)` through the snapshot history with the classic
/// 4-stage Runge–Kutta scheme, one step per snapshot interval. Velocities
/// are interpolated linearly in `x` and `t`. A trajectory that leaves a
/// hard-wall grid is truncated and flagged.
///
/// Snapshots must be equally spaced in time; start points must lie inside
/// the grid.
pub fn propagate_trajectories(history: &[WaveField], x0: &[f64]) -> Result<Vec<Trajectory>> {
    if history.len() < 2 {
        return Err(Error::InvalidArgument("need at least two snapshots".into()));
    }
    let grid = &history[0].grid;
    let t0 = history[0].t;
    let dt = history[1].t - history[0].t;
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(
            "snapshots must advance in time".into(),
        ));
    }
    for (i, snap) in history.iter().enumerate() {
        let expected = t0 + i as f64 * dt;
        if (snap.t - expected).abs() > 1e-9 * dt.max(1.0) {
            return Err(Error::InvalidArgument(
                "snapshots are not equally spaced in time".into(),
            ));
        }
        if snap.grid != *grid {
            return Err(Error::DimMismatch("snapshots on different grids".into()));
        }
    }
    for &x in x0 {
        if !grid.contains(x) {
            return Err(Error::InvalidArgument(format!(
                "start point {x} outside the grid"
            )));
        }
    }

    let velocities = VelocityHistory {
        grid,
        t0,
        dt,
        fields: history.iter().map(velocity_field).collect(),
    };
    let hard_wall = grid.boundary == Boundary::HardWall;

    let trajectories: Vec<Trajectory> = x0
        .par_iter()
        .map(|&start| {
            let mut samples = Vec::with_capacity(history.len());
            let mut x = start;
            let mut truncated = false;
            samples.push((t0, x));
            for j in 0..history.len() - 1 {
                let t = t0 + j as f64 * dt;
                let k1 = velocities.eval(t, x);
                let k2 = velocities.eval(t + 0.5 * dt, x + 0.5 * dt * k1);
                let k3 = velocities.eval(t + 0.5 * dt, x + 0.5 * dt * k2);
                let k4 = velocities.eval(t + dt, x + dt * k3);
                x += dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
                if hard_wall && !grid.contains(x) {
                    truncated = true;
                    break;
                }
                if grid.boundary == Boundary::Periodic {
                    let span = grid.x_max - grid.x_min;
                    x = grid.x_min + (x - grid.x_min).rem_euclid(span);
                }
                samples.push((t + dt, x));
            }
            Trajectory {
                samples,
                start,
                truncated,
            }
        })
        .collect();
    Ok(trajectories)
}

/// Draws `n` positions from the `|ψ|²` distribution by inverse transform
/// sampling of the piecewise-linear grid CDF. Deterministic per seed.
pub fn sample_from_density(psi: &WaveField, n: usize, seed: u64) -> Vec<f64> {
    let dx = psi.grid.dx();
    let rho = psi.density();
    let mut cdf = Vec::with_capacity(rho.len());
    let mut acc = 0.0;
    for &r in &rho {
        acc += r * dx;
        cdf.push(acc);
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let u: f64 = rng.random::<f64>() * total;
            let idx = cdf.partition_point(|&c| c < u).min(cdf.len() - 1);
            let lower = if idx == 0 { 0.0 } else { cdf[idx - 1] };
            let within = if cdf[idx] > lower {
                (u - lower) / (cdf[idx] - lower)
            } else {
                0.5
            };
            let x = psi.grid.x(idx) + (within - 0.5) * dx;
            x.clamp(psi.grid.x_min, psi.grid.x_max)
        })
        .collect()
}

/// Kolmogorov–Smirnov distance between an empirical position sample and the
/// `|ψ|²` distribution of `psi`.
pub fn equivariance_test(positions: &[f64], psi: &WaveField) -> Result<f64> {
    if positions.is_empty() {
        return Err(Error::InvalidArgument("empty trajectory ensemble".into()));
    }
    let dx = psi.grid.dx();
    let rho = psi.density();
    let total: f64 = rho.iter().sum::<f64>() * dx;
    let mut sorted = positions.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    // Piecewise-linear CDF on the grid.
    let mut cdf = vec![0.0; rho.len()];
    let mut acc = 0.0;
    for (i, &r) in rho.iter().enumerate() {
        acc += r * dx;
        cdf[i] = acc / total;
    }
    let theory = |x: f64| -> f64 {
        if x <= psi.grid.x_min {
            return 0.0;
        }
        if x >= psi.grid.x_max {
            return 1.0;
        }
        interp_linear(&psi.grid, &cdf, x).clamp(0.0, 1.0)
    };
    let mut ks: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = theory(x);
        let hi = (i as f64 + 1.0) / n - f;
        let lo = f - i as f64 / n;
        ks = ks.max(hi.abs()).max(lo.abs());
    }
    Ok(ks)
}

/// True when the spatial order of the ensemble is preserved at every sample
/// time (single-particle 1D trajectories must not cross).
pub fn order_preserved(trajectories: &[Trajectory]) -> bool {
    if trajectories.is_empty() {
        return true;
    }
    let steps = trajectories.iter().map(|t| t.samples.len()).min().unwrap();
    let mut indices: Vec<usize> = (0..trajectories.len()).collect();
    indices.sort_by(|&a, &b| {
        trajectories[a].samples[0]
            .1
            .total_cmp(&trajectories[b].samples[0].1)
    });
    for step in 1..steps {
        for w in indices.windows(2) {
            let xa = trajectories[w[0]].samples[step].1;
            let xb = trajectories[w[1]].samples[step].1;
            if xa > xb + 1e-9 {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Hamilton–Jacobi / continuity residuals
// ---------------------------------------------------------------------------

fn gradient_1d(f: &[f64], dx: f64, boundary: Boundary) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![f64::NAN; n];
    for i in 1..n - 1 {
        out[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
    }
    if boundary == Boundary::Periodic {
        out[0] = (f[1] - f[n - 1]) / (2.0 * dx);
        out[n - 1] = (f[0] - f[n - 2]) / (2.0 * dx);
    }
    out
}

/// Residual fields of the classical Hamilton–Jacobi and continuity
/// equations computed from a `(ρ, S)` time series (three consecutive
/// snapshots so `∂_t` can be centrally differenced at the middle one):
///
/// `hj = ∂_t S + (∂_x S)²/2m + V`
/// `continuity = ∂_t ρ + ∂_x(ρ·∂_x S/m)`
///
/// Fed the polar data of a Schrödinger-evolved field, `hj` equals `-Q`.
/// Undefined points (grid edges, nodes) are NaN.
pub fn classical_residual(
    rho: [&[f64]; 3],
    s: [&[f64]; 3],
    potential: &[f64],
    grid: &Grid1D,
    mass: f64,
    dt: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = grid.n_points;
    for series in rho.iter().chain(s.iter()) {
        if series.len() != n {
            return Err(Error::DimMismatch("field length vs grid".into()));
        }
    }
    if potential.len() != n {
        return Err(Error::DimMismatch("potential length vs grid".into()));
    }
    let dx = grid.dx();
    let ds_dx = gradient_1d(s[1], dx, grid.boundary);
    let flux: Vec<f64> = rho[1]
        .iter()
        .zip(&ds_dx)
        .map(|(&r, &g)| r * g / mass)
        .collect();
    let dflux_dx = gradient_1d(&flux, dx, grid.boundary);

    let mut hj = vec![f64::NAN; n];
    let mut cont = vec![f64::NAN; n];
    for i in 0..n {
        let s_t = (s[2][i] - s[0][i]) / (2.0 * dt);
        let rho_t = (rho[2][i] - rho[0][i]) / (2.0 * dt);
        if ds_dx[i].is_nan() || s_t.is_nan() {
            continue;
        }
        hj[i] = s_t + ds_dx[i] * ds_dx[i] / (2.0 * mass) + potential[i];
        if !dflux_dx[i].is_nan() {
            cont[i] = rho_t + dflux_dx[i];
        }
    }
    Ok((hj, cont))
}

/// The same residuals obtained through the complex-field route: synthesize
/// `ψ = √ρ·e^{iS/ħ}`, apply the Q-subtracted Schrödinger operator
/// `(-ħ²/2m·∂² + V - Q)ψ - iħ∂_tψ`, and project the result back onto its
/// real (Hamilton–Jacobi) and imaginary (continuity) components. Agrees
/// with [`classical_residual`] because the two are the real and imaginary
/// parts of one complex equation.
pub fn madelung_form_residual(
    rho: [&[f64]; 3],
    s: [&[f64]; 3],
    potential: &[f64],
    grid: &Grid1D,
    hbar: f64,
    mass: f64,
    dt: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = grid.n_points;
    let fields: Vec<WaveField> = (0..3)
        .map(|j| synthesize(rho[j], s[j], grid, hbar, mass, 0.0))
        .collect::<Result<_>>()?;
    let dx = grid.dx();

    let sqrt_rho: Vec<f64> = rho[1].iter().map(|&r| r.sqrt()).collect();
    let lap_sqrt = laplacian_1d(&sqrt_rho, dx, grid.boundary);

    let mut hj = vec![f64::NAN; n];
    let mut cont = vec![f64::NAN; n];
    for i in 1..n - 1 {
        let psi = fields[1].values[i];
        let r = sqrt_rho[i];
        if r <= 0.0 || lap_sqrt[i].is_nan() || s[1][i].is_nan() {
            continue;
        }
        let q = -hbar * hbar / (2.0 * mass) * lap_sqrt[i] / r;
        let lap_psi = (fields[1].values[i - 1] - psi * 2.0 + fields[1].values[i + 1])
            / Complex64::new(dx * dx, 0.0);
        let psi_t = (fields[2].values[i] - fields[0].values[i]) / Complex64::new(2.0 * dt, 0.0);
        let lhs = lap_psi * Complex64::new(-hbar * hbar / (2.0 * mass), 0.0)
            + psi * Complex64::new(potential[i] - q, 0.0)
            - psi_t * Complex64::new(0.0, hbar);
        // Divide out the phase; the real part is R·hj, the imaginary part
        // is -ħ/(2R)·continuity.
        let reduced = lhs * Complex64::from_polar(1.0, -s[1][i] / hbar);
        hj[i] = reduced.re / r;
        cont[i] = -2.0 * r * reduced.im / hbar;
    }
    Ok((hj, cont))
}

/// Maximum `|m·ẍ + ∂_x(V+Q)|` along a trajectory. The second derivative is
/// a central difference of the trajectory samples; the force field is the
/// central-difference gradient of `force_potential = V + Q` per snapshot,
/// interpolated linearly in `x` and `t`.
pub fn quantum_newton_residual(
    traj: &Trajectory,
    force_potential: &[Vec<f64>],
    grid: &Grid1D,
    t0: f64,
    snapshot_dt: f64,
    mass: f64,
) -> Result<f64> {
    if traj.samples.len() < 3 {
        return Err(Error::InvalidArgument(
            "trajectory too short for a second difference".into(),
        ));
    }
    let gradients: Vec<Vec<f64>> = force_potential
        .iter()
        .map(|f| gradient_1d(f, grid.dx(), grid.boundary))
        .collect();
    let eval_grad = |t: f64, x: f64| -> f64 {
        let steps = gradients.len() - 1;
        let pos = ((t - t0) / snapshot_dt).clamp(0.0, steps as f64);
        let j = (pos.floor() as usize).min(steps.saturating_sub(1));
        let frac = (pos - j as f64).clamp(0.0, 1.0);
        let a = interp_linear(grid, &gradients[j], x);
        let b = interp_linear(grid, &gradients[j + 1], x);
        a * (1.0 - frac) + b * frac
    };
    let mut max_resid: f64 = 0.0;
    for w in traj.samples.windows(3) {
        let (t_prev, x_prev) = w[0];
        let (t_mid, x_mid) = w[1];
        let (_, x_next) = w[2];
        let dt = t_mid - t_prev;
        let accel = (x_next - 2.0 * x_mid + x_prev) / (dt * dt);
        let grad = eval_grad(t_mid, x_mid);
        if grad.is_nan() {
            continue;
        }
        max_resid = max_resid.max((mass * accel + grad).abs());
    }
    Ok(max_resid)
}

// ---------------------------------------------------------------------------
// Two-particle quantum potential
// ---------------------------------------------------------------------------

/// A complex field on an n×n grid `(x1, x2)` for two equal-mass particles.
#[derive(Debug, Clone)]
pub struct TwoParticleField {
    pub values: DMatrix<Complex64>,
    pub grid: Grid1D,
    pub mass: f64,
    pub hbar: f64,
}

impl TwoParticleField {
    pub const MAX_POINTS: usize = 256;

    pub fn from_samples<F: Fn(f64, f64) -> Complex64>(
        grid: Grid1D,
        mass: f64,
        hbar: f64,
        f: F,
    ) -> Result<Self> {
        if grid.n_points > Self::MAX_POINTS {
            return Err(Error::ResourceLimit(format!(
                "two-particle grids are capped at {}x{} points",
                Self::MAX_POINTS,
                Self::MAX_POINTS
            )));
        }
        let n = grid.n_points;
        let xs = grid.points();
        let mut values = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                values[(i, j)] = f(xs[i], xs[j]);
            }
        }
        let dx = grid.dx();
        let norm: f64 = values.iter().map(|z| z.norm_sqr()).sum::<f64>() * dx * dx;
        if norm < 1e-300 {
            return Err(Error::InvalidArgument("zero two-particle field".into()));
        }
        values /= Complex64::new(norm.sqrt(), 0.0);
        Ok(Self {
            values,
            grid,
            mass,
            hbar,
        })
    }

    pub fn norm(&self) -> f64 {
        let dx = self.grid.dx();
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * dx * dx
    }
}

/// The two-particle quantum potential
/// `Q(x1, x2) = -(ħ²/2m)·[(∂²₁ + ∂²₂)√ρ]/√ρ`
/// and its separability defect
/// `max |Q(a,b) + Q(a',b') - Q(a,b') - Q(a',b)|`,
/// the discrete double difference that vanishes exactly when
/// `Q = Q₁(x1) + Q₂(x2)`. Product states give zero defect; entanglement
/// makes it finite, which is the locality-violation witness.
pub fn quantum_potential_2(field: &TwoParticleField) -> (DMatrix<f64>, f64) {
    let n = field.grid.n_points;
    let dx = field.grid.dx();
    let inv = 1.0 / (dx * dx);
    let factor = -field.hbar * field.hbar / (2.0 * field.mass);
    let sqrt_rho = field.values.map(|z| z.norm());
    let max_rho = sqrt_rho.iter().map(|r| r * r).fold(0.0, f64::max);
    let threshold = NODE_EPSILON * max_rho;

    let mut q = DMatrix::from_element(n, n, f64::NAN);
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            let r = sqrt_rho[(i, j)];
            if r * r <= threshold {
                continue;
            }
            let lap = (sqrt_rho[(i - 1, j)] - 2.0 * r + sqrt_rho[(i + 1, j)]) * inv
                + (sqrt_rho[(i, j - 1)] - 2.0 * r + sqrt_rho[(i, j + 1)]) * inv;
            q[(i, j)] = factor * lap / r;
        }
    }

    // defect = max over column pairs (b, b') of the spread of
    // g(a) = Q(a,b) - Q(a,b'), scanning only rows valid in both columns.
    let mut defect: f64 = 0.0;
    for b in 0..n {
        for b_prime in b + 1..n {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for a in 0..n {
                let qa = q[(a, b)];
                let qb = q[(a, b_prime)];
                if qa.is_nan() || qb.is_nan() {
                    continue;
                }
                let g = qa - qb;
                lo = lo.min(g);
                hi = hi.max(g);
            }
            if hi > lo {
                defect = defect.max(hi - lo);
            }
        }
    }
    (q, defect)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
