//! Schwarzschild horizon geometry and the thermodynamic analogy, in
//! natural units (ħ = c = k_B = 1) with G explicit.
//!
//! Scope is hard-locked to J = Q = 0: the angular-momentum and charge
//! slots exist so the full first-law bookkeeping has somewhere to live,
//! but nonzero values are rejected rather than modelled. The entropy is
//! the horizon-area quantity S = A/4G — the computed object is the
//! analogy, with no claim about microscopic degrees of freedom.
//!
//! The third-law statement (no realistic process reaches κ = 0, i.e.
//! M → ∞) attaches to no finite computation and is carried as this note
//! only.

use serde::Serialize;

use crate::error::{Error, Result};

/// Parameters of a stationary black hole. Only the Schwarzschild slice
/// (J = Q = 0, so Ω = Φ = 0) is accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlackHoleParams {
    pub mass: f64,
    pub g: f64,
    pub angular_momentum: f64,
    pub charge: f64,
    pub horizon_angular_velocity: f64,
    pub horizon_potential: f64,
}

impl BlackHoleParams {
    pub fn schwarzschild(mass: f64, g: f64) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "mass must be positive, got {mass}"
            )));
        }
        if !(g > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "G must be positive, got {g}"
            )));
        }
        Ok(Self {
            mass,
            g,
            angular_momentum: 0.0,
            charge: 0.0,
            horizon_angular_velocity: 0.0,
            horizon_potential: 0.0,
        })
    }

    /// General constructor; rejects J ≠ 0 or Q ≠ 0 as out of scope.
    pub fn new(mass: f64, g: f64, angular_momentum: f64, charge: f64) -> Result<Self> {
        if angular_momentum != 0.0 || charge != 0.0 {
            return Err(Error::Unsupported(
                "only J = Q = 0 (Schwarzschild) is in scope".into(),
            ));
        }
        Self::schwarzschild(mass, g)
    }
}

/// Derived horizon quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchwarzschildDerived {
    /// Horizon radius `r = 2GM`.
    pub r_h: f64,
    /// Horizon area `A = 4πr² = 16πG²M²`.
    pub area: f64,
    /// Surface gravity `κ = 2πT = 1/(4GM)`.
    pub kappa: f64,
    /// Hawking temperature `T = 1/(8πGM)`.
    pub temperature: f64,
    /// Horizon entropy `S = A/4G = 4πGM²`.
    pub entropy: f64,
}

/// All derived Schwarzschild quantities. The closed forms satisfy
/// `S = 4πGM²`, `T·S = M/2` and `M = 2TS` identically.
pub fn schwarzschild(p: &BlackHoleParams) -> Result<SchwarzschildDerived> {
    if p.angular_momentum != 0.0 || p.charge != 0.0 {
        return Err(Error::Unsupported(
            "only J = Q = 0 (Schwarzschild) is in scope".into(),
        ));
    }
    let r_h = 2.0 * p.g * p.mass;
    let area = 4.0 * std::f64::consts::PI * r_h * r_h;
    let temperature = 1.0 / (8.0 * std::f64::consts::PI * p.g * p.mass);
    let kappa = 2.0 * std::f64::consts::PI * temperature;
    let entropy = area / (4.0 * p.g);
    Ok(SchwarzschildDerived {
        r_h,
        area,
        kappa,
        temperature,
        entropy,
    })
}

/// First-law bookkeeping for a small mass change.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstLawCheck {
    /// `S(M + dM) - S(M)` from the horizon area.
    pub ds_geometric: f64,
    /// `dM/T(M) = 8πGM·dM`, the thermodynamic side.
    pub dm_over_t: f64,
    /// `|ds_geometric - dm_over_t| = 4πG·dM²`, shrinking quadratically
    /// with dM.
    pub residual: f64,
}

/// Compares the geometric entropy change against `dM/T`. The residual is
/// O(dM²); `dM/M > 0.01` is accepted with a warning since the differential
/// reading degrades.
pub fn first_law_check(p: &BlackHoleParams, dm: f64) -> Result<FirstLawCheck> {
    if !(dm > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "dM must be positive, got {dm}"
        )));
    }
    if dm / p.mass > 0.01 {
        log::warn!(
            "dM/M = {} is large for a first-law differential check",
            dm / p.mass
        );
    }
    let before = schwarzschild(p)?;
    let after = schwarzschild(&BlackHoleParams {
        mass: p.mass + dm,
        ..*p
    })?;
    let ds_geometric = after.entropy - before.entropy;
    let dm_over_t = dm / before.temperature;
    Ok(FirstLawCheck {
        ds_geometric,
        dm_over_t,
        residual: (ds_geometric - dm_over_t).abs(),
    })
}

/// Area bookkeeping for a merger modelled as `M1 + M2 → M1 + M2` with no
/// radiated energy — the simplest strict-inequality instance of the area
/// theorem, from the convexity of M².
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AreaTheoremCheck {
    pub area_merged: f64,
    pub area_sum: f64,
    pub ok: bool,
}

pub fn area_theorem_check(m1: f64, m2: f64, g: f64) -> Result<AreaTheoremCheck> {
    let a1 = schwarzschild(&BlackHoleParams::schwarzschild(m1, g)?)?.area;
    let a2 = schwarzschild(&BlackHoleParams::schwarzschild(m2, g)?)?.area;
    let merged = schwarzschild(&BlackHoleParams::schwarzschild(m1 + m2, g)?)?.area;
    Ok(AreaTheoremCheck {
        area_merged: merged,
        area_sum: a1 + a2,
        ok: merged >= a1 + a2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn unit_hole_has_the_textbook_numbers() {
        // Oracle: direct evaluation of r = 2GM, A = 16πG²M², S = 4πGM²,
        // T = 1/8πGM at G = M = 1.
        let d = schwarzschild(&BlackHoleParams::schwarzschild(1.0, 1.0).unwrap()).unwrap();
        assert!((d.r_h - 2.0).abs() < 1e-12);
        assert!((d.area - 16.0 * PI).abs() < 1e-12);
        assert!((d.entropy - 4.0 * PI).abs() < 1e-12);
        assert!((d.temperature - 1.0 / (8.0 * PI)).abs() < 1e-15);
        assert!((d.kappa - 0.25).abs() < 1e-15);
    }

    #[test]
    fn scaling_laws_in_mass() {
        let base = schwarzschild(&BlackHoleParams::schwarzschild(1.0, 1.0).unwrap()).unwrap();
        let doubled = schwarzschild(&BlackHoleParams::schwarzschild(2.0, 1.0).unwrap()).unwrap();
        assert!((doubled.area / base.area - 4.0).abs() < 1e-12);
        assert!((doubled.temperature / base.temperature - 0.5).abs() < 1e-12);
    }

    #[test]
    fn entropy_per_area_is_one_over_4g() {
        for &(m, g) in &[(0.7, 1.0), (3.0, 0.5), (12.0, 2.0)] {
            let d = schwarzschild(&BlackHoleParams::schwarzschild(m, g).unwrap()).unwrap();
            assert!((d.entropy / d.area - 1.0 / (4.0 * g)).abs() < 1e-15);
        }
    }

    #[test]
    fn internal_identities_hold() {
        for &(m, g) in &[(1.0, 1.0), (2.5, 0.3), (0.04, 7.0)] {
            let d = schwarzschild(&BlackHoleParams::schwarzschild(m, g).unwrap()).unwrap();
            assert!((d.entropy - 4.0 * PI * g * m * m).abs() < 1e-12 * d.entropy.max(1.0));
            assert!((d.temperature * d.entropy - m / 2.0).abs() < 1e-12 * m.max(1.0));
            // Smarr form M = 2TS.
            assert!((2.0 * d.temperature * d.entropy - m).abs() < 1e-12 * m.max(1.0));
            assert!((d.kappa - 2.0 * PI * d.temperature).abs() < 1e-15 * d.kappa.max(1.0));
        }
    }

    #[test]
    fn rescaling_energy_units_is_an_invariance() {
        // Changing the energy unit by λ sends (M, G) → (λM, G/λ²); the
        // dimensionless entropy, GM² and T/M must not move.
        let (m, g) = (1.7, 0.9);
        let base = schwarzschild(&BlackHoleParams::schwarzschild(m, g).unwrap()).unwrap();
        for &lambda in &[0.5, 2.0, 10.0] {
            let scaled = schwarzschild(
                &BlackHoleParams::schwarzschild(m * lambda, g / (lambda * lambda)).unwrap(),
            )
            .unwrap();
            assert!((scaled.entropy - base.entropy).abs() < 1e-12 * base.entropy);
            assert!(
                (scaled.temperature / (m * lambda) - base.temperature / m).abs()
                    < 1e-12 * base.temperature / m
            );
            let gm2 = g / (lambda * lambda) * (m * lambda) * (m * lambda);
            assert!((gm2 - g * m * m).abs() < 1e-12 * g * m * m);
        }
    }

    #[test]
    fn out_of_scope_parameters_are_rejected() {
        assert!(matches!(
            BlackHoleParams::new(1.0, 1.0, 0.1, 0.0),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            BlackHoleParams::new(1.0, 1.0, 0.0, -0.2),
            Err(Error::Unsupported(_))
        ));
        assert!(BlackHoleParams::schwarzschild(0.0, 1.0).is_err());
        assert!(BlackHoleParams::schwarzschild(1.0, 0.0).is_err());
    }

    #[test]
    fn first_law_residual_is_quadratic_in_dm() {
        // Oracle: Richardson order — halving dM shrinks the residual 4x;
        // analytically the residual is exactly 4πG·dM².
        let p = BlackHoleParams::schwarzschild(1.0, 1.0).unwrap();
        let coarse = first_law_check(&p, 1e-4).unwrap();
        assert!(coarse.residual < 1e-6);
        assert!((coarse.ds_geometric / 1e-4 - 8.0 * PI).abs() < 0.01);
        assert!((coarse.dm_over_t - 8.0 * PI * 1e-4).abs() < 1e-15);
        let fine = first_law_check(&p, 5e-5).unwrap();
        let ratio = coarse.residual / fine.residual;
        assert!((ratio - 4.0).abs() < 0.8, "Richardson ratio {ratio}");
        assert!((coarse.residual - 4.0 * PI * 1e-8).abs() < 1e-12);
    }

    #[test]
    fn entropy_derivative_matches_inverse_temperature() {
        // d(4πGM²)/dM = 8πGM = 1/T, the derivative-level identity.
        let p = BlackHoleParams::schwarzschild(1.3, 0.8).unwrap();
        let d = schwarzschild(&p).unwrap();
        assert!((8.0 * PI * 0.8 * 1.3 - 1.0 / d.temperature).abs() < 1e-12);
    }

    #[test]
    fn merged_horizon_beats_the_sum() {
        let check = area_theorem_check(1.0, 1.0, 1.0).unwrap();
        assert!((check.area_merged - 64.0 * PI).abs() < 1e-10);
        assert!((check.area_sum - 32.0 * PI).abs() < 1e-10);
        assert!(check.ok);
    }

    #[test]
    fn vanishing_partner_approaches_equality() {
        let check = area_theorem_check(1.0, 1e-9, 1.0).unwrap();
        assert!(check.ok);
        assert!((check.area_merged - check.area_sum) / check.area_sum < 1e-7);
    }

    #[test]
    fn random_mergers_never_shrink_the_area() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..1000 {
            let m1 = rng.random::<f64>() * 10.0 + 1e-3;
            let m2 = rng.random::<f64>() * 10.0 + 1e-3;
            let check = area_theorem_check(m1, m2, 1.0).unwrap();
            assert!(check.ok);
            assert!(check.area_merged > check.area_sum);
        }
    }
}
