//! Schwarzschild near-horizon geometry.
//!
//! Converts physical black-hole scenarios into the dimensionless squeezing
//! parameters that drive all state construction, and quantifies the validity
//! of the near-horizon Rindler approximation.
//!
//! The radial metric is `ds² = -f dt² + f⁻¹ dr²` with `f = 1 - 2m/r`
//! (geometrized units). Close to the horizon this reduces to a Rindler metric
//! whose acceleration parameter is the proper acceleration
//! `a₀ = κ (1 - f₀)² / √f₀ ≈ κ / √f₀` of a static observer at `r₀`, where
//! `κ = 1/(4m)` is the surface gravity and `f₀ = 1 - 1/R₀`. The approximation
//! is controlled by the distance to the horizon in Schwarzschild radii,
//! `Δ₀/R_S = R₀ - 1`, and is considered clean below [`VALIDITY_THRESHOLD`].

use crate::constants::Constants;
use crate::{Error, Result};

/// Distance-to-horizon ratio `Δ₀/R_S` below which the near-horizon Rindler
/// approximation is considered clean. Scenarios beyond it are still computed;
/// they just carry a warning flag.
pub const VALIDITY_THRESHOLD: f64 = 0.05;

/// How a frequency literal is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrequencyConvention {
    /// Ordinary frequency in Hz; multiplied by 2π before use.
    #[default]
    Ordinary,
    /// Already an angular frequency in rad/s.
    Angular,
}

/// A black-hole scenario in SI units: black-hole mass, static observer's
/// distance to the horizon, and the frequency of Rob's entangled mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScenario {
    /// Black-hole mass (kg), > 0.
    pub mass_kg: f64,
    /// Distance `r₀ - R_S` from the horizon (m), > 0.
    pub delta0_m: f64,
    /// Rob's mode frequency ω_R (Hz or rad/s per `convention`), > 0.
    pub frequency_hz: f64,
    /// Whether `frequency_hz` is ordinary or already angular.
    pub convention: FrequencyConvention,
}

impl PhysicalScenario {
    pub fn new(
        mass_kg: f64,
        delta0_m: f64,
        frequency_hz: f64,
        convention: FrequencyConvention,
    ) -> Result<Self> {
        for (name, v) in [
            ("mass", mass_kg),
            ("delta0", delta0_m),
            ("frequency", frequency_hz),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Domain(format!(
                    "{name} must be finite and strictly positive, got {v}"
                )));
            }
        }
        Ok(PhysicalScenario {
            mass_kg,
            delta0_m,
            frequency_hz,
            convention,
        })
    }

    /// The angular frequency in rad/s implied by the convention flag.
    pub fn angular_frequency(&self) -> f64 {
        match self.convention {
            FrequencyConvention::Ordinary => 2.0 * std::f64::consts::PI * self.frequency_hz,
            FrequencyConvention::Angular => self.frequency_hz,
        }
    }
}

/// A scenario in units natural to the black hole: `Ω = 2π ω/κ` and
/// `R₀ = r₀/R_S`. Every Schwarzschild black hole behaves identically in
/// these coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalScenario {
    /// Dimensionless mode frequency Ω, > 0.
    pub omega: f64,
    /// Observer position in Schwarzschild radii, > 1.
    pub r0_over_rs: f64,
}

impl NaturalScenario {
    pub fn new(omega: f64, r0_over_rs: f64) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::Domain(format!(
                "omega must be finite and strictly positive, got {omega}"
            )));
        }
        if !r0_over_rs.is_finite() || r0_over_rs <= 1.0 {
            return Err(Error::Domain(format!(
                "r0/R_S must be > 1 (static observer strictly outside the horizon), \
                 got {r0_over_rs}"
            )));
        }
        Ok(NaturalScenario { omega, r0_over_rs })
    }
}

/// The squeezing parameters controlling all state construction, plus
/// diagnostics for the near-horizon approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    /// Scalar squeezing: `tanh q_s = exp(-(Ω/2)√(1 - 1/R₀))`, in [0, 1).
    pub tanh_qs: f64,
    /// Dirac squeezing: `tan q_d`, numerically equal to `tanh_qs`.
    pub tan_qd: f64,
    /// q_s = atanh(tanh q_s) ≥ 0.
    pub qs: f64,
    /// q_d = atan(tan q_d) ∈ [0, π/4].
    pub qd: f64,
    /// Redshift factor f₀ = 1 - 1/R₀ ∈ (0, 1).
    pub f0: f64,
    /// Δ₀/R_S = R₀ - 1; the small parameter of the approximation.
    pub validity_ratio: f64,
    /// Set when `validity_ratio` exceeds [`VALIDITY_THRESHOLD`]. Never aborts
    /// a computation.
    pub beyond_validity: bool,
}

/// Surface gravity κ = c³/(4 G M) in s⁻¹.
pub fn surface_gravity(consts: &Constants, mass_kg: f64) -> Result<f64> {
    if !mass_kg.is_finite() || mass_kg <= 0.0 {
        return Err(Error::Domain(format!(
            "mass must be strictly positive, got {mass_kg}"
        )));
    }
    Ok(consts.c.powi(3) / (4.0 * consts.g * mass_kg))
}

/// Schwarzschild radius R_S = 2 G M / c² in meters.
pub fn schwarzschild_radius(consts: &Constants, mass_kg: f64) -> Result<f64> {
    if !mass_kg.is_finite() || mass_kg <= 0.0 {
        return Err(Error::Domain(format!(
            "mass must be strictly positive, got {mass_kg}"
        )));
    }
    Ok(2.0 * consts.g * mass_kg / consts.c.powi(2))
}

/// Proper acceleration of a static observer at `r` (in Schwarzschild radii),
/// in m/s². Diverges as r → 1⁺.
///
/// Geometrized form `a = √((∂_r f)²/(4f)) = (m/r²)/√f`, converted to SI.
pub fn proper_acceleration(consts: &Constants, r_over_rs: f64, mass_kg: f64) -> Result<f64> {
    if !r_over_rs.is_finite() || r_over_rs <= 1.0 {
        return Err(Error::Domain(format!(
            "r/R_S must be > 1 (horizon or interior rejected), got {r_over_rs}"
        )));
    }
    if !mass_kg.is_finite() || mass_kg <= 0.0 {
        return Err(Error::Domain(format!(
            "mass must be strictly positive, got {mass_kg}"
        )));
    }
    let f = 1.0 - 1.0 / r_over_rs;
    // a_geom = 1/(4 m_geom R²√f) with m_geom = GM/c² in meters; ×c² for SI.
    let m_geom = consts.g * mass_kg / consts.c.powi(2);
    Ok(consts.c.powi(2) / (4.0 * m_geom * r_over_rs.powi(2) * f.sqrt()))
}

/// Exact and approximate acceleration of the near-horizon static observer,
/// both in units of the surface gravity κ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryAcceleration {
    /// a₀/κ = (1 - f₀)²/√f₀.
    pub exact: f64,
    /// The near-horizon Rindler parameter a/κ ≈ 1/√f₀.
    pub approx: f64,
}

impl BoundaryAcceleration {
    /// exact/approx = (1 - f₀)² → 1 as R₀ → 1⁺.
    pub fn ratio(&self) -> f64 {
        self.exact / self.approx
    }

    /// |exact - approx|/approx = 1 - (1 - f₀)².
    pub fn relative_gap(&self) -> f64 {
        (self.exact - self.approx).abs() / self.approx
    }
}

/// Acceleration of a static observer at `R₀ = r₀/R_S`, exact and in the
/// near-horizon approximation, in κ units.
pub fn boundary_acceleration(r0_over_rs: f64) -> Result<BoundaryAcceleration> {
    if !r0_over_rs.is_finite() || r0_over_rs <= 1.0 {
        return Err(Error::Domain(format!(
            "R₀ must be > 1, got {r0_over_rs}"
        )));
    }
    let f0 = 1.0 - 1.0 / r0_over_rs;
    let sqrt_f0 = f0.sqrt();
    Ok(BoundaryAcceleration {
        exact: (1.0 - f0).powi(2) / sqrt_f0,
        approx: 1.0 / sqrt_f0,
    })
}

/// Convert a physical scenario to black-hole natural units:
/// `Ω = 2π ω_angular / κ`, `R₀ = (R_S + Δ₀)/R_S`.
pub fn to_natural(consts: &Constants, scenario: &PhysicalScenario) -> Result<NaturalScenario> {
    let kappa = surface_gravity(consts, scenario.mass_kg)?;
    let rs = schwarzschild_radius(consts, scenario.mass_kg)?;
    let omega = 2.0 * std::f64::consts::PI * scenario.angular_frequency() / kappa;
    let r0_over_rs = (rs + scenario.delta0_m) / rs;
    NaturalScenario::new(omega, r0_over_rs)
}

/// Squeezing parameters for a natural-unit scenario:
/// `tanh q_s = tan q_d = exp(-(Ω/2)√(1 - 1/R₀))`.
///
/// Emits a warning flag (never an error) when `Δ₀/R_S` exceeds
/// [`VALIDITY_THRESHOLD`], i.e. when the near-horizon Rindler approximation
/// is being stretched.
pub fn squeeze_params(scenario: &NaturalScenario) -> Result<SqueezeParams> {
    let NaturalScenario { omega, r0_over_rs } = *scenario;
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::Domain(format!("Ω must be > 0, got {omega}")));
    }
    if !r0_over_rs.is_finite() || r0_over_rs <= 1.0 {
        return Err(Error::Domain(format!("R₀ must be > 1, got {r0_over_rs}")));
    }
    let f0 = 1.0 - 1.0 / r0_over_rs;
    let t = (-(omega / 2.0) * f0.sqrt()).exp();
    let validity_ratio = r0_over_rs - 1.0;
    Ok(SqueezeParams {
        tanh_qs: t,
        tan_qd: t,
        qs: t.atanh(),
        qd: t.atan(),
        f0,
        validity_ratio,
        beyond_validity: validity_ratio > VALIDITY_THRESHOLD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const TEN_MICRO_SUN: f64 = 1.98892e25; // 1e-5 solar masses

    #[test]
    fn surface_gravity_si_arithmetic() {
        let c = Constants::default();
        // Independent oracle: direct SI arithmetic with the declared constants.
        let oracle = c.c * c.c * c.c / (4.0 * c.g * TEN_MICRO_SUN);
        let kappa = surface_gravity(&c, TEN_MICRO_SUN).unwrap();
        assert_relative_eq!(kappa, oracle, max_relative = 1e-15);
        assert_relative_eq!(kappa, 5.074e9, max_relative = 1e-3);

        let kappa_sun = surface_gravity(&c, c.m_sun).unwrap();
        assert_relative_eq!(kappa_sun, 5.074e4, max_relative = 1e-3);
    }

    #[test]
    fn surface_gravity_scales_inversely_with_mass() {
        let c = Constants::default();
        let k1 = surface_gravity(&c, TEN_MICRO_SUN).unwrap();
        let k2 = surface_gravity(&c, 2.0 * TEN_MICRO_SUN).unwrap();
        assert_relative_eq!(k2, k1 / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn surface_gravity_rejects_nonpositive_mass() {
        let c = Constants::default();
        assert!(matches!(surface_gravity(&c, 0.0), Err(Error::Domain(_))));
        assert!(matches!(surface_gravity(&c, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn schwarzschild_radius_si_arithmetic() {
        let c = Constants::default();
        let oracle = 2.0 * c.g * TEN_MICRO_SUN / (c.c * c.c);
        let rs = schwarzschild_radius(&c, TEN_MICRO_SUN).unwrap();
        assert_relative_eq!(rs, oracle, max_relative = 1e-15);
        assert_relative_eq!(rs, 2.954e-2, max_relative = 1e-3);
        assert_relative_eq!(
            schwarzschild_radius(&c, c.m_sun).unwrap(),
            2.954e3,
            max_relative = 1e-3
        );
        // Linearity.
        assert_relative_eq!(
            schwarzschild_radius(&c, 2.0 * TEN_MICRO_SUN).unwrap(),
            2.0 * rs,
            max_relative = 1e-15
        );
    }

    #[test]
    fn schwarzschild_radius_rejects_nonpositive_mass() {
        let c = Constants::default();
        assert!(schwarzschild_radius(&c, -2.0).is_err());
    }

    /// Central finite differences on f(r) = 1 - 2m/r reproduce
    /// a = √(g^rr) |∂_r f| / (2f) away from the horizon.
    #[test]
    fn proper_acceleration_matches_finite_difference_oracle() {
        let c = Constants::default();
        let mass = TEN_MICRO_SUN;
        let m_geom = c.g * mass / (c.c * c.c); // meters
        let f = |r: f64| 1.0 - 2.0 * m_geom / r;

        for r_over_rs in [1.2, 1.5, 2.0, 3.0, 10.0, 100.0] {
            let r = 2.0 * m_geom * r_over_rs;
            let h = r * 1e-6;
            let dfdr = (f(r + h) - f(r - h)) / (2.0 * h);
            // a_geom = √(g^rr) |∂_r f| / (2f) with g^rr = f; SI via ×c².
            let fr = f(r);
            let oracle = c.c * c.c * fr.sqrt() * dfdr.abs() / (2.0 * fr);
            let a = proper_acceleration(&c, r_over_rs, mass).unwrap();
            assert_relative_eq!(a, oracle, max_relative = 1e-6);
        }
    }

    #[test]
    fn proper_acceleration_limits_and_monotonicity() {
        let c = Constants::default();
        // Asymptotic flatness: a → 0 as r → ∞ (∝ 1/r² at large r).
        let far = proper_acceleration(&c, 1e15, TEN_MICRO_SUN).unwrap();
        assert!(far < 1e-9);
        // Strictly decreasing in r for r > 1.
        let mut prev = f64::INFINITY;
        for i in 0..200 {
            let r = 1.0 + 1e-6 + (i as f64) * 0.05;
            let a = proper_acceleration(&c, r, TEN_MICRO_SUN).unwrap();
            assert!(a < prev, "a not decreasing at r = {r}");
            prev = a;
        }
        // Horizon and interior rejected.
        assert!(proper_acceleration(&c, 1.0, TEN_MICRO_SUN).is_err());
        assert!(proper_acceleration(&c, 0.5, TEN_MICRO_SUN).is_err());
    }

    #[test]
    fn proper_acceleration_agrees_with_boundary_exact() {
        // The κ-unit exact boundary acceleration is the same physical quantity.
        let c = Constants::default();
        let mass = TEN_MICRO_SUN;
        let kappa_si = surface_gravity(&c, mass).unwrap() * c.c; // m/s² per κ-unit
        for r0 in [1.001, 1.05, 1.5, 4.0] {
            let a = proper_acceleration(&c, r0, mass).unwrap();
            let b = boundary_acceleration(r0).unwrap();
            assert_relative_eq!(a, b.exact * kappa_si, max_relative = 1e-12);
        }
    }

    #[test]
    fn boundary_acceleration_values() {
        let b = boundary_acceleration(1.01).unwrap();
        let f0 = 1.0 - 1.0 / 1.01;
        assert_relative_eq!(f0, 0.009901, max_relative = 1e-4);
        assert_relative_eq!(b.approx, 10.05, max_relative = 1e-3);
        assert_relative_eq!(b.ratio(), 0.9803, max_relative = 1e-4);

        let b2 = boundary_acceleration(2.0).unwrap();
        assert_relative_eq!(b2.approx, std::f64::consts::SQRT_2, max_relative = 1e-15);
        assert_relative_eq!(
            b2.exact,
            0.25 * std::f64::consts::SQRT_2,
            max_relative = 1e-15
        );

        assert!(boundary_acceleration(1.0).is_err());
        assert!(boundary_acceleration(0.9).is_err());
    }

    #[test]
    fn boundary_ratio_monotone_to_one_near_horizon() {
        // exact/approx → 1 as R₀ → 1⁺, monotonically on (1, 1.05].
        let mut prev = 0.0;
        for i in (1..=200).rev() {
            let r0 = 1.0 + 0.05 * (i as f64) / 200.0;
            let ratio = boundary_acceleration(r0).unwrap().ratio();
            assert!(ratio > prev);
            prev = ratio;
        }
        assert!((boundary_acceleration(1.0 + 1e-9).unwrap().ratio() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn to_natural_si_examples() {
        let c = Constants::default();
        // 1e-5 solar masses, Δ₀ = 1 cm.
        let s = PhysicalScenario::new(TEN_MICRO_SUN, 0.01, 1.5e6, FrequencyConvention::Ordinary)
            .unwrap();
        let n = to_natural(&c, &s).unwrap();
        assert_relative_eq!(n.r0_over_rs, 1.3386, max_relative = 2e-4);
        // Ω = 2π ω_ang / κ with ω_ang = 2π · 1.5e6.
        let kappa = surface_gravity(&c, TEN_MICRO_SUN).unwrap();
        let oracle = 2.0 * std::f64::consts::PI * (2.0 * std::f64::consts::PI * 1.5e6) / kappa;
        assert_relative_eq!(n.omega, oracle, max_relative = 1e-15);
        assert_relative_eq!(n.omega, 1.167e-2, max_relative = 1e-3);

        // Angular convention skips the 2π.
        let sa = PhysicalScenario::new(TEN_MICRO_SUN, 0.01, 1.5e6, FrequencyConvention::Angular)
            .unwrap();
        let na = to_natural(&c, &sa).unwrap();
        assert_relative_eq!(
            na.omega * 2.0 * std::f64::consts::PI,
            n.omega,
            max_relative = 1e-15
        );

        // Δ₀ → 0 ⇒ R₀ → 1.
        let tiny = PhysicalScenario::new(TEN_MICRO_SUN, 1e-12, 1.5e6, FrequencyConvention::Ordinary)
            .unwrap();
        let nt = to_natural(&c, &tiny).unwrap();
        assert!(nt.r0_over_rs - 1.0 < 1e-10);
    }

    #[test]
    fn squeeze_params_formula_values() {
        // Oracle: direct formula evaluation exp(-5·√(1 - 1/1.01)).
        let p = squeeze_params(&NaturalScenario::new(10.0, 1.01).unwrap()).unwrap();
        let oracle = (-5.0 * (1.0f64 - 1.0 / 1.01).sqrt()).exp();
        assert_relative_eq!(p.tanh_qs, oracle, max_relative = 1e-15);
        assert_relative_eq!(p.tanh_qs, 0.6080375767, max_relative = 1e-9);
        assert_eq!(p.tanh_qs, p.tan_qd);
        assert_relative_eq!(p.qs, p.tanh_qs.atanh(), max_relative = 1e-15);
        assert_relative_eq!(p.qd, p.tan_qd.atan(), max_relative = 1e-15);
        assert!(!p.beyond_validity);

        let p2 = squeeze_params(&NaturalScenario::new(2.0, 2.0).unwrap()).unwrap();
        assert_relative_eq!(p2.tanh_qs, 0.49307, max_relative = 1e-5);
        assert!(p2.beyond_validity); // R₀ = 2 is far outside Δ₀ ≲ 0.05 R_S
        assert_relative_eq!(p2.validity_ratio, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn squeeze_params_limits() {
        // R₀ → ∞ ⇒ tanh q → exp(-Ω/2).
        let p = squeeze_params(&NaturalScenario::new(3.0, 1e12).unwrap()).unwrap();
        assert_relative_eq!(p.tanh_qs, (-1.5f64).exp(), max_relative = 1e-10);
        // Ω → ∞ ⇒ tanh q → 0.
        let p2 = squeeze_params(&NaturalScenario::new(1e6, 2.0).unwrap()).unwrap();
        assert!(p2.tanh_qs < 1e-300);
        // Domain errors.
        assert!(NaturalScenario::new(0.0, 2.0).is_err());
        assert!(NaturalScenario::new(10.0, 1.0).is_err());
        assert!(squeeze_params(&NaturalScenario {
            omega: -1.0,
            r0_over_rs: 2.0
        })
        .is_err());
        assert!(squeeze_params(&NaturalScenario {
            omega: 1.0,
            r0_over_rs: 0.5
        })
        .is_err());
    }

    #[test]
    fn squeeze_params_bounds_and_monotonicity() {
        // 0 < tanh q < 1 and q_d ∈ (0, π/4) on a grid; strictly decreasing in
        // Ω at fixed R₀, strictly increasing as R₀ → 1⁺ at fixed Ω.
        let omegas = [0.5, 1.0, 2.0, 5.0, 10.0, 40.0];
        let r0s: Vec<f64> = (0..50).map(|i| 1.0 + 1e-6 * 1.35f64.powi(i)).collect();
        for &r0 in &r0s {
            let mut prev = f64::INFINITY;
            for &om in &omegas {
                let p = squeeze_params(&NaturalScenario::new(om, r0).unwrap()).unwrap();
                assert!(p.tanh_qs > 0.0 && p.tanh_qs < 1.0);
                assert!(p.qd > 0.0 && p.qd < std::f64::consts::FRAC_PI_4);
                assert!(p.tanh_qs < prev, "not decreasing in Ω");
                prev = p.tanh_qs;
            }
        }
        for &om in &omegas {
            let mut prev = 0.0;
            for &r0 in r0s.iter().rev() {
                let p = squeeze_params(&NaturalScenario::new(om, r0).unwrap()).unwrap();
                assert!(p.tanh_qs > prev, "not increasing toward the horizon");
                prev = p.tanh_qs;
            }
        }
    }

    #[test]
    fn natural_roundtrip_consistency() {
        // to_natural followed by squeeze_params equals squeeze_params of a
        // hand-converted NaturalScenario to 1 part in 1e12.
        let c = Constants::default();
        let s = PhysicalScenario::new(3.7e27, 0.153, 2.2e5, FrequencyConvention::Ordinary).unwrap();
        let via = squeeze_params(&to_natural(&c, &s).unwrap()).unwrap();

        let kappa = c.c.powi(3) / (4.0 * c.g * 3.7e27);
        let rs = 2.0 * c.g * 3.7e27 / c.c.powi(2);
        let hand = NaturalScenario::new(
            2.0 * std::f64::consts::PI * (2.0 * std::f64::consts::PI * 2.2e5) / kappa,
            (rs + 0.153) / rs,
        )
        .unwrap();
        let direct = squeeze_params(&hand).unwrap();
        assert_relative_eq!(via.tanh_qs, direct.tanh_qs, max_relative = 1e-12);
        assert_relative_eq!(via.f0, direct.f0, max_relative = 1e-12);
    }
}
