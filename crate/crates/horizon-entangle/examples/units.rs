//! Convert a physical black-hole scenario (SI units) to the dimensionless
//! coordinates that control the physics, and check the validity of the
//! near-horizon approximation.
//!
//! ```bash
//! cargo run --release --example units
//! ```

use horizon_entangle::constants::{Constants, SOLAR_MASS};
use horizon_entangle::geometry::{
    boundary_acceleration, proper_acceleration, schwarzschild_radius, squeeze_params,
    surface_gravity, to_natural, FrequencyConvention, PhysicalScenario,
};

fn main() {
    let consts = Constants::default();
    let mass = 1e-5 * SOLAR_MASS;
    let scenario =
        PhysicalScenario::new(mass, 0.01, 1.5e6, FrequencyConvention::Ordinary).unwrap();

    let rs = schwarzschild_radius(&consts, mass).unwrap();
    let kappa = surface_gravity(&consts, mass).unwrap();
    println!("black-hole mass      {:.4e} kg (1e-5 solar masses)", mass);
    println!("Schwarzschild radius {:.6e} m", rs);
    println!("surface gravity      {:.6e} 1/s", kappa);

    let nat = to_natural(&consts, &scenario).unwrap();
    let params = squeeze_params(&nat).unwrap();
    println!("\nΩ  = {:.6e}", nat.omega);
    println!("R₀ = {:.12}", nat.r0_over_rs);
    println!("f₀ = {:.12}", params.f0);
    println!("tanh q = {:.12}", params.tanh_qs);
    println!(
        "Δ₀/R_S = {:.4} → {}",
        params.validity_ratio,
        if params.beyond_validity {
            "outside the Rindler-approximation regime"
        } else {
            "within the near-horizon regime"
        }
    );

    // The static observer's acceleration, exact vs near-horizon form.
    let acc = boundary_acceleration(nat.r0_over_rs).unwrap();
    println!(
        "\nstatic observer acceleration: exact {:.6} κ, approx {:.6} κ (ratio {:.6})",
        acc.exact,
        acc.approx,
        acc.ratio()
    );
    let a_si = proper_acceleration(&consts, nat.r0_over_rs, mass).unwrap();
    println!("in SI units: {:.6e} m/s²", a_si);
}
