//! Evaluate all three bipartitions at a single parameter point, for both
//! field types.
//!
//! ```bash
//! cargo run --release --example point
//! ```

use horizon_entangle::geometry::{squeeze_params, NaturalScenario};
use horizon_entangle::measures::analyze_all;
use horizon_entangle::states::{choose_nmax, dirac_entangled, scalar_entangled};

fn main() {
    let scenario = NaturalScenario::new(10.0, 1.01).unwrap();
    let params = squeeze_params(&scenario).unwrap();
    println!(
        "Ω = {}, R₀ = {}  →  tanh q_s = tan q_d = {:.12}",
        scenario.omega, scenario.r0_over_rs, params.tanh_qs
    );

    // Dirac: exact four-dimensional mode space.
    let dirac = dirac_entangled(params.tan_qd).unwrap();
    let reports = analyze_all(&dirac, None).unwrap();
    println!("\nDirac field:");
    for r in &reports {
        println!(
            "  {:<6} negativity {:.12}  mutual information {:.12}",
            r.bipartition.label(),
            r.negativity,
            r.mutual_information
        );
    }
    println!(
        "  conservation: N_AR + N_ARbar = {:.15}",
        reports[0].negativity + reports[1].negativity
    );

    // Scalar: certified truncation of the infinite squeezed series.
    let trunc = choose_nmax(params.tanh_qs, 1e-9).unwrap();
    let scalar = scalar_entangled(params.tanh_qs, &trunc);
    let reports = analyze_all(&scalar, Some(&trunc)).unwrap();
    println!(
        "\nScalar field (n_max = {}, tail bound {:.2e}):",
        trunc.n_max, trunc.tail_bound
    );
    for r in &reports {
        println!(
            "  {:<6} negativity {:.12}  mutual information {:.12}",
            r.bipartition.label(),
            r.negativity,
            r.mutual_information
        );
    }
    println!(
        "  conservation: I_AR + I_ARbar = {:.12}",
        reports[0].mutual_information + reports[1].mutual_information
    );
}
