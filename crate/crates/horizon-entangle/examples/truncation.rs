//! Certified truncation of the scalar Fock series: how the occupation cutoff
//! grows as the squeezing approaches the horizon limit, and how the
//! doubling-based convergence recheck behaves.
//!
//! ```bash
//! cargo run --release --example truncation
//! ```

use horizon_entangle::states::{choose_nmax, one_particle_tail, vacuum_tail};
use horizon_entangle::sweeps::{
    convergence_recheck, run_sweep, Field, GridSpec, Spacing, SweepSpec,
};

fn main() {
    println!("tanh q_s   n_max(1e-6)  n_max(1e-9)  n_max(1e-12)");
    for tanh in [0.1, 0.5, 0.9, 0.99, 0.999] {
        let cols: Vec<String> = [1e-6, 1e-9, 1e-12]
            .iter()
            .map(|&tol| match choose_nmax(tanh, tol) {
                Ok(t) => format!("{:>11}", t.n_max),
                Err(_) => format!("{:>11}", "infeasible"),
            })
            .collect();
        println!("{tanh:<10} {}", cols.join("  "));
    }

    // The closed-form tails behind the certification.
    println!("\ntails at tanh q_s = 0.9, n_max = 50:");
    println!("  vacuum       {:.3e}", vacuum_tail(0.9, 50));
    println!("  one-particle {:.3e}", one_particle_tail(0.9, 50));

    // Convergence recheck: doubling n_max must not move converged measures.
    let mut spec = SweepSpec::natural(
        Field::Scalar,
        vec![5.0],
        GridSpec {
            min: 1.001,
            max: 1.1,
            count: 3,
            spacing: Spacing::LogOffsetFromOne,
        },
    );
    spec.tolerance = 1e-8;
    let rows = run_sweep(&spec, &horizon_entangle::constants::Constants::default()).unwrap();
    println!("\nconvergence recheck at tolerance 1e-8:");
    for row in &rows {
        let refined = convergence_recheck(&row, spec.tolerance).unwrap();
        println!(
            "  R₀ = {:.4}: n_max {} -> {}, N_AR moved by {:.2e}, converged: {}",
            row.r0_over_rs,
            row.nmax,
            refined.nmax,
            (row.neg[0].unwrap() - refined.neg[0].unwrap()).abs(),
            refined.converged
        );
    }
}
