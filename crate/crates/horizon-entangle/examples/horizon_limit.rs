//! The horizon limit R₀ → 1: scalar entanglement dies, Dirac entanglement
//! survives at a value independent of the mode frequency.
//!
//! ```bash
//! cargo run --release --example horizon_limit
//! ```

use horizon_entangle::fock::{outer, partial_trace};
use horizon_entangle::geometry::{squeeze_params, NaturalScenario};
use horizon_entangle::measures::{negativity, scalar_ar_blockwise};
use horizon_entangle::states::{choose_nmax, dirac_entangled};

fn main() {
    // Dirac: follow several Ω down to the horizon; all paths converge to the
    // same surviving negativity.
    println!("Dirac N_AR along R₀ → 1:");
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "Ω", "R₀-1=1e-3", "1e-6", "1e-9", "limit");
    for omega in [2.0, 10.0, 40.0] {
        let mut row = format!("{omega:>6}");
        for eps in [1e-3, 1e-6, 1e-9] {
            let p = squeeze_params(&NaturalScenario::new(omega, 1.0 + eps).unwrap()).unwrap();
            let state = dirac_entangled(p.tan_qd).unwrap();
            let n = negativity(&partial_trace(&outer(&state), &[0, 1]).unwrap()).unwrap();
            row.push_str(&format!(" {n:>12.9}"));
        }
        // The limit point itself: tan q_d → 1 exactly.
        let state = dirac_entangled(1.0).unwrap();
        let n = negativity(&partial_trace(&outer(&state), &[0, 1]).unwrap()).unwrap();
        row.push_str(&format!(" {n:>12.9}"));
        println!("{row}");
    }

    // Scalar: the same limit sends the Alice–Rob negativity to zero.
    println!("\nscalar N_AR as tanh q_s → 1 (certified truncations):");
    for tanh in [0.5, 0.9, 0.99, 0.999] {
        let tol = if tanh > 0.99 { 3e-3 } else { 1e-9 };
        let trunc = choose_nmax(tanh, tol).unwrap();
        println!(
            "  tanh q_s = {tanh:<6} n_max = {:<5} N_AR = {:.6e}",
            trunc.n_max,
            scalar_ar_blockwise(tanh, &trunc).unwrap()
        );
    }
}
