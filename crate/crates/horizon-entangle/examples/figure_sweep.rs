//! Run the natural-unit figure presets and write their CSV files:
//! CCA negativities vs R₀ (fig3 scalar, fig4 Dirac) and across-horizon RR̄
//! negativities (fig5 scalar, fig6 Dirac).
//!
//! ```bash
//! cargo run --release --example figure_sweep
//! ```

use std::fs::File;
use std::time::Instant;

use horizon_entangle::constants::Constants;
use horizon_entangle::sweeps::{figure_presets, run_sweep, write_csv};

fn main() {
    let consts = Constants::default();
    let presets = figure_presets();
    for name in ["fig3", "fig4", "fig5", "fig6"] {
        let t0 = Instant::now();
        let rows = run_sweep(&presets[name], &consts).unwrap();
        let unconverged = rows.iter().filter(|r| !r.converged).count();
        let path = format!("{name}.csv");
        let mut file = File::create(&path).unwrap();
        write_csv(&rows, &mut file).unwrap();
        println!(
            "{name}: {} rows ({} unconverged) -> {path}  [{:.2} s]",
            rows.len(),
            unconverged,
            t0.elapsed().as_secs_f64()
        );
    }
    println!("\nplot e.g. with: python -c \"import pandas as pd; ...\" or any CSV tool");
}
