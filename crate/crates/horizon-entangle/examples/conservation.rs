//! Verify the two conservation laws over near-horizon grids:
//!
//! * Dirac negativity:        N_AR + N_ARbar = 1/2 at every point,
//! * mutual information:      I_AR + I_ARbar = 2 for both fields.
//!
//! ```bash
//! cargo run --release --example conservation
//! ```

use horizon_entangle::constants::Constants;
use horizon_entangle::sweeps::{
    default_r0_grid, run_sweep, verify_conservation, Field, SweepSpec, PRESET_OMEGAS,
};

fn main() {
    let consts = Constants::default();
    for field in [Field::Dirac, Field::Scalar] {
        let mut spec = SweepSpec::natural(field, PRESET_OMEGAS.to_vec(), default_r0_grid());
        spec.tolerance = 1e-9;
        let rows = run_sweep(&spec, &consts).unwrap();
        let report = verify_conservation(&rows);
        println!("=== {} field, {} grid points ===", field.label(), rows.len());
        print!("{report}");
        println!(
            "overall: {}\n",
            if report.pass() { "PASS" } else { "FAIL" }
        );
    }
}
