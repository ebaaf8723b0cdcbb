//! Walk the full pipeline at N = 2: prepare every Z-state, read its syndrome
//! out non-destructively, then reproduce the bundled reference fidelity.
//!
//! Run with `cargo run -p zsim-core --example walkthrough`.

use zsim_core::discriminator::discriminate;
use zsim_core::fixtures::{reversed_z2_1, rho_run_state};
use zsim_core::tomography::{fidelity_pure, FidelityConvention};
use zsim_core::zstates::zstate_vector;

fn main() -> zsim_core::Result<()> {
    println!("k  state (x2 amplitudes)  syndrome  post-fidelity");
    for k in 0..4 {
        let psi = zstate_vector(2, k)?;
        let signs: Vec<i8> = psi
            .amplitudes()
            .iter()
            .map(|a| (a.re * 2.0).round() as i8)
            .collect();
        let run = discriminate(&psi, 7)?;
        println!(
            "{}  {:<21} {}        {:.12}",
            k,
            format!("{signs:?}"),
            run.syndrome,
            run.post_state.overlap_sq(&psi)?
        );
    }

    let f = fidelity_pure(&reversed_z2_1(), &rho_run_state(), FidelityConvention::Sqrt)?;
    println!("\nreference hardware-run matrix vs reversed |Z_2^1>: F = {f:.4}");
    Ok(())
}
