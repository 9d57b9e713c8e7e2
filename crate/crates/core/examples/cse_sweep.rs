//! Coupled spring-mass chain of `l` masses, LQ gain `Q = I`, `R = r I`,
//! dispatched branch against the forward baseline. Prints the sweep CSV.
//! `r = 0` (cheap control) puts two closed-loop eigenvalues at zero.
//!
//!     cargo run --release --example cse_sweep -- [l_max] [r]

use mpiset::bench::{run_cse_sweep, write_sweep_csv, CseParams, GainMode};
use mpiset::{MpiOptions, Result};

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let l_max: usize = args.next().map_or(6, |s| s.parse().expect("l_max"));
    let r: f64 = args.next().map_or(1.0, |s| s.parse().expect("r"));
    let ells: Vec<usize> = (2..=l_max).collect();
    let rows = run_cse_sweep(&ells, &CseParams::new(2), GainMode::Riccati { q: 1.0, r }, &MpiOptions::default())?;
    write_sweep_csv(&rows, std::io::stdout())
}
