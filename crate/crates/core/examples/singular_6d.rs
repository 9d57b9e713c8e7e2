//! A 6D closed loop with a triple eigenvalue at zero. The backward recurrence
//! cannot run (no inverse), so the dynamics are split with an ordered Schur
//! form, the invariant set of the 3D invertible part is computed and lifted
//! back. The forward-power reference gives the same set.
//!
//!     cargo run --release --example singular_6d [phi_z.csv]

use std::path::Path;

use mpiset::bench::{emit_plot_data, ProblemFile};
use mpiset::matops::eig_block_diag;
use mpiset::mpi::{mpi_oracle_forward, schur_split};
use mpiset::polyset::equals_h;
use mpiset::Result;

fn main() -> Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/singular6d.json");
    let problem = ProblemFile::load(&path)?.resolve()?;
    let a_cl = problem.closed_loop()?;

    let split = schur_split(&a_cl, problem.opts.eps_zero, problem.opts.tol_nil)?;
    println!("d1 = {}, d2 = {}, p = {}", split.d1, split.d2, split.p);
    let eig: Vec<String> = eig_block_diag(&split.s11)?.iter().map(|z| format!("{:.4}", z.re)).collect();
    println!("eig(S11) = [{}]", eig.join(", "));
    println!("||S22^(p+1)|| = {:.2e}", mpiset::matops::mat_power(&split.s22, split.p + 1)?.norm());
    println!("T = {:.3}", split.t);

    let r = problem.solve()?;
    let run = r.reduced.as_ref().expect("singular branch");
    println!(
        "{} branch: k_bar = {}, q = {}, horizon {}, {:.1} ms",
        r.branch.as_str(),
        r.k_bar,
        r.q_bar().unwrap_or(0),
        run.horizon,
        r.wall_time.as_secs_f64() * 1e3
    );

    let oracle = mpi_oracle_forward(&a_cl, &problem.xbar_h()?, problem.opts.k_max)?;
    let same = equals_h(r.set.as_h().unwrap(), oracle.set.as_h().unwrap(), 1e-6)?;
    println!("forward reference: k_bar = {}, q = {}, same set: {same}", oracle.k_bar, oracle.q_bar().unwrap_or(0));

    if let Some(out) = std::env::args().nth(1) {
        let n = emit_plot_data(run.phi_z.as_ref().unwrap(), Path::new(&out))?;
        println!("{n} vertices of the reduced set written to {out}");
    }
    Ok(())
}
