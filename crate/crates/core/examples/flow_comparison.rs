//! Strong error of exp(truncated log) and of the truncated Itô–Taylor series
//! against the left-point recursion for `dX = X dM`, `M_t = A t + B W_t`.
//!
//! cargo run --release --example flow_comparison -- [paths] [steps]

use std::time::Instant;

use itolog::numeric::{flow_study, FlowProblem};

fn main() -> itolog::Result<()> {
    let mut args = std::env::args().skip(1);
    let paths: usize = args.next().map_or(1000, |a| a.parse().expect("path count"));
    let steps: usize = args.next().map_or(1 << 14, |a| a.parse().expect("step count"));
    let problem = FlowProblem::rotation_shear(0.1, steps)?;

    let start = Instant::now();
    let study = flow_study(&problem, 3, paths, 2024)?;
    println!("A = [[0, 1], [-1, 0]], B = [[1, 0], [0, -1]], T = 0.1, {steps} steps, {paths} paths");
    println!("order  exp(log) err  taylor err   gap          graded identity");
    for o in &study.orders {
        println!(
            "{:>5}  {:.4e}    {:.4e}   {:.4e}   {:.2e}",
            o.order, o.log_error, o.taylor_error, o.log_taylor_gap, o.graded_identity_error
        );
    }
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
