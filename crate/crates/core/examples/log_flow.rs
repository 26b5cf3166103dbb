//! The logarithm of the flow of `dY = Σ V_i(Y) dX^i` as templates over
//! iterated integrals, and its instantiation for concrete drivers.
//!
//! cargo run --example log_flow -- [order] [drivers]

use itolog::ito::{format_log_flow, instantiate_all, log_flow_terms, DriverAlphabet};

fn main() -> itolog::Result<()> {
    let mut args = std::env::args().skip(1);
    let order: usize = args.next().map_or(3, |a| a.parse().expect("order"));
    let drivers: usize = args.next().map_or(2, |a| a.parse().expect("driver count"));

    let continuous = DriverAlphabet::standard(drivers)?;
    let terms = log_flow_terms(&continuous, order)?;
    println!("continuous drivers, {} templates:", terms.len());
    println!("{}\n", format_log_flow(&terms));

    let general = log_flow_terms(&DriverAlphabet::general(drivers)?, order)?;
    println!("general semimartingales: {} templates", general.len());

    // letters N+1..2N stand for the quadratic variations [X^i, X^i]
    println!("\ninstantiated for {drivers} continuous drivers, cross brackets zero:");
    for (word, e) in instantiate_all(&terms, &continuous)?.iter().filter(|(w, _)| w.len() <= 2) {
        let ops: Vec<String> = word.iter().map(|i| format!("V_{i}")).collect();
        println!("  {}: {e}", ops.join(" "));
    }
    Ok(())
}
