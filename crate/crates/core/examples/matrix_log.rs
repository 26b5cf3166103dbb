//! Entry-wise logarithm of the Itô–Taylor series of `dX = X_- dM` for a
//! matrix semimartingale, checked against the exponential.
//!
//! cargo run --example matrix_log -- [dim] [order]

use itolog::ito::{matrix_exp, matrix_ito_taylor, matrix_log};

fn main() -> itolog::Result<()> {
    let mut args = std::env::args().skip(1);
    let dim: usize = args.next().map_or(2, |a| a.parse().expect("dimension"));
    let order: usize = args.next().map_or(2, |a| a.parse().expect("order"));

    let taylor = matrix_ito_taylor(dim, order)?;
    let log = matrix_log(dim, order)?;
    println!("Itô–Taylor series through order {order}:\n{}\n", taylor.to_text());
    println!("logarithm:\n{}\n", log.to_text());

    let terms: usize = log.entries.iter().flatten().map(|e| e.len()).sum();
    println!("{terms} terms in the logarithm");
    println!("exp(log) = Taylor: {}", matrix_exp(&log, order)? == taylor);
    Ok(())
}
