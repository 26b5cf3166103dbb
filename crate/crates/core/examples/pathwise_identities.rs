//! Symbolic identities evaluated on simulated Brownian, Poisson and drift
//! paths, where left-point sums make them hold exactly.
//!
//! cargo run --example pathwise_identities -- [seed] [steps]

use itolog::numeric::{evaluate, evaluate_word, Grid};
use itolog::verify::{brownian_triple_bracket, five_term_defect, mixed_binding, pathwise_qsh_defect, poisson_triple_bracket};
use itolog::{qsh, BracketWord};

fn main() -> itolog::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map_or(1, |a| a.parse().expect("seed"));
    let steps: usize = args.next().map_or(4096, |a| a.parse().expect("step count"));

    // letter 1: Brownian, 2: Poisson(3), 3: drift
    let binding = mixed_binding(&Grid::uniform(1.0, steps)?, seed, 0)?;
    let u = BracketWord::parse_literal("1.[2,3]")?;
    let v = BracketWord::parse_literal("2.1")?;
    let lhs = evaluate(&qsh(&u, &v)?, &binding)?;
    let rhs = evaluate_word(&u, &binding)? * evaluate_word(&v, &binding)?;
    println!("I_{{{u}}} I_{{{v}}} = {rhs:.12}, quasi-shuffle side {lhs:.12}");
    println!("worst relative defect, word pairs of weight <= 3: {:.2e}", pathwise_qsh_defect(&binding, 3, 3)?);
    println!("five-term product defect: {:.2e}", five_term_defect(&binding)?);

    let (gap, resolving) = poisson_triple_bracket(seed, steps, 100, 2.0)?;
    println!("[[N,N],N] - N on {resolving} jump-resolving Poisson paths: {gap:.1e}");
    let (coarse, fine) = brownian_triple_bracket(seed, steps / 4, 100)?;
    println!("mean |[[W,W],W]|: {coarse:.3e} coarse, {fine:.3e} on the 4x finer grid");
    Ok(())
}
