//! Products of iterated integrals as quasi-shuffles of bracket words.
//!
//! cargo run --example quasi_shuffle -- 1.2 3.4

use itolog::qshuffle::{qsh_expansions, shuffle};
use itolog::{half_down, half_up, bullet, qsh, qsh_via_surjections, shuffle_projection, BracketWord, Expansion};

fn main() -> itolog::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (u, v) = match args.as_slice() {
        [a, b, ..] => (BracketWord::parse_literal(a)?, BracketWord::parse_literal(b)?),
        _ => (BracketWord::parse_literal("1.2")?, BracketWord::parse_literal("3.4")?),
    };

    let product = qsh(&u, &v)?;
    println!("I_{{{u}}} I_{{{v}}} = {product}");
    println!("  {} terms, surjection form agrees: {}", product.len(), product == qsh_via_surjections(&u, &v)?);

    if !u.is_empty() && !v.is_empty() {
        println!("  last block from u:  {}", half_up(&u, &v)?);
        println!("  last block from v:  {}", half_down(&u, &v)?);
        println!("  joint last bracket: {}", bullet(&u, &v)?);
    }
    if u.has_singleton_blocks() && v.has_singleton_blocks() {
        let classical = shuffle(&u, &v)?;
        println!("  bracket-free part is the shuffle: {}", shuffle_projection(&product) == classical);
    }

    // (I_1)^3 = 6 I_111 + 3 I_{[1,1]1} + 3 I_{1[1,1]} + I_{[1,1,1]}
    let x = Expansion::from_word(BracketWord::from_letters(&[1])?);
    let cube = qsh_expansions(&qsh_expansions(&x, &x)?, &x)?;
    println!("(I_1)^3 = {cube}");
    Ok(())
}
