//! The surjection algebra: the ◇ product, descent classes, and the
//! logarithm of the identity series in its three equivalent forms.
//!
//! cargo run --example surjection_algebra -- [grade]

use std::time::Instant;

use itolog::coeff::int;
use itolog::surjection::{
    d_subseteq, descent_count, diamond, exp_element, identity_series, iota, log_identity_closed_form,
    log_identity_series, log_identity_subset_form, strichartz_restriction, Composition, Surjection,
};

fn main() -> itolog::Result<()> {
    let grade: usize = std::env::args().nth(1).map_or(4, |a| a.parse().expect("grade"));

    let f = Surjection::new(vec![1, 2])?;
    let g = Surjection::new(vec![1])?;
    println!("(12) ◇ (1) = {}", diamond(&f, &g)?);

    let c = Composition::new(vec![1, 2])?;
    println!("ι(1_(1,2)) = {}", iota(&c)?);
    println!("D_⊆{{1}} in arity 3 = {}", d_subseteq(3, &[1])?);

    let start = Instant::now();
    let closed = log_identity_closed_form(grade)?;
    let series = log_identity_series(grade)?;
    let subset = log_identity_subset_form(grade)?;
    println!(
        "\nlog(I) through grade {grade}: {} terms, series = closed: {}, subset = closed: {} ({:.1?})",
        closed.len(),
        series == closed,
        subset == closed,
        start.elapsed()
    );
    for n in 1..=grade.min(3) {
        println!("  grade {n}: {}", closed.grade(n));
    }
    for (f, c) in closed.grade(grade.min(3)).iter().take(4) {
        println!("  {f}: {} descents, coefficient {c}", descent_count(f));
    }

    let mut expected = identity_series(grade);
    expected.add_term(Surjection::unit(), int(1));
    println!("exp(log I) = I: {}", exp_element(&closed, grade)? == expected);
    println!("bijection part through grade 3: {}", strichartz_restriction(3)?);
    Ok(())
}
