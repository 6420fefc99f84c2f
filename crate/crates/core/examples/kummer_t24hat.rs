//! The lattice K generated by the curves of 4A2 + 2A3 + A5 and a class
//! gamma = (1/3) sum (C^1 + 2 C^2) over six A2 chains.

use kummerlat::kummer::{build_k_t24hat, t24hat_glue, t24hat_integral_orientations};

fn main() {
    let orientations = t24hat_integral_orientations();
    println!("{} of 64 orientations of the six A2 chains are integral", orientations.len());
    if let Some(first) = orientations.first() {
        println!("first: {first:?} -> gamma = {}", t24hat_glue(first));
    }
    let report = build_k_t24hat().expect("an integral orientation exists");
    print!("{}", report.to_text());
}
