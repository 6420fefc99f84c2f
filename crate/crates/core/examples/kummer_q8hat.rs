//! The lattice K generated by the curves of A1 + 6A3 and the two glue
//! classes delta_1, delta_2.

use kummerlat::kummer::build_k_q8hat;

fn main() {
    let report = build_k_q8hat().expect("glue classes are admissible");
    print!("{}", report.to_text());
    let k = report.lattice.as_ref().expect("overlattice is built");
    println!("Gram matrix of K in its Hermite basis:");
    println!("{:?}", k.lattice.gram());
    println!("all checks pass: {}", report.all_checks_pass());
}
