//! Configurations C with m(C) = 12 whose double 2C survives the obstruction
//! engine, and the Lieberman involution on a product of elliptic curves.

use kummerlat::divisibility::doubling_filter;
use kummerlat::lattice::RationalVector;
use kummerlat::torus::lieberman_check;
use num_rational::BigRational;

fn main() {
    let survivors = doubling_filter(&BigRational::from_integer(12.into()), 9).expect("checks run");
    for c in &survivors {
        println!("{c}  (double {})", c.scale(2));
    }

    let e1 = RationalVector::from_fraction(&[1, 0], 2);
    let e2 = RationalVector::from_fraction(&[0, 1], 2);
    let report = lieberman_check(&e1, &e2).expect("2-torsion input");
    println!("tau fixed locus: {}", report.tau_fixed.describe());
    println!("-tau fixed locus: {}", report.minus_tau_fixed.describe());
    println!("fixed points of -1: {}", report.minus_one_fixed_points);
    match report.quotient_config() {
        Some(c) => println!("quotient configuration: {c}"),
        None => println!("quotient is not an ADE orbifold"),
    }
    println!("passes: {}", report.passes());
}
