//! Discriminant group, root count and length bound of an ADE lattice.
//!
//! Usage: `cargo run --example discriminant -- "4A2+2A3+A5"`

use kummerlat::ade::AdeConfig;
use kummerlat::lattice::{describe_factors, discriminant_group, length_bound_check};
use kummerlat::roots::enumerate_roots;

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "4A2+2A3+A5".to_string());
    let config: AdeConfig = text.parse().unwrap_or_else(|e| panic!("cannot parse {text:?}: {e}"));
    let lattice = config.gram();

    let disc = discriminant_group(&lattice).expect("ADE lattices are nondegenerate");
    println!("{config}: rank {}, det {}", lattice.rank(), lattice.determinant());
    println!("discriminant group {} (order {})", disc.describe(), disc.order());
    println!("closed form        {}", describe_factors(&config.closed_form_disc()));
    for (g, q) in disc.generators.iter().zip(&disc.q_values) {
        println!("  generator {g}  q = {}", kummerlat::lattice::rational_to_string(q));
    }

    let roots = enumerate_roots(&lattice).expect("negative definite");
    println!("{} root pairs", roots.pair_count());

    let check = length_bound_check(&lattice, 22).expect("nondegenerate");
    println!(
        "length {} against bound {}: {}",
        check.length,
        check.bound,
        if check.holds { "fits in a K3 lattice as is" } else { "needs an overlattice" }
    );
}
