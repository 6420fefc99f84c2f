//! Quotient singularities of the standard finite group actions on 4-tori.
//!
//! Usage: `cargo run --example torus_singularities -- [group] [lattice]`

use kummerlat::torus::{
    abcd, default_lattice, fixed_points, q8hat_elements, singularity_configuration, standard_group_on,
    TorusLattice, STANDARD_GROUPS,
};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let names: Vec<&str> = match args.first() {
        Some(g) => vec![g.as_str()],
        None => STANDARD_GROUPS.iter().map(|(g, _)| *g).collect(),
    };
    for name in names {
        let lattice = match args.get(1) {
            Some(l) => TorusLattice::by_name(l),
            None => default_lattice(name),
        }
        .expect("known lattice");
        let group = standard_group_on(name, lattice).expect("group closes");
        match singularity_configuration(&group) {
            Ok(report) => print!("{}", report.to_text()),
            Err(e) => println!("group {name} (order {}): {e}", group.order()),
        }
    }

    if args.is_empty() {
        let (i, j, k) = q8hat_elements();
        for (label, g) in [("i", i), ("j'", j), ("k'", k)] {
            let pts: Vec<String> = fixed_points(&g).points().iter().filter_map(abcd).collect();
            println!("Fix({label}) = {{{}}}", pts.join(", "));
        }
    }
}
