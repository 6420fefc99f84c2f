//! Enumerates ADE configurations with a given m-value and rank bound.
//!
//! Usage: `cargo run --example census -- [m] [max_rank]` (defaults 24 and 19).

use kummerlat::ade::enumerate_configs;
use kummerlat::kummer::KummerGroup;
use kummerlat::lattice::{parse_rational, rational_to_string};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let m = parse_rational(args.first().map_or("24", String::as_str)).expect("m must be a rational number");
    let max_rank: usize = args.get(1).map_or(Ok(19), |s| s.parse()).expect("max_rank must be an integer");

    let table: Vec<_> = KummerGroup::ALL.iter().map(|g| (g.config(), g.name())).collect();
    let configs = enumerate_configs(&m, max_rank);
    for c in &configs {
        let source = table.iter().find(|(t, _)| t == c).map_or("", |(_, g)| g);
        println!("{:<22} rank {:>2}  {}", c.to_string(), c.rank(), source);
    }
    println!("{} configurations with m = {} and rank <= {max_rank}", configs.len(), rational_to_string(&m));
}
