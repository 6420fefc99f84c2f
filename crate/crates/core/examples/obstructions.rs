//! Runs the nonexistence checks on every configuration of the m = 24 census,
//! or on the configurations given on the command line.

use kummerlat::ade::{enumerate_configs, AdeConfig};
use kummerlat::divisibility::check_nonexistence;
use num_rational::BigRational;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let configs: Vec<AdeConfig> = if args.is_empty() {
        enumerate_configs(&BigRational::from_integer(24.into()), 19)
    } else {
        args.iter().map(|a| a.parse().expect("valid configuration")).collect()
    };
    for config in configs {
        let report = check_nonexistence(&config).expect("checks run on rank <= 64");
        let mut kinds: Vec<&str> = Vec::new();
        for step in report.excluding_steps() {
            if !kinds.contains(&step.kind()) {
                kinds.push(step.kind());
            }
        }
        println!("{:<22} {:<18} {}", config.to_string(), report.verdict.as_str(), kinds.join(", "));
        for cover in report.cover_configs() {
            println!("{:<22}   double cover {cover}", "");
        }
    }
}
