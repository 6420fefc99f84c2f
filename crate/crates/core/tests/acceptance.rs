//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test --test acceptance`; the process exits nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::SeedableRng;

use kummerlat::ade::{enumerate_configs, invariant_factors_from_cyclic, AdeConfig, Component};
use kummerlat::divisibility::{check_nonexistence, doubling_filter, Verdict};
use kummerlat::kummer::{build_f, build_k_q8hat, build_k_t24hat, KummerGroup};
use kummerlat::lattice::{discriminant_group, RationalVector};
use kummerlat::torus::{
    abcd, fixed_points, lieberman_check, q8hat_elements, singularity_configuration, standard_group,
};

const TABLE: [&str; 10] = [
    "16A1",
    "9A2",
    "6A1+4A3",
    "5A1+4A2+A5",
    "2A1+3A3+2D4",
    "3A1+4D4",
    "A1+6A3",
    "A1+2A2+3A3+D5",
    "A1+4A2+D4+E6",
    "4A2+2A3+A5",
];

const EXCLUDED: [&str; 8] = [
    "11A1+2A3",
    "6A1+2A2+A3+D5",
    "7A1+A3+2D4",
    "A1+4A2+2D5",
    "2A1+2A2+2D4+D5",
    "5A1+A3+A7+D4",
    "5A1+A3+A4+D7",
    "5A1+A2+D4+D8",
];

fn configs(names: &[&str]) -> Vec<AdeConfig> {
    names.iter().map(|s| s.parse().expect("valid configuration")).collect()
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn census() -> Result<String, String> {
    let mut found = enumerate_configs(&int(24), 19);
    let mut expected = configs(&TABLE);
    expected.extend(configs(&EXCLUDED));
    found.sort();
    expected.sort();
    ensure(found.len() == 18, format!("{} configurations", found.len()))?;
    ensure(found == expected, "census differs from the 10 table rows plus the 8 excluded configurations")?;
    Ok("18 configurations, equal to the table plus C1..C8".to_string())
}

fn m_values() -> Result<String, String> {
    let mut all = configs(&TABLE);
    all.extend(configs(&EXCLUDED));
    for c in &all {
        ensure(c.m_value() == int(24), format!("m({c}) = {}", c.m_value()))?;
    }
    for c in configs(&["8A1", "3A1+2A3"]) {
        ensure(c.scale(2).m_value() == int(24), format!("m(2({c})) is not 24"))?;
    }
    Ok("m = 24 for all 18 and for 2(8A1), 2(3A1+2A3)".to_string())
}

fn kummer_q8hat() -> Result<String, String> {
    let f = build_f(KummerGroup::Q8Hat);
    let disc_f = discriminant_group(&f).map_err(|e| e.to_string())?;
    ensure(disc_f.invariant_factors == invariant_factors_from_cyclic(&[2, 4, 4, 4, 4, 4, 4]), "disc(F)")?;
    ensure(disc_f.order() == BigInt::from(8192), "|disc(F)| != 8192")?;
    let r = build_k_q8hat().map_err(|e| e.to_string())?;
    ensure(r.index == Some(BigInt::from(16)), "index")?;
    ensure(r.disc_k == Some(ints(&[2, 4, 4])), "disc(K)")?;
    ensure(r.root_pairs_f == 37 && r.root_pairs_k == Some(37), "root pairs")?;
    ensure(r.roots_equal == Some(true), "roots(K) != roots(F)")?;
    ensure(r.all_checks_pass(), "lattice checks")?;
    Ok("index 16, disc K (2,4,4), 37 root pairs, roots(K) = roots(F)".to_string())
}

fn kummer_t24hat() -> Result<String, String> {
    let f = build_f(KummerGroup::T24Hat);
    let disc_f = discriminant_group(&f).map_err(|e| e.to_string())?;
    ensure(disc_f.invariant_factors == invariant_factors_from_cyclic(&[3, 3, 3, 3, 4, 4, 6]), "disc(F)")?;
    let r = build_k_t24hat().map_err(|e| e.to_string())?;
    ensure(r.index == Some(BigInt::from(3)), "index")?;
    ensure(r.disc_k == Some(ints(&[6, 12, 12])), "disc(K)")?;
    ensure(r.root_pairs_f == 39 && r.root_pairs_k == Some(39), "root pairs")?;
    ensure(r.roots_equal == Some(true), "roots(K) != roots(F)")?;
    ensure(r.all_checks_pass(), "lattice checks")?;
    Ok("integral gamma found, index 3, disc K (6,12,12), 39 root pairs".to_string())
}

fn torus() -> Result<String, String> {
    let rows = [
        ("neg1", "16A1"),
        ("i", "6A1+4A3"),
        ("Q8", "2A1+3A3+2D4"),
        ("Q8inT24", "3A1+4D4"),
        ("Q8hat", "A1+6A3"),
        ("D12", "A1+2A2+3A3+D5"),
        ("T24", "A1+4A2+D4+E6"),
        ("T24hat", "4A2+2A3+A5"),
    ];
    for (name, expected) in rows {
        let group = standard_group(name).map_err(|e| e.to_string())?;
        let report = singularity_configuration(&group).map_err(|e| format!("{name}: {e}"))?;
        let expected: AdeConfig = expected.parse().expect("valid");
        ensure(report.config == expected, format!("{name} gives {}", report.config))?;
    }
    let (i, j, k) = q8hat_elements();
    let lists = [
        (i, ["0000", "1100", "1010", "0110"]),
        (j, ["0011", "0101", "1001", "1111"]),
        (k, ["0001", "1011", "0111", "1101"]),
    ];
    for (g, expected) in lists {
        let found: BTreeSet<String> = fixed_points(&g).points().iter().filter_map(abcd).collect();
        let expected: BTreeSet<String> = expected.iter().map(|s| s.to_string()).collect();
        ensure(found == expected, format!("fixed points {found:?}"))?;
    }
    Ok("8 quotient configurations and Fix(i), Fix(j'), Fix(k') reproduced".to_string())
}

fn obstructions() -> Result<String, String> {
    for c in configs(&EXCLUDED) {
        let r = check_nonexistence(&c).map_err(|e| e.to_string())?;
        ensure(r.verdict == Verdict::Excluded, format!("{c} not excluded"))?;
    }
    for c in configs(&TABLE) {
        let r = check_nonexistence(&c).map_err(|e| e.to_string())?;
        ensure(r.verdict == Verdict::NoObstructionFound, format!("{c} excluded"))?;
    }
    let c3: AdeConfig = "5A1+A3+A7+D4".parse().expect("valid");
    let r = check_nonexistence(&c3).map_err(|e| e.to_string())?;
    let covers: Vec<AdeConfig> = r.cover_configs().iter().map(|s| s.parse().expect("valid")).collect();
    ensure(
        covers.iter().any(|c| c.rank() == 20 && c.count(Component::a(7)) == 2),
        "no rank-20 cover containing 2A7 for C3",
    )?;
    let names: Vec<String> = covers.iter().map(|c| c.to_string()).collect();
    Ok(format!("C1..C8 excluded, table rows pass, C3 cover {}", names.join(", ")))
}

fn enriques() -> Result<String, String> {
    let found = doubling_filter(&int(12), 9).map_err(|e| e.to_string())?;
    let expected = configs(&["8A1", "3A1+2A3"]);
    let found_set: BTreeSet<_> = found.iter().cloned().collect();
    let expected_set: BTreeSet<_> = expected.into_iter().collect();
    ensure(found_set == expected_set && found.len() == 2, format!("doubling filter gives {found:?}"))?;
    let e1 = RationalVector::from_fraction(&[1, 0], 2);
    let e2 = RationalVector::from_fraction(&[1, 1], 2);
    let report = lieberman_check(&e1, &e2).map_err(|e| e.to_string())?;
    ensure(report.tau_fixed_point_free(), "tau has fixed points")?;
    ensure(report.passes(), "Lieberman quotient is not 8A1")?;
    Ok("{8A1, 3A1+2A3}; tau fixed-point free with quotient 8A1".to_string())
}

fn properties() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(0x6b756d6d6572);
    common::check_snf_random(&mut rng, 1000)?;
    let sums = common::check_roots_all_small()?;
    let mut glued = 0;
    for host in common::GLUE_HOSTS {
        for _ in 0..8 {
            if common::check_overlattice_random(&mut rng, host)? {
                glued += 1;
            }
        }
    }
    ensure(glued > 0, "no admissible glue found")?;
    let groups = common::check_all_standard_groups(&mut rng)?;
    for host in common::GLUE_HOSTS {
        for _ in 0..25 {
            common::check_q_well_defined(&mut rng, host)?;
        }
    }
    Ok(format!(
        "1000 Smith forms, roots of {sums} ADE sums, {glued} overlattices, {groups} groups, 200 q-value lifts"
    ))
}

type Check = fn() -> Result<String, String>;

fn main() {
    let criteria: [(u32, &str, Check, u64); 8] = [
        (1, "census", census, 5),
        (2, "m-values", m_values, 5),
        (3, "K for Q8hat", kummer_q8hat, 10),
        (4, "K for T24hat", kummer_t24hat, 10),
        (5, "torus actions", torus, 5),
        (6, "obstruction engine", obstructions, 10),
        (7, "Enriques", enriques, 30),
        (8, "property suites", properties, 60),
    ];
    let mut failures = 0;
    for (n, name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let within = elapsed <= Duration::from_secs(budget);
        let (status, detail) = match (&result, within) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("criterion {n} {status} ({name}, {:.2} s): {detail}", elapsed.as_secs_f64());
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
