//! Checks shared by the property suite and the acceptance target. Each check
//! returns `Err` with a description of the first counterexample.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

use kummerlat::ade::{AdeConfig, Component};
use kummerlat::lattice::{
    discriminant_group, mod_two, overlattice, q_value, GlueVector, GramLattice, RationalVector,
};
use kummerlat::matrix::IntMatrix;
use kummerlat::roots::{enumerate_roots, is_root};
use kummerlat::snf::smith_normal_form;
use kummerlat::torus::{fixed_points, standard_group, FixedLocus, TorusGroup, STANDARD_GROUPS};

pub fn random_matrix<R: Rng>(rng: &mut R, max_dim: usize, bound: i64) -> IntMatrix {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    // mix dense and sparse matrices so that rank deficiency shows up
    let density: f64 = rng.gen_range(0.2..=1.0);
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| if rng.gen_bool(density) { rng.gen_range(-bound..=bound) } else { 0 })
                .collect()
        })
        .collect();
    IntMatrix::from_i64_rows(&data)
}

/// The Smith form certifies itself, and for square matrices the product of
/// the diagonal is `|det|`.
pub fn check_snf(m: &IntMatrix) -> Result<(), String> {
    let snf = smith_normal_form(m);
    if !snf.certifies(m) {
        return Err(format!("Smith form does not certify {m:?}"));
    }
    if m.rows() == m.cols() {
        let product: BigInt = snf.diagonal().iter().product();
        if product != m.determinant().abs() {
            return Err(format!("diagonal product {product} differs from |det| for {m:?}"));
        }
    }
    Ok(())
}

pub fn check_snf_random<R: Rng>(rng: &mut R, cases: usize) -> Result<(), String> {
    for _ in 0..cases {
        check_snf(&random_matrix(rng, 6, 20))?;
    }
    Ok(())
}

/// Every ADE configuration of total rank at most `max_rank`.
pub fn ade_sums(max_rank: usize) -> Vec<AdeConfig> {
    let mut kinds: Vec<Component> = (1..=max_rank as u32).map(Component::a).collect();
    kinds.extend((4..=max_rank as u32).map(Component::d));
    kinds.extend((6..=max_rank.min(8) as u32).map(Component::e));
    let mut out = Vec::new();
    fn go(kinds: &[Component], start: usize, left: usize, acc: &mut Vec<Component>, out: &mut Vec<AdeConfig>) {
        if !acc.is_empty() {
            let pairs: Vec<(Component, u32)> = acc.iter().map(|c| (*c, 1)).collect();
            out.push(AdeConfig::from_components(&pairs));
        }
        for i in start..kinds.len() {
            if kinds[i].rank() <= left {
                acc.push(kinds[i]);
                go(kinds, i, left - kinds[i].rank(), acc, out);
                acc.pop();
            }
        }
    }
    go(&kinds, 0, max_rank, &mut Vec::new(), &mut out);
    out
}

/// Number of root pairs of a single component.
fn component_root_pairs(c: Component) -> usize {
    let n = c.n as usize;
    match c.kind {
        kummerlat::ade::ComponentKind::A => n * (n + 1) / 2,
        kummerlat::ade::ComponentKind::D => n * (n - 1),
        kummerlat::ade::ComponentKind::E => match n {
            6 => 36,
            7 => 63,
            _ => 120,
        },
    }
}

/// Roots by exhaustive search over the box `[-3, 3]^n`. For rank at most 6
/// every root of an ADE lattice has simple-root coefficients of absolute
/// value at most 3, so the box is complete.
pub fn brute_force_roots(lattice: &GramLattice) -> Vec<Vec<i64>> {
    let n = lattice.rank();
    let g: Vec<Vec<i64>> = (0..n)
        .map(|r| (0..n).map(|c| i64::try_from(&lattice.gram()[(r, c)]).expect("small entries")).collect())
        .collect();
    let mut out = Vec::new();
    let mut x = vec![-3i64; n];
    loop {
        let first = x.iter().find(|v| **v != 0);
        if first.is_some_and(|v| *v > 0) {
            let mut norm = 0;
            for r in 0..n {
                for c in 0..n {
                    norm += x[r] * g[r][c] * x[c];
                }
            }
            if norm == -2 {
                out.push(x.clone());
            }
        }
        let mut k = 0;
        while k < n && x[k] == 3 {
            x[k] = -3;
            k += 1;
        }
        if k == n {
            break;
        }
        x[k] += 1;
    }
    out.sort();
    out
}

pub fn check_roots(config: &AdeConfig) -> Result<(), String> {
    let lattice = config.gram();
    let found = enumerate_roots(&lattice).map_err(|e| e.to_string())?.roots;
    let oracle = brute_force_roots(&lattice);
    if found != oracle {
        return Err(format!("{config}: search found {} root pairs, brute force {}", found.len(), oracle.len()));
    }
    let formula: usize = config.counts().map(|(c, k)| k as usize * component_root_pairs(c)).sum();
    if found.len() != formula {
        return Err(format!("{config}: {} root pairs, formula gives {formula}", found.len()));
    }
    if !found.iter().all(|r| is_root(&lattice, r)) {
        return Err(format!("{config}: reported vector is not a root"));
    }
    Ok(())
}

pub fn check_roots_all_small() -> Result<usize, String> {
    let sums = ade_sums(6);
    for c in &sums {
        check_roots(c)?;
    }
    Ok(sums.len())
}

/// Small configurations whose discriminant groups carry isotropic classes.
pub const GLUE_HOSTS: [&str; 8] = ["8A1", "4A1+D4", "2A3+2A1", "A7+A1", "2D4", "16A1", "4A2+A3", "A1+6A3"];

fn random_dual_element<R: Rng>(rng: &mut R, lattice: &GramLattice) -> (Vec<BigInt>, RationalVector) {
    let disc = discriminant_group(lattice).expect("nondegenerate");
    let coeffs: Vec<BigInt> = disc
        .invariant_factors
        .iter()
        .map(|d| BigInt::from(rng.gen_range(0..i64::try_from(d).expect("small factor"))))
        .collect();
    let mut v = RationalVector::zero(lattice.rank());
    for (a, g) in coeffs.iter().zip(&disc.generators) {
        v = v.add(&g.scale(&BigRational::from_integer(a.clone())));
    }
    (coeffs, v)
}

fn random_lattice_vector<R: Rng>(rng: &mut R, n: usize) -> RationalVector {
    let coords: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
    RationalVector::from_i64(&coords)
}

/// Adjoins a random isotropic class (when one is found) and checks
/// `|det L| = |det K| [K:L]^2` together with `[K:L] = ord(glue)`.
pub fn check_overlattice_random<R: Rng>(rng: &mut R, host: &str) -> Result<bool, String> {
    let config: AdeConfig = host.parse().map_err(|e| format!("{e}"))?;
    let lattice = config.gram();
    for _ in 0..200 {
        let (_, v) = random_dual_element(rng, &lattice);
        let v = v.reduced_mod_one();
        if v.is_integral() || !q_value(&lattice, &v).map_err(|e| e.to_string())?.is_zero() {
            continue;
        }
        let glue = GlueVector::new(&lattice, v.clone()).map_err(|e| e.to_string())?;
        let k = overlattice(&lattice, std::slice::from_ref(&glue)).map_err(|e| e.to_string())?;
        let det_l = lattice.determinant().abs();
        let det_k = k.lattice.determinant().abs();
        if det_l != &det_k * &k.index * &k.index {
            return Err(format!("{host} + {v}: det identity fails"));
        }
        if &k.index != glue.order() {
            return Err(format!("{host} + {v}: index {} differs from glue order {}", k.index, glue.order()));
        }
        if !k.lattice.is_negative_definite() || !(0..k.lattice.rank()).all(|i| {
            let d = &k.lattice.gram()[(i, i)];
            (d % BigInt::from(2)).is_zero()
        }) {
            return Err(format!("{host} + {v}: overlattice is not even negative definite"));
        }
        let back = k.from_parent(&v);
        if !back.is_integral() {
            return Err(format!("{host} + {v}: glue vector not in the overlattice"));
        }
        return Ok(true);
    }
    Ok(false)
}

/// `q` does not depend on the lift of a dual class, and agrees with the
/// value computed from the stored generator data.
pub fn check_q_well_defined<R: Rng>(rng: &mut R, host: &str) -> Result<(), String> {
    let config: AdeConfig = host.parse().map_err(|e| format!("{e}"))?;
    let lattice = config.gram();
    let disc = discriminant_group(&lattice).map_err(|e| e.to_string())?;
    let (coeffs, x) = random_dual_element(rng, &lattice);
    let y = random_lattice_vector(rng, lattice.rank());
    let qx = q_value(&lattice, &x).map_err(|e| e.to_string())?;
    let qxy = q_value(&lattice, &x.add(&y)).map_err(|e| e.to_string())?;
    let minus = x.scale(&BigRational::from_integer((-1).into()));
    let q_minus = q_value(&lattice, &minus).map_err(|e| e.to_string())?;
    if qx != qxy || qx != q_minus {
        return Err(format!("{host}: q({x}) = {qx} but a different lift gives {qxy}"));
    }
    if disc.q_of(&coeffs) != qx {
        return Err(format!("{host}: q from generator data differs at {x}"));
    }
    if mod_two(&lattice.norm(&x)) != qx {
        return Err(format!("{host}: q not reduced into [0, 2)"));
    }
    Ok(())
}

/// Torsion points with denominator dividing `d` fixed by `g`, by exhaustive
/// search with integer arithmetic.
pub fn brute_force_fixed_count(g: &kummerlat::torus::AffineTorusMap, d: i64) -> usize {
    let m: Vec<Vec<i64>> = (0..4)
        .map(|r| (0..4).map(|c| i64::try_from(&g.linear[(r, c)]).expect("small entries")).collect())
        .collect();
    // d * r must be integral
    let r: Vec<i64> = g
        .translation
        .coords()
        .iter()
        .map(|x| {
            let scaled = x * BigRational::from_integer(d.into());
            assert!(scaled.is_integer(), "denominator does not divide {d}");
            i64::try_from(scaled.to_integer()).expect("small")
        })
        .collect();
    let mut count = 0;
    for k in 0..d.pow(4) {
        let x = [k % d, k / d % d, k / (d * d) % d, k / (d * d * d)];
        let fixed = (0..4).all(|i| {
            let mut s = r[i] - x[i];
            for j in 0..4 {
                s += m[i][j] * x[j];
            }
            s.rem_euclid(d) == 0
        });
        if fixed {
            count += 1;
        }
    }
    count
}

/// Orbit-stabilizer for fixed points and random torsion points, and fixed
/// counts against exhaustive search.
pub fn check_group(group: &TorusGroup) -> Result<(), String> {
    let n = group.order();
    for g in group.elements.iter().skip(1) {
        let locus = fixed_points(g);
        let FixedLocus::Points(points) = &locus else { continue };
        let det = {
            let a = IntMatrix::from_fn(4, 4, |r, c| {
                let x = g.linear[(r, c)].clone();
                if r == c { x - 1 } else { x }
            });
            a.determinant().abs()
        };
        if BigInt::from(points.len()) != det {
            return Err(format!("{}: {} fixed points but |det(M - I)| = {det}", group.name, points.len()));
        }
        let denom = g.translation.denominator();
        let d = i64::try_from(&(&det * &denom)).expect("small");
        let brute = brute_force_fixed_count(g, d);
        if brute != points.len() {
            return Err(format!("{}: exhaustive search finds {brute} fixed points, solver {}", group.name, points.len()));
        }
        for p in points {
            let orbit = group.orbit(p).len();
            let stab = group.stabilizer(p).len();
            if orbit * stab != n {
                return Err(format!("{}: |orbit| {orbit} * |stab| {stab} != {n} at {p}", group.name));
            }
        }
    }
    Ok(())
}

pub fn check_all_standard_groups<R: Rng>(rng: &mut R) -> Result<usize, String> {
    for (name, _) in STANDARD_GROUPS {
        let group = standard_group(name).map_err(|e| e.to_string())?;
        check_group(&group)?;
        for _ in 0..20 {
            let coords: Vec<i64> = (0..4).map(|_| rng.gen_range(0..12)).collect();
            let p = RationalVector::from_fraction(&coords, 12);
            let orbit = group.orbit(&p).len();
            let stab = group.stabilizer(&p).len();
            if orbit * stab != group.order() {
                return Err(format!("{name}: orbit-stabilizer fails at {p}"));
            }
        }
    }
    Ok(STANDARD_GROUPS.len())
}
