//! Exact enumeration of the roots (vectors of norm -2) of a negative definite
//! lattice, by Fincke-Pohst search on the positive definite form `-G`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::lattice::{GramLattice, LatticeError};

/// Roots up to sign: each stored vector has positive first nonzero coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    pub roots: Vec<Vec<i64>>,
}

impl RootSystem {
    /// Number of pairs `{r, -r}`.
    pub fn pair_count(&self) -> usize {
        self.roots.len()
    }

    /// Number of root vectors, counting both signs.
    pub fn vector_count(&self) -> usize {
        2 * self.roots.len()
    }
}

/// Cohen's decomposition `Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2`.
struct Cholesky {
    q: Vec<Vec<BigRational>>,
}

impl Cholesky {
    fn new(form: &[Vec<BigRational>]) -> Self {
        let n = form.len();
        let mut q: Vec<Vec<BigRational>> = form.to_vec();
        for i in 0..n {
            for j in i + 1..n {
                q[j][i] = q[i][j].clone();
                q[i][j] = &q[i][j] / &q[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    let delta = &q[k][i] * &q[i][l];
                    q[k][l] -= delta;
                }
            }
        }
        Self { q }
    }

    /// Integers `x` with `q_ii (x - c)^2 <= budget`, nearest to `c` first.
    fn range(&self, i: usize, center: &BigRational, budget: &BigRational) -> Vec<(i64, BigRational)> {
        let fits = |x: i64| -> Option<BigRational> {
            let d = BigRational::from_integer(x.into()) - center;
            let used = &self.q[i][i] * &d * &d;
            (used <= *budget).then(|| budget - used)
        };
        let start = center.floor().to_integer().to_i64().expect("coordinate out of range");
        let mut out = Vec::new();
        let mut x = start;
        while let Some(rest) = fits(x) {
            out.push((x, rest));
            x -= 1;
        }
        let mut x = start + 1;
        while let Some(rest) = fits(x) {
            out.push((x, rest));
            x += 1;
        }
        out
    }

    fn center(&self, i: usize, x: &[i64]) -> BigRational {
        let mut c = BigRational::zero();
        for (j, &xj) in x.iter().enumerate().skip(i + 1) {
            if xj != 0 {
                c -= &self.q[i][j] * BigRational::from_integer(xj.into());
            }
        }
        c
    }

    /// Depth-first search over coordinates `i, i-1, ..., 0`.
    fn search(&self, i: usize, x: &mut Vec<i64>, budget: &BigRational, out: &mut Vec<Vec<i64>>) {
        let center = self.center(i, x);
        for (v, rest) in self.range(i, &center, budget) {
            x[i] = v;
            if i == 0 {
                // a root uses up the whole budget
                if rest.is_zero() {
                    out.push(x.clone());
                }
            } else {
                self.search(i - 1, x, &rest, out);
            }
        }
        x[i] = 0;
    }
}

/// All `x` with `x^T G x = -2`, reported up to sign.
pub fn enumerate_roots(lattice: &GramLattice) -> Result<RootSystem, LatticeError> {
    if !lattice.is_negative_definite() {
        return Err(LatticeError::NotNegativeDefinite);
    }
    let n = lattice.rank();
    if n == 0 {
        return Ok(RootSystem { roots: Vec::new() });
    }
    let form: Vec<Vec<BigRational>> = (0..n)
        .map(|r| (0..n).map(|c| BigRational::from_integer(-lattice.gram()[(r, c)].clone())).collect())
        .collect();
    let chol = Cholesky::new(&form);
    let two = BigRational::from_integer(BigInt::from(2));

    let top = n - 1;
    let zero = vec![0i64; n];
    let center = chol.center(top, &zero);
    let mut found: Vec<Vec<i64>> = chol
        .range(top, &center, &two)
        .into_par_iter()
        .flat_map_iter(|(v, rest)| {
            let mut x = zero.clone();
            x[top] = v;
            let mut out = Vec::new();
            if top == 0 {
                if rest.is_zero() {
                    out.push(x);
                }
            } else {
                chol.search(top - 1, &mut x, &rest, &mut out);
            }
            out
        })
        .collect();

    found.retain(|x| x.iter().find(|v| **v != 0).is_some_and(|v| *v > 0));
    found.sort();
    debug_assert!(found.iter().all(|x| {
        let big: Vec<BigInt> = x.iter().map(|&v| v.into()).collect();
        lattice.integer_norm(&big) == BigInt::from(-2)
    }));
    Ok(RootSystem { roots: found })
}

/// Whether an integral vector is a root of the lattice.
pub fn is_root(lattice: &GramLattice, x: &[i64]) -> bool {
    let big: Vec<BigInt> = x.iter().map(|&v| v.into()).collect();
    lattice.integer_norm(&big) == BigInt::from(-2)
}
