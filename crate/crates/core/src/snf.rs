//! Smith and Hermite normal forms over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;

/// `u * m * v == d` with `d` diagonal, `d[0] | d[1] | ...`, zeros last.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The diagonal of `d`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Re-multiplies the transforms and checks the diagonal shape.
    pub fn certifies(&self, m: &IntMatrix) -> bool {
        if &(&self.u * m) * &self.v != self.d {
            return false;
        }
        let unimodular = |x: &IntMatrix| x.determinant().abs().is_one();
        if !unimodular(&self.u) || !unimodular(&self.v) {
            return false;
        }
        for r in 0..self.d.rows() {
            for c in 0..self.d.cols() {
                if r != c && !self.d[(r, c)].is_zero() {
                    return false;
                }
            }
        }
        let diag = self.diagonal();
        diag.iter().all(|x| !x.is_negative())
            && diag.windows(2).all(|w| {
                if w[0].is_zero() {
                    w[1].is_zero()
                } else {
                    (&w[1] % &w[0]).is_zero()
                }
            })
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    'outer: for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    let x = &a[(r, c)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(br, bc)| x.abs() < a[(br, bc)].abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = best else {
                break 'outer;
            };
            a.swap_rows(t, pr);
            u.swap_rows(t, pr);
            a.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let mut clean = true;
            for r in t + 1..rows {
                if a[(r, t)].is_zero() {
                    continue;
                }
                let q = a[(r, t)].div_floor(&a[(t, t)]);
                add_row_multiple(&mut a, r, t, &q);
                add_row_multiple(&mut u, r, t, &q);
                clean &= a[(r, t)].is_zero();
            }
            for c in t + 1..cols {
                if a[(t, c)].is_zero() {
                    continue;
                }
                let q = a[(t, c)].div_floor(&a[(t, t)]);
                add_col_multiple(&mut a, c, t, &q);
                add_col_multiple(&mut v, c, t, &q);
                clean &= a[(t, c)].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let offending = (t + 1..rows).find(|&r| {
                (t + 1..cols).any(|c| !(&a[(r, c)] % &a[(t, t)]).is_zero())
            });
            match offending {
                Some(r) => {
                    let minus_one = -BigInt::one();
                    add_row_multiple(&mut a, t, r, &minus_one);
                    add_row_multiple(&mut u, t, r, &minus_one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            for c in 0..cols {
                a[(t, c)] = -a[(t, c)].clone();
            }
            for c in 0..rows {
                u[(t, c)] = -u[(t, c)].clone();
            }
        }
    }

    let snf = SmithForm { d: a, u, v };
    debug_assert!(snf.certifies(m), "Smith normal form failed self-certification");
    snf
}

/// row[target] -= q * row[source]
fn add_row_multiple(m: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    for c in 0..m.cols() {
        let delta = q * &m[(source, c)];
        m[(target, c)] -= delta;
    }
}

/// col[target] -= q * col[source]
fn add_col_multiple(m: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    for r in 0..m.rows() {
        let delta = q * &m[(r, source)];
        m[(r, target)] -= delta;
    }
}

/// Row-style Hermite normal form: a basis of the row span of `m`, in echelon
/// form with positive pivots and entries above each pivot reduced into
/// `[0, pivot)`. Zero rows are dropped.
pub fn hermite_row_basis(m: &IntMatrix) -> IntMatrix {
    let cols = m.cols();
    let mut rows: Vec<Vec<BigInt>> = m.to_rows();
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();

    for c in 0..cols {
        // gcd-combine every remaining row with a nonzero entry in column c
        loop {
            let mut live: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if live.len() <= 1 {
                break;
            }
            live.sort_by(|&x, &y| rows[x][c].abs().cmp(&rows[y][c].abs()));
            let p = live[0];
            for &i in &live[1..] {
                let q = rows[i][c].div_floor(&rows[p][c]);
                let src = rows[p].clone();
                for (x, s) in rows[i].iter_mut().zip(&src) {
                    *x -= &q * s;
                }
            }
        }
        if let Some(i) = rows.iter().position(|r| !r[c].is_zero()) {
            let mut row = rows.swap_remove(i);
            if row[c].is_negative() {
                row.iter_mut().for_each(|x| *x = -x.clone());
            }
            basis.push(row);
            pivots.push(c);
        }
    }

    // reduce entries above pivots
    for k in 0..basis.len() {
        let c = pivots[k];
        let pivot = basis[k][c].clone();
        for j in 0..k {
            let q = basis[j][c].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            let src = basis[k].clone();
            for (x, s) in basis[j].iter_mut().zip(&src) {
                *x -= &q * s;
            }
        }
    }

    if basis.is_empty() {
        return IntMatrix::zeros(0, cols);
    }
    IntMatrix::from_rows(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    #[test]
    fn identity_is_its_own_smith_form() {
        let id = IntMatrix::identity(3);
        let snf = smith_normal_form(&id);
        assert_eq!(snf.d, id);
        assert!(snf.u.is_identity());
        assert!(snf.v.is_identity());
    }

    #[test]
    fn diagonal_is_reordered_into_a_divisibility_chain() {
        let snf = smith_normal_form(&int(&[vec![4, 0], vec![0, 2]]));
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
        let snf = smith_normal_form(&int(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn rectangular_and_singular_inputs() {
        let m = int(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let snf = smith_normal_form(&m);
        assert!(snf.certifies(&m));
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);

        let m = int(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let snf = smith_normal_form(&m);
        assert!(snf.certifies(&m));
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::zero()]);
    }

    #[test]
    fn hermite_basis_spans_the_same_lattice() {
        let gens = int(&[vec![4, 0], vec![0, 4], vec![2, 2], vec![1, 3]]);
        let h = hermite_row_basis(&gens);
        assert_eq!(h.rows(), 2);
        // index of the span in Z^2 is |det| = 4 (generated by (1,3) and (0,4))
        assert_eq!(h.determinant().abs(), BigInt::from(4));
        assert_eq!(h.to_rows(), int(&[vec![1, 3], vec![0, 4]]).to_rows());
    }
}
