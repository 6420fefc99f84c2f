//! Integral lattices given by Gram matrices.
//!
//! Vectors are always written in the coordinates of the lattice basis, so a
//! vector lies in the dual `L^v` exactly when `G x` is integral. Configuration
//! lattices follow the intersection-number convention: negative definite with
//! `-2` on the diagonal.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{IntMatrix, RatMatrix};
use crate::snf::{hermite_row_basis, smith_normal_form};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("Gram matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("lattice is degenerate (determinant 0)")]
    DegenerateLattice,
    #[error("expected {expected} basis labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("vector has {got} coordinates, lattice has rank {rank}")]
    DimensionMismatch { rank: usize, got: usize },
    #[error("vector is not in the dual lattice: pairing with basis vector {basis_index} is {pairing}")]
    NotInDual { basis_index: usize, pairing: String },
    #[error("glue vectors {first} and {second} have non-integral pairing {pairing}")]
    NonIntegralGlue { first: usize, second: usize, pairing: String },
    #[error("glue vector {index} has odd or non-integral self-pairing {pairing}")]
    OddGlue { index: usize, pairing: String },
    #[error("lattice is not negative definite")]
    NotNegativeDefinite,
    #[error("malformed lattice data: {0}")]
    Malformed(String),
}

/// Exact rational coordinates in a lattice basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn zero(len: usize) -> Self {
        Self(vec![BigRational::zero(); len])
    }

    pub fn from_integers(coords: &[BigInt]) -> Self {
        Self(coords.iter().map(|x| BigRational::from_integer(x.clone())).collect())
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    /// `numerators / denominator`, coordinate-wise.
    pub fn from_fraction(numerators: &[i64], denominator: i64) -> Self {
        Self(
            numerators
                .iter()
                .map(|&x| BigRational::new(x.into(), denominator.into()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self(self.0.iter().map(|x| x * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// Representative with every coordinate reduced into `[0, 1)`.
    pub fn reduced_mod_one(&self) -> Self {
        Self(self.0.iter().map(frac_part).collect())
    }

    /// Coordinates as `"p/q"` strings (integers without a denominator).
    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(rational_to_string).collect()
    }

    pub fn parse_strings<S: AsRef<str>>(coords: &[S]) -> Result<Self, LatticeError> {
        coords
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn frac_part(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// Representative of `x` modulo `2Z` in `[0, 2)`.
pub fn mod_two(x: &BigRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    let q = (x / &two).floor();
    x - q * two
}

pub fn rational_to_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, LatticeError> {
    let s = s.trim();
    let bad = || LatticeError::Malformed(format!("cannot parse rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// A nondegenerate symmetric integral bilinear form in a fixed basis.
#[derive(Clone, PartialEq, Eq)]
pub struct GramLattice {
    gram: IntMatrix,
    labels: Vec<String>,
}

impl fmt::Debug for GramLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GramLattice")
            .field("rank", &self.rank())
            .field("labels", &self.labels)
            .field("gram", &self.gram)
            .finish()
    }
}

impl GramLattice {
    pub fn new(gram: IntMatrix, labels: Vec<String>) -> Result<Self, LatticeError> {
        if !gram.is_square() {
            return Err(LatticeError::NotSquare { rows: gram.rows(), cols: gram.cols() });
        }
        if labels.len() != gram.rows() {
            return Err(LatticeError::LabelCount { expected: gram.rows(), got: labels.len() });
        }
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        if gram.determinant().is_zero() {
            return Err(LatticeError::DegenerateLattice);
        }
        Ok(Self { gram, labels })
    }

    /// Labels default to `e1, e2, ...`.
    pub fn from_gram(gram: IntMatrix) -> Result<Self, LatticeError> {
        let labels = (1..=gram.rows()).map(|i| format!("e{i}")).collect();
        Self::new(gram, labels)
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::from_gram(IntMatrix::from_i64_rows(rows))
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, LatticeError> {
        if labels.len() != self.rank() {
            return Err(LatticeError::LabelCount { expected: self.rank(), got: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.determinant()
    }

    pub fn direct_sum(&self, other: &GramLattice) -> GramLattice {
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        GramLattice { gram: self.gram.direct_sum(&other.gram), labels }
    }

    pub fn is_negative_definite(&self) -> bool {
        self.gram.map(|x| BigRational::from_integer(-x)).is_positive_definite()
    }

    fn check_dim(&self, x: &RationalVector) -> Result<(), LatticeError> {
        if x.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch { rank: self.rank(), got: x.len() });
        }
        Ok(())
    }

    /// `G x`: the pairings of `x` with each basis vector.
    pub fn basis_pairings(&self, x: &RationalVector) -> Vec<BigRational> {
        self.gram.to_rational().apply(x.coords())
    }

    pub fn pairing(&self, x: &RationalVector, y: &RationalVector) -> BigRational {
        self.basis_pairings(x).iter().zip(y.coords()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self, x: &RationalVector) -> BigRational {
        self.pairing(x, x)
    }

    pub fn integer_norm(&self, x: &[BigInt]) -> BigInt {
        let gx = self.gram.apply(x);
        gx.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn check_dual(&self, x: &RationalVector) -> Result<(), LatticeError> {
        self.check_dim(x)?;
        for (i, p) in self.basis_pairings(x).iter().enumerate() {
            if !p.is_integer() {
                return Err(LatticeError::NotInDual {
                    basis_index: i,
                    pairing: rational_to_string(p),
                });
            }
        }
        Ok(())
    }

    pub fn in_dual(&self, x: &RationalVector) -> bool {
        self.check_dual(x).is_ok()
    }

    /// Vectors lie in `L` itself exactly when their coordinates are integral.
    pub fn contains(&self, x: &RationalVector) -> bool {
        x.len() == self.rank() && x.is_integral()
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            rank: self.rank(),
            gram: self
                .gram
                .to_rows()
                .iter()
                .map(|r| r.iter().map(|x| x.to_i64().expect("Gram entry exceeds i64")).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_json(json: &LatticeJson) -> Result<Self, LatticeError> {
        if json.gram.len() != json.rank {
            return Err(LatticeError::Malformed(format!(
                "rank {} but {} Gram rows",
                json.rank,
                json.gram.len()
            )));
        }
        if json.gram.iter().any(|r| r.len() != json.rank) {
            return Err(LatticeError::Malformed("Gram rows have the wrong length".into()));
        }
        Self::new(IntMatrix::from_i64_rows(&json.gram), json.labels.clone())
    }
}

/// Interchange format: `{"rank": n, "gram": [[...]], "labels": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    pub labels: Vec<String>,
}

/// Discriminant quadratic form value `x.x mod 2Z`, in `[0, 2)`.
pub fn q_value(lattice: &GramLattice, x: &RationalVector) -> Result<BigRational, LatticeError> {
    lattice.check_dual(x)?;
    Ok(mod_two(&lattice.norm(x)))
}

/// `L^v / L` with generators lifted to the dual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGroup {
    pub invariant_factors: Vec<BigInt>,
    pub generators: Vec<RationalVector>,
    /// `q(g_i)` in `[0, 2)`.
    pub q_values: Vec<BigRational>,
    /// `b(g_i, g_j)` in `[0, 1)`.
    pub bilinear: Vec<Vec<BigRational>>,
}

impl DiscriminantGroup {
    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn length(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Number of cyclic factors whose order is divisible by `p`.
    pub fn p_rank(&self, p: u64) -> usize {
        let p = BigInt::from(p);
        self.invariant_factors.iter().filter(|d| (*d % &p).is_zero()).count()
    }

    /// `q(sum a_i g_i)` computed from the stored form values.
    pub fn q_of(&self, coeffs: &[BigInt]) -> BigRational {
        assert_eq!(coeffs.len(), self.generators.len());
        let mut total = BigRational::zero();
        for (i, a) in coeffs.iter().enumerate() {
            let a = BigRational::from_integer(a.clone());
            total += &a * &a * &self.q_values[i];
            for (j, b) in coeffs.iter().enumerate().skip(i + 1) {
                let b = BigRational::from_integer(b.clone());
                total += BigRational::from_integer(2.into()) * &a * &b * &self.bilinear[i][j];
            }
        }
        mod_two(&total)
    }

    /// Human-readable description such as `Z2 x (Z4)^2`.
    pub fn describe(&self) -> String {
        describe_factors(&self.invariant_factors)
    }
}

pub fn describe_factors(factors: &[BigInt]) -> String {
    if factors.is_empty() {
        return "trivial".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < factors.len() {
        let mut j = i;
        while j < factors.len() && factors[j] == factors[i] {
            j += 1;
        }
        let count = j - i;
        if count == 1 {
            parts.push(format!("Z{}", factors[i]));
        } else {
            parts.push(format!("(Z{})^{}", factors[i], count));
        }
        i = j;
    }
    parts.join(" x ")
}

pub fn discriminant_group(lattice: &GramLattice) -> Result<DiscriminantGroup, LatticeError> {
    let gram = lattice.gram();
    if gram.determinant().is_zero() {
        return Err(LatticeError::DegenerateLattice);
    }
    // U G V = D; the class of V e_i / d_i generates the i-th cyclic factor.
    let snf = smith_normal_form(gram);
    let mut invariant_factors = Vec::new();
    let mut generators = Vec::new();
    for (i, d) in snf.diagonal().into_iter().enumerate() {
        if d.is_one() {
            continue;
        }
        let column = snf.v.column(i);
        let g = RationalVector(
            column.into_iter().map(|x| BigRational::new(x, d.clone())).collect(),
        );
        invariant_factors.push(d);
        generators.push(g);
    }
    let q_values = generators.iter().map(|g| mod_two(&lattice.norm(g))).collect();
    let bilinear = generators
        .iter()
        .map(|g| generators.iter().map(|h| frac_part(&lattice.pairing(g, h))).collect())
        .collect();
    Ok(DiscriminantGroup { invariant_factors, generators, q_values, bilinear })
}

/// A dual vector to be adjoined to a lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueVector {
    vector: RationalVector,
    order: BigInt,
}

impl GlueVector {
    pub fn new(lattice: &GramLattice, vector: RationalVector) -> Result<Self, LatticeError> {
        lattice.check_dual(&vector)?;
        let order = vector.denominator();
        Ok(Self { vector, order })
    }

    pub fn vector(&self) -> &RationalVector {
        &self.vector
    }

    /// Order of the class in `L^v / L`.
    pub fn order(&self) -> &BigInt {
        &self.order
    }
}

/// A finite-index overlattice together with its embedding data.
#[derive(Clone, Debug)]
pub struct Overlattice {
    pub lattice: GramLattice,
    /// Rows are the new basis vectors written in the parent basis.
    pub basis: RatMatrix,
    pub index: BigInt,
}

impl Overlattice {
    /// Coordinates in the parent basis of a vector given in the new basis.
    pub fn to_parent(&self, x: &[BigInt]) -> RationalVector {
        let row = RatMatrix::from_rows(vec![x
            .iter()
            .map(|v| BigRational::from_integer(v.clone()))
            .collect()]);
        RationalVector((&row * &self.basis).row(0).to_vec())
    }

    /// Coordinates in the new basis of a parent-basis vector.
    pub fn from_parent(&self, x: &RationalVector) -> RationalVector {
        let inv = self.basis.inverse().expect("overlattice basis is invertible");
        let row = RatMatrix::from_rows(vec![x.0.clone()]);
        RationalVector((&row * &inv).row(0).to_vec())
    }
}

pub fn overlattice(parent: &GramLattice, glue: &[GlueVector]) -> Result<Overlattice, LatticeError> {
    let n = parent.rank();
    for (i, g) in glue.iter().enumerate() {
        parent.check_dual(&g.vector)?;
        let self_pairing = parent.norm(&g.vector);
        let even = self_pairing.is_integer() && self_pairing.to_integer().is_even();
        if !even {
            return Err(LatticeError::OddGlue { index: i, pairing: rational_to_string(&self_pairing) });
        }
        for (j, h) in glue.iter().enumerate().skip(i + 1) {
            let p = parent.pairing(&g.vector, &h.vector);
            if !p.is_integer() {
                return Err(LatticeError::NonIntegralGlue {
                    first: i,
                    second: j,
                    pairing: rational_to_string(&p),
                });
            }
        }
    }

    if glue.is_empty() {
        return Ok(Overlattice {
            lattice: parent.clone(),
            basis: RatMatrix::identity(n),
            index: BigInt::one(),
        });
    }

    let scale = glue.iter().fold(BigInt::one(), |acc, g| acc.lcm(&g.order));
    let mut gens: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { scale.clone() } else { BigInt::zero() }).collect())
        .collect();
    for g in glue {
        gens.push(
            g.vector
                .coords()
                .iter()
                .map(|x| (x * BigRational::from_integer(scale.clone())).to_integer())
                .collect(),
        );
    }
    let hnf = hermite_row_basis(&IntMatrix::from_rows(gens));
    debug_assert_eq!(hnf.rows(), n);
    let scale_q = BigRational::from_integer(scale.clone());
    let basis = hnf.map(|x| BigRational::from_integer(x.clone()) / &scale_q);

    let gram_q = &(&basis * &parent.gram().to_rational()) * &basis.transpose();
    let gram = gram_q.to_integer().ok_or_else(|| {
        LatticeError::Malformed("overlattice Gram matrix is not integral".into())
    })?;

    // index = scale^n / |det hnf|
    let index = num_traits::pow(scale.clone(), n) / hnf.determinant().abs();

    let mut glue_count = 0;
    let labels = (0..n)
        .map(|r| {
            let row = basis.row(r);
            let unit = row.iter().enumerate().find(|(_, x)| !x.is_zero()).and_then(|(c, x)| {
                (x.is_one() && row.iter().filter(|y| !y.is_zero()).count() == 1).then_some(c)
            });
            match unit {
                Some(c) => parent.labels()[c].clone(),
                None => {
                    glue_count += 1;
                    format!("g{glue_count}")
                }
            }
        })
        .collect();
    Ok(Overlattice { lattice: GramLattice::new(gram, labels)?, basis, index })
}

/// Outcome of the Nikulin length bound `l(A_L) <= min(rk L, ambient - rk L)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LengthCheck {
    pub holds: bool,
    pub length: usize,
    pub bound: usize,
    /// `length - bound` when the bound fails, else 0.
    pub excess: usize,
}

pub fn length_bound_check(
    lattice: &GramLattice,
    ambient_rank: usize,
) -> Result<LengthCheck, LatticeError> {
    let disc = discriminant_group(lattice)?;
    Ok(length_check_from(disc.length(), lattice.rank(), ambient_rank))
}

pub fn length_check_from(length: usize, rank: usize, ambient_rank: usize) -> LengthCheck {
    let bound = rank.min(ambient_rank.saturating_sub(rank));
    LengthCheck { holds: length <= bound, length, bound, excess: length.saturating_sub(bound) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a_n(n: usize) -> GramLattice {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.abs_diff(j) {
                        0 => -2,
                        1 => 1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        GramLattice::from_i64_rows(&rows).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rejects_bad_gram_matrices() {
        assert_eq!(
            GramLattice::from_i64_rows(&[vec![-2, 1], vec![0, -2]]),
            Err(LatticeError::NotSymmetric)
        );
        assert_eq!(
            GramLattice::from_i64_rows(&[vec![1, 1], vec![1, 1]]),
            Err(LatticeError::DegenerateLattice)
        );
    }

    #[test]
    fn a3_has_cyclic_discriminant_of_order_four() {
        let disc = discriminant_group(&a_n(3)).unwrap();
        assert_eq!(disc.invariant_factors, vec![BigInt::from(4)]);
        assert_eq!(disc.order(), BigInt::from(4));
        for g in &disc.generators {
            assert!(a_n(3).in_dual(g));
        }
    }

    #[test]
    fn q_value_of_the_a3_glue_generator() {
        let l = a_n(3);
        assert_eq!(q_value(&l, &RationalVector::zero(3)).unwrap(), q(0, 1));
        let t = RationalVector::from_fraction(&[1, 2, 3], 4);
        assert_eq!(l.norm(&t), q(-3, 4));
        assert_eq!(q_value(&l, &t).unwrap(), q(5, 4));
        let off = RationalVector::from_fraction(&[1, 0, 0], 2);
        assert!(matches!(q_value(&l, &off), Err(LatticeError::NotInDual { .. })));
    }

    #[test]
    fn discriminant_form_values_are_consistent() {
        let l = a_n(3);
        let disc = discriminant_group(&l).unwrap();
        let g = &disc.generators[0];
        for k in 0..4i64 {
            let direct = q_value(&l, &g.scale(&q(k, 1))).unwrap();
            assert_eq!(disc.q_of(&[BigInt::from(k)]), direct);
        }
    }

    #[test]
    fn empty_glue_returns_the_lattice() {
        let l = a_n(2);
        let o = overlattice(&l, &[]).unwrap();
        assert_eq!(o.index, BigInt::one());
        assert_eq!(o.lattice, l);
    }

    #[test]
    fn odd_glue_is_rejected() {
        // A1 + A1: (1/2)(e1 + e2) has norm -1
        let l = GramLattice::from_i64_rows(&[vec![-2, 0], vec![0, -2]]).unwrap();
        let g = GlueVector::new(&l, RationalVector::from_fraction(&[1, 1], 2)).unwrap();
        assert!(matches!(overlattice(&l, &[g]), Err(LatticeError::OddGlue { index: 0, .. })));
    }

    #[test]
    fn non_integral_mutual_pairing_is_rejected() {
        // 4A1 + 4A1 with two half-sums overlapping in one curve
        let mut rows = vec![vec![0i64; 7]; 7];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = -2;
        }
        let l = GramLattice::from_i64_rows(&rows).unwrap();
        let g1 = GlueVector::new(&l, RationalVector::from_fraction(&[1, 1, 1, 1, 0, 0, 0], 2)).unwrap();
        let g2 = GlueVector::new(&l, RationalVector::from_fraction(&[0, 0, 0, 1, 1, 1, 1], 2)).unwrap();
        assert!(matches!(
            overlattice(&l, &[g1, g2]),
            Err(LatticeError::NonIntegralGlue { first: 0, second: 1, .. })
        ));
    }

    #[test]
    fn length_bound_examples() {
        let twelve_a1 = GramLattice::from_gram(IntMatrix::from_fn(12, 12, |r, c| {
            if r == c {
                BigInt::from(-2)
            } else {
                BigInt::zero()
            }
        }))
        .unwrap();
        let check = length_bound_check(&twelve_a1, 22).unwrap();
        assert!(!check.holds);
        assert_eq!((check.length, check.bound, check.excess), (12, 10, 2));
        assert!(length_bound_check(&a_n(1), 22).unwrap().holds);
    }

    #[test]
    fn rational_strings_round_trip() {
        let v = RationalVector(vec![q(1, 4), q(-3, 1), q(0, 1)]);
        let s = v.to_strings();
        assert_eq!(s, vec!["1/4", "-3", "0"]);
        assert_eq!(RationalVector::parse_strings(&s).unwrap(), v);
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn json_interchange_round_trips() {
        let l = a_n(2);
        let json = serde_json::to_string(&l.to_json()).unwrap();
        assert_eq!(json, r#"{"rank":2,"gram":[[-2,1],[1,-2]],"labels":["e1","e2"]}"#);
        let back: LatticeJson = serde_json::from_str(&json).unwrap();
        assert_eq!(GramLattice::from_json(&back).unwrap(), l);
    }
}
