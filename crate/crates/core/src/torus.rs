//! Finite groups of affine maps `x -> Mx + r` on real 4-tori `R^4 / L`,
//! their fixed points, orbits, stabilizers and the resulting quotient
//! singularities.
//!
//! Maps are stored in lattice coordinates: `M` is an integral unimodular
//! matrix and `r` is reduced into `[0,1)^4`. Points are rational vectors in
//! lattice coordinates, reduced the same way.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::ade::{AdeConfig, Component};
use crate::lattice::RationalVector;
use crate::matrix::{IntMatrix, RatMatrix};
use crate::quaternion::{left_mult_matrix, right_mult_matrix, QuatAlgebra, QuatRational};
use crate::snf::smith_normal_form;

/// Groups larger than this are rejected during closure.
pub const CLOSURE_BOUND: usize = 120;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorusError {
    #[error("lattice basis is singular")]
    SingularBasis,
    #[error("complex structure must square to -1")]
    BadComplexStructure,
    #[error("linear part does not preserve the lattice {lattice}")]
    NotLatticePreserving { lattice: String },
    #[error("group closure exceeds {bound} elements")]
    ClosureExceedsBound { bound: usize },
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("unknown lattice {0:?}; expected a, a0, b or Z4")]
    UnknownLattice(String),
    #[error("group {group} is defined in a different coordinate frame than lattice {lattice}")]
    IncompatibleLattice { group: String, lattice: String },
    #[error("element {element} has a positive-dimensional fixed locus")]
    NonIsolatedFixedLocus { element: AffineTorusMap },
    #[error("stabilizer of order {order} is not symplectic")]
    NonSymplectic { order: usize },
    #[error("stabilizer of order {order} is not a recognised du Val group")]
    UnrecognizedGroup { order: usize },
    #[error("{0} is not a 2-torsion point")]
    NotTwoTorsion(String),
    #[error("malformed point {0:?}")]
    BadPoint(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn reduce(v: Vec<BigRational>) -> RationalVector {
    RationalVector(v).reduced_mod_one()
}

/// A full-rank lattice in `Q^4`, written in a fixed real frame, together with
/// a complex structure `J` on that frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusLattice {
    name: String,
    /// Rows are basis vectors in frame coordinates.
    basis: RatMatrix,
    complex_structure: RatMatrix,
    /// Quaternion algebra whose `(1, I, J, K)` frame the basis is written in.
    algebra: Option<QuatAlgebra>,
    columns: RatMatrix,
    columns_inv: RatMatrix,
}

impl TorusLattice {
    pub fn new(
        name: &str,
        basis: RatMatrix,
        complex_structure: RatMatrix,
        algebra: Option<QuatAlgebra>,
    ) -> Result<Self, TorusError> {
        if basis.rows() != 4 || basis.cols() != 4 {
            return Err(TorusError::SingularBasis);
        }
        let columns = basis.transpose();
        let columns_inv = columns.inverse().ok_or(TorusError::SingularBasis)?;
        let square = &complex_structure * &complex_structure;
        let minus_one = RatMatrix::identity(4).map(|x| -x);
        if square != minus_one {
            return Err(TorusError::BadComplexStructure);
        }
        Ok(Self { name: name.to_string(), basis, complex_structure, algebra, columns, columns_inv })
    }

    fn quaternionic(name: &str, rows: [QuatRational; 4], algebra: QuatAlgebra) -> Self {
        let basis = RatMatrix::from_rows(rows.iter().map(|q| q.coords.to_vec()).collect());
        let i = QuatRational::from_fraction_in([0, 1, 0, 0], 1, algebra);
        Self::new(name, basis, right_mult_matrix(&i), Some(algebra)).expect("standard lattice")
    }

    /// Hurwitz quaternions `Z[1, i, j, t]`, `t = (1+i+j+k)/2`.
    pub fn hurwitz() -> Self {
        Self::quaternionic(
            "a",
            [QuatRational::one(), QuatRational::i(), QuatRational::j(), QuatRational::hurwitz_t()],
            QuatAlgebra::HAMILTON,
        )
    }

    /// Lipschitz quaternions `Z[1, i, j, k]`.
    pub fn lipschitz() -> Self {
        Self::quaternionic(
            "a0",
            [QuatRational::one(), QuatRational::i(), QuatRational::j(), QuatRational::k()],
            QuatAlgebra::HAMILTON,
        )
    }

    /// `Z[1, i, h, l]` in the algebra `(-1, -3)` with `h = (i+J)/2`, `l = (1+K)/2`.
    pub fn order_b() -> Self {
        let alg = QuatAlgebra::MINUS_ONE_MINUS_THREE;
        Self::quaternionic(
            "b",
            [
                QuatRational::from_fraction_in([1, 0, 0, 0], 1, alg),
                QuatRational::from_fraction_in([0, 1, 0, 0], 1, alg),
                QuatRational::from_fraction_in([0, 1, 1, 0], 2, alg),
                QuatRational::from_fraction_in([1, 0, 0, 1], 2, alg),
            ],
            alg,
        )
    }

    /// `Z^4` with the complex structure of `C x C`, coordinates `(x1, y1, x2, y2)`.
    pub fn product() -> Self {
        let j = IntMatrix::from_i64_rows(&[
            vec![0, -1, 0, 0],
            vec![1, 0, 0, 0],
            vec![0, 0, 0, -1],
            vec![0, 0, 1, 0],
        ])
        .to_rational();
        Self::new("Z4", RatMatrix::identity(4), j, None).expect("standard lattice")
    }

    pub fn by_name(name: &str) -> Result<Self, TorusError> {
        match name.trim() {
            "a" | "hurwitz" => Ok(Self::hurwitz()),
            "a0" | "lipschitz" => Ok(Self::lipschitz()),
            "b" => Ok(Self::order_b()),
            "Z4" | "z4" | "product" => Ok(Self::product()),
            other => Err(TorusError::UnknownLattice(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn algebra(&self) -> Option<QuatAlgebra> {
        self.algebra
    }

    /// Coordinates of a frame vector in the lattice basis.
    pub fn to_lattice_coords(&self, frame: &[BigRational]) -> RationalVector {
        RationalVector(self.columns_inv.apply(frame))
    }

    pub fn to_frame(&self, coords: &RationalVector) -> Vec<BigRational> {
        self.columns.apply(coords.coords())
    }

    /// `B^-1 M B`, the matrix of a frame map in lattice coordinates.
    pub fn in_basis(&self, m: &RatMatrix) -> RatMatrix {
        &(&self.columns_inv * m) * &self.columns
    }

    /// The matrix in lattice coordinates if `M` maps the lattice onto itself.
    pub fn linear_in_basis(&self, m: &RatMatrix) -> Option<IntMatrix> {
        let local = self.in_basis(m).to_integer()?;
        local.determinant().abs().is_one().then_some(local)
    }

    pub fn complex_structure_in_basis(&self) -> RatMatrix {
        self.in_basis(&self.complex_structure)
    }

    /// The lattice-coordinate vector with entries `digits / 2`, the `abcd`
    /// notation for 2-torsion points.
    pub fn parse_abcd(text: &str) -> Result<RationalVector, TorusError> {
        let digits: Vec<i64> = text
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(TorusError::BadPoint(text.to_string())),
            })
            .collect::<Result<_, _>>()?;
        if digits.len() != 4 {
            return Err(TorusError::BadPoint(text.to_string()));
        }
        Ok(RationalVector(digits.iter().map(|&d| rat(d, 2)).collect()))
    }
}

/// `abcd` label of a 2-torsion point, if it is one.
pub fn abcd(point: &RationalVector) -> Option<String> {
    let half = rat(1, 2);
    point
        .coords()
        .iter()
        .map(|x| {
            if x.is_zero() {
                Some('0')
            } else if *x == half {
                Some('1')
            } else {
                None
            }
        })
        .collect()
}

/// `x -> Mx + r` in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineTorusMap {
    pub linear: IntMatrix,
    pub translation: RationalVector,
}

impl AffineTorusMap {
    pub fn identity() -> Self {
        Self { linear: IntMatrix::identity(4), translation: RationalVector::zero(4) }
    }

    pub fn new(linear: IntMatrix, translation: RationalVector) -> Self {
        Self { linear, translation: translation.reduced_mod_one() }
    }

    /// Builds a map from its frame description `(M; r)`.
    pub fn from_frame(
        lattice: &TorusLattice,
        linear: &RatMatrix,
        translation: &[BigRational],
    ) -> Result<Self, TorusError> {
        let m = lattice
            .linear_in_basis(linear)
            .ok_or_else(|| TorusError::NotLatticePreserving { lattice: lattice.name().to_string() })?;
        Ok(Self::new(m, lattice.to_lattice_coords(translation)))
    }

    /// `(q; r)`: left multiplication by `q` followed by translation by `r`.
    pub fn quaternion(lattice: &TorusLattice, q: &QuatRational, r: &QuatRational) -> Result<Self, TorusError> {
        Self::from_frame(lattice, &left_mult_matrix(q), &r.coords)
    }

    pub fn is_identity(&self) -> bool {
        self.linear.is_identity() && self.translation.coords().iter().all(Zero::is_zero)
    }

    pub fn is_translation(&self) -> bool {
        self.linear.is_identity()
    }

    /// `self o other`.
    pub fn compose(&self, other: &Self) -> Self {
        let m = self.linear.to_rational();
        let moved = m.apply(other.translation.coords());
        let r = moved.iter().zip(self.translation.coords()).map(|(a, b)| a + b).collect();
        Self { linear: &self.linear * &other.linear, translation: reduce(r) }
    }

    pub fn inverse(&self) -> Self {
        let inv = self.linear.to_rational().inverse().expect("unimodular");
        let r = inv.apply(self.translation.coords()).into_iter().map(|x| -x).collect();
        Self { linear: inv.to_integer().expect("unimodular"), translation: reduce(r) }
    }

    pub fn apply(&self, point: &RationalVector) -> RationalVector {
        let moved = self.linear.to_rational().apply(point.coords());
        reduce(moved.iter().zip(self.translation.coords()).map(|(a, b)| a + b).collect())
    }

    /// Order of the linear part, if at most `limit`.
    pub fn linear_order(&self, limit: usize) -> Option<usize> {
        linear_order(&self.linear, limit)
    }
}

fn linear_order(m: &IntMatrix, limit: usize) -> Option<usize> {
    let mut power = m.clone();
    for n in 1..=limit {
        if power.is_identity() {
            return Some(n);
        }
        power = &power * m;
    }
    None
}

impl fmt::Display for AffineTorusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..4)
            .map(|r| {
                let entries: Vec<String> = self.linear.row(r).iter().map(|x| x.to_string()).collect();
                format!("[{}]", entries.join(", "))
            })
            .collect();
        write!(f, "([{}]; {})", rows.join(", "), self.translation)
    }
}

/// A finite group of affine maps on one torus.
#[derive(Clone, Debug)]
pub struct TorusGroup {
    pub name: String,
    pub lattice: TorusLattice,
    /// The identity comes first; the rest follow in discovery order.
    pub elements: Vec<AffineTorusMap>,
}

impl TorusGroup {
    /// Breadth-first closure of the generators under composition.
    pub fn generate(name: &str, lattice: TorusLattice, generators: &[AffineTorusMap]) -> Result<Self, TorusError> {
        let identity = AffineTorusMap::identity();
        let mut seen: HashSet<AffineTorusMap> = HashSet::from([identity.clone()]);
        let mut elements = vec![identity.clone()];
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = g.compose(&x);
                if seen.insert(y.clone()) {
                    if elements.len() == CLOSURE_BOUND {
                        return Err(TorusError::ClosureExceedsBound { bound: CLOSURE_BOUND });
                    }
                    elements.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(Self { name: name.to_string(), lattice, elements })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &AffineTorusMap) -> bool {
        self.elements.contains(g)
    }

    /// Closed under products and inverses, with the identity.
    pub fn is_closed(&self) -> bool {
        let set: HashSet<&AffineTorusMap> = self.elements.iter().collect();
        set.len() == self.elements.len()
            && set.contains(&AffineTorusMap::identity())
            && self.elements.iter().all(|g| set.contains(&g.inverse()))
            && self.elements.iter().all(|g| self.elements.iter().all(|h| set.contains(&g.compose(h))))
    }

    pub fn orbit(&self, point: &RationalVector) -> BTreeSet<RationalVector> {
        self.elements.iter().map(|g| g.apply(point)).collect()
    }

    pub fn stabilizer(&self, point: &RationalVector) -> Vec<&AffineTorusMap> {
        let p = point.reduced_mod_one();
        self.elements.iter().filter(|g| g.apply(&p) == p).collect()
    }

    /// Whether some non-identity element fixes every point of the torus.
    pub fn has_translations(&self) -> bool {
        self.elements.iter().skip(1).any(AffineTorusMap::is_translation)
    }
}

/// Solution set of `g(x) = x` on the torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedLocus {
    Points(Vec<RationalVector>),
    PositiveDimensional,
    Empty,
}

impl FixedLocus {
    pub fn points(&self) -> &[RationalVector] {
        match self {
            FixedLocus::Points(p) => p,
            _ => &[],
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, FixedLocus::Empty)
    }

    pub fn describe(&self) -> String {
        match self {
            FixedLocus::Points(p) => format!("{} points", p.len()),
            FixedLocus::PositiveDimensional => "positive-dimensional".to_string(),
            FixedLocus::Empty => "empty".to_string(),
        }
    }
}

/// Solves `(M - I) x = -r mod Z^4` through the Smith form of `M - I`.
pub fn fixed_points(g: &AffineTorusMap) -> FixedLocus {
    let n = g.linear.rows();
    let a = IntMatrix::from_fn(n, n, |r, c| {
        let x = g.linear[(r, c)].clone();
        if r == c {
            x - BigInt::one()
        } else {
            x
        }
    });
    let snf = smith_normal_form(&a);
    // D y = -U r with x = V y
    let minus_r: Vec<BigRational> = g.translation.coords().iter().map(|x| -x).collect();
    let c = snf.u.to_rational().apply(&minus_r);
    let diag = snf.diagonal();
    let mut free = false;
    for (d, ci) in diag.iter().zip(&c) {
        if d.is_zero() {
            if !ci.is_integer() {
                return FixedLocus::Empty;
            }
            free = true;
        }
    }
    if free {
        return FixedLocus::PositiveDimensional;
    }
    let mut ys: Vec<Vec<BigRational>> = vec![Vec::new()];
    for (d, ci) in diag.iter().zip(&c) {
        let dd = BigRational::from_integer(d.clone());
        let steps = d.to_string().parse::<u64>().expect("small invariant factor");
        let mut next = Vec::new();
        for y in &ys {
            for k in 0..steps {
                let mut y = y.clone();
                y.push((ci + BigRational::from_integer(k.into())) / &dd);
                next.push(y);
            }
        }
        ys = next;
    }
    let v = snf.v.to_rational();
    let mut points: Vec<RationalVector> = ys.into_iter().map(|y| reduce(v.apply(&y))).collect();
    points.sort();
    points.dedup();
    debug_assert!(points.iter().all(|p| g.apply(p) == *p));
    FixedLocus::Points(points)
}

/// Complex determinant of a real map commuting with `J`, as `(re, im)`.
fn complex_determinant(m: &RatMatrix, j: &RatMatrix) -> Option<(BigRational, BigRational)> {
    let e = |k: usize| -> Vec<BigRational> {
        (0..4).map(|i| if i == k { BigRational::one() } else { BigRational::zero() }).collect()
    };
    let u = e(0);
    let ju = j.apply(&u);
    let mut frame = None;
    for k in 1..4 {
        let w = e(k);
        let jw = j.apply(&w);
        let p = RatMatrix::from_fn(4, 4, |r, c| [&u, &ju, &w, &jw][c][r].clone());
        if !p.determinant().is_zero() {
            frame = Some(p);
            break;
        }
    }
    let p = frame?;
    let n = &(&p.inverse()? * m) * &p;
    let z = |r: usize, c: usize| (n[(2 * r, 2 * c)].clone(), n[(2 * r + 1, 2 * c)].clone());
    let mul = |a: (BigRational, BigRational), b: (BigRational, BigRational)| {
        (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
    };
    let p1 = mul(z(0, 0), z(1, 1));
    let p2 = mul(z(0, 1), z(1, 0));
    Some((p1.0 - p2.0, p1.1 - p2.1))
}

/// `M` is complex linear for `J` with complex determinant 1.
pub fn is_symplectic(m: &IntMatrix, j: &RatMatrix) -> bool {
    let mr = m.to_rational();
    if &mr * j != j * &mr {
        return false;
    }
    complex_determinant(&mr, j).is_some_and(|(re, im)| re.is_one() && im.is_zero())
}

/// du Val type of a finite subgroup of `SL(2, C)` given by its real matrices.
pub fn stabilizer_ade_type(linear_parts: &[IntMatrix], complex_structure: &RatMatrix) -> Result<Component, TorusError> {
    let order = linear_parts.len();
    if !linear_parts.iter().all(|m| is_symplectic(m, complex_structure)) {
        return Err(TorusError::NonSymplectic { order });
    }
    if ![2, 3, 4, 5, 6, 8, 12, 24].contains(&order) {
        return Err(TorusError::UnrecognizedGroup { order });
    }
    let orders: Vec<usize> = linear_parts
        .iter()
        .map(|m| linear_order(m, order).ok_or(TorusError::UnrecognizedGroup { order }))
        .collect::<Result<_, _>>()?;
    let max = orders.iter().copied().max().unwrap_or(1);
    let involutions = orders.iter().filter(|&&o| o == 2).count();
    let component = if max == order {
        Component::a(order as u32 - 1)
    } else if order.is_multiple_of(4) && involutions == 1 && max == order / 2 {
        // binary dihedral of order 4m has cyclic part of order 2m
        Component::d(order as u32 / 4 + 2)
    } else if order == 24 && involutions == 1 && max == 6 {
        Component::e(6)
    } else {
        return Err(TorusError::UnrecognizedGroup { order });
    };
    Ok(component)
}

/// One orbit of singular points on the quotient.
#[derive(Clone, Debug)]
pub struct OrbitRecord {
    pub representative: RationalVector,
    pub points: Vec<RationalVector>,
    pub stabilizer_order: usize,
    pub ade: Component,
}

#[derive(Clone, Debug)]
pub struct SingularityReport {
    pub group: String,
    pub lattice: String,
    pub group_order: usize,
    pub orbits: Vec<OrbitRecord>,
    pub config: AdeConfig,
    /// Euler number of the resolved quotient, `sum (rank + 1 - 1/|H|)`.
    pub euler_number: BigRational,
}

impl SingularityReport {
    pub fn point_count(&self) -> usize {
        self.orbits.iter().map(|o| o.points.len()).sum()
    }

    fn point_label(&self, p: &RationalVector) -> Value {
        let coords = p.to_strings();
        match (self.lattice.as_str(), abcd(p)) {
            ("a", Some(label)) => json!({"coords": coords, "abcd": label}),
            _ => json!({"coords": coords}),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut points = Vec::new();
        for (k, orbit) in self.orbits.iter().enumerate() {
            for p in &orbit.points {
                let mut entry = self.point_label(p);
                entry["orbit"] = json!(k);
                entry["stabilizer_order"] = json!(orbit.stabilizer_order);
                entry["ade"] = json!(orbit.ade.to_string());
                points.push(entry);
            }
        }
        json!({
            "group": self.group,
            "lattice": self.lattice,
            "group_order": self.group_order,
            "points": points,
            "config": self.config.to_string(),
            "euler_number": crate::lattice::rational_to_string(&self.euler_number),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "group {} (order {}) on lattice {}: {} fixed points in {} orbits\n",
            self.group,
            self.group_order,
            self.lattice,
            self.point_count(),
            self.orbits.len()
        );
        for orbit in &self.orbits {
            let name = |p: &RationalVector| match (self.lattice.as_str(), abcd(p)) {
                ("a", Some(label)) => label,
                _ => p.to_string(),
            };
            let pts: Vec<String> = orbit.points.iter().map(name).collect();
            out.push_str(&format!(
                "  {} (stabilizer order {}): {}\n",
                orbit.ade,
                orbit.stabilizer_order,
                pts.join(" ")
            ));
        }
        out.push_str(&format!("configuration: {}\n", self.config));
        out
    }
}

/// Fixed points of all non-identity elements, grouped into orbits and typed
/// by their stabilizers.
pub fn singularity_configuration(group: &TorusGroup) -> Result<SingularityReport, TorusError> {
    let mut points = BTreeSet::new();
    for g in group.elements.iter().filter(|g| !g.is_identity()) {
        match fixed_points(g) {
            FixedLocus::Points(p) => points.extend(p),
            FixedLocus::PositiveDimensional => {
                return Err(TorusError::NonIsolatedFixedLocus { element: g.clone() })
            }
            FixedLocus::Empty => {}
        }
    }
    let j = group.lattice.complex_structure_in_basis();
    let n = group.order();
    let mut orbits = Vec::new();
    let mut config = AdeConfig::empty();
    let mut euler = BigRational::zero();
    let mut done: BTreeSet<RationalVector> = BTreeSet::new();
    for p in &points {
        if done.contains(p) {
            continue;
        }
        let orbit = group.orbit(p);
        let stab = group.stabilizer(p);
        if orbit.len() * stab.len() != n {
            return Err(TorusError::InvariantViolation(format!(
                "orbit of {p} has size {} and stabilizer order {} in a group of order {n}",
                orbit.len(),
                stab.len()
            )));
        }
        if !orbit.iter().all(|q| points.contains(q)) {
            return Err(TorusError::InvariantViolation(format!("orbit of {p} leaves the fixed set")));
        }
        let linear: Vec<IntMatrix> = stab.iter().map(|g| g.linear.clone()).collect();
        let ade = stabilizer_ade_type(&linear, &j)?;
        if ade.group_order() as usize != stab.len() {
            return Err(TorusError::InvariantViolation(format!("{ade} does not match stabilizer order {}", stab.len())));
        }
        config.add_component(ade, 1);
        euler += ade.m_value();
        done.extend(orbit.iter().cloned());
        orbits.push(OrbitRecord {
            representative: p.clone(),
            points: orbit.into_iter().collect(),
            stabilizer_order: stab.len(),
            ade,
        });
    }
    let ranks: usize = orbits.iter().map(|o| o.ade.rank()).sum();
    if ranks != config.rank() || euler != config.m_value() {
        return Err(TorusError::InvariantViolation("configuration rank or Euler number mismatch".to_string()));
    }
    Ok(SingularityReport {
        group: group.name.clone(),
        lattice: group.lattice.name().to_string(),
        group_order: n,
        orbits,
        config,
        euler_number: euler,
    })
}

/// Half the quaternion with the given integer coordinates, `(x0 + x1 i + x2 j + x3 k) / den`.
fn hq(num: [i64; 4], den: i64) -> QuatRational {
    QuatRational::from_fraction(num, den)
}

fn zero() -> QuatRational {
    hq([0; 4], 1)
}

/// `i`, `j' = (j; (1+i)/2)` and `k' = (k; (1+i)/2)` on the Hurwitz torus.
pub fn q8hat_elements() -> (AffineTorusMap, AffineTorusMap, AffineTorusMap) {
    let a = TorusLattice::hurwitz();
    let alpha = hq([1, 1, 0, 0], 2);
    let i = AffineTorusMap::quaternion(&a, &QuatRational::i(), &zero()).expect("i preserves a");
    let j = AffineTorusMap::quaternion(&a, &QuatRational::j(), &alpha).expect("j preserves a");
    let k = AffineTorusMap::quaternion(&a, &QuatRational::k(), &alpha).expect("k preserves a");
    (i, j, k)
}

/// Names accepted by [`standard_group`], with their default lattices.
pub const STANDARD_GROUPS: [(&str, &str); 10] = [
    ("neg1", "a"),
    ("i", "a"),
    ("Q8", "a0"),
    ("Q8inT24", "a"),
    ("Q8hat", "a"),
    ("D12", "b"),
    ("T24", "a"),
    ("T24hat", "a"),
    ("lieberman", "Z4"),
    ("D4", "Z4"),
];

fn canonical_name(name: &str) -> Result<&'static str, TorusError> {
    let key = name.trim().to_ascii_lowercase().replace(['_', '-', ' '], "");
    let found = match key.as_str() {
        "neg1" | "-1" | "z2" | "<-1>" => "neg1",
        "i" | "<i>" | "z4" => "i",
        "q8" => "Q8",
        "q8int24" | "q8subt24" => "Q8inT24",
        "q8hat" => "Q8hat",
        "d12" | "q12" => "D12",
        "t24" => "T24",
        "t24hat" => "T24hat",
        "lieberman" => "lieberman",
        "d4" => "D4",
        _ => return Err(TorusError::UnknownGroup(name.to_string())),
    };
    Ok(found)
}

/// The default lattice for a standard group name.
pub fn default_lattice(name: &str) -> Result<TorusLattice, TorusError> {
    let canonical = canonical_name(name)?;
    let lattice = STANDARD_GROUPS.iter().find(|(g, _)| *g == canonical).map(|(_, l)| *l).unwrap_or("a");
    TorusLattice::by_name(lattice)
}

pub fn standard_group(name: &str) -> Result<TorusGroup, TorusError> {
    standard_group_on(name, default_lattice(name)?)
}

/// A standard group acting on a chosen lattice of the same frame.
pub fn standard_group_on(name: &str, lattice: TorusLattice) -> Result<TorusGroup, TorusError> {
    let canonical = canonical_name(name)?;
    let frame = match canonical {
        "D12" => Some(QuatAlgebra::MINUS_ONE_MINUS_THREE),
        "lieberman" | "D4" => None,
        "neg1" => lattice.algebra(),
        _ => Some(QuatAlgebra::HAMILTON),
    };
    if frame != lattice.algebra() {
        return Err(TorusError::IncompatibleLattice { group: canonical.to_string(), lattice: lattice.name().to_string() });
    }
    let quat = |q: QuatRational, r: QuatRational| AffineTorusMap::quaternion(&lattice, &q, &r);
    let generators = match canonical {
        "neg1" => {
            let minus = RatMatrix::identity(4).map(|x| -x);
            vec![AffineTorusMap::from_frame(&lattice, &minus, &[BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::zero()])?]
        }
        "i" => vec![quat(QuatRational::i(), zero())?],
        "Q8" | "Q8inT24" => vec![quat(QuatRational::i(), zero())?, quat(QuatRational::j(), zero())?],
        "T24" => vec![
            quat(QuatRational::i(), zero())?,
            quat(QuatRational::j(), zero())?,
            quat(QuatRational::hurwitz_t(), zero())?,
        ],
        "Q8hat" => vec![quat(QuatRational::i(), zero())?, quat(QuatRational::j(), hq([1, 1, 0, 0], 2))?],
        "T24hat" => vec![
            quat(QuatRational::i(), zero())?,
            quat(QuatRational::j(), hq([1, 1, 0, 0], 2))?,
            // (t; s/2) with s = (1 + i - j + k)/2
            quat(QuatRational::hurwitz_t(), hq([1, 1, -1, 1], 4))?,
        ],
        "D12" => {
            let alg = QuatAlgebra::MINUS_ONE_MINUS_THREE;
            let z = QuatRational::from_fraction_in([0; 4], 1, alg);
            vec![
                AffineTorusMap::quaternion(&lattice, &QuatRational::from_fraction_in([0, 1, 0, 0], 1, alg), &z)?,
                AffineTorusMap::quaternion(&lattice, &QuatRational::from_fraction_in([1, 0, 0, 1], 2, alg), &z)?,
            ]
        }
        "lieberman" => return lieberman_group(&RationalVector::from_fraction(&[1, 0], 2), &RationalVector::from_fraction(&[1, 0], 2)),
        "D4" => return dihedral_group(),
        _ => unreachable!("canonical names are exhaustive"),
    };
    TorusGroup::generate(canonical, lattice, &generators)
}

fn check_two_torsion(e: &RationalVector) -> Result<(), TorusError> {
    let two = BigRational::from_integer(BigInt::from(2));
    if e.len() != 2 || !e.scale(&two).is_integral() {
        return Err(TorusError::NotTwoTorsion(e.to_string()));
    }
    Ok(())
}

/// `tau(z1, z2) = (-z1 + e1, z2 + e2)`.
pub fn lieberman_tau(e1: &RationalVector, e2: &RationalVector) -> Result<AffineTorusMap, TorusError> {
    check_two_torsion(e1)?;
    check_two_torsion(e2)?;
    let m = IntMatrix::from_i64_rows(&[vec![-1, 0, 0, 0], vec![0, -1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
    let r = e1.coords().iter().chain(e2.coords()).cloned().collect();
    Ok(AffineTorusMap::new(m, RationalVector(r)))
}

/// `{1, -1, tau, -tau}` on a product of two elliptic curves.
pub fn lieberman_group(e1: &RationalVector, e2: &RationalVector) -> Result<TorusGroup, TorusError> {
    let tau = lieberman_tau(e1, e2)?;
    let minus = AffineTorusMap::new(IntMatrix::identity(4).map(|x| -x), RationalVector::zero(4));
    TorusGroup::generate("lieberman", TorusLattice::product(), &[minus, tau])
}

/// `sigma(z1, z2) = (-z1, z2) + v` and `mu(z1, z2) = (-z2, z1)` on `C/Z[i] x C/Z[i]`,
/// with `v = (1/2, 1/2)` so that the group has order 8.
pub fn dihedral_group() -> Result<TorusGroup, TorusError> {
    let sigma = AffineTorusMap::new(
        IntMatrix::from_i64_rows(&[vec![-1, 0, 0, 0], vec![0, -1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]),
        RationalVector::from_fraction(&[1, 0, 1, 0], 2),
    );
    let mu = AffineTorusMap::new(
        IntMatrix::from_i64_rows(&[vec![0, 0, -1, 0], vec![0, 0, 0, -1], vec![1, 0, 0, 0], vec![0, 1, 0, 0]]),
        RationalVector::zero(4),
    );
    TorusGroup::generate("D4", TorusLattice::product(), &[sigma, mu])
}

/// `sigma o mu` in [`dihedral_group`].
pub fn dihedral_sigma_mu() -> AffineTorusMap {
    let g = dihedral_group().expect("dihedral group closes");
    g.elements[1].compose(&g.elements[2])
}

#[derive(Clone, Debug)]
pub struct LiebermanReport {
    pub e1: RationalVector,
    pub e2: RationalVector,
    pub tau_fixed: FixedLocus,
    pub minus_tau_fixed: FixedLocus,
    pub minus_one_fixed_points: usize,
    pub group_order: usize,
    pub configuration: Result<SingularityReport, TorusError>,
}

impl LiebermanReport {
    pub fn tau_fixed_point_free(&self) -> bool {
        self.tau_fixed.is_empty()
    }

    pub fn minus_tau_fixed_point_free(&self) -> bool {
        self.minus_tau_fixed.is_empty()
    }

    pub fn quotient_config(&self) -> Option<&AdeConfig> {
        self.configuration.as_ref().ok().map(|r| &r.config)
    }

    /// `tau` and `-tau` act freely and the quotient carries `8A1`.
    pub fn passes(&self) -> bool {
        let eight_a1: AdeConfig = "8A1".parse().expect("valid config");
        self.tau_fixed_point_free()
            && self.minus_tau_fixed_point_free()
            && self.group_order == 4
            && self.quotient_config() == Some(&eight_a1)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "e1": self.e1.to_strings(),
            "e2": self.e2.to_strings(),
            "tau_fixed": self.tau_fixed.describe(),
            "minus_tau_fixed": self.minus_tau_fixed.describe(),
            "minus_one_fixed_points": self.minus_one_fixed_points,
            "group_order": self.group_order,
            "config": self.quotient_config().map(|c| c.to_string()),
            "error": self.configuration.as_ref().err().map(|e| e.to_string()),
            "passes": self.passes(),
        })
    }
}

pub fn lieberman_check(e1: &RationalVector, e2: &RationalVector) -> Result<LiebermanReport, TorusError> {
    let group = lieberman_group(e1, e2)?;
    let tau = lieberman_tau(e1, e2)?;
    let minus = AffineTorusMap::new(IntMatrix::identity(4).map(|x| -x), RationalVector::zero(4));
    let minus_tau = minus.compose(&tau);
    Ok(LiebermanReport {
        e1: e1.clone(),
        e2: e2.clone(),
        tau_fixed: fixed_points(&tau),
        minus_tau_fixed: fixed_points(&minus_tau),
        minus_one_fixed_points: fixed_points(&minus).points().len(),
        group_order: group.order(),
        configuration: singularity_configuration(&group),
    })
}

/// Expected quotient configurations of the standard groups on their default lattices.
pub fn expected_configurations() -> BTreeMap<&'static str, &'static str> {
    BTreeMap::from([
        ("neg1", "16A1"),
        ("i", "6A1+4A3"),
        ("Q8", "2A1+3A3+2D4"),
        ("Q8inT24", "3A1+4D4"),
        ("Q8hat", "A1+6A3"),
        ("D12", "A1+2A2+3A3+D5"),
        ("T24", "A1+4A2+D4+E6"),
        ("T24hat", "4A2+2A3+A5"),
        ("lieberman", "8A1"),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(locus: &FixedLocus) -> Vec<String> {
        let mut out: Vec<String> = locus.points().iter().map(|p| abcd(p).unwrap()).collect();
        out.sort();
        out
    }

    fn sorted(v: &[&str]) -> Vec<String> {
        let mut out: Vec<String> = v.iter().map(|s| s.to_string()).collect();
        out.sort();
        out
    }

    #[test]
    fn group_orders() {
        let orders = [
            ("neg1", 2),
            ("i", 4),
            ("Q8", 8),
            ("Q8inT24", 8),
            ("Q8hat", 8),
            ("D12", 12),
            ("T24", 24),
            ("T24hat", 24),
            ("lieberman", 4),
            ("D4", 8),
        ];
        for (name, n) in orders {
            let g = standard_group(name).unwrap();
            assert_eq!(g.order(), n, "{name}");
            assert!(g.is_closed(), "{name}");
            assert!(!g.has_translations(), "{name}");
        }
        let q8hat = standard_group("Q8hat").unwrap();
        let t24hat = standard_group("T24hat").unwrap();
        assert!(q8hat.elements.iter().all(|g| t24hat.contains(g)));
    }

    #[test]
    fn quaternion_fixed_points() {
        let (i, j, k) = q8hat_elements();
        assert_eq!(labels(&fixed_points(&i)), sorted(&["0000", "1100", "1010", "0110"]));
        assert_eq!(labels(&fixed_points(&j)), sorted(&["0011", "0101", "1001", "1111"]));
        assert_eq!(labels(&fixed_points(&k)), sorted(&["0001", "1011", "0111", "1101"]));
        let minus = standard_group("neg1").unwrap();
        assert_eq!(fixed_points(&minus.elements[1]).points().len(), 16);
    }

    #[test]
    fn identity_and_translations() {
        assert_eq!(fixed_points(&AffineTorusMap::identity()), FixedLocus::PositiveDimensional);
        let shift = AffineTorusMap::new(IntMatrix::identity(4), RationalVector::from_fraction(&[1, 0, 0, 0], 2));
        assert_eq!(fixed_points(&shift), FixedLocus::Empty);
    }

    #[test]
    fn quotient_configurations() {
        for (name, expected) in expected_configurations() {
            let report = singularity_configuration(&standard_group(name).unwrap()).unwrap();
            assert_eq!(report.config.to_string(), expected, "{name}");
        }
    }

    #[test]
    fn k3_quotients_have_euler_number_24() {
        for name in ["neg1", "i", "Q8", "Q8inT24", "Q8hat", "D12", "T24", "T24hat"] {
            let report = singularity_configuration(&standard_group(name).unwrap()).unwrap();
            assert_eq!(report.euler_number, BigRational::from_integer(24.into()), "{name}");
        }
    }

    #[test]
    fn lieberman() {
        let half = |a, b| RationalVector::from_fraction(&[a, b], 2);
        let ok = lieberman_check(&half(1, 0), &half(0, 1)).unwrap();
        assert!(ok.passes());
        assert_eq!(ok.minus_one_fixed_points, 16);
        assert_eq!(ok.quotient_config().unwrap().to_string(), "8A1");
        let degenerate = lieberman_check(&half(0, 0), &half(1, 1)).unwrap();
        assert!(degenerate.tau_fixed_point_free());
        assert_eq!(degenerate.minus_tau_fixed, FixedLocus::PositiveDimensional);
        assert!(!degenerate.passes());
        assert!(lieberman_check(&RationalVector::from_fraction(&[1, 0], 3), &half(1, 0)).is_err());
    }

    #[test]
    fn dihedral_group_has_a_fixed_curve() {
        let group = dihedral_group().unwrap();
        let sm = dihedral_sigma_mu();
        assert!(group.contains(&sm));
        assert_eq!(fixed_points(&sm), FixedLocus::PositiveDimensional);
        assert!(matches!(singularity_configuration(&group), Err(TorusError::NonIsolatedFixedLocus { .. })));
    }

    #[test]
    fn du_val_dictionary() {
        let j = TorusLattice::hurwitz().complex_structure_in_basis();
        let group = standard_group("T24").unwrap();
        let linear: Vec<IntMatrix> = group.elements.iter().map(|g| g.linear.clone()).collect();
        assert_eq!(stabilizer_ade_type(&linear, &j).unwrap(), Component::e(6));
        let i4 = standard_group("i").unwrap();
        let linear: Vec<IntMatrix> = i4.elements.iter().map(|g| g.linear.clone()).collect();
        assert_eq!(stabilizer_ade_type(&linear, &j).unwrap(), Component::a(3));
        assert_eq!(stabilizer_ade_type(&linear[..1], &j), Err(TorusError::UnrecognizedGroup { order: 1 }));
        let reflection = IntMatrix::from_i64_rows(&[vec![-1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
        assert_eq!(
            stabilizer_ade_type(&[IntMatrix::identity(4), reflection], &j),
            Err(TorusError::NonSymplectic { order: 2 })
        );
    }

    #[test]
    fn incompatible_and_bad_inputs() {
        assert!(matches!(standard_group_on("Q8", TorusLattice::order_b()), Err(TorusError::IncompatibleLattice { .. })));
        assert!(matches!(standard_group("Z7"), Err(TorusError::UnknownGroup(_))));
        // t does not preserve the Lipschitz order
        assert!(matches!(standard_group_on("T24", TorusLattice::lipschitz()), Err(TorusError::NotLatticePreserving { .. })));
        let big = AffineTorusMap::new(IntMatrix::identity(4), RationalVector::from_fraction(&[1, 0, 0, 0], 121));
        assert_eq!(
            TorusGroup::generate("shift", TorusLattice::product(), &[big]).unwrap_err(),
            TorusError::ClosureExceedsBound { bound: CLOSURE_BOUND }
        );
        assert_eq!(TorusLattice::parse_abcd("1010").unwrap(), RationalVector::from_fraction(&[1, 0, 1, 0], 2));
        assert!(TorusLattice::parse_abcd("102").is_err());
    }
}
