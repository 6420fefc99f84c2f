//! Rational quaternions in a quaternion algebra `(a, b)` over `Q`:
//! `I^2 = a`, `J^2 = b`, `K = IJ = -JI`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::lattice::rational_to_string;
use crate::matrix::RatMatrix;

/// Structure constants of the algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuatAlgebra {
    pub a: i64,
    pub b: i64,
}

impl QuatAlgebra {
    /// Hamilton's quaternions, `i^2 = j^2 = k^2 = -1`.
    pub const HAMILTON: QuatAlgebra = QuatAlgebra { a: -1, b: -1 };
    /// The algebra `(-1, -3)`, which contains a maximal order with units of order 6.
    pub const MINUS_ONE_MINUS_THREE: QuatAlgebra = QuatAlgebra { a: -1, b: -3 };
}

impl Default for QuatAlgebra {
    fn default() -> Self {
        Self::HAMILTON
    }
}

/// `x0 + x1 I + x2 J + x3 K` with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuatRational {
    pub coords: [BigRational; 4],
    pub algebra: QuatAlgebra,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl QuatRational {
    pub fn new(coords: [BigRational; 4], algebra: QuatAlgebra) -> Self {
        Self { coords, algebra }
    }

    /// Hamilton quaternion with coordinates `num / den`.
    pub fn from_fraction(num: [i64; 4], den: i64) -> Self {
        Self::from_fraction_in(num, den, QuatAlgebra::HAMILTON)
    }

    pub fn from_fraction_in(num: [i64; 4], den: i64, algebra: QuatAlgebra) -> Self {
        Self { coords: num.map(|n| rat(n, den)), algebra }
    }

    pub fn from_integers(num: [i64; 4]) -> Self {
        Self::from_fraction(num, 1)
    }

    pub fn one() -> Self {
        Self::from_integers([1, 0, 0, 0])
    }

    pub fn i() -> Self {
        Self::from_integers([0, 1, 0, 0])
    }

    pub fn j() -> Self {
        Self::from_integers([0, 0, 1, 0])
    }

    pub fn k() -> Self {
        Self::from_integers([0, 0, 0, 1])
    }

    /// `t = (1 + i + j + k) / 2`, a Hurwitz unit of order 6.
    pub fn hurwitz_t() -> Self {
        Self::from_fraction([1, 1, 1, 1], 2)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn conjugate(&self) -> Self {
        let [x0, x1, x2, x3] = &self.coords;
        Self { coords: [x0.clone(), -x1, -x2, -x3], algebra: self.algebra }
    }

    /// Reduced norm `x0^2 - a x1^2 - b x2^2 + ab x3^2`.
    pub fn norm(&self) -> BigRational {
        let [x0, x1, x2, x3] = &self.coords;
        let a = BigRational::from_integer(self.algebra.a.into());
        let b = BigRational::from_integer(self.algebra.b.into());
        x0 * x0 - &a * x1 * x1 - &b * x2 * x2 + &a * &b * x3 * x3
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conjugate();
        Some(Self { coords: c.coords.map(|x| x / &n), algebra: self.algebra })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self { coords: Self::one().coords, algebra: self.algebra };
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    fn basis(algebra: QuatAlgebra) -> [QuatRational; 4] {
        std::array::from_fn(|n| {
            let mut c = [0i64; 4];
            c[n] = 1;
            Self::from_fraction_in(c, 1, algebra)
        })
    }
}

impl Mul for &QuatRational {
    type Output = QuatRational;

    fn mul(self, q: &QuatRational) -> QuatRational {
        assert_eq!(self.algebra, q.algebra, "quaternions from different algebras");
        let a = BigRational::from_integer(self.algebra.a.into());
        let b = BigRational::from_integer(self.algebra.b.into());
        let ab = &a * &b;
        let [p0, p1, p2, p3] = &self.coords;
        let [q0, q1, q2, q3] = &q.coords;
        let c0 = p0 * q0 + &a * p1 * q1 + &b * p2 * q2 - &ab * p3 * q3;
        let c1 = p0 * q1 + p1 * q0 - &b * p2 * q3 + &b * p3 * q2;
        let c2 = p0 * q2 + p2 * q0 + &a * p1 * q3 - &a * p3 * q1;
        let c3 = p0 * q3 + p3 * q0 + p1 * q2 - p2 * q1;
        QuatRational { coords: [c0, c1, c2, c3], algebra: self.algebra }
    }
}

impl Mul for QuatRational {
    type Output = QuatRational;

    fn mul(self, q: QuatRational) -> QuatRational {
        &self * &q
    }
}

impl Add for &QuatRational {
    type Output = QuatRational;

    fn add(self, q: &QuatRational) -> QuatRational {
        let coords = std::array::from_fn(|n| &self.coords[n] + &q.coords[n]);
        QuatRational { coords, algebra: self.algebra }
    }
}

impl Sub for &QuatRational {
    type Output = QuatRational;

    fn sub(self, q: &QuatRational) -> QuatRational {
        let coords = std::array::from_fn(|n| &self.coords[n] - &q.coords[n]);
        QuatRational { coords, algebra: self.algebra }
    }
}

impl Neg for &QuatRational {
    type Output = QuatRational;

    fn neg(self) -> QuatRational {
        QuatRational { coords: self.coords.clone().map(|x| -x), algebra: self.algebra }
    }
}

impl fmt::Display for QuatRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "i", "j", "k"];
        let mut first = true;
        for (x, name) in self.coords.iter().zip(names) {
            if x.is_zero() {
                continue;
            }
            let s = rational_to_string(x);
            let (sign, body) = match s.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", s),
            };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (name.is_empty(), body == "1") {
                (true, _) => f.write_str(&body)?,
                (false, true) => f.write_str(name)?,
                (false, false) => write!(f, "{body}{name}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Matrix of `x -> q x` on column vectors in the `(1, I, J, K)` frame.
pub fn left_mult_matrix(q: &QuatRational) -> RatMatrix {
    let basis = QuatRational::basis(q.algebra);
    let images: Vec<QuatRational> = basis.iter().map(|e| q * e).collect();
    RatMatrix::from_fn(4, 4, |r, c| images[c].coords[r].clone())
}

/// Matrix of `x -> x q` on column vectors in the `(1, I, J, K)` frame.
pub fn right_mult_matrix(q: &QuatRational) -> RatMatrix {
    let basis = QuatRational::basis(q.algebra);
    let images: Vec<QuatRational> = basis.iter().map(|e| e * q).collect();
    RatMatrix::from_fn(4, 4, |r, c| images[c].coords[r].clone())
}

/// Coordinates of a quaternion as a column in the frame.
pub fn frame_vector(q: &QuatRational) -> Vec<BigRational> {
    q.coords.to_vec()
}
