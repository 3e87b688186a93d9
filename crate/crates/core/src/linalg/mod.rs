//! Exact rational and integer linear algebra.
//!
//! Every lattice computation in the crate goes through this module. Values
//! are arbitrary-precision, so overflow cannot occur; matrices are small
//! (rank at most ~16) and stored densely.

mod hnf;
mod lattice;
mod matrix;
mod projector;
mod smith;

pub use hnf::{hermite_normal_form, left_kernel};
pub use lattice::{
    image_lattice, intersection_with_subspace, primitive_multiple, saturated_kernel, IntLattice,
    RatLattice,
};
pub use matrix::{IntMatrix, RatMatrix};
pub use projector::OrthogonalProjector;
pub use smith::{elementary_divisors, smith_normal_form};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar.
pub type Q = BigRational;
/// Arbitrary-precision integer.
pub type Int = BigInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("zero vector has no primitive multiple")]
    ZeroVector,
    #[error("vector does not lie in the rational span of the lattice")]
    NotInSpan,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
}

pub fn q(n: i64) -> Q {
    Q::from_integer(Int::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(Int::from(n), Int::from(d))
}

pub fn qvec(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

pub fn int_to_q(v: &[Int]) -> Vec<Q> {
    v.iter().map(|x| Q::from_integer(x.clone())).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Q], s: &Q) -> Vec<Q> {
    a.iter().map(|x| x * s).collect()
}

pub fn neg(a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(a: &[Q]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Bilinear form `a^T g b`.
pub fn form(g: &RatMatrix, a: &[Q], b: &[Q]) -> Q {
    dot(a, &g.mul_vec(b))
}

/// Least common multiple of all denominators.
pub fn common_denominator(v: &[Q]) -> Int {
    v.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational vector to an integer vector with coprime entries
/// pointing the same way. Zero maps to zero.
pub fn primitive_integer(v: &[Q]) -> Vec<Int> {
    let den = common_denominator(v);
    let ints: Vec<Int> = v.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Rational gcd of a vector: the largest positive `g` such that every entry is
/// an integer multiple of `g`. Zero for the zero vector.
pub fn rational_content(v: &[Q]) -> Q {
    let den = common_denominator(v);
    let num = v
        .iter()
        .map(|x| (x * Q::from_integer(den.clone())).to_integer())
        .fold(Int::zero(), |acc, x| acc.gcd(&x));
    Q::new(num, den)
}

pub fn is_integral(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn to_int_vec(v: &[Q]) -> Option<Vec<Int>> {
    v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

/// Formats a rational the way reports print it: `3`, `-1/2`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"p/q"`, `"p"` or a decimal-free integer string.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Int = n.trim().parse().ok()?;
            let d: Int = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => s.parse::<Int>().ok().map(Q::from_integer),
    }
}
