//! Simplicial fans in `N_k`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{dot, elementary_divisors, int_to_q, IntLattice, IntMatrix, RatMatrix, Int, Q};
use crate::restriction::ValuationCone;
use crate::validation::{has_errors, Violation};

mod strata;

pub use strata::{standard_fan, strata, weyl_saturate, Stratum, StrataPoset, ORBIT_CEILING};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("cone {cone}: generator has {got} coordinates, expected {dim}")]
    Dimension { cone: usize, got: usize, dim: usize },
    #[error("cone {0}: zero generator")]
    ZeroGenerator(usize),
    #[error("cone {0}: generators are linearly dependent (only simplicial cones are supported)")]
    NonSimplicial(usize),
    #[error("fan has not passed validation")]
    NotValidated,
    #[error("valuation cone is not strictly convex")]
    NotConvex,
    #[error("orbit exceeds {cap} cones")]
    BudgetExceeded { cap: usize },
    #[error("saturated fan is invalid: {0}")]
    Invalid(String),
}

/// Simplicial cone given by primitive, linearly independent generators in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone {
    dim: usize,
    generators: Vec<Vec<Int>>,
}

fn primitive(v: &[Int]) -> Vec<Int> {
    let g = v.iter().fold(Int::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    if g.is_zero() {
        v.to_vec()
    } else {
        v.iter().map(|x| x / &g).collect()
    }
}

impl Cone {
    /// Normalizes generators to primitive vectors and sorts them. `tag`
    /// identifies the cone in errors.
    pub fn new(dim: usize, gens: &[Vec<Int>], tag: usize) -> Result<Self, FanError> {
        let mut generators = Vec::with_capacity(gens.len());
        for g in gens {
            if g.len() != dim {
                return Err(FanError::Dimension { cone: tag, got: g.len(), dim });
            }
            if g.iter().all(Zero::is_zero) {
                return Err(FanError::ZeroGenerator(tag));
            }
            generators.push(primitive(g));
        }
        generators.sort();
        let rows: Vec<Vec<Q>> = generators.iter().map(|g| int_to_q(g)).collect();
        if !rows.is_empty() && RatMatrix::from_rows(&rows, dim).rank() < rows.len() {
            return Err(FanError::NonSimplicial(tag));
        }
        Ok(Self { dim, generators })
    }

    pub fn from_i64(dim: usize, gens: &[&[i64]]) -> Result<Self, FanError> {
        let g: Vec<Vec<Int>> = gens.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
        Self::new(dim, &g, 0)
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, generators: Vec::new() }
    }

    /// Dimension of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the cone.
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Vec<Int>] {
        &self.generators
    }

    /// Every face, the zero cone and the cone itself included.
    pub fn faces(&self) -> Vec<Cone> {
        let k = self.generators.len();
        (0..1usize << k)
            .map(|mask| Cone {
                dim: self.dim,
                generators: (0..k).filter(|i| mask >> i & 1 == 1).map(|i| self.generators[i].clone()).collect(),
            })
            .collect()
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.generators.iter().all(|g| other.generators.contains(g))
    }

    /// Coordinates of `v` in the generators, if `v` lies in their span.
    pub fn simplicial_coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        if self.generators.is_empty() {
            return v.iter().all(Zero::is_zero).then(Vec::new);
        }
        let rows: Vec<Vec<Q>> = self.generators.iter().map(|g| int_to_q(g)).collect();
        RatMatrix::from_rows(&rows, self.dim).solve_left(v)
    }

    pub fn contains_point(&self, v: &[Q]) -> bool {
        self.simplicial_coords(v).is_some_and(|c| c.iter().all(|x| !x.is_negative()))
    }

    pub fn contains(&self, other: &Cone) -> bool {
        other.generators.iter().all(|g| self.contains_point(&int_to_q(g)))
    }

    /// Sum of the generators, a point of the relative interior.
    pub fn interior_point(&self) -> Vec<Q> {
        let mut s = vec![Q::zero(); self.dim];
        for g in &self.generators {
            for (a, b) in s.iter_mut().zip(g) {
                *a += Q::from_integer(b.clone());
            }
        }
        s
    }

    /// Whether `self ∩ other` is the cone on the shared generators, which
    /// is then a face of both.
    pub fn meets_in_face(&self, other: &Cone) -> bool {
        let shared: Vec<&Vec<Int>> = self.generators.iter().filter(|g| other.generators.contains(g)).collect();
        let mine: Vec<&Vec<Int>> = self.generators.iter().filter(|g| !shared.contains(g)).collect();
        let theirs: Vec<&Vec<Int>> = other.generators.iter().filter(|g| !shared.contains(g)).collect();
        if mine.is_empty() || theirs.is_empty() {
            return true;
        }
        // A bad point is x = Σ a_i g_i = Σ b_j h_j + Σ c_s s with a, b, c ≥ 0
        // and some a_i or b_j positive. Such points exist iff the cone
        // {(a, b, c) ≥ 0 : M (a, b, c) = 0} has an extreme ray outside the
        // shared coordinates. Extreme rays are sign-definite circuits of M.
        let cols: Vec<Vec<Q>> = mine
            .iter()
            .map(|g| int_to_q(g))
            .chain(theirs.iter().map(|h| int_to_q(h).iter().map(|x| -x).collect()))
            .chain(shared.iter().map(|s| int_to_q(s).iter().map(|x| -x).collect()))
            .collect();
        let free = mine.len() + theirs.len();
        !has_positive_circuit(&cols, self.dim, free)
    }
}

/// Whether some nonzero `y ≥ 0` with `Σ y_i cols_i = 0` has a positive entry
/// among the first `free` coordinates.
fn has_positive_circuit(cols: &[Vec<Q>], dim: usize, free: usize) -> bool {
    let n = cols.len();
    let max_support = dim + 1;
    let mut stack: Vec<Vec<usize>> = (0..free).map(|i| vec![i]).collect();
    // Enumerate supports containing at least one free index, smallest first
    // index being free keeps each support listed once.
    while let Some(support) = stack.pop() {
        if support.len() >= 2 {
            let m = RatMatrix::from_rows(&support.iter().map(|&i| cols[i].clone()).collect::<Vec<_>>(), dim);
            let ker = m.transpose().kernel();
            if ker.len() == 1 {
                let k = &ker[0];
                let all_pos = k.iter().all(Signed::is_positive);
                let all_neg = k.iter().all(Signed::is_negative);
                if all_pos || all_neg {
                    return true;
                }
            }
            if !ker.is_empty() {
                // Supersets of a dependent support are never circuits.
                continue;
            }
        }
        if support.len() < max_support {
            let last = *support.last().expect("nonempty");
            for j in last + 1..n {
                let mut s = support.clone();
                s.push(j);
                stack.push(s);
            }
        }
    }
    false
}

/// Finite set of simplicial cones closed under taking faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    cones: Vec<Cone>,
}

impl Fan {
    /// The fan of all faces of `cones`.
    pub fn from_cones(dim: usize, cones: impl IntoIterator<Item = Cone>) -> Self {
        let mut set: BTreeSet<Cone> = BTreeSet::new();
        set.insert(Cone::zero(dim));
        for c in cones {
            for f in c.faces() {
                set.insert(f);
            }
        }
        let mut cones: Vec<Cone> = set.into_iter().collect();
        cones.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
        Self { dim, cones }
    }

    /// Parses maximal cones from integer generator lists.
    pub fn from_generators(dim: usize, cones: &[Vec<Vec<i64>>]) -> Result<Self, FanError> {
        let parsed = cones
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let g: Vec<Vec<Int>> = c.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
                Cone::new(dim, &g, i + 1)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_cones(dim, parsed))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// All cones ordered by dimension, then lexicographically.
    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn index_of(&self, c: &Cone) -> Option<usize> {
        self.cones.iter().position(|x| x == c)
    }

    pub fn maximal_cones(&self) -> Vec<&Cone> {
        self.cones
            .iter()
            .filter(|c| !self.cones.iter().any(|d| d.dim() > c.dim() && c.is_face_of(d)))
            .collect()
    }

    pub fn rays(&self) -> Vec<&Cone> {
        self.cones.iter().filter(|c| c.dim() == 1).collect()
    }

    /// Whether some cone contains `v`.
    pub fn support_contains(&self, v: &[Q]) -> bool {
        self.maximal_cones().iter().any(|c| c.contains_point(v))
    }

    /// Removes a cone and every cone having it as a face.
    pub fn without(&self, c: &Cone) -> Fan {
        let keep = self.maximal_cones().into_iter().filter(|m| !c.is_face_of(m)).cloned().collect::<Vec<_>>();
        Fan::from_cones(self.dim, keep)
    }
}

/// Checks face closure, pairwise intersections and support in `Z_k`.
pub fn fan_validate(f: &Fan, zk: &ValuationCone) -> Vec<Violation> {
    let mut out = Vec::new();
    if zk.dim != f.dim {
        out.push(Violation::error(
            "fan-dimension",
            format!("fan lives in dimension {}, valuation cone in {}", f.dim, zk.dim),
        ));
        return out;
    }
    for c in &f.cones {
        if let Some(face) = c.faces().into_iter().find(|x| f.index_of(x).is_none()) {
            out.push(Violation::error("fan-faces", format!("a face {:?} of {:?} is missing", show(&face), show(c))));
        }
    }
    let max = f.maximal_cones();
    for (i, a) in max.iter().enumerate() {
        for b in &max[i + 1..] {
            if !a.meets_in_face(b) {
                out.push(Violation::error(
                    "fan-intersection",
                    format!("{} and {} meet outside a common face", show(a), show(b)),
                ));
            }
        }
    }
    for c in &max {
        for g in c.generators() {
            if !zk.contains(&int_to_q(g)) {
                out.push(Violation::error(
                    "fan-support",
                    format!("generator {} of {} leaves the valuation cone", show_vec(g), show(c)),
                ));
            }
        }
    }
    out
}

pub(crate) fn show_vec(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

pub(crate) fn show(c: &Cone) -> String {
    let parts: Vec<String> = c.generators.iter().map(|g| show_vec(g)).collect();
    format!("cone[{}]", parts.join(" "))
}

/// Wall criterion: all maximal cones are full-dimensional and every wall is
/// either shared by two maximal cones or lies on a wall `{σ = 0}` of `Z_k`.
pub fn is_complete_for(f: &Fan, zk: &ValuationCone) -> Result<bool, FanError> {
    if has_errors(&fan_validate(f, zk)) {
        return Err(FanError::NotValidated);
    }
    let d = f.dim;
    let max = f.maximal_cones();
    if max.is_empty() || max.iter().any(|c| c.dim() != d) {
        return Ok(false);
    }
    let ineq: Vec<Vec<Q>> = zk.inequalities.iter().map(|s| int_to_q(s)).collect();
    for c in &max {
        for skip in 0..d {
            let wall: Vec<&Vec<Int>> =
                c.generators.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, g)| g).collect();
            let sharing = max.iter().filter(|m| wall.iter().all(|g| m.generators.contains(g))).count();
            if sharing == 2 {
                continue;
            }
            let on_boundary = sharing == 1
                && ineq.iter().any(|s| {
                    wall.iter().all(|g| dot(s, &int_to_q(g)).is_zero())
                        && !dot(s, &int_to_q(&c.generators[skip])).is_zero()
                });
            if !on_boundary {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Per cone: its generators extend to a basis of the lattice dual to `xik`.
/// `xik` lives in the coordinates dual to those of the fan.
pub fn is_smooth(f: &Fan, xik: &IntLattice) -> Vec<bool> {
    let basis = xik.basis_rows();
    f.cones
        .iter()
        .map(|c| {
            if c.dim() == 0 {
                return true;
            }
            let rows: Vec<Vec<Int>> = c
                .generators
                .iter()
                .map(|g| basis.iter().map(|b| b.iter().zip(g).map(|(x, y)| x * y).sum()).collect())
                .collect();
            let divisors = elementary_divisors(&IntMatrix::from_rows(&rows, basis.len()));
            divisors.len() == c.dim() && divisors.iter().all(|x| x.abs().is_one())
        })
        .collect()
}

/// Every cone of `f1` lies in some cone of `f2`.
pub fn dominates(f1: &Fan, f2: &Fan) -> bool {
    let targets = f2.maximal_cones();
    f1.maximal_cones().iter().all(|c| targets.iter().any(|t| t.contains(c)))
}

pub fn cone_membership(v: &[Q], zk: &ValuationCone) -> bool {
    zk.contains(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fan(dim: usize, cones: &[&[&[i64]]]) -> Fan {
        Fan::from_cones(dim, cones.iter().map(|c| Cone::from_i64(dim, c).unwrap()))
    }

    #[test]
    fn cones_are_canonical() {
        let a = Cone::from_i64(2, &[&[0, 2], &[1, 0]]).unwrap();
        let b = Cone::from_i64(2, &[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(Cone::from_i64(2, &[&[1, 1], &[2, 2]]), Err(FanError::NonSimplicial(0)));
        assert_eq!(a.faces().len(), 4);
    }

    #[test]
    fn overlapping_wedges_fail() {
        let f = fan(2, &[&[&[1, 0], &[0, 1]], &[&[1, 1], &[-1, 1]]]);
        let v = fan_validate(&f, &ValuationCone::whole(2));
        assert!(v.iter().any(|x| x.check == "fan-intersection"));
        let ok = fan(2, &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[-1, 0]]]);
        assert!(fan_validate(&ok, &ValuationCone::whole(2)).is_empty());
    }

    #[test]
    fn cones_meeting_in_a_ray_only_at_a_point() {
        // Rays through the same line but opposite directions meet in 0.
        let f = fan(2, &[&[&[1, 0]], &[&[-1, 0]]]);
        assert!(fan_validate(&f, &ValuationCone::whole(2)).is_empty());
        // A ray inside another cone's interior.
        let f = fan(2, &[&[&[1, 0], &[0, 1]], &[&[1, 1]]]);
        assert!(!fan_validate(&f, &ValuationCone::whole(2)).is_empty());
    }

    #[test]
    fn smoothness() {
        let f = fan(2, &[&[&[1, 0], &[0, 1]]]);
        assert!(is_smooth(&f, &IntLattice::standard(2)).iter().all(|&b| b));
        let g = fan(2, &[&[&[1, 0], &[1, 2]]]);
        let top = g.index_of(&Cone::from_i64(2, &[&[1, 0], &[1, 2]]).unwrap()).unwrap();
        assert!(!is_smooth(&g, &IntLattice::standard(2))[top]);
    }

    #[test]
    fn completeness_of_the_plane() {
        let quads = fan(
            2,
            &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[-1, 0]], &[&[-1, 0], &[0, -1]], &[&[0, -1], &[1, 0]]],
        );
        let whole = ValuationCone::whole(2);
        assert_eq!(is_complete_for(&quads, &whole), Ok(true));
        let missing = quads.without(&Cone::from_i64(2, &[&[1, 0], &[0, 1]]).unwrap());
        assert_eq!(is_complete_for(&missing, &whole), Ok(false));
        let ray = fan(2, &[&[&[1, 0]]]);
        assert_eq!(is_complete_for(&ray, &whole), Ok(false));
    }

    #[test]
    fn subdivision_dominates() {
        let big = fan(2, &[&[&[1, 0], &[0, 1]]]);
        let sub = fan(2, &[&[&[1, 0], &[1, 1]], &[&[1, 1], &[0, 1]]]);
        assert!(dominates(&sub, &big));
        assert!(!dominates(&big, &sub));
        assert!(dominates(&big, &big));
        assert!(dominates(&Fan::from_cones(2, []), &big));
    }
}
