use num_integer::Integer;
use num_traits::{One, Zero};

use super::{
    common_denominator, elementary_divisors, hermite_normal_form, int_to_q, left_kernel,
    rational_content, to_int_vec, Int, IntMatrix, LinalgError, RatMatrix, Q,
};

/// Sublattice of `Z^n` stored by its Hermite basis, so equal lattices have
/// identical representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntLattice {
    ambient_rank: usize,
    basis: IntMatrix,
}

impl IntLattice {
    pub fn from_generators(ambient_rank: usize, gens: &[Vec<Int>]) -> Self {
        let (h, _) = hermite_normal_form(&IntMatrix::from_rows(gens, ambient_rank));
        let rows: Vec<Vec<Int>> = h
            .row_vecs()
            .into_iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        Self { ambient_rank, basis: IntMatrix::from_rows(&rows, ambient_rank) }
    }

    pub fn from_i64(ambient_rank: usize, gens: &[&[i64]]) -> Self {
        let gens: Vec<Vec<Int>> =
            gens.iter().map(|g| g.iter().map(|&x| Int::from(x)).collect()).collect();
        Self::from_generators(ambient_rank, &gens)
    }

    /// The full lattice `Z^n`.
    pub fn standard(n: usize) -> Self {
        Self { ambient_rank: n, basis: IntMatrix::identity(n) }
    }

    pub fn zero(n: usize) -> Self {
        Self { ambient_rank: n, basis: IntMatrix::zeros(0, n) }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<Int>> {
        self.basis.row_vecs()
    }

    pub fn basis_q(&self) -> Vec<Vec<Q>> {
        (0..self.rank()).map(|i| int_to_q(self.basis.row(i))).collect()
    }

    /// Rational coordinates of `v` with respect to the basis, if `v` lies in
    /// the rational span.
    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        if self.rank() == 0 {
            return v.iter().all(Zero::is_zero).then(Vec::new);
        }
        self.basis.to_rat().solve_left(v)
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.coords(v).is_some_and(|c| c.iter().all(|x| x.is_integer()))
    }

    pub fn contains_int(&self, v: &[Int]) -> bool {
        self.contains(&int_to_q(v))
    }

    pub fn is_sublattice_of(&self, other: &IntLattice) -> bool {
        self.ambient_rank == other.ambient_rank
            && self.basis_rows().iter().all(|b| other.contains_int(b))
    }

    /// `[other : self]` when `self ⊆ other` have equal rank.
    pub fn index_in(&self, other: &IntLattice) -> Option<Int> {
        if !self.is_sublattice_of(other) || self.rank() != other.rank() {
            return None;
        }
        let coords: Vec<Vec<Int>> = self
            .basis_q()
            .iter()
            .map(|b| to_int_vec(&other.coords(b).expect("sublattice")).expect("integral"))
            .collect();
        let divisors = elementary_divisors(&IntMatrix::from_rows(&coords, other.rank()));
        Some(divisors.iter().fold(Int::one(), |acc, d| acc * d))
    }

    /// Smallest saturated lattice with the same rational span.
    pub fn saturation(&self) -> IntLattice {
        if self.rank() == 0 {
            return self.clone();
        }
        // Saturation = integer vectors annihilated by the orthogonal complement.
        let perp = self.basis.to_rat().kernel();
        if perp.is_empty() {
            return IntLattice::standard(self.ambient_rank);
        }
        let cols: Vec<Vec<Q>> = perp;
        let m = RatMatrix::from_rows(&cols, self.ambient_rank).transpose();
        IntLattice::from_generators(self.ambient_rank, &integer_left_kernel(&m))
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation() == *self
    }
}

/// Saturated integer left kernel `{x ∈ Z^rows : x m = 0}` of a rational matrix.
pub(crate) fn integer_left_kernel(m: &RatMatrix) -> Vec<Vec<Int>> {
    let mut cols_int = IntMatrix::zeros(m.rows(), m.cols());
    for j in 0..m.cols() {
        let col = m.col(j);
        let den = common_denominator(&col);
        for (i, x) in col.iter().enumerate() {
            cols_int.set(i, j, (x * Q::from_integer(den.clone())).to_integer());
        }
    }
    left_kernel(&cols_int)
}

/// Hermite-canonical basis of the saturated integer kernel `{x ∈ Z^n : M x = 0}`.
pub fn saturated_kernel(m: &RatMatrix) -> Vec<Vec<Int>> {
    if m.rows() == 0 {
        return IntLattice::standard(m.cols()).basis_rows();
    }
    integer_left_kernel(&m.transpose())
}

/// Lattice with denominators, stored as `(1/den) * L` for an integer lattice
/// `L` in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatLattice {
    lattice: IntLattice,
    den: Int,
}

impl RatLattice {
    pub fn from_generators(ambient_rank: usize, gens: &[Vec<Q>]) -> Self {
        let den = gens.iter().fold(Int::one(), |acc, g| acc.lcm(&common_denominator(g)));
        let ints: Vec<Vec<Int>> = gens
            .iter()
            .map(|g| g.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect())
            .collect();
        let lat = IntLattice::from_generators(ambient_rank, &ints);
        Self::normalized(lat, den)
    }

    pub fn from_int(lattice: IntLattice) -> Self {
        Self { lattice, den: Int::one() }
    }

    fn normalized(lattice: IntLattice, den: Int) -> Self {
        let content = lattice
            .basis_rows()
            .iter()
            .flatten()
            .fold(Int::zero(), |acc, x| acc.gcd(x));
        let g = content.gcd(&den);
        if g.is_one() || g.is_zero() {
            return Self { lattice, den };
        }
        let rows: Vec<Vec<Int>> = lattice
            .basis_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| x / &g).collect())
            .collect();
        Self {
            lattice: IntLattice::from_generators(lattice.ambient_rank(), &rows),
            den: den / g,
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.lattice.ambient_rank()
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn denominator(&self) -> &Int {
        &self.den
    }

    pub fn numerator_lattice(&self) -> &IntLattice {
        &self.lattice
    }

    pub fn basis_q(&self) -> Vec<Vec<Q>> {
        let d = Q::from_integer(self.den.clone());
        self.lattice
            .basis_q()
            .into_iter()
            .map(|r| r.into_iter().map(|x| x / &d).collect())
            .collect()
    }

    pub fn as_integral(&self) -> Option<&IntLattice> {
        self.den.is_one().then_some(&self.lattice)
    }

    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        if self.rank() == 0 {
            return v.iter().all(Zero::is_zero).then(Vec::new);
        }
        RatMatrix::from_rows(&self.basis_q(), self.ambient_rank()).solve_left(v)
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.coords(v).is_some_and(|c| c.iter().all(|x| x.is_integer()))
    }
}

/// Lattice generated by the images `b * m` of the basis vectors of `domain`
/// (row-vector convention: `m` has one row per domain coordinate).
pub fn image_lattice(m: &RatMatrix, domain: &IntLattice) -> RatLattice {
    assert_eq!(m.rows(), domain.ambient_rank(), "map does not match the domain");
    let gens: Vec<Vec<Q>> = domain.basis_q().iter().map(|b| m.vec_mul(b)).collect();
    RatLattice::from_generators(m.cols(), &gens)
}

/// The primitive lattice vector `p` on the ray through `v` and the positive
/// rational `n` with `v = n p`.
pub fn primitive_multiple(v: &[Q], lattice: &IntLattice) -> Result<(Vec<Int>, Q), LinalgError> {
    if v.len() != lattice.ambient_rank() {
        return Err(LinalgError::Dimension { expected: lattice.ambient_rank(), found: v.len() });
    }
    if v.iter().all(Zero::is_zero) {
        return Err(LinalgError::ZeroVector);
    }
    let c = lattice.coords(v).ok_or(LinalgError::NotInSpan)?;
    let n = rational_content(&c);
    let pc: Vec<Q> = c.iter().map(|x| x / &n).collect();
    let p = lattice.basis().to_rat().vec_mul(&pc);
    Ok((to_int_vec(&p).expect("primitive coordinates are integral"), n))
}

/// Saturated intersection `lat ∩ span(rows of subspace)`.
pub fn intersection_with_subspace(lat: &IntLattice, subspace: &RatMatrix) -> IntLattice {
    let n = lat.ambient_rank();
    assert_eq!(subspace.cols(), n, "subspace lives in a different space");
    if lat.rank() == 0 {
        return lat.clone();
    }
    // x ∈ span(W) iff x annihilates every vector orthogonal to W.
    let perp = if subspace.rows() == 0 {
        RatMatrix::identity(n).row_vecs()
    } else {
        subspace.kernel()
    };
    if perp.is_empty() {
        return lat.clone();
    }
    let perp_cols = RatMatrix::from_rows(&perp, n).transpose();
    let b = lat.basis().to_rat();
    let coeffs = integer_left_kernel(&b.mul(&perp_cols));
    let gens: Vec<Vec<Int>> = coeffs
        .iter()
        .map(|c| to_int_vec(&b.vec_mul(&int_to_q(c))).expect("integer combination"))
        .collect();
    IntLattice::from_generators(n, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qvec};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn image_identity_and_projection() {
        let z2 = IntLattice::standard(2);
        assert_eq!(image_lattice(&RatMatrix::identity(2), &z2).as_integral(), Some(&z2));
        let proj = RatMatrix::from_i64(&[&[1], &[0], &[0]]);
        let img = image_lattice(&proj, &IntLattice::standard(3));
        assert_eq!(img.as_integral(), Some(&IntLattice::standard(1)));
    }

    #[test]
    fn image_of_difference_map() {
        // (n1, n2) -> n1 - n2 maps Z^2 onto Z.
        let m = RatMatrix::from_i64(&[&[1], &[-1]]);
        let img = image_lattice(&m, &IntLattice::standard(2));
        assert_eq!(img.as_integral(), Some(&IntLattice::standard(1)));
    }

    #[test]
    fn image_with_denominators_is_kept_rational() {
        let m = RatMatrix::from_rows(&[vec![crate::linalg::qr(1, 2)]], 1);
        let img = image_lattice(&m, &IntLattice::standard(1));
        assert_eq!(img.denominator(), &Int::from(2));
        assert!(img.contains(&[crate::linalg::qr(1, 2)]));
        assert!(img.as_integral().is_none());
    }

    #[test]
    fn primitive_multiples() {
        let z1 = IntLattice::standard(1);
        assert_eq!(primitive_multiple(&qvec(&[2]), &z1).unwrap(), (ints(&[1]), q(2)));
        let z2 = IntLattice::standard(2);
        assert_eq!(primitive_multiple(&qvec(&[1, -1]), &z2).unwrap(), (ints(&[1, -1]), q(1)));
        assert_eq!(primitive_multiple(&qvec(&[2, 4]), &z2).unwrap(), (ints(&[1, 2]), q(2)));
        assert_eq!(primitive_multiple(&qvec(&[0, 0]), &z2), Err(LinalgError::ZeroVector));
        let line = IntLattice::from_i64(2, &[&[1, 1]]);
        assert_eq!(primitive_multiple(&qvec(&[1, 0]), &line), Err(LinalgError::NotInSpan));
        // Rational multiples are allowed: (1/2, 1/2) is half the generator.
        let (p, n) = primitive_multiple(&[crate::linalg::qr(1, 2), crate::linalg::qr(1, 2)], &line).unwrap();
        assert_eq!((p, n), (ints(&[1, 1]), crate::linalg::qr(1, 2)));
    }

    #[test]
    fn intersections_with_lines() {
        let z2 = IntLattice::standard(2);
        let x_axis = RatMatrix::from_i64(&[&[1, 0]]);
        assert_eq!(intersection_with_subspace(&z2, &x_axis), IntLattice::from_i64(2, &[&[1, 0]]));
        let diag = RatMatrix::from_i64(&[&[1, 1]]);
        assert_eq!(intersection_with_subspace(&z2, &diag), IntLattice::from_i64(2, &[&[1, 1]]));
    }

    #[test]
    fn even_sum_lattice_meets_diagonal() {
        // Oracle: enumerate small multiples t(1,1), keep those in the lattice,
        // and take the shortest nonzero one.
        let even = IntLattice::from_i64(2, &[&[1, 1], &[2, 0]]);
        let shortest = (1..10)
            .map(|t| ints(&[t, t]))
            .find(|v| even.contains_int(v))
            .unwrap();
        let expected = IntLattice::from_generators(2, &[shortest]);
        assert_eq!(expected, IntLattice::from_i64(2, &[&[1, 1]]));
        let diag = RatMatrix::from_i64(&[&[1, 1]]);
        assert_eq!(intersection_with_subspace(&even, &diag), expected);
    }

    #[test]
    fn index_computation() {
        let even = IntLattice::from_i64(2, &[&[1, 1], &[2, 0]]);
        assert_eq!(even.index_in(&IntLattice::standard(2)), Some(Int::from(2)));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..4, 1usize..4).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-5i64..6, c), r)
        })
    }

    proptest! {
        #[test]
        fn primitive_vectors_are_fixed(v in proptest::collection::vec(-20i64..21, 3)) {
            prop_assume!(v.iter().any(|&x| x != 0));
            let z3 = IntLattice::standard(3);
            let (p, _) = primitive_multiple(&qvec(&v), &z3).unwrap();
            let pq = int_to_q(&p);
            prop_assert_eq!(primitive_multiple(&pq, &z3).unwrap(), (p, q(1)));
        }

        #[test]
        fn image_composes(a in small_matrix(), b in small_matrix()) {
            let ma = RatMatrix::from_rows(&a.iter().map(|r| qvec(r)).collect::<Vec<_>>(), a[0].len());
            let mb_rows: Vec<Vec<Q>> = (0..ma.cols())
                .map(|i| qvec(&b[i % b.len()]))
                .collect();
            let mb = RatMatrix::from_rows(&mb_rows, b[0].len());
            let dom = IntLattice::standard(ma.rows());
            let two_step = image_lattice(&mb, image_lattice(&ma, &dom).numerator_lattice());
            let direct = image_lattice(&ma.mul(&mb), &dom);
            prop_assert_eq!(two_step, direct);
            let id = image_lattice(&RatMatrix::identity(ma.rows()), &dom);
            prop_assert_eq!(id.as_integral(), Some(&dom));
        }

        #[test]
        fn intersection_is_saturated(gens in small_matrix(), w in proptest::collection::vec(-3i64..4, 3)) {
            let rows: Vec<Vec<Int>> = gens.iter().map(|r| {
                let mut r = r.clone();
                r.resize(3, 1);
                ints(&r)
            }).collect();
            let lat = IntLattice::from_generators(3, &rows);
            prop_assume!(w.iter().any(|&x| x != 0));
            let sub = RatMatrix::from_rows(&[qvec(&w)], 3);
            let cut = intersection_with_subspace(&lat, &sub);
            // (cut ⊗ Q) ∩ lat = cut: every lattice vector on the line through a
            // generator of cut is already in cut.
            prop_assert!(cut.is_sublattice_of(&lat));
            for b in cut.basis_q() {
                for k in 1..4 {
                    let frac: Vec<Q> = b.iter().map(|x| x / q(k)).collect();
                    if lat.contains(&frac) {
                        prop_assert!(cut.contains(&frac));
                    }
                }
            }
        }
    }
}
