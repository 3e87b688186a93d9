//! Lattice data of the boundary degeneration `Z = (X × X)/A`.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::fan::{Cone, FanError};
use crate::linalg::{
    elementary_divisors, int_to_q, intersection_with_subspace, primitive_integer, to_int_vec, Int, IntLattice,
    IntMatrix, RatMatrix, Q,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegenerationError {
    #[error("spherical roots are linearly dependent")]
    NotIndependent,
    #[error("spherical root {0} is not in the lattice")]
    NotSublattice(usize),
    #[error("cone is not a face of the boundary cone")]
    NotAFace,
    #[error(transparent)]
    Fan(#[from] FanError),
}

/// Rank and divisor bookkeeping for `0 → Ξ → Ξ_k(Z) → ZΣ → 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exactness {
    pub xi_rank: usize,
    pub xi_z_rank: usize,
    pub gamma_rank: usize,
    /// Elementary divisors of the matrix of `Δ₋` in a basis of `Ξ_k(Z)`.
    pub delta_divisors: Vec<Int>,
    /// `β ∘ Δ₋ = 0`.
    pub composition_zero: bool,
    /// `ker β ∩ Ξ_k(Z) = Δ₋(Ξ)`.
    pub middle: bool,
    /// `β(Ξ_k(Z)) = ZΣ`.
    pub surjective: bool,
}

impl Exactness {
    pub fn holds(&self) -> bool {
        self.composition_zero
            && self.middle
            && self.surjective
            && self.delta_divisors.len() == self.xi_rank
            && self.delta_divisors.iter().all(One::is_one)
            && self.xi_z_rank == self.xi_rank + self.gamma_rank
    }
}

#[derive(Debug, Clone)]
pub struct DegenerationDatum {
    pub xi: IntLattice,
    pub sigma: Vec<Vec<Int>>,
    pub gamma: IntLattice,
    /// `{(χ, η) : χ + η ∈ ZΣ}` inside `Ξ ⊕ Ξ`.
    pub xi_z: IntLattice,
    /// Columns are images of the basis of `Ξ`.
    pub delta_minus: IntMatrix,
    pub beta: IntMatrix,
    /// Ray of `C_bd` for each spherical root, in coordinates dual to the
    /// basis of `Ξ_k(Z)`.
    pub bd_rays: Vec<Vec<Int>>,
    pub c_bd: Cone,
    pub exactness: Exactness,
    /// `C_bd ⊆ Z_k(Z)` for `Σ_k(Z) = (Σ × 0) ∪ (0 × Σ)`.
    pub bd_in_valuation_cone: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberData {
    /// Indices of the spherical roots whose rays span the face.
    pub face: Vec<usize>,
    pub xi_fiber: IntLattice,
    pub sigma_fiber: Vec<usize>,
    /// The fiber is a `k`-form of `X`.
    pub k_form: bool,
    pub horospherical: bool,
    /// Dimension of the degenerating torus.
    pub torus_dim: usize,
}

fn col_matrix(cols: &[Vec<Int>], rows: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    m
}

fn apply(m: &IntMatrix, v: &[Int]) -> Vec<Int> {
    (0..m.rows()).map(|i| m.row(i).iter().zip(v).map(|(a, x)| a * x).sum()).collect()
}

/// Builds `Ξ_k(Z)`, `Δ₋`, `β` and `C_bd` from `Ξ` and `Σ = Σ_k^aut`, both in
/// the coordinates of `Ξ`'s ambient space.
pub fn build_degeneration(xi: &IntLattice, sigma_aut: &[Vec<Int>]) -> Result<DegenerationDatum, DegenerationError> {
    let n = xi.ambient_rank();
    for (i, s) in sigma_aut.iter().enumerate() {
        if s.len() != n || !xi.contains_int(s) {
            return Err(DegenerationError::NotSublattice(i + 1));
        }
    }
    let sq: Vec<Vec<Q>> = sigma_aut.iter().map(|s| int_to_q(s)).collect();
    if !sq.is_empty() && RatMatrix::from_rows(&sq, n).rank() < sq.len() {
        return Err(DegenerationError::NotIndependent);
    }
    let gamma = IntLattice::from_generators(n, sigma_aut);
    let xb = xi.basis_rows();
    let zero = vec![Int::zero(); n];
    let concat = |a: &[Int], b: &[Int]| a.iter().chain(b).cloned().collect::<Vec<Int>>();

    let delta_cols: Vec<Vec<Int>> = xb.iter().map(|x| concat(x, &x.iter().map(|v| -v).collect::<Vec<_>>())).collect();
    let delta_minus = col_matrix(&delta_cols, 2 * n);
    let mut beta = IntMatrix::zeros(n, 2 * n);
    for i in 0..n {
        beta.set(i, i, Int::one());
        beta.set(i, n + i, Int::one());
    }
    let mut gens = delta_cols.clone();
    gens.extend(gamma.basis_rows().iter().map(|g| concat(g, &zero)));
    let xi_z = IntLattice::from_generators(2 * n, &gens);
    let zb = xi_z.basis_rows();

    let composition_zero = delta_cols.iter().all(|c| apply(&beta, c).iter().all(Zero::is_zero));
    let ker_beta: Vec<Vec<Q>> = beta.to_rat().kernel();
    let kernel_part = intersection_with_subspace(&xi_z, &RatMatrix::from_rows(&ker_beta, 2 * n));
    let middle = kernel_part == IntLattice::from_generators(2 * n, &delta_cols);
    let image: Vec<Vec<Int>> = zb.iter().map(|b| apply(&beta, b)).collect();
    let surjective = IntLattice::from_generators(n, &image) == gamma;
    let delta_coords: Vec<Vec<Int>> = delta_cols
        .iter()
        .map(|c| to_int_vec(&xi_z.coords(&int_to_q(c)).expect("in span")).expect("in lattice"))
        .collect();
    let exactness = Exactness {
        xi_rank: xi.rank(),
        xi_z_rank: xi_z.rank(),
        gamma_rank: gamma.rank(),
        delta_divisors: elementary_divisors(&IntMatrix::from_rows(&delta_coords, xi_z.rank())),
        composition_zero,
        middle,
        surjective,
    };

    // Coordinates of β(b) in the basis Σ of ZΣ; the ray for σ_i is
    // b ↦ −(i-th coordinate).
    let sigma_coords: Vec<Vec<Q>> = image
        .iter()
        .map(|v| {
            if sq.is_empty() {
                Vec::new()
            } else {
                RatMatrix::from_rows(&sq, n).solve_left(&int_to_q(v)).expect("image lies in ZΣ")
            }
        })
        .collect();
    let bd_rays: Vec<Vec<Int>> = (0..sq.len())
        .map(|i| primitive_integer(&sigma_coords.iter().map(|c| -c[i].clone()).collect::<Vec<_>>()))
        .collect();
    let c_bd = Cone::new(zb.len(), &bd_rays, 0)?;

    // Σ_k(Z) in Ξ_k(Z) coordinates, then the sign test on every ray.
    let sigma_z: Vec<Vec<Q>> = sigma_aut
        .iter()
        .flat_map(|s| [concat(s, &zero), concat(&zero, s)])
        .map(|v| xi_z.coords(&int_to_q(&v)).expect("Σ × 0 and 0 × Σ lie in Ξ_k(Z)"))
        .collect();
    let bd_in_valuation_cone = bd_rays.iter().all(|r| {
        let r = int_to_q(r);
        sigma_z.iter().all(|s| crate::linalg::dot(s, &r) <= Q::zero())
    });

    Ok(DegenerationDatum {
        xi: xi.clone(),
        sigma: sigma_aut.to_vec(),
        gamma,
        xi_z,
        delta_minus,
        beta,
        bd_rays,
        c_bd,
        exactness,
        bd_in_valuation_cone,
    })
}

impl DegenerationDatum {
    /// Faces of `C_bd` as subsets of `Σ`, in binary order.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let k = self.sigma.len();
        (0..1usize << k).map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).collect()).collect()
    }

    pub fn face_cone(&self, face: &[usize]) -> Result<Cone, DegenerationError> {
        if face.iter().any(|&i| i >= self.bd_rays.len()) {
            return Err(DegenerationError::NotAFace);
        }
        let gens: Vec<Vec<Int>> = face.iter().map(|&i| self.bd_rays[i].clone()).collect();
        Ok(Cone::new(self.xi_z.rank(), &gens, 0)?)
    }
}

/// Invariants of the fiber over the orbit belonging to a face of `C_bd`.
pub fn degeneration_fiber_data(dd: &DegenerationDatum, face: &Cone) -> Result<FiberData, DegenerationError> {
    if face.ambient_dim() != dd.xi_z.rank() || !face.is_face_of(&dd.c_bd) {
        return Err(DegenerationError::NotAFace);
    }
    let idx: Vec<usize> = face
        .generators()
        .iter()
        .map(|g| dd.bd_rays.iter().position(|r| r == g).expect("face generator is a ray"))
        .collect();
    let mut idx = idx;
    idx.sort_unstable();
    // The ray of σ_i pairs to −δ_ij with σ_j on the Y side.
    let sigma_fiber: Vec<usize> = (0..dd.sigma.len()).filter(|j| !idx.contains(j)).collect();
    Ok(FiberData {
        torus_dim: idx.len(),
        k_form: idx.is_empty(),
        horospherical: idx.len() == dd.sigma.len(),
        face: idx,
        xi_fiber: dd.xi.clone(),
        sigma_fiber,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn index_two() {
        let dd = build_degeneration(&IntLattice::standard(1), &[ints(&[2])]).unwrap();
        assert_eq!(dd.xi_z.index_in(&IntLattice::standard(2)), Some(Int::from(2)));
        assert!(dd.xi_z.contains_int(&ints(&[1, 1])));
        assert!(!dd.xi_z.contains_int(&ints(&[1, 0])));
        assert!(dd.exactness.holds());
        assert!(dd.bd_in_valuation_cone);
    }

    #[test]
    fn unit_root_gives_everything() {
        let dd = build_degeneration(&IntLattice::standard(1), &[ints(&[1])]).unwrap();
        assert_eq!(dd.xi_z, IntLattice::standard(2));
    }

    #[test]
    fn rank_two_ranks() {
        let dd = build_degeneration(&IntLattice::standard(2), &[ints(&[1, 0]), ints(&[0, 1])]).unwrap();
        let e = &dd.exactness;
        assert_eq!((e.xi_rank, e.xi_z_rank, e.gamma_rank), (2, 4, 2));
        assert!(e.holds());
        let mut seen: Vec<Vec<usize>> = dd
            .faces()
            .iter()
            .map(|f| degeneration_fiber_data(&dd, &dd.face_cone(f).unwrap()).unwrap().sigma_fiber)
            .collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn errors() {
        let xi = IntLattice::from_generators(1, &[ints(&[2])]);
        assert_eq!(build_degeneration(&xi, &[ints(&[1])]).unwrap_err(), DegenerationError::NotSublattice(1));
        let z2 = IntLattice::standard(2);
        assert_eq!(
            build_degeneration(&z2, &[ints(&[1, 1]), ints(&[2, 2])]).unwrap_err(),
            DegenerationError::NotIndependent
        );
        let dd = build_degeneration(&z2, &[ints(&[1, 0])]).unwrap();
        let bogus = Cone::new(dd.xi_z.rank(), &[vec![Int::from(1); dd.xi_z.rank()]], 0).unwrap();
        assert_eq!(degeneration_fiber_data(&dd, &bogus).unwrap_err(), DegenerationError::NotAFace);
    }

    #[test]
    fn empty_sigma() {
        let dd = build_degeneration(&IntLattice::standard(2), &[]).unwrap();
        assert_eq!(dd.faces(), vec![Vec::<usize>::new()]);
        let fd = degeneration_fiber_data(&dd, &dd.c_bd).unwrap();
        assert!(fd.k_form && fd.horospherical);
    }
}
