use num_traits::{Signed, Zero};

use super::RestrictedDatum;
use crate::linalg::{dot, int_to_q, neg, primitive_integer, Int, RatMatrix, Q};

/// `Z_k = {a : σ(a) ≤ 0 for σ ∈ Σ_k} = N_k⁰ + Σ Q≤0 ω^∨_σ`, in `N_k`
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationCone {
    pub dim: usize,
    pub inequalities: Vec<Vec<Int>>,
    pub lineality: Vec<Vec<Int>>,
    /// Primitive generators of the rays `Q≥0 (−ω^∨_σ)`, one per inequality.
    pub rays: Vec<Vec<Int>>,
}

pub fn valuation_cone(rd: &RestrictedDatum) -> ValuationCone {
    ValuationCone {
        dim: rd.rank(),
        inequalities: rd.sigma.iter().map(|s| s.coords.clone()).collect(),
        lineality: rd.nk0_basis.clone(),
        rays: rd.coweights.iter().map(|w| primitive_integer(&neg(w))).collect(),
    }
}

impl ValuationCone {
    /// The cone equal to the whole space.
    pub fn whole(dim: usize) -> Self {
        let lineality = (0..dim)
            .map(|i| (0..dim).map(|j| Int::from(u8::from(i == j))).collect())
            .collect();
        Self { dim, inequalities: Vec::new(), lineality, rays: Vec::new() }
    }

    pub fn is_strictly_convex(&self) -> bool {
        self.lineality.is_empty()
    }

    /// Extremal rays, present only when the cone is strictly convex.
    pub fn extremal_rays(&self) -> Option<&[Vec<Int>]> {
        self.is_strictly_convex().then_some(self.rays.as_slice())
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.inequalities.iter().all(|s| !dot(&int_to_q(s), v).is_positive())
    }

    /// Indices of the inequalities that vanish on `v`.
    pub fn tight(&self, v: &[Q]) -> Vec<usize> {
        (0..self.inequalities.len()).filter(|&i| dot(&int_to_q(&self.inequalities[i]), v).is_zero()).collect()
    }

    /// Cosimplicial and the two descriptions agree: each ray is tight on
    /// all inequalities but its own, and the lineality space is tight on all.
    pub fn is_consistent(&self) -> bool {
        let ineq: Vec<Vec<Q>> = self.inequalities.iter().map(|s| int_to_q(s)).collect();
        if !ineq.is_empty() && RatMatrix::from_rows(&ineq, self.dim).rank() < ineq.len() {
            return false;
        }
        if ineq.len() + self.lineality.len() != self.dim || self.rays.len() != ineq.len() {
            return false;
        }
        let rays_ok = self.rays.iter().enumerate().all(|(j, r)| {
            let r = int_to_q(r);
            ineq.iter().enumerate().all(|(i, s)| {
                let v = dot(s, &r);
                if i == j { v.is_negative() } else { v.is_zero() }
            })
        });
        let lin_ok = self.lineality.iter().all(|l| ineq.iter().all(|s| dot(s, &int_to_q(l)).is_zero()));
        rays_ok && lin_ok
    }
}
