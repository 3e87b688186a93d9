use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{fan_validate, Cone, Fan, FanError};
use crate::linalg::{dot, int_to_q, intersection_with_subspace, Int, IntLattice, RatMatrix, Q};
use crate::restriction::{valuation_cone, RestrictedDatum, ValuationCone};
use crate::tits::apply_int;
use crate::validation::Severity;

/// Hard ceiling on the default orbit cap.
pub const ORBIT_CEILING: usize = 100_000;

/// The fan of faces of `Z_k`: one cone per subset of `Σ_k`.
pub fn standard_fan(rd: &RestrictedDatum) -> Result<Fan, FanError> {
    if !rd.is_convex() {
        return Err(FanError::NotConvex);
    }
    let rays = valuation_cone(rd).rays;
    let top = Cone::new(rd.rank(), &rays, 0)?;
    Ok(Fan::from_cones(rd.rank(), [top]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub cone: Cone,
    pub codim: usize,
    pub rank: usize,
    /// Basis of `Ξ_k ∩ ⟨C⟩^⊥` in `Ξ_k` coordinates.
    pub lattice: Vec<Vec<Int>>,
    /// Indices of `Σ_k ∩ ⟨C⟩^⊥`.
    pub sigma: Vec<usize>,
    pub horospherical: bool,
    /// For faces of the standard fan, the spherical roots `J` of the
    /// localization belonging to this face.
    pub j_label: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrataPoset {
    pub nodes: Vec<Stratum>,
    /// `(i, j)` when cone `i` is a facet of cone `j`, so stratum `j` lies in
    /// the closure of stratum `i`.
    pub edges: Vec<(usize, usize)>,
}

fn perp_lattice(d: usize, gens: &[Vec<Int>]) -> IntLattice {
    let lat = IntLattice::standard(d);
    if gens.is_empty() {
        return lat;
    }
    let rows: Vec<Vec<Q>> = gens.iter().map(|g| int_to_q(g)).collect();
    let perp = RatMatrix::from_rows(&rows, d).kernel();
    intersection_with_subspace(&lat, &RatMatrix::from_rows(&perp, d))
}

pub fn strata(f: &Fan, rd: &RestrictedDatum) -> StrataPoset {
    let d = rd.rank();
    let zk = valuation_cone(rd);
    let nodes = f
        .cones()
        .iter()
        .map(|c| {
            let sigma: Vec<usize> = (0..rd.sigma.len())
                .filter(|&i| {
                    let s = int_to_q(&rd.sigma[i].coords);
                    c.generators().iter().all(|g| dot(&s, &int_to_q(g)).is_zero())
                })
                .collect();
            let interior = c.interior_point();
            let horospherical = zk.inequalities.iter().all(|s| dot(&int_to_q(s), &interior) < Q::zero());
            let face: Option<Vec<usize>> =
                c.generators().iter().map(|g| zk.rays.iter().position(|r| r == g)).collect();
            let j_label = face.filter(|_| zk.is_strictly_convex()).map(|face| {
                (0..rd.sigma.len()).filter(|i| !face.contains(i)).collect()
            });
            Stratum {
                cone: c.clone(),
                codim: c.dim(),
                rank: d - c.dim(),
                lattice: perp_lattice(d, c.generators()).basis_rows(),
                sigma,
                horospherical,
                j_label,
            }
        })
        .collect();
    let cones = f.cones();
    let mut edges = Vec::new();
    for (i, a) in cones.iter().enumerate() {
        for (j, b) in cones.iter().enumerate() {
            if b.dim() == a.dim() + 1 && a.is_face_of(b) {
                edges.push((i, j));
            }
        }
    }
    StrataPoset { nodes, edges }
}

/// Orbit of the fan under the little Weyl group. Without an explicit cap
/// the orbit may hold `|W_k| · |f|` cones, at most [`ORBIT_CEILING`].
pub fn weyl_saturate(f: &Fan, rd: &RestrictedDatum, cap: Option<usize>) -> Result<Fan, FanError> {
    if rd.sigma.is_empty() {
        return Ok(f.clone());
    }
    let d = rd.rank();
    let cap = cap.unwrap_or_else(|| {
        (&rd.weyl_order * BigInt::from(f.cones().len())).to_usize().map_or(ORBIT_CEILING, |n| n.min(ORBIT_CEILING))
    });
    let mats: Vec<_> = (0..rd.sigma.len()).map(|i| rd.reflection_matrix_n(i)).collect();
    let mut seen: BTreeSet<Cone> = f.cones().iter().cloned().collect();
    let mut queue: VecDeque<Cone> = seen.iter().cloned().collect();
    while let Some(c) = queue.pop_front() {
        for m in &mats {
            let gens: Vec<Vec<Int>> = c
                .generators()
                .iter()
                .map(|g| apply_int(m, &int_to_q(g)).iter().map(|x| x.to_integer()).collect())
                .collect();
            let image = Cone::new(d, &gens, 0)?;
            if seen.insert(image.clone()) {
                if seen.len() > cap {
                    return Err(FanError::BudgetExceeded { cap });
                }
                queue.push_back(image);
            }
        }
    }
    let out = Fan::from_cones(d, seen);
    let violations = fan_validate(&out, &ValuationCone::whole(d));
    if let Some(v) = violations.iter().find(|v| v.severity == Severity::Error) {
        return Err(FanError::Invalid(v.to_string()));
    }
    Ok(out)
}
