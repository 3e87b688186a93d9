use num_integer::Integer;
use num_traits::{One, Signed};

use super::{Parts, RestrictedDatum, RestrictionError};
use crate::linalg::{
    int_to_q, intersection_with_subspace, to_int_vec, Int, IntLattice, IntMatrix, RatLattice,
    RatMatrix, Q,
};

#[derive(Debug, Clone)]
pub struct Localization {
    pub datum: RestrictedDatum,
    /// Indices of `J` in the parent's `Σ_k`.
    pub kept: Vec<usize>,
    /// Indices of the face `I = Σ_k ∖ J`.
    pub face: Vec<usize>,
    /// Indices into the parent's `k_roots` forming the new `Σ_K`.
    pub k_side: Vec<usize>,
    /// Basis of the new lattice in parent `Ξ_k` coordinates.
    pub embedding: Vec<Vec<Int>>,
}

/// `Ξ_k ∩ ⟨C⟩^⊥` for the simplicial face `C = cone{−ω^∨_σ : σ ∈ face}`.
pub(crate) fn face_perp_lattice(rd: &RestrictedDatum, face: &[usize]) -> IntLattice {
    let d = rd.rank();
    let lat = rd.lattice();
    if face.is_empty() {
        return lat;
    }
    let w: Vec<Vec<Q>> = face.iter().map(|&i| rd.coweights[i].clone()).collect();
    let perp = RatMatrix::from_rows(&w, d).kernel();
    intersection_with_subspace(&lat, &RatMatrix::from_rows(&perp, d))
}

/// The localization `X^J`: spherical roots `J`, lattice cut by the face of
/// the standard fan spanned by the other coweights.
pub fn localize(rd: &RestrictedDatum, j: &[usize]) -> Result<Localization, RestrictionError> {
    if !rd.is_convex() {
        return Err(RestrictionError::NotConvex);
    }
    let mut kept = j.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&i| i >= rd.sigma.len()) {
        return Err(RestrictionError::UnknownRoot(format!("#{}", bad + 1)));
    }
    let face: Vec<usize> = (0..rd.sigma.len()).filter(|i| !kept.contains(i)).collect();
    let sub = face_perp_lattice(rd, &face);
    let embedding = sub.basis_rows();
    let rows: Vec<Vec<Q>> = embedding.iter().map(|r| int_to_q(r)).collect();
    let emb = RatMatrix::from_rows(&rows, rd.rank());
    let xi_basis: Vec<Vec<Q>> = rows.iter().map(|r| rd.to_source(r)).collect();

    let mut k_side: Vec<usize> = Vec::new();
    let mut sigma = Vec::new();
    for &i in &kept {
        let s = &rd.sigma[i];
        let c = emb
            .solve_left(&int_to_q(&s.coords))
            .and_then(|c| to_int_vec(&c))
            .ok_or_else(|| RestrictionError::LatticeInvariant(format!("{} leaves the face lattice", s.name)))?;
        sigma.push((s.name.clone(), c, s.fiber.clone(), s.beta.clone()));
    }
    for (k, r) in rd.k_roots.iter().enumerate() {
        if r.compact || kept.iter().any(|&i| rd.sigma[i].fiber.contains(&k)) {
            k_side.push(k);
        }
    }
    let remap = |k: usize| k_side.iter().position(|&x| x == k).expect("kept root");
    for entry in &mut sigma {
        entry.2 = entry.2.iter().map(|&k| remap(k)).collect();
    }
    let orbits: Vec<Vec<usize>> = rd
        .orbits
        .iter()
        .filter(|o| o.iter().all(|k| k_side.contains(k)))
        .map(|o| o.iter().map(|&k| remap(k)).collect())
        .collect();
    let k_roots = k_side.iter().map(|&k| rd.k_roots[k].clone()).collect();
    let datum = RestrictedDatum::build(Parts {
        source_form: rd.source_form().clone(),
        nk_basis: xi_basis.clone(),
        xi_basis,
        sigma,
        k_roots,
        orbits,
        budget: rd.budget(),
    })?;
    Ok(Localization { datum, kept, face, k_side, embedding })
}

#[derive(Debug, Clone)]
pub struct AutRoots {
    /// `Γ_k` in `Ξ_k` coordinates.
    pub gamma: IntLattice,
    /// `Σ_k^aut = n^aut σ^pr`, in `Ξ_k` coordinates.
    pub roots: Vec<Vec<Int>>,
    pub multipliers: Vec<Int>,
    /// Datum with lattice `Γ_k` and spherical roots `Σ_k^aut`.
    pub quotient: RestrictedDatum,
}

/// `Σ_k^aut` for a lattice `Γ_k` with `Γ_k ⊆ Ξ_k` and `Γ_k ⊗ Q = QΣ_k`.
/// `None` means `Γ_k = ZΣ_k^pr`.
pub fn aut_roots(rd: &RestrictedDatum, gamma: Option<&RatLattice>) -> Result<AutRoots, RestrictionError> {
    let d = rd.rank();
    let pr: Vec<Vec<Q>> = rd.sigma_pr_q();
    let gamma = match gamma {
        None => IntLattice::from_generators(d, &rd.sigma.iter().map(|s| s.primitive.clone()).collect::<Vec<_>>()),
        Some(g) => {
            if g.ambient_rank() != d {
                return Err(RestrictionError::NotBetween(format!("lattice has rank {}, expected {d}", g.ambient_rank())));
            }
            g.as_integral()
                .cloned()
                .ok_or_else(|| RestrictionError::NotBetween("not contained in the lattice".into()))?
        }
    };
    let span_ok = gamma.rank() == pr.len() && pr.iter().all(|p| gamma.coords(p).is_some());
    if !span_ok {
        return Err(RestrictionError::NotBetween("rational span differs from that of the spherical roots".into()));
    }
    let mut roots = Vec::new();
    let mut multipliers = Vec::new();
    for (p, s) in pr.iter().zip(&rd.sigma) {
        let c = gamma.coords(p).expect("in span");
        let n = c.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
        if n != Int::one() && n != Int::from(2) {
            return Err(RestrictionError::BasisFailure(format!("{} needs multiplier {n}", s.name)));
        }
        roots.push(s.primitive.iter().map(|x| x * &n).collect::<Vec<Int>>());
        multipliers.push(n);
    }
    let gb = gamma.basis_q();
    let coords: Vec<Vec<Int>> = roots
        .iter()
        .map(|r| to_int_vec(&gamma.coords(&int_to_q(r)).expect("in span")).expect("in lattice"))
        .collect();
    let k = coords.len();
    if k > 0 && !IntMatrix::from_rows(&coords, k).det().abs().is_one() {
        return Err(RestrictionError::BasisFailure("quotient roots have index > 1".into()));
    }
    let xi_basis: Vec<Vec<Q>> = gb.iter().map(|b| rd.to_source(b)).collect();
    let sigma = rd
        .sigma
        .iter()
        .zip(coords)
        .map(|(s, c)| (s.name.clone(), c, s.fiber.clone(), s.beta.clone()))
        .collect();
    let quotient = RestrictedDatum::build(Parts {
        source_form: rd.source_form().clone(),
        nk_basis: xi_basis.clone(),
        xi_basis,
        sigma,
        k_roots: rd.k_roots.clone(),
        orbits: rd.orbits.clone(),
        budget: rd.budget(),
    })?;
    Ok(AutRoots { gamma, roots, multipliers, quotient })
}
