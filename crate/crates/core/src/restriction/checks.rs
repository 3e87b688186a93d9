use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use super::{valuation_cone, RestrictedDatum, RestrictionError};
use crate::linalg::{
    form, fmt_q, int_to_q, is_zero, primitive_multiple, to_int_vec, Int, IntLattice, RatMatrix, Q,
};
use crate::roots::RootBase;
use crate::spherical::SphericalDatumK;

/// Nonzero restrictions of `Φ_K` with multiplicities, and their indivisible
/// part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiRes {
    /// `Ξ_k` coordinates with multiplicity; restrictions of positive roots
    /// first, by height in `Σ_k`.
    pub roots: Vec<(Vec<Int>, usize)>,
    pub indivisible: Vec<Vec<Int>>,
}

impl PhiRes {
    pub fn positive(&self) -> &[(Vec<Int>, usize)] {
        &self.roots[..self.roots.len() / 2]
    }
}

/// Restricts every root generated by `Σ_K` and compares the indivisible
/// restrictions with `Φ_k`.
pub fn phi_k_res(rd: &RestrictedDatum) -> Result<PhiRes, RestrictionError> {
    let d = rd.rank();
    let kvecs: Vec<Vec<Q>> = rd.k_roots.iter().map(|r| r.vector.clone()).collect();
    let phi_big = if kvecs.is_empty() {
        Vec::new()
    } else {
        RootBase::new(kvecs, rd.source_form().clone())?.generate_roots(rd.budget())?
    };
    let mut counts: BTreeMap<Vec<Int>, usize> = BTreeMap::new();
    let mut order: Vec<Vec<Int>> = Vec::new();
    for alpha in &phi_big {
        let r = rd.restrict(alpha);
        if is_zero(&r) {
            continue;
        }
        let r = to_int_vec(&r).ok_or_else(|| {
            RestrictionError::LatticeInvariant("a restricted root is not in the lattice".into())
        })?;
        let c = counts.entry(r.clone()).or_default();
        if *c == 0 {
            order.push(r);
        }
        *c += 1;
    }
    // Positive roots come first in the generated list, so `order` already
    // lists restrictions of positive roots first.
    let zd = IntLattice::standard(d);
    let mut shortest: BTreeMap<Vec<Int>, Q> = BTreeMap::new();
    for r in &order {
        let (p, n) = primitive_multiple(&int_to_q(r), &zd).expect("nonzero lattice vector");
        let e = shortest.entry(p).or_insert_with(|| n.clone());
        if n < *e {
            *e = n;
        }
    }
    let indivisible: Vec<Vec<Int>> = order
        .iter()
        .filter(|r| {
            let (p, n) = primitive_multiple(&int_to_q(r), &zd).expect("nonzero lattice vector");
            shortest[&p] == n
        })
        .cloned()
        .collect();
    let a: BTreeSet<&Vec<Int>> = indivisible.iter().collect();
    let b: BTreeSet<&Vec<Int>> = rd.phi.iter().collect();
    if a != b {
        return Err(RestrictionError::IndivisibilityMismatch(format!(
            "{} indivisible restrictions against {} roots of the little system",
            a.len(),
            b.len()
        )));
    }
    let roots = order.into_iter().map(|r| {
        let m = counts[&r];
        (r, m)
    });
    Ok(PhiRes { roots: roots.collect(), indivisible })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoweightIdentity {
    pub root: String,
    pub orbit: Vec<String>,
    /// `ω^∨_σ̄` in `N_k` coordinates.
    pub coweight: Vec<Q>,
}

fn dual_family(vectors: &[Vec<Q>], g: &RatMatrix, dim: usize) -> Option<Vec<Vec<Q>>> {
    let k = vectors.len();
    let mut m = RatMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            m.set(i, j, form(g, &vectors[i], &vectors[j]));
        }
    }
    let minv = m.inverse()?;
    Some(
        (0..k)
            .map(|j| {
                let coeffs: Vec<Q> = (0..k).map(|i| minv.get(i, j).clone()).collect();
                super::combine(vectors, &coeffs, dim)
            })
            .collect(),
    )
}

/// `ω^∨_σ̄ = Σ_{τ ∈ orbit} ω^∨_τ`, both sides computed as dual families in
/// source coordinates.
pub fn coweight_identity_check(rd: &RestrictedDatum) -> Result<Vec<CoweightIdentity>, RestrictionError> {
    let n = rd.source_dim();
    let g = rd.source_form();
    let kvecs: Vec<Vec<Q>> = rd.k_roots.iter().map(|r| r.vector.clone()).collect();
    let k_dual = dual_family(&kvecs, g, n)
        .ok_or_else(|| RestrictionError::IdentityFails("spherical roots are degenerate".into()))?;
    let sbar: Vec<Vec<Q>> = rd.sigma.iter().map(|s| rd.to_source(&int_to_q(&s.coords))).collect();
    let s_dual = dual_family(&sbar, g, n)
        .ok_or_else(|| RestrictionError::IdentityFails("restricted roots are degenerate".into()))?;
    let mut out = Vec::new();
    for (j, s) in rd.sigma.iter().enumerate() {
        let orbit = rd
            .orbits
            .iter()
            .find(|o| o.contains(&s.fiber[0]))
            .cloned()
            .unwrap_or_else(|| s.fiber.clone());
        let mut sum = vec![Q::zero(); n];
        for &t in &orbit {
            sum = crate::linalg::add(&sum, &k_dual[t]);
        }
        let projected = rd.to_source(&rd.restrict(&sum));
        if projected != s_dual[j] {
            return Err(RestrictionError::IdentityFails(format!("at {}", s.name)));
        }
        let in_n: Vec<Q> = rd.xi_basis.iter().map(|x| form(g, x, &s_dual[j])).collect();
        if in_n != rd.coweights[j] {
            return Err(RestrictionError::IdentityFails(format!("coordinates of {} disagree", s.name)));
        }
        out.push(CoweightIdentity {
            root: s.name.clone(),
            orbit: orbit.iter().map(|&t| rd.k_roots[t].name.clone()).collect(),
            coweight: in_n,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FacetKind {
    /// The K-facet meets `N_k` in all of `Z_k`.
    Whole,
    Facet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetCheck {
    pub root: String,
    pub kind: FacetKind,
}

/// For each `σ ∈ Σ_K`, `{σ = 0} ∩ Z_k` is either `Z_k` or a facet of it.
pub fn facet_inheritance_check(rd: &RestrictedDatum) -> Result<Vec<FacetCheck>, RestrictionError> {
    let d = rd.rank();
    let cone = valuation_cone(rd);
    let mut out = Vec::new();
    for r in &rd.k_roots {
        let s = rd.restrict(&r.vector);
        if is_zero(&s) {
            out.push(FacetCheck { root: r.name.clone(), kind: FacetKind::Whole });
            continue;
        }
        let fail = |why: &str| RestrictionError::LatticeInvariant(format!("facet of {}: {why}", r.name));
        if cone.lineality.iter().any(|l| !crate::linalg::dot(&s, &int_to_q(l)).is_zero()) {
            return Err(fail("not constant on the lineality space"));
        }
        let mut face_dim = cone.lineality.len();
        for ray in &cone.rays {
            let v = crate::linalg::dot(&s, &int_to_q(ray));
            if v.is_positive() {
                return Err(fail("positive on the cone"));
            }
            if v.is_zero() {
                face_dim += 1;
            }
        }
        if face_dim + 1 != d {
            return Err(fail("intersection has the wrong dimension"));
        }
        out.push(FacetCheck { root: r.name.clone(), kind: FacetKind::Facet });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberCheck {
    /// Index of the restricted simple root whose coweight is tested.
    pub beta: usize,
    /// Largest value `σ(π(v))` over `σ ∈ Σ_K`.
    pub max_value: Q,
}

/// Every generator `−ω^∨_β` of the antidominant chamber of the group's
/// restricted base lands in `Z_k`. Empty for abstract data.
pub fn chamber_containment_check(
    d: &SphericalDatumK,
    rd: &RestrictedDatum,
) -> Result<Vec<ChamberCheck>, RestrictionError> {
    let Some(ix) = d.index() else { return Ok(Vec::new()) };
    let simple = ix
        .restricted_simple_roots()
        .map_err(|e| RestrictionError::LatticeInvariant(e.to_string()))?;
    let n = d.dim();
    let g = d.form();
    let dual = dual_family(&simple.roots, g, n)
        .ok_or_else(|| RestrictionError::LatticeInvariant("restricted base is degenerate".into()))?;
    let cone = valuation_cone(rd);
    let mut out = Vec::new();
    for (b, w) in dual.iter().enumerate() {
        let v: Vec<Q> = w.iter().map(|x| -x).collect();
        let max_value = d
            .sigma()
            .iter()
            .map(|s| form(g, s, &v))
            .max()
            .unwrap_or_else(Q::zero);
        let image: Vec<Q> = rd.xi_basis.iter().map(|x| form(g, x, &v)).collect();
        if max_value.is_positive() || !cone.contains(&image) {
            return Err(RestrictionError::LatticeInvariant(format!(
                "chamber generator {} leaves the valuation cone (value {})",
                b + 1,
                fmt_q(&max_value)
            )));
        }
        out.push(ChamberCheck { beta: b, max_value });
    }
    Ok(out)
}
