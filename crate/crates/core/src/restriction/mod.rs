//! From a K-level datum to the k-level invariants: `N_k`, `Ξ_k`, `Σ_k`,
//! `Φ_k`, `W_k`, the valuation cone and the predicate battery.
//!
//! Coordinates. Vectors of `Ξ_k` are written in the Hermite basis `ξ_1..ξ_d`
//! of the image lattice; points of `N_k` are written by their values on that
//! basis, so the pairing is the dot product.

mod checks;
mod cone;
mod localize;

pub use checks::{
    chamber_containment_check, coweight_identity_check, facet_inheritance_check, phi_k_res,
    ChamberCheck, CoweightIdentity, FacetCheck, FacetKind, PhiRes,
};
pub use cone::{valuation_cone, ValuationCone};
pub use localize::{aut_roots, localize, AutRoots, Localization};

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{
    form, int_to_q, is_zero, primitive_multiple, saturated_kernel, to_int_vec, Int, IntLattice,
    IntMatrix, OrthogonalProjector, RatLattice, RatMatrix, Q,
};
use crate::roots::{weyl_order, CartanType, RootBase, RootError};
use crate::spherical::{SphericalDatumK, SphericalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RestrictionError {
    #[error("restriction fibers differ from star orbits: {0}")]
    FiberMismatch(String),
    #[error("restricted spherical roots are not a root base: {0}")]
    NotARootBase(String),
    #[error("indivisible restricted roots differ from the little root system: {0}")]
    IndivisibilityMismatch(String),
    #[error("coweight identity fails: {0}")]
    IdentityFails(String),
    #[error("lattice invariant fails: {0}")]
    LatticeInvariant(String),
    #[error("valuation cone is not strictly convex")]
    NotConvex,
    #[error("lattice is not between the root lattice and the weight lattice: {0}")]
    NotBetween(String),
    #[error("quotient roots are not a basis of the lattice: {0}")]
    BasisFailure(String),
    #[error("unknown spherical root {0}")]
    UnknownRoot(String),
    #[error("reflection budget of {cap} applications exceeded")]
    BudgetExceeded { cap: usize },
    #[error("form is degenerate on the little space")]
    DegenerateForm,
    #[error(transparent)]
    Spherical(#[from] SphericalError),
}

impl RestrictionError {
    /// Failures of statements that hold for every valid datum.
    pub fn is_theorem_violation(&self) -> bool {
        matches!(
            self,
            Self::FiberMismatch(_)
                | Self::IndivisibilityMismatch(_)
                | Self::IdentityFails(_)
                | Self::LatticeInvariant(_)
                | Self::BasisFailure(_)
                | Self::Spherical(SphericalError::InternalInconsistency(_))
        )
    }
}

impl From<RootError> for RestrictionError {
    fn from(e: RootError) -> Self {
        match e {
            RootError::BudgetExceeded { cap } => Self::BudgetExceeded { cap },
            other => Self::NotARootBase(other.to_string()),
        }
    }
}

/// One element of `Σ_K` as seen from the restricted datum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KRoot {
    pub name: String,
    /// Source coordinates (ambient simple-root or abstract lattice).
    pub vector: Vec<Q>,
    pub compact: bool,
    pub star_fixed: bool,
}

/// One element of `Σ_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedRoot {
    pub name: String,
    /// Coordinates in the `Ξ_k` basis.
    pub coords: Vec<Int>,
    pub primitive: Vec<Int>,
    /// `n_σ` with `σ̄ = n_σ σ̄^pr`.
    pub multiplier: Int,
    /// Indices into [`RestrictedDatum::k_roots`] restricting to this root.
    pub fiber: Vec<usize>,
    /// Coefficients in the group's restricted simple roots (ambient mode).
    pub beta: Option<Vec<Q>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predicates {
    pub k_convex: bool,
    pub k_wonderful: bool,
    pub k_horospherical: bool,
    pub rank0: bool,
    pub satake_open_embedding: bool,
}

#[derive(Debug, Clone)]
pub struct RestrictedDatum {
    source_form: RatMatrix,
    projector: Option<OrthogonalProjector>,
    budget: usize,
    /// Basis of `N_k` in source coordinates.
    pub nk_basis: Vec<Vec<Q>>,
    /// Hermite basis of `Ξ_k`, in source coordinates.
    pub xi_basis: Vec<Vec<Q>>,
    /// The form on `Ξ_k ⊗ Q` in `Ξ_k` coordinates.
    pub gram: RatMatrix,
    pub sigma: Vec<RestrictedRoot>,
    pub k_roots: Vec<KRoot>,
    /// Star orbits of the noncompact elements of `k_roots`.
    pub orbits: Vec<Vec<usize>>,
    /// `Φ_k` in `Ξ_k` coordinates, positive roots first.
    pub phi: Vec<Vec<Int>>,
    pub types: Vec<CartanType>,
    pub weyl_order: BigInt,
    /// Saturated basis of `N_k⁰`, in `N_k` coordinates.
    pub nk0_basis: Vec<Vec<Int>>,
    /// `ω^∨_σ` dual to `Σ_k` inside `N_k¹`, in `N_k` coordinates.
    pub coweights: Vec<Vec<Q>>,
}

/// Inputs shared by every constructor of a restricted datum.
pub(crate) struct Parts {
    pub source_form: RatMatrix,
    pub nk_basis: Vec<Vec<Q>>,
    pub xi_basis: Vec<Vec<Q>>,
    pub sigma: Vec<(String, Vec<Int>, Vec<usize>, Option<Vec<Q>>)>,
    pub k_roots: Vec<KRoot>,
    pub orbits: Vec<Vec<usize>>,
    pub budget: usize,
}

pub(crate) fn combine(basis: &[Vec<Q>], coeffs: &[Q], dim: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); dim];
    for (c, b) in coeffs.iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

impl RestrictedDatum {
    pub(crate) fn build(parts: Parts) -> Result<Self, RestrictionError> {
        let Parts { source_form, nk_basis, xi_basis, sigma, k_roots, orbits, budget } = parts;
        let d = xi_basis.len();
        let projector = if d == 0 {
            None
        } else {
            Some(
                OrthogonalProjector::new(xi_basis.clone(), source_form.clone())
                    .map_err(|_| RestrictionError::DegenerateForm)?,
            )
        };
        let mut gram = RatMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                gram.set(i, j, form(&source_form, &xi_basis[i], &xi_basis[j]));
            }
        }
        let sq: Vec<Vec<Q>> = sigma.iter().map(|s| int_to_q(&s.1)).collect();
        let (types, phi) = if sq.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            let base = RootBase::new(sq.clone(), gram.clone())?;
            base.cartan_matrix()?;
            let types = base.classify()?;
            let phi = base
                .root_coords(budget)?
                .iter()
                .map(|c| to_int_vec(&base.combine(c)).expect("integer combination of lattice vectors"))
                .collect();
            (types, phi)
        };
        let weyl_order = weyl_order(&types.iter().map(|t| (t.family, t.rank)).collect::<Vec<_>>());
        let zd = IntLattice::standard(d);
        let mut roots = Vec::with_capacity(sigma.len());
        for (name, coords, fiber, beta) in sigma {
            let (primitive, n) = primitive_multiple(&int_to_q(&coords), &zd)
                .map_err(|e| RestrictionError::LatticeInvariant(format!("{name}: {e}")))?;
            let multiplier = n.to_integer();
            roots.push(RestrictedRoot { name, coords, primitive, multiplier, fiber, beta });
        }
        let s_mat = RatMatrix::from_rows(&sq, d);
        let nk0_basis = saturated_kernel(&s_mat);
        let coweights = if sq.is_empty() {
            Vec::new()
        } else {
            let gs: Vec<Vec<Q>> = sq.iter().map(|s| gram.mul_vec(s)).collect();
            let m = s_mat.mul(&RatMatrix::from_rows(&gs, d).transpose());
            let minv = m.inverse().ok_or_else(|| {
                RestrictionError::NotARootBase("restricted roots are linearly dependent".into())
            })?;
            (0..sq.len())
                .map(|j| {
                    let coeffs: Vec<Q> = (0..sq.len()).map(|i| minv.get(i, j).clone()).collect();
                    combine(&gs, &coeffs, d)
                })
                .collect()
        };
        let rd = Self {
            source_form,
            projector,
            budget,
            nk_basis,
            xi_basis,
            gram,
            sigma: roots,
            k_roots,
            orbits,
            phi,
            types,
            weyl_order,
            nk0_basis,
            coweights,
        };
        rd.check_invariants()?;
        Ok(rd)
    }

    fn check_invariants(&self) -> Result<(), RestrictionError> {
        let d = self.rank();
        for s in &self.sigma {
            if s.multiplier != Int::one() && s.multiplier != Int::from(2) {
                return Err(RestrictionError::LatticeInvariant(format!(
                    "{} has multiplier {}",
                    s.name, s.multiplier
                )));
            }
        }
        for i in 0..self.sigma.len() {
            for j in 0..d {
                let mut e = vec![Q::zero(); d];
                e[j] = Q::one();
                if !self.coroot_pairing(&e, i).is_integer() {
                    return Err(RestrictionError::LatticeInvariant(format!(
                        "basis vector {} pairs non-integrally with the coroot of {}",
                        j + 1,
                        self.sigma[i].name
                    )));
                }
            }
        }
        if d != self.sigma.len() + self.nk0_basis.len() {
            return Err(RestrictionError::LatticeInvariant("rank bookkeeping fails".into()));
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.xi_basis.len()
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn source_dim(&self) -> usize {
        self.source_form.rows()
    }

    pub fn source_form(&self) -> &RatMatrix {
        &self.source_form
    }

    /// `Ξ_k` coordinates of the restriction of a source vector.
    pub fn restrict(&self, v: &[Q]) -> Vec<Q> {
        match &self.projector {
            Some(p) => p.coords(v),
            None => Vec::new(),
        }
    }

    /// Source coordinates of a `Ξ_k ⊗ Q` vector.
    pub fn to_source(&self, chi: &[Q]) -> Vec<Q> {
        combine(&self.xi_basis, chi, self.source_dim())
    }

    pub fn sigma_q(&self) -> Vec<Vec<Q>> {
        self.sigma.iter().map(|s| int_to_q(&s.coords)).collect()
    }

    pub fn sigma_pr_q(&self) -> Vec<Vec<Q>> {
        self.sigma.iter().map(|s| int_to_q(&s.primitive)).collect()
    }

    /// `⟨χ, σ_i^∨⟩ = 2(χ, σ_i)/(σ_i, σ_i)` for `χ` in `Ξ_k` coordinates.
    pub fn coroot_pairing(&self, chi: &[Q], i: usize) -> Q {
        let s = int_to_q(&self.sigma[i].coords);
        Q::from_integer(2.into()) * form(&self.gram, chi, &s) / form(&self.gram, &s, &s)
    }

    /// `σ_i^∨` in `N_k` coordinates.
    pub fn coroot(&self, i: usize) -> Vec<Q> {
        let s = int_to_q(&self.sigma[i].coords);
        let k = Q::from_integer(2.into()) / form(&self.gram, &s, &s);
        self.gram.mul_vec(&s).iter().map(|x| x * &k).collect()
    }

    /// Simple reflection `s_i` acting on `N_k` coordinates.
    pub fn reflect_n(&self, i: usize, a: &[Q]) -> Vec<Q> {
        let s = int_to_q(&self.sigma[i].coords);
        let val: Q = s.iter().zip(a).map(|(x, y)| x * y).sum();
        let c = self.coroot(i);
        a.iter().zip(&c).map(|(x, y)| x - &val * y).collect()
    }

    /// Simple reflection `s_i` acting on `Ξ_k` coordinates.
    pub fn reflect_xi(&self, i: usize, chi: &[Q]) -> Vec<Q> {
        let k = self.coroot_pairing(chi, i);
        let s = int_to_q(&self.sigma[i].coords);
        chi.iter().zip(&s).map(|(x, y)| x - &k * y).collect()
    }

    /// Matrix of `s_i` on integer `N_k` coordinates (column convention).
    pub fn reflection_matrix_n(&self, i: usize) -> IntMatrix {
        let d = self.rank();
        let mut m = IntMatrix::zeros(d, d);
        for j in 0..d {
            let mut e = vec![Q::zero(); d];
            e[j] = Q::one();
            let img = self.reflect_n(i, &e);
            for (r, x) in img.iter().enumerate() {
                m.set(r, j, x.to_integer());
            }
        }
        m
    }

    pub fn is_convex(&self) -> bool {
        self.nk0_basis.is_empty()
    }

    pub fn root_index(&self, name: &str) -> Option<usize> {
        self.sigma.iter().position(|s| s.name == name).or_else(|| {
            let k = self.k_roots.iter().position(|r| r.name == name)?;
            self.sigma.iter().position(|s| s.fiber.contains(&k))
        })
    }

    pub fn predicates(&self) -> Predicates {
        let d = self.rank();
        let k_wonderful = self.sigma.len() == d && {
            let m = IntMatrix::from_rows(&self.sigma.iter().map(|s| s.primitive.clone()).collect::<Vec<_>>(), d);
            d == 0 || m.det().abs().is_one()
        };
        Predicates {
            k_convex: self.is_convex(),
            k_wonderful,
            k_horospherical: self.sigma.is_empty(),
            rank0: d == 0,
            satake_open_embedding: self.k_roots.iter().all(|r| r.compact || r.star_fixed),
        }
    }

    /// `Ξ_k` as an integer lattice in its own coordinates.
    pub fn lattice(&self) -> IntLattice {
        IntLattice::standard(self.rank())
    }
}

/// Basis of `N_k = {v ∈ Ξ_K ⊗ Q : (v, σ) = 0 for σ ∈ Σ_K⁰, γv = v}` in source
/// coordinates.
pub fn little_space(d: &SphericalDatumK) -> Result<Vec<Vec<Q>>, RestrictionError> {
    let split = d.compact_split()?;
    let n = d.dim();
    let b = d.xi().basis_q();
    let m = b.len();
    let mut eqs: Vec<Vec<Q>> = Vec::new();
    for &i in &split.sigma0 {
        eqs.push(b.iter().map(|bl| form(d.form(), bl, &d.sigma()[i])).collect());
    }
    for g in 0..d.star().generators().len() {
        let moved: Vec<Vec<Q>> =
            b.iter().map(|bl| crate::linalg::sub(&d.star().apply(g, bl), bl)).collect();
        for r in 0..n {
            eqs.push(moved.iter().map(|v| v[r].clone()).collect());
        }
    }
    let y = saturated_kernel(&RatMatrix::from_rows(&eqs, m));
    Ok(y.iter().map(|c| combine(&b, &int_to_q(c), n)).collect())
}

pub fn restrict_datum(d: &SphericalDatumK) -> Result<RestrictedDatum, RestrictionError> {
    let split = d.compact_split()?;
    let n = d.dim();
    let nk = little_space(d)?;
    let r = nk.len();
    let xi_basis: Vec<Vec<Q>> = if r == 0 {
        Vec::new()
    } else {
        let p = OrthogonalProjector::new(nk.clone(), d.form().clone())
            .map_err(|_| RestrictionError::DegenerateForm)?;
        let images: Vec<Vec<Q>> = d.xi().basis_q().iter().map(|b| p.coords(b)).collect();
        RatLattice::from_generators(r, &images)
            .basis_q()
            .iter()
            .map(|c| combine(&nk, c, n))
            .collect()
    };
    let projector = if r == 0 {
        None
    } else {
        Some(OrthogonalProjector::new(xi_basis.clone(), d.form().clone()).map_err(|_| RestrictionError::DegenerateForm)?)
    };

    let k_roots: Vec<KRoot> = d
        .sigma()
        .iter()
        .enumerate()
        .map(|(i, s)| KRoot {
            name: d.names()[i].clone(),
            vector: s.clone(),
            compact: split.sigma0.contains(&i),
            star_fixed: d.star().fixes(s),
        })
        .collect();

    let simple = match d.index() {
        Some(ix) => Some(ix.restricted_simple_roots().map_err(|e| {
            SphericalError::InternalInconsistency(format!("group restriction failed: {e}"))
        })?),
        None => None,
    };

    let mut sigma: Vec<(String, Vec<Int>, Vec<usize>, Option<Vec<Q>>)> = Vec::new();
    for &i in &split.noncompact {
        let s = &d.sigma()[i];
        let c = projector.as_ref().map(|p| p.coords(s)).unwrap_or_default();
        if is_zero(&c) {
            return Err(SphericalError::InternalInconsistency(format!(
                "noncompact root {} restricts to zero",
                d.names()[i]
            ))
            .into());
        }
        let coords = to_int_vec(&c).ok_or_else(|| {
            RestrictionError::LatticeInvariant(format!("restriction of {} is not in the lattice", d.names()[i]))
        })?;
        if let Some(entry) = sigma.iter_mut().find(|e| e.1 == coords) {
            entry.2.push(i);
            continue;
        }
        let beta = match (d.index(), &simple) {
            (Some(ix), Some(simple)) => {
                let res = ix.res_a_vector(s);
                if res != combine(&xi_basis, &c, n) {
                    return Err(SphericalError::InternalInconsistency(format!(
                        "group restriction of {} leaves the little space",
                        d.names()[i]
                    ))
                    .into());
                }
                simple.beta_coords(&res)
            }
            _ => None,
        };
        sigma.push((d.names()[i].clone(), coords, vec![i], beta));
    }

    let noncompact_vecs: Vec<Vec<Q>> = split.noncompact.iter().map(|&i| d.sigma()[i].clone()).collect();
    let orbits: Vec<Vec<usize>> = d
        .star()
        .orbits(&noncompact_vecs)
        .into_iter()
        .map(|o| o.into_iter().map(|k| split.noncompact[k]).collect())
        .collect();
    let fibers: BTreeSet<Vec<usize>> = sigma.iter().map(|e| e.2.clone()).collect();
    let orbit_set: BTreeSet<Vec<usize>> = orbits.iter().cloned().collect();
    if fibers != orbit_set {
        return Err(RestrictionError::FiberMismatch(format!(
            "fibers {:?}, orbits {:?}",
            fibers, orbit_set
        )));
    }

    RestrictedDatum::build(Parts {
        source_form: d.form().clone(),
        nk_basis: nk,
        xi_basis,
        sigma,
        k_roots,
        orbits,
        budget: d.budget(),
    })
}
