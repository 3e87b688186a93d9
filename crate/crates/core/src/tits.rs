//! Group-level index: compact simple roots, the star action, and the
//! restricted root system of the group.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::{
    form, int_to_q, is_zero, saturated_kernel, IntMatrix, OrthogonalProjector, RatMatrix, Q,
};
use crate::roots::{AmbientRootDatum, CartanType, RootBase, RootError, DEFAULT_REFLECTION_BUDGET};
use crate::validation::Violation;

/// Largest star group the orbit closure will enumerate.
pub const STAR_GROUP_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TitsError {
    #[error("star generator {index} is {rows}x{cols}, expected {dim}x{dim}")]
    Shape { index: usize, rows: usize, cols: usize, dim: usize },
    #[error("compact index {0} is out of range")]
    CompactOutOfRange(usize),
    #[error("star group has more than {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("restricted simple roots are linearly dependent")]
    DependentRestriction,
    #[error("restricted root has mixed signs in the restricted base")]
    MixedSigns,
    #[error(transparent)]
    Root(#[from] RootError),
}

/// Finite group of integer matrices given by generators, acting on column
/// vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarAction {
    dim: usize,
    generators: Vec<IntMatrix>,
}

impl StarAction {
    pub fn new(dim: usize, generators: Vec<IntMatrix>) -> Result<Self, TitsError> {
        for (index, g) in generators.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim {
                return Err(TitsError::Shape { index, rows: g.rows(), cols: g.cols(), dim });
            }
        }
        Ok(Self { dim, generators })
    }

    pub fn trivial(dim: usize) -> Self {
        Self { dim, generators: Vec::new() }
    }

    pub fn from_permutations(dim: usize, perms: &[Vec<usize>]) -> Self {
        let generators = perms.iter().map(|p| AmbientRootDatum::permutation_matrix(p)).collect();
        Self { dim, generators }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(|g| *g == IntMatrix::identity(self.dim))
    }

    pub fn apply(&self, g: usize, v: &[Q]) -> Vec<Q> {
        apply_int(&self.generators[g], v)
    }

    /// The permutation `i ↦ perm[i]` if generator `g` maps basis vectors to
    /// basis vectors.
    pub fn as_permutation(&self, g: usize) -> Option<Vec<usize>> {
        let m = &self.generators[g];
        let mut perm = vec![usize::MAX; self.dim];
        for (j, slot) in perm.iter_mut().enumerate() {
            let mut hit = None;
            for i in 0..self.dim {
                let x = m.get(i, j);
                if x.is_one() && hit.is_none() {
                    hit = Some(i);
                } else if !x.is_zero() {
                    return None;
                }
            }
            *slot = hit?;
        }
        let distinct: BTreeSet<usize> = perm.iter().copied().collect();
        (distinct.len() == self.dim).then_some(perm)
    }

    /// All group elements, identity first.
    pub fn group(&self, cap: usize) -> Result<Vec<IntMatrix>, TitsError> {
        let id = IntMatrix::identity(self.dim);
        let mut seen = BTreeSet::new();
        let mut out = vec![id.clone()];
        seen.insert(id.row_vecs());
        let mut i = 0;
        while i < out.len() {
            for g in &self.generators {
                let h = g.mul(&out[i]);
                if seen.insert(h.row_vecs()) {
                    if out.len() >= cap {
                        return Err(TitsError::GroupTooLarge { cap });
                    }
                    out.push(h);
                }
            }
            i += 1;
        }
        Ok(out)
    }

    pub fn fixes(&self, v: &[Q]) -> bool {
        (0..self.generators.len()).all(|g| self.apply(g, v) == v)
    }

    /// Whether every generator maps the set `vs` onto itself.
    pub fn permutes(&self, vs: &[Vec<Q>]) -> bool {
        let set: BTreeSet<&Vec<Q>> = vs.iter().collect();
        (0..self.generators.len()).all(|g| vs.iter().all(|v| set.contains(&self.apply(g, v))))
    }

    /// Orbit partition of `vs` under the generated group, as index classes.
    /// Vectors mapped outside `vs` are ignored.
    pub fn orbits(&self, vs: &[Vec<Q>]) -> Vec<Vec<usize>> {
        let n = vs.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for g in 0..self.generators.len() {
            for i in 0..n {
                let image = self.apply(g, &vs[i]);
                if let Some(j) = vs.iter().position(|w| *w == image) {
                    let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = root(&mut parent, i);
            classes.entry(r).or_default().push(i);
        }
        classes.into_values().collect()
    }
}

pub(crate) fn apply_int(m: &IntMatrix, v: &[Q]) -> Vec<Q> {
    (0..m.rows())
        .map(|i| m.row(i).iter().zip(v).map(|(a, x)| Q::from_integer(a.clone()) * x).sum())
        .collect()
}

/// `(S, S⁰, *)` for a group over `k`.
#[derive(Debug, Clone)]
pub struct TitsIndex {
    ambient: AmbientRootDatum,
    compact: Vec<usize>,
    star: StarAction,
    budget: usize,
}

/// Distinct nonzero restrictions of the simple roots.
#[derive(Debug, Clone)]
pub struct RestrictedSimpleRoots {
    /// Projections into the split subspace, in ambient coordinates, in
    /// Bourbaki order component by component.
    pub roots: Vec<Vec<Q>>,
    /// Simple-root indices restricting to each entry of `roots`.
    pub fibers: Vec<Vec<usize>>,
    /// Simple roots restricting to zero.
    pub zero_fiber: Vec<usize>,
    pub types: Vec<CartanType>,
}

impl RestrictedSimpleRoots {
    /// Coefficients of a vector of the split subspace in the restricted base.
    pub fn beta_coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        if self.roots.is_empty() {
            return is_zero(v).then(Vec::new);
        }
        let m = RatMatrix::from_rows(&self.roots, v.len());
        m.solve_left(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedRoot {
    /// Coefficients in the restricted simple roots.
    pub coords: Vec<i64>,
    /// Number of ambient roots restricting to this vector.
    pub multiplicity: usize,
}

#[derive(Debug, Clone)]
pub struct RestrictedRootSystem {
    pub simple: RestrictedSimpleRoots,
    /// Positive roots by height, then their negatives.
    pub roots: Vec<RestrictedRoot>,
    pub reduced: bool,
    pub indivisible_types: Vec<CartanType>,
}

impl RestrictedRootSystem {
    pub fn indivisible(&self) -> Vec<&RestrictedRoot> {
        let all: Vec<&Vec<i64>> = self.roots.iter().map(|r| &r.coords).collect();
        self.roots.iter().filter(|r| !all.iter().any(|s| is_proper_multiple(&r.coords, s))).collect()
    }
}

/// `a = t b` for some rational `t > 1`.
fn is_proper_multiple(a: &[i64], b: &[i64]) -> bool {
    let Some(k) = b.iter().position(|&x| x != 0) else { return false };
    let (num, den) = (a[k], b[k]);
    if num * den <= 0 || num.abs() <= den.abs() {
        return false;
    }
    a.iter().zip(b).all(|(&x, &y)| x * den == y * num)
}

impl TitsIndex {
    pub fn new(
        ambient: AmbientRootDatum,
        compact: Vec<usize>,
        star: StarAction,
    ) -> Result<Self, TitsError> {
        let dim = ambient.dim();
        if star.dim() != dim {
            return Err(TitsError::Shape { index: 0, rows: star.dim(), cols: star.dim(), dim });
        }
        let mut compact = compact;
        compact.sort_unstable();
        compact.dedup();
        if let Some(&bad) = compact.iter().find(|&&i| i >= dim) {
            return Err(TitsError::CompactOutOfRange(bad));
        }
        Ok(Self { ambient, compact, star, budget: DEFAULT_REFLECTION_BUDGET })
    }

    /// The split index: no compact roots, trivial star.
    pub fn split(ambient: AmbientRootDatum) -> Self {
        let dim = ambient.dim();
        Self { ambient, compact: Vec::new(), star: StarAction::trivial(dim), budget: DEFAULT_REFLECTION_BUDGET }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn ambient(&self) -> &AmbientRootDatum {
        &self.ambient
    }

    pub fn compact(&self) -> &[usize] {
        &self.compact
    }

    pub fn star(&self) -> &StarAction {
        &self.star
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let form = self.ambient.form();
        let compact: BTreeSet<usize> = self.compact.iter().copied().collect();
        for g in 0..self.star.generators().len() {
            let Some(perm) = self.star.as_permutation(g) else {
                out.push(Violation::error(
                    "star-permutes-S",
                    format!("generator {g} does not map simple roots to simple roots"),
                ));
                continue;
            };
            let isometric = (0..perm.len())
                .all(|i| (0..perm.len()).all(|j| form.get(perm[i], perm[j]) == form.get(i, j)));
            if !isometric {
                out.push(Violation::error(
                    "star-diagram-automorphism",
                    format!("generator {g} does not preserve the Dynkin diagram"),
                ));
            }
            let image: BTreeSet<usize> = compact.iter().map(|&i| perm[i]).collect();
            if image != compact {
                out.push(Violation::error(
                    "Δ*-condition",
                    format!("generator {g} does not preserve the compact roots"),
                ));
            }
        }
        if let Err(e) = self.star.group(STAR_GROUP_CAP) {
            out.push(Violation::error("star-finite", e.to_string()));
        }
        out
    }

    /// Hermite basis of `V = {v : (α, v) = 0 for α ∈ S⁰, γv = v}`, one row per
    /// basis vector.
    pub fn split_subspace(&self) -> RatMatrix {
        let n = self.ambient.dim();
        let form = self.ambient.form();
        let mut eqs: Vec<Vec<Q>> = self.compact.iter().map(|&i| form.row(i).to_vec()).collect();
        for g in self.star.generators() {
            let d = g.to_rat();
            for i in 0..n {
                let mut row = d.row(i).to_vec();
                row[i] -= Q::one();
                eqs.push(row);
            }
        }
        let m = RatMatrix::from_rows(&eqs, n);
        let basis: Vec<Vec<Q>> = saturated_kernel(&m).iter().map(|v| int_to_q(v)).collect();
        RatMatrix::from_rows(&basis, n)
    }

    pub fn k_rank(&self) -> usize {
        self.split_subspace().rows()
    }

    fn projector(&self) -> OrthogonalProjector {
        OrthogonalProjector::new(self.split_subspace().row_vecs(), self.ambient.form().clone())
            .expect("the invariant form is definite")
    }

    /// Restriction to the split subspace in dual coordinates: the values of
    /// the form against the basis of [`Self::split_subspace`].
    pub fn res_a(&self, chi: &[Q]) -> Vec<Q> {
        self.projector().dual_coords(chi)
    }

    /// Restriction as a vector of the split subspace, in ambient coordinates.
    pub fn res_a_vector(&self, chi: &[Q]) -> Vec<Q> {
        self.projector().project(chi)
    }

    pub fn restricted_simple_roots(&self) -> Result<RestrictedSimpleRoots, TitsError> {
        let n = self.ambient.dim();
        let p = self.projector();
        let mut roots: Vec<Vec<Q>> = Vec::new();
        let mut fibers: Vec<Vec<usize>> = Vec::new();
        let mut zero_fiber = Vec::new();
        for i in 0..n {
            let mut e = vec![Q::zero(); n];
            e[i] = Q::one();
            let r = p.project(&e);
            if is_zero(&r) {
                zero_fiber.push(i);
            } else if let Some(k) = roots.iter().position(|x| *x == r) {
                fibers[k].push(i);
            } else {
                roots.push(r);
                fibers.push(vec![i]);
            }
        }
        if !roots.is_empty() && RatMatrix::from_rows(&roots, n).rank() < roots.len() {
            return Err(TitsError::DependentRestriction);
        }
        let base = RootBase::new(roots.clone(), self.ambient.form().clone())?;
        let order: Vec<usize> = base.classify()?.into_iter().flat_map(|t| t.order).collect();
        let roots: Vec<Vec<Q>> = order.iter().map(|&k| roots[k].clone()).collect();
        let fibers: Vec<Vec<usize>> = order.iter().map(|&k| fibers[k].clone()).collect();
        let types = RootBase::new(roots.clone(), self.ambient.form().clone())?.classify()?;
        Ok(RestrictedSimpleRoots { roots, fibers, zero_fiber, types })
    }

    pub fn restricted_root_system(&self) -> Result<RestrictedRootSystem, TitsError> {
        let simple = self.restricted_simple_roots()?;
        let p = self.projector();
        let mut counts: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
        for alpha in self.ambient.simple_base().generate_roots(self.budget)? {
            let r = p.project(&alpha);
            if is_zero(&r) {
                continue;
            }
            let c = simple.beta_coords(&r).ok_or(TitsError::DependentRestriction)?;
            let c: Vec<i64> = c
                .iter()
                .map(|x| {
                    x.is_integer().then(|| x.to_integer().to_i64()).flatten().ok_or(TitsError::MixedSigns)
                })
                .collect::<Result<_, _>>()?;
            if c.iter().any(|&x| x > 0) && c.iter().any(|&x| x < 0) {
                return Err(TitsError::MixedSigns);
            }
            *counts.entry(c).or_default() += 1;
        }
        let mut pos: Vec<RestrictedRoot> = counts
            .iter()
            .filter(|(c, _)| c.iter().any(|&x| x > 0))
            .map(|(c, &m)| RestrictedRoot { coords: c.clone(), multiplicity: m })
            .collect();
        pos.sort_by_key(|r| (r.coords.iter().sum::<i64>(), r.coords.clone()));
        let neg: Vec<RestrictedRoot> = pos
            .iter()
            .map(|r| {
                let coords: Vec<i64> = r.coords.iter().map(|x| -x).collect();
                RestrictedRoot { multiplicity: counts[&coords], coords }
            })
            .collect();
        let roots: Vec<RestrictedRoot> = pos.into_iter().chain(neg).collect();
        let coords: Vec<&Vec<i64>> = roots.iter().map(|r| &r.coords).collect();
        let reduced = coords.iter().all(|a| !coords.iter().any(|b| is_proper_multiple(a, b)));

        // Indivisible positive roots that are not sums of two others form a base.
        let k = simple.roots.len();
        let indiv: Vec<Vec<i64>> = roots
            .iter()
            .filter(|r| r.coords.iter().all(|&x| x >= 0))
            .filter(|r| !coords.iter().any(|b| is_proper_multiple(&r.coords, b)))
            .map(|r| r.coords.clone())
            .collect();
        let set: BTreeSet<&Vec<i64>> = indiv.iter().collect();
        let base: Vec<Vec<Q>> = indiv
            .iter()
            .filter(|r| {
                !indiv.iter().any(|a| {
                    let rest: Vec<i64> = r.iter().zip(a).map(|(x, y)| x - y).collect();
                    set.contains(&rest)
                })
            })
            .map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect())
            .collect();
        let mut gram = RatMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                gram.set(i, j, form(self.ambient.form(), &simple.roots[i], &simple.roots[j]));
            }
        }
        let indivisible_types = if base.is_empty() {
            Vec::new()
        } else {
            RootBase::new(base, gram)?.classify()?
        };
        Ok(RestrictedRootSystem { simple, roots, reduced, indivisible_types })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qr, qvec};
    use crate::roots::{type_name, Family};

    fn index(f: Family, n: usize, compact: &[usize], flip: bool) -> TitsIndex {
        let amb = AmbientRootDatum::single(f, n).unwrap();
        let star = if flip {
            StarAction::from_permutations(n, &[amb.component_flip(0).unwrap()])
        } else {
            StarAction::trivial(n)
        };
        TitsIndex::new(amb, compact.to_vec(), star).unwrap()
    }

    fn unit(n: usize, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); n];
        v[i] = Q::one();
        v
    }

    #[test]
    fn split_subspace_dimensions() {
        assert_eq!(index(Family::A, 3, &[], false).k_rank(), 3);
        assert_eq!(index(Family::C, 3, &[0, 2], false).k_rank(), 1);
        assert_eq!(index(Family::E, 6, &[], true).k_rank(), 4);
    }

    #[test]
    fn compact_roots_restrict_to_zero() {
        let ix = index(Family::C, 3, &[0, 2], false);
        assert!(is_zero(&ix.res_a(&unit(3, 0))));
        assert!(!is_zero(&ix.res_a(&unit(3, 1))));
    }

    #[test]
    fn flip_partners_restrict_equally() {
        let ix = index(Family::E, 6, &[], true);
        assert_eq!(ix.res_a(&unit(6, 0)), ix.res_a(&unit(6, 5)));
        let chi = qvec(&[3, -1, 2, 0, 5, 7]);
        let moved = ix.star().apply(0, &chi);
        assert_eq!(ix.res_a(&chi), ix.res_a(&moved));
    }

    #[test]
    fn e6_flip_gives_f4() {
        let ix = index(Family::E, 6, &[], true);
        let s = ix.restricted_simple_roots().unwrap();
        assert_eq!(s.fibers, vec![vec![1], vec![3], vec![2, 4], vec![0, 5]]);
        let sys = ix.restricted_root_system().unwrap();
        assert_eq!(type_name(&sys.indivisible_types), "F4");
        assert!(sys.reduced);
        assert_eq!(sys.roots.len(), 48);
    }

    #[test]
    fn a3_flip_gives_c2() {
        let ix = index(Family::A, 3, &[], true);
        let s = ix.restricted_simple_roots().unwrap();
        assert_eq!(s.fibers, vec![vec![0, 2], vec![1]]);
        assert_eq!(type_name(&s.types), "C2");
        // α1+α2+α3 restricts to 2β1+β2.
        let sigma = ix.res_a_vector(&qvec(&[1, 1, 1]));
        assert_eq!(s.beta_coords(&sigma).unwrap(), qvec(&[2, 1]));
    }

    #[test]
    fn split_a2_keeps_its_roots() {
        let sys = index(Family::A, 2, &[], false).restricted_root_system().unwrap();
        assert_eq!(sys.roots.len(), 6);
        assert!(sys.roots.iter().all(|r| r.multiplicity == 1));
        assert_eq!(type_name(&sys.indivisible_types), "A2");
    }

    #[test]
    fn real_rank_one_symplectic_is_non_reduced() {
        let sys = index(Family::C, 3, &[0, 2], false).restricted_root_system().unwrap();
        let pos: Vec<Vec<i64>> =
            sys.roots.iter().filter(|r| r.coords[0] > 0).map(|r| r.coords.clone()).collect();
        assert_eq!(pos, vec![vec![1], vec![2]]);
        assert!(!sys.reduced);
        assert_eq!(type_name(&sys.indivisible_types), "A1");
        assert_eq!(sys.indivisible().len(), 2);
    }

    #[test]
    fn restriction_is_orthogonal_projection() {
        let ix = index(Family::C, 3, &[0, 2], false);
        let v = ix.res_a_vector(&unit(3, 1));
        assert_eq!(v, vec![qr(1, 2), qr(1, 1), qr(1, 2)]);
        assert!(v.iter().all(|x| *x >= Q::zero()));
    }

    #[test]
    fn star_breaking_compact_set_is_flagged() {
        let ix = index(Family::A, 3, &[0], true);
        let v = ix.validate();
        assert!(v.iter().any(|x| x.check == "Δ*-condition"));
        assert!(index(Family::A, 3, &[1], true).validate().is_empty());
    }

    #[test]
    fn non_permutation_star_is_flagged() {
        let amb = AmbientRootDatum::single(Family::A, 2).unwrap();
        let g = IntMatrix::from_i64(&[&[0, -1], &[-1, 0]]);
        let ix = TitsIndex::new(amb, vec![], StarAction::new(2, vec![g]).unwrap()).unwrap();
        assert!(ix.validate().iter().any(|x| x.check == "star-permutes-S"));
    }

    #[test]
    fn group_closure_and_orbits() {
        let amb = AmbientRootDatum::single(Family::E, 6).unwrap();
        let star = StarAction::from_permutations(6, &[amb.component_flip(0).unwrap()]);
        assert_eq!(star.group(STAR_GROUP_CAP).unwrap().len(), 2);
        let basis: Vec<Vec<Q>> = (0..6).map(|i| unit(6, i)).collect();
        assert_eq!(star.orbits(&basis), vec![vec![0, 5], vec![1], vec![2, 4], vec![3]]);
    }
}
