use std::collections::{BTreeSet, VecDeque};

use num_traits::{Signed, Zero};

use super::{classify, CartanType, RootError};
use crate::linalg::{form, q, IntMatrix, RatMatrix, Q};

/// Default cap on reflection applications during orbit generation.
pub const DEFAULT_REFLECTION_BUDGET: usize = 1_000_000;

/// Linearly independent vectors in a space with a symmetric form, candidate
/// simple roots of a finite root system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootBase {
    vectors: Vec<Vec<Q>>,
    form: RatMatrix,
    gram: RatMatrix,
}

impl RootBase {
    pub fn new(vectors: Vec<Vec<Q>>, form_matrix: RatMatrix) -> Result<Self, RootError> {
        let dim = form_matrix.rows();
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(RootError::NotARootBase("vector dimension differs from the form".into()));
        }
        if !vectors.is_empty() && RatMatrix::from_rows(&vectors, dim).rank() < vectors.len() {
            return Err(RootError::NotARootBase("vectors are linearly dependent".into()));
        }
        let n = vectors.len();
        let mut gram = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                gram.set(i, j, form(&form_matrix, &vectors[i], &vectors[j]));
            }
        }
        Ok(Self { vectors, form: form_matrix, gram })
    }

    /// Base given directly by its Gram matrix: vectors are the standard basis.
    pub fn from_gram(gram: RatMatrix) -> Result<Self, RootError> {
        let n = gram.rows();
        Self::new(RatMatrix::identity(n).row_vecs(), gram)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Q>] {
        &self.vectors
    }

    pub fn form(&self) -> &RatMatrix {
        &self.form
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    /// `c_ij = 2 (σ_i, σ_j) / (σ_j, σ_j)`.
    pub fn cartan_matrix(&self) -> Result<IntMatrix, RootError> {
        let n = self.len();
        let mut c = IntMatrix::zeros(n, n);
        for j in 0..n {
            if !self.gram.get(j, j).is_positive() {
                return Err(RootError::NotARootBase(format!("vector {j} is not anisotropic")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let v = q(2) * self.gram.get(i, j) / self.gram.get(j, j);
                if !v.is_integer() {
                    return Err(RootError::NotARootBase(format!(
                        "Cartan integer c[{i}][{j}] = {v} is not an integer"
                    )));
                }
                if i != j && v.is_positive() {
                    return Err(RootError::NotARootBase(format!(
                        "Cartan integer c[{i}][{j}] = {v} is positive"
                    )));
                }
                c.set(i, j, v.to_integer());
            }
        }
        Ok(c)
    }

    pub fn classify(&self) -> Result<Vec<CartanType>, RootError> {
        classify(&self.cartan_matrix()?)
    }

    fn cartan_i64(&self) -> Result<Vec<Vec<i64>>, RootError> {
        let c = self.cartan_matrix()?;
        Ok((0..c.rows())
            .map(|i| c.row(i).iter().map(|x| i64::try_from(x).expect("small Cartan")).collect())
            .collect())
    }

    /// All roots as coefficient vectors in the base. Positive roots first,
    /// ordered by height and then lexicographically; negatives follow in the
    /// same order.
    pub fn root_coords(&self, budget: usize) -> Result<Vec<Vec<i64>>, RootError> {
        let n = self.len();
        if n == 0 {
            return Ok(Vec::new());
        }
        let c = self.cartan_i64()?;
        let bound = 2 * n * n + 240;
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        let mut steps = 0usize;
        while let Some(v) = queue.pop_front() {
            for j in 0..n {
                steps += 1;
                if steps > budget {
                    return Err(RootError::BudgetExceeded { cap: budget });
                }
                // s_j(v) = v - <v, σ_j^∨> σ_j
                let pairing: i64 = (0..n).map(|l| v[l] * c[l][j]).sum();
                if pairing == 0 {
                    continue;
                }
                let mut w = v.clone();
                w[j] -= pairing;
                if seen.insert(w.clone()) {
                    if seen.len() > bound {
                        return Err(RootError::NotFiniteType(
                            "reflection orbit exceeds every finite root count".into(),
                        ));
                    }
                    queue.push_back(w);
                }
            }
        }
        let mut pos: Vec<Vec<i64>> = seen.into_iter().filter(|v| v.iter().all(|&x| x >= 0)).collect();
        pos.sort_by_key(|v| (v.iter().sum::<i64>(), v.clone()));
        let neg: Vec<Vec<i64>> = pos.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
        Ok(pos.into_iter().chain(neg).collect())
    }

    /// All roots as vectors in the ambient space of the base.
    pub fn generate_roots(&self, budget: usize) -> Result<Vec<Vec<Q>>, RootError> {
        Ok(self.root_coords(budget)?.iter().map(|c| self.combine(c)).collect())
    }

    /// `Σ c_i σ_i` in ambient coordinates.
    pub fn combine(&self, coeffs: &[i64]) -> Vec<Q> {
        let dim = self.form.rows();
        let mut out = vec![Q::zero(); dim];
        for (c, v) in coeffs.iter().zip(&self.vectors) {
            if *c == 0 {
                continue;
            }
            let c = q(*c);
            for (o, x) in out.iter_mut().zip(v) {
                *o += &c * x;
            }
        }
        out
    }

    /// Reflection of an ambient vector in the hyperplane orthogonal to `σ_i`.
    pub fn reflect(&self, v: &[Q], i: usize) -> Vec<Q> {
        let s = &self.vectors[i];
        let k = q(2) * form(&self.form, v, s) / self.gram.get(i, i);
        v.iter().zip(s).map(|(x, y)| x - &k * y).collect()
    }

    /// The permutation `π` with `-w₀ σ_i = σ_{π(i)}`.
    ///
    /// A regular dominant vector is pushed to the antidominant chamber by
    /// simple reflections; the recorded word is a reduced expression of `w₀`.
    pub fn opposition_permutation(&self) -> Result<Vec<usize>, RootError> {
        let n = self.len();
        let c = self.cartan_i64()?;
        // Track the pairings <x, σ_i^∨> of x = ρ.
        let mut p = vec![1i64; n];
        let mut word = Vec::new();
        while let Some(j) = (0..n).find(|&j| p[j] > 0) {
            let pj = p[j];
            for (i, pi) in p.iter_mut().enumerate() {
                *pi -= pj * c[j][i];
            }
            word.push(j);
            if word.len() > 2 * n * n + 240 {
                return Err(RootError::NotFiniteType("no longest element".into()));
            }
        }
        let mut perm = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = vec![0i64; n];
            v[i] = 1;
            for &j in &word {
                let pairing: i64 = (0..n).map(|l| v[l] * c[l][j]).sum();
                v[j] -= pairing;
            }
            let target = v
                .iter()
                .position(|&x| x == -1)
                .filter(|_| v.iter().filter(|&&x| x != 0).count() == 1)
                .ok_or_else(|| RootError::NotFiniteType("w0 does not negate the base".into()))?;
            perm.push(target);
        }
        Ok(perm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qvec;
    use crate::roots::{AmbientRootDatum, Family};

    fn simple(f: Family, n: usize) -> RootBase {
        AmbientRootDatum::single(f, n).unwrap().simple_base()
    }

    #[test]
    fn g2_inside_c3() {
        // σ1 = α1 + α3 (long), σ2 = α2.
        let c3 = AmbientRootDatum::single(Family::C, 3).unwrap();
        let base = RootBase::new(vec![qvec(&[1, 0, 1]), qvec(&[0, 1, 0])], c3.form().clone()).unwrap();
        assert_eq!(base.cartan_matrix().unwrap(), IntMatrix::from_i64(&[&[2, -3], &[-1, 2]]));
        let t = base.classify().unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!((t[0].family, t[0].rank), (Family::G, 2));
        // Orbit closure oracle count: |Φ(G2)| = 12.
        assert_eq!(base.generate_roots(DEFAULT_REFLECTION_BUDGET).unwrap().len(), 12);
    }

    #[test]
    fn orthogonal_equal_length_pair() {
        let base = RootBase::from_gram(RatMatrix::from_i64(&[&[2, 0], &[0, 2]])).unwrap();
        assert_eq!(base.cartan_matrix().unwrap(), IntMatrix::from_i64(&[&[2, 0], &[0, 2]]));
    }

    #[test]
    fn non_integral_rejected() {
        let base = RootBase::from_gram(RatMatrix::from_rows(
            &[vec![q(3), q(-1)], vec![q(-1), q(2)]],
            2,
        ))
        .unwrap();
        assert!(matches!(base.cartan_matrix(), Err(RootError::NotARootBase(_))));
    }

    #[test]
    fn root_counts_match_types() {
        for (f, n) in [
            (Family::A, 1),
            (Family::A, 3),
            (Family::B, 3),
            (Family::C, 4),
            (Family::D, 4),
            (Family::E, 6),
            (Family::E, 7),
            (Family::F, 4),
            (Family::G, 2),
        ] {
            let roots = simple(f, n).generate_roots(DEFAULT_REFLECTION_BUDGET).unwrap();
            assert_eq!(roots.len(), f.root_count(n), "{f:?}{n}");
        }
    }

    #[test]
    fn e8_root_count() {
        let roots = simple(Family::E, 8).root_coords(DEFAULT_REFLECTION_BUDGET).unwrap();
        assert_eq!(roots.len(), 240);
    }

    #[test]
    fn a1_roots() {
        let roots = simple(Family::A, 1).generate_roots(DEFAULT_REFLECTION_BUDGET).unwrap();
        assert_eq!(roots, vec![qvec(&[1]), qvec(&[-1])]);
    }

    #[test]
    fn budget_is_enforced() {
        let err = simple(Family::E, 8).root_coords(100).unwrap_err();
        assert_eq!(err, RootError::BudgetExceeded { cap: 100 });
    }

    #[test]
    fn affine_gram_is_not_finite() {
        // Affine A1: Cartan [[2,-2],[-2,2]].
        let base = RootBase::from_gram(RatMatrix::from_i64(&[&[2, -2], &[-2, 2]]));
        // Dependent as vectors under a degenerate form, but the Gram-only
        // presentation is independent; generation must stop.
        let base = base.unwrap();
        assert!(matches!(
            base.root_coords(DEFAULT_REFLECTION_BUDGET),
            Err(RootError::NotFiniteType(_))
        ));
    }

    #[test]
    fn opposition_examples() {
        assert_eq!(simple(Family::A, 1).opposition_permutation().unwrap(), vec![0]);
        // Oracle: w0 of A3 as a product of simple reflections sends α1 to -α3.
        let a3 = simple(Family::A, 3);
        let w0_word = [0usize, 1, 0, 2, 1, 0];
        let mut v = qvec(&[1, 0, 0]);
        for &j in w0_word.iter().rev() {
            v = a3.reflect(&v, j);
        }
        assert_eq!(v, qvec(&[0, 0, -1]));
        assert_eq!(a3.opposition_permutation().unwrap(), vec![2, 1, 0]);
        assert_eq!(simple(Family::B, 2).opposition_permutation().unwrap(), vec![0, 1]);
        assert_eq!(simple(Family::E, 6).opposition_permutation().unwrap(), vec![5, 1, 4, 3, 2, 0]);
        assert_eq!(simple(Family::D, 5).opposition_permutation().unwrap(), vec![0, 1, 2, 4, 3]);
        assert_eq!(simple(Family::D, 4).opposition_permutation().unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn opposition_is_involutive_cartan_automorphism() {
        for (f, n) in [(Family::A, 4), (Family::D, 5), (Family::E, 6), (Family::E, 7), (Family::F, 4)] {
            let b = simple(f, n);
            let p = b.opposition_permutation().unwrap();
            let c = b.cartan_matrix().unwrap();
            for i in 0..n {
                assert_eq!(p[p[i]], i);
                for j in 0..n {
                    assert_eq!(c.get(p[i], p[j]), c.get(i, j));
                }
            }
        }
    }

    #[test]
    fn roots_are_reflection_closed_and_form_invariant() {
        for (f, n) in [(Family::B, 2), (Family::G, 2), (Family::A, 3), (Family::C, 3)] {
            let b = simple(f, n);
            let roots = b.generate_roots(DEFAULT_REFLECTION_BUDGET).unwrap();
            let set: BTreeSet<Vec<Q>> = roots.iter().cloned().collect();
            for s in &roots {
                let ss = form(b.form(), s, s);
                for v in &roots {
                    let k = q(2) * form(b.form(), v, s) / &ss;
                    let r: Vec<Q> = v.iter().zip(s).map(|(x, y)| x - &k * y).collect();
                    assert!(set.contains(&r));
                }
            }
            for i in 0..n {
                for u in &roots {
                    for v in &roots {
                        assert_eq!(
                            form(b.form(), &b.reflect(u, i), &b.reflect(v, i)),
                            form(b.form(), u, v)
                        );
                    }
                }
            }
        }
    }
}
