//! The K-level spherical datum `(Ξ_K, Σ_K, S^(p), *)` and its validation.

use std::collections::BTreeSet;

use num_traits::Signed;
use thiserror::Error;

use crate::linalg::{fmt_q, is_zero, IntLattice, RatLattice, RatMatrix, Q};
use crate::roots::{Family, RootBase, RootError, DEFAULT_REFLECTION_BUDGET};
use crate::tits::{apply_int, StarAction, TitsError, TitsIndex};
use crate::validation::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SphericalError {
    #[error("malformed datum: {0}")]
    Shape(String),
    #[error("coefficient of simple root {index} is negative")]
    NegativeCoefficient { index: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Tits(#[from] TitsError),
    #[error(transparent)]
    Root(#[from] RootError),
}

/// Indices with strictly positive coefficient.
pub fn support(sigma: &[Q]) -> Result<Vec<usize>, SphericalError> {
    if let Some(index) = sigma.iter().position(|x| x.is_negative()) {
        return Err(SphericalError::NegativeCoefficient { index });
    }
    Ok(sigma.iter().enumerate().filter(|(_, x)| x.is_positive()).map(|(i, _)| i).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactRootSplit {
    pub sigma0: Vec<usize>,
    pub noncompact: Vec<usize>,
}

#[derive(Debug, Clone)]
enum Presentation {
    Ambient { index: TitsIndex, sp: Vec<usize> },
    Abstract { compact: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct SphericalDatumK {
    presentation: Presentation,
    form: RatMatrix,
    star: StarAction,
    xi: RatLattice,
    sigma: Vec<Vec<Q>>,
    names: Vec<String>,
    budget: usize,
}

fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("s{i}")).collect()
}

fn check_vectors(sigma: &[Vec<Q>], dim: usize) -> Result<(), SphericalError> {
    match sigma.iter().find(|s| s.len() != dim) {
        Some(s) => Err(SphericalError::Shape(format!(
            "spherical root has {} coordinates, expected {dim}",
            s.len()
        ))),
        None => Ok(()),
    }
}

impl SphericalDatumK {
    /// Datum in simple-root coordinates of `index`. `xi` defaults to `ZΣ_K`.
    pub fn ambient(
        index: TitsIndex,
        xi: Option<RatLattice>,
        sigma: Vec<Vec<Q>>,
        sp: Vec<usize>,
        names: Option<Vec<String>>,
    ) -> Result<Self, SphericalError> {
        let dim = index.ambient().dim();
        check_vectors(&sigma, dim)?;
        let xi = xi.unwrap_or_else(|| RatLattice::from_generators(dim, &sigma));
        if xi.ambient_rank() != dim {
            return Err(SphericalError::Shape("lattice lives in the wrong space".into()));
        }
        let mut sp = sp;
        sp.sort_unstable();
        sp.dedup();
        if sp.iter().any(|&i| i >= dim) {
            return Err(SphericalError::Shape("S^(p) index out of range".into()));
        }
        let names = names.unwrap_or_else(|| default_names(sigma.len()));
        if names.len() != sigma.len() {
            return Err(SphericalError::Shape("one name per spherical root".into()));
        }
        Ok(Self {
            form: index.ambient().form().clone(),
            star: index.star().clone(),
            budget: index.budget(),
            presentation: Presentation::Ambient { index, sp },
            xi,
            sigma,
            names,
        })
    }

    /// Datum on `Ξ_K = Z^n` with an explicit symmetric pairing, star
    /// matrices, and the indices of the compact spherical roots.
    pub fn abstract_lattice(
        pairing: RatMatrix,
        star: StarAction,
        sigma: Vec<Vec<Q>>,
        compact: Vec<usize>,
        names: Option<Vec<String>>,
    ) -> Result<Self, SphericalError> {
        let n = pairing.rows();
        if pairing.cols() != n || star.dim() != n {
            return Err(SphericalError::Shape("pairing and star must be square of the lattice rank".into()));
        }
        check_vectors(&sigma, n)?;
        let mut compact = compact;
        compact.sort_unstable();
        compact.dedup();
        if compact.iter().any(|&i| i >= sigma.len()) {
            return Err(SphericalError::Shape("compact index out of range".into()));
        }
        let names = names.unwrap_or_else(|| default_names(sigma.len()));
        if names.len() != sigma.len() {
            return Err(SphericalError::Shape("one name per spherical root".into()));
        }
        Ok(Self {
            presentation: Presentation::Abstract { compact },
            form: pairing,
            star,
            xi: RatLattice::from_int(IntLattice::standard(n)),
            sigma,
            names,
            budget: DEFAULT_REFLECTION_BUDGET,
        })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        if let Presentation::Ambient { index, .. } = &mut self.presentation {
            *index = index.clone().with_budget(budget);
        }
        self
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn dim(&self) -> usize {
        self.form.rows()
    }

    pub fn form(&self) -> &RatMatrix {
        &self.form
    }

    pub fn star(&self) -> &StarAction {
        &self.star
    }

    pub fn xi(&self) -> &RatLattice {
        &self.xi
    }

    pub fn sigma(&self) -> &[Vec<Q>] {
        &self.sigma
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self) -> Option<&TitsIndex> {
        match &self.presentation {
            Presentation::Ambient { index, .. } => Some(index),
            Presentation::Abstract { .. } => None,
        }
    }

    pub fn is_ambient(&self) -> bool {
        self.index().is_some()
    }

    pub fn sp(&self) -> &[usize] {
        match &self.presentation {
            Presentation::Ambient { sp, .. } => sp,
            Presentation::Abstract { .. } => &[],
        }
    }

    /// Spherical roots as a root base under the form.
    pub fn sigma_base(&self) -> Result<RootBase, RootError> {
        RootBase::new(self.sigma.clone(), self.form.clone())
    }

    pub fn compact_split(&self) -> Result<CompactRootSplit, SphericalError> {
        let sigma0: Vec<usize> = match &self.presentation {
            Presentation::Ambient { index, .. } => {
                let s0: BTreeSet<usize> = index.compact().iter().copied().collect();
                let mut by_support = Vec::new();
                for (i, s) in self.sigma.iter().enumerate() {
                    let supp = support(s)?;
                    let compact_support = supp.iter().all(|j| s0.contains(j));
                    let compact_res = is_zero(&index.res_a(s));
                    if compact_support != compact_res {
                        return Err(SphericalError::InternalInconsistency(format!(
                            "{} has support test {compact_support} but restriction test {compact_res}",
                            self.names[i]
                        )));
                    }
                    if compact_support {
                        by_support.push(i);
                    }
                }
                by_support
            }
            Presentation::Abstract { compact } => compact.clone(),
        };
        let noncompact = (0..self.sigma.len()).filter(|i| !sigma0.contains(i)).collect();
        Ok(CompactRootSplit { sigma0, noncompact })
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        self.check_invariants(&mut out);
        if let Presentation::Ambient { index, sp } = &self.presentation {
            check_sp(index, sp, &mut out);
        }
        let split = match self.compact_split() {
            Ok(s) => s,
            Err(e) => {
                out.push(Violation::error("compact-split", e.to_string()));
                return out;
            }
        };
        self.check_opposition(&split, &mut out);
        out
    }

    fn check_invariants(&self, out: &mut Vec<Violation>) {
        let n = self.dim();
        if let Some(index) = self.index() {
            out.extend(index.validate());
            for (name, s) in self.names.iter().zip(&self.sigma) {
                if let Some(i) = s.iter().position(|x| x.is_negative()) {
                    out.push(Violation::error(
                        "sigma-nonnegative",
                        format!("{name} has coefficient {} on {}", fmt_q(&s[i]), index.ambient().root_name(i)),
                    ));
                }
            }
        } else {
            if !self.form.is_symmetric() {
                out.push(Violation::error("pairing-symmetric", "pairing matrix is not symmetric"));
            }
            for (g, m) in self.star.generators().iter().enumerate() {
                let d = m.to_rat();
                if d.transpose().mul(&self.form).mul(&d) != self.form {
                    out.push(Violation::error(
                        "star-isometry",
                        format!("generator {g} does not preserve the pairing"),
                    ));
                }
            }
        }
        for (name, s) in self.names.iter().zip(&self.sigma) {
            if !self.xi.contains(s) {
                out.push(Violation::error("sigma-in-lattice", format!("{name} is not in the lattice")));
            }
        }
        if !self.sigma.is_empty() && RatMatrix::from_rows(&self.sigma, n).rank() < self.sigma.len() {
            out.push(Violation::error("sigma-independent", "spherical roots are linearly dependent"));
        }
        if !self.star.permutes(&self.sigma) {
            out.push(Violation::error("star-permutes-sigma", "star action does not permute the spherical roots"));
        }
        let xi_basis = self.xi.basis_q();
        for (g, m) in self.star.generators().iter().enumerate() {
            if !xi_basis.iter().all(|b| self.xi.contains(&apply_int(m, b))) {
                out.push(Violation::error(
                    "star-preserves-lattice",
                    format!("generator {g} does not preserve the lattice"),
                ));
            }
        }
        if let Err(e) = self.sigma_base() {
            if !self.sigma.is_empty() {
                out.push(Violation::error("sigma-root-base", e.to_string()));
            }
        }
    }

    fn check_opposition(&self, split: &CompactRootSplit, out: &mut Vec<Violation>) {
        let Ok(base) = self.sigma_base() else { return };
        if base.is_empty() {
            return;
        }
        let Ok(perm) = base.opposition_permutation() else { return };
        let s0: BTreeSet<usize> = split.sigma0.iter().copied().collect();
        let image: BTreeSet<usize> = s0.iter().map(|&i| perm[i]).collect();
        if image != s0 {
            out.push(Violation::error(
                "opposition",
                "-w0 of the spherical root system does not preserve the compact spherical roots",
            ));
        }
        // Positions lint for inner forms of type A_n.
        let Ok(types) = base.classify() else { return };
        let inner = self.sigma.iter().all(|s| self.star.fixes(s));
        if types.len() != 1 || types[0].family != Family::A || !inner {
            return;
        }
        let n = types[0].rank;
        let positions: Vec<usize> = types[0]
            .order
            .iter()
            .enumerate()
            .filter(|(_, i)| !s0.contains(i))
            .map(|(p, _)| p + 1)
            .collect();
        let ok = (1..=n + 1)
            .filter(|d| (n + 1) % d == 0)
            .any(|d| positions == (1..).map(|k| k * d).take_while(|&p| p <= n + 1 - d).collect::<Vec<_>>());
        if !ok {
            out.push(Violation::warning(
                "A_n-positions",
                format!("noncompact positions {positions:?} in A{n} are not of the form d, 2d, ...; d | {}", n + 1),
            ));
        }
    }
}

fn check_sp(index: &TitsIndex, sp: &[usize], out: &mut Vec<Violation>) {
    let star = index.star();
    let spset: BTreeSet<usize> = sp.iter().copied().collect();
    for g in 0..star.generators().len() {
        if let Some(perm) = star.as_permutation(g) {
            let image: BTreeSet<usize> = spset.iter().map(|&i| perm[i]).collect();
            if image != spset {
                out.push(Violation::error("Sp1", format!("S^(p) is not stable under star generator {g}")));
            }
        }
    }
    let s0: BTreeSet<usize> = index.compact().iter().copied().collect();
    let amb = index.ambient();
    let nodes: Vec<usize> = spset.union(&s0).copied().collect();
    let mut seen = BTreeSet::new();
    for &start in &nodes {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            for &j in &nodes {
                if amb.adjacent(comp[i], j) && seen.insert(j) {
                    comp.push(j);
                }
            }
            i += 1;
        }
        if !comp.iter().all(|c| spset.contains(c)) && !comp.iter().all(|c| s0.contains(c)) {
            comp.sort_unstable();
            let names: Vec<String> = comp.iter().map(|&c| amb.root_name(c)).collect();
            out.push(Violation::error(
                "Sp3",
                format!("component {{{}}} of S^(p) ∪ S⁰ meets both parts", names.join(", ")),
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qr, qvec};
    use crate::roots::AmbientRootDatum;
    use crate::validation::Severity;

    fn a3_datum(compact_sigma: &[usize]) -> SphericalDatumK {
        // Σ_K = S for A3 with trivial star; compact simple roots follow Σ⁰.
        let amb = AmbientRootDatum::single(Family::A, 3).unwrap();
        let ix = TitsIndex::new(amb, compact_sigma.to_vec(), StarAction::trivial(3)).unwrap();
        let sigma = vec![qvec(&[1, 0, 0]), qvec(&[0, 1, 0]), qvec(&[0, 0, 1])];
        SphericalDatumK::ambient(ix, None, sigma, vec![], None).unwrap()
    }

    #[test]
    fn support_examples() {
        assert_eq!(support(&qvec(&[1, 0, 1])).unwrap(), vec![0, 2]);
        let e6 = vec![q0(), qr(1, 1), qr(1, 2), qr(1, 1), qr(1, 2), q0()];
        assert_eq!(support(&e6).unwrap(), vec![1, 2, 3, 4]);
        assert!(support(&qvec(&[0, 0])).unwrap().is_empty());
        assert_eq!(
            support(&qvec(&[1, -1])).unwrap_err(),
            SphericalError::NegativeCoefficient { index: 1 }
        );
    }

    fn q0() -> Q {
        qr(0, 1)
    }

    #[test]
    fn opposition_failure_in_a3() {
        let v = a3_datum(&[0]).validate();
        assert!(v.iter().any(|x| x.check == "opposition"), "{v:?}");
    }

    #[test]
    fn opposition_and_lint_pass_with_outer_pair_compact() {
        let d = a3_datum(&[0, 2]);
        assert_eq!(d.compact_split().unwrap().sigma0, vec![0, 2]);
        assert!(d.validate().is_empty());
    }

    #[test]
    fn lint_flags_bad_positions() {
        // A3 with only the middle root compact: positions {1,3} match no d.
        let v = a3_datum(&[1]).validate();
        let lint: Vec<_> = v.iter().filter(|x| x.check == "A_n-positions").collect();
        assert_eq!(lint.len(), 1);
        assert_eq!(lint[0].severity, Severity::Warning);
    }

    #[test]
    fn sp3_component_rule() {
        let amb = AmbientRootDatum::single(Family::A, 3).unwrap();
        let ix = TitsIndex::new(amb, vec![0], StarAction::trivial(3)).unwrap();
        let d = SphericalDatumK::ambient(ix, None, vec![qvec(&[0, 1, 1])], vec![1], None).unwrap();
        assert!(d.validate().iter().any(|x| x.check == "Sp3"));
    }

    #[test]
    fn validation_is_deterministic() {
        let d = a3_datum(&[1]);
        assert_eq!(d.validate(), d.validate());
    }

    #[test]
    fn abstract_star_must_be_isometry() {
        let star = StarAction::new(2, vec![crate::linalg::IntMatrix::from_i64(&[&[1, 1], &[0, 1]])]).unwrap();
        let d = SphericalDatumK::abstract_lattice(RatMatrix::identity(2), star, vec![qvec(&[1, -1])], vec![], None)
            .unwrap();
        assert!(d.validate().iter().any(|x| x.check == "star-isometry"));
    }
}
