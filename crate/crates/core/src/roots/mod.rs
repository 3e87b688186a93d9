//! Finite crystallographic root systems in simple-root coordinates.

mod base;
mod classify;

pub use base::{RootBase, DEFAULT_REFLECTION_BUDGET};
pub use classify::{classify, type_name, CartanType};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{q, IntMatrix, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("not a root base: {0}")]
    NotARootBase(String),
    #[error("not of finite type: {0}")]
    NotFiniteType(String),
    #[error("reflection budget of {cap} applications exceeded")]
    BudgetExceeded { cap: usize },
    #[error("invalid Dynkin type {0}")]
    InvalidType(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn is_valid_rank(self, rank: usize) -> bool {
        match self {
            Family::A => rank >= 1,
            Family::B | Family::C | Family::D => rank >= 2,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        }
    }

    /// Number of roots of the irreducible system of this type.
    pub fn root_count(self, n: usize) -> usize {
        match self {
            Family::A => n * (n + 1),
            Family::B | Family::C => 2 * n * n,
            Family::D => 2 * n * (n - 1),
            Family::E => match n {
                6 => 72,
                7 => 126,
                _ => 240,
            },
            Family::F => 48,
            Family::G => 12,
        }
    }

    pub fn weyl_order(self, n: usize) -> BigInt {
        let fact = |k: usize| (1..=k).fold(BigInt::from(1), |acc, i| acc * i);
        match self {
            Family::A => fact(n + 1),
            Family::B | Family::C => (BigInt::from(1) << n) * fact(n),
            Family::D => (BigInt::from(1) << (n - 1)) * fact(n),
            Family::E => BigInt::from(match n {
                6 => 51_840u64,
                7 => 2_903_040,
                _ => 696_729_600,
            }),
            Family::F => BigInt::from(1152),
            Family::G => BigInt::from(12),
        }
    }
}

impl FromStr for Family {
    type Err = RootError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            other => Err(RootError::InvalidType(other.to_string())),
        }
    }
}

/// Product of the Weyl group orders of the listed irreducible types.
pub fn weyl_order(types: &[(Family, usize)]) -> BigInt {
    types.iter().fold(BigInt::from(1), |acc, &(f, n)| acc * f.weyl_order(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynkinComponent {
    pub family: Family,
    pub rank: usize,
    pub label: String,
}

impl DynkinComponent {
    pub fn new(family: Family, rank: usize, label: impl Into<String>) -> Result<Self, RootError> {
        if !family.is_valid_rank(rank) {
            return Err(RootError::InvalidType(format!("{}{}", family.letter(), rank)));
        }
        Ok(Self { family, rank, label: label.into() })
    }

    /// Bourbaki-numbered edges `(i, j, (α_i, α_j))`, 0-indexed.
    fn edges(&self) -> Vec<(usize, usize, i64)> {
        let n = self.rank;
        let chain = |len: usize, w: i64| (0..len.saturating_sub(1)).map(move |i| (i, i + 1, w));
        match self.family {
            Family::A => chain(n, -1).collect(),
            Family::B => chain(n, -2).collect(),
            Family::C => {
                let mut e: Vec<_> = chain(n - 1, -1).collect();
                e.push((n - 2, n - 1, -2));
                e
            }
            Family::D => {
                let mut e: Vec<_> = chain(n - 1, -1).collect();
                // α_n hangs off α_{n-2}, next to α_{n-1}.
                if n >= 3 {
                    e.push((n - 3, n - 1, -1));
                }
                e
            }
            Family::E => {
                let mut e = vec![(0, 2, -1), (1, 3, -1)];
                e.extend((2..n - 1).map(|i| (i, i + 1, -1)));
                e
            }
            Family::F => vec![(0, 1, -2), (1, 2, -2), (2, 3, -1)],
            Family::G => vec![(0, 1, -3)],
        }
    }

    fn lengths(&self) -> Vec<i64> {
        let n = self.rank;
        match self.family {
            Family::A | Family::D | Family::E => vec![2; n],
            Family::B => (0..n).map(|i| if i + 1 < n { 4 } else { 2 }).collect(),
            Family::C => (0..n).map(|i| if i + 1 < n { 2 } else { 4 }).collect(),
            Family::F => vec![4, 4, 2, 2],
            Family::G => vec![2, 6],
        }
    }

    /// Invariant form on simple roots: short roots have squared length 2.
    pub fn gram(&self) -> RatMatrix {
        let mut g = RatMatrix::zeros(self.rank, self.rank);
        for (i, l) in self.lengths().into_iter().enumerate() {
            g.set(i, i, q(l));
        }
        for (i, j, w) in self.edges() {
            g.set(i, j, q(w));
            g.set(j, i, q(w));
        }
        g
    }

    /// Nontrivial diagram automorphism as a permutation of simple-root
    /// indices, if the diagram has one (`A_n`, `n ≥ 2`; `D_n`; `E_6`).
    pub fn flip(&self) -> Option<Vec<usize>> {
        let n = self.rank;
        match self.family {
            Family::A if n >= 2 => Some((0..n).rev().collect()),
            Family::D if n >= 3 => {
                let mut p: Vec<usize> = (0..n).collect();
                p.swap(n - 2, n - 1);
                Some(p)
            }
            Family::D if n == 2 => Some(vec![1, 0]),
            Family::E if n == 6 => Some(vec![5, 1, 4, 3, 2, 0]),
            _ => None,
        }
    }
}

impl fmt::Display for DynkinComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// Ambient group data: simple roots are the standard basis of `Q^dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbientRootDatum {
    components: Vec<DynkinComponent>,
    offsets: Vec<usize>,
    dim: usize,
    form: RatMatrix,
}

impl AmbientRootDatum {
    pub fn new(components: Vec<DynkinComponent>) -> Self {
        let mut offsets = Vec::with_capacity(components.len());
        let mut dim = 0;
        for c in &components {
            offsets.push(dim);
            dim += c.rank;
        }
        let mut form = RatMatrix::zeros(dim, dim);
        for (c, &off) in components.iter().zip(&offsets) {
            let g = c.gram();
            for i in 0..c.rank {
                for j in 0..c.rank {
                    form.set(off + i, off + j, g.get(i, j).clone());
                }
            }
        }
        Self { components, offsets, dim, form }
    }

    pub fn single(family: Family, rank: usize) -> Result<Self, RootError> {
        Ok(Self::new(vec![DynkinComponent::new(family, rank, "c1")?]))
    }

    pub fn components(&self) -> &[DynkinComponent] {
        &self.components
    }

    pub fn offset(&self, component: usize) -> usize {
        self.offsets[component]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn form(&self) -> &RatMatrix {
        &self.form
    }

    /// `a3` for a single component, `c1.a3` otherwise (Bourbaki numbering).
    pub fn root_name(&self, index: usize) -> String {
        let (ci, local) = self.locate(index);
        if self.components.len() == 1 {
            format!("a{}", local + 1)
        } else {
            format!("{}.a{}", self.components[ci].label, local + 1)
        }
    }

    pub fn locate(&self, index: usize) -> (usize, usize) {
        let ci = self.offsets.iter().rposition(|&o| o <= index).expect("index in range");
        (ci, index - self.offsets[ci])
    }

    pub fn root_index(&self, name: &str) -> Option<usize> {
        let name = name.trim();
        let (label, local) = match name.split_once('.') {
            Some((l, r)) => (Some(l), r),
            None => (None, name),
        };
        let k: usize = local.strip_prefix(['a', 'α'])?.parse().ok()?;
        let ci = match label {
            Some(l) => self.components.iter().position(|c| c.label == l)?,
            None if self.components.len() == 1 => 0,
            None => return None,
        };
        (k >= 1 && k <= self.components[ci].rank).then(|| self.offsets[ci] + k - 1)
    }

    pub fn component_index(&self, label: &str) -> Option<usize> {
        self.components.iter().position(|c| c.label == label)
    }

    /// Simple roots `i`, `j` are joined in the Dynkin diagram.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && !num_traits::Zero::is_zero(self.form.get(i, j))
    }

    /// Permutation matrix `e_i ↦ e_{perm[i]}` (acting on column vectors).
    pub fn permutation_matrix(perm: &[usize]) -> IntMatrix {
        let n = perm.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, &p) in perm.iter().enumerate() {
            m.set(p, i, BigInt::from(1));
        }
        m
    }

    /// Diagram flip of one component, extended by the identity.
    pub fn component_flip(&self, component: usize) -> Option<Vec<usize>> {
        let local = self.components[component].flip()?;
        let off = self.offsets[component];
        let mut perm: Vec<usize> = (0..self.dim).collect();
        for (i, p) in local.into_iter().enumerate() {
            perm[off + i] = off + p;
        }
        Some(perm)
    }

    /// Exchange of two isomorphic components.
    pub fn component_swap(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let (ca, cb) = (&self.components[a], &self.components[b]);
        if ca.family != cb.family || ca.rank != cb.rank || a == b {
            return None;
        }
        let mut perm: Vec<usize> = (0..self.dim).collect();
        for i in 0..ca.rank {
            perm[self.offsets[a] + i] = self.offsets[b] + i;
            perm[self.offsets[b] + i] = self.offsets[a] + i;
        }
        Some(perm)
    }

    /// Root base made of the simple roots themselves.
    pub fn simple_base(&self) -> RootBase {
        let vectors = RatMatrix::identity(self.dim).row_vecs();
        RootBase::new(vectors, self.form.clone()).expect("simple roots are independent")
    }
}

impl fmt::Display for AmbientRootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_orders() {
        assert_eq!(weyl_order(&[(Family::A, 1)]), BigInt::from(2));
        assert_eq!(weyl_order(&[(Family::B, 2)]), BigInt::from(8));
        assert_eq!(weyl_order(&[(Family::G, 2)]), BigInt::from(12));
        assert_eq!(weyl_order(&[(Family::A, 1), (Family::A, 2)]), BigInt::from(12));
    }

    #[test]
    fn invalid_types_rejected() {
        assert!(DynkinComponent::new(Family::E, 5, "x").is_err());
        assert!(DynkinComponent::new(Family::G, 3, "x").is_err());
        assert!(DynkinComponent::new(Family::A, 0, "x").is_err());
    }

    #[test]
    fn forms_are_crystallographic_and_definite() {
        let types = [
            (Family::A, 4),
            (Family::B, 3),
            (Family::C, 3),
            (Family::D, 4),
            (Family::D, 5),
            (Family::E, 6),
            (Family::E, 7),
            (Family::E, 8),
            (Family::F, 4),
            (Family::G, 2),
        ];
        for (f, n) in types {
            let c = DynkinComponent::new(f, n, "c").unwrap();
            let g = c.gram();
            assert!(g.is_symmetric());
            // Leading principal minors positive.
            for k in 1..=n {
                let mut m = RatMatrix::zeros(k, k);
                for i in 0..k {
                    for j in 0..k {
                        m.set(i, j, g.get(i, j).clone());
                    }
                }
                assert!(m.det() > q(0), "{c} minor {k}");
            }
            for i in 0..n {
                for j in 0..n {
                    let cij = q(2) * g.get(i, j) / g.get(j, j);
                    assert!(cij.is_integer(), "{c}");
                }
            }
        }
    }

    #[test]
    fn names_round_trip() {
        let amb = AmbientRootDatum::new(vec![
            DynkinComponent::new(Family::A, 2, "l").unwrap(),
            DynkinComponent::new(Family::A, 2, "r").unwrap(),
        ]);
        assert_eq!(amb.root_name(3), "r.a2");
        assert_eq!(amb.root_index("r.a2"), Some(3));
        assert_eq!(amb.root_index("a2"), None);
        let c3 = AmbientRootDatum::single(Family::C, 3).unwrap();
        assert_eq!(c3.root_index("a3"), Some(2));
        assert_eq!(c3.root_index("a4"), None);
    }
}
