use std::fmt;

use num_traits::ToPrimitive;

use super::{Family, RootError};
use crate::linalg::IntMatrix;

/// One irreducible component of a classified Cartan matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
    /// `order[k]` is the input index playing the role of Bourbaki's `α_{k+1}`.
    pub order: Vec<usize>,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// Formats a type list as `B2`, `A1xA1`, or `0` for the empty system.
pub fn type_name(types: &[CartanType]) -> String {
    if types.is_empty() {
        return "0".into();
    }
    types.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("x")
}

struct Graph {
    n: usize,
    c: Vec<Vec<i64>>,
}

impl Graph {
    fn neighbors(&self, i: usize, within: &[usize]) -> Vec<usize> {
        within.iter().copied().filter(|&j| j != i && self.c[i][j] != 0).collect()
    }

    fn bond(&self, i: usize, j: usize) -> i64 {
        self.c[i][j] * self.c[j][i]
    }

    /// `i` is longer than `j` for adjacent `i`, `j`.
    fn longer(&self, i: usize, j: usize) -> bool {
        self.c[i][j].abs() > self.c[j][i].abs()
    }

    fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut stack = vec![s];
            let mut comp = Vec::new();
            seen[s] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for w in 0..self.n {
                    if !seen[w] && w != v && self.c[v][w] != 0 {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Walks a path starting at `start` away from `avoid`.
    fn walk(&self, start: usize, avoid: Option<usize>, within: &[usize]) -> Vec<usize> {
        let mut path = vec![start];
        let mut prev = avoid;
        let mut cur = start;
        loop {
            let next: Vec<usize> =
                self.neighbors(cur, within).into_iter().filter(|&w| Some(w) != prev).collect();
            match next.as_slice() {
                [w] => {
                    path.push(*w);
                    prev = Some(cur);
                    cur = *w;
                }
                _ => return path,
            }
        }
    }
}

fn not_finite(msg: &str) -> RootError {
    RootError::NotFiniteType(msg.to_string())
}

/// Decomposes a Cartan matrix (convention `c_ij = <σ_i, σ_j^∨>`) into
/// irreducible finite types with Bourbaki orderings. Components are listed by
/// their smallest input index. A rank-2 double bond is labelled `B2` when the
/// lower-indexed root is long and `C2` otherwise.
pub fn classify(c: &IntMatrix) -> Result<Vec<CartanType>, RootError> {
    let n = c.rows();
    if c.cols() != n {
        return Err(not_finite("Cartan matrix is not square"));
    }
    let mut m = vec![vec![0i64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = c.get(i, j).to_i64().ok_or_else(|| not_finite("entry too large"))?;
        }
    }
    for i in 0..n {
        if m[i][i] != 2 {
            return Err(not_finite("diagonal entry differs from 2"));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if m[i][j] > 0 || (m[i][j] == 0) != (m[j][i] == 0) {
                return Err(not_finite("off-diagonal entries are not a Cartan pattern"));
            }
            let b = m[i][j] * m[j][i];
            if b > 3 || (b > 1 && m[i][j].abs().min(m[j][i].abs()) != 1) {
                return Err(not_finite("bond is affine or hyperbolic"));
            }
        }
    }
    let g = Graph { n, c: m };
    g.components().into_iter().map(|comp| classify_component(&g, &comp)).collect()
}

fn classify_component(g: &Graph, comp: &[usize]) -> Result<CartanType, RootError> {
    let r = comp.len();
    let edges: Vec<(usize, usize)> = comp
        .iter()
        .flat_map(|&i| comp.iter().map(move |&j| (i, j)))
        .filter(|&(i, j)| i < j && g.c[i][j] != 0)
        .collect();
    if edges.len() + 1 != r {
        return Err(not_finite("Dynkin diagram contains a cycle"));
    }
    if r == 1 {
        return Ok(CartanType { family: Family::A, rank: 1, order: comp.to_vec() });
    }
    let multi: Vec<(usize, usize)> = edges.iter().copied().filter(|&(i, j)| g.bond(i, j) > 1).collect();
    let degree = |i: usize| g.neighbors(i, comp).len();
    let max_degree = comp.iter().map(|&i| degree(i)).max().unwrap_or(0);
    let leaves: Vec<usize> = comp.iter().copied().filter(|&i| degree(i) == 1).collect();

    match multi.as_slice() {
        [(i, j)] if g.bond(*i, *j) == 3 => {
            if r != 2 {
                return Err(not_finite("triple bond outside G2"));
            }
            let (long, short) = if g.longer(*i, *j) { (*i, *j) } else { (*j, *i) };
            Ok(CartanType { family: Family::G, rank: 2, order: vec![short, long] })
        }
        [(i, j)] => {
            if max_degree > 2 {
                return Err(not_finite("double bond with a branch point"));
            }
            let (long, short) = if g.longer(*i, *j) { (*i, *j) } else { (*j, *i) };
            if r == 2 {
                return Ok(if long < short {
                    CartanType { family: Family::B, rank: 2, order: vec![long, short] }
                } else {
                    CartanType { family: Family::C, rank: 2, order: vec![short, long] }
                });
            }
            let ends_at = |v: usize| leaves.contains(&v);
            if ends_at(*i) || ends_at(*j) {
                // Orient so the double bond is the last edge.
                let end = if ends_at(*i) { *i } else { *j };
                let other_end = leaves.iter().copied().find(|&v| v != end).expect("chain");
                let path = g.walk(other_end, None, comp);
                let last = *path.last().expect("nonempty");
                let family = if last == short { Family::B } else { Family::C };
                Ok(CartanType { family, rank: r, order: path })
            } else {
                if r != 4 {
                    return Err(not_finite("interior double bond outside F4"));
                }
                // F4: the long pair comes first.
                let long_leaf = leaves
                    .iter()
                    .copied()
                    .find(|&v| g.walk(v, None, comp)[1] == long)
                    .ok_or_else(|| not_finite("malformed F4"))?;
                Ok(CartanType { family: Family::F, rank: 4, order: g.walk(long_leaf, None, comp) })
            }
        }
        [] => classify_simply_laced(g, comp, max_degree, &leaves),
        _ => Err(not_finite("more than one multiple bond")),
    }
}

fn classify_simply_laced(
    g: &Graph,
    comp: &[usize],
    max_degree: usize,
    leaves: &[usize],
) -> Result<CartanType, RootError> {
    let r = comp.len();
    if max_degree <= 2 {
        let start = *leaves.iter().min().expect("chain has leaves");
        return Ok(CartanType { family: Family::A, rank: r, order: g.walk(start, None, comp) });
    }
    let branches: Vec<usize> = comp.iter().copied().filter(|&i| g.neighbors(i, comp).len() >= 3).collect();
    if branches.len() != 1 || max_degree != 3 {
        return Err(not_finite("simply laced diagram with more than one branch"));
    }
    let center = branches[0];
    let mut arms: Vec<Vec<usize>> = g
        .neighbors(center, comp)
        .into_iter()
        .map(|w| g.walk(w, Some(center), comp))
        .collect();
    // Sort by arm length, ties by the leaf's input index.
    arms.sort_by_key(|a| (a.len(), *a.last().expect("arm")));
    let lens: Vec<usize> = arms.iter().map(Vec::len).collect();
    match lens.as_slice() {
        [1, 1, k] => {
            // D_{k+3}: long arm outward-in, then the branch, then the two leaves.
            // For D4 every arm is a leaf; the lowest-indexed one becomes α1.
            let long = if *k == 1 { 0 } else { 2 };
            let mut order: Vec<usize> = arms[long].iter().rev().copied().collect();
            order.push(center);
            order.extend((0..3).filter(|&a| a != long).map(|a| arms[a][0]));
            Ok(CartanType { family: Family::D, rank: k + 3, order })
        }
        [1, 2, k @ 2..=4] => {
            // E: α1 α3 on the 2-arm, α2 the short arm, α4 center, then α5...
            let (two, long) = (&arms[1], &arms[2]);
            let mut order = vec![two[1], arms[0][0], two[0], center];
            order.extend(long.iter().copied());
            Ok(CartanType { family: Family::E, rank: k + 4, order })
        }
        _ => Err(not_finite("branched diagram outside D and E")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{AmbientRootDatum, DynkinComponent};

    fn one(rows: &[&[i64]]) -> CartanType {
        let t = classify(&IntMatrix::from_i64(rows)).unwrap();
        assert_eq!(t.len(), 1);
        t.into_iter().next().unwrap()
    }

    #[test]
    fn rank_two_types() {
        let a2 = one(&[&[2, -1], &[-1, 2]]);
        assert_eq!((a2.family, a2.rank), (Family::A, 2));
        let b2 = one(&[&[2, -2], &[-1, 2]]);
        assert_eq!((b2.family, b2.order.clone()), (Family::B, vec![0, 1]));
        let c2 = one(&[&[2, -1], &[-2, 2]]);
        assert_eq!((c2.family, c2.order.clone()), (Family::C, vec![0, 1]));
        let g2 = one(&[&[2, -3], &[-1, 2]]);
        assert_eq!((g2.family, g2.order.clone()), (Family::G, vec![1, 0]));
    }

    #[test]
    fn standard_types_recover_bourbaki_order() {
        for (f, n) in [
            (Family::A, 5),
            (Family::B, 4),
            (Family::C, 4),
            (Family::D, 4),
            (Family::D, 6),
            (Family::E, 6),
            (Family::E, 7),
            (Family::E, 8),
            (Family::F, 4),
            (Family::G, 2),
        ] {
            let base = AmbientRootDatum::single(f, n).unwrap().simple_base();
            let t = base.classify().unwrap();
            assert_eq!(t.len(), 1);
            assert_eq!((t[0].family, t[0].rank), (f, n));
            let c = base.cartan_matrix().unwrap();
            // The reported order reproduces the standard Cartan matrix.
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(c.get(t[0].order[i], t[0].order[j]), c.get(i, j), "{f:?}{n}");
                }
            }
        }
    }

    #[test]
    fn permuted_input_is_reordered() {
        // F4 with inputs listed backwards.
        let base = AmbientRootDatum::single(Family::F, 4).unwrap().simple_base();
        let c = base.cartan_matrix().unwrap();
        let perm = [3usize, 2, 1, 0];
        let mut pc = IntMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                pc.set(i, j, c.get(perm[i], perm[j]).clone());
            }
        }
        let t = classify(&pc).unwrap();
        assert_eq!(t[0].family, Family::F);
        assert_eq!(t[0].order, vec![3, 2, 1, 0]);
    }

    #[test]
    fn reducible_and_invalid() {
        let amb = AmbientRootDatum::new(vec![
            DynkinComponent::new(Family::A, 1, "x").unwrap(),
            DynkinComponent::new(Family::B, 2, "y").unwrap(),
        ]);
        let t = amb.simple_base().classify().unwrap();
        assert_eq!(type_name(&t), "A1xB2");
        assert!(classify(&IntMatrix::from_i64(&[&[2, -2], &[-2, 2]])).is_err());
        assert!(classify(&IntMatrix::from_i64(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]])).is_err());
        assert!(classify(&IntMatrix::from_i64(&[&[2, -4], &[-1, 2]])).is_err());
    }
}
