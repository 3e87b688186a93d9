use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{Int, IntMatrix};

fn row_sub(m: &mut IntMatrix, target: usize, src: usize, f: &Int) {
    for j in 0..m.cols() {
        let v = m.get(target, j) - f * m.get(src, j);
        m.set(target, j, v);
    }
}

fn col_sub(m: &mut IntMatrix, target: usize, src: usize, f: &Int) {
    for i in 0..m.rows() {
        let v = m.get(i, target) - f * m.get(i, src);
        m.set(i, target, v);
    }
}

/// Smith normal form: `(d, u, v)` with `u * m * v = d`, `u`, `v` unimodular
/// and `d` diagonal with nonnegative entries `d1 | d2 | ...`.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return (d, u, v);
            };
            d.swap_rows(t, bi);
            u.swap_rows(t, bi);
            d.swap_cols(t, bj);
            v.swap_cols(t, bj);

            let p = d.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..rows {
                let f = d.get(i, t).div_floor(&p);
                if !f.is_zero() {
                    row_sub(&mut d, i, t, &f);
                    row_sub(&mut u, i, t, &f);
                }
                dirty |= !d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let f = d.get(t, j).div_floor(&p);
                if !f.is_zero() {
                    col_sub(&mut d, j, t, &f);
                    col_sub(&mut v, j, t, &f);
                }
                dirty |= !d.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = -Int::from(1);
                    row_sub(&mut d, t, i, &one);
                    row_sub(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            for j in 0..cols {
                let x = -d.get(t, j).clone();
                d.set(t, j, x);
            }
            for j in 0..rows {
                let x = -u.get(t, j).clone();
                u.set(t, j, x);
            }
        }
    }
    (d, u, v)
}

/// Nonzero diagonal entries of the Smith form.
pub fn elementary_divisors(m: &IntMatrix) -> Vec<Int> {
    let (d, _, _) = smith_normal_form(m);
    (0..d.rows().min(d.cols()))
        .map(|i| d.get(i, i).clone())
        .filter(|x| !x.is_zero())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hnf::is_unimodular;
    use proptest::prelude::*;

    fn check(m: &IntMatrix) -> IntMatrix {
        let (d, u, v) = smith_normal_form(m);
        assert_eq!(u.mul(m).mul(&v), d);
        assert!(is_unimodular(&u) && is_unimodular(&v));
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i != j {
                    assert!(d.get(i, j).is_zero());
                }
            }
        }
        let diag: Vec<Int> = (0..d.rows().min(d.cols())).map(|i| d.get(i, i).clone()).collect();
        for w in diag.windows(2) {
            assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        }
        d
    }

    #[test]
    fn identity_fixed() {
        assert_eq!(check(&IntMatrix::identity(3)), IntMatrix::identity(3));
    }

    #[test]
    fn coprime_diagonal_merges() {
        let d = check(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(d, IntMatrix::from_i64(&[&[1, 0], &[0, 6]]));
    }

    #[test]
    fn zero_matrix() {
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(check(&z), z);
        assert!(elementary_divisors(&z).is_empty());
    }

    proptest! {
        #[test]
        fn smith_defining_identity(entries in proptest::collection::vec(-12i64..13, 9), rows in 1usize..4, cols in 1usize..4) {
            let data: Vec<Vec<Int>> = (0..rows)
                .map(|i| (0..cols).map(|j| Int::from(entries[i * 3 + j])).collect())
                .collect();
            check(&IntMatrix::from_rows(&data, cols));
        }
    }
}
