use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{Int, IntMatrix};

fn combine_rows(m: &mut IntMatrix, r: usize, i: usize, coeffs: [&Int; 4]) {
    // row_r <- a*row_r + b*row_i ; row_i <- c*row_r + d*row_i
    let [a, b, c, d] = coeffs;
    for j in 0..m.cols() {
        let x = m.get(r, j).clone();
        let y = m.get(i, j).clone();
        m.set(r, j, a * &x + b * &y);
        m.set(i, j, c * &x + d * &y);
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for j in 0..m.cols() {
        let v = -m.get(r, j).clone();
        m.set(r, j, v);
    }
}

fn sub_multiple(m: &mut IntMatrix, target: usize, src: usize, f: &Int) {
    for j in 0..m.cols() {
        let v = m.get(target, j) - f * m.get(src, j);
        m.set(target, j, v);
    }
}

/// Row-style Hermite normal form: returns `(h, u)` with `u * m = h`, `u`
/// unimodular, `h` in echelon form with positive pivots, entries above each
/// pivot reduced into `[0, pivot)`, and zero rows at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.rows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;
    for c in 0..m.cols() {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if h.get(i, c).is_zero() {
                continue;
            }
            let a = h.get(r, c).clone();
            let b = h.get(i, c).clone();
            let e = a.extended_gcd(&b);
            let g = e.gcd;
            let (nb, na) = (-(&b / &g), &a / &g);
            combine_rows(&mut h, r, i, [&e.x, &e.y, &nb, &na]);
            combine_rows(&mut u, r, i, [&e.x, &e.y, &nb, &na]);
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        let p = h.get(r, c).clone();
        for i in 0..r {
            let f = h.get(i, c).div_floor(&p);
            if !f.is_zero() {
                sub_multiple(&mut h, i, r, &f);
                sub_multiple(&mut u, i, r, &f);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Hermite-canonical basis of the saturated left kernel `{x ∈ Z^rows : x m = 0}`.
pub fn left_kernel(m: &IntMatrix) -> Vec<Vec<Int>> {
    let (h, u) = hermite_normal_form(m);
    let kernel: Vec<Vec<Int>> = (0..h.rows())
        .filter(|&i| h.row(i).iter().all(Zero::is_zero))
        .map(|i| u.row(i).to_vec())
        .collect();
    if kernel.is_empty() {
        return kernel;
    }
    let (hk, _) = hermite_normal_form(&IntMatrix::from_rows(&kernel, m.rows()));
    hk.row_vecs().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect()
}

#[cfg(test)]
pub(crate) fn is_unimodular(u: &IntMatrix) -> bool {
    use num_traits::One;
    u.rows() == u.cols() && u.det().abs().is_one()
}
