use super::{form, LinalgError, RatMatrix, Q};

/// Orthogonal projection onto the span of `basis` with respect to a
/// symmetric form that is nondegenerate on that span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalProjector {
    basis: Vec<Vec<Q>>,
    form: RatMatrix,
    gram_inv: RatMatrix,
}

impl OrthogonalProjector {
    pub fn new(basis: Vec<Vec<Q>>, form_matrix: RatMatrix) -> Result<Self, LinalgError> {
        let k = basis.len();
        let mut gram = RatMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                gram.set(i, j, form(&form_matrix, &basis[i], &basis[j]));
            }
        }
        let gram_inv = gram.inverse().ok_or(LinalgError::Singular)?;
        Ok(Self { basis, form: form_matrix, gram_inv })
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Values `(b_j, v)` of the form against the basis.
    pub fn dual_coords(&self, v: &[Q]) -> Vec<Q> {
        self.basis.iter().map(|b| form(&self.form, b, v)).collect()
    }

    /// Coefficients of the projection of `v` in the basis.
    pub fn coords(&self, v: &[Q]) -> Vec<Q> {
        self.gram_inv.mul_vec(&self.dual_coords(v))
    }

    pub fn project(&self, v: &[Q]) -> Vec<Q> {
        let c = self.coords(v);
        let mut out = vec![Q::from_integer(0.into()); v.len()];
        for (ci, b) in c.iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += ci * x;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qr, qvec};

    #[test]
    fn projects_onto_diagonal() {
        let p = OrthogonalProjector::new(vec![qvec(&[1, 1])], RatMatrix::identity(2)).unwrap();
        assert_eq!(p.project(&qvec(&[1, 0])), vec![qr(1, 2), qr(1, 2)]);
        assert_eq!(p.coords(&qvec(&[3, 1])), vec![qr(2, 1)]);
    }

    #[test]
    fn idempotent_under_a_skew_form() {
        let g = RatMatrix::from_i64(&[&[2, -1], &[-1, 2]]);
        let p = OrthogonalProjector::new(vec![qvec(&[1, 0])], g).unwrap();
        let once = p.project(&qvec(&[0, 1]));
        assert_eq!(once, vec![qr(-1, 2), qr(0, 1)]);
        assert_eq!(p.project(&once), once);
    }

    #[test]
    fn degenerate_span_is_rejected() {
        let g = RatMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert!(OrthogonalProjector::new(vec![qvec(&[1, 0])], g).is_err());
    }
}
