use num_traits::Zero;

use super::hnf::hermite_normal_form;
use super::matrix::IntMatrix;
use super::snf::smith_normal_form;

/// Basis (as rows) of the integer kernel `{x ∈ ℤⁿ : m·x = 0}`.
///
/// The kernel of an integer matrix is always saturated; the columns of `v`
/// from the Smith form paired with zero invariants span it over ℤ. The result
/// is put in Hermite form so equal kernels give equal bases.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let n = m.cols();
    let s = smith_normal_form(m);
    let diag = s.diagonal();
    let free: Vec<usize> = (0..n)
        .filter(|&j| j >= diag.len() || diag[j].is_zero())
        .collect();
    if free.is_empty() {
        return IntMatrix::empty_rows(n);
    }
    let raw = s.v.select_cols(free).transpose();
    hermite_normal_form(&raw).basis()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_trivial_kernel() {
        let k = kernel_basis(&IntMatrix::identity(3));
        assert_eq!(k.shape(), (0, 3));
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        assert_eq!(
            kernel_basis(&IntMatrix::zeros(2, 2)),
            IntMatrix::identity(2)
        );
    }

    #[test]
    fn single_row() {
        let k = kernel_basis(&IntMatrix::from_i64(&[&[1, -1]]));
        assert_eq!(k, IntMatrix::from_i64(&[&[1, 1]]));
    }

    #[test]
    fn saturation() {
        // 2x - 4y = 0 has kernel generated by (2, 1), not (4, 2)
        let k = kernel_basis(&IntMatrix::from_i64(&[&[2, -4]]));
        assert_eq!(k, IntMatrix::from_i64(&[&[2, 1]]));
    }
}
