//! Small complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

/// Default relative threshold below which a singular value counts as zero.
pub const DEFAULT_NULLITY_TOL: f64 = 1e-9;

/// Stacks the conjugate transposes of `vectors` as the rows of a matrix.
///
/// Returns a `0 x dim` matrix when `vectors` is empty.
pub fn stack_hermitian_rows(vectors: &[&CVector], dim: usize) -> CMatrix {
    CMatrix::from_fn(vectors.len(), dim, |r, c| vectors[r][c].conj())
}

/// `a^H b`.
pub fn inner(a: &CVector, b: &CVector) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Singular values sorted in nonincreasing order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank: singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(m: &CMatrix, rel_tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&max) if max > 0.0 => s.iter().filter(|&&x| x > rel_tol * max).count(),
        _ => 0,
    }
}

/// Orthonormal basis of the right null space of `m`, as the columns of the
/// returned matrix, together with the numerical rank of `m`.
///
/// Right singular vectors whose singular value is at most `rel_tol * sigma_max`
/// (or that have no singular value at all because `m` is wide) span the null
/// space. A matrix with no rows, or an all-zero matrix, has the identity as
/// its null-space basis.
pub fn null_space(m: &CMatrix, rel_tol: f64) -> (CMatrix, usize) {
    let dim = m.ncols();
    if m.nrows() == 0 {
        return (CMatrix::identity(dim, dim), 0);
    }
    // Pad wide matrices with zero rows so the SVD yields a full V.
    let square = if m.nrows() < dim {
        let mut padded = CMatrix::zeros(dim, dim);
        padded.view_mut((0, 0), (m.nrows(), dim)).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma = &svd.singular_values;
    let sigma_max = sigma.iter().copied().fold(0.0_f64, f64::max);

    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]).then(a.cmp(&b)));

    let rank = if sigma_max > 0.0 {
        order
            .iter()
            .filter(|&&i| sigma[i] > rel_tol * sigma_max)
            .count()
    } else {
        0
    };
    let null_rows = &order[rank..];
    // Row i of V^H is v_i^H, so the null vector is its conjugate.
    let basis = CMatrix::from_fn(dim, null_rows.len(), |r, c| v_t[(null_rows[c], r)].conj());
    (basis, rank)
}

/// Serde helpers encoding complex vectors as interleaved `[re, im, re, im, ...]`.
pub mod interleaved {
    use super::CVector;
    use num_complex::Complex64;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn encode(v: &CVector) -> Vec<f64> {
        v.iter().flat_map(|z| [z.re, z.im]).collect()
    }

    pub fn decode(flat: &[f64]) -> Option<CVector> {
        if flat.len() % 2 != 0 {
            return None;
        }
        Some(CVector::from_iterator(
            flat.len() / 2,
            flat.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])),
        ))
    }

    pub fn serialize<S: Serializer>(vs: &[CVector], s: S) -> Result<S::Ok, S::Error> {
        vs.iter().map(encode).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<CVector>, D::Error> {
        let raw = Vec::<Vec<f64>>::deserialize(d)?;
        raw.iter()
            .map(|flat| decode(flat).ok_or_else(|| D::Error::custom("odd-length complex array")))
            .collect()
    }
}
