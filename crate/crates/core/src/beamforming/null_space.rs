use serde::{Deserialize, Serialize};

use crate::association::Association;
use crate::channel::ChannelSet;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// Orthonormal basis of the beams that are silent at every GBS outside a
/// stream's decoding group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullSpaceBasis {
    /// `M x d` matrix with orthonormal columns.
    #[serde(with = "basis_serde")]
    pub basis: CMatrix,
    /// Numerical rank of the stacked complement channels.
    pub complement_rank: usize,
}

impl NullSpaceBasis {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// `Y^H h`.
    pub fn reduce(&self, h: &CVector) -> CVector {
        self.basis.ad_mul(h)
    }

    /// `Y w`.
    pub fn lift(&self, reduced: &CVector) -> CVector {
        &self.basis * reduced
    }
}

/// Null-space basis for `stream` with the default nullity threshold.
pub fn null_space_basis(channels: &ChannelSet, association: &Association, stream: usize) -> Result<NullSpaceBasis> {
    null_space_basis_with_tol(channels, association, stream, linalg::DEFAULT_NULLITY_TOL)
}

/// Stacks `h_n^H` for every GBS outside the stream's group and returns the
/// right singular vectors with (numerically) zero singular value.
pub fn null_space_basis_with_tol(
    channels: &ChannelSet,
    association: &Association,
    stream: usize,
    rel_tol: f64,
) -> Result<NullSpaceBasis> {
    if association.n_gbs() != channels.n_gbs() {
        return Err(Error::DimensionMismatch(format!(
            "association covers {} GBSs, channel set has {}",
            association.n_gbs(),
            channels.n_gbs()
        )));
    }
    if stream >= association.n_streams() {
        return Err(Error::IndexOutOfRange {
            index: stream,
            len: association.n_streams(),
        });
    }
    let m = channels.n_antennas();
    let complement: Vec<&CVector> = (0..channels.n_gbs())
        .filter(|&n| association.decode_map()[n] != Some(stream))
        .map(|n| &channels.channels[n])
        .collect();
    if m <= complement.len() {
        return Err(Error::InfeasibleZF {
            stream,
            n_antennas: m,
            complement: complement.len(),
        });
    }
    let expected = m - complement.len();
    let stacked = linalg::stack_hermitian_rows(&complement, m);
    let (basis, complement_rank) = linalg::null_space(&stacked, rel_tol);
    if basis.ncols() < expected {
        return Err(Error::RankDeficiency {
            stream,
            expected,
            found: basis.ncols(),
        });
    }
    Ok(NullSpaceBasis {
        basis,
        complement_rank,
    })
}

mod basis_serde {
    use super::CMatrix;
    use crate::linalg::{interleaved, CVector};
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    // Column-major list of interleaved columns.
    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        m.column_iter()
            .map(|c| interleaved::encode(&c.into_owned()))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let cols = Vec::<Vec<f64>>::deserialize(d)?;
        let cols: Vec<CVector> = cols
            .iter()
            .map(|c| interleaved::decode(c).ok_or_else(|| D::Error::custom("odd-length column")))
            .collect::<Result<_, _>>()?;
        let rows = cols.first().map_or(0, |c| c.len());
        if cols.iter().any(|c| c.len() != rows) {
            return Err(D::Error::custom("ragged basis columns"));
        }
        Ok(CMatrix::from_fn(rows, cols.len(), |r, c| cols[c][r]))
    }
}
