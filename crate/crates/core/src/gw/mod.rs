//! Open Gromov-Witten invariants of the generalized and orbifolded
//! conifolds: g-functions, mirror maps, admissible sequences, chamber
//! invariants and the open mirror check.

pub mod admissible;
pub mod chamber;
pub mod gfunc;
pub mod verify;

pub use admissible::{enumerate_admissible, is_admissible, AdmissibleSequence};
pub use chamber::{ogw_chamber, ogw_moment_fiber, BasicDisc, ChamberLabel, DiscClassG, DiscShape};
pub use gfunc::{
    g_function_g, g_function_g_full, g_function_o, mirror_map_g, mirror_map_o, MirrorMap, OBasis, OData, Window,
};
pub use verify::{verify_open_mirror, verify_toric_factorization, Mismatch, OpenMirrorReport};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GwError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("index {0} out of range 0..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Toric(#[from] crate::toric::ToricError),
    #[error(transparent)]
    Series(#[from] crate::series::SeriesError),
    #[error(transparent)]
    Lattice(#[from] crate::lattice::LatticeError),
}

pub type Result<T> = std::result::Result<T, GwError>;

#[cfg(test)]
pub(crate) mod gfunc_test_support {
    /// Every vector of length `len` with entries in `-1..bound`.
    pub fn small_vectors(len: usize, bound: i64) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (-1..bound).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }
}
