//! Finite elements for the squared Dirac operator with a broken-line interaction: meshing,
//! assembly of the constrained pencil, a sparse shift-invert eigensolver and bound-state
//! counting.

pub mod assemble;
pub mod count;
pub mod eigen;
pub mod mesh;
pub mod mm;
pub mod sparse;

pub use assemble::{assemble, assemble_with, DofMap, HermitianPencil, VertexDof};
pub use count::{count_bound_states, CountOptions, MeshInfo, SpectralReport};
pub use eigen::{solve_lowest, Eigenpairs, SolverOptions};
pub use mesh::{build_mesh, refine, BoundaryCondition, Layout, Mesh, MeshOptions, Ray};

#[derive(Debug, thiserror::Error)]
pub enum FemError {
    #[error("invalid option {name} = {value}: {reason}")]
    InvalidOption {
        name: &'static str,
        value: f64,
        reason: String,
    },
    #[error("mesh spacing h = {h} is too coarse for this wedge; use h <= {required_h}")]
    DegenerateGeometry { h: f64, required_h: f64 },
    #[error("factorization broke down at row {row} (pivot {pivot:e})")]
    FactorizationBreakdown { row: usize, pivot: f64 },
    #[error("eigensolver did not converge after {iterations} iterations (residuals {residuals:?})")]
    NonConvergence { iterations: usize, residuals: Vec<f64> },
    #[error("matrix market line {line}: {reason}")]
    MatrixMarket { line: usize, reason: String },
    #[error(transparent)]
    Core(#[from] dshell_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FemError>;
