use thiserror::Error;

/// Errors raised by the fractal calculus and the dynamics built on it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("refinement level {level} exceeds the configured cap {cap}")]
    ResourceLimit { level: u32, cap: u32 },

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("staircase plateau between nodes {index} and {next}: zero staircase increment", next = .index + 1)]
    Plateau { index: usize },

    #[error("bound {value} is not aligned with a grid node")]
    Alignment { value: f64 },

    #[error("point ({x}, {y}, {z}) is farther than {tol:e} from every curve node", x = .point[0], y = .point[1], z = .point[2])]
    NotOnCurve { point: [f64; 3], tol: f64 },

    #[error("dimension estimation failed: {reason} (slopes per level: {slopes:?})")]
    Estimation { reason: String, slopes: Vec<f64> },

    #[error("conjugacy map undefined: {0}")]
    Conjugacy(String),

    #[error("linear solve failed: {0}")]
    Solver(String),

    #[error("kernel under-resolved: width {width:e} spans fewer than {min_cells} cells of size {cell:e}")]
    Resolution { width: f64, cell: f64, min_cells: usize },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("mismatched grids: {0}")]
    Mismatch(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
