use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("root-of-unity order must be at least 2, got {0}")]
    InvalidOrder(u32),

    #[error("{what}: argument lies on a branch cut (distance {distance:.3e})")]
    OnCut { what: &'static str, distance: f64 },

    #[error("argument must be nonzero")]
    ZeroArgument,

    #[error("denominator vanishes: parameter {index} at order {order}")]
    PoleInDenominator { index: usize, order: usize },

    #[error("alpha parameter {index} has alpha^N = 1")]
    DegenerateAlpha { index: usize },

    #[error("point lies on a region boundary: {0}")]
    OnBoundary(&'static str),

    #[error(
        "no power of omega reconciles closed form and direct sum (best residual {residual:.3e})"
    )]
    NoConsistentPhase { residual: f64 },

    #[error("parameter {0} must be nonzero")]
    ZeroParameter(&'static str),

    #[error(
        "parameter lists must be nonempty and of equal length (alphas {alphas}, betas {betas})"
    )]
    ShapeMismatch { alphas: usize, betas: usize },

    #[error("branch value does not satisfy delta^N = 1 - value^N (residual {0:.3e})")]
    InvalidBranch(f64),

    #[error("gamma is not omega^k * Delta(beta)/Delta(alpha) for any k (residual {0:.3e})")]
    GammaNotOnBranch(f64),

    #[error("rapidity branch point: {0}")]
    BranchPoint(&'static str),

    #[error("no root-of-unity combination gives x*y = t (best residual {0:.3e})")]
    InconsistentRoots(f64),

    #[error("moduli do not satisfy k^2 + k'^2 = 1 (residual {0:.3e})")]
    InvalidModuli(f64),

    #[error("product-form parameters fail to reproduce the weights (residual {0:.3e})")]
    DerivationMismatch(f64),

    #[error("triangle side of the star-triangle relation vanishes")]
    ZeroDenominator,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("point is not on the Fermat curve (residual {0:.3e})")]
    OffCurve(f64),

    #[error("sector constraint violated: {0}")]
    SectorViolation(&'static str),

    #[error("argument on a sector boundary: {0}")]
    SectorBoundary(&'static str),
}
