use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid needs at least 8 points and a power-of-two count, got {0}")]
    BadPointCount(usize),
    #[error("grid domain is empty or inverted: z_max must exceed z_min")]
    EmptyDomain,
    #[error("sample count {actual} does not match grid size {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("field contains non-finite samples")]
    NonFinite,
    #[error("waveguide parameters need omega0 > 0 and vg > 0")]
    BadWaveguide,
    #[error("soliton amplitude and width must be positive and finite")]
    BadSolitonParams,
    #[error("C*K = {ck} admits no bright soliton (need C*K > 0)")]
    NoBrightSoliton { ck: f64 },
    #[error("soliton constraint K*A^2 = C/xi^2 violated: relative residual {residual:e}")]
    ConstraintViolated { residual: f64 },
    #[error("photon number must be positive and finite, got {0}")]
    BadPhotonNumber(f64),
    #[error("reduction to a stationary soliton needs xi = x0 = phi = 0")]
    ZsNotReduced,
    #[error("invalid stepper configuration: {0}")]
    BadStepper(&'static str),
    #[error("non-finite field detected at step {step}; aborting evolution")]
    Blowup { step: usize },
    #[error("frame map to the unit-normalized equation needs C > 0 and K > 0")]
    BadLaxFrame,
    #[error("lattice too coarse: {0}")]
    LatticeTooCoarse(&'static str),
    #[error("need at least 3 time slices for time derivatives, got {0}")]
    NeedTimeSlices(usize),
    #[error("zeta-independence check needs at least two zeta values")]
    NeedTwoZetas,
    #[error("transport step error estimate {estimate:e} exceeds bound {bound:e}; refine the step size")]
    TransportAccuracy { estimate: f64, bound: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
