use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("exp needs a series without constant term")]
    NonzeroConstant,
    #[error("weighted-degree cap must be finite for this operation")]
    UnboundedCap,
    #[error("operator weight ({needed}) exceeds the degree cap ({cap})")]
    CapTooSmall { needed: i64, cap: i64 },
    #[error("z-exponent {exponent} falls outside the window [{lo}, {hi}]")]
    WindowOverflow { exponent: i32, lo: i32, hi: i32 },
    #[error("time index {0} must be odd and nonzero")]
    EvenIndex(i32),
    #[error("variable {0} has no value")]
    UnboundVariable(String),
    #[error("odd power of sqrt(2) in an exposed value (exponent {0})")]
    HalfIntegerPower(i32),
    #[error("matrix has order {order}; expected {expected}")]
    Order {
        order: usize,
        expected: &'static str,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("parts {0} are not a strict partition")]
    NotStrict(String),
    #[error("q-table covers k <= {max}, but k = {k} was requested")]
    TableTooShort { k: i64, max: i64 },
    #[error("odd number of fermion modes ({0})")]
    OddModeCount(usize),
    #[error("specialization is outside the convergence region: {0}")]
    Divergent(String),
    #[error("cutoff {cutoff} is below the largest requested part {max}")]
    CutoffTooSmall { cutoff: u32, max: u32 },
    #[error("requested tolerance {requested:e} is not reachable (best {achieved:e})")]
    Tolerance { requested: f64, achieved: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("identity check failed: {0}")]
    IdentityMismatch(String),
}
