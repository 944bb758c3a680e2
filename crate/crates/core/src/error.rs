use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial order {order} exceeds the supported cap of {cap}")]
    OrderCap { order: u32, cap: u32 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("Fock truncation at n_max = {n_max} leaves tail weight {tail:.3e}; use n_max >= {suggested}")]
    Truncation {
        n_max: usize,
        tail: f64,
        suggested: usize,
    },

    /// The requested statistic is undefined because the mean photon number vanishes.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error(
        "phase-space domain too small (normalization defect {defect:.3e}); \
         suggested bounds q in [{q_min}, {q_max}], p in [{p_min}, {p_max}]"
    )]
    Domain {
        defect: f64,
        q_min: f64,
        q_max: f64,
        p_min: f64,
        p_max: f64,
    },

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("no interior extremum in [{lo}, {hi}]")]
    NoInteriorExtremum { lo: f64, hi: f64 },

    #[error("no sign change of the Wigner minimum on kt in [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::OrderCap { .. } | Error::InvalidParameter { .. } | Error::Degenerate(_)
        )
    }
}
