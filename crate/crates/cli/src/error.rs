use std::fmt;

use gpade_core::constants::ConstantsError;
use gpade_core::derivation::DerivationError;
use gpade_core::digits::DigitsError;
use gpade_core::dioph::DiophError;
use gpade_core::exact::ExactError;
use gpade_core::gfun::GfunError;
use gpade_core::pade::PadeError;
use gpade_core::quad::QuadError;

/// How a library error surfaces: bad input, a result that could not be
/// decided, an unmet hypothesis, or a broken certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Usage,
    Indeterminate,
    Hypothesis,
    Internal,
}

pub trait Classify {
    fn kind(&self) -> Kind;
}

impl Classify for ExactError {
    fn kind(&self) -> Kind {
        Kind::Usage
    }
}

impl Classify for GfunError {
    fn kind(&self) -> Kind {
        match self {
            GfunError::Invariant(_) => Kind::Internal,
            _ => Kind::Usage,
        }
    }
}

impl Classify for PadeError {
    fn kind(&self) -> Kind {
        match self {
            PadeError::InvalidParams(_) | PadeError::Infeasible(_) => Kind::Usage,
            PadeError::Gfun(e) => e.kind(),
            PadeError::Exact(e) => e.kind(),
            PadeError::EmptyKernel | PadeError::KernelInvalid(_) => Kind::Internal,
        }
    }
}

impl Classify for DerivationError {
    fn kind(&self) -> Kind {
        match self {
            DerivationError::Precondition(_) | DerivationError::RootOfD => Kind::Usage,
            DerivationError::Pade(e) => e.kind(),
            _ => Kind::Internal,
        }
    }
}

impl Classify for ConstantsError {
    fn kind(&self) -> Kind {
        match self {
            ConstantsError::Precondition(_) | ConstantsError::Divergent | ConstantsError::VerifiedRange { .. } => {
                Kind::Usage
            }
            ConstantsError::Hypothesis3 => Kind::Hypothesis,
            ConstantsError::Indeterminate(_) => Kind::Indeterminate,
            ConstantsError::Pade(e) => e.kind(),
            ConstantsError::Exact(e) => e.kind(),
        }
    }
}

impl Classify for DiophError {
    fn kind(&self) -> Kind {
        match self {
            DiophError::Precondition(_) | DiophError::Divergent => Kind::Usage,
            DiophError::HypothesisUnmet(_) => Kind::Hypothesis,
            DiophError::Indeterminate(_) => Kind::Indeterminate,
            DiophError::Internal(_) => Kind::Internal,
            DiophError::Gfun(e) => e.kind(),
            DiophError::Pade(e) => e.kind(),
            DiophError::Derivation(e) => e.kind(),
            DiophError::Constants(e) => e.kind(),
            DiophError::Exact(e) => e.kind(),
        }
    }
}

impl Classify for DigitsError {
    fn kind(&self) -> Kind {
        match self {
            DigitsError::Precondition(_) => Kind::Usage,
            DigitsError::Extend { .. } => Kind::Indeterminate,
            DigitsError::Internal(_) => Kind::Internal,
            DigitsError::Dioph(e) => e.kind(),
            DigitsError::Constants(e) => e.kind(),
        }
    }
}

impl Classify for QuadError {
    fn kind(&self) -> Kind {
        match self {
            QuadError::RationalRoot | QuadError::Precondition(_) => Kind::Usage,
            QuadError::Internal(_) => Kind::Internal,
            QuadError::Indeterminate(_) => Kind::Indeterminate,
            QuadError::Dioph(e) => e.kind(),
            QuadError::Constants(e) => e.kind(),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    /// Errors that abort a command; indeterminate and hypothesis outcomes
    /// are turned into report records by the caller instead.
    pub fn from_lib<E: Classify + fmt::Display>(e: E) -> Self {
        match e.kind() {
            Kind::Usage => CliError::Usage(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Internal(m) => write!(f, "internal certificate failure: {m}"),
        }
    }
}
