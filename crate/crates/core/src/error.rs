use core::fmt;

use crate::Particle;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A numeric argument is out of its domain (non-finite, nonpositive mass, zero vector...).
    InvalidArgument(&'static str),
    /// Event and slice geometry does not match the two-observer configuration.
    InvalidScenario(&'static str),
    /// A measurement record names a particle whose kick is not before the slice.
    InconsistentRecord(Particle),
    /// A branch supplies outcomes that do not match which measurements precede the slice.
    InconsistentBranch(Particle),
    /// No support point carries the observed energy.
    ImpossibleOutcome,
    /// The request lies outside what the model specifies (post-kick trajectories).
    OutOfModel(&'static str),
    Internal(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::InvalidScenario(msg) => write!(f, "invalid scenario: {msg}"),
            Error::InconsistentRecord(p) => {
                write!(
                    f,
                    "inconsistent record: {p:?} particle is not kicked before the slice"
                )
            }
            Error::InconsistentBranch(p) => write!(
                f,
                "inconsistent branch: outcome for {p:?} subsystem does not match the slice"
            ),
            Error::ImpossibleOutcome => f.write_str("impossible outcome: no support point matches"),
            Error::OutOfModel(msg) => write!(f, "out of model: {msg}"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
