use thiserror::Error;

/// Failures raised by the geometric, localization and game layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero-length heading")]
    ZeroLengthHeading,
    #[error("attacker destination reached")]
    AttackerDestinationReached,
    #[error("UAV within arrival radius")]
    WithinArrivalRadius,
    #[error("degenerate spoofed heading")]
    DegenerateSpoofedHeading,
    #[error("degenerate anchor geometry")]
    DegenerateAnchors,
    #[error("consensus failure")]
    ConsensusFailure,
    #[error("attacker action out of set: UAV {0}")]
    AttackOutOfSet(usize),
    #[error("UAV index {index} out of range for a fleet of {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
