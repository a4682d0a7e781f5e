//! Process exit codes.

use elastonet::Error;

pub const OK: u8 = 0;
/// A check or round trip ran and did not pass.
pub const FAILED: u8 = 1;
/// Unreadable input, bad arguments or invalid parameters.
pub const USAGE: u8 = 2;
pub const ALL_RESONANT: u8 = 3;
pub const FLOPPY_MODE: u8 = 4;
pub const NOT_CHARACTERIZABLE: u8 = 5;
pub const PLACEMENT_FAILED: u8 = 6;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(USAGE, message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(FAILED, message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Asymmetric { .. }
            | Error::NotSquare { .. }
            | Error::InvalidPartition(_)
            | Error::DegenerateSpring { .. }
            | Error::InvalidNetwork(_)
            | Error::GenerationFailed(_)
            | Error::DimensionMismatch(_)
            | Error::InvalidCanonical(_) => USAGE,
            Error::AtResonance { .. } | Error::SingularBlock { .. } => ALL_RESONANT,
            Error::FloppyModeInconsistent { .. } => FLOPPY_MODE,
            Error::NotCharacterizable(_) | Error::RayleighStructureBroken { .. } => NOT_CHARACTERIZABLE,
            Error::PlacementFailed(_) | Error::ZeroForce => PLACEMENT_FAILED,
            Error::ReconstructionMismatch { .. } => FAILED,
        };
        Self::new(code, e.to_string())
    }
}
