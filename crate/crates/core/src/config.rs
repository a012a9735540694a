use serde::Serialize;
use thiserror::Error;

/// Environment variable overriding [`DEFAULT_MAX_ENUM`].
pub const MAX_ENUM_ENV: &str = "DUALITY_LAB_MAX_ENUM";

/// Default cap on materialised subset pairs (`2^16`).
pub const DEFAULT_MAX_ENUM: u64 = 1 << 16;

/// Bounds for every exhaustive enumeration in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnumConfig {
    pub max_enum: u64,
}

impl Default for EnumConfig {
    fn default() -> Self {
        Self {
            max_enum: DEFAULT_MAX_ENUM,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error(
    "enumeration of {required} items exceeds the bound of {bound} (set {MAX_ENUM_ENV} to raise it)"
)]
pub struct EnumerationTooLarge {
    pub required: u128,
    pub bound: u64,
}

impl EnumConfig {
    pub fn new(max_enum: u64) -> Self {
        Self { max_enum }
    }

    /// Reads [`MAX_ENUM_ENV`]; unset or unparsable values fall back to the default.
    pub fn from_env() -> Self {
        std::env::var(MAX_ENUM_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Self::new)
            .unwrap_or_default()
    }

    /// Checks that `2^src_bits * 2^dst_bits` items fit the bound.
    pub fn check_pairs(&self, src_bits: usize, dst_bits: usize) -> Result<(), EnumerationTooLarge> {
        self.check_count(pow2(src_bits).saturating_mul(pow2(dst_bits)))
    }

    pub fn check_count(&self, required: u128) -> Result<(), EnumerationTooLarge> {
        if required > u128::from(self.max_enum) {
            Err(EnumerationTooLarge {
                required,
                bound: self.max_enum,
            })
        } else {
            Ok(())
        }
    }
}

pub(crate) fn pow2(bits: usize) -> u128 {
    if bits >= 127 {
        u128::MAX
    } else {
        1u128 << bits
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_is_inclusive() {
        let cfg = EnumConfig::default();
        assert!(cfg.check_pairs(8, 8).is_ok());
        let err = cfg.check_pairs(8, 9).unwrap_err();
        assert_eq!(err.required, 1 << 17);
    }
}
