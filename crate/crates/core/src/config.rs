//! Enumeration caps and execution mode.

use crate::error::{EmtError, Result};

/// Name of the environment variable overriding [`Caps`].
pub const CAPS_ENV: &str = "EMTKIT_CAPS";

/// Size limits for exponential enumerations.
///
/// Exceeding a cap is reported as [`EmtError::CapExceeded`], never as a
/// negative answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of points of a product carrier.
    pub product_points: usize,
    /// Maximum `|dst|^|src|` for morphism enumeration.
    pub enumeration: u128,
    /// Maximum number of points accepted by the chain-enumeration oracle.
    pub oracle_points: usize,
    /// Maximum number of open sets materialized as an explicit family.
    pub opens: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            product_points: 64,
            enumeration: 4096,
            oracle_points: 6,
            opens: 4096,
        }
    }
}

impl Caps {
    /// Applies overrides of the form `product=64,enum=4096,oracle=6,opens=4096`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| EmtError::parse(CAPS_ENV, format!("expected key=value, got {item:?}")))?;
            let n: u128 = value
                .trim()
                .parse()
                .map_err(|_| EmtError::parse(CAPS_ENV, format!("bad number in {item:?}")))?;
            let as_usize = || {
                usize::try_from(n).map_err(|_| EmtError::parse(CAPS_ENV, format!("{item:?} too large")))
            };
            match key.trim() {
                "product" => self.product_points = as_usize()?,
                "enum" | "enumeration" => self.enumeration = n,
                "oracle" => self.oracle_points = as_usize()?,
                "opens" => self.opens = as_usize()?,
                other => {
                    return Err(EmtError::parse(CAPS_ENV, format!("unknown cap {other:?}")));
                }
            }
        }
        Ok(self)
    }

    /// Defaults overridden by `EMTKIT_CAPS` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(CAPS_ENV) {
            Ok(spec) => Caps::default().with_overrides(&spec),
            Err(_) => Ok(Caps::default()),
        }
    }

    pub(crate) fn check_enumeration(&self, what: &'static str, target: usize, source: usize) -> Result<()> {
        let needed = saturating_pow(target, source);
        if needed > self.enumeration {
            return Err(EmtError::CapExceeded {
                what,
                needed,
                cap: self.enumeration,
            });
        }
        Ok(())
    }

    pub(crate) fn check_product(&self, points: u128) -> Result<()> {
        if points > self.product_points as u128 {
            return Err(EmtError::CapExceeded {
                what: "product",
                needed: points,
                cap: self.product_points as u128,
            });
        }
        Ok(())
    }
}

/// `base^exp` saturating at `u128::MAX`; `0^0 = 1`.
pub fn saturating_pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
        if acc == 0 || acc == u128::MAX {
            break;
        }
    }
    acc
}

/// Whether data-parallel loops run on the rayon pool.
///
/// `Parallel` silently degrades to `Sequential` when the crate is built
/// without the `parallel` feature. Results are identical in both modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Caps plus execution mode, threaded through every enumerating operation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Config {
    pub caps: Caps,
    pub exec: Exec,
}

impl Config {
    pub fn sequential() -> Self {
        Config {
            caps: Caps::default(),
            exec: Exec::Sequential,
        }
    }

    pub fn with_caps(caps: Caps) -> Self {
        Config {
            caps,
            exec: Exec::default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let c = Caps::default().with_overrides("enum=100, oracle=4").unwrap();
        assert_eq!(c.enumeration, 100);
        assert_eq!(c.oracle_points, 4);
        assert_eq!(c.product_points, 64);
        assert!(Caps::default().with_overrides("bogus=1").is_err());
        assert!(Caps::default().with_overrides("enum").is_err());
        assert!(Caps::default().with_overrides("enum=-3").is_err());
    }

    #[test]
    fn pow() {
        assert_eq!(saturating_pow(3, 4), 81);
        assert_eq!(saturating_pow(0, 0), 1);
        assert_eq!(saturating_pow(0, 3), 0);
        assert_eq!(saturating_pow(1000, 100), u128::MAX);
    }
}
