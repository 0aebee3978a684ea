//! Exact-arithmetic criteria for finite monodromy of two-parameter families
//! of exponential sums `sum_x psi(s f(x) + t x)` over finite fields.
//!
//! The crate covers:
//!
//! * [`qz`]: classes in `(Q/Z)` prime to `p` and Kubert's V-function;
//! * [`fm`]: the FM-exponent classification and its one-variable check;
//! * [`criteria`]: the W functional, the Belyi-type and binomial criteria,
//!   and bounded violation searches;
//! * [`catalog`]: generators and classifiers for the candidate pair list,
//!   the final Belyi list and the binomial cases, plus the quotient oracle;
//! * [`charsums`]: literal character sums over small fields used as an
//!   independent check on the Gauss/Jacobi identities;
//! * [`witnesses`]: the table of quoted W values.

pub mod catalog;
pub mod charsums;
pub mod criteria;
pub mod error;
pub mod fm;
pub mod level;
pub mod qz;
pub mod witnesses;

pub use error::{Error, Result};
pub use qz::{kubert_v, mult_order, Prime, QzClass, Rational};

/// Version string reported by the CLI.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Serializes a [`Rational`] as `"num/den"`.
pub mod serde_ratio {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::qz::Rational;

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&format_args!("{}/{}", v.numer(), v.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
    }

    pub fn parse(s: &str) -> Option<Rational> {
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim().parse().ok()?, d.trim().parse().ok()?),
            None => (s.trim().parse().ok()?, 1),
        };
        if d == 0 {
            return None;
        }
        Some(Rational::new(n, d))
    }
}
