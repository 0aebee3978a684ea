//! Digit-sum tables for the classes with denominator dividing `p^r - 1`,
//! shared by every bounded search.

use crate::error::{Error, Result};
use crate::qz::{small_digit_sum, Prime, QzClass, Rational};

/// Environment variable overriding [`DEFAULT_GRID_CAP`].
pub const GRID_CAP_ENV: &str = "MONODROMY_MAX_GRID";

/// Largest number of grid points a single search level may visit.
pub const DEFAULT_GRID_CAP: u128 = 100_000_000;

/// The grid cap in force: [`GRID_CAP_ENV`] when set to a positive integer,
/// [`DEFAULT_GRID_CAP`] otherwise.
pub fn grid_cap() -> u128 {
    std::env::var(GRID_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u128>().ok())
        .filter(|&c| c > 0)
        .unwrap_or(DEFAULT_GRID_CAP)
}

/// `p^r - 1`, or `None` on overflow.
pub fn level_modulus(p: Prime, r: u32) -> Option<u128> {
    (p.get() as u128).checked_pow(r).map(|v| v - 1)
}

/// Largest `r` whose two-variable grid `(p^r - 1)^2` fits in `cap` (at least 1).
pub fn default_max_r(p: Prime, cap: u128) -> u32 {
    let mut r = 1;
    while let Some(n) = level_modulus(p, r + 1) {
        match n.checked_mul(n) {
            Some(g) if g <= cap => r += 1,
            _ => break,
        }
    }
    r
}

pub(crate) fn check_grid(p: Prime, r: u32, two_variable: bool, cap: u128) -> Result<()> {
    let n = level_modulus(p, r);
    let grid = n.and_then(|n| {
        if two_variable {
            n.checked_mul(n)
        } else {
            Some(n)
        }
    });
    match grid {
        Some(g) if g <= cap && n.unwrap() <= u32::MAX as u128 => Ok(()),
        _ => Err(Error::GridTooLarge {
            p: p.get(),
            r,
            grid: grid.unwrap_or(u128::MAX),
            cap,
        }),
    }
}

/// All classes `i/(p^r - 1)` at one level together with the divisibility
/// data needed to skip classes already visited at a lower level.
pub(crate) struct Level {
    pub n: usize,
    /// `digits[i]` is the base-`p` digit sum of `i`, for `0 <= i < n`.
    pub digits: Vec<u16>,
    /// `r (p - 1)`: `V(i/n) = digits[i] / scale`.
    pub scale: u32,
    /// For each maximal proper divisor `s` of `r`, the step `n / (p^s - 1)`.
    old_steps: Vec<usize>,
}

impl Level {
    pub fn new(p: Prime, r: u32) -> Level {
        let n = level_modulus(p, r).expect("level fits") as usize;
        let pp = p.get() as usize;
        let mut digits = vec![0u16; n.max(1)];
        for i in 1..n {
            digits[i] = digits[i / pp] + (i % pp) as u16;
        }
        debug_assert!(n < 2 || digits[n - 1] as u64 == small_digit_sum(n as u64 - 1, p.get()));
        let old_steps = maximal_proper_divisors(r)
            .into_iter()
            .map(|s| n / level_modulus(p, s).unwrap() as usize)
            .collect();
        Level {
            n,
            digits,
            scale: r * (p.get() as u32 - 1),
            old_steps,
        }
    }

    /// True when `i/n` does not already live at a lower level.
    #[inline]
    pub fn is_new(&self, i: usize) -> bool {
        self.old_steps.iter().all(|&m| !i.is_multiple_of(m))
    }

    /// Steps `m` with `m | i`; a pair `(i, j)` is old iff some of them divides `j`.
    #[inline]
    pub fn row_steps(&self, i: usize) -> Vec<usize> {
        self.old_steps
            .iter()
            .copied()
            .filter(|&m| i.is_multiple_of(m))
            .collect()
    }

    #[inline]
    pub fn class(&self, i: usize) -> QzClass {
        QzClass::from_parts_unchecked(i as u64, self.n as u64)
    }

    pub fn value(&self, digit_total: u32) -> Rational {
        Rational::new(digit_total as i64, self.scale as i64)
    }

    /// `k mod n` for an arbitrary integer coefficient.
    #[inline]
    pub fn reduce(&self, k: i128) -> usize {
        k.rem_euclid(self.n as i128) as usize
    }
}

fn maximal_proper_divisors(r: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut m = r;
    let mut q = 2;
    while q * q <= m {
        if m.is_multiple_of(q) {
            out.push(r / q);
            while m.is_multiple_of(q) {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        out.push(r / m);
    }
    out
}
