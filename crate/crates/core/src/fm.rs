//! FM-exponents: the exponents `d` for which the monomial family `x^d` has
//! finite monodromy, classified by the shape of the prime-to-`p` part of `d`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::level::{check_grid, grid_cap, Level};
use crate::qz::{Prime, QzClass, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FmFamily {
    /// `p^a + 1`, `a >= 0` (`a > 0` for `p = 2`).
    PowerPlusOne,
    /// `(p^a + 1)/2`, `p > 2`, `a > 0`.
    HalfPowerPlusOne,
    /// `(p^(ab) + 1)/(p^a + 1)`, `a, b > 0`, `b` odd.
    CyclotomicQuotient,
    /// `p = 5` and prime-to-`p` part `7`.
    Sporadic7mod5,
    NotFM,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FmParameters {
    pub a: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FmExponentVerdict {
    pub d: u64,
    pub p: Prime,
    pub is_fm: bool,
    pub family: FmFamily,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameters: Option<FmParameters>,
}

/// `n` with every factor of `p` removed.
pub fn prime_to_p_part(p: Prime, mut n: u64) -> u64 {
    debug_assert!(n >= 1);
    if n == 0 {
        return 0;
    }
    while n.is_multiple_of(p.get()) {
        n /= p.get();
    }
    n
}

/// `p`-adic valuation of `n >= 1`.
pub fn p_valuation(p: Prime, mut n: u64) -> u32 {
    let mut k = 0;
    while n > 0 && n.is_multiple_of(p.get()) {
        n /= p.get();
        k += 1;
    }
    k
}

pub fn classify_fm_exponent(p: Prime, d: u64) -> FmExponentVerdict {
    let core = prime_to_p_part(p, d.max(1));
    let (family, parameters) = match_family(p, core);
    FmExponentVerdict {
        d,
        p,
        is_fm: family != FmFamily::NotFM,
        family,
        parameters,
    }
}

pub fn is_fm_exponent(p: Prime, d: u64) -> bool {
    classify_fm_exponent(p, d).is_fm
}

fn match_family(p: Prime, core: u64) -> (FmFamily, Option<FmParameters>) {
    let pp = p.get() as u128;
    let target = core as u128;
    let one = |a| Some(FmParameters { a, b: None });

    let mut a = if p.get() == 2 { 1 } else { 0 };
    let mut pa = pp.pow(a);
    while pa < target {
        if pa + 1 == target {
            return (FmFamily::PowerPlusOne, one(a));
        }
        a += 1;
        pa *= pp;
    }

    if p.get() > 2 {
        let mut a = 1;
        let mut pa = pp;
        while pa.div_ceil(2) <= target {
            if pa.div_ceil(2) == target {
                return (FmFamily::HalfPowerPlusOne, one(a));
            }
            a += 1;
            pa *= pp;
        }
    }

    if target == 1 {
        return (
            FmFamily::CyclotomicQuotient,
            Some(FmParameters { a: 1, b: Some(1) }),
        );
    }
    let mut a = 1u32;
    let mut pa = pp;
    while pa <= target {
        let mut b = 1u32;
        while let Some(pab) = pp.checked_pow(a * b) {
            let quotient = (pab + 1) / (pa + 1);
            if quotient > target {
                break;
            }
            if quotient == target && (pab + 1) % (pa + 1) == 0 {
                return (
                    FmFamily::CyclotomicQuotient,
                    Some(FmParameters { a, b: Some(b) }),
                );
            }
            b += 2;
        }
        a += 1;
        pa *= pp;
    }

    if p.get() == 5 && core == 7 {
        return (FmFamily::Sporadic7mod5, None);
    }
    (FmFamily::NotFM, None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MonomialVerdict {
    Violation {
        x: QzClass,
        r: u32,
        #[serde(with = "crate::serde_ratio")]
        value: Rational,
    },
    NoViolationUpToMaxR {
        max_r: u32,
    },
}

impl MonomialVerdict {
    pub fn is_violation(&self) -> bool {
        matches!(self, MonomialVerdict::Violation { .. })
    }
}

/// Searches the nonzero classes with denominator dividing `p^r - 1`,
/// `r <= max_r`, for `V(x) + V(-d x) < 1/2`, returning the first one found
/// (smallest `r`, then smallest numerator over `p^r - 1`).
pub fn numeric_monomial_check(p: Prime, d: u64, max_r: u32) -> Result<MonomialVerdict> {
    if max_r == 0 {
        return Err(Error::InvalidArgument("max_r must be at least 1".into()));
    }
    let cap = grid_cap();
    check_grid(p, max_r, false, cap)?;
    for r in 1..=max_r {
        let level = Level::new(p, r);
        let dm = (d as u128 % level.n as u128) as usize;
        for i in 1..level.n {
            if !level.is_new(i) {
                continue;
            }
            let k = (level.n - (dm * i) % level.n) % level.n;
            let total = level.digits[i] as u32 + level.digits[k] as u32;
            if 2 * total < level.scale {
                return Ok(MonomialVerdict::Violation {
                    x: level.class(i),
                    r,
                    value: level.value(total),
                });
            }
        }
    }
    Ok(MonomialVerdict::NoViolationUpToMaxR { max_r })
}
