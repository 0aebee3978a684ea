//! The candidate list of FM pairs, the final list of Belyi pairs with finite
//! monodromy, the binomial cases, and a brute-force oracle for the quotient
//! lemma used to prove the candidate list complete.
//!
//! Each list item is data: a prime constraint plus either a sporadic list or
//! a formula in one parameter `a` or in `(a, b)` with `a` an odd multiple of
//! `b`. Items keep their position in the original numbering.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::criteria::ExponentPair;
use crate::error::{Error, Result};
use crate::fm::{is_fm_exponent, prime_to_p_part};
use crate::qz::Prime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Theorem {
    FmPairsCandidate,
    BelyiFinal,
    BinomialFinal,
}

impl Theorem {
    pub fn item_count(self) -> u32 {
        match self {
            Theorem::FmPairsCandidate => 37,
            Theorem::BelyiFinal => 14,
            Theorem::BinomialFinal => 9,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Theorem::FmPairsCandidate => "candidates",
            Theorem::BelyiFinal => "final",
            Theorem::BinomialFinal => "binomial",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "candidates" | "fmpairs" => Ok(Theorem::FmPairsCandidate),
            "final" | "belyi" => Ok(Theorem::BelyiFinal),
            "binomial" => Ok(Theorem::BinomialFinal),
            other => Err(Error::InvalidArgument(format!("unknown theorem {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeConstraint {
    Any,
    AtLeast3,
    Eq(u64),
}

impl PrimeConstraint {
    pub fn admits(self, p: Prime) -> bool {
        match self {
            PrimeConstraint::Any => true,
            PrimeConstraint::AtLeast3 => p.get() >= 3,
            PrimeConstraint::Eq(q) => p.get() == q,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FamilyId {
    pub theorem: Theorem,
    pub index: u32,
}

impl FamilyId {
    pub fn new(theorem: Theorem, index: u32) -> Result<Self> {
        if index == 0 || index > theorem.item_count() {
            return Err(Error::InvalidArgument(format!(
                "{theorem} has items 1..={}, got {index}",
                theorem.item_count()
            )));
        }
        Ok(FamilyId { theorem, index })
    }

    pub fn constraint(self) -> PrimeConstraint {
        match self.theorem {
            Theorem::FmPairsCandidate => CANDIDATES[self.index as usize - 1].constraint,
            Theorem::BelyiFinal => FINAL[self.index as usize - 1].constraint,
            Theorem::BinomialFinal => match self.index {
                6 => PrimeConstraint::AtLeast3,
                7 => PrimeConstraint::Eq(2),
                8 => PrimeConstraint::Eq(3),
                9 => PrimeConstraint::Eq(5),
                _ => PrimeConstraint::Any,
            },
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} #{}", self.theorem, self.index)
    }
}

pub type Params = BTreeMap<&'static str, u32>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyMember {
    pub family: FamilyId,
    pub pair: ExponentPair,
    /// First parameter values (in iteration order) producing the pair.
    pub params: Params,
}

type OneParam = fn(u128, u32) -> Option<(u128, u128)>;
type TwoParam = fn(u128, u32, u32) -> Option<(u128, u128)>;

enum Shape {
    Sporadic(&'static [(u64, u64)]),
    /// `a >= min`, restricted to odd `a` when `odd` is set.
    One {
        min: u32,
        odd: bool,
        f: OneParam,
    },
    /// `b >= 1` and `a` an odd multiple of `b`.
    Two(TwoParam),
}

struct Item {
    constraint: PrimeConstraint,
    shape: Shape,
}

const fn sporadic(q: u64, list: &'static [(u64, u64)]) -> Item {
    Item {
        constraint: PrimeConstraint::Eq(q),
        shape: Shape::Sporadic(list),
    }
}

const fn one(constraint: PrimeConstraint, min: u32, odd: bool, f: OneParam) -> Item {
    Item {
        constraint,
        shape: Shape::One { min, odd, f },
    }
}

const fn two(constraint: PrimeConstraint, f: TwoParam) -> Item {
    Item {
        constraint,
        shape: Shape::Two(f),
    }
}

fn pw(p: u128, k: u32) -> Option<u128> {
    p.checked_pow(k)
}

fn exact(n: u128, m: u128) -> Option<u128> {
    n.is_multiple_of(m).then(|| n / m)
}

/// `(p^a + 1)/(p^b + 1)`.
fn quot(p: u128, a: u32, b: u32) -> Option<u128> {
    exact(pw(p, a)? + 1, pw(p, b)? + 1)
}

/// `(p^a + 1)/k`.
fn over(p: u128, a: u32, k: u128) -> Option<u128> {
    exact(pw(p, a)? + 1, k)
}

const ANY: PrimeConstraint = PrimeConstraint::Any;
const ODD: PrimeConstraint = PrimeConstraint::AtLeast3;
const P2: PrimeConstraint = PrimeConstraint::Eq(2);
const P3: PrimeConstraint = PrimeConstraint::Eq(3);
const P5: PrimeConstraint = PrimeConstraint::Eq(5);

static CANDIDATES: [Item; 37] = [
    two(ANY, |p, a, b| {
        let q = quot(p, a, b)?;
        Some((q, pw(p, b)? * q))
    }),
    two(ANY, |p, a, b| {
        Some((quot(p, a + 2 * b, b)?, pw(p, b)? * quot(p, a, b)?))
    }),
    one(ODD, 0, false, |p, a| {
        let h = over(p, a, 2)?;
        Some((h, h))
    }),
    sporadic(
        2,
        &[
            (3, 10),
            (5, 6),
            (5, 8),
            (5, 17),
            (5, 52),
            (9, 2),
            (9, 4),
            (9, 11),
            (9, 13),
            (9, 17),
            (9, 34),
            (9, 43),
            (9, 48),
            (11, 2),
            (11, 13),
            (11, 57),
            (13, 44),
            (13, 228),
            (17, 26),
            (17, 40),
            (33, 10),
            (33, 24),
            (33, 172),
            (33, 208),
            (65, 176),
            (171, 34),
            (205, 36),
        ],
    ),
    one(P2, 1, false, |p, a| Some((pw(p, a)? + 1, pw(p, a)? + 1))),
    two(P2, |p, a, b| {
        let q = quot(p, a, b)?;
        Some((q, q))
    }),
    one(P2, 1, false, |p, a| Some((1, pw(p, a)? + 1))),
    one(P2, 1, false, |p, a| Some((pw(p, a)? + 1, pw(p, a)?))),
    one(P2, 1, false, |p, a| Some((3, pw(p, a)? + 1))),
    one(P2, 1, false, |p, a| Some((pw(p, a)? + 1, 3 * pw(p, a)?))),
    one(P2, 1, false, |p, a| {
        Some((pw(p, a)? + 1, quot(p, 3 * a, a)?))
    }),
    one(P2, 1, false, |p, a| {
        Some((quot(p, 3 * a, a)?, pw(p, a)? * (pw(p, a)? + 1)))
    }),
    one(P2, 1, true, |p, a| Some((pw(p, a)? + 1, over(p, a, 3)?))),
    one(P2, 1, true, |p, a| Some((1, over(p, a, 3)?))),
    one(P2, 1, true, |p, a| Some((over(p, a, 3)?, pw(p, a)?))),
    one(P2, 1, true, |p, a| Some((3, over(p, 2 * a, 5)?))),
    one(P2, 1, true, |p, a| {
        Some((over(p, 2 * a, 5)?, 3 * pw(p, 2 * a)?))
    }),
    one(P2, 1, true, |p, a| Some((5, over(p, a, 3)?))),
    one(P2, 1, true, |p, a| Some((over(p, a, 3)?, 5 * pw(p, a)?))),
    one(P2, 1, true, |p, a| {
        Some((over(p, 3 * a, 9)?, over(p, 3 * a, 3)?))
    }),
    one(P2, 1, true, |p, a| {
        let n = over(p, 3 * a, 9)?;
        Some((n, 2 * n))
    }),
    sporadic(
        3,
        &[
            (2, 5),
            (4, 3),
            (4, 10),
            (5, 7),
            (10, 63),
            (28, 45),
            (61, 12),
        ],
    ),
    one(P3, 0, false, |p, a| Some((2, pw(p, a)? + 1))),
    one(P3, 0, false, |p, a| Some((pw(p, a)? + 1, 2 * pw(p, a)?))),
    one(P3, 0, false, |p, a| Some((pw(p, a)? + 1, over(p, a, 2)?))),
    one(P3, 0, false, |p, a| Some((1, over(p, a, 2)?))),
    one(P3, 0, false, |p, a| Some((over(p, a, 2)?, pw(p, a)?))),
    one(P3, 0, false, |p, a| Some((4, over(p, a, 2)?))),
    one(P3, 0, false, |p, a| Some((over(p, a, 2)?, 4 * pw(p, a)?))),
    one(P3, 1, true, |p, a| Some((over(p, a, 2)?, over(p, a, 4)?))),
    one(P3, 1, true, |p, a| {
        let n = over(p, a, 4)?;
        Some((n, n))
    }),
    one(P3, 1, true, |p, a| Some((2, over(p, a, 4)?))),
    one(P3, 1, true, |p, a| Some((over(p, a, 4)?, 2 * pw(p, a)?))),
    sporadic(5, &[(1, 6), (2, 5), (3, 7), (6, 7), (6, 15)]),
    one(P5, 0, false, |p, a| Some((2, over(p, a, 2)?))),
    one(P5, 0, false, |p, a| Some((over(p, a, 2)?, 2 * pw(p, a)?))),
    sporadic(7, &[(2, 2)]),
];

static FINAL: [Item; 14] = [
    one(ANY, 0, false, |p, a| Some((1, pw(p, a)?))),
    sporadic(2, &[(1, 12)]),
    one(P2, 1, false, |p, a| Some((pw(p, a)? + 1, pw(p, a)? + 1))),
    two(P2, |p, a, b| {
        let q = quot(p, a, b)?;
        Some((q, q))
    }),
    one(P2, 1, false, |p, a| Some((1, pw(p, a)? + 1))),
    one(P2, 1, false, |p, a| Some((pw(p, a)? + 1, pw(p, a)?))),
    one(P2, 1, true, |p, a| Some((pw(p, a)? + 1, over(p, a, 3)?))),
    one(P2, 1, true, |p, a| Some((1, over(p, a, 3)?))),
    one(P2, 1, true, |p, a| Some((over(p, a, 3)?, pw(p, a)?))),
    sporadic(3, &[(1, 4), (1, 6), (2, 2), (4, 3)]),
    one(P3, 0, false, |p, a| Some((pw(p, a)? + 1, over(p, a, 2)?))),
    one(P3, 0, false, |p, a| Some((1, over(p, a, 2)?))),
    one(P3, 0, false, |p, a| Some((over(p, a, 2)?, pw(p, a)?))),
    sporadic(5, &[(2, 1)]),
];

fn items(theorem: Theorem) -> &'static [Item] {
    match theorem {
        Theorem::FmPairsCandidate => &CANDIDATES,
        Theorem::BelyiFinal => &FINAL,
        Theorem::BinomialFinal => &[],
    }
}

pub fn families(theorem: Theorem) -> Vec<FamilyId> {
    (1..=theorem.item_count())
        .map(|index| FamilyId { theorem, index })
        .collect()
}

/// Every family of `theorem` whose prime constraint admits `p`.
pub fn families_for(theorem: Theorem, p: Prime) -> Vec<FamilyId> {
    families(theorem)
        .into_iter()
        .filter(|f| f.constraint().admits(p))
        .collect()
}

fn check_family(f: FamilyId, p: Prime) -> Result<()> {
    if f.index == 0 || f.index > f.theorem.item_count() {
        return Err(Error::InvalidArgument(format!("no item {f}")));
    }
    if !f.constraint().admits(p) {
        return Err(Error::FamilyMismatch {
            family: f.to_string(),
            p: p.get(),
        });
    }
    Ok(())
}

/// Members of a family with `max(A, B) <= bound`, sorted by `(A, B)`, each
/// with the first parameters producing it.
pub fn enumerate_members(f: FamilyId, p: Prime, bound: u64) -> Result<Vec<FamilyMember>> {
    check_family(f, p)?;
    if bound == 0 {
        return Err(Error::InvalidArgument("bound must be positive".into()));
    }
    if f.theorem == Theorem::BinomialFinal {
        return Ok(binomial_members(f.index, p, bound));
    }
    let pp = p.get() as u128;
    // Every component of every formula is at least p^a / 9 (resp. p^(a-b)),
    // so past this cap no member can stay below the bound.
    let cap = 16 * pp * (bound as u128 + 1);
    let mut found: BTreeMap<(u64, u64), Params> = BTreeMap::new();
    let mut keep = |pair: Option<(u128, u128)>, params: Params| {
        if let Some((a, b)) = pair {
            if a >= 1 && b >= 1 && a.max(b) <= bound as u128 {
                found.entry((a as u64, b as u64)).or_insert(params);
            }
        }
    };
    match items(f.theorem)[f.index as usize - 1].shape {
        Shape::Sporadic(list) => {
            for &pair in list {
                keep(Some((pair.0 as u128, pair.1 as u128)), Params::new());
            }
        }
        Shape::One { min, odd, f: g } => {
            let mut a = min;
            while pw(pp, a).is_some_and(|v| v <= cap) {
                if !odd || a % 2 == 1 {
                    keep(g(pp, a), Params::from([("a", a)]));
                }
                a += 1;
            }
        }
        Shape::Two(g) => {
            let mut b = 1;
            while pw(pp, b).is_some_and(|v| v <= cap) {
                let mut a = b;
                while pw(pp, a - b).is_some_and(|v| v <= cap) {
                    keep(g(pp, a, b), Params::from([("a", a), ("b", b)]));
                    a += 2 * b;
                }
                b += 1;
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|((a, b), params)| FamilyMember {
            family: f,
            pair: ExponentPair { d: a, e: b },
            params,
        })
        .collect())
}

pub fn enumerate_family(f: FamilyId, p: Prime, bound: u64) -> Result<Vec<ExponentPair>> {
    Ok(enumerate_members(f, p, bound)?
        .into_iter()
        .map(|m| m.pair)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub family: FamilyId,
    pub params: Params,
    /// The family contains `(B, A)` rather than `(A, B)`.
    pub reversed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairClassification {
    pub pair: ExponentPair,
    pub p: Prime,
    /// The pair after dividing out the largest power of `p` common to both
    /// exponents; membership is tested on this pair.
    pub reduced: ExponentPair,
    pub memberships: Vec<Membership>,
}

impl PairClassification {
    pub fn is_member(&self) -> bool {
        !self.memberships.is_empty()
    }
}

fn strip_common_p(p: Prime, mut pair: ExponentPair) -> ExponentPair {
    while pair.d.is_multiple_of(p.get()) && pair.e.is_multiple_of(p.get()) {
        pair.d /= p.get();
        pair.e /= p.get();
    }
    pair
}

/// Memberships of `pair` (or its reverse) in the items of `theorem` that
/// apply at `p`. Overlapping items are all reported.
pub fn classify_pair(p: Prime, pair: ExponentPair, theorem: Theorem) -> Result<PairClassification> {
    if theorem == Theorem::BinomialFinal {
        return classify_binomial(p, pair);
    }
    let reduced = strip_common_p(p, pair);
    let bound = reduced.max();
    let mut memberships = Vec::new();
    for f in families_for(theorem, p) {
        let members = enumerate_members(f, p, bound)?;
        for m in &members {
            if m.pair == reduced {
                memberships.push(Membership {
                    family: f,
                    params: m.params.clone(),
                    reversed: false,
                });
            }
        }
        if reduced.d != reduced.e {
            for m in &members {
                if m.pair == reduced.reversed() {
                    memberships.push(Membership {
                        family: f,
                        params: m.params.clone(),
                        reversed: true,
                    });
                }
            }
        }
    }
    Ok(PairClassification {
        pair,
        p,
        reduced,
        memberships,
    })
}

fn power_plus_one(p: u128, n: u128, allow_zero: bool) -> Option<u32> {
    let mut a = if allow_zero { 0 } else { 1 };
    while let Some(v) = pw(p, a) {
        if v + 1 > n {
            break;
        }
        if v + 1 == n {
            return Some(a);
        }
        a += 1;
    }
    None
}

fn half_power_plus_one(p: u128, n: u128) -> Option<u32> {
    let mut a = 0;
    while let Some(v) = pw(p, a) {
        if v.div_ceil(2) > n {
            break;
        }
        if v.div_ceil(2) == n {
            return Some(a);
        }
        a += 1;
    }
    None
}

/// Odd `b > 1` with `(p^(ab) + 1)/(p^a + 1) = n`.
fn cyclotomic_exponent(p: u128, a: u32, n: u128) -> Option<u32> {
    let mut b = 3;
    loop {
        let q = quot(p, a * b, a)?;
        if q > n {
            return None;
        }
        if q == n {
            return Some(b);
        }
        b += 2;
    }
}

fn same_set(x: (u64, u64), y: (u64, u64)) -> bool {
    x == y || x == (y.1, y.0)
}

/// Memberships of `x^d + lambda x^e` among the binomial cases, matched on
/// prime-to-`p` parts. Case 1..9 parameters are reported where the case has
/// any.
pub fn binomial_cases(p: Prime, d: u64, e: u64) -> Vec<(u32, Params)> {
    let pp = p.get() as u128;
    let (dh, eh) = (prime_to_p_part(p, d), prime_to_p_part(p, e));
    let mut out = Vec::new();
    if dh == 1 && eh == 1 {
        out.push((1, Params::new()));
    }
    if dh == 1 && is_fm_exponent(p, e) {
        out.push((2, Params::new()));
    }
    if eh == 1 && is_fm_exponent(p, d) {
        out.push((3, Params::new()));
    }
    let allow_zero = p.get() != 2;
    if let (Some(a), Some(b)) = (
        power_plus_one(pp, dh as u128, allow_zero),
        power_plus_one(pp, eh as u128, allow_zero),
    ) {
        out.push((4, Params::from([("a", a), ("b", b)])));
    }
    let mut a = 1;
    while pw(pp, a).is_some_and(|v| v < dh.max(eh) as u128) {
        if let (Some(b), Some(c)) = (
            cyclotomic_exponent(pp, a, dh as u128),
            cyclotomic_exponent(pp, a, eh as u128),
        ) {
            out.push((5, Params::from([("a", a), ("b", b), ("c", c)])));
            break;
        }
        a += 1;
    }
    if p.get() > 2 {
        if let (Some(a), Some(b)) = (
            half_power_plus_one(pp, dh as u128),
            half_power_plus_one(pp, eh as u128),
        ) {
            out.push((6, Params::from([("a", a), ("b", b)])));
        }
    }
    let set = (dh, eh);
    let sporadic: &[(u32, &[(u64, u64)])] = &[
        (7, &[(13, 3)]),
        (8, &[(7, 4), (7, 2), (5, 4), (5, 2)]),
        (9, &[(3, 2), (7, 7)]),
    ];
    for &(case, sets) in sporadic {
        let family = FamilyId {
            theorem: Theorem::BinomialFinal,
            index: case,
        };
        if family.constraint().admits(p) && sets.iter().any(|&s| same_set(set, s)) {
            out.push((case, Params::new()));
        }
    }
    out
}

pub fn classify_binomial(p: Prime, pair: ExponentPair) -> Result<PairClassification> {
    let memberships = binomial_cases(p, pair.d, pair.e)
        .into_iter()
        .map(|(index, params)| Membership {
            family: FamilyId {
                theorem: Theorem::BinomialFinal,
                index,
            },
            params,
            reversed: false,
        })
        .collect();
    Ok(PairClassification {
        pair,
        p,
        reduced: pair,
        memberships,
    })
}

/// Pairs `d > e > 1` with `d <= bound` in binomial case `case`.
fn binomial_members(case: u32, p: Prime, bound: u64) -> Vec<FamilyMember> {
    let mut out = Vec::new();
    for d in 3..=bound {
        for e in 2..d {
            if let Some((_, params)) = binomial_cases(p, d, e)
                .into_iter()
                .find(|(c, _)| *c == case)
            {
                out.push(FamilyMember {
                    family: FamilyId {
                        theorem: Theorem::BinomialFinal,
                        index: case,
                    },
                    pair: ExponentPair { d, e },
                    params,
                });
            }
        }
    }
    out
}

/// All `(A, B)` with `A` prime to `p`, `max(A, B) <= bound` and `A`, `B`,
/// `A + B` all FM-exponents, sorted.
pub fn fm_pair_scan(p: Prime, bound: u64) -> Vec<ExponentPair> {
    let fm: Vec<bool> = (0..=2 * bound)
        .map(|n| n > 0 && is_fm_exponent(p, n))
        .collect();
    let mut out = Vec::new();
    for a in 1..=bound {
        if a % p.get() == 0 || !fm[a as usize] {
            continue;
        }
        for b in 1..=bound {
            if fm[b as usize] && fm[(a + b) as usize] {
                out.push(ExponentPair { d: a, e: b });
            }
        }
    }
    out
}

/// Union of every candidate item at `p` up to `bound`, with reversals, kept
/// to pairs whose first exponent is prime to `p`.
pub fn candidate_union(p: Prime, bound: u64) -> Result<BTreeSet<ExponentPair>> {
    let mut out = BTreeSet::new();
    for f in families_for(Theorem::FmPairsCandidate, p) {
        for pair in enumerate_family(f, p, bound)? {
            for q in [pair, pair.reversed()] {
                if q.d % p.get() != 0 {
                    out.insert(q);
                }
            }
        }
    }
    Ok(out)
}

/// One row of the exported catalog file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogRow {
    pub theorem: Theorem,
    pub item: u32,
    pub p: u64,
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "B")]
    pub b: u64,
    pub params: Params,
    pub reversed: bool,
}

/// Primes and bound used for the shipped catalog file.
pub const EXPORT_PRIMES: [u64; 4] = [2, 3, 5, 7];
pub const EXPORT_BOUND: u64 = 100;

/// Every member of every family at each prime, as JSON lines.
pub fn export_rows(primes: &[u64], bound: u64) -> Result<Vec<CatalogRow>> {
    let mut rows = Vec::new();
    for &q in primes {
        let p = Prime::new(q)?;
        for theorem in [
            Theorem::FmPairsCandidate,
            Theorem::BelyiFinal,
            Theorem::BinomialFinal,
        ] {
            for f in families_for(theorem, p) {
                for m in enumerate_members(f, p, bound)? {
                    rows.push(CatalogRow {
                        theorem,
                        item: f.index,
                        p: q,
                        a: m.pair.d,
                        b: m.pair.e,
                        params: m.params,
                        reversed: false,
                    });
                }
            }
        }
    }
    Ok(rows)
}

pub fn export_json_lines(primes: &[u64], bound: u64) -> Result<String> {
    let mut s = String::new();
    for row in export_rows(primes, bound)? {
        s.push_str(&serde_json::to_string(&row).expect("row serializes"));
        s.push('\n');
    }
    Ok(s)
}

/// The five shapes of the quotient lemma, with `+` or `-` in each numerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QuotientCase {
    /// `p^m (p^a+1)/(p^b+1) = p^n (p^c+1)/(p^d+1)`
    PlusPlus = 1,
    /// `p^m (p^a-1)/(p^b+1) = p^n (p^c-1)/(p^d+1)`
    MinusMinus = 2,
    /// `p^m (p^a+1)/(p^b+1) = p^n (p^c-1)/(p^d+1)`
    PlusMinus = 3,
    /// `p^m (p^a+1) = p^n (p^c+1)/(p^d+1)`
    PowerPlus = 4,
    /// `p^m (p^a+1) = p^n (p^c-1)/(p^d+1)`
    PowerMinus = 5,
}

impl QuotientCase {
    pub const ALL: [QuotientCase; 5] = [
        QuotientCase::PlusPlus,
        QuotientCase::MinusMinus,
        QuotientCase::PlusMinus,
        QuotientCase::PowerPlus,
        QuotientCase::PowerMinus,
    ];

    fn has_b(self) -> bool {
        matches!(
            self,
            QuotientCase::PlusPlus | QuotientCase::MinusMinus | QuotientCase::PlusMinus
        )
    }
}

/// A solution `(m, n, a, b, c, d)`; `b` is absent in the last two cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct QuotientSolution {
    pub m: u32,
    pub n: u32,
    pub a: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<u32>,
    pub c: u32,
    pub d: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientCaseReport {
    pub case: QuotientCase,
    pub p: Prime,
    pub max_exp: u32,
    pub solutions: Vec<QuotientSolution>,
}

/// `p^k * (p^x + sign) / (p^y + 1)` when it is a positive integer.
fn side(p: u128, k: u32, x: u32, plus: bool, y: Option<u32>) -> Option<u128> {
    let top = if plus {
        pw(p, x)? + 1
    } else {
        pw(p, x)?.checked_sub(1)?
    };
    let v = match y {
        Some(y) => exact(top, pw(p, y)? + 1)?,
        None => top,
    };
    (v > 0).then(|| v * pw(p, k).unwrap())
}

/// Every tuple with all exponents in `0..=max_exp` (and `a, b, c, d >= 1`
/// when `p = 2`) at which both sides of the case are equal positive integers.
pub fn quotient_lemma_oracle(p: Prime, max_exp: u32) -> Vec<QuotientCaseReport> {
    let pp = p.get() as u128;
    let lo = if p.get() == 2 { 1 } else { 0 };
    QuotientCase::ALL
        .iter()
        .map(|&case| {
            let (lp, rp) = match case {
                QuotientCase::PlusPlus | QuotientCase::PowerPlus => (true, true),
                QuotientCase::MinusMinus => (false, false),
                QuotientCase::PlusMinus | QuotientCase::PowerMinus => (true, false),
            };
            let bs: Vec<Option<u32>> = if case.has_b() {
                (lo..=max_exp).map(Some).collect()
            } else {
                vec![None]
            };
            let mut solutions = Vec::new();
            for m in 0..=max_exp {
                for a in lo..=max_exp {
                    for &b in &bs {
                        let Some(left) = side(pp, m, a, lp, b) else {
                            continue;
                        };
                        for n in 0..=max_exp {
                            for c in lo..=max_exp {
                                for d in lo..=max_exp {
                                    if side(pp, n, c, rp, Some(d)) == Some(left) {
                                        solutions.push(QuotientSolution { m, n, a, b, c, d });
                                    }
                                }
                            }
                        }
                    }
                }
            }
            solutions.sort();
            QuotientCaseReport {
                case,
                p,
                max_exp,
                solutions,
            }
        })
        .collect()
}

/// How the lemma's conclusion treats a tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stated {
    /// Named explicitly, so it must be a solution.
    Required,
    /// Allowed by the conclusion, but only a solution when the hypothesis
    /// (integrality) holds.
    Allowed,
    Excluded,
}

/// The lemma's conclusion for one tuple.
pub fn quotient_lemma_statement(case: QuotientCase, p: Prime, s: &QuotientSolution) -> Stated {
    if s.m != s.n {
        return Stated::Excluded;
    }
    let q = p.get();
    let (a, c, d) = (s.a, s.c, s.d);
    let required = match case {
        QuotientCase::PlusPlus => {
            let b = s.b.unwrap();
            if a == b && c == d {
                true
            } else if a == c && b == d {
                return Stated::Allowed;
            } else {
                false
            }
        }
        QuotientCase::MinusMinus => {
            let b = s.b.unwrap();
            if a == c && b == d {
                return Stated::Allowed;
            }
            false
        }
        QuotientCase::PlusMinus => {
            let b = s.b.unwrap();
            (q == 2 && ((a == b && c == 2 && d == 1) || (a, b, c, d) == (3, 1, 4, 2)))
                || (q == 3 && ((a == b && c == 1 && d == 0) || (a, b, c, d) == (1, 0, 2, 1)))
        }
        QuotientCase::PowerPlus => {
            (q == 3 && (a, c, d) == (0, 1, 0)) || (q == 2 && (a, c, d) == (1, 3, 1))
        }
        QuotientCase::PowerMinus => {
            (q == 5 && (a, c, d) == (0, 1, 0))
                || (q == 3 && matches!((a, c, d), (0, 2, 1) | (1, 2, 0)))
                || (q == 2 && matches!((a, c, d), (1, 4, 2) | (2, 4, 1)))
        }
    };
    if required {
        Stated::Required
    } else {
        Stated::Excluded
    }
}

/// Solutions the statement excludes, and required tuples in the box that are
/// not solutions.
pub fn quotient_lemma_discrepancies(
    report: &QuotientCaseReport,
) -> (Vec<QuotientSolution>, Vec<QuotientSolution>) {
    let found: BTreeSet<_> = report.solutions.iter().copied().collect();
    let extras = report
        .solutions
        .iter()
        .copied()
        .filter(|s| quotient_lemma_statement(report.case, report.p, s) == Stated::Excluded)
        .collect();
    let lo = if report.p.get() == 2 { 1 } else { 0 };
    let hi = report.max_exp;
    let bs: Vec<Option<u32>> = if report.case.has_b() {
        (lo..=hi).map(Some).collect()
    } else {
        vec![None]
    };
    let mut missing = Vec::new();
    for m in 0..=hi {
        for a in lo..=hi {
            for &b in &bs {
                for c in lo..=hi {
                    for d in lo..=hi {
                        let s = QuotientSolution {
                            m,
                            n: m,
                            a,
                            b,
                            c,
                            d,
                        };
                        if quotient_lemma_statement(report.case, report.p, &s) == Stated::Required
                            && !found.contains(&s)
                        {
                            missing.push(s);
                        }
                    }
                }
            }
        }
    }
    (extras, missing)
}
