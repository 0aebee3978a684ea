//! Literal character sums over small finite fields.
//!
//! Elements of `F_q`, `q = p^r`, are encoded as integers `sum c_i p^i` where
//! `c_i` are the coordinates in the power basis of the modulus. Sums are
//! accumulated as exact integer histograms over roots of unity and only
//! converted to floating point at the end.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::criteria::ExponentPair;
use crate::error::{Error, Result};
use crate::qz::Prime;

/// Largest field accepted by [`FieldPresentation::new`].
pub const FIELD_LIMIT: u64 = 1 << 20;

/// Largest field accepted by the Mellin sums, which cost `O(q^3)`.
pub const MELLIN_LIMIT: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The character `eps^a`, `eps` sending the generator to `exp(2 pi i/(q-1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CharacterIndex(pub u32);

impl CharacterIndex {
    pub const TRIVIAL: CharacterIndex = CharacterIndex(0);

    pub fn is_trivial(self) -> bool {
        self.0 == 0
    }
}

/// A concrete model of `F_{p^r}` with log, antilog and trace tables.
#[derive(Debug, Clone)]
pub struct FieldPresentation {
    p: Prime,
    r: u32,
    q: u32,
    /// Monic, low to high, length `r + 1`.
    modulus: Vec<u32>,
    generator: FieldElement,
    /// `exp[k] = g^k` for `0 <= k < q - 1`.
    exp: Vec<u32>,
    /// `log[g^k] = k`; `log[0]` is unused.
    log: Vec<u32>,
    trace: Vec<u32>,
    pow_p: Vec<u32>,
}

impl Serialize for FieldPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Export<'a> {
            p: u64,
            r: u32,
            q: u32,
            modulus: &'a [u32],
            generator: Vec<u32>,
        }
        Export {
            p: self.p.get(),
            r: self.r,
            q: self.q,
            modulus: &self.modulus,
            generator: self.coeffs(self.generator),
        }
        .serialize(s)
    }
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let r = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * r];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for k in (r..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for i in 0..=r {
            let sub = c * modulus[i] as u64 % p as u64;
            prod[k - r + i] = (prod[k - r + i] + p as u64 - sub) % p as u64;
        }
    }
    prod.truncate(r);
    prod.into_iter().map(|c| c as u32).collect()
}

/// True when the monic `f` has no monic factor of degree `1..=deg/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    for k in 1..=n / 2 {
        let count = (p as u64).pow(k as u32);
        for code in 0..count {
            let mut g = digits(code, p, k);
            g.push(1);
            if poly_rem_is_zero(f, &g, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(f: &[u32], g: &[u32], p: u32) -> bool {
    let mut rem: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    let p = p as u64;
    for k in (dg..rem.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        for i in 0..=dg {
            rem[k - dg + i] = (rem[k - dg + i] + p - c * g[i] as u64 % p) % p;
        }
    }
    rem[..dg].iter().all(|&c| c == 0)
}

fn digits(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (code % p as u64) as u32;
            code /= p as u64;
            d
        })
        .collect()
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldPresentation {
    /// Builds `F_{p^r}` with the smallest monic irreducible modulus and the
    /// smallest generator, both ordered by integer code.
    pub fn new(p: Prime, r: u32) -> Result<Self> {
        let too_big = || Error::FieldTooLarge {
            p: p.get(),
            r,
            limit: FIELD_LIMIT,
        };
        if r == 0 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        let q = p
            .get()
            .checked_pow(r)
            .filter(|&q| q <= FIELD_LIMIT)
            .ok_or_else(too_big)?;
        let pp = p.get() as u32;
        let ru = r as usize;
        let modulus = (0..q)
            .map(|code| {
                let mut f = digits(code, pp, ru);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, pp))
            .expect("an irreducible polynomial of every degree exists");

        let code_of = |c: &[u32]| c.iter().rev().fold(0u32, |acc, &d| acc * pp + d);
        let mul = |a: u32, b: u32| {
            code_of(&poly_mulmod(
                &digits(a as u64, pp, ru),
                &digits(b as u64, pp, ru),
                &modulus,
                pp,
            ))
        };
        let power = |mut base: u32, mut k: u64| {
            let mut acc = 1u32;
            while k > 0 {
                if k & 1 == 1 {
                    acc = mul(acc, base);
                }
                base = mul(base, base);
                k >>= 1;
            }
            acc
        };
        let order = q - 1;
        let factors = prime_factors(order);
        let generator = (1..q as u32)
            .find(|&g| factors.iter().all(|&l| power(g, order / l) != 1))
            .expect("the unit group is cyclic");

        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; q as usize];
        let gd = digits(generator as u64, pp, ru);
        let mut cur = digits(1, pp, ru);
        for k in 0..order as u32 {
            let c = code_of(&cur);
            exp.push(c);
            log[c as usize] = k;
            cur = poly_mulmod(&cur, &gd, &modulus, pp);
        }
        let pow_p = (0..r).map(|i| pp.pow(i)).collect();
        let mut field = FieldPresentation {
            p,
            r,
            q: q as u32,
            modulus,
            generator: FieldElement(generator),
            exp,
            log,
            trace: Vec::new(),
            pow_p,
        };
        field.trace = (0..q as u32)
            .map(|t| {
                let mut acc = FieldElement::ZERO;
                let mut x = FieldElement(t);
                for _ in 0..r {
                    acc = field.add(acc, x);
                    x = field.pow(x, p.get());
                }
                // The trace lies in the prime field: code equals its value.
                debug_assert!(acc.0 < pp);
                acc.0
            })
            .collect();
        Ok(field)
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    pub fn units(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.q).map(FieldElement)
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        digits(x.0 as u64, self.p.get() as u32, self.r as usize)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<FieldElement> {
        let pp = self.p.get() as u32;
        if c.len() != self.r as usize || c.iter().any(|&d| d >= pp) {
            return Err(Error::InvalidArgument(format!(
                "coefficients {c:?} do not define an element"
            )));
        }
        Ok(FieldElement(c.iter().rev().fold(0, |acc, &d| acc * pp + d)))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let pp = self.p.get() as u32;
        if pp == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out) = (a.0, b.0, 0);
        for &w in &self.pow_p {
            out += ((x % pp + y % pp) % pp) * w;
            x /= pp;
            y /= pp;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let pp = self.p.get() as u32;
        let mut x = a.0;
        let mut out = 0;
        for &w in &self.pow_p {
            out += ((pp - x % pp) % pp) * w;
            x /= pp;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let n = self.q as u64 - 1;
        let k = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % n;
        FieldElement(self.exp[k as usize])
    }

    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let n = self.q as u64 - 1;
        FieldElement(self.exp[((self.log[a.0 as usize] as u64 * (k % n)) % n) as usize])
    }

    /// Discrete log to the base of the generator.
    pub fn log(&self, t: FieldElement) -> Result<u32> {
        if t.is_zero() {
            return Err(Error::CharacterAtZero);
        }
        Ok(self.log[t.0 as usize])
    }

    /// `Tr_{F/F_p}(t)` as a residue mod `p`.
    pub fn trace(&self, t: FieldElement) -> u32 {
        self.trace[t.0 as usize]
    }

    pub fn character(&self, a: i64) -> CharacterIndex {
        CharacterIndex(a.rem_euclid(self.q as i64 - 1) as u32)
    }

    pub fn char_mul(&self, x: CharacterIndex, y: CharacterIndex) -> CharacterIndex {
        self.character(x.0 as i64 + y.0 as i64)
    }

    pub fn char_pow(&self, x: CharacterIndex, k: i64) -> CharacterIndex {
        self.character(x.0 as i64 * k)
    }

    pub fn conj(&self, x: CharacterIndex) -> CharacterIndex {
        self.character(-(x.0 as i64))
    }
}

/// `exp(2 pi i k/n)`, with the real roots exact.
fn root_of_unity(k: u64, n: u64) -> Complex64 {
    let k = k % n;
    if k == 0 {
        Complex64::new(1.0, 0.0)
    } else if 2 * k == n {
        Complex64::new(-1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, TAU * k as f64 / n as f64)
    }
}

/// `psi(t) = exp(2 pi i Tr(t)/p)`.
pub fn additive_char(f: &FieldPresentation, t: FieldElement) -> Complex64 {
    root_of_unity(f.trace(t) as u64, f.p.get())
}

/// `chi_a(t)` for `t != 0`; rejects `t = 0`.
pub fn mult_char(f: &FieldPresentation, a: CharacterIndex, t: FieldElement) -> Result<Complex64> {
    let k = f.log(t)?;
    Ok(root_of_unity(a.0 as u64 * k as u64, f.q as u64 - 1))
}

/// Sums `sum counts[m][k] exp(2 pi i m/(q-1)) exp(2 pi i k/p)` over an exact
/// histogram indexed `m * p + k`.
fn histogram_value(hist: &[i64], q1: u64, p: u64) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (idx, &c) in hist.iter().enumerate() {
        if c != 0 {
            let (m, k) = (idx as u64 / p, idx as u64 % p);
            s += root_of_unity(m, q1) * root_of_unity(k, p) * c as f64;
        }
    }
    s
}

/// `sum_{t != 0} chi(t) psi(t)`, the sign convention used by the Mellin and
/// Jacobi identities.
pub fn gauss_sum_plus(f: &FieldPresentation, a: CharacterIndex) -> Complex64 {
    let (q1, p) = (f.q as u64 - 1, f.p.get());
    let mut hist = vec![0i64; (q1 * p) as usize];
    for t in f.units() {
        let m = (a.0 as u64 * f.log[t.0 as usize] as u64) % q1;
        hist[(m * p + f.trace(t) as u64) as usize] += 1;
    }
    histogram_value(&hist, q1, p)
}

/// `G(chi) = -sum_t chi(t) psi(t)`, with `chi(0) = 0` for every `chi`
/// including the trivial one, so that `G(1) = 1`.
pub fn gauss_sum(f: &FieldPresentation, a: CharacterIndex) -> Complex64 {
    -gauss_sum_plus(f, a)
}

/// `J(chi1, chi2) = sum_{x != 0, 1} chi1(x) chi2(1 - x)`.
pub fn jacobi_sum(f: &FieldPresentation, a1: CharacterIndex, a2: CharacterIndex) -> Complex64 {
    let q1 = f.q as u64 - 1;
    let mut hist = vec![0i64; q1 as usize];
    for x in f.units() {
        let y = f.sub(FieldElement::ONE, x);
        if y.is_zero() {
            continue;
        }
        let m = (a1.0 as u64 * f.log[x.0 as usize] as u64
            + a2.0 as u64 * f.log[y.0 as usize] as u64)
            % q1;
        hist[m as usize] += 1;
    }
    histogram_value(&hist, q1, 1)
}

/// The closed form of `J(chi1, chi2)` in terms of [`gauss_sum_plus`].
pub fn jacobi_closed_form(
    f: &FieldPresentation,
    a1: CharacterIndex,
    a2: CharacterIndex,
) -> Complex64 {
    let q = f.q as f64;
    let prod = f.char_mul(a1, a2);
    match (a1.is_trivial(), a2.is_trivial()) {
        (true, true) => Complex64::new(q - 2.0, 0.0),
        (true, false) | (false, true) => Complex64::new(-1.0, 0.0),
        (false, false) if prod.is_trivial() => -gauss_sum_plus(f, a1) * gauss_sum_plus(f, a2) / q,
        (false, false) => gauss_sum_plus(f, a1) * gauss_sum_plus(f, a2) / gauss_sum_plus(f, prod),
    }
}

/// Evaluates a polynomial with coefficients in `F` (low to high) at `x`.
pub fn eval_poly(f: &FieldPresentation, coeffs: &[FieldElement], x: FieldElement) -> FieldElement {
    coeffs
        .iter()
        .rev()
        .fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
}

/// `sum_x psi(s g(x) + t x)` for `g` given by coefficients, low to high.
pub fn exp_sum(
    f: &FieldPresentation,
    g: &[FieldElement],
    s: FieldElement,
    t: FieldElement,
) -> Complex64 {
    exp_sum_with(f, |x| eval_poly(f, g, x), s, t)
}

/// [`exp_sum`] for an arbitrary map `g: F -> F`.
pub fn exp_sum_with(
    f: &FieldPresentation,
    g: impl Fn(FieldElement) -> FieldElement,
    s: FieldElement,
    t: FieldElement,
) -> Complex64 {
    let p = f.p.get();
    let mut hist = vec![0i64; p as usize];
    for x in f.elements() {
        let v = f.add(f.mul(s, g(x)), f.mul(t, x));
        hist[f.trace(v) as usize] += 1;
    }
    histogram_value(&hist, 1, p)
}

/// `x^d (x - 1)^e`.
pub fn belyi_poly(f: &FieldPresentation, pair: ExponentPair, x: FieldElement) -> FieldElement {
    f.mul(f.pow(x, pair.d), f.pow(f.sub(x, FieldElement::ONE), pair.e))
}

/// The inner sums `E(s, t) = sum_x psi(s g(x) + t x)` for `s, t != 0`,
/// stored as exact counts of each trace value.
pub struct MellinTable {
    q1: usize,
    p: usize,
    /// `counts[(i * q1 + j) * p + k]`: number of `x` with
    /// `Tr(g^i f(x) + g^j x) = k`.
    counts: Vec<u32>,
}

impl MellinTable {
    pub fn new(f: &FieldPresentation, pair: ExponentPair) -> Result<Self> {
        if f.q as u64 > MELLIN_LIMIT {
            return Err(Error::TripleSumTooLarge {
                q: f.q as u64,
                limit: MELLIN_LIMIT,
            });
        }
        let q1 = f.q as usize - 1;
        let p = f.p.get() as usize;
        let fx: Vec<FieldElement> = f.elements().map(|x| belyi_poly(f, pair, x)).collect();
        // tr_s[i][x] = Tr(g^i f(x)), tr_t[j][x] = Tr(g^j x).
        let row = |i: usize, v: &dyn Fn(usize) -> FieldElement| -> Vec<u32> {
            (0..f.q as usize)
                .map(|x| f.trace(f.mul(FieldElement(f.exp[i]), v(x))))
                .collect()
        };
        let tr_s: Vec<Vec<u32>> = (0..q1).map(|i| row(i, &|x| fx[x])).collect();
        let tr_t: Vec<Vec<u32>> = (0..q1)
            .map(|j| row(j, &|x| FieldElement(x as u32)))
            .collect();
        let mut counts = vec![0u32; q1 * q1 * p];
        for i in 0..q1 {
            for j in 0..q1 {
                let base = (i * q1 + j) * p;
                for x in 0..f.q as usize {
                    counts[base + ((tr_s[i][x] + tr_t[j][x]) as usize % p)] += 1;
                }
            }
        }
        Ok(MellinTable { q1, p, counts })
    }

    /// `S(chi, eta) = sum_{s, t != 0} chi(s) eta(t) E(s, t)`.
    pub fn sum(&self, chi: CharacterIndex, eta: CharacterIndex) -> Complex64 {
        let (q1, p) = (self.q1, self.p);
        let mut hist = vec![0i64; q1 * p];
        for i in 0..q1 {
            let mi = chi.0 as usize * i % q1;
            for j in 0..q1 {
                let m = (mi + eta.0 as usize * j) % q1;
                let src = &self.counts[(i * q1 + j) * p..(i * q1 + j + 1) * p];
                let dst = &mut hist[m * p..(m + 1) * p];
                for k in 0..p {
                    dst[k] += src[k] as i64;
                }
            }
        }
        histogram_value(&hist, q1 as u64, p as u64)
    }
}

/// One Mellin sum by brute force.
pub fn mellin_sum(
    f: &FieldPresentation,
    pair: ExponentPair,
    chi: CharacterIndex,
    eta: CharacterIndex,
) -> Result<Complex64> {
    Ok(MellinTable::new(f, pair)?.sum(chi, eta))
}

/// The closed form of `S(chi, eta)` for `f = x^d (x-1)^e`.
pub fn mellin_closed_form(
    f: &FieldPresentation,
    pair: ExponentPair,
    chi: CharacterIndex,
    eta: CharacterIndex,
) -> Complex64 {
    let q = f.q as f64;
    if chi.is_trivial() && eta.is_trivial() {
        return Complex64::new(q * (q - 2.0), 0.0);
    }
    if chi.is_trivial() {
        return gauss_sum_plus(f, eta) * q;
    }
    let cb = f.conj(chi);
    let minus_one = f.neg(FieldElement::ONE);
    let sign = mult_char(f, f.char_pow(cb, pair.e as i64), minus_one).expect("-1 is a unit");
    if eta.is_trivial() {
        let j = jacobi_sum(
            f,
            f.char_pow(cb, pair.d as i64),
            f.char_pow(cb, pair.e as i64),
        );
        return -gauss_sum_plus(f, chi) * sign * j;
    }
    let j = jacobi_sum(
        f,
        f.char_mul(f.char_pow(cb, pair.d as i64), f.conj(eta)),
        f.char_pow(cb, pair.e as i64),
    );
    gauss_sum_plus(f, chi) * gauss_sum_plus(f, eta) * sign * j
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MellinCase {
    BothTrivial,
    ChiTrivial,
    EtaTrivial,
    BothNontrivial,
}

#[derive(Debug, Clone, Serialize)]
pub struct MellinRow {
    pub q: u32,
    pub pair: ExponentPair,
    pub chi: CharacterIndex,
    pub eta: CharacterIndex,
    pub case: MellinCase,
    #[serde(serialize_with = "ser_complex")]
    pub computed: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub expected: Complex64,
    pub ok: bool,
}

fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// Relative tolerance for triple sums.
pub const TRIPLE_SUM_TOL: f64 = 1e-6;
/// Absolute tolerance for single sums.
pub const SINGLE_SUM_TOL: f64 = 1e-9;

pub fn close_relative(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

/// Compares every `S(chi, eta)` with its closed form.
pub fn mellin_identity_rows(f: &FieldPresentation, pair: ExponentPair) -> Result<Vec<MellinRow>> {
    let table = MellinTable::new(f, pair)?;
    let q = f.q as f64;
    let mut rows = Vec::new();
    for a in 0..f.q - 1 {
        for b in 0..f.q - 1 {
            let (chi, eta) = (CharacterIndex(a), CharacterIndex(b));
            let computed = table.sum(chi, eta);
            let expected = mellin_closed_form(f, pair, chi, eta);
            let case = match (chi.is_trivial(), eta.is_trivial()) {
                (true, true) => MellinCase::BothTrivial,
                (true, false) => MellinCase::ChiTrivial,
                (false, true) => MellinCase::EtaTrivial,
                (false, false) => MellinCase::BothNontrivial,
            };
            let ok = if case == MellinCase::BothTrivial {
                (computed.re - q * (q - 2.0)).abs() <= TRIPLE_SUM_TOL
                    && computed.im.abs() < TRIPLE_SUM_TOL
            } else {
                close_relative(computed, expected, TRIPLE_SUM_TOL)
            };
            rows.push(MellinRow {
                q: f.q,
                pair,
                chi,
                eta,
                case,
                computed,
                expected,
                ok,
            });
        }
    }
    Ok(rows)
}

/// Largest relative deviation of `|G(chi)|` from `sqrt(q)` over the
/// nontrivial characters.
pub fn gauss_modulus_deviation(f: &FieldPresentation) -> f64 {
    let root = (f.q as f64).sqrt();
    (1..f.q - 1)
        .map(|a| (gauss_sum(f, CharacterIndex(a)).norm() - root).abs() / root)
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SwitchsumRow {
    pub t: u32,
    pub y: u32,
    pub lhs: i64,
    pub rhs: i64,
}

impl SwitchsumRow {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn sign(f: &FieldPresentation, v: FieldElement) -> i64 {
    if f.trace(v) == 0 {
        1
    } else {
        -1
    }
}

/// `roots[z]` lists the solutions of `w^2 + w = z`.
fn artin_schreier_roots(f: &FieldPresentation) -> Vec<Vec<FieldElement>> {
    let mut roots = vec![Vec::new(); f.q as usize];
    for w in f.elements() {
        let z = f.add(f.mul(w, w), w);
        roots[z.0 as usize].push(w);
    }
    roots
}

fn switchsum_row(
    f: &FieldPresentation,
    roots: &[Vec<FieldElement>],
    t: FieldElement,
    y: FieldElement,
) -> SwitchsumRow {
    let lhs = roots[y.0 as usize]
        .iter()
        .map(|&x| sign(f, f.mul(t, x)))
        .sum();
    let t2 = f.mul(t, t);
    let rhs = roots[t2.0 as usize]
        .iter()
        .map(|&u| sign(f, f.mul(u, y)))
        .sum();
    SwitchsumRow {
        t: t.0,
        y: y.0,
        lhs,
        rhs,
    }
}

/// Both sides of `sum_{x^2+x=y} psi(tx) = sum_{u^2+u=t^2} psi(uy)` over a
/// field of characteristic 2, as exact integers.
pub fn switchsum_sides(
    f: &FieldPresentation,
    t: FieldElement,
    y: FieldElement,
) -> Result<SwitchsumRow> {
    if f.p.get() != 2 {
        return Err(Error::NotCharacteristicTwo(f.p.get()));
    }
    Ok(switchsum_row(f, &artin_schreier_roots(f), t, y))
}

pub fn switchsum_check(f: &FieldPresentation, t: FieldElement, y: FieldElement) -> Result<bool> {
    Ok(switchsum_sides(f, t, y)?.holds())
}

/// Every `(t, y)` over `F_{2^r}`; returns the number of pairs checked and the
/// rows where the two sides differ.
pub fn switchsum_exhaustive(r: u32) -> Result<(u64, Vec<SwitchsumRow>)> {
    let f = FieldPresentation::new(Prime::new(2)?, r)?;
    let roots = artin_schreier_roots(&f);
    let mut failures = Vec::new();
    let mut n = 0;
    for t in f.elements() {
        for y in f.elements() {
            n += 1;
            let row = switchsum_row(&f, &roots, t, y);
            if !row.holds() {
                failures.push(row);
            }
        }
    }
    Ok((n, failures))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64, r: u32) -> FieldPresentation {
        FieldPresentation::new(Prime::new(p).unwrap(), r).unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < SINGLE_SUM_TOL
    }

    #[test]
    fn presentations() {
        let f = field(2, 3);
        assert_eq!(f.modulus(), &[1, 1, 0, 1]);
        assert_eq!(f.generator(), FieldElement(2));
        let f = field(3, 2);
        // x^2 + 1 is the first irreducible by code; x is then of order 4, and
        // x + 1 is the first element of order 8.
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(f.coeffs(f.generator()), vec![1, 1]);
        let f = field(2, 1);
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.generator(), FieldElement::ONE);
        let f = field(7, 1);
        assert_eq!(f.generator(), FieldElement(3));
        assert!(FieldPresentation::new(Prime::new(2).unwrap(), 21).is_err());
    }

    #[test]
    fn tables_are_consistent() {
        for (p, r) in [(2u64, 4u32), (3, 3), (5, 2), (7, 2), (2, 1), (11, 1)] {
            let f = field(p, r);
            let mut seen = vec![false; f.q() as usize];
            for t in f.units() {
                let k = f.log(t).unwrap() as usize;
                assert!(!seen[k]);
                seen[k] = true;
                assert_eq!(f.pow(f.generator(), k as u64), t);
            }
            // Multiplication by table agrees with the polynomial product.
            for a in f.elements().take(30) {
                for b in f.elements().take(30) {
                    let direct = poly_mulmod(&f.coeffs(a), &f.coeffs(b), f.modulus(), p as u32);
                    assert_eq!(f.coeffs(f.mul(a, b)), direct);
                }
            }
            // The trace is additive and onto the prime field.
            for a in f.elements().take(20) {
                for b in f.elements().take(20) {
                    assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % p as u32);
                }
            }
        }
    }

    #[test]
    fn export_json() {
        let v = serde_json::to_value(field(2, 3)).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"p": 2, "r": 3, "q": 8, "modulus": [1, 1, 0, 1], "generator": [0, 1, 0]})
        );
    }

    #[test]
    fn orthogonality() {
        for (p, r) in [(2u64, 3u32), (3, 2), (5, 2), (2, 6)] {
            let f = field(p, r);
            let s: Complex64 = f.elements().map(|t| additive_char(&f, t)).sum();
            assert!(s.norm() < 1e-12);
            for a in 1..f.q() - 1 {
                let s: Complex64 = f
                    .units()
                    .map(|t| mult_char(&f, CharacterIndex(a), t).unwrap())
                    .sum();
                assert!(s.norm() < 1e-9, "p={p} r={r} a={a}");
            }
        }
    }

    #[test]
    fn characters() {
        let f = field(5, 2);
        assert!(mult_char(&f, CharacterIndex(3), FieldElement::ZERO).is_err());
        let g = f.generator();
        assert!(close(
            mult_char(&f, CharacterIndex(1), g).unwrap(),
            Complex64::from_polar(1.0, TAU / 24.0)
        ));
        for (a, b) in [(7u32, 11u32), (3, 21), (5, 5)] {
            let (x, y) = (FieldElement(a), FieldElement(b));
            let c = CharacterIndex(5);
            let lhs = mult_char(&f, c, f.mul(x, y)).unwrap();
            let rhs = mult_char(&f, c, x).unwrap() * mult_char(&f, c, y).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
        for t in field(2, 3).elements() {
            let v = additive_char(&field(2, 3), t);
            assert!(v == Complex64::new(1.0, 0.0) || v == Complex64::new(-1.0, 0.0));
        }
    }

    #[test]
    fn gauss_examples() {
        assert!(close(
            gauss_sum(&field(2, 1), CharacterIndex::TRIVIAL),
            Complex64::new(1.0, 0.0)
        ));
        assert!(close(
            gauss_sum(&field(7, 2), CharacterIndex::TRIVIAL),
            Complex64::new(1.0, 0.0)
        ));
        // p = 3, quadratic character: -(psi(1) - psi(2)) = -i sqrt 3.
        let g = gauss_sum(&field(3, 1), CharacterIndex(1));
        assert!(close(g, Complex64::new(0.0, -(3f64).sqrt())));
        assert!(close(g * g, Complex64::new(-3.0, 0.0)));
    }

    #[test]
    fn gauss_modulus() {
        for (p, r) in [(2u64, 10u32), (3, 6), (5, 4), (7, 3), (31, 2), (1021, 1)] {
            assert!(gauss_modulus_deviation(&field(p, r)) < 1e-9, "p={p} r={r}");
        }
    }

    #[test]
    fn jacobi_identities() {
        for (p, r) in [(2u64, 4u32), (3, 2), (5, 2), (7, 1), (2, 5), (3, 3)] {
            let f = field(p, r);
            for a in 0..f.q() - 1 {
                for b in 0..f.q() - 1 {
                    let (x, y) = (CharacterIndex(a), CharacterIndex(b));
                    let j = jacobi_sum(&f, x, y);
                    let c = jacobi_closed_form(&f, x, y);
                    assert!((j - c).norm() < 1e-9, "p={p} r={r} a={a} b={b}: {j} vs {c}");
                }
            }
        }
    }

    #[test]
    fn jacobi_with_trivial_product_is_not_the_unsigned_quotient() {
        // For chi nontrivial, J(chi, conj chi) = -chi(-1), while
        // G(chi) G(conj chi) / q = chi(-1).
        let f = field(5, 1);
        let chi = CharacterIndex(1);
        let j = jacobi_sum(&f, chi, f.conj(chi));
        let unsigned = gauss_sum(&f, chi) * gauss_sum(&f, f.conj(chi)) / 5.0;
        assert!((j + unsigned).norm() < 1e-9);
        assert!((j - unsigned).norm() > 1.0);
    }

    #[test]
    fn exp_sum_examples() {
        let f = field(3, 2);
        let linear = [FieldElement::ZERO, FieldElement::ONE];
        let s = FieldElement(4);
        let t = FieldElement(5);
        // s x + t x with s + t != 0 sums a nontrivial character.
        assert!(exp_sum(&f, &linear, s, t).norm() < 1e-9);
        let c = FieldElement(7);
        let constant = [c];
        let v = exp_sum(&f, &constant, s, FieldElement::ZERO);
        assert!(close(v, additive_char(&f, f.mul(s, c)) * 9.0));
        let f = field(2, 3);
        let g = [0, 0, 0, 1, 0, 1].map(FieldElement);
        for s in f.elements() {
            for t in f.elements() {
                let v = exp_sum(&f, &g, s, t);
                assert!(v.im == 0.0 && v.re.fract() == 0.0);
            }
        }
    }

    #[test]
    fn translation_invariance() {
        let f = field(5, 2);
        let pair = ExponentPair::new(3, 2).unwrap();
        for alpha in [1u32, 6, 13] {
            let alpha = FieldElement(alpha);
            for (s, t) in [(1u32, 2u32), (7, 0), (11, 19)] {
                let (s, t) = (FieldElement(s), FieldElement(t));
                let shifted = exp_sum_with(&f, |x| belyi_poly(&f, pair, f.add(x, alpha)), s, t);
                let plain = exp_sum_with(&f, |x| belyi_poly(&f, pair, x), s, t);
                assert!((shifted.norm() - plain.norm()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn mellin_small_fields() {
        for (p, r) in [(2u64, 2u32), (2, 3), (3, 2), (5, 1), (7, 1)] {
            let f = field(p, r);
            for (d, e) in [(2u64, 2u64), (3, 2), (1, 1)] {
                let pair = ExponentPair::new(d, e).unwrap();
                for row in mellin_identity_rows(&f, pair).unwrap() {
                    assert!(row.ok, "{row:?}");
                }
            }
        }
    }

    #[test]
    fn mellin_matches_definition() {
        // The triple sum written out literally, without the histogram.
        let f = field(3, 2);
        let pair = ExponentPair::new(3, 2).unwrap();
        let table = MellinTable::new(&f, pair).unwrap();
        for (a, b) in [(0u32, 0u32), (1, 3), (5, 0), (0, 2), (7, 7)] {
            let (chi, eta) = (CharacterIndex(a), CharacterIndex(b));
            let mut direct = Complex64::new(0.0, 0.0);
            for s in f.units() {
                for t in f.units() {
                    let w = mult_char(&f, chi, s).unwrap() * mult_char(&f, eta, t).unwrap();
                    let inner: Complex64 = f
                        .elements()
                        .map(|x| {
                            additive_char(&f, f.add(f.mul(s, belyi_poly(&f, pair, x)), f.mul(t, x)))
                        })
                        .sum();
                    direct += w * inner;
                }
            }
            assert!((direct - table.sum(chi, eta)).norm() < 1e-9);
        }
        assert!(MellinTable::new(&field(3, 4), pair).is_err());
    }

    #[test]
    fn switchsum_examples() {
        let f = field(2, 3);
        let row = switchsum_sides(&f, FieldElement::ZERO, FieldElement::ZERO).unwrap();
        assert_eq!((row.lhs, row.rhs), (2, 2));
        for t in f.elements().filter(|&t| f.trace(t) == 1) {
            for y in f.elements() {
                let row = switchsum_sides(&f, t, y).unwrap();
                assert_eq!((row.lhs, row.rhs), (0, 0));
            }
        }
        assert!(switchsum_check(&field(3, 2), FieldElement::ONE, FieldElement::ONE).is_err());
        for r in 1..=6 {
            let (n, bad) = switchsum_exhaustive(r).unwrap();
            assert_eq!(n, 1 << (2 * r));
            assert!(bad.is_empty());
        }
    }
}
