//! Exact arithmetic in finite fields `F_{s^m}`.
//!
//! Elements are stored as their *encoding*: the coefficient sequence
//! `[c0, c1, ..., c_{m-1}]` of the polynomial representative, read as a
//! base-`s` integer with `c0` as the most significant digit. Ordering by the
//! encoding is therefore lexicographic order on coefficient sequences,
//! constant term first, and every "first element in scan order" rule in this
//! crate refers to that order.
//!
//! Multiplication and addition go through exponent/logarithm and Zech
//! logarithm tables built once per field, so a [`Field`] handle is cheap to
//! clone and share between threads.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order accepted by [`Field::new`].
pub const DEFAULT_FIELD_CAP: u64 = 1 << 24;

const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {s}^{m} exceeds the configured cap of {cap} elements")]
    TooLarge { s: u64, m: u32, cap: u64 },
    #[error("conjugation needs a field of even degree, got degree {0}")]
    OddDegree(u32),
    #[error("no trace-zero element outside {{0, 1, -1}} exists over F_{q}^2 (needs q >= 4)")]
    NoZeta { q: u64 },
    #[error("no element of norm -1 found")]
    NoEta,
    #[error("{p} does not divide q + 1 = {q_plus_one}")]
    NoUnityRoot { p: u64, q_plus_one: u64 },
    #[error("no element of multiplicative order {0}")]
    NoElementOfOrder(u64),
    #[error("(p, q) = (3, 8) is excluded")]
    ExcludedCase,
    #[error("no prime r != 2, p with ord_r(s^(pl)+1) > ord_r(s^(2l)-1): {evidence}")]
    NoQualifyingPrime { evidence: String },
    #[error("no element alpha satisfying the orthogonality conditions was found")]
    NoAlpha,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("malformed field literal `{0}`")]
    Parse(String),
}

/// A field element, identified by its encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Immutable description of `F_{s^m}` together with its arithmetic tables.
pub struct FieldParams {
    s: u64,
    m: u32,
    size: u32,
    /// Non-leading coefficients `c0..c_{m-1}` of the monic modulus.
    modulus: Vec<u32>,
    generator: Elem,
    one: Elem,
    /// `exp[k]` is the encoding of `g^k`, `0 <= k < size - 1`.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`, or `NO_LOG` when `1 + g^k = 0`.
    zech: Vec<u32>,
    neg: Vec<u32>,
}

/// Shared handle to a finite field.
#[derive(Clone)]
pub struct Field(Arc<FieldParams>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{{{}^{}}}", self.0.s, self.0.m)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.s == other.0.s && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factors of `n`, ascending, without multiplicity.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Exponent of the prime `r` in `n` (`n > 0`).
pub fn ord_r(r: u64, n: &BigUint) -> u32 {
    let r = BigUint::from(r);
    let mut n = n.clone();
    let mut k = 0;
    while !n.is_zero() && (&n % &r).is_zero() {
        n /= &r;
        k += 1;
    }
    k
}

/// `p`-share of `n`: the largest power of `p` dividing `n`.
pub fn p_share(p: u64, mut n: u64) -> u64 {
    let mut share = 1;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        share *= p;
    }
    share
}

// Dense polynomial helpers over F_s, coefficients low to high. Used only while
// building the tables.
fn poly_rem(a: &[u64], b: &[u64], s: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], s);
    while r.len() > db {
        let top = *r.last().unwrap();
        if top != 0 {
            let c = top * lead_inv % s;
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + s - c * bi % s) % s;
            }
        }
        r.pop();
    }
    r
}

fn mod_inv(a: u64, s: u64) -> u64 {
    let mut result = 1;
    let mut base = a % s;
    let mut e = s - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % s;
        }
        base = base * base % s;
        e >>= 1;
    }
    result
}

fn is_irreducible(f: &[u64], s: u64) -> bool {
    let m = f.len() - 1;
    if m == 1 {
        return true;
    }
    for d in 1..=m / 2 {
        let count = s.pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut t = idx;
            for _ in 0..d {
                g.push(t % s);
                t /= s;
            }
            g.push(1);
            if poly_rem(f, &g, s).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], s: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % s;
        }
    }
    let mut r = poly_rem(&prod, f, s);
    r.resize(f.len() - 1, 0);
    r
}

fn poly_powmod(a: &[u64], mut e: u64, f: &[u64], s: u64) -> Vec<u64> {
    let m = f.len() - 1;
    let mut result = vec![0u64; m];
    result[0] = 1;
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &base, f, s);
        }
        base = poly_mulmod(&base, &base, f, s);
        e >>= 1;
    }
    result
}

fn code_to_coeffs(code: u64, s: u64, m: u32) -> Vec<u64> {
    let mut coeffs = vec![0u64; m as usize];
    let mut t = code;
    for i in (0..m as usize).rev() {
        coeffs[i] = t % s;
        t /= s;
    }
    coeffs
}

fn coeffs_to_code(coeffs: &[u64], s: u64) -> u64 {
    coeffs.iter().fold(0, |acc, &c| acc * s + c)
}

impl Field {
    /// Builds `F_{s^m}` with the default size cap.
    pub fn new(s: u64, m: u32) -> Result<Field, FieldError> {
        Field::with_cap(s, m, DEFAULT_FIELD_CAP)
    }

    /// `F_{q^2}` for a prime power `q`.
    pub fn quadratic_over(q: u64) -> Result<Field, FieldError> {
        let (s, e) = prime_power(q).ok_or_else(|| {
            FieldError::InvalidParameters(format!("q = {q} is not a prime power"))
        })?;
        Field::new(s, 2 * e)
    }

    pub fn with_cap(s: u64, m: u32, cap: u64) -> Result<Field, FieldError> {
        if !is_prime(s) {
            return Err(FieldError::NotPrime(s));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let size = s
            .checked_pow(m)
            .filter(|&n| n <= cap && n <= u32::MAX as u64)
            .ok_or(FieldError::TooLarge { s, m, cap })?;
        let mu = m as usize;

        // Least monic irreducible modulus in coefficient order, constant first.
        let mut modulus = None;
        for code in 0..size {
            let mut f = code_to_coeffs(code, s, m);
            f.push(1);
            if is_irreducible(&f, s) {
                modulus = Some(f);
                break;
            }
        }
        let f = modulus.expect("an irreducible polynomial of every degree exists");

        // Least element of full multiplicative order.
        let order = size - 1;
        let factors = prime_factors(order);
        let mut one_coeffs = vec![0u64; mu];
        one_coeffs[0] = 1;
        let mut gen_coeffs = None;
        for code in 1..size {
            let g = code_to_coeffs(code, s, m);
            let full = order == 1 && g == one_coeffs
                || order > 1
                    && factors
                        .iter()
                        .all(|&r| poly_powmod(&g, order / r, &f, s) != one_coeffs);
            if full {
                gen_coeffs = Some(g);
                break;
            }
        }
        let g = gen_coeffs.expect("finite fields have cyclic unit groups");

        let size_us = size as usize;
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![NO_LOG; size_us];
        let mut cur = one_coeffs.clone();
        for k in 0..order {
            let c = coeffs_to_code(&cur, s) as u32;
            exp.push(c);
            log[c as usize] = k as u32;
            cur = poly_mulmod(&cur, &g, &f, s);
        }

        let neg: Vec<u32> = (0..size)
            .map(|code| {
                let c: Vec<u64> = code_to_coeffs(code, s, m)
                    .into_iter()
                    .map(|x| (s - x) % s)
                    .collect();
                coeffs_to_code(&c, s) as u32
            })
            .collect();

        let mut zech = vec![NO_LOG; order as usize];
        for k in 0..order as usize {
            let mut c = code_to_coeffs(exp[k] as u64, s, m);
            c[0] = (c[0] + 1) % s;
            let sum = coeffs_to_code(&c, s) as usize;
            zech[k] = log[sum];
        }

        let params = FieldParams {
            s,
            m,
            size: size as u32,
            modulus: f[..mu].iter().map(|&c| c as u32).collect(),
            generator: Elem(coeffs_to_code(&g, s) as u32),
            one: Elem(coeffs_to_code(&one_coeffs, s) as u32),
            exp,
            log,
            zech,
            neg,
        };
        Ok(Field(Arc::new(params)))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.s
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn size(&self) -> u64 {
        self.0.size as u64
    }

    /// Non-leading coefficients of the modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn generator(&self) -> Elem {
        self.0.generator
    }

    /// Order `q` of the fixed field of the involution, `q^2 = |F|`.
    pub fn q(&self) -> Result<u64, FieldError> {
        if !self.0.m.is_multiple_of(2) {
            return Err(FieldError::OddDegree(self.0.m));
        }
        Ok(self.0.s.pow(self.0.m / 2))
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    #[inline]
    pub fn one(&self) -> Elem {
        self.0.one
    }

    /// Image of an integer under `Z -> F_s -> F`.
    pub fn from_int(&self, n: i64) -> Elem {
        let s = self.0.s as i64;
        let c = n.rem_euclid(s) as u64;
        Elem((c * self.0.s.pow(self.0.m - 1)) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Elem, FieldError> {
        if coeffs.len() != self.0.m as usize || coeffs.iter().any(|&c| c >= self.0.s) {
            return Err(FieldError::Parse(format!("{coeffs:?}")));
        }
        Ok(Elem(coeffs_to_code(coeffs, self.0.s) as u32))
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u64> {
        code_to_coeffs(a.0 as u64, self.0.s, self.0.m)
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.size).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let p = &*self.0;
        let n = p.size - 1;
        let la = p.log[a.0 as usize];
        let lb = p.log[b.0 as usize];
        let d = if lb >= la { lb - la } else { lb + n - la };
        let z = p.zech[d as usize];
        if z == NO_LOG {
            return Elem::ZERO;
        }
        let mut e = la + z;
        if e >= n {
            e -= n;
        }
        Elem(p.exp[e as usize])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let p = &*self.0;
        let n = p.size - 1;
        let mut e = p.log[a.0 as usize] + p.log[b.0 as usize];
        if e >= n {
            e -= n;
        }
        Elem(p.exp[e as usize])
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        let p = &*self.0;
        let n = p.size - 1;
        let la = p.log[a.0 as usize];
        Elem(p.exp[((n - la) % n) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    /// `a^e` for any integer `e` (`0^0 = 1`; negative powers of zero panic).
    pub fn pow(&self, a: Elem, e: i64) -> Elem {
        if a.is_zero() {
            assert!(e >= 0, "negative power of zero");
            return if e == 0 { self.one() } else { Elem::ZERO };
        }
        let p = &*self.0;
        let n = (p.size - 1) as i64;
        let la = p.log[a.0 as usize] as i64;
        let k = ((la as i128 * e.rem_euclid(n) as i128) % n as i128) as usize;
        Elem(p.exp[k])
    }

    /// `a^e` for an arbitrary-size non-negative exponent.
    pub fn pow_big(&self, a: Elem, e: &BigUint) -> Elem {
        let n = BigUint::from(self.0.size - 1);
        let r = (e % &n).to_i64().unwrap();
        if a.is_zero() {
            return if e.is_zero() { self.one() } else { Elem::ZERO };
        }
        self.pow(a, r)
    }

    /// `a^(s^k)`, the `k`-th power of the Frobenius map.
    pub fn frobenius(&self, a: Elem, k: u32) -> Elem {
        if a.is_zero() {
            return a;
        }
        let p = &*self.0;
        let n = (p.size - 1) as u64;
        let mut e = 1u64;
        for _ in 0..k % p.m {
            e = e * p.s % n.max(1);
        }
        let la = p.log[a.0 as usize] as u64;
        Elem(p.exp[((la * e) % n) as usize])
    }

    /// Multiplicative order of a non-zero element.
    pub fn order(&self, a: Elem) -> u64 {
        assert!(!a.is_zero(), "zero has no multiplicative order");
        let n = (self.0.size - 1) as u64;
        let la = self.0.log[a.0 as usize] as u64;
        n / num_integer::gcd(n, la)
    }

    /// The involution `a -> a^q` of `F_{q^2}`.
    pub fn conj(&self, a: Elem) -> Result<Elem, FieldError> {
        if !self.0.m.is_multiple_of(2) {
            return Err(FieldError::OddDegree(self.0.m));
        }
        Ok(self.frobenius(a, self.0.m / 2))
    }

    /// Conjugation for callers that already know the degree is even.
    #[inline]
    pub fn bar(&self, a: Elem) -> Elem {
        debug_assert!(self.0.m.is_multiple_of(2));
        self.frobenius(a, self.0.m / 2)
    }

    pub fn trace(&self, a: Elem) -> Result<Elem, FieldError> {
        Ok(self.add(a, self.conj(a)?))
    }

    pub fn norm(&self, a: Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(a, self.conj(a)?))
    }

    /// `ζ` with `conj(ζ) = -ζ`, `ζ ∉ {0, 1, -1}`: first such element in scan order.
    pub fn find_zeta(&self) -> Result<Elem, FieldError> {
        let q = self.q()?;
        let one = self.one();
        let minus_one = self.neg(one);
        self.elements()
            .find(|&z| {
                z != Elem::ZERO && z != one && z != minus_one && self.bar(z) == self.neg(z)
            })
            .ok_or(FieldError::NoZeta { q })
    }

    /// `η` with `η·conj(η) = -1`: first such element in scan order.
    pub fn find_eta(&self) -> Result<Elem, FieldError> {
        self.q()?;
        let minus_one = self.neg(self.one());
        self.elements()
            .skip(1)
            .find(|&e| self.mul(e, self.bar(e)) == minus_one)
            .ok_or(FieldError::NoEta)
    }

    /// First element, in scan order, of multiplicative order exactly `order`.
    pub fn first_of_order(&self, order: u64) -> Result<Elem, FieldError> {
        if order == 0 || !(self.size() - 1).is_multiple_of(order) {
            return Err(FieldError::NoElementOfOrder(order));
        }
        self.elements()
            .skip(1)
            .find(|&a| self.order(a) == order)
            .ok_or(FieldError::NoElementOfOrder(order))
    }

    /// An element `u` of order `p` with `p | q + 1`.
    ///
    /// All elements of order `p` generate the same cyclic subgroup of `F*`;
    /// the one returned is the least of them in encoding order.
    pub fn find_unity_root(&self, p: u64) -> Result<Elem, FieldError> {
        let q = self.q()?;
        if p < 2 || (q + 1) % p != 0 {
            return Err(FieldError::NoUnityRoot { p, q_plus_one: q + 1 });
        }
        self.first_of_order(p)
    }

    /// Parses `[c0,c1,...]@F_{s^m}`.
    pub fn parse_literal(&self, text: &str) -> Result<Elem, FieldError> {
        let err = || FieldError::Parse(text.to_string());
        let (body, suffix) = text.trim().split_once('@').ok_or_else(err)?;
        let expected = format!("F_{{{}^{}}}", self.0.s, self.0.m);
        if suffix != expected {
            return Err(err());
        }
        let inner = body
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(err)?;
        let coeffs = inner
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| err()))
            .collect::<Result<Vec<_>, _>>()?;
        self.from_coeffs(&coeffs).map_err(|_| err())
    }

    /// Renders `a` as `[c0,c1,...]@F_{s^m}`.
    pub fn literal(&self, a: Elem) -> String {
        let coeffs = self.coeffs(a);
        let body: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
        format!("[{}]@F_{{{}^{}}}", body.join(","), self.0.s, self.0.m)
    }
}

/// Decomposes `q = s^e` with `s` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let s = prime_factors(q)[0];
    let mut t = q;
    let mut e = 0;
    while t.is_multiple_of(s) {
        t /= s;
        e += 1;
    }
    (t == 1).then_some((s, e))
}

/// The pair `(ζ, η)` defining the elements `x_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BraidScalars {
    pub zeta: Elem,
    pub eta: Elem,
}

impl BraidScalars {
    /// Deterministic choice: first `ζ` and first `η` in scan order.
    pub fn select(field: &Field) -> Result<BraidScalars, FieldError> {
        Ok(BraidScalars {
            zeta: field.find_zeta()?,
            eta: field.find_eta()?,
        })
    }

    pub fn is_valid(&self, field: &Field) -> bool {
        let one = field.one();
        let z = self.zeta;
        field.degree().is_multiple_of(2)
            && !z.is_zero()
            && z != one
            && z != field.neg(one)
            && field.bar(z) == field.neg(z)
            && field.mul(self.eta, field.bar(self.eta)) == field.neg(one)
    }
}

/// `(λ, Λ)` for the field-automorphism construction, with the prime `r`
/// that fixes their orders and the arithmetic behind its choice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaChoice {
    pub lambda: Elem,
    pub big_lambda: Elem,
    pub r: u64,
    pub lambda_order: u64,
    pub evidence: String,
}

/// Parameters `q = s^(pl)` of `PGU_n(q)⟨Φ⟩`, where `Φ: x -> x^(s^(2l))` has order `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldAutParams {
    pub s: u64,
    pub l: u32,
    pub p: u64,
}

impl FieldAutParams {
    pub fn q(&self) -> u64 {
        self.s.pow(self.l * self.p as u32)
    }

    /// Exponent `k` of the entrywise map `x -> x^(s^k)` realising `Φ`.
    pub fn phi_frobenius_exponent(&self) -> u32 {
        2 * self.l
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        if !is_prime(self.s) {
            return Err(FieldError::NotPrime(self.s));
        }
        if self.l == 0 {
            return Err(FieldError::InvalidParameters("l must be positive".into()));
        }
        if self.p < 3 || !is_prime(self.p) {
            return Err(FieldError::InvalidParameters(format!(
                "p = {} must be an odd prime",
                self.p
            )));
        }
        let q = self.q();
        if !(q + 1).is_multiple_of(self.p) {
            return Err(FieldError::NoUnityRoot {
                p: self.p,
                q_plus_one: q + 1,
            });
        }
        if self.p == 3 && q == 8 {
            return Err(FieldError::ExcludedCase);
        }
        Ok(())
    }
}

/// `α` in the fixed field `F_{s^(2l)}` of `Φ` with
/// `α + conj(α) + (n-2) = 0`, `α·conj(α) + (n-1) != 0` and `α != 1`.
///
/// The least-encoding solution of the trace equation is averaged over its
/// `Φ`-orbit; if that average is `1` it is shifted by the trace-zero element
/// `(γ-1)/(γ+1)` built from the least `γ ∈ F_{s^(2l)}` with `γ^(q+1) = 1`,
/// `γ ∉ {1, -1}`.
pub fn choose_alpha(field: &Field, aut: FieldAutParams, n: usize) -> Result<Elem, FieldError> {
    aut.validate()?;
    let q = field.q()?;
    if q != aut.q() {
        return Err(FieldError::InvalidParameters(format!(
            "field has q = {q}, parameters give q = {}",
            aut.q()
        )));
    }
    let k = aut.phi_frobenius_exponent();
    let target = field.from_int(2 - n as i64);
    let tilde = field
        .elements()
        .find(|&a| field.add(a, field.bar(a)) == target)
        .ok_or(FieldError::NoAlpha)?;
    let mut sum = Elem::ZERO;
    let mut cur = tilde;
    for _ in 0..aut.p {
        sum = field.add(sum, cur);
        cur = field.frobenius(cur, k);
    }
    let mut alpha = field.div(sum, field.from_int(aut.p as i64));
    let one = field.one();
    if alpha == one {
        let minus_one = field.neg(one);
        let gamma = field
            .elements()
            .skip(1)
            .find(|&g| {
                g != one
                    && g != minus_one
                    && field.frobenius(g, k) == g
                    && field.pow(g, q as i64 + 1) == one
            })
            .ok_or(FieldError::NoAlpha)?;
        let beta = field.div(field.sub(gamma, one), field.add(gamma, one));
        alpha = field.add(alpha, beta);
    }
    let ok = field.add(field.add(alpha, field.bar(alpha)), field.from_int(n as i64 - 2))
        == Elem::ZERO
        && field.add(field.mul(alpha, field.bar(alpha)), field.from_int(n as i64 - 1))
            != Elem::ZERO
        && alpha != one
        && field.frobenius(alpha, k) == alpha;
    if !ok {
        return Err(FieldError::NoAlpha);
    }
    Ok(alpha)
}

/// Chooses `λ` of order `r^(ord_r(s^(2l)-1)+1)` for the least prime
/// `r ∉ {2, p}` with `ord_r(s^(pl)+1) > ord_r(s^(2l)-1)`, and `Λ = λ^(1-s^(2l))`.
pub fn choose_lambda(field: &Field, aut: FieldAutParams) -> Result<LambdaChoice, FieldError> {
    aut.validate()?;
    let s = BigUint::from(aut.s);
    let q_plus_one = s.pow(aut.l * aut.p as u32) + BigUint::one();
    let fixed_minus_one = s.pow(2 * aut.l) - BigUint::one();
    let qp1 = q_plus_one
        .to_u64()
        .ok_or_else(|| FieldError::InvalidParameters("q + 1 exceeds 64 bits".into()))?;
    let candidates = prime_factors(qp1);
    let mut evidence = format!(
        "s^(pl)+1 = {} = {}; s^(2l)-1 = {} = {}",
        q_plus_one,
        factor_string(qp1),
        fixed_minus_one,
        factor_string(fixed_minus_one.to_u64().unwrap_or(0))
    );
    for &r in &candidates {
        if r == 2 || r == aut.p {
            continue;
        }
        let a = ord_r(r, &q_plus_one);
        let b = ord_r(r, &fixed_minus_one);
        if a > b {
            let lambda_order = r.pow(b + 1);
            let lambda = field.first_of_order(lambda_order)?;
            // Λ = λ^(1 - s^(2l)), exponent reduced modulo |F*|.
            let n = BigUint::from(field.size() - 1);
            let e = (&n - (&fixed_minus_one % &n)) % &n;
            let big_lambda = field.pow_big(lambda, &e);
            evidence.push_str(&format!("; r = {r}: ord_r(q+1) = {a} > ord_r(s^(2l)-1) = {b}"));
            return Ok(LambdaChoice {
                lambda,
                big_lambda,
                r,
                lambda_order,
                evidence,
            });
        }
    }
    Err(FieldError::NoQualifyingPrime { evidence })
}

fn factor_string(mut n: u64) -> String {
    if n < 2 {
        return n.to_string();
    }
    let mut parts = Vec::new();
    for r in prime_factors(n) {
        let mut k = 0;
        while n.is_multiple_of(r) {
            n /= r;
            k += 1;
        }
        parts.push(if k == 1 { r.to_string() } else { format!("{r}^{k}") });
    }
    parts.join("·")
}
