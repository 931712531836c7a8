//! Exact arithmetic in the real quadratic rings Z[√2], Z[√3] and Z[τ],
//! τ = (1+√5)/2, and in their fraction fields.
//!
//! Elements are stored as `a + b·β` with arbitrary-precision integer
//! coefficients, where β is the basis symbol of the ring. The τ basis uses
//! {1, τ} rather than {1, √5} so that the full ring of integers of Q(√5) is
//! closed under multiplication (τ² = τ + 1).
//!
//! All predicates (signs, comparisons, total positivity) are decided with
//! integer arithmetic only; no floating point is involved anywhere in this
//! module except the explicit `to_f64` accessors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;

/// Basis symbol of a real quadratic ring: √2, √3 or τ = (1+√5)/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Rt2,
    Rt3,
    Tau,
}

impl Basis {
    /// Radicand of the field: 2, 3 or 5.
    pub fn d(self) -> i64 {
        match self {
            Basis::Rt2 => 2,
            Basis::Rt3 => 3,
            Basis::Tau => 5,
        }
    }

    /// Text symbol used in the exact encodings (`rt2`, `rt3`, `tau`).
    pub fn symbol(self) -> &'static str {
        match self {
            Basis::Rt2 => "rt2",
            Basis::Rt3 => "rt3",
            Basis::Tau => "tau",
        }
    }

    /// Real value of the basis element.
    pub fn value_f64(self) -> f64 {
        match self {
            Basis::Rt2 => std::f64::consts::SQRT_2,
            Basis::Rt3 => 3.0_f64.sqrt(),
            Basis::Tau => (1.0 + 5.0_f64.sqrt()) / 2.0,
        }
    }

    /// Real value of the conjugate of the basis element (−√d, or 1−τ).
    pub fn conj_value_f64(self) -> f64 {
        match self {
            Basis::Tau => (1.0 - 5.0_f64.sqrt()) / 2.0,
            _ => -self.value_f64(),
        }
    }

    /// Fundamental unit of the ring: 1+√2, 2+√3, τ.
    pub fn fundamental_unit(self) -> QuadInt {
        match self {
            Basis::Rt2 => QuadInt::from_i64s(1, 1, self),
            Basis::Rt3 => QuadInt::from_i64s(2, 1, self),
            Basis::Tau => QuadInt::from_i64s(0, 1, self),
        }
    }

    /// Fundamental totally positive unit: (1+√2)² = 3+2√2, 2+√3, τ² = 1+τ.
    pub fn totally_positive_unit(self) -> QuadInt {
        match self {
            Basis::Rt2 => QuadInt::from_i64s(3, 2, self),
            Basis::Rt3 => QuadInt::from_i64s(2, 1, self),
            Basis::Tau => QuadInt::from_i64s(1, 1, self),
        }
    }
}

/// Exact element `a + b·β` of a real quadratic ring.
///
/// Arithmetic is closed per basis; mixing bases panics (it is a programming
/// error, caught by input validation at the tool surface).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
    pub basis: Basis,
}

fn check_basis(x: Basis, y: Basis) {
    assert!(x == y, "basis mismatch: {} vs {}", x.symbol(), y.symbol());
}

impl QuadInt {
    pub fn new(a: BigInt, b: BigInt, basis: Basis) -> Self {
        QuadInt { a, b, basis }
    }

    pub fn from_i64s(a: i64, b: i64, basis: Basis) -> Self {
        QuadInt::new(BigInt::from(a), BigInt::from(b), basis)
    }

    pub fn zero(basis: Basis) -> Self {
        QuadInt::from_i64s(0, 0, basis)
    }

    pub fn one(basis: Basis) -> Self {
        QuadInt::from_i64s(1, 0, basis)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate: √d ↦ −√d, i.e. (a,b) ↦ (a,−b); for the τ basis,
    /// τ ↦ 1−τ, i.e. (a,b) ↦ (a+b,−b).
    pub fn conjugate(&self) -> QuadInt {
        match self.basis {
            Basis::Tau => QuadInt::new(&self.a + &self.b, -&self.b, self.basis),
            _ => QuadInt::new(self.a.clone(), -&self.b, self.basis),
        }
    }

    /// Field norm x·x̄ as a rational integer.
    pub fn norm(&self) -> BigInt {
        match self.basis {
            Basis::Tau => &self.a * &self.a + &self.a * &self.b - &self.b * &self.b,
            _ => &self.a * &self.a - BigInt::from(self.basis.d()) * &self.b * &self.b,
        }
    }

    /// Field trace x + x̄ as a rational integer.
    pub fn trace(&self) -> BigInt {
        match self.basis {
            Basis::Tau => BigInt::from(2) * &self.a + &self.b,
            _ => BigInt::from(2) * &self.a,
        }
    }

    fn mul_impl(&self, rhs: &QuadInt) -> QuadInt {
        check_basis(self.basis, rhs.basis);
        match self.basis {
            // (a+bτ)(c+eτ) = ac + be + (ae + bc + be)τ, using τ² = τ+1.
            Basis::Tau => {
                let be = &self.b * &rhs.b;
                QuadInt::new(
                    &self.a * &rhs.a + &be,
                    &self.a * &rhs.b + &self.b * &rhs.a + &be,
                    self.basis,
                )
            }
            _ => {
                let d = BigInt::from(self.basis.d());
                QuadInt::new(
                    &self.a * &rhs.a + d * &self.b * &rhs.b,
                    &self.a * &rhs.b + &self.b * &rhs.a,
                    self.basis,
                )
            }
        }
    }

    /// Coefficients of the value over {1, √d}, doubled to stay integral:
    /// returns (A, B) with x = (A + B√d)/2. For √d bases this is (2a, 2b);
    /// for τ it is (2a+b, b) over √5.
    fn doubled_sqrt_coeffs(&self) -> (BigInt, BigInt) {
        match self.basis {
            Basis::Tau => (BigInt::from(2) * &self.a + &self.b, self.b.clone()),
            _ => (BigInt::from(2) * &self.a, BigInt::from(2) * &self.b),
        }
    }

    /// Sign of the real embedding, computed exactly: when the two terms have
    /// opposite signs, A + B√d is compared via A² vs dB² in integers.
    pub fn sign_exact(&self) -> i8 {
        let (a, b) = self.doubled_sqrt_coeffs();
        let d = BigInt::from(if self.basis == Basis::Tau { 5 } else { self.basis.d() });
        sign_of_a_plus_b_sqrt_d(&a, &b, &d)
    }

    /// True iff both real embeddings are strictly positive.
    pub fn is_totally_positive(&self) -> bool {
        self.sign_exact() == 1 && self.conjugate().sign_exact() == 1
    }

    /// Exact division test: returns `Some(q)` with `self = q·y`, or `None`.
    ///
    /// Panics if `y` is zero.
    pub fn try_divide(&self, y: &QuadInt) -> Option<QuadInt> {
        check_basis(self.basis, y.basis);
        assert!(!y.is_zero(), "division by zero");
        let n = y.norm();
        let num = self.mul_impl(&y.conjugate());
        let (qa, ra) = num.a.div_rem(&n);
        let (qb, rb) = num.b.div_rem(&n);
        if ra.is_zero() && rb.is_zero() {
            Some(QuadInt::new(qa, qb, self.basis))
        } else {
            None
        }
    }

    /// True iff the element is a unit of the ring (|norm| = 1).
    pub fn is_unit(&self) -> bool {
        self.norm().abs() == BigInt::from(1)
    }

    /// True iff x and y generate the same ideal (each divides the other).
    ///
    /// Panics if either argument is zero.
    pub fn unit_associate(&self, y: &QuadInt) -> bool {
        assert!(!self.is_zero() && !y.is_zero(), "zero input to associate test");
        self.try_divide(y).is_some() && y.try_divide(self).is_some()
    }

    /// Integer power (exponent ≥ 0).
    pub fn pow(&self, k: u32) -> QuadInt {
        let mut acc = QuadInt::one(self.basis);
        for _ in 0..k {
            acc = acc.mul_impl(self);
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * self.basis.value_f64()
    }

    /// Real embedding of the conjugate.
    pub fn conj_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * self.basis.conj_value_f64()
    }
}

/// Exact sign of A + B√d, d > 1 not a square.
fn sign_of_a_plus_b_sqrt_d(a: &BigInt, b: &BigInt, d: &BigInt) -> i8 {
    let sa = big_sign(a);
    let sb = big_sign(b);
    match (sa, sb) {
        (0, 0) => 0,
        (s, 0) => s,
        (0, s) => s,
        (1, 1) => 1,
        (-1, -1) => -1,
        _ => {
            // Opposite signs: |A| vs √d·|B| decided by A² vs d·B².
            let lhs = a * a;
            let rhs = d * b * b;
            match lhs.cmp(&rhs) {
                Ordering::Greater => sa,
                Ordering::Less => sb,
                Ordering::Equal => 0, // unreachable for nonsquare d, kept for totality
            }
        }
    }
}

fn big_sign(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

macro_rules! forward_quad_binop {
    ($t:ty, $imp:ident, $method:ident, $f:expr) => {
        impl std::ops::$imp<&$t> for &$t {
            type Output = $t;
            fn $method(self, rhs: &$t) -> $t {
                $f(self, rhs)
            }
        }
        impl std::ops::$imp<$t> for $t {
            type Output = $t;
            fn $method(self, rhs: $t) -> $t {
                $f(&self, &rhs)
            }
        }
        impl std::ops::$imp<&$t> for $t {
            type Output = $t;
            fn $method(self, rhs: &$t) -> $t {
                $f(&self, rhs)
            }
        }
        impl std::ops::$imp<$t> for &$t {
            type Output = $t;
            fn $method(self, rhs: $t) -> $t {
                $f(self, &rhs)
            }
        }
    };
}

forward_quad_binop!(QuadInt, Add, add, |x: &QuadInt, y: &QuadInt| {
    check_basis(x.basis, y.basis);
    QuadInt::new(&x.a + &y.a, &x.b + &y.b, x.basis)
});
forward_quad_binop!(QuadInt, Sub, sub, |x: &QuadInt, y: &QuadInt| {
    check_basis(x.basis, y.basis);
    QuadInt::new(&x.a - &y.a, &x.b - &y.b, x.basis)
});
forward_quad_binop!(QuadInt, Mul, mul, QuadInt::mul_impl);

impl std::ops::Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt::new(-&self.a, -&self.b, self.basis)
    }
}
impl std::ops::Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        -&self
    }
}

impl PartialOrd for QuadInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order by real embedding, defined within a single basis.
impl Ord for QuadInt {
    fn cmp(&self, other: &Self) -> Ordering {
        check_basis(self.basis, other.basis);
        match (self - other).sign_exact() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b.is_negative() { "-" } else { "+" };
        write!(f, "{}{}{}*{}", self.a, sign, self.b.abs(), self.basis.symbol())
    }
}

/// Exact element of the fraction field, stored as `num / den` with a plain
/// positive integer denominator.
///
/// Invariant after normalisation: den > 0 and gcd(den, content(num)) = 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadRat {
    pub num: QuadInt,
    pub den: BigInt,
}

impl QuadRat {
    pub fn new(num: QuadInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "division by zero");
        QuadRat { num, den }.normalised()
    }

    pub fn from_int(x: QuadInt) -> Self {
        QuadRat { num: x, den: BigInt::from(1) }
    }

    pub fn from_i64s(a: i64, b: i64, den: i64, basis: Basis) -> Self {
        QuadRat::new(QuadInt::from_i64s(a, b, basis), BigInt::from(den))
    }

    pub fn zero(basis: Basis) -> Self {
        QuadRat::from_int(QuadInt::zero(basis))
    }

    pub fn one(basis: Basis) -> Self {
        QuadRat::from_int(QuadInt::one(basis))
    }

    pub fn basis(&self) -> Basis {
        self.num.basis
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True iff the value lies in the integer ring (denominator 1).
    pub fn is_integral(&self) -> bool {
        self.den == BigInt::from(1)
    }

    fn normalised(mut self) -> Self {
        if self.den.is_negative() {
            self.den = -self.den;
            self.num = -self.num;
        }
        let g = self.num.a.gcd(&self.num.b).gcd(&self.den);
        if g > BigInt::from(1) {
            self.num.a /= &g;
            self.num.b /= &g;
            self.den /= &g;
        }
        self
    }

    pub fn conjugate(&self) -> QuadRat {
        QuadRat { num: self.num.conjugate(), den: self.den.clone() }
    }

    pub fn sign_exact(&self) -> i8 {
        self.num.sign_exact()
    }

    pub fn abs(&self) -> QuadRat {
        if self.sign_exact() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inverse(&self) -> QuadRat {
        assert!(!self.is_zero(), "division by zero");
        let n = self.num.norm();
        QuadRat::new(
            QuadInt::new(&self.den * &self.num.conjugate().a, &self.den * &self.num.conjugate().b, self.basis()),
            n,
        )
    }

    pub fn to_f64(&self) -> f64 {
        self.num.to_f64() / self.den.to_f64().unwrap_or(f64::NAN)
    }

    pub fn conj_f64(&self) -> f64 {
        self.num.conj_f64() / self.den.to_f64().unwrap_or(f64::NAN)
    }
}

forward_quad_binop!(QuadRat, Add, add, |x: &QuadRat, y: &QuadRat| {
    QuadRat::new(&x.num * QuadInt::new(y.den.clone(), BigInt::from(0), x.basis()) + &y.num * QuadInt::new(x.den.clone(), BigInt::from(0), x.basis()), &x.den * &y.den)
});
forward_quad_binop!(QuadRat, Sub, sub, |x: &QuadRat, y: &QuadRat| x + &(-y));
forward_quad_binop!(QuadRat, Mul, mul, |x: &QuadRat, y: &QuadRat| {
    QuadRat::new(&x.num * &y.num, &x.den * &y.den)
});
forward_quad_binop!(QuadRat, Div, div, |x: &QuadRat, y: &QuadRat| x * &y.inverse());

impl std::ops::Neg for &QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat { num: -&self.num, den: self.den.clone() }
    }
}
impl std::ops::Neg for QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        -&self
    }
}

impl PartialOrd for QuadRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order by real embedding; denominators are positive so the sign of
/// the cross difference decides.
impl Ord for QuadRat {
    fn cmp(&self, other: &Self) -> Ordering {
        check_basis(self.basis(), other.basis());
        match (self - other).sign_exact() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl serde::Serialize for QuadInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl serde::Serialize for QuadRat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

// ---------------------------------------------------------------------------
// Text encoding: `a+b*rt2`, `a-b*rt3`, `a+b*tau`, optional `/den` suffix.
// Whitespace-tolerant on input; emission is canonical (no spaces, reduced).
// ---------------------------------------------------------------------------

pub(crate) struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    pub(crate) fn new(s: &'a str) -> Self {
        Scanner { bytes: s.as_bytes(), pos: 0 }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    pub(crate) fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    pub(crate) fn expect(&mut self, c: u8) -> Result<(), Error> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(&format!("expected '{}'", c as char))),
        }
    }

    pub(crate) fn err(&self, msg: &str) -> Error {
        Error::Parse { msg: msg.to_string(), col: self.pos + 1 }
    }

    pub(crate) fn integer(&mut self) -> Result<BigInt, Error> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.bytes.get(self.pos), Some(b'+') | Some(b'-')) {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while matches!(self.bytes.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.err("expected integer"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        text.parse::<BigInt>().map_err(|_| self.err("bad integer"))
    }

    pub(crate) fn unsigned(&mut self) -> Result<BigInt, Error> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.bytes.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        text.parse::<BigInt>().map_err(|_| self.err("bad integer"))
    }

    pub(crate) fn ident(&mut self) -> Result<String, Error> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.bytes.get(self.pos), Some(c) if c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected basis symbol"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).unwrap().to_string())
    }

    pub(crate) fn done(&mut self) -> Result<(), Error> {
        self.skip_ws();
        if self.pos < self.bytes.len() {
            Err(self.err("trailing input"))
        } else {
            Ok(())
        }
    }
}

fn basis_from_symbol(sym: &str, sc: &Scanner<'_>) -> Result<Basis, Error> {
    match sym {
        "rt2" => Ok(Basis::Rt2),
        "rt3" => Ok(Basis::Rt3),
        "tau" => Ok(Basis::Tau),
        other => Err(sc.err(&format!("unknown basis '{other}' (expected rt2, rt3 or tau)"))),
    }
}

/// Parses `a+b*rtX[/den]`; the `/den` suffix is only legal for rationals.
/// Returns the value as a QuadRat (denominator 1 when integral).
pub fn parse_quadrat(text: &str) -> Result<QuadRat, Error> {
    let mut sc = Scanner::new(text);
    let first = sc.integer()?;
    let (a, b);
    match sc.peek() {
        // Form `b*sym`: the leading integer was the irrational coefficient.
        Some(b'*') => {
            sc.bump();
            a = BigInt::from(0);
            b = first;
        }
        Some(sign @ (b'+' | b'-')) => {
            sc.bump();
            a = first;
            let mag = sc.unsigned()?;
            b = if sign == b'-' { -mag } else { mag };
            sc.expect(b'*')?;
        }
        _ => return Err(sc.err("expected '+', '-' or '*'")),
    }
    let sym = sc.ident()?;
    let basis = basis_from_symbol(&sym, &sc)?;
    let den = if sc.peek() == Some(b'/') {
        sc.bump();
        let d = sc.unsigned()?;
        if d.is_zero() {
            return Err(sc.err("denominator must be positive"));
        }
        d
    } else {
        BigInt::from(1)
    };
    sc.done()?;
    Ok(QuadRat::new(QuadInt::new(a, b, basis), den))
}

/// Parses `a+b*rtX` rejecting any `/den` suffix.
pub fn parse_quadint(text: &str) -> Result<QuadInt, Error> {
    let r = parse_quadrat(text)?;
    if !r.is_integral() {
        return Err(Error::Parse { msg: "expected an integral value (no denominator)".into(), col: text.len() });
    }
    Ok(r.num)
}
