//! Prime splitting in the real quadratic rings and their cyclotomic
//! extensions Z[ξ_n] / o, n ∈ {5, 8, 12}.
//!
//! Two layers of decomposition matter. A rational prime p first decomposes
//! in the quadratic ring o (split, inert or ramified, by the quadratic
//! residue class of the radicand). Each prime 𝔭 of o then splits, stays inert or
//! ramifies in the degree-two extension Z[ξ_n] / o; the associated character
//! χ(𝔭) ∈ {+1, −1, 0} is what drives the shelling counts. Everything here
//! is abelian over Q, so both layers are decided by congruence conditions:
//! residue degrees in Q(ξ_n) are multiplicative orders mod n, and 𝔭 splits
//! in the extension exactly when its residue degree does not grow.
//!
//! All three rings have class number one, so primes are elements, not just
//! ideals; generators are pinned to a canonical associate to make outputs
//! reproducible.

use num_integer::Roots;
use num_traits::{Signed, ToPrimitive};
use std::collections::BTreeMap;

use crate::error::Error;
use crate::quad::{Basis, QuadInt};

/// How a prime decomposes in a quadratic extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Behaviour {
    Split,
    Inert,
    Ramified,
}

/// Decomposition data of a rational prime p for the pair o ⊂ Z[ξ_n].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeClass {
    pub p: u64,
    /// Decomposition of p in the real quadratic ring o.
    pub in_subring: Behaviour,
    /// Behaviour of each prime of o above p in the extension Z[ξ_n] / o.
    /// The primes above p are Galois conjugate, so they share it.
    pub in_extension: Behaviour,
    /// χ = +1, −1, 0 for split, inert, ramified in the extension.
    pub character: i8,
}

/// Factorisation x = unit · ∏ πᵢ^eᵢ into canonical prime generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorisation {
    pub unit: QuadInt,
    pub factors: Vec<(QuadInt, u32)>,
}

impl Factorisation {
    /// Multiplies the factorisation back out.
    pub fn product(&self) -> QuadInt {
        let mut acc = self.unit.clone();
        for (p, e) in &self.factors {
            acc = acc * p.pow(*e);
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Rational prime utilities (deterministic for u64).
// ---------------------------------------------------------------------------

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the listed bases cover all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard's rho with Brent cycle detection; n must be composite and odd.
fn pollard_rho(n: u64, seed: u64) -> u64 {
    let mut x = seed % n;
    let mut y = x;
    let c = seed.wrapping_mul(0x9e3779b97f4a7c15) % n + 1;
    let mut d = 1u64;
    let f = |v: u64| (mulmod(v, v, n) + c) % n;
    while d == 1 {
        x = f(x);
        y = f(f(y));
        if x == y {
            return 0; // cycle without factor; caller retries with new seed
        }
        d = gcd_u64(x.abs_diff(y), n);
    }
    if d == n {
        0
    } else {
        d
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorisation of a u64 as (prime, exponent) in ascending order.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut counts: BTreeMap<u64, u32> = BTreeMap::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        while n % p == 0 {
            *counts.entry(p).or_insert(0) += 1;
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            *counts.entry(m).or_insert(0) += 1;
            continue;
        }
        let mut d = 0;
        let mut seed = 2;
        while d == 0 || d == m {
            d = pollard_rho(m, seed);
            seed += 1;
        }
        stack.push(d);
        stack.push(m / d);
    }
    counts.into_iter().collect()
}

// ---------------------------------------------------------------------------
// Decomposition of rational primes.
// ---------------------------------------------------------------------------

pub(crate) fn subring_of(n: u32) -> Result<Basis, Error> {
    match n {
        8 => Ok(Basis::Rt2),
        12 => Ok(Basis::Rt3),
        5 => Ok(Basis::Tau),
        other => Err(Error::UnsupportedSymmetry { n: other }),
    }
}

/// Legendre symbol (a/p) for odd prime p.
fn legendre(a: u64, p: u64) -> i8 {
    let r = powmod(a % p, (p - 1) / 2, p);
    if r == 0 {
        0
    } else if r == 1 {
        1
    } else {
        -1
    }
}

/// Decomposition of p in the quadratic ring of radicand d.
fn behaviour_in_quadratic(p: u64, basis: Basis) -> Behaviour {
    let d = basis.d() as u64;
    // Ramified exactly at the primes dividing the field discriminant
    // (8, 12, 5 respectively), i.e. at p | d and, for √2 and √3, at p = 2.
    let ramified = match basis {
        Basis::Rt2 => p == 2,
        Basis::Rt3 => p == 2 || p == 3,
        Basis::Tau => p == 5,
    };
    if ramified {
        return Behaviour::Ramified;
    }
    if p == 2 {
        // Only reachable for d = 5: split iff d ≡ 1 (mod 8).
        return if d % 8 == 1 { Behaviour::Split } else { Behaviour::Inert };
    }
    match legendre(d, p) {
        1 => Behaviour::Split,
        _ => Behaviour::Inert,
    }
}

fn order_mod(p: u64, n: u64) -> u64 {
    let mut x = p % n;
    let mut k = 1;
    while x != 1 {
        x = (x * (p % n)) % n;
        k += 1;
        assert!(k <= n, "p not coprime to n");
    }
    k
}

/// Classifies a rational prime for the symmetry n: its decomposition in the
/// real quadratic subring and the behaviour of the primes above it in the
/// cyclotomic extension, with the associated character value.
pub fn classify_rational_prime(p: u64, n: u32) -> Result<PrimeClass, Error> {
    let basis = subring_of(n)?;
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    // Primes dividing n are the ramified-in-o ones; their extension
    // behaviour is a fixed table (2 and 3 stay inert over Q(√3), while the
    // ramification of 2 over Q(√2) and 5 over Q(τ) continues upward).
    if n as u64 % p == 0 {
        let in_extension = match (n, p) {
            (8, 2) | (5, 5) => Behaviour::Ramified,
            (12, 2) | (12, 3) => Behaviour::Inert,
            _ => unreachable!(),
        };
        return Ok(PrimeClass {
            p,
            in_subring: Behaviour::Ramified,
            in_extension,
            character: if in_extension == Behaviour::Ramified { 0 } else { -1 },
        });
    }
    let in_subring = behaviour_in_quadratic(p, basis);
    debug_assert!(in_subring != Behaviour::Ramified);
    // Residue degree of p in Q(ξ_n) is the order of p mod n; in the real
    // subfield it is 1 (split) or 2 (inert). The prime of o splits in the
    // extension iff the residue degree does not grow.
    let f_top = order_mod(p, n as u64);
    let f_sub = if in_subring == Behaviour::Split { 1 } else { 2 };
    let in_extension = if f_top == f_sub {
        Behaviour::Split
    } else {
        debug_assert_eq!(f_top, 2 * f_sub);
        Behaviour::Inert
    };
    Ok(PrimeClass {
        p,
        in_subring,
        in_extension,
        character: if in_extension == Behaviour::Split { 1 } else { -1 },
    })
}

// ---------------------------------------------------------------------------
// Prime generators and factorisation in the quadratic rings.
// ---------------------------------------------------------------------------

/// Canonical generator among the associates ±x·u^k of a nonzero element:
/// the one minimising (|b|, |a|, a < 0, b < 0) lexicographically.
///
/// The coefficient pattern of x·u^k grows geometrically in |k|, so the
/// minimum sits near k = 0 for any input produced by the searches here; the
/// scan window is wide enough for coefficients up to hundreds of digits.
pub fn canonical_associate(x: &QuadInt) -> QuadInt {
    assert!(!x.is_zero(), "zero has no canonical associate");
    let u = x.basis.fundamental_unit();
    let u_inv = u.conjugate(); // |N(u)| = 1, so ū = ±u⁻¹
    let key = |y: &QuadInt| (y.b.abs(), y.a.abs(), y.a.is_negative(), y.b.is_negative());
    let mut best = x.clone();
    for dir in [u, u_inv] {
        let mut y = x.clone();
        for _ in 0..=64 {
            for cand in [y.clone(), -&y] {
                if key(&cand) < key(&best) {
                    best = cand;
                }
            }
            y = y * &dir;
        }
    }
    best
}

fn is_square_i128(v: i128) -> Option<i128> {
    if v < 0 {
        return None;
    }
    let r = v.sqrt();
    if r * r == v {
        Some(r)
    } else {
        None
    }
}

/// Finds one generator of a prime above a split p: the element of smallest
/// positive b with |norm| = p, pinned to its canonical associate.
fn split_prime_generator(p: u64, basis: Basis) -> QuadInt {
    let p = p as i128;
    let mut b: i128 = 1;
    loop {
        assert!(b < 1 << 40, "prime generator search diverged");
        let found = match basis {
            Basis::Tau => {
                // N(a+bτ) = ±p ⇔ (2a+b)² = 5b² ± 4p.
                [4 * p, -4 * p].iter().find_map(|&s| {
                    let a2 = is_square_i128(5 * b * b + s)?;
                    Some(QuadInt::from_i64s(((a2 - b) / 2) as i64, b as i64, basis))
                })
            }
            _ => {
                let d = basis.d() as i128;
                // N(a+b√d) = ±p ⇔ a² = db² ± p.
                [p, -p].iter().find_map(|&s| {
                    let a = is_square_i128(d * b * b + s)?;
                    Some(QuadInt::from_i64s(a as i64, b as i64, basis))
                })
            }
        };
        if let Some(pi) = found {
            debug_assert_eq!(pi.norm().abs().to_i128(), Some(p));
            return canonical_associate(&pi);
        }
        b += 1;
    }
}

/// The primes of the quadratic ring above a rational prime p, as
/// (canonical generator, ramification exponent) with the convention
/// p · unit = ∏ πᵢ^{eᵢ}. Split pairs are ordered by descending real
/// embedding.
pub fn primes_above_in_o(p: u64, basis: Basis) -> Result<Vec<(QuadInt, u32)>, Error> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(match behaviour_in_quadratic(p, basis) {
        Behaviour::Ramified => {
            let pi = match (basis, p) {
                (Basis::Rt2, 2) => QuadInt::from_i64s(0, 1, basis),
                (Basis::Rt3, 2) => QuadInt::from_i64s(1, 1, basis),
                (Basis::Rt3, 3) => QuadInt::from_i64s(0, 1, basis),
                (Basis::Tau, 5) => QuadInt::from_i64s(2, 1, basis),
                _ => unreachable!(),
            };
            vec![(pi, 2)]
        }
        Behaviour::Inert => vec![(QuadInt::from_i64s(p as i64, 0, basis), 1)],
        Behaviour::Split => {
            let pi1 = split_prime_generator(p, basis);
            let pi2 = canonical_associate(&pi1.conjugate());
            debug_assert!(!pi1.unit_associate(&pi2));
            let mut pair = [pi1, pi2];
            // Descending real embedding for a reproducible order.
            pair.sort_by(|x, y| y.cmp(x));
            vec![(pair[0].clone(), 1), (pair[1].clone(), 1)]
        }
    })
}

/// Factors a nonzero element of a quadratic ring into a unit times powers of
/// canonical prime generators, sorted by |norm| ascending, then by
/// descending real embedding.
pub fn factor_in_subring(x: &QuadInt) -> Result<Factorisation, Error> {
    if x.is_zero() {
        return Err(Error::InvalidArgument("cannot factor zero".into()));
    }
    let norm = x.norm().abs();
    let norm: u64 = norm.to_u64().ok_or_else(|| {
        Error::InvalidArgument("norm too large to factor (exceeds u64)".into())
    })?;
    let mut rest = x.clone();
    let mut factors: Vec<(QuadInt, u32)> = Vec::new();
    for (p, _) in factor_u64(norm) {
        for (pi, _) in primes_above_in_o(p, x.basis)? {
            let mut e = 0u32;
            while let Some(q) = rest.try_divide(&pi) {
                rest = q;
                e += 1;
            }
            if e > 0 {
                factors.push((pi, e));
            }
        }
    }
    debug_assert!(rest.is_unit(), "non-unit cofactor after removing all primes");
    factors.sort_by(|(p1, _), (p2, _)| {
        p1.norm()
            .abs()
            .cmp(&p2.norm().abs())
            .then_with(|| p2.cmp(p1))
    });
    Ok(Factorisation { unit: rest, factors })
}

/// Character χ of a prime element of the quadratic ring with respect to the
/// cyclotomic extension of symmetry n: +1 split, −1 inert, 0 ramified.
pub fn character_of_prime(pi: &QuadInt, n: u32) -> Result<i8, Error> {
    if subring_of(n)? != pi.basis {
        return Err(Error::UnsupportedRing(format!(
            "prime of {} queried for symmetry {n}",
            pi.basis.symbol()
        )));
    }
    let m = pi.norm().abs();
    let m: u64 = m
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("norm too large".into()))?;
    let p = if is_prime_u64(m) {
        m
    } else {
        // Inert rational prime: norm p², element an associate of p.
        let p = m.sqrt();
        let assoc = p * p == m
            && is_prime_u64(p)
            && pi.unit_associate(&QuadInt::from_i64s(p as i64, 0, pi.basis));
        if !assoc {
            return Err(Error::InvalidArgument(format!("{pi} is not prime")));
        }
        p
    };
    Ok(classify_rational_prime(p, n)?.character)
}
