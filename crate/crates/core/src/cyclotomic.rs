//! Cyclotomic integers Z[ξ_n] for n ∈ {5, 8, 12}, the three cases with
//! φ(n) = 4 whose real subring is a quadratic ring of class number one.
//!
//! Elements are stored on the power basis 1, ξ, ξ², ξ³ with ξ = e^{2πi/n}.
//! Three ring maps matter here:
//!
//! * complex conjugation, ξ ↦ ξ^{n−1};
//! * the star map σ, ξ ↦ ξ^e with e = 3, 2, 5 for n = 8, 5, 12, the Galois
//!   automorphism that sends the physical embedding of a point to its
//!   internal one;
//! * the squared modulus x·x̄, which lands in the real quadratic subring
//!   Z[√2], Z[τ], Z[√3] respectively.
//!
//! The star map commutes with conjugation, so |x*|² = (|x|²)^σ: the internal
//! radius of a point is the algebraic conjugate of its physical squared
//! radius. That identity is what makes exact shelling computations possible,
//! and is pinned by tests below.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt;

use crate::error::Error;
use crate::quad::{Basis, QuadInt, QuadRat, Scanner};

/// Cyclotomic integer on the power basis of Z[ξ_n], n ∈ {5, 8, 12}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycInt {
    pub coeffs: [BigInt; 4],
    pub n: u32,
}

fn check_n(n: u32) {
    assert!(matches!(n, 5 | 8 | 12), "unsupported symmetry {n}");
}

fn check_same(x: &CycInt, y: &CycInt) {
    assert!(x.n == y.n, "mixed symmetries {} and {}", x.n, y.n);
}

impl CycInt {
    pub fn new(coeffs: [BigInt; 4], n: u32) -> Self {
        check_n(n);
        CycInt { coeffs, n }
    }

    pub fn from_i64s(c: [i64; 4], n: u32) -> Self {
        CycInt::new(c.map(BigInt::from), n)
    }

    pub fn zero(n: u32) -> Self {
        CycInt::from_i64s([0, 0, 0, 0], n)
    }

    pub fn one(n: u32) -> Self {
        CycInt::from_i64s([1, 0, 0, 0], n)
    }

    /// The root of unity ξ = e^{2πi/n} itself.
    pub fn xi(n: u32) -> Self {
        CycInt::from_i64s([0, 1, 0, 0], n)
    }

    pub fn from_integer(k: i64, n: u32) -> Self {
        CycInt::from_i64s([k, 0, 0, 0], n)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Real quadratic subring that squared moduli land in.
    pub fn subring(&self) -> Basis {
        match self.n {
            8 => Basis::Rt2,
            12 => Basis::Rt3,
            _ => Basis::Tau,
        }
    }

    /// Exponent of the star map: σ(ξ) = ξ^e.
    pub fn star_exponent(n: u32) -> u32 {
        check_n(n);
        match n {
            8 => 3,
            5 => 2,
            _ => 5,
        }
    }

    fn mul_impl(&self, rhs: &CycInt) -> CycInt {
        check_same(self, rhs);
        // School product up to degree 6, then reduce ξ⁴, ξ⁵, ξ⁶ by the
        // minimal polynomial of ξ_n.
        let mut conv: [BigInt; 7] = Default::default();
        for i in 0..4 {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                conv[i + j] += &self.coeffs[i] * &rhs.coeffs[j];
            }
        }
        // Rows: ξ⁴, ξ⁵, ξ⁶ expressed on the power basis.
        let table: [[i64; 4]; 3] = match self.n {
            8 => [[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0]],
            5 => [[-1, -1, -1, -1], [1, 0, 0, 0], [0, 1, 0, 0]],
            _ => [[-1, 0, 1, 0], [0, -1, 0, 1], [-1, 0, 0, 0]],
        };
        let mut out: [BigInt; 4] = [
            conv[0].clone(),
            conv[1].clone(),
            conv[2].clone(),
            conv[3].clone(),
        ];
        for (k, row) in table.iter().enumerate() {
            if conv[4 + k].is_zero() {
                continue;
            }
            for (slot, &coef) in out.iter_mut().zip(row.iter()) {
                if coef != 0 {
                    *slot += BigInt::from(coef) * &conv[4 + k];
                }
            }
        }
        CycInt::new(out, self.n)
    }

    /// Complex conjugation ξ ↦ ξ^{n−1}.
    pub fn conj(&self) -> CycInt {
        let [c0, c1, c2, c3] = &self.coeffs;
        let out = match self.n {
            8 => [c0.clone(), -c3, -c2, -c1],
            5 => [c0 - c1, -c1, c3 - c1, c2 - c1],
            _ => [c0 + c2, c1.clone(), -c2, -c1 - c3],
        };
        CycInt::new(out, self.n)
    }

    /// Star map σ: ξ ↦ ξ^e, the automorphism taking physical to internal
    /// coordinates. An involution for n = 8 and 12; for n = 5, σ² is complex
    /// conjugation.
    pub fn star(&self) -> CycInt {
        let [c0, c1, c2, c3] = &self.coeffs;
        let out = match self.n {
            8 => [c0.clone(), c3.clone(), -c2, c1.clone()],
            5 => [c0 - c2, c3 - c2, c1 - c2, -c2],
            _ => [c0 + c2, -c1, -c2, c1 + c3],
        };
        CycInt::new(out, self.n)
    }

    /// Squared modulus x·x̄ as an element of the real quadratic subring.
    pub fn modulus_sq(&self) -> QuadInt {
        let m = self.mul_impl(&self.conj()).coeffs;
        match self.n {
            8 => {
                // Z[√2] sits in Z[ξ₈] as a + b(ξ − ξ³).
                debug_assert!(m[2].is_zero() && m[1] == -&m[3]);
                QuadInt::new(m[0].clone(), m[1].clone(), Basis::Rt2)
            }
            12 => {
                // Z[√3] sits in Z[ξ₁₂] as a + b(2ξ − ξ³).
                debug_assert!(m[2].is_zero() && m[1] == BigInt::from(-2) * &m[3]);
                QuadInt::new(m[0].clone(), -&m[3], Basis::Rt3)
            }
            _ => {
                // Z[τ] sits in Z[ξ₅] as a − b(ξ² + ξ³).
                debug_assert!(m[1].is_zero() && m[2] == m[3]);
                QuadInt::new(m[0].clone(), -&m[2], Basis::Tau)
            }
        }
    }

    /// Physical embedding ξ ↦ e^{2πi/n} as a point of the plane.
    pub fn embed(&self) -> [f64; 2] {
        let mut x = 0.0;
        let mut y = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let angle = TAU * k as f64 / self.n as f64;
            x += c * angle.cos();
            y += c * angle.sin();
        }
        [x, y]
    }

    /// Internal embedding: physical embedding of the starred element.
    pub fn embed_internal(&self) -> [f64; 2] {
        self.star().embed()
    }

    /// Exact planar embedding for n = 8, with coordinates in Q(√2):
    /// ξ₈ = (√2 + i√2)/2, so the point is
    /// (c0 + (c1−c3)√2/2, c2 + (c1+c3)√2/2).
    pub fn exact_embed(&self) -> Result<ExactPoint2, Error> {
        if self.n != 8 {
            return Err(Error::UnsupportedRing(format!(
                "exact embedding is only available for n = 8, got n = {}",
                self.n
            )));
        }
        let [c0, c1, c2, c3] = &self.coeffs;
        let u = QuadRat::new(
            QuadInt::new(BigInt::from(2) * c0, c1 - c3, Basis::Rt2),
            BigInt::from(2),
        );
        let v = QuadRat::new(
            QuadInt::new(BigInt::from(2) * c2, c1 + c3, Basis::Rt2),
            BigInt::from(2),
        );
        Ok(ExactPoint2 { u, v })
    }

    /// All roots of unity of Z[ξ_n]: the ξ^k for even n, ±ξ^k for n = 5.
    pub fn roots_of_unity(n: u32) -> Vec<CycInt> {
        check_n(n);
        let xi = CycInt::xi(n);
        let mut out = Vec::new();
        let mut u = CycInt::one(n);
        for _ in 0..n {
            out.push(u.clone());
            u = u.mul_impl(&xi);
        }
        if n == 5 {
            let minus: Vec<CycInt> = out.iter().map(|r| -r).collect();
            out.extend(minus);
        }
        out
    }

    /// Orbit of x under the point symmetry group of the set (rotations by
    /// roots of unity and the reflection given by conjugation), deduplicated
    /// exactly and returned in a deterministic order.
    pub fn dn_orbit(&self) -> Vec<CycInt> {
        let mut set = BTreeSet::new();
        let cj = self.conj();
        for u in CycInt::roots_of_unity(self.n) {
            set.insert(u.mul_impl(self));
            set.insert(u.mul_impl(&cj));
        }
        set.into_iter().collect()
    }
}

macro_rules! forward_cyc_binop {
    ($imp:ident, $method:ident, $f:expr) => {
        impl std::ops::$imp<&CycInt> for &CycInt {
            type Output = CycInt;
            fn $method(self, rhs: &CycInt) -> CycInt {
                $f(self, rhs)
            }
        }
        impl std::ops::$imp<CycInt> for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: CycInt) -> CycInt {
                $f(&self, &rhs)
            }
        }
        impl std::ops::$imp<&CycInt> for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: &CycInt) -> CycInt {
                $f(&self, rhs)
            }
        }
        impl std::ops::$imp<CycInt> for &CycInt {
            type Output = CycInt;
            fn $method(self, rhs: CycInt) -> CycInt {
                $f(self, &rhs)
            }
        }
    };
}

forward_cyc_binop!(Add, add, |x: &CycInt, y: &CycInt| {
    check_same(x, y);
    let mut out = x.coeffs.clone();
    for (o, c) in out.iter_mut().zip(y.coeffs.iter()) {
        *o += c;
    }
    CycInt::new(out, x.n)
});
forward_cyc_binop!(Sub, sub, |x: &CycInt, y: &CycInt| {
    check_same(x, y);
    let mut out = x.coeffs.clone();
    for (o, c) in out.iter_mut().zip(y.coeffs.iter()) {
        *o -= c;
    }
    CycInt::new(out, x.n)
});
forward_cyc_binop!(Mul, mul, CycInt::mul_impl);

impl std::ops::Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt::new(self.coeffs.clone().map(|c| -c), self.n)
    }
}
impl std::ops::Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{},{},{}]@{}",
            self.coeffs[0], self.coeffs[1], self.coeffs[2], self.coeffs[3], self.n
        )
    }
}

impl serde::Serialize for CycInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Exact point of the plane with coordinates in one quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactPoint2 {
    pub u: QuadRat,
    pub v: QuadRat,
}

impl ExactPoint2 {
    pub fn to_f64(&self) -> [f64; 2] {
        [self.u.to_f64(), self.v.to_f64()]
    }
}

/// Parses `[c0,c1,c2,c3]@n` with n ∈ {5, 8, 12}.
pub fn parse_cycint(text: &str) -> Result<CycInt, Error> {
    let mut sc = Scanner::new(text);
    sc.expect(b'[')?;
    let c0 = sc.integer()?;
    sc.expect(b',')?;
    let c1 = sc.integer()?;
    sc.expect(b',')?;
    let c2 = sc.integer()?;
    sc.expect(b',')?;
    let c3 = sc.integer()?;
    sc.expect(b']')?;
    sc.expect(b'@')?;
    let n = sc.integer()?;
    sc.done()?;
    let n = n.to_u32().filter(|n| matches!(n, 5 | 8 | 12)).ok_or_else(|| Error::UnsupportedSymmetry {
        n: n.to_u32().unwrap_or(0),
    })?;
    Ok(CycInt::new([c0, c1, c2, c3], n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::QuadInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ci(c: [i64; 4], n: u32) -> CycInt {
        CycInt::from_i64s(c, n)
    }

    fn random_elem(rng: &mut ChaCha8Rng, n: u32) -> CycInt {
        ci(
            [
                rng.random_range(-9..10),
                rng.random_range(-9..10),
                rng.random_range(-9..10),
                rng.random_range(-9..10),
            ],
            n,
        )
    }

    #[test]
    fn xi_has_order_n() {
        for n in [5u32, 8, 12] {
            let xi = CycInt::xi(n);
            let mut p = CycInt::one(n);
            for k in 1..=n {
                p = p * &xi;
                if k < n {
                    assert_ne!(p, CycInt::one(n), "ξ^{k} = 1 too early for n = {n}");
                }
            }
            assert_eq!(p, CycInt::one(n));
        }
    }

    #[test]
    fn conj_and_star_are_ring_homomorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in [5u32, 8, 12] {
            for _ in 0..300 {
                let x = random_elem(&mut rng, n);
                let y = random_elem(&mut rng, n);
                assert_eq!((&x * &y).conj(), x.conj() * y.conj());
                assert_eq!((&x + &y).conj(), x.conj() + y.conj());
                assert_eq!((&x * &y).star(), x.star() * y.star());
                assert_eq!((&x + &y).star(), x.star() + y.star());
            }
        }
    }

    #[test]
    fn star_composition_law() {
        // σ² = id for n = 8, 12; σ² = complex conjugation for n = 5.
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..300 {
            for n in [8u32, 12] {
                let x = random_elem(&mut rng, n);
                assert_eq!(x.star().star(), x);
            }
            let x = random_elem(&mut rng, 5);
            assert_eq!(x.star().star(), x.conj());
        }
    }

    #[test]
    fn star_agrees_with_power_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in [5u32, 8, 12] {
            let e = CycInt::star_exponent(n);
            // σ(ξ^k) = ξ^{ek}; check on a random polynomial by expanding.
            for _ in 0..100 {
                let x = random_elem(&mut rng, n);
                let xi = CycInt::xi(n);
                let mut expected = CycInt::zero(n);
                for (k, c) in x.coeffs.iter().enumerate() {
                    let mut term = CycInt::new(
                        [c.clone(), 0.into(), 0.into(), 0.into()],
                        n,
                    );
                    for _ in 0..(e as usize * k) {
                        term = term * &xi;
                    }
                    expected = expected + term;
                }
                assert_eq!(x.star(), expected);
            }
        }
    }

    #[test]
    fn modulus_sq_examples() {
        // |1 − ξ₈|² = 2 − √2 and |1 + ξ₈|² = 2 + √2.
        assert_eq!(ci([1, -1, 0, 0], 8).modulus_sq(), QuadInt::from_i64s(2, -1, Basis::Rt2));
        assert_eq!(ci([1, 1, 0, 0], 8).modulus_sq(), QuadInt::from_i64s(2, 1, Basis::Rt2));
        assert_eq!(ci([1, 0, 1, 0], 8).modulus_sq(), QuadInt::from_i64s(2, 0, Basis::Rt2));
        // |1 + ξ₅|² = 1 + τ since 2cos(2π/5) = τ − 1.
        assert_eq!(ci([1, 1, 0, 0], 5).modulus_sq(), QuadInt::from_i64s(1, 1, Basis::Tau));
        // |1 + ξ₁₂|² = 2 + √3.
        assert_eq!(ci([1, 1, 0, 0], 12).modulus_sq(), QuadInt::from_i64s(2, 1, Basis::Rt3));
    }

    #[test]
    fn modulus_sq_is_multiplicative_and_star_conjugates_it() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for n in [5u32, 8, 12] {
            for _ in 0..300 {
                let x = random_elem(&mut rng, n);
                let y = random_elem(&mut rng, n);
                assert_eq!((&x * &y).modulus_sq(), x.modulus_sq() * y.modulus_sq());
                // |x*|² = (|x|²)ᵒ: internal radii are algebraic conjugates.
                assert_eq!(x.star().modulus_sq(), x.modulus_sq().conjugate());
            }
        }
    }

    #[test]
    fn embed_matches_modulus_and_exact_embed() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for n in [5u32, 8, 12] {
            for _ in 0..200 {
                let x = random_elem(&mut rng, n);
                let [px, py] = x.embed();
                let m = x.modulus_sq().to_f64();
                assert!((px * px + py * py - m).abs() < 1e-8, "n={n} x={x}");
                if n == 8 {
                    let p = x.exact_embed().unwrap();
                    assert!((p.u.to_f64() - px).abs() < 1e-9);
                    assert!((p.v.to_f64() - py).abs() < 1e-9);
                }
            }
        }
        assert!(ci([1, 0, 0, 0], 5).exact_embed().is_err());
    }

    #[test]
    fn roots_of_unity_counts() {
        assert_eq!(CycInt::roots_of_unity(8).len(), 8);
        assert_eq!(CycInt::roots_of_unity(12).len(), 12);
        assert_eq!(CycInt::roots_of_unity(5).len(), 10);
        for n in [5u32, 8, 12] {
            for u in CycInt::roots_of_unity(n) {
                assert_eq!(u.modulus_sq(), QuadInt::one(u.subring()));
            }
        }
    }

    #[test]
    fn orbit_lengths_and_invariance() {
        // 1 + ξ₈ has the full reflection-degenerate orbit of length 8.
        let z = ci([1, 1, 0, 0], 8);
        let orbit = z.dn_orbit();
        assert_eq!(orbit.len(), 8);
        for w in &orbit {
            assert_eq!(w.modulus_sq(), z.modulus_sq());
        }
        // A generic point has the full orbit 2n.
        let g = ci([3, 1, 0, 2], 8);
        assert_eq!(g.dn_orbit().len(), 16);
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        for n in [5u32, 8, 12] {
            let group_order = if n == 5 { 20 } else { 2 * n as usize };
            for _ in 0..50 {
                let x = random_elem(&mut rng, n);
                if x.is_zero() {
                    continue;
                }
                let len = x.dn_orbit().len();
                assert!(group_order % len == 0, "orbit {len} for group {group_order}");
            }
        }
    }

    #[test]
    fn parse_and_display_round_trip() {
        for text in ["[1,-1,0,0]@8", "[0,1,0,0]@5", "[2,0,-1,3]@12"] {
            let x = parse_cycint(text).unwrap();
            assert_eq!(x.to_string(), text);
        }
        assert!(parse_cycint("[1,0,0,0]@7").is_err());
        assert!(parse_cycint("[1,0,0]@8").is_err());
    }
}
