//! Central shelling numbers: how many points of the full planar module
//! Z[ξ_n] lie on the circle of squared radius r².
//!
//! A squared radius is an element r² of the real quadratic subring o. The
//! count c(r²) is zero unless r² is totally positive (the algebraic
//! conjugate (r²)ᵒ is a squared internal radius, so it must be positive
//! too), and otherwise equals
//!
//!   c(r²) = N · ∏ (t_𝔭 + 1)  over primes 𝔭 of o with χ(𝔭) = +1,
//!
//! provided every prime with χ(𝔭) = −1 divides r² to an even power; here
//! N is the number of roots of unity (8, 12, 10) and t_𝔭 the exponent of 𝔭
//! in r². Two independent routes to the same number are implemented: the
//! product formula above ([`central_count`]) and the literal sum of the
//! character over all divisor exponent tuples ([`character_sum`]); a third,
//! geometric route enumerates the shell as lattice vectors of a quartic
//! trace form ([`enumerate_shell`]).

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cyclotomic::CycInt;
use crate::enumerate::integer_form_shell;
use crate::error::Error;
use crate::quad::{Basis, QuadInt};
use crate::splitting::{character_of_prime, factor_in_subring};

/// Symmetry n whose cyclotomic ring has the given real quadratic subring.
pub fn symmetry_of(basis: Basis) -> u32 {
    match basis {
        Basis::Rt2 => 8,
        Basis::Rt3 => 12,
        Basis::Tau => 5,
    }
}

fn subring_of(n: u32) -> Result<Basis, Error> {
    match n {
        8 => Ok(Basis::Rt2),
        12 => Ok(Basis::Rt3),
        5 => Ok(Basis::Tau),
        other => Err(Error::UnsupportedSymmetry { n: other }),
    }
}

/// Number of roots of unity in Z[ξ_n]: the length of a full rotation orbit.
pub fn shell_prefactor(n: u32) -> Result<u64, Error> {
    subring_of(n)?;
    Ok(match n {
        5 => 10,
        n => n as u64,
    })
}

fn check_ring(rsq: &QuadInt, n: u32) -> Result<(), Error> {
    if subring_of(n)? != rsq.basis {
        return Err(Error::UnsupportedRing(format!(
            "squared radius in {} does not belong to symmetry {n}",
            rsq.basis.symbol()
        )));
    }
    Ok(())
}

/// Central shelling count via the prime-splitting product formula.
pub fn central_count(rsq: &QuadInt, n: u32) -> Result<u64, Error> {
    check_ring(rsq, n)?;
    if rsq.is_zero() {
        return Ok(1); // the origin alone
    }
    if !rsq.is_totally_positive() {
        return Ok(0);
    }
    let mut acc: u64 = shell_prefactor(n)?;
    for (pi, t) in factor_in_subring(rsq)?.factors {
        match character_of_prime(&pi, n)? {
            0 => {}
            -1 => {
                if t % 2 == 1 {
                    return Ok(0);
                }
            }
            _ => acc *= t as u64 + 1,
        }
    }
    Ok(acc)
}

/// Central shelling count via the literal divisor sum N · Σ_d χ(d), where d
/// runs over all divisor exponent tuples of r². Independent of the product
/// formula; the two must agree everywhere.
pub fn character_sum(rsq: &QuadInt, n: u32) -> Result<u64, Error> {
    check_ring(rsq, n)?;
    if rsq.is_zero() {
        return Ok(1);
    }
    if !rsq.is_totally_positive() {
        return Ok(0);
    }
    let factors = factor_in_subring(rsq)?.factors;
    let chars: Vec<i8> = factors
        .iter()
        .map(|(pi, _)| character_of_prime(pi, n))
        .collect::<Result<_, _>>()?;
    // Odometer over exponent tuples 0 ≤ e_i ≤ t_i.
    let mut exps = vec![0u32; factors.len()];
    let mut sum: i64 = 0;
    loop {
        let mut term: i64 = 1;
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                term *= chars[i] as i64;
            }
        }
        sum += term;
        // Advance the odometer; carry past the last digit means done.
        let mut i = 0;
        loop {
            if i == exps.len() {
                assert!(sum >= 0, "character sum must be nonnegative");
                return Ok(shell_prefactor(n)? * sum as u64);
            }
            if exps[i] < factors[i].1 {
                exps[i] += 1;
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// The set of module points at a given squared radius.
#[derive(Debug, Clone)]
pub struct ShellSet {
    pub rsq: QuadInt,
    pub n: u32,
    pub totally_positive: bool,
    pub points: Vec<CycInt>,
}

impl ShellSet {
    pub fn count(&self) -> usize {
        self.points.len()
    }
}

/// Geometric route to the shell: enumerates z ∈ Z[ξ_n] with |z|² = r² as
/// integer vectors of the quartic trace form, then filters exactly.
///
/// The trace Gram matrix A_ij = ½·Tr_{K/Q}(ξ^{i−j}) pins only the trace of
/// |z|², so candidates are re-checked against the full squared modulus.
pub fn enumerate_shell(rsq: &QuadInt, n: u32) -> Result<ShellSet, Error> {
    check_ring(rsq, n)?;
    let totally_positive = rsq.is_totally_positive();
    let mut shell = ShellSet {
        rsq: rsq.clone(),
        n,
        totally_positive,
        points: Vec::new(),
    };
    if rsq.is_zero() {
        shell.points.push(CycInt::zero(n));
        return Ok(shell);
    }
    if !totally_positive {
        return Ok(shell);
    }
    let a = rsq.a.to_i64().ok_or_else(|| too_large(&rsq.a))?;
    let b = rsq.b.to_i64().ok_or_else(|| too_large(&rsq.b))?;
    // ½·Tr_{K/Q} of the trace form, except for n = 5 where the full trace
    // keeps the matrix integral; the target scales accordingly.
    let (gram, target): (Vec<Vec<i64>>, i64) = match n {
        8 => (
            vec![
                vec![2, 0, 0, 0],
                vec![0, 2, 0, 0],
                vec![0, 0, 2, 0],
                vec![0, 0, 0, 2],
            ],
            2 * a,
        ),
        12 => (
            vec![
                vec![2, 0, 1, 0],
                vec![0, 2, 0, 1],
                vec![1, 0, 2, 0],
                vec![0, 1, 0, 2],
            ],
            2 * a,
        ),
        _ => (
            vec![
                vec![4, -1, -1, -1],
                vec![-1, 4, -1, -1],
                vec![-1, -1, 4, -1],
                vec![-1, -1, -1, 4],
            ],
            2 * (2 * a + b),
        ),
    };
    for c in integer_form_shell(&gram, target)? {
        let z = CycInt::from_i64s([c[0], c[1], c[2], c[3]], n);
        if z.modulus_sq() == *rsq {
            shell.points.push(z);
        }
    }
    Ok(shell)
}

fn too_large(v: &BigInt) -> Error {
    Error::InvalidArgument(format!("coefficient {v} too large for shell enumeration"))
}
