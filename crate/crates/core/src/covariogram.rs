//! Covariograms of the three window shapes: intervals, Euclidean balls and
//! the regular octagon.
//!
//! The covariogram of a body Ω at shift t is vol(Ω ∩ (Ω − t)) / vol(Ω),
//! normalised so its value at t = 0 is one. For an interval it is a tent
//! function; for a ball of any dimension it depends only on u = s/(2R) and
//! has a closed form in Chebyshev polynomials with exact rational
//! coefficients; for the regular octagon with unit edge and edge midpoints
//! on the axes it is a piecewise quadratic over Q(√2), evaluated exactly
//! after folding the shift into the fundamental sector 0 ≤ α ≤ π/8.
//!
//! Every closed form has an independent check route: the ball formulas are
//! compared against adaptive quadrature of ∫ sinᵐ, and the octagon branches
//! are pinned by boundary-agreement and frozen-value tests.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;
use std::collections::HashMap;
use std::f64::consts::{PI, SQRT_2};
use std::sync::{Mutex, OnceLock};

use crate::cyclotomic::ExactPoint2;
use crate::error::Error;
use crate::quad::{Basis, QuadRat};

// ---------------------------------------------------------------------------
// Interval.
// ---------------------------------------------------------------------------

/// Covariogram of an interval of the given exact length: max(0, 1 − |t|/L).
pub fn interval_covariogram(length: &QuadRat, shift: &QuadRat) -> QuadRat {
    assert!(length.sign_exact() == 1, "interval length must be positive");
    let ratio = shift.abs() / length;
    let one = QuadRat::one(ratio.basis());
    if ratio >= one {
        QuadRat::zero(ratio.basis())
    } else {
        one - ratio
    }
}

pub fn interval_covariogram_f64(length: f64, shift: f64) -> f64 {
    (1.0 - shift.abs() / length).max(0.0)
}

// ---------------------------------------------------------------------------
// Balls: closed form with exact rational Chebyshev coefficients.
// ---------------------------------------------------------------------------

fn chebyshev_t(k: usize, u: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, u);
    if k == 0 {
        return 1.0;
    }
    for _ in 1..k {
        (prev, cur) = (cur, 2.0 * u * cur - prev);
    }
    cur
}

fn chebyshev_u(k: usize, u: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * u);
    if k == 0 {
        return 1.0;
    }
    for _ in 1..k {
        (prev, cur) = (cur, 2.0 * u * cur - prev);
    }
    cur
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Closed-form coefficient table for one dimension, built exactly and then
/// rounded once to f64.
enum BallForm {
    /// m = 2ℓ: f(u) = pref/π · (central·acos u + √(1−u²) Σₖ cₖ U_{2k−1}(u)).
    Even { pref: f64, central: f64, coeffs: Vec<f64> },
    /// m = 2ℓ+1: f(u) = 1 − pref · Σₖ cₖ T_{2k+1}(u).
    Odd { pref: f64, coeffs: Vec<f64> },
}

fn build_form(dim: u32) -> BallForm {
    let rat = |n: BigInt, d: BigInt| Ratio::new(n, d).to_f64().unwrap();
    if dim % 2 == 0 {
        let l = (dim / 2) as u64;
        let pref = rat(BigInt::from(2) * factorial(l).pow(2), factorial(2 * l));
        let central = binomial(2 * l, l).to_f64().unwrap();
        let coeffs = (1..=l)
            .map(|k| {
                let sign = if k % 2 == 1 { -1 } else { 1 };
                rat(BigInt::from(sign) * binomial(2 * l, l - k), BigInt::from(k))
            })
            .collect();
        BallForm::Even { pref, central, coeffs }
    } else {
        let l = (dim / 2) as u64; // dim = 2ℓ+1
        let pref = rat(
            factorial(2 * l + 2),
            factorial(l + 1) * factorial(l) * (BigInt::one() << (4 * l + 1)),
        );
        let coeffs = (0..=l)
            .map(|k| {
                let sign = if k % 2 == 1 { -1 } else { 1 };
                rat(
                    BigInt::from(sign) * binomial(2 * l + 1, l - k),
                    BigInt::from(2 * k + 1),
                )
            })
            .collect();
        BallForm::Odd { pref, coeffs }
    }
}

fn ball_form(dim: u32) -> &'static BallForm {
    static CACHE: OnceLock<Mutex<HashMap<u32, &'static BallForm>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    *map.entry(dim).or_insert_with(|| Box::leak(Box::new(build_form(dim))))
}

fn check_ball_args(dim: u32, radius: f64) -> Result<(), Error> {
    if dim == 0 {
        return Err(Error::BadDimension(dim));
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    Ok(())
}

/// Covariogram of the m-dimensional ball of the given radius at center
/// distance s, via the closed form in Chebyshev polynomials.
pub fn ball_covariogram(dim: u32, radius: f64, s: f64) -> Result<f64, Error> {
    check_ball_args(dim, radius)?;
    let u = s.abs() / (2.0 * radius);
    if u >= 1.0 {
        return Ok(0.0);
    }
    Ok(match ball_form(dim) {
        BallForm::Even { pref, central, coeffs } => {
            let series: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * chebyshev_u(2 * (i + 1) - 1, u))
                .sum();
            pref / PI * (central * u.acos() + (1.0 - u * u).sqrt() * series)
        }
        BallForm::Odd { pref, coeffs } => {
            let series: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * chebyshev_t(2 * i + 1, u))
                .sum();
            1.0 - pref * series
        }
    })
}

/// The planar case with unit radius, written out directly: the overlap area
/// of two unit disks at distance s, normalised by π. Kept separate from the
/// general closed form so the two can be checked against each other.
pub fn euclids_hat(s: f64) -> f64 {
    let u = s / 2.0;
    if u >= 1.0 {
        return 0.0;
    }
    (2.0 / std::f64::consts::PI) * (u.acos() - u * (1.0 - u * u).sqrt())
}

// ---------------------------------------------------------------------------
// Balls: independent quadrature route.
// ---------------------------------------------------------------------------

/// Absolute tolerance of the adaptive Simpson integration. The integrands
/// sinᵐ are smooth on a bounded interval, so the estimate is conservative.
const QUAD_TOL: f64 = 1e-12;

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, ml, fml) = simpson(f, a, fa, m, fm);
        let (right, mr, fmr) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, left, ml, fml, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, right, mr, fmr, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 40)
}

/// Quadrature prefactor 2·Γ(m/2+1) / (√π·Γ((m+1)/2)), cached per dimension.
fn quadrature_prefactor(dim: u32) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<u32, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    *map.entry(dim).or_insert_with(|| {
        let m = dim as f64;
        (2.0_f64.ln() + ln_gamma(m / 2.0 + 1.0) - 0.5 * PI.ln() - ln_gamma((m + 1.0) / 2.0)).exp()
    })
}

/// Ball covariogram by direct integration: pref · ∫₀^{acos u} sinᵐ α dα.
/// Shares nothing with the closed form beyond the geometry itself.
pub fn ball_covariogram_quadrature(dim: u32, radius: f64, s: f64) -> Result<f64, Error> {
    check_ball_args(dim, radius)?;
    let u = s.abs() / (2.0 * radius);
    if u >= 1.0 {
        return Ok(0.0);
    }
    let m = dim as f64;
    let integral = adaptive_simpson(&|alpha: f64| alpha.sin().powf(m), 0.0, u.acos(), QUAD_TOL);
    Ok(quadrature_prefactor(dim) * integral)
}

// ---------------------------------------------------------------------------
// Regular octagon (unit edge, edge midpoints on the coordinate axes).
// ---------------------------------------------------------------------------

/// A point of the closed fundamental sector 0 ≤ α ≤ π/8 of the octagon's
/// symmetry group, with exact coordinates in Q(√2).
///
/// Invariant: x ≥ 0 and 0 ≤ y ≤ x·(√2−1), checked at construction
/// (tan(π/8) = √2−1 exactly).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorPoint {
    x: QuadRat,
    y: QuadRat,
}

impl SectorPoint {
    pub fn new(x: QuadRat, y: QuadRat) -> Result<Self, Error> {
        if x.basis() != Basis::Rt2 || y.basis() != Basis::Rt2 {
            return Err(Error::InvalidSector("coordinates must lie in Q(√2)".into()));
        }
        let tan_pi8 = QuadRat::from_i64s(-1, 1, 1, Basis::Rt2);
        if y.sign_exact() < 0 || x.sign_exact() < 0 || y > &x * &tan_pi8 {
            return Err(Error::InvalidSector(format!(
                "({}, {}) is outside 0 ≤ y ≤ x·tan(π/8)",
                x, y
            )));
        }
        Ok(SectorPoint { x, y })
    }

    pub fn x(&self) -> &QuadRat {
        &self.x
    }

    pub fn y(&self) -> &QuadRat {
        &self.y
    }

    /// Polar angle within the sector, in [0, π/8].
    pub fn angle(&self) -> f64 {
        self.y.to_f64().atan2(self.x.to_f64())
    }

    pub fn radius(&self) -> f64 {
        self.x.to_f64().hypot(self.y.to_f64())
    }
}

/// Folds an exact point of the plane into the fundamental sector using the
/// dihedral symmetries of the octagon: reflections in the axes (coordinate
/// signs), the diagonal (swap), and the α = π/8 line.
pub fn reduce_to_sector(p: &ExactPoint2) -> SectorPoint {
    let mut u = p.u.abs();
    let mut v = p.v.abs();
    if v > u {
        std::mem::swap(&mut u, &mut v);
    }
    // Now 0 ≤ v ≤ u, i.e. α ∈ [0, π/4]; one reflection in α = π/8 finishes.
    let tan_pi8 = QuadRat::from_i64s(-1, 1, 1, Basis::Rt2);
    if v > &u * &tan_pi8 {
        let half_rt2 = QuadRat::from_i64s(0, 1, 2, Basis::Rt2);
        let (nu, nv) = ((&u + &v) * &half_rt2, (&u - &v) * &half_rt2);
        u = nu;
        v = nv;
    }
    SectorPoint::new(u, v).expect("fold lands in the sector")
}

fn lam() -> QuadRat {
    QuadRat::from_i64s(1, 1, 1, Basis::Rt2) // 1 + √2
}

/// Covariogram of the octagon at a sector point, exactly over Q(√2).
///
/// Piecewise quadratic with four branches separated by the lines x = λ,
/// x = λ − y and x = 1 + y, λ = 1+√2; ties go to the branch of lower case
/// index. The support is exactly x < λ.
pub fn octagon_covariogram(p: &SectorPoint) -> QuadRat {
    let (x, y) = (&p.x, &p.y);
    let lam = lam();
    let one = QuadRat::one(Basis::Rt2);
    if *x >= lam {
        return QuadRat::zero(Basis::Rt2);
    }
    let half = QuadRat::from_i64s(1, 0, 2, Basis::Rt2);
    let quarter = QuadRat::from_i64s(1, 0, 4, Basis::Rt2);
    let lam_m2 = QuadRat::from_i64s(-1, 1, 1, Basis::Rt2); // λ − 2 = √2 − 1
    if *x >= &lam - y {
        // Corner overlap near the far vertex.
        return &lam_m2 * (x + y) * x * &half + &lam * (&one - x) * &half + (&one - y) * &half;
    }
    if *x >= &one + y {
        return &lam_m2 * (x * x - y * y) * &quarter
            - QuadRat::from_i64s(0, 1, 2, Basis::Rt2) * x
            + QuadRat::from_i64s(3, 1, 4, Basis::Rt2);
    }
    &lam_m2 * (x - y - &one) * y * &half - x * &half + one
}

/// True iff the covariogram is strictly positive at the sector point,
/// decided exactly: the support is x < λ.
pub fn octagon_covariogram_positive(p: &SectorPoint) -> bool {
    p.x < lam()
}

/// Floating-point evaluation at an arbitrary point of the plane: numeric
/// sector fold, then the same four branches in f64.
pub fn octagon_covariogram_f64(u: f64, v: f64) -> f64 {
    let (mut x, mut y) = (u.abs(), v.abs());
    if y > x {
        std::mem::swap(&mut x, &mut y);
    }
    let tan_pi8 = SQRT_2 - 1.0;
    if y > x * tan_pi8 {
        let (nx, ny) = ((x + y) * SQRT_2 / 2.0, (x - y) * SQRT_2 / 2.0);
        x = nx;
        y = ny;
    }
    let lam = 1.0 + SQRT_2;
    if x >= lam {
        0.0
    } else if x >= lam - y {
        (lam - 2.0) * (x + y) * x / 2.0 + lam * (1.0 - x) / 2.0 + (1.0 - y) / 2.0
    } else if x >= 1.0 + y {
        (lam - 2.0) * (x * x - y * y) / 4.0 - SQRT_2 * x / 2.0 + (3.0 + SQRT_2) / 4.0
    } else {
        (lam - 2.0) * (x - y - 1.0) * y / 2.0 - x / 2.0 + 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn qr(a: i64, b: i64, den: i64) -> QuadRat {
        QuadRat::from_i64s(a, b, den, Basis::Rt2)
    }

    fn sector(x: QuadRat, y: QuadRat) -> SectorPoint {
        SectorPoint::new(x, y).unwrap()
    }

    #[test]
    fn interval_tent() {
        let tau = QuadRat::from_i64s(0, 1, 1, Basis::Tau);
        let one = QuadRat::one(Basis::Tau);
        assert_eq!(interval_covariogram(&tau, &QuadRat::zero(Basis::Tau)), one);
        // 1 − 1/τ = 1 − (τ−1) = 2 − τ.
        assert_eq!(interval_covariogram(&tau, &one), QuadRat::from_i64s(2, -1, 1, Basis::Tau));
        assert_eq!(
            interval_covariogram(&tau, &QuadRat::from_i64s(0, 2, 1, Basis::Tau)),
            QuadRat::zero(Basis::Tau)
        );
        assert_eq!(interval_covariogram_f64(2.0, -1.0), 0.5);
    }

    #[test]
    fn ball_frozen_values() {
        // Dimension 1 is the tent; 2 and 3 at s = R = 1 are classical.
        assert!((ball_covariogram(1, 1.0, 0.5).unwrap() - 0.75).abs() < 1e-15);
        let hat = 2.0 / 3.0 - 3.0_f64.sqrt() / (2.0 * PI);
        assert!((euclids_hat(1.0) - hat).abs() < 1e-14);
        assert!((ball_covariogram(3, 1.0, 1.0).unwrap() - 5.0 / 16.0).abs() < 1e-14);
        assert_eq!(ball_covariogram(2, 1.0, 2.0).unwrap(), 0.0);
        assert_eq!(ball_covariogram(2, 1.0, 0.0).unwrap(), 1.0);
        assert!(ball_covariogram(0, 1.0, 0.5).is_err());
        assert!(ball_covariogram(2, 0.0, 0.5).is_err());
    }

    #[test]
    fn closed_form_matches_quadrature() {
        // The two routes share no code: rational Chebyshev coefficients vs
        // log-gamma prefactor and adaptive Simpson. Tolerance leaves room
        // for quadrature error accumulation over the recursion.
        for dim in 1..=8 {
            for radius in [0.7, 1.0, 1.3] {
                for i in 0..=40 {
                    let s = 2.0 * radius * i as f64 / 40.0;
                    let a = ball_covariogram(dim, radius, s).unwrap();
                    let b = ball_covariogram_quadrature(dim, radius, s).unwrap();
                    assert!((a - b).abs() < 1e-10, "dim={dim} R={radius} s={s}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn ball_is_monotone_in_s() {
        for dim in [1u32, 2, 3, 4, 7] {
            let mut prev = f64::INFINITY;
            for i in 0..=50 {
                let s = 2.2 * i as f64 / 50.0;
                let f = ball_covariogram(dim, 1.0, s).unwrap();
                assert!(f <= prev + 1e-14);
                assert!((0.0..=1.0).contains(&f));
                prev = f;
            }
        }
    }

    #[test]
    fn sector_reduction_examples() {
        // (1+√2/2, −√2/2) folds to ((2+√2)/2, √2/2) on the sector edge.
        let p = ExactPoint2 { u: qr(2, 1, 2), v: qr(0, -1, 2) };
        let s = reduce_to_sector(&p);
        assert_eq!((s.x(), s.y()), (&qr(2, 1, 2), &qr(0, 1, 2)));
        // Folding is idempotent.
        let again = reduce_to_sector(&ExactPoint2 { u: s.x().clone(), v: s.y().clone() });
        assert_eq!(&again, &s);
        // A plain axis point stays put.
        let p = ExactPoint2 { u: qr(0, 1, 1), v: QuadRat::zero(Basis::Rt2) };
        assert_eq!(reduce_to_sector(&p).x(), &qr(0, 1, 1));
    }

    #[test]
    fn sector_validation() {
        assert!(SectorPoint::new(qr(1, 0, 1), qr(1, 0, 1)).is_err()); // above π/8
        assert!(SectorPoint::new(qr(1, 0, 1), qr(-1, 0, 4)).is_err()); // below axis
        assert!(SectorPoint::new(qr(1, 0, 1), qr(-1, 1, 1)).is_ok()); // exactly on π/8
        assert!(SectorPoint::new(QuadRat::one(Basis::Tau), QuadRat::zero(Basis::Tau)).is_err());
    }

    #[test]
    fn octagon_frozen_sector_values() {
        // Values derived by hand from the four branch polynomials; each pair
        // (point, value) pins one branch at one radius that also appears in
        // the shelling tables.
        let cases = [
            (sector(qr(2, 1, 2), qr(0, 1, 2)), qr(2, -1, 4)),  // triple point, far branch
            (sector(qr(1, 0, 1), qr(0, 0, 1)), qr(1, 0, 2)),   // middle branch, axis
            (sector(qr(0, 1, 1), qr(0, 0, 1)), qr(-3, 3, 4)),  // middle branch, axis
            (sector(qr(2, 1, 2), qr(2, -1, 2)), qr(5, -3, 4)), // middle branch, interior
            (sector(qr(0, 1, 2), qr(2, -1, 2)), qr(18, -11, 4)), // near branch
            (sector(qr(2, 0, 1), qr(0, 0, 1)), qr(-1, 1, 4)),  // middle branch, axis
            (sector(qr(0, 3, 2), qr(0, 1, 2)), qr(-7, 5, 2)),  // far branch
        ];
        for (p, expected) in cases {
            assert_eq!(octagon_covariogram(&p), expected, "at ({}, {})", p.x(), p.y());
        }
        // Value at the origin is 1; support boundary gives 0.
        assert_eq!(octagon_covariogram(&sector(qr(0, 0, 1), qr(0, 0, 1))), QuadRat::one(Basis::Rt2));
        assert_eq!(octagon_covariogram(&sector(qr(1, 1, 1), qr(0, 0, 1))), QuadRat::zero(Basis::Rt2));
        assert!(!octagon_covariogram_positive(&sector(qr(1, 1, 1), qr(0, 0, 1))));
        assert!(octagon_covariogram_positive(&sector(qr(2, 1, 2), qr(0, 1, 2))));
    }

    #[test]
    fn octagon_branches_agree_on_their_boundaries() {
        // Evaluate the two adjacent branch polynomials directly on a grid of
        // exact boundary points; they must agree exactly as elements of
        // Q(√2), which also proves the tie-break direction is harmless.
        let lam = qr(1, 1, 1);
        let one = QuadRat::one(Basis::Rt2);
        let half = qr(1, 0, 2);
        let quarter = qr(1, 0, 4);
        let lam_m2 = qr(-1, 1, 1);
        let case2 = |x: &QuadRat, y: &QuadRat| {
            &lam_m2 * (x + y) * x * &half + &lam * (&one - x) * &half + (&one - y) * &half
        };
        let case3 = |x: &QuadRat, y: &QuadRat| {
            &lam_m2 * (x * x - y * y) * &quarter - qr(0, 1, 2) * x + qr(3, 1, 4)
        };
        let case4 = |x: &QuadRat, y: &QuadRat| &lam_m2 * (x - y - &one) * y * &half - x * &half + &one;
        for j in 0..=19i64 {
            // y ranges over [0, √2/2], the full sector height at these lines.
            let y = qr(0, j, 38); // j·√2/38 ≤ √2/2
            let x_mid = &one + &y;
            assert_eq!(case3(&x_mid, &y), case4(&x_mid, &y), "x = 1+y, y = {y}");
            let x_far = &lam - &y;
            assert_eq!(case2(&x_far, &y), case3(&x_far, &y), "x = λ−y, y = {y}");
        }
        for j in 0..=10i64 {
            let y = qr(j, 0, 10);
            // On the support boundary the far branch vanishes identically.
            assert_eq!(case2(&lam, &y), QuadRat::zero(Basis::Rt2), "x = λ, y = {y}");
        }
    }

    #[test]
    fn float_and_exact_octagon_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..2000 {
            let p = ExactPoint2 {
                u: qr(rng.random_range(-40..=40), rng.random_range(-40..=40), rng.random_range(1..=16)),
                v: qr(rng.random_range(-40..=40), rng.random_range(-40..=40), rng.random_range(1..=16)),
            };
            let exact = octagon_covariogram(&reduce_to_sector(&p)).to_f64();
            let float = octagon_covariogram_f64(p.u.to_f64(), p.v.to_f64());
            assert!((exact - float).abs() < 1e-9, "at ({}, {})", p.u, p.v);
        }
    }

    #[test]
    fn octagon_covariogram_is_within_unit_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..2000 {
            let p = ExactPoint2 {
                u: qr(rng.random_range(-30..=30), rng.random_range(-30..=30), rng.random_range(1..=8)),
                v: qr(rng.random_range(-30..=30), rng.random_range(-30..=30), rng.random_range(1..=8)),
            };
            let f = octagon_covariogram(&reduce_to_sector(&p));
            assert!(f.sign_exact() >= 0);
            assert!(f <= QuadRat::one(Basis::Rt2));
        }
    }
}
