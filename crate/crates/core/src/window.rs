//! Acceptance windows for the cut-and-project construction: an interval for
//! the chain geometries, a Euclidean ball, or the regular octagon.
//!
//! The interval and octagon windows are half-open so a module point whose
//! internal image lands on the boundary is counted exactly once: the
//! interval keeps its lower endpoint, and the octagon keeps four of its
//! eight edges (strict inequality on the half-planes with outward normals at
//! angles 0, π/4, π/2, 3π/4; non-strict on the opposite four). Membership
//! on these exact windows is decided entirely in Q(√2) or the interval's
//! field; the ball window is a floating-point predicate.

use statrs::function::gamma::ln_gamma;
use std::f64::consts::{PI, SQRT_2};

use crate::cyclotomic::ExactPoint2;
use crate::quad::{Basis, QuadRat};

/// Acceptance window in internal space.
#[derive(Debug, Clone, PartialEq)]
pub enum Window {
    /// Half-open interval [lo, hi) on the internal line.
    Interval { lo: QuadRat, hi: QuadRat },
    /// Euclidean ball; membership is |y| < radius in floating point.
    Ball { dim: u32, radius: f64 },
    /// Regular octagon with unit edge and edge midpoints on the axes.
    Octagon,
}

impl Window {
    pub fn dimension(&self) -> u32 {
        match self {
            Window::Interval { .. } => 1,
            Window::Ball { dim, .. } => *dim,
            Window::Octagon => 2,
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            Window::Interval { lo, hi } => (hi - lo).to_f64(),
            Window::Ball { dim, radius } => ball_volume(*dim, *radius),
            Window::Octagon => octagon_area(),
        }
    }

    /// Radius of the smallest origin-centred ball containing the window.
    pub fn circumradius(&self) -> f64 {
        match self {
            Window::Interval { lo, hi } => lo.to_f64().abs().max(hi.to_f64().abs()),
            Window::Ball { radius, .. } => *radius,
            Window::Octagon => octagon_circumradius_sq().sqrt(),
        }
    }

    /// Floating-point membership test; boundary behaviour is unspecified.
    pub fn contains_f64(&self, y: &[f64]) -> bool {
        match self {
            Window::Interval { lo, hi } => {
                y.len() == 1 && lo.to_f64() <= y[0] && y[0] < hi.to_f64()
            }
            Window::Ball { dim, radius } => {
                y.len() == *dim as usize
                    && y.iter().map(|c| c * c).sum::<f64>() < radius * radius
            }
            Window::Octagon => y.len() == 2 && octagon_contains_f64(y[0], y[1]),
        }
    }
}

/// The window of the Fibonacci chain: [−1, τ−1).
pub fn fibonacci_window() -> Window {
    Window::Interval {
        lo: QuadRat::from_i64s(-1, 0, 1, Basis::Tau),
        hi: QuadRat::from_i64s(-1, 1, 1, Basis::Tau),
    }
}

/// Area of the unit-edge regular octagon: 2(1+√2).
pub fn octagon_area() -> f64 {
    2.0 * (1.0 + SQRT_2)
}

/// Squared distance from the centre to a vertex: (2+√2)/2.
pub fn octagon_circumradius_sq() -> f64 {
    (2.0 + SQRT_2) / 2.0
}

/// Apothem (distance from the centre to an edge): (1+√2)/2.
pub fn octagon_apothem() -> f64 {
    (1.0 + SQRT_2) / 2.0
}

/// Volume of the m-ball of radius R: π^{m/2} R^m / Γ(m/2+1).
pub fn ball_volume(dim: u32, radius: f64) -> f64 {
    let m = dim as f64;
    (0.5 * m * PI.ln() + m * radius.ln() - ln_gamma(0.5 * m + 1.0)).exp()
}

/// Exact half-open membership in the interval [lo, hi).
pub fn interval_contains(lo: &QuadRat, hi: &QuadRat, t: &QuadRat) -> bool {
    lo <= t && t < hi
}

/// Exact half-open membership in the octagon.
///
/// The eight support constraints have value (1+√2)/2 in the directions
/// k·π/4; the diagonal ones are compared after multiplying through by √2,
/// so every comparison happens between elements of Q(√2).
pub fn octagon_contains(p: &ExactPoint2) -> bool {
    let u = &p.u;
    let v = &p.v;
    let h = QuadRat::from_i64s(1, 1, 2, Basis::Rt2); // apothem
    let h2 = QuadRat::from_i64s(1, 1, 1, Basis::Rt2); // 2h = 1+√2
    let rt2 = QuadRat::from_i64s(0, 1, 1, Basis::Rt2);
    // Diagonal constraints: (u±v)/√2 vs h  ⇔  (u±v)·√2 vs 2h.
    let diag_plus = (u + v) * &rt2;
    let diag_minus = (u - v) * &rt2;
    // Strict on the four positive-direction half-planes.
    if !(*u < h && *v < h && diag_plus < h2 && -&diag_minus < h2) {
        return false;
    }
    // Non-strict on the four opposite ones.
    -u <= h && -v <= h && -&diag_plus <= h2 && diag_minus <= h2
}

/// Floating-point octagon membership (boundary ties unspecified).
pub fn octagon_contains_f64(u: f64, v: f64) -> bool {
    let h = octagon_apothem();
    u.abs() < h && v.abs() < h && (u + v).abs() < SQRT_2 * h && (u - v).abs() < SQRT_2 * h
}
