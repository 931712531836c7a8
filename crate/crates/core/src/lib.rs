//! Exact shelling functions of cut-and-project point sets.
//!
//! A cut-and-project set is built from a lattice sitting in a product of a
//! physical and an internal space: the points of the set are the projections
//! to physical space of those lattice points whose internal projection falls
//! inside a chosen window. For the planar sets with eight-, twelve- and
//! five-fold symmetry the lattice is the ring of cyclotomic integers Z[ξ_n],
//! n ∈ {8, 12, 5}, and the two projections are algebraic conjugates, so every
//! metric question about the point set becomes a question about arithmetic in
//! a real quadratic ring.
//!
//! This crate computes, exactly where the mathematics is exact:
//!
//! * central shelling numbers: how many points of the set lie at distance r
//!   from the origin, via prime splitting in the relevant quadratic ring
//!   ([`central_count`], [`character_sum`]);
//! * covariograms of intervals, Euclidean balls and the regular octagon
//!   ([`covariogram`] module), including closed forms with exact rational
//!   coefficients in Chebyshev polynomials;
//! * averaged shelling numbers, which weight each shell point by the overlap
//!   volume of the window with a translate of itself ([`averaged`] module);
//! * finite patches of the point sets themselves, with exact coordinates
//!   ([`modelset`] module);
//! * empirical estimates of all of the above by direct counting and Monte
//!   Carlo integration, used as independent cross-checks ([`empirical`]
//!   module), and a suite of self-verification checks ([`verify`] module).
//!
//! Exact scalars are elements of Z[√2], Z[√3] or Z[τ] ([`QuadInt`]) and their
//! fraction fields ([`QuadRat`]); cyclotomic integers are stored on the power
//! basis ([`CycInt`]). All of these carry arbitrary-precision coefficients.

pub mod averaged;
pub mod central;
pub mod covariogram;
pub mod cyclotomic;
pub mod empirical;
pub mod enumerate;
mod error;
pub mod modelset;
pub mod quad;
pub mod splitting;
pub mod verify;
pub mod window;

pub use error::Error;
pub use quad::{parse_quadint, parse_quadrat, Basis, QuadInt, QuadRat};
pub use cyclotomic::{parse_cycint, CycInt, ExactPoint2};
pub use central::{central_count, character_sum, enumerate_shell, ShellSet};
pub use splitting::{classify_rational_prime, factor_in_subring, Behaviour, Factorisation, PrimeClass};
