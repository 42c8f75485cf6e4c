//! Exact computation with Dolgachev–Pinkham–Demazure (DPD) presentations of
//! normal affine C*-surfaces.
//!
//! A C*-action on a normal affine surface `V = Spec A` is the same thing as a
//! Z-grading of the coordinate ring `A`. Such gradings are encoded by Q-divisor
//! data on a curve (the DPD presentation): a single divisor `D` in the elliptic
//! and parabolic cases, a pair `(D_+, D_-)` with `D_+ + D_- <= 0` in the
//! hyperbolic case. From this data the library computes, with exact rational
//! arithmetic throughout:
//!
//! * graded pieces and their canonical generators ([`dpd`]),
//! * the Makar-Limanov class, multiple fibers, smoothness, divisor class group
//!   and canonical class ([`dpd`]),
//! * recognition of the toric models `V_{d,e}` and lattice-pair normal forms
//!   ([`toric`]),
//! * a full classification verdict (`C*xC*`, `A^1xC*`, `V_{d,e}`,
//!   `P^1xP^1` minus the diagonal, `P^2` minus a quadric, or other)
//!   together with equivalence witnesses ([`classify`]),
//! * a symbolic derivation calculus on `Q[x,y]` and `Q[t,u,u^-1]`: brackets,
//!   locally nilpotent derivations, exponentials, Jordan–Chevalley
//!   decomposition and the degree-lowering normalization loop that conjugates
//!   a semisimple derivation back to the grading ([`deriv`]).
//!
//! All values are immutable and all operations are pure functions, so
//! everything can be shared freely across threads.

pub mod classify;
pub mod deriv;
pub mod divisor;
pub mod dpd;
pub mod exactmath;
pub mod schema;
pub mod toric;

pub use exactmath::{parse_rational, rational_string};
