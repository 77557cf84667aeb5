//! Exact ramification invariants of extensions of valuations.
//!
//! * [`ordgroup`]: finitely generated subgroups of `Q^r` with the lex order,
//!   subgroup index, coset representatives and the initial index.
//! * [`raminv`]: the invariants `e, f, ε, d` of one extension and the
//!   finite-type verdict (`d = 1` and `ε = e`).
//! * [`localsplit`]: extensions of a discrete rank-one valuation to
//!   `K[x]/(g)` via Newton polygons and MacLane key polynomials.
//! * [`monoval`]: rank-two lexicographic monomial valuations on `k(x, y)` and
//!   their tame binomial extensions.
//! * [`gf`]: finite fields built as towers of simple extensions.

pub mod gf;
mod intmat;

pub mod localsplit;
pub mod monoval;
pub mod ordgroup;
pub mod raminv;
