//! Exact arithmetic for rank-two Drinfeld modules over finite fields, and
//! four algorithms for their Frobenius trace and norm.
//!
//! The building blocks are layered bottom-up:
//!
//! - [`fq`]: the prime field `F_q` (machine-word prime moduli),
//! - [`poly`]: dense univariate polynomials over `F_q`,
//! - [`moduli`]: irreducibility testing, small-modulus enumeration, CRT,
//! - [`matrix`]: dense linear algebra over `F_q` (Hessenberg characteristic
//!   polynomial, Krylov minimal polynomial, Hankel systems),
//! - [`mod@berlekamp_massey`]: minimal generators of linearly recurrent
//!   sequences,
//! - [`ext`]: the extension field `L = F_q[z]/f` with its Frobenius engine,
//! - [`skew`]: the twisted polynomial ring `L<tau>` with `tau u = u^q tau`,
//! - [`drinfeld`]: the rank-two module `phi_x = gamma(x) + g tau + delta tau^2`
//!   and its derived data,
//! - [`solver`]: the characteristic-polynomial algorithms themselves.

pub mod berlekamp_massey;
pub mod drinfeld;
pub mod error;
pub mod ext;
pub mod fq;
pub mod matrix;
pub mod moduli;
pub mod poly;
pub mod skew;
pub mod solver;

pub use berlekamp_massey::berlekamp_massey;
pub use drinfeld::{DrinfeldModule, PhiPowerTable};
pub use error::Error;
pub use ext::{ExtElem, ExtFieldCtx, FrobeniusBackend};
pub use fq::Fq;
pub use matrix::FqMatrix;
pub use poly::FqPoly;
pub use skew::SkewPoly;
pub use solver::{
    solve_deterministic, solve_gekeler, solve_monte_carlo, solve_oracle, verify_charpoly,
    Algorithm, CharPolyResult,
};
