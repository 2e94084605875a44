//! Exact-arithmetic q-series and level-one modular forms engine for partition
//! congruences.
//!
//! The crate computes with truncated formal power series over exact coefficient
//! rings (arbitrary-precision integers, rationals, integers mod m) and layers on
//! top of them:
//!
//! - [`series`]: ring-generic truncated q-series arithmetic (products, inversion,
//!   the pentagonal series for `E(q) = prod (1-q^n)`, AP extraction, sieves).
//! - [`oracle`]: ground-truth partition statistics by enumeration and dynamic
//!   programming — p(n), rank/crank counts, moments, spt(n).
//! - [`forms`]: level-one modular and quasimodular forms as exact combinations of
//!   E2, E4, E6, Delta; bases, exact linear algebra, Sturm-style verification,
//!   integer-weight Hecke operators and the Chua lift.
//! - [`moments`]: rank and crank moment generating functions, the T_{2k} basis,
//!   the exact-rational elimination pipeline producing SPT congruences mod ell,
//!   and the mod-11 rank moment suite.
//! - [`hecke`]: Hecke operators T(Q^2) on eta-quotient forms eta^r(24 tau) F(24 tau),
//!   eigenvalue scans and explicit arithmetic-progression congruence certificates
//!   such as spt(11 * 19^4 n + 22006) == 0 (mod 11).
//! - [`longrange`]: sparse mod-ell coefficient machinery used to sample certificate
//!   instances at indices around 10^7.
//!
//! The `qcong` binary (and the runnable examples under `examples/`) drive the
//! same library entry points.

pub mod cache;
pub mod cli;
pub mod error;
pub mod forms;
pub mod hecke;
pub mod linalg;
pub mod longrange;
pub mod moments;
pub mod numt;
pub mod oracle;
pub mod report;
pub mod ring;
pub mod series;

pub use error::QError;
pub use ring::{IntRing, ModRing, RatRing, Ring};
pub use series::{QSeries, SieveSpec};
