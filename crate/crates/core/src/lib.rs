//! Exact arithmetic for linearly recurrent integer and rational sequences.
//!
//! The crate provides, over the rationals and with no floating-point anywhere
//! in a certified path:
//!
//! * dense polynomial arithmetic, resultants, cyclotomic polynomials;
//! * linear recurrences and rational generating functions, with conversions
//!   both ways, Berlekamp–Massey recovery, and decimated sections;
//! * zero-set structure of a recurrent sequence (arithmetic progressions of
//!   zeros plus sporadic zeros) and proper-power decompositions of rational
//!   series whose prime-index coefficients eventually vanish;
//! * certified complex root isolation for locating minimum-modulus poles and
//!   the root-of-unity relations among them;
//! * a prime-field layer (matrix orders, cycle detection) feeding a
//!   refutation engine: machine-checkable certificates that the divisor-sum
//!   transform of a recurrent sequence is *not* linearly recurrent;
//! * a small expression parser and a JSON-speaking command-line driver.
pub mod error;
pub mod rat;
pub mod poly;
pub mod arith;
pub mod cli;
pub mod cyclotomic;
pub mod decompose;
pub mod dominant;
pub mod expr;
pub mod jsonio;
pub mod lambert;
pub mod modp;
pub mod recurrence;
pub mod refute;
pub mod roots;
pub mod zeros;
