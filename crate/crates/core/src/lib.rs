//! Non-diagonal Padé type approximants to systems of G-functions, the
//! derivation iteration and zero-estimate checks built on them, the
//! explicit constant chain for rational approximation of G-values, and
//! certified checks of the resulting Diophantine inequalities, digit
//! repetition bounds and continued-fraction corollaries.

pub mod exact;
pub mod gfun;
pub mod constants;
pub mod derivation;
pub mod digits;
pub mod dioph;
pub mod pade;
pub mod quad;
pub mod report;
pub mod suite;
