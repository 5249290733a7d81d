//! Exact computations for quantized enveloping algebras of symmetrizable
//! Kac-Moody type: q-arithmetic, root data, word bases of the Borel halves,
//! the Drinfeld pairing, Verma modules and truncated characters.

pub mod borel;
pub mod charring;
pub mod drinfeld;
pub mod linalg;
pub mod qarith;
pub mod rootdata;
pub mod verma;

pub use borel::{Borel, BorelError, FreeWord, WordBasis, WordComb};
pub use charring::{CharError, CharSeries, WindowReport};
pub use drinfeld::{Drinfeld, DrinfeldError, PairingData, RadicalReport, SpecPoint};
pub use qarith::{certify_unit, LaurentInt, QError, RatQ, UnitCertificate};
pub use rootdata::{CartanDatum, DatumError, RootVec, Weight};
pub use verma::{CasimirReport, GramReport, Verma, VermaError};
