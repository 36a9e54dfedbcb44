pub mod chain;
pub mod darboux;
pub mod direct;
pub mod error;
pub mod hn;
pub mod inverse;
pub mod io;
pub mod metrics;
pub mod ode;
mod par;
pub mod poly;
pub mod roots;
pub mod space;
pub mod study;

pub use direct::{complete_finite_data, remainders, Problem, SpectralData};
pub use error::{Error, Result};
pub use hn::{CoeffVector, Pole, PolyFraction, RationalHN, ThetaCase};
pub use ode::{integrate, Endpoint, SolutionTrace};
pub use space::{MeanZeroFunction, WeightedSequence};
