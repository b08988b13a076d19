pub mod error;
pub mod fbm;
pub mod fit;
pub mod lagrangian;
mod linalg;
pub mod model;
mod series;
pub mod simulate;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
pub use series::ComplexSeries;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    mod spectra {}
    #[doc = include_str!("../../../book/src/fitting.md")]
    mod fitting {}
    #[doc = include_str!("../../../book/src/dispersion.md")]
    mod dispersion {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
