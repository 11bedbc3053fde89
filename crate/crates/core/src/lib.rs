//! Peak state transfer for continuous-time quantum walks on weighted graphs.
//!
//! The walk on a symmetric matrix `M` is `U(t) = e^{itM}`. For vertices
//! `u`, `v` the spectral bound `B(M)_{v,u} = sum_r |(E_r)_{v,u}|` caps
//! `|U(t)_{v,u}|` for every `t`; [`peak::check_peak`] decides whether the cap
//! is attained and, if so, returns the earliest time.

pub mod dynamics;
pub mod enumerate;
pub mod error;
pub mod families;
pub mod graph;
pub mod graph6;
pub mod named;
pub mod peak;
pub mod spectral;
pub mod survey;

pub use error::{Error, Result};
pub use graph::{MatrixKind, WeightedGraph};
pub use peak::{check_peak, check_peak_laplacian, PeakAnalyzer, PeakOptions, PeakResult, Verdict};
pub use spectral::{decompose, SpectralDecomposition};
