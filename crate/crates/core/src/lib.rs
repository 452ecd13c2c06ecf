//! Distribution of the Manhattan (L1) distance between independent uniform
//! points of the unit hypercube `[0, 1]^n`.
//!
//! * [`metric`]: points and the distance kernel.
//! * [`sampling`]: reproducible, parallel-invariant Monte Carlo draws.
//! * [`analytic`]: closed-form moments, the exact piecewise-polynomial
//!   density, and the Gaussian limit `N(n/3, n/18)`.
//! * [`estimation`]: streaming moments, histograms, Kolmogorov–Smirnov.
//! * [`experiment`]: the dimension sweep and its report.
//! * [`output`] and [`cli`]: files and the command-line front end.

pub mod analytic;
pub mod cli;
pub mod estimation;
pub mod experiment;
pub mod metric;
pub mod output;
pub mod sampling;
