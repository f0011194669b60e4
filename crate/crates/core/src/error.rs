//! Crate-wide error type. Parameter rejections carry the violated
//! constraint verbatim so callers can surface it unchanged.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A scalar input is outside its admissible regime.
    Param {
        name: &'static str,
        constraint: &'static str,
        got: f64,
    },
    /// A discrete grid is too coarse or too large for the requested operation.
    Grid(String),
    /// A sampled hypothesis (e.g. "maps the disk into the disk") failed.
    Hypothesis(String),
    /// A constructed solution leaves its target region; carries the abscissa
    /// where the escape happens.
    Escapes { abscissa: f64, bound: f64 },
    /// The winding-number quadrature did not resolve to an integer.
    WindingNotInteger { value_re: f64, value_im: f64 },
    /// The function is too close to zero on the contour for root counting.
    ContourNearZero { min_abs: f64, threshold: f64 },
    /// Newton inversion failed to converge; should not happen in-regime.
    NewtonStalled {
        target_re: f64,
        target_im: f64,
        last_residual: f64,
        iterations: usize,
    },
    /// An argument-principle certificate contradicts the expected root count.
    CertificateMismatch { expected: i64, found: i64 },
    /// The solver must have converged before this operation applies.
    NotConverged(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Param {
                name,
                constraint,
                got,
            } => write!(f, "parameter {name} violates {constraint} (got {got})"),
            Error::Grid(msg) => write!(f, "grid error: {msg}"),
            Error::Hypothesis(msg) => write!(f, "hypothesis failed: {msg}"),
            Error::Escapes { abscissa, bound } => write!(
                f,
                "solution escapes the target disk of radius {bound} at x = {abscissa}"
            ),
            Error::WindingNotInteger { value_re, value_im } => write!(
                f,
                "winding quadrature {value_re}+{value_im}i is not near an integer; raise n_samples"
            ),
            Error::ContourNearZero { min_abs, threshold } => write!(
                f,
                "|f| = {min_abs} on the contour is below the floor {threshold}; a root is too close"
            ),
            Error::NewtonStalled {
                target_re,
                target_im,
                last_residual,
                iterations,
            } => write!(
                f,
                "Newton inversion stalled for w = {target_re}+{target_im}i after {iterations} iterations (residual {last_residual})"
            ),
            Error::CertificateMismatch { expected, found } => write!(
                f,
                "injectivity certificate expected {expected} root(s), found {found}"
            ),
            Error::NotConverged(msg) => write!(f, "not converged: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
