//! Perron root of nonnegative matrices with a Collatz–Wielandt certificate.
//!
//! For a nonnegative `A` and any strictly positive `x`,
//!
//! ```text
//! min_k (A x)_k / x_k  ≤  ρ(A)  ≤  max_k (A x)_k / x_k
//! ```
//!
//! so every strictly positive iterate yields a bracket on the spectral radius
//! that does not depend on any convergence argument. The iteration keeps its
//! iterate strictly positive and stops as soon as the bracket is narrow enough.
//!
//! The first few steps are plain power steps. After that the iteration works
//! on the resolvent `(s I − A)⁻¹` with the shift `s` placed strictly above the
//! current upper quotient. Because `s > ρ(A)`, the resolvent is a nonnegative
//! matrix with the same Perron vector, it maps positive vectors to positive
//! vectors, and its dominance ratio `(s − ρ) / (s − |λ₂|)` shrinks with the
//! bracket. This handles reducible and periodic matrices where plain power
//! iteration stalls or oscillates.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const POWER_STEPS: usize = 8;
const POLISH_STEPS: usize = 4;
const MIN_ENTRY: f64 = 1e-200;

/// Closed interval `[lo, hi]` bracketing a spectral radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

impl Enclosure {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lo <= value && value <= self.hi
    }

    /// `hi − lo ≤ tol · max(hi, 1)`.
    pub fn is_tight(&self, tol: f64) -> bool {
        self.width() <= tol * self.hi.max(1.0)
    }
}

#[derive(Debug, Clone)]
pub struct PerronEstimate {
    pub rho: f64,
    /// Final iterate, scaled to unit max-entry.
    pub eigvec: DVector<f64>,
    pub enclosure: Enclosure,
    /// `false` when the bracket did not reach the tolerance within the
    /// iteration budget. The enclosure is still a valid bracket.
    pub certified: bool,
    pub iterations: usize,
}

/// Collatz–Wielandt quotients of `a` at the strictly positive vector `x`.
pub fn collatz_wielandt(a: &DMatrix<f64>, x: &DVector<f64>) -> Enclosure {
    quotients(&(a * x), x)
}

/// Lower quotient over the support of `x` with small entries zeroed.
///
/// `A x' ≥ λ x'` for a nonnegative nonzero `x'` still forces `ρ(A) ≥ λ`, so
/// dropping coordinates that the iteration drives towards zero recovers a
/// tight lower bound when the Perron vector is not strictly positive.
fn truncated_lower(a: &DMatrix<f64>, x: &DVector<f64>) -> f64 {
    let scale = x.max();
    let mut best = 0.0f64;
    for cut in [1e-12, 1e-9, 1e-6, 1e-3] {
        let xt = x.map(|v| if v >= cut * scale { v } else { 0.0 });
        let axt = a * &xt;
        let lo = xt
            .iter()
            .zip(axt.iter())
            .filter(|(v, _)| **v > 0.0)
            .map(|(v, y)| y / v)
            .fold(f64::INFINITY, f64::min);
        if lo.is_finite() {
            best = best.max(lo);
        }
    }
    best
}

fn quotients(ax: &DVector<f64>, x: &DVector<f64>) -> Enclosure {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (y, x) in ax.iter().zip(x.iter()) {
        let q = y / x;
        lo = lo.min(q);
        hi = hi.max(q);
    }
    Enclosure {
        lo: lo.max(0.0),
        hi,
    }
}

/// `(s I − A)⁻¹ x` for `s > ρ(A)`.
///
/// Exact arithmetic keeps the result positive; rounding can push entries
/// that the Perron vector sends to zero slightly negative, so those are
/// clamped to the floor (any positive vector gives valid quotients).
fn resolvent_step(
    a: &DMatrix<f64>,
    identity: &DMatrix<f64>,
    shift: f64,
    x: &DVector<f64>,
) -> Option<DVector<f64>> {
    let z = (identity * shift - a).lu().solve(x)?;
    let top = z.max();
    if !(top > 0.0 && z.iter().all(|v| v.is_finite())) {
        return None;
    }
    Some(z.map(|v| v.max(MIN_ENTRY * top)))
}

/// Resolvent steps after the tolerance is met, kept while each one at least
/// halves the enclosure. Callers that invert the root (e.g. `t* = 1/ρ`) and
/// then solve a nearly singular system benefit from the last few digits.
fn polish(a: &DMatrix<f64>, mut x: DVector<f64>, mut best: Enclosure) -> (DVector<f64>, Enclosure, usize) {
    let k = a.nrows();
    let mut steps = 0;
    while steps < POLISH_STEPS && best.width() > 0.0 {
        let shift = best.hi + best.width().max(f64::EPSILON * best.hi);
        let Some(z) = resolvent_step(a, &DMatrix::identity(k, k), shift, &x) else {
            break;
        };
        let top = z.max();
        let z = z.map(|v| (v / top).max(MIN_ENTRY));
        let enc = collatz_wielandt(a, &z);
        let next = Enclosure {
            lo: best.lo.max(enc.lo).max(truncated_lower(a, &z)),
            hi: best.hi.min(enc.hi),
        };
        steps += 1;
        let shrunk = next.width() <= 0.5 * best.width();
        best = next;
        x = z;
        if !shrunk {
            break;
        }
    }
    (x, best, steps)
}

fn check_matrix(a: &DMatrix<f64>) -> Result<()> {
    if !a.is_square() || a.nrows() == 0 {
        return Err(Error::BadMatrix(format!(
            "expected a non-empty square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if let Some(v) = a.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::BadMatrix(format!(
            "entries must be finite and nonnegative, found {v}"
        )));
    }
    Ok(())
}

/// Perron root of `a`, started from the all-ones vector.
pub fn spectral_radius(a: &DMatrix<f64>, tol: f64, max_iters: usize) -> Result<PerronEstimate> {
    check_matrix(a)?;
    spectral_radius_from(a, &DVector::from_element(a.nrows(), 1.0), tol, max_iters)
}

/// Perron root of `a`, started from the strictly positive vector `start`.
pub fn spectral_radius_from(
    a: &DMatrix<f64>,
    start: &DVector<f64>,
    tol: f64,
    max_iters: usize,
) -> Result<PerronEstimate> {
    check_matrix(a)?;
    let k = a.nrows();
    if start.len() != k || start.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::BadMatrix(
            "start vector must be strictly positive with matching length".into(),
        ));
    }

    let mut x = start / start.max();
    if a.iter().all(|&v| v == 0.0) {
        return Ok(PerronEstimate {
            rho: 0.0,
            eigvec: x,
            enclosure: Enclosure { lo: 0.0, hi: 0.0 },
            certified: true,
            iterations: 0,
        });
    }

    let identity = DMatrix::<f64>::identity(k, k);
    let mut best = Enclosure {
        lo: 0.0,
        hi: f64::INFINITY,
    };
    let mut iterations = 0;
    loop {
        let ax = a * &x;
        let enc = quotients(&ax, &x);
        best.lo = best.lo.max(enc.lo);
        if !best.is_tight(tol) {
            best.lo = best.lo.max(truncated_lower(a, &x));
        }
        best.hi = best.hi.min(enc.hi);
        if best.is_tight(tol) {
            let (x, best, extra) = polish(a, x, best);
            return Ok(PerronEstimate {
                rho: best.midpoint(),
                eigvec: x,
                enclosure: best,
                certified: true,
                iterations: iterations + extra,
            });
        }
        if iterations >= max_iters {
            return Ok(PerronEstimate {
                rho: best.midpoint(),
                eigvec: x,
                enclosure: best,
                certified: false,
                iterations,
            });
        }
        iterations += 1;

        let mut next = None;
        if iterations > POWER_STEPS {
            let gap = best.width().max(f64::EPSILON * best.hi);
            let shift = best.hi + gap;
            next = resolvent_step(a, &identity, shift, &x);
        }
        let z = next.unwrap_or_else(|| {
            if ax.iter().all(|&v| v > 0.0) {
                ax
            } else {
                // Mixing in the current iterate keeps every coordinate positive;
                // the shift by `hi` leaves the Perron vector unchanged.
                ax + &x * enc.hi
            }
        });
        let top = z.max();
        x = z.map(|v| (v / top).max(MIN_ENTRY));
    }
}
