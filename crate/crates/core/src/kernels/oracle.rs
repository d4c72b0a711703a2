//! Numerical kernel estimates from rectangular truncations.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::expr::{OperatorExpression, Space};
use crate::operators::norm::rank_from_sigma;
use crate::operators::svd::{max_principal_sine, orthonormal_columns, svd};
use crate::operators::truncate::{input_window, truncate_window};
use crate::symbol::{FourierSeries, RationalSymbol};
use crate::tol::MIN_SPECTRAL_GAP;

/// A drop of the smallest retained singular value by more than this factor
/// between `N/2` and `N` means a kernel vector is still hidden by its tail.
const DECAY_FACTOR: f64 = 100.0;

/// A retained singular value this far below the largest looks like the truncation tail of a
/// kernel vector rather than a genuine one, so the size is doubled while that is affordable.
const TAIL_LEVEL: f64 = 1e-6;

/// Escalation stops once the column count would exceed this.
const MAX_COLUMNS: i64 = 520;

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub dimension: usize,
    pub gap: f64,
    pub n_requested: usize,
    /// Truncation size that produced the certified answer.
    pub n_used: usize,
    /// Dimension estimate at half the size used, if computed.
    pub dimension_half: Option<usize>,
    pub stable: bool,
    /// Exponents of the candidate coefficients.
    pub window: (i64, i64),
    pub edge_buffer: usize,
    pub sigma: Vec<f64>,
    /// Orthonormal coefficient vectors spanning the numerical kernel.
    pub candidates: Vec<Vec<Complex64>>,
}

/// Nominal bandwidth of a symbol: numerator span plus denominator degree.
pub fn symbol_bandwidth(f: &RationalSymbol) -> i64 {
    let span = match (f.num().lo(), f.num().hi()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0,
    };
    span + f.den_degree()
}

fn expression_bandwidth(x: &OperatorExpression) -> i64 {
    x.node.symbols().into_iter().map(symbol_bandwidth).max().unwrap_or(0).max(1)
}

/// Column window at size `n` with `d` edge coefficients forced to zero.
fn restricted_window(domain: Space, n: usize, d: i64) -> (i64, i64) {
    let (lo, hi) = input_window(domain, n);
    match domain {
        Space::L2 => (lo + d, hi - d),
        Space::H2Plus => (lo, hi - d),
        Space::H2Minus => (lo + d, hi),
    }
}

struct Analysis {
    n: usize,
    rank: usize,
    gap: f64,
    sigma: Vec<f64>,
    v: DMatrix<Complex64>,
    window: (i64, i64),
}

impl Analysis {
    fn dimension(&self) -> usize {
        self.sigma.len() - self.rank
    }

    fn smallest_kept(&self) -> Option<f64> {
        self.rank.checked_sub(1).map(|i| self.sigma[i])
    }
}

fn analyse(x: &OperatorExpression, n: usize, d: i64, tol: f64) -> Result<Analysis> {
    let (lo, hi) = restricted_window(x.domain, n, d);
    let t = truncate_window(x, n, lo, hi)?;
    let s = svd(&t.entries, true);
    let report = rank_from_sigma(s.sigma, tol, 0.0);
    Ok(Analysis { n, rank: report.rank, gap: report.gap, sigma: report.sigma, v: s.v.expect("requested"), window: (lo, hi) })
}

fn columns(domain: Space, n: usize, d: i64) -> i64 {
    let (lo, hi) = restricted_window(domain, n, d);
    hi - lo + 1
}

/// Estimates `dim ker X` from the SVD of the truncation at size `n`.
///
/// The answer is accepted when the spectral gap is at least `10³` and the
/// smallest retained singular value has neither collapsed relative to size `n/2`
/// nor sunk to the level of a truncation tail;
/// otherwise the size is doubled while the matrix stays moderate.
pub fn kernel_oracle(x: &OperatorExpression, n: usize, tol: f64) -> Result<OracleReport> {
    let d = expression_bandwidth(x);
    if (n as i64) < 2 * d {
        return Err(Error::DegenerateInput(format!("truncation size {n} is below twice the bandwidth {d}")));
    }
    let mut half = if (n / 2) as i64 > d { Some(analyse(x, n / 2, d, tol)?) } else { None };
    let mut cur = analyse(x, n, d, tol)?;
    loop {
        let collapsing = match (&half, cur.smallest_kept()) {
            (Some(h), Some(s)) => h.smallest_kept().is_some_and(|sh| s * DECAY_FACTOR < sh),
            _ => false,
        };
        let tail = cur.smallest_kept().is_some_and(|s| s < TAIL_LEVEL * cur.sigma[0]);
        let certified = cur.gap >= MIN_SPECTRAL_GAP;
        if certified && !collapsing && !tail {
            break;
        }
        if columns(x.domain, 2 * cur.n, d) > MAX_COLUMNS {
            if certified && !collapsing {
                break;
            }
            return Err(Error::Indeterminate(cur.gap));
        }
        let next = analyse(x, 2 * cur.n, d, tol)?;
        half = Some(std::mem::replace(&mut cur, next));
    }
    let dimension = cur.dimension();
    let candidates = (cur.rank..cur.sigma.len()).map(|k| cur.v.column(k).iter().copied().collect()).collect();
    let dimension_half = half.as_ref().map(Analysis::dimension);
    Ok(OracleReport {
        dimension,
        gap: cur.gap,
        n_requested: n,
        n_used: cur.n,
        dimension_half,
        stable: dimension_half.is_none_or(|h| h == dimension),
        window: cur.window,
        edge_buffer: d as usize,
        sigma: cur.sigma,
        candidates,
    })
}

/// Sine of the largest principal angle between the oracle candidates and the
/// span of exact kernel elements restricted to the oracle window.
pub fn oracle_angle(report: &OracleReport, basis: &[RationalSymbol]) -> Result<f64> {
    let (lo, hi) = report.window;
    let m = (hi - lo + 1) as usize;
    if basis.len() != report.candidates.len() {
        return Ok(1.0);
    }
    if basis.is_empty() {
        return Ok(0.0);
    }
    let mut exact = DMatrix::<Complex64>::zeros(m, basis.len());
    for (j, f) in basis.iter().enumerate() {
        let series = FourierSeries::new(f)?;
        for (i, k) in (lo..=hi).enumerate() {
            exact[(i, j)] = series.coefficient(k);
        }
    }
    let qa = orthonormal_columns(&exact, 1e-12);
    let qb = DMatrix::from_fn(m, report.candidates.len(), |i, j| report.candidates[j][i]);
    Ok(max_principal_sine(&qa, &qb))
}
