//! Norms, numerical ranks and adjoint residuals.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::operators::apply::apply_exact;
use crate::operators::expr::{OperatorExpression, Space};
use crate::operators::svd::singular_values;
use crate::operators::truncate::{truncate, TruncationMatrix};
use crate::symbol::{inner_product, membership, RationalSymbol, SpaceTag};
use crate::tol::MIN_SPECTRAL_GAP;

/// Lower bound for an operator norm, with the truncation size that produced it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub n: usize,
}

/// Largest singular value of the truncation: a lower bound for `‖X‖`.
pub fn operator_norm(x: &OperatorExpression, n: usize) -> Result<NormEstimate> {
    let t = truncate(x, n)?;
    // Only the top singular value is needed, so bidiagonalization beats the Jacobi sweeps
    // used for rank decisions.
    let value = if t.entries.is_empty() { 0.0 } else { t.entries.singular_values().max() };
    Ok(NormEstimate { value, n })
}

/// Outcome of a numerical rank decision.
#[derive(Debug, Clone, Serialize)]
pub struct RankReport {
    pub rank: usize,
    /// Ratio between the last kept and the first discarded singular value.
    pub gap: f64,
    pub sigma_max: f64,
    pub threshold: f64,
    /// False when the gap is below the certification level.
    pub certified: bool,
    pub sigma: Vec<f64>,
}

/// Rank decision on explicit singular values, thresholding at `tol · max(σ_max, reference)`.
pub fn rank_from_sigma(sigma: Vec<f64>, tol: f64, reference: f64) -> RankReport {
    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let scale = sigma_max.max(reference);
    let threshold = tol * scale;
    if scale == 0.0 {
        return RankReport { rank: 0, gap: f64::INFINITY, sigma_max, threshold, certified: true, sigma };
    }
    let rank = sigma.iter().filter(|&&s| s > threshold).count();
    let kept = rank.checked_sub(1).map(|i| sigma[i]);
    let dropped = sigma.get(rank).copied();
    let gap = match (kept, dropped) {
        (Some(k), Some(d)) => {
            if d == 0.0 {
                f64::INFINITY
            } else {
                k / d
            }
        }
        (Some(k), None) => k / threshold,
        (None, Some(d)) => {
            if d == 0.0 {
                f64::INFINITY
            } else {
                threshold / d
            }
        }
        (None, None) => f64::INFINITY,
    };
    RankReport { rank, gap, sigma_max, threshold, certified: gap >= MIN_SPECTRAL_GAP, sigma }
}

/// Number of singular values above `tol · σ_max`, with the spectral gap.
pub fn numerical_rank(m: &TruncationMatrix, tol: f64) -> RankReport {
    rank_from_sigma(singular_values(&m.entries), tol, 0.0)
}

/// As [`numerical_rank`], with the threshold scaled by at least `reference`.
///
/// Useful for differences of operators whose true value may be zero, where
/// `σ_max` itself is rounding noise.
pub fn numerical_rank_scaled(m: &TruncationMatrix, tol: f64, reference: f64) -> RankReport {
    rank_from_sigma(singular_values(&m.entries), tol, reference)
}

/// Monomials `z^k`, `|k| ≤ kmax`, lying in `space`.
pub fn monomial_probes(space: Space, kmax: i64) -> Vec<RationalSymbol> {
    (-kmax..=kmax)
        .map(RationalSymbol::z_pow)
        .filter(|f| match space {
            Space::L2 => true,
            Space::H2Plus => membership(f, SpaceTag::H2Plus),
            Space::H2Minus => membership(f, SpaceTag::H2Minus),
        })
        .collect()
}

/// `max |⟨Xf, g⟩ − ⟨f, Yg⟩|` over the probe pairs.
pub fn adjoint_residual(x: &OperatorExpression, y: &OperatorExpression, probes: &[(RationalSymbol, RationalSymbol)]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (f, g) in probes {
        let lhs = inner_product(&apply_exact(x, f)?, g)?;
        let rhs = inner_product(f, &apply_exact(y, g)?)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// All pairs of monomial probes in the respective domains.
pub fn monomial_probe_pairs(x: &OperatorExpression, y: &OperatorExpression, kmax: i64) -> Vec<(RationalSymbol, RationalSymbol)> {
    let fs = monomial_probes(x.domain, kmax);
    let gs = monomial_probes(y.domain, kmax);
    fs.iter().flat_map(|f| gs.iter().map(move |g| (f.clone(), g.clone()))).collect()
}

/// `‖f‖∞` on the circle by dense sampling followed by golden-section refinement.
pub fn sup_norm(f: &RationalSymbol) -> f64 {
    const SAMPLES: usize = 2048;
    let h = 2.0 * std::f64::consts::PI / SAMPLES as f64;
    let val = |t: f64| f.eval(Complex64::from_polar(1.0, t)).norm();
    let vals: Vec<f64> = (0..SAMPLES).map(|k| val(k as f64 * h)).collect();
    let mut idx: Vec<usize> = (0..SAMPLES).collect();
    idx.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).unwrap_or(std::cmp::Ordering::Equal));
    let mut best = vals[idx[0]];
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    for &k in idx.iter().take(8) {
        let (mut lo, mut hi) = ((k as f64 - 1.0) * h, (k as f64 + 1.0) * h);
        let mut x1 = hi - ratio * (hi - lo);
        let mut x2 = lo + ratio * (hi - lo);
        let (mut f1, mut f2) = (val(x1), val(x2));
        for _ in 0..80 {
            if f1 > f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - ratio * (hi - lo);
                f1 = val(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + ratio * (hi - lo);
                f2 = val(x2);
            }
        }
        best = best.max(f1).max(f2);
    }
    best
}
