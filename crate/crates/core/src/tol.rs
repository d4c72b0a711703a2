/// Numerical thresholds shared by the symbolic and numerical layers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative tolerance for "exact" identity checks.
    pub eps_eq: f64,
    /// Band around |z| = 1 inside which a root counts as on the circle.
    pub eps_circle: f64,
    /// Radius for merging nearby roots into one multiple root.
    pub eps_cluster: f64,
    /// Relative coefficient pruning threshold.
    pub eps_drop: f64,
    /// Relative residual accepted for a computed root.
    pub eps_root: f64,
    /// Relative singular-value threshold for numerical rank.
    pub rank_tol: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        eps_eq: 1e-11,
        eps_circle: 1e-9,
        eps_cluster: 1e-7,
        eps_drop: 1e-13,
        eps_root: 1e-10,
        rank_tol: 1e-10,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Required ratio between the last kept and first discarded singular value.
pub const MIN_SPECTRAL_GAP: f64 = 1e3;
