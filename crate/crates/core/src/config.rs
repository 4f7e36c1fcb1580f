//! Numeric tolerances shared by the verification routines.

/// Environment variable overriding [`Tolerances::rank`].
pub const TOLERANCE_ENV: &str = "NLWE_TOLERANCE";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Rank and orthogonality decisions (span dimension, complements, unextendibility).
    pub rank: f64,
    /// Sign decisions on eigenvalues (PPT).
    pub eigen_sign: f64,
    /// Eigenvalue threshold used when counting the rank of a density matrix.
    pub rank_count: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: 1e-9,
            eigen_sign: 1e-10,
            rank_count: 1e-8,
        }
    }
}

impl Tolerances {
    /// Defaults, with `rank` taken from `NLWE_TOLERANCE` when it parses as a positive float.
    pub fn from_env() -> Self {
        let mut tol = Self::default();
        if let Some(v) = std::env::var(TOLERANCE_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v > 0.0)
        {
            tol.rank = v;
        }
        tol
    }
}
