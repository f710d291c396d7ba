//! Run configuration shared by the CLI and the in-process test drivers.

/// Knobs for a suite run. All sampling is derived deterministically from
/// `seed` and the case index, so a `(seed, trials)` pair pins the entire run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Base RNG seed; each suite and case derives an independent stream.
    pub seed: u64,
    /// Sampled cases per suite.
    pub trials: u64,
    /// Upper bound for sampled chart dimensions (the Poisson suites use fixed
    /// small registry dimensions instead, to keep their tolerances honest).
    pub dim_base: usize,
    /// Tolerance for identities that are exact coordinate shuffles or pairings.
    pub tol_exact: f64,
    /// Relative tolerance for finite-difference cross-checks of jet derivatives.
    pub tol_fd: f64,
    /// Append deliberately failing control cases to the Poisson suites.
    pub negative_controls: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            trials: 1000,
            dim_base: 4,
            tol_exact: 1e-12,
            tol_fd: 1e-6,
            negative_controls: false,
        }
    }
}

impl RunConfig {
    /// Reject configurations the suites cannot honor.
    pub fn validate(&self) -> Result<(), String> {
        if self.trials < 1 {
            return Err("--trials must be at least 1".into());
        }
        if self.dim_base < 1 || self.dim_base > 8 {
            return Err("--dim-base must be between 1 and 8".into());
        }
        if !(self.tol_exact.is_finite() && self.tol_exact > 0.0) {
            return Err("--tol-exact must be a positive finite number".into());
        }
        if !(self.tol_fd.is_finite() && self.tol_fd > 0.0) {
            return Err("--tol-fd must be a positive finite number".into());
        }
        Ok(())
    }
}
