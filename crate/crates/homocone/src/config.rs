//! Central numerical configuration.
//!
//! Every tolerance and iteration budget used by the library lives here so the
//! guarantees quoted in the operation docs are pinned in one place.

/// Numerical tolerances and budgets.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Absolute residual accepted for subspace membership and closure checks
    /// on unit-norm inputs (axiom validation, block projections).
    pub membership: f64,
    /// Relative residual accepted when a dense product is projected back onto
    /// the structured space or the triangular group.
    pub closure: f64,
    /// Round-trip accuracy of exact algebraic identities (embed/project,
    /// lower-part reassembly, flip identities).
    pub round_trip: f64,
    /// Half-width of the equality band used for singular Gindikin strata.
    pub gindikin_equality: f64,
    /// Relative residual at which the dual Newton iteration stops.
    pub dual_newton: f64,
    /// Iteration budget for the dual Newton solve.
    pub dual_max_iter: usize,
    /// Base step for cumulant finite differences; scaled by (1 + ||theta||).
    pub fd_step: f64,
    /// |c - 1| below which scale extraction refuses to divide.
    pub degenerate_scale: f64,
    /// Disagreement allowed between character probes of the same coordinate.
    pub character_consistency: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            membership: 1e-9,
            closure: 1e-9,
            round_trip: 1e-12,
            gindikin_equality: 1e-9,
            dual_newton: 1e-11,
            dual_max_iter: 200,
            fd_step: 1e-5,
            degenerate_scale: 1e-12,
            character_consistency: 1e-9,
        }
    }
}

/// The default tolerance set used by free functions throughout the crate.
pub const DEFAULT: Tolerances = Tolerances {
    membership: 1e-9,
    closure: 1e-9,
    round_trip: 1e-12,
    gindikin_equality: 1e-9,
    dual_newton: 1e-11,
    dual_max_iter: 200,
    fd_step: 1e-5,
    degenerate_scale: 1e-12,
    character_consistency: 1e-9,
};

/// Default RNG seed; the CLI overrides it with `HOMOCONE_SEED` or `--seed`.
pub const DEFAULT_SEED: u64 = 42;
