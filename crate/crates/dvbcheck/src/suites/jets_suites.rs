//! Suites for the second tangent bundle: exactness of the canonical involution
//! and its naturality under pushforward by nonlinear diffeomorphisms.

use super::{dim_in, fmt_vec, vecn, CaseFn, CaseResult};
use crate::config::RunConfig;
use dvbcheck_core::canonical::{
    canonical_involution, j_naturality_residual, T2MElement,
};
use dvbcheck_core::linalg::vec_max_abs_diff;
use dvbcheck_core::smooth::builtin_diffeos;

fn element_diff(a: &T2MElement, b: &T2MElement) -> f64 {
    vec_max_abs_diff(&a.x, &b.x)
        .max(vec_max_abs_diff(&a.v, &b.v))
        .max(vec_max_abs_diff(&a.w, &b.w))
        .max(vec_max_abs_diff(&a.z, &b.z))
}

/// The involution squares to the identity and exchanges the two projections,
/// both bitwise: the suite tolerance is exactly zero.
pub(super) fn involution(cfg: &RunConfig) -> CaseFn<'_> {
    Box::new(move |rng, _case| {
        let n = dim_in(rng, 1, cfg.dim_base);
        let xi = T2MElement::new(vecn(rng, n), vecn(rng, n), vecn(rng, n), vecn(rng, n))?;
        let swapped = canonical_involution(&xi);
        let twice = canonical_involution(&swapped);
        let mut residual = element_diff(&twice, &xi);
        let (px, pv) = swapped.project_p_tm();
        let (tx, tv) = xi.project_t_pm();
        residual = residual
            .max(vec_max_abs_diff(&px, &tx))
            .max(vec_max_abs_diff(&pv, &tv));
        let (px, pv) = swapped.project_t_pm();
        let (tx, tv) = xi.project_p_tm();
        residual = residual
            .max(vec_max_abs_diff(&px, &tx))
            .max(vec_max_abs_diff(&pv, &tv));
        Ok(CaseResult::new(residual, format!("n={n} x={}", fmt_vec(&xi.x))))
    })
}

/// Pushing a 2-jet through a diffeomorphism commutes with the involution.
pub(super) fn naturality(cfg: &RunConfig) -> CaseFn<'_> {
    Box::new(move |rng, case| {
        let n = dim_in(rng, 1, cfg.dim_base);
        let family = builtin_diffeos(n);
        let (name, f) = &family[(case as usize) % family.len()];
        let xi = T2MElement::new(vecn(rng, n), vecn(rng, n), vecn(rng, n), vecn(rng, n))?;
        let residual = j_naturality_residual(f, &xi)?;
        Ok(CaseResult::new(residual, format!("n={n} map={name}")))
    })
}
