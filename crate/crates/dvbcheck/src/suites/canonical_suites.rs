//! Suites for the canonical maps: the defining identity of the Tulczyjew map,
//! the composite identity pinning the dualization map `R`, and the symplectic
//! compatibility statements (pullback and bivector pushforward, plus the
//! anti-symplectomorphism and rank properties of `R`'s chart matrix).

use super::{dim_in, fmt_vec, vecn, CaseFn, CaseResult};
use crate::config::RunConfig;
use dvbcheck_core::bundles::BundleShape;
use dvbcheck_core::canonical::{
    canonical_symplectic, proposition_composite_residual, r_chart_matrix, r_map, r_map_pinned,
    theta_poisson_residual, theta_symplectomorphism_residual, tulczyjew_closed_form,
    tulczyjew_defining_residual, CotangentCotangentElement, CotangentEStarElement,
    TangentCotangentElement,
};
use dvbcheck_core::linalg::vec_max_abs_diff;
use std::collections::HashMap;

/// Defining identity of the Tulczyjew map over full bases of admissible
/// directions plus random extras, and agreement with its closed coordinate
/// form.
pub(super) fn tulczyjew(cfg: &RunConfig) -> CaseFn<'_> {
    Box::new(move |rng, _case| {
        let n = dim_in(rng, 1, cfg.dim_base);
        let xi = TangentCotangentElement::new(
            vecn(rng, n),
            vecn(rng, n),
            vecn(rng, n),
            vecn(rng, n),
        )?;
        let extras: Vec<(Vec<f64>, Vec<f64>)> =
            (0..3).map(|_| (vecn(rng, n), vecn(rng, n))).collect();
        let mut residual = tulczyjew_defining_residual(&xi, &extras)?;
        let solved = dvbcheck_core::canonical::tulczyjew(&xi)?;
        let closed = tulczyjew_closed_form(&xi);
        residual = residual
            .max(vec_max_abs_diff(&solved.x, &closed.x))
            .max(vec_max_abs_diff(&solved.v, &closed.v))
            .max(vec_max_abs_diff(&solved.alpha, &closed.alpha))
            .max(vec_max_abs_diff(&solved.beta, &closed.beta));
        Ok(CaseResult::new(residual, format!("n={n} x={}", fmt_vec(&xi.x))))
    })
}

/// The composite of the canonical Poisson anchor with the Tulczyjew map equals
/// the dualization map for the tangent bundle, and the closed form of `R`
/// matches its from-scratch pinned derivation on random bundles.
pub(super) fn proposition_r(cfg: &RunConfig) -> CaseFn<'_> {
    Box::new(move |rng, _case| {
        let n = dim_in(rng, 1, cfg.dim_base);
        let sample = CotangentCotangentElement::new(
            vecn(rng, n),
            vecn(rng, n),
            vecn(rng, n),
            vecn(rng, n),
        )?;
        let mut residual = proposition_composite_residual(&sample)?;
        let k = dim_in(rng, 1, cfg.dim_base);
        let shape = BundleShape::new(dim_in(rng, 1, cfg.dim_base), k)?;
        let phi = CotangentEStarElement::new(
            &shape,
            vecn(rng, shape.n),
            vecn(rng, shape.k),
            vecn(rng, shape.n),
            vecn(rng, shape.k),
        )?;
        let closed = r_map(&shape, &phi)?;
        let pinned = r_map_pinned(&shape, &phi)?;
        residual = residual
            .max(vec_max_abs_diff(&closed.x, &pinned.x))
            .max(vec_max_abs_diff(&closed.e, &pinned.e))
            .max(vec_max_abs_diff(&closed.mu, &pinned.mu))
            .max(vec_max_abs_diff(&closed.phi, &pinned.phi));
        Ok(CaseResult::new(
            residual,
            format!("n={n} bundle=({}, {})", shape.n, shape.k),
        ))
    })
}

/// Symplectic compatibility, deterministic per dimension and cached: the
/// Tulczyjew chart matrix pulls the canonical form back to the tangent lift and
/// pushes the lifted bivector to the canonical one; `R`'s chart matrix is a
/// full-rank anti-symplectomorphism.
pub(super) fn symplecto(cfg: &RunConfig) -> CaseFn<'_> {
    let mut theta_cache: HashMap<usize, f64> = HashMap::new();
    let mut r_cache: HashMap<(usize, usize), f64> = HashMap::new();
    let cap = cfg.dim_base.min(3);
    Box::new(move |rng, case| {
        let n = 1 + (case as usize) % cap;
        let theta_residual = match theta_cache.get(&n) {
            Some(&r) => r,
            None => {
                let r = theta_symplectomorphism_residual(n)?
                    .max(theta_poisson_residual(n)?);
                theta_cache.insert(n, r);
                r
            }
        };
        let key = (dim_in(rng, 1, cap), dim_in(rng, 1, cap));
        let r_residual = match r_cache.get(&key) {
            Some(&r) => r,
            None => {
                let shape = BundleShape::new(key.0, key.1)?;
                let matrix = r_chart_matrix(&shape)?;
                let omega = canonical_symplectic(shape.n + shape.k)?;
                let pullback = omega.matrix().congruence(&matrix);
                let mut r = pullback.max_abs_diff(&omega.matrix().scale(-1.0));
                if matrix.rank(1e-9) != 2 * (shape.n + shape.k) {
                    r = r.max(1.0);
                }
                r_cache.insert(key, r);
                r
            }
        };
        Ok(CaseResult::new(
            theta_residual.max(r_residual),
            format!("n={n} bundle=({}, {})", key.0, key.1),
        ))
    })
}
