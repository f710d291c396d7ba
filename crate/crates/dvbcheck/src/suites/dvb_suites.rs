//! Suites for the double-vector-bundle layer: the interchange law on random
//! squares, the dual-dual pairing (lift-independence, bilinearity, reversal,
//! nondegeneracy), and the tangent pairing (jet agreement, finite-difference
//! cross-check, rank).

use super::{dim_in, vecn, CaseFn, CaseResult};
use crate::config::RunConfig;
use dvbcheck_core::bundles::{
    pairing_map, tangent_pairing, tangent_pairing_form, BundleShape, TEElement, TEStarElement,
};
use dvbcheck_core::dvb::{
    duality_iso, hdual_add_over_cstar, hdual_pairing, interchange_check, theorem1_pairing,
    theorem1_pairing_with_lift, vdual_add_over_cstar, vdual_pairing, DvbElement, DvbHDualElement,
    DvbShape, DvbVDualElement,
};
use dvbcheck_core::jets::{fd_jvp, tangent_map};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

fn random_dvb_shape(rng: &mut ChaCha8Rng, dim_base: usize) -> DvbShape {
    let n = dim_in(rng, 0, dim_base);
    let p = dim_in(rng, 0, dim_base);
    let q = dim_in(rng, 0, dim_base);
    let mut r = dim_in(rng, 0, dim_base);
    if p + q + r == 0 {
        r = 1;
    }
    DvbShape::new(n, p, q, r).expect("sampled shape has a nonzero fiber")
}

/// The two evaluation orders of a square of elements agree.
pub(super) fn interchange(cfg: &RunConfig) -> CaseFn<'_> {
    Box::new(move |rng, _case| {
        let shape = random_dvb_shape(rng, cfg.dim_base);
        let x = vecn(rng, shape.n);
        let (a1, a2) = (vecn(rng, shape.p), vecn(rng, shape.p));
        let (b1, b3) = (vecn(rng, shape.q), vecn(rng, shape.q));
        let mk = |a: &[f64], b: &[f64], rng: &mut ChaCha8Rng| {
            DvbElement::new(&shape, x.clone(), a.to_vec(), b.to_vec(), vecn(rng, shape.r))
        };
        let d1 = mk(&a1, &b1, rng)?;
        let d2 = mk(&a2, &b1, rng)?;
        let d3 = mk(&a1, &b3, rng)?;
        let d4 = mk(&a2, &b3, rng)?;
        let residual = interchange_check(&d1, &d2, &d3, &d4)?;
        Ok(CaseResult::new(
            residual,
            format!("shape=({},{},{},{})", shape.n, shape.p, shape.q, shape.r),
        ))
    })
}

/// The pairing of the two duals over the dual of the core: independent of the
/// lift, additive in both slots, negated under reversal, and nondegenerate.
pub(super) fn theorem1(cfg: &RunConfig) -> CaseFn<'_> {
    let mut rank_cache: HashMap<(usize, usize, usize, usize), bool> = HashMap::new();
    Box::new(move |rng, _case| {
        let shape = random_dvb_shape(rng, cfg.dim_base);
        let x = vecn(rng, shape.n);
        let kappa = vecn(rng, shape.r);
        let phi = DvbVDualElement::new(
            &shape,
            x.clone(),
            vecn(rng, shape.p),
            kappa.clone(),
            vecn(rng, shape.q),
        )?;
        let psi = DvbHDualElement::new(
            &shape,
            x.clone(),
            vecn(rng, shape.q),
            kappa.clone(),
            vecn(rng, shape.p),
        )?;
        let base = theorem1_pairing(&phi, &psi)?;
        // Lift-independence: the core part of the lift cancels.
        let lift1 = theorem1_pairing_with_lift(&phi, &psi, &vecn(rng, shape.r))?;
        let lift2 = theorem1_pairing_with_lift(&phi, &psi, &vecn(rng, shape.r))?;
        let mut residual = (lift1 - base).abs().max((lift2 - base).abs());
        // Reversal: swapping which dual is subtracted negates the value.
        let lift = DvbElement::new(
            &shape,
            x.clone(),
            phi.a.clone(),
            psi.b.clone(),
            vecn(rng, shape.r),
        )?;
        let forward = vdual_pairing(&phi, &lift)? - hdual_pairing(&psi, &lift)?;
        let reverse = hdual_pairing(&psi, &lift)? - vdual_pairing(&phi, &lift)?;
        residual = residual.max((forward + reverse).abs());
        // Bilinearity over the additions covering the identity of C*.
        let phi2 = DvbVDualElement::new(
            &shape,
            x.clone(),
            vecn(rng, shape.p),
            kappa.clone(),
            vecn(rng, shape.q),
        )?;
        let psi2 = DvbHDualElement::new(
            &shape,
            x.clone(),
            vecn(rng, shape.q),
            kappa.clone(),
            vecn(rng, shape.p),
        )?;
        let phi_sum = vdual_add_over_cstar(&phi, &phi2)?;
        let psi_sum = hdual_add_over_cstar(&psi, &psi2)?;
        residual = residual.max(
            (theorem1_pairing(&phi_sum, &psi)?
                - theorem1_pairing(&phi, &psi)?
                - theorem1_pairing(&phi2, &psi)?)
            .abs(),
        );
        residual = residual.max(
            (theorem1_pairing(&phi, &psi_sum)?
                - theorem1_pairing(&phi, &psi)?
                - theorem1_pairing(&phi, &psi2)?)
            .abs(),
        );
        // Nondegeneracy of the fiberwise form (cached per shape).
        let key = (shape.n, shape.p, shape.q, shape.r);
        let full_rank = match rank_cache.get(&key) {
            Some(&ok) => ok,
            None => {
                let ok = duality_iso(&shape)?.rank == shape.p + shape.q;
                rank_cache.insert(key, ok);
                ok
            }
        };
        if !full_rank {
            residual = residual.max(1.0);
        }
        Ok(CaseResult::new(
            residual,
            format!("shape=({},{},{},{})", shape.n, shape.p, shape.q, shape.r),
        ))
    })
}

/// The tangent pairing: agrees with the jet of the fiberwise pairing, passes a
/// finite-difference cross-check (rescaled from `tol_fd` into the suite
/// budget), and has full rank `2k`.
pub(super) fn tangent_pairing_suite(cfg: &RunConfig) -> CaseFn<'_> {
    let mut rank_cache: HashMap<usize, bool> = HashMap::new();
    Box::new(move |rng, _case| {
        let n = dim_in(rng, 1, cfg.dim_base);
        let k = dim_in(rng, 1, cfg.dim_base);
        let shape = BundleShape::new(n, k)?;
        let x = vecn(rng, n);
        let dx = vecn(rng, n);
        let xi = TEElement::new(&shape, x.clone(), vecn(rng, k), dx.clone(), vecn(rng, k))?;
        let eta =
            TEStarElement::new(&shape, x.clone(), vecn(rng, k), dx.clone(), vecn(rng, k))?;
        let direct = tangent_pairing(&xi, &eta)?;
        // The same number through a jet of the scalar pairing map.
        let map = pairing_map(&shape);
        let mut point = x.clone();
        point.extend(xi.e.iter());
        point.extend(eta.p.iter());
        let mut velocity = dx.clone();
        velocity.extend(xi.de.iter());
        velocity.extend(eta.dp.iter());
        let through_jet = tangent_map(&map, &point, &velocity)?.1[0];
        let mut residual = (direct - through_jet).abs();
        // Finite differences agree with the jet to tol_fd (relative); rescale
        // that contract into the suite's exact budget.
        let fd = fd_jvp(&map, &point, &velocity, 1e-6)?[0];
        let fd_relative = (through_jet - fd).abs() / (1.0 + through_jet.abs());
        residual = residual.max(fd_relative * (cfg.tol_exact / cfg.tol_fd));
        // Nondegeneracy (cached per fiber dimension).
        let full_rank = match rank_cache.get(&k) {
            Some(&ok) => ok,
            None => {
                let ok = tangent_pairing_form(&shape)?.rank(1e-9) == 2 * k;
                rank_cache.insert(k, ok);
                ok
            }
        };
        if !full_rank {
            residual = residual.max(1.0);
        }
        Ok(CaseResult::new(residual, format!("n={n} k={k} value={direct:.3}")))
    })
}
