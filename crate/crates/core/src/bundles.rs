//! Chart models of a vector bundle `E -> M` and its tangent prolongation `TE`.
//!
//! Everything lives on a single global chart: a point of `E` is `(x, e)` with
//! `x` in `R^n` and `e` in `R^k`. An element of `TE` then has four slots
//! `(x, e, dx, de)`, carrying the two projections that make `TE` a double vector
//! bundle: `p_E(xi) = (x, e)` and `T(q)(xi) = (x, dx)`. The dual-side charts
//! `T(E*)` and `T*E` are modelled the same way.

use crate::dvb::{DvbElement, DvbShape};
use crate::error::{GeomError, Result};
use crate::linalg::{dot, vec_add, Mat};
use crate::smooth::{Expr, SmoothMap};

/// Dimensions of a trivialized vector bundle `E -> M`: base `R^n`, fiber `R^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BundleShape {
    pub n: usize,
    pub k: usize,
}

impl BundleShape {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k < 1 {
            return Err(GeomError::InvalidShape(format!(
                "BundleShape requires fiber dim k >= 1, got k = {k}"
            )));
        }
        Ok(BundleShape { n, k })
    }
}

fn check_len(context: &'static str, expected: usize, v: &[f64]) -> Result<()> {
    if v.len() != expected {
        return Err(GeomError::DimensionMismatch { context, expected, found: v.len() });
    }
    Ok(())
}

/// A point of `TM`: base point plus velocity. Also the target of the `T(q)`
/// projection of a [`TEElement`].
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    pub x: Vec<f64>,
    pub dx: Vec<f64>,
}

/// An element of `TE`, the tangent prolongation of `E -> M`.
///
/// The two projections are `p_E(xi) = (x, e)` (forget velocities) and
/// `T(q)(xi) = (x, dx)` (push the bundle projection through `T`).
#[derive(Clone, Debug, PartialEq)]
pub struct TEElement {
    pub x: Vec<f64>,
    pub e: Vec<f64>,
    pub dx: Vec<f64>,
    pub de: Vec<f64>,
}

impl TEElement {
    pub fn new(
        shape: &BundleShape,
        x: Vec<f64>,
        e: Vec<f64>,
        dx: Vec<f64>,
        de: Vec<f64>,
    ) -> Result<Self> {
        check_len("TEElement::new: x", shape.n, &x)?;
        check_len("TEElement::new: e", shape.k, &e)?;
        check_len("TEElement::new: dx", shape.n, &dx)?;
        check_len("TEElement::new: de", shape.k, &de)?;
        Ok(TEElement { x, e, dx, de })
    }

    /// The projection `p_E: TE -> E`.
    pub fn project_to_e(&self) -> (Vec<f64>, Vec<f64>) {
        (self.x.clone(), self.e.clone())
    }

    /// The projection `T(q): TE -> TM`.
    pub fn project_to_tm(&self) -> TangentVector {
        TangentVector { x: self.x.clone(), dx: self.dx.clone() }
    }
}

/// An element of `T(E*)`: same layout as [`TEElement`] with the fiber replaced by
/// the dual fiber (`p` pairs with `e`, `dp` with `de`).
#[derive(Clone, Debug, PartialEq)]
pub struct TEStarElement {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    pub dx: Vec<f64>,
    pub dp: Vec<f64>,
}

impl TEStarElement {
    pub fn new(
        shape: &BundleShape,
        x: Vec<f64>,
        p: Vec<f64>,
        dx: Vec<f64>,
        dp: Vec<f64>,
    ) -> Result<Self> {
        check_len("TEStarElement::new: x", shape.n, &x)?;
        check_len("TEStarElement::new: p", shape.k, &p)?;
        check_len("TEStarElement::new: dx", shape.n, &dx)?;
        check_len("TEStarElement::new: dp", shape.k, &dp)?;
        Ok(TEStarElement { x, p, dx, dp })
    }
}

/// An element of `T*E`: a covector at the point `(x, e)`, with `mu` paired
/// against base velocities `dx` and `phi` against fiber velocities `de`.
/// Projects to `E` as `(x, e)` and to `E*` as `(x, phi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CotangentEElement {
    pub x: Vec<f64>,
    pub e: Vec<f64>,
    pub mu: Vec<f64>,
    pub phi: Vec<f64>,
}

impl CotangentEElement {
    pub fn new(
        shape: &BundleShape,
        x: Vec<f64>,
        e: Vec<f64>,
        mu: Vec<f64>,
        phi: Vec<f64>,
    ) -> Result<Self> {
        check_len("CotangentEElement::new: x", shape.n, &x)?;
        check_len("CotangentEElement::new: e", shape.k, &e)?;
        check_len("CotangentEElement::new: mu", shape.n, &mu)?;
        check_len("CotangentEElement::new: phi", shape.k, &phi)?;
        Ok(CotangentEElement { x, e, mu, phi })
    }

    /// Canonical pairing of a covector at `(x, e)` with a tangent vector at the
    /// same point of `E`: `<mu, dx> + <phi, de>`.
    pub fn pair_with(&self, xi: &TEElement) -> Result<f64> {
        if self.x != xi.x || self.e != xi.e {
            return Err(GeomError::Incompatible {
                context: "CotangentEElement::pair_with",
                detail: "covector and tangent vector sit at different points of E".into(),
            });
        }
        Ok(dot(&self.mu, &xi.dx) + dot(&self.phi, &xi.de))
    }
}

/// The vertical tangent vector at `(x, e1)` parallel to `e2`: differentiate the
/// fiber line `t -> e1 + t e2` at `t = 0`, giving `(x, e1, 0, e2)`. Its image is
/// exactly `ker T(q)`.
pub fn vertical_lift(
    shape: &BundleShape,
    e1: &[f64],
    e2: &[f64],
    x: &[f64],
) -> Result<TEElement> {
    TEElement::new(shape, x.to_vec(), e1.to_vec(), vec![0.0; shape.n], e2.to_vec())
}

/// The image of `(x, dx)` under the tangent of the zero section `0: M -> E`,
/// namely `(x, 0, dx, 0)`.
pub fn tangent_zero_section(shape: &BundleShape, x: &[f64], dx: &[f64]) -> Result<TEElement> {
    TEElement::new(shape, x.to_vec(), vec![0.0; shape.k], dx.to_vec(), vec![0.0; shape.k])
}

/// Addition in the fibers of `p_E: TE -> E` (same `(x, e)`; velocities add).
pub fn add_over_e(a: &TEElement, b: &TEElement) -> Result<TEElement> {
    if a.x != b.x || a.e != b.e {
        return Err(GeomError::Incompatible {
            context: "add_over_e",
            detail: "summands sit over different points of E".into(),
        });
    }
    Ok(TEElement {
        x: a.x.clone(),
        e: a.e.clone(),
        dx: vec_add(&a.dx, &b.dx),
        de: vec_add(&a.de, &b.de),
    })
}

/// Addition in the fibers of `T(q): TE -> TM` (same `(x, dx)`; fiber data add).
pub fn add_over_tm(a: &TEElement, b: &TEElement) -> Result<TEElement> {
    if a.x != b.x || a.dx != b.dx {
        return Err(GeomError::Incompatible {
            context: "add_over_tm",
            detail: "summands sit over different points of TM".into(),
        });
    }
    Ok(TEElement {
        x: a.x.clone(),
        e: vec_add(&a.e, &b.e),
        dx: a.dx.clone(),
        de: vec_add(&a.de, &b.de),
    })
}

/// Split a tangent vector to `E` along the zero section into its `T(0)` part and
/// its vertical (core) part: `(x, 0, dx, de) = T(0)(x, dx) + vlift(0, de)`.
pub fn zero_section_split(xi: &TEElement) -> Result<(TangentVector, Vec<f64>)> {
    if xi.e.iter().any(|&c| c != 0.0) {
        return Err(GeomError::Incompatible {
            context: "zero_section_split",
            detail: "element does not sit over the zero section (e != 0)".into(),
        });
    }
    Ok((xi.project_to_tm(), xi.de.clone()))
}

/// The tangent of the fiberwise pairing `E x_M E* -> R`: for `xi` in `TE` and
/// `eta` in `T(E*)` over the same point of `TM`, differentiate
/// `t -> <e + t de, p + t dp>` at `t = 0`, giving `<de, p> + <e, dp>`.
pub fn tangent_pairing(xi: &TEElement, eta: &TEStarElement) -> Result<f64> {
    if xi.x != eta.x || xi.dx != eta.dx {
        return Err(GeomError::Incompatible {
            context: "tangent_pairing",
            detail: "arguments project to different points of TM".into(),
        });
    }
    Ok(dot(&xi.de, &eta.p) + dot(&xi.e, &eta.dp))
}

/// The fiberwise pairing `(x, e, p) -> <e, p>` as a smooth map, so the tangent
/// pairing can be cross-checked by pushing jets through it.
pub fn pairing_map(shape: &BundleShape) -> SmoothMap {
    let BundleShape { n, k } = *shape;
    let expr = (0..k).fold(Expr::con(0.0), |acc, i| {
        acc.add(Expr::var(n + i).mul(Expr::var(n + k + i)))
    });
    SmoothMap::scalar(n + 2 * k, expr).expect("pairing_map: variables in range")
}

/// Matrix of the bilinear form `((e, de), (p, dp)) -> tangent_pairing` on the
/// fibers over a fixed point of `TM`, assembled by evaluating the pairing on
/// basis elements. Nondegeneracy means rank `2k`.
pub fn tangent_pairing_form(shape: &BundleShape) -> Result<Mat> {
    let k = shape.k;
    let x = vec![0.0; shape.n];
    let dx = vec![0.0; shape.n];
    let mut m = Mat::zeros(2 * k, 2 * k);
    for row in 0..2 * k {
        let mut e = vec![0.0; k];
        let mut de = vec![0.0; k];
        if row < k {
            e[row] = 1.0;
        } else {
            de[row - k] = 1.0;
        }
        let xi = TEElement::new(shape, x.clone(), e, dx.clone(), de)?;
        for col in 0..2 * k {
            let mut p = vec![0.0; k];
            let mut dp = vec![0.0; k];
            if col < k {
                p[col] = 1.0;
            } else {
                dp[col - k] = 1.0;
            }
            let eta = TEStarElement::new(shape, x.clone(), p, dx.clone(), dp)?;
            m.set(row, col, tangent_pairing(&xi, &eta)?);
        }
    }
    Ok(m)
}

/// The double vector bundle shape of `TE`: sides `A = E` (dim `k`) and `B = TM`
/// (dim `n`), core `E` (dim `k`), over a base of dim `n`.
pub fn te_as_dvb(shape: &BundleShape) -> DvbShape {
    DvbShape { n: shape.n, p: shape.k, q: shape.n, r: shape.k }
}

/// Element-level half of [`te_as_dvb`]: `(x, e, dx, de) -> (x; a = e, b = dx; c = de)`.
pub fn te_element_to_dvb(xi: &TEElement) -> DvbElement {
    DvbElement {
        x: xi.x.clone(),
        a: xi.e.clone(),
        b: xi.dx.clone(),
        c: xi.de.clone(),
    }
}

/// Inverse of [`te_element_to_dvb`], validated against the bundle shape.
pub fn dvb_element_to_te(shape: &BundleShape, d: &DvbElement) -> Result<TEElement> {
    TEElement::new(shape, d.x.clone(), d.a.clone(), d.b.clone(), d.c.clone())
}
