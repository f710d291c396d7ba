//! Abstract double vector bundles on a chart.
//!
//! An element carries a base point `x`, projections `a` and `b` to the two side
//! bundles, and a core coordinate `c`. The two fiberwise additions (over the `A`
//! side and over the `B` side) satisfy the interchange law, the core is the joint
//! kernel of both projections, and each structure has a dual; the two duals are
//! themselves in duality over the dual of the core.

use crate::bundles::{BundleShape, CotangentEElement};
use crate::error::{GeomError, Result};
use crate::linalg::{dot, vec_add, vec_max_abs_diff, vec_scale, Mat};

/// Dimensions of a double vector bundle chart: base `n`, side fibers `p` (over
/// `A`) and `q` (over `B`), core `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DvbShape {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub r: usize,
}

impl DvbShape {
    pub fn new(n: usize, p: usize, q: usize, r: usize) -> Result<Self> {
        if p + q + r < 1 {
            return Err(GeomError::InvalidShape(
                "DvbShape requires p + q + r >= 1".into(),
            ));
        }
        Ok(DvbShape { n, p, q, r })
    }
}

fn check_len(context: &'static str, expected: usize, v: &[f64]) -> Result<()> {
    if v.len() != expected {
        return Err(GeomError::DimensionMismatch { context, expected, found: v.len() });
    }
    Ok(())
}

/// An element of the double vector bundle: `(x; a, b; c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DvbElement {
    pub x: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl DvbElement {
    pub fn new(
        shape: &DvbShape,
        x: Vec<f64>,
        a: Vec<f64>,
        b: Vec<f64>,
        c: Vec<f64>,
    ) -> Result<Self> {
        check_len("DvbElement::new: x", shape.n, &x)?;
        check_len("DvbElement::new: a", shape.p, &a)?;
        check_len("DvbElement::new: b", shape.q, &b)?;
        check_len("DvbElement::new: c", shape.r, &c)?;
        Ok(DvbElement { x, a, b, c })
    }

    /// Projection to the side bundle `A`.
    pub fn project_to_a(&self) -> (Vec<f64>, Vec<f64>) {
        (self.x.clone(), self.a.clone())
    }

    /// Projection to the side bundle `B`.
    pub fn project_to_b(&self) -> (Vec<f64>, Vec<f64>) {
        (self.x.clone(), self.b.clone())
    }

    /// Core elements are exactly those killed by both projections.
    pub fn is_core(&self) -> bool {
        self.a.iter().all(|&v| v == 0.0) && self.b.iter().all(|&v| v == 0.0)
    }

    fn max_abs_diff(&self, other: &DvbElement) -> f64 {
        vec_max_abs_diff(&self.x, &other.x)
            .max(vec_max_abs_diff(&self.a, &other.a))
            .max(vec_max_abs_diff(&self.b, &other.b))
            .max(vec_max_abs_diff(&self.c, &other.c))
    }
}

/// Addition in the fibers of the projection to `A`: same `(x, a)`, the `b` and
/// `c` parts add.
pub fn add_over_a(d1: &DvbElement, d2: &DvbElement) -> Result<DvbElement> {
    if d1.x != d2.x || d1.a != d2.a {
        return Err(GeomError::Incompatible {
            context: "add_over_a",
            detail: "summands project to different points of A".into(),
        });
    }
    Ok(DvbElement {
        x: d1.x.clone(),
        a: d1.a.clone(),
        b: vec_add(&d1.b, &d2.b),
        c: vec_add(&d1.c, &d2.c),
    })
}

/// Addition in the fibers of the projection to `B`: same `(x, b)`, the `a` and
/// `c` parts add.
pub fn add_over_b(d1: &DvbElement, d2: &DvbElement) -> Result<DvbElement> {
    if d1.x != d2.x || d1.b != d2.b {
        return Err(GeomError::Incompatible {
            context: "add_over_b",
            detail: "summands project to different points of B".into(),
        });
    }
    Ok(DvbElement {
        x: d1.x.clone(),
        a: vec_add(&d1.a, &d2.a),
        b: d1.b.clone(),
        c: vec_add(&d1.c, &d2.c),
    })
}

/// Scalar action of the `A`-side structure: scales the `B`-fiber data `(b, c)`.
pub fn scale_over_a(d: &DvbElement, t: f64) -> DvbElement {
    DvbElement {
        x: d.x.clone(),
        a: d.a.clone(),
        b: vec_scale(t, &d.b),
        c: vec_scale(t, &d.c),
    }
}

/// Scalar action of the `B`-side structure: scales `(a, c)`.
pub fn scale_over_b(d: &DvbElement, t: f64) -> DvbElement {
    DvbElement {
        x: d.x.clone(),
        a: vec_scale(t, &d.a),
        b: d.b.clone(),
        c: vec_scale(t, &d.c),
    }
}

/// Residual of the interchange law
/// `(d1 +_B d2) +_A (d3 +_B d4) = (d1 +_A d3) +_B (d2 +_A d4)`.
///
/// Both sides are defined exactly when the quadruple forms a square:
/// shared `x`, with `b1 = b2`, `b3 = b4`, `a1 = a3`, `a2 = a4`. Both orders then
/// reduce to `(x; a1 + a2, b1 + b3, c1 + c2 + c3 + c4)`; the residual is the
/// max-abs difference of the two evaluation orders.
pub fn interchange_check(
    d1: &DvbElement,
    d2: &DvbElement,
    d3: &DvbElement,
    d4: &DvbElement,
) -> Result<f64> {
    let lhs = add_over_a(&add_over_b(d1, d2)?, &add_over_b(d3, d4)?)?;
    let rhs = add_over_b(&add_over_a(d1, d3)?, &add_over_a(d2, d4)?)?;
    Ok(lhs.max_abs_diff(&rhs))
}

/// The injection of the core: `(x, c) -> (x; 0, 0; c)`, the joint kernel of both
/// projections. The two additions restrict to the same vector space structure on
/// its image.
pub fn core_inject(shape: &DvbShape, x: &[f64], c: &[f64]) -> Result<DvbElement> {
    DvbElement::new(shape, x.to_vec(), vec![0.0; shape.p], vec![0.0; shape.q], c.to_vec())
}

/// An element of the vertical dual `D^{*V}`: a functional on the `A`-fibers of
/// `D`, sitting over `(x, a)` with core-dual coordinate `kappa` (pairs with `c`)
/// and `phi` (pairs with `b`). Projects to `A` as `(x, a)` and to `C*` as
/// `(x, kappa)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DvbVDualElement {
    pub x: Vec<f64>,
    pub a: Vec<f64>,
    pub kappa: Vec<f64>,
    pub phi: Vec<f64>,
}

impl DvbVDualElement {
    pub fn new(
        shape: &DvbShape,
        x: Vec<f64>,
        a: Vec<f64>,
        kappa: Vec<f64>,
        phi: Vec<f64>,
    ) -> Result<Self> {
        check_len("DvbVDualElement::new: x", shape.n, &x)?;
        check_len("DvbVDualElement::new: a", shape.p, &a)?;
        check_len("DvbVDualElement::new: kappa", shape.r, &kappa)?;
        check_len("DvbVDualElement::new: phi", shape.q, &phi)?;
        Ok(DvbVDualElement { x, a, kappa, phi })
    }
}

/// An element of the horizontal dual `D^{*H}`: a functional on the `B`-fibers,
/// over `(x, b)`, with `kappa` pairing `c` and `psi` pairing `a`. Projects to
/// `B` as `(x, b)` and to `C*` as `(x, kappa)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DvbHDualElement {
    pub x: Vec<f64>,
    pub b: Vec<f64>,
    pub kappa: Vec<f64>,
    pub psi: Vec<f64>,
}

impl DvbHDualElement {
    pub fn new(
        shape: &DvbShape,
        x: Vec<f64>,
        b: Vec<f64>,
        kappa: Vec<f64>,
        psi: Vec<f64>,
    ) -> Result<Self> {
        check_len("DvbHDualElement::new: x", shape.n, &x)?;
        check_len("DvbHDualElement::new: b", shape.q, &b)?;
        check_len("DvbHDualElement::new: kappa", shape.r, &kappa)?;
        check_len("DvbHDualElement::new: psi", shape.p, &psi)?;
        Ok(DvbHDualElement { x, b, kappa, psi })
    }
}

/// Pairing `<Phi, d>_A` of a vertical-dual element with an element of `D` over
/// the same point of `A`: `<phi, b> + <kappa, c>`.
pub fn vdual_pairing(phi: &DvbVDualElement, d: &DvbElement) -> Result<f64> {
    if phi.x != d.x || phi.a != d.a {
        return Err(GeomError::Incompatible {
            context: "vdual_pairing",
            detail: "arguments project to different points of A".into(),
        });
    }
    Ok(dot(&phi.phi, &d.b) + dot(&phi.kappa, &d.c))
}

/// Pairing `<Psi, d>_B` of a horizontal-dual element with an element of `D` over
/// the same point of `B`: `<psi, a> + <kappa, c>`.
pub fn hdual_pairing(psi: &DvbHDualElement, d: &DvbElement) -> Result<f64> {
    if psi.x != d.x || psi.b != d.b {
        return Err(GeomError::Incompatible {
            context: "hdual_pairing",
            detail: "arguments project to different points of B".into(),
        });
    }
    Ok(dot(&psi.psi, &d.a) + dot(&psi.kappa, &d.c))
}

/// Addition of `D^{*V}` in the fibers over `C*`: same `(x, kappa)`, the `a` and
/// `phi` parts add.
pub fn vdual_add_over_cstar(
    p1: &DvbVDualElement,
    p2: &DvbVDualElement,
) -> Result<DvbVDualElement> {
    if p1.x != p2.x || p1.kappa != p2.kappa {
        return Err(GeomError::Incompatible {
            context: "vdual_add_over_cstar",
            detail: "summands project to different points of C*".into(),
        });
    }
    Ok(DvbVDualElement {
        x: p1.x.clone(),
        a: vec_add(&p1.a, &p2.a),
        kappa: p1.kappa.clone(),
        phi: vec_add(&p1.phi, &p2.phi),
    })
}

/// Addition of `D^{*H}` in the fibers over `C*`: same `(x, kappa)`, the `b` and
/// `psi` parts add.
pub fn hdual_add_over_cstar(
    p1: &DvbHDualElement,
    p2: &DvbHDualElement,
) -> Result<DvbHDualElement> {
    if p1.x != p2.x || p1.kappa != p2.kappa {
        return Err(GeomError::Incompatible {
            context: "hdual_add_over_cstar",
            detail: "summands project to different points of C*".into(),
        });
    }
    Ok(DvbHDualElement {
        x: p1.x.clone(),
        b: vec_add(&p1.b, &p2.b),
        kappa: p1.kappa.clone(),
        psi: vec_add(&p1.psi, &p2.psi),
    })
}

/// The pairing of the two duals over a shared point of `C*`, computed through a
/// lift: `<Phi, Psi> = <Phi, d>_A - <Psi, d>_B` where `d` is any element of `D`
/// over `(Phi.a, Psi.b)`. The `<kappa, c>` contributions cancel, so the value is
/// independent of the lift's core part; the deterministic choice here is `c = 0`,
/// which makes the value `<phi, b> - <psi, a>`.
pub fn theorem1_pairing(phi: &DvbVDualElement, psi: &DvbHDualElement) -> Result<f64> {
    theorem1_pairing_with_lift(phi, psi, &vec![0.0; phi.kappa.len()])
}

/// Same as [`theorem1_pairing`] but with an explicit core part for the lift,
/// used to exercise lift-independence.
pub fn theorem1_pairing_with_lift(
    phi: &DvbVDualElement,
    psi: &DvbHDualElement,
    c: &[f64],
) -> Result<f64> {
    if phi.x != psi.x || phi.kappa != psi.kappa {
        return Err(GeomError::Incompatible {
            context: "theorem1_pairing",
            detail: "arguments project to different points of C*".into(),
        });
    }
    check_len("theorem1_pairing_with_lift: c", phi.kappa.len(), c)?;
    let d = DvbElement {
        x: phi.x.clone(),
        a: phi.a.clone(),
        b: psi.b.clone(),
        c: c.to_vec(),
    };
    Ok(vdual_pairing(phi, &d)? - hdual_pairing(psi, &d)?)
}

/// The fiberwise bilinear form realizing the duality of `D^{*V}` and `D^{*H}`
/// over `C*`, together with its rank.
#[derive(Clone, Debug)]
pub struct DualityIso {
    /// Rows indexed by the `(a, phi)` fiber basis of `D^{*V}`, columns by the
    /// `(b, psi)` fiber basis of `D^{*H}`; entry = pairing of the basis elements.
    pub matrix: Mat,
    pub rank: usize,
}

/// Assemble the duality form by evaluating [`theorem1_pairing`] on basis
/// elements of the two fibers over a fixed point of `C*`. Nondegeneracy is the
/// statement `rank = p + q`.
pub fn duality_iso(shape: &DvbShape) -> Result<DualityIso> {
    let DvbShape { n, p, q, r } = *shape;
    let x = vec![0.0; n];
    let kappa = vec![0.0; r];
    let dim = p + q;
    let mut matrix = Mat::zeros(dim, dim);
    for row in 0..dim {
        let mut a = vec![0.0; p];
        let mut phi = vec![0.0; q];
        if row < p {
            a[row] = 1.0;
        } else {
            phi[row - p] = 1.0;
        }
        let pv = DvbVDualElement::new(shape, x.clone(), a, kappa.clone(), phi)?;
        for col in 0..dim {
            let mut b = vec![0.0; q];
            let mut psi = vec![0.0; p];
            if col < q {
                b[col] = 1.0;
            } else {
                psi[col - q] = 1.0;
            }
            let ph = DvbHDualElement::new(shape, x.clone(), b, kappa.clone(), psi)?;
            matrix.set(row, col, theorem1_pairing(&pv, &ph)?);
        }
    }
    let rank = matrix.rank(1e-9);
    Ok(DualityIso { matrix, rank })
}

/// Identify `T*E` with the vertical dual of `TE` (as a double vector bundle with
/// sides `E` and `TM` and core `E`): the covector `(x, e, mu, phi)` acts on
/// `(x, e, dx, de)` by `<mu, dx> + <phi, de>`, which is `<Phi, d>_A` for the
/// vertical-dual element with `a = e`, `kappa = phi`, `phi`-slot `= mu`.
pub fn cotangent_to_vdual(
    shape: &BundleShape,
    el: &CotangentEElement,
) -> Result<DvbVDualElement> {
    let dvb_shape = crate::bundles::te_as_dvb(shape);
    DvbVDualElement::new(
        &dvb_shape,
        el.x.clone(),
        el.e.clone(),
        el.phi.clone(),
        el.mu.clone(),
    )
}

/// Inverse of [`cotangent_to_vdual`].
pub fn vdual_to_cotangent(
    shape: &BundleShape,
    phi: &DvbVDualElement,
) -> Result<CotangentEElement> {
    CotangentEElement::new(
        shape,
        phi.x.clone(),
        phi.a.clone(),
        phi.phi.clone(),
        phi.kappa.clone(),
    )
}
