//! Canonical maps between iterated (co)tangent bundles on a chart: the involution
//! of the second tangent bundle, the Liouville form and canonical symplectic
//! structure, the anchor of the canonical Poisson structure, the Tulczyjew map
//! `T(T*M) -> T*(TM)`, the dualization map `R: T*(E*) -> T*(E)`, tangent lifts of
//! constant 2-forms, and the composite identity tying them together.
//!
//! Conventions fixed here and pinned by the composite-identity tests:
//! `theta = sum p_i dx^i`, `omega = d theta`, Hamiltonian vector fields
//! `X_f = (df/dp, -df/dx)`.

use crate::bundles::{tangent_pairing, BundleShape, CotangentEElement, TEElement, TEStarElement};
use crate::error::{GeomError, Result};
use crate::jets::{eval_jet, tangent_map, Jet2};
use crate::linalg::{dot, vec_max_abs_diff, vec_scale, Mat};
use crate::smooth::{Expr, SmoothMap};

fn check_len(context: &'static str, expected: usize, v: &[f64]) -> Result<()> {
    if v.len() != expected {
        return Err(GeomError::DimensionMismatch { context, expected, found: v.len() });
    }
    Ok(())
}

/// An element of the second tangent bundle `T^2 M`, the 2-jet of a map
/// `phi(s, t) = x + s v + t w + s t z`. The two bundle projections are
/// `p_TM(xi) = (x, v)` and `T(p_M)(xi) = (x, w)`.
#[derive(Clone, Debug, PartialEq)]
pub struct T2MElement {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub z: Vec<f64>,
}

impl T2MElement {
    pub fn new(x: Vec<f64>, v: Vec<f64>, w: Vec<f64>, z: Vec<f64>) -> Result<Self> {
        let n = x.len();
        check_len("T2MElement::new: v", n, &v)?;
        check_len("T2MElement::new: w", n, &w)?;
        check_len("T2MElement::new: z", n, &z)?;
        Ok(T2MElement { x, v, w, z })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// The projection `p_TM: T(TM) -> TM`.
    pub fn project_p_tm(&self) -> (Vec<f64>, Vec<f64>) {
        (self.x.clone(), self.v.clone())
    }

    /// The projection `T(p_M): T(TM) -> TM`.
    pub fn project_t_pm(&self) -> (Vec<f64>, Vec<f64>) {
        (self.x.clone(), self.w.clone())
    }

    fn to_jet(&self) -> Jet2 {
        Jet2 {
            x: self.x.clone(),
            ds: self.v.clone(),
            dt: self.w.clone(),
            dsdt: self.z.clone(),
        }
    }

    fn from_jet(j: Jet2) -> T2MElement {
        T2MElement { x: j.x, v: j.ds, w: j.dt, z: j.dsdt }
    }

    /// View `T^2 M` as the prolongation `T(TM)` of the bundle `TM -> M`:
    /// fiber point `v`, base velocity `w`, fiber velocity `z`.
    pub fn as_te_element(&self) -> TEElement {
        TEElement {
            x: self.x.clone(),
            e: self.v.clone(),
            dx: self.w.clone(),
            de: self.z.clone(),
        }
    }
}

/// A point of `T*M`.
#[derive(Clone, Debug, PartialEq)]
pub struct CotangentElement {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
}

/// A point of `T(T*M)`: projects to `T*M` as `(x, p)` and to `TM` as `(x, dx)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentCotangentElement {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    pub dx: Vec<f64>,
    pub dp: Vec<f64>,
}

impl TangentCotangentElement {
    pub fn new(x: Vec<f64>, p: Vec<f64>, dx: Vec<f64>, dp: Vec<f64>) -> Result<Self> {
        let n = x.len();
        check_len("TangentCotangentElement::new: p", n, &p)?;
        check_len("TangentCotangentElement::new: dx", n, &dx)?;
        check_len("TangentCotangentElement::new: dp", n, &dp)?;
        Ok(TangentCotangentElement { x, p, dx, dp })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn project_to_cotangent(&self) -> CotangentElement {
        CotangentElement { x: self.x.clone(), p: self.p.clone() }
    }

    fn as_testar_element(&self) -> TEStarElement {
        TEStarElement {
            x: self.x.clone(),
            p: self.p.clone(),
            dx: self.dx.clone(),
            dp: self.dp.clone(),
        }
    }
}

/// A point of `T*(TM)`: a covector at `(x, v)` acting on tangent vectors of `TM`
/// by `<alpha, dx> + <beta, dv>`.
#[derive(Clone, Debug, PartialEq)]
pub struct CotangentTangentElement {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl CotangentTangentElement {
    pub fn new(x: Vec<f64>, v: Vec<f64>, alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        let n = x.len();
        check_len("CotangentTangentElement::new: v", n, &v)?;
        check_len("CotangentTangentElement::new: alpha", n, &alpha)?;
        check_len("CotangentTangentElement::new: beta", n, &beta)?;
        Ok(CotangentTangentElement { x, v, alpha, beta })
    }

    /// Pair with an element of `T(TM)` at the same point `(x, v)` of `TM`: the
    /// tangent vector has base component `w` and fiber component `z`.
    pub fn pair_with(&self, eta: &T2MElement) -> Result<f64> {
        if self.x != eta.x || self.v != eta.v {
            return Err(GeomError::Incompatible {
                context: "CotangentTangentElement::pair_with",
                detail: "covector and tangent vector sit at different points of TM".into(),
            });
        }
        Ok(dot(&self.alpha, &eta.w) + dot(&self.beta, &eta.z))
    }
}

/// A point of `T*(T*M)`: a covector at `(x, p)`, with `alpha` pairing `dx` and
/// `beta` pairing `dp`.
#[derive(Clone, Debug, PartialEq)]
pub struct CotangentCotangentElement {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl CotangentCotangentElement {
    pub fn new(x: Vec<f64>, p: Vec<f64>, alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        let n = x.len();
        check_len("CotangentCotangentElement::new: p", n, &p)?;
        check_len("CotangentCotangentElement::new: alpha", n, &alpha)?;
        check_len("CotangentCotangentElement::new: beta", n, &beta)?;
        Ok(CotangentCotangentElement { x, p, alpha, beta })
    }
}

/// A point of `T*(E*)` for a bundle `E` of shape `(n, k)`: a covector at the
/// point `(x, kappa)` of `E*`, with `alpha` pairing base velocities `dx` and `a`
/// pairing fiber velocities `dkappa`.
#[derive(Clone, Debug, PartialEq)]
pub struct CotangentEStarElement {
    pub x: Vec<f64>,
    pub kappa: Vec<f64>,
    pub alpha: Vec<f64>,
    pub a: Vec<f64>,
}

impl CotangentEStarElement {
    pub fn new(
        shape: &BundleShape,
        x: Vec<f64>,
        kappa: Vec<f64>,
        alpha: Vec<f64>,
        a: Vec<f64>,
    ) -> Result<Self> {
        check_len("CotangentEStarElement::new: x", shape.n, &x)?;
        check_len("CotangentEStarElement::new: kappa", shape.k, &kappa)?;
        check_len("CotangentEStarElement::new: alpha", shape.n, &alpha)?;
        check_len("CotangentEStarElement::new: a", shape.k, &a)?;
        Ok(CotangentEStarElement { x, kappa, alpha, a })
    }

    /// Canonical pairing with a tangent vector to `E*` at the same `(x, kappa)`.
    pub fn pair_with(&self, xi: &TEStarElement) -> Result<f64> {
        if self.x != xi.x || self.kappa != xi.p {
            return Err(GeomError::Incompatible {
                context: "CotangentEStarElement::pair_with",
                detail: "covector and tangent vector sit at different points of E*".into(),
            });
        }
        Ok(dot(&self.alpha, &xi.dx) + dot(&self.a, &xi.dp))
    }
}

/// A constant-coefficient 2-form: an exactly antisymmetric matrix acting on pairs
/// of chart vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantTwoForm {
    mat: Mat,
}

impl ConstantTwoForm {
    pub fn new(mat: Mat) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(GeomError::InvalidShape(format!(
                "ConstantTwoForm requires a square matrix, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        for i in 0..mat.rows() {
            for j in 0..mat.cols() {
                if mat.get(i, j) != -mat.get(j, i) {
                    return Err(GeomError::InvalidInput(format!(
                        "ConstantTwoForm requires exact antisymmetry; entry ({i}, {j})"
                    )));
                }
            }
        }
        Ok(ConstantTwoForm { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &Mat {
        &self.mat
    }

    pub fn eval(&self, xi: &[f64], eta: &[f64]) -> Result<f64> {
        check_len("ConstantTwoForm::eval: xi", self.dim(), xi)?;
        check_len("ConstantTwoForm::eval: eta", self.dim(), eta)?;
        Ok(dot(xi, &self.mat.matvec(eta)))
    }
}

/// The canonical involution of `T^2 M`, induced on 2-jets by swapping the two
/// curve parameters: `(x, v, w, z) -> (x, w, v, z)`. It exchanges the two
/// projections and is an involution on the nose.
pub fn canonical_involution(xi: &T2MElement) -> T2MElement {
    T2MElement {
        x: xi.x.clone(),
        v: xi.w.clone(),
        w: xi.v.clone(),
        z: xi.z.clone(),
    }
}

/// The second tangent map `T^2 f`: push the defining 2-jet through `f`.
pub fn second_tangent_map(f: &SmoothMap, xi: &T2MElement) -> Result<T2MElement> {
    if f.input_dim() != xi.dim() || f.output_dim() != xi.dim() {
        return Err(GeomError::DimensionMismatch {
            context: "second_tangent_map",
            expected: xi.dim(),
            found: f.input_dim(),
        });
    }
    Ok(T2MElement::from_jet(eval_jet(f, &xi.to_jet())?))
}

/// Max-abs residual of the naturality square `J(T^2 f(xi)) = T^2 f(J(xi))`.
pub fn j_naturality_residual(f: &SmoothMap, xi: &T2MElement) -> Result<f64> {
    let lhs = canonical_involution(&second_tangent_map(f, xi)?);
    let rhs = second_tangent_map(f, &canonical_involution(xi))?;
    Ok(vec_max_abs_diff(&lhs.x, &rhs.x)
        .max(vec_max_abs_diff(&lhs.v, &rhs.v))
        .max(vec_max_abs_diff(&lhs.w, &rhs.w))
        .max(vec_max_abs_diff(&lhs.z, &rhs.z)))
}

/// The Liouville 1-form at a point of `T(T*M)`: pair the covector `p` with the
/// pushforward `(x, dx)` of the tangent vector to the base, i.e. `<p, dx>`.
pub fn liouville_form(at: &TangentCotangentElement) -> f64 {
    dot(&at.p, &at.dx)
}

/// Components of the Liouville form on the chart `(x, p)` of `T*M`, as a smooth
/// map `R^{2n} -> R^{2n}` (covector components; the last `n` vanish).
pub fn liouville_one_form_map(n: usize) -> SmoothMap {
    let components = (0..2 * n)
        .map(|j| if j < n { Expr::var(n + j) } else { Expr::con(0.0) })
        .collect();
    SmoothMap::new(2 * n, components).expect("liouville_one_form_map: variables in range")
}

/// The canonical symplectic form on the chart `(x, p)` of `T*M`, computed by
/// exterior-differentiating the Liouville form with jets:
/// `omega_{jk} = d_j theta_k - d_k theta_j`.
pub fn canonical_symplectic(n: usize) -> Result<ConstantTwoForm> {
    if n < 1 {
        return Err(GeomError::InvalidShape("canonical_symplectic requires n >= 1".into()));
    }
    let theta = liouville_one_form_map(n);
    let dim = 2 * n;
    let origin = vec![0.0; dim];
    // d[j][k] = d_j theta_k, one jet pass per direction.
    let mut d = Mat::zeros(dim, dim);
    for j in 0..dim {
        let mut dir = vec![0.0; dim];
        dir[j] = 1.0;
        let partials = tangent_map(&theta, &origin, &dir)?.1;
        for k in 0..dim {
            d.set(j, k, partials[k]);
        }
    }
    let mut omega = Mat::zeros(dim, dim);
    for j in 0..dim {
        for k in 0..dim {
            omega.set(j, k, d.get(j, k) - d.get(k, j));
        }
    }
    ConstantTwoForm::new(omega)
}

/// Closed form of the canonical symplectic matrix: `[[0, -I], [I, 0]]` in
/// `(x, p)` block order.
pub fn canonical_symplectic_closed(n: usize) -> ConstantTwoForm {
    let mut m = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        m.set(i, n + i, -1.0);
        m.set(n + i, i, 1.0);
    }
    ConstantTwoForm { mat: m }
}

/// The anchor of the canonical Poisson structure on `T*M`: send a covector at
/// `(x, p)` to the tangent vector `(dx, dp) = (beta, -alpha)` — Hamilton's
/// equations for the convention `X_f = (df/dp, -df/dx)`.
pub fn poisson_anchor_canonical(phi: &CotangentCotangentElement) -> TangentCotangentElement {
    TangentCotangentElement {
        x: phi.x.clone(),
        p: phi.p.clone(),
        dx: phi.beta.clone(),
        dp: vec_scale(-1.0, &phi.alpha),
    }
}

/// The Tulczyjew map `T(T*M) -> T*(TM)`, defined as the dual of the canonical
/// involution under the tangent pairing: `Theta(xi)` is the unique covector at
/// `(x, dx)` with `<Theta(xi), eta> = <<J(eta), xi>>` for every `eta` in `T(TM)`
/// with `p_TM(eta) = (x, dx)`. Implemented by solving that identity against a
/// basis of admissible `eta`.
pub fn tulczyjew(xi: &TangentCotangentElement) -> Result<CotangentTangentElement> {
    let n = xi.dim();
    if n < 1 {
        return Err(GeomError::InvalidShape("tulczyjew requires dim >= 1".into()));
    }
    let xi_star = xi.as_testar_element();
    let zero = vec![0.0; n];
    let mut alpha = vec![0.0; n];
    let mut beta = vec![0.0; n];
    for i in 0..n {
        let mut e_i = vec![0.0; n];
        e_i[i] = 1.0;
        // eta with base component e_i determines alpha_i ...
        let eta_w =
            T2MElement::new(xi.x.clone(), xi.dx.clone(), e_i.clone(), zero.clone())?;
        alpha[i] = tangent_pairing(&canonical_involution(&eta_w).as_te_element(), &xi_star)?;
        // ... and eta with fiber component e_i determines beta_i.
        let eta_z = T2MElement::new(xi.x.clone(), xi.dx.clone(), zero.clone(), e_i)?;
        beta[i] = tangent_pairing(&canonical_involution(&eta_z).as_te_element(), &xi_star)?;
    }
    CotangentTangentElement::new(xi.x.clone(), xi.dx.clone(), alpha, beta)
}

/// Coordinate shuffle form of [`tulczyjew`], kept as a cross-check:
/// `(x, p, dx, dp) -> (x, v = dx; alpha = dp, beta = p)`.
pub fn tulczyjew_closed_form(xi: &TangentCotangentElement) -> CotangentTangentElement {
    CotangentTangentElement {
        x: xi.x.clone(),
        v: xi.dx.clone(),
        alpha: xi.dp.clone(),
        beta: xi.p.clone(),
    }
}

/// Max-abs residual of the defining identity of [`tulczyjew`] over the full
/// basis of admissible `eta`, plus the supplied extra `(w, z)` directions.
pub fn tulczyjew_defining_residual(
    xi: &TangentCotangentElement,
    extra_directions: &[(Vec<f64>, Vec<f64>)],
) -> Result<f64> {
    let n = xi.dim();
    let theta = tulczyjew(xi)?;
    let xi_star = xi.as_testar_element();
    let mut residual: f64 = 0.0;
    let mut check = |w: Vec<f64>, z: Vec<f64>| -> Result<()> {
        let eta = T2MElement::new(xi.x.clone(), xi.dx.clone(), w, z)?;
        let lhs = theta.pair_with(&eta)?;
        let rhs = tangent_pairing(&canonical_involution(&eta).as_te_element(), &xi_star)?;
        residual = residual.max((lhs - rhs).abs());
        Ok(())
    };
    for i in 0..n {
        let mut e_i = vec![0.0; n];
        e_i[i] = 1.0;
        check(e_i.clone(), vec![0.0; n])?;
        check(vec![0.0; n], e_i)?;
    }
    for (w, z) in extra_directions {
        check(w.clone(), z.clone())?;
    }
    Ok(residual)
}

/// The canonical map `R: T*(E*) -> T*(E)`, in the closed form pinned down by
/// [`r_map_pinned`]: `(x, kappa; alpha, a) -> (x, a; -alpha, kappa)`. It covers
/// the identifications over `E` and `E*`, restricts to `-id` on the core `T*M`,
/// and reverses the canonical symplectic structures.
pub fn r_map(shape: &BundleShape, phi: &CotangentEStarElement) -> Result<CotangentEElement> {
    CotangentEElement::new(
        shape,
        phi.x.clone(),
        phi.a.clone(),
        vec_scale(-1.0, &phi.alpha),
        phi.kappa.clone(),
    )
}

/// Derive `R(phi)` from scratch: the defining property is
/// `<R(phi), eta> + <phi, xi> = <<eta, xi>>` for every pair `eta` in `T(E)` at
/// `(x, a)`, `xi` in `T(E*)` at `(x, kappa)` with the same base velocity `dx`,
/// where `<<., .>>` is the tangent pairing. Solving against basis pairs pins
/// every component; the closed form [`r_map`] must agree.
pub fn r_map_pinned(shape: &BundleShape, phi: &CotangentEStarElement) -> Result<CotangentEElement> {
    let BundleShape { n, k } = *shape;
    let zero_n = vec![0.0; n];
    let zero_k = vec![0.0; k];
    let mut out_phi = vec![0.0; k];
    for i in 0..k {
        let mut e_i = vec![0.0; k];
        e_i[i] = 1.0;
        // Fiber direction in T(E), zero velocity in T(E*).
        let eta = TEElement::new(shape, phi.x.clone(), phi.a.clone(), zero_n.clone(), e_i)?;
        let xi = TEStarElement::new(
            shape,
            phi.x.clone(),
            phi.kappa.clone(),
            zero_n.clone(),
            zero_k.clone(),
        )?;
        out_phi[i] = tangent_pairing(&eta, &xi)? - phi.pair_with(&xi)?;
    }
    let mut out_mu = vec![0.0; n];
    for j in 0..n {
        let mut e_j = vec![0.0; n];
        e_j[j] = 1.0;
        // Shared base direction e_j, no fiber velocities.
        let eta =
            TEElement::new(shape, phi.x.clone(), phi.a.clone(), e_j.clone(), zero_k.clone())?;
        let xi = TEStarElement::new(shape, phi.x.clone(), phi.kappa.clone(), e_j, zero_k.clone())?;
        out_mu[j] = tangent_pairing(&eta, &xi)? - phi.pair_with(&xi)?;
    }
    CotangentEElement::new(shape, phi.x.clone(), phi.a.clone(), out_mu, out_phi)
}

/// The full chart matrix of `R` on `(x, kappa, alpha, a) -> (x, e, mu, phi)`,
/// assembled by applying [`r_map`] to basis vectors.
pub fn r_chart_matrix(shape: &BundleShape) -> Result<Mat> {
    let BundleShape { n, k } = *shape;
    let dim = 2 * (n + k);
    let mut m = Mat::zeros(dim, dim);
    for col in 0..dim {
        let mut coords = vec![0.0; dim];
        coords[col] = 1.0;
        let phi = CotangentEStarElement::new(
            shape,
            coords[0..n].to_vec(),
            coords[n..n + k].to_vec(),
            coords[n + k..2 * n + k].to_vec(),
            coords[2 * n + k..dim].to_vec(),
        )?;
        let image = r_map(shape, &phi)?;
        let mut out = image.x;
        out.extend(image.e);
        out.extend(image.mu);
        out.extend(image.phi);
        for (row, value) in out.into_iter().enumerate() {
            m.set(row, col, value);
        }
    }
    Ok(m)
}

/// The tangent lift of a constant 2-form `omega` on `R^m` to `R^{2m}` (chart
/// `(u, du)`), computed by jets: the lift is characterized by
/// `omega^T(X^T, Y^T) = (omega(X, Y))^T`, where `f^T(u, du) = Df_u(du)` and
/// `X^T(u, du) = (X(u), DX_u(du))`. Constant and suitably chosen linear fields
/// have lifts spanning every chart direction, so all entries of the lifted
/// matrix can be read off from single jet passes.
pub fn tangent_lift_two_form(omega: &ConstantTwoForm) -> Result<ConstantTwoForm> {
    let m = omega.dim();
    if m < 1 {
        return Err(GeomError::InvalidShape("tangent_lift_two_form requires dim >= 1".into()));
    }
    let u0 = vec![0.0; m];
    let v0 = vec![1.0; m];
    // Scalar witness with f(u0) = 0 and Df_{u0}(v0) = 1, so the lift of
    // B_i(u) = f(u) e_i at (u0, v0) is the pure fiber direction (0, e_i).
    let witness = (0..m).fold(Expr::con(0.0), |acc, idx| {
        acc.add(Expr::var(idx).scaled(1.0 / m as f64))
    });
    // Component exprs of the frame fields: A_i = e_i, B_i = f e_i.
    let field = |basis: usize, lifted: bool| -> Vec<Expr> {
        (0..m)
            .map(|c| {
                if c != basis {
                    Expr::con(0.0)
                } else if lifted {
                    witness.clone()
                } else {
                    Expr::con(1.0)
                }
            })
            .collect()
    };
    let dim = 2 * m;
    let mut lifted = Mat::zeros(dim, dim);
    for row in 0..dim {
        let zc = field(row % m, row >= m);
        for col in row + 1..dim {
            let wc = field(col % m, col >= m);
            // h(u) = omega(Z(u), W(u)) as a scalar expression.
            let mut h = Expr::con(0.0);
            for a in 0..m {
                for b in 0..m {
                    let coeff = omega.matrix().get(a, b);
                    if coeff != 0.0 {
                        h = h.add(zc[a].clone().mul(wc[b].clone()).scaled(coeff));
                    }
                }
            }
            let hmap = SmoothMap::scalar(m, h)?;
            let entry = tangent_map(&hmap, &u0, &v0)?.1[0];
            lifted.set(row, col, entry);
            lifted.set(col, row, -entry);
        }
    }
    ConstantTwoForm::new(lifted)
}

/// The chart matrix of [`tulczyjew`] on `(x, p, dx, dp) -> (x, v, alpha, beta)`,
/// assembled by applying the map to basis vectors.
pub fn theta_chart_matrix(n: usize) -> Result<Mat> {
    let dim = 4 * n;
    let mut m = Mat::zeros(dim, dim);
    for col in 0..dim {
        let mut coords = vec![0.0; dim];
        coords[col] = 1.0;
        let xi = TangentCotangentElement::new(
            coords[0..n].to_vec(),
            coords[n..2 * n].to_vec(),
            coords[2 * n..3 * n].to_vec(),
            coords[3 * n..dim].to_vec(),
        )?;
        let image = tulczyjew(&xi)?;
        let mut out = image.x;
        out.extend(image.v);
        out.extend(image.alpha);
        out.extend(image.beta);
        for (row, value) in out.into_iter().enumerate() {
            m.set(row, col, value);
        }
    }
    Ok(m)
}

/// Residual of the symplectomorphism property of the Tulczyjew map: the pullback
/// of the canonical form on `T*(TM)` equals the tangent lift of the canonical
/// form on `T*M`, as constant matrices.
pub fn theta_symplectomorphism_residual(n: usize) -> Result<f64> {
    let t = theta_chart_matrix(n)?;
    let target = canonical_symplectic(2 * n)?;
    let lifted = tangent_lift_two_form(&canonical_symplectic(n)?)?;
    let pullback = target.matrix().congruence(&t);
    Ok(pullback.max_abs_diff(lifted.matrix()))
}

/// Residual of the Poisson-map property of the Tulczyjew map in the
/// constant-coefficient sense: the pushforward of the bivector inverse to the
/// lifted form equals the bivector inverse of the canonical form.
pub fn theta_poisson_residual(n: usize) -> Result<f64> {
    let t = theta_chart_matrix(n)?;
    let lifted = tangent_lift_two_form(&canonical_symplectic(n)?)?;
    let target = canonical_symplectic(2 * n)?;
    let pushed = lifted.matrix().inverse()?.pushforward(&t);
    Ok(pushed.max_abs_diff(&target.matrix().inverse()?))
}

/// Max-abs residual of the composite identity: running a covector on `T*M`
/// through the canonical anchor and then the Tulczyjew map must agree with `R`
/// for the bundle `TM -> M`. This single identity pins all sign conventions.
pub fn proposition_composite_residual(sample: &CotangentCotangentElement) -> Result<f64> {
    let n = sample.x.len();
    let shape = BundleShape::new(n, n)?;
    let composite = tulczyjew(&poisson_anchor_canonical(sample))?;
    let phi = CotangentEStarElement::new(
        &shape,
        sample.x.clone(),
        sample.p.clone(),
        sample.alpha.clone(),
        sample.beta.clone(),
    )?;
    let direct = r_map(&shape, &phi)?;
    Ok(vec_max_abs_diff(&composite.x, &direct.x)
        .max(vec_max_abs_diff(&composite.v, &direct.e))
        .max(vec_max_abs_diff(&composite.alpha, &direct.mu))
        .max(vec_max_abs_diff(&composite.beta, &direct.phi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::builtin_diffeos;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
    }

    #[test]
    fn involution_swaps_velocities() {
        let xi = T2MElement::new(
            vec![0.0, 0.0],
            vec![1.0, 2.0],
            vec![3.0, 4.0],
            vec![5.0, 6.0],
        )
        .unwrap();
        let j = canonical_involution(&xi);
        assert_eq!(j.v, vec![3.0, 4.0]);
        assert_eq!(j.w, vec![1.0, 2.0]);
        assert_eq!(j.z, vec![5.0, 6.0]);
        assert_eq!(canonical_involution(&j), xi);
        // J exchanges the two projections.
        assert_eq!(j.project_p_tm(), xi.project_t_pm());
        assert_eq!(j.project_t_pm(), xi.project_p_tm());
    }

    #[test]
    fn involution_fixes_symmetric_squares() {
        let xi = T2MElement::new(vec![1.0], vec![2.0], vec![2.0], vec![3.0]).unwrap();
        assert_eq!(canonical_involution(&xi), xi);
    }

    #[test]
    fn naturality_identity_and_linear_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 3;
        let id = SmoothMap::identity(n);
        let lin = SmoothMap::linear(
            n,
            &[
                vec![1.0, 2.0, 0.0],
                vec![0.5, -1.0, 0.25],
                vec![0.0, 1.0, 1.0],
            ],
        )
        .unwrap();
        for _ in 0..50 {
            let xi = T2MElement::new(
                rand_vec(&mut rng, n),
                rand_vec(&mut rng, n),
                rand_vec(&mut rng, n),
                rand_vec(&mut rng, n),
            )
            .unwrap();
            assert_eq!(j_naturality_residual(&id, &xi).unwrap(), 0.0);
            assert_eq!(j_naturality_residual(&lin, &xi).unwrap(), 0.0);
        }
    }

    #[test]
    fn naturality_for_nonlinear_diffeos() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=4 {
            for (name, f) in builtin_diffeos(n) {
                for _ in 0..50 {
                    let xi = T2MElement::new(
                        rand_vec(&mut rng, n),
                        rand_vec(&mut rng, n),
                        rand_vec(&mut rng, n),
                        rand_vec(&mut rng, n),
                    )
                    .unwrap();
                    let res = j_naturality_residual(&f, &xi).unwrap();
                    assert!(res <= 1e-12, "naturality residual {res} for {name}");
                }
            }
        }
    }

    #[test]
    fn liouville_frozen_value_and_degenerate_cases() {
        let at = TangentCotangentElement::new(
            vec![0.0, 0.0],
            vec![1.0, 2.0],
            vec![3.0, 4.0],
            vec![9.0, 9.0],
        )
        .unwrap();
        assert_eq!(liouville_form(&at), 11.0);
        let vertical =
            TangentCotangentElement::new(vec![0.0], vec![5.0], vec![0.0], vec![7.0]).unwrap();
        assert_eq!(liouville_form(&vertical), 0.0);
        let zero_p =
            TangentCotangentElement::new(vec![0.0], vec![0.0], vec![3.0], vec![7.0]).unwrap();
        assert_eq!(liouville_form(&zero_p), 0.0);
    }

    #[test]
    fn canonical_symplectic_matches_closed_form() {
        for n in 1..=4 {
            let jet = canonical_symplectic(n).unwrap();
            let closed = canonical_symplectic_closed(n);
            assert!(jet.matrix().max_abs_diff(closed.matrix()) <= 1e-12);
        }
        let w1 = canonical_symplectic(1).unwrap();
        assert_eq!(w1.matrix().get(0, 1), -1.0);
        assert_eq!(w1.matrix().get(1, 0), 1.0);
        assert_eq!(w1.matrix().get(0, 0), 0.0);
        assert_eq!(w1.matrix().get(1, 1), 0.0);
    }

    #[test]
    fn symplectic_form_is_alternating() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let w = canonical_symplectic(3).unwrap();
        for _ in 0..100 {
            let xi = rand_vec(&mut rng, 6);
            assert!(w.eval(&xi, &xi).unwrap().abs() <= 1e-14);
        }
    }

    #[test]
    fn anchor_frozen_values() {
        let phi = CotangentCotangentElement::new(vec![0.5], vec![0.25], vec![2.0], vec![3.0])
            .unwrap();
        let out = poisson_anchor_canonical(&phi);
        assert_eq!(out.dx, vec![3.0]);
        assert_eq!(out.dp, vec![-2.0]);
        // f(x, p) = p has differential (0, 1): free motion.
        let df = CotangentCotangentElement::new(vec![0.0], vec![1.0], vec![0.0], vec![1.0])
            .unwrap();
        let free = poisson_anchor_canonical(&df);
        assert_eq!(free.dx, vec![1.0]);
        assert_eq!(free.dp, vec![0.0]);
        // Zero covector.
        let zero = CotangentCotangentElement::new(vec![0.0], vec![1.0], vec![0.0], vec![0.0])
            .unwrap();
        let z = poisson_anchor_canonical(&zero);
        assert!(z.dx.iter().chain(&z.dp).all(|&c| c == 0.0));
    }

    #[test]
    fn tulczyjew_frozen_example_and_closed_form() {
        let xi = TangentCotangentElement::new(vec![1.0], vec![2.0], vec![3.0], vec![4.0])
            .unwrap();
        let out = tulczyjew(&xi).unwrap();
        assert_eq!(out.x, vec![1.0]);
        assert_eq!(out.v, vec![3.0]);
        assert_eq!(out.alpha, vec![4.0]);
        assert_eq!(out.beta, vec![2.0]);
        assert_eq!(out, tulczyjew_closed_form(&xi));

        // Constant jets: velocity zero lands on the covector (0, p) at (x, 0).
        let rest = TangentCotangentElement::new(vec![1.0], vec![2.0], vec![0.0], vec![0.0])
            .unwrap();
        let out = tulczyjew(&rest).unwrap();
        assert_eq!(out.v, vec![0.0]);
        assert_eq!(out.alpha, vec![0.0]);
        assert_eq!(out.beta, vec![2.0]);
    }

    #[test]
    fn tulczyjew_defining_identity_on_random_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=4 {
            for _ in 0..100 {
                let xi = TangentCotangentElement::new(
                    rand_vec(&mut rng, n),
                    rand_vec(&mut rng, n),
                    rand_vec(&mut rng, n),
                    rand_vec(&mut rng, n),
                )
                .unwrap();
                let extras: Vec<(Vec<f64>, Vec<f64>)> = (0..4)
                    .map(|_| (rand_vec(&mut rng, n), rand_vec(&mut rng, n)))
                    .collect();
                let res = tulczyjew_defining_residual(&xi, &extras).unwrap();
                assert!(res <= 1e-12, "defining identity residual {res}");
                assert_eq!(tulczyjew(&xi).unwrap(), tulczyjew_closed_form(&xi));
            }
        }
    }

    #[test]
    fn r_map_frozen_example() {
        let shape = BundleShape::new(1, 2).unwrap();
        let phi = CotangentEStarElement::new(
            &shape,
            vec![0.0],
            vec![1.0, 2.0],
            vec![3.0],
            vec![4.0, 5.0],
        )
        .unwrap();
        let out = r_map(&shape, &phi).unwrap();
        assert_eq!(out.e, vec![4.0, 5.0]);
        assert_eq!(out.mu, vec![-3.0]);
        assert_eq!(out.phi, vec![1.0, 2.0]);
    }

    #[test]
    fn r_map_restricts_to_minus_identity_on_core() {
        let shape = BundleShape::new(3, 2).unwrap();
        let phi = CotangentEStarElement::new(
            &shape,
            vec![0.1, 0.2, 0.3],
            vec![0.0, 0.0],
            vec![1.5, -2.5, 3.5],
            vec![0.0, 0.0],
        )
        .unwrap();
        let out = r_map(&shape, &phi).unwrap();
        assert!(out.e.iter().all(|&c| c == 0.0));
        assert!(out.phi.iter().all(|&c| c == 0.0));
        assert_eq!(out.mu, vec![-1.5, 2.5, -3.5]);
    }

    #[test]
    fn r_map_agrees_with_pinned_derivation() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (n, k) in [(1, 1), (2, 3), (3, 2), (1, 4)] {
            let shape = BundleShape::new(n, k).unwrap();
            for _ in 0..100 {
                let phi = CotangentEStarElement::new(
                    &shape,
                    rand_vec(&mut rng, n),
                    rand_vec(&mut rng, k),
                    rand_vec(&mut rng, n),
                    rand_vec(&mut rng, k),
                )
                .unwrap();
                assert_eq!(r_map(&shape, &phi).unwrap(), r_map_pinned(&shape, &phi).unwrap());
            }
        }
    }

    #[test]
    fn r_defining_identity_against_random_compatible_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (n, k) in [(1, 1), (2, 2), (2, 3)] {
            let shape = BundleShape::new(n, k).unwrap();
            for _ in 0..100 {
                let phi = CotangentEStarElement::new(
                    &shape,
                    rand_vec(&mut rng, n),
                    rand_vec(&mut rng, k),
                    rand_vec(&mut rng, n),
                    rand_vec(&mut rng, k),
                )
                .unwrap();
                let image = r_map(&shape, &phi).unwrap();
                let dx = rand_vec(&mut rng, n);
                let eta = TEElement::new(
                    &shape,
                    phi.x.clone(),
                    phi.a.clone(),
                    dx.clone(),
                    rand_vec(&mut rng, k),
                )
                .unwrap();
                let xi = TEStarElement::new(
                    &shape,
                    phi.x.clone(),
                    phi.kappa.clone(),
                    dx,
                    rand_vec(&mut rng, k),
                )
                .unwrap();
                let lhs = image.pair_with(&eta).unwrap() + phi.pair_with(&xi).unwrap();
                let rhs = tangent_pairing(&eta, &xi).unwrap();
                assert!((lhs - rhs).abs() <= 1e-12, "pairing identity: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn r_is_linear_bijection_on_fibers() {
        for (n, k) in [(1, 1), (2, 3), (3, 2)] {
            let shape = BundleShape::new(n, k).unwrap();
            let m = r_chart_matrix(&shape).unwrap();
            assert_eq!(m.rank(1e-9), 2 * (n + k));
        }
    }

    #[test]
    fn r_reverses_the_symplectic_structures() {
        for (n, k) in [(1, 1), (2, 2), (2, 3), (3, 1)] {
            let shape = BundleShape::new(n, k).unwrap();
            let r = r_chart_matrix(&shape).unwrap();
            let omega = canonical_symplectic(n + k).unwrap();
            let pullback = omega.matrix().congruence(&r);
            let negated = omega.matrix().scale(-1.0);
            assert!(
                pullback.max_abs_diff(&negated) <= 1e-12,
                "anti-symplectomorphism failed for (n, k) = ({n}, {k})"
            );
        }
    }

    #[test]
    fn r_is_additive_over_both_structures() {
        let shape = BundleShape::new(2, 2).unwrap();
        let x = vec![0.1, 0.2];
        let kappa = vec![1.0, 2.0];
        let a = vec![3.0, 4.0];
        // Same (x, kappa): the (alpha, a) parts add.
        let p1 = CotangentEStarElement::new(&shape, x.clone(), kappa.clone(), vec![1.0, 0.0], vec![0.5, 0.5])
            .unwrap();
        let p2 = CotangentEStarElement::new(&shape, x.clone(), kappa.clone(), vec![0.0, 2.0], vec![1.5, -0.5])
            .unwrap();
        let sum = CotangentEStarElement::new(&shape, x.clone(), kappa.clone(), vec![1.0, 2.0], vec![2.0, 0.0])
            .unwrap();
        let (r1, r2, rs) = (
            r_map(&shape, &p1).unwrap(),
            r_map(&shape, &p2).unwrap(),
            r_map(&shape, &sum).unwrap(),
        );
        assert_eq!(rs.mu, vec![r1.mu[0] + r2.mu[0], r1.mu[1] + r2.mu[1]]);
        assert_eq!(rs.e, vec![r1.e[0] + r2.e[0], r1.e[1] + r2.e[1]]);
        assert_eq!(rs.phi, r1.phi);
        // Same (x, a): the (kappa, alpha) parts add.
        let q1 = CotangentEStarElement::new(&shape, x.clone(), vec![1.0, 1.0], vec![1.0, 0.0], a.clone())
            .unwrap();
        let q2 = CotangentEStarElement::new(&shape, x.clone(), vec![2.0, -1.0], vec![0.0, 3.0], a.clone())
            .unwrap();
        let qs = CotangentEStarElement::new(&shape, x, vec![3.0, 0.0], vec![1.0, 3.0], a).unwrap();
        let (r1, r2, rs) = (
            r_map(&shape, &q1).unwrap(),
            r_map(&shape, &q2).unwrap(),
            r_map(&shape, &qs).unwrap(),
        );
        assert_eq!(rs.phi, vec![r1.phi[0] + r2.phi[0], r1.phi[1] + r2.phi[1]]);
        assert_eq!(rs.mu, vec![r1.mu[0] + r2.mu[0], r1.mu[1] + r2.mu[1]]);
        assert_eq!(rs.e, r1.e);
    }

    #[test]
    fn tangent_lift_frozen_couplings_for_n1() {
        let lifted = tangent_lift_two_form(&canonical_symplectic(1).unwrap()).unwrap();
        let m = lifted.matrix();
        assert_eq!(m.rows(), 4);
        // Coordinates (x, p, dx, dp): couplings x <-> dp and p <-> dx.
        assert_eq!(m.get(0, 3), -1.0);
        assert_eq!(m.get(3, 0), 1.0);
        assert_eq!(m.get(1, 2), 1.0);
        assert_eq!(m.get(2, 1), -1.0);
        for (i, j) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            assert_eq!(m.get(i, j), 0.0);
            assert_eq!(m.get(j, i), 0.0);
        }
    }

    #[test]
    fn tangent_lift_is_block_swap_of_the_base_form() {
        for n in 1..=3 {
            let base = canonical_symplectic(n).unwrap();
            let lifted = tangent_lift_two_form(&base).unwrap();
            let m = 2 * n;
            for i in 0..m {
                for j in 0..m {
                    assert!((lifted.matrix().get(i, j)).abs() <= 1e-12);
                    assert!((lifted.matrix().get(m + i, m + j)).abs() <= 1e-12);
                    assert!(
                        (lifted.matrix().get(i, m + j) - base.matrix().get(i, j)).abs() <= 1e-12
                    );
                    assert!(
                        (lifted.matrix().get(m + i, j) - base.matrix().get(i, j)).abs() <= 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn tangent_lift_alternating_and_flip_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let lifted = tangent_lift_two_form(&canonical_symplectic(2).unwrap()).unwrap();
        for _ in 0..50 {
            let xi = rand_vec(&mut rng, 8);
            assert!(lifted.eval(&xi, &xi).unwrap().abs() <= 1e-14);
        }
        // The flip (u, du) -> (du, u) preserves the lifted form.
        let m = 4;
        let mut flip = Mat::zeros(2 * m, 2 * m);
        for i in 0..m {
            flip.set(i, m + i, 1.0);
            flip.set(m + i, i, 1.0);
        }
        let conj = lifted.matrix().congruence(&flip);
        assert!(conj.max_abs_diff(lifted.matrix()) <= 1e-12);
    }

    #[test]
    fn theta_is_a_symplectomorphism_onto_the_lifted_structure() {
        for n in 1..=3 {
            let res = theta_symplectomorphism_residual(n).unwrap();
            assert!(res <= 1e-12, "pullback residual {res} at n = {n}");
            let poisson = theta_poisson_residual(n).unwrap();
            assert!(poisson <= 1e-12, "bivector residual {poisson} at n = {n}");
        }
    }

    #[test]
    fn composite_identity_frozen_example() {
        let sample = CotangentCotangentElement::new(vec![0.7], vec![0.9], vec![2.0], vec![3.0])
            .unwrap();
        assert_eq!(proposition_composite_residual(&sample).unwrap(), 0.0);
        let composite = tulczyjew(&poisson_anchor_canonical(&sample)).unwrap();
        assert_eq!(composite.v, vec![3.0]);
        assert_eq!(composite.alpha, vec![-2.0]);
        assert_eq!(composite.beta, vec![0.9]);
    }

    #[test]
    fn composite_identity_on_random_covectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in 1..=4 {
            for _ in 0..250 {
                let sample = CotangentCotangentElement::new(
                    rand_vec(&mut rng, n),
                    rand_vec(&mut rng, n),
                    rand_vec(&mut rng, n),
                    rand_vec(&mut rng, n),
                )
                .unwrap();
                assert!(proposition_composite_residual(&sample).unwrap() <= 1e-12);
            }
        }
    }

    #[test]
    fn zero_covector_composite_residual_is_zero() {
        let sample =
            CotangentCotangentElement::new(vec![0.3, 0.4], vec![0.5, 0.6], vec![0.0; 2], vec![0.0; 2])
                .unwrap();
        assert_eq!(proposition_composite_residual(&sample).unwrap(), 0.0);
    }
}
