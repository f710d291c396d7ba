//! Poisson bivectors on chart domains: brackets, the anchor `alpha -> Pi(alpha)`,
//! the Jacobi obstruction (jacobiator), the Koszul bracket of 1-forms, and the
//! anchor homomorphism property, all differentiated with jets.
//!
//! Orientation conventions, fixed once and shared by every consumer:
//! `{f, g} = <df, Pi dg>` and anchor `X_f = Pi df`, so the canonical bivector on
//! `(x, p)` gives `{x, p} = 1` and `X_f = (df/dp, -df/dx)`. With the pairing
//! `Pi(alpha, beta) = <beta, Pi alpha>` the Leibniz-compatible Koszul bracket
//! satisfies `[df, dg] = d<dg, Pi df> = -d{f, g}` on exact forms.

use crate::error::{GeomError, Result};
use crate::jets::{jet_gradient, jet_jacobian, partial_with_directional, tangent_map};
use crate::linalg::{dot, vec_max_abs, Mat};
use crate::smooth::{Expr, SmoothMap};

/// A bivector field on `R^m`: an antisymmetric matrix of expressions
/// `Pi^{ab}(x)`, stored row-major as a smooth map `R^m -> R^{m^2}` so the same
/// tree feeds pointwise evaluation and jet differentiation.
#[derive(Clone, Debug)]
pub struct PoissonBivector {
    name: String,
    dim: usize,
    entries: SmoothMap,
}

impl PoissonBivector {
    pub fn new(name: &str, dim: usize, entries: Vec<Expr>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(GeomError::DimensionMismatch {
                context: "PoissonBivector::new: entries must be dim^2, row-major",
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(PoissonBivector {
            name: name.to_string(),
            dim,
            entries: SmoothMap::new(dim, entries)?,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, a: usize, b: usize) -> &Expr {
        &self.entries.components()[a * self.dim + b]
    }

    /// The entries as a smooth map `R^m -> R^{m^2}`, for jet-differentiating
    /// `Pi` in a chosen direction.
    pub fn entries_map(&self) -> &SmoothMap {
        &self.entries
    }

    /// Evaluate the coefficient matrix at a point.
    pub fn matrix_at(&self, x: &[f64]) -> Result<Mat> {
        let flat = self.entries.eval(x)?;
        let mut m = Mat::zeros(self.dim, self.dim);
        for a in 0..self.dim {
            for b in 0..self.dim {
                m.set(a, b, flat[a * self.dim + b]);
            }
        }
        Ok(m)
    }

    /// Max-abs of `Pi + Pi^T` at a point; zero for an honest bivector.
    pub fn antisymmetry_residual_at(&self, x: &[f64]) -> Result<f64> {
        let m = self.matrix_at(x)?;
        let mut worst: f64 = 0.0;
        for a in 0..self.dim {
            for b in 0..self.dim {
                worst = worst.max((m.get(a, b) + m.get(b, a)).abs());
            }
        }
        Ok(worst)
    }
}

/// A 1-form field on `R^m`, componentwise expressions `alpha_a(x)`.
#[derive(Clone, Debug)]
pub struct OneForm {
    map: SmoothMap,
}

impl OneForm {
    pub fn new(dim: usize, components: Vec<Expr>) -> Result<Self> {
        if components.len() != dim {
            return Err(GeomError::DimensionMismatch {
                context: "OneForm::new: one component per coordinate",
                expected: dim,
                found: components.len(),
            });
        }
        Ok(OneForm { map: SmoothMap::new(dim, components)? })
    }

    /// The exact form `df` of a scalar function, via symbolic partials. Used as
    /// test data; the identities themselves are checked with jets.
    pub fn exact(f: &SmoothMap) -> Result<Self> {
        Ok(OneForm { map: f.gradient_map()? })
    }

    pub fn constant(values: &[f64]) -> Self {
        OneForm { map: SmoothMap::constant(values.len(), values) }
    }

    pub fn dim(&self) -> usize {
        self.map.input_dim()
    }

    pub fn components(&self) -> &[Expr] {
        self.map.components()
    }

    pub fn as_map(&self) -> &SmoothMap {
        &self.map
    }

    pub fn eval_at(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.map.eval(x)
    }
}

fn check_point(context: &'static str, dim: usize, x: &[f64]) -> Result<()> {
    if x.len() != dim {
        return Err(GeomError::DimensionMismatch { context, expected: dim, found: x.len() });
    }
    Ok(())
}

fn check_scalar_on(context: &'static str, dim: usize, f: &SmoothMap) -> Result<()> {
    if f.input_dim() != dim || f.output_dim() != 1 {
        return Err(GeomError::Incompatible {
            context,
            detail: "expected a scalar function on the bivector's chart space",
        });
    }
    Ok(())
}

/// Apply the anchor pointwise: `(Pi alpha)_a = sum_b Pi^{ab} alpha_b`.
pub fn anchor(pi: &PoissonBivector, alpha_values: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    check_point("anchor: x", pi.dim(), x)?;
    check_point("anchor: alpha", pi.dim(), alpha_values)?;
    Ok(pi.matrix_at(x)?.matvec(alpha_values))
}

/// The anchor of a 1-form field as a vector field, assembled by expression
/// composition (no differentiation involved): `X_a(x) = sum_b Pi^{ab}(x) alpha_b(x)`.
pub fn anchor_field(pi: &PoissonBivector, alpha: &OneForm) -> Result<SmoothMap> {
    if alpha.dim() != pi.dim() {
        return Err(GeomError::DimensionMismatch {
            context: "anchor_field: form dimension",
            expected: pi.dim(),
            found: alpha.dim(),
        });
    }
    let m = pi.dim();
    let mut components = Vec::with_capacity(m);
    for a in 0..m {
        let mut acc = Expr::con(0.0);
        for b in 0..m {
            let entry = pi.entry(a, b);
            if matches!(entry, Expr::Const(c) if *c == 0.0) {
                continue;
            }
            acc = acc.add(entry.clone().mul(alpha.components()[b].clone()));
        }
        components.push(acc);
    }
    SmoothMap::new(m, components)
}

/// The pairing `Pi(alpha, beta) = <beta, Pi alpha>` as a scalar function of `x`,
/// assembled by expression composition.
pub fn pi_pairing_scalar(
    pi: &PoissonBivector,
    alpha: &OneForm,
    beta: &OneForm,
) -> Result<SmoothMap> {
    let x_alpha = anchor_field(pi, alpha)?;
    if beta.dim() != pi.dim() {
        return Err(GeomError::DimensionMismatch {
            context: "pi_pairing_scalar: form dimension",
            expected: pi.dim(),
            found: beta.dim(),
        });
    }
    let mut acc = Expr::con(0.0);
    for a in 0..pi.dim() {
        acc = acc.add(beta.components()[a].clone().mul(x_alpha.components()[a].clone()));
    }
    SmoothMap::scalar(pi.dim(), acc)
}

/// The bracket value `{f, g}(x) = <df, Pi dg>(x)`, with both gradients taken by
/// jets.
pub fn poisson_bracket_value(
    pi: &PoissonBivector,
    f: &SmoothMap,
    g: &SmoothMap,
    x: &[f64],
) -> Result<f64> {
    check_scalar_on("poisson_bracket_value: f", pi.dim(), f)?;
    check_scalar_on("poisson_bracket_value: g", pi.dim(), g)?;
    check_point("poisson_bracket_value: x", pi.dim(), x)?;
    let grad_f = jet_gradient(f, x)?;
    let grad_g = jet_gradient(g, x)?;
    Ok(dot(&grad_f, &pi.matrix_at(x)?.matvec(&grad_g)))
}

/// Hessian columns by jets: `h[i][a] = d_a d_i f (x)`, one mixed-slot jet pass
/// per entry.
fn jet_hessian(f: &SmoothMap, x: &[f64]) -> Result<Mat> {
    let m = x.len();
    let mut h = Mat::zeros(m, m);
    for a in 0..m {
        let mut e_a = vec![0.0; m];
        e_a[a] = 1.0;
        for i in 0..m {
            let (_, second) = partial_with_directional(f, x, &e_a, i)?;
            h.set(i, a, second);
        }
    }
    Ok(h)
}

/// The full gradient of `u = {f, g}` at `x`, computed from jets alone:
/// `d_a u = (H_f e_a)^T Pi dg + df^T (d_a Pi) dg + df^T Pi (H_g e_a)`.
/// No symbolic differentiation enters; this is the derivative engine behind the
/// jacobiator and the Koszul identities on exact forms.
pub fn bracket_gradient(
    pi: &PoissonBivector,
    f: &SmoothMap,
    g: &SmoothMap,
    x: &[f64],
) -> Result<Vec<f64>> {
    check_scalar_on("bracket_gradient: f", pi.dim(), f)?;
    check_scalar_on("bracket_gradient: g", pi.dim(), g)?;
    check_point("bracket_gradient: x", pi.dim(), x)?;
    let m = pi.dim();
    let grad_f = jet_gradient(f, x)?;
    let grad_g = jet_gradient(g, x)?;
    let p = pi.matrix_at(x)?;
    let hess_f = jet_hessian(f, x)?;
    let hess_g = jet_hessian(g, x)?;
    let p_grad_g = p.matvec(&grad_g);
    let mut out = vec![0.0; m];
    for a in 0..m {
        let mut e_a = vec![0.0; m];
        e_a[a] = 1.0;
        let dpi = tangent_map(pi.entries_map(), x, &e_a)?.1;
        let mut value = 0.0;
        for i in 0..m {
            value += hess_f.get(i, a) * p_grad_g[i];
            let mut row = 0.0;
            for j in 0..m {
                row += dpi[i * m + j] * grad_g[j] + p.get(i, j) * hess_g.get(j, a);
            }
            value += grad_f[i] * row;
        }
        out[a] = value;
    }
    Ok(out)
}

/// The Jacobi obstruction `{f, {g, h}} + {g, {h, f}} + {h, {f, g}}` at a point.
/// Vanishes identically exactly when the bivector is Poisson.
pub fn jacobiator(
    pi: &PoissonBivector,
    f: &SmoothMap,
    g: &SmoothMap,
    h: &SmoothMap,
    x: &[f64],
) -> Result<f64> {
    let term = |outer: &SmoothMap, a: &SmoothMap, b: &SmoothMap| -> Result<f64> {
        let grad_outer = jet_gradient(outer, x)?;
        let grad_inner = bracket_gradient(pi, a, b, x)?;
        Ok(dot(&grad_outer, &pi.matrix_at(x)?.matvec(&grad_inner)))
    };
    Ok(term(f, g, h)? + term(g, h, f)? + term(h, f, g)?)
}

/// The Lie derivative of a 1-form along a vector field, evaluated at a point:
/// `(L_X beta)_c = sum_a X_a d_a beta_c + beta_a d_c X_a`, all derivatives by
/// jets.
pub fn lie_derivative_form(
    x_field: &SmoothMap,
    beta: &OneForm,
    x: &[f64],
) -> Result<Vec<f64>> {
    let m = beta.dim();
    if x_field.input_dim() != m || x_field.output_dim() != m {
        return Err(GeomError::Incompatible {
            context: "lie_derivative_form",
            detail: "vector field and form live on different chart spaces".into(),
        });
    }
    check_point("lie_derivative_form: x", m, x)?;
    let x_vals = x_field.eval(x)?;
    let beta_vals = beta.eval_at(x)?;
    let jac_beta = jet_jacobian(beta.as_map(), x)?; // jac_beta[c][a] = d_a beta_c
    let jac_x = jet_jacobian(x_field, x)?; // jac_x[a][c] = d_c X_a
    let mut out = vec![0.0; m];
    for c in 0..m {
        let mut value = 0.0;
        for a in 0..m {
            value += x_vals[a] * jac_beta[c][a] + beta_vals[a] * jac_x[a][c];
        }
        out[c] = value;
    }
    Ok(out)
}

/// The Koszul bracket of 1-forms, evaluated at a point:
/// `[alpha, beta] = L_{Pi alpha} beta - L_{Pi beta} alpha - d Pi(alpha, beta)`,
/// with the last term the jet gradient of the pairing scalar.
pub fn koszul_bracket(
    pi: &PoissonBivector,
    alpha: &OneForm,
    beta: &OneForm,
    x: &[f64],
) -> Result<Vec<f64>> {
    let x_alpha = anchor_field(pi, alpha)?;
    let x_beta = anchor_field(pi, beta)?;
    let lie_ab = lie_derivative_form(&x_alpha, beta, x)?;
    let lie_ba = lie_derivative_form(&x_beta, alpha, x)?;
    let pairing = pi_pairing_scalar(pi, alpha, beta)?;
    let d_pairing = jet_gradient(&pairing, x)?;
    Ok((0..pi.dim())
        .map(|c| lie_ab[c] - lie_ba[c] - d_pairing[c])
        .collect())
}

/// The Lie bracket of vector fields at a point: `[X, Y] = DY(X) - DX(Y)`.
pub fn vector_field_bracket(
    x_field: &SmoothMap,
    y_field: &SmoothMap,
    x: &[f64],
) -> Result<Vec<f64>> {
    let x_vals = x_field.eval(x)?;
    let y_vals = y_field.eval(x)?;
    let dy_along_x = tangent_map(y_field, x, &x_vals)?.1;
    let dx_along_y = tangent_map(x_field, x, &y_vals)?.1;
    Ok(dy_along_x
        .iter()
        .zip(&dx_along_y)
        .map(|(a, b)| a - b)
        .collect())
}

/// Max-abs residual of the anchor homomorphism
/// `Pi([alpha, beta]) = [Pi alpha, Pi beta]` at a point. Zero (to jet accuracy)
/// exactly when the bivector is Poisson; the defect detects a failing Jacobi
/// identity on constant forms already.
pub fn anchor_homomorphism_residual(
    pi: &PoissonBivector,
    alpha: &OneForm,
    beta: &OneForm,
    x: &[f64],
) -> Result<f64> {
    let koszul = koszul_bracket(pi, alpha, beta, x)?;
    let lhs = anchor(pi, &koszul, x)?;
    let x_alpha = anchor_field(pi, alpha)?;
    let x_beta = anchor_field(pi, beta)?;
    let rhs = vector_field_bracket(&x_alpha, &x_beta, x)?;
    let diff: Vec<f64> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
    Ok(vec_max_abs(&diff))
}

/// The canonical bivector on the `(x, p)` chart of `T*M`: `[[0, I], [-I, 0]]`,
/// inverse to the canonical symplectic matrix, so `{x_i, p_i} = 1`.
pub fn canonical_bivector(n: usize) -> Result<PoissonBivector> {
    if n < 1 {
        return Err(GeomError::InvalidShape("canonical_bivector requires n >= 1".into()));
    }
    let m = 2 * n;
    let mut entries = vec![Expr::con(0.0); m * m];
    for i in 0..n {
        entries[i * m + (n + i)] = Expr::con(1.0);
        entries[(n + i) * m + i] = Expr::con(-1.0);
    }
    PoissonBivector::new("canonical", m, entries)
}

/// The linear bivector on `R^3` with `Pi(x) w = x cross w`, i.e.
/// `{x_i, x_j} = -eps_{ijk} x_k`. Poisson, with Casimir `|x|^2 / 2`.
pub fn so3_star_bivector() -> PoissonBivector {
    let mut entries = vec![Expr::con(0.0); 9];
    entries[0 * 3 + 1] = Expr::var(2).neg();
    entries[0 * 3 + 2] = Expr::var(1);
    entries[1 * 3 + 0] = Expr::var(2);
    entries[1 * 3 + 2] = Expr::var(0).neg();
    entries[2 * 3 + 0] = Expr::var(1).neg();
    entries[2 * 3 + 1] = Expr::var(0);
    PoissonBivector::new("so3-star", 3, entries).expect("so3_star_bivector: fixed shape")
}

/// A constant bivector with dense, distinct upper-triangular entries
/// `Pi^{ab} = 1 / (a + b + 2)` for `a < b`, mirrored explicitly. Constant
/// coefficients always satisfy Jacobi. (Note: the coefficient formula is
/// symmetric in `(a, b)`, so the antisymmetry must be imposed by construction,
/// not by taking an antisymmetric part — that would cancel to zero.)
pub fn constant_antisymmetric_bivector(m: usize) -> Result<PoissonBivector> {
    if m < 2 {
        return Err(GeomError::InvalidShape(
            "constant_antisymmetric_bivector requires dim >= 2".into(),
        ));
    }
    let mut entries = vec![Expr::con(0.0); m * m];
    for a in 0..m {
        for b in (a + 1)..m {
            let value = 1.0 / (a + b + 2) as f64;
            entries[a * m + b] = Expr::con(value);
            entries[b * m + a] = Expr::con(-value);
        }
    }
    PoissonBivector::new("constant-antisymmetric", m, entries)
}

/// A deliberately non-Poisson bivector on `R^3`, for negative controls:
/// upper entries `Pi^{12} = x_3`, `Pi^{13} = x_3`, `Pi^{23} = x_1`. Its Jacobi
/// obstruction is a nonzero multiple of `x_1`, so checks run against it must
/// fail away from the plane `x_1 = 0`.
pub fn control_non_jacobi_bivector() -> PoissonBivector {
    let mut entries = vec![Expr::con(0.0); 9];
    entries[0 * 3 + 1] = Expr::var(2);
    entries[0 * 3 + 2] = Expr::var(2);
    entries[1 * 3 + 2] = Expr::var(0);
    entries[1 * 3 + 0] = Expr::var(2).neg();
    entries[2 * 3 + 0] = Expr::var(2).neg();
    entries[2 * 3 + 1] = Expr::var(0).neg();
    PoissonBivector::new("control-non-jacobi", 3, entries)
        .expect("control_non_jacobi_bivector: fixed shape")
}

/// The frozen witness triple for the control bivector: cubic perturbations of
/// the coordinates. At [`control_witness_point`] their jacobiator is
/// `-27 x1^3 x2^2 x3^2 / 125 - x1 = -0.50094921875`.
pub fn control_witness_functions() -> (SmoothMap, SmoothMap, SmoothMap) {
    let cubic = |base: usize, bump: usize| {
        SmoothMap::scalar(3, Expr::var(base).add(Expr::var(bump).pow(3).scaled(0.2)))
            .expect("control_witness_functions: fixed shape")
    };
    (cubic(0, 1), cubic(1, 2), cubic(2, 0))
}

/// The point pinning the control witness: `(1/2, -1/4, 3/4)`.
pub fn control_witness_point() -> Vec<f64> {
    vec![0.5, -0.25, 0.75]
}
