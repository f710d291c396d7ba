//! A closed family of smooth maps between chart spaces: polynomials together with
//! sin, cos, exp composed with linear maps. Keeping the family closed (rather than
//! accepting arbitrary closures) means the same expression tree can be evaluated on
//! plain points, on second-order jets, and by finite differences — so the
//! differentiation paths under test share one definition of the function.

use crate::error::{GeomError, Result};
use crate::jets::JetScalar;

/// Scalar types an [`Expr`] can be evaluated over. `f64` gives plain evaluation,
/// [`JetScalar`] gives forward-mode differentiation through the same tree.
pub trait Scalar:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn lift(c: f64) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn exp(self) -> Self;
    fn powi(self, n: u32) -> Self;
}

impl Scalar for f64 {
    fn lift(c: f64) -> Self {
        c
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn powi(self, n: u32) -> Self {
        f64::powi(self, n as i32)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Var(usize),
    Const(f64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
}

impl Expr {
    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn con(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }

    pub fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }

    pub fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }

    pub fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }

    pub fn pow(self, n: u32) -> Expr {
        Expr::Pow(Box::new(self), n)
    }

    pub fn sin(self) -> Expr {
        Expr::Sin(Box::new(self))
    }

    pub fn cos(self) -> Expr {
        Expr::Cos(Box::new(self))
    }

    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }

    pub fn scaled(self, c: f64) -> Expr {
        Expr::con(c).mul(self)
    }

    pub fn eval<T: Scalar>(&self, inputs: &[T]) -> T {
        match self {
            Expr::Var(i) => inputs[*i],
            Expr::Const(c) => T::lift(*c),
            Expr::Add(a, b) => a.eval(inputs) + b.eval(inputs),
            Expr::Sub(a, b) => a.eval(inputs) - b.eval(inputs),
            Expr::Mul(a, b) => a.eval(inputs) * b.eval(inputs),
            Expr::Neg(a) => -a.eval(inputs),
            Expr::Pow(a, n) => a.eval(inputs).powi(*n),
            Expr::Sin(a) => a.eval(inputs).sin(),
            Expr::Cos(a) => a.eval(inputs).cos(),
            Expr::Exp(a) => a.eval(inputs).exp(),
        }
    }

    /// Exact partial derivative with respect to variable `i`. The family is closed
    /// under differentiation, which is what makes exact 1-form fields expressible.
    pub fn partial(&self, i: usize) -> Expr {
        match self {
            Expr::Var(j) => Expr::con(if *j == i { 1.0 } else { 0.0 }),
            Expr::Const(_) => Expr::con(0.0),
            Expr::Add(a, b) => a.partial(i).add(b.partial(i)),
            Expr::Sub(a, b) => a.partial(i).sub(b.partial(i)),
            Expr::Mul(a, b) => {
                let left = a.partial(i).mul((**b).clone());
                let right = (**a).clone().mul(b.partial(i));
                left.add(right)
            }
            Expr::Neg(a) => a.partial(i).neg(),
            Expr::Pow(a, n) => {
                if *n == 0 {
                    Expr::con(0.0)
                } else {
                    Expr::con(*n as f64)
                        .mul((**a).clone().pow(n - 1))
                        .mul(a.partial(i))
                }
            }
            Expr::Sin(a) => (**a).clone().cos().mul(a.partial(i)),
            Expr::Cos(a) => (**a).clone().sin().neg().mul(a.partial(i)),
            Expr::Exp(a) => (**a).clone().exp().mul(a.partial(i)),
        }
    }

    /// Substitute `subs[i]` for `Var(i)`; the engine behind composition.
    pub fn substitute(&self, subs: &[Expr]) -> Expr {
        match self {
            Expr::Var(i) => subs[*i].clone(),
            Expr::Const(c) => Expr::con(*c),
            Expr::Add(a, b) => a.substitute(subs).add(b.substitute(subs)),
            Expr::Sub(a, b) => a.substitute(subs).sub(b.substitute(subs)),
            Expr::Mul(a, b) => a.substitute(subs).mul(b.substitute(subs)),
            Expr::Neg(a) => a.substitute(subs).neg(),
            Expr::Pow(a, n) => a.substitute(subs).pow(*n),
            Expr::Sin(a) => a.substitute(subs).sin(),
            Expr::Cos(a) => a.substitute(subs).cos(),
            Expr::Exp(a) => a.substitute(subs).exp(),
        }
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Var(i) => Some(*i),
            Expr::Const(_) => None,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.max_var().max(b.max_var()),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => {
                a.max_var()
            }
        }
    }
}

/// A smooth map `R^n -> R^m` given componentwise by [`Expr`] trees.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothMap {
    input_dim: usize,
    components: Vec<Expr>,
}

impl SmoothMap {
    pub fn new(input_dim: usize, components: Vec<Expr>) -> Result<Self> {
        for c in &components {
            if let Some(v) = c.max_var() {
                if v >= input_dim {
                    return Err(GeomError::DimensionMismatch {
                        context: "SmoothMap::new: component references variable beyond input_dim",
                        expected: input_dim,
                        found: v + 1,
                    });
                }
            }
        }
        Ok(SmoothMap { input_dim, components })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn scalar(input_dim: usize, expr: Expr) -> Result<Self> {
        SmoothMap::new(input_dim, vec![expr])
    }

    pub fn identity(n: usize) -> Self {
        SmoothMap { input_dim: n, components: (0..n).map(Expr::var).collect() }
    }

    pub fn constant(input_dim: usize, values: &[f64]) -> Self {
        SmoothMap {
            input_dim,
            components: values.iter().map(|&v| Expr::con(v)).collect(),
        }
    }

    /// Linear map given by a row-major coefficient table: `out_i = sum_j rows[i][j] x_j`.
    pub fn linear(input_dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let mut components = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != input_dim {
                return Err(GeomError::DimensionMismatch {
                    context: "SmoothMap::linear",
                    expected: input_dim,
                    found: row.len(),
                });
            }
            let mut acc = Expr::con(0.0);
            for (j, &c) in row.iter().enumerate() {
                if c != 0.0 {
                    acc = acc.add(Expr::var(j).scaled(c));
                }
            }
            components.push(acc);
        }
        Ok(SmoothMap { input_dim, components })
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim {
            return Err(GeomError::DimensionMismatch {
                context: "SmoothMap::eval",
                expected: self.input_dim,
                found: x.len(),
            });
        }
        Ok(self.components.iter().map(|c| c.eval(x)).collect())
    }

    pub(crate) fn eval_scalars(&self, x: &[JetScalar]) -> Vec<JetScalar> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    /// `g.compose(f)` is the map `x -> g(f(x))`, built by substitution so that the
    /// result stays inside the closed family.
    pub fn compose(&self, inner: &SmoothMap) -> Result<SmoothMap> {
        if inner.output_dim() != self.input_dim {
            return Err(GeomError::DimensionMismatch {
                context: "SmoothMap::compose",
                expected: self.input_dim,
                found: inner.output_dim(),
            });
        }
        Ok(SmoothMap {
            input_dim: inner.input_dim,
            components: self
                .components
                .iter()
                .map(|c| c.substitute(&inner.components))
                .collect(),
        })
    }

    /// Gradient as a map `R^n -> R^n`, via exact symbolic partials.
    pub fn gradient_map(&self) -> Result<SmoothMap> {
        if self.output_dim() != 1 {
            return Err(GeomError::InvalidInput(
                "gradient_map requires a scalar-valued map".into(),
            ));
        }
        Ok(SmoothMap {
            input_dim: self.input_dim,
            components: (0..self.input_dim)
                .map(|i| self.components[0].partial(i))
                .collect(),
        })
    }
}

/// Five nonlinear diffeomorphisms of `R^n`, each of the form identity plus a small
/// perturbation whose derivative stays well away from singular on the sample box
/// `[-1, 1]^n`.
pub fn builtin_diffeos(n: usize) -> Vec<(&'static str, SmoothMap)> {
    assert!(n >= 1, "builtin_diffeos needs n >= 1");
    let cubic = SmoothMap::new(
        n,
        (0..n)
            .map(|i| Expr::var(i).add(Expr::var(i).pow(3).scaled(0.1)))
            .collect(),
    )
    .unwrap();
    let sine = SmoothMap::new(
        n,
        (0..n)
            .map(|i| Expr::var(i).add(Expr::var(i).sin().scaled(0.2)))
            .collect(),
    )
    .unwrap();
    let expw = SmoothMap::new(
        n,
        (0..n)
            .map(|i| Expr::var(i).add(Expr::var(i).exp().scaled(0.05)))
            .collect(),
    )
    .unwrap();
    let shear = SmoothMap::new(
        n,
        (0..n)
            .map(|i| Expr::var(i).add(Expr::var((i + 1) % n).pow(3).scaled(0.1)))
            .collect(),
    )
    .unwrap();
    let mix = SmoothMap::new(
        n,
        (0..n)
            .map(|i| Expr::var(i).add(Expr::var(i).mul(Expr::var((i + 1) % n)).scaled(0.125)))
            .collect(),
    )
    .unwrap();
    vec![
        ("cubic", cubic),
        ("sine", sine),
        ("expwarp", expw),
        ("shear", shear),
        ("mix", mix),
    ]
}

/// Sample maps (not necessarily invertible) used for derivative cross-checks.
pub fn builtin_samples(n: usize) -> Vec<(&'static str, SmoothMap)> {
    assert!(n >= 1, "builtin_samples needs n >= 1");
    let mut out = builtin_diffeos(n);
    let quad = SmoothMap::new(
        n,
        (0..n)
            .map(|i| {
                Expr::var(i)
                    .pow(2)
                    .add(Expr::var((i + 1) % n).mul(Expr::var(i)).scaled(0.5))
            })
            .collect(),
    )
    .unwrap();
    let trig = SmoothMap::new(
        n,
        (0..n)
            .map(|i| {
                Expr::var(i)
                    .sin()
                    .mul(Expr::var((i + 1) % n).cos())
                    .add(Expr::var(i).scaled(0.3).exp().scaled(0.25))
            })
            .collect(),
    )
    .unwrap();
    let fold = SmoothMap::scalar(
        n,
        (0..n).fold(Expr::con(0.1), |acc, i| {
            acc.add(Expr::var(i).pow(2).scaled(0.5)).sub(
                Expr::var(i)
                    .mul(Expr::var((i + 1) % n))
                    .scaled(1.0 / 3.0),
            )
        }),
    )
    .unwrap();
    out.push(("quad", quad));
    out.push(("trig", trig));
    out.push(("fold", fold));
    out
}
