//! Second-order forward-mode jets. A [`Jet2`] is the 2-jet at (0,0) of a map
//! `phi(s,t) = x + s*ds + t*dt + s*t*dsdt`, truncated at total order (1,1): the
//! `s^2` and `t^2` directions are never populated, so the arithmetic below is the
//! quotient by those monomials and stays exact for polynomial inputs.

use crate::error::{GeomError, Result};
use crate::smooth::{Scalar, SmoothMap};

/// One coordinate of a [`Jet2`]: a truncated polynomial `v + ds*s + dt*t + dsdt*st`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct JetScalar {
    pub v: f64,
    pub ds: f64,
    pub dt: f64,
    pub dsdt: f64,
}

impl JetScalar {
    pub fn constant(v: f64) -> Self {
        JetScalar { v, ds: 0.0, dt: 0.0, dsdt: 0.0 }
    }

    /// Compose with a unary function given by value/first/second derivative at `self.v`.
    /// With u = ds*s + dt*t + dsdt*st we have u^2 = 2 ds*dt*st and u^3 = 0, hence
    /// g(v + u) = g + g'*u + g''*ds*dt*st.
    fn chain(self, g: f64, dg: f64, ddg: f64) -> Self {
        JetScalar {
            v: g,
            ds: dg * self.ds,
            dt: dg * self.dt,
            dsdt: dg * self.dsdt + ddg * self.ds * self.dt,
        }
    }
}

impl std::ops::Add for JetScalar {
    type Output = JetScalar;
    fn add(self, rhs: JetScalar) -> JetScalar {
        JetScalar {
            v: self.v + rhs.v,
            ds: self.ds + rhs.ds,
            dt: self.dt + rhs.dt,
            dsdt: self.dsdt + rhs.dsdt,
        }
    }
}

impl std::ops::Sub for JetScalar {
    type Output = JetScalar;
    fn sub(self, rhs: JetScalar) -> JetScalar {
        JetScalar {
            v: self.v - rhs.v,
            ds: self.ds - rhs.ds,
            dt: self.dt - rhs.dt,
            dsdt: self.dsdt - rhs.dsdt,
        }
    }
}

impl std::ops::Neg for JetScalar {
    type Output = JetScalar;
    fn neg(self) -> JetScalar {
        JetScalar { v: -self.v, ds: -self.ds, dt: -self.dt, dsdt: -self.dsdt }
    }
}

impl std::ops::Mul for JetScalar {
    type Output = JetScalar;
    // Leibniz in each slot independently; the mixed slot collects both first-order
    // cross terms: (ab)_{st} = a_{st} b + a_s b_t + a_t b_s + a b_{st}.
    fn mul(self, rhs: JetScalar) -> JetScalar {
        JetScalar {
            v: self.v * rhs.v,
            ds: self.v * rhs.ds + self.ds * rhs.v,
            dt: self.v * rhs.dt + self.dt * rhs.v,
            dsdt: self.v * rhs.dsdt + self.ds * rhs.dt + self.dt * rhs.ds + self.dsdt * rhs.v,
        }
    }
}

impl Scalar for JetScalar {
    fn lift(c: f64) -> Self {
        JetScalar::constant(c)
    }
    fn sin(self) -> Self {
        self.chain(self.v.sin(), self.v.cos(), -self.v.sin())
    }
    fn cos(self) -> Self {
        self.chain(self.v.cos(), -self.v.sin(), -self.v.cos())
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }
    fn powi(self, n: u32) -> Self {
        let mut acc = JetScalar::constant(1.0);
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
}

/// A second-order jet of curves-of-curves in `R^n`, stored slotwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2 {
    pub x: Vec<f64>,
    pub ds: Vec<f64>,
    pub dt: Vec<f64>,
    pub dsdt: Vec<f64>,
}

impl Jet2 {
    pub fn new(x: Vec<f64>, ds: Vec<f64>, dt: Vec<f64>, dsdt: Vec<f64>) -> Result<Self> {
        let n = x.len();
        for (len, what) in [(ds.len(), "ds"), (dt.len(), "dt"), (dsdt.len(), "dsdt")] {
            if len != n {
                return Err(GeomError::DimensionMismatch {
                    context: match what {
                        "ds" => "Jet2::new: ds",
                        "dt" => "Jet2::new: dt",
                        _ => "Jet2::new: dsdt",
                    },
                    expected: n,
                    found: len,
                });
            }
        }
        Ok(Jet2 { x, ds, dt, dsdt })
    }

    pub fn point(x: Vec<f64>) -> Self {
        let n = x.len();
        Jet2 { x, ds: vec![0.0; n], dt: vec![0.0; n], dsdt: vec![0.0; n] }
    }

    /// First-order line in the `s` slot only.
    pub fn line(x: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        let n = x.len();
        Jet2::new(x, v, vec![0.0; n], vec![0.0; n])
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn coord(&self, i: usize) -> JetScalar {
        JetScalar { v: self.x[i], ds: self.ds[i], dt: self.dt[i], dsdt: self.dsdt[i] }
    }

    pub fn to_scalars(&self) -> Vec<JetScalar> {
        (0..self.dim()).map(|i| self.coord(i)).collect()
    }

    pub fn from_scalars(scalars: &[JetScalar]) -> Self {
        Jet2 {
            x: scalars.iter().map(|j| j.v).collect(),
            ds: scalars.iter().map(|j| j.ds).collect(),
            dt: scalars.iter().map(|j| j.dt).collect(),
            dsdt: scalars.iter().map(|j| j.dsdt).collect(),
        }
    }
}

/// Push a jet through a smooth map. The output slots are
/// `(f(x), Df[ds], Df[dt], D2f[ds,dt] + Df[dsdt])`.
pub fn eval_jet(f: &SmoothMap, j: &Jet2) -> Result<Jet2> {
    if j.dim() != f.input_dim() {
        return Err(GeomError::DimensionMismatch {
            context: "eval_jet",
            expected: f.input_dim(),
            found: j.dim(),
        });
    }
    Ok(Jet2::from_scalars(&f.eval_scalars(&j.to_scalars())))
}

/// Tangent map `(x, v) -> (f(x), Df(x)v)`, read off the `ds` slot of a jet.
pub fn tangent_map(f: &SmoothMap, x: &[f64], v: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if v.len() != x.len() {
        return Err(GeomError::DimensionMismatch {
            context: "tangent_map: v",
            expected: x.len(),
            found: v.len(),
        });
    }
    let out = eval_jet(f, &Jet2::line(x.to_vec(), v.to_vec())?)?;
    Ok((out.x, out.ds))
}

/// Central-difference directional derivative `(f(x+hv) - f(x-hv)) / 2h`.
/// Deliberately ignorant of the jet machinery: this is the independent oracle.
pub fn fd_jvp(f: &SmoothMap, x: &[f64], v: &[f64], h: f64) -> Result<Vec<f64>> {
    if v.len() != x.len() {
        return Err(GeomError::DimensionMismatch {
            context: "fd_jvp: v",
            expected: x.len(),
            found: v.len(),
        });
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(GeomError::InvalidInput(format!("fd_jvp: bad step {h}")));
    }
    let plus: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + h * b).collect();
    let minus: Vec<f64> = x.iter().zip(v).map(|(a, b)| a - h * b).collect();
    let fp = f.eval(&plus)?;
    let fm = f.eval(&minus)?;
    Ok(fp
        .iter()
        .zip(&fm)
        .map(|(p, m)| (p - m) / (2.0 * h))
        .collect())
}

/// Gradient of a scalar map at `x`, one jet evaluation per coordinate direction.
pub fn jet_gradient(f: &SmoothMap, x: &[f64]) -> Result<Vec<f64>> {
    if f.output_dim() != 1 {
        return Err(GeomError::InvalidInput("jet_gradient requires scalar map".into()));
    }
    let n = x.len();
    let mut g = vec![0.0; n];
    for (i, gi) in g.iter_mut().enumerate() {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        *gi = tangent_map(f, x, &v)?.1[0];
    }
    Ok(g)
}

/// Jacobian of `f` at `x` (rows indexed by output), one jet pass per input direction.
pub fn jet_jacobian(f: &SmoothMap, x: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = x.len();
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        cols.push(tangent_map(f, x, &v)?.1);
    }
    let m = f.output_dim();
    Ok((0..m).map(|r| (0..n).map(|c| cols[c][r]).collect()).collect())
}

/// For scalar `g`: value of the partial `d_a g` at `x` together with its directional
/// derivative along `u`, from a single jet with `ds = u`, `dt = e_a`. The `dt` slot
/// carries the partial, the mixed slot carries `D(d_a g)[u]`.
pub fn partial_with_directional(g: &SmoothMap, x: &[f64], u: &[f64], a: usize) -> Result<(f64, f64)> {
    if g.output_dim() != 1 {
        return Err(GeomError::InvalidInput(
            "partial_with_directional requires scalar map".into(),
        ));
    }
    let n = x.len();
    let mut ea = vec![0.0; n];
    ea[a] = 1.0;
    let out = eval_jet(g, &Jet2::new(x.to_vec(), u.to_vec(), ea, vec![0.0; n])?)?;
    Ok((out.dt[0], out.dsdt[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::{builtin_samples, Expr};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn square_map() -> SmoothMap {
        SmoothMap::scalar(1, Expr::var(0).pow(2)).unwrap()
    }

    #[test]
    fn jet_of_square_expands_the_product() {
        // (2 + s + t)^2 = 4 + 4s + 4t + 2st
        let j = Jet2::new(vec![2.0], vec![1.0], vec![1.0], vec![0.0]).unwrap();
        let out = eval_jet(&square_map(), &j).unwrap();
        assert_eq!(out, Jet2::new(vec![4.0], vec![4.0], vec![4.0], vec![2.0]).unwrap());
    }

    #[test]
    fn jet_of_sin_at_zero_is_identity_slotwise() {
        let f = SmoothMap::scalar(1, Expr::var(0).sin()).unwrap();
        let j = Jet2::new(vec![0.0], vec![1.0], vec![0.0], vec![0.0]).unwrap();
        let out = eval_jet(&f, &j).unwrap();
        assert_eq!(out, Jet2::new(vec![0.0], vec![1.0], vec![0.0], vec![0.0]).unwrap());
    }

    #[test]
    fn tangent_map_of_cube() {
        let f = SmoothMap::scalar(1, Expr::var(0).pow(3)).unwrap();
        let (y, dy) = tangent_map(&f, &[1.0], &[2.0]).unwrap();
        assert_eq!((y, dy), (vec![1.0], vec![6.0]));
    }

    #[test]
    fn fd_jvp_matches_on_square() {
        let d = fd_jvp(&square_map(), &[3.0], &[1.0], 1e-4).unwrap();
        assert!((d[0] - 6.0).abs() < 1e-7, "got {}", d[0]);
    }

    #[test]
    fn mixed_slot_is_the_bilinear_expansion() {
        // Integer jets: the Leibniz expansion must be reproduced exactly.
        let a = JetScalar { v: 2.0, ds: 3.0, dt: 5.0, dsdt: 7.0 };
        let b = JetScalar { v: 11.0, ds: 13.0, dt: 17.0, dsdt: 19.0 };
        let p = a * b;
        assert_eq!(p.v, 22.0);
        assert_eq!(p.ds, 2.0 * 13.0 + 3.0 * 11.0);
        assert_eq!(p.dt, 2.0 * 17.0 + 5.0 * 11.0);
        assert_eq!(p.dsdt, 2.0 * 19.0 + 3.0 * 17.0 + 5.0 * 13.0 + 7.0 * 11.0);
    }

    #[test]
    fn ds_slot_linear_in_ds_exactly_on_dyadic_polynomial_data() {
        // Dyadic-rational inputs keep every product exactly representable, so
        // linearity of the ds slot holds bitwise for polynomial maps.
        let f = SmoothMap::scalar(
            2,
            Expr::var(0).pow(2).mul(Expr::var(1)).add(Expr::var(1).pow(3)),
        )
        .unwrap();
        let x = vec![1.5, -0.5];
        let u = vec![0.25, 1.0];
        let w = vec![-0.5, 0.75];
        let (a, b) = (2.0, -0.25);
        let comb: Vec<f64> = u.iter().zip(&w).map(|(p, q)| a * p + b * q).collect();
        let lhs = eval_jet(&f, &Jet2::line(x.clone(), comb).unwrap()).unwrap().ds[0];
        let du = eval_jet(&f, &Jet2::line(x.clone(), u).unwrap()).unwrap().ds[0];
        let dw = eval_jet(&f, &Jet2::line(x, w).unwrap()).unwrap().ds[0];
        assert_eq!(lhs, a * du + b * dw);
    }

    #[test]
    fn functoriality_under_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=4usize {
            let fam = builtin_samples(n);
            for (_, f) in &fam {
                for (_, g) in &fam {
                    if g.input_dim() != f.output_dim() {
                        continue;
                    }
                    for _ in 0..20 {
                        let r = |rng: &mut ChaCha8Rng| {
                            (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect::<Vec<f64>>()
                        };
                        let j = Jet2::new(r(&mut rng), r(&mut rng), r(&mut rng), r(&mut rng))
                            .unwrap();
                        let gf = g.compose(f).unwrap();
                        let direct = eval_jet(&gf, &j).unwrap();
                        let staged = eval_jet(g, &eval_jet(f, &j).unwrap()).unwrap();
                        for (lhs, rhs) in [
                            (&direct.x, &staged.x),
                            (&direct.ds, &staged.ds),
                            (&direct.dt, &staged.dt),
                            (&direct.dsdt, &staged.dsdt),
                        ] {
                            for (a, b) in lhs.iter().zip(rhs.iter()) {
                                assert!((a - b).abs() <= 1e-12, "functoriality: {a} vs {b}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tangent_matches_central_differences_on_builtins() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=4usize {
            for (name, f) in builtin_samples(n) {
                for _ in 0..100 {
                    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                    let jet = tangent_map(&f, &x, &v).unwrap().1;
                    let fd = fd_jvp(&f, &x, &v, 1e-5).unwrap();
                    for (a, b) in jet.iter().zip(&fd) {
                        let scale = a.abs().max(1.0);
                        assert!(
                            (a - b).abs() / scale <= 1e-6,
                            "{name}: jet {a} vs fd {b}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn mixed_slot_matches_second_differences() {
        // D2 f[u,w] from the dsdt slot against a 4-point second difference.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in 1..=3usize {
            for (name, f) in builtin_samples(n) {
                for _ in 0..25 {
                    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                    let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                    let j =
                        Jet2::new(x.clone(), u.clone(), w.clone(), vec![0.0; n]).unwrap();
                    let mixed = eval_jet(&f, &j).unwrap().dsdt;
                    let h = 1e-4;
                    let at = |su: f64, sw: f64| {
                        let p: Vec<f64> = (0..n)
                            .map(|i| x[i] + su * h * u[i] + sw * h * w[i])
                            .collect();
                        f.eval(&p).unwrap()
                    };
                    let (pp, pm, mp, mm) = (at(1.0, 1.0), at(1.0, -1.0), at(-1.0, 1.0), at(-1.0, -1.0));
                    for k in 0..f.output_dim() {
                        let fd = (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * h * h);
                        let scale = mixed[k].abs().max(1.0);
                        assert!(
                            (mixed[k] - fd).abs() / scale <= 1e-5,
                            "{name}: mixed {} vs fd {fd}",
                            mixed[k]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn symbolic_partials_agree_with_jets() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 1..=3usize {
            for (_, f) in builtin_samples(n) {
                if f.output_dim() != 1 {
                    continue;
                }
                let grad_map = f.gradient_map().unwrap();
                for _ in 0..20 {
                    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                    let sym = grad_map.eval(&x).unwrap();
                    let jet = jet_gradient(&f, &x).unwrap();
                    for (a, b) in sym.iter().zip(&jet) {
                        assert!((a - b).abs() <= 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let f = SmoothMap::identity(2);
        assert!(eval_jet(&f, &Jet2::point(vec![0.0])).is_err());
        assert!(tangent_map(&f, &[0.0, 0.0], &[0.0]).is_err());
        assert!(fd_jvp(&f, &[0.0, 0.0], &[0.0, 0.0], 0.0).is_err());
        assert!(Jet2::new(vec![0.0], vec![0.0, 1.0], vec![0.0], vec![0.0]).is_err());
    }
}
