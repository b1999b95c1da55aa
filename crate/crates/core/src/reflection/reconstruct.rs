//! Integration of the jet ODE along coordinate paths.

use std::collections::HashMap;

use serde::Serialize;

use super::complete::CompleteSystem;
use super::jet::jet_from_coordinates;
use super::{ReflectionError, Result};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::manifold::conj_swap;
use crate::manifold::normal::solve_for_w;
use crate::series::{Coeff, Complex64, GaussRational, TruncSeries};

#[derive(Clone, Debug, Serialize)]
pub struct Sample {
    pub x: Vec<f64>,
    /// `f` at the point, as `(re, im)` pairs.
    pub value: Vec<(f64, f64)>,
    /// Largest coefficient of `ρ'(F, F̄)` on `M` through order `r`.
    pub jet_residuals: f64,
    #[serde(skip)]
    pub jet: Vec<Complex64>,
}

/// Λ along paths from the base point that move the coordinates one at a
/// time in `order`, with RK4 steps of size `h`.
pub struct Integrator<'a> {
    pub sys: &'a CompleteSystem,
    pub h: GaussRational,
    pub order: Vec<usize>,
    memo: HashMap<(usize, Vec<GaussRational>), Vec<Complex64>>,
    pub jet0: Vec<Complex64>,
}

fn axpy(y: &[Complex64], a: f64, k: &[Complex64]) -> Vec<Complex64> {
    y.iter().zip(k).map(|(y, k)| y + k * a).collect()
}

impl<'a> Integrator<'a> {
    pub fn new(sys: &'a CompleteSystem, jet0: Vec<Complex64>, h: GaussRational, order: Vec<usize>) -> Self {
        Self { sys, h, order, memo: HashMap::new(), jet0 }
    }

    fn segment(&self, mut x: Vec<GaussRational>, j: usize, to: &GaussRational, mut y: Vec<Complex64>) -> Result<Vec<Complex64>> {
        let dist = to.sub(&x[j]);
        let steps = dist.div(&self.h).expect("nonzero step");
        let count = steps.re.abs();
        if !count.is_integer() || !steps.im.is_zero() {
            return Err(ReflectionError::Integration(format!("the step does not divide the path to {to}")));
        }
        let sign = if steps.re.is_negative() { -1 } else { 1 };
        let h = self.h.mul(&GaussRational::real(sign));
        let half = h.mul(&GaussRational::rational(1, 2));
        let hf = h.to_complex64().re;
        let n: i64 = count.to_integer().try_into().map_err(|_| ReflectionError::Integration("too many steps".into()))?;
        let f = |x: &[GaussRational], y: &[Complex64]| self.sys.derivative(x, y, j);
        for _ in 0..n {
            let mut xm = x.clone();
            xm[j] = xm[j].add(&half);
            let mut xe = x.clone();
            xe[j] = xe[j].add(&h);
            let k1 = f(&x, &y)?;
            let k2 = f(&xm, &axpy(&y, hf / 2.0, &k1))?;
            let k3 = f(&xm, &axpy(&y, hf / 2.0, &k2))?;
            let k4 = f(&xe, &axpy(&y, hf, &k3))?;
            y = y
                .iter()
                .enumerate()
                .map(|(i, v)| v + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (hf / 6.0))
                .collect();
            x = xe;
        }
        Ok(y)
    }

    /// Λ at the point over `target`, reusing shared path prefixes.
    pub fn jet_at(&mut self, target: &[GaussRational]) -> Result<Vec<Complex64>> {
        let dim = self.sys.chart.dim();
        if target.len() != dim {
            return Err(ReflectionError::Integration(format!("grid points need {dim} coordinates")));
        }
        let radius = target.iter().map(|c| c.to_complex64().re.abs()).fold(0.0, f64::max);
        if radius > self.sys.radius {
            return Err(ReflectionError::Integration(format!("{radius} leaves the validity box of radius {}", self.sys.radius)));
        }
        let mut x = vec![GaussRational::zero(); dim];
        let mut y = self.jet0.clone();
        for (stage, &j) in self.order.clone().iter().enumerate() {
            let mut next = x.clone();
            next[j] = target[j].clone();
            let key = (stage, next.clone());
            y = match self.memo.get(&key) {
                Some(v) => v.clone(),
                None => {
                    let v = if next[j] == x[j] { y } else { self.segment(x.clone(), j, &target[j], y)? };
                    self.memo.insert(key, v.clone());
                    v
                }
            };
            x = next;
        }
        Ok(y)
    }
}

/// `max |coeff|` of `ρ'(F, F̄)` restricted to `M` at the point over `x`.
pub fn jet_residual(sys: &CompleteSystem, x: &[GaussRational], coords: &[Complex64]) -> Result<f64> {
    let chart = &sys.chart;
    let p = chart.point(x)?;
    let centered = chart.model.translate(&p)?;
    let big_n = centered.big_n();
    let r = sys.r;
    let q = solve_for_w(&centered, r)?;
    let vars = &centered.vars;
    let jet = jet_from_coordinates(coords, vars, big_n, sys.target.big_n(), r);
    let mut args: Vec<TruncSeries<Complex64>> = (0..2 * big_n).map(|v| TruncSeries::var(vars, r, v)).collect();
    for (j, qj) in q.iter().enumerate() {
        args[centered.w(j)] = qj.convert(Complex64::from_gauss).truncate(r);
    }
    let f: Vec<TruncSeries<Complex64>> = jet.iter().map(|s| s.compose(&args)).collect::<std::result::Result<_, _>>()?;
    let fbar: Vec<TruncSeries<Complex64>> = jet.iter().map(|s| conj_swap(s, big_n)).collect();
    let mut all = f;
    all.extend(fbar);
    let mut worst: f64 = 0.0;
    for rho in &sys.target.rho {
        let h = rho.convert(Complex64::from_gauss).compose(&all)?.truncate(r);
        worst = h.terms().map(|(_, c)| c.abs_f64()).fold(worst, f64::max);
    }
    Ok(worst)
}

/// Reconstruct `f` on `grid` from its `r`-jet at the base point.
pub fn reconstruct_map(sys: &CompleteSystem, jet0: &[Complex64], grid: &[Vec<GaussRational>], h: &GaussRational) -> Result<Vec<Sample>> {
    let order: Vec<usize> = (0..sys.chart.dim()).collect();
    let mut integ = Integrator::new(sys, jet0.to_vec(), h.clone(), order);
    let np = sys.target.big_n();
    let per = jet0.len() / np;
    let mut out = Vec::new();
    for x in grid {
        let jet = integ.jet_at(x)?;
        let residual = jet_residual(sys, x, &jet)?;
        out.push(Sample {
            x: x.iter().map(|c| c.to_complex64().re).collect(),
            value: (0..np).map(|c| (jet[c * per].re, jet[c * per].im)).collect(),
            jet_residuals: residual,
            jet,
        });
    }
    Ok(out)
}

/// The square grid `{−R, …, R}^dim` with spacing `spacing`.
pub fn box_grid(dim: usize, radius: &GaussRational, spacing: &GaussRational) -> Vec<Vec<GaussRational>> {
    let count = radius.div(spacing).expect("nonzero spacing").re.floor().to_integer().to_i64().unwrap_or(0);
    let ticks: Vec<GaussRational> = (-count..=count)
        .map(|k| spacing.mul(&GaussRational::from_i64(k)))
        .collect();
    let mut out: Vec<Vec<GaussRational>> = vec![vec![]];
    for _ in 0..dim {
        out = out.into_iter().flat_map(|p| ticks.iter().map(move |t| { let mut q = p.clone(); q.push(t.clone()); q })).collect();
    }
    out
}
