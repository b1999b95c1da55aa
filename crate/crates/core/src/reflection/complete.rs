//! The complete system `j^{r+1} f = Φ(x, j^r f)` and its use as a jet ODE.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use super::param::{parametrize, Kernel, Setup};
use super::{ReflectionError, Result};
use crate::manifold::ManifoldModel;
use crate::series::{monomials_up_to, Coeff, Complex64, GaussRational, Monomial, TruncSeries, EXACT};

/// Points of an explicit graph `Im w = φ(z, z̄, Re w)` from the real
/// coordinates `(Re z1, Im z1, …, Re zn, Im zn, Re w1, …, Re wd)`.
#[derive(Clone, Debug)]
pub struct RealChart {
    pub model: ManifoldModel,
}

impl RealChart {
    pub fn new(model: &ManifoldModel) -> Self {
        Self { model: model.clone() }
    }

    pub fn dim(&self) -> usize {
        2 * self.model.n + self.model.d
    }

    fn args(&self, x: &[GaussRational]) -> Vec<GaussRational> {
        let (n, d) = (self.model.n, self.model.d);
        let mut z: Vec<GaussRational> = (0..n).map(|i| x[2 * i].add(&GaussRational::from_parts(0, 1, 1, 1).mul(&x[2 * i + 1]))).collect();
        z.extend(x[2 * n..2 * n + d].iter().cloned());
        let zeta: Vec<GaussRational> = z.iter().map(|c| c.conj()).collect();
        z.extend(zeta);
        z
    }

    /// The point of `M` over `x`, exactly.
    pub fn point(&self, x: &[GaussRational]) -> Result<Vec<GaussRational>> {
        let (n, d) = (self.model.n, self.model.d);
        if x.len() != self.dim() || x.iter().any(|c| !c.is_real()) {
            return Err(ReflectionError::Jet(format!("a point needs {} real coordinates", self.dim())));
        }
        let at = self.args(x);
        let mut p: Vec<GaussRational> = at[..n + d].to_vec();
        for (j, r) in self.model.rho.iter().enumerate() {
            let v = r.eval(&at).neg();
            p[n + j] = p[n + j].add(&GaussRational::from_parts(0, 1, 1, 1).mul(&v));
        }
        let mut full = p.clone();
        full.extend(p.iter().map(|c| c.conj()));
        if self.model.rho.iter().any(|r| !r.eval(&full).is_zero()) {
            return Err(ReflectionError::Jet("the model is not an explicit graph over Re w".into()));
        }
        Ok(p)
    }

    /// `∂p/∂x_j` for every real coordinate, as vectors in `ℂᴺ`.
    pub fn tangents(&self, x: &[GaussRational]) -> Result<Vec<Vec<GaussRational>>> {
        let (n, d) = (self.model.n, self.model.d);
        let big_n = n + d;
        let at = self.args(x);
        let i = GaussRational::from_parts(0, 1, 1, 1);
        let dr = |r: &TruncSeries, v: usize| r.differentiate(v).expect("variable in range").eval(&at);
        let mut out = Vec::new();
        for j in 0..self.dim() {
            let mut t = vec![GaussRational::zero(); big_n];
            if j < 2 * n {
                let k = j / 2;
                let c = if j % 2 == 0 { GaussRational::real(1) } else { i.clone() };
                t[k] = c.clone();
                for (q, r) in self.model.rho.iter().enumerate() {
                    let dv = c.mul(&dr(r, k)).add(&c.conj().mul(&dr(r, big_n + k))).neg();
                    t[n + q] = t[n + q].add(&i.mul(&dv));
                }
            } else {
                let k = j - 2 * n;
                t[n + k] = GaussRational::real(1);
                for (q, r) in self.model.rho.iter().enumerate() {
                    let dv = dr(r, n + k).add(&dr(r, big_n + n + k)).neg();
                    t[n + q] = t[n + q].add(&i.mul(&dv));
                }
            }
            out.push(t);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemSummary {
    pub r: u32,
    pub k: u32,
    pub l: u32,
    pub m: u32,
    pub guaranteed_order: u32,
    /// Smallest `k` with guaranteed order `≥ r + 1` at the base point.
    pub k_needed: u32,
    /// `k` from the order bounds, when finite type was reached.
    pub k_bound: Option<u32>,
}

/// `Φ` around the base point of `source`, built lazily at each requested
/// point of `M`.
pub struct CompleteSystem {
    pub chart: RealChart,
    pub target: ManifoldModel,
    pub l: u32,
    pub k: u32,
    pub r: u32,
    pub seed: u64,
    pub summary: SystemSummary,
    /// Validity radius of the box around the base point, in the real
    /// coordinates.
    pub radius: f64,
    cache: Mutex<HashMap<Vec<GaussRational>, Arc<(Setup, Kernel<Complex64>)>>>,
}

impl CompleteSystem {
    pub fn new(source: &ManifoldModel, target: &ManifoldModel, l: u32, k: u32, seed: u64) -> Result<Self> {
        let setup = Setup::new(source, target, l, Some(k), seed)?;
        let r = setup.r;
        let k_needed = r + (r + 1) * (setup.m + 1);
        if setup.guaranteed_order < r + 1 {
            return Err(ReflectionError::Budget(format!(
                "the complete system needs guaranteed order ≥ r + 1 = {}, k = {k} gives {} (need k ≥ {k_needed})",
                r + 1,
                setup.guaranteed_order
            )));
        }
        let k_bound = Setup::new(source, target, l, None, seed).ok().map(|s| s.k);
        let summary = SystemSummary { r, k, l, m: setup.m, guaranteed_order: setup.guaranteed_order, k_needed, k_bound };
        Ok(Self {
            chart: RealChart::new(source),
            target: target.clone(),
            l,
            k,
            r,
            seed,
            summary,
            radius: 0.25,
            cache: Mutex::new(HashMap::new()),
        })
    }

    fn setup_at(&self, x: &[GaussRational]) -> Result<Arc<(Setup, Kernel<Complex64>)>> {
        if let Some(s) = self.cache.lock().expect("cache lock").get(x) {
            return Ok(s.clone());
        }
        let p = self.chart.point(x)?;
        let centered = self.chart.model.translate(&p)?;
        if centered.perm != self.chart.model.perm {
            return Err(ReflectionError::Jet("the coordinates would need reordering at this point".into()));
        }
        let setup = Setup::new(&centered, &self.target, self.l, Some(self.k), self.seed)?;
        if setup.m != self.summary.m {
            return Err(ReflectionError::Budget(format!("m changes from {} to {} at {x:?}", self.summary.m, setup.m)));
        }
        let kernel = setup.kernel.convert(1e-9);
        let entry = Arc::new((setup, kernel));
        self.cache.lock().expect("cache lock").insert(x.to_vec(), entry.clone());
        Ok(entry)
    }

    /// `j^{r+1}` at the point over `x` from the `r`-jet there (components
    /// on the source ring, in coordinates centered at the point).
    pub fn phi<C: Coeff>(&self, x: &[GaussRational], jet: &[TruncSeries<C>], kernel_of: impl Fn(&Setup, &Kernel<Complex64>) -> Kernel<C>) -> Result<Vec<TruncSeries<C>>> {
        let entry = self.setup_at(x)?;
        let (setup, numeric) = (&entry.0, &entry.1);
        let kernel = kernel_of(setup, numeric);
        let f: Vec<TruncSeries<C>> = jet.iter().map(|s| s.truncate(self.r).with_order(EXACT)).collect();
        let p = parametrize(setup, &kernel, &f)?;
        Ok(p.psi.iter().map(|s| s.truncate(self.r + 1)).collect())
    }

    pub fn phi_exact(&self, x: &[GaussRational], jet: &[TruncSeries]) -> Result<Vec<TruncSeries>> {
        self.phi(x, jet, |s, _| s.kernel.clone())
    }

    pub fn phi_numeric(&self, x: &[GaussRational], jet: &[TruncSeries<Complex64>]) -> Result<Vec<TruncSeries<Complex64>>> {
        self.phi(x, jet, |_, k| k.clone())
    }

    /// The jet ODE: `∂_{x_j} Λ_α = Σ_k (∂p_k/∂x_j)(α_k + 1) Λ_{α+e_k}`, with
    /// the top order from `Φ`. Jets are coefficient vectors in the order of
    /// [`super::jet::jet_coordinates`].
    pub fn derivative(&self, x: &[GaussRational], coords: &[Complex64], j: usize) -> Result<Vec<Complex64>> {
        let big_n = self.chart.model.big_n();
        let np = self.target.big_n();
        let vars = &self.chart.model.vars;
        let jet = super::jet::jet_from_coordinates(coords, vars, big_n, np, self.r);
        let top = self.phi_numeric(x, &jet)?;
        let t: Vec<Complex64> = self.chart.tangents(x)?[j].iter().map(|c| c.to_complex64()).collect();
        Ok(self.contact_field(&jet, &top, &t))
    }

    /// Right-hand side of the jet ODE along the tangent `t`, given the
    /// `r`-jet and its completion `top` to order `r + 1`.
    pub fn contact_field<C: Coeff>(&self, jet: &[TruncSeries<C>], top: &[TruncSeries<C>], t: &[C]) -> Vec<C> {
        let mons = monomials_up_to(self.chart.model.big_n(), self.r);
        let mut out = Vec::with_capacity(jet.len() * mons.len());
        for (f, g) in jet.iter().zip(top) {
            for m in &mons {
                let mut acc = C::zero();
                for (k, tk) in t.iter().enumerate() {
                    if tk.is_zero() {
                        continue;
                    }
                    let up = m.mul(&Monomial::var(k, 1));
                    let v = if up.degree() <= self.r { f.coeff(&up) } else { g.coeff(&up) };
                    acc.add_assign(&tk.mul(&v).mul(&C::from_i64(m.exp(k) as i64 + 1)));
                }
                out.push(acc);
            }
        }
        out
    }
}
