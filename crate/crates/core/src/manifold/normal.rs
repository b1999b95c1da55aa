use super::model::{conj_swap, ManifoldModel};
use super::ModelError;
use crate::series::{linalg, solve_implicit, Coeff, GaussRational, Monomial, TruncSeries, EXACT};

/// Solved form `w = Q(z, χ, τ)` of a model in normal coordinates.
#[derive(Clone, Debug)]
pub struct NormalForm {
    /// `Q_j`, series in the model ring not involving `w`.
    pub q: Vec<TruncSeries>,
    /// Old coordinates as functions of the new ones (`N` series in `Z`).
    pub to_old: Vec<TruncSeries>,
    /// The model with `ρ` pulled back to the new coordinates.
    pub model: ManifoldModel,
    pub order: u32,
}

impl NormalForm {
    /// `Q̄(χ, z, w)`: the relation `w = Q(z, χ, τ)` read as
    /// `τ = Q̄(χ, z, w)`.
    pub fn qbar(&self) -> Vec<TruncSeries> {
        let big_n = self.model.big_n();
        self.q.iter().map(|s| conj_swap(s, big_n)).collect()
    }
}

/// Solve `ρ = 0` for `w`. The solution is marked exact when it is a
/// polynomial satisfying the equations identically.
pub fn solve_for_w(model: &ManifoldModel, order: u32) -> Result<Vec<TruncSeries>, ModelError> {
    let unknowns: Vec<usize> = (0..model.d).map(|j| model.w(j)).collect();
    let f: Vec<TruncSeries> = model.rho.iter().map(|r| r.truncate(order)).collect();
    let sol = solve_implicit(&f, &unknowns, order).map_err(|e| match e {
        crate::series::SeriesError::SingularJacobian => ModelError::NotGeneric("∂ρ/∂w is singular at the base point".into()),
        other => other.into(),
    })?;
    Ok(promote(&model.rho, &unknowns, sol))
}

/// Reinterpret a truncated solution of `F(u, x) = 0` as exact if `F` is
/// exact and the truncation solves it identically.
pub(crate) fn promote(f: &[TruncSeries], unknowns: &[usize], sol: Vec<TruncSeries>) -> Vec<TruncSeries> {
    if f.iter().any(|s| !s.is_exact()) {
        return sol;
    }
    let vars = f[0].vars().clone();
    let exact: Vec<TruncSeries> = sol.iter().map(|s| s.clone().with_order(EXACT)).collect();
    let mut args: Vec<TruncSeries> = (0..vars.len()).map(|v| TruncSeries::var(&vars, EXACT, v)).collect();
    for (k, &u) in unknowns.iter().enumerate() {
        args[u] = exact[k].clone();
    }
    let solves = f.iter().all(|s| s.compose(&args).is_ok_and(|r| r.is_zero()));
    if solves {
        exact
    } else {
        sol
    }
}

struct Ring<'a> {
    m: &'a ManifoldModel,
    order: u32,
}

impl Ring<'_> {
    fn var(&self, v: usize) -> TruncSeries {
        TruncSeries::var(&self.m.vars, EXACT, v)
    }

    fn zero(&self) -> TruncSeries {
        TruncSeries::zero(&self.m.vars, EXACT)
    }

    fn identity_args(&self) -> Vec<TruncSeries> {
        (0..2 * self.m.big_n()).map(|v| self.var(v)).collect()
    }

    /// `f(z, τ)` as `f(z, w)`; `χ` is dropped.
    fn tau_to_w(&self, f: &TruncSeries) -> TruncSeries {
        let mut args = vec![self.zero(); 2 * self.m.big_n()];
        for i in 0..self.m.n {
            args[self.m.z(i)] = self.var(self.m.z(i));
        }
        for j in 0..self.m.d {
            args[self.m.tau(j)] = self.var(self.m.w(j));
        }
        f.compose(&args).expect("valuation ≥ 1")
    }

    /// `Q(z, 0, τ)` or `Q(0, 0, τ)` style restrictions.
    fn restrict(&self, f: &TruncSeries, keep_z: bool) -> TruncSeries {
        let mut args = self.identity_args();
        for i in 0..self.m.n {
            if !keep_z {
                args[self.m.z(i)] = self.zero();
            }
            args[self.m.chi(i)] = self.zero();
        }
        f.compose(&args).expect("valuation ≥ 1")
    }

    /// Solve `lhs(w) = Q(z, χ, rhs_tau)` for `w`.
    fn resolve(&self, lhs: &[TruncSeries], q: &[TruncSeries], tau_sub: &[TruncSeries]) -> Result<Vec<TruncSeries>, ModelError> {
        let mut args = self.identity_args();
        for j in 0..self.m.d {
            args[self.m.tau(j)] = tau_sub[j].clone();
        }
        let f: Vec<TruncSeries> = lhs
            .iter()
            .zip(q)
            .map(|(l, qj)| l.try_sub(&qj.compose(&args).expect("valuation ≥ 1")).expect("same ring"))
            .collect();
        let unknowns: Vec<usize> = (0..self.m.d).map(|j| self.m.w(j)).collect();
        let sol = solve_implicit(&f, &unknowns, self.order)?;
        Ok(promote(&f, &unknowns, sol))
    }

    /// Compose the coordinate change `to_old` with `w ↦ g(z, w)`.
    fn chain(&self, to_old: &[TruncSeries], g: &[TruncSeries]) -> Vec<TruncSeries> {
        let mut args = self.identity_args();
        for j in 0..self.m.d {
            args[self.m.w(j)] = g[j].clone();
        }
        to_old.iter().map(|t| t.compose(&args).expect("valuation ≥ 1")).collect()
    }
}

/// Holomorphic coordinates in which the solved form satisfies
/// `Q(z, 0, τ) = Q(0, χ, τ) = τ` through the truncation order.
pub fn normal_coordinates(model: &ManifoldModel) -> Result<NormalForm, ModelError> {
    let order = model.kappa;
    let ring = Ring { m: model, order };
    let (n, d) = (model.n, model.d);
    let mut q = solve_for_w(model, order)?;
    let mut to_old: Vec<TruncSeries> = (0..n + d).map(|v| ring.var(v)).collect();
    let half = GaussRational::rational(1, 2);

    // Linear part first: `w = Bw'` with `A B̄ = B` turns `w = Aτ` into `w' = τ'`.
    let slice: Vec<TruncSeries> = q.iter().map(|s| ring.restrict(s, false)).collect();
    let a: Vec<Vec<GaussRational>> = (0..d)
        .map(|j| (0..d).map(|k| slice[j].coeff(&Monomial::var(model.tau(k), 1))).collect())
        .collect();
    let identity = |j: usize, k: usize| if j == k { GaussRational::one() } else { GaussRational::zero() };
    if (0..d).any(|j| (0..d).any(|k| a[j][k] != identity(j, k))) {
        let b = [GaussRational::one(), GaussRational::imag_unit(), GaussRational::from_parts(1, 1, 2, 1)]
            .iter()
            .map(|c| {
                (0..d)
                    .map(|j| (0..d).map(|k| identity(j, k).mul(c).add(&a[j][k].mul(&c.conj()))).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            })
            .find(|b| !linalg::det(b).is_zero())
            .ok_or_else(|| ModelError::NotGeneric("the linear part of ρ is not a real hyperplane".into()))?;
        let lin = |conj: bool, var: &dyn Fn(usize) -> usize| -> Vec<TruncSeries> {
            (0..d)
                .map(|j| {
                    let terms = (0..d).map(|k| (Monomial::var(var(k), 1), if conj { b[j][k].conj() } else { b[j][k].clone() }));
                    TruncSeries::from_terms(&model.vars, EXACT, terms)
                })
                .collect()
        };
        let psi_w = lin(false, &|k| model.w(k));
        q = ring.resolve(&psi_w, &q, &lin(true, &|k| model.tau(k)))?;
        to_old = ring.chain(&to_old, &psi_w);
    }

    // Make the restriction to z = χ = 0 the identity.
    let mut settled = false;
    for _ in 0..=order {
        let phi: Vec<TruncSeries> = q.iter().map(|s| ring.restrict(s, false)).collect();
        if (0..d).all(|j| same(&phi[j], &ring.var(model.tau(j)))) {
            settled = true;
            break;
        }
        let psi_w: Vec<TruncSeries> = (0..d)
            .map(|j| (&ring.var(model.w(j)) + &ring.tau_to_w(&phi[j])).scale(&half))
            .collect();
        let psi_bar_tau: Vec<TruncSeries> = (0..d)
            .map(|j| (&ring.var(model.tau(j)) + &phi[j].conj_coeffs()).scale(&half))
            .collect();
        q = ring.resolve(&psi_w, &q, &psi_bar_tau)?;
        to_old = ring.chain(&to_old, &psi_w);
    }
    if !settled {
        return Err(ModelError::Budget("the real slice {z = 0} could not be straightened within the truncation order".into()));
    }

    // Make the Segre variety of each point of that slice a horizontal plane.
    let w_map: Vec<TruncSeries> = q.iter().map(|s| ring.tau_to_w(&ring.restrict(s, true))).collect();
    if (0..d).any(|j| !same(&w_map[j], &ring.var(model.w(j)))) {
        let big_n = model.big_n();
        let w_bar: Vec<TruncSeries> = w_map
            .iter()
            .map(|s| {
                // W̄(χ, τ): conjugate coefficients, z → χ, w → τ.
                conj_swap(s, big_n)
            })
            .collect();
        q = ring.resolve(&w_map, &q, &w_bar)?;
        to_old = ring.chain(&to_old, &w_map);
    }

    // Pull ρ back along the coordinate change.
    let big_n = model.big_n();
    let mut args: Vec<TruncSeries> = to_old.clone();
    args.extend(to_old.iter().map(|t| conj_swap(t, big_n)));
    let rho = model
        .rho
        .iter()
        .map(|r| r.compose(&args))
        .collect::<Result<Vec<_>, _>>()?;
    let pulled = ManifoldModel { rho, ..model.clone() };

    let nf = NormalForm { q, to_old, model: pulled, order };
    verify_normal(&nf)?;
    Ok(nf)
}

fn same(a: &TruncSeries, b: &TruncSeries) -> bool {
    a.try_sub(b).is_ok_and(|d| d.is_zero())
}

/// Check `Q(z, 0, τ) = τ` and `Q(0, χ, τ) = τ` coefficientwise.
pub fn verify_normal(nf: &NormalForm) -> Result<(), ModelError> {
    let m = &nf.model;
    let ring = Ring { m, order: nf.order };
    for (j, q) in nf.q.iter().enumerate() {
        let tau = ring.var(m.tau(j));
        let mut a = ring.identity_args();
        let mut b = ring.identity_args();
        for i in 0..m.n {
            a[m.chi(i)] = ring.zero();
            b[m.z(i)] = ring.zero();
        }
        let qa = q.compose(&a)?;
        let qb = q.compose(&b)?;
        if !same(&qa, &tau) || !same(&qb, &tau) {
            return Err(ModelError::Budget(format!("normalization of Q{} not certified at order {}", j + 1, nf.order)));
        }
    }
    Ok(())
}
