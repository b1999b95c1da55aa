use super::vmap::VMap;
use super::{Result, SegreError};
use crate::series::{linalg, var_names, GaussRational, Matrix, SeriesError, TruncSeries, Vars, EXACT};

/// `φ(p, Z̃)` with `V(p, φ(p, Z̃)) = δ(p)·Z̃`, on the ring `p, Z̃` where `p`
/// are the remaining parameters (all of `η`, or none after specializing).
#[derive(Clone, Debug)]
pub struct Inverse {
    pub params: usize,
    pub big_n: usize,
    pub vars: Vars,
    pub phi: Vec<TruncSeries>,
    pub delta: TruncSeries,
    /// `V` on the ring `p, ξ¹`.
    pub v: Vec<TruncSeries>,
}

impl Inverse {
    /// `V(p, φ(p, Z̃)) − δ(p)·Z̃`, component by component.
    pub fn residual(&self) -> Result<Vec<TruncSeries>> {
        let mut args: Vec<TruncSeries> = (0..self.params).map(|k| TruncSeries::var(&self.vars, EXACT, k)).collect();
        args.extend(self.phi.iter().cloned());
        let mut out = Vec::new();
        for (k, c) in self.v.iter().enumerate() {
            let lhs = c.embed(&self.vars, &(0..self.params + self.big_n).collect::<Vec<_>>()).compose(&args)?;
            let z = TruncSeries::var(&self.vars, EXACT, self.params + k);
            out.push(lhs.try_sub(&self.delta.try_mul(&z)?)?);
        }
        Ok(out)
    }
}

/// `V` on the compact ring `η, ξ¹`.
fn compact_v(vmap: &VMap) -> (Vars, Vec<TruncSeries>) {
    let h = vmap.eta_count();
    let mut names: Vec<String> = vmap.vars.iter().take(h).map(|s| s.to_string()).collect();
    names.extend((1..=vmap.big_n).map(|k| format!("xi1_{k}")));
    let vars = var_names(&names);
    let mut map: Vec<usize> = (0..vmap.vars.len()).map(|v| v.min(h)).collect();
    for k in 0..vmap.big_n {
        map[vmap.xi1_var(k)] = h + k;
    }
    (vars.clone(), vmap.v.iter().map(|c| c.embed(&vars, &map)).collect())
}

/// Joint inverse in `(η, Z̃)` to the given order.
pub fn invert_v(vmap: &VMap, order: u32) -> Result<Inverse> {
    let (vars, v) = compact_v(vmap);
    lemma(&vars, &v, vmap.eta_count(), vmap.big_n, order)
}

/// Inverse with `η` specialized to a point where `δ(η) ≠ 0`; requires `V`
/// to be exact.
pub fn invert_v_at(vmap: &VMap, eta: &[GaussRational], order: u32) -> Result<Inverse> {
    let (_, v) = compact_v(vmap);
    let big_n = vmap.big_n;
    if eta.len() != vmap.eta_count() {
        return Err(SegreError::Series(SeriesError::Precondition(format!("η has {} entries, V takes {}", eta.len(), vmap.eta_count()))));
    }
    if v.iter().any(|c| !c.is_exact()) {
        return Err(SegreError::Series(SeriesError::Precondition("specializing η needs an exact V".into())));
    }
    let names: Vec<String> = (1..=big_n).map(|k| format!("xi1_{k}")).collect();
    let small = var_names(&names);
    let mut args: Vec<TruncSeries> = eta.iter().map(|c| TruncSeries::constant(&small, EXACT, c.clone())).collect();
    args.extend((0..big_n).map(|k| TruncSeries::var(&small, EXACT, k)));
    let v_at: Vec<TruncSeries> = v.iter().map(|c| c.compose(&args)).collect::<std::result::Result<_, _>>()?;
    lemma(&small, &v_at, 0, big_n, order)
}

/// Split `V = A(p)ξ + S(p, ξ)`, put `ξ = Δψ` with `Δ = det A`, and solve
/// `ψ + adj(A)·Σ_k Δ^{k−2} S_k(p, ψ) = adj(A)·Z̃` for `ψ(p, Z̃)`.
pub fn lemma(vars: &Vars, v: &[TruncSeries], params: usize, big_n: usize, order: u32) -> Result<Inverse> {
    let xi: Vec<usize> = (params..params + big_n).collect();
    let a: Matrix<GaussRational> = v
        .iter()
        .map(|c| xi.iter().map(|&x| c.differentiate(x).map(|d| d.set_zero(&xi))).collect::<std::result::Result<Vec<_>, _>>())
        .collect::<std::result::Result<_, _>>()?;
    let det = linalg::det_series(&a)?;
    if det.is_zero() {
        return Err(SegreError::Series(SeriesError::SingularJacobian));
    }
    let adj = adjugate(&a)?;

    let mut names: Vec<String> = vars.iter().take(params).map(|s| s.to_string()).collect();
    names.extend((1..=big_n).map(|k| format!("psi{k}")));
    names.extend((1..=big_n).map(|k| format!("zt{k}")));
    let big = var_names(&names);
    let id: Vec<usize> = (0..params + big_n).collect();
    let lift = |s: &TruncSeries| s.embed(&big, &id);
    let psi = |k: usize| TruncSeries::var(&big, EXACT, params + k);
    let zt = |k: usize| TruncSeries::var(&big, EXACT, params + big_n + k);
    let delta_big = lift(&det);

    let mut f = Vec::with_capacity(big_n);
    let mut scaled = Vec::with_capacity(big_n);
    for (k, c) in v.iter().enumerate() {
        let mut lin = TruncSeries::zero(vars, EXACT);
        for (j, &x) in xi.iter().enumerate() {
            lin = lin.try_add(&a[k][j].try_mul(&TruncSeries::var(vars, EXACT, x))?)?;
        }
        let rest = lift(&c.try_sub(&lin)?);
        let top = rest.max_degree().unwrap_or(0);
        let mut acc = TruncSeries::zero(&big, rest.order());
        let mut power = TruncSeries::one(&big, EXACT);
        for deg in 2..=top.max(2) {
            let part = degree_in(&rest, params..params + big_n, deg);
            if !part.is_zero() {
                acc = acc.try_add(&part.try_mul(&power)?)?;
            }
            power = power.try_mul(&delta_big)?;
            if !power.is_exact() {
                power = power.truncate(order);
            }
        }
        scaled.push(acc.truncate(order));
    }
    for i in 0..big_n {
        let mut fi = psi(i);
        for j in 0..big_n {
            let aij = lift(&adj[i][j]);
            fi = fi.try_add(&aij.try_mul(&scaled[j].try_sub(&zt(j))?)?.truncate(order))?;
        }
        f.push(fi);
    }
    let unknowns: Vec<usize> = (params..params + big_n).collect();
    let psi_sol = linalg::solve_implicit(&f, &unknowns, order)?;

    let mut out_names: Vec<String> = vars.iter().take(params).map(|s| s.to_string()).collect();
    out_names.extend((1..=big_n).map(|k| format!("zt{k}")));
    let out = var_names(&out_names);
    let back: Vec<usize> = (0..params + 2 * big_n)
        .map(|k| if k < params { k } else if k < params + big_n { 0 } else { k - big_n })
        .collect();
    let id_out: Vec<usize> = (0..params).chain(params..params + big_n).collect();
    let det_out = det.embed(&out, &id_out);
    let phi = psi_sol
        .iter()
        .map(|p| p.embed(&out, &back).try_mul(&det_out).map(|s| s.truncate(order)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(Inverse {
        params,
        big_n,
        vars: out.clone(),
        phi,
        delta: det_out.try_mul(&det_out)?,
        v: v.iter().map(|c| c.embed(&out, &id_out)).collect(),
    })
}

/// Terms of total degree `deg` in the given variables.
fn degree_in(s: &TruncSeries, range: std::ops::Range<usize>, deg: u32) -> TruncSeries {
    let mut out = TruncSeries::zero(s.vars(), s.order());
    for (m, c) in s.terms() {
        if m.partial_degree(range.clone()) == deg {
            out.add_term(*m, c);
        }
    }
    out
}

fn adjugate(a: &Matrix<GaussRational>) -> Result<Matrix<GaussRational>> {
    let n = a.len();
    if n == 1 {
        return Ok(vec![vec![TruncSeries::one(a[0][0].vars(), EXACT)]]);
    }
    let mut adj = vec![Vec::with_capacity(n); n];
    for (i, row) in adj.iter_mut().enumerate() {
        for j in 0..n {
            // adj[i][j] = (−1)^{i+j} det(a without row j, column i)
            let minor: Matrix<GaussRational> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| a[r][c].clone()).collect())
                .collect();
            let d = linalg::det_series(&minor)?;
            row.push(if (i + j) % 2 == 1 { d.neg() } else { d });
        }
    }
    Ok(adj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{normal_coordinates, parse_model};
    use crate::segre::{build_v, segre_chain};

    fn vm(src: &str, s: usize) -> VMap {
        let nf = normal_coordinates(&parse_model(src, 8).unwrap()).unwrap();
        build_v(&segre_chain(&nf, 2 * s).unwrap(), 3).unwrap()
    }

    #[test]
    fn linear_map_inverts() {
        let vars = var_names(&["x1", "x2"]);
        let x = |k| TruncSeries::var(&vars, EXACT, k);
        let v = vec![&x(0).scale(&GaussRational::real(2)) + &x(1), x(1).scale(&GaussRational::real(3))];
        let inv = lemma(&vars, &v, 0, 2, 4).unwrap();
        assert!(inv.residual().unwrap().iter().all(|r| r.is_zero()));
        assert_eq!(inv.delta.constant_term(), GaussRational::real(36));
    }

    #[test]
    fn quadric_identity() {
        let v = vm("model \"q\" { ambient 2; codim 1; im w = z*conj(z); }", 2);
        let inv = invert_v(&v, 6).unwrap();
        assert!(inv.residual().unwrap().iter().all(|r| r.is_zero()));
        let at = invert_v_at(&v, &[GaussRational::real(3), GaussRational::rational(-1, 2)], 6).unwrap();
        assert!(at.residual().unwrap().iter().all(|r| r.is_zero()));
    }
}
