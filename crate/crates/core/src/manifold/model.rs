use serde::Serialize;

use super::ModelError;
use crate::series::{
    generic_rank, linalg, var_names, Coeff, GaussRational, Matrix, Monomial, TruncSeries, Vars, EXACT,
};

/// A generic real submanifold `M ⊂ ℂᴺ` of codimension `d`, described by
/// complexified defining functions `ρ(Z, ζ)` with the base point at the
/// origin.
///
/// The variable list is `z1..zn, w1..wd, chi1..chin, tau1..taud`.
#[derive(Clone, Debug)]
pub struct ManifoldModel {
    pub label: String,
    pub n: usize,
    pub d: usize,
    pub vars: Vars,
    pub rho: Vec<TruncSeries>,
    pub kappa: u32,
    /// Point of the original coordinates that now sits at the origin.
    pub base_point: Vec<GaussRational>,
    /// `perm[i]` is the original index of the current coordinate `i`.
    pub perm: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelSummary {
    pub label: String,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub n: usize,
    pub d: usize,
    pub kappa: u32,
    pub base_point: Vec<GaussRational>,
    pub coordinate_order: Vec<usize>,
    pub rho: Vec<String>,
}

/// Variable names for a model with CR dimension `n` and codimension `d`.
pub fn model_vars(n: usize, d: usize) -> Vars {
    let mut names = Vec::new();
    names.extend((1..=n).map(|i| format!("z{i}")));
    names.extend((1..=d).map(|i| format!("w{i}")));
    names.extend((1..=n).map(|i| format!("chi{i}")));
    names.extend((1..=d).map(|i| format!("tau{i}")));
    var_names(&names)
}

/// The reality involution: conjugate every coefficient and exchange `Z`
/// with `ζ` (the first `big_n` variables with the next `big_n`).
pub fn conj_swap<C: Coeff>(s: &TruncSeries<C>, big_n: usize) -> TruncSeries<C> {
    assert_eq!(s.nvars(), 2 * big_n);
    let map: Vec<usize> = (0..2 * big_n).map(|v| (v + big_n) % (2 * big_n)).collect();
    s.embed(s.vars(), &map).conj_coeffs()
}

impl ManifoldModel {
    /// Build and validate a model. The coordinates are reordered if the
    /// `w`-block of `∂ρ/∂Z` at the origin is singular.
    pub fn new(label: &str, n: usize, d: usize, rho: Vec<TruncSeries>, kappa: u32) -> Result<Self, ModelError> {
        let big_n = n + d;
        if n == 0 || d == 0 {
            return Err(ModelError::Dimensions(format!("need CR dimension ≥ 1 and codimension ≥ 1 (n = {n}, d = {d})")));
        }
        if 2 * big_n > crate::series::MAX_VARS {
            return Err(ModelError::Dimensions(format!("ambient dimension {big_n} exceeds the supported maximum {}", crate::series::MAX_VARS / 2)));
        }
        if rho.len() != d {
            return Err(ModelError::Dimensions(format!("expected {d} defining functions, got {}", rho.len())));
        }
        let model = Self {
            label: label.to_string(),
            n,
            d,
            vars: model_vars(n, d),
            rho,
            kappa,
            base_point: vec![GaussRational::zero(); big_n],
            perm: (0..big_n).collect(),
        };
        model.check_real()?;
        for (j, r) in model.rho.iter().enumerate() {
            if !r.constant_term().is_zero() {
                return Err(ModelError::NotOnManifold(format!("ρ{} does not vanish at the base point", j + 1)));
            }
        }
        model.make_w_block_invertible()
    }

    pub fn big_n(&self) -> usize {
        self.n + self.d
    }

    pub fn z(&self, i: usize) -> usize {
        i
    }
    pub fn w(&self, j: usize) -> usize {
        self.n + j
    }
    pub fn chi(&self, i: usize) -> usize {
        self.big_n() + i
    }
    pub fn tau(&self, j: usize) -> usize {
        self.big_n() + self.n + j
    }

    pub fn conj_swap(&self, s: &TruncSeries) -> TruncSeries {
        conj_swap(s, self.big_n())
    }

    /// Every `ρʲ` equals its conj-swap image.
    pub fn check_real(&self) -> Result<(), ModelError> {
        for (j, r) in self.rho.iter().enumerate() {
            let c = self.conj_swap(r);
            let diff = r.try_sub(&c).expect("same ring");
            let bad = diff.terms().next().map(|(m, v)| (m.exps(self.vars.len()), v.to_string()));
            if let Some((e, v)) = bad {
                return Err(ModelError::NotReal(format!(
                    "ρ{} is not real: coefficient of {e:?} differs from its mirror by {v}",
                    j + 1
                )));
            }
        }
        Ok(())
    }

    /// `∂ρ/∂Z` as a `d × N` matrix of series.
    pub fn rho_z(&self) -> Matrix<GaussRational> {
        self.rho
            .iter()
            .map(|r| (0..self.big_n()).map(|k| r.differentiate(k).expect("variable in range")).collect())
            .collect()
    }

    pub fn rho_z_at_origin(&self) -> Vec<Vec<GaussRational>> {
        linalg::constant_part(&self.rho_z())
    }

    /// Rank of `∂ρ/∂Z` at the origin.
    pub fn genericity_rank(&self) -> usize {
        linalg::rank(&self.rho_z_at_origin())
    }

    /// Apply the coordinate permutation lexicographically first among those
    /// whose `w`-block is invertible.
    fn make_w_block_invertible(mut self) -> Result<Self, ModelError> {
        let jac = self.rho_z_at_origin();
        if linalg::rank(&jac) < self.d {
            return Err(ModelError::NotGeneric(format!(
                "∂ρ/∂Z has rank {} < {} at the base point",
                linalg::rank(&jac),
                self.d
            )));
        }
        let big_n = self.big_n();
        let block = |cols: &[usize]| -> Vec<Vec<GaussRational>> {
            jac.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect()
        };
        let natural: Vec<usize> = (self.n..big_n).collect();
        if linalg::rank(&block(&natural)) == self.d {
            return Ok(self);
        }
        let mut chosen = None;
        for cols in combinations(big_n, self.d) {
            if linalg::rank(&block(&cols)) == self.d {
                chosen = Some(cols);
                break;
            }
        }
        let wcols = chosen.expect("full-rank Jacobian has an invertible d-block");
        let mut perm: Vec<usize> = (0..big_n).filter(|c| !wcols.contains(c)).collect();
        perm.extend(&wcols);
        self = self.permute(&perm);
        Ok(self)
    }

    /// Reorder coordinates so that new coordinate `i` is old coordinate
    /// `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let big_n = self.big_n();
        let mut map = vec![0usize; 2 * big_n];
        for (new, &old) in perm.iter().enumerate() {
            map[old] = new;
            map[old + big_n] = new + big_n;
        }
        let rho = self.rho.iter().map(|r| r.embed(&self.vars, &map)).collect();
        Self {
            rho,
            base_point: perm.iter().map(|&o| self.base_point[o].clone()).collect(),
            perm: perm.iter().map(|&o| self.perm[o]).collect(),
            ..self.clone()
        }
    }

    /// Move the point `p` (current coordinates) to the origin:
    /// `ρ(Z + p, ζ + p̄)`.
    pub fn translate(&self, p: &[GaussRational]) -> Result<Self, ModelError> {
        let big_n = self.big_n();
        if p.len() != big_n {
            return Err(ModelError::Dimensions(format!("base point needs {big_n} coordinates")));
        }
        let args: Vec<TruncSeries> = (0..2 * big_n)
            .map(|v| {
                let c = if v < big_n { p[v].clone() } else { p[v - big_n].conj() };
                TruncSeries::var(&self.vars, EXACT, v).try_add(&TruncSeries::constant(&self.vars, EXACT, c)).unwrap()
            })
            .collect();
        let mut rho = Vec::new();
        for (j, r) in self.rho.iter().enumerate() {
            if !r.is_exact() {
                return Err(ModelError::Dimensions("translation needs exact defining functions".into()));
            }
            let t = r.compose(&args).map_err(|e| ModelError::Series(e.to_string()))?;
            if !t.constant_term().is_zero() {
                return Err(ModelError::NotOnManifold(format!(
                    "ρ{} = {} ≠ 0 at the requested point",
                    j + 1,
                    t.constant_term()
                )));
            }
            rho.push(t);
        }
        let mut out = Self {
            rho,
            base_point: self.base_point.iter().zip(p).map(|(a, b)| a.add(b)).collect(),
            perm: self.perm.clone(),
            ..self.clone()
        };
        out = out.make_w_block_invertible()?;
        Ok(out)
    }

    /// Replace `ρ` by `A·ρ` for an invertible constant matrix `A`.
    pub fn mix_rho(&self, a: &[Vec<GaussRational>]) -> Self {
        let rho = a
            .iter()
            .map(|row| {
                let mut acc = TruncSeries::zero(&self.vars, self.rho[0].order());
                for (c, r) in row.iter().zip(&self.rho) {
                    acc = acc.try_add(&r.scale(c)).unwrap();
                }
                acc
            })
            .collect();
        Self { rho, ..self.clone() }
    }

    /// Generic rank of `∂ρ/∂Z` (full for generic models).
    pub fn generic_rank_z(&self, seed: u64) -> usize {
        generic_rank(&self.rho_z(), seed)
    }

    pub fn summary(&self) -> ModelSummary {
        ModelSummary {
            label: self.label.clone(),
            big_n: self.big_n(),
            n: self.n,
            d: self.d,
            kappa: self.kappa,
            base_point: self.base_point.clone(),
            coordinate_order: self.perm.clone(),
            rho: self.rho.iter().map(|r| r.to_string()).collect(),
        }
    }

    /// Coefficient of a given exponent vector in `ρʲ`.
    pub fn rho_coeff(&self, j: usize, exps: &[u32]) -> GaussRational {
        self.rho[j].coeff(&Monomial::from_exps(exps))
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_in_order() {
        let c = combinations(4, 2);
        assert_eq!(c.len(), 6);
        assert_eq!(c[0], vec![0, 1]);
        assert_eq!(c[5], vec![2, 3]);
    }
}
