use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::chain::SegreChain;
use super::{Result, SegreError};
use crate::manifold::model::combinations;
use crate::series::{linalg, var_names, Coeff, GaussRational, Matrix, TruncSeries, VanishingOrder, Vars, EXACT};

/// `Ṽ(η, ξ)` and `V(η, ξ¹)` on the ring `η¹..η^s, ξ⁰..ξ^{s−1}` (each block of
/// size `n`), with `V` the restriction to the selected `ξ`-components.
#[derive(Clone, Debug)]
pub struct VMap {
    pub s: usize,
    pub n: usize,
    pub big_n: usize,
    pub vars: Vars,
    pub tilde_v: Vec<TruncSeries>,
    pub v: Vec<TruncSeries>,
    /// Indices into `ξ` (`0..s·n`) of the components forming `ξ¹`.
    pub xi1_selection: Vec<usize>,
}

impl VMap {
    pub fn eta(&self, a: usize, i: usize) -> usize {
        (a - 1) * self.n + i
    }

    pub fn xi(&self, b: usize, i: usize) -> usize {
        self.s * self.n + b * self.n + i
    }

    pub fn eta_count(&self) -> usize {
        self.s * self.n
    }

    /// Ring index of the `k`-th selected component.
    pub fn xi1_var(&self, k: usize) -> usize {
        self.s * self.n + self.xi1_selection[k]
    }

    /// The chain arguments `t⁰, …, t^{2s−1}` (blocks of `n`) in the ring
    /// of `η, ξ`.
    pub fn chain_arguments(&self) -> Vec<TruncSeries> {
        (0..2 * self.s).flat_map(|j| argument(j, self.s, self.n, &self.vars)).collect()
    }

    /// `∂V/∂ξ¹(η, 0)`.
    pub fn jacobian_at_zero(&self) -> Result<Matrix<GaussRational>> {
        let xi_vars: Vec<usize> = (self.s * self.n..2 * self.s * self.n).collect();
        Ok(self
            .v
            .iter()
            .map(|c| {
                (0..self.big_n)
                    .map(|k| c.differentiate(self.xi1_var(k)).map(|s| s.set_zero(&xi_vars)))
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<_, _>>()?)
    }
}

/// Argument `t^j` of `v^{2s}` in terms of `(η, ξ)`.
fn argument(j: usize, s: usize, n: usize, vars: &Vars) -> Vec<TruncSeries> {
    let var = |k: usize| TruncSeries::var(vars, EXACT, k);
    let eta = |a: usize, i: usize| var((a - 1) * n + i);
    let xi = |b: usize, i: usize| var(s * n + b * n + i);
    (0..n)
        .map(|i| {
            if j + 2 <= s {
                eta(j + 1, i).try_add(&xi(s - 1 - j, i)).expect("same ring")
            } else if j + 1 == s {
                eta(s, i)
            } else if j + 1 < 2 * s {
                eta(2 * s - 1 - j, i)
            } else {
                xi(0, i)
            }
        })
        .collect()
}

pub fn build_v(chain: &SegreChain, seed: u64) -> Result<VMap> {
    if chain.len % 2 != 0 {
        return Err(SegreError::Budget(format!("V needs an even chain, got length {}", chain.len)));
    }
    let s = chain.len / 2;
    let (n, big_n) = (chain.n, chain.big_n());
    let mut names = Vec::new();
    names.extend((1..=s).flat_map(|a| (1..=n).map(move |i| format!("eta{a}_{i}"))));
    names.extend((0..s).flat_map(|b| (1..=n).map(move |i| format!("xi{b}_{i}"))));
    let vars = var_names(&names);
    let args: Vec<TruncSeries> = (0..chain.len).flat_map(|j| argument(j, s, n, &vars)).collect();
    let tilde_v: Vec<TruncSeries> = chain.v[chain.len].iter().map(|c| c.compose(&args)).collect::<std::result::Result<_, _>>()?;
    let xi_vars: Vec<usize> = (s * n..2 * s * n).collect();
    if tilde_v.iter().any(|c| !c.set_zero(&xi_vars).is_zero()) {
        return Err(SegreError::Rank("Ṽ(η, 0) does not vanish".into()));
    }
    let jac: Matrix<GaussRational> = tilde_v
        .iter()
        .map(|c| {
            xi_vars
                .iter()
                .map(|&x| c.differentiate(x).map(|d| d.set_zero(&xi_vars)))
                .collect::<std::result::Result<Vec<_>, _>>()
        })
        .collect::<std::result::Result<_, _>>()?;
    let rank = linalg::certified_rank(&jac, seed)?;
    if rank < big_n {
        return Err(SegreError::Rank(format!("generic rank of ∂Ṽ/∂ξ along ξ = 0 is {rank} < {big_n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let reference: Vec<GaussRational> = (0..s * n)
        .map(|_| GaussRational::real(rng.gen_range(1..=97)))
        .chain(std::iter::repeat(GaussRational::zero()).take(s * n))
        .collect();
    let mut best: Option<(u32, Vec<usize>)> = None;
    for cols in combinations(s * n, big_n) {
        let sub: Matrix<GaussRational> = jac.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
        let det = linalg::det_series(&sub)?;
        if let VanishingOrder::Finite(o) = det.vanishing_order(&reference) {
            if best.as_ref().map_or(true, |(b, _)| o < *b) {
                best = Some((o, cols));
            }
        }
    }
    let (_, sel) = best.ok_or_else(|| SegreError::Rank("no ξ-selection has a nonvanishing determinant within the truncation".into()))?;
    let unselected: Vec<usize> = (0..s * n).filter(|c| !sel.contains(c)).map(|c| s * n + c).collect();
    let v = tilde_v.iter().map(|c| c.set_zero(&unselected)).collect();
    Ok(VMap { s, n, big_n, vars, tilde_v, v, xi1_selection: sel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{normal_coordinates, parse_model};
    use crate::segre::segre_chain;

    fn vmap(src: &str, s: usize) -> Result<VMap> {
        let nf = normal_coordinates(&parse_model(src, 8).unwrap()).unwrap();
        build_v(&segre_chain(&nf, 2 * s).unwrap(), 7)
    }

    #[test]
    fn quadric_selection() {
        let v = vmap("model \"q\" { ambient 2; codim 1; im w = z*conj(z); }", 2).unwrap();
        assert_eq!(v.xi1_selection, vec![0, 1]);
        let det = linalg::det_series(&v.jacobian_at_zero().unwrap()).unwrap();
        assert_eq!(det.valuation(), Some(1));
    }

    #[test]
    fn codim_two_selection() {
        let v = vmap("model \"c\" { ambient 3; codim 2; im w1 = z*conj(z); im w2 = z*conj(z)*(z + conj(z)); }", 3).unwrap();
        assert_eq!(v.xi1_selection.len(), 3);
    }

    #[test]
    fn hyperplane_rank_deficient() {
        assert!(matches!(vmap("model \"h\" { ambient 2; codim 1; im w = 0; }", 2), Err(SegreError::Rank(_))));
    }
}
