use super::{Result, SegreError};
use crate::manifold::NormalForm;
use crate::series::{var_names, Coeff, TruncSeries, Vars, MAX_VARS, EXACT};

/// Points `v⁰ = 0, v¹, …, v^len` of the iterated complexification, with
/// `v^j = (t^{j−1}, w^j(t))`, linked by `ρ(v^{j−1}, v^j) = 0` for odd `j`
/// and `ρ(v^j, v^{j−1}) = 0` for even `j`.
#[derive(Clone, Debug)]
pub struct SegreChain {
    pub n: usize,
    pub d: usize,
    pub len: usize,
    /// `t{j}_{i}`, variable `j·n + i − 1`.
    pub vars: Vars,
    pub v: Vec<Vec<TruncSeries>>,
}

impl SegreChain {
    pub fn big_n(&self) -> usize {
        self.n + self.d
    }

    pub fn t(&self, j: usize, i: usize) -> usize {
        j * self.n + i
    }
}

pub fn segre_chain(nf: &NormalForm, len: usize) -> Result<SegreChain> {
    let m = &nf.model;
    let (n, d, big_n) = (m.n, m.d, m.big_n());
    if n * len > MAX_VARS {
        return Err(SegreError::Budget(format!("a chain of length {len} needs {} variables (max {MAX_VARS})", n * len)));
    }
    let names: Vec<String> = (0..len).flat_map(|j| (1..=n).map(move |i| format!("t{j}_{i}"))).collect();
    let vars = var_names(&names);
    let zero = TruncSeries::zero(&vars, EXACT);
    let qbar = nf.qbar();
    let cap = 4 * nf.order.max(1);
    let mut v = vec![vec![zero.clone(); big_n]];
    for j in 1..=len {
        let prev = &v[j - 1];
        let t: Vec<TruncSeries> = (0..n).map(|i| TruncSeries::var(&vars, EXACT, (j - 1) * n + i)).collect();
        let mut args = vec![zero.clone(); 2 * big_n];
        let rel = if j % 2 == 1 {
            for i in 0..n {
                args[m.z(i)] = prev[i].clone();
                args[m.chi(i)] = t[i].clone();
            }
            for k in 0..d {
                args[m.w(k)] = prev[n + k].clone();
            }
            &qbar
        } else {
            for i in 0..n {
                args[m.z(i)] = t[i].clone();
                args[m.chi(i)] = prev[i].clone();
            }
            for k in 0..d {
                args[m.tau(k)] = prev[n + k].clone();
            }
            &nf.q
        };
        let mut point = t;
        for r in rel {
            let mut w = r.compose(&args)?;
            if w.is_exact() && w.max_degree().unwrap_or(0) > cap {
                w = w.truncate(nf.order);
            }
            point.push(w);
        }
        v.push(point);
    }
    Ok(SegreChain { n, d, len, vars, v })
}

/// The defining relations along the chain, as series that must vanish.
pub fn chain_relations(chain: &SegreChain, nf: &NormalForm) -> Result<Vec<TruncSeries>> {
    let mut out = Vec::new();
    for j in 1..=chain.len {
        let (a, b) = if j % 2 == 1 { (&chain.v[j - 1], &chain.v[j]) } else { (&chain.v[j], &chain.v[j - 1]) };
        let args: Vec<TruncSeries> = a.iter().chain(b.iter()).cloned().collect();
        for r in &nf.model.rho {
            out.push(r.compose(&args)?);
        }
    }
    Ok(out)
}

/// `v^{2s}(p_0, …, p_{2s−2}, 0) ≡ 0` for palindromic `p_j = p_{2s−2−j}`.
/// On failure, the offending component and coefficient are reported.
pub fn reflection_identity_check(chain: &SegreChain) -> std::result::Result<(), String> {
    if chain.len % 2 != 0 || chain.len == 0 {
        return Err(format!("chain length {} is not even", chain.len));
    }
    let len = chain.len;
    let n = chain.n;
    let mut args = Vec::with_capacity(len * n);
    for j in 0..len {
        for i in 0..n {
            args.push(if j == len - 1 {
                TruncSeries::zero(&chain.vars, EXACT)
            } else {
                TruncSeries::var(&chain.vars, EXACT, chain.t(j.min(len - 2 - j), i))
            });
        }
    }
    for (c, comp) in chain.v[len].iter().enumerate() {
        let s = comp.compose(&args).map_err(|e| e.to_string())?;
        let bad = s.terms().find(|(_, v)| !v.is_zero()).map(|(m, v)| (m.exps(chain.vars.len()), v.to_string()));
        if let Some((e, v)) = bad {
            return Err(format!("component {c}: coefficient {v} at {e:?}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{normal_coordinates, parse_model};
    use crate::series::{GaussRational, Monomial};

    fn nf(src: &str, kappa: u32) -> NormalForm {
        normal_coordinates(&parse_model(src, kappa).unwrap()).unwrap()
    }

    const Q: &str = "model \"q\" { ambient 2; codim 1; im w = z*conj(z); }";

    #[test]
    fn quadric_chain() {
        let c = segre_chain(&nf(Q, 6), 2).unwrap();
        assert!(c.v[1][1].is_zero());
        assert_eq!(c.v[1][0], TruncSeries::var(&c.vars, EXACT, 0));
        // w² = 2i t¹ t⁰
        let expect = TruncSeries::monomial(&c.vars, EXACT, Monomial::from_exps(&[1, 1]), GaussRational::from_parts(0, 1, 2, 1));
        assert_eq!(c.v[2][1], expect);
        assert!(c.v.iter().flatten().all(|s| s.constant_term().is_zero()));
    }

    #[test]
    fn relations_hold() {
        for src in [Q, "model \"c\" { ambient 3; codim 2; im w1 = z*conj(z); im w2 = z*conj(z)*(z + conj(z)); }"] {
            let f = nf(src, 6);
            let c = segre_chain(&f, 6).unwrap();
            assert!(chain_relations(&c, &f).unwrap().iter().all(|r| r.is_zero()));
            assert!(reflection_identity_check(&c).is_ok());
        }
    }

    #[test]
    fn corrupted_chain_fails() {
        let mut c = segre_chain(&nf(Q, 6), 2).unwrap();
        let bump = TruncSeries::var(&c.vars, EXACT, 0).pow(2);
        c.v[2][1] = c.v[2][1].try_add(&bump).unwrap();
        assert!(reflection_identity_check(&c).is_err());
    }
}
