use std::collections::HashMap;

use serde::Serialize;

use super::{InvariantError, Result};
use crate::manifold::{tangential_fields, ManifoldModel};
use crate::series::{monomials_of_degree, Coeff, GaussRational, TruncSeries};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Dim1Report {
    pub nondegenerate: bool,
    pub l: Option<u32>,
    /// `degenerate[k − 1]`: some direction pair `(u, v)` has all brackets
    /// of length `≤ k + 1` tangent to `Tᶜ`.
    pub degenerate: Vec<bool>,
}

/// Binary form `Σ a_e u₁^e u₂^{D−e}`, stored as `a_0..a_D`.
type Form = Vec<GaussRational>;

fn form_mul(a: &Form, b: &Form) -> Form {
    let mut out = vec![GaussRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

fn form_sub(a: &Form, b: &Form) -> Form {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

/// Univariate polynomial, ascending coefficients, no trailing zeros.
fn trim(mut p: Vec<GaussRational>) -> Vec<GaussRational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_rem(a: &[GaussRational], b: &[GaussRational]) -> Vec<GaussRational> {
    let mut r = a.to_vec();
    let lead = b.last().expect("nonzero divisor").inv().expect("nonzero lead");
    while r.len() >= b.len() {
        let q = r.last().unwrap().mul(&lead);
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].sub(&q.mul(c));
        }
        r = trim(r);
    }
    r
}

fn poly_gcd(mut a: Vec<GaussRational>, mut b: Vec<GaussRational>) -> Vec<GaussRational> {
    a = trim(a);
    b = trim(b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Do the forms share a zero on `ℙ¹`?
fn common_root(forms: &[Form]) -> bool {
    if forms.iter().all(|f| f[0].is_zero()) {
        return true;
    }
    // On u = (1, t) the form becomes Σ a_e t^{D−e}.
    let mut g: Vec<GaussRational> = Vec::new();
    for f in forms {
        let p: Vec<GaussRational> = f.iter().rev().cloned().collect();
        g = poly_gcd(g, p);
        if g.len() == 1 {
            return false;
        }
    }
    g.len() != 1
}

/// Nondegeneracy in dimension 1 for a target of CR dimension 2: for every
/// direction `u` of `L_1(0)` and `v` of `L(0)`, some `(L̄_u^k b_v)(0)`,
/// `1 ≤ k ≤ l`, is nonzero.
pub fn nondeg_in_dimension_1(model: &ManifoldModel, l_max: u32) -> Result<Dim1Report> {
    if model.n != 2 {
        return Err(InvariantError::Unsupported(format!(
            "nondegeneracy in dimension 1 is implemented for CR dimension 2 only (got {})",
            model.n
        )));
    }
    if l_max == 0 || l_max >= model.kappa {
        return Err(InvariantError::Budget(format!("l_max = {l_max} needs 1 ≤ l_max < kappa = {}", model.kappa)));
    }
    let f = tangential_fields(model)?;
    let d = model.d;
    // cache[β] = L̄^β b_j^c, indexed [j][c].
    let mut cache: HashMap<Vec<u32>, Vec<Vec<TruncSeries>>> = HashMap::new();
    cache.insert(vec![0, 0], f.b.clone());
    let mut rows: Vec<[Form; 2]> = Vec::new();
    let mut degenerate = Vec::new();
    let mut l = None;
    for k in 1..=l_max {
        let mut level: Vec<[Form; 2]> = (0..d)
            .map(|_| [vec![GaussRational::zero(); k as usize + 1], vec![GaussRational::zero(); k as usize + 1]])
            .collect();
        for mono in monomials_of_degree(2, k) {
            let beta = mono.exps(2);
            let i = if beta[0] > 0 { 0 } else { 1 };
            let mut prev = beta.clone();
            prev[i] -= 1;
            let vals: Vec<Vec<TruncSeries>> = cache[&prev]
                .iter()
                .map(|row| row.iter().map(|s| f.lbar[i].apply(s)).collect::<std::result::Result<Vec<_>, _>>())
                .collect::<std::result::Result<_, _>>()?;
            let mult = binomial(k, beta[0]);
            for (j, row) in vals.iter().enumerate() {
                for (c, s) in row.iter().enumerate() {
                    let v = s.constant_term().mul(&GaussRational::real(mult));
                    level[c][j][beta[0] as usize] = level[c][j][beta[0] as usize].add(&v);
                }
            }
            cache.insert(beta, vals);
        }
        rows.extend(level);
        let mut minors = Vec::new();
        for a in 0..rows.len() {
            for b in a + 1..rows.len() {
                let (ra, rb) = (&rows[a], &rows[b]);
                minors.push(form_sub(&form_mul(&ra[0], &rb[1]), &form_mul(&ra[1], &rb[0])));
            }
        }
        let deg = minors.is_empty() || common_root(&minors);
        degenerate.push(deg);
        if !deg {
            l = Some(k);
            break;
        }
    }
    Ok(Dim1Report { nondegenerate: l.is_some(), l, degenerate })
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::parse_model;

    fn q(n: i64) -> GaussRational {
        GaussRational::real(n)
    }

    #[test]
    fn gcd_over_gaussian_rationals() {
        // (t − i)(t + 2) and (t − i)(t − 3)
        let i = GaussRational::from_parts(0, 1, 1, 1);
        let a = vec![i.mul(&q(-2)), q(2).sub(&i), q(1)];
        let b = vec![i.mul(&q(3)), q(-3).sub(&i), q(1)];
        let g = poly_gcd(a, b);
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].mul(&g[1].inv().unwrap()), i.neg());
        assert!(common_root(&[vec![q(0), q(1)], vec![q(0), q(2)]]));
        assert!(!common_root(&[vec![q(1), q(0)], vec![q(0), q(1)]]));
    }

    #[test]
    fn example_hypersurface_is_three_nondegenerate() {
        let src = "model \"x\" { ambient 3; codim 1; \
                   im w = z1*conj(z1) + z2*conj(z2) + im(z1^2*conj(z1) + (z1 + z2)^3*(conj(z1) + conj(z2))); }";
        let r = nondeg_in_dimension_1(&parse_model(src, 6).unwrap(), 5).unwrap();
        assert_eq!((r.nondegenerate, r.l), (true, Some(3)));
        assert_eq!(r.degenerate, vec![true, true, false]);
    }

    #[test]
    fn quadric_and_hyperplane_degenerate() {
        let qd = parse_model("model \"q\" { ambient 3; codim 1; im w = z1*conj(z1) + z2*conj(z2); }", 6).unwrap();
        assert!(!nondeg_in_dimension_1(&qd, 5).unwrap().nondegenerate);
        let h = parse_model("model \"h\" { ambient 3; codim 1; im w = 0; }", 6).unwrap();
        assert!(!nondeg_in_dimension_1(&h, 5).unwrap().nondegenerate);
    }

    #[test]
    fn other_dimensions_refused() {
        let m = parse_model("model \"q\" { ambient 2; codim 1; im w = z*conj(z); }", 6).unwrap();
        assert!(matches!(nondeg_in_dimension_1(&m, 3), Err(InvariantError::Unsupported(_))));
    }
}
