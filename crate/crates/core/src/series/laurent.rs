//! Laurent expansions in a distinguished variable `λ` after the singular
//! substitution `t̃ = t / λ^m`, and their constant terms.

use std::collections::BTreeMap;

use super::coeff::Coeff;
use super::monomial::Monomial;
use super::trunc::{TruncSeries, Vars, EXACT};
use super::{Result, SeriesError};

/// `Σ_ν c_ν λ^ν` with coefficients in the remaining variables.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<C: Coeff> {
    pub vars: Vars,
    pub terms: BTreeMap<i64, TruncSeries<C>>,
    pub min_exp: i64,
    pub max_exp: i64,
}

fn tail_vars<C: Coeff>(p: &TruncSeries<C>) -> Result<Vars> {
    if p.nvars() == 0 {
        return Err(SeriesError::Precondition("series has no λ variable".into()));
    }
    Ok(p.vars()[1..].iter().cloned().collect::<Vec<_>>().into())
}

fn drop_first(m: &Monomial, nvars: usize) -> Monomial {
    let e = m.exps(nvars);
    Monomial::from_exps(&e[1..])
}

impl<C: Coeff> LaurentSeries<C> {
    /// Expand `P(λ, t/λ^m)` where variable 0 of `P` is `λ` and the rest are
    /// `t̃`. Every coefficient series gets the order `order` passed in.
    pub fn expand_weighted(p: &TruncSeries<C>, m: u32, order: u32) -> Result<Self> {
        let vars = tail_vars(p)?;
        let n = p.nvars();
        let mut terms: BTreeMap<i64, TruncSeries<C>> = BTreeMap::new();
        for (mono, c) in p.terms() {
            let nu = mono.exp(0) as i64;
            let a = drop_first(mono, n);
            let e = nu - m as i64 * a.degree() as i64;
            terms
                .entry(e)
                .or_insert_with(|| TruncSeries::zero(&vars, order))
                .add_term(a, c);
        }
        terms.retain(|_, s| !s.is_zero());
        let min_exp = terms.keys().next().copied().unwrap_or(0);
        let max_exp = terms.keys().next_back().copied().unwrap_or(0);
        Ok(Self {
            vars,
            terms,
            min_exp,
            max_exp,
        })
    }

    pub fn coefficient(&self, e: i64) -> Option<&TruncSeries<C>> {
        self.terms.get(&e)
    }
}

/// Constant term in `λ` of `P(λ, t/λ^m)`: the sum of `P_{ν,α} t^α` over
/// `ν = m|α|`. Variable 0 of `P` is `λ`.
pub fn laurent_c0<C: Coeff>(p: &TruncSeries<C>, m: u32) -> Result<TruncSeries<C>> {
    if m == 0 {
        return Err(SeriesError::Precondition("weight m must be positive".into()));
    }
    let vars = tail_vars(p)?;
    let order = if p.is_exact() { EXACT } else { p.order() / (m + 1) };
    let n = p.nvars();
    let mut out = TruncSeries::zero(&vars, order);
    for (mono, c) in p.terms() {
        let a = drop_first(mono, n);
        if mono.exp(0) == m * a.degree() {
            out.add_term(a, c);
        }
    }
    Ok(out)
}

/// Constant term in `λ` of `R(λ, t/δ(λ))` with `δ = λ^g·u`, `u(0) ≠ 0`,
/// together with the certificate that its vanishing order exceeds
/// `h/(g+1)`. `R` must have no terms of degree `≤ h`.
pub fn laurent_c0_order_bound<C: Coeff>(
    r: &TruncSeries<C>,
    h: u32,
    delta: &TruncSeries<C>,
) -> Result<(TruncSeries<C>, bool)> {
    if delta.nvars() != 1 {
        return Err(SeriesError::Precondition("δ must be univariate".into()));
    }
    if let Some(v) = r.valuation() {
        if v <= h {
            return Err(SeriesError::Precondition(format!(
                "R has a term of degree {v} ≤ h = {h}"
            )));
        }
    }
    let g = delta
        .valuation()
        .ok_or_else(|| SeriesError::Precondition("δ vanishes to its truncation order".into()))?;
    let vars = tail_vars(r)?;
    let n = r.nvars();

    // u = δ/λ^g as a series in λ.
    let lam = delta.vars().clone();
    let u_order = if delta.is_exact() { EXACT } else { delta.order() - g };
    let mut u = TruncSeries::zero(&lam, u_order);
    for (mono, c) in delta.terms() {
        u.add_term(Monomial::var(0, mono.degree() - g), c);
    }

    let mut order = if r.is_exact() { EXACT } else { r.order() / (g + 1) };
    if !delta.is_exact() && g > 0 {
        order = order.min(u_order / g);
    }
    let max_alpha = r.max_degree().unwrap_or(0).min(order);
    let inv_order = (g * max_alpha).max(1);
    let u_inv = u.truncate(u_order.min(inv_order)).recip_to(inv_order.min(u_order))?;
    let mut inv_powers = vec![TruncSeries::one(&lam, u_inv.order())];

    let mut out = TruncSeries::zero(&vars, order);
    for (mono, c) in r.terms() {
        let a = drop_first(mono, n);
        let k = a.degree();
        if k > order {
            continue;
        }
        let nu = mono.exp(0);
        if nu > g * k {
            continue;
        }
        while inv_powers.len() <= k as usize {
            let next = inv_powers.last().unwrap().try_mul(&u_inv)?;
            inv_powers.push(next);
        }
        let coef = inv_powers[k as usize].coeff(&Monomial::var(0, g * k - nu));
        out.add_term(a, &c.mul(&coef));
    }
    let bound = h as f64 / (g + 1) as f64;
    let certified = out.terms().all(|(m, _)| m.degree() as f64 > bound) && (!out.is_zero() || order as f64 > bound);
    Ok((out, certified))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{var_names, GaussRational};

    type S = TruncSeries<GaussRational>;

    fn q(n: i64) -> GaussRational {
        GaussRational::real(n)
    }

    #[test]
    fn c0_examples() {
        let v = var_names(&["l", "t"]);
        let l = S::var(&v, 8, 0);
        let t = S::var(&v, 8, 1);
        let c = laurent_c0(&(&l * &t), 1).unwrap();
        assert_eq!(c.coeff_of(&[1]), q(1));
        assert_eq!(c.num_terms(), 1);
        assert!(laurent_c0(&t.pow(2), 1).unwrap().is_zero());
        let p = &(&l.pow(2) * &t) + &(&l * &t.pow(2));
        assert!(laurent_c0(&p, 1).unwrap().is_zero());
    }

    #[test]
    fn order_bound_examples() {
        let v = var_names(&["l", "t"]);
        let lv = var_names(&["l"]);
        let h = 3;
        let t = S::var(&v, 12, 1);
        let l = S::var(&v, 12, 0);
        let g2 = S::var(&lv, 12, 0).pow(2);
        let (c, ok) = laurent_c0_order_bound(&t.pow(h + 1), h, &g2).unwrap();
        assert!(c.is_zero() && ok);
        let (c, ok) = laurent_c0_order_bound(&l.pow(h + 1), h, &g2).unwrap();
        assert!(c.is_zero() && ok);
        assert!(laurent_c0_order_bound(&t.pow(2), h, &g2).is_err());
    }

    #[test]
    fn expansion_exponents() {
        let v = var_names(&["l", "t"]);
        let l = S::var(&v, 6, 0);
        let t = S::var(&v, 6, 1);
        let e = LaurentSeries::expand_weighted(&(&l + &t.pow(2)), 2, 6).unwrap();
        assert_eq!(e.min_exp, -4);
        assert_eq!(e.max_exp, 1);
        assert_eq!(e.coefficient(1).unwrap().constant_term(), q(1));
    }
}
