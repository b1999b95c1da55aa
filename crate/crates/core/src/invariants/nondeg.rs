use std::collections::HashMap;

use serde::Serialize;

use super::{InvariantError, Result};
use crate::manifold::normal::solve_for_w;
use crate::manifold::{conj_swap, tangential_fields, CRFieldBasis, ManifoldModel};
use crate::series::{linalg, monomials_of_degree, Coeff, GaussRational, TruncSeries, EXACT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stabilization {
    /// The span was followed only up to `l_max`.
    Budget,
    /// The span over all orders is known and falls short.
    Absolute,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NondegReport {
    /// Degeneracy: the first `q` with `span_dims[q] = target`.
    pub l: Option<u32>,
    pub target: usize,
    pub span_dims: Vec<usize>,
    /// Set when `l` is `None`.
    pub stabilization: Option<Stabilization>,
    /// Span over all orders, when it could be determined.
    pub absolute_span: Option<usize>,
}

/// Holomorphic polynomial map `F: ℂᴺ → ℂᴺ'`, each component a series in the
/// source ring using only the `Z` variables, with `F(0) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MapJet {
    pub f: Vec<TruncSeries>,
}

impl MapJet {
    pub fn target_dim(&self) -> usize {
        self.f.len()
    }
}

/// `dim span{(L̄^α g)(0) : |α| ≤ q, g ∈ gens}` for `q = 0..=l_max`.
fn span_dims(fields: &CRFieldBasis, gens: &[Vec<TruncSeries>], target: usize, l_max: u32) -> Result<(Vec<usize>, Option<u32>)> {
    let n = fields.n;
    let mut rows: Vec<Vec<GaussRational>> = Vec::new();
    let mut cache: HashMap<Vec<u32>, Vec<Vec<TruncSeries>>> = HashMap::new();
    let mut dims = Vec::new();
    let mut l = None;
    for q in 0..=l_max {
        for mono in monomials_of_degree(n, q) {
            let alpha = mono.exps(n);
            let vals = if q == 0 {
                gens.to_vec()
            } else {
                let i = alpha.iter().position(|&e| e > 0).expect("q > 0");
                let mut prev = alpha.clone();
                prev[i] -= 1;
                cache[&prev]
                    .iter()
                    .map(|g| g.iter().map(|s| fields.lbar[i].apply(s)).collect::<std::result::Result<Vec<_>, _>>())
                    .collect::<std::result::Result<Vec<_>, _>>()?
            };
            rows.extend(vals.iter().map(|g| g.iter().map(|s| s.constant_term()).collect::<Vec<_>>()));
            cache.insert(alpha, vals);
        }
        let r = linalg::rank(&rows);
        dims.push(r);
        if r == target {
            l = Some(q);
            break;
        }
    }
    Ok((dims, l))
}

fn gradient(rho: &[TruncSeries], big_n: usize) -> Result<Vec<Vec<TruncSeries>>> {
    Ok(rho
        .iter()
        .map(|r| (0..big_n).map(|k| r.differentiate(k)).collect::<std::result::Result<Vec<_>, _>>())
        .collect::<std::result::Result<Vec<_>, _>>()?)
}

fn check_budget(model: &ManifoldModel, l_max: u32) -> Result<()> {
    if l_max >= model.kappa {
        return Err(InvariantError::Budget(format!(
            "l_max = {l_max} needs kappa ≥ {} (kappa = {})",
            l_max + 1,
            model.kappa
        )));
    }
    Ok(())
}

/// Degeneracy of the model at the base point from the gradient span
/// `span{L̄^α ρ_Z(0)}`.
pub fn finite_nondegeneracy(model: &ManifoldModel, l_max: u32) -> Result<NondegReport> {
    check_budget(model, l_max)?;
    let fields = tangential_fields(model)?;
    let big_n = model.big_n();
    let gens = gradient(&model.rho, big_n)?;
    let (dims, l) = span_dims(&fields, &gens, big_n, l_max)?;
    let absolute_span = if l.is_none() { absolute_span(model)? } else { None };
    let stabilization = match (l, absolute_span) {
        (Some(_), _) => None,
        (None, Some(_)) => Some(Stabilization::Absolute),
        (None, None) => Some(Stabilization::Budget),
    };
    Ok(NondegReport { l, target: big_n, span_dims: dims, stabilization, absolute_span })
}

/// On `Z = 0` the fields `L̄_j` are the derivations `∂/∂χ_j` along the graph
/// `τ = τ(χ)` of `ρ(0, χ, τ) = 0`, so the span over all orders is the span
/// of the Taylor coefficients of `ρ_Z(0, χ, τ(χ))`. This is computed when
/// `ρ(0, χ, τ)` is a polynomial affine in `τ` with constant linear part.
fn absolute_span(model: &ManifoldModel) -> Result<Option<usize>> {
    let (d, big_n) = (model.d, model.big_n());
    if model.rho.iter().any(|r| !r.is_exact()) {
        return Ok(None);
    }
    let zs: Vec<usize> = (0..big_n).collect();
    let on_segre: Vec<TruncSeries> = model.rho.iter().map(|r| r.set_zero(&zs)).collect();
    let mut a = vec![vec![GaussRational::zero(); d]; d];
    let mut c = Vec::with_capacity(d);
    for (j, r) in on_segre.iter().enumerate() {
        let mut rest = TruncSeries::zero(&model.vars, EXACT);
        for (m, v) in r.terms() {
            let tdeg = m.partial_degree(model.tau(0)..model.tau(0) + d);
            match tdeg {
                0 => rest.add_term(*m, v),
                1 if m.degree() == 1 => {
                    let k = (0..d).find(|&k| m.exp(model.tau(k)) == 1).expect("τ-linear");
                    a[j][k] = v.clone();
                }
                _ => return Ok(None),
            }
        }
        c.push(rest);
    }
    let Some(ainv) = linalg::invert(&a) else { return Ok(None) };
    let mut args: Vec<TruncSeries> = (0..2 * big_n).map(|v| TruncSeries::var(&model.vars, EXACT, v)).collect();
    for k in 0..d {
        let mut t = TruncSeries::zero(&model.vars, EXACT);
        for j in 0..d {
            t = t.try_sub(&c[j].scale(&ainv[k][j]))?;
        }
        args[model.tau(k)] = t;
    }
    for v in 0..big_n {
        args[v] = TruncSeries::zero(&model.vars, EXACT);
    }
    let mut rows: Vec<Vec<GaussRational>> = Vec::new();
    for g in gradient(&model.rho, big_n)? {
        let comps: Vec<TruncSeries> = g.iter().map(|s| s.compose(&args)).collect::<std::result::Result<_, _>>()?;
        let mut monos: Vec<_> = comps.iter().flat_map(|s| s.terms().map(|(m, _)| *m)).collect();
        monos.sort();
        monos.dedup();
        for m in monos {
            rows.push(comps.iter().map(|s| s.coeff(&m)).collect());
        }
    }
    Ok(Some(linalg::rank(&rows)))
}

/// `ρ'(F(Z), F̄(ζ))` as series on the source ring.
fn pull_back(target: &ManifoldModel, jet: &MapJet, source_big_n: usize) -> Result<Vec<TruncSeries>> {
    let mut args: Vec<TruncSeries> = jet.f.clone();
    args.extend(jet.f.iter().map(|s| conj_swap(s, source_big_n)));
    Ok(target.rho.iter().map(|r| r.compose(&args)).collect::<std::result::Result<_, _>>()?)
}

/// Largest `r` such that `ρ'(F, F̄)` vanishes on the complexification of `M`
/// through degree `r`, capped at `cap`.
pub fn contact_order(source: &ManifoldModel, target: &ManifoldModel, jet: &MapJet, cap: u32) -> Result<u32> {
    check_jet(source, target, jet)?;
    let q = solve_for_w(source, cap + 1)?;
    let mut args: Vec<TruncSeries> = (0..2 * source.big_n()).map(|v| TruncSeries::var(&source.vars, cap + 1, v)).collect();
    for j in 0..source.d {
        args[source.w(j)] = q[j].clone();
    }
    let mut found = cap;
    for h in pull_back(target, jet, source.big_n())? {
        let on_m = h.truncate(cap + 1).compose(&args)?;
        if let Some(v) = on_m.valuation() {
            found = found.min(v.saturating_sub(1));
        }
    }
    Ok(found)
}

fn check_jet(source: &ManifoldModel, target: &ManifoldModel, jet: &MapJet) -> Result<()> {
    if jet.f.len() != target.big_n() {
        return Err(InvariantError::Unsupported(format!(
            "jet has {} components, target lives in ℂ^{}",
            jet.f.len(),
            target.big_n()
        )));
    }
    for s in &jet.f {
        if s.vars() != &source.vars || !s.constant_term().is_zero() {
            return Err(InvariantError::Unsupported("jet must live on the source ring and fix the origin".into()));
        }
        if s.terms().any(|(m, _)| m.partial_degree(source.big_n()..2 * source.big_n()) > 0) {
            return Err(InvariantError::Unsupported("jet components must be holomorphic".into()));
        }
    }
    Ok(())
}

/// Degeneracy of a map jet from the span `{L̄^α ρ'_{Z'}(F, F̄)(0)}`.
pub fn jet_nondegeneracy(source: &ManifoldModel, target: &ManifoldModel, jet: &MapJet, l_max: u32) -> Result<NondegReport> {
    check_budget(source, l_max)?;
    let found = contact_order(source, target, jet, l_max)?;
    if found < l_max {
        return Err(InvariantError::JetNotCR { required: l_max, found });
    }
    let fields = tangential_fields(source)?;
    let big_n = source.big_n();
    let mut args: Vec<TruncSeries> = jet.f.clone();
    args.extend(jet.f.iter().map(|s| conj_swap(s, big_n)));
    let gens: Vec<Vec<TruncSeries>> = gradient(&target.rho, target.big_n())?
        .into_iter()
        .map(|g| g.iter().map(|s| s.compose(&args)).collect::<std::result::Result<Vec<_>, _>>())
        .collect::<std::result::Result<_, _>>()?;
    let (dims, l) = span_dims(&fields, &gens, target.big_n(), l_max)?;
    Ok(NondegReport {
        l,
        target: target.big_n(),
        span_dims: dims,
        stabilization: if l.is_none() { Some(Stabilization::Budget) } else { None },
        absolute_span: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::parse_model;

    const Q: &str = "model \"q\" { ambient 2; codim 1; im w = z*conj(z); }";
    const E: &str = "model \"e\" { ambient 2; codim 1; im w = (z*conj(z))^2; }";

    fn g(re: i64, im: i64) -> GaussRational {
        GaussRational::from_parts(re, 1, im, 1)
    }

    #[test]
    fn quadric_is_one_nondegenerate() {
        let r = finite_nondegeneracy(&parse_model(Q, 6).unwrap(), 5).unwrap();
        assert_eq!((r.l, r.span_dims.clone()), (Some(1), vec![1, 2]));
    }

    #[test]
    fn quartic_is_absolutely_degenerate() {
        let m = parse_model(E, 10).unwrap();
        let r = finite_nondegeneracy(&m, 9).unwrap();
        assert_eq!(r.l, None);
        assert_eq!(r.span_dims, vec![1; 10]);
        assert_eq!((r.stabilization, r.absolute_span), (Some(Stabilization::Absolute), Some(1)));
        let t = m.translate(&[g(1, 0), g(0, 1)]).unwrap();
        assert_eq!(finite_nondegeneracy(&t, 9).unwrap().l, Some(1));
    }

    #[test]
    fn identity_jet_matches_model() {
        let m = parse_model(Q, 6).unwrap();
        let id = MapJet { f: (0..2).map(|v| TruncSeries::var(&m.vars, EXACT, v)).collect() };
        assert_eq!(jet_nondegeneracy(&m, &m, &id, 3).unwrap().l, Some(1));
    }

    #[test]
    fn squaring_map_into_quadric() {
        let p = [g(1, 0), g(0, 1)];
        let m = parse_model(E, 8).unwrap().translate(&p).unwrap();
        let t = parse_model(Q, 8).unwrap().translate(&p).unwrap();
        let z = TruncSeries::var(&m.vars, EXACT, 0);
        // (z + 1)² − 1
        let f0 = z.scale(&g(2, 0)).try_add(&z.pow(2)).unwrap();
        let jet = MapJet { f: vec![f0, TruncSeries::var(&m.vars, EXACT, 1)] };
        assert!(contact_order(&m, &t, &jet, 6).unwrap() >= 6);
        assert_eq!(jet_nondegeneracy(&m, &t, &jet, 4).unwrap().l, Some(1));
    }

    #[test]
    fn wrong_jet_rejected() {
        let m = parse_model(Q, 6).unwrap();
        let z = TruncSeries::var(&m.vars, EXACT, 0);
        let w = TruncSeries::var(&m.vars, EXACT, 1);
        let jet = MapJet { f: vec![z.scale(&g(2, 0)), w] };
        assert!(matches!(jet_nondegeneracy(&m, &m, &jet, 2), Err(InvariantError::JetNotCR { .. })));
    }

    #[test]
    fn linear_sphere_embedding_never_spans() {
        let m = parse_model(Q, 6).unwrap();
        let t = parse_model("model \"s5\" { ambient 3; codim 1; im w = z1*conj(z1) + z2*conj(z2); }", 6).unwrap();
        let zero = TruncSeries::zero(&m.vars, EXACT);
        let jet = MapJet {
            f: vec![TruncSeries::var(&m.vars, EXACT, 0), zero, TruncSeries::var(&m.vars, EXACT, 1)],
        };
        let r = jet_nondegeneracy(&m, &t, &jet, 5).unwrap();
        assert_eq!(r.l, None);
        assert_eq!(r.span_dims, vec![1, 2, 2, 2, 2, 2]);
    }
}
