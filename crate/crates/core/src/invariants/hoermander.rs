use serde::Serialize;

use super::{InvariantError, Result};
use crate::manifold::{tangential_fields, ManifoldModel, VectorField};
use crate::series::{linalg, GaussRational};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HoermanderData {
    /// `μ_1 ≤ … ≤ μ_d`, as far as the budget reaches.
    pub mu: Vec<u32>,
    pub nu: Option<u32>,
    /// `dims[μ − 1] = dim g_μ(0)`.
    pub dims: Vec<usize>,
    pub finite_type: bool,
    /// Every bracket computed annihilates `ρ` to its truncation order.
    pub tangency_verified: bool,
}

/// Bracket filtration `g_1 = span{L_j, L̄_j}`, `g_{μ+1} = g_μ + [g_1, g_μ]`
/// of the complexified tangent bundle at the base point.
pub fn hoermander_numbers(model: &ManifoldModel, max_len: u32) -> Result<HoermanderData> {
    if max_len == 0 || max_len >= model.kappa {
        return Err(InvariantError::Budget(format!(
            "bracket length {max_len} needs 1 ≤ length ≤ kappa − 1 = {}",
            model.kappa.saturating_sub(1)
        )));
    }
    let f = tangential_fields(model)?;
    let (n, d) = (model.n, model.d);
    let generators: Vec<VectorField> = f.l.iter().chain(&f.lbar).cloned().collect();
    let mut values: Vec<Vec<GaussRational>> = generators.iter().map(|x| x.at_origin()).collect();
    let mut dims = vec![linalg::rank(&values)];
    let mut layer = generators.clone();
    let mut tangent = true;
    while dims.len() < max_len as usize && *dims.last().unwrap() < 2 * n + d {
        let mut next = Vec::new();
        for x in &generators {
            for y in &layer {
                let br = x.bracket(y)?;
                if br.coeffs.iter().all(|c| c.is_zero()) {
                    continue;
                }
                for r in &model.rho {
                    tangent &= br.apply(r)?.is_zero();
                }
                values.push(br.at_origin());
                next.push(br);
            }
        }
        layer = prune(next);
        dims.push(linalg::rank(&values));
    }
    let mut mu = Vec::new();
    for j in 1..=d {
        if let Some(p) = dims.iter().position(|&k| k >= 2 * n + j) {
            mu.push(p as u32 + 1);
        }
    }
    let finite_type = mu.len() == d;
    Ok(HoermanderData {
        nu: if finite_type { mu.last().copied() } else { None },
        mu,
        dims,
        finite_type,
        tangency_verified: tangent,
    })
}

fn prune(fields: Vec<VectorField>) -> Vec<VectorField> {
    let mut out: Vec<VectorField> = Vec::new();
    for f in fields {
        if !out.contains(&f) && !out.iter().any(|g| is_negation(g, &f)) {
            out.push(f);
        }
    }
    out
}

fn is_negation(a: &VectorField, b: &VectorField) -> bool {
    a.coeffs.iter().zip(&b.coeffs).all(|(x, y)| x.try_add(y).map(|s| s.is_zero()).unwrap_or(false))
}
