use std::collections::HashMap;

use thiserror::Error;

use super::fields::VectorField;
use super::model::combinations;
use crate::series::{
    linalg, monomials_up_to, var_names, GaussRational, Matrix, Monomial, SeriesError, TruncSeries, EXACT,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StraightenError {
    #[error("fields are linearly dependent at the origin")]
    Dependent,
    #[error("[L{i}, L{j}] has a term of degree {degree} ≤ k")]
    Commutator { i: usize, j: usize, degree: u32 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Output of [`straighten_approx`].
#[derive(Clone, Debug)]
pub struct Straightened {
    /// Coordinates playing the role of `z` (the rest are `w`).
    pub zcols: Vec<usize>,
    pub wcols: Vec<usize>,
    /// The fields rewritten as `∂/∂z_i + Σ a_i^l ∂/∂w_l`.
    pub normalized: Vec<VectorField>,
    /// Old `w` as a function of `(z, w̃)`: the map `(z, w̃) ↦ (z, χ(z, w̃))`.
    pub chi: Vec<TruncSeries>,
    /// `w̃` as a function of the old `(z, w)`.
    pub new_w: Vec<TruncSeries>,
    /// The normalized fields in the coordinates `(z, w̃)`.
    pub fields: Vec<VectorField>,
    /// `L_i χ − ∂χ/∂z_i` pulled back to `(z, w̃)`, per field and `w`-slot.
    pub residual: Vec<Vec<TruncSeries>>,
    /// Largest `r` with residual `= o(|Z̃|^r)`; `None` if it vanishes to
    /// the working order.
    pub residual_order: Option<u32>,
    pub order: u32,
}

/// Approximate flow box for `n` holomorphic fields commuting up to
/// `o(|Z|^k)`.
pub fn straighten_approx(fields: &[VectorField], k: u32) -> Result<Straightened, StraightenError> {
    let n = fields.len();
    if n == 0 {
        return Err(SeriesError::Precondition("no fields".into()).into());
    }
    let m = fields[0].coeffs.len();
    let vars = fields[0].coeffs[0].vars().clone();
    let input_order = fields.iter().map(|f| f.min_order()).min().unwrap_or(EXACT);
    let work = input_order.min(k + 4);

    // Pick z-columns and normalize.
    let at0: Vec<Vec<GaussRational>> = fields.iter().map(|f| f.at_origin()).collect();
    if linalg::rank(&at0) < n {
        return Err(StraightenError::Dependent);
    }
    let zcols = combinations(m, n)
        .into_iter()
        .find(|cols| {
            let block: Vec<Vec<GaussRational>> = at0.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
            linalg::rank(&block) == n
        })
        .expect("rank n");
    let wcols: Vec<usize> = (0..m).filter(|c| !zcols.contains(c)).collect();
    let a: Matrix<GaussRational> = fields.iter().map(|f| zcols.iter().map(|&c| f.coeffs[c].clone()).collect()).collect();
    let ainv = constant_or_series_inverse(&a, work)?;
    let mut normalized = Vec::with_capacity(n);
    for row in &ainv {
        let mut coeffs = Vec::with_capacity(m);
        for c in 0..m {
            let mut acc = TruncSeries::zero(&vars, EXACT);
            for (r, f) in row.iter().zip(fields) {
                acc = acc.try_add(&r.try_mul(&f.coeffs[c])?)?;
            }
            coeffs.push(acc);
        }
        for (i, &c) in zcols.iter().enumerate() {
            coeffs[c] = if i == normalized.len() { TruncSeries::one(&vars, EXACT) } else { TruncSeries::zero(&vars, EXACT) };
        }
        normalized.push(VectorField { coeffs });
    }

    for i in 0..n {
        for j in i + 1..n {
            let br = normalized[i].bracket(&normalized[j])?;
            let low = br.coeffs.iter().filter_map(|c| c.valuation()).min();
            if let Some(v) = low {
                if v <= k {
                    return Err(StraightenError::Commutator { i: i + 1, j: j + 1, degree: v });
                }
            }
        }
    }

    // χ^l = Σ_{|α| ≤ k+2} z^α/α! (L^α w^l)(0, w).
    let mut cache: HashMap<Vec<u32>, Vec<TruncSeries>> = HashMap::new();
    let base: Vec<TruncSeries> = wcols.iter().map(|&c| TruncSeries::var(&vars, EXACT, c)).collect();
    cache.insert(vec![0; n], base);
    let mut chi: Vec<TruncSeries> = vec![TruncSeries::zero(&vars, EXACT); wcols.len()];
    for mono in monomials_up_to(n, k + 2) {
        let alpha = mono.exps(n);
        if alpha.iter().any(|&e| e > 0) {
            let i = alpha.iter().position(|&e| e > 0).expect("nonzero");
            let mut prev = alpha.clone();
            prev[i] -= 1;
            let inner = cache.get(&prev).expect("graded order").clone();
            let next = inner.iter().map(|s| normalized[i].apply(s)).collect::<Result<Vec<_>, _>>()?;
            cache.insert(alpha.clone(), next);
        }
        let mut zexp = vec![0u32; m];
        let mut fact = num_bigint::BigInt::from(1);
        for (i, &e) in alpha.iter().enumerate() {
            zexp[zcols[i]] = e;
            for t in 1..=e {
                fact *= t;
            }
        }
        let zmono = TruncSeries::monomial(&vars, EXACT, Monomial::from_exps(&zexp), GaussRational::new(num_rational::BigRational::new(1.into(), fact), num_rational::BigRational::from_integer(0.into())));
        for (l, s) in cache[&alpha].iter().enumerate() {
            let at_z0 = s.set_zero(&zcols);
            chi[l] = chi[l].try_add(&zmono.try_mul(&at_z0)?)?;
        }
    }

    // Residual L_i∘Φ − DΦ(∂/∂z_i), in the coordinates (z, w̃).
    let mut args: Vec<TruncSeries> = (0..m).map(|v| TruncSeries::var(&vars, EXACT, v)).collect();
    for (l, &c) in wcols.iter().enumerate() {
        args[c] = chi[l].clone();
    }
    let mut residual = Vec::with_capacity(n);
    for (i, f) in normalized.iter().enumerate() {
        let mut row = Vec::with_capacity(wcols.len());
        for (l, &c) in wcols.iter().enumerate() {
            let pulled = f.coeffs[c].compose(&args)?;
            row.push(pulled.try_sub(&chi[l].differentiate(zcols[i])?)?);
        }
        residual.push(row);
    }
    let residual_order = residual
        .iter()
        .flatten()
        .filter_map(|s| s.valuation())
        .min()
        .map(|v| v.saturating_sub(1));

    let jac: Matrix<GaussRational> = chi
        .iter()
        .map(|s| wcols.iter().map(|&c| s.differentiate(c)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let jinv = constant_or_series_inverse(&jac, work)?;
    let mut new_fields = Vec::with_capacity(n);
    for (i, row) in residual.iter().enumerate() {
        let corr = linalg::mat_vec(&jinv, row)?;
        let mut coeffs = vec![TruncSeries::zero(&vars, EXACT); m];
        coeffs[zcols[i]] = TruncSeries::one(&vars, EXACT);
        for (l, &c) in wcols.iter().enumerate() {
            coeffs[c] = corr[l].truncate(work);
        }
        new_fields.push(VectorField { coeffs });
    }

    let new_w = invert_chi(&chi, &vars, &wcols, work.min(chi.iter().map(|s| s.order()).min().unwrap_or(EXACT)))?;
    Ok(Straightened {
        zcols,
        wcols,
        normalized,
        chi,
        new_w,
        fields: new_fields,
        residual,
        residual_order,
        order: work,
    })
}

fn constant_or_series_inverse(a: &Matrix<GaussRational>, order: u32) -> Result<Matrix<GaussRational>, SeriesError> {
    let constant = a.iter().flatten().all(|e| e.is_exact() && e.max_degree().map_or(true, |d| d == 0));
    if constant {
        let vars = a[0][0].vars().clone();
        let inv = linalg::invert(&linalg::constant_part(a)).ok_or(SeriesError::SingularJacobian)?;
        Ok(inv
            .into_iter()
            .map(|row| row.into_iter().map(|x| TruncSeries::constant(&vars, EXACT, x)).collect())
            .collect())
    } else {
        linalg::invert_series(a, order)
    }
}

/// Solve `χ(z, u) = w` for `u`.
fn invert_chi(chi: &[TruncSeries], vars: &crate::series::Vars, wcols: &[usize], order: u32) -> Result<Vec<TruncSeries>, SeriesError> {
    let m = vars.len();
    let mut names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    names.extend((0..wcols.len()).map(|l| format!("u{}", l + 1)));
    let ext = var_names(&names);
    let mut map: Vec<usize> = (0..m).collect();
    for (l, &c) in wcols.iter().enumerate() {
        map[c] = m + l;
    }
    let f: Vec<TruncSeries> = chi
        .iter()
        .zip(wcols)
        .map(|(s, &c)| s.embed(&ext, &map).try_sub(&TruncSeries::var(&ext, EXACT, c)))
        .collect::<Result<_, _>>()?;
    let unknowns: Vec<usize> = (m..m + wcols.len()).collect();
    let sol = linalg::solve_implicit(&f, &unknowns, order)?;
    // The solution does not involve the `u` variables.
    let back: Vec<usize> = (0..m + wcols.len()).map(|v| v.min(m - 1)).collect();
    Ok(sol.iter().map(|s| s.embed(vars, &back)).collect())
}
