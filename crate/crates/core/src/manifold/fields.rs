use super::model::{conj_swap, ManifoldModel};
use super::ModelError;
use crate::series::{linalg, Coeff, GaussRational, Result as SResult, TruncSeries, EXACT};

/// A vector field on a series ring, one coefficient per variable.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField<C: Coeff = GaussRational> {
    pub coeffs: Vec<TruncSeries<C>>,
}

impl<C: Coeff> VectorField<C> {
    pub fn apply(&self, f: &TruncSeries<C>) -> SResult<TruncSeries<C>> {
        let mut acc: Option<TruncSeries<C>> = None;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() && c.is_exact() {
                continue;
            }
            let t = c.try_mul(&f.differentiate(k)?)?;
            acc = Some(match acc {
                None => t,
                Some(a) => a.try_add(&t)?,
            });
        }
        Ok(acc.unwrap_or_else(|| {
            let order = if f.is_exact() { EXACT } else { f.order().saturating_sub(1) };
            TruncSeries::zero(f.vars(), order)
        }))
    }

    /// Lie bracket `[self, other]`.
    pub fn bracket(&self, other: &Self) -> SResult<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.apply(b)?.try_sub(&other.apply(a)?))
            .collect::<SResult<_>>()?;
        Ok(Self { coeffs })
    }

    pub fn at_origin(&self) -> Vec<C> {
        self.coeffs.iter().map(|c| c.constant_term()).collect()
    }

    pub fn min_order(&self) -> u32 {
        self.coeffs.iter().map(|c| c.order()).min().unwrap_or(EXACT)
    }
}

/// The tangential fields `L_j = ∂/∂z_j + Σ_i b_{ji} ∂/∂w_i` and their
/// conjugates `L̄_j = ∂/∂χ_j + Σ_i b̄_{ji} ∂/∂τ_i` on the complexification.
#[derive(Clone, Debug)]
pub struct CRFieldBasis<C: Coeff = GaussRational> {
    pub n: usize,
    pub d: usize,
    /// `b[j][i]`, `n × d`.
    pub b: Vec<Vec<TruncSeries<C>>>,
    pub bbar: Vec<Vec<TruncSeries<C>>>,
    pub l: Vec<VectorField<C>>,
    pub lbar: Vec<VectorField<C>>,
}

impl<C: Coeff> CRFieldBasis<C> {
    /// `L̄^α f` with `α` an ordered list of field indices (applied right to
    /// left, so the last index acts first).
    pub fn apply_lbar_word(&self, word: &[usize], f: &TruncSeries<C>) -> SResult<TruncSeries<C>> {
        let mut acc = f.clone();
        for &j in word.iter().rev() {
            acc = self.lbar[j].apply(&acc)?;
        }
        Ok(acc)
    }

    pub fn apply_l_word(&self, word: &[usize], f: &TruncSeries<C>) -> SResult<TruncSeries<C>> {
        let mut acc = f.clone();
        for &j in word.iter().rev() {
            acc = self.l[j].apply(&acc)?;
        }
        Ok(acc)
    }
}

/// Tangential fields from defining functions in the standard variable
/// layout. The `w`-block `∂ρ/∂w` must be invertible at the origin.
pub fn tangential_fields_of<C: Coeff>(rho: &[TruncSeries<C>], n: usize, d: usize, order: u32) -> SResult<CRFieldBasis<C>> {
    let big_n = n + d;
    let vars = rho[0].vars().clone();
    let rho_w: linalg::Matrix<C> = rho
        .iter()
        .map(|r| (0..d).map(|i| r.differentiate(n + i)).collect::<SResult<_>>())
        .collect::<SResult<_>>()?;
    let constant = rho_w.iter().flatten().all(|e| e.is_exact() && e.valuation().map_or(true, |v| v == 0) && e.num_terms() <= 1);
    let inv: linalg::Matrix<C> = if constant {
        let c = linalg::invert(&linalg::constant_part(&rho_w)).ok_or(crate::series::SeriesError::SingularJacobian)?;
        c.into_iter()
            .map(|row| row.into_iter().map(|x| TruncSeries::constant(&vars, EXACT, x)).collect())
            .collect()
    } else {
        linalg::invert_series(&rho_w, order)?
    };
    let mut b = Vec::with_capacity(n);
    for j in 0..n {
        let rz: Vec<TruncSeries<C>> = rho.iter().map(|r| r.differentiate(j)).collect::<SResult<_>>()?;
        let col = linalg::mat_vec(&inv, &rz)?;
        let col: Vec<TruncSeries<C>> = col.into_iter().map(|s| s.neg()).collect();
        b.push(col);
    }
    let bbar: Vec<Vec<TruncSeries<C>>> = b.iter().map(|row| row.iter().map(|s| conj_swap(s, big_n)).collect()).collect();
    let zero = |o: u32| TruncSeries::zero(&vars, o);
    let one = TruncSeries::one(&vars, EXACT);
    let mut l = Vec::new();
    let mut lbar = Vec::new();
    for j in 0..n {
        let mut c = vec![zero(EXACT); 2 * big_n];
        c[j] = one.clone();
        for i in 0..d {
            c[n + i] = b[j][i].clone();
        }
        l.push(VectorField { coeffs: c });
        let mut c = vec![zero(EXACT); 2 * big_n];
        c[big_n + j] = one.clone();
        for i in 0..d {
            c[big_n + n + i] = bbar[j][i].clone();
        }
        lbar.push(VectorField { coeffs: c });
    }
    Ok(CRFieldBasis { n, d, b, bbar, l, lbar })
}

/// Tangential `(1,0)` fields of a model together with their conjugates,
/// truncated at the model's budget.
pub fn tangential_fields(model: &ManifoldModel) -> Result<CRFieldBasis, ModelError> {
    tangential_fields_of(&model.rho, model.n, model.d, model.kappa).map_err(|e| match e {
        crate::series::SeriesError::SingularJacobian => ModelError::NotGeneric("w-block of ∂ρ/∂Z is singular".into()),
        other => other.into(),
    })
}
