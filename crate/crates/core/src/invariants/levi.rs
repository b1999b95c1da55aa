use serde::Serialize;

use super::Result;
use crate::manifold::{tangential_fields, ManifoldModel};
use crate::series::{linalg, Coeff, GaussRational};

/// Values of the Levi form on the basis `L̄_1, …, L̄_n` at the base point,
/// in the frame of `T/Tᶜ` given by `dρ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeviForm {
    pub n: usize,
    pub d: usize,
    /// `matrix[i][j]` is a vector in `ℂᵈ`.
    pub matrix: Vec<Vec<Vec<GaussRational>>>,
}

impl LeviForm {
    pub fn is_hermitian(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| (0..self.d).all(|k| self.matrix[i][j][k] == self.matrix[j][i][k].conj()))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().flatten().all(|c| c.is_zero())
    }
}

/// `𝓛(L̄_i, L̄_j) = ρ_w(0) · (L̄_i b_j)(0)`, the `w`-part of `[L̄_i, L_j](0)`
/// read through `dρ`.
pub fn levi_form(model: &ManifoldModel) -> Result<LeviForm> {
    let f = tangential_fields(model)?;
    let (n, d) = (model.n, model.d);
    let rho_w: Vec<Vec<GaussRational>> = model
        .rho_z_at_origin()
        .into_iter()
        .map(|row| row[n..].to_vec())
        .collect();
    let mut matrix = vec![vec![vec![GaussRational::zero(); d]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let bw: Vec<GaussRational> = (0..d)
                .map(|c| f.lbar[i].apply(&f.b[j][c]).map(|s| s.constant_term()))
                .collect::<std::result::Result<_, _>>()?;
            for k in 0..d {
                let mut acc = GaussRational::zero();
                for c in 0..d {
                    acc = acc.add(&rho_w[k][c].mul(&bw[c]));
                }
                matrix[i][j][k] = acc;
            }
        }
    }
    Ok(LeviForm { n, d, matrix })
}

/// Both nondegeneracy conditions: trivial kernel and spanning values.
pub fn levi_nondegenerate(form: &LeviForm) -> bool {
    let (n, d) = (form.n, form.d);
    let kernel_rows: Vec<Vec<GaussRational>> = (0..n)
        .map(|i| (0..n).flat_map(|j| form.matrix[i][j].iter().cloned()).collect())
        .collect();
    let values: Vec<Vec<GaussRational>> = form.matrix.iter().flatten().cloned().collect();
    linalg::rank(&kernel_rows) == n && linalg::rank(&values) == d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::parse_model;

    fn form(src: &str) -> LeviForm {
        levi_form(&parse_model(src, 6).unwrap()).unwrap()
    }

    #[test]
    fn quadric_value_one() {
        let f = form("model \"q\" { ambient 2; codim 1; im w = z*conj(z); }");
        assert_eq!(f.matrix[0][0][0], GaussRational::real(1));
        assert!(levi_nondegenerate(&f));
    }

    #[test]
    fn degenerate_examples() {
        let h = form("model \"h\" { ambient 2; codim 1; im w = 0; }");
        assert!(h.is_zero() && !levi_nondegenerate(&h));
        let q = form("model \"e\" { ambient 2; codim 1; im w = (z*conj(z))^2; }");
        assert!(q.is_zero());
    }

    #[test]
    fn two_variable_forms() {
        let f = form("model \"q3\" { ambient 3; codim 1; im w = z1*conj(z1) - z2*conj(z2); }");
        assert_eq!(f.matrix[1][1][0], GaussRational::real(-1));
        assert!(f.is_hermitian() && levi_nondegenerate(&f));
        let g = form("model \"m\" { ambient 3; codim 1; im w = z1*conj(z2) + z2*conj(z1); }");
        assert_eq!(g.matrix[0][1][0], GaussRational::real(1));
        assert!(g.is_hermitian() && levi_nondegenerate(&g));
        let r = form("model \"r1\" { ambient 3; codim 1; im w = z1*conj(z1); }");
        assert!(!levi_nondegenerate(&r));
    }
}
