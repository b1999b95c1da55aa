#![allow(dead_code)]

use crjet::manifold::{parse_model, ManifoldModel};
use crjet::reflection::jet::jet_coordinates;
use crjet::series::{Coeff, Complex64, GaussRational, Monomial, TruncSeries, EXACT};

pub const Q: &str = "model \"q\" { ambient 2; codim 1; im w = z*conj(z); }";

pub fn quadric(kappa: u32) -> ManifoldModel {
    parse_model(Q, kappa).unwrap()
}

pub fn g(a: i64, b: i64, c: i64, d: i64) -> GaussRational {
    GaussRational::from_parts(a, b, c, d)
}

pub fn poly(m: &ManifoldModel, terms: &[(&[u32], GaussRational)]) -> TruncSeries {
    TruncSeries::from_terms(&m.vars, EXACT, terms.iter().map(|(e, c)| (Monomial::from_exps(e), c.clone())))
}

/// A rational self-map of `ℂ²` given as polynomial numerators over a
/// common polynomial denominator.
#[derive(Clone, Debug)]
pub struct Auto {
    pub name: String,
    pub num: Vec<TruncSeries>,
    pub den: TruncSeries,
}

impl Auto {
    /// Taylor expansion at `p` through `order`, in coordinates centered
    /// there.
    pub fn jet_at(&self, p: &[GaussRational], order: u32) -> Vec<TruncSeries> {
        let vars = self.den.vars().clone();
        let args: Vec<TruncSeries> = (0..vars.len())
            .map(|k| {
                let v = TruncSeries::var(&vars, EXACT, k);
                if k < p.len() { v.try_add(&TruncSeries::constant(&vars, EXACT, p[k].clone())).unwrap() } else { v }
            })
            .collect();
        let inv = self.den.compose(&args).unwrap().with_order(order).recip().unwrap();
        self.num
            .iter()
            .map(|s| s.compose(&args).unwrap().with_order(order).try_mul(&inv).unwrap().truncate(order).with_order(EXACT))
            .collect()
    }

    pub fn jet(&self, order: u32) -> Vec<TruncSeries> {
        self.jet_at(&[], order)
    }

    /// Value at a point of `ℂ²`.
    pub fn value(&self, p: &[Complex64]) -> Vec<Complex64> {
        let mut pt: Vec<Complex64> = p.to_vec();
        pt.resize(self.den.nvars(), Complex64::new(0.0, 0.0));
        let conv = |s: &TruncSeries| s.convert(|c: &GaussRational| c.to_complex64());
        let d = conv(&self.den).eval(&pt);
        self.num.iter().map(|s| conv(s).eval(&pt) / d).collect()
    }
}

pub fn identity(m: &ManifoldModel) -> Auto {
    dilation(m, 1, 1)
}

/// `(z, w) ↦ (tz, t²w)` with `t = a/b`.
pub fn dilation(m: &ManifoldModel, a: i64, b: i64) -> Auto {
    Auto {
        name: format!("dilation {a}/{b}"),
        num: vec![poly(m, &[(&[1, 0], g(a, b, 0, 1))]), poly(m, &[(&[0, 1], g(a * a, b * b, 0, 1))])],
        den: poly(m, &[(&[0, 0], g(1, 1, 0, 1))]),
    }
}

/// `(z, w) ↦ (z + a, w + 2iāz + i|a|²)`.
pub fn heisenberg(m: &ManifoldModel, a: &GaussRational) -> Auto {
    let two_i_abar = g(0, 1, 2, 1).mul(&a.conj());
    let i_norm = g(0, 1, 1, 1).mul(&a.mul(&a.conj()));
    Auto {
        name: format!("translation {a}"),
        num: vec![
            poly(m, &[(&[0, 0], a.clone()), (&[1, 0], g(1, 1, 0, 1))]),
            poly(m, &[(&[0, 0], i_norm), (&[1, 0], two_i_abar), (&[0, 1], g(1, 1, 0, 1))]),
        ],
        den: poly(m, &[(&[0, 0], g(1, 1, 0, 1))]),
    }
}

/// `(z, w) ↦ (z + aw, w) / (1 − 2iāz − i|a|²w)`, fixing the origin.
pub fn isotropy(m: &ManifoldModel, a: &GaussRational) -> Auto {
    let minus_two_i_abar = g(0, 1, -2, 1).mul(&a.conj());
    let minus_i_norm = g(0, 1, -1, 1).mul(&a.mul(&a.conj()));
    Auto {
        name: format!("isotropy {a}"),
        num: vec![poly(m, &[(&[1, 0], g(1, 1, 0, 1)), (&[0, 1], a.clone())]), poly(m, &[(&[0, 1], g(1, 1, 0, 1))])],
        den: poly(m, &[(&[0, 0], g(1, 1, 0, 1)), (&[1, 0], minus_two_i_abar), (&[0, 1], minus_i_norm)]),
    }
}

/// Jet coordinates of an `r`-jet, as the integrator takes them.
pub fn jet0(f: &[TruncSeries], big_n: usize, r: u32) -> Vec<Complex64> {
    jet_coordinates(f, big_n, r).iter().map(|c| c.to_complex64()).collect()
}
