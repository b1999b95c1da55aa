//! Map jets: checks, coordinates and the file format.

use serde::{Deserialize, Serialize};

use super::{ReflectionError, Result};
use crate::invariants::{nondeg::contact_order, MapJet};
use crate::manifold::{tangential_fields, ManifoldModel};
use crate::series::{monomials_up_to, Coeff, GaussRational, TruncSeries, Vars, EXACT};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrCheck {
    pub is_cr: bool,
    /// Largest `k` with `ρ'(F, F̄) = o(|x|^k)` on the source, capped.
    pub sends_order: u32,
}

/// CR test and contact order of a holomorphic jet, both computed exactly.
pub fn check_cr_jet(source: &ManifoldModel, target: &ManifoldModel, jet: &MapJet, cap: u32) -> Result<CrCheck> {
    let fields = tangential_fields(source)?;
    let mut is_cr = true;
    for f in &jet.f {
        for lb in &fields.lbar {
            is_cr &= lb.apply(f)?.is_zero();
        }
    }
    let sends_order = contact_order(source, target, jet, cap)?;
    Ok(CrCheck { is_cr, sends_order })
}

/// Components of `jet` as series in `ring`, with source coordinate `k`
/// mapped to ring variable `offset + k`, truncated at `order`.
pub fn jet_in<C: Coeff>(f: &[TruncSeries<C>], big_n: usize, ring: &Vars, offset: usize, order: u32) -> Vec<TruncSeries<C>> {
    let map: Vec<usize> = (0..f[0].nvars()).map(|k| if k < big_n { offset + k } else { offset }).collect();
    f.iter().map(|s| s.truncate(order).with_order(EXACT).embed(ring, &map)).collect()
}

/// Jet coordinates ordered by target component, then source exponent in
/// ascending graded-lex order.
pub fn jet_coordinates<C: Coeff>(f: &[TruncSeries<C>], big_n: usize, order: u32) -> Vec<C> {
    let mons = monomials_up_to(big_n, order);
    f.iter().flat_map(|s| mons.iter().map(move |m| s.coeff(m))).collect()
}

pub fn jet_from_coordinates<C: Coeff>(coords: &[C], vars: &Vars, big_n: usize, np: usize, order: u32) -> Vec<TruncSeries<C>> {
    let mons = monomials_up_to(big_n, order);
    (0..np)
        .map(|c| TruncSeries::from_terms(vars, EXACT, mons.iter().zip(&coords[c * mons.len()..(c + 1) * mons.len()]).map(|(m, v)| (*m, v.clone()))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetCoefficient {
    pub alpha: Vec<u32>,
    /// One `(re, im)` pair of exact rational strings per target component.
    pub value_re_im_pairs: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetFile {
    pub source_model: String,
    pub target_model: String,
    pub order: u32,
    pub coefficients: Vec<JetCoefficient>,
}

impl JetFile {
    pub fn from_jet(source: &str, target: &str, jet: &MapJet, big_n: usize, order: u32) -> Self {
        let coefficients = monomials_up_to(big_n, order)
            .into_iter()
            .map(|m| JetCoefficient { alpha: m.exps(big_n), value_re_im_pairs: jet.f.iter().map(|s| s.coeff(&m).to_strings()).collect() })
            .filter(|c| c.value_re_im_pairs.iter().any(|(a, b)| a != "0" || b != "0"))
            .collect();
        Self { source_model: source.into(), target_model: target.into(), order, coefficients }
    }

    /// The jet on `source`'s ring.
    pub fn to_jet(&self, source: &ManifoldModel, np: usize) -> Result<MapJet> {
        let big_n = source.big_n();
        let mut f = vec![TruncSeries::zero(&source.vars, EXACT); np];
        for c in &self.coefficients {
            if c.alpha.len() != big_n || c.value_re_im_pairs.len() != np {
                return Err(ReflectionError::Jet(format!("coefficient {:?} does not match ℂ^{big_n} → ℂ^{np}", c.alpha)));
            }
            if c.alpha.iter().sum::<u32>() > self.order {
                return Err(ReflectionError::Jet(format!("coefficient {:?} exceeds the jet order {}", c.alpha, self.order)));
            }
            let mut exps = c.alpha.clone();
            exps.resize(2 * big_n, 0);
            for (k, (re, im)) in c.value_re_im_pairs.iter().enumerate() {
                let v = GaussRational::from_strings(re, im).map_err(ReflectionError::Jet)?;
                f[k].add_term(crate::series::Monomial::from_exps(&exps), &v);
            }
        }
        Ok(MapJet { f })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::parse_model;

    const Q: &str = "model \"q\" { ambient 2; codim 1; im w = z*conj(z); }";

    fn poly(m: &ManifoldModel, terms: &[(&[u32], GaussRational)]) -> TruncSeries {
        TruncSeries::from_terms(&m.vars, EXACT, terms.iter().map(|(e, c)| (crate::series::Monomial::from_exps(e), c.clone())))
    }

    #[test]
    fn dilation_is_cr_to_full_order() {
        let m = parse_model(Q, 8).unwrap();
        let r = GaussRational::rational;
        let jet = MapJet { f: vec![poly(&m, &[(&[1, 0], r(3, 2))]), poly(&m, &[(&[0, 1], r(9, 4))])] };
        let c = check_cr_jet(&m, &m, &jet, 8).unwrap();
        assert_eq!(c, CrCheck { is_cr: true, sends_order: 8 });
    }

    #[test]
    fn corrupted_coefficient_is_caught() {
        let m = parse_model(Q, 8).unwrap();
        let r = GaussRational::rational;
        let jet = MapJet { f: vec![poly(&m, &[(&[1, 0], r(1, 1)), (&[2, 0], r(1, 1))]), poly(&m, &[(&[0, 1], r(1, 1)), (&[3, 0], r(1, 1))])] };
        let c = check_cr_jet(&m, &m, &jet, 8).unwrap();
        assert!(c.is_cr);
        assert_eq!(c.sends_order, 2);
    }

    #[test]
    fn file_round_trip() {
        let m = parse_model(Q, 8).unwrap();
        let g = GaussRational::from_parts(1, 3, -2, 5);
        let jet = MapJet { f: vec![poly(&m, &[(&[1, 0], g.clone()), (&[1, 1], g.clone())]), poly(&m, &[(&[0, 1], GaussRational::real(1))])] };
        let file = JetFile::from_jet("q", "q", &jet, 2, 2);
        let text = serde_json::to_string(&file).unwrap();
        let back: JetFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_jet(&m, 2).unwrap(), jet);
        let coords = jet_coordinates(&jet.f, 2, 2);
        assert_eq!(coords.len(), 12);
        assert_eq!(jet_from_coordinates(&coords, &m.vars, 2, 2, 2), jet.f);
    }
}
