use super::jet::jet_in;
use super::step::{jet_ring, reflect_step, Side};
use super::{MapJet, ReflectionError, Result};
use crate::manifold::NormalForm;
use crate::series::{var_names, TruncSeries, Vars};

/// `Ψ^τ` at the anchor: the `τ`-jet of `ζ ↦ F̄(ζ̄)` at the origin, in the
/// variables `e1..eN`.
#[derive(Clone, Debug)]
pub struct ReflectionMap {
    pub tau: u32,
    pub l: u32,
    pub vars: Vars,
    pub psi: Vec<TruncSeries>,
}

/// Solve the reflection identity once at the origin, from the `τ + l` jet
/// of the anchor.
pub fn basic_reflection(nf: &NormalForm, target_rho: &[TruncSeries], anchor: &MapJet, tau: u32, l: u32) -> Result<ReflectionMap> {
    let side = Side::new(nf, target_rho, anchor.f.len())?;
    let big_n = nf.model.big_n();
    let empty: Vars = var_names::<&str>(&[]);
    let vars = jet_ring(&empty, big_n);
    let known = jet_in(&anchor.f, big_n, &vars, 0, tau + l);
    let origin = vec![TruncSeries::zero(&empty, crate::series::EXACT); big_n];
    let psi = reflect_step(&side, &empty, &[], &origin, &origin, &known, tau, l)?;
    Ok(ReflectionMap { tau, l, vars, psi })
}

/// The fixed-point property: `Ψ^τ` reproduces the conjugate anchor jet.
pub fn fixed_point_check(map: &ReflectionMap, anchor: &MapJet) -> Result<()> {
    let big_n = map.vars.len();
    let want = jet_in(&anchor.f, big_n, &map.vars, 0, map.tau);
    for (k, (a, b)) in map.psi.iter().zip(&want).enumerate() {
        let diff = a.try_sub(&b.conj_coeffs())?;
        let bad = diff.terms().next().map(|(m, v)| (m.exps(big_n), v.to_string()));
        if let Some((e, v)) = bad {
            return Err(ReflectionError::Jet(format!("component {k} differs by {v} at {e:?}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{normal_coordinates, parse_model, ManifoldModel};
    use crate::series::{GaussRational, Monomial, EXACT};

    const Q: &str = "model \"q\" { ambient 2; codim 1; im w = z*conj(z); }";

    fn jet(m: &ManifoldModel, comps: &[&[(&[u32], GaussRational)]]) -> MapJet {
        MapJet {
            f: comps
                .iter()
                .map(|t| TruncSeries::from_terms(&m.vars, EXACT, t.iter().map(|(e, c)| (Monomial::from_exps(e), c.clone()))))
                .collect(),
        }
    }

    #[test]
    fn identity_and_dilation_are_fixed() {
        let m = parse_model(Q, 8).unwrap();
        let nf = normal_coordinates(&m).unwrap();
        let r = GaussRational::rational;
        let one = r(1, 1);
        let id = jet(&m, &[&[(&[1, 0], one.clone())], &[(&[0, 1], one.clone())]]);
        let dil = jet(&m, &[&[(&[1, 0], r(3, 2))], &[(&[0, 1], r(9, 4))]]);
        for anchor in [&id, &dil] {
            for tau in 0..=3 {
                let map = basic_reflection(&nf, &m.rho, anchor, tau, 1).unwrap();
                fixed_point_check(&map, anchor).unwrap();
            }
        }
        // Ψ⁰ of the dilation: the conjugate values at ζ = 0 vanish.
        let map = basic_reflection(&nf, &m.rho, &dil, 0, 1).unwrap();
        assert!(map.psi.iter().all(|s| s.is_zero()));
    }

    #[test]
    fn rotation_with_complex_coefficients() {
        let m = parse_model(Q, 8).unwrap();
        let nf = normal_coordinates(&m).unwrap();
        // z ↦ (3 + 4i)/5 z is an automorphism; so is z ↦ z + i z w/2 to first order.
        let u = GaussRational::from_parts(3, 5, 4, 5);
        let rot = jet(&m, &[&[(&[1, 0], u)], &[(&[0, 1], GaussRational::real(1))]]);
        let map = basic_reflection(&nf, &m.rho, &rot, 2, 1).unwrap();
        fixed_point_check(&map, &rot).unwrap();
    }

    #[test]
    fn degenerate_anchor_is_rejected() {
        let m = parse_model(Q, 8).unwrap();
        let nf = normal_coordinates(&m).unwrap();
        let flat = jet(&m, &[&[], &[(&[0, 1], GaussRational::real(1))]]);
        let err = basic_reflection(&nf, &m.rho, &flat, 0, 1).unwrap_err();
        assert!(matches!(err, ReflectionError::SpanDeficient(_)));
    }

    /// The Whitney map of spheres, moved to Heisenberg coordinates, as a jet.
    fn whitney(m: &ManifoldModel, order: u32) -> MapJet {
        let c = |x: GaussRational| TruncSeries::constant(&m.vars, order, x);
        let i = c(GaussRational::from_parts(0, 1, 1, 1));
        let one = c(GaussRational::real(1));
        let z = TruncSeries::var(&m.vars, order, 0);
        let w = TruncSeries::var(&m.vars, order, 1);
        let mul = |a: &TruncSeries, b: &TruncSeries| a.try_mul(b).unwrap();
        let den = i.try_add(&w).unwrap().recip().unwrap();
        let z1 = mul(&z.scale(&GaussRational::real(2)), &den);
        let z2 = mul(&i.try_sub(&w).unwrap(), &den);
        let inv = one.try_add(&z2).unwrap().recip().unwrap();
        let f = vec![mul(&mul(&i, &mul(&z1, &z1)), &inv), mul(&mul(&mul(&i, &z1), &z2), &inv), mul(&mul(&i, &one.try_sub(&z2).unwrap()), &inv)];
        MapJet { f: f.into_iter().map(|s| s.with_order(EXACT)).collect() }
    }

    #[test]
    fn sphere_into_higher_sphere() {
        let src = parse_model(Q, 8).unwrap();
        let tgt = parse_model("model \"s5\" { ambient 3; codim 1; im w = z1*conj(z1) + z2*conj(z2); }", 8).unwrap();
        let nf = normal_coordinates(&src).unwrap();
        let emb = whitney(&src, 6);
        let check = crate::reflection::check_cr_jet(&src, &tgt, &emb, 6).unwrap();
        assert!(check.is_cr && check.sends_order == 6, "{check:?}");
        let map = basic_reflection(&nf, &tgt.rho, &emb, 0, 2).unwrap();
        fixed_point_check(&map, &emb).unwrap();
        let linear = jet(&src, &[&[], &[(&[1, 0], GaussRational::real(1))], &[(&[0, 1], GaussRational::real(1))]]);
        assert!(basic_reflection(&nf, &tgt.rho, &linear, 0, 2).is_err());
    }
}
