use serde::Serialize;

use super::vmap::VMap;
use super::{Result, SegreError};
use crate::series::{linalg, GaussRational, TruncSeries, VanishingOrder};

#[derive(Clone, Debug, Serialize)]
pub struct DeltaData {
    #[serde(skip)]
    pub delta: TruncSeries,
    /// `det ∂V/∂ξ¹(η, 0)`; `δ` is its square.
    #[serde(skip)]
    pub det: TruncSeries,
    pub eta0: Vec<i64>,
    pub m: u32,
    pub m_predicted: Option<u32>,
    pub directions_tried: usize,
}

impl DeltaData {
    pub fn matches_prediction(&self) -> bool {
        self.m_predicted == Some(self.m)
    }
}

/// Integer directions with entries in `−2..=2`, by max-norm, then
/// lexicographically.
fn directions(dim: usize) -> impl Iterator<Item = Vec<i64>> {
    (1..=2i64).flat_map(move |r| {
        let total = (2 * r + 1).pow(dim as u32);
        (0..total).filter_map(move |mut code| {
            let mut v = vec![0i64; dim];
            for k in (0..dim).rev() {
                v[k] = code % (2 * r + 1) - r;
                code /= 2 * r + 1;
            }
            (v.iter().map(|x| x.abs()).max() == Some(r)).then_some(v)
        })
    })
}

/// `δ = (det ∂V/∂ξ¹(η, 0))²`, its vanishing order `m` at `η = 0`, and the
/// first swept direction `η₀` along which `δ(λη₀)` vanishes to order `m`.
pub fn delta_and_eta0(vmap: &VMap, m_predicted: Option<u32>) -> Result<DeltaData> {
    let det = linalg::det_series(&vmap.jacobian_at_zero()?)?;
    let delta = det.try_mul(&det)?;
    let m = match delta.valuation() {
        Some(v) if v <= delta.order() => v,
        _ => {
            return Err(SegreError::Budget(format!(
                "δ vanishes through its truncation order {}",
                delta.order()
            )))
        }
    };
    let h = vmap.eta_count();
    let total_vars = delta.nvars();
    let mut tried = 0;
    for dir in directions(h) {
        tried += 1;
        let mut full = vec![GaussRational::real(0); total_vars];
        for (k, &x) in dir.iter().enumerate() {
            full[k] = GaussRational::real(x);
        }
        if delta.vanishing_order(&full) == VanishingOrder::Finite(m) {
            return Ok(DeltaData { delta, det, eta0: dir, m, m_predicted, directions_tried: tried });
        }
    }
    Err(SegreError::Budget(format!("no swept direction attains the vanishing order {m} of δ")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{normal_coordinates, parse_model};
    use crate::segre::{build_v, segre_chain};

    fn data(src: &str, s: usize, kappa: u32, predicted: u32) -> DeltaData {
        let nf = normal_coordinates(&parse_model(src, kappa).unwrap()).unwrap();
        let v = build_v(&segre_chain(&nf, 2 * s).unwrap(), 3).unwrap();
        delta_and_eta0(&v, Some(predicted)).unwrap()
    }

    #[test]
    fn sweep_order() {
        let d: Vec<Vec<i64>> = directions(2).take(9).collect();
        assert_eq!(d[0], vec![-1, -1]);
        assert_eq!(d.len(), 9);
        assert!(d.iter().all(|v| v.iter().all(|x| x.abs() <= 2)));
        assert_eq!(directions(2).count(), 24);
    }

    #[test]
    fn quadric_m_is_two() {
        let d = data("model \"q\" { ambient 2; codim 1; im w = z*conj(z); }", 2, 8, 2);
        assert!(d.matches_prediction());
    }

    #[test]
    fn codim_two_m_is_six() {
        let d = data("model \"c\" { ambient 3; codim 2; im w1 = z*conj(z); im w2 = z*conj(z)*(z + conj(z)); }", 3, 10, 6);
        assert!(d.matches_prediction(), "m = {}", d.m);
    }
}
