use serde::Serialize;

/// Orders of the complete system: `r`, the order `k` of the approximate
/// data needed, and the bound on the vanishing order of `δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub r: u64,
    pub k: u64,
    pub m_bound: u64,
}

pub fn bounds(d: u64, l: u64, mu: &[u64]) -> Bounds {
    let nu = mu.iter().copied().max().unwrap_or(0);
    let r = 2 * (d + 1) * l;
    let k = 4 * (d * d + d) * nu * l + 4 * (d * d - 1) * l + 2 * d * nu - 2 * d + 1;
    let m_bound = 2 * (mu.iter().sum::<u64>() - d);
    Bounds { r, k, m_bound }
}
