//! One application of the basic reflection identity: from the jet of the
//! map on one side of the complexification to the jet of its conjugate on
//! the other side.

use std::ops::Range;

use super::graded::{Arg, Grading};
use super::{ReflectionError, Result};
use crate::manifold::{tangential_fields, NormalForm};
use crate::series::{var_names, Coeff, GaussRational, TruncSeries, Vars, EXACT};

/// Source data in slot-one form and the target defining functions.
#[derive(Clone, Debug)]
pub struct Side<C: Coeff = GaussRational> {
    pub n: usize,
    pub d: usize,
    pub np: usize,
    /// Slot-one `w` in terms of slot-one `z` and slot two.
    pub q: Vec<TruncSeries<C>>,
    /// `b[j][i]`: the `∂/∂w_i` coefficient of the `j`-th tangential field.
    pub b: Vec<Vec<TruncSeries<C>>>,
    pub rho_t: Vec<TruncSeries<C>>,
    /// Pivot threshold when selecting equations; zero for exact fields.
    pub tol: f64,
}

impl Side<GaussRational> {
    pub fn new(nf: &NormalForm, target_rho: &[TruncSeries], np: usize) -> Result<Self> {
        let fields = tangential_fields(&nf.model)?;
        Ok(Self {
            n: nf.model.n,
            d: nf.model.d,
            np,
            q: nf.q.clone(),
            b: fields.b,
            rho_t: target_rho.to_vec(),
            tol: 0.0,
        })
    }

    pub fn convert<D: Coeff>(&self, tol: f64) -> Side<D> {
        let c = |s: &TruncSeries| s.convert(D::from_gauss);
        Side {
            n: self.n,
            d: self.d,
            np: self.np,
            q: self.q.iter().map(c).collect(),
            b: self.b.iter().map(|r| r.iter().map(c).collect()).collect(),
            rho_t: self.rho_t.iter().map(c).collect(),
            tol,
        }
    }
}

impl<C: Coeff> Side<C> {
    pub fn big_n(&self) -> usize {
        self.n + self.d
    }

    /// The same identity read from slot two: all coefficients conjugated.
    pub fn conj(&self) -> Self {
        let c = |s: &TruncSeries<C>| s.conj_coeffs();
        Self {
            q: self.q.iter().map(c).collect(),
            b: self.b.iter().map(|r| r.iter().map(c).collect()).collect(),
            rho_t: self.rho_t.iter().map(c).collect(),
            ..self.clone()
        }
    }
}

/// `base` followed by the jet variables `e1..eN`.
pub fn jet_ring(base: &Vars, big_n: usize) -> Vars {
    let mut names: Vec<String> = base.iter().map(|s| s.to_string()).collect();
    names.extend((1..=big_n).map(|k| format!("e{k}")));
    var_names(&names)
}

/// Nondecreasing words over `0..n` of length at most `l`, shortest first.
pub fn words(n: usize, l: u32) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..l {
        let mut next = Vec::new();
        for w in &layer {
            for j in w.last().copied().unwrap_or(0)..n {
                let mut x: Vec<usize> = w.clone();
                x.push(j);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Greedy choice of `k` rows of full rank, first rows first.
pub fn select_rows<C: Coeff>(rows: &[Vec<C>], k: usize, tol: f64) -> Option<Vec<usize>> {
    let mut basis: Vec<(usize, Vec<C>)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let scale = row.iter().map(|c| c.abs_f64()).fold(0.0, f64::max);
        let mut r = row.clone();
        for (p, b) in &basis {
            let f = r[*p].div(&b[*p]).expect("pivot is nonzero");
            for (x, y) in r.iter_mut().zip(b) {
                *x = x.sub(&f.mul(y));
            }
        }
        let (p, best) = r.iter().enumerate().map(|(i, c)| (i, c.abs_f64())).fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        let nonzero = if tol == 0.0 { !r[p].is_zero() } else { best > tol * (1.0 + scale) };
        if nonzero {
            basis.push((p, r));
            chosen.push(idx);
            if chosen.len() == k {
                return Some(chosen);
            }
        }
    }
    None
}

/// Jet of the unknown side at `q + ε` to degree `tau` in `ε`, from the jet
/// `known` (degree `tau + l` in `e`) of the known side at `p`, where
/// `ρ(p, q) = 0` in `side`'s slot convention. Base series are truncated by
/// `base_groups`.
#[allow(clippy::too_many_arguments)]
pub fn reflect_step<C: Coeff>(
    side: &Side<C>,
    base: &Vars,
    base_groups: &[(Range<usize>, u32)],
    p: &[TruncSeries<C>],
    q: &[TruncSeries<C>],
    known: &[TruncSeries<C>],
    tau: u32,
    l: u32,
) -> Result<Vec<TruncSeries<C>>> {
    let (n, big_n, np) = (side.n, side.big_n(), side.np);
    let bn = base.len();
    let mut names: Vec<String> = base.iter().map(|s| s.to_string()).collect();
    names.extend((1..=big_n).map(|k| format!("e{k}")));
    names.extend((1..=big_n).map(|k| format!("du{k}")));
    names.extend((1..=np).map(|k| format!("y{k}")));
    let vars = var_names(&names);
    let (eps, du, y) = (bn, bn + big_n, bn + 2 * big_n);
    let mut groups = base_groups.to_vec();
    groups.push((eps..eps + big_n, tau));
    groups.push((du..du + big_n, l));
    let g = Grading::new(groups);

    let base_map: Vec<usize> = (0..bn).collect();
    let lift = |s: &TruncSeries<C>| g.clip(&s.embed(&vars, &base_map));
    let var = |k: usize| TruncSeries::<C>::var(&vars, EXACT, k);
    let pp: Vec<TruncSeries<C>> = p.iter().map(lift).collect();
    let zeta: Vec<TruncSeries<C>> = q.iter().enumerate().map(|(k, s)| lift(s).try_add(&var(eps + k)).expect("same ring")).collect();

    // The known-side point moving with ζ: z fixed, w solved.
    let mut slot: Vec<Arg<C>> = Vec::with_capacity(2 * big_n);
    slot.extend(pp[..n].iter().cloned().map(Arg::Series));
    slot.extend((0..side.d).map(|_| Arg::Zero));
    slot.extend(zeta.iter().cloned().map(Arg::Series));
    let mut u: Vec<TruncSeries<C>> = pp[..n].to_vec();
    for qi in &side.q {
        u.push(g.subst(qi, &vars, &slot));
    }
    let shift: Vec<TruncSeries<C>> = (0..big_n).map(|k| u[k].try_sub(&pp[k]).expect("same ring").try_add(&var(du + k)).expect("same ring")).collect();
    let u: Vec<TruncSeries<C>> = (0..big_n).map(|k| u[k].try_add(&var(du + k)).expect("same ring")).collect();

    let mut jet_args: Vec<Arg<C>> = (0..bn).map(Arg::Var).collect();
    jet_args.extend(shift.into_iter().map(Arg::Series));
    let gvals: Vec<TruncSeries<C>> = known.iter().map(|s| g.subst(s, &vars, &jet_args)).collect();

    let mut field_args: Vec<Arg<C>> = u.iter().cloned().map(Arg::Series).collect();
    field_args.extend(zeta.iter().cloned().map(Arg::Series));
    let b: Vec<Vec<TruncSeries<C>>> = side.b.iter().map(|row| row.iter().map(|s| g.subst(s, &vars, &field_args)).collect()).collect();

    let mut rho_args: Vec<Arg<C>> = gvals.iter().cloned().map(Arg::Series).collect();
    rho_args.extend((0..np).map(|k| Arg::Var(y + k)));
    let h: Vec<TruncSeries<C>> = side.rho_t.iter().map(|r| g.subst(r, &vars, &rho_args)).collect();

    let apply = |j: usize, f: &TruncSeries<C>| -> TruncSeries<C> {
        let mut out = f.differentiate(du + j).expect("variable in range");
        for (i, bji) in b[j].iter().enumerate() {
            let d = f.differentiate(du + n + i).expect("variable in range");
            if !d.is_zero() {
                out = out.try_add(&g.mul(bji, &d)).expect("same ring");
            }
        }
        out
    };
    let du_vars: Vec<usize> = (du..du + big_n).collect();
    let mut cache: std::collections::HashMap<Vec<usize>, Vec<TruncSeries<C>>> = std::collections::HashMap::new();
    let mut rows: Vec<TruncSeries<C>> = Vec::new();
    for w in words(n, l) {
        let vals = match w.split_last() {
            None => h.clone(),
            Some((&j, rest)) => cache[rest].iter().map(|f| apply(j, f)).collect(),
        };
        rows.extend(vals.iter().map(|f| f.set_zero(&du_vars)));
        cache.insert(w, vals);
    }

    // Equations at the anchor decide which rows to solve.
    let y0: Vec<C> = known.iter().map(|s| s.constant_term().conj()).collect();
    let mut point = vec![C::zero(); vars.len()];
    for k in 0..np {
        point[y + k] = y0[k].clone();
    }
    let jac: Vec<Vec<C>> = rows
        .iter()
        .map(|e| (0..np).map(|k| e.differentiate(y + k).expect("variable in range").eval(&point)).collect())
        .collect();
    let sel = select_rows(&jac, np, side.tol).ok_or_else(|| {
        ReflectionError::SpanDeficient(format!("the reflection equations have rank < {np} at the anchor"))
    })?;
    let e: Vec<TruncSeries<C>> = sel.iter().map(|&r| rows[r].clone()).collect();
    let de: Vec<Vec<TruncSeries<C>>> = e.iter().map(|f| (0..np).map(|k| f.differentiate(y + k).expect("variable in range")).collect()).collect();

    let mut ys: Vec<TruncSeries<C>> = y0.iter().map(|c| TruncSeries::constant(&vars, EXACT, c.clone())).collect();
    let span = g.span() + 1;
    let iters = 32 - span.leading_zeros() + 2;
    let mut settled = false;
    for _ in 0..iters {
        let mut args: Vec<Arg<C>> = (0..y).map(|k| if k >= du { Arg::Zero } else { Arg::Var(k) }).collect();
        args.extend(ys.iter().cloned().map(Arg::Series));
        let r: Vec<TruncSeries<C>> = e.iter().map(|f| g.subst(f, &vars, &args)).collect();
        if r.iter().all(|s| s.is_zero()) {
            settled = true;
            break;
        }
        let jm: Vec<Vec<TruncSeries<C>>> = de.iter().map(|row| row.iter().map(|f| g.subst(f, &vars, &args)).collect()).collect();
        let inv = g.invert(&jm).ok_or_else(|| ReflectionError::SpanDeficient("the reflection equations degenerate near the anchor".into()))?;
        for (k, yk) in ys.iter_mut().enumerate() {
            let mut corr = TruncSeries::zero(&vars, EXACT);
            for (j, rj) in r.iter().enumerate() {
                corr = corr.try_add(&g.mul(&inv[k][j], rj)).expect("same ring");
            }
            *yk = yk.try_sub(&corr).expect("same ring");
        }
    }
    if !settled && side.tol == 0.0 {
        return Err(ReflectionError::Budget("Newton iteration for the conjugate jet did not terminate".into()));
    }

    let out_vars = jet_ring(base, big_n);
    let map: Vec<usize> = (0..vars.len()).map(|k| k.min(bn + big_n - 1)).collect();
    Ok(ys.iter().map(|s| s.embed(&out_vars, &map)).collect())
}
