//! The iterated reflection along a Segre chain and the parametrization
//! `Ψᵏ` of maps by their `r`-jets at the base point.

use serde::Serialize;

use super::graded::{Arg, Grading};
use super::jet::jet_in;
use super::step::{jet_ring, reflect_step, Side};
use super::{MapJet, ReflectionError, Result};
use crate::invariants::{bounds, hoermander_numbers};
use crate::manifold::{normal_coordinates, ManifoldModel, NormalForm};
use crate::segre::{build_v, delta_and_eta0, lemma, segre_chain, DeltaData};
use crate::series::{laurent_c0, solve_implicit, var_names, Coeff, GaussRational, TruncSeries, Vars, EXACT};

/// `λ(μ)` with `δ̂(λ(μ)) = c·μ^m`, from `δ̂ = c·λ^m·u(λ)`, `u(0) = 1`.
/// `delta_hat` is univariate; the result is truncated at `order`.
pub fn normalize_parameter(delta_hat: &TruncSeries, m: u32, order: u32) -> Result<(GaussRational, TruncSeries)> {
    if delta_hat.nvars() != 1 || m == 0 {
        return Err(ReflectionError::Budget("the normalized parameter needs a univariate δ̂ and m ≥ 1".into()));
    }
    if delta_hat.valuation() != Some(m) {
        return Err(ReflectionError::Budget(format!("δ̂ does not vanish to order exactly {m}")));
    }
    if !delta_hat.is_exact() && delta_hat.order() < order + m {
        return Err(ReflectionError::Budget(format!("δ̂ is known to order {}, need {}", delta_hat.order(), order + m)));
    }
    let c = delta_hat.coeff_of(&[m]);
    let c_inv = c.inv().expect("leading coefficient is nonzero");
    let vars = delta_hat.vars().clone();
    let u = TruncSeries::from_terms(
        &vars,
        order,
        delta_hat.terms().map(|(mono, x)| (crate::series::Monomial::var(0, mono.exp(0) - m), x.mul(&c_inv))),
    )
    .truncate(order);
    // g = u^{1/m} from the binomial series in u − 1.
    let one = TruncSeries::one(&vars, order);
    let h = u.try_sub(&one)?;
    let mut g = one.clone();
    let mut power = one;
    let mut binom = GaussRational::real(1);
    for i in 0..order {
        binom = binom.mul(&GaussRational::rational(1 - i as i64 * m as i64, m as i64 * (i as i64 + 1)));
        power = power.try_mul(&h)?.truncate(order);
        if power.is_zero() {
            break;
        }
        g = g.try_add(&power.scale(&binom))?;
    }
    // Invert μ = λ·g(λ).
    let ring = var_names(&["mu", "lam"]);
    let lam_g = TruncSeries::var(&vars, order, 0).try_mul(&g)?.truncate(order);
    let f = lam_g.embed(&ring, &[1]).try_sub(&TruncSeries::var(&ring, EXACT, 0))?;
    let sol = solve_implicit(&[f], &[1], order)?;
    Ok((c, sol[0].embed(&var_names(&["mu"]), &[0, 0])))
}

/// Everything in the pipeline that does not depend on the jet, in a given
/// coefficient field.
#[derive(Clone, Debug)]
pub struct Kernel<C: Coeff = GaussRational> {
    pub side: Side<C>,
    /// Chain points `v⁰ … v^{2s}` on the chain ring.
    pub points: Vec<Vec<TruncSeries<C>>>,
    /// Chain arguments on the ring `μ, Z̃` along the normalized line.
    pub subst: Vec<TruncSeries<C>>,
    pub c: C,
    /// Source coordinates as functions of normal ones, and back.
    pub to_old: Vec<TruncSeries<C>>,
    pub to_new: Vec<TruncSeries<C>>,
}

impl Kernel<GaussRational> {
    pub fn convert<D: Coeff>(&self, tol: f64) -> Kernel<D> {
        let c = |s: &TruncSeries| s.convert(D::from_gauss);
        Kernel {
            side: self.side.convert(tol),
            points: self.points.iter().map(|p| p.iter().map(c).collect()).collect(),
            subst: self.subst.iter().map(c).collect(),
            c: D::from_gauss(&self.c),
            to_old: self.to_old.iter().map(c).collect(),
            to_new: self.to_new.iter().map(c).collect(),
        }
    }
}

/// The source at its base point, the target at the image point, and the
/// jet-independent data of the pipeline.
#[derive(Clone, Debug)]
pub struct Setup {
    pub nf: NormalForm,
    pub target: ManifoldModel,
    pub l: u32,
    pub r: u32,
    pub k: u32,
    pub s: usize,
    pub m: u32,
    pub guaranteed_order: u32,
    pub delta: DeltaData,
    pub chain_vars: Vars,
    /// `μ, Z̃1..Z̃N`.
    pub line_vars: Vars,
    pub kernel: Kernel,
}

#[derive(Clone, Debug, Serialize)]
pub struct SetupSummary {
    pub l: u32,
    pub r: u32,
    pub k: u32,
    pub s: usize,
    pub m: u32,
    pub guaranteed_order: u32,
    pub eta0: Vec<i64>,
    pub scaling_constant: GaussRational,
}

impl Setup {
    /// `source` and `target` are centered at the base point and its image.
    /// `k` defaults to the value from the order bounds.
    pub fn new(source: &ManifoldModel, target: &ManifoldModel, l: u32, k: Option<u32>, seed: u64) -> Result<Self> {
        let nf = normal_coordinates(source)?;
        let (n, d) = (source.n, source.d);
        let big_n = n + d;
        let s = d + 1;
        let r = 2 * s as u32 * l;
        let k = match k {
            Some(k) => k,
            None => {
                let h = hoermander_numbers(source, source.kappa.saturating_sub(1).max(1))?;
                if !h.finite_type {
                    return Err(ReflectionError::Budget("finite type not reached within the truncation budget".into()));
                }
                let mu: Vec<u64> = h.mu.iter().map(|&x| x as u64).collect();
                u32::try_from(bounds(d as u64, l as u64, &mu).k).map_err(|_| ReflectionError::Budget("k overflows".into()))?
            }
        };
        let chain = segre_chain(&nf, 2 * s)?;
        let vmap = build_v(&chain, seed)?;
        let delta = delta_and_eta0(&vmap, None)?;
        let m = delta.m;
        if k <= r {
            return Err(ReflectionError::Budget(format!("k = {k} must exceed r = {r}")));
        }
        let a = (k - r) / (m + 1);
        if a == 0 {
            return Err(ReflectionError::Budget(format!("k = {k} gives guaranteed order 0 (r = {r}, m = {m})")));
        }
        let order = (m + 1) * a;

        // The chain arguments and V along η = λη₀.
        let mut names = vec!["lam".to_string()];
        names.extend((1..=big_n).map(|k| format!("xi1_{k}")));
        let line = var_names(&names);
        let h = vmap.eta_count();
        let lam = TruncSeries::var(&line, EXACT, 0);
        let mut to_line: Vec<TruncSeries> = delta.eta0.iter().map(|&e| lam.scale(&GaussRational::real(e))).collect();
        to_line.extend((0..h).map(|_| TruncSeries::zero(&line, EXACT)));
        for k in 0..big_n {
            to_line[vmap.xi1_var(k)] = TruncSeries::var(&line, EXACT, 1 + k);
        }
        let v_line: Vec<TruncSeries> = vmap.v.iter().map(|c| c.compose(&to_line)).collect::<std::result::Result<_, _>>()?;
        let inv = lemma(&line, &v_line, 1, big_n, order + m)?;
        let delta_hat = inv.delta.embed(&var_names(&["lam"]), &vec![0; 1 + big_n]).truncate(order + m);
        let (c, lam_of_mu) = normalize_parameter(&delta_hat, m, order)?;

        let mut names = vec!["mu".to_string()];
        names.extend((1..=big_n).map(|k| format!("zt{k}")));
        let line_vars = var_names(&names);
        let mut on_line: Vec<TruncSeries> = vec![lam_of_mu.embed(&line_vars, &[0])];
        on_line.extend(inv.phi.iter().map(|p| p.embed(&line_vars, &(0..1 + big_n).collect::<Vec<_>>())));
        let g = Grading::new(vec![(0..1 + big_n, order)]);
        let phi_mu: Vec<Arg<GaussRational>> = on_line.iter().map(|p| Arg::Series(g.subst(p, &line_vars, &[Arg::Series(on_line[0].clone())].into_iter().chain((1..=big_n).map(Arg::Var)).collect::<Vec<_>>()))).collect();
        let args_line: Vec<TruncSeries> = vmap.chain_arguments().iter().map(|t| t.compose(&to_line)).collect::<std::result::Result<_, _>>()?;
        let subst: Vec<TruncSeries> = args_line.iter().map(|t| g.subst(t, &line_vars, &phi_mu)).collect();

        let np = target.big_n();
        let side = Side::new(&nf, &target.rho, np)?;
        let to_new = invert_coordinates(&nf.to_old, &nf.model.vars, big_n, order)?;
        let kernel = Kernel { side, points: chain.v.clone(), subst, c, to_old: nf.to_old.clone(), to_new };
        Ok(Self { nf, target: target.clone(), l, r, k, s, m, guaranteed_order: a, delta, chain_vars: chain.vars, line_vars, kernel })
    }

    pub fn big_n(&self) -> usize {
        self.nf.model.big_n()
    }

    pub fn np(&self) -> usize {
        self.target.big_n()
    }

    /// Total degree bound on the chain ring and the line ring.
    pub fn span(&self) -> u32 {
        (self.m + 1) * self.guaranteed_order
    }

    pub fn summary(&self) -> SetupSummary {
        SetupSummary {
            l: self.l,
            r: self.r,
            k: self.k,
            s: self.s,
            m: self.m,
            guaranteed_order: self.guaranteed_order,
            eta0: self.delta.eta0.clone(),
            scaling_constant: self.kernel.c.clone(),
        }
    }
}

/// `T⁻¹` for a coordinate change `T` given on the model ring.
fn invert_coordinates(t: &[TruncSeries], vars: &Vars, big_n: usize, order: u32) -> Result<Vec<TruncSeries>> {
    let ring_names: Vec<String> = (0..big_n).map(|k| format!("x{k}")).chain((0..big_n).map(|k| format!("y{k}"))).collect();
    let ring = var_names(&ring_names);
    let map: Vec<usize> = (0..vars.len()).map(|k| if k < big_n { big_n + k } else { 0 }).collect();
    let f: Vec<TruncSeries> = t
        .iter()
        .enumerate()
        .map(|(k, c)| c.truncate(order).embed(&ring, &map).try_sub(&TruncSeries::var(&ring, EXACT, k)))
        .collect::<std::result::Result<_, _>>()?;
    let unknowns: Vec<usize> = (big_n..2 * big_n).collect();
    let sol = solve_implicit(&f, &unknowns, order)?;
    let back: Vec<usize> = (0..2 * big_n).map(|k| if k < big_n { k } else { 0 }).collect();
    Ok(sol.iter().map(|s| s.embed(vars, &back)).collect())
}

/// Compose holomorphic series on the model ring with `coords` (values for
/// the first `big_n` variables), keeping degrees `≤ order`.
fn change_coordinates<C: Coeff>(f: &[TruncSeries<C>], coords: &[TruncSeries<C>], big_n: usize, order: u32) -> Vec<TruncSeries<C>> {
    let vars = f[0].vars().clone();
    let g = Grading::new(vec![(0..vars.len(), order)]);
    let args: Vec<Arg<C>> = (0..vars.len()).map(|k| if k < big_n { Arg::Series(g.clip(&coords[k])) } else { Arg::Zero }).collect();
    f.iter().map(|s| g.subst(&g.clip(s), &vars, &args)).collect()
}

/// The jet in normal coordinates, on the ring `e1..eN`.
pub fn normal_jet<C: Coeff>(setup: &Setup, kernel: &Kernel<C>, f: &[TruncSeries<C>]) -> Vec<TruncSeries<C>> {
    let big_n = setup.big_n();
    let in_normal = change_coordinates(f, &kernel.to_old, big_n, setup.r);
    let vars = jet_ring(&var_names::<&str>(&[]), big_n);
    jet_in(&in_normal, big_n, &vars, 0, setup.r)
}

/// `F(v^{2s}(t))` on the chain ring, from the `r`-jet of `F` at the base
/// point (normal coordinates, ring `e1..eN`).
pub fn iterate_reflection<C: Coeff>(setup: &Setup, kernel: &Kernel<C>, jet: &[TruncSeries<C>]) -> Result<Vec<TruncSeries<C>>> {
    let n = setup.nf.model.n;
    let big_n = setup.big_n();
    let conj = kernel.side.conj();
    let span = setup.span();
    let mut known = jet.to_vec();
    for j in 1..=2 * setup.s {
        let base = var_names(&setup.chain_vars.iter().take(j * n).collect::<Vec<_>>());
        let vars = jet_ring(&base, big_n);
        let prev = (j - 1) * n;
        let lift: Vec<usize> = (0..prev + big_n).map(|k| if k < prev { k } else { k + n }).collect();
        known = known.iter().map(|s| s.embed(&vars, &lift)).collect();
        let to_base: Vec<usize> = (0..setup.chain_vars.len()).map(|k| if k < j * n { k } else { 0 }).collect();
        let point = |i: usize| -> Vec<TruncSeries<C>> { kernel.points[i].iter().map(|s| s.embed(&base, &to_base)).collect() };
        let tau = setup.r - j as u32 * setup.l;
        let side = if j % 2 == 1 { &kernel.side } else { &conj };
        known = reflect_step(side, &base, &[(0..j * n, span)], &point(j - 1), &point(j), &known, tau, setup.l)?;
    }
    let total = setup.chain_vars.len();
    let map: Vec<usize> = (0..total + big_n).map(|k| k.min(total - 1)).collect();
    Ok(known.iter().map(|s| s.embed(&setup.chain_vars, &map)).collect())
}

/// `Ψ̌(μ, Z̃)`: the iterated form along the normalized line through the
/// inverse of `V`.
pub fn singular_parametrization<C: Coeff>(setup: &Setup, kernel: &Kernel<C>, iterated: &[TruncSeries<C>]) -> Vec<TruncSeries<C>> {
    let g = Grading::new(vec![(0..setup.line_vars.len(), setup.span())]);
    let args: Vec<Arg<C>> = kernel.subst.iter().cloned().map(Arg::Series).collect();
    iterated.iter().map(|s| g.subst(s, &setup.line_vars, &args)).collect()
}

/// `Ψᵏ` from `Ψ̌`: the `μ⁰` Laurent coefficient after `Z̃ = Z/(c·μ^m)`,
/// moved back to the source coordinates.
pub fn extract_psi<C: Coeff>(setup: &Setup, kernel: &Kernel<C>, check: &[TruncSeries<C>]) -> Result<Vec<TruncSeries<C>>> {
    let big_n = setup.big_n();
    let a = setup.guaranteed_order;
    let c_inv = kernel.c.inv().expect("nonzero scaling constant");
    let vars = &setup.nf.model.vars;
    let map: Vec<usize> = (0..big_n).collect();
    let mut out = Vec::new();
    for s in check {
        let c0 = laurent_c0(&s.truncate(setup.span()), setup.m)?;
        let scaled = TruncSeries::from_terms(c0.vars(), EXACT, c0.terms().map(|(mono, x)| (*mono, x.mul(&c_inv.pow(mono.degree())))));
        out.push(scaled.truncate(a).with_order(a).embed(vars, &map));
    }
    Ok(change_coordinates(&out, &kernel.to_new, big_n, a).into_iter().map(|s| s.with_order(a)).collect())
}

/// `Ψᵏ` evaluated at a jet, with its guaranteed order.
#[derive(Clone, Debug)]
pub struct Parametrization<C: Coeff = GaussRational> {
    pub psi: Vec<TruncSeries<C>>,
    pub guaranteed_order: u32,
    pub m: u32,
    pub r: u32,
    pub k: u32,
}

/// The whole pipeline for one jet of the map on the source ring.
pub fn parametrize<C: Coeff>(setup: &Setup, kernel: &Kernel<C>, f: &[TruncSeries<C>]) -> Result<Parametrization<C>> {
    let jet = normal_jet(setup, kernel, f);
    let iterated = iterate_reflection(setup, kernel, &jet)?;
    let check = singular_parametrization(setup, kernel, &iterated);
    let psi = extract_psi(setup, kernel, &check)?;
    Ok(Parametrization { psi, guaranteed_order: setup.guaranteed_order, m: setup.m, r: setup.r, k: setup.k })
}

pub fn parametrize_jet(setup: &Setup, jet: &MapJet) -> Result<Parametrization> {
    parametrize(setup, &setup.kernel, &jet.f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::parse_model;
    use crate::series::Monomial;

    const Q: &str = "model \"q\" { ambient 2; codim 1; im w = z*conj(z); }";

    fn uni(terms: &[(u32, i64, i64)]) -> TruncSeries {
        let v = var_names(&["lam"]);
        TruncSeries::from_terms(&v, EXACT, terms.iter().map(|&(e, a, b)| (Monomial::var(0, e), GaussRational::rational(a, b))))
    }

    #[test]
    fn square_root_normalization() {
        let order = 6;
        let (c, lam) = normalize_parameter(&uni(&[(2, 1, 1), (3, 1, 1)]), 2, order).unwrap();
        assert_eq!(c, GaussRational::real(1));
        // μ = λ(1 + λ)^{1/2} with the binomial coefficients of the square root.
        let sqrt = [(0, 1, 1), (1, 1, 2), (2, -1, 8), (3, 1, 16), (4, -5, 128), (5, 7, 256)];
        let mu_of_lam = uni(&sqrt.iter().map(|&(e, a, b)| (e + 1, a, b)).collect::<Vec<_>>());
        let back = mu_of_lam.compose(&[lam.clone()]).unwrap().truncate(order);
        assert!(back.try_sub(&TruncSeries::var(lam.vars(), EXACT, 0)).unwrap().is_zero(), "{back}");
        let d = uni(&[(2, 1, 1), (3, 1, 1)]).compose(&[lam.clone()]).unwrap().truncate(order + 1);
        assert!(d.try_sub(&TruncSeries::var(lam.vars(), EXACT, 0).pow(2)).unwrap().is_zero(), "{d}");
    }

    #[test]
    fn monomial_needs_no_reparametrization() {
        let (c, lam) = normalize_parameter(&uni(&[(3, 5, 2)]), 3, 5).unwrap();
        assert_eq!(c, GaussRational::rational(5, 2));
        assert!(lam.try_sub(&TruncSeries::var(lam.vars(), EXACT, 0)).unwrap().is_zero());
    }

    fn poly(m: &ManifoldModel, terms: &[(&[u32], GaussRational)]) -> TruncSeries {
        TruncSeries::from_terms(&m.vars, EXACT, terms.iter().map(|(e, c)| (Monomial::from_exps(e), c.clone())))
    }

    #[test]
    fn quadric_reproduces_automorphisms() {
        let m = parse_model(Q, 8).unwrap();
        let setup = Setup::new(&m, &m, 1, Some(10), 7).unwrap();
        assert_eq!((setup.m, setup.r, setup.guaranteed_order), (2, 4, 2));
        let r = GaussRational::rational;
        let dil = vec![poly(&m, &[(&[1, 0], r(3, 2))]), poly(&m, &[(&[0, 1], r(9, 4))])];
        let p = parametrize(&setup, &setup.kernel, &dil).unwrap();
        for (a, b) in p.psi.iter().zip(&dil) {
            assert_eq!(a, &b.clone().with_order(2));
        }
    }

    #[test]
    fn identity_iterates_to_the_chain_end() {
        let m = parse_model(Q, 8).unwrap();
        let setup = Setup::new(&m, &m, 1, Some(10), 7).unwrap();
        let one = GaussRational::real(1);
        let id = vec![poly(&m, &[(&[1, 0], one.clone())]), poly(&m, &[(&[0, 1], one)])];
        let jet = normal_jet(&setup, &setup.kernel, &id);
        let out = iterate_reflection(&setup, &setup.kernel, &jet).unwrap();
        let end = &setup.kernel.points[4];
        for (a, b) in out.iter().zip(end) {
            assert!(a.try_sub(&b.truncate(setup.span())).unwrap().is_zero());
        }
        // Palindromic arguments return to the anchor's value.
        let t = |k: usize| TruncSeries::var(&setup.chain_vars, EXACT, k);
        let zero = TruncSeries::zero(&setup.chain_vars, EXACT);
        let args = vec![t(0), t(1), t(0), zero];
        assert!(out.iter().all(|c| c.compose(&args).unwrap().is_zero()));
    }

    #[test]
    fn codimension_two_completes() {
        let m = parse_model("model \"c\" { ambient 3; codim 2; im w1 = z*conj(z); im w2 = z*conj(z)*(z + conj(z)); }", 8).unwrap();
        let setup = Setup::new(&m, &m, 1, Some(13), 7).unwrap();
        assert_eq!((setup.m, setup.r, setup.s, setup.guaranteed_order), (6, 6, 3, 1));
        let one = GaussRational::real(1);
        let id = vec![poly(&m, &[(&[1, 0, 0], one.clone())]), poly(&m, &[(&[0, 1, 0], one.clone())]), poly(&m, &[(&[0, 0, 1], one)])];
        let p = parametrize(&setup, &setup.kernel, &id).unwrap();
        for (a, b) in p.psi.iter().zip(&id) {
            assert!(a.try_sub(b).unwrap().is_zero(), "{a}");
        }
    }

    #[test]
    fn degenerate_jet_stops_the_iteration() {
        let m = parse_model(Q, 8).unwrap();
        let setup = Setup::new(&m, &m, 1, Some(10), 7).unwrap();
        let flat = vec![TruncSeries::zero(&m.vars, EXACT), poly(&m, &[(&[0, 1], GaussRational::real(1))])];
        let err = parametrize(&setup, &setup.kernel, &flat).unwrap_err();
        assert!(matches!(err, ReflectionError::SpanDeficient(_)));
    }

    #[test]
    fn guaranteed_order_from_the_bounds() {
        let m = parse_model(Q, 8).unwrap();
        let setup = Setup::new(&m, &m, 1, None, 7).unwrap();
        assert_eq!((setup.k, setup.r, setup.m, setup.guaranteed_order), (19, 4, 2, 5));
    }
}
