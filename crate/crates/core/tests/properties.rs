mod common;

use proptest::prelude::*;

use common::{g, quadric};
use crjet::cli::analyze;
use crjet::invariants::{finite_nondegeneracy, hoermander_numbers, levi_form};
use crjet::manifold::{normal_coordinates, parse_model};
use crjet::reflection::Setup;
use crjet::series::{
    laurent_c0, linalg, solve_implicit, var_names, Coeff, GaussRational, Monomial, TruncSeries, Vars, EXACT,
};

fn gauss() -> impl Strategy<Value = GaussRational> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(a, b, c, d)| g(a, b, c, d))
}

fn series(vars: Vars, nvars: usize, max_deg: u32, order: u32) -> impl Strategy<Value = TruncSeries> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), gauss()), 0..6).prop_map(move |terms| {
        TruncSeries::from_terms(&vars, order, terms.into_iter().map(|(e, c)| (Monomial::from_exps(&e), c)))
    })
}

fn xy() -> Vars {
    var_names(&["x", "y"])
}

fn same(a: &TruncSeries, b: &TruncSeries) -> bool {
    a.try_sub(b).is_ok_and(|d| d.is_zero())
}

/// `Im w = |z|^{2a} + Re(c z^p z̄^q)`.
#[derive(Clone, Debug)]
struct RealModel {
    a: u32,
    c: GaussRational,
    p: u32,
    q: u32,
}

impl RealModel {
    fn text(&self, z: &str) -> String {
        let (a, p, q) = (self.a, self.p, self.q);
        let c = format!("({} + ({})*i)", self.c.re, self.c.im);
        format!("model \"p\" {{ ambient 2; codim 1; im w = ({z}*conj({z}))^{a} + re({c}*{z}^{p}*conj({z})^{q}); }}")
    }

    fn value(&self, z: &GaussRational) -> GaussRational {
        let lead = z.mul(&z.conj()).pow(self.a);
        let pert = self.c.mul(&z.pow(self.p)).mul(&z.conj().pow(self.q));
        lead.add(&pert.add(&pert.conj()).mul(&GaussRational::rational(1, 2)))
    }
}

fn real_model() -> impl Strategy<Value = RealModel> {
    (1u32..=2, -4i64..=4, -4i64..=4, 1u32..=3, 1u32..=3).prop_map(|(a, cr, ci, p, q)| RealModel { a, c: g(cr, 1, ci, 1), p, q })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in series(xy(), 2, 4, 6), b in series(xy(), 2, 4, 6), c in series(xy(), 2, 4, 5)) {
        let ab = a.try_mul(&b).unwrap();
        prop_assert!(same(&ab, &b.try_mul(&a).unwrap()));
        prop_assert!(same(&ab.try_mul(&c).unwrap(), &a.try_mul(&b.try_mul(&c).unwrap()).unwrap()));
        let left = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
        let right = ab.try_add(&a.try_mul(&c).unwrap()).unwrap();
        prop_assert!(same(&left, &right));
        prop_assert!(same(&a.try_sub(&a).unwrap(), &TruncSeries::zero(&xy(), 6)));
        prop_assert!(same(&a.try_mul(&TruncSeries::one(&xy(), EXACT)).unwrap(), &a));
    }

    #[test]
    fn reciprocal_is_inverse(a in series(xy(), 2, 3, 7), c in gauss()) {
        prop_assume!(!c.is_zero());
        let u = a.try_add(&TruncSeries::constant(&xy(), 7, c)).unwrap();
        prop_assume!(!u.constant_term().is_zero());
        let prod = u.try_mul(&u.recip().unwrap()).unwrap();
        prop_assert!(same(&prod, &TruncSeries::one(&xy(), 7)));
    }

    #[test]
    fn implicit_solution_solves(g1 in series(var_names(&["u", "x", "y"]), 3, 3, 6), lin in gauss()) {
        prop_assume!(!lin.is_zero());
        let vars = var_names(&["u", "x", "y"]);
        // F = lin·u + (terms of g1 of degree ≥ 2) + x − y.
        let mut f = TruncSeries::zero(&vars, 6);
        f.add_term(Monomial::var(0, 1), &lin);
        f.add_term(Monomial::var(1, 1), &GaussRational::real(1));
        f.add_term(Monomial::var(2, 1), &GaussRational::real(-1));
        for (m, c) in g1.terms() {
            if m.degree() >= 2 {
                f.add_term(m.clone(), c);
            }
        }
        let sol = solve_implicit(&[f.clone()], &[0], 6).unwrap();
        let args = vec![sol[0].clone(), TruncSeries::var(&vars, 6, 1), TruncSeries::var(&vars, 6, 2)];
        prop_assert!(f.compose(&args).unwrap().truncate(6).is_zero());
    }

    #[test]
    fn det_is_multiplicative(a in prop::collection::vec(gauss(), 9), b in prop::collection::vec(gauss(), 9)) {
        let m = |v: &[GaussRational]| -> Vec<Vec<GaussRational>> { v.chunks(3).map(|r| r.to_vec()).collect() };
        let (a, b) = (m(&a), m(&b));
        let ab: Vec<Vec<GaussRational>> = (0..3)
            .map(|i| (0..3).map(|j| (0..3).fold(GaussRational::zero(), |acc, k| acc.add(&a[i][k].mul(&b[k][j])))).collect())
            .collect();
        prop_assert_eq!(linalg::det(&ab), linalg::det(&a).mul(&linalg::det(&b)));
    }

    #[test]
    fn laurent_constant_term_is_linear(
        p in series(var_names(&["lam", "t"]), 2, 5, EXACT),
        q in series(var_names(&["lam", "t"]), 2, 5, EXACT),
        c in gauss(),
        m in 1u32..=3,
    ) {
        let lhs = laurent_c0(&p.try_add(&q.scale(&c)).unwrap(), m).unwrap();
        let rhs = laurent_c0(&p, m).unwrap().try_add(&laurent_c0(&q, m).unwrap().scale(&c)).unwrap();
        prop_assert!(same(&lhs, &rhs));
    }

    #[test]
    fn guaranteed_order_is_monotone_in_k(k in 5u32..28) {
        let q = quadric(12);
        let a = Setup::new(&q, &q, 1, Some(k), 7);
        let b = Setup::new(&q, &q, 1, Some(k + 1), 7);
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert!(a.guaranteed_order <= b.guaranteed_order);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn real_models_stay_real(rm in real_model()) {
        let m = parse_model(&rm.text("z"), 7).unwrap();
        prop_assert!(m.check_real().is_ok());
        let nf = normal_coordinates(&m).unwrap();
        prop_assert!(nf.model.check_real().is_ok());
    }

    #[test]
    fn levi_form_is_hermitian(rm in real_model(), p in (-3i64..=3, -3i64..=3), s in -3i64..=3) {
        let m = parse_model(&rm.text("z"), 7).unwrap();
        prop_assert!(levi_form(&m).unwrap().is_hermitian());
        let z = g(p.0, 2, p.1, 3);
        let w = GaussRational::real(s).add(&g(0, 1, 1, 1).mul(&rm.value(&z)));
        let moved = m.translate(&[z, w]).unwrap();
        prop_assert!(levi_form(&moved).unwrap().is_hermitian());
    }

    #[test]
    fn invariants_survive_a_linear_change(rm in real_model(), u in gauss()) {
        prop_assume!(!u.is_zero());
        let m = parse_model(&rm.text("z"), 8).unwrap();
        let m2 = parse_model(&rm.text(&format!("(({}) + ({})*i)*z", u.re, u.im)), 8).unwrap();
        let (h1, h2) = (hoermander_numbers(&m, 7).unwrap(), hoermander_numbers(&m2, 7).unwrap());
        prop_assert_eq!(&h1.mu, &h2.mu);
        prop_assert_eq!(h1.nu, h2.nu);
        prop_assert!(h1.nu.is_some_and(|nu| nu <= 2 * rm.a));
        let (s1, s2) = (finite_nondegeneracy(&m, 4).unwrap(), finite_nondegeneracy(&m2, 4).unwrap());
        prop_assert_eq!(s1.l, s2.l);
        prop_assert_eq!(s1.span_dims, s2.span_dims);
    }

    #[test]
    fn analyze_is_deterministic(rm in real_model()) {
        let text = rm.text("z");
        let a = analyze(&parse_model(&text, 8).unwrap(), 4).unwrap();
        let b = analyze(&parse_model(&text, 8).unwrap(), 4).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
