//! Arithmetic modulo a monomial ideal given by separate degree bounds on
//! groups of variables. Variables outside every group are unbounded.

use std::collections::HashMap;
use std::ops::Range;

use crate::series::{Coeff, Monomial, TruncSeries, Vars, EXACT};

#[derive(Clone, Debug)]
pub struct Grading {
    groups: Vec<(Range<usize>, u32)>,
}

/// Argument of a substitution: keep as a target variable, replace by a
/// series, or send to zero.
#[derive(Clone, Debug)]
pub enum Arg<C: Coeff> {
    Var(usize),
    Series(TruncSeries<C>),
    Zero,
}

impl Grading {
    pub fn new(groups: Vec<(Range<usize>, u32)>) -> Self {
        Self { groups }
    }

    /// Largest total degree of a surviving monomial in the bounded groups.
    pub fn span(&self) -> u32 {
        self.groups.iter().map(|g| g.1).sum()
    }

    fn degrees(&self, m: &Monomial) -> [u32; 4] {
        let mut out = [0; 4];
        for (k, (r, _)) in self.groups.iter().enumerate() {
            out[k] = m.partial_degree(r.clone());
        }
        out
    }

    pub fn keeps(&self, m: &Monomial) -> bool {
        let d = self.degrees(m);
        self.groups.iter().enumerate().all(|(k, g)| d[k] <= g.1)
    }

    pub fn clip<C: Coeff>(&self, s: &TruncSeries<C>) -> TruncSeries<C> {
        TruncSeries::from_terms(s.vars(), EXACT, s.terms().filter(|(m, _)| self.keeps(m)).map(|(m, c)| (*m, c.clone())))
    }

    pub fn mul<C: Coeff>(&self, a: &TruncSeries<C>, b: &TruncSeries<C>) -> TruncSeries<C> {
        assert!(self.groups.len() <= 4);
        let prep = |s: &TruncSeries<C>| {
            let mut v: Vec<(Monomial, C, [u32; 4])> = s.terms().map(|(m, c)| (*m, c.clone(), self.degrees(m))).collect();
            v.sort_by_key(|t| t.2[0]);
            v
        };
        let (ta, tb) = (prep(a), prep(b));
        let first = self.groups.first().map_or(u32::MAX, |g| g.1);
        let mut acc: HashMap<Monomial, C> = HashMap::new();
        for (ma, ca, da) in &ta {
            if da[0] > first {
                break;
            }
            'inner: for (mb, cb, db) in &tb {
                if da[0] + db[0] > first {
                    break;
                }
                for k in 1..self.groups.len() {
                    if da[k] + db[k] > self.groups[k].1 {
                        continue 'inner;
                    }
                }
                let p = ca.mul(cb);
                acc.entry(ma.mul(mb)).and_modify(|v| v.add_assign(&p)).or_insert(p);
            }
        }
        TruncSeries::from_terms(a.vars(), EXACT, acc.into_iter().filter(|(_, c)| !c.is_zero()))
    }

    /// `f(args)` on the ring `target`; variable `v` of `f` becomes `args[v]`.
    pub fn subst<C: Coeff>(&self, f: &TruncSeries<C>, target: &Vars, args: &[Arg<C>]) -> TruncSeries<C> {
        assert_eq!(args.len(), f.nvars());
        let series_vars: Vec<usize> = (0..args.len()).filter(|&v| matches!(args[v], Arg::Series(_))).collect();
        let mut groups: HashMap<Vec<u32>, Vec<(Monomial, C)>> = HashMap::new();
        'terms: for (m, c) in f.terms() {
            let mut exps = vec![0u32; target.len()];
            for (v, a) in args.iter().enumerate() {
                let e = m.exp(v);
                if e == 0 {
                    continue;
                }
                match a {
                    Arg::Var(t) => exps[*t] += e,
                    Arg::Zero => continue 'terms,
                    Arg::Series(_) => {}
                }
            }
            let mono = Monomial::from_exps(&exps);
            if !self.keeps(&mono) {
                continue;
            }
            let key: Vec<u32> = series_vars.iter().map(|&v| m.exp(v)).collect();
            groups.entry(key).or_default().push((mono, c.clone()));
        }
        let mut powers: Vec<Vec<TruncSeries<C>>> = series_vars
            .iter()
            .map(|&v| match &args[v] {
                Arg::Series(s) => vec![TruncSeries::one(target, EXACT), self.clip(s)],
                _ => unreachable!(),
            })
            .collect();
        let mut keys: Vec<Vec<u32>> = groups.keys().cloned().collect();
        keys.sort();
        let mut out: HashMap<Monomial, C> = HashMap::new();
        for key in keys {
            let coef = TruncSeries::from_terms(target, EXACT, groups.remove(&key).unwrap());
            let mut t = coef;
            for (k, &e) in key.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[k].len() <= e as usize {
                    let next = self.mul(powers[k].last().unwrap(), &powers[k][1]);
                    powers[k].push(next);
                }
                t = self.mul(&t, &powers[k][e as usize]);
                if t.is_zero() {
                    break;
                }
            }
            for (m, c) in t.terms() {
                out.entry(*m).and_modify(|v| v.add_assign(c)).or_insert_with(|| c.clone());
            }
        }
        TruncSeries::from_terms(target, EXACT, out.into_iter().filter(|(_, c)| !c.is_zero()))
    }

    /// Inverse of a series with invertible constant term.
    pub fn recip<C: Coeff>(&self, u: &TruncSeries<C>) -> Option<TruncSeries<C>> {
        let inv0 = u.constant_term().inv()?;
        let vars = u.vars();
        let one = TruncSeries::one(vars, EXACT);
        let mut r = TruncSeries::constant(vars, EXACT, inv0);
        let mut correct = 0u32;
        while correct <= self.span() {
            let e = one.try_sub(&self.mul(u, &r)).ok()?;
            r = r.try_add(&self.mul(&r, &e)).ok()?;
            correct = 2 * correct + 1;
        }
        Some(r)
    }

    /// Inverse of a small square matrix of series with invertible constant
    /// part, by cofactors.
    pub fn invert<C: Coeff>(&self, a: &[Vec<TruncSeries<C>>]) -> Option<Vec<Vec<TruncSeries<C>>>> {
        let n = a.len();
        let det = self.det(a);
        let inv = self.recip(&det)?;
        let mut out = vec![Vec::with_capacity(n); n];
        for (i, row) in out.iter_mut().enumerate() {
            for j in 0..n {
                let minor: Vec<Vec<TruncSeries<C>>> = (0..n)
                    .filter(|&r| r != j)
                    .map(|r| (0..n).filter(|&c| c != i).map(|c| a[r][c].clone()).collect())
                    .collect();
                let m = if n == 1 { TruncSeries::one(det.vars(), EXACT) } else { self.det(&minor) };
                let m = self.mul(&m, &inv);
                row.push(if (i + j) % 2 == 1 { m.neg() } else { m });
            }
        }
        Some(out)
    }

    fn det<C: Coeff>(&self, a: &[Vec<TruncSeries<C>>]) -> TruncSeries<C> {
        let n = a.len();
        if n == 1 {
            return a[0][0].clone();
        }
        let mut acc = TruncSeries::zero(a[0][0].vars(), EXACT);
        for j in 0..n {
            if a[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<TruncSeries<C>>> = (1..n).map(|r| (0..n).filter(|&c| c != j).map(|c| a[r][c].clone()).collect()).collect();
            let t = self.mul(&a[0][j], &self.det(&minor));
            acc = if j % 2 == 1 { acc.try_sub(&t) } else { acc.try_add(&t) }.expect("same ring");
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{var_names, GaussRational};

    fn ring() -> Vars {
        var_names(&["a", "b", "c"])
    }

    #[test]
    fn box_product_drops_exactly_the_ideal() {
        let v = ring();
        let g = Grading::new(vec![(0..2, 3), (2..3, 1)]);
        let s: TruncSeries = TruncSeries::var(&v, EXACT, 0).try_add(&TruncSeries::var(&v, EXACT, 2)).unwrap().try_add(&TruncSeries::one(&v, EXACT)).unwrap();
        let p = g.mul(&g.mul(&s, &s), &g.mul(&s, &s));
        let full = s.pow(4);
        for (m, c) in full.terms() {
            let want = if g.keeps(m) { c.clone() } else { GaussRational::zero() };
            assert_eq!(p.coeff(m), want);
        }
    }

    #[test]
    fn recip_inverts_modulo_the_box() {
        let v = ring();
        let g = Grading::new(vec![(0..1, 6), (1..3, 2)]);
        let u = TruncSeries::from_terms(
            &v,
            EXACT,
            [
                (Monomial::from_exps(&[0, 0, 0]), GaussRational::real(2)),
                (Monomial::from_exps(&[1, 0, 0]), GaussRational::real(1)),
                (Monomial::from_exps(&[0, 1, 1]), GaussRational::from_parts(0, 1, 3, 1)),
            ],
        );
        let r = g.recip(&u).unwrap();
        assert_eq!(g.mul(&u, &r), TruncSeries::one(&v, EXACT));
    }

    #[test]
    fn subst_matches_compose_inside_the_box() {
        let v = ring();
        let g = Grading::new(vec![(0..3, 5)]);
        let x = |k| TruncSeries::<GaussRational>::var(&v, EXACT, k);
        let f = x(0).try_mul(&x(1)).unwrap().try_add(&x(2).pow(3)).unwrap();
        let a = x(0).try_add(&x(1).pow(2)).unwrap();
        let got = g.subst(&f, &v, &[Arg::Series(a.clone()), Arg::Var(1), Arg::Zero]);
        let want = f.compose(&[a, x(1), TruncSeries::zero(&v, EXACT)]).unwrap();
        assert_eq!(got, g.clip(&want));
    }
}
