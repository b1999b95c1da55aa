use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use super::coeff::{Coeff, GaussRational};
use super::monomial::{Monomial, MAX_VARS};
use super::{Result, SeriesError, VanishingOrder};

/// Order value marking an exact polynomial (no truncation tail).
pub const EXACT: u32 = u32::MAX / 4;

/// Shared, ordered list of variable names.
pub type Vars = Arc<[String]>;

/// Build a variable list from names.
pub fn var_names<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

/// A multivariate power series known exactly up to total degree `order`.
///
/// Terms of degree greater than `order` are never stored. An order of
/// [`EXACT`] means the stored polynomial is the whole function.
#[derive(Clone, PartialEq)]
pub struct TruncSeries<C = GaussRational> {
    vars: Vars,
    order: u32,
    terms: BTreeMap<Monomial, C>,
}

fn same_vars(a: &Vars, b: &Vars) -> bool {
    Arc::ptr_eq(a, b) || a[..] == b[..]
}

impl<C: Coeff> TruncSeries<C> {
    pub fn zero(vars: &Vars, order: u32) -> Self {
        assert!(vars.len() <= MAX_VARS, "at most {MAX_VARS} variables");
        Self {
            vars: vars.clone(),
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, order: u32, c: C) -> Self {
        let mut s = Self::zero(vars, order);
        if !c.is_zero() {
            s.terms.insert(Monomial::ONE, c);
        }
        s
    }

    pub fn one(vars: &Vars, order: u32) -> Self {
        Self::constant(vars, order, C::one())
    }

    /// The coordinate function `vars[i]`.
    pub fn var(vars: &Vars, order: u32, i: usize) -> Self {
        assert!(i < vars.len());
        let mut s = Self::zero(vars, order);
        if order >= 1 {
            s.terms.insert(Monomial::var(i, 1), C::one());
        }
        s
    }

    pub fn monomial(vars: &Vars, order: u32, m: Monomial, c: C) -> Self {
        let mut s = Self::zero(vars, order);
        if m.degree() <= order && !c.is_zero() {
            s.terms.insert(m, c);
        }
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(vars: &Vars, order: u32, terms: I) -> Self {
        let mut s = Self::zero(vars, order);
        for (m, c) in terms {
            s.add_term(m, &c);
        }
        s
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order >= EXACT
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeff_of(&self, exps: &[u32]) -> C {
        self.coeff(&Monomial::from_exps(exps))
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Monomial::ONE)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest degree carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Add `c·m` in place, dropping the term if it exceeds the order.
    pub fn add_term(&mut self, m: Monomial, c: &C) {
        if m.degree() > self.order || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                v.add_assign(c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn check_vars(&self, o: &Self) -> Result<()> {
        if same_vars(&self.vars, &o.vars) {
            Ok(())
        } else {
            Err(SeriesError::VarMismatch(self.vars.to_vec(), o.vars.to_vec()))
        }
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| SeriesError::UnknownVar(name.to_string()))
    }

    /// Drop every term above `order` and record the new order.
    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        Self {
            vars: self.vars.clone(),
            order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= order)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Reinterpret with a different order bound. Raising the order is only
    /// sound when the caller knows the stored terms are complete up to it.
    pub fn with_order(mut self, order: u32) -> Self {
        self.order = order;
        self.terms.retain(|m, _| m.degree() <= order);
        self
    }

    pub fn homogeneous_part(&self, deg: u32) -> Self {
        Self {
            vars: self.vars.clone(),
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == deg)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_vars(o)?;
        let order = self.order.min(o.order);
        let mut out = self.truncate(order);
        for (m, c) in &o.terms {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.check_vars(o)?;
        let order = self.order.min(o.order);
        let mut out = self.truncate(order);
        for (m, c) in &o.terms {
            out.add_term(*m, &c.neg());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero(&self.vars, self.order);
        }
        self.map_coeffs(|c| c.mul(k))
    }

    pub fn map_coeffs<F: Fn(&C) -> C>(&self, f: F) -> Self {
        let mut out = Self::zero(&self.vars, self.order);
        for (m, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                out.terms.insert(*m, v);
            }
        }
        out
    }

    /// Convert the coefficient field.
    pub fn convert<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> TruncSeries<D> {
        let mut out = TruncSeries::<D>::zero(&self.vars, self.order);
        for (m, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                out.terms.insert(*m, v);
            }
        }
        out
    }

    pub fn conj_coeffs(&self) -> Self {
        self.map_coeffs(|c| c.conj())
    }

    /// Truncated Cauchy product.
    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check_vars(o)?;
        let order = self.order.min(o.order);
        let vb = match o.valuation() {
            Some(v) if self.valuation().is_some() => v,
            _ => return Ok(Self::zero(&self.vars, order)),
        };
        let mut acc: HashMap<Monomial, C> = HashMap::new();
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da + vb > order {
                break;
            }
            for (mb, cb) in &o.terms {
                if da + mb.degree() > order {
                    break;
                }
                let p = ca.mul(cb);
                match acc.get_mut(&ma.mul(mb)) {
                    Some(v) => v.add_assign(&p),
                    None => {
                        acc.insert(ma.mul(mb), p);
                    }
                }
            }
        }
        let mut out = Self::zero(&self.vars, order);
        out.terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.vars, self.order);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base).expect("same vars");
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base).expect("same vars");
            }
        }
        acc
    }

    /// Formal partial derivative; the order drops by one.
    pub fn differentiate(&self, var: usize) -> Result<Self> {
        if var >= self.nvars() {
            return Err(SeriesError::UnknownVar(format!("#{var}")));
        }
        let order = if self.is_exact() {
            EXACT
        } else if self.order == 0 {
            return Err(SeriesError::Truncation("derivative of an order-0 series is undetermined".into()));
        } else {
            self.order - 1
        };
        let mut out = Self::zero(&self.vars, order);
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e > 0 {
                let lowered = m.lower(var).expect("exponent positive");
                out.add_term(lowered, &c.mul(&C::from_i64(e as i64)));
            }
        }
        Ok(out)
    }

    pub fn differentiate_by(&self, name: &str) -> Result<Self> {
        self.differentiate(self.var_index(name)?)
    }

    /// Multiply by `vars[var]` (order rises by one unless exact).
    pub fn mul_var(&self, var: usize) -> Self {
        let order = if self.is_exact() { EXACT } else { self.order + 1 };
        let mut out = Self::zero(&self.vars, order);
        let x = Monomial::var(var, 1);
        for (m, c) in &self.terms {
            out.terms.insert(m.mul(&x), c.clone());
        }
        out
    }

    /// Evaluate the stored polynomial at a point.
    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars());
        let mut powers: Vec<Vec<C>> = point.iter().map(|p| vec![C::one(), p.clone()]).collect();
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, pw) in powers.iter_mut().enumerate() {
                let e = m.exp(v) as usize;
                if e == 0 {
                    continue;
                }
                while pw.len() <= e {
                    let next = pw[pw.len() - 1].mul(&point[v]);
                    pw.push(next);
                }
                t = t.mul(&pw[e]);
            }
            acc.add_assign(&t);
        }
        acc
    }

    /// Compose with `args` (one series per variable, all in a common target
    /// ring).
    ///
    /// Order rule: with `v >= 1` the least valuation among the arguments that
    /// actually occur, the unknown tail of `self` starts in degree
    /// `(self.order + 1)·v`, and an error of an argument above its order `o`
    /// only reaches degree `o + 1`. The result order is the minimum of
    /// `(self.order + 1)·v - 1` and the argument orders. Arguments with a
    /// nonzero constant term are only accepted when `self` is exact.
    pub fn compose(&self, args: &[TruncSeries<C>]) -> Result<TruncSeries<C>> {
        assert_eq!(args.len(), self.nvars(), "one argument per variable");
        let target = args
            .first()
            .map(|a| a.vars.clone())
            .ok_or_else(|| SeriesError::Precondition("compose needs at least one argument".into()))?;
        for a in args {
            if !same_vars(&a.vars, &target) {
                return Err(SeriesError::VarMismatch(target.to_vec(), a.vars.to_vec()));
            }
        }
        let used: Vec<bool> = (0..self.nvars())
            .map(|v| self.terms.keys().any(|m| m.exp(v) > 0))
            .collect();
        let mut min_val = u32::MAX;
        let mut order = EXACT;
        for (v, a) in args.iter().enumerate() {
            if !used[v] {
                continue;
            }
            let val = a.valuation().unwrap_or(a.order.saturating_add(1));
            if val == 0 && !self.is_exact() {
                return Err(SeriesError::NonzeroConstant);
            }
            min_val = min_val.min(val);
            order = order.min(a.order);
        }
        if !self.is_exact() {
            let v = if min_val == u32::MAX { 1 } else { min_val.max(1) };
            let tail = (self.order as u64 + 1) * v as u64 - 1;
            order = order.min(tail.min(EXACT as u64) as u32);
        }
        let mut out = TruncSeries::<C>::zero(&target, order);
        let mut powers: Vec<Vec<TruncSeries<C>>> = args
            .iter()
            .map(|a| vec![TruncSeries::one(&target, order), a.truncate(order)])
            .collect();
        for (m, c) in &self.terms {
            let mut t = TruncSeries::constant(&target, order, c.clone());
            for v in 0..self.nvars() {
                let e = m.exp(v) as usize;
                if e == 0 {
                    continue;
                }
                while powers[v].len() <= e {
                    let last = powers[v].last().unwrap().try_mul(&powers[v][1])?.truncate(order);
                    powers[v].push(last);
                }
                t = t.try_mul(&powers[v][e])?.truncate(order);
                if t.is_zero() {
                    break;
                }
            }
            for (mm, cc) in t.terms {
                out.add_term(mm, &cc);
            }
        }
        Ok(out)
    }

    /// Replace the listed variables and keep the others.
    pub fn substitute(&self, assignment: &[(usize, TruncSeries<C>)]) -> Result<Self> {
        let mut args: Vec<TruncSeries<C>> = (0..self.nvars())
            .map(|v| TruncSeries::var(&self.vars, EXACT, v))
            .collect();
        for (v, s) in assignment {
            if *v >= self.nvars() {
                return Err(SeriesError::UnknownVar(format!("#{v}")));
            }
            self.check_vars(s)?;
            args[*v] = s.clone();
        }
        let out = self.compose(&args)?;
        Ok(if out.order > self.order { out.truncate(self.order) } else { out })
    }

    /// Reciprocal of a series with nonzero constant term.
    pub fn recip(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let inv0 = c0.inv().ok_or(SeriesError::NotInvertible)?;
        if self.is_exact() && self.num_terms() == 1 {
            return Ok(Self::constant(&self.vars, EXACT, inv0));
        }
        if self.is_exact() {
            return Err(SeriesError::Truncation(
                "reciprocal of a nonconstant exact polynomial needs a truncation order".into(),
            ));
        }
        self.recip_to(self.order)
    }

    /// Reciprocal computed to the given order (useful for exact inputs).
    pub fn recip_to(&self, order: u32) -> Result<Self> {
        let inv0 = self.constant_term().inv().ok_or(SeriesError::NotInvertible)?;
        let a = self.truncate(order).with_order(order.min(self.order));
        let order = a.order;
        // r_{k+1} = r_k (2 - a r_k), doubling the number of correct degrees.
        let mut r = Self::constant(&self.vars, order, inv0);
        let two = Self::constant(&self.vars, order, C::from_i64(2));
        let mut correct = 0u32;
        while correct < order {
            let ar = a.try_mul(&r)?.truncate(order);
            r = r.try_mul(&two.try_sub(&ar)?)?.truncate(order);
            correct = correct * 2 + 1;
        }
        Ok(r.with_order(order))
    }

    /// Lowest power of `λ` in `self(λ·direction)`.
    pub fn vanishing_order(&self, direction: &[C]) -> VanishingOrder {
        assert_eq!(direction.len(), self.nvars());
        let mut by_degree: BTreeMap<u32, C> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, d) in direction.iter().enumerate() {
                let e = m.exp(v);
                if e > 0 {
                    t = t.mul(&d.pow(e));
                }
            }
            by_degree.entry(m.degree()).or_insert_with(C::zero).add_assign(&t);
        }
        by_degree
            .into_iter()
            .find(|(_, c)| !c.is_zero())
            .map_or(VanishingOrder::BeyondTruncation, |(d, _)| VanishingOrder::Finite(d))
    }

    /// Restrict to the line `λ·direction`, returning a univariate series in `λ`.
    pub fn restrict_to_line(&self, direction: &[C], lambda: &Vars) -> TruncSeries<C> {
        assert_eq!(lambda.len(), 1);
        let mut out = TruncSeries::zero(lambda, self.order);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, d) in direction.iter().enumerate() {
                let e = m.exp(v);
                if e > 0 {
                    t = t.mul(&d.pow(e));
                }
            }
            out.add_term(Monomial::var(0, m.degree()), &t);
        }
        out
    }

    /// Move into a ring with more variables; `map[i]` is the new index of
    /// variable `i`.
    pub fn embed(&self, target: &Vars, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars());
        let mut out = Self::zero(target, self.order);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for (i, &j) in map.iter().enumerate() {
                e[j] += m.exp(i);
            }
            out.terms.insert(Monomial::from_exps(&e), c.clone());
        }
        out
    }

    /// Set the listed variables to zero.
    pub fn set_zero(&self, vars: &[usize]) -> Self {
        let mut out = Self::zero(&self.vars, self.order);
        for (m, c) in &self.terms {
            if vars.iter().all(|&v| m.exp(v) == 0) {
                out.terms.insert(*m, c.clone());
            }
        }
        out
    }

    /// Coefficient series of `x_var^k`, as a series in the same ring.
    pub fn coefficient_in(&self, var: usize, k: u32) -> Self {
        let mut out = Self::zero(&self.vars, self.order.saturating_sub(if self.is_exact() { 0 } else { k }));
        for (m, c) in &self.terms {
            if m.exp(var) == k {
                out.add_term(m.with_exp(var, 0), c);
            }
        }
        out
    }

    /// Maximal absolute coefficient difference (for float checks).
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        let mut worst = 0.0f64;
        for (m, c) in &self.terms {
            worst = worst.max(c.sub(&o.coeff(m)).abs_f64());
        }
        for (m, c) in &o.terms {
            if !self.terms.contains_key(m) {
                worst = worst.max(c.abs_f64());
            }
        }
        worst
    }
}

impl<C: Coeff> fmt::Debug for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<C: Coeff> fmt::Display for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}")?;
            for (v, name) in self.vars.iter().enumerate() {
                match m.exp(v) {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    e => write!(f, "*{name}^{e}")?,
                }
            }
        }
        if self.is_exact() {
            Ok(())
        } else {
            write!(f, " + O({})", self.order + 1)
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $call:ident) => {
        impl<C: Coeff> std::ops::$tr<&TruncSeries<C>> for &TruncSeries<C> {
            type Output = TruncSeries<C>;
            fn $m(self, o: &TruncSeries<C>) -> TruncSeries<C> {
                self.$call(o).expect("series in different rings")
            }
        }
        impl<C: Coeff> std::ops::$tr<TruncSeries<C>> for TruncSeries<C> {
            type Output = TruncSeries<C>;
            fn $m(self, o: TruncSeries<C>) -> TruncSeries<C> {
                self.$call(&o).expect("series in different rings")
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<C: Coeff> std::ops::Neg for &TruncSeries<C> {
    type Output = TruncSeries<C>;
    fn neg(self) -> TruncSeries<C> {
        TruncSeries::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = TruncSeries<GaussRational>;

    fn q(n: i64) -> GaussRational {
        GaussRational::real(n)
    }

    fn ring(names: &[&str]) -> Vars {
        var_names(names)
    }

    #[test]
    fn add_examples() {
        let v = ring(&["z"]);
        let z = S::var(&v, 5, 0);
        assert!((&z + &z.neg()).is_zero());
        let a = &S::one(&v, 2) + &z;
        let b = z.pow(2).truncate(2);
        let s = &a + &b;
        assert_eq!(s.coeff_of(&[0]), q(1));
        assert_eq!(s.coeff_of(&[1]), q(1));
        assert_eq!(s.coeff_of(&[2]), q(1));
        let hi = S::var(&v, 3, 0);
        let lo = S::var(&v, 2, 0);
        assert_eq!((&hi + &lo).order(), 2);
    }

    #[test]
    fn mul_examples() {
        let v = ring(&["z", "w"]);
        let one = S::one(&v, 4);
        let z = S::var(&v, 4, 0);
        let w = S::var(&v, 4, 1);
        let p = &(&one + &z) * &(&one - &z);
        assert_eq!(p, &one - &(&z * &z));
        let z4 = z.pow(4);
        assert!((&z4 * &z).is_zero());
        let s = (&z + &w).pow(2);
        assert_eq!(s.coeff_of(&[1, 1]), q(2));
        assert_eq!(s.coeff_of(&[2, 0]), q(1));
        assert_eq!(s.coeff_of(&[0, 2]), q(1));
    }

    #[test]
    fn differentiate_examples() {
        let v = ring(&["z", "w"]);
        let z = S::var(&v, 6, 0);
        let w = S::var(&v, 6, 1);
        let d = z.pow(3).differentiate(0).unwrap();
        assert_eq!(d.coeff_of(&[2, 0]), q(3));
        assert_eq!(d.order(), 5);
        assert!(S::constant(&v, 6, q(7)).differentiate(0).unwrap().is_zero());
        assert_eq!((&z * &w).differentiate(0).unwrap(), w.truncate(5));
        assert!(z.differentiate(4).is_err());
    }

    #[test]
    fn substitute_examples() {
        let zv = ring(&["z"]);
        let tv = ring(&["t"]);
        let t = S::var(&tv, 3, 0);
        let z2 = S::var(&zv, 3, 0).pow(2);
        let r = z2.compose(&[&t + &t.pow(2)]).unwrap();
        assert_eq!(r.coeff_of(&[2]), q(1));
        assert_eq!(r.coeff_of(&[3]), q(2));
        assert_eq!(r.order(), 3);

        let v = ring(&["z", "w"]);
        let f = &(&S::one(&v, 4) + &S::var(&v, 4, 0)) + &S::var(&v, 4, 1);
        let g = f.substitute(&[(0, S::zero(&v, 4))]).unwrap();
        assert_eq!(g, &S::one(&v, 4) + &S::var(&v, 4, 1));
        let id = f.substitute(&[]).unwrap();
        assert_eq!(id, f);
    }

    #[test]
    fn nonzero_constant_rejected_for_truncated() {
        let v = ring(&["z"]);
        let f = S::var(&v, 3, 0).pow(2);
        let c = S::one(&v, 3);
        assert_eq!(f.compose(&[c.clone()]), Err(SeriesError::NonzeroConstant));
        let exact = S::var(&v, EXACT, 0).pow(2);
        let r = exact.compose(&[&c + &S::var(&v, 3, 0)]).unwrap();
        assert_eq!(r.constant_term(), q(1));
        assert_eq!(r.coeff_of(&[1]), q(2));
    }

    #[test]
    fn reciprocal() {
        let v = ring(&["x"]);
        let one = S::one(&v, 6);
        let x = S::var(&v, 6, 0);
        let r = (&one - &x).recip().unwrap();
        for k in 0..=6 {
            assert_eq!(r.coeff_of(&[k]), q(1));
        }
        assert_eq!(x.recip(), Err(SeriesError::NotInvertible));
    }

    #[test]
    fn vanishing_orders() {
        let v = ring(&["z", "w"]);
        let z = S::var(&v, 5, 0);
        let w = S::var(&v, 5, 1);
        assert_eq!(z.pow(2).vanishing_order(&[q(1), q(0)]), VanishingOrder::Finite(2));
        assert_eq!((&z - &z).vanishing_order(&[q(1), q(1)]), VanishingOrder::BeyondTruncation);
        assert_eq!((&z * &w).vanishing_order(&[q(1), q(0)]), VanishingOrder::BeyondTruncation);
    }
}
