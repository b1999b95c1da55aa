//! Packed exponent vectors in graded-lexicographic order.

use std::fmt;

/// Maximum number of variables a series may carry.
pub const MAX_VARS: usize = 16;
/// Largest exponent a single variable may carry.
pub const MAX_EXP: u32 = 255;

/// An exponent vector of at most [`MAX_VARS`] entries, one byte each.
///
/// Variable 0 sits in the most significant byte, so comparing `(deg, packed)`
/// is exactly graded-lex order with `x0 > x1 > ...`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    deg: u32,
    packed: u128,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { deg: 0, packed: 0 };

    fn shift(var: usize) -> u32 {
        debug_assert!(var < MAX_VARS);
        8 * (MAX_VARS - 1 - var) as u32
    }

    pub fn from_exps(exps: &[u32]) -> Monomial {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Monomial::ONE;
        for (i, &e) in exps.iter().enumerate() {
            assert!(e <= MAX_EXP, "exponent overflow");
            m.packed |= (e as u128) << Self::shift(i);
            m.deg += e;
        }
        m
    }

    pub fn var(var: usize, exp: u32) -> Monomial {
        assert!(exp <= MAX_EXP);
        Monomial {
            deg: exp,
            packed: (exp as u128) << Self::shift(var),
        }
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    #[inline]
    pub fn exp(&self, var: usize) -> u32 {
        ((self.packed >> Self::shift(var)) & 0xff) as u32
    }

    pub fn exps(&self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exp(i)).collect()
    }

    #[inline]
    pub fn mul(&self, o: &Monomial) -> Monomial {
        debug_assert!(self.exps(MAX_VARS).iter().zip(o.exps(MAX_VARS)).all(|(a, b)| a + b <= MAX_EXP));
        Monomial {
            deg: self.deg + o.deg,
            packed: self.packed + o.packed,
        }
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        for v in 0..MAX_VARS {
            if self.exp(v) < o.exp(v) {
                return None;
            }
        }
        Some(Monomial {
            deg: self.deg - o.deg,
            packed: self.packed - o.packed,
        })
    }

    /// Lower the exponent of `var` by one.
    pub fn lower(&self, var: usize) -> Option<Monomial> {
        if self.exp(var) == 0 {
            None
        } else {
            Some(Monomial {
                deg: self.deg - 1,
                packed: self.packed - (1u128 << Self::shift(var)),
            })
        }
    }

    pub fn with_exp(&self, var: usize, e: u32) -> Monomial {
        let old = self.exp(var);
        let cleared = self.packed & !(0xffu128 << Self::shift(var));
        Monomial {
            deg: self.deg - old + e,
            packed: cleared | ((e as u128) << Self::shift(var)),
        }
    }

    /// Degree restricted to the variables in `range`.
    pub fn partial_degree(&self, range: std::ops::Range<usize>) -> u32 {
        range.map(|v| self.exp(v)).sum()
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let used = (0..MAX_VARS).rev().find(|&v| self.exp(v) > 0).map_or(0, |v| v + 1);
        write!(f, "{:?}", self.exps(used))
    }
}

/// All exponent vectors in `nvars` variables of total degree exactly `deg`,
/// in descending graded-lex order.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = cur.len();
        if n == 0 {
            if left == 0 {
                out.push(Monomial::ONE);
            }
            return;
        }
        if i == n - 1 {
            cur[i] = left;
            out.push(Monomial::from_exps(cur));
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, deg, &mut cur, &mut out);
    out
}

/// All exponent vectors of total degree `<= deg`, ascending graded-lex.
pub fn monomials_up_to(nvars: usize, deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..=deg {
        let mut level = monomials_of_degree(nvars, d);
        level.reverse();
        out.extend(level);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let a = Monomial::from_exps(&[2, 0]);
        let b = Monomial::from_exps(&[1, 1]);
        let c = Monomial::from_exps(&[0, 3]);
        assert!(a > b);
        assert!(c > a);
        assert_eq!(a.mul(&b), Monomial::from_exps(&[3, 1]));
        assert_eq!(a.mul(&b).div(&b), Some(a));
        assert_eq!(b.lower(0), Some(Monomial::from_exps(&[0, 1])));
        assert_eq!(c.lower(0), None);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_up_to(2, 3).len(), 10);
        let v = monomials_up_to(3, 3);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }
}
