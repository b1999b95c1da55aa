//! Small dense linear algebra over coefficient fields and over truncated
//! series rings.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::coeff::{Coeff, GaussRational};
use super::monomial::Monomial;
use super::trunc::{TruncSeries, EXACT};
use super::{Result, SeriesError};

/// Row-major matrix of series.
pub type Matrix<C> = Vec<Vec<TruncSeries<C>>>;

/// Number of random evaluation points used by [`generic_rank`].
pub const GENERIC_RANK_SAMPLES: usize = 5;
/// Bound on numerators and denominators of random sample points.
pub const SAMPLE_BOUND: i64 = 10_000;

/// Rank of a constant matrix by Gaussian elimination.
pub fn rank<C: Coeff>(rows: &[Vec<C>]) -> usize {
    let mut a: Vec<Vec<C>> = rows.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot");
        for i in (r + 1)..nrows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].mul(&inv);
            for j in c..ncols {
                let v = a[i][j].sub(&f.mul(&a[r][j]));
                a[i][j] = v;
            }
        }
        r += 1;
    }
    r
}

/// Rank over `Complex64`-like fields with a tolerance on pivots.
pub fn rank_tol(rows: &[Vec<num_complex::Complex64>], tol: f64) -> usize {
    let mut a = rows.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let (p, best) = (r..nrows)
            .map(|i| (i, a[i][c].norm()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol {
            continue;
        }
        a.swap(r, p);
        let piv = a[r][c];
        for i in (r + 1)..nrows {
            let f = a[i][c] / piv;
            for j in c..ncols {
                let v = a[r][j];
                a[i][j] -= f * v;
            }
        }
        r += 1;
    }
    r
}

/// Inverse of a constant square matrix, `None` when singular.
pub fn invert<C: Coeff>(m: &[Vec<C>]) -> Option<Vec<Vec<C>>> {
    let n = m.len();
    let mut a: Vec<Vec<C>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { C::one() } else { C::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].inv()?;
        for j in 0..2 * n {
            a[c][j] = a[c][j].mul(&inv);
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..2 * n {
                let v = a[i][j].sub(&f.mul(&a[c][j]));
                a[i][j] = v;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solve `A x = b` for constant square `A`.
pub fn solve<C: Coeff>(a: &[Vec<C>], b: &[C]) -> Option<Vec<C>> {
    let inv = invert(a)?;
    Some(inv.iter().map(|row| dot(row, b)).collect())
}

fn dot<C: Coeff>(a: &[C], b: &[C]) -> C {
    let mut acc = C::zero();
    for (x, y) in a.iter().zip(b) {
        acc.add_assign(&x.mul(y));
    }
    acc
}

/// Determinant of a constant square matrix.
pub fn det<C: Coeff>(m: &[Vec<C>]) -> C {
    let n = m.len();
    let mut a = m.to_vec();
    let mut acc = C::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return C::zero();
        };
        if p != c {
            a.swap(c, p);
            acc = acc.neg();
        }
        acc = acc.mul(&a[c][c]);
        let inv = a[c][c].inv().expect("nonzero pivot");
        for i in (c + 1)..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].mul(&inv);
            for j in c..n {
                let v = a[i][j].sub(&f.mul(&a[c][j]));
                a[i][j] = v;
            }
        }
    }
    acc
}

/// Determinant of a square matrix of series by cofactor expansion along the
/// first row.
pub fn det_series<C: Coeff>(m: &Matrix<C>) -> Result<TruncSeries<C>> {
    let n = m.len();
    for row in m {
        if row.len() != n {
            return Err(SeriesError::NotSquare(n, row.len()));
        }
    }
    if n == 0 {
        return Err(SeriesError::NotSquare(0, 0));
    }
    let cols: Vec<usize> = (0..n).collect();
    det_rec(m, 0, &cols)
}

fn det_rec<C: Coeff>(m: &Matrix<C>, row: usize, cols: &[usize]) -> Result<TruncSeries<C>> {
    if cols.len() == 1 {
        return Ok(m[row][cols[0]].clone());
    }
    let mut acc: Option<TruncSeries<C>> = None;
    for (k, &c) in cols.iter().enumerate() {
        let entry = &m[row][c];
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = det_rec(m, row + 1, &rest)?;
        let term = if entry.is_zero() {
            TruncSeries::zero(entry.vars(), entry.order().min(minor.order()))
        } else {
            entry.try_mul(&minor)?
        };
        let term = if k % 2 == 1 { term.neg() } else { term };
        acc = Some(match acc {
            None => term,
            Some(a) => a.try_add(&term)?,
        });
    }
    Ok(acc.expect("nonempty"))
}

/// Random Gaussian rational with numerator and denominator bounded by
/// [`SAMPLE_BOUND`].
pub fn random_gauss(rng: &mut ChaCha8Rng) -> GaussRational {
    let mut part = || {
        let n: i64 = rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
        let d: i64 = rng.gen_range(1..=SAMPLE_BOUND);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    };
    GaussRational::new(part(), part())
}

/// Rank of a series matrix at a generic point: the maximum over
/// [`GENERIC_RANK_SAMPLES`] random points.
pub fn generic_rank<C: Coeff>(m: &Matrix<C>, seed: u64) -> usize {
    let Some(first) = m.iter().flatten().next() else {
        return 0;
    };
    let nvars = first.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..GENERIC_RANK_SAMPLES {
        let pt: Vec<C> = (0..nvars).map(|_| C::from_gauss(&random_gauss(&mut rng))).collect();
        let vals: Vec<Vec<C>> = m.iter().map(|row| row.iter().map(|e| e.eval(&pt)).collect()).collect();
        best = best.max(rank(&vals));
    }
    best
}

/// Lower bound for the rank of a series matrix over its fraction field,
/// certified by a nonzero determinant of a random compression `A·M·B` to a
/// square `r × r` matrix. Tight with probability one.
pub fn certified_rank<C: Coeff>(m: &Matrix<C>, seed: u64) -> Result<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let Some(like) = m.iter().flatten().next() else {
        return Ok(0);
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let small = |rng: &mut ChaCha8Rng| C::from_i64(rng.gen_range(-9..=9));
    for r in (1..=rows.min(cols)).rev() {
        let a: Vec<Vec<C>> = (0..r).map(|_| (0..rows).map(|_| small(&mut rng)).collect()).collect();
        let b: Vec<Vec<C>> = (0..cols).map(|_| (0..r).map(|_| small(&mut rng)).collect()).collect();
        let am = mat_mul(&lift(&a, like, EXACT), m)?;
        let amb = mat_mul(&am, &lift(&b, like, EXACT))?;
        if !det_series(&amb)?.is_zero() {
            return Ok(r);
        }
    }
    Ok(0)
}

/// Constant part of a series matrix.
pub fn constant_part<C: Coeff>(m: &Matrix<C>) -> Vec<Vec<C>> {
    m.iter().map(|r| r.iter().map(|e| e.constant_term()).collect()).collect()
}

pub fn mat_vec<C: Coeff>(m: &Matrix<C>, v: &[TruncSeries<C>]) -> Result<Vec<TruncSeries<C>>> {
    m.iter()
        .map(|row| {
            let mut acc: Option<TruncSeries<C>> = None;
            for (a, b) in row.iter().zip(v) {
                let t = a.try_mul(b)?;
                acc = Some(match acc {
                    None => t,
                    Some(x) => x.try_add(&t)?,
                });
            }
            Ok(acc.expect("nonempty row"))
        })
        .collect()
}

pub fn mat_mul<C: Coeff>(a: &Matrix<C>, b: &Matrix<C>) -> Result<Matrix<C>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc: Option<TruncSeries<C>> = None;
                    for (k, x) in row.iter().enumerate() {
                        let t = x.try_mul(&b[k][j])?;
                        acc = Some(match acc {
                            None => t,
                            Some(s) => s.try_add(&t)?,
                        });
                    }
                    Ok(acc.expect("nonempty"))
                })
                .collect()
        })
        .collect()
}

/// Scale a constant matrix into series.
fn lift<C: Coeff>(c: &[Vec<C>], like: &TruncSeries<C>, order: u32) -> Matrix<C> {
    c.iter()
        .map(|r| r.iter().map(|x| TruncSeries::constant(like.vars(), order, x.clone())).collect())
        .collect()
}

/// Inverse of a square series matrix whose constant part is invertible.
pub fn invert_series<C: Coeff>(m: &Matrix<C>, order: u32) -> Result<Matrix<C>> {
    let n = m.len();
    let like = m
        .first()
        .and_then(|r| r.first())
        .ok_or(SeriesError::NotSquare(0, 0))?;
    let m: Matrix<C> = m.iter().map(|r| r.iter().map(|e| e.truncate(order)).collect()).collect();
    let order = m.iter().flatten().map(|e| e.order()).min().unwrap_or(order);
    let c0 = invert(&constant_part(&m)).ok_or(SeriesError::SingularJacobian)?;
    let inv0 = lift(&c0, like, order);
    // X <- X (2I - M X), quadratically convergent in the degree.
    let two: Matrix<C> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| TruncSeries::constant(like.vars(), order, if i == j { C::from_i64(2) } else { C::zero() }))
                .collect()
        })
        .collect();
    let mut x = inv0;
    let mut correct = 0u32;
    let target = if order >= EXACT { return Err(SeriesError::Truncation("inverse of an exact nonconstant matrix needs an order".into())) } else { order };
    while correct < target {
        let mx = mat_mul(&m, &x)?;
        let diff: Matrix<C> = two
            .iter()
            .zip(&mx)
            .map(|(a, b)| a.iter().zip(b).map(|(p, q)| p.try_sub(q)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        x = mat_mul(&x, &diff)?;
        correct = 2 * correct + 1;
    }
    Ok(x)
}

/// Solve `F(u, x) = 0` for `u(x)` with `u(0) = 0`. The variables listed in
/// `unknowns` are `u`; the result lives in the same ring and does not
/// involve them.
///
/// Each pass of `u ← u − J⁻¹ F(u, x)`, with `J = ∂F/∂u` at the origin,
/// fixes one more degree, so pass `j` only needs to be computed through
/// degree `j`.
pub fn solve_implicit<C: Coeff>(f: &[TruncSeries<C>], unknowns: &[usize], order: u32) -> Result<Vec<TruncSeries<C>>> {
    let q = unknowns.len();
    if f.len() != q {
        return Err(SeriesError::NotSquare(f.len(), q));
    }
    let vars = f
        .first()
        .map(|s| s.vars().clone())
        .ok_or_else(|| SeriesError::Precondition("empty system".into()))?;
    let nvars = vars.len();
    let order = f.iter().map(|s| s.order()).fold(order, u32::min);
    if order >= EXACT {
        return Err(SeriesError::Truncation("implicit solve needs a finite order".into()));
    }
    for s in f {
        if !s.constant_term().is_zero() {
            return Err(SeriesError::Precondition("F(0, 0) ≠ 0".into()));
        }
    }
    let jac: Vec<Vec<C>> = f
        .iter()
        .map(|s| unknowns.iter().map(|&j| s.coeff(&Monomial::var(j, 1))).collect())
        .collect();
    let jinv = invert(&jac).ok_or(SeriesError::SingularJacobian)?;
    let mut u: Vec<TruncSeries<C>> = (0..q).map(|_| TruncSeries::zero(&vars, order)).collect();
    for pass in 1..=order {
        let mut args: Vec<TruncSeries<C>> = (0..nvars).map(|v| TruncSeries::var(&vars, pass, v)).collect();
        for (k, &j) in unknowns.iter().enumerate() {
            args[j] = u[k].truncate(pass);
        }
        let res: Vec<TruncSeries<C>> = f
            .iter()
            .map(|s| s.truncate(pass).compose(&args).map(|r| r.truncate(pass)))
            .collect::<Result<_>>()?;
        if res.iter().all(|r| r.is_zero()) {
            continue;
        }
        for i in 0..q {
            let mut corr = TruncSeries::zero(&vars, order);
            for (j, r) in res.iter().enumerate() {
                if !jinv[i][j].is_zero() {
                    corr = corr.try_add(&r.scale(&jinv[i][j]).with_order(order))?;
                }
            }
            u[i] = u[i].try_sub(&corr)?;
        }
    }
    Ok(u)
}
