//! Coefficient fields for the series engine.
//!
//! Everything that decides a rank, an order or a selection runs over
//! [`GaussRational`]. [`Complex64`] is available for the numerical
//! reconstruction path, where series are evaluated many times at
//! floating-point base points.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Field operations needed by truncated series and small matrices.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn conj(&self) -> Self;
    fn from_gauss(g: &GaussRational) -> Self;
    fn from_i64(n: i64) -> Self;
    /// The imaginary unit.
    fn imag_unit() -> Self;
    /// Absolute value as a float, used for pivoting and tolerance checks.
    fn abs_f64(&self) -> f64;

    fn add_assign(&mut self, other: &Self) {
        *self = Coeff::add(&*self, other);
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        let d = Self::from_i64(den).inv().expect("zero denominator");
        Self::from_i64(num).mul(&d)
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Exact complex number with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Self {
            re: BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            im: BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        }
    }

    pub fn real(n: i64) -> Self {
        Self::from_parts(n, 1, 0, 1)
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Self::from_parts(num, den, 0, 1)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Exact rational strings `(re, im)`, the wire form used in JSON files.
    pub fn to_strings(&self) -> (String, String) {
        (self.re.to_string(), self.im.to_string())
    }

    pub fn from_strings(re: &str, im: &str) -> Result<Self, String> {
        Ok(Self {
            re: parse_rational(re)?,
            im: parse_rational(im)?,
        })
    }

    /// Nearest Gaussian rational with denominator `den` (used to pull
    /// floating inputs such as grid points back into exact arithmetic).
    pub fn approximate(z: Complex64, den: i64) -> Self {
        let r = (z.re * den as f64).round() as i64;
        let i = (z.im * den as f64).round() as i64;
        Self::from_parts(r, den, i, den)
    }
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| format!("bad numerator `{n}`: {e}"))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| format!("bad denominator `{d}`: {e}"))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(BigRational::new(n, d))
    } else {
        let n = BigInt::from_str(s).map_err(|e| format!("bad integer `{s}`: {e}"))?;
        Ok(BigRational::from_integer(n))
    }
}

impl fmt::Debug for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "({}-{}i)", self.re, -&self.im)
                } else {
                    write!(f, "({}+{}i)", self.re, self.im)
                }
            }
        }
    }
}

impl Serialize for GaussRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (re, im) = self.to_strings();
        [re, im].serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [re, im] = <[String; 2]>::deserialize(d)?;
        GaussRational::from_strings(&re, &im).map_err(serde::de::Error::custom)
    }
}

impl Coeff for GaussRational {
    fn zero() -> Self {
        Self::default()
    }

    fn one() -> Self {
        Self {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn add_assign(&mut self, o: &Self) {
        if !o.re.is_zero() {
            self.re += &o.re;
        }
        if !o.im.is_zero() {
            self.im += &o.im;
        }
    }

    fn sub(&self, o: &Self) -> Self {
        Self {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Self {
                re: &self.re * &o.re,
                im: BigRational::zero(),
            };
        }
        if self.im.is_zero() {
            return Self {
                re: &self.re * &o.re,
                im: &self.re * &o.im,
            };
        }
        if o.im.is_zero() {
            return Self {
                re: &self.re * &o.re,
                im: &self.im * &o.re,
            };
        }
        Self {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn neg(&self) -> Self {
        Self {
            re: -&self.re,
            im: -&self.im,
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Self {
                re: self.re.recip(),
                im: BigRational::zero(),
            });
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(Self {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    fn from_gauss(g: &GaussRational) -> Self {
        g.clone()
    }

    fn from_i64(n: i64) -> Self {
        Self::real(n)
    }

    fn imag_unit() -> Self {
        Self::from_parts(0, 1, 1, 1)
    }

    fn abs_f64(&self) -> f64 {
        self.to_complex64().norm()
    }
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Coeff::is_zero(self) {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn from_gauss(g: &GaussRational) -> Self {
        g.to_complex64()
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn abs_f64(&self) -> f64 {
        self.norm()
    }
}
