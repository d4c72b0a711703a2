//! Sparse Laurent polynomials with complex coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::tol::Tolerances;

/// A finite sum `Σ c_k z^k` stored as a sparse exponent map.
///
/// Coefficients whose modulus falls below `eps_drop` times the scale of the
/// operands are pruned, so cancellation produces a genuinely empty map.
#[derive(Clone, Default, PartialEq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Complex64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(0, c)
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// `c z^k`.
    pub fn monomial(k: i64, c: Complex64) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != Complex64::new(0.0, 0.0) {
            coeffs.insert(k, c);
        }
        Self { coeffs }
    }

    /// `z^k`.
    pub fn z_pow(k: i64) -> Self {
        Self::monomial(k, Complex64::new(1.0, 0.0))
    }

    /// Builds from (exponent, coefficient) pairs, summing repeats and dropping exact zeros.
    pub fn from_terms<I: IntoIterator<Item = (i64, Complex64)>>(terms: I) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, c) in terms {
            *coeffs.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    /// Builds from real (exponent, coefficient) pairs.
    pub fn from_real(terms: &[(i64, f64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(k, c)| (k, Complex64::new(c, 0.0))))
    }

    /// Builds `Σ dense[i] z^(lo+i)`.
    pub fn from_dense(lo: i64, dense: &[Complex64]) -> Self {
        Self::from_terms(dense.iter().enumerate().map(|(i, &c)| (lo + i as i64, c)))
    }

    /// Dense ascending coefficients starting at `lo()`. Empty for zero.
    pub fn to_dense(&self) -> (i64, Vec<Complex64>) {
        match (self.lo(), self.hi()) {
            (Some(lo), Some(hi)) => {
                let mut v = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
                for (&k, &c) in &self.coeffs {
                    v[(k - lo) as usize] = c;
                }
                (lo, v)
            }
            _ => (0, Vec::new()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lo(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn hi(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    /// Coefficient at the highest exponent.
    pub fn leading(&self) -> Complex64 {
        self.coeffs.values().next_back().copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.values().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// True when every coefficient is a (small) Gaussian integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs
            .values()
            .all(|c| c.re.fract() == 0.0 && c.im.fract() == 0.0 && c.norm() < 1e15)
    }

    /// Drops coefficients with modulus at most `threshold`.
    pub fn pruned(mut self, threshold: f64) -> Self {
        self.coeffs.retain(|_, c| c.norm() > threshold);
        self
    }

    /// Evaluates at a nonzero point (any point when there are no negative powers).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let (lo, dense) = self.to_dense();
        if dense.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for c in dense.iter().rev() {
            acc = acc * z + c;
        }
        if lo == 0 {
            acc
        } else {
            acc * z.powi(lo as i32)
        }
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        if s == Complex64::new(0.0, 0.0) {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e, c * s)).collect(),
        }
    }

    /// `Σ conj(c_k) z^{-k}`: the boundary conjugate.
    pub fn circle_conjugate(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (-e, c.conj())).collect(),
        }
    }

    /// Sum without pruning.
    pub fn add_raw(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (&k, &c) in &other.coeffs {
            *coeffs.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    /// Product without pruning.
    pub fn mul_raw(&self, other: &Self) -> Self {
        let mut coeffs = BTreeMap::new();
        for (&i, &a) in &self.coeffs {
            for (&j, &b) in &other.coeffs {
                *coeffs.entry(i + j).or_insert(Complex64::new(0.0, 0.0)) += a * b;
            }
        }
        coeffs.retain(|_, c: &mut Complex64| *c != Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    /// Divides by `(z - r)` assuming `r` is (numerically) a root; the remainder is discarded.
    ///
    /// Deflation runs from the top for `|r| <= 1` and from the bottom otherwise,
    /// which keeps the recurrence contractive.
    pub fn deflate(&self, r: Complex64) -> Self {
        let (lo, p) = self.to_dense();
        let n = p.len();
        if n <= 1 {
            return Self::zero();
        }
        let mut q = vec![Complex64::new(0.0, 0.0); n - 1];
        if r.norm() <= 1.0 {
            // p = (z - r) q: q[n-2] = p[n-1], q[i-1] = p[i] + r q[i].
            q[n - 2] = p[n - 1];
            for i in (1..n - 1).rev() {
                q[i - 1] = p[i] + r * q[i];
            }
        } else {
            // From the bottom: p[0] = -r q[0], p[i] = q[i-1] - r q[i].
            q[0] = -p[0] / r;
            for i in 1..n - 1 {
                q[i] = (q[i - 1] - p[i]) / r;
            }
        }
        Self::from_dense(lo, &q)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let scale = self.max_abs().max(rhs.max_abs());
        self.add_raw(rhs).pruned(scale * Tolerances::DEFAULT.eps_drop)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let scale = self.max_abs() * rhs.max_abs();
        self.mul_raw(rhs).pruned(scale * Tolerances::DEFAULT.eps_drop)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, c) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coef = if c.im == 0.0 {
                format!("{}", c.re)
            } else {
                format!("({}{:+}i)", c.re, c.im)
            };
            match k {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}z")?,
                _ => write!(f, "{coef}z^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn shift_by_multiplication() {
        let f = LaurentPoly::from_real(&[(-1, 1.0), (0, 1.0)]);
        let g = LaurentPoly::z_pow(1);
        assert_eq!(&f * &g, LaurentPoly::from_real(&[(0, 1.0), (1, 1.0)]));
    }

    #[test]
    fn cancellation_gives_empty_map() {
        let f = LaurentPoly::monomial(2, c(1.0));
        let g = LaurentPoly::monomial(2, c(-1.0));
        let s = &f + &g;
        assert!(s.is_zero());
        assert_eq!(s.lo(), None);
    }

    #[test]
    fn difference_of_squares() {
        let f = LaurentPoly::from_real(&[(0, 1.0), (-1, -1.0)]);
        let g = LaurentPoly::from_real(&[(0, 1.0), (-1, 1.0)]);
        let p = &f * &g;
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff(0), c(1.0));
        assert_eq!(p.coeff(-2), c(-1.0));
    }

    #[test]
    fn deflation_both_directions() {
        // (z - 0.5)(z - 3)(z + 1) = z^3 - 2.5 z^2 - 2 z + 1.5
        let p = LaurentPoly::from_real(&[(0, 1.5), (1, -2.0), (2, -2.5), (3, 1.0)]);
        let q = p.deflate(c(0.5));
        let expect = LaurentPoly::from_real(&[(0, -3.0), (1, -2.0), (2, 1.0)]);
        assert!((&q - &expect).max_abs() < 1e-14);
        let q = p.deflate(c(3.0));
        let expect = LaurentPoly::from_real(&[(0, -0.5), (1, 0.5), (2, 1.0)]);
        assert!((&q - &expect).max_abs() < 1e-14);
    }

    #[test]
    fn eval_with_negative_powers() {
        let f = LaurentPoly::from_real(&[(-1, 1.0), (0, 1.0)]);
        let v = f.eval(Complex64::new(0.0, 1.0));
        assert!((v - Complex64::new(1.0, -1.0)).norm() < 1e-15);
    }
}
