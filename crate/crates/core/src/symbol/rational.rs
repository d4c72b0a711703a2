//! Rational functions on the unit circle.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factor::roots::{cluster, expand_roots, poly_roots_with, root_residual, sort_roots, Location, Root};
use crate::symbol::LaurentPoly;
use crate::tol::Tolerances;

/// Relative residual below which a pole is treated as cancelled by the numerator.
const CANCEL_TOL: f64 = 1e-10;

/// A rational function `num(z) / Π (z - p)^m`.
///
/// The numerator is a Laurent polynomial, so a pole at the origin lives in its
/// negative exponents; `poles` holds only nonzero poles with a monic denominator.
/// When the nonzero zeros of the numerator are known they are carried along so
/// that products and inverses stay structurally exact.
#[derive(Clone)]
pub struct RationalSymbol {
    num: LaurentPoly,
    poles: Vec<Root>,
    zeros: Option<Vec<Root>>,
}

/// Zero-pole-gain data: `gain · z^zpow · Π (z - zero)^m / Π (z - pole)^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Zpk {
    pub gain: Complex64,
    pub zpow: i64,
    pub zeros: Vec<Root>,
    pub poles: Vec<Root>,
}

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn cone() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Adds `extra` into `base`, merging values within `radius`.
fn merge_into(base: &mut Vec<Root>, extra: &[Root], radius: f64) {
    for r in extra {
        match base.iter_mut().find(|b| (b.value - r.value).norm() <= radius) {
            Some(b) => b.mult += r.mult,
            None => base.push(*r),
        }
    }
}

fn find_mult(roots: &[Root], z: Complex64, radius: f64) -> u32 {
    roots.iter().find(|r| (r.value - z).norm() <= radius).map_or(0, |r| r.mult)
}

/// Separates exact zeros at the origin from the nonzero roots.
fn split_origin(roots: &[Root]) -> (i64, Vec<Root>) {
    let mut at_origin = 0i64;
    let mut rest = Vec::new();
    for r in roots {
        if r.value == czero() {
            at_origin += r.mult as i64;
        } else if r.mult > 0 {
            rest.push(*r);
        }
    }
    (at_origin, rest)
}

impl RationalSymbol {
    pub fn zero() -> Self {
        Self { num: LaurentPoly::zero(), poles: Vec::new(), zeros: Some(Vec::new()) }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_laurent(LaurentPoly::constant(c))
    }

    pub fn real(c: f64) -> Self {
        Self::constant(Complex64::new(c, 0.0))
    }

    pub fn one() -> Self {
        Self::real(1.0)
    }

    /// `z^k`.
    pub fn z_pow(k: i64) -> Self {
        Self { num: LaurentPoly::z_pow(k), poles: Vec::new(), zeros: Some(Vec::new()) }
    }

    pub fn from_laurent(num: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let zeros = if num.len() == 1 { Some(Vec::new()) } else { None };
        Self { num, poles: Vec::new(), zeros }
    }

    /// Builds from zero-pole-gain data. Roots exactly at the origin are folded into `zpow`,
    /// coincident roots are merged, and common zeros and poles cancelled.
    pub fn from_zpk(gain: Complex64, zpow: i64, zeros: &[Root], poles: &[Root]) -> Self {
        Self::from_zpk_with(gain, zpow, zeros, poles, &Tolerances::DEFAULT)
    }

    pub fn from_zpk_with(gain: Complex64, zpow: i64, zeros: &[Root], poles: &[Root], tol: &Tolerances) -> Self {
        if gain == czero() {
            return Self::zero();
        }
        let (z0, zs) = split_origin(zeros);
        let (p0, ps) = split_origin(poles);
        let mut zm = Vec::new();
        merge_into(&mut zm, &zs, tol.eps_cluster);
        let mut pm = Vec::new();
        merge_into(&mut pm, &ps, tol.eps_cluster);
        let num = expand_roots(&zm).scale(gain).shift(zpow + z0 - p0);
        Self { num, poles: pm, zeros: Some(zm) }.cancel_common(tol)
    }

    /// Normalizes `num / den`: the denominator is factored, made monic, and common roots cancelled.
    pub fn from_num_den(num: &LaurentPoly, den: &LaurentPoly) -> Result<Self> {
        Self::from_num_den_with(num, den, &Tolerances::DEFAULT)
    }

    pub fn from_num_den_with(num: &LaurentPoly, den: &LaurentPoly, tol: &Tolerances) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let drs = poly_roots_with(den, tol)?;
        let nrs = poly_roots_with(num, tol)?;
        let num = num.shift(-drs.zpow).scale(1.0 / drs.lead);
        Ok(Self { num, poles: drs.roots, zeros: Some(nrs.roots) }.cancel_common(tol))
    }

    /// Blaschke factor `(z - α) / (1 - conj(α) z)`; `z` when `α = 0`.
    pub fn blaschke(alpha: Complex64) -> Self {
        if alpha == czero() {
            return Self::z_pow(1);
        }
        let pole = 1.0 / alpha.conj();
        Self::from_zpk(
            -1.0 / alpha.conj(),
            0,
            &[Root::new(alpha, 1)],
            &[Root::new(pole, 1)],
        )
    }

    /// `num / Π (z - p)^m` with unknown zeros; common factors are cancelled.
    pub(crate) fn from_parts(num: LaurentPoly, poles: Vec<Root>) -> Self {
        Self { num, poles, zeros: None }.cancel_common(&Tolerances::DEFAULT)
    }

    fn cancel_common(mut self, tol: &Tolerances) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        if self.poles.is_empty() {
            return self;
        }
        match self.zeros.take() {
            Some(mut zeros) => {
                for p in self.poles.iter_mut() {
                    if let Some(z) = zeros.iter_mut().find(|z| (z.value - p.value).norm() <= tol.eps_cluster) {
                        let k = z.mult.min(p.mult);
                        for _ in 0..k {
                            self.num = self.num.deflate(z.value);
                        }
                        z.mult -= k;
                        p.mult -= k;
                    }
                }
                zeros.retain(|z| z.mult > 0);
                self.zeros = Some(zeros);
            }
            None => {
                for p in self.poles.iter_mut() {
                    while p.mult > 0 && self.num.len() > 1 && root_residual(&self.num, p.value) <= CANCEL_TOL {
                        self.num = self.num.deflate(p.value);
                        p.mult -= 1;
                    }
                }
            }
        }
        self.poles.retain(|p| p.mult > 0);
        self
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    /// Nonzero poles of the monic denominator.
    pub fn poles(&self) -> &[Root] {
        &self.poles
    }

    /// The monic denominator `Π (z - p)^m`.
    pub fn den(&self) -> LaurentPoly {
        expand_roots(&self.poles)
    }

    pub fn den_degree(&self) -> i64 {
        self.poles.iter().map(|p| p.mult as i64).sum()
    }

    pub fn known_zeros(&self) -> Option<&[Root]> {
        self.zeros.as_deref()
    }

    /// Nonzero zeros, computed from the numerator when not already known.
    pub fn zeros(&self) -> Result<Vec<Root>> {
        self.zeros_with(&Tolerances::DEFAULT)
    }

    pub fn zeros_with(&self, tol: &Tolerances) -> Result<Vec<Root>> {
        if let Some(z) = &self.zeros {
            return Ok(z.clone());
        }
        if self.num.is_zero() {
            return Ok(Vec::new());
        }
        Ok(poly_roots_with(&self.num, tol)?.roots)
    }

    /// Copy with the zero list populated.
    pub fn with_zeros(&self) -> Result<Self> {
        let mut s = self.clone();
        s.zeros = Some(self.zeros()?);
        Ok(s)
    }

    pub fn zpk(&self) -> Result<Zpk> {
        let mut zeros = self.zeros()?;
        sort_roots(&mut zeros);
        let mut poles = self.poles.clone();
        sort_roots(&mut poles);
        Ok(Zpk { gain: self.num.leading(), zpow: self.num.lo().unwrap_or(0), zeros, poles })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when there are no nonzero poles (a Laurent polynomial).
    pub fn is_laurent(&self) -> bool {
        self.poles.is_empty()
    }

    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        if self.is_laurent() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn is_finite(&self) -> bool {
        self.num.is_finite() && self.poles.iter().all(|p| p.value.re.is_finite() && p.value.im.is_finite())
    }

    pub fn has_pole_on_circle(&self) -> bool {
        self.poles.iter().any(|p| p.loc == Location::On)
    }

    /// Sum of pole multiplicities at `loc`, counting the origin as inside.
    pub fn pole_count(&self, loc: Location) -> i64 {
        let finite: i64 = self.poles.iter().filter(|p| p.loc == loc).map(|p| p.mult as i64).sum();
        let origin = if loc == Location::Inside { (-self.num.lo().unwrap_or(0)).max(0) } else { 0 };
        finite + origin
    }

    /// Order of growth at infinity: numerator degree minus denominator degree.
    pub fn degree_at_infinity(&self) -> i64 {
        match self.num.hi() {
            Some(h) => h - self.den_degree(),
            None => i64::MIN,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut v = self.num.eval(z);
        for p in &self.poles {
            v /= (z - p.value).powi(p.mult as i32);
        }
        v
    }

    pub fn scale(&self, s: Complex64) -> Self {
        if s == czero() {
            return Self::zero();
        }
        Self { num: self.num.scale(s), poles: self.poles.clone(), zeros: self.zeros.clone() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn neg(&self) -> Self {
        self.scale_real(-1.0)
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { num: self.num.shift(k), poles: self.poles.clone(), zeros: self.zeros.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_with(other, &Tolerances::DEFAULT)
    }

    pub fn mul_with(&self, other: &Self, tol: &Tolerances) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let num = &self.num * &other.num;
        let mut poles = self.poles.clone();
        merge_into(&mut poles, &other.poles, tol.eps_cluster);
        let zeros = match (&self.zeros, &other.zeros) {
            (Some(a), Some(b)) => {
                let mut z = a.clone();
                merge_into(&mut z, b, tol.eps_cluster);
                Some(z)
            }
            _ => None,
        };
        Self { num, poles, zeros }.cancel_common(tol)
    }

    /// Reciprocal; fails on the zero function.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let zeros = self.zeros()?;
        let lead = self.num.leading();
        let lo = self.num.lo().unwrap_or(0);
        let num = expand_roots(&self.poles).scale(1.0 / lead).shift(-lo);
        Ok(Self { num, poles: zeros, zeros: Some(self.poles.clone()) })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Numerators of `self` and `other` over the common denominator (lcm of the poles).
    fn common_numerators(&self, other: &Self, tol: &Tolerances) -> (LaurentPoly, LaurentPoly, Vec<Root>) {
        let mut lcm: Vec<Root> = self.poles.clone();
        for q in &other.poles {
            match lcm.iter_mut().find(|p| (p.value - q.value).norm() <= tol.eps_cluster) {
                Some(p) => p.mult = p.mult.max(q.mult),
                None => lcm.push(*q),
            }
        }
        let fill = |s: &Self| {
            let missing: Vec<Root> = lcm
                .iter()
                .map(|p| Root { mult: p.mult - find_mult(&s.poles, p.value, tol.eps_cluster), ..*p })
                .filter(|p| p.mult > 0)
                .collect();
            s.num.mul_raw(&expand_roots(&missing))
        };
        (fill(self), fill(other), lcm)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_with(other, &Tolerances::DEFAULT)
    }

    pub fn add_with(&self, other: &Self, tol: &Tolerances) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, poles) = self.common_numerators(other, tol);
        let num = &a + &b;
        Self { num, poles, zeros: None }.cancel_common(tol)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Relative coefficient residual of `self - other` over a common denominator.
    ///
    /// Zero when both vanish, 1 when exactly one does.
    pub fn residual(&self, other: &Self) -> f64 {
        let (a, b, _) = self.common_numerators(other, &Tolerances::DEFAULT);
        let scale = a.max_abs().max(b.max_abs());
        if scale == 0.0 {
            return 0.0;
        }
        a.add_raw(&b.scale(-cone())).max_abs() / scale
    }

    /// `self == other` up to the relative tolerance `eps`.
    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        self.residual(other) <= eps
    }

    /// Magnitude of the function relative to `reference`, measured coefficient-wise
    /// over a common denominator. Used to decide whether a computed result vanishes.
    pub fn relative_size(&self, reference: f64) -> f64 {
        if reference == 0.0 {
            return if self.is_zero() { 0.0 } else { f64::INFINITY };
        }
        let scale = self.num.max_abs() / expand_roots(&self.poles).max_abs().max(1e-300);
        scale / reference
    }

    /// Boundary conjugate `z ↦ conj(f(z))` for `|z| = 1`, extended rationally.
    pub fn circle_conjugate(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut factor = cone();
        let mut total = 0i64;
        for p in &self.poles {
            factor *= (-p.value.conj()).powi(p.mult as i32);
            total += p.mult as i64;
        }
        let num = self.num.circle_conjugate().shift(total).scale(1.0 / factor);
        let poles = self.poles.iter().map(Root::reflected).collect();
        let zeros = self.zeros.as_ref().map(|zs| zs.iter().map(Root::reflected).collect());
        Self { num, poles, zeros }
    }

    /// `f~(z) = f(1/z)`: the flip used for reflected symbols.
    pub fn flip(&self) -> Self {
        self.circle_conjugate().conj_coeffs()
    }

    /// Conjugates every coefficient (the function `conj(f(conj z))`).
    pub fn conj_coeffs(&self) -> Self {
        let num = LaurentPoly::from_terms(self.num.iter().map(|(k, c)| (k, c.conj())));
        let poles = self.poles.iter().map(|p| Root { value: p.value.conj(), ..*p }).collect();
        let zeros = self.zeros.as_ref().map(|zs| zs.iter().map(|r| Root { value: r.value.conj(), ..*r }).collect());
        Self { num, poles, zeros }
    }

    /// Evaluations at `n` equispaced points of the unit circle offset from the roots of unity.
    pub fn probe(&self, n: usize) -> Vec<Complex64> {
        probe_points(n).into_iter().map(|z| self.eval(z)).collect()
    }

    /// Upper bound for `‖f‖∞` is not available symbolically; this samples `|f|` on the circle.
    pub fn max_abs_on_circle(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
                self.eval(Complex64::from_polar(1.0, t)).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Deterministic probe points on the circle, offset so they avoid small roots of unity.
pub fn probe_points(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k as f64 + 0.318) / n as f64))
        .collect()
}

impl From<LaurentPoly> for RationalSymbol {
    fn from(p: LaurentPoly) -> Self {
        Self::from_laurent(p)
    }
}

impl fmt::Debug for RationalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.num)?;
        for p in &self.poles {
            write!(f, " / (z - {:.6})", p.value)?;
            if p.mult > 1 {
                write!(f, "^{}", p.mult)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for RationalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Clusters a raw list of values into roots with default tolerances.
pub fn roots_from_values(values: &[Complex64]) -> Vec<Root> {
    cluster(values, Tolerances::DEFAULT.eps_cluster).into_iter().map(|(z, m)| Root::new(z, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn lp(t: &[(i64, f64)]) -> RationalSymbol {
        RationalSymbol::from_laurent(LaurentPoly::from_real(t))
    }

    #[test]
    fn conjugate_of_z() {
        let f = RationalSymbol::z_pow(1).circle_conjugate();
        assert!(f.approx_eq(&RationalSymbol::z_pow(-1), 0.0));
    }

    #[test]
    fn conjugate_of_laurent() {
        let f = lp(&[(0, 1.0), (-1, 1.0)]).circle_conjugate();
        assert!(f.approx_eq(&lp(&[(0, 1.0), (1, 1.0)]), 0.0));
        let i = RationalSymbol::constant(Complex64::new(0.0, 1.0)).circle_conjugate();
        assert!(i.approx_eq(&RationalSymbol::constant(Complex64::new(0.0, -1.0)), 0.0));
    }

    #[test]
    fn conjugate_of_rational_matches_pointwise() {
        let f = RationalSymbol::from_zpk(
            Complex64::new(0.3, 1.1),
            -1,
            &[Root::new(Complex64::new(0.2, 0.4), 1)],
            &[Root::new(Complex64::new(2.0, -1.0), 2), Root::new(c(0.5), 1)],
        );
        let g = f.circle_conjugate();
        for z in probe_points(16) {
            assert!((g.eval(z) - f.eval(z).conj()).norm() < 1e-13);
        }
        assert!(g.circle_conjugate().approx_eq(&f, 1e-13));
    }

    #[test]
    fn normalize_cancels_common_root() {
        let f = RationalSymbol::from_num_den(&LaurentPoly::from_real(&[(2, 1.0), (0, -1.0)]), &LaurentPoly::from_real(&[(1, 1.0), (0, -1.0)])).unwrap();
        assert!(f.is_laurent());
        assert!(f.approx_eq(&lp(&[(1, 1.0), (0, 1.0)]), 1e-14));
    }

    #[test]
    fn normalize_zero_and_errors() {
        assert!(RationalSymbol::from_num_den(&LaurentPoly::zero(), &LaurentPoly::z_pow(1)).unwrap().is_zero());
        assert_eq!(RationalSymbol::from_num_den(&LaurentPoly::one(), &LaurentPoly::zero()).unwrap_err(), Error::ZeroDenominator);
    }

    #[test]
    fn normalize_reports_zpk() {
        let f = RationalSymbol::from_num_den(&LaurentPoly::from_real(&[(0, 1.0), (-1, 1.0)]), &LaurentPoly::one()).unwrap();
        let zpk = f.zpk().unwrap();
        assert_eq!(zpk.zpow, -1);
        assert_eq!(zpk.zeros.len(), 1);
        assert_eq!(zpk.zeros[0].loc, Location::On);
        assert!((zpk.zeros[0].value + 1.0).norm() < 1e-15);
    }

    #[test]
    fn add_and_subtract_rational() {
        let f = RationalSymbol::from_zpk(cone(), 0, &[], &[Root::new(c(0.5), 1)]);
        let g = RationalSymbol::from_zpk(cone(), 0, &[], &[Root::new(c(2.0), 1)]);
        let s = f.add(&g);
        for z in probe_points(8) {
            assert!((s.eval(z) - f.eval(z) - g.eval(z)).norm() < 1e-14);
        }
        assert!(s.sub(&g).approx_eq(&f, 1e-14));
        assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn inverse_and_division() {
        let f = RationalSymbol::from_zpk(c(2.0), 1, &[Root::new(c(3.0), 1)], &[Root::new(c(0.5), 1)]);
        let g = f.inv().unwrap();
        assert!(f.mul(&g).approx_eq(&RationalSymbol::one(), 1e-14));
        assert!(f.mul(&g).is_laurent());
    }

    #[test]
    fn blaschke_is_unimodular() {
        let b = RationalSymbol::blaschke(Complex64::new(0.3, -0.2));
        for z in probe_points(8) {
            assert!((b.eval(z).norm() - 1.0).abs() < 1e-14);
        }
    }
}
