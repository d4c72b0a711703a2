//! Partial fractions, Fourier coefficients and Riesz projections.
//!
//! A rational function `num / Π (z - p)^m` is handled one numerator monomial at a
//! time: `z^k / (z - p)^i` is split analytically into its parts inside and outside
//! the disc, so no large polynomial shift is ever formed and the projections do not
//! suffer cancellation when the numerator has high degree.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factor::roots::{expand_roots, Location, Root};
use crate::symbol::{LaurentPoly, RationalSymbol};

/// Which Riesz projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

fn binom(n: i64, k: i64) -> f64 {
    if k < 0 || n < k {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for j in 0..k {
        r = r * (n - j) as f64 / (j + 1) as f64;
    }
    r
}

/// Partial-fraction coefficients of `1 / Π (z - p)^m`.
///
/// `coeffs[i - 1]` multiplies `1 / (z - p)^i`.
#[derive(Debug, Clone)]
pub struct PoleTerm {
    pub pole: Root,
    pub coeffs: Vec<Complex64>,
}

/// Decomposition of the reciprocal denominator.
pub fn reciprocal_denominator(poles: &[Root]) -> Vec<PoleTerm> {
    poles
        .iter()
        .enumerate()
        .map(|(idx, p)| {
            let m = p.mult as usize;
            // Taylor series of Π_{q≠p} (z - q)^{-m_q} around z = p, to order m-1.
            let mut h = vec![Complex64::new(0.0, 0.0); m];
            h[0] = Complex64::new(1.0, 0.0);
            for (jdx, q) in poles.iter().enumerate() {
                if jdx == idx {
                    continue;
                }
                let d = p.value - q.value;
                // (d + w)^{-1} = Σ (-1)^r w^r / d^{r+1}
                let series: Vec<Complex64> = (0..m)
                    .map(|r| {
                        let s = if r % 2 == 0 { 1.0 } else { -1.0 };
                        s / d.powi(r as i32 + 1)
                    })
                    .collect();
                for _ in 0..q.mult {
                    let mut next = vec![Complex64::new(0.0, 0.0); m];
                    for (a, &x) in h.iter().enumerate() {
                        for (b, &y) in series.iter().enumerate().take(m - a) {
                            next[a + b] += x * y;
                        }
                    }
                    h = next;
                }
            }
            // coefficient of 1/(z-p)^{m-r} is h_r
            let coeffs = (1..=m).map(|i| h[m - i]).collect();
            PoleTerm { pole: *p, coeffs }
        })
        .collect()
}

/// Fourier coefficient of `(z - p)^{-i}` at index `n`.
fn pole_power_coefficient(p: Complex64, loc: Location, i: usize, n: i64) -> Complex64 {
    let i = i as i64;
    match loc {
        Location::Inside => {
            // Σ_{j≥0} C(j+i-1, i-1) p^j z^{-j-i}
            let j = -n - i;
            if j < 0 {
                Complex64::new(0.0, 0.0)
            } else {
                p.powi(j as i32) * binom(j + i - 1, i - 1)
            }
        }
        Location::Outside => {
            // (-p)^{-i} Σ_{n≥0} C(n+i-1, i-1) (z/p)^n
            if n < 0 {
                Complex64::new(0.0, 0.0)
            } else {
                (-p).powi(-(i as i32)) * p.powi(-(n as i32)) * binom(n + i - 1, i - 1)
            }
        }
        Location::On => Complex64::new(f64::NAN, f64::NAN),
    }
}

/// Precomputed data for evaluating many Fourier coefficients of one function.
#[derive(Debug, Clone)]
pub struct FourierSeries {
    num: LaurentPoly,
    terms: Vec<PoleTerm>,
}

impl FourierSeries {
    pub fn new(f: &RationalSymbol) -> Result<Self> {
        if f.has_pole_on_circle() {
            return Err(Error::PoleOnCircle);
        }
        Ok(Self { num: f.num().clone(), terms: reciprocal_denominator(f.poles()) })
    }

    pub fn coefficient(&self, n: i64) -> Complex64 {
        if self.terms.is_empty() {
            return self.num.coeff(n);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, nk) in self.num.iter() {
            for t in &self.terms {
                for (i0, &c) in t.coeffs.iter().enumerate() {
                    if c != Complex64::new(0.0, 0.0) {
                        acc += nk * c * pole_power_coefficient(t.pole.value, t.pole.loc, i0 + 1, n - k);
                    }
                }
            }
        }
        acc
    }

    /// Index range outside of which coefficients fall below `rel` times the largest one.
    pub fn effective_support(&self, rel: f64) -> (i64, i64) {
        let (lo, hi) = (self.num.lo().unwrap_or(0), self.num.hi().unwrap_or(0));
        if self.terms.is_empty() {
            return (lo, hi);
        }
        let tail = |r: f64, m: u32| -> i64 {
            let mut n = 0i64;
            while n < 100_000 {
                let v = (n as f64 + 1.0).powi(m as i32 - 1) * r.powi(n as i32);
                if v < rel && n > 0 {
                    return n;
                }
                n += 1;
            }
            n
        };
        let mut neg = 0;
        let mut pos = 0;
        for t in &self.terms {
            let r = t.pole.value.norm();
            match t.pole.loc {
                Location::Inside => neg = neg.max(tail(r, t.pole.mult) + t.pole.mult as i64),
                Location::Outside => pos = pos.max(tail(1.0 / r, t.pole.mult)),
                Location::On => {}
            }
        }
        let has_inside = self.terms.iter().any(|t| t.pole.loc == Location::Inside);
        let has_outside = self.terms.iter().any(|t| t.pole.loc == Location::Outside);
        let lo_eff = if has_inside { lo - neg } else { lo };
        let hi_eff = if has_outside { hi + pos } else { hi };
        (lo_eff.min(hi_eff), hi_eff)
    }
}

/// `f_k`, the `k`-th Fourier coefficient on the unit circle.
pub fn fourier_coefficient(f: &RationalSymbol, k: i64) -> Result<Complex64> {
    Ok(FourierSeries::new(f)?.coefficient(k))
}

/// `⟨f, g⟩ = Σ f_k conj(g_k)`, computed exactly as the zeroth coefficient of `f · conj(g)`.
pub fn inner_product(f: &RationalSymbol, g: &RationalSymbol) -> Result<Complex64> {
    fourier_coefficient(&f.mul(&g.circle_conjugate()), 0)
}

/// Squared L² norm.
pub fn norm_sq(f: &RationalSymbol) -> Result<f64> {
    Ok(inner_product(f, f)?.re.max(0.0))
}

struct SideAccumulator {
    poles: Vec<Root>,
    num: BTreeMap<i64, Complex64>,
    cofactors: BTreeMap<(usize, usize), LaurentPoly>,
}

impl SideAccumulator {
    fn new(poles: Vec<Root>) -> Self {
        Self { poles, num: BTreeMap::new(), cofactors: BTreeMap::new() }
    }

    fn index_of(&self, p: Complex64) -> usize {
        self.poles.iter().position(|r| r.value == p).expect("pole belongs to this side")
    }

    /// `D_side / (z - p)^i`.
    fn cofactor(&mut self, idx: usize, i: usize) -> &LaurentPoly {
        let poles = &self.poles;
        self.cofactors.entry((idx, i)).or_insert_with(|| {
            let reduced: Vec<Root> = poles
                .iter()
                .enumerate()
                .map(|(j, r)| if j == idx { Root { mult: r.mult - i as u32, ..*r } } else { *r })
                .filter(|r| r.mult > 0)
                .collect();
            expand_roots(&reduced)
        })
    }

    fn add_scaled(&mut self, poly: &LaurentPoly, shift: i64, w: Complex64) {
        for (k, c) in poly.iter() {
            *self.num.entry(k + shift).or_insert(Complex64::new(0.0, 0.0)) += c * w;
        }
    }

    fn add_monomial(&mut self, k: i64, w: Complex64) {
        let den = expand_roots(&self.poles);
        self.add_scaled(&den, k, w);
    }

    /// Adds `w z^k / (z - p)^i`.
    fn add_fraction(&mut self, p: Complex64, i: usize, k: i64, w: Complex64) {
        let idx = self.index_of(p);
        let cof = self.cofactor(idx, i).clone();
        self.add_scaled(&cof, k, w);
    }

    fn finish(self, scale: f64) -> RationalSymbol {
        let num = LaurentPoly::from_terms(self.num).pruned(scale * 1e-15);
        if num.is_zero() {
            return RationalSymbol::zero();
        }
        RationalSymbol::from_parts(num, self.poles)
    }
}

/// `(P⁺f, P⁻f)` when every pole lies on one side of the circle.
///
/// Dividing the numerator by the denominator from the top (poles inside) or from the bottom
/// (poles outside) peels off the polynomial part directly; summing partial fractions instead
/// would cancel large terms when the numerator degree is high.
fn one_sided_split(f: &RationalSymbol) -> Option<(RationalSymbol, RationalSymbol)> {
    let inside = f.poles().iter().all(|p| p.loc == Location::Inside);
    let outside = f.poles().iter().all(|p| p.loc == Location::Outside);
    if !inside && !outside {
        return None;
    }
    let (_, den) = expand_roots(f.poles()).to_dense();
    let d = den.len() as i64 - 1;
    let mut rest: BTreeMap<i64, Complex64> = f.num().iter().collect();
    let mut quotient = BTreeMap::new();
    let subtract = |rest: &mut BTreeMap<i64, Complex64>, shift: i64, q: Complex64| {
        for (j, &dj) in den.iter().enumerate() {
            *rest.entry(shift + j as i64).or_insert(Complex64::new(0.0, 0.0)) -= q * dj;
        }
    };
    if inside {
        // Quotient terms z^(k-d) for k ≥ d, leading coefficient of den is 1.
        while let Some((&k, &c)) = rest.iter().next_back().filter(|(&k, _)| k >= d) {
            rest.remove(&k);
            if c != Complex64::new(0.0, 0.0) {
                quotient.insert(k - d, c);
                subtract(&mut rest, k - d, c);
                rest.remove(&k);
            }
        }
    } else {
        // Quotient terms z^k for k < 0, dividing by den(0) ≠ 0.
        while let Some((&k, &c)) = rest.iter().next().filter(|(&k, _)| k < 0) {
            rest.remove(&k);
            if c != Complex64::new(0.0, 0.0) {
                let q = c / den[0];
                quotient.insert(k, q);
                subtract(&mut rest, k, q);
                rest.remove(&k);
            }
        }
    }
    let scale = f.num().max_abs();
    let polynomial = RationalSymbol::from_laurent(LaurentPoly::from_terms(quotient));
    let remainder = LaurentPoly::from_terms(rest).pruned(scale * 1e-15);
    let fraction = if remainder.is_zero() { RationalSymbol::zero() } else { RationalSymbol::from_parts(remainder, f.poles().to_vec()) };
    Some(if inside { (polynomial, fraction) } else { (fraction, polynomial) })
}

/// The pair `(P⁺f, P⁻f)`.
pub fn riesz_split(f: &RationalSymbol) -> Result<(RationalSymbol, RationalSymbol)> {
    if f.has_pole_on_circle() {
        return Err(Error::PoleOnCircle);
    }
    if f.is_laurent() {
        let plus = LaurentPoly::from_terms(f.num().iter().filter(|&(k, _)| k >= 0));
        let minus = LaurentPoly::from_terms(f.num().iter().filter(|&(k, _)| k < 0));
        return Ok((RationalSymbol::from_laurent(plus), RationalSymbol::from_laurent(minus)));
    }
    if let Some(parts) = one_sided_split(f) {
        return Ok(parts);
    }
    let terms = reciprocal_denominator(f.poles());
    let outside: Vec<Root> = f.poles().iter().filter(|p| p.loc == Location::Outside).copied().collect();
    let inside: Vec<Root> = f.poles().iter().filter(|p| p.loc == Location::Inside).copied().collect();
    let mut plus = SideAccumulator::new(outside);
    let mut minus = SideAccumulator::new(inside);
    let mut scale = 0.0f64;
    for (k, nk) in f.num().iter() {
        for t in &terms {
            let p = t.pole.value;
            for (i0, &c) in t.coeffs.iter().enumerate() {
                let i = i0 + 1;
                let w = nk * c;
                if w == Complex64::new(0.0, 0.0) {
                    continue;
                }
                scale = scale.max(w.norm());
                let ii = i as i64;
                match t.pole.loc {
                    Location::Outside if k >= 0 => plus.add_fraction(p, i, k, w),
                    Location::Inside if k <= 0 => minus.add_fraction(p, i, k, w),
                    Location::Inside => {
                        // z^k / (z-p)^i with k > 0, p inside.
                        for n in 0..=(k - ii) {
                            let coef = binom(n + ii - 1, ii - 1) * p.powi(n as i32);
                            plus.add_monomial(k - n - ii, w * coef);
                        }
                        for r in 0..ii.min(k + 1) {
                            let coef = binom(k, r) * p.powi((k - r) as i32);
                            minus.add_fraction(p, (ii - r) as usize, 0, w * coef);
                        }
                    }
                    Location::Outside => {
                        // z^{-t} / (z-p)^i with t > 0, p outside.
                        let t_ = -k;
                        let base = (-p).powi(-(i as i32));
                        for n in 0..t_ {
                            let coef = base * binom(n + ii - 1, ii - 1) * p.powi(-(n as i32));
                            minus.add_monomial(n - t_, w * coef);
                        }
                        for r in 0..ii {
                            let s = if r % 2 == 0 { 1.0 } else { -1.0 };
                            let coef = s * binom(t_ + r - 1, r) * p.powi(-((t_ + r) as i32));
                            plus.add_fraction(p, (ii - r) as usize, 0, w * coef);
                        }
                    }
                    Location::On => unreachable!(),
                }
            }
        }
    }
    Ok((plus.finish(scale), minus.finish(scale)))
}

/// `P⁺f` or `P⁻f`.
pub fn riesz_project(f: &RationalSymbol, side: Side) -> Result<RationalSymbol> {
    let (plus, minus) = riesz_split(f)?;
    Ok(match side {
        Side::Plus => plus,
        Side::Minus => minus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn simple_pole(p: f64) -> RationalSymbol {
        RationalSymbol::from_zpk(c(1.0), 0, &[], &[Root::new(c(p), 1)])
    }

    #[test]
    fn coefficient_of_inside_pole() {
        let f = simple_pole(0.5);
        assert!((fourier_coefficient(&f, -3).unwrap() - c(0.25)).norm() < 1e-15);
        assert_eq!(fourier_coefficient(&f, 0).unwrap(), c(0.0));
    }

    #[test]
    fn coefficient_of_outside_pole_and_polynomial() {
        assert_eq!(fourier_coefficient(&simple_pole(2.0), -1).unwrap(), c(0.0));
        let g = RationalSymbol::from_laurent(LaurentPoly::from_real(&[(2, 2.0), (0, 3.0)]));
        assert_eq!(fourier_coefficient(&g, 0).unwrap(), c(3.0));
    }

    #[test]
    fn split_laurent() {
        let f = RationalSymbol::from_laurent(LaurentPoly::from_real(&[(2, 2.0), (0, 3.0), (-1, 5.0)]));
        let (p, m) = riesz_split(&f).unwrap();
        assert!(p.approx_eq(&RationalSymbol::from_laurent(LaurentPoly::from_real(&[(2, 2.0), (0, 3.0)])), 0.0));
        assert!(m.approx_eq(&RationalSymbol::from_laurent(LaurentPoly::from_real(&[(-1, 5.0)])), 0.0));
    }

    #[test]
    fn split_single_poles() {
        assert!(riesz_project(&simple_pole(0.5), Side::Plus).unwrap().is_zero());
        assert!(riesz_project(&simple_pole(2.0), Side::Minus).unwrap().is_zero());
    }

    #[test]
    fn split_is_exact_for_mixed_function() {
        // z^5 (z - 0.3)^{-2} (z - 1.7)^{-1} + 2/z^3
        let f = RationalSymbol::from_zpk(c(1.0), 5, &[], &[Root::new(c(0.3), 2), Root::new(Complex64::new(0.0, 1.7), 1)])
            .add(&RationalSymbol::from_laurent(LaurentPoly::from_real(&[(-3, 2.0)])));
        let (p, m) = riesz_split(&f).unwrap();
        assert!(p.add(&m).approx_eq(&f, 1e-13));
        for n in -12..12 {
            let want = fourier_coefficient(&f, n).unwrap();
            let (gp, gm) = (fourier_coefficient(&p, n).unwrap(), fourier_coefficient(&m, n).unwrap());
            if n >= 0 {
                assert!((gp - want).norm() < 1e-12 && gm.norm() < 1e-12, "n={n}");
            } else {
                assert!((gm - want).norm() < 1e-12 && gp.norm() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn inner_product_of_monomials() {
        let a = RationalSymbol::z_pow(3);
        assert_eq!(inner_product(&a, &a).unwrap(), c(1.0));
        assert_eq!(inner_product(&a, &RationalSymbol::z_pow(2)).unwrap(), c(0.0));
        // ‖1/(z - 1/2)‖² = Σ 4^{-j} = 4/3
        let f = simple_pole(0.5);
        assert!((norm_sq(&f).unwrap() - 4.0 / 3.0).abs() < 1e-14);
    }
}
