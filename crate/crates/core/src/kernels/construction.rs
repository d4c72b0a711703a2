//! Symbols of the paired kernel containing a given function, and the map
//! between transposed and paired kernels.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factor::{inner_outer, Location};
use crate::kernels::basis::{member_s, member_sigma, SymbolPair};
use crate::symbol::{membership, riesz_split, RationalSymbol, Side, SpaceTag};
use crate::tol::Tolerances;

/// Numerator and denominator of `f` as H∞ polynomials: `f = num / den`.
fn fraction(f: &RationalSymbol) -> Result<(RationalSymbol, RationalSymbol)> {
    let zpk = f.zpk()?;
    let one = Complex64::new(1.0, 0.0);
    let (zn, zd) = if zpk.zpow >= 0 { (zpk.zpow, 0) } else { (0, -zpk.zpow) };
    let num = RationalSymbol::from_zpk(zpk.gain, zn, &zpk.zeros, &[]);
    let den = RationalSymbol::from_zpk(one, zd, &zpk.poles, &[]);
    Ok((num, den))
}

/// The pair `(a, b)` with `φ₊ + φ₋ ∈ ker S_{a,b}`.
///
/// With `φ₊ = I₊O₊`, `φ₋ = I₋O₋`, `O₊ = H₂/H₁` and `z̄ conj(O₋) = h₂/h₁`:
/// `a = conj(I₊) H₁ conj(h₂)` and `b = −z conj(I₋) conj(h₁) H₂`.
pub fn symbols_from_function(phi_plus: &RationalSymbol, phi_minus: &RationalSymbol) -> Result<SymbolPair> {
    if !membership(phi_plus, SpaceTag::H2Plus) || !membership(phi_minus, SpaceTag::H2Minus) {
        return Err(Error::NotInHardySpaces);
    }
    if phi_plus.is_zero() || phi_minus.is_zero() {
        return Err(Error::DegenerateInput("a nonzero kernel element has both components nonzero".into()));
    }
    let plus = inner_outer(phi_plus, Side::Plus)?;
    let minus = inner_outer(phi_minus, Side::Minus)?;
    let (big_h2, big_h1) = fraction(&plus.outer)?;
    let g = minus.outer.circle_conjugate().shift(-1);
    let (h2, h1) = fraction(&g)?;
    let a = plus.inner.circle_conjugate().mul(&big_h1).mul(&h2.circle_conjugate());
    let b = minus.inner.circle_conjugate().mul(&h1.circle_conjugate()).mul(&big_h2).shift(1).neg();
    SymbolPair::new(a, b)
}

fn has_circle_zero(f: &RationalSymbol) -> Result<bool> {
    Ok(f.zeros()?.iter().any(|z| z.loc == Location::On))
}

/// `(a′, b′)` with `a a′ + b b′ = 1`, when one symbol is invertible.
pub fn partition_of_unity(p: &SymbolPair) -> Result<(RationalSymbol, RationalSymbol)> {
    if !has_circle_zero(&p.b)? {
        Ok((RationalSymbol::zero(), p.b.inv()?))
    } else if !has_circle_zero(&p.a)? {
        Ok((p.a.inv()?, RationalSymbol::zero()))
    } else {
        Err(Error::PartitionOfUnityFails)
    }
}

/// `ψ ↦ (a − b)ψ` from `ker Σ_{a,b}` to `ker S_{a,b}`, or its inverse
/// `φ ↦ a′P⁻φ − b′P⁺φ`.
pub fn j_map(
    psi: &RationalSymbol,
    p: &SymbolPair,
    inverse: bool,
    a_prime: Option<&RationalSymbol>,
    b_prime: Option<&RationalSymbol>,
) -> Result<RationalSymbol> {
    if !membership(psi, SpaceTag::L2) {
        return Err(Error::NotInKernel);
    }
    if !inverse {
        if !member_sigma(psi, p)? {
            return Err(Error::NotInKernel);
        }
        return Ok(p.a.sub(&p.b).mul(psi));
    }
    if !member_s(psi, p)? {
        return Err(Error::NotInKernel);
    }
    let (ap, bp) = match (a_prime, b_prime) {
        (Some(x), Some(y)) => (x.clone(), y.clone()),
        (Some(x), None) => (x.clone(), RationalSymbol::zero()),
        (None, Some(y)) => (RationalSymbol::zero(), y.clone()),
        (None, None) => partition_of_unity(p)?,
    };
    let unity = p.a.mul(&ap).add(&p.b.mul(&bp));
    if !unity.approx_eq(&RationalSymbol::one(), Tolerances::DEFAULT.eps_eq) {
        return Err(Error::PartitionOfUnityFails);
    }
    let (fp, fm) = riesz_split(psi)?;
    Ok(ap.mul(&fm).sub(&bp.mul(&fp)))
}
