//! Inner–outer factorization of rational Hardy-space functions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::roots::Location;
use crate::symbol::{membership, RationalSymbol, Side, SpaceTag};

/// `f = inner · outer`.
///
/// On the minus side `inner` is the boundary conjugate of an inner function and
/// `outer` lies in H²₋ with `z̄ · conj(outer)` outer in H²₊.
#[derive(Debug, Clone, Serialize)]
pub struct InnerOuterPair {
    pub inner: RationalSymbol,
    pub outer: RationalSymbol,
    pub side: Side,
}

/// `z^k Π B_α` over the zeros of `f` in the open disc, with normalized Blaschke factors.
fn inner_part(f: &RationalSymbol) -> Result<RationalSymbol> {
    let mut inner = RationalSymbol::z_pow(f.num().lo().unwrap_or(0).max(0));
    for z in f.zeros()?.iter().filter(|z| z.loc == Location::Inside) {
        let b = RationalSymbol::blaschke(z.value);
        for _ in 0..z.mult {
            inner = inner.mul(&b);
        }
    }
    Ok(inner)
}

fn factor_plus(f: &RationalSymbol) -> Result<(RationalSymbol, RationalSymbol)> {
    let f = f.with_zeros()?;
    let inner = inner_part(&f)?;
    let outer = f.mul(&inner.inv()?);
    Ok((inner, outer))
}

pub fn inner_outer(f: &RationalSymbol, side: Side) -> Result<InnerOuterPair> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    match side {
        Side::Plus => {
            if !membership(f, SpaceTag::H2Plus) {
                return Err(Error::NotInHardySpace);
            }
            let (inner, outer) = factor_plus(f)?;
            Ok(InnerOuterPair { inner, outer, side })
        }
        Side::Minus => {
            if !membership(f, SpaceTag::H2Minus) {
                return Err(Error::NotInHardySpace);
            }
            // g = z̄ conj(f) lies in H²₊; f = z̄ conj(θ) conj(G).
            let g = f.circle_conjugate().shift(-1);
            let (theta, big_g) = factor_plus(&g)?;
            Ok(InnerOuterPair { inner: theta.circle_conjugate(), outer: big_g.circle_conjugate().shift(-1), side })
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::roots::Root;
    use crate::symbol::probe_points;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn blaschke_extraction() {
        let f = RationalSymbol::from_zpk(c(1.0), 0, &[Root::new(c(1.0 / 3.0), 1)], &[Root::new(c(-2.0), 1)]);
        let io = inner_outer(&f, Side::Plus).unwrap();
        assert!(membership(&io.inner, SpaceTag::InnerPlus));
        assert!(membership(&io.outer, SpaceTag::OuterPlus));
        assert!(io.inner.mul(&io.outer).approx_eq(&f, 1e-12));
        for z in probe_points(8) {
            assert!((io.inner.eval(z).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn already_outer() {
        let f = RationalSymbol::from_zpk(c(1.0), 0, &[], &[Root::new(c(2.0), 1)]);
        let io = inner_outer(&f, Side::Plus).unwrap();
        assert!(io.inner.approx_eq(&RationalSymbol::one(), 0.0));
        assert!(io.outer.approx_eq(&f, 1e-15));
    }

    #[test]
    fn minus_side() {
        let io = inner_outer(&RationalSymbol::z_pow(-1), Side::Minus).unwrap();
        assert!(io.inner.approx_eq(&RationalSymbol::one(), 0.0));
        assert!(io.outer.approx_eq(&RationalSymbol::z_pow(-1), 0.0));
        assert!(membership(&io.outer, SpaceTag::OuterMinus));
        // 1/z^3 = z̄² · z̄ : conj-inner z^{-2}, outer z^{-1}
        let io = inner_outer(&RationalSymbol::z_pow(-3), Side::Minus).unwrap();
        assert!(io.inner.approx_eq(&RationalSymbol::z_pow(-2), 0.0));
        assert!(io.outer.approx_eq(&RationalSymbol::z_pow(-1), 0.0));
    }

    #[test]
    fn errors() {
        assert_eq!(inner_outer(&RationalSymbol::zero(), Side::Plus).unwrap_err(), Error::ZeroFunction);
        assert_eq!(inner_outer(&RationalSymbol::z_pow(-1), Side::Plus).unwrap_err(), Error::NotInHardySpace);
    }
}
