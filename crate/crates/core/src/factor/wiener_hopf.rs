//! Winding index and Wiener–Hopf factorization of rational symbols.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::roots::{Location, Root};
use crate::symbol::{membership, probe_points, RationalSymbol, SpaceTag};

/// `g = g_minus · z^kappa · g_plus`.
#[derive(Debug, Clone, Serialize)]
pub struct WHFactorization {
    pub g_minus: RationalSymbol,
    pub kappa: i64,
    pub g_plus: RationalSymbol,
}

fn regular_roots(g: &RationalSymbol) -> Result<(Vec<Root>, Vec<Root>)> {
    if g.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let zeros = g.zeros()?;
    let poles = g.poles().to_vec();
    if zeros.iter().chain(poles.iter()).any(|r| r.loc == Location::On) {
        return Err(Error::ZeroOrPoleOnCircle);
    }
    Ok((zeros, poles))
}

fn count_inside(roots: &[Root]) -> i64 {
    roots.iter().filter(|r| r.loc == Location::Inside).map(|r| r.mult as i64).sum()
}

/// Winding number of `g` around the origin along the circle.
pub fn winding_index(g: &RationalSymbol) -> Result<i64> {
    let (zeros, poles) = regular_roots(g)?;
    Ok(count_inside(&zeros) - count_inside(&poles) + g.num().lo().unwrap_or(0))
}

pub fn wiener_hopf(g: &RationalSymbol) -> Result<WHFactorization> {
    let (zeros, poles) = regular_roots(g)?;
    let pick = |rs: &[Root], loc: Location| -> Vec<Root> { rs.iter().filter(|r| r.loc == loc).copied().collect() };
    let (zi, zo) = (pick(&zeros, Location::Inside), pick(&zeros, Location::Outside));
    let (pi, po) = (pick(&poles, Location::Inside), pick(&poles, Location::Outside));
    let (nzi, npi) = (count_inside(&zi), count_inside(&pi));
    let one = Complex64::new(1.0, 0.0);
    let g_minus = RationalSymbol::from_zpk(one, npi - nzi, &zi, &pi);
    let g_plus = RationalSymbol::from_zpk(g.num().leading(), 0, &zo, &po);
    let kappa = g.num().lo().unwrap_or(0) + nzi - npi;
    let wh = WHFactorization { g_minus, kappa, g_plus };
    certify(g, &wh)?;
    Ok(wh)
}

fn certify(g: &RationalSymbol, wh: &WHFactorization) -> Result<()> {
    let ok_sides = membership(&wh.g_plus, SpaceTag::Hinf)
        && membership(&wh.g_plus.inv()?, SpaceTag::Hinf)
        && membership(&wh.g_minus, SpaceTag::HinfBar)
        && membership(&wh.g_minus.inv()?, SpaceTag::HinfBar);
    let ok_product = probe_points(16).into_iter().all(|z| {
        let lhs = wh.g_minus.eval(z) * z.powi(wh.kappa as i32) * wh.g_plus.eval(z);
        let rhs = g.eval(z);
        (lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1e-300)
    });
    if ok_sides && ok_product {
        Ok(())
    } else {
        Err(Error::DegenerateSymbol("Wiener-Hopf factors failed certification".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::LaurentPoly;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ratio() -> RationalSymbol {
        RationalSymbol::from_zpk(c(1.0), 0, &[Root::new(c(2.0), 1)], &[Root::new(c(0.5), 1)])
    }

    #[test]
    fn winding_examples() {
        assert_eq!(winding_index(&RationalSymbol::z_pow(-1)).unwrap(), -1);
        assert_eq!(winding_index(&ratio()).unwrap(), -1);
        let g = RationalSymbol::from_zpk(c(1.0), 0, &[Root::new(c(0.5), 1), Root::new(c(1.0 / 3.0), 1)], &[]);
        assert_eq!(winding_index(&g).unwrap(), 2);
        let h = RationalSymbol::from_laurent(LaurentPoly::from_real(&[(0, 1.0), (1, 1.0)]));
        assert_eq!(winding_index(&h).unwrap_err(), Error::ZeroOrPoleOnCircle);
    }

    #[test]
    fn factor_examples() {
        let wh = wiener_hopf(&RationalSymbol::z_pow(-1)).unwrap();
        assert_eq!(wh.kappa, -1);
        assert!(wh.g_minus.approx_eq(&RationalSymbol::one(), 0.0));
        assert!(wh.g_plus.approx_eq(&RationalSymbol::one(), 0.0));

        let wh = wiener_hopf(&ratio()).unwrap();
        assert_eq!(wh.kappa, -1);
        // (1 - 1/(2z))^{-1} = z / (z - 1/2)
        let expect_minus = RationalSymbol::from_zpk(c(1.0), 1, &[], &[Root::new(c(0.5), 1)]);
        assert!(wh.g_minus.approx_eq(&expect_minus, 1e-15));
        assert!(wh.g_plus.approx_eq(&RationalSymbol::from_laurent(LaurentPoly::from_real(&[(1, 1.0), (0, -2.0)])), 1e-15));

        let g = RationalSymbol::from_laurent(LaurentPoly::from_real(&[(1, 1.0), (0, -0.5)]));
        let wh = wiener_hopf(&g).unwrap();
        assert_eq!(wh.kappa, 1);
        assert!(wh.g_minus.approx_eq(&RationalSymbol::from_laurent(LaurentPoly::from_real(&[(0, 1.0), (-1, -0.5)])), 1e-15));
        assert!(wh.g_plus.approx_eq(&RationalSymbol::one(), 1e-15));
    }
}
