//! Hardy-space and related membership tests for rational functions.

use serde::{Deserialize, Serialize};

use crate::factor::roots::Location;
use crate::symbol::RationalSymbol;
use crate::tol::Tolerances;

/// Function spaces a rational symbol can be tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpaceTag {
    L2,
    H2Plus,
    H2Minus,
    Hinf,
    HinfBar,
    InnerPlus,
    OuterPlus,
    OuterMinus,
}

fn poles_only(f: &RationalSymbol, allowed: Location) -> bool {
    f.poles().iter().all(|p| p.loc == allowed)
}

/// Membership with default tolerances.
pub fn membership(f: &RationalSymbol, space: SpaceTag) -> bool {
    membership_with(f, space, &Tolerances::DEFAULT)
}

pub fn membership_with(f: &RationalSymbol, space: SpaceTag, tol: &Tolerances) -> bool {
    let lo = f.num().lo().unwrap_or(0);
    match space {
        SpaceTag::L2 => !f.has_pole_on_circle(),
        SpaceTag::H2Plus | SpaceTag::Hinf => f.is_zero() || (poles_only(f, Location::Outside) && lo >= 0),
        SpaceTag::H2Minus => f.is_zero() || (poles_only(f, Location::Inside) && f.degree_at_infinity() < 0),
        SpaceTag::HinfBar => f.is_zero() || (poles_only(f, Location::Inside) && f.degree_at_infinity() <= 0),
        SpaceTag::InnerPlus => {
            if f.is_zero() || !membership_with(f, SpaceTag::Hinf, tol) {
                return false;
            }
            let Ok(g) = f.with_zeros() else { return false };
            g.mul_with(&g.circle_conjugate(), tol).approx_eq(&RationalSymbol::one(), 10.0 * tol.eps_eq)
        }
        SpaceTag::OuterPlus => {
            if f.is_zero() || !membership_with(f, SpaceTag::H2Plus, tol) || lo > 0 {
                return false;
            }
            match f.zeros_with(tol) {
                Ok(zs) => zs.iter().all(|z| z.loc != Location::Inside),
                Err(_) => false,
            }
        }
        SpaceTag::OuterMinus => {
            !f.is_zero()
                && membership_with(f, SpaceTag::H2Minus, tol)
                && membership_with(&f.circle_conjugate().shift(-1), SpaceTag::OuterPlus, tol)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::roots::Root;
    use crate::symbol::LaurentPoly;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn examples() {
        let f = RationalSymbol::from_zpk(c(1.0), 0, &[], &[Root::new(c(0.5), 1)]);
        assert!(membership(&f, SpaceTag::H2Minus));
        assert!(!membership(&f, SpaceTag::H2Plus));
        let g = RationalSymbol::from_laurent(LaurentPoly::from_real(&[(0, 1.0), (-1, 1.0)]));
        assert!(membership(&g, SpaceTag::L2));
        let h = RationalSymbol::from_zpk(c(1.0), 0, &[], &[Root::new(c(-1.0), 1)]);
        assert!(!membership(&h, SpaceTag::L2));
        let b = RationalSymbol::from_num_den(&LaurentPoly::from_real(&[(1, 1.0), (0, -0.5)]), &LaurentPoly::from_real(&[(0, 1.0), (1, -0.5)])).unwrap();
        assert!(membership(&b, SpaceTag::InnerPlus));
        assert!(!membership(&b, SpaceTag::OuterPlus));
    }

    #[test]
    fn outer_functions() {
        let f = RationalSymbol::from_laurent(LaurentPoly::from_real(&[(0, 2.0), (1, 1.0)]));
        assert!(membership(&f, SpaceTag::OuterPlus));
        assert!(!membership(&RationalSymbol::z_pow(1), SpaceTag::OuterPlus));
        assert!(membership(&RationalSymbol::z_pow(-1), SpaceTag::OuterMinus));
        assert!(!membership(&RationalSymbol::z_pow(-2), SpaceTag::OuterMinus));
        // z on the circle is not in H2-.
        assert!(!membership(&RationalSymbol::one(), SpaceTag::H2Minus));
        assert!(membership(&RationalSymbol::one(), SpaceTag::HinfBar));
    }
}
