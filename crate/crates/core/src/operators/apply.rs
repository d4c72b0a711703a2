//! Exact application of operator expressions to rational functions.

use crate::error::{Error, Result};
use crate::operators::expr::{Node, OperatorExpression, Space};
use crate::symbol::{membership, riesz_project, riesz_split, RationalSymbol, Side, SpaceTag};

fn in_space(f: &RationalSymbol, s: Space) -> bool {
    match s {
        Space::L2 => membership(f, SpaceTag::L2),
        Space::H2Plus => membership(f, SpaceTag::H2Plus),
        Space::H2Minus => membership(f, SpaceTag::H2Minus),
    }
}

fn require(f: &RationalSymbol, s: Space) -> Result<()> {
    if !membership(f, SpaceTag::L2) {
        return Err(Error::PoleOnCircle);
    }
    if !in_space(f, s) {
        return Err(Error::DomainMismatch(format!("argument is not in {s:?}")));
    }
    Ok(())
}

fn eval(node: &Node, f: &RationalSymbol) -> Result<RationalSymbol> {
    Ok(match node {
        Node::Paired { a, b, .. } => {
            let (fp, fm) = riesz_split(f)?;
            a.mul(&fp).add(&b.mul(&fm))
        }
        Node::Transposed { a, b, .. } => {
            riesz_project(&a.mul(f), Side::Plus)?.add(&riesz_project(&b.mul(f), Side::Minus)?)
        }
        Node::Toeplitz(a) => {
            require(f, Space::H2Plus)?;
            riesz_project(&a.mul(f), Side::Plus)?
        }
        Node::DualToeplitz(a) => {
            require(f, Space::H2Minus)?;
            riesz_project(&a.mul(f), Side::Minus)?
        }
        Node::Hankel(a) => {
            require(f, Space::H2Plus)?;
            riesz_project(&a.mul(f), Side::Minus)?
        }
        Node::HankelTilde(a) => {
            require(f, Space::H2Minus)?;
            riesz_project(&a.mul(f), Side::Plus)?
        }
        Node::Mult(a) => a.mul(f),
        Node::ProjPlus => riesz_project(f, Side::Plus)?,
        Node::ProjMinus => riesz_project(f, Side::Minus)?,
        Node::Compose(x, y) => eval(x, &eval(y, f)?)?,
        Node::Sum(x, y) => eval(x, f)?.add(&eval(y, f)?),
        Node::Scale(s, x) => eval(x, f)?.scale(*s),
        Node::Commutator(x, y) => eval(x, &eval(y, f)?)?.sub(&eval(y, &eval(x, f)?)?),
    })
}

/// The exact image `X f`.
pub fn apply_exact(x: &OperatorExpression, f: &RationalSymbol) -> Result<RationalSymbol> {
    require(f, x.domain)?;
    eval(&x.node, f)
}

/// Applies a raw node, validating it first.
pub fn apply_node(node: &Node, f: &RationalSymbol) -> Result<RationalSymbol> {
    apply_exact(&OperatorExpression::new(node.clone())?, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::LaurentPoly;

    fn lp(t: &[(i64, f64)]) -> RationalSymbol {
        RationalSymbol::from_laurent(LaurentPoly::from_real(t))
    }

    #[test]
    fn paired_kills_rem_witness() {
        let s = Node::paired(lp(&[(0, 1.0), (-1, 1.0)]), lp(&[(0, 1.0), (1, 1.0)]));
        let f = lp(&[(0, 1.0), (-1, -1.0)]);
        assert!(apply_node(&s, &f).unwrap().is_zero());
    }

    #[test]
    fn toeplitz_of_conjugate_z() {
        assert!(apply_node(&Node::Toeplitz(RationalSymbol::z_pow(-1)), &RationalSymbol::one()).unwrap().is_zero());
        assert!(apply_node(&Node::Toeplitz(RationalSymbol::one()), &RationalSymbol::z_pow(-1)).is_err());
    }

    #[test]
    fn commutator_with_shift() {
        // [S_{z,1}, M_z](1/z) = (z - 1) f_{-1}
        let c = Node::commutator(Node::paired(RationalSymbol::z_pow(1), RationalSymbol::one()), Node::Mult(RationalSymbol::z_pow(1)));
        let out = apply_node(&c, &RationalSymbol::z_pow(-1)).unwrap();
        assert!(out.approx_eq(&lp(&[(1, 1.0), (0, -1.0)]), 0.0));
    }
}
