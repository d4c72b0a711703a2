//! Operator expressions over paired, Toeplitz, Hankel, multiplication and projection nodes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbol::{membership, RationalSymbol, SpaceTag};
use crate::tol::Tolerances;

/// Space an operator acts on or maps into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    L2,
    H2Plus,
    H2Minus,
}

impl Space {
    pub fn contains(self, other: Space) -> bool {
        self == other || self == Space::L2
    }

    fn join(self, other: Space) -> Space {
        if self == other {
            self
        } else {
            Space::L2
        }
    }
}

/// Serializable operator syntax, as accepted from JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Ast {
    Paired { a: RationalSymbol, b: RationalSymbol },
    Transposed { a: RationalSymbol, b: RationalSymbol },
    Toeplitz { a: RationalSymbol },
    DualToeplitz { a: RationalSymbol },
    Hankel { a: RationalSymbol },
    HankelTilde { a: RationalSymbol },
    Mult { eta: RationalSymbol },
    ProjPlus,
    ProjMinus,
    Compose { x: Box<Ast>, y: Box<Ast> },
    Sum { x: Box<Ast>, y: Box<Ast> },
    Scale { lambda: [f64; 2], x: Box<Ast> },
    Adjoint { x: Box<Ast> },
    Commutator { x: Box<Ast>, y: Box<Ast> },
}

/// Validated operator node. Adjoints have been pushed down to the leaves.
#[derive(Debug, Clone)]
pub enum Node {
    /// `aP⁺ + bP⁻`.
    Paired { a: RationalSymbol, b: RationalSymbol, nondegenerate: bool },
    /// `P⁺a + P⁻b`.
    Transposed { a: RationalSymbol, b: RationalSymbol, nondegenerate: bool },
    /// `P⁺a` on H²₊.
    Toeplitz(RationalSymbol),
    /// `P⁻a` on H²₋.
    DualToeplitz(RationalSymbol),
    /// `P⁻a` from H²₊ to H²₋.
    Hankel(RationalSymbol),
    /// `P⁺a` from H²₋ to H²₊.
    HankelTilde(RationalSymbol),
    Mult(RationalSymbol),
    ProjPlus,
    ProjMinus,
    /// `X ∘ Y`, applied right to left.
    Compose(Box<Node>, Box<Node>),
    Sum(Box<Node>, Box<Node>),
    Scale(Complex64, Box<Node>),
    /// `XY - YX`.
    Commutator(Box<Node>, Box<Node>),
}

/// A validated operator with its domain and codomain.
#[derive(Debug, Clone)]
pub struct OperatorExpression {
    pub node: Node,
    pub domain: Space,
    pub codomain: Space,
}

fn bounded(a: &RationalSymbol) -> Result<RationalSymbol> {
    if !a.is_finite() || !membership(a, SpaceTag::L2) {
        return Err(Error::SymbolNotBounded);
    }
    Ok(a.clone())
}

/// True when `a` and `b` differ as rational functions.
pub fn nondegenerate(a: &RationalSymbol, b: &RationalSymbol) -> bool {
    !a.approx_eq(b, Tolerances::DEFAULT.eps_eq)
}

impl Node {
    pub fn paired(a: RationalSymbol, b: RationalSymbol) -> Node {
        let nondegenerate = nondegenerate(&a, &b);
        Node::Paired { a, b, nondegenerate }
    }

    pub fn transposed(a: RationalSymbol, b: RationalSymbol) -> Node {
        let nondegenerate = nondegenerate(&a, &b);
        Node::Transposed { a, b, nondegenerate }
    }

    pub fn compose(x: Node, y: Node) -> Node {
        Node::Compose(Box::new(x), Box::new(y))
    }

    pub fn sum(x: Node, y: Node) -> Node {
        Node::Sum(Box::new(x), Box::new(y))
    }

    pub fn scale(s: Complex64, x: Node) -> Node {
        Node::Scale(s, Box::new(x))
    }

    pub fn commutator(x: Node, y: Node) -> Node {
        Node::Commutator(Box::new(x), Box::new(y))
    }

    /// `X - Y`.
    pub fn difference(x: Node, y: Node) -> Node {
        Node::sum(x, Node::scale(Complex64::new(-1.0, 0.0), y))
    }

    /// The Hilbert-space adjoint, expressed without an adjoint node.
    pub fn adjoint(&self) -> Node {
        let c = |a: &RationalSymbol| a.circle_conjugate();
        match self {
            Node::Paired { a, b, .. } => Node::transposed(c(a), c(b)),
            Node::Transposed { a, b, .. } => Node::paired(c(a), c(b)),
            Node::Toeplitz(a) => Node::Toeplitz(c(a)),
            Node::DualToeplitz(a) => Node::DualToeplitz(c(a)),
            Node::Hankel(a) => Node::HankelTilde(c(a)),
            Node::HankelTilde(a) => Node::Hankel(c(a)),
            Node::Mult(a) => Node::Mult(c(a)),
            Node::ProjPlus => Node::ProjPlus,
            Node::ProjMinus => Node::ProjMinus,
            Node::Compose(x, y) => Node::compose(y.adjoint(), x.adjoint()),
            Node::Sum(x, y) => Node::sum(x.adjoint(), y.adjoint()),
            Node::Scale(s, x) => Node::scale(s.conj(), x.adjoint()),
            Node::Commutator(x, y) => Node::commutator(y.adjoint(), x.adjoint()),
        }
    }

    /// Domain and codomain, or a description of the mismatch.
    pub fn spaces(&self) -> Result<(Space, Space)> {
        use Space::*;
        Ok(match self {
            Node::Paired { .. } | Node::Transposed { .. } | Node::Mult(_) => (L2, L2),
            Node::Toeplitz(_) => (H2Plus, H2Plus),
            Node::DualToeplitz(_) => (H2Minus, H2Minus),
            Node::Hankel(_) => (H2Plus, H2Minus),
            Node::HankelTilde(_) => (H2Minus, H2Plus),
            Node::ProjPlus => (L2, H2Plus),
            Node::ProjMinus => (L2, H2Minus),
            Node::Compose(x, y) => {
                let (dx, cx) = x.spaces()?;
                let (dy, cy) = y.spaces()?;
                if !dx.contains(cy) {
                    return Err(Error::DomainMismatch(format!("composition maps {cy:?} into an operator on {dx:?}")));
                }
                (dy, cx)
            }
            Node::Sum(x, y) => {
                let (dx, cx) = x.spaces()?;
                let (dy, cy) = y.spaces()?;
                if dx != dy {
                    return Err(Error::DomainMismatch(format!("sum of operators on {dx:?} and {dy:?}")));
                }
                (dx, cx.join(cy))
            }
            Node::Scale(_, x) => x.spaces()?,
            Node::Commutator(x, y) => {
                let (dx, cx) = x.spaces()?;
                let (dy, cy) = y.spaces()?;
                if dx != dy || !dx.contains(cy) || !dy.contains(cx) {
                    return Err(Error::DomainMismatch(format!("commutator of operators {dx:?}->{cx:?} and {dy:?}->{cy:?}")));
                }
                (dx, cx.join(cy))
            }
        })
    }

    /// Visits every symbol in the expression.
    pub fn symbols(&self) -> Vec<&RationalSymbol> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols<'a>(&'a self, out: &mut Vec<&'a RationalSymbol>) {
        match self {
            Node::Paired { a, b, .. } | Node::Transposed { a, b, .. } => {
                out.push(a);
                out.push(b);
            }
            Node::Toeplitz(a) | Node::DualToeplitz(a) | Node::Hankel(a) | Node::HankelTilde(a) | Node::Mult(a) => out.push(a),
            Node::ProjPlus | Node::ProjMinus => {}
            Node::Compose(x, y) | Node::Sum(x, y) | Node::Commutator(x, y) => {
                x.collect_symbols(out);
                y.collect_symbols(out);
            }
            Node::Scale(_, x) => x.collect_symbols(out),
        }
    }
}

impl OperatorExpression {
    /// Validates a node: every symbol bounded on the circle and spaces compatible.
    pub fn new(node: Node) -> Result<Self> {
        for s in node.symbols() {
            bounded(s)?;
        }
        let (domain, codomain) = node.spaces()?;
        Ok(Self { node, domain, codomain })
    }

    pub fn adjoint(&self) -> Result<Self> {
        Self::new(self.node.adjoint())
    }
}

fn lower(ast: &Ast) -> Result<Node> {
    Ok(match ast {
        Ast::Paired { a, b } => Node::paired(bounded(a)?, bounded(b)?),
        Ast::Transposed { a, b } => Node::transposed(bounded(a)?, bounded(b)?),
        Ast::Toeplitz { a } => Node::Toeplitz(bounded(a)?),
        Ast::DualToeplitz { a } => Node::DualToeplitz(bounded(a)?),
        Ast::Hankel { a } => Node::Hankel(bounded(a)?),
        Ast::HankelTilde { a } => Node::HankelTilde(bounded(a)?),
        Ast::Mult { eta } => Node::Mult(bounded(eta)?),
        Ast::ProjPlus => Node::ProjPlus,
        Ast::ProjMinus => Node::ProjMinus,
        Ast::Compose { x, y } => Node::compose(lower(x)?, lower(y)?),
        Ast::Sum { x, y } => Node::sum(lower(x)?, lower(y)?),
        Ast::Scale { lambda, x } => {
            if !lambda.iter().all(|v| v.is_finite()) {
                return Err(Error::InvalidExpression("non-finite scale".into()));
            }
            Node::scale(Complex64::new(lambda[0], lambda[1]), lower(x)?)
        }
        Ast::Adjoint { x } => lower(x)?.adjoint(),
        Ast::Commutator { x, y } => Node::commutator(lower(x)?, lower(y)?),
    })
}

/// Validates an expression tree, normalizing adjoints.
pub fn build(ast: &Ast) -> Result<OperatorExpression> {
    OperatorExpression::new(lower(ast)?)
}

/// Parses and validates an operator from JSON text.
pub fn parse_operator(text: &str) -> Result<OperatorExpression> {
    let ast: Ast = serde_json::from_str(text).map_err(|e| Error::InvalidExpression(e.to_string()))?;
    build(&ast)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{parse_symbol, LaurentPoly};

    #[test]
    fn rem_example_is_nondegenerate() {
        let op = parse_operator(r#"{"op":"paired","a":{"coeffs":{"-1":[1,0],"0":[1,0]}},"b":{"coeffs":{"0":[1,0],"1":[1,0]}}}"#).unwrap();
        assert!(matches!(op.node, Node::Paired { nondegenerate: true, .. }));
    }

    #[test]
    fn adjoint_of_paired_is_transposed() {
        let op = parse_operator(r#"{"op":"adjoint","x":{"op":"paired","a":{"coeffs":{"1":[1,0]}},"b":{"coeffs":{"0":[1,0]}}}}"#).unwrap();
        match op.node {
            Node::Transposed { a, b, .. } => {
                assert!(a.approx_eq(&RationalSymbol::z_pow(-1), 0.0));
                assert!(b.approx_eq(&RationalSymbol::one(), 0.0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unbounded_symbol_rejected() {
        let a = parse_symbol(r#"{"gain":[1,0],"poles":[{"z":[-1,0]}]}"#).unwrap();
        let ast = Ast::Paired { a, b: RationalSymbol::from_laurent(LaurentPoly::one()) };
        assert_eq!(build(&ast).unwrap_err(), Error::SymbolNotBounded);
    }

    #[test]
    fn domain_mismatch() {
        let t = Node::Toeplitz(RationalSymbol::one());
        assert!(OperatorExpression::new(Node::compose(t.clone(), Node::Mult(RationalSymbol::one()))).is_err());
        assert!(OperatorExpression::new(Node::compose(t, Node::ProjPlus)).is_ok());
    }
}
