//! Symbol pairs, kernel bases and exact kernel membership tests.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::expr::nondegenerate;
use crate::symbol::{membership, norm_sq, riesz_project, riesz_split, RationalSymbol, Side, SpaceTag};
use crate::tol::Tolerances;

/// Symbols `(a, b)` of a paired or transposed paired operator.
#[derive(Debug, Clone, Serialize)]
pub struct SymbolPair {
    pub a: RationalSymbol,
    pub b: RationalSymbol,
    pub nondegenerate: bool,
}

impl SymbolPair {
    /// Validates that neither symbol vanishes identically and both are bounded on the circle.
    pub fn new(a: RationalSymbol, b: RationalSymbol) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::DegenerateSymbol("symbols must not vanish identically".into()));
        }
        if !membership(&a, SpaceTag::L2) || !membership(&b, SpaceTag::L2) {
            return Err(Error::SymbolNotBounded);
        }
        let nondegenerate = nondegenerate(&a, &b);
        Ok(Self { a, b, nondegenerate })
    }

    /// `(b, a)`.
    pub fn swapped(&self) -> Self {
        Self { a: self.b.clone(), b: self.a.clone(), nondegenerate: self.nondegenerate }
    }

    /// `a / b`.
    pub fn quotient(&self) -> Result<RationalSymbol> {
        self.a.div(&self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelStatus {
    Exact,
    Empty,
    NeedsOracle,
}

/// Result of one exact check on a basis element.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessCheck {
    pub element: usize,
    pub check: String,
    pub passed: bool,
    pub residual: f64,
}

/// A spanning set for a kernel.
#[derive(Debug, Clone, Serialize)]
pub struct KernelBasis {
    pub status: KernelStatus,
    /// `None` when the dimension is not determined exactly.
    pub dimension: Option<usize>,
    pub basis: Vec<RationalSymbol>,
    /// `(φ₊, φ₋)` components for paired-operator kernels.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<(RationalSymbol, RationalSymbol)>,
    pub witness_checks: Vec<WitnessCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
}

impl KernelBasis {
    pub fn empty(certificate: impl Into<String>) -> Self {
        Self {
            status: KernelStatus::Empty,
            dimension: Some(0),
            basis: Vec::new(),
            pairs: Vec::new(),
            witness_checks: Vec::new(),
            certificate: Some(certificate.into()),
        }
    }

    pub fn needs_oracle(reason: impl Into<String>) -> Self {
        Self {
            status: KernelStatus::NeedsOracle,
            dimension: None,
            basis: Vec::new(),
            pairs: Vec::new(),
            witness_checks: Vec::new(),
            certificate: Some(reason.into()),
        }
    }

    pub fn exact(basis: Vec<RationalSymbol>) -> Self {
        let n = basis.len();
        Self {
            status: if n == 0 { KernelStatus::Empty } else { KernelStatus::Exact },
            dimension: Some(n),
            basis,
            pairs: Vec::new(),
            witness_checks: Vec::new(),
            certificate: None,
        }
    }

    pub fn dim(&self) -> Option<usize> {
        self.dimension
    }

    pub fn all_checks_pass(&self) -> bool {
        self.witness_checks.iter().all(|c| c.passed)
    }
}

/// Three-valued decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    True,
    False,
    NeedsOracle,
}

/// Decision with an optional verified witness.
#[derive(Debug, Clone, Serialize)]
pub struct Nontriviality {
    pub decision: Decision,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<RationalSymbol>,
    pub certificate: String,
}

impl Nontriviality {
    pub fn is_true(&self) -> bool {
        self.decision == Decision::True
    }
}

/// L² norm, or infinity if `f` is not square integrable.
pub fn l2_norm(f: &RationalSymbol) -> f64 {
    norm_sq(f).map(f64::sqrt).unwrap_or(f64::INFINITY)
}

/// True when `part` is negligible next to a function of L² norm `scale`.
pub fn negligible(part: &RationalSymbol, scale: f64, eps: f64) -> bool {
    part.is_zero() || l2_norm(part) <= eps * scale
}

/// `a P⁺f + b P⁻f`, with the relative residual of the cancellation.
pub fn paired_residual(f: &RationalSymbol, p: &SymbolPair) -> Result<f64> {
    if !membership(f, SpaceTag::L2) {
        return Err(Error::PoleOnCircle);
    }
    let (fp, fm) = riesz_split(f)?;
    let u = p.a.mul(&fp);
    let v = p.b.mul(&fm);
    let h = u.add(&v);
    if h.is_zero() {
        return Ok(0.0);
    }
    let scale = l2_norm(&u).max(l2_norm(&v));
    Ok(l2_norm(&h) / scale)
}

/// Exact test `a P⁺f + b P⁻f ≡ 0`.
pub fn member_s(f: &RationalSymbol, p: &SymbolPair) -> Result<bool> {
    Ok(paired_residual(f, p)? <= Tolerances::DEFAULT.eps_eq)
}

/// Relative size of `P⁺(af)` and `P⁻(bf)`.
pub fn transposed_residual(f: &RationalSymbol, p: &SymbolPair) -> Result<f64> {
    if !membership(f, SpaceTag::L2) {
        return Err(Error::PoleOnCircle);
    }
    let af = p.a.mul(f);
    let bf = p.b.mul(f);
    let up = riesz_project(&af, Side::Plus)?;
    let vm = riesz_project(&bf, Side::Minus)?;
    let r1 = if up.is_zero() { 0.0 } else { l2_norm(&up) / l2_norm(&af) };
    let r2 = if vm.is_zero() { 0.0 } else { l2_norm(&vm) / l2_norm(&bf) };
    Ok(r1.max(r2))
}

/// Exact test `P⁺(af) ≡ 0 ∧ P⁻(bf) ≡ 0`.
pub fn member_sigma(f: &RationalSymbol, p: &SymbolPair) -> Result<bool> {
    Ok(transposed_residual(f, p)? <= Tolerances::DEFAULT.eps_eq)
}
