//! Helpers shared by the property checks.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factor::{winding_index, Location, Root};
use crate::kernels::{l2_norm, SymbolPair};
use crate::operators::norm::{rank_from_sigma, sup_norm, RankReport};
use crate::operators::{apply_exact, singular_values, Node, OperatorExpression};
use crate::properties::runner::Trial;
use crate::properties::sampler::{ClassConstraint, SamplerProfile};
use crate::symbol::{FourierSeries, RationalSymbol};

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn op(node: Node) -> Result<OperatorExpression> {
    OperatorExpression::new(node)
}

pub fn apply(node: &Node, f: &RationalSymbol) -> Result<RationalSymbol> {
    apply_exact(&op(node.clone())?, f)
}

pub fn mult(f: &RationalSymbol) -> Node {
    Node::Mult(f.clone())
}

/// `P⁺ x P⁻ − P⁻ y P⁺`.
pub fn cross(x: &RationalSymbol, y: &RationalSymbol) -> Node {
    let upper = Node::compose(Node::ProjPlus, Node::compose(mult(x), Node::ProjMinus));
    let lower = Node::compose(Node::ProjMinus, Node::compose(mult(y), Node::ProjPlus));
    Node::difference(upper, lower)
}

/// Number of trapezoid nodes that integrate `|f|²` on the circle to full precision.
fn quadrature_nodes(fs: &[&RationalSymbol]) -> usize {
    let mut span = 0i64;
    let mut rho = 0.0f64;
    for f in fs {
        if let (Some(lo), Some(hi)) = (f.num().lo(), f.num().hi()) {
            span = span.max(hi - lo + f.poles().len() as i64);
        }
        for p in f.poles() {
            let r = p.value.norm();
            rho = rho.max(r.min(1.0 / r));
        }
    }
    let decay = if rho > 0.0 { (40.0 / -rho.ln()).ceil() as usize } else { 0 };
    (4 * span as usize + 64).max(decay).min(1 << 16)
}

/// `‖x − y‖` relative to the larger of `‖x‖`, `‖y‖` and `floor`.
///
/// Both sides are sampled on the circle rather than subtracted symbolically, since bringing them
/// over a common denominator costs more accuracy than the identities being checked.
pub fn rel_diff(x: &RationalSymbol, y: &RationalSymbol, floor: f64) -> f64 {
    let n = quadrature_nodes(&[x, y]);
    let (mut dd, mut xx, mut yy) = (0.0, 0.0, 0.0);
    for k in 0..n {
        let z = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
        let (u, v) = (x.eval(z), y.eval(z));
        dd += (u - v).norm_sqr();
        xx += u.norm_sqr();
        yy += v.norm_sqr();
    }
    if dd == 0.0 {
        return 0.0;
    }
    let m = n as f64;
    (dd / m).sqrt() / (xx / m).sqrt().max((yy / m).sqrt()).max(floor).max(f64::MIN_POSITIVE)
}

pub fn sup(f: &RationalSymbol) -> f64 {
    sup_norm(f)
}

pub fn is_constant(f: &RationalSymbol) -> bool {
    f.poles().is_empty() && f.num().iter().all(|(k, v)| k == 0 || v == Complex64::new(0.0, 0.0))
}

/// Rank of the Hankel-type part analytic outside the closed disc: poles outside plus the order at infinity.
pub fn plus_degree(f: &RationalSymbol) -> usize {
    (f.pole_count(Location::Outside) + f.degree_at_infinity().max(0)) as usize
}

/// Poles inside the open disc, the origin included.
pub fn minus_degree(f: &RationalSymbol) -> usize {
    (f.pole_count(Location::Inside) + (-f.num().lo().unwrap_or(0)).max(0)) as usize
}

/// A pair of symbols of the given classes with `a ≠ b`.
pub fn draw_pair(t: &mut Trial<'_>, ca: ClassConstraint, cb: ClassConstraint) -> Result<SymbolPair> {
    for _ in 0..32 {
        let a = t.draw("a", ca);
        let b = t.draw("b", cb);
        if let Ok(p) = SymbolPair::new(a, b) {
            if p.nondegenerate {
                return Ok(p);
            }
        }
    }
    Err(Error::DegenerateInput("could not draw a nondegenerate pair".into()))
}

pub fn general_pair(t: &mut Trial<'_>) -> Result<SymbolPair> {
    draw_pair(t, ClassConstraint::None, ClassConstraint::None)
}

/// A pair with `index(a/b) ≤ −min_dim` and `b` free of circle zeros, so that
/// `ker S_{a,b}` and `ker Σ_{a,b}` have dimension at least `min_dim`.
pub fn nontrivial_pair(t: &mut Trial<'_>, min_dim: usize) -> Result<SymbolPair> {
    let target = -(min_dim as i64);
    for _ in 0..24 {
        let a = t.draw("a", ClassConstraint::None);
        let b = t.draw("b", ClassConstraint::None);
        if a.is_zero() || b.is_zero() {
            continue;
        }
        if let Ok(k) = winding_index(&a.div(&b)?) {
            if k <= target {
                let p = SymbolPair::new(a, b)?;
                if p.nondegenerate {
                    return Ok(p);
                }
            }
        }
    }
    let b = t.draw("b", ClassConstraint::None);
    let u = t.draw("u", ClassConstraint::Outer);
    let a = b.mul(&u).shift(target);
    t.record("a", &a);
    SymbolPair::new(a, b)
}

/// A random nonzero test function in L² together with low-order monomials.
pub fn probes(t: &mut Trial<'_>) -> Vec<RationalSymbol> {
    let mut out: Vec<RationalSymbol> = (-3..=3).map(RationalSymbol::z_pow).collect();
    for name in ["probe0", "probe1"] {
        let f = t.draw(name, ClassConstraint::None);
        if !f.is_zero() {
            out.push(f);
        }
    }
    out
}

/// Fourier window used to compare finite families of rational functions.
const RANK_WINDOW: i64 = 160;

/// Numerical rank of the span of `fs`, from their Fourier coefficients.
pub fn span_rank(fs: &[RationalSymbol], tol: f64, reference: f64) -> Result<RankReport> {
    if fs.is_empty() {
        return Ok(rank_from_sigma(Vec::new(), tol, reference));
    }
    let rows = (2 * RANK_WINDOW + 1) as usize;
    let mut m = DMatrix::from_element(rows, fs.len(), Complex64::new(0.0, 0.0));
    for (j, f) in fs.iter().enumerate() {
        let s = FourierSeries::new(f)?;
        for (i, n) in (-RANK_WINDOW..=RANK_WINDOW).enumerate() {
            m[(i, j)] = s.coefficient(n);
        }
    }
    Ok(rank_from_sigma(singular_values(&m), tol, reference))
}

/// `f / ‖f‖`, or `f` itself when it vanishes.
pub fn unit(f: &RationalSymbol) -> RationalSymbol {
    let n = l2_norm(f);
    if n > 0.0 && n.is_finite() {
        f.scale_real(1.0 / n)
    } else {
        f.clone()
    }
}

/// `Π (z − r)` over the given points.
pub fn vanishing_at(points: &[Complex64]) -> RationalSymbol {
    let roots: Vec<Root> = points.iter().map(|&p| Root::new(p, 1)).collect();
    RationalSymbol::from_zpk(c(1.0), 0, &roots, &[])
}

/// Linear combination `Σ coeffs_i f_i`.
pub fn combine(fs: &[RationalSymbol], coeffs: &[Complex64]) -> RationalSymbol {
    fs.iter().zip(coeffs).fold(RationalSymbol::zero(), |acc, (f, &w)| acc.add(&f.scale(w)))
}

/// A unit vector `x` with `‖A x‖` minimal, for a `k × d` constraint matrix with `k < d`.
pub fn null_vector(rows: &[Vec<Complex64>], d: usize) -> Vec<Complex64> {
    let k = rows.len();
    let a = DMatrix::from_fn(k.max(1), d, |i, j| if i < k { rows[i][j] } else { Complex64::new(0.0, 0.0) });
    let svd = crate::operators::svd(&a, true);
    let v = svd.v.expect("right singular vectors requested");
    (0..d).map(|i| v[(i, d - 1)]).collect()
}

/// Profile for symbols drawn with circle zeros permitted.
pub fn circle_profile() -> SamplerProfile {
    SamplerProfile { allow_circle_zeros: true, ..SamplerProfile::default() }
}
