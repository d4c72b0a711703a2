//! Invariance, almost-invariance and stability of kernels.

use num_complex::Complex64;
use rand::Rng;
use serde_json::json;

use crate::error::Result;
use crate::kernels::{l2_norm, member_s, member_sigma, model_space_basis, paired_kernel, transposed_kernel, KernelStatus, SymbolPair};
use crate::operators::norm::numerical_rank_scaled;
use crate::operators::{truncate, Node};
use crate::properties::checks::paired::resolved;
use crate::properties::common::*;
use crate::properties::runner::Trial;
use crate::properties::sampler::ClassConstraint;
use crate::symbol::{fourier_coefficient, riesz_split, RationalSymbol};

pub fn p_inv(t: &mut Trial<'_>) -> Result<()> {
    // a ∈ H∞, b ∈ conj H∞: a φ₊ = −b φ₋ forces both sides to vanish, so the
    // kernel is trivial and invariance holds without content.
    let p = draw_pair(t, ClassConstraint::Hinf, ClassConstraint::HinfBar)?;
    let q = draw_pair(t, ClassConstraint::Hinf, ClassConstraint::HinfBar)?;
    let kb = paired_kernel(&p)?;
    t.check(kb.status != KernelStatus::NeedsOracle, || "paired kernel unresolved".into());
    let s = Node::paired(q.a.clone(), q.b.clone());
    for (i, phi) in kb.basis.iter().enumerate() {
        t.check(member_s(&apply(&s, phi)?, &p)?, || format!("S_(ã,b̃) maps element {i} out of ker S_(a,b)"));
    }
    t.check(kb.basis.is_empty(), || format!("kernel of dimension {} for a ∈ H∞, b ∈ conj H∞", kb.basis.len()));

    // a, ã ∈ conj H∞ and b, b̃ ∈ H∞: ker Σ_{a,b} is invariant for Σ_{ã,b̃}.
    let m = t.rng.random_range(1..=3);
    let a = t.draw("a_sigma", ClassConstraint::HinfBar).shift(-m);
    t.record("a_sigma", &a);
    let b = t.draw("b_sigma", ClassConstraint::Hinf);
    let p = SymbolPair::new(a, b)?;
    let q = draw_pair(t, ClassConstraint::HinfBar, ClassConstraint::Hinf)?;
    let ks = resolved(transposed_kernel(&p)?, "transposed kernel")?;
    t.metric("sigma_dim", ks.len() as f64);
    let sg = Node::transposed(q.a.clone(), q.b.clone());
    for (i, psi) in ks.iter().enumerate() {
        let image = apply(&sg, psi)?;
        t.check(image.is_zero() || member_sigma(&image, &p)?, || format!("Σ_(ã,b̃) maps element {i} out of ker Σ_(a,b)"));
    }
    Ok(())
}

pub fn p_modelinv(t: &mut Trial<'_>) -> Result<()> {
    let theta = t.draw("theta", ClassConstraint::Inner);
    let q = draw_pair(t, ClassConstraint::HinfBar, ClassConstraint::Hinf)?;
    let model = SymbolPair::new(theta.circle_conjugate(), RationalSymbol::one())?;
    let basis = resolved(model_space_basis(&theta)?, "model space")?;
    let sg = Node::transposed(q.a.clone(), q.b.clone());
    for (i, k) in basis.iter().enumerate() {
        let image = apply(&sg, k)?;
        t.check(image.is_zero() || member_sigma(&image, &model)?, || format!("image of model space element {i} leaves K_θ"));
    }
    Ok(())
}

/// Dimension of `span{T g_i}` with each image measured against `scale · ‖g_i‖`.
fn image_rank(t: &Trial<'_>, node: &Node, gs: &[RationalSymbol], scale: f64) -> Result<usize> {
    let mut images = Vec::with_capacity(gs.len());
    for g in gs {
        let out = apply(node, g)?;
        images.push(out.scale_real(1.0 / (scale * l2_norm(g)).max(f64::MIN_POSITIVE)));
    }
    Ok(span_rank(&images, t.config.rank_tol, 1.0)?.rank)
}

fn kernel_of(p: &SymbolPair, sigma: bool) -> Result<Vec<RationalSymbol>> {
    if sigma {
        resolved(transposed_kernel(p)?, "transposed kernel")
    } else {
        resolved(paired_kernel(p)?, "paired kernel")
    }
}

fn node_of(p: &SymbolPair, sigma: bool) -> Node {
    if sigma {
        Node::transposed(p.a.clone(), p.b.clone())
    } else {
        Node::paired(p.a.clone(), p.b.clone())
    }
}

pub fn p_almost(t: &mut Trial<'_>) -> Result<()> {
    for sigma in [false, true] {
        let label = if sigma { "Sigma" } else { "S" };
        let p = nontrivial_pair(t, 1)?;
        let q = general_pair(t)?;
        let (tn, xn) = (node_of(&p, sigma), node_of(&q, sigma));
        let scale = (sup(&p.a) + sup(&p.b)) * (sup(&q.a) + sup(&q.b));
        let comm = numerical_rank_scaled(&truncate(&op(Node::commutator(tn.clone(), xn.clone()))?, t.config.oracle_n)?, t.config.rank_tol, scale);
        let basis = kernel_of(&p, sigma)?;
        let moved: Vec<RationalSymbol> = basis.iter().map(|f| apply(&xn, f)).collect::<Result<_>>()?;
        // X f ∈ ker T ⊕ F  ⟺  T X f ∈ T F, so the defect is the rank of T X on the kernel.
        let mut scaled = Vec::with_capacity(moved.len());
        for (f, g) in basis.iter().zip(&moved) {
            scaled.push(g.scale_real(l2_norm(f).recip()));
        }
        let defect = image_rank(t, &tn, &scaled, scale / (sup(&q.a) + sup(&q.b)))?;
        t.note("almost", json!({ "operator": label, "dim": basis.len(), "defect": defect, "commutator_rank": comm.rank }));
        t.metric("defect", defect as f64);
        t.check(comm.certified, || format!("{label}: commutator rank gap {:.3e} too small", comm.gap));
        t.check(defect <= comm.rank, || format!("{label}: defect {defect} exceeds commutator rank {}", comm.rank));
    }
    Ok(())
}

pub fn p_defect1(t: &mut Trial<'_>) -> Result<()> {
    for sigma in [false, true] {
        let label = if sigma { "Sigma" } else { "S" };
        let p = nontrivial_pair(t, 2)?;
        let tn = node_of(&p, sigma);
        let basis = kernel_of(&p, sigma)?;
        t.check(basis.len() >= 2, || format!("{label}: kernel dimension {} below 2", basis.len()));
        let scale = sup(&p.a) + sup(&p.b);
        for k in [1, -1] {
            let moved: Vec<RationalSymbol> = basis.iter().map(|f| f.shift(k)).collect();
            let defect = image_rank(t, &tn, &moved, scale)?;
            t.metric("defect", defect as f64);
            t.check(defect <= 1, || format!("{label}: multiplication by z^{k} has defect {defect}"));
        }
    }
    Ok(())
}

/// A multiplier together with the linear conditions on `g = g₊ + g₋` making `η g₊ ∈ H²₊` and `η g₋ ∈ H²₋`.
enum Multiplier {
    Shift(i64),
    PoleInside(Complex64),
    PoleOutside(Complex64),
}

impl Multiplier {
    fn symbol(&self) -> RationalSymbol {
        match *self {
            Multiplier::Shift(k) => RationalSymbol::z_pow(k),
            Multiplier::PoleInside(p) | Multiplier::PoleOutside(p) => vanishing_at(&[p]).inv().expect("nonzero polynomial"),
        }
    }

    fn conditions(&self, g: &RationalSymbol) -> Result<Vec<Complex64>> {
        Ok(match *self {
            Multiplier::Shift(k) if k > 0 => (1..=k).map(|j| fourier_coefficient(g, -j)).collect::<Result<_>>()?,
            Multiplier::Shift(k) => (0..-k).map(|j| fourier_coefficient(g, j)).collect::<Result<_>>()?,
            Multiplier::PoleInside(p) => vec![riesz_split(g)?.0.eval(p)],
            Multiplier::PoleOutside(p) => vec![riesz_split(g)?.1.eval(p)],
        })
    }
}

fn draw_multiplier(t: &mut Trial<'_>) -> Multiplier {
    match t.rng.random_range(0..6) {
        0 => Multiplier::Shift(1),
        1 => Multiplier::Shift(-1),
        2 => Multiplier::Shift(2),
        3 => Multiplier::Shift(-2),
        4 => Multiplier::PoleInside(Complex64::from_polar(t.rng.random_range(0.2..0.8), t.rng.random_range(0.0..std::f64::consts::TAU))),
        _ => Multiplier::PoleOutside(Complex64::from_polar(t.rng.random_range(1.25..5.0), t.rng.random_range(0.0..std::f64::consts::TAU))),
    }
}

pub fn p_stab(t: &mut Trial<'_>) -> Result<()> {
    for sigma in [false, true] {
        let label = if sigma { "Sigma" } else { "S" };
        let p = nontrivial_pair(t, 3)?;
        let basis = kernel_of(&p, sigma)?;
        let eta = draw_multiplier(t);
        let d = basis.len();
        let targets: Vec<RationalSymbol> = if sigma { basis.iter().map(|f| p.a.sub(&p.b).mul(f)).collect() } else { basis.clone() };
        let norms: Vec<f64> = targets.iter().map(l2_norm).collect();
        let cols: Vec<Vec<Complex64>> = targets.iter().zip(&norms).map(|(g, n)| eta.conditions(&g.scale_real(n.recip()))).collect::<Result<_>>()?;
        let k = cols.first().map_or(0, Vec::len);
        if d <= k {
            t.fail(format!("{label}: kernel dimension {d} too small for {k} conditions"));
            continue;
        }
        let rows: Vec<Vec<Complex64>> = (0..k).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        let coeffs: Vec<Complex64> = null_vector(&rows, d).iter().zip(&norms).map(|(w, n)| w / n).collect();
        let f = combine(&basis, &coeffs);
        let g = combine(&targets, &coeffs);
        let residual = eta.conditions(&g)?.iter().map(|v| v.norm()).fold(0.0, f64::max) / l2_norm(&g);
        t.metric("condition_residual", residual);
        let moved = eta.symbol().mul(&f);
        t.record("f", &f);
        let ok = if sigma { member_sigma(&moved, &p)? } else { member_s(&moved, &p)? };
        t.check(!f.is_zero() && ok, || format!("{label}: η f left the kernel (condition residual {residual:.3e})"));
    }
    Ok(())
}

pub fn p_fplus0(t: &mut Trial<'_>) -> Result<()> {
    let p = nontrivial_pair(t, 1)?;
    let basis = resolved(paired_kernel(&p)?, "paired kernel")?;
    let mut best = [0.0f64; 2];
    for f in &basis {
        let n = l2_norm(f);
        best[0] = best[0].max(fourier_coefficient(f, 0)?.norm() / n);
        best[1] = best[1].max(fourier_coefficient(f, -1)?.norm() / n);
    }
    t.metric("inverse_min_coefficient", 1.0 / best[0].min(best[1]).max(1e-300));
    t.check(best[0] > 1e-8, || "every kernel element has f₊(0) = 0".into());
    t.check(best[1] > 1e-8, || "every kernel element has vanishing coefficient at z̄".into());
    Ok(())
}
