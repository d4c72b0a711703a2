//! Checks on transposed paired kernels.

use num_complex::Complex64;
use rand::Rng;
use serde_json::json;

use crate::error::Result;
use crate::factor::{winding_index, Location};
use crate::kernels::{
    kernel_oracle, l2_norm, member_s, member_sigma, model_space_basis, nontrivial_s, nontrivial_sigma, sigma_inclusion, toeplitz_kernel,
    transposed_kernel, Inclusion, KernelStatus, SymbolPair,
};
use crate::operators::Node;
use crate::properties::checks::paired::resolved;
use crate::properties::common::*;
use crate::properties::runner::Trial;
use crate::properties::sampler::ClassConstraint;
use crate::symbol::{membership, riesz_project, RationalSymbol, Side, SpaceTag};

fn in_toeplitz_kernel(g: &RationalSymbol, h: &RationalSymbol, eps: f64) -> Result<bool> {
    if !membership(h, SpaceTag::H2Plus) {
        return Ok(false);
    }
    let r = riesz_project(&g.mul(h), Side::Plus)?;
    Ok(r.is_zero() || l2_norm(&r) <= eps * sup(g) * l2_norm(h))
}

fn random_circle_point(t: &mut Trial<'_>) -> Complex64 {
    Complex64::from_polar(1.0, t.rng.random_range(0.0..std::f64::consts::TAU))
}

/// Elements of `ker Σ_{a,b}` are `h/b` with `h ∈ ker T_{a/b}`.
fn structure_quotient(t: &mut Trial<'_>) -> Result<()> {
    let mut p = nontrivial_pair(t, 1)?;
    let circle = t.rng.random_bool(0.3);
    if circle {
        let w = random_circle_point(t);
        let factor = vanishing_at(&[w]);
        p = SymbolPair::new(p.a.clone(), p.b.mul(&factor))?;
        p = SymbolPair::new(p.a.mul(&factor), p.b.clone())?;
        t.record("a_circle", &p.a);
        t.record("b_circle", &p.b);
    }
    let q = p.quotient()?;
    let ks = resolved(transposed_kernel(&p)?, "transposed kernel")?;
    let kt = toeplitz_kernel(&q)?;
    for (i, psi) in ks.iter().enumerate() {
        let h = p.b.mul(psi);
        t.check(membership(&h, SpaceTag::H2Plus), || format!("b ψ not in H²₊ for element {i}"));
        t.check(in_toeplitz_kernel(&q, &h, t.config.eps_eq)?, || format!("b ψ not in ker T_(a/b) for element {i}"));
    }
    if let Some(dt) = kt.dim() {
        if circle {
            t.check(ks.len() <= dt, || format!("dim ker Σ = {} exceeds dim ker T = {dt}", ks.len()));
        } else {
            t.check(ks.len() == dt, || format!("b invertible but dim ker Σ = {} and dim ker T = {dt}", ks.len()));
        }
    }
    Ok(())
}

/// `b` outer in H∞: `ker Σ_{a,b} = ker T_a`.
fn structure_outer(t: &mut Trial<'_>) -> Result<()> {
    let a = t.draw("a", ClassConstraint::None);
    let b = t.draw("b", ClassConstraint::Outer);
    let p = match SymbolPair::new(a.clone(), b) {
        Ok(p) if p.nondegenerate => p,
        _ => return Ok(()),
    };
    let ks = resolved(transposed_kernel(&p)?, "transposed kernel")?;
    let kt = resolved(toeplitz_kernel(&a)?, "Toeplitz kernel")?;
    t.check(ks.len() == kt.len(), || format!("b outer but dim ker Σ = {} and dim ker T_a = {}", ks.len(), kt.len()));
    for f in &ks {
        t.check(in_toeplitz_kernel(&a, f, t.config.eps_eq)?, || "element of ker Σ not in ker T_a".into());
    }
    for f in &kt {
        t.check(member_sigma(f, &p)?, || "element of ker T_a not in ker Σ".into());
    }
    Ok(())
}

/// `ker Σ_{h̄, θ} = θ̄ K_θ` for `h` outer and `θ` inner.
fn structure_model(t: &mut Trial<'_>) -> Result<()> {
    let h = t.draw("h", ClassConstraint::Outer);
    let theta = t.draw("theta", ClassConstraint::Inner);
    let p = SymbolPair::new(h.circle_conjugate(), theta.clone())?;
    let ks = resolved(transposed_kernel(&p)?, "transposed kernel")?;
    let model = resolved(model_space_basis(&theta)?, "model space")?;
    t.check(ks.len() == model.len(), || format!("dim ker Σ = {} but dim K_θ = {}", ks.len(), model.len()));
    for f in &ks {
        t.check(membership(f, SpaceTag::H2Minus), || "element outside H²₋".into());
    }
    let theta_bar = theta.circle_conjugate();
    for k in &model {
        t.check(member_sigma(&theta_bar.mul(k), &p)?, || "θ̄ k not in ker Σ".into());
    }
    Ok(())
}

/// `ker Σ_{a,b} ⊆ H²₊` exactly when `b` has no zeros in the disc (for nontrivial kernels).
fn structure_plus(t: &mut Trial<'_>) -> Result<()> {
    let zero_inside = t.rng.random_bool(0.5);
    let outer = t.draw("b_outer", ClassConstraint::Outer);
    let inner = t.draw("b_inner", ClassConstraint::Inner);
    let b = if zero_inside { outer.mul(&inner) } else { outer.mul(&inner.circle_conjugate()) };
    t.record("b", &b);
    let mut a = None;
    for _ in 0..16 {
        let cand = t.draw("a", ClassConstraint::None);
        if !cand.is_zero() && winding_index(&cand.div(&b)?).is_ok_and(|k| k <= -1) {
            a = Some(cand);
            break;
        }
    }
    let a = match a {
        Some(a) => a,
        None => {
            let u = t.draw("u", ClassConstraint::Outer);
            b.mul(&u).shift(-1)
        }
    };
    t.record("a", &a);
    let p = SymbolPair::new(a, b.clone())?;
    let ks = resolved(transposed_kernel(&p)?, "transposed kernel")?;
    if ks.is_empty() {
        return Ok(());
    }
    let all_plus = ks.iter().all(|f| membership(f, SpaceTag::H2Plus));
    let b_zero_inside = b.zeros()?.iter().any(|z| z.loc == Location::Inside) || b.num().lo().unwrap_or(0) > 0;
    t.note("plus_case", json!({ "b_zero_inside": b_zero_inside, "all_in_h2_plus": all_plus, "dim": ks.len() }));
    t.check(all_plus != b_zero_inside, || format!("b zero inside: {b_zero_inside}, kernel in H²₊: {all_plus}"));
    Ok(())
}

pub fn p_sigma_struct(t: &mut Trial<'_>) -> Result<()> {
    structure_quotient(t)?;
    structure_outer(t)?;
    structure_model(t)?;
    structure_plus(t)
}

pub fn p_nontriv_sig(t: &mut Trial<'_>) -> Result<()> {
    let circle = t.rng.random_bool(0.25);
    let mut p = if t.rng.random_bool(0.5) { nontrivial_pair(t, 1)? } else { general_pair(t)? };
    if circle {
        let factor = vanishing_at(&[random_circle_point(t)]);
        p = SymbolPair::new(p.a.mul(&factor), p.b.mul(&factor))?;
        t.record("a_circle", &p.a);
        t.record("b_circle", &p.b);
    }
    let d = nontrivial_sigma(&p)?;
    let s = nontrivial_s(&p)?;
    let ks = transposed_kernel(&p)?;
    t.note("decisions", json!({ "sigma": d.decision, "s": s.decision, "dim": ks.dim() }));
    if let Some(w) = &d.witness {
        t.check(!w.is_zero() && member_sigma(w, &p)?, || "witness fails".into());
    }
    if d.is_true() {
        t.check(s.is_true(), || format!("ker Σ nontrivial but ker S decision is {:?}", s.decision));
        if let Some(w) = &d.witness {
            let image = crate::kernels::j_map(w, &p, false, None, None)?;
            t.check(member_s(&image, &p)?, || "(a − b) ψ not in ker S".into());
        }
    }
    if ks.status != KernelStatus::NeedsOracle {
        t.check(d.is_true() == ks.dim().is_some_and(|n| n > 0), || "decision disagrees with the kernel basis".into());
    }
    if !circle {
        match kernel_oracle(&op(Node::transposed(p.a.clone(), p.b.clone()))?, t.config.oracle_n, t.config.rank_tol) {
            Ok(rep) => {
                t.metric("inverse_gap", 1.0 / rep.gap);
                t.check(Some(rep.dimension) == ks.dim(), || format!("oracle dimension {} but exact {:?}", rep.dimension, ks.dim()));
            }
            Err(e) => t.fail(format!("oracle: {e}")),
        }
    }
    Ok(())
}

pub fn p_sigma_incl(t: &mut Trial<'_>) -> Result<()> {
    let p = nontrivial_pair(t, 1)?;
    let plus_inner = t.rng.random_bool(0.4);
    let minus_inner = t.rng.random_bool(0.4);
    let mut hp = t.draw("h_plus_outer", ClassConstraint::Outer);
    if plus_inner {
        hp = hp.mul(&t.draw("h_plus_inner", ClassConstraint::Inner));
    }
    let mut hm = t.draw("h_minus_outer", ClassConstraint::Outer);
    if minus_inner {
        hm = hm.mul(&t.draw("h_minus_inner", ClassConstraint::Inner));
    }
    let hm = hm.circle_conjugate();
    let q = SymbolPair::new(p.a.mul(&hm), p.b.mul(&hp))?;
    let expected = if plus_inner || minus_inner { Inclusion::Subset } else { Inclusion::Equal };
    let got = sigma_inclusion(&p, &q)?;
    t.note("inclusion", json!({ "expected": format!("{expected:?}"), "got": format!("{got:?}") }));
    t.check(got == expected, || format!("inclusion {got:?}, expected {expected:?}"));
    Ok(())
}

pub fn p_coburn_sig(t: &mut Trial<'_>) -> Result<()> {
    let p = if t.rng.random_bool(0.5) { nontrivial_pair(t, 1)? } else { general_pair(t)? };
    let ab = nontrivial_sigma(&p)?;
    let ba = nontrivial_sigma(&p.swapped())?;
    t.note("decisions", json!([ab.decision, ba.decision]));
    t.check(!(ab.is_true() && ba.is_true()), || "both ker Σ_(a,b) and ker Σ_(b,a) are nontrivial".into());
    for (d, q) in [(&ab, p.clone()), (&ba, p.swapped())] {
        if let Some(w) = &d.witness {
            t.check(member_sigma(w, &q)?, || "witness fails".into());
        }
        if d.is_true() {
            t.check(nontrivial_s(&q)?.is_true(), || "ker Σ nontrivial but ker S trivial".into());
        }
    }
    Ok(())
}
