//! Checks on paired kernels.

use rand::Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::factor::winding_index;
use crate::kernels::{
    j_map, kernel_oracle, kernels_equal_s, l2_norm, member_s, member_sigma, nontrivial_s, nontrivial_sigma, paired_kernel, toeplitz_kernel,
    transposed_kernel, Decision, KernelBasis, KernelStatus, SymbolPair,
};
use crate::operators::Node;
use crate::properties::common::*;
use crate::properties::runner::Trial;
use crate::properties::sampler::{sample_with, ClassConstraint};
use crate::symbol::{riesz_project, riesz_split, RationalSymbol, Side};

/// Basis of a kernel the exact layer has resolved.
pub fn resolved(kb: KernelBasis, what: &str) -> Result<Vec<RationalSymbol>> {
    match kb.status {
        KernelStatus::NeedsOracle => Err(Error::DegenerateInput(format!("{what} was not resolved exactly"))),
        _ => Ok(kb.basis),
    }
}

pub fn p_jmap(t: &mut Trial<'_>) -> Result<()> {
    let p = nontrivial_pair(t, 1)?;
    let sigma = resolved(transposed_kernel(&p)?, "transposed kernel")?;
    let paired = resolved(paired_kernel(&p)?, "paired kernel")?;
    t.check(!sigma.is_empty(), || "transposed kernel unexpectedly trivial".into());
    for (i, psi) in sigma.iter().enumerate() {
        let phi = j_map(psi, &p, false, None, None)?;
        t.check(member_s(&phi, &p)?, || format!("image of element {i} is not in ker S"));
        let back = j_map(&phi, &p, true, None, None)?;
        let r = rel_diff(&back, psi, 0.0);
        t.metric("round_trip", r);
        t.check(r <= 10.0 * t.config.eps_eq, || format!("round trip of element {i} off by {r:.3e}"));
    }
    let images: Vec<RationalSymbol> = sigma.iter().map(|psi| j_map(psi, &p, false, None, None)).collect::<Result<_>>()?;
    let rank = span_rank(&images, t.config.rank_tol, 0.0)?;
    t.check(rank.rank == sigma.len(), || format!("images span {} dimensions, expected {}", rank.rank, sigma.len()));
    t.check(sigma.len() == paired.len(), || format!("dim ker Σ = {} but dim ker S = {} with b invertible", sigma.len(), paired.len()));
    Ok(())
}

pub fn p_rh(t: &mut Trial<'_>) -> Result<()> {
    let p = nontrivial_pair(t, 1)?;
    let kb = paired_kernel(&p)?;
    let q = p.quotient()?;
    let s = Node::paired(p.a.clone(), p.b.clone());
    t.check(!kb.basis.is_empty(), || "kernel unexpectedly trivial".into());
    for (i, phi) in kb.basis.iter().enumerate() {
        let (fp, fm) = riesz_split(phi)?;
        let image = apply(&s, phi)?;
        let scale = (sup(&p.a) + sup(&p.b)) * l2_norm(phi);
        let r_image = if image.is_zero() { 0.0 } else { l2_norm(&image) / scale };
        t.metric("residual_image", r_image);
        t.check(r_image <= t.config.eps_eq, || format!("S φ ≠ 0 for element {i}"));
        t.check(!fp.is_zero() && !fm.is_zero(), || format!("element {i} has a vanishing half"));
        let rh = p.a.mul(&fp).add(&p.b.mul(&fm));
        let r_rh = if rh.is_zero() { 0.0 } else { l2_norm(&rh) / scale };
        t.metric("residual_problem", r_rh);
        t.check(r_rh <= t.config.eps_eq, || format!("a φ₊ + b φ₋ ≠ 0 for element {i}"));
        let tp = riesz_project(&q.mul(&fp), Side::Plus)?;
        t.check(tp.is_zero() || l2_norm(&tp) <= t.config.eps_eq * sup(&q) * l2_norm(&fp), || format!("φ₊ of element {i} not in ker T_(a/b)"));
    }
    let f = t.draw("f", ClassConstraint::None);
    if !f.is_zero() {
        t.check(!member_s(&f, &p)?, || "random function lies in the kernel".into());
    }
    Ok(())
}

fn scaled(t: &mut Trial<'_>, p: &SymbolPair) -> Result<SymbolPair> {
    let eta = t.draw("eta", ClassConstraint::Invertible);
    SymbolPair::new(p.a.mul(&eta), p.b.mul(&eta))
}

fn mutual_members(t: &mut Trial<'_>, p: &SymbolPair, q: &SymbolPair) -> Result<()> {
    let kp = resolved(paired_kernel(p)?, "paired kernel")?;
    let kq = resolved(paired_kernel(q)?, "paired kernel")?;
    t.check(kp.len() == kq.len(), || format!("dimensions {} and {}", kp.len(), kq.len()));
    for f in &kp {
        t.check(member_s(f, q)?, || "element of the first kernel is not in the second".into());
    }
    for f in &kq {
        t.check(member_s(f, p)?, || "element of the second kernel is not in the first".into());
    }
    Ok(())
}

pub fn p_scale(t: &mut Trial<'_>) -> Result<()> {
    let p = nontrivial_pair(t, 1)?;
    let q = scaled(t, &p)?;
    mutual_members(t, &p, &q)
}

pub fn p_kereq(t: &mut Trial<'_>) -> Result<()> {
    let p = nontrivial_pair(t, 1)?;
    let q = scaled(t, &p)?;
    t.check(kernels_equal_s(&p, &q)?, || "a b̃ = ã b but kernels reported different".into());
    mutual_members(t, &p, &q)?;

    // A pair with a different quotient shares no nonzero element.
    let r = general_pair(t)?;
    let cross = p.a.mul(&r.b).residual(&r.a.mul(&p.b));
    if cross > 1e-6 {
        t.check(!kernels_equal_s(&p, &r)?, || "a b̃ ≠ ã b but kernels reported equal".into());
        for (i, f) in resolved(paired_kernel(&p)?, "paired kernel")?.iter().enumerate() {
            t.check(!member_s(f, &r)?, || format!("element {i} also lies in the kernel of an unrelated pair"));
        }
    }
    Ok(())
}

pub fn p_unique(t: &mut Trial<'_>) -> Result<()> {
    let fp = t.draw("phi_plus", ClassConstraint::Hinf);
    let fm = t.draw("phi_minus", ClassConstraint::HinfBar).shift(-1);
    t.record("phi_minus", &fm);
    let phi = fp.add(&fm);
    let p = crate::kernels::symbols_from_function(&fp, &fm)?;
    t.record("a", &p.a);
    t.record("b", &p.b);
    let r = crate::kernels::paired_residual(&phi, &p)?;
    t.metric("construction_residual", r);
    t.check(member_s(&phi, &p)?, || format!("φ not in ker S of the constructed symbols (residual {r:.3e})"));
    let q = scaled(t, &p)?;
    t.check(kernels_equal_s(&p, &q)?, || "η-scaled pair reported a different kernel".into());
    let other = SymbolPair::new(fm.clone(), fp.neg())?;
    t.check(member_s(&phi, &other)?, || "φ not in ker S_(φ₋,−φ₊)".into());
    t.check(kernels_equal_s(&p, &other)?, || "second pair containing φ has a different kernel".into());
    Ok(())
}

pub fn p_nontriv_s(t: &mut Trial<'_>) -> Result<()> {
    let circle = t.rng.random_bool(0.25);
    let (a, b) = if circle {
        let prof = circle_profile();
        let a = sample_with(&prof, &mut t.rng);
        let b = sample_with(&prof, &mut t.rng);
        t.record("a", &a);
        t.record("b", &b);
        (a, b)
    } else {
        let p = general_pair(t)?;
        (p.a, p.b)
    };
    let p = match SymbolPair::new(a, b) {
        Ok(p) if p.nondegenerate => p,
        _ => return Ok(()),
    };
    let q = p.quotient()?;
    let d = nontrivial_s(&p)?;
    t.note("decision", json!(d.decision));
    match winding_index(&q) {
        Ok(k) => {
            let tk = toeplitz_kernel(&q)?;
            let toeplitz_nontrivial = tk.dim().is_some_and(|n| n > 0);
            t.check(d.decision != Decision::NeedsOracle, || "regular quotient left undecided".into());
            t.check(d.is_true() == toeplitz_nontrivial, || format!("decision {:?} but dim ker T_(a/b) = {:?}", d.decision, tk.dim()));
            t.check(d.is_true() == (k < 0), || format!("decision {:?} with index {k}", d.decision));
            let oracle = kernel_oracle(&op(Node::paired(p.a.clone(), p.b.clone()))?, t.config.oracle_n, t.config.rank_tol);
            match oracle {
                Ok(rep) => {
                    t.metric("inverse_gap", 1.0 / rep.gap);
                    t.check((rep.dimension > 0) == d.is_true(), || format!("oracle dimension {} against decision {:?}", rep.dimension, d.decision));
                }
                Err(e) => t.fail(format!("oracle: {e}")),
            }
        }
        Err(_) => {
            if d.is_true() {
                let w = d.witness.clone().ok_or_else(|| Error::DegenerateInput("true decision without witness".into()))?;
                t.check(member_s(&w, &p)?, || "witness not in the kernel".into());
            }
        }
    }
    if let Some(w) = &d.witness {
        t.check(member_s(w, &p)? && !w.is_zero(), || "reported witness fails".into());
    }
    Ok(())
}

pub fn p_coburn_s(t: &mut Trial<'_>) -> Result<()> {
    let p = if t.rng.random_bool(0.5) { nontrivial_pair(t, 1)? } else { general_pair(t)? };
    let ab = nontrivial_s(&p)?;
    let ba = nontrivial_s(&p.swapped())?;
    t.note("decisions", json!([ab.decision, ba.decision]));
    t.check(!(ab.is_true() && ba.is_true()), || "both ker S_(a,b) and ker S_(b,a) are nontrivial".into());
    t.check(ab.decision != Decision::NeedsOracle && ba.decision != Decision::NeedsOracle, || "undecided".into());
    // With a partition of unity, ker S_{a,b} and ker S*_{a,b} = ker Σ_{ā,b̄} are not both nontrivial.
    let adj = SymbolPair::new(p.a.circle_conjugate(), p.b.circle_conjugate())?;
    let star = nontrivial_sigma(&adj)?;
    t.check(!(ab.is_true() && star.is_true()), || "both ker S and ker S* are nontrivial".into());
    if let Some(w) = &star.witness {
        t.check(member_sigma(w, &adj)?, || "adjoint kernel witness fails".into());
    }
    t.metric("nontrivial_seen", f64::from(u8::from(ab.is_true() || ba.is_true())));
    Ok(())
}
