//! Checks on the algebra of paired and transposed paired operators.

use std::f64::consts::{SQRT_2, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde_json::json;

use crate::error::Result;
use crate::kernels::{l2_norm, SymbolPair};
use crate::operators::norm::{adjoint_residual, monomial_probe_pairs, numerical_rank_scaled, operator_norm};
use crate::operators::{truncate, Node};
use crate::properties::common::*;
use crate::properties::runner::Trial;
use crate::properties::sampler::ClassConstraint;
use crate::symbol::{fourier_coefficient, membership, riesz_split, RationalSymbol, SpaceTag};

/// Threshold for an identity between exact images to count as holding.
fn identity_tol(t: &Trial<'_>) -> f64 {
    10.0 * t.config.eps_eq
}

/// Threshold above which a residual witnesses that an identity fails.
const WITNESS: f64 = 1e-6;

/// Largest relative residual of `lhs f` against `rhs f` over the probes.
fn identity_residual(lhs: &Node, rhs: &Node, probes: &[RationalSymbol], scale: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for f in probes {
        let x = apply(lhs, f)?;
        let y = apply(rhs, f)?;
        worst = worst.max(rel_diff(&x, &y, scale * l2_norm(f)));
    }
    Ok(worst)
}

/// Argument of the maximum of `g` on the circle.
fn circle_argmax(g: impl Fn(f64) -> f64) -> f64 {
    const SAMPLES: usize = 2048;
    let h = TAU / SAMPLES as f64;
    let mut best = (g(0.0), 0.0);
    let mut cands: Vec<(f64, f64)> = (0..SAMPLES).map(|k| (g(k as f64 * h), k as f64 * h)).collect();
    cands.sort_by(|x, y| y.0.total_cmp(&x.0));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    for &(_, t0) in cands.iter().take(8) {
        let (mut lo, mut hi) = (t0 - h, t0 + h);
        for _ in 0..80 {
            let x1 = hi - ratio * (hi - lo);
            let x2 = lo + ratio * (hi - lo);
            if g(x1) >= g(x2) {
                hi = x2;
            } else {
                lo = x1;
            }
        }
        let t = 0.5 * (lo + hi);
        let v = g(t);
        if v > best.0 {
            best = (v, t);
        }
    }
    best.1
}

/// `‖a k_λ‖ / ‖k_λ‖` for the normalized reproducing kernel at `λ = r e^{it}`,
/// with `e^{it}` where `|a|` peaks. This is the Poisson extension of `|a|²`.
fn peak_witness(a: &RationalSymbol) -> Result<f64> {
    let g = a.mul(&a.circle_conjugate());
    let (gp, gm) = riesz_split(&g)?;
    let t0 = circle_argmax(|t| a.eval(Complex64::from_polar(1.0, t)).norm());
    let r = 1.0 - 1e-13;
    let lambda = Complex64::from_polar(r, t0);
    let u = gp.eval(lambda) + gm.eval(1.0 / lambda.conj());
    Ok(u.re.max(0.0).sqrt())
}

pub fn p_norm(t: &mut Trial<'_>) -> Result<()> {
    let p = general_pair(t)?;
    let n = t.config.oracle_n.max(128);
    let (ma, mb) = (sup(&p.a), sup(&p.b));
    let m = ma.max(mb);
    let upper = (ma + mb).min(SQRT_2 * m);
    // S_{a,b} f = a f on H²₊ and b f on H²₋, so kernels concentrated at the peak
    // of |a| or |b| give lower bounds valid for both S and its adjoint Σ_{ā,b̄}.
    let witness = peak_witness(&p.a)?.max(peak_witness(&p.b.circle_conjugate().shift(-1))?);
    for (label, node) in [("S", Node::paired(p.a.clone(), p.b.clone())), ("Sigma", Node::transposed(p.a.clone(), p.b.clone()))] {
        let est = operator_norm(&op(node)?, n)?.value;
        let lower = est.max(witness);
        t.metric("truncation_lag", (m - est) / m);
        t.metric("upper_excess", est - upper);
        t.check(lower >= m - 1e-9, || format!("{label}: lower bound {lower:.12e} below m = {m:.12e}"));
        t.check(est <= upper + 1e-9, || format!("{label}: truncated norm {est:.12e} above bound {upper:.12e}"));
    }
    t.note("bounds", json!({ "m": m, "upper": upper }));
    Ok(())
}

pub fn p_zero(t: &mut Trial<'_>) -> Result<()> {
    let zero = RationalSymbol::zero();
    for node in [Node::paired(zero.clone(), zero.clone()), Node::transposed(zero.clone(), zero.clone())] {
        for k in -8..=8 {
            let out = apply(&node, &RationalSymbol::z_pow(k))?;
            t.check(out.is_zero(), || format!("zero-symbol operator maps z^{k} to a nonzero function"));
        }
    }
    let a = t.draw("a", ClassConstraint::None);
    let b = if t.rng.random_bool(0.3) { RationalSymbol::zero() } else { t.draw("b", ClassConstraint::None) };
    for node in [Node::paired(a.clone(), b.clone()), Node::transposed(a.clone(), b.clone())] {
        let mut any = false;
        for k in -8..=8 {
            any |= !apply(&node, &RationalSymbol::z_pow(k))?.is_zero();
        }
        t.check(any, || "nonzero symbols give an operator vanishing on all probes".into());
    }
    Ok(())
}

fn draw_non(t: &mut Trial<'_>, name: &str, class: ClassConstraint, avoid: SpaceTag) -> RationalSymbol {
    for _ in 0..32 {
        let f = t.draw(name, class);
        if !membership(&f, avoid) {
            return f;
        }
    }
    // z̄ + z lies in neither H∞ nor its conjugate.
    let f = RationalSymbol::z_pow(-1).add(&RationalSymbol::z_pow(1));
    t.record(name, &f);
    f
}

pub fn p_prod(t: &mut Trial<'_>) -> Result<()> {
    let tol = identity_tol(t);
    let probes = probes(t);
    // S_{a,b} S_{ã,b̃} = S_{aã,bb̃} for ã ∈ H∞, b̃ ∈ conj H∞.
    let p = general_pair(t)?;
    let q = draw_pair(t, ClassConstraint::Hinf, ClassConstraint::HinfBar)?;
    let scale = (sup(&p.a) + sup(&p.b)) * (sup(&q.a) + sup(&q.b));
    let lhs = Node::compose(Node::paired(p.a.clone(), p.b.clone()), Node::paired(q.a.clone(), q.b.clone()));
    let rhs = Node::paired(p.a.mul(&q.a), p.b.mul(&q.b));
    let r = identity_residual(&lhs, &rhs, &probes, scale)?;
    t.metric("residual_s", r);
    t.check(r <= tol, || format!("S product residual {r:.3e}"));

    // Σ_{a,b} Σ_{ã,b̃} = Σ_{aã,bb̃} for a ∈ conj H∞, b ∈ H∞.
    let p2 = draw_pair(t, ClassConstraint::HinfBar, ClassConstraint::Hinf)?;
    let q2 = general_pair(t)?;
    let scale = (sup(&p2.a) + sup(&p2.b)) * (sup(&q2.a) + sup(&q2.b));
    let lhs = Node::compose(Node::transposed(p2.a.clone(), p2.b.clone()), Node::transposed(q2.a.clone(), q2.b.clone()));
    let rhs = Node::transposed(p2.a.mul(&q2.a), p2.b.mul(&q2.b));
    let r = identity_residual(&lhs, &rhs, &probes, scale)?;
    t.metric("residual_sigma", r);
    t.check(r <= tol, || format!("Sigma product residual {r:.3e}"));

    // With ã outside H∞ the product is not S_{aã,bb̃}.
    let at = draw_non(t, "a_tilde_bad", ClassConstraint::None, SpaceTag::Hinf);
    let bt = t.draw("b_tilde", ClassConstraint::HinfBar);
    let scale = (sup(&p.a) + sup(&p.b)) * (sup(&at) + sup(&bt));
    let lhs = Node::compose(Node::paired(p.a.clone(), p.b.clone()), Node::paired(at.clone(), bt.clone()));
    let rhs = Node::paired(p.a.mul(&at), p.b.mul(&bt));
    let r = identity_residual(&lhs, &rhs, &probes, scale)?;
    t.metric("negative_residual_inverse", 1.0 / r.max(1e-300));
    t.check(r >= WITNESS, || format!("product identity holds for a symbol outside H∞ (residual {r:.3e})"));

    // With b outside H∞ the transposed product is not Σ_{aã,bb̃}.
    let a3 = t.draw("a3", ClassConstraint::HinfBar);
    let b3 = draw_non(t, "b3_bad", ClassConstraint::None, SpaceTag::Hinf);
    let scale = (sup(&a3) + sup(&b3)) * (sup(&q2.a) + sup(&q2.b));
    let lhs = Node::compose(Node::transposed(a3.clone(), b3.clone()), Node::transposed(q2.a.clone(), q2.b.clone()));
    let rhs = Node::transposed(a3.mul(&q2.a), b3.mul(&q2.b));
    let r = identity_residual(&lhs, &rhs, &probes, scale)?;
    t.check(r >= WITNESS, || format!("transposed product identity holds for b outside H∞ (residual {r:.3e})"));
    Ok(())
}

fn four(t: &mut Trial<'_>) -> Result<(SymbolPair, SymbolPair)> {
    Ok((general_pair(t)?, general_pair(t)?))
}

fn pair_scale(p: &SymbolPair, q: &SymbolPair) -> f64 {
    (sup(&p.a) + sup(&p.b)) * (sup(&q.a) + sup(&q.b))
}

pub fn p_prodres(t: &mut Trial<'_>) -> Result<()> {
    let tol = identity_tol(t);
    let probes = probes(t);
    let (p, q) = four(t)?;
    let scale = pair_scale(&p, &q);
    let lhs = Node::difference(
        Node::compose(Node::paired(p.a.clone(), p.b.clone()), Node::paired(q.a.clone(), q.b.clone())),
        Node::paired(p.a.mul(&q.a), p.b.mul(&q.b)),
    );
    let rhs = Node::compose(mult(&p.a.sub(&p.b)), cross(&q.b, &q.a));
    let r = identity_residual(&lhs, &rhs, &probes, scale)?;
    t.metric("residual_s", r);
    t.check(r <= tol, || format!("S product remainder residual {r:.3e}"));

    let lhs = Node::difference(
        Node::compose(Node::transposed(p.a.clone(), p.b.clone()), Node::transposed(q.a.clone(), q.b.clone())),
        Node::transposed(p.a.mul(&q.a), p.b.mul(&q.b)),
    );
    let rhs = Node::scale(c(-1.0), Node::compose(cross(&p.a, &p.b), mult(&q.a.sub(&q.b))));
    let r = identity_residual(&lhs, &rhs, &probes, scale)?;
    t.metric("residual_sigma", r);
    t.check(r <= tol, || format!("Sigma product remainder residual {r:.3e}"));
    Ok(())
}

pub fn p_commexp(t: &mut Trial<'_>) -> Result<()> {
    let tol = identity_tol(t);
    let probes = probes(t);
    let (p, q) = four(t)?;
    let scale = pair_scale(&p, &q);
    let lhs = Node::commutator(Node::paired(p.a.clone(), p.b.clone()), Node::paired(q.a.clone(), q.b.clone()));
    let rhs = Node::difference(
        Node::compose(mult(&p.a.sub(&p.b)), cross(&q.b, &q.a)),
        Node::compose(mult(&q.a.sub(&q.b)), cross(&p.b, &p.a)),
    );
    let r = identity_residual(&lhs, &rhs, &probes, scale)?;
    t.metric("residual_s", r);
    t.check(r <= tol, || format!("S commutator expansion residual {r:.3e}"));

    let lhs = Node::commutator(Node::transposed(p.a.clone(), p.b.clone()), Node::transposed(q.a.clone(), q.b.clone()));
    let rhs = Node::difference(
        Node::compose(cross(&q.a, &q.b), mult(&p.a.sub(&p.b))),
        Node::compose(cross(&p.a, &p.b), mult(&q.a.sub(&q.b))),
    );
    let r = identity_residual(&lhs, &rhs, &probes, scale)?;
    t.metric("residual_sigma", r);
    t.check(r <= tol, || format!("Sigma commutator expansion residual {r:.3e}"));
    Ok(())
}

pub fn p_finrank(t: &mut Trial<'_>) -> Result<()> {
    let (p, q) = four(t)?;
    let eta = t.draw("eta", ClassConstraint::None);
    let (pa, pb, qa, qb) = (p.a.clone(), p.b.clone(), q.a.clone(), q.b.clone());
    let kind = t.rng.random_range(0..6);
    let (label, node, bound, scale) = match kind {
        0 => (
            "S product remainder",
            Node::difference(Node::compose(Node::paired(pa.clone(), pb.clone()), Node::paired(qa.clone(), qb.clone())), Node::paired(pa.mul(&qa), pb.mul(&qb))),
            minus_degree(&qa) + plus_degree(&qb),
            pair_scale(&p, &q),
        ),
        1 => (
            "S commutator",
            Node::commutator(Node::paired(pa.clone(), pb.clone()), Node::paired(qa.clone(), qb.clone())),
            minus_degree(&qa) + plus_degree(&qb) + minus_degree(&pa) + plus_degree(&pb),
            pair_scale(&p, &q),
        ),
        2 => (
            "S multiplication commutator",
            Node::commutator(Node::paired(pa.clone(), pb.clone()), mult(&eta)),
            minus_degree(&eta) + plus_degree(&eta),
            (sup(&pa) + sup(&pb)) * sup(&eta),
        ),
        3 => (
            "Sigma product remainder",
            Node::difference(
                Node::compose(Node::transposed(pa.clone(), pb.clone()), Node::transposed(qa.clone(), qb.clone())),
                Node::transposed(pa.mul(&qa), pb.mul(&qb)),
            ),
            plus_degree(&pa) + minus_degree(&pb),
            pair_scale(&p, &q),
        ),
        4 => (
            "Sigma commutator",
            Node::commutator(Node::transposed(pa.clone(), pb.clone()), Node::transposed(qa.clone(), qb.clone())),
            plus_degree(&qa) + minus_degree(&qb) + plus_degree(&pa) + minus_degree(&pb),
            pair_scale(&p, &q),
        ),
        _ => (
            "Sigma multiplication commutator",
            Node::commutator(Node::transposed(pa.clone(), pb.clone()), mult(&eta)),
            minus_degree(&eta) + plus_degree(&eta),
            (sup(&pa) + sup(&pb)) * sup(&eta),
        ),
    };
    let x = op(node)?;
    let n = t.config.oracle_n;
    let small = numerical_rank_scaled(&truncate(&x, n)?, t.config.rank_tol, scale);
    let large = numerical_rank_scaled(&truncate(&x, 2 * n)?, t.config.rank_tol, scale);
    t.note("case", json!({ "operator": label, "bound": bound, "rank_n": small.rank, "rank_2n": large.rank, "gap_2n": large.gap }));
    t.metric("rank", large.rank as f64);
    t.metric("inverse_gap", 1.0 / large.gap);
    t.check(small.rank == large.rank, || format!("{label}: rank {} at N and {} at 2N", small.rank, large.rank));
    t.check(large.rank <= bound, || format!("{label}: rank {} exceeds degree bound {bound}", large.rank));
    t.check(large.certified, || format!("{label}: spectral gap {:.3e} below certification level", large.gap));
    Ok(())
}

fn commutator_residual(x: &Node, y: &Node, probes: &[RationalSymbol], scale: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for f in probes {
        let out = apply(&Node::commutator(x.clone(), y.clone()), f)?;
        if !out.is_zero() {
            worst = worst.max(l2_norm(&out) / (scale * l2_norm(f)));
        }
    }
    Ok(worst)
}

fn commuting_quadruple(t: &mut Trial<'_>, mode: u32, sigma: bool) -> Result<(SymbolPair, SymbolPair)> {
    let (h, hb) = if sigma { (ClassConstraint::HinfBar, ClassConstraint::Hinf) } else { (ClassConstraint::Hinf, ClassConstraint::HinfBar) };
    Ok(match mode {
        0 => {
            let a = t.draw("a", ClassConstraint::None);
            let at = t.draw("a_tilde", ClassConstraint::None);
            (SymbolPair::new(a.clone(), a)?, SymbolPair::new(at.clone(), at)?)
        }
        1 => (draw_pair(t, h, hb)?, draw_pair(t, h, hb)?),
        _ => {
            let q = general_pair(t)?;
            let lambda = Complex64::from_polar(t.rng.random_range(0.5..2.0), t.rng.random_range(0.0..TAU));
            let mu = Complex64::from_polar(t.rng.random_range(0.0..2.0), t.rng.random_range(0.0..TAU));
            let shift = |f: &RationalSymbol| f.scale(lambda).add(&RationalSymbol::constant(mu));
            t.note("lambda_mu", json!([[lambda.re, lambda.im], [mu.re, mu.im]]));
            (SymbolPair::new(shift(&q.a), shift(&q.b))?, q)
        }
    })
}

fn commutes_by_condition(p: &SymbolPair, q: &SymbolPair, sigma: bool) -> bool {
    let (h, hb) = if sigma { (SpaceTag::HinfBar, SpaceTag::Hinf) } else { (SpaceTag::Hinf, SpaceTag::HinfBar) };
    let hinf = membership(&p.a, h) && membership(&q.a, h) && membership(&p.b, hb) && membership(&q.b, hb);
    let degenerate = !p.nondegenerate && !q.nondegenerate;
    hinf || degenerate
}

pub fn p_commutant(t: &mut Trial<'_>) -> Result<()> {
    let tol = identity_tol(t);
    let probes = probes(t);
    for sigma in [false, true] {
        let node = |p: &SymbolPair| if sigma { Node::transposed(p.a.clone(), p.b.clone()) } else { Node::paired(p.a.clone(), p.b.clone()) };
        let label = if sigma { "Sigma" } else { "S" };
        for mode in 0..3 {
            let (p, q) = commuting_quadruple(t, mode, sigma)?;
            let r = commutator_residual(&node(&p), &node(&q), &probes, pair_scale(&p, &q))?;
            t.metric("positive_residual", r);
            t.check(r <= tol, || format!("{label}: condition {mode} holds but the commutator is {r:.3e}"));
        }
        // Generic quadruples meet none of the conditions.
        let (p, q) = four(t)?;
        if !commutes_by_condition(&p, &q, sigma) {
            let r = commutator_residual(&node(&p), &node(&q), &probes, pair_scale(&p, &q))?;
            t.metric("negative_residual_inverse", 1.0 / r.max(1e-300));
            t.check(r >= WITNESS, || format!("{label}: generic symbols commute (residual {r:.3e})"));
        }
    }
    Ok(())
}

pub fn p_constcomm(t: &mut Trial<'_>) -> Result<()> {
    let tol = identity_tol(t);
    let probes = probes(t);
    let p = general_pair(t)?;
    let k = Complex64::from_polar(t.rng.random_range(0.5..2.0), t.rng.random_range(0.0..TAU));
    let mut eta = t.draw("eta", ClassConstraint::None);
    if is_constant(&eta) {
        eta = eta.add(&RationalSymbol::z_pow(1));
    }
    for (label, node) in [("S", Node::paired(p.a.clone(), p.b.clone())), ("Sigma", Node::transposed(p.a.clone(), p.b.clone()))] {
        let scale = sup(&p.a) + sup(&p.b);
        let r = commutator_residual(&node, &mult(&RationalSymbol::constant(k)), &probes, scale * k.norm())?;
        t.check(r <= tol, || format!("{label} fails to commute with a constant (residual {r:.3e})"));
        let r = commutator_residual(&node, &mult(&eta), &probes, scale * sup(&eta))?;
        t.check(r >= WITNESS, || format!("{label} commutes with a nonconstant multiplier (residual {r:.3e})"));
    }
    Ok(())
}

/// `f₊` with `η f₊ ∈ H²₊`: vanishes at the poles of `η` in the disc.
fn plus_compatible(t: &mut Trial<'_>, eta: &RationalSymbol) -> RationalSymbol {
    let inside: Vec<Complex64> = eta.poles().iter().filter(|r| r.loc == crate::factor::Location::Inside).flat_map(|r| std::iter::repeat(r.value).take(r.mult as usize)).collect();
    let order0 = (-eta.num().lo().unwrap_or(0)).max(0);
    let h = t.draw("h_plus", ClassConstraint::Hinf);
    h.mul(&vanishing_at(&inside)).shift(order0)
}

/// `f₋` with `η f₋ ∈ H²₋`: vanishes at the poles of `η` outside the disc and decays fast enough at infinity.
fn minus_compatible(t: &mut Trial<'_>, eta: &RationalSymbol) -> RationalSymbol {
    let outside: Vec<Complex64> = eta.poles().iter().filter(|r| r.loc == crate::factor::Location::Outside).flat_map(|r| std::iter::repeat(r.value).take(r.mult as usize)).collect();
    let decay = outside.len() as i64 + eta.degree_at_infinity().max(0) + 1;
    let h = t.draw("h_minus", ClassConstraint::HinfBar);
    h.mul(&vanishing_at(&outside)).shift(-decay)
}

/// The four equivalent conditions for `η S f = S(η f)`, plus the commutation itself.
fn hankel_conditions(eta: &RationalSymbol, g: &RationalSymbol, tol: f64) -> Result<[bool; 4]> {
    let (gp, gm) = riesz_split(g)?;
    let (ep, em) = (eta.mul(&gp), eta.mul(&gm));
    let in_spaces = membership(&ep, SpaceTag::H2Plus) && membership(&em, SpaceTag::H2Minus);
    let eg = eta.mul(g);
    let (pp, pm) = riesz_split(&eg)?;
    let floor = sup(eta) * l2_norm(g);
    Ok([in_spaces, rel_diff(&ep, &pp, floor) <= tol, rel_diff(&em, &pm, floor) <= tol, true])
}

fn kercomm(t: &mut Trial<'_>, sigma: bool) -> Result<()> {
    let tol = 1e3 * identity_tol(t);
    let p = general_pair(t)?;
    let mut eta = t.draw("eta", ClassConstraint::None);
    if is_constant(&eta) {
        eta = eta.add(&RationalSymbol::z_pow(-1));
    }
    let mode = t.rng.random_range(0..4);
    let g = match mode {
        0 => plus_compatible(t, &eta).add(&minus_compatible(t, &eta)),
        1 => plus_compatible(t, &eta).add(&t.draw("h_minus_free", ClassConstraint::HinfBar).shift(-1)),
        2 => t.draw("h_plus_free", ClassConstraint::Hinf).add(&minus_compatible(t, &eta)),
        _ => t.draw("f", ClassConstraint::None),
    };
    let (node, f) = if sigma {
        (Node::transposed(p.a.clone(), p.b.clone()), g.div(&p.a.sub(&p.b))?)
    } else {
        (Node::paired(p.a.clone(), p.b.clone()), g.clone())
    };
    if !membership(&f, SpaceTag::L2) {
        return Ok(());
    }
    t.record("f", &f);
    let lhs = apply(&node, &eta.mul(&f))?;
    let rhs = eta.mul(&apply(&node, &f)?);
    let floor = (sup(&p.a) + sup(&p.b)) * sup(&eta) * l2_norm(&f);
    let r = rel_diff(&lhs, &rhs, floor);
    let commutes = r <= tol;
    let mut conds = hankel_conditions(&eta, &g, tol)?;
    conds[3] = commutes;
    t.note("conditions", json!({ "mode": mode, "in_spaces": conds[0], "plus": conds[1], "minus": conds[2], "commutes": commutes, "residual": r }));
    t.check(conds.iter().all(|&x| x == conds[0]), || format!("equivalent conditions disagree: {conds:?} (mode {mode}, residual {r:.3e})"));
    if mode == 0 {
        t.check(commutes, || format!("constructed element does not commute (residual {r:.3e})"));
    }
    Ok(())
}

pub fn p_kercomm_s(t: &mut Trial<'_>) -> Result<()> {
    kercomm(t, false)
}

pub fn p_kercomm_sig(t: &mut Trial<'_>) -> Result<()> {
    kercomm(t, true)
}

pub fn p_adj(t: &mut Trial<'_>) -> Result<()> {
    let a = t.draw("a", ClassConstraint::None);
    let k = Complex64::from_polar(t.rng.random_range(0.2..2.0), t.rng.random_range(0.0..TAU));
    let b = a.sub(&RationalSymbol::constant(k));
    t.record("b", &b);
    let s = op(Node::paired(a.clone(), b.clone()))?;
    let cand = op(Node::paired(a.circle_conjugate(), b.circle_conjugate()))?;
    let scale = sup(&a) + sup(&b);
    let r = adjoint_residual(&s, &cand, &monomial_probe_pairs(&s, &cand, 8))? / scale;
    t.metric("positive_residual", r);
    t.check(r <= 1e-12, || format!("a − b constant but S* differs from S_(ā,b̄) (residual {r:.3e})"));

    // a − b nonconstant: neither S_{ā,b̄} nor the only other candidate
    // S_{c,d} with c = S*(1), d = z S*(z̄) is the adjoint.
    let mut delta = t.draw("delta", ClassConstraint::None);
    if is_constant(&delta) {
        delta = delta.add(&RationalSymbol::z_pow(1));
    }
    let b2 = b.add(&delta);
    t.record("b_negative", &b2);
    let s = op(Node::paired(a.clone(), b2.clone()))?;
    let adj = op(Node::transposed(a.circle_conjugate(), b2.circle_conjugate()))?;
    let c0 = crate::operators::apply_exact(&adj, &RationalSymbol::one())?;
    let d0 = crate::operators::apply_exact(&adj, &RationalSymbol::z_pow(-1))?.shift(1);
    let scale = sup(&a) + sup(&b2);
    for (label, cand) in [("S_(ā,b̄)", Node::paired(a.circle_conjugate(), b2.circle_conjugate())), ("S_(c,d)", Node::paired(c0, d0))] {
        let cand = op(cand)?;
        let r = adjoint_residual(&s, &cand, &monomial_probe_pairs(&s, &cand, 8))? / scale;
        t.metric("negative_residual_inverse", 1.0 / r.max(1e-300));
        t.check(r >= 1e-3, || format!("a − b nonconstant but {label} matches S* (residual {r:.3e})"));
    }
    Ok(())
}

pub fn p_rank1(t: &mut Trial<'_>) -> Result<()> {
    let degenerate = t.rng.random_bool(0.2);
    let (a, b) = if degenerate {
        let a = t.draw("a", ClassConstraint::None);
        (a.clone(), a)
    } else {
        let p = general_pair(t)?;
        (p.a, p.b)
    };
    let expected = usize::from(!degenerate);
    let scale = sup(&a) + sup(&b);
    let d = a.sub(&b);
    let z = RationalSymbol::z_pow(1);
    let zb = RationalSymbol::z_pow(-1);
    for (label, node) in [("S", Node::paired(a.clone(), b.clone())), ("Sigma", Node::transposed(a.clone(), b.clone()))] {
        for (m_label, m) in [("z", &z), ("z̄", &zb)] {
            let x = op(Node::commutator(node.clone(), mult(m)))?;
            let rank = numerical_rank_scaled(&truncate(&x, 32)?, t.config.rank_tol, scale);
            t.metric("inverse_gap", 1.0 / rank.gap);
            t.check(rank.rank == expected && rank.certified, || {
                format!("[{label}, M_{m_label}]: rank {} (gap {:.3e}), expected {expected}", rank.rank, rank.gap)
            });
        }
    }
    // Closed forms of the four commutators.
    let tol = identity_tol(t);
    for f in probes(t) {
        let s = Node::paired(a.clone(), b.clone());
        let sg = Node::transposed(a.clone(), b.clone());
        let floor = scale * l2_norm(&f);
        let df = d.mul(&f);
        let cases = [
            (Node::commutator(s.clone(), mult(&z)), d.scale(fourier_coefficient(&f, -1)?)),
            (Node::commutator(s.clone(), mult(&zb)), d.neg().shift(-1).scale(fourier_coefficient(&f, 0)?)),
            (Node::commutator(sg.clone(), mult(&z)), RationalSymbol::constant(fourier_coefficient(&df, -1)?)),
            (Node::commutator(sg.clone(), mult(&zb)), RationalSymbol::z_pow(-1).scale(-fourier_coefficient(&df, 0)?)),
        ];
        for (i, (node, expected)) in cases.into_iter().enumerate() {
            let r = rel_diff(&apply(&node, &f)?, &expected, floor);
            t.metric("formula_residual", r);
            t.check(r <= tol, || format!("commutator closed form {i} residual {r:.3e}"));
        }
    }
    Ok(())
}

/// Residual of `lhs` against the product of `factors` (applied last to first), relative to the
/// largest intermediate the product passes through.
fn chain_residual(lhs: &Node, factors: &[Node], probes: &[RationalSymbol], scale: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for f in probes {
        let x = apply(lhs, f)?;
        let mut y = f.clone();
        let mut peak = scale * l2_norm(f);
        for node in factors.iter().rev() {
            y = apply(node, &y)?;
            peak = peak.max(l2_norm(&y));
        }
        worst = worst.max(rel_diff(&x, &y, peak));
    }
    Ok(worst)
}

pub fn p_equiv(t: &mut Trial<'_>) -> Result<()> {
    let tol = identity_tol(t);
    let probes = probes(t);
    let p = draw_pair(t, ClassConstraint::Invertible, ClassConstraint::Invertible)?;
    let (a, b) = (&p.a, &p.b);
    let (ai, bi) = (a.inv()?, b.inv()?);
    let q = a.mul(&bi);
    let id = mult(&RationalSymbol::one());
    let left_core = Node::sum(id.clone(), Node::compose(Node::ProjPlus, Node::compose(mult(&q), Node::ProjMinus)));
    let right = Node::compose(
        Node::difference(id, Node::compose(Node::ProjMinus, Node::compose(mult(&q), Node::ProjPlus))),
        mult(b),
    );
    let target = Node::transposed(a.clone(), b.clone());
    let scale = sup(a) + sup(b);
    let first = [left_core.clone(), mult(a), Node::paired(bi.clone(), ai.clone()), right.clone()];
    let r = chain_residual(&target, &first, &probes, scale)?;
    t.metric("residual_first", r);
    t.check(r <= tol, || format!("first equivalence residual {r:.3e}"));
    let second = [left_core, mult(&bi), Node::paired(a.clone(), b.clone()), right];
    let r = chain_residual(&target, &second, &probes, scale)?;
    t.metric("residual_second", r);
    t.check(r <= tol, || format!("second equivalence residual {r:.3e}"));
    Ok(())
}
