//! Exact kernels of Toeplitz, paired and transposed paired operators.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{wiener_hopf, Location, Root};
use crate::kernels::basis::{
    l2_norm, member_sigma, member_s, paired_residual, transposed_residual, Decision, KernelBasis, KernelStatus, Nontriviality, SymbolPair,
    WitnessCheck,
};
use crate::symbol::{membership, riesz_project, RationalSymbol, Side, SpaceTag};
use crate::tol::Tolerances;

fn eps() -> f64 {
    Tolerances::DEFAULT.eps_eq
}

fn circle_singular(g: &RationalSymbol) -> Result<bool> {
    Ok(g.has_pole_on_circle() || g.zeros()?.iter().any(|z| z.loc == Location::On))
}

/// `‖P⁺(g f)‖ / ‖g f‖`.
fn toeplitz_residual(g: &RationalSymbol, f: &RationalSymbol) -> Result<f64> {
    let gf = g.mul(f);
    let p = riesz_project(&gf, Side::Plus)?;
    Ok(if p.is_zero() { 0.0 } else { l2_norm(&p) / l2_norm(&gf) })
}

/// Kernel of the Toeplitz operator `T_g` on H²₊.
pub fn toeplitz_kernel(g: &RationalSymbol) -> Result<KernelBasis> {
    if g.is_zero() {
        return Err(Error::DegenerateSymbol("Toeplitz symbol vanishes identically".into()));
    }
    if circle_singular(g)? {
        return Ok(KernelBasis::needs_oracle("symbol has zeros or poles on the unit circle"));
    }
    let wh = wiener_hopf(g)?;
    if wh.kappa >= 0 {
        return Ok(KernelBasis::empty(format!("winding index {} >= 0", wh.kappa)));
    }
    let inv = wh.g_plus.inv()?;
    let basis: Vec<RationalSymbol> = (0..-wh.kappa).map(|j| inv.shift(j)).collect();
    let mut out = KernelBasis::exact(basis);
    for (i, f) in out.basis.iter().enumerate() {
        let r = toeplitz_residual(g, f)?;
        out.witness_checks.push(WitnessCheck { element: i, check: "P+(g f) = 0".into(), passed: r <= eps(), residual: r });
    }
    out.certificate = Some(format!("winding index {}", wh.kappa));
    Ok(out)
}

/// Kernel of `aP⁺ + bP⁻`, as pairs `(φ₊, −(a/b)φ₊)`.
pub fn paired_kernel(p: &SymbolPair) -> Result<KernelBasis> {
    let q = p.quotient()?;
    let tk = toeplitz_kernel(&q)?;
    if tk.status != KernelStatus::Exact {
        let mut out = tk;
        if out.status == KernelStatus::NeedsOracle {
            if let Some(w) = nontrivial_s(p)?.witness {
                out.basis.push(w);
                out.certificate = Some("a/b is singular on the circle; one verified element listed, dimension not enumerated".into());
            }
        }
        return Ok(out);
    }
    let mut basis = Vec::new();
    let mut pairs = Vec::new();
    for fp in &tk.basis {
        let fm = q.mul(fp).neg();
        if !membership(&fm, SpaceTag::H2Minus) {
            continue;
        }
        basis.push(fp.add(&fm));
        pairs.push((fp.clone(), fm));
    }
    let mut out = KernelBasis::exact(basis);
    out.pairs = pairs;
    for (i, f) in out.basis.iter().enumerate() {
        let r = paired_residual(f, p)?;
        out.witness_checks.push(WitnessCheck { element: i, check: "a P+f + b P-f = 0".into(), passed: r <= eps(), residual: r });
    }
    out.certificate = tk.certificate;
    Ok(out)
}

/// `Π (z - w)^m` over the zeros of `b` on the circle.
fn circle_zero_factor(b: &RationalSymbol) -> Result<(RationalSymbol, i64)> {
    let on: Vec<Root> = b.zeros()?.into_iter().filter(|z| z.loc == Location::On).collect();
    let deg = on.iter().map(|z| z.mult as i64).sum();
    Ok((RationalSymbol::from_zpk(Complex64::new(1.0, 0.0), 0, &on, &[]), deg))
}

/// Kernel of `P⁺a + P⁻b`.
///
/// Every element has the form `h/b` with `h ∈ ker T_{a/b}` and `h/b` square
/// integrable; the latter forces `h` to vanish at the zeros of `b` on the circle.
pub fn transposed_kernel(p: &SymbolPair) -> Result<KernelBasis> {
    if !p.nondegenerate {
        return Ok(KernelBasis::empty("a = b: the kernel is {f : af in H2+ and H2-} = {0}"));
    }
    let q = p.quotient()?;
    let tk = toeplitz_kernel(&q)?;
    match tk.status {
        KernelStatus::NeedsOracle => return Ok(tk),
        KernelStatus::Empty => return Ok(KernelBasis::empty(format!("ker T_(a/b) is trivial ({})", tk.certificate.unwrap_or_default()))),
        KernelStatus::Exact => {}
    }
    let n = tk.basis.len() as i64;
    let (w, deg_w) = circle_zero_factor(&p.b)?;
    if deg_w >= n {
        return Ok(KernelBasis::empty(format!(
            "b has {deg_w} zero(s) on the circle but ker T_(a/b) has dimension {n}; no element h/b is square integrable since 1/b is not in L2"
        )));
    }
    let g_inv = &tk.basis[0];
    let binv = p.b.inv()?;
    let basis: Vec<RationalSymbol> = (0..n - deg_w).map(|j| w.mul(g_inv).shift(j).mul(&binv)).collect();
    let mut out = KernelBasis::exact(basis);
    for (i, f) in out.basis.iter().enumerate() {
        let in_l2 = membership(f, SpaceTag::L2);
        let r = if in_l2 { transposed_residual(f, p)? } else { f64::INFINITY };
        let sides = in_l2 && membership(&p.a.mul(f), SpaceTag::H2Minus) && membership(&p.b.mul(f), SpaceTag::H2Plus);
        out.witness_checks.push(WitnessCheck {
            element: i,
            check: "f in L2, a f in H2-, b f in H2+".into(),
            passed: sides && r <= eps(),
            residual: r,
        });
    }
    out.certificate = Some(format!("ker T_(a/b) has dimension {n}; {deg_w} circle zero(s) of b"));
    Ok(out)
}

/// Splits `g = C z^K · M · P^{-1}` where `M` collects `(1 - α/z)^{±1}` factors for roots
/// inside or on the circle (poles only inside) and `P` collects `(z - β)^{±1}` for
/// roots outside together with circle poles.
fn canonical_split(g: &RationalSymbol) -> Result<(i64, RationalSymbol, RationalSymbol)> {
    let zeros = g.zeros()?;
    let one = Complex64::new(1.0, 0.0);
    let pick = |rs: &[Root], f: &dyn Fn(Location) -> bool| -> Vec<Root> { rs.iter().filter(|r| f(r.loc)).copied().collect() };
    let z_minus = pick(&zeros, &|l| l != Location::Outside);
    let z_plus = pick(&zeros, &|l| l == Location::Outside);
    let p_minus = pick(g.poles(), &|l| l == Location::Inside);
    let p_plus = pick(g.poles(), &|l| l != Location::Inside);
    let count = |rs: &[Root]| rs.iter().map(|r| r.mult as i64).sum::<i64>();
    let k = g.num().lo().unwrap_or(0) + count(&z_minus) - count(&p_minus);
    // M = Π(1 - α/z) / Π(1 - β/z); P = Π(z - β) / Π(z - α), gain kept in M.
    let m = RationalSymbol::from_zpk(g.num().leading(), count(&p_minus) - count(&z_minus), &z_minus, &p_minus);
    let pp = RationalSymbol::from_zpk(one, 0, &p_plus, &z_plus);
    Ok((k, m, pp))
}

/// Whether `ker S_{a,b}` is nontrivial, with the witness `O₊ − I₋O₋`.
pub fn nontrivial_s(p: &SymbolPair) -> Result<Nontriviality> {
    let q = p.quotient()?;
    let (k, m, pp) = canonical_split(&q)?;
    let singular = circle_singular(&q)?;
    if k >= 0 {
        return Ok(if singular {
            Nontriviality { decision: Decision::NeedsOracle, witness: None, certificate: format!("a/b singular on the circle, index {k}") }
        } else {
            Nontriviality { decision: Decision::False, witness: None, certificate: format!("winding index of a/b is {k} >= 0") }
        });
    }
    // a/b = z^{K+1} · (z^{-1} M) · P^{-1}: I₋ = z^{K+1}, O₋ = z^{-1} M, O₊ = P.
    let witness = pp.sub(&m.shift(k));
    if !member_s(&witness, p)? {
        return Ok(Nontriviality { decision: Decision::NeedsOracle, witness: None, certificate: "witness failed verification".into() });
    }
    Ok(Nontriviality { decision: Decision::True, witness: Some(witness), certificate: format!("a/b = I- O- O+^(-1) with I- = z^{}", k + 1) })
}

/// Whether `ker Σ_{a,b}` is nontrivial, with a verified witness.
pub fn nontrivial_sigma(p: &SymbolPair) -> Result<Nontriviality> {
    if !p.nondegenerate {
        return Err(Error::DegenerateSymbol("a = b".into()));
    }
    let k = transposed_kernel(p)?;
    Ok(match k.status {
        KernelStatus::Exact => {
            let w = k.basis[0].clone();
            if member_sigma(&w, p)? {
                Nontriviality { decision: Decision::True, witness: Some(w), certificate: k.certificate.unwrap_or_default() }
            } else {
                Nontriviality { decision: Decision::NeedsOracle, witness: None, certificate: "witness failed verification".into() }
            }
        }
        KernelStatus::Empty => Nontriviality { decision: Decision::False, witness: None, certificate: k.certificate.unwrap_or_default() },
        KernelStatus::NeedsOracle => Nontriviality { decision: Decision::NeedsOracle, witness: None, certificate: k.certificate.unwrap_or_default() },
    })
}

/// `ker S_p = ker S_q`, decided by `a b̃ = ã b` when `ker S_p` is nontrivial.
pub fn kernels_equal_s(p: &SymbolPair, q: &SymbolPair) -> Result<bool> {
    if !nontrivial_s(p)?.is_true() {
        return Err(Error::TrivialKernel);
    }
    Ok(p.a.mul(&q.b).approx_eq(&q.a.mul(&p.b), eps()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Inclusion {
    Subset,
    Equal,
    NoSubset,
    Unknown,
}

/// Compares `ker Σ_p` with `ker Σ_q`.
///
/// Both kernels are finite dimensional with exact bases, so inclusion is decided
/// elementwise on the basis of `ker Σ_p`.
pub fn sigma_inclusion(p: &SymbolPair, q: &SymbolPair) -> Result<Inclusion> {
    let kp = transposed_kernel(p)?;
    match kp.status {
        KernelStatus::Empty => return Err(Error::TrivialKernel),
        KernelStatus::NeedsOracle => return Ok(Inclusion::Unknown),
        KernelStatus::Exact => {}
    }
    for f in &kp.basis {
        if !q.nondegenerate || !member_sigma(f, q)? {
            return Ok(Inclusion::NoSubset);
        }
    }
    let kq = transposed_kernel(q)?;
    Ok(match kq.status {
        KernelStatus::NeedsOracle => Inclusion::Unknown,
        _ if kq.dimension == kp.dimension => Inclusion::Equal,
        _ => Inclusion::Subset,
    })
}

/// Basis of the model space `K_θ = H²₊ ⊖ θH²₊` for a rational inner `θ`.
pub fn model_space_basis(theta: &RationalSymbol) -> Result<KernelBasis> {
    if !membership(theta, SpaceTag::InnerPlus) {
        return Err(Error::NotInner);
    }
    let mut factors: Vec<Option<Complex64>> = vec![None; theta.num().lo().unwrap_or(0).max(0) as usize];
    for z in theta.zeros()?.iter().filter(|z| z.loc == Location::Inside) {
        for _ in 0..z.mult {
            factors.push(Some(z.value));
        }
    }
    let mut prefix = RationalSymbol::one();
    let mut basis = Vec::with_capacity(factors.len());
    for f in &factors {
        let (kernel, factor) = match f {
            None => (RationalSymbol::one(), RationalSymbol::z_pow(1)),
            Some(alpha) => {
                // 1 / (1 - conj(α) z) = -(1/conj(α)) / (z - 1/conj(α))
                let c = alpha.conj();
                let k = RationalSymbol::from_zpk(-1.0 / c, 0, &[], &[Root::new(1.0 / c, 1)]);
                (k, RationalSymbol::blaschke(*alpha))
            }
        };
        basis.push(prefix.mul(&kernel));
        prefix = prefix.mul(&factor);
    }
    let pair = SymbolPair::new(theta.circle_conjugate(), RationalSymbol::one())?;
    let mut out = KernelBasis::exact(basis);
    for (i, f) in out.basis.iter().enumerate() {
        let r = transposed_residual(f, &pair)?;
        out.witness_checks.push(WitnessCheck { element: i, check: "f in ker Sigma(conj theta, 1)".into(), passed: r <= eps(), residual: r });
    }
    Ok(out)
}
