use pairedk_core::kernels::*;
use pairedk_core::operators::expr::{Node, OperatorExpression};
use pairedk_core::{Complex64, LaurentPoly, RationalSymbol, Root};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn lp(terms: &[(i64, f64)]) -> RationalSymbol {
    RationalSymbol::from_laurent(LaurentPoly::from_real(terms))
}

fn z(k: i64) -> RationalSymbol {
    RationalSymbol::z_pow(k)
}

fn pair(a: RationalSymbol, b: RationalSymbol) -> SymbolPair {
    SymbolPair::new(a, b).unwrap()
}

/// a = 1 + 1/z, b = z + 1.
fn circle_pair() -> SymbolPair {
    pair(lp(&[(0, 1.0), (-1, 1.0)]), lp(&[(1, 1.0), (0, 1.0)]))
}

fn simple(p: f64) -> Root {
    Root::new(c(p), 1)
}

#[test]
fn membership_in_paired_kernel() {
    let p = circle_pair();
    let f = lp(&[(0, 1.0), (-1, -1.0)]);
    assert!(member_s(&f, &p).unwrap());
    assert_eq!(paired_residual(&f, &p).unwrap(), 0.0);
    assert!(!member_s(&RationalSymbol::one(), &p).unwrap());
    let h = RationalSymbol::from_zpk(c(1.0), 0, &[simple(2.0)], &[simple(3.0)]);
    assert!(!member_s(&h, &p).unwrap());
}

#[test]
fn membership_in_transposed_kernel() {
    assert!(member_sigma(&z(1), &pair(z(-2), RationalSymbol::one())).unwrap());
    assert!(!member_sigma(&lp(&[(0, 1.0), (-1, -1.0)]), &circle_pair()).unwrap());
    assert!(member_sigma(&z(-1), &pair(RationalSymbol::one(), z(2))).unwrap());
}

#[test]
fn pole_on_circle_rejected() {
    let f = RationalSymbol::from_zpk(c(1.0), 0, &[], &[simple(1.0)]);
    assert!(member_s(&f, &circle_pair()).is_err());
}

#[test]
fn toeplitz_kernel_follows_index() {
    let g = RationalSymbol::from_zpk(c(1.0), -2, &[simple(3.0)], &[simple(0.5)]);
    let k = toeplitz_kernel(&g).unwrap();
    // lo = -2 with one inside pole: index -3.
    assert_eq!(k.status, KernelStatus::Exact);
    assert_eq!(k.dimension, Some(3));
    assert!(k.all_checks_pass());
    assert_eq!(toeplitz_kernel(&z(1)).unwrap().status, KernelStatus::Empty);
    assert_eq!(toeplitz_kernel(&lp(&[(0, 1.0), (1, 1.0)])).unwrap().status, KernelStatus::NeedsOracle);
    assert!(toeplitz_kernel(&RationalSymbol::zero()).is_err());
}

#[test]
fn paired_kernel_of_shift_pair() {
    let k = paired_kernel(&pair(RationalSymbol::one(), z(1))).unwrap();
    assert_eq!(k.dimension, Some(1));
    let f = &k.basis[0];
    let expected = lp(&[(0, 1.0), (-1, -1.0)]);
    assert!(f.approx_eq(&expected, 1e-12));
    assert!(k.all_checks_pass());
}

#[test]
fn paired_kernel_after_circle_cancellation() {
    // a/b reduces to 1/z, so the circle zeros cancel and the kernel is enumerable.
    let k = paired_kernel(&circle_pair()).unwrap();
    assert_eq!(k.status, KernelStatus::Exact);
    assert_eq!(k.dimension, Some(1));
    assert!(k.basis[0].approx_eq(&lp(&[(0, 1.0), (-1, -1.0)]), 1e-12));
}

#[test]
fn paired_kernel_singular_quotient_lists_witness() {
    // a/b = (z + 1)/z² keeps its circle zero.
    let p = pair(lp(&[(0, 1.0), (1, 1.0)]), z(2));
    let k = paired_kernel(&p).unwrap();
    assert_eq!(k.status, KernelStatus::NeedsOracle);
    assert_eq!(k.dimension, None);
    assert!(member_s(&k.basis[0], &p).unwrap());
}

#[test]
fn transposed_kernel_circle_pair_is_trivial() {
    let k = transposed_kernel(&circle_pair()).unwrap();
    assert_eq!(k.status, KernelStatus::Empty);
    assert!(k.certificate.unwrap().contains("1/b"));
}

#[test]
fn transposed_kernel_model_space() {
    let k = transposed_kernel(&pair(z(-2), RationalSymbol::one())).unwrap();
    assert_eq!(k.dimension, Some(2));
    assert!(k.all_checks_pass());
    assert!(k.basis[0].approx_eq(&RationalSymbol::one(), 1e-12));
    assert!(k.basis[1].approx_eq(&z(1), 1e-12));
}

#[test]
fn transposed_kernel_degenerate_pair() {
    let a = lp(&[(0, 2.0), (1, 1.0)]);
    let k = transposed_kernel(&pair(a.clone(), a)).unwrap();
    assert_eq!(k.status, KernelStatus::Empty);
}

#[test]
fn nontriviality_of_paired_kernels() {
    let r = nontrivial_s(&pair(RationalSymbol::one(), z(3))).unwrap();
    assert_eq!(r.decision, Decision::True);
    assert!(r.witness.unwrap().approx_eq(&lp(&[(0, 1.0), (-3, -1.0)]), 1e-12));
    assert_eq!(nontrivial_s(&pair(z(1), RationalSymbol::one())).unwrap().decision, Decision::False);
    let r = nontrivial_s(&circle_pair()).unwrap();
    assert_eq!(r.decision, Decision::True);
    assert!(r.witness.unwrap().approx_eq(&lp(&[(0, 1.0), (-1, -1.0)]), 1e-12));
}

#[test]
fn nontriviality_of_transposed_kernels() {
    let r = nontrivial_sigma(&pair(z(-2), RationalSymbol::one())).unwrap();
    assert_eq!(r.decision, Decision::True);
    assert!(r.witness.unwrap().approx_eq(&RationalSymbol::one(), 1e-12));
    assert_eq!(nontrivial_sigma(&circle_pair()).unwrap().decision, Decision::False);
}

#[test]
fn transposed_kernel_with_disc_zero_of_b() {
    // (1, z − 1/2): a/b has a pole inside, so ker T_(a/b) = span{1} and 1/(z − 1/2)
    // is a square integrable element of the transposed kernel.
    let b = RationalSymbol::from_zpk(c(1.0), 0, &[simple(0.5)], &[]);
    let p = pair(RationalSymbol::one(), b);
    let r = nontrivial_sigma(&p).unwrap();
    assert_eq!(r.decision, Decision::True);
    let w = r.witness.unwrap();
    assert!(w.approx_eq(&RationalSymbol::from_zpk(c(1.0), 0, &[], &[simple(0.5)]), 1e-12));
    let x = OperatorExpression::new(Node::transposed(p.a.clone(), p.b.clone())).unwrap();
    let o = kernel_oracle(&x, 64, 1e-10).unwrap();
    assert_eq!(o.dimension, 1);
    assert!(oracle_angle(&o, &[w]).unwrap() < 1e-7);
}

#[test]
fn kernel_equality() {
    let eta = lp(&[(1, 1.0), (0, 2.0)]);
    let p = pair(RationalSymbol::one(), z(1));
    assert!(kernels_equal_s(&p, &pair(eta.clone(), eta.mul(&z(1)))).unwrap());
    assert!(!kernels_equal_s(&p, &pair(RationalSymbol::one(), z(2))).unwrap());
    assert!(kernels_equal_s(&circle_pair(), &p).unwrap());
    assert!(kernels_equal_s(&pair(z(1), RationalSymbol::one()), &p).is_err());
}

#[test]
fn construction_from_function() {
    let p = symbols_from_function(&RationalSymbol::one(), &z(-1)).unwrap();
    assert!(p.a.approx_eq(&RationalSymbol::one(), 1e-12));
    assert!(p.b.approx_eq(&z(1).neg(), 1e-12));
    assert!(symbols_from_function(&z(1), &RationalSymbol::zero()).is_err());
    let fp = RationalSymbol::from_zpk(c(1.0), 0, &[], &[simple(2.0)]);
    let p = symbols_from_function(&fp, &z(-1)).unwrap();
    assert!(member_s(&fp.add(&z(-1)), &p).unwrap());
    assert!(symbols_from_function(&z(-1), &z(-1)).is_err());
}

#[test]
fn j_map_both_directions() {
    let p = pair(z(-2), RationalSymbol::one());
    let out = j_map(&RationalSymbol::one(), &p, false, None, None).unwrap();
    assert!(out.approx_eq(&lp(&[(-2, 1.0), (0, -1.0)]), 1e-12));
    assert!(member_s(&out, &p).unwrap());
    let back = j_map(&out, &p, true, None, None).unwrap();
    assert!(back.approx_eq(&RationalSymbol::one(), 1e-12));

    let q = pair(RationalSymbol::one(), z(1));
    let phi = lp(&[(0, 1.0), (-1, -1.0)]);
    let one = RationalSymbol::one();
    let zero = RationalSymbol::zero();
    let psi = j_map(&phi, &q, true, Some(&one), Some(&zero)).unwrap();
    assert!(psi.approx_eq(&z(-1).neg(), 1e-12));
    assert!(member_sigma(&psi, &q).unwrap());
    assert!(j_map(&z(5), &p, false, None, None).is_err());
    assert!(j_map(&phi, &q, true, Some(&one), Some(&one)).is_err());
}

#[test]
fn inclusion_of_transposed_kernels() {
    let p = pair(z(-2), RationalSymbol::one());
    let q = pair(z(-1), RationalSymbol::one());
    assert_eq!(sigma_inclusion(&q, &p).unwrap(), Inclusion::Subset);
    assert_eq!(sigma_inclusion(&p, &q).unwrap(), Inclusion::NoSubset);
    let strict = pair(z(-3), z(1));
    assert_eq!(sigma_inclusion(&p, &strict).unwrap(), Inclusion::Subset);
    let h_minus = lp(&[(0, 1.0), (-1, 0.5)]);
    let h_plus = lp(&[(1, 1.0), (0, 2.0)]);
    let outer = pair(z(-2).mul(&h_minus), h_plus);
    assert_eq!(sigma_inclusion(&p, &outer).unwrap(), Inclusion::Equal);
    assert!(sigma_inclusion(&pair(z(1), RationalSymbol::one()), &p).is_err());
}

#[test]
fn model_spaces() {
    let k = model_space_basis(&z(3)).unwrap();
    assert_eq!(k.dimension, Some(3));
    for (j, f) in k.basis.iter().enumerate() {
        assert!(f.approx_eq(&z(j as i64), 1e-12));
    }
    let b = RationalSymbol::blaschke(c(0.5));
    let k = model_space_basis(&b).unwrap();
    assert_eq!(k.dimension, Some(1));
    assert!(k.all_checks_pass());
    let k = model_space_basis(&z(1).mul(&b)).unwrap();
    assert_eq!(k.dimension, Some(2));
    assert!(k.all_checks_pass());
    assert!(k.basis[0].approx_eq(&RationalSymbol::one(), 1e-12));
    let second = RationalSymbol::from_zpk(c(-2.0), 1, &[], &[simple(2.0)]);
    assert!(k.basis[1].approx_eq(&second, 1e-12));
    assert!(model_space_basis(&lp(&[(0, 1.0), (1, 1.0)])).is_err());
}

#[test]
fn oracle_examples() {
    let paired = OperatorExpression::new(Node::paired(RationalSymbol::one(), z(1))).unwrap();
    let o = kernel_oracle(&paired, 64, 1e-10).unwrap();
    assert_eq!(o.dimension, 1);
    assert!(oracle_angle(&o, &[lp(&[(0, 1.0), (-1, -1.0)])]).unwrap() < 1e-8);

    let p = circle_pair();
    let t = OperatorExpression::new(Node::transposed(p.a.clone(), p.b.clone())).unwrap();
    assert_eq!(kernel_oracle(&t, 64, 1e-10).unwrap().dimension, 0);
    let s = OperatorExpression::new(Node::paired(p.a.clone(), p.b.clone())).unwrap();
    assert!(kernel_oracle(&s, 64, 1e-10).unwrap().dimension >= 1);

    let toe = OperatorExpression::new(Node::Toeplitz(z(1))).unwrap();
    assert_eq!(kernel_oracle(&toe, 64, 1e-10).unwrap().dimension, 0);
}

#[test]
fn oracle_matches_toeplitz_kernel_with_tails() {
    let g = RationalSymbol::from_zpk(c(1.0), -2, &[simple(1.3)], &[simple(0.75)]);
    let exact = toeplitz_kernel(&g).unwrap();
    let x = OperatorExpression::new(Node::Toeplitz(g)).unwrap();
    let o = kernel_oracle(&x, 64, 1e-10).unwrap();
    assert_eq!(Some(o.dimension), exact.dimension);
    assert!(o.gap >= 1e3);
    assert!(oracle_angle(&o, &exact.basis).unwrap() < 1e-7);
}
