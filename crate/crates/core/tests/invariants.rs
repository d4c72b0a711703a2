//! Randomized invariants of the symbol algebra, factorizations, truncations and kernels.

use pairedk_core::kernels::{member_s, member_sigma, paired_kernel, transposed_kernel};
use pairedk_core::operators::truncate::truncate;
use pairedk_core::operators::{apply_exact, Node, OperatorExpression};
use pairedk_core::properties::ClassConstraint;
use pairedk_core::symbol::probe_points;
use pairedk_core::{
    fourier_coefficient, inner_outer, membership, nontrivial_s, nontrivial_sigma, riesz_project, sample_symbol, wiener_hopf, winding_index,
    Complex64, LaurentPoly, RationalSymbol, SamplerProfile, Side, SpaceTag, SymbolPair,
};
use proptest::prelude::*;

fn draw(class: ClassConstraint, seed: u64) -> RationalSymbol {
    sample_symbol(&SamplerProfile::with_class(class), seed)
}

/// Largest pointwise difference on a circle grid, relative to the larger function.
fn circle_diff(f: &RationalSymbol, g: &RationalSymbol) -> f64 {
    let (mut d, mut s) = (0.0f64, 0.0f64);
    for k in 0..512 {
        let z = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 512.0);
        let (u, v) = (f.eval(z), g.eval(z));
        d = d.max((u - v).norm());
        s = s.max(u.norm()).max(v.norm());
    }
    if d == 0.0 {
        0.0
    } else {
        d / s
    }
}

const EPS: f64 = 1e-11;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projections_split_and_are_idempotent(seed in any::<u64>()) {
        let f = draw(ClassConstraint::None, seed);
        let plus = riesz_project(&f, Side::Plus).unwrap();
        let minus = riesz_project(&f, Side::Minus).unwrap();
        prop_assert!(circle_diff(&plus.add(&minus), &f) <= EPS);
        prop_assert!(circle_diff(&riesz_project(&plus, Side::Plus).unwrap(), &plus) <= EPS);
        prop_assert!(circle_diff(&riesz_project(&minus, Side::Minus).unwrap(), &minus) <= EPS);
        let cross = riesz_project(&minus, Side::Plus).unwrap();
        prop_assert!(circle_diff(&cross, &RationalSymbol::zero()) <= EPS || cross.is_zero());
        prop_assert!(membership(&plus, SpaceTag::H2Plus));
        prop_assert!(membership(&minus, SpaceTag::H2Minus));
    }

    #[test]
    fn circle_conjugate_reflects_coefficients(seed in any::<u64>(), k in -6i64..=6) {
        let f = draw(ClassConstraint::None, seed);
        let g = f.circle_conjugate();
        prop_assert!(circle_diff(&g.circle_conjugate(), &f) <= EPS);
        let lhs = fourier_coefficient(&g, k).unwrap();
        let rhs = fourier_coefficient(&f, -k).unwrap().conj();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn analytic_symbols_have_no_minus_part(seed in any::<u64>()) {
        let f = draw(ClassConstraint::Hinf, seed);
        prop_assert!(membership(&f, SpaceTag::H2Plus));
        prop_assert!(riesz_project(&f, Side::Minus).unwrap().is_zero());
    }

    #[test]
    fn laurent_coefficients_match_lookup(terms in prop::collection::btree_map(-8i64..=8, (-3.0f64..3.0, -3.0f64..3.0), 1..8)) {
        let p = LaurentPoly::from_terms(terms.iter().map(|(&k, &(re, im))| (k, Complex64::new(re, im))));
        let f = RationalSymbol::from_laurent(p.clone());
        for k in -10..=10 {
            prop_assert!((fourier_coefficient(&f, k).unwrap() - p.coeff(k)).norm() <= 1e-14);
        }
    }

    #[test]
    fn winding_is_additive_and_odd(s1 in any::<u64>(), s2 in any::<u64>()) {
        let g = draw(ClassConstraint::Invertible, s1);
        let h = draw(ClassConstraint::Invertible, s2);
        let (wg, wh) = (winding_index(&g).unwrap(), winding_index(&h).unwrap());
        prop_assert_eq!(winding_index(&g.mul(&h)).unwrap(), wg + wh);
        prop_assert_eq!(winding_index(&g.circle_conjugate()).unwrap(), -wg);
        let wh_fact = wiener_hopf(&g).unwrap();
        prop_assert_eq!(wh_fact.kappa, wg);
        let rebuilt = wh_fact.g_minus.mul(&wh_fact.g_plus).shift(wh_fact.kappa);
        prop_assert!(circle_diff(&rebuilt, &g) <= 1e-10);
    }

    #[test]
    fn inner_outer_reassembles(seed in any::<u64>()) {
        let f = draw(ClassConstraint::Hinf, seed);
        let io = inner_outer(&f, Side::Plus).unwrap();
        prop_assert!(circle_diff(&io.inner.mul(&io.outer), &f) <= 1e-10);
        prop_assert!(membership(&io.inner, SpaceTag::InnerPlus));
        for z in probe_points(8) {
            prop_assert!((io.inner.eval(z).norm() - 1.0).abs() <= 1e-9);
        }
        for r in io.outer.zeros().unwrap() {
            prop_assert!(r.value.norm() >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn truncation_acts_exactly_on_polynomials(s1 in any::<u64>(), s2 in any::<u64>(), terms in prop::collection::btree_map(-6i64..=6, -2.0f64..2.0, 1..6)) {
        let a = draw(ClassConstraint::None, s1);
        let b = draw(ClassConstraint::None, s2);
        let f = LaurentPoly::from_real(&terms.iter().map(|(&k, &c)| (k, c)).collect::<Vec<_>>());
        for node in [Node::paired(a.clone(), b.clone()), Node::transposed(a.clone(), b.clone())] {
            let x = OperatorExpression::new(node).unwrap();
            let t = truncate(&x, 32).unwrap();
            let exact = apply_exact(&x, &RationalSymbol::from_laurent(f.clone())).unwrap();
            let approx = t.apply(&f);
            let (lo, hi) = t.out_window;
            let scale = approx.max_abs().max(1e-300);
            for k in lo..=hi {
                let e = fourier_coefficient(&exact, k).unwrap();
                prop_assert!((e - approx.coeff(k)).norm() <= 1e-10 * scale.max(1.0), "coefficient {} differs", k);
            }
        }
    }

    #[test]
    fn coburn_dichotomies(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = draw(ClassConstraint::None, s1);
        let b = draw(ClassConstraint::None, s2);
        let p = SymbolPair::new(a, b).unwrap();
        let q = p.swapped();
        prop_assert!(!(nontrivial_s(&p).unwrap().is_true() && nontrivial_s(&q).unwrap().is_true()));
        prop_assert!(!(nontrivial_sigma(&p).unwrap().is_true() && nontrivial_sigma(&q).unwrap().is_true()));
        if nontrivial_sigma(&p).unwrap().is_true() {
            prop_assert!(nontrivial_s(&p).unwrap().is_true());
        }
    }

    #[test]
    fn kernel_elements_pass_membership(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let a = draw(ClassConstraint::None, s1);
        let b = draw(ClassConstraint::None, s2);
        let p = SymbolPair::new(a, b).unwrap();
        for f in &paired_kernel(&p).unwrap().basis {
            prop_assert!(member_s(f, &p).unwrap());
            prop_assert!(!riesz_project(f, Side::Plus).unwrap().is_zero());
            prop_assert!(!riesz_project(f, Side::Minus).unwrap().is_zero());
        }
        for f in &transposed_kernel(&p).unwrap().basis {
            prop_assert!(member_sigma(f, &p).unwrap());
        }
        // Multiplying both symbols by the same invertible η leaves the paired kernel alone.
        let eta = draw(ClassConstraint::Invertible, s3);
        let q = SymbolPair::new(p.a.mul(&eta), p.b.mul(&eta)).unwrap();
        for f in &paired_kernel(&p).unwrap().basis {
            prop_assert!(member_s(f, &q).unwrap());
        }
    }
}
