//! Randomized checks of the quadrature and singular-integral invariants.

use proptest::prelude::*;
use selfsim::geometry::Point;
use selfsim::kernels::{HomogeneousKernel, KernelAt, OmegaSpec};
use selfsim::measure::{integrate, integrate_complement, integrate_cylinder, FnIntegrand, ModulusSpec};
use selfsim::presets;
use selfsim::sio::{criterion, maximal_symbolic, pv_trace, truncated};
use selfsim::symbolic::{EpWord, Word};

fn word(max_letter: u16, len: std::ops::Range<usize>) -> impl Strategy<Value = Word> {
    proptest::collection::vec(1u16..=max_letter, len).prop_map(|v| Word::new(&v))
}

fn sign_kernel() -> HomogeneousKernel {
    let mt = presets::middle_thirds();
    HomogeneousKernel::new(mt.geometry(), mt.dim(), OmegaSpec::Sign).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn push_forward_identity(v in word(4, 1..4), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let fc = presets::four_corner();
        let l = (a * a + b * b).sqrt();
        let f = move |p: &Point| (a * p.0[0] + b * p.0[1]).sin();
        let s_v = fc.compose(&v).unwrap();
        let g = *fc.geometry();
        let lhs = integrate_cylinder(&fc, &FnIntegrand::new(f, ModulusSpec::Lipschitz { l }), &v, 6).unwrap();
        let pulled = FnIntegrand::new(
            move |p: &Point| f(&s_v.apply(&g, p)),
            ModulusSpec::Lipschitz { l: l * fc.compose(&v).unwrap().ratio },
        );
        let weight = fc.cell(&v).unwrap().weight;
        let rhs = integrate(&fc, &pulled, 6).unwrap().scale(weight);
        prop_assert!(lhs.agrees_with(&rhs), "{lhs:?} {rhs:?}");
    }

    #[test]
    fn complement_and_cylinder_partition(v in word(4, 1..5), a in -2.0..2.0f64) {
        let fc = presets::four_corner();
        let f = FnIntegrand::new(move |p: &Point| (a * p.0[0]).exp() * p.0[1], ModulusSpec::Lipschitz { l: a.abs().exp() * (1.0 + a.abs()) * 2f64.sqrt() });
        let whole = integrate(&fc, &f, 6).unwrap();
        let inside = integrate_cylinder(&fc, &f, &v, 5).unwrap();
        let outside = integrate_complement(&fc, &f, &v, 5).unwrap();
        prop_assert!(whole.agrees_with(&inside.add(&outside)));
    }

    #[test]
    fn refinement_stays_in_bracket(n in 0usize..7, a in -4.0..4.0f64, b in -4.0..4.0f64) {
        let mt = presets::middle_thirds();
        let f = FnIntegrand::new(move |p: &Point| (a * p.0[0]).cos() + b * p.0[0] * p.0[0], ModulusSpec::Lipschitz { l: a.abs() + 2.0 * b.abs() });
        let coarse = integrate(&mt, &f, n).unwrap();
        let fine = integrate(&mt, &f, n + 1).unwrap();
        prop_assert!((coarse.value - fine.value).abs() <= coarse.err);
    }

    #[test]
    fn trace_telescopes_with_constant_increments(period in word(2, 1..3), constant in any::<bool>()) {
        let mt = presets::middle_thirds();
        let kern = if constant {
            HomogeneousKernel::new(mt.geometry(), mt.dim(), OmegaSpec::Constant { c: 1.0 }).unwrap()
        } else {
            sign_kernel()
        };
        let w = EpWord::periodic(period.clone()).unwrap();
        let t = pv_trace(&mt, &kern, &w, 4, 8).unwrap();
        prop_assert!(t.telescoping_excess() <= 0.0);
        let p = period.len();
        for m in 0..t.rows.len() {
            let mut acc = t.rows[m].f;
            for r in &t.rows[m..] {
                acc = acc.add(&r.a);
            }
            prop_assert!(acc.agrees_with(&t.f_final));
        }
        for r in t.rows.iter().skip(p) {
            prop_assert!(r.a.agrees_with(&t.rows[r.k % p].a), "{r:?}");
        }
    }

    #[test]
    fn strong_separation_region_identity(period in word(2, 1..3), k in 1usize..4) {
        let mt = presets::middle_thirds();
        prop_assert!(mt.separation().is_strongly_separated());
        let kern = sign_kernel();
        let w = EpWord::periodic(period).unwrap();
        let x = mt.code_point(&w).unwrap();
        let v = w.prefix(k);
        let eps = mt.cell(&v).unwrap().diam;
        let ball = truncated(&mt, &kern, &x, eps, 13).unwrap();
        let cyl = integrate_complement(&mt, &KernelAt::new(&kern, x), &v, 9).unwrap();
        prop_assert!(ball.agrees_with(&cyl), "{ball:?} {cyl:?}");
    }

    #[test]
    fn criterion_scales_with_kernel(w in word(4, 1..3), c in 0.05..20.0f64) {
        let fc = presets::four_corner();
        let k = HomogeneousKernel::new(fc.geometry(), 1.0, OmegaSpec::Constant { c: 1.0 }).unwrap();
        let a = criterion(&fc, &k, &w, 4).unwrap();
        let b = criterion(&fc, &k.scaled(c).unwrap(), &w, 4).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.integral.value.signum(), b.integral.value.signum());
        prop_assert!((b.integral.value - c * a.integral.value).abs() <= 1e-12 * b.integral.value.abs());
    }

    #[test]
    fn maximal_is_monotone(period in word(2, 1..3), max_n in 2usize..6) {
        let mt = presets::middle_thirds();
        let w = EpWord::periodic(period).unwrap();
        let lo = maximal_symbolic(&mt, &sign_kernel(), &w, max_n, 7).unwrap();
        let hi = maximal_symbolic(&mt, &sign_kernel(), &w, max_n + 1, 7).unwrap();
        prop_assert!(hi.best.value.value.abs() >= lo.best.value.value.abs());
    }
}
