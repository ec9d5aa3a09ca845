use proptest::prelude::*;
use treemax_core::geometry::{ball_size, enumerate_ball, sphere_size, DEFAULT_ENUMERATION_BUDGET};
use treemax_core::lorentz::{lebesgue_norm, lorentz_norm, pytlik_surrogate, weak_norm, Distributed};
use treemax_core::theory::make_ball_indicator;
use treemax_core::{FiniteFunction, LogScalar, LorentzIndex, RadialFunction, TreeParams};

fn finite(tree: TreeParams, values: &[u64]) -> FiniteFunction {
    let mut f = FiniteFunction::zero(tree);
    for (x, &v) in enumerate_ball(tree, 3, DEFAULT_ENUMERATION_BUDGET).unwrap().zip(values) {
        if v > 0 {
            f.insert(x, LogScalar::from_u64(v, tree.k())).unwrap();
        }
    }
    f
}

fn exponents() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(4.0 / 3.0), Just(2.0), Just(3.0), 1.0f64..8.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn diagonal_lorentz_is_lebesgue(values in prop::collection::vec(0u64..6, 1..22), p in exponents()) {
        let f = finite(TreeParams::new(2).unwrap(), &values);
        let a = lorentz_norm(&f, LorentzIndex::new(p, p).unwrap()).unwrap();
        // direct sum over the support; the f64 exponents p and 1/p limit the oracle
        let powered: Vec<LogScalar> = f.iter().map(|(_, v)| v.pow(p)).collect();
        let b = LogScalar::sum(&powered, 2).unwrap().pow(1.0 / p);
        prop_assert!(a.approx_eq(&b, 1e-14), "{} vs {}", a.to_sci(20), b.to_sci(20));
        prop_assert!(lebesgue_norm(&f, p).unwrap().approx_eq(&a, 1e-25));
    }

    #[test]
    fn norms_are_homogeneous(values in prop::collection::vec(0u64..6, 1..22), p in exponents(), s in exponents(), c in 1u64..1000) {
        let tree = TreeParams::new(3).unwrap();
        let f = finite(tree, &values);
        let scale = LogScalar::from_u64(c, 3);
        let g = f.scaled(&scale).unwrap();
        let idx = LorentzIndex::new(p, s).unwrap();
        let lhs = lorentz_norm(&g, idx).unwrap();
        let rhs = &scale * &lorentz_norm(&f, idx).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-25));
        let weak = weak_norm(&g, p).unwrap();
        prop_assert!(weak.approx_eq(&(&scale * &weak_norm(&f, p).unwrap()), 1e-25));
    }

    #[test]
    fn weak_norm_embeds(values in prop::collection::vec(0u64..6, 1..22), p in exponents(), s in exponents()) {
        // ||f||_{p,inf} <= (s/p)^(1/s) ||f||_{p,s}, with equality for indicators
        let f = finite(TreeParams::new(2).unwrap(), &values);
        let weak = weak_norm(&f, p).unwrap();
        let strong = lorentz_norm(&f, LorentzIndex::new(p, s).unwrap()).unwrap();
        let bound = &LogScalar::from_f64((s / p).powf(1.0 / s), 2).unwrap() * &strong;
        prop_assert!(weak.to_f64() <= bound.to_f64() * (1.0 + 1e-12));
    }

    #[test]
    fn surrogate_brackets_the_norm(values in prop::collection::vec(0u64..10, 1..25), p in exponents()) {
        // |S_n(o)| lies in [k^n, 2 k^n], so on the diagonal the surrogate is
        // within a factor 2^(1/p) of the Lebesgue norm
        let tree = TreeParams::new(2).unwrap();
        let mut values = values;
        values[0] = values[0].max(1);
        let f = RadialFunction::new(tree, values.iter().map(|&v| LogScalar::from_u64(v, 2)).collect()).unwrap();
        let idx = LorentzIndex::new(p, p).unwrap();
        let sur = pytlik_surrogate(&f, idx).unwrap();
        let exact = lorentz_norm(&f, idx).unwrap();
        prop_assert!(sur.le_at_precision(&exact));
        let upper = &sur * &LogScalar::from_u64(2, 2).pow(1.0 / p);
        prop_assert!(exact.le_at_precision(&upper));
    }
}

#[test]
fn ball_indicator_closed_forms() {
    for k in [2u32, 3] {
        let tree = TreeParams::new(k).unwrap();
        for n in [0usize, 1, 5, 20, 60] {
            let f = make_ball_indicator(tree, n);
            let size = LogScalar::from_integer(&ball_size(tree, n), k).unwrap();
            for (p, s) in [(1.0, 1.0), (2.0, 1.0), (1.5, 3.0), (4.0, 2.0)] {
                let got = lorentz_norm(&f, LorentzIndex::new(p, s).unwrap()).unwrap();
                let want = &LogScalar::from_f64((p / s).powf(1.0 / s), k).unwrap() * &size.pow(1.0 / p);
                assert!(got.approx_eq(&want, 1e-12), "k={k} n={n} p={p} s={s}");
            }
            assert!(weak_norm(&f, 2.0).unwrap().approx_eq(&size.pow(0.5), 1e-25));
        }
    }
}

#[test]
fn radial_distribution_counts_whole_spheres() {
    let tree = TreeParams::new(2).unwrap();
    let f = RadialFunction::from_f64s(tree, &[2.0, 1.0]).unwrap();
    let d = f.distribution().unwrap();
    assert_eq!(d.breakpoints.len(), 2);
    assert_eq!(d.counts[0], 1);
    assert_eq!(d.counts[1], sphere_size(tree, 1) + 1u32);
    assert_eq!(d.counts[1], 4);
}
